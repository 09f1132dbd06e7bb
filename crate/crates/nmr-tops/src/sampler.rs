//! Seeded random streams, uniform sampling on products of spheres, generic
//! rejection sampling against a stated bound, and mean/standard-error
//! estimators.
//!
//! Streams are derived from a master seed plus a (purpose, gate, particle)
//! label by keying a ChaCha generator with the packed label. Distinct labels
//! give independent streams and identical labels replay identical sequences,
//! so results never depend on how work is partitioned across threads.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::quantum::CMatrix;
use crate::tops::SpinConfig;

/// Stream label namespaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    /// Ensemble initialization draws.
    Init,
    /// Per-gate transition draws.
    Gate,
    /// Random-chain circuit construction.
    Chain,
    /// Monte Carlo quadrature.
    Quadrature,
    /// Self-test and verification draws.
    Verify,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Init => 1,
            Purpose::Gate => 2,
            Purpose::Chain => 3,
            Purpose::Quadrature => 4,
            Purpose::Verify => 5,
        }
    }
}

/// Master seed with derived, reproducible substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    master: u64,
}

impl SeedSpec {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// The stream keyed by (purpose, gate index, particle index).
    pub fn stream(&self, purpose: Purpose, gate: u64, particle: u64) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[0..8].copy_from_slice(&self.master.to_le_bytes());
        seed[8..16].copy_from_slice(&purpose.tag().to_le_bytes());
        seed[16..24].copy_from_slice(&gate.to_le_bytes());
        seed[24..32].copy_from_slice(&particle.to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }
}

/// One point uniform on the unit sphere: cos(theta) uniform in [-1, 1], phi
/// uniform in [0, 2pi).
pub fn uniform_unit_vector(rng: &mut impl Rng) -> Vector3<f64> {
    let u: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - u * u).max(0.0).sqrt();
    Vector3::new(s * phi.cos(), s * phi.sin(), u)
}

/// One top per qubit, each uniform on its sphere.
pub fn uniform_sphere_config(n_qubits: usize, rng: &mut impl Rng) -> SpinConfig {
    SpinConfig::from_vectors_unchecked((0..n_qubits).map(|_| uniform_unit_vector(rng)).collect())
}

/// Haar-random SU(2) element (uniform unit quaternion).
pub fn random_su2(rng: &mut impl Rng) -> Matrix2<Complex64> {
    let mut q = [0.0f64; 4];
    loop {
        let mut norm2 = 0.0;
        for v in q.iter_mut() {
            *v = StandardNormal.sample(rng);
            norm2 += *v * *v;
        }
        if norm2 > 1e-12 {
            let n = norm2.sqrt();
            for v in q.iter_mut() {
                *v /= n;
            }
            break;
        }
    }
    // U = q0 I + i (q1 sx + q2 sy + q3 sz)
    Matrix2::new(
        Complex64::new(q[0], q[3]),
        Complex64::new(q[2], q[1]),
        Complex64::new(-q[2], q[1]),
        Complex64::new(q[0], -q[3]),
    )
}

/// Haar-random unitary of the given dimension: QR of a complex Ginibre
/// matrix with the R-diagonal phases absorbed.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase.conj();
        }
    }
    q
}

/// Result of one accepted rejection-sampling draw.
#[derive(Debug, Clone)]
pub struct RejectionSample {
    pub config: SpinConfig,
    /// Proposals consumed, acceptance included.
    pub attempts: u64,
}

/// Acceptance-rate floor; falling below it signals a misconfigured bound,
/// not bad luck.
pub const ACCEPTANCE_FLOOR: f64 = 1e-4;
/// Proposals allowed per draw before declaring the floor breached. At the
/// floor rate the chance of a false alarm is below 1e-8 per draw.
const MAX_ATTEMPTS: u64 = 200_000;
/// Relative slack on the bound check, absorbing round-off in density
/// evaluations near the supremum.
const BOUND_SLACK: f64 = 1e-9;
/// Densities below this are treated as a correctness bug rather than noise.
const NEGATIVE_TOL: f64 = -1e-12;

/// Draws one spin configuration distributed proportionally to `density`,
/// using uniform proposals on (S^2)^N under the stated upper `bound`.
///
/// Any observed density above the bound or below zero aborts: the bound is
/// an analytic guarantee, so a violation is a correctness bug in the caller.
pub fn rejection_sample(
    n_qubits: usize,
    density: impl Fn(&SpinConfig) -> f64,
    bound: f64,
    rng: &mut impl Rng,
) -> Result<RejectionSample> {
    if !(bound > 0.0) {
        return Err(Error::Config(format!("nonpositive rejection bound {bound}")));
    }
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        let config = uniform_sphere_config(n_qubits, rng);
        let d = density(&config);
        if d < NEGATIVE_TOL {
            return Err(Error::NegativeDensity(d));
        }
        if d > bound * (1.0 + BOUND_SLACK) {
            return Err(Error::BoundViolation { density: d, bound });
        }
        if rng.random::<f64>() * bound < d {
            return Ok(RejectionSample { config, attempts });
        }
        if attempts >= MAX_ATTEMPTS {
            return Err(Error::AcceptanceFloor {
                floor: ACCEPTANCE_FLOOR,
                attempts,
            });
        }
    }
}

/// Sample mean and standard error (unbiased sample standard deviation over
/// sqrt(n)).
pub fn mc_mean_stderr(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::Config(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    let stderr = (ss / (n - 1.0)).sqrt() / n.sqrt();
    Ok((mean, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::unitarity_deviation;
    use crate::tops;

    #[test]
    fn sphere_moments() {
        let seeds = SeedSpec::new(2024);
        let mut rng = seeds.stream(Purpose::Verify, 0, 0);
        let n = 1_000_000usize;
        let mut sum = Vector3::zeros();
        let mut sum_z2 = 0.0;
        for _ in 0..n {
            let v = uniform_unit_vector(&mut rng);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            sum += v;
            sum_z2 += v.z * v.z;
        }
        let mean = sum / n as f64;
        // SE of each component is sqrt(1/3)/sqrt(n).
        let se = (1.0f64 / 3.0).sqrt() / (n as f64).sqrt();
        for k in 0..3 {
            assert!(mean[k].abs() < 4.0 * se, "component {k} mean {}", mean[k]);
        }
        // E[z^2] = 1/3; Var(z^2) = 1/5 - 1/9 = 4/45.
        let mean_z2 = sum_z2 / n as f64;
        let se_z2 = (4.0f64 / 45.0).sqrt() / (n as f64).sqrt();
        assert!((mean_z2 - 1.0 / 3.0).abs() < 4.0 * se_z2);
    }

    #[test]
    fn streams_replay_and_separate() {
        let seeds = SeedSpec::new(99);
        let a: Vec<f64> = {
            let mut r = seeds.stream(Purpose::Gate, 3, 17);
            (0..16).map(|_| r.random()).collect()
        };
        let b: Vec<f64> = {
            let mut r = seeds.stream(Purpose::Gate, 3, 17);
            (0..16).map(|_| r.random()).collect()
        };
        assert_eq!(a, b, "identical labels must replay");

        let c: Vec<f64> = {
            let mut r = seeds.stream(Purpose::Gate, 3, 18);
            (0..16).map(|_| r.random()).collect()
        };
        assert_ne!(a, c, "distinct labels must differ");
    }

    #[test]
    fn rejection_uniform_density_accepts_every_proposal() {
        let seeds = SeedSpec::new(5);
        let mut rng = seeds.stream(Purpose::Verify, 1, 0);
        let norm = tops::inv_four_pi_pow(2);
        for _ in 0..200 {
            let s = rejection_sample(2, |_| norm, norm, &mut rng).unwrap();
            assert_eq!(s.attempts, 1);
        }
    }

    #[test]
    fn rejection_detects_bound_violation() {
        let seeds = SeedSpec::new(6);
        let mut rng = seeds.stream(Purpose::Verify, 2, 0);
        let err = rejection_sample(1, |_| 2.0, 1.0, &mut rng).unwrap_err();
        assert!(matches!(err, Error::BoundViolation { .. }));

        let err = rejection_sample(1, |_| -1.0, 1.0, &mut rng).unwrap_err();
        assert!(matches!(err, Error::NegativeDensity(_)));
    }

    /// N = 1 oracle: density (1 + u)/(4 pi) in the polar coordinate u has
    /// marginal CDF (1 + u)^2 / 4. Kolmogorov-Smirnov at the 1% level.
    #[test]
    fn rejection_matches_analytic_cdf() {
        let seeds = SeedSpec::new(7);
        let mut rng = seeds.stream(Purpose::Verify, 3, 0);
        let density = |cfg: &SpinConfig| (1.0 + cfg.vectors()[0].z) / (4.0 * std::f64::consts::PI);
        let bound = 2.0 / (4.0 * std::f64::consts::PI);
        let n = 100_000usize;
        let mut us: Vec<f64> = (0..n)
            .map(|_| {
                rejection_sample(1, density, bound, &mut rng)
                    .unwrap()
                    .config
                    .vectors()[0]
                    .z
            })
            .collect();
        us.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, u) in us.iter().enumerate() {
            let f = (1.0 + u) * (1.0 + u) / 4.0;
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((f - lo).abs()).max((f - hi).abs());
        }
        let critical = 1.628 / (n as f64).sqrt(); // 1% level
        assert!(ks < critical, "KS statistic {ks} over critical {critical}");
    }

    #[test]
    fn mean_stderr_examples() {
        assert_eq!(mc_mean_stderr(&[1.0, 1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
        assert_eq!(mc_mean_stderr(&[0.0, 2.0]).unwrap(), (1.0, 1.0));
        assert!(mc_mean_stderr(&[1.0]).is_err());

        let seeds = SeedSpec::new(8);
        let mut rng = seeds.stream(Purpose::Verify, 4, 0);
        let zs: Vec<f64> = (0..1_000_000)
            .map(|_| uniform_unit_vector(&mut rng).z)
            .collect();
        let (mean, se) = mc_mean_stderr(&zs).unwrap();
        assert!(mean.abs() < 4.0 * se);
        assert!((se - 0.577e-3).abs() < 0.05e-3);
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let seeds = SeedSpec::new(9);
        let mut rng = seeds.stream(Purpose::Verify, 5, 0);
        for dim in [2usize, 4, 8] {
            for _ in 0..50 {
                let u = random_unitary(dim, &mut rng);
                assert!(unitarity_deviation(&u) < 1e-12);
            }
        }
        for _ in 0..200 {
            let v = random_su2(&mut rng);
            let u = crate::quantum::to_dmatrix(&v);
            assert!(unitarity_deviation(&u) < 1e-12);
        }
    }
}
