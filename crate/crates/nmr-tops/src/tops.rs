//! Classical tops representation of quantum states.
//!
//! A pure product state of N qubits is a configuration of N classical tops,
//! one unit vector per qubit. The projectors `P1` onto such states form an
//! overcomplete operator basis; the dual probes `Q1` assign every density
//! operator the expansion density `w_rho(n) = tr(rho Q1(n))` over top
//! configurations. Whenever that density is nonnegative the state is
//! separable and behaves exactly like a classical ensemble of spinning tops.
//!
//! All densities carry the full `(4 pi)^-N` solid-angle normalization.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quantum::{
    c, cr, trace_product, CMatrix, DensityOperator, ModelParams, PauliString,
};
use crate::sampler::{self, Purpose, SeedSpec};

/// Unit-norm tolerance for top vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Largest counter ceiling ever scheduled; reached only when epsilon is zero
/// or absurdly small.
pub const K_CAP: u32 = 64;

/// One classical top per qubit: a list of unit 3-vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinConfig {
    vectors: Vec<Vector3<f64>>,
}

impl SpinConfig {
    pub fn new(vectors: Vec<Vector3<f64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidSpinConfig("no tops".into()));
        }
        for (j, v) in vectors.iter().enumerate() {
            if (v.norm() - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidSpinConfig(format!(
                    "top {j} has norm {}",
                    v.norm()
                )));
            }
        }
        Ok(Self { vectors })
    }

    pub(crate) fn from_vectors_unchecked(vectors: Vec<Vector3<f64>>) -> Self {
        Self { vectors }
    }

    /// All tops along the same (normalized) direction.
    pub fn aligned(n_qubits: usize, direction: Vector3<f64>) -> Self {
        let v = direction.normalize();
        Self {
            vectors: vec![v; n_qubits],
        }
    }

    pub fn plus_z(n_qubits: usize) -> Self {
        Self::aligned(n_qubits, Vector3::new(0.0, 0.0, 1.0))
    }

    pub fn n_qubits(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector3<f64>] {
        &self.vectors
    }
}

/// Mixing parameter restricted to (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::ThetaRange(value))
        }
    }

    pub const fn one() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// (4 pi)^-n
pub fn inv_four_pi_pow(n_qubits: usize) -> f64 {
    (4.0 * PI).powi(-(n_qubits as i32))
}

/// I + scale * (v . sigma)
fn bloch_factor(v: &Vector3<f64>, scale: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        cr(1.0 + scale * v.z),
        c(scale * v.x, -scale * v.y),
        c(scale * v.x, scale * v.y),
        cr(1.0 - scale * v.z),
    )
}

/// norm * (I + coef * n_j . sigma) tensored over all qubits.
fn tensor_bloch(config: &SpinConfig, coef: f64, norm: f64) -> CMatrix {
    let mut m = CMatrix::identity(1, 1);
    for v in &config.vectors {
        let f = bloch_factor(v, coef) * cr(norm);
        m = m.kronecker(&crate::quantum::to_dmatrix(&f));
    }
    m
}

/// The pure product state with tops `n`: `2^-N (I + n_1.sigma) x ... `.
pub fn p1_operator(config: &SpinConfig) -> DensityOperator {
    let m = tensor_bloch(config, 1.0, 0.5);
    DensityOperator::from_matrix_unchecked(config.n_qubits(), m)
}

/// The dual probe `(4 pi)^-N (I + 3 n_1.sigma) x ...`. Hermitian but not a
/// state: its per-qubit eigenvalues are (1 +- 3)/(4 pi).
pub fn q1_operator(config: &SpinConfig) -> CMatrix {
    tensor_bloch(config, 3.0, 1.0 / (4.0 * PI))
}

/// (1 - theta) M + theta P1(n).
pub fn p_theta(config: &SpinConfig, theta: Theta) -> DensityOperator {
    let n = config.n_qubits();
    let t = theta.value();
    let m = DensityOperator::maximally_mixed(n);
    let p1 = p1_operator(config);
    DensityOperator::from_matrix_unchecked(n, m.matrix() * cr(1.0 - t) + p1.matrix() * cr(t))
}

/// (1 - 1/theta) (4 pi)^-N I + (1/theta) Q1(n).
pub fn q_theta(config: &SpinConfig, theta: Theta) -> CMatrix {
    let n = config.n_qubits();
    let dim = 1usize << n;
    let t_inv = 1.0 / theta.value();
    CMatrix::identity(dim, dim) * cr((1.0 - t_inv) * inv_four_pi_pow(n))
        + q1_operator(config) * cr(t_inv)
}

/// Expansion density `w_rho(n) = tr(rho Q1(n))`. May be negative; for
/// pseudopure states with `epsilon <= eta` it is bounded below by
/// `(1 - epsilon/eta) (4 pi)^-N >= 0`.
pub fn w_rho(rho: &DensityOperator, config: &SpinConfig) -> f64 {
    assert_eq!(rho.n_qubits(), config.n_qubits(), "qubit count mismatch");
    trace_product(rho.matrix(), &q1_operator(config)).re
}

/// Counter-indexed expansion density `w_k_rho(a) = tr(rho Q_{eta_k}(a))`.
///
/// Evaluated through the linearity of the trace in the two `Q_theta` terms,
/// which keeps round-off small even when `eta_k` is tiny.
pub fn w_k_rho(rho: &DensityOperator, config: &SpinConfig, k: u32, params: &ModelParams) -> f64 {
    let n = rho.n_qubits();
    let theta = theta_schedule(k, params);
    let t_inv = 1.0 / theta;
    let trace_rho = rho.matrix().trace().re;
    (1.0 - t_inv) * inv_four_pi_pow(n) * trace_rho + t_inv * w_rho(rho, config)
}

/// eta = 1 / (1 + 2^(2N-1)): the separability threshold for pseudopure
/// states and the per-gate contraction factor of the classical kernels.
pub fn eta_of(n_qubits: usize) -> f64 {
    assert!(
        (1..=31).contains(&n_qubits),
        "eta_of defined for 1..=31 qubits"
    );
    1.0 / (1.0 + (1u64 << (2 * n_qubits - 1)) as f64)
}

/// eta^m by repeated multiplication, so thresholds and schedules agree
/// bit for bit everywhere they are compared.
pub fn eta_pow(eta: f64, m: u32) -> f64 {
    let mut p = 1.0;
    for _ in 0..m {
        p *= eta;
    }
    p
}

/// Largest K with `epsilon <= eta^(K+1)`, capped at `K_CAP`; `None` when
/// even K = 0 fails (epsilon > eta).
pub fn k_from_epsilon(eta: f64, epsilon: f64) -> Option<u32> {
    if epsilon > eta {
        return None;
    }
    let mut k = 0u32;
    let mut threshold = eta; // eta^(k+1)
    while k < K_CAP && epsilon <= threshold * eta {
        k += 1;
        threshold *= eta;
    }
    Some(k)
}

/// The schedule `eta_k`: `eta^(K-k)` for `k < K`, then 1. Nondecreasing in k
/// and equal to 1 from k = K on.
pub fn theta_schedule(k: u32, params: &ModelParams) -> f64 {
    let ceiling = params.k_max().unwrap_or(0);
    if k >= ceiling {
        1.0
    } else {
        eta_pow(params.eta(), ceiling - k)
    }
}

/// The counter ceiling K; the hidden model needs `epsilon <= eta^2`
/// (i.e. K >= 1) and this reports the violation as an error.
pub fn max_lossless_gates(params: &ModelParams) -> Result<u32> {
    params.require_hidden()
}

/// Product of the selected top components: `tr(P1(n) sigma_b1 x ... ) =
/// (n_1)_{b1} ... (n_N)_{bN}` with component 0 defined as 1.
pub fn classical_expectation(config: &SpinConfig, p: &PauliString) -> f64 {
    assert_eq!(config.n_qubits(), p.n_qubits(), "qubit count mismatch");
    config
        .vectors
        .iter()
        .zip(p.betas())
        .map(|(v, &b)| match b {
            0 => 1.0,
            1 => v.x,
            2 => v.y,
            3 => v.z,
            _ => unreachable!(),
        })
        .product()
}

// ---------------------------------------------------------------------------
// Reconstruction quadrature
// ---------------------------------------------------------------------------

/// Quadrature rule over (S^2)^N.
#[derive(Debug, Clone)]
pub enum Quadrature {
    /// Product grid per sphere: Gauss-Legendre in cos(theta) times a uniform
    /// azimuthal grid. Exact for the low-degree polynomial integrands of the
    /// tops representation; the grid size grows as (polar*azimuthal)^N.
    Grid { polar: usize, azimuthal: usize },
    /// Uniform Monte Carlo sampling with the given budget.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Result of a reconstruction; the Frobenius standard error is estimated for
/// Monte Carlo quadrature only.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub matrix: CMatrix,
    pub stderr_frobenius: Option<f64>,
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut rules = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rules.push((x, w));
    }
    rules.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rules
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Deterministic product-grid points and weights over (S^2)^N. Weights sum
/// to (4 pi)^N.
pub fn product_grid(n_qubits: usize, polar: usize, azimuthal: usize) -> Vec<(SpinConfig, f64)> {
    let gl = gauss_legendre(polar);
    let dphi = std::f64::consts::TAU / azimuthal as f64;
    let mut sphere_points = Vec::with_capacity(polar * azimuthal);
    for &(u, wu) in &gl {
        let s = (1.0 - u * u).max(0.0).sqrt();
        for m in 0..azimuthal {
            let phi = dphi * m as f64;
            sphere_points.push((
                Vector3::new(s * phi.cos(), s * phi.sin(), u),
                wu * dphi,
            ));
        }
    }
    let mut points = vec![(Vec::new(), 1.0f64)];
    for _ in 0..n_qubits {
        let mut next = Vec::with_capacity(points.len() * sphere_points.len());
        for (vs, w) in &points {
            for (v, wv) in &sphere_points {
                let mut vs2 = vs.clone();
                vs2.push(*v);
                next.push((vs2, w * wv));
            }
        }
        points = next;
    }
    points
        .into_iter()
        .map(|(vs, w)| (SpinConfig::from_vectors_unchecked(vs), w))
        .collect()
}

/// Reassembles `integral of w(n) P_theta(n) dOmega` by quadrature. For
/// `w = w_k_rho` and `theta = eta_k` this recovers the density operator the
/// coefficients came from, up to quadrature error.
pub fn reconstruct_rho(
    w: impl Fn(&SpinConfig) -> f64,
    n_qubits: usize,
    theta: Theta,
    quadrature: &Quadrature,
) -> Result<Reconstruction> {
    let dim = 1usize << n_qubits;
    match *quadrature {
        Quadrature::Grid { polar, azimuthal } => {
            if polar == 0 || azimuthal == 0 {
                return Err(Error::Config("quadrature budget is zero".into()));
            }
            let mut acc = CMatrix::zeros(dim, dim);
            for (config, weight) in product_grid(n_qubits, polar, azimuthal) {
                let density = w(&config);
                acc += p_theta(&config, theta).matrix() * cr(density * weight);
            }
            Ok(Reconstruction {
                matrix: acc,
                stderr_frobenius: None,
            })
        }
        Quadrature::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::Config("quadrature budget is zero".into()));
            }
            let volume = (4.0 * PI).powi(n_qubits as i32);
            let mut rng = SeedSpec::new(seed).stream(Purpose::Quadrature, 0, 0);
            let mut sum = CMatrix::zeros(dim, dim);
            let mut sum_sq = vec![0.0f64; dim * dim * 2];
            for _ in 0..samples {
                let config = sampler::uniform_sphere_config(n_qubits, &mut rng);
                let term = p_theta(&config, theta).matrix() * cr(w(&config) * volume);
                for i in 0..dim {
                    for j in 0..dim {
                        let t = term[(i, j)];
                        sum_sq[2 * (i * dim + j)] += t.re * t.re;
                        sum_sq[2 * (i * dim + j) + 1] += t.im * t.im;
                    }
                }
                sum += term;
            }
            let s = samples as f64;
            let mean = sum * cr(1.0 / s);
            // Variance of each entry's mean, summed over entries.
            let mut var_total = 0.0;
            if samples > 1 {
                for i in 0..dim {
                    for j in 0..dim {
                        let m = mean[(i, j)];
                        let ex2_re = sum_sq[2 * (i * dim + j)] / s;
                        let ex2_im = sum_sq[2 * (i * dim + j) + 1] / s;
                        let var_re = (ex2_re - m.re * m.re).max(0.0) * s / (s - 1.0);
                        let var_im = (ex2_im - m.im * m.im).max(0.0) * s / (s - 1.0);
                        var_total += (var_re + var_im) / s;
                    }
                }
            }
            Ok(Reconstruction {
                matrix: mean,
                stderr_frobenius: Some(var_total.sqrt()),
            })
        }
    }
}
