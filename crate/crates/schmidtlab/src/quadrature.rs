//! Quadrature grids on symmetric intervals `[−L, L]` and the integration
//! helpers the Schmidt pipeline is built on.
//!
//! Two rules are provided: Gauss–Legendre (the default — spectral accuracy on
//! smooth integrands) and the trapezoid rule (a diagnostic alternative whose
//! convergence on slowly decaying integrands is easier to reason about).
//! Grids are fixed tensor products; there is deliberately no adaptive
//! subdivision, so the downstream SVD step always sees a well-defined matrix.

use num_complex::Complex64;

use crate::error::{Result, SchmidtError};

/// Quadrature rule selector for [`build_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    GaussLegendre,
    Trapezoid,
}

/// Nodes and weights of a 1D quadrature rule on `[−extent, extent]`.
///
/// Invariants (enforced by [`build_grid`]): nodes strictly increasing inside
/// the interval, weights all positive, `Σ weights = 2·extent` up to rounding.
#[derive(Debug, Clone)]
pub struct Grid1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    extent: f64,
    rule: Rule,
}

impl Grid1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Half-width `L` of the symmetric domain.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σᵢ wᵢ f(xᵢ)` with a fixed summation order (bit-reproducible).
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(0.0, |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Outcome of a coarse-vs-fine (n vs 2n) self-consistency check.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceReport {
    pub coarse_value: f64,
    pub fine_value: f64,
    /// `|fine − coarse| / max(|fine|, tiny)`.
    pub relative_delta: f64,
    /// Whether `relative_delta` met the requested tolerance.
    pub converged: bool,
}

/// Builds an `n`-point grid of the requested rule on `[−extent, extent]`.
///
/// Gauss–Legendre nodes are the roots of the degree-`n` Legendre polynomial,
/// found by Newton iteration on the three-term recurrence and then mapped to
/// the interval; the trapezoid rule uses `n` uniformly spaced nodes including
/// both endpoints.
pub fn build_grid(rule: Rule, n: usize, extent: f64) -> Result<Grid1D> {
    if n < 2 {
        return Err(SchmidtError::Construction(format!(
            "a grid needs at least 2 nodes, got {n}"
        )));
    }
    if extent <= 0.0 || !extent.is_finite() {
        return Err(SchmidtError::Construction(format!(
            "grid extent must be positive and finite, got {extent}"
        )));
    }
    let (nodes, weights) = match rule {
        Rule::GaussLegendre => gauss_legendre(n, extent),
        Rule::Trapezoid => trapezoid(n, extent),
    };
    Ok(Grid1D {
        nodes,
        weights,
        extent,
        rule,
    })
}

/// Legendre polynomial `P_n` and its derivative at `x`, via the three-term
/// recurrence `k·P_k = (2k−1)·x·P_{k−1} − (k−1)·P_{k−2}`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn gauss_legendre(n: usize, extent: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi-style initial guess for the i-th root counted from +1.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                let (_, d2) = legendre_with_derivative(n, x);
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; fill both symmetric positions.
        nodes[i] = -x * extent;
        nodes[n - 1 - i] = x * extent;
        weights[i] = w * extent;
        weights[n - 1 - i] = w * extent;
    }
    if n % 2 == 1 {
        // The middle root of an odd-degree Legendre polynomial is exactly 0.
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn trapezoid(n: usize, extent: f64) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * extent / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n)
        .map(|i| (2.0 * i as f64 / (n - 1) as f64 - 1.0) * extent)
        .collect();
    let weights: Vec<f64> = (0..n)
        .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
        .collect();
    (nodes, weights)
}

/// Default slope/offset of the k-axis half-width `L_k = 16·η + 64`.
///
/// The amplitude falls off only as `1/k²` along `k` (a Lorentzian of unit
/// width dragged across `|q| ≲ η`), so the k box must be far larger than the
/// q box; even so, the tail mass outside `[−L_k, L_k]` is `≈ 2/(π·L_k)`,
/// about 0.8% at `η = 1`. Downstream quantities are normalization-invariant
/// precisely so that this deficit mostly cancels.
pub const K_EXTENT_SLOPE: f64 = 16.0;
pub const K_EXTENT_OFFSET: f64 = 64.0;
/// Default slope/offset of the q-axis half-width `L_q = 8·η + 8`; the
/// amplitude is Gaussian in `q` with width `∝ η`, so this box loses only an
/// exponentially small tail.
pub const Q_EXTENT_SLOPE: f64 = 8.0;
pub const Q_EXTENT_OFFSET: f64 = 8.0;

/// Default domain half-widths `(k_extent, q_extent)` for the scattering
/// amplitude at parameter `η > 0`: `(16·η + 64, 8·η + 8)`.
pub fn default_extents(eta: f64) -> (f64, f64) {
    extents_with(
        eta,
        K_EXTENT_SLOPE,
        K_EXTENT_OFFSET,
        Q_EXTENT_SLOPE,
        Q_EXTENT_OFFSET,
    )
}

/// [`default_extents`] with all four sizing constants supplied by the caller.
pub fn extents_with(
    eta: f64,
    k_slope: f64,
    k_offset: f64,
    q_slope: f64,
    q_offset: f64,
) -> (f64, f64) {
    (k_slope * eta + k_offset, q_slope * eta + q_offset)
}

/// Tensor-product quadrature `Σᵢⱼ wᵢ wⱼ f(xᵢ, yⱼ)` with a fixed summation
/// order, so results are bit-identical from run to run.
pub fn integrate_2d(f: impl Fn(f64, f64) -> Complex64, gx: &Grid1D, gy: &Grid1D) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &wx) in gx.nodes.iter().zip(&gx.weights) {
        let mut row = Complex64::new(0.0, 0.0);
        for (&y, &wy) in gy.nodes.iter().zip(&gy.weights) {
            row += wy * f(x, y);
        }
        acc += wx * row;
    }
    acc
}

/// Compares a quantity computed at resolution `n` (`coarse`) and `2n`
/// (`fine`); `converged` means the relative difference met `tol`.
pub fn richardson_check(coarse: f64, fine: f64, tol: f64) -> ConvergenceReport {
    let relative_delta = (fine - coarse).abs() / fine.abs().max(1e-300);
    ConvergenceReport {
        coarse_value: coarse,
        fine_value: fine,
        relative_delta,
        converged: relative_delta <= tol,
    }
}
