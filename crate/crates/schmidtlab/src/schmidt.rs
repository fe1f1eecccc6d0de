//! The general numerical Schmidt engine: Nyström discretization of an
//! arbitrary two-variable amplitude, SVD extraction of the Schmidt spectrum
//! and modes, the marginal-purity cross-route, and the entropy family.
//!
//! Route choice: the decomposition works on the weight-symmetrized *amplitude*
//! matrix `A_ij = √(wᵢwⱼ)·C(kᵢ, qⱼ)` rather than on a discretized marginal
//! density matrix. The SVD of `A` delivers both mode families at once and
//! avoids squaring the condition number; the density-matrix route survives as
//! [`purity_from_marginal`], which cross-checks `K = 1/Tr ρ²` by direct 2D
//! quadrature.

use ndarray::{Array1, Array2};
use ndarray_linalg::SVD;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SchmidtError};
use crate::quadrature::{integrate_2d, Grid1D};

/// Eigenvalues below `EIGENVALUE_FLOOR · λ₀` are treated as quadrature noise:
/// they are excluded from entropy sums and from the significant-mode count.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

/// A discretized norm farther than this from 1 indicates an inadequate
/// domain (or an unnormalized amplitude); see [`DiscretizedKernel::norm_deviation`].
pub const NORM_WARN_TOL: f64 = 1e-4;

/// Weight-symmetrized kernel matrix `A_ij = √(wᵢwⱼ)·C(kᵢ, qⱼ)` together with
/// the grids that produced it.
#[derive(Debug, Clone)]
pub struct DiscretizedKernel {
    matrix: Array2<Complex64>,
    k_grid: Grid1D,
    q_grid: Grid1D,
    norm: f64,
}

impl DiscretizedKernel {
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn k_grid(&self) -> &Grid1D {
        &self.k_grid
    }

    pub fn q_grid(&self) -> &Grid1D {
        &self.q_grid
    }

    /// Squared Frobenius norm of the matrix — the discrete `∬ |C|² dk dq`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `|norm − 1|`. For a normalized amplitude on an adequate domain this is
    /// tiny; anything above [`NORM_WARN_TOL`] deserves a diagnostic (the
    /// scattering amplitude's `1/k²` tails leave ≈ 2/(π·L_k) outside any
    /// practical k box, so the warning fires on default domains by design).
    pub fn norm_deviation(&self) -> f64 {
        (self.norm - 1.0).abs()
    }
}

/// Schmidt spectrum of a discretized kernel.
///
/// `eigenvalues` are normalized to unit sum (so they are directly the λᵢ of
/// the decomposition); `trace` keeps the raw discrete trace `Σσᵢ²` before
/// normalization as a domain-truncation diagnostic. The normalization makes
/// `schmidt_number = trace²/Σ(raw λ)² = 1/Σ(normalized λ)²` invariant under
/// overall normalization error of the input amplitude.
#[derive(Debug, Clone)]
pub struct SchmidtSpectrum {
    /// Normalized eigenvalues λᵢ, descending, `Σλᵢ = 1`.
    pub eigenvalues: Vec<f64>,
    /// Raw trace `Σσᵢ²` of the discretized marginal before normalization.
    pub trace: f64,
    /// Schmidt number `K = 1/Σλᵢ²` of the normalized spectrum; always ≥ 1.
    pub schmidt_number: f64,
    /// Number of eigenvalues at or above `EIGENVALUE_FLOOR · λ₀`.
    pub n_significant: usize,
    /// Eigenvalues clamped up to zero. Always 0 on the SVD route (σ² ≥ 0);
    /// kept as a diagnostic slot for alternative eigensolver backends.
    pub clamped: usize,
}

/// Schmidt mode functions sampled on the grids.
///
/// `field_modes[i]` is `uᵢ` on the k grid and `atom_modes[i]` is `vᵢ` on the
/// q grid, with `C(k, q) ≈ Σᵢ σᵢ·uᵢ(k)·vᵢ(q)`. Each mode has unit norm under
/// its grid's quadrature inner product, and each family is orthonormal.
#[derive(Debug, Clone)]
pub struct SchmidtModes {
    pub field_modes: Vec<Vec<Complex64>>,
    pub atom_modes: Vec<Vec<Complex64>>,
    /// Number of mode pairs actually returned.
    pub count: usize,
    /// True when fewer modes than requested existed above the rank floor.
    pub truncated: bool,
}

/// Entropies of a Schmidt spectrum for a list of orders `p > 1`.
///
/// Sign convention: the Rényi entropy is reported in the standard
/// nonnegative form `S_p^R = ln(Tr ρ^p)/(1 − p)`. (With the opposite
/// denominator sign, sometimes seen in print, every `p > 1` value would come
/// out nonpositive; both conventions carry the same information.)
#[derive(Debug, Clone)]
pub struct EntropyReport {
    pub orders: Vec<f64>,
    /// Tsallis entropies `S_p = (1 − Σλᵢᵖ)/(p − 1)`.
    pub tsallis: Vec<f64>,
    /// Rényi entropies `S_p^R = ln(Σλᵢᵖ)/(1 − p)`.
    pub renyi: Vec<f64>,
    /// Linear entropy `S_L = 1 − Σλᵢ² = 1 − 1/K` (the p = 2 Tsallis entropy).
    pub linear: f64,
    /// `−Σ λᵢ ln λᵢ` over the eigenvalues above the noise floor.
    pub von_neumann: f64,
}

/// Samples `amplitude` on the tensor grid and builds the weight-symmetrized
/// kernel matrix. A NaN from the amplitude is reported with the offending
/// node, not propagated silently into the factorization.
pub fn discretize(
    amplitude: impl Fn(f64, f64) -> Complex64,
    k_grid: Grid1D,
    q_grid: Grid1D,
) -> Result<DiscretizedKernel> {
    let sqrt_wk: Vec<f64> = k_grid.weights().iter().map(|w| w.sqrt()).collect();
    let sqrt_wq: Vec<f64> = q_grid.weights().iter().map(|w| w.sqrt()).collect();
    let (nk, nq) = (k_grid.len(), q_grid.len());
    let mut matrix = Array2::zeros((nk, nq));
    let mut norm = 0.0;
    for (i, (&k, swk)) in k_grid.nodes().iter().zip(&sqrt_wk).enumerate() {
        for (j, (&q, swq)) in q_grid.nodes().iter().zip(&sqrt_wq).enumerate() {
            let c = amplitude(k, q);
            if c.re.is_nan() || c.im.is_nan() {
                return Err(SchmidtError::Numerical(format!(
                    "amplitude returned NaN at node (i = {i}, k = {k}; j = {j}, q = {q})"
                )));
            }
            let entry = swk * swq * c;
            norm += entry.norm_sqr();
            matrix[(i, j)] = entry;
        }
    }
    Ok(DiscretizedKernel {
        matrix,
        k_grid,
        q_grid,
        norm,
    })
}

fn svd_failure(kern: &DiscretizedKernel, detail: impl std::fmt::Display) -> SchmidtError {
    SchmidtError::Numerical(format!(
        "SVD factorization failed: {detail} (matrix {}×{}, squared Frobenius norm {:.6e})",
        kern.k_grid.len(),
        kern.q_grid.len(),
        kern.norm
    ))
}

/// Schmidt spectrum via singular values: `λᵢ = σᵢ²`, normalized to unit sum,
/// `K = 1/Σλᵢ²`.
pub fn spectrum(kern: &DiscretizedKernel) -> Result<SchmidtSpectrum> {
    let (_, sigma, _) = kern
        .matrix
        .svd(false, false)
        .map_err(|e| svd_failure(kern, e))?;
    spectrum_from_singular_values(kern, &sigma)
}

fn spectrum_from_singular_values(
    kern: &DiscretizedKernel,
    sigma: &Array1<f64>,
) -> Result<SchmidtSpectrum> {
    let mut raw: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    raw.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    let trace: f64 = raw.iter().sum();
    if trace <= 0.0 || !trace.is_finite() {
        return Err(svd_failure(kern, format!("spectrum trace is {trace}")));
    }
    let eigenvalues: Vec<f64> = raw.iter().map(|l| l / trace).collect();
    let sum_sq: f64 = eigenvalues.iter().map(|l| l * l).sum();
    let floor = EIGENVALUE_FLOOR * eigenvalues[0];
    let n_significant = eigenvalues.iter().take_while(|&&l| l >= floor).count();
    Ok(SchmidtSpectrum {
        eigenvalues,
        trace,
        schmidt_number: 1.0 / sum_sq,
        n_significant,
        clamped: 0,
    })
}

/// Extracts the first `count` Schmidt mode pairs.
///
/// The singular vectors have the quadrature weights divided back out
/// (`uᵢ(kⱼ) = Uⱼᵢ/√wⱼ`), which makes each mode unit-normalized under its
/// grid's quadrature inner product. The SVD fixes the relative phase of each
/// pair (applying the kernel to `vᵢ` gives `+σᵢ·uᵢ`); the remaining joint
/// phase freedom is pinned by rotating the largest-modulus entry of each
/// field mode to the positive real axis, so output is reproducible.
///
/// Requesting more modes than the matrix rank (eigenvalues above the
/// [`EIGENVALUE_FLOOR`]) returns the available modes with `truncated = true`.
pub fn modes(kern: &DiscretizedKernel, count: usize) -> Result<SchmidtModes> {
    let max_count = kern.k_grid.len().min(kern.q_grid.len());
    if count > max_count {
        return Err(SchmidtError::Domain(format!(
            "requested {count} modes but the kernel supports at most {max_count}"
        )));
    }
    let (u, sigma, vh) = kern
        .matrix
        .svd(true, true)
        .map_err(|e| svd_failure(kern, e))?;
    let u = u.ok_or_else(|| svd_failure(kern, "left vectors missing"))?;
    let vh = vh.ok_or_else(|| svd_failure(kern, "right vectors missing"))?;

    let sigma_floor = (EIGENVALUE_FLOOR).sqrt() * sigma[0];
    let rank = sigma.iter().take_while(|&&s| s >= sigma_floor).count();
    let avail = count.min(rank);

    let sqrt_wk: Vec<f64> = kern.k_grid.weights().iter().map(|w| w.sqrt()).collect();
    let sqrt_wq: Vec<f64> = kern.q_grid.weights().iter().map(|w| w.sqrt()).collect();

    let mut field_modes = Vec::with_capacity(avail);
    let mut atom_modes = Vec::with_capacity(avail);
    for i in 0..avail {
        let mut fm: Vec<Complex64> = u
            .column(i)
            .iter()
            .zip(&sqrt_wk)
            .map(|(c, sw)| c / sw)
            .collect();
        let mut am: Vec<Complex64> = vh
            .row(i)
            .iter()
            .zip(&sqrt_wq)
            .map(|(c, sw)| c / sw)
            .collect();
        // Joint phase: make the largest-|.| component of the field mode real
        // positive; the paired atom mode rotates oppositely so the product
        // σᵢ·uᵢ·vᵢ in the expansion of C is untouched.
        let (mut best, mut best_mod) = (0usize, 0.0f64);
        for (j, c) in fm.iter().enumerate() {
            let m = c.norm();
            if m > best_mod {
                best = j;
                best_mod = m;
            }
        }
        if best_mod > 0.0 {
            let phase = fm[best] / best_mod;
            let conj = phase.conj();
            for c in &mut fm {
                *c *= conj;
            }
            for c in &mut am {
                *c *= phase;
            }
        }
        field_modes.push(fm);
        atom_modes.push(am);
    }
    Ok(SchmidtModes {
        field_modes,
        atom_modes,
        count: avail,
        truncated: avail < count,
    })
}

/// `Tr ρ²` of a marginal density, computed directly as `∬ |ρ(q₁,q₂)|² dq₁ dq₂`.
///
/// This is the purity route to the Schmidt number (`K = 1/Tr ρ²`) and needs
/// no factorization. `rho` must be Hermitian; that is spot-checked on 100
/// deterministically seeded random node pairs before integrating. A result
/// above `1 + 1e-6` signals a broken normalization and is an error.
pub fn purity_from_marginal(rho: impl Fn(f64, f64) -> Complex64, q_grid: &Grid1D) -> Result<f64> {
    let nodes = q_grid.nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0053_4348_4D49_4454);
    for _ in 0..100 {
        let a = nodes[rng.random_range(0..nodes.len())];
        let b = nodes[rng.random_range(0..nodes.len())];
        let dev = (rho(a, b) - rho(b, a).conj()).norm();
        if dev > 1e-10 {
            return Err(SchmidtError::Numerical(format!(
                "marginal density is not Hermitian: |rho(a,b) - conj(rho(b,a))| = {dev:.3e} \
                 at (a = {a}, b = {b})"
            )));
        }
    }
    let purity = integrate_2d(
        |a, b| Complex64::new(rho(a, b).norm_sqr(), 0.0),
        q_grid,
        q_grid,
    )
    .re;
    if purity > 1.0 + 1e-6 {
        return Err(SchmidtError::Numerical(format!(
            "purity {purity} exceeds 1: marginal is not normalized to unit trace"
        )));
    }
    if purity.is_nan() || purity <= 0.0 {
        return Err(SchmidtError::Numerical(format!(
            "purity {purity} is not positive: marginal vanishes on the grid"
        )));
    }
    Ok(purity)
}

/// Tsallis and Rényi entropies of the spectrum for each order in `orders`
/// (all must satisfy `p > 1`), plus the linear entropy and the von Neumann
/// limit. Eigenvalues below the noise floor are excluded from every sum.
pub fn entropy_report(spec: &SchmidtSpectrum, orders: &[f64]) -> Result<EntropyReport> {
    for &p in orders {
        if p <= 1.0 || !p.is_finite() {
            return Err(SchmidtError::Domain(format!(
                "entropy orders must satisfy p > 1, got {p}"
            )));
        }
    }
    let floor = EIGENVALUE_FLOOR * spec.eigenvalues.first().copied().unwrap_or(0.0);
    let lam: Vec<f64> = spec
        .eigenvalues
        .iter()
        .copied()
        .filter(|&l| l >= floor && l > 0.0)
        .collect();

    let power_sum = |p: f64| -> f64 { lam.iter().map(|l| l.powf(p)).sum() };
    let tsallis: Vec<f64> = orders
        .iter()
        .map(|&p| (1.0 - power_sum(p)) / (p - 1.0))
        .collect();
    let renyi: Vec<f64> = orders
        .iter()
        .map(|&p| power_sum(p).ln() / (1.0 - p))
        .collect();
    let linear = 1.0 - lam.iter().map(|l| l * l).sum::<f64>();
    let von_neumann = -lam.iter().map(|l| l * l.ln()).sum::<f64>();
    Ok(EntropyReport {
        orders: orders.to_vec(),
        tsallis,
        renyi,
        linear,
        von_neumann,
    })
}
