//! The three subcommands. Each returns the process exit code.

use num_complex::Complex64;
use schmidtlab::model::ScatteringModel;
use schmidtlab::quadrature::{build_grid, extents_with, richardson_check, Rule};
use schmidtlab::quadrature::{K_EXTENT_OFFSET, K_EXTENT_SLOPE, Q_EXTENT_OFFSET, Q_EXTENT_SLOPE};
use schmidtlab::schmidt::{
    discretize, entropy_report, modes, purity_from_marginal, spectrum, DiscretizedKernel,
};

use crate::config::{DecomposeSettings, TableSettings, VerifySettings};
use crate::output::{
    decompose_csv, deliver, table_csv, to_json, verify_text, ConvergenceDoc, DecomposeDoc,
    EntropiesDoc, ModesDoc, SweepRow, TableDoc, VerifyDoc, VerifyRow,
};
use crate::{args::OutputFormat, CliError};

/// Default extents scaled by the user's factors.
fn extents(eta: f64, k_factor: f64, q_factor: f64) -> (f64, f64) {
    extents_with(
        eta,
        K_EXTENT_SLOPE * k_factor,
        K_EXTENT_OFFSET * k_factor,
        Q_EXTENT_SLOPE * q_factor,
        Q_EXTENT_OFFSET * q_factor,
    )
}

fn runtime(e: schmidtlab::SchmidtError) -> CliError {
    CliError::Runtime(e.to_string())
}

struct NumericalPoint {
    schmidt_number: f64,
    purity: f64,
}

/// One full numerical evaluation: SVD route and purity route on shared grids.
fn numerical_point(
    model: &ScatteringModel,
    n: usize,
    k_factor: f64,
    q_factor: f64,
) -> Result<NumericalPoint, CliError> {
    let (lk, lq) = extents(model.eta(), k_factor, q_factor);
    let gk = build_grid(Rule::GaussLegendre, n, lk).map_err(runtime)?;
    let gq = build_grid(Rule::GaussLegendre, n, lq).map_err(runtime)?;
    let purity = purity_from_marginal(|a, b| model.marginal_density(a, b), &gq).map_err(runtime)?;
    let kern = discretize(|k, q| model.amplitude(k, q), gk, gq).map_err(runtime)?;
    let spec = spectrum(&kern).map_err(runtime)?;
    Ok(NumericalPoint {
        schmidt_number: spec.schmidt_number,
        purity,
    })
}

pub fn cmd_table(cfg: &TableSettings) -> Result<i32, CliError> {
    let mut rows = Vec::with_capacity(cfg.steps);
    let mut unconverged = 0usize;
    for eta in cfg.samples() {
        let model = ScatteringModel::new(eta).map_err(runtime)?;
        let (k_numerical, purity_numerical, converged) = if cfg.numerical {
            let fine =
                numerical_point(&model, cfg.grid_n, cfg.k_extent_factor, cfg.q_extent_factor)?;
            let coarse = numerical_point(
                &model,
                cfg.grid_n / 2,
                cfg.k_extent_factor,
                cfg.q_extent_factor,
            )?;
            let k_check = richardson_check(coarse.schmidt_number, fine.schmidt_number, cfg.tol);
            let p_check = richardson_check(coarse.purity, fine.purity, cfg.tol);
            let ok = k_check.converged && p_check.converged;
            if !ok {
                unconverged += 1;
            }
            (Some(fine.schmidt_number), Some(fine.purity), ok)
        } else {
            // The closed forms carry no grid error; the flag is about grids.
            (None, None, true)
        };
        rows.push(SweepRow {
            eta,
            k_exact: model.schmidt_number_exact(),
            k_asymptotic: model.schmidt_number_asymptotic(),
            k_fit: model.schmidt_number_fit(),
            k_numerical,
            purity_numerical,
            converged,
        });
    }

    if unconverged > 0 {
        eprintln!(
            "warning: {unconverged} of {} numerical rows moved by more than {:e} under grid \
             refinement; consider a larger --grid-n",
            rows.len(),
            cfg.tol
        );
    }

    let payload = match cfg.output {
        OutputFormat::Csv => table_csv(&rows, cfg.numerical),
        OutputFormat::Json => to_json(&TableDoc {
            grid_n: cfg.grid_n,
            numerical: cfg.numerical,
            rows,
        }),
    };
    deliver(&payload, cfg.out.as_deref())?;
    Ok(0)
}

pub fn cmd_decompose(cfg: &DecomposeSettings) -> Result<i32, CliError> {
    let model = ScatteringModel::new(cfg.eta).map_err(runtime)?;
    let (lk, lq) = extents(cfg.eta, cfg.k_extent_factor, cfg.q_extent_factor);
    let gk = build_grid(Rule::GaussLegendre, cfg.grid_n, lk).map_err(runtime)?;
    let gq = build_grid(Rule::GaussLegendre, cfg.grid_n, lq).map_err(runtime)?;
    let kern = discretize(|k, q| model.amplitude(k, q), gk, gq).map_err(runtime)?;
    let spec = spectrum(&kern).map_err(runtime)?;
    let entropies = entropy_report(&spec, &cfg.orders).map_err(runtime)?;

    let coarse_n = cfg.grid_n / 2;
    let gk_c = build_grid(Rule::GaussLegendre, coarse_n, lk).map_err(runtime)?;
    let gq_c = build_grid(Rule::GaussLegendre, coarse_n, lq).map_err(runtime)?;
    let kern_c = discretize(|k, q| model.amplitude(k, q), gk_c, gq_c).map_err(runtime)?;
    let spec_c = spectrum(&kern_c).map_err(runtime)?;
    let check = richardson_check(spec_c.schmidt_number, spec.schmidt_number, cfg.tol);

    match cfg.output {
        OutputFormat::Csv => {
            // The spectrum is the payload; everything else goes to the
            // diagnostic stream so the CSV stays machine-readable.
            eprintln!(
                "eta = {}, grid_n = {}, K = {:.6}, n_significant = {}, converged = {}",
                cfg.eta, cfg.grid_n, spec.schmidt_number, spec.n_significant, check.converged
            );
            deliver(&decompose_csv(&spec.eigenvalues), cfg.out.as_deref())?;
        }
        OutputFormat::Json => {
            let modes_doc = if cfg.modes > 0 {
                let md = modes(&kern, cfg.modes).map_err(runtime)?;
                let pack = |family: &[Vec<Complex64>]| -> Vec<Vec<[f64; 2]>> {
                    family
                        .iter()
                        .map(|m| m.iter().map(|c| [c.re, c.im]).collect())
                        .collect()
                };
                Some(ModesDoc {
                    count: md.count,
                    truncated: md.truncated,
                    k_nodes: kern.k_grid().nodes().to_vec(),
                    q_nodes: kern.q_grid().nodes().to_vec(),
                    field_modes: pack(&md.field_modes),
                    atom_modes: pack(&md.atom_modes),
                })
            } else {
                None
            };
            let doc = DecomposeDoc {
                eta: cfg.eta,
                grid_n: cfg.grid_n,
                k_extent: lk,
                q_extent: lq,
                raw_trace: spec.trace,
                schmidt_number: spec.schmidt_number,
                n_significant: spec.n_significant,
                eigenvalues: spec.eigenvalues.clone(),
                entropies: EntropiesDoc {
                    orders: entropies.orders,
                    tsallis: entropies.tsallis,
                    renyi: entropies.renyi,
                    linear: entropies.linear,
                    von_neumann: entropies.von_neumann,
                },
                modes: modes_doc,
                convergence: ConvergenceDoc {
                    coarse_grid_n: coarse_n,
                    coarse_value: check.coarse_value,
                    fine_value: check.fine_value,
                    relative_delta: check.relative_delta,
                    tol: cfg.tol,
                    converged: check.converged,
                },
            };
            deliver(&to_json(&doc), cfg.out.as_deref())?;
        }
    }
    Ok(0)
}

/// Schmidt number of the field-side marginal without any factorization:
/// with M = A·A† (unnormalized ρ_A), K = (Tr M)² / Tr M² = ‖A‖⁴_F / ‖M‖²_F.
fn field_marginal_schmidt_number(kern: &DiscretizedKernel) -> f64 {
    let a = kern.matrix();
    let n = a.nrows();
    let mut tr_rho_sq = 0.0f64;
    for i in 0..n {
        let ri = a.row(i);
        for j in 0..=i {
            let rj = a.row(j);
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..a.ncols() {
                acc += ri[l] * rj[l].conj();
            }
            let m = acc.norm_sqr();
            tr_rho_sq += if i == j { m } else { 2.0 * m };
        }
    }
    kern.norm() * kern.norm() / tr_rho_sq
}

pub fn cmd_verify(cfg: &VerifySettings) -> Result<i32, CliError> {
    let mut results = Vec::with_capacity(cfg.etas.len());
    for &eta in &cfg.etas {
        let model = ScatteringModel::new(eta).map_err(runtime)?;
        let k_exact = model.schmidt_number_exact();
        let (lk, lq) = extents(eta, cfg.k_extent_factor, cfg.q_extent_factor);
        let gk = build_grid(Rule::GaussLegendre, cfg.grid_n, lk).map_err(runtime)?;
        let gq = build_grid(Rule::GaussLegendre, cfg.grid_n, lq).map_err(runtime)?;

        let purity =
            purity_from_marginal(|a, b| model.marginal_density(a, b), &gq).map_err(runtime)?;
        let k_atom = 1.0 / purity;

        let kern = discretize(|k, q| model.amplitude(k, q), gk, gq).map_err(runtime)?;
        let spec = spectrum(&kern).map_err(runtime)?;
        let k_field = field_marginal_schmidt_number(&kern);

        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        let spectrum_residual = rel(spec.schmidt_number, k_exact);
        let purity_residual = rel(k_atom, k_exact);
        let field_atom_residual = rel(k_field, k_atom);
        let pass = spectrum_residual <= cfg.tol
            && purity_residual <= cfg.tol
            && field_atom_residual <= cfg.tol;
        results.push(VerifyRow {
            eta,
            k_exact,
            k_spectrum: spec.schmidt_number,
            spectrum_residual,
            k_purity: k_atom,
            purity_residual,
            k_field,
            k_atom,
            field_atom_residual,
            pass,
        });
    }

    let pass = results.iter().all(|r| r.pass);
    let doc = VerifyDoc {
        tol: cfg.tol,
        grid_n: cfg.grid_n,
        results,
        pass,
    };
    let payload = if cfg.json {
        to_json(&doc)
    } else {
        verify_text(&doc)
    };
    deliver(&payload, cfg.out.as_deref())?;
    Ok(if pass { 0 } else { 1 })
}
