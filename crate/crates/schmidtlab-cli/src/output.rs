//! Serialization: CSV rows with a fixed 15-significant-digit format and JSON
//! documents whose key order is fixed by struct declaration order, so that
//! identical invocations are byte-identical.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// 15 significant digits, `.` decimal separator, exponent always present.
pub fn fmt_g(x: f64) -> String {
    format!("{x:.14e}")
}

/// One sweep sample. The numerical columns exist only under `--numerical`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub eta: f64,
    pub k_exact: f64,
    pub k_asymptotic: f64,
    pub k_fit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_numerical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_numerical: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Serialize)]
pub struct TableDoc {
    pub grid_n: usize,
    pub numerical: bool,
    pub rows: Vec<SweepRow>,
}

pub fn table_csv(rows: &[SweepRow], numerical: bool) -> String {
    let mut out = String::new();
    if numerical {
        out.push_str("eta,k_exact,k_asymptotic,k_fit,k_numerical,purity_numerical,converged\n");
    } else {
        out.push_str("eta,k_exact,k_asymptotic,k_fit\n");
    }
    for row in rows {
        out.push_str(&fmt_g(row.eta));
        out.push(',');
        out.push_str(&fmt_g(row.k_exact));
        out.push(',');
        out.push_str(&fmt_g(row.k_asymptotic));
        out.push(',');
        out.push_str(&fmt_g(row.k_fit));
        if numerical {
            out.push(',');
            out.push_str(&fmt_g(row.k_numerical.expect("numerical row")));
            out.push(',');
            out.push_str(&fmt_g(row.purity_numerical.expect("numerical row")));
            out.push(',');
            out.push_str(if row.converged { "true" } else { "false" });
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct EntropiesDoc {
    pub orders: Vec<f64>,
    pub tsallis: Vec<f64>,
    pub renyi: Vec<f64>,
    pub linear: f64,
    pub von_neumann: f64,
}

#[derive(Debug, Serialize)]
pub struct ModesDoc {
    pub count: usize,
    pub truncated: bool,
    pub k_nodes: Vec<f64>,
    pub q_nodes: Vec<f64>,
    /// Mode samples as [re, im] pairs, one inner list per mode.
    pub field_modes: Vec<Vec<[f64; 2]>>,
    pub atom_modes: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize)]
pub struct ConvergenceDoc {
    pub coarse_grid_n: usize,
    pub coarse_value: f64,
    pub fine_value: f64,
    pub relative_delta: f64,
    pub tol: f64,
    pub converged: bool,
}

#[derive(Debug, Serialize)]
pub struct DecomposeDoc {
    pub eta: f64,
    pub grid_n: usize,
    pub k_extent: f64,
    pub q_extent: f64,
    pub raw_trace: f64,
    pub schmidt_number: f64,
    pub n_significant: usize,
    pub eigenvalues: Vec<f64>,
    pub entropies: EntropiesDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<ModesDoc>,
    pub convergence: ConvergenceDoc,
}

pub fn decompose_csv(eigenvalues: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, l) in eigenvalues.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", fmt_g(*l)));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct VerifyRow {
    pub eta: f64,
    pub k_exact: f64,
    pub k_spectrum: f64,
    pub spectrum_residual: f64,
    pub k_purity: f64,
    pub purity_residual: f64,
    pub k_field: f64,
    pub k_atom: f64,
    pub field_atom_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub tol: f64,
    pub grid_n: usize,
    pub results: Vec<VerifyRow>,
    pub pass: bool,
}

pub fn verify_text(doc: &VerifyDoc) -> String {
    let mut out = String::new();
    let mut passed = 0usize;
    for row in &doc.results {
        out.push_str(&format!("eta = {}\n", row.eta));
        let mut line = |label: &str, got: f64, want: f64, residual: f64| {
            let ok = residual <= doc.tol;
            out.push_str(&format!(
                "  {label}: {} vs {}, rel {:.3e} {}\n",
                fmt_g(got),
                fmt_g(want),
                residual,
                if ok { "ok" } else { "FAIL" }
            ));
        };
        line(
            "spectrum route vs closed form",
            row.k_spectrum,
            row.k_exact,
            row.spectrum_residual,
        );
        line(
            "purity route   vs closed form",
            row.k_purity,
            row.k_exact,
            row.purity_residual,
        );
        line(
            "field marginal vs atom marginal",
            row.k_field,
            row.k_atom,
            row.field_atom_residual,
        );
        passed += [
            row.spectrum_residual,
            row.purity_residual,
            row.field_atom_residual,
        ]
        .iter()
        .filter(|&&r| r <= doc.tol)
        .count();
    }
    let total = 3 * doc.results.len();
    out.push_str(&format!(
        "verify: {} - {passed}/{total} checks within tol {:e}\n",
        if doc.pass { "PASS" } else { "FAIL" },
        doc.tol
    ));
    out
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable document");
    s.push('\n');
    s
}

/// Send the payload to the file named by `--out`, or to standard output.
pub fn deliver(payload: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(payload.as_bytes())
                .map_err(|e| CliError::Runtime(format!("writing to standard output: {e}")))
        }
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display()))),
    }
}
