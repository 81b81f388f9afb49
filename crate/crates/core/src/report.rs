//! Text and JSON rendering of results.

use serde_json::{json, Map, Value};

use crate::ndi::NdiReport;
use crate::nsi::NsiResult;
use crate::numerics::{
    JACOBI_TOLERANCE, POWER_RAYLEIGH_TOLERANCE, POWER_RESIDUAL_TOLERANCE, POWER_SHIFT,
};

pub const DEFAULT_SIGNIFICANT_DIGITS: usize = 6;

/// Rounds to `digits` significant digits; `None` keeps full precision.
pub fn round_significant(x: f64, digits: Option<usize>) -> f64 {
    match digits {
        Some(d) if x.is_finite() && x != 0.0 => {
            let d = d.max(1);
            format!("{:.*e}", d - 1, x).parse().unwrap_or(x)
        }
        _ => x,
    }
}

/// Shortest decimal form of `x` after rounding to `digits` significant digits.
pub fn format_number(x: f64, digits: Option<usize>) -> String {
    let r = round_significant(x, digits);
    if r == 0.0 {
        // avoid "-0"
        return "0".to_string();
    }
    format!("{r}")
}

fn number(x: f64, digits: Option<usize>) -> Value {
    serde_json::Number::from_f64(round_significant(x, digits))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn numbers(xs: &[f64], digits: Option<usize>) -> Value {
    Value::Array(xs.iter().map(|&x| number(x, digits)).collect())
}

/// JSON document with a `network` summary and one `nodes` entry per node.
pub fn ndi_report_json(report: &NdiReport, digits: Option<usize>) -> Value {
    let opts = &report.options;
    let network = json!({
        "n": report.n,
        "edges": report.edges,
        "ndi": number(report.network_ndi, digits),
        "ndm_eigenvalue": number(report.ndm_principal_eigenvalue, digits),
        "ndm_average": number(report.ndm_average, digits),
        "convention": opts.convention.as_str(),
        "variance_divisor": opts.divisor,
        "retention_threshold": number(opts.retention_threshold, digits),
        "retained_m": report.retained_m,
        "eigenvalues": numbers(&report.eigenvalues, digits),
        "pc_variances": numbers(&report.pc_variances, digits),
        "elbow_index": report.elbow.elbow_index,
        "dissimilar_count": report.elbow.dissimilar.len(),
        "degenerate": report.is_degenerate(),
        "degeneracy_flags": report
            .degeneracy_flags
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>(),
        "tolerances": {
            "jacobi_off_diagonal": JACOBI_TOLERANCE,
            "power_rayleigh": POWER_RAYLEIGH_TOLERANCE,
            "power_residual": POWER_RESIDUAL_TOLERANCE,
            "power_shift": POWER_SHIFT,
        },
    });

    let ranks = report.ranks();
    let names = report.table.column_names();
    let nodes: Vec<Value> = (0..report.n)
        .map(|i| {
            let mut node = Map::new();
            node.insert("label".into(), Value::String(report.labels()[i].clone()));
            for (name, &x) in names.iter().zip(report.table.values().row(i)) {
                node.insert(name.clone(), number(x, digits));
            }
            node.insert("scores".into(), numbers(&report.scores[i], digits));
            node.insert("node_ndi".into(), number(report.node_ndi[i], digits));
            node.insert("rank".into(), Value::from(ranks[i]));
            let category = if report.is_dissimilar(i) {
                "dissimilar"
            } else {
                "similar"
            };
            node.insert("category".into(), Value::String(category.into()));
            Value::Object(node)
        })
        .collect();

    json!({ "network": network, "nodes": nodes })
}

pub fn nsi_json(result: &NsiResult, digits: Option<usize>) -> Value {
    json!({
        "min_threshold": number(result.min_threshold, digits),
        "nsi": number(result.nsi, digits),
        "method": result.method,
    })
}
