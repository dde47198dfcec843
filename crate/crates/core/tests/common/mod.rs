//! Shared fixture loading for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cweno::harness::accuracy::{accuracy_config, error_column, Example};
use cweno::reconstruct::{convergence_orders, Kernel, Scheme};
use cweno::{Execution, MpFloat, Precision, Scalar};

/// One printed `(error, order)` entry of a reference convergence table.
#[derive(Debug, Clone)]
pub struct RefEntry {
    pub example: u8,
    pub scheme: String,
    pub r: usize,
    pub k: Option<usize>,
    pub n: usize,
    pub error: String,
    pub order: Option<f64>,
}

pub fn reference_tables() -> Vec<RefEntry> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/reference_tables.csv"
    );
    let mut rdr = csv::Reader::from_path(path).expect("fixture present");
    rdr.records()
        .map(|rec| {
            let rec = rec.expect("valid fixture row");
            RefEntry {
                example: rec[0].parse().unwrap(),
                scheme: rec[1].to_string(),
                r: rec[2].parse().unwrap(),
                k: rec[3].parse().ok(),
                n: rec[4].parse().unwrap(),
                error: rec[5].to_string(),
                order: rec[6].parse().ok(),
            }
        })
        .collect()
}

/// Groups entries into columns keyed by `(example, scheme, r, k)`, each
/// sorted by `n`.
pub fn columns(
    entries: &[RefEntry],
) -> BTreeMap<(u8, String, usize, Option<usize>), Vec<RefEntry>> {
    let mut map: BTreeMap<_, Vec<RefEntry>> = BTreeMap::new();
    for e in entries {
        map.entry((e.example, e.scheme.clone(), e.r, e.k))
            .or_default()
            .push(e.clone());
    }
    for col in map.values_mut() {
        col.sort_by_key(|e| e.n);
    }
    map
}

pub fn scheme_from_label(label: &str) -> Scheme {
    if label.starts_with("WENO") {
        Scheme::WenoJs
    } else if label.ends_with("-LPR") {
        Scheme::CwenoLpr
    } else {
        Scheme::CwenoGlobal
    }
}

/// A computed column: errors in 3-digit text, raw errors, and orders.
pub struct Computed {
    pub text: Vec<String>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

pub fn compute_column(
    example: u8,
    scheme: Scheme,
    r: usize,
    k: usize,
    grids: &[usize],
) -> Computed {
    let ex = Example::from_number(example).unwrap();
    let prec = Precision(333);
    let (tables, cfg) = accuracy_config(ex, scheme, r, None, None).unwrap();
    let kernel = Kernel::<MpFloat>::new(&tables, &cfg, prec).unwrap();
    let errs = error_column(ex, &kernel, k, grids, prec, Execution::Parallel).unwrap();
    Computed {
        text: errs.iter().map(|e| e.to_sci_string(3)).collect(),
        errors: errs.iter().map(|e| e.to_f64()).collect(),
        orders: convergence_orders(&errs).unwrap(),
    }
}
