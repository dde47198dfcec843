//! Convergence tables for single-point reconstructions of known functions.
//!
//! Four setups are provided. Examples 1 and 3 sample the smooth family
//! `f_k(x) = x^(k+1) e^x`, which has `k` vanishing derivatives at the origin
//! beyond the function value. Examples 2 and 4 sample
//! `g(x) = e^x` for `x <= 0` and `e^(x+1)` otherwise. Examples 1-2 place the
//! nodes at `x_l = (l - 1/2) h` and examples 3-4 at `x_l = (l - 3/4) h`; the
//! reconstruction always targets `x = 0`. Samples are point values, so the
//! tables use [`Sampling::PointValues`].

use std::io::Write;

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational};
use crate::exec::{map_ordered, Execution};
use crate::mpfr::{MpFloat, Precision};
use crate::reconstruct::{
    convergence_orders, default_remap, EpsPolicy, IdealPolicy, Kernel, Scheme, WeightConfig,
};
use crate::scalar::Scalar;
use crate::stencil::{Sampling, StencilTables, TableBuilder, MAX_SUPPORTED_R};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    SmoothCentered,
    JumpCentered,
    SmoothDisplaced,
    JumpDisplaced,
}

impl Example {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Example::SmoothCentered),
            2 => Ok(Example::JumpCentered),
            3 => Ok(Example::SmoothDisplaced),
            4 => Ok(Example::JumpDisplaced),
            _ => Err(Error::domain(format!("example must be 1..=4, got {n}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Example::SmoothCentered => 1,
            Example::JumpCentered => 2,
            Example::SmoothDisplaced => 3,
            Example::JumpDisplaced => 4,
        }
    }

    pub fn tau(self) -> Rational {
        match self {
            Example::SmoothCentered | Example::JumpCentered => rat(1, 2),
            Example::SmoothDisplaced | Example::JumpDisplaced => rat(3, 4),
        }
    }

    pub fn is_smooth(self) -> bool {
        matches!(self, Example::SmoothCentered | Example::SmoothDisplaced)
    }

    /// Displaced stencils have no convex classical weights, so their CWENO
    /// subweights use uniform linear weights.
    fn ideal_policy(self) -> IdealPolicy {
        match self {
            Example::SmoothCentered | Example::JumpCentered => IdealPolicy::ClassicalTauHalf,
            Example::SmoothDisplaced | Example::JumpDisplaced => IdealPolicy::Uniform,
        }
    }

    /// Exact value at the origin: `f_k(0) = 0`, `g(0) = 1`.
    fn value_at_origin<S: Scalar>(self, ctx: S::Context) -> S {
        if self.is_smooth() {
            S::zero(ctx)
        } else {
            S::one(ctx)
        }
    }

    fn sample<S: Scalar>(self, x: &S, k: usize) -> S {
        if self.is_smooth() {
            x.powi(k as u32 + 1) * &x.exp()
        } else if *x <= S::zero(x.context()) {
            x.exp()
        } else {
            (x.clone() + &S::one(x.context())).exp()
        }
    }
}

/// One convergence study: every scheme in `schemes` on the grids
/// `n_start, 2 n_start, ...` up to `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    pub example: Example,
    pub r: usize,
    /// Order of the smooth extremum; ignored for the discontinuous examples.
    pub k: usize,
    pub n_start: usize,
    pub n_max: usize,
    pub schemes: Vec<Scheme>,
    pub bits: u32,
    pub s1: Option<u32>,
    pub s2: Option<u32>,
    pub eps: Option<Rational>,
}

impl TableSpec {
    pub fn new(example: Example, r: usize, k: usize, n_max: usize) -> Self {
        Self {
            example,
            r,
            k,
            n_start: 40,
            n_max,
            schemes: vec![Scheme::WenoJs, Scheme::CwenoLpr, Scheme::CwenoGlobal],
            bits: 333,
            s1: None,
            s2: None,
            eps: None,
        }
    }

    pub fn with_schemes(mut self, schemes: &[Scheme]) -> Self {
        self.schemes = schemes.to_vec();
        self
    }

    pub fn grids(&self) -> Vec<usize> {
        std::iter::successors(Some(self.n_start), |n| n.checked_mul(2))
            .take_while(|&n| n <= self.n_max)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r > MAX_SUPPORTED_R {
            return Err(Error::OrderOutOfRange {
                r: self.r,
                max: MAX_SUPPORTED_R,
            });
        }
        if self.example.is_smooth() && self.k > self.r {
            return Err(Error::domain(format!(
                "k = {} exceeds r = {}",
                self.k, self.r
            )));
        }
        if self.n_start == 0 || self.n_max < self.n_start {
            return Err(Error::domain("grid sequence is empty"));
        }
        if self.schemes.is_empty() {
            return Err(Error::domain("no schemes requested"));
        }
        if self.bits < 24 {
            return Err(Error::domain("precision below 24 bits"));
        }
        Ok(())
    }
}

/// Tables and weight configuration used by `scheme` in `example`.
pub fn accuracy_config(
    example: Example,
    scheme: Scheme,
    r: usize,
    remap: Option<(u32, u32)>,
    eps: Option<Rational>,
) -> Result<(StencilTables, WeightConfig)> {
    let tables = TableBuilder::new(r, example.tau())
        .sampling(Sampling::PointValues)
        .build()?;
    let (s1, s2) = remap.unwrap_or_else(|| default_remap(r));
    let mut cfg = WeightConfig::for_scheme(scheme, r)
        .with_remap(s1, s2)
        .with_ideal(example.ideal_policy());
    if let Some(e) = eps {
        cfg = cfg.with_eps(EpsPolicy::Constant(e));
    }
    Ok((tables, cfg))
}

/// `|P(0) - f(0)|` on each grid in `grids`.
pub fn error_column<S: Scalar>(
    example: Example,
    kernel: &Kernel<S>,
    k: usize,
    grids: &[usize],
    ctx: S::Context,
    exec: Execution,
) -> Result<Vec<S>> {
    let r = kernel.r() as i64;
    let tau = example.tau();
    let exact = example.value_at_origin::<S>(ctx);
    let results = map_ordered(exec, grids, |&n| -> Result<S> {
        let n = n as i64;
        let h = S::from_rational(&rat(1, n), ctx);
        let w: Vec<S> = (-r..=r)
            .map(|l| {
                let x = S::from_rational(&((int(l) - &tau) / int(n)), ctx);
                example.sample(&x, k)
            })
            .collect();
        let v = kernel.reconstruct(&w, &h)?;
        Ok((v - &exact).abs())
    });
    results.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub scheme: String,
    pub r: usize,
    pub k: Option<usize>,
    pub n: usize,
    pub error: f64,
    /// Three significant digits, or `below precision floor`.
    pub error_text: String,
    pub order: Option<f64>,
    pub below_floor: bool,
}

/// Errors smaller than this many units of roundoff are not trusted.
const FLOOR_ULPS: f64 = 1024.0;

pub const BELOW_FLOOR: &str = "below precision floor";

pub fn run_accuracy(spec: &TableSpec, exec: Execution) -> Result<Vec<AccuracyRow>> {
    spec.validate()?;
    let grids = spec.grids();
    let prec = Precision(spec.bits);
    let floor = FLOOR_ULPS * MpFloat::epsilon(prec);
    let remap = match (spec.s1, spec.s2) {
        (None, None) => None,
        (s1, s2) => {
            let (d1, d2) = default_remap(spec.r);
            Some((s1.unwrap_or(d1), s2.unwrap_or(d2)))
        }
    };
    let k = spec.example.is_smooth().then_some(spec.k);
    let mut rows = Vec::new();
    for &scheme in &spec.schemes {
        let (tables, cfg) = accuracy_config(spec.example, scheme, spec.r, remap, spec.eps.clone())?;
        let kernel = Kernel::<MpFloat>::new(&tables, &cfg, prec)?;
        let errors = error_column(spec.example, &kernel, spec.k, &grids, prec, exec)?;
        let below: Vec<bool> = errors.iter().map(|e| e.to_f64() < floor).collect();
        let orders = if errors.iter().all(|e| e.to_f64() > 0.0) {
            convergence_orders(&errors)?
        } else {
            vec![f64::NAN; errors.len().saturating_sub(1)]
        };
        for (i, (e, &n)) in errors.iter().zip(&grids).enumerate() {
            let order = (i > 0 && !below[i] && !below[i - 1]).then(|| orders[i - 1]);
            rows.push(AccuracyRow {
                scheme: scheme.label(spec.r),
                r: spec.r,
                k,
                n,
                error: e.to_f64(),
                error_text: if below[i] {
                    BELOW_FLOOR.to_string()
                } else {
                    e.to_sci_string(3)
                },
                order,
                below_floor: below[i],
            });
        }
    }
    Ok(rows)
}

/// Writes `scheme,r,k,n,error,order` with `---` for the first order of each
/// column and an empty order next to untrusted errors.
pub fn write_accuracy_csv<W: Write>(rows: &[AccuracyRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["scheme", "r", "k", "n", "error", "order"])?;
    let mut prev: Option<&str> = None;
    for row in rows {
        let first = prev != Some(row.scheme.as_str());
        prev = Some(row.scheme.as_str());
        let order = match (first, row.order) {
            (true, _) => "---".to_string(),
            (false, Some(o)) => format!("{o:.2}"),
            (false, None) => String::new(),
        };
        wtr.write_record([
            row.scheme.clone(),
            row.r.to_string(),
            row.k.map_or(String::new(), |k| k.to_string()),
            row.n.to_string(),
            row.error_text.clone(),
            order,
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sequence_doubles() {
        let spec = TableSpec::new(Example::SmoothCentered, 1, 0, 5120);
        assert_eq!(spec.grids(), vec![40, 80, 160, 320, 640, 1280, 2560, 5120]);
    }

    #[test]
    fn rejects_k_above_r() {
        let spec = TableSpec::new(Example::SmoothCentered, 1, 2, 80);
        assert!(spec.validate().is_err());
        let spec = TableSpec::new(Example::JumpCentered, 1, 2, 80);
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn third_order_first_rows() {
        let spec = TableSpec::new(Example::SmoothCentered, 1, 0, 80);
        let rows = run_accuracy(&spec, Execution::Sequential).unwrap();
        let text: Vec<&str> = rows.iter().map(|r| r.error_text.as_str()).collect();
        assert_eq!(
            text,
            ["8.97e-06", "1.11e-06", "1.02e-05", "1.10e-06", "2.86e-06", "3.63e-07"]
        );
    }

    #[test]
    fn binary64_hits_precision_floor() {
        let mut spec = TableSpec::new(Example::SmoothCentered, 2, 0, 40960)
            .with_schemes(&[Scheme::CwenoGlobal]);
        spec.bits = 53;
        let rows = run_accuracy(&spec, Execution::Sequential).unwrap();
        assert!(rows.last().unwrap().below_floor);
        assert!(!rows[0].below_floor);
        let mut buf = Vec::new();
        write_accuracy_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(BELOW_FLOOR));
        assert!(text.lines().nth(1).unwrap().ends_with(",---"));
    }
}
