//! Nonlinear reconstruction kernel: smoothness indicators, subweights, the
//! global average weight, and single-point WENO-JS / CWENO-LPR /
//! CWENO-global reconstructions.
//!
//! All arithmetic is generic over [`Scalar`]. A [`Kernel`] converts the exact
//! tables once into the target scalar type and is then reused for many
//! windows; the free functions at the bottom are one-shot conveniences.
//!
//! Weights are evaluated in a rescaled but mathematically identical form.
//! With `a_k = I_k + eps`, `a_min = min a_k`, `b_k = a_k / a_min` and
//! `q_k = 1 / b_k`, the subweights use `alpha_k = c_k q_k^s` and the global
//! weight uses the power sums of `b_k` and `q_k`. Tiny `eps` such as
//! `1e-100` therefore cannot overflow a binary64 intermediate.

mod binary64;

pub use binary64::Binary64Kernel;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use arrayvec::ArrayVec;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{self, rat, Rational};
use crate::scalar::{convert_vec, Scalar};
use crate::stencil::{
    lpr_extra, uniform_c_ext, Classification, LprTables, Sampling, StencilTables, TableBuilder,
};

/// Largest `r` the floating-point kernel accepts (window width 15).
pub const MAX_KERNEL_R: usize = 7;
const CAP: usize = 2 * MAX_KERNEL_R + 2;

type Buf<S> = ArrayVec<S, CAP>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    WenoJs,
    CwenoLpr,
    CwenoGlobal,
}

impl Scheme {
    pub fn label(self, r: usize) -> String {
        let order = 2 * r + 1;
        match self {
            Scheme::WenoJs => format!("WENO{order}"),
            Scheme::CwenoLpr => format!("CWENO{order}-LPR"),
            Scheme::CwenoGlobal => format!("CWENO{order}"),
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weno" | "weno-js" => Ok(Scheme::WenoJs),
            "cweno-lpr" | "lpr" => Ok(Scheme::CwenoLpr),
            "cweno" | "cweno-global" => Ok(Scheme::CwenoGlobal),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }
}

/// How the `eps` regularization is resolved for a grid spacing `h`.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsPolicy {
    Constant(Rational),
    /// `eps = a * h^2`.
    HSquared(Rational),
}

/// Source of the linear weights `c_k` used inside the subweights.
#[derive(Debug, Clone, PartialEq)]
pub enum IdealPolicy {
    /// The convex ideal weights at `tau = 1/2` for the sampling of the tables
    /// in use (cell averages when no tables are involved).
    ClassicalTauHalf,
    Uniform,
    Custom(Vec<Rational>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalMode {
    PowerM(u32),
    Remap { s1: u32, s2: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightConfig {
    pub scheme: Scheme,
    pub s: u32,
    pub eps: EpsPolicy,
    pub ideal: IdealPolicy,
    pub global: GlobalMode,
    pub c_ext: Option<Vec<Rational>>,
}

fn ceil_half(n: usize) -> u32 {
    n.div_ceil(2) as u32
}

/// `s = ceil((r+1)/2)`.
pub fn default_s(r: usize) -> u32 {
    ceil_half(r + 1)
}

/// `(s1, s2) = (ceil(r/2), ceil((r+1)/2))`.
pub fn default_remap(r: usize) -> (u32, u32) {
    (ceil_half(r).max(1), ceil_half(r + 1))
}

/// The `1e-100` regularization used throughout the accuracy studies.
pub fn tiny_eps() -> EpsPolicy {
    EpsPolicy::Constant(Rational::new(1.into(), num_traits::pow(10.into(), 100)))
}

impl WeightConfig {
    pub fn weno_js(r: usize) -> Self {
        let (s1, s2) = default_remap(r);
        Self {
            scheme: Scheme::WenoJs,
            s: default_s(r),
            eps: tiny_eps(),
            ideal: IdealPolicy::ClassicalTauHalf,
            global: GlobalMode::Remap { s1, s2 },
            c_ext: None,
        }
    }

    pub fn cweno_lpr(r: usize) -> Self {
        Self {
            scheme: Scheme::CwenoLpr,
            ..Self::weno_js(r)
        }
    }

    pub fn cweno_global(r: usize) -> Self {
        Self {
            scheme: Scheme::CwenoGlobal,
            ..Self::weno_js(r)
        }
    }

    pub fn for_scheme(scheme: Scheme, r: usize) -> Self {
        match scheme {
            Scheme::WenoJs => Self::weno_js(r),
            Scheme::CwenoLpr => Self::cweno_lpr(r),
            Scheme::CwenoGlobal => Self::cweno_global(r),
        }
    }

    pub fn with_remap(mut self, s1: u32, s2: u32) -> Self {
        self.global = GlobalMode::Remap { s1, s2 };
        self
    }

    pub fn with_ideal(mut self, ideal: IdealPolicy) -> Self {
        self.ideal = ideal;
        self
    }

    pub fn with_eps(mut self, eps: EpsPolicy) -> Self {
        self.eps = eps;
        self
    }

    /// Checks exponent and `eps` positivity and any custom simplex vectors.
    pub fn validate(&self) -> Result<()> {
        let exps_ok = self.s >= 1
            && match self.global {
                GlobalMode::PowerM(m) => m >= 1,
                GlobalMode::Remap { s1, s2 } => s1 >= 1 && s2 >= 1,
            };
        if !exps_ok {
            return Err(Error::domain("weight exponents must be at least 1"));
        }
        let eps = match &self.eps {
            EpsPolicy::Constant(v) | EpsPolicy::HSquared(v) => v,
        };
        if !exact::is_positive(eps) {
            return Err(Error::domain("eps value or coefficient must be positive"));
        }
        if let IdealPolicy::Custom(c) = &self.ideal {
            check_simplex(c, "custom ideal weights")?;
        }
        if let Some(c) = &self.c_ext {
            check_simplex(c, "c_ext")?;
        }
        Ok(())
    }

    fn resolve_ideal(&self, r: usize, tables: Option<&StencilTables>) -> Result<Vec<Rational>> {
        match &self.ideal {
            IdealPolicy::Uniform => Ok(vec![rat(1, r as i64 + 1); r + 1]),
            IdealPolicy::Custom(c) => {
                if c.len() != r + 1 {
                    return Err(Error::domain(format!(
                        "custom ideal weights have {} entries, expected {}",
                        c.len(),
                        r + 1
                    )));
                }
                Ok(c.clone())
            }
            IdealPolicy::ClassicalTauHalf => {
                let half = rat(1, 2);
                match tables {
                    Some(t) if *t.tau() == half => convex_ideal(t),
                    Some(t) => classical_ideal(r, t.sampling()),
                    None => classical_ideal(r, Sampling::CellAverages),
                }
            }
        }
    }
}

/// Convex ideal weights at `tau = 1/2`, derived once per `(r, sampling)`.
fn classical_ideal(r: usize, sampling: Sampling) -> Result<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Sampling), Vec<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache lock").get(&(r, sampling)) {
        return Ok(c.clone());
    }
    let t = TableBuilder::new(r, rat(1, 2)).sampling(sampling).build()?;
    let c = convex_ideal(&t)?;
    cache
        .lock()
        .expect("cache lock")
        .insert((r, sampling), c.clone());
    Ok(c)
}

fn check_simplex(c: &[Rational], what: &str) -> Result<()> {
    let sum: Rational = c.iter().sum();
    if c.is_empty() || !sum.is_one() || c.iter().any(|v| !exact::is_positive(v)) {
        return Err(Error::domain(format!(
            "{what} must be strictly positive and sum to 1"
        )));
    }
    Ok(())
}

fn convex_ideal(t: &StencilTables) -> Result<Vec<Rational>> {
    match (&t.ideal().weights, t.ideal().classification) {
        (Some(w), Classification::Convex) => Ok(w.clone()),
        (_, class) => Err(Error::IdealWeightsUnusable {
            tau: exact::format_rational(t.tau()),
            classification: class.to_string(),
        }),
    }
}

/// Indicators, subweights and (for CWENO-global) the global weight of one
/// reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightReport<S> {
    pub indicators: Vec<S>,
    pub subweights: Vec<S>,
    pub global: Option<S>,
    pub rho: Option<S>,
}

/// A window of `2r + 1` samples with the grid spacing used by `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window<S> {
    values: Vec<S>,
    h: S,
}

impl<S: Scalar> Window<S> {
    pub fn new(values: Vec<S>, h: S) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::domain("window length must be odd (2r + 1)"));
        }
        check_finite(&values)?;
        if !(h.is_finite() && h > S::zero(h.context())) {
            return Err(Error::domain("grid spacing must be positive and finite"));
        }
        Ok(Self { values, h })
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn h(&self) -> &S {
        &self.h
    }

    pub fn r(&self) -> usize {
        self.values.len() / 2
    }
}

fn check_finite<S: Scalar>(values: &[S]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::domain(format!("window value {i} is not finite"))),
        None => Ok(()),
    }
}

/// Flattened scalar copy of the tables plus resolved weights for one scheme.
#[derive(Debug, Clone)]
pub struct Kernel<S: Scalar> {
    r: usize,
    scheme: Scheme,
    s: u32,
    global: GlobalMode,
    eps: EpsPolicy,
    eps_const: Option<S>,
    ctx: S::Context,
    /// `(r+1) x (r+1)` row-major.
    sub_eval: Vec<S>,
    full_eval: Vec<S>,
    /// `r+1` blocks of `r x r`: each form restricted to differences from
    /// the first slice entry (see [`reduced_form`]).
    forms: Vec<S>,
    ideal: Vec<S>,
    /// LPR only: extra row, reduced extra form `2r x 2r`, weights `c_0..c_{r+1}`.
    p_ext: Vec<S>,
    q_ext: Vec<S>,
    c_ext: Vec<S>,
}

impl<S: Scalar> Kernel<S> {
    /// Prepares a kernel for `cfg.scheme` on `tables`. CWENO-LPR tables are
    /// derived here from `cfg.c_ext` (uniform when absent).
    pub fn new(tables: &StencilTables, cfg: &WeightConfig, ctx: S::Context) -> Result<Self> {
        match cfg.scheme {
            Scheme::CwenoLpr => {
                let c = cfg
                    .c_ext
                    .clone()
                    .unwrap_or_else(|| uniform_c_ext(tables.r()));
                let lt = lpr_extra(tables, &c)?;
                Self::from_lpr(&lt, cfg, ctx)
            }
            _ => Self::build(tables, None, cfg, ctx),
        }
    }

    pub fn from_lpr(lt: &LprTables, cfg: &WeightConfig, ctx: S::Context) -> Result<Self> {
        if cfg.scheme != Scheme::CwenoLpr {
            return Err(Error::domain("LPR tables require the CWENO-LPR scheme"));
        }
        Self::build(lt.base(), Some(lt), cfg, ctx)
    }

    fn build(
        tables: &StencilTables,
        lpr: Option<&LprTables>,
        cfg: &WeightConfig,
        ctx: S::Context,
    ) -> Result<Self> {
        cfg.validate()?;
        let r = tables.r();
        if r > MAX_KERNEL_R {
            return Err(Error::OrderOutOfRange {
                r,
                max: MAX_KERNEL_R,
            });
        }
        let ideal = match cfg.scheme {
            Scheme::WenoJs => convex_ideal(tables)?,
            Scheme::CwenoGlobal => cfg.resolve_ideal(r, Some(tables))?,
            Scheme::CwenoLpr => Vec::new(),
        };
        let flat = |m: &[Vec<Rational>]| -> Vec<S> {
            m.iter()
                .flat_map(|row| convert_vec::<S>(row, ctx))
                .collect()
        };
        let (p_ext, q_ext, c_ext) = match lpr {
            Some(lt) => (
                convert_vec(lt.p_ext_eval(), ctx),
                reduced_form::<S>(lt.q_ext(), ctx),
                convert_vec(lt.c_ext(), ctx),
            ),
            None => (Vec::new(), Vec::new(), Vec::new()),
        };
        let eps_const = match &cfg.eps {
            EpsPolicy::Constant(v) => Some(S::from_rational(v, ctx)),
            EpsPolicy::HSquared(_) => None,
        };
        Ok(Self {
            r,
            scheme: cfg.scheme,
            s: cfg.s,
            global: cfg.global,
            eps: cfg.eps.clone(),
            eps_const,
            ctx,
            sub_eval: flat(tables.sub_eval()),
            full_eval: convert_vec(tables.full_eval(), ctx),
            forms: tables
                .smooth_forms()
                .iter()
                .flat_map(|q| reduced_form::<S>(q, ctx))
                .collect(),
            ideal: convert_vec(&ideal, ctx),
            p_ext,
            q_ext,
            c_ext,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn width(&self) -> usize {
        2 * self.r + 1
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// `eps` for grid spacing `h`.
    pub fn eps(&self, h: &S) -> S {
        match (&self.eps_const, &self.eps) {
            (Some(e), _) => e.clone(),
            (None, EpsPolicy::HSquared(a)) => S::from_rational(a, self.ctx) * h * h,
            (None, EpsPolicy::Constant(v)) => S::from_rational(v, self.ctx),
        }
    }

    fn check(&self, w: &[S]) -> Result<()> {
        if w.len() != self.width() {
            return Err(Error::domain(format!(
                "window has {} values, expected {}",
                w.len(),
                self.width()
            )));
        }
        check_finite(w)
    }

    /// Validated reconstruction of one window.
    pub fn reconstruct(&self, w: &[S], h: &S) -> Result<S> {
        self.check(w)?;
        Ok(self.eval(w, &self.eps(h)))
    }

    /// Reconstruction without input validation; `w` must have `2r + 1`
    /// finite entries and `eps` must be positive.
    #[inline]
    pub fn eval(&self, w: &[S], eps: &S) -> S {
        let mut ind = Buf::<S>::new();
        self.indicators_into(w, &mut ind);
        let mut sub = Buf::<S>::new();
        self.sub_values_into(w, &mut sub);
        match self.scheme {
            Scheme::WenoJs => {
                let mut om = Buf::<S>::new();
                nonlinear_weights(&self.ideal, &ratios(&ind, eps), self.s, &mut om);
                dot(&om, &sub)
            }
            Scheme::CwenoGlobal => {
                let mut om = Buf::<S>::new();
                let rt = ratios(&ind, eps);
                nonlinear_weights(&self.ideal, &rt, self.s, &mut om);
                let q = dot(&om, &sub);
                let omega = self.global_weight(&rt);
                self.blend_values(w, &omega, q)
            }
            Scheme::CwenoLpr => {
                ind.push(diff_form(&self.q_ext, w));
                sub.push(dot(&self.p_ext, w));
                let mut om = Buf::<S>::new();
                nonlinear_weights(&self.c_ext, &ratios(&ind, eps), self.s, &mut om);
                dot(&om, &sub)
            }
        }
    }

    /// Reconstruction together with its indicators and weights.
    pub fn report(&self, w: &[S], h: &S) -> Result<(S, WeightReport<S>)> {
        self.check(w)?;
        let eps = self.eps(h);
        let mut ind = Buf::<S>::new();
        self.indicators_into(w, &mut ind);
        let mut sub = Buf::<S>::new();
        self.sub_values_into(w, &mut sub);
        let (value, om, global, rho) = match self.scheme {
            Scheme::WenoJs | Scheme::CwenoGlobal => {
                let mut om = Buf::<S>::new();
                let rt = ratios(&ind, &eps);
                nonlinear_weights(&self.ideal, &rt, self.s, &mut om);
                let q = dot(&om, &sub);
                if self.scheme == Scheme::WenoJs {
                    (q, om, None, None)
                } else {
                    let omega = self.global_weight(&rt);
                    let rho = global_power(&rt, 1);
                    let v = self.blend_values(w, &omega, q);
                    (v, om, Some(omega), Some(rho))
                }
            }
            Scheme::CwenoLpr => {
                ind.push(diff_form(&self.q_ext, w));
                sub.push(dot(&self.p_ext, w));
                let mut om = Buf::<S>::new();
                nonlinear_weights(&self.c_ext, &ratios(&ind, &eps), self.s, &mut om);
                (dot(&om, &sub), om, None, None)
            }
        };
        let report = WeightReport {
            indicators: ind.to_vec(),
            subweights: om.to_vec(),
            global,
            rho,
        };
        Ok((value, report))
    }

    /// CWENO-global value with the global weight forced to `omega`; 1 gives
    /// the full-stencil value and 0 gives the subweight blend `q_j`.
    pub fn blend(&self, w: &[S], h: &S, omega: &S) -> Result<S> {
        if self.scheme != Scheme::CwenoGlobal {
            return Err(Error::domain("forced global weight needs CWENO-global"));
        }
        self.check(w)?;
        let eps = self.eps(h);
        let mut ind = Buf::<S>::new();
        self.indicators_into(w, &mut ind);
        let mut sub = Buf::<S>::new();
        self.sub_values_into(w, &mut sub);
        let mut om = Buf::<S>::new();
        nonlinear_weights(&self.ideal, &ratios(&ind, &eps), self.s, &mut om);
        let q = dot(&om, &sub);
        Ok(self.blend_values(w, omega, q))
    }

    fn blend_values(&self, w: &[S], omega: &S, q: S) -> S {
        let full = dot(&self.full_eval, w);
        let one = S::one(self.ctx);
        omega.clone() * &full + (one - omega) * &q
    }

    fn global_weight(&self, rt: &Ratios<S>) -> S {
        match self.global {
            GlobalMode::PowerM(m) => global_power(rt, m),
            GlobalMode::Remap { s1, s2 } => global_remap(rt, s1, s2),
        }
    }

    fn indicators_into(&self, w: &[S], out: &mut Buf<S>) {
        let n = self.r + 1;
        let m = self.r * self.r;
        for i in 0..n {
            out.push(diff_form(&self.forms[i * m..(i + 1) * m], &w[i..i + n]));
        }
    }

    fn sub_values_into(&self, w: &[S], out: &mut Buf<S>) {
        let n = self.r + 1;
        for i in 0..n {
            out.push(dot(&self.sub_eval[i * n..(i + 1) * n], &w[i..i + n]));
        }
    }
}

#[inline]
fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = a[0].clone() * &b[0];
    for (x, y) in a[1..].iter().zip(&b[1..]) {
        acc += &(x.clone() * y);
    }
    acc
}

/// Drops the first row and column of a form that annihilates constants.
/// Because `Q 1 = 0`, `w^T Q w = d^T Q' d` with `d_a = w_a - w_0` and `Q'`
/// the trailing block, so constant data gives exactly zero.
fn reduced_form<S: Scalar>(q: &[Vec<Rational>], ctx: S::Context) -> Vec<S> {
    q[1..]
        .iter()
        .flat_map(|row| convert_vec::<S>(&row[1..], ctx))
        .collect()
}

/// `d^T Q' d` for a reduced form of size `(len(w) - 1)^2`.
#[inline]
fn diff_form<S: Scalar>(q: &[S], w: &[S]) -> S {
    let n = w.len() - 1;
    let mut d = Buf::<S>::new();
    for v in &w[1..] {
        d.push(v.clone() - &w[0]);
    }
    let mut acc = dot(&q[..n], &d) * &d[0];
    for a in 1..n {
        acc += &(dot(&q[a * n..(a + 1) * n], &d) * &d[a]);
    }
    clamp_nonneg(acc)
}

/// Rounding can leave a tiny negative value for near-constant data.
#[inline]
fn clamp_nonneg<S: Scalar>(v: S) -> S {
    let zero = S::zero(v.context());
    if v < zero {
        zero
    } else {
        v
    }
}

/// `b_k = a_k / a_min` and `q_k = 1 / b_k` for `a_k = I_k + eps`.
struct Ratios<S> {
    b: Buf<S>,
    q: Buf<S>,
}

fn ratios<S: Scalar>(ind: &[S], eps: &S) -> Ratios<S> {
    let mut a = Buf::<S>::new();
    for i in ind {
        a.push(i.clone() + eps);
    }
    let mut amin = a[0].clone();
    for v in &a[1..] {
        if *v < amin {
            amin = v.clone();
        }
    }
    let inv = amin.recip();
    let mut b = Buf::<S>::new();
    let mut q = Buf::<S>::new();
    for ak in a {
        let bk = ak * &inv;
        q.push(bk.recip());
        b.push(bk);
    }
    Ratios { b, q }
}

fn nonlinear_weights<S: Scalar>(c: &[S], rt: &Ratios<S>, s: u32, out: &mut Buf<S>) {
    let mut sum: Option<S> = None;
    for (ck, qk) in c.iter().zip(&rt.q) {
        let alpha = qk.powi(s) * ck;
        sum = Some(match sum {
            None => alpha.clone(),
            Some(v) => v + &alpha,
        });
        out.push(alpha);
    }
    let inv = sum.expect("at least one weight").recip();
    for v in out.iter_mut() {
        *v *= &inv;
    }
}

fn global_power<S: Scalar>(rt: &Ratios<S>, m: u32) -> S {
    let ctx = rt.b[0].context();
    let mut sp = S::zero(ctx);
    let mut sn = S::zero(ctx);
    for (bk, qk) in rt.b.iter().zip(&rt.q) {
        sp += &bk.powi(m);
        sn += &qk.powi(m);
    }
    let n = S::from_i64(rt.b.len() as i64, ctx);
    let omega = (n.clone() * &n) / (sp * &sn);
    let one = S::one(ctx);
    if omega > one {
        one
    } else {
        omega
    }
}

fn global_remap<S: Scalar>(rt: &Ratios<S>, s1: u32, s2: u32) -> S {
    let rho = global_power(rt, 1);
    let one = S::one(rho.context());
    let t = if s1 == 1 {
        rho
    } else {
        one.clone() - (one - rho).powi(s1)
    };
    if s2 == 1 {
        t
    } else {
        t.powi(s2)
    }
}

fn check_indicators<S: Scalar>(ind: &[S]) -> Result<()> {
    if ind.is_empty() || ind.len() > CAP {
        return Err(Error::domain("indicator vector has unsupported length"));
    }
    check_finite(ind)?;
    let zero = S::zero(ind[0].context());
    if ind.iter().any(|v| *v < zero) {
        return Err(Error::domain("indicators must be nonnegative"));
    }
    Ok(())
}

fn check_eps<S: Scalar>(eps: &S) -> Result<()> {
    if eps.is_finite() && *eps > S::zero(eps.context()) {
        Ok(())
    } else {
        Err(Error::domain("eps must be positive"))
    }
}

/// Smoothness indicators `I_i = w_i^T Q_i w_i` of the `r + 1` substencils.
pub fn smoothness_indicators<S: Scalar>(w: &[S], t: &StencilTables) -> Result<Vec<S>> {
    let n = t.r() + 1;
    if w.len() != 2 * t.r() + 1 {
        return Err(Error::domain(format!(
            "window has {} values, expected {}",
            w.len(),
            2 * t.r() + 1
        )));
    }
    check_finite(w)?;
    let ctx = w[0].context();
    Ok(t.smooth_forms()
        .iter()
        .enumerate()
        .map(|(i, q)| diff_form(&reduced_form::<S>(q, ctx), &w[i..i + n]))
        .collect())
}

/// Normalized subweights `alpha_i / sum(alpha)` with `alpha_k = c_k / (I_k + eps)^s`.
/// With [`IdealPolicy::ClassicalTauHalf`] the `c_k` are the cell-average
/// ideal weights at `tau = 1/2` for `r = I.len() - 1`.
pub fn subweights<S: Scalar>(ind: &[S], cfg: &WeightConfig, h: &S) -> Result<Vec<S>> {
    cfg.validate()?;
    check_indicators(ind)?;
    let ctx = h.context();
    let eps = match &cfg.eps {
        EpsPolicy::Constant(v) => S::from_rational(v, ctx),
        EpsPolicy::HSquared(a) => S::from_rational(a, ctx) * h * h,
    };
    check_eps(&eps)?;
    let r = ind.len() - 1;
    let c = convert_vec::<S>(&cfg.resolve_ideal(r, None)?, ctx);
    let mut out = Buf::<S>::new();
    nonlinear_weights(&c, &ratios(ind, &eps), cfg.s, &mut out);
    Ok(out.to_vec())
}

/// `(r+1)^2 / (sum (I_i+eps)^m * sum (I_i+eps)^-m)`, always in `[0, 1]`.
pub fn global_weight_power<S: Scalar>(ind: &[S], m: u32, eps: &S) -> Result<S> {
    check_indicators(ind)?;
    check_eps(eps)?;
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    Ok(global_power(&ratios(ind, eps), m))
}

/// `(1 - (1 - rho)^s1)^s2` with `rho` the `m = 1` global weight.
pub fn global_weight_remap<S: Scalar>(ind: &[S], s1: u32, s2: u32, eps: &S) -> Result<S> {
    check_indicators(ind)?;
    check_eps(eps)?;
    if s1 == 0 || s2 == 0 {
        return Err(Error::domain("s1 and s2 must be at least 1"));
    }
    Ok(global_remap(&ratios(ind, eps), s1, s2))
}

fn one_shot<S: Scalar>(
    w: &Window<S>,
    t: &StencilTables,
    cfg: &WeightConfig,
    scheme: Scheme,
) -> Result<S> {
    if cfg.scheme != scheme {
        return Err(Error::domain(format!(
            "configuration is for {:?}, not {:?}",
            cfg.scheme, scheme
        )));
    }
    Kernel::<S>::new(t, cfg, w.h().context())?.reconstruct(w.values(), w.h())
}

/// Classical WENO-JS value at `x_{j+tau}`. Fails unless the ideal weights of
/// `t` are convex.
pub fn reconstruct_weno<S: Scalar>(
    w: &Window<S>,
    t: &StencilTables,
    cfg: &WeightConfig,
) -> Result<S> {
    one_shot(w, t, cfg, Scheme::WenoJs)
}

pub fn reconstruct_cweno_lpr<S: Scalar>(
    w: &Window<S>,
    lt: &LprTables,
    cfg: &WeightConfig,
) -> Result<S> {
    if cfg.scheme != Scheme::CwenoLpr {
        return Err(Error::domain("configuration is not CWENO-LPR"));
    }
    Kernel::<S>::from_lpr(lt, cfg, w.h().context())?.reconstruct(w.values(), w.h())
}

/// `omega_j p_j + (1 - omega_j) q_j` at `x_{j+tau}`.
pub fn reconstruct_cweno_global<S: Scalar>(
    w: &Window<S>,
    t: &StencilTables,
    cfg: &WeightConfig,
) -> Result<S> {
    one_shot(w, t, cfg, Scheme::CwenoGlobal)
}

/// `log2(e_k / e_{k+1})` for consecutive errors on doubling grids.
pub fn convergence_orders<S: Scalar>(errors: &[S]) -> Result<Vec<f64>> {
    let Some(first) = errors.first() else {
        return Ok(Vec::new());
    };
    let zero = S::zero(first.context());
    if errors.iter().any(|e| !(e.is_finite() && *e > zero)) {
        return Err(Error::domain("errors must be positive and finite"));
    }
    let ln2 = S::from_i64(2, first.context()).ln();
    Ok(errors
        .windows(2)
        .map(|p| ((p[0].clone() / &p[1]).ln() / &ln2).to_f64())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::mpfr::{MpFloat, Precision};
    use crate::stencil::build_tables;

    fn half() -> Rational {
        rat(1, 2)
    }

    #[test]
    fn linear_data_has_unit_indicators() {
        let t = build_tables(2, half()).unwrap();
        let w = [0.0, 1.0, 2.0, 3.0, 4.0];
        for v in smoothness_indicators(&w, &t).unwrap() {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let c = [2.5; 5];
        assert_eq!(smoothness_indicators(&c, &t).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn equal_indicators_give_ideal_weights() {
        let cfg = WeightConfig::cweno_global(2);
        let w = subweights(&[0.3, 0.3, 0.3], &cfg, &0.01).unwrap();
        for (a, b) in w.iter().zip([0.1, 0.6, 0.3]) {
            assert!((a - b).abs() < 1e-15);
        }
        let cfg = cfg.with_ideal(IdealPolicy::Uniform);
        let w = subweights(&[0.3, 0.3, 0.3], &cfg, &0.01).unwrap();
        assert!(w.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn rough_substencil_is_suppressed() {
        let cfg = WeightConfig::cweno_global(2).with_eps(EpsPolicy::Constant(rat(1, 1_000_000)));
        let w = subweights(&[0.0, 0.0, 1.0e3], &WeightConfig { s: 2, ..cfg }, &0.1).unwrap();
        assert!(w[2] < 1e-17);
        assert!((w[0] + w[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn global_weight_examples() {
        let p = global_weight_power(&[0.0, 3.0], 1, &1.0).unwrap();
        assert!((p - 16.0 / 25.0).abs() < 1e-15);
        let q = global_weight_remap(&[0.0, 3.0], 2, 2, &1.0).unwrap();
        let expect = (544.0f64 / 625.0).powi(2);
        assert!((q - expect).abs() < 1e-15);
        assert_eq!(
            global_weight_power(&[0.7, 0.7, 0.7], 3, &1e-6).unwrap(),
            1.0
        );
        let far = global_weight_power(&[0.0, 1e12], 2, &1.0).unwrap();
        assert!(far < 1e-23);
    }

    #[test]
    fn exact_rational_oracle_for_remap() {
        let p = Precision(200);
        let ind = [MpFloat::zero(p), MpFloat::from_i64(3, p)];
        let one = MpFloat::one(p);
        let v = global_weight_remap(&ind, 2, 2, &one).unwrap();
        let expect = MpFloat::from_rational(&(rat(544, 625) * rat(544, 625)), p);
        assert!((v - &expect).abs().to_f64() < 1e-55);
    }

    #[test]
    fn weno_is_exact_on_linear_data() {
        let t = build_tables(2, half()).unwrap();
        let cfg = WeightConfig::weno_js(2);
        // Cell averages of f(x) = x equal the centre values.
        let w = Window::new(vec![-2.0, -1.0, 0.0, 1.0, 2.0], 1.0).unwrap();
        let v = reconstruct_weno(&w, &t, &cfg).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn weno_rejects_signed_ideal_weights() {
        let t = build_tables(2, rat(7, 100)).unwrap();
        let w = Window::new(vec![0.0; 5], 1.0).unwrap();
        let err = reconstruct_weno(&w, &t, &WeightConfig::weno_js(2)).unwrap_err();
        assert!(matches!(err, Error::IdealWeightsUnusable { .. }));
    }

    #[test]
    fn constants_are_reproduced_by_every_scheme() {
        let t = build_tables(3, rat(3, 4)).unwrap();
        let w = Window::new(vec![1.75; 7], 0.01).unwrap();
        let lt = lpr_extra(&t, &uniform_c_ext(3)).unwrap();
        let cfg = WeightConfig::cweno_global(3).with_ideal(IdealPolicy::Uniform);
        let g = reconstruct_cweno_global(&w, &t, &cfg).unwrap();
        let l = reconstruct_cweno_lpr(&w, &lt, &WeightConfig::cweno_lpr(3)).unwrap();
        assert!((g - 1.75).abs() < 1e-14);
        assert!((l - 1.75).abs() < 1e-14);
        let k = Kernel::<f64>::new(&t, &cfg, ()).unwrap();
        let (_, rep) = k.report(w.values(), w.h()).unwrap();
        assert_eq!(rep.global, Some(1.0));
    }

    #[test]
    fn forced_global_weight_selects_components() {
        let t = build_tables(2, half()).unwrap();
        let cfg = WeightConfig::cweno_global(2);
        let k = Kernel::<f64>::new(&t, &cfg, ()).unwrap();
        let w = [0.1, 0.5, -0.3, 2.0, 0.7];
        let full: f64 = t
            .full_eval()
            .iter()
            .zip(&w)
            .map(|(c, v)| exact::to_f64(c) * v)
            .sum();
        assert!((k.blend(&w, &1.0, &1.0).unwrap() - full).abs() < 1e-14);
        let weno = Kernel::<f64>::new(&t, &WeightConfig::weno_js(2), ()).unwrap();
        let q = weno.reconstruct(&w, &1.0).unwrap();
        assert!((k.blend(&w, &1.0, &0.0).unwrap() - q).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_windows() {
        let t = build_tables(1, half()).unwrap();
        let k = Kernel::<f64>::new(&t, &WeightConfig::weno_js(1), ()).unwrap();
        assert!(k.reconstruct(&[0.0, f64::NAN, 1.0], &1.0).is_err());
        assert!(k.reconstruct(&[0.0, 1.0], &1.0).is_err());
        assert!(Window::new(vec![0.0, f64::INFINITY, 1.0], 1.0).is_err());
    }

    #[test]
    fn convergence_order_definition() {
        assert_eq!(convergence_orders(&[8e-6, 1e-6]).unwrap(), vec![3.0]);
        assert_eq!(convergence_orders(&[2.0, 2.0]).unwrap(), vec![0.0]);
        assert!(convergence_orders(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn lpr_third_order_at_three_quarters() {
        // Cell averages of e^x on x_l = (l - 3/4) h, target x = 0, so the
        // evaluation point sits at tau = 3/4 from the central cell.
        let p = Precision(200);
        let t = build_tables(1, rat(3, 4)).unwrap();
        let cfg = WeightConfig::cweno_lpr(1);
        let k = Kernel::<MpFloat>::new(&t, &cfg, p).unwrap();
        let mut errs = Vec::new();
        for n in [40i64, 80, 160, 320] {
            let h = MpFloat::from_rational(&rat(1, n), p);
            let w: Vec<MpFloat> = (-1..=1)
                .map(|l| {
                    let a = MpFloat::from_rational(&(int(l) - rat(5, 4)), p) * &h;
                    let b = a.clone() + &h;
                    (b.exp() - a.exp()) / &h
                })
                .collect();
            let v = k.reconstruct(&w, &h).unwrap();
            errs.push((v - &MpFloat::one(p)).abs());
        }
        let orders = convergence_orders(&errs).unwrap();
        assert!((orders.last().unwrap() - 3.0).abs() < 0.05, "{orders:?}");
    }
}
