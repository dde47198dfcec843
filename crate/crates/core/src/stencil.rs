//! Exact coefficient tables for a reconstruction of order `2r + 1` at the
//! in-cell offset `tau`.
//!
//! Every coefficient is derived in rational arithmetic from moment
//! conditions. Coordinates are normalized by the grid spacing and centered on
//! the middle node of the stencil, so node `l` sits at `l` for
//! `l = -r..=r` and the target point is `tau`.
//!
//! Two sample interpretations are supported ([`Sampling`]): cell averages,
//! as used by conservative finite differences, and point values, as used by
//! plain interpolation. The smoothness-indicator quadratic forms always come
//! from the cell-average reconstruction polynomials of each substencil (the
//! classical Jiang-Shu functional), integrated over the central cell
//! `[-1/2, 1/2]` regardless of `tau`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, int, rat, Poly, RatMatrix, Rational};

/// Largest half-width accepted without [`TableBuilder::allow_high_order`].
pub const MAX_SUPPORTED_R: usize = 6;

/// How the 2r+1 stencil samples relate to the underlying function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Samples are cell averages over `[l - 1/2, l + 1/2]`.
    CellAverages,
    /// Samples are point values at the nodes.
    PointValues,
}

impl std::fmt::Display for Sampling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sampling::CellAverages => "cell-averages",
            Sampling::PointValues => "point-values",
        })
    }
}

/// Whether the ideal linear weights at a given `tau` form a usable convex
/// combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// All weights in (0, 1).
    Convex,
    /// Weights exist but at least one lies outside (0, 1).
    Signed,
    /// No (unique) set of weights reproduces the full-stencil evaluation.
    Singular,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Convex => "convex",
            Classification::Signed => "signed",
            Classification::Singular => "singular",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealWeights {
    pub weights: Option<Vec<Rational>>,
    pub classification: Classification,
}

/// Evaluation rows, ideal weights and smoothness forms for one `(r, tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilTables {
    pub(crate) r: usize,
    pub(crate) tau: Rational,
    pub(crate) sampling: Sampling,
    pub(crate) sub_eval: RatMatrix,
    pub(crate) full_eval: Vec<Rational>,
    pub(crate) smooth_forms: Vec<RatMatrix>,
    pub(crate) ideal: IdealWeights,
}

/// Tables for the Levy-Puppo-Russo central WENO variant: the base tables
/// plus the extra degree-2r polynomial and its indicator form.
#[derive(Debug, Clone, PartialEq)]
pub struct LprTables {
    pub(crate) base: StencilTables,
    pub(crate) c_ext: Vec<Rational>,
    pub(crate) p_ext_eval: Vec<Rational>,
    pub(crate) q_ext: RatMatrix,
}

/// Builder for [`StencilTables`] with optional settings.
#[derive(Debug, Clone)]
pub struct TableBuilder {
    r: usize,
    tau: Rational,
    sampling: Sampling,
    allow_high_order: bool,
}

impl TableBuilder {
    pub fn new(r: usize, tau: Rational) -> Self {
        Self {
            r,
            tau,
            sampling: Sampling::CellAverages,
            allow_high_order: false,
        }
    }

    pub fn sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    /// Accept `r > 6`. Such tables are built the same way but carry no
    /// golden tests; integer growth in the coefficients is unbounded.
    pub fn allow_high_order(mut self) -> Self {
        self.allow_high_order = true;
        self
    }

    pub fn build(self) -> Result<StencilTables> {
        let max = if self.allow_high_order {
            usize::MAX
        } else {
            MAX_SUPPORTED_R
        };
        if self.r == 0 || self.r > max {
            return Err(Error::OrderOutOfRange {
                r: self.r,
                max: MAX_SUPPORTED_R,
            });
        }
        check_tau(&self.tau)?;
        Ok(StencilTables::derive(self.r, self.tau, self.sampling))
    }
}

fn check_tau(tau: &Rational) -> Result<()> {
    if *tau < Rational::zero() || *tau >= Rational::one() {
        return Err(Error::domain(format!(
            "tau = {} outside [0, 1)",
            exact::format_rational(tau)
        )));
    }
    Ok(())
}

/// Builds cell-average tables for `(r, tau)`, `1 <= r <= 6`, `0 <= tau < 1`.
pub fn build_tables(r: usize, tau: Rational) -> Result<StencilTables> {
    TableBuilder::new(r, tau).build()
}

/// Exact ideal weights of the cell-average tables at `(r, tau)` and their
/// classification.
pub fn ideal_weights(r: usize, tau: Rational) -> Result<(Option<Vec<Rational>>, Classification)> {
    let t = build_tables(r, tau)?;
    Ok((t.ideal.weights, t.ideal.classification))
}

/// Basis polynomials for the samples at `nodes`: entry `u` is the polynomial
/// whose samples are the unit vector `e_u`.
fn basis(nodes: &[i64], sampling: Sampling) -> Vec<Poly> {
    let n = nodes.len();
    let half = rat(1, 2);
    let moments: RatMatrix = nodes
        .iter()
        .map(|&l| {
            let x = int(l);
            (0..n)
                .map(|d| match sampling {
                    Sampling::PointValues => exact::pow(&x, d),
                    Sampling::CellAverages => {
                        let e = d + 1;
                        (exact::pow(&(&x + &half), e) - exact::pow(&(&x - &half), e))
                            / int(e as i64)
                    }
                })
                .collect()
        })
        .collect();
    let identity: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    // Coefficients C solve M C = I; column u of C holds basis polynomial u.
    let c = exact::solve(&moments, &identity)
        .x
        .expect("moment matrix on distinct nodes is invertible");
    (0..n)
        .map(|u| Poly((0..n).map(|d| c[d][u].clone()).collect()))
        .collect()
}

/// `Q[a][b] = sum_{k=1}^{kmax} int_{-1/2}^{1/2} D^k p_a * D^k p_b`.
fn smoothness_form(polys: &[Poly], kmax: usize) -> RatMatrix {
    let n = polys.len();
    let lo = rat(-1, 2);
    let hi = rat(1, 2);
    let mut derivs: Vec<Vec<Poly>> = Vec::with_capacity(kmax);
    let mut current: Vec<Poly> = polys.to_vec();
    for _ in 0..kmax {
        current = current.iter().map(Poly::derivative).collect();
        derivs.push(current.clone());
    }
    let mut q = vec![vec![Rational::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let mut acc = Rational::zero();
            for dk in &derivs {
                acc += dk[a].mul(&dk[b]).integrate(&lo, &hi);
            }
            q[a][b] = acc.clone();
            q[b][a] = acc;
        }
    }
    q
}

fn substencil_nodes(r: usize, i: usize) -> Vec<i64> {
    let r = r as i64;
    let i = i as i64;
    (-r + i..=i).collect()
}

fn full_nodes(r: usize) -> Vec<i64> {
    let r = r as i64;
    (-r..=r).collect()
}

/// Pads a substencil row `i` (width r+1) to the full window width 2r+1.
pub(crate) fn pad_row(row: &[Rational], i: usize, r: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); 2 * r + 1];
    for (a, c) in row.iter().enumerate() {
        out[i + a] = c.clone();
    }
    out
}

fn classify(r: usize, sub_eval: &RatMatrix, full_eval: &[Rational]) -> IdealWeights {
    // Unknowns c_0..c_r; one equation per window column.
    let padded: Vec<Vec<Rational>> = (0..=r).map(|i| pad_row(&sub_eval[i], i, r)).collect();
    let a: RatMatrix = (0..2 * r + 1)
        .map(|col| (0..=r).map(|i| padded[i][col].clone()).collect())
        .collect();
    let b: RatMatrix = full_eval.iter().map(|v| vec![v.clone()]).collect();
    let sol = exact::solve(&a, &b);
    let determined = sol.consistent && sol.rank == r + 1;
    match sol.x.filter(|_| determined) {
        None => IdealWeights {
            weights: None,
            classification: Classification::Singular,
        },
        Some(x) => {
            let weights: Vec<Rational> = x.into_iter().map(|mut row| row.remove(0)).collect();
            let convex = weights
                .iter()
                .all(|c| exact::is_positive(c) && *c < Rational::one());
            IdealWeights {
                weights: Some(weights),
                classification: if convex {
                    Classification::Convex
                } else {
                    Classification::Signed
                },
            }
        }
    }
}

fn eval_row(polys: &[Poly], tau: &Rational) -> Vec<Rational> {
    polys.iter().map(|p| p.eval(tau)).collect()
}

impl StencilTables {
    fn derive(r: usize, tau: Rational, sampling: Sampling) -> Self {
        let sub_eval: RatMatrix = (0..=r)
            .map(|i| eval_row(&basis(&substencil_nodes(r, i), sampling), &tau))
            .collect();
        let full_eval = eval_row(&basis(&full_nodes(r), sampling), &tau);
        let smooth_forms = (0..=r)
            .map(|i| smoothness_form(&basis(&substencil_nodes(r, i), Sampling::CellAverages), r))
            .collect();
        let ideal = classify(r, &sub_eval, &full_eval);
        Self {
            r,
            tau,
            sampling,
            sub_eval,
            full_eval,
            smooth_forms,
            ideal,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> usize {
        2 * self.r + 1
    }

    pub fn tau(&self) -> &Rational {
        &self.tau
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
    }

    /// Row `i` maps window slice `(f_{j-r+i}, ..., f_{j+i})` to `p_{i,j}(x_{j+tau})`.
    pub fn sub_eval(&self) -> &RatMatrix {
        &self.sub_eval
    }

    /// Maps the full window to `p_j(x_{j+tau})`.
    pub fn full_eval(&self) -> &[Rational] {
        &self.full_eval
    }

    /// Quadratic forms `Q_i` with `I_i = w_i^T Q_i w_i` on window slice `i`.
    pub fn smooth_forms(&self) -> &[RatMatrix] {
        &self.smooth_forms
    }

    pub fn ideal(&self) -> &IdealWeights {
        &self.ideal
    }

    /// Row `i` of `sub_eval` zero-padded to the full window width.
    pub fn padded_row(&self, i: usize) -> Vec<Rational> {
        pad_row(&self.sub_eval[i], i, self.r)
    }
}

/// Uniform LPR simplex `1/(r+2)`.
pub fn uniform_c_ext(r: usize) -> Vec<Rational> {
    vec![rat(1, r as i64 + 2); r + 2]
}

/// Builds the CWENO-LPR tables on top of `base` for the simplex `c_ext`
/// (`r + 2` positive entries summing to one).
pub fn lpr_extra(base: &StencilTables, c_ext: &[Rational]) -> Result<LprTables> {
    let r = base.r;
    if c_ext.len() != r + 2 {
        return Err(Error::domain(format!(
            "c_ext has {} entries, expected {}",
            c_ext.len(),
            r + 2
        )));
    }
    let last = &c_ext[r + 1];
    if last.is_zero() {
        return Err(Error::DivisionByZero("c_ext[r+1] = 0".into()));
    }
    let sum: Rational = c_ext.iter().sum();
    if !sum.is_one() || c_ext.iter().any(|c| !exact::is_positive(c)) {
        return Err(Error::domain(
            "c_ext must be strictly positive and sum to 1",
        ));
    }

    // p_{r+1} = (p_j - sum c_i p_i) / c_{r+1}, built both for evaluation
    // (in the table's sampling) and for the indicator (cell averages).
    let combine = |sampling: Sampling| -> Vec<Poly> {
        let full = basis(&full_nodes(r), sampling);
        let subs: Vec<Vec<Poly>> = (0..=r)
            .map(|i| basis(&substencil_nodes(r, i), sampling))
            .collect();
        let inv = last.recip();
        (0..2 * r + 1)
            .map(|col| {
                let mut p = full[col].clone();
                for (i, sub) in subs.iter().enumerate() {
                    if col >= i && col <= i + r {
                        p = p.add(&sub[col - i].scale(&-c_ext[i].clone()));
                    }
                }
                p.scale(&inv)
            })
            .collect()
    };
    let p_ext_eval = eval_row(&combine(base.sampling), &base.tau);
    let q_ext = smoothness_form(&combine(Sampling::CellAverages), 2 * r);
    Ok(LprTables {
        base: base.clone(),
        c_ext: c_ext.to_vec(),
        p_ext_eval,
        q_ext,
    })
}

impl LprTables {
    pub fn base(&self) -> &StencilTables {
        &self.base
    }

    pub fn c_ext(&self) -> &[Rational] {
        &self.c_ext
    }

    /// Maps the full window to `p_{r+1,j}(x_{j+tau})`.
    pub fn p_ext_eval(&self) -> &[Rational] {
        &self.p_ext_eval
    }

    /// Indicator form of `p_{r+1,j}` over the full window, derivative orders `1..=2r`.
    pub fn q_ext(&self) -> &RatMatrix {
        &self.q_ext
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn quad(form: &RatMatrix, w: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (a, wa) in w.iter().enumerate() {
            for (b, wb) in w.iter().enumerate() {
                acc += &form[a][b] * wa * wb;
            }
        }
        acc
    }

    #[test]
    fn fifth_order_rows_at_interface() {
        let t = build_tables(2, q("1/2")).unwrap();
        assert_eq!(t.sub_eval()[0], vec![q("1/3"), q("-7/6"), q("11/6")]);
        assert_eq!(t.sub_eval()[1], vec![q("-1/6"), q("5/6"), q("1/3")]);
        assert_eq!(t.sub_eval()[2], vec![q("1/3"), q("5/6"), q("-1/6")]);
        assert_eq!(
            t.full_eval(),
            &[q("1/30"), q("-13/60"), q("47/60"), q("9/20"), q("-1/20")]
        );
    }

    #[test]
    fn fifth_order_indicator_is_jiang_shu() {
        // I_0 = 13/12 (w0 - 2w1 + w2)^2 + 1/4 (w0 - 4w1 + 3w2)^2, expanded.
        let t = build_tables(2, q("1/2")).unwrap();
        let u = [1, -2, 1];
        let v = [1, -4, 3];
        let q0 = &t.smooth_forms()[0];
        for a in 0..3 {
            for b in 0..3 {
                let expect = rat(13, 12) * int(u[a] * u[b]) + rat(1, 4) * int(v[a] * v[b]);
                assert_eq!(q0[a][b], expect, "entry ({a},{b})");
            }
        }
    }

    #[test]
    fn third_order_point_value_ideal_weights() {
        let t = TableBuilder::new(1, q("1/2"))
            .sampling(Sampling::PointValues)
            .build()
            .unwrap();
        assert_eq!(t.ideal().weights, Some(vec![q("1/4"), q("3/4")]));
        assert_eq!(t.ideal().classification, Classification::Convex);
        let (w, c) = ideal_weights(1, q("1/2")).unwrap();
        assert_eq!(w, Some(vec![q("1/3"), q("2/3")]));
        assert_eq!(c, Classification::Convex);
    }

    #[test]
    fn ideal_weights_fifth_order() {
        let (w, c) = ideal_weights(2, q("1/2")).unwrap();
        assert_eq!(w, Some(vec![q("1/10"), q("3/5"), q("3/10")]));
        assert_eq!(c, Classification::Convex);
        // Near the pole of c_0 at tau = -1/2 + sqrt(3)/3 the weights are signed.
        let (_, c) = ideal_weights(2, q("7/100")).unwrap();
        assert_eq!(c, Classification::Signed);
        let (_, c) = ideal_weights(2, q("0")).unwrap();
        assert_eq!(c, Classification::Signed);
    }

    #[test]
    fn fifth_order_weights_match_closed_forms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0001);
        let poly = |c: &[i64], t: &Rational| -> Rational {
            c.iter()
                .rev()
                .fold(Rational::zero(), |acc, &k| acc * t + int(k))
        };
        for _ in 0..20 {
            let den: i64 = rng.random_range(2..500);
            let num: i64 = rng.random_range(0..den);
            let tau = rat(num, den);
            let (w, _) = ideal_weights(2, tau.clone()).unwrap();
            let w = w.expect("rational tau never hits the irrational poles");
            let c0 = poly(&[9, 200, -120, -160, 80], &tau) / poly(&[-80, 960, 960], &tau);
            let c2 = poly(&[9, -200, -120, 160, 80], &tau) / poly(&[-80, -960, 960], &tau);
            assert_eq!(w[0], c0, "c0 at tau = {tau}");
            assert_eq!(w[2], c2, "c2 at tau = {tau}");
            assert!(w.iter().sum::<Rational>().is_one());
        }
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(matches!(
            build_tables(0, q("1/2")),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!(matches!(
            build_tables(7, q("1/2")),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!(matches!(build_tables(2, q("1")), Err(Error::Domain(_))));
        assert!(matches!(build_tables(2, q("-1/4")), Err(Error::Domain(_))));
        assert!(TableBuilder::new(7, q("1/2"))
            .allow_high_order()
            .build()
            .is_ok());
    }

    #[test]
    fn third_order_rows_sum_to_one_for_any_tau() {
        for tau in ["0", "1/7", "1/2", "3/4", "99/100"] {
            let t = build_tables(1, q(tau)).unwrap();
            for row in t.sub_eval() {
                assert!(row.iter().sum::<Rational>().is_one());
            }
        }
    }

    #[test]
    fn lpr_identity_and_constants() {
        let base = build_tables(1, q("1/2")).unwrap();
        let c = vec![q("1/4"), q("1/4"), q("1/2")];
        let lt = lpr_extra(&base, &c).unwrap();
        let mut combo = lt
            .p_ext_eval()
            .iter()
            .map(|v| v * &c[2])
            .collect::<Vec<_>>();
        for i in 0..=1 {
            for (col, v) in base.padded_row(i).iter().enumerate() {
                combo[col] += v * &c[i];
            }
        }
        assert_eq!(combo, base.full_eval());
        // Degree-2 data: cell averages of x^2 over [l-1/2, l+1/2] are l^2 + 1/12.
        let data: Vec<Rational> = (-1..=1).map(|l| int(l * l) + rat(1, 12)).collect();
        let via_identity: Rational = combo.iter().zip(&data).map(|(a, b)| a * b).sum();
        assert_eq!(via_identity, rat(1, 4));
        let ones = vec![Rational::one(); 3];
        assert!(quad(lt.q_ext(), &ones).is_zero());
    }

    #[test]
    fn lpr_rejects_bad_simplex() {
        let base = build_tables(1, q("1/2")).unwrap();
        assert!(matches!(
            lpr_extra(&base, &[q("1/2"), q("1/2"), q("0")]),
            Err(Error::DivisionByZero(_))
        ));
        assert!(matches!(
            lpr_extra(&base, &[q("1/2"), q("1/4"), q("1/2")]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            lpr_extra(&base, &[q("1/2"), q("1/2")]),
            Err(Error::Domain(_))
        ));
    }
}
