//! Exact rational arithmetic helpers: parsing, small dense linear algebra and
//! univariate polynomials with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Dense matrix of rationals, row-major.
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a decimal literal such as `"0.75"` or
/// `"1e-100"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero(format!("denominator of {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest binary64 value (correct up to one rounding of each part).
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Result of reducing an augmented system `[A | B]` to row echelon form.
pub(crate) struct Solution {
    pub rank: usize,
    pub consistent: bool,
    /// One solution column per right-hand side when the system is square
    /// and non-singular, or overdetermined but consistent with full column rank.
    pub x: Option<RatMatrix>,
}

/// Solves `A X = B` exactly by Gauss-Jordan elimination. `A` is `m x n`,
/// `B` is `m x k`.
pub(crate) fn solve(a: &RatMatrix, b: &RatMatrix) -> Solution {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let k = b.first().map_or(0, Vec::len);
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = aug[row][col].recip();
        for v in aug[row].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m {
            if i != row && !aug[i][col].is_zero() {
                let factor = aug[i][col].clone();
                for j in col..n + k {
                    let delta = &factor * &aug[row][j];
                    aug[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let rank = pivots.len();
    let consistent = aug[rank..].iter().all(|r| r[n..].iter().all(Zero::is_zero));
    let x = (consistent && rank == n)
        .then(|| (0..n).map(|i| aug[i][n..].to_vec()).collect::<RatMatrix>());
    Solution {
        rank,
        consistent,
        x,
    }
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * int(d as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (d, c) in self.0.iter().enumerate() {
            let e = d + 1;
            let diff = pow(hi, e) - pow(lo, e);
            acc += c * diff / int(e as i64);
        }
        acc
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    a + b
                })
                .collect(),
        )
    }
}

pub fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

pub(crate) fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("0.75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn solve_detects_rank_and_consistency() {
        let a = vec![
            vec![int(1), int(1)],
            vec![int(1), int(-1)],
            vec![int(2), int(0)],
        ];
        let b = vec![vec![int(3)], vec![int(1)], vec![int(4)]];
        let s = solve(&a, &b);
        assert_eq!(s.rank, 2);
        let x = s.x.unwrap();
        assert_eq!(x[0][0], int(2));
        assert_eq!(x[1][0], int(1));

        let b_bad = vec![vec![int(3)], vec![int(1)], vec![int(5)]];
        let s = solve(&a, &b_bad);
        assert!(!s.consistent);
        assert!(s.x.is_none());
    }

    #[test]
    fn polynomial_calculus() {
        // p = 1 + 2x + 3x^2
        let p = Poly(vec![int(1), int(2), int(3)]);
        assert_eq!(p.eval(&int(2)), int(17));
        assert_eq!(p.derivative(), Poly(vec![int(2), int(6)]));
        assert_eq!(p.integrate(&int(0), &int(1)), int(3));
        let sq = p.mul(&p);
        assert_eq!(sq.eval(&int(2)), int(289));
    }
}
