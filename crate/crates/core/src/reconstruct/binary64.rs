//! A binary64 copy of [`Kernel`] laid out in fixed-size arrays, with the
//! loop bounds fixed at compile time for each `r`. It performs the same
//! floating-point operations in the same order as `Kernel::<f64>::eval`,
//! so the two agree bitwise.

use super::{GlobalMode, Kernel, Scheme, MAX_KERNEL_R};
use crate::scalar::powi_f64;

const W: usize = 2 * MAX_KERNEL_R + 1;
const N: usize = MAX_KERNEL_R + 1;

#[derive(Debug, Clone)]
pub struct Binary64Kernel {
    r: usize,
    scheme: Scheme,
    s: u32,
    global: GlobalMode,
    sub_eval: [[f64; N]; N],
    full_eval: [f64; W],
    /// Reduced forms, `r x r` in the top-left corner of each block.
    forms: [[[f64; MAX_KERNEL_R]; MAX_KERNEL_R]; N],
    ideal: [f64; N + 1],
    p_ext: [f64; W],
    q_ext: [[f64; W - 1]; W - 1],
    c_ext: [f64; N + 1],
}

impl From<&Kernel<f64>> for Binary64Kernel {
    fn from(k: &Kernel<f64>) -> Self {
        let r = k.r;
        let n = r + 1;
        let mut out = Self {
            r,
            scheme: k.scheme,
            s: k.s,
            global: k.global,
            sub_eval: [[0.0; N]; N],
            full_eval: [0.0; W],
            forms: [[[0.0; MAX_KERNEL_R]; MAX_KERNEL_R]; N],
            ideal: [0.0; N + 1],
            p_ext: [0.0; W],
            q_ext: [[0.0; W - 1]; W - 1],
            c_ext: [0.0; N + 1],
        };
        for i in 0..n {
            out.sub_eval[i][..n].copy_from_slice(&k.sub_eval[i * n..(i + 1) * n]);
            for a in 0..r {
                out.forms[i][a][..r]
                    .copy_from_slice(&k.forms[i * r * r + a * r..i * r * r + (a + 1) * r]);
            }
        }
        out.full_eval[..2 * r + 1].copy_from_slice(&k.full_eval);
        out.ideal[..k.ideal.len()].copy_from_slice(&k.ideal);
        if k.scheme == Scheme::CwenoLpr {
            let m = 2 * r;
            out.p_ext[..m + 1].copy_from_slice(&k.p_ext);
            for a in 0..m {
                out.q_ext[a][..m].copy_from_slice(&k.q_ext[a * m..(a + 1) * m]);
            }
            out.c_ext[..n + 1].copy_from_slice(&k.c_ext);
        }
        out
    }
}

impl Binary64Kernel {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn width(&self) -> usize {
        2 * self.r + 1
    }

    /// Same contract as [`Kernel::eval`]: `w` holds at least `2r + 1`
    /// finite values and `eps > 0`.
    #[inline]
    pub fn eval(&self, w: &[f64], eps: f64) -> f64 {
        let mut lanes = [[0.0; 1]; W];
        for (l, v) in lanes.iter_mut().zip(w) {
            l[0] = *v;
        }
        self.eval_lanes(&lanes, eps)[0]
    }

    /// Reconstructs `L` independent windows at once: lane `c` of the
    /// result uses lane `c` of every sample in `w`.
    #[inline]
    pub fn eval_lanes<const L: usize>(&self, w: &[[f64; L]], eps: f64) -> [f64; L] {
        match self.r {
            1 => self.eval_r::<1, L>(w, eps),
            2 => self.eval_r::<2, L>(w, eps),
            3 => self.eval_r::<3, L>(w, eps),
            4 => self.eval_r::<4, L>(w, eps),
            5 => self.eval_r::<5, L>(w, eps),
            6 => self.eval_r::<6, L>(w, eps),
            _ => self.eval_r::<7, L>(w, eps),
        }
    }

    #[inline(always)]
    fn eval_r<const R: usize, const L: usize>(&self, w: &[[f64; L]], eps: f64) -> [f64; L] {
        let w = &w[..2 * R + 1];
        let mut ind = [[0.0; L]; N + 1];
        let mut sub = [[0.0; L]; N + 1];
        for i in 0..=R {
            ind[i] = form::<L, _>(&self.forms[i], R, &w[i..=i + R]);
            sub[i] = dot::<L>(&self.sub_eval[i][..=R], &w[i..=i + R]);
        }
        match self.scheme {
            Scheme::WenoJs => {
                let (_, q) = ratios::<L>(&ind[..=R], eps);
                let om = weights::<L>(&self.ideal[..=R], &q, self.s);
                combine::<L>(&om[..=R], &sub[..=R])
            }
            Scheme::CwenoGlobal => {
                let (b, qr) = ratios::<L>(&ind[..=R], eps);
                let om = weights::<L>(&self.ideal[..=R], &qr, self.s);
                let q = combine::<L>(&om[..=R], &sub[..=R]);
                let omega = match self.global {
                    GlobalMode::PowerM(m) => global_power::<L>(&b[..=R], &qr[..=R], m),
                    GlobalMode::Remap { s1, s2 } => {
                        let rho = global_power::<L>(&b[..=R], &qr[..=R], 1);
                        rho.map(|rho| {
                            let t = if s1 == 1 {
                                rho
                            } else {
                                1.0 - powi_f64(1.0 - rho, s1)
                            };
                            if s2 == 1 {
                                t
                            } else {
                                powi_f64(t, s2)
                            }
                        })
                    }
                };
                let full = dot::<L>(&self.full_eval[..2 * R + 1], w);
                let mut out = [0.0; L];
                for c in 0..L {
                    out[c] = omega[c] * full[c] + (1.0 - omega[c]) * q[c];
                }
                out
            }
            Scheme::CwenoLpr => {
                ind[R + 1] = form::<L, _>(&self.q_ext, 2 * R, w);
                sub[R + 1] = dot::<L>(&self.p_ext[..2 * R + 1], w);
                let (_, q) = ratios::<L>(&ind[..R + 2], eps);
                let om = weights::<L>(&self.c_ext[..R + 2], &q, self.s);
                combine::<L>(&om[..R + 2], &sub[..R + 2])
            }
        }
    }
}

/// `sum_a coef[a] * w[a]`, accumulated left to right.
#[inline(always)]
fn dot<const L: usize>(coef: &[f64], w: &[[f64; L]]) -> [f64; L] {
    let mut acc = [0.0; L];
    for c in 0..L {
        acc[c] = coef[0] * w[0][c];
    }
    for a in 1..coef.len() {
        for c in 0..L {
            acc[c] += coef[a] * w[a][c];
        }
    }
    acc
}

/// Lane-wise `sum_k x[k] * y[k]`.
#[inline(always)]
fn combine<const L: usize>(x: &[[f64; L]], y: &[[f64; L]]) -> [f64; L] {
    let mut acc = [0.0; L];
    for c in 0..L {
        acc[c] = x[0][c] * y[0][c];
    }
    for k in 1..x.len() {
        for c in 0..L {
            acc[c] += x[k][c] * y[k][c];
        }
    }
    acc
}

/// `d^T Q d` with `d_a = w_{a+1} - w_0` for an `m x m` reduced form,
/// clamped at zero.
#[inline(always)]
fn form<const L: usize, const M: usize>(q: &[[f64; M]], m: usize, w: &[[f64; L]]) -> [f64; L] {
    let mut d = [[0.0; L]; M];
    for a in 0..m {
        for c in 0..L {
            d[a][c] = w[a + 1][c] - w[0][c];
        }
    }
    let mut acc = [0.0; L];
    for a in 0..m {
        let row = dot::<L>(&q[a][..m], &d[..m]);
        for c in 0..L {
            if a == 0 {
                acc[c] = row[c] * d[0][c];
            } else {
                acc[c] += row[c] * d[a][c];
            }
        }
    }
    acc.map(|v| if v < 0.0 { 0.0 } else { v })
}

/// `b_k = a_k / a_min` and `q_k = 1 / b_k` for `a_k = I_k + eps`.
#[inline(always)]
fn ratios<const L: usize>(ind: &[[f64; L]], eps: f64) -> ([[f64; L]; N + 1], [[f64; L]; N + 1]) {
    let mut b = [[0.0; L]; N + 1];
    for (bk, i) in b.iter_mut().zip(ind) {
        for c in 0..L {
            bk[c] = i[c] + eps;
        }
    }
    let mut amin = b[0];
    for v in &b[1..ind.len()] {
        for c in 0..L {
            amin[c] = if v[c] < amin[c] { v[c] } else { amin[c] };
        }
    }
    let inv = amin.map(|v| 1.0 / v);
    let mut q = [[0.0; L]; N + 1];
    for k in 0..ind.len() {
        for c in 0..L {
            b[k][c] *= inv[c];
            q[k][c] = 1.0 / b[k][c];
        }
    }
    (b, q)
}

#[inline(always)]
fn weights<const L: usize>(ideal: &[f64], q: &[[f64; L]], s: u32) -> [[f64; L]; N + 1] {
    let mut out = [[0.0; L]; N + 1];
    let mut sum = [0.0; L];
    for k in 0..ideal.len() {
        for c in 0..L {
            out[k][c] = powi_f64(q[k][c], s) * ideal[k];
            sum[c] = if k == 0 {
                out[k][c]
            } else {
                sum[c] + out[k][c]
            };
        }
    }
    let inv = sum.map(|v| 1.0 / v);
    for v in &mut out[..ideal.len()] {
        for c in 0..L {
            v[c] *= inv[c];
        }
    }
    out
}

#[inline(always)]
fn global_power<const L: usize>(b: &[[f64; L]], q: &[[f64; L]], m: u32) -> [f64; L] {
    let mut sp = [0.0; L];
    let mut sn = [0.0; L];
    for k in 0..b.len() {
        for c in 0..L {
            sp[c] += powi_f64(b[k][c], m);
            sn[c] += powi_f64(q[k][c], m);
        }
    }
    let n = b.len() as f64;
    let mut out = [0.0; L];
    for c in 0..L {
        let omega = (n * n) / (sp[c] * sn[c]);
        out[c] = if omega > 1.0 { 1.0 } else { omega };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::reconstruct::WeightConfig;
    use crate::stencil::{TableBuilder, MAX_SUPPORTED_R};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    const SCHEMES: [Scheme; 3] = [Scheme::WenoJs, Scheme::CwenoLpr, Scheme::CwenoGlobal];

    /// Built once: tables for large `r` are slow to derive in debug builds.
    fn kernels(scheme: Scheme, r: usize) -> &'static (Kernel<f64>, Binary64Kernel) {
        static ALL: OnceLock<Vec<(Kernel<f64>, Binary64Kernel)>> = OnceLock::new();
        let all = ALL.get_or_init(|| {
            (1..=MAX_SUPPORTED_R)
                .flat_map(|r| {
                    let t = TableBuilder::new(r, rat(1, 2)).build().unwrap();
                    SCHEMES.map(|scheme| {
                        let k = Kernel::<f64>::new(&t, &WeightConfig::for_scheme(scheme, r), ())
                            .unwrap();
                        let b = Binary64Kernel::from(&k);
                        (k, b)
                    })
                })
                .collect()
        });
        let which = SCHEMES.iter().position(|&s| s == scheme).unwrap();
        &all[(r - 1) * SCHEMES.len() + which]
    }

    #[test]
    fn jump_windows_match_generic_kernel() {
        for r in 1..=MAX_SUPPORTED_R {
            for scheme in SCHEMES {
                let (k, b) = kernels(scheme, r);
                let w: Vec<f64> = (0..2 * r + 1)
                    .map(|i| if i < r { 1.0 } else { 0.125 })
                    .collect();
                assert_eq!(k.eval(&w, &1e-100).to_bits(), b.eval(&w, 1e-100).to_bits());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn agrees_bitwise_with_generic_kernel(
            r in 1usize..=MAX_SUPPORTED_R,
            which in 0usize..3,
            seed in proptest::collection::vec(-10.0f64..10.0, 15),
        ) {
            let scheme = SCHEMES[which];
            let (k, b) = kernels(scheme, r);
            let w = &seed[..2 * r + 1];
            prop_assert_eq!(k.eval(w, &1e-100).to_bits(), b.eval(w, 1e-100).to_bits());
        }
    }
}
