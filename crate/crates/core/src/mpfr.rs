//! Extended-precision binary floating point backed by the system MPFR library.
//!
//! [`MpFloat`] owns one `mpfr_t`. All operations round to nearest. Binary
//! operators produce a result at the precision of the left operand, reusing
//! its storage when the left operand is owned.

use std::cmp::Ordering;
use std::ffi::CStr;
use std::fmt;
use std::mem::MaybeUninit;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::os::raw::c_long;
use std::ptr;

use gmp_mpfr_sys::{gmp, mpfr};

use crate::exact::Rational;
use crate::scalar::Scalar;

const RND: mpfr::rnd_t = mpfr::rnd_t::RNDN;

/// Smallest precision accepted by [`MpFloat::new`], matching MPFR's own floor.
pub const MIN_PRECISION: u32 = 2;

/// Precision in bits of an extended-precision context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision(pub u32);

impl Default for Precision {
    fn default() -> Self {
        Precision(333)
    }
}

pub struct MpFloat {
    raw: mpfr::mpfr_t,
}

// SAFETY: an `mpfr_t` exclusively owns its limb allocation; nothing in it is
// tied to the creating thread, and shared references only permit reads.
unsafe impl Send for MpFloat {}
unsafe impl Sync for MpFloat {}

impl MpFloat {
    /// A zero with `prec` bits of significand.
    pub fn new(prec: Precision) -> Self {
        let bits = prec.0.max(MIN_PRECISION);
        unsafe {
            let mut raw = MaybeUninit::<mpfr::mpfr_t>::uninit();
            mpfr::init2(raw.as_mut_ptr(), bits as mpfr::prec_t);
            let mut raw = raw.assume_init();
            mpfr::set_si(&mut raw, 0, RND);
            MpFloat { raw }
        }
    }

    pub fn precision(&self) -> Precision {
        Precision(unsafe { mpfr::get_prec(&self.raw) } as u32)
    }

    fn unary(
        &self,
        f: unsafe extern "C" fn(*mut mpfr::mpfr_t, *const mpfr::mpfr_t, mpfr::rnd_t) -> i32,
    ) -> Self {
        let mut out = MpFloat::new(self.precision());
        unsafe {
            f(&mut out.raw, &self.raw, RND);
        }
        out
    }

    /// Decimal scientific notation with `digits` significant digits, e.g.
    /// `2.86e-06`. The rounding is done once, from the binary value.
    fn sci(&self, digits: usize) -> String {
        if !Scalar::is_finite(self) {
            return format!("{}", self.to_f64());
        }
        if unsafe { mpfr::zero_p(&self.raw) } != 0 {
            return format!("{:.*}e+00", digits.saturating_sub(1), 0.0);
        }
        let digits = digits.max(1);
        let mut exp: mpfr::exp_t = 0;
        let text = unsafe {
            let p = mpfr::get_str(ptr::null_mut(), &mut exp, 10, digits, &self.raw, RND);
            let s = CStr::from_ptr(p).to_string_lossy().into_owned();
            mpfr::free_str(p);
            s
        };
        let (sign, mant) = match text.strip_prefix('-') {
            Some(m) => ("-", m),
            None => ("", text.as_str()),
        };
        let e = exp as i64 - 1;
        let head = &mant[..1];
        let tail = &mant[1..];
        let esign = if e < 0 { '-' } else { '+' };
        if tail.is_empty() {
            format!("{sign}{head}e{esign}{:02}", e.abs())
        } else {
            format!("{sign}{head}.{tail}e{esign}{:02}", e.abs())
        }
    }
}

impl Drop for MpFloat {
    fn drop(&mut self) {
        unsafe { mpfr::clear(&mut self.raw) }
    }
}

impl Clone for MpFloat {
    fn clone(&self) -> Self {
        let mut out = MpFloat::new(self.precision());
        unsafe {
            mpfr::set(&mut out.raw, &self.raw, RND);
        }
        out
    }
}

impl fmt::Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MpFloat({}, {} bits)", self.sci(20), self.precision().0)
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sci(f.precision().map_or(17, |p| p + 1)))
    }
}

impl PartialEq for MpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        unsafe {
            if mpfr::nan_p(&self.raw) != 0 || mpfr::nan_p(&other.raw) != 0 {
                return None;
            }
            Some(mpfr::cmp(&self.raw, &other.raw).cmp(&0))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident, $ffi:path) => {
        impl $atr<&MpFloat> for MpFloat {
            fn $amethod(&mut self, rhs: &MpFloat) {
                unsafe {
                    let p: *mut mpfr::mpfr_t = &mut self.raw;
                    $ffi(p, p, &rhs.raw, RND);
                }
            }
        }

        impl $atr<MpFloat> for MpFloat {
            fn $amethod(&mut self, rhs: MpFloat) {
                $atr::$amethod(self, &rhs);
            }
        }

        impl $tr<&MpFloat> for MpFloat {
            type Output = MpFloat;
            fn $method(mut self, rhs: &MpFloat) -> MpFloat {
                $atr::$amethod(&mut self, rhs);
                self
            }
        }

        impl $tr<MpFloat> for MpFloat {
            type Output = MpFloat;
            fn $method(mut self, rhs: MpFloat) -> MpFloat {
                $atr::$amethod(&mut self, &rhs);
                self
            }
        }

        impl $tr<&MpFloat> for &MpFloat {
            type Output = MpFloat;
            fn $method(self, rhs: &MpFloat) -> MpFloat {
                let mut out = MpFloat::new(self.precision());
                unsafe {
                    $ffi(&mut out.raw, &self.raw, &rhs.raw, RND);
                }
                out
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, mpfr::add);
binop!(Sub, sub, SubAssign, sub_assign, mpfr::sub);
binop!(Mul, mul, MulAssign, mul_assign, mpfr::mul);
binop!(Div, div, DivAssign, div_assign, mpfr::div);

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(mut self) -> MpFloat {
        unsafe {
            let p: *mut mpfr::mpfr_t = &mut self.raw;
            mpfr::neg(p, p, RND);
        }
        self
    }
}

fn set_rational(dst: &mut MpFloat, q: &Rational) {
    let num = std::ffi::CString::new(q.numer().to_string()).expect("no interior NUL");
    let den = std::ffi::CString::new(q.denom().to_string()).expect("no interior NUL");
    unsafe {
        let mut mq = MaybeUninit::<gmp::mpq_t>::uninit();
        gmp::mpq_init(mq.as_mut_ptr());
        let mut mq = mq.assume_init();
        gmp::mpz_set_str(gmp::mpq_numref(&mut mq), num.as_ptr(), 10);
        gmp::mpz_set_str(gmp::mpq_denref(&mut mq), den.as_ptr(), 10);
        mpfr::set_q(&mut dst.raw, &mq, RND);
        gmp::mpq_clear(&mut mq);
    }
}

impl Scalar for MpFloat {
    type Context = Precision;

    fn context(&self) -> Precision {
        self.precision()
    }

    fn from_rational(q: &Rational, ctx: Precision) -> Self {
        let mut out = MpFloat::new(ctx);
        set_rational(&mut out, q);
        out
    }

    fn from_f64(x: f64, ctx: Precision) -> Self {
        let mut out = MpFloat::new(ctx);
        unsafe {
            mpfr::set_d(&mut out.raw, x, RND);
        }
        out
    }

    fn from_i64(n: i64, ctx: Precision) -> Self {
        let mut out = MpFloat::new(ctx);
        unsafe {
            mpfr::set_si(&mut out.raw, n as c_long, RND);
        }
        out
    }

    fn powi(&self, n: u32) -> Self {
        let mut out = MpFloat::new(self.precision());
        unsafe {
            mpfr::pow_ui(&mut out.raw, &self.raw, n.into(), RND);
        }
        out
    }

    fn abs(&self) -> Self {
        self.unary(mpfr::abs)
    }

    fn sqrt(&self) -> Self {
        self.unary(mpfr::sqrt)
    }

    fn exp(&self) -> Self {
        self.unary(mpfr::exp)
    }

    fn ln(&self) -> Self {
        self.unary(mpfr::log)
    }

    fn recip(&self) -> Self {
        let mut out = MpFloat::new(self.precision());
        unsafe {
            mpfr::ui_div(&mut out.raw, 1, &self.raw, RND);
        }
        out
    }

    fn is_finite(&self) -> bool {
        unsafe { mpfr::number_p(&self.raw) != 0 }
    }

    fn to_f64(&self) -> f64 {
        unsafe { mpfr::get_d(&self.raw, RND) }
    }

    fn epsilon(ctx: Precision) -> f64 {
        (2.0f64).powi(1 - ctx.0 as i32)
    }

    fn to_sci_string(&self, digits: usize) -> String {
        self.sci(digits)
    }
}
