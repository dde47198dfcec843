//! Schlieren images: `exp(-kappa |grad rho| / max |grad rho|)` on a gray
//! scale, written as binary PGM.

use std::io::Write;

use crate::error::{Error, Result};

pub const DEFAULT_KAPPA: f64 = 15.0;

/// 8-bit grayscale raster stored top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn pixel(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Binary P5 with maxval 255.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.pixels)?;
        out.flush()?;
        Ok(())
    }
}

/// Gradient magnitude of a row-major `nx x ny` field (x fastest, row 0 at
/// the bottom) with spacings `hx`, `hy`. Central differences inside,
/// one-sided differences on the edges, zero along an axis of length one.
pub fn gradient_magnitude(rho: &[f64], nx: usize, ny: usize, hx: f64, hy: f64) -> Vec<f64> {
    let at = |i: usize, j: usize| rho[j * nx + i];
    let diff = |n: usize, k: usize, h: f64, f: &dyn Fn(usize) -> f64| -> f64 {
        match (n, k) {
            (1, _) => 0.0,
            (_, 0) => (f(1) - f(0)) / h,
            (n, k) if k == n - 1 => (f(k) - f(k - 1)) / h,
            (_, k) => (f(k + 1) - f(k - 1)) / (2.0 * h),
        }
    };
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let gx = diff(nx, i, hx, &|a| at(a, j));
            let gy = diff(ny, j, hy, &|b| at(i, b));
            out.push(gx.hypot(gy));
        }
    }
    out
}

/// Schlieren image of a density field laid out as in [`gradient_magnitude`].
/// The top image row shows the largest `y`. A field without gradients, or
/// `kappa = 0`, gives an all-white image.
pub fn schlieren(
    rho: &[f64],
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
    kappa: f64,
) -> Result<GrayImage> {
    if rho.len() != nx * ny || nx == 0 || ny == 0 {
        return Err(Error::domain(format!(
            "density has {} values for a {nx} x {ny} image",
            rho.len()
        )));
    }
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain("kappa must be finite and nonnegative"));
    }
    if let Some(k) = rho.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(format!("density value {k} is not finite")));
    }
    let grad = gradient_magnitude(rho, nx, ny, hx, hy);
    let gmax = grad.iter().copied().fold(0.0, f64::max);
    let mut pixels = Vec::with_capacity(nx * ny);
    for row in 0..ny {
        let j = ny - 1 - row;
        for i in 0..nx {
            let level = if gmax > 0.0 {
                (-kappa * grad[j * nx + i] / gmax).exp()
            } else {
                1.0
            };
            pixels.push((255.0 * level).round() as u8);
        }
    }
    Ok(GrayImage {
        width: nx,
        height: ny,
        pixels,
    })
}
