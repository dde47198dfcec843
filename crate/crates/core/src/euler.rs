//! Compressible Euler equations in one and two space dimensions, plus a
//! scalar linear advection law used for order and conservation studies.
//!
//! Conserved vectors are plain arrays: `(rho, rho v, E)` in 1D and
//! `(rho, rho vx, rho vy, E)` in 2D. The ideal-gas closure is
//! `p = (gamma - 1)(E - rho |v|^2 / 2)`.

use crate::error::{Error, Result};

pub const DEFAULT_GAMMA: f64 = 1.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

fn state_error(what: &str) -> Error {
    Error::State(what.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState1D {
    pub rho: f64,
    pub mom: f64,
    pub energy: f64,
    pub gamma: f64,
}

impl EulerState1D {
    pub fn from_primitive(rho: f64, v: f64, p: f64, gamma: f64) -> Self {
        Self {
            rho,
            mom: rho * v,
            energy: p / (gamma - 1.0) + 0.5 * rho * v * v,
            gamma,
        }
    }

    pub fn from_array(u: [f64; 3], gamma: f64) -> Self {
        Self {
            rho: u[0],
            mom: u[1],
            energy: u[2],
            gamma,
        }
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.rho, self.mom, self.energy]
    }

    pub fn velocity(&self) -> f64 {
        self.mom / self.rho
    }

    pub fn pressure(&self) -> f64 {
        (self.gamma - 1.0) * (self.energy - 0.5 * self.mom * self.mom / self.rho)
    }

    pub fn sound_speed(&self) -> Result<f64> {
        self.validate()?;
        Ok((self.gamma * self.pressure() / self.rho).sqrt())
    }

    /// `(rho, v, p)`.
    pub fn primitive(&self) -> (f64, f64, f64) {
        (self.rho, self.velocity(), self.pressure())
    }

    pub fn validate(&self) -> Result<()> {
        check_gas(self.rho, self.pressure(), self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState2D {
    pub rho: f64,
    pub momx: f64,
    pub momy: f64,
    pub energy: f64,
    pub gamma: f64,
}

impl EulerState2D {
    pub fn from_primitive(rho: f64, vx: f64, vy: f64, p: f64, gamma: f64) -> Self {
        Self {
            rho,
            momx: rho * vx,
            momy: rho * vy,
            energy: p / (gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy),
            gamma,
        }
    }

    pub fn from_array(u: [f64; 4], gamma: f64) -> Self {
        Self {
            rho: u[0],
            momx: u[1],
            momy: u[2],
            energy: u[3],
            gamma,
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.rho, self.momx, self.momy, self.energy]
    }

    pub fn pressure(&self) -> f64 {
        let kinetic = 0.5 * (self.momx * self.momx + self.momy * self.momy) / self.rho;
        (self.gamma - 1.0) * (self.energy - kinetic)
    }

    /// `(rho, vx, vy, p)`.
    pub fn primitive(&self) -> (f64, f64, f64, f64) {
        (
            self.rho,
            self.momx / self.rho,
            self.momy / self.rho,
            self.pressure(),
        )
    }

    /// Exchanges the roles of the two coordinate axes.
    pub fn swap_axes(&self) -> Self {
        Self {
            momx: self.momy,
            momy: self.momx,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_gas(self.rho, self.pressure(), self.gamma)
    }
}

fn check_gas(rho: f64, p: f64, gamma: f64) -> Result<()> {
    if !(gamma > 1.0) {
        return Err(state_error("gamma must exceed 1"));
    }
    if !(rho > 0.0) {
        return Err(state_error("nonpositive density"));
    }
    if !(p > 0.0) {
        return Err(state_error("nonpositive pressure"));
    }
    Ok(())
}

pub fn flux_1d(u: &EulerState1D) -> Result<[f64; 3]> {
    u.validate()?;
    Ok(gas_flux_1d(&u.to_array(), u.gamma))
}

pub fn flux_2d(u: &EulerState2D, axis: Axis) -> Result<[f64; 4]> {
    u.validate()?;
    Ok(gas_flux_2d(&u.to_array(), u.gamma, axis))
}

#[inline]
fn gas_flux_1d(u: &[f64; 3], gamma: f64) -> [f64; 3] {
    let v = u[1] / u[0];
    let p = (gamma - 1.0) * (u[2] - 0.5 * u[1] * v);
    [u[1], u[1] * v + p, v * (u[2] + p)]
}

/// The y flux is the x flux of the state with its momenta exchanged, with
/// the same exchange applied to the result.
#[inline]
fn gas_flux_2d(u: &[f64; 4], gamma: f64, axis: Axis) -> [f64; 4] {
    let (n, t) = match axis {
        Axis::X => (1, 2),
        Axis::Y => (2, 1),
    };
    let vn = u[n] / u[0];
    let p = (gamma - 1.0) * (u[3] - 0.5 * (u[n] * u[n] + u[t] * u[t]) / u[0]);
    let mut f = [0.0; 4];
    f[0] = u[n];
    f[n] = u[n] * vn + p;
    f[t] = u[t] * vn;
    f[3] = vn * (u[3] + p);
    f
}

/// Left and right eigenvectors of a flux Jacobian. `left[k]` is the k-th
/// left eigenvector and column `k` of `right` the matching right one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicBasis<const N: usize> {
    pub left: [[f64; N]; N],
    pub right: [[f64; N]; N],
    pub speeds: [f64; N],
}

impl<const N: usize> CharacteristicBasis<N> {
    pub fn identity(speeds: [f64; N]) -> Self {
        let mut id = [[0.0; N]; N];
        for (k, row) in id.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        Self {
            left: id,
            right: id,
            speeds,
        }
    }

    #[inline]
    pub fn to_characteristic(&self, u: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, row) in out.iter_mut().zip(&self.left) {
            *o = dot(row, u);
        }
        out
    }

    #[inline]
    pub fn to_conserved(&self, w: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, row) in out.iter_mut().zip(&self.right) {
            *o = dot(row, w);
        }
        out
    }
}

#[inline]
fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    let mut acc = 0.0;
    for k in 0..N {
        acc += a[k] * b[k];
    }
    acc
}

/// Roe average of velocity components and total enthalpy.
fn roe_average<const M: usize>(
    rl: f64,
    vl: [f64; M],
    hl: f64,
    rr: f64,
    vr: [f64; M],
    hr: f64,
) -> ([f64; M], f64) {
    let sl = rl.sqrt();
    let sr = rr.sqrt();
    let inv = 1.0 / (sl + sr);
    let mut v = [0.0; M];
    for k in 0..M {
        v[k] = (sl * vl[k] + sr * vr[k]) * inv;
    }
    (v, (sl * hl + sr * hr) * inv)
}

fn sound_speed_sq(gamma: f64, h: f64, q2: f64) -> Result<f64> {
    let c2 = (gamma - 1.0) * (h - 0.5 * q2);
    if c2 > 0.0 && c2.is_finite() {
        Ok(c2)
    } else {
        Err(state_error("unphysical Roe average (c^2 <= 0)"))
    }
}

fn enthalpy(rho: f64, energy: f64, p: f64) -> f64 {
    (energy + p) / rho
}

pub fn eigensystem_1d(ul: &EulerState1D, ur: &EulerState1D) -> Result<CharacteristicBasis<3>> {
    ul.validate()?;
    ur.validate()?;
    gas_basis_1d(&ul.to_array(), &ur.to_array(), ul.gamma)
}

fn gas_basis_1d(ul: &[f64; 3], ur: &[f64; 3], gamma: f64) -> Result<CharacteristicBasis<3>> {
    let pl = (gamma - 1.0) * (ul[2] - 0.5 * ul[1] * ul[1] / ul[0]);
    let pr = (gamma - 1.0) * (ur[2] - 0.5 * ur[1] * ur[1] / ur[0]);
    if !(ul[0] > 0.0 && ur[0] > 0.0) {
        return Err(state_error("nonpositive density"));
    }
    let ([u], h) = roe_average(
        ul[0],
        [ul[1] / ul[0]],
        enthalpy(ul[0], ul[2], pl),
        ur[0],
        [ur[1] / ur[0]],
        enthalpy(ur[0], ur[2], pr),
    );
    let c2 = sound_speed_sq(gamma, h, u * u)?;
    let c = c2.sqrt();
    let b1 = (gamma - 1.0) / c2;
    let b2 = 0.5 * u * u * b1;
    let ic = 1.0 / c;
    let right = [
        [1.0, 1.0, 1.0],
        [u - c, u, u + c],
        [h - u * c, 0.5 * u * u, h + u * c],
    ];
    let left = [
        [0.5 * (b2 + u * ic), -0.5 * (b1 * u + ic), 0.5 * b1],
        [1.0 - b2, b1 * u, -b1],
        [0.5 * (b2 - u * ic), -0.5 * (b1 * u - ic), 0.5 * b1],
    ];
    Ok(CharacteristicBasis {
        left,
        right,
        speeds: [u - c, u, u + c],
    })
}

pub fn eigensystem_2d(
    ul: &EulerState2D,
    ur: &EulerState2D,
    axis: Axis,
) -> Result<CharacteristicBasis<4>> {
    ul.validate()?;
    ur.validate()?;
    gas_basis_2d(&ul.to_array(), &ur.to_array(), ul.gamma, axis)
}

const SWAP: [usize; 4] = [0, 2, 1, 3];

fn gas_basis_2d(
    ul: &[f64; 4],
    ur: &[f64; 4],
    gamma: f64,
    axis: Axis,
) -> Result<CharacteristicBasis<4>> {
    if axis == Axis::Y {
        let b = gas_basis_2d(&permute(ul), &permute(ur), gamma, Axis::X)?;
        let mut left = [[0.0; 4]; 4];
        let mut right = [[0.0; 4]; 4];
        for a in 0..4 {
            for k in 0..4 {
                left[a][k] = b.left[a][SWAP[k]];
                right[a][k] = b.right[SWAP[a]][k];
            }
        }
        return Ok(CharacteristicBasis {
            left,
            right,
            speeds: b.speeds,
        });
    }
    if !(ul[0] > 0.0 && ur[0] > 0.0) {
        return Err(state_error("nonpositive density"));
    }
    let pressure = |u: &[f64; 4]| (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
    let ([u, v], h) = roe_average(
        ul[0],
        [ul[1] / ul[0], ul[2] / ul[0]],
        enthalpy(ul[0], ul[3], pressure(ul)),
        ur[0],
        [ur[1] / ur[0], ur[2] / ur[0]],
        enthalpy(ur[0], ur[3], pressure(ur)),
    );
    let q2 = u * u + v * v;
    let c2 = sound_speed_sq(gamma, h, q2)?;
    let c = c2.sqrt();
    let b1 = (gamma - 1.0) / c2;
    let b2 = 0.5 * q2 * b1;
    let ic = 1.0 / c;
    // Columns: u - c, u (entropy), u (shear), u + c.
    let right = [
        [1.0, 1.0, 0.0, 1.0],
        [u - c, u, 0.0, u + c],
        [v, v, 1.0, v],
        [h - u * c, 0.5 * q2, v, h + u * c],
    ];
    let left = [
        [
            0.5 * (b2 + u * ic),
            -0.5 * (b1 * u + ic),
            -0.5 * b1 * v,
            0.5 * b1,
        ],
        [1.0 - b2, b1 * u, b1 * v, -b1],
        [-v, 0.0, 1.0, 0.0],
        [
            0.5 * (b2 - u * ic),
            -0.5 * (b1 * u - ic),
            -0.5 * b1 * v,
            0.5 * b1,
        ],
    ];
    Ok(CharacteristicBasis {
        left,
        right,
        speeds: [u - c, u, u, u + c],
    })
}

#[inline]
fn permute(u: &[f64; 4]) -> [f64; 4] {
    [u[0], u[2], u[1], u[3]]
}

/// Local Lax-Friedrichs splitting `f± = (f ± alpha u) / 2`, applied
/// componentwise to values already expressed in characteristic variables.
pub fn llf_split<const N: usize>(
    f_values: &[[f64; N]],
    u_values: &[[f64; N]],
    alpha: &[f64; N],
) -> Result<(Vec<[f64; N]>, Vec<[f64; N]>)> {
    if f_values.len() != u_values.len() {
        return Err(Error::domain("flux and state lists differ in length"));
    }
    if alpha.iter().any(|a| !(*a > 0.0)) {
        return Err(Error::domain("splitting speeds must be positive"));
    }
    let mut plus = Vec::with_capacity(f_values.len());
    let mut minus = Vec::with_capacity(f_values.len());
    for (f, u) in f_values.iter().zip(u_values) {
        let mut p = [0.0; N];
        let mut m = [0.0; N];
        for k in 0..N {
            p[k] = 0.5 * (f[k] + alpha[k] * u[k]);
            m[k] = 0.5 * (f[k] - alpha[k] * u[k]);
        }
        plus.push(p);
        minus.push(m);
    }
    Ok((plus, minus))
}

/// A hyperbolic system `u_t + div f(u) = 0` with `N` conserved fields, as
/// seen by the finite-difference solver.
///
/// Line sweeps along an axis work in that axis' frame: a linear relabeling of
/// the state in which the axis plays the role of `x` (for 2D gas dynamics,
/// the two momenta are exchanged on the y axis). The `frame_*` methods take
/// and return frame quantities. They assume states already screened by
/// [`ConservationLaw::admissible`] and may return non-finite values otherwise.
pub trait ConservationLaw<const N: usize>: Send + Sync {
    /// Number of space dimensions the law is posed in.
    fn dims(&self) -> usize;

    fn component_names(&self) -> [&'static str; N];

    fn to_frame(&self, u: &[f64; N], _axis: Axis) -> [f64; N] {
        *u
    }

    fn from_frame(&self, v: &[f64; N], _axis: Axis) -> [f64; N] {
        *v
    }

    /// Flux normal to `axis`.
    fn frame_flux(&self, u: &[f64; N], axis: Axis) -> [f64; N];

    /// Pointwise characteristic speeds, ordered like [`Self::frame_basis`].
    fn frame_speeds(&self, u: &[f64; N], axis: Axis) -> [f64; N];

    /// Eigenbasis of the normal flux Jacobian at an average of `ul` and `ur`.
    fn frame_basis(
        &self,
        ul: &[f64; N],
        ur: &[f64; N],
        axis: Axis,
    ) -> Result<CharacteristicBasis<N>>;

    /// State after reflection through a wall normal to `axis`.
    fn reflect(&self, u: &[f64; N], axis: Axis) -> [f64; N];

    /// `Err(reason)` for states the law cannot evolve.
    fn admissible(&self, u: &[f64; N]) -> std::result::Result<(), &'static str>;

    /// Density and pressure, for laws that have them.
    fn density_pressure(&self, _u: &[f64; N]) -> Option<(f64, f64)> {
        None
    }

    fn gamma(&self) -> Option<f64> {
        None
    }

    fn flux(&self, u: &[f64; N], axis: Axis) -> [f64; N] {
        self.from_frame(&self.frame_flux(&self.to_frame(u, axis), axis), axis)
    }

    fn speeds(&self, u: &[f64; N], axis: Axis) -> [f64; N] {
        self.frame_speeds(&self.to_frame(u, axis), axis)
    }

    fn max_speed(&self, u: &[f64; N], axis: Axis) -> f64 {
        self.speeds(u, axis).iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Eigenbasis in the global frame.
    fn basis(&self, ul: &[f64; N], ur: &[f64; N], axis: Axis) -> Result<CharacteristicBasis<N>> {
        let b = self.frame_basis(&self.to_frame(ul, axis), &self.to_frame(ur, axis), axis)?;
        let mut left = [[0.0; N]; N];
        let mut right = [[0.0; N]; N];
        for k in 0..N {
            let mut e = [0.0; N];
            e[k] = 1.0;
            let pk = self.to_frame(&e, axis);
            let col: [f64; N] = std::array::from_fn(|a| b.right[a][k]);
            let gk = self.from_frame(&col, axis);
            for a in 0..N {
                left[a][k] = dot(&b.left[a], &pk);
                right[a][k] = gk[a];
            }
        }
        Ok(CharacteristicBasis {
            left,
            right,
            speeds: b.speeds,
        })
    }
}

fn gas_admissible(rho: f64, p: f64) -> std::result::Result<(), &'static str> {
    if !rho.is_finite() || !p.is_finite() {
        Err("non-finite state")
    } else if rho <= 0.0 {
        Err("nonpositive density")
    } else if p <= 0.0 {
        Err("nonpositive pressure")
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler1D {
    pub gamma: f64,
}

impl Default for Euler1D {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
        }
    }
}

impl Euler1D {
    pub fn pressure(&self, u: &[f64; 3]) -> f64 {
        (self.gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
    }
}

impl ConservationLaw<3> for Euler1D {
    fn dims(&self) -> usize {
        1
    }

    fn component_names(&self) -> [&'static str; 3] {
        ["rho", "mom", "E"]
    }

    #[inline]
    fn frame_flux(&self, u: &[f64; 3], _axis: Axis) -> [f64; 3] {
        gas_flux_1d(u, self.gamma)
    }

    #[inline]
    fn frame_speeds(&self, u: &[f64; 3], _axis: Axis) -> [f64; 3] {
        let v = u[1] / u[0];
        let c = (self.gamma * self.pressure(u) / u[0]).sqrt();
        [v - c, v, v + c]
    }

    fn frame_basis(
        &self,
        ul: &[f64; 3],
        ur: &[f64; 3],
        _axis: Axis,
    ) -> Result<CharacteristicBasis<3>> {
        gas_basis_1d(ul, ur, self.gamma)
    }

    fn reflect(&self, u: &[f64; 3], _axis: Axis) -> [f64; 3] {
        [u[0], -u[1], u[2]]
    }

    fn admissible(&self, u: &[f64; 3]) -> std::result::Result<(), &'static str> {
        gas_admissible(u[0], self.pressure(u))
    }

    fn density_pressure(&self, u: &[f64; 3]) -> Option<(f64, f64)> {
        Some((u[0], self.pressure(u)))
    }

    fn gamma(&self) -> Option<f64> {
        Some(self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler2D {
    pub gamma: f64,
}

impl Default for Euler2D {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
        }
    }
}

impl Euler2D {
    pub fn pressure(&self, u: &[f64; 4]) -> f64 {
        (self.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
    }
}

impl ConservationLaw<4> for Euler2D {
    fn dims(&self) -> usize {
        2
    }

    fn component_names(&self) -> [&'static str; 4] {
        ["rho", "momx", "momy", "E"]
    }

    #[inline]
    fn to_frame(&self, u: &[f64; 4], axis: Axis) -> [f64; 4] {
        match axis {
            Axis::X => *u,
            Axis::Y => permute(u),
        }
    }

    #[inline]
    fn from_frame(&self, v: &[f64; 4], axis: Axis) -> [f64; 4] {
        self.to_frame(v, axis)
    }

    #[inline]
    fn frame_flux(&self, u: &[f64; 4], _axis: Axis) -> [f64; 4] {
        gas_flux_2d(u, self.gamma, Axis::X)
    }

    #[inline]
    fn frame_speeds(&self, u: &[f64; 4], _axis: Axis) -> [f64; 4] {
        let vn = u[1] / u[0];
        let c = (self.gamma * self.pressure(u) / u[0]).sqrt();
        [vn - c, vn, vn, vn + c]
    }

    fn frame_basis(
        &self,
        ul: &[f64; 4],
        ur: &[f64; 4],
        _axis: Axis,
    ) -> Result<CharacteristicBasis<4>> {
        gas_basis_2d(ul, ur, self.gamma, Axis::X)
    }

    fn reflect(&self, u: &[f64; 4], axis: Axis) -> [f64; 4] {
        let mut out = *u;
        out[1 + axis.index()] = -out[1 + axis.index()];
        out
    }

    fn admissible(&self, u: &[f64; 4]) -> std::result::Result<(), &'static str> {
        gas_admissible(u[0], self.pressure(u))
    }

    fn density_pressure(&self, u: &[f64; 4]) -> Option<(f64, f64)> {
        Some((u[0], self.pressure(u)))
    }

    fn gamma(&self) -> Option<f64> {
        Some(self.gamma)
    }
}

/// `u_t + a . grad u = 0` with constant velocity `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearAdvection {
    pub velocity: [f64; 2],
    pub dims: usize,
}

impl LinearAdvection {
    pub fn one_d(a: f64) -> Self {
        Self {
            velocity: [a, 0.0],
            dims: 1,
        }
    }

    pub fn two_d(ax: f64, ay: f64) -> Self {
        Self {
            velocity: [ax, ay],
            dims: 2,
        }
    }
}

impl ConservationLaw<1> for LinearAdvection {
    fn dims(&self) -> usize {
        self.dims
    }

    fn component_names(&self) -> [&'static str; 1] {
        ["u"]
    }

    #[inline]
    fn frame_flux(&self, u: &[f64; 1], axis: Axis) -> [f64; 1] {
        [self.velocity[axis.index()] * u[0]]
    }

    #[inline]
    fn frame_speeds(&self, _u: &[f64; 1], axis: Axis) -> [f64; 1] {
        [self.velocity[axis.index()]]
    }

    fn frame_basis(
        &self,
        _ul: &[f64; 1],
        _ur: &[f64; 1],
        axis: Axis,
    ) -> Result<CharacteristicBasis<1>> {
        Ok(CharacteristicBasis::identity([self.velocity[axis.index()]]))
    }

    fn reflect(&self, u: &[f64; 1], _axis: Axis) -> [f64; 1] {
        *u
    }

    fn admissible(&self, u: &[f64; 1]) -> std::result::Result<(), &'static str> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err("non-finite state")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn rest_state_fluxes() {
        let u = EulerState1D::from_primitive(1.0, 0.0, 1.0, 1.4);
        assert!((u.energy - 2.5).abs() < 1e-15);
        assert_eq!(flux_1d(&u).unwrap(), [0.0, 1.0, 0.0]);
        let u = EulerState2D::from_primitive(1.4, 0.0, 0.0, 1.0, 1.4);
        assert_eq!(flux_2d(&u, Axis::X).unwrap(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn shock_state_flux_against_hand_arithmetic() {
        let (rho, v, p) = (3.857143, 2.629369, 10.33333);
        let u = EulerState1D::from_primitive(rho, v, p, 1.4);
        let e = p / 0.4 + 0.5 * rho * v * v;
        let f = flux_1d(&u).unwrap();
        assert!(close(f[0], rho * v, 1e-15));
        assert!(close(f[1], rho * v * v + p, 1e-14));
        assert!(close(f[2], v * (e + p), 1e-14));
        assert!(close(u.pressure(), 10.33333, 1e-12));
    }

    #[test]
    fn quadrant_state_flux() {
        let u = EulerState2D::from_primitive(1.5, 0.0, 0.0, 1.5, 1.4);
        assert_eq!(flux_2d(&u, Axis::X).unwrap(), [0.0, 1.5, 0.0, 0.0]);
        assert_eq!(flux_2d(&u, Axis::Y).unwrap(), [0.0, 0.0, 1.5, 0.0]);
    }

    #[test]
    fn mirrored_velocity_flips_odd_components() {
        let a = flux_1d(&EulerState1D::from_primitive(1.3, 0.7, 2.0, 1.4)).unwrap();
        let b = flux_1d(&EulerState1D::from_primitive(1.3, -0.7, 2.0, 1.4)).unwrap();
        assert_eq!(a[0], -b[0]);
        assert_eq!(a[1], b[1]);
        assert_eq!(a[2], -b[2]);
    }

    #[test]
    fn axis_swap_symmetry() {
        let u = EulerState2D::from_primitive(0.9, 0.3, -1.1, 0.7, 1.4);
        let fy = flux_2d(&u.swap_axes(), Axis::Y).unwrap();
        let fx = flux_2d(&u, Axis::X).unwrap();
        assert_eq!(fy, permute(&fx));
    }

    #[test]
    fn rejects_unphysical_states() {
        let bad = EulerState1D::from_primitive(-1.0, 0.0, 1.0, 1.4);
        assert!(matches!(flux_1d(&bad), Err(Error::State(_))));
        let bad = EulerState2D::from_primitive(1.0, 0.0, 0.0, -1.0, 1.4);
        assert!(flux_2d(&bad, Axis::Y).is_err());
    }

    #[test]
    fn symmetric_states_have_zero_entropy_speed() {
        let l = EulerState1D::from_primitive(1.0, 0.5, 1.0, 1.4);
        let r = EulerState1D::from_primitive(1.0, -0.5, 1.0, 1.4);
        let b = eigensystem_1d(&l, &r).unwrap();
        assert_eq!(b.speeds[1], 0.0);
        assert!(b.speeds[0] < 0.0 && b.speeds[2] > 0.0);
    }

    #[test]
    fn split_reassembles_flux() {
        let f = [[1.0, -2.0], [0.5, 3.0]];
        let u = [[0.25, 1.0], [2.0, -1.0]];
        let (p, m) = llf_split(&f, &u, &[2.0, 4.0]).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                assert_eq!(p[i][k] + m[i][k], f[i][k]);
            }
        }
        let (p, m) = llf_split(&[[0.0; 3]], &[[0.0; 3]], &[1.0; 3]).unwrap();
        assert_eq!((p[0], m[0]), ([0.0; 3], [0.0; 3]));
        assert!(llf_split(&f, &u, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn trait_basis_matches_direct_y_basis() {
        let law = Euler2D::default();
        let l = EulerState2D::from_primitive(1.0, 0.3, -0.4, 1.0, 1.4);
        let r = EulerState2D::from_primitive(0.8, 0.1, 0.2, 0.7, 1.4);
        let a = law.basis(&l.to_array(), &r.to_array(), Axis::Y).unwrap();
        let b = eigensystem_2d(&l, &r, Axis::Y).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            law.flux(&l.to_array(), Axis::Y),
            flux_2d(&l, Axis::Y).unwrap()
        );
    }

    #[test]
    fn laws_reflect_normal_momentum() {
        let law = Euler2D::default();
        assert_eq!(
            law.reflect(&[1.0, 2.0, 3.0, 9.0], Axis::Y),
            [1.0, 2.0, -3.0, 9.0]
        );
        assert_eq!(
            Euler1D::default().reflect(&[1.0, 2.0, 9.0], Axis::X),
            [1.0, -2.0, 9.0]
        );
    }
}
