//! Conservative finite-difference solver on uniform Cartesian grids.
//!
//! Point values of the conserved variables live at cell centers. Each
//! interface flux is assembled from split fluxes of the `2r + 2` nearest
//! points: they are projected onto the characteristic basis of the Roe
//! state at the interface, split with local Lax-Friedrichs speeds,
//! reconstructed at the interface with `tau = 1/2` cell-average tables (the
//! minus part through the reversed window), and mapped back. In 2D both
//! axis contributions are summed before every Runge-Kutta stage.
//!
//! Lines are independent, so sweeps run over lines in parallel. Every line
//! performs the same arithmetic regardless of scheduling, which keeps
//! results bitwise independent of the thread count.

pub mod boundary;
pub mod output;
pub mod problems;

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{Axis, CharacteristicBasis, ConservationLaw};
use crate::exact::rat;
use crate::exec::{for_each_chunk_mut, try_for_each_chunk_mut, Execution};
use crate::reconstruct::{Binary64Kernel, Kernel, Scheme, WeightConfig};
use crate::stencil::TableBuilder;

pub use boundary::{fill_ghosts, Boundaries, Boundary, StateRule};

/// Upper bound on `2r + 2` for the fixed-size per-interface buffers.
const MAX_STENCIL: usize = 16;

/// Kernel lanes per interface: plus and minus windows of up to 4 fields.
const LANES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    dims: usize,
    n: [usize; 2],
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Grid {
    pub fn new_1d(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::build(1, [n, 1], [lower, 0.0], [upper, 1.0])
    }

    pub fn new_2d(nx: usize, ny: usize, lower: [f64; 2], upper: [f64; 2]) -> Result<Self> {
        Self::build(2, [nx, ny], lower, upper)
    }

    fn build(dims: usize, n: [usize; 2], lower: [f64; 2], upper: [f64; 2]) -> Result<Self> {
        for a in 0..dims {
            if n[a] == 0 {
                return Err(Error::domain("grid needs at least one cell per axis"));
            }
            if !(upper[a] > lower[a]) || !lower[a].is_finite() || !upper[a].is_finite() {
                return Err(Error::domain("grid bounds must be finite and increasing"));
            }
        }
        Ok(Self {
            dims,
            n,
            lower,
            upper,
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn n(&self, axis: Axis) -> usize {
        self.n[axis.index()]
    }

    pub fn lower(&self) -> [f64; 2] {
        self.lower
    }

    pub fn upper(&self) -> [f64; 2] {
        self.upper
    }

    pub fn h(&self, axis: Axis) -> f64 {
        let a = axis.index();
        (self.upper[a] - self.lower[a]) / self.n[a] as f64
    }

    /// Center of cell `i` along `axis`, counted from 0 at the lower
    /// boundary; negative indices address ghost cells.
    pub fn center(&self, axis: Axis, i: isize) -> f64 {
        self.lower[axis.index()] + (i as f64 + 0.5) * self.h(axis)
    }

    pub fn axes(&self) -> &'static [Axis] {
        if self.dims == 2 {
            &[Axis::X, Axis::Y]
        } else {
            &[Axis::X]
        }
    }

    /// Every axis must hold at least `2 (r + 1)` cells.
    pub fn check_order(&self, r: usize) -> Result<()> {
        for &a in self.axes() {
            if self.n(a) < 2 * (r + 1) {
                return Err(Error::domain(format!(
                    "{} cells along {a:?} is too few for r = {r}",
                    self.n(a)
                )));
            }
        }
        Ok(())
    }
}

/// Storage shape of a field: interior extents plus `g` ghost layers on
/// each side of every active axis. Cells are stored row by row (x fastest).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub nx: usize,
    pub ny: usize,
    pub g: usize,
    pub dims: usize,
}

impl Layout {
    pub fn new(grid: &Grid, g: usize) -> Self {
        Self {
            nx: grid.n(Axis::X),
            ny: if grid.dims() == 2 { grid.n(Axis::Y) } else { 1 },
            g,
            dims: grid.dims(),
        }
    }

    pub fn row_len(&self) -> usize {
        self.nx + 2 * self.g
    }

    pub fn rows(&self) -> usize {
        if self.dims == 2 {
            self.ny + 2 * self.g
        } else {
            1
        }
    }

    /// Ghost rows below the first interior row.
    pub fn gy(&self) -> usize {
        if self.dims == 2 {
            self.g
        } else {
            0
        }
    }

    pub fn len(&self) -> usize {
        self.row_len() * self.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Storage index of ghost-inclusive coordinates.
    #[inline]
    pub fn raw(&self, i: usize, j: usize) -> usize {
        j * self.row_len() + i
    }

    /// Storage index of interior cell `(i, j)`.
    #[inline]
    pub fn interior(&self, i: usize, j: usize) -> usize {
        self.raw(i + self.g, j + self.gy())
    }
}

/// Conserved variables on a grid, ghost layers included.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<const N: usize> {
    layout: Layout,
    data: Vec<[f64; N]>,
}

impl<const N: usize> Field<N> {
    pub fn zeros(layout: Layout) -> Self {
        Self {
            layout,
            data: vec![[0.0; N]; layout.len()],
        }
    }

    /// Samples `f` at every interior cell center; ghosts start at zero.
    pub fn from_fn(grid: &Grid, g: usize, f: impl Fn([f64; 2]) -> [f64; N]) -> Self {
        let layout = Layout::new(grid, g);
        let mut field = Self::zeros(layout);
        for j in 0..layout.ny {
            let y = if grid.dims() == 2 {
                grid.center(Axis::Y, j as isize)
            } else {
                0.0
            };
            for i in 0..layout.nx {
                let x = grid.center(Axis::X, i as isize);
                field.data[layout.interior(i, j)] = f([x, y]);
            }
        }
        field
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn nx(&self) -> usize {
        self.layout.nx
    }

    pub fn ny(&self) -> usize {
        self.layout.ny
    }

    /// Interior cell `(i, j)`; `j = 0` in 1D.
    pub fn at(&self, i: usize, j: usize) -> &[f64; N] {
        &self.data[self.layout.interior(i, j)]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut [f64; N] {
        let k = self.layout.interior(i, j);
        &mut self.data[k]
    }

    pub fn data(&self) -> &[[f64; N]] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [[f64; N]] {
        &mut self.data
    }

    /// Interior values of component `k`, row by row.
    pub fn component(&self, k: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.layout.nx * self.layout.ny);
        for j in 0..self.layout.ny {
            for i in 0..self.layout.nx {
                out.push(self.at(i, j)[k]);
            }
        }
        out
    }

    /// Interior cells in storage order with their interior coordinates.
    pub fn interior(&self) -> impl Iterator<Item = ((usize, usize), &[f64; N])> + '_ {
        let l = self.layout;
        (0..l.ny).flat_map(move |j| (0..l.nx).map(move |i| ((i, j), self.at(i, j))))
    }

    /// Mirror image across the diagonal, with `f` applied to every state.
    pub fn transposed(&self, f: impl Fn(&[f64; N]) -> [f64; N]) -> Self {
        let l = self.layout;
        let t = Layout {
            nx: l.ny,
            ny: l.nx,
            ..l
        };
        let mut out = Self::zeros(t);
        for j in 0..l.rows() {
            for i in 0..l.row_len() {
                out.data[t.raw(j, i)] = f(&self.data[l.raw(i, j)]);
            }
        }
        out
    }
}

/// Reconstruction scheme and order used for interface fluxes.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub r: usize,
    pub config: WeightConfig,
}

impl SchemeSpec {
    pub fn new(scheme: Scheme, r: usize) -> Self {
        Self {
            r,
            config: WeightConfig::for_scheme(scheme, r),
        }
    }

    pub fn with_remap(mut self, s1: u32, s2: u32) -> Self {
        self.config = self.config.with_remap(s1, s2);
        self
    }

    /// `WENO5`, `CWENO5-LPR`, `CWENO5 (s1=3,s2=2)`, ...
    pub fn label(&self) -> String {
        let base = self.config.scheme.label(self.r);
        match (self.config.scheme, self.config.global) {
            (Scheme::CwenoGlobal, crate::reconstruct::GlobalMode::Remap { s1, s2 }) => {
                format!("{base} (s1={s1},s2={s2})")
            }
            (Scheme::CwenoGlobal, crate::reconstruct::GlobalMode::PowerM(m)) => {
                format!("{base} (m={m})")
            }
            _ => base,
        }
    }

    pub fn kernel(&self) -> Result<Kernel<f64>> {
        let tables = TableBuilder::new(self.r, rat(1, 2)).build()?;
        Kernel::new(&tables, &self.config, ())
    }
}

/// Time-step law. `Cfl` gives `dt = cfl / sum_a (alpha_a / h_a)`;
/// `PowerLaw` further multiplies by `h_min^(exponent - 1)` so that
/// `dt ~ h^exponent`, which lets spatial order show through RK3's third
/// order in convergence studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtRule {
    Cfl,
    PowerLaw { exponent: f64 },
}

/// Where a sweep hit an unusable state.
#[derive(Debug, Clone, PartialEq)]
struct CellFailure {
    cell: (usize, usize),
    reason: String,
}

/// Per-line buffers reused across interfaces.
struct LineScratch<const N: usize> {
    line: Vec<[f64; N]>,
    flux: Vec<[f64; N]>,
    speed: Vec<[f64; N]>,
    iflux: Vec<[f64; N]>,
}

impl<const N: usize> LineScratch<N> {
    fn new(len: usize) -> Self {
        Self {
            line: Vec::with_capacity(len),
            flux: Vec::with_capacity(len),
            speed: Vec::with_capacity(len),
            iflux: Vec::with_capacity(len),
        }
    }
}

/// The semi-discrete operator `L(U) = -sum_a D_a f_a(U)` for one problem.
pub struct SpatialOperator<L, const N: usize> {
    law: L,
    grid: Grid,
    boundaries: Boundaries<N>,
    kernel: Binary64Kernel,
    eps: f64,
    r: usize,
    layout: Layout,
    exec: Execution,
}

impl<L: ConservationLaw<N>, const N: usize> SpatialOperator<L, N> {
    pub fn new(
        law: L,
        grid: Grid,
        boundaries: Boundaries<N>,
        scheme: &SchemeSpec,
        exec: Execution,
    ) -> Result<Self> {
        const { assert!(2 * N <= LANES, "too many fields for the kernel lanes") };
        if law.dims() != grid.dims() {
            return Err(Error::domain("law and grid dimensions differ"));
        }
        grid.check_order(scheme.r)?;
        boundaries.validate(grid.dims())?;
        if 2 * scheme.r + 2 > MAX_STENCIL {
            return Err(Error::OrderOutOfRange {
                r: scheme.r,
                max: MAX_STENCIL / 2 - 1,
            });
        }
        let kernel = scheme.kernel()?;
        let h = grid
            .axes()
            .iter()
            .map(|&a| grid.h(a))
            .fold(f64::INFINITY, f64::min);
        let eps = kernel.eps(&h);
        Ok(Self {
            law,
            grid,
            boundaries,
            kernel: Binary64Kernel::from(&kernel),
            eps,
            r: scheme.r,
            layout: Layout::new(&grid, scheme.r + 1),
            exec,
        })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn law(&self) -> &L {
        &self.law
    }

    pub fn ghosts(&self) -> usize {
        self.r + 1
    }

    pub fn initial_field(&self, f: impl Fn([f64; 2]) -> [f64; N]) -> Field<N> {
        Field::from_fn(&self.grid, self.ghosts(), f)
    }

    pub fn fill_ghosts(&self, u: &mut [[f64; N]], t: f64) {
        fill_ghosts(u, self.layout, &self.grid, &self.boundaries, &self.law, t);
    }

    /// Interface fluxes of one framed line. `iflux[k]` is the flux between
    /// line points `g - 1 + k` and `g + k`, mapped back to the global frame.
    fn line_fluxes(
        &self,
        axis: Axis,
        s: &mut LineScratch<N>,
    ) -> std::result::Result<(), (usize, String)> {
        let r = self.r;
        let g = r + 1;
        let width = 2 * r + 1;
        let n = s.line.len() - 2 * g;
        s.flux.clear();
        s.speed.clear();
        for u in &s.line {
            s.flux.push(self.law.frame_flux(u, axis));
            let mut sp = self.law.frame_speeds(u, axis);
            for v in sp.iter_mut() {
                *v = v.abs();
            }
            s.speed.push(sp);
        }
        s.iflux.clear();
        // Lanes `0..N` hold the plus windows and `N..2N` the reversed minus
        // windows, so one kernel call reconstructs both.
        let mut lanes = [[0.0; LANES]; MAX_STENCIL];
        for k in 0..=n {
            let i = g - 1 + k;
            let basis: CharacteristicBasis<N> = self
                .law
                .frame_basis(&s.line[i], &s.line[i + 1], axis)
                .map_err(|e| (i, e.to_string()))?;
            let lo = i - r;
            let mut alpha = [0.0f64; N];
            for sp in &s.speed[lo..=i + 1 + r] {
                for c in 0..N {
                    alpha[c] = alpha[c].max(sp[c]);
                }
            }
            // `minus` is stored reversed so both windows start at index 0.
            for t in 0..width + 1 {
                let p = lo + t;
                let v = basis.to_characteristic(&s.line[p]);
                let gf = basis.to_characteristic(&s.flux[p]);
                for c in 0..N {
                    lanes[t][c] = 0.5 * (gf[c] + alpha[c] * v[c]);
                    lanes[width - t][N + c] = 0.5 * (gf[c] - alpha[c] * v[c]);
                }
            }
            let fpm = self.kernel.eval_lanes(&lanes[..width], self.eps);
            let mut hat = [0.0; N];
            for c in 0..N {
                hat[c] = fpm[c] + fpm[N + c];
            }
            let f = basis.to_conserved(&hat);
            s.iflux.push(self.law.from_frame(&f, axis));
        }
        Ok(())
    }

    /// Writes `D f` along one line into `div` (length `n`).
    fn line_divergence(
        &self,
        axis: Axis,
        s: &mut LineScratch<N>,
        div: &mut [[f64; N]],
    ) -> std::result::Result<(), (usize, String)> {
        self.line_fluxes(axis, s)?;
        let h = self.grid.h(axis);
        for (k, d) in div.iter_mut().enumerate() {
            for c in 0..N {
                d[c] = (s.iflux[k + 1][c] - s.iflux[k][c]) / h;
            }
        }
        Ok(())
    }

    /// Flux difference `(F_{j+1/2} - F_{j-1/2}) / h` along `axis` at every
    /// interior cell, row by row. Ghost layers of `u` must be filled.
    pub fn flux_divergence(&self, u: &[[f64; N]], axis: Axis) -> Result<Vec<[f64; N]>> {
        let l = self.layout;
        let mut out = vec![[0.0; N]; l.nx * l.ny];
        let fail = |f: CellFailure| numerical(0, 0.0, f);
        match axis {
            Axis::X => self.sweep_x(u, &mut out, l.nx).map_err(fail)?,
            Axis::Y => {
                let mut cols = vec![[0.0; N]; l.nx * l.ny];
                self.sweep_y(u, &mut cols).map_err(fail)?;
                for j in 0..l.ny {
                    for i in 0..l.nx {
                        out[j * l.nx + i] = cols[i * l.ny + j];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `D_x f` for every interior row into chunks of `row` cells of `out`;
    /// the interior of row `j` lands at `out[j * row + g'..]` with
    /// `g' = (row - nx) / 2`.
    fn sweep_x(
        &self,
        u: &[[f64; N]],
        out: &mut [[f64; N]],
        row: usize,
    ) -> std::result::Result<(), CellFailure> {
        let l = self.layout;
        let off = (row - l.nx) / 2;
        try_for_each_chunk_mut(self.exec, out, row, |j, chunk| {
            if j >= l.ny {
                return Ok(());
            }
            let mut s = LineScratch::new(l.row_len());
            let start = l.raw(0, j + l.gy());
            s.line.extend(
                u[start..start + l.row_len()]
                    .iter()
                    .map(|v| self.law.to_frame(v, Axis::X)),
            );
            self.line_divergence(Axis::X, &mut s, &mut chunk[off..off + l.nx])
                .map_err(|(i, reason)| CellFailure {
                    cell: (i.saturating_sub(l.g), j),
                    reason,
                })
        })
    }

    /// `D_y f` for every interior column, stored column by column.
    fn sweep_y(
        &self,
        u: &[[f64; N]],
        cols: &mut [[f64; N]],
    ) -> std::result::Result<(), CellFailure> {
        let l = self.layout;
        try_for_each_chunk_mut(self.exec, cols, l.ny, |i, chunk| {
            let mut s = LineScratch::new(l.rows());
            s.line
                .extend((0..l.rows()).map(|j| self.law.to_frame(&u[l.raw(i + l.g, j)], Axis::Y)));
            self.line_divergence(Axis::Y, &mut s, chunk)
                .map_err(|(j, reason)| CellFailure {
                    cell: (i, j.saturating_sub(l.g)),
                    reason,
                })
        })
    }

    /// Fills ghosts of `u` for time `t` and writes `L(u)` into `out`
    /// (zero on ghost cells). `cols` is scratch of `nx * ny` cells.
    fn rhs(
        &self,
        u: &mut [[f64; N]],
        t: f64,
        out: &mut [[f64; N]],
        cols: &mut [[f64; N]],
    ) -> std::result::Result<(), CellFailure> {
        self.fill_ghosts(u, t);
        let l = self.layout;
        let row = l.row_len();
        let gy = l.gy();
        // Rows are shifted by the ghost rows so chunk `j` is interior row `j`.
        let body = &mut out[gy * row..];
        self.sweep_x(u, body, row)?;
        if l.dims == 2 {
            self.sweep_y(u, cols)?;
        }
        let cols = &*cols;
        for_each_chunk_mut(self.exec, out, row, |jr, chunk| {
            if jr < gy || jr >= gy + l.ny {
                chunk.fill([0.0; N]);
                return;
            }
            let j = jr - gy;
            chunk[..l.g].fill([0.0; N]);
            chunk[l.g + l.nx..].fill([0.0; N]);
            for i in 0..l.nx {
                let d = &mut chunk[l.g + i];
                if l.dims == 2 {
                    let dy = &cols[i * l.ny + j];
                    for c in 0..N {
                        d[c] = -(d[c] + dy[c]);
                    }
                } else {
                    for c in 0..N {
                        d[c] = -d[c];
                    }
                }
            }
        });
        Ok(())
    }

    /// Stable step size for `u` under `rule`, from the largest pointwise
    /// characteristic speed along each axis.
    pub fn time_step(&self, u: &Field<N>, cfl: f64, rule: DtRule) -> f64 {
        let mut rate = 0.0;
        let mut hmin = f64::INFINITY;
        for &a in self.grid.axes() {
            let alpha = u
                .interior()
                .map(|(_, v)| self.law.max_speed(v, a))
                .fold(0.0, f64::max);
            rate += alpha / self.grid.h(a);
            hmin = hmin.min(self.grid.h(a));
        }
        let dt = cfl / rate;
        match rule {
            DtRule::Cfl => dt,
            DtRule::PowerLaw { exponent } => dt * hmin.powf(exponent - 1.0),
        }
    }
}

fn numerical(step: usize, time: f64, f: CellFailure) -> Error {
    Error::Numerical {
        step,
        time,
        cell: f.cell,
        reason: f.reason,
    }
}

/// Scratch for [`rk3_step`].
#[derive(Debug, Clone, Default)]
pub struct Rk3Workspace {
    base: Vec<f64>,
    acc: Vec<f64>,
    stage: Vec<f64>,
}

/// One step of the three-stage TVD Runge-Kutta scheme
///
/// ```text
/// U1 = U + dt L(U)
/// U2 = 3/4 U + 1/4 (U1 + dt L(U1))
/// U' = 1/3 U + 2/3 (U2 + dt L(U2))
/// ```
///
/// evaluated in the algebraically equal increment form
/// `U2 = U + dt (L0 + L1) / 4`, `U' = U + dt (L0/6 + L1/6 + 2 L2/3)`, so a
/// vanishing operator leaves `U` bitwise unchanged. `rhs(u, t, out)` may
/// modify `u` (ghost filling) and must write `L(u)` into `out`.
pub fn rk3_step<E>(
    u: &mut [f64],
    t: f64,
    dt: f64,
    ws: &mut Rk3Workspace,
    mut rhs: impl FnMut(&mut [f64], f64, &mut [f64]) -> std::result::Result<(), E>,
) -> std::result::Result<(), E> {
    let n = u.len();
    ws.base.clear();
    ws.base.extend_from_slice(u);
    ws.acc.resize(n, 0.0);
    ws.stage.resize(n, 0.0);
    rhs(u, t, &mut ws.acc)?;
    for ((v, b), l) in u.iter_mut().zip(&ws.base).zip(&ws.acc) {
        *v = b + dt * l;
    }
    rhs(u, t + dt, &mut ws.stage)?;
    for (((v, b), a), l) in u
        .iter_mut()
        .zip(&ws.base)
        .zip(ws.acc.iter_mut())
        .zip(&ws.stage)
    {
        *a += l;
        *v = b + 0.25 * dt * *a;
    }
    rhs(u, t + 0.5 * dt, &mut ws.stage)?;
    for (((v, b), a), l) in u.iter_mut().zip(&ws.base).zip(&ws.acc).zip(&ws.stage) {
        *v = b + dt * (a / 6.0 + 2.0 / 3.0 * l);
    }
    Ok(())
}

/// Everything needed to set up a run.
#[derive(Clone)]
pub struct ProblemSpec<L, const N: usize> {
    pub name: String,
    pub grid: Grid,
    pub law: L,
    pub initial: StateRule<N>,
    pub boundaries: Boundaries<N>,
    pub cfl: f64,
    pub t_final: f64,
    pub dt_rule: DtRule,
    pub scheme: SchemeSpec,
    /// Observer cadence in steps for [`Solver::run_with`].
    pub output_every: Option<usize>,
}

impl<L, const N: usize> ProblemSpec<L, N> {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::domain(format!("CFL {} outside (0, 1]", self.cfl)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::domain("final time must be positive"));
        }
        if let DtRule::PowerLaw { exponent } = self.dt_rule {
            if !(exponent >= 1.0 && exponent.is_finite()) {
                return Err(Error::domain("time-step exponent must be at least 1"));
            }
        }
        if self.output_every == Some(0) {
            return Err(Error::domain("output cadence must be positive"));
        }
        self.scheme.config.validate()
    }

    pub fn with_scheme(mut self, scheme: SchemeSpec) -> Self {
        self.scheme = scheme;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub problem: String,
    pub scheme: String,
    pub steps: usize,
    pub wall_seconds: f64,
    pub final_time: f64,
    pub min_density: Option<f64>,
    pub min_pressure: Option<f64>,
}

/// Time integration of one problem.
pub struct Solver<L, const N: usize> {
    op: SpatialOperator<L, N>,
    u: Field<N>,
    t: f64,
    steps: usize,
    spec_cfl: f64,
    t_final: f64,
    dt_rule: DtRule,
    name: String,
    label: String,
    output_every: Option<usize>,
    ws: Rk3Workspace,
    out: Vec<[f64; N]>,
    cols: Vec<[f64; N]>,
    min_rho: f64,
    min_p: f64,
}

impl<L: ConservationLaw<N> + Clone, const N: usize> Solver<L, N> {
    pub fn new(spec: &ProblemSpec<L, N>, exec: Execution) -> Result<Self> {
        spec.validate()?;
        let op = SpatialOperator::new(
            spec.law.clone(),
            spec.grid,
            spec.boundaries.clone(),
            &spec.scheme,
            exec,
        )?;
        let init = spec.initial.clone();
        let u = op.initial_field(|x| init(x, 0.0));
        let l = op.layout();
        let mut s = Self {
            op,
            u,
            t: 0.0,
            steps: 0,
            spec_cfl: spec.cfl,
            t_final: spec.t_final,
            dt_rule: spec.dt_rule,
            name: spec.name.clone(),
            label: spec.scheme.label(),
            output_every: spec.output_every,
            ws: Rk3Workspace::default(),
            out: vec![[0.0; N]; l.len()],
            cols: vec![[0.0; N]; l.nx * l.ny],
            min_rho: f64::INFINITY,
            min_p: f64::INFINITY,
        };
        s.check_state()?;
        Ok(s)
    }

    pub fn field(&self) -> &Field<N> {
        &self.u
    }

    pub fn into_field(self) -> Field<N> {
        self.u
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn operator(&self) -> &SpatialOperator<L, N> {
        &self.op
    }

    /// Advances by one step of size `dt` and screens the result.
    pub fn step_by(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain("time step must be positive"));
        }
        let op = &self.op;
        let out = &mut self.out;
        let cols = &mut self.cols;
        let (t, step) = (self.t, self.steps);
        rk3_step(
            self.u.data.as_flattened_mut(),
            t,
            dt,
            &mut self.ws,
            |u, ts, l| {
                let (u, _) = u.as_chunks_mut::<N>();
                op.rhs(u, ts, out, cols)?;
                l.copy_from_slice(out.as_flattened());
                Ok(())
            },
        )
        .map_err(|f| numerical(step + 1, t, f))?;
        self.steps += 1;
        self.t = t + dt;
        self.check_state()
    }

    /// Takes one CFL-limited step, clamped so the run ends exactly at the
    /// final time. Returns the step size used.
    pub fn step(&mut self) -> Result<f64> {
        let mut dt = self.op.time_step(&self.u, self.spec_cfl, self.dt_rule);
        let last = !(self.t + dt < self.t_final);
        if last {
            dt = self.t_final - self.t;
        }
        self.step_by(dt)?;
        if last {
            self.t = self.t_final;
        }
        Ok(dt)
    }

    pub fn finished(&self) -> bool {
        self.t >= self.t_final
    }

    /// Runs to the final time, calling `observe(steps, t, field)` at the
    /// start, every `output_every` steps, and at the end.
    pub fn run_with(
        &mut self,
        mut observe: impl FnMut(usize, f64, &Field<N>),
    ) -> Result<RunReport> {
        let start = Instant::now();
        observe(self.steps, self.t, &self.u);
        while !self.finished() {
            self.step()?;
            if let Some(k) = self.output_every {
                if self.steps.is_multiple_of(k) && !self.finished() {
                    observe(self.steps, self.t, &self.u);
                }
            }
        }
        observe(self.steps, self.t, &self.u);
        Ok(self.report(start.elapsed().as_secs_f64()))
    }

    pub fn run(&mut self) -> Result<RunReport> {
        self.run_with(|_, _, _| {})
    }

    /// Summary of the run so far, given the wall time spent on it.
    pub fn report(&self, wall: f64) -> RunReport {
        let has_gas = self.op.law.density_pressure(self.u.at(0, 0)).is_some();
        RunReport {
            problem: self.name.clone(),
            scheme: self.label.clone(),
            steps: self.steps,
            wall_seconds: wall.max(f64::MIN_POSITIVE),
            final_time: self.t,
            min_density: has_gas.then_some(self.min_rho),
            min_pressure: has_gas.then_some(self.min_p),
        }
    }

    /// Aborts on the first non-admissible interior cell in storage order.
    fn check_state(&mut self) -> Result<()> {
        for ((i, j), v) in self.u.interior() {
            if let Err(reason) = self.op.law.admissible(v) {
                return Err(Error::Numerical {
                    step: self.steps,
                    time: self.t,
                    cell: (i, j),
                    reason: reason.to_string(),
                });
            }
            if let Some((rho, p)) = self.op.law.density_pressure(v) {
                self.min_rho = self.min_rho.min(rho);
                self.min_p = self.min_p.min(p);
            }
        }
        Ok(())
    }
}

/// Builds a solver, runs it to completion, and returns the final field.
pub fn run<L: ConservationLaw<N> + Clone, const N: usize>(
    spec: &ProblemSpec<L, N>,
    exec: Execution,
) -> Result<(Field<N>, RunReport)> {
    let mut solver = Solver::new(spec, exec)?;
    let report = solver.run()?;
    Ok((solver.into_field(), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{Euler1D, Euler2D, LinearAdvection};
    use std::sync::Arc;

    #[test]
    fn grid_geometry() {
        let g = Grid::new_1d(10, -5.0, 5.0).unwrap();
        assert_eq!(g.h(Axis::X), 1.0);
        assert_eq!(g.center(Axis::X, 0), -4.5);
        assert_eq!(g.center(Axis::X, -1), -5.5);
        assert!(g.check_order(2).is_ok());
        assert!(g.check_order(5).is_err());
        assert!(Grid::new_1d(4, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_operator_leaves_state_bitwise() {
        let mut u: Vec<f64> = (0..37).map(|i| (i as f64 * 0.37).sin() / 3.0).collect();
        let before = u.clone();
        let mut ws = Rk3Workspace::default();
        rk3_step::<()>(&mut u, 0.0, 0.123, &mut ws, |_, _, out| {
            out.fill(0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(u, before);
    }

    #[test]
    fn linear_ode_matches_cubic_taylor_polynomial() {
        let lambda = -0.7;
        let dt = 0.3;
        let mut u = vec![1.0];
        let mut ws = Rk3Workspace::default();
        rk3_step::<()>(&mut u, 0.0, dt, &mut ws, |v, _, out| {
            out[0] = lambda * v[0];
            Ok(())
        })
        .unwrap();
        let z: f64 = lambda * dt;
        let taylor = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
        assert!((u[0] - taylor).abs() < 1e-15);
    }

    #[test]
    fn constant_state_is_steady_for_every_scheme() {
        let grid = Grid::new_2d(12, 10, [0.0, 0.0], [1.2, 1.0]).unwrap();
        let state = [1.3, 0.4, -0.2, 3.1];
        for scheme in [Scheme::WenoJs, Scheme::CwenoLpr, Scheme::CwenoGlobal] {
            let spec = ProblemSpec {
                name: "constant".into(),
                grid,
                law: Euler2D::default(),
                initial: Arc::new(move |_, _| state),
                boundaries: Boundaries::uniform(Boundary::Outflow),
                cfl: 0.4,
                t_final: 1.0,
                dt_rule: DtRule::Cfl,
                scheme: SchemeSpec::new(scheme, 2),
                output_every: None,
            };
            let mut s = Solver::new(&spec, Execution::Sequential).unwrap();
            for _ in 0..3 {
                s.step().unwrap();
            }
            for (_, v) in s.field().interior() {
                for c in 0..4 {
                    assert!((v[c] - state[c]).abs() <= 1e-13 * state[c].abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn flux_divergence_telescopes() {
        let grid = Grid::new_1d(40, 0.0, 1.0).unwrap();
        let op = SpatialOperator::new(
            LinearAdvection::one_d(1.0),
            grid,
            Boundaries::uniform(Boundary::Periodic),
            &SchemeSpec::new(Scheme::CwenoGlobal, 2),
            Execution::Sequential,
        )
        .unwrap();
        let mut u = op.initial_field(|x| [(6.0 * x[0]).sin() + (x[0] > 0.5) as u8 as f64]);
        op.fill_ghosts(u.data_mut(), 0.0);
        let d = op.flux_divergence(u.data(), Axis::X).unwrap();
        let total: f64 = d.iter().map(|v| v[0]).sum();
        assert!(total.abs() < 1e-12);
    }

    #[test]
    fn negative_pressure_aborts_with_cell() {
        let grid = Grid::new_1d(20, 0.0, 1.0).unwrap();
        let spec = ProblemSpec {
            name: "bad".into(),
            grid,
            law: Euler1D::default(),
            initial: Arc::new(|x, _| {
                if x[0] > 0.5 {
                    [1.0, 0.0, -1.0]
                } else {
                    [1.0, 0.0, 2.5]
                }
            }),
            boundaries: Boundaries::uniform(Boundary::Outflow),
            cfl: 0.5,
            t_final: 0.1,
            dt_rule: DtRule::Cfl,
            scheme: SchemeSpec::new(Scheme::WenoJs, 2),
            output_every: None,
        };
        match Solver::new(&spec, Execution::Sequential) {
            Err(Error::Numerical { cell, .. }) => assert_eq!(cell, (10, 0)),
            other => panic!("expected a numerical failure, got {:?}", other.err()),
        }
    }
}
