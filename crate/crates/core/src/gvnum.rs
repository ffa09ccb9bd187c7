//! Discretized convolution algebra of the suspension groupoid with a frame
//! variable, and the Godbillon-Vey cyclic cocycle on it.
//!
//! An arrow is (n, x_r, x_s, z, τ): winding n, target and source leaf
//! coordinates, transverse source point z and source frame τ = log t. Its
//! inverse is (−n, x_s, x_r, f^n(z), τ + log Δ). Samples live on
//! Simpson grids in x and τ and a periodic grid in z; values off the grid
//! are obtained by Lagrange interpolation in z and τ.

use std::f64::consts::{E, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::folmodel::{simpson_weight, wrap, Germ, ModelError, SuspensionModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GvError {
    #[error("grid sizes must be even and positive: {0:?}")]
    Grid(GridSpec),
    #[error("kernels live on different grids")]
    GridMismatch,
    #[error("support overflow: {0}")]
    SupportOverflow(String),
    #[error("bad kernel specification: {0}")]
    Kernel(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Interval counts for Simpson in x and τ, point count in z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub nz: usize,
    pub nt: usize,
    pub tau_max: f64,
}

impl GridSpec {
    pub fn new(nx: usize, nz: usize, nt: usize, tau_max: f64) -> Result<Self, GvError> {
        let g = GridSpec { nx, nz, nt, tau_max };
        if nx < 4 || nz < 4 || nt < 4 || nx % 2 == 1 || nt % 2 == 1 || !(tau_max > 0.0) {
            return Err(GvError::Grid(g));
        }
        Ok(g)
    }

    /// Every resolution divided by 2^k.
    pub fn coarsened(&self, k: u32) -> Result<Self, GvError> {
        let d = 1usize << k;
        Self::new(self.nx / d, self.nz / d, self.nt / d, self.tau_max)
    }

    pub fn x_points(&self) -> usize {
        self.nx + 1
    }
    pub fn t_points(&self) -> usize {
        self.nt + 1
    }
    pub fn hx(&self) -> f64 {
        1.0 / self.nx as f64
    }
    pub fn hz(&self) -> f64 {
        TAU / self.nz as f64
    }
    pub fn ht(&self) -> f64 {
        2.0 * self.tau_max / self.nt as f64
    }
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }
    pub fn z(&self, i: usize) -> f64 {
        i as f64 * self.hz()
    }
    pub fn tau(&self, i: usize) -> f64 {
        -self.tau_max + i as f64 * self.ht()
    }
    pub fn x_weights(&self) -> Vec<f64> {
        (0..=self.nx).map(|i| simpson_weight(i, self.nx) * self.hx() / 3.0).collect()
    }
    pub fn t_weights(&self) -> Vec<f64> {
        (0..=self.nt).map(|i| simpson_weight(i, self.nt) * self.ht() / 3.0).collect()
    }
}

/// Compact bump exp(1 − 1/(1 − s²)) on |s| < 1, peak value 1.
pub fn bump(x: f64, center: f64, width: f64) -> f64 {
    let s = (x - center) / width;
    if s.abs() >= 1.0 {
        0.0
    } else {
        E * (-1.0 / (1.0 - s * s)).exp()
    }
}

/// Smooth periodic window exp(κ(cos(z − c) − 1)).
pub fn periodic_window(z: f64, center: f64, kappa: f64) -> f64 {
    (kappa * ((z - center).cos() - 1.0)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: f64,
    pub width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingWeight {
    pub n: i32,
    pub weight: f64,
}

/// Closed-form product kernel
/// amp · w_n · B(x_r) · B(x_s) · W(z − n·z_shift) · B(τ) · (1 + ripple·sin(z + x_r − x_s)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpKernel {
    pub amplitude: f64,
    pub windings: Vec<WindingWeight>,
    pub x_target: Window,
    pub x_source: Window,
    pub z_center: f64,
    pub z_kappa: f64,
    #[serde(default)]
    pub z_shift: f64,
    pub tau: Window,
    #[serde(default)]
    pub ripple: f64,
}

impl BumpKernel {
    pub fn value(&self, weight: f64, n: i32, xr: f64, xs: f64, z: f64, tau: f64) -> f64 {
        self.amplitude
            * weight
            * bump(xr, self.x_target.center, self.x_target.width)
            * bump(xs, self.x_source.center, self.x_source.width)
            * periodic_window(z, self.z_center + n as f64 * self.z_shift, self.z_kappa)
            * bump(tau, self.tau.center, self.tau.width)
            * (1.0 + self.ripple * (z + xr - xs).sin())
    }

    /// The same kernel with its τ window moved by `shift`.
    pub fn shifted_tau(&self, shift: f64) -> Self {
        let mut k = self.clone();
        k.tau.center += shift;
        k
    }
}

/// Three generic kernels with windings in ±1 and τ support inside ±1.8.
pub fn default_kernels() -> Vec<BumpKernel> {
    let w = |v: [(i32, f64); 3]| v.iter().map(|&(n, weight)| WindingWeight { n, weight }).collect();
    let win = |center, width| Window { center, width };
    vec![
        BumpKernel {
            amplitude: 1.0,
            windings: w([(-1, 0.6), (0, 1.0), (1, -0.8)]),
            x_target: win(0.45, 0.35),
            x_source: win(0.55, 0.35),
            z_center: 0.5,
            z_kappa: 1.5,
            z_shift: 0.7,
            tau: win(0.2, 1.4),
            ripple: 0.3,
        },
        BumpKernel {
            amplitude: 1.0,
            windings: w([(-1, -0.5), (0, 0.7), (1, 1.1)]),
            x_target: win(0.5, 0.4),
            x_source: win(0.4, 0.35),
            z_center: 2.5,
            z_kappa: 1.0,
            z_shift: -0.4,
            tau: win(-0.3, 1.5),
            ripple: -0.2,
        },
        BumpKernel {
            amplitude: 1.0,
            windings: w([(-1, 0.9), (0, -0.6), (1, 0.5)]),
            x_target: win(0.6, 0.3),
            x_source: win(0.5, 0.4),
            z_center: 4.0,
            z_kappa: 2.0,
            z_shift: 0.3,
            tau: win(0.1, 1.3),
            ripple: 0.25,
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitSide {
    /// e * a ≈ a
    Left,
    /// a * e ≈ a
    Right,
}

/// Sampled kernel a(n, x_r, x_s, z, τ) for n in `windings`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelGrid {
    pub grid: GridSpec,
    pub window: i32,
    windings: Vec<i32>,
    data: Vec<f64>,
    nonzero: Vec<bool>,
}

impl KernelGrid {
    pub fn zeros(grid: GridSpec, window: i32, windings: Vec<i32>) -> Result<Self, GvError> {
        let mut windings = windings;
        windings.sort_unstable();
        windings.dedup();
        if let Some(n) = windings.iter().find(|n| n.abs() > window) {
            return Err(GvError::SupportOverflow(format!("winding {n} outside window ±{window}")));
        }
        let blocks = windings.len() * grid.nz * grid.t_points();
        let bs = grid.x_points() * grid.x_points();
        Ok(KernelGrid { grid, window, windings, data: vec![0.0; blocks * bs], nonzero: vec![false; blocks] })
    }

    pub fn sample(spec: &BumpKernel, grid: GridSpec, window: i32) -> Result<Self, GvError> {
        if spec.windings.is_empty() {
            return Err(GvError::Kernel("no windings".into()));
        }
        let mut k = Self::zeros(grid, window, spec.windings.iter().map(|w| w.n).collect())?;
        let np = grid.x_points();
        // separable factors; the ripple uses sin(z + d) = sin z cos d + cos z sin d
        let xr: Vec<f64> = (0..np).map(|r| bump(grid.x(r), spec.x_target.center, spec.x_target.width)).collect();
        let xs: Vec<f64> = (0..np).map(|s| bump(grid.x(s), spec.x_source.center, spec.x_source.width)).collect();
        let mut cos_d = vec![0.0; np * np];
        let mut sin_d = vec![0.0; np * np];
        for r in 0..np {
            for c in 0..np {
                let d = grid.x(r) - grid.x(c);
                cos_d[r * np + c] = d.cos();
                sin_d[r * np + c] = d.sin();
            }
        }
        for ww in &spec.windings {
            let wi = k.winding_index(ww.n).expect("winding registered");
            for iz in 0..grid.nz {
                let z = grid.z(iz);
                let zf = periodic_window(z, spec.z_center + ww.n as f64 * spec.z_shift, spec.z_kappa);
                let (sz, cz) = z.sin_cos();
                for it in 0..grid.t_points() {
                    let tf = bump(grid.tau(it), spec.tau.center, spec.tau.width);
                    let scale = spec.amplitude * ww.weight * zf * tf;
                    if scale == 0.0 {
                        continue;
                    }
                    let off = k.offset(wi, iz, it);
                    for r in 0..np {
                        for c in 0..np {
                            let i = r * np + c;
                            let ripple = 1.0 + spec.ripple * (sz * cos_d[i] + cz * sin_d[i]);
                            k.data[off + i] = scale * xr[r] * xs[c] * ripple;
                        }
                    }
                }
            }
        }
        k.refresh_support();
        k.check_support()?;
        Ok(k)
    }

    /// Approximate unit: a narrow bump in x_r − x_s at winding 0, flat in z
    /// and flat in τ over |τ| ≤ `plateau`. Simpson weights alternate, so the
    /// bump is normalized along the summed index of the chosen side.
    pub fn unit_approximation(
        grid: GridSpec,
        window: i32,
        width: f64,
        plateau: f64,
        side: UnitSide,
    ) -> Result<Self, GvError> {
        let mut k = Self::zeros(grid, window, vec![0])?;
        let np = grid.x_points();
        let xw = grid.x_weights();
        let tau_profile = |tau: f64| {
            let edge = grid.tau_max - plateau;
            if tau.abs() <= plateau {
                1.0
            } else if tau.abs() >= grid.tau_max {
                0.0
            } else {
                // smooth shoulder from 1 down to 0
                let s = (tau.abs() - plateau) / edge;
                let a = bump(s, 0.0, 1.0);
                let b = bump(s, 1.0, 1.0);
                a / (a + b)
            }
        };
        for iz in 0..grid.nz {
            for it in 0..grid.t_points() {
                let tp = tau_profile(grid.tau(it));
                let off = k.offset(0, iz, it);
                for s in 0..np {
                    // Σ_m w_m e(m, s) = 1 for a right unit, Σ_m w_m e(s, m) = 1 for a left one
                    let col: Vec<f64> = (0..np).map(|m| bump(grid.x(m), grid.x(s), width)).collect();
                    let mass: f64 = col.iter().zip(&xw).map(|(v, w)| v * w).sum();
                    for m in 0..np {
                        let v = if mass > 0.0 { tp * col[m] / mass } else { 0.0 };
                        match side {
                            UnitSide::Right => k.data[off + m * np + s] = v,
                            UnitSide::Left => k.data[off + s * np + m] = v,
                        }
                    }
                }
            }
        }
        k.refresh_support();
        Ok(k)
    }

    pub fn windings(&self) -> &[i32] {
        &self.windings
    }

    pub fn winding_index(&self, n: i32) -> Option<usize> {
        self.windings.binary_search(&n).ok()
    }

    fn offset(&self, wi: usize, iz: usize, it: usize) -> usize {
        let np = self.grid.x_points();
        ((wi * self.grid.nz + iz) * self.grid.t_points() + it) * np * np
    }

    pub fn block(&self, wi: usize, iz: usize, it: usize) -> &[f64] {
        let np = self.grid.x_points();
        let off = self.offset(wi, iz, it);
        &self.data[off..off + np * np]
    }

    fn block_nonzero(&self, wi: usize, iz: usize, it: usize) -> bool {
        self.nonzero[(wi * self.grid.nz + iz) * self.grid.t_points() + it]
    }

    /// Sample at winding n, indices (x_r, x_s, z, τ).
    pub fn at(&self, n: i32, r: usize, s: usize, iz: usize, it: usize) -> f64 {
        match self.winding_index(n) {
            Some(wi) => self.block(wi, iz, it)[r * self.grid.x_points() + s],
            None => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn refresh_support(&mut self) {
        let bs = self.grid.x_points() * self.grid.x_points();
        self.nonzero = self.data.chunks(bs).map(|b| b.iter().any(|v| *v != 0.0)).collect();
    }

    /// Values at the τ boundary must vanish.
    pub fn check_support(&self) -> Result<(), GvError> {
        let nt = self.grid.nt;
        for wi in 0..self.windings.len() {
            for iz in 0..self.grid.nz {
                for it in [0, nt] {
                    if self.block_nonzero(wi, iz, it) {
                        return Err(GvError::SupportOverflow(format!(
                            "winding {} reaches the τ boundary",
                            self.windings[wi]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest pointwise difference after matching windings.
    pub fn max_difference(&self, other: &KernelGrid) -> Result<f64, GvError> {
        if self.grid != other.grid {
            return Err(GvError::GridMismatch);
        }
        let np = self.grid.x_points();
        let mut all: Vec<i32> = self.windings.iter().chain(&other.windings).copied().collect();
        all.sort_unstable();
        all.dedup();
        let mut m: f64 = 0.0;
        for n in all {
            for iz in 0..self.grid.nz {
                for it in 0..self.grid.t_points() {
                    for r in 0..np {
                        for s in 0..np {
                            m = m.max((self.at(n, r, s, iz, it) - other.at(n, r, s, iz, it)).abs());
                        }
                    }
                }
            }
        }
        Ok(m)
    }
}

const STENCIL: usize = 4;

/// Cubic Lagrange weights at fractional offset s ∈ [0,1) for nodes −1, 0, 1, 2.
fn lagrange4(s: f64) -> [f64; STENCIL] {
    [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ]
}

/// Holonomy data of one winding at one z node, plus interpolation stencils
/// for the target point and the frame shift.
#[derive(Clone, Debug)]
struct Cell {
    delta: f64,
    log_delta_prime: f64,
    z_nodes: [usize; STENCIL],
    z_weights: [f64; STENCIL],
    /// τ_k + log Δ sits at fractional index k + t_offset + t_frac
    t_offset: isize,
    t_weights: [f64; STENCIL],
}

/// Holonomy of every winding in ±`reach` at every z node.
#[derive(Clone, Debug)]
pub struct Geometry {
    grid: GridSpec,
    reach: i32,
    cells: Vec<Cell>,
}

impl Geometry {
    pub fn new(model: &SuspensionModel, grid: GridSpec, reach: i32) -> Result<Self, GvError> {
        let mut cells = Vec::with_capacity((2 * reach as usize + 1) * grid.nz);
        for n in -reach..=reach {
            for iz in 0..grid.nz {
                let g = Germ::new(n, grid.z(iz));
                let d = model.germ_data(g)?;
                let log_delta_prime = model.log_modular_derivative(g)?;

                let p = wrap(d.target) / grid.hz();
                let base = p.floor();
                let zw = lagrange4(p - base);
                let b = base as isize;
                let nz = grid.nz as isize;
                let z_nodes = [-1isize, 0, 1, 2].map(|o| (b + o).rem_euclid(nz) as usize);

                let u = d.modular.ln() / grid.ht();
                let ub = u.floor();
                cells.push(Cell {
                    delta: d.delta,
                    log_delta_prime,
                    z_nodes,
                    z_weights: zw,
                    t_offset: ub as isize,
                    t_weights: lagrange4(u - ub),
                });
            }
        }
        Ok(Geometry { grid, reach, cells })
    }

    fn cell(&self, n: i32, iz: usize) -> &Cell {
        assert!(n.abs() <= self.reach, "winding {n} beyond geometry reach {}", self.reach);
        &self.cells[(n + self.reach) as usize * self.grid.nz + iz]
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }
}

/// Interpolate winding-`wi` samples of `a` at the arrow reached from z node
/// `iz` by `cell`, frame index `it`, into `out` (x_r × x_s). Returns false
/// if every contributing block is zero.
fn interpolate_block(a: &KernelGrid, wi: usize, cell: &Cell, it: usize, out: &mut [f64]) -> bool {
    out.iter_mut().for_each(|v| *v = 0.0);
    let nt = a.grid.t_points() as isize;
    let mut any = false;
    for (zi, &iz) in cell.z_nodes.iter().enumerate() {
        for ti in 0..STENCIL {
            let k = it as isize + cell.t_offset + ti as isize - 1;
            if k < 0 || k >= nt {
                continue;
            }
            if !a.block_nonzero(wi, iz, k as usize) {
                continue;
            }
            let w = cell.z_weights[zi] * cell.t_weights[ti];
            for (o, v) in out.iter_mut().zip(a.block(wi, iz, k as usize)) {
                *o += w * v;
            }
            any = true;
        }
    }
    any
}

#[cfg(feature = "parallel")]
fn map_cells<T: Send>(n: usize, serial: bool, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    if serial {
        (0..n).map(f).collect()
    } else {
        (0..n).into_par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn map_cells<T: Send>(n: usize, _serial: bool, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Numerics switches shared by the pairing and the convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ExecMode {
    /// Evaluate cells in order on the calling thread.
    pub serial: bool,
}

/// (a*b)(n, x_r, x_s, z, τ) = Σ_{n₂} Σ_{x_m} w(x_m) a(n−n₂, x_r, x_m, f^{n₂}z, τ + log Δ_{n₂}(z)) b(n₂, x_m, x_s, z, τ).
pub fn convolve(geo: &Geometry, a: &KernelGrid, b: &KernelGrid, mode: ExecMode) -> Result<KernelGrid, GvError> {
    let grid = geo.grid;
    if a.grid != grid || b.grid != grid {
        return Err(GvError::GridMismatch);
    }
    let window = a.window.min(b.window);
    let mut result_windings = Vec::new();
    for &n1 in &a.windings {
        for &n2 in &b.windings {
            let n = n1 + n2;
            if n.abs() > window {
                return Err(GvError::SupportOverflow(format!(
                    "winding {n1} + {n2} leaves the window ±{window}"
                )));
            }
            result_windings.push(n);
        }
    }
    let mut out = KernelGrid::zeros(grid, window, result_windings)?;
    let np = grid.x_points();
    let ntp = grid.t_points();
    let xw = grid.x_weights();
    let nw = out.windings.len();

    // one task per (result winding, z node): all τ blocks of that cell
    let blocks = map_cells(nw * grid.nz, mode.serial, |cell_id| {
        let (wo, iz) = (cell_id / grid.nz, cell_id % grid.nz);
        let n = out.windings[wo];
        let mut chunk = vec![0.0; ntp * np * np];
        let mut at = vec![0.0; np * np];
        for (bi, &n2) in b.windings.iter().enumerate() {
            let Some(ai) = a.winding_index(n - n2) else { continue };
            let cell = geo.cell(n2, iz);
            for it in 0..ntp {
                if !b.block_nonzero(bi, iz, it) {
                    continue;
                }
                if !interpolate_block(a, ai, cell, it, &mut at) {
                    continue;
                }
                let bb = b.block(bi, iz, it);
                let c = &mut chunk[it * np * np..(it + 1) * np * np];
                for r in 0..np {
                    let crow = &mut c[r * np..(r + 1) * np];
                    for m in 0..np {
                        let coef = at[r * np + m] * xw[m];
                        if coef == 0.0 {
                            continue;
                        }
                        let brow = &bb[m * np..(m + 1) * np];
                        for (cv, bv) in crow.iter_mut().zip(brow) {
                            *cv += coef * bv;
                        }
                    }
                }
            }
        }
        chunk
    });

    for (cell_id, chunk) in blocks.into_iter().enumerate() {
        let (wo, iz) = (cell_id / grid.nz, cell_id % grid.nz);
        let off = out.offset(wo, iz, 0);
        out.data[off..off + chunk.len()].copy_from_slice(&chunk);
    }
    out.refresh_support();
    out.check_support()?;
    Ok(out)
}

/// Which transverse derivative of the modular function weights the pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeltaSource {
    /// δ from the chain-rule sum.
    Analytic,
    /// ∂_z log Δ by forward-mode differentiation of Δ.
    LogModular,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingReport {
    pub value: f64,
    pub grid: GridSpec,
    /// Filled in by refinement studies.
    pub order: Option<f64>,
    pub verdicts: Vec<(String, bool)>,
}

/// φ(a⁰, a¹) = −Σ_w a⁰(w⁻¹) a¹(w) δ(w) over arrows w on the grid of a¹,
/// with measure dx_r dx_s dz dτ.
pub fn pairing(
    geo: &Geometry,
    a0: &KernelGrid,
    a1: &KernelGrid,
    source: DeltaSource,
    mode: ExecMode,
) -> Result<f64, GvError> {
    let grid = geo.grid;
    if a0.grid != grid || a1.grid != grid {
        return Err(GvError::GridMismatch);
    }
    let np = grid.x_points();
    let ntp = grid.t_points();
    let xw = grid.x_weights();
    let tw = grid.t_weights();
    let hz = grid.hz();
    let nw = a1.windings.len();

    let partial = map_cells(nw * grid.nz, mode.serial, |cell_id| {
        let (wi, iz) = (cell_id / grid.nz, cell_id % grid.nz);
        let n = a1.windings[wi];
        let Some(ai) = a0.winding_index(-n) else { return 0.0 };
        let cell = geo.cell(n, iz);
        let weight = match source {
            DeltaSource::Analytic => cell.delta,
            DeltaSource::LogModular => cell.log_delta_prime,
        };
        if weight == 0.0 {
            return 0.0;
        }
        let mut at = vec![0.0; np * np];
        let mut sum = 0.0;
        for it in 0..ntp {
            if !a1.block_nonzero(wi, iz, it) {
                continue;
            }
            if !interpolate_block(a0, ai, cell, it, &mut at) {
                continue;
            }
            let b1 = a1.block(wi, iz, it);
            let mut s = 0.0;
            for r in 0..np {
                for c in 0..np {
                    // a⁰ at the inverse arrow has its leaf coordinates swapped
                    s += xw[r] * xw[c] * at[c * np + r] * b1[r * np + c];
                }
            }
            sum += tw[it] * s;
        }
        sum * weight * hz
    });
    Ok(-partial.into_iter().sum::<f64>())
}

pub fn phi_gv(geo: &Geometry, a0: &KernelGrid, a1: &KernelGrid, mode: ExecMode) -> Result<PairingReport, GvError> {
    let value = pairing(geo, a0, a1, DeltaSource::Analytic, mode)?;
    Ok(PairingReport { value, grid: geo.grid, order: None, verdicts: vec![] })
}

pub fn phi_gv_log_delta(
    geo: &Geometry,
    a0: &KernelGrid,
    a1: &KernelGrid,
    mode: ExecMode,
) -> Result<PairingReport, GvError> {
    let value = pairing(geo, a0, a1, DeltaSource::LogModular, mode)?;
    Ok(PairingReport { value, grid: geo.grid, order: None, verdicts: vec![] })
}

/// bφ(a⁰,a¹,a²) = φ(a⁰*a¹, a²) − φ(a⁰, a¹*a²) + φ(a²*a⁰, a¹).
pub fn hochschild_b(
    geo: &Geometry,
    a0: &KernelGrid,
    a1: &KernelGrid,
    a2: &KernelGrid,
    mode: ExecMode,
) -> Result<PairingReport, GvError> {
    let a01 = convolve(geo, a0, a1, mode)?;
    let t1 = pairing(geo, &a01, a2, DeltaSource::Analytic, mode)?;
    drop(a01);
    let a12 = convolve(geo, a1, a2, mode)?;
    let t2 = pairing(geo, a0, &a12, DeltaSource::Analytic, mode)?;
    drop(a12);
    let a20 = convolve(geo, a2, a0, mode)?;
    let t3 = pairing(geo, &a20, a1, DeltaSource::Analytic, mode)?;
    Ok(PairingReport { value: t1 - t2 + t3, grid: geo.grid, order: None, verdicts: vec![] })
}

/// Observed order from two successive halvings of a quantity that should
/// vanish in the limit. `None` when the finer value is already at round-off.
pub fn observed_order(mid: f64, fine: f64, floor: f64) -> Option<f64> {
    if fine.abs() <= floor {
        None
    } else {
        Some((mid.abs() / fine.abs()).log2())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folmodel::{CircleDiffeo, FourierTerm, SeamProfile};

    fn model(a: f64) -> SuspensionModel {
        let f = CircleDiffeo::new(vec![FourierTerm { n: 1, a, b: 0.0 }]).unwrap();
        SuspensionModel::new(f, SeamProfile::new(2).unwrap(), 200).unwrap()
    }

    fn setup(nx: usize, nz: usize, nt: usize) -> (Geometry, Vec<KernelGrid>) {
        let g = GridSpec::new(nx, nz, nt, 3.0).unwrap();
        let geo = Geometry::new(&model(0.3), g, 2).unwrap();
        let ks = default_kernels().iter().map(|k| KernelGrid::sample(k, g, 2).unwrap()).collect();
        (geo, ks)
    }

    const SERIAL: ExecMode = ExecMode { serial: true };

    #[test]
    fn grid_rejects_odd_counts() {
        assert!(GridSpec::new(15, 16, 8, 3.0).is_err());
        assert!(GridSpec::new(16, 16, 7, 3.0).is_err());
        assert!(GridSpec::new(16, 2, 8, 3.0).is_err());
        assert_eq!(GridSpec::new(64, 64, 32, 3.0).unwrap().coarsened(2).unwrap().nt, 8);
    }

    #[test]
    fn sampling_matches_closed_form() {
        let g = GridSpec::new(16, 16, 8, 3.0).unwrap();
        for k in default_kernels() {
            let kg = KernelGrid::sample(&k, g, 2).unwrap();
            let mut m: f64 = 0.0;
            for ww in &k.windings {
                for iz in 0..g.nz {
                    for it in 0..g.t_points() {
                        for r in 0..g.x_points() {
                            for s in 0..g.x_points() {
                                let v = k.value(ww.weight, ww.n, g.x(r), g.x(s), g.z(iz), g.tau(it));
                                m = m.max((v - kg.at(ww.n, r, s, iz, it)).abs());
                            }
                        }
                    }
                }
            }
            assert!(m < 1e-14, "{m}");
        }
    }

    #[test]
    fn kernel_touching_tau_boundary_is_rejected() {
        let mut k = default_kernels().remove(0);
        k.tau = Window { center: 2.5, width: 1.4 };
        let g = GridSpec::new(16, 16, 8, 3.0).unwrap();
        assert!(matches!(KernelGrid::sample(&k, g, 2), Err(GvError::SupportOverflow(_))));
    }

    #[test]
    fn windings_add_under_convolution() {
        let g = GridSpec::new(8, 8, 4, 3.0).unwrap();
        let geo = Geometry::new(&model(0.3), g, 2).unwrap();
        let mut k = default_kernels().remove(0);
        k.tau = Window { center: 0.0, width: 1.0 };
        k.windings = vec![WindingWeight { n: 0, weight: 1.0 }, WindingWeight { n: 1, weight: 0.5 }];
        let a = KernelGrid::sample(&k, g, 2).unwrap();
        let c = convolve(&geo, &a, &a, SERIAL).unwrap();
        assert_eq!(c.windings(), &[0, 1, 2]);
        let narrow = KernelGrid::sample(&k, g, 1).unwrap();
        assert!(matches!(convolve(&geo, &narrow, &narrow, SERIAL), Err(GvError::SupportOverflow(_))));
    }

    /// Refines x only; the τ grid is wide enough that every interpolation
    /// stencil stays on the plateau of the unit.
    fn unit_error(n: usize) -> f64 {
        let g = GridSpec::new(n, 8, 16, 5.0).unwrap();
        let geo = Geometry::new(&model(0.3), g, 2).unwrap();
        let mut k = default_kernels().remove(0);
        k.windings.retain(|w| w.n == 0);
        k.x_target = Window { center: 0.5, width: 0.5 };
        k.x_source = Window { center: 0.5, width: 0.5 };
        let a = KernelGrid::sample(&k, g, 2).unwrap();
        let el = KernelGrid::unit_approximation(g, 2, 2.0 * g.hx(), 3.5, UnitSide::Left).unwrap();
        let er = KernelGrid::unit_approximation(g, 2, 2.0 * g.hx(), 3.5, UnitSide::Right).unwrap();
        let ea = convolve(&geo, &el, &a, SERIAL).unwrap();
        let ae = convolve(&geo, &a, &er, SERIAL).unwrap();
        ea.max_difference(&a).unwrap().max(ae.max_difference(&a).unwrap()) / a.max_abs()
    }

    #[test]
    fn unit_approximation_converges_quadratically() {
        let (e1, e2, e3) = (unit_error(32), unit_error(64), unit_error(128));
        assert!(e3 < e2 && e2 < e1, "{e1} {e2} {e3}");
        let order = (e2 / e3).log2();
        assert!(order > 1.8, "order {order}: {e1} {e2} {e3}");
    }

    #[test]
    fn convolution_is_associative_on_winding_zero() {
        // winding 0 moves neither z nor τ, so no interpolation is involved
        let g = GridSpec::new(16, 8, 8, 3.0).unwrap();
        let geo = Geometry::new(&model(0.3), g, 3).unwrap();
        let mut ks: Vec<BumpKernel> = default_kernels();
        for k in &mut ks {
            k.windings.retain(|w| w.n == 0); k.x_target = Window{center:0.5,width:0.5}; k.x_source = Window{center:0.5,width:0.5};
        }
        let s: Vec<KernelGrid> = ks.iter().map(|k| KernelGrid::sample(k, g, 3).unwrap()).collect();
        let left = convolve(&geo, &convolve(&geo, &s[0], &s[1], SERIAL).unwrap(), &s[2], SERIAL).unwrap();
        let right = convolve(&geo, &s[0], &convolve(&geo, &s[1], &s[2], SERIAL).unwrap(), SERIAL).unwrap();
        assert!(left.max_difference(&right).unwrap() <= 1e-13 * left.max_abs());
    }

    #[test]
    fn convolution_is_nearly_associative() {
        let g = GridSpec::new(16, 32, 16, 3.0).unwrap();
        let geo = Geometry::new(&model(0.3), g, 3).unwrap();
        let s: Vec<KernelGrid> = default_kernels().iter().map(|k| KernelGrid::sample(k, g, 3).unwrap()).collect();
        let left = convolve(&geo, &convolve(&geo, &s[0], &s[1], SERIAL).unwrap(), &s[2], SERIAL).unwrap();
        let right = convolve(&geo, &s[0], &convolve(&geo, &s[1], &s[2], SERIAL).unwrap(), SERIAL).unwrap();
        let rel = left.max_difference(&right).unwrap() / left.max_abs();
        assert!(rel < 5e-2, "{rel}");
    }

    #[test]
    fn log_delta_weight_agrees() {
        let (geo, ks) = setup(16, 16, 8);
        let a = phi_gv(&geo, &ks[0], &ks[1], SERIAL).unwrap().value;
        let b = phi_gv_log_delta(&geo, &ks[0], &ks[1], SERIAL).unwrap().value;
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} {b}");
        assert!(a.abs() > 1e-4);
    }

    #[test]
    fn rotation_pairs_to_zero() {
        let g = GridSpec::new(16, 16, 8, 3.0).unwrap();
        let rot = SuspensionModel::new(CircleDiffeo::rotation(0.5), SeamProfile::new(2).unwrap(), 200).unwrap();
        let geo = Geometry::new(&rot, g, 2).unwrap();
        let ks: Vec<KernelGrid> = default_kernels().iter().map(|k| KernelGrid::sample(k, g, 2).unwrap()).collect();
        assert_eq!(phi_gv(&geo, &ks[0], &ks[1], SERIAL).unwrap().value, 0.0);
    }

    #[test]
    fn tau_shift_by_two_cells_is_exact() {
        let (geo, _) = setup(16, 16, 8);
        let g = geo.grid();
        let shift = 2.0 * g.ht();
        let ks = default_kernels();
        let k0 = KernelGrid::sample(&ks[0].shifted_tau(-0.5), g, 2).unwrap();
        let k1 = KernelGrid::sample(&ks[1].shifted_tau(-0.5), g, 2).unwrap();
        let s0 = KernelGrid::sample(&ks[0].shifted_tau(-0.5 + shift), g, 2).unwrap();
        let s1 = KernelGrid::sample(&ks[1].shifted_tau(-0.5 + shift), g, 2).unwrap();
        let a = phi_gv(&geo, &k0, &k1, SERIAL).unwrap().value;
        let b = phi_gv(&geo, &s0, &s1, SERIAL).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a.abs(), "{a} {b}");
    }

    /// φ(k0, k1) with a⁰ evaluated at the inverse arrow in closed form.
    fn direct_pairing(n: usize) -> (f64, f64) {
        let f = model(0.3);
        let (geo, ks) = setup(n, n, n / 2);
        let g = geo.grid();
        let specs = default_kernels();
        let (k0, k1) = (&specs[0], &specs[1]);
        let xw = g.x_weights();
        let tw = g.t_weights();
        let mut direct = 0.0;
        for w1 in &k1.windings {
            let Some(w0) = k0.windings.iter().find(|w| w.n == -w1.n) else { continue };
            for iz in 0..g.nz {
                let d = f.germ_data(Germ::new(w1.n, g.z(iz))).unwrap();
                let ld = d.modular.ln();
                for it in 0..g.t_points() {
                    for r in 0..g.x_points() {
                        for s in 0..g.x_points() {
                            let a1 = k1.value(w1.weight, w1.n, g.x(r), g.x(s), g.z(iz), g.tau(it));
                            let a0 = k0.value(w0.weight, w0.n, g.x(s), g.x(r), d.target, g.tau(it) + ld);
                            direct += xw[r] * xw[s] * tw[it] * g.hz() * a0 * a1 * d.delta;
                        }
                    }
                }
            }
        }
        (phi_gv(&geo, &ks[0], &ks[1], SERIAL).unwrap().value, -direct)
    }

    #[test]
    fn interpolation_error_in_pairing_shrinks() {
        let (g1, d1) = direct_pairing(16);
        let (g2, d2) = direct_pairing(32);
        let (e1, e2) = ((g1 - d1).abs(), (g2 - d2).abs());
        assert!(e2 <= 5e-3 * d2.abs(), "{g2} {d2}");
        assert!(e1 / e2 > 4.0, "{e1} {e2}");
    }

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let (geo, ks) = setup(16, 16, 8);
        let par = ExecMode { serial: false };
        let a = hochschild_b(&geo, &ks[0], &ks[1], &ks[2], SERIAL).unwrap().value;
        let b = hochschild_b(&geo, &ks[0], &ks[1], &ks[2], par).unwrap().value;
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn order_estimate_handles_roundoff() {
        assert_eq!(observed_order(1e-3, 1e-18, 1e-15), None);
        assert!((observed_order(4e-4, 1e-4, 1e-15).unwrap() - 2.0).abs() < 1e-12);
    }
}
