//! Position-space wavefunctions and probability-density grids.
//!
//! The a-mode is an oscillator of frequency 2 and the b-mode of frequency 1,
//! so `<x, y | n, m> = psi_n^{(2)}(x) psi_m^{(1)}(y)`.
//!
//! Binary grid layout (little endian): 8-byte magic `ALGRID01`, `nx: u32`,
//! `ny: u32`, then `x_min, x_max, y_min, y_max` as `f32` (32 bytes of header
//! in total), followed by `nx * ny` `f64` values with `x` varying fastest.

use std::f64::consts::PI;
use std::io::{self, Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{inner, number_apply, FockVector, Mode};

pub const OMEGA_A: f64 = 2.0;
pub const OMEGA_B: f64 = 1.0;
/// Largest quantum number accepted by [`density_grid`].
pub const MAX_QUANTUM: usize = 500;
pub const GRID_MAGIC: &[u8; 8] = b"ALGRID01";

const RESCALE: f64 = 1e200;

/// `psi_0 .. psi_{n_max}` of an oscillator with frequency `omega` at `x`.
///
/// Uses the upward recurrence of the normalised Hermite functions,
/// `psi_{n+1} = sqrt(2/(n+1)) xi psi_n - sqrt(n/(n+1)) psi_{n-1}`, `xi = sqrt(omega) x`,
/// carrying the Gaussian factor as a separate exponent so that it cannot
/// underflow before the polynomial growth catches up.
pub fn hermite_functions(n_max: usize, omega: f64, x: f64) -> Vec<f64> {
    let xi = omega.sqrt() * x;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut ln_scale = -0.5 * xi * xi;
    let mut prev = 0.0;
    let mut cur = (omega / PI).powf(0.25);
    out.push(cur * ln_scale.exp());
    for n in 0..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        out.push(cur * ln_scale.exp());
    }
    out
}

/// `psi_n^{(omega)}(x) = (omega/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(omega) x) e^{-omega x^2/2}`.
pub fn ho_eigenfunction(n: usize, omega: f64, x: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain("oscillator frequency must be positive"));
    }
    Ok(hermite_functions(n, omega, x)[n])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridGeometry {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        let g = GridGeometry {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    /// `x in [-8, 8]`, `y in [-16, 16]` at 600 x 600 points.
    pub fn lissajous_default() -> Self {
        GridGeometry {
            x_min: -8.0,
            x_max: 8.0,
            y_min: -16.0,
            y_max: 16.0,
            nx: 600,
            ny: 600,
        }
    }

    /// Symmetric window covering the classical turning points of the given
    /// maximal quanta plus a tail margin of `6/sqrt(omega)` per axis.
    pub fn covering(n_max: usize, m_max: usize, nx: usize, ny: usize) -> Result<Self> {
        let half = |q: usize, w: f64| (2.0 * q as f64 / w).sqrt() + 6.0 / w.sqrt();
        let hx = half(n_max, OMEGA_A);
        let hy = half(m_max, OMEGA_B);
        Self::new(-hx, hx, -hy, hy, nx, ny)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::domain("grid needs at least 2 points per axis"));
        }
        if !(self.x_max > self.x_min) || !(self.y_max > self.y_min) {
            return Err(Error::domain("grid bounds must satisfy max > min"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.x_min + ix as f64 * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y_min + iy as f64 * self.dy()
    }

    /// Trapezoid weight of a grid point.
    pub fn weight(&self, ix: usize, iy: usize) -> f64 {
        let edge = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        edge(ix, self.nx) * edge(iy, self.ny) * self.dx() * self.dy()
    }
}

/// Values sampled on a grid, stored with `x` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D<T = f64> {
    pub geometry: GridGeometry,
    pub values: Vec<T>,
}

impl<T: Copy> Grid2D<T> {
    pub fn at(&self, ix: usize, iy: usize) -> T {
        self.values[iy * self.geometry.nx + ix]
    }
}

impl Grid2D<f64> {
    /// Trapezoid integral over the grid.
    pub fn integrate(&self) -> f64 {
        let g = &self.geometry;
        let mut total = 0.0;
        for iy in 0..g.ny {
            for ix in 0..g.nx {
                total += g.weight(ix, iy) * self.at(ix, iy);
            }
        }
        total
    }
}

/// `<x, y | v>` on the grid.
pub fn amplitude_grid(v: &FockVector, geometry: &GridGeometry) -> Result<Grid2D<Complex64>> {
    geometry.validate()?;
    let (n_max, m_max) = v.max_quanta();
    let worst = n_max.max(m_max);
    if worst > MAX_QUANTUM {
        return Err(Error::OutOfRange {
            found: worst,
            bound: MAX_QUANTUM,
        });
    }
    let g = *geometry;
    let x_table: Vec<Vec<f64>> = (0..g.nx)
        .map(|ix| hermite_functions(n_max, OMEGA_A, g.x(ix)))
        .collect();
    let y_table: Vec<Vec<f64>> = (0..g.ny)
        .map(|iy| hermite_functions(m_max, OMEGA_B, g.y(iy)))
        .collect();

    // group amplitudes by a-mode quantum number
    let mut by_n: Vec<(usize, Vec<(usize, Complex64)>)> = Vec::new();
    for (idx, c) in v.iter() {
        match by_n.last_mut() {
            Some((n, list)) if *n == idx.n => list.push((idx.m, c)),
            _ => by_n.push((idx.n, vec![(idx.m, c)])),
        }
    }

    let rows: Vec<Vec<Complex64>> = (0..g.ny)
        .into_par_iter()
        .map(|iy| {
            let ys = &y_table[iy];
            let partial: Vec<(usize, Complex64)> = by_n
                .iter()
                .map(|(n, list)| (*n, list.iter().map(|(m, c)| c * ys[*m]).sum()))
                .collect();
            (0..g.nx)
                .map(|ix| {
                    let xs = &x_table[ix];
                    partial.iter().map(|(n, s)| s * xs[*n]).sum()
                })
                .collect()
        })
        .collect();

    Ok(Grid2D {
        geometry: g,
        values: rows.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub grid: Grid2D<f64>,
    /// Trapezoid-integrated probability.
    pub total_mass: f64,
}

/// `|<x, y | v>|^2` on the grid.
pub fn density_grid(v: &FockVector, geometry: &GridGeometry) -> Result<DensityGrid> {
    let amp = amplitude_grid(v, geometry)?;
    let grid = Grid2D {
        geometry: amp.geometry,
        values: amp.values.iter().map(|z| z.norm_sqr()).collect(),
    };
    let total_mass = grid.integrate();
    Ok(DensityGrid { grid, total_mass })
}

/// `x(t) = amp_x cos(2t + phase)`, `y(t) = amp_y cos(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LissajousCurve {
    pub amp_x: f64,
    pub amp_y: f64,
    pub phase: f64,
}

impl LissajousCurve {
    /// Classical amplitudes matching the mean occupations of `v`:
    /// `amp_x = sqrt(<n_a> + 1/2)`, `amp_y = sqrt(2 <n_b> + 1)`.
    pub fn for_state(v: &FockVector, phase: f64) -> Self {
        let norm = v.norm_sq();
        let n_a = inner(v, &number_apply(Mode::A, v)).re / norm;
        let n_b = inner(v, &number_apply(Mode::B, v)).re / norm;
        LissajousCurve {
            amp_x: (n_a + 0.5).sqrt(),
            amp_y: (2.0 * n_b + 1.0).sqrt(),
            phase,
        }
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        (
            self.amp_x * (2.0 * t + self.phase).cos(),
            self.amp_y * t.cos(),
        )
    }
}

/// Fraction of the grid's mass within `radius` of the curve.
pub fn tube_mass_fraction(density: &Grid2D<f64>, curve: &LissajousCurve, radius: f64) -> f64 {
    let g = &density.geometry;
    let (dx, dy) = (g.dx(), g.dy());
    let mut inside = vec![false; g.nx * g.ny];
    let length_bound = 2.0 * PI * (4.0 * curve.amp_x.powi(2) + curve.amp_y.powi(2)).sqrt();
    let samples = ((length_bound / (radius / 16.0)).ceil() as usize).max(64);
    let r2 = radius * radius;
    let clamp = |v: f64, n: usize| v.max(0.0).min((n - 1) as f64) as usize;
    for s in 0..samples {
        let (px, py) = curve.point(2.0 * PI * s as f64 / samples as f64);
        let ix0 = clamp(((px - radius - g.x_min) / dx).floor(), g.nx);
        let ix1 = clamp(((px + radius - g.x_min) / dx).ceil(), g.nx);
        let iy0 = clamp(((py - radius - g.y_min) / dy).floor(), g.ny);
        let iy1 = clamp(((py + radius - g.y_min) / dy).ceil(), g.ny);
        for iy in iy0..=iy1 {
            let ddy = g.y(iy) - py;
            for ix in ix0..=ix1 {
                let ddx = g.x(ix) - px;
                if ddx * ddx + ddy * ddy <= r2 {
                    inside[iy * g.nx + ix] = true;
                }
            }
        }
    }
    let mut in_mass = 0.0;
    let mut total = 0.0;
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let w = g.weight(ix, iy) * density.at(ix, iy);
            total += w;
            if inside[iy * g.nx + ix] {
                in_mass += w;
            }
        }
    }
    if total > 0.0 {
        in_mass / total
    } else {
        0.0
    }
}

/// Chooses the relative phase of the curve maximising the tube mass: a
/// uniform scan of `[0, pi]` (the curve for `-phase` is the mirror image in
/// time of the curve for `phase`) followed by a local refinement.
pub fn fit_lissajous_phase(
    density: &Grid2D<f64>,
    amp_x: f64,
    amp_y: f64,
    radius: f64,
) -> (LissajousCurve, f64) {
    let eval = |phase: f64| {
        let c = LissajousCurve {
            amp_x,
            amp_y,
            phase,
        };
        (c, tube_mass_fraction(density, &c, radius))
    };
    let coarse = 48;
    let step = PI / coarse as f64;
    let mut best = eval(0.0);
    for i in 1..=coarse {
        let cand = eval(i as f64 * step);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    let center = best.0.phase;
    for i in -8i32..=8 {
        let cand = eval(center + i as f64 * step / 8.0);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    best
}

/// `sum |a/|a| - b/|b||` integrated over the grid, each density normalised
/// to unit mass first. Both grids must share a geometry.
pub fn normalized_l1_distance(a: &Grid2D<f64>, b: &Grid2D<f64>) -> Result<f64> {
    if a.geometry != b.geometry {
        return Err(Error::domain("densities are sampled on different grids"));
    }
    let (ma, mb) = (a.integrate(), b.integrate());
    if !(ma > 0.0 && mb > 0.0) {
        return Err(Error::domain("densities must carry positive mass"));
    }
    let g = &a.geometry;
    let mut total = 0.0;
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            total += g.weight(ix, iy) * (a.at(ix, iy) / ma - b.at(ix, iy) / mb).abs();
        }
    }
    Ok(total)
}

pub fn write_grid_csv<W: Write + ?Sized>(grid: &Grid2D<f64>, out: &mut W) -> io::Result<()> {
    let g = &grid.geometry;
    writeln!(out, "x,y,density")?;
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            writeln!(out, "{},{},{}", g.x(ix), g.y(iy), grid.at(ix, iy))?;
        }
    }
    Ok(())
}

pub fn write_grid_binary<W: Write + ?Sized>(grid: &Grid2D<f64>, out: &mut W) -> io::Result<()> {
    let g = &grid.geometry;
    let dim = |n: usize| {
        u32::try_from(n).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "grid too large"))
    };
    out.write_all(GRID_MAGIC)?;
    out.write_all(&dim(g.nx)?.to_le_bytes())?;
    out.write_all(&dim(g.ny)?.to_le_bytes())?;
    for b in [g.x_min, g.x_max, g.y_min, g.y_max] {
        out.write_all(&(b as f32).to_le_bytes())?;
    }
    for v in &grid.values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads the binary layout written by [`write_grid_binary`]. Bounds come back
/// at `f32` precision.
pub fn read_grid_binary(input: &mut impl Read) -> io::Result<Grid2D<f64>> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut header = [0u8; 32];
    input.read_exact(&mut header)?;
    if &header[..8] != GRID_MAGIC {
        return Err(bad("missing ALGRID01 magic"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap()) as usize;
    let f32_at = |o: usize| f32::from_le_bytes(header[o..o + 4].try_into().unwrap()) as f64;
    let (nx, ny) = (u32_at(8), u32_at(12));
    let geometry = GridGeometry::new(f32_at(16), f32_at(20), f32_at(24), f32_at(28), nx, ny)
        .map_err(|e| bad(&e.to_string()))?;
    let mut values = Vec::with_capacity(nx * ny);
    let mut buf = [0u8; 8];
    for _ in 0..nx * ny {
        input.read_exact(&mut buf)?;
        values.push(f64::from_le_bytes(buf));
    }
    Ok(Grid2D { geometry, values })
}
