//! Centered, unitary two-dimensional DFT on square power-of-two grids.
//!
//! Pixel `(i, j)` sits at `((i - n/2) dx, (j - n/2) dx)` and spectral bin
//! `(p, q)` at `((p - n/2), (q - n/2)) * 2 pi / (n dx)`. Arrays are row-major
//! with the first index along x.

use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `exp(-i k . x)`.
    Forward,
    /// Kernel `exp(+i k . x)`.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub n: usize,
    pub dx: f64,
}

impl Grid2D {
    /// `n` must be a power of two no smaller than 16 and `dx` positive.
    pub fn new(n: usize, dx: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Shape(format!(
                "grid size must be a power of two >= 16, got {n}"
            )));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::Domain(format!(
                "grid pitch must be positive, got {dx}"
            )));
        }
        Ok(Self { n, dx })
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Coordinate of index `i` along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.dx
    }

    #[inline]
    pub fn point(&self, idx: usize) -> [f64; 2] {
        [self.coord(idx / self.n), self.coord(idx % self.n)]
    }

    /// Spectral pitch `2 pi / (n dx)`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dx)
    }

    pub fn extent(&self) -> f64 {
        self.n as f64 * self.dx
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }
}

/// Centered angular frequencies for a length-`n` axis with pitch `dx`.
pub fn fftfreq(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dx);
    (0..n).map(|i| (i as f64 - (n / 2) as f64) * dk).collect()
}

/// Reusable plan for repeated transforms of one size.
pub struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("n", &self.n).finish()
    }
}

impl Fft2 {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Shape(format!(
                "FFT size must be a power of two, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// In-place centered unitary transform of an `n x n` array.
    pub fn process(&self, data: &mut [Complex64], dir: Direction) -> Result<()> {
        let n = self.n;
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                n * n,
                data.len()
            )));
        }
        let plan = match dir {
            Direction::Forward => &self.fwd,
            Direction::Inverse => &self.inv,
        };
        // For even n the centering shift is a rotation by n/2 on each axis,
        // which is its own inverse.
        shift2(data, n);
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        for row in data.chunks_exact_mut(n) {
            plan.process_with_scratch(row, &mut scratch);
        }
        transpose(data, n);
        for row in data.chunks_exact_mut(n) {
            plan.process_with_scratch(row, &mut scratch);
        }
        transpose(data, n);
        shift2(data, n);
        let scale = 1.0 / n as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
        Ok(())
    }
}

/// Centered unitary 2-D DFT of an `n x n` row-major array.
pub fn fft2_centered(field: &[Complex64], n: usize, dir: Direction) -> Result<Vec<Complex64>> {
    if field.len() != n * n {
        return Err(Error::Shape(format!(
            "expected {n}x{n} = {} samples, got {}",
            n * n,
            field.len()
        )));
    }
    let plan = Fft2::new(n)?;
    let mut out = field.to_vec();
    plan.process(&mut out, dir)?;
    Ok(out)
}

fn shift2(data: &mut [Complex64], n: usize) {
    let h = n / 2;
    for row in data.chunks_exact_mut(n) {
        row.rotate_left(h);
    }
    data.rotate_left(h * n);
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}
