//! Second-order correlation spectra `S(rho1, rho2, Omega)`.

use super::fresnel::{FresnelMethod, FresnelPropagator};
use crate::numerics::Grid2D;
use crate::source::{Mask, SpatialCorrelation, TemporalSpectrum};
use crate::{Error, Result, Vec2};
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationKind {
    /// `<E^dagger(1) E(2)>`
    PhaseInsensitive,
    /// `<E(1) E(2)>`
    PhaseSensitive,
}

/// Factors of a Schell-model spectrum. The sum-coordinate factor is `|T|^2`
/// for phase-insensitive and `T^2` for phase-sensitive spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SchellFactors {
    pub mask: Mask,
    pub spatial: SpatialCorrelation,
    pub temporal: TemporalSpectrum,
    pub amplitude: Complex64,
}

/// One frequency slice on a pair of grids, stored as `data[i1 * n2^2 + i2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedSlice {
    pub omega: f64,
    pub grid1: Grid2D,
    pub grid2: Grid2D,
    pub data: Vec<Complex64>,
}

impl GriddedSlice {
    #[inline]
    pub fn get(&self, i1: usize, i2: usize) -> Complex64 {
        self.data[i1 * self.grid2.len() + i2]
    }

    /// `S(rho, rho)` when both grids coincide.
    pub fn diagonal(&self) -> Option<Vec<Complex64>> {
        (self.grid1 == self.grid2).then(|| (0..self.grid1.len()).map(|i| self.get(i, i)).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Schell(SchellFactors),
    Gridded(Vec<GriddedSlice>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpectrum {
    pub kind: CorrelationKind,
    pub representation: Representation,
    pub plane_z: f64,
    pub omega0: f64,
}

impl CorrelationSpectrum {
    pub fn schell(kind: CorrelationKind, factors: SchellFactors, omega0: f64) -> Self {
        Self { kind, representation: Representation::Schell(factors), plane_z: 0.0, omega0 }
    }

    pub fn gridded(kind: CorrelationKind, slices: Vec<GriddedSlice>, plane_z: f64, omega0: f64) -> Result<Self> {
        for s in &slices {
            if s.data.len() != s.grid1.len() * s.grid2.len() {
                return Err(Error::Shape(format!(
                    "slice at Omega = {} holds {} values, grids need {}",
                    s.omega,
                    s.data.len(),
                    s.grid1.len() * s.grid2.len()
                )));
            }
        }
        Ok(Self { kind, representation: Representation::Gridded(slices), plane_z, omega0 })
    }

    /// Rank-one slice from two fields: `conj(E1(rho1)) E2(rho2)` or
    /// `E1(rho1) E2(rho2)` depending on `kind`.
    pub fn from_fields(
        kind: CorrelationKind,
        grid: Grid2D,
        omega: f64,
        e1: &[Complex64],
        e2: &[Complex64],
        omega0: f64,
    ) -> Result<Self> {
        if e1.len() != grid.len() || e2.len() != grid.len() {
            return Err(Error::Shape("field length does not match grid".into()));
        }
        let mut data = Vec::with_capacity(grid.len() * grid.len());
        for a in e1 {
            let a = if kind == CorrelationKind::PhaseInsensitive { a.conj() } else { *a };
            data.extend(e2.iter().map(|b| a * b));
        }
        Self::gridded(kind, vec![GriddedSlice { omega, grid1: grid, grid2: grid, data }], 0.0, omega0)
    }

    pub fn slices(&self) -> Option<&[GriddedSlice]> {
        match &self.representation {
            Representation::Gridded(s) => Some(s),
            Representation::Schell(_) => None,
        }
    }

    /// Pointwise value of a Schell-model spectrum with `rho_s = (rho1 +
    /// rho2)/2` and `rho_d = rho2 - rho1`.
    pub fn eval(&self, rho1: Vec2, rho2: Vec2, omega: f64) -> Result<Complex64> {
        let Representation::Schell(f) = &self.representation else {
            return Err(Error::Unsupported("pointwise evaluation of a gridded spectrum; index its slices".into()));
        };
        if f.amplitude == Complex64::default() {
            return Ok(Complex64::default());
        }
        let rs = [0.5 * (rho1[0] + rho2[0]), 0.5 * (rho1[1] + rho2[1])];
        let rd = crate::norm([rho2[0] - rho1[0], rho2[1] - rho1[1]]);
        let t = f.mask.value(rs);
        let sum = match self.kind {
            CorrelationKind::PhaseInsensitive => Complex64::new(t.norm_sqr(), 0.0),
            CorrelationKind::PhaseSensitive => t * t,
        };
        Ok(f.amplitude * sum * f.spatial.value(rd)? * f.temporal.eval(omega))
    }

    /// Sample a Schell-model spectrum onto `grid x grid` at each frequency.
    pub fn sample(&self, grid: Grid2D, omegas: &[f64]) -> Result<Self> {
        let n2 = grid.len();
        let mut slices = Vec::with_capacity(omegas.len());
        for &omega in omegas {
            let rows: Result<Vec<Vec<Complex64>>> = (0..n2)
                .into_par_iter()
                .map(|i1| {
                    let p1 = grid.point(i1);
                    (0..n2).map(|i2| self.eval(p1, grid.point(i2), omega)).collect()
                })
                .collect();
            let data = rows?.concat();
            slices.push(GriddedSlice { omega, grid1: grid, grid2: grid, data });
        }
        Self::gridded(self.kind, slices, self.plane_z, self.omega0)
    }
}

/// Propagate a gridded spectrum by `l` through free space.
///
/// Phase-insensitive slices use the conjugate kernel at `omega0 + Omega` on
/// `rho1` and the kernel at `omega0 + Omega` on `rho2`; phase-sensitive
/// slices use kernels at `omega0 - Omega` and `omega0 + Omega`.
pub fn propagate_spectrum(s: &CorrelationSpectrum, l: f64, method: FresnelMethod) -> Result<CorrelationSpectrum> {
    let Some(slices) = s.slices() else {
        return Err(Error::Unsupported("only gridded spectra can be propagated; sample the Schell form first".into()));
    };
    let mut out = Vec::with_capacity(slices.len());
    for slice in slices {
        let w2 = s.omega0 + slice.omega;
        let w1 = match s.kind {
            CorrelationKind::PhaseInsensitive => w2,
            CorrelationKind::PhaseSensitive => s.omega0 - slice.omega,
        };
        if !(w1 > 0.0 && w2 > 0.0) {
            return Err(Error::Domain(format!("slice Omega = {} lies outside (-omega0, omega0)", slice.omega)));
        }
        let p1 = FresnelPropagator::new(slice.grid1, l, w1, method)?;
        let p2 = FresnelPropagator::new(slice.grid2, l, w2, method)?;
        let conj1 = s.kind == CorrelationKind::PhaseInsensitive;
        out.push(propagate_slice(slice, &p1, &p2, conj1)?);
    }
    CorrelationSpectrum::gridded(s.kind, out, s.plane_z + l, s.omega0)
}

fn propagate_slice(
    slice: &GriddedSlice,
    p1: &FresnelPropagator,
    p2: &FresnelPropagator,
    conj1: bool,
) -> Result<GriddedSlice> {
    let (n1, n2) = (slice.grid1.len(), slice.grid2.len());
    // Coordinate 2: every row is a field in rho2.
    let mut data = slice.data.clone();
    data.par_chunks_mut(n2).try_for_each(|row| p2.apply(row))?;
    // Coordinate 1: transpose so that rho1 runs along rows.
    let mut t = transpose(&data, n1, n2);
    t.par_chunks_mut(n1).try_for_each(|row| {
        if conj1 {
            row.iter_mut().for_each(|v| *v = v.conj());
            p1.apply(row)?;
            row.iter_mut().for_each(|v| *v = v.conj());
            Ok(())
        } else {
            p1.apply(row)
        }
    })?;
    Ok(GriddedSlice {
        omega: slice.omega,
        grid1: p1.output_grid(),
        grid2: p2.output_grid(),
        data: transpose(&t, n2, n1),
    })
}

/// Transpose a `rows x cols` row-major matrix.
fn transpose(a: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); a.len()];
    const B: usize = 32;
    for rb in (0..rows).step_by(B) {
        for cb in (0..cols).step_by(B) {
            for r in rb..(rb + B).min(rows) {
                for c in cb..(cb + B).min(cols) {
                    out[c * rows + r] = a[r * cols + c];
                }
            }
        }
    }
    out
}
