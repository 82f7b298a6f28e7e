//! Paraxial free-space propagation of monochromatic fields.

use crate::numerics::{fftfreq, Direction, Fft2, Grid2D};
use crate::{Error, Result, Vec2, SPEED_OF_LIGHT};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `(omega / i 2 pi c L) exp(i omega (L + |rho|^2 / 2L) / c)`.
pub fn huygens_kernel(rho: Vec2, l: f64, omega: f64) -> Result<Complex64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Domain(format!("propagation distance must be positive, got {l}")));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    let amp = omega / (2.0 * PI * SPEED_OF_LIGHT * l);
    let phase = phase_mod(omega * l / SPEED_OF_LIGHT) + omega * crate::norm2(rho) / (2.0 * l * SPEED_OF_LIGHT)
        - 0.5 * PI;
    Ok(Complex64::from_polar(amp, phase))
}

/// Reduce a large phase modulo 2 pi before it is combined with small terms.
pub(crate) fn phase_mod(phi: f64) -> f64 {
    phi.rem_euclid(2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FresnelMethod {
    /// Pick whichever of the two methods is correctly sampled.
    #[default]
    Auto,
    /// Convolution with the Fresnel transfer function; output on the input
    /// grid. Needs `n dx^2 >= lambda L`.
    TransferFunction,
    /// Single-FFT Fresnel transform; output pitch `lambda L / (n dx)`.
    /// Needs `n dx^2 <= lambda L`.
    FresnelTransform,
}

/// A propagator for one grid, distance and frequency, with its chirps and
/// FFT plan precomputed.
#[derive(Debug)]
pub struct FresnelPropagator {
    method: FresnelMethod,
    input: Grid2D,
    output: Grid2D,
    fft: Fft2,
    // Transfer function, or input chirp for the Fresnel transform.
    chirp_a: Vec<Complex64>,
    // Output chirp times prefactor (Fresnel transform only).
    chirp_b: Vec<Complex64>,
}

impl FresnelPropagator {
    pub fn new(grid: Grid2D, l: f64, omega: f64, method: FresnelMethod) -> Result<Self> {
        huygens_kernel([0.0, 0.0], l, omega)?;
        let n = grid.n;
        let lambda_l = 2.0 * PI * SPEED_OF_LIGHT * l / omega;
        let ndx2 = n as f64 * grid.dx * grid.dx;
        let method = match method {
            FresnelMethod::Auto => {
                if ndx2 >= lambda_l {
                    FresnelMethod::TransferFunction
                } else {
                    FresnelMethod::FresnelTransform
                }
            }
            FresnelMethod::TransferFunction if ndx2 < lambda_l => {
                let need = (lambda_l / (grid.dx * grid.dx)).ceil() as usize;
                return Err(Error::Aliasing {
                    reason: format!(
                        "transfer-function sampling needs n dx^2 >= lambda L ({ndx2:.3e} < {lambda_l:.3e})"
                    ),
                    required_n: need.next_power_of_two(),
                });
            }
            FresnelMethod::FresnelTransform if ndx2 > lambda_l => {
                let limit = (lambda_l / (grid.dx * grid.dx)).floor() as usize;
                let need = if limit >= 1 { 1usize << (usize::BITS - 1 - limit.leading_zeros()) } else { 0 };
                return Err(Error::Aliasing {
                    reason: format!("Fresnel-transform sampling needs n dx^2 <= lambda L ({ndx2:.3e} > {lambda_l:.3e})"),
                    required_n: need,
                });
            }
            m => m,
        };
        let fft = Fft2::new(n)?;
        let c = SPEED_OF_LIGHT;
        let base = phase_mod(omega * l / c);
        match method {
            FresnelMethod::TransferFunction => {
                let k = fftfreq(n, grid.dx);
                let mut h = Vec::with_capacity(n * n);
                for kx in &k {
                    for ky in &k {
                        let ph = base - c * l * (kx * kx + ky * ky) / (2.0 * omega);
                        h.push(Complex64::from_polar(1.0, ph));
                    }
                }
                Ok(Self { method, input: grid, output: grid, fft, chirp_a: h, chirp_b: vec![] })
            }
            _ => {
                let dx_out = lambda_l / (n as f64 * grid.dx);
                let output = Grid2D { n, dx: dx_out };
                let q = omega / (2.0 * c * l);
                let chirp = |g: Grid2D| -> Vec<Complex64> {
                    (0..g.len()).map(|i| Complex64::from_polar(1.0, q * crate::norm2(g.point(i)))).collect()
                };
                let scale = omega / (2.0 * PI * c * l) * n as f64 * grid.dx * grid.dx;
                let pref = Complex64::from_polar(scale, base - 0.5 * PI);
                let chirp_b = chirp(output).into_iter().map(|v| v * pref).collect();
                Ok(Self { method, input: grid, output, fft, chirp_a: chirp(grid), chirp_b })
            }
        }
    }

    pub fn method(&self) -> FresnelMethod {
        self.method
    }

    pub fn input_grid(&self) -> Grid2D {
        self.input
    }

    pub fn output_grid(&self) -> Grid2D {
        self.output
    }

    /// Propagate `field` in place. Its length must match the input grid.
    pub fn apply(&self, field: &mut [Complex64]) -> Result<()> {
        if field.len() != self.input.len() {
            return Err(Error::Shape(format!("field has {} samples, grid needs {}", field.len(), self.input.len())));
        }
        match self.method {
            FresnelMethod::TransferFunction => {
                self.fft.process(field, Direction::Forward)?;
                field.iter_mut().zip(&self.chirp_a).for_each(|(v, h)| *v *= h);
                self.fft.process(field, Direction::Inverse)?;
            }
            _ => {
                field.iter_mut().zip(&self.chirp_a).for_each(|(v, h)| *v *= h);
                self.fft.process(field, Direction::Forward)?;
                field.iter_mut().zip(&self.chirp_b).for_each(|(v, h)| *v *= h);
            }
        }
        Ok(())
    }
}

/// Propagate one monochromatic field by `l`. Returns the field and its grid.
pub fn fresnel_propagate(
    field: &[Complex64],
    grid: Grid2D,
    l: f64,
    omega: f64,
    method: FresnelMethod,
) -> Result<(Vec<Complex64>, Grid2D)> {
    let p = FresnelPropagator::new(grid, l, omega, method)?;
    let mut out = field.to_vec();
    p.apply(&mut out)?;
    Ok((out, p.output_grid()))
}
