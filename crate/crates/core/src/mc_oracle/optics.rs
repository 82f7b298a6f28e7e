use super::FieldRealization;
use crate::propagation::{FresnelMethod, FresnelPropagator};
use crate::thinlens::LensGeometry;
use crate::{Error, Result, SPEED_OF_LIGHT};
use num_complex::Complex64;

/// Smallest lens radius, in grid pitches, that `apply_lens` accepts.
const MIN_SAMPLES_PER_RADIUS: f64 = 16.0;

/// Propagate every slice of both fields by `l` with the Fresnel transfer
/// function at its own frequency `omega0 + Omega_j`. The output stays on the
/// input grid.
pub fn fresnel_propagate_realization(fr: &FieldRealization, l: f64) -> Result<FieldRealization> {
    let mut out = fr.clone();
    for (j, &o) in fr.omegas.iter().enumerate() {
        let p = FresnelPropagator::new(fr.grid, l, fr.omega0 + o, FresnelMethod::TransferFunction)?;
        p.apply(&mut out.signal[j])?;
        p.apply(&mut out.idler[j])?;
    }
    Ok(out)
}

/// Multiply every slice by `circ(|rho| / R) exp(-i omega |rho|^2 / 2 c f)`
/// at its frequency `omega = omega0 + Omega_j`.
pub fn apply_lens(fr: &FieldRealization, geom: &LensGeometry) -> Result<FieldRealization> {
    let per_radius = geom.radius / fr.grid.dx;
    if per_radius < MIN_SAMPLES_PER_RADIUS {
        return Err(Error::Sampling(format!(
            "lens radius spans {per_radius:.1} grid pitches, at least {MIN_SAMPLES_PER_RADIUS} are needed"
        )));
    }
    let r2 = geom.radius * geom.radius;
    let rho2: Vec<f64> = (0..fr.grid.len()).map(|i| crate::norm2(fr.grid.point(i))).collect();
    let mut out = fr.clone();
    for (j, &o) in fr.omegas.iter().enumerate() {
        let q = (fr.omega0 + o) / (2.0 * SPEED_OF_LIGHT * geom.focal_length);
        let lens: Vec<Complex64> = rho2
            .iter()
            .map(|&p| if p <= r2 { Complex64::from_polar(1.0, -q * p) } else { Complex64::default() })
            .collect();
        for field in [&mut out.signal[j], &mut out.idler[j]] {
            field.iter_mut().zip(&lens).for_each(|(v, t)| *v *= t);
        }
    }
    Ok(out)
}
