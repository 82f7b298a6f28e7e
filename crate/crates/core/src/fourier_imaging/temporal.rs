//! The temporal factor `[|F^-1{S}|^2 * h_B * h_B(-t)]_{t=0}`.
//!
//! Two independent evaluations are provided. [`temporal_convolution`] works
//! in the frequency domain with nested adaptive quadrature and stays
//! accurate for any ratio of detector to coherence time.
//! [`temporal_convolution_grid`] samples the time domain on a uniform grid
//! and is limited to ratios the grid can resolve; it serves as a cross-check.

use super::DetectorModel;
use crate::numerics::{integrate_1d, QuadratureSpec};
use crate::source::TemporalSpectrum;
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

const BASE_SAMPLES: usize = 1 << 12;
const MAX_SAMPLES: usize = 1 << 17;
const SPAN_FACTOR: f64 = 8.0;
const REL_TOL: f64 = 1e-10;

/// `int |k(tau)|^2 a(tau) d tau` with `k = int_{lo}^{hi} S e^{-i Omega tau}
/// dOmega / 2 pi` and `a = h_B * h_B(-t)`, evaluated as
/// `int dnu / 2 pi |H(nu)|^2 R(nu)` where `R(nu) = int S(Omega) S(Omega + nu)
/// dOmega / 2 pi` is the spectral autocorrelation.
pub fn temporal_convolution(spec: &TemporalSpectrum, lo: f64, hi: f64, det: &DetectorModel) -> Result<f64> {
    let (a, b) = spec.support();
    let (lo, hi) = (lo.max(a), hi.min(b));
    if lo >= hi {
        return Ok(0.0);
    }
    let inner_spec = QuadratureSpec::with_tolerances(1e-13, 0.0);
    let outer_spec = QuadratureSpec::with_tolerances(1e-11, 0.0);
    let bps: Vec<f64> = spec.breakpoints().into_iter().filter(|&p| p > lo && p < hi).collect();

    let autocorr = |nu: f64| -> Result<f64> {
        let (a, b) = (lo.max(lo - nu), hi.min(hi - nu));
        if a >= b {
            return Ok(0.0);
        }
        let mut pts: Vec<f64> = bps.iter().flat_map(|&p| [p, p - nu]).filter(|&p| p > a && p < b).collect();
        pts.push(a);
        pts.push(b);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut total = 0.0;
        for w in pts.windows(2) {
            total += integrate_1d(|o| spec.eval(o) * spec.eval(o + nu), w[0], w[1], &inner_spec)?.value;
        }
        Ok(total / (2.0 * PI))
    };

    // R is even in nu, so integrate over [0, hi - lo] and double.
    let width = hi - lo;
    let mut outer: Vec<f64> = vec![0.0, width];
    // Breakpoints on both scales so no panel is much wider than the
    // feature it has to resolve.
    for scale in [det.td, spec.time_scale()] {
        for m in [1.0, 2.0, 4.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0] {
            let nu = m / scale;
            if nu < width {
                outer.push(nu);
            }
        }
    }
    let mut edges: Vec<f64> = bps.iter().copied().chain([lo, hi]).collect();
    if edges.len() <= 64 {
        edges.sort_by(f64::total_cmp);
        for i in 0..edges.len() {
            for j in 0..i {
                let d = edges[i] - edges[j];
                if d > 0.0 && d < width {
                    outer.push(d);
                }
            }
        }
    }
    outer.sort_by(f64::total_cmp);
    outer.dedup();
    let mut failure = None;
    let mut total = 0.0;
    for w in outer.windows(2) {
        let r = integrate_1d(
            |nu| match autocorr(nu) {
                Ok(v) => det.transfer(nu).powi(2) * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            w[0],
            w[1],
            &outer_spec,
        )?;
        total += r.value;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * total / (2.0 * PI))
}

/// Time-domain form of [`temporal_convolution`] on a uniform grid of
/// `+/- 8 max(T0, Td)`. The grid fixes the spectral step at `pi / span`, so
/// this is only reliable for smooth, rapidly decaying spectra such as the
/// Gaussian. The sample count doubles from 4096 until successive
/// values agree to `1e-10` relative, up to `2^17` samples.
pub fn temporal_convolution_grid(spec: &TemporalSpectrum, lo: f64, hi: f64, det: &DetectorModel) -> Result<f64> {
    let half_span = SPAN_FACTOR * spec.time_scale().max(det.td);
    let mut prev = convolve_on_grid(spec, lo, hi, det, half_span, BASE_SAMPLES);
    let mut n = 2 * BASE_SAMPLES;
    loop {
        let cur = convolve_on_grid(spec, lo, hi, det, half_span, n);
        let diff = (cur - prev).abs();
        if diff <= REL_TOL * cur.abs() || cur == 0.0 {
            return Ok(cur);
        }
        if n >= MAX_SAMPLES {
            return Err(Error::Convergence { value: cur, err_est: diff });
        }
        prev = cur;
        n *= 2;
    }
}

fn convolve_on_grid(spec: &TemporalSpectrum, lo: f64, hi: f64, det: &DetectorModel, half_span: f64, n: usize) -> f64 {
    let dt = 2.0 * half_span / n as f64;
    let d_omega = 2.0 * PI / (n as f64 * dt);
    let h = n / 2;
    let mut planner = FftPlanner::<f64>::new();

    // k(tau_j) by a centred DFT of the sampled spectrum.
    let mut k: Vec<Complex64> = (0..n)
        .map(|m| {
            let om = (m as f64 - h as f64) * d_omega;
            let s = if om >= lo && om <= hi { spec.eval(om) } else { 0.0 };
            Complex64::new(s * d_omega / (2.0 * PI), 0.0)
        })
        .collect();
    k.rotate_left(h);
    planner.plan_fft_forward(n).process(&mut k);
    k.rotate_left(h);

    // a = h_B correlated with itself, via a zero-padded FFT.
    let mut hb: Vec<Complex64> = (0..2 * n)
        .map(|j| {
            if j < n {
                Complex64::new(det.impulse_response((j as f64 - h as f64) * dt), 0.0)
            } else {
                Complex64::default()
            }
        })
        .collect();
    planner.plan_fft_forward(2 * n).process(&mut hb);
    hb.iter_mut().for_each(|v| *v = Complex64::new(v.norm_sqr(), 0.0));
    planner.plan_fft_inverse(2 * n).process(&mut hb);
    let scale = dt / (2 * n) as f64;

    // Lag of sample j is j - n/2; a is even.
    (0..n)
        .map(|j| {
            let lag = (j as isize - h as isize).unsigned_abs();
            k[j].norm_sqr() * hb[lag].re * scale
        })
        .sum::<f64>()
        * dt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_closed_forms() {
        let t0 = 1e-12;
        for r in [0.1, 1.0, 2.0, 10.0, 20.0] {
            let det = DetectorModel::new(1.0, 1.0, r * t0).unwrap();
            let s = TemporalSpectrum::gaussian(t0).unwrap();
            let want = 1.0 / (1.0 + (r / 2.0f64).powi(2)).sqrt();
            let want_q = 2.0 / (PI.sqrt() * ((r * t0).powi(2) + 2.0 * t0 * t0).sqrt());
            for f in [temporal_convolution, temporal_convolution_grid] {
                let got = f(&s, f64::NEG_INFINITY, f64::INFINITY, &det).unwrap();
                assert!((got - want).abs() <= 1e-8 * want, "{r}: {got} vs {want}");
                let q = f(&s.sqrt(), f64::NEG_INFINITY, f64::INFINITY, &det).unwrap();
                assert!((q - want_q).abs() <= 1e-8 * want_q, "{r}: {q} vs {want_q}");
            }
        }
    }

    #[test]
    fn extreme_ratios_and_flat_spectrum() {
        let t0 = 1e-12;
        let s = TemporalSpectrum::gaussian(t0).unwrap();
        for r in [1e-3, 3e3] {
            let det = DetectorModel::new(1.0, 1.0, r * t0).unwrap();
            let got = temporal_convolution(&s, f64::NEG_INFINITY, f64::INFINITY, &det).unwrap();
            let want = 1.0 / (1.0 + (r / 2.0f64).powi(2)).sqrt();
            assert!((got - want).abs() <= 1e-9 * want, "{r}: {got} vs {want}");
        }
        // Flat spectrum of half-width W with W Td = 2: the autocorrelation
        // is a triangle and the result is sqrt(pi) erf(1) - (1 - 1/e).
        let f = TemporalSpectrum::flat(1e12).unwrap();
        let det = DetectorModel::new(1.0, 1.0, 2e-12).unwrap();
        let got = temporal_convolution(&f, f64::NEG_INFINITY, f64::INFINITY, &det).unwrap();
        let spec = crate::numerics::QuadratureSpec::with_tolerances(1e-13, 0.0);
        let gauss = integrate_1d(|x| (-x * x / 4.0).exp(), 0.0, 2.0, &spec).unwrap().value;
        let want = gauss - (1.0 - (-1.0f64).exp());
        assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
    }
}
