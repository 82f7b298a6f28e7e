//! One-dimensional quadrature over finite intervals.

use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadMethod {
    /// Globally adaptive 10/21-point Gauss-Kronrod.
    AdaptiveGk,
    /// Composite Simpson with panel doubling and a Richardson error estimate.
    CompositeSimpson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Interval budget for Gauss-Kronrod, panel-doubling budget (as a panel
    /// count) for Simpson.
    pub max_subdivisions: usize,
    pub method: QuadMethod,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            method: QuadMethod::AdaptiveGk,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_est: f64,
}

/// Integrate `f` over `[a, b]`. Reversed limits flip the sign.
///
/// Fails with [`Error::Convergence`], carrying the best available estimate,
/// when the tolerance is not met within the subdivision budget, and with
/// [`Error::Domain`] when the integrand produces a non-finite value.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integration limits must be finite: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            err_est: 0.0,
        });
    }
    if b < a {
        let r = integrate_1d(f, b, a, spec)?;
        return Ok(Integral {
            value: -r.value,
            err_est: r.err_est,
        });
    }
    match spec.method {
        QuadMethod::AdaptiveGk => adaptive_gk(&mut f, a, b, spec),
        QuadMethod::CompositeSimpson => simpson(&mut f, a, b, spec),
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_225_208,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Piece> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    if !resk.is_finite() {
        return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Piece { a, b, value, err })
}

fn adaptive_gk<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let first = gk21(f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let target = |v: f64| spec.abs_tol.max(spec.rel_tol * v.abs());
    let mut count = 1;
    while total_err > target(total) {
        if count >= spec.max_subdivisions.max(1) {
            return Err(Error::Convergence {
                value: total,
                err_est: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            return Err(Error::Convergence {
                value: total,
                err_est: total_err,
            });
        }
        let left = gk21(f, worst.a, mid)?;
        let right = gk21(f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        count += 1;
        // Re-sum periodically to stop drift in the running totals.
        if count % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let err_est: f64 = heap.iter().map(|p| p.err).sum();
    Ok(Integral { value, err_est })
}

fn simpson<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let mut n = 2usize;
    let h0 = b - a;
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    // Sums of endpoint, odd-index and even-index interior samples.
    let ends = fa + fb;
    let mut even = 0.0;
    let mut odd = fm;
    let mut prev = (ends + 4.0 * odd) * h0 / 6.0;
    if !prev.is_finite() {
        return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    loop {
        if 2 * n > spec.max_subdivisions.max(4) {
            return Err(Error::Convergence {
                value: prev,
                err_est: f64::INFINITY,
            });
        }
        n *= 2;
        let h = h0 / n as f64;
        even += odd;
        odd = (0..n / 2).map(|i| f(a + (2 * i + 1) as f64 * h)).sum();
        let cur = (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
        if !cur.is_finite() {
            return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
        }
        let err = (cur - prev).abs() / 15.0;
        let value = cur + (cur - prev) / 15.0;
        if err <= spec.abs_tol.max(spec.rel_tol * value.abs()) && n >= 8 {
            return Ok(Integral {
                value,
                err_est: err,
            });
        }
        prev = cur;
    }
}
