mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::time::Instant;
use twophoton::numerics::{bisect, Grid2D};
use twophoton::propagation::{
    far_field_check, huygens_kernel, propagate_spectrum, vcz_phase_insensitive, vcz_phase_sensitive,
    CorrelationKind, CorrelationSpectrum, FresnelMethod, GriddedSlice,
};
use twophoton::source::{build_schell_spectra, Mask, Regime, SourceModel, SpatialCorrelation, TemporalSpectrum};
use twophoton::{Error, Vec2, SPEED_OF_LIGHT};

/// Gaussian-Schell source on a Gaussian disk.
fn disk_source(a0: f64, rho0: f64) -> SourceModel {
    let mask = Mask::gaussian_disk(a0).unwrap();
    let spatial = SpatialCorrelation::gaussian_with_transform_peak(rho0, 1.0).unwrap();
    SourceModel::new(mask, spatial, TemporalSpectrum::gaussian(T0).unwrap(), Regime::ClassicalMax, omega0()).unwrap()
}

fn gaussian_field(g: Grid2D, centre: Vec2, w: f64, tilt: f64) -> Vec<Complex64> {
    (0..g.len())
        .map(|i| {
            let p = g.point(i);
            let r2 = (p[0] - centre[0]).powi(2) + (p[1] - centre[1]).powi(2);
            Complex64::from_polar((-r2 / (w * w)).exp(), tilt * p[0])
        })
        .collect()
}

fn rel_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn kernel_modulus_is_flat_and_axis_phase_is_quarter_wave_behind() {
    let (l, w) = (0.7, omega0());
    let m = w / (2.0 * PI * SPEED_OF_LIGHT * l);
    let k0 = huygens_kernel([0.0, 0.0], l, w).unwrap();
    let want = (w * l / SPEED_OF_LIGHT - 0.5 * PI).rem_euclid(2.0 * PI);
    let d = (k0.arg().rem_euclid(2.0 * PI) - want).abs();
    assert!(d.min(2.0 * PI - d) < 1e-6);
    assert!((k0.norm() - m).abs() < 1e-12 * m);
    assert!(matches!(huygens_kernel([0.0, 0.0], -1.0, w), Err(Error::Domain(_))));
}

/// Slice-by-slice `sum_rho S(rho, rho) dx^2`.
fn diagonal_power(s: &CorrelationSpectrum) -> Vec<f64> {
    s.slices()
        .unwrap()
        .iter()
        .map(|sl| sl.diagonal().unwrap().iter().map(|v| v.re).sum::<f64>() * sl.grid1.dx * sl.grid1.dx)
        .collect()
}

fn sampled_disk(g: Grid2D, omegas: &[f64]) -> (CorrelationSpectrum, CorrelationSpectrum) {
    let s = build_schell_spectra(&disk_source(6.0 * g.dx, 1.5 * g.dx)).unwrap();
    (s.s0_n.sample(g, omegas).unwrap(), s.s0_p.sample(g, omegas).unwrap())
}

#[test]
fn diagonal_power_is_conserved() {
    let g = Grid2D::new(32, 2e-6).unwrap();
    let omegas = [-1.0 / T0, 0.0, 2.0 / T0];
    let (sn, _) = sampled_disk(g, &omegas);
    let before = diagonal_power(&sn);
    // Near field on the input grid, and far field on a rescaled one.
    for (l, method) in [(1e-4, FresnelMethod::TransferFunction), (0.05, FresnelMethod::FresnelTransform)] {
        let out = propagate_spectrum(&sn, l, method).unwrap();
        for (a, b) in before.iter().zip(diagonal_power(&out)) {
            assert!((a - b).abs() <= 1e-8 * a, "{method:?}: {a} vs {b}");
        }
        let sl = &out.slices().unwrap()[1];
        let scale = sl.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for i in (0..g.len()).step_by(37) {
            for j in (0..g.len()).step_by(41) {
                assert!((sl.get(i, j) - sl.get(j, i).conj()).norm() <= 1e-12 * scale);
            }
            assert!(sl.get(i, i).re >= -1e-12 * scale);
        }
    }
}

#[test]
fn phase_sensitive_spectrum_stays_symmetric() {
    let g = Grid2D::new(32, 2e-6).unwrap();
    // Swap symmetry needs a common output grid, so Omega = 0.
    let (_, sp) = sampled_disk(g, &[0.0]);
    let out = propagate_spectrum(&sp, 0.05, FresnelMethod::FresnelTransform).unwrap();
    let sl = &out.slices().unwrap()[0];
    let scale = sl.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for i in (0..g.len()).step_by(13) {
        for j in (0..g.len()).step_by(17) {
            assert!((sl.get(i, j) - sl.get(j, i)).norm() <= 1e-12 * scale);
        }
    }
}

/// `sum_{a1, a2} K1(rho1 - a1) K2(rho2 - a2) S(a1, a2) dx^4` with `K1`
/// conjugated for phase-insensitive spectra.
fn direct_sum(slice: &GriddedSlice, kind: CorrelationKind, omega0: f64, l: f64, rho1: Vec2, rho2: Vec2) -> Complex64 {
    let g = slice.grid1;
    let w2 = omega0 + slice.omega;
    let w1 = if kind == CorrelationKind::PhaseInsensitive { w2 } else { omega0 - slice.omega };
    let k = |rho: Vec2, w: f64, i: usize| {
        let a = g.point(i);
        huygens_kernel([rho[0] - a[0], rho[1] - a[1]], l, w).unwrap()
    };
    let k1: Vec<Complex64> = (0..g.len())
        .map(|i| if kind == CorrelationKind::PhaseInsensitive { k(rho1, w1, i).conj() } else { k(rho1, w1, i) })
        .collect();
    let k2: Vec<Complex64> = (0..g.len()).map(|i| k(rho2, w2, i)).collect();
    let mut acc = Complex64::default();
    for (i1, a) in k1.iter().enumerate() {
        let mut row = Complex64::default();
        for (i2, b) in k2.iter().enumerate() {
            row += b * slice.get(i1, i2);
        }
        acc += a * row;
    }
    acc * g.dx.powi(4)
}

#[test]
fn fft_path_matches_direct_summation() {
    let g = Grid2D::new(32, 2e-6).unwrap();
    let omegas = [0.7 / T0];
    let (sn, sp) = sampled_disk(g, &omegas);
    let l = 0.05;
    for s in [&sn, &sp] {
        let out = propagate_spectrum(s, l, FresnelMethod::FresnelTransform).unwrap();
        let sl_out = &out.slices().unwrap()[0];
        let (go, go2) = (sl_out.grid1, sl_out.grid2);
        let n = go.n;
        for (i1, i2) in [(n / 2 * n + n / 2, n / 2 * n + n / 2), ((n / 2 + 1) * n + n / 2, n / 2 * n + n / 2 - 1), ((n / 2 - 2) * n + n / 2 + 1, (n / 2 + 1) * n + n / 2 + 2)] {
            let want = direct_sum(&s.slices().unwrap()[0], s.kind, s.omega0, l, go.point(i1), go2.point(i2));
            let got = sl_out.get(i1, i2);
            assert!(rel_c(got, want) <= 1e-6, "{:?}: {got} vs {want}", s.kind);
        }
    }
}

/// Acceptance: far-field theorems against full Fresnel propagation.
#[test]
fn far_field_theorems_match_full_propagation() {
    let t = Instant::now();
    let g = Grid2D::new(32, 2e-6).unwrap();
    // The theorems evaluate every phase at omega0, so an off-centre slice is off
    // by roughly Omega |rho|^2 / 2cL. Keep that small next to the far-field ratio.
    let omegas = [0.0, 0.1 / T0];
    let (a0, rho0) = (6.0 * g.dx, 1.5 * g.dx);
    let model = disk_source(a0, rho0);
    let (sn, sp) = sampled_disk(g, &omegas);
    let l = 0.1;
    let ff = far_field_check(&model, l);
    assert!(ff.condition_p <= 0.05 && ff.condition_n <= 0.05, "{ff:?}");
    let pn = propagate_spectrum(&sn, l, FresnelMethod::FresnelTransform).unwrap();
    let pp = propagate_spectrum(&sp, l, FresnelMethod::FresnelTransform).unwrap();
    let n = g.n;
    let c = n / 2 * n + n / 2;
    let pairs = [(c, c), (c + 1, c), (c + n, c - 1), (c - n + 1, c + 2), (c + 2 * n, c - n)];
    let mut worst: f64 = 0.0;
    for (j, &w) in omegas.iter().enumerate() {
        for &(i1, i2) in &pairs {
            let (a, b) = (&pn.slices().unwrap()[j], &pp.slices().unwrap()[j]);
            let e = rel_c(a.get(i1, i2), vcz_phase_insensitive(&model, l, a.grid1.point(i1), a.grid2.point(i2), w).unwrap());
            let f = rel_c(b.get(i1, i2), vcz_phase_sensitive(&model, l, b.grid1.point(i1), b.grid2.point(i2), w).unwrap());
            worst = worst.max(e).max(f);
        }
    }
    println!("far-field theorems: worst relative deviation {worst:.3e} in {:.2?}", t.elapsed());
    assert!(worst <= 0.02);
    assert!(t.elapsed().as_secs() <= 60);
}

fn pair_spectra(kind_fields: (Vec<Complex64>, Vec<Complex64>), g: Grid2D, omega: f64) -> (CorrelationSpectrum, CorrelationSpectrum) {
    let (e1, e2) = kind_fields;
    let n = CorrelationSpectrum::from_fields(CorrelationKind::PhaseInsensitive, g, omega, &e1, &e2, omega0()).unwrap();
    let p = CorrelationSpectrum::from_fields(CorrelationKind::PhaseSensitive, g, omega, &e1, &e2, omega0()).unwrap();
    (n, p)
}

/// Largest `| |PS| - |PI| |` relative to the largest `|PI|`.
fn modulus_gap(g: Grid2D, omega: f64, l: f64) -> f64 {
    let fields = (gaussian_field(g, [6e-6, 0.0], 10e-6, 0.0), gaussian_field(g, [-4e-6, 2e-6], 8e-6, 2e4));
    let (n, p) = pair_spectra(fields, g, omega);
    let n = propagate_spectrum(&n, l, FresnelMethod::TransferFunction).unwrap();
    let p = propagate_spectrum(&p, l, FresnelMethod::TransferFunction).unwrap();
    let (a, b) = (&n.slices().unwrap()[0].data, &p.slices().unwrap()[0].data);
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x.norm() - y.norm()).abs()).fold(0.0, f64::max) / scale
}

#[test]
fn degenerate_slice_pairs_agree() {
    let g = Grid2D::new(32, 2e-6).unwrap();
    let l = 5e-5;
    assert!(modulus_gap(g, 0.0, l) <= 1e-12);
    assert!(modulus_gap(g, 1e-3 * omega0(), l) <= 1e-2);
    assert!(modulus_gap(g, -1e-3 * omega0(), l) <= 1e-2);
    // Far from degeneracy the two differ.
    assert!(modulus_gap(g, 0.5 * omega0(), l) > 1e-2);
}

#[test]
fn propagation_rejects_undersampled_grids_and_schell_input() {
    let g = Grid2D::new(16, 1e-6).unwrap();
    let (sn, _) = sampled_disk(g, &[0.0]);
    match propagate_spectrum(&sn, 1.0, FresnelMethod::TransferFunction) {
        Err(Error::Aliasing { required_n, .. }) => assert!(required_n > 16),
        other => panic!("{other:?}"),
    }
    let s = build_schell_spectra(&disk_source(12e-6, 3e-6)).unwrap();
    assert!(matches!(propagate_spectrum(&s.s0_n, 1.0, FresnelMethod::Auto), Err(Error::Unsupported(_))));
}

/// 1/e^2 half-width of `|f(t)|^2` along `t > 0`, for a monotone decay.
fn half_width<F: Fn(f64) -> f64>(f: F, guess: f64) -> f64 {
    let peak = f(0.0);
    let h = |t: f64| f(t) - peak * (-2.0f64).exp();
    let mut hi = guess;
    while h(hi) > 0.0 {
        hi *= 2.0;
    }
    bisect(h, 0.0, hi, h(0.0), 1e-12 * hi).unwrap()
}

fn widths(model: &SourceModel, l: f64) -> [f64; 4] {
    let s = SPEED_OF_LIGHT * l / (omega0() * model.mask().radius());
    let pi_s = |t: f64| vcz_phase_insensitive(model, l, [t, 0.0], [t, 0.0], 0.0).unwrap().norm_sqr();
    let pi_d = |t: f64| vcz_phase_insensitive(model, l, [-t / 2.0, 0.0], [t / 2.0, 0.0], 0.0).unwrap().norm_sqr();
    let ps_s = |t: f64| vcz_phase_sensitive(model, l, [t, 0.0], [t, 0.0], 0.0).unwrap().norm_sqr();
    let ps_d = |t: f64| vcz_phase_sensitive(model, l, [-t / 2.0, 0.0], [t / 2.0, 0.0], 0.0).unwrap().norm_sqr();
    [half_width(pi_s, s), half_width(pi_d, s), half_width(ps_s, s), half_width(ps_d, s)]
}

#[test]
fn far_field_roles_swap_between_the_theorems() {
    let (a0, l) = (40e-6, 2.0);
    let model = disk_source(a0, a0 / 20.0);
    let [pi_s, pi_d, ps_s, ps_d] = widths(&model, l);
    // Broad in rho_s and narrow in rho_d for the phase-insensitive theorem,
    // the other way round for the phase-sensitive one.
    let pi_ratio = pi_s / pi_d;
    let ps_ratio = ps_s / ps_d;
    assert!((pi_ratio - 10.0).abs() <= 1e-6 * 10.0, "{pi_ratio}");
    assert!((ps_ratio - 1.0 / 40.0).abs() <= 1e-6 / 40.0, "{ps_ratio}");
}

#[test]
fn phase_insensitive_envelope_ignores_the_mask() {
    let l = 1.0;
    let a = disk_source(40e-6, 2e-6);
    let b = SourceModel::new(
        two_slit(),
        SpatialCorrelation::gaussian_with_transform_peak(2e-6, 1.0).unwrap(),
        TemporalSpectrum::gaussian(T0).unwrap(),
        Regime::ClassicalMax,
        omega0(),
    )
    .unwrap();
    let norm = |m: &SourceModel, x: f64| {
        vcz_phase_insensitive(m, l, [x, 0.0], [x, 0.0], 0.0).unwrap().norm()
            / vcz_phase_insensitive(m, l, [0.0, 0.0], [0.0, 0.0], 0.0).unwrap().norm()
    };
    for x in [1e-3, 2e-2, 5e-2] {
        assert!((norm(&a, x) - norm(&b, x)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_quadratic_phase_scales(x in -1e-3f64..1e-3, y in -1e-3f64..1e-3, l in 0.1f64..10.0) {
        let w = omega0();
        let phase = |rho: Vec2, l: f64| {
            (huygens_kernel(rho, l, w).unwrap() / huygens_kernel([0.0, 0.0], l, w).unwrap()).arg()
        };
        let d = (phase([x, y], l) - phase([2.0 * x, 2.0 * y], 4.0 * l)).rem_euclid(2.0 * PI);
        prop_assert!(d.min(2.0 * PI - d) < 1e-6);
        let m = huygens_kernel([x, y], l, w).unwrap().norm();
        prop_assert!((m - w / (2.0 * PI * SPEED_OF_LIGHT * l)).abs() <= 1e-12 * m);
    }

    #[test]
    fn vcz_swap_symmetries(
        x1 in -2e-2f64..2e-2, y1 in -2e-2f64..2e-2, x2 in -2e-2f64..2e-2, y2 in -2e-2f64..2e-2, w in -3e12f64..3e12,
    ) {
        let m = disk_source(40e-6, 2e-6);
        let l = 2.0;
        let (a, b) = ([x1, y1], [x2, y2]);
        let n12 = vcz_phase_insensitive(&m, l, a, b, w).unwrap();
        let n21 = vcz_phase_insensitive(&m, l, b, a, w).unwrap();
        prop_assert!((n12 - n21.conj()).norm() <= 1e-12 * n12.norm().max(1e-300));
        let p12 = vcz_phase_sensitive(&m, l, a, b, w).unwrap();
        let p21 = vcz_phase_sensitive(&m, l, b, a, w).unwrap();
        prop_assert!((p12 - p21).norm() <= 1e-9 * p12.norm().max(1e-300));
    }

    #[test]
    fn far_field_ratio_ordering(a0 in 1e-5f64..1e-3, frac in 0.01f64..1.0, l in 0.1f64..100.0) {
        let c = far_field_check(&disk_source(a0, a0 * frac), l);
        prop_assert!(c.condition_p >= c.condition_n);
        prop_assert!((c.condition_p / c.condition_n - 1.0 / frac).abs() <= 1e-12 / frac);
    }

    #[test]
    fn fourier_duality_of_the_difference_width(a0 in 1e-5f64..2e-4, l in 0.5f64..20.0) {
        let model = disk_source(a0, a0 / 20.0);
        let pi_d = widths(&model, l)[1];
        let scaled = pi_d * omega0() * a0 / (SPEED_OF_LIGHT * l);
        prop_assert!((scaled - 2.0 * 2f64.sqrt()).abs() <= 0.01 * 2.0 * 2f64.sqrt(), "{}", scaled);
    }
}
