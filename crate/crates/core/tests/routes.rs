//! The three computation routes agree where they should and differ where they should.

use std::f64::consts::{FRAC_PI_2, PI};

use dpcomb::oracle::{array_matrix_numeric, dipole_entries_numeric};
use dpcomb::regularized::{format_samples, parse_samples};
use dpcomb::{
    amplitudes_from_matrix, array_transmission_numeric, comb_matrix, custom_potential, dipole_matrix_analytic,
    example_potential, regularized_comb_matrix, regularized_transmission, resonances, transmission_closed_form,
    CombSpec, DipoleArraySpec, Error,
};

#[test]
fn worked_examples() {
    assert!((transmission_closed_form(0.5, FRAC_PI_2, 2).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(transmission_closed_form(1.0, 0.7, 7).unwrap(), 1.0);
    let t1 = transmission_closed_form(0.2, 1.0, 1).unwrap();
    assert!((t1 - 4.0 * 0.04 / 1.04f64.powi(2)).abs() < 1e-15);
    let k1 = resonances(0.2, 3).unwrap().points[0];
    assert!((k1 - (0.2f64 / 1.04).acos()).abs() < 1e-15);
    assert_eq!(resonances(0.2, 4).unwrap().points[1], FRAC_PI_2);
}

#[test]
fn spacing_rescales_wave_number() {
    for h in [0.5, 2.0, 3.7] {
        for i in 0..50 {
            let k = 0.1 + 0.06 * i as f64;
            let m = comb_matrix(&CombSpec::new(5, 0.4, h).unwrap(), k).unwrap();
            let t = amplitudes_from_matrix(&m).unwrap().transmission();
            assert!((t - transmission_closed_form(0.4, h * k, 5).unwrap()).abs() < 1e-11);
        }
    }
}

#[test]
fn overflow_is_reported() {
    let spec = CombSpec::unit(400, 0.01).unwrap();
    assert!(matches!(comb_matrix(&spec, 0.1), Err(Error::Overflow(_))));
    // the closed form still evaluates
    let t = transmission_closed_form(0.01, 0.1, 400).unwrap();
    assert!((0.0..1e-100).contains(&t));
}

#[test]
fn analytic_array_converges_to_the_ideal_comb() {
    let p = example_potential(0.5).unwrap();
    for k in [0.3, 1.1, 2.2] {
        let ideal = comb_matrix(&CombSpec::unit(3, 0.5).unwrap(), k).unwrap();
        let gaps: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&eps| {
                let spec = DipoleArraySpec::new(p.clone(), 3, eps, 1.0).unwrap();
                regularized_comb_matrix(&spec, k).unwrap().max_abs_diff(&ideal)
            })
            .collect();
        for w in gaps.windows(2) {
            let r = w[0] / w[1];
            assert!((1.8..2.2).contains(&r), "k={k} ratio={r}");
        }
    }
}

#[test]
fn oracle_array_converges_to_the_ideal_comb() {
    let p = example_potential(0.2).unwrap();
    for n in [2, 3] {
        for k in [0.4, 1.2, 2.4] {
            let t = transmission_closed_form(0.2, k, n).unwrap();
            let errs: Vec<f64> = [0.004, 0.002, 0.001]
                .iter()
                .map(|&eps| {
                    let spec = DipoleArraySpec::new(p.clone(), n, eps, 1.0).unwrap();
                    (array_transmission_numeric(&spec, k).unwrap() - t).abs()
                })
                .collect();
            assert!(errs[2] < 0.05, "n={n} k={k} err={}", errs[2]);
            for w in errs.windows(2) {
                let r = w[0] / w[1];
                assert!((1.6..2.6).contains(&r), "n={n} k={k} ratio={r}");
            }
        }
    }
}

#[test]
fn analytic_dipole_is_first_order_accurate() {
    for theta in [0.2, 0.5, 2.0] {
        let p = example_potential(theta).unwrap();
        for k in [0.5, 1.0, 2.5] {
            let gap = |eps: f64| {
                let a = dipole_matrix_analytic(theta, p.eta(), 0.0, k, eps).unwrap().entries();
                let m = dipole_entries_numeric(&p, 0.0, k, eps).unwrap();
                (0..4)
                    .map(|i| (a[i / 2][i % 2] - m[i / 2][i % 2]).norm())
                    .fold(0.0, f64::max)
            };
            let (g1, g2) = (gap(0.01), gap(0.005));
            assert!(g1 < 10.0 * 0.01 * k, "θ={theta} k={k} gap={g1}");
            assert!((g1 / g2 - 2.0).abs() < 0.05);
        }
    }
}

#[test]
fn sampled_potential_tracks_the_quartic() {
    let quartic = example_potential(0.5).unwrap();
    let text = format_samples(&quartic.samples(513));
    let sampled = custom_potential(&parse_samples(&text).unwrap()).unwrap();
    assert!((sampled.theta() - 0.5).abs() < 1e-12);
    assert!((sampled.eta() - quartic.eta()).abs() < 1e-6);
    for k in [0.5, 1.5, 2.5] {
        let a = DipoleArraySpec::new(quartic.clone(), 3, 0.05, 1.0).unwrap();
        let b = DipoleArraySpec::new(sampled.clone(), 3, 0.05, 1.0).unwrap();
        let ma = array_matrix_numeric(&a, k).unwrap();
        let mb = array_matrix_numeric(&b, k).unwrap();
        assert!(mb.su11_defect() < 1e-8);
        assert!(ma.max_abs_diff(&mb) < 1e-4, "k={k}");
        let ra = regularized_transmission(&a, k).unwrap();
        let rb = regularized_transmission(&b, k).unwrap();
        assert!((ra - rb).abs() < 1e-6);
    }
}

#[test]
fn transmission_is_even_and_periodic_for_regularized_arrays() {
    let p = example_potential(0.3).unwrap();
    let spec = DipoleArraySpec::new(p, 4, 0.05, 1.0).unwrap();
    for k in [0.2, 0.9, 1.7] {
        let t = regularized_transmission(&spec, k).unwrap();
        assert!((regularized_transmission(&spec, -k).unwrap() - t).abs() < 1e-12);
        // not π-periodic: the supports have finite width
        assert!((regularized_transmission(&spec, k + PI).unwrap() - t).abs() > 1e-6);
    }
}
