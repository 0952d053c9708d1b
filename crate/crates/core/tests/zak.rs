use hrtlab_core::torus::{Term, TrigPolynomial2};
use hrtlab_core::zak::{
    check_zak_identity, inverse_zak, zak_equation_residual, zak_transform, ZakIdentity, ZakImage,
};
use hrtlab_core::{make_window, SampledWindow, WindowKind};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_window(rng: &mut ChaCha8Rng, q: usize, k: usize) -> SampledWindow {
    let samples = (0..2 * k * q)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SampledWindow::custom(q, k, samples).unwrap()
}

#[test]
fn gaussian_values_match_direct_sum() {
    let g = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8).unwrap();
    let z = zak_transform(&g, 64).unwrap();
    assert!((z.energy() - g.norm_sqr()).abs() < 1e-9);
    assert!(z.truncation_bound() < 1e-80);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (i, l) = (rng.gen_range(0..64usize), rng.gen_range(0..64usize));
        let mut want = Complex64::new(0.0, 0.0);
        for k in -8i32..8 {
            let t = i as f64 / 64.0 + k as f64;
            let gv = 2f64.powf(0.25) * (-PI * t * t).exp();
            want += gv * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * l as f64 / 64.0);
        }
        assert!((z.get(i, l) - want).norm() < 1e-12);
    }
}

#[test]
fn identities_for_random_grid_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5 {
        // keep the outer unit band empty so shifts stay inside the grid
        let full = random_window(&mut rng, 32, 4);
        let samples = full
            .samples()
            .iter()
            .enumerate()
            .map(|(j, s)| {
                if full.time(j).abs() < 3.0 {
                    *s
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let w = SampledWindow::custom(32, 4, samples).unwrap();
        for id in ZakIdentity::all(5.0 / 32.0, -3.0 / 32.0) {
            let e = check_zak_identity(id, &w, 32).unwrap();
            match id {
                ZakIdentity::QuasiPeriodT | ZakIdentity::PeriodOmega => assert_eq!(e, 0.0),
                _ => assert!(e <= 1e-9, "{}: {e}", id.name()),
            }
        }
    }
}

#[test]
fn gaussian_admits_no_dependency() {
    let g = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8).unwrap();
    let z = zak_transform(&g, 64).unwrap();
    let p = TrigPolynomial2::new(vec![
        Term {
            c: Complex64::new(0.7, 0.2),
            y: 0.0,
            x: 0.0,
        },
        Term {
            c: Complex64::new(-0.4, 0.1),
            y: 1.0,
            x: 0.0,
        },
        Term {
            c: Complex64::new(0.3, -0.5),
            y: 0.0,
            x: 1.0,
        },
    ])
    .unwrap();
    assert!(zak_equation_residual(&z, &p, 0.25, 0.25).unwrap() > 0.01);
}

#[test]
fn gaussian_round_trip() {
    let g = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8).unwrap();
    let back = inverse_zak(&zak_transform(&g, 64).unwrap()).unwrap();
    for (a, b) in g.samples().iter().zip(back.samples()) {
        assert!((a - b).norm() <= 1e-10);
    }
}

fn random_image(rng: &mut ChaCha8Rng, q: usize) -> ZakImage {
    let mut values: Vec<Complex64> = (0..q * q)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let energy: f64 = values.iter().map(|v| v.norm_sqr()).sum::<f64>() / (q * q) as f64;
    values.iter_mut().for_each(|v| *v /= energy.sqrt());
    ZakImage::from_values(q, q / 2, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unitarity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_window(&mut rng, 32, 8);
        let z = zak_transform(&w, 32).unwrap();
        prop_assert!((z.energy() - w.norm_sqr()).abs() <= 1e-9 * w.norm_sqr());
    }

    #[test]
    fn image_round_trip(seed in any::<u64>(), q in prop::sample::select(vec![4usize, 8, 16, 32])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_image(&mut rng, q);
        let w = inverse_zak(&z).unwrap();
        prop_assert!((w.norm() - 1.0).abs() <= 1e-10);
        let again = zak_transform(&w, q).unwrap();
        for (a, b) in z.values().iter().zip(again.values()) {
            prop_assert!((a - b).norm() <= 1e-10);
        }
    }
}
