use hrtlab_core::flow::*;
use hrtlab_core::torus::{Term, TrigPolynomial2};
use hrtlab_core::{make_window, WindowKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cos_flow() -> DiagonalFlow {
    DiagonalFlow::from_reals(&[0.0, 2f64.sqrt()], &[0.5, 0.5]).unwrap()
}

#[test]
fn mean_log_cosine_drift() {
    // ∫₀¹ ln|cos πθ| dθ = −ln 2
    let traces = product_traces(&cos_flow(), &[0.3, -1.7, 12.25], 10_000);
    for t in &traces {
        assert!((t.forward_logs[10_000] / 1e4 + 2f64.ln()).abs() <= 0.02);
        assert!((t.backward_logs[10_000] / 1e4 + 2f64.ln()).abs() <= 0.02);
        assert_eq!(t.classification(), ProductClass::DivergesToZero);
    }
    assert_eq!(traces[1].xi, -1.7);
}

#[test]
fn rational_flows_are_periodic() {
    // translations 0, 1/3, 1/2 give |p| period 6
    let f = DiagonalFlow::from_reals(&[0.0, 1.0 / 3.0, 0.5], &[1.0, 0.7, -0.4]).unwrap();
    let t = product_trace(&f, 0.123, 600);
    for n in 1..=100 {
        assert!((t.forward_logs[6 * n] - n as f64 * t.forward_logs[6]).abs() <= 1e-10 * n as f64);
    }
}

#[test]
fn reversed_flow_backward_equals_forward() {
    let f = DiagonalFlow::from_reals(&[0.0, 0.77, 2f64.sqrt()], &[1.0, -0.5, 0.25]).unwrap();
    let r = f.reversed();
    let xi = 0.41;
    let fwd = product_trace(&f, xi, 300);
    let bwd = product_trace(&r, -xi, 300);
    // backward step j of the reversed flow at −ξ is |p(ξ + j)|
    for n in 0..300 {
        let want = fwd.forward_logs[n + 1] - fwd.forward_logs[1];
        assert!((bwd.backward_logs[n] - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
}

#[test]
fn coefficient_matches_two_dimensional_evaluator() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..1000 {
        let xs = [
            rng.gen_range(-3.0..-1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(1.0..3.0),
        ];
        let cs = [
            rng.gen_range(0.1..2.0),
            rng.gen_range(-2.0..-0.1),
            rng.gen_range(0.1..2.0),
        ];
        let f = DiagonalFlow::from_reals(&xs, &cs).unwrap();
        let p = TrigPolynomial2::new(
            xs.iter()
                .zip(&cs)
                .map(|(&x, &c)| Term {
                    c: Complex64::new(c, 0.0),
                    y: 0.0,
                    x,
                })
                .collect(),
        )
        .unwrap();
        let xi = rng.gen_range(-50.0..50.0);
        assert!((matrix_coefficient(&f, xi) - p.eval_plane(0.0, xi)).norm() <= 1e-13);
    }
}

#[test]
fn cos_flow_summability_sides() {
    let p = summability_probe(&cos_flow(), 0.3, 1.0, 5000).unwrap();
    // forward terms decay like 4^{-k}: the sums settle
    assert!(!p.forward_overflow);
    assert!((p.forward[5000] - p.forward[2500]).abs() <= 1e-9 * p.forward[5000]);
    // backward products are reciprocals and blow up
    assert!(p.backward_overflow || p.backward[5000] > 1e100);
}

#[test]
fn classification_stable_across_xi() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let two = DiagonalFlow::from_reals(&[0.0], &[2.0]).unwrap();
    for _ in 0..100 {
        let xi = rng.gen_range(-100.0..100.0);
        let t = product_trace(&two, xi, 100);
        assert!((t.forward_logs[100] - 100.0 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(t.classification(), ProductClass::DivergesToInfinity);
        assert_eq!(t.backward.class, ProductClass::DivergesToZero);
        let uni = DiagonalFlow::from_reals(&[rng.gen_range(-3.0..3.0)], &[1.0]).unwrap();
        assert_eq!(
            product_trace(&uni, xi, 100).classification(),
            ProductClass::Converges
        );
    }
}

#[test]
fn box_fourier_residual_fixture() {
    let w = make_window(WindowKind::Box, 1.0 / 16.0, 4).unwrap();
    let one = DiagonalFlow::from_reals(&[0.0], &[1.0]).unwrap();
    let r = fourier_relation_residual(&w, &one).unwrap();
    assert!((r.residual - 1.269_146_298_451_107_5).abs() < 1e-12);
    assert_eq!(r.spacing, 0.125);
}

#[test]
fn fourier_residual_needs_room_for_shift() {
    let w = make_window(WindowKind::Gaussian, 1.0, 4).unwrap();
    let one = DiagonalFlow::from_reals(&[0.0], &[1.0]).unwrap();
    assert!(matches!(
        fourier_relation_residual(&w, &one),
        Err(hrtlab_core::Error::GridMismatch(_))
    ));
}
