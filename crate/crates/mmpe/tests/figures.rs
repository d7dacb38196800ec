use mmpe::figures::{fig2, fig3, fig4, figure, linspace, range_grid, transition_widths};

#[test]
fn fig1a_classical_residual_changes_sign_at_two() {
    let t = figure("fig1a").unwrap();
    let p = t.numbers("p").unwrap();
    let c = t.numbers("classical").unwrap();
    let crossings: Vec<f64> = p.windows(2).zip(c.windows(2)).filter(|(_, c)| c[0] * c[1] < 0.0).map(|(p, _)| p[0]).collect();
    assert_eq!(crossings.len(), 1, "{crossings:?}");
    assert!((crossings[0] - 2.0).abs() <= 0.05 + 1e-9, "{crossings:?}");
    assert!(t.numbers("orthogonality_max").unwrap().iter().all(|v| *v < 1e-6));
}

#[test]
fn fig2_holder_bounds_bracket_truth() {
    let t = fig2(&linspace(0.1, 0.9, 9)).unwrap();
    let truth = t.numbers("true").unwrap();
    for col in ["holder_fr", "holder_fp"] {
        for (b, v) in t.numbers(col).unwrap().iter().zip(&truth) {
            assert!(*b >= v - 1e-9, "{col}: {b} < {v}");
        }
    }
}

#[test]
fn fig3_levels_grow_with_snr() {
    let t = fig3(&range_grid(3.0, 1.0, 25.0)).unwrap();
    let l = t.numbers("levels").unwrap();
    assert!(l.windows(2).all(|w| w[1] >= w[0]));
    assert!(l[0] >= 2.0);
}

#[test]
fn fig4_envelope_never_exceeds_gaussian() {
    let t = fig4(0.05, &[1, 40], &range_grid(0.25, 0.25, 8.0)).unwrap();
    for (e, g) in t.numbers("envelope").unwrap().iter().zip(t.numbers("gaussian").unwrap()) {
        assert!(*e <= g + 1e-12);
    }
}

#[test]
fn widths_shrink_with_dimension() {
    let t = transition_widths(0.05, &[10, 40, 160]).unwrap();
    for col in ["width_r_sweep", "width_main"] {
        let w = t.numbers(col).unwrap();
        assert!(w.windows(2).all(|w| w[1] < w[0]), "{col}: {w:?}");
    }
}
