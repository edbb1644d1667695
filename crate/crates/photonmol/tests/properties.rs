//! Property-based tests for the cheap algebraic layers: serialization,
//! phase normalization, basis indexing, ladder matrix elements and the
//! weak-drive scaling laws. Master-equation solves are deliberately kept
//! out of the proptest loops; the heavier numerical invariants live in the
//! validation suite and the acceptance tests.

use photonmol::hilbert::{annihilation_a, make_space};
use photonmol::model::SystemParams;
use photonmol::sweep::{Axis, SweepParam};
use photonmol::weakdrive::{g2_weakdrive, steady_amplitudes};
use proptest::prelude::*;

const TAU: f64 = std::f64::consts::TAU;

fn arb_params() -> impl Strategy<Value = SystemParams> {
    (
        -5.0..5.0f64,
        -5.0..5.0f64,
        0.0..3.0f64,
        0.0..3.0f64,
        (0.0..TAU, 0.0..0.5f64, 0.0..0.5f64),
        (0.1..2.0f64, 0.0..0.2f64),
        (1usize..8, 1usize..8),
    )
        .prop_map(
            |(delta_a, delta_b, g, j, (theta, e_a, e_b), (kappa_b, gamma), (n_max_a, n_max_b))| {
                SystemParams {
                    delta_a,
                    delta_b,
                    g,
                    j,
                    e_a,
                    e_b,
                    theta,
                    kappa_a: 1.0,
                    kappa_b,
                    gamma,
                    n_max_a,
                    n_max_b,
                }
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn params_survive_json_round_trip(p in arb_params()) {
        let json = serde_json::to_string(&p).unwrap();
        let back: SystemParams = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn theta_normalizes_into_principal_range(theta in -1e6..1e6f64) {
        let p = SystemParams { theta, ..Default::default() }.validated().unwrap();
        prop_assert!((0.0..TAU).contains(&p.theta));
        // shifting the input by a full turn lands on the same phase
        let q = SystemParams { theta: theta + TAU, ..Default::default() }.validated().unwrap();
        let d = (p.theta - q.theta).abs();
        prop_assert!(d.min(TAU - d) < 1e-8, "θ {} vs {}", p.theta, q.theta);
    }

    #[test]
    fn basis_index_round_trips(n_a in 1usize..8, n_b in 1usize..8) {
        let space = make_space(n_a, n_b).unwrap();
        prop_assert_eq!(space.dim, (n_a + 1) * (n_b + 1) * 2);
        for i in 0..space.dim {
            let (m, n, x) = space.state_of(i);
            prop_assert!(m <= n_a && n <= n_b && x < 2);
            prop_assert_eq!(space.index_of(m, n, x), i);
        }
    }

    #[test]
    fn ladder_elements_are_sqrt_m(n_a in 1usize..7, n_b in 1usize..4) {
        let space = make_space(n_a, n_b).unwrap();
        let a = annihilation_a(space);
        for m in 1..=n_a {
            let i = space.index_of(m - 1, 0, 0);
            let j = space.index_of(m, 0, 0);
            let elem = a.matrix[[i, j]];
            prop_assert!((elem.re - (m as f64).sqrt()).abs() < 1e-14);
            prop_assert!(elem.im == 0.0);
        }
    }

    #[test]
    fn weakdrive_amplitudes_scale_linearly(
        g in 0.2..3.0f64,
        j in 0.2..3.0f64,
        theta in 0.0..TAU,
        lambda in 0.25..4.0f64,
    ) {
        let base = SystemParams { g, j, theta, e_a: 0.01, e_b: 0.004, ..Default::default() };
        let scaled = SystemParams { e_a: base.e_a * lambda, e_b: base.e_b * lambda, ..base };
        let a1 = steady_amplitudes(&base).unwrap();
        let a2 = steady_amplitudes(&scaled).unwrap();
        // one-photon amplitudes are linear, two-photon quadratic, in drive
        let lin = a2.c[1].norm() / a1.c[1].norm();
        prop_assert!((lin - lambda).abs() < 1e-9 * lambda, "linear ratio {lin} vs {lambda}");
        let quad = a2.c[4].norm() / a1.c[4].norm();
        prop_assert!((quad - lambda * lambda).abs() < 1e-9 * lambda * lambda);
        // so the normalized correlation is drive-independent
        let g2_1 = g2_weakdrive(&a1).unwrap();
        let g2_2 = g2_weakdrive(&a2).unwrap();
        prop_assert!((g2_1 - g2_2).abs() <= 1e-9 * g2_1.abs().max(1e-300));
    }

    #[test]
    fn single_drive_statistics_ignore_phase(
        g in 0.2..3.0f64,
        j in 0.2..3.0f64,
        theta in 0.0..TAU,
    ) {
        // with one drive the phase is a global gauge choice
        let with_phase = SystemParams { g, j, theta, e_a: 0.01, e_b: 0.0, ..Default::default() };
        let no_phase = SystemParams { theta: 0.0, ..with_phase };
        let g2_a = g2_weakdrive(&steady_amplitudes(&with_phase).unwrap()).unwrap();
        let g2_b = g2_weakdrive(&steady_amplitudes(&no_phase).unwrap()).unwrap();
        prop_assert!((g2_a - g2_b).abs() <= 1e-9 * g2_b.abs().max(1e-300));
    }

    #[test]
    fn axis_grids_hit_endpoints_and_stay_sorted(
        from in -10.0..10.0f64,
        width in 0.0..20.0f64,
        points in 2usize..50,
    ) {
        let axis = Axis { param: SweepParam::Delta, from, to: from + width, points };
        let spec = photonmol::sweep::SweepSpec {
            base: SystemParams::default(),
            axes: vec![axis],
            engine: photonmol::sweep::Engine::Weakdrive,
            convergence_tol: 0.0,
        };
        let rows = photonmol::sweep::run_sweep(&spec).unwrap().rows;
        prop_assert_eq!(rows.len(), points);
        prop_assert_eq!(rows[0].axis_values[0], from);
        prop_assert_eq!(rows[points - 1].axis_values[0], from + width);
        for w in rows.windows(2) {
            prop_assert!(w[0].axis_values[0] <= w[1].axis_values[0]);
        }
    }
}
