use std::f64::consts::PI;

use casimir::boundary_modes::{self, ModeSpec, Plate, Polarization, Species};
use casimir::correlators::{corr_bb, corr_ee, e2_minus_b2};
use casimir::pressure::{net_pressure, side_force, three_plate_force};
use casimir::specfun::{eval_f, eval_g};
use casimir::spectral_oracle::{abel_f, abel_g, AbelSumParams};
use casimir::{Setup, SetupKind, Side, ThreePlateConfig};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = SetupKind> {
    prop_oneof![Just(SetupKind::ConductorConductor), Just(SetupKind::ConductorPermeable)]
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs())
}

proptest! {
    #[test]
    fn f_reflection(xi in 1e-4f64..PI / 2.0) {
        let a = eval_f(xi).unwrap().value;
        let b = eval_f(PI - xi).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn g_antisymmetry(xi in 1e-4f64..PI / 2.0) {
        let a = eval_g(xi).unwrap().value;
        let b = eval_g(PI - xi).unwrap().value;
        prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn f_dominates_its_pole(xi in 1e-3f64..0.5) {
        // F - 3/8 xi^-4 = 1/120 + xi^2/126 + ... > 1/120
        let f = eval_f(xi).unwrap().value;
        prop_assert!(f - 0.375 / xi.powi(4) > 1.0 / 120.0 - 1e-9 * f);
    }

    #[test]
    fn correlators_scale_as_inverse_fourth_power(k in kind(), a in 0.01f64..100.0, t in 0.01f64..0.99) {
        let unit = Setup::new(k, 1.0).unwrap();
        let s = Setup::new(k, a).unwrap();
        let scale = a.powi(-4);
        let (ee, ee1) = (corr_ee(&s, t * a).unwrap(), corr_ee(&unit, t).unwrap());
        let (bb, bb1) = (corr_bb(&s, t * a).unwrap(), corr_bb(&unit, t).unwrap());
        for (x, y) in ee.components().into_iter().zip(ee1.components()) {
            prop_assert!(rel_close(x, y * scale, 1e-12));
        }
        for (x, y) in bb.components().into_iter().zip(bb1.components()) {
            prop_assert!(rel_close(x, y * scale, 1e-12));
        }
    }

    #[test]
    fn e2_minus_b2_is_trace_difference(k in kind(), a in 0.1f64..10.0, t in 0.05f64..0.95) {
        let s = Setup::new(k, a).unwrap();
        let z = t * a;
        let diff = corr_ee(&s, z).unwrap().trace() - corr_bb(&s, z).unwrap().trace();
        let direct = e2_minus_b2(&s, z).unwrap();
        prop_assert!((diff - direct).abs() <= 1e-12 * direct.abs().max(corr_ee(&s, z).unwrap().max_abs()));
    }

    #[test]
    fn pressure_ratio_is_minus_seven_eighths(a in 1e-3f64..1e3) {
        let cc = net_pressure(&Setup::conductor_conductor(a).unwrap()).net;
        let cp = net_pressure(&Setup::conductor_permeable(a).unwrap()).net;
        prop_assert!((cp / cc + 0.875).abs() <= 1e-14);
    }

    #[test]
    fn sign_contract(a in 1e-3f64..1e3) {
        prop_assert!(net_pressure(&Setup::conductor_conductor(a).unwrap()).net < 0.0);
        prop_assert!(net_pressure(&Setup::conductor_permeable(a).unwrap()).net > 0.0);
    }

    #[test]
    fn divergences_cancel_for_any_third_plate(k in kind(), a in 0.1f64..10.0, gap in 1e-3f64..1e6) {
        let c = ThreePlateConfig::matching(Setup::new(k, a).unwrap(), a + gap).unwrap();
        prop_assert!(three_plate_force(&c).divergences_cancel());
    }

    #[test]
    fn outer_face_weakens_with_distance(k in kind(), a in 0.1f64..10.0, gap in 1e-2f64..1e3, grow in 1.001f64..10.0) {
        let s = Setup::new(k, a).unwrap();
        let near = side_force(&ThreePlateConfig::matching(s, a + gap).unwrap(), Side::Right).finite_part;
        let far = side_force(&ThreePlateConfig::matching(s, a + gap * grow).unwrap(), Side::Right).finite_part;
        prop_assert!(far < near && far > 0.0);
    }

    #[test]
    fn mode_forces_are_normal(
        k in kind(),
        n in 0u32..=5,
        kx in -20.0f64..20.0,
        ky in -20.0f64..20.0,
        te in any::<bool>(),
    ) {
        let pol = if te { Polarization::TE } else { Polarization::TM };
        let setup = Setup::new(k, 1.0).unwrap();
        prop_assume!(kx.hypot(ky) > 1e-3);
        let spec = ModeSpec::new(setup, n, [kx, ky], pol).unwrap();
        let top = boundary_modes::species_for(setup.plate_kind(Plate::Top));
        prop_assert!(boundary_modes::max_tangential_force(&spec, Plate::Bottom, Species::Electric, 8) <= 1e-12);
        prop_assert!(boundary_modes::max_tangential_force(&spec, Plate::Top, top, 8) <= 1e-12);
        prop_assert!(boundary_modes::check_bc(&spec, Plate::Bottom, 8) <= 1e-12);
        prop_assert!(boundary_modes::check_bc(&spec, Plate::Top, 8) <= 1e-12);
    }

    #[test]
    fn cross_correlator_cancels_per_mode_pair(
        k in kind(),
        n in 0u32..=3,
        kx in -10.0f64..10.0,
        ky in -10.0f64..10.0,
        t in 0.01f64..0.99,
    ) {
        prop_assume!(kx.hypot(ky) > 1e-3);
        let setup = Setup::new(k, 1.0).unwrap();
        let m = boundary_modes::mode_eb_sum(&setup, n, [kx, ky], t).unwrap();
        prop_assert!(m.amax() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn abel_sums_match_closed_forms(xi in 0.3f64..PI - 0.3) {
        let p = AbelSumParams::default();
        prop_assert!((abel_f(xi, &p).unwrap().value - eval_f(xi).unwrap().value).abs() < 1e-6);
        prop_assert!((abel_g(xi, &p).unwrap().value - eval_g(xi).unwrap().value).abs() < 1e-6);
    }
}
