mod common;

use proptest::prelude::*;

use singmin::singular::{jet_residual, potential_energy, ALPHA_MIN};
use singmin::{Analytic, Axis, ConnectionKind, Error, ProfileFn, Rect, SingularConfig, SurfaceType, TranslationSurface, Vec3};

fn axis() -> impl Strategy<Value = Axis> {
    prop::sample::select(vec![Axis::X, Axis::Y, Axis::Z])
}

fn kind() -> impl Strategy<Value = ConnectionKind> {
    prop::sample::select(ConnectionKind::ALL.to_vec())
}

fn stype() -> impl Strategy<Value = SurfaceType> {
    prop::sample::select(SurfaceType::ALL.to_vec())
}

fn cubic() -> impl Strategy<Value = ProfileFn> {
    prop::collection::vec(-1.0..1.0f64, 4).prop_map(ProfileFn::polynomial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // Reversing u flips the sign of the right-hand side and leaves 2H
    // alone. ⟨σ, u⟩ and ⟨σ, -u⟩ cannot both be positive on one surface, so
    // the second residual is taken on the rigid translate σ - 2⟨σ, u⟩u,
    // which has the same derivatives and the mirrored height.
    #[test]
    fn reversing_u_flips_rhs(t in stype(), f in cubic(), g in cubic(), k in kind(), ax in axis(),
                             alpha in -3.0..3.0f64, a in -1.0..1.0f64, b in -1.0..1.0f64) {
        prop_assume!(alpha.abs() > 1e-3);
        let s = TranslationSurface::new(t, f, g);
        let cfg = SingularConfig::axis(alpha, ax, k).unwrap();
        let mut jet = s.jet(a, b).unwrap();
        let height = jet.pos.dot(&cfg.u());
        prop_assume!(height.abs() > 1e-3);
        if height < 0.0 {
            jet.pos -= 2.0 * height * cfg.u();
        }
        let here = jet_residual(&jet, &cfg).unwrap();
        let mut mirrored = jet;
        mirrored.pos -= 2.0 * jet.pos.dot(&cfg.u()) * cfg.u();
        let there = jet_residual(&mirrored, &cfg.flipped()).unwrap();
        prop_assert_eq!(here.lhs, there.lhs);
        prop_assert!((here.rhs + there.rhs).abs() < 1e-10 * (1.0 + here.rhs.abs()));
        prop_assert!((here.residual + there.residual - 2.0 * here.lhs).abs() < 1e-10 * (1.0 + here.lhs.abs()));
    }

    #[test]
    fn tiny_alpha_is_rejected(alpha in -1e-15..1e-15f64, ax in axis(), k in kind()) {
        prop_assume!(alpha.abs() < ALPHA_MIN);
        let rejected = matches!(SingularConfig::axis(alpha, ax, k), Err(Error::Constraint(_)));
        prop_assert!(rejected);
    }

    #[test]
    fn halfspace_is_enforced(f in cubic(), a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let s = TranslationSurface::new(SurfaceType::TypeZ, f, ProfileFn::constant(0.0));
        let cfg = SingularConfig::axis(1.0, Axis::Z, ConnectionKind::LeviCivita).unwrap();
        let jet = s.jet(a, b).unwrap();
        let r = jet_residual(&jet, &cfg);
        if jet.pos.z > 0.0 {
            prop_assert!(r.is_ok());
        } else {
            let violated = matches!(r, Err(Error::HalfspaceViolation { .. }));
            prop_assert!(violated);
        }
    }
}

#[test]
fn non_unit_direction_rejected() {
    assert!(matches!(
        SingularConfig::new(1.0, Vec3::new(1.0, 1.0, 0.0), ConnectionKind::LeviCivita),
        Err(Error::Constraint(_))
    ));
    assert!(matches!(
        SingularConfig::axis(0.0, Axis::X, ConnectionKind::LeviCivita),
        Err(Error::Constraint(_))
    ));
}

#[test]
fn energy_converges_monotonically_with_order() {
    let patches = [
        (
            TranslationSurface::new(
                SurfaceType::TypeZ,
                ProfileFn::analytic(Analytic::Catenary { lambda: 1.0, mu: 0.0 }).unwrap(),
                ProfileFn::constant(0.0),
            ),
            Rect::from_bounds((-1.0, 1.0), (-1.0, 1.0)).unwrap(),
            Vec3::z(),
            1.0,
        ),
        (
            TranslationSurface::new(
                SurfaceType::TypeZ,
                ProfileFn::polynomial(vec![2.0, 0.3, 0.4]),
                ProfileFn::analytic(Analytic::Sine { amp: 0.5, freq: 1.5, phase: 0.2 }).unwrap(),
            ),
            Rect::from_bounds((-1.0, 1.0), (-1.0, 1.0)).unwrap(),
            Vec3::z(),
            2.5,
        ),
    ];
    for (surface, region, u, alpha) in &patches {
        let energy = |k| potential_energy(surface, *u, *alpha, region, k).unwrap();
        let diffs: Vec<f64> = [2, 4, 8]
            .iter()
            .map(|&k| (energy(2 * k) - energy(k)).abs())
            .collect();
        for w in diffs.windows(2) {
            assert!(w[1] < w[0] || w[1] < 1e-13, "{diffs:?}");
        }
    }
}
