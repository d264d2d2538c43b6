mod common;

use proptest::prelude::*;

use singmin::connection::{
    closed_form_from_jets, covariant_second, has_closed_form, metricity_defect, pi, torsion, VectorField,
};
use singmin::jets::fd_jet_auto;
use singmin::{
    fd_jet, make_mesh, mean_curvature, mean_curvature_closed_form, Analytic, ConnectionKind, Error, ProfileFn,
    Rect, ScalarJet, SurfaceJet, SurfaceType, TranslationSurface, Vec3,
};

fn profile() -> impl Strategy<Value = ProfileFn> {
    prop_oneof![
        prop::collection::vec(-1.0..1.0f64, 1..5).prop_map(ProfileFn::polynomial),
        (-1.5..1.5f64, 0.2..2.0f64, -3.0..3.0f64)
            .prop_map(|(amp, freq, phase)| ProfileFn::analytic(Analytic::Sine { amp, freq, phase }).unwrap()),
        (0.3..2.0f64, -1.0..1.0f64)
            .prop_map(|(lambda, mu)| ProfileFn::analytic(Analytic::Catenary { lambda, mu }).unwrap()),
    ]
}

fn stype() -> impl Strategy<Value = SurfaceType> {
    prop::sample::select(SurfaceType::ALL.to_vec())
}

fn kind() -> impl Strategy<Value = ConnectionKind> {
    prop::sample::select(ConnectionKind::ALL.to_vec())
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| Vec3::new(a, b, c))
}

fn surface() -> impl Strategy<Value = TranslationSurface> {
    (stype(), profile(), profile()).prop_map(|(t, f, g)| TranslationSurface::new(t, f, g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_is_unit_and_orthogonal(s in surface(), a in -1.5..1.5f64, b in -1.5..1.5f64) {
        let jet = s.jet(a, b).unwrap();
        prop_assert!((jet.xi.norm() - 1.0).abs() < 1e-12);
        prop_assert!(jet.xi.dot(&jet.s1).abs() < 1e-12);
        prop_assert!(jet.xi.dot(&jet.s2).abs() < 1e-12);
        prop_assert!((jet.det() - jet.w * jet.w).abs() < 1e-10 * jet.det());
        // Orientation is σ1 × σ2.
        prop_assert!((jet.s1.cross(&jet.s2).normalize() - jet.xi).norm() < 1e-12);
    }

    #[test]
    fn normal_stays_orthogonal_with_fd_jets(s in surface(), a in -1.5..1.5f64, b in -1.5..1.5f64) {
        let f = fd_jet_auto(&s.f, a).unwrap();
        let g = fd_jet_auto(&s.g, b).unwrap();
        let jet = SurfaceJet::from_profiles(s.stype, a, b, &f, &g).unwrap();
        prop_assert!(jet.xi.dot(&jet.s1).abs() < 1e-10);
        prop_assert!(jet.xi.dot(&jet.s2).abs() < 1e-10);
    }

    #[test]
    fn translation_property(s in surface(), a in -1.5..1.5f64, a2 in -1.5..1.5f64,
                            b in -1.5..1.5f64, b2 in -1.5..1.5f64) {
        let d1 = s.position(a, b).unwrap() - s.position(a, b2).unwrap();
        let d2 = s.position(a2, b).unwrap() - s.position(a2, b2).unwrap();
        prop_assert!((d1 - d2).norm() < 1e-12 * (1.0 + d1.norm()));
    }

    #[test]
    fn generic_curvature_matches_closed_form(s in surface(), k in kind(), a in -1.5..1.5f64, b in -1.5..1.5f64) {
        let jet = s.jet(a, b).unwrap();
        let h = mean_curvature(k, &jet).unwrap().mean;
        if has_closed_form(s.stype, k) {
            let oracle = mean_curvature_closed_form(&s, k, a, b).unwrap();
            prop_assert!((h - oracle).abs() <= 1e-9 * (1.0 + h.abs()), "{h} vs {oracle}");
        } else {
            let is_unsupported = matches!(
                mean_curvature_closed_form(&s, k, a, b),
                Err(Error::UnsupportedPair { .. })
            );
            prop_assert!(is_unsupported);
        }
    }

    #[test]
    fn structural_identities(s in surface(), a in -1.5..1.5f64, b in -1.5..1.5f64) {
        let jet = s.jet(a, b).unwrap();
        let d = mean_curvature(ConnectionKind::SemiSymNonMetric, &jet).unwrap();
        let n = mean_curvature(ConnectionKind::SemiSymMetric, &jet).unwrap();
        let l = mean_curvature(ConnectionKind::LeviCivita, &jet).unwrap();
        prop_assert_eq!(l.h12, l.h21);
        prop_assert!((d.mean - l.mean).abs() < 1e-10);
        prop_assert!((n.mean - (l.mean - jet.xi.z)).abs() < 1e-10);
        prop_assert_eq!(d.levi, l.mean);
    }

    #[test]
    fn torsion_of_semi_symmetric_connections(x in vec3(), y in vec3(), p in vec3(), k in kind()) {
        let t = torsion(k, &VectorField::Constant(x), &VectorField::Constant(y), &p);
        let expected = if k == ConnectionKind::LeviCivita { Vec3::zeros() } else { pi(&y) * x - pi(&x) * y };
        prop_assert!((t - expected).norm() < 1e-12);
    }

    #[test]
    fn metricity(x in vec3(), y in vec3(), z in vec3()) {
        prop_assert!(metricity_defect(ConnectionKind::LeviCivita, &x, &y, &z).abs() < 1e-12);
        prop_assert!(metricity_defect(ConnectionKind::SemiSymMetric, &x, &y, &z).abs() < 1e-12);
        let expected = -pi(&y) * x.dot(&z) - pi(&z) * x.dot(&y);
        prop_assert!((metricity_defect(ConnectionKind::SemiSymNonMetric, &x, &y, &z) - expected).abs() < 1e-12);
    }

    #[test]
    fn fd_jets_match_analytic(p in profile(), s in -1.5..1.5f64) {
        let exact = p.eval_jet(s, 3).unwrap();
        let fd = fd_jet_auto(&p, s).unwrap();
        prop_assert!((fd.d1 - exact.d1).abs() <= 1e-6 * (1.0 + exact.d1.abs()));
        prop_assert!((fd.d2 - exact.d2).abs() <= 1e-4 * (1.0 + exact.d2.abs()));
    }

    #[test]
    fn eval_is_deterministic(p in profile(), s in -1.5..1.5f64) {
        let a = p.eval_jet(s, 3).unwrap();
        let b = p.eval_jet(s, 3).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.d2.to_bits(), b.d2.to_bits());
    }
}

#[test]
fn closed_form_jets_agree_with_surface_pipeline() {
    let f = ScalarJet::new(0.3, 0.7, -1.1, 0.0);
    let g = ScalarJet::new(-0.2, -0.4, 0.9, 0.0);
    for t in SurfaceType::ALL {
        let jet = SurfaceJet::from_profiles(t, 0.5, 0.25, &f, &g).unwrap();
        for k in ConnectionKind::ALL {
            if let Ok(oracle) = closed_form_from_jets(t, k, &f, &g) {
                let h = mean_curvature(k, &jet).unwrap().mean;
                assert!((h - oracle).abs() < 1e-14, "{t:?} {k:?}");
            }
        }
    }
}

#[test]
fn flat_plane_connection_tables() {
    let plane = TranslationSurface::new(SurfaceType::TypeZ, ProfileFn::constant(0.0), ProfileFn::constant(0.0));
    let jet = plane.jet(0.3, -0.2).unwrap();
    let nabla = covariant_second(ConnectionKind::SemiSymMetric, &jet);
    assert_eq!(nabla[0][0], Vec3::new(0.0, 0.0, -1.0));
    assert_eq!(nabla[1][1], Vec3::new(0.0, 0.0, -1.0));
    assert_eq!(nabla[0][1], Vec3::zeros());
    let y = TranslationSurface::new(SurfaceType::TypeY, ProfileFn::constant(0.0), ProfileFn::constant(0.0));
    assert_eq!(y.jet(0.0, 0.0).unwrap().xi, Vec3::new(0.0, -1.0, 0.0));
}

#[test]
fn quadratic_profile_jet() {
    let s = TranslationSurface::new(
        SurfaceType::TypeZ,
        ProfileFn::polynomial(vec![0.0, 0.0, 1.0]),
        ProfileFn::constant(0.0),
    );
    let jet = s.jet(1.0, 0.0).unwrap();
    assert_eq!(jet.s1, Vec3::new(1.0, 0.0, 2.0));
    assert_eq!(jet.g11, 5.0);
    assert!((jet.xi - Vec3::new(-2.0, 0.0, 1.0) / 5f64.sqrt()).norm() < 1e-15);
    let fd = fd_jet(&s.f, 1.0, 1e-4).unwrap();
    assert!((fd.d2 - 2.0).abs() < 1e-6);
}

#[test]
fn mesh_vertices_lie_on_surface() {
    let s = TranslationSurface::new(
        SurfaceType::TypeZ,
        ProfileFn::constant(0.0),
        ProfileFn::analytic(Analytic::LogCos { scale: -0.5, freq: 2.0, phase: 0.0, offset: 0.0 }).unwrap(),
    );
    let region = Rect::from_bounds((0.5, 2.0), (-0.7, 0.7)).unwrap();
    let mesh = make_mesh(&s, &region, 32, 32).unwrap();
    assert_eq!(mesh.vertices.len(), 1024);
    assert_eq!(mesh.triangles.len(), 2 * 31 * 31);
    for v in &mesh.vertices {
        let z = s.g.value(v.y).unwrap();
        assert!((v.z - z).abs() < 1e-12);
    }
    let flat = TranslationSurface::new(SurfaceType::TypeZ, ProfileFn::constant(0.0), ProfileFn::constant(0.0));
    let m = make_mesh(&flat, &Rect::from_bounds((0.0, 1.0), (0.0, 1.0)).unwrap(), 2, 2).unwrap();
    assert_eq!((m.vertices.len(), m.triangles.len()), (4, 2));
    assert!(m.normals.iter().all(|n| *n == Vec3::z()));
    let edge = Rect::from_bounds((0.5, 2.0), (-0.7, 0.8)).unwrap();
    assert!(matches!(make_mesh(&s, &edge, 4, 4), Err(Error::Domain { .. })));
}
