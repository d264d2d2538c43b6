#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use singmin::jets::ProfileKind;
use singmin::solutions::ode::D2Source;
use singmin::{Analytic, Family, Interval, ProfileFn, Rect, SolutionSpec, SurfaceType, TranslationSurface};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random smooth profile on the whole line: a cubic or a sine wave.
pub fn random_profile(rng: &mut ChaCha8Rng) -> ProfileFn {
    if rng.gen_bool(0.5) {
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        ProfileFn::polynomial(c)
    } else {
        ProfileFn::analytic(Analytic::Sine {
            amp: rng.gen_range(-1.5..1.5),
            freq: rng.gen_range(0.2..2.0),
            phase: rng.gen_range(-3.0..3.0),
        })
        .unwrap()
    }
}

pub fn random_surface(rng: &mut ChaCha8Rng, stype: SurfaceType) -> TranslationSurface {
    TranslationSurface::new(stype, random_profile(rng), random_profile(rng))
}

/// Scherk's surface `z = ln cos y - ln cos x` as a translation surface.
pub fn scherk() -> TranslationSurface {
    let logcos = |scale: f64| {
        ProfileFn::analytic(Analytic::LogCos {
            scale,
            freq: 1.0,
            phase: 0.0,
            offset: 0.0,
        })
        .unwrap()
    };
    TranslationSurface::new(SurfaceType::TypeZ, logcos(-1.0), logcos(1.0))
}

/// The same tabulated profile with its second derivative taken from the
/// interpolant rather than the ODE.
pub fn with_interpolated_d2(profile: &ProfileFn) -> ProfileFn {
    match profile.kind() {
        ProfileKind::Tabulated(t) => ProfileFn::tabulated(t.with_d2_source(D2Source::Interpolant)),
        _ => profile.clone(),
    }
}

/// The main profile of every catalog default together with the interval
/// it is sampled on.
pub fn catalog_profiles() -> Vec<(String, ProfileFn, Interval)> {
    let mut out = Vec::new();
    for fam in Family::ALL {
        let sol = SolutionSpec::new(fam).build().unwrap();
        let (p, second) = sol.main_profile();
        let range = if second { sol.region.s2 } else { sol.region.s1 };
        out.push((fam.name().to_string(), p.clone(), range));
    }
    out
}

/// Interior sample points strictly inside `iv`, shrunk by `inset` on each side.
pub fn interior(iv: Interval, inset: f64, n: usize) -> Vec<f64> {
    let lo = iv.lo + inset * iv.width();
    let hi = iv.hi - inset * iv.width();
    (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).collect()
}

pub fn region(s1: (f64, f64), s2: (f64, f64)) -> Rect {
    Rect::from_bounds(s1, s2).unwrap()
}
