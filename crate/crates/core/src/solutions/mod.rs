//! Constructors for every solution family: closed forms, ODE-integrated
//! profiles and quadrature-defined profiles, packaged as surfaces together
//! with the equation they solve.

pub mod ode;
pub mod quadrature;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::connection::ConnectionKind;
use crate::error::{Error, Result};
use crate::jets::{Analytic, Interval, ProfileFn, ProfileKind};
use crate::singular::{Axis, SingularConfig};
use crate::surface::{Rect, SurfaceType, TranslationSurface};

use ode::{OdeProfile, OdeSolveConfig, SecondOrderOde};
use quadrature::{QuadFamily, QuadProfile};

/// `(1/λ) cosh(λ s + μ)`.
pub fn make_catenary(lambda: f64, mu: f64) -> Result<ProfileFn> {
    ProfileFn::analytic(Analytic::Catenary { lambda, mu })
}

/// `z = c1 - ½ ln|cos(2y + c2)| + c3` on the branch around `y = -c2/2`.
pub fn make_logcos_cylinder(c1: f64, c2: f64, c3: f64) -> Result<TranslationSurface> {
    let g = ProfileFn::analytic(Analytic::LogCos {
        scale: -0.5,
        freq: 2.0,
        phase: c2,
        offset: c3,
    })?;
    Ok(TranslationSurface::new(SurfaceType::TypeZ, ProfileFn::constant(c1), g))
}

/// `y = c1 ± ½ atan(sqrt(e^{4z} - c2²) / c2) + c3` for `z > ln|c2| / 2`.
pub fn make_arctan_cylinder(c1: f64, c2: f64, c3: f64, sign: f64) -> Result<TranslationSurface> {
    if c2 == 0.0 {
        return Err(Error::Constraint("c₂ ≠ 0 is required".into()));
    }
    let g = ProfileFn::analytic(Analytic::Arctan { c2, c3, sign })?;
    Ok(TranslationSurface::new(SurfaceType::TypeY, ProfileFn::constant(c1), g))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha.abs() < crate::singular::ALPHA_MIN {
        return Err(Error::Constraint(format!("α ≠ 0 is required (got {alpha})")));
    }
    Ok(())
}

fn solve_abel(ode: SecondOrderOde, x0: f64, u0: f64, x_end: f64, cfg: &OdeSolveConfig) -> Result<ProfileFn> {
    check_alpha(ode.alpha())?;
    if x0 == x_end {
        return Err(Error::BadParam("empty integration interval".into()));
    }
    Ok(ProfileFn::tabulated(OdeProfile::solve(ode, x0, 0.0, u0, x_end, cfg)?))
}

/// Profile `f` with `f(x0) = 0`, `f'(x0) = u0` of the cylinders
/// `z = f(x) + c4 + c5 y` that are singular minimal for the metric
/// connection and `u = e_x`.
pub fn solve_abel_z(alpha: f64, c5: f64, x0: f64, u0: f64, x_end: f64, cfg: &OdeSolveConfig) -> Result<ProfileFn> {
    solve_abel(SecondOrderOde::AbelTypeZ { alpha, c5 }, x0, u0, x_end, cfg)
}

/// As [`solve_abel_z`] for the cylinders `y = f(x) + c4 + c5 z`.
pub fn solve_abel_y(alpha: f64, c5: f64, x0: f64, u0: f64, x_end: f64, cfg: &OdeSolveConfig) -> Result<ProfileFn> {
    solve_abel(SecondOrderOde::AbelTypeY { alpha, c5 }, x0, u0, x_end, cfg)
}

/// Profile `g` of the cylinders `x = c1 + g(z)`, integrated from
/// `g(z0) = g0`, `g'(z0) = gp0`. Trajectories with `g'' ≡ 0` are rejected.
pub fn solve_autonomous_x(
    alpha: f64,
    c1: f64,
    z0: f64,
    g0: f64,
    gp0: f64,
    z_end: f64,
    cfg: &OdeSolveConfig,
) -> Result<ProfileFn> {
    check_alpha(alpha)?;
    if z0 == z_end {
        return Err(Error::BadParam("empty integration interval".into()));
    }
    if !(c1 + g0 > 0.0) {
        return Err(Error::HalfspaceViolation { height: c1 + g0 });
    }
    let ode = SecondOrderOde::AutonomousTypeX { alpha, c1 };
    let profile = OdeProfile::solve(ode, z0, g0, gp0, z_end, cfg)?;
    let dom = profile.domain();
    let flat = dom.linspace(64).into_iter().all(|z| {
        profile
            .eval(z, 2)
            .map(|j| j.d2.abs() < 1e-12)
            .unwrap_or(false)
    });
    if flat {
        return Err(Error::FlatSolution);
    }
    Ok(ProfileFn::tabulated(profile))
}

/// Quadrature-defined profile of `family` on a valid interval of length `span`.
pub fn make_quadrature_profile(family: QuadFamily, sign: f64, span: f64) -> Result<ProfileFn> {
    Ok(ProfileFn::quadrature(QuadProfile::new(family, sign, span)?))
}

/// Largest `|(f')² - c (f + shift)^(2α) - c4|` over `samples` points of
/// the profile domain; zero along exact first integrals.
pub fn first_integral_defect(
    profile: &ProfileFn,
    alpha: f64,
    c: f64,
    shift: f64,
    c4: f64,
    samples: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in profile.domain().linspace(samples.max(2)) {
        let j = profile.eval_jet(s, 1)?;
        let d = j.d1 * j.d1 - c * (j.value + shift).powf(2.0 * alpha) - c4;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// Conservation defect `|(f')² - c (f + g0)^(2α) + 1|` of the
/// Emden–Fowler first integral, maximised over 200 samples.
pub fn emden_fowler_residual(profile: &ProfileFn, alpha: f64, c: f64, g0: f64) -> Result<f64> {
    first_integral_defect(profile, alpha, c, g0, -1.0, 200)
}

/// How a family's profile is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    ClosedForm,
    Ode,
    Quadrature,
}

/// The solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Catenary,
    LogCosCylinder,
    AbelZ,
    ArctanCylinder,
    AbelY,
    AutonomousX,
    EmdenFowler,
    QuadZ,
    QuadY,
    QuadX,
}

/// Static description of a family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub surface: &'static str,
    pub description: &'static str,
    pub construction: Construction,
    pub connection: ConnectionKind,
    pub u: Axis,
    pub constraints: &'static [&'static str],
    pub defaults: &'static [(&'static str, f64)],
    pub signed: bool,
}

const ABEL_DEFAULTS_Z: &[(&str, f64)] = &[
    ("alpha", 1.0),
    ("c4", 0.0),
    ("c5", 0.0),
    ("x0", 1.0),
    ("u0", 0.0),
    ("x_end", 3.0),
];
const ABEL_DEFAULTS_Y: &[(&str, f64)] = &[
    ("alpha", 1.0),
    ("c4", 0.0),
    ("c5", 0.5),
    ("x0", 1.0),
    ("u0", 0.0),
    ("x_end", 3.0),
];
const QUAD_DEFAULTS: &[(&str, f64)] = &[
    ("alpha", 1.0),
    ("c1", 0.0),
    ("c2", 0.5),
    ("c3", 1.0),
    ("span", 2.0),
];

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Catenary,
        Family::LogCosCylinder,
        Family::AbelZ,
        Family::ArctanCylinder,
        Family::AbelY,
        Family::AutonomousX,
        Family::EmdenFowler,
        Family::QuadZ,
        Family::QuadY,
        Family::QuadX,
    ];

    pub fn info(self) -> FamilyInfo {
        use ConnectionKind::*;
        match self {
            Family::Catenary => FamilyInfo {
                name: "catenary",
                aliases: &[],
                surface: "z = f(x)",
                description: "cylinder over the catenary f = (1/λ) cosh(λx + μ); classical singular minimal with α = 1, u = e_z",
                construction: Construction::ClosedForm,
                connection: LeviCivita,
                u: Axis::Z,
                constraints: &["λ ≠ 0", "λ > 0 keeps the surface above z = 0"],
                defaults: &[("lambda", 1.0), ("mu", 0.0)],
                signed: false,
            },
            Family::LogCosCylinder => FamilyInfo {
                name: "logcos_cylinder",
                aliases: &["thm1_logcos"],
                surface: "z = f(x) + g(y)",
                description: "f = c1, g = -½ ln|cos(2y + c2)| + c3; singular minimal and minimal for the metric connection, any α",
                construction: Construction::ClosedForm,
                connection: SemiSymMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "x > 0", "|2y + c2| < π/2"],
                defaults: &[("alpha", 2.0), ("c1", 0.0), ("c2", 0.0), ("c3", 0.0)],
                signed: false,
            },
            Family::AbelZ => FamilyInfo {
                name: "abel_z",
                aliases: &["thm1_abel", "abel_thm1"],
                surface: "z = f(x) + g(y)",
                description: "g = c4 + c5 y, u = f' solves an Abel equation of the first kind; integrated numerically",
                construction: Construction::Ode,
                connection: SemiSymMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "0 < x0, x_end"],
                defaults: ABEL_DEFAULTS_Z,
                signed: false,
            },
            Family::ArctanCylinder => FamilyInfo {
                name: "arctan_cylinder",
                aliases: &["thm2_arctan"],
                surface: "y = f(x) + g(z)",
                description: "f = c1, g = ±½ atan(sqrt(e^{4z} - c2²)/c2) + c3; singular minimal and minimal for the metric connection, any α",
                construction: Construction::ClosedForm,
                connection: SemiSymMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "c₂ ≠ 0", "x > 0", "z > ln|c2|/2"],
                defaults: &[("alpha", 2.0), ("c1", 0.0), ("c2", 1.0), ("c3", 0.0)],
                signed: true,
            },
            Family::AbelY => FamilyInfo {
                name: "abel_y",
                aliases: &["thm2_abel", "abel_thm2"],
                surface: "y = f(x) + g(z)",
                description: "g = c4 + c5 z, u = f' solves an Abel equation of the first kind; integrated numerically",
                construction: Construction::Ode,
                connection: SemiSymMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "0 < x0, x_end"],
                defaults: ABEL_DEFAULTS_Y,
                signed: false,
            },
            Family::AutonomousX => FamilyInfo {
                name: "autonomous_x",
                aliases: &["thm3_autonomous"],
                surface: "x = f(y) + g(z)",
                description: "f = c1, g'' = (α/(c1 + g) - 2g')(1 + g'²) with g'' ≠ 0; integrated numerically",
                construction: Construction::Ode,
                connection: SemiSymMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "c1 + g > 0"],
                defaults: &[
                    ("alpha", 1.0),
                    ("c1", 0.0),
                    ("z0", 0.0),
                    ("g0", 1.0),
                    ("gp0", 0.0),
                    ("z_end", 2.0),
                ],
                signed: false,
            },
            Family::EmdenFowler => FamilyInfo {
                name: "emden_fowler",
                aliases: &["thm3_emden_fowler", "thm3_quad"],
                surface: "x = f(y) + g(z)",
                description: "g = c2, y = ±∫ [c3 (f + c2)^{2α} + c4]^{-1/2} df; f solves an Emden–Fowler equation (c4 = -1)",
                construction: Construction::Quadrature,
                connection: SemiSymMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "c₃ ≠ 0", "f + c2 > 0", "c4 = -1 for singular minimality"],
                defaults: &[
                    ("alpha", 0.5),
                    ("c2", 0.0),
                    ("c3", 2.0),
                    ("c4", -1.0),
                    ("span", 2.0),
                ],
                signed: true,
            },
            Family::QuadZ => FamilyInfo {
                name: "quad_z",
                aliases: &["thm4_quad"],
                surface: "z = f(x) + g(y)",
                description: "g = c1 + c2 y, f = ±|c3| sqrt(1 + c2²) ∫ (x^{2α} - c3²)^{-1/2} dx; singular minimal for the non-metric connection",
                construction: Construction::Quadrature,
                connection: SemiSymNonMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "c₃ ≠ 0", "x^{2α} > c3²"],
                defaults: QUAD_DEFAULTS,
                signed: true,
            },
            Family::QuadY => FamilyInfo {
                name: "quad_y",
                aliases: &["thm5_quad"],
                surface: "y = f(x) + g(z)",
                description: "g = c1 + c2 z, f = ±|c3| sqrt(1 + c2²) ∫ x^{-α} (1 - c3² x^{-2α})^{-1/2} dx; singular minimal for the non-metric connection",
                construction: Construction::Quadrature,
                connection: SemiSymNonMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "c₃ ≠ 0", "c3² x^{-2α} < 1"],
                defaults: QUAD_DEFAULTS,
                signed: true,
            },
            Family::QuadX => FamilyInfo {
                name: "quad_x",
                aliases: &["thm6_quad"],
                surface: "x = f(y) + g(z)",
                description: "f = c1, z = ±∫ [c2² (c1 + g)^{2α} - 1]^{-1/2} dg; singular minimal for the non-metric connection",
                construction: Construction::Quadrature,
                connection: SemiSymNonMetric,
                u: Axis::X,
                constraints: &["α ≠ 0", "c₂ ≠ 0", "c2² (c1 + g)^{2α} > 1"],
                defaults: &[("alpha", 1.0), ("c1", 0.0), ("c2", 1.0), ("span", 2.0)],
                signed: true,
            },
        }
    }

    pub fn name(self) -> &'static str {
        self.info().name
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| {
                let info = f.info();
                info.name == key || info.aliases.contains(&key.as_str())
            })
            .ok_or_else(|| Error::Parse(format!("unknown family '{s}'")))
    }
}

/// A family with explicit parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpec {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
    pub sign: f64,
    /// Verification region; defaults to a family-specific interior rectangle.
    pub region: Option<Rect>,
    pub ode: OdeSolveConfig,
}

impl SolutionSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            params: BTreeMap::new(),
            sign: 1.0,
            region: None,
            ode: OdeSolveConfig::default(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_sign(mut self, sign: f64) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_region(mut self, region: Rect) -> Self {
        self.region = Some(region);
        self
    }

    pub fn with_ode(mut self, cfg: OdeSolveConfig) -> Self {
        self.ode = cfg;
        self
    }

    /// Explicit value or the family default.
    pub fn param(&self, key: &str) -> f64 {
        self.params.get(key).copied().unwrap_or_else(|| {
            self.family
                .info()
                .defaults
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .unwrap_or(f64::NAN)
        })
    }

    /// Reject unknown names, non-finite values and bad signs.
    pub fn validate(&self) -> Result<()> {
        let info = self.family.info();
        for (k, v) in &self.params {
            if !info.defaults.iter().any(|(d, _)| d == k) {
                let known: Vec<_> = info.defaults.iter().map(|(d, _)| *d).collect();
                return Err(Error::Parse(format!(
                    "unknown parameter '{k}' for family {} (known: {})",
                    info.name,
                    known.join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(Error::Constraint(format!("parameter {k} must be finite")));
            }
        }
        if self.sign.abs() != 1.0 {
            return Err(Error::Constraint(format!("sign must be +1 or -1 (got {})", self.sign)));
        }
        if info.defaults.iter().any(|(k, _)| *k == "alpha") {
            check_alpha(self.param("alpha"))?;
        }
        self.ode.validate()
    }

    pub fn build(&self) -> Result<Solution> {
        self.validate()?;
        let p = |k: &str| self.param(k);
        let info = self.family.info();
        let alpha = if self.family == Family::Catenary { 1.0 } else { p("alpha") };
        let quad_span = || p("span");
        let (surface, default_region) = match self.family {
            Family::Catenary => {
                if p("lambda") == 0.0 {
                    return Err(Error::Constraint("λ ≠ 0 is required".into()));
                }
                let f = make_catenary(p("lambda"), p("mu"))?;
                let s = TranslationSurface::new(SurfaceType::TypeZ, f, ProfileFn::constant(0.0));
                (s, Rect::from_bounds((-1.0, 1.0), (-1.0, 1.0))?)
            }
            Family::LogCosCylinder => {
                let s = make_logcos_cylinder(p("c1"), p("c2"), p("c3"))?;
                let mid = -0.5 * p("c2");
                (s, Rect::from_bounds((0.5, 2.0), (mid - 0.7, mid + 0.7))?)
            }
            Family::ArctanCylinder => {
                let s = make_arctan_cylinder(p("c1"), p("c2"), p("c3"), self.sign)?;
                let zb = 0.5 * p("c2").abs().ln();
                (s, Rect::from_bounds((0.5, 2.0), (zb + 0.05, zb + 2.0))?)
            }
            Family::AbelZ | Family::AbelY => {
                let (x0, x_end) = (p("x0"), p("x_end"));
                if !(x0 > 0.0 && x_end > 0.0) {
                    return Err(Error::BadParam(format!(
                        "interval [{x0}, {x_end}] must lie in x > 0 (pole at x = 0, halfspace x > 0)"
                    )));
                }
                let (f, stype) = if self.family == Family::AbelZ {
                    (solve_abel_z(alpha, p("c5"), x0, p("u0"), x_end, &self.ode)?, SurfaceType::TypeZ)
                } else {
                    (solve_abel_y(alpha, p("c5"), x0, p("u0"), x_end, &self.ode)?, SurfaceType::TypeY)
                };
                let s1 = f.domain();
                let s = TranslationSurface::new(stype, f, ProfileFn::linear(p("c4"), p("c5")));
                (s, Rect::new(s1, Interval::new(-1.0, 1.0)?))
            }
            Family::AutonomousX => {
                let g = solve_autonomous_x(alpha, p("c1"), p("z0"), p("g0"), p("gp0"), p("z_end"), &self.ode)?;
                let s2 = g.domain();
                let s = TranslationSurface::new(SurfaceType::TypeX, ProfileFn::constant(p("c1")), g);
                (s, Rect::new(Interval::new(-1.0, 1.0)?, s2))
            }
            Family::EmdenFowler => {
                let fam = QuadFamily::EmdenFowler {
                    alpha,
                    c2: p("c2"),
                    c3: p("c3"),
                    c4: p("c4"),
                };
                let f = make_quadrature_profile(fam, self.sign, quad_span()).map_err(constraint)?;
                let s1 = inset(f.domain())?;
                let s = TranslationSurface::new(SurfaceType::TypeX, f, ProfileFn::constant(p("c2")));
                (s, Rect::new(s1, Interval::new(-1.0, 1.0)?))
            }
            Family::QuadZ | Family::QuadY => {
                let (c2, c3) = (p("c2"), p("c3"));
                let (fam, stype) = if self.family == Family::QuadZ {
                    (QuadFamily::DSingularZ { alpha, c2, c3 }, SurfaceType::TypeZ)
                } else {
                    (QuadFamily::DSingularY { alpha, c2, c3 }, SurfaceType::TypeY)
                };
                let f = make_quadrature_profile(fam, self.sign, quad_span()).map_err(constraint)?;
                let s1 = inset(f.domain())?;
                let s = TranslationSurface::new(stype, f, ProfileFn::linear(p("c1"), c2));
                (s, Rect::new(s1, Interval::new(-1.0, 1.0)?))
            }
            Family::QuadX => {
                let fam = QuadFamily::DSingularX {
                    alpha,
                    c1: p("c1"),
                    c2: p("c2"),
                };
                let g = make_quadrature_profile(fam, self.sign, quad_span()).map_err(constraint)?;
                let s2 = inset(g.domain())?;
                let s = TranslationSurface::new(SurfaceType::TypeX, ProfileFn::constant(p("c1")), g);
                (s, Rect::new(Interval::new(-1.0, 1.0)?, s2))
            }
        };
        let region = match self.region {
            Some(r) => {
                let dom = surface.domain();
                for (iv, dv) in [(r.s1, dom.s1), (r.s2, dom.s2)] {
                    if !dv.contains_interval(&iv) {
                        let point = if dv.contains(iv.lo) { iv.hi } else { iv.lo };
                        return Err(Error::Domain {
                            point,
                            lo: dv.lo,
                            hi: dv.hi,
                        });
                    }
                }
                r
            }
            None => default_region,
        };
        Ok(Solution {
            family: self.family,
            surface,
            region,
            alpha,
            u: info.u,
            connection: info.connection,
            params: info.defaults.iter().map(|(k, _)| (k.to_string(), p(k))).collect(),
            sign: self.sign,
        })
    }
}

/// Parameter violations of quadrature families are constraint errors.
fn constraint(e: Error) -> Error {
    match e {
        Error::BadParam(m) => Error::Constraint(m),
        other => other,
    }
}

/// Interval shrunk by 2 % of its width at both ends.
fn inset(iv: Interval) -> Result<Interval> {
    let d = 0.02 * iv.width();
    Interval::new(iv.lo + d, iv.hi - d)
}

/// A constructed family member and the equation it satisfies.
#[derive(Debug, Clone)]
pub struct Solution {
    pub family: Family,
    pub surface: TranslationSurface,
    pub region: Rect,
    pub alpha: f64,
    pub u: Axis,
    pub connection: ConnectionKind,
    /// Every parameter value used, defaults included.
    pub params: BTreeMap<String, f64>,
    pub sign: f64,
}

impl Solution {
    pub fn config(&self) -> Result<SingularConfig> {
        SingularConfig::axis(self.alpha, self.u, self.connection)
    }

    /// The non-trivial profile and whether it is the second one (`g`).
    pub fn main_profile(&self) -> (&ProfileFn, bool) {
        match self.family {
            Family::LogCosCylinder | Family::ArctanCylinder | Family::AutonomousX | Family::QuadX => {
                (&self.surface.g, true)
            }
            _ => (&self.surface.f, false),
        }
    }

    /// Largest defect of the main profile against its defining
    /// second-order ODE over `samples` points of the region (over every
    /// integrator step for tabulated profiles).
    pub fn profile_defect(&self, samples: usize) -> Result<f64> {
        let (profile, second) = self.main_profile();
        if let ProfileKind::Tabulated(t) = profile.kind() {
            return Ok(t.max_defect(8));
        }
        let p = |k: &str| self.params.get(k).copied().unwrap_or(f64::NAN);
        let a = self.alpha;
        let range = if second { self.region.s2 } else { self.region.s1 };
        let mut worst: f64 = 0.0;
        for s in range.linspace(samples.max(2)) {
            let j = profile.eval_jet(s, 2)?;
            let d = match self.family {
                Family::Catenary => j.d2 / (1.0 + j.d1 * j.d1) - 1.0 / j.value,
                Family::LogCosCylinder => j.d2 - 2.0 * j.d1 * j.d1 - 2.0,
                Family::ArctanCylinder => j.d2 + 2.0 * (1.0 + j.d1 * j.d1) * j.d1,
                Family::EmdenFowler => j.d2 - a * p("c3") * (j.value + p("c2")).powf(2.0 * a - 1.0),
                Family::QuadZ | Family::QuadY => {
                    let k = 1.0 + p("c2").powi(2);
                    k * j.d2 / (k + j.d1 * j.d1) + a * j.d1 / s
                }
                Family::QuadX => j.d2 / (1.0 + j.d1 * j.d1) - a / (p("c1") + j.value),
                Family::AbelZ | Family::AbelY | Family::AutonomousX => unreachable!("tabulated"),
            };
            worst = worst.max(d.abs());
        }
        Ok(worst)
    }

    /// Largest round-trip error `|F(F⁻¹(s)) - s|` of an inverse quadrature profile.
    pub fn roundtrip_error(&self, samples: usize) -> Result<Option<f64>> {
        let (profile, _) = self.main_profile();
        let ProfileKind::Quadrature(q) = profile.kind() else {
            return Ok(None);
        };
        if !q.family().is_inverse() {
            return Ok(None);
        }
        let mut worst: f64 = 0.0;
        for s in profile.domain().linspace(samples.max(2)) {
            let t = q.invert(s)?;
            worst = worst.max((q.parameter_of(t)? - s).abs());
        }
        Ok(Some(worst))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singular::surface_residual;
    use approx::assert_abs_diff_eq;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            for a in f.info().aliases {
                assert_eq!(a.parse::<Family>().unwrap(), f);
            }
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn catenary_values() {
        let c = make_catenary(1.0, 0.0).unwrap();
        let j = c.eval_jet(0.0, 3).unwrap();
        assert_eq!((j.value, j.d1), (1.0, 0.0));
        assert_eq!(make_catenary(2.0, 0.0).unwrap().value(0.0).unwrap(), 0.5);
        assert!(make_catenary(0.0, 1.0).is_err());
    }

    #[test]
    fn logcos_profile_identity() {
        let s = make_logcos_cylinder(0.0, 0.0, 0.0).unwrap();
        let j = s.g.eval_jet(std::f64::consts::PI / 8.0, 2).unwrap();
        assert_abs_diff_eq!(j.d1, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j.d2, 4.0, epsilon = 1e-13);
    }

    #[test]
    fn arctan_requires_nonzero_c2() {
        assert!(matches!(make_arctan_cylinder(0.0, 0.0, 0.0, 1.0), Err(Error::Constraint(_))));
        let s = make_arctan_cylinder(0.0, 1.0, 0.5, 1.0).unwrap();
        assert!(s.g.value(0.0).is_err());
        assert_abs_diff_eq!(s.g.value(1e-8).unwrap(), 0.5, epsilon = 1e-4);
    }

    #[test]
    fn abel_rhs_examples() {
        let z = SecondOrderOde::AbelTypeZ { alpha: 1.0, c5: 0.0 };
        assert_eq!(z.accel(1.0, 0.0, 0.0), 2.0);
        let y = SecondOrderOde::AbelTypeY { alpha: 1.0, c5: 1.0 };
        assert_eq!(y.accel(1.0, 0.0, 1.0), -4.5);
        let x = SecondOrderOde::AutonomousTypeX { alpha: 1.0, c1: 0.0 };
        assert_eq!(x.accel(0.0, 1.0, 0.0), 1.0);
        assert_eq!(x.accel(0.0, 1.0, 0.5), 0.0);
    }

    #[test]
    fn abel_y_with_zero_c5_and_zero_slope_is_a_plane() {
        let f = solve_abel_y(1.0, 0.0, 1.0, 0.0, 2.0, &OdeSolveConfig::default()).unwrap();
        for x in [1.0, 1.5, 2.0] {
            let j = f.eval_jet(x, 2).unwrap();
            assert_eq!((j.value, j.d1, j.d2), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn abel_interval_across_pole_is_rejected() {
        let cfg = OdeSolveConfig::default();
        assert!(matches!(solve_abel_z(1.0, 0.0, -1.0, 0.0, 1.0, &cfg), Err(Error::BadParam(_))));
        assert!(solve_abel_z(0.0, 0.0, 1.0, 0.0, 2.0, &cfg).is_err());
    }

    #[test]
    fn autonomous_flat_and_halfspace() {
        let cfg = OdeSolveConfig::default();
        assert!(matches!(
            solve_autonomous_x(1.0, 0.0, 0.0, -1.0, 0.0, 1.0, &cfg),
            Err(Error::HalfspaceViolation { .. })
        ));
        // α/(c1 + g) = 2g' along g = sqrt(z) + const is not flat; g'' = 0 needs
        // equilibrium at every point, which never happens for α ≠ 0.
        assert!(solve_autonomous_x(1.0, 0.0, 0.0, 1.0, 0.5, 1.0, &cfg).is_ok());
    }

    #[test]
    fn every_default_builds_and_solves_its_equation() {
        for fam in Family::ALL {
            let sol = SolutionSpec::new(fam).build().unwrap();
            let cfg = sol.config().unwrap();
            for (a, b) in sol.region.grid(9, 5) {
                let r = surface_residual(&sol.surface, &cfg, a, b).unwrap();
                assert!(r.residual.abs() < 1e-7, "{fam} at ({a}, {b}): {}", r.residual);
            }
        }
    }

    #[test]
    fn profile_defects_are_small() {
        for fam in Family::ALL {
            let sol = SolutionSpec::new(fam).build().unwrap();
            let d = sol.profile_defect(50).unwrap();
            assert!(d < 1e-6, "{fam}: {d}");
        }
    }

    #[test]
    fn unknown_and_bad_params_rejected() {
        let s = SolutionSpec::new(Family::QuadZ).with_param("c9", 1.0);
        assert!(matches!(s.build(), Err(Error::Parse(_))));
        let s = SolutionSpec::new(Family::QuadZ).with_param("c3", 0.0);
        assert!(matches!(s.build(), Err(Error::Constraint(_))));
        let s = SolutionSpec::new(Family::ArctanCylinder).with_param("c2", 0.0);
        assert!(matches!(s.build(), Err(Error::Constraint(_))));
        let s = SolutionSpec::new(Family::LogCosCylinder).with_param("alpha", 0.0);
        assert!(matches!(s.build(), Err(Error::Constraint(_))));
    }
}
