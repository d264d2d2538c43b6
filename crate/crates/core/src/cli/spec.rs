//! Spec files: TOML documents naming either a catalog family with its
//! parameters or a custom surface assembled from catalog profiles.
//!
//! ```toml
//! family = "arctan_cylinder"
//! sign = -1
//! [params]
//! c2 = 2.0
//! [region]
//! s1 = [0.5, 2.0]
//! s2 = [0.5, 1.5]
//! ```
//!
//! ```toml
//! alpha = 1.0
//! connection = "levi"
//! u = "z"
//! [surface]
//! type = "z"
//! f = { kind = "constant", value = 0.0 }
//! g = { kind = "polynomial", coeffs = [0.0, 0.5] }
//! [region]
//! s1 = [0.0, 1.0]
//! s2 = [0.0, 1.0]
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::connection::ConnectionKind;
use crate::error::{Error, Result};
use crate::jets::{Analytic, Interval, ProfileFn};
use crate::singular::Axis;
use crate::solutions::ode::OdeSolveConfig;
use crate::solutions::{Family, SolutionSpec};
use crate::surface::{Rect, SurfaceType, TranslationSurface};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: Option<String>,
    alpha: Option<f64>,
    sign: Option<f64>,
    connection: Option<String>,
    u: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    region: Option<RawRegion>,
    surface: Option<RawSurface>,
    ode: Option<RawOde>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion {
    s1: [f64; 2],
    s2: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOde {
    rtol: Option<f64>,
    atol: Option<f64>,
    max_step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    #[serde(rename = "type")]
    stype: String,
    f: RawProfile,
    g: RawProfile,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawProfile {
    Constant {
        value: f64,
    },
    Linear {
        intercept: f64,
        slope: f64,
    },
    Polynomial {
        coeffs: Vec<f64>,
    },
    Catenary {
        lambda: f64,
        #[serde(default)]
        mu: f64,
    },
    LogCos {
        scale: f64,
        freq: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
    Arctan {
        c2: f64,
        #[serde(default)]
        c3: f64,
        #[serde(default = "plus_one")]
        sign: f64,
    },
    Sine {
        amp: f64,
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
}

fn plus_one() -> f64 {
    1.0
}

impl RawProfile {
    fn build(&self, field: &str) -> Result<ProfileFn> {
        let analytic = |a: Analytic| {
            ProfileFn::analytic(a).map_err(|e| Error::Constraint(format!("surface.{field}: {e}")))
        };
        match self {
            RawProfile::Constant { value } => Ok(ProfileFn::constant(*value)),
            RawProfile::Linear { intercept, slope } => Ok(ProfileFn::linear(*intercept, *slope)),
            RawProfile::Polynomial { coeffs } => analytic(Analytic::Polynomial(coeffs.clone())),
            RawProfile::Catenary { lambda, mu } => analytic(Analytic::Catenary {
                lambda: *lambda,
                mu: *mu,
            }),
            RawProfile::LogCos {
                scale,
                freq,
                phase,
                offset,
            } => analytic(Analytic::LogCos {
                scale: *scale,
                freq: *freq,
                phase: *phase,
                offset: *offset,
            }),
            RawProfile::Arctan { c2, c3, sign } => analytic(Analytic::Arctan {
                c2: *c2,
                c3: *c3,
                sign: *sign,
            }),
            RawProfile::Sine { amp, freq, phase } => analytic(Analytic::Sine {
                amp: *amp,
                freq: *freq,
                phase: *phase,
            }),
        }
    }
}

/// What a spec file describes.
#[derive(Debug, Clone)]
pub enum Target {
    Family(SolutionSpec),
    Custom {
        surface: TranslationSurface,
        region: Rect,
    },
}

/// A validated spec file.
#[derive(Debug, Clone)]
pub struct ParsedSpec {
    pub id: String,
    pub target: Target,
    /// Equation settings; `None` falls back to the family defaults.
    pub alpha: Option<f64>,
    pub connection: Option<ConnectionKind>,
    pub u: Option<Axis>,
}

/// Surface, region and equation ready for verification.
#[derive(Debug, Clone)]
pub struct Problem {
    pub id: String,
    pub surface: TranslationSurface,
    pub region: Rect,
    pub alpha: f64,
    pub connection: ConnectionKind,
    pub u: Axis,
}

fn field<T, E: std::fmt::Display>(name: &str, r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| Error::Parse(format!("field `{name}`: {e}")))
}

fn region(raw: &RawRegion) -> Result<Rect> {
    let iv = |name: &str, b: [f64; 2]| {
        Interval::new(b[0], b[1]).map_err(|e| Error::Parse(format!("field `region.{name}`: {e}")))
    };
    Ok(Rect::new(iv("s1", raw.s1)?, iv("s2", raw.s2)?))
}

/// Parse spec text; `origin` labels diagnostics.
pub fn parse_spec_str(text: &str, origin: &str) -> Result<ParsedSpec> {
    let raw: RawSpec =
        toml::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
    let connection = raw
        .connection
        .as_deref()
        .map(|c| field("connection", c.parse::<ConnectionKind>()))
        .transpose()?;
    let u = raw
        .u
        .as_deref()
        .map(|c| field("u", c.parse::<Axis>()))
        .transpose()?;
    if let Some(a) = raw.alpha {
        if !a.is_finite() || a.abs() < crate::singular::ALPHA_MIN {
            return Err(Error::Constraint(format!("field `alpha`: α ≠ 0 is required (got {a})")));
        }
    }
    let region = raw.region.as_ref().map(region).transpose()?;

    match (&raw.family, &raw.surface) {
        (Some(_), Some(_)) => Err(Error::Parse(format!(
            "{origin}: give either `family` or `[surface]`, not both"
        ))),
        (None, None) => Err(Error::Parse(format!(
            "{origin}: missing `family` or `[surface]`"
        ))),
        (Some(name), None) => {
            let family = field("family", name.parse::<Family>())?;
            let mut spec = SolutionSpec::new(family);
            spec.params = raw.params.clone();
            if let Some(a) = raw.alpha {
                if spec.params.insert("alpha".into(), a).is_some() {
                    return Err(Error::Parse(
                        "field `alpha`: given both at top level and in [params]".into(),
                    ));
                }
            }
            if let Some(s) = raw.sign {
                spec.sign = s;
            }
            if let Some(r) = region {
                spec.region = Some(r);
            }
            if let Some(o) = &raw.ode {
                let mut cfg = OdeSolveConfig::default();
                if let Some(t) = o.rtol {
                    cfg.rtol = t;
                }
                if let Some(t) = o.atol {
                    cfg.atol = t;
                }
                if let Some(t) = o.max_step {
                    cfg.max_step = t;
                }
                spec.ode = cfg;
            }
            spec.validate()?;
            Ok(ParsedSpec {
                id: family.name().to_string(),
                target: Target::Family(spec),
                alpha: None,
                connection,
                u,
            })
        }
        (None, Some(s)) => {
            if !raw.params.is_empty() || raw.sign.is_some() || raw.ode.is_some() {
                return Err(Error::Parse(format!(
                    "{origin}: `params`, `sign` and `[ode]` only apply to families"
                )));
            }
            let stype = field("surface.type", s.stype.parse::<SurfaceType>())?;
            let surface = TranslationSurface::new(stype, s.f.build("f")?, s.g.build("g")?);
            let region = region.ok_or_else(|| {
                Error::Parse(format!("{origin}: custom surfaces need a [region]"))
            })?;
            Ok(ParsedSpec {
                id: "custom".into(),
                target: Target::Custom { surface, region },
                alpha: raw.alpha,
                connection,
                u,
            })
        }
    }
}

pub fn parse_spec(path: &Path) -> Result<ParsedSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_spec_str(&text, &path.display().to_string())
}

fn check_region(surface: &TranslationSurface, region: &Rect) -> Result<()> {
    let dom = surface.domain();
    for (iv, dv) in [(region.s1, dom.s1), (region.s2, dom.s2)] {
        if !dv.contains_interval(&iv) {
            let point = if dv.contains(iv.lo) { iv.hi } else { iv.lo };
            return Err(Error::Domain {
                point,
                lo: dv.lo,
                hi: dv.hi,
            });
        }
    }
    Ok(())
}

impl ParsedSpec {
    /// Construct the surface and settle the equation settings.
    pub fn resolve(&self) -> Result<Problem> {
        match &self.target {
            Target::Family(spec) => {
                let sol = spec.build()?;
                Ok(Problem {
                    id: self.id.clone(),
                    alpha: self.alpha.unwrap_or(sol.alpha),
                    connection: self.connection.unwrap_or(sol.connection),
                    u: self.u.unwrap_or(sol.u),
                    surface: sol.surface,
                    region: sol.region,
                })
            }
            Target::Custom { surface, region } => {
                check_region(surface, region)?;
                Ok(Problem {
                    id: self.id.clone(),
                    surface: surface.clone(),
                    region: *region,
                    alpha: self.alpha.unwrap_or(1.0),
                    connection: self.connection.unwrap_or(ConnectionKind::LeviCivita),
                    u: self.u.unwrap_or(Axis::Z),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_spec() {
        let p = parse_spec_str(
            "family = \"thm1_logcos\"\n[params]\nc1 = 0.0\nc2 = 0.0\nc3 = 0.0\n",
            "t",
        )
        .unwrap();
        let prob = p.resolve().unwrap();
        assert_eq!(prob.surface.stype, SurfaceType::TypeZ);
        assert_eq!(prob.connection, ConnectionKind::SemiSymMetric);
    }

    #[test]
    fn constraint_errors() {
        let e = parse_spec_str("family = \"thm2_arctan\"\n[params]\nc2 = 0.0\n", "t")
            .and_then(|p| p.resolve())
            .unwrap_err();
        assert!(matches!(e, Error::Constraint(ref m) if m.contains("c₂ ≠ 0")), "{e}");
        let e = parse_spec_str("family = \"logcos_cylinder\"\nalpha = 0.0\n", "t").unwrap_err();
        assert!(matches!(e, Error::Constraint(ref m) if m.contains("α ≠ 0")), "{e}");
    }

    #[test]
    fn malformed_specs() {
        for text in [
            "family = ",
            "family = \"nope\"",
            "familly = \"catenary\"",
            "family = \"catenary\"\n[params]\nc9 = 1.0",
            "[surface]\ntype = \"w\"\nf = { kind = \"constant\", value = 0.0 }\ng = { kind = \"constant\", value = 0.0 }\n[region]\ns1 = [0.0, 1.0]\ns2 = [0.0, 1.0]",
            "[surface]\ntype = \"z\"\nf = { kind = \"constant\", value = 0.0 }\ng = { kind = \"constant\", value = 0.0 }",
        ] {
            assert!(matches!(parse_spec_str(text, "t"), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_spec_str("family = \"catenary\"\nsign = \"x\"\n", "spec.toml").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn custom_surface() {
        let p = parse_spec_str(
            "u = \"z\"\n[surface]\ntype = \"z\"\nf = { kind = \"constant\", value = 0.0 }\ng = { kind = \"polynomial\", coeffs = [0.0, 0.5] }\n[region]\ns1 = [0.0, 1.0]\ns2 = [0.0, 1.0]\n",
            "t",
        )
        .unwrap();
        let prob = p.resolve().unwrap();
        assert_eq!(prob.u, Axis::Z);
        assert_eq!(prob.alpha, 1.0);
    }
}
