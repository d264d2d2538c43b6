//! Command implementations behind the `singmin` binary. Each command
//! returns structured data; rendering and exit codes live in the binary.

pub mod spec;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::connection::ConnectionKind;
use crate::error::{Error, Result};
use crate::jets::{Interval, ProfileKind};
use crate::singular::{surface_residual, Axis, SingularConfig};
use crate::solutions::ode::OdeSolveConfig;
use crate::solutions::{Construction, Family, FamilyInfo, SolutionSpec};
use crate::surface::{make_mesh, Rect};

pub use spec::{parse_spec, parse_spec_str, ParsedSpec, Problem, Target};

/// Default residual tolerance of `verify`.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Parse `NUxNV`.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("grid '{s}' must look like 64x64"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nu: usize = a.trim().parse().map_err(|_| bad())?;
    let nv: usize = b.trim().parse().map_err(|_| bad())?;
    if nu < 2 || nv < 2 {
        return Err(Error::Parse(format!("grid '{s}' needs at least 2 points per axis")));
    }
    Ok((nu, nv))
}

/// Parse `A:B`.
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse(format!("range '{s}' must look like 1.0:3.0"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Parse `key=value`.
pub fn parse_param(s: &str) -> Result<(String, f64)> {
    let bad = || Error::Parse(format!("parameter '{s}' must look like c2=1.5"));
    let (k, v) = s.split_once('=').ok_or_else(bad)?;
    Ok((k.trim().to_string(), v.trim().parse().map_err(|_| bad())?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    /// Row-major grid index.
    pub index: usize,
    pub s1: f64,
    pub s2: f64,
    pub residual: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub surface: String,
    pub connection: ConnectionKind,
    pub alpha: f64,
    pub u: Axis,
    pub grid: (usize, usize),
    pub tol: f64,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub failures: Vec<Failure>,
    pub status: Status,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "surface:       {}", self.surface);
        let _ = writeln!(
            out,
            "equation:      connection={} alpha={} u={}",
            self.connection, self.alpha, self.u
        );
        let _ = writeln!(out, "grid:          {}x{}  tol={:e}", self.grid.0, self.grid.1, self.tol);
        let _ = writeln!(out, "max_residual:  {:e}", self.max_residual);
        let _ = writeln!(out, "mean_residual: {:e}", self.mean_residual);
        if !self.failures.is_empty() {
            let _ = writeln!(out, "failures:      {}", self.failures.len());
            for f in self.failures.iter().take(10) {
                match (&f.residual, &f.error) {
                    (_, Some(e)) => {
                        let _ = writeln!(out, "  [{}] ({}, {}): {e}", f.index, f.s1, f.s2);
                    }
                    (Some(r), None) => {
                        let _ = writeln!(out, "  [{}] ({}, {}): residual {r:e}", f.index, f.s1, f.s2);
                    }
                    (None, None) => {}
                }
            }
            if self.failures.len() > 10 {
                let _ = writeln!(out, "  ... {} more", self.failures.len() - 10);
            }
        }
        let _ = writeln!(
            out,
            "status:        {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// Settings of a verification sweep; `None` keeps the problem's value.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub connection: Option<ConnectionKind>,
    pub alpha: Option<f64>,
    pub u: Option<Axis>,
    pub grid: Option<(usize, usize)>,
    pub tol: Option<f64>,
}

/// Residual sweep over the problem's region, endpoints included.
pub fn verify(problem: &Problem, opts: &VerifyOptions) -> Result<VerifyReport> {
    let alpha = opts.alpha.unwrap_or(problem.alpha);
    let connection = opts.connection.unwrap_or(problem.connection);
    let u = opts.u.unwrap_or(problem.u);
    let (nu, nv) = opts.grid.unwrap_or((64, 64));
    let tol = opts.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(Error::Parse(format!("tolerance {tol} must be positive")));
    }
    let cfg = SingularConfig::axis(alpha, u, connection)?;
    let points = problem.region.grid(nu, nv);
    let results: Vec<Result<f64>> = points
        .par_iter()
        .map(|&(a, b)| surface_residual(&problem.surface, &cfg, a, b).map(|r| r.residual))
        .collect();

    let mut failures = Vec::new();
    let (mut max, mut sum, mut count) = (0.0f64, 0.0, 0usize);
    for (index, (r, &(s1, s2))) in results.into_iter().zip(&points).enumerate() {
        match r {
            Ok(v) => {
                let a = v.abs();
                if a.is_nan() {
                    max = f64::NAN;
                } else {
                    max = max.max(a);
                }
                sum += a;
                count += 1;
                if !(a <= tol) {
                    failures.push(Failure {
                        index,
                        s1,
                        s2,
                        residual: Some(v),
                        error: None,
                    });
                }
            }
            Err(e) => failures.push(Failure {
                index,
                s1,
                s2,
                residual: None,
                error: Some(e.to_string()),
            }),
        }
    }
    let mean = if count > 0 { sum / count as f64 } else { f64::NAN };
    let status = if failures.is_empty() && max <= tol {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerifyReport {
        surface: problem.id.clone(),
        connection,
        alpha,
        u,
        grid: (nu, nv),
        tol,
        max_residual: if count > 0 { max } else { f64::NAN },
        mean_residual: mean,
        failures,
        status,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

impl std::str::FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(MeshFormat::Obj),
            "csv" => Ok(MeshFormat::Csv),
            other => Err(Error::Parse(format!("unknown mesh format '{other}' (obj or csv)"))),
        }
    }
}

/// Render the mesh of the problem's region.
pub fn mesh_text(problem: &Problem, nu: usize, nv: usize, format: MeshFormat) -> Result<String> {
    let mesh = make_mesh(&problem.surface, &problem.region, nu, nv)?;
    let mut out = String::new();
    match format {
        MeshFormat::Obj => {
            let _ = writeln!(out, "# {} {}x{}", problem.id, nu, nv);
            for v in &mesh.vertices {
                let _ = writeln!(out, "v {} {} {}", v.x, v.y, v.z);
            }
            for n in &mesh.normals {
                let _ = writeln!(out, "vn {} {} {}", n.x, n.y, n.z);
            }
            for t in &mesh.triangles {
                let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
            }
        }
        MeshFormat::Csv => {
            out.push_str("x,y,z\n");
            for v in &mesh.vertices {
                let _ = writeln!(out, "{},{},{}", v.x, v.y, v.z);
            }
        }
    }
    Ok(out)
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    file.write_all(text.as_bytes())
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
    pub range: (f64, f64),
    pub samples: usize,
    pub max_defect: f64,
    pub roundtrip_error: Option<f64>,
}

/// Tabulate the main profile of an ODE or quadrature family as CSV with
/// columns `s,f,df,d2f` and a trailing `# max_defect=` line.
pub fn solve(
    family: Family,
    params: &[(String, f64)],
    sign: f64,
    range: Option<(f64, f64)>,
    rtol: Option<f64>,
    samples: usize,
) -> Result<(String, SolveReport)> {
    let info = family.info();
    if info.construction == Construction::ClosedForm {
        return Err(Error::BadParam(format!(
            "{} is a closed form; solve needs an ODE or quadrature family",
            info.name
        )));
    }
    let mut spec = SolutionSpec::new(family).with_sign(sign);
    for (k, v) in params {
        spec = spec.with_param(k, *v);
    }
    if let Some(tol) = rtol {
        spec.ode = OdeSolveConfig {
            rtol: tol,
            atol: tol,
            ..spec.ode
        };
    }
    if let Some((a, b)) = range {
        if info.construction == Construction::Ode {
            let (k0, k1) = if family == Family::AutonomousX {
                ("z0", "z_end")
            } else {
                ("x0", "x_end")
            };
            spec = spec.with_param(k0, a).with_param(k1, b);
        } else {
            let base = spec.build()?;
            let iv = Interval::new(a.min(b), a.max(b))?;
            let (_, second) = base.main_profile();
            let region = if second {
                Rect::new(base.region.s1, iv)
            } else {
                Rect::new(iv, base.region.s2)
            };
            spec = spec.with_region(region);
        }
    }
    let sol = spec.build()?;
    let (profile, second) = sol.main_profile();
    let tab = if let ProfileKind::Tabulated(_) = profile.kind() {
        profile.domain()
    } else if second {
        sol.region.s2
    } else {
        sol.region.s1
    };
    let samples = samples.max(2);
    let max_defect = sol.profile_defect(samples)?;
    let roundtrip_error = sol.roundtrip_error(samples)?;
    let mut out = String::from("s,f,df,d2f\n");
    for s in tab.linspace(samples) {
        let j = profile.eval_jet(s, 2)?;
        let _ = writeln!(out, "{},{},{},{}", s, j.value, j.d1, j.d2);
    }
    if let Some(e) = roundtrip_error {
        let _ = writeln!(out, "# roundtrip_error={e:e}");
    }
    let _ = writeln!(out, "# max_defect={max_defect:e}");
    Ok((
        out,
        SolveReport {
            family,
            params: sol.params.clone(),
            range: (tab.lo, tab.hi),
            samples,
            max_defect,
            roundtrip_error,
        },
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    #[serde(flatten)]
    pub info: FamilyInfo,
    pub default_params: BTreeMap<String, f64>,
}

pub fn catalog() -> Vec<CatalogEntry> {
    Family::ALL
        .iter()
        .map(|f| {
            let info = f.info();
            let default_params = info.defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            CatalogEntry {
                info,
                default_params,
            }
        })
        .collect()
}

pub fn catalog_text() -> String {
    let mut out = String::new();
    for e in catalog() {
        let i = &e.info;
        let _ = writeln!(out, "{}", i.name);
        if !i.aliases.is_empty() {
            let _ = writeln!(out, "  aliases:     {}", i.aliases.join(", "));
        }
        let _ = writeln!(out, "  surface:     {}", i.surface);
        let _ = writeln!(out, "  profile:     {}", i.description);
        let _ = writeln!(
            out,
            "  equation:    connection={} u={}{}",
            i.connection,
            i.u,
            if i.signed { "  (sign = ±1)" } else { "" }
        );
        let _ = writeln!(out, "  constraints: {}", i.constraints.join("; "));
        let defaults: Vec<String> = i.defaults.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "  defaults:    {}", defaults.join(" "));
    }
    out
}

pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&catalog()).expect("catalog serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_grid("64x32").unwrap(), (64, 32));
        assert!(parse_grid("1x5").is_err());
        assert!(parse_grid("64").is_err());
        assert_eq!(parse_range("1:3").unwrap(), (1.0, 3.0));
        assert_eq!(parse_param("c2 = 0.5").unwrap(), ("c2".to_string(), 0.5));
        assert!(parse_param("c2").is_err());
    }

    #[test]
    fn flat_plane_at_zero_height_fails_with_halfspace() {
        let spec = parse_spec_str(
            "u = \"z\"\n[surface]\ntype = \"z\"\nf = { kind = \"constant\", value = 0.0 }\ng = { kind = \"constant\", value = 0.0 }\n[region]\ns1 = [0.0, 1.0]\ns2 = [0.0, 1.0]\n",
            "t",
        )
        .unwrap();
        let rep = verify(&spec.resolve().unwrap(), &VerifyOptions::default()).unwrap();
        assert!(!rep.passed());
        assert!(rep.failures.iter().all(|f| f.error.as_deref().unwrap().contains("halfspace")));
    }

    #[test]
    fn solve_rejects_closed_forms_and_poles() {
        assert!(solve(Family::Catenary, &[], 1.0, None, None, 11).is_err());
        assert!(matches!(
            solve(Family::AbelZ, &[], 1.0, Some((-1.0, 1.0)), None, 11),
            Err(Error::BadParam(_))
        ));
    }

    #[test]
    fn catalog_lists_every_family() {
        assert_eq!(catalog().len(), 10);
        let v: serde_json::Value = serde_json::from_str(&catalog_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 10);
    }
}
