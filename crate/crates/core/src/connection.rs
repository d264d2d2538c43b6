//! Levi-Civita and the two semi-symmetric connections with one-form
//! `pi(X) = <X, e_z>`, their second fundamental forms and mean curvatures.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::ScalarJet;
use crate::surface::{SurfaceJet, SurfaceType, TranslationSurface, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConnectionKind {
    #[serde(rename = "levi")]
    LeviCivita,
    /// `∇_X Y = D^L_X Y + π(Y) X - <X, Y> e_z`.
    #[serde(rename = "nabla")]
    SemiSymMetric,
    /// `D_X Y = D^L_X Y + π(Y) X`.
    #[serde(rename = "d")]
    SemiSymNonMetric,
}

impl ConnectionKind {
    pub const ALL: [ConnectionKind; 3] = [
        ConnectionKind::LeviCivita,
        ConnectionKind::SemiSymMetric,
        ConnectionKind::SemiSymNonMetric,
    ];

    /// Short name used on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            ConnectionKind::LeviCivita => "levi",
            ConnectionKind::SemiSymMetric => "nabla",
            ConnectionKind::SemiSymNonMetric => "d",
        }
    }

    /// The tensorial part `∇_X Y - D^L_X Y` evaluated on vectors.
    pub fn correction(self, x: &Vec3, y: &Vec3) -> Vec3 {
        match self {
            ConnectionKind::LeviCivita => Vec3::zeros(),
            ConnectionKind::SemiSymMetric => pi(y) * x - x.dot(y) * e_z(),
            ConnectionKind::SemiSymNonMetric => pi(y) * x,
        }
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ConnectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "levi" | "levi-civita" | "levicivita" | "lc" => Ok(ConnectionKind::LeviCivita),
            "nabla" | "metric" | "semi-symmetric-metric" => Ok(ConnectionKind::SemiSymMetric),
            "d" | "nonmetric" | "non-metric" | "semi-symmetric-non-metric" => {
                Ok(ConnectionKind::SemiSymNonMetric)
            }
            other => Err(Error::Parse(format!(
                "unknown connection '{other}' (expected levi, nabla or d)"
            ))),
        }
    }
}

pub fn e_z() -> Vec3 {
    Vec3::new(0.0, 0.0, 1.0)
}

/// The one-form `π(X) = <X, e_z>`.
pub fn pi(x: &Vec3) -> f64 {
    x.z
}

/// `[[∇_{σ1}σ1, ∇_{σ1}σ2], [∇_{σ2}σ1, ∇_{σ2}σ2]]`.
pub fn covariant_second(kind: ConnectionKind, jet: &SurfaceJet) -> [[Vec3; 2]; 2] {
    let entry = |i: usize, j: usize| jet.second(i, j) + kind.correction(&jet.first(i), &jet.first(j));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub h11: f64,
    pub h12: f64,
    pub h21: f64,
    pub h22: f64,
    /// Mean curvature for the chosen connection.
    pub mean: f64,
    /// Levi-Civita mean curvature with the same normal.
    pub levi: f64,
}

fn assemble_mean(jet: &SurfaceJet, h: [[f64; 2]; 2]) -> f64 {
    (jet.g22 * h[0][0] - jet.g12 * (h[0][1] + h[1][0]) + jet.g11 * h[1][1]) / (2.0 * jet.det())
}

/// Second fundamental form and mean curvature through the Gauss formula.
pub fn mean_curvature(kind: ConnectionKind, jet: &SurfaceJet) -> Result<CurvatureReport> {
    let det = jet.det();
    if !(det > 0.0) {
        return Err(Error::DegenerateMetric { det });
    }
    let cov = covariant_second(kind, jet);
    let h = [
        [cov[0][0].dot(&jet.xi), cov[0][1].dot(&jet.xi)],
        [cov[1][0].dot(&jet.xi), cov[1][1].dot(&jet.xi)],
    ];
    let mean = assemble_mean(jet, h);
    let levi = if kind == ConnectionKind::LeviCivita {
        mean
    } else {
        let hl = [
            [jet.s11.dot(&jet.xi), jet.s12.dot(&jet.xi)],
            [jet.s12.dot(&jet.xi), jet.s22.dot(&jet.xi)],
        ];
        assemble_mean(jet, hl)
    };
    Ok(CurvatureReport {
        h11: h[0][0],
        h12: h[0][1],
        h21: h[1][0],
        h22: h[1][1],
        mean,
        levi,
    })
}

/// Whether [`mean_curvature_closed_form`] has an explicit formula for the pair.
pub fn has_closed_form(stype: SurfaceType, kind: ConnectionKind) -> bool {
    !(stype == SurfaceType::TypeX && kind == ConnectionKind::SemiSymNonMetric)
}

/// Explicit mean curvature in terms of the profile jets.
pub fn closed_form_from_jets(
    stype: SurfaceType,
    kind: ConnectionKind,
    f: &ScalarJet,
    g: &ScalarJet,
) -> Result<f64> {
    let (fp, gp) = (f.d1, g.d1);
    let w2 = 1.0 + fp * fp + gp * gp;
    let w3 = w2 * w2.sqrt();
    let num = (1.0 + gp * gp) * f.d2 + (1.0 + fp * fp) * g.d2;
    use ConnectionKind::*;
    use SurfaceType::*;
    Ok(match (stype, kind) {
        (TypeZ, LeviCivita) | (TypeX, LeviCivita) | (TypeZ, SemiSymNonMetric) => num / (2.0 * w3),
        (TypeY, LeviCivita) | (TypeY, SemiSymNonMetric) => -num / (2.0 * w3),
        (TypeZ, SemiSymMetric) => (num - 2.0 * w2) / (2.0 * w3),
        (TypeY, SemiSymMetric) => -(num + 2.0 * w2 * gp) / (2.0 * w3),
        (TypeX, SemiSymMetric) => (num + 2.0 * w2 * gp) / (2.0 * w3),
        (TypeX, SemiSymNonMetric) => {
            return Err(Error::UnsupportedPair {
                surface: stype.name(),
                connection: kind.tag(),
            })
        }
    })
}

/// Independent oracle for [`mean_curvature`] from the explicit per-type formulas.
pub fn mean_curvature_closed_form(
    surface: &TranslationSurface,
    kind: ConnectionKind,
    s1: f64,
    s2: f64,
) -> Result<f64> {
    if !has_closed_form(surface.stype, kind) {
        return Err(Error::UnsupportedPair {
            surface: surface.stype.name(),
            connection: kind.tag(),
        });
    }
    let (f, g) = surface.profile_jets(s1, s2, 2)?;
    closed_form_from_jets(surface.stype, kind, &f, &g)
}

/// Vector field on R³ with affine coefficients `base + jac * p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VectorField {
    Constant(Vec3),
    Affine { base: Vec3, jac: Matrix3<f64> },
}

impl VectorField {
    pub fn at(&self, p: &Vec3) -> Vec3 {
        match self {
            VectorField::Constant(v) => *v,
            VectorField::Affine { base, jac } => base + jac * p,
        }
    }

    /// Euclidean directional derivative `D^L_v Self` at `p`, by central differences.
    fn directional(&self, v: &Vec3, p: &Vec3) -> Vec3 {
        match self {
            VectorField::Constant(_) => Vec3::zeros(),
            VectorField::Affine { .. } => {
                let h = 1e-4;
                (self.at(&(p + h * v)) - self.at(&(p - h * v))) / (2.0 * h)
            }
        }
    }
}

/// `∇_X Y - ∇_Y X - [X, Y]` at `p`.
pub fn torsion(kind: ConnectionKind, x: &VectorField, y: &VectorField, p: &Vec3) -> Vec3 {
    let (xv, yv) = (x.at(p), y.at(p));
    let dxy = y.directional(&xv, p);
    let dyx = x.directional(&yv, p);
    let nabla_xy = dxy + kind.correction(&xv, &yv);
    let nabla_yx = dyx + kind.correction(&yv, &xv);
    let bracket = dxy - dyx;
    nabla_xy - nabla_yx - bracket
}

/// `X<Y, Z> - <∇_X Y, Z> - <Y, ∇_X Z>` for constant fields.
pub fn metricity_defect(kind: ConnectionKind, x: &Vec3, y: &Vec3, z: &Vec3) -> f64 {
    -kind.correction(x, y).dot(z) - y.dot(&kind.correction(x, z))
}
