//! Singular-minimality residuals for curves and surfaces, and the
//! potential energy `∫ <σ, u>^α dA` whose critical points they describe.

use std::fmt;
use std::str::FromStr;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::connection::{mean_curvature, ConnectionKind};
use crate::error::{Error, Result};
use crate::jets::ScalarJet;
use crate::surface::{Rect, SurfaceJet, TranslationSurface, Vec3};

/// Smallest admissible `|α|`; the equations degenerate to plain minimality at 0.
pub const ALPHA_MIN: f64 = 1e-15;

/// Coordinate axis used as the fixed direction `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn vector(self) -> Vec3 {
        match self {
            Axis::X => Vec3::x(),
            Axis::Y => Vec3::y(),
            Axis::Z => Vec3::z(),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::Parse(format!("unknown axis '{other}' (expected x, y or z)"))),
        }
    }
}

/// Exponent, direction and connection of a singular-minimality equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularConfig {
    alpha: f64,
    u: Vec3,
    connection: ConnectionKind,
}

impl SingularConfig {
    pub fn new(alpha: f64, u: Vec3, connection: ConnectionKind) -> Result<Self> {
        if !alpha.is_finite() || alpha.abs() < ALPHA_MIN {
            return Err(Error::Constraint(format!("α ≠ 0 is required (got {alpha})")));
        }
        if (u.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Constraint(format!(
                "u must be a unit vector (|u| = {})",
                u.norm()
            )));
        }
        Ok(Self {
            alpha,
            u,
            connection,
        })
    }

    pub fn axis(alpha: f64, axis: Axis, connection: ConnectionKind) -> Result<Self> {
        Self::new(alpha, axis.vector(), connection)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn u(&self) -> Vec3 {
        self.u
    }

    pub fn connection(&self) -> ConnectionKind {
        self.connection
    }

    /// Same equation with the opposite direction `-u`.
    pub fn flipped(&self) -> Self {
        Self { u: -self.u, ..*self }
    }
}

/// Position and first two derivatives of a regular planar curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub pos: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

impl CurveJet {
    /// The graph `s -> (s, f(s))`.
    pub fn graph(s: f64, f: &ScalarJet) -> Self {
        Self {
            pos: [s, f.value],
            d1: [1.0, f.d1],
            d2: [0.0, f.d2],
        }
    }
}

/// `κ - α <n, u> / <γ, u>` with `n` the left-rotated unit tangent and `κ`
/// the signed curvature.
pub fn curve_catenary_residual(curve: &CurveJet, u: [f64; 2], alpha: f64) -> Result<f64> {
    let [x1, y1] = curve.d1;
    let [x2, y2] = curve.d2;
    let speed = x1.hypot(y1);
    if !(speed > 0.0) {
        return Err(Error::DegenerateCurve);
    }
    let height = curve.pos[0] * u[0] + curve.pos[1] * u[1];
    if !(height > 0.0) {
        return Err(Error::HalfspaceViolation { height });
    }
    let kappa = (x1 * y2 - y1 * x2) / speed.powi(3);
    let n = [-y1 / speed, x1 / speed];
    Ok(kappa - alpha * (n[0] * u[0] + n[1] * u[1]) / height)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `lhs - rhs`.
    pub residual: f64,
    /// `2H` for the configured connection.
    pub lhs: f64,
    /// `α <ξ, u> / <σ, u>`.
    pub rhs: f64,
    /// `<σ, u>`.
    pub height: f64,
}

/// Residual of `2H = α <ξ, u> / <σ, u>` for a surface jet.
pub fn jet_residual(jet: &SurfaceJet, cfg: &SingularConfig) -> Result<ResidualReport> {
    let height = jet.pos.dot(&cfg.u);
    if !(height > 0.0) {
        return Err(Error::HalfspaceViolation { height });
    }
    let lhs = 2.0 * mean_curvature(cfg.connection, jet)?.mean;
    let rhs = cfg.alpha * jet.xi.dot(&cfg.u) / height;
    Ok(ResidualReport {
        residual: lhs - rhs,
        lhs,
        rhs,
        height,
    })
}

pub fn surface_residual(
    surface: &TranslationSurface,
    cfg: &SingularConfig,
    s1: f64,
    s2: f64,
) -> Result<ResidualReport> {
    jet_residual(&surface.jet(s1, s2)?, cfg)
}

fn gauss_rule(order: usize) -> Result<GaussLegendre> {
    GaussLegendre::new(order)
        .map_err(|_| Error::BadParam(format!("quadrature order {order} must be at least 2")))
}

/// Tensor Gauss–Legendre quadrature of `integrand(s1, s2)` over `region`.
fn integrate_rect<F>(rule: &GaussLegendre, region: &Rect, mut integrand: F) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let (a1, b1) = (region.s1.lo, region.s1.hi);
    let (a2, b2) = (region.s2.lo, region.s2.hi);
    let (h1, h2) = (0.5 * (b1 - a1), 0.5 * (b2 - a2));
    let pairs = rule.as_node_weight_pairs();
    let mut total = 0.0;
    for &(x, wx) in pairs {
        let s1 = a1 + h1 * (x + 1.0);
        let mut row = 0.0;
        for &(y, wy) in pairs {
            let s2 = a2 + h2 * (y + 1.0);
            row += wy * integrand(s1, s2)?;
        }
        total += wx * row;
    }
    Ok(total * h1 * h2)
}

fn check_region(surface: &TranslationSurface, region: &Rect) -> Result<()> {
    if !surface.domain().contains_rect(region) {
        return Err(Error::BadParam(format!(
            "region {region} is not inside the surface domain {}",
            surface.domain()
        )));
    }
    Ok(())
}

/// `∫ <σ, u>^α W ds1 ds2` over `region` with `quad_order` nodes per axis.
pub fn potential_energy(
    surface: &TranslationSurface,
    u: Vec3,
    alpha: f64,
    region: &Rect,
    quad_order: usize,
) -> Result<f64> {
    check_region(surface, region)?;
    let rule = gauss_rule(quad_order)?;
    integrate_rect(&rule, region, |s1, s2| {
        let jet = surface.jet(s1, s2)?;
        let height = jet.pos.dot(&u);
        if !(height > 0.0) {
            return Err(Error::HalfspaceViolation { height });
        }
        Ok(height.powf(alpha) * jet.w)
    })
}

/// Normal perturbation profile `A (1 - t1²)^k (1 - t2²)^k` with
/// `t_i = (s_i - c_i) / r_i`, supported on the rectangle `|t_i| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: (f64, f64),
    pub radius: (f64, f64),
    pub amplitude: f64,
    pub power: i32,
}

impl Bump {
    pub fn new(center: (f64, f64), radius: (f64, f64), amplitude: f64) -> Result<Self> {
        if !(radius.0 > 0.0 && radius.1 > 0.0) {
            return Err(Error::BadParam("bump radii must be positive".into()));
        }
        Ok(Self {
            center,
            radius,
            amplitude,
            power: 3,
        })
    }

    pub fn support(&self) -> Result<Rect> {
        let (c, r) = (self.center, self.radius);
        Rect::from_bounds((c.0 - r.0, c.0 + r.0), (c.1 - r.1, c.1 + r.1))
    }

    /// Value and the two partial derivatives.
    pub fn eval(&self, s1: f64, s2: f64) -> (f64, f64, f64) {
        let k = self.power;
        let t1 = (s1 - self.center.0) / self.radius.0;
        let t2 = (s2 - self.center.1) / self.radius.1;
        if t1.abs() >= 1.0 || t2.abs() >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let (q1, q2) = (1.0 - t1 * t1, 1.0 - t2 * t2);
        let (p1, p2) = (q1.powi(k), q2.powi(k));
        let dp1 = k as f64 * q1.powi(k - 1) * (-2.0 * t1) / self.radius.0;
        let dp2 = k as f64 * q2.powi(k - 1) * (-2.0 * t2) / self.radius.1;
        let a = self.amplitude;
        (a * p1 * p2, a * dp1 * p2, a * p1 * dp2)
    }
}

/// Partial derivatives of the unit normal along the parameters.
fn normal_derivatives(jet: &SurfaceJet) -> (Vec3, Vec3) {
    let n = jet.s1.cross(&jet.s2);
    let len = n.norm();
    let d = |ni: Vec3| (ni - jet.xi * jet.xi.dot(&ni)) / len;
    let n1 = jet.s11.cross(&jet.s2) + jet.s1.cross(&jet.s12);
    let n2 = jet.s12.cross(&jet.s2) + jet.s1.cross(&jet.s22);
    (d(n1), d(n2))
}

/// Energy of `σ + ε b ξ` over the support of `b`.
fn perturbed_energy(
    surface: &TranslationSurface,
    cfg: &SingularConfig,
    bump: &Bump,
    eps: f64,
    rule: &GaussLegendre,
) -> Result<f64> {
    let support = bump.support()?;
    integrate_rect(rule, &support, |s1, s2| {
        let jet = surface.jet(s1, s2)?;
        let (b, b1, b2) = bump.eval(s1, s2);
        let (xi1, xi2) = normal_derivatives(&jet);
        let p = jet.pos + eps * b * jet.xi;
        let t1 = jet.s1 + eps * (b1 * jet.xi + b * xi1);
        let t2 = jet.s2 + eps * (b2 * jet.xi + b * xi2);
        let height = p.dot(&cfg.u());
        if !(height > 0.0) {
            return Err(Error::HalfspaceViolation { height });
        }
        Ok(height.powf(cfg.alpha()) * t1.cross(&t2).norm())
    })
}

/// Symmetric difference `[E(σ + ε b ξ) - E(σ - ε b ξ)] / 2ε` of the
/// potential energy; the bias is `O(ε²)`.
pub fn first_variation(
    surface: &TranslationSurface,
    cfg: &SingularConfig,
    bump: &Bump,
    eps: f64,
) -> Result<f64> {
    if cfg.connection() != ConnectionKind::LeviCivita {
        return Err(Error::UnsupportedConnection);
    }
    if !(eps > 0.0) {
        return Err(Error::BadParam(format!("eps = {eps} must be positive")));
    }
    check_region(surface, &bump.support()?)?;
    if bump.amplitude == 0.0 {
        return Ok(0.0);
    }
    let rule = gauss_rule(48)?;
    let plus = perturbed_energy(surface, cfg, bump, eps, &rule)?;
    let minus = perturbed_energy(surface, cfg, bump, -eps, &rule)?;
    Ok((plus - minus) / (2.0 * eps))
}
