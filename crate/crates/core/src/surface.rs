//! Translation surfaces of the three graph types and their local geometry.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Interval, ProfileFn, ScalarJet};

pub type Vec3 = Vector3<f64>;

/// Which coordinate is the graph of the other two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceType {
    /// `z = f(x) + g(y)`, parameters `(x, y)`.
    TypeZ,
    /// `y = f(x) + g(z)`, parameters `(x, z)`.
    TypeY,
    /// `x = f(y) + g(z)`, parameters `(y, z)`.
    TypeX,
}

impl SurfaceType {
    pub const ALL: [SurfaceType; 3] = [SurfaceType::TypeZ, SurfaceType::TypeY, SurfaceType::TypeX];

    pub fn name(self) -> &'static str {
        match self {
            SurfaceType::TypeZ => "z = f(x) + g(y)",
            SurfaceType::TypeY => "y = f(x) + g(z)",
            SurfaceType::TypeX => "x = f(y) + g(z)",
        }
    }

    /// Names of the two surface parameters.
    pub fn parameter_names(self) -> (&'static str, &'static str) {
        match self {
            SurfaceType::TypeZ => ("x", "y"),
            SurfaceType::TypeY => ("x", "z"),
            SurfaceType::TypeX => ("y", "z"),
        }
    }

    /// Place `(s1, s2, h)` into ambient coordinates, where `h` is the graph value.
    fn embed(self, s1: f64, s2: f64, h: f64) -> Vec3 {
        match self {
            SurfaceType::TypeZ => Vec3::new(s1, s2, h),
            SurfaceType::TypeY => Vec3::new(s1, h, s2),
            SurfaceType::TypeX => Vec3::new(h, s1, s2),
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurfaceType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" | "typez" | "type_z" => Ok(SurfaceType::TypeZ),
            "y" | "typey" | "type_y" => Ok(SurfaceType::TypeY),
            "x" | "typex" | "type_x" => Ok(SurfaceType::TypeX),
            other => Err(Error::Parse(format!(
                "unknown surface type '{other}' (expected z, y or x)"
            ))),
        }
    }
}

/// Parameter rectangle `s1 x s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub s1: Interval,
    pub s2: Interval,
}

impl Rect {
    pub fn new(s1: Interval, s2: Interval) -> Self {
        Self { s1, s2 }
    }

    pub fn from_bounds(s1: (f64, f64), s2: (f64, f64)) -> Result<Self> {
        Ok(Self::new(
            Interval::new(s1.0, s1.1)?,
            Interval::new(s2.0, s2.1)?,
        ))
    }

    pub fn contains(&self, s1: f64, s2: f64) -> bool {
        self.s1.contains(s1) && self.s2.contains(s2)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.s1.contains_interval(&other.s1) && self.s2.contains_interval(&other.s2)
    }

    /// Row-major grid of `n1 x n2` points including the corners; the
    /// point `(i, j)` sits at index `i * n2 + j`.
    pub fn grid(&self, n1: usize, n2: usize) -> Vec<(f64, f64)> {
        let a = self.s1.linspace(n1);
        let b = self.s2.linspace(n2);
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .collect()
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.s1, self.s2)
    }
}

/// A translation surface: graph of `f(s1) + g(s2)` in the direction fixed
/// by its [`SurfaceType`].
#[derive(Debug, Clone)]
pub struct TranslationSurface {
    pub stype: SurfaceType,
    pub f: ProfileFn,
    pub g: ProfileFn,
    domain: Rect,
}

impl TranslationSurface {
    /// The domain is the product of the profile domains.
    pub fn new(stype: SurfaceType, f: ProfileFn, g: ProfileFn) -> Self {
        let domain = Rect::new(f.domain(), g.domain());
        Self {
            stype,
            f,
            g,
            domain,
        }
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    /// Restrict to a sub-rectangle of the current domain.
    pub fn restricted(mut self, domain: Rect) -> Result<Self> {
        if !self.domain.contains_rect(&domain) {
            return Err(Error::BadParam(format!(
                "rectangle {domain} is not inside the surface domain {}",
                self.domain
            )));
        }
        self.domain = domain;
        Ok(self)
    }

    fn check(&self, s1: f64, s2: f64) -> Result<()> {
        self.domain.s1.check(s1)?;
        self.domain.s2.check(s2)
    }

    pub fn position(&self, s1: f64, s2: f64) -> Result<Vec3> {
        self.check(s1, s2)?;
        let h = self.f.value(s1)? + self.g.value(s2)?;
        Ok(self.stype.embed(s1, s2, h))
    }

    /// Profile jets at a point, to order 2 or 3.
    pub fn profile_jets(&self, s1: f64, s2: f64, order: usize) -> Result<(ScalarJet, ScalarJet)> {
        self.check(s1, s2)?;
        Ok((self.f.eval_jet(s1, order)?, self.g.eval_jet(s2, order)?))
    }

    pub fn jet(&self, s1: f64, s2: f64) -> Result<SurfaceJet> {
        surface_jet(self, s1, s2)
    }
}

/// Position, partial derivatives, unit normal and induced metric at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub stype: SurfaceType,
    pub pos: Vec3,
    pub s1: Vec3,
    pub s2: Vec3,
    pub s11: Vec3,
    pub s12: Vec3,
    pub s22: Vec3,
    pub xi: Vec3,
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    /// Square root of the metric determinant.
    pub w: f64,
}

impl SurfaceJet {
    /// Assemble the jet from the two profile jets at `(s1, s2)`.
    pub fn from_profiles(
        stype: SurfaceType,
        s1: f64,
        s2: f64,
        f: &ScalarJet,
        g: &ScalarJet,
    ) -> Result<Self> {
        let e = |a: f64, b: f64, c: f64| stype.embed(a, b, c);
        let (fp, gp) = (f.d1, g.d1);
        let pos = e(s1, s2, f.value + g.value);
        let d1 = e(1.0, 0.0, fp);
        let d2 = e(0.0, 1.0, gp);
        let s11 = e(0.0, 0.0, f.d2);
        let s22 = e(0.0, 0.0, g.d2);
        let s12 = Vec3::zeros();
        let w = (1.0 + fp * fp + gp * gp).sqrt();
        // Orientation as σ1 × σ2 for every type.
        let xi = match stype {
            SurfaceType::TypeZ => Vec3::new(-fp, -gp, 1.0),
            SurfaceType::TypeY => Vec3::new(fp, -1.0, gp),
            SurfaceType::TypeX => Vec3::new(1.0, -fp, -gp),
        } / w;
        let (g11, g12, g22) = (d1.dot(&d1), d1.dot(&d2), d2.dot(&d2));
        let det = g11 * g22 - g12 * g12;
        if !(det > 0.0) || !det.is_finite() || !xi.iter().all(|c| c.is_finite()) {
            return Err(Error::DegenerateMetric { det });
        }
        Ok(Self {
            stype,
            pos,
            s1: d1,
            s2: d2,
            s11,
            s12,
            s22,
            xi,
            g11,
            g12,
            g22,
            w,
        })
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    /// Second partial `σ_ij` for `i, j` in `{0, 1}`.
    pub fn second(&self, i: usize, j: usize) -> Vec3 {
        match (i, j) {
            (0, 0) => self.s11,
            (1, 1) => self.s22,
            _ => self.s12,
        }
    }

    /// First partial `σ_i` for `i` in `{0, 1}`.
    pub fn first(&self, i: usize) -> Vec3 {
        if i == 0 {
            self.s1
        } else {
            self.s2
        }
    }
}

/// Jet of `surface` at `(s1, s2)`.
pub fn surface_jet(surface: &TranslationSurface, s1: f64, s2: f64) -> Result<SurfaceJet> {
    let (f, g) = surface.profile_jets(s1, s2, 2)?;
    SurfaceJet::from_profiles(surface.stype, s1, s2, &f, &g)
}

/// Triangulated sample of a surface patch.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    /// Zero-based vertex indices, counter-clockwise about the normal.
    pub triangles: Vec<[usize; 3]>,
}

/// Sample `region` on an `nu x nv` grid. Vertex `(i, j)` has index `i * nv + j`.
pub fn make_mesh(surface: &TranslationSurface, region: &Rect, nu: usize, nv: usize) -> Result<Mesh> {
    if nu < 2 || nv < 2 {
        return Err(Error::BadParam(format!(
            "mesh needs at least 2 x 2 samples, got {nu} x {nv}"
        )));
    }
    for (iv, dv) in [(region.s1, surface.domain().s1), (region.s2, surface.domain().s2)] {
        if !dv.contains_interval(&iv) {
            let bad = if dv.contains(iv.lo) { iv.hi } else { iv.lo };
            return Err(Error::Domain {
                point: bad,
                lo: dv.lo,
                hi: dv.hi,
            });
        }
    }
    let mut vertices = Vec::with_capacity(nu * nv);
    let mut normals = Vec::with_capacity(nu * nv);
    for (a, b) in region.grid(nu, nv) {
        let jet = surface_jet(surface, a, b)?;
        vertices.push(jet.pos);
        normals.push(jet.xi);
    }
    let mut triangles = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let v00 = i * nv + j;
            let v10 = v00 + nv;
            triangles.push([v00, v10, v10 + 1]);
            triangles.push([v00, v10 + 1, v00 + 1]);
        }
    }
    Ok(Mesh {
        vertices,
        normals,
        triangles,
    })
}
