//! Scalar profile functions and their derivative jets.
//!
//! Every translation surface is assembled from two profiles `f` and `g`.
//! A profile is evaluated to a [`ScalarJet`] holding the value and up to
//! three derivatives. Closed-form profiles differentiate analytically,
//! ODE-defined profiles come from a dense-output integrator, and
//! quadrature-defined profiles differentiate their integrand.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solutions::ode::OdeProfile;
use crate::solutions::quadrature::QuadProfile;

/// Margin by which open domains are shrunk on construction.
pub const DOMAIN_MARGIN: f64 = 1e-9;

/// Closed real interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::BadParam(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// The open interval `(lo, hi)`, represented by the closed interval
    /// shrunk by [`DOMAIN_MARGIN`] at each finite end.
    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        let lo_in = if lo.is_finite() { lo + DOMAIN_MARGIN } else { lo };
        let hi_in = if hi.is_finite() { hi - DOMAIN_MARGIN } else { hi };
        Self::new(lo_in, hi_in)
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.lo && s <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    pub fn check(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::Domain {
                point: s,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n >= 2` equally spaced points from `lo` to `hi` inclusive.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        let step = self.width() / (n - 1) as f64;
        (0..n)
            .map(|i| if i + 1 == n { self.hi } else { self.lo + step * i as f64 })
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Value and first three derivatives of a profile at a point.
///
/// Derivatives above the order requested from [`ProfileFn::eval_jet`] are
/// left as NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl ScalarJet {
    pub fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { value, d1, d2, d3 }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0, 0.0)
    }

    pub(crate) fn truncate(mut self, order: usize) -> Self {
        if order < 3 {
            self.d3 = f64::NAN;
        }
        if order < 2 {
            self.d2 = f64::NAN;
        }
        if order < 1 {
            self.d1 = f64::NAN;
        }
        self
    }
}

/// Closed-form profiles with analytic derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum Analytic {
    /// `sum_k coeffs[k] s^k`.
    Polynomial(Vec<f64>),
    /// `(1/lambda) cosh(lambda s + mu)`.
    Catenary { lambda: f64, mu: f64 },
    /// `scale * ln|cos(freq s + phase)| + offset`, on the branch where
    /// `freq s + phase` lies in `(-pi/2, pi/2)`.
    LogCos {
        scale: f64,
        freq: f64,
        phase: f64,
        offset: f64,
    },
    /// `sign * (1/2) atan( sqrt(e^{4s} - c2^2) / c2 ) + c3` for `s > ln|c2| / 2`.
    Arctan { c2: f64, c3: f64, sign: f64 },
    /// `amp * sin(freq s + phase)`.
    Sine { amp: f64, freq: f64, phase: f64 },
}

impl Analytic {
    fn validate(&self) -> Result<()> {
        match *self {
            Analytic::Polynomial(ref c) if c.is_empty() => {
                Err(Error::BadParam("polynomial needs at least one coefficient".into()))
            }
            Analytic::Catenary { lambda, .. } if lambda == 0.0 => {
                Err(Error::BadParam("catenary requires lambda != 0".into()))
            }
            Analytic::LogCos { freq, .. } if freq == 0.0 => {
                Err(Error::BadParam("log-cos profile requires freq != 0".into()))
            }
            Analytic::Arctan { c2, .. } if c2 == 0.0 => {
                Err(Error::BadParam("arctan profile requires c2 != 0".into()))
            }
            Analytic::Arctan { sign, .. } if sign.abs() != 1.0 => {
                Err(Error::BadParam("sign must be +1 or -1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Maximal open interval on which the profile is smooth.
    pub fn natural_domain(&self) -> Result<Interval> {
        match *self {
            Analytic::LogCos { freq, phase, .. } => {
                let a = (-FRAC_PI_2 - phase) / freq;
                let b = (FRAC_PI_2 - phase) / freq;
                Interval::open(a.min(b), a.max(b))
            }
            Analytic::Arctan { c2, .. } => Interval::open(0.5 * c2.abs().ln(), f64::INFINITY),
            _ => Ok(Interval::real_line()),
        }
    }

    fn jet(&self, s: f64) -> ScalarJet {
        match *self {
            Analytic::Polynomial(ref c) => {
                // Horner for P, P', P''/2 and P'''/6 at once.
                let (mut p0, mut p1, mut p2, mut p3) = (0.0, 0.0, 0.0, 0.0);
                for &a in c.iter().rev() {
                    p3 = p3 * s + p2;
                    p2 = p2 * s + p1;
                    p1 = p1 * s + p0;
                    p0 = p0 * s + a;
                }
                ScalarJet::new(p0, p1, 2.0 * p2, 6.0 * p3)
            }
            Analytic::Catenary { lambda, mu } => {
                let t = lambda * s + mu;
                let (sh, ch) = (t.sinh(), t.cosh());
                ScalarJet::new(ch / lambda, sh, lambda * ch, lambda * lambda * sh)
            }
            Analytic::LogCos {
                scale,
                freq,
                phase,
                offset,
            } => {
                let t = freq * s + phase;
                let tan = t.tan();
                let sec2 = 1.0 + tan * tan;
                ScalarJet::new(
                    scale * t.cos().abs().ln() + offset,
                    -scale * freq * tan,
                    -scale * freq * freq * sec2,
                    -2.0 * scale * freq.powi(3) * sec2 * tan,
                )
            }
            Analytic::Arctan { c2, c3, sign } => {
                // e^{4s} - c2^2 = c2^2 expm1(4s - 2 ln|c2|), accurate near the branch point.
                let e = (4.0 * s).exp();
                let gap = c2 * c2 * (4.0 * s - 2.0 * c2.abs().ln()).exp_m1();
                let root = gap.sqrt();
                ScalarJet::new(
                    sign * 0.5 * (root / c2).atan() + c3,
                    sign * c2 / root,
                    -2.0 * sign * c2 * e / (gap * root),
                    4.0 * sign * c2 * e * (e + 2.0 * c2 * c2) / (gap * gap * root),
                )
            }
            Analytic::Sine { amp, freq, phase } => {
                let t = freq * s + phase;
                let (sn, cs) = t.sin_cos();
                ScalarJet::new(
                    amp * sn,
                    amp * freq * cs,
                    -amp * freq * freq * sn,
                    -amp * freq.powi(3) * cs,
                )
            }
        }
    }
}

/// How a profile is defined.
#[derive(Debug, Clone)]
pub enum ProfileKind {
    Constant(f64),
    Linear { intercept: f64, slope: f64 },
    Analytic(Analytic),
    /// Dense-output solution of a second-order ODE.
    Tabulated(Arc<OdeProfile>),
    /// Antiderivative (or its inverse) computed by adaptive quadrature.
    Quadrature(Arc<QuadProfile>),
}

/// A profile function `I -> R` with its declared domain.
#[derive(Debug, Clone)]
pub struct ProfileFn {
    kind: ProfileKind,
    domain: Interval,
}

impl ProfileFn {
    pub fn constant(c: f64) -> Self {
        Self {
            kind: ProfileKind::Constant(c),
            domain: Interval::real_line(),
        }
    }

    pub fn linear(intercept: f64, slope: f64) -> Self {
        Self {
            kind: ProfileKind::Linear { intercept, slope },
            domain: Interval::real_line(),
        }
    }

    pub fn analytic(a: Analytic) -> Result<Self> {
        a.validate()?;
        let domain = a.natural_domain()?;
        Ok(Self {
            kind: ProfileKind::Analytic(a),
            domain,
        })
    }

    pub fn polynomial(coeffs: impl Into<Vec<f64>>) -> Self {
        Self::analytic(Analytic::Polynomial(coeffs.into()))
            .unwrap_or_else(|_| Self::constant(0.0))
    }

    pub fn tabulated(profile: OdeProfile) -> Self {
        let domain = profile.domain();
        Self {
            kind: ProfileKind::Tabulated(Arc::new(profile)),
            domain,
        }
    }

    pub fn quadrature(profile: QuadProfile) -> Self {
        let domain = profile.domain();
        Self {
            kind: ProfileKind::Quadrature(Arc::new(profile)),
            domain,
        }
    }

    /// Restrict the domain to a sub-interval of the current one.
    pub fn restricted(mut self, domain: Interval) -> Result<Self> {
        if !self.domain.contains_interval(&domain) {
            return Err(Error::BadParam(format!(
                "domain {domain} is not inside {}",
                self.domain
            )));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Highest derivative order [`eval_jet`](Self::eval_jet) can supply.
    pub fn max_order(&self) -> usize {
        match &self.kind {
            ProfileKind::Tabulated(t) => t.max_order(),
            ProfileKind::Quadrature(_) => 2,
            _ => 3,
        }
    }

    /// Value and derivatives up to `order` (at most 3) at `s`.
    pub fn eval_jet(&self, s: f64, order: usize) -> Result<ScalarJet> {
        self.domain.check(s)?;
        if order > self.max_order() {
            return Err(Error::UnsupportedOrder {
                order,
                what: match self.kind {
                    ProfileKind::Quadrature(_) => "quadrature-defined profile",
                    ProfileKind::Tabulated(_) => "tabulated profile",
                    _ => "profile",
                },
            });
        }
        let jet = match &self.kind {
            ProfileKind::Constant(c) => ScalarJet::constant(*c),
            ProfileKind::Linear { intercept, slope } => {
                ScalarJet::new(intercept + slope * s, *slope, 0.0, 0.0)
            }
            ProfileKind::Analytic(a) => a.jet(s),
            ProfileKind::Tabulated(t) => t.eval(s, order)?,
            ProfileKind::Quadrature(q) => q.eval(s, order)?,
        };
        Ok(jet.truncate(order))
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        Ok(self.eval_jet(s, 0)?.value)
    }
}

/// Central-difference jet from value samples with a single step `h`.
pub fn fd_jet(profile: &ProfileFn, s: f64, h: f64) -> Result<ScalarJet> {
    if !(h > 0.0) {
        return Err(Error::BadParam(format!("step h = {h} must be positive")));
    }
    let dom = profile.domain();
    dom.check(s - 2.0 * h)?;
    dom.check(s + 2.0 * h)?;
    let v = |x: f64| profile.value(x);
    let (m2, m1, c, p1, p2) = (v(s - 2.0 * h)?, v(s - h)?, v(s)?, v(s + h)?, v(s + 2.0 * h)?);
    Ok(ScalarJet::new(
        c,
        (p1 - m1) / (2.0 * h),
        (p1 - 2.0 * c + m1) / (h * h),
        (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h),
    ))
}

/// Central-difference jet with per-order steps `eps^(1/(k+2)) (1 + |s|)`.
pub fn fd_jet_auto(profile: &ProfileFn, s: f64) -> Result<ScalarJet> {
    let scale = 1.0 + s.abs();
    let h1 = f64::EPSILON.cbrt() * scale;
    let h2 = f64::EPSILON.powf(0.25) * scale;
    let h3 = f64::EPSILON.powf(0.2) * scale;
    let j1 = fd_jet(profile, s, h1)?;
    let j2 = fd_jet(profile, s, h2)?;
    let j3 = fd_jet(profile, s, h3)?;
    Ok(ScalarJet::new(j1.value, j1.d1, j2.d2, j3.d3))
}
