//! Adaptive Gauss–Kronrod quadrature and profiles defined by integrals of
//! inverse-square-root radicals.
//!
//! All quadrature-defined solution families share the integrand
//!
//! ```text
//! phi(t) = w^p (a w^(2b) + c)^(-1/2),    w = t + shift > 0,
//! ```
//!
//! whose radicand usually vanishes at a branch point `w_b`. Near `w_b` the
//! integrand behaves like `|w - w_b|^(-1/2)`; the antiderivative is taken in
//! the variable `tau` with `w = w_b ± tau^2`, which makes the integrand
//! smooth and keeps the Kronrod rule spectrally convergent.

use crate::error::{Error, Result};
use crate::jets::{Interval, ScalarJet, DOMAIN_MARGIN};

// Kronrod 15-point nodes and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod estimate on `[a, b]` and its difference to the
/// embedded Gauss rule.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrate `f` over `[a, b]` by globally adaptive bisection of the
/// interval with the largest Gauss–Kronrod error estimate.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_INTERVALS: usize = 500;
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if !total.is_finite() {
            return Err(Error::Quadrature { estimate: err });
        }
        if parts.len() >= MAX_INTERVALS {
            // Accept a result whose error is at roundoff level.
            if err <= 1e3 * f64::EPSILON * total.abs().max(1.0) {
                break;
            }
            return Err(Error::Quadrature { estimate: err });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.3 > acc.1 {
                    (i, p.3)
                } else {
                    acc
                }
            });
        let (lo, hi, v0, e0) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    // Re-sum to drop the drift of the incremental updates.
    Ok(parts.iter().map(|p| p.2).sum())
}

const ABS_TOL: f64 = 1e-15;
const REL_TOL: f64 = 1e-14;

/// The quadrature-defined solution families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadFamily {
    /// `y = sign * int [c3 (f + c2)^(2 alpha) + c4]^(-1/2) df`, inverted to `f(y)`.
    EmdenFowler { alpha: f64, c2: f64, c3: f64, c4: f64 },
    /// `f(x) = sign |c3| sqrt(1 + c2^2) int (x^(2 alpha) - c3^2)^(-1/2) dx`.
    DSingularZ { alpha: f64, c2: f64, c3: f64 },
    /// `f(x) = sign |c3| sqrt(1 + c2^2) int x^b (1 - c3^2 x^(2b))^(-1/2) dx`
    /// with `b = -alpha`.
    DSingularY { alpha: f64, c2: f64, c3: f64 },
    /// `z = sign * int [c2^2 (c1 + g)^(2 alpha) - 1]^(-1/2) dg`, inverted to `g(z)`.
    DSingularX { alpha: f64, c1: f64, c2: f64 },
}

impl QuadFamily {
    /// Whether the profile variable is the integral (the profile is the
    /// inverse of the antiderivative).
    pub fn is_inverse(&self) -> bool {
        matches!(self, Self::EmdenFowler { .. } | Self::DSingularX { .. })
    }

    fn alpha(&self) -> f64 {
        match *self {
            Self::EmdenFowler { alpha, .. }
            | Self::DSingularZ { alpha, .. }
            | Self::DSingularY { alpha, .. }
            | Self::DSingularX { alpha, .. } => alpha,
        }
    }

    fn radical(&self) -> Result<Radical> {
        let alpha = self.alpha();
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::BadParam("alpha must be a nonzero real".into()));
        }
        Ok(match *self {
            Self::EmdenFowler { c2, c3, c4, .. } => {
                if c3 == 0.0 {
                    return Err(Error::BadParam("c3 != 0 is required".into()));
                }
                Radical::new(c2, 0.0, alpha, c3, c4)
            }
            Self::DSingularZ { c3, .. } => {
                if c3 == 0.0 {
                    return Err(Error::BadParam("c3 != 0 is required".into()));
                }
                Radical::new(0.0, 0.0, alpha, 1.0, -c3 * c3)
            }
            Self::DSingularY { c3, .. } => {
                if c3 == 0.0 {
                    return Err(Error::BadParam("c3 != 0 is required".into()));
                }
                Radical::new(0.0, -alpha, -alpha, -c3 * c3, 1.0)
            }
            Self::DSingularX { c1, c2, .. } => {
                if c2 == 0.0 {
                    return Err(Error::BadParam("c2 != 0 is required".into()));
                }
                Radical::new(c1, 0.0, alpha, c2 * c2, -1.0)
            }
        })
    }

    fn prefactor(&self) -> f64 {
        match *self {
            Self::DSingularZ { c2, c3, .. } | Self::DSingularY { c2, c3, .. } => {
                c3.abs() * (1.0 + c2 * c2).sqrt()
            }
            _ => 1.0,
        }
    }
}

/// `phi(t) = w^p (a w^(2 beta) + c)^(-1/2)` with `w = t + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Radical {
    shift: f64,
    p: f64,
    beta: f64,
    a: f64,
    c: f64,
    /// Branch point in `w` where the radicand vanishes, if any.
    branch: Option<f64>,
}

impl Radical {
    fn new(shift: f64, p: f64, beta: f64, a: f64, c: f64) -> Self {
        let branch = (a * c < 0.0).then(|| (-c / a).powf(0.5 / beta));
        Self {
            shift,
            p,
            beta,
            a,
            c,
            branch,
        }
    }

    /// `+1` if the valid side lies above the branch point, `-1` if below.
    fn valid_side(&self) -> f64 {
        if self.c * self.beta < 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Radicand as a function of `w`; uses the branch-relative form
    /// `-c expm1(2 beta ln(w / w_b))` to avoid cancellation.
    fn radicand(&self, w: f64) -> f64 {
        match self.branch {
            Some(wb) => self.radicand_offset(wb, w - wb),
            None => self.a * w.powf(2.0 * self.beta) + self.c,
        }
    }

    fn radicand_offset(&self, wb: f64, d: f64) -> f64 {
        -self.c * (2.0 * self.beta * (d / wb).ln_1p()).exp_m1()
    }

    fn radicand_prime(&self, w: f64) -> f64 {
        2.0 * self.beta * self.a * w.powf(2.0 * self.beta - 1.0)
    }

    fn phi(&self, w: f64) -> f64 {
        w.powf(self.p) / self.radicand(w).sqrt()
    }

    fn phi_prime(&self, w: f64) -> f64 {
        let r = self.radicand(w);
        let wp = w.powf(self.p);
        self.p * wp / w / r.sqrt() - 0.5 * wp * self.radicand_prime(w) / (r * r.sqrt())
    }
}

/// A profile defined by the antiderivative of a [`QuadFamily`] integrand,
/// or by its inverse.
#[derive(Debug, Clone)]
pub struct QuadProfile {
    family: QuadFamily,
    radical: Radical,
    sign: f64,
    scale: f64,
    /// Valid interval of the integration variable `t`.
    t_domain: Interval,
    /// Anchor of the antiderivative (the branch point when present).
    t_anchor: f64,
    domain: Interval,
}

impl QuadProfile {
    /// Build the profile on the valid interval of length at most `span`
    /// adjacent to the branch point (or to `w = 1` when the radicand has
    /// no zero).
    pub fn new(family: QuadFamily, sign: f64, span: f64) -> Result<Self> {
        if sign.abs() != 1.0 {
            return Err(Error::BadParam("sign must be +1 or -1".into()));
        }
        if !(span > 0.0 && span.is_finite()) {
            return Err(Error::BadParam("span must be positive".into()));
        }
        let radical = family.radical()?;
        let shift = radical.shift;
        let (w_lo, w_hi, w_anchor) = match radical.branch {
            Some(wb) => {
                if radical.valid_side() > 0.0 {
                    (wb, wb + span, wb)
                } else {
                    ((wb - span).max(0.0), wb, wb)
                }
            }
            None => {
                if radical.a < 0.0 {
                    return Err(Error::BadParam(
                        "radicand is negative everywhere; no real solution".into(),
                    ));
                }
                (1.0, 1.0 + span, 1.0)
            }
        };
        let t_domain = Interval::open(w_lo - shift, w_hi - shift)?;
        let mut profile = Self {
            family,
            radical,
            sign,
            scale: family.prefactor(),
            t_domain,
            t_anchor: w_anchor - shift,
            domain: t_domain,
        };
        if family.is_inverse() {
            let a = sign * profile.antiderivative(t_domain.lo)?;
            let b = sign * profile.antiderivative(t_domain.hi)?;
            profile.domain = Interval::new(a.min(b), a.max(b))?;
        }
        Ok(profile)
    }

    pub fn family(&self) -> QuadFamily {
        self.family
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    /// Domain of the profile variable.
    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Valid interval of the integration variable.
    pub fn integration_domain(&self) -> Interval {
        self.t_domain
    }

    /// Branch point in the integration variable, if the radicand vanishes.
    pub fn branch_point(&self) -> Option<f64> {
        self.radical.branch.map(|wb| wb - self.radical.shift)
    }

    /// The integrand at `t`.
    pub fn integrand(&self, t: f64) -> f64 {
        self.radical.phi(t + self.radical.shift)
    }

    /// Radicand of the integrand at `t`.
    pub fn radicand(&self, t: f64) -> f64 {
        self.radical.radicand(t + self.radical.shift)
    }

    /// Integrand in the `tau` variable, `2 tau phi(t_b + side tau^2)`.
    fn tau_integrand(&self, wb: f64, side: f64, tau: f64) -> f64 {
        let d = side * tau * tau;
        let w = wb + d;
        2.0 * tau * w.powf(self.radical.p) / self.radical.radicand_offset(wb, d).sqrt()
    }

    /// Limit of the `tau` integrand at `tau = 0`.
    fn tau_slope_at_zero(&self, wb: f64) -> f64 {
        2.0 * wb.powf(self.radical.p) / self.radical.radicand_prime(wb).abs().sqrt()
    }

    /// `int_{0}^{tau} 2 s phi(t_b + side s^2) ds`.
    fn tau_antiderivative(&self, wb: f64, side: f64, tau: f64) -> Result<f64> {
        integrate_adaptive(
            |s| self.tau_integrand(wb, side, s),
            0.0,
            tau,
            ABS_TOL,
            REL_TOL,
        )
    }

    /// `int_{t_anchor}^{t} phi`, with the inverse-square-root endpoint
    /// removed by substitution.
    pub fn antiderivative(&self, t: f64) -> Result<f64> {
        self.t_domain.check(t)?;
        match self.radical.branch {
            Some(wb) => {
                let side = self.radical.valid_side();
                let tau = ((t - self.t_anchor) * side).max(0.0).sqrt();
                Ok(side * self.tau_antiderivative(wb, side, tau)?)
            }
            None => integrate_adaptive(|s| self.integrand(s), self.t_anchor, t, ABS_TOL, REL_TOL),
        }
    }

    /// Profile variable belonging to integration variable `t`. For direct
    /// families this is `t` itself.
    pub fn parameter_of(&self, t: f64) -> Result<f64> {
        if self.family.is_inverse() {
            Ok(self.sign * self.antiderivative(t)?)
        } else {
            self.t_domain.check(t)?;
            Ok(t)
        }
    }

    /// Integration variable `t` with `sign * F(t) = param` (inverse families).
    pub fn invert(&self, param: f64) -> Result<f64> {
        self.domain.check(param)?;
        let target = self.sign * param;
        match self.radical.branch {
            Some(wb) => {
                let side = self.radical.valid_side();
                let tau_max = ((self.t_domain.lo - self.t_anchor).abs())
                    .max((self.t_domain.hi - self.t_anchor).abs())
                    .sqrt();
                let goal = (side * target).max(0.0);
                let slope0 = self.tau_slope_at_zero(wb);
                let tau = solve_monotone(
                    |tau| self.tau_antiderivative(wb, side, tau),
                    |tau| {
                        if tau == 0.0 {
                            slope0
                        } else {
                            self.tau_integrand(wb, side, tau)
                        }
                    },
                    goal,
                    0.0,
                    tau_max,
                    (goal / slope0).min(tau_max),
                )?;
                let t = self.t_anchor + side * tau * tau;
                Ok(t.clamp(self.t_domain.lo, self.t_domain.hi))
            }
            None => {
                let guess = self.t_anchor + target * self.radical.radicand(1.0).sqrt();
                solve_monotone(
                    |t| self.antiderivative(t),
                    |t| self.integrand(t),
                    target,
                    self.t_domain.lo,
                    self.t_domain.hi,
                    guess.clamp(self.t_domain.lo, self.t_domain.hi),
                )
            }
        }
    }

    pub fn eval(&self, s: f64, order: usize) -> Result<ScalarJet> {
        if order > 2 {
            return Err(Error::UnsupportedOrder {
                order,
                what: "quadrature-defined profile",
            });
        }
        self.domain.check(s)?;
        let r = &self.radical;
        if self.family.is_inverse() {
            let t = self.invert(s)?;
            let w = t + r.shift;
            let rad = r.radicand(w);
            let wp = w.powf(-r.p);
            // t'(s) = sign / phi(t),  t''(s) = -phi'(t) / phi(t)^3
            let d1 = self.sign * wp * rad.sqrt();
            let d2 = -r.p * wp * wp / w * rad + 0.5 * wp * wp * r.radicand_prime(w);
            Ok(ScalarJet::new(t, d1, d2, f64::NAN))
        } else {
            let value = if order == 0 || s != self.t_anchor {
                self.sign * self.scale * self.antiderivative(s)?
            } else {
                0.0
            };
            let w = s + r.shift;
            Ok(ScalarJet::new(
                value,
                self.sign * self.scale * r.phi(w),
                self.sign * self.scale * r.phi_prime(w),
                f64::NAN,
            ))
        }
    }
}

/// Solve `g(x) = goal` for increasing `g` on `[lo, hi]` by Newton's method
/// safeguarded with bisection.
fn solve_monotone<G, D>(g: G, dg: D, goal: f64, lo: f64, hi: f64, guess: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut x = guess.clamp(lo, hi);
    for _ in 0..200 {
        let r = g(x)? - goal;
        if r == 0.0 {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = dg(x);
        let mut next = x - r / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(DOMAIN_MARGIN)
            || hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1e-300)
        {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gk_integrates_polynomials_exactly() {
        let v = integrate_adaptive(|x| 3.0 * x * x, 0.0, 2.0, 1e-15, 1e-15).unwrap();
        assert_abs_diff_eq!(v, 8.0, epsilon = 1e-14);
    }

    #[test]
    fn adaptive_handles_inverse_square_root_after_substitution() {
        // int_0^1 x^{-1/2} dx = 2 via x = tau^2
        let v = integrate_adaptive(|t| 2.0 * t / t, 0.0, 1.0, 1e-15, 1e-14).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-14);
        // raw endpoint singularity still converges, slowly
        let raw = integrate_adaptive(|x| x.powf(-0.5), 0.0, 1.0, 1e-10, 1e-10);
        assert!(raw.map(|v| (v - 2.0).abs() < 1e-6).unwrap_or(true));
    }

    #[test]
    fn d_singular_x_unit_case_is_cosh() {
        // c2^2 (c1 + g)^2 - 1 with alpha = 1, c2 = 1, c1 = 0: z = acosh g
        let q = QuadProfile::new(
            QuadFamily::DSingularX {
                alpha: 1.0,
                c1: 0.0,
                c2: 1.0,
            },
            1.0,
            2.0,
        )
        .unwrap();
        assert_abs_diff_eq!(q.domain().hi, 3f64.acosh(), epsilon = 1e-8);
        for k in 1..20 {
            let z = 0.09 * k as f64;
            let jet = q.eval(z, 2).unwrap();
            assert_abs_diff_eq!(jet.value, z.cosh(), epsilon = 1e-12);
            assert_abs_diff_eq!(jet.d1, z.sinh(), epsilon = 1e-12);
            assert_abs_diff_eq!(jet.d2, z.cosh(), epsilon = 1e-12);
        }
    }

    #[test]
    fn d_singular_z_unit_case_is_acosh() {
        // f' = 1 / sqrt(x^2 - 1), f(1) = 0  =>  f = acosh x
        let q = QuadProfile::new(
            QuadFamily::DSingularZ {
                alpha: 1.0,
                c2: 0.0,
                c3: 1.0,
            },
            1.0,
            2.0,
        )
        .unwrap();
        for k in 1..20 {
            let x = 1.0 + 0.1 * k as f64;
            let jet = q.eval(x, 2).unwrap();
            assert_abs_diff_eq!(jet.value, x.acosh(), epsilon = 1e-12);
            assert_abs_diff_eq!(jet.d1, 1.0 / (x * x - 1.0).sqrt(), epsilon = 1e-12);
            assert_abs_diff_eq!(jet.d2, -x / (x * x - 1.0).powf(1.5), epsilon = 1e-10);
        }
    }

    #[test]
    fn branch_point_is_outside_domain() {
        let q = QuadProfile::new(
            QuadFamily::DSingularZ {
                alpha: 1.0,
                c2: 0.0,
                c3: 1.0,
            },
            1.0,
            2.0,
        )
        .unwrap();
        assert!(matches!(q.eval(1.0, 1), Err(Error::Domain { .. })));
        assert!(matches!(q.eval(1.5, 3), Err(Error::UnsupportedOrder { .. })));
    }

    #[test]
    fn emden_fowler_without_branch_point() {
        // c3 > 0, c4 > 0: radicand positive for every w > 0
        let q = QuadProfile::new(
            QuadFamily::EmdenFowler {
                alpha: 0.5,
                c2: 0.0,
                c3: 1.0,
                c4: 1.0,
            },
            -1.0,
            1.5,
        )
        .unwrap();
        assert!(q.branch_point().is_none());
        let dom = q.domain();
        for k in 0..=10 {
            let y = dom.lo + dom.width() * k as f64 / 10.0;
            let f = q.invert(y).unwrap();
            assert_abs_diff_eq!(q.parameter_of(f).unwrap(), y, epsilon = 1e-12);
        }
    }

    #[test]
    fn negative_radicand_rejected() {
        let err = QuadProfile::new(
            QuadFamily::EmdenFowler {
                alpha: 1.0,
                c2: 0.0,
                c3: -1.0,
                c4: -1.0,
            },
            1.0,
            1.0,
        );
        assert!(err.is_err());
    }
}
