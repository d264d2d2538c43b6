//! Dormand–Prince 5(4) integrator with dense output, and tabulated
//! profiles built from it.

use crate::error::{Error, Result};
use crate::jets::{Interval, ScalarJet};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension (Shampine), as in Hairer's DOPRI5.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 200_000;
const BLOWUP: f64 = 1e12;

/// Tolerances and guards for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSolveConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    /// Minimum distance kept from a pole of the right-hand side.
    pub singularity_guard: f64,
    pub dense_output: bool,
}

impl Default for OdeSolveConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            max_step: f64::INFINITY,
            singularity_guard: 1e-6,
            dense_output: true,
        }
    }
}

impl OdeSolveConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::BadParam("rtol and atol must be positive".into()));
        }
        if !(self.max_step > 0.0) || !(self.singularity_guard >= 0.0) {
            return Err(Error::BadParam("max_step must be positive".into()));
        }
        Ok(())
    }
}

/// One accepted step with its continuous-extension coefficients.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub x0: f64,
    pub h: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn hi(&self) -> f64 {
        self.x0.max(self.x0 + self.h)
    }

    /// States at the start and end of the step.
    pub fn endpoints(&self) -> ([f64; N], [f64; N]) {
        let start = self.rcont[0];
        let mut end = start;
        for (e, d) in end.iter_mut().zip(&self.rcont[1]) {
            *e += d;
        }
        (start, end)
    }

    /// Interpolated state and its first two x-derivatives at `x`.
    pub fn eval(&self, x: f64) -> ([f64; N], [f64; N], [f64; N]) {
        let t = (x - self.x0) / self.h;
        let s = 1.0 - t;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        let mut y = [0.0; N];
        let mut dy = [0.0; N];
        let mut ddy = [0.0; N];
        for i in 0..N {
            y[i] = r1[i] + t * (r2[i] + s * (r3[i] + t * (r4[i] + s * r5[i])));
            dy[i] = (r2[i]
                + (1.0 - 2.0 * t) * r3[i]
                + t * (2.0 - 3.0 * t) * r4[i]
                + 2.0 * t * s * (1.0 - 2.0 * t) * r5[i])
                / self.h;
            ddy[i] = (-2.0 * r3[i]
                + (2.0 - 6.0 * t) * r4[i]
                + 2.0 * (1.0 - 6.0 * t + 6.0 * t * t) * r5[i])
                / (self.h * self.h);
        }
        (y, dy, ddy)
    }
}

/// Dense solution of an initial value problem.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    /// Steps sorted by increasing x regardless of integration direction.
    steps: Vec<DenseStep<N>>,
    pub x_start: f64,
    pub x_end: f64,
    /// Largest absolute local error estimate over accepted steps.
    pub error_bound: f64,
    pub accepted: usize,
    pub rejected: usize,
}

impl<const N: usize> DenseSolution<N> {
    pub fn domain(&self) -> Interval {
        Interval {
            lo: self.x_start.min(self.x_end),
            hi: self.x_start.max(self.x_end),
        }
    }

    pub fn steps(&self) -> &[DenseStep<N>] {
        &self.steps
    }

    fn step_at(&self, x: f64) -> Result<&DenseStep<N>> {
        self.domain().check(x)?;
        let idx = self.steps.partition_point(|s| s.hi() < x);
        Ok(&self.steps[idx.min(self.steps.len() - 1)])
    }

    pub fn eval(&self, x: f64) -> Result<([f64; N], [f64; N], [f64; N])> {
        Ok(self.step_at(x)?.eval(x))
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn is_finite<const N: usize>(v: &[f64; N]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn rms_norm<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    (v.iter().zip(scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt()
}

/// Integrate `y' = rhs(x, y)` from `x0` to `x_end` with DOPRI5.
///
/// `check` is called on every accepted state and may abort the
/// integration (e.g. when the solution leaves a halfspace).
pub fn integrate<const N: usize, F, C>(
    mut rhs: F,
    mut check: C,
    x0: f64,
    y0: [f64; N],
    x_end: f64,
    cfg: &OdeSolveConfig,
) -> Result<DenseSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    C: FnMut(f64, &[f64; N]) -> Result<()>,
{
    cfg.validate()?;
    if !(x0.is_finite() && x_end.is_finite()) || x0 == x_end {
        return Err(Error::BadParam(format!("bad integration interval {x0}..{x_end}")));
    }
    check(x0, &y0)?;
    let dir = (x_end - x0).signum();
    let span = (x_end - x0).abs();
    let max_step = cfg.max_step.min(span);

    let scale = |a: &[f64; N], b: &[f64; N]| {
        let mut s = [0.0; N];
        for i in 0..N {
            s[i] = cfg.atol + cfg.rtol * a[i].abs().max(b[i].abs());
        }
        s
    };

    let mut x = x0;
    let mut y = y0;
    let mut k1 = rhs(x, &y);
    if !is_finite(&k1) {
        return Err(Error::StepFailure {
            x,
            h: 0.0,
            reason: "non-finite right-hand side at the initial point".into(),
        });
    }

    // Initial step size (Hairer & Wanner, II.4).
    let mut h = {
        let sk = scale(&y, &y);
        let d0 = rms_norm(&y, &sk);
        let d1 = rms_norm(&k1, &sk);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(max_step);
        let y1 = axpy(&y, dir * h0, &[(1.0, &k1)]);
        let f1 = rhs(x + dir * h0, &y1);
        let mut diff = [0.0; N];
        for i in 0..N {
            diff[i] = f1[i] - k1[i];
        }
        let d2 = rms_norm(&diff, &sk) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(max_step)
    };

    let mut steps = Vec::new();
    let mut error_bound: f64 = 0.0;
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut last_rejected = false;

    loop {
        if accepted + rejected > MAX_STEPS {
            return Err(Error::StepFailure {
                x,
                h,
                reason: "maximum number of steps exceeded".into(),
            });
        }
        if h < 16.0 * f64::EPSILON * x.abs().max(1.0) {
            return Err(Error::StepFailure {
                x,
                h,
                reason: "step size underflow".into(),
            });
        }
        let mut last = false;
        if (x + dir * h - x_end) * dir >= 0.0 {
            h = (x_end - x).abs();
            last = true;
        }
        let hs = dir * h;

        let k2 = rhs(x + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(x + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            x + C4 * hs,
            &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            x + C5 * hs,
            &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            x + hs,
            &axpy(
                &y,
                hs,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            hs,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(x + hs, &y_new);

        let finite = [&k2, &k3, &k4, &k5, &k6, &k7, &y_new]
            .iter()
            .all(|v| is_finite(v));
        if !finite {
            rejected += 1;
            last_rejected = true;
            h *= 0.2;
            continue;
        }

        let mut err_vec = [0.0; N];
        for i in 0..N {
            err_vec[i] = hs
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = rms_norm(&err_vec, &scale(&y, &y_new));

        if err <= 1.0 {
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - hs * k7[i] - bspl;
                rcont[4][i] = hs
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            if cfg.dense_output || steps.is_empty() || last {
                steps.push(DenseStep { x0: x, h: hs, rcont });
            }
            error_bound = error_bound.max(err_vec.iter().fold(0.0, |m, e| m.max(e.abs())));
            accepted += 1;
            x = if last { x_end } else { x + hs };
            y = y_new;
            k1 = k7;
            if y.iter().any(|v| v.abs() > BLOWUP) {
                return Err(Error::StepFailure {
                    x,
                    h,
                    reason: "solution blow-up".into(),
                });
            }
            check(x, &y)?;
            if last {
                break;
            }
            let mut fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            last_rejected = false;
            h = (h * fac).min(max_step);
        } else {
            rejected += 1;
            last_rejected = true;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
    }

    if dir < 0.0 {
        steps.reverse();
    }
    Ok(DenseSolution {
        steps,
        x_start: x0,
        x_end,
        error_bound,
        accepted,
        rejected,
    })
}

/// Second-order ODEs `y'' = F(s, y, y')` whose solutions are profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondOrderOde {
    /// `f'' = -a f'^3 / ((1+c5^2) x) + 2 f'^2 / (1+c5^2) - a f' / x + 2`,
    /// the profile ODE of nabla-singular minimal cylinders `z = f(x) + c4 + c5 y`.
    AbelTypeZ { alpha: f64, c5: f64 },
    /// `f'' = -a f'^3 / ((1+c5^2) x) - 2 c5 f'^2 / (1+c5^2) - a f' / x - 2 c5`,
    /// the profile ODE of nabla-singular minimal cylinders `y = f(x) + c4 + c5 z`.
    AbelTypeY { alpha: f64, c5: f64 },
    /// `g'' = (a / (c1 + g) - 2 g') (1 + g'^2)`, the profile ODE of
    /// nabla-singular minimal cylinders `x = c1 + g(z)`.
    AutonomousTypeX { alpha: f64, c1: f64 },
}

impl SecondOrderOde {
    pub fn alpha(&self) -> f64 {
        match *self {
            Self::AbelTypeZ { alpha, .. }
            | Self::AbelTypeY { alpha, .. }
            | Self::AutonomousTypeX { alpha, .. } => alpha,
        }
    }

    /// Right-hand side `y''`.
    pub fn accel(&self, s: f64, y: f64, dy: f64) -> f64 {
        match *self {
            Self::AbelTypeZ { alpha, c5 } => {
                let k = 1.0 + c5 * c5;
                let u = dy;
                -alpha * u * u * u / (k * s) + 2.0 * u * u / k - alpha * u / s + 2.0
            }
            Self::AbelTypeY { alpha, c5 } => {
                let k = 1.0 + c5 * c5;
                let u = dy;
                -alpha * u * u * u / (k * s) - 2.0 * c5 * u * u / k - alpha * u / s - 2.0 * c5
            }
            Self::AutonomousTypeX { alpha, c1 } => {
                (alpha / (c1 + y) - 2.0 * dy) * (1.0 + dy * dy)
            }
        }
    }

    /// Total derivative of the right-hand side along a solution, `y'''`.
    pub fn jerk(&self, s: f64, y: f64, dy: f64) -> f64 {
        let a = self.accel(s, y, dy);
        match *self {
            Self::AbelTypeZ { alpha, c5 } => {
                let k = 1.0 + c5 * c5;
                let u = dy;
                let ds = alpha * u * u * u / (k * s * s) + alpha * u / (s * s);
                let du = -3.0 * alpha * u * u / (k * s) + 4.0 * u / k - alpha / s;
                ds + du * a
            }
            Self::AbelTypeY { alpha, c5 } => {
                let k = 1.0 + c5 * c5;
                let u = dy;
                let ds = alpha * u * u * u / (k * s * s) + alpha * u / (s * s);
                let du = -3.0 * alpha * u * u / (k * s) - 4.0 * c5 * u / k - alpha / s;
                ds + du * a
            }
            Self::AutonomousTypeX { alpha, c1 } => {
                let w = c1 + y;
                let q = 1.0 + dy * dy;
                let dy_term = -alpha / (w * w) * q;
                let ddy_term = -2.0 * q + (alpha / w - 2.0 * dy) * 2.0 * dy;
                dy_term * dy + ddy_term * a
            }
        }
    }
}

/// Where a tabulated profile takes its second derivative from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D2Source {
    /// Re-evaluate the ODE right-hand side at the interpolated state.
    Ode,
    /// Differentiate a quintic Hermite interpolant of `y'` through the step
    /// endpoints. Its defect against the ODE scales with the tolerance.
    Interpolant,
}

/// Dense-output solution of a [`SecondOrderOde`] used as a profile.
#[derive(Debug, Clone)]
pub struct OdeProfile {
    ode: SecondOrderOde,
    solution: DenseSolution<2>,
    d2_source: D2Source,
}

impl OdeProfile {
    /// Integrate `ode` from `(s0, y0, dy0)` to `s_end`.
    pub fn solve(
        ode: SecondOrderOde,
        s0: f64,
        y0: f64,
        dy0: f64,
        s_end: f64,
        cfg: &OdeSolveConfig,
    ) -> Result<Self> {
        let guard = cfg.singularity_guard;
        if !matches!(ode, SecondOrderOde::AutonomousTypeX { .. })
            && (s0 * s_end <= 0.0 || s0.abs().min(s_end.abs()) <= guard)
        {
            return Err(Error::BadParam(format!(
                "interval [{s0}, {s_end}] must stay on one side of the pole at x = 0"
            )));
        }
        let check = |s: f64, state: &[f64; 2]| -> Result<()> {
            match ode {
                SecondOrderOde::AutonomousTypeX { c1, .. } => {
                    let height = c1 + state[0];
                    if height <= guard {
                        return Err(Error::HalfspaceViolation { height });
                    }
                    Ok(())
                }
                _ => {
                    if s.abs() <= guard {
                        return Err(Error::BadParam(format!(
                            "integration reaches the pole at x = 0 (x = {s})"
                        )));
                    }
                    Ok(())
                }
            }
        };
        let solution = integrate(
            |s, state: &[f64; 2]| [state[1], ode.accel(s, state[0], state[1])],
            check,
            s0,
            [y0, dy0],
            s_end,
            &OdeSolveConfig {
                dense_output: true,
                ..*cfg
            },
        )?;
        Ok(Self {
            ode,
            solution,
            d2_source: D2Source::Ode,
        })
    }

    pub fn ode(&self) -> SecondOrderOde {
        self.ode
    }

    pub fn domain(&self) -> Interval {
        self.solution.domain()
    }

    pub fn solution(&self) -> &DenseSolution<2> {
        &self.solution
    }

    /// Recorded bound on the local error of the tabulated values.
    pub fn error_bound(&self) -> f64 {
        self.solution.error_bound
    }

    pub fn d2_source(&self) -> D2Source {
        self.d2_source
    }

    pub fn with_d2_source(&self, d2_source: D2Source) -> Self {
        Self {
            d2_source,
            ..self.clone()
        }
    }

    pub fn max_order(&self) -> usize {
        match self.d2_source {
            D2Source::Ode => 3,
            D2Source::Interpolant => 2,
        }
    }

    pub fn eval(&self, s: f64, order: usize) -> Result<ScalarJet> {
        let step = self.solution.step_at(s)?;
        let (y, _, _) = step.eval(s);
        let value = y[0];
        Ok(match self.d2_source {
            D2Source::Ode => {
                let d1 = y[1];
                let d3 = if order >= 3 {
                    self.ode.jerk(s, value, d1)
                } else {
                    f64::NAN
                };
                ScalarJet::new(value, d1, self.ode.accel(s, value, d1), d3)
            }
            D2Source::Interpolant => {
                let (d1, d2) = self.hermite_slope(step, s);
                ScalarJet::new(value, d1, d2, f64::NAN)
            }
        })
    }

    /// Quintic Hermite interpolant of `y'` on one step, matched to `y'`,
    /// `y''` and `y'''` at both ends. Returns its value and derivative at `s`.
    fn hermite_slope(&self, step: &DenseStep<2>, s: f64) -> (f64, f64) {
        let h = step.h;
        let (a, b) = step.endpoints();
        let (xa, xb) = (step.x0, step.x0 + h);
        let (u0, u1) = (a[1], b[1]);
        let (d0, d1) = (self.ode.accel(xa, a[0], a[1]), self.ode.accel(xb, b[0], b[1]));
        let (j0, j1) = (self.ode.jerk(xa, a[0], a[1]), self.ode.jerk(xb, b[0], b[1]));
        let c1 = h * d0;
        let c2 = 0.5 * h * h * j0;
        let r0 = u1 - (u0 + c1 + c2);
        let r1 = h * d1 - (c1 + 2.0 * c2);
        let r2 = h * h * j1 - 2.0 * c2;
        let c3 = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
        let c4 = -15.0 * r0 + 7.0 * r1 - r2;
        let c5 = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
        let t = (s - step.x0) / h;
        let value = u0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
        let slope = (c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)))) / h;
        (value, slope)
    }

    /// Largest defect `|d/ds p(s) - F(s, y, p(s))|` sampled inside every
    /// step, where `p` is the Hermite interpolant of `y'`.
    pub fn max_defect(&self, samples_per_step: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for step in self.solution.steps() {
            for k in 0..samples_per_step {
                let t = (k as f64 + 0.5) / samples_per_step as f64;
                let s = step.x0 + t * step.h;
                let (y, _, _) = step.eval(s);
                let (p, dp) = self.hermite_slope(step, s);
                let defect = (dp - self.ode.accel(s, y[0], p)).abs();
                worst = worst.max(defect);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let sol = integrate(
            |_, y: &[f64; 1]| [-y[0]],
            |_, _| Ok(()),
            0.0,
            [1.0],
            3.0,
            &OdeSolveConfig::with_tol(1e-10),
        )
        .unwrap();
        for k in 0..=60 {
            let x = 0.05 * k as f64;
            let (y, dy, _) = sol.eval(x).unwrap();
            assert_abs_diff_eq!(y[0], (-x).exp(), epsilon = 1e-9);
            assert_abs_diff_eq!(dy[0], -(-x).exp(), epsilon = 1e-7);
        }
    }

    #[test]
    fn backward_integration_is_sorted() {
        let sol = integrate(
            |x, _: &[f64; 1]| [x.cos()],
            |_, _| Ok(()),
            2.0,
            [2f64.sin()],
            -1.0,
            &OdeSolveConfig::with_tol(1e-10),
        )
        .unwrap();
        for k in 0..=30 {
            let x = -1.0 + 0.1 * k as f64;
            assert_abs_diff_eq!(sol.eval(x).unwrap().0[0], x.sin(), epsilon = 1e-8);
        }
        assert!(sol.eval(2.5).is_err());
    }

    #[test]
    fn finite_time_blowup_is_reported() {
        // y' = y^2, y(0) = 1 blows up at x = 1.
        let err = integrate(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            |_, _| Ok(()),
            0.0,
            [1.0],
            2.0,
            &OdeSolveConfig::with_tol(1e-8),
        )
        .unwrap_err();
        match err {
            Error::StepFailure { x, .. } => assert!((x - 1.0).abs() < 1e-3, "x = {x}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn abel_rhs_values() {
        let z = SecondOrderOde::AbelTypeZ { alpha: 1.0, c5: 0.0 };
        assert_eq!(z.accel(1.0, 0.0, 0.0), 2.0);
        let y = SecondOrderOde::AbelTypeY { alpha: 1.0, c5: 1.0 };
        assert_abs_diff_eq!(y.accel(1.0, 0.0, 1.0), -4.5, epsilon = 1e-15);
        let x = SecondOrderOde::AutonomousTypeX { alpha: 1.0, c1: 0.0 };
        assert_eq!(x.accel(0.0, 1.0, 0.0), 1.0);
        // equilibrium: a / (c1 + g) = 2 g'
        assert_eq!(x.accel(0.0, 2.0, 0.25), 0.0);
    }

    #[test]
    fn jerk_matches_finite_difference_along_solution() {
        let odes = [
            SecondOrderOde::AbelTypeZ { alpha: 0.7, c5: 0.4 },
            SecondOrderOde::AbelTypeY { alpha: -1.3, c5: 0.8 },
            SecondOrderOde::AutonomousTypeX { alpha: 1.0, c1: 0.5 },
        ];
        for ode in odes {
            let p = OdeProfile::solve(ode, 1.0, 1.0, 0.1, 1.3, &OdeSolveConfig::with_tol(1e-12))
                .unwrap();
            let s = 1.15;
            let h = 1e-4;
            let a = |x: f64| {
                let j = p.eval(x, 2).unwrap();
                j.d2
            };
            let fd = (a(s + h) - a(s - h)) / (2.0 * h);
            let jet = p.eval(s, 3).unwrap();
            assert!((jet.d3 - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{ode:?}: {} vs {fd}", jet.d3);
        }
    }

    #[test]
    fn pole_at_origin_rejected() {
        let ode = SecondOrderOde::AbelTypeZ { alpha: 1.0, c5: 0.0 };
        assert!(OdeProfile::solve(ode, 1.0, 0.0, 0.0, -1.0, &OdeSolveConfig::default()).is_err());
    }

    #[test]
    fn halfspace_guard_for_autonomous_ode() {
        // with α < 0 the pull towards the boundary c1 + g = 0 grows without bound
        let ode = SecondOrderOde::AutonomousTypeX { alpha: -1.0, c1: 0.0 };
        let err = OdeProfile::solve(ode, 0.0, 0.2, -1.0, 3.0, &OdeSolveConfig::default());
        assert!(
            matches!(err, Err(Error::HalfspaceViolation { .. }) | Err(Error::StepFailure { .. })),
            "{err:?}"
        );
    }

    #[test]
    fn defect_shrinks_with_tolerance() {
        let ode = SecondOrderOde::AbelTypeZ { alpha: 1.0, c5: 0.0 };
        let d = |tol: f64| {
            OdeProfile::solve(ode, 1.0, 0.0, 0.0, 1.5, &OdeSolveConfig::with_tol(tol))
                .unwrap()
                .max_defect(8)
        };
        let (coarse, fine) = (d(1e-7), d(1e-8));
        assert!(fine * 2.0 <= coarse, "{coarse} -> {fine}");
    }
}
