//! Adaptive Runge-Kutta-Fehlberg 7(8) integration of the three-body
//! equations with continuous (dense) output and root-refined event location.
//!
//! Dense output uses two-point Hermite interpolation built from the stored
//! state, acceleration and jerk at each accepted node: degree 7 for the
//! position components, degree 5 for the velocities. The maximum step size
//! is tied to the tolerance so the interpolation error stays below the
//! requested local error.

use crate::dynamics::{self, BodyState, DynamicsError};
use crate::vec2::Vec2;

pub const STAGES: usize = 13;

/// Fehlberg 7(8) nodes (NASA TR R-287).
pub const C: [f64; STAGES] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    1.0 / 2.0,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

pub const A: [[f64; STAGES - 1]; STAGES] = {
    let mut a = [[0.0; STAGES - 1]; STAGES];
    a[1][0] = 2.0 / 27.0;
    a[2][0] = 1.0 / 36.0;
    a[2][1] = 1.0 / 12.0;
    a[3][0] = 1.0 / 24.0;
    a[3][2] = 1.0 / 8.0;
    a[4][0] = 5.0 / 12.0;
    a[4][2] = -25.0 / 16.0;
    a[4][3] = 25.0 / 16.0;
    a[5][0] = 1.0 / 20.0;
    a[5][3] = 1.0 / 4.0;
    a[5][4] = 1.0 / 5.0;
    a[6][0] = -25.0 / 108.0;
    a[6][3] = 125.0 / 108.0;
    a[6][4] = -65.0 / 27.0;
    a[6][5] = 125.0 / 54.0;
    a[7][0] = 31.0 / 300.0;
    a[7][4] = 61.0 / 225.0;
    a[7][5] = -2.0 / 9.0;
    a[7][6] = 13.0 / 900.0;
    a[8][0] = 2.0;
    a[8][3] = -53.0 / 6.0;
    a[8][4] = 704.0 / 45.0;
    a[8][5] = -107.0 / 9.0;
    a[8][6] = 67.0 / 90.0;
    a[8][7] = 3.0;
    a[9][0] = -91.0 / 108.0;
    a[9][3] = 23.0 / 108.0;
    a[9][4] = -976.0 / 135.0;
    a[9][5] = 311.0 / 54.0;
    a[9][6] = -19.0 / 60.0;
    a[9][7] = 17.0 / 6.0;
    a[9][8] = -1.0 / 12.0;
    a[10][0] = 2383.0 / 4100.0;
    a[10][3] = -341.0 / 164.0;
    a[10][4] = 4496.0 / 1025.0;
    a[10][5] = -301.0 / 82.0;
    a[10][6] = 2133.0 / 4100.0;
    a[10][7] = 45.0 / 82.0;
    a[10][8] = 45.0 / 164.0;
    a[10][9] = 18.0 / 41.0;
    a[11][0] = 3.0 / 205.0;
    a[11][5] = -6.0 / 41.0;
    a[11][6] = -3.0 / 205.0;
    a[11][7] = -3.0 / 41.0;
    a[11][8] = 3.0 / 41.0;
    a[11][9] = 6.0 / 41.0;
    a[12][0] = -1777.0 / 4100.0;
    a[12][3] = -341.0 / 164.0;
    a[12][4] = 4496.0 / 1025.0;
    a[12][5] = -289.0 / 82.0;
    a[12][6] = 2193.0 / 4100.0;
    a[12][7] = 51.0 / 82.0;
    a[12][8] = 33.0 / 164.0;
    a[12][9] = 12.0 / 41.0;
    a[12][11] = 1.0;
    a
};

/// 8th-order weights.
pub const B8: [f64; STAGES] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

/// Embedded 7th-order weights.
pub const B7: [f64; STAGES] = [
    41.0 / 840.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    41.0 / 840.0,
    0.0,
    0.0,
];

#[derive(Debug, thiserror::Error)]
pub enum IntegrateError {
    #[error("tolerance {0:e} outside [1e-14, 1e-6]")]
    BadTolerance(f64),
    #[error("step size underflow at tau = {tau_reached}")]
    StepUnderflow { tau_reached: f64 },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("tau = {0} outside trajectory span [{1}, {2}]")]
    OutOfSpan(f64, f64, f64),
}

pub type StateVec = [f64; 12];

pub fn pack(s: &BodyState) -> StateVec {
    let mut y = [0.0; 12];
    for i in 0..3 {
        y[2 * i] = s.r[i].x;
        y[2 * i + 1] = s.r[i].y;
        y[6 + 2 * i] = s.v[i].x;
        y[6 + 2 * i + 1] = s.v[i].y;
    }
    y
}

pub fn unpack(tau: f64, y: &StateVec) -> BodyState {
    let mut r = [Vec2::ZERO; 3];
    let mut v = [Vec2::ZERO; 3];
    for i in 0..3 {
        r[i] = Vec2::new(y[2 * i], y[2 * i + 1]);
        v[i] = Vec2::new(y[6 + 2 * i], y[6 + 2 * i + 1]);
    }
    BodyState { tau, r, v }
}

/// Right-hand side of the equations of motion.
pub fn rhs(tau: f64, y: &StateVec) -> Result<StateVec, DynamicsError> {
    let s = unpack(tau, y);
    let a = dynamics::acceleration(&s)?;
    let mut dy = [0.0; 12];
    for i in 0..3 {
        dy[2 * i] = s.v[i].x;
        dy[2 * i + 1] = s.v[i].y;
        dy[6 + 2 * i] = a[i].x;
        dy[6 + 2 * i + 1] = a[i].y;
    }
    Ok(dy)
}

#[derive(Debug, Clone)]
struct Node {
    tau: f64,
    state: BodyState,
    acc: [Vec2; 3],
    jerk: [Vec2; 3],
}

/// Newton-form Hermite coefficients for one scalar component on one segment.
#[derive(Debug, Clone)]
struct Segment {
    /// 6 position components, degree 7 (8 coefficients each).
    pos: [[f64; 8]; 6],
    /// 6 velocity components, degree 5 (6 coefficients each).
    vel: [[f64; 6]; 6],
}

/// Dense-output time series of the three-body system over an interval.
#[derive(Debug)]
pub struct Trajectory {
    nodes: Vec<Node>,
    segments: Vec<Segment>,
    tolerance: f64,
}

impl Trajectory {
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn tau_start(&self) -> f64 {
        self.nodes.first().expect("nonempty").tau
    }

    pub fn tau_end(&self) -> f64 {
        self.nodes.last().expect("nonempty").tau
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = &BodyState> {
        self.nodes.iter().map(|n| &n.state)
    }

    fn forward(&self) -> bool {
        self.tau_end() >= self.tau_start()
    }

    fn contains(&self, tau: f64) -> bool {
        let (a, b) = if self.forward() {
            (self.tau_start(), self.tau_end())
        } else {
            (self.tau_end(), self.tau_start())
        };
        tau >= a - 1e-12 && tau <= b + 1e-12
    }

    /// Interpolated state at `tau`. At a node this is the stored node state.
    pub fn state_at(&self, tau: f64) -> Result<BodyState, IntegrateError> {
        if !self.contains(tau) {
            return Err(IntegrateError::OutOfSpan(
                tau,
                self.tau_start(),
                self.tau_end(),
            ));
        }
        if self.nodes.len() == 1 {
            return Ok(self.nodes[0].state);
        }
        let k = self.segment_index(tau);
        let n0 = &self.nodes[k];
        let n1 = &self.nodes[k + 1];
        if tau == n0.tau {
            return Ok(n0.state);
        }
        if tau == n1.tau {
            return Ok(n1.state);
        }
        let seg = &self.segments[k];
        let mut y = [0.0; 12];
        for c in 0..6 {
            y[c] = newton_eval(&seg.pos[c], n0.tau, n1.tau, tau).0;
            y[6 + c] = newton_eval6(&seg.vel[c], n0.tau, n1.tau, tau).0;
        }
        Ok(unpack(tau, &y))
    }

    /// Interpolated state together with the interpolant's own time
    /// derivative (used to check the equations of motion residual).
    pub fn state_and_derivative_at(
        &self,
        tau: f64,
    ) -> Result<(BodyState, StateVec), IntegrateError> {
        if !self.contains(tau) || self.nodes.len() == 1 {
            return Err(IntegrateError::OutOfSpan(
                tau,
                self.tau_start(),
                self.tau_end(),
            ));
        }
        let k = self.segment_index(tau);
        let n0 = &self.nodes[k];
        let n1 = &self.nodes[k + 1];
        let seg = &self.segments[k];
        let mut y = [0.0; 12];
        let mut dy = [0.0; 12];
        for c in 0..6 {
            let (p, dp) = newton_eval(&seg.pos[c], n0.tau, n1.tau, tau);
            y[c] = p;
            dy[c] = dp;
            let (v, dv) = newton_eval6(&seg.vel[c], n0.tau, n1.tau, tau);
            y[6 + c] = v;
            dy[6 + c] = dv;
        }
        Ok((unpack(tau, &y), dy))
    }

    fn segment_index(&self, tau: f64) -> usize {
        let fwd = self.forward();
        let taus: Vec<f64> = self.nodes.iter().map(|n| n.tau).collect();
        let mut lo = 0usize;
        let mut hi = taus.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let before = if fwd {
                taus[mid] <= tau
            } else {
                taus[mid] >= tau
            };
            if before {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// States on a uniform grid with the given step in tau (radians).
    pub fn sample_uniform(&self, step: f64) -> Result<Vec<BodyState>, IntegrateError> {
        assert!(step > 0.0);
        let (t0, t1) = (self.tau_start(), self.tau_end());
        let n = (((t1 - t0).abs() / step) + 0.5).round() as usize;
        let dir = if self.forward() { 1.0 } else { -1.0 };
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let tau = t0 + dir * step * k as f64;
            let tau = if self.forward() {
                tau.min(t1)
            } else {
                tau.max(t1)
            };
            out.push(self.state_at(tau)?);
        }
        Ok(out)
    }
}

fn make_node(tau: f64, state: BodyState) -> Result<Node, DynamicsError> {
    let acc = dynamics::acceleration(&state)?;
    let jerk = dynamics::jerk(&state)?;
    Ok(Node {
        tau,
        state,
        acc,
        jerk,
    })
}

/// Two-point Hermite divided differences with up to `m` derivatives per end.
fn hermite_coeffs<const M: usize, const N: usize>(
    h: f64,
    d0: &[f64; M],
    d1: &[f64; M],
) -> [f64; N] {
    // nodes: 0 repeated M times, h repeated M times; N = 2*M
    debug_assert_eq!(2 * M, N);
    let mut z = [0.0; N];
    for i in M..N {
        z[i] = h;
    }
    // dd[i][j] with confluent entries filled from supplied derivatives
    let mut dd = [[0.0; N]; N];
    let fact = |j: usize| -> f64 { (1..=j).map(|k| k as f64).product::<f64>().max(1.0) };
    for i in 0..N {
        dd[i][0] = if i < M { d0[0] } else { d1[0] };
    }
    for j in 1..N {
        for i in 0..N - j {
            if z[i + j] == z[i] {
                let d = if i < M { d0 } else { d1 };
                dd[i][j] = d[j] / fact(j);
            } else {
                dd[i][j] = (dd[i + 1][j - 1] - dd[i][j - 1]) / (z[i + j] - z[i]);
            }
        }
    }
    let mut c = [0.0; N];
    for (j, cj) in c.iter_mut().enumerate() {
        *cj = dd[0][j];
    }
    c
}

/// Evaluates a degree-7 Newton-form Hermite polynomial and its derivative.
fn newton_eval(c: &[f64; 8], t0: f64, t1: f64, tau: f64) -> (f64, f64) {
    let h = t1 - t0;
    let x = tau - t0;
    let z = [0.0, 0.0, 0.0, 0.0, h, h, h, h];
    horner_newton(c, &z, x)
}

fn newton_eval6(c: &[f64; 6], t0: f64, t1: f64, tau: f64) -> (f64, f64) {
    let h = t1 - t0;
    let x = tau - t0;
    let z = [0.0, 0.0, 0.0, h, h, h];
    horner_newton(c, &z, x)
}

fn horner_newton(c: &[f64], z: &[f64], x: f64) -> (f64, f64) {
    let n = c.len();
    let mut p = c[n - 1];
    let mut dp = 0.0;
    for k in (0..n - 1).rev() {
        dp = dp * (x - z[k]) + p;
        p = p * (x - z[k]) + c[k];
    }
    (p, dp)
}

fn build_segment(n0: &Node, n1: &Node) -> Segment {
    let h = n1.tau - n0.tau;
    let y0 = pack(&n0.state);
    let y1 = pack(&n1.state);
    let flat = |v: &[Vec2; 3], c: usize| if c % 2 == 0 { v[c / 2].x } else { v[c / 2].y };
    let mut pos = [[0.0; 8]; 6];
    let mut vel = [[0.0; 6]; 6];
    for c in 0..6 {
        let d0 = [y0[c], y0[6 + c], flat(&n0.acc, c), flat(&n0.jerk, c)];
        let d1 = [y1[c], y1[6 + c], flat(&n1.acc, c), flat(&n1.jerk, c)];
        pos[c] = hermite_coeffs::<4, 8>(h, &d0, &d1);
        let v0 = [y0[6 + c], flat(&n0.acc, c), flat(&n0.jerk, c)];
        let v1 = [y1[6 + c], flat(&n1.acc, c), flat(&n1.jerk, c)];
        vel[c] = hermite_coeffs::<3, 6>(h, &v0, &v1);
    }
    Segment { pos, vel }
}

/// Integrates from `initial` to `tau_end` (forward or backward) with local
/// error tolerance `tol`, producing a dense trajectory.
pub fn integrate(
    initial: &BodyState,
    tau_end: f64,
    tol: f64,
) -> Result<Trajectory, IntegrateError> {
    if !(1e-14..=1e-6).contains(&tol) {
        return Err(IntegrateError::BadTolerance(tol));
    }
    let t0 = initial.tau;
    let mut nodes = vec![make_node(t0, *initial)?];
    if tau_end == t0 {
        return Ok(Trajectory {
            nodes,
            segments: Vec::new(),
            tolerance: tol,
        });
    }
    let dir = (tau_end - t0).signum();
    // cap keeps the quintic velocity interpolant within ~10*tol
    let h_max = (tol / 100.0).powf(0.2);
    let mut h = dir * h_max.min((tau_end - t0).abs());
    let mut tau = t0;
    let mut y = pack(initial);
    let mut k = [[0.0; 12]; STAGES];

    while (tau_end - tau) * dir > 1e-14 {
        if (tau + h - t0) * dir > (tau_end - t0) * dir {
            h = tau_end - tau;
        }
        if h.abs() < 1e-13 {
            break;
        }
        k[0] = rhs(tau, &y).map_err(|_| IntegrateError::StepUnderflow { tau_reached: tau })?;
        let mut failed = false;
        for s in 1..STAGES {
            let mut ys = y;
            for (j, yj) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (l, kl) in k.iter().enumerate().take(s) {
                    acc += A[s][l] * kl[j];
                }
                *yj += h * acc;
            }
            match rhs(tau + C[s] * h, &ys) {
                Ok(f) => k[s] = f,
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        let (y8, err) = if failed {
            ([0.0; 12], f64::INFINITY)
        } else {
            let mut y8 = y;
            let mut y7 = y;
            for j in 0..12 {
                let mut s8 = 0.0;
                let mut s7 = 0.0;
                for s in 0..STAGES {
                    s8 += B8[s] * k[s][j];
                    s7 += B7[s] * k[s][j];
                }
                y8[j] += h * s8;
                y7[j] += h * s7;
            }
            let mut err: f64 = 0.0;
            for j in 0..12 {
                let scale = tol * (1.0 + y[j].abs().max(y8[j].abs()));
                err = err.max((y8[j] - y7[j]).abs() / scale);
            }
            (y8, err)
        };

        if err <= 1.0 {
            tau += h;
            y = y8;
            nodes.push(
                make_node(tau, unpack(tau, &y))
                    .map_err(|_| IntegrateError::StepUnderflow { tau_reached: tau })?,
            );
        }
        let factor = if err.is_finite() && err > 0.0 {
            (0.9 * err.powf(-1.0 / 8.0)).clamp(0.2, 5.0)
        } else if err == 0.0 {
            5.0
        } else {
            0.2
        };
        h = (h * factor).clamp(-h_max, h_max);
        if h == 0.0 || h.abs() < 1e-13 {
            if (tau_end - tau) * dir > 1e-10 {
                return Err(IntegrateError::StepUnderflow { tau_reached: tau });
            }
            break;
        }
    }

    let segments = nodes
        .windows(2)
        .map(|w| build_segment(&w[0], &w[1]))
        .collect();
    Ok(Trajectory {
        nodes,
        segments,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
    Any,
}

/// A scalar predicate whose sign changes mark an event along the trajectory.
pub struct EventLocator<'a> {
    pub predicate: Box<dyn Fn(&BodyState) -> f64 + 'a>,
    pub direction: Direction,
    /// Bracket width in tau below which the event is accepted.
    pub refinement_tol: f64,
}

impl<'a> EventLocator<'a> {
    pub fn new(predicate: impl Fn(&BodyState) -> f64 + 'a) -> Self {
        EventLocator {
            predicate: Box::new(predicate),
            direction: Direction::Any,
            refinement_tol: 1e-10,
        }
    }

    pub fn direction(mut self, d: Direction) -> Self {
        self.direction = d;
        self
    }

    pub fn refinement_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0);
        self.refinement_tol = tol;
        self
    }
}

/// All sign changes of the predicate in `[from_tau, to_tau]`, refined by
/// bisection on the dense output, in increasing tau.
pub fn locate_event(
    traj: &Trajectory,
    locator: &EventLocator,
    from_tau: f64,
    to_tau: f64,
) -> Result<Vec<(f64, BodyState)>, IntegrateError> {
    let scan = 2.5e-3_f64.min((to_tau - from_tau).abs() / 8.0).max(1e-9);
    let n = ((to_tau - from_tau) / scan).ceil() as usize;
    let mut out = Vec::new();
    let eval = |t: f64| -> Result<f64, IntegrateError> {
        Ok((locator.predicate)(&traj.state_at(t)?))
    };
    let mut t_prev = from_tau;
    let mut f_prev = eval(t_prev)?;
    for i in 1..=n {
        let t = if i == n {
            to_tau
        } else {
            from_tau + (to_tau - from_tau) * i as f64 / n as f64
        };
        let f = eval(t)?;
        let crossing = f_prev == 0.0 || f_prev * f < 0.0;
        if crossing {
            let rising = f > f_prev;
            let keep = match locator.direction {
                Direction::Any => true,
                Direction::Rising => rising,
                Direction::Falling => !rising,
            };
            if keep {
                let (mut lo, mut hi) = (t_prev, t);
                let mut flo = f_prev;
                if flo == 0.0 {
                    out.push((lo, traj.state_at(lo)?));
                } else {
                    while (hi - lo).abs() > locator.refinement_tol {
                        let mid = 0.5 * (lo + hi);
                        let fm = eval(mid)?;
                        if fm == 0.0 {
                            lo = mid;
                            hi = mid;
                            break;
                        }
                        if flo * fm < 0.0 {
                            hi = mid;
                        } else {
                            lo = mid;
                            flo = fm;
                        }
                    }
                    let t_star = 0.5 * (lo + hi);
                    out.push((t_star, traj.state_at(t_star)?));
                }
            }
        }
        t_prev = t;
        f_prev = f;
    }
    Ok(out)
}

/// Deviation report for a full-period trajectory.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PeriodicityReport {
    /// max over particles of |r(end) - r(start)|.
    pub closure_position: f64,
    /// max over particles of |v(end) - v(start)|.
    pub closure_velocity: f64,
    /// max deviation of the cyclic relabeling 1->2->3 at tau_start + 2*pi/3.
    pub cyclic_shift: f64,
}

use serde::Serialize;

/// Measures orbit closure over the trajectory span and the 1/3-period
/// choreography shift r_{i+1}(tau + 2pi/3) = r_i(tau).
pub fn verify_periodicity(traj: &Trajectory) -> Result<PeriodicityReport, IntegrateError> {
    let first = traj.state_at(traj.tau_start())?;
    let last = traj.state_at(traj.tau_end())?;
    let mut cp: f64 = 0.0;
    let mut cv: f64 = 0.0;
    for i in 0..3 {
        cp = cp.max((last.r[i] - first.r[i]).norm());
        cv = cv.max((last.v[i] - first.v[i]).norm());
    }
    let span = (traj.tau_end() - traj.tau_start()).abs();
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let mut cs: f64 = 0.0;
    if span + 1e-12 >= third {
        let shifted = traj.state_at(traj.tau_start() + third)?;
        for i in 0..3 {
            let j = (i + 1) % 3;
            cs = cs.max((shifted.r[j] - first.r[i]).norm());
            cs = cs.max((shifted.v[j] - first.v[i]).norm());
        }
    }
    Ok(PeriodicityReport {
        closure_position: cp,
        closure_velocity: cv,
        cyclic_shift: cs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::canonical_initial_state;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn zero_interval_yields_single_state() {
        let s = canonical_initial_state();
        let traj = integrate(&s, 0.0, 1e-10).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.state_at(0.0).unwrap(), s);
    }

    #[test]
    fn rejects_out_of_range_tolerance() {
        let s = canonical_initial_state();
        assert!(matches!(
            integrate(&s, 1.0, 1e-3),
            Err(IntegrateError::BadTolerance(_))
        ));
        assert!(matches!(
            integrate(&s, 1.0, 1e-15),
            Err(IntegrateError::BadTolerance(_))
        ));
    }

    #[test]
    fn full_period_closure() {
        let s = canonical_initial_state();
        let traj = integrate(&s, 2.0 * PI, 1e-12).unwrap();
        let rep = verify_periodicity(&traj).unwrap();
        assert!(rep.closure_position < 1e-6, "{}", rep.closure_position);
        assert!(rep.closure_velocity < 1e-6, "{}", rep.closure_velocity);
        assert!(rep.cyclic_shift < 1e-6, "{}", rep.cyclic_shift);
    }

    #[test]
    fn half_period_returns_particle_1_to_x_axis() {
        let s = canonical_initial_state();
        let traj = integrate(&s, PI, 1e-12).unwrap();
        let end = traj.state_at(PI).unwrap();
        assert!(end.r[0].y.abs() < 1e-8, "{}", end.r[0].y);
    }

    #[test]
    fn interpolation_matches_nodes_and_is_smooth() {
        let s = canonical_initial_state();
        let traj = integrate(&s, 1.0, 1e-10).unwrap();
        for st in traj.samples() {
            let interp = traj.state_at(st.tau).unwrap();
            assert_eq!(&interp, st);
        }
        // mid-segment residual of the equations of motion
        let taus: Vec<f64> = traj.samples().map(|s| s.tau).collect();
        for w in taus.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let (state, dy) = traj.state_and_derivative_at(mid).unwrap();
            let f = rhs(mid, &pack(&state)).unwrap();
            for j in 0..12 {
                assert!(
                    (dy[j] - f[j]).abs() < 10.0 * traj.tolerance(),
                    "component {j}: {} vs {}",
                    dy[j],
                    f[j]
                );
            }
        }
    }

    #[test]
    fn energy_drift_below_bound() {
        let s = canonical_initial_state();
        let tol = 1e-12;
        let traj = integrate(&s, 2.0 * PI, tol).unwrap();
        let e0 = crate::dynamics::first_integrals(&s).energy;
        for st in traj.samples() {
            let e = crate::dynamics::first_integrals(st).energy;
            assert!((e - e0).abs() < 100.0 * tol, "drift {}", (e - e0).abs());
        }
    }

    #[test]
    fn halving_tolerance_does_not_blow_up_closure() {
        let s = canonical_initial_state();
        let d12 = verify_periodicity(&integrate(&s, 2.0 * PI, 1e-12).unwrap())
            .unwrap()
            .closure_position;
        let d10 = verify_periodicity(&integrate(&s, 2.0 * PI, 1e-10).unwrap())
            .unwrap()
            .closure_position;
        assert!(d12 <= 2.0 * d10.max(1e-9), "d12={d12} d10={d10}");
    }

    #[test]
    fn time_symmetry_forward_backward() {
        let s = canonical_initial_state();
        let fwd = integrate(&s, PI, 1e-12).unwrap();
        let half = fwd.state_at(PI).unwrap();
        let back = integrate(&half, 0.0, 1e-12).unwrap();
        let again = back.state_at(0.0).unwrap();
        for i in 0..3 {
            assert!((again.r[i] - s.r[i]).norm() < 1e-9);
            assert!((again.v[i] - s.v[i]).norm() < 1e-9);
        }
    }

    #[test]
    fn event_particle_2_at_origin_at_30_deg() {
        let s = canonical_initial_state();
        let traj = integrate(&s, PI, 1e-12).unwrap();
        // radial velocity of particle 2 crosses zero where |r2| is minimal
        let loc = EventLocator::new(|st: &BodyState| st.r[1].dot(st.v[1])).refinement_tol(1e-12);
        let events = locate_event(&traj, &loc, 0.1, 1.0).unwrap();
        assert_eq!(events.len(), 1);
        let (tau, st) = &events[0];
        assert!((tau.to_degrees() - 30.0).abs() < 0.01, "{}", tau.to_degrees());
        assert!(st.r[1].norm() < 1e-6);
    }

    #[test]
    fn event_y1_zero_at_boundaries() {
        let s = canonical_initial_state();
        let traj = integrate(&s, 2.0 * PI, 1e-12).unwrap();
        let loc = EventLocator::new(|st: &BodyState| st.r[0].y).refinement_tol(1e-12);
        let events = locate_event(&traj, &loc, 1e-4, 2.0 * PI - 1e-4).unwrap();
        // besides the tau = 0 boundary, particle 1 meets the x-axis at the
        // half-period apex and at the two origin passages
        assert_eq!(events.len(), 3);
        assert!(events.iter().any(|(t, _)| (t - PI).abs() < 1e-6));
        assert!(events.iter().any(|(t, _)| (t - PI / 2.0).abs() < 1e-6));
    }

    #[test]
    fn radial_rate_zero_only_at_apex() {
        // zeros of d|r1|/dtau on (0, pi) occur at the maximum of |r1| only;
        // the origin passage at tau = pi/2 has nonzero radial rate.
        let s = canonical_initial_state();
        let traj = integrate(&s, PI, 1e-12).unwrap();
        let loc = EventLocator::new(|st: &BodyState| st.r[0].dot(st.v[0])).refinement_tol(1e-12);
        let events = locate_event(&traj, &loc, 1e-3, PI - 1e-3).unwrap();
        assert!(!events.is_empty());
        for (tau, st) in &events {
            let r = st.r[0].norm();
            if r < 1e-5 {
                // r1.v1 vanishes at the origin passage only because r1 -> 0;
                // the radial speed there is the (maximal) full speed
                assert!(st.v[0].norm() > 0.5, "tau {}", tau);
            } else {
                // a genuine extremum of |r1|, which only happens at the apex
                assert!(r > 0.7, "unexpected interior extremum at {}", tau);
            }
        }
    }

    #[test]
    fn empty_event_window_gives_no_events() {
        let s = canonical_initial_state();
        let traj = integrate(&s, 0.5, 1e-10).unwrap();
        let loc = EventLocator::new(|st: &BodyState| st.r[0].norm() - 100.0);
        assert!(locate_event(&traj, &loc, 0.0, 0.5).unwrap().is_empty());
    }
}
