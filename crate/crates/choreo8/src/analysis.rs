//! Measurements on a full-period figure-8 trajectory: the twelve special
//! configurations, separations and their extrema, the hodograph,
//! acceleration diagram, center-of-gravity locus, relative motion, chord
//! family, energy ratio, pedal ratio, arclength, and the radical-family
//! ds/dr comparison.

use serde::Serialize;

use crate::dynamics::{self, BodyState, Cog};
use crate::integrate::{locate_event, EventLocator, IntegrateError, Trajectory};
use crate::vec2::Vec2;

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("trajectory must span a full period (2*pi), got {0}")]
    SpanTooShort(f64),
    #[error("expected a {expected} event, got {got}")]
    WrongEventKind { expected: &'static str, got: &'static str },
    #[error("expected 12 alternating configuration events, found {0} (off-orbit input?)")]
    UnexpectedEventCount(usize),
    #[error("|r| is not monotone on [{0}, {1}] deg")]
    NonMonotone(f64, f64),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// Maps an angle in degrees to the line-direction convention (-90, 90].
pub fn wrap_line_deg(a: f64) -> f64 {
    let mut x = a % 180.0;
    if x <= -90.0 {
        x += 180.0;
    }
    if x > 90.0 {
        x -= 180.0;
    }
    x
}

/// Smallest absolute difference between two line directions in degrees.
pub fn line_angle_diff_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConfigKind {
    Isosceles,
    Collinear,
}

impl ConfigKind {
    fn name(self) -> &'static str {
        match self {
            ConfigKind::Isosceles => "isosceles",
            ConfigKind::Collinear => "collinear",
        }
    }
}

/// A detected isosceles or collinear instant with its measured geometry.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigurationEvent {
    pub kind: ConfigKind,
    pub tau_deg: f64,
    /// Apex particle (isosceles) or origin particle (collinear), 0-based.
    pub special_particle: usize,
    /// Base direction (isosceles) or line direction (collinear), degrees in (-90, 90].
    pub line_angle_deg: f64,
    /// Velocity direction of the special particle, degrees in (-90, 90].
    pub tangent_angle_deg: f64,
    #[serde(skip)]
    pub state: BodyState,
}

fn signed_area(s: &BodyState) -> f64 {
    0.5 * (s.r[1] - s.r[0]).cross(s.r[2] - s.r[0])
}

/// Finds the 12 alternating isosceles/collinear configurations in one
/// period, refined to ~1e-10 in tau.
pub fn find_configurations(traj: &Trajectory) -> Result<Vec<ConfigurationEvent>, AnalysisError> {
    let span = traj.tau_end() - traj.tau_start();
    if span < TWO_PI - 1e-9 {
        return Err(AnalysisError::SpanTooShort(span));
    }
    let t0 = traj.tau_start();
    let t1 = t0 + TWO_PI - 1e-7; // half-open period window

    let mut events: Vec<(f64, ConfigKind, usize)> = Vec::new();

    let area_loc = EventLocator::new(|s: &BodyState| signed_area(s)).refinement_tol(1e-11);
    let collinear: Vec<f64> = locate_event(traj, &area_loc, t0, t1)?
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    for &t in &collinear {
        let s = traj.state_at(t)?;
        let special = (0..3).min_by(|&a, &b| s.r[a].norm().total_cmp(&s.r[b].norm())).unwrap();
        events.push((t, ConfigKind::Collinear, special));
    }

    for apex in 0..3 {
        let (j, k) = ((apex + 1) % 3, (apex + 2) % 3);
        let loc = EventLocator::new(move |s: &BodyState| {
            (s.r[apex] - s.r[j]).norm_sq() - (s.r[apex] - s.r[k]).norm_sq()
        })
        .refinement_tol(1e-11);
        for (t, _) in locate_event(traj, &loc, t0, t1)? {
            // equal distances also hold when the apex sits at the origin of a
            // collinear configuration; keep only genuine triangles
            if collinear.iter().all(|&c| (c - t).abs() > 1e-4) {
                events.push((t, ConfigKind::Isosceles, apex));
            }
        }
    }

    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    events.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6);
    if events.len() != 12 {
        return Err(AnalysisError::UnexpectedEventCount(events.len()));
    }
    for w in events.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(AnalysisError::UnexpectedEventCount(events.len()));
        }
    }

    let mut out = Vec::with_capacity(12);
    for (t, kind, special) in events {
        let s = traj.state_at(t)?;
        let line_angle_deg = match kind {
            ConfigKind::Collinear => {
                let outer = (0..3).max_by(|&a, &b| s.r[a].norm().total_cmp(&s.r[b].norm())).unwrap();
                wrap_line_deg(s.r[outer].angle().to_degrees())
            }
            ConfigKind::Isosceles => {
                let (j, k) = ((special + 1) % 3, (special + 2) % 3);
                wrap_line_deg((s.r[j] - s.r[k]).angle().to_degrees())
            }
        };
        let tangent_angle_deg = wrap_line_deg(s.v[special].angle().to_degrees());
        out.push(ConfigurationEvent {
            kind,
            tau_deg: (t - t0).to_degrees(),
            special_particle: special,
            line_angle_deg,
            tangent_angle_deg,
            state: s,
        });
    }
    Ok(out)
}

/// Geometry report at a collinear instant.
#[derive(Debug, Clone, Serialize)]
pub struct CollinearReport {
    pub tau_deg: f64,
    pub line_angle_deg: f64,
    /// Common direction of the three velocities.
    pub tangent_angle_deg: f64,
    /// Largest pairwise angle between the three velocity lines, degrees.
    pub tangent_parallelism_deg: f64,
    /// max_i | |v_origin| - 2 |v_i| | over the two outer particles.
    pub speed_ratio_error: f64,
    /// |v_origin| minus the maximum of that particle's speed over the period.
    pub speed_max_margin: f64,
    /// Triangle area (degeneracy check).
    pub area: f64,
}

pub fn collinear_geometry(
    event: &ConfigurationEvent,
    traj: &Trajectory,
) -> Result<CollinearReport, AnalysisError> {
    if event.kind != ConfigKind::Collinear {
        return Err(AnalysisError::WrongEventKind {
            expected: "collinear",
            got: event.kind.name(),
        });
    }
    let s = &event.state;
    let sp = event.special_particle;
    let angles: Vec<f64> = s.v.iter().map(|v| v.angle().to_degrees()).collect();
    let mut parallelism: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            parallelism = parallelism.max(line_angle_diff_deg(angles[i], angles[j]));
        }
    }
    let mut ratio_err: f64 = 0.0;
    for i in 0..3 {
        if i != sp {
            ratio_err = ratio_err.max((s.v[sp] + 2.0 * s.v[i]).norm());
        }
    }
    // the origin particle moves at the global speed maximum
    let mut vmax: f64 = 0.0;
    let n = 4096;
    for k in 0..=n {
        let t = traj.tau_start() + TWO_PI * k as f64 / n as f64;
        vmax = vmax.max(traj.state_at(t)?.v[sp].norm());
    }
    Ok(CollinearReport {
        tau_deg: event.tau_deg,
        line_angle_deg: event.line_angle_deg,
        tangent_angle_deg: event.tangent_angle_deg,
        tangent_parallelism_deg: parallelism,
        speed_ratio_error: ratio_err,
        speed_max_margin: s.v[sp].norm() - vmax,
        area: signed_area(s),
    })
}

/// Geometry report at an isosceles instant.
#[derive(Debug, Clone, Serialize)]
pub struct IsoscelesReport {
    pub tau_deg: f64,
    /// Acute angle between a triangle side and the symmetry axis, degrees.
    pub side_angle_deg: f64,
    /// Largest angle between a base particle's velocity and its side to the
    /// apex, degrees.
    pub side_tangent_deg: f64,
    /// Apex distance from the origin.
    pub apex_distance: f64,
    /// Base x-coordinate over apex distance in the symmetry frame (-1/2).
    pub base_over_apex: f64,
    /// | |r_apex - r_b1| - |r_apex - r_b2| |.
    pub side_length_mismatch: f64,
}

pub fn isosceles_geometry(
    event: &ConfigurationEvent,
    _traj: &Trajectory,
) -> Result<IsoscelesReport, AnalysisError> {
    if event.kind != ConfigKind::Isosceles {
        return Err(AnalysisError::WrongEventKind {
            expected: "isosceles",
            got: event.kind.name(),
        });
    }
    let s = &event.state;
    let apex = event.special_particle;
    let (b1, b2) = ((apex + 1) % 3, (apex + 2) % 3);
    // symmetry frame: apex direction is the +x axis
    let axis = s.r[apex].angle();
    let rot = |v: Vec2| v.rotated(-axis);
    let apex_distance = s.r[apex].norm();
    let base_x = 0.5 * (rot(s.r[b1]).x + rot(s.r[b2]).x);
    let side = rot(s.r[apex] - s.r[b1]);
    let side_angle_deg = side.y.atan2(side.x).abs().to_degrees();
    let mut side_tangent: f64 = 0.0;
    for &b in &[b1, b2] {
        let to_apex = s.r[apex] - s.r[b];
        side_tangent = side_tangent.max(line_angle_diff_deg(
            s.v[b].angle().to_degrees(),
            to_apex.angle().to_degrees(),
        ));
    }
    Ok(IsoscelesReport {
        tau_deg: event.tau_deg,
        side_angle_deg,
        side_tangent_deg: side_tangent,
        apex_distance,
        base_over_apex: base_x / apex_distance,
        side_length_mismatch: ((s.r[apex] - s.r[b1]).norm() - (s.r[apex] - s.r[b2]).norm()).abs(),
    })
}

/// Pairwise separations over a period, with refined extrema.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationSeries {
    pub tau_deg: Vec<f64>,
    pub r12: Vec<f64>,
    pub r23: Vec<f64>,
    pub r31: Vec<f64>,
    pub perimeter: Vec<f64>,
    pub l_max: f64,
    pub l_max_tau_deg: f64,
    pub l_min: f64,
    pub l_min_tau_deg: f64,
}

pub fn separations(traj: &Trajectory) -> Result<SeparationSeries, AnalysisError> {
    separations_with_step(traj, 0.1)
}

pub fn separations_with_step(
    traj: &Trajectory,
    step_deg: f64,
) -> Result<SeparationSeries, AnalysisError> {
    let span = traj.tau_end() - traj.tau_start();
    if span < TWO_PI - 1e-9 {
        return Err(AnalysisError::SpanTooShort(span));
    }
    let t0 = traj.tau_start();
    let n = (360.0 / step_deg).round() as usize;
    let mut tau_deg = Vec::with_capacity(n + 1);
    let mut cols = [Vec::with_capacity(n + 1), Vec::with_capacity(n + 1), Vec::with_capacity(n + 1)];
    let mut perimeter = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = t0 + TWO_PI * k as f64 / n as f64;
        let s = traj.state_at(t)?;
        let d = [s.separation(0, 1), s.separation(1, 2), s.separation(2, 0)];
        tau_deg.push((t - t0).to_degrees());
        for (c, v) in cols.iter_mut().zip(d) {
            c.push(v);
        }
        perimeter.push(d.iter().sum());
    }

    // refine extrema: zeros of d/dtau of each pairwise distance
    let mut l_max = f64::NEG_INFINITY;
    let mut l_min = f64::INFINITY;
    let mut t_max = 0.0;
    let mut t_min = 0.0;
    for (i, j) in dynamics::PAIRS {
        let loc = EventLocator::new(move |s: &BodyState| (s.r[i] - s.r[j]).dot(s.v[i] - s.v[j]))
            .refinement_tol(1e-11);
        let mut zeros: Vec<f64> = locate_event(traj, &loc, t0, t0 + TWO_PI)?
            .into_iter()
            .map(|(t, _)| t)
            .collect();
        zeros.push(t0);
        zeros.push(t0 + TWO_PI);
        for t in zeros {
            let d = traj.state_at(t)?.separation(i, j);
            if d > l_max {
                l_max = d;
                t_max = t;
            }
            if d < l_min {
                l_min = d;
                t_min = t;
            }
        }
    }
    Ok(SeparationSeries {
        tau_deg,
        r12: std::mem::take(&mut cols[0]),
        r23: std::mem::take(&mut cols[1]),
        r31: std::mem::take(&mut cols[2]),
        perimeter,
        l_max,
        l_max_tau_deg: (t_max - t0).to_degrees(),
        l_min,
        l_min_tau_deg: (t_min - t0).to_degrees(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveLabel {
    Hodograph,
    Acceleration,
    Cog,
    Relative,
    MidpointRelative,
    MidpointInertial,
}

/// A vector-valued derived curve sampled over one period.
#[derive(Debug, Clone, Serialize)]
pub struct DiagramCurve {
    pub label: CurveLabel,
    /// Particle the curve belongs to (0-based), if any.
    pub particle: Option<usize>,
    pub points: Vec<(f64, Vec2)>,
    /// Net rotation count of the vector over the period, when defined.
    pub winding: Option<i32>,
}

/// Net rotation count of a sequence of vectors (angle increments wrapped to
/// (-pi, pi], summed, divided by 2*pi).
pub fn winding_number(points: &[Vec2]) -> i32 {
    // a pass through the origin reverses the direction without rotating it,
    // so across a puncture the increment is taken mod a half turn
    let vmax = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let small = 0.05 * vmax;
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    let mut crossed_puncture = false;
    for p in points {
        if p.norm() < small {
            crossed_puncture = true;
            continue;
        }
        let a = p.angle();
        if let Some(pa) = prev {
            let (mut d, period) = if crossed_puncture {
                ((a - pa) % PI, PI)
            } else {
                (a - pa, TWO_PI)
            };
            while d > period / 2.0 {
                d -= period;
            }
            while d <= -period / 2.0 {
                d += period;
            }
            total += d;
        }
        prev = Some(a);
        crossed_puncture = false;
    }
    (total / TWO_PI).round() as i32
}

fn period_grid(traj: &Trajectory, step_deg: f64) -> Result<Vec<(f64, BodyState)>, AnalysisError> {
    let span = traj.tau_end() - traj.tau_start();
    if span < TWO_PI - 1e-9 {
        return Err(AnalysisError::SpanTooShort(span));
    }
    let t0 = traj.tau_start();
    let n = (360.0 / step_deg).round() as usize;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = t0 + TWO_PI * k as f64 / n as f64;
        out.push(((t - t0).to_degrees(), traj.state_at(t)?));
    }
    Ok(out)
}

/// Velocity diagram of one particle; closed with winding number 0.
pub fn hodograph(traj: &Trajectory, particle: usize) -> Result<DiagramCurve, AnalysisError> {
    let grid = period_grid(traj, 0.1)?;
    let points: Vec<(f64, Vec2)> = grid.iter().map(|(d, s)| (*d, s.v[particle])).collect();
    let winding = winding_number(&points.iter().map(|p| p.1).collect::<Vec<_>>());
    Ok(DiagramCurve {
        label: CurveLabel::Hodograph,
        particle: Some(particle),
        points,
        winding: Some(winding),
    })
}

/// Acceleration diagram of one particle with its tagged special instants.
#[derive(Debug, Clone, Serialize)]
pub struct AccelDiagram {
    pub curve: DiagramCurve,
    pub modulus: Vec<(f64, f64)>,
    /// Zeros of the y-component (horizontal acceleration), degrees.
    pub horizontal_taus_deg: Vec<f64>,
    /// Zeros of the x-component (vertical acceleration), degrees.
    pub vertical_taus_deg: Vec<f64>,
    /// Instants where the modulus (essentially) vanishes, degrees.
    pub zero_taus_deg: Vec<f64>,
    /// Location of the largest modulus in the first half period, degrees.
    pub max_modulus_tau_deg: f64,
    /// Instants where this particle shares its y-coordinate with the next
    /// particle (cyclic), degrees.
    pub equal_y_taus_deg: Vec<f64>,
}

pub fn acceleration_diagram(
    traj: &Trajectory,
    particle: usize,
) -> Result<AccelDiagram, AnalysisError> {
    let grid = period_grid(traj, 0.1)?;
    let t0 = traj.tau_start();
    let accel = |s: &BodyState| dynamics::acceleration(s).expect("non-singular orbit")[particle];
    let points: Vec<(f64, Vec2)> = grid.iter().map(|(d, s)| (*d, accel(s))).collect();
    let modulus: Vec<(f64, f64)> = points.iter().map(|(d, a)| (*d, a.norm())).collect();
    // sample winding slightly off the exact zeros of |a|
    let off: Vec<Vec2> = (0..3600)
        .map(|k| {
            let t = t0 + TWO_PI * (k as f64 + 0.5) / 3600.0;
            accel(&traj.state_at(t).unwrap())
        })
        .collect();
    let winding = winding_number(&off);

    let window = (t0 + 1e-4, t0 + TWO_PI - 1e-4);
    let ay = EventLocator::new(move |s: &BodyState| accel(s).y).refinement_tol(1e-11);
    let horizontal_taus_deg: Vec<f64> = locate_event(traj, &ay, window.0, window.1)?
        .iter()
        .map(|(t, _)| (t - t0).to_degrees())
        .collect();
    let ax = EventLocator::new(move |s: &BodyState| accel(s).x).refinement_tol(1e-11);
    let vertical_taus_deg: Vec<f64> = locate_event(traj, &ax, window.0, window.1)?
        .iter()
        .map(|(t, _)| (t - t0).to_degrees())
        .collect();

    // |a| ~ 0 exactly when the particle passes the origin
    let mut zero_taus_deg = Vec::new();
    let rad = EventLocator::new(move |s: &BodyState| s.r[particle].dot(s.v[particle]))
        .refinement_tol(1e-11);
    for (t, s) in locate_event(traj, &rad, window.0, window.1)? {
        if s.r[particle].norm() < 1e-5 {
            zero_taus_deg.push((t - t0).to_degrees());
        }
    }

    let max_modulus_tau_deg = {
        let f = |t: f64| -accel(&traj.state_at(t).unwrap()).norm();
        // coarse scan over the first quarter period, then refine
        let mut best = (f64::INFINITY, t0);
        for k in 0..=900 {
            let t = t0 + 0.5 * PI * k as f64 / 900.0;
            let v = f(t);
            if v < best.0 {
                best = (v, t);
            }
        }
        let t = golden_min(f, best.1 - 2e-3, best.1 + 2e-3, 1e-12);
        (t - t0).to_degrees()
    };

    let next = (particle + 1) % 3;
    let eq = EventLocator::new(move |s: &BodyState| s.r[particle].y - s.r[next].y)
        .refinement_tol(1e-11);
    let equal_y_taus_deg: Vec<f64> = locate_event(traj, &eq, window.0, window.1)?
        .iter()
        .map(|(t, _)| (t - t0).to_degrees())
        .collect();

    Ok(AccelDiagram {
        curve: DiagramCurve {
            label: CurveLabel::Acceleration,
            particle: Some(particle),
            points,
            winding: Some(winding),
        },
        modulus,
        horizontal_taus_deg,
        vertical_taus_deg,
        zero_taus_deg,
        max_modulus_tau_deg,
        equal_y_taus_deg,
    })
}

/// Golden-section minimizer on [a, b].
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Center-of-gravity locus with punctures at origin passages.
#[derive(Debug, Clone, Serialize)]
pub struct CogCurve {
    pub particle: usize,
    pub points: Vec<(f64, Cog)>,
    /// (tau_deg, asymptote line direction in (-90, 90]) at each puncture.
    pub asymptotes: Vec<(f64, f64)>,
    /// Max deviation of the second half period from the y-axis mirror of
    /// the first, over finite points.
    pub mirror_deviation: f64,
}

pub fn cog_curve(traj: &Trajectory, particle: usize) -> Result<CogCurve, AnalysisError> {
    let grid = period_grid(traj, 0.1)?;
    let t0 = traj.tau_start();
    let points: Vec<(f64, Cog)> = grid
        .iter()
        .map(|(d, s)| {
            (
                *d,
                dynamics::center_of_gravity(s, particle).expect("non-singular orbit"),
            )
        })
        .collect();

    // punctures: origin passages of the particle
    let rad = EventLocator::new(move |s: &BodyState| s.r[particle].dot(s.v[particle]))
        .refinement_tol(1e-12);
    let mut asymptotes = Vec::new();
    for (t, s) in locate_event(traj, &rad, t0 + 1e-4, t0 + TWO_PI - 1e-4)? {
        if s.r[particle].norm() < 1e-5 {
            let near = traj.state_at(t - 1e-4)?;
            let a = dynamics::acceleration(&near).expect("non-singular")[particle];
            asymptotes.push(((t - t0).to_degrees(), wrap_line_deg(a.angle().to_degrees())));
        }
    }

    // COG(tau + pi) should mirror COG(tau) across the y-axis
    let mut mirror_deviation: f64 = 0.0;
    let n = 1800;
    for k in 0..n {
        let t = t0 + PI * (k as f64 + 0.5) / n as f64;
        let a = dynamics::center_of_gravity(&traj.state_at(t)?, particle).expect("non-singular");
        let b = dynamics::center_of_gravity(&traj.state_at(t + PI)?, particle).expect("non-singular");
        if let (Cog::Point(p), Cog::Point(q)) = (a, b) {
            if p.norm() < 50.0 {
                mirror_deviation = mirror_deviation.max((Vec2::new(-p.x, p.y) - q).norm());
            }
        }
    }

    Ok(CogCurve {
        particle,
        points,
        asymptotes,
        mirror_deviation,
    })
}

/// Relative trajectories with respect to one particle, plus the midpoint
/// curves of the other pair.
#[derive(Debug, Clone, Serialize)]
pub struct RelativeMotion {
    pub reference: usize,
    /// Trajectories of the other two particles in the reference frame.
    pub relative: [DiagramCurve; 2],
    /// Midpoint of the other pair, relative to the reference particle.
    pub midpoint_relative: DiagramCurve,
    /// Midpoint of the other pair in the inertial frame.
    pub midpoint_inertial: DiagramCurve,
}

pub fn relative_motion(traj: &Trajectory, reference: usize) -> Result<RelativeMotion, AnalysisError> {
    let grid = period_grid(traj, 0.1)?;
    let (p, q) = ((reference + 1) % 3, (reference + 2) % 3);
    let mk = |label, particle, f: &dyn Fn(&BodyState) -> Vec2| DiagramCurve {
        label,
        particle,
        points: grid.iter().map(|(d, s)| (*d, f(s))).collect(),
        winding: None,
    };
    Ok(RelativeMotion {
        reference,
        relative: [
            mk(CurveLabel::Relative, Some(p), &|s| s.r[p] - s.r[reference]),
            mk(CurveLabel::Relative, Some(q), &|s| s.r[q] - s.r[reference]),
        ],
        midpoint_relative: mk(CurveLabel::MidpointRelative, None, &|s| {
            0.5 * (s.r[p] + s.r[q]) - s.r[reference]
        }),
        midpoint_inertial: mk(CurveLabel::MidpointInertial, None, &|s| {
            0.5 * (s.r[p] + s.r[q])
        }),
    })
}

/// One chord of the same-lobe family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Chord {
    pub tau_deg: f64,
    /// The two particles sharing a lobe (0-based).
    pub pair: (usize, usize),
    pub a: Vec2,
    pub b: Vec2,
}

/// Segments joining the two particles in the same lobe of the figure-8;
/// plotting them traces the chord-envelope curve of the lobe. Lobe
/// membership is the sign of x, switching at the collinear instants.
pub fn chord_envelope(traj: &Trajectory) -> Result<Vec<Chord>, AnalysisError> {
    let grid = period_grid(traj, 0.5)?;
    let mut out = Vec::with_capacity(grid.len());
    for (d, s) in &grid {
        let pos: Vec<usize> = (0..3).filter(|&i| s.r[i].x >= 0.0).collect();
        let pair = match pos.len() {
            2 => (pos[0], pos[1]),
            1 => {
                let others: Vec<usize> = (0..3).filter(|&i| i != pos[0]).collect();
                (others[0], others[1])
            }
            // degenerate: all on one side only happens at the origin crossing
            _ => (0, 1),
        };
        out.push(Chord {
            tau_deg: *d,
            pair,
            a: s.r[pair.0],
            b: s.r[pair.1],
        });
    }
    Ok(out)
}

/// A scalar series over the period with refined extrema.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub min_tau_deg: f64,
    pub min_value: f64,
    pub max_tau_deg: f64,
    pub max_value: f64,
}

/// |potential| / kinetic over the period; extrema refined.
pub fn energy_ratio_series(traj: &Trajectory) -> Result<ScalarSeries, AnalysisError> {
    let grid = period_grid(traj, 0.1)?;
    let t0 = traj.tau_start();
    let ratio = |t: f64| {
        dynamics::energies(&traj.state_at(t).unwrap())
            .expect("non-singular orbit")
            .pk_ratio
    };
    let points: Vec<(f64, f64)> = grid
        .iter()
        .map(|(d, s)| (*d, dynamics::energies(s).expect("non-singular").pk_ratio))
        .collect();
    let (mut tmin, mut tmax) = (t0, t0);
    let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for (d, v) in &points {
        let t = t0 + d.to_radians();
        if *v < vmin {
            vmin = *v;
            tmin = t;
        }
        if *v > vmax {
            vmax = *v;
            tmax = t;
        }
    }
    let w = 0.1_f64.to_radians();
    let hi = traj.tau_end().min(t0 + TWO_PI);
    let tmin = golden_min(ratio, (tmin - w).max(t0), (tmin + w).min(hi), 1e-12);
    let tmax = golden_min(|t| -ratio(t), (tmax - w).max(t0), (tmax + w).min(hi), 1e-12);
    Ok(ScalarSeries {
        label: "pk_ratio".into(),
        points,
        min_tau_deg: (tmin - t0).to_degrees(),
        min_value: ratio(tmin),
        max_tau_deg: (tmax - t0).to_degrees(),
        max_value: ratio(tmax),
    })
}

/// Arclength of the figure-8 over one period, with the cumulative series.
#[derive(Debug, Clone, Serialize)]
pub struct ArcLength {
    /// Total length of the closed curve (one particle, one period).
    pub total: f64,
    /// Total divided by 2a with a the apex distance (the lemniscate scale).
    pub per_2a: f64,
    pub cumulative: Vec<(f64, f64)>,
}

pub fn arclength(traj: &Trajectory) -> Result<ArcLength, AnalysisError> {
    arclength_with_samples(traj, 7200)
}

/// Composite-Simpson arclength with `n` intervals (n even).
pub fn arclength_with_samples(traj: &Trajectory, n: usize) -> Result<ArcLength, AnalysisError> {
    let span = traj.tau_end() - traj.tau_start();
    if span < TWO_PI - 1e-9 {
        return Err(AnalysisError::SpanTooShort(span));
    }
    assert!(n >= 2 && n % 2 == 0);
    let t0 = traj.tau_start();
    let h = TWO_PI / n as f64;
    let speed = |k: usize| -> Result<f64, AnalysisError> {
        Ok(traj.state_at(t0 + h * k as f64)?.v[0].norm())
    };
    let mut cumulative = Vec::with_capacity(n / 2 + 1);
    cumulative.push((0.0, 0.0));
    let mut total = 0.0;
    for seg in 0..n / 2 {
        let (a, b, c) = (speed(2 * seg)?, speed(2 * seg + 1)?, speed(2 * seg + 2)?);
        total += h / 3.0 * (a + 4.0 * b + c);
        cumulative.push((((2 * seg + 2) as f64) * h.to_degrees(), total));
    }
    let apex = traj.state_at(t0)?.r[0].norm().max(
        (0..=3600)
            .map(|k| traj.state_at(t0 + TWO_PI * k as f64 / 3600.0).unwrap().r[0].norm())
            .fold(0.0, f64::max),
    );
    Ok(ArcLength {
        total,
        per_2a: total / (2.0 * apex),
        cumulative,
    })
}

/// Pedal distance over cubed radius for a curve point with tangent
/// direction given by `vel`, on a curve rescaled to unit semi-axis.
pub fn pedal_ratio(pos_scaled: Vec2, vel: Vec2) -> f64 {
    let r = pos_scaled.norm();
    let p = pos_scaled.cross(vel).abs() / vel.norm();
    p / (r * r * r)
}

/// p/r^3 along the orbit (rescaled so the apex is at distance 1), with the
/// global minimum and the interior relative maximum of the first quarter.
pub fn pedal_ratio_series(traj: &Trajectory) -> Result<ScalarSeries, AnalysisError> {
    let span = traj.tau_end() - traj.tau_start();
    if span < TWO_PI - 1e-9 {
        return Err(AnalysisError::SpanTooShort(span));
    }
    let t0 = traj.tau_start();
    let a = traj.state_at(t0)?.r[0].norm();
    let f = |t: f64| {
        let s = traj.state_at(t).unwrap();
        pedal_ratio(s.r[0] / a, s.v[0])
    };
    let mut points = Vec::new();
    for k in 0..=3600 {
        let t = t0 + TWO_PI * k as f64 / 3600.0;
        let s = traj.state_at(t)?;
        if s.r[0].norm() / a > 0.05 {
            points.push(((t - t0).to_degrees(), pedal_ratio(s.r[0] / a, s.v[0])));
        }
    }
    // extrema of the first quarter period, refined
    let tmin = golden_min(f, t0 + 10.0_f64.to_radians(), t0 + 60.0_f64.to_radians(), 1e-12);
    let tmax = golden_min(
        |t| -f(t),
        t0 + 55.0_f64.to_radians(),
        t0 + 85.0_f64.to_radians(),
        1e-12,
    );
    Ok(ScalarSeries {
        label: "pedal_ratio".into(),
        points,
        min_tau_deg: (tmin - t0).to_degrees(),
        min_value: f(tmin),
        max_tau_deg: (tmax - t0).to_degrees(),
        max_value: f(tmax),
    })
}

/// One sample of the measured-vs-model ds/dr comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DsDrSample {
    pub tau_deg: f64,
    /// Radius rescaled to the unit semi-axis.
    pub r: f64,
    pub measured: f64,
    pub model: f64,
    pub residual: f64,
    /// True when dr/dtau is too small for the ratio to be meaningful.
    pub breakdown: bool,
}

/// Pointwise difference between ds/dr measured along the orbit and the
/// radical-family model with parameter `m`, on a monotone-|r| arc.
pub fn ds_dr_comparison(
    traj: &Trajectory,
    m: f64,
    from_deg: f64,
    to_deg: f64,
) -> Result<Vec<DsDrSample>, AnalysisError> {
    let t0 = traj.tau_start();
    let a = traj.state_at(t0)?.r[0].norm();
    let from = t0 + from_deg.to_radians();
    let to = t0 + to_deg.to_radians();
    // |r| must be monotone in the interior of the window
    let mut sign = 0.0;
    let checks = 200;
    for k in 1..checks {
        let t = from + (to - from) * k as f64 / checks as f64;
        let s = traj.state_at(t)?;
        let rr = s.r[0].dot(s.v[0]);
        if rr.abs() > 1e-6 {
            if sign != 0.0 && rr.signum() != sign {
                return Err(AnalysisError::NonMonotone(from_deg, to_deg));
            }
            sign = rr.signum();
        }
    }
    let n = 400;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = from + (to - from) * k as f64 / n as f64;
        let s = traj.state_at(t)?;
        let r = s.r[0].norm() / a;
        let rdot = s.r[0].dot(s.v[0]) / s.r[0].norm().max(1e-12);
        let breakdown = rdot.abs() < 1e-2 || r >= 1.0;
        let measured = if breakdown {
            f64::NAN
        } else {
            (s.v[0].norm() / rdot).abs()
        };
        let model = crate::curves::radical_family_ds_dr(m, r.min(1.0 - 1e-12)).unwrap_or(f64::NAN);
        out.push(DsDrSample {
            tau_deg: (t - t0).to_degrees(),
            r,
            measured,
            model,
            residual: measured - model,
            breakdown,
        });
    }
    Ok(out)
}

/// Scans m over [1.0, 1.5] (step 1e-3) for the value minimizing the
/// maximum |residual| of [`ds_dr_comparison`] on the arc 91..165 degrees
/// (the window clear of the dr -> 0 breakdown).
pub fn best_radical_m(traj: &Trajectory) -> Result<(f64, f64), AnalysisError> {
    let mut best = (f64::NAN, f64::INFINITY);
    let mut m = 1.0;
    while m <= 1.5 + 1e-12 {
        let samples = ds_dr_comparison(traj, m, 91.0, 165.0)?;
        let worst = samples
            .iter()
            .filter(|s| !s.breakdown)
            .map(|s| s.residual.abs())
            .fold(0.0, f64::max);
        if worst < best.1 {
            best = (m, worst);
        }
        m += 1e-3;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::canonical_initial_state;
    use crate::integrate::integrate;
    use std::sync::OnceLock;

    fn traj() -> &'static Trajectory {
        static T: OnceLock<Trajectory> = OnceLock::new();
        T.get_or_init(|| integrate(&canonical_initial_state(), TWO_PI, 1e-12).unwrap())
    }

    fn events() -> &'static Vec<ConfigurationEvent> {
        static E: OnceLock<Vec<ConfigurationEvent>> = OnceLock::new();
        E.get_or_init(|| find_configurations(traj()).unwrap())
    }

    #[test]
    fn twelve_alternating_configurations() {
        let evs = events();
        assert_eq!(evs.len(), 12);
        for (i, e) in evs.iter().enumerate() {
            let expected = if i % 2 == 0 {
                ConfigKind::Isosceles
            } else {
                ConfigKind::Collinear
            };
            assert_eq!(e.kind, expected, "event {i}");
            assert!((e.tau_deg - 30.0 * i as f64).abs() < 0.05, "event {i} at {}", e.tau_deg);
        }
        // the first collinear configuration: line at 14.0688 deg, common
        // tangent at -42.8434 deg
        let c = &evs[1];
        assert!((c.tau_deg - 30.0).abs() < 1e-6);
        assert!((c.line_angle_deg - 14.068841).abs() < 1e-4);
        assert!((c.tangent_angle_deg + 42.843398).abs() < 1e-4);
    }

    #[test]
    fn rejects_short_trajectory() {
        let half = integrate(&canonical_initial_state(), PI, 1e-10).unwrap();
        assert!(matches!(
            find_configurations(&half),
            Err(AnalysisError::SpanTooShort(_))
        ));
    }

    #[test]
    fn collinear_report() {
        let r = collinear_geometry(&events()[1], traj()).unwrap();
        assert!(r.area.abs() < 1e-10);
        assert!(r.tangent_parallelism_deg < 1e-6);
        assert!(r.speed_ratio_error < 1e-9, "v_origin = -2 v_outer fails: {}", r.speed_ratio_error);
        assert!(r.speed_max_margin > -1e-6, "origin particle not at max speed");
        assert!(collinear_geometry(&events()[0], traj()).is_err());
    }

    #[test]
    fn isosceles_report() {
        let r = isosceles_geometry(&events()[0], traj()).unwrap();
        assert!(r.side_length_mismatch < 1e-9);
        assert!((r.apex_distance - crate::dynamics::FIG8_X0).abs() < 1e-9);
        assert!((r.base_over_apex + 0.5).abs() < 1e-9);
        assert!((r.side_angle_deg - 12.020195).abs() < 1e-4);
        // base velocities are parallel to the opposite sides
        assert!(r.side_tangent_deg < 1e-8);
        assert!(isosceles_geometry(&events()[1], traj()).is_err());
    }

    #[test]
    fn separation_extrema() {
        let s = separations(traj()).unwrap();
        assert!((s.l_max - 1.380471).abs() < 1e-5);
        assert!((s.l_min - 0.476626).abs() < 1e-5);
        // extrema sit on the 90-degree grid of configurations
        let m = s.l_max_tau_deg.rem_euclid(90.0);
        assert!(m < 0.01 || m > 89.99);
        assert_eq!(s.tau_deg.len(), s.perimeter.len());
    }

    #[test]
    fn hodograph_closed_with_zero_winding() {
        let h = hodograph(traj(), 0).unwrap();
        assert_eq!(h.winding, Some(0));
        let first = h.points.first().unwrap().1;
        let last = h.points.last().unwrap().1;
        assert!((first - last).norm() < 1e-8);
    }

    #[test]
    fn acceleration_special_instants() {
        let a = acceleration_diagram(traj(), 0).unwrap();
        assert_eq!(a.curve.winding, Some(0));
        let near = |xs: &[f64], v: f64| xs.iter().any(|x| (x - v).abs() < 1e-3);
        assert!(near(&a.horizontal_taus_deg, 7.197542), "{:?}", a.horizontal_taus_deg);
        assert!(near(&a.vertical_taus_deg, 63.431044), "{:?}", a.vertical_taus_deg);
        assert!(near(&a.zero_taus_deg, 90.0), "{:?}", a.zero_taus_deg);
        assert!(near(&a.equal_y_taus_deg, 19.285893), "{:?}", a.equal_y_taus_deg);
        assert!((a.max_modulus_tau_deg - 57.1953).abs() < 1e-3);
    }

    #[test]
    fn cog_asymptote_and_mirror_symmetry() {
        let c = cog_curve(traj(), 0).unwrap();
        assert_eq!(c.asymptotes.len(), 2);
        let (tau, ang) = c.asymptotes[0];
        assert!((tau - 90.0).abs() < 1e-6);
        assert!((ang + 51.5699).abs() < 0.01);
        assert!(c.mirror_deviation < 1e-6);
    }

    #[test]
    fn relative_motion_midpoints() {
        // sum of positions is zero, so the midpoint of the pair is -r_ref/2
        // in the inertial frame and -3/2 r_ref relative to the reference
        let rm = relative_motion(traj(), 0).unwrap();
        for (i, (d, p)) in rm.midpoint_inertial.points.iter().enumerate() {
            let s = traj().state_at(traj().tau_start() + d.to_radians()).unwrap();
            assert!((*p + 0.5 * s.r[0]).norm() < 1e-10);
            let q = rm.midpoint_relative.points[i].1;
            assert!((q + 1.5 * s.r[0]).norm() < 1e-10);
        }
    }

    #[test]
    fn chords_stay_in_one_lobe() {
        let chords = chord_envelope(traj()).unwrap();
        for c in &chords {
            let degenerate = c.a.x.abs().min(c.b.x.abs()) < 1e-6;
            assert!(
                degenerate || c.a.x.signum() == c.b.x.signum(),
                "chord at tau = {} spans both lobes",
                c.tau_deg
            );
        }
    }

    #[test]
    fn energy_ratio_extrema() {
        let e = energy_ratio_series(traj()).unwrap();
        assert!((e.min_value - 1.94131227).abs() < 1e-6);
        assert!((e.max_value - 2.06124706).abs() < 1e-6);
        // min at the isosceles instants (multiples of 60), max at the
        // collinear ones (30 + multiples of 60)
        let m = e.min_tau_deg.rem_euclid(60.0);
        assert!(m < 0.01 || m > 59.99, "min at {}", e.min_tau_deg);
        assert!((e.max_tau_deg.rem_euclid(60.0) - 30.0).abs() < 0.01);
    }

    #[test]
    fn arclength_per_2a() {
        let a = arclength(traj()).unwrap();
        assert!((a.per_2a - 2.5596817148).abs() < 1e-6, "per_2a = {}", a.per_2a);
        let b = arclength_with_samples(traj(), 14400).unwrap();
        assert!((a.total - b.total).abs() < 1e-8);
        assert!((a.cumulative.last().unwrap().1 - a.total).abs() < 1e-12);
    }

    #[test]
    fn pedal_ratio_extrema() {
        let p = pedal_ratio_series(traj()).unwrap();
        assert!((p.min_value - 0.977452).abs() < 1e-4);
        assert!((p.min_tau_deg - 35.7199).abs() < 0.01);
        assert!((p.max_value - 0.998928).abs() < 1e-4);
        assert!((p.max_tau_deg - 65.8699).abs() < 0.01);
    }

    #[test]
    fn pedal_ratio_is_one_on_exact_lemniscate() {
        // synthetic Bernoulli lemniscate fed through the same machinery
        let lb = crate::curves::CurveSpec::BernoulliLemniscate { a: 1.0 };
        for i in 1..100 {
            let t = -1.3 + 2.6 * i as f64 / 100.0;
            let h = 1e-7;
            let p = crate::curves::eval_parametric(&lb, t).unwrap().point;
            let d = (crate::curves::eval_parametric(&lb, t + h).unwrap().point
                - crate::curves::eval_parametric(&lb, t - h).unwrap().point)
                / (2.0 * h);
            if p.norm() > 0.05 {
                assert!((pedal_ratio(p, d) - 1.0).abs() < 1e-8, "t = {t}");
            }
        }
    }

    #[test]
    fn ds_dr_sign_pattern_and_best_m() {
        // the m = 1.2 member: measured - model is negative early in the
        // arc and positive in the middle
        let s = ds_dr_comparison(traj(), 1.2, 91.0, 165.0).unwrap();
        let at = |deg: f64| {
            s.iter()
                .filter(|x| !x.breakdown)
                .min_by(|a, b| (a.tau_deg - deg).abs().total_cmp(&(b.tau_deg - deg).abs()))
                .unwrap()
                .residual
        };
        assert!(at(95.0) < 0.0);
        assert!(at(120.0) > 0.0);
        assert!(matches!(
            ds_dr_comparison(traj(), 1.2, 150.0, 210.0),
            Err(AnalysisError::NonMonotone(_, _))
        ));
        let (m, worst) = best_radical_m(traj()).unwrap();
        assert!((m - 1.44).abs() < 0.02, "best m = {m}");
        assert!(worst < 0.05, "max residual = {worst}");
    }
}
