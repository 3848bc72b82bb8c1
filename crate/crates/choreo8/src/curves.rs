//! Catalog of classical figure-eight quartics (lemniscates of Bernoulli and
//! Gerono, the hippopede of Proclus and its y-rescaled generalization, the
//! ring-potential curve), with tangent/pedal machinery, the cissoid
//! construction, the triangular property, elliptic-integral arclengths, and
//! the hippopede fitting procedure used to approximate the figure-8 orbit.

use serde::Serialize;

use crate::vec2::Vec2;

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum CurveError {
    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),
    #[error("{0} is not available for this family")]
    Unsupported(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no point with x = a/2 on the real branch")]
    NoBasePoint,
    #[error("pedal curve is undefined at the double point (r = 0)")]
    DoublePoint,
}

/// One of the catalog families. `a` is the semi-axis (max |x|) throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family")]
pub enum CurveSpec {
    /// r^2 = a^2 cos 2*theta.
    BernoulliLemniscate { a: f64 },
    /// x = a cos t, y = b sin 2t; the classical Gerono curve has a = 2b.
    GeronoLemniscate { a: f64, b: f64 },
    /// r = a sqrt(1 - k^2 sin^2 theta), k > 1 (figure-8 branch).
    Hippopede { a: f64, k: f64 },
    /// Hippopede with y rescaled by rho = a'/a.
    GeneralizedHippopede { a: f64, k: f64, a_prime: f64 },
    /// Implicit curve K(k)/sqrt((x+1)^2+y^2) = pi/2 with
    /// k^2 = 4x/((x+1)^2+y^2); only the implicit form exists.
    RingPotential,
}

impl CurveSpec {
    pub fn validate(&self) -> Result<(), CurveError> {
        let bad = |m: &str| Err(CurveError::InvalidSpec(m.into()));
        match *self {
            CurveSpec::BernoulliLemniscate { a } if a <= 0.0 => bad("a must be positive"),
            CurveSpec::GeronoLemniscate { a, b } if a <= 0.0 || b <= 0.0 => {
                bad("a and b must be positive")
            }
            CurveSpec::Hippopede { a, k } if a <= 0.0 || k <= 1.0 => {
                bad("need a > 0 and k > 1")
            }
            CurveSpec::GeneralizedHippopede { a, k, a_prime }
                if a <= 0.0 || k <= 1.0 || a_prime <= 0.0 =>
            {
                bad("need a > 0, k > 1, a' > 0")
            }
            _ => Ok(()),
        }
    }

    fn a(&self) -> f64 {
        match *self {
            CurveSpec::BernoulliLemniscate { a }
            | CurveSpec::GeronoLemniscate { a, .. }
            | CurveSpec::Hippopede { a, .. }
            | CurveSpec::GeneralizedHippopede { a, .. } => a,
            CurveSpec::RingPotential => 1.0,
        }
    }
}

/// A sampled curve point in both Cartesian and polar form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub point: Vec2,
    pub r: f64,
    /// Polar angle, radians.
    pub theta: f64,
}

impl CurvePoint {
    pub fn theta_deg(&self) -> f64 {
        self.theta.to_degrees()
    }

    fn from_xy(t: f64, p: Vec2) -> Self {
        CurvePoint {
            t,
            point: p,
            r: p.norm(),
            theta: p.angle(),
        }
    }
}

/// Evaluates the family's parametric form at parameter `t`. For the
/// hippopede t is the polar angle; outside the real branch the origin
/// puncture is returned.
pub fn eval_parametric(spec: &CurveSpec, t: f64) -> Result<CurvePoint, CurveError> {
    spec.validate()?;
    let p = match *spec {
        CurveSpec::BernoulliLemniscate { a } => {
            let d = 1.0 + t.sin() * t.sin();
            Vec2::new(a * t.cos() / d, a * t.sin() * t.cos() / d)
        }
        CurveSpec::GeronoLemniscate { a, b } => Vec2::new(a * t.cos(), b * (2.0 * t).sin()),
        CurveSpec::Hippopede { a, k } => {
            let rad = (1.0 - k * k * t.sin() * t.sin()).max(0.0).sqrt();
            Vec2::new(a * rad * t.cos(), a * rad * t.sin())
        }
        CurveSpec::GeneralizedHippopede { a, k, a_prime } => {
            let rad = (1.0 - k * k * t.sin() * t.sin()).max(0.0).sqrt();
            Vec2::new(a * rad * t.cos(), a_prime * rad * t.sin())
        }
        CurveSpec::RingPotential => return Err(CurveError::Unsupported("parametric form")),
    };
    Ok(CurvePoint::from_xy(t, p))
}

/// Polar radius at angle `theta`; `None` off the real branch.
pub fn polar_radius(spec: &CurveSpec, theta: f64) -> Result<Option<f64>, CurveError> {
    spec.validate()?;
    Ok(match *spec {
        CurveSpec::BernoulliLemniscate { a } => {
            let c = (2.0 * theta).cos();
            (c >= 0.0).then(|| a * c.sqrt())
        }
        CurveSpec::Hippopede { a, k } => {
            let rad = 1.0 - k * k * theta.sin() * theta.sin();
            (rad >= 0.0).then(|| a * rad.sqrt())
        }
        CurveSpec::GeronoLemniscate { a, b } => {
            // tan(theta) = 2b sin t / a along x = a cos t, y = b sin 2t
            let s = a * theta.tan() / (2.0 * b);
            if s.abs() > 1.0 {
                None
            } else {
                let t = s.asin();
                Some(Vec2::new(a * t.cos(), b * (2.0 * t).sin()).norm())
            }
        }
        CurveSpec::GeneralizedHippopede { a, k, a_prime } => {
            let rho = a_prime / a;
            // base-curve angle before the y-rescale
            let tb = f64::atan2(theta.sin(), rho * theta.cos());
            let rad = 1.0 - k * k * tb.sin() * tb.sin();
            (rad >= 0.0).then(|| {
                let rb = a * rad.sqrt();
                Vec2::new(rb * tb.cos(), rho * rb * tb.sin()).norm()
            })
        }
        CurveSpec::RingPotential => return Err(CurveError::Unsupported("polar form")),
    })
}

/// Residual of the family's implicit (Cartesian) equation; zero on the curve.
pub fn implicit_value(spec: &CurveSpec, p: Vec2) -> Result<f64, CurveError> {
    spec.validate()?;
    let (x, y) = (p.x, p.y);
    Ok(match *spec {
        CurveSpec::BernoulliLemniscate { a } => {
            let r2 = x * x + y * y;
            r2 * r2 - a * a * (x * x - y * y)
        }
        CurveSpec::GeronoLemniscate { a, b } => {
            x.powi(4) + a.powi(4) * y * y / (4.0 * b * b) - a * a * x * x
        }
        CurveSpec::Hippopede { a, k } => {
            let r2 = x * x + y * y;
            r2 * r2 - a * a * (x * x - (k * k - 1.0) * y * y)
        }
        CurveSpec::GeneralizedHippopede { a, k, a_prime } => {
            let yb = y * a / a_prime;
            let r2 = x * x + yb * yb;
            r2 * r2 - a * a * (x * x - (k * k - 1.0) * yb * yb)
        }
        CurveSpec::RingPotential => {
            let d2 = (x + 1.0) * (x + 1.0) + y * y;
            if d2 <= 0.0 {
                return Err(CurveError::Domain("(x+1)^2 + y^2 must be positive".into()));
            }
            let k2 = 4.0 * x / d2;
            if !(0.0..1.0).contains(&k2) {
                return Err(CurveError::Domain(format!("modulus^2 = {k2} outside [0,1)")));
            }
            elliptic_k(k2.sqrt())? / d2.sqrt() - PI / 2.0
        }
    })
}

/// Tangent direction at the double point in degrees (the positive branch).
pub fn tangent_at_origin(spec: &CurveSpec) -> Result<f64, CurveError> {
    spec.validate()?;
    Ok(match *spec {
        CurveSpec::BernoulliLemniscate { .. } => 45.0,
        CurveSpec::GeronoLemniscate { a, b } => (2.0 * b / a).atan().to_degrees(),
        CurveSpec::Hippopede { k, .. } => (1.0 / (k * k - 1.0).sqrt()).atan().to_degrees(),
        CurveSpec::GeneralizedHippopede { a, k, a_prime } => {
            ((a_prime / a) / (k * k - 1.0).sqrt()).atan().to_degrees()
        }
        CurveSpec::RingPotential => return Err(CurveError::Unsupported("origin tangent")),
    })
}

/// Tangent/normal direction of the Bernoulli lemniscate at polar angle
/// `theta`: the normal makes the angle 3*theta with the x-axis.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LbTangent {
    /// dy/dx; `None` marks a vertical tangent (horizontal normal).
    pub slope: Option<f64>,
    pub normal_angle_deg: f64,
    pub tangent_angle_deg: f64,
}

pub fn lb_tangent_direction(theta: f64) -> LbTangent {
    let three = 3.0 * theta;
    let normal_angle_deg = three.to_degrees();
    let tangent_angle_deg = normal_angle_deg + 90.0;
    let slope = if three.tan().abs() < 1e-12 {
        None
    } else {
        Some(-1.0 / three.tan())
    };
    LbTangent {
        slope,
        normal_angle_deg,
        tangent_angle_deg,
    }
}

/// The cissoid construction of the hippopede: a ray at angle theta cuts off
/// a chord of length r = a cos t' (a = 1 here), with sin theta = sin t'/k.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CissoidPoint {
    pub r: f64,
    pub theta: f64,
    /// The equivalent polar-angle parameter of the standard form.
    pub t: f64,
}

pub fn cissoid_params(k: f64, t_prime: f64) -> Result<CissoidPoint, CurveError> {
    if k <= 1.0 {
        return Err(CurveError::Domain("k must exceed 1".into()));
    }
    if !(0.0..=PI / 2.0).contains(&t_prime) {
        return Err(CurveError::Domain("t' must lie in [0, pi/2]".into()));
    }
    let r = t_prime.cos();
    let theta = (t_prime.sin() / k).asin();
    let tp2 = t_prime.tan() * t_prime.tan();
    let d = k * k + (k * k - 2.0) * tp2;
    let t = if t_prime >= PI / 2.0 - 1e-12 {
        if k * k > 2.0 {
            (1.0 / (k * k - 2.0).sqrt()).atan()
        } else {
            PI / 2.0
        }
    } else if d <= 0.0 {
        PI / 2.0
    } else {
        (t_prime.tan() / d.sqrt()).atan()
    };
    Ok(CissoidPoint { r, theta, t })
}

/// The triangular property: at the point with x = a/2 the tangent meets the
/// x-axis a horizontal distance H away; for the Bernoulli lemniscate
/// H = 3a/2 exactly (the tangent passes through (-a, 0)).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TriangularReport {
    pub theta_t_deg: f64,
    pub base_point: Vec2,
    pub tangent_angle_deg: f64,
    /// H / a.
    pub height_over_a: f64,
}

pub fn triangular_property(spec: &CurveSpec) -> Result<TriangularReport, CurveError> {
    spec.validate()?;
    let a = spec.a();
    let t_end = match *spec {
        CurveSpec::BernoulliLemniscate { .. } => PI / 2.0,
        CurveSpec::Hippopede { k, .. } | CurveSpec::GeneralizedHippopede { k, .. } => {
            (1.0 / k).asin()
        }
        _ => return Err(CurveError::Unsupported("triangular property")),
    };
    // x(t) decreases monotonically from a to 0 on [0, t_end]
    let x_at = |t: f64| eval_parametric(spec, t).unwrap().point.x;
    let (mut lo, mut hi) = (0.0, t_end);
    if x_at(lo) < a / 2.0 {
        return Err(CurveError::NoBasePoint);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if x_at(mid) > a / 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let p = eval_parametric(spec, t)?.point;
    let h = 1e-6;
    let d = (eval_parametric(spec, t + h)?.point - eval_parametric(spec, t - h)?.point) / (2.0 * h);
    let slope = d.y / d.x;
    Ok(TriangularReport {
        theta_t_deg: p.angle().to_degrees(),
        base_point: p,
        tangent_angle_deg: slope.atan().to_degrees().abs(),
        height_over_a: (p.y / slope / a).abs(),
    })
}

/// Polar angle of the collinear configuration on a hippopede:
/// sin 2*theta_c = sqrt(k^2-1)/k^2 (half the sine of twice the branch limit).
pub fn collinear_angle(k: f64) -> Result<f64, CurveError> {
    if k <= 1.0 {
        return Err(CurveError::Domain("k must exceed 1".into()));
    }
    let s = (k * k - 1.0).sqrt() / (k * k);
    Ok(0.5 * s.asin().to_degrees())
}

/// The k (on the branch below sqrt(2)) whose collinear angle equals the
/// target; fails for targets above the 15-degree maximum.
pub fn k_for_collinear(target_deg: f64) -> Result<f64, CurveError> {
    let s = (2.0 * target_deg.to_radians()).sin();
    if !(0.0..=0.5).contains(&s) {
        return Err(CurveError::Domain(format!(
            "collinear angle {target_deg} deg unattainable (sin 2*theta must be in [0, 1/2])"
        )));
    }
    if s < 1e-12 {
        return Err(CurveError::Domain("target angle must be positive".into()));
    }
    Ok(((1.0 - (1.0 - 4.0 * s * s).sqrt()) / (2.0 * s * s)).sqrt())
}

/// Fit report mirroring the comparison-table columns.
#[derive(Debug, Clone, Serialize)]
pub struct HippopedeFit {
    pub spec: CurveSpec,
    pub tangent_at_o_deg: f64,
    pub collinear_angle_deg: f64,
    /// Radius at the collinear angle.
    pub collinear_r: f64,
    pub base_point_y: f64,
    pub base_tangent_deg: f64,
    pub height_over_a: f64,
}

/// Fits a hippopede to the figure-8: with only an origin-tangent target a
/// plain hippopede (k = 1/sin(target)); with a collinear-angle target as
/// well, a generalized hippopede found by bisection on k (the y-rescale
/// rho follows from the origin-tangent condition rho/sqrt(k^2-1) = tan
/// target).
pub fn fit_hippopede(
    target_tangent_origin_deg: f64,
    target_collinear_deg: Option<f64>,
    a: f64,
) -> Result<HippopedeFit, CurveError> {
    if a <= 0.0 {
        return Err(CurveError::Domain("a must be positive".into()));
    }
    let t_o = target_tangent_origin_deg.to_radians();
    if !(0.0 < t_o && t_o < PI / 2.0) {
        return Err(CurveError::Domain("origin tangent must lie in (0, 90) deg".into()));
    }
    let spec = match target_collinear_deg {
        None => CurveSpec::Hippopede {
            a,
            k: 1.0 / t_o.sin(),
        },
        Some(tc) => {
            // observed collinear angle of the rho-scaled curve as a function of k
            let observed = |k: f64| -> f64 {
                let rho = t_o.tan() * (k * k - 1.0).sqrt();
                let theta_c = collinear_angle(k).unwrap().to_radians();
                (rho * theta_c.tan()).atan().to_degrees()
            };
            let (mut lo, mut hi) = (1.0 + 1e-9, 2.0);
            if !(observed(lo) <= tc && tc <= observed(hi)) {
                return Err(CurveError::Domain(format!(
                    "collinear target {tc} deg unattainable for origin tangent \
                     {target_tangent_origin_deg} deg"
                )));
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if observed(mid) < tc {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let k = 0.5 * (lo + hi);
            let rho = t_o.tan() * (k * k - 1.0).sqrt();
            CurveSpec::GeneralizedHippopede {
                a,
                k,
                a_prime: rho * a,
            }
        }
    };
    let k = match spec {
        CurveSpec::Hippopede { k, .. } | CurveSpec::GeneralizedHippopede { k, .. } => k,
        _ => unreachable!(),
    };
    // collinear point: base angle theta_c(k), then the y-rescale if any
    let theta_c = collinear_angle(k)?.to_radians();
    let rb = a * (1.0 - k * k * theta_c.sin() * theta_c.sin()).sqrt();
    let (rho, observed_c) = match spec {
        CurveSpec::GeneralizedHippopede { a_prime, .. } => {
            let rho = a_prime / a;
            (rho, (rho * theta_c.tan()).atan().to_degrees())
        }
        _ => (1.0, theta_c.to_degrees()),
    };
    let collinear_r = Vec2::new(rb * theta_c.cos(), rho * rb * theta_c.sin()).norm();
    let tri = triangular_property(&spec)?;
    Ok(HippopedeFit {
        spec,
        tangent_at_o_deg: tangent_at_origin(&spec)?,
        collinear_angle_deg: observed_c,
        collinear_r,
        base_point_y: tri.base_point.y,
        base_tangent_deg: tri.tangent_angle_deg,
        height_over_a: tri.height_over_a,
    })
}

/// Complete elliptic integral of the first kind K(k), modulus convention,
/// by arithmetic-geometric mean iteration (1e-14 relative).
pub fn elliptic_k(k: f64) -> Result<f64, CurveError> {
    if !(0.0..1.0).contains(&k) {
        return Err(CurveError::Domain(format!("modulus {k} outside [0, 1)")));
    }
    let (mut a, mut b) = (1.0, (1.0 - k * k).sqrt());
    while (a - b).abs() > 1e-15 * a {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    Ok(PI / (2.0 * a))
}

/// Lemniscate-of-Bernoulli arclengths in both conventions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LbArcLength {
    /// Perimeter / (2a) = sqrt(2) K(1/sqrt(2)) = 2.622057...
    pub per_2a: f64,
    /// Full closed-curve perimeter by quadrature (= 2a sqrt(2) K(1/sqrt(2))).
    pub perimeter: f64,
}

pub fn lb_arclength(a: f64) -> Result<LbArcLength, CurveError> {
    if a <= 0.0 {
        return Err(CurveError::Domain("a must be positive".into()));
    }
    let spec = CurveSpec::BernoulliLemniscate { a };
    // composite Simpson on |dP/dt| over the full parameter range
    let n = 4096;
    let h = 2.0 * PI / n as f64;
    let speed = |t: f64| {
        let d = 1e-6;
        let dp = (eval_parametric(&spec, t + d).unwrap().point
            - eval_parametric(&spec, t - d).unwrap().point)
            / (2.0 * d);
        dp.norm()
    };
    let mut perimeter = 0.0;
    for seg in 0..n / 2 {
        let t = 2.0 * seg as f64 * h;
        perimeter += h / 3.0 * (speed(t) + 4.0 * speed(t + h) + speed(t + 2.0 * h));
    }
    Ok(LbArcLength {
        per_2a: 2.0_f64.sqrt() * elliptic_k(1.0 / 2.0_f64.sqrt())?,
        perimeter,
    })
}

/// ds/dr of the radical family
/// sqrt((1-(1-m) r^2 (1-r^2)) / ((1-r^2)(1+m r^2))); m = 1 recovers the
/// Bernoulli radical 1/sqrt(1-r^4).
pub fn radical_family_ds_dr(m: f64, r: f64) -> Result<f64, CurveError> {
    if !(0.0..1.0).contains(&r) {
        return Err(CurveError::Domain(format!("r = {r} outside [0, 1)")));
    }
    let r2 = r * r;
    Ok(((1.0 - (1.0 - m) * r2 * (1.0 - r2)) / ((1.0 - r2) * (1.0 + m * r2))).sqrt())
}

/// Foot of the perpendicular from the origin to the tangent line.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PedalPoint {
    pub point: Vec2,
    pub foot: Vec2,
    /// Pedal distance |origin -> tangent line|.
    pub p: f64,
}

pub fn pedal_curve(spec: &CurveSpec, t: f64) -> Result<PedalPoint, CurveError> {
    let cp = eval_parametric(spec, t)?;
    if cp.r < 1e-9 {
        return Err(CurveError::DoublePoint);
    }
    let u = match *spec {
        // closed form: the normal makes the angle 3*theta with the x-axis
        CurveSpec::BernoulliLemniscate { .. } => {
            let ang = 3.0 * cp.theta + PI / 2.0;
            Vec2::new(ang.cos(), ang.sin())
        }
        _ => {
            let h = 1e-6 * spec.a();
            let d = (eval_parametric(spec, t + h)?.point - eval_parametric(spec, t - h)?.point)
                / (2.0 * h);
            d.unit().ok_or(CurveError::DoublePoint)?
        }
    };
    let p = cp.point;
    let foot = p - u * p.dot(u);
    Ok(PedalPoint {
        point: p,
        foot,
        p: p.cross(u).abs(),
    })
}

/// Rotates the curve's plane about the x-axis by `alpha` and projects back:
/// y shrinks by cos^2(alpha), x is unchanged.
pub fn project_about_x_axis(
    spec: CurveSpec,
    alpha_deg: f64,
) -> impl Fn(f64) -> Result<Vec2, CurveError> {
    let f = alpha_deg.to_radians().cos().powi(2);
    move |t| {
        let p = eval_parametric(&spec, t)?.point;
        Ok(Vec2::new(p.x, p.y * f))
    }
}
