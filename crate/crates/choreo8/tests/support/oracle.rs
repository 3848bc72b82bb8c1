//! Independent reference integrator: classical fixed-step RK4 with its own
//! inline force evaluation, deliberately sharing no numerics with the
//! adaptive production path.

use choreo8::canonical_initial_state;

pub type Y = [f64; 12];

pub fn initial_y() -> Y {
    let s = canonical_initial_state();
    let mut y = [0.0; 12];
    for i in 0..3 {
        y[2 * i] = s.r[i].x;
        y[2 * i + 1] = s.r[i].y;
        y[6 + 2 * i] = s.v[i].x;
        y[6 + 2 * i + 1] = s.v[i].y;
    }
    y
}

fn deriv(y: &Y) -> Y {
    const GM: f64 = 1.0 / 3.0;
    let mut d = [0.0; 12];
    d[..6].copy_from_slice(&y[6..]);
    for i in 0..3 {
        let (xi, yi) = (y[2 * i], y[2 * i + 1]);
        let (mut ax, mut ay) = (0.0, 0.0);
        for j in 0..3 {
            if j != i {
                let (dx, dy) = (y[2 * j] - xi, y[2 * j + 1] - yi);
                let r3 = (dx * dx + dy * dy).sqrt().powi(3);
                ax += GM * dx / r3;
                ay += GM * dy / r3;
            }
        }
        d[6 + 2 * i] = ax;
        d[6 + 2 * i + 1] = ay;
    }
    d
}

fn axpy(y: &Y, h: f64, d: &Y) -> Y {
    let mut out = *y;
    for k in 0..12 {
        out[k] += h * d[k];
    }
    out
}

/// Integrates the canonical state to `tau_end` with fixed step `dt`.
pub fn rk4_final(dt: f64, tau_end: f64) -> Y {
    let mut y = initial_y();
    let n = (tau_end / dt).round() as usize;
    let h = tau_end / n as f64;
    for _ in 0..n {
        let k1 = deriv(&y);
        let k2 = deriv(&axpy(&y, h / 2.0, &k1));
        let k3 = deriv(&axpy(&y, h / 2.0, &k2));
        let k4 = deriv(&axpy(&y, h, &k3));
        for j in 0..12 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

/// Total energy in the per-particle-mass convention.
pub fn energy(y: &Y) -> f64 {
    let mut e = 0.0;
    for i in 0..3 {
        e += 0.5 * (y[6 + 2 * i].powi(2) + y[6 + 2 * i + 1].powi(2));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let (dx, dy) = (y[2 * j] - y[2 * i], y[2 * j + 1] - y[2 * i + 1]);
            e -= (1.0 / 3.0) / (dx * dx + dy * dy).sqrt();
        }
    }
    e
}
