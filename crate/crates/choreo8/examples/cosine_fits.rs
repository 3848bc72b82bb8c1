//! Cosine-series least squares: the one-harmonic separation fit and the
//! perimeter fit with harmonics at multiples of six.
//!
//! Run with: cargo run --example cosine_fits

use choreo8::series::fit_cosine_series;
use choreo8::{canonical_initial_state, integrate};

fn main() {
    let two_pi = 2.0 * std::f64::consts::PI;
    let traj = integrate(&canonical_initial_state(), two_pi, 1e-12).unwrap();

    // classical one-harmonic fit of the base-pair separation: least squares
    // on its four extrema
    let r23: Vec<(f64, f64)> = (0..4)
        .map(|k| {
            let t = two_pi * k as f64 / 4.0;
            (t, traj.state_at(t).unwrap().separation(1, 2))
        })
        .collect();
    let fit = fit_cosine_series(&r23, &[2]).unwrap();
    println!("r23(tau) ~ {:.6} + ({:.6}) cos 2 tau", fit.c0, fit.coeffs[0]);

    // perimeter on a dense grid; the symmetry admits only multiples of 6
    let perimeter: Vec<(f64, f64)> = (0..720)
        .map(|k| {
            let t = two_pi * k as f64 / 720.0;
            let s = traj.state_at(t).unwrap();
            (t, s.separation(0, 1) + s.separation(1, 2) + s.separation(2, 0))
        })
        .collect();
    let fit = fit_cosine_series(&perimeter, &[6, 12]).unwrap();
    println!(
        "perimeter(tau) ~ {:.9} + ({:.7}) cos 6 tau + ({:.3e}) cos 12 tau",
        fit.c0, fit.coeffs[0], fit.coeffs[1]
    );
    println!("  rms residual {:.2e}, max residual {:.2e}", fit.rms_residual, fit.max_residual);

    // an odd harmonic picks up nothing
    let fit = fit_cosine_series(&perimeter, &[6, 7, 12]).unwrap();
    println!("  coefficient of the (forbidden) cos 7 tau term: {:.2e}", fit.coeffs[1]);
}
