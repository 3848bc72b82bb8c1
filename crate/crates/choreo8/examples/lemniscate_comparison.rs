//! How close is the figure-8 orbit to a lemniscate of Bernoulli? Pedal
//! ratio p/r^3, arclength, and the radical-family ds/dr comparison.
//!
//! Run with: cargo run --example lemniscate_comparison

use choreo8::analysis::{arclength, best_radical_m, ds_dr_comparison, pedal_ratio_series};
use choreo8::curves::lb_arclength;
use choreo8::{canonical_initial_state, integrate};

fn main() {
    let traj = integrate(&canonical_initial_state(), 2.0 * std::f64::consts::PI, 1e-12).unwrap();

    // for an exact LB the pedal ratio p/r^3 is identically 1
    let p = pedal_ratio_series(&traj).unwrap();
    println!(
        "pedal ratio p/r^3: min {:.6} at tau = {:.2} deg, relative max {:.6} at {:.2} deg",
        p.min_value, p.min_tau_deg, p.max_value, p.max_tau_deg
    );

    let arc = arclength(&traj).unwrap();
    let lb = lb_arclength(1.0).unwrap();
    println!(
        "length/(2a): figure-8 {:.8}, LB {:.8}, ratio {:.6}",
        arc.per_2a,
        lb.per_2a,
        lb.per_2a / arc.per_2a
    );

    // members of the radical family ds/dr = f_m(r) against the measured arc
    for m in [1.1, 1.2, 1.3] {
        let s = ds_dr_comparison(&traj, m, 91.0, 165.0).unwrap();
        let worst = s
            .iter()
            .filter(|x| !x.breakdown)
            .map(|x| x.residual.abs())
            .fold(0.0, f64::max);
        println!("m = {m}: max |measured - model| = {worst:.4}");
    }
    let (m, worst) = best_radical_m(&traj).unwrap();
    println!("best m on the scanned grid: {m:.3} (max residual {worst:.4})");
}
