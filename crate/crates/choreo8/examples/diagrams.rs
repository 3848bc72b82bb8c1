//! Derived diagrams of one particle: hodograph, acceleration curve with its
//! special instants, the center-of-gravity locus, relative motion, and the
//! same-lobe chord family.
//!
//! Run with: cargo run --example diagrams

use choreo8::analysis::{
    acceleration_diagram, chord_envelope, cog_curve, hodograph, relative_motion,
};
use choreo8::{canonical_initial_state, integrate};

fn main() {
    let traj = integrate(&canonical_initial_state(), 2.0 * std::f64::consts::PI, 1e-12).unwrap();

    let h = hodograph(&traj, 0).unwrap();
    println!("hodograph: {} samples, winding {:?}", h.points.len(), h.winding);

    let a = acceleration_diagram(&traj, 0).unwrap();
    println!("acceleration diagram: winding {:?}", a.curve.winding);
    println!("  horizontal again at tau = {:.4} deg", a.horizontal_taus_deg[0]);
    println!("  same y as next particle at tau = {:.4} deg", a.equal_y_taus_deg[0]);
    println!("  maximum modulus at tau = {:.4} deg", a.max_modulus_tau_deg);
    println!("  vertical at tau = {:.4} deg", a.vertical_taus_deg[0]);
    println!("  vanishes at tau = {:?} deg", a.zero_taus_deg);

    let c = cog_curve(&traj, 0).unwrap();
    for (tau, ang) in &c.asymptotes {
        println!("cog asymptote at tau = {:.2} deg: direction {:.4} deg", tau, ang);
    }
    println!("cog mirror-symmetry deviation: {:.2e}", c.mirror_deviation);

    let rm = relative_motion(&traj, 0).unwrap();
    println!(
        "relative motion wrt particle 1: midpoint of pair traces the orbit scaled by 3/2 \
         (relative) and 1/2 (inertial); {} samples each",
        rm.midpoint_relative.points.len()
    );

    let chords = chord_envelope(&traj).unwrap();
    println!("chord family: {} same-lobe segments", chords.len());
}
