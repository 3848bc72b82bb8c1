//! Locate the 12 alternating isosceles/collinear configurations (one every
//! 30 degrees of normalized time) and print their measured geometry.
//!
//! Run with: cargo run --example configuration_events

use choreo8::analysis::{collinear_geometry, find_configurations, isosceles_geometry, ConfigKind};
use choreo8::{canonical_initial_state, integrate};

fn main() {
    let traj = integrate(&canonical_initial_state(), 2.0 * std::f64::consts::PI, 1e-12).unwrap();
    let events = find_configurations(&traj).unwrap();

    println!("{:<4} {:>9} {:>10} {:>12} {:>12}", "kind", "tau_deg", "particle", "line_deg", "tangent_deg");
    for e in &events {
        let kind = match e.kind {
            ConfigKind::Isosceles => "iso",
            ConfigKind::Collinear => "col",
        };
        println!(
            "{:<4} {:>9.4} {:>10} {:>12.6} {:>12.6}",
            kind,
            e.tau_deg,
            e.special_particle + 1,
            e.line_angle_deg,
            e.tangent_angle_deg
        );
    }

    let col = collinear_geometry(&events[1], &traj).unwrap();
    println!(
        "\nfirst collinear instant: line {:.4} deg, common tangent {:.4} deg,",
        col.line_angle_deg, col.tangent_angle_deg
    );
    println!(
        "  velocity parallelism {:.1e} deg, |v_origin + 2 v_outer| = {:.1e}",
        col.tangent_parallelism_deg, col.speed_ratio_error
    );

    let iso = isosceles_geometry(&events[0], &traj).unwrap();
    println!(
        "first isosceles instant: apex at {:.6}, base x/apex = {:.6}, side angle {:.4} deg",
        iso.apex_distance, iso.base_over_apex, iso.side_angle_deg
    );
}
