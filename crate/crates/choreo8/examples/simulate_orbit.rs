//! Integrate the canonical figure-8 orbit over one period and verify the
//! conserved quantities and closure.
//!
//! Run with: cargo run --example simulate_orbit

use choreo8::dynamics::{energies, first_integrals};
use choreo8::integrate::verify_periodicity;
use choreo8::{canonical_initial_state, integrate};

fn main() {
    let tau_end = 2.0 * std::f64::consts::PI;
    let state = canonical_initial_state();
    let traj = integrate(&state, tau_end, 1e-12).expect("integration");
    println!("accepted steps: {}", traj.len());

    let e = energies(&state).unwrap();
    println!(
        "E_k = {:.6}  E_p = {:.6}  E_t = {:.10}  P/K = {:.8}",
        e.kinetic_total, e.potential_total, e.total, e.pk_ratio
    );

    let start = first_integrals(&state);
    let end = first_integrals(&traj.state_at(tau_end).unwrap());
    println!(
        "|COM| = {:.2e} -> {:.2e}   |L| = {:.2e} -> {:.2e}",
        start.com.norm(),
        end.com.norm(),
        start.ang_momentum.abs(),
        end.ang_momentum.abs()
    );
    println!(
        "energy drift over one period: {:.2e}",
        (end.energy - start.energy).abs()
    );

    let p = verify_periodicity(&traj).unwrap();
    println!(
        "closure: position {:.2e}, velocity {:.2e}; cyclic-shift deviation {:.2e}",
        p.closure_position, p.closure_velocity, p.cyclic_shift
    );
}
