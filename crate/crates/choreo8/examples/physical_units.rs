//! Attach physical units to the normalized orbit: Earth-mass and
//! kilogram-scale instantiations, including the published figures the
//! normalization cannot reproduce.
//!
//! Run with: cargo run --example physical_units

use choreo8::dynamics::{QuantityKind, UnitSystem};

fn main() {
    // three bodies totalling one Earth mass, spread over an Earth radius
    let earth = UnitSystem {
        r_m: 6.378e6,
        m_total_kg: 5.972e24,
        g: UnitSystem::DEFAULT_G,
    };
    println!("Earth-scale system:");
    println!("  period: {:.3} min", earth.period_s() / 60.0);
    println!(
        "  max separation: {:.1} km",
        earth.denormalize(QuantityKind::Length, 1.380471) / 1e3
    );
    println!(
        "  min separation: {:.1} km",
        earth.denormalize(QuantityKind::Length, 0.476626) / 1e3
    );

    // three bodies of ~1/3 kg each, one meter apart
    let desk = UnitSystem {
        r_m: 1.0,
        m_total_kg: 1.0,
        g: UnitSystem::DEFAULT_G,
    };
    let days = desk.period_s() / 86400.0;
    println!("\n1 kg / 1 m system:");
    println!("  period: {days:.4} days (a published figure of 28.153 days does not reproduce)");
    println!(
        "  separations range over {:.4} .. {:.4} m",
        desk.denormalize(QuantityKind::Length, 0.476626),
        desk.denormalize(QuantityKind::Length, 1.380471)
    );
}
