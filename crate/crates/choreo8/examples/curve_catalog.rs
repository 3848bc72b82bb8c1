//! Tour of the quartic-curve catalog: tangents at the double point, the
//! triangular property, collinear angles, elliptic-integral lengths, and
//! the one- and two-parameter hippopede fits to the figure-8.
//!
//! Run with: cargo run --example curve_catalog

use choreo8::curves::*;
use choreo8::dynamics::FIG8_X0;

fn main() {
    let lb = CurveSpec::BernoulliLemniscate { a: 1.0 };
    let tri = triangular_property(&lb).unwrap();
    println!(
        "LB: origin tangent {} deg, theta_T = {:.5} deg, H = {:.9} a",
        tangent_at_origin(&lb).unwrap(),
        tri.theta_t_deg,
        tri.height_over_a
    );
    let len = lb_arclength(1.0).unwrap();
    println!(
        "    K(1/sqrt2) = {:.10}; length/(2a) = {:.6}; perimeter = {:.6}",
        elliptic_k(1.0 / 2.0_f64.sqrt()).unwrap(),
        len.per_2a,
        len.perimeter
    );

    let lg = CurveSpec::GeronoLemniscate { a: 1.0, b: 0.5 };
    println!("LG (a = 2b): origin tangent {} deg", tangent_at_origin(&lg).unwrap());

    println!("collinear angle of LB (k = sqrt2): {:.1} deg", collinear_angle(2.0_f64.sqrt()).unwrap());
    println!("k needed for a 14.0688 deg collinear angle: {:.5}", k_for_collinear(14.0688).unwrap());

    let one = fit_hippopede(42.8434, None, FIG8_X0).unwrap();
    println!(
        "one-parameter hippopede fit: {:?}\n  collinear {:.4} deg at r = {:.6}; base y {:.5}, \
         tangent {:.4} deg, H = {:.5} a",
        one.spec, one.collinear_angle_deg, one.collinear_r, one.base_point_y,
        one.base_tangent_deg, one.height_over_a
    );

    let two = fit_hippopede(42.8434, Some(14.0688), FIG8_X0).unwrap();
    println!(
        "two-parameter fit: {:?}\n  collinear {:.4} deg at r = {:.6}; base y {:.5}, \
         tangent {:.4} deg, H = {:.5} a",
        two.spec, two.collinear_angle_deg, two.collinear_r, two.base_point_y,
        two.base_tangent_deg, two.height_over_a
    );

    // the ring-potential curve passes near the lemniscate's right lobe
    let p = eval_parametric(&lb, 0.4).unwrap().point;
    println!(
        "ring-potential residual at an LB point {:?}: {:.4}",
        p,
        implicit_value(&CurveSpec::RingPotential, p).unwrap()
    );
}
