#![allow(dead_code)]

use drumhead::geometry::build_triangle;
use drumhead::{Point2, PolygonDomain};

/// `J_0(x)` from its power series.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let (mut term, mut sum) = (1.0, 1.0);
    for m in 1..200 {
        term *= q / (m as f64 * m as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// First positive zero of `J_0`, by bisection.
pub fn j0_first_zero() -> f64 {
    let (mut a, mut b) = (2.0f64, 3.0f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if bessel_j0(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Triangle from two base angles (radians) on the unit base `[0,1] × {0}`.
pub fn triangle_from_angles(a: f64, b: f64) -> PolygonDomain {
    // apex from the law of sines
    let c = std::f64::consts::PI - a - b;
    let side = b.sin() / c.sin();
    let apex = Point2::new(side * a.cos(), side * a.sin());
    build_triangle(Point2::ORIGIN, Point2::new(1.0, 0.0), apex).unwrap()
}

/// Uniform point inside a triangle from two unit samples.
pub fn point_in_triangle(t: &PolygonDomain, u: f64, v: f64) -> Point2 {
    let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
    let [a, b, c] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
    a + (b - a) * u + (c - a) * v
}
