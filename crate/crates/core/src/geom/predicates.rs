//! Orientation and in-circle predicates.
//!
//! Both are adaptive exact (Shewchuk's expansions, via the `robust` crate), so
//! signs are correct for every finite `f64` input. Exact cocircular ties are
//! broken by simulation of simplicity on the paraboloid lifts, lowest index
//! first.

use std::cmp::Ordering;

use super::point_set::Point;

/// Sign of the signed area of `(a, b, c)`: positive for counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(a.coord(), b.coord(), c.coord())
}

pub fn orient_sign(a: Point, b: Point, c: Point) -> Ordering {
    sign(orient(a, b, c))
}

/// Positive iff `d` lies strictly inside the circle through `a, b, c` (given ccw).
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    robust::incircle(a.coord(), b.coord(), c.coord(), d.coord())
}

fn sign(v: f64) -> Ordering {
    if v > 0.0 {
        Ordering::Greater
    } else if v < 0.0 {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// In-circle test with a symbolic tie-break; never returns `Equal` unless the
/// first three points are collinear.
///
/// Each point carries a global index. Point `i`'s lift `x^2 + y^2` is raised by
/// `eps^(k)` where `k` is its rank among the four indices, so the lowest index
/// dominates. The result is the sign of the perturbed determinant, with the
/// same convention as [`incircle`].
pub fn incircle_sos(pts: [(Point, u32); 4]) -> Ordering {
    let [(a, _), (b, _), (c, _), (d, _)] = pts;
    let s = sign(incircle(a, b, c, d));
    if s != Ordering::Equal {
        return s;
    }
    // Partial derivatives of the determinant with respect to each lift.
    let coeff = [
        orient(b, c, d),
        -orient(a, c, d),
        orient(a, b, d),
        -orient(a, b, c),
    ];
    let mut order = [0usize, 1, 2, 3];
    order.sort_by_key(|&k| pts[k].1);
    for k in order {
        let s = sign(coeff[k]);
        if s != Ordering::Equal {
            return s;
        }
    }
    Ordering::Equal
}

/// True when `p` lies strictly between `a` and `b`; assumes the three are collinear.
pub fn strictly_between(a: Point, b: Point, p: Point) -> bool {
    let (lo, hi, v) = if a.x != b.x {
        (a.x.min(b.x), a.x.max(b.x), p.x)
    } else {
        (a.y.min(b.y), a.y.max(b.y), p.y)
    };
    lo < v && v < hi
}

/// Circumcentre and squared circumradius of a non-degenerate triangle.
pub fn circumcircle(a: Point, b: Point, c: Point) -> (Point, f64) {
    let bx = b.x - a.x;
    let by = b.y - a.y;
    let cx = c.x - a.x;
    let cy = c.y - a.y;
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    (Point::new(a.x + ux, a.y + uy), ux * ux + uy * uy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(
            orient_sign(p(0., 0.), p(1., 0.), p(0., 1.)),
            Ordering::Greater
        );
        assert_eq!(orient_sign(p(0., 0.), p(0., 1.), p(1., 0.)), Ordering::Less);
        assert_eq!(
            orient_sign(p(0., 0.), p(1., 1.), p(3., 3.)),
            Ordering::Equal
        );
    }

    #[test]
    fn near_collinear_is_exact() {
        // Classic failure case for naive evaluation.
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0);
        assert_eq!(orient_sign(a, b, c), Ordering::Equal);
        let c2 = p(24.0, 24.000000000000004);
        assert_eq!(orient_sign(a, b, c2), Ordering::Greater);
    }

    #[test]
    fn sos_on_square_is_antisymmetric() {
        // The four corners of a square are cocircular. Exactly one of the two
        // diagonals must win.
        let q = [p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)];
        let t = |i: usize, j: usize, k: usize, l: usize| {
            incircle_sos([
                (q[i], i as u32),
                (q[j], j as u32),
                (q[k], k as u32),
                (q[l], l as u32),
            ])
        };
        // Triangles 012 / 023 use diagonal 0-2; triangles 013 / 123 use 1-3.
        let d02_ok = t(0, 1, 2, 3) == Ordering::Less && t(0, 2, 3, 1) == Ordering::Less;
        let d13_ok = t(0, 1, 3, 2) == Ordering::Less && t(1, 2, 3, 0) == Ordering::Less;
        assert!(d02_ok ^ d13_ok);
    }

    #[test]
    fn sos_coefficients_match_lift_derivatives() {
        // Perturb one lift numerically and compare the sign of the change.
        let pts = [p(0.3, 0.1), p(2.0, 0.4), p(1.1, 1.9), p(0.9, 0.8)];
        let det = |lift: [f64; 4]| {
            let r = |i: usize| [pts[i].x - pts[3].x, pts[i].y - pts[3].y, lift[i] - lift[3]];
            let (m0, m1, m2) = (r(0), r(1), r(2));
            m0[0] * (m1[1] * m2[2] - m1[2] * m2[1]) - m0[1] * (m1[0] * m2[2] - m1[2] * m2[0])
                + m0[2] * (m1[0] * m2[1] - m1[1] * m2[0])
        };
        let base: [f64; 4] = std::array::from_fn(|i| pts[i].x * pts[i].x + pts[i].y * pts[i].y);
        let (a, b, c, d) = (pts[0], pts[1], pts[2], pts[3]);
        let coeff = [
            orient(b, c, d),
            -orient(a, c, d),
            orient(a, b, d),
            -orient(a, b, c),
        ];
        for k in 0..4 {
            let mut l = base;
            l[k] += 1e-3;
            let diff = det(l) - det(base);
            assert_eq!(diff > 0.0, coeff[k] > 0.0, "lift {k}");
        }
        assert!((det(base) - incircle(a, b, c, d)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn sos_never_ties_for_proper_triangles(
            pts in proptest::collection::vec((-3i32..3, -3i32..3), 4),
            idx in Just([0u32, 1, 2, 3]).prop_shuffle(),
        ) {
            let q: Vec<Point> = pts.iter().map(|&(x, y)| p(x as f64, y as f64)).collect();
            prop_assume!(orient(q[0], q[1], q[2]) > 0.0);
            let distinct = (0..4).all(|i| (0..i).all(|j| q[i] != q[j]));
            prop_assume!(distinct);
            let s = incircle_sos([(q[0], idx[0]), (q[1], idx[1]), (q[2], idx[2]), (q[3], idx[3])]);
            prop_assert_ne!(s, Ordering::Equal);
        }

        #[test]
        fn circumcentre_is_equidistant(
            ax in -10.0..10.0f64, ay in -10.0..10.0f64,
            bx in -10.0..10.0f64, by in -10.0..10.0f64,
            cx in -10.0..10.0f64, cy in -10.0..10.0f64,
        ) {
            let (a, b, c) = (p(ax, ay), p(bx, by), p(cx, cy));
            prop_assume!(orient(a, b, c).abs() > 1e-2);
            let (o, r2) = circumcircle(a, b, c);
            for q in [a, b, c] {
                prop_assert!((o.dist2(q) - r2).abs() <= 1e-6 * r2.max(1.0));
            }
        }
    }
}
