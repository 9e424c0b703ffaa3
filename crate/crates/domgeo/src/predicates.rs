//! Exact-sign geometric predicates.
//!
//! Sign decisions come from adaptive-precision floating-point arithmetic
//! (the `robust` crate), so they are exact even for degenerate inputs. On
//! top of the raw predicates this module provides a symbolically perturbed
//! in-circle test that never answers "on the circle": exact ties are broken
//! by an infinitesimal, index-ordered perturbation of the lifted
//! coordinates, which keeps the planar structures built on it unique and
//! reproducible.

use robust::{incircle, orient2d, Coord};

use crate::error::{Error, Result};
use crate::geometry::RealPoint;

#[inline]
fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

#[inline]
pub(crate) fn orient2d_sign(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i8 {
    sign_of(orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    ))
}

#[inline]
pub(crate) fn incircle_sign(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> i8 {
    sign_of(incircle(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
        Coord { x: d[0], y: d[1] },
    ))
}

fn as_xy(p: &RealPoint) -> Result<[f64; 2]> {
    let c = p.coords();
    if c.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: c.len(),
        });
    }
    Ok([c[0], c[1]])
}

/// Sign of the signed area of triangle (a, b, c): +1 counter-clockwise,
/// −1 clockwise, 0 collinear. Exact.
pub fn orientation(a: &RealPoint, b: &RealPoint, c: &RealPoint) -> Result<i8> {
    Ok(orient2d_sign(as_xy(a)?, as_xy(b)?, as_xy(c)?))
}

/// Position of `d` relative to the circumcircle of the counter-clockwise
/// triangle (a, b, c): +1 strictly inside, −1 strictly outside, 0 on the
/// circle. Exact.
pub fn in_circle(a: &RealPoint, b: &RealPoint, c: &RealPoint, d: &RealPoint) -> Result<i8> {
    Ok(incircle_sign(as_xy(a)?, as_xy(b)?, as_xy(c)?, as_xy(d)?))
}

/// In-circle test with symbolic tie-breaking; never returns 0 for four
/// pairwise-distinct points of which (a, b, c) are not collinear.
///
/// Each point's lifted coordinate is nudged down by an infinitesimal that
/// shrinks as its id grows, so the point with the smallest id among those
/// whose position matters decides the tie. The answer depends only on the
/// (coordinates, id) pairs, never on evaluation order, which makes every
/// structure built from it reproducible.
pub(crate) fn incircle_perturbed(
    a: ([f64; 2], u32),
    b: ([f64; 2], u32),
    c: ([f64; 2], u32),
    d: ([f64; 2], u32),
) -> i8 {
    let raw = incircle_sign(a.0, b.0, c.0, d.0);
    if raw != 0 {
        return raw;
    }
    // Cofactors of the lifted column, one per row of the in-circle matrix.
    // The perturbation subtracts eps^w(id) from row r's lifted entry, so the
    // perturbed determinant is -Σ eps^w(id_r)·C_r and the smallest id with a
    // nonzero cofactor wins.
    let mut rows = [(a.1, 0u8), (b.1, 1), (c.1, 2), (d.1, 3)];
    rows.sort_by_key(|&(id, _)| id);
    for (_, row) in rows {
        let cofactor = match row {
            0 => orient2d_sign(b.0, c.0, d.0),
            1 => -orient2d_sign(a.0, c.0, d.0),
            2 => orient2d_sign(a.0, b.0, d.0),
            _ => -orient2d_sign(a.0, b.0, c.0),
        };
        if cofactor != 0 {
            return -cofactor;
        }
    }
    // All four cofactors zero means all four points collinear; callers
    // guarantee (a, b, c) spans a proper triangle.
    unreachable!("perturbed in-circle called with four collinear points");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(x: f64, y: f64) -> RealPoint {
        RealPoint::new(&[x, y]).unwrap()
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orientation(&rp(0.0, 0.0), &rp(1.0, 0.0), &rp(0.0, 1.0)).unwrap(), 1);
        assert_eq!(orientation(&rp(0.0, 0.0), &rp(1.0, 1.0), &rp(2.0, 2.0)).unwrap(), 0);
        assert_eq!(orientation(&rp(0.0, 0.0), &rp(0.0, 1.0), &rp(1.0, 0.0)).unwrap(), -1);
        assert!(orientation(&RealPoint::new(&[1.0]).unwrap(), &rp(0.0, 0.0), &rp(1.0, 1.0)).is_err());
    }

    #[test]
    fn in_circle_signs() {
        let (a, b, c) = (rp(0.0, 0.0), rp(2.0, 0.0), rp(0.0, 2.0));
        assert_eq!(in_circle(&a, &b, &c, &rp(0.5, 0.5)).unwrap(), 1);
        assert_eq!(in_circle(&a, &b, &c, &rp(2.0, 2.0)).unwrap(), 0);
        assert_eq!(in_circle(&a, &b, &c, &rp(10.0, 10.0)).unwrap(), -1);
    }

    #[test]
    fn orientation_is_exact_near_collinearity() {
        // A point a hair off the line y = x; naive arithmetic misclassifies
        // cases like these, the exact rational oracle must agree everywhere.
        let base = [
            ([0.5, 0.5], [12.0, 12.0], [24.0, 24.0]),
            ([0.5, 0.5], [12.0, 12.0], [24.0, 24.000000000000004]),
            ([0.5, 0.5], [12.0, 12.0], [24.000000000000004, 24.0]),
        ];
        for (a, b, c) in base {
            assert_eq!(orient2d_sign(a, b, c), exact::orient_sign(a, b, c));
        }
    }

    #[test]
    fn predicates_match_exact_rational_oracle() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        // Mix of grid points (degeneracies common) and jittered points.
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| -> [f64; 2] {
            if rng.random_bool(0.5) {
                [
                    rng.random_range(0..5i32) as f64,
                    rng.random_range(0..5i32) as f64,
                ]
            } else {
                [
                    rng.random_range(0..5i32) as f64 + rng.random::<f64>() * 1e-14,
                    rng.random_range(0..5i32) as f64 + rng.random::<f64>() * 1e-14,
                ]
            }
        };
        for _ in 0..2000 {
            let (a, b, c, d) = (
                sample(&mut rng),
                sample(&mut rng),
                sample(&mut rng),
                sample(&mut rng),
            );
            assert_eq!(orient2d_sign(a, b, c), exact::orient_sign(a, b, c));
            assert_eq!(incircle_sign(a, b, c, d), exact::incircle_sign(a, b, c, d));
        }
    }

    #[test]
    fn argument_order_symmetries_hold() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(414);
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| -> [f64; 2] {
            let base = [
                rng.random_range(0..4i32) as f64,
                rng.random_range(0..4i32) as f64,
            ];
            if rng.random_bool(0.5) {
                base
            } else {
                // Near-degenerate: a tiny push off the lattice.
                [base[0] + rng.random::<f64>() * 1e-13, base[1]]
            }
        };
        for _ in 0..2000 {
            let (a, b, c, d) = (
                sample(&mut rng),
                sample(&mut rng),
                sample(&mut rng),
                sample(&mut rng),
            );
            // Swapping two triangle vertices flips the orientation sign.
            assert_eq!(orient2d_sign(a, b, c), -orient2d_sign(a, c, b));
            // Rotating the triangle vertices leaves the circle test alone.
            let s = incircle_sign(a, b, c, d);
            assert_eq!(s, incircle_sign(b, c, a, d));
            assert_eq!(s, incircle_sign(c, a, b, d));
        }
    }

    #[test]
    fn perturbed_incircle_breaks_cocircular_ties() {
        // Square corners are cocircular; the tie must resolve deterministically
        // and never to 0.
        let (a, b, c, d) = ([0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0]);
        assert_eq!(incircle_sign(a, b, c, d), 0);
        let s = incircle_perturbed((a, 0), (b, 1), (c, 2), (d, 3));
        assert_eq!(s, 1);
        // Raising the deciding point's id hands the decision to the next row.
        let s2 = incircle_perturbed((a, 7), (b, 1), (c, 2), (d, 3));
        assert_ne!(s2, 0);
        // Non-ties are untouched by the perturbation.
        assert_eq!(incircle_perturbed((a, 0), (b, 1), (c, 2), ([0.5, 0.5], 3)), 1);
        assert_eq!(
            incircle_perturbed((a, 0), (b, 1), (c, 2), ([10.0, 10.0], 3)),
            -1
        );
    }

    #[test]
    fn perturbed_incircle_alternates_under_row_swaps() {
        // The perturbed determinant keeps determinant algebra: swapping two
        // rows (points travel with their ids) flips the sign.
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let pts: Vec<([f64; 2], u32)> = (0u32..4)
                .map(|i| {
                    (
                        [
                            rng.random_range(0..4i32) as f64,
                            rng.random_range(0..4i32) as f64,
                        ],
                        i,
                    )
                })
                .collect();
            let coords: Vec<[f64; 2]> = pts.iter().map(|p| p.0).collect();
            let mut distinct = true;
            for i in 0..4 {
                for j in 0..i {
                    if coords[i] == coords[j] {
                        distinct = false;
                    }
                }
            }
            if !distinct || orient2d_sign(coords[0], coords[1], coords[2]) == 0 {
                continue;
            }
            let base = incircle_perturbed(pts[0], pts[1], pts[2], pts[3]);
            assert_ne!(base, 0);
            // (0 1) swap: odd permutation.
            assert_eq!(incircle_perturbed(pts[1], pts[0], pts[2], pts[3]), -base);
            // 3-cycle (0 1 2): even permutation.
            assert_eq!(incircle_perturbed(pts[1], pts[2], pts[0], pts[3]), base);
        }
    }

    /// Exact rational reference implementations used only to validate the
    /// adaptive predicates.
    mod exact {
        use num::{BigRational, Signed, Zero};

        fn r(x: f64) -> BigRational {
            BigRational::from_float(x).expect("finite coordinate")
        }

        fn det3(m: [[BigRational; 3]; 3]) -> BigRational {
            let [a, b, c] = m;
            a[0].clone() * (b[1].clone() * c[2].clone() - b[2].clone() * c[1].clone())
                - a[1].clone() * (b[0].clone() * c[2].clone() - b[2].clone() * c[0].clone())
                + a[2].clone() * (b[0].clone() * c[1].clone() - b[1].clone() * c[0].clone())
        }

        fn sgn(v: BigRational) -> i8 {
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }

        pub fn orient_sign(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i8 {
            let one = BigRational::from_integer(1.into());
            sgn(det3([
                [r(a[0]), r(a[1]), one.clone()],
                [r(b[0]), r(b[1]), one.clone()],
                [r(c[0]), r(c[1]), one],
            ]))
        }

        pub fn incircle_sign(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> i8 {
            // 3×3 form over translated coordinates: rows (p − d) with the
            // squared norm in the last column.
            let row = |p: [f64; 2]| {
                let x = r(p[0]) - r(d[0]);
                let y = r(p[1]) - r(d[1]);
                let n = x.clone() * x.clone() + y.clone() * y.clone();
                [x, y, n]
            };
            sgn(det3([row(a), row(b), row(c)]))
        }
    }
}
