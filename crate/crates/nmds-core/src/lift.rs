//! The degree-3 embedding of PG(2,q) into PG(9,q) with the curve's defining
//! form in the first slot, the lifted track inside the hyperplane
//! Sigma = {X0 = 0}, and the two-way dictionary between plane cubics and
//! hyperplanes of PG(9,q).
//!
//! Coordinates X0..X9 follow the fixed order
//! (f, X^2Y, X^2Z, XY^2, XYZ, XZ^2, Y^3, Y^2Z, YZ^2, Z^3): a point of the
//! curve lifts with X0 = 0, and track points are stored as the 9-tuple
//! (X1..X9) so every rank computation is over 9 columns.

use std::collections::HashMap;

use crate::curves::{CubicForm, Curve};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::geom::{normalize_coords, DualVector, MatrixGF, ProjPoint};

/// Image of a plane point: 10 normalized coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiftedPoint {
    pub coords: [Fe; 10],
}

/// Permutation of the Sigma coordinates X1..X9 (0-based here) induced by
/// swapping Y and Z: (X1 X2)(X3 X5)(X6 X9)(X7 X8), X4 fixed.
pub const YZ_PERM9: [usize; 9] = [1, 0, 4, 3, 2, 8, 7, 6, 5];

/// Evaluate the embedding at any plane point; the first coordinate vanishes
/// exactly on the curve. Never zero: f carries the X^3 term, so at (1:0:0)
/// the first slot survives while every monomial slot vanishes.
pub fn lift_point(curve: &Curve, p: &ProjPoint) -> LiftedPoint {
    let f = &curve.field;
    let [x, y, z] = [p.coords[0], p.coords[1], p.coords[2]];
    let m3 = |a, b, c| f.mul(f.mul(a, b), c);
    let raw = [
        curve.defining.evaluate(f, &[x, y, z]),
        m3(x, x, y),
        m3(x, x, z),
        m3(x, y, y),
        m3(x, y, z),
        m3(x, z, z),
        m3(y, y, y),
        m3(y, y, z),
        m3(y, z, z),
        m3(z, z, z),
    ];
    let coords = normalize_coords(f, &raw).expect("embedding image is never the zero vector");
    LiftedPoint { coords: coords.try_into().expect("length 10") }
}

/// The lifted track: the n curve points as 9-coordinate points of Sigma,
/// in curve enumeration order.
#[derive(Clone, Debug)]
pub struct Track {
    pub curve: Curve,
    pub points: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
}

/// Lift every rational point of the curve; requires n >= 9.
pub fn lift_curve(curve: &Curve) -> Result<Track> {
    let n = curve.n();
    if n < 9 {
        return Err(Error::TooFewPoints(n));
    }
    let f = &curve.field;
    let mut points = Vec::with_capacity(n);
    for p in curve.rational_points() {
        let lifted = lift_point(curve, p);
        debug_assert!(f.is_zero(lifted.coords[0]), "curve points land in Sigma");
        points.push(ProjPoint { coords: lifted.coords[1..].to_vec() });
    }
    let index: HashMap<ProjPoint, usize> =
        points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    assert_eq!(index.len(), n, "the embedding is injective on the curve");
    Ok(Track { curve: curve.clone(), points, index })
}

impl Track {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn field(&self) -> &Field {
        &self.curve.field
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &ProjPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Number of track points on a hyperplane of Sigma.
    pub fn secant_count(&self, h: &DualVector) -> usize {
        let f = self.field();
        self.points.iter().filter(|p| f.is_zero(f.dot(&h.coords, &p.coords))).count()
    }

    /// The 9 x n generator matrix whose columns are the track points; this is
    /// the near-MDS code generator exported in the matrix text format.
    pub fn generator_matrix(&self) -> MatrixGF {
        let f = self.field();
        let mut m = MatrixGF::zeros(9, self.n());
        for (j, p) in self.points.iter().enumerate() {
            for i in 0..9 {
                m[(i, j)] = p.coords[i];
            }
        }
        let _ = f;
        m
    }
}

/// Express a cubic g in the basis {f, X^2Y, ..., Z^3}: lambda0 = g0/f0 and
/// lambda_i = g_i - lambda0 f_i, giving the hyperplane sum lambda_i X_i = 0
/// of PG(9,q) that cuts the embedded plane exactly along g = 0.
pub fn cubic_to_hyperplane(curve: &Curve, g: &CubicForm) -> DualVector {
    let f = &curve.field;
    let f0 = curve.defining.coeffs[0];
    debug_assert!(!f.is_zero(f0), "defining form carries X^3");
    let lambda0 = f.div(g.coeffs[0], f0).expect("f0 nonzero");
    let mut coords = vec![f.zero(); 10];
    coords[0] = lambda0;
    for i in 1..10 {
        coords[i] = f.sub(g.coeffs[i], f.mul(lambda0, curve.defining.coeffs[i]));
    }
    DualVector { coords: normalize_coords(f, &coords).expect("nonzero cubic") }
}

/// Inverse dictionary: the cubic lambda0 f + sum lambda_i m_i. The hyperplane
/// X0 = 0 alone corresponds to the curve itself and is rejected.
pub fn hyperplane_to_cubic(curve: &Curve, h: &DualVector) -> Result<CubicForm> {
    let f = &curve.field;
    debug_assert_eq!(h.coords.len(), 10);
    if h.coords[1..].iter().all(|&x| f.is_zero(x)) {
        return Err(Error::SigmaHyperplane);
    }
    let lambda0 = h.coords[0];
    let mut coeffs = [f.zero(); 10];
    coeffs[0] = f.mul(lambda0, curve.defining.coeffs[0]);
    for i in 1..10 {
        coeffs[i] = f.add(h.coords[i], f.mul(lambda0, curve.defining.coeffs[i]));
    }
    Ok(CubicForm { coeffs })
}

/// Restrict a hyperplane of PG(9,q) distinct from Sigma to a hyperplane of
/// Sigma (the coefficients on X1..X9).
pub fn restrict_to_sigma(field: &Field, h: &DualVector) -> Result<DualVector> {
    debug_assert_eq!(h.coords.len(), 10);
    if h.coords[1..].iter().all(|&x| field.is_zero(x)) {
        return Err(Error::SigmaHyperplane);
    }
    Ok(DualVector { coords: normalize_coords(field, &h.coords[1..])? })
}

/// Apply the Y-Z swap permutation to raw 9-coordinate data (no renormalization).
pub fn yz_swap9(coords: &[Fe]) -> Vec<Fe> {
    debug_assert_eq!(coords.len(), 9);
    YZ_PERM9.iter().map(|&src| coords[src]).collect()
}

/// Swap a Sigma point; the result is renormalized since the permutation can
/// move a different coordinate into the leading slot.
pub fn yz_swap_point(field: &Field, p: &ProjPoint) -> ProjPoint {
    ProjPoint {
        coords: normalize_coords(field, &yz_swap9(&p.coords)).expect("point is nonzero"),
    }
}

pub fn yz_swap_dual(field: &Field, h: &DualVector) -> DualVector {
    DualVector {
        coords: normalize_coords(field, &yz_swap9(&h.coords)).expect("dual is nonzero"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{cubic_from_lines, CubicForm, Curve};
    use crate::geom::{incident, normalize, PgSpace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn f(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn curve_q7() -> Curve {
        let f7 = f(7);
        Curve::weierstrass(f7, f7.from_int(0), f7.from_int(1)).unwrap()
    }

    #[test]
    fn lift_flex_at_infinity() {
        let e = curve_q7();
        let f7 = e.field;
        let p = normalize(&f7, &[f7.zero(), f7.one(), f7.zero()]).unwrap();
        let l = lift_point(&e, &p);
        let mut expect = [f7.zero(); 10];
        expect[6] = f7.one(); // only Y^3 survives, f vanishes on the curve
        assert_eq!(l.coords, expect);
    }

    #[test]
    fn lift_unit_point_off_curve() {
        let e = curve_q7();
        let f7 = e.field;
        let p = normalize(&f7, &[f7.one(), f7.zero(), f7.zero()]).unwrap();
        let l = lift_point(&e, &p);
        let mut expect = [f7.zero(); 10];
        expect[0] = f7.one(); // f(1,0,0) = -1 normalizes to 1, all monomial slots 0
        assert_eq!(l.coords, expect);
        // first coordinate vanishes exactly on the curve
        for p in PgSpace::new(f7, 2).iter() {
            let on = e.contains(&p);
            assert_eq!(f7.is_zero(lift_point(&e, &p).coords[0]), on);
        }
    }

    #[test]
    fn lift_curve_q7_track() {
        let e = curve_q7();
        let t = lift_curve(&e).unwrap();
        assert_eq!(t.n(), 12);
        // all 9-coordinate, distinct, normalized
        for p in &t.points {
            assert_eq!(p.coords.len(), 9);
        }
        // any 8 distinct points have rank 8
        let f7 = e.field;
        let rows: Vec<Vec<Fe>> = t.points[..8].iter().map(|p| p.coords.clone()).collect();
        assert_eq!(MatrixGF::from_rows(&rows).rank(&f7), 8);
    }

    #[test]
    fn lift_requires_nine_points() {
        let f7 = f(7);
        // a = 0, b = 4 has n = 3
        let e = Curve::weierstrass(f7, f7.from_int(0), f7.from_int(4)).unwrap();
        assert_eq!(e.n(), 3);
        assert_eq!(lift_curve(&e).unwrap_err(), Error::TooFewPoints(3));
    }

    #[test]
    fn lift_injective_small_q() {
        for q in [7u64, 11, 13] {
            let fq = f(q);
            let e = Curve::weierstrass(fq, fq.from_int(0), fq.from_int(1)).unwrap();
            let pg = PgSpace::new(fq, 2);
            let mut seen = std::collections::HashSet::new();
            for p in pg.iter() {
                assert!(seen.insert(lift_point(&e, &p).coords), "collision at {p:?}");
            }
        }
    }

    #[test]
    fn cubic_to_hyperplane_examples() {
        let e = curve_q7();
        let f7 = e.field;
        // XYZ -> X4 = 0
        let mut xyz = [f7.zero(); 10];
        xyz[4] = f7.one();
        let h = cubic_to_hyperplane(&e, &CubicForm { coeffs: xyz });
        let mut expect = vec![f7.zero(); 10];
        expect[4] = f7.one();
        assert_eq!(h.coords, expect);
        // YZ(aX + bY + cZ) -> a X4 + b X7 + c X8
        let (a, b, c) = (f7.from_int(2), f7.from_int(3), f7.from_int(5));
        let yz_line = cubic_from_lines(
            &f7,
            &[f7.zero(), f7.one(), f7.zero()],
            &[f7.zero(), f7.zero(), f7.one()],
            &[a, b, c],
        );
        let h = cubic_to_hyperplane(&e, &yz_line);
        let mut expect = vec![f7.zero(); 10];
        expect[4] = a;
        expect[7] = b;
        expect[8] = c;
        let expect = normalize_coords(&f7, &expect).unwrap();
        assert_eq!(h.coords, expect);
        // XY(aX + bY + cZ) -> a X1 + b X3 + c X4
        let xy_line = cubic_from_lines(
            &f7,
            &[f7.one(), f7.zero(), f7.zero()],
            &[f7.zero(), f7.one(), f7.zero()],
            &[a, b, c],
        );
        let h = cubic_to_hyperplane(&e, &xy_line);
        let mut expect = vec![f7.zero(); 10];
        expect[1] = a;
        expect[3] = b;
        expect[4] = c;
        let expect = normalize_coords(&f7, &expect).unwrap();
        assert_eq!(h.coords, expect);
    }

    #[test]
    fn hyperplane_cubic_round_trip() {
        let e = curve_q7();
        let f7 = e.field;
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..100 {
            let coeffs: [Fe; 10] = std::array::from_fn(|_| f7.from_int(rng.gen_range(0..7)));
            if coeffs.iter().all(|x| f7.is_zero(*x)) {
                continue;
            }
            let g = CubicForm { coeffs };
            if g.is_proportional_to(&f7, &e.defining) {
                continue;
            }
            let h = cubic_to_hyperplane(&e, &g);
            let back = hyperplane_to_cubic(&e, &h).unwrap();
            assert!(back.is_proportional_to(&f7, &g));
        }
        // X9 = 0 -> cubic Z^3
        let mut h = vec![f7.zero(); 10];
        h[9] = f7.one();
        let g = hyperplane_to_cubic(&e, &DualVector { coords: h }).unwrap();
        let mut expect = [f7.zero(); 10];
        expect[9] = f7.one();
        assert_eq!(g.coeffs, expect);
        // Sigma itself is rejected
        let mut sigma = vec![f7.zero(); 10];
        sigma[0] = f7.one();
        assert_eq!(
            hyperplane_to_cubic(&e, &DualVector { coords: sigma }).unwrap_err(),
            Error::SigmaHyperplane
        );
    }

    #[test]
    fn incidence_transport_exhaustive_q7() {
        let e = curve_q7();
        let f7 = e.field;
        let pg = PgSpace::new(f7, 2);
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..50 {
            let coeffs: [Fe; 10] = std::array::from_fn(|_| f7.from_int(rng.gen_range(0..7)));
            if coeffs.iter().all(|x| f7.is_zero(*x)) {
                continue;
            }
            let g = CubicForm { coeffs };
            let h = cubic_to_hyperplane(&e, &g);
            for p in pg.iter() {
                let lifted = lift_point(&e, &p);
                let on_cubic = g.vanishes_at(&f7, &p);
                let on_hyperplane = f7.is_zero(f7.dot(&h.coords, &lifted.coords));
                assert_eq!(on_cubic, on_hyperplane);
            }
        }
    }

    #[test]
    fn hyperplane_sections_match_plane_intersections() {
        let e = curve_q7();
        let f7 = e.field;
        let t = lift_curve(&e).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for _ in 0..200 {
            let coeffs: [Fe; 10] = std::array::from_fn(|_| f7.from_int(rng.gen_range(0..7)));
            if coeffs.iter().all(|x| f7.is_zero(*x)) {
                continue;
            }
            let g = CubicForm { coeffs };
            if g.is_proportional_to(&f7, &e.defining) {
                continue;
            }
            let h10 = cubic_to_hyperplane(&e, &g);
            let Ok(h9) = restrict_to_sigma(&f7, &h10) else {
                continue;
            };
            let plane_count = e.intersect_with_cubic(&g).unwrap().len();
            assert_eq!(t.secant_count(&h9), plane_count);
            assert!(plane_count <= 9);
        }
    }

    #[test]
    fn yz_swap_examples() {
        let f121 = f(121);
        let e = Curve::hesse(f121, f121.from_int(6)).unwrap();
        let t = lift_curve(&e).unwrap();
        // e6 (the Y^3 unit point of Sigma) -> e9 (the Z^3 unit point)
        let mut e6 = vec![f121.zero(); 9];
        e6[5] = f121.one(); // X6 is index 5 within X1..X9
        let swapped = yz_swap9(&e6);
        let mut e9 = vec![f121.zero(); 9];
        e9[8] = f121.one();
        assert_eq!(swapped, e9);
        // involution
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let v: Vec<Fe> = (0..9).map(|_| f121.decode(rng.gen_range(0..f121.q())).unwrap()).collect();
        assert_eq!(yz_swap9(&yz_swap9(&v)), v);
        // the Hesse curve is Y-Z symmetric, so the swap permutes the track onto itself
        let image: std::collections::HashSet<ProjPoint> =
            t.points.iter().map(|p| yz_swap_point(&f121, p)).collect();
        let original: std::collections::HashSet<ProjPoint> = t.points.iter().cloned().collect();
        assert_eq!(image, original);
    }

    #[test]
    fn track_export_is_generator_matrix() {
        let e = curve_q7();
        let f7 = e.field;
        let t = lift_curve(&e).unwrap();
        let g = t.generator_matrix();
        assert_eq!((g.rows, g.cols), (9, 12));
        let text = crate::geom::matrix_to_text(&f7, &g);
        let (f2, g2) = crate::geom::matrix_from_text(&text).unwrap();
        assert_eq!(f2, f7);
        assert_eq!(g2, g);
    }

    #[test]
    fn bezout_transport_sampled() {
        let f121 = f(121);
        let e = Curve::hesse(f121, f121.from_int(6)).unwrap();
        let t = lift_curve(&e).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let coords: Vec<Fe> =
                (0..9).map(|_| f121.decode(rng.gen_range(0..f121.q())).unwrap()).collect();
            if coords.iter().all(|&x| f121.is_zero(x)) {
                continue;
            }
            let h = DualVector { coords: normalize_coords(&f121, &coords).unwrap() };
            assert!(t.secant_count(&h) <= 9);
        }
        let _ = incident(&f121, &DualVector { coords: t.points[0].coords.clone() }, &t.points[0]);
    }
}
