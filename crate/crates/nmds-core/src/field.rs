//! Exact arithmetic in GF(p^h) for odd primes p >= 5 and h in {1, 2}.
//!
//! Elements are kept in canonical polynomial form `c0 + c1*T` with
//! `0 <= ci < p`; for h = 2 the modulus is `T^2 - nu` with `nu` the least
//! quadratic non-residue mod p, so reduction and inversion stay closed-form.
//! The canonical integer encoding of an element is `c0 + c1*p`.

use crate::error::{Error, Result};

/// Default cap on the field order q = p^h.
pub const DEFAULT_Q_CAP: u64 = 1 << 16;

/// A finite field GF(p^h). Cheap to copy; all element operations go through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    p: u32,
    h: u8,
    q: u32,
    /// nu for the h = 2 modulus T^2 - nu; 0 when h = 1.
    nonresidue: u32,
}

/// A field element in canonical form. Meaningful only relative to the Field
/// that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe {
    pub c0: u16,
    pub c1: u16,
}

pub const FE_ZERO: Fe = Fe { c0: 0, c1: 0 };
pub const FE_ONE: Fe = Fe { c0: 1, c1: 0 };

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn least_nonresidue(p: u32) -> u32 {
    // Euler's criterion; p is an odd prime here.
    let is_square = |x: u64| pow_mod(x, (p as u64 - 1) / 2, p as u64) == 1;
    (2..p as u64).find(|&x| !is_square(x)).expect("odd prime has a non-residue") as u32
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl Field {
    /// Validate and build GF(p^h) with the default order cap.
    pub fn new(p: u32, h: u32) -> Result<Field> {
        Field::with_cap(p, h, DEFAULT_Q_CAP)
    }

    pub fn with_cap(p: u32, h: u32, cap: u64) -> Result<Field> {
        if p == 2 || p == 3 {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        if h != 1 && h != 2 {
            return Err(Error::UnsupportedDegree(h));
        }
        let q = (p as u64).pow(h);
        if q > cap {
            return Err(Error::FieldTooLarge { q, cap });
        }
        let nonresidue = if h == 2 { least_nonresidue(p) } else { 0 };
        Ok(Field { p, h: h as u8, q: q as u32, nonresidue })
    }

    /// Reconstruct the field from its order: q prime gives h = 1, q = p^2 gives h = 2.
    pub fn from_order(q: u64) -> Result<Field> {
        if q <= u32::MAX as u64 && is_prime(q as u32) {
            return Field::new(q as u32, 1);
        }
        let r = (q as f64).sqrt().round() as u64;
        for p in [r.saturating_sub(1), r, r + 1] {
            if p >= 2 && p * p == q && p <= u32::MAX as u64 && is_prime(p as u32) {
                return Field::new(p as u32, 2);
            }
        }
        Err(Error::BadFieldOrder(q))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h as u32
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus as h+1 base-field coefficients, constant term first.
    /// h = 1: [0, 1] (the identity T); h = 2: [p - nu, 0, 1] (T^2 - nu).
    pub fn modulus_coeffs(&self) -> Vec<u32> {
        if self.h == 1 {
            vec![0, 1]
        } else {
            vec![self.p - self.nonresidue, 0, 1]
        }
    }

    /// The nu of the h = 2 modulus T^2 - nu.
    pub fn nonresidue(&self) -> u32 {
        self.nonresidue
    }

    pub fn zero(&self) -> Fe {
        FE_ZERO
    }

    pub fn one(&self) -> Fe {
        FE_ONE
    }

    pub fn is_zero(&self, x: Fe) -> bool {
        x.c0 == 0 && x.c1 == 0
    }

    /// Embed an integer residue into the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.p as i64;
        Fe { c0: n.rem_euclid(p) as u16, c1: 0 }
    }

    /// Canonical integer encoding c0 + c1*p.
    pub fn encode(&self, x: Fe) -> u32 {
        x.c0 as u32 + x.c1 as u32 * self.p
    }

    pub fn decode(&self, e: u32) -> Result<Fe> {
        if e >= self.q {
            return Err(Error::Parse(format!("element encoding {e} out of range for q = {}", self.q)));
        }
        Ok(Fe { c0: (e % self.p) as u16, c1: (e / self.p) as u16 })
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p;
        Fe {
            c0: ((x.c0 as u32 + y.c0 as u32) % p) as u16,
            c1: ((x.c1 as u32 + y.c1 as u32) % p) as u16,
        }
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p;
        Fe {
            c0: ((x.c0 as u32 + p - y.c0 as u32) % p) as u16,
            c1: ((x.c1 as u32 + p - y.c1 as u32) % p) as u16,
        }
    }

    pub fn neg(&self, x: Fe) -> Fe {
        self.sub(FE_ZERO, x)
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p as u64;
        if self.h == 1 {
            Fe { c0: (x.c0 as u64 * y.c0 as u64 % p) as u16, c1: 0 }
        } else {
            // (a0 + a1 T)(b0 + b1 T) = a0 b0 + nu a1 b1 + (a0 b1 + a1 b0) T
            let (a0, a1, b0, b1) = (x.c0 as u64, x.c1 as u64, y.c0 as u64, y.c1 as u64);
            let nu = self.nonresidue as u64;
            Fe {
                c0: ((a0 * b0 + nu * (a1 * b1 % p)) % p) as u16,
                c1: ((a0 * b1 + a1 * b0) % p) as u16,
            }
        }
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as u64;
        if self.h == 1 {
            Ok(Fe { c0: pow_mod(x.c0 as u64, p - 2, p) as u16, c1: 0 })
        } else {
            // 1/(a0 + a1 T) = (a0 - a1 T) / (a0^2 - nu a1^2); the norm is nonzero
            // because T^2 - nu is irreducible.
            let (a0, a1) = (x.c0 as u64, x.c1 as u64);
            let nu = self.nonresidue as u64;
            let norm = (a0 * a0 % p + p - nu * (a1 * a1 % p) % p) % p;
            let ni = pow_mod(norm, p - 2, p);
            Ok(Fe {
                c0: (a0 * ni % p) as u16,
                c1: ((p - a1) * ni % p) as u16,
            })
        }
    }

    pub fn div(&self, x: Fe, y: Fe) -> Result<Fe> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Fe, mut e: u64) -> Fe {
        let mut base = x;
        let mut acc = FE_ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Deterministic square root: the root with the smaller canonical encoding,
    /// found by scanning elements in encoding order. None if x is a non-square.
    pub fn sqrt(&self, x: Fe) -> Option<Fe> {
        for e in 0..self.q {
            let r = self.decode(e).expect("in range");
            if self.mul(r, r) == x {
                return Some(r);
            }
        }
        None
    }

    /// {1} when q = 2 (mod 3), {1, w, w^2} when q = 1 (mod 3), in encoding order.
    pub fn cube_roots_of_unity(&self) -> Vec<Fe> {
        self.elements()
            .filter(|&x| self.mul(self.mul(x, x), x) == FE_ONE)
            .collect()
    }

    /// All q elements exactly once, in canonical encoding order (so 0 first, 1 second).
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(move |e| self.decode(e).expect("in range"))
    }

    /// Dot product of two equal-length coordinate slices.
    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = FE_ZERO;
        for (x, y) in a.iter().zip(b) {
            acc = self.add(acc, self.mul(*x, *y));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn make_field_validates() {
        assert!(Field::new(7, 1).is_ok());
        assert_eq!(Field::new(9, 1).unwrap_err(), Error::CompositeP(9));
        assert_eq!(Field::new(2, 1).unwrap_err(), Error::UnsupportedCharacteristic(2));
        assert_eq!(Field::new(3, 2).unwrap_err(), Error::UnsupportedCharacteristic(3));
        assert_eq!(Field::new(7, 3).unwrap_err(), Error::UnsupportedDegree(3));
        assert!(matches!(Field::new(331, 2).unwrap_err(), Error::FieldTooLarge { .. }));
    }

    #[test]
    fn gf121_modulus_is_t2_minus_2() {
        // squares mod 11 are {1,3,4,5,9}; 2 is the least non-residue
        let f = Field::new(11, 2).unwrap();
        assert_eq!(f.nonresidue(), 2);
        assert_eq!(f.modulus_coeffs(), vec![9, 0, 1]);
        assert_eq!(f.q(), 121);
    }

    #[test]
    fn from_order_round_trips() {
        for q in [7u64, 11, 13, 121, 157, 169, 179] {
            let f = Field::from_order(q).unwrap();
            assert_eq!(f.q() as u64, q);
        }
        assert!(Field::from_order(12).is_err());
        assert!(Field::from_order(8).is_err()); // 2^3
        assert!(Field::from_order(9).is_err()); // characteristic 3
    }

    #[test]
    fn gf7_arithmetic() {
        let f = Field::new(7, 1).unwrap();
        let three = f.from_int(3);
        let five = f.from_int(5);
        assert_eq!(f.mul(three, five), f.one()); // 15 = 1 mod 7
        assert_eq!(f.inv(three).unwrap(), five);
        for x in f.elements() {
            assert_eq!(f.add(x, f.zero()), x);
        }
        assert_eq!(f.inv(f.zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn gf121_t_squared_reduces() {
        let f = Field::new(11, 2).unwrap();
        let t = Fe { c0: 0, c1: 1 };
        // T^2 = nu = 2
        assert_eq!(f.mul(t, t), f.from_int(2));
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = f.decode(rng.gen_range(1..f.q())).unwrap();
            assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
    }

    #[test]
    fn sqrt_examples() {
        let f11 = Field::new(11, 1).unwrap();
        assert_eq!(f11.sqrt(f11.from_int(3)), Some(f11.from_int(5))); // 5^2 = 3, root 6 encodes larger
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.sqrt(f7.from_int(3)), None); // squares mod 7 are {0,1,2,4}
        assert_eq!(f7.sqrt(f7.zero()), Some(f7.zero()));
    }

    #[test]
    fn sqrt_counts_and_squares() {
        for (p, h) in [(7u32, 1u32), (11, 1), (13, 1), (11, 2)] {
            let f = Field::new(p, h).unwrap();
            let mut non_squares = 0u32;
            for x in f.elements() {
                match f.sqrt(x) {
                    Some(r) => assert_eq!(f.mul(r, r), x),
                    None => non_squares += 1,
                }
            }
            assert_eq!(non_squares, (f.q() - 1) / 2);
        }
    }

    #[test]
    fn cube_roots_of_unity_examples() {
        let f7 = Field::new(7, 1).unwrap();
        let roots: Vec<u32> = f7.cube_roots_of_unity().iter().map(|&x| f7.encode(x)).collect();
        assert_eq!(roots, vec![1, 2, 4]); // 2^2 + 2 + 1 = 7 = 0

        let f11 = Field::new(11, 1).unwrap();
        assert_eq!(f11.cube_roots_of_unity(), vec![f11.one()]); // 11 = 2 mod 3

        let f121 = Field::new(11, 2).unwrap();
        let roots = f121.cube_roots_of_unity();
        assert_eq!(roots.len(), 3); // 121 = 1 mod 3
        for w in roots {
            assert_eq!(f121.pow(w, 3), f121.one());
        }
    }

    #[test]
    fn enumeration_order() {
        let f = Field::new(11, 2).unwrap();
        let els: Vec<Fe> = f.elements().collect();
        assert_eq!(els.len(), 121);
        assert_eq!(els[0], f.zero());
        assert_eq!(els[1], f.one());
        for (e, x) in els.iter().enumerate() {
            assert_eq!(f.encode(*x) as usize, e);
        }
    }

    #[test]
    fn fermat_for_all_fields_in_scope() {
        for q in [7u64, 11, 13, 121, 157, 169, 179] {
            let f = Field::from_order(q).unwrap();
            for x in f.elements().skip(1) {
                assert_eq!(f.pow(x, (f.q() - 1) as u64), f.one());
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_and_sampled_large() {
        for q in [7u64, 11, 13] {
            let f = Field::from_order(q).unwrap();
            let els: Vec<Fe> = f.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
        for q in [121u64, 179] {
            let f = Field::from_order(q).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(42);
            for _ in 0..10_000 {
                let a = f.decode(rng.gen_range(0..f.q())).unwrap();
                let b = f.decode(rng.gen_range(0..f.q())).unwrap();
                let c = f.decode(rng.gen_range(0..f.q())).unwrap();
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }
}
