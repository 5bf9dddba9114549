//! Completeness for q >= 121 without scanning PG(8,q).
//!
//! After triangle normalization, any special point Q = (0, q1, ..., q9) must
//! satisfy [q1,q3,q4], [q4,q7,q8] on the curve, q4 != 0, and one of four
//! zero-patterns in (q1, q3, q7, q8). Normalizing q4 = 1 leaves at most
//! 9q candidate classes per pattern, keyed by (q1, q3, q6, q7, q8) with
//! (q2, q5, q9) free: the killer hyperplane below has zero coefficients at
//! X2, X5, X9, so one witness eliminates a whole class.
//!
//! Killer cubic: Y (Y - m1 X + a m1 Z)(Y - m2 X + a m2 Z) = 0, three distinct
//! trisecant lines concurrent at (a : 0 : 1) off the curve, which meets the
//! curve in 9 distinct rational points and corresponds to the hyperplane
//!   m1 m2 X1 - (m1+m2) X3 - 2a m1 m2 X4 + X6 + a(m1+m2) X7 + a^2 m1 m2 X8 = 0.
//! Through Q with q8 = 0 this is linear in (s, t) = (m1+m2, m1 m2).
//!
//! Classes with q7 = 0 instead of q8 = 0 are handled through the Y-Z swap:
//! the swap conjugates the whole configuration onto the mirrored curve, where
//! the image of any special point with a q7-pattern is a special point with a
//! q8-pattern. Eliminating every q8-class of the mirrored curve therefore
//! eliminates the q7-classes of the original. For Y-Z symmetric curves the
//! mirror is the curve itself and no extra work is needed.

use std::collections::{HashMap, HashSet};

use crate::complete::Verdict;
use crate::curves::{cubic_from_lines, CubicForm, Curve, Mat3};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::geom::DualVector;
use crate::lift::{
    cubic_to_hyperplane, lift_curve, restrict_to_sigma, yz_swap9, yz_swap_dual, Track,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Which two of (q1, q3, q7, q8) vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroPattern {
    Q1Q7,
    Q1Q8,
    Q3Q7,
    Q3Q8,
}

pub const ALL_PATTERNS: [ZeroPattern; 4] =
    [ZeroPattern::Q1Q7, ZeroPattern::Q1Q8, ZeroPattern::Q3Q7, ZeroPattern::Q3Q8];

impl ZeroPattern {
    pub fn name(&self) -> &'static str {
        match self {
            ZeroPattern::Q1Q7 => "q1,q7=0",
            ZeroPattern::Q1Q8 => "q1,q8=0",
            ZeroPattern::Q3Q7 => "q3,q7=0",
            ZeroPattern::Q3Q8 => "q3,q8=0",
        }
    }

    /// Patterns with q8 = 0 admit the direct killer-cubic search.
    pub fn q8_is_zero(&self) -> bool {
        matches!(self, ZeroPattern::Q1Q8 | ZeroPattern::Q3Q8)
    }
}

/// A candidate special-point class: the coordinates the killer hyperplanes
/// can see, with the projective normalization q4 = 1. Coordinates q2, q5, q9
/// are free parameters of the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateClass {
    pub pattern: ZeroPattern,
    pub q1: Fe,
    pub q3: Fe,
    pub q6: Fe,
    pub q7: Fe,
    pub q8: Fe,
}

impl CandidateClass {
    /// A member of the class as a 9-coordinate Sigma point (X1..X9).
    pub fn representative(&self, field: &Field, q2: Fe, q5: Fe, q9: Fe) -> Vec<Fe> {
        vec![self.q1, q2, self.q3, field.one(), q5, self.q6, self.q7, self.q8, q9]
    }

    fn key(&self, field: &Field) -> ClassKey {
        (
            self.pattern,
            field.encode(self.q1),
            field.encode(self.q3),
            field.encode(self.q6),
            field.encode(self.q7),
            field.encode(self.q8),
        )
    }
}

type ClassKey = (ZeroPattern, u32, u32, u32, u32, u32);

/// A verified killer cubic for one class.
#[derive(Clone, Debug)]
pub struct KillerWitness {
    pub a: Fe,
    pub m1: Fe,
    pub m2: Fe,
    pub cubic: CubicForm,
    /// Hyperplane of PG(9,q) (10 coordinates, lambda0 = 0).
    pub hyperplane: DualVector,
    /// Its restriction to Sigma (9 coordinates).
    pub sigma_dual: DualVector,
}

#[derive(Clone, Debug)]
pub enum ClassStatus {
    /// Direct witness (q8 = 0 classes).
    Eliminated(Box<KillerWitness>),
    /// Covered through the Y-Z swap by eliminating the matching q8 = 0
    /// classes of the mirrored curve.
    EliminatedViaMirror,
    /// Search exhausted; a failure of the criterion, not of the track.
    Unresolved,
}

impl ClassStatus {
    pub fn eliminated(&self) -> bool {
        !matches!(self, ClassStatus::Unresolved)
    }
}

#[derive(Clone, Debug)]
pub struct ClassResolution {
    pub class: CandidateClass,
    pub status: ClassStatus,
}

/// Triangle-normalized curve with its lifted track and, per a in GF(q) with
/// (a:0:1) off the curve, the trisecant slopes through (a:0:1).
pub struct NormalizedContext {
    pub curve: Curve,
    pub track: Track,
    slopes: Vec<Option<Vec<Fe>>>,
    slope_sets: Vec<HashSet<Fe>>,
    pub roots_x0: Vec<Fe>,
    pub roots_z0: Vec<Fe>,
    pub roots_y0_z: Vec<Fe>,
    pub roots_y0_x: Vec<Fe>,
}

impl NormalizedContext {
    pub fn new(curve: Curve) -> Result<NormalizedContext> {
        if curve.triangle_section().is_none() {
            return Err(Error::NotNormalized);
        }
        let field = curve.field;
        let track = lift_curve(&curve)?;
        let roots = |probe: &dyn Fn(Fe) -> bool| -> Vec<Fe> {
            field.elements().filter(|&x| probe(x)).collect()
        };
        let roots_x0 = roots(&|y| curve.contains_xyz(field.zero(), y, field.one()));
        let roots_z0 = roots(&|y| curve.contains_xyz(field.one(), y, field.zero()));
        let roots_y0_z = roots(&|z| curve.contains_xyz(field.one(), field.zero(), z));
        let roots_y0_x = roots(&|x| curve.contains_xyz(x, field.zero(), field.one()));
        for r in [&roots_x0, &roots_z0, &roots_y0_z, &roots_y0_x] {
            debug_assert_eq!(r.len(), 3, "each coordinate line is a trisecant");
            debug_assert!(r.iter().all(|&x| !field.is_zero(x)), "no vertex on the curve");
        }
        // trisecant slopes through (a:0:1): bucket m = y/(x - a z) over curve
        // points with y != 0; points with y = 0 or x = a z lie on no line of
        // the family
        let q = field.q() as usize;
        let mut slopes = Vec::with_capacity(q);
        let mut slope_sets = Vec::with_capacity(q);
        for a_enc in 0..q as u32 {
            let a = field.decode(a_enc).expect("in range");
            if curve.contains_xyz(a, field.zero(), field.one()) {
                slopes.push(None);
                slope_sets.push(HashSet::new());
                continue;
            }
            let mut buckets: HashMap<Fe, usize> = HashMap::new();
            for p in curve.rational_points() {
                let (x, y, z) = (p.coords[0], p.coords[1], p.coords[2]);
                if field.is_zero(y) {
                    continue;
                }
                let d = field.sub(x, field.mul(a, z));
                if field.is_zero(d) {
                    continue;
                }
                let m = field.div(y, d).expect("d nonzero");
                *buckets.entry(m).or_insert(0) += 1;
            }
            let mut ms: Vec<Fe> =
                buckets.into_iter().filter(|&(_, c)| c == 3).map(|(m, _)| m).collect();
            ms.sort_by_key(|&m| field.encode(m));
            slope_sets.push(ms.iter().copied().collect());
            slopes.push(Some(ms));
        }
        Ok(NormalizedContext {
            curve,
            track,
            slopes,
            slope_sets,
            roots_x0,
            roots_z0,
            roots_y0_z,
            roots_y0_x,
        })
    }

    pub fn field(&self) -> Field {
        self.curve.field
    }
}

/// Enumerate all candidate special-point classes of a triangle-normalized
/// curve, in pattern order then by root and q6 encodings. At most 9q classes
/// per pattern: 3 choices from each cubic root constraint and q values of q6.
pub fn special_candidates(curve: &Curve) -> Result<Vec<CandidateClass>> {
    if curve.triangle_section().is_none() {
        return Err(Error::NotNormalized);
    }
    let field = curve.field;
    let zero = field.zero();
    let one = field.one();
    let collect = |probe: &dyn Fn(Fe) -> bool| -> Vec<Fe> {
        field.elements().filter(|&x| probe(x)).collect()
    };
    let roots_x0 = collect(&|y| curve.contains_xyz(zero, y, one));
    let roots_z0 = collect(&|y| curve.contains_xyz(one, y, zero));
    let roots_y0_z = collect(&|z| curve.contains_xyz(one, zero, z));
    let roots_y0_x = collect(&|x| curve.contains_xyz(x, zero, one));
    let mut out = Vec::new();
    for pattern in ALL_PATTERNS {
        // (q1 or q3) comes from [q1,q3,1] on the curve, (q7 or q8) from
        // [1,q7,q8] on the curve; the other two coordinates of each pair are 0
        let (firsts, seconds): (&[Fe], &[Fe]) = match pattern {
            ZeroPattern::Q1Q7 => (&roots_x0, &roots_y0_z),
            ZeroPattern::Q1Q8 => (&roots_x0, &roots_z0),
            ZeroPattern::Q3Q7 => (&roots_y0_x, &roots_y0_z),
            ZeroPattern::Q3Q8 => (&roots_y0_x, &roots_z0),
        };
        let before = out.len();
        for &r1 in firsts {
            for &r2 in seconds {
                for q6 in field.elements() {
                    let (q1, q3) = match pattern {
                        ZeroPattern::Q1Q7 | ZeroPattern::Q1Q8 => (zero, r1),
                        ZeroPattern::Q3Q7 | ZeroPattern::Q3Q8 => (r1, zero),
                    };
                    let (q7, q8) = match pattern {
                        ZeroPattern::Q1Q7 | ZeroPattern::Q3Q7 => (zero, r2),
                        ZeroPattern::Q1Q8 | ZeroPattern::Q3Q8 => (r2, zero),
                    };
                    out.push(CandidateClass { pattern, q1, q3, q6, q7, q8 });
                }
            }
        }
        assert!(out.len() - before <= 9 * field.q() as usize);
    }
    Ok(out)
}

/// Direct killer-cubic search for a class with q8 = 0. Containment of the
/// class in the hyperplane reads t(q1 - 2a) + s(a q7 - q3) + q6 = 0 with
/// s = m1 + m2, t = m1 m2; for each admissible a and each trisecant slope m1
/// the partner slope is determined, so the search is linear in |slopes|.
pub fn killer_cubic_direct(ctx: &NormalizedContext, class: &CandidateClass) -> ClassStatus {
    assert!(ctx.field().is_zero(class.q8), "direct search requires q8 = 0");
    let field = ctx.field();
    let c_coef = class.q6;
    for a_enc in 0..field.q() {
        let a = field.decode(a_enc).expect("in range");
        let Some(ms) = &ctx.slopes[a_enc as usize] else {
            continue; // (a:0:1) lies on the curve
        };
        let a_coef = field.sub(class.q1, field.add(a, a)); // q1 - 2a
        let b_coef = field.sub(field.mul(a, class.q7), class.q3); // a q7 - q3
        let set = &ctx.slope_sets[a_enc as usize];
        for &m1 in ms {
            let denom = field.add(field.mul(a_coef, m1), b_coef);
            if field.is_zero(denom) {
                continue;
            }
            let num = field.add(field.mul(b_coef, m1), c_coef);
            let m2 = field.div(field.neg(num), denom).expect("denom nonzero");
            if field.is_zero(m2) || m2 == m1 || !set.contains(&m2) {
                continue;
            }
            let (m1, m2) = if field.encode(m1) <= field.encode(m2) { (m1, m2) } else { (m2, m1) };
            if let Some(w) = build_and_verify_witness(ctx, class, a, m1, m2) {
                return ClassStatus::Eliminated(Box::new(w));
            }
        }
    }
    ClassStatus::Unresolved
}

/// Assemble the cubic, transport it to a hyperplane, and verify every claim:
/// the closed-form coefficients, the 9 distinct intersection points, the
/// exactly-9 section of the track, and containment of the class.
fn build_and_verify_witness(
    ctx: &NormalizedContext,
    class: &CandidateClass,
    a: Fe,
    m1: Fe,
    m2: Fe,
) -> Option<KillerWitness> {
    let field = ctx.field();
    let one = field.one();
    let l_y = [field.zero(), one, field.zero()];
    let l1 = [field.neg(m1), one, field.mul(a, m1)];
    let l2 = [field.neg(m2), one, field.mul(a, m2)];
    let cubic = cubic_from_lines(&field, &l_y, &l1, &l2);
    let hyperplane = cubic_to_hyperplane(&ctx.curve, &cubic);
    // closed form: (0; t, 0, -s, -2at, 0, 1, as, a^2 t, 0) with s = m1+m2, t = m1 m2
    let s = field.add(m1, m2);
    let t = field.mul(m1, m2);
    let expected = {
        let mut l = vec![field.zero(); 10];
        l[1] = t;
        l[3] = field.neg(s);
        l[4] = field.neg(field.mul(field.add(a, a), t));
        l[6] = one;
        l[7] = field.mul(a, s);
        l[8] = field.mul(field.mul(a, a), t);
        crate::geom::normalize_coords(&field, &l).expect("nonzero")
    };
    if hyperplane.coords != expected {
        return None;
    }
    let sigma_dual = restrict_to_sigma(&field, &hyperplane).ok()?;
    // blind to the free coordinates X2, X5, X9
    debug_assert!(
        field.is_zero(sigma_dual.coords[1])
            && field.is_zero(sigma_dual.coords[4])
            && field.is_zero(sigma_dual.coords[8])
    );
    match ctx.curve.intersect_with_cubic(&cubic) {
        Ok(pts) if pts.len() == 9 => {}
        _ => return None,
    }
    if ctx.track.secant_count(&sigma_dual) != 9 {
        return None;
    }
    let rep = class.representative(&field, field.zero(), field.zero(), field.zero());
    if !field.is_zero(field.dot(&sigma_dual.coords, &rep)) {
        return None;
    }
    Some(KillerWitness { a, m1, m2, cubic, hyperplane, sigma_dual })
}

/// Summary of a large-q completeness decision.
#[derive(Clone, Debug)]
pub struct LargeQReport {
    pub verdict: Verdict,
    pub q: u32,
    pub n: usize,
    pub normalization: Mat3,
    pub normalization_identity: bool,
    /// The normalized curve equals its own Y-Z mirror.
    pub symmetric: bool,
    pub resolutions: Vec<ClassResolution>,
    /// q8 = 0 classes of the mirrored curve (empty when symmetric: the
    /// curve's own q8-classes already cover the swap).
    pub mirror_resolutions: Vec<ClassResolution>,
    pub classes_total: usize,
    pub eliminated_direct: usize,
    pub eliminated_via_mirror: usize,
    pub unresolved: usize,
    /// Seeded class representatives whose covering hyperplane was re-verified.
    pub representative_checks: u64,
    pub seed: u64,
}

/// Decide completeness for q >= 121 by eliminating every candidate class.
/// Complete iff all classes die; unresolved classes yield Unknown, never
/// "incomplete": the killer-cubic family is sufficient, not necessary.
pub fn large_q_verdict(curve: &Curve, seed: u64) -> Result<LargeQReport> {
    let field = curve.field;
    let q = field.q();
    if q < 121 {
        return Err(Error::HypothesisViolated(format!("q = {q} < 121")));
    }
    debug_assert!(q % 3 != 0, "characteristic 3 is rejected at field construction");
    let j = curve.j_invariant()?;
    if field.is_zero(j) {
        return Err(Error::HypothesisViolated("j = 0".into()));
    }
    let tn = curve.triangle_normalize()?;
    let normalization_identity = tn.is_identity(&field);
    let ctx = NormalizedContext::new(tn.curve.clone())?;
    assert_eq!(ctx.curve.n(), curve.n(), "projectivities preserve the point count");

    let classes = special_candidates(&ctx.curve)?;
    let mirror_form = ctx.curve.defining.yz_swapped();
    let symmetric = mirror_form.is_proportional_to(&field, &ctx.curve.defining);

    // direct eliminations for the curve's own q8 = 0 classes
    let mut own_q8: HashMap<ClassKey, ClassStatus> = HashMap::new();
    for class in classes.iter().filter(|c| c.pattern.q8_is_zero()) {
        own_q8.insert(class.key(&field), killer_cubic_direct(&ctx, class));
    }

    // the mirrored curve's q8 = 0 classes cover the q7 = 0 patterns
    let swap: Mat3 = [
        [field.one(), field.zero(), field.zero()],
        [field.zero(), field.zero(), field.one()],
        [field.zero(), field.one(), field.zero()],
    ];
    let (mirror_ctx, mirror_resolutions) = if symmetric {
        (None, Vec::new())
    } else {
        let mirror_curve = Curve::transformed(&ctx.curve, &swap)?;
        debug_assert!(mirror_curve.defining.is_proportional_to(&field, &mirror_form));
        let mctx = NormalizedContext::new(mirror_curve)?;
        let mclasses = special_candidates(&mctx.curve)?;
        let res: Vec<ClassResolution> = mclasses
            .into_iter()
            .filter(|c| c.pattern.q8_is_zero())
            .map(|c| {
                let status = killer_cubic_direct(&mctx, &c);
                ClassResolution { class: c, status }
            })
            .collect();
        (Some(mctx), res)
    };

    // index mirror q8-class statuses by their q7 coordinate
    let mirror_by_q7: HashMap<u32, Vec<&ClassResolution>> = {
        let mut m: HashMap<u32, Vec<&ClassResolution>> = HashMap::new();
        for r in &mirror_resolutions {
            m.entry(field.encode(r.class.q7)).or_default().push(r);
        }
        m
    };
    let own_q8_by_q7: HashMap<u32, Vec<ClassKey>> = {
        let mut m: HashMap<u32, Vec<ClassKey>> = HashMap::new();
        for class in classes.iter().filter(|c| c.pattern.q8_is_zero()) {
            m.entry(field.encode(class.q7)).or_default().push(class.key(&field));
        }
        m
    };

    let mut resolutions = Vec::with_capacity(classes.len());
    for class in &classes {
        let status = if class.pattern.q8_is_zero() {
            own_q8.get(&class.key(&field)).expect("resolved above").clone()
        } else {
            // q7 = 0 class: its swap image, when special, is a q8 = 0
            // candidate of the mirror with q7 equal to this class's q8
            let delta = field.encode(class.q8);
            let covered = if symmetric {
                own_q8_by_q7.get(&delta).is_some_and(|keys| {
                    !keys.is_empty()
                        && keys.iter().all(|k| own_q8.get(k).expect("resolved").eliminated())
                })
            } else {
                mirror_by_q7
                    .get(&delta)
                    .is_some_and(|rs| !rs.is_empty() && rs.iter().all(|r| r.status.eliminated()))
            };
            if covered {
                ClassStatus::EliminatedViaMirror
            } else {
                ClassStatus::Unresolved
            }
        };
        resolutions.push(ClassResolution { class: *class, status });
    }

    // verify seeded representatives: the covering hyperplane must contain
    // every member of the class, whatever the free coordinates
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut representative_checks = 0u64;
    let rand_fe =
        |rng: &mut ChaCha12Rng| -> Fe { field.decode(rng.gen_range(0..q)).expect("in range") };
    for r in &resolutions {
        match &r.status {
            ClassStatus::Eliminated(w) => {
                for _ in 0..3 {
                    let rep = r.class.representative(
                        &field,
                        rand_fe(&mut rng),
                        rand_fe(&mut rng),
                        rand_fe(&mut rng),
                    );
                    if !field.is_zero(field.dot(&w.sigma_dual.coords, &rep)) {
                        return Err(Error::HypothesisViolated(
                            "killer hyperplane misses a class representative".into(),
                        ));
                    }
                    representative_checks += 1;
                }
            }
            ClassStatus::EliminatedViaMirror => {
                // adversarial representatives whose swap image IS a mirror
                // candidate, so the covering witness can be named and checked
                let (m_x0, m_y0x) = if symmetric {
                    (&ctx.roots_x0, &ctx.roots_y0_x)
                } else {
                    let m = mirror_ctx.as_ref().expect("mirror context exists");
                    (&m.roots_x0, &m.roots_y0_x)
                };
                let mut reps = Vec::new();
                // swap image in pattern q1,q8 = 0: q2 = 0, q5 on the mirror
                reps.push((field.zero(), m_x0[0], rand_fe(&mut rng)));
                // swap image in pattern q3,q8 = 0: q5 = 0, q2 on the mirror
                reps.push((m_y0x[0], field.zero(), rand_fe(&mut rng)));
                for (q2, q5, q9) in reps {
                    let rep = r.class.representative(&field, q2, q5, q9);
                    let image = yz_swap9(&rep);
                    // image coordinates: (q1*, ..., q9*) with q4* = 1
                    let pattern = if field.is_zero(image[0]) {
                        ZeroPattern::Q1Q8
                    } else {
                        ZeroPattern::Q3Q8
                    };
                    let key: ClassKey = (
                        pattern,
                        field.encode(image[0]),
                        field.encode(image[2]),
                        field.encode(image[5]),
                        field.encode(image[6]),
                        field.encode(image[7]),
                    );
                    let witness = if symmetric {
                        match own_q8.get(&key) {
                            Some(ClassStatus::Eliminated(w)) => w,
                            _ => {
                                return Err(Error::HypothesisViolated(
                                    "swap image not covered by an eliminated class".into(),
                                ))
                            }
                        }
                    } else {
                        match mirror_resolutions
                            .iter()
                            .find(|mr| mr.class.key(&field) == key)
                            .map(|mr| &mr.status)
                        {
                            Some(ClassStatus::Eliminated(w)) => w,
                            _ => {
                                return Err(Error::HypothesisViolated(
                                    "swap image not covered by an eliminated mirror class".into(),
                                ))
                            }
                        }
                    };
                    // the mirror witness contains the swapped point, and its
                    // swap contains the original representative
                    if !field.is_zero(field.dot(&witness.sigma_dual.coords, &image)) {
                        return Err(Error::HypothesisViolated(
                            "mirror witness misses the swapped representative".into(),
                        ));
                    }
                    let pulled_back = yz_swap_dual(&field, &witness.sigma_dual);
                    if !field.is_zero(field.dot(&pulled_back.coords, &rep)) {
                        return Err(Error::HypothesisViolated(
                            "pulled-back witness misses the representative".into(),
                        ));
                    }
                    representative_checks += 2;
                }
            }
            ClassStatus::Unresolved => {}
        }
    }

    let eliminated_direct =
        resolutions.iter().filter(|r| matches!(r.status, ClassStatus::Eliminated(_))).count();
    let eliminated_via_mirror = resolutions
        .iter()
        .filter(|r| matches!(r.status, ClassStatus::EliminatedViaMirror))
        .count();
    let mirror_unresolved =
        mirror_resolutions.iter().filter(|r| !r.status.eliminated()).count();
    let unresolved = resolutions.len() - eliminated_direct - eliminated_via_mirror;
    let verdict = if unresolved == 0 && mirror_unresolved == 0 {
        Verdict::Complete
    } else {
        Verdict::Unknown
    };
    Ok(LargeQReport {
        verdict,
        q,
        n: curve.n(),
        normalization: tn.matrix,
        normalization_identity,
        symmetric,
        classes_total: resolutions.len(),
        eliminated_direct,
        eliminated_via_mirror,
        unresolved,
        resolutions,
        mirror_resolutions,
        representative_checks,
        seed,
    })
}
