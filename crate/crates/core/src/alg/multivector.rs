//! Graded multivectors over 5-space.
//!
//! A [`Multivector5`] holds one coefficient per basis blade `e_{i1} ∧ … ∧ e_{ik}`
//! (increasing indices, lexicographic order within each grade), for grades
//! 0 through 5 with part sizes (1, 5, 10, 10, 5, 1). Coefficients are any
//! [`Scalar`], so the same algebra runs over plain reals and over jets.
//!
//! Blade-level signs for ∧, ⌞, • and the ambient Hodge star are resolved
//! through tables built once at startup; no sign logic runs per product term.

use std::fmt;

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::scalar::Scalar;

pub const DIM: usize = 5;
/// Coefficients in grade k.
pub const GRADE_SIZES: [usize; 6] = [1, 5, 10, 10, 5, 1];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("interior product requires grade(a) >= grade(b); got {p} < {q}")]
    InteriorGrade { p: usize, q: usize },
    #[error("bullet product is not defined here for grades ({p}, {q}); supported pairs: (2,1), (2,2), (2,3)")]
    UnsupportedBullet { p: usize, q: usize },
    #[error("chart form degrees {k} and {l} exceed the chart dimension when combined")]
    FormDegree { k: usize, l: usize },
}

/// Basis blade represented as a 5-bit mask.
type Mask = u8;

struct BladeTables {
    /// Masks per grade, in lexicographic increasing-tuple order.
    blades: [Vec<Mask>; 6],
    /// Position of a mask within its grade.
    pos: [u8; 32],
    /// wedge_sign[i][j]: sign of e_I ∧ e_J as ±1, or 0 when I ∩ J ≠ ∅.
    wedge_sign: [[i8; 32]; 32],
}

fn popcount(m: Mask) -> usize {
    m.count_ones() as usize
}

/// Parity sign for merging the indices of J past those of I (e_I ∧ e_J).
fn merge_sign(i: Mask, j: Mask) -> i8 {
    if i & j != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    for b in 0..DIM {
        if j & (1 << b) != 0 {
            // indices of I strictly greater than b must hop over e_b
            swaps += (i >> (b + 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

static BLADES: Lazy<BladeTables> = Lazy::new(|| {
    let mut blades: [Vec<Mask>; 6] = Default::default();
    // Lexicographic tuples per grade: recurse over increasing indices.
    fn emit(start: usize, remaining: usize, mask: Mask, out: &mut Vec<Mask>) {
        if remaining == 0 {
            out.push(mask);
            return;
        }
        for i in start..DIM {
            emit(i + 1, remaining - 1, mask | (1 << i), out);
        }
    }
    for (k, bucket) in blades.iter_mut().enumerate() {
        emit(0, k, 0, bucket);
        debug_assert_eq!(bucket.len(), GRADE_SIZES[k]);
    }
    let mut pos = [0u8; 32];
    for bucket in &blades {
        for (p, &m) in bucket.iter().enumerate() {
            pos[m as usize] = p as u8;
        }
    }
    let mut wedge_sign = [[0i8; 32]; 32];
    for i in 0..32u8 {
        for j in 0..32u8 {
            wedge_sign[i as usize][j as usize] = merge_sign(i, j);
        }
    }
    BladeTables {
        blades,
        pos,
        wedge_sign,
    }
});

/// A general element of the exterior algebra Λ(R⁵) with `T` coefficients.
///
/// Empty grade parts are structural zeros; products skip them entirely.
#[derive(Clone)]
pub struct Multivector5<T: Scalar> {
    parts: [Vec<T>; 6],
}

impl<T: Scalar> Default for Multivector5<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> Multivector5<T> {
    pub fn zero() -> Self {
        Multivector5 {
            parts: Default::default(),
        }
    }

    pub fn scalar(value: T) -> Self {
        let mut mv = Self::zero();
        mv.parts[0] = vec![value];
        mv
    }

    pub fn vector(components: [T; 5]) -> Self {
        let mut mv = Self::zero();
        mv.parts[1] = components.into();
        mv
    }

    /// Builds a pure grade-k element from coefficients in blade order.
    pub fn from_grade(k: usize, coeffs: Vec<T>) -> Self {
        assert!(k <= 5 && coeffs.len() == GRADE_SIZES[k]);
        let mut mv = Self::zero();
        mv.parts[k] = coeffs;
        mv
    }

    /// The basis vector e_i (0-based).
    pub fn basis_vector(i: usize) -> Self {
        assert!(i < DIM);
        let mut c: Vec<T> = (0..DIM).map(|_| T::zero()).collect();
        c[i] = T::one();
        Self::from_grade(1, c)
    }

    pub fn is_zero(&self) -> bool {
        self.parts
            .iter()
            .all(|p| p.is_empty() || p.iter().all(T::is_zero))
    }

    pub fn grade_part(&self, k: usize) -> Option<&[T]> {
        if self.parts[k].is_empty() {
            None
        } else {
            Some(&self.parts[k])
        }
    }

    /// Grades with stored coefficients.
    pub fn present_grades(&self) -> impl Iterator<Item = usize> + '_ {
        (0..6).filter(|&k| !self.parts[k].is_empty())
    }

    /// True when every stored part lives in grade `k` (zero counts as pure).
    pub fn is_pure_grade(&self, k: usize) -> bool {
        self.present_grades().all(|g| g == k)
    }

    /// The single present grade, if exactly one part is stored.
    pub fn pure_grade(&self) -> Option<usize> {
        let mut grades = self.present_grades();
        match (grades.next(), grades.next()) {
            (Some(k), None) => Some(k),
            _ => None,
        }
    }

    fn ensure_part(&mut self, k: usize) {
        if self.parts[k].is_empty() {
            self.parts[k] = (0..GRADE_SIZES[k]).map(|_| T::zero()).collect();
        }
    }

    fn accumulate(&mut self, k: usize, pos: usize, term: T) {
        self.ensure_part(k);
        self.parts[k][pos] = self.parts[k][pos].add(&term);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for k in 0..6 {
            if other.parts[k].is_empty() {
                continue;
            }
            out.ensure_part(k);
            for (o, v) in out.parts[k].iter_mut().zip(&other.parts[k]) {
                *o = o.add(v);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|c| c.scale(factor))
    }

    pub fn scale_by(&self, factor: &T) -> Self {
        self.map(|c| c.mul(factor))
    }

    fn map(&self, f: impl Fn(&T) -> T) -> Self {
        let mut out = Self::zero();
        for k in 0..6 {
            if !self.parts[k].is_empty() {
                out.parts[k] = self.parts[k].iter().map(&f).collect();
            }
        }
        out
    }

    /// Exterior product. Bilinear, associative, graded-anticommutative;
    /// grades beyond 5 vanish.
    pub fn wedge(&self, other: &Self) -> Self {
        let t = &*BLADES;
        let mut out = Self::zero();
        for p in self.present_grades() {
            for q in other.present_grades() {
                if p + q > 5 {
                    continue;
                }
                for (ia, ma) in t.blades[p].iter().enumerate() {
                    let a = &self.parts[p][ia];
                    if a.is_zero() {
                        continue;
                    }
                    for (ib, mb) in t.blades[q].iter().enumerate() {
                        let sign = t.wedge_sign[*ma as usize][*mb as usize];
                        if sign == 0 {
                            continue;
                        }
                        let b = &other.parts[q][ib];
                        if b.is_zero() {
                            continue;
                        }
                        let m = ma | mb;
                        let term = a.mul(b).scale(sign as f64);
                        out.accumulate(p + q, t.pos[m as usize] as usize, term);
                    }
                }
            }
        }
        out
    }

    /// Inner product of multivectors: grade parts pair orthonormally, mixed
    /// grades contribute zero.
    pub fn dot(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for k in 0..6 {
            if self.parts[k].is_empty() || other.parts[k].is_empty() {
                continue;
            }
            for (a, b) in self.parts[k].iter().zip(&other.parts[k]) {
                acc = acc.add(&a.mul(b));
            }
        }
        acc
    }

    /// Interior multiplication A ⌞ B, the adjoint of wedging:
    /// ⟨A ⌞ B, C⟩ = ⟨A, B ∧ C⟩.
    pub fn interior(&self, other: &Self) -> Result<Self, AlgebraError> {
        let t = &*BLADES;
        for p in self.present_grades() {
            for q in other.present_grades() {
                if p < q {
                    return Err(AlgebraError::InteriorGrade { p, q });
                }
            }
        }
        let mut out = Self::zero();
        for p in self.present_grades() {
            for q in other.present_grades() {
                for (ib, mb) in t.blades[q].iter().enumerate() {
                    let b = &other.parts[q][ib];
                    if b.is_zero() {
                        continue;
                    }
                    for (ia, ma) in t.blades[p].iter().enumerate() {
                        // e_I ⌞ e_J = sign(J, I\J) e_{I\J} when J ⊆ I
                        if ma & mb != *mb {
                            continue;
                        }
                        let a = &self.parts[p][ia];
                        if a.is_zero() {
                            continue;
                        }
                        let rest = ma & !mb;
                        let sign = t.wedge_sign[*mb as usize][rest as usize];
                        debug_assert!(sign != 0);
                        let term = a.mul(b).scale(sign as f64);
                        out.accumulate(p - q, t.pos[rest as usize] as usize, term);
                    }
                }
            }
        }
        Ok(out)
    }

    /// First-order contraction A • B for the grade pairs in use here:
    /// (2,1) where it coincides with ⌞, (2,2) by the four-term rule
    /// (A1∧A2)•(B1∧B2) = (A2·B2)A1∧B1 − (A2·B1)A1∧B2 − (A1·B2)A2∧B1 + (A1·B1)A2∧B2,
    /// and (2,3) through the distribution rule A•(B∧C) = (A•B)∧C + (−1)^{pq}(A•C)∧B.
    pub fn bullet(&self, other: &Self) -> Result<Self, AlgebraError> {
        let p = self.pure_grade().unwrap_or(0);
        let q = other.pure_grade().unwrap_or(0);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        match (p, q) {
            (2, 1) => self.interior(other),
            (2, 2) => Ok(self.bullet_22(other)),
            (2, 3) => Ok(self.bullet_23(other)),
            _ => Err(AlgebraError::UnsupportedBullet { p, q }),
        }
    }

    fn bullet_22(&self, other: &Self) -> Self {
        let t = &*BLADES;
        let mut out = Self::zero();
        let pa = &self.parts[2];
        let pb = &other.parts[2];
        for (ia, ma) in t.blades[2].iter().enumerate() {
            let a = &pa[ia];
            if a.is_zero() {
                continue;
            }
            let (a1, a2) = split_pair(*ma);
            for (ib, mb) in t.blades[2].iter().enumerate() {
                let b = &pb[ib];
                if b.is_zero() {
                    continue;
                }
                let (b1, b2) = split_pair(*mb);
                let coeff = a.mul(b);
                for (x, y, u, v, sgn) in [
                    (a2, b2, a1, b1, 1.0),
                    (a2, b1, a1, b2, -1.0),
                    (a1, b2, a2, b1, -1.0),
                    (a1, b1, a2, b2, 1.0),
                ] {
                    if x != y {
                        continue; // orthonormal basis: e_x · e_y = δ_xy
                    }
                    let wsign = t.wedge_sign[1usize << u][1usize << v];
                    if wsign == 0 {
                        continue;
                    }
                    let m = (1u8 << u) | (1u8 << v);
                    let term = coeff.scale(sgn * wsign as f64);
                    out.accumulate(2, t.pos[m as usize] as usize, term);
                }
            }
        }
        out
    }

    fn bullet_23(&self, other: &Self) -> Self {
        let t = &*BLADES;
        let mut out = Self::zero();
        for (ib, mb) in t.blades[3].iter().enumerate() {
            let b = &other.parts[3][ib];
            if b.is_zero() {
                continue;
            }
            // Split e_c ∧ e_d ∧ e_f as (e_c ∧ e_d) ∧ e_f (grades p=2, q=1):
            // A • (B∧C) = (A•B)∧C + (A•C)∧B with (−1)^{2·1} = +1.
            let f = (7 - mb.leading_zeros()) as usize; // highest set bit
            let head = mb & !(1 << f);
            let ef = Self::basis_vector(f);
            let ehead = Self::from_grade(2, unit_coeffs::<T>(2, t.pos[head as usize] as usize));
            let a_pure = Self::from_grade(2, self.parts[2].clone());
            let first = a_pure.bullet_22(&ehead).wedge(&ef);
            let second = a_pure
                .interior(&ef)
                .expect("grade 2 >= 1")
                .wedge(&ehead);
            let term = first.add(&second).map(|c| c.mul(b));
            out = out.add(&term);
        }
        out
    }

    /// Ambient Hodge star: ⟨a, b⟩ vol = a ∧ ⋆b, with volume element
    /// e₁∧e₂∧e₃∧e₄∧e₅. An involution on Λ(R⁵) since k(5−k) is always even.
    pub fn hodge(&self) -> Self {
        let t = &*BLADES;
        let mut out = Self::zero();
        for k in self.present_grades() {
            for (i, m) in t.blades[k].iter().enumerate() {
                let c = &self.parts[k][i];
                if c.is_zero() {
                    continue;
                }
                let comp = !m & 0b11111;
                let sign = t.wedge_sign[*m as usize][comp as usize];
                debug_assert!(sign != 0);
                out.accumulate(
                    5 - k,
                    t.pos[comp as usize] as usize,
                    c.scale(sign as f64),
                );
            }
        }
        out
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }
}

fn unit_coeffs<T: Scalar>(k: usize, pos: usize) -> Vec<T> {
    let mut c: Vec<T> = (0..GRADE_SIZES[k]).map(|_| T::zero()).collect();
    c[pos] = T::one();
    c
}

fn split_pair(m: Mask) -> (usize, usize) {
    debug_assert_eq!(popcount(m), 2);
    let lo = m.trailing_zeros() as usize;
    let hi = (7 - m.leading_zeros()) as usize;
    (lo, hi)
}

impl Multivector5<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn from_vector_f64(v: [f64; 5]) -> Self {
        Multivector5::vector(v)
    }
}

impl<T: Scalar> fmt::Debug for Multivector5<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector5{{")?;
        let names = ["1", "e", "e∧e", "e∧e∧e", "e⁴", "vol"];
        for k in self.present_grades() {
            write!(f, " g{}[{}]:", k, names[k])?;
            for c in &self.parts[k] {
                write!(f, " {:.6e}", c.value())?;
            }
        }
        write!(f, " }}")
    }
}

/// Blade masks per grade in storage order (exposed for table-driven tests).
pub fn blade_masks(k: usize) -> &'static [u8] {
    &BLADES.blades[k]
}
