//! Finite fields as towers of quotient extensions over prime fields.
//!
//! A `TowerField` is F_p extended by a chain of monic irreducible moduli,
//! each over the field below it. Towers are never flattened to a single
//! extension of the prime field. Elements are plain coefficient trees; all
//! arithmetic goes through the owning field, which carries the moduli.

use crate::error::{Error, Result};
use crate::numbers::is_prime_u64;
use crate::poly::UniPoly;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::fmt;
use std::sync::Arc;

/// A field element: a residue mod p at the bottom, a fixed-length
/// coefficient vector over the level below everywhere else. The vector
/// length equals the degree of the modulus at that level, so every element
/// has exactly one representation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Elem {
    Base(u64),
    Ext(Vec<Elem>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Base(c) => write!(f, "{c}"),
            Elem::Ext(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug)]
struct FieldData {
    p: u64,
    /// moduli[i] is the monic modulus of extension step i, as coefficients
    /// (ascending degree, length deg + 1) over the field of height i.
    moduli: Vec<Vec<Elem>>,
    order: BigUint,
}

/// A finite field represented as a chain of quotient extensions over F_p.
#[derive(Clone, Debug)]
pub struct TowerField {
    data: Arc<FieldData>,
}

impl PartialEq for TowerField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.p == other.data.p && self.data.moduli == other.data.moduli)
    }
}
impl Eq for TowerField {}

impl TowerField {
    /// The prime field F_p (empty tower).
    pub fn prime_field(p: u64) -> Result<TowerField> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(TowerField {
            data: Arc::new(FieldData {
                p,
                moduli: Vec::new(),
                order: BigUint::from(p),
            }),
        })
    }

    /// Extend the tower by a monic irreducible modulus over `self`.
    /// The adjoined root is the class of the indeterminate.
    pub fn extend(&self, modulus: &UniPoly) -> Result<TowerField> {
        let deg = match modulus.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ReducibleModulus),
        };
        if !self.eq_elem(modulus.coeff(deg), &self.one()) {
            return Err(Error::ReducibleModulus);
        }
        if !crate::poly::is_irreducible(modulus, self)? {
            return Err(Error::ReducibleModulus);
        }
        let mut moduli = self.data.moduli.clone();
        let mut coeffs: Vec<Elem> = Vec::with_capacity(deg + 1);
        for i in 0..=deg {
            coeffs.push(modulus.coeff(i).clone());
        }
        moduli.push(coeffs);
        let order = self.data.order.pow(deg as u32);
        Ok(TowerField {
            data: Arc::new(FieldData {
                p: self.data.p,
                moduli,
                order,
            }),
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.data.p
    }

    pub fn order(&self) -> &BigUint {
        &self.data.order
    }

    /// Number of extension steps above the prime field.
    pub fn height(&self) -> usize {
        self.data.moduli.len()
    }

    /// Degree of the extension step at `level` (1 for the prime field itself).
    fn step_degree(&self, level: usize) -> usize {
        if level == 0 {
            1
        } else {
            self.data.moduli[level - 1].len() - 1
        }
    }

    fn order_at(&self, level: usize) -> BigUint {
        let mut o = BigUint::from(self.data.p);
        for i in 0..level {
            o = o.pow((self.data.moduli[i].len() - 1) as u32);
        }
        o
    }

    /// True if `sub`'s tower is an initial segment of this tower.
    pub fn is_extension_of(&self, sub: &TowerField) -> bool {
        self.data.p == sub.data.p
            && sub.data.moduli.len() <= self.data.moduli.len()
            && self.data.moduli[..sub.data.moduli.len()] == sub.data.moduli[..]
    }

    /// Lift an element of a subfield of height `sub_height` into this field.
    pub fn embed_from(&self, sub_height: usize, e: &Elem) -> Elem {
        let mut cur = e.clone();
        for level in sub_height..self.height() {
            let deg = self.step_degree(level + 1);
            let mut v = Vec::with_capacity(deg);
            v.push(cur);
            for _ in 1..deg {
                v.push(self.zero_at(level));
            }
            cur = Elem::Ext(v);
        }
        cur
    }

    // ---- element constructors ----

    fn zero_at(&self, level: usize) -> Elem {
        if level == 0 {
            Elem::Base(0)
        } else {
            let deg = self.step_degree(level);
            Elem::Ext(vec![self.zero_at(level - 1); deg])
        }
    }

    pub fn zero(&self) -> Elem {
        self.zero_at(self.height())
    }

    pub fn one(&self) -> Elem {
        self.from_u64(1)
    }

    /// The image of the integer `c` in this field.
    pub fn from_u64(&self, c: u64) -> Elem {
        self.embed_from(0, &Elem::Base(c % self.data.p))
    }

    /// The class of the indeterminate adjoined by the top extension step.
    pub fn generator(&self) -> Result<Elem> {
        let h = self.height();
        if h == 0 {
            return Err(Error::FieldMismatch);
        }
        let x = vec![self.zero_at(h - 1), self.one_at(h - 1)];
        let reduced = self.raw_rem(h - 1, &x, &self.data.moduli[h - 1]);
        Ok(self.pad_at(h, reduced))
    }

    fn one_at(&self, level: usize) -> Elem {
        if level == 0 {
            Elem::Base(1)
        } else {
            let deg = self.step_degree(level);
            let mut v = Vec::with_capacity(deg);
            v.push(self.one_at(level - 1));
            for _ in 1..deg {
                v.push(self.zero_at(level - 1));
            }
            Elem::Ext(v)
        }
    }

    /// Turn a trimmed coefficient vector over level-1 into a canonical
    /// element at `level` (pad with zeros up to the step degree).
    fn pad_at(&self, level: usize, mut coeffs: Vec<Elem>) -> Elem {
        let deg = self.step_degree(level);
        debug_assert!(coeffs.len() <= deg);
        while coeffs.len() < deg {
            coeffs.push(self.zero_at(level - 1));
        }
        Elem::Ext(coeffs)
    }

    /// Structural validity of an element with respect to this field.
    pub fn contains(&self, e: &Elem) -> bool {
        self.contains_at(self.height(), e)
    }

    fn contains_at(&self, level: usize, e: &Elem) -> bool {
        match (level, e) {
            (0, Elem::Base(c)) => *c < self.data.p,
            (l, Elem::Ext(v)) if l > 0 => {
                v.len() == self.step_degree(l) && v.iter().all(|c| self.contains_at(l - 1, c))
            }
            _ => false,
        }
    }

    // ---- arithmetic ----

    pub fn is_zero(&self, e: &Elem) -> bool {
        match e {
            Elem::Base(c) => *c == 0,
            Elem::Ext(v) => v.iter().all(|c| self.is_zero(c)),
        }
    }

    pub fn eq_elem(&self, a: &Elem, b: &Elem) -> bool {
        a == b
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_at(self.height(), a, b)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.neg_at(self.height(), a)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul_at(self.height(), a, b)
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::ZeroInversion);
        }
        Ok(self.inv_at(self.height(), a))
    }

    pub fn pow(&self, a: &Elem, exp: &BigUint) -> Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = self.mul(&acc, &base);
            }
            if i + 1 < bits {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn add_at(&self, level: usize, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base((x + y) % self.data.p),
            (Elem::Ext(x), Elem::Ext(y)) => {
                debug_assert_eq!(x.len(), y.len());
                Elem::Ext(
                    x.iter()
                        .zip(y.iter())
                        .map(|(u, v)| self.add_at(level - 1, u, v))
                        .collect(),
                )
            }
            _ => panic!("malformed field element"),
        }
    }

    fn neg_at(&self, level: usize, a: &Elem) -> Elem {
        match a {
            Elem::Base(x) => Elem::Base((self.data.p - x) % self.data.p),
            Elem::Ext(v) => Elem::Ext(v.iter().map(|c| self.neg_at(level - 1, c)).collect()),
        }
    }

    fn mul_at(&self, level: usize, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => {
                Elem::Base(((*x as u128 * *y as u128) % self.data.p as u128) as u64)
            }
            (Elem::Ext(x), Elem::Ext(y)) => {
                let deg = self.step_degree(level);
                // Schoolbook convolution, then reduction by the monic modulus.
                let mut conv = vec![self.zero_at(level - 1); 2 * deg - 1];
                for (i, xi) in x.iter().enumerate() {
                    if self.is_zero(xi) {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if self.is_zero(yj) {
                            continue;
                        }
                        let prod = self.mul_at(level - 1, xi, yj);
                        conv[i + j] = self.add_at(level - 1, &conv[i + j], &prod);
                    }
                }
                let modulus = &self.data.moduli[level - 1];
                for i in (deg..conv.len()).rev() {
                    if self.is_zero(&conv[i]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut conv[i], self.zero_at(level - 1));
                    for (j, mj) in modulus.iter().enumerate().take(deg) {
                        let t = self.mul_at(level - 1, &c, mj);
                        let t = self.neg_at(level - 1, &t);
                        conv[i - deg + j] = self.add_at(level - 1, &conv[i - deg + j], &t);
                    }
                }
                conv.truncate(deg);
                Elem::Ext(conv)
            }
            _ => panic!("malformed field element"),
        }
    }

    fn inv_at(&self, level: usize, a: &Elem) -> Elem {
        match a {
            Elem::Base(x) => {
                // Fermat inverse in F_p.
                let p = self.data.p;
                let mut acc = 1u64;
                let mut base = *x % p;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = ((acc as u128 * base as u128) % p as u128) as u64;
                    }
                    base = ((base as u128 * base as u128) % p as u128) as u64;
                    e >>= 1;
                }
                Elem::Base(acc)
            }
            Elem::Ext(v) => {
                // Extended Euclid between a (as a poly over level-1) and the modulus.
                let sub = level - 1;
                let a_poly = Self::trim(v.clone(), |c| self.is_zero(c));
                let modulus = self.data.moduli[level - 1].clone();
                let (g, u, _) = self.raw_ext_gcd(sub, &a_poly, &modulus);
                // g is a nonzero constant since the modulus is irreducible.
                debug_assert_eq!(g.len(), 1);
                let ginv = self.inv_at(sub, &g[0]);
                let inv = self.raw_scale(sub, &u, &ginv);
                let inv = self.raw_rem(sub, &inv, &modulus);
                self.pad_at(level, inv)
            }
        }
    }

    // ---- raw polynomial helpers over the field of height `level` ----
    // Coefficient vectors ascending, trimmed (no trailing zeros; zero = empty).

    fn trim(mut v: Vec<Elem>, is_zero: impl Fn(&Elem) -> bool) -> Vec<Elem> {
        while v.last().map_or(false, &is_zero) {
            v.pop();
        }
        v
    }

    pub(crate) fn raw_add(&self, level: usize, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_else(|| self.zero_at(level));
            let y = b.get(i).cloned().unwrap_or_else(|| self.zero_at(level));
            out.push(self.add_at(level, &x, &y));
        }
        Self::trim(out, |c| self.is_zero(c))
    }

    pub(crate) fn raw_neg(&self, level: usize, a: &[Elem]) -> Vec<Elem> {
        a.iter().map(|c| self.neg_at(level, c)).collect()
    }

    pub(crate) fn raw_sub(&self, level: usize, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let nb = self.raw_neg(level, b);
        self.raw_add(level, a, &nb)
    }

    pub(crate) fn raw_mul(&self, level: usize, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero_at(level); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.is_zero(y) {
                    continue;
                }
                let t = self.mul_at(level, x, y);
                out[i + j] = self.add_at(level, &out[i + j], &t);
            }
        }
        Self::trim(out, |c| self.is_zero(c))
    }

    pub(crate) fn raw_scale(&self, level: usize, a: &[Elem], c: &Elem) -> Vec<Elem> {
        let out: Vec<Elem> = a.iter().map(|x| self.mul_at(level, x, c)).collect();
        Self::trim(out, |x| self.is_zero(x))
    }

    /// (quotient, remainder) of a by b; b must be nonzero.
    pub(crate) fn raw_divrem(&self, level: usize, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        assert!(!b.is_empty(), "raw_divrem by zero");
        let mut rem: Vec<Elem> = Self::trim(a.to_vec(), |c| self.is_zero(c));
        let db = b.len() - 1;
        let lead_inv = self.inv_at(level, &b[db]);
        let mut quot: Vec<Elem> = Vec::new();
        if rem.len() > db {
            quot = vec![self.zero_at(level); rem.len() - db];
        }
        while rem.len() > db {
            let dr = rem.len() - 1;
            let c = self.mul_at(level, &rem[dr], &lead_inv);
            quot[dr - db] = c.clone();
            for (j, bj) in b.iter().enumerate() {
                let t = self.mul_at(level, &c, bj);
                let t = self.neg_at(level, &t);
                rem[dr - db + j] = self.add_at(level, &rem[dr - db + j], &t);
            }
            rem = Self::trim(rem, |x| self.is_zero(x));
        }
        (Self::trim(quot, |x| self.is_zero(x)), rem)
    }

    pub(crate) fn raw_rem(&self, level: usize, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        self.raw_divrem(level, a, b).1
    }

    /// Extended gcd: returns (g, u, v) with u*a + v*b = g. g is not
    /// normalized to monic here.
    fn raw_ext_gcd(&self, level: usize, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>, Vec<Elem>) {
        let one = vec![self.one_at(level)];
        let zero: Vec<Elem> = Vec::new();
        let mut r0 = a.to_vec();
        let mut r1 = b.to_vec();
        let mut u0 = one.clone();
        let mut u1 = zero.clone();
        let mut v0 = zero;
        let mut v1 = one;
        while !r1.is_empty() {
            let (q, r) = self.raw_divrem(level, &r0, &r1);
            let qu = self.raw_mul(level, &q, &u1);
            let qv = self.raw_mul(level, &q, &v1);
            let nu = self.raw_sub(level, &u0, &qu);
            let nv = self.raw_sub(level, &v0, &qv);
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, nu);
            v0 = std::mem::replace(&mut v1, nv);
        }
        (r0, u0, v0)
    }

    // ---- enumeration ----

    /// All elements in deterministic order: lexicographic on coefficient
    /// vectors with the least-significant level varying fastest.
    pub fn enumerate_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let count = self
            .order()
            .to_u128()
            .expect("field too large to enumerate");
        (0..count).map(move |i| self.elem_from_index(self.height(), i))
    }

    fn elem_from_index(&self, level: usize, mut i: u128) -> Elem {
        if level == 0 {
            return Elem::Base((i % self.data.p as u128) as u64);
        }
        let deg = self.step_degree(level);
        let sub_order = self
            .order_at(level - 1)
            .to_u128()
            .expect("field too large to enumerate");
        let mut coeffs = Vec::with_capacity(deg);
        for _ in 0..deg {
            coeffs.push(self.elem_from_index(level - 1, i % sub_order));
            i /= sub_order;
        }
        Elem::Ext(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UniPoly;
    use num_bigint::BigUint;
    use num_traits::One;

    fn f2() -> TowerField {
        TowerField::prime_field(2).unwrap()
    }

    fn f4() -> TowerField {
        let f2 = f2();
        // x^2 + x + 1
        let m = UniPoly::from_coeffs(&f2, vec![f2.one(), f2.one(), f2.one()]);
        f2.extend(&m).unwrap()
    }

    #[test]
    fn prime_field_construction() {
        assert_eq!(f2().order(), &BigUint::from(2u32));
        assert_eq!(
            TowerField::prime_field(7).unwrap().order(),
            &BigUint::from(7u32)
        );
        assert!(matches!(TowerField::prime_field(4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn extension_orders() {
        let f4 = f4();
        assert_eq!(f4.order(), &BigUint::from(4u32));
        // t^2 + 1 = (t+1)^2 over F2 is rejected.
        let f2 = f2();
        let m = UniPoly::from_coeffs(&f2, vec![f2.one(), f2.zero(), f2.one()]);
        assert!(matches!(f2.extend(&m), Err(Error::ReducibleModulus)));
    }

    #[test]
    fn f16_as_tower_over_f4() {
        let f4 = f4();
        // Find any monic irreducible quadratic over F4 and extend.
        let m = crate::poly::enumerate_monic_irreducibles(&f4, 2)
            .next()
            .unwrap();
        let f16 = f4.extend(&m).unwrap();
        assert_eq!(f16.order(), &BigUint::from(16u32));
        let elems: Vec<Elem> = f16.enumerate_elements().collect();
        assert_eq!(elems.len(), 16);
        let mut dedup = elems.clone();
        dedup.sort_by_key(|e| format!("{e}"));
        dedup.dedup();
        assert_eq!(dedup.len(), 16);
    }

    #[test]
    fn f4_multiplication_and_inverse() {
        let f4 = f4();
        let x = f4.generator().unwrap();
        let x1 = f4.add(&x, &f4.one());
        // x * (x+1) = x^2 + x = 1 mod (x^2+x+1)
        assert_eq!(f4.mul(&x, &x1), f4.one());
        assert_eq!(f4.inv(&x).unwrap(), x1);
        assert!(matches!(f4.inv(&f4.zero()), Err(Error::ZeroInversion)));
    }

    #[test]
    fn char_two_self_cancellation() {
        let f4 = f4();
        for e in f4.enumerate_elements() {
            assert!(f4.is_zero(&f4.add(&e, &e)));
        }
    }

    #[test]
    fn fermat_little_theorem_small_fields() {
        // every nonzero a satisfies a^(order-1) = 1, exhaustively for small orders
        let mut fields = vec![
            TowerField::prime_field(2).unwrap(),
            TowerField::prime_field(3).unwrap(),
            TowerField::prime_field(5).unwrap(),
            TowerField::prime_field(251).unwrap(),
            f4(),
        ];
        // F8, F9, F64 = F4[y]/(quadratic), F512 = F8[y]/(cubic)
        let f2 = f2();
        let f8 = f2
            .extend(&crate::poly::enumerate_monic_irreducibles(&f2, 3).next().unwrap())
            .unwrap();
        let f3 = TowerField::prime_field(3).unwrap();
        let f9 = f3
            .extend(&crate::poly::enumerate_monic_irreducibles(&f3, 2).next().unwrap())
            .unwrap();
        let f4 = f4();
        let f64 = f4
            .extend(&crate::poly::enumerate_monic_irreducibles(&f4, 3).next().unwrap())
            .unwrap();
        let f512 = f8
            .extend(&crate::poly::enumerate_monic_irreducibles(&f8, 3).next().unwrap())
            .unwrap();
        fields.extend([f8, f9, f64, f512]);
        for field in &fields {
            let exp = field.order() - BigUint::one();
            for e in field.enumerate_elements() {
                if field.is_zero(&e) {
                    continue;
                }
                assert_eq!(field.pow(&e, &exp), field.one(), "field of order {}", field.order());
            }
        }
    }

    #[test]
    fn enumeration_is_exhaustive_and_duplicate_free() {
        let f4 = f4();
        let elems: Vec<Elem> = f4.enumerate_elements().collect();
        assert_eq!(elems.len(), 4);
        for i in 0..elems.len() {
            for j in 0..i {
                assert_ne!(elems[i], elems[j]);
            }
        }
    }

    #[test]
    fn stacked_extensions_multiply_degrees() {
        let f2 = f2();
        let f4 = f4();
        let m = crate::poly::enumerate_monic_irreducibles(&f4, 3).next().unwrap();
        let f64 = f4.extend(&m).unwrap();
        assert_eq!(f64.order(), &BigUint::from(64u32));
        assert!(f64.is_extension_of(&f4));
        assert!(f64.is_extension_of(&f2));
        assert!(!f4.is_extension_of(&f64));
    }

    #[test]
    fn embedding_commutes_with_arithmetic() {
        let f4 = f4();
        let m = crate::poly::enumerate_monic_irreducibles(&f4, 2).next().unwrap();
        let f16 = f4.extend(&m).unwrap();
        for a in f4.enumerate_elements() {
            for b in f4.enumerate_elements() {
                let sum_below = f4.mul(&a, &b);
                let ea = f16.embed_from(f4.height(), &a);
                let eb = f16.embed_from(f4.height(), &b);
                assert_eq!(
                    f16.mul(&ea, &eb),
                    f16.embed_from(f4.height(), &sum_below)
                );
            }
        }
    }
}
