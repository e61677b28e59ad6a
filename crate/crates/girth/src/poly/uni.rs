//! Univariate polynomials over a tower field: arithmetic, irreducibility,
//! enumeration, and Gauss counting of monic irreducibles.

use crate::error::{Error, Result};
use crate::galois::{Elem, TowerField};
use crate::numbers::mobius;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;

/// Coefficients ascending by degree, no trailing zeros; the zero polynomial
/// has an empty vector. The owning field is passed to every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one(field: &TowerField) -> UniPoly {
        UniPoly {
            coeffs: vec![field.one()],
        }
    }

    pub fn x(field: &TowerField) -> UniPoly {
        UniPoly {
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn constant(field: &TowerField, c: Elem) -> UniPoly {
        if field.is_zero(&c) {
            UniPoly::zero()
        } else {
            UniPoly { coeffs: vec![c] }
        }
    }

    pub fn from_coeffs(field: &TowerField, coeffs: Vec<Elem>) -> UniPoly {
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> &Elem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_monic(&self, field: &TowerField) -> bool {
        self.coeffs
            .last()
            .map_or(false, |c| field.eq_elem(c, &field.one()))
    }

    pub fn add(&self, other: &UniPoly, field: &TowerField) -> UniPoly {
        UniPoly {
            coeffs: field.raw_add(field.height(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn sub(&self, other: &UniPoly, field: &TowerField) -> UniPoly {
        UniPoly {
            coeffs: field.raw_sub(field.height(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn mul(&self, other: &UniPoly, field: &TowerField) -> UniPoly {
        UniPoly {
            coeffs: field.raw_mul(field.height(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn scale(&self, c: &Elem, field: &TowerField) -> UniPoly {
        UniPoly {
            coeffs: field.raw_scale(field.height(), &self.coeffs, c),
        }
    }

    /// (quotient, remainder) with deg rem < deg divisor.
    pub fn divrem(&self, divisor: &UniPoly, field: &TowerField) -> Result<(UniPoly, UniPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let (q, r) = field.raw_divrem(field.height(), &self.coeffs, &divisor.coeffs);
        Ok((UniPoly { coeffs: q }, UniPoly { coeffs: r }))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &UniPoly, field: &TowerField) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b, field).expect("divisor nonzero").1;
            a = std::mem::replace(&mut b, r);
        }
        a.make_monic(field)
    }

    pub fn make_monic(&self, field: &TowerField) -> UniPoly {
        match self.coeffs.last() {
            None => UniPoly::zero(),
            Some(lead) => {
                if field.eq_elem(lead, &field.one()) {
                    self.clone()
                } else {
                    let inv = field.inv(lead).expect("leading coefficient nonzero");
                    self.scale(&inv, field)
                }
            }
        }
    }

    pub fn evaluate(&self, at: &Elem, field: &TowerField) -> Elem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.mul(&acc, at);
            acc = field.add(&acc, c);
        }
        acc
    }

    /// True iff `divisor` divides self exactly.
    pub fn divisible_by(&self, divisor: &UniPoly, field: &TowerField) -> bool {
        match self.divrem(divisor, field) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Render with variable name `var`, descending powers, e.g. "t^3+t+1".
    pub fn render(&self, field: &TowerField, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let coeff_str = format!("{c}");
            let is_one = field.eq_elem(c, &field.one());
            let part = match i {
                0 => coeff_str,
                1 => {
                    if is_one {
                        var.to_string()
                    } else {
                        format!("{coeff_str}*{var}")
                    }
                }
                _ => {
                    if is_one {
                        format!("{var}^{i}")
                    } else {
                        format!("{coeff_str}*{var}^{i}")
                    }
                }
            };
            parts.push(part);
        }
        parts.join("+")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display without a field context: only usable for debugging.
        write!(f, "UniPoly(deg {:?})", self.degree())
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x^(q) mod f, computed by square-and-multiply over the poly ring mod f.
fn pow_x_q_mod(h: &UniPoly, q: &BigUint, f: &UniPoly, field: &TowerField) -> UniPoly {
    // h^q mod f
    let mut acc = UniPoly::one(field);
    let mut base = h.clone();
    let bits = q.bits();
    for i in 0..bits {
        if q.bit(i) {
            acc = acc.mul(&base, field).divrem(f, field).unwrap().1;
        }
        if i + 1 < bits {
            base = base.mul(&base, field).divrem(f, field).unwrap().1;
        }
    }
    acc
}

/// Rabin's irreducibility test: f of degree n over F_q is irreducible iff
/// x^(q^n) = x mod f and gcd(x^(q^(n/r)) - x, f) = 1 for every prime r | n.
pub fn is_irreducible(f: &UniPoly, field: &TowerField) -> Result<bool> {
    let n = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::ConstantPolynomial),
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.make_monic(field);
    let q = field.order().clone();
    let x = UniPoly::x(field);
    // frob[i] = x^(q^(i+1)) mod f; raising to the q-th power is a ring
    // endomorphism of F_q[x]/(f), so iterating powmod composes Frobenius.
    let mut frob = Vec::with_capacity(n);
    let mut h = pow_x_q_mod(&x, &q, &f, field);
    frob.push(h.clone());
    for _ in 1..n {
        h = pow_x_q_mod(&h, &q, &f, field);
        frob.push(h.clone());
    }
    if frob[n - 1] != x {
        return Ok(false);
    }
    for r in prime_factors(n) {
        let g = frob[n / r - 1].sub(&x, field).gcd(&f, field);
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All monic irreducibles of degree m over `field`, in ascending
/// lexicographic order on (c_{m-1}, ..., c_1, c_0).
pub fn enumerate_monic_irreducibles(
    field: &TowerField,
    m: usize,
) -> impl Iterator<Item = UniPoly> + '_ {
    assert!(m >= 1, "degree must be positive");
    let q: u128 = num_traits::ToPrimitive::to_u128(field.order())
        .expect("field too large to enumerate");
    let count = q
        .checked_pow(m as u32)
        .expect("field too large to enumerate");
    let elems: Vec<Elem> = field.enumerate_elements().collect();
    (0..count).filter_map(move |idx| {
        let mut i = idx;
        let mut coeffs = Vec::with_capacity(m + 1);
        for _ in 0..m {
            coeffs.push(elems[(i % q) as usize].clone());
            i /= q;
        }
        coeffs.push(field.one());
        let cand = UniPoly::from_coeffs(field, coeffs);
        match is_irreducible(&cand, field) {
            Ok(true) => Some(cand),
            _ => None,
        }
    })
}

/// Gauss' count of monic irreducibles of degree n over a field with q
/// elements: N_q(n) = (1/n) * sum over d | n of mu(n/d) q^d.
pub fn count_irreducibles(q: &BigUint, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n == 1 {
        return Ok(q.clone());
    }
    let qi = BigInt::from(q.clone());
    let mut sum = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            let mu = mobius((n / d) as u64)?;
            if mu != 0 {
                let term = qi.pow(d);
                if mu > 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
        }
    }
    let (quot, rem) = sum.div_rem(&BigInt::from(n));
    debug_assert!(rem.is_zero());
    debug_assert!(!quot.is_negative());
    Ok(quot.to_biguint().expect("count is non-negative"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::TowerField;
    use num_bigint::BigUint;

    fn f2() -> TowerField {
        TowerField::prime_field(2).unwrap()
    }

    fn poly2(bits: &[u64]) -> UniPoly {
        let f = f2();
        UniPoly::from_coeffs(&f, bits.iter().map(|&b| f.from_u64(b)).collect())
    }

    #[test]
    fn divrem_example_over_f2() {
        let f = f2();
        // (t^2+t+1) / (t+1) = (t, 1)
        let a = poly2(&[1, 1, 1]);
        let b = poly2(&[1, 1]);
        let (q, r) = a.divrem(&b, &f).unwrap();
        assert_eq!(q, poly2(&[0, 1]));
        assert_eq!(r, poly2(&[1]));
        assert!(matches!(
            a.divrem(&UniPoly::zero(), &f),
            Err(Error::DivisionByZeroPoly)
        ));
    }

    #[test]
    fn gcd_example_over_f2() {
        let f = f2();
        // gcd(t^2+t, t+1) = t+1
        let a = poly2(&[0, 1, 1]);
        let b = poly2(&[1, 1]);
        assert_eq!(a.gcd(&b, &f), poly2(&[1, 1]));
    }

    #[test]
    fn evaluate_root() {
        let f = f2();
        let p = poly2(&[1, 0, 1]); // t^2 + 1
        assert!(f.is_zero(&p.evaluate(&f.one(), &f)));
    }

    #[test]
    fn irreducibility_examples() {
        let f = f2();
        assert!(is_irreducible(&poly2(&[1, 1, 1]), &f).unwrap()); // t^2+t+1
        assert!(!is_irreducible(&poly2(&[1, 0, 1]), &f).unwrap()); // t^2+1
        assert!(is_irreducible(&poly2(&[0, 1]), &f).unwrap()); // t
        assert!(matches!(
            is_irreducible(&poly2(&[1]), &f),
            Err(Error::ConstantPolynomial)
        ));
    }

    #[test]
    fn enumeration_examples() {
        let f = f2();
        let deg1: Vec<UniPoly> = enumerate_monic_irreducibles(&f, 1).collect();
        assert_eq!(deg1, vec![poly2(&[0, 1]), poly2(&[1, 1])]);
        let deg2: Vec<UniPoly> = enumerate_monic_irreducibles(&f, 2).collect();
        assert_eq!(deg2, vec![poly2(&[1, 1, 1])]);
        let deg3: Vec<UniPoly> = enumerate_monic_irreducibles(&f, 3).collect();
        assert_eq!(deg3, vec![poly2(&[1, 1, 0, 1]), poly2(&[1, 0, 1, 1])]);
    }

    #[test]
    fn count_matches_enumeration() {
        for (p, max_n) in [(2u64, 6u32), (3, 6), (5, 4)] {
            let field = TowerField::prime_field(p).unwrap();
            let q = BigUint::from(p);
            for n in 1..=max_n {
                let counted = count_irreducibles(&q, n).unwrap();
                let enumerated = enumerate_monic_irreducibles(&field, n as usize).count();
                assert_eq!(counted, BigUint::from(enumerated), "q={p}, n={n}");
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_irreducibles(&BigUint::from(2u32), 2).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            count_irreducibles(&BigUint::from(2u32), 3).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            count_irreducibles(&BigUint::from(3u32), 2).unwrap(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn gauss_formula_moebius_inversion() {
        // sum over d | n of d * N_q(d) = q^n
        for q in [2u32, 3] {
            let qb = BigUint::from(q);
            for n in 1u32..=8 {
                let mut sum = BigUint::from(0u32);
                for d in 1..=n {
                    if n % d == 0 {
                        sum += count_irreducibles(&qb, d).unwrap() * BigUint::from(d);
                    }
                }
                assert_eq!(sum, qb.pow(n), "q={q}, n={n}");
            }
        }
    }

    #[test]
    fn render_descending() {
        let f = f2();
        assert_eq!(poly2(&[1, 1, 0, 1]).render(&f, "t"), "t^3+t+1");
        assert_eq!(poly2(&[1, 0, 1, 1]).render(&f, "t"), "t^3+t^2+1");
        assert_eq!(UniPoly::zero().render(&f, "t"), "0");
    }
}
