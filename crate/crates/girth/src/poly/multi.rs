//! Sparse multivariate polynomials over arbitrary-precision integers or a
//! tower field, with the decomposition / specialization / reduction
//! operations the quotient constructions need.

use crate::error::{Error, Result};
use crate::galois::{Elem, TowerField};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Coefficient of a single term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Int(BigInt),
    Fq(Elem),
}

/// Coefficient ring tag shared by all terms of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffRing {
    Int,
    Fq(TowerField),
}

impl CoeffRing {
    pub fn is_zero(&self, c: &Coeff) -> bool {
        match (self, c) {
            (CoeffRing::Int, Coeff::Int(v)) => v.is_zero(),
            (CoeffRing::Fq(f), Coeff::Fq(e)) => f.is_zero(e),
            _ => panic!("coefficient ring mismatch"),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            CoeffRing::Int => Coeff::Int(BigInt::one()),
            CoeffRing::Fq(f) => Coeff::Fq(f.one()),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffRing::Int, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (CoeffRing::Fq(f), Coeff::Fq(x), Coeff::Fq(y)) => Coeff::Fq(f.add(x, y)),
            _ => panic!("coefficient ring mismatch"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffRing::Int, Coeff::Int(x)) => Coeff::Int(-x),
            (CoeffRing::Fq(f), Coeff::Fq(x)) => Coeff::Fq(f.neg(x)),
            _ => panic!("coefficient ring mismatch"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffRing::Int, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (CoeffRing::Fq(f), Coeff::Fq(x), Coeff::Fq(y)) => Coeff::Fq(f.mul(x, y)),
            _ => panic!("coefficient ring mismatch"),
        }
    }

    /// Exact division a / b; None if not exact (Int) or b = 0.
    pub fn div_exact(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        match (self, a, b) {
            (CoeffRing::Int, Coeff::Int(x), Coeff::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Some(Coeff::Int(q))
                } else {
                    None
                }
            }
            (CoeffRing::Fq(f), Coeff::Fq(x), Coeff::Fq(y)) => {
                let inv = f.inv(y).ok()?;
                Some(Coeff::Fq(f.mul(x, &inv)))
            }
            _ => panic!("coefficient ring mismatch"),
        }
    }
}

/// Sparse polynomial: map from exponent vectors (length k) to nonzero
/// coefficients. BTreeMap keys give a deterministic lexicographic term
/// order for iteration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    k: usize,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl MultiPoly {
    pub fn zero(k: usize) -> MultiPoly {
        MultiPoly {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(k: usize, c: Coeff, ring: &CoeffRing) -> MultiPoly {
        let mut p = MultiPoly::zero(k);
        if !ring.is_zero(&c) {
            p.terms.insert(vec![0; k], c);
        }
        p
    }

    pub fn one(k: usize, ring: &CoeffRing) -> MultiPoly {
        MultiPoly::constant(k, ring.one(), ring)
    }

    /// The variable t_{i+1} (0-based index i).
    pub fn var(k: usize, i: usize, ring: &CoeffRing) -> MultiPoly {
        assert!(i < k);
        let mut exps = vec![0u32; k];
        exps[i] = 1;
        let mut p = MultiPoly::zero(k);
        p.terms.insert(exps, ring.one());
        p
    }

    pub fn from_terms(
        k: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Coeff)>,
        ring: &CoeffRing,
    ) -> MultiPoly {
        let mut p = MultiPoly::zero(k);
        for (e, c) in terms {
            assert_eq!(e.len(), k);
            p.add_term(e, c, ring);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    /// The constant value if the polynomial has no variable-bearing term.
    pub fn as_constant(&self, ring: &CoeffRing) -> Option<Coeff> {
        if self.terms.is_empty() {
            return Some(match ring {
                CoeffRing::Int => Coeff::Int(BigInt::zero()),
                CoeffRing::Fq(f) => Coeff::Fq(f.zero()),
            });
        }
        if self.terms.len() == 1 {
            if let Some((e, c)) = self.terms.iter().next() {
                if e.iter().all(|&x| x == 0) {
                    return Some(c.clone());
                }
            }
        }
        None
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Coeff, ring: &CoeffRing) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.remove(&exps) {
            None => {
                self.terms.insert(exps, c);
            }
            Some(old) => {
                let sum = ring.add(&old, &c);
                if !ring.is_zero(&sum) {
                    self.terms.insert(exps, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly, ring: &CoeffRing) -> MultiPoly {
        assert_eq!(self.k, other.k);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone(), ring);
        }
        out
    }

    pub fn neg(&self, ring: &CoeffRing) -> MultiPoly {
        MultiPoly {
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly, ring: &CoeffRing) -> MultiPoly {
        self.add(&other.neg(ring), ring)
    }

    pub fn mul(&self, other: &MultiPoly, ring: &CoeffRing) -> MultiPoly {
        assert_eq!(self.k, other.k);
        let mut out = MultiPoly::zero(self.k);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.add_term(exps, ring.mul(ca, cb), ring);
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &Coeff, ring: &CoeffRing) -> MultiPoly {
        let mut out = MultiPoly::zero(self.k);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), ring.mul(v, c), ring);
        }
        out
    }

    pub fn pow(&self, mut e: u32, ring: &CoeffRing) -> MultiPoly {
        let mut acc = MultiPoly::one(self.k, ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ring);
            }
        }
        acc
    }

    /// Degree in variable i; 0 for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Max per-variable degree over all variables; 0 for constants.
    pub fn max_degree_per_var(&self) -> u32 {
        (0..self.k).map(|i| self.degree_in(i)).max().unwrap_or(0)
    }

    /// Write P = sum of P_i(t_1, ..., t_{k-1}) t_k^i and return [P_0 .. P_n],
    /// n = degree of P in t_k. Components live in k-1 variables.
    pub fn decompose_last_variable(&self) -> Result<Vec<MultiPoly>> {
        if self.k == 0 {
            return Err(Error::NoVariables);
        }
        let n = self.degree_in(self.k - 1) as usize;
        let mut out = vec![MultiPoly::zero(self.k - 1); n + 1];
        for (e, c) in &self.terms {
            let i = e[self.k - 1] as usize;
            let sub: Vec<u32> = e[..self.k - 1].to_vec();
            out[i].terms.insert(sub, c.clone());
        }
        Ok(out)
    }

    /// Inverse of `decompose_last_variable`.
    pub fn recombine_last_variable(
        components: &[MultiPoly],
        k: usize,
        ring: &CoeffRing,
    ) -> MultiPoly {
        let mut out = MultiPoly::zero(k);
        for (i, p) in components.iter().enumerate() {
            for (e, c) in &p.terms {
                let mut exps = e.clone();
                exps.push(i as u32);
                out.add_term(exps, c.clone(), ring);
            }
        }
        out
    }

    /// Substitution homomorphism over a tower field. `assign[i]` carries the
    /// image of t_{i+1} in `target`, or None to leave the variable alone.
    /// The polynomial's own field must be a subtower of `target`.
    pub fn specialize(
        &self,
        assign: &[Option<Elem>],
        source: &TowerField,
        target: &TowerField,
    ) -> Result<MultiPoly> {
        assert_eq!(assign.len(), self.k);
        if !target.is_extension_of(source) {
            return Err(Error::FieldMismatch);
        }
        for v in assign.iter().flatten() {
            if !target.contains(v) {
                return Err(Error::FieldMismatch);
            }
        }
        let ring = CoeffRing::Fq(target.clone());
        let mut out = MultiPoly::zero(self.k);
        for (e, c) in &self.terms {
            let base = match c {
                Coeff::Fq(el) => target.embed_from(source.height(), el),
                Coeff::Int(_) => panic!("specialize requires field coefficients"),
            };
            let mut coeff = base;
            let mut exps = vec![0u32; self.k];
            for i in 0..self.k {
                match &assign[i] {
                    Some(v) => {
                        coeff = target.mul(&coeff, &target.pow(v, &BigUint::from(e[i])));
                    }
                    None => exps[i] = e[i],
                }
            }
            out.add_term(exps, Coeff::Fq(coeff), &ring);
        }
        Ok(out)
    }

    /// Full specialization to a single field element.
    pub fn evaluate(
        &self,
        assign: &[Elem],
        source: &TowerField,
        target: &TowerField,
    ) -> Result<Elem> {
        let wrapped: Vec<Option<Elem>> = assign.iter().cloned().map(Some).collect();
        let spec = self.specialize(&wrapped, source, target)?;
        match spec.as_constant(&CoeffRing::Fq(target.clone())) {
            Some(Coeff::Fq(e)) => Ok(e),
            _ => unreachable!("full assignment yields a constant"),
        }
    }

    /// Coefficient-wise reduction of an integer polynomial mod p; zero
    /// terms dropped.
    pub fn reduce_coefficients_mod_p(&self, target: &TowerField) -> MultiPoly {
        let p = BigInt::from(target.characteristic());
        let ring = CoeffRing::Fq(target.clone());
        let mut out = MultiPoly::zero(self.k);
        for (e, c) in &self.terms {
            let v = match c {
                Coeff::Int(x) => x.mod_floor(&p),
                Coeff::Fq(_) => panic!("reduce_coefficients_mod_p requires integer coefficients"),
            };
            let residue = v.to_u64_digits().1.first().copied().unwrap_or(0);
            out.add_term(e.clone(), Coeff::Fq(target.from_u64(residue)), &ring);
        }
        out
    }

    /// Exact multivariate division in lex order; None if not divisible.
    pub fn div_exact(&self, divisor: &MultiPoly, ring: &CoeffRing) -> Option<MultiPoly> {
        assert_eq!(self.k, divisor.k);
        if divisor.is_zero() {
            return None;
        }
        let (lt_e, lt_c) = divisor.terms.iter().next_back().unwrap();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.k);
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (e.clone(), c.clone())
            };
            if re.iter().zip(lt_e.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let qc = ring.div_exact(&rc, lt_c)?;
            let qe: Vec<u32> = re.iter().zip(lt_e.iter()).map(|(a, b)| a - b).collect();
            let mut term = MultiPoly::zero(self.k);
            term.terms.insert(qe, qc);
            rem = rem.sub(&term.mul(divisor, ring), ring);
            quot = quot.add(&term, ring);
        }
        Some(quot)
    }

    /// Content of an integer polynomial (gcd of |coefficients|); 0 for zero.
    pub fn content(&self) -> BigUint {
        let mut g = BigUint::zero();
        for c in self.terms.values() {
            match c {
                Coeff::Int(x) => g = g.gcd(&x.magnitude().clone()),
                Coeff::Fq(_) => panic!("content requires integer coefficients"),
            }
        }
        g
    }

    /// Lex-leading coefficient.
    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Canonical form used for denominator bookkeeping: integer polynomials
    /// are divided by their content with the lex-leading coefficient made
    /// positive; field polynomials are scaled to lex-leading coefficient 1.
    /// Returns (canonical polynomial, integer content) — content is 1 for
    /// field polynomials.
    pub fn canonical_scaled(&self, ring: &CoeffRing) -> (MultiPoly, BigUint) {
        if self.is_zero() {
            return (self.clone(), BigUint::zero());
        }
        match ring {
            CoeffRing::Int => {
                let content = self.content();
                let mut out = MultiPoly::zero(self.k);
                let negate = matches!(self.leading_coeff(), Some(Coeff::Int(x)) if x.is_negative());
                for (e, c) in &self.terms {
                    if let Coeff::Int(x) = c {
                        let mut v = x / BigInt::from(content.clone());
                        if negate {
                            v = -v;
                        }
                        out.terms.insert(e.clone(), Coeff::Int(v));
                    }
                }
                (out, content)
            }
            CoeffRing::Fq(f) => {
                let lead = match self.leading_coeff() {
                    Some(Coeff::Fq(e)) => e.clone(),
                    _ => unreachable!(),
                };
                let inv = f.inv(&lead).expect("nonzero leading coefficient");
                (self.mul_coeff(&Coeff::Fq(inv), ring), BigUint::one())
            }
        }
    }

    /// Map integer coefficients into a finite field (mod its characteristic).
    pub fn int_to_field(&self, target: &TowerField) -> MultiPoly {
        self.reduce_coefficients_mod_p(target)
    }

    /// Render in the entry grammar, descending lex term order.
    pub fn render(&self, ring: &CoeffRing) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let (mag, negative) = match c {
                Coeff::Int(x) => (x.magnitude().to_string(), x.is_negative()),
                Coeff::Fq(el) => (format!("{el}"), false),
            };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push(if negative { '-' } else { '+' });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("t{}", i + 1)
                    } else {
                        format!("t{}^{}", i + 1, x)
                    }
                })
                .collect();
            let is_one = match c {
                Coeff::Int(x) => x.magnitude().is_one(),
                Coeff::Fq(el) => match ring {
                    CoeffRing::Fq(f) => f.eq_elem(el, &f.one()),
                    _ => false,
                },
            };
            if mono.is_empty() {
                out.push_str(&mag);
            } else if is_one {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}
