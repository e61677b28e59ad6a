//! Finitely generated matrix groups over rational function fields: spec
//! files, denominator clearing, a canonical single-denominator form for
//! group elements, deterministic word-ball enumeration, and reduction into
//! finite fields.

use crate::error::{Error, Result};
use crate::galois::{Elem, TowerField};
use crate::poly::{
    enumerate_monic_irreducibles, parse_entry, Coeff, CoeffRing, MultiPoly, RationalEntry,
};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Default cap on ball enumeration, overridable via GIRTH_BALL_BUDGET.
pub const DEFAULT_BALL_BUDGET: u64 = 5_000_000;

/// Environment variable overriding the default ball budget.
pub const BALL_BUDGET_ENV: &str = "GIRTH_BALL_BUDGET";

/// The effective ball budget: the environment override if set and parseable,
/// otherwise the default.
pub fn ball_budget() -> u64 {
    std::env::var(BALL_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BALL_BUDGET)
}

fn default_true() -> bool {
    true
}

/// On-disk description of a matrix group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    /// Matrix dimension.
    pub d: usize,
    /// 0 or a prime.
    pub characteristic: u64,
    /// Base field order q = p^e; only allowed (and defaulting to p) when
    /// the characteristic p is positive.
    #[serde(default)]
    pub q: Option<u64>,
    /// Number of indeterminates t1..tk.
    pub k: usize,
    /// Generator matrices, row-major, entries in the rational-entry grammar.
    pub generators: Vec<Vec<Vec<String>>>,
    /// Add inverses of the generators automatically (default true).
    #[serde(default = "default_true")]
    pub auto_symmetrize: bool,
}

/// A matrix with rational-function entries.
#[derive(Clone, Debug)]
pub struct RatMatrix {
    pub d: usize,
    /// Row-major, length d*d.
    pub entries: Vec<RationalEntry>,
}

impl RatMatrix {
    pub fn identity(d: usize, k: usize, ring: &CoeffRing) -> RatMatrix {
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(if i == j {
                    RationalEntry::from_poly(MultiPoly::one(k, ring), ring)
                } else {
                    RationalEntry::zero(k, ring)
                });
            }
        }
        RatMatrix { d, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalEntry {
        &self.entries[i * self.d + j]
    }

    pub fn mul(&self, other: &RatMatrix, ring: &CoeffRing) -> RatMatrix {
        assert_eq!(self.d, other.d);
        let d = self.d;
        let k = self.entries[0].num.num_vars();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = RationalEntry::zero(k, ring);
                for l in 0..d {
                    acc = acc.add(&self.get(i, l).mul(other.get(l, j), ring), ring);
                }
                entries.push(acc);
            }
        }
        RatMatrix { d, entries }
    }

    fn minor(&self, row: usize, col: usize) -> RatMatrix {
        let d = self.d;
        let mut entries = Vec::with_capacity((d - 1) * (d - 1));
        for i in 0..d {
            if i == row {
                continue;
            }
            for j in 0..d {
                if j == col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        RatMatrix { d: d - 1, entries }
    }

    /// Determinant by cofactor expansion (d is small).
    pub fn det(&self, ring: &CoeffRing) -> RationalEntry {
        if self.d == 1 {
            return self.entries[0].clone();
        }
        let k = self.entries[0].num.num_vars();
        let mut acc = RationalEntry::zero(k, ring);
        for j in 0..self.d {
            let c = self.get(0, j);
            if c.is_zero() {
                continue;
            }
            let term = c.mul(&self.minor(0, j).det(ring), ring);
            acc = if j % 2 == 0 {
                acc.add(&term, ring)
            } else {
                acc.sub(&term, ring)
            };
        }
        acc
    }

    /// Inverse via the adjugate; errors on singular matrices.
    pub fn inverse(&self, ring: &CoeffRing) -> Result<RatMatrix> {
        let det = self.det(ring);
        if det.is_zero() {
            return Err(Error::SingularGenerator);
        }
        let inv_det = RationalEntry {
            num: det.den.clone(),
            den: det.num.clone(),
        };
        let d = self.d;
        let k = self.entries[0].num.num_vars();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                // adjugate: signed minor with transposed indices
                let cof = if d == 1 {
                    RationalEntry::from_poly(MultiPoly::one(k, ring), ring)
                } else {
                    self.minor(j, i).det(ring)
                };
                let signed = if (i + j) % 2 == 0 { cof } else { cof.neg(ring) };
                entries.push(signed.mul(&inv_det, ring));
            }
        }
        Ok(RatMatrix { d, entries })
    }

    /// Equality over the fraction field.
    pub fn semantic_eq(&self, other: &RatMatrix, ring: &CoeffRing) -> bool {
        self.d == other.d
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| a.eq_rational(b, ring))
    }
}

/// A matrix with polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    pub d: usize,
    /// Row-major, length d*d.
    pub entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn identity(d: usize, k: usize, ring: &CoeffRing) -> PolyMatrix {
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(if i == j {
                    MultiPoly::one(k, ring)
                } else {
                    MultiPoly::zero(k)
                });
            }
        }
        PolyMatrix { d, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.d + j]
    }

    pub fn mul(&self, other: &PolyMatrix, ring: &CoeffRing) -> PolyMatrix {
        assert_eq!(self.d, other.d);
        let d = self.d;
        let k = self.entries[0].num_vars();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = MultiPoly::zero(k);
                for l in 0..d {
                    acc = acc.add(&self.get(i, l).mul(other.get(l, j), ring), ring);
                }
                entries.push(acc);
            }
        }
        PolyMatrix { d, entries }
    }
}

/// Canonical single-denominator form of a group element: the element is
/// D^{-denom_pow} * mat, where D is the group's universal denominator and
/// `mat` is reduced so that D does not divide all entries while
/// denom_pow > 0. The reduced pair is unique, so structural equality and
/// hashing decide group-element equality exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub denom_pow: u32,
    pub mat: PolyMatrix,
}

impl GroupElement {
    pub fn identity(d: usize, k: usize, ring: &CoeffRing) -> GroupElement {
        GroupElement {
            denom_pow: 0,
            mat: PolyMatrix::identity(d, k, ring),
        }
    }

    pub fn mul(&self, other: &GroupElement, ring: &CoeffRing) -> GroupElement {
        GroupElement {
            denom_pow: self.denom_pow + other.denom_pow,
            mat: self.mat.mul(&other.mat, ring),
        }
    }

    /// Divide out the universal denominator as often as possible.
    pub fn canonicalize(mut self, d_poly: &MultiPoly, ring: &CoeffRing) -> GroupElement {
        'outer: while self.denom_pow > 0 {
            let mut divided = Vec::with_capacity(self.mat.entries.len());
            for p in &self.mat.entries {
                match p.div_exact(d_poly, ring) {
                    Some(q) => divided.push(q),
                    None => break 'outer,
                }
            }
            self.mat.entries = divided;
            self.denom_pow -= 1;
        }
        self
    }
}

/// The symmetrized generating set with denominators cleared: each matrix in
/// the set equals d_poly^{-lambda} times the corresponding polynomial matrix.
#[derive(Clone, Debug)]
pub struct ClearedGens {
    pub d: usize,
    pub k: usize,
    pub ring: CoeffRing,
    /// Common clearing exponent.
    pub lambda: u32,
    /// Product of the distinct canonical denominator polynomials (1 if none).
    pub q_poly: MultiPoly,
    /// Integer content denominator (1 in positive characteristic).
    pub r: BigUint,
    /// Universal denominator: q_poly (char p) or r * q_poly (char 0).
    pub d_poly: MultiPoly,
    /// d_poly^lambda * s for each matrix s of the symmetrized set, in order.
    pub t_mats: Vec<PolyMatrix>,
    /// Canonical group-element forms of the symmetrized set, in order;
    /// gens[0] is the identity.
    pub gens: Vec<GroupElement>,
}

/// Size parameters of the cleared generating set, feeding the certified
/// cardinality bounds.
#[derive(Clone, Debug)]
pub struct EntryBounds {
    /// Max per-variable degree over entries of the cleared matrices.
    pub m: u64,
    /// Max per-variable degree of q_poly.
    pub delta: u64,
    /// Size of the symmetrized generating set (identity included).
    pub s: u64,
    /// Max |integer coefficient| over entries of the cleared matrices, >= 1.
    pub coeff_bound: BigUint,
    /// Max number of monomials per entry, >= 1.
    pub terms_bound: u64,
}

/// A loaded, validated matrix group.
#[derive(Clone, Debug)]
pub struct MatGroup {
    pub name: String,
    pub d: usize,
    pub k: usize,
    /// 0 or a prime p.
    pub characteristic: u64,
    /// The base field F_q when the characteristic is positive.
    pub base_field: Option<TowerField>,
    pub ring: CoeffRing,
    /// Symmetrized generating set: identity, generators, then inverses,
    /// deduplicated semantically, in first-appearance order.
    pub sym_gens: Vec<RatMatrix>,
    pub cleared: ClearedGens,
}

impl MatGroup {
    /// Read and validate a spec file.
    pub fn load(path: &std::path::Path) -> Result<MatGroup> {
        let text = std::fs::read_to_string(path)?;
        let spec: GroupSpec = serde_json::from_str(&text)?;
        MatGroup::from_spec(&spec)
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<MatGroup> {
        if spec.d == 0 {
            return Err(Error::SchemaError("d must be positive".into()));
        }
        if spec.generators.is_empty() {
            return Err(Error::SchemaError("at least one generator required".into()));
        }
        let (base_field, ring) = if spec.characteristic == 0 {
            if spec.q.is_some() {
                return Err(Error::SchemaError(
                    "q is only meaningful in positive characteristic".into(),
                ));
            }
            (None, CoeffRing::Int)
        } else {
            let p = spec.characteristic;
            if !crate::numbers::is_prime_u64(p) {
                return Err(Error::BadCharacteristic);
            }
            let q = spec.q.unwrap_or(p);
            let mut e = 0u32;
            let mut rest = q;
            while rest > 1 && rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if rest != 1 || e == 0 {
                return Err(Error::SchemaError(format!(
                    "q = {q} is not a power of the characteristic {p}"
                )));
            }
            let prime = TowerField::prime_field(p)?;
            let field = if e == 1 {
                prime
            } else {
                let modulus = enumerate_monic_irreducibles(&prime, e as usize)
                    .next()
                    .expect("irreducibles exist in every degree");
                prime.extend(&modulus)?
            };
            (Some(field.clone()), CoeffRing::Fq(field))
        };

        // Parse and validate the generator matrices.
        let mut gens: Vec<RatMatrix> = Vec::with_capacity(spec.generators.len());
        for rows in &spec.generators {
            if rows.len() != spec.d || rows.iter().any(|r| r.len() != spec.d) {
                return Err(Error::NonSquareMatrix(spec.d));
            }
            let mut entries = Vec::with_capacity(spec.d * spec.d);
            for row in rows {
                for text in row {
                    entries.push(parse_entry(text, spec.k, &ring)?);
                }
            }
            let m = RatMatrix {
                d: spec.d,
                entries,
            };
            if m.det(&ring).is_zero() {
                return Err(Error::SingularGenerator);
            }
            gens.push(m);
        }

        // Symmetrize: identity, generators, inverses; semantic dedup keeps
        // the first appearance.
        let mut sym: Vec<RatMatrix> = vec![RatMatrix::identity(spec.d, spec.k, &ring)];
        let push_unique = |sym: &mut Vec<RatMatrix>, m: RatMatrix| {
            if !sym.iter().any(|g| g.semantic_eq(&m, &ring)) {
                sym.push(m);
            }
        };
        for g in &gens {
            push_unique(&mut sym, g.clone());
        }
        if spec.auto_symmetrize {
            for g in &gens {
                push_unique(&mut sym, g.inverse(&ring)?);
            }
        }

        let cleared = clear_denominators(&sym, spec.d, spec.k, &ring)?;
        Ok(MatGroup {
            name: spec.name.clone(),
            d: spec.d,
            k: spec.k,
            characteristic: spec.characteristic,
            base_field,
            ring,
            sym_gens: sym,
            cleared,
        })
    }

    /// Size parameters of the cleared generating set.
    pub fn bounds(&self) -> EntryBounds {
        let cg = &self.cleared;
        let mut m = 0u64;
        let mut coeff_bound = BigUint::one();
        let mut terms_bound = 1u64;
        for t in &cg.t_mats {
            for p in &t.entries {
                m = m.max(u64::from(p.max_degree_per_var()));
                terms_bound = terms_bound.max(p.num_terms() as u64);
                if matches!(self.ring, CoeffRing::Int) {
                    for (_, c) in p.terms() {
                        if let Coeff::Int(v) = c {
                            coeff_bound = coeff_bound.max(v.abs().to_biguint().unwrap());
                        }
                    }
                }
            }
        }
        EntryBounds {
            m,
            delta: u64::from(cg.q_poly.max_degree_per_var()),
            s: self.sym_gens.len() as u64,
            coeff_bound,
            terms_bound,
        }
    }
}

/// Clear all denominators against a single universal denominator.
fn clear_denominators(
    sym: &[RatMatrix],
    d: usize,
    k: usize,
    ring: &CoeffRing,
) -> Result<ClearedGens> {
    // Distinct canonical denominator polynomials and (char 0) their contents.
    let mut distinct: Vec<MultiPoly> = Vec::new();
    let mut r = BigUint::one();
    let one = MultiPoly::one(k, ring);
    for g in sym {
        for e in &g.entries {
            if e.den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let (canon, content) = e.den.canonical_scaled(ring);
            if matches!(ring, CoeffRing::Int) && !content.is_zero() {
                r = r.lcm(&content);
            }
            if canon != one && !distinct.contains(&canon) {
                distinct.push(canon);
            }
        }
    }
    let q_poly = distinct
        .iter()
        .fold(MultiPoly::one(k, ring), |acc, p| acc.mul(p, ring));
    let d_poly = match ring {
        CoeffRing::Int => q_poly.mul_coeff(&Coeff::Int(BigInt::from(r.clone())), ring),
        CoeffRing::Fq(_) => q_poly.clone(),
    };

    // Smallest lambda such that d_poly^lambda clears every entry. The loop
    // terminates: each irreducible factor of a denominator divides q_poly,
    // with multiplicity at most the denominator's total degree, and contents
    // divide r.
    let cap: u32 = 2 + sym
        .iter()
        .flat_map(|g| g.entries.iter())
        .map(|e| e.den.terms().map(|(ex, _)| ex.iter().sum::<u32>()).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let mut lambda = 0u32;
    let mut power = MultiPoly::one(k, ring);
    loop {
        let clears = sym.iter().all(|g| {
            g.entries
                .iter()
                .all(|e| power.mul(&e.num, ring).div_exact(&e.den, ring).is_some())
        });
        if clears {
            break;
        }
        lambda += 1;
        assert!(lambda <= cap, "denominator clearing did not terminate");
        power = power.mul(&d_poly, ring);
    }

    let mut t_mats = Vec::with_capacity(sym.len());
    let mut gens = Vec::with_capacity(sym.len());
    for g in sym {
        let entries: Vec<MultiPoly> = g
            .entries
            .iter()
            .map(|e| {
                power
                    .mul(&e.num, ring)
                    .div_exact(&e.den, ring)
                    .expect("lambda clears every entry")
            })
            .collect();
        let mat = PolyMatrix { d, entries };
        t_mats.push(mat.clone());
        gens.push(
            GroupElement {
                denom_pow: lambda,
                mat,
            }
            .canonicalize(&d_poly, ring),
        );
    }

    Ok(ClearedGens {
        d,
        k,
        ring: ring.clone(),
        lambda,
        q_poly,
        r,
        d_poly,
        t_mats,
        gens,
    })
}

/// A word ball in canonical form: `elements` in deterministic discovery
/// order (identity first), `index` for O(1) membership, and `levels[r]` =
/// number of elements of the radius-r ball for r = 0..n.
#[derive(Clone, Debug)]
pub struct Ball {
    pub elements: Vec<GroupElement>,
    pub index: HashMap<GroupElement, usize>,
    pub levels: Vec<usize>,
}

impl Ball {
    /// Ball size at each radius, as (n, size) rows.
    pub fn growth_table(&self) -> Vec<(usize, usize)> {
        self.levels.iter().enumerate().map(|(n, &s)| (n, s)).collect()
    }
}

/// Breadth-first enumeration of the radius-n ball of the symmetrized
/// generating set, erroring once more than `budget` elements appear.
pub fn enumerate_ball(group: &MatGroup, n: usize, budget: u64) -> Result<Ball> {
    let cg = &group.cleared;
    let ring = &cg.ring;
    let ident = GroupElement::identity(cg.d, cg.k, ring);
    let mut elements = vec![ident.clone()];
    let mut index = HashMap::new();
    index.insert(ident.clone(), 0usize);
    let mut levels = vec![1usize];
    let mut frontier: Vec<usize> = vec![0];
    let gens: Vec<&GroupElement> = cg.gens.iter().filter(|g| **g != ident).collect();
    for _radius in 1..=n {
        let mut next = Vec::new();
        for fi in 0..frontier.len() {
            let base = elements[frontier[fi]].clone();
            for g in &gens {
                let prod = base.mul(g, ring).canonicalize(&cg.d_poly, ring);
                if !index.contains_key(&prod) {
                    if elements.len() as u64 >= budget {
                        return Err(Error::BallBudgetExceeded(budget));
                    }
                    index.insert(prod.clone(), elements.len());
                    next.push(elements.len());
                    elements.push(prod);
                }
            }
        }
        levels.push(elements.len());
        frontier = next;
    }
    Ok(Ball {
        elements,
        index,
        levels,
    })
}

/// A homomorphism of the group into GL_d over a finite field, given by an
/// assignment of the indeterminates (and, in characteristic 0, reduction of
/// integer coefficients modulo the field characteristic).
#[derive(Clone, Debug)]
pub struct Reduction {
    pub field: TowerField,
    pub assign: Vec<Elem>,
    source: TowerField,
    denom_inv: Elem,
    char0: bool,
}

/// Build the reduction sending t_i to assign[i] in `field`; errors if the
/// universal denominator maps to zero.
pub fn make_reduction(
    group: &MatGroup,
    field: &TowerField,
    assign: &[Elem],
) -> Result<Reduction> {
    assert_eq!(assign.len(), group.k);
    let char0 = group.characteristic == 0;
    let source = if char0 {
        if (&group.cleared.r % field.characteristic()).is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        field.clone()
    } else {
        let base = group.base_field.clone().expect("char p group has a base field");
        if !field.is_extension_of(&base) {
            return Err(Error::FieldMismatch);
        }
        base
    };
    let dp = if char0 {
        group.cleared.d_poly.int_to_field(field)
    } else {
        group.cleared.d_poly.clone()
    };
    let img = dp.evaluate(assign, &source, field)?;
    if field.is_zero(&img) {
        return Err(Error::DenominatorVanishes);
    }
    let denom_inv = field.inv(&img)?;
    Ok(Reduction {
        field: field.clone(),
        assign: assign.to_vec(),
        source,
        denom_inv,
        char0,
    })
}

impl Reduction {
    /// Image of a polynomial (integer coefficients are reduced first).
    pub fn reduce_poly(&self, p: &MultiPoly) -> Result<Elem> {
        let q = if self.char0 {
            p.int_to_field(&self.field)
        } else {
            p.clone()
        };
        q.evaluate(&self.assign, &self.source, &self.field)
    }

    /// Image of a group element as a row-major d*d matrix over the field.
    pub fn reduce_element(&self, g: &GroupElement) -> Result<Vec<Elem>> {
        let scale = self
            .field
            .pow(&self.denom_inv, &BigUint::from(g.denom_pow));
        g.mat
            .entries
            .iter()
            .map(|p| Ok(self.field.mul(&self.reduce_poly(p)?, &scale)))
            .collect()
    }

    /// The identity matrix over the target field.
    pub fn identity_matrix(&self, d: usize) -> Vec<Elem> {
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(if i == j { self.field.one() } else { self.field.zero() });
            }
        }
        out
    }

    /// Matrix product over the target field.
    pub fn mat_mul(&self, a: &[Elem], b: &[Elem], d: usize) -> Vec<Elem> {
        let f = &self.field;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = f.zero();
                for l in 0..d {
                    acc = f.add(&acc, &f.mul(&a[i * d + l], &b[l * d + j]));
                }
                out.push(acc);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg_spec() -> GroupSpec {
        GroupSpec {
            name: "heisenberg".into(),
            d: 3,
            characteristic: 0,
            q: None,
            k: 0,
            generators: vec![
                vec![
                    vec!["1".into(), "1".into(), "0".into()],
                    vec!["0".into(), "1".into(), "0".into()],
                    vec!["0".into(), "0".into(), "1".into()],
                ],
                vec![
                    vec!["1".into(), "0".into(), "0".into()],
                    vec!["0".into(), "1".into(), "1".into()],
                    vec!["0".into(), "0".into(), "1".into()],
                ],
            ],
            auto_symmetrize: true,
        }
    }

    fn unipotent_z_spec() -> GroupSpec {
        GroupSpec {
            name: "unipotent_z".into(),
            d: 2,
            characteristic: 0,
            q: None,
            k: 0,
            generators: vec![vec![
                vec!["1".into(), "1".into()],
                vec!["0".into(), "1".into()],
            ]],
            auto_symmetrize: true,
        }
    }

    fn lamplighter_spec() -> GroupSpec {
        GroupSpec {
            name: "lamplighter_f2".into(),
            d: 2,
            characteristic: 2,
            q: Some(2),
            k: 1,
            generators: vec![
                vec![vec!["t1".into(), "0".into()], vec!["0".into(), "1".into()]],
                vec![vec!["1".into(), "1".into()], vec!["0".into(), "1".into()]],
            ],
            auto_symmetrize: true,
        }
    }

    #[test]
    fn heisenberg_symmetrized_set() {
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        // identity, x, y, x^{-1}, y^{-1}
        assert_eq!(g.sym_gens.len(), 5);
        assert_eq!(g.cleared.lambda, 0);
        assert_eq!(g.cleared.r, BigUint::one());
    }

    #[test]
    fn heisenberg_ball_matches_word_oracle() {
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        let ball = enumerate_ball(&g, 2, 10_000).unwrap();
        // brute-force: all words of length <= 2 over the symmetrized set
        let ring = &g.ring;
        let mut words: Vec<RatMatrix> = Vec::new();
        let mut push = |m: RatMatrix, words: &mut Vec<RatMatrix>| {
            if !words.iter().any(|w| w.semantic_eq(&m, ring)) {
                words.push(m);
            }
        };
        for a in &g.sym_gens {
            for b in &g.sym_gens {
                push(a.mul(b, ring), &mut words);
            }
        }
        assert_eq!(ball.levels[2], words.len());
        assert_eq!(ball.levels[0], 1);
        assert_eq!(ball.levels[1], g.sym_gens.len());
    }

    #[test]
    fn unipotent_z_linear_growth() {
        let g = MatGroup::from_spec(&unipotent_z_spec()).unwrap();
        let ball = enumerate_ball(&g, 30, 10_000).unwrap();
        for n in 0..=30 {
            assert_eq!(ball.levels[n], 2 * n + 1, "b({n})");
        }
    }

    #[test]
    fn lamplighter_clearing() {
        let g = MatGroup::from_spec(&lamplighter_spec()).unwrap();
        // b = b^{-1} over F_2, so the symmetrized set is {1, a, b, a^{-1}}
        assert_eq!(g.sym_gens.len(), 4);
        let cg = &g.cleared;
        assert_eq!(cg.lambda, 1);
        // q_poly = t1
        let ring = &g.ring;
        assert_eq!(cg.q_poly, MultiPoly::var(1, 0, ring));
        assert_eq!(cg.r, BigUint::one());
        let b = g.bounds();
        assert_eq!(b.m, 2);
        assert_eq!(b.delta, 1);
        assert_eq!(b.s, 4);
    }

    #[test]
    fn heisenberg_bounds() {
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        let b = g.bounds();
        assert_eq!(b.s, 5);
        assert_eq!(b.m, 0);
        assert_eq!(b.delta, 0);
        assert_eq!(b.coeff_bound, BigUint::one());
        assert_eq!(b.terms_bound, 1);
    }

    #[test]
    fn coefficient_bound_on_words() {
        // entries of products of 2n cleared matrices stay below
        // d^(2n-1) * (coeff_bound * terms_bound)^(2n)
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        let b = g.bounds();
        let ring = &g.ring;
        for n in 1usize..=3 {
            let bound = BigUint::from(g.d).pow(2 * n as u32 - 1)
                * (b.coeff_bound.clone() * b.terms_bound).pow(2 * n as u32);
            // all products of 2n generators (sampled exhaustively for n <= 2,
            // by a fixed deep word for n = 3)
            let mut mats = vec![PolyMatrix::identity(g.d, g.k, ring)];
            for _ in 0..(2 * n) {
                let mut next = Vec::new();
                for m in &mats {
                    for t in &g.cleared.t_mats {
                        next.push(m.mul(t, ring));
                    }
                }
                mats = next;
                if mats.len() > 3000 {
                    mats.truncate(3000);
                }
            }
            for m in &mats {
                for p in &m.entries {
                    for (_, c) in p.terms() {
                        if let Coeff::Int(v) = c {
                            assert!(v.abs().to_biguint().unwrap() <= bound, "n = {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degree_bound_on_words() {
        // degrees of entries of products of 2n cleared matrices stay <= 2nm
        let g = MatGroup::from_spec(&lamplighter_spec()).unwrap();
        let b = g.bounds();
        let ring = &g.ring;
        for n in 1usize..=3 {
            let mut mats = vec![PolyMatrix::identity(g.d, g.k, ring)];
            for _ in 0..(2 * n) {
                let mut next = Vec::new();
                for m in &mats {
                    for t in &g.cleared.t_mats {
                        next.push(m.mul(t, ring));
                    }
                }
                mats = next;
                if mats.len() > 2000 {
                    mats.truncate(2000);
                }
            }
            for m in &mats {
                for p in &m.entries {
                    assert!(u64::from(p.max_degree_per_var()) <= 2 * n as u64 * b.m);
                }
            }
        }
    }

    #[test]
    fn reduction_is_homomorphism() {
        let g = MatGroup::from_spec(&lamplighter_spec()).unwrap();
        let base = g.base_field.clone().unwrap();
        // extend F_2 by the first cubic irreducible; send t1 to the generator
        let modulus = enumerate_monic_irreducibles(&base, 3).next().unwrap();
        let f8 = base.extend(&modulus).unwrap();
        let a = f8.generator().unwrap();
        let red = make_reduction(&g, &f8, &[a]).unwrap();
        let ball = enumerate_ball(&g, 3, 10_000).unwrap();
        let ring = &g.ring;
        for x in ball.elements.iter().take(10) {
            for y in ball.elements.iter().take(10) {
                let xy = x.mul(y, ring).canonicalize(&g.cleared.d_poly, ring);
                let img = red.reduce_element(&xy).unwrap();
                let prod = red.mat_mul(
                    &red.reduce_element(x).unwrap(),
                    &red.reduce_element(y).unwrap(),
                    g.d,
                );
                assert_eq!(img, prod);
            }
        }
    }

    #[test]
    fn reduction_rejects_vanishing_denominator() {
        let g = MatGroup::from_spec(&lamplighter_spec()).unwrap();
        let base = g.base_field.clone().unwrap();
        // t1 -> 0 kills the denominator t1
        assert!(matches!(
            make_reduction(&g, &base, &[base.zero()]),
            Err(Error::DenominatorVanishes)
        ));
    }

    #[test]
    fn ball_is_inverse_closed() {
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        let ball = enumerate_ball(&g, 2, 10_000).unwrap();
        let ring = &g.ring;
        let ident = GroupElement::identity(g.d, g.k, ring);
        for x in &ball.elements {
            let has_inverse = ball
                .elements
                .iter()
                .any(|y| x.mul(y, ring).canonicalize(&g.cleared.d_poly, ring) == ident);
            assert!(has_inverse);
        }
    }

    #[test]
    fn ball_nesting() {
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        let b3 = enumerate_ball(&g, 3, 10_000).unwrap();
        let b2 = enumerate_ball(&g, 2, 10_000).unwrap();
        assert!(b2.levels[2] <= b3.levels[3]);
        for x in &b2.elements {
            assert!(b3.index.contains_key(x));
        }
        // prefix determinism: discovery order agrees on the smaller ball
        for (i, x) in b2.elements.iter().enumerate() {
            assert_eq!(b3.elements[i], *x);
        }
    }

    #[test]
    fn budget_enforced() {
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        assert!(matches!(
            enumerate_ball(&g, 5, 10),
            Err(Error::BallBudgetExceeded(10))
        ));
    }

    #[test]
    fn spec_validation_errors() {
        let mut bad = heisenberg_spec();
        bad.characteristic = 6;
        assert!(matches!(
            MatGroup::from_spec(&bad),
            Err(Error::BadCharacteristic)
        ));

        let mut bad = heisenberg_spec();
        bad.generators[0].pop();
        assert!(matches!(
            MatGroup::from_spec(&bad),
            Err(Error::NonSquareMatrix(3))
        ));

        let mut bad = unipotent_z_spec();
        bad.generators = vec![vec![
            vec!["1".into(), "1".into()],
            vec!["1".into(), "1".into()],
        ]];
        assert!(matches!(
            MatGroup::from_spec(&bad),
            Err(Error::SingularGenerator)
        ));

        let mut bad = lamplighter_spec();
        bad.q = Some(6);
        assert!(matches!(
            MatGroup::from_spec(&bad),
            Err(Error::SchemaError(_))
        ));
    }

    #[test]
    fn rational_inverse_roundtrip() {
        let g = MatGroup::from_spec(&heisenberg_spec()).unwrap();
        let ring = &g.ring;
        let ident = RatMatrix::identity(g.d, g.k, ring);
        for m in &g.sym_gens {
            let inv = m.inverse(ring).unwrap();
            assert!(m.mul(&inv, ring).semantic_eq(&ident, ring));
        }
    }
}
