//! Certified finite quotients in which word balls inject, empirical
//! minimal-quotient search, and growth-exponent fitting.

use crate::error::{Error, Result};
use crate::galois::{Elem, TowerField};
use crate::matgroup::{make_reduction, Ball, MatGroup, Reduction};
use crate::numbers::{find_prime_in_interval, is_prime_u64, next_prime_u64};
use crate::poly::{enumerate_monic_irreducibles, MultiPoly};
use crate::survival::{survive_list, Specialization};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{HashMap, HashSet};

/// A certified finite quotient: the radius-n ball injects into GL_d over
/// `reduction.field`, with the stated theory bounds on the cardinalities.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: usize,
    /// |S^n|.
    pub ball_size: usize,
    /// The prime chosen in characteristic 0.
    pub prime: Option<BigUint>,
    /// The prime-search interval actually used.
    pub interval: Option<(BigUint, BigUint)>,
    /// Cardinality of the quotient field.
    pub field_order: BigUint,
    /// Certified upper bound on the quotient field cardinality.
    pub field_bound: BigUint,
    /// |GL_d| over the quotient field.
    pub gl_order: BigUint,
    /// Certified upper bound on the quotient group order: field_bound^(d^2).
    pub gl_bound: BigUint,
    /// Result of the explicit pairwise verification on S^n.
    pub injective: bool,
    /// The variable assignment chosen by the survival search, if any.
    pub specialization: Option<Specialization>,
    pub reduction: Reduction,
}

/// An empirically minimal congruence quotient in which S^n injects.
#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub n: usize,
    pub ball_size: usize,
    /// The scan parameter: the prime (characteristic 0 without variables)
    /// or the field order (field scan).
    pub param: BigUint,
    pub field_order: BigUint,
    /// Order of the image group: exact when the closure fit in the budget,
    /// otherwise |GL_d| over the field as an upper bound.
    pub image_order: BigUint,
    pub image_exact: bool,
    pub reduction: Reduction,
}

/// |GL_d(F_q)| = prod_{i=0}^{d-1} (q^d - q^i).
pub fn general_linear_order(d: usize, q: &BigUint) -> BigUint {
    let qd = q.pow(d as u32);
    let mut acc = BigUint::one();
    for i in 0..d {
        acc *= &qd - q.pow(i as u32);
    }
    acc
}

/// The certified field-cardinality bound q * (4 d^2 m n s^(2n) + 2 delta)^k,
/// where q is the order of the coefficient field the survival search runs
/// over (the base field in characteristic p, the chosen prime otherwise).
pub fn field_cardinality_bound(group: &MatGroup, n: u64, q: &BigUint) -> BigUint {
    let b = group.bounds();
    let d2 = BigUint::from(group.d as u64 * group.d as u64);
    let inner = BigUint::from(4u32) * d2 * b.m * n * BigUint::from(b.s).pow(2 * n as u32)
        + BigUint::from(2 * b.delta);
    q * inner.pow(group.k as u32)
}

/// The coefficient bound B_n = d^(2n-1) * (R*M)^(2n) on entries of products
/// of 2n cleared generator matrices (characteristic 0).
pub fn coefficient_bound(group: &MatGroup, n: u64) -> BigUint {
    let b = group.bounds();
    BigUint::from(group.d as u64).pow(2 * n as u32 - 1)
        * (b.coeff_bound * b.terms_bound).pow(2 * n as u32)
}

/// Nonzero polynomials whose joint survival under a specialization makes
/// the radius-n ball inject: the denominator polynomial (if non-constant)
/// plus, for every non-identity element D^{-e} W of the radius-2n ball, the
/// nonzero entries of W - D^e I. When `uniform` is set, every element is
/// rescaled to the common denominator power 2n*lambda first, which keeps
/// integer coefficients within the certified bound B_n in characteristic 0.
pub fn constraint_polynomials(
    group: &MatGroup,
    ball: &Ball,
    n: usize,
    uniform: bool,
) -> Vec<MultiPoly> {
    let cg = &group.cleared;
    let ring = &cg.ring;
    let one = MultiPoly::one(cg.k, ring);
    let mut seen: HashSet<MultiPoly> = HashSet::new();
    let mut out: Vec<MultiPoly> = Vec::new();
    let push = |p: MultiPoly, seen: &mut HashSet<MultiPoly>, out: &mut Vec<MultiPoly>| {
        if !p.is_zero() && seen.insert(p.clone()) {
            out.push(p);
        }
    };
    if cg.q_poly != one {
        push(cg.q_poly.clone(), &mut seen, &mut out);
    }
    let uniform_pow = 2 * n as u32 * cg.lambda;
    let mut dpow_cache: HashMap<u32, MultiPoly> = HashMap::new();
    let dpow = |e: u32, cache: &mut HashMap<u32, MultiPoly>| -> MultiPoly {
        cache
            .entry(e)
            .or_insert_with(|| cg.d_poly.pow(e, ring))
            .clone()
    };
    for g in &ball.elements[1..ball.levels[2 * n]] {
        let (e, entries) = if uniform {
            debug_assert!(g.denom_pow <= uniform_pow);
            let scale = dpow(uniform_pow - g.denom_pow, &mut dpow_cache);
            let scaled: Vec<MultiPoly> = g
                .mat
                .entries
                .iter()
                .map(|p| p.mul(&scale, ring))
                .collect();
            (uniform_pow, scaled)
        } else {
            (g.denom_pow, g.mat.entries.clone())
        };
        let diag = dpow(e, &mut dpow_cache);
        let d = g.mat.d;
        for i in 0..d {
            for j in 0..d {
                let entry = &entries[i * d + j];
                let diff = if i == j {
                    entry.sub(&diag, ring)
                } else {
                    entry.clone()
                };
                push(diff, &mut seen, &mut out);
            }
        }
    }
    out
}

/// Explicit pairwise check that the radius-n ball maps injectively.
pub fn verify_injectivity(red: &Reduction, ball: &Ball, n: usize) -> Result<bool> {
    let mut seen = HashSet::new();
    for g in &ball.elements[..ball.levels[n]] {
        if !seen.insert(red.reduce_element(g)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Kernel criterion: no non-identity element of the radius-`radius` ball
/// maps to the identity. With radius = 2n this is equivalent to the
/// pairwise criterion on the radius-n ball.
pub fn kernel_trivial(red: &Reduction, ball: &Ball, radius: usize) -> Result<bool> {
    let d = ball.elements[0].mat.d;
    let ident = red.identity_matrix(d);
    for g in &ball.elements[1..ball.levels[radius]] {
        if red.reduce_element(g)? == ident {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certify injectivity of the radius-n ball in positive characteristic:
/// survival of the constraint polynomials over the base field yields a
/// quotient field of cardinality at most field_cardinality_bound.
pub fn certify_char_p(group: &MatGroup, ball: &Ball, n: usize) -> Result<Certificate> {
    assert!(group.characteristic > 0);
    assert!(ball.levels.len() > 2 * n, "ball radius must be at least 2n");
    let base = group
        .base_field
        .clone()
        .expect("char p group has a base field");
    let cons = constraint_polynomials(group, ball, n, false);
    let spec = survive_list(&cons, &base, group.k)?;
    let red = make_reduction(group, &spec.target, &spec.assign)?;
    let injective = verify_injectivity(&red, ball, n)?;
    let field_order = spec.target.order().clone();
    let field_bound = field_cardinality_bound(group, n as u64, base.order());
    let gl_order = general_linear_order(group.d, &field_order);
    let gl_bound = field_bound.pow((group.d * group.d) as u32);
    Ok(Certificate {
        n,
        ball_size: ball.levels[n],
        prime: None,
        interval: None,
        field_order,
        field_bound,
        gl_order,
        gl_bound,
        injective,
        specialization: Some(spec),
        reduction: red,
    })
}

/// Certify injectivity of the radius-n ball in characteristic 0: choose a
/// prime in [2 B_n, 4 B_n] (doubling the upper end if side conditions
/// exhaust it), reduce mod p, and — when indeterminates are present — run
/// the survival search over F_p.
pub fn certify_char_zero(group: &MatGroup, ball: &Ball, n: usize) -> Result<Certificate> {
    assert_eq!(group.characteristic, 0);
    assert!(ball.levels.len() > 2 * n, "ball radius must be at least 2n");
    let b_n = coefficient_bound(group, n as u64);
    let lo = BigUint::from(2u32) * &b_n;
    let mut hi = BigUint::from(4u32) * &b_n;
    let cons = constraint_polynomials(group, ball, n, true);
    let mut cursor = lo.clone();
    loop {
        let p = match find_prime_in_interval(&cursor, &hi) {
            Ok(p) => p,
            Err(_) => {
                // side conditions rejected every prime: widen the window
                cursor = &hi + 1u32;
                hi = &hi * 2u32;
                continue;
            }
        };
        cursor = &p + 1u32;
        if (&group.cleared.r % &p).is_zero() {
            continue;
        }
        let p_small = match p.to_u64() {
            Some(v) => v,
            None => return Err(Error::PrimeTooLarge(p.to_string())),
        };
        let fp = TowerField::prime_field(p_small)?;
        let (spec, red) = if group.k == 0 {
            match make_reduction(group, &fp, &[]) {
                Ok(r) => (None, r),
                Err(Error::DenominatorVanishes) => continue,
                Err(e) => return Err(e),
            }
        } else {
            let cons_p: Vec<MultiPoly> = cons.iter().map(|c| c.int_to_field(&fp)).collect();
            if cons_p.iter().any(|c| c.is_zero()) {
                continue;
            }
            let spec = survive_list(&cons_p, &fp, group.k)?;
            match make_reduction(group, &spec.target, &spec.assign) {
                Ok(r) => (Some(spec), r),
                Err(Error::DenominatorVanishes) => continue,
                Err(e) => return Err(e),
            }
        };
        if !verify_injectivity(&red, ball, n)? {
            continue;
        }
        let field_order = red.field.order().clone();
        let field_bound = field_cardinality_bound(group, n as u64, &p);
        let gl_order = general_linear_order(group.d, &field_order);
        let gl_bound = field_bound.pow((group.d * group.d) as u32);
        return Ok(Certificate {
            n,
            ball_size: ball.levels[n],
            prime: Some(p),
            interval: Some((lo, hi)),
            field_order,
            field_bound,
            gl_order,
            gl_bound,
            injective: true,
            specialization: spec,
            reduction: red,
        });
    }
}

/// Order of the image group: closure of the reduced generators under
/// multiplication, falling back to |GL_d| over the field (as an upper
/// bound) once the closure exceeds `budget` elements.
pub fn image_order(
    group: &MatGroup,
    red: &Reduction,
    budget: u64,
) -> Result<(BigUint, bool)> {
    let d = group.d;
    let mut gens: Vec<Vec<Elem>> = Vec::new();
    for g in &group.cleared.gens {
        let m = red.reduce_element(g)?;
        if !gens.contains(&m) {
            gens.push(m);
        }
    }
    let ident = red.identity_matrix(d);
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    seen.insert(ident.clone());
    let mut frontier = vec![ident];
    while let Some(m) = frontier.pop() {
        for g in &gens {
            let prod = red.mat_mul(&m, g, d);
            if !seen.contains(&prod) {
                if seen.len() as u64 >= budget {
                    return Ok((general_linear_order(d, red.field.order()), false));
                }
                seen.insert(prod.clone());
                frontier.push(prod);
            }
        }
    }
    Ok((BigUint::from(seen.len() as u64), true))
}

/// Candidate quotient fields in ascending order of cardinality, for the
/// field-scan probe. In characteristic p these are the extensions of the
/// base field by the first canonical irreducible of each degree; in
/// characteristic 0 they are all prime-power fields whose characteristic
/// does not divide the integer denominator r.
fn candidate_field(group: &MatGroup, idx: &mut u64) -> Result<TowerField> {
    if let Some(base) = &group.base_field {
        *idx += 1;
        let e = *idx as usize;
        if e == 1 {
            return Ok(base.clone());
        }
        let modulus = enumerate_monic_irreducibles(base, e)
            .next()
            .expect("irreducibles exist in every degree");
        base.extend(&modulus)
    } else {
        loop {
            *idx += 1;
            let m = *idx;
            if m < 2 {
                continue;
            }
            // m must be a prime power p^e
            let mut p = 0u64;
            let mut f = 2u64;
            let mut rest = m;
            while f * f <= rest {
                if rest % f == 0 {
                    p = f;
                    break;
                }
                f += 1;
            }
            if p == 0 {
                p = rest;
            }
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if rest != 1 {
                continue;
            }
            if (&group.cleared.r % p).is_zero() {
                continue;
            }
            let prime = TowerField::prime_field(p)?;
            if e == 1 {
                return Ok(prime);
            }
            let modulus = enumerate_monic_irreducibles(&prime, e as usize)
                .next()
                .expect("irreducibles exist in every degree");
            return prime.extend(&modulus);
        }
    }
}

/// Scan all variable assignments over `field` in odometer order (t_1
/// varying fastest) for one making the radius-n ball inject.
fn scan_assignments(
    group: &MatGroup,
    field: &TowerField,
    ball: &Ball,
    n: usize,
) -> Result<Option<Reduction>> {
    let elems: Vec<Elem> = field.enumerate_elements().collect();
    let k = group.k;
    let mut digits = vec![0usize; k];
    loop {
        let assign: Vec<Elem> = digits.iter().map(|&i| elems[i].clone()).collect();
        match make_reduction(group, field, &assign) {
            Ok(red) => {
                if verify_injectivity(&red, ball, n)? {
                    return Ok(Some(red));
                }
            }
            Err(Error::DenominatorVanishes) => {}
            Err(e) => return Err(e),
        }
        // odometer increment, t_1 fastest
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(None);
            }
            digits[pos] += 1;
            if digits[pos] < elems.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if k == 0 {
            return Ok(None);
        }
    }
}

/// Find the empirically smallest congruence quotient in which the radius-n
/// ball injects. Characteristic 0 without indeterminates scans primes
/// ascending (starting from `hint` when given); otherwise candidate fields
/// are scanned in ascending order of cardinality with all assignments
/// tried per field. `budget` caps the scan; `closure_budget` caps the
/// image-order closure (the result falls back to the |GL_d| upper bound
/// with image_exact = false once exceeded).
pub fn probe_minimal_quotient(
    group: &MatGroup,
    ball: &Ball,
    n: usize,
    hint: Option<u64>,
    budget: u64,
    closure_budget: u64,
) -> Result<ProbeResult> {
    assert!(ball.levels.len() > n, "ball radius must be at least n");
    if group.characteristic == 0 && group.k == 0 {
        let mut p = hint.unwrap_or(2).max(2);
        if !is_prime_u64(p) {
            p = next_prime_u64(p);
        }
        let mut attempts = 0u64;
        loop {
            attempts += 1;
            if attempts > budget {
                return Err(Error::SearchBudgetExceeded(budget));
            }
            if !(&group.cleared.r % p).is_zero() {
                let fp = TowerField::prime_field(p)?;
                if let Ok(red) = make_reduction(group, &fp, &[]) {
                    if verify_injectivity(&red, ball, n)? {
                        let (order, exact) = image_order(group, &red, closure_budget)?;
                        return Ok(ProbeResult {
                            n,
                            ball_size: ball.levels[n],
                            param: BigUint::from(p),
                            field_order: fp.order().clone(),
                            image_order: order,
                            image_exact: exact,
                            reduction: red,
                        });
                    }
                }
            }
            p = next_prime_u64(p);
        }
    }
    // field scan
    let mut idx = 0u64;
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        if attempts > budget {
            return Err(Error::SearchBudgetExceeded(budget));
        }
        let field = candidate_field(group, &mut idx)?;
        if let Some(red) = scan_assignments(group, &field, ball, n)? {
            let (order, exact) = image_order(group, &red, closure_budget)?;
            return Ok(ProbeResult {
                n,
                ball_size: ball.levels[n],
                param: field.order().clone(),
                field_order: field.order().clone(),
                image_order: order,
                image_exact: exact,
                reduction: red,
            });
        }
    }
}

/// Natural logarithm of a positive big integer, accurate enough for slope
/// fits on astronomically large values.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Least-squares slope of ln(value) against ln(n) over the window
/// lo <= n <= hi; needs at least three points with distinct n.
pub fn fit_growth_exponent(rows: &[(u64, BigUint)], lo: u64, hi: u64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(n, _)| *n >= lo.max(1) && *n <= hi)
        .map(|(n, v)| ((*n as f64).ln(), big_ln(v)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::DegenerateWindow);
    }
    let count = pts.len() as f64;
    let mean_x = pts.iter().map(|(x, _)| x).sum::<f64>() / count;
    let mean_y = pts.iter().map(|(_, y)| y).sum::<f64>() / count;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = pts
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateWindow);
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{enumerate_ball, GroupSpec};

    fn group(spec: GroupSpec) -> MatGroup {
        MatGroup::from_spec(&spec).unwrap()
    }

    fn heisenberg() -> MatGroup {
        group(GroupSpec {
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
        })
    }

    fn unipotent_z() -> MatGroup {
        group(GroupSpec {
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
        })
    }

    fn lamplighter() -> MatGroup {
        group(GroupSpec {
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
        })
    }

    fn z_wr_z() -> MatGroup {
        group(GroupSpec {
            name: "z_wr_z".into(),
            d: 2,
            characteristic: 0,
            q: None,
            k: 1,
            generators: vec![
                vec![vec!["t1".into(), "0".into()], vec!["0".into(), "1".into()]],
                vec![vec!["1".into(), "1".into()], vec!["0".into(), "1".into()]],
            ],
            auto_symmetrize: true,
        })
    }

    #[test]
    fn gl_orders() {
        assert_eq!(
            general_linear_order(2, &BigUint::from(2u32)),
            BigUint::from(6u32)
        );
        assert_eq!(
            general_linear_order(3, &BigUint::from(2u32)),
            BigUint::from(168u32)
        );
        assert_eq!(
            general_linear_order(2, &BigUint::from(3u32)),
            BigUint::from(48u32)
        );
    }

    #[test]
    fn certify_unipotent_z_first_prime() {
        let g = unipotent_z();
        let ball = enumerate_ball(&g, 2, 10_000).unwrap();
        let cert = certify_char_zero(&g, &ball, 1).unwrap();
        // B_1 = 2, interval [4, 8], first prime 5
        assert_eq!(coefficient_bound(&g, 1), BigUint::from(2u32));
        assert_eq!(cert.prime, Some(BigUint::from(5u32)));
        assert_eq!(
            cert.interval,
            Some((BigUint::from(4u32), BigUint::from(8u32)))
        );
        assert!(cert.injective);
        assert_eq!(cert.field_order, BigUint::from(5u32));
    }

    #[test]
    fn certify_heisenberg_first_prime() {
        let g = heisenberg();
        let ball = enumerate_ball(&g, 2, 10_000).unwrap();
        let cert = certify_char_zero(&g, &ball, 1).unwrap();
        // B_1 = 3, interval [6, 12], first prime 7
        assert_eq!(coefficient_bound(&g, 1), BigUint::from(3u32));
        assert_eq!(cert.prime, Some(BigUint::from(7u32)));
        assert!(cert.injective);
        assert!(cert.gl_order <= cert.gl_bound);
    }

    #[test]
    fn certify_lamplighter_char_p() {
        let g = lamplighter();
        for n in 1..=3usize {
            let ball = enumerate_ball(&g, 2 * n, 100_000).unwrap();
            let cert = certify_char_p(&g, &ball, n).unwrap();
            assert!(cert.injective, "n = {n}");
            assert!(cert.field_order <= cert.field_bound, "n = {n}");
            assert!(cert.gl_order <= cert.gl_bound, "n = {n}");
        }
    }

    #[test]
    fn certify_z_wr_z_char_zero() {
        let g = z_wr_z();
        let ball = enumerate_ball(&g, 4, 100_000).unwrap();
        for n in 1..=2usize {
            let cert = certify_char_zero(&g, &ball, n).unwrap();
            assert!(cert.injective, "n = {n}");
            let p = cert.prime.clone().unwrap();
            let (lo, hi) = cert.interval.clone().unwrap();
            assert!(lo <= p && p <= hi, "n = {n}");
            assert!(cert.field_order <= cert.field_bound, "n = {n}");
        }
    }

    #[test]
    fn probe_examples() {
        let g = heisenberg();
        let ball = enumerate_ball(&g, 1, 10_000).unwrap();
        let r = probe_minimal_quotient(&g, &ball, 1, None, 100_000, 100_000).unwrap();
        // mod 2 the two unipotent generators collide with their inverses
        assert_eq!(r.param, BigUint::from(3u32));
        assert!(r.image_exact);
        assert_eq!(r.image_order, BigUint::from(27u32));

        let g = unipotent_z();
        let ball = enumerate_ball(&g, 3, 10_000).unwrap();
        let r1 = probe_minimal_quotient(&g, &ball, 1, None, 100_000, 100_000).unwrap();
        assert_eq!(r1.param, BigUint::from(3u32));
        let r3 = probe_minimal_quotient(&g, &ball, 3, None, 100_000, 100_000).unwrap();
        assert_eq!(r3.param, BigUint::from(7u32));
        assert_eq!(r3.image_order, BigUint::from(7u32));
    }

    #[test]
    fn probe_hint_agrees_with_cold_scan() {
        let g = unipotent_z();
        let ball = enumerate_ball(&g, 5, 10_000).unwrap();
        let cold = probe_minimal_quotient(&g, &ball, 5, None, 100_000, 100_000).unwrap();
        let hinted = probe_minimal_quotient(&g, &ball, 5, Some(7), 100_000, 100_000).unwrap();
        assert_eq!(cold.param, hinted.param);
        assert_eq!(cold.param, BigUint::from(11u32));
    }

    #[test]
    fn probe_field_scan_lamplighter() {
        let g = lamplighter();
        let ball = enumerate_ball(&g, 2, 10_000).unwrap();
        let r = probe_minimal_quotient(&g, &ball, 1, None, 100_000, 100_000).unwrap();
        // some finite field extension of F_2 admits an injective reduction
        assert!(r.field_order >= BigUint::from(2u32));
        assert!(verify_injectivity(&r.reduction, &ball, 1).unwrap());
        // minimality: no strictly smaller candidate field works
        let mut idx = 0u64;
        loop {
            let f = candidate_field(&g, &mut idx).unwrap();
            if f.order() >= &r.field_order {
                break;
            }
            assert!(scan_assignments(&g, &f, &ball, 1).unwrap().is_none());
        }
    }

    #[test]
    fn pairwise_and_kernel_criteria_agree() {
        let g = unipotent_z();
        let ball = enumerate_ball(&g, 4, 10_000).unwrap();
        for p in [2u64, 3, 5, 7, 11] {
            let fp = TowerField::prime_field(p).unwrap();
            let red = make_reduction(&g, &fp, &[]).unwrap();
            assert_eq!(
                verify_injectivity(&red, &ball, 2).unwrap(),
                kernel_trivial(&red, &ball, 4).unwrap(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn constraint_survival_implies_injectivity() {
        let g = lamplighter();
        let ball = enumerate_ball(&g, 4, 100_000).unwrap();
        let cons = constraint_polynomials(&g, &ball, 2, false);
        let base = g.base_field.clone().unwrap();
        let spec = survive_list(&cons, &base, 1).unwrap();
        let red = make_reduction(&g, &spec.target, &spec.assign).unwrap();
        assert!(kernel_trivial(&red, &ball, 4).unwrap());
        assert!(verify_injectivity(&red, &ball, 2).unwrap());
    }

    #[test]
    fn fit_recovers_exact_power() {
        let rows: Vec<(u64, BigUint)> = (1..=20u64)
            .map(|n| (n, BigUint::from(n * n * n)))
            .collect();
        let slope = fit_growth_exponent(&rows, 2, 20).unwrap();
        assert!((slope - 3.0).abs() < 0.02, "slope = {slope}");
        assert!(matches!(
            fit_growth_exponent(&rows, 19, 20),
            Err(Error::DegenerateWindow)
        ));
    }

    #[test]
    fn big_ln_accuracy() {
        let x = BigUint::from(1u32) << 100;
        let expected = 100.0 * std::f64::consts::LN_2;
        assert!((big_ln(&x) - expected).abs() < 1e-9);
        let y = BigUint::from(1_000_000u64);
        assert!((big_ln(&y) - 1_000_000f64.ln()).abs() < 1e-12);
    }
}
