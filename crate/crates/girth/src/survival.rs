//! Finding small quotient fields in which given nonzero polynomials
//! survive (keep a nonzero image), with explicit cardinality guarantees:
//! order <= 2*deg(P)*q in the univariate case and <= (2n)^k*q per variable
//! in the multivariate case.

use crate::error::{Error, Result};
use crate::galois::{Elem, TowerField};
use crate::poly::{enumerate_monic_irreducibles, CoeffRing, MultiPoly, UniPoly};
use num_bigint::BigUint;

/// One extension step chosen during survival: which variable was
/// specialized, the degree m of the modulus used, and the modulus itself
/// (None when the step was an in-field evaluation at a degree-1 root).
#[derive(Clone, Debug)]
pub struct SurvivalStep {
    pub var: usize,
    pub degree: usize,
    pub modulus: Option<UniPoly>,
}

/// A specialization t_i -> alpha_i into a tower extension of the source
/// field, together with the per-step choices that produced it.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub k: usize,
    pub source: TowerField,
    pub target: TowerField,
    pub assign: Vec<Elem>,
    pub steps: Vec<SurvivalStep>,
}

impl Specialization {
    /// The identity specialization with no variables.
    pub fn trivial(field: &TowerField) -> Specialization {
        Specialization {
            k: 0,
            source: field.clone(),
            target: field.clone(),
            assign: Vec::new(),
            steps: Vec::new(),
        }
    }

    /// Image of a polynomial over the source field under this specialization.
    pub fn apply(&self, p: &MultiPoly) -> Result<Elem> {
        p.evaluate(&self.assign, &self.source, &self.target)
    }
}

/// Univariate core, generalized to a list: find the lowest-degree monic
/// irreducible (in canonical enumeration order) dividing none of the given
/// nonzero polynomials, and evaluate them at its root. Degree-1 moduli are
/// in-field evaluations; higher degrees extend the tower.
///
/// Returns (field after this step, root, step record).
fn survive_uni_core(
    polys: &[UniPoly],
    field: &TowerField,
    var: usize,
) -> (TowerField, Elem, SurvivalStep) {
    debug_assert!(polys.iter().all(|p| !p.is_zero()));
    for m in 1.. {
        for modulus in enumerate_monic_irreducibles(field, m) {
            let divides_some = polys
                .iter()
                .any(|p| p.degree().map_or(false, |d| d >= m) && p.divisible_by(&modulus, field));
            if divides_some {
                continue;
            }
            if m == 1 {
                // x + c has root -c; stay inside the current field
                let root = field.neg(modulus.coeff(0));
                return (
                    field.clone(),
                    root,
                    SurvivalStep {
                        var,
                        degree: 1,
                        modulus: None,
                    },
                );
            }
            let ext = field.extend(&modulus).expect("modulus is irreducible");
            let root = ext.generator().expect("extension has a generator");
            return (
                ext,
                root,
                SurvivalStep {
                    var,
                    degree: m,
                    modulus: Some(modulus),
                },
            );
        }
    }
    unreachable!("some degree always admits a fresh irreducible")
}

/// The survival bound for a univariate polynomial of degree d over a field
/// of order q: 2 * max(d, 1) * q.
pub fn univariate_bound(deg: usize, q: &BigUint) -> BigUint {
    BigUint::from(2 * deg.max(1)) * q
}

/// The survival bound for k variables of per-variable degree <= n over a
/// field of order q: (2 * max(n, 1))^k * q.
pub fn multivariate_bound(n: u64, k: usize, q: &BigUint) -> BigUint {
    BigUint::from(2 * n.max(1)).pow(k as u32) * q
}

/// A nonzero univariate polynomial survives in a quotient field of F[t] of
/// order <= 2*deg(P)*q. Returns the specialization (as a 1-variable
/// assignment) and the nonzero image.
pub fn survive_univariate(
    p: &UniPoly,
    field: &TowerField,
) -> Result<(Specialization, Elem)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        // nonzero constant: survives in F itself with t -> 0
        let spec = Specialization {
            k: 1,
            source: field.clone(),
            target: field.clone(),
            assign: vec![field.zero()],
            steps: vec![SurvivalStep {
                var: 0,
                degree: 1,
                modulus: None,
            }],
        };
        let image = p.coeff(0).clone();
        return Ok((spec, image));
    }
    let (target, root, step) = survive_uni_core(std::slice::from_ref(p), field, 0);
    // evaluate p at the root inside the (possibly extended) field
    let lifted = UniPoly::from_coeffs(
        &target,
        p.coeffs()
            .iter()
            .map(|c| target.embed_from(field.height(), c))
            .collect(),
    );
    let image = lifted.evaluate(&root, &target);
    debug_assert!(!target.is_zero(&image));
    let spec = Specialization {
        k: 1,
        source: field.clone(),
        target,
        assign: vec![root],
        steps: vec![step],
    };
    debug_assert!(
        spec.target.order() <= &univariate_bound(p.degree().unwrap(), field.order()),
        "univariate survival exceeded its bound"
    );
    Ok((spec, image))
}

/// Simultaneous survival of a list of nonzero polynomials in t_1..t_k over
/// `field` under a single specialization.
///
/// Recursion on the number of variables: each polynomial is decomposed in
/// the last variable and its lowest nonzero component is kept (lowest
/// t_k-order terms multiply, so this list plays the role of the lowest
/// nonzero component of the product); after the recursive assignment of
/// t_1..t_{k-1}, every image in L[t_k] is nonzero and the univariate core
/// finishes t_k. Surviving the whole list is equivalent to surviving the
/// product of its members.
pub fn survive_list(polys: &[MultiPoly], field: &TowerField, k: usize) -> Result<Specialization> {
    if polys.iter().any(|p| p.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    if k == 0 {
        return Ok(Specialization::trivial(field));
    }
    // Lowest nonzero component of each polynomial in t_k.
    let mut lowered: Vec<MultiPoly> = Vec::with_capacity(polys.len());
    for p in polys {
        debug_assert_eq!(p.num_vars(), k);
        let comps = p.decompose_last_variable()?;
        let low = comps
            .into_iter()
            .find(|c| !c.is_zero())
            .expect("nonzero polynomial has a nonzero component");
        lowered.push(low);
    }
    let inner = survive_list(&lowered, field, k - 1)?;
    // Map each polynomial into L[t_k] via the inner assignment.
    let mut images: Vec<UniPoly> = Vec::with_capacity(polys.len());
    let target = inner.target.clone();
    for p in polys {
        let mut assign: Vec<Option<Elem>> = inner.assign.iter().cloned().map(Some).collect();
        assign.push(None);
        let partial = p.specialize(&assign, field, &target)?;
        let comps = partial.decompose_last_variable()?;
        let ring = CoeffRing::Fq(target.clone());
        let coeffs: Vec<Elem> = comps
            .iter()
            .map(|c| match c.as_constant(&ring) {
                Some(crate::poly::Coeff::Fq(e)) => e,
                _ => unreachable!("all other variables are assigned"),
            })
            .collect();
        let uni = UniPoly::from_coeffs(&target, coeffs);
        debug_assert!(!uni.is_zero(), "image must stay nonzero");
        images.push(uni);
    }
    // Constants survive automatically; only positive-degree images constrain
    // the choice of modulus.
    let constrained: Vec<UniPoly> = images
        .iter()
        .filter(|p| p.degree().map_or(false, |d| d >= 1))
        .cloned()
        .collect();
    let (final_field, root, step) = if constrained.is_empty() {
        (
            target.clone(),
            target.zero(),
            SurvivalStep {
                var: k - 1,
                degree: 1,
                modulus: None,
            },
        )
    } else {
        survive_uni_core(&constrained, &target, k - 1)
    };
    let mut assign: Vec<Elem> = inner
        .assign
        .iter()
        .map(|e| final_field.embed_from(target.height(), e))
        .collect();
    assign.push(root);
    let mut steps = inner.steps;
    steps.push(step);
    Ok(Specialization {
        k,
        source: field.clone(),
        target: final_field,
        assign,
        steps,
    })
}

/// A nonzero multivariate polynomial with per-variable degree <= n survives
/// in a quotient field of order <= (2n)^k * q.
pub fn survive_multivariate(
    p: &MultiPoly,
    field: &TowerField,
    n: u64,
) -> Result<(Specialization, Elem)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    debug_assert!(u64::from(p.max_degree_per_var()) <= n.max(1));
    let spec = survive_list(std::slice::from_ref(p), field, p.num_vars())?;
    let image = spec.apply(p)?;
    debug_assert!(!spec.target.is_zero(&image));
    debug_assert!(
        spec.target.order() <= &multivariate_bound(n, p.num_vars(), field.order()),
        "multivariate survival exceeded its bound"
    );
    Ok((spec, image))
}
