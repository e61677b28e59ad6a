//! Polynomials: univariate over tower fields, sparse multivariate over
//! integers or tower fields, and the matrix-entry parser.

mod multi;
mod parse;
mod uni;

pub use multi::{Coeff, CoeffRing, MultiPoly};
pub use parse::parse_entry;
pub use uni::{count_irreducibles, enumerate_monic_irreducibles, is_irreducible, UniPoly};

/// A matrix entry: numerator / denominator, denominator nonzero.
/// Not reduced to lowest terms; equality is by cross-multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalEntry {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalEntry {
    pub fn from_poly(p: MultiPoly, ring: &CoeffRing) -> RationalEntry {
        let k = p.num_vars();
        RationalEntry {
            num: p,
            den: MultiPoly::one(k, ring),
        }
    }

    pub fn zero(k: usize, ring: &CoeffRing) -> RationalEntry {
        RationalEntry {
            num: MultiPoly::zero(k),
            den: MultiPoly::one(k, ring),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalEntry, ring: &CoeffRing) -> RationalEntry {
        RationalEntry {
            num: self
                .num
                .mul(&other.den, ring)
                .add(&other.num.mul(&self.den, ring), ring),
            den: self.den.mul(&other.den, ring),
        }
    }

    pub fn neg(&self, ring: &CoeffRing) -> RationalEntry {
        RationalEntry {
            num: self.num.neg(ring),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalEntry, ring: &CoeffRing) -> RationalEntry {
        self.add(&other.neg(ring), ring)
    }

    pub fn mul(&self, other: &RationalEntry, ring: &CoeffRing) -> RationalEntry {
        RationalEntry {
            num: self.num.mul(&other.num, ring),
            den: self.den.mul(&other.den, ring),
        }
    }

    /// Semantic equality over the fraction field.
    pub fn eq_rational(&self, other: &RationalEntry, ring: &CoeffRing) -> bool {
        self.num.mul(&other.den, ring) == other.num.mul(&self.den, ring)
    }
}
