//! Class groups as ground truth for moment statistics: imaginary quadratic
//! function fields `F_q(t)(√f)` through hyperelliptic Jacobians, and
//! imaginary quadratic number fields through binary quadratic forms.
//!
//! Only prime `q` is supported, and genus at most 3.

use num_bigint::BigUint;

use crate::grp::AbelianStructure;
use crate::linalg::{factorize, valuation};

pub mod cantor;
pub mod curve;
pub mod moment;
pub mod nf;
pub mod poly;
pub mod sylow;

pub use cantor::{divclass_add, divclass_mul, divclass_neg, enumerate_classes, DivisorClass};
pub use curve::{enumerate_imaginary, imaginary_count, jacobian_order, l_polynomial, HyperellipticModel, LPolynomial};
pub use moment::{empirical_moment, MomentOptions, MomentReport, MomentRow, Weights};
pub use nf::nf_class_group;
pub use poly::FqPoly;
pub use sylow::{sylow_structure, SylowOptions, SylowResult};

/// `|Cl|` and the ℓ-parts that were determined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupStructure {
    pub order: BigUint,
    /// `(ℓ, Cl[ℓ^∞])`, ℓ increasing.
    pub parts: Vec<(u64, AbelianStructure)>,
}

impl ClassGroupStructure {
    /// The product of the recorded parts.
    pub fn structure(&self) -> AbelianStructure {
        let factors: Vec<u64> = self.parts.iter().flat_map(|(_, a)| a.factors().to_vec()).collect();
        AbelianStructure::from_cyclic(&factors)
    }

    pub fn part(&self, ell: u64) -> Option<&AbelianStructure> {
        self.parts.iter().find(|(p, _)| *p == ell).map(|(_, a)| a)
    }
}

/// The abelian `p`-group whose elements have the given orders (all powers of `p`).
///
/// The number of cyclic factors of order at least `p^j` is
/// `log_p |G[p^j]| − log_p |G[p^{j−1}]|`.
pub fn abelian_p_group(p: u64, orders: impl Iterator<Item = u64>) -> AbelianStructure {
    let mut hist: Vec<u64> = Vec::new();
    for o in orders {
        let j = valuation(o, p) as usize;
        if hist.len() <= j {
            hist.resize(j + 1, 0);
        }
        hist[j] += 1;
    }
    let mut torsion_log = vec![0u32];
    let mut acc = 0u64;
    for count in &hist {
        acc += count;
        torsion_log.push(valuation(acc, p));
    }
    // torsion_log[j + 1] = log_p |G[p^j]|
    let mut factors = Vec::new();
    let top = hist.len().saturating_sub(1);
    for j in 1..=top {
        let ge_j = torsion_log[j + 1] - torsion_log[j];
        let ge_next = if j < top { torsion_log[j + 2] - torsion_log[j + 1] } else { 0 };
        for _ in 0..ge_j - ge_next {
            factors.push(p.pow(j as u32));
        }
    }
    AbelianStructure::from_cyclic(&factors)
}

/// Structure of a finite abelian group of order `h` from the list of all element orders.
pub fn structure_from_orders(h: BigUint, orders: &[u64]) -> ClassGroupStructure {
    let n = orders.len() as u64;
    let parts = factorize(n)
        .into_iter()
        .map(|(p, _)| {
            let pk = p.pow(valuation(n, p));
            (p, abelian_p_group(p, orders.iter().filter(|&&o| pk % o == 0).copied()))
        })
        .collect();
    ClassGroupStructure { order: h, parts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_groups_from_orders() {
        // ℤ/4 × ℤ/2: orders 1, 2 (×3), 4 (×4)
        let a = abelian_p_group(2, [1, 2, 2, 2, 4, 4, 4, 4].into_iter());
        assert_eq!(a, AbelianStructure::from_cyclic(&[4, 2]));
        let c = abelian_p_group(3, [1, 3, 3, 3, 3, 3, 3, 3, 3].into_iter());
        assert_eq!(c, AbelianStructure::from_cyclic(&[3, 3]));
        assert!(abelian_p_group(5, [1].into_iter()).is_trivial());
    }
}
