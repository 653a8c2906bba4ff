//! Imaginary hyperelliptic models `y² = f(t)` with `deg f` odd, their zeta
//! functions and Jacobian orders.

use std::fmt;

use super::poly::{monic_polys, ExtField, FqPoly};
use crate::{Error, Result};

/// `y² = f(t)` over `F_q`, `q` an odd prime, `f` squarefree of degree `2g + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperellipticModel {
    pub f: FqPoly,
    pub genus: usize,
}

impl HyperellipticModel {
    pub fn new(f: FqPoly) -> Result<Self> {
        if f.q() == 2 {
            return Err(Error::validation("characteristic 2 is not supported"));
        }
        let d = f.degree();
        if d < 1 || d % 2 == 0 {
            return Err(Error::domain(format!("deg f = {d}; only odd degree (imaginary) models are supported")));
        }
        if !f.is_squarefree() {
            return Err(Error::validation(format!("f = {f} is not squarefree")));
        }
        Ok(HyperellipticModel { genus: (d as usize - 1) / 2, f })
    }

    pub fn q(&self) -> u64 {
        self.f.q()
    }
}

impl fmt::Display for HyperellipticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {} over F_{}", self.f, self.q())
    }
}

/// Smallest quadratic non-residue mod an odd prime.
pub fn nonresidue(q: u64) -> u64 {
    (2..q).find(|&c| crate::linalg::mod_pow(c, (q - 1) / 2, q) == q - 1).expect("odd primes have non-residues")
}

/// All imaginary quadratic extensions `F_q(t)(√f)` with `deg f = d`: each
/// squarefree `f` up to scaling by nonzero squares, represented by `f` monic
/// and by `c·f` with `c` the least non-residue.
pub fn enumerate_imaginary(q: u64, d: u32) -> Result<ImaginaryModels> {
    if q == 2 || !crate::linalg::is_prime(q) {
        return Err(Error::validation(format!("q = {q} must be an odd prime")));
    }
    if d.is_multiple_of(2) {
        return Err(Error::domain(format!("degree {d} is even: real and inert models are unsupported")));
    }
    let it: Box<dyn Iterator<Item = FqPoly> + Send> = Box::new(monic_polys(q, d).filter(|f| f.is_squarefree()));
    Ok(ImaginaryModels { inner: it, twist: nonresidue(q), pending: None })
}

/// Iterator returned by [`enumerate_imaginary`].
pub struct ImaginaryModels {
    inner: Box<dyn Iterator<Item = FqPoly> + Send>,
    twist: u64,
    pending: Option<FqPoly>,
}

impl Iterator for ImaginaryModels {
    type Item = HyperellipticModel;

    fn next(&mut self) -> Option<HyperellipticModel> {
        let f = match self.pending.take() {
            Some(f) => f,
            None => {
                let f = self.inner.next()?;
                self.pending = Some(f.scale(self.twist));
                f
            }
        };
        Some(HyperellipticModel { genus: (f.degree() as usize - 1) / 2, f })
    }
}

/// Expected number of models of degree `d`: `2(q^d − q^{d−1})` for `d ≥ 2`, `2q` for `d = 1`.
pub fn imaginary_count(q: u64, d: u32) -> u64 {
    if d == 1 {
        2 * q
    } else {
        2 * (q.pow(d) - q.pow(d - 1))
    }
}

/// `L(T) = Σ c_k T^k`, the numerator of the zeta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub q: u64,
    pub genus: usize,
    pub coeffs: Vec<i128>,
}

impl LPolynomial {
    /// `L(1)`, the order of the Jacobian over `F_q`.
    pub fn at_one(&self) -> i128 {
        self.coeffs.iter().sum()
    }

    /// `P(T) = q^g T^{2g} P(1/(qT))`.
    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.genus;
        (0..=2 * g).all(|k| {
            let (lo, hi) = if k <= g { (k, 2 * g - k) } else { (2 * g - k, k) };
            self.coeffs[hi] == self.coeffs[lo] * (self.q as i128).pow((g - lo) as u32)
        })
    }

    /// Power sums `S_k = Σ α_j^k` for `k = 1..=m`, from Newton's identities.
    pub fn power_sums(&self, m: usize) -> Vec<i128> {
        let c = |k: usize| self.coeffs.get(k).copied().unwrap_or(0);
        let mut s = vec![0i128; m + 1];
        for k in 1..=m {
            let mut acc = -(k as i128) * c(k);
            for j in 1..k {
                acc -= s[j] * c(k - j);
            }
            s[k] = acc;
        }
        s.remove(0);
        s
    }

    pub fn within_hasse_weil(&self) -> bool {
        let sq = (self.q as f64).sqrt();
        let g = self.genus as i32;
        let n = self.at_one() as f64;
        let slack = 1e-9 * (sq + 1.0).powi(2 * g);
        (sq - 1.0).powi(2 * g) - slack <= n && n <= (sq + 1.0).powi(2 * g) + slack
    }
}

/// Budget on `q^{g+1}` for the extra point count that cross-checks the L-polynomial.
const EXTRA_CHECK_FIELD_SIZE: u64 = 200_000;

/// `S_k = −Σ_{x ∈ F_{q^k}} χ(f(x))`, so that `#C(F_{q^k}) = q^k + 1 − S_k`.
fn power_sum_by_count(f: &FqPoly, k: u32) -> i128 {
    let field = ExtField::new(f.q(), k);
    let chi = field.quadratic_character();
    -(0..field.size).map(|x| chi[field.eval(f, x) as usize] as i128).sum::<i128>()
}

/// `#C(F_{q^k})` for the smooth projective model (one point at infinity).
pub fn point_count(model: &HyperellipticModel, k: u32) -> i128 {
    (model.q() as i128).pow(k) + 1 - power_sum_by_count(&model.f, k)
}

/// The L-polynomial from point counts over `F_{q^k}`, `k = 1..=g`.
pub fn l_polynomial(model: &HyperellipticModel) -> Result<LPolynomial> {
    let g = model.genus;
    if g > 3 {
        return Err(Error::capacity(format!("genus {g} is above the supported bound 3")));
    }
    let q = model.q() as i128;
    let sums: Vec<i128> = (1..=g as u32).map(|k| power_sum_by_count(&model.f, k)).collect();
    let mut c = vec![0i128; 2 * g + 1];
    c[0] = 1;
    for k in 1..=g {
        let mut acc = 0i128;
        for j in 1..=k {
            acc -= sums[j - 1] * c[k - j];
        }
        if acc % k as i128 != 0 {
            return Err(Error::internal(format!("Newton identity gives a non-integral coefficient for {model}")));
        }
        c[k] = acc / k as i128;
    }
    for k in 0..g {
        c[2 * g - k] = c[k] * q.pow((g - k) as u32);
    }
    let l = LPolynomial { q: model.q(), genus: g, coeffs: c };
    if !l.within_hasse_weil() {
        return Err(Error::internal(format!("L(1) = {} violates the Hasse–Weil bound for {model}", l.at_one())));
    }
    if g > 0 && model.q().pow(g as u32 + 1) <= EXTRA_CHECK_FIELD_SIZE {
        let predicted = l.power_sums(g + 1)[g];
        let counted = power_sum_by_count(&model.f, g as u32 + 1);
        if predicted != counted {
            return Err(Error::internal(format!("point count over F_q^{} disagrees with the L-polynomial for {model}", g + 1)));
        }
    }
    Ok(l)
}

/// `|Jac(C)(F_q)| = L(1)`, the divisor class number of `F_q(t)(√f)`.
pub fn jacobian_order(model: &HyperellipticModel) -> Result<u64> {
    Ok(l_polynomial(model)?.at_one() as u64)
}

/// One line of a curve cache: `q;f-coefficients;L-coefficients`, both lists
/// comma-separated, `f` low degree first.
pub fn cache_line(model: &HyperellipticModel, l: &LPolynomial) -> String {
    let fs: Vec<String> = model.f.coeffs().iter().map(|c| c.to_string()).collect();
    let ls: Vec<String> = l.coeffs.iter().map(|c| c.to_string()).collect();
    format!("{};{};{}", model.q(), fs.join(","), ls.join(","))
}

/// Inverse of [`cache_line`].
pub fn parse_cache_line(line: &str) -> Result<(HyperellipticModel, LPolynomial)> {
    let bad = || Error::validation(format!("malformed curve cache line: {line:?}"));
    let parts: Vec<&str> = line.trim().split(';').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let q: u64 = parts[0].parse().map_err(|_| bad())?;
    let f: Vec<u64> = parts[1].split(',').map(|s| s.parse().map_err(|_| bad())).collect::<Result<_>>()?;
    let c: Vec<i128> = parts[2].split(',').map(|s| s.parse().map_err(|_| bad())).collect::<Result<_>>()?;
    let model = HyperellipticModel::new(FqPoly::new(q, f)?)?;
    if c.len() != 2 * model.genus + 1 {
        return Err(bad());
    }
    let l = LPolynomial { q, genus: model.genus, coeffs: c };
    if !l.satisfies_functional_equation() {
        return Err(Error::validation(format!("cached L-polynomial fails the functional equation: {line:?}")));
    }
    Ok((model, l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(q: u64, c: &[u64]) -> HyperellipticModel {
        HyperellipticModel::new(FqPoly::new(q, c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn order_seven_example() {
        // t³ − t + 1 over F_3: six affine points plus infinity
        let m = model(3, &[1, 2, 0, 1]);
        assert_eq!(point_count(&m, 1), 7);
        assert_eq!(jacobian_order(&m).unwrap(), 7);
    }

    #[test]
    fn genus_zero_is_trivial() {
        let m = model(3, &[1, 1]);
        assert_eq!(jacobian_order(&m).unwrap(), 1);
    }

    #[test]
    fn enumeration_counts() {
        for (q, d) in [(3u64, 1u32), (3, 3), (3, 5), (5, 3)] {
            let all: Vec<_> = enumerate_imaginary(q, d).unwrap().collect();
            assert_eq!(all.len() as u64, imaginary_count(q, d));
            assert_eq!(all.iter().filter(|m| m.f.is_monic()).count() as u64, imaginary_count(q, d) / 2);
        }
        assert!(matches!(enumerate_imaginary(3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn l_polynomials_are_consistent() {
        for d in [3u32, 5] {
            for m in enumerate_imaginary(5, d).unwrap().take(40) {
                let l = l_polynomial(&m).unwrap();
                assert!(l.satisfies_functional_equation());
                let back = parse_cache_line(&cache_line(&m, &l)).unwrap();
                assert_eq!(back, (m, l));
            }
        }
    }
}
