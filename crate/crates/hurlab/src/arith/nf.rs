//! Class groups of imaginary quadratic fields `ℚ(√−d)` from reduced binary
//! quadratic forms.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::{structure_from_orders, ClassGroupStructure};
use crate::{Error, Result};

/// Largest `|D|` accepted by [`nf_class_group`].
pub const MAX_DISCRIMINANT: i64 = 100_000_000;

/// A positive definite form `ax² + bxy + cy²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a && self.a <= self.c && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    /// The reduced form in the same proper equivalence class.
    pub fn reduce(self) -> Form {
        let disc = self.discriminant();
        let mut f = self;
        loop {
            f = normalize(f, disc);
            if f.a > f.c || (f.a == f.c && f.b < 0) {
                f = Form { a: f.c, b: -f.b, c: f.a };
            } else {
                return f;
            }
        }
    }

    pub fn identity(disc: i64) -> Form {
        let b = disc.rem_euclid(2);
        Form { a: 1, b, c: (b * b - disc) / 4 }
    }
}

/// Moves `b` into `(−a, a]`.
fn normalize(f: Form, disc: i64) -> Form {
    let two_a = 2 * f.a;
    let mut b = f.b.rem_euclid(two_a);
    if b > f.a {
        b -= two_a;
    }
    Form { a: f.a, b, c: (b * b - disc) / (4 * f.a) }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - (a.div_euclid(b)) * y)
}

/// Gaussian composition of primitive forms of the same discriminant, reduced.
pub fn compose(f: Form, g: Form) -> Form {
    let disc = f.discriminant() as i128;
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2, c2) = (g.a as i128, g.b as i128, g.c as i128);
    let s = (b1 + b2) / 2;
    // e = gcd(a1, a2, s) = u·a1 + v·a2 + w·s
    let (e1, _, y1) = ext_gcd(a1, a2);
    let (e, x2, w) = ext_gcd(e1, s);
    let v = y1 * x2;
    let a3 = a1 * a2 / (e * e);
    let b3 = (b2 + 2 * (a2 / e) * (v * (s - b2) - w * c2)).rem_euclid(2 * a3);
    let c3 = (b3 * b3 - disc) / (4 * a3);
    Form { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
}

/// The fundamental discriminant of `ℚ(√−d)`.
pub fn fundamental_discriminant(d: u64) -> Result<i64> {
    if d == 0 {
        return Err(Error::validation("d must be positive"));
    }
    let mut core = 1u64;
    for (p, e) in crate::linalg::factorize(d) {
        if e % 2 == 1 {
            core *= p;
        }
    }
    let disc = if core % 4 == 3 { -(core as i64) } else { -4 * core as i64 };
    if -disc > MAX_DISCRIMINANT {
        return Err(Error::capacity(format!("|D| = {} exceeds the cap {MAX_DISCRIMINANT}", -disc)));
    }
    Ok(disc)
}

/// All reduced forms of discriminant `disc < 0`.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = Form { a, b, c: num / (4 * a) };
            if f.is_reduced() && gcd3(f.a, f.b, f.c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    let g = |mut x: i64, mut y: i64| {
        x = x.abs();
        y = y.abs();
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    g(g(a, b), c)
}

/// `Cl(ℚ(√−d))` with its full structure.
pub fn nf_class_group(d: u64) -> Result<ClassGroupStructure> {
    let disc = fundamental_discriminant(d)?;
    let forms = reduced_forms(disc);
    let h = forms.len() as u64;
    let id = Form::identity(disc);
    let index: HashMap<Form, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut orders = Vec::with_capacity(forms.len());
    for f in &forms {
        let mut x = *f;
        let mut k = 1u64;
        while x != id {
            x = compose(x, *f);
            k += 1;
            if k > h || !index.contains_key(&x) {
                return Err(Error::internal(format!("composition left the reduced forms of discriminant {disc}")));
            }
        }
        orders.push(k);
    }
    Ok(structure_from_orders(BigUint::from(h), &orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let c = nf_class_group(23).unwrap();
        assert_eq!(c.structure().factors(), &[3]);
        assert_eq!(reduced_forms(-23), vec![Form { a: 1, b: 1, c: 6 }, Form { a: 2, b: -1, c: 3 }, Form { a: 2, b: 1, c: 3 }]);
        assert!(nf_class_group(1).unwrap().structure().is_trivial());
        assert!(nf_class_group(3).unwrap().structure().is_trivial());
    }

    #[test]
    fn known_class_numbers() {
        // h(−4·5) = 2, h(−4·14) = 4 with group ℤ/4, h(−4·21) = 4 with (ℤ/2)²
        assert_eq!(nf_class_group(5).unwrap().structure().factors(), &[2]);
        assert_eq!(nf_class_group(14).unwrap().structure().factors(), &[4]);
        assert_eq!(nf_class_group(21).unwrap().structure().factors(), &[2, 2]);
        assert_eq!(nf_class_group(4 * 23).unwrap(), nf_class_group(23).unwrap());
        // the nine class-number-one fields
        for d in [1u64, 2, 3, 7, 11, 19, 43, 67, 163] {
            assert_eq!(nf_class_group(d).unwrap().order, BigUint::from(1u32), "d = {d}");
        }
    }
}
