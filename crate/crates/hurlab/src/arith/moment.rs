//! Empirical `H`-moments of `Cl(K)` over imaginary quadratic function fields.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::curve::{enumerate_imaginary, HyperellipticModel};
use super::sylow::{sylow_structure, SylowOptions, SylowResult};
use crate::grp::catalog::abelian;
use crate::grp::{AbelianStructure, GammaGroup};
use crate::linalg::{factorize, gcd_u64, valuation};
use crate::{frob, par, Error, Result};

/// Which statistic to average.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weights {
    /// `#Sur(Cl(K), H)`, each field weight 1.
    None,
    /// `w_H(K)·#Sur(2Cl(K), H)` over `Σ w_H(K)`, with
    /// `w_H(K) = #Hom(Cl(K), H/2H)` when `Cl(K) ↠ H/2H` and 0 otherwise.
    Gerth,
}

#[derive(Clone, Debug)]
pub struct MomentOptions {
    pub sylow: SylowOptions,
    /// Fewer fields than this and [`MomentReport::verdict`] declines to answer.
    pub sample_floor: u64,
    /// Smallest `deg f` included; 1 keeps the genus-0 fields.
    pub min_degree: u32,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions { sylow: SylowOptions::default(), sample_floor: 100, min_degree: 1 }
    }
}

/// One degree of the run, with cumulative statistics through that degree.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub degree: u32,
    pub fields: u64,
    pub inconclusive: u64,
    /// `Σ w·#Sur` over this degree.
    pub sum: BigUint,
    /// `Σ w` over this degree (the field count when unweighted).
    pub weight: BigUint,
    pub running_average: f64,
    pub prediction: f64,
    /// Standard error of the running average, treating fields as independent.
    pub std_error: f64,
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub q: u64,
    pub h: AbelianStructure,
    pub weights: Weights,
    pub prediction: BigRational,
    pub rows: Vec<MomentRow>,
    pub sample_floor: u64,
}

impl MomentReport {
    pub fn total_fields(&self) -> u64 {
        self.rows.iter().map(|r| r.fields - r.inconclusive).sum()
    }

    pub fn final_average(&self) -> Option<f64> {
        self.rows.last().map(|r| r.running_average)
    }

    /// Whether the final average lies in `[lo, hi]`; `None` below the sample floor.
    pub fn verdict(&self, lo: f64, hi: f64) -> Option<bool> {
        if self.total_fields() < self.sample_floor {
            return None;
        }
        self.final_average().map(|a| (lo..=hi).contains(&a))
    }

    /// CSV with columns `degree,fields,inconclusive,sum_sur,weight,running_average,prediction,std_error`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,fields,inconclusive,sum_sur,weight,running_average,prediction,std_error\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{:.6},{:.6},{:.6}",
                r.degree, r.fields, r.inconclusive, r.sum, r.weight, r.running_average, r.prediction, r.std_error
            );
        }
        s
    }
}

/// `|(∧²H)[2^{v−1}]|` for an abelian 2-group `H`.
pub fn gerth_prediction(h: &AbelianStructure, v: u32) -> BigUint {
    let f = h.factors();
    let mut log = 0u32;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let m = valuation(f[i], 2).min(valuation(f[j], 2)).min(v.saturating_sub(1));
            log += m;
        }
    }
    BigUint::from(2u32).pow(log)
}

/// Per-field `(weight, weight·#Sur)`, or `None` if a Sylow structure was not certified.
fn field_value(model: &HyperellipticModel, h: &AbelianStructure, weights: Weights, opts: &SylowOptions) -> Result<Option<(BigUint, BigUint)>> {
    match weights {
        Weights::None => {
            let mut sur = BigUint::from(1u32);
            for (p, _) in factorize(h.order()) {
                let SylowResult::Certified(cl_p) = sylow_structure(model, p, opts)? else {
                    return Ok(None);
                };
                sur *= cl_p.sur_count(&h.p_part(p));
            }
            Ok(Some((BigUint::from(1u32), sur)))
        }
        Weights::Gerth => {
            let SylowResult::Certified(cl2) = sylow_structure(model, 2, opts)? else {
                return Ok(None);
            };
            let r = h.rank();
            if cl2.rank() < r {
                return Ok(Some((BigUint::from(0u32), BigUint::from(0u32))));
            }
            let w = BigUint::from(2u32).pow((r * cl2.rank()) as u32);
            let doubled: Vec<u64> = cl2.factors().iter().map(|&a| a / 2).collect();
            let two_cl = AbelianStructure::from_cyclic(&doubled);
            let sur = BigUint::from(two_cl.sur_count(h));
            Ok(Some((w.clone(), w * sur)))
        }
    }
}

/// Averages the statistic over every imaginary model with odd `deg f` in
/// `[opts.min_degree, d_max]`.
pub fn empirical_moment(q: u64, d_max: u32, h: &AbelianStructure, weights: Weights, opts: &MomentOptions) -> Result<MomentReport> {
    let prediction = match weights {
        Weights::None => {
            if gcd_u64(h.order(), q) != 1 {
                return Err(Error::validation(format!("|H| = {} shares a factor with q = {q}", h.order())));
            }
            let hg = GammaGroup::inversion(abelian(&h.factors().iter().map(|&x| x as usize).collect::<Vec<_>>()))?;
            frob::moment_prediction(&hg, &[0, 1], Some(&BigUint::from(q)))?
        }
        Weights::Gerth => {
            if h.order() & (h.order() - 1) != 0 {
                return Err(Error::validation("Gerth weighting needs H to be a 2-group"));
            }
            BigRational::from_integer(gerth_prediction(h, valuation(q - 1, 2)).into())
        }
    };
    let pred_f = prediction.to_f64().unwrap_or(f64::NAN);
    let mut rows = Vec::new();
    let (mut num, mut den) = (BigUint::from(0u32), BigUint::from(0u32));
    // Σ w², Σ w·x, Σ w·x² for the standard error of a ratio estimate
    let (mut sw2, mut swx2, mut swx) = (0f64, 0f64, 0f64);
    let mut field_index = 0u64;
    let first = opts.min_degree.max(1) | 1;
    for d in (first..=d_max).step_by(2) {
        let models: Vec<(u64, HyperellipticModel)> = enumerate_imaginary(q, d)?
            .map(|m| {
                field_index += 1;
                (field_index, m)
            })
            .collect();
        let values = par::map(&models, |(i, m)| {
            let o = SylowOptions { seed: opts.sylow.seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15), ..opts.sylow.clone() };
            field_value(m, h, weights, &o)
        });
        let mut row_sum = BigUint::from(0u32);
        let mut row_weight = BigUint::from(0u32);
        let mut inconclusive = 0;
        for v in values {
            match v? {
                None => inconclusive += 1,
                Some((w, ws)) => {
                    let (wf, wsf) = (w.to_f64().unwrap_or(0.0), ws.to_f64().unwrap_or(0.0));
                    sw2 += wf * wf;
                    swx += wsf * wf;
                    swx2 += wsf * wsf;
                    row_sum += &ws;
                    row_weight += &w;
                }
            }
        }
        num += &row_sum;
        den += &row_weight;
        let (nf, df) = (num.to_f64().unwrap_or(f64::NAN), den.to_f64().unwrap_or(f64::NAN));
        let avg = if df > 0.0 { nf / df } else { f64::NAN };
        // Var(Σwx − avg·Σw) ≈ Σ (w x − avg w)², expanded
        let resid = (swx2 - 2.0 * avg * swx + avg * avg * sw2).max(0.0);
        let se = if df > 0.0 { resid.sqrt() / df } else { f64::NAN };
        rows.push(MomentRow {
            degree: d,
            fields: models.len() as u64,
            inconclusive,
            sum: row_sum,
            weight: row_weight,
            running_average: avg,
            prediction: pred_f,
            std_error: se,
        });
    }
    Ok(MomentReport { q, h: h.clone(), weights, prediction, rows, sample_floor: opts.sample_floor })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_reproducible() {
        let h = AbelianStructure::from_cyclic(&[5]);
        let a = empirical_moment(3, 5, &h, Weights::None, &MomentOptions::default()).unwrap();
        let b = par::with_workers(Some(1), || empirical_moment(3, 5, &h, Weights::None, &MomentOptions::default()).unwrap());
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.prediction, BigRational::from_integer(1.into()));
        assert_eq!(a.rows.iter().map(|r| r.fields).collect::<Vec<_>>(), vec![6, 36, 324]);
        assert_eq!(a.rows[0].sum, BigUint::from(0u32));
    }

    #[test]
    fn preconditions_and_gerth_values() {
        let h3 = AbelianStructure::from_cyclic(&[3]);
        assert!(empirical_moment(3, 3, &h3, Weights::None, &MomentOptions::default()).is_err());
        let h2 = AbelianStructure::from_cyclic(&[2]);
        assert_eq!(gerth_prediction(&h2, 1), BigUint::from(1u32));
        let h22 = AbelianStructure::from_cyclic(&[2, 2]);
        assert_eq!(gerth_prediction(&h22, 1), BigUint::from(1u32));
        assert_eq!(gerth_prediction(&h22, 2), BigUint::from(2u32));
        let r = empirical_moment(3, 5, &h2, Weights::Gerth, &MomentOptions::default()).unwrap();
        assert_eq!(r.prediction, BigRational::from_integer(1.into()));
    }
}
