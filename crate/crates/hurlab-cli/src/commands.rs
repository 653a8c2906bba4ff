//! One function per experiment, each filling a [`Table`].

use std::path::Path;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use hurlab::arith::{empirical_moment, nf::fundamental_discriminant, nf_class_group, MomentOptions, SylowOptions, Weights};
use hurlab::frob::{self, fixed_counts, frobenius_period, powering_orbits, predicted_hur_count, FrobeniusParams};
use hurlab::grp::catalog::{abelian, by_name};
use hurlab::grp::io::{parse_permutations, parse_table, ParsedGroup};
use hurlab::grp::{AbelianStructure, FiniteGroup, GammaGroup};
use hurlab::homology::{h2, UContext};
use hurlab::hurwitz::{classify, stable_bijection_report};
use hurlab::randgrp::{moment_mu, moment_n, monte_carlo, mu_limit, mu_n, Model, VarietySpec, DEFAULT_FREE_ORDER_CAP};
use hurlab::{par, Error};

use crate::config::*;
use crate::report::Table;

type Res<T> = Result<T, Error>;

pub fn run(e: &Experiment) -> Res<Table> {
    match e {
        Experiment::Orbits(a) => orbits(a),
        Experiment::Invariants(a) => invariants(a),
        Experiment::FrobCount(a) => frob_count(a),
        Experiment::PredictMoment(a) => predict_moment(a),
        Experiment::Randgrp(RandgrpCommand::Sample(a)) => sample(a),
        Experiment::Randgrp(RandgrpCommand::Measure(a)) => measure(a),
        Experiment::Randgrp(RandgrpCommand::Moment(a)) => rg_moment(a),
        Experiment::Arith(ArithCommand::FfMoment(a)) => ff_moment(a),
        Experiment::Arith(ArithCommand::NfMoment(a)) => nf_moment(a),
    }
}

const PERMUTATION_GROUP_CAP: usize = 100_000;

/// A catalog name, or a table / permutation file.
pub fn load_group(spec: &str) -> Res<(FiniteGroup, Option<GammaGroup>)> {
    let path = Path::new(spec);
    if !path.is_file() {
        return Ok((by_name(spec)?, None));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::validation(format!("cannot read {spec}: {e}")))?;
    if text.trim_start().starts_with("perm") {
        let (degree, gens) = parse_permutations(&text)?;
        return Ok((FiniteGroup::from_permutations(&gens, degree, PERMUTATION_GROUP_CAP)?.0, None));
    }
    Ok(match parse_table(&text)? {
        ParsedGroup::Plain(g) => (g, None),
        ParsedGroup::WithAction(h) => (h.base.clone(), Some(h)),
    })
}

fn parse_c(g: &FiniteGroup, spec: &str) -> Res<Vec<usize>> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok((1..g.order()).collect());
    }
    if let Some(k) = spec.strip_prefix("order=") {
        let k: usize = k.trim().parse().map_err(|_| Error::validation(format!("bad element order in c = '{spec}'")))?;
        return Ok((1..g.order()).filter(|&x| g.elem_order(x) == k).collect());
    }
    parse_indices(spec, g.order(), "c")
}

fn parse_indices(spec: &str, bound: usize, what: &str) -> Res<Vec<usize>> {
    let mut out = Vec::new();
    for t in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let x: usize = t.parse().map_err(|_| Error::validation(format!("{what}: '{t}' is not an element index")))?;
        if x >= bound {
            return Err(Error::validation(format!("{what}: element {x} is out of range (order {bound})")));
        }
        out.push(x);
    }
    Ok(out)
}

fn parse_orders(spec: &str) -> Res<Vec<usize>> {
    spec.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().ok().filter(|&x| x >= 1).ok_or_else(|| Error::validation(format!("'{t}' is not a cyclic order"))))
        .collect()
}

/// `H` from orders (inversion action) or from a table file with a Γ-action.
fn load_gamma_group(spec: &str) -> Res<GammaGroup> {
    if Path::new(spec).is_file() {
        return match load_group(spec)? {
            (_, Some(h)) => Ok(h),
            (g, None) => GammaGroup::inversion(g),
        };
    }
    GammaGroup::inversion(abelian(&parse_orders(spec)?))
}

fn parse_gamma_inf(gamma: &FiniteGroup, spec: &str) -> Res<Vec<usize>> {
    match spec.trim() {
        "all" => Ok((0..gamma.order()).collect()),
        "trivial" => Ok(vec![0]),
        s => Ok(gamma.generate(&parse_indices(s, gamma.order(), "gamma-inf")?)),
    }
}

fn rational(x: &BigRational) -> Value {
    json!(x.to_string())
}

fn decimal(x: &BigRational) -> Value {
    json!(x.to_f64())
}

fn hur_context(group: &str, c: &str, g_inf: usize) -> Res<(FiniteGroup, UContext)> {
    let (g, _) = load_group(group)?;
    if g_inf >= g.order() {
        return Err(Error::validation(format!("g-inf = {g_inf} is out of range (order {})", g.order())));
    }
    let c = parse_c(&g, c)?;
    let ctx = UContext::new(&g, &c)?;
    Ok((g, ctx))
}

fn orbits(a: &OrbitsArgs) -> Res<Table> {
    let (_, ctx) = hur_context(&a.group, &a.c, a.g_inf)?;
    let cl = classify(&ctx, a.g_inf, a.n, a.budget)?;
    if !cl.invariant_constant {
        return Err(Error::internal("lifting invariant is not constant on a braid orbit"));
    }
    let mut t = Table::new(&["orbit", "size", "representative", "h2_part", "degrees", "shape"]);
    for (i, o) in cl.orbits.iter().enumerate() {
        t.row(vec![
            json!(i),
            json!(o.size),
            json!(format!("{:?}", o.rep.entries)),
            json!(format!("{:?}", o.invariant.h)),
            json!(format!("{:?}", o.invariant.v.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
            json!(format!("{:?}", o.shape.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
        ]);
    }
    t.note("orbits", cl.orbits.len());
    t.note("tuples", cl.tuple_count);
    t.note("classes_in_c", ctx.num_classes());
    Ok(t)
}

fn invariants(a: &InvariantsArgs) -> Res<Table> {
    let (g, ctx) = hur_context(&a.group, &a.c, a.g_inf)?;
    let cyc = g.generate(&[a.g_inf]);
    let mut t = Table::new(&["g_inf", "n", "m", "orbits", "k_elements", "injective", "surjective", "bijective"]);
    for &m in &a.m {
        for r in stable_bijection_report(&ctx, &cyc, a.n, m, a.budget)? {
            t.row(vec![json!(r.g_inf), json!(r.n), json!(r.m), json!(r.orbit_count), json!(r.k_count), json!(r.injective), json!(r.surjective), json!(r.bijective())]);
        }
    }
    t.note("h2", h2(&g)?.to_string());
    t.note("h2_c", ctx.h2c.to_string());
    t.note("classes_in_c", ctx.num_classes());
    Ok(t)
}

/// Any integer is accepted; a `q` that is visibly not a prime power only draws a warning.
fn parse_q(s: &str) -> Res<BigUint> {
    let q: BigUint = s.trim().parse().map_err(|_| Error::validation(format!("q = '{s}' is not a positive integer")))?;
    if let Some(v) = q.to_u64().filter(|&v| v >= 2) {
        if hurlab::linalg::factorize(v).len() != 1 {
            eprintln!("hurlab: warning: q = {v} is not a prime power; the formulas only use congruences, so results are still computed");
        }
    }
    Ok(q)
}

fn frob_count(a: &FrobCountArgs) -> Res<Table> {
    let (g, ctx) = hur_context(&a.group, &a.c, a.g_inf)?;
    let params = FrobeniusParams::new(parse_q(&a.q)?, g.order())?;
    let cyc = g.generate(&[a.g_inf]);
    let mut t = Table::new(&["n", "b", "d", "pi", "main_term", "by_h2_part"]);
    for n in a.n_min..=a.n_max {
        let fc = fixed_counts(&ctx, &cyc, &params, n)?;
        let p = predicted_hur_count(&ctx, &cyc, &params, n)?;
        let refinement: Vec<String> = fc.refinement.iter().map(|(h, c)| format!("{h:?}:{c}")).collect();
        t.row(vec![json!(n), json!(fc.b.to_string()), json!(fc.d), json!(p.pi.to_string()), json!(p.main_term.to_string()), json!(refinement.join(" "))]);
    }
    t.note("q", params.q.to_string());
    t.note("period", frobenius_period(&ctx, &params));
    t.note("powering_orbits", powering_orbits(&ctx, &params)?);
    Ok(t)
}

fn predict_moment(a: &PredictMomentArgs) -> Res<Table> {
    let h = load_gamma_group(&a.h)?;
    let gi = parse_gamma_inf(&h.gamma, &a.gamma_inf)?;
    let mut t = Table::new(&["q", "prediction", "value"]);
    let limit = frob::moment_prediction(&h, &gi, None)?;
    t.row(vec![json!("inf"), rational(&limit), decimal(&limit)]);
    for q in &a.q {
        let p = frob::moment_prediction(&h, &gi, Some(&parse_q(q)?))?;
        t.row(vec![json!(q), rational(&p), decimal(&p)]);
    }
    t.note("invariant_index", frob::invariant_index(&h, &gi));
    t.note("h2_semidirect", h2(&h.semidirect().group)?.to_string());
    Ok(t)
}

fn abelian_target(spec: &str) -> Res<GammaGroup> {
    GammaGroup::inversion(abelian(&parse_orders(spec)?))
}

fn sample(a: &SampleArgs) -> Res<Table> {
    let spec = VarietySpec::abelian_inversion(a.ell, a.k)?;
    let gi = parse_gamma_inf(spec.gamma(), &a.gamma_inf)?;
    let model = Model::new(&spec, a.n, &gi, a.cap)?;
    let r = monte_carlo(&model, a.trials, a.seed, &[], &spec)?;
    let mut t = Table::new(&["outcome", "count", "frequency", "exact"]);
    for (label, count) in &r.distribution {
        // labels of the abelian fast path are structures like "Z/3 x Z/3"
        let exact = match abelian_from_label(label) {
            Some(x) => rational(&mu_n(&GammaGroup::inversion(abelian(&x))?, &spec, &gi, a.n)?),
            None => Value::Null,
        };
        t.row(vec![json!(label), json!(count), json!(*count as f64 / r.trials as f64), exact]);
    }
    t.note("trials", r.trials);
    t.note("seed", r.seed);
    Ok(t)
}

fn abelian_from_label(label: &str) -> Option<Vec<usize>> {
    if label == "0" {
        return Some(vec![]);
    }
    label.split(" x ").map(|p| p.strip_prefix("Z/").and_then(|d| d.parse().ok())).collect()
}

fn measure(a: &MeasureArgs) -> Res<Table> {
    let spec = VarietySpec::abelian_inversion(a.ell, a.k)?;
    let gi = parse_gamma_inf(spec.gamma(), &a.gamma_inf)?;
    let tol = BigRational::from_float(a.tol).ok_or_else(|| Error::validation("tol must be finite"))?;
    let mut t = Table::new(&["H", "n", "mu_n", "value"]);
    let mut limits = serde_json::Map::new();
    for hs in &a.h {
        let h = abelian_target(hs)?;
        let name = AbelianStructure::from_cyclic(&h_orders(hs)?).to_string();
        for n in 1..=a.n_max {
            let m = mu_n(&h, &spec, &gi, n)?;
            t.row(vec![json!(name), json!(n), rational(&m), decimal(&m)]);
        }
        let lim = mu_limit(&h, &spec, &gi, &tol, a.n_max.max(200))?;
        limits.insert(name, lim.value.as_ref().map_or(Value::Null, decimal));
    }
    t.note("limits", Value::Object(limits));
    Ok(t)
}

fn h_orders(spec: &str) -> Res<Vec<u64>> {
    Ok(parse_orders(spec)?.into_iter().map(|x| x as u64).collect())
}

fn rg_moment(a: &RgMomentArgs) -> Res<Table> {
    let spec = VarietySpec::abelian_inversion(a.ell, a.k)?;
    let gi = parse_gamma_inf(spec.gamma(), &a.gamma_inf)?;
    let mut t = Table::new(&["H", "n", "moment_n", "value"]);
    let mut targets = Vec::new();
    let mut limits = serde_json::Map::new();
    for hs in &a.h {
        let h = abelian_target(hs)?;
        let name = AbelianStructure::from_cyclic(&h_orders(hs)?).to_string();
        for n in 1..=a.n_max {
            let m = moment_n(&h, &gi, n);
            t.row(vec![json!(name), json!(n), rational(&m), decimal(&m)]);
        }
        limits.insert(name.clone(), rational(&moment_mu(&h, &gi)));
        targets.push((name, h));
    }
    t.note("moment_limit", Value::Object(limits));
    if let Some(trials) = a.trials {
        let seed = a.seed.ok_or_else(|| Error::validation("trials needs an explicit seed"))?;
        let model = Model::new(&spec, a.n_max, &gi, DEFAULT_FREE_ORDER_CAP)?;
        let r = monte_carlo(&model, trials, seed, &targets, &spec)?;
        let mc: Vec<Value> = r.targets.iter().map(|s| json!({"H": s.name, "sur_mean": s.sur_mean, "sur_se": s.sur_se, "prob": s.prob, "prob_se": s.prob_se})).collect();
        t.note("monte_carlo", json!({"n": a.n_max, "trials": trials, "seed": seed, "targets": mc}));
    }
    Ok(t)
}

fn ff_moment(a: &FfMomentArgs) -> Res<Table> {
    let h = AbelianStructure::from_cyclic(&h_orders(&a.h)?);
    let weights = match a.weights {
        WeightsArg::None => Weights::None,
        WeightsArg::Gerth => Weights::Gerth,
    };
    let opts = MomentOptions { sylow: SylowOptions { seed: a.seed, ..SylowOptions::default() }, sample_floor: a.sample_floor, min_degree: a.dmin };
    let r = empirical_moment(a.q, a.dmax, &h, weights, &opts)?;
    let mut t = Table::new(&["degree", "fields", "inconclusive", "sum_sur", "weight", "running_average", "prediction", "std_error"]);
    for row in &r.rows {
        t.row(vec![
            json!(row.degree),
            json!(row.fields),
            json!(row.inconclusive),
            json!(row.sum.to_string()),
            json!(row.weight.to_string()),
            json!(row.running_average),
            json!(row.prediction),
            json!(row.std_error),
        ]);
    }
    t.note("prediction", rational(&r.prediction));
    t.note("fields", r.total_fields());
    t.note("within_half_to_three_halves", r.verdict(0.5, 1.5));
    Ok(t)
}

fn nf_moment(a: &NfMomentArgs) -> Res<Table> {
    let orders = h_orders(&a.h)?;
    let h = AbelianStructure::from_cyclic(&orders);
    if h.order().is_multiple_of(2) {
        return Err(Error::validation("H must have odd order: the 2-part of Cl(Q(√−d)) is governed by genus theory"));
    }
    let hg = GammaGroup::inversion(abelian(&orders.iter().map(|&x| x as usize).collect::<Vec<_>>()))?;
    let prediction = frob::moment_prediction(&hg, &[0, 1], None)?;
    if a.step == 0 {
        return Err(Error::validation("step must be positive"));
    }
    fundamental_discriminant(a.dmax.max(1))?;
    let ds: Vec<u64> = (1..=a.dmax).filter(|&d| hurlab::linalg::factorize(d).iter().all(|&(_, e)| e == 1)).collect();
    let sur = par::map(&ds, |&d| nf_class_group(d).map(|c| c.structure().sur_count(&h)));
    let mut t = Table::new(&["dmax", "fields", "sum_sur", "average", "prediction"]);
    let (mut fields, mut sum) = (0u64, 0u64);
    let mut next = a.step.min(a.dmax);
    for (d, s) in ds.iter().zip(sur) {
        while *d > next {
            push_nf_row(&mut t, next, fields, sum, &prediction);
            next = (next + a.step).min(a.dmax);
        }
        fields += 1;
        sum += s?;
    }
    while next <= a.dmax {
        push_nf_row(&mut t, next, fields, sum, &prediction);
        if next == a.dmax {
            break;
        }
        next = (next + a.step).min(a.dmax);
    }
    t.note("prediction", rational(&prediction));
    Ok(t)
}

fn push_nf_row(t: &mut Table, bound: u64, fields: u64, sum: u64, prediction: &BigRational) {
    let avg = if fields > 0 { json!(sum as f64 / fields as f64) } else { Value::Null };
    t.row(vec![json!(bound), json!(fields), json!(sum), avg, decimal(prediction)]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_specs() {
        let g = by_name("S3").unwrap();
        assert_eq!(parse_c(&g, "all").unwrap().len(), 5);
        assert_eq!(parse_c(&g, "order=2").unwrap().len(), 3);
        assert!(parse_c(&g, "1,9").is_err());
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(abelian_from_label("0"), Some(vec![]));
        assert_eq!(abelian_from_label(&AbelianStructure::from_cyclic(&[3, 9]).to_string()), Some(vec![3, 9]));
        assert_eq!(abelian_from_label("order=3;exp=3"), None);
    }

    #[test]
    fn gamma_inf_specs() {
        let g = by_name("C4").unwrap();
        assert_eq!(parse_gamma_inf(&g, "all").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_gamma_inf(&g, "trivial").unwrap(), vec![0]);
        assert_eq!(parse_gamma_inf(&g, "2").unwrap(), vec![0, 2]);
    }
}

