//! Sampling and exact enumeration of `X^n`.
//!
//! Trial `t` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `t`, so
//! every trial is reproducible on its own and the report does not depend on
//! how trials are spread over threads.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{fingerprint, free_admissible, FreeAdmissible, VarietyKind, VarietySpec};
use crate::grp::{count_gamma_homs, gamma_isomorphic};
use crate::grp::{AbelianStructure, GammaGroup};
use crate::linalg::local_smith;
use crate::{par, Error, Result};

const CHUNK: u64 = 1024;

enum Inner {
    /// `(ℤ/ℓ^k)^n` with inversion; `last_free` is whether `x_{n+1}` is drawn.
    Abelian { ell: u64, k: u32, last_free: bool },
    General { free: FreeAdmissible, fixed_inf: Vec<usize>, joins: Joins },
}

/// A prepared sampler for `X^n_{Γ,Γ∞}`.
pub struct Model {
    pub n: usize,
    pub gamma_inf: Vec<usize>,
    inner: Inner,
}

/// One sample of `X`, up to Γ-isomorphism.
#[derive(Clone, Debug)]
pub enum Outcome {
    Abelian(AbelianStructure),
    Group(GammaGroup),
}

impl Outcome {
    pub fn order(&self) -> u64 {
        match self {
            Outcome::Abelian(a) => a.order(),
            Outcome::Group(g) => g.base.order() as u64,
        }
    }

    /// Short label used to tabulate distributions.
    pub fn label(&self) -> String {
        match self {
            Outcome::Abelian(a) => a.to_string(),
            Outcome::Group(g) => fingerprint(g),
        }
    }
}

/// Γ-normal closures of Y-coordinates, and their joins.
struct Joins {
    subs: Vec<Vec<usize>>,
    /// `single[x]` is the id of the Γ-normal closure of the coordinates of `Y(x)`.
    single: Vec<u32>,
}

impl Joins {
    fn new(f: &GammaGroup) -> Self {
        let mut subs: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Vec<usize>, u32> = HashMap::new();
        let single = (0..f.base.order())
            .map(|x| {
                let n = f.gamma_normal_closure(&f.y(x));
                *index.entry(n.clone()).or_insert_with(|| {
                    subs.push(n);
                    (subs.len() - 1) as u32
                })
            })
            .collect();
        Joins { subs, single }
    }
}

/// Memoized products of Γ-stable normal subgroups.
struct JoinTable<'a> {
    f: &'a GammaGroup,
    subs: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    memo: HashMap<(usize, usize), usize>,
    /// Table id of each closure in `Joins::subs`.
    base_ids: Vec<usize>,
}

impl<'a> JoinTable<'a> {
    fn new(f: &'a GammaGroup, base: &[Vec<usize>]) -> Self {
        let mut t = JoinTable { f, subs: Vec::new(), index: HashMap::new(), memo: HashMap::new(), base_ids: Vec::new() };
        t.intern(vec![0]);
        t.base_ids = base.iter().map(|s| t.intern(s.clone())).collect();
        t
    }

    fn intern(&mut self, s: Vec<usize>) -> usize {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        self.subs.push(s.clone());
        self.index.insert(s, self.subs.len() - 1);
        self.subs.len() - 1
    }

    fn join(&mut self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&j) = self.memo.get(&key) {
            return j;
        }
        let mut gens = self.subs[a].clone();
        gens.extend_from_slice(&self.subs[b]);
        let j = self.intern(self.f.base.generate(&gens));
        self.memo.insert(key, j);
        j
    }
}

impl Model {
    /// `gamma_inf` lists the elements of the subgroup `Γ∞ ≤ Γ`.
    pub fn new(spec: &VarietySpec, n: usize, gamma_inf: &[usize], cap: usize) -> Result<Self> {
        let gamma = spec.gamma();
        if gamma_inf.is_empty() || gamma.generate(gamma_inf).len() != gamma_inf.len() {
            return Err(Error::validation("Γ∞ must be a subgroup of Γ"));
        }
        let mut gi = gamma_inf.to_vec();
        gi.sort_unstable();
        let inner = match spec.kind {
            VarietyKind::AbelianInversion { ell, k } => Inner::Abelian { ell, k, last_free: gi.len() == 1 },
            VarietyKind::General => {
                let free = free_admissible(n, spec, cap)?;
                let fixed_inf = free.group.invariants(&gi);
                let joins = Joins::new(&free.group);
                Inner::General { free, fixed_inf, joins }
            }
        };
        Ok(Model { n, gamma_inf: gi, inner })
    }

    /// The concrete free object, building it if this is the abelian fast path.
    pub fn free_object(&self, spec: &VarietySpec, cap: usize) -> Result<FreeAdmissible> {
        match &self.inner {
            Inner::General { free, .. } => Ok(free.clone()),
            Inner::Abelian { .. } => free_admissible(self.n, spec, cap),
        }
    }

    pub fn is_fast_path(&self) -> bool {
        matches!(self.inner, Inner::Abelian { .. })
    }

    /// Draws `x₁..x_{n+1}` as element indices (general path).
    fn draw_elements<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let Inner::General { free, fixed_inf, .. } = &self.inner else {
            unreachable!("general path only")
        };
        let order = free.group.base.order();
        let mut xs: Vec<usize> = (0..self.n).map(|_| rng.gen_range(0..order)).collect();
        xs.push(fixed_inf[rng.gen_range(0..fixed_inf.len())]);
        xs
    }

    /// The ids of the closures `⟨Y(x_i)⟩` for one trial, sorted and deduplicated.
    fn draw_ids<R: Rng>(&self, rng: &mut R) -> Vec<u32> {
        let Inner::General { joins, .. } = &self.inner else {
            unreachable!("general path only")
        };
        let mut ids: Vec<u32> = self.draw_elements(rng).into_iter().map(|x| joins.single[x]).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Draws the relation matrix; a row of zeros stands for `x_{n+1}` when `Γ∞ = Γ`.
    fn draw_matrix<R: Rng>(&self, rng: &mut R) -> Vec<Vec<u64>> {
        let Inner::Abelian { ell, k, last_free } = self.inner else {
            unreachable!("abelian path only")
        };
        let m = ell.pow(k);
        let mut mat: Vec<Vec<u64>> = (0..self.n).map(|_| (0..self.n).map(|_| rng.gen_range(0..m)).collect()).collect();
        mat.push(if last_free { (0..self.n).map(|_| rng.gen_range(0..m)).collect() } else { vec![0; self.n] });
        mat
    }

    fn draw_abelian<R: Rng>(&self, rng: &mut R) -> AbelianStructure {
        let Inner::Abelian { ell, k, .. } = self.inner else {
            unreachable!("abelian path only")
        };
        coker(&self.draw_matrix(rng), self.n, ell, k)
    }
}

fn coker(mat: &[Vec<u64>], cols: usize, ell: u64, k: u32) -> AbelianStructure {
    if cols == 0 {
        return AbelianStructure::trivial();
    }
    let s = local_smith(mat, cols, ell, k);
    let factors: Vec<u64> = s.vals.iter().map(|&v| ell.pow(v)).filter(|&f| f > 1).collect();
    AbelianStructure::from_cyclic(&factors)
}

/// The relations `x₁..x_{n+1}` behind one sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witnesses {
    /// Rows of `(ℤ/ℓ^k)^n` (abelian fast path).
    Vectors(Vec<Vec<u64>>),
    /// Element indices of `ℱ_n^𝒞`.
    Elements(Vec<usize>),
}

/// One draw of `X` with the relations that produced it.
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub quotient: Outcome,
    pub witnesses: Witnesses,
}

/// One draw of `X`.
pub fn sample_x<R: Rng>(model: &Model, rng: &mut R) -> Result<SampleOutcome> {
    match &model.inner {
        Inner::Abelian { ell, k, .. } => {
            let mat = model.draw_matrix(rng);
            let quotient = Outcome::Abelian(coker(&mat, model.n, *ell, *k));
            Ok(SampleOutcome { quotient, witnesses: Witnesses::Vectors(mat) })
        }
        Inner::General { free, .. } => {
            let xs = model.draw_elements(rng);
            let ys: Vec<usize> = xs.iter().flat_map(|&x| free.group.y(x)).collect();
            let n = free.group.gamma_normal_closure(&ys);
            let (q, _) = free.group.quotient(&n)?;
            Ok(SampleOutcome { quotient: Outcome::Group(q), witnesses: Witnesses::Elements(xs) })
        }
    }
}

/// Estimates for one target `H`.
#[derive(Clone, Debug)]
pub struct TargetStats {
    pub name: String,
    /// `P̂(X ≅ H)` and its standard error.
    pub prob: f64,
    pub prob_se: f64,
    /// Sample mean of `#Sur_Γ(X, H)` and its standard error.
    pub sur_mean: f64,
    pub sur_se: f64,
}

#[derive(Clone, Debug)]
pub struct McReport {
    pub trials: u64,
    pub seed: u64,
    /// Count of each outcome label, in label order.
    pub distribution: Vec<(String, u64)>,
    pub targets: Vec<TargetStats>,
}

/// Distinct outcomes with their multiplicity, in a deterministic order.
enum Tally {
    Abelian(BTreeMap<Vec<u64>, u64>),
    General(BTreeMap<Vec<u32>, u64>),
}

fn run_chunk(model: &Model, seed: u64, lo: u64, hi: u64) -> Tally {
    let rng_for = |t: u64| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(t);
        r
    };
    if model.is_fast_path() {
        let mut m = BTreeMap::new();
        for t in lo..hi {
            let x = model.draw_abelian(&mut rng_for(t));
            *m.entry(x.factors().to_vec()).or_insert(0) += 1;
        }
        Tally::Abelian(m)
    } else {
        let mut m = BTreeMap::new();
        for t in lo..hi {
            *m.entry(model.draw_ids(&mut rng_for(t))).or_insert(0) += 1;
        }
        Tally::General(m)
    }
}

/// Monte Carlo estimates of `P(X ≅ H)` and `E[#Sur_Γ(X, H)]` for each target.
pub fn monte_carlo(model: &Model, trials: u64, seed: u64, targets: &[(String, GammaGroup)], spec: &VarietySpec) -> Result<McReport> {
    if trials == 0 {
        return Err(Error::validation("at least one trial is needed"));
    }
    let chunks = trials.div_ceil(CHUNK) as usize;
    let tallies = par::map_range(chunks, |c| {
        let lo = c as u64 * CHUNK;
        run_chunk(model, seed, lo, (lo + CHUNK).min(trials))
    });
    // (outcome, count) pairs
    let mut outcomes: Vec<(Outcome, u64)> = Vec::new();
    match &model.inner {
        Inner::Abelian { .. } => {
            let mut merged: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            for t in tallies {
                let Tally::Abelian(m) = t else { unreachable!() };
                for (k, v) in m {
                    *merged.entry(k).or_insert(0) += v;
                }
            }
            outcomes = merged.into_iter().map(|(k, v)| (Outcome::Abelian(AbelianStructure::from_cyclic(&k)), v)).collect();
        }
        Inner::General { free, joins, .. } => {
            let mut merged: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
            for t in tallies {
                let Tally::General(m) = t else { unreachable!() };
                for (k, v) in m {
                    *merged.entry(k).or_insert(0) += v;
                }
            }
            let mut table = JoinTable::new(&free.group, &joins.subs);
            let mut by_n: BTreeMap<usize, u64> = BTreeMap::new();
            for (ids, v) in merged {
                let mut acc = 0;
                for id in ids {
                    acc = table.join(acc, table.base_ids[id as usize]);
                }
                *by_n.entry(acc).or_insert(0) += v;
            }
            for (nid, v) in by_n {
                let (q, _) = free.group.quotient(&table.subs[nid])?;
                outcomes.push((Outcome::Group(q), v));
            }
        }
    }
    let classes = group_classes(outcomes);
    let mut distribution: BTreeMap<String, u64> = BTreeMap::new();
    for (o, v) in &classes {
        *distribution.entry(o.label()).or_insert(0) += v;
    }
    let n = trials as f64;
    let mut stats = Vec::new();
    for (name, h) in targets {
        let member = spec.abelian_member(h);
        if model.is_fast_path() && member.is_none() {
            return Err(Error::validation(format!("target {name} is not in the variety")));
        }
        let mut hits = 0u64;
        let (mut s1, mut s2) = (0f64, 0f64);
        for (o, v) in &classes {
            let (iso, sur) = match o {
                Outcome::Abelian(a) => {
                    let hm = member.as_ref().expect("checked above");
                    (a == hm, a.sur_count(hm) as f64)
                }
                Outcome::Group(g) => (gamma_isomorphic(g, h), count_gamma_homs(g, h, true) as f64),
            };
            if iso {
                hits += v;
            }
            s1 += sur * *v as f64;
            s2 += sur * sur * *v as f64;
        }
        let p = hits as f64 / n;
        let mean = s1 / n;
        let var = if trials > 1 { ((s2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        stats.push(TargetStats {
            name: name.clone(),
            prob: p,
            prob_se: (p * (1.0 - p) / n).sqrt(),
            sur_mean: mean,
            sur_se: (var / n).sqrt(),
        });
    }
    Ok(McReport { trials, seed, distribution: distribution.into_iter().collect(), targets: stats })
}

/// Merges outcomes that are Γ-isomorphic, keeping first-appearance order.
fn group_classes(outcomes: Vec<(Outcome, u64)>) -> Vec<(Outcome, u64)> {
    let mut out: Vec<(String, Outcome, u64)> = Vec::new();
    for (o, v) in outcomes {
        let key = o.label();
        let found = out.iter_mut().find(|(k, r, _)| {
            *k == key
                && match (r, &o) {
                    (Outcome::Group(a), Outcome::Group(b)) => gamma_isomorphic(a, b),
                    _ => true,
                }
        });
        match found {
            Some(e) => e.2 += v,
            None => out.push((key, o, v)),
        }
    }
    out.into_iter().map(|(_, o, v)| (o, v)).collect()
}

/// The exact law of `X^n` over all `|ℱ|^n·|ℱ^{Γ∞}|` choices.
#[derive(Clone, Debug)]
pub struct Exhaustive {
    pub total: BigUint,
    /// Γ-isomorphism classes with the number of tuples giving each.
    pub classes: Vec<(GammaGroup, BigUint)>,
}

impl Exhaustive {
    pub fn probability(&self, h: &GammaGroup) -> BigRational {
        let hits: BigUint = self.classes.iter().filter(|(g, _)| gamma_isomorphic(g, h)).map(|(_, c)| c.clone()).sum();
        BigRational::new(hits.into(), self.total.clone().into())
    }

    /// `E[#Sur_Γ(X, H)]`.
    pub fn expected_sur(&self, h: &GammaGroup) -> BigRational {
        let s: BigUint = self.classes.iter().map(|(g, c)| c * BigUint::from(count_gamma_homs(g, h, true))).sum();
        BigRational::new(s.into(), self.total.clone().into())
    }
}

/// Enumerates every tuple by dynamic programming over the lattice of
/// Γ-stable normal subgroups: only the running join matters.
pub fn exhaustive_outcomes(free: &FreeAdmissible, gamma_inf: &[usize]) -> Result<Exhaustive> {
    let f = &free.group;
    let joins = Joins::new(f);
    let mut table = JoinTable::new(f, &joins.subs);
    // weight of each closure id among all elements, and among Γ∞-fixed ones
    let tally = |xs: &mut dyn Iterator<Item = usize>| -> BTreeMap<usize, BigUint> {
        let mut m = BTreeMap::new();
        for x in xs {
            *m.entry(table.base_ids[joins.single[x] as usize]).or_insert_with(BigUint::zero) += 1u32;
        }
        m
    };
    let all = tally(&mut (0..f.base.order()));
    let fixed = tally(&mut f.invariants(gamma_inf).into_iter());
    let mut dist: BTreeMap<usize, BigUint> = BTreeMap::from([(0, BigUint::from(1u32))]);
    for step in 0..=free.n {
        let weights = if step < free.n { &all } else { &fixed };
        let mut next: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (a, ca) in &dist {
            for (b, cb) in weights {
                let j = table.join(*a, *b);
                *next.entry(j).or_insert_with(BigUint::zero) += ca * cb;
            }
        }
        dist = next;
    }
    let total: BigUint = dist.values().sum();
    let mut by_key: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
    for (id, c) in dist {
        by_key.insert(table.subs[id].clone(), c);
    }
    let mut outcomes = Vec::new();
    for (n, c) in by_key {
        let (q, _) = f.quotient(&n)?;
        outcomes.push((q, c));
    }
    let mut classes: Vec<(String, GammaGroup, BigUint)> = Vec::new();
    for (q, c) in outcomes {
        let key = fingerprint(&q);
        match classes.iter_mut().find(|(k, r, _)| *k == key && gamma_isomorphic(r, &q)) {
            Some(e) => e.2 += c,
            None => classes.push((key, q, c)),
        }
    }
    Ok(Exhaustive { total, classes: classes.into_iter().map(|(_, g, c)| (g, c)).collect() })
}

#[cfg(test)]
mod tests {
    use super::super::{moment_n, mu_n, DEFAULT_FREE_ORDER_CAP};
    use super::*;
    use crate::grp::catalog::abelian;

    fn inv(orders: &[usize]) -> GammaGroup {
        GammaGroup::inversion(abelian(orders)).unwrap()
    }

    #[test]
    fn exhaustive_matches_formulas() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        for n in 1..=2 {
            let f = free_admissible(n, &spec, DEFAULT_FREE_ORDER_CAP).unwrap();
            for gi in [vec![0, 1], vec![0]] {
                let ex = exhaustive_outcomes(&f, &gi).unwrap();
                for orders in [vec![], vec![3], vec![3, 3]] {
                    let h = inv(&orders);
                    assert_eq!(ex.probability(&h), mu_n(&h, &spec, &gi, n).unwrap(), "P, n={n} Γ∞={gi:?} H={orders:?}");
                    assert_eq!(ex.expected_sur(&h), moment_n(&h, &gi, n), "E, n={n} Γ∞={gi:?} H={orders:?}");
                }
            }
        }
    }

    #[test]
    fn monte_carlo_is_reproducible_and_close() {
        let spec = VarietySpec::abelian_inversion(3, 1).unwrap();
        let model = Model::new(&spec, 3, &[0, 1], DEFAULT_FREE_ORDER_CAP).unwrap();
        let targets = vec![("Z3".to_string(), inv(&[3]))];
        let a = monte_carlo(&model, 5000, 7, &targets, &spec).unwrap();
        let b = par::with_workers(Some(1), || monte_carlo(&model, 5000, 7, &targets, &spec).unwrap());
        assert_eq!(a.distribution, b.distribution);
        let exact: f64 = num_traits::ToPrimitive::to_f64(&mu_n(&inv(&[3]), &spec, &[0, 1], 3).unwrap()).unwrap();
        let t = &a.targets[0];
        assert!((t.prob - exact).abs() < 5.0 * t.prob_se, "{} vs {exact}", t.prob);
    }

    #[test]
    fn general_sampler_agrees_with_fast_path() {
        let fast = VarietySpec::abelian_inversion(3, 1).unwrap();
        let general = VarietySpec::new(vec![inv(&[3])]).unwrap();
        let targets = vec![("1".to_string(), inv(&[])), ("Z3".to_string(), inv(&[3]))];
        for gi in [vec![0, 1], vec![0]] {
            let mf = Model::new(&fast, 2, &gi, DEFAULT_FREE_ORDER_CAP).unwrap();
            let mg = Model::new(&general, 2, &gi, DEFAULT_FREE_ORDER_CAP).unwrap();
            let rf = monte_carlo(&mf, 4000, 11, &targets, &fast).unwrap();
            let rg = monte_carlo(&mg, 4000, 11, &targets, &general).unwrap();
            for (a, b) in rf.targets.iter().zip(&rg.targets) {
                let se = (a.prob_se.powi(2) + b.prob_se.powi(2)).sqrt();
                assert!((a.prob - b.prob).abs() < 5.0 * se + 1e-9, "{} {} vs {}", a.name, a.prob, b.prob);
            }
        }
    }

    #[test]
    fn general_sample_respects_fixed_last_relation() {
        let spec = VarietySpec::new(vec![inv(&[3])]).unwrap();
        let model = Model::new(&spec, 2, &[0, 1], DEFAULT_FREE_ORDER_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let s = sample_x(&model, &mut rng).unwrap();
            let Witnesses::Elements(xs) = s.witnesses else { panic!() };
            assert_eq!(xs.len(), 3);
            assert_eq!(xs[2], 0);
        }
    }

    #[test]
    fn single_sample_shapes() {
        let spec = VarietySpec::abelian_inversion(3, 2).unwrap();
        let model = Model::new(&spec, 4, &[0, 1], DEFAULT_FREE_ORDER_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let s = sample_x(&model, &mut rng).unwrap();
            let Outcome::Abelian(a) = s.quotient else { panic!() };
            assert!(a.rank() <= 4 && 9 % a.exponent() == 0);
            let Witnesses::Vectors(rows) = s.witnesses else { panic!() };
            assert_eq!(rows.len(), 5);
            assert!(rows[4].iter().all(|&x| x == 0));
        }
    }
}
