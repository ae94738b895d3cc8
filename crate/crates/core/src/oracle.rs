//! Exhaustive censuses over small prime fields.
//!
//! Over `F_p` the relation `YX − γXY = I` is linear in `Y` for fixed `X`, so
//! every solution of size `n` is found by sweeping all `p^{n²}` matrices `X`
//! and solving for `Y` exactly. The census then keeps the irreducible
//! noncommutative pairs, groups them by explicit equivalence and compares the
//! classes with the list of canonical forms.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Value};

use crate::burnside::is_irreducible;
use crate::families::Solution;
use crate::field::{FieldCtx, FieldElem, FieldKind};
use crate::json::{canonical_to_json, ctx_to_json, elem_to_json, solution_to_json};
use crate::matrix::{solve_affine, sylvester_operator, Mat};
use crate::reduce::{are_equivalent, canonicalize, orbit_representative, CanonicalForm, ReduceError};

/// Default cap on the number of `X` matrices a sweep may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "QWEYL_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("sweep of {needed} matrices exceeds the budget of {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("censuses need a prime field")]
    NotPrimeField,
    #[error("size must be at least 1")]
    ZeroSize,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Skip `X` unless `X^l` is scalar. Keeps every irreducible pair.
    pub prune: bool,
    pub budget: u64,
    /// Worker threads for the sweep; `0` or `1` runs inline.
    pub jobs: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            prune: false,
            budget: budget_from_env(),
            jobs: 1,
        }
    }
}

/// [`DEFAULT_BUDGET`] unless the environment overrides it.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn sweep_size(ctx: &FieldCtx, n: usize, budget: u64) -> Result<u64, OracleError> {
    if ctx.kind() != FieldKind::Prime {
        return Err(OracleError::NotPrimeField);
    }
    if n == 0 {
        return Err(OracleError::ZeroSize);
    }
    let p = ctx.characteristic();
    match p.checked_pow((n * n) as u32) {
        Some(total) if total <= budget => Ok(total),
        Some(total) => Err(OracleError::BudgetExceeded {
            needed: total.to_string(),
            budget,
        }),
        None => Err(OracleError::BudgetExceeded {
            needed: format!("{p}^{}", n * n),
            budget,
        }),
    }
}

/// The `idx`-th matrix in lexicographic order, entry `(0,0)` most significant.
fn x_at(ctx: &FieldCtx, n: usize, mut idx: u64) -> Mat {
    let p = ctx.characteristic();
    let mut digits = vec![0u64; n * n];
    for d in digits.iter_mut().rev() {
        *d = idx % p;
        idx /= p;
    }
    Mat::from_vector(ctx, n, n, digits.into_iter().map(|d| ctx.from_residue(d)).collect())
}

/// Every `Y` with `YX − γXY = I`, in lexicographic order of the coordinates
/// along the kernel basis.
pub fn solutions_for_x(x: &Mat) -> Vec<Solution> {
    let ctx = x.ctx();
    let n = x.rows();
    let op = sylvester_operator(x, x, &ctx.gamma());
    let Some(aff) = solve_affine(&op, &Mat::identity(ctx, n).vectorize()) else {
        return Vec::new();
    };
    let p = ctx.characteristic();
    let d = aff.kernel.len() as u32;
    let count = p.pow(d);
    (0..count)
        .map(|mut idx| {
            let mut v = aff.particular.clone();
            let mut coords = vec![0u64; aff.kernel.len()];
            for c in coords.iter_mut().rev() {
                *c = idx % p;
                idx /= p;
            }
            for (c, k) in coords.iter().zip(&aff.kernel) {
                if *c != 0 {
                    let c = ctx.from_residue(*c);
                    for (vi, ki) in v.iter_mut().zip(k) {
                        *vi = &*vi + &(&c * ki);
                    }
                }
            }
            Solution::new(x.clone(), Mat::from_vector(ctx, n, n, v)).expect("square, same shape")
        })
        .collect()
}

fn passes_prune(x: &Mat) -> bool {
    x.pow(x.ctx().order() as u64).expect("square").is_scalar().is_some()
}

/// All solutions of size `n` over a prime field, in sweep order.
pub fn enumerate_solutions(
    ctx: &FieldCtx,
    n: usize,
    opts: &CensusOptions,
) -> Result<impl Iterator<Item = Solution>, OracleError> {
    let total = sweep_size(ctx, n, opts.budget)?;
    let ctx = ctx.clone();
    let prune = opts.prune;
    Ok((0..total).flat_map(move |idx| {
        let x = x_at(&ctx, n, idx);
        if prune && !passes_prune(&x) {
            Vec::new()
        } else {
            solutions_for_x(&x)
        }
    }))
}

/// Per-chunk tallies of a sweep, merged in index order.
#[derive(Default)]
struct Partial {
    total: u64,
    solved: u64,
    irreducible: Vec<Solution>,
}

fn sweep_range(ctx: &FieldCtx, n: usize, prune: bool, range: std::ops::Range<u64>) -> Partial {
    let mut out = Partial::default();
    for idx in range {
        let x = x_at(ctx, n, idx);
        if prune && !passes_prune(&x) {
            continue;
        }
        out.solved += 1;
        for s in solutions_for_x(&x) {
            out.total += 1;
            if !s.is_commutative() && is_irreducible(&s).expect("relation holds") {
                out.irreducible.push(s);
            }
        }
    }
    out
}

fn sweep(ctx: &FieldCtx, n: usize, opts: &CensusOptions, total: u64) -> Partial {
    let jobs = opts.jobs.max(1);
    if jobs == 1 {
        return sweep_range(ctx, n, opts.prune, 0..total);
    }
    use rayon::prelude::*;
    let chunks = (jobs as u64 * 8).min(total.max(1));
    let step = total.div_ceil(chunks);
    let ranges: Vec<_> = (0..chunks).map(|c| c * step..((c + 1) * step).min(total)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let parts: Vec<Partial> = pool.install(|| {
        ranges
            .into_par_iter()
            .map(|r| sweep_range(ctx, n, opts.prune, r))
            .collect()
    });
    parts.into_iter().fold(Partial::default(), |mut acc, p| {
        acc.total += p.total;
        acc.solved += p.solved;
        acc.irreducible.extend(p.irreducible);
        acc
    })
}

/// One equivalence class found by the census.
#[derive(Clone, Debug)]
pub struct CensusClass {
    /// Canonical form of the representative, `None` when it has none.
    pub canonical: Option<CanonicalForm>,
    /// Why the representative has no canonical form.
    pub failure: Option<String>,
    pub size: usize,
    /// First member met in sweep order.
    pub representative: Solution,
    /// Members that are literally the output of a canonical constructor.
    pub canonical_members: usize,
    /// `X^l` and `Y^l` of the representative (scalars on irreducible pairs).
    pub x_power: Option<FieldElem>,
    pub y_power: Option<FieldElem>,
    pub members: Vec<Solution>,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub ctx: FieldCtx,
    pub n: usize,
    pub pruned: bool,
    /// Matrices `X` for which `Y` was solved.
    pub x_solved: u64,
    pub total_solutions: u64,
    pub irreducible_count: usize,
    pub classes: Vec<CensusClass>,
    pub anomalies: Vec<String>,
}

impl CensusReport {
    pub fn passes(&self) -> bool {
        self.anomalies.is_empty()
    }

    /// Classes whose representative has no canonical form.
    pub fn unsplit(&self) -> impl Iterator<Item = &CensusClass> {
        self.classes.iter().filter(|c| c.canonical.is_none())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ctx": ctx_to_json(&self.ctx),
            "n": self.n,
            "pruned": self.pruned,
            "x_solved": self.x_solved,
            "total_solutions": self.total_solutions,
            "irreducible_count": self.irreducible_count,
            "class_count": self.classes.len(),
            "classes": self.classes.iter().map(|c| json!({
                "canonical": c.canonical.as_ref().map(canonical_to_json),
                "failure": c.failure,
                "size": c.size,
                "canonical_members": c.canonical_members,
                "x_power": c.x_power.as_ref().map(elem_to_json),
                "y_power": c.y_power.as_ref().map(elem_to_json),
                "representative": solution_to_json(&c.representative),
            })).collect::<Vec<_>>(),
            "anomalies": self.anomalies,
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

fn canonical_of(s: &Solution) -> Result<CanonicalForm, ReduceError> {
    canonicalize(s).map(|(c, _)| c)
}

/// Sweeps, filters and groups all irreducible noncommutative solutions of size `n`.
pub fn classify_bruteforce(ctx: &FieldCtx, n: usize, opts: &CensusOptions) -> Result<CensusReport, OracleError> {
    let total = sweep_size(ctx, n, opts.budget)?;
    let part = sweep(ctx, n, opts, total);
    let pairs = part.irreducible;
    let mut anomalies = Vec::new();

    // Each pair is tested against every current representative; several hits
    // merge classes.
    let mut uf = UnionFind(Vec::new());
    let mut reps: Vec<usize> = Vec::new();
    let mut slot_of = Vec::with_capacity(pairs.len());
    for (i, s) in pairs.iter().enumerate() {
        let hits: Vec<usize> = (0..reps.len())
            .filter(|&k| are_equivalent(s, &pairs[reps[k]]).is_some())
            .collect();
        match hits.as_slice() {
            [] => {
                uf.0.push(reps.len());
                reps.push(i);
                slot_of.push(reps.len() - 1);
            }
            [k] => slot_of.push(*k),
            [first, rest @ ..] => {
                anomalies.push(format!(
                    "pair {i} is equivalent to {} class representatives",
                    hits.len()
                ));
                for k in rest {
                    uf.union(*first, *k);
                }
                slot_of.push(*first);
            }
        }
    }

    let mut grouped: BTreeMap<usize, Vec<Solution>> = BTreeMap::new();
    for (i, s) in pairs.iter().enumerate() {
        let root = uf.find(slot_of[i]);
        grouped.entry(root).or_default().push(s.clone());
    }

    let l = ctx.order() as u64;
    let mut classes = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (ci, members) in grouped.into_values().enumerate() {
        let representative = members[0].clone();
        let (canonical, failure) = match canonical_of(&representative) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let mut canonical_members = 0;
        for (mi, m) in members.iter().enumerate() {
            match canonical_of(m) {
                Ok(c) => {
                    if canonical.as_ref() != Some(&c) {
                        anomalies.push(format!("class {ci}: member {mi} canonicalizes differently"));
                    }
                    if c.solution(ctx) == *m {
                        canonical_members += 1;
                    }
                }
                Err(e) => {
                    if canonical.is_some() {
                        anomalies.push(format!("class {ci}: member {mi} fails to canonicalize: {e}"));
                    }
                }
            }
        }
        if canonical_members != 1 {
            let extra = match &failure {
                Some(f) => format!(" ({f})"),
                None => String::new(),
            };
            anomalies.push(format!(
                "class {ci} contains {canonical_members} canonical-family members{extra}"
            ));
        }
        if let Some(c) = &canonical {
            let key = canonical_to_json(c).to_string();
            if let Some(prev) = seen.insert(key.clone(), ci) {
                anomalies.push(format!("classes {prev} and {ci} share canonical form {key}"));
            }
        }
        let x_power = representative.x().pow(l).expect("square").is_scalar();
        let y_power = representative.y().pow(l).expect("square").is_scalar();
        classes.push(CensusClass {
            canonical,
            failure,
            size: members.len(),
            representative,
            canonical_members,
            x_power,
            y_power,
            members,
        });
    }

    Ok(CensusReport {
        ctx: ctx.clone(),
        n,
        pruned: opts.prune,
        x_solved: part.solved,
        total_solutions: part.total,
        irreducible_count: pairs.len(),
        classes,
        anomalies,
    })
}

/// Canonical forms over `F_p`: every `β`, then every orbit representative
/// `λ` paired with every nonzero `η`.
pub fn predicted_forms(ctx: &FieldCtx) -> Vec<CanonicalForm> {
    let mut out: Vec<CanonicalForm> = ctx
        .elements()
        .map(|beta| CanonicalForm::SingularBeta { beta })
        .collect();
    let mut reps: Vec<FieldElem> = Vec::new();
    for lambda in ctx.elements().filter(|e| !e.is_zero()) {
        let (rep, _) = orbit_representative(&lambda);
        if !reps.contains(&rep) {
            reps.push(rep);
        }
    }
    reps.sort_by(|a, b| a.canonical_cmp(b));
    for rep in reps {
        for eta in ctx.elements().filter(|e| !e.is_zero()) {
            out.push(CanonicalForm::NonsingularLambdaEta {
                lambda_rep: rep.clone(),
                eta,
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub predicted: Vec<CanonicalForm>,
    /// Predicted forms with no census class.
    pub missing: Vec<CanonicalForm>,
    /// Census classes (by index) whose canonical form is absent or unpredicted.
    pub unexpected: Vec<usize>,
    pub bijection: bool,
}

impl CrossValidation {
    pub fn to_json(&self, report: &CensusReport) -> Value {
        json!({
            "bijection": self.bijection,
            "predicted_count": self.predicted.len(),
            "class_count": report.classes.len(),
            "missing": self.missing.iter().map(canonical_to_json).collect::<Vec<_>>(),
            "unexpected": self.unexpected.iter().map(|&i| {
                let c = &report.classes[i];
                json!({
                    "class": i,
                    "size": c.size,
                    "canonical": c.canonical.as_ref().map(canonical_to_json),
                    "failure": c.failure,
                    "x_power": c.x_power.as_ref().map(elem_to_json),
                    "y_power": c.y_power.as_ref().map(elem_to_json),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Compares the census classes with [`predicted_forms`].
pub fn cross_validate(report: &CensusReport) -> CrossValidation {
    let predicted = if report.n == report.ctx.order() {
        predicted_forms(&report.ctx)
    } else {
        Vec::new()
    };
    let mut hit = vec![false; predicted.len()];
    let mut unexpected = Vec::new();
    for (i, class) in report.classes.iter().enumerate() {
        match class
            .canonical
            .as_ref()
            .and_then(|c| predicted.iter().position(|p| p == c))
        {
            Some(k) if !hit[k] => hit[k] = true,
            _ => unexpected.push(i),
        }
    }
    let missing: Vec<_> = predicted
        .iter()
        .zip(&hit)
        .filter(|(_, h)| !**h)
        .map(|(p, _)| p.clone())
        .collect();
    let bijection = missing.is_empty() && unexpected.is_empty() && report.passes();
    CrossValidation {
        predicted,
        missing,
        unexpected,
        bijection,
    }
}

/// Outcome of re-testing the grouping on random pairs of members.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbeResult {
    pub within: usize,
    pub across: usize,
    pub disagreements: usize,
}

/// Draws `count` random member pairs and checks that [`are_equivalent`]
/// agrees with the class assignment, with an exact witness when it says yes.
pub fn probe_grouping(report: &CensusReport, count: usize, rng: &mut impl Rng) -> ProbeResult {
    let mut out = ProbeResult::default();
    if report.classes.is_empty() {
        return out;
    }
    for t in 0..count {
        let a = rng.gen_range(0..report.classes.len());
        let b = if t % 2 == 0 || report.classes.len() == 1 {
            a
        } else {
            let k = rng.gen_range(0..report.classes.len() - 1);
            if k >= a {
                k + 1
            } else {
                k
            }
        };
        let ma = &report.classes[a].members;
        let mb = &report.classes[b].members;
        let s1 = &ma[rng.gen_range(0..ma.len())];
        let s2 = &mb[rng.gen_range(0..mb.len())];
        let verdict = are_equivalent(s1, s2);
        let ok = match &verdict {
            Some(w) => a == b && w.certifies(s1, s2),
            None => a != b,
        };
        if a == b {
            out.within += 1;
        } else {
            out.across += 1;
        }
        if !ok {
            out.disagreements += 1;
        }
    }
    out
}
