//! Acceptance suite: one line per criterion.
//!
//! Each criterion runs the library check and, where values are derived rather
//! than constructed, an independent oracle from `common`. A criterion listed in
//! `KNOWN_FAILURES` is still run and printed as FAIL; the process exits nonzero
//! only on an unexpected outcome, so an expected failure that starts passing is
//! reported too.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common as o;
use qweyl::acceptance::{self, CriterionOutcome, CRITERIA};
use qweyl::families::{nonsingular_solution, singular_solution, OffDiagonal};
use qweyl::reduce::{reduce_singular, solve_d_for_shift};
use qweyl::sample::{random_elem, random_invertible, random_nonzero, random_vec, rng, DEFAULT_SEED};
use qweyl::{generated_algebra, CanonicalForm, FieldCtx, NonsingularParams, SingularParams};

/// Criteria that fail on a correct implementation, with the reason.
const KNOWN_FAILURES: &[(u8, &str)] = &[(
    9,
    "F_p is not algebraically closed: irreducible pairs whose X has no eigenvalue in F_p form extra classes",
)];

const LIMITS: [u64; 10] = [10, 30, 10, 5, 10, 5, 60, 30, 60, 120];

struct Oracle {
    checks: usize,
    failures: Vec<String>,
}

impl Oracle {
    fn new() -> Self {
        Oracle {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn primes(ls: std::ops::RangeInclusive<usize>) -> Vec<FieldCtx> {
    ls.map(|l| FieldCtx::smallest_prime(l).unwrap()).collect()
}

fn oracle_1_3() -> Oracle {
    let mut or = Oracle::new();
    for ctx in primes(2..=8) {
        let (p, g, l) = (ctx.characteristic(), o::gamma(&ctx), ctx.order() as u64);
        for (fam, s) in acceptance::sample_instances(&ctx, 20, 0x0dd) {
            let (x, y) = (o::from_mat(s.x()), o::from_mat(s.y()));
            let res = o::residual(&x, &y, g, p);
            or.check(res.iter().flatten().all(|&v| v == 0), || format!("{ctx} {fam}: residual"));
            or.check(o::scalar_of(&o::pow(&x, l, p)).is_some(), || format!("{ctx} {fam}: X^l"));
            or.check(o::scalar_of(&o::pow(&y, l, p)).is_some(), || format!("{ctx} {fam}: Y^l"));
            let u = o::lin(&o::mul(&y, &x, p), 1, &o::mul(&x, &y, p), p - 1, p);
            or.check(o::det_nonzero(&u, p), || format!("{ctx} {fam}: U singular"));
            let ux = o::mul(&u, &x, p);
            let xu = o::mul(&x, &u, p);
            or.check(ux == o::lin(&xu, g, &o::zero(x.len()), 0, p), || format!("{ctx} {fam}: UX"));
        }
    }
    or
}

fn oracle_2() -> Oracle {
    let mut or = Oracle::new();
    for ctx in primes(2..=6) {
        let p = ctx.characteristic();
        let l = ctx.order();
        let mut r = rng(2);
        for beta in [ctx.zero(), ctx.one(), random_elem(&ctx, &mut r)] {
            let s = singular_solution(&ctx, &SingularParams::Beta(beta)).unwrap();
            let d = o::algebra_dim(&o::from_mat(s.x()), &o::from_mat(s.y()), p);
            or.check(d == l * l, || format!("{ctx}: singular dim {d}"));
            let lib = generated_algebra(&s, false).unwrap().dim();
            or.check(lib == d, || format!("{ctx}: library dim {lib} vs oracle {d}"));
        }
        let lambda = random_nonzero(&ctx, &mut r);
        let eta = random_nonzero(&ctx, &mut r);
        let s = nonsingular_solution(
            &ctx,
            &NonsingularParams {
                lambda,
                off: OffDiagonal::Eta(eta),
            },
        )
        .unwrap();
        let d = o::algebra_dim(&o::from_mat(s.x()), &o::from_mat(s.y()), p);
        or.check(d == l * l, || format!("{ctx}: nonsingular dim {d}"));
    }
    or
}

fn oracle_4_5() -> Oracle {
    let mut or = Oracle::new();
    for ctx in primes(2..=6) {
        let (p, g, l) = (ctx.characteristic(), o::gamma(&ctx), ctx.order());
        let s = singular_solution(&ctx, &SingularParams::Beta(ctx.from_int(3))).unwrap();
        let y = o::from_mat(s.y());
        for v in 1..l {
            // row l of Y^v: the product of the v subdiagonal entries on the path l → l−v
            let yv = o::pow(&y, v as u64, p);
            let expect = (l - v..l).fold(1, |acc, k| acc * o::geo(g, l - 1 - k, p) % p);
            or.check(yv[l - 1][l - v - 1] == expect, || format!("{ctx} v={v}: Y^v entry"));
            let lib = qweyl::families::power_row_value(&ctx, v).unwrap().residue().unwrap();
            or.check(lib == expect, || format!("{ctx} v={v}: power_row_value {lib} vs {expect}"));
        }
        if l <= 5 {
            for n in 1..=l {
                let lead = (n + 1..=l).fold(1, |acc, j| acc * o::geo(g, l - j, p) % p);
                let c = qweyl::elementary_in_monomials(&s, 1, n).unwrap();
                or.check(c.leading.residue() == Some(lead), || format!("{ctx} n={n}: leading"));
            }
        }
    }
    or
}

fn oracle_6() -> Oracle {
    let mut or = Oracle::new();
    for ctx in primes(2..=6) {
        let (p, g, l) = (ctx.characteristic(), o::gamma(&ctx), ctx.order());
        for n in 1..=3 * l {
            // D·S − γ·S·D = I as a linear system in the n² entries of D
            let s: o::M = (0..n).map(|i| (0..n).map(|j| u64::from(j == i + 1)).collect()).collect();
            let mut rows = Vec::new();
            let mut aug = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![0u64; n * n];
                    for k in 0..n {
                        row[i * n + k] = (row[i * n + k] + s[k][j]) % p;
                        row[k * n + j] = (row[k * n + j] + (p - g) * s[i][k]) % p;
                    }
                    let mut a = row.clone();
                    a.push(u64::from(i == j));
                    rows.push(row);
                    aug.push(a);
                }
            }
            let (ra, rb) = (o::rank(rows, p), o::rank(aug, p));
            let feasible = ra == rb;
            or.check(feasible == (n % l == 0), || format!("{ctx} n={n}: oracle feasibility {feasible}"));
            let lib = solve_d_for_shift(&ctx, n).dimension();
            let expect = feasible.then_some(n * n - ra);
            or.check(lib == expect, || format!("{ctx} n={n}: library {lib:?} vs oracle {expect:?}"));
        }
    }
    or
}

fn oracle_7() -> Oracle {
    let mut or = Oracle::new();
    for ctx in primes(2..=6) {
        let (p, g, l) = (ctx.characteristic(), o::gamma(&ctx), ctx.order());
        let mut r = rng(7);
        for k in 0..100 {
            let alphas = random_vec(&ctx, l, &mut r);
            let a: Vec<u64> = alphas.iter().map(|e| e.residue().unwrap()).collect();
            let beta = o::beta_from_alphas(&a, g, p);
            if l == 2 {
                or.check(beta == (a[0] + a[1] * a[1]) % p, || format!("{ctx}: closed form at l=2"));
            }
            let s = singular_solution(&ctx, &SingularParams::Alphas(alphas)).unwrap();
            let got = reduce_singular(&s).map(|red| red.canonical);
            let want = CanonicalForm::SingularBeta {
                beta: ctx.from_residue(beta),
            };
            or.check(got.as_ref() == Ok(&want), || format!("{ctx} #{k}: library {got:?}, oracle beta {beta}"));
            // the oracle value is also certified directly: (shift, Y_α) and (shift, Y_β) intertwine
            let target = want.solution(&ctx);
            let d = o::intertwiner_dim(
                &o::from_mat(s.x()),
                &o::from_mat(s.y()),
                &o::from_mat(target.x()),
                &o::from_mat(target.y()),
                p,
            );
            or.check(d == 1, || format!("{ctx} #{k}: intertwiner dimension {d}"));
        }
    }
    or
}

fn oracle_8() -> Oracle {
    let mut or = Oracle::new();
    for ctx in primes(2..=3) {
        let p = ctx.characteristic();
        let mut r = rng(8);
        let forms: Vec<_> = (0..p)
            .map(|b| CanonicalForm::SingularBeta {
                beta: ctx.from_residue(b),
            })
            .collect();
        for (i, f) in forms.iter().enumerate() {
            let a = f.solution(&ctx);
            let g = random_invertible(&ctx, ctx.order(), &mut r);
            let moved = a.conjugate(&g).unwrap();
            let m = |s: &qweyl::Solution| (o::from_mat(s.x()), o::from_mat(s.y()));
            let ((x1, y1), (x2, y2)) = (m(&a), m(&moved));
            let d = o::intertwiner_dim(&x1, &y1, &x2, &y2, p);
            or.check(d == 1, || format!("{ctx} form {i}: self {d}"));
            for (j, h) in forms.iter().enumerate().filter(|(j, _)| *j != i) {
                let (x3, y3) = m(&h.solution(&ctx));
                let d = o::intertwiner_dim(&x1, &y1, &x3, &y3, p);
                or.check(d == 0, || format!("{ctx} forms {i},{j}: {d}"));
            }
        }
    }
    or
}

fn oracle_9(lib: &CriterionOutcome) -> Oracle {
    let mut or = Oracle::new();
    let runs = lib.detail["runs"].as_array().cloned().unwrap_or_default();
    for (p, predicted) in [(3u64, 5usize), (5, 13)] {
        let c = o::census_l2(p);
        let run = runs.iter().find(|r| r["p"] == p);
        let lib_classes = run.and_then(|r| r["class_count"].as_u64());
        let lib_irr = run.and_then(|r| r["irreducible_count"].as_u64());
        let lib_total = run.and_then(|r| r["total_solutions"].as_u64());
        println!(
            "    oracle p={p}: {} solutions, {} irreducible, {} classes, {} with a canonical member ({} canonical pairs), predicted {predicted}",
            c.solutions, c.irreducible, c.classes, c.classes_with_canonical, c.canonical_pairs
        );
        or.check(lib_total == Some(c.solutions as u64), || format!("p={p}: solution count differs"));
        or.check(lib_irr == Some(c.irreducible as u64), || format!("p={p}: irreducible count differs"));
        or.check(lib_classes == Some(c.classes as u64), || format!("p={p}: class count differs"));
        or.check(c.canonical_pairs == c.classes_with_canonical, || format!("p={p}: a class holds two canonical pairs"));
        or.check(c.classes == predicted, || {
            format!("p={p}: oracle finds {} classes, {predicted} predicted", c.classes)
        });
    }
    or
}

fn main() -> ExitCode {
    let seed = DEFAULT_SEED;
    let mut unexpected = 0;
    let mut outcomes = Vec::new();
    for (id, name) in CRITERIA {
        let start = Instant::now();
        let (lib, oracle) = match id {
            10 => {
                let a = acceptance::transcript(seed).to_string();
                let b = acceptance::transcript(seed).to_string();
                let mut or = Oracle::new();
                or.check(a == b, || "transcripts differ".into());
                (None, or)
            }
            _ => {
                let lib = acceptance::run_criterion(id, seed);
                let or = match id {
                    1 | 3 => oracle_1_3(),
                    2 => oracle_2(),
                    4 | 5 => oracle_4_5(),
                    6 => oracle_6(),
                    7 => oracle_7(),
                    8 => oracle_8(),
                    9 => oracle_9(&lib),
                    _ => unreachable!(),
                };
                (Some(lib), or)
            }
        };
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(LIMITS[id as usize - 1]);
        let lib_ok = lib.as_ref().is_none_or(|l| l.passed());
        let in_time = elapsed <= limit;
        let passed = lib_ok && oracle.failures.is_empty() && in_time;
        let checks = lib.as_ref().map_or(0, |l| l.checks) + oracle.checks;
        let failed = lib.as_ref().map_or(0, |l| l.failure_count) + oracle.failures.len();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        println!(
            "criterion {id:>2} {name:<24} {}  ({checks} checks, {failed} failed, {:.2} s of {} s)",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !passed {
            let lib_failures = lib.iter().flat_map(|l| l.failures.iter());
            for f in lib_failures.chain(&oracle.failures).take(8) {
                println!("    {f}");
            }
            if !in_time {
                println!("    over the time limit");
            }
        }
        match (passed, known) {
            (false, Some((_, why))) => println!("    expected failure: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("    listed as an expected failure but passed");
                unexpected += 1;
            }
            (true, None) => {}
        }
        outcomes.push(passed);
    }
    let passed = outcomes.iter().filter(|p| **p).count();
    println!("{passed}/{} criteria pass, {unexpected} unexpected outcomes", outcomes.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
