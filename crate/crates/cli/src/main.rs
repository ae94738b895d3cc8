//! `qweyl`: construct, verify, reduce and classify solutions of `YX − γXY = I`.
//!
//! Every command writes one JSON document. Exit status: 0 on success, 1 when
//! the mathematical answer is negative or a check fails, 2 on usage or input
//! errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qweyl::acceptance;
use qweyl::families::{
    nonsingular_solution, singular_solution, structural_report, NonsingularParams, OffDiagonal, SingularParams,
};
use qweyl::json::{
    elementary_to_json, mat_to_json, reduction_to_json, relation_to_json, solution_from_json, solution_to_json,
    structural_to_json, JsonError,
};
use qweyl::oracle::{budget_from_env, classify_bruteforce, cross_validate, CensusOptions};
use qweyl::reduce::reduce;
use qweyl::sample::DEFAULT_SEED;
use qweyl::{are_equivalent, elementary_in_monomials, generated_algebra, FieldCtx, FieldElem};

#[derive(Parser)]
#[command(name = "qweyl", version, about = "Exact matrix solutions of yx - gamma*xy = 1 at roots of unity")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a member of one of the canonical families.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Check YX − γXY = I and print the residual.
    Verify { input: String },
    /// Check the structural facts of irreducible solutions.
    Structural { input: String },
    /// Dimension of the algebra generated by X and Y.
    Irreducible {
        input: String,
        /// Accept pairs that do not satisfy the relation.
        #[arg(long)]
        allow_non_solution: bool,
    },
    /// e_mn as a combination of X^i Y^j for the pair (shift X, Y_β).
    Elementary {
        l: usize,
        m: usize,
        n: usize,
        #[arg(long, default_value = "cyclotomic")]
        ctx: String,
        #[arg(long, default_value = "0")]
        beta: String,
    },
    /// Canonical form, conjugating matrix and intermediate data.
    Reduce { input: String },
    /// Search for Q with Q·a·Q⁻¹ = b.
    Equivalent { a: String, b: String },
    /// Exhaustive classification over F_p.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        /// Primitive root to use instead of the smallest one.
        #[arg(long)]
        gamma: Option<u64>,
        /// Skip X unless X^l is scalar.
        #[arg(long)]
        prune: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Maximum number of X matrices to sweep (default from QWEYL_BUDGET or 10^7).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the acceptance suite and print its transcript.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    l: usize,
    /// `cyclotomic`, `prime:P` or `prime:P:GAMMA`.
    #[arg(long, default_value = "cyclotomic")]
    ctx: String,
}

#[derive(Subcommand)]
enum Family {
    /// (shift X, Y_β), or Y_α with `--alphas`.
    Singular {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, conflicts_with = "alphas")]
        beta: Option<String>,
        /// `α_1;…;α_l`.
        #[arg(long)]
        alphas: Option<String>,
    },
    /// (X_λ, Y_λ,b's), or Y_λη with `--eta`.
    Nonsingular {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: String,
        /// `b_1;…;b_l`.
        #[arg(long, conflicts_with = "eta")]
        bs: Option<String>,
        #[arg(long)]
        eta: Option<String>,
    },
}

/// A failed command: exit status and JSON body.
struct Failure {
    code: u8,
    body: Value,
}

fn usage(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        body: json!({"error": {"kind": kind, "message": message.into()}}),
    }
}

fn math(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        body: json!({"error": {"kind": kind, "message": message.into()}}),
    }
}

fn from_json_error(e: JsonError) -> Failure {
    Failure {
        code: 2,
        body: json!({"error": {"kind": "format", "field": e.field, "message": e.message}}),
    }
}

/// Result of a command: body plus whether the answer counts as success.
struct Answer {
    ok: bool,
    body: Value,
}

fn answer(ok: bool, body: Value) -> Result<Answer, Failure> {
    Ok(Answer { ok, body })
}

fn parse_ctx(spec: &str, l: usize) -> Result<FieldCtx, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| usage("usage", format!("--ctx: `{s}` is not a nonnegative integer")))
    };
    let ctx = match parts.as_slice() {
        ["cyclotomic"] => FieldCtx::cyclotomic(l),
        ["prime", p] => FieldCtx::prime(num(p)?, l, None),
        ["prime", p, g] => FieldCtx::prime(num(p)?, l, Some(num(g)?)),
        _ => return Err(usage("usage", format!("--ctx: expected cyclotomic, prime:P or prime:P:GAMMA, got `{spec}`"))),
    };
    ctx.map_err(|e| usage("field", format!("--ctx: {e}")))
}

fn parse_elem(ctx: &FieldCtx, flag: &str, s: &str) -> Result<FieldElem, Failure> {
    ctx.parse_elem(s).map_err(|e| usage("usage", format!("--{flag}: {e}")))
}

fn parse_list(ctx: &FieldCtx, flag: &str, s: &str) -> Result<Vec<FieldElem>, Failure> {
    let sep = if s.contains(';') || ctx.degree() > 1 { ';' } else { ',' };
    s.split(sep).map(|part| parse_elem(ctx, flag, part)).collect()
}

fn read_input(path: &str) -> Result<Value, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage("io", format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| usage("io", format!("{path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage("format", format!("{path}: {e}")))
}

fn read_solution(path: &str) -> Result<qweyl::Solution, Failure> {
    solution_from_json(&read_input(path)?).map_err(from_json_error)
}

fn construct(family: Family) -> Result<Answer, Failure> {
    let sol = match family {
        Family::Singular { field, beta, alphas } => {
            let ctx = parse_ctx(&field.ctx, field.l)?;
            let params = match (beta, alphas) {
                (_, Some(a)) => SingularParams::Alphas(parse_list(&ctx, "alphas", &a)?),
                (b, None) => SingularParams::Beta(parse_elem(&ctx, "beta", b.as_deref().unwrap_or("0"))?),
            };
            singular_solution(&ctx, &params)
        }
        Family::Nonsingular { field, lambda, bs, eta } => {
            let ctx = parse_ctx(&field.ctx, field.l)?;
            let lambda = parse_elem(&ctx, "lambda", &lambda)?;
            let off = match (bs, eta) {
                (Some(b), _) => OffDiagonal::Bs(parse_list(&ctx, "bs", &b)?),
                (None, Some(e)) => OffDiagonal::Eta(parse_elem(&ctx, "eta", &e)?),
                (None, None) => return Err(usage("usage", "nonsingular needs --bs or --eta")),
            };
            nonsingular_solution(&ctx, &NonsingularParams { lambda, off })
        }
    };
    let sol = sol.map_err(|e| usage("parameters", e.to_string()))?;
    answer(true, solution_to_json(&sol))
}

fn run(command: Command) -> Result<Answer, Failure> {
    match command {
        Command::Construct { family } => construct(family),
        Command::Verify { input } => {
            let rep = read_solution(&input)?.verify_relation();
            answer(rep.holds, relation_to_json(&rep))
        }
        Command::Structural { input } => {
            let s = read_solution(&input)?;
            if !s.relation_holds() {
                return Err(math("not_a_solution", "pair does not satisfy yx - gamma*xy = 1"));
            }
            let rep = structural_report(&s);
            answer(rep.all_pass(), structural_to_json(&rep))
        }
        Command::Irreducible {
            input,
            allow_non_solution,
        } => {
            let s = read_solution(&input)?;
            let alg = generated_algebra(&s, allow_non_solution).map_err(|e| math("not_a_solution", e.to_string()))?;
            answer(
                alg.is_full(),
                json!({"irreducible": alg.is_full(), "algebra_dim": alg.dim()}),
            )
        }
        Command::Elementary { l, m, n, ctx, beta } => {
            let ctx = parse_ctx(&ctx, l)?;
            let beta = parse_elem(&ctx, "beta", &beta)?;
            let s = singular_solution(&ctx, &SingularParams::Beta(beta)).map_err(|e| usage("parameters", e.to_string()))?;
            let c = elementary_in_monomials(&s, m, n).map_err(|e| usage("range", e.to_string()))?;
            answer(true, elementary_to_json(&c))
        }
        Command::Reduce { input } => {
            let s = read_solution(&input)?;
            let red = reduce(&s).map_err(|e| math("reduce", e.to_string()))?;
            answer(true, reduction_to_json(&red))
        }
        Command::Equivalent { a, b } => {
            let (a, b) = (read_solution(&a)?, read_solution(&b)?);
            if a.ctx() != b.ctx() {
                return Err(usage("field", "the two solutions live over different fields"));
            }
            match are_equivalent(&a, &b) {
                Some(w) => answer(true, json!({"equivalent": true, "witness": mat_to_json(&w.q)})),
                None => answer(false, json!({"equivalent": false, "witness": null})),
            }
        }
        Command::Census {
            p,
            l,
            n,
            gamma,
            prune,
            jobs,
            budget,
        } => {
            let ctx = FieldCtx::prime(p, l, gamma).map_err(|e| usage("field", e.to_string()))?;
            let opts = CensusOptions {
                prune,
                budget: budget.unwrap_or_else(budget_from_env),
                jobs,
            };
            let report = classify_bruteforce(&ctx, n, &opts).map_err(|e| math("census", e.to_string()))?;
            let cv = cross_validate(&report);
            let mut body = report.to_json();
            body["cross_validation"] = cv.to_json(&report);
            answer(report.passes() && (n != l || cv.bijection), body)
        }
        Command::Selftest { seed } => {
            let (outcomes, transcript) = acceptance::selftest(seed);
            answer(outcomes.iter().all(|o| o.passed()), transcript)
        }
    }
}

fn emit(output: Option<&PathBuf>, body: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(body).expect("values serialize");
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = json!({"error": {"kind": "usage", "message": e.render().to_string().trim_end()}});
            let _ = emit(None, &body);
            return ExitCode::from(2);
        }
    };
    let (code, body) = match run(cli.command) {
        Ok(a) => (u8::from(!a.ok), a.body),
        Err(f) => (f.code, f.body),
    };
    if let Err(e) = emit(cli.output.as_ref(), &body) {
        eprintln!("qweyl: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
