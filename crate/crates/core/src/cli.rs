//! Command-line front end. `run` parses arguments, dispatches to the
//! library and returns the exit status with the rendered output.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::eisenstein::{
    check_vanishing, fourier_expansion, lattice_eval_normalized, mes_sh, numeric_eval, q_from_tau, LatticeParams,
};
use crate::error::Error;
use crate::hopf::{coproduct, reduce, IntegralSymbol};
use crate::mzv::shuffle_regularize;
use crate::output::{CheckOut, ComplexValue, OutputRecord, Payload, RelationOut};
use crate::qseries::{g_tilde, GshEngine};
use crate::relations::{
    derivative_deviation, double_shuffle_relation, q_dimension_table, relation_count_table, relation_matrix,
    relations_of_weight, verify_relation_exact, Verification,
};
use crate::words::{Composition, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "mes", version, about = "Regularized multiple Eisenstein series toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OrderArg {
    /// q-truncation order
    #[arg(long, default_value_t = 20)]
    order: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a symbol `a;word;b` to the canonical basis
    Reduce { symbol: String },
    /// Goncharov coproduct of I(c)
    Coproduct { index: Composition },
    /// Shuffle regularization of ζ(c) as a polynomial in T
    ZetaSh { index: Composition },
    /// Multiple divisor sum series g̃_c
    Gseries {
        index: Composition,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Shuffle-regularized series g̃^sh_c
    Gsh {
        index: Composition,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Regularized Eisenstein series G̃^sh_c
    Mes {
        index: Composition,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Fourier expansion of G̃_c (parts >= 2)
    Fourier {
        index: Composition,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Truncated lattice sum compared with the Fourier expansion
    Lattice {
        index: Composition,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, default_values_t = [0.0, 1.0])]
        tau: Vec<f64>,
        #[arg(long = "L", default_value_t = 300)]
        l_cutoff: usize,
        #[arg(long = "M", default_value_t = 300)]
        m_cutoff: usize,
        #[command(flatten)]
        order: OrderArg,
        /// fail with status 4 when the relative difference exceeds this
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Double shuffle relations of one weight, or the count table
    Relations {
        #[arg(long, conflicts_with = "max_weight")]
        weight: Option<u32>,
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        csv: bool,
    },
    /// Table of dim Q^(N)/Q^(N-1)
    Dims {
        #[arg(long, default_value_t = 7)]
        max_weight: u32,
        #[arg(long, default_value_t = 60)]
        order: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Acceptance checks
    Verify {
        check: VerifyKind,
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyKind {
    Fourier,
    Derivative,
    Vanishing,
    Eq46,
}

/// Exit status and rendered streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::Tolerance(_) | Error::NotStabilized(_) => EXIT_TOLERANCE,
        _ => EXIT_USAGE,
    }
}

enum Rendered {
    Record(Box<OutputRecord>, bool),
    Csv(String),
}

type Params = BTreeMap<String, Value>;

fn params(pairs: &[(&str, Value)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn index_json(c: &Composition) -> Value {
    json!(c.parts())
}

fn status_of(v: &Verification) -> CheckOut {
    let (status, dev) = match v {
        Verification::ExactVerified => ("exact-verified", None),
        Verification::NumericallyVerified { max_deviation } => ("numerically-verified", Some(*max_deviation)),
        Verification::Failed { max_deviation } => ("failed", Some(*max_deviation)),
    };
    CheckOut { name: String::new(), status: status.into(), max_deviation: dev }
}

fn check(name: String, ok: bool, dev: Option<f64>, exact: bool) -> CheckOut {
    let status = match (ok, exact) {
        (false, _) => "failed",
        (true, true) => "exact-verified",
        (true, false) => "numerically-verified",
    };
    CheckOut { name, status: status.into(), max_deviation: dev }
}

fn csv_table(columns: &[&str], rows: &[Vec<u64>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|x| x.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn parts_at_least_two(max_weight: u32) -> Vec<Composition> {
    (2..=max_weight).flat_map(|w| Composition::all_of_weight(w, 2)).collect()
}

fn execute(cmd: Command) -> crate::Result<(String, Params, Rendered)> {
    let record = |name: &str, p: Params, payload: Payload| -> (String, Params, Rendered) {
        let r = OutputRecord::new(name, p.clone(), payload, 0.0);
        (name.to_string(), p, Rendered::Record(Box::new(r), true))
    };
    Ok(match cmd {
        Command::Reduce { symbol } => {
            let s: IntegralSymbol = symbol.parse()?;
            record("reduce", params(&[("symbol", json!(symbol))]), Payload::combination(&reduce(&s)))
        }
        Command::Coproduct { index } => {
            record("coproduct", params(&[("index", index_json(&index))]), Payload::tensor(&coproduct(&index)))
        }
        Command::ZetaSh { index } => record(
            "zeta-sh",
            params(&[("index", index_json(&index))]),
            Payload::polynomial(&shuffle_regularize(&index)),
        ),
        Command::Gseries { index, order } => {
            GshEngine::new(order.order)?;
            record(
                "gseries",
                params(&[("index", index_json(&index)), ("order", json!(order.order))]),
                Payload::series(&g_tilde(&index, order.order)),
            )
        }
        Command::Gsh { index, order } => {
            let engine = GshEngine::new(order.order)?;
            record(
                "gsh",
                params(&[("index", index_json(&index)), ("order", json!(order.order))]),
                Payload::series(&engine.g_tilde_sh(&index)?),
            )
        }
        Command::Mes { index, order } => {
            let engine = GshEngine::new(order.order)?;
            record(
                "mes",
                params(&[("index", index_json(&index)), ("order", json!(order.order))]),
                Payload::mzv_series(&mes_sh(&index, &engine)?),
            )
        }
        Command::Fourier { index, order } => {
            GshEngine::new(order.order)?;
            record(
                "fourier",
                params(&[("index", index_json(&index)), ("order", json!(order.order))]),
                Payload::mzv_series(&fourier_expansion(&index, order.order)?),
            )
        }
        Command::Lattice { index, tau, l_cutoff, m_cutoff, order, tol } => {
            let tau = Complex64::new(tau[0], tau[1]);
            let p = LatticeParams::new(tau, l_cutoff, m_cutoff)?;
            let engine = GshEngine::new(order.order)?;
            let lat = lattice_eval_normalized(&index, &p)?;
            let ns = numeric_eval(&mes_sh(&index, &engine)?, 1e-12)?;
            let (four, err) = ns.eval(q_from_tau(tau));
            let rel = (lat - four).norm() / four.norm().max(f64::MIN_POSITIVE);
            let values = vec![
                ComplexValue { name: "lattice".into(), re: lat.re, im: lat.im, error_bound: None },
                ComplexValue { name: "fourier".into(), re: four.re, im: four.im, error_bound: Some(err) },
                ComplexValue { name: "relative_difference".into(), re: rel, im: 0.0, error_bound: None },
            ];
            let p = params(&[
                ("index", index_json(&index)),
                ("tau", json!([tau.re, tau.im])),
                ("L", json!(l_cutoff)),
                ("M", json!(m_cutoff)),
                ("order", json!(order.order)),
            ]);
            let ok = tol.is_none_or(|t| rel <= t);
            let r = OutputRecord::new("lattice", p.clone(), Payload::Complex { values }, 0.0);
            ("lattice".into(), p, Rendered::Record(Box::new(r), ok))
        }
        Command::Relations { weight: Some(n), csv, .. } => {
            if csv {
                return Err(Error::InvalidArgument("--csv applies to the count table only".into()));
            }
            if n > 12 {
                return Err(Error::Budget(format!("weight {n} exceeds 12")));
            }
            let rels = relations_of_weight(n);
            let rank = relation_matrix(&rels, n).rank();
            let mut seen = Vec::new();
            let mut out = Vec::new();
            for r in &rels {
                if seen.contains(&r.coeffs) {
                    continue;
                }
                seen.push(r.coeffs.clone());
                out.push(RelationOut {
                    source: r.source.clone(),
                    terms: match Payload::combination(&r.coeffs) {
                        Payload::Combination { terms } => terms,
                        _ => unreachable!(),
                    },
                });
            }
            record(
                "relations",
                params(&[("weight", json!(n))]),
                Payload::Relations { weight: n, rank, relations: out },
            )
        }
        Command::Relations { max_weight, csv, .. } => {
            let n = max_weight.unwrap_or(10);
            let counts = relation_count_table(n)?;
            let rows: Vec<Vec<u64>> = counts.iter().enumerate().map(|(w, &c)| vec![w as u64, c as u64]).collect();
            let p = params(&[("max_weight", json!(n))]);
            if csv {
                ("relations".into(), p, Rendered::Csv(csv_table(&["weight", "relations"], &rows)))
            } else {
                record("relations", p, Payload::Table { columns: vec!["weight".into(), "relations".into()], rows })
            }
        }
        Command::Dims { max_weight, order, csv } => {
            let table = q_dimension_table(max_weight, order)?;
            let rows: Vec<Vec<u64>> = table
                .iter()
                .map(|r| vec![r.weight as u64, r.rank_through_weight as u64, r.dimension as u64])
                .collect();
            let cols = ["weight", "rank", "dimension"];
            let p = params(&[("max_weight", json!(max_weight)), ("order", json!(order))]);
            if csv {
                ("dims".into(), p, Rendered::Csv(csv_table(&cols, &rows)))
            } else {
                record("dims", p, Payload::Table { columns: cols.iter().map(|s| s.to_string()).collect(), rows })
            }
        }
        Command::Verify { check: kind, max_weight, order, tol } => {
            let mut checks = Vec::new();
            let p;
            match kind {
                VerifyKind::Fourier => {
                    let (w, m) = (max_weight.unwrap_or(8), order.unwrap_or(20));
                    let engine = GshEngine::new(m)?;
                    for c in parts_at_least_two(w) {
                        let ok = mes_sh(&c, &engine)? == fourier_expansion(&c, m)?;
                        checks.push(check(c.to_string(), ok, None, true));
                    }
                    p = params(&[("check", json!("fourier")), ("max_weight", json!(w)), ("order", json!(m))]);
                }
                VerifyKind::Derivative => {
                    let (n_max, m, t) = (max_weight.unwrap_or(4), order.unwrap_or(20), tol.unwrap_or(1e-8));
                    for n in 1..=n_max {
                        let dev = derivative_deviation(n, m)?;
                        checks.push(check(format!("N={n}"), dev <= t, Some(dev), false));
                    }
                    p = params(&[("check", json!("derivative")), ("n_max", json!(n_max)), ("order", json!(m)), ("tol", json!(t))]);
                }
                VerifyKind::Vanishing => {
                    let (w, t) = (max_weight.unwrap_or(8), tol.unwrap_or(1e-8));
                    for c in parts_at_least_two(w).into_iter().filter(|c| c.depth() <= 3) {
                        let r = check_vanishing(&c, t)?;
                        checks.push(check(c.to_string(), r.vanishes, Some(r.value.abs()), false));
                    }
                    p = params(&[("check", json!("vanishing")), ("max_weight", json!(w)), ("tol", json!(t))]);
                }
                VerifyKind::Eq46 => {
                    let (m, t) = (order.unwrap_or(50), tol.unwrap_or(1e-9));
                    let c2 = Composition::new(vec![2])?;
                    let r = double_shuffle_relation(&c2, &c2)?;
                    let mut out = status_of(&verify_relation_exact(&r, m, t)?);
                    out.name = "(4) - 4(1,3)".into();
                    checks.push(out);
                    let engine = GshEngine::new(m)?;
                    let g2 = engine.g_tilde_sh(&c2)?.scale(&Rational::new((-1).into(), 6.into()));
                    let g4 = engine.g_tilde_sh(&Composition::new(vec![4])?)?;
                    let g13 = engine.g_tilde_sh(&Composition::new(vec![1, 3])?)?.scale(&Rational::from_integer(4.into()));
                    let combo = &(&g2 + &g4) - &g13;
                    checks.push(check("-1/6 g2 + g4 - 4 g13".into(), combo.is_zero(), None, true));
                    p = params(&[("check", json!("eq46")), ("order", json!(m))]);
                }
            }
            let passed = checks.iter().all(|c| c.status != "failed");
            let r = OutputRecord::new("verify", p.clone(), Payload::Verification { passed, checks }, 0.0);
            ("verify".into(), p, Rendered::Record(Box::new(r), passed))
        }
    })
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CliOutcome { code, stdout: text, stderr: String::new() }
            } else {
                CliOutcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let start = Instant::now();
    match execute(cli.command) {
        Ok((_, _, Rendered::Csv(s))) => CliOutcome { code: EXIT_OK, stdout: s, stderr: String::new() },
        Ok((_, _, Rendered::Record(mut r, ok))) => {
            r.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            CliOutcome {
                code: if ok { EXIT_OK } else { EXIT_TOLERANCE },
                stdout: r.to_json() + "\n",
                stderr: if ok { String::new() } else { "check failed\n".into() },
            }
        }
        Err(e) => CliOutcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Applies `MES_THREADS` to the global worker pool.
pub fn configure_threads() -> Result<(), String> {
    match std::env::var("MES_THREADS") {
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| format!("MES_THREADS must be a positive integer, got {v:?}"))?;
            if n == 0 {
                return Err("MES_THREADS must be positive".into());
            }
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
        }
        Err(_) => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn payload(out: &CliOutcome) -> Payload {
        OutputRecord::from_json(&out.stdout).unwrap().payload
    }

    #[test]
    fn coproduct_example() {
        let out = run(["mes", "coproduct", "2,2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(payload(&out).to_tensor().unwrap(), coproduct(&Composition::new(vec![2, 2]).unwrap()));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["mes", "frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run(["mes", "coproduct", "2,x"]).code, EXIT_USAGE);
        assert_eq!(run(["mes", "gsh", "7,7", "--order", "5"]).code, EXIT_BUDGET);
        assert_eq!(run(["mes", "gsh", "2", "--order", "500"]).code, EXIT_BUDGET);
        assert_eq!(run(["mes", "fourier", "1,3"]).code, EXIT_USAGE);
        assert_eq!(run(["mes", "dims", "--max-weight", "7", "--order", "20"]).code, EXIT_TOLERANCE);
        assert_eq!(run(["mes", "--help"]).code, EXIT_OK);
    }
}
