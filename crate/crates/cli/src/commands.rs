use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hritz_core::linalg::{norm2, unit_vector};
use hritz_core::{
    analyze, forge, random_prescription, validate, verify, AnalysisReport, ForgeResult, Verdict,
    VerifyReport,
};
use serde_json::{json, Map, Value};

use crate::json::{
    format_float, num, parse_prescription, prescription_json, to_canonical_string, tuples_json,
};
use crate::mtx::{read_matrix_market, write_matrix_market};
use crate::{write_atomic, CliError};

/// Forge and verify matrices with prescribed GMRES residuals and harmonic Ritz values.
#[derive(Debug, Parser)]
#[command(name = "hritz", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build H from a prescription and write it as Matrix Market.
    Forge {
        #[arg(long)]
        prescription: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write schedule, values and per-step condition numbers.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Measure residuals, harmonic Ritz values and stagnation for {A, b}.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        /// Right-hand side as an n×1 Matrix Market file (default e₁); scaled to unit norm.
        #[arg(long)]
        rhs: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Forge (or load) H and compare GMRES on {H, e₁} with the prescription.
    Verify {
        #[arg(long)]
        prescription: PathBuf,
        /// Check this matrix instead of forging one.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol_res: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol_ritz: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a random admissible prescription.
    Random {
        #[arg(long)]
        n: usize,
        /// Comma-separated plateau steps, e.g. "2,3".
        #[arg(long, default_value = "")]
        plateaus: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done,
    VerifyFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Done => 0,
            Outcome::VerifyFailed => 2,
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Forge {
            prescription,
            out,
            report,
        } => {
            let p = parse_prescription(&read(prescription)?)?;
            let f = forge(&p)?;
            write_matrix_market(&f.h, out)?;
            if let Some(path) = report {
                write_json(path, &forge_report(&f))?;
            }
            Ok(Outcome::Done)
        }
        Command::Analyze {
            matrix,
            rhs,
            out,
            csv,
        } => {
            let a = read_matrix_market(matrix)?;
            if !a.is_square() {
                return Err(CliError::Usage(format!(
                    "matrix is {}x{}, expected square",
                    a.rows(),
                    a.cols()
                )));
            }
            let b = match rhs {
                None => unit_vector(a.rows(), 0),
                Some(path) => {
                    let b = read_matrix_market(path)?;
                    if b.rows() != a.rows() || b.cols() != 1 {
                        return Err(CliError::Usage(format!("rhs must be {}x1", a.rows())));
                    }
                    let b = b.column(0);
                    let s = norm2(&b);
                    if !(s > 0.0 && s.is_finite()) {
                        return Err(CliError::Usage(
                            "rhs must be a nonzero finite vector".into(),
                        ));
                    }
                    b.into_iter().map(|z| z / s).collect()
                }
            };
            let report = analyze(&a, &b)?;
            write_json(out, &analysis_json(&report))?;
            if let Some(path) = csv {
                write_atomic(path, residual_csv(&report.residual_history).as_bytes())?;
            }
            Ok(Outcome::Done)
        }
        Command::Verify {
            prescription,
            matrix,
            tol_res,
            tol_ritz,
            out,
        } => {
            for (name, t) in [("tol-res", tol_res), ("tol-ritz", tol_ritz)] {
                if !(*t > 0.0 && t.is_finite()) {
                    return Err(CliError::Usage(format!(
                        "--{name} must be positive, got {t}"
                    )));
                }
            }
            let p = parse_prescription(&read(prescription)?)?;
            validate(&p).into_result()?;
            let h = match matrix {
                Some(path) => read_matrix_market(path)?,
                None => forge(&p)?.h,
            };
            let report = verify(&p, &h, *tol_res, *tol_ritz)?;
            write_json(out, &verify_json(&report, *tol_res, *tol_ritz))?;
            Ok(match report.verdict {
                Verdict::Pass => Outcome::Done,
                Verdict::Fail { .. } => Outcome::VerifyFailed,
            })
        }
        Command::Random {
            n,
            plateaus,
            seed,
            out,
        } => {
            let steps = parse_steps(plateaus)?;
            let p = random_prescription(*n, &steps, *seed)?;
            write_json(out, &prescription_json(&p))?;
            Ok(Outcome::Done)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, v: &Value) -> Result<(), CliError> {
    write_atomic(path, to_canonical_string(v).as_bytes())
}

pub fn parse_steps(list: &str) -> Result<Vec<usize>, CliError> {
    let mut steps: Vec<usize> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("bad plateau step {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    steps.sort_unstable();
    steps.dedup();
    Ok(steps)
}

fn opt_step(s: Option<usize>) -> Value {
    s.map_or(Value::Null, |k| json!(k))
}

pub fn forge_report(f: &ForgeResult) -> Value {
    let p = &f.prescription;
    json!({
        "n": p.n(),
        "residual_norms": p.schedule.norms().iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "harmonic_ritz": tuples_json(p.ritz.steps()),
        "plateau_steps": p.schedule.plateau_steps(),
        "conditions": f.conditions.iter().map(|c| c.map_or(Value::Null, num)).collect::<Vec<_>>(),
    })
}

pub fn analysis_json(r: &AnalysisReport) -> Value {
    json!({
        "residual_history": r.residual_history.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "harmonic_ritz": tuples_json(&r.harmonic_ritz_per_step),
        "stagnation_steps": r.stagnation_steps,
        "breakdown_step": opt_step(r.breakdown_step),
    })
}

pub fn residual_csv(history: &[f64]) -> String {
    let mut out = String::from("step,residual_norm\n");
    for (k, x) in history.iter().enumerate() {
        out.push_str(&format!("{k},{}\n", format_float(*x)));
    }
    out
}

pub fn verify_json(r: &VerifyReport, tol_res: f64, tol_ritz: f64) -> Value {
    let (verdict, first) = match r.verdict {
        Verdict::Pass => ("pass", None),
        Verdict::Fail { step } => ("fail", Some(step)),
    };
    let steps: Vec<Value> = r
        .steps
        .iter()
        .map(|s| {
            let mut m = Map::new();
            m.insert("step".into(), json!(s.step));
            m.insert("residual_expected".into(), num(s.residual_expected));
            m.insert("residual_measured".into(), num(s.residual_measured));
            m.insert("residual_err".into(), num(s.residual_err));
            m.insert("ritz_rel_err".into(), num(s.ritz_rel_err));
            m.insert("infinite_expected".into(), json!(s.infinite_expected));
            m.insert("infinite_measured".into(), json!(s.infinite_measured));
            m.insert("ok".into(), json!(s.ok));
            Value::Object(m)
        })
        .collect();
    json!({
        "verdict": verdict,
        "first_failing_step": opt_step(first),
        "residual_max_abs_err": num(r.residual_max_abs_err),
        "ritz_max_rel_err": num(r.ritz_max_rel_err),
        "tol_res": num(tol_res),
        "tol_ritz": num(tol_ritz),
        "steps": steps,
    })
}
