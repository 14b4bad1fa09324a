mod config;

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use veronese_core::code::oracle_min_distance;
use veronese_core::veronese::{scroll_plucker_check, VarietyJson};
use veronese_core::{
    analyze, build_code, build_variety, classify_min_words, min_distance, verify_general_position, Code,
    Error, FieldCtx, ScrollFrame, SearchPlan, SigmaVector, VarietyMatrix,
};

use config::{OutputArgs, SearchArgs, Settings, Sigma, VarietyArgs};

#[derive(Parser)]
#[command(name = "veronese", version, about = "Twisted Veronese varieties and their codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters, modulus and subfields of GF(p^m).
    Field {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
    },
    /// Build the variety and write its point and coordinate tables.
    Build {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute the code parameters and minimum distance.
    Code {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Variety file written by `build`; replaces the field and sigma flags.
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        /// Skip classification of minimum-weight supports.
        #[arg(long)]
        no_classify: bool,
    },
    /// Run one exhaustive verification.
    Verify {
        property: Property,
        /// Subset size for general-position (default d+1).
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    GeneralPosition,
    DepClassification,
    ScrollPlucker,
    OracleEquivalence,
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::Unresolved(_) => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Input(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Field { p, m } => field(p, m),
        Cmd::Build { variety, output } => build(&variety, &output),
        Cmd::Code { variety, search, output, input, no_classify } => {
            code(&variety, &search, &output, input.as_deref(), !no_classify)
        }
        Cmd::Verify { property, k, variety, search, output } => verify(property, k, &variety, &search, &output),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("incomplete: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json") + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn field(p: u32, m: u32) -> Result<ExitCode, Failure> {
    let f = FieldCtx::new(p, m)?;
    emit(
        None,
        &json!({
            "p": p,
            "m": m,
            "order": f.order(),
            "modulus": f.modulus_string(),
            "modulus_coefficients": f.modulus(),
            "generator": f.generator(),
            "subfields": f.subfield_orders(),
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn make_variety(s: &Settings) -> Result<VarietyMatrix, Failure> {
    let ctx = Arc::new(FieldCtx::from_tower(s.p, s.e, s.t)?);
    let sigma = match &s.sigma {
        Sigma::P(x) => SigmaVector::new(&ctx, x)?,
        Sigma::Q(h) => SigmaVector::from_q_powers(&ctx, h)?,
    };
    eprintln!(
        "GF({}) modulus {}, n = {}, sigma exponents {:?}",
        ctx.order(),
        ctx.modulus_string(),
        s.n,
        sigma.exponents()
    );
    let v = build_variety(s.n, &sigma, ctx)?;
    eprintln!("{} points, {} coordinates", v.points().len(), v.basis().effective_n());
    Ok(v)
}

fn collapse_note(v: &VarietyMatrix) -> Option<String> {
    let b = v.basis();
    b.collapsed().then(|| format!("collapse: {} of {} monomials distinct", b.effective_n(), b.expected_n()))
}

fn refuse_collapse(v: &VarietyMatrix, allow: bool) -> Result<(), Failure> {
    match collapse_note(v) {
        Some(note) if !allow => Err(Failure::Input(format!("{note}; pass --allow-collapse to continue"))),
        Some(note) => {
            eprintln!("warning: {note}");
            Ok(())
        }
        None => Ok(()),
    }
}

fn write_csv(path: Option<&Path>, code: &Code) -> Result<(), Failure> {
    if let Some(path) = path {
        std::fs::write(path, code.parity_check().to_csv())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn build(va: &VarietyArgs, oa: &OutputArgs) -> Result<ExitCode, Failure> {
    let s = Settings::resolve(va, None, Some(oa), None)?;
    let v = make_variety(&s)?;
    if let Some(note) = collapse_note(&v) {
        eprintln!("warning: {note}");
    }
    emit(s.out.as_deref(), &serde_json::to_value(v.to_json()).expect("json"))?;
    if s.csv.is_some() {
        write_csv(s.csv.as_deref(), &build_code(v)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn plan(s: &Settings) -> SearchPlan {
    SearchPlan { w_max: s.w_max, budget: s.budget, workers: s.workers }
}

fn log_stages(report: &veronese_core::CodeReport) {
    for e in &report.stage_log {
        eprintln!("  {:<16} size {:>2}: {} ({} examined)", e.stage, e.subset_size, e.outcome, e.examined);
    }
}

fn code(
    va: &VarietyArgs,
    sa: &SearchArgs,
    oa: &OutputArgs,
    input: Option<&Path>,
    classify: bool,
) -> Result<ExitCode, Failure> {
    let (v, s) = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let json: VarietyJson =
                serde_json::from_str(&text).map_err(|e| format!("variety file {}: {e}", path.display()))?;
            let mut va = VarietyArgs { sigma: Some(json.sigma_exponents.clone()), ..va.clone() };
            (va.p, va.e, va.t, va.n) = (Some(json.field.p), Some(json.field.e), Some(json.field.t), Some(json.n));
            (json.load()?, Settings::resolve(&va, Some(sa), Some(oa), None)?)
        }
        None => {
            let s = Settings::resolve(va, Some(sa), Some(oa), None)?;
            (make_variety(&s)?, s)
        }
    };
    refuse_collapse(&v, s.allow_collapse)?;
    let code = build_code(v)?;
    eprintln!("[{}, {}] code, Singleton bound {}", code.nu(), code.kappa(), code.singleton_bound());
    write_csv(s.csv.as_deref(), &code)?;
    let report = analyze(&code, &plan(&s), classify)?;
    log_stages(&report);
    emit(s.out.as_deref(), &serde_json::to_value(&report).expect("json"))?;
    match (report.delta, report.status) {
        (Some(delta), Some(status)) if report.delta_exact => {
            eprintln!("[{}, {}, {delta}] {status}", report.nu, report.kappa);
            Ok(ExitCode::SUCCESS)
        }
        _ => {
            eprintln!("minimum distance not resolved; delta >= {}", report.delta_lower_bound);
            Ok(ExitCode::from(2))
        }
    }
}

fn verify(
    property: Property,
    k: Option<usize>,
    va: &VarietyArgs,
    sa: &SearchArgs,
    oa: &OutputArgs,
) -> Result<ExitCode, Failure> {
    let s = Settings::resolve(va, Some(sa), Some(oa), k)?;
    let v = make_variety(&s)?;
    refuse_collapse(&v, s.allow_collapse)?;
    let code = build_code(v)?;
    let (pass, body) = match property {
        Property::GeneralPosition => {
            let k = s.k.unwrap_or(code.d() + 1);
            let g = verify_general_position(&code, k, s.budget, s.workers)?;
            (
                g.holds,
                json!({"property": "general-position", "k": k, "checked": g.checked, "counterexample": g.counterexample}),
            )
        }
        Property::DepClassification => {
            let mut r = min_distance(&code, &plan(&s))?;
            log_stages(&r);
            classify_min_words(&code, &mut r, s.budget, s.workers)?;
            let c = r.classification.clone().expect("classified");
            (
                c.violations.is_empty(),
                json!({
                    "property": "dep-classification",
                    "delta": r.delta,
                    "q_sub": r.q_sub,
                    "supports": c.total,
                    "collinear": c.collinear,
                    "on_subline": c.on_subline,
                    "violations": c.violations,
                }),
            )
        }
        Property::ScrollPlucker => {
            let v = code.variety();
            let frame = ScrollFrame::new(v.n(), v.sigma());
            let failures: Vec<Vec<u32>> = v
                .points()
                .iter()
                .filter(|pt| !scroll_plucker_check(v.ctx(), pt, &frame, v.basis()))
                .map(|pt| pt.encoded())
                .collect();
            (
                failures.is_empty(),
                json!({"property": "scroll-plucker", "points": v.points().len(), "failures": failures}),
            )
        }
        Property::OracleEquivalence => {
            let r = min_distance(&code, &plan(&s))?;
            log_stages(&r);
            let w = s.w_max.unwrap_or(code.redundancy() + 1);
            let o = oracle_min_distance(&code, w)?;
            (
                r.delta == o.delta && r.delta_exact,
                json!({
                    "property": "oracle-equivalence",
                    "staged": r.delta,
                    "oracle": o.delta,
                    "staged_witness": r.witness,
                    "oracle_witness": o.witness,
                }),
            )
        }
    };
    let mut body = body;
    body["pass"] = json!(pass);
    emit(s.out.as_deref(), &body)?;
    eprintln!("{}", if pass { "pass" } else { "FAIL" });
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
