//! `mcatt`: check, translate and cross-check CaTT and MCaTT source files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mcatt::frontend::{adjunction_file, check_source, theory_of_path, translate_file, FileReport};
use mcatt::kernel::{CheckReport, ErrorInfo, Verdict};
use mcatt::oracle::{agreement, brute_force_ps, enumerate_ps, AgreementConfig};
use mcatt::translate::Direction;
use mcatt::TheoryId;
use serde_json::{json, Value};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "mcatt", version, about = "Proof checker for CaTT and MCaTT")]
struct Cli {
    /// Emit reports as JSON lines.
    #[arg(long, global = true)]
    json: bool,
    /// Theory to check in, overriding the file extension (catt, mcatt, glob, glob_unit).
    #[arg(long, global = true, value_parser = parse_theory)]
    theory: Option<TheoryId>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every definition of each file; files are checked concurrently.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the image of a file under desuspension or reduced suspension.
    Translate {
        #[arg(long, value_enum)]
        dir: Dir,
        file: PathBuf,
    },
    /// Check the adjunction laws on the context of every definition.
    Adjunction { file: PathBuf },
    /// List the pasting schemes with at most N variables.
    EnumPs {
        #[arg(long)]
        max_vars: usize,
    },
    /// Compare the kernel with the derivation-search oracle on a small universe.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Desusp,
    Rsusp,
}

fn parse_theory(s: &str) -> Result<TheoryId, String> {
    TheoryId::parse(s).ok_or_else(|| format!("unknown theory `{s}`"))
}

/// A failure outside the checked judgments: unreadable input or bad usage.
struct Fatal(String);

impl<T: std::fmt::Display> From<T> for Fatal {
    fn from(e: T) -> Fatal {
        Fatal(e.to_string())
    }
}

fn theory_for(path: &Path, forced: Option<TheoryId>) -> Result<TheoryId, Fatal> {
    forced
        .or_else(|| theory_of_path(path))
        .ok_or_else(|| Fatal(format!("{}: cannot tell the theory from the extension; use --theory", path.display())))
}

fn load(path: &Path, forced: Option<TheoryId>) -> Result<FileReport, Fatal> {
    let theory = theory_for(path, forced)?;
    let text = std::fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    Ok(check_source(&text, theory))
}

fn report_json(file: &Path, r: &CheckReport) -> Value {
    let e: Option<&ErrorInfo> = r.error.as_ref();
    json!({
        "schema": SCHEMA,
        "file": file.display().to_string(),
        "verdict": r.verdict,
        "judgment": r.judgment,
        "rule": e.map(|e| e.rule),
        "span": e.and_then(|e| e.span),
        "detail": e.map(|e| e.detail.clone()),
        "code": e.map(|e| e.code),
    })
}

fn report_text(file: &Path, r: &CheckReport) -> String {
    match &r.error {
        None => format!("ok   {}", r.judgment),
        Some(e) => {
            let at = e.span.map(|s| format!(":{}:{}", s.line, s.col)).unwrap_or_default();
            format!("{}{at}: error[{}] ({}): {}\n     in {}", file.display(), e.code, e.rule, e.detail, r.judgment)
        }
    }
}

fn first_error_line(file: &Path, r: &CheckReport, json: bool) -> String {
    if json {
        report_json(file, r).to_string()
    } else {
        report_text(file, r).lines().next().unwrap_or_default().to_owned()
    }
}

fn check(files: &[PathBuf], forced: Option<TheoryId>, json: bool) -> Result<ExitCode, Fatal> {
    let results: Vec<Result<FileReport, Fatal>> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(move || load(f, forced))).collect();
        handles.into_iter().map(|h| h.join().expect("checker thread panicked")).collect()
    });
    let mut first_error = None;
    for (file, result) in files.iter().zip(results) {
        let report = result?;
        if !json {
            println!("{} ({})", file.display(), report.theory.as_str());
        }
        for r in report.reports() {
            if json {
                println!("{}", report_json(file, r));
            } else {
                println!("  {}", report_text(file, r).replace('\n', "\n  "));
            }
            if first_error.is_none() && r.verdict == Verdict::Reject {
                first_error = Some(first_error_line(file, r, json));
            }
        }
    }
    Ok(match first_error {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    })
}

fn translate(file: &Path, dir: Dir, forced: Option<TheoryId>, json: bool) -> Result<ExitCode, Fatal> {
    let dir = match dir {
        Dir::Desusp => Direction::Desusp,
        Dir::Rsusp => Direction::Rsusp,
    };
    let report = load(file, forced)?;
    match translate_file(&report, dir) {
        Ok(out) if json => {
            let lines: Vec<&str> = out.lines().collect();
            println!("{}", json!({"schema": SCHEMA, "file": file.display().to_string(), "target": dir.target(), "items": lines}));
            Ok(ExitCode::SUCCESS)
        }
        Ok(out) => {
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            let r = report.first_error().cloned().unwrap_or_else(|| CheckReport::reject("translation", e));
            eprintln!("{}", first_error_line(file, &r, json));
            Ok(ExitCode::FAILURE)
        }
    }
}

fn adjunction(file: &Path, forced: Option<TheoryId>, json: bool) -> Result<ExitCode, Fatal> {
    let report = load(file, forced)?;
    if let Some(r) = report.first_error() {
        eprintln!("{}", first_error_line(file, r, json));
        return Ok(ExitCode::FAILURE);
    }
    let results = adjunction_file(&report)?;
    let mut ok = true;
    for (name, r) in &results {
        ok &= r.all_true();
        if json {
            println!(
                "{}",
                json!({
                    "schema": SCHEMA,
                    "item": name,
                    "catt_ctx": r.catt_ctx.to_string(),
                    "mcatt_ctx": r.mcatt_ctx.to_string(),
                    "triangle1": r.triangle1_holds,
                    "triangle2": r.triangle2_holds,
                    "eta_iso": r.eta_iso_holds,
                    "counterexample": r.counterexample,
                })
            );
        } else {
            let mark = |b: bool| if b { "ok" } else { "FAILED" };
            println!(
                "{name}: triangle1 {}, triangle2 {}, eta iso {}",
                mark(r.triangle1_holds),
                mark(r.triangle2_holds),
                mark(r.eta_iso_holds)
            );
            if let Some(c) = &r.counterexample {
                println!("  {c}");
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn enum_ps(max_vars: usize, json: bool) -> ExitCode {
    let all = enumerate_ps(max_vars);
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &all {
        *by_size.entry(c.len()).or_default() += 1;
    }
    if json {
        let contexts: Vec<String> = all.iter().map(|c| c.to_string()).collect();
        println!("{}", json!({"schema": SCHEMA, "max_vars": max_vars, "count": all.len(), "by_size": by_size, "contexts": contexts}));
    } else {
        for c in &all {
            println!("{c}");
        }
        let sizes: Vec<String> = by_size.iter().map(|(n, k)| format!("{n}: {k}")).collect();
        println!("# {} pasting schemes with at most {max_vars} variables ({})", all.len(), sizes.join(", "));
    }
    ExitCode::SUCCESS
}

fn selftest(json: bool) -> ExitCode {
    let cfg = AgreementConfig { max_binders: 4, term_binders: 2, sub_binders: 2, head_binders: 4, ..Default::default() };
    let report = agreement(&cfg);
    let counts: Vec<(usize, usize, usize)> = [1, 3, 5].iter().map(|&n| (n, enumerate_ps(n).len(), brute_force_ps(n).len())).collect();
    let ps_ok = counts.iter().all(|(_, a, b)| a == b);
    let ok = report.ok() && ps_ok;
    if json {
        let per_form: Vec<Value> = report
            .counts
            .iter()
            .map(|((t, f), (n, a))| json!({"theory": t, "form": f, "judgments": n, "accepted": a}))
            .collect();
        let ps: Vec<Value> = counts.iter().map(|(n, a, b)| json!({"max_vars": n, "enumerated": a, "brute_force": b})).collect();
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "verdict": if ok { "ACCEPT" } else { "REJECT" },
                "judgments": report.judgments(),
                "disagreements": report.disagreements.len(),
                "counts": per_form,
                "ps_counts": ps,
            })
        );
    } else {
        for ((t, f), (n, a)) in &report.counts {
            println!("{t:<9} {f:<4} {n:>7} judgments, {a:>6} accepted");
        }
        for d in report.disagreements.iter().take(10) {
            println!("disagreement in {}: kernel {} vs oracle {:?} on {:?}", d.theory.as_str(), d.kernel, d.oracle, d.goal);
        }
        for (n, a, b) in &counts {
            println!("pasting schemes with at most {n} variables: {a} enumerated, {b} by brute force");
        }
        println!(
            "{}: {} judgments, {} disagreements",
            if ok { "ok" } else { "FAILED" },
            report.judgments(),
            report.disagreements.len()
        );
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { files } => check(files, cli.theory, cli.json),
        Command::Translate { dir, file } => translate(file, *dir, cli.theory, cli.json),
        Command::Adjunction { file } => adjunction(file, cli.theory, cli.json),
        Command::EnumPs { max_vars } => Ok(enum_ps(*max_vars, cli.json)),
        Command::Selftest => Ok(selftest(cli.json)),
    };
    result.unwrap_or_else(|Fatal(msg)| {
        eprintln!("mcatt: {msg}");
        ExitCode::from(2)
    })
}
