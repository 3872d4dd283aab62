use std::process::ExitCode;

use leforge::ctx::Caps;
use leforge::job::{parse_job, print_report, run_job, ReportFormat};

const USAGE: &str = "usage: leforge run <job.json> [--format json|text] [--seed N] \
                     [--kmax N] [--max-degree N]";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}

fn run(args: &[String]) -> Result<i32, String> {
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        eprintln!("{USAGE}");
        return Ok(if args.is_empty() { 3 } else { 0 });
    }
    if args[0] != "run" {
        return Err(format!("unknown command `{}`\n{USAGE}", args[0]));
    }
    let mut path: Option<&str> = None;
    let mut format = ReportFormat::Json;
    let mut seed: Option<u64> = std::env::var("LEFORGE_SEED")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut caps = Caps::default();
    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--format" => {
                let v = it.next().ok_or("--format needs a value")?;
                format = match v.as_str() {
                    "json" => ReportFormat::Json,
                    "text" => ReportFormat::Text,
                    other => return Err(format!("unknown format `{other}`")),
                };
            }
            "--seed" => {
                let v = it.next().ok_or("--seed needs a value")?;
                seed = Some(v.parse().map_err(|_| format!("bad seed `{v}`"))?);
            }
            "--kmax" => {
                let v = it.next().ok_or("--kmax needs a value")?;
                caps.k_max = v.parse().map_err(|_| format!("bad kmax `{v}`"))?;
            }
            "--max-degree" => {
                let v = it.next().ok_or("--max-degree needs a value")?;
                caps.max_total_degree =
                    v.parse().map_err(|_| format!("bad max-degree `{v}`"))?;
            }
            other if path.is_none() && !other.starts_with('-') => path = Some(other),
            other => return Err(format!("unexpected argument `{other}`\n{USAGE}")),
        }
    }
    let path = path.ok_or(USAGE.to_string())?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let spec = parse_job(&text).map_err(|e| format!("invalid job: {e}"))?;
    let (doc, code) = run_job(spec, seed, Some(caps));
    print!("{}", print_report(&doc, format));
    for w in &doc.diagnostics.warnings {
        eprintln!("warning: {w}");
    }
    Ok(code)
}
