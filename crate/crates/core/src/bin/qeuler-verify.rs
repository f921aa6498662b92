use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qeuler::verify::{self, parse_w_pair, Fault, Format, RunConfig, Suite};

/// Exact verification of q-Euler polynomial identities over parameter grids.
#[derive(Parser, Debug)]
#[command(name = "qeuler-verify", version)]
struct Args {
    /// qbinom, representations, fermint, thm3, thm4, cor2, limit or all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 4)]
    n_max: u32,
    #[arg(long, default_value_t = 2)]
    r_max: u32,
    /// h value to include (repeatable)
    #[arg(long = "h", allow_negative_numbers = true)]
    h: Vec<i64>,
    /// odd weight pair W1,W2 (repeatable)
    #[arg(long = "w-pair")]
    w_pair: Vec<String>,
    #[arg(long, default_value_t = 3)]
    q_samples: usize,
    /// terms per infinite sum
    #[arg(long, default_value_t = 40)]
    truncation: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// json, csv or md
    #[arg(long, default_value = "json")]
    format: String,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
    /// zero all timing fields
    #[arg(long, hide = true)]
    omit_timings: bool,
}

fn config(args: &Args) -> qeuler::Result<RunConfig> {
    let defaults = RunConfig::default();
    let w_pairs = if args.w_pair.is_empty() {
        defaults.w_pairs
    } else {
        args.w_pair
            .iter()
            .map(|s| parse_w_pair(s))
            .collect::<qeuler::Result<_>>()?
    };
    let cfg = RunConfig {
        suite: args.suite.parse::<Suite>()?,
        n_max: args.n_max,
        r_max: args.r_max,
        h_values: if args.h.is_empty() {
            defaults.h_values
        } else {
            args.h.clone()
        },
        w_pairs,
        q_samples: args.q_samples,
        truncation: args.truncation,
        seed: args.seed,
        format: args.format.parse::<Format>()?,
        fault: args
            .inject_fault
            .as_deref()
            .map(str::parse::<Fault>)
            .transpose()?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qeuler-verify: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match verify::run(&cfg) {
        Ok(r) if args.omit_timings => r.without_timings(),
        Ok(r) => r,
        Err(e) => {
            eprintln!("qeuler-verify: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match verify::render(&report, cfg.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("qeuler-verify: {e}");
            return ExitCode::from(2);
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("qeuler-verify: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    let s = &report.summary;
    eprintln!(
        "pass_exact={} pass_within_bound={} fail={}",
        s.pass_exact, s.pass_within_bound, s.fail
    );
    ExitCode::from(report.exit_code() as u8)
}
