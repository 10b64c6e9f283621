use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::config::{parse_pairs, ExperimentConfig};
use super::emit::RecordWriter;
use super::experiments::{run_experiment, summarize, Experiment};
use super::selftest::run_selftest;
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qsearch-bench", about = "Query-complexity experiments for quantum search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one experiment; flags override the config file.
    Run {
        /// key=value config file.
        config: Option<PathBuf>,
        #[arg(long)]
        experiment: Option<String>,
        /// e.g. `4,16`, `8..18:2` or `64..16384:x4`.
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv or jsonl.
        #[arg(long)]
        format: Option<String>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Experiment parameter such as `k=4` or `d=3`; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// List experiments and the claims they check.
    List,
    /// Run the built-in sanity checks.
    Selftest,
}

/// Entry point of the binary; returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) | Error::Parse { .. } | Error::Size { .. } => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut impl Write) -> Result<i32> {
    match cmd {
        Command::List => {
            for e in Experiment::ALL {
                let expected = e
                    .expected_exponent()
                    .map_or(String::new(), |x| format!(" [exponent {x:.3}]"));
                writeln!(stdout, "{:<15} {}{expected}", e.name(), e.claim())?;
            }
            Ok(EXIT_OK)
        }
        Command::Selftest => {
            let failed = run_selftest(stdout)?;
            writeln!(stdout, "{failed} failed")?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_SELFTEST })
        }
        Command::Run {
            config,
            experiment,
            sizes,
            trials,
            seed,
            out,
            format,
            jobs,
            params,
        } => {
            let mut map = match &config {
                Some(p) => parse_pairs(&std::fs::read_to_string(p)?)?,
                None => BTreeMap::new(),
            };
            let overrides = [
                ("experiment", experiment),
                ("sizes", sizes),
                ("trials", trials.map(|v| v.to_string())),
                ("seed", seed.map(|v| v.to_string())),
                ("out", out.map(|p| p.display().to_string())),
                ("format", format),
                ("jobs", jobs.map(|v| v.to_string())),
            ];
            for (k, v) in overrides {
                if let Some(v) = v {
                    map.insert(k.to_string(), v);
                }
            }
            for p in params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| Error::Usage(format!("--param expects KEY=VALUE, got {p:?}")))?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            let cfg = ExperimentConfig::from_map(map)?;
            run(&cfg, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Streams records to the configured sink and prints the summary block to
/// stderr, or to stdout after the records when writing to a file.
pub fn run(cfg: &ExperimentConfig, stdout: &mut impl Write) -> Result<()> {
    let records = match &cfg.out {
        Some(path) => {
            let mut w = RecordWriter::new(cfg.format, BufWriter::new(File::create(path)?))?;
            let recs = run_experiment(cfg, |r| w.write(r))?;
            w.finish()?.flush()?;
            recs
        }
        None => {
            let mut w = RecordWriter::new(cfg.format, &mut *stdout)?;
            let recs = run_experiment(cfg, |r| w.write(r))?;
            w.finish()?;
            recs
        }
    };
    let summary = summarize(cfg, &records);
    if cfg.out.is_some() {
        write!(stdout, "{summary}")?;
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        main(std::iter::once("qsearch-bench").chain(args.iter().copied()))
    }

    #[test]
    fn exit_codes() {
        assert_eq!(code(&["list"]), EXIT_OK);
        assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code(&["run", "--experiment", "nope"]), EXIT_USAGE);
        assert_eq!(code(&["run", "--experiment", "local-min", "--sizes", "40"]), EXIT_USAGE);
    }

    #[test]
    fn run_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("g.csv");
        let args = [
            "run",
            "--experiment",
            "grover-scaling",
            "--sizes",
            "4,16",
            "--trials",
            "2",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ];
        assert_eq!(code(&args), EXIT_OK);
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("experiment,size,trial,seed,queries,steps,success,ms\n"));
    }
}
