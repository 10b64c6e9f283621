// Running a benchmark programmatically, writing CSV and fitting the exponent.

use qsearch::bench::{self, Experiment, ExperimentConfig, Format};

pub fn run_example() -> qsearch::Result<()> {
    let mut cfg = ExperimentConfig::new(Experiment::GroverScaling, bench::parse_sizes("64..4096:x4")?, 20, 1)?;
    cfg.jobs = 2;
    let records = bench::run_experiment(&cfg, |_| Ok(()))?;
    let path = std::env::temp_dir().join("qsearch-scaling-fit.csv");
    bench::emit(&records, Format::Csv, &path)?;
    assert_eq!(bench::read_csv(&path)?.len(), records.len());
    print!("{}", bench::summarize(&cfg, &records));
    println!("wrote {} records to {}", records.len(), path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
