//! Subcommand implementations. Anything that returns `Err` here becomes
//! exit status 2 with the message on stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use heatring::analysis::loc::LocConfig;
use heatring::analysis::{classify, cocomo, fit_scaling, t_average};
use heatring::bench::{read_csv, write_csv, BenchRecord, CSV_HEADER};
use heatring::{solve_with_stats, total_heat};

use crate::cli::{AnalyzeArgs, BenchArgs, Command, MetricsArgs, ProblemArgs, SolveArgs, SweepArgs};

type CmdResult = Result<(), Box<dyn std::error::Error>>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Solve(args) => solve(&args),
        Command::Bench(args) => bench(&args),
        Command::Sweep(args) => sweep(&args),
        Command::Analyze(args) => analyze(&args),
        Command::Metrics(args) => metrics(&args),
    }
}

fn solve(args: &SolveArgs) -> CmdResult {
    let config = args.problem.to_config(args.threads);
    let (field, stats) = solve_with_stats(&config)?;
    let min = field.current.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = field
        .current
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let total = total_heat(&field);
    let mean = total / field.len() as f64;
    println!(
        "strategy={} threads={} nodes={} steps={}",
        config.strategy, config.threads, config.nodes, config.steps
    );
    println!("min={min} max={max} mean={mean} total_heat={total}");
    if let Some(stats) = stats {
        println!("exchange_messages={}", stats.total_messages());
    }
    if let Some(path) = &args.dump_field {
        let mut text = String::with_capacity(field.len() * 8);
        for value in &field.current {
            writeln!(text, "{value}")?;
        }
        std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn bench(args: &BenchArgs) -> CmdResult {
    run_bench(
        &args.problem,
        &[args.threads],
        args.repetitions,
        args.warmup,
        args.output.as_deref(),
        args.append,
    )
}

fn sweep(args: &SweepArgs) -> CmdResult {
    run_bench(
        &args.problem,
        &args.thread_list,
        args.repetitions,
        args.warmup,
        args.output.as_deref(),
        args.append,
    )
}

fn run_bench(
    problem: &ProblemArgs,
    thread_list: &[usize],
    repetitions: u32,
    warmup: u32,
    output: Option<&Path>,
    append: bool,
) -> CmdResult {
    let base = problem.to_config(1);
    // When CSV owns stdout, per-run summaries move to stderr so the output
    // still pipes cleanly into a file or a parser.
    let csv_on_stdout = output.is_none();
    let mut progress = |record: &BenchRecord| {
        if csv_on_stdout {
            eprintln!("{}", record.summary());
        } else {
            println!("{}", record.summary());
        }
    };
    let records = heatring::bench::sweep(
        &base,
        thread_list,
        repetitions,
        warmup,
        Some(&mut progress),
    )?;
    match output {
        Some(path) => {
            write_csv(&records, path, append)?;
            println!("wrote {} records to {}", records.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "{CSV_HEADER}")?;
            for record in &records {
                writeln!(out, "{}", record.to_csv_row())?;
            }
        }
    }
    Ok(())
}

fn analyze(args: &AnalyzeArgs) -> CmdResult {
    let records = read_csv(&args.input)?;
    if records.is_empty() {
        return Err(format!("{}: no records to analyze", args.input.display()).into());
    }
    let mut groups: BTreeMap<&str, Vec<&BenchRecord>> = BTreeMap::new();
    for record in &records {
        groups.entry(record.strategy.label()).or_default().push(record);
    }

    let mut report = String::new();
    let mut t_averages: BTreeMap<&str, f64> = BTreeMap::new();
    for (label, group) in &groups {
        let samples: Vec<(f64, f64)> = group
            .iter()
            .map(|r| (r.threads as f64, r.elapsed_s))
            .collect();
        match fit_scaling(&samples) {
            Ok(fit) => writeln!(
                report,
                "strategy={label} samples={} serial_s={:.6} parallel_s={:.6} r_squared={:.6}",
                samples.len(),
                fit.serial_s,
                fit.parallel_s,
                fit.r_squared
            )?,
            Err(e) => writeln!(report, "strategy={label} fit skipped: {e}")?,
        }
        let mean_at = |threads: usize| -> Option<f64> {
            let times: Vec<f64> = group
                .iter()
                .filter(|r| r.threads == threads)
                .map(|r| r.elapsed_s)
                .collect();
            (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64)
        };
        if let (Some(t2), Some(t20), Some(t40)) = (mean_at(2), mean_at(20), mean_at(40)) {
            let average = t_average(t2, t20, t40);
            writeln!(
                report,
                "strategy={label} t2={t2:.6} t20={t20:.6} t40={t40:.6} t_average={average:.6}"
            )?;
            t_averages.insert(label, average);
        }
    }

    if !args.efforts.is_empty() {
        let entries: Vec<(&str, f64, f64)> = args
            .efforts
            .iter()
            .map(|(label, pm)| {
                let average = t_averages.get(label.as_str()).ok_or_else(|| {
                    format!(
                        "no t_average for `{label}`: the CSV needs runs at 2, 20, and 40 threads"
                    )
                })?;
                Ok::<_, String>((label.as_str(), *pm, *average))
            })
            .collect::<Result<_, _>>()?;
        for point in classify(&entries) {
            writeln!(
                report,
                "classify label={} x={:.6} y={:.6}",
                point.label, point.x, point.y
            )?;
        }
    }

    match &args.output {
        Some(path) => {
            std::fs::write(path, &report).map_err(|e| format!("{}: {e}", path.display()))?;
            println!("wrote report to {}", path.display());
        }
        None => print!("{report}"),
    }
    Ok(())
}

fn metrics(args: &MetricsArgs) -> CmdResult {
    let report = heatring::analysis::loc::count_loc(&args.path, &LocConfig::default())?;
    println!("{:>10} {:>10} {:>10}  file", "code", "comment", "blank");
    for file in &report.files {
        println!(
            "{:>10} {:>10} {:>10}  {}",
            file.code,
            file.comment,
            file.blank,
            file.path.display()
        );
    }
    for skipped in &report.skipped {
        eprintln!("skipped {}: {}", skipped.path.display(), skipped.reason);
    }
    println!(
        "total: files={} code={} comment={} blank={}",
        report.files.len(),
        report.total_code(),
        report.total_comment(),
        report.total_blank()
    );
    let estimate = cocomo(report.total_code());
    println!(
        "cocomo-organic: kloc={:.3} effort_pm={:.6} schedule_months={:.6}",
        estimate.kloc, estimate.effort_pm, estimate.schedule_months
    );
    Ok(())
}
