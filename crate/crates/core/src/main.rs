use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use antijam::harness::{emit_outputs, load_experiment, run_experiment, ExperimentSpec, Mode};
use antijam::Error;

/// Cooperative anti-jamming channel selection simulator.
#[derive(Debug, Parser)]
#[command(name = "antijam", version)]
struct Cli {
    #[arg(value_enum)]
    mode: Mode,

    /// Scenario file (TOML).
    #[arg(long, required_unless_present = "spec")]
    scenario: Option<PathBuf>,

    /// Experiment file; command-line options override its values.
    #[arg(long)]
    spec: Option<PathBuf>,

    /// Seeds, e.g. `1,2,3` or `1-50` or `1-10,20`.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Option<SeedList>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// UAV step size.
    #[arg(long)]
    b1: Option<f64>,
    /// Jammer step size.
    #[arg(long)]
    b2: Option<f64>,
    /// Jammer convergence probability.
    #[arg(long)]
    q: Option<f64>,
    /// UAV convergence probability.
    #[arg(long)]
    inner_q: Option<f64>,
    /// Jammer epoch cap per period.
    #[arg(long)]
    max_epochs: Option<usize>,
    /// UAV slot cap per epoch.
    #[arg(long)]
    max_slots: Option<usize>,
    /// Restart UAV strategies from uniform at every jammer epoch.
    #[arg(long)]
    reset_per_epoch: bool,

    /// Channel counts for `sweep-channels` and `compare`.
    #[arg(long, value_delimiter = ',')]
    channels: Option<Vec<usize>>,
    /// Jammer powers for `sweep-power`.
    #[arg(long, value_delimiter = ',')]
    pj_grid: Option<Vec<f64>>,
    /// UAV powers for `sweep-power`.
    #[arg(long, value_delimiter = ',')]
    pn_grid: Option<Vec<f64>>,

    /// Worker threads (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
    /// Largest profile space the oracle will enumerate.
    #[arg(long)]
    enumeration_cap: Option<u64>,
}

#[derive(Debug, Clone)]
struct SeedList(Vec<u64>);

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|e| format!("bad seed `{a}`: {e}"))?;
                let b: u64 = b.trim().parse().map_err(|e| format!("bad seed `{b}`: {e}"))?;
                if a > b {
                    return Err(format!("empty seed range {part}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|e| format!("bad seed `{part}`: {e}"))?),
        }
    }
    Ok(SeedList(out))
}

fn build_spec(cli: Cli) -> antijam::Result<ExperimentSpec> {
    let mut spec = match (&cli.spec, &cli.scenario) {
        (Some(path), scenario) => {
            let mut spec = load_experiment(path)?;
            spec.mode = cli.mode;
            if let Some(s) = scenario {
                spec.scenario = antijam::load_scenario(s)?;
                spec.scenario_path = s.clone();
            }
            spec
        }
        (None, Some(s)) => ExperimentSpec::from_scenario_file(cli.mode, s)?,
        (None, None) => unreachable!("clap requires --scenario without --spec"),
    };
    let l = &mut spec.learning;
    if let Some(v) = cli.b1 {
        l.b1 = v;
    }
    if let Some(v) = cli.b2 {
        l.b2 = v;
    }
    if let Some(v) = cli.q {
        l.q_threshold = v;
    }
    if let Some(v) = cli.inner_q {
        l.inner_q_threshold = v;
    }
    if let Some(v) = cli.max_epochs {
        l.max_epochs = v;
    }
    if let Some(v) = cli.max_slots {
        l.max_slots = v;
    }
    if cli.reset_per_epoch {
        l.reset_per_epoch = true;
    }
    if let Some(v) = cli.seeds {
        spec.seeds = v.0;
    }
    if let Some(v) = cli.out {
        spec.out_dir = v;
    }
    if let Some(v) = cli.channels {
        spec.channels = v;
    }
    if let Some(v) = cli.pj_grid {
        spec.pj_grid = v;
    }
    if let Some(v) = cli.pn_grid {
        spec.pn_grid = v;
    }
    if let Some(v) = cli.workers {
        spec.workers = v;
    }
    if let Some(v) = cli.enumeration_cap {
        spec.enumeration_cap = v;
    }
    spec.ensure_valid()?;
    Ok(spec)
}

fn report(e: &Error) -> ExitCode {
    match e {
        Error::Validation(v) => {
            eprintln!("error: invalid configuration");
            for x in v {
                eprintln!("  {x}");
            }
        }
        other => eprintln!("error: {other}"),
    }
    match e {
        Error::EnumerationCap { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match build_spec(cli) {
        Ok(s) => s,
        Err(e) => return report(&e),
    };
    let result = run_experiment(&spec).and_then(|out| emit_outputs(&spec, &out).map(|m| (out, m)));
    match result {
        Ok((out, manifest)) => {
            println!(
                "{}: {} records written to {} (config {})",
                spec.mode,
                out.records.len(),
                spec.out_dir.display(),
                &manifest.config_hash[..12]
            );
            for m in &manifest.means {
                if let Some(loss) = m.mean_total_loss {
                    let pn = m.uav_power.map_or_else(|| "mixed".to_string(), |p| p.to_string());
                    println!(
                        "  M={} p_j={} p_n={} {:<15} mean total loss {:.6}",
                        m.channels,
                        m.jammer_power,
                        pn,
                        m.algorithm.as_str(),
                        loss
                    );
                }
            }
            for t in &manifest.trends {
                let bad = t.steps.iter().filter(|s| s.violated).count();
                let fixed = t.fixed.as_deref().map(|f| format!(" ({f})")).unwrap_or_default();
                println!("  trend along {}{}: {} of {} steps violated", t.axis, fixed, bad, t.steps.len());
            }
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1,2,3").unwrap().0, vec![1, 2, 3]);
        assert_eq!(parse_seeds("1-3,7").unwrap().0, vec![1, 2, 3, 7]);
        assert!(parse_seeds("3-1").is_err());
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
