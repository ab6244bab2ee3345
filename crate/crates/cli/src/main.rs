use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use fog2c_cli::config::{parse_config, Config, Scenario};
use fog2c_cli::run::execute;
use fog2c_core::catalog;

#[derive(Parser)]
#[command(
    name = "fog2c",
    version,
    about = "Energy and age-of-information experiments for fog offloading"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScenarioArg {
    /// Energy CDF and medians of offloading strategies over one workload
    #[value(name = "scenario-a")]
    A,
    /// Median energy of each strategy swept over request sizes
    #[value(name = "scenario-b")]
    B,
    /// Age-of-information and power swept over the generation rate
    #[value(name = "scenario-c")]
    C,
}

impl ScenarioArg {
    fn scenario(self) -> Scenario {
        match self {
            ScenarioArg::A => Scenario::A,
            ScenarioArg::B => Scenario::B,
            ScenarioArg::C => Scenario::C,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment and write CSV artifacts plus report.json
    Run {
        scenario: ScenarioArg,
        /// Scenario config (strict JSON with unit-tagged values)
        #[arg(long)]
        config: PathBuf,
        /// Overrides experiment.seed from the config
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides output.directory from the config
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write SVG charts (best-effort)
        #[arg(long)]
        plot: bool,
        /// Worker threads; defaults to all cores. Results are identical
        /// for any thread count.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and fully validate a config, reporting every problem
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the built-in transceiver, wired-equipment, and machine catalog
    Catalog,
}

fn load_config(path: &Path) -> Result<Config, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(1);
        }
    };
    match parse_config(&text) {
        Ok(cfg) => Ok(cfg),
        Err(issues) => {
            for issue in &issues {
                eprintln!("config error at {issue}");
            }
            eprintln!(
                "{}: {} problem{}",
                path.display(),
                issues.len(),
                if issues.len() == 1 { "" } else { "s" }
            );
            Err(1)
        }
    }
}

fn run_cmd(
    scenario: ScenarioArg,
    config: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    plot: bool,
    threads: Option<usize>,
) -> i32 {
    if let Some(n) = threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return 1;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the worker pool: {e}");
            return 1;
        }
    }
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if cfg.scenario() != scenario.scenario() {
        eprintln!(
            "error: {} declares scenario {} but the command asked for scenario-{}",
            config.display(),
            cfg.scenario().name(),
            scenario.scenario().name()
        );
        return 1;
    }
    let seed = seed.unwrap_or(cfg.experiment.seed);
    let out = match out.or_else(|| cfg.output.directory.as_ref().map(PathBuf::from)) {
        Some(d) => d,
        None => {
            eprintln!("error: no output directory; pass --out or set output.directory");
            return 1;
        }
    };
    let plot = plot || cfg.wants_svg();
    match execute(&cfg, seed, &out, plot) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn print_catalog() {
    println!("built-in catalog (override any field in a config)\n");
    println!("wireless transceivers (reference link models):");
    for e in catalog::WIRELESS {
        let m = &e.model;
        println!(
            "  {:<12} tx {} pJ/b, rx {} pJ/b, rate {} Mb/s, base latency {} ms",
            e.name,
            m.eps_tx * 1e12,
            m.eps_rx * 1e12,
            m.rate / 1e6,
            m.base_latency * 1e3
        );
        println!("               source: {}", e.source);
    }
    println!("\nwired equipment (per-hop incremental models):");
    for e in catalog::WIRED {
        let m = &e.model;
        println!(
            "  {:<12} {} pJ/b, capacity {} Gb/s, proc delay {} us, active power {} W",
            e.name,
            m.eps * 1e12,
            m.capacity / 1e9,
            m.proc_delay * 1e6,
            e.active_power
        );
        println!("               source: {}", e.source);
    }
    println!("\nmachines (power and peak compute):");
    for e in catalog::COMPUTERS {
        let (lo, hi) = e.eff_range_pj_per_b;
        println!(
            "  {:<12} {} W, {:e} Flop/s, {} cores, {lo}-{hi} pJ/b over {}-{} Flop/B",
            e.spec.name,
            e.spec.power,
            e.spec.perf,
            e.cores,
            catalog::INTENSITY_RANGE_FLOP_PER_BYTE.0,
            catalog::INTENSITY_RANGE_FLOP_PER_BYTE.1
        );
        println!("               source: {}", e.source);
    }
    println!(
        "\nreference conditions: {} dB path loss, {} K noise temperature",
        catalog::REFERENCE_PATH_LOSS_DB,
        catalog::REFERENCE_TEMPERATURE_K
    );
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { scenario, config, seed, out, plot, threads } => {
            run_cmd(scenario, &config, seed, out, plot, threads)
        }
        Cmd::Validate { config } => match load_config(&config) {
            Ok(cfg) => {
                let (nodes, links) = cfg
                    .topology
                    .as_ref()
                    .map(|t| (t.nodes.len(), t.links.len()))
                    .unwrap_or((0, 0));
                println!(
                    "ok: scenario {}, {} nodes, {} directed links, digest {}",
                    cfg.scenario().name(),
                    nodes,
                    links,
                    fog2c_cli::config::digest(&cfg)
                );
                0
            }
            Err(code) => code,
        },
        Cmd::Catalog => {
            print_catalog();
            0
        }
    }
}

fn main() {
    // Die quietly when a pager or head closes the pipe, like other CLIs.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(real_main());
}
