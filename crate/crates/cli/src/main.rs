//! Batch verification harness: one subcommand per claim family, with
//! deterministic seeds and machine-readable reports.

mod checks;
mod report;
mod scenario;

use checks::Config;
use clap::{Parser, Subcommand};
use framecheck_core::projective::ProjCache;
use report::{emit_json, emit_text, exit_code, run_checks, ParamSet};
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "framecheck")]
#[command(
    about = "Exact verification of projective-pair, truncated-ring and product-generation claims"
)]
#[command(version)]
struct Cli {
    /// Odd prime parameter of the construction.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,

    /// Block parameter n (matrices have size 3n).
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,

    /// Truncation level for ring closures.
    #[arg(long, global = true, default_value_t = 12)]
    trunc: usize,

    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Budget for random-word witness searches.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_random_tries: usize,

    /// Report format.
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "json"])]
    format: String,

    /// Directory for projective point-table caches.
    #[arg(long, global = true, env = "FRAMECHECK_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Include the slow parameter sets (p, n) = (5, 3) and (3, 4).
    #[arg(long, global = true, default_value_t = false)]
    slow: bool,

    /// Record wall-clock timings in reports (off by default so reports are
    /// byte-identical across runs).
    #[arg(long, global = true, default_value_t = false)]
    timings: bool,

    /// Scenario configuration file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the truncated matrix-sequence ring: commutator supports,
    /// closure dimensions, vanishing, corner identities, projections.
    RingVerify,
    /// Verify the paired projective embeddings: census, labeling,
    /// relations, joint generation.
    CruxVerify {
        /// Write the relabeling permutation as one image per line.
        #[arg(long)]
        dump_sigma: Option<PathBuf>,
    },
    /// Verify the elementary-group generator sets per factor, the
    /// cogenerator search, and the embedded SL_3 copy.
    G0Verify,
    /// Verify joint generation of Alt(u) by the two embeddings of the
    /// generator-set images at one coordinate.
    G1Verify,
    /// Verify the product-level propositions: twisted embeddings,
    /// pigeonhole certificates, overlapping windows, block plans.
    PropsVerify {
        /// Run only the fast subset (pigeonhole and the m = 2 embeddings).
        #[arg(long, default_value_t = false)]
        quick: bool,
    },
    /// Demonstrate gluing and extension on small worked examples.
    GlueDemo,
    /// Run every check of every subcommand and aggregate.
    Report,
}

fn main() {
    let cli = Cli::parse();

    let scenario = match &cli.scenario {
        Some(path) => match scenario::load(path) {
            Ok(s) => Some(Arc::new(s)),
            Err(e) => {
                eprintln!("error: {e}");
                std::process::exit(2);
            }
        },
        None => None,
    };
    // Scenario values fill in anything not explicitly set on the line;
    // explicit flags win because clap defaults are indistinguishable here,
    // so scenario overrides only the defaults.
    let p = scenario.as_ref().and_then(|s| s.p).unwrap_or(cli.p);
    let n = scenario
        .as_ref()
        .and_then(|s| s.n_range.map(|(lo, _)| lo))
        .unwrap_or(cli.n);
    let trunc = scenario
        .as_ref()
        .and_then(|s| s.trunc.map(|t| t.closure))
        .unwrap_or(cli.trunc);
    let support_trunc = scenario
        .as_ref()
        .and_then(|s| s.trunc.map(|t| t.support))
        .unwrap_or(checks::DEFAULT_SUPPORT_TRUNC);
    let seed = scenario
        .as_ref()
        .and_then(|s| s.seeds.map(|x| x.default))
        .unwrap_or(cli.seed);

    let cfg = Config {
        p,
        n,
        trunc,
        support_trunc,
        seed,
        max_random_tries: cli.max_random_tries,
        slow: cli.slow,
        cache: Arc::new(ProjCache::new(cli.cache_dir.clone())),
        scenario,
    };

    let (command_name, check_list) = match &cli.command {
        Command::RingVerify => ("ring-verify", checks::ring::checks(&cfg)),
        Command::CruxVerify { dump_sigma } => {
            if let Some(path) = dump_sigma {
                match dump_sigma_file(&cfg, path) {
                    Ok(()) => {}
                    Err(e) => {
                        eprintln!("error: {e}");
                        std::process::exit(2);
                    }
                }
            }
            ("crux-verify", checks::crux_cmd::checks(&cfg))
        }
        Command::G0Verify => ("g0-verify", checks::g0::checks(&cfg)),
        Command::G1Verify => ("g1-verify", checks::g1::checks(&cfg)),
        Command::PropsVerify { quick } => ("props-verify", checks::props::checks(&cfg, *quick)),
        Command::GlueDemo => ("glue-demo", checks::glue_demo::checks(&cfg)),
        Command::Report => {
            let mut all = Vec::new();
            all.extend(checks::ring::checks(&cfg));
            all.extend(checks::crux_cmd::checks(&cfg));
            all.extend(checks::g0::checks(&cfg));
            all.extend(checks::g1::checks(&cfg));
            all.extend(checks::props::checks(&cfg, false));
            all.extend(checks::glue_demo::checks(&cfg));
            ("report", all)
        }
    };

    let params = ParamSet {
        p: cfg.p,
        n: cfg.n,
        trunc: cfg.trunc,
        seed: cfg.seed,
    };
    let reports = run_checks(check_list, &params, cli.timings);
    let rendered = match cli.format.as_str() {
        "json" => emit_json(command_name, &reports),
        _ => emit_text(command_name, &reports),
    };
    print!("{rendered}");
    std::process::exit(exit_code(&reports));
}

/// Builds the witness and writes its relabeling permutation in the raw
/// image-array text format (one integer per line).
fn dump_sigma_file(cfg: &Config, path: &std::path::Path) -> Result<(), String> {
    let ctx = checks::crux_cmd::shared_context(cfg);
    let witness = checks::crux_cmd::shared_witness(cfg, &ctx);
    let w = witness.get().as_ref().map_err(|e| e.clone())?;
    std::fs::write(path, w.active_sigma().to_image_lines())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}
