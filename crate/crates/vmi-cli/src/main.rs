//! Command-line runner: spectrum quadrature, event generation, the
//! detector thought experiments, and parameter scans, all driven by a
//! flat key-value configuration file.
//!
//! Exit codes: 0 success, 2 configuration error, 3 quadrature
//! non-convergence, 4 sampling failure.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use vmi_core::config::RunConfig;
use vmi_core::error::{Error, Result};
use vmi_core::event::Event;
use vmi_core::gedanken::{self, CollapseScenario};
use vmi_core::spectrum::Normalization;

#[derive(Parser)]
#[command(name = "vmi", version, about = "Two-source vector-meson interferometry toolkit")]
struct Cli {
    /// Run configuration file (flat key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override generator.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the interference pT spectrum by quadrature.
    Spectrum {
        /// Scale the no-interference rate to 1 at pT = 0.
        #[arg(long)]
        normalize_fig2: bool,
        /// Also write a (k, b, n) photon-flux grid for validation plots.
        #[arg(long)]
        dump_flux: bool,
    },
    /// Generate a Monte Carlo event stream.
    Events,
    /// Run the measurement-protocol analyses.
    Gedanken,
    /// Scan a parameter and tabulate the dip depth per point.
    Scan,
}

fn main() {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().expect("thread pool");
    let code = match pool.install(|| run(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("vmi: error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::parse("")?,
    };
    if let Some(seed) = cli.seed {
        cfg.set("generator.seed", &seed.to_string());
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    std::fs::create_dir_all(&cli.out)?;
    match cli.command {
        Command::Spectrum {
            normalize_fig2,
            dump_flux,
        } => run_spectrum(&cfg, cli, normalize_fig2, dump_flux),
        Command::Events => run_events(&cfg, cli),
        Command::Gedanken => run_gedanken(&cfg, cli),
        Command::Scan => run_scan(&cfg, cli),
    }
}

fn meta_common(cfg: &RunConfig) -> serde_json::Map<String, serde_json::Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), "vmi".into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("config_hash".into(), cfg.hash_hex().into());
    m
}

fn csv_banner(cfg: &RunConfig) -> String {
    format!("# vmi {} config={}\n", env!("CARGO_PKG_VERSION"), cfg.hash_hex())
}

fn run_spectrum(cfg: &RunConfig, cli: &Cli, normalize: bool, dump_flux: bool) -> Result<()> {
    let catalog = cfg.load_catalog()?;
    let engine = cfg.build_engine(&catalog)?;
    let grid = cfg.grid()?;
    let y = cfg.rapidity()?;
    let mut table = engine.pt_spectrum(y, &grid)?;
    if normalize {
        let rate0 = engine.rate_no_interference_at_zero(y)?;
        table.normalize_unit_at_zero(rate0);
    }
    let stats = engine.b_stats(y)?;

    std::fs::write(
        cli.out.join("spectrum.csv"),
        csv_banner(cfg) + &table.to_csv(),
    )?;
    if dump_flux {
        std::fs::write(cli.out.join("flux_grid.csv"), flux_grid_csv(cfg, &engine, y)?)?;
    }
    let mut meta = meta_common(cfg);
    meta.insert("model".into(), table.model.clone().into());
    meta.insert("y".into(), y.into());
    meta.insert(
        "grid".into(),
        serde_json::json!({"pt_max_mev": grid.pt_max_mev, "bins": grid.bins}),
    );
    meta.insert(
        "normalization".into(),
        match table.normalization {
            Normalization::Raw => "raw".into(),
            Normalization::UnitAtZero => "unit_at_zero".into(),
        },
    );
    meta.insert("quadrature_error".into(), table.quadrature_error.into());
    meta.insert(
        "b_stats".into(),
        serde_json::json!({
            "mean_fm": stats.mean_fm,
            "median_fm": stats.median_fm,
        }),
    );
    write_json(&cli.out.join("spectrum.meta.json"), &meta)?;
    println!(
        "spectrum: {} bins to {} MeV, model {}, <b> = {:.1} fm -> {}",
        grid.bins,
        grid.pt_max_mev,
        table.model,
        stats.mean_fm,
        cli.out.join("spectrum.csv").display()
    );
    Ok(())
}

/// (k, b, n) grid of the equivalent-photon flux across the run's
/// photon-energy and impact-parameter ranges.
fn flux_grid_csv(
    cfg: &RunConfig,
    engine: &vmi_core::SpectrumEngine,
    y: f64,
) -> Result<String> {
    let mut out = csv_banner(cfg);
    out.push_str("k_mev,b_fm,n_per_mev_fm2\n");
    let (k1, k2) = engine.production.photon_energies(y);
    let beams = &engine.production.beams;
    let ks = [0.5 * k2, k2, 0.5 * (k1 + k2), k1, 2.0 * k1];
    for &k in &ks {
        for i in 0..40 {
            let b = beams.b_min_fm
                * (beams.b_max_fm / beams.b_min_fm).powf(i as f64 / 39.0);
            let n = vmi_core::flux::flux_density(k, b, &beams.nucleus)?;
            out.push_str(&format!("{k:.6},{b:.6},{n:.9e}\n"));
        }
    }
    Ok(out)
}

fn run_events(cfg: &RunConfig, cli: &Cli) -> Result<()> {
    let catalog = cfg.load_catalog()?;
    let generator = cfg.build_generator(&catalog)?;
    let events = generator.generate()?;
    let format = cfg.get("output.events_format").unwrap_or("ndjson");
    let path = match format {
        "ndjson" => {
            let mut body = String::new();
            for ev in &events {
                body.push_str(&ev.to_json_line());
                body.push('\n');
            }
            let p = cli.out.join("events.ndjson");
            std::fs::write(&p, body)?;
            p
        }
        "csv" => {
            let mut body = csv_banner(cfg);
            body.push_str(Event::CSV_HEADER);
            body.push('\n');
            for ev in &events {
                body.push_str(&ev.to_csv_row());
                body.push('\n');
            }
            let p = cli.out.join("events.csv");
            std::fs::write(&p, body)?;
            p
        }
        other => {
            return Err(Error::domain(
                "output.events_format",
                format!("unknown format '{other}'"),
            ))
        }
    };
    let mut meta = meta_common(cfg);
    let gc = &generator.config;
    meta.insert("seed".into(), gc.seed.into());
    meta.insert("n_events".into(), gc.n_events.into());
    meta.insert("format".into(), format.into());
    meta.insert("model".into(), generator.engine.model.name().into());
    write_json(&cli.out.join("events.meta.json"), &meta)?;
    println!(
        "events: {} generated with seed {} -> {}",
        events.len(),
        gc.seed,
        path.display()
    );
    Ok(())
}

fn run_gedanken(cfg: &RunConfig, cli: &Cli) -> Result<()> {
    let catalog = cfg.load_catalog()?;
    let layout = cfg.build_layout()?;
    let scenario = cfg.scenario()?;

    let (events, report) = match cfg.get("gedanken.events_path") {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let events = vmi_core::event::parse_event_records(&text)?;
            let seed = cfg.generator_config()?.seed;
            let pt_max = cfg.generator_config()?.pt_max_mev;
            let report = gedanken::protocol_over_events(
                &events, seed, pt_max, &layout, scenario, None,
            )?;
            (events, report)
        }
        None => {
            let generator = cfg.build_generator(&catalog)?;
            let report = gedanken::dual_detector_protocol(&generator, &layout, scenario)?;
            // the pointing study runs on the same scenario's ensemble
            let mut gen = generator.clone();
            if scenario == CollapseScenario::CollapseAtDecay {
                gen.engine.model = vmi_core::DecoherenceModel::FullDecoherence;
            }
            (gen.generate()?, report)
        }
    };
    let pointing = gedanken::pointing_study(&events, &layout);

    // flight-time bound diagnostics
    let mut max_ratio = 0.0f64;
    let mut n_timed = 0usize;
    for ev in &events {
        if let Ok(dt) = gedanken::flight_time_difference(ev, &layout) {
            let bound = ev.b_fm / vmi_core::constants::C_LIGHT;
            max_ratio = max_ratio.max(dt / bound);
            n_timed += 1;
        }
    }

    let mut meta = meta_common(cfg);
    meta.insert("scenario".into(), serde_json::to_value(scenario).unwrap());
    meta.insert("layout".into(), serde_json::to_value(layout).unwrap());
    meta.insert("protocol".into(), serde_json::to_value(&report).unwrap());
    meta.insert("pointing".into(), serde_json::to_value(&pointing).unwrap());
    meta.insert(
        "flight_time".into(),
        serde_json::json!({"events_timed": n_timed, "max_dt_over_b_over_c": max_ratio}),
    );
    write_json(&cli.out.join("protocol.json"), &meta)?;

    let mut text = report.to_text();
    text.push_str(&format!(
        "pointing: {} reconstructable of {}; median offset (perpendicular) = {:.2} fm; accuracy = {:.4} over {} unambiguous\n",
        pointing.n_reconstructable,
        pointing.n_events,
        pointing.median_offset_fm,
        pointing.accuracy,
        pointing.n_unambiguous
    ));
    text.push_str(&format!(
        "flight time: max dt/(b/c) = {max_ratio:.6} over {n_timed} events\n"
    ));
    std::fs::write(cli.out.join("protocol.txt"), &text)?;
    print!("{text}");
    Ok(())
}

fn run_scan(cfg: &RunConfig, cli: &Cli) -> Result<()> {
    let parameter = cfg.get("scan.parameter").unwrap_or("eta").to_string();
    let values_raw = cfg
        .get("scan.values")
        .ok_or_else(|| Error::domain("scan", "scan.values is required"))?
        .to_string();
    let catalog = cfg.load_catalog()?;
    let grid = cfg.grid()?;

    let mut summary = csv_banner(cfg);
    summary.push_str("parameter,value,dip_depth\n");
    let points: Vec<&str> = values_raw
        .split(if parameter == "b_window" { ';' } else { ',' })
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if points.is_empty() {
        return Err(Error::domain("scan", "scan.values is empty"));
    }
    for (i, point) in points.iter().enumerate() {
        let mut cfg_i = cfg.clone();
        match parameter.as_str() {
            "eta" => {
                cfg_i.set("decoherence.model", "fixed_eta");
                cfg_i.set("decoherence.eta", point);
            }
            "y" => cfg_i.set("rapidity", point),
            "b_window" => {
                let (lo, hi) = point.split_once(':').ok_or_else(|| {
                    Error::domain("scan", format!("b_window point '{point}' is not lo:hi"))
                })?;
                cfg_i.set("beam.b_min_fm", lo.trim());
                cfg_i.set("beam.b_max_fm", hi.trim());
            }
            other => {
                return Err(Error::domain(
                    "scan",
                    format!("unknown scan parameter '{other}' (eta | b_window | y)"),
                ))
            }
        }
        let engine = cfg_i.build_engine(&catalog)?;
        let y = cfg_i.rapidity()?;
        let table = engine.pt_spectrum(y, &grid)?;
        let total = engine.total_weight(y)?;
        let (with_int, no_int) = engine.rates_at(0.0, y, total)?;
        let dip = 1.0 - if no_int > 0.0 { with_int / no_int } else { 1.0 };
        std::fs::write(
            cli.out.join(format!("scan_{parameter}_{i}.csv")),
            csv_banner(cfg) + &table.to_csv(),
        )?;
        summary.push_str(&format!("{parameter},{point},{dip:.9}\n"));
    }
    std::fs::write(cli.out.join("scan_summary.csv"), &summary)?;
    let mut meta = meta_common(cfg);
    meta.insert("parameter".into(), parameter.clone().into());
    meta.insert("points".into(), points.len().into());
    write_json(&cli.out.join("scan.meta.json"), &meta)?;
    print!("{summary}");
    Ok(())
}

fn write_json(
    path: &std::path::Path,
    value: &serde_json::Map<String, serde_json::Value>,
) -> Result<()> {
    let body = serde_json::to_string_pretty(value).expect("metadata serializes");
    std::fs::write(path, body + "\n")?;
    Ok(())
}
