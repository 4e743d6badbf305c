//! The `eventmc` command line: library generation, single runs, the
//! depleted pincell benchmark, mode comparisons and scaling studies.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{Mode, Settings, TallyMode};
use crate::error::{Error, Result};
use crate::presets::{problem_from_settings, PincellPreset};
use crate::replication::weak_scaling_study;
use crate::report;
use crate::result::RunResult;
use crate::transport::run;
use crate::xslib::{generate_synthetic_library, library_fingerprint, write_library};

#[derive(Debug, Parser)]
#[command(
    name = "eventmc",
    version,
    about = "Event-based and history-based Monte Carlo transport mini-app"
)]
pub struct Cli {
    /// Master seed for the transport random streams.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory that receives reports.
    #[arg(long, global = true, default_value = "eventmc-out")]
    pub out: PathBuf,
    /// Print nothing on success.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic cross-section library file.
    GenerateLibrary(GenerateArgs),
    /// Run the problem described by a config file.
    Run(RunArgs),
    /// Depleted pincell benchmark: 251 nuclides per fuel material, 100 axial fuel regions.
    Bench(BenchArgs),
    /// Run a matrix of executor settings and check they agree bit for bit.
    CompareModes(CompareArgs),
    /// Weak scaling over replicated workers.
    Scaling(ScalingArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 251)]
    pub nuclides: usize,
    #[arg(long, default_value_t = 200)]
    pub gridpoints: usize,
    #[arg(long, default_value_t = 2)]
    pub materials: usize,
    #[arg(long, default_value_t = 251)]
    pub per_material: usize,
    /// Output file; defaults to `library.mcxs` inside `--out`.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

/// Flags mirroring config keys. Anything given here overrides the file.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub particles: Option<u64>,
    #[arg(long)]
    pub inactive: Option<u32>,
    #[arg(long)]
    pub active: Option<u32>,
    #[arg(long)]
    pub mode: Option<String>,
    /// on or off
    #[arg(long)]
    pub sort: Option<String>,
    #[arg(long)]
    pub sort_every_n: Option<u32>,
    #[arg(long)]
    pub max_in_flight: Option<u64>,
    #[arg(long)]
    pub tally_mode: Option<String>,
    #[arg(long)]
    pub accel: Option<String>,
    #[arg(long)]
    pub workers: Option<u32>,
    #[arg(long)]
    pub reduction: Option<String>,
    #[arg(long)]
    pub alpha_scatter: Option<f64>,
    #[arg(long)]
    pub fission_temperature: Option<f64>,
    #[arg(long)]
    pub fuel_radius: Option<f64>,
    #[arg(long)]
    pub pitch: Option<f64>,
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long)]
    pub n_axial: Option<u32>,
    #[arg(long)]
    pub library: Option<PathBuf>,
    #[arg(long)]
    pub nuclides: Option<usize>,
    #[arg(long)]
    pub gridpoints: Option<usize>,
    #[arg(long)]
    pub per_material: Option<usize>,
    #[arg(long)]
    pub library_seed: Option<u64>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        fn push<T: ToString>(
            v: &mut Vec<(&'static str, String)>,
            key: &'static str,
            x: &Option<T>,
        ) {
            if let Some(x) = x {
                v.push((key, x.to_string()));
            }
        }
        let mut v = Vec::new();
        push(&mut v, "particles", &self.particles);
        push(&mut v, "inactive", &self.inactive);
        push(&mut v, "active", &self.active);
        push(&mut v, "mode", &self.mode);
        push(&mut v, "sort", &self.sort);
        push(&mut v, "sort_every_n", &self.sort_every_n);
        push(&mut v, "max_in_flight", &self.max_in_flight);
        push(&mut v, "tally_mode", &self.tally_mode);
        push(&mut v, "accel", &self.accel);
        push(&mut v, "workers", &self.workers);
        push(&mut v, "reduction", &self.reduction);
        push(&mut v, "alpha_scatter", &self.alpha_scatter);
        push(&mut v, "fission_temperature", &self.fission_temperature);
        push(&mut v, "fuel_radius", &self.fuel_radius);
        push(&mut v, "pitch", &self.pitch);
        push(&mut v, "height", &self.height);
        push(&mut v, "n_axial", &self.n_axial);
        push(
            &mut v,
            "library",
            &self.library.as_ref().map(|p| p.display().to_string()),
        );
        push(&mut v, "nuclides", &self.nuclides);
        push(&mut v, "gridpoints", &self.gridpoints);
        push(&mut v, "per_material", &self.per_material);
        push(&mut v, "library_seed", &self.library_seed);
        v
    }

    pub fn apply(&self, settings: &mut Settings, seed: Option<u64>) -> Result<()> {
        for (key, value) in self.pairs() {
            settings
                .set(key, &value)
                .map_err(|m| Error::Config(format!("--{}: {m}", key.replace('_', "-"))))?;
        }
        if let Some(seed) = seed {
            settings.run.seed = seed;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat `key = value` config file.
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    /// Time only inactive batches, where nothing is tallied.
    #[arg(long)]
    pub inactive_only: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long, value_delimiter = ',', default_value = "history,event")]
    pub modes: Vec<Mode>,
    /// Sorting settings to sweep (on, off).
    #[arg(long, value_delimiter = ',', default_value = "off,on")]
    pub sorts: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "100,10000")]
    pub caps: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "fused,naive")]
    pub tally_modes: Vec<TallyMode>,
    /// Also write a grouped bar chart of the rates.
    #[arg(long)]
    pub svg: bool,
    /// Perturb the random stream of this particle in the last cell.
    #[arg(long, hide = true)]
    pub inject_fault: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(
        long = "workers-list",
        visible_alias = "worker-counts",
        value_delimiter = ',',
        default_value = "1,2,4"
    )]
    pub worker_counts: Vec<u32>,
    #[arg(long, default_value_t = 500)]
    pub particles_per_worker: u64,
    /// Also write a rate-versus-workers line chart.
    #[arg(long)]
    pub svg: bool,
}

struct Out {
    quiet: bool,
}

impl Out {
    fn say(&self, text: &str) {
        if !self.quiet {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 2 config error, 3 runtime error, 4
/// reproducibility failure.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = rewrite_scaling_workers(args.into_iter().map(Into::into).collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("eventmc: {e}");
            e.exit_code()
        }
    }
}

/// `scaling --workers 1,2,4` names a list, while `--workers` elsewhere is
/// the single worker-count config key.
fn rewrite_scaling_workers(mut args: Vec<OsString>) -> Vec<OsString> {
    let Some(pos) = args.iter().position(|a| a == "scaling") else {
        return args;
    };
    for a in args.iter_mut().skip(pos + 1) {
        if a == "--workers" {
            *a = "--workers-list".into();
        } else if let Some(rest) = a.to_str().and_then(|s| s.strip_prefix("--workers=")) {
            *a = format!("--workers-list={rest}").into();
        }
    }
    args
}

pub fn execute(cli: &Cli) -> Result<()> {
    let out = Out { quiet: cli.quiet };
    match &cli.command {
        Command::GenerateLibrary(a) => cmd_generate(cli, a, &out),
        Command::Run(a) => cmd_run(cli, a, &out),
        Command::Bench(a) => cmd_bench(cli, a, &out),
        Command::CompareModes(a) => cmd_compare(cli, a, &out),
        Command::Scaling(a) => cmd_scaling(cli, a, &out),
    }
}

fn write(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, body)?;
    Ok(())
}

fn cmd_generate(cli: &Cli, a: &GenerateArgs, out: &Out) -> Result<()> {
    let seed = cli.seed.unwrap_or(crate::config::DEFAULT_SEED);
    let lib =
        generate_synthetic_library(a.nuclides, a.gridpoints, a.materials, a.per_material, seed)?;
    let path = a
        .output
        .clone()
        .unwrap_or_else(|| cli.out.join("library.mcxs"));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_library(&lib, &path)?;
    out.say(&format!(
        "wrote {} ({} nuclides, {} materials, sha256 {})",
        path.display(),
        lib.nuclides.len(),
        lib.materials.len(),
        library_fingerprint(&lib)
    ));
    Ok(())
}

fn cmd_run(cli: &Cli, a: &RunArgs, out: &Out) -> Result<()> {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", a.config.display())))?;
    let mut settings = Settings::parse_str(&text)?;
    a.overrides.apply(&mut settings, cli.seed)?;
    let problem = problem_from_settings(&settings)?;
    let result = run(&settings.run, &problem)?;
    report::write_run_outputs(&cli.out, &result)?;
    out.say(&report::summary_text(&result));
    Ok(())
}

/// Settings for the depleted pincell benchmark before flag overrides.
pub fn bench_settings() -> Settings {
    let preset = PincellPreset::default();
    let mut s = Settings {
        nuclides: preset.nuclides,
        gridpoints: preset.gridpoints,
        per_material: Some(preset.fuel_nuclides),
        library_seed: Some(preset.library_seed),
        ..Settings::default()
    };
    s.geometry.n_axial = preset.n_axial;
    s
}

fn cmd_bench(cli: &Cli, a: &BenchArgs, out: &Out) -> Result<()> {
    let mut settings = bench_settings();
    a.overrides.apply(&mut settings, cli.seed)?;
    if a.inactive_only {
        settings.run.active_batches = 0;
    }
    let problem = problem_from_settings(&settings)?;
    let result = run(&settings.run, &problem)?;
    let csv = report::bench_csv(&result, a.inactive_only);
    write(&cli.out.join("bench.csv"), &csv)?;
    write(
        &cli.out.join(report::TIMINGS_FILE),
        &report::timings_csv(&result.timings),
    )?;
    out.say(&csv);
    Ok(())
}

fn parse_switch(s: &str) -> Result<bool> {
    match s {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        other => Err(Error::Config(format!(
            "--sorts: expected on/off, got `{other}`"
        ))),
    }
}

fn cmd_compare(cli: &Cli, a: &CompareArgs, out: &Out) -> Result<()> {
    let mut settings = bench_settings();
    a.overrides.apply(&mut settings, cli.seed)?;
    let sorts = a
        .sorts
        .iter()
        .map(|s| parse_switch(s))
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::new();
    for &mode in &a.modes {
        for &sort in &sorts {
            for &cap in &a.caps {
                for &tally in &a.tally_modes {
                    let mut c = settings.run.clone();
                    c.mode = mode;
                    c.sort_enabled = sort;
                    c.max_in_flight = cap;
                    c.tally_mode = tally;
                    cells.push(c);
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::Config("empty comparison matrix".into()));
    }
    if let (Some(p), Some(last)) = (a.inject_fault, cells.last_mut()) {
        last.fault_particle = Some(p);
    }
    let problem = problem_from_settings(&settings)?;
    let results = cells
        .iter()
        .map(|c| run(c, &problem))
        .collect::<Result<Vec<RunResult>>>()?;
    let csv = report::compare_csv(&results);
    write(&cli.out.join("compare_modes.csv"), &csv)?;
    if a.svg {
        let groups: Vec<(String, Vec<f64>)> = results
            .iter()
            .map(|r| {
                let c = &r.config;
                let name = format!(
                    "{}/{}/{}/{}",
                    c.mode,
                    if c.sort_enabled { "sort" } else { "nosort" },
                    c.max_in_flight,
                    c.tally_mode
                );
                let rates = vec![
                    r.inactive_rate().unwrap_or(f64::NAN),
                    r.active_rate().unwrap_or(f64::NAN),
                ];
                (name, rates)
            })
            .collect();
        let svg = report::svg_bar_chart(
            "Tracking rate by executor setting",
            &["inactive", "active"],
            &groups,
        );
        write(&cli.out.join("compare_modes.svg"), &svg)?;
    }
    out.say(&csv);
    let reference = results[0].physics.digest();
    let bad: Vec<usize> = (1..results.len())
        .filter(|&i| results[i].physics.digest() != reference)
        .collect();
    if !bad.is_empty() {
        return Err(Error::Reproducibility(format!(
            "{} of {} cells differ from the first (rows {:?})",
            bad.len(),
            results.len(),
            bad.iter().map(|i| i + 1).collect::<Vec<_>>()
        )));
    }
    out.say(&format!("PASS: {} cells bit-identical", results.len()));
    Ok(())
}

fn cmd_scaling(cli: &Cli, a: &ScalingArgs, out: &Out) -> Result<()> {
    let mut settings = bench_settings();
    a.overrides.apply(&mut settings, cli.seed)?;
    let problem = problem_from_settings(&settings)?;
    let rows = weak_scaling_study(
        &settings.run,
        &problem,
        &a.worker_counts,
        a.particles_per_worker,
    )?;
    let csv = report::scaling_csv(&rows);
    write(&cli.out.join("scaling.csv"), &csv)?;
    if a.svg {
        write(
            &cli.out.join("scaling.svg"),
            &report::svg_scaling_chart("Weak scaling", &rows),
        )?;
    }
    out.say(&csv);
    Ok(())
}
