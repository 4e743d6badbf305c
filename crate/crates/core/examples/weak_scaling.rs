//! Weak scaling over replicated workers: each worker keeps the same number
//! of particles per batch. Efficiency is rate(W) / (W rate(1)).

use eventmc::presets::{depleted_pincell, PincellPreset};
use eventmc::replication::weak_scaling_study;
use eventmc::report::{scaling_csv, svg_scaling_chart};
use eventmc::RunConfig;

pub fn run_example() -> eventmc::Result<Vec<eventmc::replication::ScalingRow>> {
    let preset = PincellPreset {
        nuclides: 80,
        fuel_nuclides: 80,
        n_axial: 10,
        ..PincellPreset::default()
    };
    let problem = depleted_pincell(&preset)?;
    let base = RunConfig {
        inactive_batches: 2,
        active_batches: 2,
        ..RunConfig::default()
    };
    let rows = weak_scaling_study(&base, &problem, &[1, 2, 4], 300)?;
    print!("{}", scaling_csv(&rows));
    let svg = svg_scaling_chart("Weak scaling", &rows);
    let path = std::env::temp_dir().join(format!("eventmc-scaling-{}.svg", std::process::id()));
    std::fs::write(&path, svg)?;
    println!("chart: {}", path.display());
    Ok(rows)
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
