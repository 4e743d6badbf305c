//! Fused tallies reuse the per-nuclide partials cached at lookup time;
//! naive tallies walk the material's nuclides again for every track.
//! Results are bit-identical while the work differs by the nuclide count.

use eventmc::presets::{depleted_pincell, PincellPreset};
use eventmc::{RunConfig, TallyMode};

pub fn run_example() -> eventmc::Result<(u64, u64)> {
    let preset = PincellPreset {
        n_axial: 10,
        ..PincellPreset::default()
    };
    let problem = depleted_pincell(&preset)?;
    let mut evals = Vec::new();
    let mut digests = Vec::new();
    for tally_mode in [TallyMode::Fused, TallyMode::Naive] {
        let config = RunConfig {
            particles_per_batch: 1000,
            inactive_batches: 2,
            active_batches: 3,
            tally_mode,
            ..RunConfig::default()
        };
        let r = eventmc::transport::run(&config, &problem)?;
        println!(
            "{tally_mode:>6}: {} scoring evaluations, active {:.3}s, inactive rate {:.0}/s, active rate {:.0}/s",
            r.counters.scoring_xs_evals,
            r.active_seconds,
            r.inactive_rate().unwrap_or(0.0),
            r.active_rate().unwrap_or(0.0)
        );
        evals.push(r.counters.scoring_xs_evals);
        digests.push(r.physics.digest());
    }
    assert_eq!(digests[0], digests[1]);
    println!(
        "naive/fused evaluation ratio {:.1}",
        evals[1] as f64 / evals[0] as f64
    );
    Ok((evals[0], evals[1]))
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
