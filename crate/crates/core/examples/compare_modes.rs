//! History-based versus event-based execution, with and without sorting,
//! under several in-flight caps. Every cell must produce the same physics
//! digest; the tracking rates are what differ.

use eventmc::presets::{depleted_pincell, PincellPreset};
use eventmc::{Mode, RunConfig};

pub fn run_example() -> eventmc::Result<Vec<String>> {
    let preset = PincellPreset {
        n_axial: 10,
        ..PincellPreset::default()
    };
    let problem = depleted_pincell(&preset)?;
    let base = RunConfig {
        particles_per_batch: 500,
        inactive_batches: 2,
        active_batches: 2,
        ..RunConfig::default()
    };
    let mut digests = Vec::new();
    for (mode, sort, cap) in [
        (Mode::History, false, 100_000),
        (Mode::Event, false, 64),
        (Mode::Event, true, 64),
        (Mode::Event, true, 100_000),
    ] {
        let config = RunConfig {
            mode,
            sort_enabled: sort,
            max_in_flight: cap,
            ..base.clone()
        };
        let r = eventmc::transport::run(&config, &problem)?;
        let digest = r.physics.digest();
        println!(
            "{mode:>7} sort={sort:<5} cap={cap:<6} inactive {:>9.0}/s active {:>9.0}/s digest {}",
            r.inactive_rate().unwrap_or(0.0),
            r.active_rate().unwrap_or(0.0),
            &digest[..16]
        );
        digests.push(digest);
    }
    assert!(
        digests.windows(2).all(|w| w[0] == w[1]),
        "executors disagree"
    );
    Ok(digests)
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
