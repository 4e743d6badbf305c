//! One constant-cross-section nuclide in a reflective cell behaves as an
//! infinite medium, where k = nu sigma_f / (sigma_c + sigma_f).

use eventmc::presets::{infinite_medium, InfiniteMedium};
use eventmc::RunConfig;

pub fn run_example() -> eventmc::Result<(f64, f64, f64)> {
    let medium = InfiniteMedium::default();
    let problem = infinite_medium(&medium)?;
    let config = RunConfig {
        particles_per_batch: 4000,
        inactive_batches: 2,
        active_batches: 10,
        ..RunConfig::default()
    };
    let result = eventmc::transport::run(&config, &problem)?;
    let (k, se) = result
        .physics
        .keff
        .stats
        .expect("active batches give statistics");
    let exact = medium.k_infinity();
    println!(
        "k = {k:.5} +/- {se:.5}, analytic {exact}, deviation {:.2} sigma",
        (k - exact) / se
    );
    Ok((k, se, exact))
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
