//! `eventmc`: a miniature continuous-energy Monte Carlo neutron transport
//! engine with history-based and event-based executors.
//!
//! A run is an eigenvalue power iteration on a reflective pincell. Each
//! particle history owns its own random stream and its own tally log, and
//! every cross-particle sum is replayed in canonical order, so the k-eff
//! series, tallies and fission banks are bit-identical across executor,
//! in-flight cap, sorting, tally mode, lookup backend and worker count.
//!
//! ```no_run
//! use eventmc::{presets, RunConfig, Mode};
//!
//! let problem = presets::depleted_pincell(&presets::PincellPreset::default()).unwrap();
//! let config = RunConfig { mode: Mode::Event, sort_enabled: true, ..RunConfig::default() };
//! let result = eventmc::transport::run(&config, &problem).unwrap();
//! println!("k = {:?}", result.physics.keff.stats);
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod presets;
pub mod prng;
pub mod replication;
pub mod report;
pub mod result;
pub mod tally;
pub mod transport;
pub mod xslib;

pub use config::{Mode, Reduction, RunConfig, TallyMode};
pub use error::{Error, Result};
pub use geometry::{CellId, Pincell, Vec3};
pub use result::{PhysicsOutput, RunResult};
pub use transport::Problem;
pub use xslib::{Accel, Library};
