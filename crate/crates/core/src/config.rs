//! Run parameters and the flat `key = value` configuration format.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Pincell;
use crate::xslib::Accel;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    History,
    Event,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TallyMode {
    #[default]
    Fused,
    Naive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Reduction {
    #[default]
    Deterministic,
    Fast,
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, $($variant:path => $name:literal),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $name),+ })
            }
        }

        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(format!(concat!("unknown ", $what, " `{}`"), other)),
                }
            }
        }
    };
}

keyword_enum!(Mode, "mode", Mode::History => "history", Mode::Event => "event");
keyword_enum!(TallyMode, "tally mode", TallyMode::Fused => "fused", TallyMode::Naive => "naive");
keyword_enum!(Reduction, "reduction", Reduction::Deterministic => "deterministic", Reduction::Fast => "fast");

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub particles_per_batch: u64,
    pub inactive_batches: u32,
    pub active_batches: u32,
    pub mode: Mode,
    pub sort_enabled: bool,
    /// Sort before every n-th lookup kernel launch.
    pub sort_every_n: u32,
    pub max_in_flight: u64,
    pub tally_mode: TallyMode,
    pub accel: Accel,
    pub workers: u32,
    pub seed: u64,
    pub reduction: Reduction,
    pub alpha_scatter: f64,
    /// Temperature of the fission spectrum (eV).
    pub fission_temperature: f64,
    /// Test hook: perturbs the stream of this global particle index.
    pub fault_particle: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            particles_per_batch: 1000,
            inactive_batches: 5,
            active_batches: 5,
            mode: Mode::History,
            sort_enabled: false,
            sort_every_n: 1,
            max_in_flight: 100_000,
            tally_mode: TallyMode::Fused,
            accel: Accel::Binary,
            workers: 1,
            seed: DEFAULT_SEED,
            reduction: Reduction::Deterministic,
            alpha_scatter: 0.5,
            fission_temperature: 1.3e6,
            fault_particle: None,
        }
    }
}

impl RunConfig {
    pub fn total_batches(&self) -> u32 {
        self.inactive_batches + self.active_batches
    }

    pub fn validate(&self) -> Result<()> {
        if self.particles_per_batch == 0 {
            return Err(Error::Config("particles must be at least 1".into()));
        }
        if self.max_in_flight == 0 {
            return Err(Error::Config("max_in_flight must be at least 1".into()));
        }
        if self.total_batches() == 0 {
            return Err(Error::Config("inactive + active must be at least 1".into()));
        }
        if self.sort_every_n == 0 {
            return Err(Error::Config("sort_every_n must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.workers as u64 > self.particles_per_batch {
            return Err(Error::Config(format!(
                "{} workers exceed {} particles per batch",
                self.workers, self.particles_per_batch
            )));
        }
        if !(self.alpha_scatter > 0.0 && self.alpha_scatter < 1.0) {
            return Err(Error::Config(format!(
                "alpha_scatter must lie in (0, 1), got {}",
                self.alpha_scatter
            )));
        }
        if !(self.fission_temperature > 0.0 && self.fission_temperature.is_finite()) {
            return Err(Error::Config("fission_temperature must be positive".into()));
        }
        Ok(())
    }
}

/// Where the cross-section library comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum LibrarySource {
    File(PathBuf),
    Generate {
        nuclides: usize,
        gridpoints: usize,
        per_material: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometryParams {
    pub fuel_radius: f64,
    pub pitch: f64,
    pub height: f64,
    pub n_axial: u32,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            fuel_radius: 0.4096,
            pitch: 1.26,
            height: 10.0,
            n_axial: 10,
        }
    }
}

impl GeometryParams {
    /// Pincell whose slabs use materials `0..n_fuel` cyclically and whose
    /// moderator is material `n_fuel`.
    pub fn build(&self, n_fuel_materials: u32) -> Result<Pincell> {
        let fuel = (0..self.n_axial)
            .map(|k| k % n_fuel_materials.max(1))
            .collect();
        Pincell::new(
            self.fuel_radius,
            self.pitch,
            self.height,
            self.n_axial,
            fuel,
            n_fuel_materials,
        )
    }
}

/// Everything a config file can set.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub run: RunConfig,
    pub geometry: GeometryParams,
    /// `None` means "generate with defaults sized to the geometry".
    pub library: Option<PathBuf>,
    pub nuclides: usize,
    pub gridpoints: usize,
    pub per_material: Option<usize>,
    pub library_seed: Option<u64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            run: RunConfig::default(),
            geometry: GeometryParams::default(),
            library: None,
            nuclides: 251,
            gridpoints: 200,
            per_material: None,
            library_seed: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "seed",
    "particles",
    "inactive",
    "active",
    "mode",
    "sort",
    "sort_every_n",
    "max_in_flight",
    "tally_mode",
    "accel",
    "workers",
    "reduction",
    "alpha_scatter",
    "fission_temperature",
    "fuel_radius",
    "pitch",
    "height",
    "n_axial",
    "library",
    "nuclides",
    "gridpoints",
    "per_material",
    "library_seed",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| format!("invalid value `{value}` for `{key}`: {e}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(format!(
            "invalid value `{value}` for `{key}`: expected on/off"
        )),
    }
}

impl Settings {
    pub fn source(&self) -> LibrarySource {
        match &self.library {
            Some(path) => LibrarySource::File(path.clone()),
            None => LibrarySource::Generate {
                nuclides: self.nuclides,
                gridpoints: self.gridpoints,
                per_material: self.per_material.unwrap_or(self.nuclides),
                seed: self.library_seed.unwrap_or(self.run.seed),
            },
        }
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let r = &mut self.run;
        match key {
            "seed" => r.seed = parse(key, value)?,
            "particles" => r.particles_per_batch = parse(key, value)?,
            "inactive" => r.inactive_batches = parse(key, value)?,
            "active" => r.active_batches = parse(key, value)?,
            "mode" => r.mode = parse(key, value)?,
            "sort" => r.sort_enabled = parse_bool(key, value)?,
            "sort_every_n" => r.sort_every_n = parse(key, value)?,
            "max_in_flight" => r.max_in_flight = parse(key, value)?,
            "tally_mode" => r.tally_mode = parse(key, value)?,
            "accel" => r.accel = parse(key, value)?,
            "workers" => r.workers = parse(key, value)?,
            "reduction" => r.reduction = parse(key, value)?,
            "alpha_scatter" => r.alpha_scatter = parse(key, value)?,
            "fission_temperature" => r.fission_temperature = parse(key, value)?,
            "fuel_radius" => self.geometry.fuel_radius = parse(key, value)?,
            "pitch" => self.geometry.pitch = parse(key, value)?,
            "height" => self.geometry.height = parse(key, value)?,
            "n_axial" => self.geometry.n_axial = parse(key, value)?,
            "library" => self.library = Some(PathBuf::from(value)),
            "nuclides" => self.nuclides = parse(key, value)?,
            "gridpoints" => self.gridpoints = parse(key, value)?,
            "per_material" => self.per_material = Some(parse(key, value)?),
            "library_seed" => self.library_seed = Some(parse(key, value)?),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Parses a config file body on top of the defaults.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut settings = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigLine {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            settings
                .set(key.trim(), value.trim())
                .map_err(|message| Error::ConfigLine {
                    line: i + 1,
                    message,
                })?;
        }
        Ok(settings)
    }
}
