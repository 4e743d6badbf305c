//! A pincell run driven by the same flat config format the command line
//! reads, with the four report files written to a temporary directory.

use eventmc::config::Settings;
use eventmc::presets::problem_from_settings;
use eventmc::report::write_run_outputs;

const CONFIG: &str = "
# small depleted pincell
particles = 400
inactive = 3
active = 4
mode = event
sort = on
accel = unionized
nuclides = 60
per_material = 60
gridpoints = 80
n_axial = 8
";

pub fn run_example() -> eventmc::Result<eventmc::RunResult> {
    let settings = Settings::parse_str(CONFIG)?;
    let problem = problem_from_settings(&settings)?;
    let result = eventmc::transport::run(&settings.run, &problem)?;

    let dir = std::env::temp_dir().join(format!("eventmc-pincell-{}", std::process::id()));
    for path in write_run_outputs(&dir, &result)? {
        println!("wrote {}", path.display());
    }
    print!("{}", std::fs::read_to_string(dir.join("summary.txt"))?);
    std::fs::remove_dir_all(&dir)?;
    Ok(result)
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
