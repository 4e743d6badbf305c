//! Macroscopic lookups through the three search backends: per-nuclide
//! binary search, double indexing and the fully unionized grid. Values are
//! identical; only the search (and its cost) differs.

use std::time::Instant;

use eventmc::prng::RngState;
use eventmc::xslib::{build_unionized_index, pincell_library, Accel, XsTables, E_MAX, E_MIN};

pub fn run_example() -> eventmc::Result<Vec<(Accel, f64)>> {
    let lib = pincell_library(251, 200, 4, 251, 1)?;
    let index = build_unionized_index(&lib);
    println!(
        "union grid {} points, index {:.1} MiB",
        index.union_grid.len(),
        index.memory_bytes() as f64 / (1024.0 * 1024.0)
    );

    let mut rng = RngState::new(2024);
    let queries: Vec<(u32, f64)> = (0..20_000)
        .map(|_| {
            let m = (rng.next_uniform() * lib.materials.len() as f64) as u32;
            let e = E_MIN * (E_MAX / E_MIN).powf(rng.next_uniform());
            (m, e)
        })
        .collect();

    let mut reference = Vec::new();
    let mut rows = Vec::new();
    for accel in Accel::ALL {
        let tables = XsTables::new(&lib, accel, Some(&index))?;
        let t = Instant::now();
        let totals = queries
            .iter()
            .map(|&(m, e)| tables.macro_xs(m, e, None).map(|x| x.total.to_bits()))
            .collect::<eventmc::Result<Vec<_>>>()?;
        let secs = t.elapsed().as_secs_f64();
        if reference.is_empty() {
            reference = totals;
        } else {
            assert_eq!(reference, totals, "{accel} disagrees with binary search");
        }
        println!("{accel:>12}: {:.0} lookups/s", queries.len() as f64 / secs);
        rows.push((accel, secs));
    }
    Ok(rows)
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
