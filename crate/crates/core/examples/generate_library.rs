//! Generate a synthetic library, write it in the binary format, read it
//! back and confirm the round trip through the content fingerprint.

use eventmc::xslib::{
    generate_synthetic_library, library_fingerprint, read_library, write_library,
};

pub fn run_example() -> eventmc::Result<String> {
    let lib = generate_synthetic_library(40, 64, 3, 12, 7)?;
    let path = std::env::temp_dir().join(format!("eventmc-example-{}.mcxs", std::process::id()));
    write_library(&lib, &path)?;
    let back = read_library(&path)?;
    std::fs::remove_file(&path)?;

    let fissionable = lib.nuclides.iter().filter(|n| n.is_fissionable()).count();
    let before = library_fingerprint(&lib);
    let after = library_fingerprint(&back);
    assert_eq!(before, after);
    Ok(format!(
        "{} nuclides ({fissionable} fissionable), {} materials, fingerprint {before}",
        lib.nuclides.len(),
        lib.materials.len()
    ))
}

fn main() {
    match run_example() {
        Ok(line) => println!("{line}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
