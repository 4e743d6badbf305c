//! Synthetic pointwise cross-section library and lookup kernels.

mod io;
mod library;
mod lookup;
mod nuclide;
mod union;

pub(crate) use io::hex_digest;
pub use io::{
    decode_library, encode_library, library_fingerprint, read_library, write_library, MAGIC,
    VERSION,
};
pub use library::{
    generate_synthetic_library, pincell_library, Library, Material, FISSIONABLE_FRACTION,
    FISSION_FLOOR, SYNTHETIC_NU,
};
pub use lookup::{macro_lookup, Accel, MacroXS, NuclidePartial, XsTables};
pub use nuclide::{evaluate_interval, micro_lookup, MicroXS, NuclideXS, E_MAX, E_MIN};
pub use union::{build_unionized_index, IntervalRecord, UnionizedIndex};
