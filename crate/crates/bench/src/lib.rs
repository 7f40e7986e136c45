//! Fixtures shared by the benchmarks.

use snarkforge_core::families::{first_path, windmill, FamilyMember, HalinFragment};
use snarkforge_core::multipole::heawood;
use snarkforge_core::Multipole;

pub fn w34() -> FamilyMember {
    let ps = HalinFragment::petersen();
    windmill(&ps, &ps, &ps).expect("W34 builds")
}

/// Heawood graph minus a three-vertex path.
pub fn heawood_block() -> Multipole {
    let g = heawood();
    Multipole::remove_path(&g, &first_path(&g)).expect("path exists")
}
