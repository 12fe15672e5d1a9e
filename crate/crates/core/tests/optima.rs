use labs_core::brute::brute_force_optimum;
use labs_core::optima::{KnownOptimaTable, Provenance};

// External entries within enumeration reach are checked too, so the table is
// validated past the range it labels as brute forced.
#[test]
fn external_entries_within_reach_match_enumeration() {
    let table = KnownOptimaTable::bundled();
    for n in 21..=24 {
        let entry = table.get(n).unwrap();
        assert_eq!(entry.provenance, Provenance::External);
        assert_eq!(brute_force_optimum(n).unwrap().optimal_energy, entry.energy, "N = {n}");
    }
}
