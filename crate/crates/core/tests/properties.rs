//! Randomised checks of structural invariants on random cubic graphs.

mod common;

use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn semiedge_parity(seed in any::<u64>(), half in 4usize..9, len in 1usize..4, flow_seed in any::<u64>()) {
        common::semiedge_parity(seed, half, len, flow_seed)?;
    }

    #[test]
    fn bipartite_balance(seed in any::<u64>(), m in 3usize..8, flow_seed in any::<u64>()) {
        common::bipartite_balance(seed, m, flow_seed)?;
    }

    #[test]
    fn bipartite_blocks_stay_in_b(seed in any::<u64>(), m in 3usize..7) {
        common::bipartite_block_in_b(seed, m)?;
    }

    #[test]
    fn trace_is_preserved(seed in any::<u64>(), half in 3usize..7) {
        common::trace_preserved(seed, half)?;
    }

    #[test]
    fn transitions_are_admissible(seed in any::<u64>(), half in 3usize..7) {
        common::admissible(seed, half)?;
    }

    #[test]
    fn collineations_carry_flows(seed in any::<u64>(), half in 3usize..9, flow_seed in any::<u64>()) {
        common::equivariance(seed, half, flow_seed)?;
    }
}
