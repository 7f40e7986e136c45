//! Tetrahedral flows, perfect matching covers and circular flows.
//!
//! A tetrahedral flow (T-flow) labels every edge by a point of a fixed
//! tetrahedron `T` so that the three labels at each vertex form a line of
//! `T`. Over the weight-3 tetrahedron `T1` these are exactly the covers by
//! four perfect matchings: coordinate `i` of a label is zero iff the edge
//! lies in the `i`-th matching.

mod circular;
mod covers;
mod tflow;

pub use circular::{circular_flow_ladder, cut_sizes, has_cnzf, CfnLadder, CfnStep, DEFAULT_CNZF_BUDGET};
pub use covers::{
    cover_from_t0_flow, cover_from_tflow, cover_with_k_matchings, is_3_edge_colourable, perfect_matching_index,
    perfect_matchings, tflow_from_cover, three_edge_colouring, PMCover, PmiOptions, PmiResult, PmiValue,
    PmiWitness,
};
pub use tflow::{count_tflows, enumerate_tflows, find_tflow, for_each_tflow, sample_tflow, FlowInput, TFlow};
