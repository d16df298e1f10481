//! Exact pair counts over annuli and slabs, and related pair statistics.

mod annulus;
mod report;
mod slab;
mod stats;

pub use annulus::{
    count_annulus_pairs, count_annulus_pairs_checkpoints, count_annulus_pairs_grid,
    count_annulus_pairs_grid_checkpoints, exact_distance_count, DEFAULT_ETA,
};
pub use report::{
    annulus_reports, slab_reports, write_reports_csv, IncidenceReport, MainTermSampling,
};
pub use slab::{
    count_slab_pairs, count_slab_pairs_checkpoints, slab_main_term, MainTermEstimate,
    MIN_MAIN_TERM_SAMPLES,
};
pub use stats::{difference_set_count, discrete_energy, support_count, Energy, DEFAULT_QUANTUM};
