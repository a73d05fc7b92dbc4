//! Desk-scale mixing experiments on the covers `X_q`.

mod concentration;
mod cutoff;
mod distances;
mod isoperimetry;
mod partition;
mod tv;

pub use concentration::{concentration_fit, ConcentrationReport};
pub use cutoff::{cutoff_locator, mixing_time, CutoffReport, EPS_GRID};
pub use distances::{
    covering_radius, distance_histogram, histogram_geometry, DistanceHistogram, GammaRow, VolumeRow, SAMPLE_Y_CAP,
};
pub use isoperimetry::{
    dilation_bound, iso_geometry, isoperimetric_check, kappa, IsoReport, Region, Verdict, MC_Y_CAP,
};
pub use partition::{Cell, CellPartition};
pub use tv::{tv_profile, TvConfig, TvPoint, TvProfile, BOOTSTRAP_RESAMPLES, DEFAULT_START};
