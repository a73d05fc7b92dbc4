//! Random walks: the step-`r1` walk, Brownian motion, and their versions on
//! the covers `X_q`.

mod brownian;
mod checks;
mod discrete;
mod quotient;

pub use brownian::{brownian_distances, brownian_jump, sde_path};
pub use checks::{
    clt_check, clt_from_stats, tail_checks, tails_from_stats, CltReport, TailChecks, TailFamily, TailReport,
    DEFAULT_LAMBDAS, MIN_CLT_STEPS, MIN_CLT_WALKERS, MIN_TAIL_STEP,
};
pub use discrete::{
    step_discrete, walk_discrete, walk_discrete_with_trajectories, write_trajectories, Moments, StepSummary,
    WalkConfig, WalkStats,
};
pub use quotient::{quotient_brownian, quotient_step, sheet_profile, SheetState};
