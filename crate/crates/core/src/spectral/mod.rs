//! Spherical functions, operator-norm bounds and radial laws.

pub mod bounds;
pub mod clt;
pub mod heat;
pub mod helgason;
pub mod mixture;
pub mod spherical;

pub use bounds::{decay_exponent_check, hc_bound, lambda_from_p, p_from_lambda, technical_s_decay, LowerEnvelope};
pub use clt::{clt_constants, CltConstants};
pub use heat::{heat_radial_density, HeatLaw};
pub use helgason::{helgason_function, helgason_measure, plancherel_check};
pub use mixture::{convolve_radial, radial_mixture, two_step_cdf};
pub use spherical::{spherical_complementary, spherical_principal, SphericalParam};
