//! Reduction into the standard fundamental domain of PSL2(Z).

use crate::error::{Error, Result};
use crate::geometry::PointH;

use super::group::GroupElement;

pub const MAX_REDUCTION_STEPS: usize = 1_000_000;

const BOUNDARY_TOL: f64 = 1e-12;

/// Is `z` in `{|x| ≤ ½, |z| ≥ 1}` up to `1e-12`?
pub fn in_fundamental_domain(z: &PointH) -> bool {
    z.x().abs() <= 0.5 + BOUNDARY_TOL && z.x() * z.x() + z.y() * z.y() >= 1.0 - BOUNDARY_TOL
}

/// Moves `z` into the fundamental domain.
///
/// Returns the reduced point together with `γ` such that `γ z = z'`. The
/// point is updated by the individual steps (translation, then `-1/z`), not
/// by applying the accumulated matrix, so precision does not degrade with
/// the size of `γ`.
pub fn reduce_fundamental(z: &PointH) -> Result<(PointH, GroupElement)> {
    let (w, gamma) = reduce_with(z, true)?;
    Ok((w, gamma.expect("tracked")))
}

/// Like [`reduce_fundamental`] without building the group element.
pub fn reduce_point(z: &PointH) -> Result<PointH> {
    Ok(reduce_with(z, false)?.0)
}

fn reduce_with(z: &PointH, track: bool) -> Result<(PointH, Option<GroupElement>)> {
    let (mut x, mut y) = (z.x(), z.y());
    let mut gamma = GroupElement::IDENTITY;
    for _ in 0..MAX_REDUCTION_STEPS {
        let n = x.round();
        if n != 0.0 {
            x -= n;
            if track {
                gamma = GroupElement::translation(-(n as i64)).mul(&gamma)?;
            }
        }
        let r2 = x * x + y * y;
        if r2 >= 1.0 - BOUNDARY_TOL {
            if !(y > 0.0) || !y.is_finite() {
                return Err(Error::NumericRange(format!("reduction left the half-plane at {z}")));
            }
            return Ok((PointH::new_unchecked(x, y), track.then_some(gamma)));
        }
        x = -x / r2;
        y /= r2;
        if track {
            gamma = GroupElement::S.mul(&gamma)?;
        }
    }
    Err(Error::Degenerate(MAX_REDUCTION_STEPS))
}
