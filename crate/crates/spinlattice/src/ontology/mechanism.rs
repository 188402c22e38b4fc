//! The deterministic map between selected and exact orientations.
//!
//! An apparatus dialed to `final_selected` while the hidden state pins its
//! rest orientation to `initial_exact` does not measure along the dialed
//! axis: the exact setting is the dialed axis carried along by the minimal
//! rotation that takes the selected rest orientation onto the exact one.

use crate::geometry::{rotation_between, tangent_frame, Rotation, UnitVector};
use crate::{Error, Result};

/// Exact setting realized by an apparatus.
///
/// `initial_exact` is the exact rest orientation P̂, `initial_selected` the
/// selected one p̂, `final_selected` the dialed setting â. The exact setting
/// is R(p̂→P̂)·â where R is the minimal rotation taking p̂ to P̂.
///
/// Because the rotation is minimal, the displacement contracts: the exact
/// setting lies at most as far from the dialed one as P̂ lies from p̂, so a
/// resolution bound on rest orientations transfers to settings for free.
pub fn mechanism(
    initial_exact: &UnitVector,
    initial_selected: &UnitVector,
    final_selected: &UnitVector,
) -> Result<UnitVector> {
    let r = rotation_between(initial_selected, initial_exact)?;
    Ok(r.apply(final_selected))
}

/// Inverse problem: which exact rest orientation M̂ makes the apparatus,
/// selected at rest orientation m̂ and dialed to b̂, realize the exact
/// setting B̂?
///
/// The defining equation is R(m̂→M̂)·b̂ = B̂ with R minimal, i.e. R's axis
/// orthogonal to m̂. An axis u that moves b̂ to B̂ must also satisfy
/// u·b̂ = u·B̂, so u ⊥ (B̂−b̂); together with u ⊥ m̂ that fixes
/// u ∝ m̂×(B̂−b̂) up to sign, the rotation angle is then read off from the
/// components of b̂ and B̂ orthogonal to u, and M̂ is the image of m̂.
///
/// The solution is unique whenever m̂ is not parallel to B̂−b̂; in the
/// parallel case a one-parameter family exists and a fixed representative
/// (axis taken from m̂'s tangent frame) is returned so the map stays
/// deterministic. B̂ = b̂ gives M̂ = m̂.
pub fn mechanism_inverse(
    final_exact: &UnitVector,
    initial_selected: &UnitVector,
    final_selected: &UnitVector,
) -> Result<UnitVector> {
    let diff = [
        final_exact.x() - final_selected.x(),
        final_exact.y() - final_selected.y(),
        final_exact.z() - final_selected.z(),
    ];
    let diff_norm = (diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2]).sqrt();
    if diff_norm < 1e-14 {
        return Ok(*initial_selected);
    }

    let m = initial_selected;
    let axis_raw = [
        m.y() * diff[2] - m.z() * diff[1],
        m.z() * diff[0] - m.x() * diff[2],
        m.x() * diff[1] - m.y() * diff[0],
    ];
    let axis_norm =
        (axis_raw[0] * axis_raw[0] + axis_raw[1] * axis_raw[1] + axis_raw[2] * axis_raw[2]).sqrt();

    let axis = if axis_norm < 1e-12 * diff_norm {
        // m̂ ∥ (B̂−b̂): every axis orthogonal to m̂ keeps u·b̂ = u·B̂.
        // Pick a fixed one so repeated calls agree.
        tangent_frame(m).0
    } else {
        UnitVector::new(
            axis_raw[0] / axis_norm,
            axis_raw[1] / axis_norm,
            axis_raw[2] / axis_norm,
        )?
    };

    let rot = rotation_taking_about_axis(&axis, final_selected, final_exact)?;
    Ok(rot.apply(initial_selected))
}

/// Rotation about `axis` carrying `from` onto `to`; both must have the same
/// component along the axis (the caller's axis construction guarantees it).
fn rotation_taking_about_axis(
    axis: &UnitVector,
    from: &UnitVector,
    to: &UnitVector,
) -> Result<Rotation> {
    let project = |v: &UnitVector| {
        let along = axis.dot(v);
        [
            v.x() - along * axis.x(),
            v.y() - along * axis.y(),
            v.z() - along * axis.z(),
        ]
    };
    let f = project(from);
    let t = project(to);
    let fn2 = f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
    let tn2 = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];
    if fn2 < 1e-24 || tn2 < 1e-24 {
        return Err(Error::Degenerate(
            "setting is parallel to the rotation axis; the exact rest orientation is not determined"
                .into(),
        ));
    }
    let cross = [
        f[1] * t[2] - f[2] * t[1],
        f[2] * t[0] - f[0] * t[2],
        f[0] * t[1] - f[1] * t[0],
    ];
    let sin_beta = (axis.x() * cross[0] + axis.y() * cross[1] + axis.z() * cross[2])
        / (fn2.sqrt() * tn2.sqrt());
    let cos_beta = (f[0] * t[0] + f[1] * t[1] + f[2] * t[2]) / (fn2.sqrt() * tn2.sqrt());
    let beta = sin_beta.atan2(cos_beta);
    Ok(Rotation::from_axis_angle(axis, beta))
}
