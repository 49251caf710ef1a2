use alloc::vec::Vec;
use core::cmp::Ordering;


use super::ControlError;
use crate::math::Vec2;

/// Where to head, in the robot frame.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirectionCommand {
    pub b: Vec2,
    /// `atan2(b.y, b.x)` in `[-PI, PI]`.
    pub theta: f64,
    /// `(slice index, weight)`, strongest first.
    pub contributors: Vec<(usize, f64)>,
}

/// Slice indices ordered by descending `e`, lower index first on ties.
pub fn ranked_slices(e: &[f64]) -> Result<Vec<usize>, ControlError> {
    if let Some(i) = e.iter().position(|x| !x.is_finite()) {
        return Err(ControlError::NonFinite(i));
    }
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&i, &j| e[j].partial_cmp(&e[i]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    Ok(order)
}

/// Blend the directions of the `n_extract` best slices with weights
/// `n_extract, n_extract - 1, ..., 1`.
///
/// When the blend cancels out (`|b| < 1e-6`) the heading of the previous
/// command is kept.
pub fn select_direction(
    e: &[f64],
    directions: &[Vec2],
    n_extract: usize,
    previous_theta: f64,
) -> Result<DirectionCommand, ControlError> {
    if e.len() != directions.len() {
        return Err(ControlError::LengthMismatch(e.len(), directions.len()));
    }
    if n_extract == 0 || n_extract > e.len() {
        return Err(ControlError::ExtractOutOfRange {
            n_extract,
            n_split: e.len(),
        });
    }
    let ranked = ranked_slices(e)?;
    let contributors: Vec<(usize, f64)> = ranked
        .iter()
        .take(n_extract)
        .enumerate()
        .map(|(j, &i)| (i, (n_extract - j) as f64))
        .collect();
    let total: f64 = contributors.iter().map(|(_, w)| w).sum();
    let mut b = Vec2::ZERO;
    for &(i, w) in &contributors {
        b += directions[i] * w;
    }
    let b = b * (1.0 / total);
    let theta = if b.norm() < 1e-6 { previous_theta } else { b.angle() };
    Ok(DirectionCommand { b, theta, contributors })
}
