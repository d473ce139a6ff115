//! Axis-aligned boxes over the global variables and the corner selections
//! used by the bounding step.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Box `[lower, upper]` over the global variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, Error> {
        if lower.len() != upper.len() {
            return Err(Error::Dimension {
                what: "box bounds",
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::Validation("box has lower > upper".into()));
        }
        Ok(BoxRegion { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn width(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(xi, (l, u))| *xi >= l - tol && *xi <= u + tol)
    }

    /// True if every dimension has zero width (includes the 0-dimensional box).
    pub fn is_point(&self) -> bool {
        (0..self.dim()).all(|j| self.width(j) == 0.0)
    }

    /// Bisects via the adaptive rule: split index `j = argmax_j |y_j - x_j|`
    /// (ties to the lowest index) at `v = (x + y) / 2`. When the witnesses
    /// coincide, falls back to the widest dimension split at the midpoint.
    /// Zero-width dimensions are never selected.
    pub fn bisect(&self, x: &[f64], y: &[f64]) -> Result<(BoxRegion, BoxRegion), Error> {
        let n = self.dim();
        let mut j_best = None;
        let mut gap_best = 0.0;
        for j in 0..n {
            let gap = (y[j] - x[j]).abs();
            if gap > gap_best && self.width(j) > 0.0 {
                gap_best = gap;
                j_best = Some(j);
            }
        }
        let (j, v) = match j_best {
            Some(j) => (j, 0.5 * (x[j] + y[j])),
            None => {
                // Degenerate witnesses: widest dimension, midpoint.
                let mut j_wide = None;
                let mut w_best = 0.0;
                for j in 0..n {
                    let w = self.width(j);
                    if w > w_best {
                        w_best = w;
                        j_wide = Some(j);
                    }
                }
                let j = j_wide.ok_or(Error::ZeroVolumeBox)?;
                (j, 0.5 * (self.lower[j] + self.upper[j]))
            }
        };
        let v = v.clamp(self.lower[j], self.upper[j]);
        let mut left = self.clone();
        let mut right = self.clone();
        left.upper[j] = v;
        right.lower[j] = v;
        Ok((left, right))
    }
}

/// Corner of `boxr` that simultaneously maximizes a family of functions that
/// are jointly mixed monotonic with signature `s`: coordinate `j` goes to the
/// upper bound when `s[j] = +1` (all functions increasing in `j`) and to the
/// lower bound otherwise.
pub fn common_maximizer(signature: &[i8], boxr: &BoxRegion) -> Vec<f64> {
    signature
        .iter()
        .enumerate()
        .map(|(j, &s)| if s >= 0 { boxr.upper[j] } else { boxr.lower[j] })
        .collect()
}

/// Mirror of [`common_maximizer`]: the corner minimizing the family.
pub fn common_minimizer(signature: &[i8], boxr: &BoxRegion) -> Vec<f64> {
    signature
        .iter()
        .enumerate()
        .map(|(j, &s)| if s >= 0 { boxr.lower[j] } else { boxr.upper[j] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxr(lower: &[f64], upper: &[f64]) -> BoxRegion {
        BoxRegion::new(lower.to_vec(), upper.to_vec()).unwrap()
    }

    #[test]
    fn maximizer_corners() {
        let b = boxr(&[0.2, 0.4], &[0.9, 1.5]);
        assert_eq!(common_maximizer(&[-1, -1], &b), vec![0.2, 0.4]);
        let b = boxr(&[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(common_maximizer(&[1, 1], &b), vec![1.0, 1.0]);
        let b = boxr(&[0.0, 2.0], &[1.0, 3.0]);
        assert_eq!(common_maximizer(&[1, -1], &b), vec![1.0, 2.0]);
    }

    #[test]
    fn minimizer_corners() {
        let b = boxr(&[0.0, 0.0], &[1.0, 2.0]);
        assert_eq!(common_minimizer(&[1, 1], &b), vec![0.0, 0.0]);
        assert_eq!(common_minimizer(&[-1, -1], &b), vec![1.0, 2.0]);
        let b = boxr(&[0.5, 0.5], &[0.5, 0.5]);
        assert_eq!(common_minimizer(&[1, -1], &b), vec![0.5, 0.5]);
    }

    #[test]
    fn bisect_symmetric_tie_breaks_to_first_index() {
        let b = boxr(&[0.0, 0.0], &[1.0, 1.0]);
        let (l, r) = b.bisect(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(l, boxr(&[0.0, 0.0], &[0.5, 1.0]));
        assert_eq!(r, boxr(&[0.5, 0.0], &[1.0, 1.0]));
    }

    #[test]
    fn bisect_single_differing_coordinate() {
        let b = boxr(&[0.0, 0.0], &[1.0, 1.0]);
        let (l, r) = b.bisect(&[0.2, 0.1], &[0.2, 0.9]).unwrap();
        assert_eq!(l, boxr(&[0.0, 0.0], &[1.0, 0.5]));
        assert_eq!(r, boxr(&[0.0, 0.5], &[1.0, 1.0]));
    }

    #[test]
    fn bisect_degenerate_witness_splits_widest() {
        let b = boxr(&[0.0, 0.0], &[1.0, 4.0]);
        let (l, r) = b.bisect(&[0.5, 2.0], &[0.5, 2.0]).unwrap();
        assert_eq!(l, boxr(&[0.0, 0.0], &[1.0, 2.0]));
        assert_eq!(r, boxr(&[0.0, 2.0], &[1.0, 4.0]));
    }

    #[test]
    fn bisect_zero_volume_fails() {
        let b = boxr(&[1.0, 2.0], &[1.0, 2.0]);
        assert!(matches!(b.bisect(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::ZeroVolumeBox)));
    }

    #[test]
    fn bisect_never_selects_zero_width_dimension() {
        let b = boxr(&[0.0, 1.0], &[2.0, 1.0]);
        // Witnesses differ only in the zero-width dimension (impossible for
        // in-box witnesses, but the guard must still hold for equal coords).
        let (l, r) = b.bisect(&[0.5, 1.0], &[0.5, 1.0]).unwrap();
        assert_eq!(l.upper[0], 1.0);
        assert_eq!(r.lower[0], 1.0);
    }
}
