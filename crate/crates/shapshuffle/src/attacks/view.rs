//! Superiority-sorted view of a scored batch.

use crate::model::Direction;

/// A batch's scores arranged from most to least superior.
///
/// `ids[k]` is the original row index holding the `k`-th best score,
/// `privileged[k]` its group flag, `scores[k]` its original score. The sort
/// is stable, so ties keep their original row order.
#[derive(Debug, Clone)]
pub struct SortedView {
    pub ids: Vec<usize>,
    pub privileged: Vec<bool>,
    pub scores: Vec<f64>,
    pub direction: Direction,
}

impl SortedView {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Sub-view over sorted positions `range` (still sorted, same direction).
    pub fn slice(&self, range: std::ops::Range<usize>) -> SortedView {
        SortedView {
            ids: self.ids[range.clone()].to_vec(),
            privileged: self.privileged[range.clone()].to_vec(),
            scores: self.scores[range].to_vec(),
            direction: self.direction,
        }
    }
}

/// Sort a batch's scores by superiority, carrying group flags along.
///
/// `scores` and `privileged` are indexed by original row; the result orders
/// rows best-first according to `direction`.
pub fn prepare_sorted_view(scores: &[f64], privileged: &[bool], direction: Direction) -> SortedView {
    assert_eq!(
        scores.len(),
        privileged.len(),
        "scores and group flags must align"
    );
    let mut ids: Vec<usize> = (0..scores.len()).collect();
    ids.sort_by(|&a, &b| {
        let ord = scores[a]
            .partial_cmp(&scores[b])
            .unwrap_or(std::cmp::Ordering::Equal);
        match direction {
            Direction::HigherIsSuperior => ord.reverse(),
            Direction::LowerIsSuperior => ord,
        }
    });
    SortedView {
        privileged: ids.iter().map(|&i| privileged[i]).collect(),
        scores: ids.iter().map(|&i| scores[i]).collect(),
        ids,
        direction,
    }
}
