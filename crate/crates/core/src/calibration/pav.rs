use crate::error::{Error, Result};

/// A maximal run of consecutive inputs sharing one fitted value.
/// `start..end` indexes the input targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PavBlock {
    pub value: f64,
    pub weight: f64,
    pub start: usize,
    pub end: usize,
}

impl PavBlock {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Pool {
    pub sum_w: f64,
    pub sum_wy: f64,
    pub start: usize,
    pub end: usize,
}

impl Pool {
    pub fn value(&self) -> f64 {
        self.sum_wy / self.sum_w
    }

    // mean(self) >= mean(next), compared without dividing
    fn violates(&self, next: &Pool) -> bool {
        self.sum_wy * next.sum_w >= next.sum_wy * self.sum_w
    }
}

/// Pools adjacent `(weight, weight * target)` pairs until block means are
/// strictly increasing. Single left-to-right pass with a stack, O(n).
pub(crate) fn pool_adjacent(items: impl IntoIterator<Item = (f64, f64)>) -> Vec<Pool> {
    let mut stack: Vec<Pool> = Vec::new();
    for (i, (w, wy)) in items.into_iter().enumerate() {
        stack.push(Pool {
            sum_w: w,
            sum_wy: wy,
            start: i,
            end: i + 1,
        });
        while stack.len() >= 2 && stack[stack.len() - 2].violates(&stack[stack.len() - 1]) {
            let top = stack.pop().expect("len >= 2");
            let prev = stack.last_mut().expect("len >= 1");
            prev.sum_w += top.sum_w;
            prev.sum_wy += top.sum_wy;
            prev.end = top.end;
        }
    }
    stack
}

/// Weighted isotonic regression of `targets`, which must already be ordered
/// by ascending input score.
///
/// Returns the maximal blocks of the least-squares non-decreasing fit: each
/// block value is the weighted mean of its targets, and values strictly
/// increase from block to block. Unit weights are used when `weights` is
/// `None`.
pub fn fit_pav(targets: &[f64], weights: Option<&[f64]>) -> Result<Vec<PavBlock>> {
    if targets.is_empty() {
        return Err(Error::Empty("isotonic regression targets"));
    }
    if let Some(t) = targets.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite target {t}")));
    }
    if let Some(w) = weights {
        if w.len() != targets.len() {
            return Err(Error::LengthMismatch {
                left: targets.len(),
                right: w.len(),
            });
        }
        if let Some(bad) = w.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!("weights must be positive, got {bad}")));
        }
    }
    let weight = |i: usize| weights.map_or(1.0, |w| w[i]);
    let pools = pool_adjacent(targets.iter().enumerate().map(|(i, &y)| (weight(i), weight(i) * y)));
    Ok(pools
        .into_iter()
        .map(|p| PavBlock {
            value: p.value(),
            weight: p.sum_w,
            start: p.start,
            end: p.end,
        })
        .collect())
}

/// Per-input fitted values from PAV blocks.
pub fn expand_blocks(blocks: &[PavBlock]) -> Vec<f64> {
    blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.value, b.len()))
        .collect()
}
