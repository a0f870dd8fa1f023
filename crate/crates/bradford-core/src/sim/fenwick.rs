//! Binary indexed tree over journal weights: O(log n) append, point
//! update, prefix sum, and proportional selection.

#[derive(Debug, Clone, Default)]
pub(crate) struct WeightTree {
    /// 1-indexed Fenwick array; entry i covers the leaf range
    /// (i - lowbit(i), i].
    tree: Vec<f64>,
}

impl WeightTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a leaf, absorbing the sums of the leaves its node covers.
    pub fn push(&mut self, weight: f64) {
        let i = self.tree.len() + 1;
        let covered_from = i - (i & i.wrapping_neg());
        let below = self.prefix(i - 1) - self.prefix(covered_from);
        self.tree.push(weight + below);
    }

    /// Adds `delta` to leaf `idx` (0-based).
    pub fn add(&mut self, idx: usize, delta: f64) {
        let mut i = idx + 1;
        while i <= self.tree.len() {
            self.tree[i - 1] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of the first `count` leaves.
    pub fn prefix(&self, count: usize) -> f64 {
        let mut acc = 0.0;
        let mut i = count;
        while i > 0 {
            acc += self.tree[i - 1];
            i -= i & i.wrapping_neg();
        }
        acc
    }

    pub fn total(&self) -> f64 {
        self.prefix(self.tree.len())
    }

    /// Index of the leaf whose half-open weight interval contains
    /// `target`: the smallest idx with prefix(idx + 1) > target.
    /// Zero-weight leaves own empty intervals and are never selected.
    /// Rounding can push `target` to or past the total; the result is
    /// clamped to the last leaf.
    pub fn select(&self, mut target: f64) -> usize {
        let n = self.tree.len();
        debug_assert!(n > 0, "selection from an empty tree");
        let mut pos = 0usize;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next - 1] <= target {
                target -= self.tree[next - 1];
                pos = next;
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }

    /// Multiplies every stored weight by `factor`. Exact when `factor` is
    /// a power of two.
    pub fn scale_all(&mut self, factor: f64) {
        for v in &mut self.tree {
            *v *= factor;
        }
    }
}
