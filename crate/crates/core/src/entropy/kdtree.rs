//! Static kd-tree over scalar points.
//!
//! In one dimension every node splits on the same axis, which makes this a
//! balanced binary search tree laid out implicitly: the node for index range
//! `[lo, hi)` sits at `mid = (lo + hi) / 2` of a buffer reordered by median
//! selection.

#[derive(Debug, Clone)]
pub struct KdTree {
    /// (value, original index), arranged as the implicit tree.
    nodes: Vec<(f64, usize)>,
}

impl KdTree {
    pub fn build(points: &[f64]) -> Self {
        let mut nodes: Vec<(f64, usize)> = points.iter().copied().zip(0..).collect();
        arrange(&mut nodes);
        KdTree { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The `k` nearest neighbors of `query`, skipping the point stored under
    /// `exclude`, as ascending distances.
    pub fn nearest(&self, query: f64, k: usize, exclude: Option<usize>) -> Vec<f64> {
        let mut best = Best::new(k);
        self.search(0, self.nodes.len(), query, exclude, &mut best);
        best.dist
    }

    fn search(&self, lo: usize, hi: usize, query: f64, exclude: Option<usize>, best: &mut Best) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let (split, idx) = self.nodes[mid];
        if Some(idx) != exclude {
            best.offer((query - split).abs());
        }
        let diff = query - split;
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(near.0, near.1, query, exclude, best);
        if diff.abs() <= best.worst() {
            self.search(far.0, far.1, query, exclude, best);
        }
    }
}

fn arrange(nodes: &mut [(f64, usize)]) {
    if nodes.len() <= 1 {
        return;
    }
    let mid = nodes.len() / 2;
    nodes.select_nth_unstable_by(mid, |a, b| a.0.total_cmp(&b.0));
    let (left, rest) = nodes.split_at_mut(mid);
    arrange(left);
    arrange(&mut rest[1..]);
}

/// Bounded ascending list of the best distances seen so far.
pub(crate) struct Best {
    k: usize,
    pub(crate) dist: Vec<f64>,
}

impl Best {
    pub(crate) fn new(k: usize) -> Self {
        Best {
            k,
            dist: Vec::with_capacity(k + 1),
        }
    }

    #[inline]
    pub(crate) fn worst(&self) -> f64 {
        if self.dist.len() < self.k {
            f64::INFINITY
        } else {
            self.dist[self.k - 1]
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, d: f64) {
        if d >= self.worst() {
            return;
        }
        let pos = self.dist.partition_point(|&x| x <= d);
        self.dist.insert(pos, d);
        self.dist.truncate(self.k);
    }
}
