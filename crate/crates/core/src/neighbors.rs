//! Exact k-th nearest-neighbor distances.
//!
//! One-dimensional samples use a sorted sweep; higher dimensions use a
//! median-split kd-tree. Both exclude the query point itself and break
//! distance ties in favor of the lower sample index.

use rayon::prelude::*;

use crate::sample::{Metric, SampleMatrix};

const LEAF_SIZE: usize = 12;
const PARALLEL_MIN_POINTS: usize = 2048;

/// Distance from every sample to its `k`-th nearest other sample.
///
/// Panics if `k == 0` or `k >= n`; callers validate sizes first.
pub fn kth_neighbor_distances(samples: &SampleMatrix, k: usize, metric: Metric) -> Vec<f64> {
    assert!(k >= 1 && k < samples.n(), "k must satisfy 1 <= k < n");
    if samples.d() == 1 {
        kth_distances_1d(samples.as_slice(), k)
    } else {
        let tree = KdTree::build(samples.as_slice(), samples.d());
        let query = |i: usize| tree.kth_distance(i, k, metric);
        if samples.n() >= PARALLEL_MIN_POINTS {
            (0..samples.n()).into_par_iter().map(query).collect()
        } else {
            (0..samples.n()).map(query).collect()
        }
    }
}

fn kth_distances_1d(values: &[f64], k: usize) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();

    let mut out = vec![0.0; n];
    for (pos, &orig) in order.iter().enumerate() {
        let v = sorted[pos];
        let (mut lo, mut hi) = (pos, pos + 1);
        let mut dist = 0.0;
        for _ in 0..k {
            let left = (lo > 0).then(|| (v - sorted[lo - 1], order[lo - 1]));
            let right = (hi < n).then(|| (sorted[hi] - v, order[hi]));
            let take_left = match (left, right) {
                (Some(l), Some(r)) => l.0 < r.0 || (l.0 == r.0 && l.1 < r.1),
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                dist = left.unwrap().0;
                lo -= 1;
            } else {
                dist = right.unwrap().0;
                hi += 1;
            }
        }
        out[orig] = dist;
    }
    out
}

enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Static kd-tree over a row-major point buffer.
pub struct KdTree<'a> {
    points: &'a [f64],
    d: usize,
    index: Vec<usize>,
    nodes: Vec<Node>,
}

impl<'a> KdTree<'a> {
    pub fn build(points: &'a [f64], d: usize) -> Self {
        let n = points.len() / d;
        let mut tree = KdTree {
            points,
            d,
            index: (0..n).collect(),
            nodes: Vec::new(),
        };
        if n > 0 {
            tree.build_node(0, n);
        }
        tree
    }

    fn coord(&self, i: usize, dim: usize) -> f64 {
        self.points[i * self.d + dim]
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        // split on the widest dimension
        let mut best = (0, f64::NEG_INFINITY);
        for dim in 0..self.d {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in &self.index[start..end] {
                let c = self.coord(i, dim);
                lo = lo.min(c);
                hi = hi.max(c);
            }
            if hi - lo > best.1 {
                best = (dim, hi - lo);
            }
        }
        let dim = best.0;
        let mid = start + (end - start) / 2;
        let (points, d) = (self.points, self.d);
        self.index[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points[a * d + dim].total_cmp(&points[b * d + dim])
        });
        let value = self.coord(self.index[mid], dim);
        self.nodes.push(Node::Leaf { start: 0, end: 0 }); // placeholder
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split {
            dim,
            value,
            left,
            right,
        };
        id
    }

    /// Distance from point `i` to its `k`-th nearest neighbor (excluding itself).
    pub fn kth_distance(&self, i: usize, k: usize, metric: Metric) -> f64 {
        let query = &self.points[i * self.d..(i + 1) * self.d];
        let mut best = Best::new(k);
        self.search(0, query, i, metric, &mut best);
        let reduced = best.worst();
        match metric {
            Metric::Chebyshev => reduced,
            Metric::Euclidean => reduced.sqrt(),
        }
    }

    fn search(&self, node: usize, q: &[f64], skip: usize, metric: Metric, best: &mut Best) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &j in &self.index[start..end] {
                    if j == skip {
                        continue;
                    }
                    let p = &self.points[j * self.d..(j + 1) * self.d];
                    best.offer(reduced_distance(q, p, metric), j);
                }
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = q[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, skip, metric, best);
                let bound = match metric {
                    Metric::Chebyshev => diff.abs(),
                    Metric::Euclidean => diff * diff,
                };
                if !best.is_full() || bound <= best.worst() {
                    self.search(far, q, skip, metric, best);
                }
            }
        }
    }
}

/// Chebyshev distance, or squared Euclidean distance.
fn reduced_distance(a: &[f64], b: &[f64], metric: Metric) -> f64 {
    match metric {
        Metric::Chebyshev => a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs())),
        Metric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
    }
}

/// The `k` best candidates, sorted ascending by (distance, index).
struct Best {
    k: usize,
    items: Vec<(f64, usize)>,
}

impl Best {
    fn new(k: usize) -> Self {
        Self {
            k,
            items: Vec::with_capacity(k + 1),
        }
    }

    fn is_full(&self) -> bool {
        self.items.len() == self.k
    }

    fn worst(&self) -> f64 {
        self.items.last().map_or(f64::INFINITY, |e| e.0)
    }

    fn offer(&mut self, dist: f64, idx: usize) {
        if self.is_full() {
            let last = self.items[self.k - 1];
            if dist > last.0 || (dist == last.0 && idx > last.1) {
                return;
            }
        }
        let pos = self.items.partition_point(|&(d, j)| d < dist || (d == dist && j < idx));
        self.items.insert(pos, (dist, idx));
        self.items.truncate(self.k);
    }
}
