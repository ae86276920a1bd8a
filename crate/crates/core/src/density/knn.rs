use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::Point;

/// Static 2-D kd-tree over a borrowed point set.
#[derive(Debug)]
pub struct KdTree<'a> {
    points: &'a [Point],
    // Point indices arranged so that every subtree is a contiguous slice
    // whose middle element is the splitting node.
    order: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq)]
struct Candidate {
    dist2: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn coord(p: &Point, axis: usize) -> f64 {
    if axis == 0 {
        p.x
    } else {
        p.y
    }
}

impl<'a> KdTree<'a> {
    pub fn new(points: &'a [Point]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        build(points, &mut order, 0);
        Self { points, order }
    }

    /// Euclidean distances from `points[index]` to its `k` nearest other
    /// points, ascending. Fewer than `k` are returned when the set is small.
    pub fn nearest_distances(&self, index: usize, k: usize) -> Vec<f64> {
        if k == 0 {
            return Vec::new();
        }
        let query = self.points[index];
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.search(&self.order, 0, &query, index, k, &mut heap);
        let mut best = heap.into_sorted_vec();
        best.truncate(k);
        best.into_iter().map(|c| c.dist2.sqrt()).collect()
    }

    fn search(
        &self,
        slice: &[usize],
        depth: usize,
        query: &Point,
        skip: usize,
        k: usize,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        if slice.is_empty() {
            return;
        }
        let mid = slice.len() / 2;
        let node = slice[mid];
        let p = &self.points[node];
        if node != skip {
            let dx = p.x - query.x;
            let dy = p.y - query.y;
            let c = Candidate {
                dist2: dx * dx + dy * dy,
                index: node,
            };
            if heap.len() < k {
                heap.push(c);
            } else if c < *heap.peek().expect("non-empty") {
                heap.pop();
                heap.push(c);
            }
        }
        let axis = depth % 2;
        let diff = coord(query, axis) - coord(p, axis);
        let (near, far) = if diff < 0.0 {
            (&slice[..mid], &slice[mid + 1..])
        } else {
            (&slice[mid + 1..], &slice[..mid])
        };
        self.search(near, depth + 1, query, skip, k, heap);
        let worst = heap.peek().map_or(f64::INFINITY, |c| c.dist2);
        if heap.len() < k || diff * diff <= worst {
            self.search(far, depth + 1, query, skip, k, heap);
        }
    }
}

fn build(points: &[Point], slice: &mut [usize], depth: usize) {
    if slice.len() <= 1 {
        return;
    }
    let axis = depth % 2;
    let mid = slice.len() / 2;
    slice.select_nth_unstable_by(mid, |&a, &b| {
        coord(&points[a], axis).total_cmp(&coord(&points[b], axis))
    });
    let (left, right) = slice.split_at_mut(mid);
    build(points, left, depth + 1);
    build(points, &mut right[1..], depth + 1);
}

/// Mean distance from `points[index]` to its `k` nearest other heads, or
/// `None` when fewer than `k + 1` points exist (the caller falls back to a
/// fixed kernel width).
pub fn knn_mean_distance(points: &[Point], index: usize, k: usize) -> Option<f64> {
    KdTree::new(points).mean_distance(index, k)
}

impl KdTree<'_> {
    pub fn mean_distance(&self, index: usize, k: usize) -> Option<f64> {
        if k == 0 || self.points.len() < k + 1 {
            return None;
        }
        let d = self.nearest_distances(index, k);
        Some(d.iter().sum::<f64>() / k as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point { x, y }).collect()
    }

    #[test]
    fn hand_computed_mean() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 2.0)]);
        let m = knn_mean_distance(&p, 0, 4).unwrap();
        let expected = (1.0 + 1.0 + 2f64.sqrt() + 2.0 * 2f64.sqrt()) / 4.0;
        assert!((m - expected).abs() < 1e-12);
        assert!((m - 1.5607).abs() < 1e-4);
    }

    #[test]
    fn coincident_and_sparse() {
        let p = pts(&[(3.0, 4.0), (3.0, 4.0)]);
        assert_eq!(knn_mean_distance(&p, 0, 1), Some(0.0));
        let single = pts(&[(1.0, 1.0)]);
        assert_eq!(knn_mean_distance(&single, 0, 4), None);
        assert_eq!(knn_mean_distance(&single, 0, 1), None);
        assert_eq!(knn_mean_distance(&p, 0, 2), None);
    }
}
