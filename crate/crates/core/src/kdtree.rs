//! Static 3-d tree for exact nearest-sample queries.
//!
//! Ties are resolved on `(squared distance, id)`, so the result is the same
//! one an exhaustive scan with that ordering returns. Nodes are only pruned
//! when their box is strictly farther than the current best.

const LEAF_SIZE: usize = 8;

#[inline]
pub fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nearest {
    pub dist2: f64,
    pub id: u32,
}

impl Nearest {
    #[inline]
    fn better(&self, other: &Nearest) -> bool {
        self.dist2 < other.dist2 || (self.dist2 == other.dist2 && self.id < other.id)
    }
}

struct Node {
    lo: [f64; 3],
    hi: [f64; 3],
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

pub struct KdTree {
    points: Vec<([f64; 3], u32)>,
    by_id: Vec<[f64; 3]>,
    nodes: Vec<Node>,
}

impl KdTree {
    /// Point `i` gets id `i`.
    pub fn new(points: &[[f64; 3]]) -> Self {
        let mut tree = KdTree {
            points: points.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect(),
            by_id: points.to_vec(),
            nodes: Vec::new(),
        };
        if !points.is_empty() {
            tree.build(0, points.len());
        }
        tree
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for (p, _) in &self.points[start..end] {
            for a in 0..3 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let idx = self.nodes.len();
        self.nodes.push(Node { lo, hi, start, end, children: None });
        if end - start > LEAF_SIZE {
            let axis = (0..3)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap_or(0);
            let mid = start + (end - start) / 2;
            self.points[start..end].select_nth_unstable_by(mid - start, |x, y| {
                x.0[axis].total_cmp(&y.0[axis]).then(x.1.cmp(&y.1))
            });
            let left = self.build(start, mid);
            let right = self.build(mid, end);
            self.nodes[idx].children = Some((left, right));
        }
        idx
    }

    /// Nearest point to `q`. `hint` seeds the search with a likely candidate.
    pub fn nearest(&self, q: &[f64; 3], hint: Option<u32>) -> Option<Nearest> {
        if self.points.is_empty() {
            return None;
        }
        let mut best = match hint {
            Some(id) => Nearest { dist2: dist2(q, &self.by_id[id as usize]), id },
            None => Nearest { dist2: f64::INFINITY, id: u32::MAX },
        };
        self.search(0, q, &mut best);
        Some(best)
    }

    fn box_dist2(node: &Node, q: &[f64; 3]) -> f64 {
        let mut g = [0.0; 3];
        for a in 0..3 {
            g[a] = if q[a] < node.lo[a] {
                node.lo[a] - q[a]
            } else if q[a] > node.hi[a] {
                q[a] - node.hi[a]
            } else {
                0.0
            };
        }
        g[0] * g[0] + g[1] * g[1] + g[2] * g[2]
    }

    fn search(&self, idx: usize, q: &[f64; 3], best: &mut Nearest) {
        let node = &self.nodes[idx];
        if Self::box_dist2(node, q) > best.dist2 {
            return;
        }
        match node.children {
            None => {
                for (p, id) in &self.points[node.start..node.end] {
                    let cand = Nearest { dist2: dist2(q, p), id: *id };
                    if cand.better(best) {
                        *best = cand;
                    }
                }
            }
            Some((l, r)) => {
                let dl = Self::box_dist2(&self.nodes[l], q);
                let dr = Self::box_dist2(&self.nodes[r], q);
                if dl <= dr {
                    self.search(l, q, best);
                    self.search(r, q, best);
                } else {
                    self.search(r, q, best);
                    self.search(l, q, best);
                }
            }
        }
    }
}
