//! Martingale weights over a core tree: s_Q, the Y_k recursion, limit weights
//! w_P and the checks on them.

use rayon::prelude::*;
use serde::Serialize;

use crate::banach::NormedSpace;
use crate::error::{GeomError, Result};
use crate::region::Region;

/// Remainder weight.
pub const REMAINDER_WEIGHT: f64 = 101.0;
/// Default q.
pub const DEFAULT_Q: f64 = 0.999;

/// A node of the weight tree. `ell_r` is ℓ(U) minus the children's ℓ(U) unless set explicitly.
#[derive(Clone, Debug, Serialize)]
pub struct WeightNode {
    pub id: String,
    pub diam_h: f64,
    pub ell_u: f64,
    pub ell_r: f64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Σ diam U_{Q'} over children outside N2(G_Q).
    pub non_n2_diam: f64,
    pub q_star_diam: Option<f64>,
    #[serde(skip)]
    pub region: Option<Region>,
    #[serde(skip)]
    explicit_r: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WeightTree {
    pub nodes: Vec<WeightNode>,
    pub roots: Vec<usize>,
}

impl WeightTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a node under `parent` and returns its index.
    pub fn add(&mut self, parent: Option<usize>, id: impl Into<String>, diam_h: f64, ell_u: f64) -> usize {
        let i = self.nodes.len();
        self.nodes.push(WeightNode {
            id: id.into(),
            diam_h,
            ell_u,
            ell_r: f64::NAN,
            parent,
            children: Vec::new(),
            non_n2_diam: 0.0,
            q_star_diam: None,
            region: None,
            explicit_r: false,
        });
        match parent {
            Some(p) => self.nodes[p].children.push(i),
            None => self.roots.push(i),
        }
        self.resolve_remainders();
        i
    }

    pub fn set_remainder(&mut self, node: usize, ell_r: f64) {
        self.nodes[node].ell_r = ell_r;
        self.nodes[node].explicit_r = true;
    }

    pub fn set_non_n2(&mut self, node: usize, diam: f64) {
        self.nodes[node].non_n2_diam = diam;
    }

    pub fn set_q_star_diam(&mut self, node: usize, diam: f64) {
        self.nodes[node].q_star_diam = Some(diam);
    }

    pub fn set_region(&mut self, node: usize, region: Region) {
        self.nodes[node].region = Some(region);
    }

    fn resolve_remainders(&mut self) {
        for i in 0..self.nodes.len() {
            if self.nodes[i].explicit_r {
                continue;
            }
            let taken: f64 = self.nodes[i].children.iter().map(|&c| self.nodes[c].ell_u).sum();
            self.nodes[i].ell_r = (self.nodes[i].ell_u - taken).max(0.0);
        }
    }

    pub fn generation(&self, mut node: usize) -> usize {
        let mut g = 0;
        while let Some(p) = self.nodes[node].parent {
            node = p;
            g += 1;
        }
        g
    }

    /// Nodes of the subtree at `root` in depth-first order with depth relative to `root`.
    pub fn subtree(&self, root: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(root, 0)];
        while let Some((n, d)) = stack.pop() {
            out.push((n, d));
            for &c in self.nodes[n].children.iter().rev() {
                stack.push((c, d + 1));
            }
        }
        out
    }

    /// Ancestors of `node`, nearest first, including `node`.
    pub fn ancestors(&self, node: usize) -> Vec<usize> {
        let mut out = vec![node];
        let mut n = node;
        while let Some(p) = self.nodes[n].parent {
            out.push(p);
            n = p;
        }
        out
    }

    /// The cell of the partition containing `x`: descend through cores containing `x`.
    /// Needs regions on every node.
    pub fn locate(&self, space: &NormedSpace, x: &[f64]) -> Option<CellRef> {
        let contains = |n: usize| self.nodes[n].region.as_ref().map_or(false, |r| r.contains(space, x));
        let mut cur = *self.roots.iter().find(|&&r| contains(r))?;
        loop {
            match self.nodes[cur].children.iter().find(|&&c| contains(c)) {
                Some(&c) => cur = c,
                None => {
                    let kind = if self.nodes[cur].children.is_empty() { CellKind::Leaf } else { CellKind::Remainder };
                    return Some(CellRef { node: cur, kind });
                }
            }
        }
    }

    /// All cells of the partition of the roots' cores, with their measure.
    pub fn cells(&self) -> Vec<(CellRef, f64)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| {
                if n.children.is_empty() {
                    Some((CellRef { node: i, kind: CellKind::Leaf }, n.ell_u))
                } else if n.ell_r > 0.0 {
                    Some((CellRef { node: i, kind: CellKind::Remainder }, n.ell_r))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// s_Q = 101·ℓ(R_Q) + Σ diam H over the children.
pub fn s_value(tree: &WeightTree, node: usize) -> Result<f64> {
    let n = tree.nodes.get(node).ok_or_else(|| GeomError::Precondition(format!("no node {node}")))?;
    if !n.ell_r.is_finite() {
        return Err(GeomError::Precondition(format!("remainder of node {} is unresolved", n.id)));
    }
    let mut s = REMAINDER_WEIGHT * n.ell_r;
    for &c in &n.children {
        let d = tree.nodes[c].diam_h;
        if !d.is_finite() {
            return Err(GeomError::Precondition(format!("child {} of node {} has no fragment diameter", tree.nodes[c].id, n.id)));
        }
        s += d;
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    /// R_Q of a node with children.
    Remainder,
    /// U_Q of a childless node.
    Leaf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CellRef {
    pub node: usize,
    pub kind: CellKind,
}

/// A cell of w_P: constant `value` on a set of ℓ-measure `measure`.
#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub cell: CellRef,
    pub generation: usize,
    pub value: f64,
    pub measure: f64,
}

/// w_P with the per-node masses ∫_{U_Q} Y_k dℓ, k = generation of Q.
#[derive(Clone, Debug, Serialize)]
pub struct Weights {
    pub root: usize,
    /// (node, generation, mass, s_Q) for the subtree.
    pub nodes: Vec<(usize, usize, f64, f64)>,
    pub cells: Vec<Cell>,
}

impl Weights {
    pub fn integral(&self) -> f64 {
        self.cells.iter().map(|c| c.value * c.measure).sum()
    }

    pub fn value(&self, cell: CellRef) -> Option<f64> {
        self.cells.iter().find(|c| c.cell == cell).map(|c| c.value)
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.1).max().unwrap_or(0)
    }

    /// Values Y_k takes (value, measure) for k = 0..=depth+1.
    pub fn y_levels(&self, tree: &WeightTree) -> Vec<Vec<(f64, f64)>> {
        let depth = self.depth();
        (0..=depth + 1)
            .map(|k| {
                let mut parts = Vec::new();
                for &(n, g, m, s) in &self.nodes {
                    let node = &tree.nodes[n];
                    if g == k {
                        parts.push((m / node.ell_u, node.ell_u));
                    } else if g < k {
                        if node.children.is_empty() {
                            parts.push((m / node.ell_u, node.ell_u));
                        } else if node.ell_r > 0.0 {
                            parts.push((REMAINDER_WEIGHT * m / s, node.ell_r));
                        }
                    }
                }
                parts
            })
            .collect()
    }
}

/// Runs the recursion from `root` down its subtree.
pub fn build_weights(tree: &WeightTree, root: usize) -> Result<Weights> {
    let mut nodes = Vec::new();
    let mut cells = Vec::new();
    let top = &tree.nodes[root];
    let mut stack = vec![(root, 0usize, top.diam_h)];
    while let Some((n, g, m)) = stack.pop() {
        let node = &tree.nodes[n];
        if !(node.ell_u > 0.0) {
            return Err(GeomError::Degenerate(format!("ℓ(U) = {} at node {}", node.ell_u, node.id)));
        }
        let s = s_value(tree, n)?;
        nodes.push((n, g, m, s));
        if node.children.is_empty() {
            cells.push(Cell { cell: CellRef { node: n, kind: CellKind::Leaf }, generation: g, value: m / node.ell_u, measure: node.ell_u });
            continue;
        }
        if !(s > 0.0) {
            return Err(GeomError::Degenerate(format!("s_Q = 0 at node {}", node.id)));
        }
        if node.ell_r > 0.0 {
            cells.push(Cell {
                cell: CellRef { node: n, kind: CellKind::Remainder },
                generation: g,
                value: REMAINDER_WEIGHT * m / s,
                measure: node.ell_r,
            });
        }
        for &c in node.children.iter().rev() {
            stack.push((c, g + 1, tree.nodes[c].diam_h * m / s));
        }
    }
    nodes.sort_by_key(|e| e.0);
    cells.sort_by_key(|c| c.cell.node);
    Ok(Weights { root, nodes, cells })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConservationReport {
    pub root: String,
    /// ∫Y_k dℓ for k = 0..=depth+1.
    pub integrals: Vec<f64>,
    pub max_step_error: f64,
    pub initial_error: f64,
    pub ok: bool,
}

/// |∫Y_{k+1} − ∫Y_k| ≤ 1e-12·∫Y_0 and ∫Y_0 = diam H_P.
pub fn verify_conservation(tree: &WeightTree, w: &Weights) -> ConservationReport {
    let integrals: Vec<f64> = w.y_levels(tree).iter().map(|parts| parts.iter().map(|(v, m)| v * m).sum()).collect();
    let base = integrals[0];
    let max_step_error = integrals.windows(2).map(|p| (p[1] - p[0]).abs()).fold(0.0, f64::max);
    let diam = tree.nodes[w.root].diam_h;
    let initial_error = (base - diam).abs();
    ConservationReport {
        root: tree.nodes[w.root].id.clone(),
        ok: max_step_error <= 1e-12 * base && initial_error <= 1e-15 * diam.max(f64::MIN_POSITIVE),
        integrals,
        max_step_error,
        initial_error,
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundsReport {
    pub q: f64,
    pub max_y: f64,
    /// (node id, generation, value, 101·q^generation) for violations.
    pub branch_violations: Vec<(String, usize, f64, f64)>,
    pub max_branch_ratio: f64,
    /// Largest Σ_Q w_Q over all cells.
    pub max_overlap: f64,
    pub overlap_bound: f64,
    /// Largest relative |∫w_P − diam H_P|.
    pub max_mass_error: f64,
    /// Nodes whose diam H falls below 0.5·diam Q_*.
    pub mass_lower_violations: Vec<String>,
    /// Nodes with s_Q > 101·ℓ(U_Q).
    pub s_violations: Vec<String>,
}

impl BoundsReport {
    pub fn ok(&self) -> bool {
        self.max_y <= REMAINDER_WEIGHT * (1.0 + 1e-12)
            && self.branch_violations.is_empty()
            && self.max_overlap <= self.overlap_bound + 1e-9
            && self.max_mass_error <= 1e-10
            && self.mass_lower_violations.is_empty()
            && self.s_violations.is_empty()
    }
}

/// Weights for every node taken as root, in node order.
pub fn all_weights(tree: &WeightTree) -> Result<Vec<Weights>> {
    (0..tree.nodes.len()).into_par_iter().map(|i| build_weights(tree, i)).collect()
}

/// Σ_Q w_Q on `cell` over every node Q whose core contains the cell.
pub fn stacked_weight(tree: &WeightTree, weights: &[Weights], cell: CellRef) -> f64 {
    tree.ancestors(cell.node).iter().map(|&a| weights[a].value(cell).unwrap_or(0.0)).sum()
}

/// Checks Y_k ≤ 101, w_P ≤ 101·q^k on depth-k branches, the overlap bound
/// 101/(1−q), the mass identity and the lower mass bound.
pub fn verify_bounds(tree: &WeightTree, q: f64) -> Result<BoundsReport> {
    if !(q > 0.0 && q < 1.0) {
        return Err(GeomError::Precondition(format!("q must lie in (0, 1), got {q}")));
    }
    let weights = all_weights(tree)?;
    let mut rep = BoundsReport { q, overlap_bound: REMAINDER_WEIGHT / (1.0 - q), ..Default::default() };
    for w in &weights {
        for level in w.y_levels(tree) {
            for (v, _) in level {
                rep.max_y = rep.max_y.max(v);
            }
        }
        for c in &w.cells {
            let bound = REMAINDER_WEIGHT * q.powi(c.generation as i32);
            rep.max_branch_ratio = rep.max_branch_ratio.max(c.value / bound);
            if c.value > bound * (1.0 + 1e-12) {
                rep.branch_violations.push((tree.nodes[c.cell.node].id.clone(), c.generation, c.value, bound));
            }
        }
        let d = tree.nodes[w.root].diam_h;
        rep.max_mass_error = rep.max_mass_error.max((w.integral() - d).abs() / d);
    }
    for (i, n) in tree.nodes.iter().enumerate() {
        if let Some(qd) = n.q_star_diam {
            if n.diam_h < 0.5 * qd * (1.0 - 1e-9) {
                rep.mass_lower_violations.push(n.id.clone());
            }
        }
        if s_value(tree, i)? > REMAINDER_WEIGHT * n.ell_u * (1.0 + 1e-12) {
            rep.s_violations.push(n.id.clone());
        }
    }
    for (cell, _) in tree.cells() {
        rep.max_overlap = rep.max_overlap.max(stacked_weight(tree, &weights, cell));
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemainderCase {
    LargeRemainder,
    #[serde(rename = "many_nonN2")]
    ManyNonN2,
    #[serde(rename = "few_nonN2")]
    FewNonN2,
}

impl RemainderCase {
    /// The bound on diam H_Q / s_Q proved for the case.
    pub fn bound(self) -> f64 {
        match self {
            RemainderCase::LargeRemainder => 100.0 / 101.0,
            RemainderCase::ManyNonN2 => 0.999,
            RemainderCase::FewNonN2 => 0.9963,
        }
    }
}

/// Large remainder when ℓ(R_Q) > diam H_Q/100; otherwise many non-N2 cores when
/// their diameters sum past 0.05·diam H_Q.
pub fn remainder_case(node: &WeightNode) -> RemainderCase {
    if node.ell_r > node.diam_h / 100.0 {
        RemainderCase::LargeRemainder
    } else if node.non_n2_diam > 0.05 * node.diam_h {
        RemainderCase::ManyNonN2
    } else {
        RemainderCase::FewNonN2
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeRatio {
    pub id: String,
    pub ratio: f64,
    pub case: RemainderCase,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QReport {
    pub root: String,
    pub max_ratio: f64,
    pub nodes: Vec<NodeRatio>,
}

impl QReport {
    pub fn all_pass(&self) -> bool {
        self.nodes.iter().all(|n| n.pass)
    }
}

/// Per-root ratio diam H_Q / s_Q with case tags, in root order.
pub fn q_hypothesis_scan(tree: &WeightTree) -> Result<Vec<QReport>> {
    tree.roots
        .par_iter()
        .map(|&r| {
            let mut nodes = Vec::new();
            let mut max_ratio: f64 = 0.0;
            for (n, _) in tree.subtree(r) {
                let node = &tree.nodes[n];
                let ratio = node.diam_h / s_value(tree, n)?;
                let case = remainder_case(node);
                max_ratio = max_ratio.max(ratio);
                nodes.push(NodeRatio { id: node.id.clone(), ratio, case, pass: ratio <= case.bound() });
            }
            Ok(QReport { root: tree.nodes[r].id.clone(), max_ratio, nodes })
        })
        .collect()
}

/// Largest ratio over a scan.
pub fn max_ratio(reports: &[QReport]) -> f64 {
    reports.iter().map(|r| r.max_ratio).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn childless_node() {
        let mut t = WeightTree::new();
        let r = t.add(None, "P", 1.5, 1.0);
        assert_eq!(s_value(&t, r).unwrap(), 101.0);
        let w = build_weights(&t, r).unwrap();
        assert_eq!(w.cells.len(), 1);
        assert_eq!(w.cells[0].value, 1.5);
        assert_eq!(w.integral(), 1.5);
        assert!(verify_conservation(&t, &w).ok);
        let scan = q_hypothesis_scan(&t).unwrap();
        assert_eq!(scan[0].nodes[0].case, RemainderCase::LargeRemainder);
        assert!(scan[0].max_ratio < 0.9901);
    }

    #[test]
    fn two_children_s_value() {
        let mut t = WeightTree::new();
        let r = t.add(None, "P", 1.0, 1.0);
        t.add(Some(r), "a", 0.3, 0.5);
        t.add(Some(r), "b", 0.4, 0.5);
        assert_eq!(t.nodes[r].ell_r, 0.0);
        assert!((s_value(&t, r).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn single_child_covering() {
        let mut t = WeightTree::new();
        let r = t.add(None, "P", 2.0, 1.0);
        let c = t.add(Some(r), "c", 0.8, 1.0);
        let w = build_weights(&t, r).unwrap();
        let v = w.value(CellRef { node: c, kind: CellKind::Leaf }).unwrap();
        assert!((v - 2.0 / 1.0).abs() < 1e-15);
        assert!(w.value(CellRef { node: r, kind: CellKind::Remainder }).is_none());
    }

    #[test]
    fn degenerate_core() {
        let mut t = WeightTree::new();
        let r = t.add(None, "P", 2.0, 1.0);
        t.add(Some(r), "c", 0.8, 0.0);
        assert!(build_weights(&t, r).is_err());
    }

    #[test]
    fn large_remainder_case() {
        let mut t = WeightTree::new();
        let r = t.add(None, "P", 1.0, 2.0);
        t.add(Some(r), "c", 0.5, 1.0);
        t.set_remainder(r, 1.0);
        let scan = q_hypothesis_scan(&t).unwrap();
        assert_eq!(scan[0].nodes[0].case, RemainderCase::LargeRemainder);
        assert!(scan[0].nodes[0].ratio <= 100.0 / 101.0);
    }

    #[test]
    fn bound_arithmetic() {
        let mut t = WeightTree::new();
        t.add(None, "P", 1.0, 1.0);
        let rep = verify_bounds(&t, 0.999).unwrap();
        assert!((rep.overlap_bound - 101000.0).abs() < 1e-6);
        assert!(rep.ok());
    }
}
