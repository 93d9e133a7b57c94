//! Digraph and undirected-graph types.
//!
//! Vertices are dense indices `0..n`. Adjacency is kept both as a sorted
//! pair list and as per-vertex bit sets, which makes common-out-neighbour
//! queries cheap during phylogeny construction. Acyclicity is a checked
//! precondition, not a type invariant, so enumeration code can grow arc
//! sets incrementally.

use crate::bits::Bits;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop arc at vertex {0}")]
    LoopArc(u32),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(u32, u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: u32, vertex_count: usize },
}

/// Indegree/outdegree caps for an (i,j) digraph. Both bounds are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeBounds {
    max_in: u32,
    max_out: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("degree bounds must be at least (1, 1), got ({0}, {1})")]
pub struct InvalidBounds(u32, u32);

impl DegreeBounds {
    /// The (2,2) bounds studied throughout.
    pub const TWO_TWO: DegreeBounds = DegreeBounds {
        max_in: 2,
        max_out: 2,
    };

    pub fn new(max_in: u32, max_out: u32) -> Result<Self, InvalidBounds> {
        if max_in == 0 || max_out == 0 {
            return Err(InvalidBounds(max_in, max_out));
        }
        Ok(DegreeBounds { max_in, max_out })
    }

    pub fn max_in(&self) -> u32 {
        self.max_in
    }

    pub fn max_out(&self) -> u32 {
        self.max_out
    }

    /// Largest number of edges one vertex may take care of: i(i-1)/2.
    pub fn carer_capacity(&self) -> u64 {
        let i = self.max_in as u64;
        i * (i - 1) / 2
    }

    /// Largest number of cared edges one vertex may be incident to: i(i-1)j/2.
    pub fn incidence_capacity(&self) -> u64 {
        self.carer_capacity() * self.max_out as u64
    }
}

/// A vertex violating requested degree bounds, with its actual degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeViolation {
    pub vertex: u32,
    pub indegree: u32,
    pub outdegree: u32,
}

/// Result of a topological sort: either a valid order or a directed cycle
/// proving that none exists. The cycle is a normal return branch, not an
/// error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologicalSort {
    /// Every arc goes forward in this vertex order.
    Order(Vec<u32>),
    /// Distinct vertices of a directed cycle, in arc order.
    Cycle(Vec<u32>),
}

impl TopologicalSort {
    pub fn order(&self) -> Option<&[u32]> {
        match self {
            TopologicalSort::Order(o) => Some(o),
            TopologicalSort::Cycle(_) => None,
        }
    }

    pub fn cycle(&self) -> Option<&[u32]> {
        match self {
            TopologicalSort::Order(_) => None,
            TopologicalSort::Cycle(c) => Some(c),
        }
    }
}

/// Simple digraph: no loops, no duplicate arcs. Both (u,v) and (v,u) may
/// be present, although acyclic call sites never see that.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(u32, u32)>,
    out: Vec<Bits>,
    inn: Vec<Bits>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut sorted: Vec<(u32, u32)> = Vec::with_capacity(arcs.len());
        for &(u, v) in arcs {
            for w in [u, v] {
                if (w as usize) >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::LoopArc(u));
            }
            sorted.push((u, v));
        }
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateArc(w[0].0, w[0].1));
            }
        }
        let mut out = vec![Bits::with_capacity(vertex_count); vertex_count];
        let mut inn = vec![Bits::with_capacity(vertex_count); vertex_count];
        for &(u, v) in &sorted {
            out[u as usize].set(v);
            inn[v as usize].set(u);
        }
        Ok(Digraph {
            n: vertex_count,
            arcs: sorted,
            out,
            inn,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Arcs as (tail, head), sorted.
    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: u32, v: u32) -> bool {
        self.out[u as usize].test(v)
    }

    pub fn out_degree(&self, v: u32) -> u32 {
        self.out[v as usize].count()
    }

    pub fn in_degree(&self, v: u32) -> u32 {
        self.inn[v as usize].count()
    }

    pub fn out_neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.out[v as usize].iter()
    }

    pub fn in_neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.inn[v as usize].iter()
    }

    /// Kahn's algorithm, taking the least ready vertex first so the order
    /// is deterministic. On failure the witness cycle starts at its least
    /// vertex.
    pub fn topological_order(&self) -> TopologicalSort {
        let n = self.n;
        let mut indeg: Vec<u32> = (0..n).map(|v| self.inn[v].count()).collect();
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<u32>> = (0..n as u32)
            .filter(|&v| indeg[v as usize] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(v)) = ready.pop() {
            order.push(v);
            for w in self.out[v as usize].iter() {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    ready.push(std::cmp::Reverse(w));
                }
            }
        }
        if order.len() == n {
            return TopologicalSort::Order(order);
        }
        // Leftover vertices keep a leftover in-neighbour (their residual
        // indegree is positive), so a backward walk must revisit itself.
        let start = (0..n as u32).find(|&v| indeg[v as usize] > 0).unwrap();
        let mut seen_at = vec![usize::MAX; n];
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            if seen_at[v as usize] != usize::MAX {
                let mut cycle = walk.split_off(seen_at[v as usize]);
                cycle.reverse(); // backward walk; flip to arc order
                let min_pos = cycle
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &x)| x)
                    .map(|(i, _)| i)
                    .unwrap();
                cycle.rotate_left(min_pos);
                return TopologicalSort::Cycle(cycle);
            }
            seen_at[v as usize] = walk.len();
            walk.push(v);
            v = self.inn[v as usize]
                .iter()
                .find(|&w| indeg[w as usize] > 0)
                .expect("leftover vertex keeps a leftover in-neighbour");
        }
    }

    pub fn is_acyclic(&self) -> bool {
        matches!(self.topological_order(), TopologicalSort::Order(_))
    }

    /// Pass iff every vertex has indegree <= max_in and outdegree <= max_out.
    pub fn check_degree_bounds(&self, bounds: &DegreeBounds) -> Result<(), DegreeViolation> {
        for v in 0..self.n as u32 {
            let indegree = self.in_degree(v);
            let outdegree = self.out_degree(v);
            if indegree > bounds.max_in() || outdegree > bounds.max_out() {
                return Err(DegreeViolation {
                    vertex: v,
                    indegree,
                    outdegree,
                });
            }
        }
        Ok(())
    }

    /// Subdigraph induced by `vertices`, relabelled densely. Returns the
    /// relabelling map: entry `i` is the original label of new vertex `i`.
    pub fn induced_subdigraph(&self, vertices: &[u32]) -> Result<(Digraph, Vec<u32>), GraphError> {
        let map = dense_map(self.n, vertices)?;
        let mut pos = vec![u32::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let arcs: Vec<(u32, u32)> = self
            .arcs
            .iter()
            .filter(|&&(u, v)| pos[u as usize] != u32::MAX && pos[v as usize] != u32::MAX)
            .map(|&(u, v)| (pos[u as usize], pos[v as usize]))
            .collect();
        let d = Digraph::new(map.len(), &arcs)?;
        Ok((d, map))
    }

    /// Arc directions erased: edge xy present iff (x,y) or (y,x) is an arc.
    pub fn underlying_graph(&self) -> SimpleGraph {
        let mut edges: Vec<(u32, u32)> = self
            .arcs
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        SimpleGraph::new(self.n, &edges).expect("underlying edges are valid by construction")
    }
}

/// Simple undirected graph: no loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Bits>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut sorted: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if (w as usize) >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::LoopArc(u));
            }
            sorted.push((u.min(v), u.max(v)));
        }
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Bits::with_capacity(vertex_count); vertex_count];
        for &(u, v) in &sorted {
            adj[u as usize].set(v);
            adj[v as usize].set(u);
        }
        Ok(SimpleGraph {
            n: vertex_count,
            edges: sorted,
            adj,
        })
    }

    /// Cycle graph on `k >= 3` vertices, edges i -- i+1 mod k.
    pub fn cycle(k: usize) -> SimpleGraph {
        assert!(k >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<(u32, u32)> = (0..k as u32)
            .map(|i| {
                let j = (i + 1) % k as u32;
                (i.min(j), i.max(j))
            })
            .collect();
        SimpleGraph::new(k, &edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Edges as (min, max), sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.adj[u as usize].test(v)
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.adj[v as usize].count()
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter()
    }

    pub fn is_clique(&self, vertices: &[u32]) -> bool {
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Subgraph induced by `vertices`, relabelled densely, plus the map
    /// from new index to original label.
    pub fn induced_subgraph(
        &self,
        vertices: &[u32],
    ) -> Result<(SimpleGraph, Vec<u32>), GraphError> {
        let map = dense_map(self.n, vertices)?;
        let mut pos = vec![u32::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u as usize] != u32::MAX && pos[v as usize] != u32::MAX)
            .map(|&(u, v)| (pos[u as usize], pos[v as usize]))
            .collect();
        let g = SimpleGraph::new(map.len(), &edges)?;
        Ok((g, map))
    }
}

/// Validates a vertex selection and returns it sorted and deduplicated.
fn dense_map(n: usize, vertices: &[u32]) -> Result<Vec<u32>, GraphError> {
    let mut map: Vec<u32> = vertices.to_vec();
    for &v in &map {
        if (v as usize) >= n {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                vertex_count: n,
            });
        }
    }
    map.sort_unstable();
    map.dedup();
    Ok(map)
}

/// The running five-vertex example: arcs 0->1, 0->3, 1->2, 1->4, 2->3, 3->4.
#[cfg(test)]
pub(crate) fn example_digraph() -> Digraph {
    Digraph::new(5, &[(0, 1), (0, 3), (1, 2), (1, 4), (2, 3), (3, 4)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructs_example() {
        let d = example_digraph();
        assert_eq!(d.vertex_count(), 5);
        assert_eq!(d.arc_count(), 6);
        assert!(d.has_arc(0, 3) && !d.has_arc(3, 0));
    }

    #[test]
    fn single_vertex_no_arcs() {
        let d = Digraph::new(1, &[]).unwrap();
        assert_eq!(d.vertex_count(), 1);
        assert_eq!(d.arc_count(), 0);
    }

    #[test]
    fn rejects_duplicate_arc() {
        let err = Digraph::new(2, &[(0, 1), (0, 1)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateArc(0, 1));
    }

    #[test]
    fn rejects_loop() {
        let err = Digraph::new(2, &[(1, 1)]).unwrap_err();
        assert_eq!(err, GraphError::LoopArc(1));
    }

    #[test]
    fn rejects_out_of_range() {
        let err = Digraph::new(2, &[(0, 2)]).unwrap_err();
        assert!(matches!(
            err,
            GraphError::VertexOutOfRange { vertex: 2, .. }
        ));
    }

    #[test]
    fn topological_order_of_example() {
        let d = example_digraph();
        match d.topological_order() {
            TopologicalSort::Order(o) => {
                assert_eq!(o.len(), 5);
                let mut pos = [0; 5];
                for (i, &v) in o.iter().enumerate() {
                    pos[v as usize] = i;
                }
                for &(u, v) in d.arcs() {
                    assert!(pos[u as usize] < pos[v as usize]);
                }
                assert_eq!(o, vec![0, 1, 2, 3, 4]);
            }
            TopologicalSort::Cycle(c) => panic!("unexpected cycle {c:?}"),
        }
    }

    #[test]
    fn two_cycle_witness() {
        let d = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(d.topological_order().cycle(), Some(&[0, 1][..]));
        assert!(!d.is_acyclic());
    }

    #[test]
    fn empty_digraph_any_order() {
        let d = Digraph::new(3, &[]).unwrap();
        let order = d.topological_order();
        assert_eq!(order.order().map(<[u32]>::len), Some(3));
    }

    #[test]
    fn degree_bounds_pass_and_fail() {
        let d = example_digraph();
        assert!(d.check_degree_bounds(&DegreeBounds::TWO_TWO).is_ok());

        let star = Digraph::new(4, &[(1, 0), (2, 0), (3, 0)]).unwrap();
        let v = star
            .check_degree_bounds(&DegreeBounds::TWO_TWO)
            .unwrap_err();
        assert_eq!(v.vertex, 0);
        assert_eq!(v.indegree, 3);

        let empty = Digraph::new(4, &[]).unwrap();
        assert!(empty
            .check_degree_bounds(&DegreeBounds::new(1, 1).unwrap())
            .is_ok());
    }

    #[test]
    fn invalid_bounds_rejected() {
        assert!(DegreeBounds::new(0, 1).is_err());
        assert!(DegreeBounds::new(2, 0).is_err());
    }

    #[test]
    fn induced_subdigraph_filters_arcs() {
        let d = example_digraph();
        let (sub, map) = d.induced_subdigraph(&[0, 1, 2, 3]).unwrap();
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(sub.arcs(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);

        let (empty, map) = d.induced_subdigraph(&[]).unwrap();
        assert_eq!(empty.vertex_count(), 0);
        assert!(map.is_empty());

        let (same, _) = d.induced_subdigraph(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(&same, &d);

        assert!(d.induced_subdigraph(&[9]).is_err());
    }

    #[test]
    fn underlying_graph_of_example() {
        let d = example_digraph();
        let u = d.underlying_graph();
        assert_eq!(u.edges(), &[(0, 1), (0, 3), (1, 2), (1, 4), (2, 3), (3, 4)]);

        let single = Digraph::new(2, &[(0, 1)]).unwrap().underlying_graph();
        assert_eq!(single.edges(), &[(0, 1)]);

        let empty = Digraph::new(3, &[]).unwrap().underlying_graph();
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn simple_graph_validation() {
        assert!(SimpleGraph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(3, &[(1, 1)]).is_err());
        assert!(SimpleGraph::new(3, &[(0, 3)]).is_err());
        let g = SimpleGraph::new(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert!(g.has_edge(2, 0));
    }

    #[test]
    fn induced_commutes_with_underlying() {
        let d = example_digraph();
        let s = [0u32, 2, 3, 4];
        let (sub, _) = d.induced_subdigraph(&s).unwrap();
        let a = sub.underlying_graph();
        let (b, _) = d.underlying_graph().induced_subgraph(&s).unwrap();
        assert_eq!(a, b);
    }
}
