//! Competition and phylogeny (moral) graph construction, cared edges,
//! and the degree-bound checks on caring vertices.
//!
//! The phylogeny graph P(D) of an acyclic digraph joins the underlying
//! graph U(D) with the competition graph C(D), which marries every pair
//! of vertices sharing an out-neighbour. An edge of P(D) that lives in
//! C(D) but not in U(D) is a cared edge; its carers are the common
//! out-neighbours witnessing it.

use crate::graph::{DegreeBounds, DegreeViolation, Digraph, SimpleGraph, TopologicalSort};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhylogenyError {
    #[error("digraph is not acyclic; directed cycle through {0:?}")]
    NotAcyclic(Vec<u32>),
    #[error("degree bounds violated at vertex {} (indegree {}, outdegree {})",
            .0.vertex, .0.indegree, .0.outdegree)]
    DegreeBounds(DegreeViolation),
}

fn require_acyclic(d: &Digraph) -> Result<(), PhylogenyError> {
    match d.topological_order() {
        TopologicalSort::Order(_) => Ok(()),
        TopologicalSort::Cycle(c) => Err(PhylogenyError::NotAcyclic(c)),
    }
}

/// Edge uv present iff u != v and some w has arcs (u,w) and (v,w).
pub fn competition_graph(d: &Digraph) -> Result<SimpleGraph, PhylogenyError> {
    require_acyclic(d)?;
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for prey in 0..d.vertex_count() as u32 {
        let parents: Vec<u32> = d.in_neighbors(prey).collect();
        for (i, &x) in parents.iter().enumerate() {
            for &y in &parents[i + 1..] {
                edges.insert((x.min(y), x.max(y)));
            }
        }
    }
    let edges: Vec<(u32, u32)> = edges.into_iter().collect();
    Ok(SimpleGraph::new(d.vertex_count(), &edges).expect("competition edges are valid"))
}

/// Union of underlying and competition edges.
pub fn phylogeny_graph(d: &Digraph) -> Result<SimpleGraph, PhylogenyError> {
    let c = competition_graph(d)?;
    let u = d.underlying_graph();
    let mut edges: Vec<(u32, u32)> = u.edges().to_vec();
    edges.extend_from_slice(c.edges());
    edges.sort_unstable();
    edges.dedup();
    Ok(SimpleGraph::new(d.vertex_count(), &edges).expect("union edges are valid"))
}

/// An edge of P(D) absent from U(D), with every vertex taking care of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaredEdge {
    /// Endpoints as (min, max).
    pub endpoints: (u32, u32),
    /// Common out-neighbours of the endpoints, ascending. Never empty.
    pub carers: Vec<u32>,
}

/// Exactly the edges of C(D) not in U(D), in lexicographic edge order,
/// each with its full carer set.
pub fn cared_edges(d: &Digraph) -> Result<Vec<CaredEdge>, PhylogenyError> {
    let c = competition_graph(d)?;
    let u = d.underlying_graph();
    let mut out = Vec::new();
    for &(x, y) in c.edges() {
        if u.has_edge(x, y) {
            continue;
        }
        let carers: Vec<u32> = d.out_neighbors(x).filter(|&w| d.has_arc(y, w)).collect();
        debug_assert!(!carers.is_empty(), "competition edge must have a witness");
        out.push(CaredEdge {
            endpoints: (x, y),
            carers,
        });
    }
    Ok(out)
}

/// Which cared-edge capacity a report exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CareViolation {
    /// Some vertex takes care of more than i(i-1)/2 edges.
    CarerOverloaded { vertex: u32, count: u64, bound: u64 },
    /// Some vertex is incident to more than i(i-1)j/2 cared edges.
    IncidenceOverloaded { vertex: u32, count: u64, bound: u64 },
}

/// Cared edges of P(D) together with per-vertex care and incidence tallies.
///
/// For a digraph within the given bounds a violation can never occur, so
/// `violation` being set signals an internal bug and fails the test suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CareReport {
    pub cared_edges: Vec<CaredEdge>,
    /// Entry v: number of cared edges v takes care of.
    pub per_carer_count: Vec<u64>,
    /// Entry v: number of cared edges incident to v.
    pub per_vertex_incidence: Vec<u64>,
    pub violation: Option<CareViolation>,
}

impl CareReport {
    pub fn max_carer_count(&self) -> u64 {
        self.per_carer_count.iter().copied().max().unwrap_or(0)
    }

    pub fn max_vertex_incidence(&self) -> u64 {
        self.per_vertex_incidence.iter().copied().max().unwrap_or(0)
    }
}

/// Tallies cared edges against the capacities implied by `bounds`.
///
/// The digraph must be acyclic and already satisfy the bounds.
pub fn care_bound_check(d: &Digraph, bounds: &DegreeBounds) -> Result<CareReport, PhylogenyError> {
    d.check_degree_bounds(bounds)
        .map_err(PhylogenyError::DegreeBounds)?;
    let cared = cared_edges(d)?;
    let n = d.vertex_count();
    let mut per_carer_count = vec![0u64; n];
    let mut per_vertex_incidence = vec![0u64; n];
    for e in &cared {
        per_vertex_incidence[e.endpoints.0 as usize] += 1;
        per_vertex_incidence[e.endpoints.1 as usize] += 1;
        for &w in &e.carers {
            per_carer_count[w as usize] += 1;
        }
    }
    let carer_bound = bounds.carer_capacity();
    let incidence_bound = bounds.incidence_capacity();
    let mut violation = None;
    for v in 0..n {
        if per_carer_count[v] > carer_bound {
            violation = Some(CareViolation::CarerOverloaded {
                vertex: v as u32,
                count: per_carer_count[v],
                bound: carer_bound,
            });
            break;
        }
        if per_vertex_incidence[v] > incidence_bound {
            violation = Some(CareViolation::IncidenceOverloaded {
                vertex: v as u32,
                count: per_vertex_incidence[v],
                bound: incidence_bound,
            });
            break;
        }
    }
    Ok(CareReport {
        cared_edges: cared,
        per_carer_count,
        per_vertex_incidence,
        violation,
    })
}
