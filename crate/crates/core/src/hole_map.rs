//! From holes of the phylogeny graph to holes of the underlying graph.
//!
//! For a hole H of P(D), an extending set picks one carer per cared edge
//! of H. Splicing each chosen carer into its edge turns H into a cycle
//! of U(D), hamiltonian in the subgraph L of U(D) induced by the hole
//! vertices and the chosen carers. For a (2,2) digraph L is never
//! chordal, so some hole of U(D) lives inside it; phi picks the
//! canonically least one. When the holes of P(D) are pairwise
//! vertex-disjoint and U(D) has no hole of length 4 or 6, the holes of
//! P(D) inject into the holes of U(D); the correspondence report checks
//! that by explicit bipartite matching.

use crate::chordal::{enumerate_holes_with_cap, Hole};
use crate::graph::{DegreeBounds, DegreeViolation, Digraph, SimpleGraph, TopologicalSort};
use crate::phylogeny::{cared_edges, phylogeny_graph, CaredEdge};
use thiserror::Error;

/// Default vertex cap for full hole correspondence verification.
pub const CORRESPONDENCE_VERTEX_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HoleMapError {
    #[error("digraph is not acyclic; directed cycle through {0:?}")]
    NotAcyclic(Vec<u32>),
    #[error("degree bounds violated at vertex {} (indegree {}, outdegree {})",
            .0.vertex, .0.indegree, .0.outdegree)]
    DegreeBounds(DegreeViolation),
    #[error("not a hole of the phylogeny graph: {0}")]
    NotAHoleOfP(String),
    #[error("correspondence verification capped at {cap} vertices, got {vertex_count}")]
    CapExceeded { vertex_count: usize, cap: usize },
    #[error("invariant violated, signalling an upstream bug: {0}")]
    InvariantViolation(String),
    #[error("guaranteed hole not found: {0}")]
    TheoremViolation(String),
}

/// One carer chosen for each cared edge of a hole of P(D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendingSet {
    hole: Hole,
    /// (cared edge, chosen carer), in lexicographic edge order.
    assignment: Vec<((u32, u32), u32)>,
}

impl ExtendingSet {
    pub fn hole(&self) -> &Hole {
        &self.hole
    }

    pub fn assignment(&self) -> &[((u32, u32), u32)] {
        &self.assignment
    }

    /// Chosen carers, ascending.
    pub fn carers(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.assignment.iter().map(|&(_, c)| c).collect();
        w.sort_unstable();
        w
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(hole: Hole, assignment: Vec<((u32, u32), u32)>) -> ExtendingSet {
        ExtendingSet { hole, assignment }
    }
}

fn require_valid_input(d: &Digraph) -> Result<(), HoleMapError> {
    match d.topological_order() {
        TopologicalSort::Order(_) => {}
        TopologicalSort::Cycle(c) => return Err(HoleMapError::NotAcyclic(c)),
    }
    d.check_degree_bounds(&DegreeBounds::TWO_TWO)
        .map_err(HoleMapError::DegreeBounds)
}

/// Cared edges of `hole` with their full carer sets, in lexicographic
/// edge order.
fn hole_cared_edges(d: &Digraph, hole: &Hole) -> Result<Vec<CaredEdge>, HoleMapError> {
    let p = phylogeny_graph(d).expect("validated acyclic");
    if !hole.verify(&p) {
        return Err(HoleMapError::NotAHoleOfP(format!(
            "{:?} fails the hole invariants in P(D)",
            hole.vertices()
        )));
    }
    let all = cared_edges(d).expect("validated acyclic");
    let hole_edges: Vec<(u32, u32)> = hole.edges().collect();
    let mut out: Vec<CaredEdge> = all
        .into_iter()
        .filter(|e| hole_edges.contains(&e.endpoints))
        .collect();
    out.sort_by_key(|e| e.endpoints);
    Ok(out)
}

/// Every choice of one carer per cared edge of `hole`, least carers
/// first. Each yielded set is checked against the extending-set
/// invariants: chosen carers pairwise distinct and never on the hole.
pub fn extending_sets(d: &Digraph, hole: &Hole) -> Result<Vec<ExtendingSet>, HoleMapError> {
    require_valid_input(d)?;
    let cared = hole_cared_edges(d, hole)?;
    let mut sets = Vec::new();
    let mut choice = vec![0usize; cared.len()];
    loop {
        let assignment: Vec<((u32, u32), u32)> = cared
            .iter()
            .zip(&choice)
            .map(|(e, &i)| (e.endpoints, e.carers[i]))
            .collect();
        for (edge, carer) in &assignment {
            if hole.contains(*carer) {
                return Err(HoleMapError::InvariantViolation(format!(
                    "carer {carer} of edge {edge:?} lies on the hole"
                )));
            }
        }
        let mut carers: Vec<u32> = assignment.iter().map(|&(_, c)| c).collect();
        carers.sort_unstable();
        carers.dedup();
        if carers.len() != assignment.len() {
            return Err(HoleMapError::InvariantViolation(
                "two cared edges share a chosen carer".into(),
            ));
        }
        sets.push(ExtendingSet {
            hole: hole.clone(),
            assignment,
        });
        // Odometer over carer indices, least choices first.
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(sets);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < cared[k].carers.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// The subgraph of U(D) induced by a hole and its chosen carers, with
/// the hamiltonian cycle obtained by splicing each carer into its edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObtainedSubgraph {
    /// L, relabelled densely.
    pub graph: SimpleGraph,
    /// Entry i is the original vertex behind L's vertex i.
    pub vertices: Vec<u32>,
    /// Hamiltonian cycle of L, in original vertex labels.
    pub hamiltonian_cycle: Vec<u32>,
}

impl ObtainedSubgraph {
    /// Holes of L, translated back to original vertex labels against `u`.
    fn holes_in(&self, u: &SimpleGraph) -> Vec<Hole> {
        let holes = enumerate_holes_with_cap(&self.graph, self.graph.vertex_count())
            .expect("cap equals the vertex count");
        let mut out: Vec<Hole> = holes
            .iter()
            .map(|h| {
                let seq: Vec<u32> = h
                    .vertices()
                    .iter()
                    .map(|&v| self.vertices[v as usize])
                    .collect();
                Hole::new(u, &seq).expect("holes of an induced subgraph are holes of the graph")
            })
            .collect();
        out.sort();
        out
    }
}

/// Builds the subgraph of U(D) obtained from the extending set's hole.
pub fn obtained_subgraph(d: &Digraph, w: &ExtendingSet) -> Result<ObtainedSubgraph, HoleMapError> {
    require_valid_input(d)?;
    let u = d.underlying_graph();
    let mut selection: Vec<u32> = w.hole.vertices().to_vec();
    selection.extend(w.carers());
    let (graph, vertices) = u
        .induced_subgraph(&selection)
        .map_err(|e| HoleMapError::InvariantViolation(e.to_string()))?;
    if vertices.len() != selection.len() {
        return Err(HoleMapError::InvariantViolation(
            "hole vertices and carers overlap".into(),
        ));
    }
    // No edge of U(D) joins two chosen carers.
    let carers = w.carers();
    for (i, &a) in carers.iter().enumerate() {
        for &b in &carers[i + 1..] {
            if u.has_edge(a, b) {
                return Err(HoleMapError::InvariantViolation(format!(
                    "carers {a} and {b} are adjacent in U(D)"
                )));
            }
        }
    }
    // Splice each cared edge x-y into x-w-y.
    let hole = w.hole.vertices();
    let k = hole.len();
    let mut cycle = Vec::with_capacity(k + carers.len());
    for i in 0..k {
        let (a, b) = (hole[i], hole[(i + 1) % k]);
        cycle.push(a);
        let key = (a.min(b), a.max(b));
        if let Some(&(_, carer)) = w.assignment.iter().find(|&&(e, _)| e == key) {
            cycle.push(carer);
        }
    }
    // The spliced cycle must be hamiltonian in L.
    let mut pos = std::collections::BTreeMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        pos.insert(v, i as u32);
    }
    let local: Vec<u32> = cycle.iter().map(|v| pos[v]).collect();
    crate::chordal::validate_cycle(&graph, &local)
        .map_err(|e| HoleMapError::InvariantViolation(format!("spliced cycle invalid: {e}")))?;
    if local.len() != vertices.len() {
        return Err(HoleMapError::InvariantViolation(
            "spliced cycle is not hamiltonian".into(),
        ));
    }
    Ok(ObtainedSubgraph {
        graph,
        vertices,
        hamiltonian_cycle: cycle,
    })
}

/// A hole of U(D) whose vertices all lie in some obtained subgraph of
/// `hole`; the hole itself when it has no cared edges. Tries extending
/// sets in iterator order and returns the canonically least hole of the
/// first subgraph that has one.
pub fn phi(d: &Digraph, hole: &Hole) -> Result<Hole, HoleMapError> {
    require_valid_input(d)?;
    let u = d.underlying_graph();
    let sets = extending_sets(d, hole)?;
    for w in &sets {
        if w.assignment.is_empty() {
            // No cared edges: the hole already lives in U(D).
            return Hole::new(&u, hole.vertices()).map_err(|e| {
                HoleMapError::InvariantViolation(format!(
                    "hole without cared edges is not a hole of U(D): {e}"
                ))
            });
        }
        let l = obtained_subgraph(d, w)?;
        let holes = l.holes_in(&u);
        if let Some(first) = holes.into_iter().next() {
            return Ok(first);
        }
        // A chordal L cannot happen for valid inputs; fall through to the
        // next extending set defensively.
    }
    Err(HoleMapError::TheoremViolation(format!(
        "no extending set of {:?} yields a hole in U(D)",
        hole.vertices()
    )))
}

/// Whether the hole-correspondence hypotheses hold for a digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrespondenceHypotheses {
    /// Holes of P(D) are pairwise vertex-disjoint.
    pub p_holes_disjoint: bool,
    /// No hole of U(D) has length 4 or 6.
    pub no_u_hole_of_length_4_or_6: bool,
}

impl CorrespondenceHypotheses {
    pub fn met(&self) -> bool {
        self.p_holes_disjoint && self.no_u_hole_of_length_4_or_6
    }
}

/// Full hole-correspondence report for one digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub holes_p: Vec<Hole>,
    pub holes_u: Vec<Hole>,
    /// phi for every hole of P(D).
    pub map: Vec<(Hole, Hole)>,
    /// For every hole of P(D), the holes of U(D) reachable inside some
    /// obtained subgraph; phi picks the least of the first non-empty set.
    pub candidates: Vec<(Hole, Vec<Hole>)>,
    pub hypotheses: CorrespondenceHypotheses,
    /// A perfect matching of P-holes into distinct U-hole candidates
    /// exists. Trivially true with no P-holes.
    pub injective: bool,
    /// |holes of U(D)| >= |holes of P(D)|.
    pub count_ok: bool,
}

/// Enumerates both hole sets, applies phi everywhere, and verifies the
/// counting statements by bipartite matching. Uses the default cap.
pub fn verify_hole_correspondence(d: &Digraph) -> Result<CorrespondenceReport, HoleMapError> {
    verify_hole_correspondence_with_cap(d, CORRESPONDENCE_VERTEX_CAP)
}

pub fn verify_hole_correspondence_with_cap(
    d: &Digraph,
    cap: usize,
) -> Result<CorrespondenceReport, HoleMapError> {
    require_valid_input(d)?;
    if d.vertex_count() > cap {
        return Err(HoleMapError::CapExceeded {
            vertex_count: d.vertex_count(),
            cap,
        });
    }
    let p = phylogeny_graph(d).expect("validated acyclic");
    let u = d.underlying_graph();
    let holes_p = enumerate_holes_with_cap(&p, cap).expect("cap checked");
    let holes_u = enumerate_holes_with_cap(&u, cap).expect("cap checked");

    let p_holes_disjoint = holes_p
        .iter()
        .enumerate()
        .all(|(i, a)| holes_p[i + 1..].iter().all(|b| !a.shares_vertex_with(b)));
    let no_u_hole_of_length_4_or_6 = holes_u.iter().all(|h| h.len() != 4 && h.len() != 6);

    let mut map = Vec::new();
    let mut candidates = Vec::new();
    for hole in &holes_p {
        map.push((hole.clone(), phi(d, hole)?));
        let mut reach: Vec<Hole> = Vec::new();
        for w in extending_sets(d, hole)? {
            if w.assignment().is_empty() {
                reach.push(Hole::new(&u, hole.vertices()).map_err(|e| {
                    HoleMapError::InvariantViolation(format!(
                        "hole without cared edges is not a hole of U(D): {e}"
                    ))
                })?);
            } else {
                reach.extend(obtained_subgraph(d, &w)?.holes_in(&u));
            }
        }
        reach.sort();
        reach.dedup();
        candidates.push((hole.clone(), reach));
    }

    let injective = has_injective_assignment(&holes_u, &candidates);
    let count_ok = holes_u.len() >= holes_p.len();
    Ok(CorrespondenceReport {
        holes_p,
        holes_u,
        map,
        candidates,
        hypotheses: CorrespondenceHypotheses {
            p_holes_disjoint,
            no_u_hole_of_length_4_or_6,
        },
        injective,
        count_ok,
    })
}

/// Kuhn's augmenting-path matching of P-holes into distinct U-holes.
fn has_injective_assignment(holes_u: &[Hole], candidates: &[(Hole, Vec<Hole>)]) -> bool {
    let index_of = |h: &Hole| holes_u.iter().position(|u| u == h);
    let adj: Vec<Vec<usize>> = candidates
        .iter()
        .map(|(_, reach)| reach.iter().filter_map(&index_of).collect())
        .collect();
    let mut matched_u: Vec<Option<usize>> = vec![None; holes_u.len()];

    fn augment(
        p: usize,
        adj: &[Vec<usize>],
        matched_u: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &u in &adj[p] {
            if visited[u] {
                continue;
            }
            visited[u] = true;
            if matched_u[u].is_none() || augment(matched_u[u].unwrap(), adj, matched_u, visited) {
                matched_u[u] = Some(p);
                return true;
            }
        }
        false
    }

    for p in 0..adj.len() {
        let mut visited = vec![false; holes_u.len()];
        if !augment(p, &adj, &mut matched_u, &mut visited) {
            return false;
        }
    }
    true
}
