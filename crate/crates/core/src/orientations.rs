//! Acyclic orientations of cycle graphs: enumeration up to isomorphism,
//! classification as forbidden or permitted for (2,2) digraphs with
//! chordal phylogeny graphs, and scanning digraphs for forbidden induced
//! patterns.
//!
//! An orientation is permitted when some (2,2) digraph contains it as an
//! induced subdigraph and still has a chordal phylogeny graph. Witnesses
//! are searched breadth-first over the number of added vertices; a class
//! with no witness up to the bound is reported as such rather than
//! proven forbidden, and the shipped catalog is cross-validated against
//! that search. Orientations of cycles of length at least 7 are
//! forbidden outright: the phylogeny graph restricted to such a hole is
//! never chordal.

use crate::canon::{canonical_form, CanonicalForm, CANONICAL_VERTEX_CAP};
use crate::chordal::{enumerate_holes_with_cap, is_chordal_bool};
use crate::dense::{full_mask, is_chordal_masks, DenseDigraph, DENSE_CAP};
use crate::graph::{DegreeBounds, Digraph, TopologicalSort};
use crate::phylogeny::phylogeny_graph;
use thiserror::Error;

/// Smallest cycle length whose orientations are all forbidden.
pub const MIN_FORBIDDEN_HOLE_LENGTH: usize = 7;

/// Default number of extra vertices tried by the witness search.
pub const DEFAULT_WITNESS_EXTRA_VERTICES: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("cycle length {0} outside supported range 3..=12")]
    LengthOutOfRange(usize),
    #[error("cost guard: {0}")]
    CostGuardExceeded(String),
    #[error("digraph is not acyclic; directed cycle through {0:?}")]
    NotAcyclic(Vec<u32>),
}

/// Forbidden/permitted status of an orientation class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientationStatus {
    /// A (2,2) digraph containing the representative induced, with
    /// chordal phylogeny graph.
    Permitted(Digraph),
    /// The witness search exhausted every extension adding up to this
    /// many vertices.
    NoWitnessUpTo(u32),
    /// Length at least 7; forbidden by the long-hole rule.
    ForbiddenByLength,
}

/// One isomorphism class of acyclic orientations of the k-cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationClass {
    /// Cycle length.
    pub length: usize,
    /// Representative whose underlying graph is a chordless k-cycle.
    pub representative: Digraph,
    pub canonical: CanonicalForm,
    /// None until classified.
    pub status: Option<OrientationStatus>,
}

/// One representative per isomorphism class of acyclic orientations of
/// the k-cycle, 3 <= k <= 12, with status unset. Ordered by the least
/// orientation bit string realising each class.
pub fn enumerate_cycle_orientations(k: usize) -> Result<Vec<OrientationClass>, OrientationError> {
    if !(3..=12).contains(&k) {
        return Err(OrientationError::LengthOutOfRange(k));
    }
    let mut seen: std::collections::BTreeSet<CanonicalForm> = std::collections::BTreeSet::new();
    let mut classes = Vec::new();
    // Bit e directs edge {e, e+1 mod k} forward; the two constant strings
    // are the directed cycles and are skipped.
    for bits in 1u32..(1 << k) - 1 {
        let d = orientation_digraph(k, bits);
        debug_assert!(d.is_acyclic());
        let canonical = canonical_form(&d).expect("cycle lengths stay below the cap");
        if seen.insert(canonical.clone()) {
            classes.push(OrientationClass {
                length: k,
                representative: d,
                canonical,
                status: None,
            });
        }
    }
    Ok(classes)
}

fn orientation_digraph(k: usize, bits: u32) -> Digraph {
    let arcs: Vec<(u32, u32)> = (0..k as u32)
        .map(|e| {
            let (a, b) = (e, (e + 1) % k as u32);
            if bits & (1 << e) != 0 {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    Digraph::new(k, &arcs).unwrap()
}

/// Classifies one orientation class. Lengths 7 and 8 fall to the
/// long-hole rule; longer inputs exceed the cost guard, as do witness
/// searches past 6 extra vertices.
pub fn classify_orientation(
    class: &OrientationClass,
    extra_vertices: u32,
) -> Result<OrientationClass, OrientationError> {
    let mut out = class.clone();
    if class.length > 8 {
        return Err(OrientationError::CostGuardExceeded(format!(
            "cycle length {} above 8",
            class.length
        )));
    }
    if extra_vertices > 6 {
        return Err(OrientationError::CostGuardExceeded(format!(
            "{extra_vertices} extra vertices above 6"
        )));
    }
    if class.length >= MIN_FORBIDDEN_HOLE_LENGTH {
        out.status = Some(OrientationStatus::ForbiddenByLength);
        return Ok(out);
    }
    match find_witness(&class.representative, extra_vertices) {
        Some(witness) => {
            out.status = Some(OrientationStatus::Permitted(witness));
        }
        None => out.status = Some(OrientationStatus::NoWitnessUpTo(extra_vertices)),
    }
    Ok(out)
}

/// Independent validation of a claimed witness: (2,2) bounds, acyclic,
/// the representative induced on the first k vertices, and a chordal
/// phylogeny graph, all through the public code path rather than the
/// search's fast kernels.
pub fn verify_witness(representative: &Digraph, witness: &Digraph) -> bool {
    let k = representative.vertex_count();
    if witness.vertex_count() < k
        || witness.check_degree_bounds(&DegreeBounds::TWO_TWO).is_err()
        || !witness.is_acyclic()
    {
        return false;
    }
    let cycle_vertices: Vec<u32> = (0..k as u32).collect();
    let (induced, _) = witness
        .induced_subdigraph(&cycle_vertices)
        .expect("vertex range checked");
    if induced.arcs() != representative.arcs() {
        return false;
    }
    is_chordal_bool(&phylogeny_graph(witness).expect("witness is acyclic"))
}

/// Breadth-first witness search over the number of added vertices.
///
/// Only reduced extensions are generated: every added vertex feeds on
/// exactly two vertices that are neither adjacent nor already competing.
/// An added vertex failing that can be stripped from any witness without
/// breaking it, so the reduction preserves existence; added vertices are
/// taken in topological order among themselves. Out-arcs from added
/// vertices back into the cycle are enumerated exhaustively. Once every
/// feeding pair is fixed, so is the restriction of the phylogeny graph
/// to the cycle, and branches whose restriction is not chordal are cut.
fn find_witness(representative: &Digraph, extra_vertices: u32) -> Option<Digraph> {
    let k = representative.vertex_count();
    let base = DenseDigraph::from_digraph(representative);
    for extras in 0..=extra_vertices as usize {
        if k + extras > DENSE_CAP {
            break;
        }
        let mut search = WitnessSearch {
            k,
            n: k + extras,
            rep: representative,
            found: None,
        };
        let mut d = base;
        d.n = k + extras;
        search.choose_feeds(&mut d, k);
        if let Some(found) = search.found {
            return Some(found);
        }
    }
    None
}

struct WitnessSearch<'a> {
    k: usize,
    n: usize,
    rep: &'a Digraph,
    found: Option<Digraph>,
}

impl WitnessSearch<'_> {
    /// Assigns each added vertex its two in-neighbours, ascending.
    fn choose_feeds(&mut self, d: &mut DenseDigraph, v: usize) {
        if self.found.is_some() {
            return;
        }
        if v == self.n {
            // The restriction of the phylogeny graph to the cycle is now
            // fixed; give up early unless it is chordal.
            let adj = d.moral_adj();
            if !is_chordal_masks(&adj, full_mask(self.k)) {
                return;
            }
            self.choose_returns(d, self.k);
            return;
        }
        for a in 0..v {
            if d.out_degree(a) >= 2 {
                continue;
            }
            for b in a + 1..v {
                if d.out_degree(b) >= 2 {
                    continue;
                }
                // The feeding pair must compete freshly: not adjacent and
                // not already sharing prey.
                if d.out[a] & (1 << b) != 0 || d.inn[a] & (1 << b) != 0 {
                    continue;
                }
                if d.out[a] & d.out[b] != 0 {
                    continue;
                }
                d.add_arc(a, v);
                d.add_arc(b, v);
                self.choose_feeds(d, v + 1);
                d.remove_arc(a, v);
                d.remove_arc(b, v);
                if self.found.is_some() {
                    return;
                }
            }
        }
    }

    /// Enumerates out-arcs from added vertices back into the cycle, then
    /// tests each complete candidate.
    fn choose_returns(&mut self, d: &mut DenseDigraph, v: usize) {
        if self.found.is_some() {
            return;
        }
        if v == self.n {
            self.test_candidate(d);
            return;
        }
        let spare = 2u32.saturating_sub(d.out_degree(v));
        self.pick_returns(d, v, 0, spare);
    }

    fn pick_returns(&mut self, d: &mut DenseDigraph, v: usize, from: usize, spare: u32) {
        self.choose_returns(d, v + 1);
        if self.found.is_some() || spare == 0 {
            return;
        }
        for c in from..self.k {
            if d.in_degree(c) >= 2 || d.out[v] & (1 << c) != 0 || d.inn[v] & (1 << c) != 0 {
                continue;
            }
            d.add_arc(v, c);
            self.pick_returns(d, v, c + 1, spare - 1);
            d.remove_arc(v, c);
            if self.found.is_some() {
                return;
            }
        }
    }

    fn test_candidate(&mut self, d: &DenseDigraph) {
        if !d.is_acyclic() {
            return;
        }
        let adj = d.moral_adj();
        if !is_chordal_masks(&adj, full_mask(self.n)) {
            return;
        }
        // The fast kernels found a candidate; keep it only if the full
        // re-check through the public path agrees.
        let digraph = d.to_digraph();
        if verify_witness(self.rep, &digraph) {
            self.found = Some(digraph);
        }
    }
}

/// The transcribed catalog: the five orientations of the six-cycle with
/// no chordal-phylogeny extension. Cycles of length at least 7 are
/// forbidden by the length rule and carry no catalog entries.
pub fn forbidden_catalog() -> Vec<OrientationClass> {
    parse_catalog(include_str!("../fixtures/forbidden_six_cycles.txt"))
        .expect("bundled catalog parses")
}

fn parse_catalog(text: &str) -> Result<Vec<OrientationClass>, String> {
    let mut classes = Vec::new();
    let mut k: Option<usize> = None;
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    fn flush(
        classes: &mut Vec<OrientationClass>,
        k: &mut Option<usize>,
        arcs: &mut Vec<(u32, u32)>,
    ) -> Result<(), String> {
        if let Some(len) = k.take() {
            let d = Digraph::new(len, arcs).map_err(|e| e.to_string())?;
            if !d.is_acyclic() {
                return Err("catalog pattern is not acyclic".into());
            }
            let u = d.underlying_graph();
            if u.edge_count() != len || enumerate_holes_with_cap(&u, len).unwrap().len() != 1 {
                return Err("catalog pattern is not a cycle orientation".into());
            }
            let canonical = canonical_form(&d).map_err(|e| e.to_string())?;
            classes.push(OrientationClass {
                length: len,
                representative: d,
                canonical,
                status: None,
            });
            arcs.clear();
        }
        Ok(())
    }
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            flush(&mut classes, &mut k, &mut arcs)?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("k ") {
            flush(&mut classes, &mut k, &mut arcs)?;
            k = Some(rest.trim().parse::<usize>().map_err(|e| e.to_string())?);
        } else {
            let mut it = line.split_whitespace();
            let tail = it
                .next()
                .ok_or("missing tail")?
                .parse::<u32>()
                .map_err(|e| e.to_string())?;
            let head = it
                .next()
                .ok_or("missing head")?
                .parse::<u32>()
                .map_err(|e| e.to_string())?;
            arcs.push((tail, head));
        }
    }
    flush(&mut classes, &mut k, &mut arcs)?;
    Ok(classes)
}

/// A vertex set of `D` inducing a forbidden pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenMatch {
    /// Vertices of the hole in the underlying graph, ascending.
    pub vertices: Vec<u32>,
    /// The catalog entry matched, or a fresh class under the length rule.
    pub class: OrientationClass,
}

/// Every vertex subset of `D` inducing a catalog pattern or an
/// orientation of a chordless cycle of length at least 7. A non-empty
/// result certifies that the phylogeny graph of a (2,2) digraph `D` is
/// not chordal.
pub fn scan_forbidden_induced(d: &Digraph) -> Result<Vec<ForbiddenMatch>, OrientationError> {
    match d.topological_order() {
        TopologicalSort::Order(_) => {}
        TopologicalSort::Cycle(c) => return Err(OrientationError::NotAcyclic(c)),
    }
    let u = d.underlying_graph();
    let holes =
        enumerate_holes_with_cap(&u, u.vertex_count()).expect("cap equals the vertex count");
    if holes.iter().any(|h| h.len() > CANONICAL_VERTEX_CAP) {
        return Err(OrientationError::CostGuardExceeded(format!(
            "hole longer than {CANONICAL_VERTEX_CAP} vertices"
        )));
    }
    let catalog = forbidden_catalog();
    let mut matches = Vec::new();
    for hole in holes {
        if hole.len() < 6 {
            continue;
        }
        let mut vertices: Vec<u32> = hole.vertices().to_vec();
        vertices.sort_unstable();
        let (induced, _) = d
            .induced_subdigraph(&vertices)
            .expect("hole vertices in range");
        let form = canonical_form(&induced).expect("length checked against the cap");
        if hole.len() >= MIN_FORBIDDEN_HOLE_LENGTH {
            matches.push(ForbiddenMatch {
                vertices,
                class: OrientationClass {
                    length: hole.len(),
                    representative: induced,
                    canonical: form,
                    status: Some(OrientationStatus::ForbiddenByLength),
                },
            });
            continue;
        }
        // Length exactly 6: compare against the catalog up to isomorphism.
        if let Some(entry) = catalog.iter().find(|c| c.canonical == form) {
            matches.push(ForbiddenMatch {
                vertices,
                class: entry.clone(),
            });
        }
    }
    Ok(matches)
}

/// Visits every extension of a cycle orientation by up to `max_extras`
/// vertices and any arcs incident to them that keep the digraph acyclic,
/// within the bounds, and the cycle induced. Universal sweeps need every
/// such digraph, so no reduction is applied here.
pub(crate) fn for_each_cycle_extension<F>(
    representative: &Digraph,
    max_extras: usize,
    bounds: &DegreeBounds,
    f: &mut F,
) where
    F: FnMut(&DenseDigraph),
{
    let k = representative.vertex_count();
    let base = DenseDigraph::from_digraph(representative);
    for extras in 0..=max_extras {
        if k + extras > DENSE_CAP {
            break;
        }
        let mut ext = Extender {
            k,
            n: k + extras,
            bounds: *bounds,
            f,
        };
        let mut d = base;
        d.n = k + extras;
        ext.next_vertex(&mut d, k);
    }
}

struct Extender<'a, F> {
    k: usize,
    n: usize,
    bounds: DegreeBounds,
    f: &'a mut F,
}

impl<F: FnMut(&DenseDigraph)> Extender<'_, F> {
    fn next_vertex(&mut self, d: &mut DenseDigraph, v: usize) {
        if v == self.n {
            if d.is_acyclic() {
                (self.f)(d);
            }
            return;
        }
        self.grow_in_set(d, v, 0, self.bounds.max_in());
    }

    /// In-arcs of the added vertex v come from any earlier vertex; arcs
    /// between added vertices only run forward, which covers every
    /// isomorphism class.
    fn grow_in_set(&mut self, d: &mut DenseDigraph, v: usize, from: usize, room: u32) {
        self.grow_out_set(
            d,
            v,
            0,
            self.bounds.max_out().saturating_sub(d.out_degree(v)),
        );
        if room == 0 {
            return;
        }
        for u in from..v {
            if d.out_degree(u) >= self.bounds.max_out() {
                continue;
            }
            d.add_arc(u, v);
            self.grow_in_set(d, v, u + 1, room - 1);
            d.remove_arc(u, v);
        }
    }

    /// Out-arcs of the added vertex v point into the cycle only; arcs to
    /// later added vertices are those vertices' in-arcs.
    fn grow_out_set(&mut self, d: &mut DenseDigraph, v: usize, from: usize, room: u32) {
        self.next_vertex(d, v + 1);
        if room == 0 {
            return;
        }
        for c in from..self.k {
            if d.in_degree(c) >= self.bounds.max_in()
                || d.out[v] & (1 << c) != 0
                || d.inn[v] & (1 << c) != 0
            {
                continue;
            }
            d.add_arc(v, c);
            self.grow_out_set(d, v, c + 1, room - 1);
            d.remove_arc(v, c);
        }
    }
}
