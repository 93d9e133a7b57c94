//! Sweeps (i,j) digraphs, exhaustively or at random, runs the theorem
//! suite over them, and hunts the two phenomena that break the naive
//! hole-counting expectation.
//!
//! Exhaustive generation emits arcs only from lower to higher index,
//! which reaches every isomorphism class exactly once per sorted
//! labelling; canonical dedup optionally collapses the rest. Checking is
//! parallel over chunks with an ordered merge, so reports do not depend
//! on the worker count.

use crate::canon::canonical_form;
use crate::chordal::{enumerate_holes_with_cap, is_chordal, is_chordal_bool};
use crate::dense::{
    all_holes_are_squares, full_mask, has_hole_of_len, is_chordal_masks, DenseDigraph, Mask,
    DENSE_CAP,
};
use crate::graph::{DegreeBounds, Digraph, SimpleGraph};
use crate::hole_map::{verify_hole_correspondence_with_cap, CORRESPONDENCE_VERTEX_CAP};
use crate::orientations::{enumerate_cycle_orientations, for_each_cycle_extension};
use crate::phylogeny::{care_bound_check, phylogeny_graph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Largest vertex count for exhaustive sweeps.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 7;
/// Largest vertex count for random sweeps.
pub const RANDOM_VERTEX_LIMIT: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifierError {
    #[error("exhaustive sweeps support at most {EXHAUSTIVE_VERTEX_LIMIT} vertices, got {0}")]
    ExhaustiveTooLarge(usize),
    #[error("random sweeps support at most {RANDOM_VERTEX_LIMIT} vertices, got {0}")]
    RandomTooLarge(usize),
    #[error("counterexample search supports at most 12 vertices, got {0}")]
    SearchTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Random,
}

/// What to sweep: all (i,j) digraphs on `n` vertices, or a seeded sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepScope {
    pub mode: SweepMode,
    pub n: usize,
    pub bounds: DegreeBounds,
    /// Collapse isomorphic digraphs via canonical forms.
    pub dedup: bool,
    /// Random mode only.
    pub sample_count: u64,
    /// Random mode only.
    pub seed: u64,
}

impl SweepScope {
    pub fn exhaustive(n: usize, bounds: DegreeBounds) -> SweepScope {
        SweepScope {
            mode: SweepMode::Exhaustive,
            n,
            bounds,
            dedup: false,
            sample_count: 0,
            seed: 0,
        }
    }

    pub fn random(n: usize, bounds: DegreeBounds, sample_count: u64, seed: u64) -> SweepScope {
        SweepScope {
            mode: SweepMode::Random,
            n,
            bounds,
            dedup: false,
            sample_count,
            seed,
        }
    }

    pub fn with_dedup(mut self) -> SweepScope {
        self.dedup = true;
        self
    }

    fn validate(&self) -> Result<(), VerifierError> {
        match self.mode {
            SweepMode::Exhaustive if self.n > EXHAUSTIVE_VERTEX_LIMIT => {
                Err(VerifierError::ExhaustiveTooLarge(self.n))
            }
            SweepMode::Random if self.n > RANDOM_VERTEX_LIMIT => {
                Err(VerifierError::RandomTooLarge(self.n))
            }
            // Dedup needs canonical forms, which are capped.
            SweepMode::Random if self.dedup && self.n > crate::canon::CANONICAL_VERTEX_CAP => {
                Err(VerifierError::RandomTooLarge(self.n))
            }
            _ => Ok(()),
        }
    }
}

/// Deterministic iterator over the digraphs of a scope.
pub fn enumerate_digraphs(scope: &SweepScope) -> Result<DigraphIter, VerifierError> {
    scope.validate()?;
    Ok(DigraphIter::new(scope.clone()))
}

enum IterState {
    Exhaustive(ForwardEnumerator),
    Random { next: u64 },
    Done,
}

pub struct DigraphIter {
    scope: SweepScope,
    state: IterState,
    seen: HashSet<crate::canon::CanonicalForm>,
}

impl DigraphIter {
    fn new(scope: SweepScope) -> DigraphIter {
        let state = match scope.mode {
            SweepMode::Exhaustive => {
                IterState::Exhaustive(ForwardEnumerator::new(scope.n, &scope.bounds))
            }
            SweepMode::Random => IterState::Random { next: 0 },
        };
        DigraphIter {
            scope,
            state,
            seen: HashSet::new(),
        }
    }
}

impl Iterator for DigraphIter {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        loop {
            let d = match &mut self.state {
                IterState::Exhaustive(en) => match en.next() {
                    Some(d) => d,
                    None => {
                        self.state = IterState::Done;
                        return None;
                    }
                },
                IterState::Random { next } => {
                    if *next >= self.scope.sample_count {
                        self.state = IterState::Done;
                        return None;
                    }
                    let sample_seed = self.scope.seed.wrapping_add(*next);
                    *next += 1;
                    random_digraph(self.scope.n, &self.scope.bounds, sample_seed)
                }
                IterState::Done => return None,
            };
            if self.scope.dedup {
                let form = canonical_form(&d).expect("sweep sizes stay below the canonical cap");
                if !self.seen.insert(form) {
                    continue;
                }
            }
            return Some(d);
        }
    }
}

/// Odometer over per-vertex in-neighbour masks, arcs forward only.
struct ForwardEnumerator {
    n: usize,
    max_out: u32,
    /// Per vertex, the in-masks within the indegree bound, ascending.
    choices: Vec<Vec<u32>>,
    /// Current choice index per vertex; empty mask is index 0.
    idx: Vec<usize>,
    outdeg: Vec<u32>,
    started: bool,
    done: bool,
}

impl ForwardEnumerator {
    fn new(n: usize, bounds: &DegreeBounds) -> ForwardEnumerator {
        let choices: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                (0u32..(1 << v))
                    .filter(|m| m.count_ones() <= bounds.max_in())
                    .collect()
            })
            .collect();
        ForwardEnumerator {
            n,
            max_out: bounds.max_out(),
            choices,
            idx: vec![0; n],
            outdeg: vec![0; n],
            started: false,
            done: false,
        }
    }

    fn apply(&mut self, v: usize, add: bool) {
        let mask = self.choices[v][self.idx[v]];
        for u in 0..v {
            if mask & (1 << u) != 0 {
                if add {
                    self.outdeg[u] += 1;
                } else {
                    self.outdeg[u] -= 1;
                }
            }
        }
    }

    fn mask_fits(&self, v: usize) -> bool {
        let mask = self.choices[v][self.idx[v]];
        (0..v).all(|u| mask & (1 << u) == 0 || self.outdeg[u] < self.max_out)
    }

    fn materialize(&self) -> Digraph {
        let mut arcs = Vec::new();
        for v in 0..self.n {
            let mask = self.choices[v][self.idx[v]];
            for u in 0..v {
                if mask & (1 << u) != 0 {
                    arcs.push((u as u32, v as u32));
                }
            }
        }
        Digraph::new(self.n, &arcs).expect("forward arcs are simple")
    }

    fn next(&mut self) -> Option<Digraph> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            // All-empty masks are always valid.
            return Some(self.materialize());
        }
        if self.n == 0 {
            self.done = true;
            return None;
        }
        let mut v = self.n - 1;
        loop {
            self.apply(v, false);
            loop {
                self.idx[v] += 1;
                if self.idx[v] >= self.choices[v].len() {
                    break;
                }
                if self.mask_fits(v) {
                    self.apply(v, true);
                    // Deeper vertices already sit at the empty mask.
                    return Some(self.materialize());
                }
            }
            self.idx[v] = 0; // empty mask, no contributions
            if v == 0 {
                self.done = true;
                return None;
            }
            v -= 1;
        }
    }
}

/// Seeded quasi-uniform (i,j) digraph: a random topological order with
/// forward arcs accepted at a probability tuned to the bounds, greedily
/// rejecting bound violations. A coverage tool, not a uniform sampler.
pub fn random_digraph(n: usize, bounds: &DegreeBounds, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let mut indeg = vec![0u32; n];
    let mut outdeg = vec![0u32; n];
    let mut arcs = Vec::new();
    let p = if n > 1 {
        let mean = (bounds.max_in() + bounds.max_out()) as f64 / 2.0;
        (1.3 * mean / (n - 1) as f64).min(1.0)
    } else {
        0.0
    };
    for i in 0..n {
        for j in i + 1..n {
            let (tail, head) = (order[i], order[j]);
            if rng.gen_bool(p)
                && outdeg[tail as usize] < bounds.max_out()
                && indeg[head as usize] < bounds.max_in()
            {
                outdeg[tail as usize] += 1;
                indeg[head as usize] += 1;
                arcs.push((tail, head));
            }
        }
    }
    Digraph::new(n, &arcs).expect("forward arcs along a permutation are simple")
}

/// The theorem checks the suite can run per digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    /// Clique number of P(D) stays at most 4.
    K5Free,
    /// A hole of length >= 7 in U(D) forces P(D) non-chordal.
    LongHole,
    /// U(D) chordal forces P(D) chordal.
    ChordalSufficiency,
    /// Cared-edge capacities: no carer over i(i-1)/2 edges, no vertex
    /// incident to more than i(i-1)j/2 cared edges.
    CareBounds,
    /// Hole correspondence: phi total, injective assignment, counts.
    HoleCorrespondence,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::K5Free,
        CheckKind::LongHole,
        CheckKind::ChordalSufficiency,
        CheckKind::CareBounds,
        CheckKind::HoleCorrespondence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::K5Free => "k5",
            CheckKind::LongHole => "long_hole",
            CheckKind::ChordalSufficiency => "chordal_suff",
            CheckKind::CareBounds => "care_bounds",
            CheckKind::HoleCorrespondence => "hole_corr",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.iter().copied().find(|k| k.name() == name)
    }
}

/// A digraph failing a check, with a human-readable reason. Re-running
/// the check on the digraph reproduces the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub digraph: Digraph,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub kind: CheckKind,
    pub passes: u64,
    pub failures: u64,
    pub first_counterexample: Option<Counterexample>,
}

/// Tallies for one sweep.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub scope: SweepScope,
    pub digraphs_checked: u64,
    pub checks: Vec<CheckOutcome>,
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn total_failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn outcome(&self, kind: CheckKind) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.kind == kind)
    }
}

/// Runs one check against one digraph; `Err` carries the failure detail.
pub fn run_check(kind: CheckKind, d: &Digraph, bounds: &DegreeBounds) -> Result<(), String> {
    match kind {
        CheckKind::K5Free => {
            let p = phylogeny_graph(d).map_err(|e| e.to_string())?;
            match find_clique_of_size(&p, 5) {
                None => Ok(()),
                Some(clique) => Err(format!("phylogeny graph contains K5 on {clique:?}")),
            }
        }
        CheckKind::LongHole => {
            let u = d.underlying_graph();
            let holes = enumerate_holes_with_cap(&u, u.vertex_count()).expect("cap matches");
            let longest = holes.iter().map(|h| h.len()).max().unwrap_or(0);
            if longest < 7 {
                return Ok(());
            }
            let p = phylogeny_graph(d).map_err(|e| e.to_string())?;
            if is_chordal_bool(&p) {
                Err(format!(
                    "underlying graph has a hole of length {longest} yet the phylogeny graph is chordal"
                ))
            } else {
                Ok(())
            }
        }
        CheckKind::ChordalSufficiency => {
            if !is_chordal_bool(&d.underlying_graph()) {
                return Ok(());
            }
            let p = phylogeny_graph(d).map_err(|e| e.to_string())?;
            match is_chordal(&p).hole() {
                None => Ok(()),
                Some(h) => Err(format!(
                    "underlying graph chordal but phylogeny graph has hole {:?}",
                    h.vertices()
                )),
            }
        }
        CheckKind::CareBounds => {
            let report = care_bound_check(d, bounds).map_err(|e| e.to_string())?;
            match report.violation {
                None => Ok(()),
                Some(v) => Err(format!("cared-edge capacity exceeded: {v:?}")),
            }
        }
        CheckKind::HoleCorrespondence => {
            if d.vertex_count() > CORRESPONDENCE_VERTEX_CAP
                || d.check_degree_bounds(&DegreeBounds::TWO_TWO).is_err()
            {
                return Ok(()); // out of the statement's scope
            }
            let report = verify_hole_correspondence_with_cap(d, CORRESPONDENCE_VERTEX_CAP)
                .map_err(|e| e.to_string())?;
            if !report.hypotheses.met() {
                return Ok(()); // hypotheses unmet, nothing to assert
            }
            if !report.count_ok {
                return Err(format!(
                    "{} holes in P(D) but only {} in U(D)",
                    report.holes_p.len(),
                    report.holes_u.len()
                ));
            }
            if !report.injective {
                return Err("no injective assignment of P-holes to U-holes".into());
            }
            Ok(())
        }
    }
}

/// Sweeps the scope and tallies every requested check. Chunks are
/// processed in parallel and merged in stream order, so tallies and
/// first counterexamples are identical for any worker count.
pub fn run_suite(scope: &SweepScope, checks: &[CheckKind]) -> Result<SuiteReport, VerifierError> {
    let started = Instant::now();
    let mut iter = enumerate_digraphs(scope)?;
    let mut outcomes: Vec<CheckOutcome> = checks
        .iter()
        .map(|&kind| CheckOutcome {
            kind,
            passes: 0,
            failures: 0,
            first_counterexample: None,
        })
        .collect();
    let mut digraphs_checked = 0u64;
    const CHUNK: usize = 1024;
    loop {
        let chunk: Vec<Digraph> = iter.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Vec<Result<(), String>>> = chunk
            .par_iter()
            .map(|d| {
                checks
                    .iter()
                    .map(|&kind| run_check(kind, d, &scope.bounds))
                    .collect()
            })
            .collect();
        for (d, per_check) in chunk.iter().zip(results) {
            digraphs_checked += 1;
            for (outcome, result) in outcomes.iter_mut().zip(per_check) {
                match result {
                    Ok(()) => outcome.passes += 1,
                    Err(detail) => {
                        outcome.failures += 1;
                        if outcome.first_counterexample.is_none() {
                            outcome.first_counterexample = Some(Counterexample {
                                digraph: d.clone(),
                                detail,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        scope: scope.clone(),
        digraphs_checked,
        checks: outcomes,
        wall_time: started.elapsed(),
    })
}

/// A clique of the requested size, if any, by branch and bound over
/// neighbourhoods.
fn find_clique_of_size(g: &SimpleGraph, size: usize) -> Option<Vec<u32>> {
    fn grow(
        g: &SimpleGraph,
        size: usize,
        clique: &mut Vec<u32>,
        candidates: &[u32],
    ) -> Option<Vec<u32>> {
        if clique.len() == size {
            return Some(clique.clone());
        }
        if clique.len() + candidates.len() < size {
            return None;
        }
        for (i, &v) in candidates.iter().enumerate() {
            clique.push(v);
            let narrowed: Vec<u32> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.has_edge(v, w))
                .collect();
            if let Some(found) = grow(g, size, clique, &narrowed) {
                return Some(found);
            }
            clique.pop();
        }
        None
    }
    let all: Vec<u32> = (0..g.vertex_count() as u32).collect();
    grow(g, size, &mut Vec::new(), &all)
}

/// Result of sweeping every extension of every orientation of one cycle
/// length: the phylogeny graph must come out non-chordal, both in full
/// and restricted to the cycle.
#[derive(Debug, Clone)]
pub struct ExtensionSweep {
    pub cycle_length: usize,
    pub classes: usize,
    pub extensions_checked: u64,
    pub first_violation: Option<Counterexample>,
}

/// Extends every acyclic orientation of the k-cycle by up to
/// `max_extras` vertices and any admissible arcs, keeping the cycle
/// induced, and checks that the phylogeny graph is never chordal, nor
/// its restriction to the cycle. Classes run in parallel; results merge
/// in class order.
pub fn long_hole_extension_sweep(
    cycle_length: usize,
    max_extras: usize,
) -> Result<ExtensionSweep, crate::orientations::OrientationError> {
    let classes = enumerate_cycle_orientations(cycle_length)?;
    let per_class: Vec<(u64, Option<Counterexample>)> = classes
        .par_iter()
        .map(|class| {
            let k = class.representative.vertex_count();
            let mut checked = 0u64;
            let mut violation: Option<Counterexample> = None;
            for_each_cycle_extension(
                &class.representative,
                max_extras,
                &DegreeBounds::TWO_TWO,
                &mut |dense: &DenseDigraph| {
                    checked += 1;
                    if violation.is_some() {
                        return;
                    }
                    let adj = dense.moral_adj();
                    let restricted_chordal = is_chordal_masks(&adj, full_mask(k));
                    let full_chordal = is_chordal_masks(&adj, full_mask(dense.n));
                    if restricted_chordal || full_chordal {
                        let d = dense.to_digraph();
                        let detail = if full_chordal {
                            "phylogeny graph of the extension is chordal".to_string()
                        } else {
                            "phylogeny graph restricted to the cycle is chordal".to_string()
                        };
                        violation = Some(Counterexample { digraph: d, detail });
                    }
                },
            );
            (checked, violation)
        })
        .collect();
    let mut sweep = ExtensionSweep {
        cycle_length,
        classes: classes.len(),
        extensions_checked: 0,
        first_violation: None,
    };
    for (checked, violation) in per_class {
        sweep.extensions_checked += checked;
        if sweep.first_violation.is_none() {
            sweep.first_violation = violation;
        }
    }
    Ok(sweep)
}

/// A digraph exhibiting one of the two counterexample phenomena, with
/// its hole certificates.
#[derive(Debug, Clone)]
pub struct HoleCounterexample {
    pub digraph: Digraph,
    pub holes_u: Vec<crate::chordal::Hole>,
    pub holes_p: Vec<crate::chordal::Hole>,
    pub detail: String,
    /// Wall time from the start of the search to this finding.
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct HoleCounterexamples {
    /// Every hole of U(D) is a square, yet P(D) has a hole of length 6.
    pub square_holes_only: Option<HoleCounterexample>,
    /// Two vertex-overlapping holes of P(D) share their image hole in
    /// U(D), candidate sets included.
    pub shared_image: Option<HoleCounterexample>,
    pub digraphs_examined: u64,
}

/// Hunts both phenomena: exhaustively over small vertex counts within
/// the budget, then by seeded random sampling up to `max_n`. An empty
/// result is valid; the search is deterministic for fixed arguments.
pub fn find_hole_counterexamples(
    max_n: usize,
    budget: u64,
    seed: u64,
) -> Result<HoleCounterexamples, VerifierError> {
    if max_n > 12 {
        return Err(VerifierError::SearchTooLarge(max_n));
    }
    let started = Instant::now();
    let mut findings = HoleCounterexamples::default();
    let mut budget = budget;

    // Overlapping-hole phenomenon: exhaustive while small.
    for n in 4..=max_n.min(EXHAUSTIVE_VERTEX_LIMIT) {
        if findings.shared_image.is_some() || budget == 0 {
            break;
        }
        let scope = SweepScope::exhaustive(n, DegreeBounds::TWO_TWO);
        let iter = enumerate_digraphs(&scope).expect("validated");
        for d in iter {
            if budget == 0 {
                break;
            }
            budget -= 1;
            findings.digraphs_examined += 1;
            if let Some(finding) = check_shared_image(&d, started) {
                findings.shared_image = Some(finding);
                break;
            }
        }
    }

    // Square-holes-only phenomenon: exhaustive with subtree pruning.
    for n in 6..=max_n.min(9) {
        if findings.square_holes_only.is_some() || budget == 0 {
            break;
        }
        let mut scan = SquareScan {
            budget: &mut budget,
            examined: &mut findings.digraphs_examined,
            found: None,
            started,
        };
        scan.run(n);
        if let Some(finding) = scan.found {
            findings.square_holes_only = Some(finding);
        }
    }

    // Random fallback for anything still missing.
    let mut sample = 0u64;
    while budget > 0 && (findings.square_holes_only.is_none() || findings.shared_image.is_none()) {
        if max_n < 8 {
            break;
        }
        let n = 8 + (sample as usize % (max_n - 7));
        let d = random_digraph(n, &DegreeBounds::TWO_TWO, seed.wrapping_add(sample));
        sample += 1;
        budget -= 1;
        findings.digraphs_examined += 1;
        if findings.square_holes_only.is_none() {
            if let Some(f) = check_square_holes_only(&d, started) {
                findings.square_holes_only = Some(f);
            }
        }
        if findings.shared_image.is_none() && d.vertex_count() <= CORRESPONDENCE_VERTEX_CAP {
            if let Some(f) = check_shared_image(&d, started) {
                findings.shared_image = Some(f);
            }
        }
    }
    Ok(findings)
}

fn finding_from(d: &Digraph, detail: String, started: Instant) -> HoleCounterexample {
    let u = d.underlying_graph();
    let p = phylogeny_graph(d).expect("search digraphs are acyclic");
    HoleCounterexample {
        digraph: d.clone(),
        holes_u: enumerate_holes_with_cap(&u, u.vertex_count()).expect("cap matches"),
        holes_p: enumerate_holes_with_cap(&p, p.vertex_count()).expect("cap matches"),
        detail,
        elapsed: started.elapsed(),
    }
}

/// Every hole of U(D) is a square but P(D) has a 6-hole.
fn check_square_holes_only(d: &Digraph, started: Instant) -> Option<HoleCounterexample> {
    if d.vertex_count() > DENSE_CAP {
        return None;
    }
    let dense = DenseDigraph::from_digraph(d);
    let full = full_mask(dense.n);
    let u = dense.underlying_adj();
    if !all_holes_are_squares(&u, dense.n, full) {
        return None;
    }
    let p = dense.moral_adj();
    if !has_hole_of_len(&p, dense.n, full, 6) {
        return None;
    }
    Some(finding_from(
        d,
        "every underlying hole is a square, yet the phylogeny graph has a 6-hole".into(),
        started,
    ))
}

/// Two overlapping P-holes with identical image and candidate sets.
fn check_shared_image(d: &Digraph, started: Instant) -> Option<HoleCounterexample> {
    if d.vertex_count() > DENSE_CAP {
        return None;
    }
    let dense = DenseDigraph::from_digraph(d);
    let p_adj = dense.moral_adj();
    if is_chordal_masks(&p_adj, full_mask(dense.n)) {
        return None;
    }
    // Cheap overlap filter on dense holes before the full report.
    let mut hole_masks: Vec<Mask> = Vec::new();
    crate::dense::for_each_hole(&p_adj, dense.n, full_mask(dense.n), &mut |cycle| {
        let mut m: Mask = 0;
        for &v in cycle {
            m |= 1 << v;
        }
        hole_masks.push(m);
        ControlFlow::Continue(())
    });
    let overlapping = hole_masks
        .iter()
        .enumerate()
        .any(|(i, &a)| hole_masks[i + 1..].iter().any(|&b| a & b != 0));
    if !overlapping {
        return None;
    }
    let report = verify_hole_correspondence_with_cap(d, CORRESPONDENCE_VERTEX_CAP).ok()?;
    for (i, (hole_a, image_a)) in report.map.iter().enumerate() {
        for (hole_b, image_b) in report.map.iter().skip(i + 1) {
            if !hole_a.shares_vertex_with(hole_b) || image_a != image_b {
                continue;
            }
            let cand_a = &report.candidates.iter().find(|(h, _)| h == hole_a)?.1;
            let cand_b = &report.candidates.iter().find(|(h, _)| h == hole_b)?.1;
            if cand_a == cand_b {
                return Some(finding_from(
                    d,
                    format!(
                        "holes {:?} and {:?} of P(D) overlap and share the image hole {:?}",
                        hole_a.vertices(),
                        hole_b.vertices(),
                        image_a.vertices()
                    ),
                    started,
                ));
            }
        }
    }
    None
}

/// Exhaustive (2,2) enumeration specialised for the square-holes-only
/// hunt. Arcs run forward; once a vertex's in-set is fixed, the
/// underlying graph on the prefix is final, so any prefix hole longer
/// than 4 kills the whole subtree.
struct SquareScan<'a> {
    budget: &'a mut u64,
    examined: &'a mut u64,
    found: Option<HoleCounterexample>,
    started: Instant,
}

impl SquareScan<'_> {
    fn run(&mut self, n: usize) {
        let mut d = DenseDigraph::new(n);
        self.place(&mut d, 1, false, n);
    }

    fn place(&mut self, d: &mut DenseDigraph, v: usize, any_square: bool, n: usize) {
        if self.found.is_some() || *self.budget == 0 {
            return;
        }
        if v == n {
            *self.budget -= 1;
            *self.examined += 1;
            if !any_square {
                return;
            }
            let p = d.moral_adj();
            if has_hole_of_len(&p, n, full_mask(n), 6) {
                let digraph = d.to_digraph();
                // Re-check through the public path before reporting.
                if let Some(f) = check_square_holes_only(&digraph, self.started) {
                    self.found = Some(f);
                }
            }
            return;
        }
        // Empty in-set first, then singletons, then pairs.
        self.place(d, v + 1, any_square, n);
        for a in 0..v {
            if self.found.is_some() || d.out_degree(a) >= 2 {
                continue;
            }
            d.add_arc(a, v);
            self.place(d, v + 1, any_square, n);
            for b in a + 1..v {
                if self.found.is_some() || d.out_degree(b) >= 2 {
                    continue;
                }
                d.add_arc(b, v);
                match self.new_cycles_through(d, v, a, b) {
                    PrefixCycles::LongHole => {}
                    PrefixCycles::Clean { new_square } => {
                        self.place(d, v + 1, any_square || new_square, n);
                    }
                }
                d.remove_arc(b, v);
            }
            d.remove_arc(a, v);
        }
    }

    /// New induced cycles through v run v-a-...-b-v along an induced a-b
    /// path among earlier vertices. A path of two edges adds a square; a
    /// longer one adds a hole that no later arc can chord away.
    fn new_cycles_through(&self, d: &DenseDigraph, v: usize, a: usize, b: usize) -> PrefixCycles {
        let adj = {
            let mut adj = [0 as Mask; DENSE_CAP];
            for (x, row) in adj.iter_mut().enumerate().take(v) {
                *row = (d.out[x] | d.inn[x]) & full_mask(v);
            }
            adj
        };
        if adj[a] & (1 << b) != 0 {
            // Endpoints adjacent: only the triangle v-a-b arises.
            return PrefixCycles::Clean { new_square: false };
        }
        let new_square = adj[a] & adj[b] != 0;
        if self.has_long_induced_path(&adj, v, a, b) {
            PrefixCycles::LongHole
        } else {
            PrefixCycles::Clean { new_square }
        }
    }

    /// Depth-first search for an induced a-b path of three or more edges.
    fn has_long_induced_path(&self, adj: &[Mask; DENSE_CAP], v: usize, a: usize, b: usize) -> bool {
        fn dfs(
            adj: &[Mask; DENSE_CAP],
            b: usize,
            last: usize,
            edges: usize,
            on_path: Mask,
            blocked: Mask,
        ) -> bool {
            let mut cands = adj[last] & !on_path & !blocked;
            while cands != 0 {
                let u = cands.trailing_zeros() as usize;
                cands &= cands - 1;
                if u == b {
                    if edges + 1 >= 3 {
                        return true;
                    }
                    continue;
                }
                if dfs(
                    adj,
                    b,
                    u,
                    edges + 1,
                    on_path | (1 << u),
                    blocked | adj[last] & !(1 << u),
                ) {
                    return true;
                }
            }
            false
        }
        let _ = v;
        dfs(adj, b, a, 0, 1 << a, 0)
    }
}

enum PrefixCycles {
    LongHole,
    Clean { new_square: bool },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_exhaustive_counts() {
        let two = SweepScope::exhaustive(2, DegreeBounds::TWO_TWO);
        let digraphs: Vec<Digraph> = enumerate_digraphs(&two).unwrap().collect();
        assert_eq!(digraphs.len(), 2); // empty and a single forward arc
        let deduped: Vec<Digraph> = enumerate_digraphs(&two.clone().with_dedup())
            .unwrap()
            .collect();
        assert_eq!(deduped.len(), 2);

        let three = SweepScope::exhaustive(3, DegreeBounds::new(1, 1).unwrap()).with_dedup();
        let classes: Vec<Digraph> = enumerate_digraphs(&three).unwrap().collect();
        assert_eq!(classes.len(), 3); // empty, one arc, directed path

        let zero = SweepScope::exhaustive(0, DegreeBounds::TWO_TWO);
        assert_eq!(enumerate_digraphs(&zero).unwrap().count(), 1);
    }

    #[test]
    fn dedup_matches_post_hoc_filtering() {
        let scope = SweepScope::exhaustive(4, DegreeBounds::TWO_TWO);
        let all: Vec<Digraph> = enumerate_digraphs(&scope).unwrap().collect();
        let mut forms: Vec<_> = all.iter().map(|d| canonical_form(d).unwrap()).collect();
        forms.sort();
        forms.dedup();
        let deduped = enumerate_digraphs(&scope.with_dedup()).unwrap().count();
        assert_eq!(deduped, forms.len());
    }

    #[test]
    fn scope_limits() {
        assert!(enumerate_digraphs(&SweepScope::exhaustive(8, DegreeBounds::TWO_TWO)).is_err());
        assert!(enumerate_digraphs(&SweepScope::random(33, DegreeBounds::TWO_TWO, 1, 0)).is_err());
        assert!(find_hole_counterexamples(13, 10, 0).is_err());
    }

    #[test]
    fn random_digraph_is_deterministic_and_valid() {
        let a = random_digraph(5, &DegreeBounds::TWO_TWO, 7);
        let b = random_digraph(5, &DegreeBounds::TWO_TWO, 7);
        assert_eq!(a, b);
        for seed in 0..1000 {
            let d = random_digraph(10, &DegreeBounds::TWO_TWO, seed);
            assert!(d.is_acyclic());
            assert!(d.check_degree_bounds(&DegreeBounds::TWO_TWO).is_ok());
        }
    }

    #[test]
    fn suite_is_clean_on_small_exhaustive_sweeps() {
        let scope = SweepScope::exhaustive(5, DegreeBounds::TWO_TWO);
        let report = run_suite(&scope, &CheckKind::ALL).unwrap();
        assert!(report.digraphs_checked > 0);
        assert_eq!(report.total_failures(), 0, "{report:?}");
    }

    /// Looser bounds break the chordal-sufficiency statement, which
    /// exercises the failure tally and the replay invariant.
    #[test]
    fn failures_are_replayable() {
        let scope = SweepScope::exhaustive(6, DegreeBounds::new(3, 3).unwrap());
        let report = run_suite(&scope, &[CheckKind::ChordalSufficiency]).unwrap();
        let outcome = report.outcome(CheckKind::ChordalSufficiency).unwrap();
        assert!(outcome.failures > 0);
        let cex = outcome.first_counterexample.as_ref().unwrap();
        let replay = run_check(CheckKind::ChordalSufficiency, &cex.digraph, &scope.bounds);
        assert_eq!(replay.unwrap_err(), cex.detail);
    }

    #[test]
    fn parallelism_does_not_change_reports() {
        let scope = SweepScope::exhaustive(5, DegreeBounds::TWO_TWO);
        let sequential = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_suite(&scope, &CheckKind::ALL).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_suite(&scope, &CheckKind::ALL).unwrap());
        assert_eq!(sequential.digraphs_checked, parallel.digraphs_checked);
        for (a, b) in sequential.checks.iter().zip(parallel.checks.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn no_findings_below_six_vertices() {
        let findings = find_hole_counterexamples(4, 1_000_000, 0).unwrap();
        assert!(findings.square_holes_only.is_none());
        assert!(findings.shared_image.is_none());
    }

    #[test]
    fn long_hole_sweep_on_seven_cycle_without_extras() {
        let sweep = long_hole_extension_sweep(7, 0).unwrap();
        assert_eq!(sweep.classes, 9);
        assert!(sweep.first_violation.is_none());
    }
}
