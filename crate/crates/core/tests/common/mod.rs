//! Independent oracles and corpus generators shared by the test suites.
//! Everything here recomputes results from first principles, away from
//! the library's own code paths.

#![allow(dead_code)]

use phylograph::{Digraph, SimpleGraph};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Orbit count of acyclic orientations of the k-cycle under rotations
/// and reflections (which reverse edge directions), by the orbit-count
/// lemma. Orientation strings set bit e when edge {e, e+1 mod k} points
/// forward; the two constant strings are the directed cycles.
pub fn burnside_acyclic_orientations(k: usize) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let k64 = k as u64;
    let mut fixed: u64 = (0..k64).map(|i| 1u64 << gcd(i, k64)).sum();
    if k.is_multiple_of(2) {
        // Reflections through opposite vertices pair the edges into k/2
        // swaps, each forcing complementary bits; reflections through
        // edge midpoints fix an edge and so fix no string.
        fixed += (k64 / 2) * (1u64 << (k / 2));
    }
    fixed / (2 * k64) - 1
}

/// Cubic-time competition graph: edge uv iff some w receives arcs from
/// both u and v.
pub fn competition_oracle(d: &Digraph) -> SimpleGraph {
    let n = d.vertex_count();
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            let mut related = false;
            for w in 0..n as u32 {
                if d.has_arc(u, w) && d.has_arc(v, w) {
                    related = true;
                }
            }
            if related {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::new(n, &edges).unwrap()
}

/// Every simple cycle of g, length at least 3, each exactly once
/// (least vertex first, lesser neighbour second). Exponential; test
/// inputs stay small.
pub fn all_simple_cycles(g: &SimpleGraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut path: Vec<u32> = Vec::new();

    fn grow(g: &SimpleGraph, path: &mut Vec<u32>, cycles: &mut Vec<Vec<u32>>) {
        let v0 = path[0];
        let last = *path.last().unwrap();
        let nbrs: Vec<u32> = g.neighbors(last).collect();
        for u in nbrs {
            if u == v0 && path.len() >= 3 && path[1] < last {
                cycles.push(path.clone());
            }
            if u > v0 && !path.contains(&u) {
                path.push(u);
                grow(g, path, cycles);
                path.pop();
            }
        }
    }

    for v0 in 0..n as u32 {
        path.clear();
        path.push(v0);
        grow(g, &mut path, &mut cycles);
    }
    cycles
}

pub fn has_cycle_of_length(g: &SimpleGraph, len: usize) -> bool {
    all_simple_cycles(g).iter().any(|c| c.len() == len)
}

/// Random simple graph with the given edge probability.
pub fn random_graph(seed: u64, n: usize, p: f64) -> SimpleGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::new(n, &edges).unwrap()
}

/// Random chordal graph: each vertex attaches to a clique of what came
/// before (grown greedily from a random start), so the reverse insertion
/// order eliminates perfectly.
pub fn random_chordal_graph(seed: u64, n: usize) -> SimpleGraph {
    random_chordal_with_degree_cap(seed, n, u32::MAX)
}

/// As [`random_chordal_graph`] but never raising a degree above the cap.
/// Attachment favours recent vertices, which produces the strip-like
/// graphs where long cycles actually fit under a small degree cap.
pub fn random_chordal_with_degree_cap(seed: u64, n: usize, max_degree: u32) -> SimpleGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut degree = vec![0u32; n];
    let has_edge = |edges: &Vec<(u32, u32)>, a: u32, b: u32| edges.contains(&(a.min(b), a.max(b)));
    for v in 1..n as u32 {
        let local = rng.gen_bool(0.75);
        let low = if local { v.saturating_sub(4) } else { 0 };
        let mut candidates: Vec<u32> = (low..v)
            .filter(|&u| degree[u as usize] < max_degree)
            .collect();
        candidates.shuffle(&mut rng);
        let want = rng.gen_range(1..=2.min(candidates.len().max(1)));
        let mut clique: Vec<u32> = Vec::new();
        for &u in &candidates {
            if clique.len() >= want {
                break;
            }
            if clique.iter().all(|&c| has_edge(&edges, c, u)) {
                clique.push(u);
            }
        }
        for &u in &clique {
            if degree[v as usize] >= max_degree {
                break;
            }
            edges.push((u.min(v), u.max(v)));
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
    }
    SimpleGraph::new(n, &edges).unwrap()
}

/// Square of a path: edges between indices at distance 1 or 2. Chordal,
/// maximum degree 4, and full of 7-cycles once n reaches 7.
pub fn path_square(n: usize) -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..n as u32 {
        for d in 1..=2u32 {
            if i + d < n as u32 {
                edges.push((i, i + d));
            }
        }
    }
    SimpleGraph::new(n, &edges).unwrap()
}

/// Random acyclic digraph without degree bounds: forward arcs over a
/// shuffled vertex order.
pub fn random_dag(seed: u64, n: usize, p: f64) -> Digraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push((order[i], order[j]));
            }
        }
    }
    Digraph::new(n, &arcs).unwrap()
}

/// Random digraph that may contain directed cycles.
pub fn random_arc_soup(seed: u64, n: usize, p: f64) -> Digraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::new(n, &arcs).unwrap()
}

pub fn random_permutation(seed: u64, n: usize) -> Vec<u32> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(&mut rng);
    perm
}

pub fn permute_digraph(d: &Digraph, perm: &[u32]) -> Digraph {
    let arcs: Vec<(u32, u32)> = d
        .arcs()
        .iter()
        .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
        .collect();
    Digraph::new(d.vertex_count(), &arcs).unwrap()
}
