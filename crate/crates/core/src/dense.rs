//! Allocation-free digraph kernels for the enumerative scans.
//!
//! Everything here works on `u16` vertex masks, capped at 16 vertices,
//! and mirrors the public algorithms. The two paths are cross-checked in
//! tests; the scans in `verifier` and `orientations` run millions of
//! candidates through these kernels.

use crate::graph::Digraph;
use std::ops::ControlFlow;

pub(crate) const DENSE_CAP: usize = 16;

pub(crate) type Mask = u16;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct DenseDigraph {
    pub n: usize,
    pub out: [Mask; DENSE_CAP],
    pub inn: [Mask; DENSE_CAP],
}

impl DenseDigraph {
    pub fn new(n: usize) -> Self {
        debug_assert!(n <= DENSE_CAP);
        DenseDigraph {
            n,
            out: [0; DENSE_CAP],
            inn: [0; DENSE_CAP],
        }
    }

    pub fn from_digraph(d: &Digraph) -> Self {
        let mut dd = DenseDigraph::new(d.vertex_count());
        for &(u, v) in d.arcs() {
            dd.add_arc(u as usize, v as usize);
        }
        dd
    }

    pub fn to_digraph(self) -> Digraph {
        let mut arcs = Vec::new();
        for u in 0..self.n {
            let mut m = self.out[u];
            while m != 0 {
                let v = m.trailing_zeros();
                m &= m - 1;
                arcs.push((u as u32, v));
            }
        }
        Digraph::new(self.n, &arcs).expect("dense digraph is simple by construction")
    }

    #[inline]
    pub fn add_arc(&mut self, u: usize, v: usize) {
        self.out[u] |= 1 << v;
        self.inn[v] |= 1 << u;
    }

    #[inline]
    pub fn remove_arc(&mut self, u: usize, v: usize) {
        self.out[u] &= !(1 << v);
        self.inn[v] &= !(1 << u);
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> u32 {
        self.out[v].count_ones()
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> u32 {
        self.inn[v].count_ones()
    }

    /// Kahn's algorithm on masks.
    pub fn is_acyclic(&self) -> bool {
        let all = full_mask(self.n);
        let mut alive = all;
        loop {
            let mut removed = false;
            let mut m = alive;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                if self.inn[v] & alive == 0 {
                    alive &= !(1 << v);
                    removed = true;
                }
            }
            if alive == 0 {
                return true;
            }
            if !removed {
                return false;
            }
        }
    }

    /// Adjacency of the phylogeny graph: underlying edges plus marriages
    /// of every vertex's in-neighbourhood.
    pub fn moral_adj(&self) -> [Mask; DENSE_CAP] {
        let mut adj = [0 as Mask; DENSE_CAP];
        for v in 0..self.n {
            adj[v] |= self.out[v] | self.inn[v];
            let parents = self.inn[v];
            let mut m = parents;
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                adj[x] |= parents & !(1 << x);
            }
        }
        for v in 0..self.n {
            let mut m = adj[v];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                adj[w] |= 1 << v;
            }
        }
        adj
    }

    /// Underlying-graph adjacency.
    pub fn underlying_adj(&self) -> [Mask; DENSE_CAP] {
        let mut adj = [0 as Mask; DENSE_CAP];
        for (v, row) in adj.iter_mut().enumerate().take(self.n) {
            *row = self.out[v] | self.inn[v];
        }
        adj
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> Mask {
    if n >= 16 {
        !0
    } else {
        (1u16 << n) - 1
    }
}

/// Maximum-cardinality search restricted to `verts`; true iff the
/// restriction is chordal.
pub(crate) fn is_chordal_masks(adj: &[Mask; DENSE_CAP], verts: Mask) -> bool {
    let mut remaining = verts;
    let mut picked: Mask = 0;
    let mut weight = [0u8; DENSE_CAP];
    while remaining != 0 {
        let mut best = usize::MAX;
        let mut best_w = 0u8;
        let mut m = remaining;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if best == usize::MAX || weight[v] > best_w {
                best = v;
                best_w = weight[v];
            }
        }
        let v = best;
        // Later neighbours in elimination order are exactly the already
        // picked ones; they must form a clique.
        let later = adj[v] & picked;
        let mut t = later;
        while t != 0 {
            let x = t.trailing_zeros() as usize;
            t &= t - 1;
            if later & !(1 << x) & !adj[x] != 0 {
                return false;
            }
        }
        picked |= 1 << v;
        remaining &= !(1 << v);
        let mut nb = adj[v] & remaining;
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            weight[w] += 1;
        }
    }
    true
}

/// Visits every induced cycle of length >= 4 within `verts`, in one
/// direction each, until the callback breaks. The callback sees the
/// cycle as a vertex slice.
pub(crate) fn for_each_hole<F>(adj: &[Mask; DENSE_CAP], n: usize, verts: Mask, f: &mut F)
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    let mut path = [0u32; DENSE_CAP];
    for v0 in 0..n {
        if verts & (1 << v0) == 0 {
            continue;
        }
        let above = verts & !((1u32 << (v0 + 1)) as Mask).wrapping_sub(1);
        let mut firsts = adj[v0] & above;
        while firsts != 0 {
            let v1 = firsts.trailing_zeros() as usize;
            firsts &= firsts - 1;
            path[0] = v0 as u32;
            path[1] = v1 as u32;
            let state = GrowState {
                adj,
                verts: verts & above | (1 << v0),
                v0,
            };
            if grow(&state, &mut path, 2, 1 << v0 | 1 << v1, 0, f).is_break() {
                return;
            }
        }
    }
}

struct GrowState<'a> {
    adj: &'a [Mask; DENSE_CAP],
    verts: Mask,
    v0: usize,
}

fn grow<F>(
    st: &GrowState<'_>,
    path: &mut [u32; DENSE_CAP],
    len: usize,
    on_path: Mask,
    mid_block: Mask,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    let last = path[len - 1] as usize;
    let mut cands = st.adj[last] & st.verts & !on_path & !mid_block;
    while cands != 0 {
        let u = cands.trailing_zeros() as usize;
        cands &= cands - 1;
        if st.adj[u] & (1 << st.v0) != 0 {
            // Closes back to the start: induced cycle if long enough,
            // emitted only in the direction with the lesser second vertex.
            if len >= 3 && path[1] < u as u32 {
                path[len] = u as u32;
                f(&path[..len + 1])?;
            }
        } else if len + 1 < DENSE_CAP {
            path[len] = u as u32;
            grow(
                st,
                path,
                len + 1,
                on_path | (1 << u),
                mid_block | st.adj[last],
                f,
            )?;
        }
    }
    ControlFlow::Continue(())
}

/// True iff the restriction of `adj` to `verts` has a hole of exactly
/// `len` vertices.
pub(crate) fn has_hole_of_len(adj: &[Mask; DENSE_CAP], n: usize, verts: Mask, len: usize) -> bool {
    let mut found = false;
    for_each_hole(adj, n, verts, &mut |cycle| {
        if cycle.len() == len {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// True iff the restriction has at least one hole and every hole has
/// exactly 4 vertices.
pub(crate) fn all_holes_are_squares(adj: &[Mask; DENSE_CAP], n: usize, verts: Mask) -> bool {
    let mut any = false;
    let mut clean = true;
    for_each_hole(adj, n, verts, &mut |cycle| {
        if cycle.len() == 4 {
            any = true;
            ControlFlow::Continue(())
        } else {
            clean = false;
            ControlFlow::Break(())
        }
    });
    any && clean
}
