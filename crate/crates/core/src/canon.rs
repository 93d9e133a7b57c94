//! Canonical forms for small digraphs.
//!
//! Two digraphs get equal forms exactly when they are isomorphic. The
//! search individualises vertices inside an (indegree, outdegree)-refined
//! partition and takes the minimum adjacency encoding over all leaves of
//! the refinement tree. Exponential in the worst case, so callers are
//! capped at [`CANONICAL_VERTEX_CAP`] vertices; everything in this crate
//! works well below that.

use crate::graph::Digraph;
use thiserror::Error;

/// Hard cap on `canonical_form` inputs.
pub const CANONICAL_VERTEX_CAP: usize = 16;

/// Opaque byte sequence identifying a digraph up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("canonical form supports at most {CANONICAL_VERTEX_CAP} vertices, got {0}")]
pub struct CanonicalCapExceeded(pub usize);

pub fn canonical_form(d: &Digraph) -> Result<CanonicalForm, CanonicalCapExceeded> {
    let n = d.vertex_count();
    if n > CANONICAL_VERTEX_CAP {
        return Err(CanonicalCapExceeded(n));
    }
    if n == 0 {
        return Ok(CanonicalForm(vec![0]));
    }
    let mut out = [0u16; CANONICAL_VERTEX_CAP];
    let mut inn = [0u16; CANONICAL_VERTEX_CAP];
    for &(u, v) in d.arcs() {
        out[u as usize] |= 1 << v;
        inn[v as usize] |= 1 << u;
    }
    let mut search = Search {
        n,
        out,
        inn,
        best: None,
    };
    let cells = initial_partition(n, &out, &inn);
    search.descend(cells);
    let mut bytes = vec![n as u8];
    bytes.extend_from_slice(&search.best.expect("at least one leaf"));
    Ok(CanonicalForm(bytes))
}

struct Search {
    n: usize,
    out: [u16; CANONICAL_VERTEX_CAP],
    inn: [u16; CANONICAL_VERTEX_CAP],
    best: Option<Vec<u8>>,
}

impl Search {
    fn descend(&mut self, cells: Vec<Vec<u32>>) {
        let cells = refine(self.n, &self.out, &self.inn, cells);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let enc = self.encode(&cells);
                if self.best.as_ref().is_none_or(|b| enc < *b) {
                    self.best = Some(enc);
                }
            }
            Some(i) => {
                for k in 0..cells[i].len() {
                    let mut child = cells.clone();
                    let v = child[i].remove(k);
                    child.insert(i, vec![v]);
                    self.descend(child);
                }
            }
        }
    }

    /// Row-major adjacency bits under the discrete partition's ordering.
    fn encode(&self, cells: &[Vec<u32>]) -> Vec<u8> {
        let perm: Vec<u32> = cells.iter().map(|c| c[0]).collect();
        let n = self.n;
        let mut bytes = vec![0u8; (n * n).div_ceil(8)];
        for (p, &u) in perm.iter().enumerate() {
            for (q, &v) in perm.iter().enumerate() {
                if self.out[u as usize] & (1 << v) != 0 {
                    let bit = p * n + q;
                    bytes[bit / 8] |= 1 << (bit % 8);
                }
            }
        }
        bytes
    }
}

fn initial_partition(
    n: usize,
    out: &[u16; CANONICAL_VERTEX_CAP],
    inn: &[u16; CANONICAL_VERTEX_CAP],
) -> Vec<Vec<u32>> {
    let mut keyed: Vec<(u32, u32, u32)> = (0..n as u32)
        .map(|v| {
            (
                inn[v as usize].count_ones(),
                out[v as usize].count_ones(),
                v,
            )
        })
        .collect();
    keyed.sort_unstable();
    let mut cells: Vec<Vec<u32>> = Vec::new();
    for (i, o, v) in keyed {
        match cells.last_mut() {
            Some(cell)
                if inn[cell[0] as usize].count_ones() == i
                    && out[cell[0] as usize].count_ones() == o =>
            {
                cell.push(v)
            }
            _ => cells.push(vec![v]),
        }
    }
    cells
}

/// Stable refinement: split every cell by the multiset of out- and
/// in-neighbour colours until nothing changes. Sub-cells are ordered by
/// their key, which depends only on isomorphism-invariant data.
fn refine(
    n: usize,
    out: &[u16; CANONICAL_VERTEX_CAP],
    inn: &[u16; CANONICAL_VERTEX_CAP],
    mut cells: Vec<Vec<u32>>,
) -> Vec<Vec<u32>> {
    loop {
        let mut color = vec![0u32; n];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                color[v as usize] = c as u32;
            }
        }
        let key = |v: u32| -> (Vec<u32>, Vec<u32>) {
            let mut outs: Vec<u32> = (0..n as u32)
                .filter(|&w| out[v as usize] & (1 << w) != 0)
                .map(|w| color[w as usize])
                .collect();
            let mut ins: Vec<u32> = (0..n as u32)
                .filter(|&w| inn[v as usize] & (1 << w) != 0)
                .map(|w| color[w as usize])
                .collect();
            outs.sort_unstable();
            ins.sort_unstable();
            (outs, ins)
        };
        let mut next: Vec<Vec<u32>> = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut grouped: std::collections::BTreeMap<(Vec<u32>, Vec<u32>), Vec<u32>> =
                std::collections::BTreeMap::new();
            for &v in cell {
                grouped.entry(key(v)).or_default().push(v);
            }
            if grouped.len() > 1 {
                changed = true;
            }
            next.extend(grouped.into_values());
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}
