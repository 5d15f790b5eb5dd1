//! Blowups: a host graph obtained by replacing each base vertex with an
//! independent part and installing a bipartite block on each base edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::bigraph::BipartitePair;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Base graph `G`, host `G'`, and the part map `phi : V(G') -> V(G)`.
///
/// Parts occupy consecutive host index ranges in base-vertex order, so the
/// serialized form only carries part sizes and per-edge blocks.
#[derive(Clone, Debug)]
pub struct Blowup {
    base: Graph,
    host: Graph,
    phi: Vec<u32>,
    parts: Vec<Vec<u32>>,
}

impl Blowup {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    #[inline]
    pub fn phi(&self, host_vertex: u32) -> u32 {
        self.phi[host_vertex as usize]
    }

    pub fn part(&self, base_vertex: u32) -> &[u32] {
        &self.parts[base_vertex as usize]
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }

    /// The biadjacency block installed between the parts of base edge `u-v`
    /// (rows indexed by the part of `min(u,v)`).
    pub fn block(&self, u: u32, v: u32) -> Result<BipartitePair> {
        if !self.base.has_edge(u, v) {
            return Err(Error::Precondition(format!("{u}-{v} is not a base edge")));
        }
        let (u, v) = (u.min(v), u.max(v));
        BipartitePair::from_graph(&self.host, self.part(u), self.part(v))
    }
}

/// Builds the blowup host: parts of the given sizes, one provided block per
/// base edge, no other edges. The provider gets
/// `(edge_index, u, v, |part_u|, |part_v|)` for each base edge `u < v` (in
/// sorted edge order) and must return `|part_u|` rows over `|part_v|`
/// columns.
pub fn construct_blowup(
    base: &Graph,
    part_sizes: &[usize],
    mut gadget_provider: impl FnMut(usize, u32, u32, usize, usize) -> Result<Vec<BitSet>>,
) -> Result<Blowup> {
    if part_sizes.len() != base.n() {
        return Err(Error::Precondition(format!(
            "{} part sizes for a base on {} vertices",
            part_sizes.len(),
            base.n()
        )));
    }
    let mut offsets = Vec::with_capacity(base.n());
    let mut total = 0usize;
    for &s in part_sizes {
        offsets.push(total);
        total += s;
    }
    let mut adj = vec![BitSet::new(total); total];
    for (idx, (u, v)) in base.edges().into_iter().enumerate() {
        let (su, sv) = (part_sizes[u as usize], part_sizes[v as usize]);
        let rows = gadget_provider(idx, u, v, su, sv)?;
        if rows.len() != su || rows.iter().any(|r| r.universe() != sv) {
            return Err(Error::BlockDimensionMismatch {
                u,
                v,
                expected_rows: su,
                expected_cols: sv,
                got_rows: rows.len(),
                got_cols: rows.first().map_or(0, |r| r.universe()),
            });
        }
        let (ou, ov) = (offsets[u as usize], offsets[v as usize]);
        for (i, row) in rows.iter().enumerate() {
            for j in row.iter() {
                adj[ou + i].insert(ov + j);
                adj[ov + j].insert(ou + i);
            }
        }
    }
    let mut phi = vec![0u32; total];
    let mut parts = Vec::with_capacity(base.n());
    for v in 0..base.n() {
        let range: Vec<u32> = (offsets[v]..offsets[v] + part_sizes[v]).map(|i| i as u32).collect();
        for &h in &range {
            phi[h as usize] = v as u32;
        }
        parts.push(range);
    }
    Ok(Blowup {
        base: base.clone(),
        host: Graph::from_adj(adj),
        phi,
        parts,
    })
}

/// One invariant violation found by [`verify_blowup`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BlowupViolation {
    PartTooLarge { base_vertex: u32, size: usize, bound: usize },
    IntraPartEdge { base_vertex: u32, x: u32, y: u32 },
    EdgeOutsideBase { x: u32, y: u32, u: u32, v: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupVerdict {
    pub ok: bool,
    pub violations: Vec<BlowupViolation>,
}

/// Checks the three blowup invariants against the bound `s`: fibers of size
/// at most `s`, no intra-part edges, and every host edge covering a base
/// edge.
pub fn verify_blowup(b: &Blowup, s: usize) -> BlowupVerdict {
    let mut violations = Vec::new();
    for (v, part) in b.parts.iter().enumerate() {
        if part.len() > s {
            violations.push(BlowupViolation::PartTooLarge {
                base_vertex: v as u32,
                size: part.len(),
                bound: s,
            });
        }
    }
    for (x, y) in b.host.edges() {
        let (u, v) = (b.phi(x), b.phi(y));
        if u == v {
            violations.push(BlowupViolation::IntraPartEdge {
                base_vertex: u,
                x,
                y,
            });
        } else if !b.base.has_edge(u, v) {
            violations.push(BlowupViolation::EdgeOutsideBase { x, y, u, v });
        }
    }
    BlowupVerdict {
        ok: violations.is_empty(),
        violations,
    }
}

/// Maximum pattern size accepted by [`is_blowup_of`].
pub const BLOWUP_SEARCH_CAP: usize = 16;

/// Searches for a homomorphism witnessing `hprime` as a `w`-blowup of `h`
/// (edge-preserving, fibers of size at most `w`). Complete for hosts within
/// the cap; refuses larger inputs rather than approximating.
pub fn is_blowup_of(hprime: &Graph, h: &Graph, w: usize) -> Result<Option<Vec<u32>>> {
    if hprime.n() > BLOWUP_SEARCH_CAP {
        return Err(Error::CapExceeded(format!(
            "is_blowup_of handles patterns up to {BLOWUP_SEARCH_CAP} vertices, got {}",
            hprime.n()
        )));
    }
    if h.n() == 0 {
        return Ok(if hprime.n() == 0 { Some(vec![]) } else { None });
    }
    if hprime.n() > h.n() * w {
        return Ok(None);
    }
    let mut psi = vec![u32::MAX; hprime.n()];
    let mut fiber_load = vec![0usize; h.n()];
    fn rec(
        hprime: &Graph,
        h: &Graph,
        w: usize,
        next: usize,
        psi: &mut Vec<u32>,
        load: &mut Vec<usize>,
    ) -> bool {
        if next == hprime.n() {
            return true;
        }
        'cand: for a in 0..h.n() as u32 {
            if load[a as usize] >= w {
                continue;
            }
            for b in hprime.neighbors(next as u32).iter() {
                if b < next && !h.has_edge(psi[b], a) {
                    continue 'cand;
                }
            }
            psi[next] = a;
            load[a as usize] += 1;
            if rec(hprime, h, w, next + 1, psi, load) {
                return true;
            }
            load[a as usize] -= 1;
            psi[next] = u32::MAX;
        }
        false
    }
    if rec(hprime, h, w, 0, &mut psi, &mut fiber_load) {
        Ok(Some(psi))
    } else {
        Ok(None)
    }
}

#[derive(Serialize, Deserialize)]
struct BlowupJson {
    base: Graph,
    part_sizes: Vec<usize>,
    blocks: BTreeMap<String, Vec<Vec<u64>>>,
}

impl Serialize for Blowup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut blocks = BTreeMap::new();
        for (u, v) in self.base.edges() {
            let block = self.block(u, v).map_err(serde::ser::Error::custom)?;
            let rows: Vec<Vec<u64>> = block.rows().iter().map(|r| r.words().to_vec()).collect();
            blocks.insert(format!("{u}-{v}"), rows);
        }
        BlowupJson {
            base: self.base.clone(),
            part_sizes: self.part_sizes(),
            blocks,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Blowup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = BlowupJson::deserialize(d)?;
        let mut blocks: BTreeMap<(u32, u32), Vec<Vec<u64>>> = BTreeMap::new();
        for (k, rows) in j.blocks {
            let (u, v) = k
                .split_once('-')
                .ok_or_else(|| serde::de::Error::custom(format!("bad block key `{k}`")))?;
            let u: u32 = u.parse().map_err(serde::de::Error::custom)?;
            let v: u32 = v.parse().map_err(serde::de::Error::custom)?;
            blocks.insert((u.min(v), u.max(v)), rows);
        }
        construct_blowup(&j.base, &j.part_sizes, |_, u, v, su, sv| {
            let words = blocks
                .get(&(u, v))
                .ok_or_else(|| Error::Precondition(format!("missing block {u}-{v}")))?;
            if words.len() != su {
                return Err(Error::BlockDimensionMismatch {
                    u,
                    v,
                    expected_rows: su,
                    expected_cols: sv,
                    got_rows: words.len(),
                    got_cols: sv,
                });
            }
            words
                .iter()
                .map(|w| {
                    BitSet::from_words(sv, w.clone()).ok_or(Error::Precondition(format!(
                        "block {u}-{v}: bad row word count or stray bits"
                    )))
                })
                .collect()
        })
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_provider(_: usize, _: u32, _: u32, su: usize, sv: usize) -> Result<Vec<BitSet>> {
        Ok(vec![BitSet::full(sv); su])
    }

    #[test]
    fn one_edge_blowup_is_k22() {
        let base = Graph::build(2, &[(0, 1)]).unwrap();
        let b = construct_blowup(&base, &[2, 2], complete_provider).unwrap();
        assert_eq!(b.host().n(), 4);
        assert_eq!(b.host().edge_count(), 4);
        assert!(verify_blowup(&b, 2).ok);
    }

    #[test]
    fn unit_blowup_is_the_base() {
        let base = Graph::path(3);
        let b = construct_blowup(&base, &[1, 1, 1], complete_provider).unwrap();
        assert_eq!(b.host(), &Graph::path(3));
    }

    #[test]
    fn empty_gadget_gives_empty_host() {
        let base = Graph::complete(3);
        let b = construct_blowup(&base, &[2, 2, 2], |_, _, _, su, sv| {
            Ok(vec![BitSet::new(sv); su])
        })
        .unwrap();
        assert_eq!(b.host().edge_count(), 0);
        assert_eq!(b.host().n(), 6);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let base = Graph::build(2, &[(0, 1)]).unwrap();
        let err = construct_blowup(&base, &[2, 2], |_, _, _, _, sv| {
            Ok(vec![BitSet::full(sv); 3])
        });
        assert!(matches!(err, Err(Error::BlockDimensionMismatch { .. })));
    }

    #[test]
    fn verify_catches_oversized_parts() {
        let base = Graph::build(2, &[(0, 1)]).unwrap();
        let b = construct_blowup(&base, &[3, 2], complete_provider).unwrap();
        let verdict = verify_blowup(&b, 2);
        assert!(!verdict.ok);
        assert!(matches!(
            verdict.violations[0],
            BlowupViolation::PartTooLarge { base_vertex: 0, size: 3, bound: 2 }
        ));
    }

    #[test]
    fn c4_is_a_2_blowup_of_an_edge() {
        let c4 = Graph::cycle(4);
        let edge = Graph::build(2, &[(0, 1)]).unwrap();
        let psi = is_blowup_of(&c4, &edge, 2).unwrap().unwrap();
        // fibers {0,2} and {1,3}
        assert_eq!(psi[0], psi[2]);
        assert_eq!(psi[1], psi[3]);
        assert_ne!(psi[0], psi[1]);
    }

    #[test]
    fn k3_is_not_a_blowup_of_triangle_free_graphs() {
        let k3 = Graph::complete(3);
        for h in [Graph::build(2, &[(0, 1)]).unwrap(), Graph::path(3), Graph::cycle(4)] {
            for w in 1..=3 {
                assert!(is_blowup_of(&k3, &h, w).unwrap().is_none());
            }
        }
    }

    #[test]
    fn identity_is_a_1_blowup() {
        let h = Graph::cycle(5);
        let psi = is_blowup_of(&h, &h, 1).unwrap().unwrap();
        // a 1-blowup witness is a fiber-size-1 homomorphism C5 -> C5,
        // i.e. an automorphism-like bijection; check it is valid
        let mut load = vec![0; 5];
        for (v, &a) in psi.iter().enumerate() {
            load[a as usize] += 1;
            for u in h.neighbors(v as u32).iter() {
                assert!(h.has_edge(psi[u], a));
            }
        }
        assert!(load.iter().all(|&l| l == 1));
    }

    #[test]
    fn search_cap_is_enforced() {
        let big = Graph::empty(17);
        assert!(matches!(
            is_blowup_of(&big, &Graph::empty(17), 1),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn blowup_json_roundtrip_byte_stable() {
        let base = Graph::path(3);
        let b = construct_blowup(&base, &[2, 3, 2], |idx, _, _, su, sv| {
            let mut rows = vec![BitSet::new(sv); su];
            for (i, row) in rows.iter_mut().enumerate() {
                row.insert((i + idx) % sv);
            }
            Ok(rows)
        })
        .unwrap();
        let s1 = serde_json::to_string(&b).unwrap();
        let back: Blowup = serde_json::from_str(&s1).unwrap();
        let s2 = serde_json::to_string(&back).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(b.host(), back.host());
    }
}
