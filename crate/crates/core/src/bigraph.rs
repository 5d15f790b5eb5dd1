//! Bipartite pair views: a snapshot of the biadjacency between two disjoint
//! vertex subsets of a host graph, with positional row/column bitmaps.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::Frac;

/// Biadjacency snapshot between parts `X` and `Y`. Rows are indexed by
/// position in `X`, bits by position in `Y`; the original host labels are
/// retained for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitePair {
    x: Vec<u32>,
    y: Vec<u32>,
    rows: Vec<BitSet>,
}

impl BipartitePair {
    pub fn from_graph(host: &Graph, xs: &[u32], ys: &[u32]) -> Result<BipartitePair> {
        for &v in xs.iter().chain(ys) {
            if v as usize >= host.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
            }
        }
        let yset = BitSet::from_indices(host.n(), ys.iter().map(|&v| v as usize));
        for &v in xs {
            if yset.contains(v as usize) {
                return Err(Error::Precondition(format!("X and Y overlap at vertex {v}")));
            }
        }
        let rows = xs
            .iter()
            .map(|&xv| {
                let nbrs = host.neighbors(xv);
                let mut row = BitSet::new(ys.len());
                for (j, &yv) in ys.iter().enumerate() {
                    if nbrs.contains(yv as usize) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Ok(BipartitePair {
            x: xs.to_vec(),
            y: ys.to_vec(),
            rows,
        })
    }

    /// Standalone block with labels `0..a` and `0..b`.
    pub fn from_rows(a: usize, b: usize, rows: Vec<BitSet>) -> Result<BipartitePair> {
        if rows.len() != a || rows.iter().any(|r| r.universe() != b) {
            return Err(Error::Precondition(format!(
                "expected {a} rows over a {b}-column universe"
            )));
        }
        Ok(BipartitePair {
            x: (0..a as u32).collect(),
            y: (0..b as u32).collect(),
            rows,
        })
    }

    pub fn complete(a: usize, b: usize) -> BipartitePair {
        BipartitePair::from_rows(a, b, vec![BitSet::full(b); a]).unwrap()
    }

    pub fn empty_pair(a: usize, b: usize) -> BipartitePair {
        BipartitePair::from_rows(a, b, vec![BitSet::new(b); a]).unwrap()
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn x_labels(&self) -> &[u32] {
        &self.x
    }

    pub fn y_labels(&self) -> &[u32] {
        &self.y
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitSet> {
        self.rows
    }

    /// Column bitmap (positions in X adjacent to y-position `j`).
    pub fn col(&self, j: usize) -> BitSet {
        let mut c = BitSet::new(self.nx());
        for (i, r) in self.rows.iter().enumerate() {
            if r.contains(j) {
                c.insert(i);
            }
        }
        c
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count()).sum()
    }

    /// Exact density `e/(|X||Y|)`; errors on an empty side.
    pub fn density(&self) -> Result<Frac> {
        if self.nx() == 0 {
            return Err(Error::EmptySide("X"));
        }
        if self.ny() == 0 {
            return Err(Error::EmptySide("Y"));
        }
        Ok(Frac::new(
            self.edge_count() as u64,
            (self.nx() * self.ny()) as u64,
        ))
    }

    /// Restriction to the given row/column positions (order preserved).
    pub fn sub_by_positions(&self, xpos: &[usize], ypos: &[usize]) -> BipartitePair {
        let rows = xpos
            .iter()
            .map(|&i| {
                let mut row = BitSet::new(ypos.len());
                for (jj, &j) in ypos.iter().enumerate() {
                    if self.rows[i].contains(j) {
                        row.insert(jj);
                    }
                }
                row
            })
            .collect();
        BipartitePair {
            x: xpos.iter().map(|&i| self.x[i]).collect(),
            y: ypos.iter().map(|&j| self.y[j]).collect(),
            rows,
        }
    }

    /// Transposed pair (swaps the roles of X and Y).
    pub fn transpose(&self) -> BipartitePair {
        let rows = (0..self.ny()).map(|j| self.col(j)).collect();
        BipartitePair {
            x: self.y.clone(),
            y: self.x.clone(),
            rows,
        }
    }
}

/// Standalone gadget file form: `{"a":int,"b":int,"rows":[bitmask ints]}`,
/// one 64-bit mask per row, so `b <= 64`.
#[derive(Serialize, Deserialize)]
struct GadgetJson {
    a: usize,
    b: usize,
    rows: Vec<u64>,
}

impl Serialize for BipartitePair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.ny() > 64 {
            return Err(serde::ser::Error::custom(
                "gadget file format caps the Y side at 64 vertices",
            ));
        }
        GadgetJson {
            a: self.nx(),
            b: self.ny(),
            rows: self
                .rows
                .iter()
                .map(|r| r.words().first().copied().unwrap_or(0))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartitePair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GadgetJson::deserialize(d)?;
        if j.b > 64 {
            return Err(serde::de::Error::custom("gadget b > 64"));
        }
        if j.rows.len() != j.a {
            return Err(serde::de::Error::custom("row count != a"));
        }
        let mask = if j.b == 64 { u64::MAX } else { (1u64 << j.b) - 1 };
        let rows = j
            .rows
            .iter()
            .map(|&w| {
                if w & !mask != 0 {
                    return Err(serde::de::Error::custom("row mask exceeds b columns"));
                }
                Ok(BitSet::from_words(j.b, vec![w]).unwrap())
            })
            .collect::<Result<Vec<_>, _>>()?;
        BipartitePair::from_rows(j.a, j.b, rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(BipartitePair::complete(2, 2).density().unwrap(), Frac::new(1, 1));
        assert_eq!(BipartitePair::empty_pair(3, 3).density().unwrap(), Frac::ZERO);
        let mut rows = vec![BitSet::new(3); 3];
        rows[0].insert(0);
        rows[0].insert(1);
        rows[1].insert(2);
        rows[2].insert(0);
        let p = BipartitePair::from_rows(3, 3, rows).unwrap();
        assert_eq!(p.density().unwrap(), Frac::new(4, 9));
        assert!(BipartitePair::complete(0, 3).density().is_err());
    }

    #[test]
    fn from_graph_extracts_the_block() {
        let g = Graph::build(5, &[(0, 3), (1, 3), (1, 4), (0, 1)]).unwrap();
        let p = BipartitePair::from_graph(&g, &[0, 1], &[3, 4]).unwrap();
        assert_eq!(p.edge_count(), 3);
        assert!(p.has(0, 0) && p.has(1, 0) && p.has(1, 1) && !p.has(0, 1));
        assert!(BipartitePair::from_graph(&g, &[0, 1], &[1, 3]).is_err());
    }

    #[test]
    fn transpose_and_columns_agree() {
        let g = Graph::build(4, &[(0, 2), (1, 3)]).unwrap();
        let p = BipartitePair::from_graph(&g, &[0, 1], &[2, 3]).unwrap();
        let t = p.transpose();
        assert_eq!(t.row(0).to_vec(), p.col(0).to_vec());
        assert_eq!(t.edge_count(), p.edge_count());
    }

    #[test]
    fn gadget_json_roundtrip() {
        let p = BipartitePair::complete(3, 2);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "{\"a\":3,\"b\":2,\"rows\":[3,3,3]}");
        let back: BipartitePair = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
    }
}
