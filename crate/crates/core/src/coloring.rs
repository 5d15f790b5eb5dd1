//! Edge colorings and the adversarial coloring strategies used to drive
//! the "any q-coloring" quantifier empirically.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blowup::Blowup;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Total assignment of colors `0..q` to a graph's edge set. Keys are
/// `(min, max)` endpoint pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    q: u32,
    colors: BTreeMap<(u32, u32), u32>,
}

impl EdgeColoring {
    pub fn from_fn(g: &Graph, q: u32, mut f: impl FnMut(u32, u32) -> u32) -> EdgeColoring {
        let mut colors = BTreeMap::new();
        for (u, v) in g.edges() {
            let c = f(u, v);
            debug_assert!(c < q);
            colors.insert((u, v), c);
        }
        EdgeColoring { q, colors }
    }

    pub fn from_map(q: u32, colors: BTreeMap<(u32, u32), u32>) -> EdgeColoring {
        EdgeColoring { q, colors }
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn color(&self, u: u32, v: u32) -> Option<u32> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.colors.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &u32)> {
        self.colors.iter()
    }

    /// Checks the coloring is defined on exactly `g`'s edge set with all
    /// values below `q`.
    pub fn validate_on(&self, g: &Graph) -> Result<()> {
        if self.colors.len() != g.edge_count() {
            return Err(Error::Precondition(format!(
                "coloring has {} entries, graph has {} edges",
                self.colors.len(),
                g.edge_count()
            )));
        }
        for (&(u, v), &c) in &self.colors {
            if !g.has_edge(u, v) {
                return Err(Error::Precondition(format!("colored non-edge {u}-{v}")));
            }
            if c >= self.q {
                return Err(Error::Precondition(format!(
                    "edge {u}-{v} has color {c} >= q={}",
                    self.q
                )));
            }
        }
        Ok(())
    }

    /// The subgraph formed by edges of color `c`.
    pub fn class_subgraph(&self, g: &Graph, c: u32) -> Graph {
        let edges: Vec<(u32, u32)> = self
            .colors
            .iter()
            .filter(|&(_, &col)| col == c)
            .map(|(&e, _)| e)
            .collect();
        Graph::build(g.n(), &edges).expect("class edges come from a valid graph")
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    q: u32,
    colors: BTreeMap<String, u32>,
}

impl Serialize for EdgeColoring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ColoringJson {
            q: self.q,
            colors: self
                .colors
                .iter()
                .map(|(&(u, v), &c)| (format!("{u}-{v}"), c))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeColoring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ColoringJson::deserialize(d)?;
        let mut colors = BTreeMap::new();
        for (k, c) in j.colors {
            let (u, v) = k
                .split_once('-')
                .ok_or_else(|| serde::de::Error::custom(format!("bad edge key `{k}`")))?;
            let u: u32 = u.parse().map_err(serde::de::Error::custom)?;
            let v: u32 = v.parse().map_err(serde::de::Error::custom)?;
            colors.insert((u.min(v), u.max(v)), c);
        }
        Ok(EdgeColoring { q: j.q, colors })
    }
}

/// Adversarial coloring strategies for pipeline experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryStrategy {
    UniformRandom,
    PerBaseEdgeMajority,
    PartIndexParity,
    HalfSplitWithinBlock,
}

impl AdversaryStrategy {
    pub const ALL: [AdversaryStrategy; 4] = [
        AdversaryStrategy::UniformRandom,
        AdversaryStrategy::PerBaseEdgeMajority,
        AdversaryStrategy::PartIndexParity,
        AdversaryStrategy::HalfSplitWithinBlock,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AdversaryStrategy::UniformRandom => "uniform-random",
            AdversaryStrategy::PerBaseEdgeMajority => "per-base-edge-majority",
            AdversaryStrategy::PartIndexParity => "part-index-parity",
            AdversaryStrategy::HalfSplitWithinBlock => "half-split-within-block",
        }
    }
}

impl FromStr for AdversaryStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|a| a.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// Colors the blowup host's edges per the chosen strategy; deterministic
/// given the seed.
pub fn adversary_color(b: &Blowup, strategy: AdversaryStrategy, q: u32, seed: u64) -> EdgeColoring {
    assert!(q >= 1);
    let host = b.host();
    let mut rng = crate::rng::root(seed);
    let base_edges = b.base().edges();
    let edge_index: BTreeMap<(u32, u32), usize> = base_edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    EdgeColoring::from_fn(host, q, |x, y| {
        let (u, v) = (b.phi(x), b.phi(y));
        let base_key = (u.min(v), u.max(v));
        match strategy {
            AdversaryStrategy::UniformRandom => rng.random_range(0..q),
            AdversaryStrategy::PerBaseEdgeMajority => (edge_index[&base_key] as u32) % q,
            AdversaryStrategy::PartIndexParity => (u + v) % q,
            AdversaryStrategy::HalfSplitWithinBlock => {
                // split each block by the row position within the lower part
                let (row_part, row_vertex) = if u < v { (u, x) } else { (v, y) };
                let part = b.part(row_part);
                let pos = part.iter().position(|&w| w == row_vertex).unwrap();
                ((pos * q as usize) / part.len()) as u32
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::BipartitePair;

    fn two_part_blowup() -> Blowup {
        let base = Graph::build(2, &[(0, 1)]).unwrap();
        crate::blowup::construct_blowup(&base, &[4, 4], |_, _, _, su, sv| {
            Ok(BipartitePair::complete(su, sv).into_rows())
        })
        .unwrap()
    }

    #[test]
    fn coloring_json_roundtrip() {
        let g = Graph::path(4);
        let col = EdgeColoring::from_fn(&g, 2, |u, _| u % 2);
        let s = serde_json::to_string(&col).unwrap();
        let back: EdgeColoring = serde_json::from_str(&s).unwrap();
        assert_eq!(col, back);
        assert_eq!(s, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn validate_catches_partial_colorings() {
        let g = Graph::path(4);
        let mut map = BTreeMap::new();
        map.insert((0u32, 1u32), 0u32);
        let col = EdgeColoring::from_map(2, map);
        assert!(col.validate_on(&g).is_err());
    }

    #[test]
    fn uniform_random_is_seed_deterministic_and_total() {
        let b = two_part_blowup();
        let c1 = adversary_color(&b, AdversaryStrategy::UniformRandom, 2, 9);
        let c2 = adversary_color(&b, AdversaryStrategy::UniformRandom, 2, 9);
        assert_eq!(c1, c2);
        c1.validate_on(b.host()).unwrap();
        assert_ne!(c1, adversary_color(&b, AdversaryStrategy::UniformRandom, 2, 10));
    }

    #[test]
    fn per_base_edge_majority_blocks_are_monochromatic() {
        let b = two_part_blowup();
        let c = adversary_color(&b, AdversaryStrategy::PerBaseEdgeMajority, 2, 0);
        let colors: std::collections::BTreeSet<u32> = c.iter().map(|(_, &v)| v).collect();
        assert_eq!(colors.len(), 1);
    }

    #[test]
    fn half_split_splits_rows() {
        let b = two_part_blowup();
        let c = adversary_color(&b, AdversaryStrategy::HalfSplitWithinBlock, 2, 0);
        // rows 0..2 of part 0 get color 0, rows 2..4 color 1
        assert_eq!(c.color(0, 4), Some(0));
        assert_eq!(c.color(1, 4), Some(0));
        assert_eq!(c.color(2, 4), Some(1));
        assert_eq!(c.color(3, 7), Some(1));
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!(
            "half-split-within-block".parse::<AdversaryStrategy>().unwrap(),
            AdversaryStrategy::HalfSplitWithinBlock
        );
        assert!(matches!(
            "bogus".parse::<AdversaryStrategy>(),
            Err(Error::UnknownStrategy(_))
        ));
    }
}
