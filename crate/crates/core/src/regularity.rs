//! Exact and sampled verdicts for (L,p)-regularity, lower-regularity,
//! pair density, and the disjoint-set density condition.
//!
//! A bipartite pair (X,Y,E) is (L,p)-regular when, for every subset X' of X
//! with |X'| >= L, at most L vertices y of Y have degree into X' strictly
//! outside the window [p|X'|/2, 2p|X'|], and symmetrically for subsets of Y.
//! Lower-regularity drops the upper clause. All window comparisons are
//! strict and done by integer cross-multiplication, so equality at a
//! boundary (d = 2p|X'| exactly) never counts as bad.

use serde::{Deserialize, Serialize};

use crate::bigraph::BipartitePair;
use crate::bitset::BitSet;
use crate::combi::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{Frac, Reported};
use rand::Rng as _;

/// Largest side length accepted by the exhaustive subset checker.
pub const EXACT_CAP: usize = 20;

/// Enumeration budget for the disjoint-set density condition.
pub const DENSITY_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    TwoSided,
    LowerOnly,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularityParams {
    pub l: usize,
    pub p: Frac,
    pub mode: Mode,
}

impl RegularityParams {
    pub fn two_sided(l: usize, p: Frac) -> Self {
        RegularityParams {
            l,
            p,
            mode: Mode::TwoSided,
        }
    }

    pub fn lower_only(l: usize, p: Frac) -> Self {
        RegularityParams {
            l,
            p,
            mode: Mode::LowerOnly,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.l < 1 {
            return Err(Error::Precondition("regularity threshold L must be >= 1".into()));
        }
        if self.p.is_zero() || !self.p.lt(&Frac::ONE) {
            return Err(Error::Precondition(format!(
                "density parameter p must be in (0,1), got {}",
                self.p
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    X,
    Y,
}

/// A refutation witness: a qualifying subset on one side together with the
/// more-than-L vertices on the opposite side violating the degree window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularityWitness {
    pub side: Side,
    pub subset: Vec<u32>,
    pub bad: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityStatus {
    CertifiedRegular,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub status: RegularityStatus,
    pub params: RegularityParams,
    pub witness: Option<RegularityWitness>,
}

impl RegularityVerdict {
    pub fn is_certified(&self) -> bool {
        self.status == RegularityStatus::CertifiedRegular
    }
}

/// Exact density of the pair.
pub fn pair_density(b: &BipartitePair) -> Result<Frac> {
    b.density()
}

/// Checks whether a vertex of degree `d` into a subset of size `t` violates
/// the window for density `p`: `d < p t / 2` or (two-sided) `d > 2 p t`.
#[inline]
pub fn window_violates(d: usize, t: usize, p: Frac, two_sided: bool) -> bool {
    let (a, b) = (p.num() as u128, p.den() as u128);
    let d = d as u128;
    let t = t as u128;
    if 2 * b * d < a * t {
        return true;
    }
    two_sided && b * d > 2 * a * t
}

/// Allocation-light single-side scan: enumerates every subset of the rows
/// (Gray-code order, incremental opposite-side degree counts) and returns
/// the minimal witness `(subset_mask, t)` with more than `l` bad vertices,
/// or `None` when this side certifies. Rows are `u32` masks over the
/// opposite side; requires `rows.len() <= 20`.
pub fn side_scan_masks(
    rows: &[u32],
    n_opp: usize,
    l: usize,
    p: Frac,
    two_sided: bool,
) -> Option<(u32, usize)> {
    let n = rows.len();
    debug_assert!(n <= EXACT_CAP && n_opp <= EXACT_CAP);
    if n < l {
        return None; // no qualifying subset
    }
    let (a, b) = (p.num(), p.den());
    // bad iff d <= lo_cut[t], or (two-sided) d >= hi_cut[t]
    let mut lo_cut = [-1i64; EXACT_CAP + 1];
    let mut hi_cut = [i64::MAX; EXACT_CAP + 1];
    for t in 0..=n {
        let at = a as i64 * t as i64;
        lo_cut[t] = if at == 0 { -1 } else { (at - 1) / (2 * b as i64) };
        hi_cut[t] = (2 * at) / (b as i64) + 1;
    }
    let mut degs = [0i32; EXACT_CAP];
    let mut hist = [0i32; EXACT_CAP + 1];
    hist[0] = n_opp as i32;
    let mut best: Option<(u32, usize)> = None;
    let mut prev_gray = 0u32;
    for i in 1u32..(1u32 << n) {
        let gray = i ^ (i >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        let adding = gray & (1 << flipped) != 0;
        let mut m = rows[flipped];
        while m != 0 {
            let y = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = degs[y];
            hist[d as usize] -= 1;
            let nd = if adding { d + 1 } else { d - 1 };
            degs[y] = nd;
            hist[nd as usize] += 1;
        }
        prev_gray = gray;
        let t = gray.count_ones() as usize;
        if t < l {
            continue;
        }
        let (lo, hi) = (lo_cut[t], hi_cut[t]);
        let mut bad = 0i32;
        for (d, &h) in hist.iter().enumerate().take(n + 1) {
            if (d as i64) <= lo || (two_sided && (d as i64) >= hi) {
                bad += h;
            }
        }
        if bad as usize > l {
            let better = match best {
                None => true,
                Some((bm, bt)) => (t, gray) < (bt, bm),
            };
            if better {
                best = Some((gray, t));
            }
        }
    }
    best
}

fn rows_to_masks(pair: &BipartitePair) -> (Vec<u32>, Vec<u32>) {
    let x_rows: Vec<u32> = pair
        .rows()
        .iter()
        .map(|r| r.words().first().copied().unwrap_or(0) as u32)
        .collect();
    let mut y_rows = vec![0u32; pair.ny()];
    for (i, &m) in x_rows.iter().enumerate() {
        let mut m = m;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            y_rows[j] |= 1 << i;
        }
    }
    (x_rows, y_rows)
}

fn bad_vertices_for_subset(
    rows_opp: &[u32],
    subset_mask: u32,
    t: usize,
    p: Frac,
    two_sided: bool,
) -> Vec<usize> {
    rows_opp
        .iter()
        .enumerate()
        .filter(|&(_, &col)| {
            let d = (col & subset_mask).count_ones() as usize;
            window_violates(d, t, p, two_sided)
        })
        .map(|(v, _)| v)
        .collect()
}

/// Exhaustive regularity verdict. Scans the X side first, then the Y side;
/// a refutation carries the minimal-found witness on the offending side.
pub fn check_regularity_exact(
    pair: &BipartitePair,
    params: &RegularityParams,
) -> Result<RegularityVerdict> {
    params.validate()?;
    if pair.nx().max(pair.ny()) > EXACT_CAP {
        return Err(Error::CapExceeded(format!(
            "exhaustive regularity check caps sides at {EXACT_CAP} (got {}x{}); \
             use refute_regularity_sampled for larger pairs",
            pair.nx(),
            pair.ny()
        )));
    }
    let two_sided = params.mode == Mode::TwoSided;
    let (x_rows, y_rows) = rows_to_masks(pair);
    if let Some((mask, t)) = side_scan_masks(&x_rows, pair.ny(), params.l, params.p, two_sided) {
        let subset: Vec<u32> = (0..pair.nx())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| pair.x_labels()[i])
            .collect();
        let bad = bad_vertices_for_subset(&y_rows, mask, t, params.p, two_sided)
            .into_iter()
            .map(|j| pair.y_labels()[j])
            .collect();
        return Ok(RegularityVerdict {
            status: RegularityStatus::Refuted,
            params: params.clone(),
            witness: Some(RegularityWitness {
                side: Side::X,
                subset,
                bad,
            }),
        });
    }
    if let Some((mask, t)) = side_scan_masks(&y_rows, pair.nx(), params.l, params.p, two_sided) {
        let subset: Vec<u32> = (0..pair.ny())
            .filter(|&j| mask & (1 << j) != 0)
            .map(|j| pair.y_labels()[j])
            .collect();
        let bad = bad_vertices_for_subset(&x_rows, mask, t, params.p, two_sided)
            .into_iter()
            .map(|i| pair.x_labels()[i])
            .collect();
        return Ok(RegularityVerdict {
            status: RegularityStatus::Refuted,
            params: params.clone(),
            witness: Some(RegularityWitness {
                side: Side::Y,
                subset,
                bad,
            }),
        });
    }
    Ok(RegularityVerdict {
        status: RegularityStatus::CertifiedRegular,
        params: params.clone(),
        witness: None,
    })
}

/// Re-checks a claimed witness directly against the definition.
pub fn verify_witness(
    pair: &BipartitePair,
    params: &RegularityParams,
    witness: &RegularityWitness,
) -> bool {
    let two_sided = params.mode == Mode::TwoSided;
    let (labels, opp_labels): (&[u32], &[u32]) = match witness.side {
        Side::X => (pair.x_labels(), pair.y_labels()),
        Side::Y => (pair.y_labels(), pair.x_labels()),
    };
    let positions: Option<Vec<usize>> = witness
        .subset
        .iter()
        .map(|v| labels.iter().position(|w| w == v))
        .collect();
    let Some(positions) = positions else {
        return false;
    };
    let t = positions.len();
    if t < params.l {
        return false;
    }
    let mut bad = 0usize;
    for (j, _) in opp_labels.iter().enumerate() {
        let d = positions
            .iter()
            .filter(|&&i| match witness.side {
                Side::X => pair.has(i, j),
                Side::Y => pair.has(j, i),
            })
            .count();
        if window_violates(d, t, params.p, two_sided) {
            bad += 1;
        }
    }
    bad > params.l
}

/// Randomized one-sided refuter: samples qualifying subsets and returns a
/// definition-checked witness if one is found. Never certifies.
pub fn refute_regularity_sampled(
    pair: &BipartitePair,
    params: &RegularityParams,
    trials: u32,
    seed: u64,
) -> Option<RegularityWitness> {
    params.validate().ok()?;
    let two_sided = params.mode == Mode::TwoSided;
    let mut rng = crate::rng::root(seed);
    let cols: Vec<BitSet> = (0..pair.ny()).map(|j| pair.col(j)).collect();
    for trial in 0..trials {
        let side = if trial % 2 == 0 { Side::X } else { Side::Y };
        let (n_side, n_opp) = match side {
            Side::X => (pair.nx(), pair.ny()),
            Side::Y => (pair.ny(), pair.nx()),
        };
        if n_side < params.l || n_side == 0 {
            continue;
        }
        let t = rng.random_range(params.l..=n_side);
        // Floyd's sampling of a t-subset
        let mut subset = BitSet::new(n_side);
        for j in (n_side - t)..n_side {
            let r = rng.random_range(0..=j);
            if subset.contains(r) {
                subset.insert(j);
            } else {
                subset.insert(r);
            }
        }
        let mut bad_positions = Vec::new();
        for opp in 0..n_opp {
            let d = match side {
                Side::X => cols[opp].intersection_count(&subset),
                Side::Y => pair.row(opp).intersection_count(&subset),
            };
            if window_violates(d, t, params.p, two_sided) {
                bad_positions.push(opp);
                // no early break: the full bad list is part of the witness
            }
        }
        if bad_positions.len() > params.l {
            let (labels, opp_labels) = match side {
                Side::X => (pair.x_labels(), pair.y_labels()),
                Side::Y => (pair.y_labels(), pair.x_labels()),
            };
            let mut subset_labels: Vec<u32> = subset.iter().map(|i| labels[i]).collect();
            subset_labels.sort_unstable();
            let mut bad_labels: Vec<u32> = bad_positions.iter().map(|&i| opp_labels[i]).collect();
            bad_labels.sort_unstable();
            let witness = RegularityWitness {
                side,
                subset: subset_labels,
                bad: bad_labels,
            };
            // re-check exactly against the definition before claiming anything
            if verify_witness(pair, params, &witness) {
                return Some(witness);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Disjoint-set density condition
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct DensityViolation {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub edges: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityVerdict {
    pub certified: bool,
    pub violation: Option<DensityViolation>,
    pub pairs_checked: u64,
    /// Whether `n <= exp(t eps^2 p / 6)` holds, the regime in which the
    /// sampling argument guarantees existence.
    pub regime_guaranteed: Reported<bool>,
}

fn density_regime(n: usize, t: usize, p: Frac, eps: Frac) -> bool {
    if n <= 1 {
        return true;
    }
    let exponent = t as f64 * eps.to_f64() * eps.to_f64() * p.to_f64() / 6.0;
    (n as f64).ln() <= exponent
}

/// `|e(X',Y') - p t^2| <= eps p t^2` checked by exact cross-multiplication.
fn density_ok(e: u64, t: usize, p: Frac, eps: Frac) -> bool {
    // |e*pd - pn*t^2| * ed <= en * pn * t^2 * pd, scaled to clear denominators:
    // |e/1 - (pn/pd) t^2| <= (en/ed)(pn/pd) t^2
    // <=> |e*pd - pn t^2| * ed <= en * pn * t^2
    let t2 = (t * t) as i128;
    let lhs = (e as i128 * p.den() as i128 - p.num() as i128 * t2).abs() * eps.den() as i128;
    let rhs = eps.num() as i128 * p.num() as i128 * t2;
    lhs <= rhs
}

/// Exhaustively checks that every pair of disjoint `t`-sets has edge count
/// within `eps * p * t^2` of `p * t^2`.
pub fn check_density_condition(
    g: &Graph,
    t: usize,
    p: Frac,
    eps: Frac,
) -> Result<DensityVerdict> {
    if t == 0 {
        return Err(Error::Precondition("t must be >= 1".into()));
    }
    let n = g.n();
    let budget_needed = binomial(n, t).saturating_mul(binomial(n.saturating_sub(t), t));
    if budget_needed > DENSITY_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "density condition enumeration",
            required: budget_needed,
            budget: DENSITY_BUDGET,
        });
    }
    let regime = Reported::new(density_regime(n, t, p, eps), "n <= exp(t*eps^2*p/6)");
    let mut pairs_checked = 0u64;
    for xs in Combinations::new(n, t) {
        let xset = BitSet::from_indices(n, xs.iter().copied());
        let rest: Vec<usize> = (0..n).filter(|v| !xset.contains(*v)).collect();
        for ys_idx in Combinations::new(rest.len(), t) {
            let ys: Vec<usize> = ys_idx.iter().map(|&i| rest[i]).collect();
            // count each unordered pair once
            if ys[0] < xs[0] {
                continue;
            }
            let yset = BitSet::from_indices(n, ys.iter().copied());
            let e: usize = xs
                .iter()
                .map(|&x| g.neighbors(x as u32).intersection_count(&yset))
                .sum();
            pairs_checked += 1;
            if !density_ok(e as u64, t, p, eps) {
                return Ok(DensityVerdict {
                    certified: false,
                    violation: Some(DensityViolation {
                        x: xs.iter().map(|&v| v as u32).collect(),
                        y: ys.iter().map(|&v| v as u32).collect(),
                        edges: e as u64,
                    }),
                    pairs_checked,
                    regime_guaranteed: regime,
                });
            }
        }
    }
    Ok(DensityVerdict {
        certified: true,
        violation: None,
        pairs_checked,
        regime_guaranteed: regime,
    })
}

/// Counts all violating disjoint t-set pairs (for attempt statistics).
pub fn count_density_violations(g: &Graph, t: usize, p: Frac, eps: Frac) -> Result<u64> {
    let n = g.n();
    let budget_needed = binomial(n, t).saturating_mul(binomial(n.saturating_sub(t), t));
    if budget_needed > DENSITY_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "density violation count",
            required: budget_needed,
            budget: DENSITY_BUDGET,
        });
    }
    let mut count = 0u64;
    for xs in Combinations::new(n, t) {
        let xset = BitSet::from_indices(n, xs.iter().copied());
        let rest: Vec<usize> = (0..n).filter(|v| !xset.contains(*v)).collect();
        for ys_idx in Combinations::new(rest.len(), t) {
            let ys: Vec<usize> = ys_idx.iter().map(|&i| rest[i]).collect();
            if ys[0] < xs[0] {
                continue;
            }
            let yset = BitSet::from_indices(n, ys.iter().copied());
            let e: usize = xs
                .iter()
                .map(|&x| g.neighbors(x as u32).intersection_count(&yset))
                .sum();
            if !density_ok(e as u64, t, p, eps) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_pair() -> BipartitePair {
        // X = {x0..x3} all joined only to y0; Y has 4 vertices
        let mut rows = vec![BitSet::new(4); 4];
        for r in rows.iter_mut() {
            r.insert(0);
        }
        BipartitePair::from_rows(4, 4, rows).unwrap()
    }

    #[test]
    fn k44_certified_at_l1_p_half() {
        let pair = BipartitePair::complete(4, 4);
        let v = check_regularity_exact(&pair, &RegularityParams::two_sided(1, Frac::new(1, 2)))
            .unwrap();
        assert!(v.is_certified());
    }

    #[test]
    fn tiny_pair_is_vacuously_regular() {
        let pair = BipartitePair::empty_pair(2, 2);
        let v = check_regularity_exact(&pair, &RegularityParams::two_sided(3, Frac::new(1, 2)))
            .unwrap();
        assert!(v.is_certified());
    }

    #[test]
    fn star_refuted_with_full_x_witness() {
        let v = check_regularity_exact(&star_pair(), &RegularityParams::two_sided(1, Frac::new(1, 2)))
            .unwrap();
        assert_eq!(v.status, RegularityStatus::Refuted);
        let w = v.witness.unwrap();
        // minimal witness: X' = {x0, x1} already has y1..y3 bad (degree 0 < t/4... here 2*1*0 < 1*2)
        assert!(w.subset.len() >= 2);
        assert!(w.bad.len() > 1);
        assert!(verify_witness(&star_pair(), &RegularityParams::two_sided(1, Frac::new(1, 2)), &w));
    }

    #[test]
    fn sampled_refuter_finds_star_witness() {
        let params = RegularityParams::two_sided(1, Frac::new(1, 2));
        let w = refute_regularity_sampled(&star_pair(), &params, 100, 3).unwrap();
        assert!(verify_witness(&star_pair(), &params, &w));
    }

    #[test]
    fn sampled_refuter_silent_on_complete() {
        let pair = BipartitePair::complete(4, 4);
        let params = RegularityParams::two_sided(1, Frac::new(1, 2));
        assert!(refute_regularity_sampled(&pair, &params, 500, 5).is_none());
    }

    #[test]
    fn sampled_refuter_vacuous_when_parts_small() {
        let pair = BipartitePair::empty_pair(2, 2);
        let params = RegularityParams::two_sided(5, Frac::new(1, 2));
        assert!(refute_regularity_sampled(&pair, &params, 100, 1).is_none());
    }

    #[test]
    fn cap_error_mentions_sampled_refuter() {
        let pair = BipartitePair::complete(21, 4);
        let err = check_regularity_exact(&pair, &RegularityParams::two_sided(1, Frac::new(1, 2)))
            .unwrap_err();
        assert!(err.to_string().contains("refute_regularity_sampled"));
    }

    #[test]
    fn boundary_equality_is_not_bad() {
        // p = 1/3, subset size 3: window is (0.5, 2.0); degree 2 == 2p|X'| exactly
        // must NOT violate (strict inequality).
        assert!(!window_violates(2, 3, Frac::new(1, 3), true));
        assert!(window_violates(3, 3, Frac::new(1, 3), true)); // 3 > 2
        // d < p t / 2: p=1/3, t=3 -> 0.5; d=0 violates, d=1 does not
        assert!(window_violates(0, 3, Frac::new(1, 3), true));
        assert!(!window_violates(1, 3, Frac::new(1, 3), true));
    }

    #[test]
    fn monotone_in_l_on_random_pairs() {
        let mut rng = crate::rng::root(11);
        for _ in 0..40 {
            let rows: Vec<BitSet> = (0..6)
                .map(|_| {
                    let mut r = BitSet::new(6);
                    for j in 0..6 {
                        if rng.random_bool(0.5) {
                            r.insert(j);
                        }
                    }
                    r
                })
                .collect();
            let pair = BipartitePair::from_rows(6, 6, rows).unwrap();
            let p = Frac::new(1, 2);
            for l in 1..5 {
                let a = check_regularity_exact(&pair, &RegularityParams::two_sided(l, p)).unwrap();
                let b =
                    check_regularity_exact(&pair, &RegularityParams::two_sided(l + 1, p)).unwrap();
                if a.is_certified() {
                    assert!(b.is_certified(), "monotonicity in L failed at L={l}");
                }
            }
        }
    }

    #[test]
    fn two_sided_implies_lower_only() {
        let mut rng = crate::rng::root(12);
        for _ in 0..40 {
            let rows: Vec<BitSet> = (0..5)
                .map(|_| {
                    let mut r = BitSet::new(5);
                    for j in 0..5 {
                        if rng.random_bool(0.6) {
                            r.insert(j);
                        }
                    }
                    r
                })
                .collect();
            let pair = BipartitePair::from_rows(5, 5, rows).unwrap();
            let p = Frac::new(1, 2);
            let two = check_regularity_exact(&pair, &RegularityParams::two_sided(2, p)).unwrap();
            let low = check_regularity_exact(&pair, &RegularityParams::lower_only(2, p)).unwrap();
            if two.is_certified() {
                assert!(low.is_certified());
            }
        }
    }

    #[test]
    fn density_condition_complete_graph_certifies_at_p1() {
        // p = 1 is outside (0,1) for regularity params but fine here:
        // e(X',Y') = t^2 exactly
        let k5 = Graph::complete(5);
        let v = check_density_condition(&k5, 2, Frac::ONE, Frac::new(1, 10)).unwrap();
        assert!(v.certified);
    }

    #[test]
    fn density_condition_empty_graph_refuted() {
        let g = Graph::empty(5);
        let v = check_density_condition(&g, 2, Frac::new(1, 2), Frac::new(1, 2)).unwrap();
        assert!(!v.certified);
        let viol = v.violation.unwrap();
        assert_eq!(viol.edges, 0);
    }

    #[test]
    fn density_budget_guard() {
        let g = Graph::empty(64);
        assert!(matches!(
            check_density_condition(&g, 10, Frac::new(1, 2), Frac::new(1, 2)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
