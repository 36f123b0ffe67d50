//! The (g, k) region the constructions cover, set-membership tags, explicit
//! derivation paths from the base pair, and the asymptotic ratio of the
//! cut-off line.

use crate::constructions::{
    base_case, construct_first, construct_second, construct_third, max_speed, ChainLedger,
};
use crate::numerics::{bn_gap, rho, PairGK};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Membership tags for the covering-set decompositions of the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionTag {
    S1,
    S2,
    S3,
    T1,
    T2,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionInfo {
    pub pair: PairGK,
    pub in_region: bool,
    pub tags: Vec<RegionTag>,
    /// which constraint produces the lower end: the floor formula or rho >= 0
    pub lower_binding: &'static str,
    /// true when a tagged set admits the pair but the headline inequalities
    /// do not (the even-k constants disagree by one for k = 0 mod 4)
    pub tag_inconsistency: bool,
}

fn odd_lower(k1: i64) -> i64 {
    k1 * k1 + k1 - ((k1 - 2) * (k1 - 2) + 3) / 12
}

fn even_lower(k1: i64) -> i64 {
    k1 * k1 - (k1 - 4) * (k1 - 4) / 12 - 1
}

/// Region test per the headline inequalities, with membership tags.
///
/// Upper bounds are the negative-gap lines: `g <= k1^2 + k1` for odd k and
/// `g <= k1^2 - 1` for even k (the even case is exactly the image of the
/// terminal construction; larger even g has non-negative gap and belongs to
/// the earlier semistable-only regime, which this tool does not re-derive).
pub fn in_region(p: PairGK) -> RegionInfo {
    let k1 = p.k1();
    let g = p.g;
    let k = p.k;
    let mut tags = Vec::new();
    if k % 2 == 1 && k >= 5 {
        if bn_gap(p) == -1 && rho(p) >= 0 {
            tags.push(RegionTag::S1);
        }
        if k >= 9
            && k % 4 == 1
            && g <= k1 * k1 + k1
            && g >= k1 * k1 + k1 - 1 - (k1 - 2) * (k1 - 2) / 12
        {
            tags.push(RegionTag::S2);
        }
        if k >= 7 && k % 4 == 3 && g <= k1 * k1 + k1 && g >= odd_lower(k1) {
            tags.push(RegionTag::S3);
        }
    }
    if k % 2 == 0 {
        if k >= 8 && k % 4 == 0 && g <= k1 * k1 + k1 && g >= k1 * k1 - 2 - (k1 - 4) * (k1 - 4) / 12
        {
            tags.push(RegionTag::T1);
        }
        if k >= 10 && k % 4 == 2 && g <= k1 * k1 + k1 && g >= k1 * k1 - 1 - (k1 - 4) * (k1 - 4) / 12
        {
            tags.push(RegionTag::T2);
        }
    }
    let (formula_ok, lower_binding) = if k % 2 == 1 && k >= 5 {
        let lo = odd_lower(k1);
        let rho_lo = rho(p) >= 0;
        (
            g >= lo && g <= k1 * k1 + k1 && rho_lo,
            if lo >= rho_min_g(k) {
                "floor-formula"
            } else {
                "rho"
            },
        )
    } else if k % 2 == 0 && k >= 8 {
        let lo = even_lower(k1);
        (
            g >= lo && g < k1 * k1 && rho(p) >= 0,
            if lo >= rho_min_g(k) {
                "floor-formula"
            } else {
                "rho"
            },
        )
    } else {
        (false, "out-of-scope")
    };
    let tag_inconsistency = !formula_ok && !tags.is_empty() && rho(p) >= 0;
    RegionInfo {
        pair: p,
        in_region: formula_ok,
        tags,
        lower_binding,
        tag_inconsistency,
    }
}

/// Smallest g with non-negative expected dimension at this k.
fn rho_min_g(k: i64) -> i64 {
    // 3g - 3 - k(k+1)/2 >= 0
    (k * (k + 1) / 2 + 3 + 2) / 3
}

/// All covered pairs with `5 <= k <= k_max`, sorted by (k, g).
pub fn enumerate_region(k_max: i64) -> Result<Vec<PairGK>> {
    if k_max < 5 {
        return Err(Error::InvalidParameter(format!(
            "enumerate_region needs k_max >= 5, got {k_max}"
        )));
    }
    let mut out = Vec::new();
    for k in 5..=k_max {
        let k1 = k / 2;
        for g in 1..=(k1 * k1 + k1) {
            let p = PairGK::new(g, k)?;
            if in_region(p).in_region {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// One construction move in a derivation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum PathMove {
    First { q: i64 },
    Second,
    Third,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivationPath {
    pub start: PairGK,
    pub moves: Vec<PathMove>,
    pub end: PairGK,
}

impl DerivationPath {
    /// Replay the move arithmetic (no tables) and check the invariants:
    /// intermediate pairs keep `rho >= 0`, speeds stay admissible, and a
    /// terminal third move lands on the endpoint.
    pub fn validate(&self) -> Result<()> {
        let mut cur = self.start;
        for (i, mv) in self.moves.iter().enumerate() {
            if rho(cur) < 0 {
                return Err(Error::ConstructionBug(format!(
                    "negative rho at intermediate pair ({}, {})",
                    cur.g, cur.k
                )));
            }
            let k1 = cur.k1();
            cur = match *mv {
                PathMove::First { q } => {
                    if q < 1 || q > max_speed(k1) {
                        return Err(Error::ConstructionBug(format!("bad speed {q}")));
                    }
                    PairGK::new(cur.g + 2 * cur.k + 4 - q, cur.k + 4)?
                }
                PathMove::Second => PairGK::new(cur.g + cur.k + 1, cur.k + 2)?,
                PathMove::Third => {
                    if i + 1 != self.moves.len() {
                        return Err(Error::ConstructionBug("third move must be last".into()));
                    }
                    PairGK::new(cur.g + 3 * (cur.k + 1) / 2, cur.k + 3)?
                }
            };
        }
        if cur != self.end {
            return Err(Error::ConstructionBug(format!(
                "path replays to ({}, {}), not ({}, {})",
                cur.g, cur.k, self.end.g, self.end.k
            )));
        }
        Ok(())
    }

    /// Rebuild the full ledger chain along the path.
    pub fn replay(&self) -> Result<ChainLedger> {
        let mut ledger = base_case();
        for mv in &self.moves {
            ledger = match *mv {
                PathMove::First { q } => construct_first(&ledger, q)?,
                PathMove::Second => construct_second(&ledger)?,
                PathMove::Third => construct_third(&ledger)?,
            };
        }
        if (ledger.g() as i64, ledger.k() as i64) != (self.end.g, self.end.k) {
            return Err(Error::ConstructionBug("replay endpoint mismatch".into()));
        }
        Ok(ledger)
    }
}

type SearchTree = BTreeMap<(i64, i64), Option<((i64, i64), PathMove)>>;

/// Breadth-first search over the move arithmetic from (6,5), exploring
/// larger speeds first.
fn odd_reachable(k_max: i64) -> SearchTree {
    let mut parents: SearchTree = BTreeMap::new();
    parents.insert((6, 5), None);
    let mut frontier = vec![(6i64, 5i64)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (g, k) in frontier {
            let k1 = k / 2;
            let mut steps: Vec<((i64, i64), PathMove)> = Vec::new();
            for q in (1..=max_speed(k1)).rev() {
                steps.push(((g + 2 * k + 4 - q, k + 4), PathMove::First { q }));
            }
            steps.push(((g + k + 1, k + 2), PathMove::Second));
            for (st, mv) in steps {
                if st.1 > k_max || parents.contains_key(&st) {
                    continue;
                }
                parents.insert(st, Some(((g, k), mv)));
                next.push(st);
            }
        }
        frontier = next;
    }
    parents
}

/// Find a derivation path for a pair: BFS over odd pairs, with even targets
/// pulled back through the terminal move first. Paths are certificates, not
/// canonical objects.
pub fn derivation_path(p: PairGK) -> Result<DerivationPath> {
    let (odd_target, tail) = if p.k % 2 == 0 {
        let seed_k = p.k - 3;
        let seed_g = p.g - 3 * (seed_k + 1) / 2;
        if seed_g < 6 || seed_k < 5 {
            return Err(Error::SearchFailure(p.g, p.k));
        }
        ((seed_g, seed_k), vec![PathMove::Third])
    } else {
        ((p.g, p.k), vec![])
    };
    let parents = odd_reachable(odd_target.1);
    if !parents.contains_key(&odd_target) {
        return Err(Error::SearchFailure(p.g, p.k));
    }
    let mut moves = Vec::new();
    let mut cur = odd_target;
    while let Some(Some((prev, mv))) = parents.get(&cur) {
        moves.push(*mv);
        cur = *prev;
    }
    moves.reverse();
    moves.extend(tail);
    let path = DerivationPath {
        start: PairGK::new(6, 5)?,
        moves,
        end: p,
    };
    path.validate()?;
    Ok(path)
}

/// Exact rational, reduced, for the asymptotic report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio {
            num: s * num / g,
            den: s * den / g,
        }
    }
    pub fn cmp_ratio(&self, other: &Ratio) -> std::cmp::Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

/// `g_min(2k1+1) / k1^2` as an exact rational; tends to 11/12 from above.
pub fn asymptotic_ratio(k1: i64) -> Result<Ratio> {
    if k1 < 2 {
        return Err(Error::InvalidParameter(
            "asymptotic_ratio needs k1 >= 2".into(),
        ));
    }
    Ok(Ratio::new(odd_lower(k1), k1 * k1))
}

/// CSV summary of the region: one line `k, g_min, g_max, count` per k.
pub fn region_csv(pairs: &[PairGK]) -> String {
    let mut by_k: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for p in pairs {
        by_k.entry(p.k).or_default().push(p.g);
    }
    let mut out = String::from("k,g_min,g_max,count\n");
    for (k, gs) in by_k {
        let gmin = gs.iter().min().unwrap();
        let gmax = gs.iter().max().unwrap();
        out.push_str(&format!("{k},{gmin},{gmax},{}\n", gs.len()));
    }
    out
}
