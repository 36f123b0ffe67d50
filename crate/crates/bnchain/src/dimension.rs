//! Fiber-dimension bounds and whole-chain dimension accounting.
//!
//! The per-node bounds come from three counting rules, one per stability
//! class of the incoming component's bundle. They consume the configuration
//! at the node — the partition of rows with non-repeated vanishing order
//! recording which sections restrict to the same point of the projectivized
//! fiber. Configurations are propagated generically along the chain;
//! whenever a component demands a merge the generic partition does not have
//! (the destabilizing rows of an unstable component, or the summand-pinned
//! rows of a semistable one), the merge is a codimension condition booked as
//! a correction, attributed to the earliest node where the condition is
//! expressible.

use crate::constructions::{
    base_case, construct_first, construct_second, construct_third, ChainLedger, Move,
};
use crate::numerics::{rho, PairGK};
use crate::vanishing::{
    check_semistable_pair, check_unstable_pair, BundleSpec, Stability, VanishingTable,
};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Partition of the non-repeated-order rows at a node. Blocks are pairwise
/// disjoint and kept sorted by least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigurationPartition {
    pub node: usize,
    pub blocks: Vec<BTreeSet<usize>>,
}

impl ConfigurationPartition {
    fn normalize(&mut self) {
        self.blocks.retain(|b| !b.is_empty());
        self.blocks.sort_by_key(|b| *b.iter().next().unwrap());
    }

    pub fn singletons(node: usize, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut cfg = ConfigurationPartition {
            node,
            blocks: rows.into_iter().map(|i| BTreeSet::from([i])).collect(),
        };
        cfg.normalize();
        cfg
    }

    pub fn block_of(&self, row: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&row))
    }
}

fn nonrep_rows(col: &[i64]) -> BTreeSet<usize> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &v in col {
        *counts.entry(v).or_insert(0) += 1;
    }
    col.iter()
        .enumerate()
        .filter(|(_, v)| counts[v] == 1)
        .map(|(i, _)| i)
        .collect()
}

/// One component's column pair and degree.
#[derive(Debug, Clone, Copy)]
pub struct ColumnPair<'a> {
    pub a: &'a [i64],
    pub b: &'a [i64],
    pub deg: i64,
}

impl<'a> ColumnPair<'a> {
    fn sums(&self) -> Vec<i64> {
        self.a.iter().zip(self.b).map(|(x, y)| x + y).collect()
    }
    fn half(&self) -> i64 {
        if self.deg % 2 == 0 {
            self.deg / 2
        } else {
            (self.deg - 1) / 2
        }
    }
}

/// Semistable bound: `2 - |A1 u A2|`, where `A1` collects the blocks
/// containing a special row of the next component and `A2` the blocks
/// containing the row just above a special with vanishing order exactly one
/// less.
pub fn m_bound_semistable(
    bundle_next: &BundleSpec,
    cfg: &ConfigurationPartition,
    cols: ColumnPair<'_>,
) -> Result<i64> {
    if bundle_next.stability != Stability::Semistable {
        return Err(Error::NotApplicable(format!(
            "m_bound_semistable on a {:?} bundle",
            bundle_next.stability
        )));
    }
    let d = cols.half();
    let w = check_semistable_pair(cols.a, cols.b, d).map_err(|violations| Error::Infeasible {
        component: 0,
        violations,
    })?;
    let mut hit: BTreeSet<usize> = BTreeSet::new();
    for s in [w.i1, w.i2] {
        if let Some(bi) = cfg.block_of(s) {
            hit.insert(bi);
        }
        if s > 0 {
            let above = s - 1;
            if above != w.i1 && above != w.i2 && cols.a[above] == cols.a[s] - 1 {
                if let Some(bi) = cfg.block_of(above) {
                    hit.insert(bi);
                }
            }
        }
    }
    Ok(2 - hit.len() as i64)
}

/// Isomorphic-summand bound: always 0.
pub fn m_bound_double(bundle_next: &BundleSpec) -> Result<i64> {
    if bundle_next.stability != Stability::Double {
        return Err(Error::NotApplicable(format!(
            "m_bound_double on a {:?} bundle",
            bundle_next.stability
        )));
    }
    Ok(0)
}

/// Unstable bound: `1 - eps + |M|`, with `M` the rows of non-repeated right
/// order summing to `(deg-1)/2 - 1` and `eps = 1` when some block carries a
/// row of full sum.
pub fn m_bound_unstable(cols: ColumnPair<'_>, cfg: &ConfigurationPartition) -> Result<i64> {
    if cols.deg % 2 == 0 {
        return Err(Error::NotApplicable("even degree is not unstable".into()));
    }
    let d = cols.half();
    let sums = cols.sums();
    let nb = nonrep_rows(cols.b);
    let m_size = (0..cols.a.len())
        .filter(|&i| nb.contains(&i) && sums[i] == d - 1)
        .count() as i64;
    let eps = cfg
        .blocks
        .iter()
        .any(|blk| blk.iter().any(|&i| sums[i] >= d));
    Ok(1 - if eps { 1 } else { 0 } + m_size)
}

/// Destabilizing rows of an unstable component: every row of full or higher
/// sum except the repeated special pair (whose sections span the other
/// summand's section space).
fn dest_rows(cols: ColumnPair<'_>) -> Result<BTreeSet<usize>> {
    let d = cols.half();
    let w = check_unstable_pair(cols.a, cols.b, d).map_err(|violations| Error::Infeasible {
        component: 0,
        violations,
    })?;
    let sums = cols.sums();
    Ok((0..cols.a.len())
        .filter(|&i| i != w.i_star && i != w.i_star + 1 && sums[i] >= d)
        .collect())
}

/// Summand-pin groups at the right node of a semistable component: the
/// special row of each summand together with the sum-(d-1) rows whose
/// a-value equals the other summand's twist (their leading term at the right
/// node is forced into this summand).
fn right_pins(cols: ColumnPair<'_>) -> Result<[BTreeSet<usize>; 2]> {
    let d = cols.half();
    let w = check_semistable_pair(cols.a, cols.b, d).map_err(|violations| Error::Infeasible {
        component: 0,
        violations,
    })?;
    let (x1, x2) = (cols.a[w.i1], cols.a[w.i2]);
    let sums = cols.sums();
    let mut p1 = BTreeSet::from([w.i1]);
    let mut p2 = BTreeSet::from([w.i2]);
    for (i, &s) in sums.iter().enumerate() {
        if i == w.i1 || i == w.i2 || s != d - 1 {
            continue;
        }
        if cols.a[i] == x2 {
            p1.insert(i);
        }
        if cols.a[i] == x1 {
            p2.insert(i);
        }
    }
    Ok([p1, p2])
}

/// The mirrored groups at the left node: specials plus the sum-(d-1) rows
/// with `a_i + 1` equal to the other summand's twist.
fn left_pins(cols: ColumnPair<'_>) -> Result<[BTreeSet<usize>; 2]> {
    let d = cols.half();
    let w = check_semistable_pair(cols.a, cols.b, d).map_err(|violations| Error::Infeasible {
        component: 0,
        violations,
    })?;
    let (x1, x2) = (cols.a[w.i1], cols.a[w.i2]);
    let sums = cols.sums();
    let mut p1 = BTreeSet::from([w.i1]);
    let mut p2 = BTreeSet::from([w.i2]);
    for (i, &s) in sums.iter().enumerate() {
        if i == w.i1 || i == w.i2 || s != d - 1 {
            continue;
        }
        if cols.a[i] == x2 - 1 {
            p1.insert(i);
        }
        if cols.a[i] == x1 - 1 {
            p2.insert(i);
        }
    }
    Ok([p1, p2])
}

/// Rows dropped from a propagated partition (repeated at the right node).
#[derive(Debug, Clone, Serialize)]
pub struct PropagationOutcome {
    pub cfg: ConfigurationPartition,
    pub dropped: Vec<usize>,
}

/// Push a configuration through one component. Double bundles transfer the
/// partition wholesale; unstable ones collapse all destabilizing rows into
/// one block and free everything else; semistable ones keep a same-block
/// pair together exactly when its left orders sum to `x1 + x2 - 1`, then
/// merge in the summand pins.
pub fn propagate_configuration(
    bundle: &BundleSpec,
    cfg_in: &ConfigurationPartition,
    cols: ColumnPair<'_>,
) -> Result<PropagationOutcome> {
    let nr = nonrep_rows(cols.b);
    let all_in: BTreeSet<usize> = cfg_in.blocks.iter().flatten().copied().collect();
    let dropped: Vec<usize> = all_in.iter().copied().filter(|i| !nr.contains(i)).collect();
    let node = cfg_in.node + 1;
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    match bundle.stability {
        Stability::Double => {
            for blk in &cfg_in.blocks {
                let b: BTreeSet<usize> = blk.intersection(&nr).copied().collect();
                if !b.is_empty() {
                    out.push(b);
                }
            }
        }
        Stability::Unstable => {
            let dest = dest_rows(cols)?;
            let mut destblock: BTreeSet<usize> = dest.intersection(&nr).copied().collect();
            for blk in &cfg_in.blocks {
                if blk.iter().any(|i| dest.contains(i)) {
                    destblock.extend(blk.intersection(&nr).copied());
                }
            }
            if !destblock.is_empty() {
                out.push(destblock);
            }
        }
        Stability::Semistable => {
            let d = cols.half();
            let w = check_semistable_pair(cols.a, cols.b, d).map_err(|violations| {
                Error::Infeasible {
                    component: 0,
                    violations,
                }
            })?;
            let sum_rule = cols.a[w.i1] + cols.a[w.i2] - 1;
            let pins = right_pins(cols)?;
            let pin_of = |i: usize| -> Option<usize> {
                if pins[0].contains(&i) {
                    Some(0)
                } else if pins[1].contains(&i) {
                    Some(1)
                } else {
                    None
                }
            };
            let mut pinned: [BTreeSet<usize>; 2] = [
                pins[0].intersection(&nr).copied().collect(),
                pins[1].intersection(&nr).copied().collect(),
            ];
            for blk in &cfg_in.blocks {
                // split by the pairwise sum rule: rows with left orders v and
                // sum_rule - v stay together
                let mut byval: BTreeMap<i64, BTreeSet<usize>> = BTreeMap::new();
                for &i in blk {
                    let key = cols.a[i].min(sum_rule - cols.a[i]);
                    byval.entry(key).or_default().insert(i);
                }
                for piece in byval.values() {
                    let pin = piece.iter().find_map(|&i| pin_of(i));
                    let survivors: BTreeSet<usize> = piece.intersection(&nr).copied().collect();
                    match pin {
                        Some(s) => pinned[s].extend(survivors),
                        None => {
                            if !survivors.is_empty() {
                                out.push(survivors);
                            }
                        }
                    }
                }
            }
            for p in pinned {
                if !p.is_empty() {
                    out.push(p);
                }
            }
        }
    }
    let used: BTreeSet<usize> = out.iter().flatten().copied().collect();
    for i in nr.difference(&used) {
        out.push(BTreeSet::from([*i]));
    }
    let mut cfg = ConfigurationPartition { node, blocks: out };
    cfg.normalize();
    Ok(PropagationOutcome { cfg, dropped })
}

// ---------------------------------------------------------------------------
// whole-chain accounting

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundRule {
    Base,
    Step,
    Semistable,
    Double,
    Unstable,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeEntry {
    /// component index (forgetting this component), or the stage seed for
    /// base / step entries
    pub component: usize,
    pub rule: BoundRule,
    pub bound: i64,
    /// non-positive; demanded merges booked at this node
    pub correction: i64,
    pub justification: String,
    pub running_total: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberBoundReport {
    pub entries: Vec<NodeEntry>,
    pub total: i64,
}

struct Engine<'a> {
    t: &'a VanishingTable,
    bundles: &'a [BundleSpec],
}

impl<'a> Engine<'a> {
    fn pair(&self, j: usize) -> (Vec<i64>, Vec<i64>, i64) {
        (self.t.a_col(j), self.t.b_col(j), self.t.d_vec[j - 1])
    }

    /// Earliest node at which merging rows `i, ip` is expressible, chaining
    /// the condition backward through components that transport it.
    fn chain_back(&self, j: usize, i: usize, ip: usize) -> usize {
        let mut m = j;
        while m > 2 {
            let c = m - 1;
            let (a, b, deg) = self.pair(c);
            let nl = nonrep_rows(&self.t.a_col(c));
            if !nl.contains(&i) || !nl.contains(&ip) {
                break;
            }
            match self.bundles[c - 1].stability {
                Stability::Double => {
                    m -= 1;
                }
                Stability::Semistable => {
                    let d = deg / 2;
                    let Ok(w) = check_semistable_pair(&a, &b, d) else {
                        break;
                    };
                    if i == w.i1 || i == w.i2 || ip == w.i1 || ip == w.i2 {
                        break;
                    }
                    if a[i] + a[ip] == a[w.i1] + a[w.i2] - 1 {
                        m -= 1;
                    } else {
                        break;
                    }
                }
                Stability::Unstable => break,
            }
        }
        m
    }

    /// Apply the demand merges of component `j` to `cfg` (the configuration
    /// at its left node), returning per-node corrections.
    fn apply_demands(
        &self,
        j: usize,
        cfg: &mut ConfigurationPartition,
    ) -> Result<BTreeMap<usize, i64>> {
        let (a, b, deg) = self.pair(j);
        let cols = ColumnPair { a: &a, b: &b, deg };
        let nl = nonrep_rows(&a);
        let groups: Vec<BTreeSet<usize>> = match self.bundles[j - 1].stability {
            Stability::Unstable => {
                vec![dest_rows(cols)?.intersection(&nl).copied().collect()]
            }
            Stability::Semistable => left_pins(cols)?
                .into_iter()
                .map(|g| g.intersection(&nl).copied().collect())
                .collect(),
            Stability::Double => vec![],
        };
        let mut corrs: BTreeMap<usize, i64> = BTreeMap::new();
        for group in groups {
            if group.len() <= 1 {
                continue;
            }
            let covering: Vec<usize> = (0..cfg.blocks.len())
                .filter(|&bi| cfg.blocks[bi].iter().any(|i| group.contains(i)))
                .collect();
            if covering.len() <= 1 {
                continue;
            }
            // spanning tree over the covering blocks, earliest-expressible
            // merges first
            let mut edges = Vec::new();
            for (xi, &ba) in covering.iter().enumerate() {
                for &bb in covering.iter().skip(xi + 1) {
                    let m = cfg.blocks[ba]
                        .iter()
                        .filter(|i| group.contains(i))
                        .flat_map(|&i| {
                            cfg.blocks[bb]
                                .iter()
                                .filter(|ip| group.contains(ip))
                                .map(move |&ip| self.chain_back(j, i, ip))
                        })
                        .min()
                        .unwrap_or(j);
                    edges.push((m, ba, bb));
                }
            }
            edges.sort_unstable();
            let mut parent: BTreeMap<usize, usize> = covering.iter().map(|&b| (b, b)).collect();
            fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
                let p = parent[&x];
                if p == x {
                    x
                } else {
                    let r = find(parent, p);
                    parent.insert(x, r);
                    r
                }
            }
            for (m, ba, bb) in edges {
                let (ra, rb) = (find(&mut parent, ba), find(&mut parent, bb));
                if ra != rb {
                    parent.insert(ra, rb);
                    *corrs.entry(m).or_insert(0) -= 1;
                }
            }
            let mut merged = BTreeSet::new();
            for &bi in covering.iter().rev() {
                merged.extend(cfg.blocks.remove(bi));
            }
            cfg.blocks.push(merged);
            cfg.normalize();
        }
        Ok(corrs)
    }

    /// Configuration at the right node of component 1.
    fn initial_cfg(&self) -> Result<ConfigurationPartition> {
        let (a, b, deg) = self.pair(1);
        let nr = nonrep_rows(&b);
        if self.bundles[0].stability == Stability::Semistable {
            let cols = ColumnPair { a: &a, b: &b, deg };
            let pins = right_pins(cols)?;
            let mut blocks: Vec<BTreeSet<usize>> = pins
                .iter()
                .map(|p| p.intersection(&nr).copied().collect::<BTreeSet<_>>())
                .filter(|p: &BTreeSet<usize>| !p.is_empty())
                .collect();
            let used: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
            for i in nr.difference(&used) {
                blocks.push(BTreeSet::from([*i]));
            }
            let mut cfg = ConfigurationPartition { node: 2, blocks };
            cfg.normalize();
            Ok(cfg)
        } else {
            Ok(ConfigurationPartition::singletons(2, nr))
        }
    }

    /// Walk the whole chain: per-component class, raw bound, and corrections.
    fn run(&self) -> Result<(NodeBoundMap, CorrectionMap)> {
        let mut cfg = self.initial_cfg()?;
        let mut raw = BTreeMap::new();
        let mut corrs: BTreeMap<usize, i64> = BTreeMap::new();
        for j in 2..=self.t.g {
            let stage_corrs = self.apply_demands(j, &mut cfg)?;
            for (m, dv) in stage_corrs {
                *corrs.entry(m).or_insert(0) += dv;
            }
            let (a, b, deg) = self.pair(j);
            let cols = ColumnPair { a: &a, b: &b, deg };
            let bundle = &self.bundles[j - 1];
            let bound = match bundle.stability {
                Stability::Double => m_bound_double(bundle)?,
                Stability::Semistable => m_bound_semistable(bundle, &cfg, cols)?,
                Stability::Unstable => m_bound_unstable(cols, &cfg)?,
            };
            raw.insert(j, (bundle.stability, bound));
            cfg = propagate_configuration(bundle, &cfg, cols)?.cfg;
        }
        Ok((raw, corrs))
    }
}

/// Per-component stability class and raw bound, keyed by component index.
pub type NodeBoundMap = BTreeMap<usize, (Stability, i64)>;
/// Booked corrections keyed by the node carrying the condition.
pub type CorrectionMap = BTreeMap<usize, i64>;

/// Raw per-component bounds and corrections from one pass of the
/// configuration engine over a whole chain (components 2..=g). Keys are
/// component indices; corrections may be booked at earlier nodes than the
/// component that demanded them.
pub fn chain_node_bounds(ledger: &ChainLedger) -> Result<(NodeBoundMap, CorrectionMap)> {
    let engine = Engine {
        t: &ledger.table,
        bundles: &ledger.bundles,
    };
    engine.run()
}

fn rule_of(s: Stability) -> BoundRule {
    match s {
        Stability::Semistable => BoundRule::Semistable,
        Stability::Double => BoundRule::Double,
        Stability::Unstable => BoundRule::Unstable,
    }
}

fn stage_tag(mv: &Move, j: usize) -> String {
    match *mv {
        Move::Base => "base".into(),
        Move::Second { .. } => "constant-gap".into(),
        Move::Third { .. } => "even-terminal".into(),
        Move::First { seed_g, seed_k, q } => {
            let k1 = seed_k as i64 / 2;
            let last_eleven = seed_g + 9 + 11 * (q as usize - 1);
            let gp = seed_g + (4 * k1 + 6 - q) as usize;
            if j <= seed_g + 9 {
                "head-block".into()
            } else if j <= last_eleven {
                "eleven-block".into()
            } else if j > gp - 4 {
                "terminal".into()
            } else {
                "tail-block".into()
            }
        }
    }
}

/// Replay a ledger's provenance and assemble per-node bounds, corrections,
/// and the step contributions into a dimension report. For every chain the
/// constructions produce, the total equals `rho(g, k)`.
pub fn account_dimension(ledger: &ChainLedger) -> Result<FiberBoundReport> {
    if ledger.provenance.first() != Some(&Move::Base) {
        return Err(Error::CannotAccount(
            "provenance does not start at the base case".into(),
        ));
    }
    let mut entries = Vec::new();
    let mut total = 0i64;
    let mut current = base_case();
    // base contribution: stack of the first component (-2) plus the bounds
    // over components 2..6, which add to +2
    {
        let engine = Engine {
            t: &current.table,
            bundles: &current.bundles,
        };
        let (raw, corrs) = engine.run()?;
        total += -2;
        entries.push(NodeEntry {
            component: 1,
            rule: BoundRule::Base,
            bound: -2,
            correction: 0,
            justification: "base".into(),
            running_total: total,
        });
        for (j, (stab, bound)) in raw {
            let correction = *corrs.get(&j).unwrap_or(&0);
            total += bound + correction;
            entries.push(NodeEntry {
                component: j,
                rule: rule_of(stab),
                bound,
                correction,
                justification: "base".into(),
                running_total: total,
            });
        }
    }
    for mv in ledger.provenance.iter().skip(1) {
        let seed_g = current.g();
        let next = match *mv {
            Move::Base => {
                return Err(Error::CannotAccount("base move in the middle".into()));
            }
            Move::First { q, .. } => construct_first(&current, q)?,
            Move::Second { .. } => construct_second(&current)?,
            Move::Third { .. } => construct_third(&current)?,
        };
        let step = match mv {
            Move::Third { .. } => 0, // the truncated object is unique over its image
            _ => 1,                  // one-dimensional extension fibers
        };
        if step != 0 {
            total += step;
            entries.push(NodeEntry {
                component: seed_g,
                rule: BoundRule::Step,
                bound: step,
                correction: 0,
                justification: "extension-step".into(),
                running_total: total,
            });
        }
        let engine = Engine {
            t: &next.table,
            bundles: &next.bundles,
        };
        // merges booked at seed components were counted by the stage that
        // created them and are skipped below; the stage increments summing
        // to the expected dimension is what certifies nothing is lost
        let (raw, corrs) = engine.run()?;
        for (j, (stab, bound)) in raw.iter() {
            if *j <= seed_g {
                continue;
            }
            let correction = *corrs.get(j).unwrap_or(&0);
            total += bound + correction;
            entries.push(NodeEntry {
                component: *j,
                rule: rule_of(*stab),
                bound: *bound,
                correction,
                justification: stage_tag(mv, *j),
                running_total: total,
            });
        }
        current = next;
    }
    if current.table != ledger.table {
        return Err(Error::CannotAccount(
            "provenance replay does not reproduce the ledger".into(),
        ));
    }
    Ok(FiberBoundReport { entries, total })
}

/// Expected raw bounds for the first construction, per component offset.
/// Used by the acceptance suite as the pinned reference values.
pub fn expected_first_bounds(seed_g: usize, k1: i64, q: i64) -> BTreeMap<usize, i64> {
    let g = seed_g;
    let mut exp = BTreeMap::new();
    exp.insert(g + 1, 1);
    exp.insert(g + 2, 2);
    exp.insert(g + 3, 0);
    exp.insert(g + 4, 1);
    exp.insert(g + 5, 1);
    exp.insert(g + 6, if k1 > 2 { 2 } else { 1 });
    exp.insert(g + 7, 0);
    exp.insert(g + 8, 2);
    exp.insert(g + 9, 0);
    for s in 0..(q - 1) as usize {
        exp.insert(g + 10 + 11 * s, 3);
        exp.insert(g + 11 + 11 * s, 2);
        exp.insert(g + 12 + 11 * s, 0);
        exp.insert(g + 13 + 11 * s, 1);
        exp.insert(g + 14 + 11 * s, 1);
        exp.insert(g + 15 + 11 * s, 1);
        exp.insert(g + 16 + 11 * s, 2);
        exp.insert(g + 17 + 11 * s, 0);
        exp.insert(g + 18 + 11 * s, 0);
        exp.insert(g + 19 + 11 * s, 2);
        exp.insert(g + 20 + 11 * s, 0);
    }
    let h = g + (11 * q - 2) as usize;
    for l in 0..=(k1 - 3 * q).max(-1) {
        if l < 0 {
            break;
        }
        let l = l as usize;
        exp.insert(h + 4 * l + 1, 2);
        exp.insert(h + 4 * l + 2, 0);
        exp.insert(h + 4 * l + 3, 2);
        exp.insert(h + 4 * l + 4, 0);
    }
    let gp = g + (4 * k1 + 6 - q) as usize;
    exp.insert(gp - 3, 0);
    exp.insert(gp - 2, 2);
    exp.insert(gp - 1, 0);
    exp.insert(gp, 0);
    exp
}

/// Expected corrections for the first construction (the two block identities).
pub fn expected_first_corrections(seed_g: usize, k1: i64, q: i64) -> BTreeMap<usize, i64> {
    let g = seed_g;
    let mut exp = BTreeMap::new();
    exp.insert(g + 4, -1);
    if k1 > 2 {
        exp.insert(g + 8, -1);
    }
    exp.insert(g + 9, -1);
    for s in 0..(q - 1) as usize {
        exp.insert(g + 11 + 11 * s, -1);
        exp.insert(g + 13 + 11 * s, -2);
    }
    exp
}

/// Sanity wrapper: account a ledger and demand the exact expected dimension.
pub fn account_and_check(ledger: &ChainLedger) -> Result<FiberBoundReport> {
    let rep = account_dimension(ledger)?;
    let p = PairGK::new(ledger.g() as i64, ledger.k() as i64)?;
    if rep.total != rho(p) {
        return Err(Error::CannotAccount(format!(
            "total {} != rho({},{}) = {}",
            rep.total,
            p.g,
            p.k,
            rho(p)
        )));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_cols(t: &VanishingTable, j: usize) -> (Vec<i64>, Vec<i64>, i64) {
        (t.a_col(j), t.b_col(j), t.d_vec[j - 1])
    }

    #[test]
    fn base_bounds_and_total() {
        let ledger = base_case();
        let rep = account_dimension(&ledger).unwrap();
        assert_eq!(rep.total, 0);
        let bounds: Vec<i64> = rep
            .entries
            .iter()
            .filter(|e| e.rule != BoundRule::Base)
            .map(|e| e.bound)
            .collect();
        assert_eq!(bounds, vec![0, 2, 0, 0, 0]);
        assert!(rep.entries.iter().all(|e| e.correction == 0));
    }

    #[test]
    fn bound_ops_on_base() {
        let ledger = base_case();
        let t = &ledger.table;
        // node 4: both specials adjacent-paired, bound 0
        let engine = Engine {
            t,
            bundles: &ledger.bundles,
        };
        let mut cfg = engine.initial_cfg().unwrap();
        for j in 2..=3 {
            engine.apply_demands(j, &mut cfg).unwrap();
            let (a, b, deg) = pair_cols(t, j);
            cfg = propagate_configuration(
                &ledger.bundles[j - 1],
                &cfg,
                ColumnPair { a: &a, b: &b, deg },
            )
            .unwrap()
            .cfg;
        }
        let (a, b, deg) = pair_cols(t, 4);
        let m =
            m_bound_semistable(&ledger.bundles[3], &cfg, ColumnPair { a: &a, b: &b, deg }).unwrap();
        assert_eq!(m, 0);
        // empty configuration: bound 2
        let empty = ConfigurationPartition {
            node: 4,
            blocks: vec![],
        };
        let m = m_bound_semistable(&ledger.bundles[3], &empty, ColumnPair { a: &a, b: &b, deg })
            .unwrap();
        assert_eq!(m, 2);
        // double bound is constant
        assert_eq!(m_bound_double(&ledger.bundles[5]).unwrap(), 0);
        assert!(m_bound_double(&ledger.bundles[3]).is_err());
    }

    #[test]
    fn unstable_bound_floor() {
        // eps = 0 and M empty gives 1
        let a = vec![0, 1, 1, 3];
        let b = vec![4, 3, 3, 1];
        // sums 4,4,4,4 with d = 3: not a valid one2 pair, so build a real one
        let _ = (a, b);
        let ledger = base_case();
        let t = &ledger.table;
        let (a, b, deg) = pair_cols(t, 2);
        let empty = ConfigurationPartition {
            node: 2,
            blocks: vec![],
        };
        let m = m_bound_unstable(ColumnPair { a: &a, b: &b, deg }, &empty).unwrap();
        assert_eq!(m, 1); // eps = 0, M empty
    }

    #[test]
    fn propagation_properties() {
        let ledger = base_case();
        let t = &ledger.table;
        let engine = Engine {
            t,
            bundles: &ledger.bundles,
        };
        let cfg = engine.initial_cfg().unwrap();
        assert_eq!(cfg.blocks, vec![BTreeSet::from([4])]);
        // double transfer is wholesale (idempotent on block structure)
        let (a, b, deg) = pair_cols(t, 6);
        let out = propagate_configuration(
            &ledger.bundles[5],
            &ConfigurationPartition {
                node: 6,
                blocks: vec![BTreeSet::from([0])],
            },
            ColumnPair { a: &a, b: &b, deg },
        )
        .unwrap();
        assert_eq!(out.cfg.blocks, vec![BTreeSet::from([0])]);
    }

    #[test]
    fn first_construction_accounting() {
        let ledger = construct_first(&base_case(), 1).unwrap();
        let rep = account_and_check(&ledger).unwrap();
        assert_eq!(rep.total, 9);
        let by_comp: BTreeMap<usize, (i64, i64)> = rep
            .entries
            .iter()
            .filter(|e| {
                matches!(
                    e.rule,
                    BoundRule::Semistable | BoundRule::Double | BoundRule::Unstable
                )
            })
            .map(|e| (e.component, (e.bound, e.correction)))
            .collect();
        let exp = expected_first_bounds(6, 2, 1);
        let expc = expected_first_corrections(6, 2, 1);
        for (j, want) in exp {
            if j <= 6 {
                continue;
            }
            assert_eq!(by_comp[&j].0, want, "bound at {j}");
            assert_eq!(by_comp[&j].1, *expc.get(&j).unwrap_or(&0), "corr at {j}");
        }
    }

    #[test]
    fn second_and_third_accounting() {
        let l2 = construct_second(&base_case()).unwrap();
        let rep = account_and_check(&l2).unwrap();
        assert_eq!(rep.total, 5);
        // one step plus one per interior component, nothing at the last two
        let new_bounds: Vec<i64> = rep
            .entries
            .iter()
            .filter(|e| e.component > 6 && e.rule != BoundRule::Step)
            .map(|e| e.bound + e.correction)
            .collect();
        assert_eq!(new_bounds, vec![1, 1, 1, 1, 0, 0]);
        let l3 = construct_third(&base_case()).unwrap();
        assert_eq!(account_and_check(&l3).unwrap().total, 6);
    }

    #[test]
    fn tampered_ledger_rejected() {
        let mut ledger = construct_second(&base_case()).unwrap();
        ledger.table.cols[0][0] += 1;
        assert!(matches!(
            account_dimension(&ledger),
            Err(Error::CannotAccount(_))
        ));
    }
}
