//! Euler-characteristic semistability on chains: exact bookkeeping for
//! rank-one subsheaves, a brute-force oracle over break/slot profiles, and
//! the fast two-unstable criterion.
//!
//! Components are recorded by their normalized summand Euler characteristics
//! `(e1 <= e2)` (offsets against a common base value `A`) and a stability
//! class. The admissible per-component contributions of a rank-one subsheaf
//! are: either summand (fixed line), the destabilizing summand at an
//! unstable component, or a "free" line one step lower (which can match
//! prescribed values at the nodes). A subsheaf profile is a partition of the
//! chain into intervals plus one such choice per component; its Euler
//! characteristic is `n*A + sum(eps) - m - n + 2`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LClass {
    Semistable,
    Double,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LComp {
    pub e1: i64,
    pub e2: i64,
    pub class: LClass,
}

impl LComp {
    pub fn f(&self) -> i64 {
        self.e1 + self.e2
    }
    /// Inside the standing assumptions the summand gap is at most one;
    /// gap-2 components are legal inputs but flagged in reports.
    pub fn in_situation(&self) -> bool {
        (self.e2 - self.e1) <= 1
    }
}

/// Which fixed line a profile picks on one side of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    S1,
    S2,
    Dest,
}

/// A declared persistent gluing: the fixed line `left` of component `node`
/// maps onto the fixed line `right` of component `node + 1` (0-based node =
/// index of the left component). Everything not declared is generic and
/// does not persist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gluing {
    pub node: usize,
    pub left: Line,
    pub right: Line,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LChain {
    pub comps: Vec<LComp>,
    #[serde(default)]
    pub gluable: BTreeSet<Gluing>,
}

/// JSON wire format: `f` entries are either the scalar `f_j` (with the
/// summand pair derived from the class) or an explicit `[e1, e2]` pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct LChainWire {
    f: Vec<serde_json::Value>,
    stability: Vec<LClass>,
    #[serde(default)]
    gluable: Vec<Gluing>,
}

impl LChain {
    pub fn new(comps: Vec<LComp>, gluable: BTreeSet<Gluing>) -> Result<Self> {
        for c in &comps {
            if c.e1 > c.e2 {
                return Err(Error::InvalidParameter(
                    "summands must satisfy e1 <= e2".into(),
                ));
            }
            let ok = match c.class {
                LClass::Unstable => c.e2 > c.e1,
                LClass::Double => c.e1 == c.e2,
                LClass::Semistable => c.e1 == c.e2 || c.e2 - c.e1 >= 2,
            };
            // semistable with distinct summands of equal degree has e1 == e2;
            // gap >= 2 is the out-of-situation case kept for the examples
            if !ok && !(c.class == LClass::Semistable && c.e1 == c.e2) {
                return Err(Error::InvalidParameter(format!(
                    "class {:?} inconsistent with summands ({}, {})",
                    c.class, c.e1, c.e2
                )));
            }
        }
        for g in &gluable {
            if g.node + 1 >= comps.len() {
                return Err(Error::InvalidParameter(format!(
                    "gluing at node {} out of range",
                    g.node
                )));
            }
        }
        Ok(LChain { comps, gluable })
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: LChainWire = serde_json::from_str(s)?;
        if wire.f.len() != wire.stability.len() {
            return Err(Error::Parse("f and stability lengths differ".into()));
        }
        let comps = wire
            .f
            .iter()
            .zip(&wire.stability)
            .map(|(fv, &class)| -> Result<LComp> {
                if let Some(f) = fv.as_i64() {
                    let (e1, e2) = match class {
                        LClass::Unstable => {
                            if f % 2 == 0 {
                                return Err(Error::Parse(format!("even f={f} cannot be unstable")));
                            }
                            ((f - 1) / 2, (f + 1) / 2)
                        }
                        _ => {
                            if f % 2 != 0 {
                                return Err(Error::Parse(format!(
                                    "odd f={f} cannot be semistable"
                                )));
                            }
                            (f / 2, f / 2)
                        }
                    };
                    Ok(LComp { e1, e2, class })
                } else if let Some(arr) = fv.as_array() {
                    if arr.len() != 2 {
                        return Err(Error::Parse("summand pair must have two entries".into()));
                    }
                    let e1 = arr[0]
                        .as_i64()
                        .ok_or_else(|| Error::Parse("bad e1".into()))?;
                    let e2 = arr[1]
                        .as_i64()
                        .ok_or_else(|| Error::Parse("bad e2".into()))?;
                    Ok(LComp { e1, e2, class })
                } else {
                    Err(Error::Parse("f entries must be integers or pairs".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        LChain::new(comps, wire.gluable.into_iter().collect())
    }

    pub fn chi_total(&self, a: i64) -> i64 {
        let n = self.n() as i64;
        self.comps.iter().map(|c| 2 * a + c.f()).sum::<i64>() - 2 * (n - 1)
    }

    /// Whether some global base A puts every normalized `f_j - 2A` in the
    /// window 1..=4 of the standing assumptions.
    pub fn normalizable(&self) -> bool {
        let fmax = self.comps.iter().map(LComp::f).max().unwrap_or(1);
        let fmin = self.comps.iter().map(LComp::f).min().unwrap_or(1);
        // need an even integer 2A in [fmax - 4, fmin - 1]
        (fmax - 4..=fmin - 1).any(|t| t % 2 == 0)
    }
}

/// One per-component choice of a subsheaf profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlotChoice {
    /// a fixed line: one of the summands, or the destabilizing one
    Fixed(Line),
    /// anything lower; matches prescribed values at both nodes
    Free,
}

/// A rank-one subsheaf profile: interval breaks (true = break after that
/// component) plus one slot choice per component.
#[derive(Debug, Clone, Serialize)]
pub struct SubsheafProfile {
    pub breaks: Vec<bool>,
    pub choices: Vec<SlotChoice>,
}

impl SubsheafProfile {
    pub fn intervals(&self) -> usize {
        1 + self.breaks.iter().filter(|b| **b).count()
    }
}

fn eps_of(comp: &LComp, choice: SlotChoice) -> i64 {
    match choice {
        SlotChoice::Fixed(Line::S1) => comp.e1,
        SlotChoice::Fixed(Line::S2) | SlotChoice::Fixed(Line::Dest) => comp.e2,
        SlotChoice::Free => match comp.class {
            // tilting across a gap of two or more reaches the lower summand
            // value with free node values; otherwise one below
            LClass::Semistable if comp.e2 - comp.e1 >= 2 => comp.e1,
            LClass::Unstable => comp.e1,
            _ => comp.e1 - 1,
        },
    }
}

fn slot_menu(comp: &LComp) -> Vec<SlotChoice> {
    match comp.class {
        LClass::Double => vec![SlotChoice::Fixed(Line::S1), SlotChoice::Free],
        LClass::Semistable => vec![
            SlotChoice::Fixed(Line::S1),
            SlotChoice::Fixed(Line::S2),
            SlotChoice::Free,
        ],
        LClass::Unstable => vec![SlotChoice::Fixed(Line::Dest), SlotChoice::Free],
    }
}

fn gluable_at(chain: &LChain, node: usize, ls: SlotChoice, rs: SlotChoice) -> bool {
    let (lf, rf) = match (ls, rs) {
        (SlotChoice::Fixed(a), SlotChoice::Fixed(b)) => (a, b),
        _ => return true,
    };
    // every line of a double component moves in a pencil, so it can meet any
    // prescribed value
    if chain.comps[node].class == LClass::Double || chain.comps[node + 1].class == LClass::Double {
        return true;
    }
    chain.gluable.contains(&Gluing {
        node,
        left: lf,
        right: rf,
    })
}

/// Euler characteristic of a subsheaf profile: `n*A + sum(eps) - m - n + 2`.
pub fn chi_rank1(chain: &LChain, profile: &SubsheafProfile, a: i64) -> Result<i64> {
    let n = chain.n();
    if profile.choices.len() != n || profile.breaks.len() + 1 != n.max(1) {
        return Err(Error::InvalidParameter("profile shape mismatch".into()));
    }
    let eps: i64 = chain
        .comps
        .iter()
        .zip(&profile.choices)
        .map(|(c, &ch)| eps_of(c, ch))
        .sum();
    let m = profile.intervals() as i64;
    Ok(n as i64 * a + eps - m - n as i64 + 2)
}

#[derive(Debug, Clone, Serialize)]
pub struct LVerdict {
    pub semistable: bool,
    pub witness: Option<SubsheafProfile>,
    /// components outside the standing numeric assumptions, for the report
    pub out_of_situation: Vec<usize>,
}

/// Brute-force oracle: enumerate all break patterns and slot assignments,
/// keep the gluable ones, and test the reduction inequality
/// `sum(eps) - (m-1) <= sum(f)/2` (in doubled form). Any violating profile
/// witnesses instability. The search is exhaustive; subtrees whose best
/// achievable excess is non-positive are skipped.
pub fn is_l_semistable_bruteforce(chain: &LChain, cap: usize) -> Result<LVerdict> {
    let n = chain.n();
    if n == 0 {
        return Err(Error::InvalidParameter("empty chain".into()));
    }
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let sum_f: i64 = chain.comps.iter().map(|c| c.f()).sum();
    let menus: Vec<Vec<SlotChoice>> = chain.comps.iter().map(slot_menu).collect();
    let out_of_situation: Vec<usize> = chain
        .comps
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.in_situation())
        .map(|(i, _)| i + 1)
        .collect();
    // suffix_max[i] = max over components i.. of the doubled slot values
    let mut suffix_max = vec![0i64; n + 1];
    for i in (0..n).rev() {
        let best = menus[i]
            .iter()
            .map(|&ch| 2 * eps_of(&chain.comps[i], ch))
            .max()
            .unwrap();
        suffix_max[i] = suffix_max[i + 1] + best;
    }

    struct Dfs<'c> {
        chain: &'c LChain,
        menus: &'c [Vec<SlotChoice>],
        suffix_max: &'c [i64],
        breaks: Vec<bool>,
        need: i64, // violation iff total doubled eps > need
        choices: Vec<SlotChoice>,
    }
    impl Dfs<'_> {
        fn go(&mut self, i: usize, acc: i64) -> bool {
            if acc + self.suffix_max[i] <= self.need {
                return false;
            }
            if i == self.chain.n() {
                return acc > self.need;
            }
            for &ch in &self.menus[i] {
                if i > 0
                    && !self.breaks[i - 1]
                    && !gluable_at(self.chain, i - 1, self.choices[i - 1], ch)
                {
                    continue;
                }
                self.choices.push(ch);
                if self.go(i + 1, acc + 2 * eps_of(&self.chain.comps[i], ch)) {
                    return true;
                }
                self.choices.pop();
            }
            false
        }
    }

    let nb = n - 1;
    for bk_bits in 0..(1u64 << nb) {
        let breaks: Vec<bool> = (0..nb).map(|i| bk_bits >> i & 1 == 1).collect();
        let m = 1 + breaks.iter().filter(|b| **b).count() as i64;
        let need = sum_f + 2 * (m - 1);
        if suffix_max[0] <= need {
            continue;
        }
        let mut dfs = Dfs {
            chain,
            menus: &menus,
            suffix_max: &suffix_max,
            breaks,
            need,
            choices: Vec::with_capacity(n),
        };
        if dfs.go(0, 0) {
            return Ok(LVerdict {
                semistable: false,
                witness: Some(SubsheafProfile {
                    breaks: dfs.breaks,
                    choices: dfs.choices,
                }),
                out_of_situation,
            });
        }
    }
    Ok(LVerdict {
        semistable: true,
        witness: None,
        out_of_situation,
    })
}

/// Fast criterion for chains with at most two unstable components: the
/// bundle is semistable iff no single-interval profile takes a summand at
/// every semistable component and the destabilizing summand at every
/// unstable one, subject to the gluing relation.
pub fn two_unstable_criterion(chain: &LChain) -> Result<bool> {
    let unstable = chain
        .comps
        .iter()
        .filter(|c| c.class == LClass::Unstable)
        .count();
    if unstable > 2 {
        return Err(Error::NotApplicable(format!(
            "{unstable} unstable components (criterion allows at most two)"
        )));
    }
    if unstable == 0 {
        return Ok(true);
    }
    let n = chain.n();
    let menus: Vec<Vec<SlotChoice>> = chain
        .comps
        .iter()
        .map(|c| match c.class {
            LClass::Double => vec![SlotChoice::Fixed(Line::S1)],
            LClass::Semistable => vec![SlotChoice::Fixed(Line::S1), SlotChoice::Fixed(Line::S2)],
            LClass::Unstable => vec![SlotChoice::Fixed(Line::Dest)],
        })
        .collect();
    // depth-first over slot choices with gluing pruning
    fn dfs(chain: &LChain, menus: &[Vec<SlotChoice>], acc: &mut Vec<SlotChoice>) -> bool {
        let i = acc.len();
        if i == menus.len() {
            return true;
        }
        for &ch in &menus[i] {
            if i == 0 || gluable_at(chain, i - 1, acc[i - 1], ch) {
                acc.push(ch);
                if dfs(chain, menus, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::with_capacity(n);
    Ok(!dfs(chain, &menus, &mut acc))
}

/// Twist across an interior node: both summand characteristics shift by
/// `amount` on the left component and by `-amount` on the right one. The
/// semistability verdict is invariant.
pub fn twist_equivalence(chain: &LChain, node: usize, amount: i64) -> Result<LChain> {
    if node + 1 >= chain.n() {
        return Err(Error::InvalidParameter(format!("node {node} not interior")));
    }
    let mut comps = chain.comps.clone();
    comps[node].e1 += amount;
    comps[node].e2 += amount;
    comps[node + 1].e1 -= amount;
    comps[node + 1].e2 -= amount;
    LChain::new(comps, chain.gluable.clone())
}

/// Reference mu-semistability check in the polarization-free case
/// `chi(E) = 0`: look for any subsheaf supported on a subchain (rank one on
/// its support, zero outside) of positive Euler characteristic.
pub fn mu_reference_chi0(chain: &LChain, a: i64) -> Result<bool> {
    if chain.chi_total(a) != 0 {
        return Err(Error::NotApplicable(
            "mu reference implemented only for chi(E) = 0".into(),
        ));
    }
    let n = chain.n();
    for lo in 0..n {
        for hi in lo..n {
            let sub = LChain::new(
                chain.comps[lo..=hi].to_vec(),
                chain
                    .gluable
                    .iter()
                    .filter(|g| g.node >= lo && g.node < hi)
                    .map(|g| Gluing {
                        node: g.node - lo,
                        ..*g
                    })
                    .collect(),
            )?;
            let ends = (lo > 0) as i64 + (hi + 1 < n) as i64;
            let nn = sub.n();
            let menus: Vec<Vec<SlotChoice>> = sub.comps.iter().map(slot_menu).collect();
            let nb = nn - 1;
            for bk_bits in 0..(1u64 << nb) {
                let breaks: Vec<bool> = (0..nb).map(|i| bk_bits >> i & 1 == 1).collect();
                let m = 1 + breaks.iter().filter(|b| **b).count() as i64;
                let mut idx = vec![0usize; nn];
                'outer: loop {
                    let choices: Vec<SlotChoice> = (0..nn).map(|i| menus[i][idx[i]]).collect();
                    let feasible = (0..nb)
                        .all(|nd| breaks[nd] || gluable_at(&sub, nd, choices[nd], choices[nd + 1]));
                    if feasible {
                        let eps: i64 = sub
                            .comps
                            .iter()
                            .zip(&choices)
                            .map(|(c, &ch)| eps_of(c, ch))
                            .sum();
                        let chi = nn as i64 * a + eps - m - nn as i64 + 2 - ends;
                        if chi > 0 {
                            return Ok(false);
                        }
                    }
                    for i in 0..nn {
                        idx[i] += 1;
                        if idx[i] < menus[i].len() {
                            continue 'outer;
                        }
                        idx[i] = 0;
                    }
                    break;
                }
            }
        }
    }
    Ok(true)
}

/// The two-component example separating the two notions: one component with
/// summand characteristics (0, 2), one with (0, 0), nothing persistent.
pub fn example_ex1() -> LChain {
    LChain::new(
        vec![
            LComp {
                e1: 0,
                e2: 2,
                class: LClass::Semistable,
            },
            LComp {
                e1: 0,
                e2: 0,
                class: LClass::Semistable,
            },
        ],
        BTreeSet::new(),
    )
    .expect("ex1")
}
