//! The vanishing-table data model: per-component column pairs, the two
//! adapted-basis feasibility criteria, bundle inference, the concise
//! (bundle, a-sequence, tau) encoding, and the standardness checker.
//!
//! Conventions. A table for a chain of `g` elliptic components with `k`
//! sections stores the `k x (2g-2)` integer matrix of vanishing sequences at
//! the nodes, column-major. The 1-based column `2j-1` is the
//! b-sequence of component `j` at its right node (non-increasing), column
//! `2j` is the a-sequence of component `j+1` at the same node
//! (non-decreasing). Virtual boundary columns `a(k)` and `a(k)^rev` are kept
//! out-of-band. Row `i` of an a-column pairs with row `i` of the adjacent
//! b-column throughout; every sum check below relies on that pairing.

use crate::numerics::{boundary_sequence, boundary_sequence_rev};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

// ---------------------------------------------------------------------------
// bundles

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Semistable,
    Unstable,
    Double,
}

/// A rank-two decomposable bundle on one elliptic component, recorded as the
/// two (left-twist, right-twist) pairs at `(P_j, P_{j+1})`. Summands are kept
/// sorted by left twist, then right twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpec {
    pub left1: i64,
    pub right1: i64,
    pub left2: i64,
    pub right2: i64,
    pub stability: Stability,
}

impl BundleSpec {
    pub fn new(s1: (i64, i64), s2: (i64, i64)) -> Result<Self> {
        let (a, b) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        let d1 = a.0 + a.1;
        let d2 = b.0 + b.1;
        let stability = if d1 == d2 {
            if a == b {
                Stability::Double
            } else {
                Stability::Semistable
            }
        } else if (d1 - d2).abs() == 1 {
            Stability::Unstable
        } else {
            return Err(Error::InvalidParameter(format!(
                "summand degrees {d1}, {d2} differ by more than one"
            )));
        };
        Ok(BundleSpec {
            left1: a.0,
            right1: a.1,
            left2: b.0,
            right2: b.1,
            stability,
        })
    }

    pub fn degree(&self) -> i64 {
        self.left1 + self.right1 + self.left2 + self.right2
    }

    pub fn summands(&self) -> [(i64, i64); 2] {
        [(self.left1, self.right1), (self.left2, self.right2)]
    }

    /// The higher-degree summand of an unstable bundle.
    pub fn destabilizing(&self) -> Option<(i64, i64)> {
        match self.stability {
            Stability::Unstable => {
                let [s1, s2] = self.summands();
                Some(if s1.0 + s1.1 > s2.0 + s2.1 { s1 } else { s2 })
            }
            _ => None,
        }
    }

    pub fn other_summand(&self) -> Option<(i64, i64)> {
        self.destabilizing().map(|d| {
            let [s1, s2] = self.summands();
            if d == s1 {
                s2
            } else {
                s1
            }
        })
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "O({},{})+O({},{})",
            self.left1, self.right1, self.left2, self.right2
        )
    }
}

/// The concise record `(bundle, a-sequence, tau)` determining a column pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConciseTriple {
    pub bundle: BundleSpec,
    pub a_seq: Vec<i64>,
    /// 0-based row indices; meaningful only for unstable bundles. Entries
    /// pointing at repeated a-values are ignored by `decode_concise`.
    pub tau_star: Vec<usize>,
}

// ---------------------------------------------------------------------------
// feasibility criteria

/// Distinct violation codes, one per hypothesis of the two criteria.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    LengthMismatch,
    NotMonotone,
    Negative,
    /// some `a_i + b_i` outside the admissible sum range
    SumOutOfRange {
        row: usize,
        sum: i64,
    },
    /// semistable route: the number of rows with sum d is not exactly two
    SpecialCountNotTwo {
        count: usize,
    },
    /// an integer repeats more than twice in one sequence
    RepetitionExceeded {
        value: i64,
        count: usize,
    },
    /// semistable route: a third row shares `a_{i1}` and `b_{i2}`
    SpecialClash {
        row: usize,
    },
    /// unstable route: number of rows with sum d+1 is not exactly one
    TopSumNotUnique {
        count: usize,
    },
    /// unstable route: no adjacent repeated pair with both sums d
    NoRepeatedSpecialPair,
    /// unstable route: a pair (a_i, b_i) other than the special one repeats
    PairMultiplicity {
        a: i64,
        b: i64,
        count: usize,
    },
    /// unstable route: a non-special pair (a, d-a) is dominated twice
    DominanceExceeded {
        a: i64,
        count: usize,
    },
    /// unstable route: adjacent all-non-repeated sum-(d-1) rows with a-step 1
    AdjacentFreePair {
        row: usize,
    },
    /// degree below the forced minimum 2d
    InfeasibleDegree {
        degree: i64,
        min: i64,
    },
}

fn count_values(seq: &[i64]) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for &v in seq {
        *m.entry(v).or_insert(0) += 1;
    }
    m
}

fn basic_shape(a: &[i64], b: &[i64], out: &mut Vec<Violation>) {
    if a.len() != b.len() || a.is_empty() {
        out.push(Violation::LengthMismatch);
        return;
    }
    if a.windows(2).any(|w| w[0] > w[1]) || b.windows(2).any(|w| w[0] < w[1]) {
        out.push(Violation::NotMonotone);
    }
    if a.iter().chain(b.iter()).any(|&v| v < 0) {
        out.push(Violation::Negative);
    }
}

/// Witness for the semistable criterion: the unique rows `i1 < i2` with
/// `a_i + b_i = d` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemistablePairWitness {
    pub i1: usize,
    pub i2: usize,
}

/// Check the semistable adapted-basis criterion: all sums in `{d-1, d}`,
/// exactly two rows summing to `d`, no value thrice in a sequence, and no
/// third row sharing `a_{i1}` with `b_{i2}`. All failures are reported.
pub fn check_semistable_pair(
    a: &[i64],
    b: &[i64],
    d: i64,
) -> std::result::Result<SemistablePairWitness, Vec<Violation>> {
    let mut v = Vec::new();
    basic_shape(a, b, &mut v);
    if !v.is_empty() && a.len() != b.len() {
        return Err(v);
    }
    let k = a.len();
    let sums: Vec<i64> = (0..k).map(|i| a[i] + b[i]).collect();
    for (i, &s) in sums.iter().enumerate() {
        if s < d - 1 || s > d {
            v.push(Violation::SumOutOfRange { row: i, sum: s });
        }
    }
    let sp: Vec<usize> = (0..k).filter(|&i| sums[i] == d).collect();
    if sp.len() != 2 {
        v.push(Violation::SpecialCountNotTwo { count: sp.len() });
    }
    for seq in [a, b] {
        for (&value, &count) in count_values(seq).iter() {
            if count > 2 {
                v.push(Violation::RepetitionExceeded { value, count });
            }
        }
    }
    if sp.len() == 2 {
        let (i1, i2) = (sp[0], sp[1]);
        for i in 0..k {
            if i != i1 && i != i2 && a[i] == a[i1] && b[i] == b[i2] {
                v.push(Violation::SpecialClash { row: i });
            }
        }
        if v.is_empty() {
            return Ok(SemistablePairWitness { i1, i2 });
        }
    }
    Err(v)
}

/// Witness for the unstable criterion: `ell` is the unique row with sum
/// `d+1`, `i_star` the first row of the repeated sum-`d` pair, and `tau_star`
/// the maximal admissible tau (rows with non-repeated a-value and sum `d`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnstablePairWitness {
    pub ell: usize,
    pub i_star: usize,
    pub tau_star: Vec<usize>,
}

/// Check the unstable adapted-basis criterion (five hypotheses: sum range,
/// repetition, pair multiplicity, dominance, no adjacent free pair).
pub fn check_unstable_pair(
    a: &[i64],
    b: &[i64],
    d: i64,
) -> std::result::Result<UnstablePairWitness, Vec<Violation>> {
    let mut v = Vec::new();
    basic_shape(a, b, &mut v);
    if !v.is_empty() && a.len() != b.len() {
        return Err(v);
    }
    let k = a.len();
    let sums: Vec<i64> = (0..k).map(|i| a[i] + b[i]).collect();
    for (i, &s) in sums.iter().enumerate() {
        if s < d - 1 || s > d + 1 {
            v.push(Violation::SumOutOfRange { row: i, sum: s });
        }
    }
    let ells: Vec<usize> = (0..k).filter(|&i| sums[i] == d + 1).collect();
    if ells.len() != 1 {
        v.push(Violation::TopSumNotUnique { count: ells.len() });
    }
    let ists: Vec<usize> = (0..k.saturating_sub(1))
        .filter(|&i| a[i] == a[i + 1] && sums[i] == d && sums[i + 1] == d)
        .collect();
    if ists.len() != 1 {
        v.push(Violation::NoRepeatedSpecialPair);
    }
    let ca = count_values(a);
    let cb = count_values(b);
    for counts in [&ca, &cb] {
        for (&value, &count) in counts.iter() {
            if count > 2 {
                v.push(Violation::RepetitionExceeded { value, count });
            }
        }
    }
    if let (Some(&_ell), Some(&ist)) = (ells.first(), ists.first()) {
        let special = (a[ist], b[ist]);
        let mut pairs: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for i in 0..k {
            *pairs.entry((a[i], b[i])).or_insert(0) += 1;
        }
        for (&(pa, pb), &count) in pairs.iter() {
            if (pa, pb) != special && count > 1 {
                v.push(Violation::PairMultiplicity {
                    a: pa,
                    b: pb,
                    count,
                });
            }
        }
        // dominance: for (x, d-x) != special, at most one row with
        // (a_i, b_i) >= (x, d-x) componentwise
        let max_a = *a.iter().max().unwrap();
        for x in 0..=max_a + 1 {
            if (x, d - x) == special {
                continue;
            }
            let count = (0..k).filter(|&i| a[i] >= x && b[i] >= d - x).count();
            if count > 1 {
                v.push(Violation::DominanceExceeded { a: x, count });
            }
        }
        for i in 0..k - 1 {
            if sums[i] == d - 1
                && sums[i + 1] == d - 1
                && a[i + 1] == a[i] + 1
                && ca[&a[i]] == 1
                && ca[&a[i + 1]] == 1
                && cb[&b[i]] == 1
                && cb[&b[i + 1]] == 1
            {
                v.push(Violation::AdjacentFreePair { row: i });
            }
        }
        if v.is_empty() {
            let ell = ells[0];
            let tau_star = (0..k)
                .filter(|&i| sums[i] == d && i != ell && ca[&a[i]] == 1)
                .collect();
            return Ok(UnstablePairWitness {
                ell,
                i_star: ist,
                tau_star,
            });
        }
    }
    Err(v)
}

/// `|{i : a_i >= a_t and b_i >= b_t}|` — the elementary lower bound for
/// `dim V(-a_t P - b_t Q)`.
pub fn common_lower_bound(a: &[i64], b: &[i64], t: usize) -> Result<usize> {
    if a.len() != b.len() || t >= a.len() {
        return Err(Error::InvalidParameter(format!(
            "index {t} out of range for sequences of length {}",
            a.len()
        )));
    }
    Ok((0..a.len())
        .filter(|&i| a[i] >= a[t] && b[i] >= b[t])
        .count())
}

/// Recover the underlying bundle of a column pair from its degree: even
/// degree goes through the semistable criterion with `d = deg/2`, odd degree
/// through the unstable one with `d = (deg-1)/2`.
pub fn infer_bundle(a: &[i64], b: &[i64], deg: i64) -> Result<BundleSpec> {
    // degree bound: two sections with order sums reaching s force deg >= 2s
    if let Some(smax) = a.iter().zip(b).map(|(x, y)| x + y).max() {
        let min_deg = 2 * smax - if deg % 2 == 0 { 0 } else { 1 };
        if deg < min_deg {
            return Err(Error::Infeasible {
                component: 0,
                violations: vec![Violation::InfeasibleDegree {
                    degree: deg,
                    min: min_deg,
                }],
            });
        }
    }
    if deg % 2 == 0 {
        let d = deg / 2;
        let w = check_semistable_pair(a, b, d).map_err(|violations| Error::Infeasible {
            component: 0,
            violations,
        })?;
        BundleSpec::new((a[w.i1], d - a[w.i1]), (a[w.i2], d - a[w.i2]))
    } else {
        let d = (deg - 1) / 2;
        let w = check_unstable_pair(a, b, d).map_err(|violations| Error::Infeasible {
            component: 0,
            violations,
        })?;
        BundleSpec::new((a[w.ell], d + 1 - a[w.ell]), (a[w.i_star], d - a[w.i_star]))
    }
}

fn first_index_of(a: &[i64], value: i64) -> Option<usize> {
    a.iter().position(|&v| v == value)
}

/// Rows that open a repeated a-value pair (`a_i = a_{i+1}`, not preceded by
/// the same value).
fn pair_first_rows(a: &[i64]) -> Vec<usize> {
    (0..a.len().saturating_sub(1))
        .filter(|&i| a[i] == a[i + 1] && (i == 0 || a[i - 1] != a[i]))
        .collect()
}

/// Reconstruct the b-sequence from a concise triple. For semistable bundles
/// the rule is `b_i = d - a_i` at the two special rows and `d - 1 - a_i`
/// elsewhere; for unstable bundles the destabilizing row gets `d + 1 - a_i`
/// and the sum-`d` rows are the declared tau rows, the first row of each
/// repeated a-pair, and the row after the special pair.
pub fn decode_concise(t: &ConciseTriple, d: i64) -> Result<Vec<i64>> {
    let a = &t.a_seq;
    let k = a.len();
    let deg = t.bundle.degree();
    match t.bundle.stability {
        Stability::Semistable | Stability::Double => {
            if deg != 2 * d {
                return Err(Error::DecodeMismatch(format!(
                    "bundle degree {deg} does not match 2d = {}",
                    2 * d
                )));
            }
            let [s1, s2] = t.bundle.summands();
            for s in [s1, s2] {
                if s.0 + s.1 != d {
                    return Err(Error::DecodeMismatch(format!(
                        "summand {s:?} has degree != d"
                    )));
                }
            }
            let i1 = first_index_of(a, s1.0)
                .ok_or_else(|| Error::DecodeMismatch(format!("twist {} not in a-seq", s1.0)))?;
            let i2 = if s2.0 == s1.0 {
                if i1 + 1 < k && a[i1 + 1] == s1.0 {
                    i1 + 1
                } else {
                    return Err(Error::DecodeMismatch(
                        "double bundle needs a repeated twist in a-seq".into(),
                    ));
                }
            } else {
                first_index_of(a, s2.0)
                    .ok_or_else(|| Error::DecodeMismatch(format!("twist {} not in a-seq", s2.0)))?
            };
            Ok((0..k)
                .map(|i| {
                    if i == i1 || i == i2 {
                        d - a[i]
                    } else {
                        d - 1 - a[i]
                    }
                })
                .collect())
        }
        Stability::Unstable => {
            if deg != 2 * d + 1 {
                return Err(Error::DecodeMismatch(format!(
                    "bundle degree {deg} does not match 2d+1 = {}",
                    2 * d + 1
                )));
            }
            let dest = t.bundle.destabilizing().unwrap();
            let other = t.bundle.other_summand().unwrap();
            let ell = first_index_of(a, dest.0)
                .ok_or_else(|| Error::DecodeMismatch(format!("twist {} not in a-seq", dest.0)))?;
            let i_star = (0..k.saturating_sub(1))
                .find(|&i| a[i] == other.0 && a[i + 1] == other.0)
                .ok_or_else(|| {
                    Error::DecodeMismatch(format!("no repeated pair with twist {}", other.0))
                })?;
            let counts = count_values(a);
            let taueff: Vec<usize> = t
                .tau_star
                .iter()
                .copied()
                .filter(|&i| i < k && i != ell && counts[&a[i]] == 1)
                .collect();
            let firsts = pair_first_rows(a);
            Ok((0..k)
                .map(|i| {
                    if i == ell {
                        d + 1 - a[i]
                    } else if taueff.contains(&i) || firsts.contains(&i) || i == i_star + 1 {
                        d - a[i]
                    } else {
                        d - 1 - a[i]
                    }
                })
                .collect())
        }
    }
}

// ---------------------------------------------------------------------------
// tables

/// A `k x (2g-2)` vanishing table with its component degree vector. Boundary
/// columns are derived from `k`, never stored. The JSON form carries the
/// row-major matrix plus the (redundant, validated) boundary columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableWire", into = "TableWire")]
pub struct VanishingTable {
    pub g: usize,
    pub k: usize,
    pub d_vec: Vec<i64>,
    /// column-major, 1-based columns 1..=2g-2
    pub cols: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    g: usize,
    k: usize,
    d_vec: Vec<i64>,
    matrix: Vec<Vec<i64>>,
    boundaries: BoundaryWire,
}

#[derive(Serialize, Deserialize)]
struct BoundaryWire {
    left: Vec<i64>,
    right: Vec<i64>,
}

impl From<VanishingTable> for TableWire {
    fn from(t: VanishingTable) -> Self {
        TableWire {
            g: t.g,
            k: t.k,
            d_vec: t.d_vec.clone(),
            boundaries: BoundaryWire {
                left: t.left_boundary(),
                right: t.right_boundary(),
            },
            matrix: t.matrix(),
        }
    }
}

impl TryFrom<TableWire> for VanishingTable {
    type Error = Error;
    fn try_from(w: TableWire) -> Result<Self> {
        let t = VanishingTable::from_matrix(&w.matrix, w.d_vec)?;
        if t.g != w.g || t.k != w.k {
            return Err(Error::Parse("declared shape does not match matrix".into()));
        }
        if t.left_boundary() != w.boundaries.left || t.right_boundary() != w.boundaries.right {
            return Err(Error::Parse("boundary columns do not match k".into()));
        }
        Ok(t)
    }
}

impl VanishingTable {
    pub fn new(g: usize, k: usize, cols: Vec<Vec<i64>>, d_vec: Vec<i64>) -> Result<Self> {
        if g < 2 || cols.len() != 2 * g - 2 || d_vec.len() != g {
            return Err(Error::InvalidParameter(format!(
                "table shape mismatch: g={g}, {} columns, {} degrees",
                cols.len(),
                d_vec.len()
            )));
        }
        if cols.iter().any(|c| c.len() != k) {
            return Err(Error::InvalidParameter("ragged columns".into()));
        }
        Ok(VanishingTable { g, k, d_vec, cols })
    }

    pub fn left_boundary(&self) -> Vec<i64> {
        boundary_sequence(self.k as i64).expect("k >= 2")
    }

    pub fn right_boundary(&self) -> Vec<i64> {
        boundary_sequence_rev(self.k as i64).expect("k >= 2")
    }

    /// a-sequence of component `j` (1-based) at its left node; virtual for j=1.
    pub fn a_col(&self, j: usize) -> Vec<i64> {
        if j == 1 {
            self.left_boundary()
        } else {
            self.cols[2 * j - 3].clone()
        }
    }

    /// b-sequence of component `j` (1-based) at its right node; virtual for j=g.
    pub fn b_col(&self, j: usize) -> Vec<i64> {
        if j == self.g {
            self.right_boundary()
        } else {
            self.cols[2 * j - 2].clone()
        }
    }

    /// Row-major matrix view (rows = sections, 1-based node columns).
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (0..self.k)
            .map(|i| self.cols.iter().map(|c| c[i]).collect())
            .collect()
    }

    pub fn from_matrix(rows: &[Vec<i64>], d_vec: Vec<i64>) -> Result<Self> {
        let k = rows.len();
        if k == 0 || rows[0].is_empty() || !rows[0].len().is_multiple_of(2) {
            return Err(Error::InvalidParameter("bad matrix shape".into()));
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidParameter("ragged matrix".into()));
        }
        let g = ncols / 2 + 1;
        let cols = (0..ncols)
            .map(|c| rows.iter().map(|r| r[c]).collect())
            .collect();
        VanishingTable::new(g, k, cols, d_vec)
    }

    /// CSV: one line per row, integer cells. The degree vector is recoverable
    /// from the column sums (the maximal pair sum is `d` for an even-degree
    /// component and `d+1` for an odd one), so the matrix alone round-trips.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.matrix() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<i64>, _> =
                line.split(',').map(|c| c.trim().parse::<i64>()).collect();
            rows.push(row.map_err(|e| Error::Parse(format!("bad cell: {e}")))?);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty csv".into()));
        }
        let k = rows.len();
        let ncols = rows[0].len();
        let g = ncols / 2 + 1;
        // recover d_vec from the pair sums
        let tmp = VanishingTable::from_matrix(&rows, vec![0; g])?;
        let mut d_vec = Vec::with_capacity(g);
        for j in 1..=g {
            let a = tmp.a_col(j);
            let b = tmp.b_col(j);
            let maxsum = (0..k).map(|i| a[i] + b[i]).max().unwrap();
            let two_at_max = (0..k).filter(|&i| a[i] + b[i] == maxsum).count() >= 2;
            d_vec.push(if two_at_max {
                2 * maxsum
            } else {
                2 * maxsum - 1
            });
        }
        VanishingTable::from_matrix(&rows, d_vec)
    }
}

// ---------------------------------------------------------------------------
// standardness

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StandardViolation {
    /// shape, monotonicity or negativity problem in a raw column
    Column {
        col: usize,
        reason: String,
    },
    /// complementarity `b_{i,j} + a_{i,j+1} = g-1` broken
    Complementarity {
        node: usize,
        row: usize,
    },
    /// per-pair feasibility criterion failed
    Feasibility {
        component: usize,
        violations: Vec<Violation>,
    },
    DegreeValue {
        component: usize,
        degree: i64,
    },
    DegreeAlternation {
        position: usize,
    },
    FirstOddNotAtTwo {
        position: usize,
    },
    EndDegrees,
    CondFour,
    CondFive {
        component: usize,
    },
    CondSix {
        component: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct StandardReport {
    pub violations: Vec<StandardViolation>,
    /// positions of the odd-degree components, in order
    pub odd_components: Vec<usize>,
}

impl StandardReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Feasibility part only: column shapes, complementarity at every interior
/// node, and the per-component pair criterion. This is the weaker check the
/// third construction's output satisfies.
pub fn check_feasible(t: &VanishingTable) -> StandardReport {
    let g = t.g;
    let k = t.k;
    let mut violations = Vec::new();
    for c in 1..=2 * g - 2 {
        let col = &t.cols[c - 1];
        if col.iter().any(|&v| v < 0) {
            violations.push(StandardViolation::Column {
                col: c,
                reason: "negative entry".into(),
            });
        }
        let mono = if c % 2 == 1 {
            col.windows(2).all(|w| w[0] >= w[1])
        } else {
            col.windows(2).all(|w| w[0] <= w[1])
        };
        if !mono {
            violations.push(StandardViolation::Column {
                col: c,
                reason: "monotonicity".into(),
            });
        }
    }
    for j in 1..g {
        let b = t.b_col(j);
        let a = t.a_col(j + 1);
        for i in 0..k {
            if b[i] + a[i] != g as i64 - 1 {
                violations.push(StandardViolation::Complementarity {
                    node: j + 1,
                    row: i,
                });
            }
        }
    }
    for j in 1..=g {
        let a = t.a_col(j);
        let b = t.b_col(j);
        let d = t.d_vec[j - 1];
        let res = if d % 2 == 0 {
            check_semistable_pair(&a, &b, d / 2).map(|_| ())
        } else {
            check_unstable_pair(&a, &b, (d - 1) / 2).map(|_| ())
        };
        if let Err(vs) = res {
            violations.push(StandardViolation::Feasibility {
                component: j,
                violations: vs,
            });
        }
    }
    StandardReport {
        violations,
        odd_components: odd_positions(&t.d_vec),
    }
}

pub fn odd_positions(d_vec: &[i64]) -> Vec<usize> {
    d_vec
        .iter()
        .enumerate()
        .filter(|(_, d)| *d % 2 != 0)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Full standardness: feasibility plus the degree pattern and conditions
/// (4)-(6). Reports every failure with its locus.
pub fn check_standard(t: &VanishingTable) -> StandardReport {
    let mut rep = check_feasible(t);
    let g = t.g as i64;
    let k = t.k;
    let k1 = (t.k as i64) / 2;
    for (j, &d) in t.d_vec.iter().enumerate() {
        if d < 2 * g - 3 || d > 2 * g - 1 {
            rep.violations.push(StandardViolation::DegreeValue {
                component: j + 1,
                degree: d,
            });
        }
    }
    let jts = rep.odd_components.clone();
    if let Some(&first) = jts.first() {
        if first != 2 {
            rep.violations
                .push(StandardViolation::FirstOddNotAtTwo { position: first });
        }
    }
    if !jts.len().is_multiple_of(2) {
        rep.violations.push(StandardViolation::DegreeAlternation {
            position: *jts.last().unwrap_or(&0),
        });
    }
    for (t_idx, &j) in jts.iter().enumerate() {
        let want = if t_idx % 2 == 0 { 2 * g - 1 } else { 2 * g - 3 };
        if t.d_vec[j - 1] != want {
            rep.violations
                .push(StandardViolation::DegreeAlternation { position: j });
        }
    }
    if t.d_vec[0] != 2 * g - 2 || t.d_vec[t.g - 1] != 2 * g - 2 {
        rep.violations.push(StandardViolation::EndDegrees);
    }
    // (4): last row of component 2 sums to g-1
    if t.g >= 2 && t.a_col(2)[k - 1] + t.b_col(2)[k - 1] != g - 1 {
        rep.violations.push(StandardViolation::CondFour);
    }
    // (5) and (6) at the odd components
    for (t_idx, &j) in jts.iter().enumerate() {
        let a = t.a_col(j);
        let b = t.b_col(j);
        let akj = a[k - 1];
        let bound = k1 + j as i64 - 1;
        let mut ok = akj <= bound;
        if ok && akj == bound - 1 {
            ok = t_idx % 2 == 1 || akj + b[k - 1] == (t.d_vec[j - 1] - 1) / 2;
        }
        if ok && akj == bound {
            ok = t_idx % 2 == 0 && a[k - 2] < akj;
        }
        if !ok {
            rep.violations
                .push(StandardViolation::CondFive { component: j });
        }
        if b[k - 1] == g - 1 - k1 - j as i64 && t_idx + 1 < jts.len() {
            for jj in j + 1..jts[t_idx + 1] {
                if t.a_col(jj)[k - 1] + t.b_col(jj)[k - 1] != g - 2 {
                    rep.violations
                        .push(StandardViolation::CondSix { component: jj });
                }
            }
        }
    }
    rep
}
