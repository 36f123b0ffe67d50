//! Closed-form invariants of the genus/section-count pair and the boundary
//! vanishing sequences used by every other module.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A genus / section-count pair. `k1 = floor(k/2)` is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairGK {
    pub g: i64,
    pub k: i64,
}

impl PairGK {
    pub fn new(g: i64, k: i64) -> Result<Self> {
        if g < 1 {
            return Err(Error::InvalidParameter(format!("g must be >= 1, got {g}")));
        }
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
        }
        Ok(PairGK { g, k })
    }

    pub fn k1(&self) -> i64 {
        self.k / 2
    }
}

/// Expected dimension of the rank-two canonical-determinant locus:
/// `3g - 3 - k(k+1)/2`.
pub fn rho(p: PairGK) -> i64 {
    3 * p.g - 3 - p.k * (p.k + 1) / 2
}

/// The gap measure `L(g,k)`: `2(g - k1^2)` for even k and
/// `2(g - (k1^2 + k1 + 1/2))` for odd k. The odd-case half doubles away, so
/// the value is always an exact integer (odd for odd k).
pub fn bn_gap(p: PairGK) -> i64 {
    let k1 = p.k1();
    if p.k % 2 == 0 {
        2 * (p.g - k1 * k1)
    } else {
        2 * p.g - 2 * (k1 * k1 + k1) - 1
    }
}

/// The boundary sequence `a(k)`: `([0]_2, [1]_2, ..., [k1-1]_2)` for even k,
/// with a final `k1` appended for odd k.
pub fn boundary_sequence(k: i64) -> Result<Vec<i64>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "boundary_sequence needs k >= 2, got {k}"
        )));
    }
    let k1 = k / 2;
    let mut s = Vec::with_capacity(k as usize);
    for v in 0..k1 {
        s.push(v);
        s.push(v);
    }
    if k % 2 == 1 {
        s.push(k1);
    }
    Ok(s)
}

/// `a(k)` reversed — the virtual right-boundary column.
pub fn boundary_sequence_rev(k: i64) -> Result<Vec<i64>> {
    let mut s = boundary_sequence(k)?;
    s.reverse();
    Ok(s)
}

/// Classical Brill–Noether number `k(d-k+1) - (k-1)g`.
pub fn classical_rho(k: i64, d: i64, g: i64) -> i64 {
    k * (d - k + 1) - (k - 1) * g
}

/// Outcome of the strictly-semistable exclusion argument.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrictSemistableExclusion {
    pub excluded: bool,
    /// `L(g,k)`; exclusion needs this negative.
    pub gap: i64,
    /// The relevant classical Brill–Noether number in degree g-1; exclusion
    /// needs this negative as well.
    pub classical: i64,
}

/// On a general curve with `L(g,k) < 0` there is no strictly semistable
/// rank-two bundle with canonical determinant and k sections: a destabilizing
/// sequence would force a degree-(g-1) line bundle with too many sections,
/// which the classical Brill–Noether theorem rules out.
pub fn strict_semistable_excluded(p: PairGK) -> StrictSemistableExclusion {
    let k1 = p.k1();
    let gap = bn_gap(p);
    let classical = if p.k % 2 == 1 {
        classical_rho(k1 + 1, p.g - 1, p.g)
    } else {
        classical_rho(k1, p.g - 1, p.g)
    };
    StrictSemistableExclusion {
        excluded: gap < 0 && classical < 0,
        gap,
        classical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pk(g: i64, k: i64) -> PairGK {
        PairGK::new(g, k).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(pk(6, 5)), 0);
        assert_eq!(rho(pk(3, 2)), 3);
        assert_eq!(rho(pk(19, 9)), 9);
    }

    #[test]
    fn bn_gap_values() {
        assert_eq!(bn_gap(pk(6, 5)), -1);
        // (k1^2 + k1, 2k1+1) -> -1 for any k1
        for k1 in 2..40 {
            assert_eq!(bn_gap(pk(k1 * k1 + k1, 2 * k1 + 1)), -1);
        }
        assert_eq!(bn_gap(pk(15, 8)), -2);
    }

    #[test]
    fn boundary_sequences() {
        assert_eq!(boundary_sequence(5).unwrap(), vec![0, 0, 1, 1, 2]);
        assert_eq!(boundary_sequence(4).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(
            boundary_sequence(9).unwrap(),
            vec![0, 0, 1, 1, 2, 2, 3, 3, 4]
        );
        assert!(boundary_sequence(1).is_err());
        assert_eq!(boundary_sequence_rev(5).unwrap(), vec![2, 1, 1, 0, 0]);
    }

    #[test]
    fn boundary_sequence_shape() {
        // non-decreasing, starts at 0, repeats at most twice, max = k1
        for k in 2..60 {
            let s = boundary_sequence(k).unwrap();
            assert_eq!(s.len() as i64, k);
            assert_eq!(s[0], 0);
            assert!(s.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(
                *s.last().unwrap(),
                if k % 2 == 0 { k / 2 - 1 } else { k / 2 }
            );
            for v in &s {
                assert!(s.iter().filter(|x| *x == v).count() <= 2);
            }
        }
    }

    #[test]
    fn classical_rho_values() {
        assert_eq!(classical_rho(3, 5, 6), -3);
        assert_eq!(classical_rho(3, 5, 6), 6 - 4 - 4 - 1);
        assert_eq!(classical_rho(1, 0, 0), 0);
    }

    #[test]
    fn strict_semistable_cases() {
        assert!(strict_semistable_excluded(pk(6, 5)).excluded);
        assert!(strict_semistable_excluded(pk(15, 8)).excluded);
        // L >= 0: not excluded
        for k1 in 2..20 {
            let p = pk(k1 * k1 + k1 + 1, 2 * k1 + 1);
            assert!(bn_gap(p) >= 0);
            assert!(!strict_semistable_excluded(p).excluded);
        }
    }

    #[test]
    fn delta_rho_identities() {
        // first: +4k1+4-3q, second: +2k1+1, third: +3k1, for all k1 in [2,100]
        for k1 in 2i64..=100 {
            let k = 2 * k1 + 1;
            let g = 6 + k1; // arbitrary base genus; identities are g-independent
            let base = rho(pk(g, k));
            assert_eq!(rho(pk(g + 2 * k1 + 2, k + 2)) - base, 2 * k1 + 1);
            assert_eq!(rho(pk(g + 3 * k1 + 3, k + 3)) - base, 3 * k1);
            for q in 1..=std::cmp::max(1, k1 / 3) {
                assert_eq!(
                    rho(pk(g + 4 * k1 + 6 - q, k + 4)) - base,
                    4 * k1 + 4 - 3 * q
                );
            }
        }
    }
}
