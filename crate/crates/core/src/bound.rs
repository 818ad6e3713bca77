//! Exhaustive search over the disjoint-subspace allocation model for linear schemes on
//! the 3-user channel.
//!
//! User `i` sends `d_i` streams over `2S` real dimensions. Its signal space splits into
//! `d_ii` (aligned nowhere), `d_ij` (aligned with user `j` at the third receiver) and
//! `d_ik`. Alignment is mutual, so `d_ij = d_ji`, and the streams left at receiver `k`
//! after merging the aligned pair of users `i, j` must fit in `2S` dimensions.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `(d_max + 1)^5` accepted by [`max_dof`]. The pruned loops visit about
/// `S^5 / 2` profiles, so this admits `S` up to about 64 at a few seconds of work.
pub const MAX_SEARCH_POINTS: u128 = 1 << 38;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AllocationProfile {
    pub s: usize,
    pub d: [usize; 3],
    /// `pair[i][j]` is the overlap `d_ij` (zero-based users). The diagonal is unused.
    pub pair: [[usize; 3]; 3],
}

impl AllocationProfile {
    /// Profile with symmetric overlaps `d12`, `d23`, `d31`.
    pub fn symmetric(s: usize, d: [usize; 3], d12: usize, d23: usize, d31: usize) -> Self {
        let mut pair = [[0; 3]; 3];
        pair[0][1] = d12;
        pair[1][0] = d12;
        pair[1][2] = d23;
        pair[2][1] = d23;
        pair[2][0] = d31;
        pair[0][2] = d31;
        Self { s, d, pair }
    }

    pub fn total(&self) -> usize {
        self.d.iter().sum()
    }

    /// `(d_1 + d_2 + d_3) / 2S`.
    pub fn ratio(&self) -> Ratio<usize> {
        Ratio::new(self.total(), 2 * self.s.max(1))
    }

    /// Implicit unaligned share `d_ii = d_i − Σ_{j≠i} d_ij`, negative when the partition
    /// bound is broken.
    pub fn residual(&self, i: usize) -> i64 {
        let aligned: usize = (0..3).filter(|&j| j != i).map(|j| self.pair[i][j]).sum();
        self.d[i] as i64 - aligned as i64
    }
}

impl fmt::Display for AllocationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S={} d=({},{},{}) d12={} d23={} d31={}",
            self.s, self.d[0], self.d[1], self.d[2], self.pair[0][1], self.pair[1][2], self.pair[2][0]
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AllocationCheck {
    pub feasible: bool,
    /// Ids such as `symmetry-12`, `partition-1`, `receiver-1`.
    pub violations: Vec<String>,
}

pub fn check_allocation(profile: &AllocationProfile) -> AllocationCheck {
    let p = profile;
    let mut violations = Vec::new();
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        if p.pair[i][j] != p.pair[j][i] {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            violations.push(format!("symmetry-{}{}", a + 1, b + 1));
        }
    }
    for i in 0..3 {
        if p.residual(i) < 0 {
            violations.push(format!("partition-{}", i + 1));
        }
    }
    // at receiver k the two interferers i, j share d_ij dimensions
    let total = p.total();
    for (k, (i, j)) in [(0, (1, 2)), (1, (2, 0)), (2, (0, 1))] {
        if total.saturating_sub(p.pair[i][j]) > 2 * p.s {
            violations.push(format!("receiver-{}", k + 1));
        }
    }
    AllocationCheck { feasible: violations.is_empty(), violations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub s: usize,
    pub d_max: usize,
    #[serde(serialize_with = "ratio_string")]
    pub best: Ratio<usize>,
    /// Maximizing profiles in lexicographic order of `(d1, d2, d3, d12, d23, d31)`.
    pub argmax: Vec<AllocationProfile>,
    pub feasible_count: u64,
}

fn ratio_string<S: serde::Serializer>(r: &Ratio<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Default per-user cap: each user can use at most `2S` dimensions, so `3S` never binds.
pub fn default_d_max(s: usize) -> usize {
    3 * s
}

fn check_search(s: usize, d_max: usize) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidInput("extension S must be at least 1".into()));
    }
    let points = (d_max as u128 + 1).pow(5);
    if points > MAX_SEARCH_POINTS {
        return Err(Error::SearchSpaceExceeded(format!(
            "S={s}, d_max={d_max} has search measure {points}, limit {MAX_SEARCH_POINTS}"
        )));
    }
    Ok(())
}

/// Visits every feasible symmetric profile with `d_i ≤ d_max` whose first user has
/// `d_1 = d1`, in lexicographic order. Loop bounds are the constraints themselves, so each
/// visited profile passes [`check_allocation`].
fn feasible_with_d1(s: usize, d_max: usize, d1: usize, mut f: impl FnMut(AllocationProfile)) {
    let cap = 2 * s;
    for d2 in 0..=d_max {
        for d3 in 0..=d_max {
            let total = d1 + d2 + d3;
            let floor = total.saturating_sub(cap);
            for d12 in floor..=d1.min(d2) {
                for d23 in floor..=(d2 - d12).min(d3) {
                    let hi = (d1 - d12).min(d3 - d23);
                    for d31 in floor..=hi {
                        f(AllocationProfile::symmetric(s, [d1, d2, d3], d12, d23, d31));
                    }
                }
            }
        }
    }
}

/// Calls `f` on every feasible profile for extension `s` and per-user cap `d_max`, in
/// lexicographic order.
pub fn for_each_feasible(s: usize, d_max: usize, mut f: impl FnMut(&AllocationProfile)) -> Result<()> {
    check_search(s, d_max)?;
    for d1 in 0..=d_max {
        feasible_with_d1(s, d_max, d1, |p| f(&p));
    }
    Ok(())
}

/// Exact maximum of `(d_1 + d_2 + d_3)/2S` over all feasible profiles, with every maximizer.
pub fn max_dof(s: usize, d_max: usize) -> Result<BoundResult> {
    check_search(s, d_max)?;
    let parts: Vec<(usize, Vec<AllocationProfile>, u64)> = (0..=d_max)
        .into_par_iter()
        .map(|d1| {
            let mut best = 0;
            let mut arg = Vec::new();
            let mut count = 0u64;
            feasible_with_d1(s, d_max, d1, |p| {
                count += 1;
                let t = p.total();
                if t > best {
                    best = t;
                    arg.clear();
                }
                if t == best {
                    arg.push(p);
                }
            });
            (best, arg, count)
        })
        .collect();
    let best = parts.iter().map(|p| p.0).max().unwrap_or(0);
    let argmax = parts
        .iter()
        .filter(|p| p.0 == best)
        .flat_map(|p| p.1.iter().copied())
        .collect();
    Ok(BoundResult {
        s,
        d_max,
        best: Ratio::new(best, 2 * s),
        argmax,
        feasible_count: parts.iter().map(|p| p.2).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_profiles() {
        let good = AllocationProfile::symmetric(5, [4, 4, 4], 2, 2, 2);
        assert!(check_allocation(&good).feasible);
        assert_eq!(good.ratio(), Ratio::new(6, 5));
        let bad = AllocationProfile::symmetric(1, [1, 1, 1], 1, 1, 1);
        let c = check_allocation(&bad);
        assert!(!c.feasible);
        assert!(c.violations.contains(&"partition-1".to_string()));
        assert!(check_allocation(&AllocationProfile::symmetric(1, [0; 3], 0, 0, 0)).feasible);
    }

    #[test]
    fn asymmetric_and_receiver_violations() {
        let mut p = AllocationProfile::symmetric(3, [2, 2, 2], 1, 1, 1);
        p.pair[1][0] = 0;
        assert_eq!(check_allocation(&p).violations, vec!["symmetry-12"]);
        let r = AllocationProfile::symmetric(1, [1, 1, 1], 0, 0, 0);
        assert_eq!(check_allocation(&r).violations, vec!["receiver-1", "receiver-2", "receiver-3"]);
    }

    #[test]
    fn small_extensions() {
        let one = max_dof(1, default_d_max(1)).unwrap();
        assert_eq!(one.best, Ratio::new(1, 1));
        let five = max_dof(5, default_d_max(5)).unwrap();
        assert_eq!(five.best, Ratio::new(6, 5));
        assert_eq!(five.argmax, vec![AllocationProfile::symmetric(5, [4, 4, 4], 2, 2, 2)]);
    }

    /// Independent oracle: the plain six-fold loop filtered by `check_allocation`.
    fn brute(s: usize, d_max: usize) -> (usize, Vec<AllocationProfile>, u64) {
        let r = 0..=d_max;
        let mut best = 0;
        let mut arg = Vec::new();
        let mut count = 0;
        for d1 in r.clone() {
            for d2 in r.clone() {
                for d3 in r.clone() {
                    for d12 in r.clone() {
                        for d23 in r.clone() {
                            for d31 in r.clone() {
                                let p = AllocationProfile::symmetric(s, [d1, d2, d3], d12, d23, d31);
                                if !check_allocation(&p).feasible {
                                    continue;
                                }
                                count += 1;
                                if p.total() > best {
                                    best = p.total();
                                    arg.clear();
                                }
                                if p.total() == best {
                                    arg.push(p);
                                }
                            }
                        }
                    }
                }
            }
        }
        (best, arg, count)
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for s in 1..=3 {
            let d_max = default_d_max(s);
            let fast = max_dof(s, d_max).unwrap();
            let (best, arg, count) = brute(s, d_max);
            assert_eq!(fast.best, Ratio::new(best, 2 * s));
            assert_eq!(fast.argmax, arg);
            assert_eq!(fast.feasible_count, count);
        }
    }

    #[test]
    fn caps_and_zero_extension() {
        assert!(matches!(max_dof(0, 3), Err(Error::InvalidInput(_))));
        assert!(matches!(max_dof(200, 600), Err(Error::SearchSpaceExceeded(_))));
    }

    #[test]
    fn permuting_users_preserves_feasibility() {
        for_each_feasible(2, 6, |p| {
            // cyclic relabeling 1→2→3→1
            let q = AllocationProfile::symmetric(p.s, [p.d[2], p.d[0], p.d[1]], p.pair[2][0], p.pair[0][1], p.pair[1][2]);
            assert!(check_allocation(&q).feasible, "{p} -> {q}");
            // swap users 1 and 2
            let q = AllocationProfile::symmetric(p.s, [p.d[1], p.d[0], p.d[2]], p.pair[0][1], p.pair[2][0], p.pair[1][2]);
            assert!(check_allocation(&q).feasible, "{p} -> {q}");
        })
        .unwrap();
    }
}
