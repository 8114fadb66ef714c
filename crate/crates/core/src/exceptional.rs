//! Machine verification of the two length-8 collections of line bundles on
//! the threefold: the shifted collection is exceptional, its right dual is
//! strong, and the pairing between them is the exact anti-diagonal pattern.
//! Everything reduces to line-bundle cohomology of difference classes;
//! generation of the derived category is not checked here.

use serde::Serialize;

use crate::chow::DivClass;
use crate::cohomology::{ext_table_linebundles, CohomTable};

/// A line bundle placed in the derived category with a shift.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ShiftedLineBundle {
    pub class: DivClass,
    pub shift: i64,
}

/// The shifted collection: `O, O(l-e), O(e), O(l), O(xi), O(l-e+xi),
/// O(e+xi), O(l+xi)` with shifts `0, 0, 1, 1, 3, 3, 4, 4`.
pub fn f_collection() -> [ShiftedLineBundle; 8] {
    let d = DivClass::new;
    let classes = [
        d(0, 0, 0),
        d(1, -1, 0),
        d(0, 1, 0),
        d(1, 0, 0),
        d(0, 0, 1),
        d(1, -1, 1),
        d(0, 1, 1),
        d(1, 0, 1),
    ];
    let shifts = crate::charges::SHIFTS;
    std::array::from_fn(|i| ShiftedLineBundle {
        class: classes[i],
        shift: shifts[i],
    })
}

/// The right dual collection: `O(-2l+e-xi), O(-l-xi), O(-l+e-xi), O(-xi),
/// O(-2l+e), O(-l), O(-l+e), O`.
pub fn g_collection() -> [DivClass; 8] {
    let d = DivClass::new;
    [
        d(-2, 1, -1),
        d(-1, 0, -1),
        d(-1, 1, -1),
        d(0, 0, -1),
        d(-2, 1, 0),
        d(-1, 0, 0),
        d(-1, 1, 0),
        d(0, 0, 0),
    ]
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PairFailure {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub expected: u64,
    pub got: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub checked: usize,
    pub pass: bool,
    pub first_failure: Option<PairFailure>,
}

impl PairReport {
    fn record(&mut self, i: usize, j: usize, k: usize, expected: u64, got: u64) {
        self.checked += 1;
        if expected != got && self.first_failure.is_none() {
            self.pass = false;
            self.first_failure = Some(PairFailure {
                i,
                j,
                k,
                expected,
                got,
            });
        }
    }

    fn empty() -> Self {
        PairReport {
            checked: 0,
            pass: true,
            first_failure: None,
        }
    }
}

fn table_for(i_class: DivClass, j_class: DivClass) -> CohomTable {
    ext_table_linebundles(i_class, j_class)
}

/// Exceptionality of the shifted collection: every object has endomorphism
/// table `(1,0,0,0)` and all backwards ext groups vanish.
pub fn verify_exceptional_pairs() -> PairReport {
    let coll = f_collection();
    let mut report = PairReport::empty();
    for i in 0..8 {
        for j in 0..8 {
            if i < j {
                continue;
            }
            let t = table_for(coll[i].class, coll[j].class).as_array();
            for (k, got) in t.into_iter().enumerate() {
                let expected = if i == j && k == 0 { 1 } else { 0 };
                report.record(i, j, k, expected, got);
            }
        }
    }
    report
}

/// The dual collection is exceptional and strong: backwards ext vanishes
/// entirely, endomorphisms are `(1,0,0,0)`, and forwards ext is
/// concentrated in degree zero.
pub fn verify_strong_dual() -> PairReport {
    let coll = g_collection();
    let mut report = PairReport::empty();
    for i in 0..8 {
        for j in 0..8 {
            let t = table_for(coll[i], coll[j]).as_array();
            for (k, got) in t.into_iter().enumerate() {
                let expected = match () {
                    _ if i == j => u64::from(k == 0),
                    _ if i > j => 0,
                    // i < j: only degree zero may be non-zero
                    _ if k == 0 => got,
                    _ => 0,
                };
                report.record(i, j, k, expected, got);
            }
        }
    }
    report
}

/// The pairing pattern between the shifted collection and its dual:
/// `ext^(k - v_i)` of the pair `(i, j)` is one-dimensional exactly when
/// `i + j = 7` and `k = i`, and zero otherwise. Cohomological degrees
/// outside `0..=3` read as zero; `k` is scanned over `0..=10`, which covers
/// every shift plus the dimension of the threefold.
pub fn verify_right_dual_pattern() -> PairReport {
    let fs = f_collection();
    let gs = g_collection();
    let mut report = PairReport::empty();
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in gs.iter().enumerate() {
            let t = table_for(f.class, *g).as_array();
            for k in 0..=10i64 {
                let deg = k - f.shift;
                let got = if (0..=3).contains(&deg) {
                    t[deg as usize]
                } else {
                    0
                };
                let expected = u64::from(i + j == 7 && k == i as i64);
                report.record(i, j, k as usize, expected, got);
            }
        }
    }
    report
}

/// The pairing matrix with entries summed over all degrees; for a passing
/// collection this is exactly the anti-diagonal 0/1 matrix.
pub fn right_dual_matrix() -> [[u64; 8]; 8] {
    let fs = f_collection();
    let gs = g_collection();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            table_for(fs[i].class, gs[j])
                .as_array()
                .into_iter()
                .sum::<u64>()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohom_f;

    #[test]
    fn stored_collections_match_the_fixed_lists() {
        let fs = f_collection();
        assert_eq!(fs[0].class, DivClass::ZERO);
        assert_eq!(fs[7].class, DivClass::new(1, 0, 1));
        assert_eq!(fs.map(|f| f.shift), [0, 0, 1, 1, 3, 3, 4, 4]);
        let gs = g_collection();
        assert_eq!(gs[0], DivClass::new(-2, 1, -1));
        assert_eq!(gs[7], DivClass::ZERO);
    }

    #[test]
    fn spot_checks_behind_the_exceptional_report() {
        // (i, j) = (1, 0): the difference class has no cohomology at all
        assert!(cohom_f(DivClass::new(-1, 1, 0)).is_zero());
        // (i, j) = (7, 0)
        assert!(cohom_f(DivClass::new(-1, 0, -1)).is_zero());
        // endomorphisms
        assert_eq!(cohom_f(DivClass::ZERO).as_array(), [1, 0, 0, 0]);
    }

    #[test]
    fn exceptional_pairs_pass() {
        let r = verify_exceptional_pairs();
        assert!(r.pass, "{:?}", r.first_failure);
        assert_eq!(r.checked, 36 * 4); // pairs with i >= j, four degrees each
    }

    #[test]
    fn strong_dual_passes() {
        let r = verify_strong_dual();
        assert!(r.pass, "{:?}", r.first_failure);
        // forwards sections really appear somewhere
        let gs = g_collection();
        assert!(cohom_f(gs[7] - gs[0]).h0 > 0);
    }

    #[test]
    fn right_dual_pattern_is_the_anti_diagonal() {
        let r = verify_right_dual_pattern();
        assert!(r.pass, "{:?}", r.first_failure);
        let m = right_dual_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, u64::from(i + j == 7), "at ({i},{j})");
            }
        }
    }

    #[test]
    fn named_pattern_cells() {
        let fs = f_collection();
        let gs = g_collection();
        // (i, j, k) = (0, 7, 0): sections of the trivial bundle
        assert_eq!(table_for(fs[0].class, gs[7]).h0, 1);
        // (i, j, k) = (7, 0, 7): top cohomology of the canonical class
        assert_eq!(table_for(fs[7].class, gs[0]).h3, 1);
        // (i, j) = (0, 0): nothing anywhere
        assert!(table_for(fs[0].class, gs[0]).is_zero());
    }
}
