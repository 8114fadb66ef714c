//! Monad shapes attached to a charge and defect pair, their K-classes,
//! Chern data and twisted Euler characteristics.
//!
//! The three terms are fixed direct sums of line bundles whose
//! multiplicities are linear in `(alpha, beta, gamma, delta, epsilon)`;
//! building a shape only checks that every multiplicity is non-negative.
//! Differentials are deliberately not modelled here — shape plus K-class is
//! the whole contract, and explicit maps appear only in [`crate::kernel`]
//! where no composite condition exists.

use std::fmt;

use serde::Serialize;

use crate::charges::InstantonCharge;
use crate::chow::{curve_dot_div, div_mul, triple, CurveClass, DivClass};
use crate::cohomology::{chi_rr_general, cohom_f};
use crate::error::Error;
use crate::linalg::rat_int;

/// The three split terms of a monad, each a list of line-bundle summands
/// with multiplicities.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MonadShape {
    pub minus1: Vec<(DivClass, u32)>,
    pub zero: Vec<(DivClass, u32)>,
    pub plus1: Vec<(DivClass, u32)>,
}

impl MonadShape {
    pub fn rank_balance(&self) -> i64 {
        let total = |v: &[(DivClass, u32)]| v.iter().map(|(_, m)| *m as i64).sum::<i64>();
        total(&self.zero) - total(&self.minus1) - total(&self.plus1)
    }
}

impl fmt::Display for MonadShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |v: &[(DivClass, u32)]| {
            if v.is_empty() {
                "0".to_string()
            } else {
                v.iter()
                    .map(|(d, m)| format!("O({d})^{m}"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        };
        write!(
            f,
            "{} -> {} -> {}",
            term(&self.minus1),
            term(&self.zero),
            term(&self.plus1)
        )
    }
}

/// Build the monad shape for a charge and defect values. Every multiplicity
/// must come out non-negative; the first negative one is reported.
pub fn build_shape(ch: InstantonCharge, delta: i64, epsilon: i64) -> Result<MonadShape, Error> {
    let (a, b, g) = (ch.alpha, ch.beta, ch.gamma);
    let take = |class: DivClass, mult: i64, term: &str| -> Result<Option<(DivClass, u32)>, Error> {
        if mult < 0 {
            Err(Error::NegativeMultiplicity {
                term: format!("O({class})^({mult}) in {term}"),
                value: mult,
            })
        } else if mult == 0 {
            Ok(None)
        } else {
            Ok(Some((class, mult as u32)))
        }
    };
    let d = DivClass::new;
    let minus1 = [
        take(d(-2, 1, -1), a + g - 6, "C^-1")?,
        take(d(-1, 0, -1), epsilon, "C^-1")?,
    ];
    let zero = [
        take(d(-1, 0, -1), b + g + epsilon - 2, "C^0")?,
        take(d(-1, 1, -1), a - b + g - 4, "C^0")?,
        take(d(-2, 1, 0), a - 3, "C^0")?,
        take(d(-1, 0, 0), delta, "C^0")?,
    ];
    let plus1 = [
        take(d(0, 0, -1), g - 2, "C^1")?,
        take(d(-1, 0, 0), b + delta - 1, "C^1")?,
        take(d(-1, 1, 0), a - b - 2, "C^1")?,
    ];
    let shape = MonadShape {
        minus1: minus1.into_iter().flatten().collect(),
        zero: zero.into_iter().flatten().collect(),
        plus1: plus1.into_iter().flatten().collect(),
    };
    debug_assert_eq!(shape.rank_balance(), 2);
    Ok(shape)
}

/// A formal integer combination of line bundles.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct KClass {
    terms: Vec<(DivClass, i64)>,
}

impl KClass {
    pub fn new(raw: impl IntoIterator<Item = (DivClass, i64)>) -> Self {
        let mut map: std::collections::BTreeMap<DivClass, i64> = std::collections::BTreeMap::new();
        for (d, n) in raw {
            *map.entry(d).or_insert(0) += n;
        }
        KClass {
            terms: map.into_iter().filter(|(_, n)| *n != 0).collect(),
        }
    }

    pub fn terms(&self) -> &[(DivClass, i64)] {
        &self.terms
    }

    pub fn rank(&self) -> i64 {
        self.terms.iter().map(|(_, n)| n).sum()
    }

    pub fn twist(&self, d: DivClass) -> KClass {
        KClass::new(self.terms.iter().map(|(c, n)| (*c + d, *n)))
    }

    /// Chern data via truncated total Chern classes; see [`chern`].
    pub fn chern(&self) -> ChernData {
        chern(self)
    }

    /// Euler characteristic of the twist by `d`, computed two ways: as the
    /// signed sum of the closed-form tables of the summands, and through
    /// Riemann--Roch on the Chern data of the twisted class. A mismatch is
    /// a hard internal defect and panics.
    pub fn chi_twist(&self, d: DivClass) -> i64 {
        let by_sum: i64 = self
            .terms
            .iter()
            .map(|(c, n)| n * cohom_f(*c + d).chi())
            .sum();
        let twisted = self.twist(d);
        let cd = twisted.chern();
        let by_rr = chi_rr_general(cd.rank, cd.c1, cd.c2, cd.c3);
        assert_eq!(
            rat_int(by_sum),
            by_rr,
            "chi_twist: summation and Riemann--Roch routes disagree at twist {d}"
        );
        by_sum
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, n)| format!("{n}*[O({d})]"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// K-class of a monad shape: middle term minus the two outer terms. The
/// rank must come out 2.
pub fn kclass(shape: &MonadShape) -> Result<KClass, Error> {
    let mut raw = Vec::new();
    for (d, m) in &shape.zero {
        raw.push((*d, *m as i64));
    }
    for (d, m) in shape.minus1.iter().chain(shape.plus1.iter()) {
        raw.push((*d, -(*m as i64)));
    }
    let k = KClass::new(raw);
    if k.rank() != 2 {
        return Err(Error::RankMismatch(k.rank()));
    }
    Ok(k)
}

/// Rank and the first three Chern classes of a K-class.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: DivClass,
    pub c2: CurveClass,
    pub c3: i64,
}

/// An element of the Chow ring truncated in degrees 0..=3.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Trunc {
    c0: i64,
    c1: DivClass,
    c2: CurveClass,
    c3: i64,
}

impl Trunc {
    const ONE: Trunc = Trunc {
        c0: 1,
        c1: DivClass { l: 0, e: 0, xi: 0 },
        c2: CurveClass {
            lxi: 0,
            exi: 0,
            l2: 0,
        },
        c3: 0,
    };

    fn mul(&self, o: &Trunc) -> Trunc {
        Trunc {
            c0: self.c0 * o.c0,
            c1: self.c1 * o.c0 + o.c1 * self.c0,
            c2: self.c2 * o.c0 + o.c2 * self.c0 + div_mul(self.c1, o.c1),
            c3: self.c3 * o.c0
                + o.c3 * self.c0
                + curve_dot_div(self.c2, o.c1)
                + curve_dot_div(o.c2, self.c1),
        }
    }
}

/// Total Chern class of a K-class by multiplying `1 + D` for positive
/// summands and the truncated inverse `1 - D + D^2 - D^3` for negative
/// ones. Everything stays in integer arithmetic.
pub fn chern(k: &KClass) -> ChernData {
    let mut acc = Trunc::ONE;
    for (d, n) in k.terms() {
        let factor = if *n > 0 {
            Trunc {
                c0: 1,
                c1: *d,
                c2: CurveClass::ZERO,
                c3: 0,
            }
        } else {
            Trunc {
                c0: 1,
                c1: -*d,
                c2: div_mul(*d, *d),
                c3: -triple(*d, *d, *d),
            }
        };
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&factor);
        }
    }
    debug_assert_eq!(acc.c0, 1);
    ChernData {
        rank: k.rank(),
        c1: acc.c1,
        c2: acc.c2,
        c3: acc.c3,
    }
}
