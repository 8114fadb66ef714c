//! Brute-force section oracle in Cox coordinates.
//!
//! The threefold carries six homogeneous coordinates: `x1, x2` of class
//! `l - e` (the fibre pencil of the inner ruling), `y` of class `e` (the
//! exceptional section), `z` of class `l`, and `s0, s1` of class `xi` (the
//! outer line factor). A point is valid when none of the three pairs
//! `(x1, x2)`, `(y, z)`, `(s0, s1)` vanishes simultaneously.
//!
//! Section spaces of line bundles are the monomials of the matching
//! multidegree, enumerated in a fixed lexicographic order so that every
//! multiplication matrix is reproducible bit for bit. This module is the
//! independent check for the closed-form section counts in
//! [`crate::cohomology`].

use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::chow::DivClass;
use crate::error::Error;
use crate::linalg::{rat_int, Rat, SparseCols};

/// A monomial `x1^a1 x2^a2 y^m z^n s0^d0 s1^d1`. Field order gives the
/// basis order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoxMonomial {
    pub a1: u32,
    pub a2: u32,
    pub m: u32,
    pub n: u32,
    pub d0: u32,
    pub d1: u32,
}

pub const X1: CoxMonomial = CoxMonomial::new(1, 0, 0, 0, 0, 0);
pub const X2: CoxMonomial = CoxMonomial::new(0, 1, 0, 0, 0, 0);
pub const Y: CoxMonomial = CoxMonomial::new(0, 0, 1, 0, 0, 0);
pub const Z: CoxMonomial = CoxMonomial::new(0, 0, 0, 1, 0, 0);
pub const S0: CoxMonomial = CoxMonomial::new(0, 0, 0, 0, 1, 0);
pub const S1: CoxMonomial = CoxMonomial::new(0, 0, 0, 0, 0, 1);

impl CoxMonomial {
    pub const fn new(a1: u32, a2: u32, m: u32, n: u32, d0: u32, d1: u32) -> Self {
        CoxMonomial {
            a1,
            a2,
            m,
            n,
            d0,
            d1,
        }
    }

    pub const ONE: CoxMonomial = CoxMonomial::new(0, 0, 0, 0, 0, 0);

    /// Multidegree `(a1+a2+n) l + (m-a1-a2) e + (d0+d1) xi`.
    pub fn degree(&self) -> DivClass {
        let fib = self.a1 as i64 + self.a2 as i64;
        DivClass::new(
            fib + self.n as i64,
            self.m as i64 - fib,
            self.d0 as i64 + self.d1 as i64,
        )
    }

    pub fn mul(&self, o: &CoxMonomial) -> CoxMonomial {
        CoxMonomial::new(
            self.a1 + o.a1,
            self.a2 + o.a2,
            self.m + o.m,
            self.n + o.n,
            self.d0 + o.d0,
            self.d1 + o.d1,
        )
    }

    pub fn eval(&self, p: &CoxPoint) -> Rat {
        fn pow(base: &Rat, e: u32) -> Rat {
            let mut acc = rat_int(1);
            for _ in 0..e {
                acc = &acc * base;
            }
            acc
        }
        pow(&p.x1, self.a1)
            * pow(&p.x2, self.a2)
            * pow(&p.y, self.m)
            * pow(&p.z, self.n)
            * pow(&p.s0, self.d0)
            * pow(&p.s1, self.d1)
    }
}

impl fmt::Display for CoxMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (self.a1, "x1"),
            (self.a2, "x2"),
            (self.m, "y"),
            (self.n, "z"),
            (self.d0, "s0"),
            (self.d1, "s1"),
        ];
        let mut wrote = false;
        for (e, sym) in parts {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, " ")?;
            }
            wrote = true;
            if e == 1 {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{sym}^{e}")?;
            }
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A point in Cox coordinates `(x1, x2, y, z, s0, s1)`.
#[derive(Clone, PartialEq, Debug)]
pub struct CoxPoint {
    pub x1: Rat,
    pub x2: Rat,
    pub y: Rat,
    pub z: Rat,
    pub s0: Rat,
    pub s1: Rat,
}

impl CoxPoint {
    pub fn from_ints(c: [i64; 6]) -> Self {
        CoxPoint {
            x1: rat_int(c[0]),
            x2: rat_int(c[1]),
            y: rat_int(c[2]),
            z: rat_int(c[3]),
            s0: rat_int(c[4]),
            s1: rat_int(c[5]),
        }
    }
}

impl fmt::Display for CoxPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x1={}, x2={}, y={}, z={}, s0={}, s1={})",
            self.x1, self.x2, self.y, self.z, self.s0, self.s1
        )
    }
}

/// Valid points avoid the irrelevant locus: none of the three coordinate
/// pairs may vanish simultaneously.
pub fn irrelevant_check(p: &CoxPoint) -> bool {
    !(p.x1.is_zero() && p.x2.is_zero())
        && !(p.y.is_zero() && p.z.is_zero())
        && !(p.s0.is_zero() && p.s1.is_zero())
}

/// All monomials of multidegree `d`, lexicographically ordered. The count
/// always equals the closed-form section dimension; the acceptance suite
/// checks this equality on a grid.
pub fn basis_f(d: DivClass) -> Vec<CoxMonomial> {
    let mut out = Vec::new();
    if d.xi < 0 {
        return out;
    }
    // fibre-pair total k = a1 + a2 with n = l - k >= 0 and m = k + e >= 0
    let k_lo = 0.max(-d.e);
    let k_hi = d.l;
    for k in k_lo..=k_hi {
        let n = d.l - k;
        let m = k + d.e;
        if n < 0 || m < 0 {
            continue;
        }
        for a1 in 0..=k {
            for d0 in 0..=d.xi {
                out.push(CoxMonomial::new(
                    a1 as u32,
                    (k - a1) as u32,
                    m as u32,
                    n as u32,
                    d0 as u32,
                    (d.xi - d0) as u32,
                ));
            }
        }
    }
    out.sort();
    out
}

/// A section written in the monomial basis of its class.
#[derive(Clone, PartialEq, Debug)]
pub struct SectionVector {
    class: DivClass,
    basis: Vec<CoxMonomial>,
    coeffs: Vec<Rat>,
}

impl SectionVector {
    pub fn zero(class: DivClass) -> Self {
        let basis = basis_f(class);
        let coeffs = vec![Rat::zero(); basis.len()];
        SectionVector {
            class,
            basis,
            coeffs,
        }
    }

    /// The section given by a single monomial, which must have the stated
    /// multidegree.
    pub fn monomial(class: DivClass, mono: CoxMonomial) -> Result<Self, Error> {
        if mono.degree() != class {
            return Err(Error::ClassMismatch {
                expected: class,
                got: mono.degree(),
            });
        }
        let mut s = SectionVector::zero(class);
        let idx = s
            .basis
            .binary_search(&mono)
            .expect("monomial of matching degree is in the basis");
        s.coeffs[idx] = rat_int(1);
        Ok(s)
    }

    pub fn from_coeffs(class: DivClass, coeffs: Vec<Rat>) -> Self {
        let basis = basis_f(class);
        assert_eq!(coeffs.len(), basis.len(), "coefficient vector length");
        SectionVector {
            class,
            basis,
            coeffs,
        }
    }

    /// Random section with small integer coefficients, never identically
    /// zero unless the space itself is zero.
    pub fn random(class: DivClass, rng: &mut impl Rng, bound: i64) -> Self {
        let basis = basis_f(class);
        if basis.is_empty() {
            return SectionVector::zero(class);
        }
        loop {
            let coeffs: Vec<Rat> = (0..basis.len())
                .map(|_| rat_int(rng.gen_range(-bound..=bound)))
                .collect();
            if coeffs.iter().any(|c| !c.is_zero()) {
                return SectionVector {
                    class,
                    basis: basis.clone(),
                    coeffs,
                };
            }
        }
    }

    pub fn class(&self) -> DivClass {
        self.class
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// When the section is a single monomial, return it with its
    /// coefficient.
    pub fn as_monomial(&self) -> Option<(Rat, CoxMonomial)> {
        let mut hit = None;
        for (c, m) in self.terms() {
            if hit.is_some() {
                return None;
            }
            hit = Some((c, m));
        }
        hit
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rat, CoxMonomial)> + '_ {
        self.coeffs
            .iter()
            .zip(self.basis.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| (c.clone(), *m))
    }

    pub fn eval(&self, p: &CoxPoint) -> Rat {
        let mut acc = Rat::zero();
        for (c, m) in self.terms() {
            acc += c * m.eval(p);
        }
        acc
    }
}

impl fmt::Display for SectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, m) in self.terms() {
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            if c == rat_int(1) {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Product of sections; the result lives in the sum of the classes.
pub fn section_mul(s: &SectionVector, t: &SectionVector) -> SectionVector {
    let class = s.class + t.class;
    let mut out = SectionVector::zero(class);
    for (cs, ms) in s.terms() {
        for (ct, mt) in t.terms() {
            let prod = ms.mul(&mt);
            let idx = out
                .basis
                .binary_search(&prod)
                .expect("product monomial lands in the expected basis");
            out.coeffs[idx] = &out.coeffs[idx] + &(&cs * &ct);
        }
    }
    out
}

/// The exact matrix of multiplication by `s` from the basis of `source` to
/// the basis of `source + class(s)`. Rows index the target basis, columns
/// the source basis.
pub fn mult_matrix(s: &SectionVector, source: DivClass) -> SparseCols {
    let src_basis = basis_f(source);
    let dst_basis = basis_f(source + s.class);
    let mut m = SparseCols::zero(dst_basis.len(), src_basis.len());
    for (j, mono) in src_basis.iter().enumerate() {
        let mut col: Vec<(usize, Rat)> = s
            .terms()
            .map(|(c, tm)| {
                let prod = mono.mul(&tm);
                let row = dst_basis
                    .binary_search(&prod)
                    .expect("multidegree additivity");
                (row, c)
            })
            .collect();
        col.sort_by_key(|(r, _)| *r);
        m.cols[j] = col;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(l: i64, e: i64, xi: i64) -> DivClass {
        DivClass::new(l, e, xi)
    }

    #[test]
    fn small_bases() {
        let b = basis_f(d(1, 0, 0));
        assert_eq!(b.len(), 3);
        assert!(b.contains(&Z));
        assert!(b.contains(&X1.mul(&Y)));
        assert!(b.contains(&X2.mul(&Y)));

        assert_eq!(basis_f(d(0, 1, 0)), vec![Y]);
        let xi_basis = basis_f(d(0, 0, 1));
        assert_eq!(xi_basis.len(), 2);
        assert!(xi_basis.contains(&S0) && xi_basis.contains(&S1));
        assert!(basis_f(d(-1, 0, 0)).is_empty());
        assert!(basis_f(d(0, 0, -1)).is_empty());
    }

    #[test]
    fn basis_counts_match_closed_form_on_grid() {
        use crate::cohomology::cohom_f;
        for l in -5..=5 {
            for e in -5..=5 {
                for xi in -3..=3 {
                    let dd = d(l, e, xi);
                    assert_eq!(
                        basis_f(dd).len() as u64,
                        cohom_f(dd).h0,
                        "basis count mismatch at {dd}"
                    );
                }
            }
        }
    }

    #[test]
    fn multidegrees_are_consistent() {
        for mono in basis_f(d(2, -1, 1)) {
            assert_eq!(mono.degree(), d(2, -1, 1));
        }
    }

    #[test]
    fn mult_matrix_examples() {
        // multiplication by z as a 1x1 inclusion
        let z = SectionVector::monomial(d(1, 0, 0), Z).unwrap();
        let m = mult_matrix(&z, DivClass::ZERO);
        assert_eq!((m.rows, m.ncols()), (3, 1));
        assert_eq!(m.rank(), 1);

        // s0 * {s0, s1} inside {s0^2, s0 s1, s1^2}
        let s0 = SectionVector::monomial(d(0, 0, 1), S0).unwrap();
        let m = mult_matrix(&s0, d(0, 0, 1));
        assert_eq!((m.rows, m.ncols()), (3, 2));
        assert_eq!(m.rank(), 2);

        // the zero section gives the zero matrix
        let zero = SectionVector::zero(d(0, 0, 1));
        let m = mult_matrix(&zero, d(0, 0, 1));
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn section_products_compose() {
        let s0 = SectionVector::monomial(d(0, 0, 1), S0).unwrap();
        let z = SectionVector::monomial(d(1, 0, 0), Z).unwrap();
        let prod = section_mul(&s0, &z);
        assert_eq!(prod.class(), d(1, 0, 1));
        assert_eq!(prod.terms().count(), 1);
    }

    #[test]
    fn irrelevant_locus() {
        assert!(irrelevant_check(&CoxPoint::from_ints([1, 1, 1, 1, 1, 1])));
        assert!(!irrelevant_check(&CoxPoint::from_ints([0, 0, 1, 1, 1, 1])));
        assert!(!irrelevant_check(&CoxPoint::from_ints([1, 1, 0, 0, 1, 1])));
        assert!(!irrelevant_check(&CoxPoint::from_ints([1, 1, 1, 1, 0, 0])));
        assert!(irrelevant_check(&CoxPoint::from_ints([0, 1, 0, 1, 0, 1])));
    }

    #[test]
    fn evaluation() {
        let p = CoxPoint::from_ints([2, 3, 1, 1, 5, 7]);
        assert_eq!(X1.mul(&X1).eval(&p), rat_int(4));
        let s = SectionVector::monomial(d(0, 0, 1), S1).unwrap();
        assert_eq!(s.eval(&p), rat_int(7));
    }
}
