//! Exact rational linear algebra: sparse column matrices over arbitrary
//! precision rationals with rank, kernel and cokernel dimensions via
//! fraction-exact Gaussian elimination. The matrices produced by the Cox
//! oracle are extremely sparse (monomial multiplication has one entry per
//! column), so columns are kept as sorted `(row, coefficient)` lists.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// One column: entries sorted by row index, no explicit zeros.
pub type SparseCol = Vec<(usize, Rat)>;

#[derive(Clone, Debug)]
pub struct SparseCols {
    pub rows: usize,
    pub cols: Vec<SparseCol>,
}

impl SparseCols {
    pub fn zero(rows: usize, ncols: usize) -> Self {
        SparseCols {
            rows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Glue blocks side by side. All blocks must share the row space.
    pub fn hstack(blocks: &[SparseCols]) -> SparseCols {
        let rows = blocks.iter().map(|b| b.rows).max().unwrap_or(0);
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack: row spaces differ");
        }
        let mut cols = Vec::new();
        for b in blocks {
            cols.extend(b.cols.iter().cloned());
        }
        SparseCols { rows, cols }
    }

    pub fn rank(&self) -> usize {
        // pivots[row] = column reduced so that its leading entry sits at
        // `row` with coefficient 1.
        let mut pivots: std::collections::BTreeMap<usize, SparseCol> =
            std::collections::BTreeMap::new();
        for col in &self.cols {
            let mut cur = col.clone();
            while let Some((lead_row, lead_coef)) = cur.first().cloned() {
                match pivots.get(&lead_row) {
                    Some(p) => {
                        cur = axpy(&-lead_coef, p, &cur);
                    }
                    None => {
                        let inv = lead_coef.recip();
                        for (_, c) in cur.iter_mut() {
                            *c = &*c * &inv;
                        }
                        pivots.insert(lead_row, cur);
                        break;
                    }
                }
            }
        }
        let rank = pivots.len();
        // the modular screen can only lose rank, never gain it
        debug_assert!(self.rank_mod_p().is_none_or(|rp| rp <= rank));
        rank
    }

    /// Rank over the prime field with the fixed modulus [`SCREEN_PRIME`].
    /// This is a fast pre-check only: the modular rank never exceeds the
    /// rational one, so a full-rank outcome screens kernel questions
    /// cheaply, but reported certificates are always recomputed with the
    /// exact elimination. Returns `None` when a denominator reduces to
    /// zero mod p.
    pub fn rank_mod_p(&self) -> Option<usize> {
        let p = SCREEN_PRIME;
        let big_p = BigInt::from(p);
        let reduce = |r: &Rat| -> Option<u64> {
            let num = (r.numer() % &big_p).to_i64()?.rem_euclid(p) as u64;
            let den = (r.denom() % &big_p).to_i64()?.rem_euclid(p) as u64;
            if den == 0 {
                return None;
            }
            Some(num * inv_mod(den, p as u64) % p as u64)
        };
        let mut pivots: std::collections::BTreeMap<usize, Vec<(usize, u64)>> =
            std::collections::BTreeMap::new();
        for col in &self.cols {
            let mut cur = Vec::with_capacity(col.len());
            for (r, c) in col {
                let v = reduce(c)?;
                if v != 0 {
                    cur.push((*r, v));
                }
            }
            while let Some(&(lead_row, lead)) = cur.first() {
                match pivots.get(&lead_row) {
                    Some(piv) => {
                        cur = axpy_mod(p as u64 - lead, piv, &cur, p as u64);
                    }
                    None => {
                        let inv = inv_mod(lead, p as u64);
                        for (_, c) in cur.iter_mut() {
                            *c = *c * inv % p as u64;
                        }
                        pivots.insert(lead_row, cur);
                        break;
                    }
                }
            }
        }
        Some(pivots.len())
    }

    pub fn kernel_dim(&self) -> usize {
        self.ncols() - self.rank()
    }

    pub fn cokernel_dim(&self) -> usize {
        self.rows - self.rank()
    }

    #[cfg(test)]
    pub fn from_dense(rows: usize, dense: &[&[i64]]) -> SparseCols {
        let ncols = if rows == 0 { 0 } else { dense[0].len() };
        let mut m = SparseCols::zero(rows, ncols);
        for (r, row) in dense.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.cols[c].push((r, rat_int(v)));
                }
            }
        }
        for col in m.cols.iter_mut() {
            col.sort_by_key(|(r, _)| *r);
        }
        m
    }
}

/// Modulus of the screening field, a prime comfortably above 2^30.
pub const SCREEN_PRIME: i64 = (1 << 31) - 1;

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn axpy_mod(a: u64, x: &[(usize, u64)], y: &[(usize, u64)], p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let v = match (x.get(i), y.get(j)) {
            (Some(&(rx, cx)), Some(&(ry, cy))) if rx == ry => {
                i += 1;
                j += 1;
                (rx, (cy + a * cx) % p)
            }
            (Some(&(rx, cx)), Some(&(ry, _))) if rx < ry => {
                i += 1;
                (rx, a * cx % p)
            }
            (Some(&(rx, cx)), None) => {
                i += 1;
                (rx, a * cx % p)
            }
            (_, Some(&(ry, cy))) => {
                j += 1;
                (ry, cy)
            }
            (None, None) => unreachable!(),
        };
        if v.1 != 0 {
            out.push(v);
        }
    }
    out
}

/// y + a*x for sorted sparse columns.
fn axpy(a: &Rat, x: &SparseCol, y: &SparseCol) -> SparseCol {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        match (x.get(i), y.get(j)) {
            (Some((rx, cx)), Some((ry, cy))) => {
                if rx < ry {
                    let v = a * cx;
                    if !v.is_zero() {
                        out.push((*rx, v));
                    }
                    i += 1;
                } else if ry < rx {
                    out.push((*ry, cy.clone()));
                    j += 1;
                } else {
                    let v = cy + &(a * cx);
                    if !v.is_zero() {
                        out.push((*rx, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((rx, cx)), None) => {
                let v = a * cx;
                if !v.is_zero() {
                    out.push((*rx, v));
                }
                i += 1;
            }
            (None, Some((ry, cy))) => {
                out.push((*ry, cy.clone()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Univariate polynomial gcd over the rationals; polynomials are coefficient
/// vectors with index = degree, trimmed of leading zeros. Used by the line
/// restriction to decide whether binary forms share a root.
pub fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        if !lead.is_one() {
            for c in a.iter_mut() {
                *c = &*c / &lead;
            }
        }
    }
    a
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let factor = r.last().unwrap() / lead;
        for (k, bk) in b.iter().enumerate() {
            let idx = dr - db + k;
            let sub = &factor * bk;
            r[idx] = &r[idx] - &sub;
        }
        r = trim(r);
        if r.len() <= db {
            break;
        }
    }
    trim(r)
}

fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_dense() {
        let m = SparseCols::from_dense(3, &[&[1, 0, 2], &[0, 1, 1], &[1, 1, 3]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel_dim(), 1);
        assert_eq!(m.cokernel_dim(), 1);
    }

    #[test]
    fn rank_handles_zero_and_identity() {
        assert_eq!(SparseCols::zero(4, 3).rank(), 0);
        let id = SparseCols::from_dense(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(id.rank(), 3);
        assert_eq!(id.kernel_dim(), 0);
    }

    #[test]
    fn modular_screen_never_exceeds_the_exact_rank() {
        let m = SparseCols::from_dense(3, &[&[1, 0, 2], &[0, 1, 1], &[1, 1, 3]]);
        assert_eq!(m.rank_mod_p(), Some(2));
        // a matrix whose only entry is the screening prime drops rank mod p
        let mut bad = SparseCols::zero(1, 1);
        bad.cols[0].push((0, rat_int(SCREEN_PRIME)));
        assert_eq!(bad.rank(), 1);
        assert_eq!(bad.rank_mod_p(), Some(0));
        // entries with the prime in the denominator cannot be screened
        let mut unred = SparseCols::zero(1, 1);
        unred.cols[0].push((0, rat_frac(1, SCREEN_PRIME)));
        assert_eq!(unred.rank_mod_p(), None);
        assert_eq!(unred.rank(), 1);
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (w - 1)(w + 2) and (w - 1)(w - 3) share (w - 1)
        let a = vec![rat_int(-2), rat_int(1), rat_int(1)];
        let b = vec![rat_int(3), rat_int(-4), rat_int(1)];
        let g = poly_gcd(&a, &b);
        assert_eq!(g, vec![rat_int(-1), rat_int(1)]);
    }

    #[test]
    fn gcd_of_coprime_is_constant() {
        let a = vec![rat_int(1), rat_int(1)];
        let b = vec![rat_int(2), rat_int(1)];
        assert_eq!(poly_gcd(&a, &b).len(), 1);
    }
}
