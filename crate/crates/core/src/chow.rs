//! Intersection theory on the Chow ring of the threefold `F`.
//!
//! The graded pieces are free abelian groups with bases `1`; `l, e, xi`;
//! `lxi, exi, l2`; `l2xi`. Products are determined by `l*l = -e*e` (the
//! class of a fibre of the surface projection), `l*e = xi*xi = 0` and the
//! normalization `l*l*xi = 1`.
//!
//! Storage convention, fixed library-wide: the classical notation
//! `a*l - b*e + c*xi` is stored as the coefficient triple `(a, -b, c)`.
//! Fields always hold actual basis coefficients, never the sign-flipped
//! shorthand. Curve classes `alpha*lxi - beta*exi + gamma*l2` likewise
//! store `(alpha, -beta, gamma)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::linalg::{rat_int, Rat};

/// The convention banner repeated in every report header.
pub const SIGN_CONVENTION: &str = "divisor classes store basis coefficients (l, e, xi): \
a*l - b*e + c*xi is stored as (a, -b, c); curve classes store (lxi, exi, l2): \
alpha*lxi - beta*exi + gamma*l2 is stored as (alpha, -beta, gamma)";

#[inline]
fn cm(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("chow: coefficient overflow")
}

#[inline]
fn ca(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("chow: coefficient overflow")
}

/// A divisor class, element of the degree-1 piece of the Chow ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct DivClass {
    pub l: i64,
    pub e: i64,
    pub xi: i64,
}

/// A curve class, element of the degree-2 piece.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct CurveClass {
    pub lxi: i64,
    pub exi: i64,
    pub l2: i64,
}

/// A zero-cycle class, an integer multiple of the point generator `l2xi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct PointClass {
    pub deg: i64,
}

impl DivClass {
    pub const ZERO: DivClass = DivClass { l: 0, e: 0, xi: 0 };

    pub fn new(l: i64, e: i64, xi: i64) -> Self {
        DivClass { l, e, xi }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

impl CurveClass {
    pub const ZERO: CurveClass = CurveClass {
        lxi: 0,
        exi: 0,
        l2: 0,
    };

    pub fn new(lxi: i64, exi: i64, l2: i64) -> Self {
        CurveClass { lxi, exi, l2 }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

impl Add for DivClass {
    type Output = DivClass;
    fn add(self, o: DivClass) -> DivClass {
        DivClass::new(ca(self.l, o.l), ca(self.e, o.e), ca(self.xi, o.xi))
    }
}

impl Sub for DivClass {
    type Output = DivClass;
    fn sub(self, o: DivClass) -> DivClass {
        self + (-o)
    }
}

impl Neg for DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        DivClass::new(-self.l, -self.e, -self.xi)
    }
}

impl Mul<i64> for DivClass {
    type Output = DivClass;
    fn mul(self, n: i64) -> DivClass {
        DivClass::new(cm(self.l, n), cm(self.e, n), cm(self.xi, n))
    }
}

impl Add for CurveClass {
    type Output = CurveClass;
    fn add(self, o: CurveClass) -> CurveClass {
        CurveClass::new(ca(self.lxi, o.lxi), ca(self.exi, o.exi), ca(self.l2, o.l2))
    }
}

impl Sub for CurveClass {
    type Output = CurveClass;
    fn sub(self, o: CurveClass) -> CurveClass {
        self + (-o)
    }
}

impl Neg for CurveClass {
    type Output = CurveClass;
    fn neg(self) -> CurveClass {
        CurveClass::new(-self.lxi, -self.exi, -self.l2)
    }
}

impl Mul<i64> for CurveClass {
    type Output = CurveClass;
    fn mul(self, n: i64) -> CurveClass {
        CurveClass::new(cm(self.lxi, n), cm(self.exi, n), cm(self.l2, n))
    }
}

/// Product of divisor classes. For `(a, b, c) * (a', b', c')` the result is
/// `(ac' + a'c) lxi + (bc' + b'c) exi + (aa' - bb') l2`.
impl Mul for DivClass {
    type Output = CurveClass;
    fn mul(self, o: DivClass) -> CurveClass {
        CurveClass::new(
            ca(cm(self.l, o.xi), cm(o.l, self.xi)),
            ca(cm(self.e, o.xi), cm(o.e, self.xi)),
            ca(cm(self.l, o.l), -cm(self.e, o.e)),
        )
    }
}

/// Pairing of a curve class against a divisor class: the coefficient of the
/// point generator is `A*a - B*b + C*c`.
impl Mul<DivClass> for CurveClass {
    type Output = PointClass;
    fn mul(self, d: DivClass) -> PointClass {
        PointClass {
            deg: ca(ca(cm(self.lxi, d.l), -cm(self.exi, d.e)), cm(self.l2, d.xi)),
        }
    }
}

pub fn div_mul(d1: DivClass, d2: DivClass) -> CurveClass {
    d1 * d2
}

pub fn curve_dot_div(c: CurveClass, d: DivClass) -> i64 {
    (c * d).deg
}

/// Triple intersection number; symmetric in all three arguments.
pub fn triple(d1: DivClass, d2: DivClass, d3: DivClass) -> i64 {
    curve_dot_div(d1 * d2, d3)
}

/// Slope with respect to the fundamental polarization: `c1 * h^2 / rank`.
pub fn slope(rank: i64, c1: DivClass) -> Rat {
    assert!(rank >= 1, "slope: rank must be positive");
    let h = constants().h;
    rat_int(curve_dot_div(h * h, c1)) / rat_int(rank)
}

/// The stability half-space: for a twist `O_F(-a*l + b*e - c*xi)` of a
/// rank-2 bundle with first Chern class `-h`, the section space is required
/// to vanish exactly when `3a + 2c + 6 >= b`.
pub fn hoppe_region(a: i64, b: i64, c: i64) -> bool {
    3 * a + 2 * c + 6 >= b
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FanoConstants {
    /// Fundamental polarization, the anticanonical class.
    pub h: DivClass,
    /// Canonical class, `-h`.
    pub omega: DivClass,
    /// Second Chern class of the cotangent bundle.
    pub c2_omega: CurveClass,
    /// Euler characteristic of the structure sheaf.
    pub chi_o: i64,
    /// Fano index.
    pub index: i64,
    /// Half-index rounding, `floor(index / 2)`.
    pub q: i64,
}

pub fn constants() -> FanoConstants {
    let h = DivClass::new(3, -1, 2);
    FanoConstants {
        h,
        omega: -h,
        c2_omega: CurveClass::new(6, -2, 4),
        chi_o: 1,
        index: 1,
        q: 0,
    }
}

// ---------------------------------------------------------------------------
// Text notation

fn fmt_linear(f: &mut fmt::Formatter<'_>, terms: &[(i64, &str)]) -> fmt::Result {
    let mut first = true;
    for &(c, sym) in terms {
        if c == 0 {
            continue;
        }
        if first {
            if c < 0 {
                write!(f, "-")?;
            }
            first = false;
        } else if c < 0 {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let a = c.abs();
        if a != 1 {
            write!(f, "{a}")?;
        }
        write!(f, "{sym}")?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_linear(f, &[(self.l, "l"), (self.e, "e"), (self.xi, "xi")])
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_linear(f, &[(self.lxi, "lxi"), (self.exi, "exi"), (self.l2, "l2")])
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}l2xi", self.deg)
    }
}

impl fmt::Debug for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivClass({}, {}, {})", self.l, self.e, self.xi)
    }
}

impl fmt::Debug for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveClass({}, {}, {})", self.lxi, self.exi, self.l2)
    }
}

impl fmt::Debug for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointClass({})", self.deg)
    }
}

/// Parse a linear expression such as `3l - e + 2xi` or `4*lxi - 2*exi`,
/// or a raw coefficient triple `3,-1,2` / `(3,-1,2)`. Symbols are matched
/// longest-first so that `lxi` is never read as `l`.
fn parse_linear(input: &str, syms: &[&str]) -> Result<Vec<i64>, Error> {
    let err = |msg: &str| Error::Parse {
        input: input.to_string(),
        msg: msg.to_string(),
    };
    let body = input.trim();
    if body.is_empty() {
        return Err(err("empty expression"));
    }

    // Raw tuple form.
    if body.contains(',') {
        let inner = body
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(&format!("bad integer in tuple: {e}")))?;
        if inner.len() != syms.len() {
            return Err(err(&format!("expected {} components", syms.len())));
        }
        return Ok(inner);
    }

    let mut coeffs = vec![0i64; syms.len()];
    let chars: Vec<char> = body.chars().collect();
    let mut pos = 0;
    let mut any = false;
    while pos < chars.len() {
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if pos >= chars.len() {
            break;
        }
        let sign = match chars[pos] {
            '+' => {
                pos += 1;
                1
            }
            '-' => {
                pos += 1;
                -1
            }
            _ if any => return Err(err("terms must be separated by + or -")),
            _ => 1,
        };
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        let mut digits = String::new();
        while pos < chars.len() && chars[pos].is_ascii_digit() {
            digits.push(chars[pos]);
            pos += 1;
        }
        while pos < chars.len() && (chars[pos].is_whitespace() || chars[pos] == '*') {
            pos += 1;
        }
        let mut ident = String::new();
        if pos < chars.len() && chars[pos].is_ascii_alphabetic() {
            while pos < chars.len() && chars[pos].is_ascii_alphanumeric() {
                ident.push(chars[pos]);
                pos += 1;
            }
        }
        if ident.is_empty() {
            // A bare integer is only admitted when it is a literal zero.
            if digits.is_empty() {
                return Err(err("expected a coefficient or symbol"));
            }
            let n: i64 = digits.parse().map_err(|e| err(&format!("{e}")))?;
            if n != 0 {
                return Err(err("constant terms other than 0 are not classes"));
            }
            any = true;
            continue;
        }
        let slot = syms
            .iter()
            .position(|s| **s == ident)
            .ok_or_else(|| err(&format!("unknown symbol {ident:?}")))?;
        let mag: i64 = if digits.is_empty() {
            1
        } else {
            digits.parse().map_err(|e| err(&format!("{e}")))?
        };
        coeffs[slot] = ca(coeffs[slot], cm(sign, mag));
        any = true;
    }
    if !any {
        return Err(err("no terms"));
    }
    Ok(coeffs)
}

impl FromStr for DivClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let c = parse_linear(s, &["l", "e", "xi"])?;
        Ok(DivClass::new(c[0], c[1], c[2]))
    }
}

impl FromStr for CurveClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let c = parse_linear(s, &["lxi", "exi", "l2"])?;
        Ok(CurveClass::new(c[0], c[1], c[2]))
    }
}
