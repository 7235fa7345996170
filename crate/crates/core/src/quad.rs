//! Exact numbers in a real quadratic field ℚ(√d).
//!
//! A [`Quad`] is `rat + irr·√d` with `d` squarefree and `d > 1`. Purely
//! rational values carry `d = 1` and `irr = 0`, so they combine with any
//! quadratic field. `√d` is always read as the positive real root.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    rat: BigRational,
    irr: BigRational,
    d: u64,
}

pub fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub fn rat(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

impl Quad {
    pub fn new(rat: BigRational, irr: BigRational, d: u64) -> Self {
        assert!(
            irr.is_zero() || is_squarefree(d),
            "sqrt({d}) is not a squarefree radicand"
        );
        if irr.is_zero() {
            Quad { rat, irr, d: 1 }
        } else {
            Quad { rat, irr, d }
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Quad {
            rat: q,
            irr: BigRational::zero(),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, m: i64) -> Self {
        Self::from_rational(rat(n, m))
    }

    /// The positive square root of a squarefree `d > 1`.
    pub fn sqrt(d: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irr
    }

    /// Radicand, or `None` when the value is rational.
    pub fn radicand(&self) -> Option<u64> {
        if self.irr.is_zero() {
            None
        } else {
            Some(self.d)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    fn common_d(&self, other: &Quad) -> u64 {
        match (self.radicand(), other.radicand()) {
            (None, None) => 1,
            (Some(d), None) | (None, Some(d)) => d,
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "mixing sqrt({a}) and sqrt({b})");
                a
            }
        }
    }

    /// Galois conjugate `rat − irr·√d`.
    pub fn conj(&self) -> Quad {
        Quad::new(self.rat.clone(), -self.irr.clone(), self.d)
    }

    /// Field norm `rat² − d·irr²` (rational).
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - &self.irr * &self.irr * BigRational::from_integer(self.d.into())
    }

    pub fn signum(&self) -> Ordering {
        let zero = BigRational::zero();
        let a = self.rat.cmp(&zero);
        let b = self.irr.cmp(&zero);
        match (a, b) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            // opposite signs: compare rat² with d·irr²
            (x, _) => {
                let lhs = &self.rat * &self.rat;
                let rhs = &self.irr * &self.irr * BigRational::from_integer(self.d.into());
                match lhs.cmp(&rhs) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Quad {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Option<Quad> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(Quad::new(&c.rat / &n, &c.irr / &n, self.d))
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.irr.is_zero() {
            r
        } else {
            r + self.irr.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.rat.floor().to_integer();
        }
        let mut n = BigInt::from(self.to_f64().floor() as i64);
        loop {
            let nq = Quad::from_rational(BigRational::from_integer(n.clone()));
            if (self.clone() - nq.clone()).is_negative() {
                n -= 1;
                continue;
            }
            let n1 = nq + Quad::one();
            if !(self.clone() - n1).is_negative() {
                n += 1;
                continue;
            }
            return n;
        }
    }

    pub fn pow(&self, e: u32) -> Quad {
        let mut acc = Quad::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// A rational strictly below the value and within `1/den` of it.
    pub fn rational_below(&self, den: u64) -> BigRational {
        let den_q = Quad::from_int(den as i64);
        let scaled = self.clone() * den_q;
        let f = scaled.floor();
        let mut q = BigRational::new(f, BigInt::from(den));
        if Quad::from_rational(q.clone()) == *self {
            q -= BigRational::new(BigInt::one(), BigInt::from(den));
        }
        q
    }
}

impl From<i64> for Quad {
    fn from(n: i64) -> Self {
        Quad::from_int(n)
    }
}

impl From<BigRational> for Quad {
    fn from(q: BigRational) -> Self {
        Quad::from_rational(q)
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        let d = self.common_d(&rhs);
        Quad::new(self.rat + rhs.rat, self.irr + rhs.irr, d)
    }
}

impl<'a> Add<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn add(self, rhs: &Quad) -> Quad {
        let d = self.common_d(rhs);
        Quad::new(&self.rat + &rhs.rat, &self.irr + &rhs.irr, d)
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        let d = self.common_d(&rhs);
        Quad::new(self.rat - rhs.rat, self.irr - rhs.irr, d)
    }
}

impl<'a> Sub<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn sub(self, rhs: &Quad) -> Quad {
        let d = self.common_d(rhs);
        Quad::new(&self.rat - &rhs.rat, &self.irr - &rhs.irr, d)
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(-self.rat, -self.irr, self.d)
    }
}

impl<'a> Mul<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn mul(self, rhs: &Quad) -> Quad {
        let d = self.common_d(rhs);
        let dd = BigRational::from_integer(d.into());
        let rat = &self.rat * &rhs.rat + &self.irr * &rhs.irr * dd;
        let irr = &self.rat * &rhs.irr + &self.irr * &rhs.rat;
        Quad::new(rat, irr, d)
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        &self * &rhs
    }
}

impl Div for Quad {
    type Output = Quad;
    fn div(self, rhs: Quad) -> Quad {
        let inv = rhs.inv().expect("division by zero in Q(sqrt d)");
        self * inv
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            return write!(f, "{}", fmt_rat(&self.rat));
        }
        let root = format!("sqrt({})", self.d);
        let irr_abs = self.irr.abs();
        let irr_part = if irr_abs.is_one() {
            root
        } else {
            format!("{}*{}", fmt_rat(&irr_abs), root)
        };
        if self.rat.is_zero() {
            if self.irr.is_negative() {
                write!(f, "-{irr_part}")
            } else {
                write!(f, "{irr_part}")
            }
        } else {
            let sign = if self.irr.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", fmt_rat(&self.rat), sign, irr_part)
        }
    }
}

/// Parse a squarefree radicand; `None` when `d` is not squarefree.
pub fn checked_sqrt(d: u64) -> Option<Quad> {
    if is_squarefree(d) {
        Some(Quad::sqrt(d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_three_minus_two_root_two() {
        // 9 > 8, so 3 > 2√2
        let x = Quad::from_int(3) - Quad::from_int(2) * Quad::sqrt(2);
        assert_eq!(x.signum(), Ordering::Greater);
        let y = Quad::from_int(1) - Quad::sqrt(2);
        assert!(y.is_negative());
    }

    #[test]
    fn inverse_and_floor() {
        let r2 = Quad::sqrt(2);
        let x = Quad::one() + r2.clone();
        let inv = x.inv().unwrap();
        assert_eq!(inv.clone() * x, Quad::one());
        assert_eq!(r2.floor(), BigInt::from(1));
        assert_eq!((-r2.clone()).floor(), BigInt::from(-2));
        let q = r2.rational_below(5);
        assert_eq!(q, rat(7, 5));
        assert!(Quad::from_rational(q) < r2);
    }

    #[test]
    fn display() {
        assert_eq!(Quad::from_ratio(7, 5).to_string(), "7/5");
        let x = Quad::from_int(2) + Quad::from_int(3) * Quad::sqrt(2);
        assert_eq!(x.to_string(), "2+3*sqrt(2)");
        assert_eq!((-Quad::sqrt(3)).to_string(), "-sqrt(3)");
        assert_eq!(
            (Quad::from_ratio(1, 2) - Quad::from_ratio(1, 3) * Quad::sqrt(5)).to_string(),
            "1/2-1/3*sqrt(5)"
        );
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(2));
        assert!(is_squarefree(6));
        assert!(!is_squarefree(8));
        assert!(!is_squarefree(1));
    }
}
