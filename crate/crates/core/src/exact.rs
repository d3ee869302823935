//! Exact arithmetic in `Q(sqrt 2)`.
//!
//! Every capital of a gale whose exponent (and every other exponent it is
//! built from) is a multiple of 1/2 lies in this field, since
//! `2^(h/2) = 2^floor(h/2) * sqrt2^(h mod 2)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::{pow2, to_f64};

/// Returns `Some(h)` when `value == h / 2` for a modest integer `h`.
pub fn halves(value: f64) -> Option<i64> {
    let doubled = 2.0 * value;
    if doubled.is_finite() && doubled.fract() == 0.0 && doubled.abs() < (1u64 << 40) as f64 {
        Some(doubled as i64)
    } else {
        None
    }
}

/// `a + b * sqrt(2)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    rational: BigRational,
    root2: BigRational,
}

impl Surd {
    pub fn new(rational: BigRational, root2: BigRational) -> Self {
        Surd { rational, root2 }
    }

    pub fn zero() -> Self {
        Surd::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Surd::from_rational(BigRational::one())
    }

    pub fn from_rational(value: BigRational) -> Self {
        Surd::new(value, BigRational::zero())
    }

    /// `2^(h/2)`.
    pub fn pow2_halves(h: i64) -> Self {
        let whole = pow2(h.div_euclid(2));
        if h.rem_euclid(2) == 0 {
            Surd::from_rational(whole)
        } else {
            Surd::new(BigRational::zero(), whole)
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn root2_part(&self) -> &BigRational {
        &self.root2
    }

    /// The value as a plain rational, when the `sqrt 2` part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.root2.is_zero().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.root2.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&BigRational::zero());
        let b = self.root2.cmp(&BigRational::zero());
        match (a, b) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                let a2 = &self.rational * &self.rational;
                let two_b2 = BigRational::from_integer(2.into()) * &self.root2 * &self.root2;
                match a2.cmp(&two_b2) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (a + b r)^-1 = (a - b r) / (a^2 - 2 b^2)
        let norm = &self.rational * &self.rational
            - BigRational::from_integer(2.into()) * &self.root2 * &self.root2;
        Some(Surd::new(&self.rational / &norm, -&self.root2 / &norm))
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.rational) + std::f64::consts::SQRT_2 * to_f64(&self.root2)
    }

    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.to_f64().log2()
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root2.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + {}*sqrt2", self.rational, self.root2)
        }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd::new(&self.rational + &rhs.rational, &self.root2 + &rhs.root2)
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        &self + &rhs
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        Surd::new(&self.rational - &rhs.rational, &self.root2 - &rhs.root2)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        &self - &rhs
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let two = BigRational::from_integer(2.into());
        Surd::new(
            &self.rational * &rhs.rational + two * &self.root2 * &rhs.root2,
            &self.rational * &rhs.root2 + &self.root2 * &rhs.rational,
        )
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl Mul<&BigRational> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &BigRational) -> Surd {
        Surd::new(&self.rational * rhs, &self.root2 * rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.rational, -self.root2)
    }
}

impl std::iter::Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        iter.fold(Surd::zero(), |acc, x| acc + x)
    }
}
