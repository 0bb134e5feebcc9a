use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A dual number `s + d·ε` where `ε ≠ 0`, `ε² = 0` and ε commutes with reals.
///
/// `s` is the standard part and `d` the dual part. A dual number is *positive*
/// iff its standard part is strictly positive; the dual part does not enter
/// the order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualNumber {
    /// Standard part.
    pub s: f64,
    /// Dual part.
    pub d: f64,
}

impl DualNumber {
    pub const ZERO: DualNumber = DualNumber { s: 0.0, d: 0.0 };
    pub const ONE: DualNumber = DualNumber { s: 1.0, d: 0.0 };

    pub fn new(s: f64, d: f64) -> Self {
        DualNumber { s, d }
    }

    /// Embeds a real number (dual part zero).
    pub fn from_real(s: f64) -> Self {
        DualNumber { s, d: 0.0 }
    }

    /// A pure dual-part number `d·ε`.
    pub fn from_dual(d: f64) -> Self {
        DualNumber { s: 0.0, d }
    }

    pub fn is_positive(self) -> bool {
        self.s > 0.0
    }

    /// `self^k` by repeated dual multiplication; every step discards ε².
    pub fn powi(self, k: usize) -> Self {
        let mut acc = DualNumber::ONE;
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }
}

impl Add for DualNumber {
    type Output = DualNumber;
    fn add(self, rhs: DualNumber) -> DualNumber {
        DualNumber::new(self.s + rhs.s, self.d + rhs.d)
    }
}

impl AddAssign for DualNumber {
    fn add_assign(&mut self, rhs: DualNumber) {
        *self = *self + rhs;
    }
}

impl Sub for DualNumber {
    type Output = DualNumber;
    fn sub(self, rhs: DualNumber) -> DualNumber {
        DualNumber::new(self.s - rhs.s, self.d - rhs.d)
    }
}

impl SubAssign for DualNumber {
    fn sub_assign(&mut self, rhs: DualNumber) {
        *self = *self - rhs;
    }
}

impl Neg for DualNumber {
    type Output = DualNumber;
    fn neg(self) -> DualNumber {
        DualNumber::new(-self.s, -self.d)
    }
}

impl Mul for DualNumber {
    type Output = DualNumber;
    fn mul(self, rhs: DualNumber) -> DualNumber {
        // (a + bε)(c + dε) = ac + (ad + bc)ε, the ε² term is dropped.
        DualNumber::new(self.s * rhs.s, self.s * rhs.d + self.d * rhs.s)
    }
}

impl Mul<f64> for DualNumber {
    type Output = DualNumber;
    fn mul(self, rhs: f64) -> DualNumber {
        DualNumber::new(self.s * rhs, self.d * rhs)
    }
}

impl Mul<DualNumber> for f64 {
    type Output = DualNumber;
    fn mul(self, rhs: DualNumber) -> DualNumber {
        rhs * self
    }
}

impl Sum for DualNumber {
    fn sum<I: Iterator<Item = DualNumber>>(iter: I) -> DualNumber {
        iter.fold(DualNumber::ZERO, |a, b| a + b)
    }
}

impl From<f64> for DualNumber {
    fn from(s: f64) -> Self {
        DualNumber::from_real(s)
    }
}

impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d < 0.0 {
            write!(f, "{} - {}ε", self.s, -self.d)
        } else {
            write!(f, "{} + {}ε", self.s, self.d)
        }
    }
}
