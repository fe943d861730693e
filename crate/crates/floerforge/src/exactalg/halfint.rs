use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// A half-integer stored as twice its mathematical value.
///
/// Alexander and Maslov gradings live in `Z + lk/2`, so the doubled
/// representation keeps all grading arithmetic exact and makes the
/// integer-vs-strict-half distinction a parity check.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    /// Constructs from a whole integer value.
    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Constructs from a doubled value (i.e. `n/2`).
    pub fn from_doubled(n: i64) -> Self {
        HalfInt(n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, if this is a whole integer.
    pub fn as_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    /// Parity of the integer part once the coset offset is subtracted.
    /// `self - offset` must be a whole integer.
    pub fn parity_rel(self, offset: HalfInt) -> i64 {
        let d = self.0 - offset.0;
        debug_assert!(d % 2 == 0, "parity_rel on mismatched coset");
        (d / 2).rem_euclid(2)
    }

    pub fn half() -> Self {
        HalfInt(1)
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.0 += rhs.0;
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.0 -= rhs.0;
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubled_roundtrip() {
        let a = HalfInt::from_int(3);
        assert_eq!(a.doubled(), 6);
        assert_eq!(a.as_int(), Some(3));
        let b = HalfInt::from_doubled(3);
        assert!(!b.is_integer());
        assert_eq!(b.as_int(), None);
        assert_eq!((a + b).doubled(), 9);
        assert_eq!(format!("{}", b), "3/2");
        assert_eq!(format!("{}", -b), "-3/2");
        assert_eq!(format!("{}", a), "3");
    }

    #[test]
    fn coset_parity() {
        let m = HalfInt::from_doubled(-7); // -7/2
        assert_eq!(m.parity_rel(HalfInt::half()), 0); // -7/2 - 1/2 = -4
        let n = HalfInt::from_doubled(-5);
        assert_eq!(n.parity_rel(HalfInt::half()), 1);
    }
}
