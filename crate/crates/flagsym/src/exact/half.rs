//! Half-integer weights stored as doubled integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfWeight {
    twice: i64,
}

impl HalfWeight {
    pub const ZERO: HalfWeight = HalfWeight { twice: 0 };
    pub const HALF: HalfWeight = HalfWeight { twice: 1 };
    pub const ONE: HalfWeight = HalfWeight { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfWeight { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfWeight { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integral(self) -> bool {
        self.twice % 2 == 0
    }

    /// The integer value, if the weight is integral.
    pub fn as_int(self) -> Option<i64> {
        self.is_integral().then_some(self.twice / 2)
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.twice, 2)
    }
}

impl Add for HalfWeight {
    type Output = HalfWeight;
    fn add(self, rhs: HalfWeight) -> HalfWeight {
        HalfWeight::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfWeight {
    type Output = HalfWeight;
    fn sub(self, rhs: HalfWeight) -> HalfWeight {
        HalfWeight::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfWeight {
    type Output = HalfWeight;
    fn neg(self) -> HalfWeight {
        HalfWeight::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for HalfWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parity() {
        assert_eq!(HalfWeight::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfWeight::from_twice(-4).to_string(), "-2");
        assert!(HalfWeight::from_int(5).is_integral());
        assert!(!HalfWeight::HALF.is_integral());
    }

    proptest! {
        #[test]
        fn order_matches_rationals(a in -1000i64..1000, b in -1000i64..1000) {
            let (x, y) = (HalfWeight::from_twice(a), HalfWeight::from_twice(b));
            prop_assert_eq!(x.cmp(&y), x.to_rational().cmp(&y.to_rational()));
            prop_assert_eq!((x + y).to_rational(), x.to_rational() + y.to_rational());
        }
    }
}
