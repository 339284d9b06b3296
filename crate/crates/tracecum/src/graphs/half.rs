use serde::{Deserialize, Serialize};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

/// Exact value k/2 for integer k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { twice: 0 };
    pub const HALF: HalfInteger = HalfInteger { twice: 1 };
    pub const ONE: HalfInteger = HalfInteger { twice: 2 };

    pub fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    /// The numerator over 2.
    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, o: HalfInteger) -> HalfInteger {
        HalfInteger { twice: self.twice + o.twice }
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, o: HalfInteger) -> HalfInteger {
        HalfInteger { twice: self.twice - o.twice }
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> HalfInteger {
        HalfInteger { twice: -self.twice }
    }
}

impl Sum for HalfInteger {
    fn sum<I: Iterator<Item = HalfInteger>>(iter: I) -> HalfInteger {
        iter.fold(HalfInteger::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}
