//! Elements of the cyclic group of order three.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// A residue modulo 3, stored as `0`, `1` or `2`.
///
/// Displayed in the balanced form `-1`, `0`, `1` used for prescriptions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z3(u8);

impl Z3 {
    pub const ZERO: Z3 = Z3(0);
    pub const ONE: Z3 = Z3(1);
    pub const MINUS_ONE: Z3 = Z3(2);

    pub const ALL: [Z3; 3] = [Z3::MINUS_ONE, Z3::ZERO, Z3::ONE];

    pub fn new(value: i64) -> Z3 {
        Z3(value.rem_euclid(3) as u8)
    }

    /// Representative in `{0, 1, 2}`.
    pub fn value(self) -> u8 {
        self.0
    }

    /// Representative in `{-1, 0, 1}`.
    pub fn balanced(self) -> i8 {
        match self.0 {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<i64> for Z3 {
    fn from(value: i64) -> Self {
        Z3::new(value)
    }
}

impl Add for Z3 {
    type Output = Z3;
    fn add(self, rhs: Z3) -> Z3 {
        Z3((self.0 + rhs.0) % 3)
    }
}

impl AddAssign for Z3 {
    fn add_assign(&mut self, rhs: Z3) {
        *self = *self + rhs;
    }
}

impl Sub for Z3 {
    type Output = Z3;
    fn sub(self, rhs: Z3) -> Z3 {
        Z3((self.0 + 3 - rhs.0) % 3)
    }
}

impl SubAssign for Z3 {
    fn sub_assign(&mut self, rhs: Z3) {
        *self = *self - rhs;
    }
}

impl Neg for Z3 {
    type Output = Z3;
    fn neg(self) -> Z3 {
        Z3((3 - self.0) % 3)
    }
}

impl Sum for Z3 {
    fn sum<I: Iterator<Item = Z3>>(iter: I) -> Z3 {
        iter.fold(Z3::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Z3> for Z3 {
    fn sum<I: Iterator<Item = &'a Z3>>(iter: I) -> Z3 {
        iter.copied().sum()
    }
}

impl fmt::Display for Z3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.balanced())
    }
}
