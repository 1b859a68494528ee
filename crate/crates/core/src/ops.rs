//! Arithmetic operation counting.
//!
//! Multiplications and divisions go into `mul`, additions and subtractions
//! into `add`, and calls to `ln`, `exp`, `powf`, `sqrt` or the scaled
//! exponential integral into `trans`. Comparisons are not counted.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounter {
    pub mul: u64,
    pub add: u64,
    pub trans: u64,
}

impl OpCounter {
    pub const fn new() -> Self {
        Self {
            mul: 0,
            add: 0,
            trans: 0,
        }
    }

    #[inline]
    pub fn mul(&mut self, n: u64) {
        self.mul += n;
    }

    #[inline]
    pub fn add(&mut self, n: u64) {
        self.add += n;
    }

    #[inline]
    pub fn trans(&mut self, n: u64) {
        self.trans += n;
    }

    /// Multiplications plus additions.
    pub fn arithmetic(&self) -> u64 {
        self.mul + self.add
    }
}

impl Add for OpCounter {
    type Output = OpCounter;

    fn add(self, rhs: OpCounter) -> OpCounter {
        OpCounter {
            mul: self.mul + rhs.mul,
            add: self.add + rhs.add,
            trans: self.trans + rhs.trans,
        }
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: OpCounter) {
        *self = *self + rhs;
    }
}

impl Sum for OpCounter {
    fn sum<I: Iterator<Item = OpCounter>>(iter: I) -> Self {
        iter.fold(OpCounter::new(), Add::add)
    }
}
