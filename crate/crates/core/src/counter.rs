//! Arithmetic instrumentation.
//!
//! Every routine that performs field arithmetic takes an `&OpCounter` and
//! tallies the multiplications (including divisions and inversions) and
//! additions (including subtractions and negations) it performs. A counter is
//! owned by one trial; it is deliberately `!Sync`.

use std::cell::Cell;
use std::ops::Sub;

#[derive(Debug, Default)]
pub struct OpCounter {
    muls: Cell<u64>,
    adds: Cell<u64>,
}

/// A snapshot of an [`OpCounter`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpCount {
    pub muls: u64,
    pub adds: u64,
}

impl OpCount {
    pub fn is_zero(&self) -> bool {
        self.muls == 0 && self.adds == 0
    }
}

impl Sub for OpCount {
    type Output = OpCount;

    fn sub(self, rhs: OpCount) -> OpCount {
        OpCount {
            muls: self.muls - rhs.muls,
            adds: self.adds - rhs.adds,
        }
    }
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn muls(&self, n: u64) {
        self.muls.set(self.muls.get() + n);
    }

    #[inline]
    pub fn adds(&self, n: u64) {
        self.adds.set(self.adds.get() + n);
    }

    pub fn count(&self) -> OpCount {
        OpCount {
            muls: self.muls.get(),
            adds: self.adds.get(),
        }
    }

    pub fn reset(&self) {
        self.muls.set(0);
        self.adds.set(0);
    }

    /// Runs `f` and returns its result together with the operations it cost.
    pub fn measure<T>(&self, f: impl FnOnce() -> T) -> (T, OpCount) {
        let before = self.count();
        let out = f();
        (out, self.count() - before)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_reports_delta() {
        let ops = OpCounter::new();
        ops.muls(5);
        let (_, delta) = ops.measure(|| {
            ops.muls(3);
            ops.adds(2);
        });
        assert_eq!(delta, OpCount { muls: 3, adds: 2 });
        assert_eq!(ops.count().muls, 8);
    }
}
