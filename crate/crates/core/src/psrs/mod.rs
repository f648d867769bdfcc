//! Partially systematic Reed–Solomon codes: `d` message symbols, of which
//! the first `k` appear verbatim in an `n`-symbol codeword.

mod eval;
mod genpoly;

pub use eval::PsrsCode;
pub use genpoly::PsrsGenPoly;

use crate::error::{Error, Result};
use crate::gf::Field;

/// Message of a PSRS code: `k` systematic symbols and `d − k` others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsrsMessage {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl PsrsMessage {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Self {
        PsrsMessage { a, b }
    }

    pub fn zero(k: usize, d: usize) -> Self {
        PsrsMessage {
            a: vec![0; k],
            b: vec![0; d - k],
        }
    }

    pub(crate) fn check(&self, field: &Field, k: usize, d: usize) -> Result<()> {
        check_len(&self.a, k)?;
        check_len(&self.b, d - k)?;
        for &x in self.a.iter().chain(&self.b) {
            field.check(x as u64)?;
        }
        Ok(())
    }
}

fn check_len(v: &[u32], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::WrongMessageLength {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

fn check_nkd(n: usize, k: usize, d: usize) -> Result<()> {
    if k == 0 || k > d || d >= n {
        return Err(Error::ParamsInvalid(format!(
            "need 1 <= k <= d < n, got n={n} k={k} d={d}"
        )));
    }
    Ok(())
}

/// Validates (position, value) pairs and returns the first `needed` of them.
fn take_symbols<'a>(
    field: &Field,
    symbols: &'a [(usize, u32)],
    n: usize,
    needed: usize,
) -> Result<&'a [(usize, u32)]> {
    let mut seen = vec![false; n];
    for &(p, v) in symbols {
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, limit: n });
        }
        if seen[p] {
            return Err(Error::DuplicatePosition(p));
        }
        seen[p] = true;
        field.check(v as u64)?;
    }
    if symbols.len() < needed {
        return Err(Error::InsufficientSymbols {
            needed,
            got: symbols.len(),
        });
    }
    Ok(&symbols[..needed])
}
