//! Generator-polynomial form. The codeword is c(x) = c₀(x) + c₁(x) where
//! c₀ is the systematic (n, k) Reed–Solomon codeword of a(x) under
//! g₀(x) = ∏_{i<n−k} (x − αⁱ) and c₁ the systematic codeword of b(x)
//! under g₁(x) = ∏_{i<n−d} (x − αⁱ). The symbols are the `n` coefficients
//! of c(x); a(x) occupies degrees n−k … n−1 verbatim.
//!
//! g₁ divides g₀, so c(x) is a codeword of the (n, d) code generated by g₁
//! and any `d` coefficients determine it. Erasures are filled with the
//! Forney formula; a dense linear solve is kept as an independent check.

use super::{check_nkd, take_symbols, PsrsMessage};
use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::matrix::FieldMatrix;
use crate::poly;

#[derive(Clone, Debug)]
pub struct PsrsGenPoly {
    field: Field,
    n: usize,
    k: usize,
    d: usize,
    alpha: u32,
    g0: Vec<u32>,
    g1: Vec<u32>,
}

impl PsrsGenPoly {
    pub fn new(field: Field, n: usize, k: usize, d: usize) -> Result<PsrsGenPoly> {
        check_nkd(n, k, d)?;
        if n + 1 > field.order() as usize {
            return Err(Error::FieldTooSmall {
                order: field.order(),
                what: format!("generator-polynomial form needs n <= q - 1, got n={n}"),
            });
        }
        let alpha = field.primitive_element();
        let scratch = OpCounter::new();
        let roots = |count: usize| -> Vec<u32> { (0..count).map(|i| field.pow(alpha, i as u64)).collect() };
        let g0 = poly::from_roots(&field, &roots(n - k), &scratch);
        let g1 = poly::from_roots(&field, &roots(n - d), &scratch);
        Ok(PsrsGenPoly {
            field,
            n,
            k,
            d,
            alpha,
            g0,
            g1,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn g0(&self) -> &[u32] {
        &self.g0
    }

    pub fn g1(&self) -> &[u32] {
        &self.g1
    }

    /// xˢ·m(x) − (xˢ·m(x) mod g), padded to length `n`.
    fn systematic(&self, msg: &[u32], g: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        let shift = g.len() - 1;
        let mut shifted = vec![0u32; shift];
        shifted.extend_from_slice(msg);
        let (_, rem) = poly::divrem(&self.field, &shifted, g, ops)?;
        for (s, &r) in shifted.iter_mut().zip(&rem) {
            *s = self.field.neg(r);
        }
        ops.adds(rem.len() as u64);
        shifted.resize(self.n, 0);
        Ok(shifted)
    }

    /// c₀(x): the systematic (n, k) codeword of a(x).
    pub fn encode_a(&self, a: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        self.systematic(a, &self.g0, ops)
    }

    /// c₁(x): the systematic (n − k, d − k) codeword of b(x).
    pub fn encode_b(&self, b: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        self.systematic(b, &self.g1, ops)
    }

    /// The `n` coefficients of c(x), low degree first.
    pub fn encode(&self, msg: &PsrsMessage, ops: &OpCounter) -> Result<Vec<u32>> {
        msg.check(&self.field, self.k, self.d)?;
        let c0 = self.encode_a(&msg.a, ops)?;
        let c1 = self.encode_b(&msg.b, ops)?;
        Ok(poly::add(&self.field, &c0, &c1, ops))
    }

    /// Splits a complete codeword into (a, b).
    fn split(&self, c: &[u32], ops: &OpCounter) -> Result<PsrsMessage> {
        let a = c[self.n - self.k..].to_vec();
        let c0 = self.encode_a(&a, ops)?;
        let c1 = poly::sub(&self.field, c, &c0, ops);
        let b = c1[self.n - self.d..self.n - self.k].to_vec();
        Ok(PsrsMessage { a, b })
    }

    fn expand(&self, known: &[(usize, u32)]) -> (Vec<u32>, Vec<usize>) {
        let mut c = vec![0u32; self.n];
        let mut present = vec![false; self.n];
        for &(p, v) in known {
            c[p] = v;
            present[p] = true;
        }
        let erased = (0..self.n).filter(|&p| !present[p]).collect();
        (c, erased)
    }

    /// Fills the erased coefficients of a codeword that vanishes at
    /// α⁰ … α^(r−1), using syndromes, the erasure locator and Forney's
    /// formula. The erased entries of `c` must be zero on entry.
    fn forney(&self, c: &mut [u32], erased: &[usize], r: usize, ops: &OpCounter) -> Result<()> {
        let f = self.field;
        if erased.is_empty() {
            return Ok(());
        }
        debug_assert!(erased.len() <= r);
        let syndromes: Vec<u32> = (0..r)
            .map(|i| poly::eval(&f, c, f.pow(self.alpha, i as u64), ops))
            .collect();
        let locators: Vec<u32> = erased.iter().map(|&p| f.pow(self.alpha, p as u64)).collect();
        // Λ(x) = ∏ (1 − X_j x)
        let mut lambda = vec![1u32];
        for &x in &locators {
            lambda = poly::mul(&f, &lambda, &[1, f.neg(x)], ops);
        }
        let mut omega = poly::mul(&f, &syndromes, &lambda, ops);
        omega.truncate(r);
        let dlambda = poly::derivative(&f, &lambda, ops);
        for (&p, &x) in erased.iter().zip(&locators) {
            let xinv = f.inv(x)?;
            let num = f.mul(x, poly::eval(&f, &omega, xinv, ops));
            let den = poly::eval(&f, &dlambda, xinv, ops);
            c[p] = f.div(num, den)?;
            ops.muls(3);
        }
        Ok(())
    }

    /// Fills erasures by solving Σ_erased c_p α^(ip) = −Σ_known c_p α^(ip)
    /// for i < (number of erasures).
    fn solve_erasures(&self, c: &mut [u32], erased: &[usize], ops: &OpCounter) -> Result<()> {
        let f = self.field;
        let e = erased.len();
        if e == 0 {
            return Ok(());
        }
        let roots: Vec<u32> = (0..e).map(|i| f.pow(self.alpha, i as u64)).collect();
        let a = FieldMatrix::from_fn(f, e, e, |i, j| f.pow(roots[i], erased[j] as u64));
        let rhs: Vec<u32> = roots.iter().map(|&x| f.neg(poly::eval(&f, c, x, ops))).collect();
        let sol = a.inverse(ops)?.mul_vec(&rhs, ops)?;
        for (&p, v) in erased.iter().zip(sol) {
            c[p] = v;
        }
        Ok(())
    }

    /// Recovers (a, b) from any `d` coefficients given as (degree, value)
    /// pairs. Debug builds cross-check against the linear-system decoder.
    pub fn decode_full(&self, known: &[(usize, u32)], ops: &OpCounter) -> Result<PsrsMessage> {
        let used = take_symbols(&self.field, known, self.n, self.d)?;
        let (mut c, erased) = self.expand(used);
        self.forney(&mut c, &erased, self.n - self.d, ops)?;
        let msg = self.split(&c, ops)?;
        if cfg!(debug_assertions) && self.decode_full_linear(used, &OpCounter::new())? != msg {
            return Err(Error::DecodeMismatch);
        }
        Ok(msg)
    }

    /// The linear-system decoder used as an oracle for [`Self::decode_full`].
    pub fn decode_full_linear(&self, known: &[(usize, u32)], ops: &OpCounter) -> Result<PsrsMessage> {
        let used = take_symbols(&self.field, known, self.n, self.d)?;
        let (mut c, erased) = self.expand(used);
        self.solve_erasures(&mut c, &erased, ops)?;
        self.split(&c, ops)
    }

    /// Recovers a(x) from any `k` coefficients when b(x) is known.
    pub fn decode_partial(&self, known: &[(usize, u32)], b: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        let used = take_symbols(&self.field, known, self.n, self.k)?;
        if b.len() != self.d - self.k {
            return Err(Error::WrongMessageLength {
                expected: self.d - self.k,
                got: b.len(),
            });
        }
        let f = self.field;
        let c1 = self.encode_b(b, ops)?;
        let residual: Vec<(usize, u32)> = used.iter().map(|&(p, v)| (p, f.sub(v, c1[p]))).collect();
        ops.adds(residual.len() as u64);
        let (mut c0, erased) = self.expand(&residual);
        self.forney(&mut c0, &erased, self.n - self.k, ops)?;
        Ok(c0[self.n - self.k..].to_vec())
    }
}
