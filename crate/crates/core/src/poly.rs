//! Dense univariate polynomials over a [`Field`], coefficients low degree
//! first. Trailing zeros are allowed everywhere; `degree` ignores them.

use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::gf::Field;

pub fn degree(p: &[u32]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

pub fn trim(mut p: Vec<u32>) -> Vec<u32> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Horner evaluation.
pub fn eval(f: &Field, p: &[u32], x: u32, ops: &OpCounter) -> u32 {
    if p.is_empty() {
        return 0;
    }
    let mut acc = p[p.len() - 1];
    for &c in p[..p.len() - 1].iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    let steps = (p.len() - 1) as u64;
    ops.muls(steps);
    ops.adds(steps);
    acc
}

pub fn add(f: &Field, a: &[u32], b: &[u32], ops: &OpCounter) -> Vec<u32> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    ops.adds(short.len() as u64);
    out
}

pub fn sub(f: &Field, a: &[u32], b: &[u32], ops: &OpCounter) -> Vec<u32> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &s) in out.iter_mut().zip(b) {
        *o = f.sub(*o, s);
    }
    ops.adds(b.len() as u64);
    out
}

/// Schoolbook product.
pub fn mul(f: &Field, a: &[u32], b: &[u32], ops: &OpCounter) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    let n = (a.len() * b.len()) as u64;
    ops.muls(n);
    ops.adds(n);
    out
}

/// Schoolbook long division; returns (quotient, remainder) with
/// `deg(remainder) < deg(divisor)`.
pub fn divrem(f: &Field, num: &[u32], den: &[u32], ops: &OpCounter) -> Result<(Vec<u32>, Vec<u32>)> {
    let dd = degree(den).ok_or(Error::DivisionByZero)?;
    let lead_inv = f.inv(den[dd])?;
    ops.muls(1);
    let mut rem = num.to_vec();
    let nd = match degree(&rem) {
        Some(nd) if nd >= dd => nd,
        _ => return Ok((Vec::new(), trim(rem))),
    };
    let mut quot = vec![0u32; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = f.mul(rem[i + dd], lead_inv);
        quot[i] = c;
        if c != 0 {
            for j in 0..=dd {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, den[j]));
            }
        }
        ops.muls(1 + dd as u64 + 1);
        ops.adds(dd as u64 + 1);
    }
    rem.truncate(dd);
    Ok((quot, rem))
}

/// ∏ (x − r) over `roots`.
pub fn from_roots(f: &Field, roots: &[u32], ops: &OpCounter) -> Vec<u32> {
    let mut p = vec![1u32];
    for &r in roots {
        let nr = f.neg(r);
        let mut next = vec![0u32; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.add(next[i], f.mul(c, nr));
        }
        ops.muls(p.len() as u64);
        ops.adds(2 * p.len() as u64 + 1);
        p = next;
    }
    p
}

/// Formal derivative.
pub fn derivative(f: &Field, p: &[u32], ops: &OpCounter) -> Vec<u32> {
    if p.len() <= 1 {
        return Vec::new();
    }
    ops.muls(p.len() as u64 - 1);
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.from_int(i as u64)))
        .collect()
}

/// Divides by the monic linear factor (x − r), assuming it divides exactly.
fn div_linear(f: &Field, p: &[u32], r: u32, ops: &OpCounter) -> Vec<u32> {
    let n = p.len() - 1;
    let mut q = vec![0u32; n];
    let mut carry = 0u32;
    for i in (0..n).rev() {
        carry = f.add(p[i + 1], f.mul(carry, r));
        q[i] = carry;
    }
    ops.muls(n as u64);
    ops.adds(n as u64);
    q
}

/// Lagrange interpolation: the unique polynomial of degree < `xs.len()`
/// through the points, as a coefficient vector of length `xs.len()`.
pub fn interpolate(f: &Field, xs: &[u32], ys: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} abscissae for {} values",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    let mut out = vec![0u32; n];
    if n == 0 {
        return Ok(out);
    }
    let full = from_roots(f, xs, ops);
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let basis = div_linear(f, &full, xi, ops);
        let mut denom = 1u32;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                denom = f.mul(denom, f.sub(xi, xj));
            }
        }
        ops.muls(n as u64 - 1);
        ops.adds(n as u64 - 1);
        if denom == 0 {
            return Err(Error::DuplicatePoints);
        }
        let scale = f.div(yi, denom)?;
        ops.muls(2);
        for (o, &b) in out.iter_mut().zip(&basis) {
            *o = f.add(*o, f.mul(scale, b));
        }
        ops.muls(n as u64);
        ops.adds(n as u64);
    }
    Ok(out)
}
