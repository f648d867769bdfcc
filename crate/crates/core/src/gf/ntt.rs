//! Radix-2 number-theoretic transform over GF(65537).
//!
//! 65537 = 2^16 + 1, so the multiplicative group has order 2^16 and every
//! power-of-two size up to 65536 has a primitive root of unity. 3 generates
//! the group.

use super::{Field, FieldKind, FERMAT_PRIME};
use crate::counter::OpCounter;
use crate::error::{Error, Result};

const GROUP_ORDER: usize = (FERMAT_PRIME - 1) as usize;

fn check_size(size: usize) -> Result<()> {
    if size == 0 || !size.is_power_of_two() || size > GROUP_ORDER {
        return Err(Error::NotPowerOfTwo(size));
    }
    Ok(())
}

/// A primitive `size`-th root of unity in GF(65537).
pub fn root_of_unity(size: usize) -> Result<u32> {
    check_size(size)?;
    Ok(Field::fermat().pow(3, (GROUP_ORDER / size) as u64))
}

/// Precomputed twiddles for one transform size.
#[derive(Clone, Debug)]
pub struct NttPlan {
    size: usize,
    omega: u32,
    /// omega^i for i in 0..size/2
    twiddles: Vec<u32>,
    /// omega^-i for i in 0..size/2
    inv_twiddles: Vec<u32>,
    size_inv: u32,
}

impl NttPlan {
    pub fn new(size: usize) -> Result<NttPlan> {
        let f = Field::fermat();
        let omega = root_of_unity(size)?;
        let omega_inv = f.inv(omega)?;
        let half = size / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut inv_twiddles = Vec::with_capacity(half);
        let (mut w, mut wi) = (1u32, 1u32);
        for _ in 0..half {
            twiddles.push(w);
            inv_twiddles.push(wi);
            w = f.mul(w, omega);
            wi = f.mul(wi, omega_inv);
        }
        Ok(NttPlan {
            size,
            omega,
            twiddles,
            inv_twiddles,
            size_inv: f.inv(size as u32 % FERMAT_PRIME)?,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The root of unity whose powers are the evaluation points.
    pub fn omega(&self) -> u32 {
        self.omega
    }

    /// Evaluates the polynomial with coefficients `coeffs` (low degree
    /// first, at most `size` of them) at omega^0, omega^1, …, omega^(size-1).
    pub fn forward(&self, coeffs: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        if coeffs.len() > self.size {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients exceed transform size {}",
                coeffs.len(),
                self.size
            )));
        }
        let mut a = vec![0u32; self.size];
        a[..coeffs.len()].copy_from_slice(coeffs);
        transform(&mut a, &self.twiddles, ops);
        Ok(a)
    }

    /// Recovers the `size` coefficients from evaluations at the powers of
    /// omega.
    pub fn inverse(&self, values: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        if values.len() != self.size {
            return Err(Error::DimensionMismatch(format!(
                "{} values for transform size {}",
                values.len(),
                self.size
            )));
        }
        let f = Field::fermat();
        let mut a = values.to_vec();
        transform(&mut a, &self.inv_twiddles, ops);
        for x in a.iter_mut() {
            *x = f.mul(*x, self.size_inv);
        }
        ops.muls(self.size as u64);
        Ok(a)
    }
}

/// In-place iterative Cooley–Tukey, natural order in and out.
fn transform(a: &mut [u32], twiddles: &[u32], ops: &OpCounter) {
    let f = Field::fermat();
    let n = a.len();
    if n == 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    let mut butterflies = 0u64;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..half {
                let w = twiddles[j * step];
                let u = a[start + j];
                let v = f.mul(a[start + j + half], w);
                a[start + j] = f.add(u, v);
                a[start + j + half] = f.sub(u, v);
            }
        }
        butterflies += (n / 2) as u64;
        len <<= 1;
    }
    ops.muls(butterflies);
    ops.adds(2 * butterflies);
}

/// Evaluates `coeffs` at the `size`-th roots of unity, in root-power order.
pub fn ntt_evaluate(field: &Field, coeffs: &[u32], size: usize, ops: &OpCounter) -> Result<Vec<u32>> {
    if field.kind() != FieldKind::Fermat {
        return Err(Error::WrongField);
    }
    NttPlan::new(size)?.forward(coeffs, ops)
}

/// Inverse of [`ntt_evaluate`]: coefficients from evaluations at the
/// `values.len()`-th roots of unity.
pub fn ntt_interpolate(field: &Field, values: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
    if field.kind() != FieldKind::Fermat {
        return Err(Error::WrongField);
    }
    NttPlan::new(values.len())?.inverse(values, ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn horner(f: &Field, c: &[u32], x: u32) -> u32 {
        c.iter().rev().fold(0, |acc, &ci| f.add(f.mul(acc, x), ci))
    }

    #[test]
    fn small_examples() {
        let f = Field::fermat();
        let ops = OpCounter::new();
        assert_eq!(ntt_evaluate(&f, &[9], 4, &ops).unwrap(), vec![9, 9, 9, 9]);
        assert_eq!(ntt_evaluate(&f, &[0, 1], 2, &ops).unwrap(), vec![1, 65536]);
        assert_eq!(ntt_evaluate(&f, &[5], 1, &ops).unwrap(), vec![5]);
    }

    #[test]
    fn errors() {
        let ops = OpCounter::new();
        let f7 = Field::prime(7).unwrap();
        assert_eq!(ntt_evaluate(&f7, &[1], 4, &ops), Err(Error::WrongField));
        let f = Field::fermat();
        assert_eq!(ntt_evaluate(&f, &[1], 6, &ops), Err(Error::NotPowerOfTwo(6)));
        assert_eq!(ntt_evaluate(&f, &[1], 1 << 17, &ops), Err(Error::NotPowerOfTwo(1 << 17)));
        assert!(ntt_evaluate(&f, &[1, 2, 3], 2, &ops).is_err());
    }

    #[test]
    fn roots_have_exact_order() {
        let f = Field::fermat();
        for s in 1..=16 {
            let size = 1usize << s;
            let w = root_of_unity(size).unwrap();
            assert_eq!(f.pow(w, size as u64), 1);
            assert_ne!(f.pow(w, size as u64 / 2), 1);
        }
    }

    #[test]
    fn matches_horner_and_inverts() {
        let f = Field::fermat();
        let ops = OpCounter::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in 1..=10 {
            let size = 1usize << s;
            let plan = NttPlan::new(size).unwrap();
            let w = plan.omega();
            for _ in 0..100 {
                let len = rng.gen_range(1..=size);
                let c: Vec<u32> = (0..len).map(|_| rng.gen_range(0..f.order())).collect();
                let evals = plan.forward(&c, &ops).unwrap();
                for (i, &e) in evals.iter().enumerate() {
                    assert_eq!(e, horner(&f, &c, f.pow(w, i as u64)));
                }
                let back = plan.inverse(&evals, &ops).unwrap();
                assert_eq!(&back[..len], &c[..]);
                assert!(back[len..].iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn butterfly_count() {
        let ops = OpCounter::new();
        let plan = NttPlan::new(16).unwrap();
        plan.forward(&[1, 2, 3], &ops).unwrap();
        assert_eq!(ops.count().muls, 8 * 4);
        assert_eq!(ops.count().adds, 16 * 4);
    }
}
