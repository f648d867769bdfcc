//! Evaluation form: C(x) = Φ(x) + Γ(x)B(x), where Φ interpolates the
//! systematic symbols at the first `k` points, Γ vanishes there and
//! B(x) = Σ bᵢ xⁱ.

use super::{check_nkd, take_symbols, PsrsMessage};
use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::gf::ntt::{root_of_unity, NttPlan};
use crate::gf::Field;
use crate::matrix::FieldMatrix;
use crate::poly;

#[derive(Clone, Debug)]
struct NttFast {
    /// Evaluation transform, size ≥ n.
    eval: NttPlan,
    /// Convolution transform for Γ·B, size ≥ d.
    conv: NttPlan,
    /// Γ transformed once at construction.
    gamma_hat: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct PsrsCode {
    field: Field,
    n: usize,
    k: usize,
    d: usize,
    points: Vec<u32>,
    /// Γ(x) = ∏_{i<k} (x − xᵢ).
    gamma: Vec<u32>,
    /// Row i holds the coefficients of the i-th Lagrange basis polynomial.
    lagrange: FieldMatrix,
    ntt: Option<NttFast>,
}

impl PsrsCode {
    /// Uses the field's canonical points 1, 2, … (or 1, ω, ω², …).
    pub fn new(field: Field, n: usize, k: usize, d: usize) -> Result<PsrsCode> {
        check_nkd(n, k, d)?;
        let points = field.enumerate(n)?;
        Self::build(field, k, d, points, None)
    }

    pub fn with_points(field: Field, k: usize, d: usize, points: Vec<u32>) -> Result<PsrsCode> {
        check_nkd(points.len(), k, d)?;
        Self::build(field, k, d, points, None)
    }

    /// Over GF(65537) with points ω⁰, ω¹, … for ω of order
    /// next_power_of_two(n); encoding then runs through the NTT.
    pub fn roots_of_unity(n: usize, k: usize, d: usize) -> Result<PsrsCode> {
        check_nkd(n, k, d)?;
        let field = Field::fermat();
        let size = n.next_power_of_two();
        let w = root_of_unity(size)?;
        let points: Vec<u32> = (0..n).map(|i| field.pow(w, i as u64)).collect();
        let eval = NttPlan::new(size)?;
        let conv = NttPlan::new(d.max(k + 1).next_power_of_two())?;
        Self::build(field, k, d, points, Some((eval, conv)))
    }

    fn build(
        field: Field,
        k: usize,
        d: usize,
        points: Vec<u32>,
        plans: Option<(NttPlan, NttPlan)>,
    ) -> Result<PsrsCode> {
        let n = points.len();
        if n > field.order() as usize {
            return Err(Error::FieldTooSmall {
                order: field.order(),
                what: format!("evaluation form needs n <= q, got n={n}"),
            });
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        for &p in &points {
            field.check(p as u64)?;
        }
        let scratch = OpCounter::new();
        let sys = &points[..k];
        let gamma = poly::from_roots(&field, sys, &scratch);
        let mut lagrange = FieldMatrix::zeros(field, k, k);
        for i in 0..k {
            let mut unit = vec![0u32; k];
            unit[i] = 1;
            let basis = poly::interpolate(&field, sys, &unit, &scratch)?;
            for (j, &c) in basis.iter().enumerate() {
                lagrange.set(i, j, c);
            }
        }
        let ntt = match plans {
            Some((eval, conv)) => {
                let gamma_hat = conv.forward(&gamma, &scratch)?;
                Some(NttFast { eval, conv, gamma_hat })
            }
            None => None,
        };
        Ok(PsrsCode {
            field,
            n,
            k,
            d,
            points,
            gamma,
            lagrange,
            ntt,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn gamma(&self) -> &[u32] {
        &self.gamma
    }

    pub fn has_fast_path(&self) -> bool {
        self.ntt.is_some()
    }

    /// The `n × d` matrix [Φ Δ] with Φ[l,i] = ∏_{j≠i} (x_l − x_j)/(x_i − x_j)
    /// and Δ[l,i] = x_lⁱ Γ(x_l).
    pub fn generator_matrix(&self) -> FieldMatrix {
        let f = self.field;
        let x = &self.points;
        let scratch = OpCounter::new();
        FieldMatrix::from_fn(f, self.n, self.d, |l, i| {
            if i < self.k {
                let mut num = 1u32;
                let mut den = 1u32;
                for j in (0..self.k).filter(|&j| j != i) {
                    num = f.mul(num, f.sub(x[l], x[j]));
                    den = f.mul(den, f.sub(x[i], x[j]));
                }
                f.div(num, den).expect("evaluation points are distinct")
            } else {
                let g = poly::eval(&f, &self.gamma, x[l], &scratch);
                f.mul(f.pow(x[l], (i - self.k) as u64), g)
            }
        })
    }

    /// Coefficients of C(x), `d` of them.
    pub fn coefficients(&self, msg: &PsrsMessage, ops: &OpCounter) -> Result<Vec<u32>> {
        msg.check(&self.field, self.k, self.d)?;
        let mut c = self.phi_coefficients(&msg.a, ops);
        c.resize(self.d, 0);
        if self.d > self.k {
            let delta = poly::mul(&self.field, &self.gamma, &msg.b, ops);
            self.accumulate(&mut c, &delta, ops);
        }
        Ok(c)
    }

    fn phi_coefficients(&self, a: &[u32], ops: &OpCounter) -> Vec<u32> {
        let f = self.field;
        let mut phi = vec![0u32; self.k];
        for (i, &ai) in a.iter().enumerate() {
            for (p, &l) in phi.iter_mut().zip(self.lagrange.row(i)) {
                *p = f.add(*p, f.mul(ai, l));
            }
        }
        ops.muls((self.k * self.k) as u64);
        ops.adds((self.k * self.k) as u64);
        phi
    }

    fn accumulate(&self, c: &mut [u32], delta: &[u32], ops: &OpCounter) {
        for (ci, &x) in c.iter_mut().zip(delta) {
            *ci = self.field.add(*ci, x);
        }
        ops.adds(c.len().min(delta.len()) as u64);
    }

    /// Encodes through the NTT when available, otherwise naively.
    pub fn encode(&self, msg: &PsrsMessage, ops: &OpCounter) -> Result<Vec<u32>> {
        if self.ntt.is_some() {
            self.encode_ntt(msg, ops)
        } else {
            self.encode_naive(msg, ops)
        }
    }

    /// Schoolbook product for Γ·B and Horner evaluation at every point.
    pub fn encode_naive(&self, msg: &PsrsMessage, ops: &OpCounter) -> Result<Vec<u32>> {
        let c = self.coefficients(msg, ops)?;
        Ok(self
            .points
            .iter()
            .map(|&x| poly::eval(&self.field, &c, x, ops))
            .collect())
    }

    /// Γ·B by NTT convolution and evaluation by a forward NTT. Requires a
    /// code built with [`PsrsCode::roots_of_unity`].
    pub fn encode_ntt(&self, msg: &PsrsMessage, ops: &OpCounter) -> Result<Vec<u32>> {
        let fast = self.ntt.as_ref().ok_or(Error::WrongField)?;
        msg.check(&self.field, self.k, self.d)?;
        let f = self.field;
        let mut c = self.phi_coefficients(&msg.a, ops);
        c.resize(self.d, 0);
        if self.d > self.k {
            let b_hat = fast.conv.forward(&msg.b, ops)?;
            let prod: Vec<u32> = b_hat
                .iter()
                .zip(&fast.gamma_hat)
                .map(|(&x, &g)| f.mul(x, g))
                .collect();
            ops.muls(prod.len() as u64);
            let delta = fast.conv.inverse(&prod, ops)?;
            self.accumulate(&mut c, &delta[..self.d], ops);
        }
        let mut values = fast.eval.forward(&c, ops)?;
        values.truncate(self.n);
        Ok(values)
    }

    /// Recovers the message from any `d` codeword symbols given as
    /// (position, value) pairs.
    pub fn decode_full(&self, symbols: &[(usize, u32)], ops: &OpCounter) -> Result<PsrsMessage> {
        let used = take_symbols(&self.field, symbols, self.n, self.d)?;
        let f = self.field;
        let xs: Vec<u32> = used.iter().map(|&(p, _)| self.points[p]).collect();
        let ys: Vec<u32> = used.iter().map(|&(_, v)| v).collect();
        let c = poly::interpolate(&f, &xs, &ys, ops)?;
        let (mut quot, rem) = poly::divrem(&f, &c, &self.gamma, ops)?;
        quot.resize(self.d - self.k, 0);
        let a = self.points[..self.k]
            .iter()
            .map(|&x| poly::eval(&f, &rem, x, ops))
            .collect();
        Ok(PsrsMessage { a, b: quot })
    }

    /// Recovers the systematic symbols from any `k` codeword symbols when
    /// the non-systematic part is known.
    pub fn decode_partial(&self, symbols: &[(usize, u32)], b: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        let used = take_symbols(&self.field, symbols, self.n, self.k)?;
        if b.len() != self.d - self.k {
            return Err(Error::WrongMessageLength {
                expected: self.d - self.k,
                got: b.len(),
            });
        }
        let f = self.field;
        let delta = poly::mul(&f, &self.gamma, b, ops);
        let xs: Vec<u32> = used.iter().map(|&(p, _)| self.points[p]).collect();
        let ys: Vec<u32> = used
            .iter()
            .zip(&xs)
            .map(|(&(_, y), &x)| {
                let dv = poly::eval(&f, &delta, x, ops);
                ops.adds(1);
                f.sub(y, dv)
            })
            .collect();
        let phi = poly::interpolate(&f, &xs, &ys, ops)?;
        Ok(self.points[..self.k]
            .iter()
            .map(|&x| poly::eval(&f, &phi, x, ops))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::for_each_subset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_msg(rng: &mut ChaCha8Rng, f: &Field, k: usize, d: usize) -> PsrsMessage {
        let q = f.order();
        PsrsMessage {
            a: (0..k).map(|_| rng.gen_range(0..q)).collect(),
            b: (0..d - k).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    #[test]
    fn generator_matrix_of_the_gf7_example() {
        let f = Field::prime(7).unwrap();
        let code = PsrsCode::new(f, 6, 3, 4).unwrap();
        let expected = FieldMatrix::from_rows(
            f,
            &[
                [1, 0, 0, 0],
                [0, 1, 0, 0],
                [0, 0, 1, 0],
                [1, 4, 3, 6],
                [3, 6, 6, 3],
                [6, 6, 3, 4],
            ],
        )
        .unwrap();
        assert_eq!(code.generator_matrix(), expected);
    }

    #[test]
    fn systematic_and_matches_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ops = OpCounter::new();
        for (f, n, k, d) in [
            (Field::prime(11).unwrap(), 8, 3, 5),
            (Field::binary(4).unwrap(), 16, 5, 9),
            (Field::prime(7).unwrap(), 7, 2, 6),
        ] {
            let code = PsrsCode::new(f, n, k, d).unwrap();
            let g = code.generator_matrix();
            for _ in 0..30 {
                let msg = random_msg(&mut rng, &f, k, d);
                let cw = code.encode(&msg, &ops).unwrap();
                assert_eq!(&cw[..k], &msg.a[..]);
                let col: Vec<u32> = msg.a.iter().chain(&msg.b).copied().collect();
                assert_eq!(g.mul_vec(&col, &ops).unwrap(), cw);
            }
            let zero = code.encode(&PsrsMessage::zero(k, d), &ops).unwrap();
            assert!(zero.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn every_subset_decodes() {
        let f = Field::prime(7).unwrap();
        let code = PsrsCode::new(f, 6, 3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ops = OpCounter::new();
        for _ in 0..20 {
            let msg = random_msg(&mut rng, &f, 3, 4);
            let cw = code.encode(&msg, &ops).unwrap();
            for_each_subset(6, 4, |s| {
                let sym: Vec<_> = s.iter().map(|&p| (p, cw[p])).collect();
                assert_eq!(code.decode_full(&sym, &ops).unwrap(), msg);
                true
            });
            for_each_subset(6, 3, |s| {
                let sym: Vec<_> = s.iter().map(|&p| (p, cw[p])).collect();
                assert_eq!(code.decode_partial(&sym, &msg.b, &ops).unwrap(), msg.a);
                true
            });
        }
    }

    #[test]
    fn decode_errors() {
        let f = Field::prime(7).unwrap();
        let code = PsrsCode::new(f, 6, 3, 4).unwrap();
        let ops = OpCounter::new();
        assert_eq!(
            code.decode_full(&[(0, 1), (1, 1), (2, 1)], &ops),
            Err(Error::InsufficientSymbols { needed: 4, got: 3 })
        );
        assert_eq!(
            code.decode_full(&[(0, 1), (1, 1), (1, 1), (2, 0)], &ops),
            Err(Error::DuplicatePosition(1))
        );
        assert!(matches!(PsrsCode::new(f, 8, 3, 4), Err(Error::FieldTooSmall { .. })));
        assert!(matches!(PsrsCode::new(f, 6, 4, 3), Err(Error::ParamsInvalid(_))));
    }

    #[test]
    fn ntt_path_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Field::fermat();
        let ops = OpCounter::new();
        for (n, k, d) in [(8, 3, 4), (32, 12, 16), (20, 5, 5), (64, 24, 32)] {
            let code = PsrsCode::roots_of_unity(n, k, d).unwrap();
            for _ in 0..50 {
                let msg = random_msg(&mut rng, &f, k, d);
                assert_eq!(code.encode_ntt(&msg, &ops).unwrap(), code.encode_naive(&msg, &ops).unwrap());
            }
        }
        let plain = PsrsCode::new(f, 8, 3, 4).unwrap();
        assert_eq!(
            plain.encode_ntt(&PsrsMessage::zero(3, 4), &ops),
            Err(Error::WrongField)
        );
    }
}
