//! Finite-field arithmetic.
//!
//! Three families are supported: prime fields GF(p) with p ≤ 65537, binary
//! extension fields GF(2^m) for m in 1..=16, and the Fermat field GF(65537)
//! which additionally supports radix-2 number-theoretic transforms (see
//! [`ntt`]).
//!
//! A [`Field`] is a small `Copy` descriptor. Element values are plain `u32`s
//! in `[0, q)`; bulk routines (matrices, polynomials) operate on raw values
//! and carry the field alongside. [`Elem`] pairs a value with its field for
//! the checked scalar API.

pub mod ntt;

use crate::error::{Error, Result};

pub const FERMAT_PRIME: u32 = 65537;

/// Reduction polynomials for GF(2^m), indexed by m, including the x^m term.
/// Each one is primitive, so `x` (the value 2) generates the multiplicative
/// group for m ≥ 2.
const BINARY_POLYS: [u32; 17] = [
    0,
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x89,    // x^7 + x^3 + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Binary,
    Fermat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    kind: FieldKind,
    order: u32,
    /// Binary fields: reduction polynomial. Prime fields: unused.
    poly: u32,
    /// Binary fields: extension degree m. Prime fields: 1.
    degree: u32,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u32;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl Field {
    /// GF(p) for a prime `p ≤ 65537`. The Fermat prime is accepted here as a
    /// plain prime field; use [`Field::fermat`] for transform support.
    pub fn prime(p: u32) -> Result<Field> {
        if p > FERMAT_PRIME || !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(Field {
            kind: FieldKind::Prime,
            order: p,
            poly: 0,
            degree: 1,
        })
    }

    /// GF(2^m) with the fixed reduction polynomial for `m`.
    pub fn binary(m: u32) -> Result<Field> {
        if !(1..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        Ok(Field {
            kind: FieldKind::Binary,
            order: 1 << m,
            poly: BINARY_POLYS[m as usize],
            degree: m,
        })
    }

    pub fn fermat() -> Field {
        Field {
            kind: FieldKind::Fermat,
            order: FERMAT_PRIME,
            poly: 0,
            degree: 1,
        }
    }

    /// Builds a field from its kind and parameter (the prime for prime
    /// fields, the degree for binary fields, ignored for Fermat).
    pub fn new(kind: FieldKind, param: u32) -> Result<Field> {
        match kind {
            FieldKind::Prime => Field::prime(param),
            FieldKind::Binary => Field::binary(param),
            FieldKind::Fermat => Ok(Field::fermat()),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Number of elements q.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The constructor parameter: p, m, or 65537.
    pub fn param(&self) -> u32 {
        match self.kind {
            FieldKind::Binary => self.degree,
            _ => self.order,
        }
    }

    pub fn reduction_poly(&self) -> Option<u32> {
        (self.kind == FieldKind::Binary).then_some(self.poly)
    }

    pub fn characteristic(&self) -> u32 {
        match self.kind {
            FieldKind::Binary => 2,
            _ => self.order,
        }
    }

    pub fn is_char2(&self) -> bool {
        self.characteristic() == 2
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        x < self.order
    }

    pub fn check(&self, x: u64) -> Result<u32> {
        if x < self.order as u64 {
            Ok(x as u32)
        } else {
            Err(Error::ValueOutOfRange {
                value: x,
                order: self.order,
            })
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            FieldKind::Binary => a ^ b,
            _ => {
                let s = a + b;
                if s >= self.order {
                    s - self.order
                } else {
                    s
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.kind {
            FieldKind::Binary => a,
            _ => {
                if a == 0 {
                    0
                } else {
                    self.order - a
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            FieldKind::Binary => {
                let (mut a, mut b, mut r) = (a, b, 0u32);
                let top = 1u32 << self.degree;
                while b != 0 {
                    if b & 1 != 0 {
                        r ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                    if a & top != 0 {
                        a ^= self.poly;
                    }
                }
                r
            }
            _ => ((a as u64 * b as u64) % self.order as u64) as u32,
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse: extended Euclid for prime fields,
    /// exponentiation a^(q-2) for binary fields.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match self.kind {
            FieldKind::Binary => self.pow(a, self.order as u64 - 2),
            _ => {
                let p = self.order as i64;
                let (mut r0, mut r1) = (p, a as i64);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                t0.rem_euclid(p) as u32
            }
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Image of the integer `n` under the ring map Z → GF(q).
    pub fn from_int(&self, n: u64) -> u32 {
        (n % self.characteristic() as u64) as u32
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        match self.kind {
            FieldKind::Fermat => 3,
            FieldKind::Binary => {
                if self.degree == 1 {
                    1
                } else {
                    2
                }
            }
            FieldKind::Prime => {
                let p = self.order;
                if p == 2 {
                    return 1;
                }
                let factors = prime_factors(p - 1);
                (2..p)
                    .find(|&g| factors.iter().all(|&f| self.pow(g, ((p - 1) / f) as u64) != 1))
                    .expect("every prime field has a primitive element")
            }
        }
    }

    /// The first `n` distinct evaluation points in canonical order.
    ///
    /// Prime and Fermat fields: 1, 2, …; binary fields: 1, ω, ω², … for the
    /// primitive element ω. Zero comes last and is only used when `n = q`.
    pub fn enumerate(&self, n: usize) -> Result<Vec<u32>> {
        if n > self.order as usize {
            return Err(Error::FieldTooSmall {
                order: self.order,
                what: format!("{n} distinct points requested"),
            });
        }
        let nonzero = n.min(self.order as usize - 1);
        let mut pts = Vec::with_capacity(n);
        match self.kind {
            FieldKind::Binary => {
                let w = self.primitive_element();
                let mut x = 1;
                for _ in 0..nonzero {
                    pts.push(x);
                    x = self.mul(x, w);
                }
            }
            _ => pts.extend(1..=nonzero as u32),
        }
        if n == self.order as usize {
            pts.push(0);
        }
        Ok(pts)
    }

    /// Bytes needed to store one element little-endian. Fermat elements
    /// always take 4 bytes.
    pub fn symbol_width(&self) -> usize {
        match self.kind {
            FieldKind::Fermat => 4,
            _ => {
                let bits = 32 - (self.order - 1).leading_zeros();
                (bits as usize).div_ceil(8).max(1)
            }
        }
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            FieldKind::Prime => write!(f, "GF({})", self.order),
            FieldKind::Binary => write!(f, "GF(2^{})", self.degree),
            FieldKind::Fermat => write!(f, "GF(65537)"),
        }
    }
}

/// A field element tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    value: u32,
    field: Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Elem {
    pub fn new(field: Field, value: u64) -> Result<Elem> {
        Ok(Elem {
            value: field.check(value)?,
            field,
        })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arith(self, other: Elem, op: ArithOp) -> Result<Elem> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let f = self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(Elem { value, field: f })
    }

    pub fn inv(self) -> Result<Elem> {
        Ok(Elem {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }
}
