//! Arithmetic in `GF(2^L)` and the root presence test.
//!
//! Elements use the polynomial basis `1, alpha, ..., alpha^(L-1)` where
//! `alpha` is the class of `x` modulo a primitive polynomial of degree `L`.
//! Bit `i` of a word is the coefficient of `alpha^i`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::{Error, Result};

/// A polynomial over GF(2) used as a field modulus; bit `i` is the
/// coefficient of `x^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyMod {
    coeffs: u128,
}

/// Carry-less product of two words.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    let a = u128::from(a);
    let mut acc = 0u128;
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        acc ^= a << i;
        b &= b - 1;
    }
    acc
}

fn degree(p: u128) -> u32 {
    127 - p.leading_zeros()
}

/// `a mod m` over GF(2).
fn poly_rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

impl PolyMod {
    /// Degree between 2 and 64 with a nonzero constant term.
    pub fn new(coeffs: u128) -> Result<Self> {
        if coeffs == 0 || coeffs & 1 == 0 {
            return Err(Error::InvalidModulus);
        }
        let d = degree(coeffs);
        if !(2..=64).contains(&d) {
            return Err(Error::InvalidModulus);
        }
        Ok(PolyMod { coeffs })
    }

    pub fn degree(&self) -> u32 {
        degree(self.coeffs)
    }

    pub fn coeffs(&self) -> u128 {
        self.coeffs
    }

    pub fn to_hex(&self) -> alloc::string::String {
        alloc::format!("{:#x}", self.coeffs)
    }

    pub fn from_hex(hex: &str) -> Result<Self> {
        let digits = hex.trim();
        let digits = digits
            .strip_prefix("0x")
            .or_else(|| digits.strip_prefix("0X"))
            .unwrap_or(digits);
        let coeffs = u128::from_str_radix(digits, 16).map_err(|_| Error::InvalidModulus)?;
        Self::new(coeffs)
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        reduce(clmul(a, b), self.coeffs) as u64
    }

    fn powmod(&self, base: u64, mut e: u64) -> u64 {
        let mut result = 1u64;
        let mut b = base;
        while e != 0 {
            if e & 1 == 1 {
                result = self.mulmod(result, b);
            }
            b = self.mulmod(b, b);
            e >>= 1;
        }
        result
    }

    /// Rabin's test: `x^(2^L) = x` and `gcd(x^(2^(L/q)) - x, p) = 1` for
    /// every prime `q | L`.
    pub fn is_irreducible(&self) -> bool {
        let l = self.degree();
        let x = 2u64;
        let frob = |times: u32| {
            let mut v = x;
            for _ in 0..times {
                v = self.mulmod(v, v);
            }
            v
        };
        if frob(l) != x {
            return false;
        }
        prime_factors_small(u64::from(l)).into_iter().all(|q| {
            let h = frob(l / q as u32) ^ x;
            poly_gcd(self.coeffs, u128::from(h)) == 1
        })
    }

    /// Irreducible, and `x` has multiplicative order `2^L - 1`.
    pub fn is_primitive(&self) -> bool {
        if !self.is_irreducible() {
            return false;
        }
        let l = self.degree();
        let order = order_of(l);
        if self.powmod(2, order) != 1 {
            return false;
        }
        mersenne_factors(l).into_iter().all(|r| self.powmod(2, order / r) != 1)
    }
}

/// Reduces a product of two field words modulo `m` (degree at most 64).
#[inline]
fn reduce(mut a: u128, m: u128) -> u128 {
    let dm = degree(m);
    while a >> dm != 0 {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// `2^L - 1`.
pub fn order_of(l: u32) -> u64 {
    if l >= 64 {
        u64::MAX
    } else {
        (1u64 << l) - 1
    }
}

fn prime_factors_small(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct prime factors of `2^L - 1` for `L <= 32`.
const MERSENNE_FACTORS: [&[u64]; 33] = [
    &[],
    &[],
    &[3],
    &[7],
    &[3, 5],
    &[31],
    &[3, 7],
    &[127],
    &[3, 5, 17],
    &[7, 73],
    &[3, 11, 31],
    &[23, 89],
    &[3, 5, 7, 13],
    &[8191],
    &[3, 43, 127],
    &[7, 31, 151],
    &[3, 5, 17, 257],
    &[131071],
    &[3, 7, 19, 73],
    &[524287],
    &[3, 5, 11, 31, 41],
    &[7, 127, 337],
    &[3, 23, 89, 683],
    &[47, 178481],
    &[3, 5, 7, 13, 17, 241],
    &[31, 601, 1801],
    &[3, 2731, 8191],
    &[7, 73, 262657],
    &[3, 5, 29, 43, 113, 127],
    &[233, 1103, 2089],
    &[3, 7, 11, 31, 151, 331],
    &[2147483647],
    &[3, 5, 17, 257, 65537],
];

/// Distinct prime factors of `2^L - 1`, ascending.
pub fn mersenne_factors(l: u32) -> Vec<u64> {
    if (l as usize) < MERSENNE_FACTORS.len() {
        return MERSENNE_FACTORS[l as usize].to_vec();
    }
    factor_mersenne_slow(l)
}

/// Primes dividing `2^d - 1` for proper divisors `d | L` are stripped
/// first; every remaining prime factor has `2` of order exactly `L`, hence
/// is `1 mod lcm(2, L)`.
pub(crate) fn factor_mersenne_slow(l: u32) -> Vec<u64> {
    if l <= 1 {
        return Vec::new();
    }
    let mut n = order_of(l);
    let mut primes = Vec::new();
    for d in 2..l {
        if l % d != 0 {
            continue;
        }
        for p in mersenne_factors(d) {
            if n % p == 0 {
                primes.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
        }
    }
    let step = if l % 2 == 0 { u64::from(l) } else { 2 * u64::from(l) };
    let mut q = step + 1;
    while u128::from(q) * u128::from(q) <= u128::from(n) {
        if n % q == 0 {
            primes.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += step;
    }
    if n > 1 {
        primes.push(n);
    }
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// One primitive polynomial per degree 3..=32, lowest weight first.
const BUILTIN_PRIMITIVE: [u64; 30] = [
    0xb, 0x13, 0x25, 0x43, 0x83, 0x187, 0x211, 0x409, 0x805, 0x1107, 0x2027, 0x5007, 0x8003,
    0x1100b, 0x20009, 0x40081, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x1000087,
    0x2000009, 0x4000047, 0x8000027, 0x10000009, 0x20000005, 0x40800007, 0x80000009,
    0x100400007,
];

pub fn builtin_primitive(l: u32) -> Option<PolyMod> {
    let idx = l.checked_sub(3)? as usize;
    BUILTIN_PRIMITIVE.get(idx).map(|&c| PolyMod { coeffs: u128::from(c) })
}

/// Every primitive polynomial of degree `l`, ascending. Exhaustive, so only
/// meant for small degrees.
pub fn primitive_polynomials(l: u32) -> Vec<PolyMod> {
    assert!((2..=24).contains(&l), "exhaustive search limited to degree <= 24");
    let top = 1u128 << l;
    (0..top >> 1)
        .map(|low| top | (low << 1) | 1)
        .filter_map(|c| PolyMod::new(c).ok())
        .filter(|p| p.is_primitive())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

/// `GF(2^L)` over a fixed modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf2m {
    modulus: PolyMod,
}

impl Gf2m {
    /// Fails with [`Error::NotPrimitive`] unless the modulus is primitive.
    pub fn new(modulus: PolyMod) -> Result<Self> {
        if !modulus.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        Ok(Gf2m { modulus })
    }

    pub fn modulus(&self) -> PolyMod {
        self.modulus
    }

    pub fn degree(&self) -> u32 {
        self.modulus.degree()
    }

    /// `2^L - 1`, the multiplicative group order.
    pub fn order(&self) -> u64 {
        order_of(self.degree())
    }

    pub fn alpha(&self) -> FieldElement {
        FieldElement(2)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.modulus.mulmod(a.0, b.0))
    }

    /// `a^e`; for nonzero `a` the exponent is reduced modulo `2^L - 1`.
    pub fn pow(&self, a: FieldElement, e: u128) -> FieldElement {
        if a.is_zero() {
            return if e == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let e = (e % u128::from(self.order())) as u64;
        FieldElement(self.modulus.powmod(a.0, e))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement(self.modulus.powmod(a.0, self.order() - 1)))
    }

    /// `alpha^e`.
    pub fn alpha_pow(&self, e: u128) -> FieldElement {
        self.pow(self.alpha(), e)
    }
}

/// The phases `t_0 < ... < t_{k-1}` of the maximum-order product term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseSet {
    taps: Vec<u64>,
}

impl PhaseSet {
    /// Strictly increasing and nonempty.
    pub fn new(taps: Vec<u64>) -> Result<Self> {
        if taps.is_empty() || taps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPhases);
        }
        Ok(PhaseSet { taps })
    }

    pub fn taps(&self) -> &[u64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }
}

pub type Matrix = Vec<Vec<FieldElement>>;

/// Test matrix: entry `(i, j)` is `alpha^(t_j * 2^(e_i))`, where
/// `e_0 < ... < e_{k-1}` are the one positions of `coset`.
pub fn test_matrix(phases: &PhaseSet, coset: BitString, field: &Gf2m) -> Result<Matrix> {
    let l = field.degree();
    if coset.len() != l {
        return Err(Error::LengthMismatch { left: coset.len(), right: l });
    }
    if coset.weight() as usize != phases.len() {
        return Err(Error::WeightMismatch { weight: coset.weight(), phases: phases.len() });
    }
    if phases.taps().last().is_some_and(|&t| t >= field.order()) {
        return Err(Error::InvalidPhases);
    }
    let order = u128::from(field.order());
    Ok(coset
        .positions()
        .map(|e| {
            let pow2 = (1u128 << e) % order;
            phases.taps().iter().map(|&t| field.alpha_pow(u128::from(t) * pow2 % order)).collect()
        })
        .collect())
}

/// Determinant by elimination with pivot search. Row swaps need no sign
/// change in characteristic 2.
pub fn det(matrix: &Matrix, field: &Gf2m) -> FieldElement {
    let n = matrix.len();
    assert!(matrix.iter().all(|row| row.len() == n), "determinant needs a square matrix");
    let mut a: Matrix = matrix.clone();
    let mut acc = FieldElement::ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return FieldElement::ZERO;
        };
        a.swap(col, pivot);
        let p = a[col][col];
        acc = field.mul(acc, p);
        let p_inv = field.inv(p).expect("pivot is nonzero");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = field.mul(a[r][col], p_inv);
            for c in col..n {
                let v = field.mul(factor, a[col][c]);
                a[r][c] = field.add(a[r][c], v);
            }
        }
    }
    acc
}

/// `true` iff the coset is nondegenerate for these phases, i.e. `alpha^E`
/// is a root of the filtered sequence's minimal polynomial.
pub fn root_presence(phases: &PhaseSet, coset: BitString, field: &Gf2m) -> Result<bool> {
    Ok(!det(&test_matrix(phases, coset, field)?, field).is_zero())
}

/// The determinant itself, for reporting.
pub fn root_presence_det(phases: &PhaseSet, coset: BitString, field: &Gf2m) -> Result<FieldElement> {
    Ok(det(&test_matrix(phases, coset, field)?, field))
}

/// Identity matrix helper.
pub fn identity(n: usize) -> Matrix {
    let mut m = vec![vec![FieldElement::ZERO; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = FieldElement::ONE;
    }
    m
}
