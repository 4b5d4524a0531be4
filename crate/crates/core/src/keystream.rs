//! Filter generator keystreams and their measured linear complexity.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::gf2m::{order_of, FieldElement, Gf2m, PhaseSet, PolyMod};
use crate::{Error, Result};

/// Largest `L` for which full-period measurement is attempted.
pub const MAX_MEASURED_LEN: u32 = 17;

/// A maximal-length LFSR. Bit `i` of `seed` is the initial output `s_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LfsrSpec {
    modulus: PolyMod,
    seed: u64,
}

impl LfsrSpec {
    pub fn new(modulus: PolyMod, seed: u64) -> Result<Self> {
        let l = modulus.degree();
        if seed == 0 {
            return Err(Error::ZeroSeed);
        }
        if l < 64 && seed >> l != 0 {
            return Err(Error::InvalidWord { len: l, word: seed });
        }
        if !modulus.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        Ok(LfsrSpec { modulus, seed })
    }

    /// Seed `s_0 ... s_{L-1} = 0 ... 0 1`.
    pub fn with_default_seed(modulus: PolyMod) -> Result<Self> {
        Self::new(modulus, 1u64 << (modulus.degree() - 1))
    }

    pub fn modulus(&self) -> PolyMod {
        self.modulus
    }

    pub fn len(&self) -> u32 {
        self.modulus.degree()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> u64 {
        order_of(self.len())
    }
}

/// First `n` outputs of `s_{i+L} = sum_{j<L} c_j s_{i+j}`, where `c_j` are
/// the modulus coefficients.
pub fn lfsr_bits(spec: &LfsrSpec, n: usize) -> Vec<bool> {
    let l = spec.len();
    let feedback = (spec.modulus.coeffs() & ((1u128 << l) - 1)) as u64;
    let mut state = spec.seed;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(state & 1 == 1);
        let next = u64::from((state & feedback).count_ones() & 1);
        state = (state >> 1) | (next << (l - 1));
    }
    out
}

/// A Boolean filter: the XOR of product terms over LFSR stages, with a
/// unique term of maximum order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterSpec {
    pub max_term: PhaseSet,
    pub lower_terms: Vec<PhaseSet>,
}

impl FilterSpec {
    pub fn new(max_term: PhaseSet, lower_terms: Vec<PhaseSet>) -> Result<Self> {
        if lower_terms.iter().any(|t| t.len() >= max_term.len()) {
            return Err(Error::InvalidFilter);
        }
        Ok(FilterSpec { max_term, lower_terms })
    }

    /// Just the product term.
    pub fn product(max_term: PhaseSet) -> Self {
        FilterSpec { max_term, lower_terms: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.max_term.len()
    }

    fn terms(&self) -> impl Iterator<Item = &PhaseSet> {
        core::iter::once(&self.max_term).chain(self.lower_terms.iter())
    }

    pub fn max_tap(&self) -> u64 {
        self.terms().flat_map(|t| t.taps().iter().copied()).max().unwrap_or(0)
    }
}

/// Output `i` is `XOR_terms AND_{t in term} base[i + t]`.
pub fn apply_filter(base: &[bool], filter: &FilterSpec, n: usize) -> Result<Vec<bool>> {
    let need = n as u64 + filter.max_tap();
    if n > 0 && (base.len() as u64) < need {
        return Err(Error::EmptyInput);
    }
    Ok((0..n)
        .map(|i| {
            filter
                .terms()
                .fold(false, |acc, term| acc ^ term.taps().iter().all(|&t| base[i + t as usize]))
        })
        .collect())
}

/// `n` keystream bits of the filter applied to the LFSR stages.
pub fn filter_bits(lfsr: &LfsrSpec, filter: &FilterSpec, n: usize) -> Result<Vec<bool>> {
    if filter.max_tap() >= u64::from(lfsr.len()) {
        return Err(Error::InvalidPhases);
    }
    let base = lfsr_bits(lfsr, n + filter.max_tap() as usize);
    apply_filter(&base, filter, n)
}

/// Shortest linear recursion found by Berlekamp-Massey.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmResult {
    pub complexity: usize,
    /// Connection polynomial `C(x) = 1 + c_1 x + ... + c_L x^L`, packed:
    /// bit `i % 64` of word `i / 64` is `c_i`.
    pub connection: Vec<u64>,
}

impl BmResult {
    pub fn coeff(&self, i: usize) -> bool {
        self.connection.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// Whether `s_n = sum_{i=1..L} c_i s_{n-i}` holds for every `n >= L`.
    pub fn annihilates(&self, bits: &[bool]) -> bool {
        let l = self.complexity;
        (l..bits.len()).all(|n| {
            let sum = (1..=l).filter(|&i| self.coeff(i) && bits[n - i]).count() % 2 == 1;
            sum == bits[n]
        })
    }
}

/// Bit vector with unaligned word reads.
struct Packed {
    words: Vec<u64>,
}

impl Packed {
    fn zeros(bits: usize) -> Self {
        Packed { words: vec![0; bits / 64 + 2] }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// 64 bits starting at bit `off`, zero past the end.
    fn window(&self, off: usize) -> u64 {
        let (w, s) = (off / 64, off % 64);
        let lo = self.words.get(w).copied().unwrap_or(0);
        if s == 0 {
            lo
        } else {
            let hi = self.words.get(w + 1).copied().unwrap_or(0);
            (lo >> s) | (hi << (64 - s))
        }
    }
}

pub fn berlekamp_massey(bits: &[bool]) -> BmResult {
    let n_bits = bits.len();
    // Sequence reversed so that s_n, s_{n-1}, ... is a forward window.
    let mut rev = Packed::zeros(n_bits);
    for (i, &b) in bits.iter().enumerate() {
        if b {
            rev.set(n_bits - 1 - i);
        }
    }
    let words = n_bits / 64 + 2;
    let mut c = vec![0u64; words];
    let mut b = vec![0u64; words];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut b_len = 0usize;
    let mut m: isize = -1;
    for n in 0..n_bits {
        let off = n_bits - 1 - n;
        let used = l / 64 + 1;
        let mut acc = 0u64;
        for (q, cw) in c[..used].iter().enumerate() {
            acc ^= cw & rev.window(off + 64 * q);
        }
        // Window bits past degree l read s_{n-i} with i > l; C is zero there.
        if acc.count_ones() & 1 == 0 {
            continue;
        }
        let shift = (n as isize - m) as usize;
        let t = if 2 * l <= n { Some(c[..used].to_vec()) } else { None };
        let (ws, bs) = (shift / 64, shift % 64);
        for i in (0..=b_len / 64).rev() {
            let w = b[i];
            if w == 0 {
                continue;
            }
            if ws + i < words {
                c[ws + i] ^= w << bs;
            }
            if bs != 0 && ws + i + 1 < words {
                c[ws + i + 1] ^= w >> (64 - bs);
            }
        }
        if let Some(t) = t {
            let new_l = n + 1 - l;
            b.iter_mut().for_each(|w| *w = 0);
            b[..t.len()].copy_from_slice(&t);
            b_len = l;
            l = new_l;
            m = n as isize;
        }
    }
    c.truncate(l / 64 + 1);
    if l % 64 != 63 {
        let last = c.len() - 1;
        c[last] &= (1u64 << (l % 64 + 1)) - 1;
    }
    BmResult { complexity: l, connection: c }
}

/// Exact global linear complexity over two full periods.
pub fn global_lc(lfsr: &LfsrSpec, filter: &FilterSpec) -> Result<usize> {
    if lfsr.len() > MAX_MEASURED_LEN {
        return Err(Error::UnsupportedSize(lfsr.len()));
    }
    let n = 2 * lfsr.period() as usize;
    Ok(berlekamp_massey(&filter_bits(lfsr, filter, n)?).complexity)
}

/// Evaluates the minimal polynomial `x^L C(1/x)` at `alpha^E`.
///
/// The connection polynomial's roots are the inverses of the minimal
/// polynomial's, so this is the form that vanishes at `alpha^E` exactly
/// when `alpha^E` is a root of the generated sequence.
pub fn minpoly_root_check(result: &BmResult, coset: BitString, field: &Gf2m) -> Result<bool> {
    if coset.len() != field.degree() {
        return Err(Error::LengthMismatch { left: coset.len(), right: field.degree() });
    }
    if coset.weight() == 0 {
        return Err(Error::EmptyInput);
    }
    let beta = field.alpha_pow(u128::from(coset.word()));
    let mut acc = FieldElement::ZERO;
    for i in 0..=result.complexity {
        acc = field.mul(acc, beta);
        if result.coeff(i) {
            acc = field.add(acc, FieldElement::ONE);
        }
    }
    Ok(acc.is_zero())
}
