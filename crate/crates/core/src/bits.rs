//! `L`-bit strings and cyclotomic cosets modulo `2^L - 1`.
//!
//! A coset representative `E = 2^e_0 + ... + 2^e_{k-1}` is stored as the
//! `L`-bit string with ones at the positions `e_i`; bit `p` of the word is
//! the coefficient of `2^p`. Squaring `alpha^E` doubles `E` modulo
//! `2^L - 1`, which is a left cyclic rotation of the string, so a coset is
//! the rotation orbit of any of its strings.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::num::{euler_phi, gcd};
use crate::{Error, Result, MAX_LEN};

#[inline]
pub(crate) fn len_mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

#[inline]
pub(crate) fn rotl(word: u64, r: u32, len: u32) -> u64 {
    let r = r % len;
    if r == 0 {
        word
    } else {
        ((word << r) | (word >> (len - r))) & len_mask(len)
    }
}

/// Rotation-minimal form and orbit size of a word.
pub(crate) fn canonical_word(word: u64, len: u32) -> (u64, u32) {
    let mut best = word;
    let mut period = len;
    let mut cur = word;
    for r in 1..len {
        cur = rotl(cur, 1, len);
        if cur == word {
            period = r;
            break;
        }
        best = best.min(cur);
    }
    (best, period)
}

/// An `L`-bit string, `1 <= L <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u32,
    word: u64,
}

impl BitString {
    pub fn new(len: u32, word: u64) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength(len));
        }
        if word & !len_mask(len) != 0 {
            return Err(Error::InvalidWord { len, word });
        }
        Ok(BitString { len, word })
    }

    pub fn zero(len: u32) -> Result<Self> {
        Self::new(len, 0)
    }

    /// Builds the string with ones at `positions`; each is reduced mod `len`.
    pub fn from_positions<I: IntoIterator<Item = u32>>(len: u32, positions: I) -> Result<Self> {
        let mut s = Self::zero(len)?;
        for p in positions {
            s.word |= 1u64 << (p % len);
        }
        Ok(s)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u32 {
        self.len
    }

    /// The string read as an integer, bit `p` at position `p`.
    pub fn word(&self) -> u64 {
        self.word
    }

    pub fn get(&self, p: u32) -> bool {
        p < self.len && (self.word >> p) & 1 == 1
    }

    pub fn with_bit(self, p: u32) -> Self {
        BitString { word: self.word | (1u64 << (p % self.len)), ..self }
    }

    pub fn without_bit(self, p: u32) -> Self {
        BitString { word: self.word & !(1u64 << (p % self.len)), ..self }
    }

    pub fn weight(&self) -> u32 {
        self.word.count_ones()
    }

    /// Positions of the ones, ascending.
    pub fn positions(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).filter(move |&p| self.get(p))
    }

    /// Left cyclic rotation by `r`: bit `p` of the result is bit
    /// `(p - r) mod L` of `self`. Equivalent to squaring the coset element
    /// `r` times.
    pub fn rotate_left(&self, r: u64) -> Self {
        let r = (r % u64::from(self.len)) as u32;
        BitString { len: self.len, word: rotl(self.word, r, self.len) }
    }

    fn same_len(&self, other: &Self) -> Result<()> {
        if self.len == other.len {
            Ok(())
        } else {
            Err(Error::LengthMismatch { left: self.len, right: other.len })
        }
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        Ok(BitString { len: self.len, word: self.word & other.word })
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        Ok(BitString { len: self.len, word: self.word | other.word })
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        Ok(BitString { len: self.len, word: self.word ^ other.word })
    }

    /// `true` iff every one of `self` is also a one of `sup`.
    pub fn is_subset_of(&self, sup: &Self) -> Result<bool> {
        Ok(self.and(sup)? == *self)
    }

    pub fn canonicalize(&self) -> CosetClass {
        let (best, period) = canonical_word(self.word, self.len);
        CosetClass { canonical: BitString { len: self.len, word: best }, cardinality: period }
    }

    /// Lower-case hexadecimal form of the word, `0x` prefixed.
    pub fn to_hex(&self) -> String {
        alloc::format!("{:#x}", self.word)
    }

    /// Parses a hexadecimal word (optional `0x` prefix) of the given length.
    pub fn from_hex(len: u32, hex: &str) -> Result<Self> {
        let digits = hex.trim();
        let digits = digits
            .strip_prefix("0x")
            .or_else(|| digits.strip_prefix("0X"))
            .unwrap_or(digits);
        let word = u64::from_str_radix(digits, 16).map_err(|_| Error::InvalidWord { len, word: 0 })?;
        Self::new(len, word)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({}, {:#x})", self.len, self.word)
    }
}

/// Positional bits, position 0 first.
impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.len {
            f.write_str(if self.get(p) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Bitwise OR over a nonempty list of equal-length strings.
pub fn bit_or(strings: &[BitString]) -> Result<BitString> {
    let (first, rest) = strings.split_first().ok_or(Error::EmptyInput)?;
    rest.iter().try_fold(*first, |acc, s| acc.or(s))
}

pub fn contains(sub: &BitString, sup: &BitString) -> Result<bool> {
    sub.is_subset_of(sup)
}

/// A cyclotomic coset identified by its rotation-minimal string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetClass {
    pub canonical: BitString,
    /// Number of distinct rotations; divides `L`.
    pub cardinality: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FdcEntry {
    pub d: u32,
    pub fdc: BitString,
}

/// The fixed-distance cosets of weight `k` for length `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdcTable {
    l: u32,
    k: u32,
    entries: Vec<FdcEntry>,
    phi_half: u64,
}

/// Checks the `2 < k < L - 2` input constraint and the word-size limit.
pub fn check_params(l: u32, k: u32) -> Result<()> {
    if l > MAX_LEN {
        return Err(Error::UnsupportedSize(l));
    }
    if !(k > 2 && u64::from(k) + 2 < u64::from(l)) {
        return Err(Error::InvalidParameters { l, k });
    }
    Ok(())
}

/// The weight-`k` string with ones at `d * i mod L`, `i = 0..k`.
pub fn fixed_distance_string(l: u32, k: u32, d: u32) -> Result<BitString> {
    BitString::from_positions(l, (0..k).map(|i| ((u64::from(d) * u64::from(i)) % u64::from(l)) as u32))
}

impl FdcTable {
    pub fn build(l: u32, k: u32) -> Result<Self> {
        check_params(l, k)?;
        let mut entries: Vec<FdcEntry> = Vec::new();
        let mut seen: Vec<u64> = Vec::new();
        for d in 1..l {
            if gcd(u64::from(d), u64::from(l)) != 1 {
                continue;
            }
            let fdc = fixed_distance_string(l, k, d)?;
            let canon = fdc.canonicalize().canonical.word();
            if seen.contains(&canon) {
                continue;
            }
            seen.push(canon);
            entries.push(FdcEntry { d, fdc });
        }
        Ok(FdcTable { l, k, entries, phi_half: euler_phi(u64::from(l)) / 2 })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn entries(&self) -> &[FdcEntry] {
        &self.entries
    }

    /// `N_L`, the number of distinct classes found.
    pub fn count(&self) -> usize {
        self.entries.len()
    }

    /// `Φ(L) / 2`, the expected count.
    pub fn expected_count(&self) -> u64 {
        self.phi_half
    }

    pub fn phi_matches(&self) -> bool {
        self.entries.len() as u64 == self.phi_half
    }

    /// Whether `canonical` is the canonical word of a fixed-distance class.
    pub fn is_fixed_distance_class(&self, canonical: u64) -> bool {
        self.entries.iter().any(|e| canonical_word(e.fdc.word(), self.l).0 == canonical)
    }
}

pub fn fixed_distance_cosets(l: u32, k: u32) -> Result<FdcTable> {
    FdcTable::build(l, k)
}
