//! File and wire formats.
//!
//! * Bound reports as JSON:
//!   `{L, k, mode, order, n_l, initial_delta, delta, nondegenerate_coset_count,
//!   sets: [{i, j, d, mask_hex, M, m_star, contribution}]}`.
//! * Bit strings as `(L, hex)` pairs, text form `L:0xHEX`.
//! * Bit sequences as `{bits, hex}`: bit `i` lives in byte `i / 8` at bit
//!   `i % 8`, bytes written in order as two hex digits each.
//! * Filters as `{max_term: [taps], lower_terms: [[taps], ...]}`.

use filterlc_core::lb::{BoundReport, Mode, Order, SetRecord};
use filterlc_core::{BitString, FilterSpec, PhaseSet};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetJson {
    pub i: u32,
    pub j: u32,
    pub d: u32,
    pub mask_hex: String,
    #[serde(rename = "M")]
    pub m: usize,
    pub m_star: usize,
    pub contribution: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    #[serde(rename = "L")]
    pub l: u32,
    pub k: u32,
    pub mode: String,
    pub order: String,
    pub n_l: usize,
    pub initial_delta: u64,
    pub delta: u64,
    pub nondegenerate_coset_count: u64,
    pub sets: Vec<SetJson>,
}

impl From<&BoundReport> for ReportJson {
    fn from(r: &BoundReport) -> Self {
        ReportJson {
            l: r.l,
            k: r.k,
            mode: r.mode.as_str().to_string(),
            order: r.order.as_str().to_string(),
            n_l: r.n_l,
            initial_delta: r.initial_delta,
            delta: r.delta,
            nondegenerate_coset_count: r.nondegenerate_coset_count,
            sets: r
                .sets
                .iter()
                .map(|s| SetJson {
                    i: s.i,
                    j: s.j,
                    d: s.d,
                    mask_hex: s.mask.to_hex(),
                    m: s.m,
                    m_star: s.m_star,
                    contribution: s.contribution,
                })
                .collect(),
        }
    }
}

impl TryFrom<&ReportJson> for BoundReport {
    type Error = CliError;

    fn try_from(j: &ReportJson) -> Result<Self, CliError> {
        let mode: Mode = j.mode.parse().map_err(|_| CliError::Input(format!("unknown mode {:?}", j.mode)))?;
        let order: Order = j.order.parse().map_err(|_| CliError::Input(format!("unknown order {:?}", j.order)))?;
        let sets = j
            .sets
            .iter()
            .map(|s| {
                Ok(SetRecord {
                    i: s.i,
                    j: s.j,
                    d: s.d,
                    mask: BitString::from_hex(j.l, &s.mask_hex)?,
                    m: s.m,
                    m_star: s.m_star,
                    contribution: s.contribution,
                })
            })
            .collect::<Result<Vec<_>, filterlc_core::Error>>()?;
        Ok(BoundReport {
            l: j.l,
            k: j.k,
            mode,
            order,
            n_l: j.n_l,
            initial_delta: j.initial_delta,
            delta: j.delta,
            nondegenerate_coset_count: j.nondegenerate_coset_count,
            sets,
        })
    }
}

pub fn report_to_json(r: &BoundReport) -> String {
    serde_json::to_string_pretty(&ReportJson::from(r)).expect("report serializes")
}

pub fn report_from_json(text: &str) -> Result<BoundReport, CliError> {
    let j: ReportJson = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    BoundReport::try_from(&j)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitStringJson {
    #[serde(rename = "L")]
    pub l: u32,
    pub hex: String,
}

impl From<BitString> for BitStringJson {
    fn from(s: BitString) -> Self {
        BitStringJson { l: s.len(), hex: s.to_hex() }
    }
}

/// `L:0xHEX`.
pub fn bitstring_to_text(s: &BitString) -> String {
    format!("{}:{}", s.len(), s.to_hex())
}

pub fn bitstring_from_text(text: &str) -> Result<BitString, CliError> {
    let (l, hex) = text.split_once(':').ok_or_else(|| CliError::Input(format!("expected L:0xHEX, got {text:?}")))?;
    let l: u32 = l.trim().parse().map_err(|_| CliError::Input(format!("bad length in {text:?}")))?;
    Ok(BitString::from_hex(l, hex)?)
}

/// Parses a coset given either as hex (`0x...`) or as a position list
/// (`0,3,6`).
pub fn parse_coset(l: u32, text: &str) -> Result<BitString, CliError> {
    let t = text.trim();
    if t.starts_with("0x") || t.starts_with("0X") {
        return Ok(BitString::from_hex(l, t)?);
    }
    let positions = parse_list::<u32>(t)?;
    if let Some(&p) = positions.iter().find(|&&p| p >= l) {
        return Err(CliError::Input(format!("position {p} is outside [0, {l})")));
    }
    Ok(BitString::from_positions(l, positions)?)
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<T>().map_err(|_| CliError::Input(format!("bad list item {s:?}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitSeqJson {
    pub bits: usize,
    pub hex: String,
}

pub fn pack_bits(bits: &[bool]) -> BitSeqJson {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        bytes[i / 8] |= 1 << (i % 8);
    }
    BitSeqJson { bits: bits.len(), hex: bytes.iter().map(|b| format!("{b:02x}")).collect() }
}

pub fn unpack_bits(seq: &BitSeqJson) -> Result<Vec<bool>, CliError> {
    let hex = seq.hex.as_bytes();
    if hex.len() != 2 * seq.bits.div_ceil(8) {
        return Err(CliError::Input(format!("{} hex digits cannot hold exactly {} bits", hex.len(), seq.bits)));
    }
    let bytes = hex
        .chunks(2)
        .map(|c| {
            std::str::from_utf8(c)
                .ok()
                .and_then(|s| u8::from_str_radix(s, 16).ok())
                .ok_or_else(|| CliError::Input("bad hex digit in bit sequence".into()))
        })
        .collect::<Result<Vec<u8>, _>>()?;
    if !seq.bits.is_multiple_of(8) && bytes.last().is_some_and(|b| b >> (seq.bits % 8) != 0) {
        return Err(CliError::Input("bit sequence has bits set past its length".into()));
    }
    Ok((0..seq.bits).map(|i| (bytes[i / 8] >> (i % 8)) & 1 == 1).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterJson {
    pub max_term: Vec<u64>,
    #[serde(default)]
    pub lower_terms: Vec<Vec<u64>>,
}

impl FilterJson {
    pub fn to_spec(&self) -> Result<FilterSpec, CliError> {
        let sorted = |taps: &[u64]| {
            let mut t = taps.to_vec();
            t.sort_unstable();
            PhaseSet::new(t)
        };
        let max = sorted(&self.max_term)?;
        let lower = self.lower_terms.iter().map(|t| sorted(t)).collect::<Result<Vec<_>, _>>()?;
        Ok(FilterSpec::new(max, lower)?)
    }
}

impl From<&FilterSpec> for FilterJson {
    fn from(f: &FilterSpec) -> Self {
        FilterJson {
            max_term: f.max_term.taps().to_vec(),
            lower_terms: f.lower_terms.iter().map(|t| t.taps().to_vec()).collect(),
        }
    }
}

pub fn filter_from_json(text: &str) -> Result<FilterSpec, CliError> {
    let j: FilterJson = serde_json::from_str(text).map_err(|e| CliError::Input(format!("filter: {e}")))?;
    j.to_spec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use filterlc_core::lb::lb_bound;
    use proptest::prelude::*;

    #[test]
    fn report_json_shape() {
        let r = lb_bound(11, 6, Mode::Rotational).unwrap();
        let text = report_to_json(&r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["L", "k", "mode", "n_l", "initial_delta", "delta", "nondegenerate_coset_count", "sets"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["delta"], 242);
        let set = &v["sets"][0];
        for key in ["i", "j", "d", "mask_hex", "M", "m_star", "contribution"] {
            assert!(set.get(key).is_some(), "missing set key {key}");
        }
        assert_eq!(report_from_json(&text).unwrap(), r);
        assert_eq!(report_to_json(&report_from_json(&text).unwrap()), text);
    }

    #[test]
    fn bitstring_text() {
        let s = BitString::from_positions(11, [0, 2, 11]).unwrap();
        assert_eq!(bitstring_to_text(&s), "11:0x5");
        assert_eq!(bitstring_from_text("11:0x5").unwrap(), s);
        assert!(bitstring_from_text("0x5").is_err());
        assert_eq!(parse_coset(7, "0,3,6").unwrap(), BitString::new(7, 73).unwrap());
        assert_eq!(parse_coset(7, "0x49").unwrap(), BitString::new(7, 73).unwrap());
        assert!(parse_coset(7, "0,7").is_err());
    }

    #[test]
    fn packed_bits_layout() {
        let bits: Vec<bool> = "0010111".bytes().map(|b| b == b'1').collect();
        let p = pack_bits(&bits);
        assert_eq!(p, BitSeqJson { bits: 7, hex: "74".into() });
        assert!(unpack_bits(&BitSeqJson { bits: 7, hex: "f4".into() }).is_err());
        assert!(unpack_bits(&BitSeqJson { bits: 9, hex: "74".into() }).is_err());
    }

    #[test]
    fn filter_json() {
        let f = filter_from_json(r#"{"max_term": [0, 2, 3], "lower_terms": [[1], [0, 4]]}"#).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(serde_json::to_value(FilterJson::from(&f)).unwrap()["lower_terms"][1][1], 4);
        assert!(filter_from_json(r#"{"max_term": [0, 1], "lower_terms": [[2, 3]]}"#).is_err());
        assert_eq!(filter_from_json(r#"{"max_term": [4, 1]}"#).unwrap().max_term.taps(), [1, 4]);
    }

    proptest! {
        #[test]
        fn bit_sequences_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..300)) {
            let packed = pack_bits(&bits);
            let text = serde_json::to_string(&packed).unwrap();
            let back: BitSeqJson = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(unpack_bits(&back).unwrap(), bits);
        }
    }
}
