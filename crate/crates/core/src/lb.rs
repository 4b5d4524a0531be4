//! The lower-bound algorithm.
//!
//! Every fixed-distance coset of weight `k` is nondegenerate, which already
//! gives `L * N_L`. For each fixed-distance string `FDC(i)` and each
//! `j = 1..k-1` the `j`th one is cleared to get `MASK(i, j)`, and the
//! weight-`k` strings `MASK(i, j) + one extra bit` form the candidate set
//! `C(i, j)` of `j`th-quasi fixed-distance cosets. Candidates already known
//! (fixed-distance classes, or classes analysed in an earlier set) are
//! dropped. If the OR of a selection of candidates contains a fixed-distance
//! string, those candidates cannot all be degenerate; the sweep finds the
//! largest selection for which this cannot be ruled out (`m_star`) and the
//! remaining `M - m_star` candidates are counted as nondegenerate.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::bits::{canonical_word, check_params, len_mask, rotl, BitString, FdcTable};
use crate::num::{binomial, is_prime};
use crate::{Error, Result};

/// How coset identity and fixed-distance containment are decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Raw string comparisons: AND against the stored `FDC(l)`, XOR against
    /// earlier masks.
    Strict,
    /// Canonical classes, and containment of any rotation of `FDC(l)`.
    #[default]
    Rotational,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Rotational => "rotational",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "strict" => Ok(Mode::Strict),
            "rotational" => Ok(Mode::Rotational),
            _ => Err(()),
        }
    }
}

/// Order in which the fixed-distance cosets are traversed by the outer loop.
///
/// The analysed-class ledger makes the bound depend on this order for some
/// `(L, k)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Order {
    /// Start at `d = 1` and keep doubling the distance (`2d mod L`, folded
    /// into `[1, L/2]`); when the orbit closes, continue from the smallest
    /// distance not visited yet.
    #[default]
    Doubling,
    /// Distances in ascending order.
    Ascending,
}

impl Order {
    pub fn as_str(&self) -> &'static str {
        match self {
            Order::Doubling => "doubling",
            Order::Ascending => "ascending",
        }
    }
}

impl core::str::FromStr for Order {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "doubling" => Ok(Order::Doubling),
            "ascending" => Ok(Order::Ascending),
            _ => Err(()),
        }
    }
}

/// Identifies `MASK(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaskIndex {
    /// 1-based position of the fixed-distance coset in traversal order.
    pub i: u32,
    /// Index of the removed one, `1..k`.
    pub j: u32,
    pub d: u32,
    pub mask: BitString,
}

/// `C(i, j)` after both elimination passes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub owner: MaskIndex,
    pub members: Vec<BitString>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOutcome {
    /// Number of candidates swept, `M`.
    pub m: usize,
    /// Largest number of candidates that may be simultaneously degenerate.
    pub m_star: usize,
    pub proven_nondegenerate: usize,
    pub contribution: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetRecord {
    pub i: u32,
    pub j: u32,
    pub d: u32,
    pub mask: BitString,
    pub m: usize,
    pub m_star: usize,
    pub contribution: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub l: u32,
    pub k: u32,
    pub mode: Mode,
    pub order: Order,
    pub n_l: usize,
    pub initial_delta: u64,
    /// The lower bound on the global linear complexity.
    pub delta: u64,
    pub nondegenerate_coset_count: u64,
    pub sets: Vec<SetRecord>,
}

impl BoundReport {
    /// Checks the arithmetic relations every report must satisfy.
    pub fn check_invariants(&self) -> core::result::Result<(), &'static str> {
        let l = u64::from(self.l);
        if self.initial_delta != l * self.n_l as u64 {
            return Err("initial bound differs from L * N_L");
        }
        let sum: u64 = self.sets.iter().map(|s| s.contribution).sum();
        if self.delta != self.initial_delta + sum {
            return Err("bound differs from initial bound plus set contributions");
        }
        if u128::from(self.delta) > binomial(self.l, self.k) {
            return Err("bound exceeds the number of weight-k strings");
        }
        if self.sets.iter().any(|s| s.m_star > s.m) {
            return Err("m_star exceeds the candidate count");
        }
        if is_prime(l) && self.nondegenerate_coset_count * l != self.delta {
            return Err("bound is not L times the nondegenerate coset count");
        }
        Ok(())
    }
}

/// `FDC(i)` with the `j`th one (position `d * j mod L`) cleared.
pub fn build_mask(fdc: BitString, j: u32, d: u32, l: u32) -> Result<BitString> {
    let k = fdc.weight();
    if fdc.len() != l {
        return Err(Error::LengthMismatch { left: fdc.len(), right: l });
    }
    if j == 0 || j >= k {
        return Err(Error::MaskIndex { j, k });
    }
    let pos = (u64::from(d) * u64::from(j) % u64::from(l)) as u32;
    Ok(fdc.without_bit(pos))
}

/// One candidate per position outside `fdc`: the mask plus that bit.
pub fn build_candidates(fdc: BitString, mask: BitString) -> Vec<BitString> {
    (0..fdc.len()).filter(|&p| !fdc.get(p)).map(|p| mask.with_bit(p)).collect()
}

/// Drops candidates that are fixed-distance cosets.
pub fn eliminate_fixed_distance(cands: &[BitString], table: &FdcTable, mode: Mode) -> Vec<BitString> {
    let l = table.l();
    let fdc_canon: Vec<u64> = table.entries().iter().map(|e| canonical_word(e.fdc.word(), l).0).collect();
    cands
        .iter()
        .copied()
        .filter(|x| match mode {
            Mode::Strict => !table.entries().iter().any(|e| x.word() & e.fdc.word() == e.fdc.word()),
            Mode::Rotational => !fdc_canon.contains(&canonical_word(x.word(), l).0),
        })
        .collect()
}

/// What earlier candidate sets have covered.
#[derive(Clone, Debug, Default)]
pub struct History {
    classes: BTreeSet<u64>,
    masks: Vec<BitString>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a processed set: its mask and the classes it retained.
    pub fn record(&mut self, mask: BitString, retained: &[BitString]) {
        self.masks.push(mask);
        for x in retained {
            self.classes.insert(canonical_word(x.word(), x.len()).0);
        }
    }

    pub fn prior_masks(&self) -> &[BitString] {
        &self.masks
    }

    pub fn seen_class(&self, canonical: u64) -> bool {
        self.classes.contains(&canonical)
    }
}

/// Drops candidates analysed in an earlier set.
///
/// `Rotational` looks the canonical class up in the ledger and also drops
/// repeats of a class inside `cands`. `Strict` drops `X` when
/// `X XOR MASK(o, p)` has a single one for some earlier mask.
pub fn eliminate_previously_seen(cands: &[BitString], history: &History, mode: Mode) -> Vec<BitString> {
    match mode {
        Mode::Strict => cands
            .iter()
            .copied()
            .filter(|x| !history.masks.iter().any(|m| (x.word() ^ m.word()).count_ones() == 1))
            .collect(),
        Mode::Rotational => {
            let mut local: Vec<u64> = Vec::new();
            let mut out = Vec::new();
            for x in cands {
                let c = canonical_word(x.word(), x.len()).0;
                if history.seen_class(c) || local.contains(&c) {
                    continue;
                }
                local.push(c);
                out.push(*x);
            }
            out
        }
    }
}

/// The fixed-distance strings a selection's OR is tested against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patterns {
    l: u32,
    words: Vec<u64>,
}

impl Patterns {
    pub fn new(table: &FdcTable, mode: Mode) -> Self {
        let l = table.l();
        let mut words: Vec<u64> = Vec::new();
        for e in table.entries() {
            match mode {
                Mode::Strict => words.push(e.fdc.word()),
                Mode::Rotational => words.extend((0..l).map(|r| rotl(e.fdc.word(), r, l))),
            }
        }
        words.sort_unstable();
        words.dedup();
        Patterns { l, words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `VL`: whether `vor` contains one of the patterns.
    pub fn covered(&self, vor: u64) -> bool {
        self.words.iter().any(|&p| vor & p == p)
    }
}

/// Sweeps a candidate set against the table's fixed-distance strings.
pub fn sweep(cands: &[BitString], table: &FdcTable, mode: Mode) -> SweepOutcome {
    sweep_with(cands, &Patterns::new(table, mode))
}

/// Sweep with precomputed patterns.
///
/// Selections whose OR contains a pattern can never all be degenerate.
/// Because a sub-selection of a selection with `VL = 0` also has `VL = 0`,
/// the top-down protocol (decrease `m` while every size-`m` selection has
/// `VL = 1`) stops at the largest selection with `VL = 0`. When every
/// candidate is a common base plus one distinct extra bit, that size is
/// `M` minus a minimum hitting set of the pattern footprints, found by
/// branch and bound; otherwise the selections are enumerated.
pub fn sweep_with(cands: &[BitString], patterns: &Patterns) -> SweepOutcome {
    let m = cands.len();
    if m == 0 {
        return SweepOutcome { m: 0, m_star: 0, proven_nondegenerate: 0, contribution: 0 };
    }
    let words: Vec<u64> = cands.iter().map(|c| c.word()).collect();
    let m_star = match footprints(&words, patterns) {
        Some(edges) => m - min_hitting_set(&edges, m),
        None => enumerate_m_star(&words, patterns),
    }
    .max(1);
    let proven = m - m_star;
    let l = patterns.l;
    let multiplier = if is_prime(u64::from(l)) {
        u64::from(l)
    } else {
        cands.iter().map(|c| u64::from(canonical_word(c.word(), l).1)).min().unwrap_or(0)
    };
    SweepOutcome { m, m_star, proven_nondegenerate: proven, contribution: proven as u64 * multiplier }
}

/// `m_star` by the literal top-down enumeration, without the hitting-set
/// shortcut. Exponential in `M`; meant as a reference.
pub fn sweep_literal(cands: &[BitString], patterns: &Patterns) -> usize {
    if cands.is_empty() {
        return 0;
    }
    let words: Vec<u64> = cands.iter().map(|c| c.word()).collect();
    enumerate_m_star(&words, patterns)
}

/// For base-plus-one-bit candidates, the candidate-index sets each pattern
/// needs, keeping only the inclusion-minimal ones.
fn footprints(words: &[u64], patterns: &Patterns) -> Option<Vec<u64>> {
    if words.len() > 64 {
        return None;
    }
    let base = words.iter().fold(u64::MAX, |acc, &w| acc & w);
    let mut extra_owner: Vec<(u32, usize)> = Vec::with_capacity(words.len());
    for (idx, &w) in words.iter().enumerate() {
        let extra = w & !base;
        if extra.count_ones() != 1 {
            return None;
        }
        let bit = extra.trailing_zeros();
        if extra_owner.iter().any(|&(b, _)| b == bit) {
            return None;
        }
        extra_owner.push((bit, idx));
    }
    let extras = words.iter().fold(0u64, |acc, &w| acc | w) & !base;
    let mut edges: Vec<u64> = Vec::new();
    for &p in patterns.words() {
        let need = p & !base;
        if need & !extras != 0 {
            continue;
        }
        let mut edge = 0u64;
        let mut rest = need;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            let idx = extra_owner.iter().find(|&&(b, _)| b == bit).map(|&(_, i)| i)?;
            edge |= 1u64 << idx;
        }
        edges.push(edge);
    }
    // An empty footprint would mean the base alone contains a pattern.
    if edges.contains(&0) {
        return None;
    }
    edges.sort_unstable_by_key(|e| (e.count_ones(), *e));
    edges.dedup();
    let mut minimal: Vec<u64> = Vec::new();
    for e in edges {
        if !minimal.iter().any(|&f| f & e == f) {
            minimal.push(e);
        }
    }
    Some(minimal)
}

/// Size of the smallest set of candidate indices meeting every edge.
fn min_hitting_set(edges: &[u64], m: usize) -> usize {
    let mut best = m;
    hit_search(edges, 0, 0, &mut best);
    best
}

fn hit_search(edges: &[u64], removed: u64, used: usize, best: &mut usize) {
    if used >= *best {
        return;
    }
    // Pairwise disjoint unhit edges each need their own removal.
    let mut packing = 0usize;
    let mut covered = 0u64;
    let mut branch: Option<u64> = None;
    for &e in edges {
        if e & removed != 0 {
            continue;
        }
        match branch {
            None => branch = Some(e),
            Some(b) if e.count_ones() < b.count_ones() => branch = Some(e),
            _ => {}
        }
        if e & covered == 0 {
            packing += 1;
            covered |= e;
        }
    }
    let Some(edge) = branch else {
        *best = used;
        return;
    };
    if used + packing >= *best {
        return;
    }
    let mut rest = edge;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= rest - 1;
        hit_search(edges, removed | bit, used + 1, best);
    }
}

/// Literal top-down protocol over lexicographic selections.
fn enumerate_m_star(words: &[u64], patterns: &Patterns) -> usize {
    let m = words.len();
    for size in (2..=m).rev() {
        if find_uncovered(words, patterns, size, 0, 0, 0) {
            return size;
        }
    }
    1
}

fn find_uncovered(words: &[u64], patterns: &Patterns, size: usize, start: usize, depth: usize, acc: u64) -> bool {
    if depth > 0 && patterns.covered(acc) {
        return false;
    }
    if depth == size {
        return true;
    }
    let need = size - depth;
    (start..=words.len() - need).any(|i| find_uncovered(words, patterns, size, i + 1, depth + 1, acc | words[i]))
}

/// Fixed-distance indices in the order the outer loop visits them.
pub fn traversal(table: &FdcTable, order: Order) -> Vec<usize> {
    let n = table.count();
    match order {
        Order::Ascending => (0..n).collect(),
        Order::Doubling => {
            let l = u64::from(table.l());
            let fold = |x: u64| x.min(l - x);
            let mut visited = alloc::vec![false; n];
            let mut out = Vec::with_capacity(n);
            let mut cur: Option<usize> = None;
            while out.len() < n {
                let next = cur
                    .and_then(|c| {
                        let target = fold(2 * u64::from(table.entries()[c].d) % l);
                        table.entries().iter().position(|e| u64::from(e.d) == target)
                    })
                    .filter(|&idx| !visited[idx])
                    .unwrap_or_else(|| visited.iter().position(|v| !v).unwrap_or(0));
                visited[next] = true;
                out.push(next);
                cur = Some(next);
            }
            out
        }
    }
}

/// Everything except the sweeps: the candidate sets in loop order.
///
/// Sets only depend on earlier sets through the candidates they held, not
/// through sweep results, so the sweeps can run in any order afterwards.
#[derive(Clone, Debug)]
pub struct Plan {
    pub table: FdcTable,
    pub mode: Mode,
    pub order: Order,
    pub patterns: Patterns,
    pub sets: Vec<CandidateSet>,
}

impl Plan {
    pub fn new(l: u32, k: u32, mode: Mode, order: Order) -> Result<Self> {
        check_params(l, k)?;
        let table = FdcTable::build(l, k)?;
        let patterns = Patterns::new(&table, mode);
        let mut history = History::new();
        let mut sets = Vec::with_capacity(table.count() * (k as usize - 1));
        for (pos, &idx) in traversal(&table, order).iter().enumerate() {
            let entry = table.entries()[idx];
            for j in 1..k {
                let mask = build_mask(entry.fdc, j, entry.d, l)?;
                let cands = build_candidates(entry.fdc, mask);
                let cands = eliminate_fixed_distance(&cands, &table, mode);
                let members = eliminate_previously_seen(&cands, &history, mode);
                history.record(mask, &members);
                sets.push(CandidateSet {
                    owner: MaskIndex { i: pos as u32 + 1, j, d: entry.d, mask },
                    members,
                });
            }
        }
        Ok(Plan { table, mode, order, patterns, sets })
    }

    pub fn sweep_set(&self, idx: usize) -> SweepOutcome {
        sweep_with(&self.sets[idx].members, &self.patterns)
    }

    /// Combines per-set outcomes (in set order) into the report.
    pub fn assemble(&self, outcomes: &[SweepOutcome]) -> BoundReport {
        assert_eq!(outcomes.len(), self.sets.len(), "one outcome per candidate set");
        let l = self.table.l();
        let n_l = self.table.count();
        let initial_delta = u64::from(l) * n_l as u64;
        let mut delta = initial_delta;
        let mut count = n_l as u64;
        let mut records = Vec::with_capacity(outcomes.len());
        for (set, out) in self.sets.iter().zip(outcomes) {
            delta += out.contribution;
            count += out.proven_nondegenerate as u64;
            records.push(SetRecord {
                i: set.owner.i,
                j: set.owner.j,
                d: set.owner.d,
                mask: set.owner.mask,
                m: out.m,
                m_star: out.m_star,
                contribution: out.contribution,
            });
        }
        BoundReport {
            l,
            k: self.table.k(),
            mode: self.mode,
            order: self.order,
            n_l,
            initial_delta,
            delta,
            nondegenerate_coset_count: count,
            sets: records,
        }
    }

    pub fn run(&self) -> BoundReport {
        let outcomes: Vec<SweepOutcome> = (0..self.sets.len()).map(|i| self.sweep_set(i)).collect();
        self.assemble(&outcomes)
    }
}

/// Lower bound with the default traversal order.
pub fn lb_bound(l: u32, k: u32, mode: Mode) -> Result<BoundReport> {
    lb_bound_with(l, k, mode, Order::default())
}

pub fn lb_bound_with(l: u32, k: u32, mode: Mode, order: Order) -> Result<BoundReport> {
    Ok(Plan::new(l, k, mode, order)?.run())
}

/// All canonical classes a rotational plan counts or initialises with,
/// for auditing that no class is visited twice.
pub fn analysed_classes(plan: &Plan) -> Vec<u64> {
    let l = plan.table.l();
    let mut out: Vec<u64> = plan.table.entries().iter().map(|e| canonical_word(e.fdc.word(), l).0).collect();
    for set in &plan.sets {
        out.extend(set.members.iter().map(|x| canonical_word(x.word(), l).0));
    }
    debug_assert!(out.iter().all(|&w| w & !len_mask(l) == 0));
    out
}
