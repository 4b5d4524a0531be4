//! Checks a computed bound against measured keystream complexity.

use filterlc_core::gf2m::primitive_polynomials;
use filterlc_core::keystream::{global_lc, MAX_MEASURED_LEN};
use filterlc_core::{FilterSpec, LfsrSpec, PhaseSet, PolyMod};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub modulus: PolyMod,
    pub filter: FilterSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    pub poly: String,
    pub max_term: Vec<u64>,
    pub lower_terms: Vec<Vec<u64>>,
    pub lc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "L")]
    pub l: u32,
    pub k: u32,
    pub delta: u64,
    pub runs: Vec<Run>,
    pub min_lc: Option<usize>,
    pub pass: bool,
}

/// All `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: u64, k: usize) -> Vec<Vec<u64>> {
    fn rec(n: u64, k: usize, start: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for t in start..n {
            if n - t < (k - cur.len()) as u64 {
                break;
            }
            cur.push(t);
            rec(n, k, t + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn check_len(l: u32) -> Result<(), CliError> {
    if l > MAX_MEASURED_LEN {
        return Err(CliError::Input(format!("verification needs L <= {MAX_MEASURED_LEN}, got {l}")));
    }
    Ok(())
}

/// Every primitive modulus of degree `l` with every product of `k` stages.
pub fn exhaustive_configs(l: u32, k: usize) -> Result<Vec<Config>, CliError> {
    check_len(l)?;
    let taps = subsets(u64::from(l), k);
    Ok(primitive_polynomials(l)
        .into_iter()
        .flat_map(|m| {
            taps.iter().map(move |t| Config { modulus: m, filter: FilterSpec::product(PhaseSet::new(t.clone()).unwrap()) })
        })
        .collect())
}

/// `n` configurations drawn with a seeded generator: random primitive
/// modulus, random `k` distinct stages.
pub fn sampled_configs(l: u32, k: usize, n: usize, seed: u64) -> Result<Vec<Config>, CliError> {
    check_len(l)?;
    let moduli = primitive_polynomials(l);
    let stages: Vec<u64> = (0..u64::from(l)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let modulus = *moduli.choose(&mut rng).expect("some primitive polynomial");
            let mut taps: Vec<u64> = stages.choose_multiple(&mut rng, k).copied().collect();
            taps.sort_unstable();
            Config { modulus, filter: FilterSpec::product(PhaseSet::new(taps).unwrap()) }
        })
        .collect())
}

/// Measures every configuration and compares against `delta`.
pub fn run_verify(l: u32, k: u32, delta: u64, configs: &[Config], jobs: usize) -> Result<VerifyReport, CliError> {
    check_len(l)?;
    let measure = |c: &Config| -> Result<Run, CliError> {
        if c.modulus.degree() != l {
            return Err(CliError::Input(format!("modulus {} has degree {}, not {l}", c.modulus.to_hex(), c.modulus.degree())));
        }
        let lfsr = LfsrSpec::with_default_seed(c.modulus)?;
        Ok(Run {
            poly: c.modulus.to_hex(),
            max_term: c.filter.max_term.taps().to_vec(),
            lower_terms: c.filter.lower_terms.iter().map(|t| t.taps().to_vec()).collect(),
            lc: global_lc(&lfsr, &c.filter)?,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let runs = pool.install(|| configs.par_iter().map(measure).collect::<Result<Vec<_>, _>>())?;
    let min_lc = runs.iter().map(|r| r.lc).min();
    let pass = runs.iter().all(|r| r.lc as u64 >= delta);
    Ok(VerifyReport { l, k, delta, runs, min_lc, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(7, 4).len(), 35);
        assert_eq!(subsets(5, 0), vec![Vec::<u64>::new()]);
        assert_eq!(subsets(4, 2)[0], vec![0, 1]);
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sampled_configs(11, 6, 5, 7).unwrap();
        assert_eq!(a, sampled_configs(11, 6, 5, 7).unwrap());
        assert!(a.iter().all(|c| c.filter.order() == 6 && c.modulus.is_primitive()));
        assert!(sampled_configs(18, 6, 1, 0).is_err());
    }

    #[test]
    fn exhaustive_l7() {
        assert_eq!(exhaustive_configs(7, 4).unwrap().len(), 18 * 35);
    }
}
