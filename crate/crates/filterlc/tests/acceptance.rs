//! Acceptance checks, one PASS/FAIL line each.
//!
//! The long-running reference pairs are only checked with `--slow`:
//! `cargo test -p filterlc --test acceptance -- --slow`.

use std::process::ExitCode;
use std::time::Instant;

use filterlc::parallel::lb_bound_jobs;
use filterlc::verify::{exhaustive_configs, run_verify, sampled_configs};
use filterlc::{FAST_TIER, SLOW_TIER};
use filterlc_core::gf2m::{det, primitive_polynomials, root_presence, Matrix};
use filterlc_core::keystream::{berlekamp_massey, filter_bits, minpoly_root_check};
use filterlc_core::lb::{lb_bound, Mode, Order};
use filterlc_core::num::{binomial, euler_phi, is_prime};
use filterlc_core::{BitString, FdcTable, FieldElement, Gf2m, LfsrSpec, PhaseSet, PolyMod};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fast_tier() -> Outcome {
    let mut notes = Vec::new();
    for (l, k, want) in FAST_TIER {
        let rot = lb_bound(l, k, Mode::Rotational).map_err(|e| e.to_string())?.delta;
        let strict = lb_bound(l, k, Mode::Strict).map_err(|e| e.to_string())?.delta;
        if rot != want && strict != want {
            return Err(format!("({l},{k}): rotational {rot}, strict {strict}, expected {want}"));
        }
        notes.push(format!("{l}:{}", if rot == want { rot } else { strict }));
    }
    Ok(notes.join(" "))
}

fn slow_tier() -> Outcome {
    let mut notes = Vec::new();
    let mut bad = Vec::new();
    for (l, k, want) in SLOW_TIER {
        let start = Instant::now();
        let got = lb_bound_jobs(l, k, Mode::Rotational, Order::Doubling, 0).map_err(|e| e.to_string())?.delta;
        notes.push(format!("{l}:{got} ({:.2}s)", start.elapsed().as_secs_f64()));
        if got != want {
            bad.push(format!("({l},{k}) got {got}, expected {want}"));
        }
    }
    if bad.is_empty() {
        Ok(notes.join(" "))
    } else {
        Err(format!("{}; {}", bad.join(", "), notes.join(" ")))
    }
}

fn eleven_six_count() -> Outcome {
    let r = lb_bound(11, 6, Mode::Rotational).map_err(|e| e.to_string())?;
    if r.delta % 11 == 0 && r.delta / 11 == 22 && r.nondegenerate_coset_count == 22 {
        Ok("242 / 11 = 22 nondegenerate cosets".into())
    } else {
        Err(format!("delta {} count {}", r.delta, r.nondegenerate_coset_count))
    }
}

fn closed_form_limits() -> Outcome {
    let mut checked = 0;
    for l in 6u32..=19 {
        for k in 3..l - 2 {
            let r = lb_bound(l, k, Mode::Rotational).map_err(|e| e.to_string())?;
            let lf = u64::from(l);
            if is_prime(lf) && r.delta < lf * (lf - 1) / 2 {
                return Err(format!("({l},{k}) delta {} < L(L-1)/2", r.delta));
            }
            if r.delta < lf * euler_phi(lf) / 2 {
                return Err(format!("({l},{k}) delta {} < L*phi(L)/2", r.delta));
            }
            if u128::from(r.delta) > binomial(l, k) {
                return Err(format!("({l},{k}) delta {} > C(L,k)", r.delta));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (L,k) pairs with L <= 19"))
}

/// Distinct stages in `[0, L)`.
fn random_phases(rng: &mut ChaCha8Rng, k: usize, l: u32) -> PhaseSet {
    let mut taps: Vec<u64> = sample(rng, l as usize, k).into_iter().map(|t| t as u64).collect();
    taps.sort_unstable();
    PhaseSet::new(taps).unwrap()
}

fn fixed_distance_nondegenerate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checks = 0u64;
    for l in [7u32, 11, 13] {
        for modulus in primitive_polynomials(l) {
            let field = Gf2m::new(modulus).map_err(|e| e.to_string())?;
            for _ in 0..50 {
                let k = rng.gen_range(3..l - 2);
                let phases = random_phases(&mut rng, k as usize, l);
                let table = FdcTable::build(l, k).map_err(|e| e.to_string())?;
                for e in table.entries() {
                    checks += 1;
                    if !root_presence(&phases, e.fdc, &field).map_err(|e| e.to_string())? {
                        return Err(format!("L={l} modulus {} phases {:?} d={} degenerate", modulus.to_hex(), phases.taps(), e.d));
                    }
                }
            }
        }
    }
    Ok(format!("{checks} determinants over all primitive moduli of degree 7, 11, 13"))
}

fn soundness() -> Outcome {
    let mut notes = Vec::new();
    let mut runs = 0;
    let mut cases: Vec<(u32, u32, Vec<filterlc::verify::Config>)> =
        vec![(7, 4, exhaustive_configs(7, 4).map_err(|e| e.to_string())?)];
    for k in 3..=8 {
        cases.push((11, k, sampled_configs(11, k as usize, 100, u64::from(k)).map_err(|e| e.to_string())?));
    }
    for (l, k, configs) in cases {
        let bound = lb_bound(l, k, Mode::Rotational).map_err(|e| e.to_string())?.delta;
        let report = run_verify(l, k, bound, &configs, 0).map_err(|e| e.to_string())?;
        runs += report.runs.len();
        let min = report.min_lc.unwrap_or(0);
        if !report.pass {
            return Err(format!("({l},{k}) min measured {min} < bound {bound}"));
        }
        notes.push(format!("({l},{k}) {bound}<={min}"));
    }
    Ok(format!("{runs} runs, zero violations: {}", notes.join(" ")))
}

fn root_iff_minpoly() -> Outcome {
    let cosets: Vec<BitString> = (0u64..128).filter(|w| w.count_ones() == 4).map(|w| BitString::new(7, w).unwrap()).collect();
    let mut checks = 0;
    let mut degenerate = 0;
    for config in exhaustive_configs(7, 4).map_err(|e| e.to_string())? {
        let field = Gf2m::new(config.modulus).map_err(|e| e.to_string())?;
        let lfsr = LfsrSpec::with_default_seed(config.modulus).map_err(|e| e.to_string())?;
        let bits = filter_bits(&lfsr, &config.filter, 2 * 127).map_err(|e| e.to_string())?;
        let bm = berlekamp_massey(&bits);
        for &c in &cosets {
            let present = root_presence(&config.filter.max_term, c, &field).map_err(|e| e.to_string())?;
            let root = minpoly_root_check(&bm, c, &field).map_err(|e| e.to_string())?;
            if present != root {
                return Err(format!("modulus {} taps {:?} coset {c}: determinant says {present}, polynomial says {root}", config.modulus.to_hex(), config.filter.max_term.taps()));
            }
            checks += 1;
            degenerate += usize::from(!present);
        }
    }
    Ok(format!("{checks} (configuration, coset) pairs agree, {degenerate} degenerate"))
}

fn cofactor_det(m: &Matrix, f: &Gf2m) -> FieldElement {
    match m.len() {
        0 => FieldElement::ONE,
        1 => m[0][0],
        n => (0..n).fold(FieldElement::ZERO, |acc, col| {
            let minor: Matrix =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, &v)| v).collect()).collect();
            f.add(acc, f.mul(m[0][col], cofactor_det(&minor, f)))
        }),
    }
}

fn determinant_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde7);
    let mut singular = 0;
    for (l, modulus) in [(3u32, 0xbu128), (7, 0x83), (11, 0x805)] {
        let field = Gf2m::new(PolyMod::new(modulus).unwrap()).map_err(|e| e.to_string())?;
        for trial in 0..1000 {
            let n = 1 + trial % 4;
            let m: Matrix = (0..n).map(|_| (0..n).map(|_| FieldElement(rng.gen_range(0..1u64 << l))).collect()).collect();
            let (a, b) = (det(&m, &field), cofactor_det(&m, &field));
            if a != b {
                return Err(format!("L={l} matrix {m:?}: elimination {a:?}, cofactor {b:?}"));
            }
            singular += usize::from(a.is_zero());
        }
    }
    Ok(format!("3000 matrices up to 4x4, {singular} singular"))
}

fn determinism() -> Outcome {
    for (l, k, _) in FAST_TIER {
        let one = lb_bound_jobs(l, k, Mode::Rotational, Order::Doubling, 1).map_err(|e| e.to_string())?;
        for jobs in [2, 8, 0] {
            if lb_bound_jobs(l, k, Mode::Rotational, Order::Doubling, jobs).map_err(|e| e.to_string())? != one {
                return Err(format!("({l},{k}) differs with {jobs} threads"));
            }
        }
    }
    Ok("identical reports with 1, 2, 8 and all threads".into())
}

fn main() -> ExitCode {
    let slow = std::env::args().any(|a| a == "--slow");
    let criteria: [(u32, &str, Option<fn() -> Outcome>); 9] = [
        (1, "reference bounds, fast pairs", Some(fast_tier)),
        (2, "reference bounds, slow pairs", slow.then_some(slow_tier as fn() -> Outcome)),
        (3, "(11,6) nondegenerate coset count", Some(eleven_six_count)),
        (4, "closed-form lower and upper limits", Some(closed_form_limits)),
        (5, "fixed-distance cosets never degenerate", Some(fixed_distance_nondegenerate)),
        (6, "measured complexity never below the bound", Some(soundness)),
        (7, "determinant test agrees with minimal polynomial roots", Some(root_iff_minpoly)),
        (8, "elimination determinant equals cofactor expansion", Some(determinant_oracle)),
        (9, "thread count does not change the report", Some(determinism)),
    ];
    let mut failed = 0;
    for (n, name, check) in criteria {
        let Some(check) = check else {
            println!("criterion {n} SKIP {name}: long-running, pass --slow");
            continue;
        };
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} FAIL {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
