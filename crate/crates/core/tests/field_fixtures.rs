use filterlc_core::gf2m::{det, root_presence, root_presence_det, test_matrix, Matrix};
use filterlc_core::keystream::{berlekamp_massey, filter_bits, global_lc, minpoly_root_check};
use filterlc_core::{BitString, FieldElement, FilterSpec, Gf2m, LfsrSpec, PhaseSet, PolyMod};
use proptest::prelude::*;

/// Laplace expansion along the first row. Characteristic 2, so no signs.
fn cofactor_det(m: &Matrix, f: &Gf2m) -> FieldElement {
    let n = m.len();
    if n == 0 {
        return FieldElement::ONE;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut acc = FieldElement::ZERO;
    for col in 0..n {
        let minor: Matrix = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, &v)| v).collect())
            .collect();
        acc = f.add(acc, f.mul(m[0][col], cofactor_det(&minor, f)));
    }
    acc
}

fn field(coeffs: u128) -> Gf2m {
    Gf2m::new(PolyMod::new(coeffs).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn elimination_matches_cofactor(modulus in prop::sample::select(vec![0xbu128, 0x83, 0x805]), n in 1usize..=4, raw in proptest::collection::vec(any::<u64>(), 16)) {
        let f = field(modulus);
        let mask = (1u64 << f.degree()) - 1;
        let m: Matrix = (0..n).map(|r| (0..n).map(|c| FieldElement(raw[r * 4 + c] & mask)).collect()).collect();
        prop_assert_eq!(det(&m, &f), cofactor_det(&m, &f));
    }
}

#[test]
fn three_by_three_test_matrix() {
    let f = field(0x83);
    let phases = PhaseSet::new(vec![0, 1, 2]).unwrap();
    let coset = BitString::from_positions(7, [0, 1, 2]).unwrap();
    let m = test_matrix(&phases, coset, &f).unwrap();
    // Row i, column j holds alpha^(t_j * 2^e_i).
    for (i, e) in [0u32, 1, 2].into_iter().enumerate() {
        for (j, t) in [0u128, 1, 2].into_iter().enumerate() {
            assert_eq!(m[i][j], f.alpha_pow(t << e));
        }
    }
    assert_eq!(root_presence_det(&phases, coset, &f).unwrap(), cofactor_det(&m, &f));
}

#[test]
fn fixed_distance_cosets_are_nondegenerate_for_l7() {
    let f = field(0x83);
    for d in 1..=3u32 {
        let coset = BitString::from_positions(7, (0..4).map(|i| d * i % 7)).unwrap();
        for taps in [vec![0, 1, 2, 3], vec![0, 2, 5, 6], vec![1, 3, 4, 6]] {
            assert!(root_presence(&PhaseSet::new(taps).unwrap(), coset, &f).unwrap());
        }
    }
}

#[test]
fn degenerate_coset_exists_at_l7() {
    // Found by scanning weight-4 classes for modulus x^7+x+1, phases {0,1,2,4}.
    let f = field(0x83);
    let phases = PhaseSet::new(vec![0, 1, 2, 4]).unwrap();
    let degenerate: Vec<u64> = (0u64..128)
        .filter(|w| w.count_ones() == 4)
        .map(|w| BitString::new(7, w).unwrap())
        .filter(|c| c.canonicalize().canonical == *c)
        .filter(|&c| !root_presence(&phases, c, &f).unwrap())
        .map(|c| c.word())
        .collect();
    assert_eq!(degenerate, DEGENERATE_L7);
    for w in DEGENERATE_L7 {
        let c = BitString::new(7, w).unwrap();
        assert_eq!(root_presence_det(&phases, c, &f).unwrap(), FieldElement::ZERO);
    }
}

const DEGENERATE_L7: [u64; 1] = [0x1d];

#[test]
fn measured_complexity_fixtures() {
    // Taps {0,1,2,3}: every class of weight <= 4 survives, 14 classes of 7.
    measured(&[0, 1, 2, 3], 98);
    // Taps {0,1,2,4}: the class of {0,2,3,4} is degenerate.
    measured(&[0, 1, 2, 4], 91);
}

fn measured(taps: &[u64], expected: usize) {
    let lfsr = LfsrSpec::with_default_seed(PolyMod::new(0x83).unwrap()).unwrap();
    let filter = FilterSpec::product(PhaseSet::new(taps.to_vec()).unwrap());
    let lc = global_lc(&lfsr, &filter).unwrap();
    assert_eq!(lc, expected);
    let bits = filter_bits(&lfsr, &filter, 2 * 127).unwrap();
    let bm = berlekamp_massey(&bits);
    assert!(bm.annihilates(&bits));
    // Nondegenerate cosets are exactly the roots of the connection polynomial.
    let f = field(0x83);
    let phases = PhaseSet::new(taps.to_vec()).unwrap();
    for w in (0u64..128).filter(|w| w.count_ones() == 4) {
        let c = BitString::new(7, w).unwrap();
        assert_eq!(root_presence(&phases, c, &f).unwrap(), minpoly_root_check(&bm, c, &f).unwrap(), "coset {c}");
    }
}
