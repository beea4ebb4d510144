use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::C64;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn idx(s: &str) -> BasisIndex {
    BasisIndex::from_str_digits(s).unwrap()
}

fn eq4() -> SparseState {
    SparseState::ket(3, 3, &["00", "01", "02"]).unwrap()
}

fn eq5() -> SparseState {
    SparseState::ket(
        3,
        9,
        &[
            "0000", "0011", "0022", "0100", "0111", "0122", "0200", "0211", "0222",
        ],
    )
    .unwrap()
}

fn psi(sign: char) -> SparseState {
    let second = if sign == '+' { "+10" } else { "-10" };
    SparseState::ket(2, 2, &["01", second]).unwrap()
}

#[test]
fn tensor_builds_eq4_from_zero_and_uniform_qutrit() {
    let zero = SparseState::ket(3, 1, &["0"]).unwrap();
    let uniform = SparseState::ket(3, 3, &["0", "1", "2"]).unwrap();
    assert_eq!(zero.tensor(&uniform).unwrap(), eq4());
}

#[test]
fn tensor_with_zero_ket_appends_digit() {
    let psi = psi('-');
    let out = psi
        .tensor(&SparseState::ket(2, 1, &["0"]).unwrap())
        .unwrap();
    assert_eq!(out, SparseState::ket(2, 2, &["010", "-100"]).unwrap());
}

#[test]
fn tensor_builds_eq5() {
    let diag = SparseState::ket(3, 3, &["00", "11", "22"]).unwrap();
    let out = eq4().tensor(&diag).unwrap();
    assert_eq!(out, eq5());
    assert_eq!(out.support_size(), 9);
}

#[test]
fn tensor_rejects_mixed_local_dim() {
    let err = eq4().tensor(&psi('+')).unwrap_err();
    assert!(matches!(err, Error::LocalDimMismatch(3, 2)));
}

#[test]
fn tensor_promotes_phase_order() {
    let a = SparseState::from_entries(2, 1, 4, [(idx("1"), Amplitude::new(1, 4, []))]).unwrap();
    let b = SparseState::from_entries(2, 1, 6, [(idx("0"), Amplitude::new(3, 6, []))]).unwrap();
    let t = a.tensor(&b).unwrap();
    assert_eq!(t.phase_order(), 12);
    // i * (-1)
    assert_eq!(t.amplitude(&idx("10")).unwrap().phase(), 9);
}

#[test]
fn superpose_reproduces_eq7_with_cancellation() {
    let h = Amplitude::inv_sqrt(2);
    let a = psi('+').tensor(&psi('-')).unwrap().scaled(&h);
    let b = psi('-').tensor(&psi('+')).unwrap().scaled(&h);
    let out = superpose(&[(0, &a), (0, &b)]).unwrap();
    assert_eq!(out, SparseState::ket(2, 2, &["0101", "-1010"]).unwrap());
}

#[test]
fn superpose_opposite_terms_cancel() {
    let s = eq5();
    let out = superpose(&[(0, &s), (4, &s)]).unwrap();
    assert!(out.is_zero());
    assert_eq!(out.norm_squared(), Rational::zero());
}

#[test]
fn superpose_disjoint_supports_concatenate() {
    let a = SparseState::basis(2, idx("00")).unwrap();
    let b = SparseState::basis(2, idx("11")).unwrap();
    let h = Amplitude::inv_sqrt(2);
    let out = superpose(&[(0, &a.scaled(&h)), (0, &b.scaled(&h))]).unwrap();
    assert_eq!(out, SparseState::ket(2, 2, &["00", "11"]).unwrap());
}

#[test]
fn superpose_equal_terms_double() {
    let a = SparseState::ket(2, 4, &["00"]).unwrap();
    let out = superpose(&[(0, &a), (0, &a)]).unwrap();
    assert!(out.amplitude(&idx("00")).unwrap().is_unit_magnitude());
    let three = superpose(&[(0, &a), (0, &a), (0, &a)]).unwrap();
    assert_eq!(three.norm_squared(), rat(9, 4));
}

#[test]
fn superpose_rejects_unrelated_collision() {
    let a = SparseState::ket(2, 1, &["0"]).unwrap();
    let b = SparseState::ket(2, 2, &["0"]).unwrap();
    assert!(matches!(
        superpose(&[(0, &a), (0, &b)]),
        Err(Error::RingOverflow)
    ));
    // e^{iπ/4} relative phase
    assert!(matches!(
        superpose(&[(0, &a), (1, &a)]),
        Err(Error::RingOverflow)
    ));
}

#[test]
fn superpose_term_phase_uses_term_order() {
    let a = SparseState::from_entries(2, 1, 4, [(idx("0"), Amplitude::one())]).unwrap();
    let b = SparseState::from_entries(2, 1, 8, [(idx("1"), Amplitude::one())]).unwrap();
    // phase 1 of order 4 is i
    let out = superpose(&[(1, &a), (0, &b)]).unwrap();
    assert_eq!(out.phase_order(), 8);
    assert_eq!(out.amplitude(&idx("0")).unwrap().phase(), 2);
}

#[test]
fn norm_squared_examples() {
    assert_eq!(eq5().norm_squared(), Rational::one());
    assert_eq!(
        SparseState::empty(2, 3, 8).unwrap().norm_squared(),
        Rational::zero()
    );
    let nine = SparseState::basis(2, BasisIndex::zeros(9)).unwrap();
    assert_eq!(nine.norm_squared(), Rational::one());
}

#[test]
fn outcome_probability_examples() {
    assert_eq!(eq5().outcome_probability(&idx("0011")).unwrap(), rat(1, 9));
    assert_eq!(
        eq5().outcome_probability(&idx("0001")).unwrap(),
        Rational::zero()
    );
    let s = SparseState::basis(2, idx("000")).unwrap();
    assert_eq!(s.outcome_probability(&idx("000")).unwrap(), Rational::one());
    assert!(s.outcome_probability(&idx("00")).is_err());
}

#[test]
fn inner_product_examples() {
    let ip: C64 = psi('+').inner_product(&psi('-')).unwrap();
    assert!(ip.norm() < 1e-12);
    let ip: C64 = eq5().inner_product(&eq5()).unwrap();
    assert!((ip - C64::new(1.0, 0.0)).norm() < 1e-12);
    let eq7 = SparseState::ket(2, 2, &["0101", "-1010"]).unwrap();
    let eq8 = SparseState::ket(2, 2, &["1001", "-0110"]).unwrap();
    let ip: C64 = eq7.inner_product(&eq8).unwrap();
    assert!(ip.norm() < 1e-12);
    let ip32: crate::C32 = eq7.inner_product(&eq7).unwrap();
    assert!((ip32.re - 1.0).abs() < 1e-6);
}

#[test]
fn inner_product_is_conjugate_linear_in_first_argument() {
    let a = SparseState::from_entries(2, 1, 4, [(idx("0"), Amplitude::new(1, 4, []))]).unwrap();
    let b = SparseState::basis(2, idx("0")).unwrap();
    let ab: C64 = a.inner_product(&b).unwrap();
    let ba: C64 = b.inner_product(&a).unwrap();
    assert!((ab - C64::new(0.0, -1.0)).norm() < 1e-15);
    assert!((ba - C64::new(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn bit_flip_examples() {
    let s = SparseState::basis(2, idx("000")).unwrap();
    assert_eq!(
        s.apply_bit_flip(1).unwrap(),
        SparseState::basis(2, idx("010")).unwrap()
    );
    let ghz = SparseState::ket(2, 2, &["000", "111"]).unwrap();
    assert_eq!(
        ghz.apply_bit_flip(0).unwrap(),
        SparseState::ket(2, 2, &["100", "011"]).unwrap()
    );
    assert_eq!(
        ghz.apply_bit_flip(2).unwrap().apply_bit_flip(2).unwrap(),
        ghz
    );
    assert!(matches!(
        ghz.apply_bit_flip(3),
        Err(Error::PositionOutOfRange { .. })
    ));
    assert!(matches!(eq4().apply_bit_flip(0), Err(Error::NotQubit(3))));
}

#[test]
fn sigma_z_examples() {
    let one = SparseState::basis(2, idx("1")).unwrap();
    assert_eq!(
        one.apply_sigma_z(0).unwrap(),
        SparseState::ket(2, 1, &["-1"]).unwrap()
    );
    let zero = SparseState::basis(2, idx("0")).unwrap();
    assert_eq!(zero.apply_sigma_z(0).unwrap(), zero);
    assert_eq!(
        SparseState::ket(2, 2, &["01", "10"])
            .unwrap()
            .apply_sigma_z(0)
            .unwrap(),
        psi('-')
    );
    assert!(one.apply_sigma_z(1).is_err());
}

#[test]
fn to_dense_examples() {
    let v = SparseState::basis(2, idx("01"))
        .unwrap()
        .to_dense::<f64>()
        .unwrap();
    assert_eq!(v, vec![C64::zero(), C64::one(), C64::zero(), C64::zero()]);
    let v = psi('-').to_dense::<f64>().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((v[1].re - h).abs() < 1e-15 && (v[2].re + h).abs() < 1e-15);
    assert_eq!(v[0], C64::zero());
    let eq17 = SparseState::ket(2, 4, &["0000", "0011", "1100", "-1111"]).unwrap();
    let v = eq17.to_dense::<f64>().unwrap();
    assert_eq!(v.len(), 16);
    for (i, x) in v.iter().enumerate() {
        let want = match i {
            0 | 3 | 12 => 0.5,
            15 => -0.5,
            _ => 0.0,
        };
        assert!((x.re - want).abs() < 1e-15 && x.im == 0.0);
    }
}

#[test]
fn to_dense_guard() {
    let big = SparseState::basis(2, BasisIndex::zeros(15)).unwrap();
    assert!(matches!(big.to_dense::<f64>(), Err(Error::Guard(_))));
    let edge = SparseState::basis(2, BasisIndex::zeros(14)).unwrap();
    assert_eq!(edge.to_dense::<f32>().unwrap().len(), 1 << 14);
}

#[test]
fn schmidt_rank_examples() {
    assert_eq!(eq5().schmidt_rank::<f64>(2).unwrap(), 1);
    let eq7 = SparseState::ket(2, 2, &["0101", "-1010"]).unwrap();
    assert_eq!(eq7.schmidt_rank::<f64>(2).unwrap(), 2);
    assert_eq!(eq7.schmidt_rank::<f32>(2).unwrap(), 2);
    let s = SparseState::basis(2, idx("00")).unwrap();
    assert_eq!(s.schmidt_rank::<f64>(1).unwrap(), 1);
    assert!(s.schmidt_rank::<f64>(0).is_err());
    assert!(s.schmidt_rank::<f64>(2).is_err());
}

#[test]
fn schmidt_rank_guard() {
    let s = SparseState::basis(2, BasisIndex::zeros(26)).unwrap();
    assert!(matches!(s.schmidt_rank::<f64>(13), Err(Error::Guard(_))));
    assert!(s
        .schmidt_rank::<f64>(12)
        .unwrap_err()
        .to_string()
        .contains("guard"));
    let s = SparseState::basis(2, BasisIndex::zeros(24)).unwrap();
    assert_eq!(s.schmidt_rank::<f64>(12).unwrap(), 1);
}

#[test]
fn ket_helper_validates() {
    assert!(SparseState::ket(2, 1, &["2"]).is_err());
    assert!(SparseState::ket(2, 2, &["01", "01"]).is_err());
}

fn arb_qubit_state() -> impl Strategy<Value = SparseState> {
    (1usize..=5).prop_flat_map(arb_state_on)
}

fn arb_state_on(q: usize) -> impl Strategy<Value = SparseState> {
    proptest::collection::btree_map(
        proptest::collection::vec(0u32..2, q),
        (0u32..8, 0i32..4),
        1..=(1usize << q),
    )
    .prop_map(move |m| {
        SparseState::from_entries(
            2,
            q,
            8,
            m.into_iter()
                .map(|(d, (ph, e))| (BasisIndex::new(d), Amplitude::new(ph, 8, [(2, e)]))),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn flips_are_norm_preserving_involutions(s in arb_qubit_state(), p in 0usize..5) {
        let p = p % s.num_qudits();
        let x = s.apply_bit_flip(p).unwrap();
        prop_assert_eq!(x.norm_squared(), s.norm_squared());
        prop_assert_eq!(&x.apply_bit_flip(p).unwrap(), &s);
        let z = s.apply_sigma_z(p).unwrap();
        prop_assert_eq!(z.norm_squared(), s.norm_squared());
        prop_assert_eq!(&z.apply_sigma_z(p).unwrap(), &s);
    }

    #[test]
    fn tensor_multiplies_entry_counts_and_norms(a in arb_qubit_state(), b in arb_qubit_state()) {
        let t = a.tensor(&b).unwrap();
        prop_assert_eq!(t.support_size(), a.support_size() * b.support_size());
        prop_assert_eq!(t.num_qudits(), a.num_qudits() + b.num_qudits());
        prop_assert_eq!(t.norm_squared(), a.norm_squared() * b.norm_squared());
    }

    #[test]
    fn dense_inner_product_agrees_with_sparse(
        (a, b) in (1usize..=5).prop_flat_map(|q| (arb_state_on(q), arb_state_on(q)))
    ) {
        let sparse: C64 = a.inner_product(&b).unwrap();
        let dense = dense_inner(&a.to_dense::<f64>().unwrap(), &b.to_dense::<f64>().unwrap());
        prop_assert!((sparse - dense).norm() < 1e-10);
    }

    #[test]
    fn schmidt_rank_is_symmetric_under_reversal(s in arb_qubit_state()) {
        let q = s.num_qudits();
        prop_assume!(q >= 2);
        let rev = s.map_indices(q, |k| BasisIndex::new(k.digits().iter().rev().copied().collect())).unwrap();
        for k in 1..q {
            prop_assert_eq!(s.schmidt_rank::<f64>(k).unwrap(), rev.schmidt_rank::<f64>(q - k).unwrap());
        }
    }

    #[test]
    fn disjoint_superpose_adds_norms(a in arb_qubit_state()) {
        let q = a.num_qudits();
        let b = a.map_indices(q + 1, |k| BasisIndex::new([vec![1], k.digits().to_vec()].concat())).unwrap();
        let a = a.map_indices(q + 1, |k| BasisIndex::new([vec![0], k.digits().to_vec()].concat())).unwrap();
        let s = superpose(&[(0, &a), (3, &b)]).unwrap();
        prop_assert_eq!(s.norm_squared(), a.norm_squared() + b.norm_squared());
    }
}
