use proptest::prelude::*;

use spectral_higgs::ramification::{decompose, pull_back_scalar};
use spectral_higgs::serial::{series_from_json, series_to_json};
use spectral_higgs::spectral::{matrix_char_coefficients, AlgebraElement, SeriesMatrix, SpectralPolynomial};
use spectral_higgs::tau::tau_from_basis;
use spectral_higgs::{LaurentSeries, EXACT};

fn series(order: std::ops::RangeInclusive<i64>, prec: i64) -> impl Strategy<Value = LaurentSeries> {
    (order, prop::collection::vec(-4i64..=4, 0..6)).prop_map(move |(o, c)| LaurentSeries::from_ints(o, &c, prec))
}

fn exact_poly() -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec(-3i64..=3, 1..4).prop_map(|c| LaurentSeries::from_ints(0, &c, EXACT))
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_laws(a in series(-3..=3, 10), b in series(-3..=3, 12), c in series(-2..=4, 9)) {
        prop_assert!((&a + &b).agrees_with(&(&b + &a)));
        prop_assert!((&a * &b).agrees_with(&(&b * &a)));
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn units_invert(a in series(-3..=3, 10)) {
        prop_assume!(!a.is_zero());
        let inv = a.invert().unwrap();
        let one = &a * &inv;
        prop_assert!(one.agrees_with(&LaurentSeries::one(EXACT)));
        prop_assert!(one.precision() > 0);
    }

    #[test]
    fn json_round_trip(a in series(-5..=5, 14)) {
        let back = series_from_json(&series_to_json(&a)).unwrap();
        prop_assert!(back.agrees_with(&a));
        prop_assert_eq!(back.precision(), a.precision());
    }

    #[test]
    fn pairing_is_symmetric_and_t_self_adjoint(
        a0 in exact_poly(), a1 in exact_poly(),
        x in prop::collection::vec(series(-3..=2, EXACT), 2),
        y in prop::collection::vec(series(-3..=2, EXACT), 2),
    ) {
        let p = SpectralPolynomial::new(vec![a0, a1]).unwrap();
        let (x, y) = (AlgebraElement::new(x), AlgebraElement::new(y));
        prop_assert_eq!(p.trace_pairing(&x, &y).unwrap(), p.trace_pairing(&y, &x).unwrap());
        let tx = p.mul_t(&x).unwrap();
        let ty = p.mul_t(&y).unwrap();
        prop_assert_eq!(p.trace_pairing(&tx, &y).unwrap(), p.trace_pairing(&x, &ty).unwrap());
    }

    #[test]
    fn pull_back_is_a_ring_map(
        unit in prop::collection::vec(-2i64..=2, 0..3),
        f in series(-2..=2, 8),
        g in series(-2..=2, 8),
    ) {
        // T² − z(1 + …): Eisenstein for every tail
        let mut c = vec![0i64, -1];
        c.extend(unit.iter().map(|u| -u));
        let p = SpectralPolynomial::from_monic(vec![LaurentSeries::from_ints(0, &c, EXACT), LaurentSeries::zero(EXACT)]).unwrap();
        let dec = decompose(&p).unwrap();
        let comp = &dec.components[0];
        let pb = |s: &LaurentSeries| pull_back_scalar(s, comp).unwrap();
        prop_assert!(pb(&(&f * &g)).agrees_with(&(&pb(&f) * &pb(&g))));
        prop_assert!(pb(&(&f + &g)).agrees_with(&(&pb(&f) + &pb(&g))));
    }

    #[test]
    fn char_coefficients_survive_conjugation(
        entries in prop::collection::vec(exact_poly(), 4),
        c in exact_poly(),
        upper in any::<bool>(),
    ) {
        let a = SeriesMatrix::from_rows(vec![entries[..2].to_vec(), entries[2..].to_vec()]).unwrap();
        let (i, j) = if upper { (0, 1) } else { (1, 0) };
        let mut e = SeriesMatrix::identity(2);
        e.set(i, j, c.clone());
        let mut e_inv = SeriesMatrix::identity(2);
        e_inv.set(i, j, -&c);
        let conj = e.mul(&a).unwrap().mul(&e_inv).unwrap();
        let (p, q) = (matrix_char_coefficients(&a).unwrap(), matrix_char_coefficients(&conj).unwrap());
        for (x, y) in p.coefficients().iter().zip(q.coefficients()) {
            prop_assert!(x.agrees_with(y));
        }
    }

    #[test]
    fn tau_is_symmetric_in_each_branch(
        basis in prop::collection::vec(series(0..=2, 8), 3),
    ) {
        let basis: Vec<Vec<LaurentSeries>> = basis.into_iter().map(|f| vec![f]).collect();
        let tau = tau_from_basis(&basis, 3, 6).unwrap();
        prop_assert_eq!(tau.swap(0, 1), tau.clone());
        prop_assert_eq!(tau.swap(1, 2), tau);
    }
}
