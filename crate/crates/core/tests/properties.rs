use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use covstat::asympt::LaurentSeries;
use covstat::expect::{build_frame, cyclic_core, e_emb_exact, xi_exact};
use covstat::modular::{crt, from_rational, rational_reconstruct, PRIMES};
use covstat::oracle::{cover_of, enum_homs};
use covstat::symrep::partitions;
use covstat::tiled::{canonical_form, octagon_disc, point, single_edge};
use covstat::words::{are_conjugate, dehn_reduce, is_trivial, max_root, Letter};
use covstat::{CyclicWord, TiledSurface, Word};

fn letter() -> impl Strategy<Value = Letter> {
    (0u8..4, any::<bool>()).prop_map(|(g, p)| Letter::new(g, p))
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 1..=max).prop_map(Word::new)
}

fn nontrivial(max: usize) -> impl Strategy<Value = Word> {
    word(max).prop_filter("trivial in the surface group", |w| !is_trivial(w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_times_inverse_is_trivial(w in word(10)) {
        prop_assert!(is_trivial(&w.concat(&w.inverse())));
    }

    #[test]
    fn conjugates_are_recognised(w in word(8), u in word(4)) {
        let c = u.concat(&w).concat(&u.inverse());
        prop_assert!(are_conjugate(&w, &c));
    }

    #[test]
    fn dehn_reduction_is_idempotent(w in word(12)) {
        let r = dehn_reduce(&CyclicWord::from_word(&w));
        prop_assert_eq!(dehn_reduce(&r), r.clone());
        prop_assert!(r.len() <= w.len());
    }

    #[test]
    fn roots_multiply(w in nontrivial(4), k in 1usize..4) {
        let r = max_root(&w).unwrap();
        let p = max_root(&w.pow(k)).unwrap();
        prop_assert_eq!(p.exponent, k * r.exponent);
    }

    #[test]
    fn conjugate_partition_is_an_involution(n in 0usize..14, pick in any::<prop::sample::Index>()) {
        let ps = partitions(n);
        let p = pick.get(&ps);
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), n);
    }

    #[test]
    fn series_inverse(cs in prop::collection::vec(-5i64..6, 1..6), order in 1i64..8) {
        let mut coeffs: Vec<BigRational> = cs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        coeffs[0] = BigRational::from_integer(BigInt::from(cs[0].abs() + 1));
        let s = LaurentSeries::new(0, coeffs, order);
        let prod = s.mul(&s.invert(order).unwrap()).truncate(order);
        prop_assert_eq!(prod.terms(), LaurentSeries::one(order).terms());
    }

    #[test]
    fn rational_reconstruction_round_trip(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000) {
        let x = BigRational::new(BigInt::from(a), BigInt::from(b));
        let primes = &PRIMES[..3];
        let residues: Vec<u64> = primes.iter().map(|&p| from_rational(&x, p)).collect();
        let (v, m) = crt(&residues, primes);
        prop_assert_eq!(rational_reconstruct(&v, &m), Some(x));
    }

    #[test]
    fn covers_are_closed_surfaces(pick in any::<prop::sample::Index>()) {
        let homs = enum_homs(3).unwrap();
        let y = cover_of(pick.get(&homs)).unwrap();
        prop_assert!(y.validate().is_ok());
        prop_assert_eq!(y.euler_char(), -2 * 3);
        prop_assert_eq!(y.boundary_length(), 0);
    }

    #[test]
    fn export_import_preserves_the_surface(w in nontrivial(5)) {
        let y = cyclic_core(&w).unwrap();
        let z = TiledSurface::from_json(&y.to_json()).unwrap();
        prop_assert_eq!(canonical_form(&y), canonical_form(&z));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn representation_sum_ignores_the_frame(w in nontrivial(3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let y = cyclic_core(&w).unwrap();
        prop_assume!(y.vertex_count() <= 6);
        let n = y.vertex_count() + 2;
        let a = xi_exact(&build_frame(&y, s1).unwrap(), n).unwrap();
        let b = xi_exact(&build_frame(&y, s2).unwrap(), n).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn embedding_counts_are_nonnegative(k in 0usize..4, n in 1usize..8) {
        let y = match k {
            0 => point(),
            1 => single_edge(2),
            2 => octagon_disc(),
            _ => cyclic_core(&Word::new(vec![Letter::new(0, true)])).unwrap(),
        };
        prop_assert!(e_emb_exact(&y, n).unwrap() >= -1e-9);
    }
}
