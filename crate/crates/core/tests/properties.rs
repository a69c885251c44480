mod common;

use latglue::genus::{legendre, negate_symbol, oddity_formula_check, p_excess, padic_symbol};
use latglue::gluing::{anti_isometry, glue};
use latglue::lattice::Lattice;
use latglue::matrix::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(n: usize, entries: &[i64]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(entries[i * n + j])).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

fn symmetric(n: usize, entries: &[i64]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(entries[i.min(j) * n + i.max(j)]))
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

fn square(max_dim: usize, bound: i64) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1..=max_dim).prop_flat_map(move |n| (Just(n), prop::collection::vec(-bound..=bound, n * n)))
}

fn lattice(max_dim: usize, bound: i64) -> impl Strategy<Value = Lattice> {
    square(max_dim, bound).prop_filter_map("singular", |(n, e)| Lattice::new(symmetric(n, &e)).ok())
}

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for (j, a) in m[0].iter().enumerate() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = a * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Characteristic polynomial coefficients, leading first, by Faddeev-LeVerrier.
fn char_poly(a: &IntMatrix) -> Vec<BigRational> {
    let n = a.rows();
    let a = a.to_rat();
    let mut coeffs = vec![BigRational::one()];
    let mut m = latglue::matrix::RatMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = &a * &m;
        for i in 0..n {
            let c = coeffs.last().unwrap().clone();
            next[(i, i)] += c;
        }
        m = next;
        let am = &a * &m;
        let trace: BigRational = (0..n).map(|i| am[(i, i)].clone()).sum();
        coeffs.push(-trace / BigRational::from_integer(BigInt::from(k as i64)));
    }
    coeffs
}

fn sign_changes(c: &[BigRational]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// For a real-rooted polynomial with no zero root, Descartes' rule is exact.
fn signature_oracle(a: &IntMatrix) -> (usize, usize) {
    let p = char_poly(a);
    let pos = sign_changes(&p);
    let flipped: Vec<BigRational> = p
        .iter()
        .enumerate()
        .map(|(i, c)| if (p.len() - 1 - i) % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    (pos, sign_changes(&flipped))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn det_matches_cofactor_expansion((n, e) in square(5, 12)) {
        let m = matrix(n, &e);
        prop_assert_eq!(m.det(), cofactor_det(&m.to_rows()));
        prop_assert_eq!(m.to_rat().det(), BigRational::from_integer(cofactor_det(&m.to_rows())));
    }

    #[test]
    fn snf_invariants((rows, cols, e) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c)))) {
        let data: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        let m = IntMatrix::new(rows, cols, data).unwrap();
        let s = m.snf();
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.det().abs().is_one() && s.v.det().abs().is_one());
        let diag = s.diagonal();
        for i in 0..rows {
            for j in 0..cols {
                prop_assert!(i == j || s.d[(i, j)].is_zero());
            }
        }
        for i in 0..rows.min(cols) {
            if i + 1 < diag.len() && !diag[i + 1].is_zero() {
                prop_assert!(!diag[i].is_zero());
                prop_assert!((&diag[i + 1] % &diag[i]).is_zero());
            }
            prop_assert!(!diag[i].is_negative());
        }
        prop_assert_eq!(diag.iter().filter(|x| !x.is_zero()).count(), m.rank());
    }

    #[test]
    fn hnf_invariants((rows, cols, e) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c)))) {
        let data: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        let m = IntMatrix::new(rows, cols, data).unwrap();
        let (h, u) = m.hnf();
        prop_assert_eq!(&u * &m, h.clone());
        prop_assert!(u.det().abs().is_one());
        let mut last_pivot: Option<usize> = None;
        for i in 0..rows {
            match (0..cols).find(|&j| !h[(i, j)].is_zero()) {
                Some(j) => {
                    prop_assert!(last_pivot.map_or(true, |p| j > p), "pivots move right");
                    prop_assert!(h[(i, j)].is_positive());
                    for above in 0..i {
                        prop_assert!(!h[(above, j)].is_negative() && h[(above, j)] < h[(i, j)]);
                    }
                    last_pivot = Some(j);
                }
                None => {
                    for below in i..rows {
                        prop_assert!(h.row(below).iter().all(Zero::is_zero), "zero rows last");
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn signature_matches_descartes(l in lattice(5, 9)) {
        prop_assert_eq!(l.signature(), signature_oracle(l.gram()));
    }

    #[test]
    fn signature_congruence_invariant(l in lattice(5, 9), e in prop::collection::vec(-3i64..=3, 25)) {
        let n = l.dim();
        let p = matrix(n, &e[..n * n]);
        prop_assume!(!p.det().is_zero());
        let congruent = Lattice::new(&(&p * l.gram()) * &p.transpose()).unwrap();
        prop_assert_eq!(congruent.signature(), l.signature());
    }

    #[test]
    fn determinant_laws(l in lattice(5, 9), e in prop::collection::vec(-3i64..=3, 25)) {
        let n = l.dim();
        prop_assert_eq!(l.discriminant_group().order(), l.det().abs());
        let rows = matrix(n, &e[..n * n]);
        let d = rows.det();
        prop_assume!(!d.is_zero());
        let (sub, index) = l.sublattice(&rows).unwrap();
        prop_assert_eq!(index, d.abs());
        prop_assert_eq!(sub.det(), &(&d * &d * l.det()));
    }

    #[test]
    fn oddity_formula(l in lattice(6, 10)) {
        let c = oddity_formula_check(&l);
        prop_assert!(c.holds(), "{:?} for {:?}", c, l.gram().to_rows());
    }

    #[test]
    fn negation_commutes_with_symbols(l in lattice(5, 9)) {
        let neg = l.negate();
        for p in latglue::arith::relevant_primes(l.det()) {
            let direct = padic_symbol(&neg, p).compartment_normalized();
            let via = negate_symbol(&padic_symbol(&l, p)).compartment_normalized();
            prop_assert_eq!(direct, via, "p = {}", p);
        }
    }

    #[test]
    fn negation_changes_excess_by_odd_blocks(l in lattice(5, 9)) {
        for p in latglue::arith::relevant_primes(l.det()).into_iter().filter(|&p| p != 2) {
            let sym = padic_symbol(&l, p);
            let before = p_excess(&sym).unwrap();
            let after = p_excess(&padic_symbol(&l.negate(), p)).unwrap();
            let minus_one_square = legendre(&BigInt::from(-1), p).unwrap() == 1;
            let flipped = sym.blocks.iter().filter(|b| b.exponent % 2 == 1 && b.dim % 2 == 1).count();
            let expected = if minus_one_square { before } else { (before + 4 * (flipped % 2) as u8) % 8 };
            prop_assert_eq!(after, expected, "p = {}", p);
        }
    }

    #[test]
    fn lattice_glues_to_its_negative(l in lattice(3, 6)) {
        prop_assume!(l.det().abs() <= BigInt::from(60));
        let neg = l.negate();
        let (gl, gk) = (l.discriminant_group(), neg.discriminant_group());
        let (fl, fk) = (l.discriminant_form(&gl), neg.discriminant_form(&gk));
        let phi = anti_isometry(&gl, &fl, &gk, &fk).unwrap();
        let e = glue(&l, &neg, &phi).unwrap();
        prop_assert!(e.glued.is_unimodular());
        prop_assert_eq!(e.glue_index, l.det().abs());
    }
}

#[test]
fn seeded_corpus_satisfies_oddity_formula() {
    for l in common::random_corpus(11, 120) {
        assert!(oddity_formula_check(&l).holds(), "{:?}", l.gram().to_rows());
    }
}
