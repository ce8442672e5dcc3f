mod common;

use goodtrace::algebraic::{
    classify_trace_1d, condition_one_1d, kronecker_irreducible, scaled_integrality,
    AlgebraicNumber1D, Irreducibility, TraceOverall,
};
use goodtrace::arith::{rat, rat_int};
use goodtrace::lattice::{
    direct_sum_order_unit_good, is_integral, pair_dual, value_group_intersection_dense,
    DirectSumInstance, EmbeddedGroup, RealBasis,
};
use goodtrace::laurent::{
    approximately_divisible, classify_rational_trace, facial_polynomial, newton_polytope,
    LaurentPoly,
};
use goodtrace::lp::convex_combination;
use goodtrace::poly::{sturm_positive_root_count, IntPolynomial};
use goodtrace::polytope::Polytope;
use goodtrace::simplexgood::{
    decompose_good_subset, flat_intersection_check, grid_corpus, same_hull, Decomposition,
    SimplexSubset,
};
use goodtrace::simplicial::{goodness_lifting_oracle, is_good, is_order_unit_good, TraceVector};
use goodtrace::zmatrix::{determinant, hermite, rank};
use goodtrace::{Int, Rat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::{brute_scaling_witness, descartes_positive_roots};

fn nonzero_lead(max_deg: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_deg).prop_flat_map(move |d| {
        (
            prop::collection::vec(-bound..=bound, d),
            (1..=bound, any::<bool>()),
        )
            .prop_map(|(mut c, (lead, neg))| {
                c.push(if neg { -lead } else { lead });
                c
            })
    })
}

fn algebraic(c: &[i64]) -> Option<AlgebraicNumber1D> {
    let p = IntPolynomial::from_i64(c).ok()?;
    if p.constant().is_zero() || kronecker_irreducible(&p, 6) != Irreducibility::Irreducible {
        return None;
    }
    AlgebraicNumber1D::nth_positive_root(p, 0).ok()
}

/// Positive coefficients at both ends, nonnegative in between, faithful.
fn positive_poly() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=4).prop_flat_map(|d| {
        (1i64..=6, prop::collection::vec(0i64..=5, d - 1), 1i64..=6).prop_map(|(a0, mid, ak)| {
            let mut c = vec![a0];
            c.extend(mid);
            c.push(ak);
            c
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sturm_agrees_with_bisection(c in nonzero_lead(6, 50)) {
        let p = IntPolynomial::from_i64(&c).unwrap();
        prop_assert_eq!(sturm_positive_root_count(&p), descartes_positive_roots(&c));
    }

    #[test]
    fn scaled_integrality_matches_search(c in nonzero_lead(4, 30), a in 1i64..=40) {
        let Some(r) = algebraic(&c) else { return Ok(()) };
        let a = Int::from(a);
        let got = scaled_integrality(&r, &a).unwrap();
        let brute = brute_scaling_witness(r.minpoly().coeffs(), &a, 30);
        prop_assert_eq!(got.holds, brute.is_some());
        prop_assert_eq!(got.witness_t, brute);
    }

    #[test]
    fn reversal_duality(pc in positive_poly(), c in nonzero_lead(3, 12)) {
        let Some(r) = algebraic(&c) else { return Ok(()) };
        let p = IntPolynomial::from_i64(&pc).unwrap();
        let Ok((forward, _)) = condition_one_1d(&p, &r) else { return Ok(()) };
        let (backward, _) = condition_one_1d(&p.reversal().unwrap(), &r.reciprocal()).unwrap();
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn good_overall_implies_sub_verdicts(pc in positive_poly(), c in nonzero_lead(3, 12)) {
        let Some(r) = algebraic(&c) else { return Ok(()) };
        let p = IntPolynomial::from_i64(&pc).unwrap();
        let Ok(v) = classify_trace_1d(&p, &r) else { return Ok(()) };
        if v.overall == TraceOverall::Good {
            prop_assert!(v.condition1 && v.really_isolated && v.approx_divisible);
        }
    }

    #[test]
    fn rational_and_algebraic_routes_agree(pc in positive_poly(), num in 1i64..=30, den in 1i64..=30) {
        let p = IntPolynomial::from_i64(&pc).unwrap();
        let q = rat(num, den);
        let r = AlgebraicNumber1D::rational(&q).unwrap();
        let Ok(one) = classify_trace_1d(&p, &r) else { return Ok(()) };
        let terms: Vec<(Vec<i64>, Int)> =
            pc.iter().enumerate().map(|(i, c)| (vec![i as i64], Int::from(*c))).collect();
        let lp = LaurentPoly::new(1, terms).unwrap();
        let many = classify_rational_trace(&lp, &[q]).unwrap();
        prop_assert_eq!(one.condition1, many.condition1);
        prop_assert_eq!(one.really_isolated, many.really_isolated);
        prop_assert_eq!(one.approx_divisible, many.approx_divisible);
        prop_assert_eq!(one.overall, many.overall);
    }

    #[test]
    fn hermite_is_a_unimodular_reduction(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 1..=4)) {
        let a: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        let herm = hermite(&a);
        let product: Vec<Vec<Int>> = herm
            .u
            .iter()
            .map(|urow| (0..3).map(|j| urow.iter().zip(&a).map(|(x, row)| x * &row[j]).sum()).collect())
            .collect();
        prop_assert_eq!(&product, &herm.h);
        prop_assert!(determinant(herm.u.clone()).abs().is_one());
        let ratrows: Vec<Vec<Rat>> =
            a.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
        prop_assert_eq!(herm.rank, rank(&ratrows));
        for (i, &p) in herm.pivots.iter().enumerate() {
            prop_assert!(herm.h[i][p].is_positive());
            for row in &herm.h[..i] {
                prop_assert!(!row[p].is_negative() && row[p] < herm.h[i][p]);
            }
        }
    }

    #[test]
    fn power_consistency(
        terms in prop::collection::btree_map((0i64..=2, 0i64..=2), 1i64..=4, 2..=5),
        k in 1u32..=3,
    ) {
        let dim_terms: Vec<(Vec<i64>, Int)> =
            terms.iter().map(|(&(i, j), &c)| (vec![i, j], Int::from(c))).collect();
        let p = LaurentPoly::new(2, dim_terms).unwrap();
        // the k-fold sumset of the support, built directly
        let mut sumset = std::collections::BTreeSet::from([vec![0i64, 0]]);
        for _ in 0..k {
            sumset = sumset
                .iter()
                .flat_map(|s| terms.keys().map(move |&(i, j)| vec![s[0] + i, s[1] + j]))
                .collect();
        }
        let support: std::collections::BTreeSet<Vec<i64>> = p.pow(k).support().into_iter().collect();
        prop_assert_eq!(support, sumset);
        if let (Ok(a), Ok(b)) = (approximately_divisible(&p), approximately_divisible(&p.pow(2))) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn facial_multiplicativity(
        g in prop::collection::btree_map((0i64..=2, 0i64..=2), -4i64..=4, 1..=5),
        h in prop::collection::btree_map((0i64..=2, 0i64..=2), -4i64..=4, 1..=5),
    ) {
        // P = 1 + x + y + xy, so Log P^k is the box [0, k]^2
        let p = LaurentPoly::from_terms(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]).unwrap();
        let k = newton_polytope(&p).unwrap();
        let lift = |m: &std::collections::BTreeMap<(i64, i64), i64>| {
            LaurentPoly::new(2, m.iter().map(|(&(i, j), &c)| (vec![i, j], Int::from(c)))).unwrap()
        };
        let (g, h) = (lift(&g), lift(&h));
        prop_assume!(!g.is_zero() && !h.is_zero());
        for face in &k.faces {
            let fg = facial_polynomial(&g, &k, face, 2).unwrap();
            let fh = facial_polynomial(&h, &k, face, 2).unwrap();
            let fgh = facial_polynomial(&g.mul(&h), &k, face, 4).unwrap();
            prop_assert_eq!(fgh, fg.mul(&fh));
        }
    }

    #[test]
    fn hull_certificates(points in prop::collection::btree_set((0i64..=5, 0i64..=5), 1..=10)) {
        let pts: Vec<Vec<i64>> = points.iter().map(|&(x, y)| vec![x, y]).collect();
        let poly = Polytope::new(pts.clone()).unwrap();
        let rats: Vec<Vec<Rat>> = pts.iter().map(|p| p.iter().map(|&x| rat_int(x)).collect()).collect();
        for i in 0..pts.len() {
            let others: Vec<&[Rat]> =
                rats.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.as_slice()).collect();
            let inside = !others.is_empty() && convex_combination(&rats[i], &others).is_some();
            prop_assert_eq!(poly.vertices.contains(&i), !inside);
        }
    }

    #[test]
    fn simplicial_invariances(v in prop::collection::vec(0i64..=9, 1..=5), num in 1i64..=7, den in 1i64..=7, shift in 0usize..5) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let base = TraceVector::from_i64(&v).unwrap();
        let mut moved: Vec<Rat> = v.iter().map(|&x| rat(x * num, den)).collect();
        moved.rotate_left(shift % v.len());
        let moved = TraceVector::new(moved).unwrap();
        prop_assert_eq!(is_order_unit_good(&base).0, is_order_unit_good(&moved).0);
        prop_assert_eq!(is_good(&base), is_good(&moved));
        if is_good(&base) {
            prop_assert!(is_order_unit_good(&base).0);
        }
    }

    #[test]
    fn goodness_matches_oracle(v in prop::collection::vec(0i64..=6, 1..=4)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let t = TraceVector::from_i64(&v).unwrap();
        prop_assert_eq!(is_good(&t), goodness_lifting_oracle(&t, 2).unwrap().liftable);
    }
}

fn radical_group(basis: &RealBasis, gens: &[Vec<i64>]) -> Option<EmbeddedGroup> {
    let gens: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| rat_int(x)).collect())
        .collect();
    EmbeddedGroup::new(basis.clone(), gens)
        .ok()
        .filter(|g| !g.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dual_witnesses_pair_integrally(
        groups in prop::collection::vec(prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=2), 2..=3),
    ) {
        let basis = RealBasis::radicals(&[2, 3]).unwrap();
        let Some(summands) = groups.iter().map(|g| radical_group(&basis, g)).collect::<Option<Vec<_>>>() else {
            return Ok(());
        };
        let Ok(d) = DirectSumInstance::new(summands) else { return Ok(()) };
        let Ok((good, cert)) = direct_sum_order_unit_good(&d) else { return Ok(()) };
        if !good {
            let dual = cert.density.dual.expect("non-dense verdicts carry a dual");
            prop_assert!(dual.iter().any(|e| !e.is_zero()));
            for row in &cert.kernel.generators {
                prop_assert!(is_integral(&pair_dual(&dual, row, &basis).unwrap()));
            }
        }
    }

    #[test]
    fn two_summands_match_intersection_density(
        g in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=3),
        h in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=3),
    ) {
        let basis = RealBasis::radicals(&[2, 3]).unwrap();
        let (Some(g), Some(h)) = (radical_group(&basis, &g), radical_group(&basis, &h)) else { return Ok(()) };
        let d = DirectSumInstance::new(vec![g.clone(), h.clone()]).unwrap();
        let (good, _) = direct_sum_order_unit_good(&d).unwrap();
        prop_assert_eq!(good, value_group_intersection_dense(&g, &h).unwrap());
    }
}

#[test]
fn good_subsets_satisfy_the_structural_properties() {
    for s in grid_corpus(4) {
        match decompose_good_subset(&s).unwrap() {
            Decomposition::Good(d) => {
                assert!(flat_intersection_check(&s).unwrap(), "{s:?}");
                let gens = d.generators(s.n());
                let rows: Vec<Vec<Rat>> = gens
                    .iter()
                    .map(|p| {
                        p.iter()
                            .cloned()
                            .chain(std::iter::once(Rat::one()))
                            .collect()
                    })
                    .collect();
                assert_eq!(rank(&rows), gens.len(), "{s:?} is not a simplex");
                assert!(same_hull(&gens, s.points()), "{s:?}");
                for b in &d.blocks {
                    assert!(b.support.len() >= 2);
                    assert!(b.support.iter().all(|&i| b.point[i].is_positive()));
                }
            }
            Decomposition::Overlap {
                first,
                second,
                shared,
            } => {
                let (a, b) = (&s.points()[first], &s.points()[second]);
                assert!(shared
                    .iter()
                    .all(|&i| a[i].is_positive() && b[i].is_positive()));
            }
        }
    }
}

#[test]
fn flat_condition_does_not_imply_goodness() {
    let s = SimplexSubset::new(
        3,
        vec![
            vec![rat(1, 2), rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(1, 2), rat(1, 2)],
        ],
    )
    .unwrap();
    assert!(flat_intersection_check(&s).unwrap());
    assert!(!decompose_good_subset(&s).unwrap().is_good());
    // an interior segment whose span leaves J inside K
    let t = SimplexSubset::new(
        3,
        vec![
            vec![rat(1, 2), rat(1, 4), rat(1, 4)],
            vec![rat(1, 4), rat(1, 2), rat(1, 4)],
        ],
    )
    .unwrap();
    assert!(!flat_intersection_check(&t).unwrap());
}

#[test]
fn kronecker_finds_planted_factors() {
    let a = IntPolynomial::from_i64(&[1, 1, 0, 1]).unwrap();
    let b = IntPolynomial::from_i64(&[-2, 0, 1, 1]).unwrap();
    // b = (x - 1)(x^2 + 2x + 2); rational roots are found first
    assert_eq!(
        kronecker_irreducible(&a.mul(&b), 6),
        Irreducibility::Reducible(IntPolynomial::from_i64(&[-1, 1]).unwrap())
    );
    let c = IntPolynomial::from_i64(&[2, 2, 1]).unwrap();
    assert!(matches!(
        kronecker_irreducible(&a.mul(&c), 6),
        Irreducibility::Reducible(_)
    ));
    assert_eq!(kronecker_irreducible(&a, 6), Irreducibility::Irreducible);
}
