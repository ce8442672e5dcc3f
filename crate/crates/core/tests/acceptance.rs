//! Acceptance suite: seven criteria, each with a pinned wall-clock limit.
//! Prints one `[PASS]`/`[FAIL]` line per criterion and exits nonzero on any
//! failure. All comparisons are exact.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use goodtrace::algebraic::{
    classify_trace_1d, condition_one_1d, kronecker_irreducible, scaled_integrality,
    AlgebraicNumber1D, Irreducibility, TraceOverall,
};
use goodtrace::arith::{int, rat_int};
use goodtrace::lattice::{
    direct_sum_order_unit_good, intersect, is_integral, pair_dual, DirectSumInstance,
    EmbeddedGroup, RealBasis,
};
use goodtrace::laurent::{condition_one_rational, fitting_check, LaurentPoly};
use goodtrace::par::{map_collect, Execution};
use goodtrace::poly::{sturm_positive_root_count, IntPolynomial};
use goodtrace::polytope::combinations;
use goodtrace::simplexgood::{
    adversarial_family, decompose_good_subset, first_unliftable, grid_corpus, random_pairs,
    sample_corpus, SimplexSubset,
};
use goodtrace::simplicial::{is_order_unit_good, lifting_oracle_with, TraceVector};
use goodtrace::{Int, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_scaling_witness, closed_form_235, descartes_positive_roots, mul2, poly2, pow2};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c).unwrap()
}

fn laurent(dim: usize, t: &[(&[i64], i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(dim, t).unwrap()
}

fn tv(v: &[i64]) -> TraceVector {
    TraceVector::from_i64(v).unwrap()
}

fn criterion_1() -> Outcome {
    for v in [&[1, 2, 4, 8, 16][..], &[1, 1, 1, 4]] {
        ensure!(
            is_order_unit_good(&tv(v)).0,
            "{v:?} should be order unit good"
        );
    }
    for v in [&[1, 3][..], &[1, 1, 1, 5]] {
        ensure!(
            !is_order_unit_good(&tv(v)).0,
            "{v:?} should not be order unit good"
        );
    }
    // every nonzero vector with entries 0..=10 and length 1..=5
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    for k in 1..=5u32 {
        for code in 0..11u64.pow(k) {
            let v: Vec<i64> = (0..k)
                .map(|i| ((code / 11u64.pow(i)) % 11) as i64)
                .collect();
            if v.iter().any(|&x| x != 0) {
                vectors.push(v);
            }
        }
    }
    let disagreements = map_collect(Execution::Parallel, vectors.len(), |i| {
        let v = tv(&vectors[i]);
        let fast = is_order_unit_good(&v).0;
        let oracle = lifting_oracle_with(&v, 1, 3, Execution::Sequential)
            .unwrap()
            .liftable;
        (fast != oracle).then(|| vectors[i].clone())
    });
    let bad: Vec<Vec<i64>> = disagreements.into_iter().flatten().collect();
    ensure!(
        bad.is_empty(),
        "criterion and oracle disagree on {} vectors, first {:?}",
        bad.len(),
        bad[0]
    );
    Ok(format!(
        "{} vectors agree with the bound-3 oracle",
        vectors.len()
    ))
}

fn criterion_2() -> Outcome {
    let p = poly(&[1, 1]);
    for m in 1..=50 {
        let r = AlgebraicNumber1D::rational(&rat_int(m)).unwrap();
        let holds = condition_one_1d(&p, &r).unwrap().0;
        ensure!(holds == (m == 1), "condition (1) at r = {m} gave {holds}");
    }
    let phi = AlgebraicNumber1D::unique_positive(poly(&[-1, -1, 1])).unwrap();
    ensure!(
        condition_one_1d(&p, &phi).unwrap().0,
        "golden ratio should satisfy condition (1)"
    );
    for (r, cond) in [
        (AlgebraicNumber1D::rational(&rat_int(1)).unwrap(), true),
        (phi, true),
    ] {
        let v = classify_trace_1d(&p, &r).unwrap();
        ensure!(
            v.overall == TraceOverall::NotApplicableDiscrete,
            "overall {:?}",
            v.overall
        );
        ensure!(
            v.condition1 == cond && v.really_isolated && !v.approx_divisible,
            "sub-verdicts {v:?}"
        );
    }
    let v = classify_trace_1d(&p, &AlgebraicNumber1D::rational(&rat_int(2)).unwrap()).unwrap();
    ensure!(
        v.overall == TraceOverall::NotApplicableDiscrete && !v.condition1,
        "r = 2 gave {v:?}"
    );
    Ok("r = 1 only among 1..=50; golden ratio holds; r = 2 fails".into())
}

fn criterion_3() -> Outcome {
    let p = laurent(2, &[(&[0, 0], 2), (&[1, 0], 3), (&[0, 1], 5)]);
    let mut count_true = 0;
    for m in 1..=50u64 {
        for n in 1..=50u64 {
            let got = condition_one_rational(&p, &[rat_int(m as i64), rat_int(n as i64)])
                .unwrap()
                .0;
            ensure!(
                got == closed_form_235(m, n),
                "({m}, {n}): library {got}, closed form {}",
                !got
            );
            count_true += usize::from(got);
        }
    }
    for (m, n, want) in [(7, 1, true), (3, 11, true), (4, 4, true), (14, 2, false)] {
        let got = condition_one_rational(&p, &[rat_int(m), rat_int(n)])
            .unwrap()
            .0;
        ensure!(got == want, "({m}, {n}) gave {got}");
    }
    Ok(format!(
        "2500 grid points agree, {count_true} satisfy condition (1)"
    ))
}

fn group(basis: &RealBasis, gens: &[&[i64]]) -> EmbeddedGroup {
    EmbeddedGroup::from_i64(basis.clone(), gens).unwrap()
}

fn criterion_4() -> Outcome {
    let b = RealBasis::radicals(&[6, 15, 10]).unwrap();
    let mut four = vec![
        group(&b, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
        group(&b, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]),
        group(&b, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]),
    ];
    let triple = DirectSumInstance::new(four.clone()).unwrap();
    let (good, cert) = direct_sum_order_unit_good(&triple).unwrap();
    ensure!(!good, "the radical triple should not be order unit good");
    let dual = cert.density.dual.ok_or("missing dual witness")?;
    for row in &cert.kernel.generators {
        let pairing = pair_dual(&dual, row, &b).ok_or("dual pairing undefined")?;
        ensure!(
            is_integral(&pairing),
            "dual pairs to {pairing}, not an integer"
        );
    }
    four.push(group(&b, &[&[1, 0, 0, 0], &[0, 1, 1, 1]]));
    let full = DirectSumInstance::new(four).unwrap();
    ensure!(
        direct_sum_order_unit_good(&full).unwrap().0,
        "four summands should be order unit good"
    );
    let mut proper = 0;
    for size in 2..4 {
        for idx in combinations(4, size) {
            let sub = full.restrict(&idx).unwrap();
            ensure!(
                !direct_sum_order_unit_good(&sub).unwrap().0,
                "sub-sum {idx:?} should not be good"
            );
            proper += 1;
        }
    }
    let b = RealBasis::radicals(&[2, 3, 5]).unwrap();
    let chain = DirectSumInstance::new(vec![
        group(&b, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        group(&b, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]),
        group(&b, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]),
    ])
    .unwrap();
    ensure!(
        direct_sum_order_unit_good(&chain.restrict(&[0, 1]).unwrap())
            .unwrap()
            .0,
        "G1+G2 should be good"
    );
    ensure!(
        !direct_sum_order_unit_good(&chain.restrict(&[0, 2]).unwrap())
            .unwrap()
            .0,
        "G1+G3 should not be"
    );
    ensure!(
        direct_sum_order_unit_good(&chain).unwrap().0,
        "the full chain should be good"
    );
    Ok(format!("triple discrete with integral dual, quadruple good, {proper} proper sub-sums not good, chain ok"))
}

fn criterion_5() -> Outcome {
    let circle = laurent(
        2,
        &[
            (&[2, 0], 1),
            (&[1, 0], -6),
            (&[0, 2], 1),
            (&[0, 1], -6),
            (&[0, 0], 17),
        ],
    );
    let p = laurent(2, &[(&[0, 0], 2), (&[1, 0], 3), (&[0, 1], 5)]);
    let report = fitting_check(&p, std::slice::from_ref(&circle), 64).unwrap();
    ensure!(report.fitted, "circle should be fitted for 2 + 3x + 5y");
    let w = report.witness.clone().ok_or("fitted without witness")?;
    ensure!(w.boost <= 64, "boost {} over the limit", w.boost);

    // re-check the witness by expanding h = P^N f and P^k directly
    let p2 = poly2(&[((0, 0), 2), ((1, 0), 3), ((0, 1), 5)]);
    let f2 = poly2(&[
        ((2, 0), 1),
        ((1, 0), -6),
        ((0, 2), 1),
        ((0, 1), -6),
        ((0, 0), 17),
    ]);
    let h = mul2(&pow2(&p2, w.boost), &f2);
    let k = i64::from(w.k);
    let support = pow2(&p2, w.k);
    for (e, c) in &h {
        ensure!(
            support.contains_key(e),
            "exponent {e:?} of h is outside Log P^{k}"
        );
        let on_boundary = e.0 == 0 || e.1 == 0 || e.0 + e.1 == k;
        ensure!(
            !on_boundary || c >= &Int::from(0),
            "negative coefficient {c} at {e:?} on the boundary of {k}K"
        );
    }

    let q = laurent(2, &[(&[0, 0], 1), (&[1, 1], 1), (&[1, 0], 1)]);
    let report = fitting_check(&q, &[circle], 64).unwrap();
    ensure!(!report.fitted, "circle should not be fitted for 1 + xy + x");
    let obstruction = report
        .support_failures
        .iter()
        .find_map(|f| f.obstruction.clone())
        .ok_or("no cone obstruction in the diagnostics")?;
    ensure!(
        obstruction.facet_normal == vec![int(-1), int(1)],
        "obstruction normal {:?}",
        obstruction.facet_normal
    );
    Ok(format!(
        "fitted with N = {}, k = {} (re-expanded, {} terms); 1 + xy + x blocked by exponent {:?} across facet {:?}",
        w.boost,
        w.k,
        h.len(),
        obstruction.exponent,
        obstruction.facet_normal
    ))
}

fn check_instance(s: &SimplexSubset, seed: u64) -> Result<bool, String> {
    let good = decompose_good_subset(s)
        .map_err(|e| e.to_string())?
        .is_good();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = adversarial_family(s);
    pairs.extend(random_pairs(s, 100, &mut rng));
    let failure = first_unliftable(s, &pairs).map_err(|e| e.to_string())?;
    if good != failure.is_none() {
        return Err(format!(
            "decomposition says good = {good}, oracle failure {failure:?} on {s:?}"
        ));
    }
    Ok(good)
}

fn criterion_6() -> Outcome {
    let mut corpus = grid_corpus(4);
    let grid_len = corpus.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    corpus.extend(sample_corpus(4, 4, 50, 4, &mut rng));
    let results = map_collect(Execution::Parallel, corpus.len(), |i| {
        check_instance(&corpus[i], i as u64)
    });
    let mut good = 0;
    for r in results {
        good += usize::from(r?);
    }
    Ok(format!(
        "{grid_len} grid instances and 50 samples in the 3-simplex agree; {good} good"
    ))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> Vec<i64> {
    let deg = rng.gen_range(1..=max_deg);
    let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
    while c[deg] == 0 {
        c[deg] = rng.gen_range(-bound..=bound);
    }
    c
}

fn sturm_suite(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let c = random_poly(rng, 6, 50);
        let got = sturm_positive_root_count(&poly(&c));
        let want = descartes_positive_roots(&c);
        ensure!(got == want, "{c:?}: Sturm {got}, bisection {want}");
    }
    Ok(())
}

/// Irreducible polynomial with a positive root, and its first positive root.
fn random_algebraic(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> AlgebraicNumber1D {
    loop {
        let c = random_poly(rng, max_deg, bound);
        let Ok(p) = IntPolynomial::from_i64(&c) else {
            continue;
        };
        if p.constant() == &Int::from(0)
            || kronecker_irreducible(&p, 6) != Irreducibility::Irreducible
        {
            continue;
        }
        if let Ok(r) = AlgebraicNumber1D::nth_positive_root(p, 0) {
            return r;
        }
    }
}

fn scaling_suite(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..500 {
        let r = random_algebraic(rng, 4, 50);
        let a = Int::from(rng.gen_range(1..=60));
        let got = scaled_integrality(&r, &a).unwrap();
        let brute = brute_scaling_witness(r.minpoly().coeffs(), &a, 30);
        ensure!(
            got.holds == brute.is_some(),
            "{} at a = {a}: criterion {}, search {brute:?}",
            r.minpoly(),
            got.holds
        );
        ensure!(
            got.witness_t == brute,
            "{} at a = {a}: witness {:?} vs {brute:?}",
            r.minpoly(),
            got.witness_t
        );
    }
    Ok(())
}

fn lattice_suite(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let b = RealBasis::radicals(&[2, 3]).unwrap();
    let random_group = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=3);
        let gens: Vec<Vec<Rat>> = (0..n)
            .map(|_| (0..3).map(|_| rat_int(rng.gen_range(-6..=6))).collect())
            .collect();
        EmbeddedGroup::new(b.clone(), gens)
    };
    let mut checked = 0;
    while checked < 200 {
        let (Ok(g), Ok(h)) = (random_group(rng), random_group(rng)) else {
            continue;
        };
        let gh = intersect(&g, &h).unwrap();
        let hg = intersect(&h, &g).unwrap();
        ensure!(
            gh.hnf() == hg.hnf(),
            "intersection not commutative: {:?} vs {:?}",
            gh.hnf(),
            hg.hnf()
        );
        let mut shuffled = g.gens().clone();
        shuffled.reverse();
        let g2 = EmbeddedGroup::new(b.clone(), shuffled).unwrap();
        ensure!(g.hnf() == g2.hnf(), "HNF depends on generator order");
        ensure!(
            intersect(&g, &h).unwrap().hnf() == gh.hnf(),
            "intersection not deterministic"
        );
        checked += 1;
    }
    Ok(())
}

fn multiplicativity_suite(rng: &mut ChaCha8Rng) -> Result<(), String> {
    // all coefficients nonzero
    let p = poly(&[2, 1, 3]);
    let mut admissible = || loop {
        let deg = rng.gen_range(1..=3usize);
        let lead = [1, 3, 9][rng.gen_range(0..3)];
        let constant = [1, -1, 2, -2, 4, -4][rng.gen_range(0..6)];
        let mut c = vec![constant];
        c.extend((1..deg).map(|_| rng.gen_range(-4..=4)));
        c.push(lead);
        let q = poly(&c);
        if kronecker_irreducible(&q, 6) != Irreducibility::Irreducible {
            continue;
        }
        let Ok(r) = AlgebraicNumber1D::nth_positive_root(q, 0) else {
            continue;
        };
        if condition_one_1d(&p, &r).unwrap().0 {
            return r;
        }
    };
    for _ in 0..50 {
        let (r1, r2) = (admissible(), admissible());
        let prod = r1
            .product(&r2, 9)
            .map_err(|e| format!("{} * {}: {e}", r1.minpoly(), r2.minpoly()))?;
        ensure!(
            condition_one_1d(&p, &prod).unwrap().0,
            "product of roots of {} and {} (minpoly {}) fails condition (1)",
            r1.minpoly(),
            r2.minpoly(),
            prod.minpoly()
        );
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    sturm_suite(&mut rng)?;
    scaling_suite(&mut rng)?;
    lattice_suite(&mut rng)?;
    multiplicativity_suite(&mut rng)?;
    Ok("Sturm x1000, scaled integrality x500, HNF/intersection x200, multiplicativity x50".into())
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "1 simplicial fixtures and oracle agreement",
            criterion_1,
            Duration::from_secs(10),
        ),
        (
            "2 P = 1 + x in one variable",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            "3 P = 2 + 3x + 5y on the 50x50 grid",
            criterion_3,
            Duration::from_secs(5),
        ),
        ("4 strict direct sums", criterion_4, Duration::from_secs(1)),
        ("5 fitting the circle", criterion_5, Duration::from_secs(10)),
        (
            "6 good subsets of simplices",
            criterion_6,
            Duration::from_secs(30),
        ),
        ("7 property suites", criterion_7, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => {
                println!("[PASS] criterion {name}: {detail} ({elapsed:.2?}, limit {limit:?})")
            }
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
