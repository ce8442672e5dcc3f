//! Per-kind dispatch to the library, certificate rendering, and the
//! brute-force cross-checks behind `--oracle`.

use std::collections::HashSet;

use goodtrace::algebraic::{
    classify_trace_1d, kronecker_irreducible, AlgebraicNumber1D, ConditionOneCertificate, EndCheck,
    Irreducibility, RootSelector, TraceCertificate, TraceVerdict1D,
};
use goodtrace::arith::format_rational;
use goodtrace::lattice::{
    direct_sum_order_unit_good, is_integral, pair_dual, value_group_intersection_dense,
    DensityRoute, DirectSumCertificate, DirectSumInstance, EmbeddedGroup,
};
use goodtrace::laurent::{
    approximately_divisible, classify_rational_trace, fitting_check, monomial_value,
    newton_polytope, projectively_faithful, FittingReport, LaurentPoly,
};
use goodtrace::poly::IntPolynomial;
use goodtrace::simplexgood::{
    adversarial_family, decompose_good_subset, first_unliftable, flat_intersection_check,
    hull_vertices, random_pairs, Decomposition, SimplexSubset,
};
use goodtrace::simplicial::{
    goodness_lifting_oracle, interval_lifting_oracle, is_good, is_order_unit_good, TraceVector,
};
use goodtrace::{Int, Rat};
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::schema::{
    int_list, int_poly_value, int_value, laurent_value, rational_list, GroupSpec, Options, Payload,
};
use crate::CliError;

/// Degree up to which trace-1d minimal polynomials are checked for
/// irreducibility.
const IRREDUCIBILITY_DEGREE: usize = 6;
const DEFAULT_N_MAX: u32 = 64;
const DEFAULT_SCALING_T: u32 = 64;
const DEFAULT_SIMPLICIAL_BOUND: u32 = 3;
const DEFAULT_RANDOM_PAIRS: u32 = 100;

pub(crate) struct Outcome {
    pub verdict: bool,
    pub certificate: Value,
    pub oracle: Option<Value>,
}

pub(crate) fn dispatch(payload: &Payload, options: &Options) -> Result<Outcome, CliError> {
    match payload {
        Payload::Trace1d {
            p,
            minpoly,
            interval,
        } => trace_1d(p, minpoly, interval.as_ref(), options),
        Payload::TraceRational { p, r } => trace_rational(p, r, options),
        Payload::Fitting { p, candidates } => fitting(p, candidates, options),
        Payload::Simplicial(v) => simplicial(v, options),
        Payload::DirectSum(groups) => direct_sum(groups, options),
        Payload::Simplex { n, points } => simplex(*n, points, options),
        Payload::PolytopeInfo(p) => polytope_info(p, options),
    }
}

fn oracle_record(agree: bool, method: &str, detail: Value) -> Value {
    json!({ "agree": agree, "method": method, "detail": detail })
}

fn trace_common(v: &TraceVerdict1D) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("overall".into(), json!(v.overall.as_str()));
    m.insert("condition1".into(), json!(v.condition1));
    m.insert("really_isolated".into(), json!(v.really_isolated));
    m.insert("approx_divisible".into(), json!(v.approx_divisible));
    m
}

fn end_value(e: &EndCheck) -> Value {
    json!({
        "coefficient": int_value(&e.coefficient),
        "holds": e.scaling.holds,
        "witness_t": e.scaling.witness_t,
        "leading": int_value(&e.scaling.leading),
        "residual": int_value(&e.scaling.residual),
        "failing_prime": e.failing_prime.as_ref().map(int_value),
    })
}

fn trace_1d(
    p: &IntPolynomial,
    minpoly: &IntPolynomial,
    interval: Option<&(Rat, Rat)>,
    options: &Options,
) -> Result<Outcome, CliError> {
    let irreducibility = match kronecker_irreducible(minpoly, IRREDUCIBILITY_DEGREE) {
        Irreducibility::Irreducible => "irreducible",
        Irreducibility::Unknown => "unchecked",
        Irreducibility::Reducible(f) => {
            return Err(goodtrace::Error::InvalidAlgebraic(format!(
                "minimal polynomial is reducible, with factor {:?}",
                f.coeffs().iter().map(Int::to_string).collect::<Vec<_>>()
            ))
            .into())
        }
    };
    let selector = match interval {
        Some((lo, hi)) => RootSelector::Interval(lo.clone(), hi.clone()),
        None => RootSelector::UniquePositiveRoot,
    };
    let r = AlgebraicNumber1D::new(minpoly.clone(), selector)?;
    let v = classify_trace_1d(p, &r)?;
    let TraceCertificate::Algebraic {
        condition_one,
        positive_conjugates,
        ..
    } = &v.certificate
    else {
        unreachable!("one-variable classification yields an algebraic certificate")
    };
    let (lo, hi) = r.isolating_interval();
    let mut cert = trace_common(&v);
    cert.insert("minpoly".into(), int_poly_value(r.minpoly()));
    cert.insert("minpoly_irreducibility".into(), json!(irreducibility));
    cert.insert(
        "isolating_interval".into(),
        json!([format_rational(&lo), format_rational(&hi)]),
    );
    cert.insert("positive_conjugates".into(), json!(positive_conjugates));
    cert.insert("top".into(), end_value(&condition_one.top));
    cert.insert("bottom".into(), end_value(&condition_one.bottom));
    cert.insert(
        "extended_hypothesis".into(),
        json!(condition_one.extended_hypothesis),
    );

    let oracle = options.oracle.then(|| {
        let t_max = options.bound.unwrap_or(DEFAULT_SCALING_T);
        let m = r.minpoly().coeffs();
        let reversed: Vec<Int> = m.iter().rev().cloned().collect();
        let top = brute_scaling(m, p.leading(), t_max);
        let bottom = brute_scaling(&reversed, p.constant(), t_max);
        let brute = top.is_some() && bottom.is_some();
        let agree = brute == v.condition1 && scaling_witnesses_match(condition_one, top, bottom);
        oracle_record(
            agree,
            "direct search for monic scalings",
            json!({ "t_max": t_max, "top_t": top, "bottom_t": bottom }),
        )
    });
    Ok(Outcome {
        verdict: v.overall == goodtrace::algebraic::TraceOverall::Good,
        certificate: cert.into(),
        oracle,
    })
}

fn scaling_witnesses_match(
    c: &ConditionOneCertificate,
    top: Option<u32>,
    bottom: Option<u32>,
) -> bool {
    let same = |lib: Option<u32>, brute: Option<u32>| lib.is_none() || lib == brute;
    same(c.top.scaling.witness_t, top) && same(c.bottom.scaling.witness_t, bottom)
}

/// Least `t <= t_max` such that `Σ m_i a^{t(n-i)} x^i` is monic up to content.
fn brute_scaling(m: &[Int], a: &Int, t_max: u32) -> Option<u32> {
    let n = m.len() - 1;
    (0..=t_max).find(|&t| {
        let scaled: Vec<Int> = m
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(a.clone(), t as usize * (n - i)))
            .collect();
        let content = scaled
            .iter()
            .fold(Int::zero(), |acc, c| num_integer::Integer::gcd(&acc, c));
        (&scaled[n] / &content).abs().is_one()
    })
}

fn trace_rational(p: &LaurentPoly, r: &[Rat], options: &Options) -> Result<Outcome, CliError> {
    let v = classify_rational_trace(p, r)?;
    let TraceCertificate::Rational(rc) = &v.certificate else {
        unreachable!("rational classification yields a rational certificate")
    };
    let mut cert = trace_common(&v);
    cert.insert("value".into(), json!(format_rational(&rc.value)));
    cert.insert("b".into(), int_value(&rc.b));
    cert.insert("b_primes".into(), int_list(&rc.b_primes));
    cert.insert(
        "failing".into(),
        match &rc.failing {
            Some((w, prime)) => json!({ "exponent": w, "prime": int_value(prime) }),
            None => Value::Null,
        },
    );
    let oracle = options.oracle.then(|| {
        let (holds, b) = brute_condition_one(p, r);
        oracle_record(
            holds == v.condition1 && b == rc.b,
            "denominators against powers of B",
            json!({ "condition1": holds, "b": int_value(&b) }),
        )
    });
    Ok(Outcome {
        verdict: v.overall == goodtrace::algebraic::TraceOverall::Good,
        certificate: cert.into(),
        oracle,
    })
}

/// `B` as the lcm of the denominators of `r^w / P(r)`, then the check that
/// every `P(r) / r^v` has a denominator dividing a power of `B`.
fn brute_condition_one(p: &LaurentPoly, r: &[Rat]) -> (bool, Int) {
    let value = p.eval(r);
    let support = p.support();
    let b = support.iter().fold(Int::one(), |acc, w| {
        num_integer::Integer::lcm(&acc, (monomial_value(r, w) / &value).denom())
    });
    let holds = support.iter().all(|v| {
        let den = (&value / monomial_value(r, v)).denom().clone();
        let t = den.bits() as usize;
        (num_traits::pow(b.clone(), t) % &den).is_zero()
    });
    (holds, b)
}

fn fitting(
    p: &LaurentPoly,
    candidates: &[LaurentPoly],
    options: &Options,
) -> Result<Outcome, CliError> {
    let n_max = options.n_max.unwrap_or(DEFAULT_N_MAX);
    let report = fitting_check(p, candidates, n_max)?;
    let cert = fitting_certificate(&report);
    let oracle = if options.oracle {
        Some(fitting_oracle(p, candidates, &report)?)
    } else {
        None
    };
    Ok(Outcome {
        verdict: report.fitted,
        certificate: cert,
        oracle,
    })
}

fn fitting_certificate(report: &FittingReport) -> Value {
    let witness = report
        .witness
        .as_ref()
        .map(|w| json!({ "candidate": w.candidate, "boost": w.boost, "k": w.k }));
    let faces: Vec<Value> = report
        .per_face_failures
        .iter()
        .map(|f| {
            json!({
                "candidate": f.candidate,
                "boost": f.boost,
                "face": f.face,
                "exponent": f.exponent,
                "coefficient": int_value(&f.coefficient),
            })
        })
        .collect();
    let support: Vec<Value> = report
        .support_failures
        .iter()
        .map(|s| {
            json!({
                "candidate": s.candidate,
                "boost": s.boost,
                "exponent": s.exponent,
                "obstruction": s.obstruction.as_ref().map(|o| json!({
                    "exponent": o.exponent,
                    "facet_normal": int_list(&o.facet_normal),
                })),
            })
        })
        .collect();
    let summaries: Vec<Value> = report
        .summaries
        .iter()
        .map(|s| {
            json!({
                "boosts_tried": s.boosts_tried,
                "support_failures": s.support_failures,
                "face_failures": s.face_failures,
            })
        })
        .collect();
    json!({
        "fitted": report.fitted,
        "candidates_vanish": "asserted",
        "n_max": report.n_max,
        "witness": witness,
        "face_failures": faces,
        "support_failures": support,
        "summaries": summaries,
        "warnings": report.warnings,
    })
}

/// Re-expands the witness, or re-checks every reported obstruction.
fn fitting_oracle(
    p: &LaurentPoly,
    candidates: &[LaurentPoly],
    report: &FittingReport,
) -> Result<Value, CliError> {
    let polytope = newton_polytope(p)?;
    if let Some(w) = &report.witness {
        let h = p.pow(w.boost).mul(&candidates[w.candidate]);
        let support: HashSet<Vec<i64>> = p.pow(w.k).support().into_iter().collect();
        let outside = h.support().into_iter().find(|e| !support.contains(e));
        let negative = polytope.proper_faces().find_map(|f| {
            h.terms()
                .find(|(e, c)| f.contains_scaled(e, w.k) && c.is_negative())
                .map(|(e, _)| e.clone())
        });
        let agree = outside.is_none() && negative.is_none();
        return Ok(oracle_record(
            agree,
            "full expansion of the witness",
            json!({ "terms": h.len(), "outside_support": outside, "negative_on_face": negative }),
        ));
    }
    let mut checked = 0usize;
    let mut agree = true;
    for f in &report.per_face_failures {
        let h = p.pow(f.boost).mul(&candidates[f.candidate]);
        agree &= h.coeff(&f.exponent) == f.coefficient && f.coefficient.is_negative();
        checked += 1;
    }
    for s in &report.support_failures {
        if let Some(o) = &s.obstruction {
            let facet = polytope.facets().find(|f| f.normal == o.facet_normal);
            let crosses = |off: &Int| {
                let lhs = o
                    .facet_normal
                    .iter()
                    .zip(&o.exponent)
                    .fold(Int::zero(), |acc, (n, x)| acc + n * Int::from(*x));
                !off.is_positive() && lhs.is_positive()
            };
            let h = p.pow(s.boost).mul(&candidates[s.candidate]);
            agree &= facet.is_some_and(|f| crosses(&f.offset)) && !h.coeff(&o.exponent).is_zero();
            checked += 1;
        }
    }
    Ok(oracle_record(
        agree,
        "re-derivation of each reported obstruction",
        json!({ "checked": checked }),
    ))
}

fn simplicial(v: &[Rat], options: &Options) -> Result<Outcome, CliError> {
    let t = TraceVector::new(v.to_vec())?;
    let (oug, c) = is_order_unit_good(&t);
    let good = is_good(&t);
    let violation = c.violation.as_ref().map(
        |x| json!({ "index": x.index, "value": int_value(&x.value), "bound": int_value(&x.bound) }),
    );
    let cert = json!({
        "order_unit_good": oug,
        "good": good,
        "normal_form": int_list(&c.normal_form.values),
        "zeros": c.normal_form.zeros,
        "permutation": c.normal_form.permutation,
        "violation": violation,
        "reason": c.describe(),
    });
    let oracle = if options.oracle {
        let bound = options.bound.unwrap_or(DEFAULT_SIMPLICIAL_BOUND);
        let ou = interval_lifting_oracle(&t, bound)?;
        let g = goodness_lifting_oracle(&t, bound.min(2))?;
        let agree = ou.liftable == oug && g.liftable == good;
        let failure = |r: &goodtrace::simplicial::LiftingResult| {
            r.counterexample
                .as_ref()
                .map(|f| json!({ "b": f.b, "s": f.s }))
        };
        Some(oracle_record(
            agree,
            "exhaustive lifting enumeration",
            json!({
                "bound": bound,
                "order_unit_liftable": ou.liftable,
                "order_unit_counterexample": failure(&ou),
                "good_liftable": g.liftable,
                "good_counterexample": failure(&g),
                "checked": ou.checked + g.checked,
            }),
        ))
    } else {
        None
    };
    Ok(Outcome {
        verdict: oug,
        certificate: cert,
        oracle,
    })
}

fn direct_sum(groups: &[GroupSpec], options: &Options) -> Result<Outcome, CliError> {
    let summands = groups
        .iter()
        .map(|g| EmbeddedGroup::new(g.basis.build()?, g.gens.clone()))
        .collect::<goodtrace::Result<Vec<_>>>()?;
    let instance = DirectSumInstance::new(summands)?;
    let (good, c) = direct_sum_order_unit_good(&instance)?;
    let cert = direct_sum_certificate(&instance, &c);
    let oracle = options
        .oracle
        .then(|| direct_sum_oracle(&instance, &c))
        .transpose()?;
    Ok(Outcome {
        verdict: good,
        certificate: cert,
        oracle,
    })
}

fn direct_sum_certificate(d: &DirectSumInstance, c: &DirectSumCertificate) -> Value {
    json!({
        "order_unit_good": c.density.dense,
        "basis": d.basis().labels(),
        "kernel_generators": c.kernel.generators.iter().map(|r| rational_list(r)).collect::<Vec<_>>(),
        "route": match c.density.route {
            DensityRoute::Rational => "rational",
            DensityRoute::Field => "field",
        },
        "conditional": c.density.conditional,
        "dual": c.density.dual.as_ref().map(|w| w.iter().map(ToString::to_string).collect::<Vec<_>>()),
    })
}

/// Integrality of the dual against every generator, and the intersection
/// criterion when there are two summands.
fn direct_sum_oracle(d: &DirectSumInstance, c: &DirectSumCertificate) -> Result<Value, CliError> {
    let mut checks = serde_json::Map::new();
    let mut agree = true;
    if let Some(dual) = &c.density.dual {
        let integral = c
            .kernel
            .generators
            .iter()
            .all(|row| pair_dual(dual, row, d.basis()).is_some_and(|e| is_integral(&e)));
        checks.insert("dual_integral".into(), json!(integral));
        agree &= integral;
    }
    if let [a, b] = d.summands() {
        let dense = value_group_intersection_dense(a, b)?;
        checks.insert("intersection_dense".into(), json!(dense));
        agree &= dense == c.density.dense;
    }
    Ok(oracle_record(
        agree,
        "dual pairing and intersection density",
        Value::Object(checks),
    ))
}

fn simplex(n: usize, points: &[Vec<Rat>], options: &Options) -> Result<Outcome, CliError> {
    let s = SimplexSubset::new(n, points.to_vec())?;
    let hull = hull_vertices(&s);
    let decomposition = decompose_good_subset(&s)?;
    let flat = flat_intersection_check(&s)?;
    // indices are reported 1-based, matching how points are numbered on input
    let decomposition_value = match &decomposition {
        Decomposition::Good(g) => json!({
            "face": g.face.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "blocks": g.blocks.iter().map(|b| json!({
                "point": rational_list(&b.point),
                "support": b.support.iter().map(|i| i + 1).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        Decomposition::Overlap {
            first,
            second,
            shared,
        } => json!({
            "overlap": [first + 1, second + 1],
            "shared_vertices": shared.iter().map(|i| i + 1).collect::<Vec<_>>(),
        }),
    };
    let cert = json!({
        "good": decomposition.is_good(),
        "points": s.points().iter().map(|p| rational_list(p)).collect::<Vec<_>>(),
        "hull_vertices": hull.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "flat_intersection": flat,
        "decomposition": decomposition_value,
    });
    let oracle = if options.oracle {
        let count = options.bound.unwrap_or(DEFAULT_RANDOM_PAIRS) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut pairs = adversarial_family(&s);
        let adversarial = pairs.len();
        pairs.extend(random_pairs(&s, count, &mut rng));
        let failure = first_unliftable(&s, &pairs)?;
        let agree = failure.is_none() == decomposition.is_good();
        Some(oracle_record(
            agree,
            "exact LP lifting on adversarial and random pairs",
            json!({
                "adversarial_pairs": adversarial,
                "random_pairs": pairs.len() - adversarial,
                "unliftable": failure.map(|(a, b)| json!({ "a": rational_list(&a), "b": rational_list(&b) })),
            }),
        ))
    } else {
        None
    };
    Ok(Outcome {
        verdict: decomposition.is_good(),
        certificate: cert,
        oracle,
    })
}

fn polytope_info(p: &LaurentPoly, options: &Options) -> Result<Outcome, CliError> {
    let k = newton_polytope(p)?;
    let faithful = projectively_faithful(p);
    let divisible = approximately_divisible(p)?;
    let faces: Vec<Value> = k
        .proper_faces()
        .map(|f| {
            json!({
                "dim": f.dim,
                "normal": int_list(&f.normal),
                "offset": int_value(&f.offset),
                "vertices": f.vertices.iter().map(|&i| &k.points[i]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let cert = json!({
        "polynomial": laurent_value(p),
        "dim": k.dim,
        "vertices": k.vertex_points(),
        "faces": faces,
        "projectively_faithful": faithful,
        "approx_divisible": divisible,
    });
    let oracle = options.oracle.then(|| {
        // every face functional must be maximized exactly on its members
        let agree = k.proper_faces().all(|f| {
            k.points.iter().enumerate().all(|(i, w)| {
                let val = f.eval(w);
                val <= f.offset && ((val == f.offset) == f.members.contains(&i))
            })
        });
        oracle_record(
            agree,
            "supporting hyperplanes of every face",
            json!({ "faces": k.proper_faces().count() }),
        )
    });
    Ok(Outcome {
        verdict: faithful,
        certificate: cert,
        oracle,
    })
}
