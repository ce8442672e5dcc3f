//! Integer Laurent polynomials in several variables, their Newton polytopes,
//! facial polynomials, the fitting search, and condition (1) at rational
//! points.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebraic::{TraceCertificate, TraceOverall, TraceVerdict1D};
use crate::arith::{lcm_all, prime_factors, smallest_prime_factor, strip_shared_primes};
use crate::par::{find_map_first, map_collect, Execution};
use crate::polytope::{Face, Polytope};
use crate::zmatrix::smith_invariants;
use crate::{Error, Int, Rat, Result};

/// Exponent vector.
pub type Exponent = Vec<i64>;

/// Upper bound on the number of terms produced by any expansion.
pub const MAX_TERMS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponent, Int>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], Int::one())
    }

    pub fn monomial(exp: Exponent, coeff: Int) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, coeff);
        p
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Exponent, Int)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mut p = Self::zero(dim);
        for (exp, c) in terms {
            if exp.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "exponent {exp:?} has length {}, expected {dim}",
                    exp.len()
                )));
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    pub fn from_terms(dim: usize, terms: &[(&[i64], i64)]) -> Result<Self> {
        Self::new(dim, terms.iter().map(|(e, c)| (e.to_vec(), Int::from(*c))))
    }

    fn add_term(&mut self, exp: Exponent, c: Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Int)> {
        self.terms.iter()
    }

    /// `Log P`, in increasing lexicographic order.
    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, exp: &[i64]) -> Int {
        self.terms.get(exp).cloned().unwrap_or_else(Int::zero)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn check_nonnegative(&self) -> Result<()> {
        match self.terms.iter().find(|(_, c)| c.is_negative()) {
            Some((e, c)) => Err(Error::NegativeCoefficient(format!(
                "coefficient {c} at {e:?}"
            ))),
            None => Ok(()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out: BTreeMap<Exponent, Int> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(i, j)| i + j).collect();
                *out.entry(e).or_insert_with(Int::zero) += x * y;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Self {
            dim: self.dim,
            terms: out,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at a point with nonzero rational coordinates.
    pub fn eval(&self, r: &[Rat]) -> Rat {
        self.terms
            .iter()
            .map(|(e, c)| Rat::from_integer(c.clone()) * monomial_value(r, e))
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    /// Keeps the terms whose exponents satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(&[i64]) -> bool) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

/// `r^w` for a rational point and integer exponent.
pub fn monomial_value(r: &[Rat], w: &[i64]) -> Rat {
    r.iter().zip(w).fold(Rat::one(), |acc, (x, &e)| {
        let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
        if e < 0 {
            acc / p
        } else {
            acc * p
        }
    })
}

const VARS: [&str; 4] = ["x", "y", "z", "w"];

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut mono = String::new();
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let var = if self.dim <= VARS.len() {
                    VARS[j].to_string()
                } else {
                    format!("x{}", j + 1)
                };
                mono.push_str(&var);
                if k != 1 {
                    mono.push_str(&format!("^{k}"));
                }
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}{mono}")?,
            }
        }
        Ok(())
    }
}

/// Convex hull of `Log P` with its faces.
pub type NewtonPolytope = Polytope;

pub fn newton_polytope(p: &LaurentPoly) -> Result<NewtonPolytope> {
    newton_polytope_with(p, Execution::default())
}

pub fn newton_polytope_with(p: &LaurentPoly, exec: Execution) -> Result<NewtonPolytope> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Polytope::new_with(p.support(), exec)
}

/// `Log P - Log P` generates `Z^d`.
pub fn projectively_faithful(p: &LaurentPoly) -> bool {
    let support = p.support();
    let Some(base) = support.first() else {
        return false;
    };
    let diffs: Vec<Vec<Int>> = support[1..]
        .iter()
        .map(|w| w.iter().zip(base).map(|(a, b)| Int::from(a - b)).collect())
        .collect();
    let invariants = smith_invariants(&diffs);
    invariants.len() == p.dim() && invariants.iter().all(One::is_one)
}

/// Every vertex coefficient of `P` exceeds 1.
pub fn approximately_divisible(p: &LaurentPoly) -> Result<bool> {
    p.check_nonnegative()?;
    let k = newton_polytope(p)?;
    Ok(k.vertices
        .iter()
        .all(|&v| p.coeff(&k.points[v]) > Int::one()))
}

/// Terms of `h` on the scaled face `k·F`.
pub fn facial_polynomial(
    h: &LaurentPoly,
    polytope: &NewtonPolytope,
    face: &Face,
    k: u32,
) -> Result<LaurentPoly> {
    if let Some(w) = h
        .support()
        .into_iter()
        .find(|w| !polytope.contains_scaled(w, k))
    {
        return Err(Error::SupportViolation(w, k));
    }
    if face.is_improper() {
        return Ok(h.clone());
    }
    Ok(h.restrict(|w| face.contains_scaled(w, k)))
}

fn check_base(p: &LaurentPoly) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    p.check_nonnegative()?;
    if !projectively_faithful(p) {
        return Err(Error::NotProjectivelyFaithful);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingWitness {
    pub candidate: usize,
    pub boost: u32,
    pub k: u32,
}

/// A negative coefficient on a scaled face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceFailure {
    pub candidate: usize,
    pub boost: u32,
    pub face: usize,
    pub exponent: Exponent,
    pub coefficient: Int,
}

/// An exponent that no `Log P^k` can contain: it violates a facet inequality
/// whose offset is zero, so the violation persists under scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeObstruction {
    pub exponent: Exponent,
    pub facet_normal: Vec<Int>,
}

/// Clause (a) failed for a candidate at every boost tried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFailure {
    pub candidate: usize,
    pub boost: u32,
    /// An exponent of the boosted candidate outside every `Log P^k` tried.
    pub exponent: Option<Exponent>,
    pub obstruction: Option<ConeObstruction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CandidateSummary {
    pub boosts_tried: u32,
    pub support_failures: u32,
    pub face_failures: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingReport {
    pub fitted: bool,
    pub witness: Option<FittingWitness>,
    /// On failure: face diagnostics for each candidate at the largest boost.
    pub per_face_failures: Vec<FaceFailure>,
    /// On failure: support diagnostics for each candidate at the largest boost.
    pub support_failures: Vec<SupportFailure>,
    pub summaries: Vec<CandidateSummary>,
    /// Vertex faces whose facial polynomial vanishes for the witness.
    pub warnings: Vec<String>,
    pub n_max: u32,
}

/// Extra powers of `P` searched above the least `k` allowed by the facets.
const K_SLACK: u32 = 4;

enum BoostOutcome {
    Fitted {
        k: u32,
        warnings: Vec<String>,
    },
    Support {
        exponent: Option<Exponent>,
        obstruction: Option<ConeObstruction>,
    },
    Faces(Vec<FaceFailure>),
}

struct FitContext<'a> {
    polytope: &'a NewtonPolytope,
    powers: Vec<LaurentPoly>,
    sumsets: Vec<HashSet<Exponent>>,
}

impl FitContext<'_> {
    /// Range of `k` with `Log h ⊆ k·K`, or the blocking facet.
    fn k_range(&self, h: &LaurentPoly) -> std::result::Result<(u32, Option<u32>), ConeObstruction> {
        let mut lo = 0i64;
        let mut hi: Option<i64> = None;
        for w in h.support() {
            for f in self.polytope.facets() {
                let val = f.eval(&w);
                let c = &f.offset;
                if c.is_zero() {
                    if val.is_positive() {
                        return Err(ConeObstruction {
                            exponent: w,
                            facet_normal: f.normal.clone(),
                        });
                    }
                } else if c.is_positive() {
                    let need = ceil_div(&val, c);
                    lo = lo.max(need);
                } else {
                    let cap = floor_div(&val, c);
                    hi = Some(hi.map_or(cap, |h: i64| h.min(cap)));
                }
            }
        }
        let lo = u32::try_from(lo.max(0)).unwrap_or(u32::MAX);
        let hi = hi.map(|h| u32::try_from(h.max(-1)).unwrap_or(0));
        Ok((lo, hi))
    }

    fn evaluate(&self, candidate: usize, h: &LaurentPoly, boost: u32) -> BoostOutcome {
        let boosted = h.mul(&self.powers[boost as usize]);
        let (lo, hi) = match self.k_range(&boosted) {
            Ok(r) => r,
            Err(obstruction) => {
                return BoostOutcome::Support {
                    exponent: None,
                    obstruction: Some(obstruction),
                }
            }
        };
        let top = hi
            .unwrap_or(u32::MAX)
            .min(lo.saturating_add(K_SLACK))
            .min(self.sumsets.len() as u32 - 1);
        let support = boosted.support();
        let mut missing = None;
        let k = (lo..=top).find(|&k| {
            let set = &self.sumsets[k as usize];
            match support.iter().find(|w| !set.contains(*w)) {
                Some(w) => {
                    missing = Some(w.clone());
                    false
                }
                None => true,
            }
        });
        let Some(k) = k else {
            let exponent = missing.or_else(|| support.first().cloned());
            return BoostOutcome::Support {
                exponent,
                obstruction: None,
            };
        };
        let mut failures = Vec::new();
        let mut warnings = Vec::new();
        for (id, face) in self.polytope.faces.iter().enumerate() {
            if face.is_improper() {
                continue;
            }
            let facial = boosted.restrict(|w| face.contains_scaled(w, k));
            let negative = facial
                .terms()
                .find(|(_, c)| c.is_negative())
                .map(|(e, c)| (e.clone(), c.clone()));
            if let Some((e, c)) = negative {
                failures.push(FaceFailure {
                    candidate,
                    boost,
                    face: id,
                    exponent: e,
                    coefficient: c,
                });
            } else if face.dim == 0 && facial.is_zero() {
                warnings.push(format!(
                    "vertex face {id} at {:?}: facial polynomial is zero, so the trace vanishes there",
                    self.polytope.points[face.vertices[0]]
                ));
            }
        }
        if failures.is_empty() {
            BoostOutcome::Fitted { k, warnings }
        } else {
            BoostOutcome::Faces(failures)
        }
    }
}

fn ceil_div(a: &Int, b: &Int) -> i64 {
    let q = num_integer::Integer::div_ceil(a, b);
    i64::try_from(&q).unwrap_or(if q.is_positive() { i64::MAX } else { i64::MIN })
}

fn floor_div(a: &Int, b: &Int) -> i64 {
    let q = num_integer::Integer::div_floor(a, b);
    i64::try_from(&q).unwrap_or(if q.is_positive() { i64::MAX } else { i64::MIN })
}

/// Searches for a candidate `h` and boost `N <= n_max` such that `P^N·h`
/// satisfies both fitting clauses. The candidates are assumed to vanish on
/// the target set.
pub fn fitting_check(
    p: &LaurentPoly,
    candidates: &[LaurentPoly],
    n_max: u32,
) -> Result<FittingReport> {
    fitting_check_with(p, candidates, n_max, Execution::default())
}

pub fn fitting_check_with(
    p: &LaurentPoly,
    candidates: &[LaurentPoly],
    n_max: u32,
    exec: Execution,
) -> Result<FittingReport> {
    if candidates.is_empty() {
        return Err(Error::Empty("candidate list".into()));
    }
    check_base(p)?;
    if let Some(h) = candidates.iter().find(|h| h.dim() != p.dim()) {
        return Err(Error::InvalidArgument(format!(
            "candidate of dimension {}, expected {}",
            h.dim(),
            p.dim()
        )));
    }
    let polytope = newton_polytope_with(p, exec)?;
    let probe = FitContext {
        polytope: &polytope,
        powers: Vec::new(),
        sumsets: Vec::new(),
    };
    let k_top = candidates
        .iter()
        .filter_map(|h| probe.k_range(h).ok())
        .map(|(lo, _)| lo)
        .max()
        .map_or(0, |lo| lo + n_max + K_SLACK);

    let mut powers = vec![LaurentPoly::one(p.dim())];
    for _ in 0..k_top.max(n_max) {
        let next = powers.last().expect("nonempty").mul(p);
        if next.len() > MAX_TERMS {
            return Err(Error::SizeEnvelope(format!(
                "P^{} has more than {MAX_TERMS} terms",
                powers.len()
            )));
        }
        powers.push(next);
    }
    for h in candidates {
        if h.len().saturating_mul(powers[n_max as usize].len()) > MAX_TERMS.saturating_mul(64) {
            return Err(Error::SizeEnvelope(format!(
                "boosting a {}-term candidate by P^{n_max}",
                h.len()
            )));
        }
    }
    let sumsets = powers
        .iter()
        .map(|q| q.support().into_iter().collect())
        .collect();
    let ctx = FitContext {
        polytope: &polytope,
        powers,
        sumsets,
    };

    let per = n_max as usize + 1;
    let total = candidates.len() * per;
    let hit = find_map_first(exec, total, |i| {
        let (c, n) = (i / per, (i % per) as u32);
        match ctx.evaluate(c, &candidates[c], n) {
            BoostOutcome::Fitted { k, warnings } => Some((
                FittingWitness {
                    candidate: c,
                    boost: n,
                    k,
                },
                warnings,
            )),
            _ => None,
        }
    });
    if let Some((witness, warnings)) = hit {
        return Ok(FittingReport {
            fitted: true,
            witness: Some(witness),
            per_face_failures: Vec::new(),
            support_failures: Vec::new(),
            summaries: Vec::new(),
            warnings,
            n_max,
        });
    }

    let outcomes = map_collect(exec, total, |i| {
        let (c, n) = (i / per, (i % per) as u32);
        ctx.evaluate(c, &candidates[c], n)
    });
    let mut summaries = vec![CandidateSummary::default(); candidates.len()];
    let mut per_face_failures = Vec::new();
    let mut support_failures = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let (c, n) = (i / per, (i % per) as u32);
        let s = &mut summaries[c];
        s.boosts_tried += 1;
        let last = n == n_max;
        match outcome {
            BoostOutcome::Fitted { .. } => unreachable!("no boost fitted"),
            BoostOutcome::Support {
                exponent,
                obstruction,
            } => {
                s.support_failures += 1;
                if last {
                    support_failures.push(SupportFailure {
                        candidate: c,
                        boost: n,
                        exponent,
                        obstruction,
                    });
                }
            }
            BoostOutcome::Faces(f) => {
                s.face_failures += 1;
                if last {
                    per_face_failures.extend(f);
                }
            }
        }
    }
    Ok(FittingReport {
        fitted: false,
        witness: None,
        per_face_failures,
        support_failures,
        summaries,
        warnings: Vec::new(),
        n_max,
    })
}

/// Certificate for condition (1) at a rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCertificate {
    /// `P(r)`.
    pub value: Rat,
    /// The value ring is `Z[1/B]`.
    pub b: Int,
    pub b_primes: Vec<Int>,
    /// Exponent `v` and a prime of the denominator of `P(r)/r^v` not dividing `B`.
    pub failing: Option<(Exponent, Int)>,
}

fn check_point(p: &LaurentPoly, r: &[Rat]) -> Result<()> {
    check_base(p)?;
    if r.len() != p.dim() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, expected {}",
            r.len(),
            p.dim()
        )));
    }
    if let Some(x) = r.iter().find(|x| !x.is_positive()) {
        return Err(Error::InvalidArgument(format!(
            "coordinate {x} is not positive"
        )));
    }
    Ok(())
}

/// Condition (1) for `τ_r` at a point with positive rational coordinates.
pub fn condition_one_rational(p: &LaurentPoly, r: &[Rat]) -> Result<(bool, RationalCertificate)> {
    check_point(p, r)?;
    let value = p.eval(r);
    let b = lcm_all(
        p.support()
            .iter()
            .map(|w| (monomial_value(r, w) / &value).denom().clone())
            .collect::<Vec<_>>()
            .iter(),
    );
    let mut failing = None;
    for v in p.support() {
        let q = &value / monomial_value(r, &v);
        let rest = strip_shared_primes(q.denom(), &b);
        if !rest.is_one() {
            failing = Some((v, smallest_prime_factor(&rest)?));
            break;
        }
    }
    let b_primes = prime_factors(&b)?;
    Ok((
        failing.is_none(),
        RationalCertificate {
            value,
            b,
            b_primes,
            failing,
        },
    ))
}

pub fn classify_rational_trace(p: &LaurentPoly, r: &[Rat]) -> Result<TraceVerdict1D> {
    let (condition1, cert) = condition_one_rational(p, r)?;
    let approx_divisible = approximately_divisible(p)?;
    // the ideal of a rational point contains b_i x_i - a_i, so the point is
    // its own Zariski closure
    let really_isolated = true;
    Ok(TraceVerdict1D {
        condition1,
        really_isolated,
        approx_divisible,
        overall: TraceOverall::combine(approx_divisible, really_isolated, condition1),
        certificate: TraceCertificate::Rational(cert),
    })
}

/// `σ^v(g/P^k) = (g, x^{kv}) / (P, x^v)^k` for a vertex `v`.
pub fn vertex_trace_value(g: &LaurentPoly, p: &LaurentPoly, k: u32, v: &[i64]) -> Result<Rat> {
    let polytope = newton_polytope(p)?;
    if !polytope.vertex_points().iter().any(|x| x.as_slice() == v) {
        return Err(Error::NotAVertex(v.to_vec()));
    }
    let power = p.pow(k);
    if let Some(w) = g.support().into_iter().find(|w| power.coeff(w).is_zero()) {
        return Err(Error::SupportViolation(w, k));
    }
    let kv: Exponent = v.iter().map(|x| x * i64::from(k)).collect();
    let denom = num_traits::pow(p.coeff(v), k as usize);
    Ok(Rat::new(g.coeff(&kv), denom))
}
