//! Positive real algebraic numbers in one variable and the complete trace
//! classifier for `R_P` with `P` a one-variable polynomial.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{positive_divisors, smallest_prime_factor, strip_shared_primes};
use crate::laurent::RationalCertificate;
use crate::poly::{
    cauchy_bound, gcd_of_exponents, is_squarefree, qpoly, squarefree_part, IntPolynomial,
    SturmChain,
};
use crate::{Error, Int, Rat, Result};

pub use crate::poly::sturm_positive_root_count;

/// Which root of the minimal polynomial is meant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RootSelector {
    /// The minimal polynomial has exactly one positive root.
    UniquePositiveRoot,
    /// Closed interval of nonnegative rationals holding exactly one real root.
    Interval(Rat, Rat),
}

/// A positive real algebraic number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber1D {
    minpoly: IntPolynomial,
    selector: RootSelector,
    isolation: (Rat, Rat),
}

impl AlgebraicNumber1D {
    /// Validates and normalizes. Irreducibility of `minpoly` is the caller's
    /// claim; see [`kronecker_irreducible`] for a check.
    pub fn new(minpoly: IntPolynomial, selector: RootSelector) -> Result<Self> {
        let minpoly = minpoly.primitive_normal_form();
        let invalid = |m: &str| Err(Error::InvalidAlgebraic(m.to_string()));
        if minpoly.degree() == 0 {
            return invalid("minimal polynomial is constant");
        }
        if minpoly.constant().is_zero() {
            return invalid("zero is not a positive root");
        }
        if !is_squarefree(&minpoly) {
            return invalid("minimal polynomial is not squarefree");
        }
        let chain = SturmChain::new(squarefree_part(&minpoly));
        let positive = chain.count_above(&Rat::zero());
        if positive == 0 {
            return invalid("no positive real root");
        }
        let isolation = match &selector {
            RootSelector::UniquePositiveRoot => {
                if positive != 1 {
                    return Err(Error::InvalidAlgebraic(format!(
                        "{positive} positive roots; an isolating interval is required"
                    )));
                }
                (Rat::zero(), cauchy_bound(&minpoly))
            }
            RootSelector::Interval(lo, hi) => {
                if lo.is_negative() || lo > hi {
                    return invalid("interval must satisfy 0 <= lo <= hi");
                }
                let n = chain.count_closed(lo, hi);
                if n != 1 {
                    return Err(Error::InvalidAlgebraic(format!(
                        "interval [{lo}, {hi}] holds {n} roots, expected 1"
                    )));
                }
                (lo.clone(), hi.clone())
            }
        };
        Ok(Self {
            minpoly,
            selector,
            isolation,
        })
    }

    /// The unique positive root of `minpoly`.
    pub fn unique_positive(minpoly: IntPolynomial) -> Result<Self> {
        Self::new(minpoly, RootSelector::UniquePositiveRoot)
    }

    /// The `index`-th positive root of `minpoly` in increasing order.
    pub fn nth_positive_root(minpoly: IntPolynomial, index: usize) -> Result<Self> {
        let roots = isolate_positive_roots(&minpoly.primitive_normal_form());
        let Some((lo, hi)) = roots.get(index).cloned() else {
            return Err(Error::InvalidAlgebraic(format!(
                "only {} positive roots, index {index} requested",
                roots.len()
            )));
        };
        Self::new(minpoly, RootSelector::Interval(lo, hi))
    }

    /// The positive rational `q`.
    pub fn rational(q: &Rat) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::InvalidAlgebraic(format!("{q} is not positive")));
        }
        let p = IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()])?;
        Self::unique_positive(p)
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn selector(&self) -> &RootSelector {
        &self.selector
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    /// A closed interval holding this root and no other root of the minimal
    /// polynomial.
    pub fn isolating_interval(&self) -> (Rat, Rat) {
        self.isolation.clone()
    }

    /// Isolating interval of width at most `width` with a positive left end.
    pub fn refined_interval(&self, width: &Rat) -> (Rat, Rat) {
        let chain = SturmChain::new(squarefree_part(&self.minpoly));
        let sf = squarefree_part(&self.minpoly);
        let (mut lo, mut hi) = self.isolation.clone();
        let two = Rat::from_integer(Int::from(2));
        while &(&hi - &lo) > width || lo.is_zero() {
            let mid = (&lo + &hi) / &two;
            if qpoly::eval(&sf, &mid).is_zero() {
                return (mid.clone(), mid);
            }
            if chain.count_closed(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    /// `1/r`, with the reversed minimal polynomial.
    pub fn reciprocal(&self) -> Self {
        let minpoly = self
            .minpoly
            .reversal()
            .expect("nonzero constant term")
            .primitive_normal_form();
        let selector = match self.selector {
            RootSelector::UniquePositiveRoot => RootSelector::UniquePositiveRoot,
            RootSelector::Interval(..) => {
                let (lo, hi) = self.refined_interval(&(&self.isolation.1 - &self.isolation.0));
                RootSelector::Interval(hi.recip(), lo.recip())
            }
        };
        Self::new(minpoly, selector).expect("reciprocal of a valid root is valid")
    }

    /// `r·s`, with minimal polynomial found by a resultant and exact
    /// factorization. Fails if some factor exceeds `degree_limit`.
    pub fn product(&self, other: &Self, degree_limit: usize) -> Result<Self> {
        let res = product_resultant(&self.minpoly, &other.minpoly);
        let sf = IntPolynomial::from_rat_primitive(&squarefree_part(&res))?;
        let factors = factor_completely(&sf, degree_limit)?;
        let chain = SturmChain::new(sf.to_rat());
        let mut width = Rat::one();
        loop {
            let (a_lo, a_hi) = self.refined_interval(&width);
            let (b_lo, b_hi) = other.refined_interval(&width);
            let lo = &a_lo * &b_lo;
            let hi = &a_hi * &b_hi;
            if chain.count_closed(&lo, &hi) == 1 {
                let factor = factors
                    .iter()
                    .find(|f| crate::poly::sturm_root_count_closed(f, &lo, &hi) == 1)
                    .expect("the root lies on exactly one factor")
                    .clone();
                return Self::new(factor, RootSelector::Interval(lo, hi));
            }
            width /= Int::from(16);
        }
    }
}

/// Closed isolating intervals of the distinct positive roots, in increasing order.
pub fn isolate_positive_roots(p: &IntPolynomial) -> Vec<(Rat, Rat)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let sf = squarefree_part(p);
    let chain = SturmChain::new(sf.clone());
    let two = Rat::from_integer(Int::from(2));
    let mut out = Vec::new();
    let mut stack = vec![(Rat::zero(), cauchy_bound(p))];
    while let Some((a, b)) = stack.pop() {
        let open = chain.count_half_open(&a, &b);
        if open == 0 {
            continue;
        }
        if open == 1 && (a.is_zero() || !qpoly::eval(&sf, &a).is_zero()) {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / &two;
        // right half first so the left half pops first
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out
}

/// `true` iff `r` has no other positive real conjugate.
pub fn is_really_isolated_1d(r: &AlgebraicNumber1D) -> bool {
    sturm_positive_root_count(r.minpoly()) == 1
}

/// Outcome of the scaling test: does `a^t·r` become an algebraic integer?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledIntegrality {
    pub holds: bool,
    /// Least `t` that works, when `holds`.
    pub witness_t: Option<u32>,
    /// Leading coefficient of the minimal polynomial.
    pub leading: Int,
    /// Part of the leading coefficient coprime to `a`; equal to 1 iff `holds`.
    pub residual: Int,
}

/// Decides whether `a^t·r` is an algebraic integer for some `t >= 0`.
pub fn scaled_integrality(r: &AlgebraicNumber1D, a: &Int) -> Result<ScaledIntegrality> {
    if !a.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "scaling base must be positive, got {a}"
        )));
    }
    let leading = r.minpoly().leading().clone();
    let residual = strip_shared_primes(&leading, a);
    let holds = residual.is_one();
    let witness_t = if holds {
        // every prime power in c_n is at most its bit length
        let t_max = u32::try_from(leading.bits()).unwrap_or(u32::MAX);
        let t = monic_scaling_witness(r.minpoly(), a, t_max);
        debug_assert!(t.is_some(), "criterion and witness search disagree");
        t
    } else {
        None
    };
    Ok(ScaledIntegrality {
        holds,
        witness_t,
        leading,
        residual,
    })
}

/// Least `t <= t_max` for which `Σ c_i a^{t(n-i)} x^i`, divided by its content,
/// is monic.
pub fn monic_scaling_witness(minpoly: &IntPolynomial, a: &Int, t_max: u32) -> Option<u32> {
    let n = minpoly.degree();
    let mut power = Int::one();
    for t in 0..=t_max {
        let scaled = scale_roots(minpoly, &power, n);
        if scaled.primitive_normal_form().is_monic() {
            return Some(t);
        }
        power *= a;
    }
    None
}

/// Minimal polynomial of `s·r` up to content: coefficients `c_i s^(n-i)`.
fn scale_roots(p: &IntPolynomial, s: &Int, n: usize) -> IntPolynomial {
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * num_traits::pow(s.clone(), n - i))
        .collect();
    IntPolynomial::new(coeffs).expect("nonzero")
}

/// One end of condition (1) in one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndCheck {
    /// End coefficient of `P` used as the scaling base.
    pub coefficient: Int,
    pub scaling: ScaledIntegrality,
    /// Smallest prime of the minimal polynomial coefficient that does not
    /// divide the end coefficient.
    pub failing_prime: Option<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionOneCertificate {
    /// `a_k^t·r` integral: scaling of `r` by the top coefficient.
    pub top: EndCheck,
    /// `a_0^s/r` integral: scaling of `1/r` by the constant coefficient.
    pub bottom: EndCheck,
    /// `P` has interior zero coefficients.
    pub extended_hypothesis: bool,
}

/// Checks the standing hypotheses on a one-variable `P`.
pub fn check_polynomial_1d(p: &IntPolynomial) -> Result<()> {
    if let Some((i, c)) = p.coeffs().iter().enumerate().find(|(_, c)| c.is_negative()) {
        return Err(Error::NegativeCoefficient(format!(
            "coefficient {c} of x^{i}"
        )));
    }
    if p.constant().is_zero() {
        return Err(Error::ZeroEndCoefficient);
    }
    if p.degree() == 0 || gcd_of_exponents(&p.support()) != 1 {
        return Err(Error::NotProjectivelyFaithful);
    }
    Ok(())
}

fn end_check(r: &AlgebraicNumber1D, coefficient: &Int) -> Result<EndCheck> {
    let scaling = scaled_integrality(r, coefficient)?;
    let failing_prime = if scaling.holds {
        None
    } else {
        Some(smallest_prime_factor(&scaling.residual)?)
    };
    Ok(EndCheck {
        coefficient: coefficient.clone(),
        scaling,
        failing_prime,
    })
}

/// Condition (1) for `τ_r` on `R_P`: the value group of every nonzero order
/// ideal is all of `τ_r(R_P)`.
pub fn condition_one_1d(
    p: &IntPolynomial,
    r: &AlgebraicNumber1D,
) -> Result<(bool, ConditionOneCertificate)> {
    check_polynomial_1d(p)?;
    let top = end_check(r, p.leading())?;
    let bottom = end_check(&r.reciprocal(), p.constant())?;
    let extended_hypothesis = p.coeffs().iter().any(Zero::is_zero);
    let holds = top.scaling.holds && bottom.scaling.holds;
    Ok((
        holds,
        ConditionOneCertificate {
            top,
            bottom,
            extended_hypothesis,
        },
    ))
}

/// Monic with constant term `±1`.
pub fn is_algebraic_unit(r: &AlgebraicNumber1D) -> bool {
    r.minpoly().is_monic() && r.minpoly().constant().abs().is_one()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceOverall {
    Good,
    OrderUnitGoodOnly,
    NotOrderUnitGood,
    /// `R_P` is not approximately divisible, so the classification does not apply.
    NotApplicableDiscrete,
}

impl TraceOverall {
    pub fn combine(approx_divisible: bool, really_isolated: bool, condition1: bool) -> Self {
        match (approx_divisible, really_isolated, condition1) {
            (false, _, _) => TraceOverall::NotApplicableDiscrete,
            (true, false, _) => TraceOverall::NotOrderUnitGood,
            (true, true, true) => TraceOverall::Good,
            (true, true, false) => TraceOverall::OrderUnitGoodOnly,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TraceOverall::Good => "Good",
            TraceOverall::OrderUnitGoodOnly => "OrderUnitGoodOnly",
            TraceOverall::NotOrderUnitGood => "NotOrderUnitGood",
            TraceOverall::NotApplicableDiscrete => "NotApplicableDiscrete",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceCertificate {
    Algebraic {
        condition_one: ConditionOneCertificate,
        positive_conjugates: usize,
        end_coefficients: (Int, Int),
    },
    Rational(RationalCertificate),
}

/// Classification of a faithful pure trace `τ_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceVerdict1D {
    pub condition1: bool,
    pub really_isolated: bool,
    pub approx_divisible: bool,
    pub overall: TraceOverall,
    pub certificate: TraceCertificate,
}

pub fn classify_trace_1d(p: &IntPolynomial, r: &AlgebraicNumber1D) -> Result<TraceVerdict1D> {
    let (condition1, cert) = condition_one_1d(p, r)?;
    let positive_conjugates = sturm_positive_root_count(r.minpoly());
    let really_isolated = positive_conjugates == 1;
    let a0 = p.constant().clone();
    let ak = p.leading().clone();
    let approx_divisible = a0 > Int::one() && ak > Int::one();
    Ok(TraceVerdict1D {
        condition1,
        really_isolated,
        approx_divisible,
        overall: TraceOverall::combine(approx_divisible, really_isolated, condition1),
        certificate: TraceCertificate::Algebraic {
            condition_one: cert,
            positive_conjugates,
            end_coefficients: (a0, ak),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A nontrivial factor, primitive with positive leading coefficient.
    Reducible(IntPolynomial),
    Unknown,
}

/// Upper bound on interpolation candidates tried per factor degree.
const KRONECKER_BUDGET: u128 = 2_000_000;

/// Irreducibility over `Q` by Kronecker's method, up to `degree_limit`.
pub fn kronecker_irreducible(p: &IntPolynomial, degree_limit: usize) -> Irreducibility {
    let p = p.primitive_normal_form();
    let n = p.degree();
    if n > degree_limit {
        return Irreducibility::Unknown;
    }
    if n <= 1 {
        return Irreducibility::Irreducible;
    }
    if p.constant().is_zero() {
        return Irreducibility::Reducible(IntPolynomial::from_i64(&[0, 1]).expect("x"));
    }
    match rational_root_factor(&p) {
        Ok(Some(f)) => return Irreducibility::Reducible(f),
        Ok(None) => {}
        Err(_) => return Irreducibility::Unknown,
    }
    for d in 2..=n / 2 {
        match factor_of_degree(&p, d) {
            Some(Some(f)) => return Irreducibility::Reducible(f),
            Some(None) => {}
            None => return Irreducibility::Unknown,
        }
    }
    Irreducibility::Irreducible
}

/// Linear factor `q x - p` for a rational root `p/q`, smallest `|p/q|` first.
fn rational_root_factor(p: &IntPolynomial) -> Result<Option<IntPolynomial>> {
    let nums = positive_divisors(p.constant())?;
    let dens = positive_divisors(p.leading())?;
    let mut candidates: Vec<Rat> = Vec::new();
    for a in &nums {
        for b in &dens {
            if a.gcd(b).is_one() {
                let q = Rat::new(a.clone(), b.clone());
                candidates.push(q.clone());
                candidates.push(-q);
            }
        }
    }
    candidates.sort_by(|x, y| x.abs().cmp(&y.abs()).then(y.cmp(x)));
    for q in candidates {
        if p.eval(&q).is_zero() {
            let f = IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()])?;
            return Ok(Some(f.primitive_normal_form()));
        }
    }
    Ok(None)
}

/// `Some(Some(f))` for a factor of degree `d`, `Some(None)` if there is none,
/// `None` if the search exceeds its budget.
fn factor_of_degree(p: &IntPolynomial, d: usize) -> Option<Option<IntPolynomial>> {
    // candidate evaluation points ordered 0, 1, -1, 2, -2, ...
    let pool: Vec<Int> = (0..(4 * d as i64 + 12))
        .map(|i| {
            if i % 2 == 1 {
                Int::from((i + 1) / 2)
            } else {
                Int::from(-(i / 2))
            }
        })
        .collect();
    let mut scored: Vec<(usize, Int, Vec<Int>)> = Vec::new();
    for x in pool {
        let y = p.eval_int(&x);
        if y.is_zero() {
            continue;
        }
        if let Ok(divs) = positive_divisors(&y) {
            scored.push((divs.len(), x, divs));
        }
    }
    if scored.len() < d {
        return None;
    }
    scored.sort_by_key(|(count, _, _)| *count);
    scored.truncate(d);
    let leads = positive_divisors(p.leading()).ok()?;
    let total: u128 = scored
        .iter()
        .map(|(c, _, _)| 2 * *c as u128)
        .product::<u128>()
        * leads.len() as u128;
    if total > KRONECKER_BUDGET {
        return None;
    }
    let xs: Vec<Rat> = scored
        .iter()
        .map(|(_, x, _)| Rat::from_integer(x.clone()))
        .collect();
    let lagrange = lagrange_basis(&xs);
    let node_poly = xs.iter().fold(vec![Rat::one()], |acc, x| {
        qpoly::mul(&acc, &[-x.clone(), Rat::one()])
    });
    let value_choices: Vec<Vec<Int>> = scored
        .iter()
        .map(|(_, _, divs)| divs.iter().flat_map(|v| [v.clone(), -v.clone()]).collect())
        .collect();
    let target = p.to_rat();
    let mut index = vec![0usize; d];
    loop {
        for c in &leads {
            let mut g = qpoly::scale(&node_poly, &Rat::from_integer(c.clone()));
            for (i, basis) in lagrange.iter().enumerate() {
                let y = Rat::from_integer(value_choices[i][index[i]].clone());
                g = qpoly::add(&g, &qpoly::scale(basis, &y));
            }
            if g.len() == d + 1 && g.iter().all(|c| c.is_integer()) {
                let (_, rem) = qpoly::div_rem(&target, &g);
                if rem.is_empty() {
                    let f = IntPolynomial::from_rat_primitive(&g).ok()?;
                    return Some(Some(f));
                }
            }
        }
        // odometer over value choices
        let mut k = 0;
        loop {
            if k == d {
                return Some(None);
            }
            index[k] += 1;
            if index[k] < value_choices[k].len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

fn lagrange_basis(xs: &[Rat]) -> Vec<Vec<Rat>> {
    (0..xs.len())
        .map(|i| {
            let mut basis = vec![Rat::one()];
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    let denom = (&xs[i] - xj).recip();
                    basis = qpoly::mul(&basis, &[-xj * &denom, denom]);
                }
            }
            basis
        })
        .collect()
}

/// Irreducible factors of a squarefree primitive polynomial.
fn factor_completely(p: &IntPolynomial, degree_limit: usize) -> Result<Vec<IntPolynomial>> {
    let mut pending = vec![p.primitive_normal_form()];
    let mut done = Vec::new();
    while let Some(f) = pending.pop() {
        match kronecker_irreducible(&f, degree_limit) {
            Irreducibility::Irreducible => done.push(f),
            Irreducibility::Reducible(g) => {
                let (q, rem) = qpoly::div_rem(&f.to_rat(), &g.to_rat());
                debug_assert!(rem.is_empty());
                pending.push(g);
                pending.push(IntPolynomial::from_rat_primitive(&q)?);
            }
            Irreducibility::Unknown => {
                return Err(Error::Unsupported(format!(
                    "cannot factor {f} within degree limit {degree_limit}"
                )))
            }
        }
    }
    Ok(done)
}

/// `Res_y(p(y), y^m q(x/y))`, whose roots are the products of roots of `p`
/// and `q`.
pub fn product_resultant(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    let n = p.degree();
    let m = q.degree();
    let deg = n * m;
    let xs: Vec<Rat> = (0..=deg).map(|i| Rat::from_integer(Int::from(i))).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x| {
            let x = x.to_integer();
            // y^m q(x/y) as a polynomial in y: coefficient of y^(m-j) is q_j x^j
            let mut coeffs = vec![Int::zero(); m + 1];
            for (j, c) in q.coeffs().iter().enumerate() {
                coeffs[m - j] = c * num_traits::pow(x.clone(), j);
            }
            Rat::from_integer(sylvester_resultant(p.coeffs(), &coeffs))
        })
        .collect();
    let basis = lagrange_basis(&xs);
    let mut acc: Vec<Rat> = Vec::new();
    for (b, y) in basis.iter().zip(&ys) {
        acc = qpoly::add(&acc, &qpoly::scale(b, y));
    }
    IntPolynomial::from_rat_primitive(&acc).expect("resultant is nonzero")
}

/// Resultant of two integer polynomials with nonzero leading coefficients.
fn sylvester_resultant(a: &[Int], b: &[Int]) -> Int {
    let n = a.len() - 1;
    let m = b.len() - 1;
    let size = n + m;
    let mut mat = vec![vec![Int::zero(); size]; size];
    for row in 0..m {
        for (j, c) in a.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..n {
        for (j, c) in b.iter().rev().enumerate() {
            mat[m + row][row + j] = c.clone();
        }
    }
    crate::zmatrix::determinant(mat)
}
