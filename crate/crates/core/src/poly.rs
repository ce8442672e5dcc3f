//! Dense univariate polynomials over the integers, with exact Sturm root
//! counting over the rationals.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, sign};
use crate::{Error, Int, Rat, Result};

/// Integer polynomial `c0 + c1 x + ... + cn x^n` with `cn != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Int>,
}

impl IntPolynomial {
    /// Builds a polynomial from low-to-high coefficients, trimming high zeros.
    pub fn new(mut coeffs: Vec<Int>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Int {
        self.coeffs.last().expect("nonempty")
    }

    pub fn constant(&self) -> &Int {
        &self.coeffs[0]
    }

    pub fn coeff(&self, i: usize) -> Int {
        self.coeffs.get(i).cloned().unwrap_or_else(Int::zero)
    }

    pub fn content(&self) -> Int {
        gcd_all(&self.coeffs)
    }

    /// Content 1 and positive leading coefficient.
    pub fn primitive_normal_form(&self) -> Self {
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn is_primitive_normal(&self) -> bool {
        self.content().is_one() && self.leading().is_positive()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// `x^n p(1/x)`.
    pub fn reversal(&self) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Vec<Int> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Int::from(i))
            .collect()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeffs: int_mul(&self.coeffs, &other.coeffs),
        }
    }

    /// Exponents of the nonzero terms.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn to_rat(&self) -> Vec<Rat> {
        self.coeffs
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect()
    }

    /// Primitive integer polynomial proportional to a nonzero rational one.
    pub(crate) fn from_rat_primitive(p: &[Rat]) -> Result<Self> {
        let den = crate::arith::lcm_all(p.iter().map(|c| c.denom()));
        let coeffs: Vec<Int> = p
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        Ok(Self::new(coeffs)?.primitive_normal_form())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn int_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Dense rational polynomial helpers; the empty vector is the zero polynomial.
pub(crate) mod qpoly {
    use super::*;

    pub fn trim(p: &mut Vec<Rat>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = a.len().max(b.len());
        let mut out: Vec<Rat> = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Rat::zero);
                let y = b.get(i).cloned().unwrap_or_else(Rat::zero);
                x + y
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    pub fn scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
        let mut out: Vec<Rat> = a.iter().map(|c| c * s).collect();
        trim(&mut out);
        out
    }

    pub fn derivative(a: &[Rat]) -> Vec<Rat> {
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
            .collect()
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn div_rem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let db = b.len() - 1;
        let lead = b.last().expect("nonzero divisor").clone();
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![Rat::zero(); rem.len() - db];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let factor = rem.last().expect("nonempty") / &lead;
            for (i, c) in b.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }

    pub fn monic(a: &[Rat]) -> Vec<Rat> {
        match a.last() {
            Some(lead) => {
                let inv = lead.recip();
                scale(a, &inv)
            }
            None => Vec::new(),
        }
    }

    pub fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = div_rem(&x, &y);
            x = y;
            y = r;
        }
        monic(&x)
    }

    pub fn eval(a: &[Rat], x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in a.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Squarefree part `p / gcd(p, p')` as a rational polynomial.
pub(crate) fn squarefree_part(p: &IntPolynomial) -> Vec<Rat> {
    let q = p.to_rat();
    let g = qpoly::gcd(&q, &qpoly::derivative(&q));
    let (sf, _) = qpoly::div_rem(&q, &g);
    sf
}

/// `true` iff `gcd(p, p')` is constant.
pub fn is_squarefree(p: &IntPolynomial) -> bool {
    let q = p.to_rat();
    qpoly::gcd(&q, &qpoly::derivative(&q)).len() <= 1
}

/// Sturm sequence of a squarefree rational polynomial.
#[derive(Clone, Debug)]
pub(crate) struct SturmChain {
    chain: Vec<Vec<Rat>>,
}

impl SturmChain {
    pub fn new(p: Vec<Rat>) -> Self {
        let mut chain = vec![p.clone()];
        let mut prev = p;
        let mut cur = qpoly::derivative(&prev);
        while !cur.is_empty() {
            let (_, r) = qpoly::div_rem(&prev, &cur);
            let next = qpoly::scale(&r, &-Rat::one());
            chain.push(cur.clone());
            prev = cur;
            cur = next;
        }
        Self { chain }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rat) -> usize {
        Self::variations(self.chain.iter().map(|p| sign(&qpoly::eval(p, x))))
    }

    pub fn variations_at_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| p.last().map_or(0, sign)))
    }

    /// Distinct roots in `(a, b]`.
    pub fn count_half_open(&self, a: &Rat, b: &Rat) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    /// Distinct roots in `[a, b]`.
    pub fn count_closed(&self, a: &Rat, b: &Rat) -> usize {
        let at_a = usize::from(qpoly::eval(&self.chain[0], a).is_zero());
        self.count_half_open(a, b) + at_a
    }

    /// Distinct roots in `(a, ∞)`.
    pub fn count_above(&self, a: &Rat) -> usize {
        self.variations_at(a) - self.variations_at_infinity()
    }
}

/// Number of distinct real roots of `p` in the open interval `(0, ∞)`.
pub fn sturm_positive_root_count(p: &IntPolynomial) -> usize {
    if p.degree() == 0 {
        return 0;
    }
    SturmChain::new(squarefree_part(p)).count_above(&Rat::zero())
}

/// Number of distinct real roots of `p` in `[lo, hi]`.
pub fn sturm_root_count_closed(p: &IntPolynomial, lo: &Rat, hi: &Rat) -> usize {
    if p.degree() == 0 || lo > hi {
        return 0;
    }
    SturmChain::new(squarefree_part(p)).count_closed(lo, hi)
}

/// Cauchy bound: every root has absolute value below the returned rational.
pub fn cauchy_bound(p: &IntPolynomial) -> Rat {
    let lead = Rat::from_integer(p.leading().abs());
    let max = p.coeffs[..p.degree()]
        .iter()
        .map(|c| Rat::from_integer(c.abs()) / &lead)
        .max()
        .unwrap_or_else(Rat::zero);
    max + Rat::one()
}

pub(crate) fn gcd_of_exponents(exps: &[usize]) -> usize {
    exps.iter().fold(0usize, |acc, &e| acc.gcd(&e))
}
