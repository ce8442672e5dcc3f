//! Exact arithmetic in multiquadratic fields `Q(√a, √b, ...)` with positive
//! squarefree radicands.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{format_rational, prime_factors_u64};
use crate::Rat;

/// `Σ c_d √d` over squarefree `d >= 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<u64, Rat>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: Rat) -> Self {
        Self::term(1, q)
    }

    /// `q·√d` for squarefree `d`.
    pub fn term(d: u64, q: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(d, q);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `√d`.
    pub fn coeff(&self, d: u64) -> Rat {
        self.terms.get(&d).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &Rat)> {
        self.terms.iter()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    fn accumulate(&mut self, d: u64, q: Rat) {
        let e = self.terms.entry(d).or_insert_with(Rat::zero);
        *e += q;
        if e.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, q) in &other.terms {
            out.accumulate(*d, q.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, q) in &other.terms {
            out.accumulate(*d, -q.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(d, c)| (*d, c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let g = a.gcd(b);
                let d = (a / g) * (b / g);
                out.accumulate(d, x * y * Rat::from_integer(g.into()));
            }
        }
        out
    }

    /// Applies the automorphism negating `√p` for each prime `p` in `flip`.
    fn conjugate(&self, flip: &[u64]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(d, q)| {
                let odd = flip.iter().filter(|p| d % **p == 0).count() % 2 == 1;
                (*d, if odd { -q.clone() } else { q.clone() })
            })
            .collect();
        Self { terms }
    }

    fn primes(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self
            .terms
            .keys()
            .flat_map(|d| prime_factors_u64(*d))
            .collect();
        set.into_iter().collect()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let primes = self.primes();
        let mut others = Self::rational(Rat::one());
        for mask in 1u32..(1 << primes.len()) {
            let flip: Vec<u64> = primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| *p)
                .collect();
            others = others.mul(&self.conjugate(&flip));
        }
        let norm = self.mul(&others).as_rational().expect("norm is rational");
        Some(others.scale(&norm.recip()))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, q)| {
                if *d == 1 {
                    format_rational(q)
                } else {
                    format!("{}*sqrt({d})", format_rational(q))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn dot(a: &[Element], b: &[Element]) -> Element {
    a.iter()
        .zip(b)
        .fold(Element::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Row echelon reduction; returns the indices of a maximal independent set of
/// rows, chosen greedily in order.
pub fn independent_rows(rows: &[Vec<Element>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<Element>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (pivot, b) in &basis {
            if !r[*pivot].is_zero() {
                let f = r[*pivot].clone();
                r = r.iter().zip(b).map(|(x, y)| x.sub(&f.mul(y))).collect();
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            let inv = r[p].inverse().expect("nonzero");
            let r: Vec<Element> = r.iter().map(|x| x.mul(&inv)).collect();
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let f = b[p].clone();
                    *b = b.iter().zip(&r).map(|(x, y)| x.sub(&f.mul(y))).collect();
                }
            }
            basis.push((p, r));
            chosen.push(i);
        }
    }
    chosen
}

/// Inverse of a square matrix over the field.
pub fn inverse(m: &[Vec<Element>]) -> Option<Vec<Vec<Element>>> {
    let n = m.len();
    let mut a: Vec<Vec<Element>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Element::rational(Rat::one())
                } else {
                    Element::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].inverse().expect("nonzero");
        a[c] = a[c].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot = a[c].clone();
                a[i] = a[i]
                    .iter()
                    .zip(&pivot)
                    .map(|(x, y)| x.sub(&f.mul(y)))
                    .collect();
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A nonzero `w` with `M w = 0`, if one exists.
pub fn null_vector(m: &[Vec<Element>], n: usize) -> Option<Vec<Element>> {
    let mut rows: Vec<Vec<Element>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero");
        rows[r] = rows[r].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[r].clone();
                rows[i] = rows[i]
                    .iter()
                    .zip(&pivot)
                    .map(|(x, y)| x.sub(&f.mul(y)))
                    .collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut w = vec![Element::zero(); n];
    w[free] = Element::rational(Rat::one());
    for (row, &p) in rows.iter().zip(&pivots) {
        w[p] = row[free].scale(&-Rat::one());
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn sqrt(d: u64) -> Element {
        Element::term(d, rat_int(1))
    }

    #[test]
    fn products_of_radicals() {
        assert_eq!(sqrt(6).mul(&sqrt(15)), Element::term(10, rat_int(3)));
        assert_eq!(sqrt(2).mul(&sqrt(2)), Element::rational(rat_int(2)));
    }

    #[test]
    fn inverses() {
        let x = sqrt(2).add(&sqrt(3)).add(&Element::rational(rat(1, 2)));
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), Element::rational(rat_int(1)));
        assert_eq!(sqrt(6).inverse().unwrap(), Element::term(6, rat(1, 6)));
        assert!(Element::zero().inverse().is_none());
    }

    #[test]
    fn linear_algebra() {
        let one = Element::rational(rat_int(1));
        let rows = vec![
            vec![sqrt(2), sqrt(3)],
            vec![sqrt(6), Element::rational(rat_int(3))],
        ];
        // second row = √3 · first row
        assert_eq!(independent_rows(&rows), vec![0]);
        assert!(inverse(&rows).is_none());
        let w = null_vector(&rows, 2).unwrap();
        assert!(dot(&rows[0], &w).is_zero());
        let m = vec![vec![sqrt(2), one.clone()], vec![one.clone(), sqrt(2)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(dot(&m[0], &[inv[0][0].clone(), inv[1][0].clone()]), one);
    }
}
