//! Independent oracles shared by the integration and acceptance tests. None of
//! them call into the library's own algorithms for the quantity they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use goodtrace::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Distinct positive real roots, by Descartes' rule of signs with bisection
/// (the Vincent-Collins-Akritas scheme) on the squarefree part.
pub fn descartes_positive_roots(coeffs: &[i64]) -> usize {
    let mut p: Vec<Int> = coeffs.iter().map(|&c| Int::from(c)).collect();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    assert!(!p.is_empty(), "zero polynomial");
    while p[0].is_zero() {
        p.remove(0);
    }
    let p = squarefree_int(&p);
    let n = p.len() - 1;
    if n == 0 {
        return 0;
    }
    // 2^e bounds every root (Cauchy)
    let lead = p[n].abs();
    let max = p[..n]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Int::zero);
    let mut e = 0u32;
    while Int::one() << e <= &max / &lead + 1u32 {
        e += 1;
    }
    let scaled: Vec<Int> = p
        .iter()
        .enumerate()
        .map(|(i, c)| c << (e as usize * i))
        .collect();
    roots_in_unit_interval(&scaled)
}

fn roots_in_unit_interval(q: &[Int]) -> usize {
    let n = q.len() - 1;
    let mut rev: Vec<Int> = q.iter().rev().cloned().collect();
    taylor_shift_one(&mut rev);
    match sign_variations(&rev) {
        0 => 0,
        1 => 1,
        _ => {
            let left: Vec<Int> = q.iter().enumerate().map(|(i, c)| c << (n - i)).collect();
            let mut right = left.clone();
            taylor_shift_one(&mut right);
            let mid_root = usize::from(right[0].is_zero());
            roots_in_unit_interval(&left) + roots_in_unit_interval(&right) + mid_root
        }
    }
}

/// `p(x) -> p(x + 1)`, in place.
fn taylor_shift_one(p: &mut [Int]) {
    let n = p.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = p[j + 1].clone();
            p[j] += t;
        }
    }
}

fn sign_variations(p: &[Int]) -> usize {
    let signs: Vec<bool> = p
        .iter()
        .filter(|c| !c.is_zero())
        .map(Signed::is_positive)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn squarefree_int(p: &[Int]) -> Vec<Int> {
    let pr: Vec<Rat> = p.iter().map(|c| Rat::from_integer(c.clone())).collect();
    let d: Vec<Rat> = pr
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
        .collect();
    let g = qgcd(pr.clone(), d);
    let (q, _) = qdivrem(&pr, &g);
    let den = q.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<Int> = q
        .iter()
        .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn qtrim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qdivrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = qtrim(a.to_vec());
    let b = qtrim(b.to_vec());
    let db = b.len() - 1;
    let mut q = vec![Rat::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        q[shift] = f;
        r = qtrim(r);
    }
    (qtrim(q), r)
}

fn qgcd(mut a: Vec<Rat>, mut b: Vec<Rat>) -> Vec<Rat> {
    a = qtrim(a);
    b = qtrim(b);
    while !b.is_empty() {
        let (_, r) = qdivrem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Least `t <= t_max` with `Σ c_i a^{t(n-i)} x^i` monic after removing its
/// content, by direct search.
pub fn brute_scaling_witness(coeffs: &[Int], a: &Int, t_max: u32) -> Option<u32> {
    let n = coeffs.len() - 1;
    (0..=t_max).find(|&t| {
        let scaled: Vec<Int> = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(a.clone(), t as usize * (n - i)))
            .collect();
        let content = scaled.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
        (&scaled[n] / &content).abs().is_one()
    })
}

pub type Poly2 = BTreeMap<(i64, i64), Int>;

pub fn poly2(terms: &[((i64, i64), i64)]) -> Poly2 {
    terms.iter().map(|&(e, c)| (e, Int::from(c))).collect()
}

/// Schoolbook bivariate product.
pub fn mul2(a: &Poly2, b: &Poly2) -> Poly2 {
    let mut out = Poly2::new();
    for ((i, j), x) in a {
        for ((k, l), y) in b {
            *out.entry((i + k, j + l)).or_insert_with(Int::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn pow2(a: &Poly2, n: u32) -> Poly2 {
    (0..n).fold(poly2(&[((0, 0), 1)]), |acc, _| mul2(&acc, a))
}

/// Primes dividing a positive integer, by trial division.
pub fn small_primes_of(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The divisibility characterization for `P = 2 + 3x + 5y` at integer points.
pub fn closed_form_235(m: u64, n: u64) -> bool {
    small_primes_of(m)
        .iter()
        .all(|p| (2 + 5 * n).is_multiple_of(*p))
        && small_primes_of(n)
            .iter()
            .all(|q| (2 + 3 * m).is_multiple_of(*q))
}
