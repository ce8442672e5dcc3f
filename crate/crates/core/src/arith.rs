//! Integer and rational helpers: parsing, radicals, and bounded prime factorization.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Int, Rat, Result};

/// Trial division bound used by every factorization in the crate.
pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// Below this bound the Miller-Rabin test with the first thirteen prime bases
/// is deterministic.
const MR_DETERMINISTIC_BOUND: &str = "3317044064679887385961981";

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, or a decimal integer with optional sign.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("malformed rational {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "zero denominator in {text:?}"
                )));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Canonical text form of a rational: `"p/q"` in lowest terms, or `"p"`.
pub fn format_rational(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::one(), |acc, v| acc.lcm(v))
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

/// Removes from `|n|` every prime that also divides `a`.
///
/// The result is 1 exactly when every prime factor of `n` divides `a`.
pub fn strip_shared_primes(n: &Int, a: &Int) -> Int {
    let mut n = n.abs();
    if n.is_zero() {
        return n;
    }
    loop {
        let g = n.gcd(a);
        if g.is_one() {
            return n;
        }
        n /= g;
    }
}

/// `true` iff every prime dividing `n` divides `a`.
pub fn primes_divide(n: &Int, a: &Int) -> bool {
    strip_shared_primes(n, a).is_one()
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_DIVISION_BOUND as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if sieve[i] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| i as u32)
            .collect()
    })
}

fn miller_rabin(n: &Int) -> bool {
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let one = Int::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for &b in &BASES {
        let b = Int::from(b);
        if &b >= n {
            continue;
        }
        let mut x = b.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Decides primality of a cofactor with no prime factor up to the trial bound.
fn cofactor_is_prime(n: &Int) -> Result<bool> {
    let bound = Int::from(TRIAL_DIVISION_BOUND);
    if n <= &(&bound * &bound) {
        return Ok(true);
    }
    let mr_bound: Int = MR_DETERMINISTIC_BOUND.parse().expect("constant");
    if n < &mr_bound {
        return Ok(miller_rabin(n));
    }
    Err(Error::FactorizationIncomplete(n.clone()))
}

/// Smallest prime factor of `|n|`, for `|n| > 1`.
pub fn smallest_prime_factor(n: &Int) -> Result<Int> {
    let n = n.abs();
    if n <= Int::one() {
        return Err(Error::InvalidArgument(format!("{n} has no prime factors")));
    }
    if let Some(small) = n.to_u64() {
        for &p in small_primes() {
            let p = p as u64;
            if p * p > small {
                return Ok(n);
            }
            if small % p == 0 {
                return Ok(Int::from(p));
            }
        }
    } else {
        for &p in small_primes() {
            if (&n % p).is_zero() {
                return Ok(Int::from(p));
            }
        }
    }
    if cofactor_is_prime(&n)? {
        Ok(n)
    } else {
        Err(Error::FactorizationIncomplete(n))
    }
}

/// Distinct prime factors of `|n|` in increasing order (empty for 0 and ±1).
pub fn prime_factors(n: &Int) -> Result<Vec<Int>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Ok(out);
    }
    while n > Int::one() {
        let p = smallest_prime_factor(&n)?;
        while (&n % &p).is_zero() {
            n /= &p;
        }
        out.push(p);
    }
    Ok(out)
}

/// Positive divisors of `|n|`, `n != 0`, in increasing order.
pub fn positive_divisors(n: &Int) -> Result<Vec<Int>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::InvalidArgument("divisors of zero".into()));
    }
    let mut divisors = vec![Int::one()];
    while n > Int::one() {
        let p = smallest_prime_factor(&n)?;
        let mut power = Int::one();
        let base = divisors.clone();
        while (&n % &p).is_zero() {
            n /= &p;
            power *= &p;
            divisors.extend(base.iter().map(|d| d * &power));
        }
    }
    divisors.sort();
    Ok(divisors)
}

pub fn is_squarefree_u64(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
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

/// Floor of a rational.
pub fn floor(q: &Rat) -> Int {
    q.numer().div_floor(q.denom())
}

pub fn sign(q: &Rat) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Integer square root enclosure of `sqrt(n)` with denominator `10^digits`.
pub fn sqrt_enclosure(n: u64, digits: u32) -> (Rat, Rat) {
    let scale = Int::from(10u32).pow(digits);
    let scaled = Int::from(n) * &scale * &scale;
    let root = scaled.sqrt();
    let lo = Rat::new(root.clone(), scale.clone());
    let hi = if &root * &root == scaled {
        lo.clone()
    } else {
        Rat::new(root + 1, scale)
    };
    (lo, hi)
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
