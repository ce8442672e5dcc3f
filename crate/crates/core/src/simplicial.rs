//! Traces on simplicial groups `Z^k`: order-unit goodness, goodness, and a
//! brute-force interval-lifting oracle.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::lcm_all;
use crate::par::{find_map_first, Execution};
use crate::{Error, Int, Rat, Result};

/// A nonzero vector of nonnegative rationals acting on `Z^k` by the dot product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceVector {
    entries: Vec<Rat>,
}

/// Coprime positive integers in ascending order, with the discarded zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub values: Vec<Int>,
    pub zeros: usize,
    /// `permutation[i]` is the input index of `values[i]`.
    pub permutation: Vec<usize>,
}

impl TraceVector {
    pub fn new(entries: Vec<Rat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("trace vector".into()));
        }
        if let Some(x) = entries.iter().find(|x| x.is_negative()) {
            return Err(Error::InvalidArgument(format!("negative entry {x}")));
        }
        if entries.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument("all-zero trace vector".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        Self::new(
            entries
                .iter()
                .map(|&x| Rat::from_integer(Int::from(x)))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    /// Smallest positive integer multiple, in input order.
    pub fn integer_form(&self) -> Vec<Int> {
        let den = lcm_all(self.entries.iter().map(|q| q.denom()));
        let ints: Vec<Int> = self
            .entries
            .iter()
            .map(|q| (q * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
        ints.into_iter().map(|x| x / &g).collect()
    }

    pub fn normal_form(&self) -> NormalForm {
        let ints = self.integer_form();
        let mut indexed: Vec<(usize, Int)> = ints
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect();
        let zeros = self.entries.len() - indexed.len();
        indexed.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        NormalForm {
            permutation: indexed.iter().map(|(i, _)| *i).collect(),
            values: indexed.into_iter().map(|(_, x)| x).collect(),
            zeros,
        }
    }
}

/// First index `j` (1-based, sorted order) with `n(j) > 1 + Σ_{i<j} n(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub value: Int,
    pub bound: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OugCertificate {
    pub normal_form: NormalForm,
    pub violation: Option<Violation>,
}

impl OugCertificate {
    pub fn describe(&self) -> String {
        match &self.violation {
            None => {
                format!(
                    "n(j) <= 1 + sum of n(i) for i < j holds for all {} entries",
                    self.normal_form.values.len()
                )
            }
            Some(v) if v.index == 1 => format!("n(1)={} != 1", v.value),
            Some(v) => {
                let sum = match v.index {
                    2 => "n(1)".to_string(),
                    3 => "n(1)+n(2)".to_string(),
                    j => format!("n(1)+...+n({})", j - 1),
                };
                format!("n({})={} > 1+{sum}={}", v.index, v.value, v.bound)
            }
        }
    }
}

pub fn is_order_unit_good(v: &TraceVector) -> (bool, OugCertificate) {
    let nf = v.normal_form();
    let mut prefix = Int::zero();
    let mut violation = None;
    for (j, n) in nf.values.iter().enumerate() {
        let bound = &prefix + Int::one();
        if n > &bound {
            violation = Some(Violation {
                index: j + 1,
                value: n.clone(),
                bound,
            });
            break;
        }
        prefix += n;
    }
    (
        violation.is_none(),
        OugCertificate {
            normal_form: nf,
            violation,
        },
    )
}

/// Up to scale, `v` is a 0-1 vector.
pub fn is_good(v: &TraceVector) -> bool {
    let nf = v.normal_form();
    nf.values.iter().all(One::is_one)
}

/// First failure of the lifting property: an interval top `b` and a value `s`
/// in the image of `Z^k` inside `[0, v·b]` that no `a ∈ [0, b]` attains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingFailure {
    pub b: Vec<u64>,
    pub s: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingResult {
    pub liftable: bool,
    pub counterexample: Option<LiftingFailure>,
    pub checked: u64,
}

/// Enumeration limit on the number of interval tops.
pub const ORACLE_ENVELOPE: u64 = 10_000_000;

/// Checks every order unit `b ∈ [1, bound]^k`.
pub fn interval_lifting_oracle(v: &TraceVector, bound: u32) -> Result<LiftingResult> {
    lifting_oracle_with(v, 1, bound, Execution::default())
}

/// Checks every `b ∈ [0, bound]^k`, the goodness variant.
pub fn goodness_lifting_oracle(v: &TraceVector, bound: u32) -> Result<LiftingResult> {
    lifting_oracle_with(v, 0, bound, Execution::default())
}

/// Lexicographically first failing `b` in `[low, bound]^k`, `b` in input order.
pub fn lifting_oracle_with(
    v: &TraceVector,
    low: u32,
    bound: u32,
    exec: Execution,
) -> Result<LiftingResult> {
    if bound == 0 || low > bound {
        return Err(Error::InvalidArgument("bound must be positive".into()));
    }
    let ints = v.integer_form();
    let k = ints.len() as u32;
    let width = u64::from(bound - low + 1);
    let count = width
        .checked_pow(k)
        .filter(|c| *c <= ORACLE_ENVELOPE)
        .ok_or_else(|| {
            Error::SizeEnvelope(format!(
                "{width}^{k} interval tops exceed {ORACLE_ENVELOPE}"
            ))
        })?;
    let values: Vec<u64> = ints
        .iter()
        .map(|x| x.to_u64().filter(|&x| x <= ORACLE_ENVELOPE))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::SizeEnvelope("entries too large for enumeration".into()))?;
    let total: u64 = values.iter().sum::<u64>() * u64::from(bound);
    if total > ORACLE_ENVELOPE {
        return Err(Error::SizeEnvelope(format!(
            "interval value {total} exceeds {ORACLE_ENVELOPE}"
        )));
    }
    let g = values.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    let failure = find_map_first(exec, count as usize, |idx| {
        let mut rest = idx as u64;
        let mut b = vec![0u64; values.len()];
        for slot in b.iter_mut().rev() {
            *slot = u64::from(low) + rest % width;
            rest /= width;
        }
        first_unreachable(&values, &b, g).map(|s| LiftingFailure { b, s })
    });
    Ok(LiftingResult {
        liftable: failure.is_none(),
        counterexample: failure,
        checked: count,
    })
}

/// Least multiple of `g` in `[0, v·b]` that is not a bounded subset sum.
fn first_unreachable(values: &[u64], b: &[u64], g: u64) -> Option<u64> {
    let top: u64 = values.iter().zip(b).map(|(v, c)| v * c).sum();
    let mut reach = Bits::new(top as usize + 1);
    reach.set(0);
    for (&v, &c) in values.iter().zip(b) {
        if v == 0 {
            continue;
        }
        // binary splitting of the multiplicity
        let mut remaining = c;
        let mut chunk = 1u64;
        while remaining > 0 {
            let take = chunk.min(remaining);
            reach.or_shifted((v * take) as usize);
            remaining -= take;
            chunk *= 2;
        }
    }
    (0..=top)
        .step_by(g.max(1) as usize)
        .find(|&s| !reach.get(s as usize))
}

struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// `self |= self << shift`, truncated to the length.
    fn or_shifted(&mut self, shift: usize) {
        if shift >= self.len {
            return;
        }
        let (ws, bs) = (shift / 64, shift % 64);
        for i in (ws..self.words.len()).rev() {
            let mut w = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            self.words[i] |= w;
        }
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= u64::MAX >> extra;
        }
    }
}
