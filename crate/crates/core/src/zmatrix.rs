//! Dense integer and rational matrices: Hermite and Smith normal forms,
//! integer kernels, determinants, and rational row reduction.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::lcm_all;
use crate::{Int, Rat};

pub type IntMatrix = Vec<Vec<Int>>;
pub type RatMatrix = Vec<Vec<Rat>>;

fn cols(m: &[Vec<Int>]) -> usize {
    m.first().map_or(0, Vec::len)
}

/// Row Hermite normal form `H = U·A` with `U` unimodular.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero
/// rows come last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite(a: &[Vec<Int>]) -> Hermite {
    let m = a.len();
    let n = cols(a);
    let mut h: IntMatrix = a.to_vec();
    let mut u: IntMatrix = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let best = (row..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(best) = best else { break };
            h.swap(row, best);
            u.swap(row, best);
            let mut done = true;
            for i in row + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[row][col]);
                sub_row(&mut h, i, row, &q);
                sub_row(&mut u, i, row, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            negate_row(&mut h, row);
            negate_row(&mut u, row);
        }
        for i in 0..row {
            let q = h[i][col].div_floor(&h[row][col]);
            if !q.is_zero() {
                sub_row(&mut h, i, row, &q);
                sub_row(&mut u, i, row, &q);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Hermite {
        h,
        u,
        rank: row,
        pivots,
    }
}

fn sub_row(m: &mut [Vec<Int>], target: usize, source: usize, q: &Int) {
    let (t, s) = if target < source {
        let (lo, hi) = m.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s) {
        *x -= q * y;
    }
}

fn negate_row(m: &mut [Vec<Int>], i: usize) {
    for x in &mut m[i] {
        *x = -x.clone();
    }
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn hnf_basis(a: &[Vec<Int>]) -> IntMatrix {
    let hnf = hermite(a);
    hnf.h.into_iter().take(hnf.rank).collect()
}

/// Basis of `{x ∈ Z^m : x·A = 0}`, in Hermite normal form.
pub fn left_kernel(a: &[Vec<Int>]) -> IntMatrix {
    let hnf = hermite(a);
    let kernel: IntMatrix = hnf.u.into_iter().skip(hnf.rank).collect();
    if kernel.is_empty() {
        kernel
    } else {
        hnf_basis(&kernel)
    }
}

/// Smith invariant factors (positive, each dividing the next).
pub fn smith_invariants(a: &[Vec<Int>]) -> Vec<Int> {
    let mut m: IntMatrix = a.to_vec();
    let rows = m.len();
    let ncols = cols(&m);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(ncols) {
        // smallest nonzero entry in the trailing block becomes the pivot
        let pos = (t..rows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()));
        let Some((pi, pj)) = pos else { break };
        m.swap(t, pi);
        for row in &mut m {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t].div_floor(&m[t][t]);
            if !q.is_zero() {
                sub_row(&mut m, i, t, &q);
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..ncols {
            let q = m[t][j].div_floor(&m[t][t]);
            if !q.is_zero() {
                for row in m.iter_mut() {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // the pivot must divide the whole trailing block
        let bad = (t + 1..rows).find(|&i| (t + 1..ncols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
        if let Some(i) = bad {
            let (lo, hi) = m.split_at_mut(i);
            for (x, y) in lo[t].iter_mut().zip(&hi[0]) {
                *x += y;
            }
            continue;
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(mut m: IntMatrix) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Int::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Scales rational rows to integers by the common denominator.
pub fn clear_denominators(rows: &[Vec<Rat>]) -> (IntMatrix, Int) {
    let den = lcm_all(rows.iter().flatten().map(|q| q.denom()));
    let ints = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|q| (q * Rat::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    (ints, den)
}

/// Canonical basis of the group generated by rational rows.
pub fn rational_hnf(rows: &[Vec<Rat>]) -> RatMatrix {
    if rows.is_empty() {
        return Vec::new();
    }
    let (ints, den) = clear_denominators(rows);
    let d = Rat::from_integer(den);
    hnf_basis(&ints)
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rat::from_integer(x) / &d).collect())
        .collect()
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<Rat>]) -> (RatMatrix, Vec<usize>) {
    let mut m: RatMatrix = rows.to_vec();
    let n = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r] {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : M x = 0}` for `M` with `n` columns.
pub fn right_nullspace(rows: &[Vec<Rat>], n: usize) -> RatMatrix {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square rational matrix, if invertible.
pub fn inverse(m: &[Vec<Rat>]) -> Option<RatMatrix> {
    let n = m.len();
    let aug: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Rat], m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.first().map_or(0, Vec::len);
    let mut out = vec![Rat::zero(); n];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Rational multiple of `v` with coprime integer entries.
pub fn primitive_integer(v: &[Rat]) -> Vec<Int> {
    let den = lcm_all(v.iter().map(|q| q.denom()));
    let ints: Vec<Int> = v
        .iter()
        .map(|q| (q * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> IntMatrix {
        a.iter()
            .map(|row| {
                (0..cols(b))
                    .map(|j| {
                        row.iter()
                            .zip(b)
                            .fold(Int::zero(), |acc, (x, r)| acc + x * &r[j])
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn hermite_form_and_transform() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let hnf = hermite(&a);
        assert_eq!(mat_mul(&hnf.u, &a), hnf.h);
        assert_eq!(hnf.h, m(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
        assert_eq!(determinant(hnf.u.clone()).abs(), int(1));
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let a = m(&[&[1, 2], &[2, 4], &[3, 5]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(mat_mul(&k, &a), m(&[&[0, 0]]));
    }

    #[test]
    fn smith_examples() {
        assert_eq!(
            smith_invariants(&m(&[&[2, 0], &[0, 3]])),
            vec![int(1), int(6)]
        );
        assert_eq!(smith_invariants(&m(&[&[2], &[-2]])), vec![int(2)]);
        assert_eq!(
            smith_invariants(&m(&[&[1, 1], &[1, 0], &[0, 1]])),
            vec![int(1), int(1)]
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(
            determinant(m(&[&[2, 1, 3], &[0, 4, 5], &[1, 0, 6]])),
            int(41)
        );
        assert_eq!(determinant(m(&[&[1, 2], &[2, 4]])), int(0));
    }

    #[test]
    fn rational_helpers() {
        let rows = vec![vec![rat(1, 2), rat(3, 4)]];
        assert_eq!(rational_hnf(&rows), vec![vec![rat(1, 2), rat(3, 4)]]);
        let rows = vec![vec![rat(1, 2)], vec![rat(3, 4)]];
        assert_eq!(rational_hnf(&rows), vec![vec![rat(1, 4)]]);
        let inv = inverse(&[vec![rat(2, 1), rat(0, 1)], vec![rat(1, 1), rat(1, 1)]]).unwrap();
        assert_eq!(
            inv,
            vec![vec![rat(1, 2), rat(0, 1)], vec![rat(-1, 2), rat(1, 1)]]
        );
        let ns = right_nullspace(&[vec![rat(1, 1), rat(1, 1), rat(1, 1)]], 3);
        assert_eq!(ns.len(), 2);
        assert_eq!(
            primitive_integer(&[rat(1, 2), rat(-3, 4)]),
            vec![int(2), int(-3)]
        );
    }
}
