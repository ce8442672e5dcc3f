//! Good subsets of a simplex `K = Δ^{n-1}`, in barycentric coordinates.
//!
//! A compact convex `J ⊆ K` is decided good by its hull vertices: it must be the
//! hull of a face of `K` together with points whose supports are pairwise
//! disjoint and disjoint from that face. An LP-based lifting oracle checks the
//! same property one affine pair `(a, b)` at a time.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::arith::{lcm_all, rat};
use crate::lp::{convex_combination, LinearProgram, LpOutcome, Relation};
use crate::par::Execution;
use crate::polytope::{combinations, vertex_indices, Polytope};
use crate::zmatrix::{rank, rref};
use crate::{Error, Int, Rat, Result};

/// Finite point set of `Δ^{n-1}` whose convex hull is `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexSubset {
    n: usize,
    points: Vec<Vec<Rat>>,
}

impl SimplexSubset {
    /// Validates barycentric coordinates and drops repeated points.
    pub fn new(n: usize, points: Vec<Vec<Rat>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "simplex needs at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for p in points {
            if p.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "point has {} coordinates, expected {n}",
                    p.len()
                )));
            }
            if p.iter().any(Signed::is_negative) {
                return Err(Error::InvalidArgument(
                    "negative barycentric coordinate".into(),
                ));
            }
            if p.iter().sum::<Rat>() != Rat::one() {
                return Err(Error::InvalidArgument(
                    "barycentric coordinates must sum to 1".into(),
                ));
            }
            if seen.insert(p.clone()) {
                kept.push(p);
            }
        }
        Ok(Self { n, points: kept })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<Rat>] {
        &self.points
    }

    /// Affine extension of `b` (values at the vertices of `K`) to a point.
    pub fn restrict(b: &[Rat], p: &[Rat]) -> Rat {
        p.iter().zip(b).map(|(x, y)| x * y).sum()
    }
}

/// Vertices of the smallest face of `K` containing `p`.
pub fn smallest_face(p: &[Rat]) -> Vec<usize> {
    (0..p.len()).filter(|&i| !p[i].is_zero()).collect()
}

/// Indices of the points of `s` that are vertices of `J`.
pub fn hull_vertices(s: &SimplexSubset) -> Vec<usize> {
    hull_vertices_with(s, Execution::default())
}

pub fn hull_vertices_with(s: &SimplexSubset, exec: Execution) -> Vec<usize> {
    if s.points.is_empty() {
        return Vec::new();
    }
    vertex_indices(&s.points, exec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub point: Vec<Rat>,
    pub support: Vec<usize>,
}

/// `J = cvx(F ∪ {v_i})` with `F` the face spanned by `face`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodDecomposition {
    pub face: Vec<usize>,
    pub blocks: Vec<Block>,
}

impl GoodDecomposition {
    /// The generating points: vertices of `F` followed by the block points.
    pub fn generators(&self, n: usize) -> Vec<Vec<Rat>> {
        let mut out: Vec<Vec<Rat>> = self
            .face
            .iter()
            .map(|&i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        out.extend(self.blocks.iter().map(|b| b.point.clone()));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Good(GoodDecomposition),
    /// Two hull vertices (indices into the point set) whose supports meet.
    Overlap {
        first: usize,
        second: usize,
        shared: Vec<usize>,
    },
}

impl Decomposition {
    pub fn is_good(&self) -> bool {
        matches!(self, Decomposition::Good(_))
    }
}

pub fn decompose_good_subset(s: &SimplexSubset) -> Result<Decomposition> {
    decompose_good_subset_with(s, Execution::default())
}

pub fn decompose_good_subset_with(s: &SimplexSubset, exec: Execution) -> Result<Decomposition> {
    if s.points.is_empty() {
        return Err(Error::Empty("J".into()));
    }
    let hull = hull_vertices_with(s, exec);
    let supports: Vec<Vec<usize>> = hull.iter().map(|&i| smallest_face(&s.points[i])).collect();
    for i in 0..hull.len() {
        for j in i + 1..hull.len() {
            let shared: Vec<usize> = supports[i]
                .iter()
                .copied()
                .filter(|x| supports[j].contains(x))
                .collect();
            if !shared.is_empty() {
                return Ok(Decomposition::Overlap {
                    first: hull[i],
                    second: hull[j],
                    shared,
                });
            }
        }
    }
    let mut face = Vec::new();
    let mut blocks = Vec::new();
    for (&i, support) in hull.iter().zip(supports) {
        if support.len() == 1 {
            face.push(support[0]);
        } else {
            blocks.push(Block {
                point: s.points[i].clone(),
                support,
            });
        }
    }
    face.sort_unstable();
    Ok(Decomposition::Good(GoodDecomposition { face, blocks }))
}

/// Outcome of the lifting LP for one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftOutcome {
    pub liftable: bool,
    /// Values of a lift at the vertices of `K`.
    pub lift: Option<Vec<Rat>>,
    /// Largest `s <= 1` with `s <= a'_j <= b_j - s` for some lift `a'`.
    pub slack: Rat,
}

/// Looks for an affine `a'` on `K` with `0 ≪ a' ≪ b` and `a'|J = a`.
///
/// `a` lists the values at `hull_vertices(s)`, in that order; `b` the values at
/// the vertices of `K`. The pair must satisfy `0 ≪ a ≪ b|J`.
pub fn lifting_oracle_lp(s: &SimplexSubset, a: &[Rat], b: &[Rat]) -> Result<LiftOutcome> {
    if s.points.is_empty() {
        return Err(Error::Empty("J".into()));
    }
    lift_on_vertices(&vertex_subset(s), a, b)
}

/// `J` described by its hull vertices alone.
pub fn vertex_subset(s: &SimplexSubset) -> SimplexSubset {
    let points = hull_vertices(s)
        .into_iter()
        .map(|i| s.points[i].clone())
        .collect();
    SimplexSubset { n: s.n, points }
}

fn lift_on_vertices(j: &SimplexSubset, a: &[Rat], b: &[Rat]) -> Result<LiftOutcome> {
    let n = j.n;
    if a.len() != j.points.len() || b.len() != n {
        return Err(Error::InvalidArgument(
            "value vectors have the wrong length".into(),
        ));
    }
    if !is_affine_on(j, a) {
        return Err(Error::NotAffine);
    }
    if b.iter().any(|x| !x.is_positive()) {
        return Err(Error::Inadmissible("b must be strictly positive".into()));
    }
    for (p, v) in j.points.iter().zip(a) {
        if !v.is_positive() || *v >= SimplexSubset::restrict(b, p) {
            return Err(Error::Inadmissible(format!(
                "need 0 < a < b|J, got a = {v}"
            )));
        }
    }
    // variables a'_0..a'_{n-1}, slack
    let mut lp = LinearProgram::new(n + 1);
    for (p, v) in j.points.iter().zip(a) {
        let mut row = p.clone();
        row.push(Rat::zero());
        lp.add(row, Relation::Eq, v.clone());
    }
    for k in 0..n {
        let mut lower = vec![Rat::zero(); n + 1];
        lower[k] = Rat::one();
        lower[n] = -Rat::one();
        lp.add(lower, Relation::Ge, Rat::zero());
        let mut upper = vec![Rat::zero(); n + 1];
        upper[k] = Rat::one();
        upper[n] = Rat::one();
        lp.add(upper, Relation::Le, b[k].clone());
    }
    let mut cap = vec![Rat::zero(); n + 1];
    cap[n] = Rat::one();
    lp.add(cap.clone(), Relation::Le, Rat::one());
    Ok(match lp.maximize(cap).solve() {
        LpOutcome::Optimal { value, mut x } if value.is_positive() => {
            x.truncate(n);
            LiftOutcome {
                liftable: true,
                lift: Some(x),
                slack: value,
            }
        }
        LpOutcome::Optimal { value, .. } => LiftOutcome {
            liftable: false,
            lift: None,
            slack: value,
        },
        _ => LiftOutcome {
            liftable: false,
            lift: None,
            slack: Rat::zero(),
        },
    })
}

/// `true` iff the values respect every affine relation among the points.
pub fn is_affine_on(s: &SimplexSubset, a: &[Rat]) -> bool {
    let m = s.points.len();
    let mut rows: Vec<Vec<Rat>> = (0..s.n)
        .map(|c| s.points.iter().map(|p| p[c].clone()).collect())
        .collect();
    rows.push(vec![Rat::one(); m]);
    crate::zmatrix::right_nullspace(&rows, m)
        .iter()
        .all(|lambda| {
            lambda
                .iter()
                .zip(a)
                .map(|(l, v)| l * v)
                .sum::<Rat>()
                .is_zero()
        })
}

/// `true` iff `Aspan(J) ∩ K = J`.
pub fn flat_intersection_check(s: &SimplexSubset) -> Result<bool> {
    if s.points.is_empty() {
        return Err(Error::Empty("J".into()));
    }
    let n = s.n;
    if n == 1 {
        return Ok(true);
    }
    let hull = hull_vertices(s);
    let verts: Vec<&Vec<Rat>> = hull.iter().map(|&i| &s.points[i]).collect();
    // the last coordinate is determined by the others
    let den = lcm_all(verts.iter().flat_map(|p| p.iter().map(|q| q.denom())));
    let scaled: Vec<Vec<i64>> = verts
        .iter()
        .map(|p| {
            p[..n - 1]
                .iter()
                .map(|q| {
                    let v = (q * Rat::from_integer(den.clone())).to_integer();
                    i64::try_from(&v)
                        .map_err(|_| Error::SizeEnvelope("coordinates too large".into()))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    let polytope = Polytope::new(scaled)?;
    let m = verts.len();
    let den = Rat::from_integer(den);
    for facet in polytope.facets() {
        // x = Σ μ_i u_i with μ = μ⁺ - μ⁻ free, Σ μ_i = 1, x >= 0
        let mut lp = LinearProgram::new(2 * m);
        let signed = |coeff: &dyn Fn(&Vec<Rat>) -> Rat| -> Vec<Rat> {
            let pos: Vec<Rat> = verts.iter().map(|p| coeff(p)).collect();
            pos.iter()
                .cloned()
                .chain(pos.iter().map(|x| -x.clone()))
                .collect()
        };
        lp.add(signed(&|_| Rat::one()), Relation::Eq, Rat::one());
        for c in 0..n {
            lp.add(signed(&|p| p[c].clone()), Relation::Ge, Rat::zero());
        }
        let normal: Vec<Rat> = facet
            .normal
            .iter()
            .map(|x| Rat::from_integer(x.clone()))
            .collect();
        let objective = signed(&|p| p[..n - 1].iter().zip(&normal).map(|(x, y)| x * y).sum());
        let limit = Rat::from_integer(facet.offset.clone()) / &den;
        match lp.maximize(objective).solve() {
            LpOutcome::Optimal { value, .. } if value <= limit => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Affine coordinates of `p` with respect to affinely independent `basis`.
fn affine_coordinates(p: &[Rat], basis: &[&Vec<Rat>]) -> Option<Vec<Rat>> {
    let m = basis.len();
    let mut rows: Vec<Vec<Rat>> = (0..p.len())
        .map(|c| {
            basis
                .iter()
                .map(|q| q[c].clone())
                .chain(std::iter::once(p[c].clone()))
                .collect()
        })
        .collect();
    rows.push(vec![Rat::one(); m + 1]);
    let (r, pivots) = rref(&rows);
    if pivots.contains(&m) {
        return None;
    }
    let mut mu = vec![Rat::zero(); m];
    for (row, &c) in r.iter().zip(&pivots) {
        mu[c] = row[m].clone();
    }
    Some(mu)
}

/// Greedy affine basis of the hull vertices, starting from `first`.
fn affine_basis(s: &SimplexSubset, hull: &[usize], first: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for &i in first.iter().chain(hull) {
        if chosen.contains(&i) {
            continue;
        }
        let mut row = s.points[i].clone();
        row.push(Rat::one());
        rows.push(row);
        if rank(&rows) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Extends values on an affine basis to every point of `s`.
fn extend_affinely(s: &SimplexSubset, basis: &[usize], values: &[Rat]) -> Vec<Rat> {
    let qs: Vec<&Vec<Rat>> = basis.iter().map(|&i| &s.points[i]).collect();
    s.points
        .iter()
        .map(|p| {
            let mu = affine_coordinates(p, &qs).expect("basis spans the affine hull");
            mu.iter().zip(values).map(|(x, y)| x * y).sum()
        })
        .collect()
}

fn admissible(s: &SimplexSubset, a: &[Rat], b: &[Rat]) -> bool {
    s.points
        .iter()
        .zip(a)
        .all(|(p, v)| v.is_positive() && *v < SimplexSubset::restrict(b, p))
}

/// A pair `(a, b)`: values at the points of `J` and at the vertices of `K`.
pub type Pair = (Vec<Rat>, Vec<Rat>);

/// Near-extremal pairs, with `a` on the hull vertices: for hull vertices `u, u'` with overlapping supports,
/// `a(u) = η`, `a(u') = 1 - η`, `b ≡ 1`.
pub fn adversarial_family(s: &SimplexSubset) -> Vec<Pair> {
    let s = &vertex_subset(s);
    let hull: Vec<usize> = (0..s.points.len()).collect();
    let b = vec![Rat::one(); s.n];
    let mut out = Vec::new();
    for (u, v) in hull.iter().flat_map(|&u| hull.iter().map(move |&v| (u, v))) {
        if u == v {
            continue;
        }
        let (su, sv) = (smallest_face(&s.points[u]), smallest_face(&s.points[v]));
        if !su.iter().any(|x| sv.contains(x)) {
            continue;
        }
        let basis = affine_basis(s, &hull, &[u, v]);
        for eta in [rat(1, 4), rat(1, 8), rat(1, 16)] {
            let values: Vec<Rat> = basis
                .iter()
                .map(|&i| {
                    if i == u {
                        eta.clone()
                    } else if i == v {
                        Rat::one() - &eta
                    } else {
                        rat(1, 2)
                    }
                })
                .collect();
            let a = extend_affinely(s, &basis, &values);
            if admissible(s, &a, &b) {
                out.push((a, b.clone()));
            }
        }
    }
    out
}

/// Random admissible pairs with `b_j ∈ {1/4, ..., 4}` and `a` a random fraction
/// of `b|J` on an affine basis.
pub fn random_pairs<R: Rng>(s: &SimplexSubset, count: usize, rng: &mut R) -> Vec<Pair> {
    let s = &vertex_subset(s);
    let hull: Vec<usize> = (0..s.points.len()).collect();
    let mut out = Vec::new();
    for _ in 0..count * 10 {
        if out.len() == count {
            break;
        }
        let b: Vec<Rat> = (0..s.n).map(|_| rat(rng.gen_range(1..=16), 4)).collect();
        let mut order = hull.clone();
        let start = rng.gen_range(0..order.len());
        order.rotate_left(start);
        let basis = affine_basis(s, &order, &[]);
        let values: Vec<Rat> = basis
            .iter()
            .map(|&i| SimplexSubset::restrict(&b, &s.points[i]) * rat(rng.gen_range(1..100), 100))
            .collect();
        let a = extend_affinely(s, &basis, &values);
        if admissible(s, &a, &b) {
            out.push((a, b));
        }
    }
    out
}

/// First pair that fails to lift, if any.
pub fn first_unliftable(s: &SimplexSubset, pairs: &[Pair]) -> Result<Option<Pair>> {
    let j = vertex_subset(s);
    for (a, b) in pairs {
        if !lift_on_vertices(&j, a, b)?.liftable {
            return Ok(Some((a.clone(), b.clone())));
        }
    }
    Ok(None)
}

/// `true` iff both point sets have the same convex hull.
pub fn same_hull(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    let inside = |xs: &[Vec<Rat>], ys: &[Vec<Rat>]| {
        let refs: Vec<&[Rat]> = ys.iter().map(Vec::as_slice).collect();
        xs.iter().all(|x| convex_combination(x, &refs).is_some())
    };
    inside(a, b) && inside(b, a)
}

/// All points of `Δ^{n-1}` with coordinates in `(1/den) Z`.
pub fn grid_points(n: usize, den: i64) -> Vec<Vec<Rat>> {
    fn go(n: usize, left: i64, den: i64, cur: &mut Vec<Rat>, out: &mut Vec<Vec<Rat>>) {
        if n == 1 {
            cur.push(rat(left, den));
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(rat(k, den));
            go(n - 1, left - k, den, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, den, den, &mut Vec::new(), &mut out);
    out
}

/// Every `J ⊆ Δ²` with at most three hull vertices on the `1/den` grid, one
/// instance per hull.
pub fn grid_corpus(den: i64) -> Vec<SimplexSubset> {
    let grid = grid_points(3, den);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for size in 1..=3 {
        for idx in combinations(grid.len(), size) {
            let s = SimplexSubset::new(3, idx.iter().map(|&i| grid[i].clone()).collect())
                .expect("grid points are barycentric");
            let hull = hull_vertices_with(&s, Execution::Sequential);
            let mut key: Vec<Vec<Rat>> = hull.iter().map(|&i| s.points[i].clone()).collect();
            key.sort();
            if seen.insert(key.clone()) {
                out.push(SimplexSubset { n: 3, points: key });
            }
        }
    }
    out
}

/// Random subsets of `Δ^{n-1}`: two to `max_points` grid points each.
pub fn sample_corpus<R: Rng>(
    n: usize,
    den: i64,
    count: usize,
    max_points: usize,
    rng: &mut R,
) -> Vec<SimplexSubset> {
    let grid = grid_points(n, den);
    (0..count)
        .map(|_| {
            let size = rng.gen_range(2..=max_points);
            let pts = (0..size)
                .map(|_| grid[rng.gen_range(0..grid.len())].clone())
                .collect();
            SimplexSubset::new(n, pts).expect("grid points are barycentric")
        })
        .collect()
}

/// Integer helper for callers building points from integer numerators.
pub fn point(numerators: &[i64], den: i64) -> Vec<Rat> {
    numerators
        .iter()
        .map(|&k| Rat::new(Int::from(k), Int::from(den)))
        .collect()
}
