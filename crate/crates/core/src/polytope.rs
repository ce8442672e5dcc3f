//! Exact convex hulls of finite integer point sets and their face lattices.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::lp::convex_combination;
use crate::par::{map_collect, Execution};
use crate::zmatrix::{determinant, rank, right_nullspace, rref};
use crate::{Error, Int, Rat, Result};

pub const MAX_POINTS: usize = 64;
pub const MAX_DIM: usize = 4;

/// A face `{w : normal·w = offset}` of a polytope `K`, with `normal·w <= offset`
/// on all of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub normal: Vec<Int>,
    pub offset: Int,
    /// Indices of the points lying on the face.
    pub members: Vec<usize>,
    /// Indices of the vertices of the face.
    pub vertices: Vec<usize>,
    pub dim: usize,
}

impl Face {
    pub fn is_improper(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    /// Value of the supporting functional at `w`.
    pub fn eval(&self, w: &[i64]) -> Int {
        self.normal
            .iter()
            .zip(w)
            .fold(Int::zero(), |acc, (n, x)| acc + n * Int::from(*x))
    }

    /// `true` iff `w` lies on the hyperplane of `k·F`.
    pub fn contains_scaled(&self, w: &[i64], k: u32) -> bool {
        self.eval(w) == &self.offset * Int::from(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub points: Vec<Vec<i64>>,
    pub vertices: Vec<usize>,
    /// Facets first, then lower-dimensional faces by decreasing dimension,
    /// with the improper face last.
    pub faces: Vec<Face>,
    pub dim: usize,
    /// Integer equations `e·w = c` cutting out the affine hull.
    pub equations: Vec<(Vec<Int>, Int)>,
}

impl Polytope {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        Self::new_with(points, Execution::default())
    }

    pub fn new_with(points: Vec<Vec<i64>>, exec: Execution) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("point set".into()));
        }
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::InvalidArgument("points of mixed dimension".into()));
        }
        if points.len() > MAX_POINTS || d > MAX_DIM {
            return Err(Error::SizeEnvelope(format!(
                "{} points in dimension {d}; limits are {MAX_POINTS} points and dimension {MAX_DIM}",
                points.len()
            )));
        }
        let rat_points: Vec<Vec<Rat>> = points.iter().map(|p| to_rat(p)).collect();
        let diffs: Vec<Vec<Rat>> = rat_points[1..]
            .iter()
            .map(|p| sub(p, &rat_points[0]))
            .collect();
        let (_, coords) = rref(&diffs);
        let dim = coords.len();
        let equations = right_nullspace(&diffs, d)
            .into_iter()
            .map(|e| {
                let e = crate::zmatrix::primitive_integer(&e);
                let c = dot_int(&e, &points[0]);
                (e, c)
            })
            .collect();

        let vertices = vertex_indices(&rat_points, exec);
        let projected: Vec<Vec<Int>> = points
            .iter()
            .map(|p| coords.iter().map(|&c| Int::from(p[c])).collect())
            .collect();

        let mut faces = Vec::new();
        if dim > 0 {
            let facets = facets(&projected, &vertices, dim);
            let mut sets: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.2.clone()).collect();
            let mut frontier: Vec<Vec<usize>> = sets.iter().cloned().collect();
            while let Some(s) = frontier.pop() {
                for f in &facets {
                    let meet: Vec<usize> = s.iter().copied().filter(|v| f.2.contains(v)).collect();
                    if !meet.is_empty() && sets.insert(meet.clone()) {
                        frontier.push(meet);
                    }
                }
            }
            for verts in sets {
                let mut normal = vec![Int::zero(); dim];
                let mut offset = Int::zero();
                for (nu, c, fv) in &facets {
                    if verts.iter().all(|v| fv.contains(v)) {
                        for (x, y) in normal.iter_mut().zip(nu) {
                            *x += y;
                        }
                        offset += c;
                    }
                }
                let g = normal.iter().fold(offset.clone(), |acc, x| acc.gcd(x));
                let g = if g.is_zero() { Int::from(1) } else { g };
                let normal: Vec<Int> = normal.into_iter().map(|x| x / &g).collect();
                let offset = offset / &g;
                let mut lifted = vec![Int::zero(); d];
                for (&c, x) in coords.iter().zip(&normal) {
                    lifted[c] = x.clone();
                }
                let members = (0..points.len())
                    .filter(|&i| dot_int(&normal, &projected_i64(&projected[i])) == offset)
                    .collect();
                let vdiff: Vec<Vec<Rat>> = verts[1..]
                    .iter()
                    .map(|&v| sub(&rat_points[v], &rat_points[verts[0]]))
                    .collect();
                faces.push(Face {
                    normal: lifted,
                    offset,
                    members,
                    vertices: verts,
                    dim: rank(&vdiff),
                });
            }
            faces.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.vertices.cmp(&b.vertices)));
        }
        faces.push(Face {
            normal: vec![Int::zero(); d],
            offset: Int::zero(),
            members: (0..points.len()).collect(),
            vertices: vertices.clone(),
            dim,
        });
        Ok(Self {
            points,
            vertices,
            faces,
            dim,
            equations,
        })
    }

    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| !f.is_improper())
    }

    pub fn vertex_points(&self) -> Vec<Vec<i64>> {
        self.vertices
            .iter()
            .map(|&i| self.points[i].clone())
            .collect()
    }

    pub fn facets(&self) -> impl Iterator<Item = &Face> {
        let top = self.dim;
        self.faces
            .iter()
            .filter(move |f| !f.is_improper() && f.dim + 1 == top)
    }

    /// `true` iff `w` lies in `k·K`.
    pub fn contains_scaled(&self, w: &[i64], k: u32) -> bool {
        let k = Int::from(k);
        self.equations.iter().all(|(e, c)| dot_int(e, w) == c * &k)
            && self.facets().all(|f| f.eval(w) <= &f.offset * &k)
    }
}

fn to_rat(p: &[i64]) -> Vec<Rat> {
    p.iter().map(|&x| Rat::from_integer(Int::from(x))).collect()
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot_int(a: &[Int], b: &[i64]) -> Int {
    a.iter()
        .zip(b)
        .fold(Int::zero(), |acc, (x, y)| acc + x * Int::from(*y))
}

fn projected_i64(p: &[Int]) -> Vec<i64> {
    p.iter()
        .map(|x| i64::try_from(x).expect("exponents fit in i64"))
        .collect()
}

/// Extreme points: those outside the hull of the remaining points.
pub fn vertex_indices(points: &[Vec<Rat>], exec: Execution) -> Vec<usize> {
    if points.len() == 1 {
        return vec![0];
    }
    let flags = map_collect(exec, points.len(), |i| {
        let others: Vec<&[Rat]> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.as_slice())
            .collect();
        convex_combination(&points[i], &others).is_none()
    });
    (0..points.len()).filter(|&i| flags[i]).collect()
}

type Facet = (Vec<Int>, Int, Vec<usize>);

/// Facets of a full-dimensional hull in `Z^dim`, as (outward normal, offset,
/// vertex indices).
fn facets(points: &[Vec<Int>], vertices: &[usize], dim: usize) -> Vec<Facet> {
    let mut out: Vec<Facet> = Vec::new();
    let mut seen = BTreeSet::new();
    for subset in combinations(vertices.len(), dim) {
        let base = &points[vertices[subset[0]]];
        let rows: Vec<Vec<Int>> = subset[1..]
            .iter()
            .map(|&s| {
                points[vertices[s]]
                    .iter()
                    .zip(base)
                    .map(|(x, y)| x - y)
                    .collect()
            })
            .collect();
        let Some(mut normal) = cross(&rows, dim) else {
            continue;
        };
        let mut offset = dot(&normal, base);
        let sides: Vec<Int> = vertices
            .iter()
            .map(|&v| dot(&normal, &points[v]) - &offset)
            .collect();
        let above = sides.iter().any(Signed::is_positive);
        let below = sides.iter().any(Signed::is_negative);
        if above && below {
            continue;
        }
        if above {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        let members: Vec<usize> = vertices
            .iter()
            .copied()
            .zip(&sides)
            .filter(|(_, s)| s.is_zero())
            .map(|(v, _)| v)
            .collect();
        if seen.insert(members.clone()) {
            out.push((normal, offset, members));
        }
    }
    out
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

/// Primitive normal to `dim - 1` vectors in `Z^dim`, or `None` if they are
/// dependent.
fn cross(rows: &[Vec<Int>], dim: usize) -> Option<Vec<Int>> {
    let normal: Vec<Int> = (0..dim)
        .map(|j| {
            let minor: Vec<Vec<Int>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let det = determinant(minor);
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    let g = normal.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    Some(normal.into_iter().map(|x| x / &g).collect())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(p: &[&[i64]]) -> Vec<Vec<i64>> {
        p.iter().map(|x| x.to_vec()).collect()
    }

    #[test]
    fn triangle_faces() {
        let k = Polytope::new(pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(k.vertices, vec![0, 1, 2]);
        assert_eq!(k.dim, 2);
        assert_eq!(k.faces.iter().filter(|f| f.dim == 1).count(), 3);
        assert_eq!(k.faces.iter().filter(|f| f.dim == 0).count(), 3);
        assert!(k.faces.last().unwrap().is_improper());
        for f in k.proper_faces() {
            for (i, p) in k.points.iter().enumerate() {
                let on = f.members.contains(&i);
                assert_eq!(f.eval(p) == f.offset, on);
                assert!(f.eval(p) <= f.offset);
            }
        }
    }

    #[test]
    fn interior_and_edge_points() {
        let k =
            Polytope::new(pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 0], &[1, 1], &[0, 1]])).unwrap();
        assert_eq!(k.vertices, vec![0, 1, 2]);
        let bottom = k.facets().find(|f| f.members.contains(&3)).unwrap();
        assert_eq!(bottom.members, vec![0, 1, 3]);
        assert!(k.contains_scaled(&[3, 1], 2));
        assert!(!k.contains_scaled(&[3, 2], 2));
    }

    #[test]
    fn segment_in_the_plane() {
        let k = Polytope::new(pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap();
        assert_eq!(k.dim, 1);
        assert_eq!(k.vertices, vec![0, 2]);
        assert_eq!(k.proper_faces().count(), 2);
        assert!(k.contains_scaled(&[3, 3], 2));
        assert!(!k.contains_scaled(&[3, 2], 2));
    }

    #[test]
    fn cube_in_three_dimensions() {
        let mut p = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    p.push(vec![x, y, z]);
                }
            }
        }
        let k = Polytope::new(p).unwrap();
        assert_eq!(k.vertices.len(), 8);
        let count = |d| {
            k.faces
                .iter()
                .filter(|f| f.dim == d && !f.is_improper())
                .count()
        };
        assert_eq!((count(2), count(1), count(0)), (6, 12, 8));
    }

    #[test]
    fn single_point_and_envelope() {
        let k = Polytope::new(pts(&[&[3]])).unwrap();
        assert_eq!(k.faces.len(), 1);
        let many: Vec<Vec<i64>> = (0..65).map(|i| vec![i]).collect();
        assert!(matches!(Polytope::new(many), Err(Error::SizeEnvelope(_))));
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
