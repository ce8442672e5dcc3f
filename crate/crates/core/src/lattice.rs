//! Finitely generated subgroups of `R` and `R^m` written in coordinates over a
//! `Q`-linearly independent real basis, and order-unit goodness of strict
//! direct sums of such groups.

use num_traits::Zero;

use crate::arith::{is_squarefree_u64, lcm_all, sqrt_enclosure};
use crate::numfield::{self, Element};
use crate::zmatrix::{
    clear_denominators, dot, left_kernel, primitive_integer, rank, rational_hnf, right_nullspace,
    vec_mat, RatMatrix,
};
use crate::{Error, Int, Rat, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Independence {
    /// Linear independence over `Q` is taken on trust.
    Asserted,
    /// Label `i` is `√radicands[i]`, with `radicands[0] = 1`.
    SquarefreeRadicals(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealBasis {
    labels: Vec<String>,
    approx: Vec<(Rat, Rat)>,
    independence: Independence,
}

impl RealBasis {
    /// Basis `{1, √n_1, ..., √n_k}` for distinct squarefree `n_i > 1`.
    pub fn radicals(radicands: &[u64]) -> Result<Self> {
        let mut all = vec![1u64];
        all.extend_from_slice(radicands);
        for (i, &n) in all.iter().enumerate() {
            if !is_squarefree_u64(n) {
                return Err(Error::InvalidArgument(format!("{n} is not squarefree")));
            }
            if all[..i].contains(&n) {
                return Err(Error::InvalidArgument(format!("radicand {n} repeated")));
            }
        }
        let labels = all
            .iter()
            .map(|&n| {
                if n == 1 {
                    "1".to_string()
                } else {
                    format!("√{n}")
                }
            })
            .collect();
        let approx = all.iter().map(|&n| sqrt_enclosure(n, 6)).collect();
        Ok(Self {
            labels,
            approx,
            independence: Independence::SquarefreeRadicals(all),
        })
    }

    /// Basis with unverified independence; the first label must denote 1.
    pub fn asserted(labels: Vec<String>, approx: Vec<(Rat, Rat)>) -> Result<Self> {
        if labels.is_empty() || labels.len() != approx.len() {
            return Err(Error::InvalidArgument(
                "one enclosure per label is required".into(),
            ));
        }
        if labels[0] != "1" {
            return Err(Error::InvalidArgument(
                "the first basis label must be \"1\"".into(),
            ));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidArgument(format!("label {l} repeated")));
            }
        }
        Ok(Self {
            labels,
            approx,
            independence: Independence::Asserted,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn approx(&self) -> &[(Rat, Rat)] {
        &self.approx
    }

    pub fn independence(&self) -> &Independence {
        &self.independence
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.independence, Independence::SquarefreeRadicals(_))
    }

    fn radicands(&self) -> Option<&[u64]> {
        match &self.independence {
            Independence::SquarefreeRadicals(r) => Some(r),
            Independence::Asserted => None,
        }
    }

    fn element(&self, coords: &[Rat]) -> Option<Element> {
        let radicands = self.radicands()?;
        Some(
            radicands
                .iter()
                .zip(coords)
                .fold(Element::zero(), |acc, (d, q)| {
                    acc.add(&Element::term(*d, q.clone()))
                }),
        )
    }
}

/// Subgroup of `R` generated by the rows of `gens`, each row giving the
/// coordinates of a generator over the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGroup {
    basis: RealBasis,
    gens: RatMatrix,
}

impl EmbeddedGroup {
    pub fn new(basis: RealBasis, gens: RatMatrix) -> Result<Self> {
        if let Some(row) = gens.iter().find(|r| r.len() != basis.len()) {
            return Err(Error::InvalidArgument(format!(
                "generator has {} coordinates, basis has {}",
                row.len(),
                basis.len()
            )));
        }
        Ok(Self { basis, gens })
    }

    pub fn from_i64(basis: RealBasis, gens: &[&[i64]]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
            .collect();
        Self::new(basis, gens)
    }

    pub fn basis(&self) -> &RealBasis {
        &self.basis
    }

    pub fn gens(&self) -> &RatMatrix {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        rank(&self.gens)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().flatten().all(Zero::is_zero)
    }

    /// Canonical generators: the Hermite normal form of the generator lattice.
    pub fn hnf(&self) -> RatMatrix {
        rational_hnf(&self.gens)
    }

    pub fn reduced(&self) -> Self {
        Self {
            basis: self.basis.clone(),
            gens: self.hnf(),
        }
    }
}

/// `A ∩ B` as subgroups of `R`, in Hermite normal form.
pub fn intersect(a: &EmbeddedGroup, b: &EmbeddedGroup) -> Result<EmbeddedGroup> {
    if a.basis != b.basis {
        return Err(Error::BasisMismatch);
    }
    let ga = a.hnf();
    let gb = b.hnf();
    if ga.is_empty() || gb.is_empty() {
        return EmbeddedGroup::new(a.basis.clone(), Vec::new());
    }
    // x·A = y·B  ⟺  (x, y) in the left kernel of [A; -B]
    let mut stacked = ga.clone();
    stacked.extend(
        gb.iter()
            .map(|r| r.iter().map(|q| -q.clone()).collect::<Vec<_>>()),
    );
    let (ints, _) = clear_denominators(&stacked);
    let kernel = left_kernel(&ints);
    let images: RatMatrix = kernel
        .iter()
        .map(|z| {
            let x: Vec<Rat> = z[..ga.len()]
                .iter()
                .map(|v| Rat::from_integer(v.clone()))
                .collect();
            vec_mat(&x, &ga)
        })
        .collect();
    EmbeddedGroup::new(a.basis.clone(), rational_hnf(&images))
}

/// A finitely generated subgroup of `R` is dense iff it is not cyclic, iff its
/// rank is at least 2. The zero group is not dense.
pub fn is_dense_in_r(a: &EmbeddedGroup) -> bool {
    a.rank() >= 2
}

/// Strict direct sum of rank-one-trace summands over one basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumInstance {
    summands: Vec<EmbeddedGroup>,
}

impl DirectSumInstance {
    pub fn new(summands: Vec<EmbeddedGroup>) -> Result<Self> {
        if summands.len() < 2 {
            return Err(Error::InvalidArgument(
                "a direct sum needs at least two summands".into(),
            ));
        }
        if summands.iter().any(|g| g.basis != summands[0].basis) {
            return Err(Error::BasisMismatch);
        }
        if let Some(i) = summands.iter().position(EmbeddedGroup::is_zero) {
            return Err(Error::InvalidArgument(format!("summand {i} is zero")));
        }
        Ok(Self { summands })
    }

    pub fn summands(&self) -> &[EmbeddedGroup] {
        &self.summands
    }

    pub fn basis(&self) -> &RealBasis {
        self.summands[0].basis()
    }

    /// The sub-sum on the given summand indices.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.summands[i].clone()).collect())
    }
}

/// Generators of `T(ker φ) ⊂ R^n`; row `s`, entry `i·L + l` is the `l`-th
/// basis coordinate of the `i`-th component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelImage {
    pub generators: RatMatrix,
    pub summands: usize,
    pub basis_len: usize,
    /// Every summand trace is injective, so `T(V) = T(ker φ)`.
    pub injective_summands: bool,
}

pub fn kernel_of_sum_t(d: &DirectSumInstance) -> KernelImage {
    let n = d.summands.len();
    let len = d.basis().len();
    let blocks: Vec<RatMatrix> = d.summands.iter().map(EmbeddedGroup::hnf).collect();
    let stacked: RatMatrix = blocks.iter().flatten().cloned().collect();
    let (ints, _) = clear_denominators(&stacked);
    let kernel = left_kernel(&ints);
    let images: RatMatrix = kernel
        .iter()
        .map(|z| {
            let mut row = Vec::with_capacity(n * len);
            let mut offset = 0;
            for block in &blocks {
                let x: Vec<Rat> = z[offset..offset + block.len()]
                    .iter()
                    .map(|v| Rat::from_integer(v.clone()))
                    .collect();
                row.extend(vec_mat(&x, block));
                offset += block.len();
            }
            row
        })
        .collect();
    KernelImage {
        generators: rational_hnf(&images),
        summands: n,
        basis_len: len,
        injective_summands: true,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityRoute {
    /// The rational points of the lattice already span; the dual is rational.
    Rational,
    /// Linear algebra over the multiquadratic field of the basis.
    Field,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityVerdict {
    pub dense: bool,
    /// On failure: nonzero `w ∈ R^m` with integral pairing against every
    /// generator, coordinates in the field of the basis.
    pub dual: Option<Vec<Element>>,
    pub route: DensityRoute,
    /// The basis independence was asserted rather than certified.
    pub conditional: bool,
}

/// Density of the group generated by the rows of `m` (elements of `R^dim`
/// with per-component basis coordinates) in the hyperplane `(1, ..., 1)^⊥`.
pub fn dense_in_hyperplane(
    m: &[Vec<Rat>],
    dim: usize,
    basis: &RealBasis,
) -> Result<DensityVerdict> {
    let len = basis.len();
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "ambient dimension must be positive".into(),
        ));
    }
    for row in m {
        if row.len() != dim * len {
            return Err(Error::InvalidArgument(format!(
                "row has {} entries, expected {}",
                row.len(),
                dim * len
            )));
        }
        for l in 0..len {
            let s = (0..dim).fold(Rat::zero(), |acc, i| acc + &row[i * len + l]);
            if !s.is_zero() {
                return Err(Error::InvalidArgument(
                    "generator lies off the hyperplane".into(),
                ));
            }
        }
    }
    let n = dim - 1;
    let conditional = !basis.is_certified();
    let lift = |w: Vec<Element>| {
        let mut w = w;
        w.push(Element::zero());
        w
    };
    if n == 0 {
        return Ok(DensityVerdict {
            dense: true,
            dual: None,
            route: DensityRoute::Rational,
            conditional,
        });
    }
    // per-generator components: rational part and one vector per irrational label
    let part =
        |row: &[Rat], l: usize| -> Vec<Rat> { (0..n).map(|i| row[i * len + l].clone()).collect() };
    let rational: RatMatrix = m.iter().map(|r| part(r, 0)).collect();
    let irrational: RatMatrix = m
        .iter()
        .map(|r| (1..len).flat_map(|l| part(r, l)).collect())
        .collect();

    // rational points of the lattice: integer relations killing irrational parts
    let lattice_q: RatMatrix = if len == 1 || m.is_empty() {
        rational.clone()
    } else {
        let (ints, _) = clear_denominators(&irrational);
        left_kernel(&ints)
            .iter()
            .map(|z| {
                let x: Vec<Rat> = z.iter().map(|v| Rat::from_integer(v.clone())).collect();
                vec_mat(&x, &rational)
            })
            .collect()
    };
    if rank(&lattice_q) == n {
        // any dual vector is rational and kills every irrational part
        let constraints: RatMatrix = m
            .iter()
            .flat_map(|r| (1..len).map(move |l| part(r, l)))
            .collect();
        let space = right_nullspace(&constraints, n);
        let Some(w) = space.first() else {
            return Ok(DensityVerdict {
                dense: true,
                dual: None,
                route: DensityRoute::Rational,
                conditional,
            });
        };
        let w: Vec<Rat> = primitive_integer(w)
            .into_iter()
            .map(Rat::from_integer)
            .collect();
        let pairings: Vec<Rat> = rational.iter().map(|v| dot(v, &w)).collect();
        let scale = Rat::from_integer(lcm_all(pairings.iter().map(|q| q.denom())));
        let dual = w.iter().map(|x| Element::rational(x * &scale)).collect();
        return Ok(DensityVerdict {
            dense: false,
            dual: Some(lift(dual)),
            route: DensityRoute::Rational,
            conditional,
        });
    }

    if basis.radicands().is_none() {
        return Err(Error::Unsupported(
            "density over an asserted basis needs the rational points to span; use a radical basis"
                .into(),
        ));
    }
    let vectors: Vec<Vec<Element>> = m
        .iter()
        .map(|r| {
            (0..n)
                .map(|i| {
                    basis
                        .element(&r[i * len..(i + 1) * len])
                        .expect("radical basis")
                })
                .collect()
        })
        .collect();
    let chosen = numfield::independent_rows(&vectors);
    if chosen.len() < n {
        let w = numfield::null_vector(&vectors, n).expect("rank deficient");
        return Ok(DensityVerdict {
            dense: false,
            dual: Some(lift(w)),
            route: DensityRoute::Field,
            conditional,
        });
    }
    let a: Vec<Vec<Element>> = chosen.iter().map(|&i| vectors[i].clone()).collect();
    let a_inv = numfield::inverse(&a).expect("independent rows");
    // α_s = v_s A^{-1}; integrality of α_s · t for t ∈ Z^n
    let alphas: Vec<Vec<Element>> = vectors
        .iter()
        .map(|v| {
            (0..n)
                .map(|j| {
                    numfield::dot(
                        v,
                        &a_inv.iter().map(|row| row[j].clone()).collect::<Vec<_>>(),
                    )
                })
                .collect()
        })
        .collect();
    let mut radicals: Vec<u64> = alphas
        .iter()
        .flatten()
        .flat_map(|e| e.terms().map(|(d, _)| *d))
        .collect();
    radicals.sort_unstable();
    radicals.dedup();
    let constraints: RatMatrix = alphas
        .iter()
        .flat_map(|alpha| {
            radicals
                .iter()
                .filter(|&&d| d != 1)
                .map(move |&d| alpha.iter().map(|e| e.coeff(d)).collect())
        })
        .collect();
    let space = right_nullspace(&constraints, n);
    let Some(t) = space.first() else {
        return Ok(DensityVerdict {
            dense: true,
            dual: None,
            route: DensityRoute::Field,
            conditional,
        });
    };
    let t: Vec<Rat> = primitive_integer(t)
        .into_iter()
        .map(Rat::from_integer)
        .collect();
    let pairings: Vec<Rat> = alphas
        .iter()
        .map(|alpha| dot(&alpha.iter().map(|e| e.coeff(1)).collect::<Vec<_>>(), &t))
        .collect();
    let scale = Rat::from_integer(lcm_all(pairings.iter().map(|q| q.denom())));
    let t: Vec<Element> = t.iter().map(|x| Element::rational(x * &scale)).collect();
    let w: Vec<Element> = a_inv.iter().map(|row| numfield::dot(row, &t)).collect();
    Ok(DensityVerdict {
        dense: false,
        dual: Some(lift(w)),
        route: DensityRoute::Field,
        conditional,
    })
}

/// Pairing of a dual vector with a generator row. Over an asserted basis the
/// pairing is returned only when it is rational.
pub fn pair_dual(dual: &[Element], row: &[Rat], basis: &RealBasis) -> Option<Element> {
    let len = basis.len();
    let mut acc = Element::zero();
    let mut irrational = vec![Rat::zero(); len];
    for (i, w) in dual.iter().enumerate() {
        let coords = &row[i * len..(i + 1) * len];
        match basis.element(coords) {
            Some(x) => acc = acc.add(&w.mul(&x)),
            None => {
                let q = w.as_rational()?;
                acc = acc.add(&Element::rational(&q * &coords[0]));
                for l in 1..len {
                    irrational[l] += &q * &coords[l];
                }
            }
        }
    }
    irrational.iter().all(Zero::is_zero).then_some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumCertificate {
    pub kernel: KernelImage,
    pub density: DensityVerdict,
}

/// Order-unit goodness of `⊕σ_i` on the strict direct sum: `T(V)` must be
/// dense in `(1, ..., 1)^⊥`.
pub fn direct_sum_order_unit_good(d: &DirectSumInstance) -> Result<(bool, DirectSumCertificate)> {
    let kernel = kernel_of_sum_t(d);
    let density = dense_in_hyperplane(&kernel.generators, kernel.summands, d.basis())?;
    Ok((density.dense, DirectSumCertificate { kernel, density }))
}

pub fn value_group_intersection_dense(a: &EmbeddedGroup, b: &EmbeddedGroup) -> Result<bool> {
    Ok(is_dense_in_r(&intersect(a, b)?))
}

/// `true` iff the pairing is a rational integer.
pub fn is_integral(e: &Element) -> bool {
    e.as_rational().is_some_and(|q| q.is_integer())
}
