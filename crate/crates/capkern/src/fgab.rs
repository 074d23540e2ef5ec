//! Finitely generated abelian groups presented by integer relation matrices:
//! kernels, images, cokernels, n-torsion and mod-n functors, induced maps,
//! and an exact-sequence checker.
//!
//! A group on `g` generators is `Z^g` modulo the row lattice of its relation
//! matrix. Elements are integer row vectors of length `g`, stored reduced
//! against the Hermite normal form of the relation lattice so that equality
//! is literal coordinate equality.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::matrix::{
    self, hnf, lattice_basis, lattice_eq, lattice_intersection, lattice_subset, preimage_lattice,
    snf, Mat,
};
use crate::{Error, Result};

#[derive(Clone)]
pub struct FgAbGroup {
    num_generators: usize,
    relations: Mat,
    /// Basis (HNF rows) of the relation lattice; canonical reduction target.
    rel_basis: Mat,
    /// Invariant factors d_1 | d_2 | ..., each >= 2.
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    /// Change of basis into Smith coordinates: `smith = v * smith_v`,
    /// `v = smith * smith_v_inv`. Diagonal entries of the Smith form (all of
    /// them, including 1s and 0s) are kept for coordinate reduction.
    smith_v: Mat,
    smith_v_inv: Mat,
    smith_diag: Vec<BigInt>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.num_generators == other.num_generators && self.rel_basis == other.rel_basis
    }
}
impl Eq for FgAbGroup {}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} gens, {})", self.num_generators, self)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl FgAbGroup {
    pub fn from_presentation(num_generators: usize, relations: Mat) -> Result<Self> {
        assert_eq!(
            relations.cols(),
            num_generators,
            "relation width must match generator count"
        );
        let rel_basis = lattice_basis(&relations)?;
        let s = snf(&relations)?;
        let mut smith_diag = Vec::with_capacity(num_generators);
        for i in 0..num_generators {
            if i < s.d.rows() {
                smith_diag.push(s.d[(i, i)].clone());
            } else {
                smith_diag.push(BigInt::zero());
            }
        }
        let invariant_factors: Vec<BigInt> =
            smith_diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        let free_rank = smith_diag.iter().filter(|d| d.is_zero()).count();
        let smith_v = s.v;
        let smith_v_inv = unimodular_inverse(&smith_v)?;
        Ok(FgAbGroup {
            num_generators,
            relations,
            rel_basis,
            invariant_factors,
            free_rank,
            smith_v,
            smith_v_inv,
            smith_diag,
        })
    }

    pub fn trivial() -> Self {
        FgAbGroup::from_presentation(0, Mat::empty(0)).expect("trivial group")
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup::from_presentation(rank, Mat::empty(rank)).expect("free group")
    }

    pub fn cyclic(n: u64) -> Self {
        FgAbGroup::from_presentation(1, Mat::from_rows(vec![vec![BigInt::from(n)]]))
            .expect("cyclic group")
    }

    /// Direct product of cyclic groups `Z/n_i` (`n_i = 0` meaning `Z`).
    pub fn product_of_cyclics(orders: &[u64]) -> Self {
        let g = orders.len();
        let mut rels = Mat::empty(g);
        for (i, &n) in orders.iter().enumerate() {
            if n != 0 {
                let mut row = vec![BigInt::zero(); g];
                row[i] = BigInt::from(n);
                rels.push_row(row);
            }
        }
        FgAbGroup::from_presentation(g, rels).expect("product of cyclics")
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relations(&self) -> &Mat {
        &self.relations
    }

    pub fn relation_basis(&self) -> &Mat {
        &self.rel_basis
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        let mut o = BigInt::one();
        for d in &self.invariant_factors {
            o *= d;
        }
        Some(o)
    }

    /// Canonical representative of `v` modulo the relation lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.num_generators);
        let mut out = v.to_vec();
        let h = &self.rel_basis;
        let mut col = 0;
        for r in 0..h.rows() {
            while col < h.cols() && h[(r, col)].is_zero() {
                col += 1;
            }
            if col >= h.cols() {
                break;
            }
            let q = out[col].div_floor(&h[(r, col)]);
            if !q.is_zero() {
                for c in 0..h.cols() {
                    let sub = &q * &h[(r, c)];
                    out[c] -= sub;
                }
            }
        }
        out
    }

    pub fn is_zero_elem(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn elems_equal(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.num_generators]
    }

    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.zero();
        v[i] = BigInt::one();
        self.reduce(&v)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let sum: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&sum)
    }

    pub fn neg_elem(&self, a: &[BigInt]) -> Vec<BigInt> {
        let neg: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&neg)
    }

    pub fn scale(&self, n: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| n * x).collect();
        self.reduce(&s)
    }

    /// Coordinates of `v` in the Smith basis, reduced modulo the diagonal.
    pub fn smith_coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut w = self.smith_v.mul_row(v);
        for (i, d) in self.smith_diag.iter().enumerate() {
            if d.is_one() {
                w[i] = BigInt::zero();
            } else if !d.is_zero() {
                w[i] = w[i].mod_floor(d);
            }
        }
        w
    }

    pub fn from_smith_coords(&self, w: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&self.smith_v_inv.mul_row(w))
    }

    /// All elements of a finite group, in a deterministic order.
    /// Panics if the group is infinite.
    pub fn enumerate(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![vec![]];
        for d in &self.smith_diag {
            let bound = if d.is_zero() { unreachable!() } else { d.clone() };
            let mut next = Vec::new();
            for partial in &out {
                let mut k = BigInt::zero();
                while k < bound {
                    let mut p = partial.clone();
                    p.push(k.clone());
                    next.push(p);
                    k += 1;
                }
            }
            out = next;
        }
        out.into_iter().map(|w| self.from_smith_coords(&w)).collect()
    }

    /// Order of an element (finite groups only give finite orders here;
    /// returns None when the element has infinite order).
    pub fn elem_order(&self, v: &[BigInt]) -> Option<BigInt> {
        let w = self.smith_coords(v);
        let mut ord = BigInt::one();
        for (i, d) in self.smith_diag.iter().enumerate() {
            if w[i].is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            let o = d / d.gcd(&w[i]);
            ord = ord.lcm(&o);
        }
        Some(ord)
    }

    pub fn debug_dump(&self) -> String {
        format!(
            "generators: {}\nrelations:\n{:?}\nstructure: {}",
            self.num_generators, self.relations, self
        )
    }
}

/// Inverse of a unimodular square matrix.
fn unimodular_inverse(v: &Mat) -> Result<Mat> {
    let h = hnf(v)?;
    // A unimodular matrix has HNF equal to the identity; the transform is
    // then exactly the inverse.
    if h.h != Mat::identity(v.rows()) {
        return Err(Error::SolveFailure("matrix is not unimodular".into()));
    }
    Ok(h.u)
}

/// A homomorphism between presented groups. Row vectors map by `v -> v * matrix`.
#[derive(Clone)]
pub struct FgAbHom {
    source: Arc<FgAbGroup>,
    target: Arc<FgAbGroup>,
    matrix: Mat,
}

impl fmt::Debug for FgAbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbHom({} -> {}, {:?})", self.source, self.target, self.matrix)
    }
}

/// A subgroup of an ambient group, presented abstractly together with its
/// embedding. Generators of `group` map to rows of the embedding matrix.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: Arc<FgAbGroup>,
    pub embedding: FgAbHom,
}

impl FgAbHom {
    pub fn new(source: Arc<FgAbGroup>, target: Arc<FgAbGroup>, matrix: Mat) -> Result<Self> {
        assert_eq!(matrix.rows(), source.num_generators(), "matrix rows != source generators");
        assert_eq!(matrix.cols(), target.num_generators(), "matrix cols != target generators");
        // Well-definedness: every source relation must land in the target
        // relation lattice.
        let image_of_rels = source.relations.mul(&matrix);
        if !lattice_subset(&image_of_rels, &target.relations)? {
            return Err(Error::IllFormedHom(
                "a source relation does not map into the target relation lattice".into(),
            ));
        }
        Ok(FgAbHom { source, target, matrix })
    }

    pub fn identity(group: Arc<FgAbGroup>) -> Self {
        let n = group.num_generators();
        FgAbHom { source: group.clone(), target: group, matrix: Mat::identity(n) }
    }

    pub fn zero(source: Arc<FgAbGroup>, target: Arc<FgAbGroup>) -> Self {
        let matrix = Mat::zero(source.num_generators(), target.num_generators());
        FgAbHom { source, target, matrix }
    }

    pub fn source(&self) -> &Arc<FgAbGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FgAbGroup> {
        &self.target
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_row(v))
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.matrix.rows()).all(|r| self.target.is_zero_elem(self.matrix.row(r)))
    }

    pub fn compose(&self, then: &FgAbHom) -> Result<FgAbHom> {
        if self.target.as_ref() != then.source.as_ref() {
            return Err(Error::NotComposable(format!(
                "target {} does not match next source {}",
                self.target, then.source
            )));
        }
        FgAbHom::new(self.source.clone(), then.target.clone(), self.matrix.mul(&then.matrix))
    }

    /// The lattice `{ v in Z^gA : v * M  ∈ relation lattice of target }`.
    pub fn kernel_lattice(&self) -> Result<Mat> {
        preimage_lattice(&self.matrix, &self.target.relations)
    }

    /// The lattice `rowlat(M) + relation lattice of target` inside `Z^gB`.
    pub fn image_lattice(&self) -> Result<Mat> {
        lattice_basis(&self.matrix.stack(&self.target.relations))
    }

    pub fn kernel(&self) -> Result<Subgroup> {
        let lat = self.kernel_lattice()?;
        subgroup_from_lattice(self.source.clone(), &lat)
    }

    pub fn image(&self) -> Result<Subgroup> {
        let lat = self.image_lattice()?;
        subgroup_from_lattice(self.target.clone(), &lat)
    }

    pub fn cokernel(&self) -> Result<(Arc<FgAbGroup>, FgAbHom)> {
        let rels = self.target.relations.stack(&self.matrix);
        let coker = Arc::new(FgAbGroup::from_presentation(self.target.num_generators(), rels)?);
        let proj = FgAbHom::new(
            self.target.clone(),
            coker.clone(),
            Mat::identity(self.target.num_generators()),
        )?;
        Ok((coker, proj))
    }

    /// Invert a bijective homomorphism.
    pub fn invert_iso(&self) -> Result<FgAbHom> {
        // Solve generator-wise: for each target generator e_i find a source
        // vector w_i with w_i * M ≡ e_i modulo target relations.
        let ga = self.source.num_generators();
        let gb = self.target.num_generators();
        let stacked = self.matrix.stack(&self.target.relations);
        let mut inv = Mat::zero(gb, ga);
        for i in 0..gb {
            let mut e = vec![BigInt::zero(); gb];
            e[i] = BigInt::one();
            let Some(sol) = matrix::solve_left(&stacked, &e)? else {
                return Err(Error::SolveFailure(
                    "homomorphism is not surjective; cannot invert".into(),
                ));
            };
            for c in 0..ga {
                inv[(i, c)] = sol[c].clone();
            }
        }
        let candidate = FgAbHom::new(self.target.clone(), self.source.clone(), inv)?;
        // Check both composites are identities, which also certifies injectivity.
        let back = self.compose(&candidate)?;
        let forth = candidate.compose(self)?;
        for i in 0..ga {
            if !self.source.elems_equal(&back.apply(&self.source.generator(i)), &self.source.generator(i)) {
                return Err(Error::SolveFailure("inverse candidate fails on source".into()));
            }
        }
        for i in 0..gb {
            if !self.target.elems_equal(&forth.apply(&self.target.generator(i)), &self.target.generator(i)) {
                return Err(Error::SolveFailure("inverse candidate fails on target".into()));
            }
        }
        Ok(candidate)
    }
}

/// Present a sublattice `L ⊆ Z^g` with `L ⊇` (a sublattice containing the
/// ambient relations is not required; relations are computed as the full
/// preimage) as a subgroup of the ambient group.
pub fn subgroup_from_lattice(ambient: Arc<FgAbGroup>, lat: &Mat) -> Result<Subgroup> {
    // Ensure the ambient relation lattice is included so the subgroup is
    // honestly `image of L in the quotient`.
    let full = lattice_basis(&lat.stack(&ambient.relations))?;
    let k = full.rows();
    let rels = preimage_lattice(&full, &ambient.relations)?;
    let group = Arc::new(FgAbGroup::from_presentation(k, rels)?);
    let embedding = FgAbHom::new(group.clone(), ambient, full)?;
    Ok(Subgroup { group, embedding })
}

impl Subgroup {
    /// Coordinates in the subgroup presentation of an ambient element that
    /// lies in the subgroup. Fails with `SolveFailure` otherwise.
    pub fn coords_of(&self, ambient_elem: &[BigInt]) -> Result<Vec<BigInt>> {
        let stacked = self.embedding.matrix.stack(&self.embedding.target.relations);
        match matrix::solve_left(&stacked, ambient_elem)? {
            Some(sol) => {
                Ok(self.group.reduce(&sol[..self.group.num_generators()].to_vec()))
            }
            None => Err(Error::SolveFailure("element is not in the subgroup".into())),
        }
    }

    pub fn contains(&self, ambient_elem: &[BigInt]) -> Result<bool> {
        let stacked = self.embedding.matrix.stack(&self.embedding.target.relations);
        Ok(matrix::solve_left(&stacked, ambient_elem)?.is_some())
    }
}

/// Kernel, image and cokernel of a homomorphism in one call.
pub fn hom_kernel_image_cokernel(
    phi: &FgAbHom,
) -> Result<(Subgroup, Subgroup, (Arc<FgAbGroup>, FgAbHom))> {
    Ok((phi.kernel()?, phi.image()?, phi.cokernel()?))
}

/// The n-torsion subgroup `A_n = Ker(n : A -> A)` with its embedding.
pub fn n_torsion(a: &Arc<FgAbGroup>, n: &BigInt) -> Result<Subgroup> {
    assert!(n >= &BigInt::one(), "n must be >= 1");
    let g = a.num_generators();
    let lat = preimage_lattice(&Mat::scalar(g, n), &a.relations)?;
    subgroup_from_lattice(a.clone(), &lat)
}

/// The quotient `A/n = Coker(n : A -> A)` with its projection.
pub fn mod_n(a: &Arc<FgAbGroup>, n: &BigInt) -> Result<(Arc<FgAbGroup>, FgAbHom)> {
    assert!(n >= &BigInt::one(), "n must be >= 1");
    let g = a.num_generators();
    let rels = a.relations().stack(&Mat::scalar(g, n));
    let quo = Arc::new(FgAbGroup::from_presentation(g, rels)?);
    let proj = FgAbHom::new(a.clone(), quo.clone(), Mat::identity(g))?;
    Ok((quo, proj))
}

/// The maps induced by `psi` on n-torsion subgroups and mod-n quotients.
pub fn induced_maps(psi: &FgAbHom, n: &BigInt) -> Result<(FgAbHom, FgAbHom)> {
    let src_tors = n_torsion(psi.source(), n)?;
    let tgt_tors = n_torsion(psi.target(), n)?;
    // psi restricted to torsion: image of each torsion generator expressed in
    // the target torsion presentation.
    let mut m = Mat::zero(src_tors.group.num_generators(), tgt_tors.group.num_generators());
    for i in 0..src_tors.group.num_generators() {
        let ambient = src_tors.embedding.matrix().row_vec(i);
        let image = psi.matrix().mul_row(&ambient);
        let coords = tgt_tors.coords_of(&image)?;
        for c in 0..coords.len() {
            m[(i, c)] = coords[c].clone();
        }
    }
    let psi_n = FgAbHom::new(src_tors.group.clone(), tgt_tors.group.clone(), m)?;

    let (src_mod, _) = mod_n(psi.source(), n)?;
    let (tgt_mod, _) = mod_n(psi.target(), n)?;
    let psi_mod = FgAbHom::new(src_mod, tgt_mod, psi.matrix().clone())?;
    Ok((psi_n, psi_mod))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessVerdict {
    /// Index of the interior node (the target group of map `node`).
    pub node: usize,
    pub composition_is_zero: bool,
    pub kernel_equals_image: bool,
}

/// Check exactness of a composable sequence at every interior node.
pub fn check_exact(seq: &[FgAbHom]) -> Result<Vec<ExactnessVerdict>> {
    for w in seq.windows(2) {
        if w[0].target.as_ref() != w[1].source.as_ref() {
            return Err(Error::NotComposable(format!(
                "node groups differ: {} vs {}",
                w[0].target, w[1].source
            )));
        }
    }
    let mut out = Vec::new();
    for (i, w) in seq.windows(2).enumerate() {
        let im = w[0].image_lattice()?;
        let ker = w[1].kernel_lattice()?;
        let composition_is_zero = lattice_subset(&im, &ker)?;
        let kernel_equals_image = composition_is_zero && lattice_subset(&ker, &im)?;
        // Order comparison as an extra certificate when both sides are finite.
        if kernel_equals_image {
            debug_assert!(lattice_eq(&im, &ker)?);
        }
        out.push(ExactnessVerdict { node: i, composition_is_zero, kernel_equals_image });
    }
    Ok(out)
}

/// Intersection of subgroups given by their lattices in a common ambient group.
pub fn subgroup_intersection(
    ambient: Arc<FgAbGroup>,
    lats: &[Mat],
) -> Result<Subgroup> {
    let mut acc: Option<Mat> = None;
    for l in lats {
        acc = Some(match acc {
            None => l.clone(),
            Some(prev) => lattice_intersection(&prev, l)?,
        });
    }
    let lat = acc.unwrap_or_else(|| Mat::identity(ambient.num_generators()));
    subgroup_from_lattice(ambient, &lat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn bvec(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    #[test]
    fn presentations() {
        let z = FgAbGroup::from_presentation(1, Mat::empty(1)).unwrap();
        assert_eq!(z.free_rank(), 1);
        assert!(z.invariant_factors().is_empty());

        let z2 = FgAbGroup::from_presentation(1, Mat::from_i64(&[&[2]])).unwrap();
        assert_eq!(z2.invariant_factors(), &[bi(2)]);
        assert_eq!(z2.order(), Some(bi(2)));

        let g = FgAbGroup::from_presentation(2, Mat::from_i64(&[&[2, 0], &[0, 4]])).unwrap();
        assert_eq!(g.invariant_factors(), &[bi(2), bi(4)]);
        assert_eq!(g.order(), Some(bi(8)));

        let t = FgAbGroup::trivial();
        assert!(t.is_trivial());
        assert_eq!(t.order(), Some(bi(1)));
    }

    #[test]
    fn reduction_is_canonical_and_congruent() {
        let g = Arc::new(FgAbGroup::from_presentation(2, Mat::from_i64(&[&[2, 0], &[0, 4]])).unwrap());
        // Equality iff difference in relation lattice.
        assert!(g.elems_equal(&bvec(&[3, 5]), &bvec(&[1, 1])));
        assert!(!g.elems_equal(&bvec(&[1, 0]), &bvec(&[0, 1])));
        // Congruence with addition.
        let a = bvec(&[1, 3]);
        let b = bvec(&[5, 6]);
        let c = bvec(&[3, 2]); // b reduced differently
        assert!(g.elems_equal(&b, &c));
        assert!(g.elems_equal(&g.add(&a, &b), &g.add(&a, &c)));
    }

    #[test]
    fn kernel_image_cokernel_times_two_on_z() {
        let z = Arc::new(FgAbGroup::free(1));
        let phi = FgAbHom::new(z.clone(), z.clone(), Mat::from_i64(&[&[2]])).unwrap();
        let (ker, im, (coker, _)) = hom_kernel_image_cokernel(&phi).unwrap();
        assert!(ker.group.is_trivial());
        assert_eq!(im.group.free_rank(), 1);
        assert_eq!(coker.invariant_factors(), &[bi(2)]);
    }

    #[test]
    fn kernel_cokernel_zero_map() {
        let z4 = Arc::new(FgAbGroup::cyclic(4));
        let z2 = Arc::new(FgAbGroup::cyclic(2));
        let zero = FgAbHom::zero(z4.clone(), z2.clone());
        let (ker, _, (coker, _)) = hom_kernel_image_cokernel(&zero).unwrap();
        assert_eq!(ker.group.order(), Some(bi(4)));
        assert_eq!(coker.order(), Some(bi(2)));
    }

    #[test]
    fn kernel_of_reduction_z4_to_z2() {
        let z4 = Arc::new(FgAbGroup::cyclic(4));
        let z2 = Arc::new(FgAbGroup::cyclic(2));
        let red = FgAbHom::new(z4.clone(), z2.clone(), Mat::from_i64(&[&[1]])).unwrap();
        let ker = red.kernel().unwrap();
        // Brute-force oracle: enumerate all four elements of Z/4.
        let mut in_kernel = Vec::new();
        for e in z4.enumerate() {
            if z2.is_zero_elem(&red.apply(&e)) {
                in_kernel.push(e);
            }
        }
        assert_eq!(in_kernel.len(), 2);
        assert_eq!(ker.group.order(), Some(bi(2)));
        // Kernel generated by coordinate 2.
        assert!(ker.contains(&bvec(&[2])).unwrap());
        assert!(!ker.contains(&bvec(&[1])).unwrap());
        let coker = red.cokernel().unwrap().0;
        assert!(coker.is_trivial());
    }

    #[test]
    fn ill_formed_hom_rejected() {
        let z2 = Arc::new(FgAbGroup::cyclic(2));
        let z = Arc::new(FgAbGroup::free(1));
        // Z/2 -> Z by 1 is not well defined.
        let r = FgAbHom::new(z2, z, Mat::from_i64(&[&[1]]));
        assert!(matches!(r, Err(Error::IllFormedHom(_))));
    }

    #[test]
    fn torsion_examples() {
        let z = Arc::new(FgAbGroup::free(1));
        assert!(n_torsion(&z, &bi(5)).unwrap().group.is_trivial());

        let z6 = Arc::new(FgAbGroup::cyclic(6));
        let t = n_torsion(&z6, &bi(2)).unwrap();
        assert_eq!(t.group.order(), Some(bi(2)));
        // Generated by the class of 3: brute-force check.
        let two_torsion: Vec<_> =
            z6.enumerate().into_iter().filter(|e| z6.is_zero_elem(&z6.scale(&bi(2), e))).collect();
        assert_eq!(two_torsion.len(), 2);
        assert!(t.contains(&bvec(&[3])).unwrap());

        let g = Arc::new(FgAbGroup::from_presentation(2, Mat::from_i64(&[&[2, 0], &[0, 4]])).unwrap());
        let t2 = n_torsion(&g, &bi(2)).unwrap();
        assert_eq!(t2.group.order(), Some(bi(4)));
        assert_eq!(t2.group.invariant_factors(), &[bi(2), bi(2)]);
        assert!(t2.contains(&bvec(&[1, 0])).unwrap());
        assert!(t2.contains(&bvec(&[0, 2])).unwrap());
        assert!(!t2.contains(&bvec(&[0, 1])).unwrap());
    }

    #[test]
    fn mod_n_examples() {
        let z = Arc::new(FgAbGroup::free(1));
        let (q, _) = mod_n(&z, &bi(3)).unwrap();
        assert_eq!(q.invariant_factors(), &[bi(3)]);

        // Z/2 mod 3: multiplication by 3 is the identity, so the quotient is trivial.
        let z2 = Arc::new(FgAbGroup::cyclic(2));
        let (q, _) = mod_n(&z2, &bi(3)).unwrap();
        assert!(q.is_trivial());

        let z4 = Arc::new(FgAbGroup::cyclic(4));
        let (q, proj) = mod_n(&z4, &bi(2)).unwrap();
        assert_eq!(q.invariant_factors(), &[bi(2)]);
        // Projection kills 2A.
        assert!(q.is_zero_elem(&proj.apply(&bvec(&[2]))));
    }

    #[test]
    fn n_equals_one_degenerate() {
        let g = Arc::new(FgAbGroup::from_presentation(2, Mat::from_i64(&[&[6, 0], &[0, 10]])).unwrap());
        let t = n_torsion(&g, &bi(1)).unwrap();
        assert!(t.group.is_trivial());
        let (q, _) = mod_n(&g, &bi(1)).unwrap();
        assert!(q.is_trivial());
    }

    #[test]
    fn induced_maps_identity_and_doubling() {
        let z4 = Arc::new(FgAbGroup::cyclic(4));
        let id = FgAbHom::identity(z4.clone());
        let (id_n, id_mod) = induced_maps(&id, &bi(2)).unwrap();
        assert_eq!(id_n.source().order(), Some(bi(2)));
        assert_eq!(id_mod.source().order(), Some(bi(2)));
        assert!(id_n.kernel().unwrap().group.is_trivial());
        assert!(id_mod.kernel().unwrap().group.is_trivial());

        // psi = x2 on Z/4: psi_2 is the zero map and Ker(psi_2) = Z/2 = (Ker psi)_2.
        let dbl = FgAbHom::new(z4.clone(), z4.clone(), Mat::from_i64(&[&[2]])).unwrap();
        let (dbl_n, _) = induced_maps(&dbl, &bi(2)).unwrap();
        assert!(dbl_n.is_zero_map());
        let ker_psi = dbl.kernel().unwrap();
        // (Ker psi)_2 inside the ambient group:
        let ker_psi_2 = n_torsion(&ker_psi.group, &bi(2)).unwrap();
        assert_eq!(ker_psi_2.group.order(), Some(bi(2)));
        assert_eq!(dbl_n.kernel().unwrap().group.order(), Some(bi(2)));
    }

    #[test]
    fn mod_n_of_kernel_differs_from_kernel_of_mod_n() {
        // psi: Z -> Z/2 reduction, n = 2. Ker(psi/2) = 0 but (Ker psi)/2 = Z/2.
        let z = Arc::new(FgAbGroup::free(1));
        let z2 = Arc::new(FgAbGroup::cyclic(2));
        let psi = FgAbHom::new(z.clone(), z2.clone(), Mat::from_i64(&[&[1]])).unwrap();
        let (_, psi_mod) = induced_maps(&psi, &bi(2)).unwrap();
        let ker_of_mod = psi_mod.kernel().unwrap();
        assert!(ker_of_mod.group.is_trivial());
        let (mod_of_ker, _) = mod_n(&psi.kernel().unwrap().group, &bi(2)).unwrap();
        assert_eq!(mod_of_ker.order(), Some(bi(2)));
        assert_ne!(ker_of_mod.group.order(), mod_of_ker.order());
    }

    /// Build a random hom that is well defined by construction: pick the
    /// source presentation and matrix freely, then enlarge the target
    /// relations by the images of the source relations.
    fn random_hom(rng: &mut ChaCha8Rng) -> FgAbHom {
        let ga = rng.gen_range(1..=3);
        let gb = rng.gen_range(1..=3);
        let ra = rng.gen_range(0..=3);
        let rb = rng.gen_range(0..=2);
        let mut rel_a = Mat::zero(ra, ga);
        for r in 0..ra {
            for c in 0..ga {
                rel_a[(r, c)] = bi(rng.gen_range(-6..=6));
            }
        }
        let mut m = Mat::zero(ga, gb);
        for r in 0..ga {
            for c in 0..gb {
                m[(r, c)] = bi(rng.gen_range(-4..=4));
            }
        }
        let mut rel_b = rel_a.mul(&m);
        for _ in 0..rb {
            let mut row = Vec::new();
            for _ in 0..gb {
                row.push(bi(rng.gen_range(-6..=6)));
            }
            rel_b.push_row(row);
        }
        let a = Arc::new(FgAbGroup::from_presentation(ga, rel_a).unwrap());
        let b = Arc::new(FgAbGroup::from_presentation(gb, rel_b).unwrap());
        FgAbHom::new(a, b, m).unwrap()
    }

    #[test]
    fn torsion_of_kernel_law_on_random_homs() {
        // Ker(psi_n) = (Ker psi)_n as subgroups of the source, for 200 random
        // pairs (psi, n).
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..200 {
            let psi = random_hom(&mut rng);
            let n = bi([2, 3, 4, 6][rng.gen_range(0..4)]);
            let (psi_n, _) = induced_maps(&psi, &n).unwrap();
            let src_tors = n_torsion(psi.source(), &n).unwrap();

            // Left side: kernel of psi_n pushed into the ambient source group.
            let ker_n = psi_n.kernel().unwrap();
            let lhs_in_tors = ker_n.embedding.matrix();
            let lhs_ambient = lhs_in_tors.mul(src_tors.embedding.matrix());

            // Right side: (Ker psi)_n pushed into the ambient source group.
            let ker = psi.kernel().unwrap();
            let ker_tors = n_torsion(&ker.group, &n).unwrap();
            let rhs_ambient = ker_tors.embedding.matrix().mul(ker.embedding.matrix());

            let lhs = lattice_basis(&lhs_ambient.stack(psi.source().relations())).unwrap();
            let rhs = lattice_basis(&rhs_ambient.stack(psi.source().relations())).unwrap();
            assert!(lattice_eq(&lhs, &rhs).unwrap(), "torsion law failed");
        }
    }

    #[test]
    fn exactness_verdicts() {
        let z2 = Arc::new(FgAbGroup::cyclic(2));
        let zero = Arc::new(FgAbGroup::trivial());

        // 0 -> Z/2 -> Z/2 -> 0 with identity in the middle: exact everywhere.
        let seq = vec![
            FgAbHom::zero(zero.clone(), z2.clone()),
            FgAbHom::identity(z2.clone()),
            FgAbHom::zero(z2.clone(), zero.clone()),
        ];
        let verdicts = check_exact(&seq).unwrap();
        assert!(verdicts.iter().all(|v| v.kernel_equals_image));

        // 0 -> Z --x2--> Z -> Z/2 -> 0 exact.
        let z = Arc::new(FgAbGroup::free(1));
        let seq = vec![
            FgAbHom::zero(zero.clone(), z.clone()),
            FgAbHom::new(z.clone(), z.clone(), Mat::from_i64(&[&[2]])).unwrap(),
            FgAbHom::new(z.clone(), z2.clone(), Mat::from_i64(&[&[1]])).unwrap(),
            FgAbHom::zero(z2.clone(), zero.clone()),
        ];
        let verdicts = check_exact(&seq).unwrap();
        assert!(verdicts.iter().all(|v| v.kernel_equals_image));

        // Z/2 --0--> Z/2 --id--> Z/2 is exact at the middle (Ker id = 0 = Im 0)...
        let seq = vec![FgAbHom::zero(z2.clone(), z2.clone()), FgAbHom::identity(z2.clone())];
        let verdicts = check_exact(&seq).unwrap();
        assert!(verdicts[0].kernel_equals_image);
        // ...but replacing the last map with zero breaks exactness
        // (Ker = Z/2, Im = 0).
        let seq = vec![FgAbHom::zero(z2.clone(), z2.clone()), FgAbHom::zero(z2.clone(), z2.clone())];
        let verdicts = check_exact(&seq).unwrap();
        assert!(verdicts[0].composition_is_zero);
        assert!(!verdicts[0].kernel_equals_image);
    }

    #[test]
    fn not_composable_detected() {
        let z2 = Arc::new(FgAbGroup::cyclic(2));
        let z3 = Arc::new(FgAbGroup::cyclic(3));
        let seq =
            vec![FgAbHom::identity(z2.clone()), FgAbHom::identity(z3.clone())];
        assert!(matches!(check_exact(&seq), Err(Error::NotComposable(_))));
    }

    #[test]
    fn source_order_is_kernel_times_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut tested = 0;
        while tested < 50 {
            let psi = random_hom(&mut rng);
            let Some(src_order) = psi.source().order() else { continue };
            let (ker, im, _) = hom_kernel_image_cokernel(&psi).unwrap();
            let ker_order = ker.group.order().unwrap();
            let im_order = im.group.order().unwrap();
            assert_eq!(src_order, ker_order * im_order);
            tested += 1;
        }
    }

    #[test]
    fn invert_isomorphism() {
        // Z/2 x Z/4 presented two different ways; an explicit iso and back.
        let a = Arc::new(FgAbGroup::from_presentation(2, Mat::from_i64(&[&[2, 0], &[0, 4]])).unwrap());
        let b = Arc::new(FgAbGroup::from_presentation(2, Mat::from_i64(&[&[4, 0], &[0, 2]])).unwrap());
        let phi = FgAbHom::new(a.clone(), b.clone(), Mat::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let inv = phi.invert_iso().unwrap();
        for e in a.enumerate() {
            assert!(a.elems_equal(&inv.apply(&phi.apply(&e)), &e));
        }
    }

    #[test]
    fn smith_coords_roundtrip() {
        let g = FgAbGroup::from_presentation(3, Mat::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let v: Vec<BigInt> = (0..3).map(|_| bi(rng.gen_range(-20..20))).collect();
            let w = g.smith_coords(&v);
            let back = g.from_smith_coords(&w);
            assert!(g.elems_equal(&v, &back));
        }
    }
}
