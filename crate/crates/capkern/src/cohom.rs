//! Cohomology of a finite group with coefficients in a finitely generated
//! module, in degrees 0 through 2 via the inhomogeneous bar resolution, and
//! the Čech complex of a split Galois covering together with the explicit
//! comparison isomorphism between the two.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::fgab::FgAbGroup;
use crate::matrix::{self, lattice_basis, lattice_eq, Mat};
use crate::{Error, Result};

/// A finite group given by its multiplication table. Element 0 is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(mul: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::ValidationError("empty group table".into()));
        }
        for row in &mul {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::ValidationError("malformed group table".into()));
            }
        }
        // Identity.
        for a in 0..n {
            if mul[0][a] != a || mul[a][0] != a {
                return Err(Error::ValidationError("element 0 is not an identity".into()));
            }
        }
        // Associativity, exhaustively.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::ValidationError(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        // Inverses.
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            let Some(b) = (0..n).find(|&b| mul[a][b] == 0 && mul[b][a] == 0) else {
                return Err(Error::ValidationError(format!("element {a} has no inverse")));
            };
            inv[a] = b;
        }
        Ok(FiniteGroup { order: n, mul, inv })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(mul).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// A finitely generated abelian group with an action of a finite group.
/// Action matrices act on row coordinate vectors from the right:
/// `delta . m = m * rho(delta)`, hence `rho(delta tau) = rho(tau) rho(delta)`
/// as matrices.
#[derive(Clone, Debug)]
pub struct GModule {
    pub group: Arc<FgAbGroup>,
    pub delta: Arc<FiniteGroup>,
    action: Vec<Mat>,
}

impl GModule {
    pub fn new(delta: Arc<FiniteGroup>, group: Arc<FgAbGroup>, action: Vec<Mat>) -> Result<Self> {
        let n = delta.order();
        let g = group.num_generators();
        if action.len() != n {
            return Err(Error::ValidationError("one action matrix per group element required".into()));
        }
        for (d, m) in action.iter().enumerate() {
            if m.rows() != g || m.cols() != g {
                return Err(Error::ValidationError(format!("action matrix {d} has wrong shape")));
            }
            // Well-defined endomorphism: relations map into the relation lattice.
            let img = group.relations().mul(m);
            if !matrix::lattice_subset(&img, group.relations())? {
                return Err(Error::ValidationError(format!(
                    "action of element {d} does not preserve the relation lattice"
                )));
            }
        }
        let md = GModule { group, delta, action };
        // rho(e) = id on the group.
        for i in 0..g {
            let gen = md.group.generator(i);
            if !md.group.elems_equal(&md.act(0, &gen), &gen) {
                return Err(Error::ValidationError("identity does not act trivially".into()));
            }
        }
        // rho(d) rho(d^-1) = id and the (anti-)compatibility with the table.
        for d in md.delta.elements() {
            let dinv = md.delta.inv(d);
            for i in 0..g {
                let gen = md.group.generator(i);
                let back = md.act(dinv, &md.act(d, &gen));
                if !md.group.elems_equal(&back, &gen) {
                    return Err(Error::ValidationError(format!(
                        "action of {d} is not invertible on the group"
                    )));
                }
            }
            for t in md.delta.elements() {
                let dt = md.delta.mul(d, t);
                for i in 0..g {
                    let gen = md.group.generator(i);
                    let lhs = md.act(dt, &gen);
                    let rhs = md.act(d, &md.act(t, &gen));
                    if !md.group.elems_equal(&lhs, &rhs) {
                        return Err(Error::ValidationError(format!(
                            "action incompatible with the group law at ({d},{t})"
                        )));
                    }
                }
            }
        }
        Ok(md)
    }

    /// Trivial action of `delta` on `group`.
    pub fn trivial(delta: Arc<FiniteGroup>, group: Arc<FgAbGroup>) -> Self {
        let g = group.num_generators();
        let action = (0..delta.order()).map(|_| Mat::identity(g)).collect();
        GModule { group, delta, action }
    }

    pub fn act(&self, d: usize, m: &[BigInt]) -> Vec<BigInt> {
        self.group.reduce(&self.action[d].mul_row(m))
    }

    pub fn action_matrix(&self, d: usize) -> &Mat {
        &self.action[d]
    }

    /// Lattice of invariants `{ m : d.m = m for all d }`, including the
    /// relation lattice.
    pub fn invariant_lattice(&self) -> Result<Mat> {
        let g = self.group.num_generators();
        // v such that v (rho(d) - I) lies in the relation lattice, for all d.
        let mut lat = Mat::identity(g);
        for d in self.delta.elements().skip(1) {
            let diff = self.action[d].sub(&Mat::identity(g));
            let pre = matrix::preimage_lattice(&diff, self.group.relations())?;
            lat = matrix::lattice_intersection(&lat, &pre)?;
        }
        lattice_basis(&lat.stack(self.group.relations()))
    }
}

/// Inhomogeneous cochain: a map from i-tuples of group elements to module
/// elements, stored flat as `n^i` blocks of module coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub data: Vec<BigInt>,
}

impl Cochain {
    pub fn value(&self, module: &GModule, tuple: &[usize]) -> Vec<BigInt> {
        let g = module.group.num_generators();
        let idx = tuple_index(module.delta.order(), tuple);
        module.group.reduce(&self.data[idx * g..(idx + 1) * g].to_vec())
    }

    pub fn dump(&self, module: &GModule) -> String {
        let n = module.delta.order();
        let mut out = String::new();
        for idx in 0..n.pow(self.degree as u32) {
            let tuple = index_tuple(n, idx, self.degree);
            let v = self.value(module, &tuple);
            let _ = writeln!(out, "c{tuple:?} = {v:?}");
        }
        out
    }
}

/// A cohomology class with its chosen cocycle representative.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: Cochain,
    pub coords: Vec<BigInt>,
}

pub fn tuple_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &d| acc * n + d)
}

pub fn index_tuple(n: usize, mut idx: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in (0..len).rev() {
        out[slot] = idx % n;
        idx /= n;
    }
    out
}

/// Maximum cochain degree carried by the complexes (enough for H^2).
pub const MAX_DEGREE: usize = 3;

/// A cochain complex in degrees 0..=3 whose spaces are direct sums of copies
/// of the module, with the differentials as explicit homomorphisms.
pub struct Complex {
    pub module: GModule,
    pub spaces: Vec<Arc<FgAbGroup>>,
    pub diffs: Vec<crate::fgab::FgAbHom>,
}

fn cochain_space(module: &GModule, copies: usize) -> Result<Arc<FgAbGroup>> {
    let g = module.group.num_generators();
    let rels = module.group.relations();
    let mut big = Mat::empty(copies * g);
    for b in 0..copies {
        for r in 0..rels.rows() {
            let mut row = vec![BigInt::zero(); copies * g];
            for c in 0..g {
                row[b * g + c] = rels[(r, c)].clone();
            }
            big.push_row(row);
        }
    }
    Ok(Arc::new(FgAbGroup::from_presentation(copies * g, big)?))
}

/// Entry layout for differentials: the hom matrix D maps a source cochain
/// (row vector over source blocks) to a target cochain. A contribution
/// `sign * action` from source block s to target block t adds
/// `sign * rho[(a, b)]` at D[(s*g + a, t*g + b)].
fn add_block(d: &mut Mat, g: usize, src: usize, tgt: usize, action: &Mat, sign: i64) {
    let s = BigInt::from(sign);
    for a in 0..g {
        for b in 0..g {
            let add = &s * &action[(a, b)];
            d[(src * g + a, tgt * g + b)] += add;
        }
    }
}

/// The inhomogeneous bar complex of the module, degrees 0..=3.
pub fn bar_complex(module: &GModule) -> Result<Complex> {
    let n = module.delta.order();
    let g = module.group.num_generators();
    let spaces: Vec<Arc<FgAbGroup>> = (0..=MAX_DEGREE)
        .map(|i| cochain_space(module, n.pow(i as u32)))
        .collect::<Result<_>>()?;
    let ident = Mat::identity(g);
    let mut diffs = Vec::new();
    for i in 0..MAX_DEGREE {
        let src_blocks = n.pow(i as u32);
        let tgt_blocks = n.pow(i as u32 + 1);
        let mut d = Mat::zero(src_blocks * g, tgt_blocks * g);
        for tgt in 0..tgt_blocks {
            let tuple = index_tuple(n, tgt, i + 1);
            // (dc)(t_1..t_{i+1}) = t_1 . c(t_2..t_{i+1})
            //   + sum_j (-1)^j c(.., t_j t_{j+1}, ..) + (-1)^{i+1} c(t_1..t_i)
            let head = tuple_index(n, &tuple[1..]);
            add_block(&mut d, g, head, tgt, module.action_matrix(tuple[0]), 1);
            for j in 1..=i {
                let mut merged = Vec::with_capacity(i);
                merged.extend_from_slice(&tuple[..j - 1]);
                merged.push(module.delta.mul(tuple[j - 1], tuple[j]));
                merged.extend_from_slice(&tuple[j + 1..]);
                let sign = if j % 2 == 1 { -1 } else { 1 };
                add_block(&mut d, g, tuple_index(n, &merged), tgt, &ident, sign);
            }
            let tail = tuple_index(n, &tuple[..i]);
            let sign = if (i + 1) % 2 == 1 { -1 } else { 1 };
            add_block(&mut d, g, tail, tgt, &ident, sign);
        }
        diffs.push(crate::fgab::FgAbHom::new(spaces[i].clone(), spaces[i + 1].clone(), d)?);
    }
    Ok(Complex { module: module.clone(), spaces, diffs })
}

/// The Čech complex of the split Galois covering attached to the module,
/// with F(X^{m+1}) identified with maps from m-tuples to the module. The
/// component indexed by delta of X x_S X is the graph of delta, so the
/// first face map applies the action in its first tensor slot.
pub fn cech_complex(module: &GModule) -> Result<Complex> {
    let n = module.delta.order();
    let g = module.group.num_generators();
    let spaces: Vec<Arc<FgAbGroup>> = (0..=MAX_DEGREE)
        .map(|i| cochain_space(module, n.pow(i as u32)))
        .collect::<Result<_>>()?;
    let ident = Mat::identity(g);
    let mut diffs = Vec::new();
    for i in 0..MAX_DEGREE {
        let m = i + 1; // source lives on X^m with n^{m-1} components
        let src_blocks = n.pow(i as u32);
        let tgt_blocks = n.pow(i as u32 + 1);
        let mut d = Mat::zero(src_blocks * g, tgt_blocks * g);
        for tgt in 0..tgt_blocks {
            let tuple = index_tuple(n, tgt, i + 1);
            // j = 1: base point moves by t_1, offsets divide through.
            let t1 = tuple[0];
            let t1inv = module.delta.inv(t1);
            let shifted: Vec<usize> =
                tuple[1..].iter().map(|&t| module.delta.mul(t1inv, t)).collect();
            add_block(&mut d, g, tuple_index(n, &shifted), tgt, module.action_matrix(t1), 1);
            // j = 2..m+1: drop offset t_{j-1}; sign (-1)^{j+1}.
            for j in 2..=m + 1 {
                let mut dropped = Vec::with_capacity(i);
                dropped.extend_from_slice(&tuple[..j - 2]);
                dropped.extend_from_slice(&tuple[j - 1..]);
                let sign = if (j + 1) % 2 == 1 { -1 } else { 1 };
                add_block(&mut d, g, tuple_index(n, &dropped), tgt, &ident, sign);
            }
        }
        diffs.push(crate::fgab::FgAbHom::new(spaces[i].clone(), spaces[i + 1].clone(), d)?);
    }
    Ok(Complex { module: module.clone(), spaces, diffs })
}

impl Complex {
    /// Apply the degree-i differential to a cochain.
    pub fn differential(&self, c: &Cochain) -> Result<Cochain> {
        if c.degree >= MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(format!("degree {} cochain", c.degree)));
        }
        let d = &self.diffs[c.degree];
        Ok(Cochain { degree: c.degree + 1, data: d.apply(&c.data) })
    }

    pub fn zero_cochain(&self, degree: usize) -> Cochain {
        Cochain { degree, data: self.spaces[degree].zero() }
    }

    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool> {
        let dc = self.differential(c)?;
        Ok(self.spaces[c.degree + 1].is_zero_elem(&dc.data))
    }
}

/// A computed cohomology group with explicit cocycle representatives.
pub struct CohomologyGroup {
    pub degree: usize,
    pub group: Arc<FgAbGroup>,
    /// Rows: cocycle representatives of the generators, in cochain coords.
    pub cocycle_basis: Mat,
    /// Basis of the full cocycle lattice (kernel of d^i).
    cocycle_lattice: Mat,
    /// Basis of the coboundary lattice (image of d^{i-1} plus relations).
    coboundary_lattice: Mat,
    space: Arc<FgAbGroup>,
}

impl CohomologyGroup {
    /// Coordinates in the cohomology group of a cocycle given in cochain
    /// coordinates.
    pub fn class_of(&self, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        let stacked = self.cocycle_lattice.stack(self.space.relations());
        let Some(sol) = matrix::solve_left(&stacked, cocycle)? else {
            return Err(Error::SolveFailure("vector is not a cocycle".into()));
        };
        Ok(self.group.reduce(&sol[..self.cocycle_lattice.rows()].to_vec()))
    }

    /// A cocycle representative for the given class coordinates.
    pub fn representative(&self, coords: &[BigInt]) -> Cochain {
        let data = self.cocycle_basis.mul_row(coords);
        Cochain { degree: self.degree, data }
    }

    pub fn class(&self, coords: &[BigInt]) -> CohomologyClass {
        CohomologyClass {
            degree: self.degree,
            representative: self.representative(coords),
            coords: self.group.reduce(coords),
        }
    }

    /// Are two cocycles cohomologous?
    pub fn cohomologous(&self, a: &[BigInt], b: &[BigInt]) -> Result<bool> {
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        Ok(matrix::lattice_contains(&self.coboundary_lattice, &diff)?)
    }
}

/// H^i of the complex, for i in {0, 1, 2}.
pub fn cohomology(complex: &Complex, i: usize) -> Result<CohomologyGroup> {
    if i >= MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(format!("H^{i} not supported")));
    }
    let cocycles = complex.diffs[i].kernel_lattice()?;
    let coboundaries = if i == 0 {
        lattice_basis(complex.spaces[0].relations())?
    } else {
        complex.diffs[i - 1].image_lattice()?
    };
    let k = cocycles.rows();
    let rels = matrix::preimage_lattice(&cocycles, &coboundaries)?;
    let group = Arc::new(FgAbGroup::from_presentation(k, rels)?);
    Ok(CohomologyGroup {
        degree: i,
        group,
        cocycle_basis: cocycles.clone(),
        cocycle_lattice: cocycles,
        coboundary_lattice: coboundaries,
        space: complex.spaces[i].clone(),
    })
}

/// The map H^i(M) -> H^i(N) induced by an equivariant homomorphism given by
/// its matrix on module generators.
pub fn induced_cohomology_map(
    src: &GModule,
    dst: &GModule,
    phi: &Mat,
    i: usize,
) -> Result<crate::fgab::FgAbHom> {
    if src.delta.as_ref() != dst.delta.as_ref() {
        return Err(Error::NotEquivariant("different acting groups".into()));
    }
    let g_src = src.group.num_generators();
    // Equivariance on generators: phi(d.m) = d.phi(m).
    for d in src.delta.elements() {
        for gidx in 0..g_src {
            let gen = src.group.generator(gidx);
            let lhs = dst.group.reduce(&phi.mul_row(&src.act(d, &gen)));
            let rhs = dst.act(d, &dst.group.reduce(&phi.mul_row(&gen)));
            if lhs != rhs {
                return Err(Error::NotEquivariant(format!(
                    "fails at group element {d}, generator {gidx}"
                )));
            }
        }
    }
    let bar_src = bar_complex(src)?;
    let bar_dst = bar_complex(dst)?;
    let h_src = cohomology(&bar_src, i)?;
    let h_dst = cohomology(&bar_dst, i)?;
    let n = src.delta.order();
    let blocks = n.pow(i as u32);
    let g_dst = dst.group.num_generators();
    let mut m = Mat::zero(h_src.group.num_generators(), h_dst.group.num_generators());
    for r in 0..h_src.group.num_generators() {
        let rep = h_src.cocycle_basis.row(r);
        // Push the representative through phi blockwise.
        let mut image = vec![BigInt::zero(); blocks * g_dst];
        for b in 0..blocks {
            let val = phi.mul_row(&rep[b * g_src..(b + 1) * g_src]);
            image[b * g_dst..(b + 1) * g_dst].clone_from_slice(&val);
        }
        let coords = h_dst.class_of(&image)?;
        for c in 0..coords.len() {
            m[(r, c)] = coords[c].clone();
        }
    }
    crate::fgab::FgAbHom::new(h_src.group.clone(), h_dst.group.clone(), m)
}

/// The tuple-transform chain isomorphism from the Čech complex to the bar
/// complex: (Tc)(t_1, .., t_i) = c(t_1, t_1 t_2, .., t_1 .. t_i).
pub fn cech_to_bar_map(module: &GModule, i: usize) -> Mat {
    let n = module.delta.order();
    let g = module.group.num_generators();
    let blocks = n.pow(i as u32);
    let mut m = Mat::zero(blocks * g, blocks * g);
    for bar_idx in 0..blocks {
        let tuple = index_tuple(n, bar_idx, i);
        let mut prefix = 0usize; // running product t_1 .. t_j
        let mut cech_tuple = Vec::with_capacity(i);
        for &t in &tuple {
            prefix = module.delta.mul(prefix, t);
            cech_tuple.push(prefix);
        }
        let cech_idx = tuple_index(n, &cech_tuple);
        for a in 0..g {
            m[(cech_idx * g + a, bar_idx * g + a)] = BigInt::from(1);
        }
    }
    m
}

/// The comparison isomorphism between Čech and bar cohomology in degree i,
/// verified to be induced by a chain map and to be bijective.
pub struct Comparison {
    pub cech: CohomologyGroup,
    pub bar: CohomologyGroup,
    pub iso: crate::fgab::FgAbHom,
}

pub fn cech_bar_comparison(module: &GModule, i: usize) -> Result<Comparison> {
    let cech = cech_complex(module)?;
    let bar = bar_complex(module)?;
    // Chain map property in all stored degrees.
    for d in 0..MAX_DEGREE {
        let t_d = cech_to_bar_map(module, d);
        let t_next = cech_to_bar_map(module, d + 1);
        let lhs = cech.diffs[d].matrix().mul(&t_next);
        let rhs = t_d.mul(bar.diffs[d].matrix());
        if lhs != rhs {
            return Err(Error::ValidationError(format!(
                "comparison is not a chain map in degree {d}"
            )));
        }
    }
    let h_cech = cohomology(&cech, i)?;
    let h_bar = cohomology(&bar, i)?;
    let t = cech_to_bar_map(module, i);
    let mut m = Mat::zero(h_cech.group.num_generators(), h_bar.group.num_generators());
    for r in 0..h_cech.group.num_generators() {
        let image = t.mul_row(h_cech.cocycle_basis.row(r));
        let coords = h_bar.class_of(&image)?;
        for c in 0..coords.len() {
            m[(r, c)] = coords[c].clone();
        }
    }
    let iso = crate::fgab::FgAbHom::new(h_cech.group.clone(), h_bar.group.clone(), m)?;
    iso.invert_iso()?;
    Ok(Comparison { cech: h_cech, bar: h_bar, iso })
}

/// Check that the 0-th Čech cohomology of the n-torsion submodule equals the
/// n-torsion of the 0-th Čech cohomology, as subgroups of the module.
pub fn torsion_compatibility_check(module: &GModule, n: &BigInt) -> Result<bool> {
    let ambient = module.group.clone();
    // Route 1: n-torsion submodule with its induced action, then invariants,
    // pushed into ambient coordinates.
    let tors = crate::fgab::n_torsion(&ambient, n)?;
    let k = tors.group.num_generators();
    let mut action = Vec::new();
    for d in module.delta.elements() {
        let mut m = Mat::zero(k, k);
        for r in 0..k {
            let ambient_gen = tors.embedding.matrix().row_vec(r);
            let moved = module.act(d, &ambient_gen);
            let coords = tors.coords_of(&moved)?;
            for c in 0..k {
                m[(r, c)] = coords[c].clone();
            }
        }
        action.push(m);
    }
    let tors_mod = GModule::new(module.delta.clone(), tors.group.clone(), action)?;
    let inv_of_tors = tors_mod.invariant_lattice()?;
    let route1 = lattice_basis(
        &inv_of_tors.mul(tors.embedding.matrix()).stack(ambient.relations()),
    )?;

    // Route 2: invariants first, then n-torsion of that subgroup.
    let inv = module.invariant_lattice()?;
    let inv_sub = crate::fgab::subgroup_from_lattice(ambient.clone(), &inv)?;
    let inv_tors = crate::fgab::n_torsion(&inv_sub.group, n)?;
    let route2 = lattice_basis(
        &inv_tors
            .embedding
            .matrix()
            .mul(inv_sub.embedding.matrix())
            .stack(ambient.relations()),
    )?;
    lattice_eq(&route1, &route2)
}
