//! Graded associative algebras by structure constants, their representations,
//! and graded Lie algebras together with the envelope of a Lie module.

use crate::error::{Error, Result};
use crate::group::{character_value, FinAbGroup, GrpElt};
use crate::linalg::{column_space, intertwiners, kernel, least_squares, rank, vec_columns};
use crate::matrix::{dot, vec_norm, ComplexMatrix};
use crate::rng::SeededRng;
use crate::scalars::{Tolerance, C64, ONE, ZERO};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Associative unital algebra with a homogeneous basis `b_0..b_{dim-1}`;
/// `b_i b_j = sum_k c[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra {
    group: FinAbGroup,
    dim: usize,
    structure: Vec<C64>,
    unit: Vec<C64>,
    grading: Vec<GrpElt>,
}

impl GradedAlgebra {
    /// `structure[(i * dim + j) * dim + k]` holds the coefficient of `b_k` in `b_i b_j`.
    pub fn new(group: FinAbGroup, dim: usize, structure: Vec<C64>, unit: Vec<C64>, grading: Vec<GrpElt>) -> Result<Self> {
        if structure.len() != dim * dim * dim || unit.len() != dim || grading.len() != dim {
            return Err(Error::DimensionMismatch(format!("algebra of dimension {dim}")));
        }
        if let Some(bad) = grading.iter().find(|g| !group.contains(g)) {
            return Err(Error::GradingInvalid(format!("degree {:?} outside the group", bad.0)));
        }
        Ok(GradedAlgebra { group, dim, structure, unit, grading })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[C64] {
        &self.unit
    }

    pub fn grading(&self) -> &[GrpElt] {
        &self.grading
    }

    pub fn degree(&self, i: usize) -> &GrpElt {
        &self.grading[i]
    }

    pub fn structure(&self) -> &[C64] {
        &self.structure
    }

    /// Coordinates of `b_i b_j`.
    pub fn product(&self, i: usize, j: usize) -> &[C64] {
        let s = (i * self.dim + j) * self.dim;
        &self.structure[s..s + self.dim]
    }

    pub fn multiply(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == ZERO {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(self.product(i, j)) {
                    *o += xi * yj * c;
                }
            }
        }
        out
    }

    pub fn basis_of_degree(&self, g: &GrpElt) -> Vec<usize> {
        (0..self.dim).filter(|&i| &self.grading[i] == g).collect()
    }

    /// Same algebra graded through `f: G -> target`.
    pub fn regrade(&self, target: &FinAbGroup, f: impl Fn(&GrpElt) -> GrpElt) -> GradedAlgebra {
        GradedAlgebra { group: target.clone(), grading: self.grading.iter().map(f).collect(), ..self.clone() }
    }

    /// Group algebra `C[G]` with basis `x_g` in element order.
    pub fn group_algebra(g: &FinAbGroup) -> GradedAlgebra {
        let elems = g.elements();
        let n = elems.len();
        let mut structure = vec![ZERO; n * n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                structure[(i * n + j) * n + g.index_of(&g.add(a, b))] = ONE;
            }
        }
        let mut unit = vec![ZERO; n];
        unit[0] = ONE;
        GradedAlgebra { group: g.clone(), dim: n, structure, unit, grading: elems }
    }

    /// Tensor product graded by the product group; basis index `i * other.dim + j`.
    pub fn tensor(&self, other: &GradedAlgebra) -> GradedAlgebra {
        let (p, q) = (self.dim, other.dim);
        let n = p * q;
        let mut structure = vec![ZERO; n * n * n];
        for i in 0..p {
            for j in 0..q {
                for i2 in 0..p {
                    for j2 in 0..q {
                        let row = ((i * q + j) * n + (i2 * q + j2)) * n;
                        for (k, a) in self.product(i, i2).iter().enumerate() {
                            if *a == ZERO {
                                continue;
                            }
                            for (l, b) in other.product(j, j2).iter().enumerate() {
                                structure[row + k * q + l] += a * b;
                            }
                        }
                    }
                }
            }
        }
        let unit = (0..n).map(|t| self.unit[t / q] * other.unit[t % q]).collect();
        let grading = (0..n).map(|t| GrpElt([self.grading[t / q].0.as_slice(), other.grading[t % q].0.as_slice()].concat())).collect();
        GradedAlgebra { group: self.group.product(&other.group), dim: n, structure, unit, grading }
    }

    /// Algebra spanned by linearly independent matrices closed under products,
    /// with its natural module.
    pub fn from_matrix_basis(group: &FinAbGroup, mats: &[ComplexMatrix], degrees: &[GrpElt], tol: &Tolerance) -> Result<Rep> {
        let d = mats.len();
        let n = mats.first().map_or(0, ComplexMatrix::rows);
        if degrees.len() != d || mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch("matrix basis".into()));
        }
        let b = vec_columns(mats, n * n);
        if rank(&b, tol) != d {
            return Err(Error::InvalidInput("matrices are linearly dependent".into()));
        }
        let coords = |m: &ComplexMatrix| -> Result<Vec<C64>> {
            let v = ComplexMatrix::from_columns(n * n, &[m.vec()]);
            let x = least_squares(&b, &v, tol);
            let back = b.mul(&x);
            if !tol.accepts(back.distance(&v), v.norm()) {
                return Err(Error::NotARepresentation("span of the matrices is not closed".into()));
            }
            Ok(x.column(0))
        };
        let mut structure = Vec::with_capacity(d * d * d);
        for a in mats {
            for c in mats {
                structure.extend(coords(&a.mul(c))?);
            }
        }
        let unit = coords(&ComplexMatrix::identity(n))?;
        let alg = GradedAlgebra::new(group.clone(), d, structure, unit, degrees.to_vec())?;
        Rep::new(alg, mats.to_vec())
    }
}

/// Finite-dimensional module: `action[k]` is the matrix of `b_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep {
    algebra: GradedAlgebra,
    module_dim: usize,
    action: Vec<ComplexMatrix>,
}

impl Rep {
    pub fn new(algebra: GradedAlgebra, action: Vec<ComplexMatrix>) -> Result<Self> {
        let n = action.first().map_or(0, ComplexMatrix::rows);
        if action.len() != algebra.dim || action.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch("one square matrix per basis element".into()));
        }
        Ok(Rep { algebra, module_dim: n, action })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn action(&self) -> &[ComplexMatrix] {
        &self.action
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.algebra.group
    }

    pub fn act(&self, x: &[C64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.module_dim, self.module_dim);
        for (c, a) in x.iter().zip(&self.action) {
            if *c != ZERO {
                m.axpy(*c, a);
            }
        }
        m
    }

    /// Matrices of the basis elements of degree `g`.
    pub fn degree_ops(&self, g: &GrpElt) -> Vec<ComplexMatrix> {
        self.algebra.basis_of_degree(g).into_iter().map(|i| self.action[i].clone()).collect()
    }

    pub fn regrade(&self, target: &FinAbGroup, f: impl Fn(&GrpElt) -> GrpElt) -> Rep {
        Rep { algebra: self.algebra.regrade(target, f), ..self.clone() }
    }

    /// Same underlying module with the action conjugated: `S^{-1} rho(a) S`.
    pub fn with_action(&self, action: Vec<ComplexMatrix>) -> Result<Rep> {
        Rep::new(self.algebra.clone(), action)
    }

    pub fn tensor(&self, other: &Rep) -> Rep {
        let action = (0..self.algebra.dim * other.algebra.dim)
            .map(|t| self.action[t / other.algebra.dim].kron(&other.action[t % other.algebra.dim]))
            .collect();
        Rep { algebra: self.algebra.tensor(&other.algebra), module_dim: self.module_dim * other.module_dim, action }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub associativity: f64,
    pub unit: f64,
    pub homogeneity: f64,
    pub representation: f64,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Residuals of the algebra axioms, homogeneity of the structure constants and
/// the representation property.
pub fn validate(rep: &Rep, tol: &Tolerance) -> ValidationReport {
    let a = &rep.algebra;
    let d = a.dim;
    let scale = a.structure.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut assoc: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let ij = a.product(i, j).to_vec();
            for k in 0..d {
                let mut e_k = vec![ZERO; d];
                e_k[k] = ONE;
                let lhs = a.multiply(&ij, &e_k);
                let mut e_i = vec![ZERO; d];
                e_i[i] = ONE;
                let rhs = a.multiply(&e_i, a.product(j, k));
                assoc = assoc.max(vec_norm(&lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect::<Vec<_>>()));
            }
        }
    }
    let mut unit: f64 = 0.0;
    for i in 0..d {
        let mut e = vec![ZERO; d];
        e[i] = ONE;
        for prod in [a.multiply(&a.unit, &e), a.multiply(&e, &a.unit)] {
            unit = unit.max(vec_norm(&prod.iter().zip(&e).map(|(x, y)| x - y).collect::<Vec<_>>()));
        }
    }
    let mut homog: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = a.group.add(&a.grading[i], &a.grading[j]);
            for (k, c) in a.product(i, j).iter().enumerate() {
                if a.grading[k] != target {
                    homog = homog.max(c.norm());
                }
            }
        }
    }
    for (k, u) in a.unit.iter().enumerate() {
        if a.grading[k] != a.group.zero() {
            homog = homog.max(u.norm());
        }
    }
    let mut repres: f64 = rep.act(&a.unit).distance(&ComplexMatrix::identity(rep.module_dim));
    for i in 0..d {
        for j in 0..d {
            let lhs = rep.action[i].mul(&rep.action[j]);
            repres = repres.max(lhs.distance(&rep.act(a.product(i, j))));
        }
    }
    let mut failures = Vec::new();
    let rscale = rep.action.iter().map(ComplexMatrix::norm).fold(scale, f64::max);
    for (name, r, s) in [("associativity", assoc, scale), ("unit", unit, scale), ("homogeneity", homog, scale), ("representation", repres, rscale * rscale)] {
        if !tol.accepts(r, s) {
            failures.push(format!("{name} residual {r:.3e}"));
        }
    }
    ValidationReport { associativity: assoc, unit, homogeneity: homog, representation: repres, failures }
}

/// Dimension of `rho(A)` inside `End(M)`.
pub fn image_rank(rep: &Rep, tol: &Tolerance) -> usize {
    let n = rep.module_dim;
    rank(&vec_columns(&rep.action, n * n), tol)
}

/// Burnside criterion: `rho(A)` is all of `End(M)`.
pub fn is_simple(rep: &Rep, tol: &Tolerance) -> bool {
    rep.module_dim > 0 && image_rank(rep, tol) == rep.module_dim * rep.module_dim
}

/// Orthonormal basis of `vec(rho(A_g))` as columns of an `n^2 x k` matrix.
pub fn homogeneous_image(rep: &Rep, g: &GrpElt, tol: &Tolerance) -> ComplexMatrix {
    let n = rep.module_dim;
    column_space(&vec_columns(&rep.degree_ops(g), n * n), tol)
}

/// `A_0 v`, as an orthonormal basis.
pub fn a0_cyclic_subspace(rep: &Rep, v: &[C64], tol: &Tolerance) -> Result<ComplexMatrix> {
    if vec_norm(v) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let zero = rep.group().zero();
    let cols: Vec<Vec<C64>> = rep.degree_ops(&zero).iter().map(|m| m.mul_vec(v)).collect();
    Ok(column_space(&ComplexMatrix::from_columns(rep.module_dim, &cols), tol))
}

/// Whether matrices acting on `C^n` generate all of `End(C^n)` (their span must be an algebra).
pub fn ops_span_full_matrix_algebra(ops: &[ComplexMatrix], n: usize, tol: &Tolerance) -> bool {
    n > 0 && rank(&vec_columns(ops, n * n), tol) == n * n
}

/// Basis of `{X : X A = A X for every A in ops}`.
pub fn commutant(ops: &[ComplexMatrix], n: usize, tol: &Tolerance) -> Vec<ComplexMatrix> {
    let pairs: Vec<(&ComplexMatrix, &ComplexMatrix)> = ops.iter().map(|a| (a, a)).collect();
    intertwiners(&pairs, n, n, tol)
}

/// Decomposes `C^n` under the algebra spanned by `ops` into simple summands,
/// returned as orthonormal bases. Splits by eigenspaces of seeded random
/// elements of the commutant.
pub fn split_semisimple(ops: &[ComplexMatrix], n: usize, seed: u64, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    let mut rng = SeededRng::new(seed);
    let mut out = Vec::new();
    split_into(ops, &ComplexMatrix::identity(n), &mut rng, tol, &mut out)?;
    Ok(out)
}

fn split_into(ops: &[ComplexMatrix], q: &ComplexMatrix, rng: &mut SeededRng, tol: &Tolerance, out: &mut Vec<ComplexMatrix>) -> Result<()> {
    let k = q.cols();
    if k == 0 {
        return Ok(());
    }
    let qh = q.adjoint();
    let restricted: Vec<ComplexMatrix> = ops.iter().map(|a| qh.mul(a).mul(q)).collect();
    let comm = commutant(&restricted, k, tol);
    if comm.len() <= 1 {
        if !ops_span_full_matrix_algebra(&restricted, k, tol) {
            return Err(Error::NotCompletelyReducible);
        }
        out.push(q.clone());
        return Ok(());
    }
    for _attempt in 0..8 {
        let mut x = ComplexMatrix::zeros(k, k);
        for c in &comm {
            x.axpy(rng.complex(), c);
        }
        let xs = x.norm().max(f64::MIN_POSITIVE);
        let mut eig = crate::linalg::eigenvalues(&x)?;
        eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut clusters: Vec<C64> = Vec::new();
        for z in eig {
            if !clusters.iter().any(|c| (c - z).norm() <= 1e-6 * xs) {
                clusters.push(z);
            }
        }
        if clusters.len() < 2 {
            continue;
        }
        let pieces: Vec<ComplexMatrix> = clusters
            .iter()
            .map(|&lam| kernel(&x.sub(&ComplexMatrix::scalar(k, lam)), &Tolerance { eps: tol.eps.max(1e-8), ..*tol }))
            .collect();
        if pieces.iter().map(ComplexMatrix::cols).sum::<usize>() != k || pieces.iter().any(|p| p.cols() == 0) {
            continue;
        }
        for p in pieces {
            split_into(ops, &column_space(&q.mul(&p), tol), rng, tol, out)?;
        }
        return Ok(());
    }
    Err(Error::NotCompletelyReducible)
}

/// Graded Lie algebra by structure constants: `[x_i, x_j] = sum_k c[i][j][k] x_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    group: FinAbGroup,
    dim: usize,
    brackets: Vec<C64>,
    grading: Vec<GrpElt>,
}

impl LieAlgebra {
    pub fn new(group: FinAbGroup, dim: usize, brackets: Vec<C64>, grading: Vec<GrpElt>) -> Result<Self> {
        if brackets.len() != dim * dim * dim || grading.len() != dim {
            return Err(Error::DimensionMismatch(format!("Lie algebra of dimension {dim}")));
        }
        if grading.iter().any(|g| !group.contains(g)) {
            return Err(Error::GradingInvalid("degree outside the group".into()));
        }
        Ok(LieAlgebra { group, dim, brackets, grading })
    }

    /// Lie algebra spanned by linearly independent matrices closed under commutators.
    pub fn from_matrices(group: &FinAbGroup, mats: &[ComplexMatrix], degrees: &[GrpElt], tol: &Tolerance) -> Result<(LieAlgebra, Vec<ComplexMatrix>)> {
        let d = mats.len();
        let n = mats.first().map_or(0, ComplexMatrix::rows);
        let b = vec_columns(mats, n * n);
        if d > 0 && rank(&b, tol) != d {
            return Err(Error::InvalidInput("matrices are linearly dependent".into()));
        }
        let mut brackets = Vec::with_capacity(d * d * d);
        for x in mats {
            for y in mats {
                let c = x.commutator(y);
                let v = ComplexMatrix::from_columns(n * n, &[c.vec()]);
                let coords = least_squares(&b, &v, tol);
                if !tol.accepts(b.mul(&coords).distance(&v), v.norm()) {
                    return Err(Error::NotARepresentation("span is not closed under commutators".into()));
                }
                brackets.extend(coords.column(0));
            }
        }
        Ok((LieAlgebra::new(group.clone(), d, brackets, degrees.to_vec())?, mats.to_vec()))
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grading(&self) -> &[GrpElt] {
        &self.grading
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[C64] {
        let s = (i * self.dim + j) * self.dim;
        &self.brackets[s..s + self.dim]
    }

    /// Largest violation of antisymmetry, Jacobi and homogeneity.
    pub fn axiom_residual(&self) -> f64 {
        let d = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let s: Vec<C64> = self.bracket(i, j).iter().zip(self.bracket(j, i)).map(|(a, b)| a + b).collect();
                r = r.max(vec_norm(&s));
                let target = self.group.add(&self.grading[i], &self.grading[j]);
                for (k, c) in self.bracket(i, j).iter().enumerate() {
                    if self.grading[k] != target {
                        r = r.max(c.norm());
                    }
                }
                for k in 0..d {
                    let mut acc = vec![ZERO; d];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (l, cab) in self.bracket(a, b).iter().enumerate() {
                            for (t, x) in self.bracket(l, c).iter().enumerate() {
                                acc[t] += cab * x;
                            }
                        }
                    }
                    r = r.max(vec_norm(&acc));
                }
            }
        }
        r
    }
}

/// Associative envelope of a graded Lie module.
///
/// The algebra is the image of the universal enveloping algebra inside the
/// direct sum of all twisted copies `End(M^sigma)`, `sigma` running over the
/// characters of the grading group. That image is graded, and its projection
/// onto the untwisted copy is the image of the enveloping algebra in `End(M)`.
/// The returned module is that projection.
pub fn envelope_from_lie(lie: &LieAlgebra, action: &[ComplexMatrix], tol: &Tolerance) -> Result<Rep> {
    let n = action.first().map_or(0, ComplexMatrix::rows);
    if action.len() != lie.dim || action.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch("one square matrix per Lie basis element".into()));
    }
    let module_dim = if lie.dim == 0 { n.max(1) } else { n };
    let scale = action.iter().map(ComplexMatrix::norm).fold(1.0, f64::max);
    for i in 0..lie.dim {
        for j in 0..lie.dim {
            let mut rhs = ComplexMatrix::zeros(n, n);
            for (k, c) in lie.bracket(i, j).iter().enumerate() {
                rhs.axpy(*c, &action[k]);
            }
            let r = action[i].commutator(&action[j]).distance(&rhs);
            if !tol.accepts(r, scale * scale) {
                return Err(Error::NotARepresentation(format!("bracket ({i},{j}) residual {r:.3e}")));
            }
        }
    }
    let g = &lie.group;
    let chars = g.characters();
    let blocks = chars.len();
    // twisted generators: block s is sigma_s(deg x_i) rho(x_i)
    let gens: Vec<Vec<ComplexMatrix>> = (0..lie.dim)
        .map(|i| chars.iter().map(|s| action[i].scale(character_value(s, &lie.grading[i]).expect("degree in group").value())).collect())
        .collect();
    let flatten = |bl: &[ComplexMatrix]| -> Vec<C64> { bl.iter().flat_map(|m| m.data().iter().copied()).collect() };
    let mut spaces: BTreeMap<usize, Vec<Vec<C64>>> = BTreeMap::new();
    let mut elems: BTreeMap<usize, Vec<Vec<ComplexMatrix>>> = BTreeMap::new();
    let id: Vec<ComplexMatrix> = (0..blocks).map(|_| ComplexMatrix::identity(module_dim)).collect();
    let mut queue: Vec<(GrpElt, Vec<ComplexMatrix>)> = Vec::new();
    let add = |deg: &GrpElt, bl: Vec<ComplexMatrix>, spaces: &mut BTreeMap<usize, Vec<Vec<C64>>>, elems: &mut BTreeMap<usize, Vec<Vec<ComplexMatrix>>>| -> Option<Vec<ComplexMatrix>> {
        let key = g.index_of(deg);
        let basis = spaces.entry(key).or_default();
        let v = flatten(&bl);
        let norm = vec_norm(&v);
        if norm == 0.0 {
            return None;
        }
        let mut r = v;
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(b, &r);
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let rn = vec_norm(&r);
        if rn <= 1e3 * tol.eps * norm {
            return None;
        }
        for x in r.iter_mut() {
            *x /= rn;
        }
        let sz = module_dim * module_dim;
        let newbl: Vec<ComplexMatrix> = (0..blocks)
            .map(|s| ComplexMatrix::from_row_major(module_dim, module_dim, r[s * sz..(s + 1) * sz].to_vec()).expect("block size"))
            .collect();
        basis.push(r);
        elems.entry(key).or_default().push(newbl.clone());
        Some(newbl)
    };
    if let Some(b) = add(&g.zero(), id, &mut spaces, &mut elems) {
        queue.push((g.zero(), b));
    }
    while let Some((deg, bl)) = queue.pop() {
        for (i, gen) in gens.iter().enumerate() {
            let prod: Vec<ComplexMatrix> = gen.iter().zip(&bl).map(|(x, y)| x.mul(y)).collect();
            let d2 = g.add(&lie.grading[i], &deg);
            if let Some(b) = add(&d2, prod, &mut spaces, &mut elems) {
                queue.push((d2, b));
            }
        }
    }
    let elements = g.elements();
    let mut basis: Vec<(GrpElt, Vec<ComplexMatrix>, Vec<C64>)> = Vec::new();
    for (key, list) in &elems {
        for (bl, v) in list.iter().zip(&spaces[key]) {
            basis.push((elements[*key].clone(), bl.clone(), v.clone()));
        }
    }
    let dim = basis.len();
    let mut structure = vec![ZERO; dim * dim * dim];
    for (i, (di, bi, _)) in basis.iter().enumerate() {
        for (j, (dj, bj, _)) in basis.iter().enumerate() {
            let prod: Vec<ComplexMatrix> = bi.iter().zip(bj).map(|(x, y)| x.mul(y)).collect();
            let v = flatten(&prod);
            let target = g.add(di, dj);
            for (k, (dk, _, bk)) in basis.iter().enumerate() {
                if *dk == target {
                    structure[(i * dim + j) * dim + k] = dot(bk, &v);
                }
            }
        }
    }
    let idv = flatten(&(0..blocks).map(|_| ComplexMatrix::identity(module_dim)).collect::<Vec<_>>());
    let unit: Vec<C64> = basis.iter().map(|(d, _, b)| if *d == g.zero() { dot(b, &idv) } else { ZERO }).collect();
    let grading: Vec<GrpElt> = basis.iter().map(|(d, _, _)| d.clone()).collect();
    let module_action: Vec<ComplexMatrix> = basis.iter().map(|(_, bl, _)| bl[0].clone()).collect();
    let alg = GradedAlgebra::new(g.clone(), dim, structure, unit, grading)?;
    Rep::new(alg, module_action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn pauli_validates_and_misgrading_fails() {
        let tol = Tolerance::default();
        let rep = instances::clock_shift(2);
        assert!(validate(&rep, &tol).pass());
        let alg = rep.algebra();
        let mut grading = alg.grading().to_vec();
        grading[1] = GrpElt(vec![0, 0]);
        let bad = GradedAlgebra::new(alg.group().clone(), 4, alg.structure().to_vec(), alg.unit().to_vec(), grading).unwrap();
        let report = validate(&Rep::new(bad, rep.action().to_vec()).unwrap(), &tol);
        assert!(!report.pass());
        assert!(report.homogeneity > 0.5);
        assert!(report.associativity < 1e-12);
    }

    #[test]
    fn direct_sum_is_not_simple() {
        let tol = Tolerance::default();
        let rep = instances::clock_shift(2);
        let doubled: Vec<ComplexMatrix> = rep.action().iter().map(|m| ComplexMatrix::identity(2).kron(m)).collect();
        let sum = rep.with_action(doubled).unwrap();
        assert!(validate(&sum, &tol).pass());
        assert!(!is_simple(&sum, &tol));
        assert!(is_simple(&rep, &tol));
        let parts = split_semisimple(sum.action(), 4, 3, &tol).unwrap();
        assert_eq!(parts.iter().map(ComplexMatrix::cols).collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn nonsplit_module_is_rejected() {
        // upper triangular 2x2 matrices on C^2: indecomposable, not simple
        let tol = Tolerance::default();
        let ops = [ComplexMatrix::identity(2), ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]), ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]])];
        assert_eq!(split_semisimple(&ops, 2, 0, &tol), Err(Error::NotCompletelyReducible));
    }

    #[test]
    fn envelope_examples() {
        let tol = Tolerance::default();
        let (lie, act) = instances::abelian_sign_lie();
        let env = envelope_from_lie(&lie, &act, &tol).unwrap();
        assert_eq!(env.algebra().dim(), 2);
        assert!(validate(&env, &tol).pass());

        let (lie, act) = instances::sl2_chevalley();
        let env = envelope_from_lie(&lie, &act, &tol).unwrap();
        assert_eq!(env.algebra().dim(), 4);
        assert_eq!(env.algebra().basis_of_degree(&GrpElt(vec![0])).len(), 2);
        assert!(validate(&env, &tol).pass());
        assert!(is_simple(&env, &tol));

        let zero = LieAlgebra::new(FinAbGroup::new(vec![2]).unwrap(), 0, vec![], vec![]).unwrap();
        let env = envelope_from_lie(&zero, &[], &tol).unwrap();
        assert_eq!(env.algebra().dim(), 1);

        let broken = [ComplexMatrix::identity(2), ComplexMatrix::identity(2), ComplexMatrix::identity(2)];
        assert!(matches!(envelope_from_lie(&lie, &broken, &tol), Err(Error::NotARepresentation(_))));
    }

    #[test]
    fn lie_algebras_satisfy_axioms() {
        for (lie, _) in [instances::sl2_chevalley(), instances::gl2_pauli()] {
            assert!(lie.axiom_residual() < 1e-12);
        }
    }

    #[test]
    fn tensor_and_group_algebra_validate() {
        let tol = Tolerance::default();
        let rep = instances::restricted_stabilizer_instance();
        assert!(validate(&rep, &tol).pass());
        let z4 = instances::group_algebra_character(4, 1);
        assert!(validate(&z4, &tol).pass());
        assert!(is_simple(&z4, &tol));
    }
}
