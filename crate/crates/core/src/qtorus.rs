//! Cyclotomic quantum tori generated by twist operators: commutation scalars,
//! the map to the grading group, the center, the rank-two normal form,
//! standard simple modules and isotypic decomposition of modules.

use crate::error::{Error, Result};
use crate::group::{pairing, FinAbGroup, GrpElt};
use crate::lattice::{integer_kernel, IntLattice, IntMatrix};
use crate::linalg::{column_space, intertwiners, inverse, joint_eigenspaces, rank};
use crate::matrix::ComplexMatrix;
use crate::scalars::{principal_root, snap_root_of_unity, RootOfUnity, Tolerance, C64, ONE};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Quantum torus data: generators `t_i` of order `s_i` with
/// `t_i t_j = zeta_L^{E_ij} t_j t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTorusSpec {
    orders: Vec<u64>,
    root_order: u64,
    exponents: Vec<Vec<u64>>,
}

impl QTorusSpec {
    /// Validates `E_ii = 0`, `E_ij = -E_ji mod L` and `gcd(s_i, s_j) E_ij = 0 mod L`.
    pub fn new(orders: Vec<u64>, root_order: u64, exponents: Vec<Vec<i64>>) -> Result<Self> {
        let r = orders.len();
        if root_order == 0 || orders.contains(&0) {
            return Err(Error::InvalidInput("orders must be positive".into()));
        }
        if exponents.len() != r || exponents.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("exponent matrix must be r x r".into()));
        }
        let l = root_order as i64;
        let e: Vec<Vec<u64>> = exponents.iter().map(|row| row.iter().map(|x| x.rem_euclid(l) as u64).collect()).collect();
        for i in 0..r {
            if e[i][i] != 0 {
                return Err(Error::InvalidInput(format!("diagonal exponent {i} is nonzero")));
            }
            for j in 0..r {
                if !(e[i][j] + e[j][i]).is_multiple_of(root_order) {
                    return Err(Error::InvalidInput(format!("exponents ({i},{j}) are not antisymmetric")));
                }
                if !(orders[i].gcd(&orders[j]) as u128 * e[i][j] as u128).is_multiple_of(root_order as u128) {
                    return Err(Error::InvalidInput(format!("q_{i}{j} has order not dividing gcd(s_{i}, s_{j})")));
                }
            }
        }
        Ok(QTorusSpec { orders, root_order, exponents: e })
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn root_order(&self) -> u64 {
        self.root_order
    }

    pub fn exponents(&self) -> &[Vec<u64>] {
        &self.exponents
    }

    pub fn q(&self, i: usize, j: usize) -> RootOfUnity {
        RootOfUnity::new(self.root_order, self.exponents[i][j] as i64)
    }

    /// The group `H = Z_{s_1} x ... x Z_{s_r}` dual to the stabilizer.
    pub fn h_group(&self) -> FinAbGroup {
        FinAbGroup::new(self.orders.clone()).expect("positive orders")
    }

    /// Same torus written in the generators `t^{P_i}` (rows of `P`).
    pub fn transformed(&self, p: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let r = self.rank();
        let l = self.root_order as i128;
        let mut out = vec![vec![0i64; r]; r];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let mut acc: i128 = 0;
                for a in 0..r {
                    for b in 0..r {
                        acc += p[i][a] as i128 * self.exponents[a][b] as i128 * p[j][b] as i128;
                    }
                }
                *x = acc.rem_euclid(l) as i64;
            }
        }
        out
    }
}

/// `T^a = T_1^{a_1} ... T_r^{a_r}` with exponents reduced mod the orders.
pub fn monomial(ops: &[ComplexMatrix], orders: &[u64], a: &[i64]) -> ComplexMatrix {
    monomial_dim(ops.first().map_or(0, ComplexMatrix::rows), ops, orders, a)
}

fn monomial_dim(n: usize, ops: &[ComplexMatrix], orders: &[u64], a: &[i64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(n);
    for ((t, &s), &ai) in ops.iter().zip(orders).zip(a) {
        let e = ai.rem_euclid(s as i64) as u64;
        if e > 0 {
            m = m.mul(&t.pow(e));
        }
    }
    m
}

/// Reads the commutation scalars `T_i T_j = q_ij T_j T_i` off normalized operators.
pub fn qmatrix_from_operators(ops: &[ComplexMatrix], orders: &[u64], tol: &Tolerance) -> Result<QTorusSpec> {
    let r = ops.len();
    if orders.len() != r {
        return Err(Error::DimensionMismatch("one order per operator".into()));
    }
    let n = ops.first().map_or(0, ComplexMatrix::rows);
    let mut q = vec![vec![RootOfUnity::ONE; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            let lhs = ops[i].mul(&ops[j]);
            let rhs = ops[j].mul(&ops[i]);
            let ratio = lhs.mul(&inverse(&rhs).map_err(|_| Error::NotScalarCommutator)?);
            let (c, off) = ratio.scalar_part();
            if !tol.accepts(off, libm::sqrt(n as f64)) {
                return Err(Error::NotScalarCommutator);
            }
            let g = orders[i].gcd(&orders[j]);
            let z = snap_root_of_unity(c, g, tol).map_err(|_| Error::NotScalarCommutator)?;
            q[i][j] = z;
            q[j][i] = z.inv();
        }
    }
    let l = q.iter().flatten().map(RootOfUnity::order).fold(1, |a, b| a.lcm(&b));
    let e = q.iter().map(|row| row.iter().map(|z| z.exponent_over(l).expect("order divides lcm") as i64).collect()).collect();
    QTorusSpec::new(orders.to_vec(), l, e)
}

/// `gamma(a)`, the element `h` of `H` with `h(eta^b) = zeta_L^{a^T E b}`.
pub fn gamma(spec: &QTorusSpec, a: &[i64]) -> GrpElt {
    let r = spec.rank();
    let l = spec.root_order as i128;
    let h: Vec<i64> = (0..r)
        .map(|j| {
            let ae: i128 = (0..r).map(|i| a[i] as i128 * spec.exponents[i][j] as i128).sum();
            let s = spec.orders[j] as i128;
            ((ae.rem_euclid(l) * s / l).rem_euclid(s)) as i64
        })
        .collect();
    spec.h_group().element(&h).expect("rank matches")
}

/// `ker gamma = {a : E^T a = 0 mod L}`, a full-rank lattice in Hermite form.
pub fn center_lattice(spec: &QTorusSpec) -> IntLattice {
    let r = spec.rank();
    let l = spec.root_order as i64;
    // kernel of [E^T | -L I] projected onto the first r coordinates
    let stacked = IntMatrix::from_fn(r, 2 * r, |i, j| {
        if j < r {
            BigInt::from(spec.exponents[j][i])
        } else if j - r == i {
            BigInt::from(-l)
        } else {
            BigInt::from(0)
        }
    });
    let ker = integer_kernel(&stacked);
    let gens = IntMatrix::from_fn(r, ker.cols(), |i, j| ker[(i, j)].clone());
    IntLattice::from_generators(r, &gens)
}

/// `gamma` together with its kernel.
#[derive(Clone, Debug)]
pub struct GammaMap {
    pub spec: QTorusSpec,
    pub kernel: IntLattice,
}

impl GammaMap {
    pub fn new(spec: &QTorusSpec) -> Self {
        GammaMap { spec: spec.clone(), kernel: center_lattice(spec) }
    }

    pub fn apply(&self, a: &[i64]) -> GrpElt {
        gamma(&self.spec, a)
    }

    /// Representatives of `Z^r / ker gamma`.
    pub fn coset_representatives(&self) -> Vec<Vec<i64>> {
        self.kernel.coset_representatives().expect("kernel of gamma has full rank")
    }

    pub fn index(&self) -> u64 {
        self.kernel.index().and_then(|x| x.to_u64()).expect("full rank, small index")
    }

    /// `im gamma`, sorted.
    pub fn image(&self) -> Vec<GrpElt> {
        let mut v: Vec<GrpElt> = self.coset_representatives().iter().map(|a| self.apply(a)).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// One rank-two factor `x y = zeta y x` with `zeta` of order `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusBlock {
    pub d: u64,
    pub zeta: RootOfUnity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Unimodular change of generators; new generator `i` is `t^{P_i}`.
    pub transform: Vec<Vec<i64>>,
    pub blocks: Vec<TorusBlock>,
    pub central_rank: usize,
    /// `P E P^T mod L`.
    pub transformed: Vec<Vec<i64>>,
}

impl NormalForm {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Dimension `prod d_i` of the simple modules.
    pub fn simple_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.d as usize).product()
    }
}

/// Congruence reduction of an integer alternating matrix.
struct SkewReduction {
    a: Vec<Vec<i128>>,
    p: Vec<Vec<i128>>,
}

impl SkewReduction {
    /// basis change `e_j <- e_j + c e_k`
    fn add(&mut self, j: usize, k: usize, c: i128) {
        if c == 0 {
            return;
        }
        let r = self.a.len();
        for t in 0..r {
            let v = self.a[k][t];
            self.a[j][t] += c * v;
        }
        for t in 0..r {
            let v = self.a[t][k];
            self.a[t][j] += c * v;
        }
        for t in 0..r {
            let v = self.p[k][t];
            self.p[j][t] += c * v;
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        self.p.swap(i, j);
    }

    fn orient(&mut self, t: usize) {
        if self.a[t][t + 1] < 0 {
            self.swap(t, t + 1);
        }
    }

    fn run(&mut self) {
        let r = self.a.len();
        let mut t = 0;
        while t + 1 < r {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in i + 1..r {
                    if self.a[i][j] != 0 && best.is_none_or(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else { break };
            self.swap(t, i);
            self.swap(t + 1, j);
            self.orient(t);
            loop {
                let p0 = self.a[t][t + 1];
                for j in t + 2..r {
                    let q = self.a[t][j].div_euclid(p0);
                    self.add(j, t + 1, -q);
                    let q2 = self.a[t + 1][j].div_euclid(-p0);
                    self.add(j, t, -q2);
                }
                if let Some(j) = (t + 2..r).find(|&j| self.a[t][j] != 0) {
                    self.swap(j, t + 1);
                    self.orient(t);
                    continue;
                }
                if let Some(j) = (t + 2..r).find(|&j| self.a[t + 1][j] != 0) {
                    self.swap(t, t + 1);
                    self.swap(j, t + 1);
                    self.orient(t);
                    continue;
                }
                let bad = (t + 2..r).find(|&i| (i + 1..r).any(|j| self.a[i][j] % p0 != 0));
                if let Some(i) = bad {
                    self.add(t, i, 1);
                    continue;
                }
                break;
            }
            t += 2;
        }
    }
}

/// Reduces the torus to rank-two factors followed by central generators.
///
/// Blocks are ordered with non-increasing `d_i`; the exponent of each block is
/// normalized into `[1, d_i / 2]`.
pub fn normal_form(spec: &QTorusSpec) -> NormalForm {
    let r = spec.rank();
    let l = spec.root_order;
    let lift: Vec<Vec<i128>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| match i.cmp(&j) {
                    core::cmp::Ordering::Less => spec.exponents[i][j] as i128,
                    core::cmp::Ordering::Greater => -(spec.exponents[j][i] as i128),
                    core::cmp::Ordering::Equal => 0,
                })
                .collect()
        })
        .collect();
    let ident = (0..r).map(|i| (0..r).map(|j| i128::from(i == j)).collect()).collect();
    let mut red = SkewReduction { a: lift, p: ident };
    red.run();
    let mut blocks = Vec::new();
    let mut t = 0;
    while t + 1 < r {
        let v = red.a[t][t + 1];
        let z = RootOfUnity::new(l, (v.rem_euclid(l as i128)) as i64);
        if v == 0 || z.order() == 1 {
            break;
        }
        let d = z.order();
        let z = if 2 * z.exponent() > d {
            red.p.swap(t, t + 1);
            z.inv()
        } else {
            z
        };
        blocks.push(TorusBlock { d, zeta: z });
        t += 2;
    }
    let transform: Vec<Vec<i64>> = red.p.iter().map(|row| row.iter().map(|&x| i64::try_from(x).expect("transform entry fits")).collect()).collect();
    let transformed = spec.transformed(&transform);
    NormalForm { central_rank: r - 2 * blocks.len(), blocks, transformed, transform }
}

/// Exact check of a normal form: `P` unimodular and `P E P^T mod L` block shaped.
pub fn verify_normal_form(spec: &QTorusSpec, nf: &NormalForm) -> bool {
    let r = spec.rank();
    let l = spec.root_order;
    if nf.transform.len() != r || 2 * nf.blocks.len() + nf.central_rank != r {
        return false;
    }
    let p = IntMatrix::from_i64(&nf.transform);
    if !p.is_unimodular() {
        return false;
    }
    let actual = spec.transformed(&nf.transform);
    if actual != nf.transformed {
        return false;
    }
    let mut expect = vec![vec![0i64; r]; r];
    for (k, b) in nf.blocks.iter().enumerate() {
        if b.zeta.order() != b.d || b.d <= 1 {
            return false;
        }
        let Some(e) = b.zeta.exponent_over(l) else { return false };
        expect[2 * k][2 * k + 1] = e as i64;
        expect[2 * k + 1][2 * k] = ((l - e) % l) as i64;
    }
    actual == expect
}

/// Operators of the standard simple module: per block `X = chi(x^d)^{1/d} diag(zeta^j)`
/// and `Y` the cyclic shift with `chi(y^d)` in the corner, tensored over blocks;
/// central generators act by their character values. Order: `x_1, y_1, ..., z_1, ...`.
pub fn standard_simple_module(blocks: &[TorusBlock], xy: &[(C64, C64)], central: &[C64]) -> Result<Vec<ComplexMatrix>> {
    if xy.len() != blocks.len() {
        return Err(Error::DimensionMismatch("one character pair per block".into()));
    }
    if xy.iter().any(|(a, b)| a.norm() == 0.0 || b.norm() == 0.0) || central.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::ZeroCharacter);
    }
    let dims: Vec<usize> = blocks.iter().map(|b| b.d as usize).collect();
    let total: usize = dims.iter().product();
    let embed = |k: usize, m: &ComplexMatrix| -> ComplexMatrix {
        let before: usize = dims[..k].iter().product();
        let after: usize = dims[k + 1..].iter().product();
        ComplexMatrix::identity(before).kron(m).kron(&ComplexMatrix::identity(after))
    };
    let mut ops = Vec::new();
    for (k, (b, &(cx, cy))) in blocks.iter().zip(xy).enumerate() {
        let d = b.d as usize;
        let scale = principal_root(cx, b.d);
        let x = ComplexMatrix::diag(&(0..d).map(|j| b.zeta.pow(j as i64).value() * scale).collect::<Vec<_>>());
        let mut y = ComplexMatrix::zeros(d, d);
        for j in 0..d - 1 {
            y[(j + 1, j)] = ONE;
        }
        y[(0, d - 1)] = cy;
        ops.push(embed(k, &x));
        ops.push(embed(k, &y));
    }
    for &z in central {
        ops.push(ComplexMatrix::scalar(total, z));
    }
    Ok(ops)
}

/// One isotypic component `N (x) V^h`.
#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    /// Canonical label: the lexicographically least element of its class mod `im gamma`.
    pub label: GrpElt,
    /// Central character on the kernel basis of `gamma`.
    pub central_character: Vec<RootOfUnity>,
    /// Basis `S_l : N -> M` of the multiplicity space (each `n x dim N`).
    pub embeddings: Vec<ComplexMatrix>,
}

impl IsotypicComponent {
    pub fn multiplicity(&self) -> usize {
        self.embeddings.len()
    }
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomp {
    pub gamma: GammaMap,
    pub normal_form: NormalForm,
    /// Operators `t_i` on the simple module `N` (orthonormal coordinates).
    pub simple_ops: Vec<ComplexMatrix>,
    pub components: Vec<IsotypicComponent>,
    /// Columns `S_l e_j` (index `j * k + l` inside each component), identifying
    /// `N (x) (+)_h V^h` with `M`.
    pub change_of_basis: ComplexMatrix,
    /// Largest deviation of `U^{-1} T_i U` from `t_i (x) h(eta_i) I`.
    pub residual: f64,
}

impl IsotypicDecomp {
    pub fn simple_dim(&self) -> usize {
        self.simple_ops.first().map_or(1, ComplexMatrix::rows)
    }

    /// `t^a` on `N`.
    pub fn simple_monomial(&self, a: &[i64]) -> ComplexMatrix {
        monomial_dim(self.simple_dim(), &self.simple_ops, self.gamma.spec.orders(), a)
    }
}

fn finite_order_of(m: &ComplexMatrix, bound: u64, tol: &Tolerance) -> Option<u64> {
    let n = m.rows();
    let id = ComplexMatrix::identity(n);
    (1..=bound).filter(|k| bound.is_multiple_of(*k)).find(|&k| tol.accepts(m.pow(k).distance(&id), libm::sqrt(n as f64)))
}

/// Decomposes a module over the torus generated by `ops` (with `T_i^{s_i} = I`
/// and scalar commutators) as `N (x) (+)_h V^h`.
pub fn isotypic_decompose(ops: &[ComplexMatrix], orders: &[u64], tol: &Tolerance) -> Result<IsotypicDecomp> {
    isotypic_decompose_dim(ops.first().map_or(0, ComplexMatrix::rows), ops, orders, tol)
}

/// As [`isotypic_decompose`] on `C^n`; needed when there are no operators.
pub fn isotypic_decompose_dim(n: usize, ops: &[ComplexMatrix], orders: &[u64], tol: &Tolerance) -> Result<IsotypicDecomp> {
    if n == 0 || ops.iter().any(|t| t.rows() != n || !t.is_square()) {
        return Err(Error::DimensionMismatch("operators must act on a nonzero space".into()));
    }
    let id = ComplexMatrix::identity(n);
    for (t, &s) in ops.iter().zip(orders) {
        if !tol.accepts(t.pow(s).distance(&id), libm::sqrt(n as f64)) {
            return Err(Error::NotCategoryC(format!("T^{s} is not the identity")));
        }
    }
    let spec = qmatrix_from_operators(ops, orders, tol)?;
    let gmap = GammaMap::new(&spec);
    let nf = normal_form(&spec);
    let h = spec.h_group();
    let kernel_basis = gmap.kernel.basis_vectors();
    let exp_bound = 2 * orders.iter().fold(1u64, |a, &b| a.lcm(&b)) * spec.root_order();
    let mut central_ops = Vec::new();
    let mut central_orders = Vec::new();
    for a in &kernel_basis {
        let z = monomial(ops, orders, a);
        let m = finite_order_of(&z, exp_bound, tol).ok_or_else(|| Error::NotCategoryC("central monomial of infinite order".into()))?;
        central_ops.push(z);
        central_orders.push(m);
    }
    let blocks = joint_eigenspaces(&central_ops, &central_orders, &id, tol)?;
    let (ref_label, ref_block) = blocks.first().cloned().ok_or(Error::ZeroVector)?;

    // simple module N inside the reference block
    let x_ops: Vec<ComplexMatrix> = (0..nf.blocks.len()).map(|k| monomial(ops, orders, &nf.transform[2 * k])).collect();
    let x_orders: Vec<u64> = x_ops.iter().map(|x| finite_order_of(x, exp_bound, tol).ok_or_else(|| Error::NotCategoryC("monomial of infinite order".into()))).collect::<Result<_>>()?;
    let eig = joint_eigenspaces(&x_ops, &x_orders, &ref_block, tol)?;
    let u = eig.first().ok_or(Error::ZeroVector)?.1.column(0);
    let dims: Vec<i64> = nf.blocks.iter().map(|b| b.d as i64).collect();
    let mut span = Vec::new();
    for c in FinAbGroup::new(dims.iter().map(|&d| d as u64).collect()).expect("positive").elements() {
        let mut v = u.clone();
        for (k, &ck) in c.0.iter().enumerate() {
            let y = monomial(ops, orders, &nf.transform[2 * k + 1]);
            for _ in 0..ck {
                v = y.mul_vec(&v);
            }
        }
        span.push(v);
    }
    let span = ComplexMatrix::from_columns(n, &span);
    let dim_n = nf.simple_dim();
    if rank(&span, tol) != dim_n {
        return Err(Error::NotCategoryC("cyclic span has the wrong dimension".into()));
    }
    let qn = column_space(&span, tol);
    let qnh = qn.adjoint();
    let simple_ops: Vec<ComplexMatrix> = ops.iter().map(|t| qnh.mul(t).mul(&qn)).collect();

    let mut components = Vec::new();
    let h_elems = h.elements();
    for (label, _) in &blocks {
        let ratios: Vec<RootOfUnity> = label.iter().zip(&ref_label).map(|(a, b)| *a * b.inv()).collect();
        let lab = h_elems
            .iter()
            .find(|hh| {
                kernel_basis.iter().zip(&ratios).all(|(a, r)| {
                    let a_mod: Vec<u64> = a.iter().zip(orders).map(|(&x, &s)| x.rem_euclid(s as i64) as u64).collect();
                    pairing(&h, &hh.0, &a_mod) == *r
                })
            })
            .cloned()
            .ok_or(Error::LabelNotInH)?;
        let twisted: Vec<ComplexMatrix> = simple_ops
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut e = vec![0u64; orders.len()];
                e[i] = 1;
                t.scale(pairing(&h, &lab.0, &e).value())
            })
            .collect();
        let pairs: Vec<(&ComplexMatrix, &ComplexMatrix)> = twisted.iter().zip(ops).collect();
        let embeddings = intertwiners(&pairs, n, dim_n, tol);
        components.push(IsotypicComponent { label: lab, central_character: label.clone(), embeddings });
    }
    let total: usize = components.iter().map(|c| c.multiplicity() * dim_n).sum();
    if total != n {
        return Err(Error::NotCategoryC(format!("components account for {total} of {n} dimensions")));
    }
    let mut cols = Vec::with_capacity(n);
    for c in &components {
        let k = c.multiplicity();
        for j in 0..dim_n {
            for l in 0..k {
                cols.push(c.embeddings[l].column(j));
            }
        }
    }
    let u_mat = ComplexMatrix::from_columns(n, &cols);
    let u_inv = inverse(&u_mat)?;
    let mut residual: f64 = 0.0;
    for (i, t) in ops.iter().enumerate() {
        let conj = u_inv.mul(t).mul(&u_mat);
        let mut e = vec![0u64; orders.len()];
        e[i] = 1;
        let expect = ComplexMatrix::block_diag(
            &components
                .iter()
                .map(|c| simple_ops[i].kron(&ComplexMatrix::scalar(c.multiplicity(), pairing(&h, &c.label.0, &e).value())))
                .collect::<Vec<_>>(),
        );
        residual = residual.max(conj.distance(&expect));
    }
    Ok(IsotypicDecomp { gamma: gmap, normal_form: nf, simple_ops, components, change_of_basis: u_mat, residual })
}

/// Central-character helper: all-ones values for every block and central generator.
pub fn unit_character(nf: &NormalForm) -> (Vec<(C64, C64)>, Vec<C64>) {
    (vec![(ONE, ONE); nf.blocks.len()], vec![ONE; nf.central_rank])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{clock_matrix, shift_matrix};
    use crate::lattice::smith_normal_form;
    use crate::rng::SeededRng;
    use proptest::prelude::*;

    fn spec2(d: u64, k: i64) -> QTorusSpec {
        QTorusSpec::new(vec![d, d], d, vec![vec![0, k], vec![-k, 0]]).unwrap()
    }

    #[test]
    fn commutation_scalars() {
        let tol = Tolerance::default();
        let s = qmatrix_from_operators(&[clock_matrix(2), shift_matrix(2)], &[2, 2], &tol).unwrap();
        assert_eq!(s.q(0, 1), RootOfUnity::new(2, 1));
        let s = qmatrix_from_operators(&[clock_matrix(3), shift_matrix(3)], &[3, 3], &tol).unwrap();
        assert_eq!(s.q(0, 1), RootOfUnity::new(3, 1));
        assert_eq!(s.q(1, 0), RootOfUnity::new(3, 2));
        let s = qmatrix_from_operators(&[clock_matrix(2), clock_matrix(2)], &[2, 2], &tol).unwrap();
        assert_eq!(s.exponents(), &[vec![0, 0], vec![0, 0]]);
        let r = 0.5f64.sqrt();
        let had = ComplexMatrix::from_real(&[&[r, r], &[r, -r]]);
        assert_eq!(qmatrix_from_operators(&[clock_matrix(2), had], &[2, 2], &tol), Err(Error::NotScalarCommutator));
    }

    #[test]
    fn spec_invariants_enforced() {
        assert!(QTorusSpec::new(vec![2, 3], 2, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(QTorusSpec::new(vec![4, 4], 4, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(QTorusSpec::new(vec![4, 4], 4, vec![vec![0, 1], vec![3, 0]]).is_ok());
    }

    #[test]
    fn gamma_and_center_examples() {
        let s = spec2(5, 1);
        assert_eq!(gamma(&s, &[0, 0]), GrpElt(vec![0, 0]));
        // gamma(1, 0)(eta^b) = zeta_5^{b_2}
        assert_eq!(gamma(&s, &[1, 0]), GrpElt(vec![0, 1]));
        let k = center_lattice(&s);
        assert_eq!(k.index(), Some(BigInt::from(25)));
        assert!(k.contains(&[5, 0]) && k.contains(&[0, 5]) && !k.contains(&[1, 0]));
        let s3 = QTorusSpec::new(vec![2, 2, 3], 2, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        let k = center_lattice(&s3);
        assert_eq!(k.index(), Some(BigInt::from(4)));
        assert!(k.contains(&[2, 0, 0]) && k.contains(&[0, 2, 0]) && k.contains(&[0, 0, 1]));
        let zero = QTorusSpec::new(vec![3, 3], 1, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(center_lattice(&zero).index(), Some(BigInt::from(1)));
    }

    #[test]
    fn normal_form_examples() {
        let zero = QTorusSpec::new(vec![3, 3, 3], 1, vec![vec![0; 3]; 3]).unwrap();
        let nf = normal_form(&zero);
        assert_eq!(nf.transform, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(nf.central_rank, 3);
        assert!(verify_normal_form(&zero, &nf));
        let s = spec2(6, 1);
        let nf = normal_form(&s);
        assert_eq!(nf.blocks, vec![TorusBlock { d: 6, zeta: RootOfUnity::new(6, 1) }]);
        assert!(verify_normal_form(&s, &nf));
        let s3 = QTorusSpec::new(vec![2, 2, 2], 2, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        let nf = normal_form(&s3);
        assert_eq!(nf.central_rank, 1);
        assert_eq!(nf.blocks, vec![TorusBlock { d: 2, zeta: RootOfUnity::new(2, 1) }]);
        assert!(verify_normal_form(&s3, &nf));
        // orientation: zeta_5^3 is reported as zeta_5^2 after swapping the pair
        let nf = normal_form(&spec2(5, 3));
        assert_eq!(nf.blocks[0].zeta, RootOfUnity::new(5, 2));
        assert!(verify_normal_form(&spec2(5, 3), &nf));
    }

    #[test]
    fn standard_module_examples() {
        let b = TorusBlock { d: 2, zeta: RootOfUnity::new(2, 1) };
        let ops = standard_simple_module(&[b], &[(ONE, ONE)], &[]).unwrap();
        assert_eq!(ops[0], ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]));
        assert!(ops[1].distance(&shift_matrix(2)) < 1e-15);
        let b3 = TorusBlock { d: 3, zeta: RootOfUnity::new(3, 1) };
        let eight = C64::new(8.0, 0.0);
        let ops = standard_simple_module(&[b3], &[(ONE, eight)], &[]).unwrap();
        assert_eq!(ops[1][(0, 2)], eight);
        assert!(ops[1].pow(3).distance(&ComplexMatrix::scalar(3, eight)) < 1e-12);
        let z3 = RootOfUnity::new(3, 1).value();
        assert!(ops[0].mul(&ops[1]).distance(&ops[1].mul(&ops[0]).scale(z3)) < 1e-12);
        let ops = standard_simple_module(&[], &[], &[C64::new(2.0, 0.0)]).unwrap();
        assert_eq!(ops, vec![ComplexMatrix::scalar(1, C64::new(2.0, 0.0))]);
        assert_eq!(standard_simple_module(&[b], &[(ONE, C64::new(0.0, 0.0))], &[]), Err(Error::ZeroCharacter));
    }

    #[test]
    fn isotypic_examples() {
        let tol = Tolerance::default();
        let (x, y) = (clock_matrix(2), shift_matrix(2));
        let dec = isotypic_decompose(&[x.clone(), y.clone()], &[2, 2], &tol).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.components[0].multiplicity(), 1);
        assert_eq!(dec.components[0].label, GrpElt(vec![0, 0]));
        let i2 = ComplexMatrix::identity(2);
        let dec = isotypic_decompose(&[i2.kron(&x), i2.kron(&y)], &[2, 2], &tol).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.components[0].multiplicity(), 2);
        assert!(dec.residual < 1e-10);
        let dec = isotypic_decompose(core::slice::from_ref(&x), &[2], &tol).unwrap();
        assert_eq!(dec.simple_dim(), 1);
        let labels: Vec<GrpElt> = dec.components.iter().map(|c| c.label.clone()).collect();
        assert_eq!(labels, vec![GrpElt(vec![0]), GrpElt(vec![1])]);
        assert!(matches!(isotypic_decompose(&[x.scale_real(2.0)], &[2], &tol), Err(Error::NotCategoryC(_))));
    }

    #[allow(clippy::needless_range_loop)]
    fn random_spec(rng: &mut SeededRng, r: usize) -> QTorusSpec {
        let l = 12;
        let mut e = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                let v = rng.below(12) as i64;
                e[i][j] = v;
                e[j][i] = -v;
            }
        }
        QTorusSpec::new(vec![12; r], l, e).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gamma_is_a_homomorphism(seed in 0u64..10_000, r in 1usize..5) {
            let mut rng = SeededRng::new(seed);
            let s = random_spec(&mut rng, r);
            let a: Vec<i64> = (0..r).map(|_| rng.below(30) as i64 - 15).collect();
            let b: Vec<i64> = (0..r).map(|_| rng.below(30) as i64 - 15).collect();
            let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let h = s.h_group();
            prop_assert_eq!(gamma(&s, &sum), h.add(&gamma(&s, &a), &gamma(&s, &b)));
            // defining property against the double product
            let ga = gamma(&s, &a);
            for j in 0..r {
                let mut e = vec![0u64; r];
                e[j] = 1;
                let mut q = RootOfUnity::ONE;
                for (i, &ai) in a.iter().enumerate() {
                    q = q * s.q(i, j).pow(ai);
                }
                prop_assert_eq!(pairing(&h, &ga.0, &e), q);
            }
        }

        #[test]
        fn center_index_matches_brute_force(seed in 0u64..10_000, r in 1usize..4) {
            let mut rng = SeededRng::new(seed);
            let s = random_spec(&mut rng, r);
            let k = center_lattice(&s);
            // count kernel points in the box [0, L)^r
            let l = s.root_order() as i64;
            let mut count = 0i64;
            let total = l.pow(r as u32);
            for idx in 0..total {
                let a: Vec<i64> = (0..r).map(|t| (idx / l.pow(t as u32)) % l).collect();
                let zero = gamma(&s, &a).0.iter().all(|&x| x == 0);
                prop_assert_eq!(zero, k.contains(&a));
                count += i64::from(zero);
            }
            prop_assert_eq!(k.index().unwrap(), BigInt::from(total / count));
        }

        #[test]
        fn normal_form_is_valid_and_canonical(seed in 0u64..10_000, r in 1usize..5) {
            let mut rng = SeededRng::new(seed);
            let s = random_spec(&mut rng, r);
            let nf = normal_form(&s);
            prop_assert!(verify_normal_form(&s, &nf));
            let mut ds: Vec<u64> = nf.blocks.iter().map(|b| b.d).collect();
            for w in ds.windows(2) { prop_assert!(w[0] % w[1] == 0); }
            // oracle: Z^r / ker gamma has invariant factors d_1, d_1, d_2, d_2, ...
            let k = center_lattice(&s);
            let smith = smith_normal_form(k.basis());
            let mut inv: Vec<u64> = smith.diagonal().iter().map(|x| x.to_u64().unwrap()).filter(|&x| x > 1).collect();
            inv.sort();
            let mut doubled: Vec<u64> = ds.iter().flat_map(|&d| [d, d]).collect();
            doubled.sort();
            prop_assert_eq!(inv, doubled);
            // permuting the generators leaves the d_i unchanged
            let mut perm: Vec<usize> = (0..r).collect();
            for i in (1..r).rev() { perm.swap(i, rng.below(i as u64 + 1) as usize); }
            let e2: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| s.exponents()[perm[i]][perm[j]] as i64).collect()).collect();
            let s2 = QTorusSpec::new(vec![12; r], 12, e2).unwrap();
            let mut ds2: Vec<u64> = normal_form(&s2).blocks.iter().map(|b| b.d).collect();
            ds.sort();
            ds2.sort();
            prop_assert_eq!(ds, ds2);
        }
    }
}
