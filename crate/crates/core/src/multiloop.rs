//! Truncated multiloop Lie algebras `sum_a g_abar (x) t^a` and the loop
//! modules `sum_a M_abar (x) t^a` built from thin coverings.

use crate::algebra::{LieAlgebra, Rep};
use crate::covering::{is_thin, Covering};
use crate::error::{Error, Result};
use crate::group::{subgroup_from_generators, FinAbGroup, GrpElt};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::scalars::{Tolerance, C64, ZERO};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Exponent vectors with `|a_i| <= cutoff`, in lexicographic order.
pub fn window(rank: usize, cutoff: u32) -> Vec<Vec<i64>> {
    let d = cutoff as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-d..=d).map(move |x| {
            let mut p = p.clone();
            p.push(x);
            p
        })).collect();
    }
    out
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Truncated multiloop algebra: basis `x_i (x) t^a` with `deg x_i = abar`.
#[derive(Clone, Debug)]
pub struct MultiloopAlgebra {
    base: LieAlgebra,
    epimorphism: Vec<GrpElt>,
    cutoff: u32,
    basis: Vec<(usize, Vec<i64>)>,
    index: BTreeMap<(usize, Vec<i64>), usize>,
}

impl MultiloopAlgebra {
    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn epimorphism(&self) -> &[GrpElt] {
        &self.epimorphism
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn loop_rank(&self) -> usize {
        self.epimorphism.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(i, a)` for the basis element `x_i (x) t^a`.
    pub fn basis(&self) -> &[(usize, Vec<i64>)] {
        &self.basis
    }

    pub fn index_of(&self, i: usize, a: &[i64]) -> Option<usize> {
        self.index.get(&(i, a.to_vec())).copied()
    }

    pub fn in_window(&self, a: &[i64]) -> bool {
        a.iter().all(|x| x.unsigned_abs() <= self.cutoff as u64)
    }

    /// `abar = sum a_i e_i` in the grading group.
    pub fn reduce(&self, a: &[i64]) -> GrpElt {
        reduce(self.base.group(), &self.epimorphism, a)
    }

    /// `[x_i t^a, x_j t^b] = [x_i, x_j] t^{a+b}`, or `None` outside the window.
    pub fn bracket(&self, p: usize, q: usize) -> Option<Vec<C64>> {
        let (i, a) = &self.basis[p];
        let (j, b) = &self.basis[q];
        let c = add(a, b);
        if !self.in_window(&c) {
            return None;
        }
        let mut out = vec![ZERO; self.dim()];
        for (k, &z) in self.base.bracket(*i, *j).iter().enumerate() {
            if z != ZERO {
                // homogeneity of the base bracket puts x_k in degree a+b
                let idx = self.index_of(k, &c)?;
                out[idx] += z;
            }
        }
        Some(out)
    }

    fn bracket_vec(&self, x: &[C64], q: usize) -> Option<Vec<C64>> {
        let mut out = vec![ZERO; self.dim()];
        for (p, &c) in x.iter().enumerate() {
            if c != ZERO {
                for (k, z) in self.bracket(p, q)?.into_iter().enumerate() {
                    out[k] += c * z;
                }
            }
        }
        Some(out)
    }

    /// Largest antisymmetry and Jacobi violation over triples whose brackets stay in the window.
    pub fn axiom_residual(&self) -> f64 {
        let d = self.dim();
        let mut r: f64 = 0.0;
        for p in 0..d {
            for q in 0..d {
                if let (Some(x), Some(y)) = (self.bracket(p, q), self.bracket(q, p)) {
                    let s: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                    r = r.max(vec_norm(&s));
                }
                for s in 0..d {
                    let terms = [(p, q, s), (q, s, p), (s, p, q)];
                    let mut acc = vec![ZERO; d];
                    let mut ok = true;
                    for (a, b, c) in terms {
                        match self.bracket(a, b).and_then(|ab| self.bracket_vec(&ab, c)) {
                            Some(v) => acc.iter_mut().zip(v).for_each(|(x, y)| *x += y),
                            None => ok = false,
                        }
                    }
                    if ok {
                        r = r.max(vec_norm(&acc));
                    }
                }
            }
        }
        r
    }
}

fn reduce(g: &FinAbGroup, epi: &[GrpElt], a: &[i64]) -> GrpElt {
    epi.iter().zip(a).fold(g.zero(), |acc, (e, &k)| g.add(&acc, &g.scale(e, k)))
}

/// Truncated `L(g)` for the epimorphism `Z^N -> G, e_i -> epimorphism[i]`.
pub fn build_multiloop(lie: &LieAlgebra, epimorphism: &[GrpElt], cutoff: u32, tol: &Tolerance) -> Result<MultiloopAlgebra> {
    let g = lie.group();
    for e in epimorphism {
        if !g.contains(e) {
            return Err(Error::GradingInvalid("epimorphism image outside the grading group".into()));
        }
    }
    if !subgroup_from_generators(g, epimorphism)?.is_whole() {
        return Err(Error::GradingInvalid("map onto the grading group is not surjective".into()));
    }
    let scale = (0..lie.dim()).flat_map(|i| (0..lie.dim()).map(move |j| (i, j))).map(|(i, j)| vec_norm(lie.bracket(i, j))).fold(1.0, f64::max);
    let res = lie.axiom_residual();
    if !tol.accepts(res, scale * scale) {
        return Err(Error::GradingInvalid(format!("base Lie algebra fails its axioms or grading by {res:e}")));
    }
    let mut basis = Vec::new();
    let mut index = BTreeMap::new();
    for a in window(epimorphism.len(), cutoff) {
        let abar = reduce(g, epimorphism, &a);
        for (i, deg) in lie.grading().iter().enumerate() {
            if *deg == abar {
                index.insert((i, a.clone()), basis.len());
                basis.push((i, a.clone()));
            }
        }
    }
    Ok(MultiloopAlgebra { base: lie.clone(), epimorphism: epimorphism.to_vec(), cutoff, basis, index })
}

/// `(+)_a M_abar (x) t^a` with `x t^a` acting by `rho(x)` and shifting `a`.
#[derive(Clone, Debug)]
pub struct MultiloopModule {
    /// `(a, orthonormal basis of M_abar)` for every window exponent.
    pub components: Vec<(Vec<i64>, ComplexMatrix)>,
    /// `(algebra basis index, source component, target component, block)`.
    pub action: Vec<(usize, usize, usize, ComplexMatrix)>,
    /// Largest `|rho(x) Q_b - Q_{a+b} B|` over the blocks.
    pub closure_residual: f64,
    /// Largest `|[X, Y] - (XY - YX)|` over in-window pairs and sources.
    pub commutator_residual: f64,
}

impl MultiloopModule {
    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.1.cols()).sum()
    }
}

/// Loop module over a thin covering of the module `lie_action` for the envelope `rep`.
pub fn loop_module(ml: &MultiloopAlgebra, rep: &Rep, lie_action: &[ComplexMatrix], c: &Covering, tol: &Tolerance) -> Result<MultiloopModule> {
    if lie_action.len() != ml.base.dim() {
        return Err(Error::DimensionMismatch("one matrix per base Lie basis element".into()));
    }
    if rep.group() != ml.base.group() || !is_thin(rep, c, tol) {
        return Err(Error::NotThin);
    }
    let exps = window(ml.loop_rank(), ml.cutoff);
    let comp_index: BTreeMap<Vec<i64>, usize> = exps.iter().enumerate().map(|(k, a)| (a.clone(), k)).collect();
    let components: Vec<(Vec<i64>, ComplexMatrix)> = exps.iter().map(|a| (a.clone(), c.component(&ml.reduce(a)).clone())).collect();
    let mut action = Vec::new();
    let mut closure: f64 = 0.0;
    let mut blocks: BTreeMap<(usize, usize), (usize, ComplexMatrix)> = BTreeMap::new();
    for (p, (i, a)) in ml.basis.iter().enumerate() {
        let x = &lie_action[*i];
        for (s, (b, qb)) in components.iter().enumerate() {
            let Some(&t) = comp_index.get(&add(a, b)) else { continue };
            let qt = &components[t].1;
            let img = x.mul(qb);
            let blk = qt.adjoint().mul(&img);
            closure = closure.max(img.distance(&qt.mul(&blk)));
            blocks.insert((p, s), (t, blk.clone()));
            action.push((p, s, t, blk));
        }
    }
    let mut comm: f64 = 0.0;
    for p in 0..ml.dim() {
        for q in 0..ml.dim() {
            let Some(br) = ml.bracket(p, q) else { continue };
            for s in 0..components.len() {
                let (Some((tq, bq)), Some((tp, bp))) = (blocks.get(&(q, s)), blocks.get(&(p, s))) else { continue };
                let (Some((t1, bpq)), Some((t2, bqp))) = (blocks.get(&(p, *tq)), blocks.get(&(q, *tp))) else { continue };
                debug_assert_eq!(t1, t2);
                let lhs = bpq.mul(bq).sub(&bqp.mul(bp));
                let mut rhs = ComplexMatrix::zeros(lhs.rows(), lhs.cols());
                for (k, z) in br.iter().enumerate() {
                    if *z != ZERO {
                        if let Some((_, bk)) = blocks.get(&(k, s)) {
                            rhs.axpy(*z, bk);
                        }
                    }
                }
                comm = comm.max(lhs.distance(&rhs));
            }
        }
    }
    Ok(MultiloopModule { components, action, closure_residual: closure, commutator_residual: comm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::envelope_from_lie;
    use crate::covering::classify;
    use crate::instances::{abelian_sign_lie, gl2_pauli, sl2_chevalley};
    use crate::scalars::ONE;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn flatten(lie: &LieAlgebra) -> LieAlgebra {
        let d = lie.dim();
        let triv = FinAbGroup::trivial();
        let br = (0..d).flat_map(|i| (0..d).flat_map(move |j| lie.bracket(i, j).to_vec())).collect();
        LieAlgebra::new(triv.clone(), d, br, vec![triv.zero(); d]).unwrap()
    }

    #[test]
    fn untwisted_loop_algebra() {
        let (lie, _) = sl2_chevalley();
        let flat = flatten(&lie);
        let ml = build_multiloop(&flat, &[GrpElt(Vec::new())], 1, &tol()).unwrap();
        assert_eq!(ml.dim(), 9);
        assert!(ml.axiom_residual() < 1e-12);
        // [x t^-1, y t] = [x, y]
        let p = ml.index_of(0, &[-1]).unwrap();
        let q = ml.index_of(1, &[1]).unwrap();
        let br = ml.bracket(p, q).unwrap();
        for (k, z) in flat.bracket(0, 1).iter().enumerate() {
            assert!((br[ml.index_of(k, &[0]).unwrap()] - z).norm() < 1e-12);
        }
        assert!(ml.bracket(ml.index_of(0, &[1]).unwrap(), q).is_none());
    }

    #[test]
    fn sl2_chevalley_dimension() {
        let (lie, _) = sl2_chevalley();
        let ml = build_multiloop(&lie, &[GrpElt(vec![1])], 2, &tol()).unwrap();
        assert_eq!(ml.dim(), 7);
        assert!(ml.axiom_residual() < 1e-9);
    }

    #[test]
    fn abelian_components() {
        let g = FinAbGroup::new(vec![2]).unwrap();
        let h = ComplexMatrix::diag(&[ONE, -ONE]);
        let (lie, _) = LieAlgebra::from_matrices(&g, &[ComplexMatrix::identity(2), h], &[GrpElt(vec![0]), GrpElt(vec![1])], &tol()).unwrap();
        let ml = build_multiloop(&lie, &[GrpElt(vec![1])], 1, &tol()).unwrap();
        assert_eq!(ml.dim(), 3);
        let exps: Vec<i64> = ml.basis().iter().map(|(_, a)| a[0]).collect();
        assert_eq!(exps, vec![-1, 0, 1]);
        for p in 0..ml.dim() {
            for q in 0..ml.dim() {
                if let Some(b) = ml.bracket(p, q) {
                    assert!(vec_norm(&b) < 1e-12);
                }
            }
        }
        let (odd, _) = abelian_sign_lie();
        assert_eq!(build_multiloop(&odd, &[GrpElt(vec![1])], 1, &tol()).unwrap().dim(), 2);
    }

    #[test]
    fn rejects_bad_epimorphism() {
        let (lie, _) = gl2_pauli();
        assert!(matches!(build_multiloop(&lie, &[GrpElt(vec![1, 0])], 1, &tol()), Err(Error::GradingInvalid(_))));
        assert!(matches!(build_multiloop(&lie, &[GrpElt(vec![3, 0])], 1, &tol()), Err(Error::GradingInvalid(_))));
    }

    #[test]
    fn sl2_loop_module() {
        let (lie, mats) = sl2_chevalley();
        let env = envelope_from_lie(&lie, &mats, &tol()).unwrap();
        let cl = classify(&env, &tol()).unwrap();
        let n = vec![ONE; cl.decomposition.simple_dim()];
        let cov = cl.thin_g(&n, &tol()).unwrap();
        let ml = build_multiloop(&lie, &[GrpElt(vec![1])], 2, &tol()).unwrap();
        let lm = loop_module(&ml, &env, &mats, &cov, &tol()).unwrap();
        assert_eq!(lm.components.len(), 5);
        for (a, q) in &lm.components {
            assert_eq!(q.cols(), cov.component(&ml.reduce(a)).cols());
        }
        assert!(lm.closure_residual < 1e-9);
        assert!(lm.commutator_residual < 1e-9);
    }

    #[test]
    fn gl2_pauli_loop_module() {
        let (lie, mats) = gl2_pauli();
        let env = envelope_from_lie(&lie, &mats, &tol()).unwrap();
        let cl = classify(&env, &tol()).unwrap();
        let n = vec![ONE; cl.decomposition.simple_dim()];
        let cov = cl.thin_g(&n, &tol()).unwrap();
        let ml = build_multiloop(&lie, &[GrpElt(vec![1, 0]), GrpElt(vec![0, 1])], 1, &tol()).unwrap();
        assert_eq!(ml.dim(), 9);
        let lm = loop_module(&ml, &env, &mats, &cov, &tol()).unwrap();
        assert_eq!(lm.components.len(), 9);
        assert!(lm.components.iter().all(|(_, q)| q.cols() == 1));
        assert!(lm.commutator_residual < 1e-9);
    }
}
