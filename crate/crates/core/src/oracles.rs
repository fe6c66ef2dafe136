//! Brute-force checks on small instances, independent of the torus machinery:
//! simple `A_0`-submodules by splitting, thinness by searching for proper
//! subcoverings, and the finite density statement for families of modules.

use crate::algebra::{split_semisimple, Rep};
use crate::covering::{is_covering, Covering};
use crate::error::{Error, Result};
use crate::linalg::{column_space, intertwiners, rank, same_span, span_contains, vec_columns};
use crate::matrix::ComplexMatrix;
use crate::rng::SeededRng;
use crate::group::GrpElt;
use crate::scalars::{Tolerance, C64, ONE, ZERO};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_module_dim: usize,
    pub max_group_order: u64,
    /// Random points per projective family of simple submodules.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_module_dim: 6, max_group_order: 8, sample_count: 50, seed: 0x0a_c1e5 }
    }
}

impl OracleBudget {
    fn check(&self, rep: &Rep) -> Result<()> {
        if rep.module_dim() > self.max_module_dim {
            return Err(Error::BudgetExceeded(format!("module dimension {} > {}", rep.module_dim(), self.max_module_dim)));
        }
        if rep.group().order() > self.max_group_order {
            return Err(Error::BudgetExceeded(format!("group order {} > {}", rep.group().order(), self.max_group_order)));
        }
        Ok(())
    }
}

/// Simple submodules of the invariant subspace `span(q)` under `ops`: each
/// isotypic family is parametrized by a projective space, sampled at its
/// coordinate points plus `sample_count` seeded points.
fn simple_submodules_in(ops: &[ComplexMatrix], q: &ComplexMatrix, budget: &OracleBudget, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    let k = q.cols();
    if k == 0 {
        return Ok(Vec::new());
    }
    let qh = q.adjoint();
    let restricted: Vec<ComplexMatrix> = ops.iter().map(|a| qh.mul(a).mul(q)).collect();
    let pieces = split_semisimple(&restricted, k, budget.seed, tol)?;
    // group the summands into isomorphism classes, with maps from the first member
    let mut classes: Vec<Vec<(ComplexMatrix, ComplexMatrix)>> = Vec::new();
    for p in pieces {
        let rp: Vec<ComplexMatrix> = restricted.iter().map(|a| p.adjoint().mul(a).mul(&p)).collect();
        let mut placed = false;
        for class in classes.iter_mut() {
            let first = &class[0].0;
            if first.cols() != p.cols() {
                continue;
            }
            let rf: Vec<ComplexMatrix> = restricted.iter().map(|a| first.adjoint().mul(a).mul(first)).collect();
            let pairs: Vec<(&ComplexMatrix, &ComplexMatrix)> = rf.iter().zip(&rp).collect();
            if let Some(t) = intertwiners(&pairs, p.cols(), first.cols(), tol).into_iter().next() {
                class.push((p.clone(), t));
                placed = true;
                break;
            }
        }
        if !placed {
            let m = p.cols();
            classes.push(vec![(p, ComplexMatrix::identity(m))]);
        }
    }
    let mut rng = SeededRng::new(budget.seed);
    let mut out = Vec::new();
    for class in &classes {
        let graph = |c: &[C64]| {
            let mut m = ComplexMatrix::zeros(k, class[0].0.cols());
            for ((p, t), &cj) in class.iter().zip(c) {
                m.axpy(cj, &p.mul(t));
            }
            column_space(&q.mul(&m), tol)
        };
        for j in 0..class.len() {
            let mut c = vec![ZERO; class.len()];
            c[j] = ONE;
            out.push(graph(&c));
        }
        if class.len() > 1 {
            for _ in 0..budget.sample_count {
                out.push(graph(&rng.complex_vec(class.len())));
            }
        }
    }
    Ok(out)
}

/// Simple `A_0`-submodules of the module, sampled along isotypic families.
pub fn enumerate_simple_a0_submodules(rep: &Rep, budget: &OracleBudget, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    budget.check(rep)?;
    let a0 = rep.degree_ops(&rep.group().zero());
    simple_submodules_in(&a0, &ComplexMatrix::identity(rep.module_dim()), budget, tol)
}

/// `g -> rho(A_{g - h}) S`.
fn generated_covering(rep: &Rep, h: &GrpElt, s: &ComplexMatrix, tol: &Tolerance) -> Result<Covering> {
    let g = rep.group().clone();
    let spans = g
        .elements()
        .into_iter()
        .map(|x| {
            let parts: Vec<ComplexMatrix> = rep.degree_ops(&g.sub(&x, h)).iter().map(|a| a.mul(s)).collect();
            let refs: Vec<&ComplexMatrix> = parts.iter().collect();
            let m = if refs.is_empty() { ComplexMatrix::zeros(rep.module_dim(), 0) } else { ComplexMatrix::hstack(&refs) };
            (x, m)
        })
        .collect();
    Covering::new(g, rep.module_dim(), spans, tol)
}

/// Thin in the sense of minimality: no simple `A_0`-submodule `S` of any
/// `M_g` generates a covering `{A_{h-g} S}` strictly inside `c`.
pub fn brute_force_is_thin(rep: &Rep, c: &Covering, budget: &OracleBudget, tol: &Tolerance) -> Result<bool> {
    budget.check(rep)?;
    if !is_covering(rep, c, tol) {
        return Ok(false);
    }
    let a0 = rep.degree_ops(&rep.group().zero());
    let n = rep.module_dim();
    for (g, mg) in c.components() {
        for s in simple_submodules_in(&a0, mg, budget, tol)? {
            let sub = generated_covering(rep, &g, &s, tol)?;
            let all: Vec<&ComplexMatrix> = sub.components().map(|(_, q)| q).collect();
            if rank(&ComplexMatrix::hstack(&all), tol) != n {
                continue;
            }
            let contained = sub.components().all(|(h, q)| q.cols() == 0 || span_contains(c.component(&h), q, tol));
            let proper = sub.components().any(|(h, q)| q.cols() < c.component(&h).cols());
            if contained && proper {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every thin covering `{A_g S}` with `S` an enumerated simple `A_0`-submodule,
/// deduplicated up to equivalence.
pub fn enumerate_thin_coverings(rep: &Rep, budget: &OracleBudget, tol: &Tolerance) -> Result<Vec<Covering>> {
    let zero = rep.group().zero();
    let mut out: Vec<Covering> = Vec::new();
    for s in enumerate_simple_a0_submodules(rep, budget, tol)? {
        let c = generated_covering(rep, &zero, &s, tol)?;
        if !brute_force_is_thin(rep, &c, budget, tol)? {
            continue;
        }
        if !out.iter().any(|d| crate::covering::equivalent(d, &c, tol).is_some()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Finite density: for pairwise non-isomorphic simple modules, the diagonal
/// image of the algebra is all of `(+)_i End(M_i)`.
pub fn quasifinite_density_check(family: &[Rep], tol: &Tolerance) -> bool {
    let Some(first) = family.first() else { return false };
    if family.iter().any(|r| r.algebra() != first.algebra()) {
        return false;
    }
    let dims: Vec<usize> = family.iter().map(Rep::module_dim).collect();
    let total: usize = dims.iter().sum();
    let expect: usize = dims.iter().map(|d| d * d).sum();
    let stacked: Vec<ComplexMatrix> = (0..first.algebra().dim())
        .map(|i| ComplexMatrix::block_diag(&family.iter().map(|r| r.action()[i].clone()).collect::<Vec<_>>()))
        .collect();
    rank(&vec_columns(&stacked, total * total), tol) == expect
}

/// Whether two subspaces from an enumeration coincide.
pub fn same_subspace(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> bool {
    a.cols() == b.cols() && (a.cols() == 0 || same_span(a, b, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{classify, equivalent, is_thin, orbit_covering};
    use crate::instances::{clock_shift, cyclic_m2, group_algebra_character, labelled_pauli_instance};
    use crate::twisting::twist;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e(n: usize, i: usize) -> Vec<C64> {
        (0..n).map(|j| if i == j { ONE } else { ZERO }).collect()
    }

    #[test]
    fn simple_submodule_counts() {
        let b = OracleBudget::default();
        // A_0 = scalars on C^2: a sampled projective line
        let pauli = clock_shift(2);
        let subs = enumerate_simple_a0_submodules(&pauli, &b, &tol()).unwrap();
        assert_eq!(subs.len(), 2 + b.sample_count);
        assert!(subs.iter().all(|s| s.cols() == 1));
        // A_0 = full matrix algebra: only M itself
        let full = pauli.regrade(&crate::group::FinAbGroup::trivial(), |_| GrpElt(Vec::new()));
        let subs = enumerate_simple_a0_submodules(&full, &b, &tol()).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].cols(), 2);
        // cyclic example: two non-isomorphic lines
        let subs = enumerate_simple_a0_submodules(&cyclic_m2(), &b, &tol()).unwrap();
        assert_eq!(subs.len(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let small = OracleBudget { max_module_dim: 1, ..OracleBudget::default() };
        assert!(matches!(enumerate_simple_a0_submodules(&clock_shift(2), &small, &tol()), Err(Error::BudgetExceeded(_))));
        assert!(matches!(enumerate_simple_a0_submodules(&clock_shift(3), &OracleBudget::default(), &tol()), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn brute_force_thinness() {
        let b = OracleBudget::default();
        let rep = clock_shift(2);
        let g = rep.group().clone();
        let all = Covering::new(g.clone(), 2, g.elements().into_iter().map(|x| (x, ComplexMatrix::identity(2))).collect(), &tol()).unwrap();
        assert!(!brute_force_is_thin(&rep, &all, &b, &tol()).unwrap());
        let orbit = orbit_covering(&rep, &[C64::new(0.3, 0.2), C64::new(-0.5, 0.9)], &tol()).unwrap();
        assert!(brute_force_is_thin(&rep, &orbit, &b, &tol()).unwrap());

        let cyc = cyclic_m2();
        let eig = orbit_covering(&cyc, &e(2, 0), &tol()).unwrap();
        assert!(brute_force_is_thin(&cyc, &eig, &b, &tol()).unwrap());
    }

    #[test]
    fn agrees_with_lemma_characterization() {
        let b = OracleBudget::default();
        let rep = labelled_pauli_instance();
        let cl = classify(&rep, &tol()).unwrap();
        let mut rng = SeededRng::new(11);
        for _ in 0..3 {
            let n = rng.complex_vec(cl.decomposition.simple_dim());
            let c = cl.thin_g(&n, &tol()).unwrap();
            assert_eq!(is_thin(&rep, &c, &tol()), brute_force_is_thin(&rep, &c, &b, &tol()).unwrap());
            assert!(is_thin(&rep, &c, &tol()));
        }
    }

    #[test]
    fn cyclic_example_has_one_thin_covering() {
        let b = OracleBudget::default();
        let cyc = cyclic_m2();
        let found = enumerate_thin_coverings(&cyc, &b, &tol()).unwrap();
        assert_eq!(found.len(), 1);
        let eig = orbit_covering(&cyc, &e(2, 0), &tol()).unwrap();
        assert!(equivalent(&found[0], &eig, &tol()).is_some());
    }

    #[test]
    fn density_shadow() {
        let t = tol();
        assert!(quasifinite_density_check(&[clock_shift(2)], &t));
        assert!(quasifinite_density_check(&[group_algebra_character(2, 0), group_algebra_character(2, 1)], &t));
        let m = group_algebra_character(4, 1);
        let tau = m.group().character(&[1]).unwrap();
        assert!(quasifinite_density_check(&[m.clone(), twist(&m, &tau).unwrap()], &t));
        // isomorphic copies cannot be separated
        assert!(!quasifinite_density_check(&[m.clone(), m], &t));
        assert!(!quasifinite_density_check(&[], &t));
    }
}
