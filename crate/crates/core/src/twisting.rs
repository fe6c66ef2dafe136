//! Twisting modules by characters of the grading group, the stabilizer of a
//! simple module and its normalized twist operators.

use crate::algebra::{is_simple, Rep};
use crate::covering::GradedModule;
use crate::error::{Error, Result};
use crate::group::{character_value, psi_restrict, subgroup_from_generators, Character, FinAbGroup, GrpElt, Subgroup};
use crate::linalg::intertwiners;
use crate::matrix::ComplexMatrix;
use crate::scalars::{principal_root, Tolerance, C64};
use alloc::format;
use alloc::vec::Vec;

/// `M^sigma`: basis elements of degree `g` act by `sigma(g) rho(a)`.
pub fn twist(rep: &Rep, sigma: &Character) -> Result<Rep> {
    if sigma.group() != rep.group() {
        return Err(Error::GroupMismatch);
    }
    let alg = rep.algebra();
    let action = (0..alg.dim())
        .map(|i| Ok(rep.action()[i].scale(character_value(sigma, alg.degree(i))?.value())))
        .collect::<Result<Vec<_>>>()?;
    rep.with_action(action)
}

/// Basis of the intertwiners `T` with `T rho(a) = rho^sigma(a) T`.
pub fn twist_intertwiners(rep: &Rep, sigma: &Character, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    intertwiners_between(rep, &twist(rep, sigma)?, tol)
}

/// Basis of `Hom_A(M, M')` for two modules over the same algebra.
pub fn intertwiners_between(a: &Rep, b: &Rep, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    if a.algebra() != b.algebra() {
        return Err(Error::GroupMismatch);
    }
    let pairs: Vec<(&ComplexMatrix, &ComplexMatrix)> = a.action().iter().zip(b.action()).collect();
    Ok(intertwiners(&pairs, b.module_dim(), a.module_dim(), tol))
}

/// `T' = lambda^{-1/m} T` for `T^m = lambda I`, with the principal root.
pub fn normalize(t: &ComplexMatrix, m: u64, tol: &Tolerance) -> Result<(ComplexMatrix, C64)> {
    if !t.is_square() || m == 0 {
        return Err(Error::NotScalarPower);
    }
    let p = t.pow(m);
    let (lambda, off) = p.scalar_part();
    if lambda.norm() == 0.0 || !tol.accepts(off, p.norm()) {
        return Err(Error::NotScalarPower);
    }
    Ok((t.scale(principal_root(lambda, m).inv()), lambda))
}

/// Stabilizer of a simple module inside the dual group, with one normalized
/// intertwiner per Smith generator.
#[derive(Clone, Debug)]
pub struct TwistSystem {
    pub subgroup: Subgroup,
    /// `T_j` for the basis character `eta_j`, normalized to `T_j^{s_j} = I`.
    pub operators: Vec<ComplexMatrix>,
    /// `lambda_j` with `T_j^{s_j} = lambda_j I` before normalization.
    pub scalars: Vec<C64>,
    /// Intertwiner dimension for every character, in enumeration order.
    pub intertwiner_dims: Vec<(GrpElt, usize)>,
}

impl TwistSystem {
    pub fn generators(&self) -> &[GrpElt] {
        self.subgroup.basis()
    }

    pub fn orders(&self) -> &[u64] {
        self.subgroup.basis_orders()
    }

    pub fn rank(&self) -> usize {
        self.operators.len()
    }

    /// `H`, the character group of the stabilizer.
    pub fn h_group(&self) -> FinAbGroup {
        self.subgroup.intrinsic_group()
    }

    /// `psi(g)`: `g` read as a character of the dual group, restricted to the stabilizer.
    pub fn psi(&self, g: &GrpElt) -> Result<GrpElt> {
        let chi = self.subgroup.ambient().character(&g.0.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
        Ok(psi_restrict(&chi, &self.subgroup)?.as_element())
    }

    /// The same module with the algebra regraded by `psi`.
    pub fn regrade(&self, rep: &Rep) -> Result<Rep> {
        let h = self.h_group();
        for g in rep.group().elements() {
            self.psi(&g)?;
        }
        Ok(rep.regrade(&h, |g| self.psi(g).expect("checked above")))
    }
}

/// Enumerates every character and keeps those whose twist is isomorphic to the
/// module. `bound` caps the size of the dual group.
pub fn stabilizer(rep: &Rep, bound: u64, tol: &Tolerance) -> Result<TwistSystem> {
    if !is_simple(rep, tol) {
        return Err(Error::NotSimple);
    }
    let g = rep.group();
    if g.order() > bound {
        return Err(Error::BudgetExceeded(format!("dual group of order {} exceeds {bound}", g.order())));
    }
    let mut dims = Vec::new();
    let mut members = Vec::new();
    for sigma in g.characters() {
        let k = twist_intertwiners(rep, &sigma, tol)?.len();
        if k > 1 {
            return Err(Error::NotSimple);
        }
        if k == 1 {
            members.push(sigma.as_element());
        }
        dims.push((sigma.as_element(), k));
    }
    let subgroup = subgroup_from_generators(g, &members)?;
    let mut operators = Vec::new();
    let mut scalars = Vec::new();
    for (eta, &s) in subgroup.basis().iter().zip(subgroup.basis_orders()) {
        let sigma = g.character(&eta.0.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
        let t = twist_intertwiners(rep, &sigma, tol)?.into_iter().next().ok_or(Error::NotSimple)?;
        let (t, lambda) = normalize(&t, s, tol)?;
        operators.push(t);
        scalars.push(lambda);
    }
    Ok(TwistSystem { subgroup, operators, scalars, intertwiner_dims: dims })
}

/// Largest residual of `T rho(a) T^{-1} = rho^eta(a)` and `T^s = I` over the system.
pub fn twist_system_residual(rep: &Rep, sys: &TwistSystem) -> Result<f64> {
    let g = rep.group();
    let mut worst: f64 = 0.0;
    for ((t, eta), &s) in sys.operators.iter().zip(sys.generators()).zip(sys.orders()) {
        let sigma = g.character(&eta.0.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
        let tw = twist(rep, &sigma)?;
        for (a, b) in rep.action().iter().zip(tw.action()) {
            worst = worst.max(t.mul(a).distance(&b.mul(t)));
        }
        worst = worst.max(t.pow(s).distance(&ComplexMatrix::identity(t.rows())));
    }
    Ok(worst)
}

/// `theta(m) = sigma(g) m` on the degree-`g` component, checked to be an
/// isomorphism `M -> M^sigma` of graded modules.
pub fn is_graded_module_selfequivalent(gm: &GradedModule, sigma: &Character, tol: &Tolerance) -> Result<ComplexMatrix> {
    let rep = gm.rep();
    if sigma.group() != rep.group() {
        return Err(Error::GroupMismatch);
    }
    let mut diag = Vec::with_capacity(gm.total_dim());
    for (g, d) in gm.components() {
        let v = character_value(sigma, g)?.value();
        diag.extend(core::iter::repeat_n(v, *d));
    }
    let theta = ComplexMatrix::diag(&diag);
    let tw = twist(rep, sigma)?;
    let residual = rep.action().iter().zip(tw.action()).map(|(a, b)| theta.mul(a).distance(&b.mul(&theta))).fold(0.0, f64::max);
    let scale = rep.action().iter().map(ComplexMatrix::norm).fold(1.0, f64::max);
    if !tol.accepts(residual, scale) {
        return Err(Error::GradingInvalid(format!("twist isomorphism residual {residual:e}")));
    }
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate;
    use crate::instances::{clock_matrix, clock_shift, group_algebra_character, restricted_stabilizer_instance, shift_matrix};
    use crate::scalars::{RootOfUnity, ONE};
    use alloc::vec;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn twist_examples() {
        let rep = group_algebra_character(2, 0);
        let g = rep.group().clone();
        assert_eq!(twist(&rep, &g.trivial_character()).unwrap(), rep);
        let sigma = g.character(&[1]).unwrap();
        let tw = twist(&rep, &sigma).unwrap();
        assert!((tw.action()[1][(0, 0)] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(twist(&tw, &sigma).unwrap().action(), rep.action());
        assert!(validate(&tw, &tol()).pass());
        let other = FinAbGroup::new(vec![3]).unwrap().character(&[1]).unwrap();
        assert_eq!(twist(&rep, &other), Err(Error::GroupMismatch));
    }

    #[test]
    fn pauli_stabilizer_is_everything() {
        let rep = clock_shift(2);
        let sys = stabilizer(&rep, 256, &tol()).unwrap();
        assert!(sys.subgroup.is_whole());
        assert_eq!(sys.rank(), 2);
        assert!(sys.intertwiner_dims.iter().all(|(_, k)| *k == 1));
        assert!(twist_system_residual(&rep, &sys).unwrap() < 1e-9);
        // each operator is proportional to E or F
        let (e, f) = (clock_matrix(2), shift_matrix(2));
        for t in &sys.operators {
            let prop = |m: &ComplexMatrix| {
                let c = crate::matrix::dot(&m.vec(), &t.vec()) / C64::new(2.0, 0.0);
                m.scale(c).distance(t) < 1e-9
            };
            assert!(prop(&e) || prop(&f) || prop(&e.mul(&f)));
        }
    }

    #[test]
    fn cyclic_group_algebra_has_trivial_stabilizer() {
        let rep = group_algebra_character(4, 1);
        let sys = stabilizer(&rep, 256, &tol()).unwrap();
        assert_eq!(sys.subgroup.order(), 1);
        assert_eq!(sys.rank(), 0);
        assert_eq!(sys.h_group().order(), 1);
        for g in rep.group().elements() {
            assert_eq!(sys.psi(&g).unwrap(), GrpElt(Vec::new()));
        }
        let regraded = sys.regrade(&rep).unwrap();
        assert_eq!(regraded.group().order(), 1);
    }

    #[test]
    fn trivial_group_gives_empty_system() {
        let rep = group_algebra_character(1, 0);
        let sys = stabilizer(&rep, 256, &tol()).unwrap();
        assert_eq!(sys.rank(), 0);
        assert_eq!(sys.intertwiner_dims.len(), 1);
    }

    #[test]
    fn proper_stabilizer() {
        let rep = restricted_stabilizer_instance();
        let sys = stabilizer(&rep, 256, &tol()).unwrap();
        assert_eq!(sys.subgroup.order(), 2);
        assert!(sys.subgroup.contains(&GrpElt(vec![1, 0])));
        assert!(!sys.subgroup.contains(&GrpElt(vec![0, 1])));
        assert_eq!(sys.psi(&GrpElt(vec![1, 1])).unwrap(), GrpElt(vec![1]));
        assert_eq!(sys.psi(&GrpElt(vec![0, 1])).unwrap(), GrpElt(vec![0]));
        assert!(twist_system_residual(&rep, &sys).unwrap() < 1e-9);
    }

    #[test]
    fn stabilizer_rejects_non_simple_and_budget() {
        let rep = clock_shift(2);
        let sum = rep.with_action(rep.action().iter().map(|m| ComplexMatrix::block_diag(&[m.clone(), m.clone()])).collect()).unwrap();
        assert_eq!(stabilizer(&sum, 256, &tol()).unwrap_err(), Error::NotSimple);
        assert!(matches!(stabilizer(&clock_shift(3), 8, &tol()), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn normalize_examples() {
        let t = ComplexMatrix::diag(&[ONE, C64::new(-1.0, 0.0)]);
        let (n, l) = normalize(&t, 2, &tol()).unwrap();
        assert!(n.distance(&t) < 1e-15 && (l - ONE).norm() < 1e-15);

        let t = ComplexMatrix::scalar(2, C64::new(2.0, 0.0));
        let (n, l) = normalize(&t, 3, &tol()).unwrap();
        assert!(n.distance(&ComplexMatrix::identity(2)) < 1e-12 && (l - C64::new(8.0, 0.0)).norm() < 1e-12);

        let i = RootOfUnity::new(4, 1).value();
        let t = ComplexMatrix::from_rows(&[vec![C64::new(0.0, 0.0), ONE], vec![i, C64::new(0.0, 0.0)]]).unwrap();
        let (n, l) = normalize(&t, 2, &tol()).unwrap();
        assert!((l - i).norm() < 1e-15);
        assert!(n.distance(&t.scale(RootOfUnity::new(8, -1).value())) < 1e-12);
        assert!(n.pow(2).distance(&ComplexMatrix::identity(2)) < 1e-12);

        let nilp = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(normalize(&nilp, 2, &tol()), Err(Error::NotScalarPower));
        assert_eq!(normalize(&ComplexMatrix::diag(&[ONE, C64::new(2.0, 0.0)]), 2, &tol()), Err(Error::NotScalarPower));
    }

    /// Schur and the coset criterion: `M^s1 ~ M^s2` exactly when `s1 - s2` stabilizes `M`.
    #[test]
    fn coset_criterion_exhaustive() {
        for rep in [clock_shift(2), restricted_stabilizer_instance(), group_algebra_character(4, 1), clock_shift(3)] {
            let sys = stabilizer(&rep, 256, &tol()).unwrap();
            let g = rep.group().clone();
            let chars = g.characters();
            for s1 in &chars {
                let r1 = twist(&rep, s1).unwrap();
                for s2 in &chars {
                    let r2 = twist(&rep, s2).unwrap();
                    let k = intertwiners_between(&r1, &r2, &tol()).unwrap().len();
                    let diff = g.sub(&s1.as_element(), &s2.as_element());
                    assert_eq!(k == 1, sys.subgroup.contains(&diff));
                    assert!(k <= 1);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn twists_compose(a in 0i64..3, b in 0i64..3, c in 0i64..3, d in 0i64..3) {
            let rep = clock_shift(3);
            let g = rep.group().clone();
            let s = g.character(&[a, b]).unwrap();
            let t = g.character(&[c, d]).unwrap();
            let lhs = twist(&twist(&rep, &s).unwrap(), &t).unwrap();
            let rhs = twist(&rep, &s.mul(&t)).unwrap();
            for (x, y) in lhs.action().iter().zip(rhs.action()) {
                prop_assert!(x.distance(y) < 1e-12);
            }
        }

        #[test]
        fn normalized_power_is_identity(re in -2.0f64..2.0, im in -2.0f64..2.0, m in 1u64..6) {
            prop_assume!(re.abs() + im.abs() > 0.1);
            let z = C64::new(re, im);
            let t = ComplexMatrix::diag(&[ONE, RootOfUnity::new(m, 1).value()]).scale(principal_root(z, m));
            let (n, l) = normalize(&t, m, &tol()).unwrap();
            prop_assert!(n.pow(m).distance(&ComplexMatrix::identity(2)) <= 10.0 * 1e-9);
            prop_assert!((l - z).norm() < 1e-9 * (1.0 + l.norm()));
        }
    }
}
