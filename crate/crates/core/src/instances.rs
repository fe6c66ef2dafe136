//! Ready-made graded algebras and modules used by tests, examples and the CLI.

use crate::algebra::{GradedAlgebra, LieAlgebra, Rep};
use crate::group::{FinAbGroup, GrpElt};
use crate::linalg::{column_space, inverse, joint_eigenspaces};
use crate::matrix::ComplexMatrix;
use crate::scalars::{RootOfUnity, Tolerance, C64, ONE, ZERO};
use alloc::vec;
use alloc::vec::Vec;

fn group(f: &[u64]) -> FinAbGroup {
    FinAbGroup::new(f.to_vec()).expect("positive factors")
}

/// `diag(1, zeta_n, ..., zeta_n^{n-1})`.
pub fn clock_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::diag(&(0..n).map(|k| RootOfUnity::new(n as u64, k as i64).value()).collect::<Vec<_>>())
}

/// Cyclic shift `e_k -> e_{k+1}`.
pub fn shift_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { ZERO })
}

/// `M_n` with basis `E^a F^b` (clock `E`, shift `F`) graded by `Z_n x Z_n`,
/// acting on `C^n`. Basis index `a n + b`, degree `(a, b)`.
pub fn clock_shift(n: usize) -> Rep {
    let g = group(&[n as u64, n as u64]);
    let (e, f) = (clock_matrix(n), shift_matrix(n));
    let d = n * n;
    let mut structure = vec![ZERO; d * d * d];
    let mut mats = Vec::with_capacity(d);
    let mut grading = Vec::with_capacity(d);
    for a in 0..n {
        for b in 0..n {
            mats.push(e.pow(a as u64).mul(&f.pow(b as u64)));
            grading.push(GrpElt(vec![a as u64, b as u64]));
            for c in 0..n {
                for dd in 0..n {
                    // F^b E^c = zeta^{-bc} E^c F^b
                    let k = ((a + c) % n) * n + (b + dd) % n;
                    structure[((a * n + b) * d + c * n + dd) * d + k] = RootOfUnity::new(n as u64, -((b * c) as i64)).value();
                }
            }
        }
    }
    let mut unit = vec![ZERO; d];
    unit[0] = ONE;
    let alg = GradedAlgebra::new(g, d, structure, unit, grading).expect("consistent shapes");
    Rep::new(alg, mats).expect("consistent shapes")
}

fn unit_matrix(n: usize, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |r, c| if r == i && c == j { ONE } else { ZERO })
}

/// `M_2` graded by `Z_2` through conjugation by `diag(1, -1)`: diagonal units in
/// degree 0, off-diagonal units in degree 1.
pub fn cyclic_m2() -> Rep {
    let g = group(&[2]);
    let mats = [unit_matrix(2, 0, 0), unit_matrix(2, 1, 1), unit_matrix(2, 0, 1), unit_matrix(2, 1, 0)];
    let deg = [GrpElt(vec![0]), GrpElt(vec![0]), GrpElt(vec![1]), GrpElt(vec![1])];
    GradedAlgebra::from_matrix_basis(&g, &mats, &deg, &Tolerance::default()).expect("closed basis")
}

/// `C[Z_n]` acting on `C` through the character `g -> zeta_n^{k g}`.
pub fn group_algebra_character(n: u64, k: i64) -> Rep {
    let g = group(&[n]);
    let alg = GradedAlgebra::group_algebra(&g);
    let action = (0..n).map(|x| ComplexMatrix::scalar(1, RootOfUnity::new(n, k * x as i64).value())).collect();
    Rep::new(alg, action).expect("consistent shapes")
}

/// `M_2 (x) C[Z_2]` graded by `Z_2 x Z_2` on `C^2`, the group-algebra factor
/// acting trivially. Twisting by the second factor changes the module, so only
/// half of the dual group stabilizes it.
pub fn restricted_stabilizer_instance() -> Rep {
    cyclic_m2().tensor(&group_algebra_character(2, 0))
}

/// Full matrix algebra on `C^n` graded by the joint eigenspaces of conjugation
/// by commuting-up-to-scalar operators `T_i` with `T_i^{s_i}` scalar.
pub fn inner_graded(ops: &[ComplexMatrix], orders: &[u64]) -> Rep {
    let tol = Tolerance::default();
    let n = ops[0].rows();
    let g = group(orders);
    let supers: Vec<ComplexMatrix> = ops.iter().map(|t| inverse(t).expect("invertible").transpose().kron(t)).collect();
    let spaces = joint_eigenspaces(&supers, orders, &ComplexMatrix::identity(n * n), &tol).expect("finite order conjugation");
    let mut mats = Vec::new();
    let mut deg = Vec::new();
    for (label, q) in spaces {
        let d: Vec<u64> = label.iter().zip(orders).map(|(z, &s)| z.exponent_over(s).expect("eigenvalue order divides s")).collect();
        let q = column_space(&q, &tol);
        for v in q.columns() {
            mats.push(ComplexMatrix::unvec(&v, n, n));
            deg.push(GrpElt(d.clone()));
        }
    }
    GradedAlgebra::from_matrix_basis(&g, &mats, &deg, &tol).expect("inner grading is closed")
}

/// `M_4 = End(C^2 (x) C^2)` graded by `Z_2 x Z_2` through `X (x) I`, `Y (x) I`
/// with the Pauli `X, Y`; the simple torus module has multiplicity two.
pub fn doubled_pauli_instance() -> Rep {
    let (x, y) = (clock_matrix(2), shift_matrix(2));
    let i2 = ComplexMatrix::identity(2);
    inner_graded(&[x.kron(&i2), y.kron(&i2)], &[2, 2])
}

/// `M_4` graded by `Z_4 x Z_2` through `X (x) diag(1, i)` and `Y (x) I`; the
/// module splits into two torus-isotypic pieces with different labels.
pub fn labelled_pauli_instance() -> Rep {
    let (x, y) = (clock_matrix(2), shift_matrix(2));
    let twist = ComplexMatrix::diag(&[ONE, C64::new(0.0, 1.0)]);
    inner_graded(&[x.kron(&twist), y.kron(&ComplexMatrix::identity(2))], &[4, 2])
}

/// `sl_2` in the Chevalley-type `Z_2` grading: `e - f` in degree 0, `e + f`
/// and `h` in degree 1, with the natural module.
pub fn sl2_chevalley() -> (LieAlgebra, Vec<ComplexMatrix>) {
    let g = group(&[2]);
    let u = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    let v = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let h = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]);
    LieAlgebra::from_matrices(&g, &[u, v, h], &[GrpElt(vec![0]), GrpElt(vec![1]), GrpElt(vec![1])], &Tolerance::default())
        .expect("sl2 is closed")
}

/// `gl_2` with the Pauli `Z_2 x Z_2` grading: `I, E, F, EF` for `E = diag(1,-1)`, `F` the swap.
pub fn gl2_pauli() -> (LieAlgebra, Vec<ComplexMatrix>) {
    let g = group(&[2, 2]);
    let e = clock_matrix(2);
    let f = shift_matrix(2);
    let mats = [ComplexMatrix::identity(2), e.clone(), f.clone(), e.mul(&f)];
    let deg = [GrpElt(vec![0, 0]), GrpElt(vec![1, 0]), GrpElt(vec![0, 1]), GrpElt(vec![1, 1])];
    LieAlgebra::from_matrices(&g, &mats, &deg, &Tolerance::default()).expect("gl2 is closed")
}

/// One-dimensional abelian Lie algebra spanned by `diag(1, -1)` in degree 1 of `Z_2`.
pub fn abelian_sign_lie() -> (LieAlgebra, Vec<ComplexMatrix>) {
    let g = group(&[2]);
    let h = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]);
    LieAlgebra::from_matrices(&g, &[h], &[GrpElt(vec![1])], &Tolerance::default()).expect("closed")
}
