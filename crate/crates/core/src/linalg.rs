//! Numerical linear algebra: SVD-based rank and kernels, LU inverse, eigenvalues,
//! intertwiner spaces and spectral projections of finite-order matrices.

use crate::error::{Error, Result};
use crate::matrix::{dot, vec_norm, ComplexMatrix};
use crate::rng::SeededRng;
use crate::scalars::{RootOfUnity, Tolerance, C64, ONE, ZERO};
use alloc::vec;
use alloc::vec::Vec;

/// Thin singular value decomposition `A = U diag(s) V^*`, values descending.
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Upper-triangular factor of a Householder QR; `min(m, n)` rows.
pub fn qr_r(a: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut cols = a.columns();
    let steps = m.min(n);
    for k in 0..steps {
        let norm = vec_norm(&cols[k][k..]);
        if norm == 0.0 {
            continue;
        }
        let x0 = cols[k][k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        for col in cols.iter_mut().skip(k) {
            let s = dot(&v, &col[k..]) * (2.0 / vv);
            for (c, vi) in col[k..].iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
        cols[k][k] = alpha;
        for z in cols[k][k + 1..].iter_mut() {
            *z = ZERO;
        }
    }
    ComplexMatrix::from_fn(steps, n, |i, j| if i <= j { cols[j][i] } else { ZERO })
}

/// One-sided Jacobi on the columns of `a`; returns `(W, V)` with `W = A V`,
/// `V` unitary and the columns of `W` mutually orthogonal.
fn jacobi_columns(a: &ComplexMatrix) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
    let n = a.cols();
    let mut w = a.columns();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();
    let mut norms: Vec<f64> = w.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g <= 1e-15 * libm::sqrt(alpha * beta) || g < 1e-300 {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 { 1.0 } else { -1.0 } / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let ec = e.conj();
                rotate_pair(&mut w, p, q, c, s, ec);
                rotate_pair(&mut v, p, q, c, s, ec);
                norms[p] = w[p].iter().map(|z| z.norm_sqr()).sum();
                norms[q] = w[q].iter().map(|z| z.norm_sqr()).sum();
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, ec: C64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = ec * *y;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let reduced = if m > n { qr_r(a) } else { a.clone() };
    let (w, v) = jacobi_columns(&reduced);
    let mut order: Vec<(f64, usize)> = w.iter().enumerate().map(|(j, c)| (vec_norm(c), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let s: Vec<f64> = order.iter().map(|o| o.0).collect();
    let vcols: Vec<Vec<C64>> = order.iter().map(|o| v[o.1].clone()).collect();
    let vm = ComplexMatrix::from_columns(n, &vcols);
    let av = a.mul(&vm);
    let u = ComplexMatrix::from_fn(m, n, |i, j| if s[j] > 0.0 { av[(i, j)] / s[j] } else { ZERO });
    Svd { u, s, v: vm }
}

fn threshold(s: &[f64], tol: &Tolerance) -> f64 {
    tol.eps * s.iter().cloned().fold(0.0, f64::max)
}

/// Orthonormal basis (as columns) of the column span of `a`.
pub fn column_space(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    if a.cols() == 0 || a.rows() == 0 {
        return ComplexMatrix::zeros(a.rows(), 0);
    }
    let d = svd(a);
    let th = threshold(&d.s, tol);
    let keep: Vec<usize> = (0..d.s.len()).filter(|&j| d.s[j] > th && d.s[j] > 0.0).collect();
    d.u.select_columns(&keep)
}

pub fn rank(a: &ComplexMatrix, tol: &Tolerance) -> usize {
    column_space(a, tol).cols()
}

/// Orthonormal basis of the null space `{x : A x = 0}`.
pub fn kernel(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    kernel_scaled(a, tol, 0.0)
}

/// Null space with singular values below `eps * max(sigma_max, scale)` treated
/// as zero; `scale` guards systems that cancel to roundoff.
pub fn kernel_scaled(a: &ComplexMatrix, tol: &Tolerance, scale: f64) -> ComplexMatrix {
    let n = a.cols();
    if a.rows() == 0 || n == 0 {
        return ComplexMatrix::identity(n);
    }
    let reduced = if a.rows() > n { qr_r(a) } else { a.clone() };
    let (w, v) = jacobi_columns(&reduced);
    let s: Vec<f64> = w.iter().map(|c| vec_norm(c)).collect();
    let th = threshold(&s, tol).max(tol.eps * scale);
    let keep: Vec<Vec<C64>> = (0..n).filter(|&j| s[j] <= th).map(|j| v[j].clone()).collect();
    ComplexMatrix::from_columns(n, &keep)
}

/// LU with partial pivoting; `Singular` when a pivot vanishes relative to the matrix scale.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::DimensionMismatch("solve needs a square system".into()));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm())).unwrap();
        if lu[(p, k)].norm() <= 1e-13 * scale {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            for j in 0..x.cols() {
                let t = x[(k, j)];
                x[(k, j)] = x[(p, j)];
                x[(p, j)] = t;
            }
        }
        let piv = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / piv;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..x.cols() {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        for j in 0..x.cols() {
            let mut acc = x[(k, j)];
            for l in k + 1..n {
                acc -= lu[(k, l)] * x[(l, j)];
            }
            x[(k, j)] = acc / lu[(k, k)];
        }
    }
    Ok(x)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(a, &ComplexMatrix::identity(a.rows()))
}

/// Minimum-norm least-squares solution of `A X = B` through the SVD.
pub fn least_squares(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let d = svd(a);
    let th = threshold(&d.s, tol);
    let uh_b = d.u.adjoint().mul(b);
    let scaled = ComplexMatrix::from_fn(uh_b.rows(), uh_b.cols(), |i, j| {
        if d.s[i] > th && d.s[i] > 0.0 {
            uh_b[(i, j)] / d.s[i]
        } else {
            ZERO
        }
    });
    d.v.mul(&scaled)
}

fn householder_vector(x: &[C64]) -> Option<(Vec<C64>, f64)> {
    let norm = vec_norm(x);
    if norm == 0.0 {
        return None;
    }
    let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
    let mut v = x.to_vec();
    v[0] += phase * norm;
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (vv > 0.0).then_some((v, vv))
}

/// Eigenvalues by Hessenberg reduction and Wilkinson-shifted QR sweeps.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let Some((v, vv)) = householder_vector(&x) else { continue };
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum::<C64>() * (2.0 / vv);
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= s * vi;
            }
        }
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(j, vj)| h[(i, k + 1 + j)] * vj).sum::<C64>() * (2.0 / vv);
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= s * vj.conj();
            }
        }
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0usize;
    while hi > 0 {
        let top = hi - 1;
        let mut l = top;
        while l > 0 {
            let off = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if off <= f64::EPSILON * if diag > 0.0 { diag } else { scale } {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == top {
            eig.push(h[(top, top)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 200 * n {
            return Err(Error::NoConvergence);
        }
        let (p, q, r, s) = (h[(top - 1, top - 1)], h[(top - 1, top)], h[(top, top - 1)], h[(top, top)]);
        let mut mu = if iter % 11 == 10 {
            s + h[(top, top - 1)].norm()
        } else {
            let half = (p - s) * 0.5;
            let disc = (half * half + q * r).sqrt();
            let m1 = (p + s) * 0.5 + disc;
            let m2 = (p + s) * 0.5 - disc;
            if (m1 - s).norm() < (m2 - s).norm() {
                m1
            } else {
                m2
            }
        };
        if !mu.re.is_finite() || !mu.im.is_finite() {
            mu = s;
        }
        for i in l..=top {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(top - l);
        for k in l..top {
            let (x, y) = (h[(k, k)], h[(k + 1, k)]);
            let r = libm::sqrt(x.norm_sqr() + y.norm_sqr());
            let (c, sn) = if r == 0.0 {
                (1.0, ZERO)
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / y.norm())
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for j in k..=top {
                let (a1, a2) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = a1 * c + sn * a2;
                h[(k + 1, j)] = -sn.conj() * a1 + a2 * c;
            }
            rots.push((c, sn));
        }
        for (idx, &(c, sn)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 2).min(top) {
                let (a1, a2) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = a1 * c + sn.conj() * a2;
                h[(i, k + 1)] = -sn * a1 + a2 * c;
            }
        }
        for i in l..=top {
            h[(i, i)] += mu;
        }
    }
    eig.reverse();
    Ok(eig)
}

fn sylvester_system(pairs: &[(&ComplexMatrix, &ComplexMatrix)], q: usize, p: usize) -> ComplexMatrix {
    // vec(T A - B T) for T of shape q x p, column-major vec index i + q j
    let n = q * p;
    let mut sys = ComplexMatrix::zeros(pairs.len() * n, n);
    for (k, (a, b)) in pairs.iter().enumerate() {
        let r0 = k * n;
        for j in 0..p {
            for i in 0..q {
                let row = r0 + i + q * j;
                for l in 0..p {
                    sys[(row, i + q * l)] += a[(l, j)];
                }
                for l in 0..q {
                    sys[(row, l + q * j)] -= b[(i, l)];
                }
            }
        }
    }
    sys
}

/// Basis of `{T : T A_k = B_k T for all k}` with `A_k` p x p and `B_k` q x q.
///
/// Two seeded random combinations of the pairs cut the space down first; the
/// full system is then solved on that smaller space.
pub fn intertwiners(pairs: &[(&ComplexMatrix, &ComplexMatrix)], q: usize, p: usize, tol: &Tolerance) -> Vec<ComplexMatrix> {
    for (a, b) in pairs {
        assert!(a.rows() == p && a.cols() == p && b.rows() == q && b.cols() == q, "intertwiner shapes");
    }
    let n = q * p;
    if n == 0 {
        return Vec::new();
    }
    let scale = pairs.iter().map(|(a, b)| a.norm() + b.norm()).fold(0.0, f64::max);
    let candidate = if pairs.len() > 2 {
        let mut rng = SeededRng::new(0x5eed_1e57);
        let mut combos = Vec::new();
        for _ in 0..2 {
            let mut ca = ComplexMatrix::zeros(p, p);
            let mut cb = ComplexMatrix::zeros(q, q);
            for (a, b) in pairs {
                let c = rng.complex();
                ca.axpy(c, a);
                cb.axpy(c, b);
            }
            combos.push((ca, cb));
        }
        let refs: Vec<(&ComplexMatrix, &ComplexMatrix)> = combos.iter().map(|(a, b)| (a, b)).collect();
        kernel_scaled(&sylvester_system(&refs, q, p), tol, scale)
    } else if pairs.is_empty() {
        ComplexMatrix::identity(n)
    } else {
        kernel_scaled(&sylvester_system(pairs, q, p), tol, scale)
    };
    let reduced = if pairs.len() > 2 && candidate.cols() > 0 {
        let full = sylvester_system(pairs, q, p);
        let img = full.mul(&candidate);
        let coeffs = kernel_scaled(&img, tol, scale);
        column_space(&candidate.mul(&coeffs), tol)
    } else {
        candidate
    };
    reduced.columns().iter().map(|v| ComplexMatrix::unvec(v, q, p)).collect()
}

/// Solutions of `T A_k = B_k T` for square systems of a common size.
pub fn solve_sylvester_family(a: &[ComplexMatrix], b: &[ComplexMatrix], tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch("families of different length".into()));
    }
    let p = a.first().map_or(0, ComplexMatrix::rows);
    let q = b.first().map_or(0, ComplexMatrix::rows);
    if a.iter().any(|m| m.rows() != p || !m.is_square()) || b.iter().any(|m| m.rows() != q || !m.is_square()) {
        return Err(Error::DimensionMismatch("family members differ in size".into()));
    }
    let pairs: Vec<_> = a.iter().zip(b).collect();
    Ok(intertwiners(&pairs, q, p, tol))
}

/// Spectral projections of a matrix with `T^m = I`: `P_k = (1/m) sum_j zeta_m^{-jk} T^j`.
/// Only nonzero projections are returned, keyed by their eigenvalue.
pub fn finite_order_eigendecomposition(t: &ComplexMatrix, m: u64, tol: &Tolerance) -> Result<Vec<(RootOfUnity, ComplexMatrix)>> {
    let n = t.rows();
    if !t.is_square() || m == 0 {
        return Err(Error::NotFiniteOrder);
    }
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = ComplexMatrix::identity(n);
    for _ in 0..m {
        let next = cur.mul(t);
        powers.push(cur);
        cur = next;
    }
    let id = ComplexMatrix::identity(n);
    if !tol.accepts(cur.distance(&id), libm::sqrt(n as f64)) {
        return Err(Error::NotFiniteOrder);
    }
    let mut out = Vec::new();
    for k in 0..m {
        let mut p = ComplexMatrix::zeros(n, n);
        for (j, pw) in powers.iter().enumerate() {
            let c = RootOfUnity::new(m, -((j as u64 * k % m) as i64)).value();
            p.axpy(c, pw);
        }
        let p = p.scale_real(1.0 / m as f64);
        if p.norm() > 0.5 {
            out.push((RootOfUnity::new(m, k as i64), p));
        }
    }
    Ok(out)
}

/// Simultaneous eigenspaces of commuting finite-order operators, restricted to
/// the span of `basis` (orthonormal columns, invariant under every operator).
/// Returned sorted by the tuple of eigenvalues.
pub fn joint_eigenspaces(
    ops: &[ComplexMatrix],
    orders: &[u64],
    basis: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<Vec<(Vec<RootOfUnity>, ComplexMatrix)>> {
    let mut spaces = vec![(Vec::new(), basis.clone())];
    for (op, &m) in ops.iter().zip(orders) {
        let mut next = Vec::new();
        for (label, q) in spaces {
            let restricted = q.adjoint().mul(op).mul(&q);
            for (z, p) in finite_order_eigendecomposition(&restricted, m, tol)? {
                let sub = column_space(&p, tol);
                if sub.cols() == 0 {
                    continue;
                }
                let mut l: Vec<RootOfUnity> = label.clone();
                l.push(z);
                next.push((l, q.mul(&sub)));
            }
        }
        spaces = next;
    }
    spaces.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(spaces)
}

/// Residual of projecting the columns of `x` onto the span of orthonormal `q`.
pub fn projection_residual(q: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    x.distance(&q.mul(&q.adjoint().mul(x)))
}

/// True when every column of `x` lies in the span of orthonormal `q`.
pub fn span_contains(q: &ComplexMatrix, x: &ComplexMatrix, tol: &Tolerance) -> bool {
    tol.accepts(projection_residual(q, x), x.norm())
}

/// Equality of column spans.
pub fn same_span(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> bool {
    let qa = column_space(a, tol);
    let qb = column_space(b, tol);
    qa.cols() == qb.cols() && span_contains(&qa, &qb, tol) && span_contains(&qb, &qa, tol)
}

/// Matrix whose columns are `vec(M)` for each `M`.
pub fn vec_columns(ms: &[ComplexMatrix], rows: usize) -> ComplexMatrix {
    let cols: Vec<Vec<C64>> = ms.iter().map(ComplexMatrix::vec).collect();
    ComplexMatrix::from_columns(rows, &cols)
}
