//! Eigenvalues of complex matrices.
//!
//! The discretized Hamiltonians are complex *symmetric* tridiagonal
//! matrices (`Aᵀ = A`, not Hermitian). Those are handled by an implicit QL
//! iteration with complex orthogonal rotations (`c² + s² = 1`), which costs
//! O(n²). Complex orthogonal rotations can break down on isotropic vectors
//! (`f² + g² ≈ 0`); when that happens the solver falls back to a dense
//! shifted QR iteration on the Hessenberg form, which is also exposed for
//! general matrices.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative size of `|f² + g²|^{1/2}` below which a rotation is refused.
const BREAKDOWN: f64 = 1e-6;
const QL_SWEEPS: usize = 60;

/// Which algorithm produced a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    SymmetricQl,
    DenseQr,
}

enum QlFailure {
    Breakdown,
    Stalled(Error),
}

/// Eigenvalues of the complex symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off.len() == diag.len() − 1`).
pub fn symmetric_tridiagonal_eigenvalues(diag: &[Complex64], off: &[Complex64]) -> Result<(Vec<Complex64>, Solver)> {
    assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length mismatch");
    match tql(diag, off) {
        Ok(values) => Ok((values, Solver::SymmetricQl)),
        Err(QlFailure::Breakdown) => {
            let n = diag.len();
            let mut h = vec![vec![ZERO; n]; n];
            for i in 0..n {
                h[i][i] = diag[i];
                if i + 1 < n {
                    h[i][i + 1] = off[i];
                    h[i + 1][i] = off[i];
                }
            }
            Ok((hessenberg_eigenvalues(h)?, Solver::DenseQr))
        }
        Err(QlFailure::Stalled(e)) => Err(e),
    }
}

fn tql(diag: &[Complex64], off: &[Complex64]) -> std::result::Result<Vec<Complex64>, QlFailure> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(ZERO);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_SWEEPS {
                return Err(QlFailure::Stalled(Error::EigenNoConvergence {
                    index: l,
                    iterations: iter,
                    off_diagonal: e[l].norm(),
                }));
            }
            // Wilkinson-type shift from the leading 2×2 block
            let mut g = (d[l + 1] - d[l]) / (e[l] * 2.0);
            let r = (g * g + ONE).sqrt();
            let gr = if (g + r).norm() >= (g - r).norm() { g + r } else { g - r };
            if gr.norm() == 0.0 {
                return Err(QlFailure::Breakdown);
            }
            g = d[m] - d[l] + e[l] / gr;
            let (mut s, mut c, mut p) = (ONE, ONE, ZERO);
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                let r = (f * f + g * g).sqrt();
                if r.norm() <= BREAKDOWN * (f.norm() + g.norm()) {
                    return Err(QlFailure::Breakdown);
                }
                e[i + 1] = r;
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let t = (d[i] - g) * s + c * b * 2.0;
                p = s * t;
                d[i + 1] = g + p;
                g = c * t - b;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = ZERO;
        }
    }
    if d.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(QlFailure::Breakdown);
    }
    Ok(d)
}

/// Eigenvalues of a general complex square matrix (row-major `a[i][j]`):
/// Householder reduction to Hessenberg form followed by shifted QR.
pub fn dense_eigenvalues(mut a: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating a[k+2.., k]
        let alpha_norm: f64 = (k + 1..n).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I − 2vv*/v*v) A (I − 2vv*/v*v)
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[k + 1 + t][j]).sum();
            let f = dot * 2.0 / vnorm2;
            for (t, vi) in v.iter().enumerate() {
                a[k + 1 + t][j] -= vi * f;
            }
        }
        for row in a.iter_mut() {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| row[k + 1 + t] * vi).sum();
            let f = dot * 2.0 / vnorm2;
            for (t, vi) in v.iter().enumerate() {
                row[k + 1 + t] -= f * vi.conj();
            }
        }
    }
    hessenberg_eigenvalues(a)
}

/// Shifted QR on an upper Hessenberg matrix with Givens rotations and
/// Wilkinson shifts. Entries below the subdiagonal are ignored. Only the
/// active block is updated, so the Schur form itself is not produced.
pub fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let n = h.len();
    let mut values = vec![ZERO; n];
    let mut hi = n;
    let mut iter = 0;
    let max_iter = 100;
    while hi > 0 {
        if hi == 1 {
            values[0] = h[0][0];
            break;
        }
        // find the start of the active unreduced block
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if h[lo][lo - 1].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            values[hi - 1] = h[hi - 1][hi - 1];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::EigenNoConvergence {
                index: hi - 1,
                iterations: iter,
                off_diagonal: h[hi - 1][hi - 2].norm(),
            });
        }
        // Wilkinson shift from the trailing 2×2 block; exceptional shift every 11 sweeps
        let (a, b, c, d) = (h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
        let mut mu = {
            let tr = a + d;
            let det = a * d - b * c;
            let disc = (tr * tr * 0.25 - det).sqrt();
            let (l1, l2) = (tr * 0.5 + disc, tr * 0.5 - disc);
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        if iter % 11 == 0 {
            mu += Complex64::new(0.75 * h[hi - 1][hi - 2].norm(), 0.0);
        }
        for i in lo..hi {
            h[i][i] -= mu;
        }
        // QR by Givens rotations, then RQ
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi - 1 {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cg, sg) = if r == 0.0 { (ONE, ZERO) } else { (x / r, y / r) };
            // G = [[c̄, s̄], [−s, c]] applied to rows k, k+1
            for j in k..hi {
                let (p, q) = (h[k][j], h[k + 1][j]);
                h[k][j] = cg.conj() * p + sg.conj() * q;
                h[k + 1][j] = -sg * p + cg * q;
            }
            rots.push((cg, sg));
        }
        for (t, &(cg, sg)) in rots.iter().enumerate() {
            let k = lo + t;
            // columns k, k+1 multiplied by G*
            for row in h.iter_mut().take((k + 2).min(hi)).skip(lo) {
                let (p, q) = (row[k], row[k + 1]);
                row[k] = p * cg + q * sg;
                row[k + 1] = -p * sg.conj() + q * cg.conj();
            }
        }
        for i in lo..hi {
            h[i][i] += mu;
        }
    }
    Ok(values)
}

/// Solves `(T − μ) x = b` for a complex symmetric tridiagonal `T` by LU with
/// partial pivoting.
fn tridiagonal_solve(diag: &[Complex64], off: &[Complex64], mu: Complex64, rhs: &[Complex64]) -> Vec<Complex64> {
    let n = diag.len();
    // rows hold up to three entries after pivoting: (main, upper, upper2)
    let mut a: Vec<[Complex64; 3]> = (0..n)
        .map(|i| [diag[i] - mu, if i + 1 < n { off[i] } else { ZERO }, ZERO])
        .collect();
    let mut sub: Vec<Complex64> = (0..n).map(|i| if i > 0 { off[i - 1] } else { ZERO }).collect();
    let mut b = rhs.to_vec();
    let tiny = f64::EPSILON * diag.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..n.saturating_sub(1) {
        let below = sub[i + 1];
        if below.norm() > a[i][0].norm() {
            // swap rows i and i+1
            let row_i = a[i];
            let next = [below, a[i + 1][0], a[i + 1][1]];
            a[i] = next;
            a[i + 1] = [row_i[0], row_i[1], row_i[2]];
            b.swap(i, i + 1);
            // after swap the old row i becomes the one to eliminate
            let m = a[i + 1][0] / a[i][0];
            a[i + 1] = [a[i + 1][1] - m * a[i][1], a[i + 1][2] - m * a[i][2], ZERO];
            let bi = b[i];
            b[i + 1] -= m * bi;
        } else {
            if a[i][0].norm() < tiny {
                a[i][0] = Complex64::new(tiny, 0.0);
            }
            let m = below / a[i][0];
            a[i + 1] = [a[i + 1][0] - m * a[i][1], a[i + 1][1] - m * a[i][2], a[i + 1][2]];
            let bi = b[i];
            b[i + 1] -= m * bi;
        }
        sub[i + 1] = ZERO;
    }
    if a[n - 1][0].norm() < tiny {
        a[n - 1][0] = Complex64::new(tiny, 0.0);
    }
    let mut x = vec![ZERO; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= a[i][1] * x[i + 1];
        }
        if i + 2 < n {
            acc -= a[i][2] * x[i + 2];
        }
        x[i] = acc / a[i][0];
    }
    x
}

/// Eigenvector of the complex symmetric tridiagonal matrix for the
/// eigenvalue `lambda`, by inverse iteration. Unit Euclidean norm, with the
/// largest component made real and positive.
pub fn inverse_iteration(diag: &[Complex64], off: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    let n = diag.len();
    let scale = diag.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mu = lambda + Complex64::new(1e-10 * scale, 1e-10 * scale);
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.01 * (i % 7) as f64, 0.0)).collect();
    for _ in 0..4 {
        x = tridiagonal_solve(diag, off, mu, &x);
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut x {
            *z /= norm;
        }
    }
    let big = x.iter().copied().fold(ZERO, |m, z| if z.norm() > m.norm() { z } else { m });
    let phase = big.conj() / big.norm();
    x.iter().map(|z| z * phase).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn free_tridiagonal_spectrum() {
        let d = vec![c(2.0, 0.0); 3];
        let e = vec![c(-1.0, 0.0); 2];
        let (w, solver) = symmetric_tridiagonal_eigenvalues(&d, &e).unwrap();
        assert_eq!(solver, Solver::SymmetricQl);
        let w = sorted(w);
        let s = 2f64.sqrt();
        for (got, want) in w.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).norm() < 1e-14);
        }
    }

    #[test]
    fn ql_agrees_with_dense_qr_on_complex_diagonal() {
        let n = 40;
        let d: Vec<Complex64> = (0..n).map(|i| c(2.0 + (i as f64 * 0.37).sin(), 0.3 * (i as f64 * 0.71).cos())).collect();
        let e: Vec<Complex64> = (0..n - 1).map(|_| c(-1.0, 0.0)).collect();
        let (ql, _) = symmetric_tridiagonal_eigenvalues(&d, &e).unwrap();
        let mut h = vec![vec![ZERO; n]; n];
        for i in 0..n {
            h[i][i] = d[i];
            if i + 1 < n {
                h[i][i + 1] = e[i];
                h[i + 1][i] = e[i];
            }
        }
        let qr = hessenberg_eigenvalues(h).unwrap();
        for (a, b) in sorted(ql).iter().zip(sorted(qr).iter()) {
            assert!((a - b).norm() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn dense_solver_recovers_known_eigenvalues() {
        // upper triangular T with known diagonal, conjugated by a Householder reflector
        let n = 6;
        let eig = [c(1.0, 2.0), c(-3.0, 0.5), c(0.25, 0.0), c(4.0, -1.0), c(2.0, 2.0), c(-0.5, -0.5)];
        let mut t = vec![vec![ZERO; n]; n];
        for i in 0..n {
            t[i][i] = eig[i];
            for j in i + 1..n {
                t[i][j] = c((i + 2 * j) as f64 * 0.1, (j as f64 - i as f64) * 0.05);
            }
        }
        let v: Vec<Complex64> = (0..n).map(|i| c(1.0 + i as f64, 0.5 - i as f64 * 0.2)).collect();
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let q: Vec<Vec<Complex64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO } - v[i] * v[j].conj() * (2.0 / vv)).collect())
            .collect();
        let mul = |a: &Vec<Vec<Complex64>>, b: &Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
        };
        let a = mul(&mul(&q, &t), &q);
        let got = sorted(dense_eigenvalues(a).unwrap());
        let want = sorted(eig.to_vec());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn inverse_iteration_matches_sine_mode() {
        let n = 50;
        let d = vec![c(2.0, 0.0); n];
        let e = vec![c(-1.0, 0.0); n - 1];
        let k = 3.0;
        let theta = k * std::f64::consts::PI / (n as f64 + 1.0);
        let lambda = c(2.0 - 2.0 * theta.cos(), 0.0);
        let x = inverse_iteration(&d, &e, lambda);
        let exact: Vec<f64> = (1..=n).map(|j| (j as f64 * theta).sin()).collect();
        let en = exact.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dot: f64 = x.iter().zip(&exact).map(|(a, b)| a.re * b / en).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-10);
    }
}
