//! Eigenvalues of real symmetric matrices.
//!
//! The input is first split into the connected components of its nonzero
//! pattern. Small components go through cyclic Jacobi; larger ones through
//! Householder tridiagonalisation followed by implicit QL.

use super::Matrix;
use crate::error::{Error, Result};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the matrix norm.
pub const JACOBI_REL_TOL: f64 = 1e-13;
/// Components above this size use the tridiagonal QL route.
pub const JACOBI_MAX_DIM: usize = 48;
const QL_MAX_ITER: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalues {
    /// Ascending.
    pub values: Vec<f64>,
    /// Jacobi sweeps plus QL iterations, summed over components.
    pub iterations: usize,
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Eigenvalues> {
    check_symmetric(m)?;
    let mut values = Vec::with_capacity(m.dim());
    let mut iterations = 0;
    for block in connected_components(m) {
        let sub = m.submatrix(&block);
        let part = if block.len() <= JACOBI_MAX_DIM {
            jacobi_eigenvalues(&sub)?
        } else {
            tridiagonal_ql_eigenvalues(&sub)?
        };
        iterations += part.iterations;
        values.extend(part.values);
    }
    values.sort_by(f64::total_cmp);
    Ok(Eigenvalues { values, iterations })
}

fn check_symmetric(m: &Matrix) -> Result<()> {
    let asym = m.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Index sets of the diagonal blocks, found by union-find over the
/// nonzero off-diagonal entries.
pub fn connected_components(m: &Matrix) -> Vec<Vec<usize>> {
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        let row = m.row(i);
        for j in i + 1..n {
            if row[j] != 0.0 || m[(j, i)] != 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// Cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &Matrix) -> Result<Eigenvalues> {
    check_symmetric(m)?;
    let n = m.dim();
    let mut a = m.clone();
    let norm = m.frobenius_norm();
    let target = JACOBI_REL_TOL * norm;
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= target || off == 0.0 {
            let mut values: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
            values.sort_by(f64::total_cmp);
            return Ok(Eigenvalues {
                values,
                iterations: sweep,
            });
        }
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: sweep,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    unreachable!()
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with a plane rotation applied on both sides.
fn rotate(a: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let (app, aqq) = (a[(p, p)], a[(q, q)]);
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.dim();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        a[(k, p)] = new_p;
        a[(p, k)] = new_p;
        a[(k, q)] = new_q;
        a[(q, k)] = new_q;
    }
    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
}

/// Householder reduction to tridiagonal form, then implicit QL with
/// Wilkinson-type shifts.
pub fn tridiagonal_ql_eigenvalues(m: &Matrix) -> Result<Eigenvalues> {
    check_symmetric(m)?;
    let n = m.dim();
    if n == 0 {
        return Ok(Eigenvalues {
            values: Vec::new(),
            iterations: 0,
        });
    }
    let mut a = m.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiagonalize(&mut a, &mut d, &mut e);
    let iterations = implicit_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(Eigenvalues {
        values: d,
        iterations,
    })
}

fn householder_tridiagonalize(a: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = a.dim();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[(j, k)] * a[(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let v = a[(j, k)] - (f * e[k] + g * a[(i, k)]);
                        a[(j, k)] = v;
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[(i, i)];
    }
}

fn implicit_ql(d: &mut [f64], e: &mut [f64]) -> Result<usize> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut total = 0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::NoConvergence {
                    sweeps: iter,
                    off_norm: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(total)
}
