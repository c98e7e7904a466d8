//! Small exact integer linear algebra: lattice kernels by unimodular column
//! reduction and Smith normal form diagonals.
//!
//! Matrices here are tiny (at most a handful of rows and about ten columns),
//! so everything is dense and runs on `i128` to keep intermediate growth safe.

use num_integer::Integer;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Returns a lattice basis of `{v in Z^m : A v = 0}` for a `rows x m` matrix.
///
/// The basis is produced by reducing `A` to column echelon form with
/// unimodular column operations; the transform columns that end up over zero
/// columns span the kernel lattice. The basis is then size-reduced pairwise so
/// the vectors (and the binomials built from them) stay short.
pub fn kernel_basis(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let m = a[0].len();
    // cols[j] = (column j of A, column j of U)
    let mut cols: Vec<(Vec<i128>, Vec<i128>)> = (0..m)
        .map(|j| {
            let c = (0..rows).map(|i| a[i][j] as i128).collect();
            let mut e = vec![0i128; m];
            e[j] = 1;
            (c, e)
        })
        .collect();

    let mut pivot = 0usize;
    for r in 0..rows {
        if pivot >= m {
            break;
        }
        for j in pivot + 1..m {
            let b = cols[j].0[r];
            if b == 0 {
                continue;
            }
            let a_ = cols[pivot].0[r];
            let (g, s, t) = ext_gcd(a_, b);
            let (ap, bp) = (a_ / g, b / g);
            let (cp, cj) = (cols[pivot].clone(), cols[j].clone());
            cols[pivot] = combine(&cp, s, &cj, t);
            cols[j] = combine(&cp, -bp, &cj, ap);
        }
        if cols[pivot].0[r] != 0 {
            pivot += 1;
        }
    }

    let mut basis: Vec<Vec<i128>> = cols[pivot..]
        .iter()
        .filter(|(c, _)| c.iter().all(|&x| x == 0))
        .map(|(_, u)| u.clone())
        .collect();
    size_reduce(&mut basis);
    basis
        .into_iter()
        .map(|v| {
            let last = v.iter().rev().find(|&&x| x != 0).copied().unwrap_or(1);
            let sign = if last < 0 { -1 } else { 1 };
            v.into_iter().map(|x| (x * sign) as i64).collect()
        })
        .collect()
}

fn combine(
    x: &(Vec<i128>, Vec<i128>),
    s: i128,
    y: &(Vec<i128>, Vec<i128>),
    t: i128,
) -> (Vec<i128>, Vec<i128>) {
    let f = |p: &[i128], q: &[i128]| p.iter().zip(q).map(|(a, b)| s * a + t * b).collect();
    (f(&x.0, &y.0), f(&x.1, &y.1))
}

fn norm2(v: &[i128]) -> i128 {
    v.iter().map(|x| x * x).sum()
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairwise (Gauss-style) size reduction. Each accepted step strictly lowers
/// the total squared norm, so the loop terminates.
fn size_reduce(basis: &mut [Vec<i128>]) {
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = norm2(&basis[j]);
                if nj == 0 {
                    continue;
                }
                let d = dot(&basis[i], &basis[j]);
                let k = Integer::div_floor(&(2 * d + nj), &(2 * nj));
                if k == 0 {
                    continue;
                }
                let cand: Vec<i128> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(a, b)| a - k * b)
                    .collect();
                if norm2(&cand) < norm2(&basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by_key(|v| (norm2(v), v.clone()));
}

/// Nonzero diagonal entries of the Smith normal form, in divisibility order.
pub fn elementary_divisors(a: &[Vec<i64>]) -> Vec<u64> {
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut out = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry in the trailing block goes to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return out;
            };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = Integer::div_floor(&m[i][t], &p);
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                dirty |= m[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = Integer::div_floor(&m[t][j], &p);
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= m[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // the pivot must divide every remaining entry
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = m[i][j];
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].unsigned_abs() as u64);
    }
    out
}

/// Rank over the rationals.
pub fn rank(a: &[Vec<i64>]) -> usize {
    elementary_divisors(a).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
        a.iter()
            .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }

    #[test]
    fn cubic_kernel_is_one_primitive_vector() {
        let a = vec![vec![2, 1, 0, 1], vec![1, 2, 0, 1], vec![0, 0, 3, 1]];
        let k = kernel_basis(&a);
        assert_eq!(k, vec![vec![-1, -1, -1, 3]]);
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let a = vec![vec![2, 1, 1, 0, 1], vec![1, 2, 0, 1, 1], vec![0, 0, 2, 2, 1]];
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mul(&a, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn invertible_matrix_has_trivial_kernel() {
        let a = vec![vec![2, 1], vec![1, 1]];
        assert!(kernel_basis(&a).is_empty());
    }

    #[test]
    fn smith_diagonals() {
        assert_eq!(elementary_divisors(&[vec![2, -2]]), vec![2]);
        assert_eq!(
            elementary_divisors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            vec![2, 6, 12]
        );
        assert_eq!(elementary_divisors(&[vec![0, 0], vec![0, 0]]), Vec::<u64>::new());
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
    }
}
