//! Exact affine linear system solving over `Q` by Gaussian elimination.

use crate::rational::Q;
use num_traits::Zero;

/// Solution of `A x = b`: one particular solution plus a basis of the
/// kernel, or `None` when the system is inconsistent.
pub struct AffineSolution {
    pub particular: Vec<Q>,
    pub kernel_basis: Vec<Vec<Q>>,
}

/// Solves `A x = b` exactly. Rows of `a` must all have length `ncols`.
pub fn solve(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<AffineSolution> {
    let nrows = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut row = row.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].clone().recip();
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, mr) in m.iter_mut().enumerate() {
            if r != row && !mr[col].is_zero() {
                let f = mr[col].clone();
                for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                    let v = &mr[c] - &(pv * &f);
                    mr[c] = v;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // Inconsistent if any remaining row reads 0 = nonzero.
    for mr in m.iter().skip(row) {
        if mr[..ncols].iter().all(Zero::is_zero) && !mr[ncols].is_zero() {
            return None;
        }
    }
    let mut particular = vec![Q::zero(); ncols];
    for (i, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = m[i][ncols].clone();
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut kernel_basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![Q::zero(); ncols];
        v[fc] = Q::from_integer(1.into());
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[i][fc].clone();
        }
        kernel_basis.push(v);
    }
    Some(AffineSolution {
        particular,
        kernel_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn solves_square_system() {
        // x + y = 3, x - y = 1 -> (2, 1)
        let a = vec![vec![qi(1), qi(1)], vec![qi(1), qi(-1)]];
        let b = vec![qi(3), qi(1)];
        let s = solve(&a, &b, 2).unwrap();
        assert_eq!(s.particular, vec![qi(2), qi(1)]);
        assert!(s.kernel_basis.is_empty());
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        let b = vec![qi(1), qi(3)];
        assert!(solve(&a, &b, 2).is_none());
    }

    #[test]
    fn reports_kernel() {
        let a = vec![vec![qi(1), qi(1)]];
        let b = vec![qi(2)];
        let s = solve(&a, &b, 2).unwrap();
        assert_eq!(s.kernel_basis.len(), 1);
        assert_eq!(s.kernel_basis[0], vec![qi(-1), qi(1)]);
    }
}
