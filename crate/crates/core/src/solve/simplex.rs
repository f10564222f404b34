//! Exact phase-1 simplex for `{ A y = b, 0 <= y <= u }`, Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Q = BigRational;

/// A feasible point, or `None`. `rows` are sparse `(column, coefficient)`.
pub(crate) fn feasible_point(n: usize, rows: &[(Vec<(usize, Q)>, Q)], upper: &[Q]) -> Option<Vec<Q>> {
    let m1 = rows.len();
    let m = m1 + n;
    // Columns: y (n), bound slacks s (n), artificials (m1), then rhs.
    let cols = 2 * n + m1;
    let rhs = cols;
    let mut t: Vec<Vec<Q>> = vec![vec![Q::zero(); cols + 1]; m];
    let mut basis = vec![0usize; m];
    for (r, (coefs, b)) in rows.iter().enumerate() {
        let flip = b.is_negative();
        for (c, a) in coefs {
            let a = if flip { -a.clone() } else { a.clone() };
            t[r][*c] += a;
        }
        t[r][rhs] = if flip { -b.clone() } else { b.clone() };
        t[r][2 * n + r] = Q::one();
        basis[r] = 2 * n + r;
    }
    for i in 0..n {
        let r = m1 + i;
        t[r][i] = Q::one();
        t[r][n + i] = Q::one();
        t[r][rhs] = upper[i].clone();
        basis[r] = n + i;
    }
    // Phase-1 objective: minimise the sum of artificials. `z[j]` holds the
    // reduced cost of column j; z[rhs] is minus the objective value.
    let mut z = vec![Q::zero(); cols + 1];
    for j in 2 * n..2 * n + m1 {
        z[j] = Q::one();
    }
    for r in 0..m1 {
        for j in 0..=cols {
            if !t[r][j].is_zero() {
                let v = t[r][j].clone();
                z[j] -= v;
            }
        }
    }
    loop {
        let Some(enter) = (0..cols).find(|&j| z[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][rhs] / &t[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, lv)) => ratio < *lv || (ratio == *lv && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // Phase 1 is bounded below by zero, so some row always limits.
        let (pr, _) = leave.expect("phase-1 simplex is bounded");
        pivot(&mut t, &mut z, pr, enter);
        basis[pr] = enter;
    }
    if !z[rhs].is_zero() {
        return None;
    }
    let mut y = vec![Q::zero(); n];
    for r in 0..m {
        if basis[r] < n {
            y[basis[r]] = t[r][rhs].clone();
        }
    }
    Some(y)
}

fn pivot(t: &mut [Vec<Q>], z: &mut [Q], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for x in t[pr].iter_mut() {
        if !x.is_zero() {
            *x /= &p;
        }
    }
    let prow = t[pr].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (r, row) in t.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for &j in &nz {
            row[j] -= &f * &prow[j];
        }
    }
    if !z[pc].is_zero() {
        let f = z[pc].clone();
        for &j in &nz {
            z[j] -= &f * &prow[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn simple_systems() {
        // y0 + y1 = 3 with y in [0,2]^2.
        let rows = vec![(vec![(0, q(1)), (1, q(1))], q(3))];
        let y = feasible_point(2, &rows, &[q(2), q(2)]).unwrap();
        assert_eq!(&y[0] + &y[1], q(3));
        assert!(y.iter().all(|v| *v >= q(0) && *v <= q(2)));
        // y0 + y1 = 5 is out of reach.
        let rows = vec![(vec![(0, q(1)), (1, q(1))], q(5))];
        assert!(feasible_point(2, &rows, &[q(2), q(2)]).is_none());
        // y0 - y1 = -2 forces y0 = 0, y1 = 2.
        let rows = vec![(vec![(0, q(1)), (1, q(-1))], q(-2))];
        assert_eq!(feasible_point(2, &rows, &[q(2), q(2)]).unwrap(), vec![q(0), q(2)]);
    }

    #[test]
    fn fractional_vertex() {
        // 2 y0 = 1.
        let rows = vec![(vec![(0, q(2))], q(1))];
        let y = feasible_point(1, &rows, &[q(2)]).unwrap();
        assert_eq!(y[0], Q::new(1.into(), 2.into()));
    }
}
