//! Small dense helpers shared by the simplex refactorization.

/// Inverts the row-major `k x k` matrix in place with Gauss-Jordan elimination
/// and partial pivoting. Returns `None` when a pivot falls below
/// `rel_tol * max|entry|`.
pub(crate) fn invert_in_place(a: &mut [f64], k: usize, rel_tol: f64) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), k * k);
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut inv = vec![0.0; k * k];
    for i in 0..k {
        inv[i * k + i] = 1.0;
    }
    for col in 0..k {
        let mut piv = col;
        let mut best = a[col * k + col].abs();
        for r in col + 1..k {
            let v = a[r * k + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= rel_tol * scale {
            return None;
        }
        if piv != col {
            for c in 0..k {
                a.swap(piv * k + c, col * k + c);
                inv.swap(piv * k + c, col * k + c);
            }
        }
        let d = 1.0 / a[col * k + col];
        for c in 0..k {
            a[col * k + c] *= d;
            inv[col * k + c] *= d;
        }
        for r in 0..k {
            if r == col {
                continue;
            }
            let f = a[r * k + col];
            if f == 0.0 {
                continue;
            }
            for c in 0..k {
                a[r * k + c] -= f * a[col * k + c];
                inv[r * k + c] -= f * inv[col * k + c];
            }
        }
    }
    Some(inv)
}

/// Gaussian elimination with complete pivoting on a copy of the row-major
/// `k x k` matrix. Returns the columns and rows that take part in a pivot,
/// stopping once the best remaining entry falls below `rel_tol * max|entry|`.
pub(crate) fn independent_set(a: &[f64], k: usize, rel_tol: f64) -> (Vec<bool>, Vec<bool>) {
    let mut w = a.to_vec();
    let scale = w.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut row_used = vec![false; k];
    let mut col_used = vec![false; k];
    for _ in 0..k {
        let mut best = (0.0, 0, 0);
        for r in (0..k).filter(|&r| !row_used[r]) {
            for c in (0..k).filter(|&c| !col_used[c]) {
                let v = w[r * k + c].abs();
                if v > best.0 {
                    best = (v, r, c);
                }
            }
        }
        let (v, pr, pc) = best;
        if v <= rel_tol * scale {
            break;
        }
        row_used[pr] = true;
        col_used[pc] = true;
        let d = w[pr * k + pc];
        for r in (0..k).filter(|&r| !row_used[r]) {
            let f = w[r * k + pc] / d;
            if f != 0.0 {
                for c in 0..k {
                    w[r * k + c] -= f * w[pr * k + c];
                }
            }
        }
    }
    (col_used, row_used)
}
