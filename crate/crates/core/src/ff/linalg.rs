//! Dense linear algebra over a prime field F_p.

use super::fp::{inv, mulmod};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let pinv = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mulmod(*x, pinv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mulmod(f, y, p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m, p).len()
}

/// Basis of the null space {x : A x = 0} of a matrix given by rows, with
/// one basis vector per free column (standard RREF construction).
pub fn kernel(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f]) % p;
            }
            v
        })
        .collect()
}

/// Indices of a maximal linearly independent subset, scanning in order and
/// keeping each vector that is independent of those kept so far.
pub fn first_independent(vectors: &[Vec<u64>], p: u64) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot col, row)
    let mut kept = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (pc, row) in &echelon {
            if w[*pc] != 0 {
                let f = w[*pc];
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = (*x + p - mulmod(f, y, p)) % p;
                }
            }
        }
        if let Some(pc) = w.iter().position(|&x| x != 0) {
            let pinv = inv(w[pc], p);
            for x in w.iter_mut() {
                *x = mulmod(*x, pinv, p);
            }
            echelon.push((pc, w));
            kept.push(idx);
        }
    }
    kept
}
