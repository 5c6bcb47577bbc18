use crate::error::{Error, Result};

pub const MAX_HAFNIAN_DIM: usize = 20;

/// Hafnian of a symmetric `2m x 2m` matrix; the diagonal is ignored.
///
/// Pins the lowest vertex of each vertex subset and memoises over all
/// subsets, so the cost is `O(2^n · n)` rather than `(n-1)!!`.
pub fn hafnian_exact(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = matrix.len();
    if let Some(row) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::structural(format!("matrix is not square: row of length {} in {n}x{n}", row.len())));
    }
    if n % 2 == 1 {
        return Err(Error::structural(format!("hafnian needs an even dimension, got {n}")));
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::structural(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    if n > MAX_HAFNIAN_DIM {
        return Err(Error::capacity(format!("hafnian of a {n}x{n} matrix"), MAX_HAFNIAN_DIM as u64));
    }
    let mut haf = vec![0.0f64; 1 << n];
    haf[0] = 1.0;
    for mask in 1usize..(1 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = 0.0;
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            acc += matrix[i][j] * haf[rest & !(1 << j)];
        }
        haf[mask] = acc;
    }
    Ok(haf[(1 << n) - 1])
}
