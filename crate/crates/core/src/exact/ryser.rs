use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

pub const MAX_RYSER_DIM: usize = 28;

/// Permanent of a square matrix by Ryser's inclusion-exclusion formula,
/// visiting column subsets in Gray-code order so each step updates the row
/// sums by one column.
pub fn permanent_ryser(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = matrix.len();
    if let Some(row) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::structural(format!("matrix is not square: row of length {} in {n}x{n}", row.len())));
    }
    if n > MAX_RYSER_DIM {
        return Err(Error::capacity(format!("Ryser permanent of a {n}x{n} matrix"), MAX_RYSER_DIM as u64));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut row_sums = vec![0.0; n];
    let mut in_set = vec![false; n];
    let mut total = CompensatedSum::default();
    let mut size = 0usize;
    for g in 1u64..(1u64 << n) {
        let j = g.trailing_zeros() as usize;
        let sign = if in_set[j] { -1.0 } else { 1.0 };
        in_set[j] = !in_set[j];
        if in_set[j] {
            size += 1;
        } else {
            size -= 1;
        }
        for (s, row) in row_sums.iter_mut().zip(matrix) {
            *s += sign * row[j];
        }
        let prod: f64 = row_sums.iter().product();
        // (-1)^(n - |S|)
        if (n - size).is_multiple_of(2) {
            total.add(prod);
        } else {
            total.add(-prod);
        }
    }
    Ok(total.value())
}
