use crate::bits::BitString;
use crate::error::{invalid, Result};

use super::{exact_sqrt, Problem};

/// N-Queens penalty objective on an `n x n` board stored row-major
/// (gene `r * n + c` is square `(r, c)`).
///
/// The value is `n - Q + n * sum(max(0, Q_line - 1))` over all rows,
/// columns and diagonals of both directions, length-1 corner diagonals
/// included.
#[derive(Clone, Debug)]
pub struct NQueens {
    n: usize,
    upper_bound: u64,
}

impl NQueens {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return invalid(format!("nqueens needs n >= 4, got {n}"));
        }
        let upper_bound = evaluate(n, &BitString::ones(n * n));
        Ok(Self { n, upper_bound })
    }

    pub fn board_side(&self) -> usize {
        self.n
    }
}

pub fn nqueens(x: &BitString, n: usize) -> Result<u64> {
    match exact_sqrt(x.len()) {
        Some(side) if side == n && n >= 1 => Ok(evaluate(n, x)),
        _ => invalid(format!(
            "board of {} squares does not match n = {n}",
            x.len()
        )),
    }
}

fn evaluate(n: usize, x: &BitString) -> u64 {
    let mut rows = vec![0u64; n];
    let mut cols = vec![0u64; n];
    let mut diag = vec![0u64; 2 * n - 1];
    let mut anti = vec![0u64; 2 * n - 1];
    let mut queens = 0u64;
    for i in x.ones_indices() {
        let (r, c) = (i / n, i % n);
        rows[r] += 1;
        cols[c] += 1;
        diag[r + c] += 1;
        anti[r + n - 1 - c] += 1;
        queens += 1;
    }
    let penalty: u64 = [rows, cols, diag, anti]
        .iter()
        .flatten()
        .map(|&q| q.saturating_sub(1))
        .sum();
    // n - Q < 0 only when Q > n, and then the penalty is at least Q - n.
    (n as u64 + n as u64 * penalty) - queens
}

impl Problem for NQueens {
    fn name(&self) -> &str {
        "nqueens"
    }

    fn instance(&self) -> String {
        format!("s={},n={}", self.n * self.n, self.n)
    }

    fn scale(&self) -> usize {
        self.n * self.n
    }

    fn upper_bound(&self) -> u64 {
        self.upper_bound
    }

    fn evaluate(&self, x: &BitString) -> u64 {
        evaluate(self.n, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_queens_examples() {
        let solved: BitString = "0100000110000010".parse().unwrap();
        assert_eq!(nqueens(&solved, 4).unwrap(), 0);
        assert_eq!(nqueens(&BitString::zeros(16), 4).unwrap(), 4);
        assert_eq!(nqueens(&BitString::ones(16), 4).unwrap(), 156);
        assert_eq!(NQueens::new(4).unwrap().upper_bound(), 156);
    }

    #[test]
    fn shape_errors() {
        assert!(nqueens(&BitString::zeros(17), 4).is_err());
        assert!(nqueens(&BitString::zeros(25), 4).is_err());
        assert!(NQueens::new(3).is_err());
    }
}
