//! Minimum-cost perfect matching on a square cost matrix.

use alloc::vec;
use alloc::vec::Vec;

/// Optimal assignment: `rows_to_cols[i]` is the column matched to row `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub rows_to_cols: Vec<usize>,
    pub cost: f64,
}

/// Solves the square assignment problem with the O(n³) shortest augmenting
/// path Hungarian method (row and column potentials).
///
/// Ties are broken towards lower column indices. Costs must be finite.
pub fn solve(costs: &[Vec<f64>]) -> Assignment {
    let n = costs.len();
    assert!(costs.iter().all(|r| r.len() == n), "cost matrix must be square");
    assert!(costs.iter().flatten().all(|c| c.is_finite()), "costs must be finite");
    if n == 0 {
        return Assignment { rows_to_cols: Vec::new(), cost: 0.0 };
    }
    // 1-based arrays with a virtual column 0
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0;
        let mut min_v = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = costs[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < min_v[j] {
                    min_v[j] = cur;
                    way[j] = j0;
                }
                if min_v[j] < delta {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut rows_to_cols = vec![0; n];
    for j in 1..=n {
        rows_to_cols[col_owner[j] - 1] = j - 1;
    }
    let cost = rows_to_cols.iter().enumerate().map(|(i, &j)| costs[i][j]).sum();
    Assignment { rows_to_cols, cost }
}
