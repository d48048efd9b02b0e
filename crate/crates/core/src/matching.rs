//! Maximum-weight bipartite matching (Kuhn–Munkres) with forbidden edges.
//!
//! Forbidden edges are represented explicitly as `None`, never as a large
//! negative weight, so infeasibility detection is exact: a matching either
//! avoids them or does not exist. Rectangular instances are handled by
//! padding with per-row zero-weight dummy columns when rows are allowed to
//! stay unmatched; dummy pairings are stripped from the output.

use crate::error::{Error, Result};

/// Rectangular weight matrix; `None` marks a forbidden edge.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Option<f64>>,
}

impl WeightMatrix {
    /// All-forbidden matrix of the given shape.
    pub fn new(rows: usize, cols: usize) -> WeightMatrix {
        assert!(rows > 0, "weight matrix needs at least one row");
        WeightMatrix { rows, cols, entries: vec![None; rows * cols] }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Option<f64>>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> WeightMatrix {
        let mut w = WeightMatrix::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                w.set(r, c, f(r, c));
            }
        }
        w
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<f64> {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, w: Option<f64>) {
        self.entries[r * self.cols + c] = w;
    }
}

/// Outcome of a matching run.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Selected (row, column) pairs, sorted by row; each row and column
    /// appears at most once and never on a forbidden edge.
    pub pairs: Vec<(usize, usize)>,
    /// Sum of the selected original weights, accumulated in row order.
    pub total_weight: f64,
    /// True iff every row is matched.
    pub complete: bool,
}

/// Maximum-weight matching of `w`.
///
/// With `require_all_rows` every row must be matched (rows ≤ cols required);
/// if no perfect-on-rows matching exists on the allowed edges the result
/// carries `complete = false` and no pairs. Without it, rows may stay
/// unmatched and the optimum never uses a negative edge.
pub fn max_weight_matching(w: &WeightMatrix, require_all_rows: bool) -> Result<MatchResult> {
    let n = w.rows();
    if require_all_rows && n > w.cols() {
        return Err(Error::Argument(format!(
            "cannot match all {} rows into {} columns",
            n,
            w.cols()
        )));
    }
    // Optional rows: give each row a private zero-weight dummy column that
    // stands for "unmatched".
    let m = if require_all_rows { w.cols() } else { w.cols() + n };
    let cost = |r: usize, c: usize| -> Option<f64> {
        if c < w.cols() {
            w.get(r, c).map(|v| -v) // maximize → minimize
        } else if !require_all_rows && c - w.cols() == r {
            Some(0.0)
        } else {
            None
        }
    };

    match hungarian_min(&cost, n, m) {
        Some(col_to_row) => {
            let mut pairs: Vec<(usize, usize)> = col_to_row
                .iter()
                .enumerate()
                .filter_map(|(c, &r)| r.map(|r| (r, c)))
                .filter(|&(_, c)| c < w.cols())
                .collect();
            pairs.sort_unstable();
            let total_weight = pairs.iter().map(|&(r, c)| w.get(r, c).unwrap()).sum();
            let complete = pairs.len() == n;
            Ok(MatchResult { pairs, total_weight, complete })
        }
        None => Ok(MatchResult { pairs: Vec::new(), total_weight: 0.0, complete: false }),
    }
}

/// Min-cost perfect-on-rows assignment via shortest augmenting paths with
/// potentials. Returns, per column, the assigned row; `None` overall if some
/// row cannot be matched on allowed edges.
fn hungarian_min<F: Fn(usize, usize) -> Option<f64>>(
    cost: &F,
    rows: usize,
    cols: usize,
) -> Option<Vec<Option<usize>>> {
    // column `cols` is the virtual start column
    let mut potential_row = vec![0.0f64; rows];
    let mut potential_col = vec![0.0f64; cols + 1];
    let mut assigned: Vec<Option<usize>> = vec![None; cols + 1];

    for row in 0..rows {
        assigned[cols] = Some(row);
        let mut j0 = cols;
        let mut min_to = vec![f64::INFINITY; cols + 1];
        let mut prev = vec![cols; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = assigned[j0].unwrap();
            let mut delta = f64::INFINITY;
            let mut j1 = cols;
            for j in 0..cols {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0, j) {
                    let reduced = c - potential_row[i0] - potential_col[j];
                    if reduced < min_to[j] {
                        min_to[j] = reduced;
                        prev[j] = j0;
                    }
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            if delta == f64::INFINITY {
                // no augmenting path on allowed edges
                return None;
            }
            for j in 0..=cols {
                if used[j] {
                    potential_row[assigned[j].unwrap()] += delta;
                    potential_col[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if assigned[j0].is_none() {
                break;
            }
        }
        // unwind the alternating path
        while j0 != cols {
            let j1 = prev[j0];
            assigned[j0] = assigned[j1];
            j0 = j1;
        }
    }
    assigned[cols] = None;
    Some(assigned)
}
