use std::collections::HashMap;

use serde::Serialize;

use super::partition::Partition;

/// A standard Young tableau; entries are `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StandardTableau {
    rows: Vec<Vec<usize>>,
    /// `cells[k - 1] = (row, col)` of entry `k`.
    cells: Vec<(usize, usize)>,
}

impl StandardTableau {
    fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        let n: usize = rows.iter().map(Vec::len).sum();
        let mut cells = vec![(0, 0); n];
        for (r, row) in rows.iter().enumerate() {
            for (c, &k) in row.iter().enumerate() {
                cells[k - 1] = (r, c);
            }
        }
        StandardTableau { rows, cells }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    /// `(row, col)` of entry `k` (1-based entry, 0-based coordinates).
    pub fn cell(&self, k: usize) -> (usize, usize) {
        self.cells[k - 1]
    }

    /// Content `col - row` of the cell holding `k`.
    pub fn content(&self, k: usize) -> i64 {
        let (r, c) = self.cell(k);
        c as i64 - r as i64
    }

    /// Row index of each entry `1..=n`, the Yamanouchi word.
    pub fn row_word(&self) -> Vec<usize> {
        self.cells.iter().map(|&(r, _)| r).collect()
    }

    /// Tableau with `k` and `k + 1` exchanged, if the result is still standard.
    pub fn swap_adjacent(&self, k: usize) -> Option<StandardTableau> {
        let (r1, c1) = self.cell(k);
        let (r2, c2) = self.cell(k + 1);
        if r1 == r2 || c1 == c2 {
            return None;
        }
        let mut rows = self.rows.clone();
        rows[r1][c1] = k + 1;
        rows[r2][c2] = k;
        Some(StandardTableau::from_rows(rows))
    }

    pub fn is_standard(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        for row in &self.rows {
            for &k in row {
                if k == 0 || k > n || seen[k - 1] {
                    return false;
                }
                seen[k - 1] = true;
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
        }
        self.rows.windows(2).all(|pair| {
            pair[1].len() <= pair[0].len()
                && pair[1]
                    .iter()
                    .zip(&pair[0])
                    .all(|(below, above)| above < below)
        })
    }
}

/// All standard tableaux of `shape` in last-letter order: tableaux with `n`
/// in a lower row come first, ties broken the same way on `n - 1`, and so on.
pub fn standard_tableaux(shape: &Partition) -> Vec<StandardTableau> {
    fn rows_of(shape: &Partition) -> Vec<Vec<Vec<usize>>> {
        let n = shape.n();
        let mut out = Vec::new();
        for &row in shape.removable_rows().iter().rev() {
            match shape.without_box(row) {
                None => out.push(vec![vec![n]]),
                Some(smaller) => {
                    for mut rows in rows_of(&smaller) {
                        if row == rows.len() {
                            rows.push(Vec::new());
                        }
                        rows[row].push(n);
                        out.push(rows);
                    }
                }
            }
        }
        out
    }
    rows_of(shape)
        .into_iter()
        .map(StandardTableau::from_rows)
        .collect()
}

/// Position lookup for a tableau basis, keyed by Yamanouchi word.
pub(crate) fn index_by_word(tableaux: &[StandardTableau]) -> HashMap<Vec<usize>, usize> {
    tableaux
        .iter()
        .enumerate()
        .map(|(i, t)| (t.row_word(), i))
        .collect()
}
