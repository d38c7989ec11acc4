//! Exhaustive search for gyrogroup Cayley tables of a given order.
//!
//! The identity is pinned to index 0, so row 0 and column 0 are forced. Rows
//! must be permutations (left cancellation), and columns as well: the right
//! cancellation law makes `z ↦ z ⊕ a` a bijection on any finite gyrogroup,
//! so column pruning loses no tables and cuts the space down to the
//! reduced-Latin-square count. Cheap filters run before the `O(n^4)`
//! automorphism check: two-sided inverses, then the derived gyration tables,
//! then gyroassociativity, bijectivity, the left loop property, and finally
//! that every gyration preserves the operation.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GyroError, Result};
use crate::models::cayley::CayleyGyrogroup;

pub const MAX_ORDER: usize = 8;

const N_CAP: usize = MAX_ORDER;

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub order: usize,
    /// Complete candidate tables examined.
    pub scanned: u64,
    /// Tables that passed every gyrogroup check, in lexicographic order.
    pub found: Vec<CayleyGyrogroup>,
    /// Indices into `found` whose gyration is non-trivial somewhere.
    pub proper: Vec<usize>,
    /// True when the scan stopped at the budget before covering the space.
    pub truncated: bool,
}

struct Scan {
    n: usize,
    table: [[u8; N_CAP]; N_CAP],
    col_used: [u16; N_CAP],
    budget: u64,
    scanned: u64,
    truncated: bool,
    found: Vec<Vec<Vec<usize>>>,
}

impl Scan {
    fn new(n: usize, budget: u64) -> Scan {
        let mut scan = Scan {
            n,
            table: [[0; N_CAP]; N_CAP],
            col_used: [0; N_CAP],
            budget,
            scanned: 0,
            truncated: false,
            found: Vec::new(),
        };
        for j in 0..n {
            scan.table[0][j] = j as u8;
            scan.col_used[j] |= 1 << j;
        }
        for i in 1..n {
            scan.table[i][0] = i as u8;
            scan.col_used[0] |= 1 << i;
        }
        scan
    }

    /// Fills cells row-major starting at `(row, col)`; `row_used` is the mask
    /// of values already placed in the current row.
    fn fill(&mut self, row: usize, col: usize, row_used: u16) {
        if self.truncated {
            return;
        }
        if row == self.n {
            self.leaf();
            return;
        }
        let (next_row, next_col) = if col + 1 == self.n { (row + 1, 1) } else { (row, col + 1) };
        let full = (1u16 << self.n) - 1;
        let mut free = full & !(row_used | self.col_used[col]);
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            self.table[row][col] = v as u8;
            self.col_used[col] |= 1 << v;
            let next_used =
                if next_col == 1 { 1 << next_row } else { row_used | (1 << v) };
            self.fill(next_row, next_col, next_used);
            self.col_used[col] &= !(1 << v);
            if self.truncated {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        if self.scanned >= self.budget {
            self.truncated = true;
            return;
        }
        self.scanned += 1;
        if is_gyrogroup_table(&self.table, self.n) {
            let rows = (0..self.n)
                .map(|i| (0..self.n).map(|j| self.table[i][j] as usize).collect())
                .collect();
            self.found.push(rows);
        }
    }
}

/// Full gyrogroup check on a complete table whose identity row/column and
/// Latin rows/columns are already enforced by construction.
fn is_gyrogroup_table(t: &[[u8; N_CAP]; N_CAP], n: usize) -> bool {
    // Two-sided inverses. Columns are permutations, so the left inverse is
    // the unique j with t[j][x] = 0.
    let mut inv = [0u8; N_CAP];
    for x in 0..n {
        let j = (0..n).find(|&j| t[j][x] == 0).expect("columns are permutations");
        if t[x][j] != 0 {
            return false;
        }
        inv[x] = j as u8;
    }
    // Derived gyration tables: gyr[a][b][c] = ⊖(a⊕b) ⊕ (a ⊕ (b⊕c)).
    let mut gyr = [[[0u8; N_CAP]; N_CAP]; N_CAP];
    for a in 0..n {
        for b in 0..n {
            let neg_ab = inv[t[a][b] as usize] as usize;
            for c in 0..n {
                gyr[a][b][c] = t[neg_ab][t[a][t[b][c] as usize] as usize];
            }
        }
    }
    // Left gyroassociativity with the derived gyration.
    for a in 0..n {
        for b in 0..n {
            let ab = t[a][b] as usize;
            for c in 0..n {
                if t[ab][gyr[a][b][c] as usize] != t[a][t[b][c] as usize] {
                    return false;
                }
            }
        }
    }
    // Every gyration is a bijection.
    for a in 0..n {
        for b in 0..n {
            let mut seen = 0u16;
            for c in 0..n {
                seen |= 1 << gyr[a][b][c];
            }
            if seen != (1 << n) - 1 {
                return false;
            }
        }
    }
    // Left loop property: gyr[a⊕b, b] = gyr[a, b].
    for a in 0..n {
        for b in 0..n {
            let ab = t[a][b] as usize;
            if gyr[ab][b] != gyr[a][b] {
                return false;
            }
        }
    }
    // Gyrations preserve the operation.
    for a in 0..n {
        for b in 0..n {
            let g = &gyr[a][b];
            for x in 0..n {
                for y in 0..n {
                    if g[t[x][y] as usize] != t[g[x] as usize][g[y] as usize] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn has_proper_gyration(g: &CayleyGyrogroup) -> bool {
    let n = g.order();
    for a in 0..n {
        for b in 0..n {
            let ab = g.lookup(a, b);
            let neg_ab = (0..n).find(|&j| g.lookup(j, ab) == 0).expect("inverse exists");
            for c in 0..n {
                if g.lookup(neg_ab, g.lookup(a, g.lookup(b, c))) != c {
                    return true;
                }
            }
        }
    }
    false
}

/// Candidate second rows: permutations with `π(0) = 1` (identity column) and
/// `π(j) ≠ j` for `j ≥ 1` (column `j` already holds `j` in row 0), in
/// lexicographic order. The scan space is partitioned by these rows.
fn second_rows(n: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, pos: usize, used: u16, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if v == pos || used & (1 << v) != 0 {
                continue;
            }
            current[pos] = v as u8;
            rec(n, pos + 1, used | (1 << v), current, out);
        }
    }
    let mut rows = Vec::new();
    let mut current = vec![0u8; n];
    current[0] = 1;
    rec(n, 1, 1 << 1, &mut current, &mut rows);
    rows
}

/// Scans all order-`n` tables with identity 0, reporting every table that is
/// a gyrogroup. Partitions of the space (keyed by the second row) scan in
/// parallel, each with an equal share of the budget, and merge in
/// lexicographic order, so results are deterministic for a given budget.
pub fn cayley_search(order: usize, budget: u64) -> Result<SearchResult> {
    if !(2..=MAX_ORDER).contains(&order) {
        return Err(GyroError::usage(format!(
            "search order must lie in 2..={MAX_ORDER}, got {order}"
        )));
    }
    let partitions = second_rows(order);
    let parts = partitions.len() as u64;
    let outcomes: Vec<Scan> = partitions
        .into_par_iter()
        .enumerate()
        .map(|(i, row1)| {
            let share = budget / parts + u64::from((i as u64) < budget % parts);
            let mut scan = Scan::new(order, share);
            for (j, &v) in row1.iter().enumerate() {
                scan.table[1][j] = v;
                if j > 0 {
                    scan.col_used[j] |= 1 << v;
                }
            }
            scan.fill(2, 1, 1 << 2);
            scan
        })
        .collect();

    let mut result =
        SearchResult { order, scanned: 0, found: Vec::new(), proper: Vec::new(), truncated: false };
    for scan in outcomes {
        result.scanned += scan.scanned;
        result.truncated |= scan.truncated;
        for rows in scan.found {
            let name = format!("search:{}#{}", order, result.found.len());
            let table = CayleyGyrogroup::from_rows(&name, &rows)?;
            if has_proper_gyration(&table) {
                result.proper.push(result.found.len());
            }
            result.found.push(table);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{check_axioms, CheckConfig};
    use crate::report::all_passed;

    #[test]
    fn order_two_is_exactly_z2() {
        let r = cayley_search(2, 1_000).unwrap();
        assert_eq!(r.scanned, 1);
        assert_eq!(r.found.len(), 1);
        assert!(!r.truncated);
        assert_eq!(r.found[0].rows(), vec![vec![0, 1], vec![1, 0]]);
        assert!(r.proper.is_empty());
    }

    #[test]
    fn order_three_contains_z3() {
        let r = cayley_search(3, 10_000).unwrap();
        let z3 = CayleyGyrogroup::zn(3).unwrap().rows();
        assert!(r.found.iter().any(|t| t.rows() == z3));
        assert!(r.proper.is_empty());
    }

    #[test]
    fn order_four_contains_z4_and_klein() {
        let r = cayley_search(4, 100_000).unwrap();
        assert!(!r.truncated);
        let z4 = CayleyGyrogroup::zn(4).unwrap().rows();
        let klein = CayleyGyrogroup::klein().rows();
        assert!(r.found.iter().any(|t| t.rows() == z4));
        assert!(r.found.iter().any(|t| t.rows() == klein));
    }

    #[test]
    fn every_found_table_passes_the_exhaustive_engine() {
        for order in 2..=5 {
            let r = cayley_search(order, 10_000_000).unwrap();
            assert!(!r.truncated, "order {order} exceeded test budget");
            for table in &r.found {
                let reports = check_axioms(table, &CheckConfig::default()).unwrap();
                assert!(all_passed(&reports), "order {order} table failed: {reports:?}");
            }
        }
    }

    #[test]
    fn budget_truncates_with_flag() {
        let r = cayley_search(5, 3).unwrap();
        assert!(r.truncated);
        assert!(r.scanned <= 3);
    }

    #[test]
    fn out_of_range_orders_are_usage_errors() {
        assert!(cayley_search(1, 10).is_err());
        assert!(cayley_search(9, 10).is_err());
    }
}
