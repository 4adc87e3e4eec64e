//! Alternating sign matrices: validation, the monotone-triangle bijection,
//! exhaustive enumeration, product-formula counting, observables E_k, and
//! the transposition / row-reversal symmetry maps.

use crate::Int;
use num::{One, Zero};
use std::fmt;
use thiserror::Error;

/// Default hard cap on the enumeration size (A_8 = 10,850,216 objects).
pub const DEFAULT_ENUM_CAP: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsmError {
    #[error("matrix is not square: row {row} has length {len}, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("entry at row {row}, column {col} is {value}; entries must be -1, 0 or 1")]
    BadEntry { row: usize, col: usize, value: i64 },
    #[error("row {row} sums to {sum}, expected 1")]
    RowSum { row: usize, sum: i64 },
    #[error("column {col} sums to {sum}, expected 1")]
    ColSum { col: usize, sum: i64 },
    #[error("row {row} violates the alternating-sign condition at column {col}")]
    RowAlternation { row: usize, col: usize },
    #[error("column {col} violates the alternating-sign condition at row {row}")]
    ColAlternation { col: usize, row: usize },
    #[error("cannot parse '{token}' as a matrix entry")]
    Parse { token: String },
    #[error("triangle row {row} is not strictly increasing")]
    TriangleRowOrder { row: usize },
    #[error("triangle row {row} has length {len}, expected {expected}")]
    TriangleRowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("triangle rows {row} and {next} violate the interlacing condition")]
    TriangleInterlacing { row: usize, next: usize },
    #[error("triangle entry out of range 1..={n} in row {row}")]
    TriangleRange { row: usize, n: usize },
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// A validated n x n alternating sign matrix. Entries are stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Asm {
    n: usize,
    entries: Vec<i8>,
}

impl Asm {
    /// Validates a square integer array as an ASM. This is the single entry
    /// point for construction from untrusted data.
    pub fn validate(rows: &[Vec<i64>]) -> Result<Asm, AsmError> {
        let n = rows.len();
        if n == 0 {
            return Err(AsmError::Empty);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AsmError::NotSquare {
                    row: i + 1,
                    len: row.len(),
                    n,
                });
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(AsmError::BadEntry {
                        row: i + 1,
                        col: j + 1,
                        value: v,
                    });
                }
                entries.push(v as i8);
            }
        }
        // Each line must sum to 1 and its prefix partial sums must stay in
        // {0,1}; together these are the alternating-sign rules. The total is
        // checked first so the diagnostic names the coarser violation.
        for i in 0..n {
            let sum: i64 = (0..n).map(|j| entries[i * n + j] as i64).sum();
            if sum != 1 {
                return Err(AsmError::RowSum { row: i + 1, sum });
            }
            let mut prefix = 0i64;
            for j in 0..n {
                prefix += entries[i * n + j] as i64;
                if prefix != 0 && prefix != 1 {
                    return Err(AsmError::RowAlternation {
                        row: i + 1,
                        col: j + 1,
                    });
                }
            }
        }
        for j in 0..n {
            let sum: i64 = (0..n).map(|i| entries[i * n + j] as i64).sum();
            if sum != 1 {
                return Err(AsmError::ColSum { col: j + 1, sum });
            }
            let mut prefix = 0i64;
            for i in 0..n {
                prefix += entries[i * n + j] as i64;
                if prefix != 0 && prefix != 1 {
                    return Err(AsmError::ColAlternation {
                        col: j + 1,
                        row: i + 1,
                    });
                }
            }
        }
        Ok(Asm { n, entries })
    }

    /// Parses the text encoding: n lines of n space-separated entries.
    pub fn parse(text: &str) -> Result<Asm, AsmError> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<i64>, _> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| AsmError::Parse {
                        token: tok.to_string(),
                    })
                })
                .collect();
            rows.push(row?);
        }
        Asm::validate(&rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 1-based (i, j).
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// The observable E_k = sum_{i,j} (i-j)^k A_{ij}, exact.
    pub fn observable(&self, k: u32) -> Int {
        let mut total = Int::zero();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let a = self.entries[(i - 1) * self.n + (j - 1)];
                if a == 0 {
                    continue;
                }
                let d = Int::from(i as i64 - j as i64);
                let term = num::pow::pow(d, k as usize);
                if a > 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
        }
        total
    }

    pub fn transpose(&self) -> Asm {
        let n = self.n;
        let mut entries = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        Asm { n, entries }
    }

    pub fn reverse_rows(&self) -> Asm {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in (0..n).rev() {
            entries.extend_from_slice(&self.entries[i * n..(i + 1) * n]);
        }
        Asm { n, entries }
    }

    /// Row-major entry string; the canonical encoding for set-equality tests.
    pub fn canonical_key(&self) -> String {
        self.entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Column prefix sums turned into a monotone triangle: row i lists the
    /// columns j (1-based) where sum_{i' <= i} A_{i',j} = 1.
    pub fn to_monotone_triangle(&self) -> MonotoneTriangle {
        let n = self.n;
        let mut colsum = vec![0i8; n];
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(i + 1);
            for j in 0..n {
                colsum[j] += self.entries[i * n + j];
                if colsum[j] == 1 {
                    row.push(j + 1);
                }
            }
            rows.push(row);
        }
        MonotoneTriangle { rows }
    }
}

impl fmt::Display for Asm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| self.entries[i * self.n + j].to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Triangular array in bijection with ASMs: row i is a strictly increasing
/// list of i columns, consecutive rows interlace, and the last row is 1..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneTriangle {
    rows: Vec<Vec<usize>>,
}

impl MonotoneTriangle {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn validate(rows: Vec<Vec<usize>>) -> Result<MonotoneTriangle, AsmError> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(AsmError::TriangleRowLength {
                    row: i + 1,
                    len: row.len(),
                    expected: i + 1,
                });
            }
            if row.iter().any(|&v| v < 1 || v > n) {
                return Err(AsmError::TriangleRange { row: i + 1, n });
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(AsmError::TriangleRowOrder { row: i + 1 });
            }
        }
        for i in 0..n.saturating_sub(1) {
            if !interlaces(&rows[i], &rows[i + 1]) {
                return Err(AsmError::TriangleInterlacing {
                    row: i + 1,
                    next: i + 2,
                });
            }
        }
        // A strictly increasing length-n row over 1..n is forced to be 1..n,
        // so the bottom-row condition is implied by the checks above.
        Ok(MonotoneTriangle { rows })
    }

    /// Inverse of [`Asm::to_monotone_triangle`]: A_{i,j} is the indicator
    /// difference between consecutive triangle rows viewed as sets.
    pub fn to_asm(&self) -> Asm {
        let n = self.rows.len();
        let mut entries = vec![0i8; n * n];
        let mut prev = vec![false; n];
        for (i, row) in self.rows.iter().enumerate() {
            let mut curr = vec![false; n];
            for &j in row {
                curr[j - 1] = true;
            }
            for j in 0..n {
                entries[i * n + j] = (curr[j] as i8) - (prev[j] as i8);
            }
            prev = curr;
        }
        Asm { n, entries }
    }
}

/// Betweenness for consecutive triangle rows: each entry of the shorter row
/// lies weakly between its two neighbors in the longer row.
fn interlaces(upper: &[usize], lower: &[usize]) -> bool {
    upper
        .iter()
        .enumerate()
        .all(|(j, &v)| lower[j] <= v && v <= lower[j + 1])
}

/// Streams every ASM of size n exactly once in lexicographic-triangle order,
/// building monotone triangles row by row under the interlacing constraint.
pub fn for_each_asm<F: FnMut(&Asm)>(n: usize, cap: usize, mut f: F) -> Result<(), AsmError> {
    if n == 0 {
        return Err(AsmError::Empty);
    }
    if n > cap {
        return Err(AsmError::CapExceeded { n, cap });
    }
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n);
    for first in 1..=n {
        rows.push(vec![first]);
        extend_rows(&mut rows, n, &mut f);
        rows.pop();
    }
    Ok(())
}

fn extend_rows<F: FnMut(&Asm)>(rows: &mut Vec<Vec<usize>>, n: usize, f: &mut F) {
    if rows.len() == n {
        let t = MonotoneTriangle { rows: rows.clone() };
        f(&t.to_asm());
        return;
    }
    let prev = rows.last().unwrap().clone();
    let len = prev.len() + 1;
    let mut next = vec![0usize; len];
    fill_next(&prev, &mut next, 0, n, rows, f);
}

// Recursively chooses next[pos] in increasing order so successor rows come
// out lexicographically.
fn fill_next<F: FnMut(&Asm)>(
    prev: &[usize],
    next: &mut Vec<usize>,
    pos: usize,
    n: usize,
    rows: &mut Vec<Vec<usize>>,
    f: &mut F,
) {
    let len = prev.len() + 1;
    if pos == len {
        rows.push(next.clone());
        extend_rows(rows, n, f);
        rows.pop();
        return;
    }
    // next[pos] must satisfy: strictly greater than next[pos-1],
    // <= prev[pos] (betweenness, except at the right end),
    // >= prev[pos-1] (betweenness, except at the left end).
    let lo = match pos {
        0 => 1,
        _ => (next[pos - 1] + 1).max(prev[pos - 1]),
    };
    let hi = if pos == len - 1 { n } else { prev[pos] };
    for v in lo..=hi {
        next[pos] = v;
        fill_next(prev, next, pos + 1, n, rows, f);
    }
}

/// Collects the full enumeration; intended for small n.
pub fn enumerate(n: usize, cap: usize) -> Result<Vec<Asm>, AsmError> {
    let mut out = Vec::new();
    for_each_asm(n, cap, |a| out.push(a.clone()))?;
    Ok(out)
}

/// The ASM Theorem product formula: A_n = prod_{k=0}^{n-1} (3k+1)!/(n+k)!.
pub fn count_asm(n: usize) -> Int {
    let mut num = Int::one();
    let mut den = Int::one();
    for k in 0..n {
        num *= factorial(3 * k + 1);
        den *= factorial(n + k);
    }
    num / den
}

fn factorial(m: usize) -> Int {
    let mut acc = Int::one();
    for i in 2..=m as u64 {
        acc *= Int::from(i);
    }
    acc
}
