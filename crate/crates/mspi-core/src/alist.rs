//! MacKay alist import/export for parity-check matrices.
//!
//! Layout: line 1 `n m` (columns then rows), line 2 the maximum column and
//! row weights, line 3 the per-column weights, line 4 the per-row weights,
//! then one line per column listing 1-based row indices and one line per row
//! listing 1-based column indices. Export never pads; import accepts both
//! padded (trailing zeros) and unpadded files.

use std::fmt;

use crate::gf2::BitMatrix;

/// Parse failure with the 1-based line it occurred on.
#[derive(Debug)]
pub struct AlistError {
    pub line: usize,
    pub message: String,
}

impl AlistError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

impl fmt::Display for AlistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed alist at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for AlistError {}

/// Serialize a matrix in alist form.
pub fn export_alist(h: &BitMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let col_weights: Vec<usize> = (0..n).map(|c| h.col_weight(c)).collect();
    let row_weights: Vec<usize> = (0..m).map(|r| h.row_weight(r)).collect();
    let max_col = col_weights.iter().copied().max().unwrap_or(0);
    let max_row = row_weights.iter().copied().max().unwrap_or(0);

    let join = |nums: &[usize]| nums.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");

    let mut out = String::new();
    out.push_str(&format!("{n} {m}\n"));
    out.push_str(&format!("{max_col} {max_row}\n"));
    out.push_str(&join(&col_weights));
    out.push('\n');
    out.push_str(&join(&row_weights));
    out.push('\n');
    for c in 0..n {
        let rows: Vec<usize> = (0..m).filter(|&r| h.get(r, c)).map(|r| r + 1).collect();
        out.push_str(&join(&rows));
        out.push('\n');
    }
    for r in 0..m {
        let cols: Vec<usize> = (0..n).filter(|&c| h.get(r, c)).map(|c| c + 1).collect();
        out.push_str(&join(&cols));
        out.push('\n');
    }
    out
}

/// Parse an alist file back into a matrix. Round-trips `export_alist` exactly.
pub fn import_alist(text: &str) -> Result<BitMatrix, AlistError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let mut next_numbers = |expected: &str| -> Result<(usize, Vec<usize>), AlistError> {
        for (lineno, line) in lines.by_ref() {
            if line.trim().is_empty() {
                continue;
            }
            let mut nums = Vec::new();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| AlistError::new(lineno, format!("expected {expected}, found `{tok}`")))?;
                nums.push(v);
            }
            return Ok((lineno, nums));
        }
        Err(AlistError::new(text.lines().count() + 1, format!("file truncated, expected {expected}")))
    };

    let (lineno, dims) = next_numbers("matrix dimensions `n m`")?;
    if dims.len() != 2 {
        return Err(AlistError::new(lineno, "expected exactly two dimensions `n m`"));
    }
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(AlistError::new(lineno, "dimensions must be positive"));
    }

    let (lineno, maxw) = next_numbers("maximum weights")?;
    if maxw.len() != 2 {
        return Err(AlistError::new(lineno, "expected two maximum weights"));
    }
    let (max_col, max_row) = (maxw[0], maxw[1]);

    let (lineno, col_weights) = next_numbers("per-column weights")?;
    if col_weights.len() != n {
        return Err(AlistError::new(lineno, format!("expected {n} column weights, found {}", col_weights.len())));
    }
    if col_weights.iter().any(|&w| w > max_col) {
        return Err(AlistError::new(lineno, "column weight exceeds declared maximum"));
    }

    let (lineno, row_weights) = next_numbers("per-row weights")?;
    if row_weights.len() != m {
        return Err(AlistError::new(lineno, format!("expected {m} row weights, found {}", row_weights.len())));
    }
    if row_weights.iter().any(|&w| w > max_row) {
        return Err(AlistError::new(lineno, "row weight exceeds declared maximum"));
    }

    let mut h = BitMatrix::zeros(m, n);
    for (c, &expected_weight) in col_weights.iter().enumerate() {
        let (lineno, entries) = next_numbers("column adjacency list")?;
        // Padded files list max_col entries with zero fill.
        let nonzero: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if nonzero.len() != expected_weight {
            return Err(AlistError::new(
                lineno,
                format!("column {} lists {} rows, weight says {}", c + 1, nonzero.len(), expected_weight),
            ));
        }
        for e in nonzero {
            if e > m {
                return Err(AlistError::new(lineno, format!("row index {e} out of range (m={m})")));
            }
            h.set(e - 1, c, true);
        }
    }
    // The row section must agree with what the column section built.
    for (r, &expected_weight) in row_weights.iter().enumerate() {
        let (lineno, entries) = next_numbers("row adjacency list")?;
        let nonzero: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if nonzero.len() != expected_weight {
            return Err(AlistError::new(
                lineno,
                format!("row {} lists {} columns, weight says {}", r + 1, nonzero.len(), expected_weight),
            ));
        }
        let mut listed: Vec<usize> = Vec::with_capacity(nonzero.len());
        for e in nonzero {
            if e > n {
                return Err(AlistError::new(lineno, format!("column index {e} out of range (n={n})")));
            }
            listed.push(e - 1);
        }
        listed.sort_unstable();
        let actual: Vec<usize> = (0..n).filter(|&c| h.get(r, c)).collect();
        if listed != actual {
            return Err(AlistError::new(lineno, format!("row {} disagrees with column lists", r + 1)));
        }
    }
    Ok(h)
}
