//! Code description files.
//!
//! A code spec is a small TOML document selecting one of three families:
//!
//! ```toml
//! family = "bb"
//! l = 12
//! m = 6
//! a_monomials = [[3, 0], [0, 1], [0, 2]]
//! b_monomials = [[0, 3], [1, 0], [2, 0]]
//! ```
//!
//! `family = "circulant"` takes `size`, `a_powers`, `b_powers`;
//! `family = "alist"` takes `hx_path` / `hz_path` (relative to the spec file)
//! and requires the imported pair to have the two-block shape
//! `H_X = [A | B]`, `H_Z = [B^T | A^T]`.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::alist::import_alist;
use crate::code::{
    build_bb_block, build_circulant, BivariatePolySpec, CirculantSpec, CodeError, TwoBlockCssCode,
};
use crate::gf2::BitMatrix;

/// Errors from loading a code spec file.
#[derive(Debug)]
pub enum SpecError {
    Io(PathBuf, std::io::Error),
    Parse(String),
    /// Field missing or inconsistent for the declared family.
    Invalid(String),
    /// The alist pair does not form a two-block code.
    NotTwoBlock(String),
    Code(CodeError),
    Alist(crate::alist::AlistError),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Io(path, e) => write!(f, "cannot read `{}`: {e}", path.display()),
            SpecError::Parse(e) => write!(f, "invalid code spec: {e}"),
            SpecError::Invalid(e) => write!(f, "invalid code spec: {e}"),
            SpecError::NotTwoBlock(e) => write!(f, "not a two-block code: {e}"),
            SpecError::Code(e) => write!(f, "code construction failed: {e}"),
            SpecError::Alist(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<CodeError> for SpecError {
    fn from(e: CodeError) -> Self {
        SpecError::Code(e)
    }
}

impl From<crate::alist::AlistError> for SpecError {
    fn from(e: crate::alist::AlistError) -> Self {
        SpecError::Alist(e)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: String,
    l: Option<usize>,
    m: Option<usize>,
    a_monomials: Option<Vec<[usize; 2]>>,
    b_monomials: Option<Vec<[usize; 2]>>,
    size: Option<usize>,
    a_powers: Option<Vec<usize>>,
    b_powers: Option<Vec<usize>>,
    hx_path: Option<String>,
    hz_path: Option<String>,
}

/// Parse a spec document and build the code. `base_dir` anchors relative
/// alist paths.
pub fn parse_code_spec(text: &str, base_dir: &Path) -> Result<TwoBlockCssCode, SpecError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    match raw.family.as_str() {
        "bb" => {
            let l = raw.l.ok_or_else(|| SpecError::Invalid("family `bb` requires `l`".into()))?;
            let m = raw.m.ok_or_else(|| SpecError::Invalid("family `bb` requires `m`".into()))?;
            let a = raw
                .a_monomials
                .ok_or_else(|| SpecError::Invalid("family `bb` requires `a_monomials`".into()))?;
            let b = raw
                .b_monomials
                .ok_or_else(|| SpecError::Invalid("family `bb` requires `b_monomials`".into()))?;
            let to_pairs = |v: Vec<[usize; 2]>| v.into_iter().map(|[a, b]| (a, b)).collect();
            let block_a = build_bb_block(&BivariatePolySpec::new(l, m, to_pairs(a)))?;
            let block_b = build_bb_block(&BivariatePolySpec::new(l, m, to_pairs(b)))?;
            Ok(TwoBlockCssCode::assemble(block_a, block_b)?)
        }
        "circulant" => {
            let size = raw
                .size
                .ok_or_else(|| SpecError::Invalid("family `circulant` requires `size`".into()))?;
            let a = raw
                .a_powers
                .ok_or_else(|| SpecError::Invalid("family `circulant` requires `a_powers`".into()))?;
            let b = raw
                .b_powers
                .ok_or_else(|| SpecError::Invalid("family `circulant` requires `b_powers`".into()))?;
            let block_a = build_circulant(&CirculantSpec::new(size, a))?;
            let block_b = build_circulant(&CirculantSpec::new(size, b))?;
            Ok(TwoBlockCssCode::assemble(block_a, block_b)?)
        }
        "alist" => {
            let hx_path = raw
                .hx_path
                .ok_or_else(|| SpecError::Invalid("family `alist` requires `hx_path`".into()))?;
            let hz_path = raw
                .hz_path
                .ok_or_else(|| SpecError::Invalid("family `alist` requires `hz_path`".into()))?;
            let read = |rel: &str| -> Result<String, SpecError> {
                let path = base_dir.join(rel);
                std::fs::read_to_string(&path).map_err(|e| SpecError::Io(path, e))
            };
            let h_x = import_alist(&read(&hx_path)?)?;
            let h_z = import_alist(&read(&hz_path)?)?;
            code_from_matrices(h_x, h_z)
        }
        other => Err(SpecError::Invalid(format!(
            "unknown family `{other}` (expected bb, circulant, or alist)"
        ))),
    }
}

/// Load a spec from disk.
pub fn load_code_spec(path: &Path) -> Result<TwoBlockCssCode, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io(path.to_path_buf(), e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_code_spec(&text, base)
}

/// Reconstruct blocks from an imported matrix pair and re-validate through
/// `assemble`, requiring the exact two-block layout.
fn code_from_matrices(h_x: BitMatrix, h_z: BitMatrix) -> Result<TwoBlockCssCode, SpecError> {
    let n = h_x.cols();
    if !n.is_multiple_of(2) || h_x.rows() != n / 2 {
        return Err(SpecError::NotTwoBlock(format!(
            "H_X is {}x{}, expected (n/2) x n with square blocks",
            h_x.rows(),
            h_x.cols()
        )));
    }
    if h_z.rows() != n / 2 || h_z.cols() != n {
        return Err(SpecError::NotTwoBlock(format!(
            "H_Z is {}x{}, expected {}x{}",
            h_z.rows(),
            h_z.cols(),
            n / 2,
            n
        )));
    }
    let nb = n / 2;
    let mut a = BitMatrix::zeros(nb, nb);
    let mut b = BitMatrix::zeros(nb, nb);
    for r in 0..nb {
        for c in 0..nb {
            a.set(r, c, h_x.get(r, c));
            b.set(r, c, h_x.get(r, nb + c));
        }
    }
    let code = TwoBlockCssCode::assemble(a, b)?;
    if code.h_z() != &h_z {
        return Err(SpecError::NotTwoBlock(
            "H_Z does not equal [B^T | A^T] for the blocks read from H_X".into(),
        ));
    }
    Ok(code)
}
