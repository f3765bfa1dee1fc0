//! Two-block CSS code construction.
//!
//! A two-block code is built from a pair of commuting square binary blocks
//! `A`, `B` as `H_X = [A | B]`, `H_Z = [B^T | A^T]`, which guarantees
//! `H_X * H_Z^T = AB + BA = 0`. Blocks can be circulants (single cyclic
//! variable) or bivariate-bicycle blocks (two cyclic variables), and a few
//! published bivariate-bicycle codes ship as named presets.

use std::fmt;

use crate::gf2::BitMatrix;

/// Errors from code construction and validation.
#[derive(Debug)]
pub enum CodeError {
    /// Blocks are not square or have different sizes.
    DimensionMismatch(String),
    /// `A * B != B * A`; the pair cannot form a CSS code.
    NonCommutingBlocks,
    /// Circulant shift power at least the circulant size.
    ShiftPowerOutOfRange { power: usize, size: usize },
    /// Bivariate exponent outside `[0, l) x [0, m)`.
    ExponentOutOfRange { a: usize, b: usize, l: usize, m: usize },
    /// Repeated term in a block polynomial.
    DuplicateTerm,
    /// Zero-sized circulant or bivariate block.
    EmptyBlock,
    /// Unknown preset name.
    UnknownPreset(String),
    /// A built-in preset failed its rank-identity check; this is a bug.
    PresetValidation { name: String, expected_k: usize, actual_k: usize },
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            CodeError::NonCommutingBlocks => write!(f, "blocks do not commute (AB != BA)"),
            CodeError::ShiftPowerOutOfRange { power, size } => {
                write!(f, "shift power {power} out of range for circulant size {size}")
            }
            CodeError::ExponentOutOfRange { a, b, l, m } => {
                write!(f, "monomial x^{a} y^{b} out of range for l={l}, m={m}")
            }
            CodeError::DuplicateTerm => write!(f, "duplicate term in block polynomial"),
            CodeError::EmptyBlock => write!(f, "block size must be at least 1"),
            CodeError::UnknownPreset(name) => write!(f, "unknown code preset `{name}`"),
            CodeError::PresetValidation { name, expected_k, actual_k } => write!(
                f,
                "preset `{name}` failed validation: expected k={expected_k}, got k={actual_k}"
            ),
        }
    }
}

impl std::error::Error for CodeError {}

// ---------------------------------------------------------------------------
// Block builders
// ---------------------------------------------------------------------------

/// A circulant block: the sum of powers of the cyclic shift matrix.
///
/// The shift convention is fixed: `S` has ones at `(i, i+1 mod size)`, so
/// `S^p` has ones at `(i, i+p mod size)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantSpec {
    pub size: usize,
    pub powers: Vec<usize>,
}

impl CirculantSpec {
    pub fn new(size: usize, powers: Vec<usize>) -> Self {
        Self { size, powers }
    }
}

/// Build the circulant matrix for a spec.
pub fn build_circulant(spec: &CirculantSpec) -> Result<BitMatrix, CodeError> {
    if spec.size == 0 {
        return Err(CodeError::EmptyBlock);
    }
    let mut seen = vec![false; spec.size];
    for &p in &spec.powers {
        if p >= spec.size {
            return Err(CodeError::ShiftPowerOutOfRange { power: p, size: spec.size });
        }
        if seen[p] {
            return Err(CodeError::DuplicateTerm);
        }
        seen[p] = true;
    }
    let mut m = BitMatrix::zeros(spec.size, spec.size);
    for &p in &spec.powers {
        for i in 0..spec.size {
            m.set(i, (i + p) % spec.size, true);
        }
    }
    Ok(m)
}

/// A bivariate-bicycle block: the sum of monomials `x^a y^b` where
/// `x = S_l (x) I_m` and `y = I_l (x) S_m` (Kronecker products of cyclic
/// shifts with identities). Any two such blocks over the same `(l, m)`
/// commute, since `x` and `y` do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePolySpec {
    pub l: usize,
    pub m: usize,
    /// Exponent pairs `(a, b)` with `a < l`, `b < m`.
    pub monomials: Vec<(usize, usize)>,
}

impl BivariatePolySpec {
    pub fn new(l: usize, m: usize, monomials: Vec<(usize, usize)>) -> Self {
        Self { l, m, monomials }
    }

    /// Block side length `l * m`.
    pub fn block_size(&self) -> usize {
        self.l * self.m
    }
}

/// Build the `lm x lm` block for a bivariate spec.
pub fn build_bb_block(spec: &BivariatePolySpec) -> Result<BitMatrix, CodeError> {
    if spec.l == 0 || spec.m == 0 {
        return Err(CodeError::EmptyBlock);
    }
    let mut seen = vec![false; spec.l * spec.m];
    for &(a, b) in &spec.monomials {
        if a >= spec.l || b >= spec.m {
            return Err(CodeError::ExponentOutOfRange { a, b, l: spec.l, m: spec.m });
        }
        if seen[a * spec.m + b] {
            return Err(CodeError::DuplicateTerm);
        }
        seen[a * spec.m + b] = true;
    }
    let size = spec.l * spec.m;
    let mut out = BitMatrix::zeros(size, size);
    for &(a, b) in &spec.monomials {
        // Row (i, j) of x^a y^b has its one at ((i+a) mod l, (j+b) mod m).
        for i in 0..spec.l {
            for j in 0..spec.m {
                let r = i * spec.m + j;
                let c = ((i + a) % spec.l) * spec.m + (j + b) % spec.m;
                out.set(r, c, true);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// TwoBlockCssCode
// ---------------------------------------------------------------------------

/// A validated two-block CSS code.
///
/// Carries the blocks, both check matrices, and `k` computed from the rank
/// identity `k = n - rank(H_X) - rank(H_Z)`. The claimed distance (when a
/// preset provides one) is stored as untrusted metadata and never verified.
#[derive(Debug, Clone)]
pub struct TwoBlockCssCode {
    a: BitMatrix,
    b: BitMatrix,
    h_x: BitMatrix,
    h_z: BitMatrix,
    n: usize,
    k: usize,
    claimed_distance: Option<usize>,
    name: Option<String>,
}

impl TwoBlockCssCode {
    /// Assemble and validate a code from commuting blocks.
    pub fn assemble(a: BitMatrix, b: BitMatrix) -> Result<Self, CodeError> {
        if a.rows() != a.cols() {
            return Err(CodeError::DimensionMismatch(format!(
                "block A is {}x{}, expected square",
                a.rows(),
                a.cols()
            )));
        }
        if b.rows() != b.cols() {
            return Err(CodeError::DimensionMismatch(format!(
                "block B is {}x{}, expected square",
                b.rows(),
                b.cols()
            )));
        }
        if a.rows() != b.rows() {
            return Err(CodeError::DimensionMismatch(format!(
                "block sizes differ: {} vs {}",
                a.rows(),
                b.rows()
            )));
        }
        if a.multiply(&b) != b.multiply(&a) {
            return Err(CodeError::NonCommutingBlocks);
        }
        let h_x = a.hstack(&b);
        let h_z = b.transpose().hstack(&a.transpose());
        // Implied by AB = BA, but cheap enough to check outright.
        assert!(
            h_x.multiply(&h_z.transpose()).is_zero(),
            "CSS orthogonality violated despite commuting blocks"
        );
        let n = 2 * a.rows();
        let k = n - h_x.rank() - h_z.rank();
        Ok(Self {
            a,
            b,
            h_x,
            h_z,
            n,
            k,
            claimed_distance: None,
            name: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Side length of each block (`n / 2`).
    pub fn block_size(&self) -> usize {
        self.n / 2
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    pub fn block_a(&self) -> &BitMatrix {
        &self.a
    }

    pub fn block_b(&self) -> &BitMatrix {
        &self.b
    }

    /// Claimed minimum distance, if a preset provided one. Never verified.
    pub fn claimed_distance(&self) -> Option<usize> {
        self.claimed_distance
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    fn with_metadata(mut self, name: &str, distance: usize) -> Self {
        self.name = Some(name.to_string());
        self.claimed_distance = Some(distance);
        self
    }
}

// ---------------------------------------------------------------------------
// Named presets
// ---------------------------------------------------------------------------

struct PresetEntry {
    name: &'static str,
    l: usize,
    m: usize,
    a_monomials: &'static [(usize, usize)],
    b_monomials: &'static [(usize, usize)],
    k: usize,
    d: usize,
}

/// Published bivariate-bicycle codes. Each entry is validated at load by the
/// rank identity; `d` is the claimed distance, stored but never checked.
const PRESETS: &[PresetEntry] = &[
    PresetEntry {
        name: "bb-72",
        l: 6,
        m: 6,
        a_monomials: &[(3, 0), (0, 1), (0, 2)],
        b_monomials: &[(0, 3), (1, 0), (2, 0)],
        k: 12,
        d: 6,
    },
    PresetEntry {
        name: "bb-90",
        l: 15,
        m: 3,
        a_monomials: &[(9, 0), (0, 1), (0, 2)],
        b_monomials: &[(0, 0), (2, 0), (7, 0)],
        k: 8,
        d: 10,
    },
    PresetEntry {
        name: "bb-108",
        l: 9,
        m: 6,
        a_monomials: &[(3, 0), (0, 1), (0, 2)],
        b_monomials: &[(0, 3), (1, 0), (2, 0)],
        k: 8,
        d: 10,
    },
    PresetEntry {
        name: "bb-144",
        l: 12,
        m: 6,
        a_monomials: &[(3, 0), (0, 1), (0, 2)],
        b_monomials: &[(0, 3), (1, 0), (2, 0)],
        k: 12,
        d: 12,
    },
    PresetEntry {
        name: "bb-288",
        l: 12,
        m: 12,
        a_monomials: &[(3, 0), (0, 2), (0, 7)],
        b_monomials: &[(0, 3), (1, 0), (2, 0)],
        k: 12,
        d: 18,
    },
];

/// Names of the built-in presets, in ascending block length.
pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

/// Build a named preset code (`bb-72`, `bb-90`, `bb-108`, `bb-144`, `bb-288`).
pub fn preset(name: &str) -> Result<TwoBlockCssCode, CodeError> {
    let entry = PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CodeError::UnknownPreset(name.to_string()))?;
    let a = build_bb_block(&BivariatePolySpec::new(entry.l, entry.m, entry.a_monomials.to_vec()))?;
    let b = build_bb_block(&BivariatePolySpec::new(entry.l, entry.m, entry.b_monomials.to_vec()))?;
    let code = TwoBlockCssCode::assemble(a, b)?.with_metadata(entry.name, entry.d);
    if code.k() != entry.k {
        return Err(CodeError::PresetValidation {
            name: entry.name.to_string(),
            expected_k: entry.k,
            actual_k: code.k(),
        });
    }
    Ok(code)
}
