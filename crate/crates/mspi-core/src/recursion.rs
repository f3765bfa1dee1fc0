//! Computation-tree dynamics of min-sum decoding on symmetric stabilizers.
//!
//! Under the isolation assumption a weight-`w` symmetric stabilizer reduces
//! to degree-2 checks, and the decoder's messages collapse onto a handful of
//! representative values: one per (node class, target check parity) pair.
//! This module iterates those recursions directly — the linear MS system,
//! whose spectrum `{1, +/- i sqrt(w/2 - 1), 1 - w/2}` explains the growing
//! sign oscillation, and the nonlinear past-influence systems that break the
//! estimate ties and let the decoder settle on a degenerate pattern.
//!
//! Message updates accumulate term by term in the same order the decoder
//! visits gadget-graph edges (unsatisfied checks first for nodes in error,
//! satisfied first for clean nodes, prior first always). Keeping the
//! operation sequences identical makes trajectories bit-for-bit equal to
//! decoder runs on `TannerGraph::build_isolated_stabilizer`, which the test
//! suite exploits as its strongest cross-check.

use std::fmt;

use num_complex::Complex64;

use crate::decoder::{clip, is_negative};

/// Errors from trajectory and spectrum computations.
#[derive(Debug)]
pub enum RecursionError {
    /// `w` must be even and at least 4.
    InvalidWeight { w: usize },
    /// `(f, g)` must satisfy `f + g = w/2` with `f >= g >= 0`; callers with
    /// `g > f` should swap colors (see `StabilizerParams::canonical`).
    InvalidSplit { w: usize, f: usize, g: usize },
    /// One-color analysis requires `g = 0`.
    ExpectedOneColor { g: usize },
    /// Two-color analysis requires `g >= 1`.
    ExpectedTwoColor,
    InvalidLambda(f64),
    InvalidBeta(f64),
    /// Closed-form eigenvalues failed the iteration-matrix check; this
    /// indicates a bug, not bad input.
    SpectrumVerification { residual: f64 },
}

impl fmt::Display for RecursionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecursionError::InvalidWeight { w } => {
                write!(f, "stabilizer weight {w} invalid: must be even and >= 4")
            }
            RecursionError::InvalidSplit { w, f: ff, g } => write!(
                f,
                "error split ({ff}, {g}) invalid for w={w}: need f + g = w/2 with f >= g >= 0 \
                 (swap colors for g > f)"
            ),
            RecursionError::ExpectedOneColor { g } => {
                write!(f, "one-color analysis requires g = 0, got g = {g}")
            }
            RecursionError::ExpectedTwoColor => write!(f, "two-color analysis requires g >= 1"),
            RecursionError::InvalidLambda(l) => write!(f, "lambda {l} must be >= 0"),
            RecursionError::InvalidBeta(b) => write!(f, "beta {b} out of range (0, 1]"),
            RecursionError::SpectrumVerification { residual } => {
                write!(f, "spectrum verification failed with residual {residual:e}")
            }
        }
    }
}

impl std::error::Error for RecursionError {}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Parameters of a `(w, 0)` stabilizer analysis: `f` errored yellow nodes and
/// `g` errored green nodes with `f + g = w/2`. `lambda = 0` selects the
/// homogeneous system; `init` seeds every message variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizerParams {
    w: usize,
    f: usize,
    g: usize,
    lambda: f64,
    beta: f64,
    iterations: usize,
    init: f64,
}

impl StabilizerParams {
    /// Homogeneous defaults: `lambda = 0`, `beta = 1`, 50 iterations,
    /// unit initial messages.
    pub fn new(w: usize, f: usize, g: usize) -> Result<Self, RecursionError> {
        if w < 4 || !w.is_multiple_of(2) {
            return Err(RecursionError::InvalidWeight { w });
        }
        if f + g != w / 2 || g > f {
            return Err(RecursionError::InvalidSplit { w, f, g });
        }
        Ok(Self { w, f, g, lambda: 0.0, beta: 1.0, iterations: 50, init: 1.0 })
    }

    /// Like `new`, but swaps the colors when `g > f` instead of failing.
    /// Returns whether a swap happened.
    pub fn canonical(w: usize, f: usize, g: usize) -> Result<(Self, bool), RecursionError> {
        if g > f {
            Ok((Self::new(w, g, f)?, true))
        } else {
            Ok((Self::new(w, f, g)?, false))
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self, RecursionError> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(RecursionError::InvalidLambda(lambda));
        }
        self.lambda = lambda;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self, RecursionError> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(RecursionError::InvalidBeta(beta));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_init(mut self, init: f64) -> Self {
        self.init = init;
        self
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn init(&self) -> f64 {
        self.init
    }
}

/// Which block the past-influence rule is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiSide {
    Yellow,
    Green,
}

// ---------------------------------------------------------------------------
// Trajectory records
// ---------------------------------------------------------------------------

/// Message values at one iteration. Two-color runs fill all eight slots;
/// one-color runs use only `a_y` / `a_g` and leave the rest as NaN. Plain MS
/// keeps yellow and green copies identical.
#[derive(Debug, Clone, Copy)]
pub struct MessageState {
    pub a_y: f64,
    pub b_y: f64,
    pub c_y: f64,
    pub d_y: f64,
    pub a_g: f64,
    pub b_g: f64,
    pub c_g: f64,
    pub d_g: f64,
}

impl MessageState {
    fn one_color(a_y: f64, a_g: f64) -> Self {
        Self {
            a_y,
            b_y: f64::NAN,
            c_y: f64::NAN,
            d_y: f64::NAN,
            a_g,
            b_g: f64::NAN,
            c_g: f64::NAN,
            d_g: f64::NAN,
        }
    }
}

/// Estimate values at one iteration, one per node label. One-color runs only
/// have `Y_1` and `G_0` nodes; the other two slots are NaN.
#[derive(Debug, Clone, Copy)]
pub struct EstimateState {
    pub q_y1: f64,
    pub q_g0: f64,
    pub q_y0: f64,
    pub q_g1: f64,
}

/// Per-iteration messages and estimates, including the initial state.
/// Row `l >= 1` estimates are computed from row `l - 1` messages, matching
/// the decoder's decision update; row 0 holds the prior-only decision.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub two_color: bool,
    pub messages: Vec<MessageState>,
    pub estimates: Vec<EstimateState>,
}

impl TrajectoryRecord {
    pub fn iterations(&self) -> usize {
        self.messages.len() - 1
    }

    /// CSV table; one-color runs emit the reduced column set.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.two_color {
            out.push_str("iter,a_y,b_y,c_y,d_y,a_g,b_g,c_g,d_g,q_Y1,q_G0,q_Y0,q_G1\n");
            for (l, (m, q)) in self.messages.iter().zip(&self.estimates).enumerate() {
                out.push_str(&format!(
                    "{l},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    m.a_y, m.b_y, m.c_y, m.d_y, m.a_g, m.b_g, m.c_g, m.d_g,
                    q.q_y1, q.q_g0, q.q_y0, q.q_g1
                ));
            }
        } else {
            out.push_str("iter,a_y,a_g,q_Y1,q_G0\n");
            for (l, (m, q)) in self.messages.iter().zip(&self.estimates).enumerate() {
                out.push_str(&format!("{l},{},{},{},{}\n", m.a_y, m.a_g, q.q_y1, q.q_g0));
            }
        }
        out
    }
}

/// Add `count` copies of the check output `beta * (sign * value)` into the
/// accumulator, one addition at a time. The decoder sums the same per-edge
/// values in the same order, so results agree bit for bit.
#[inline]
fn add_incoming(acc: &mut f64, count: usize, beta: f64, sign: f64, value: f64) {
    let term = beta * (sign * value);
    for _ in 0..count {
        *acc += term;
    }
}

/// Past-influence post-processing of a freshly summed message.
#[inline]
fn pi_rule(temp: f64, prev: f64) -> f64 {
    if is_negative(temp) == is_negative(prev) {
        temp
    } else {
        temp + prev
    }
}

// ---------------------------------------------------------------------------
// MS trajectories
// ---------------------------------------------------------------------------

/// One-color case: all `w/2` errors on yellow nodes, every check
/// unsatisfied, a single message value `a(l) = -(w/2 - 1) * beta * a(l-1) + lambda`.
pub fn ms_one_color_trajectory(params: &StabilizerParams) -> Result<TrajectoryRecord, RecursionError> {
    if params.g != 0 {
        return Err(RecursionError::ExpectedOneColor { g: params.g });
    }
    let half = params.w / 2;
    let (lambda, beta) = (params.lambda, params.beta);
    let mut a = params.init;
    let mut messages = vec![MessageState::one_color(a, a)];
    let mut estimates = vec![one_color_prior(lambda)];
    for _ in 0..params.iterations {
        let q = one_color_estimates(half, lambda, beta, a, a);
        let mut acc = lambda;
        add_incoming(&mut acc, half - 1, beta, -1.0, a);
        a = clip(acc);
        messages.push(MessageState::one_color(a, a));
        estimates.push(q);
    }
    Ok(TrajectoryRecord { two_color: false, messages, estimates })
}

/// Two-color case: the four-message linear system. Yellow and green copies
/// coincide under the symmetric rule; both are recorded.
pub fn ms_two_color_trajectory(params: &StabilizerParams) -> Result<TrajectoryRecord, RecursionError> {
    if params.g == 0 {
        return Err(RecursionError::ExpectedTwoColor);
    }
    let (f, g) = (params.f, params.g);
    let (lambda, beta) = (params.lambda, params.beta);
    let (mut a, mut b, mut c, mut d) = (params.init, params.init, params.init, params.init);
    let state = |a, b, c, d| MessageState { a_y: a, b_y: b, c_y: c, d_y: d, a_g: a, b_g: b, c_g: c, d_g: d };
    let mut messages = vec![state(a, b, c, d)];
    let mut estimates = vec![two_color_prior(lambda)];
    for _ in 0..params.iterations {
        let q = two_color_estimates(f, g, lambda, beta, [a, b, c, d], [a, b, c, d]);
        let next = two_color_step(f, g, lambda, beta, [a, b, c, d]);
        [a, b, c, d] = next;
        messages.push(state(a, b, c, d));
        estimates.push(q);
    }
    Ok(TrajectoryRecord { two_color: true, messages, estimates })
}

/// One linear-system step from the opposite color's previous messages.
///
/// Accumulation order per message type (prior first, then incoming groups in
/// the decoder's edge order):
///   a: f unsatisfied (-b), then g-1 satisfied (+c)
///   b: f-1 unsatisfied (-b), then g satisfied (+c)
///   c: f-1 satisfied (+a), then g unsatisfied (-d)
///   d: f satisfied (+a), then g-1 unsatisfied (-d)
fn two_color_step(f: usize, g: usize, lambda: f64, beta: f64, prev: [f64; 4]) -> [f64; 4] {
    let [a, b, c, d] = prev;
    let mut na = lambda;
    add_incoming(&mut na, f, beta, -1.0, b);
    add_incoming(&mut na, g - 1, beta, 1.0, c);
    let mut nb = lambda;
    add_incoming(&mut nb, f - 1, beta, -1.0, b);
    add_incoming(&mut nb, g, beta, 1.0, c);
    let mut nc = lambda;
    add_incoming(&mut nc, f - 1, beta, 1.0, a);
    add_incoming(&mut nc, g, beta, -1.0, d);
    let mut nd = lambda;
    add_incoming(&mut nd, f, beta, 1.0, a);
    add_incoming(&mut nd, g - 1, beta, -1.0, d);
    [clip(na), clip(nb), clip(nc), clip(nd)]
}

fn two_color_estimates(
    f: usize,
    g: usize,
    lambda: f64,
    beta: f64,
    from_yellow: [f64; 4],
    from_green: [f64; 4],
) -> EstimateState {
    // Yellow nodes hear green messages and vice versa.
    let [ay, by, cy, dy] = from_yellow;
    let [ag, bg, cg, dg] = from_green;
    let mut q_y1 = lambda;
    add_incoming(&mut q_y1, f, beta, -1.0, bg);
    add_incoming(&mut q_y1, g, beta, 1.0, cg);
    let mut q_g0 = lambda;
    add_incoming(&mut q_g0, f, beta, -1.0, by);
    add_incoming(&mut q_g0, g, beta, 1.0, cy);
    let mut q_y0 = lambda;
    add_incoming(&mut q_y0, f, beta, 1.0, ag);
    add_incoming(&mut q_y0, g, beta, -1.0, dg);
    let mut q_g1 = lambda;
    add_incoming(&mut q_g1, f, beta, 1.0, ay);
    add_incoming(&mut q_g1, g, beta, -1.0, dy);
    EstimateState { q_y1, q_g0, q_y0, q_g1 }
}

fn one_color_estimates(half: usize, lambda: f64, beta: f64, a_y: f64, a_g: f64) -> EstimateState {
    let mut q_y1 = lambda;
    add_incoming(&mut q_y1, half, beta, -1.0, a_g);
    let mut q_g0 = lambda;
    add_incoming(&mut q_g0, half, beta, -1.0, a_y);
    EstimateState { q_y1, q_g0, q_y0: f64::NAN, q_g1: f64::NAN }
}

fn one_color_prior(lambda: f64) -> EstimateState {
    EstimateState { q_y1: lambda, q_g0: lambda, q_y0: f64::NAN, q_g1: f64::NAN }
}

fn two_color_prior(lambda: f64) -> EstimateState {
    EstimateState { q_y1: lambda, q_g0: lambda, q_y0: lambda, q_g1: lambda }
}

// ---------------------------------------------------------------------------
// MS-PI trajectories
// ---------------------------------------------------------------------------

/// One-color MS-PI: yellow and green message copies split because only one
/// side applies the past-influence rule.
pub fn mspi_one_color_trajectory(
    params: &StabilizerParams,
    side: PiSide,
) -> Result<TrajectoryRecord, RecursionError> {
    if params.g != 0 {
        return Err(RecursionError::ExpectedOneColor { g: params.g });
    }
    let half = params.w / 2;
    let (lambda, beta) = (params.lambda, params.beta);
    let (mut a_y, mut a_g) = (params.init, params.init);
    let mut messages = vec![MessageState::one_color(a_y, a_g)];
    let mut estimates = vec![one_color_prior(lambda)];
    for _ in 0..params.iterations {
        let q = one_color_estimates(half, lambda, beta, a_y, a_g);
        let mut temp_y = lambda;
        add_incoming(&mut temp_y, half - 1, beta, -1.0, a_g);
        let mut temp_g = lambda;
        add_incoming(&mut temp_g, half - 1, beta, -1.0, a_y);
        let next_y = if side == PiSide::Yellow { pi_rule(temp_y, a_y) } else { temp_y };
        let next_g = if side == PiSide::Green { pi_rule(temp_g, a_g) } else { temp_g };
        a_y = clip(next_y);
        a_g = clip(next_g);
        messages.push(MessageState::one_color(a_y, a_g));
        estimates.push(q);
    }
    Ok(TrajectoryRecord { two_color: false, messages, estimates })
}

/// Two-color MS-PI: the eight-message nonlinear system. The indicator
/// compares each temporary message's sign with the previous value of the
/// same variable; on a flip the previous value is added.
pub fn mspi_two_color_trajectory(
    params: &StabilizerParams,
    side: PiSide,
) -> Result<TrajectoryRecord, RecursionError> {
    if params.g == 0 {
        return Err(RecursionError::ExpectedTwoColor);
    }
    let (f, g) = (params.f, params.g);
    let (lambda, beta) = (params.lambda, params.beta);
    let mut yellow = [params.init; 4];
    let mut green = [params.init; 4];
    let state = |y: [f64; 4], g: [f64; 4]| MessageState {
        a_y: y[0],
        b_y: y[1],
        c_y: y[2],
        d_y: y[3],
        a_g: g[0],
        b_g: g[1],
        c_g: g[2],
        d_g: g[3],
    };
    let mut messages = vec![state(yellow, green)];
    let mut estimates = vec![two_color_prior(lambda)];
    for _ in 0..params.iterations {
        let q = two_color_estimates(f, g, lambda, beta, yellow, green);
        // Temporary messages always come from the opposite color.
        let temp_y = two_color_step(f, g, lambda, beta, green);
        let temp_g = two_color_step(f, g, lambda, beta, yellow);
        let next_y = match side {
            PiSide::Yellow => apply_pi(temp_y, yellow),
            PiSide::Green => temp_y,
        };
        let next_g = match side {
            PiSide::Green => apply_pi(temp_g, green),
            PiSide::Yellow => temp_g,
        };
        yellow = next_y;
        green = next_g;
        messages.push(state(yellow, green));
        estimates.push(q);
    }
    Ok(TrajectoryRecord { two_color: true, messages, estimates })
}

fn apply_pi(temp: [f64; 4], prev: [f64; 4]) -> [f64; 4] {
    [
        clip(pi_rule(temp[0], prev[0])),
        clip(pi_rule(temp[1], prev[1])),
        clip(pi_rule(temp[2], prev[2])),
        clip(pi_rule(temp[3], prev[3])),
    ]
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Eigenvalues of the two-color MS iteration matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSpectrum {
    /// `{1, +i sqrt(w/2 - 1), -i sqrt(w/2 - 1), 1 - w/2}`.
    pub values: [Complex64; 4],
}

impl fmt::Display for EigenSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_one = |z: &Complex64| -> String {
            if z.im == 0.0 {
                format!("{}", z.re)
            } else if z.re == 0.0 {
                format!("{:+}i", z.im)
            } else {
                format!("{}{:+}i", z.re, z.im)
            }
        };
        let parts: Vec<String> = self.values.iter().map(fmt_one).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The linear map of the two-color system in state order `(a, b, c, d)`.
pub fn ms_iteration_matrix(f: usize, g: usize) -> [[f64; 4]; 4] {
    let (f, g) = (f as f64, g as f64);
    [
        [0.0, -f, g - 1.0, 0.0],
        [0.0, -(f - 1.0), g, 0.0],
        [f - 1.0, 0.0, 0.0, -g],
        [f, 0.0, 0.0, -(g - 1.0)],
    ]
}

/// `|det(M(f, g) - delta I)|` evaluated by complex Gaussian elimination.
pub fn char_poly_residual(f: usize, g: usize, delta: Complex64) -> f64 {
    let m = ms_iteration_matrix(f, g);
    let mut w = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (r, row) in m.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            w[r][c] = Complex64::new(v, 0.0);
            if r == c {
                w[r][c] -= delta;
            }
        }
    }
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| w[i][col].norm().partial_cmp(&w[j][col].norm()).unwrap())
            .unwrap();
        if w[pivot][col].norm() == 0.0 {
            return 0.0;
        }
        if pivot != col {
            w.swap(pivot, col);
            det = -det;
        }
        det *= w[col][col];
        let pivot_row = w[col];
        for row in w.iter_mut().skip(col + 1) {
            let factor = row[col] / pivot_row[col];
            for (c, cell) in row.iter_mut().enumerate().skip(col) {
                *cell -= factor * pivot_row[c];
            }
        }
    }
    det.norm()
}

/// Closed-form spectrum for weight `w`, verified against the iteration
/// matrix of every admissible `(f, g)` split (residual below 1e-9).
pub fn ms_eigen_spectrum(w: usize) -> Result<EigenSpectrum, RecursionError> {
    if w < 4 || !w.is_multiple_of(2) {
        return Err(RecursionError::InvalidWeight { w });
    }
    let half = w as f64 / 2.0;
    let s = (half - 1.0).sqrt();
    let values = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, s),
        Complex64::new(0.0, -s),
        Complex64::new(1.0 - half, 0.0),
    ];
    for f in 1..(w / 2) {
        let g = w / 2 - f;
        if g > f || g < 1 {
            continue;
        }
        for delta in &values {
            let residual = char_poly_residual(f, g, *delta);
            if residual > 1e-9 {
                return Err(RecursionError::SpectrumVerification { residual });
            }
        }
    }
    Ok(EigenSpectrum { values })
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// Readout of a trajectory's tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Some estimate strictly alternates sign every iteration.
    Oscillating,
    /// Estimate signs settled with errored labels positive (the decoder
    /// flags the clean in-set nodes: the complementary degenerate pattern).
    ConvergedPatternA,
    /// Estimate signs settled with errored labels negative (the decoder
    /// recovers the applied pattern itself).
    ConvergedPatternB,
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Oscillating => "Oscillating",
            Classification::ConvergedPatternA => "ConvergedPatternA",
            Classification::ConvergedPatternB => "ConvergedPatternB",
            Classification::Inconclusive => "Inconclusive",
        };
        write!(f, "{s}")
    }
}

/// Classify the trailing `window` iterations of a trajectory.
///
/// Panics if the trajectory does not extend past the window.
pub fn classify_convergence(traj: &TrajectoryRecord, window: usize) -> Classification {
    assert!(
        traj.estimates.len() > window && window >= 2,
        "trajectory length {} must exceed window {window} (>= 2)",
        traj.estimates.len()
    );
    let tail = &traj.estimates[traj.estimates.len() - window..];
    let columns: Vec<Vec<f64>> = if traj.two_color {
        vec![
            tail.iter().map(|q| q.q_y1).collect(),
            tail.iter().map(|q| q.q_g0).collect(),
            tail.iter().map(|q| q.q_y0).collect(),
            tail.iter().map(|q| q.q_g1).collect(),
        ]
    } else {
        vec![
            tail.iter().map(|q| q.q_y1).collect(),
            tail.iter().map(|q| q.q_g0).collect(),
        ]
    };
    let sign = |x: f64| if is_negative(x) { -1i8 } else { 1 };
    let constant = |col: &[f64]| col.windows(2).all(|w| sign(w[0]) == sign(w[1]));
    let alternating = |col: &[f64]| col.windows(2).all(|w| sign(w[0]) == -sign(w[1]));

    if columns.iter().all(|c| constant(c)) {
        let positive: Vec<bool> = columns.iter().map(|c| sign(c[0]) > 0).collect();
        // Column order: errored labels first (Y1 [, G1 last]), clean in the
        // middle (G0 [, Y0]).
        let (errored_pos, clean_pos): (Vec<bool>, Vec<bool>) = if traj.two_color {
            (vec![positive[0], positive[3]], vec![positive[1], positive[2]])
        } else {
            (vec![positive[0]], vec![positive[1]])
        };
        if errored_pos.iter().all(|&p| p) && clean_pos.iter().all(|&p| !p) {
            return Classification::ConvergedPatternA;
        }
        if errored_pos.iter().all(|&p| !p) && clean_pos.iter().all(|&p| p) {
            return Classification::ConvergedPatternB;
        }
        return Classification::Inconclusive;
    }
    if columns.iter().any(|c| alternating(c)) {
        return Classification::Oscillating;
    }
    Classification::Inconclusive
}

/// Default classification window; longer than the transients of the
/// homogeneous reference runs while staying cheap.
pub const CLASSIFY_WINDOW: usize = 10;

/// First iteration from which every estimate sign stays fixed through the
/// end of the trajectory. Row 0 (the prior-only decision) is excluded.
pub fn first_stable_iteration(traj: &TrajectoryRecord) -> Option<usize> {
    let sign = |x: f64| if is_negative(x) { -1i8 } else { 1 };
    let signs: Vec<[i8; 4]> = traj
        .estimates
        .iter()
        .map(|q| {
            [
                sign(q.q_y1),
                sign(q.q_g0),
                if traj.two_color { sign(q.q_y0) } else { 0 },
                if traj.two_color { sign(q.q_g1) } else { 0 },
            ]
        })
        .collect();
    if signs.len() < 2 {
        return None;
    }
    let last = *signs.last().unwrap();
    let mut stable_from = signs.len() - 1;
    for l in (1..signs.len()).rev() {
        if signs[l] == last {
            stable_from = l;
        } else {
            break;
        }
    }
    Some(stable_from)
}
