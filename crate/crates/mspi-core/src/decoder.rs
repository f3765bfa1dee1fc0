//! Syndrome-based min-sum decoding with a flooding schedule.
//!
//! One engine covers four variants: plain MS (`beta = 1`), normalized MS,
//! damped MS (the past-influence rule on every variable node) and MS-PI (the
//! past-influence rule on the variable nodes of a single block). The
//! past-influence rule compares the sign of the freshly summed
//! variable-to-check message against the message sent on the same edge in
//! the previous iteration; on a sign flip the two are added, damping the
//! oscillations that symmetric stabilizers excite.
//!
//! Message arithmetic is deliberately plain: per-edge sums accumulate in
//! adjacency order with no marginal-minus-incoming shortcut, so a run on an
//! isolated-stabilizer gadget reproduces the computation-tree recursions of
//! `recursion` to the last bit.

use std::fmt;

use crate::gf2::BitVector;
use crate::tanner::{Color, TannerGraph};

/// Symmetric clamp on variable-to-check messages. Oscillation amplitudes
/// grow like `(w/2 - 1)^l` on trapping sets, so unbounded runs need a
/// ceiling to stay clear of infinities. The value must sit far above any
/// reachable amplitude at practical iteration caps: once messages saturate
/// at the clamp, spurious ties and exact cancellations can let the decoder
/// match a syndrome that the unsaturated dynamics never would. 1e150 is not
/// reached before ~iteration 213 at the fastest observed growth (factor 5),
/// while sums of clamped messages still fit in f64.
pub const MESSAGE_CLIP: f64 = 1e150;

/// Sign convention: `sgn(0) = +1`.
#[inline]
pub(crate) fn is_negative(x: f64) -> bool {
    x < 0.0
}

#[inline]
pub(crate) fn clip(x: f64) -> f64 {
    x.clamp(-MESSAGE_CLIP, MESSAGE_CLIP)
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderVariant {
    /// Plain min-sum (`beta = 1`).
    Ms,
    /// Normalized min-sum: check outputs scaled by `beta`.
    Nms,
    /// Damped min-sum: past-influence rule on both blocks.
    Dms,
    /// Min-sum with past influence on one block.
    MsPi,
}

impl fmt::Display for DecoderVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DecoderVariant::Ms => "ms",
            DecoderVariant::Nms => "nms",
            DecoderVariant::Dms => "dms",
            DecoderVariant::MsPi => "ms-pi",
        };
        write!(f, "{s}")
    }
}

/// Which block uses the past-influence variable update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiAssignment {
    None,
    YellowOnly,
    GreenOnly,
    Both,
}

impl PiAssignment {
    fn applies_to(self, color: Color) -> bool {
        match self {
            PiAssignment::None => false,
            PiAssignment::YellowOnly => color == Color::Yellow,
            PiAssignment::GreenOnly => color == Color::Green,
            PiAssignment::Both => true,
        }
    }
}

impl fmt::Display for PiAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PiAssignment::None => "none",
            PiAssignment::YellowOnly => "yellow",
            PiAssignment::GreenOnly => "green",
            PiAssignment::Both => "both",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug)]
pub enum ConfigError {
    BetaOutOfRange(f64),
    AlphaOutOfRange(f64),
    /// The rule assignment contradicts the variant, e.g. MS with a PI block.
    IncompatiblePiAssignment { variant: DecoderVariant, pi: PiAssignment },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::BetaOutOfRange(b) => write!(f, "beta {b} out of range (0, 1]"),
            ConfigError::AlphaOutOfRange(a) => write!(f, "alpha {a} out of range (0, 0.5)"),
            ConfigError::IncompatiblePiAssignment { variant, pi } => {
                write!(f, "pi assignment `{pi}` incompatible with variant `{variant}`")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// Decoder settings: variant, normalization, iteration cap, channel prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    variant: DecoderVariant,
    beta: f64,
    max_iters: usize,
    alpha: f64,
    pi_assignment: PiAssignment,
}

impl DecoderConfig {
    /// Build a config; the PI assignment defaults per variant
    /// (MS/nMS: none, DMS: both, MS-PI: green).
    pub fn new(
        variant: DecoderVariant,
        beta: f64,
        max_iters: usize,
        alpha: f64,
    ) -> Result<Self, ConfigError> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(ConfigError::BetaOutOfRange(beta));
        }
        if variant == DecoderVariant::Ms && beta != 1.0 {
            return Err(ConfigError::BetaOutOfRange(beta));
        }
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(ConfigError::AlphaOutOfRange(alpha));
        }
        let pi_assignment = match variant {
            DecoderVariant::Ms | DecoderVariant::Nms => PiAssignment::None,
            DecoderVariant::Dms => PiAssignment::Both,
            DecoderVariant::MsPi => PiAssignment::GreenOnly,
        };
        Ok(Self { variant, beta, max_iters, alpha, pi_assignment })
    }

    pub fn ms(max_iters: usize, alpha: f64) -> Result<Self, ConfigError> {
        Self::new(DecoderVariant::Ms, 1.0, max_iters, alpha)
    }

    pub fn nms(beta: f64, max_iters: usize, alpha: f64) -> Result<Self, ConfigError> {
        Self::new(DecoderVariant::Nms, beta, max_iters, alpha)
    }

    pub fn dms(beta: f64, max_iters: usize, alpha: f64) -> Result<Self, ConfigError> {
        Self::new(DecoderVariant::Dms, beta, max_iters, alpha)
    }

    pub fn ms_pi(beta: f64, max_iters: usize, alpha: f64) -> Result<Self, ConfigError> {
        Self::new(DecoderVariant::MsPi, beta, max_iters, alpha)
    }

    /// Override the PI block assignment. Only MS-PI may choose a side.
    pub fn with_pi_assignment(mut self, pi: PiAssignment) -> Result<Self, ConfigError> {
        let compatible = match self.variant {
            DecoderVariant::Ms | DecoderVariant::Nms => pi == PiAssignment::None,
            DecoderVariant::Dms => pi == PiAssignment::Both,
            DecoderVariant::MsPi => {
                pi == PiAssignment::YellowOnly || pi == PiAssignment::GreenOnly
            }
        };
        if !compatible {
            return Err(ConfigError::IncompatiblePiAssignment { variant: self.variant, pi });
        }
        self.pi_assignment = pi;
        Ok(self)
    }

    pub fn variant(&self) -> DecoderVariant {
        self.variant
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn pi_assignment(&self) -> PiAssignment {
        self.pi_assignment
    }

    /// Channel prior `lambda = ln((1 - alpha) / alpha)`, positive for
    /// `alpha < 1/2`.
    pub fn llr(&self) -> f64 {
        ((1.0 - self.alpha) / self.alpha).ln()
    }
}

// ---------------------------------------------------------------------------
// Message-passing primitives
// ---------------------------------------------------------------------------

/// Check-node update: for each edge `(i, j)`,
/// `mu = beta * (1 - 2 s_i) * prod_{j' != j} sgn(nu_{j'}) * min_{j' != j} |nu_{j'}|`,
/// computed with the usual two-minima trick.
pub fn check_update(
    graph: &TannerGraph,
    syndrome: &BitVector,
    nu: &[f64],
    beta: f64,
    mu: &mut [f64],
) {
    for i in 0..graph.check_count() {
        let edges = graph.check_edges(i);
        let mut neg_parity = syndrome.get(i);
        let mut min1 = f64::INFINITY;
        let mut min2 = f64::INFINITY;
        let mut argmin = edges[0];
        for &e in edges {
            let v = nu[e as usize];
            if is_negative(v) {
                neg_parity = !neg_parity;
            }
            let a = v.abs();
            if a < min1 {
                min2 = min1;
                min1 = a;
                argmin = e;
            } else if a < min2 {
                min2 = a;
            }
        }
        for &e in edges {
            let v = nu[e as usize];
            let negative = neg_parity ^ is_negative(v);
            let mag = if e == argmin { min2 } else { min1 };
            let signed = if negative { -mag } else { mag };
            mu[e as usize] = beta * signed;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    Plain,
    PastInfluence,
}

/// One variable's outgoing messages, accumulated in adjacency order.
#[inline]
fn update_variable(
    graph: &TannerGraph,
    j: usize,
    mu: &[f64],
    lambda: f64,
    rule: Rule,
    nu_prev: &[f64],
    nu_out: &mut [f64],
) {
    let edges = graph.var_edges(j);
    for &e in edges {
        let mut acc = lambda;
        for &other in edges {
            if other != e {
                acc += mu[other as usize];
            }
        }
        let out = match rule {
            Rule::Plain => acc,
            Rule::PastInfluence => {
                let prev = nu_prev[e as usize];
                if is_negative(acc) == is_negative(prev) {
                    acc
                } else {
                    acc + prev
                }
            }
        };
        nu_out[e as usize] = clip(out);
    }
}

/// Plain variable update `nu = lambda + sum of other incoming mu` for every
/// variable.
pub fn variable_update_plain(graph: &TannerGraph, mu: &[f64], lambda: f64, nu_out: &mut [f64]) {
    for j in 0..graph.variable_count() {
        update_variable(graph, j, mu, lambda, Rule::Plain, &[], nu_out);
    }
}

/// Past-influence variable update for every variable: the plain sum is kept
/// when its sign agrees with the previous message on the edge, otherwise the
/// previous message is added. `nu_prev` must hold the previous iteration's
/// post-summation outputs.
pub fn variable_update_pi(
    graph: &TannerGraph,
    mu: &[f64],
    lambda: f64,
    nu_prev: &[f64],
    nu_out: &mut [f64],
) {
    for j in 0..graph.variable_count() {
        update_variable(graph, j, mu, lambda, Rule::PastInfluence, nu_prev, nu_out);
    }
}

/// Decision update: per variable `T_j = lambda + sum of all incoming mu`;
/// the estimate flags `T_j < 0` (so `T_j = 0` decides "no error").
pub fn hard_decision(graph: &TannerGraph, mu: &[f64], lambda: f64) -> (BitVector, Vec<f64>) {
    let mut e_hat = BitVector::zeros(graph.variable_count());
    let mut sums = vec![0.0; graph.variable_count()];
    hard_decision_into(graph, mu, lambda, &mut sums, &mut e_hat);
    (e_hat, sums)
}

fn hard_decision_into(
    graph: &TannerGraph,
    mu: &[f64],
    lambda: f64,
    sums: &mut [f64],
    e_hat: &mut BitVector,
) {
    for (j, sum) in sums.iter_mut().enumerate() {
        let mut acc = lambda;
        for &e in graph.var_edges(j) {
            acc += mu[e as usize];
        }
        *sum = acc;
        e_hat.set(j, is_negative(acc));
    }
}

// ---------------------------------------------------------------------------
// Decoder
// ---------------------------------------------------------------------------

/// Result of a decode call.
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub e_hat: BitVector,
    /// Whether the estimate's syndrome equals the input syndrome.
    pub matched: bool,
    pub iterations_used: usize,
    /// Final per-variable decision sums `T_j`.
    pub llr_sums: Vec<f64>,
}

/// Reusable decoder state over a fixed graph. Buffers are allocated once, so
/// Monte Carlo trials can decode without touching the allocator.
pub struct Decoder<'g> {
    graph: &'g TannerGraph,
    lambda: f64,
    beta: f64,
    max_iters: usize,
    pi: PiAssignment,
    syndrome: BitVector,
    nu: Vec<f64>,
    nu_next: Vec<f64>,
    mu: Vec<f64>,
    sums: Vec<f64>,
    e_hat: BitVector,
    s_hat: BitVector,
}

impl<'g> Decoder<'g> {
    pub fn new(graph: &'g TannerGraph, config: &DecoderConfig) -> Self {
        let edges = graph.edge_count();
        Self {
            graph,
            lambda: config.llr(),
            beta: config.beta(),
            max_iters: config.max_iters(),
            pi: config.pi_assignment(),
            syndrome: BitVector::zeros(graph.check_count()),
            nu: vec![0.0; edges],
            nu_next: vec![0.0; edges],
            mu: vec![0.0; edges],
            sums: vec![0.0; graph.variable_count()],
            e_hat: BitVector::zeros(graph.variable_count()),
            s_hat: BitVector::zeros(graph.check_count()),
        }
    }

    /// Reset message state for a new syndrome: `nu^(0) = lambda` everywhere.
    ///
    /// Panics if the syndrome length differs from the check count.
    pub fn start(&mut self, syndrome: &BitVector) {
        assert_eq!(
            syndrome.len(),
            self.graph.check_count(),
            "syndrome length {} != check count {}",
            syndrome.len(),
            self.graph.check_count()
        );
        self.syndrome = syndrome.clone();
        self.nu.fill(self.lambda);
        self.mu.fill(0.0);
        self.sums.fill(self.lambda);
        self.e_hat.clear();
        self.s_hat.clear();
    }

    /// One flooding iteration: all check messages, then all variable
    /// messages, then the decision update. Returns true when the estimate's
    /// syndrome matches the input.
    pub fn step(&mut self) -> bool {
        check_update(self.graph, &self.syndrome, &self.nu, self.beta, &mut self.mu);
        for j in 0..self.graph.variable_count() {
            let rule = if self.pi.applies_to(self.graph.color(j)) {
                Rule::PastInfluence
            } else {
                Rule::Plain
            };
            update_variable(self.graph, j, &self.mu, self.lambda, rule, &self.nu, &mut self.nu_next);
        }
        std::mem::swap(&mut self.nu, &mut self.nu_next);
        hard_decision_into(self.graph, &self.mu, self.lambda, &mut self.sums, &mut self.e_hat);
        self.graph.matrix().mul_vec_t_into(&self.e_hat, &mut self.s_hat);
        self.s_hat == self.syndrome
    }

    /// Full decode: early exit on syndrome match, zero syndromes return the
    /// all-zero estimate without iterating.
    pub fn decode(&mut self, syndrome: &BitVector) -> DecodeSummary {
        self.start(syndrome);
        if syndrome.is_zero() {
            return DecodeSummary { matched: true, iterations_used: 0 };
        }
        for iter in 1..=self.max_iters {
            if self.step() {
                return DecodeSummary { matched: true, iterations_used: iter };
            }
        }
        DecodeSummary { matched: false, iterations_used: self.max_iters }
    }

    pub fn estimate(&self) -> &BitVector {
        &self.e_hat
    }

    pub fn llr_sums(&self) -> &[f64] {
        &self.sums
    }

    /// Current variable-to-check messages, indexed by edge id.
    pub fn variable_messages(&self) -> &[f64] {
        &self.nu
    }

    /// Current check-to-variable messages, indexed by edge id.
    pub fn check_messages(&self) -> &[f64] {
        &self.mu
    }
}

/// Lightweight per-trial result; the estimate stays borrowed in the decoder.
#[derive(Debug, Clone, Copy)]
pub struct DecodeSummary {
    pub matched: bool,
    pub iterations_used: usize,
}

/// One-shot decode producing an owned outcome.
pub fn decode(graph: &TannerGraph, syndrome: &BitVector, config: &DecoderConfig) -> DecodeOutcome {
    let mut dec = Decoder::new(graph, config);
    let summary = dec.decode(syndrome);
    DecodeOutcome {
        e_hat: dec.estimate().clone(),
        matched: summary.matched,
        iterations_used: summary.iterations_used,
        llr_sums: dec.llr_sums().to_vec(),
    }
}
