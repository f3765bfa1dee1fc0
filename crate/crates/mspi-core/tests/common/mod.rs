//! Shared drivers for the gadget-graph equivalence checks.

use mspi_core::decoder::{Decoder, DecoderConfig, PiAssignment};
use mspi_core::gf2::BitVector;
use mspi_core::recursion::{
    ms_one_color_trajectory, ms_two_color_trajectory, mspi_one_color_trajectory,
    mspi_two_color_trajectory, PiSide, StabilizerParams, TrajectoryRecord,
};
use mspi_core::tanner::{Color, TannerGraph};

/// Canonical gadget error: first `f` yellow variables, last `g` green ones.
/// This placement aligns the decoder's adjacency order with the recursion's
/// accumulation order, which is what makes the comparison bit-exact.
pub fn gadget_error(w: usize, f: usize, g: usize) -> BitVector {
    let mut e = BitVector::zeros(w);
    for y in 0..f {
        e.set(y, true);
    }
    for j in (w - g)..w {
        e.set(j, true);
    }
    e
}

/// `(f, g)` splits with `f >= g >= 0` and `f + g = w/2`.
pub fn all_splits(w: usize) -> Vec<(usize, usize)> {
    let half = w / 2;
    let mut out = vec![(half, 0)];
    for g in 1..=half / 2 {
        out.push((half - g, g));
    }
    out
}

struct EdgeKey {
    color: Color,
    errored: bool,
    satisfied: bool,
}

fn expected_message(traj: &TrajectoryRecord, l: usize, key: &EdgeKey) -> f64 {
    let m = &traj.messages[l];
    if !traj.two_color {
        return match key.color {
            Color::Yellow => m.a_y,
            Color::Green => m.a_g,
        };
    }
    // Classes: {Y_1, G_0} send a to satisfied checks and b to unsatisfied
    // ones; {Y_0, G_1} send c and d.
    let class_one = match key.color {
        Color::Yellow => key.errored,
        Color::Green => !key.errored,
    };
    match (class_one, key.satisfied, key.color) {
        (true, true, Color::Yellow) => m.a_y,
        (true, false, Color::Yellow) => m.b_y,
        (false, true, Color::Yellow) => m.c_y,
        (false, false, Color::Yellow) => m.d_y,
        (true, true, Color::Green) => m.a_g,
        (true, false, Color::Green) => m.b_g,
        (false, true, Color::Green) => m.c_g,
        (false, false, Color::Green) => m.d_g,
    }
}

fn expected_estimate(traj: &TrajectoryRecord, l: usize, color: Color, errored: bool) -> f64 {
    let q = &traj.estimates[l];
    match (color, errored) {
        (Color::Yellow, true) => q.q_y1,
        (Color::Yellow, false) => q.q_y0,
        (Color::Green, true) => q.q_g1,
        (Color::Green, false) => q.q_g0,
    }
}

/// Drive the decoder and the recursion side by side for `iterations` steps
/// and require bit-for-bit equality of every edge message and every decision
/// sum. Returns an error description instead of panicking so callers can
/// aggregate.
pub fn check_equivalence(
    w: usize,
    f: usize,
    g: usize,
    beta: f64,
    pi: Option<PiSide>,
    iterations: usize,
) -> Result<(), String> {
    let alpha = 0.08;
    let graph = TannerGraph::build_isolated_stabilizer(w).unwrap();
    let error = gadget_error(w, f, g);
    let syndrome = graph.matrix().mul_vec_t(&error);

    let config = match pi {
        None => {
            if beta == 1.0 {
                DecoderConfig::ms(iterations, alpha).unwrap()
            } else {
                DecoderConfig::nms(beta, iterations, alpha).unwrap()
            }
        }
        Some(PiSide::Yellow) => DecoderConfig::ms_pi(beta, iterations, alpha)
            .unwrap()
            .with_pi_assignment(PiAssignment::YellowOnly)
            .unwrap(),
        Some(PiSide::Green) => DecoderConfig::ms_pi(beta, iterations, alpha).unwrap(),
    };
    let lambda = config.llr();

    let params = StabilizerParams::new(w, f, g)
        .unwrap()
        .with_lambda(lambda)
        .unwrap()
        .with_beta(beta)
        .unwrap()
        .with_iterations(iterations)
        .with_init(lambda);
    let traj = match (g, pi) {
        (0, None) => ms_one_color_trajectory(&params).unwrap(),
        (_, None) => ms_two_color_trajectory(&params).unwrap(),
        (0, Some(side)) => mspi_one_color_trajectory(&params, side).unwrap(),
        (_, Some(side)) => mspi_two_color_trajectory(&params, side).unwrap(),
    };

    let mut decoder = Decoder::new(&graph, &config);
    decoder.start(&syndrome);
    for l in 1..=iterations {
        decoder.step();
        let nu = decoder.variable_messages();
        for e in 0..graph.edge_count() as u32 {
            let j = graph.edge_variable(e);
            let i = graph.edge_check(e);
            let key = EdgeKey {
                color: graph.color(j),
                errored: error.get(j),
                satisfied: !syndrome.get(i),
            };
            let expected = expected_message(&traj, l, &key);
            let got = nu[e as usize];
            if got != expected {
                return Err(format!(
                    "w={w} f={f} g={g} beta={beta} pi={pi:?}: edge {e} (var {j}, check {i}) \
                     iteration {l}: decoder {got:e} vs recursion {expected:e}"
                ));
            }
        }
        for j in 0..graph.variable_count() {
            let expected = expected_estimate(&traj, l, graph.color(j), error.get(j));
            let got = decoder.llr_sums()[j];
            if got != expected {
                return Err(format!(
                    "w={w} f={f} g={g} beta={beta} pi={pi:?}: estimate for var {j} iteration {l}: \
                     decoder {got:e} vs recursion {expected:e}"
                ));
            }
        }
    }
    Ok(())
}
