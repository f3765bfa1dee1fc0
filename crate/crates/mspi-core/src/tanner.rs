//! Tanner graph view of a parity-check matrix.
//!
//! Edges get deterministic ids in row-major matrix order, which fixes the
//! message indexing of the decoder across runs. Every variable carries a
//! block color: yellow for columns below the split, green above. The module
//! also builds the isolated-stabilizer gadget used to validate the
//! computation-tree recursions.

use std::fmt;

use crate::gf2::BitMatrix;

/// Block color of a variable node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Yellow,
    Green,
}

/// Errors from graph construction.
#[derive(Debug)]
pub enum TannerError {
    /// A check row with fewer than two nonzero entries.
    DegenerateCheck { check: usize, degree: usize },
    /// Gadget weight must be even and at least 4.
    InvalidStabilizerWeight { w: usize },
    /// Split exceeds the variable count.
    InvalidSplit { split: usize, n: usize },
}

impl fmt::Display for TannerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TannerError::DegenerateCheck { check, degree } => {
                write!(f, "check {check} has degree {degree}, need at least 2")
            }
            TannerError::InvalidStabilizerWeight { w } => {
                write!(f, "stabilizer weight {w} invalid: must be even and >= 4")
            }
            TannerError::InvalidSplit { split, n } => {
                write!(f, "color split {split} exceeds variable count {n}")
            }
        }
    }
}

impl std::error::Error for TannerError {}

/// Bipartite check/variable graph with per-edge ids and block colors.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    n: usize,
    m: usize,
    split: usize,
    edge_var: Vec<u32>,
    edge_check: Vec<u32>,
    // CSR adjacency: edge ids per variable (ascending check index) and per
    // check (ascending variable index).
    var_offsets: Vec<u32>,
    var_edge_list: Vec<u32>,
    check_offsets: Vec<u32>,
    check_edge_list: Vec<u32>,
    h: BitMatrix,
}

impl TannerGraph {
    /// Build the graph of `h` with variables `0..split` colored yellow.
    pub fn from_matrix(h: &BitMatrix, split: usize) -> Result<Self, TannerError> {
        let (m, n) = (h.rows(), h.cols());
        if split > n {
            return Err(TannerError::InvalidSplit { split, n });
        }
        let mut edge_var = Vec::new();
        let mut edge_check = Vec::new();
        let mut var_edges: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut check_edges: Vec<Vec<u32>> = vec![Vec::new(); m];
        for (i, check_adjacency) in check_edges.iter_mut().enumerate() {
            for (j, var_adjacency) in var_edges.iter_mut().enumerate() {
                if h.get(i, j) {
                    let e = edge_var.len() as u32;
                    edge_var.push(j as u32);
                    edge_check.push(i as u32);
                    var_adjacency.push(e);
                    check_adjacency.push(e);
                }
            }
            let degree = check_adjacency.len();
            if degree < 2 {
                return Err(TannerError::DegenerateCheck { check: i, degree });
            }
        }
        let flatten = |lists: Vec<Vec<u32>>| {
            let mut offsets = Vec::with_capacity(lists.len() + 1);
            let mut flat = Vec::new();
            offsets.push(0u32);
            for list in lists {
                flat.extend_from_slice(&list);
                offsets.push(flat.len() as u32);
            }
            (offsets, flat)
        };
        let (var_offsets, var_edge_list) = flatten(var_edges);
        let (check_offsets, check_edge_list) = flatten(check_edges);
        Ok(Self {
            n,
            m,
            split,
            edge_var,
            edge_check,
            var_offsets,
            var_edge_list,
            check_offsets,
            check_edge_list,
            h: h.clone(),
        })
    }

    /// Gadget graph for a weight-`w` symmetric stabilizer under isolation.
    ///
    /// The trapping set is modeled as `K_{w/2, w/2}`: `w/2` yellow and `w/2`
    /// green variables with one degree-2 check per (yellow, green) pair.
    /// Every variable then has degree `w/2`, the induced degree of a
    /// stabilizer member once outside checks are frozen by the isolation
    /// assumption.
    pub fn build_isolated_stabilizer(w: usize) -> Result<Self, TannerError> {
        if w < 4 || !w.is_multiple_of(2) {
            return Err(TannerError::InvalidStabilizerWeight { w });
        }
        let half = w / 2;
        let mut h = BitMatrix::zeros(half * half, w);
        for y in 0..half {
            for g in 0..half {
                let check = y * half + g;
                h.set(check, y, true);
                h.set(check, half + g, true);
            }
        }
        Self::from_matrix(&h, half)
    }

    pub fn variable_count(&self) -> usize {
        self.n
    }

    pub fn check_count(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edge_var.len()
    }

    /// First green variable index.
    pub fn split(&self) -> usize {
        self.split
    }

    pub fn color(&self, var: usize) -> Color {
        if var < self.split {
            Color::Yellow
        } else {
            Color::Green
        }
    }

    pub fn edge_variable(&self, edge: u32) -> usize {
        self.edge_var[edge as usize] as usize
    }

    pub fn edge_check(&self, edge: u32) -> usize {
        self.edge_check[edge as usize] as usize
    }

    /// Edge ids incident to variable `j`, ascending by check index.
    pub fn var_edges(&self, j: usize) -> &[u32] {
        &self.var_edge_list[self.var_offsets[j] as usize..self.var_offsets[j + 1] as usize]
    }

    /// Edge ids incident to check `i`, ascending by variable index.
    pub fn check_edges(&self, i: usize) -> &[u32] {
        &self.check_edge_list[self.check_offsets[i] as usize..self.check_offsets[i + 1] as usize]
    }

    pub fn var_degree(&self, j: usize) -> usize {
        self.var_edges(j).len()
    }

    pub fn check_degree(&self, i: usize) -> usize {
        self.check_edges(i).len()
    }

    /// The parity-check matrix the graph was built from.
    pub fn matrix(&self) -> &BitMatrix {
        &self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::preset;

    #[test]
    fn single_check_two_variables() {
        let h = BitMatrix::from_dense(1, 2, &[1, 1]);
        let g = TannerGraph::from_matrix(&h, 1).unwrap();
        assert_eq!(g.check_count(), 1);
        assert_eq!(g.variable_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.color(0), Color::Yellow);
        assert_eq!(g.color(1), Color::Green);
    }

    #[test]
    fn bb144_h_z_graph_shape() {
        let code = preset("bb-144").unwrap();
        let g = TannerGraph::from_matrix(code.h_z(), 72).unwrap();
        assert_eq!(g.check_count(), 72);
        assert_eq!(g.variable_count(), 144);
        assert_eq!(g.edge_count(), 72 * 6);
        for i in 0..g.check_count() {
            assert_eq!(g.check_degree(i), 6);
        }
        for j in 0..g.variable_count() {
            assert_eq!(g.var_degree(j), 3);
        }
    }

    #[test]
    fn zero_row_is_degenerate() {
        let h = BitMatrix::from_dense(2, 3, &[1, 1, 0, 0, 0, 0]);
        let err = TannerGraph::from_matrix(&h, 1).unwrap_err();
        assert!(matches!(err, TannerError::DegenerateCheck { check: 1, degree: 0 }));
    }

    #[test]
    fn edge_ids_are_row_major() {
        let h = BitMatrix::from_dense(2, 3, &[1, 0, 1, 0, 1, 1]);
        let g = TannerGraph::from_matrix(&h, 2).unwrap();
        assert_eq!(g.edge_variable(0), 0);
        assert_eq!(g.edge_variable(1), 2);
        assert_eq!(g.edge_variable(2), 1);
        assert_eq!(g.edge_variable(3), 2);
        assert_eq!(g.edge_check(0), 0);
        assert_eq!(g.edge_check(3), 1);
    }

    #[test]
    fn adjacency_sums_match_edge_count() {
        let code = preset("bb-72").unwrap();
        let g = TannerGraph::from_matrix(code.h_z(), 36).unwrap();
        let by_vars: usize = (0..g.variable_count()).map(|j| g.var_degree(j)).sum();
        let by_checks: usize = (0..g.check_count()).map(|i| g.check_degree(i)).sum();
        assert_eq!(by_vars, g.edge_count());
        assert_eq!(by_checks, g.edge_count());
    }

    #[test]
    fn gadget_w6_shape() {
        let g = TannerGraph::build_isolated_stabilizer(6).unwrap();
        assert_eq!(g.variable_count(), 6);
        assert_eq!(g.check_count(), 9);
        for j in 0..6 {
            assert_eq!(g.var_degree(j), 3);
        }
        for i in 0..9 {
            assert_eq!(g.check_degree(i), 2);
        }
    }

    #[test]
    fn gadget_w4_is_a_four_cycle() {
        let g = TannerGraph::build_isolated_stabilizer(4).unwrap();
        assert_eq!(g.variable_count(), 4);
        assert_eq!(g.check_count(), 4);
        for j in 0..4 {
            assert_eq!(g.var_degree(j), 2);
        }
    }

    #[test]
    fn gadget_w8_counts() {
        let g = TannerGraph::build_isolated_stabilizer(8).unwrap();
        assert_eq!(g.variable_count(), 8);
        assert_eq!(g.check_count(), 16);
        for j in 0..8 {
            assert_eq!(g.var_degree(j), 4);
        }
    }

    #[test]
    fn gadget_rejects_odd_or_small_weight() {
        assert!(matches!(
            TannerGraph::build_isolated_stabilizer(5),
            Err(TannerError::InvalidStabilizerWeight { w: 5 })
        ));
        assert!(matches!(
            TannerGraph::build_isolated_stabilizer(2),
            Err(TannerError::InvalidStabilizerWeight { w: 2 })
        ));
    }

    #[test]
    fn gadget_unsatisfied_counts_match_transition_multiplicities() {
        // Weight-(w/2) error with f yellow (first f) and g green (last g)
        // errors: every errored variable sees f unsatisfied and g satisfied
        // checks; every clean variable sees g unsatisfied and f satisfied.
        let w = 8;
        let g_err = 1;
        let f_err = 3;
        let graph = TannerGraph::build_isolated_stabilizer(w).unwrap();
        let half = w / 2;
        let mut error = crate::gf2::BitVector::zeros(w);
        for y in 0..f_err {
            error.set(y, true);
        }
        for gi in (half - g_err)..half {
            error.set(half + gi, true);
        }
        let syndrome = graph.matrix().mul_vec_t(&error);
        for j in 0..w {
            let unsat = graph
                .var_edges(j)
                .iter()
                .filter(|&&e| syndrome.get(graph.edge_check(e)))
                .count();
            // Y_1 and G_0 see f unsatisfied checks; Y_0 and G_1 see g.
            let class_one = (j < half) == error.get(j);
            let expected = if class_one { f_err } else { g_err };
            assert_eq!(unsat, expected, "variable {j}");
        }
    }
}
