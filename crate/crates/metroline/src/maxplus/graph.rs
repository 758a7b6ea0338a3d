//! Precedence graph of departure events.
//!
//! One node per segment departure; an edge `(from, to, weight, shift)` says
//! event `k` of `to` waits at least `weight` seconds after event `k − shift`
//! of `from`. The asymptotic growth rate of the induced dynamics is the
//! maximum cycle ratio `Σweight / Σshift`.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::cycle::{self, RatioEdge};

/// Default node-count cap for the brute-force cycle enumeration oracle.
pub const ENUMERATION_NODE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("edge references node {index} but the graph has {nodes} nodes")]
    InvalidNode { index: usize, nodes: usize },
    #[error("edge {from} -> {to} has a non-finite weight")]
    NonFiniteWeight { from: usize, to: usize },
    #[error("a cycle with zero total shift exists (deadlocked event order)")]
    ZeroShiftCycle,
    #[error("graph is not strongly connected on its finite edges")]
    Disconnected,
    #[error("graph has no cycles")]
    NoCycles,
    #[error("graph with {nodes} nodes exceeds the enumeration limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("policy iteration failed to converge")]
    IterationLimit,
}

/// One precedence edge: `to` departs at least `weight` seconds after the
/// departure `shift` events earlier at `from`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventEdge {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
    pub shift: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventGraph {
    nodes: usize,
    edges: Vec<EventEdge>,
}

impl EventGraph {
    /// Validates node indices, weight finiteness, and the absence of
    /// zero-shift cycles (which would make the event order circular).
    pub fn new(nodes: usize, edges: Vec<EventEdge>) -> Result<Self, GraphError> {
        for e in &edges {
            if e.from >= nodes {
                return Err(GraphError::InvalidNode {
                    index: e.from,
                    nodes,
                });
            }
            if e.to >= nodes {
                return Err(GraphError::InvalidNode { index: e.to, nodes });
            }
            if !e.weight.is_finite() {
                return Err(GraphError::NonFiniteWeight {
                    from: e.from,
                    to: e.to,
                });
            }
        }
        let g = EventGraph { nodes, edges };
        g.check_zero_shift_acyclic()?;
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[EventEdge] {
        &self.edges
    }

    pub fn reversed(&self) -> Self {
        EventGraph {
            nodes: self.nodes,
            edges: self
                .edges
                .iter()
                .map(|e| EventEdge {
                    from: e.to,
                    to: e.from,
                    weight: e.weight,
                    shift: e.shift,
                })
                .collect(),
        }
    }

    /// Kahn's algorithm over the zero-shift subgraph; a leftover node means
    /// a zero-shift cycle.
    fn check_zero_shift_acyclic(&self) -> Result<(), GraphError> {
        let mut indeg = vec![0usize; self.nodes];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.nodes];
        for e in self.edges.iter().filter(|e| e.shift == 0) {
            indeg[e.to] += 1;
            out[e.from].push(e.to);
        }
        let mut queue: Vec<usize> = (0..self.nodes).filter(|&u| indeg[u] == 0).collect();
        let mut seen = 0;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            seen += 1;
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
        if seen == self.nodes {
            Ok(())
        } else {
            Err(GraphError::ZeroShiftCycle)
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.nodes == 0 {
            return false;
        }
        let reaches_all = |edges_from: &dyn Fn(usize) -> Vec<usize>| {
            let mut seen = vec![false; self.nodes];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for v in edges_from(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        let fwd = |u: usize| {
            self.edges
                .iter()
                .filter(|e| e.from == u)
                .map(|e| e.to)
                .collect::<Vec<_>>()
        };
        let bwd = |u: usize| {
            self.edges
                .iter()
                .filter(|e| e.to == u)
                .map(|e| e.from)
                .collect::<Vec<_>>()
        };
        reaches_all(&fwd) && reaches_all(&bwd)
    }

    fn rational_edges(&self) -> Result<Vec<RatioEdge<BigRational>>, GraphError> {
        self.edges
            .iter()
            .map(|e| {
                let weight =
                    BigRational::from_float(e.weight).ok_or(GraphError::NonFiniteWeight {
                        from: e.from,
                        to: e.to,
                    })?;
                Ok(RatioEdge {
                    from: e.from,
                    to: e.to,
                    weight,
                    shift: e.shift,
                })
            })
            .collect()
    }

    /// The maximum cycle ratio, exact.
    ///
    /// Every finite `f64` weight converts to a rational without loss, so the
    /// result is the exact ratio of the critical cycle. Policy iteration is
    /// the primary route; Karp's algorithm on the shift-normalized graph is
    /// the fallback should it fail to converge.
    pub fn growth_rate(&self) -> Result<BigRational, GraphError> {
        if !self.is_strongly_connected() {
            return Err(GraphError::Disconnected);
        }
        let edges = self.rational_edges()?;
        match cycle::howard(self.nodes, &edges) {
            Ok(sol) => Ok(sol.rate),
            Err(GraphError::IterationLimit) => cycle::karp(self.nodes, &edges),
            Err(e) => Err(e),
        }
    }

    /// [`Self::growth_rate`] rounded to seconds per event.
    pub fn growth_rate_seconds(&self) -> Result<f64, GraphError> {
        Ok(rational_to_f64(&self.growth_rate()?))
    }

    /// The maximum cycle ratio via the Karp route only. Kept public so the
    /// two routes can be compared against each other and the enumeration
    /// oracle.
    pub fn growth_rate_karp(&self) -> Result<BigRational, GraphError> {
        if !self.is_strongly_connected() {
            return Err(GraphError::Disconnected);
        }
        cycle::karp(self.nodes, &self.rational_edges()?)
    }

    /// All simple-cycle ratios, ascending. Errors if the graph exceeds
    /// `max_nodes` (use [`ENUMERATION_NODE_LIMIT`] by default).
    pub fn enumerate_cycle_ratios(
        &self,
        max_nodes: usize,
    ) -> Result<Vec<BigRational>, GraphError> {
        cycle::enumerate_cycle_ratios(self.nodes, &self.rational_edges()?, max_nodes)
    }

    /// Departure offsets of the stationary regime: a vector `v` with
    /// `v[to] = max over incoming edges (v[from] + weight − rate·shift)`,
    /// normalized so the smallest offset is zero.
    ///
    /// Seeding the dynamics with these offsets makes every subsequent
    /// headway equal the growth rate.
    pub fn stationary_offsets(&self) -> Result<Vec<f64>, GraphError> {
        if !self.is_strongly_connected() {
            return Err(GraphError::Disconnected);
        }
        let rev = self.reversed();
        let sol = cycle::howard(rev.nodes, &rev.rational_edges()?)?;
        let min = sol
            .potential
            .iter()
            .min()
            .cloned()
            .ok_or(GraphError::NoCycles)?;
        Ok(sol
            .potential
            .iter()
            .map(|p| rational_to_f64(&(p - &min)))
            .collect())
    }
}

/// Nearest-double conversion; our rationals come from f64 inputs and stay
/// within range, so the conversion never overflows.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational within f64 range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn edge(from: usize, to: usize, weight: f64, shift: u32) -> EventEdge {
        EventEdge {
            from,
            to,
            weight,
            shift,
        }
    }

    #[test]
    fn growth_rate_of_single_cycle() {
        let g = EventGraph::new(2, vec![edge(0, 1, 1.0, 1), edge(1, 0, 2.0, 0)]).unwrap();
        assert_eq!(g.growth_rate().unwrap(), BigRational::from_f64(3.0).unwrap());
        assert_eq!(g.growth_rate_seconds().unwrap(), 3.0);
    }

    #[test]
    fn growth_rate_three_halves() {
        let g = EventGraph::new(2, vec![edge(0, 1, 1.0, 1), edge(1, 0, 2.0, 1)]).unwrap();
        assert_eq!(g.growth_rate_seconds().unwrap(), 1.5);
        assert_eq!(g.growth_rate_karp().unwrap(), g.growth_rate().unwrap());
    }

    #[test]
    fn zero_shift_cycle_is_rejected_at_construction() {
        let err = EventGraph::new(2, vec![edge(0, 1, 1.0, 0), edge(1, 0, 2.0, 0)]).unwrap_err();
        assert_eq!(err, GraphError::ZeroShiftCycle);
    }

    #[test]
    fn disconnected_graph_errors_on_growth_rate() {
        let g = EventGraph::new(2, vec![edge(0, 0, 2.0, 1), edge(1, 1, 5.0, 1)]).unwrap();
        assert_eq!(g.growth_rate().unwrap_err(), GraphError::Disconnected);
        // ... but enumeration still lists both cycles.
        let ratios = g.enumerate_cycle_ratios(12).unwrap();
        assert_eq!(
            ratios,
            vec![
                BigRational::from_f64(2.0).unwrap(),
                BigRational::from_f64(5.0).unwrap()
            ]
        );
    }

    #[test]
    fn nan_weight_is_rejected() {
        let err = EventGraph::new(2, vec![edge(0, 1, f64::NAN, 1)]).unwrap_err();
        assert!(matches!(err, GraphError::NonFiniteWeight { .. }));
    }

    #[test]
    fn stationary_offsets_satisfy_the_spectral_equation() {
        let g = EventGraph::new(
            3,
            vec![
                edge(0, 1, 3.0, 1),
                edge(1, 2, 1.0, 0),
                edge(2, 0, 2.0, 1),
                edge(1, 0, 4.0, 1),
            ],
        )
        .unwrap();
        let rate = g.growth_rate_seconds().unwrap();
        let v = g.stationary_offsets().unwrap();
        for to in 0..3 {
            let best = g
                .edges()
                .iter()
                .filter(|e| e.to == to)
                .map(|e| v[e.from] + e.weight - rate * f64::from(e.shift))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((best - v[to]).abs() < 1e-12, "node {to}: {best} vs {}", v[to]);
        }
        assert!(v.iter().cloned().fold(f64::INFINITY, f64::min).abs() < 1e-15);
    }
}
