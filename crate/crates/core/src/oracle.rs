//! Exact shortest-path solvers: A* under the octile heuristic and a
//! uniform-cost Dijkstra reference.
//!
//! Both searches share one engine and one deterministic tie-breaking
//! rule (lower f, then lower heuristic, then insertion order, with
//! children pushed in the fixed direction order), so returned paths and
//! turn counts are reproducible across runs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::SQRT_2;
use std::time::Instant;

use crate::grid::{path_metrics, Adjacency, Instance, Node, Path};
use crate::{Error, Result};

/// Result of an exact search.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Minimal-cost path for the instance.
    pub path: Path,
    /// Nodes expanded (popped and processed) during the search.
    pub expanded: usize,
    /// Solver wall time in seconds.
    pub elapsed: f64,
}

/// Octile distance: cost of the cheapest route on an empty 8-connected
/// grid, the tightest admissible closed form for unit/sqrt(2) steps.
pub fn octile(a: Node, b: Node) -> f64 {
    let dx = f64::from((a.x - b.x).abs());
    let dy = f64::from((a.y - b.y).abs());
    dx.max(dy) + (SQRT_2 - 1.0) * dx.min(dy)
}

struct OpenEntry {
    f: f64,
    h: f64,
    seq: usize,
    node: Node,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// BinaryHeap is a max-heap; reverse so the smallest (f, h, seq) pops first.
impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.h.total_cmp(&self.h))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn search(instance: &Instance, use_heuristic: bool) -> Result<OracleResult> {
    let started = Instant::now();
    let map = &instance.map;
    let adjacency = Adjacency::new(map);
    let cells = map.width() * map.height();
    let h_of = |n: Node| {
        if use_heuristic {
            octile(n, instance.goal)
        } else {
            0.0
        }
    };

    let mut g = vec![f64::INFINITY; cells];
    let mut parent: Vec<Option<Node>> = vec![None; cells];
    let mut closed = vec![false; cells];
    let mut open = BinaryHeap::new();
    let mut seq = 0usize;
    let mut expanded = 0usize;

    g[map.index(instance.start)] = 0.0;
    open.push(OpenEntry {
        f: h_of(instance.start),
        h: h_of(instance.start),
        seq,
        node: instance.start,
    });

    while let Some(entry) = open.pop() {
        let at = entry.node;
        let at_idx = map.index(at);
        if closed[at_idx] {
            continue;
        }
        closed[at_idx] = true;
        expanded += 1;
        if at == instance.goal {
            let mut nodes = vec![at];
            let mut cursor = at;
            while let Some(p) = parent[map.index(cursor)] {
                nodes.push(p);
                cursor = p;
            }
            nodes.reverse();
            let path = path_metrics(&nodes, map).expect("search steps are legal");
            return Ok(OracleResult {
                path,
                expanded,
                elapsed: started.elapsed().as_secs_f64(),
            });
        }
        for &(n, step, _) in adjacency.of(at) {
            let n_idx = map.index(n);
            if closed[n_idx] {
                continue;
            }
            let tentative = g[at_idx] + step;
            if tentative < g[n_idx] {
                g[n_idx] = tentative;
                parent[n_idx] = Some(at);
                let h = h_of(n);
                seq += 1;
                open.push(OpenEntry {
                    f: tentative + h,
                    h,
                    seq,
                    node: n,
                });
            }
        }
    }
    Err(Error::NoPath)
}

/// Minimal-cost path via A* with the octile heuristic.
pub fn astar(instance: &Instance) -> Result<OracleResult> {
    search(instance, true)
}

/// Minimal-cost path via uniform-cost search; same tie-breaking as [`astar`].
pub fn dijkstra(instance: &Instance) -> Result<OracleResult> {
    search(instance, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;
    use crate::mapgen::{c_trap_map, generate_dataset, sample_instances};

    fn node(x: i32, y: i32) -> Node {
        Node::new(x, y)
    }

    #[test]
    fn empty_diagonal_is_optimal() {
        let inst = Instance::new(GridMap::empty(10, 10).unwrap(), node(0, 0), node(9, 9)).unwrap();
        let r = astar(&inst).unwrap();
        assert!((r.path.cost() - 9.0 * SQRT_2).abs() < 1e-9);
        assert_eq!(r.path.turns(), 0);
    }

    #[test]
    fn single_step() {
        let inst = Instance::new(GridMap::empty(3, 3).unwrap(), node(0, 0), node(1, 0)).unwrap();
        assert!((astar(&inst).unwrap().path.cost() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn straight_line_dijkstra() {
        let inst = Instance::new(GridMap::empty(3, 3).unwrap(), node(0, 0), node(2, 0)).unwrap();
        assert!((dijkstra(&inst).unwrap().path.cost() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn enclosed_goal_has_no_path() {
        let map = GridMap::with_obstacles(5, 5, &[(3, 3), (3, 4), (4, 3)]).unwrap();
        let inst = Instance::new(map, node(0, 0), node(4, 4)).unwrap();
        assert!(matches!(astar(&inst), Err(Error::NoPath)));
        assert!(matches!(dijkstra(&inst), Err(Error::NoPath)));
    }

    #[test]
    fn results_are_reproducible() {
        let inst = c_trap_instance_10();
        let a = astar(&inst).unwrap();
        let b = astar(&inst).unwrap();
        assert_eq!(a.path.nodes(), b.path.nodes());
        assert_eq!(a.expanded, b.expanded);
    }

    fn c_trap_instance_10() -> Instance {
        Instance::new(c_trap_map(10), node(0, 0), node(9, 9)).unwrap()
    }

    /// Exhaustive minimum over all simple paths, by depth-first
    /// enumeration with cost pruning. Independent of the search engine.
    fn brute_force_min_cost(inst: &Instance) -> Option<f64> {
        fn dfs(
            map: &GridMap,
            goal: Node,
            at: Node,
            visited: &mut Vec<bool>,
            cost: f64,
            best: &mut Option<f64>,
        ) {
            if let Some(b) = *best {
                if cost >= b {
                    return;
                }
            }
            if at == goal {
                *best = Some(cost);
                return;
            }
            for (n, step) in crate::grid::neighbors(map, at).unwrap() {
                let idx = map.index(n);
                if !visited[idx] {
                    visited[idx] = true;
                    dfs(map, goal, n, visited, cost + step, best);
                    visited[idx] = false;
                }
            }
        }
        let mut visited = vec![false; inst.map.width() * inst.map.height()];
        visited[inst.map.index(inst.start)] = true;
        let mut best = None;
        dfs(
            &inst.map,
            inst.goal,
            inst.start,
            &mut visited,
            0.0,
            &mut best,
        );
        best
    }

    #[test]
    fn dijkstra_matches_exhaustive_enumeration() {
        // 5x5 crop with a small concave pocket in the middle.
        let map = GridMap::with_obstacles(5, 5, &[(1, 1), (2, 1), (3, 1), (3, 2), (3, 3)]).unwrap();
        let inst = Instance::new(map, node(0, 0), node(4, 4)).unwrap();
        let exact = brute_force_min_cost(&inst).expect("reachable");
        let d = dijkstra(&inst).unwrap();
        assert!((d.path.cost() - exact).abs() < 1e-9);
        let a = astar(&inst).unwrap();
        assert!((a.path.cost() - exact).abs() < 1e-9);
    }

    #[test]
    fn astar_equals_dijkstra_and_prunes() {
        let maps = generate_dataset(10, 21);
        let instances = sample_instances(&maps, 40, 33).unwrap();
        for inst in &instances {
            let a = astar(inst).unwrap();
            let d = dijkstra(inst).unwrap();
            assert!(
                (a.path.cost() - d.path.cost()).abs() < 1e-9,
                "cost mismatch: {} vs {}",
                a.path.cost(),
                d.path.cost()
            );
            assert!(a.expanded <= d.expanded, "{} > {}", a.expanded, d.expanded);
        }
    }

    #[test]
    fn heuristic_is_admissible_octile() {
        assert_eq!(octile(node(0, 0), node(0, 0)), 0.0);
        assert!((octile(node(0, 0), node(9, 9)) - 9.0 * SQRT_2).abs() < 1e-12);
        assert!((octile(node(0, 0), node(3, 1)) - (3.0 + (SQRT_2 - 1.0))).abs() < 1e-12);
    }
}
