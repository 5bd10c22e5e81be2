//! Per-directed-edge pheromone storage and the update rule.

use crate::grid::{GridMap, Node, Path, DIRECTIONS};
use crate::{Error, Result};

/// Pheromone concentrations over every legal directed move of a map.
///
/// Storage is dense (cell x direction) with a legality mask derived from
/// the movement rules; edges touching obstacles or cutting corners do not
/// exist and cannot hold pheromone. Snapshots are plain data and safe to
/// move across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneField {
    width: usize,
    height: usize,
    tau: Vec<f64>,
    legal: Vec<bool>,
}

impl PheromoneField {
    /// Field with `initial` pheromone on every legal directed edge.
    pub fn new(map: &GridMap, initial: f64) -> Self {
        let cells = map.width() * map.height();
        let mut legal = vec![false; cells * 8];
        for at in map.free_cells() {
            let base = map.index(at) * 8;
            for (dir, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
                if map.step_legal(at, Node::new(at.x + dx, at.y + dy)) {
                    legal[base + dir] = true;
                }
            }
        }
        let tau = legal
            .iter()
            .map(|&l| if l { initial } else { 0.0 })
            .collect();
        PheromoneField {
            width: map.width(),
            height: map.height(),
            tau,
            legal,
        }
    }

    /// Field whose legal edges are initialized by `f(from, to)`.
    pub fn from_fn(map: &GridMap, f: impl Fn(Node, Node) -> f64) -> Self {
        let mut field = Self::new(map, 0.0);
        for cell in 0..field.width * field.height {
            let from = Node::new((cell % field.width) as i32, (cell / field.width) as i32);
            for (dir, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
                let idx = cell * 8 + dir;
                if field.legal[idx] {
                    field.tau[idx] = f(from, Node::new(from.x + dx, from.y + dy));
                }
            }
        }
        field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn direction_index(from: Node, to: Node) -> Option<usize> {
        let step = (to.x - from.x, to.y - from.y);
        DIRECTIONS.iter().position(|&d| d == step)
    }

    fn edge_index(&self, from: Node, to: Node) -> Option<usize> {
        if from.x < 0 || from.y < 0 {
            return None;
        }
        let (x, y) = (from.x as usize, from.y as usize);
        if x >= self.width || y >= self.height {
            return None;
        }
        let dir = Self::direction_index(from, to)?;
        let idx = (y * self.width + x) * 8 + dir;
        self.legal[idx].then_some(idx)
    }

    /// Pheromone on the directed edge `from -> to`; `None` if the edge
    /// is not a legal move.
    pub fn get(&self, from: Node, to: Node) -> Option<f64> {
        self.edge_index(from, to).map(|i| self.tau[i])
    }

    pub fn set(&mut self, from: Node, to: Node, value: f64) -> Result<()> {
        match self.edge_index(from, to) {
            Some(i) => {
                self.tau[i] = value;
                Ok(())
            }
            None => Err(Error::UnknownEdge(from.x, from.y, to.x, to.y)),
        }
    }

    /// Fast lookup by precomputed cell index and direction. The caller
    /// must pass indices that came from the adjacency table.
    pub(crate) fn tau_at(&self, cell_index: usize, dir: usize) -> f64 {
        self.tau[cell_index * 8 + dir]
    }

    /// All legal directed edges with their pheromone, in row-major node
    /// order then direction order.
    pub fn edges(&self) -> impl Iterator<Item = (Node, Node, f64)> + '_ {
        (0..self.width * self.height).flat_map(move |cell| {
            let from = Node::new((cell % self.width) as i32, (cell / self.width) as i32);
            DIRECTIONS
                .iter()
                .enumerate()
                .filter_map(move |(dir, &(dx, dy))| {
                    let idx = cell * 8 + dir;
                    self.legal[idx]
                        .then(|| (from, Node::new(from.x + dx, from.y + dy), self.tau[idx]))
                })
        })
    }

    pub fn legal_edge_count(&self) -> usize {
        self.legal.iter().filter(|&&l| l).count()
    }

    /// Multiply every legal edge by `1 - rho`.
    pub fn evaporate(&mut self, rho: f64) {
        let keep = 1.0 - rho;
        for (idx, tau) in self.tau.iter_mut().enumerate() {
            if self.legal[idx] {
                *tau *= keep;
            }
        }
    }

    /// Add `delta` to every directed edge the path traverses.
    pub fn deposit_path(&mut self, path: &Path, delta: f64) {
        for w in path.nodes().windows(2) {
            if let Some(i) = self.edge_index(w[0], w[1]) {
                self.tau[i] += delta;
            }
        }
    }

    /// Clamp every legal edge into `[lo, hi]`.
    pub fn clamp(&mut self, lo: f64, hi: f64) {
        for (idx, tau) in self.tau.iter_mut().enumerate() {
            if self.legal[idx] {
                *tau = tau.clamp(lo, hi);
            }
        }
    }

    pub fn min_tau(&self) -> f64 {
        self.edges()
            .map(|(_, _, t)| t)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_tau(&self) -> f64 {
        self.edges()
            .map(|(_, _, t)| t)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Per-node view for visualization: the maximum pheromone over the
    /// edges entering each node, row-major, 0 for obstacles and nodes
    /// with no incoming edge.
    pub fn max_incoming_per_node(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.width * self.height];
        for (_, to, tau) in self.edges() {
            let idx = to.y as usize * self.width + to.x as usize;
            if tau > out[idx] {
                out[idx] = tau;
            }
        }
        out
    }
}

/// How much pheromone a path deposits on each of its edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepositRule {
    /// `q / L`: deposit inversely proportional to path length.
    PathLength { q: f64 },
    /// `q / (L + Turn)`: length plus turn-count penalty.
    TurnPenalized { q: f64 },
}

impl DepositRule {
    pub fn amount(&self, path: &Path) -> Result<f64> {
        let denom = match *self {
            DepositRule::PathLength { .. } => path.cost(),
            DepositRule::TurnPenalized { .. } => path.cost() + f64::from(path.turns()),
        };
        if denom <= 0.0 {
            return Err(Error::DegeneratePath);
        }
        let q = match *self {
            DepositRule::PathLength { q } | DepositRule::TurnPenalized { q } => q,
        };
        Ok(q / denom)
    }
}

/// One pheromone update: evaporation followed by per-path deposits.
///
/// Deposits are applied one path at a time in list order, so depositing
/// `[p, p]` is exactly two sequential single-path deposits (multiset
/// semantics: replicated paths deposit repeatedly).
pub fn evaporate_and_deposit(
    field: &PheromoneField,
    deposits: &[(&Path, DepositRule)],
    rho: f64,
) -> Result<PheromoneField> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rho must be in (0, 1), got {rho}"
        )));
    }
    let mut next = field.clone();
    next.evaporate(rho);
    for &(path, rule) in deposits {
        let delta = rule.amount(path)?;
        next.deposit_path(path, delta);
    }
    Ok(next)
}
