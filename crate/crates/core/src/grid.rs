//! Occupancy-grid environment model: movement rules, geometric primitives
//! and path metrics.
//!
//! The grid is 8-connected with Euclidean step costs (1 for orthogonal
//! moves, sqrt(2) for diagonal moves). A diagonal move is legal only when
//! both shared orthogonal cells are free, so paths never cut corners.
//! Coordinates have the origin at the top-left, x growing rightward and
//! y growing downward, matching the row-major text map format.

use std::f64::consts::SQRT_2;

use crate::{Error, Result};

/// Fixed move order: (dx, dy) offsets. Neighbor enumeration, heap
/// tie-breaking and pheromone edge indexing all use this order.
pub const DIRECTIONS: [(i32, i32); 8] = [
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 0),
    (-1, 0),
];

/// Step cost for the direction at `dir` in [`DIRECTIONS`].
pub fn direction_cost(dir: usize) -> f64 {
    let (dx, dy) = DIRECTIONS[dir];
    if dx != 0 && dy != 0 {
        SQRT_2
    } else {
        1.0
    }
}

/// A grid cell: column `x` in `[0, width)`, row `y` in `[0, height)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub x: i32,
    pub y: i32,
}

impl Node {
    pub fn new(x: i32, y: i32) -> Self {
        Node { x, y }
    }
}

/// Straight-line distance between two cells.
pub fn euclid(a: Node, b: Node) -> f64 {
    let dx = f64::from(a.x - b.x);
    let dy = f64::from(a.y - b.y);
    (dx * dx + dy * dy).sqrt()
}

/// Occupancy grid; `true` cells are obstacles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl GridMap {
    /// Build a map from row-major occupancy data.
    pub fn new(width: usize, height: usize, cells: Vec<bool>) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidParameter(format!(
                "map must be at least 2x2, got {width}x{height}"
            )));
        }
        if cells.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "cell vector has {} entries, expected {}",
                cells.len(),
                width * height
            )));
        }
        Ok(GridMap {
            width,
            height,
            cells,
        })
    }

    /// Obstacle-free map.
    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Empty map with the given cells blocked.
    pub fn with_obstacles(width: usize, height: usize, obstacles: &[(i32, i32)]) -> Result<Self> {
        let mut map = Self::empty(width, height)?;
        for &(x, y) in obstacles {
            if !map.in_bounds(Node::new(x, y)) {
                return Err(Error::InvalidNode { x, y });
            }
            map.cells[y as usize * width + x as usize] = true;
        }
        Ok(map)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, n: Node) -> bool {
        n.x >= 0 && n.y >= 0 && (n.x as usize) < self.width && (n.y as usize) < self.height
    }

    /// Row-major cell index; caller must ensure `n` is in bounds.
    pub fn index(&self, n: Node) -> usize {
        n.y as usize * self.width + n.x as usize
    }

    pub fn is_obstacle(&self, n: Node) -> bool {
        self.in_bounds(n) && self.cells[self.index(n)]
    }

    /// In bounds and not an obstacle.
    pub fn is_free(&self, n: Node) -> bool {
        self.in_bounds(n) && !self.cells[self.index(n)]
    }

    pub fn obstacle_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn free_cells(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.height as i32).flat_map(move |y| {
            (0..self.width as i32)
                .map(move |x| Node::new(x, y))
                .filter(move |&n| self.is_free(n))
        })
    }

    /// Whether the single step `from -> to` is legal: both cells free,
    /// 8-adjacent, and not cutting a corner.
    pub fn step_legal(&self, from: Node, to: Node) -> bool {
        if !self.is_free(from) || !self.is_free(to) {
            return false;
        }
        let dx = to.x - from.x;
        let dy = to.y - from.y;
        if dx == 0 && dy == 0 || dx.abs() > 1 || dy.abs() > 1 {
            return false;
        }
        if dx != 0 && dy != 0 {
            // Diagonal moves need both shared orthogonal cells free.
            if !self.is_free(Node::new(from.x + dx, from.y))
                || !self.is_free(Node::new(from.x, from.y + dy))
            {
                return false;
            }
        }
        true
    }

    /// Parse the text map format: first line `<width> <height>`, then
    /// `height` rows of `.` (free) and `#` (obstacle).
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::MapFormat {
            line: 1,
            msg: "missing header".into(),
        })?;
        let mut parts = header.split_whitespace();
        let width: usize =
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::MapFormat {
                    line: 1,
                    msg: "expected '<width> <height>'".into(),
                })?;
        let height: usize =
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::MapFormat {
                    line: 1,
                    msg: "expected '<width> <height>'".into(),
                })?;
        if parts.next().is_some() {
            return Err(Error::MapFormat {
                line: 1,
                msg: "trailing tokens after header".into(),
            });
        }
        let mut cells = Vec::with_capacity(width * height);
        for row in 0..height {
            let line_no = row + 2;
            let line = lines.next().ok_or_else(|| Error::MapFormat {
                line: line_no,
                msg: "missing row".into(),
            })?;
            if line.chars().count() != width {
                return Err(Error::MapFormat {
                    line: line_no,
                    msg: format!(
                        "row has {} characters, expected {}",
                        line.chars().count(),
                        width
                    ),
                });
            }
            for ch in line.chars() {
                match ch {
                    '.' => cells.push(false),
                    '#' => cells.push(true),
                    other => {
                        return Err(Error::MapFormat {
                            line: line_no,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        if let Some(extra) = lines.next() {
            if !extra.is_empty() {
                return Err(Error::MapFormat {
                    line: height + 2,
                    msg: "trailing content after grid".into(),
                });
            }
        }
        GridMap::new(width, height, cells)
    }

    /// Serialize to the text map format (LF line endings, trailing newline).
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * (self.height + 1));
        out.push_str(&format!("{} {}\n", self.width, self.height));
        for y in 0..self.height {
            for x in 0..self.width {
                out.push(if self.cells[y * self.width + x] {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }
}

/// Legal 8-neighbors of `at`, in [`DIRECTIONS`] order, with step costs.
pub fn neighbors(map: &GridMap, at: Node) -> Result<Vec<(Node, f64)>> {
    if !map.is_free(at) {
        return Err(Error::InvalidNode { x: at.x, y: at.y });
    }
    let mut out = Vec::with_capacity(8);
    for (dir, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
        let n = Node::new(at.x + dx, at.y + dy);
        if map.step_legal(at, n) {
            out.push((n, direction_cost(dir)));
        }
    }
    Ok(out)
}

/// A planning problem: a map plus distinct, free start and goal cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub map: GridMap,
    pub start: Node,
    pub goal: Node,
}

impl Instance {
    pub fn new(map: GridMap, start: Node, goal: Node) -> Result<Self> {
        if !map.is_free(start) {
            return Err(Error::InvalidInstance(format!(
                "start ({}, {}) is out of bounds or blocked",
                start.x, start.y
            )));
        }
        if !map.is_free(goal) {
            return Err(Error::InvalidInstance(format!(
                "goal ({}, {}) is out of bounds or blocked",
                goal.x, goal.y
            )));
        }
        if start == goal {
            return Err(Error::InvalidInstance("start equals goal".into()));
        }
        Ok(Instance { map, start, goal })
    }
}

/// A validated node sequence with its total cost and turn count.
///
/// Constructed through [`path_metrics`], which enforces step legality and
/// loop-freeness, so holding a `Path` is proof the route is traversable.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    nodes: Vec<Node>,
    cost: f64,
    turns: u32,
}

impl Path {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn turns(&self) -> u32 {
        self.turns
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> Node {
        self.nodes[0]
    }

    pub fn last(&self) -> Node {
        *self.nodes.last().expect("path is nonempty")
    }
}

/// Validate a node sequence against the map and derive its metrics.
///
/// A turn is counted at every interior node whose incoming movement vector
/// differs from its outgoing one. Rejects sequences with illegal steps
/// (non-adjacent, blocked, corner-cutting) or repeated nodes.
pub fn path_metrics(nodes: &[Node], map: &GridMap) -> Result<Path> {
    if nodes.is_empty() {
        return Err(Error::InvalidPath("empty node sequence".into()));
    }
    for &n in nodes {
        if !map.is_free(n) {
            return Err(Error::InvalidPath(format!(
                "node ({}, {}) is out of bounds or blocked",
                n.x, n.y
            )));
        }
    }
    // Loop-freeness.
    let mut sorted: Vec<Node> = nodes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPath("node appears twice".into()));
    }
    let mut cost = 0.0;
    let mut turns = 0u32;
    let mut prev_vec: Option<(i32, i32)> = None;
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !map.step_legal(a, b) {
            return Err(Error::InvalidPath(format!(
                "illegal step ({}, {}) -> ({}, {})",
                a.x, a.y, b.x, b.y
            )));
        }
        let step = (b.x - a.x, b.y - a.y);
        cost += if step.0 != 0 && step.1 != 0 {
            SQRT_2
        } else {
            1.0
        };
        if let Some(prev) = prev_vec {
            if prev != step {
                turns += 1;
            }
        }
        prev_vec = Some(step);
    }
    Ok(Path {
        nodes: nodes.to_vec(),
        cost,
        turns,
    })
}

/// Precomputed adjacency lists for every free cell, in direction order.
///
/// Shared by the solvers so the hot loops never re-derive legality.
#[derive(Debug, Clone)]
pub struct Adjacency {
    width: usize,
    lists: Vec<Vec<(Node, f64, usize)>>,
}

impl Adjacency {
    pub fn new(map: &GridMap) -> Self {
        let mut lists = vec![Vec::new(); map.width() * map.height()];
        for at in map.free_cells() {
            let mut list = Vec::with_capacity(8);
            for (dir, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
                let n = Node::new(at.x + dx, at.y + dy);
                if map.step_legal(at, n) {
                    list.push((n, direction_cost(dir), dir));
                }
            }
            lists[map.index(at)] = list;
        }
        Adjacency {
            width: map.width(),
            lists,
        }
    }

    /// Neighbors of `n` as `(node, step_cost, direction_index)`.
    pub fn of(&self, n: Node) -> &[(Node, f64, usize)] {
        &self.lists[n.y as usize * self.width + n.x as usize]
    }
}

/// Cells reachable from `from` under the movement rules (including `from`).
pub fn reachable_set(map: &GridMap, from: Node) -> Vec<bool> {
    let mut seen = vec![false; map.width() * map.height()];
    if !map.is_free(from) {
        return seen;
    }
    let mut queue = std::collections::VecDeque::new();
    seen[map.index(from)] = true;
    queue.push_back(from);
    while let Some(at) = queue.pop_front() {
        for &(dx, dy) in DIRECTIONS.iter() {
            let n = Node::new(at.x + dx, at.y + dy);
            if map.step_legal(at, n) && !seen[map.index(n)] {
                seen[map.index(n)] = true;
                queue.push_back(n);
            }
        }
    }
    seen
}

/// Whether `goal` can be reached from `start`.
pub fn is_reachable(map: &GridMap, start: Node, goal: Node) -> bool {
    map.is_free(goal) && reachable_set(map, start)[map.index(goal)]
}
