//! Procedural map datasets and instance sampling.
//!
//! Each dataset holds ten maps: one obstacle-free, five single-pattern
//! maps (always including a C-trap and an L-trap) and four mixed maps.
//! Generation is a pure function of `(size, seed)`.

use rand::Rng;

use crate::grid::{is_reachable, reachable_set, GridMap, Instance, Node};
use crate::seed::stream;
use crate::{Error, Result};

/// Concave C-shaped obstacle opening toward the top-left corner.
///
/// Paths heading from the top-left toward the bottom-right enter the
/// cavity and must back out, which punishes greedy search.
pub fn c_trap_map(size: usize) -> GridMap {
    let (lo, hi) = trap_extent(size);
    let mut obstacles = Vec::new();
    for t in lo..=hi {
        obstacles.push((t, lo)); // top arm
        obstacles.push((hi, t)); // right arm
        obstacles.push((t, hi)); // bottom arm
    }
    GridMap::with_obstacles(size, size, &obstacles).expect("trap fits the map")
}

/// L-shaped obstacle blocking the center diagonal.
pub fn l_trap_map(size: usize) -> GridMap {
    let (lo, hi) = trap_extent(size);
    let mut obstacles = Vec::new();
    for t in lo..=hi {
        obstacles.push((hi, t)); // vertical arm
        obstacles.push((t, hi)); // horizontal arm
    }
    GridMap::with_obstacles(size, size, &obstacles).expect("trap fits the map")
}

fn trap_extent(size: usize) -> (i32, i32) {
    let hi = (size * 7 / 10).min(size - 1).max(1) as i32;
    let lo = (size * 3 / 10).max(1).min(hi as usize - 1) as i32;
    (lo, hi)
}

/// Canonical hard instance: the C-trap map traversed corner to corner.
pub fn c_trap_instance(size: usize) -> Instance {
    let map = c_trap_map(size);
    let last = (size - 1) as i32;
    Instance::new(map, Node::new(0, 0), Node::new(last, last))
        .expect("corners of the trap map are free")
}

fn rect_block_map(size: usize, rng: &mut impl Rng) -> GridMap {
    let mut obstacles = Vec::new();
    let blocks = rng.gen_range(1..=2);
    for _ in 0..blocks {
        let w = rng.gen_range(2..=(size / 3).max(2)) as i32;
        let h = rng.gen_range(2..=(size / 3).max(2)) as i32;
        let x0 = rng.gen_range(1..=(size as i32 - w - 1).max(1));
        let y0 = rng.gen_range(1..=(size as i32 - h - 1).max(1));
        for x in x0..(x0 + w).min(size as i32) {
            for y in y0..(y0 + h).min(size as i32) {
                obstacles.push((x, y));
            }
        }
    }
    GridMap::with_obstacles(size, size, &obstacles).expect("blocks fit the map")
}

fn wall_with_gap_map(size: usize, rng: &mut impl Rng) -> GridMap {
    let mut obstacles = Vec::new();
    let wall = rng.gen_range(2..(size as i32 - 2).max(3));
    let gap = rng.gen_range(0..size as i32);
    let vertical = rng.gen_bool(0.5);
    for t in 0..size as i32 {
        if t == gap {
            continue;
        }
        if vertical {
            obstacles.push((wall, t));
        } else {
            obstacles.push((t, wall));
        }
    }
    GridMap::with_obstacles(size, size, &obstacles).expect("wall fits the map")
}

/// Bernoulli scatter capped so total obstacle density stays below `cap`.
fn scatter_onto(
    map: &mut Vec<(i32, i32)>,
    size: usize,
    density: f64,
    cap: f64,
    rng: &mut impl Rng,
) {
    let total = size * size;
    let budget = ((total as f64) * cap) as usize;
    let want = ((total as f64) * density) as usize;
    let mut count = map.len();
    for _ in 0..want {
        if count >= budget {
            break;
        }
        let cell = (rng.gen_range(0..size as i32), rng.gen_range(0..size as i32));
        if !map.contains(&cell) {
            map.push(cell);
            count += 1;
        }
    }
}

fn scatter_map(size: usize, rng: &mut impl Rng) -> GridMap {
    let density = rng.gen_range(0.10..0.25);
    let mut obstacles = Vec::new();
    scatter_onto(&mut obstacles, size, density, 0.25, rng);
    GridMap::with_obstacles(size, size, &obstacles).expect("scatter fits the map")
}

fn mixed_map(size: usize, rng: &mut impl Rng) -> GridMap {
    let base = match rng.gen_range(0..4) {
        0 => c_trap_map(size),
        1 => l_trap_map(size),
        2 => rect_block_map(size, rng),
        _ => wall_with_gap_map(size, rng),
    };
    let mut obstacles: Vec<(i32, i32)> = Vec::new();
    for y in 0..size as i32 {
        for x in 0..size as i32 {
            if base.is_obstacle(Node::new(x, y)) {
                obstacles.push((x, y));
            }
        }
    }
    let density = rng.gen_range(0.05..0.10);
    scatter_onto(&mut obstacles, size, density, 0.25, rng);
    GridMap::with_obstacles(size, size, &obstacles).expect("mixed pattern fits the map")
}

/// At least one pair of free cells is mutually reachable.
fn has_connected_pair(map: &GridMap) -> bool {
    map.free_cells().any(|n| {
        let seen = reachable_set(map, n);
        seen.iter().filter(|&&s| s).count() >= 2
    })
}

/// Generate the ten-map dataset for the given grid size.
///
/// Composition: index 0 is obstacle-free; 1..=5 are single-pattern maps
/// (C-trap, L-trap, rectangular blocks, wall with one gap, scattered
/// cells at 10-25% density); 6..=9 mix one pattern with a light scatter.
/// Every map is checked to admit at least one connected free pair;
/// random patterns are regenerated from derived seeds until they do.
pub fn generate_dataset(size: usize, seed: u64) -> Vec<GridMap> {
    // Shaped patterns need room; below that everything degrades to
    // scatter so tiny sizes stay total and connected.
    let shaped = size >= 8;
    let mut maps = Vec::with_capacity(10);
    maps.push(GridMap::empty(size, size).expect("size >= 2"));
    for idx in 1..10u64 {
        if shaped && idx == 1 {
            maps.push(c_trap_map(size));
            continue;
        }
        if shaped && idx == 2 {
            maps.push(l_trap_map(size));
            continue;
        }
        let mut attempt = 0u64;
        let map = loop {
            let mut rng = stream(seed, &[size as u64, idx, attempt]);
            let candidate = match idx {
                3 if shaped => rect_block_map(size, &mut rng),
                4 if shaped => wall_with_gap_map(size, &mut rng),
                6..=9 if shaped => mixed_map(size, &mut rng),
                _ => scatter_map(size, &mut rng),
            };
            if has_connected_pair(&candidate) {
                break candidate;
            }
            attempt += 1;
            if attempt > 200 {
                // Dense scatters on tiny maps can keep failing; an empty
                // map is always usable and keeps generation total.
                break GridMap::empty(size, size).expect("size >= 2");
            }
        };
        maps.push(map);
    }
    maps
}

/// Sample `count` planning instances over the dataset.
///
/// Each draw picks a map uniformly, then start and goal uniformly over
/// its free cells, rejecting pairs that are equal or not connected.
/// Maps without a connected free pair are skipped with a warning.
pub fn sample_instances(maps: &[GridMap], count: usize, seed: u64) -> Result<Vec<Instance>> {
    let usable: Vec<&GridMap> = maps
        .iter()
        .enumerate()
        .filter_map(|(i, m)| {
            if has_connected_pair(m) {
                Some(m)
            } else {
                eprintln!("warning: map {i} has no connected pair of free cells; skipped");
                None
            }
        })
        .collect();
    if usable.is_empty() {
        return Err(Error::NoUsableMaps);
    }
    let mut rng = stream(seed, &[0x1275]);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let map = usable[rng.gen_range(0..usable.len())];
        let free: Vec<Node> = map.free_cells().collect();
        let start = free[rng.gen_range(0..free.len())];
        let goal = free[rng.gen_range(0..free.len())];
        if start == goal || !is_reachable(map, start, goal) {
            continue;
        }
        out.push(Instance::new(map.clone(), start, goal).expect("sampled nodes are free"));
    }
    Ok(out)
}
