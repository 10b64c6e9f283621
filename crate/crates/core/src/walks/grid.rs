use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::{BitOracle, MEASURE_TOLERANCE};

/// Periodic `L^d` grid, `d` in {2, 3}. Cell `(c_0, .., c_{d-1})` has index
/// `sum c_a L^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusGrid {
    d: usize,
    l: usize,
    n: usize,
}

impl TorusGrid {
    pub fn new(d: usize, l: usize) -> Result<Self> {
        if !(2..=3).contains(&d) {
            return Err(Error::param(format!("grid dimension must be 2 or 3, got {d}")));
        }
        if l < 2 {
            return Err(Error::param(format!("side length must be at least 2, got {l}")));
        }
        Ok(Self { d, l, n: l.pow(d as u32) })
    }

    pub fn dims(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.l
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    /// Number of directions, `2d`. Direction `2a` steps `+1` along axis
    /// `a`, direction `2a + 1` steps `-1`.
    pub fn degree(&self) -> usize {
        2 * self.d
    }

    pub fn coords(&self, cell: usize) -> Vec<usize> {
        let mut c = Vec::with_capacity(self.d);
        let mut v = cell;
        for _ in 0..self.d {
            c.push(v % self.l);
            v /= self.l;
        }
        c
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().rev().fold(0, |acc, &c| acc * self.l + c % self.l)
    }

    pub fn neighbor(&self, cell: usize, dir: usize) -> usize {
        let axis = dir / 2;
        let stride = self.l.pow(axis as u32);
        let c = (cell / stride) % self.l;
        let moved = if dir % 2 == 0 {
            (c + 1) % self.l
        } else {
            (c + self.l - 1) % self.l
        };
        cell - c * stride + moved * stride
    }

    /// Torus (Manhattan) distance.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .map(|(&x, y)| {
                let d = x.abs_diff(y);
                d.min(self.l - d)
            })
            .sum()
    }

    /// Boustrophedon visiting order: every consecutive pair is adjacent.
    pub fn snake_order(&self) -> Vec<usize> {
        (0..self.n)
            .map(|k| {
                let mut digits = Vec::with_capacity(self.d);
                let mut v = k;
                for _ in 0..self.d {
                    digits.push(v % self.l);
                    v /= self.l;
                }
                // Reverse an axis whenever the coordinates above it sum to odd.
                let mut coords = vec![0; self.d];
                let mut above = 0;
                for a in (0..self.d).rev() {
                    coords[a] = if above % 2 == 1 {
                        self.l - 1 - digits[a]
                    } else {
                        digits[a]
                    };
                    above += coords[a];
                }
                self.index(&coords)
            })
            .collect()
    }
}

/// Flip-flop coined walk state, amplitudes indexed by
/// `cell * 2d + direction`. Every operator of the walk is real, so real
/// amplitudes are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinedState {
    grid: TorusGrid,
    amps: Vec<f64>,
}

impl CoinedState {
    /// Uniform over all cells and directions.
    pub fn uniform(grid: TorusGrid) -> Self {
        let len = grid.n * grid.degree();
        Self {
            grid,
            amps: vec![1.0 / (len as f64).sqrt(); len],
        }
    }

    /// Uniform over the directions of a single cell.
    pub fn at_cell(grid: TorusGrid, cell: usize) -> Self {
        let deg = grid.degree();
        let mut amps = vec![0.0; grid.n * deg];
        for d in 0..deg {
            amps[cell * deg + d] = 1.0 / (deg as f64).sqrt();
        }
        Self { grid, amps }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    pub fn cell_probability(&self, cell: usize) -> f64 {
        let deg = self.grid.degree();
        self.amps[cell * deg..(cell + 1) * deg].iter().map(|a| a * a).sum()
    }

    pub fn probability_of(&self, cells: &[usize]) -> f64 {
        cells.iter().map(|&c| self.cell_probability(c)).sum()
    }

    /// Cells carrying nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        (0..self.grid.n)
            .filter(|&c| self.cell_probability(c) > 0.0)
            .collect()
    }

    /// One step: flip-flop shift `(v, d) -> (v + e_d, reverse(d))`, then the
    /// coin. Unmarked cells get the Grover coin `2|s><s| - I` over
    /// directions, marked cells get `-I`.
    pub fn step(&mut self, marked: &[bool]) {
        let g = self.grid;
        let deg = g.degree();
        let mut next = vec![0.0; self.amps.len()];
        for v in 0..g.n {
            for d in 0..deg {
                let a = self.amps[v * deg + d];
                if a != 0.0 {
                    next[g.neighbor(v, d) * deg + (d ^ 1)] = a;
                }
            }
        }
        for v in 0..g.n {
            let block = &mut next[v * deg..(v + 1) * deg];
            if marked[v] {
                block.iter_mut().for_each(|a| *a = -*a);
            } else {
                let m2 = 2.0 * block.iter().sum::<f64>() / deg as f64;
                block.iter_mut().for_each(|a| *a = m2 - *a);
            }
        }
        self.amps = next;
    }

    /// Samples a cell from the position marginal.
    pub fn measure_cell<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        let total = self.norm_sqr();
        if (total - 1.0).abs() > MEASURE_TOLERANCE {
            return Err(Error::Normalization(total));
        }
        let r = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        for c in 0..self.grid.n {
            acc += self.cell_probability(c);
            if r < acc {
                return Ok(c);
            }
        }
        Ok(self.grid.n - 1)
    }
}

fn marked_mask(grid: &TorusGrid, oracle: &BitOracle) -> Result<Vec<bool>> {
    if oracle.len() != grid.n {
        return Err(Error::param(format!(
            "oracle has {} cells, grid has {}",
            oracle.len(),
            grid.n
        )));
    }
    Ok((0..grid.n).map(|i| oracle.peek(i)).collect())
}

/// Marked-cell probability at steps `0..=t_max`, starting from the uniform
/// state.
pub fn marked_probability_series(grid: TorusGrid, marked: &[usize], t_max: usize) -> Vec<f64> {
    let mut mask = vec![false; grid.n];
    for &m in marked {
        mask[m] = true;
    }
    let mut s = CoinedState::uniform(grid);
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(s.probability_of(marked));
    for _ in 0..t_max {
        s.step(&mask);
        out.push(s.probability_of(marked));
    }
    out
}

/// Constant of the peak-search window `c sqrt(N log2 N)` (2D) or
/// `c sqrt(N)` (3D).
pub const GRID_WINDOW: f64 = 3.0;

pub fn peak_window(grid: TorusGrid) -> usize {
    let n = grid.n as f64;
    let scale = if grid.d == 2 { (n * n.log2()).sqrt() } else { n.sqrt() };
    (GRID_WINDOW * scale).ceil() as usize
}

/// Share of the window's best marked probability that counts as the peak.
pub const PEAK_FRACTION: f64 = 0.9;

/// First step count at which the marked probability of a single marked
/// cell reaches [`PEAK_FRACTION`] of its maximum over the window. Later
/// revivals can be marginally higher but cost several times more steps.
///
/// The walk commutes with translations, so this depends only on the grid
/// and is computed on a dummy instance with the origin marked; no queries
/// are involved.
pub fn peak_time(grid: TorusGrid) -> usize {
    let series = marked_probability_series(grid, &[0], peak_window(grid));
    let best = series.iter().skip(1).fold(0.0f64, |a, &p| a.max(p));
    (1..series.len())
        .find(|&t| series[t] >= PEAK_FRACTION * best)
        .unwrap_or(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSearchOutcome {
    pub cell: Option<usize>,
    /// Steps charged: walk steps plus one per cell check.
    pub steps: u64,
}

/// Coined-walk search for a marked cell.
///
/// The first round checks one uniformly random cell. Later rounds walk from
/// the uniform state for `t` steps, measure the position and check the
/// cell: the first walk round uses the peak time, later ones draw `t`
/// uniformly from `1..=peak`. A round that would overrun `step_budget` is
/// not started.
pub fn grid_walk_search<R: Rng + ?Sized>(
    grid: TorusGrid,
    oracle: &BitOracle,
    rng: &mut R,
    step_budget: u64,
) -> Result<GridSearchOutcome> {
    if step_budget == 0 {
        return Err(Error::param("step budget must be at least 1"));
    }
    let mask = marked_mask(&grid, oracle)?;
    let peak = peak_time(grid);
    let mut steps = 0u64;
    let mut round = 0usize;
    loop {
        let t = match round {
            0 => 0,
            1 => peak,
            _ => rng.gen_range(1..=peak),
        };
        if steps + t as u64 + 1 > step_budget {
            return Ok(GridSearchOutcome { cell: None, steps });
        }
        let cell = if t == 0 {
            rng.gen_range(0..grid.n)
        } else {
            let mut s = CoinedState::uniform(grid);
            for _ in 0..t {
                s.step(&mask);
            }
            s.measure_cell(rng)?
        };
        steps += t as u64 + 1;
        if oracle.query(cell) {
            return Ok(GridSearchOutcome {
                cell: Some(cell),
                steps,
            });
        }
        round += 1;
    }
}

/// Row-by-row scan. Querying a cell and moving to the next one is a single
/// step, so the `j`-th cell of the scan is reached after `j + 1` steps.
pub fn grid_classical_search(grid: TorusGrid, oracle: &BitOracle) -> Result<GridSearchOutcome> {
    marked_mask(&grid, oracle)?;
    for (j, cell) in grid.snake_order().into_iter().enumerate() {
        if oracle.query(cell) {
            return Ok(GridSearchOutcome {
                cell: Some(cell),
                steps: j as u64 + 1,
            });
        }
    }
    Ok(GridSearchOutcome {
        cell: None,
        steps: grid.n as u64,
    })
}
