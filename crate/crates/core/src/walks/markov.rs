use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::SeededRng;

/// Row-sum and symmetry tolerance for chains built in code.
pub const CHAIN_TOLERANCE: f64 = 1e-12;

/// Tolerance for chains read from text files.
pub const FILE_TOLERANCE: f64 = 1e-9;

/// Symmetric row-stochastic chain with a marked subset.
///
/// Rows are stored sparsely (sorted by column), which keeps Johnson-graph
/// chains with thousands of states cheap. The stationary distribution of a
/// symmetric chain is uniform.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    rows: Vec<Vec<(usize, f64)>>,
    marked: Vec<bool>,
    delta: f64,
    gap: f64,
}

impl MarkovChain {
    pub fn from_sparse(rows: Vec<Vec<(usize, f64)>>, marked: &[usize]) -> Result<Self> {
        Self::build(rows, marked, CHAIN_TOLERANCE)
    }

    pub fn from_dense(p: &[Vec<f64>], marked: &[usize]) -> Result<Self> {
        Self::from_dense_tol(p, marked, CHAIN_TOLERANCE)
    }

    fn from_dense_tol(p: &[Vec<f64>], marked: &[usize], tol: f64) -> Result<Self> {
        let s = p.len();
        let mut rows = Vec::with_capacity(s);
        for (x, row) in p.iter().enumerate() {
            if row.len() != s {
                return Err(Error::Chain(format!("row {x} has {} entries, expected {s}", row.len())));
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(y, &v)| (y, v))
                    .collect(),
            );
        }
        Self::build(rows, marked, tol)
    }

    fn build(mut rows: Vec<Vec<(usize, f64)>>, marked_list: &[usize], tol: f64) -> Result<Self> {
        let s = rows.len();
        if s == 0 {
            return Err(Error::Chain("no states".into()));
        }
        for (x, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(y, _)| y);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Chain(format!("row {x} repeats a column")));
            }
            if let Some(&(y, v)) = row.iter().find(|&&(y, v)| y >= s || !(0.0..=1.0 + tol).contains(&v)) {
                return Err(Error::Chain(format!("bad entry P[{x}][{y}] = {v}")));
            }
            let sum: f64 = row.iter().map(|&(_, v)| v).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::Chain(format!("row {x} sums to {sum}")));
            }
        }
        let lookup = |rows: &[Vec<(usize, f64)>], x: usize, y: usize| {
            rows[x]
                .binary_search_by_key(&y, |&(c, _)| c)
                .map_or(0.0, |i| rows[x][i].1)
        };
        for x in 0..s {
            for &(y, v) in &rows[x] {
                let back = lookup(&rows, y, x);
                if (v - back).abs() > tol {
                    return Err(Error::Chain(format!("P[{x}][{y}] = {v} but P[{y}][{x}] = {back}")));
                }
            }
        }
        let mut marked = vec![false; s];
        for &m in marked_list {
            *marked
                .get_mut(m)
                .ok_or(Error::IndexOutOfRange { index: m, dim: s })? = true;
        }
        let delta = marked.iter().filter(|&&b| b).count() as f64 / s as f64;
        let mut chain = Self {
            rows,
            marked,
            delta,
            gap: 0.0,
        };
        chain.gap = chain.compute_gap();
        Ok(chain)
    }

    /// Text format: `S`, then `S` rows of `S` decimals, then one line of
    /// marked indices (possibly empty). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let s: usize = first.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("expected the state count, got {first:?}"),
        })?;
        let mut p = Vec::with_capacity(s);
        for r in 0..s {
            let (ln, line) = lines.next().ok_or(Error::Parse {
                line: ln + r + 1,
                msg: format!("expected {s} matrix rows, got {r}"),
            })?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: ln,
                    msg: e.to_string(),
                })?;
            if row.len() != s {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {s} entries, got {}", row.len()),
                });
            }
            p.push(row);
        }
        let marked = match lines.next() {
            Some((ln, line)) => line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: ln,
                    msg: e.to_string(),
                })?,
            None => Vec::new(),
        };
        Self::from_dense_tol(&p, &marked, FILE_TOLERANCE)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Simple random walk on a cycle of `s` states.
    pub fn cycle(s: usize, marked: &[usize]) -> Result<Self> {
        if s < 3 {
            return Err(Error::param("a cycle needs at least 3 states"));
        }
        let rows = (0..s)
            .map(|x| vec![((x + 1) % s, 0.5), ((x + s - 1) % s, 0.5)])
            .collect();
        Self::from_sparse(rows, marked)
    }

    /// Simple random walk on the `l x l` torus.
    pub fn torus(l: usize, marked: &[usize]) -> Result<Self> {
        if l < 3 {
            return Err(Error::param("a torus chain needs side at least 3"));
        }
        let rows = (0..l * l)
            .map(|i| {
                let (x, y) = (i / l, i % l);
                let mut row: Vec<(usize, f64)> = Vec::with_capacity(4);
                for (nx, ny) in [((x + 1) % l, y), ((x + l - 1) % l, y), (x, (y + 1) % l), (x, (y + l - 1) % l)] {
                    let j = nx * l + ny;
                    match row.iter_mut().find(|(c, _)| *c == j) {
                        Some(e) => e.1 += 0.25,
                        None => row.push((j, 0.25)),
                    }
                }
                row
            })
            .collect();
        Self::from_sparse(rows, marked)
    }

    /// Uniform jumps to any other state.
    pub fn complete(s: usize, marked: &[usize]) -> Result<Self> {
        if s < 2 {
            return Err(Error::param("a complete chain needs at least 2 states"));
        }
        let w = 1.0 / (s - 1) as f64;
        let rows = (0..s)
            .map(|x| (0..s).filter(|&y| y != x).map(|y| (y, w)).collect())
            .collect();
        Self::from_sparse(rows, marked)
    }

    pub fn states(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.rows[x]
    }

    pub fn is_marked(&self, x: usize) -> bool {
        self.marked[x]
    }

    pub fn marked_states(&self) -> Vec<usize> {
        (0..self.states()).filter(|&x| self.marked[x]).collect()
    }

    /// Marked fraction `|marked| / S`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `1 - lambda_2`, the gap between the two largest eigenvalues.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(y, p)| p * v[y]).sum())
            .collect()
    }

    /// Power iteration on the lazy chain `(P + I)/2` with the uniform
    /// vector projected out. Laziness maps the spectrum into `[0, 1]`, so
    /// the dominant remaining eigenvalue is `(1 + lambda_2) / 2`.
    fn compute_gap(&self) -> f64 {
        let s = self.states();
        if s == 1 {
            return 1.0;
        }
        let deflate = |v: &mut Vec<f64>| {
            let mean = v.iter().sum::<f64>() / s as f64;
            v.iter_mut().for_each(|x| *x -= mean);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        };
        let mut rng = SeededRng::new(0x5eed, 0);
        let mut v: Vec<f64> = (0..s).map(|_| rng.gen::<f64>() - 0.5).collect();
        deflate(&mut v);
        let mut mu = 0.0;
        for _ in 0..2_000_000 {
            let pv = self.apply(&v);
            let w: Vec<f64> = v.iter().zip(&pv).map(|(a, b)| 0.5 * (a + b)).collect();
            mu = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
            let resid = w
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - mu * b).powi(2))
                .sum::<f64>()
                .sqrt();
            v = w;
            deflate(&mut v);
            if resid < 1e-11 {
                break;
            }
        }
        (2.0 * (1.0 - mu)).clamp(0.0, 2.0)
    }

    /// Mean first-hitting time of the marked set from the stationary
    /// (uniform) start, by solving `(I - Q) h = 1` on the unmarked states
    /// with conjugate gradients. Marked starts contribute zero.
    pub fn exact_hitting_time(&self) -> Result<f64> {
        let s = self.states();
        let free: Vec<usize> = (0..s).filter(|&x| !self.marked[x]).collect();
        if free.len() == s {
            return Err(Error::Chain("no marked states to hit".into()));
        }
        let mut pos = vec![usize::MAX; s];
        for (i, &x) in free.iter().enumerate() {
            pos[x] = i;
        }
        let n = free.len();
        let op = |h: &[f64]| -> Vec<f64> {
            free.iter()
                .enumerate()
                .map(|(i, &x)| {
                    let qh: f64 = self.rows[x]
                        .iter()
                        .filter(|&&(y, _)| pos[y] != usize::MAX)
                        .map(|&(y, p)| p * h[pos[y]])
                        .sum();
                    h[i] - qh
                })
                .collect()
        };
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut h = vec![0.0; n];
        let mut r = vec![1.0; n];
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        for _ in 0..(20 * n + 1000) {
            let ap = op(&p);
            let alpha = rr / dot(&p, &ap);
            h.iter_mut().zip(&p).for_each(|(x, d)| *x += alpha * d);
            r.iter_mut().zip(&ap).for_each(|(x, d)| *x -= alpha * d);
            let next = dot(&r, &r);
            if next.sqrt() < 1e-10 * (n as f64).sqrt() {
                break;
            }
            p = r.iter().zip(&p).map(|(x, d)| x + next / rr * d).collect();
            rr = next;
        }
        Ok(h.iter().sum::<f64>() / s as f64)
    }

    fn sample_next<R: Rng + ?Sized>(&self, x: usize, rng: &mut R) -> usize {
        let r: f64 = rng.gen();
        let mut acc = 0.0;
        for &(y, p) in &self.rows[x] {
            acc += p;
            if r < acc {
                return y;
            }
        }
        self.rows[x].last().map_or(x, |&(y, _)| y)
    }
}

/// Monte Carlo mean first-hitting time of the marked set from a uniform
/// start; a marked start counts as zero steps.
pub fn classical_hitting<R: Rng + ?Sized>(
    chain: &MarkovChain,
    rng: &mut R,
    trials: usize,
) -> Result<f64> {
    if chain.marked.iter().all(|&b| !b) {
        return Err(Error::Chain("no marked states to hit".into()));
    }
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    let mut total = 0u64;
    for _ in 0..trials {
        let mut x = rng.gen_range(0..chain.states());
        while !chain.marked[x] {
            x = chain.sample_next(x, rng);
            total += 1;
        }
    }
    Ok(total as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_gap_matches_cosine() {
        let c = MarkovChain::cycle(16, &[0]).unwrap();
        let want = 1.0 - (2.0 * std::f64::consts::PI / 16.0).cos();
        assert!((c.gap() - want).abs() < 1e-8, "{} vs {want}", c.gap());
        let t = MarkovChain::torus(6, &[]).unwrap();
        let want = 0.5 * (1.0 - (2.0 * std::f64::consts::PI / 6.0).cos());
        assert!((t.gap() - want).abs() < 1e-8);
        let k = MarkovChain::complete(64, &[]).unwrap();
        assert!((k.gap() - 64.0 / 63.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_chains() {
        let asym = vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5]];
        assert!(matches!(MarkovChain::from_dense(&asym, &[]), Err(Error::Chain(_))));
        let sub = vec![vec![0.5, 0.4], vec![0.4, 0.5]];
        assert!(matches!(MarkovChain::from_dense(&sub, &[]), Err(Error::Chain(_))));
        assert!(MarkovChain::from_dense(&[vec![1.0]], &[1]).is_err());
    }

    #[test]
    fn parses_text_format() {
        let text = "# flip chain\n2\n0 1\n1 0\n1\n";
        let c = MarkovChain::parse(text).unwrap();
        assert_eq!(c.marked_states(), vec![1]);
        assert!((c.delta() - 0.5).abs() < 1e-15);
        assert!(MarkovChain::parse("2\n0 1\n0.9 0.1\n").is_err());
        assert!(matches!(MarkovChain::parse("2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(MarkovChain::parse("2\n0 x\n1 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn hitting_times() {
        let mut rng = SeededRng::new(1, 0);
        let all = MarkovChain::cycle(8, &(0..8).collect::<Vec<_>>()).unwrap();
        assert_eq!(classical_hitting(&all, &mut rng, 100).unwrap(), 0.0);

        let flip = MarkovChain::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[1]).unwrap();
        assert!((flip.exact_hitting_time().unwrap() - 0.5).abs() < 1e-12);
        let mc = classical_hitting(&flip, &mut rng, 20_000).unwrap();
        assert!((mc - 0.5).abs() < 0.02);

        // Cycle of S with one mark: h(x) = x (S - x), mean (S^2 - 1) / 6.
        let c = MarkovChain::cycle(64, &[0]).unwrap();
        let exact = c.exact_hitting_time().unwrap();
        assert!((exact - (64.0 * 64.0 - 1.0) / 6.0).abs() < 1e-6);
        let mc = classical_hitting(&c, &mut rng, 4000).unwrap();
        assert!((mc / exact - 1.0).abs() < 0.1);
    }
}
