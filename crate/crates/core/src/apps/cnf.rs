use std::fmt;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// CNF formula with at most three literals per clause. Literals are
/// DIMACS-style: `v` or `-v` for variable `v` in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf3Formula {
    n: usize,
    clauses: Vec<Vec<i32>>,
}

impl Cnf3Formula {
    pub fn new(n: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("a formula needs at least one variable"));
        }
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 3 {
                return Err(Error::param(format!("clause {i} has {} literals", c.len())));
            }
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > n) {
                return Err(Error::param(format!("clause {i} has literal {l} outside 1..={n}")));
            }
        }
        Ok(Self { n, clauses })
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn literal_true(lit: i32, assignment: &[bool]) -> bool {
        assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)
    }

    pub fn clause_satisfied(clause: &[i32], assignment: &[bool]) -> bool {
        clause.iter().any(|&l| Self::literal_true(l, assignment))
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n
            && self.clauses.iter().all(|c| Self::clause_satisfied(c, assignment))
    }

    /// Reads DIMACS CNF. Comment lines start with `c`; clauses end with `0`
    /// and may span lines.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("bad header {line:?}"),
                    });
                }
                let num = |s: &str| {
                    s.parse::<usize>().map_err(|e| Error::Parse {
                        line: line_no,
                        msg: e.to_string(),
                    })
                };
                header = Some((num(parts[2])?, num(parts[3])?));
                continue;
            }
            let Some((n, _)) = header else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "clause before the p cnf header".into(),
                });
            };
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|e: std::num::ParseIntError| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?;
                if lit == 0 {
                    if current.is_empty() {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: "empty clause".into(),
                        });
                    }
                    clauses.push(std::mem::take(&mut current));
                    continue;
                }
                if lit.unsigned_abs() as usize > n {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("literal {lit} exceeds {n} variables"),
                    });
                }
                current.push(lit);
                if current.len() > 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "clause with more than 3 literals".into(),
                    });
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing p cnf header".into(),
        })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header promises {m} clauses, found {}", clauses.len()),
            });
        }
        Self::new(n, clauses)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_dimacs(&std::fs::read_to_string(path)?)
    }

    /// Random 3-CNF with `round(ratio * n)` clauses over distinct
    /// variables, each satisfied by a hidden uniformly random assignment.
    /// Returns the formula and the planted assignment.
    pub fn planted<R: Rng + ?Sized>(n: usize, ratio: f64, rng: &mut R) -> Result<(Self, Vec<bool>)> {
        if n < 3 {
            return Err(Error::param("planted 3-CNF needs at least 3 variables"));
        }
        let solution: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let m = (ratio * n as f64).round() as usize;
        let mut clauses = Vec::with_capacity(m);
        while clauses.len() < m {
            let vars = rand::seq::index::sample(rng, n, 3);
            let clause: Vec<i32> = vars
                .iter()
                .map(|v| {
                    let lit = v as i32 + 1;
                    if rng.gen() {
                        lit
                    } else {
                        -lit
                    }
                })
                .collect();
            if Self::clause_satisfied(&clause, &solution) {
                clauses.push(clause);
            }
        }
        Ok((Self::new(n, clauses)?, solution))
    }
}

impl fmt::Display for Cnf3Formula {
    /// DIMACS text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.n, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(f, "{l} ")?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SeededRng;

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 3 2\n1 -3 0\n2 3 -1 0\n";
        let f = Cnf3Formula::parse_dimacs(text).unwrap();
        assert_eq!(f.clauses(), &[vec![1, -3], vec![2, 3, -1]]);
        assert_eq!(Cnf3Formula::parse_dimacs(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn dimacs_rejections() {
        assert!(Cnf3Formula::parse_dimacs("p cnf 4 1\n1 2 3 4 0\n").is_err());
        assert!(Cnf3Formula::parse_dimacs("p cnf 2 1\n1 5 0\n").is_err());
        assert!(Cnf3Formula::parse_dimacs("1 2 0\n").is_err());
        assert!(Cnf3Formula::parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
    }

    #[test]
    fn planted_solution_satisfies() {
        let mut rng = SeededRng::new(3, 0);
        let (f, sol) = Cnf3Formula::planted(20, 4.2, &mut rng).unwrap();
        assert_eq!(f.clauses().len(), 84);
        assert!(f.satisfied_by(&sol));
    }
}
