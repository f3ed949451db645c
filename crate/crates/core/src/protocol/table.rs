//! Alice's look-up table: a K x m matrix of signs ε_j^(l).

use std::fmt;

use crate::error::{Error, Result};
use crate::state::Sign;

/// Row `j` is Alice's outcome, column `l` is Bob's axis. Indices are 0-based;
/// printed labels are 1-based (`λ1`, `n1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LookupTable {
    rows: Vec<Vec<Sign>>,
}

impl LookupTable {
    pub fn new(rows: Vec<Vec<Sign>>) -> Result<Self> {
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.is_empty() || m == 0 {
            return Err(Error::MalformedTable("table has no entries".into()));
        }
        if let Some((j, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::MalformedTable(format!(
                "row {} has {} entries, expected {m}",
                j + 1,
                r.len()
            )));
        }
        Ok(LookupTable { rows })
    }

    pub fn from_i8(rows: &[&[i8]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(j, r)| {
                r.iter()
                    .map(|&v| {
                        Sign::from_i8(v).ok_or_else(|| {
                            Error::MalformedTable(format!("row {}: entry {v} is not ±1", j + 1))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    /// Rows written with `+`/`-` or `↑`/`↓`, e.g. `["↓↓↓", "↑↑↓"]`.
    pub fn from_strings(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(parse_sign)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    /// Builds the table from the index sets `S_+(n_l)` (0-based), one per axis.
    pub fn from_partitions(k: usize, plus_sets: &[Vec<usize>]) -> Result<Self> {
        let mut rows = vec![vec![Sign::Down; plus_sets.len()]; k];
        for (l, set) in plus_sets.iter().enumerate() {
            for &j in set {
                let row = rows.get_mut(j).ok_or(Error::IndexOutOfRange {
                    what: "outcome",
                    index: j,
                    limit: k,
                })?;
                if row[l] == Sign::Up {
                    return Err(Error::MalformedTable(format!(
                        "outcome {} listed twice for axis {}",
                        j + 1,
                        l + 1
                    )));
                }
                row[l] = Sign::Up;
            }
        }
        Self::new(rows)
    }

    /// Number of Alice outcomes.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Number of axes.
    pub fn m(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Sign>] {
        &self.rows
    }

    /// ε_j^(l).
    pub fn sign(&self, j: usize, l: usize) -> Result<Sign> {
        let row = self.rows.get(j).ok_or(Error::IndexOutOfRange {
            what: "outcome",
            index: j,
            limit: self.k(),
        })?;
        row.get(l).copied().ok_or(Error::IndexOutOfRange {
            what: "axis",
            index: l,
            limit: self.m(),
        })
    }

    /// Alice's answer when she saw outcome `j` and Bob names axis `l`.
    pub fn retrodict(&self, j: usize, l: usize) -> Result<Sign> {
        self.sign(j, l)
    }

    /// ε^(l) as ±1.0 values.
    pub fn column(&self, l: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[l].value()).collect()
    }

    /// `S_η(n_l)`: the outcomes consistent with Bob seeing η along axis `l`.
    pub fn partition(&self, l: usize, eta: Sign) -> Vec<usize> {
        (0..self.k()).filter(|&j| self.rows[j][l] == eta).collect()
    }

    /// Same table with ε_j^(l) negated.
    pub fn flipped(&self, j: usize, l: usize) -> Result<LookupTable> {
        let s = self.sign(j, l)?;
        let mut rows = self.rows.clone();
        rows[j][l] = s.flipped();
        Ok(LookupTable { rows })
    }

    /// Every sign negated.
    pub fn negated(&self) -> LookupTable {
        LookupTable {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|s| s.flipped()).collect())
                .collect(),
        }
    }

    /// Pairs `(i, j)`, `i < j`, of identical rows.
    pub fn duplicate_rows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.k() {
            for j in i + 1..self.k() {
                if self.rows[i] == self.rows[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Keeps only the listed axes, in the given order.
    pub fn select_axes(&self, axes: &[usize]) -> Result<LookupTable> {
        for &l in axes {
            if l >= self.m() {
                return Err(Error::IndexOutOfRange {
                    what: "axis",
                    index: l,
                    limit: self.m(),
                });
            }
        }
        Self::new(
            self.rows
                .iter()
                .map(|r| axes.iter().map(|&l| r[l]).collect())
                .collect(),
        )
    }
}

pub(crate) fn parse_sign(c: char) -> Result<Sign> {
    match c {
        '+' | '↑' | 'u' => Ok(Sign::Up),
        '-' | '↓' | 'd' | '−' => Ok(Sign::Down),
        other => Err(Error::MalformedTable(format!("bad sign symbol {other:?}"))),
    }
}

impl fmt::Display for LookupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "     ")?;
        for l in 0..self.m() {
            write!(f, " n{:<2}", l + 1)?;
        }
        writeln!(f)?;
        for (j, row) in self.rows.iter().enumerate() {
            write!(f, "λ{:<3} ", j + 1)?;
            for s in row {
                write!(f, "  {} ", s.arrow())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vaa() -> LookupTable {
        LookupTable::from_strings(&["↓↓↓", "↑↑↓", "↓↑↑", "↑↓↑"]).unwrap()
    }

    #[test]
    fn retrodict_reads_entries() {
        let t = vaa();
        assert_eq!(t.retrodict(1, 0).unwrap(), Sign::Up);
        for l in 0..3 {
            assert_eq!(t.retrodict(0, l).unwrap(), Sign::Down);
        }
        assert!(matches!(t.retrodict(4, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(t.retrodict(0, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn partitions_agree_with_signs() {
        let t = vaa();
        for l in 0..t.m() {
            let up = t.partition(l, Sign::Up);
            let down = t.partition(l, Sign::Down);
            assert_eq!(up.len() + down.len(), t.k());
            assert!(up.iter().all(|j| !down.contains(j)));
        }
        let plus: Vec<Vec<usize>> = (0..3).map(|l| t.partition(l, Sign::Up)).collect();
        assert_eq!(LookupTable::from_partitions(4, &plus).unwrap(), t);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(LookupTable::from_strings(&["++", "+"]).is_err());
        assert!(LookupTable::from_i8(&[&[1, 0]]).is_err());
    }

    #[test]
    fn duplicates_found() {
        let t = LookupTable::from_strings(&["+++", "-+-", "+++"]).unwrap();
        assert_eq!(t.duplicate_rows(), vec![(0, 2)]);
    }
}
