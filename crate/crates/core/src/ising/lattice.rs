use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Free,
    /// Torus in both directions.
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Boundary::Free),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::InvalidArgument(format!(
                "unknown boundary `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub boundary: Boundary,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize, boundary: Boundary) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "lattice must be at least 1x1, got {rows}x{cols}"
            )));
        }
        Ok(LatticeSpec {
            rows,
            cols,
            boundary,
        })
    }

    pub fn free(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, Boundary::Free).expect("nonempty lattice")
    }

    pub fn periodic(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, Boundary::Periodic).expect("nonempty lattice")
    }

    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    /// Each site's right and down neighbours. Under a periodic boundary the
    /// wrap edges are always added, so a side of length 2 carries double
    /// edges and a side of length 1 carries self-loops.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let (r, c) = (self.rows, self.cols);
        let periodic = self.boundary == Boundary::Periodic;
        let mut out = Vec::with_capacity(2 * r * c);
        for i in 0..r {
            for j in 0..c {
                let here = i * c + j;
                if j + 1 < c {
                    out.push((here, here + 1));
                } else if periodic {
                    out.push((here, i * c));
                }
                if i + 1 < r {
                    out.push((here, here + c));
                } else if periodic {
                    out.push((here, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        match self.boundary {
            Boundary::Free => self.rows * (self.cols - 1) + (self.rows - 1) * self.cols,
            Boundary::Periodic => 2 * self.rows * self.cols,
        }
    }

    /// The same lattice with rows and columns exchanged. `log Z` is invariant.
    pub fn transposed(&self) -> Self {
        LatticeSpec {
            rows: self.cols,
            cols: self.rows,
            boundary: self.boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub alpha: f64,
    pub beta: f64,
}

impl IsingParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        IsingParams { alpha, beta }
    }
}

/// Row-major spins, each `-1` or `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig {
    spins: Vec<i8>,
}

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "spin value {bad} is not +-1"
            )));
        }
        Ok(SpinConfig { spins })
    }

    pub fn constant(len: usize, spin: i8) -> Result<Self> {
        Self::new(vec![spin; len])
    }

    /// `+1` where `i + j` is even.
    pub fn checkerboard(lattice: &LatticeSpec) -> Self {
        let spins = (0..lattice.rows)
            .flat_map(|i| (0..lattice.cols).map(move |j| if (i + j) % 2 == 0 { 1 } else { -1 }))
            .collect();
        SpinConfig { spins }
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SpinConfig::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(c: SpinConfig) -> Self {
        c.spins
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuffStats {
    pub v0: i64,
    pub v1: i64,
}

pub fn suff_stats(config: &SpinConfig, lattice: &LatticeSpec) -> Result<SuffStats> {
    if config.len() != lattice.sites() {
        return Err(Error::Dimension {
            expected: lattice.sites(),
            got: config.len(),
        });
    }
    let y = config.spins();
    let v0 = y.iter().map(|&s| s as i64).sum();
    let v1 = lattice
        .edges()
        .iter()
        .map(|&(a, b)| (y[a] * y[b]) as i64)
        .sum();
    Ok(SuffStats { v0, v1 })
}
