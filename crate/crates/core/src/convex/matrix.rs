use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::num::{self, Rational, Vector};

/// An exact n×n linear map, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    dim: usize,
    #[serde(with = "num::serde_vectors")]
    entries: Vec<Vector>,
}

impl TryFrom<RawMatrix> for RationalMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        check_dim(raw.dim, raw.entries.len())?;
        RationalMatrix::new(raw.entries)
    }
}

impl From<RationalMatrix> for RawMatrix {
    fn from(m: RationalMatrix) -> Self {
        RawMatrix {
            dim: m.dim,
            entries: m.entries,
        }
    }
}

impl RationalMatrix {
    pub fn new(entries: Vec<Vector>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::Empty("matrix"));
        }
        for row in &entries {
            check_dim(dim, row.len())?;
        }
        Ok(RationalMatrix { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        RationalMatrix {
            dim,
            entries: (0..dim).map(|i| num::unit(dim, i)).collect(),
        }
    }

    /// Elementary shear `x_i ← x_i + t·x_j` (`i ≠ j`), determinant one.
    pub fn shear(dim: usize, i: usize, j: usize, t: Rational) -> Self {
        assert!(i != j && i < dim && j < dim, "shear indices out of range");
        let mut m = Self::identity(dim);
        m.entries[i][j] = t;
        m
    }

    pub fn diagonal(diag: Vector) -> Self {
        let dim = diag.len();
        let mut m = Self::identity(dim);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i][i] = d;
        }
        m
    }

    /// Counterclockwise quarter turn of the plane, rows (0,−1),(1,0).
    pub fn quarter_turn() -> Self {
        RationalMatrix {
            dim: 2,
            entries: vec![num::vec_of(&[0, -1]), num::vec_of(&[1, 0])],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Vector] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn det(&self) -> Rational {
        num::det(&self.entries)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        RationalMatrix {
            dim: n,
            entries: (0..n)
                .map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(num::solve(&self.entries, &num::unit(n, j)).ok_or(Error::Singular)?);
        }
        // `cols[j]` is the j-th column of the inverse
        Ok(RationalMatrix {
            dim: n,
            entries: (0..n)
                .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
                .collect(),
        })
    }

    /// `g⁻ᵀ`, the map dual to `g` under the standard pairing.
    pub fn inverse_transpose(&self) -> Result<Self> {
        Ok(self.inverse()?.transpose())
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vector> {
        check_dim(self.dim, x.len())?;
        Ok(self.entries.iter().map(|row| num::dot(row, x)).collect())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Rational::zero(), |acc, k| {
                            acc + &self.entries[i][k] * &other.entries[k][j]
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(RationalMatrix { dim: n, entries })
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.entries.iter().map(|r| num::show_vec(r)).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
