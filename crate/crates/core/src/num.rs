//! Exact scalars and small vector helpers.
//!
//! Every quantity in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. The textual
//! form is always `"p/q"`, integers included (`"3/1"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A point or direction in ℝⁿ with exact coordinates.
pub type Vector = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn vec_of(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Renders in canonical `p/q` form.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`, reducing to lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::Parse {
        location: String::new(),
        message: format!("malformed rational {s:?}: {msg}"),
    };
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad("bad numerator"))?;
    let q: BigInt = q.parse().map_err(|_| bad("bad denominator"))?;
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(p, q))
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn parse_vector(v: &[String]) -> Result<Vector> {
    v.iter().map(|s| parse_rational(s)).collect()
}

/// Compact human rendering: integers without the `/1`.
pub fn show(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format_rational(x)
    }
}

pub fn show_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(show).collect();
    format!("({})", parts.join(", "))
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals.
pub mod serde_vector {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        format_vector(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vector, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        parse_vector(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of vectors.
pub mod serde_vectors {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = v.iter().map(|r| format_vector(r)).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vector>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|r| parse_vector(r))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Solves `m · x = rhs` for square `m`; `None` when singular.
pub fn solve(m: &[Vector], rhs: &[Rational]) -> Option<Vector> {
    let n = m.len();
    let mut a: Vec<Vector> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Rank and a row-echelon basis of the span of `rows`.
pub fn row_basis(rows: &[Vector]) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !r[p].is_zero() {
                let f = &r[p] / &b[p];
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            basis.push(r);
            pivots.push(p);
        }
    }
    basis
}

/// Basis of the orthogonal complement of the span of `rows` in ℝⁿ.
pub fn null_space(rows: &[Vector], n: usize) -> Vec<Vector> {
    // reduced row echelon form
    let mut a: Vec<Vector> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v /= &pv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..n {
                    let d = &f * &a[r][k];
                    a[i][k] -= d;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = zeros(n);
            v[fc] = Rational::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[row][fc].clone();
            }
            v
        })
        .collect()
}

/// Exact determinant by fraction-carrying elimination.
pub fn det(m: &[Vector]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(col, p);
            d = -d;
        }
        let pv = a[col][col].clone();
        d *= &pv;
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &pv;
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    d
}

pub fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * int(i))
}

pub fn binomial(n: usize, k: usize) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces_to_lowest_terms() {
        assert_eq!(format_rational(&parse_rational("3/6").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-4/-8").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7/1");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn determinant_and_solve() {
        let m = vec![vec_of(&[2, 1]), vec_of(&[1, 3])];
        assert_eq!(det(&m), int(5));
        let x = solve(&m, &vec_of(&[3, 4])).unwrap();
        assert_eq!(x, vec_of(&[1, 1]));
        assert!(solve(&[vec_of(&[1, 2]), vec_of(&[2, 4])], &vec_of(&[1, 1])).is_none());
    }

    #[test]
    fn null_space_is_orthogonal() {
        let rows = vec![vec_of(&[1, 1, 0]), vec_of(&[0, 1, 1])];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
        assert_eq!(row_basis(&rows).len(), 2);
    }
}
