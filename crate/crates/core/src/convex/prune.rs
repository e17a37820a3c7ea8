use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AffinePiece, MaxAffineFn};
use crate::error::{Error, Result};
use crate::lp::{Domain, Lp, LpResult, Sense};
use crate::num::{self, Rational};

/// Largest ambient dimension accepted by the hull-based routines.
pub const MAX_DIM: usize = 4;

/// Drops every piece that is nowhere the unique maximum.
///
/// A piece survives exactly when its lifted point `(a, −b)` is a vertex of
/// the lower convex hull of all lifted points. The result is sorted.
pub fn prune_pieces(dim: usize, mut pieces: Vec<AffinePiece>) -> Result<Vec<AffinePiece>> {
    if dim > MAX_DIM {
        return Err(Error::Capability {
            what: "lower hull",
            limit: MAX_DIM,
            got: dim,
        });
    }
    pieces.sort();
    // among parallel pieces only the highest can matter; it sorts last
    let mut dedup: Vec<AffinePiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match dedup.last_mut() {
            Some(last) if last.slope == p.slope => *last = p,
            _ => dedup.push(p),
        }
    }
    if dedup.len() <= 1 {
        return Ok(dedup);
    }
    if dim == 1 {
        return Ok(lower_chain(dedup));
    }
    let cleared = Cleared::new(&dedup);
    let keep: Vec<bool> = (0..dedup.len()).map(|i| strictly_maximal(&[(&cleared, i)])).collect();
    Ok(dedup
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect())
}

/// Monotone-chain lower hull of the lifted points `(a, −b)` for `n = 1`.
/// Input is sorted by slope with distinct slopes.
fn lower_chain(pieces: Vec<AffinePiece>) -> Vec<AffinePiece> {
    let mut chain: Vec<AffinePiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        while chain.len() >= 2 {
            let o = &chain[chain.len() - 2];
            let a = &chain[chain.len() - 1];
            if orient(o, a, &p).is_positive() {
                break;
            }
            chain.pop();
        }
        chain.push(p);
    }
    chain
}

/// Orientation of three lifted points `(a, −b)` in the plane.
fn orient(o: &AffinePiece, a: &AffinePiece, b: &AffinePiece) -> Rational {
    let (ox, oy) = (&o.slope[0], -&o.offset);
    let (ax, ay) = (&a.slope[0], -&a.offset);
    let (bx, by) = (&b.slope[0], -&b.offset);
    (ax - ox) * (by - &oy) - (ay - &oy) * (bx - ox)
}

/// Whether some point `x` makes the chosen piece of every group the strict
/// maximum of its group simultaneously.
///
/// The margin LP `max z` s.t. `⟨a_k − a_i, x⟩ + z ≤ b_i − b_k`, `z ≤ 1` has
/// many rows and few columns, so its dual is solved instead:
/// `min Σ λ_k (b_i − b_k) + μ` s.t. `Σ λ_k (a_k − a_i) = 0`, `Σ λ_k + μ = 1`.
/// Pieces with denominators cleared by a common positive factor, with
/// floating-point copies of the original values for the guide LP.
pub(crate) struct Cleared {
    slopes: Vec<Vec<BigInt>>,
    offsets: Vec<BigInt>,
    scale: BigInt,
    fslopes: Vec<Vec<f64>>,
    foffsets: Vec<f64>,
}

impl Cleared {
    pub(crate) fn new(pieces: &[AffinePiece]) -> Self {
        let scale = pieces
            .iter()
            .flat_map(|p| p.slope.iter().chain(std::iter::once(&p.offset)))
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let clear = |x: &Rational| (x * Rational::from_integer(scale.clone())).to_integer();
        Cleared {
            slopes: pieces.iter().map(|p| p.slope.iter().map(clear).collect()).collect(),
            offsets: pieces.iter().map(|p| clear(&p.offset)).collect(),
            fslopes: pieces.iter().map(|p| p.slope.iter().map(num::to_f64).collect()).collect(),
            foffsets: pieces.iter().map(|p| num::to_f64(&p.offset)).collect(),
            scale,
        }
    }

    fn len(&self) -> usize {
        self.offsets.len()
    }
}

/// Row `⟨g, x⟩ + z ≤ r` of the margin LP, stored as `g = G/L`, `r = R/L`.
struct Row {
    g: Vec<BigInt>,
    r: BigInt,
    scale: BigInt,
    fg: Vec<f64>,
    fr: f64,
}

/// Whether some point `x` makes the chosen piece of every group the strict
/// maximum of its group simultaneously.
///
/// This is the sign of the margin LP `max z` s.t. `⟨a_k − a_i, x⟩ + z ≤
/// b_i − b_k`, `z ≤ 1`. Its dual `min Σ λ_k (b_i − b_k) + μ` s.t.
/// `Σ λ_k (a_k − a_i) = 0`, `Σ λ_k + μ = 1` has few rows, so that is what
/// gets solved.
pub(crate) fn strictly_maximal(groups: &[(&Cleared, usize)]) -> bool {
    let dim = groups[0].0.slopes[0].len();
    let mut rows: Vec<Row> = Vec::new();
    for (c, i) in groups {
        for k in 0..c.len() {
            if k == *i {
                continue;
            }
            rows.push(Row {
                g: c.slopes[k].iter().zip(&c.slopes[*i]).map(|(a, b)| a - b).collect(),
                r: &c.offsets[*i] - &c.offsets[k],
                scale: c.scale.clone(),
                fg: c.fslopes[k].iter().zip(&c.fslopes[*i]).map(|(a, b)| a - b).collect(),
                fr: c.foffsets[*i] - c.foffsets[k],
            });
        }
    }
    if let Some(answer) = certified_margin(dim, &rows) {
        return answer;
    }
    exact_margin(dim, &rows)
}

fn exact_margin(dim: usize, rows: &[Row]) -> bool {
    let m = rows.len();
    let ratio = |x: &BigInt, l: &BigInt| Rational::new(x.clone(), l.clone());
    // objective: maximize −(Σ λ_k r_k + μ)
    let mut objective: Vec<Rational> = rows.iter().map(|row| -ratio(&row.r, &row.scale)).collect();
    objective.push(-Rational::one());
    let mut lp = Lp::new(vec![Domain::NonNeg; m + 1], objective);
    for d in 0..dim {
        let mut coeffs: Vec<Rational> = rows.iter().map(|row| ratio(&row.g[d], &row.scale)).collect();
        coeffs.push(Rational::zero());
        lp.constraint(coeffs, Sense::Eq, Rational::zero());
    }
    lp.constraint(vec![Rational::one(); m + 1], Sense::Eq, Rational::one());
    match lp.maximize() {
        LpResult::Optimal { value, .. } => value.is_negative(),
        LpResult::Infeasible | LpResult::Unbounded => unreachable!("μ = 1 is feasible and the objective is bounded"),
    }
}

/// Takes the optimal basis of a floating-point solve and confirms it in
/// integer arithmetic: a positive margin by the basis vertex, where every
/// row must be strict, a non-positive one by a nonnegative basic dual
/// solution. `None` when neither certificate checks out.
fn certified_margin(dim: usize, rows: &[Row]) -> Option<bool> {
    let (basis, positive) = float_dual(dim, rows)?;
    let m = rows.len();
    // Every basic column scaled by its row's L: `[G; L]` with cost R. The
    // artificials left on redundant rows are unit columns with zero cost.
    let column = |k: usize| -> (Vec<BigInt>, BigInt) {
        if k > m {
            (unit(dim + 1, k - m - 1), BigInt::zero())
        } else if k == m {
            (unit(dim + 1, dim), BigInt::one())
        } else {
            let mut v = rows[k].g.clone();
            v.push(rows[k].scale.clone());
            (v, rows[k].r.clone())
        }
    };
    let (cols, costs): (Vec<Vec<BigInt>>, Vec<BigInt>) = basis.iter().map(|&k| column(k)).unzip();
    if positive {
        // ⟨G_k, x⟩ + L_k z = R_k on basic columns; y = (x, z) = Y/D
        let (y, d) = cramer(&cols, &costs)?;
        let (x, z) = (&y[..dim], &y[dim]);
        let strict = z.is_positive()
            && rows.iter().all(|row| row.g.iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>() < &row.r * &d);
        return strict.then_some(true);
    }
    let matrix: Vec<Vec<BigInt>> = (0..=dim).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let (nu, _) = cramer(&matrix, &unit(dim + 1, dim))?;
    if nu.iter().any(Signed::is_negative) || basis.iter().zip(&nu).any(|(&k, l)| k > m && !l.is_zero()) {
        return None;
    }
    let value: BigInt = costs.iter().zip(&nu).map(|(c, l)| c * l).sum();
    (!value.is_positive()).then_some(false)
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// Solves `m · x = rhs` as `x = X/D` with `D > 0`, by Cramer's rule.
fn cramer(m: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
    let d = bareiss_det(m.to_vec());
    if d.is_zero() {
        return None;
    }
    let sign = if d.is_negative() { -BigInt::one() } else { BigInt::one() };
    let x = (0..m.len())
        .map(|c| {
            let replaced: Vec<Vec<BigInt>> = m
                .iter()
                .zip(rhs)
                .map(|(row, b)| {
                    let mut row = row.clone();
                    row[c] = b.clone();
                    row
                })
                .collect();
            bareiss_det(replaced) * &sign
        })
        .collect();
    Some((x, d.abs()))
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Floating-point simplex on `min Σ λ_k r_k + μ` s.t. `Σ λ_k g_k = 0`,
/// `Σ λ_k + μ = 1`. Returns the final basis (columns `0..m` are the λ, `m`
/// is μ, above that artificials) and whether the optimum looks positive.
fn float_dual(dim: usize, rows: &[Row]) -> Option<(Vec<usize>, bool)> {
    const EPS: f64 = 1e-11;
    let m = rows.len();
    let height = dim + 1;
    let real = m + 1;
    let total = real + height;
    let mut t = vec![vec![0.0f64; total + 1]; height];
    let mut cost = vec![0.0f64; total];
    for (k, row) in rows.iter().enumerate() {
        for d in 0..dim {
            t[d][k] = row.fg[d];
        }
        t[dim][k] = 1.0;
        cost[k] = row.fr;
    }
    t[dim][m] = 1.0;
    cost[m] = 1.0;
    for (r, line) in t.iter_mut().enumerate() {
        line[real + r] = 1.0;
    }
    t[dim][total] = 1.0;
    let mut basis: Vec<usize> = (real..total).collect();

    let reduced = |t: &[Vec<f64>], basis: &[usize], c: &[f64]| -> Vec<f64> {
        let mut d = vec![0.0; total + 1];
        d[..total].copy_from_slice(c);
        for (r, &b) in basis.iter().enumerate() {
            if c[b] != 0.0 {
                for j in 0..=total {
                    d[j] -= c[b] * t[r][j];
                }
            }
        }
        d
    };
    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, d: &mut Vec<f64>| -> Option<()> {
        for _ in 0..10_000 {
            let Some(col) = (0..real).find(|&j| d[j] < -EPS) else {
                return Some(());
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..height {
                if t[r][col] > EPS {
                    let ratio = t[r][total] / t[r][col];
                    let better = match best {
                        None => true,
                        Some((br, bv)) => ratio < bv - EPS || (ratio <= bv + EPS && basis[r] < basis[br]),
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            let (row, _) = best?;
            float_pivot(t, d, row, col);
            basis[row] = col;
        }
        None
    };

    let mut phase1 = vec![0.0; total];
    phase1[real..].fill(1.0);
    let mut d = reduced(&t, &basis, &phase1);
    run(&mut t, &mut basis, &mut d)?;
    if -d[total] > 1e-9 {
        return None;
    }
    for r in 0..height {
        if basis[r] >= real {
            if let Some(col) = (0..real).find(|&j| t[r][j].abs() > 1e-9) {
                float_pivot(&mut t, &mut d, r, col);
                basis[r] = col;
            }
        }
    }
    let mut d = reduced(&t, &basis, &cost);
    run(&mut t, &mut basis, &mut d)?;
    Some((basis, -d[total] > 1e-9))
}

fn float_pivot(t: &mut [Vec<f64>], d: &mut [f64], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (r, line) in t.iter_mut().enumerate() {
        if r != row && line[col] != 0.0 {
            let f = line[col];
            for (v, pv) in line.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
    }
    let f = d[col];
    if f != 0.0 {
        for (v, pv) in d.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
    }
}

/// Sum of two pruned functions. Piece `(i, j)` survives iff pieces `i` and
/// `j` are strict maxima of their functions at a common point.
pub(crate) fn sum_pruned(f: &MaxAffineFn, h: &MaxAffineFn) -> MaxAffineFn {
    let (fp, hp) = (f.pieces(), h.pieces());
    let (fc, hc) = (Cleared::new(fp), Cleared::new(hp));
    let mut out = Vec::new();
    for i in 0..fp.len() {
        for j in 0..hp.len() {
            let keep = match (fp.len(), hp.len()) {
                (1, 1) => true,
                (1, _) => strictly_maximal(&[(&hc, j)]),
                (_, 1) => strictly_maximal(&[(&fc, i)]),
                _ => strictly_maximal(&[(&fc, i), (&hc, j)]),
            };
            if keep {
                out.push(AffinePiece::new(
                    num::add(&fp[i].slope, &hp[j].slope),
                    &fp[i].offset + &hp[j].offset,
                ));
            }
        }
    }
    out.sort();
    out.dedup();
    MaxAffineFn::from_pruned(f.dim(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int, vec_of};

    fn p1(a: Rational, b: Rational) -> AffinePiece {
        AffinePiece::new(vec![a], b)
    }

    #[test]
    fn dominated_parallel_piece() {
        let out = prune_pieces(1, vec![p1(int(1), int(0)), p1(int(1), int(-1))]).unwrap();
        assert_eq!(out, vec![p1(int(1), int(0))]);
    }

    #[test]
    fn convex_combination_piece() {
        let out = prune_pieces(
            1,
            vec![p1(int(0), int(0)), p1(int(1), int(0)), p1(frac(1, 2), int(0))],
        )
        .unwrap();
        assert_eq!(out, vec![p1(int(0), int(0)), p1(int(1), int(0))]);
    }

    #[test]
    fn lp_path_agrees_with_chain_in_one_dimension() {
        let pieces = vec![
            p1(int(-2), int(-3)),
            p1(int(-1), int(0)),
            p1(int(0), int(1)),
            p1(int(1), int(0)),
            p1(int(3), int(-4)),
            p1(frac(1, 2), int(1)),
        ];
        let chain = prune_pieces(1, pieces.clone()).unwrap();
        let mut sorted = pieces.clone();
        sorted.sort();
        let cleared = Cleared::new(&sorted);
        let lp: Vec<_> = (0..sorted.len())
            .filter(|&i| strictly_maximal(&[(&cleared, i)]))
            .map(|i| sorted[i].clone())
            .collect();
        assert_eq!(chain, lp);
    }

    #[test]
    fn square_pyramid_apex_piece_in_two_dimensions() {
        // max(|x|, |y|, 1/2) keeps the flat top; max(|x|,|y|, -1) drops it
        let mk = |c: Rational| {
            vec![
                AffinePiece::new(vec_of(&[1, 0]), int(0)),
                AffinePiece::new(vec_of(&[-1, 0]), int(0)),
                AffinePiece::new(vec_of(&[0, 1]), int(0)),
                AffinePiece::new(vec_of(&[0, -1]), int(0)),
                AffinePiece::new(vec_of(&[0, 0]), c),
            ]
        };
        assert_eq!(prune_pieces(2, mk(frac(1, 2))).unwrap().len(), 5);
        assert_eq!(prune_pieces(2, mk(int(-1))).unwrap().len(), 4);
        assert_eq!(prune_pieces(2, mk(int(0))).unwrap().len(), 4);
    }

    #[test]
    fn capability_limit() {
        let p = AffinePiece::new(num::zeros(5), int(0));
        assert!(matches!(
            prune_pieces(5, vec![p]),
            Err(Error::Capability { limit: 4, got: 5, .. })
        ));
    }

    #[test]
    fn certified_margin_agrees_with_exact_lp() {
        let mut rng = crate::random::Sampler::for_trial(5, 0);
        let mut certified = 0;
        for dim in 1..=4 {
            for _ in 0..30 {
                let (f, h) = (rng.max_affine(dim), rng.max_affine(dim));
                let (fc, hc) = (Cleared::new(f.pieces()), Cleared::new(h.pieces()));
                for i in 0..f.len() {
                    for j in 0..h.len() {
                        let rows: Vec<Row> = [(&fc, i), (&hc, j)]
                            .into_iter()
                            .flat_map(|(c, i)| {
                                (0..c.len()).filter(move |&k| k != i).map(move |k| Row {
                                    g: c.slopes[k].iter().zip(&c.slopes[i]).map(|(a, b)| a - b).collect(),
                                    r: &c.offsets[i] - &c.offsets[k],
                                    scale: c.scale.clone(),
                                    fg: c.fslopes[k].iter().zip(&c.fslopes[i]).map(|(a, b)| a - b).collect(),
                                    fr: c.foffsets[i] - c.foffsets[k],
                                })
                            })
                            .collect();
                        if rows.is_empty() {
                            continue;
                        }
                        if let Some(answer) = certified_margin(dim, &rows) {
                            certified += 1;
                            assert_eq!(answer, exact_margin(dim, &rows));
                        }
                    }
                }
            }
        }
        assert!(certified > 0);
    }

    #[test]
    fn bareiss_matches_rational_determinant() {
        let rows = [[2, -1, 0], [3, 5, 7], [-4, 1, 6]];
        let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let rats: Vec<_> = rows.iter().map(|r| vec_of(r)).collect();
        assert_eq!(Rational::from_integer(bareiss_det(ints)), num::det(&rats));
    }
}
