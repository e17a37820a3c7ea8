//! Dense two-phase simplex over exact rationals.
//!
//! Problems are small (tens of rows, a handful of variables), so a plain
//! tableau with Bland's anti-cycling rule is enough.

use num_traits::{Signed, Zero};

use crate::num::{Rational, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Free,
    NonNeg,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal { value: Rational, x: Vector },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// `maximize ⟨objective, x⟩` subject to the added rows.
#[derive(Debug, Clone)]
pub struct Lp {
    domains: Vec<Domain>,
    objective: Vector,
    rows: Vec<(Vector, Sense, Rational)>,
}

impl Lp {
    pub fn new(domains: Vec<Domain>, objective: Vector) -> Self {
        assert_eq!(domains.len(), objective.len());
        Lp {
            domains,
            objective,
            rows: Vec::new(),
        }
    }

    pub fn constraint(&mut self, coeffs: Vector, sense: Sense, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.domains.len());
        self.rows.push((coeffs, sense, rhs));
        self
    }

    pub fn maximize(&self) -> LpResult {
        // Column layout: structural columns (free variables split in two),
        // then one slack/surplus per inequality row, then artificials.
        let mut col_of = Vec::with_capacity(self.domains.len());
        let mut ncols = 0;
        for d in &self.domains {
            col_of.push(ncols);
            ncols += if *d == Domain::Free { 2 } else { 1 };
        }
        let nstruct = ncols;

        let m = self.rows.len();
        let mut rows: Vec<(Vector, Sense, Rational)> = Vec::with_capacity(m);
        for (coeffs, sense, rhs) in &self.rows {
            let mut row = vec![Rational::zero(); nstruct];
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                row[col_of[i]] = c.clone();
                if self.domains[i] == Domain::Free {
                    row[col_of[i] + 1] = -c.clone();
                }
            }
            let (row, sense, rhs) = if rhs.is_negative() {
                let flipped = match sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                (row.into_iter().map(|x| -x).collect(), flipped, -rhs.clone())
            } else {
                (row, *sense, rhs.clone())
            };
            rows.push((row, sense, rhs));
        }

        let nslack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let nart = rows.iter().filter(|r| r.1 != Sense::Le).count();
        let total = nstruct + nslack + nart;
        let rhs_col = total;

        let mut t = Tableau {
            a: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            obj: vec![Rational::zero(); total + 1],
            width: total,
        };
        let mut slack = nstruct;
        let mut art = nstruct + nslack;
        let mut artificial_rows = Vec::new();
        for (row, sense, rhs) in rows {
            let mut full = row;
            full.resize(total + 1, Rational::zero());
            full[rhs_col] = rhs;
            match sense {
                Sense::Le => {
                    full[slack] = Rational::from_integer(1.into());
                    t.basis.push(slack);
                    slack += 1;
                }
                Sense::Ge => {
                    full[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                    full[art] = Rational::from_integer(1.into());
                    t.basis.push(art);
                    artificial_rows.push(t.a.len());
                    art += 1;
                }
                Sense::Eq => {
                    full[art] = Rational::from_integer(1.into());
                    t.basis.push(art);
                    artificial_rows.push(t.a.len());
                    art += 1;
                }
            }
            t.a.push(full);
        }

        let first_art = nstruct + nslack;
        if nart > 0 {
            // phase 1: maximize -Σ artificials
            for j in first_art..total {
                t.obj[j] = Rational::from_integer((-1).into());
            }
            for &r in &artificial_rows {
                let row = t.a[r].clone();
                for (o, v) in t.obj.iter_mut().zip(&row) {
                    *o += v;
                }
            }
            match t.run(total) {
                Phase::Optimal => {}
                Phase::Unbounded => unreachable!("phase one objective is bounded"),
            }
            if !t.obj[rhs_col].is_zero() {
                return LpResult::Infeasible;
            }
            // drive remaining zero-level artificials out of the basis
            let mut r = 0;
            while r < t.a.len() {
                if t.basis[r] >= first_art {
                    match (0..first_art).find(|&j| !t.a[r][j].is_zero()) {
                        Some(j) => {
                            t.pivot(r, j);
                            r += 1;
                        }
                        None => {
                            t.a.remove(r);
                            t.basis.remove(r);
                        }
                    }
                } else {
                    r += 1;
                }
            }
        }

        // phase 2
        t.obj = vec![Rational::zero(); total + 1];
        for (i, d) in self.domains.iter().enumerate() {
            let c = &self.objective[i];
            if c.is_zero() {
                continue;
            }
            t.obj[col_of[i]] = c.clone();
            if *d == Domain::Free {
                t.obj[col_of[i] + 1] = -c.clone();
            }
        }
        for r in 0..t.a.len() {
            let b = t.basis[r];
            if !t.obj[b].is_zero() {
                let f = t.obj[b].clone();
                let row = &t.a[r];
                for (o, v) in t.obj.iter_mut().zip(row) {
                    if !v.is_zero() {
                        *o -= &f * v;
                    }
                }
            }
        }
        match t.run(first_art) {
            Phase::Unbounded => LpResult::Unbounded,
            Phase::Optimal => {
                let mut std = vec![Rational::zero(); total];
                for (r, &b) in t.basis.iter().enumerate() {
                    std[b] = t.a[r][rhs_col].clone();
                }
                let x = self
                    .domains
                    .iter()
                    .enumerate()
                    .map(|(i, d)| match d {
                        Domain::Free => &std[col_of[i]] - &std[col_of[i] + 1],
                        Domain::NonNeg => std[col_of[i]].clone(),
                    })
                    .collect();
                LpResult::Optimal {
                    value: -t.obj[rhs_col].clone(),
                    x,
                }
            }
        }
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

struct Tableau {
    a: Vec<Vector>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry holds minus the objective value.
    obj: Vector,
    width: usize,
}

impl Tableau {
    /// Bland's rule over columns `0..allowed`.
    fn run(&mut self, allowed: usize) -> Phase {
        let rhs = self.width;
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_positive()) else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.a.len() {
                let v = &self.a[r][col];
                if v.is_positive() {
                    let ratio = &self.a[r][rhs] / v;
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => {
                            ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                        }
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            match best {
                None => return Phase::Unbounded,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = self.a[row].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&k| !pivot_row[k].is_zero()).collect();
        for (r, line) in self.a.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for &k in &nz {
                line[k] -= &f * &pivot_row[k];
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for &k in &nz {
                self.obj[k] -= &f * &pivot_row[k];
            }
        }
        self.basis[row] = col;
    }
}
