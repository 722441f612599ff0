//! The Abel-pullback determinant
//! `det(f_i^{(j)}(x_k^{(j)})) / ∏_j ∏_{k<l} (x_l^{(j)} − x_k^{(j)})`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grassmann::{Ambient, CoordinateAlgebra, GrassmannPoint, Vector};
use crate::ramification::decompose;
use crate::series::{LaurentSeries, Rational};

/// Polynomial in several variables, known in total degree below `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly {
    vars: usize,
    bound: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl TruncatedPoly {
    pub fn zero(vars: usize, bound: u32) -> Self {
        TruncatedPoly { vars, bound, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize, bound: u32) -> Self {
        let mut p = Self::zero(vars, bound);
        if bound > 0 {
            p.terms.insert(vec![0; vars], Rational::from_integer(1.into()));
        }
        p
    }

    /// `f(x_var)` for a power series `f`.
    pub fn from_series(f: &LaurentSeries, var: usize, vars: usize, bound: u32) -> Result<Self> {
        if f.order() < 0 {
            return Err(Error::precision("evaluation needs a power series"));
        }
        let known = f.precision().clamp(0, i64::from(bound)) as u32;
        let mut p = Self::zero(vars, known);
        for (e, c) in f.terms() {
            if e < i64::from(known) {
                let mut exps = vec![0; vars];
                exps[var] = e as u32;
                p.terms.insert(exps, c.clone());
            }
        }
        Ok(p)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Terms of total degree below this bound are exact.
    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    fn push(&mut self, exps: Vec<u32>, c: Rational) {
        if exps.iter().sum::<u32>() >= self.bound || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars, self.bound.min(other.bound));
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.push(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncatedPoly {
            vars: self.vars,
            bound: self.bound,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // a term of degree d in one factor is only trustworthy up to the
        // other factor's bound shifted by d; the lowest degrees bound it
        let low = |p: &Self| p.terms.keys().map(|e| e.iter().sum::<u32>()).min().unwrap_or(p.bound);
        let bound = (self.bound + low(other)).min(other.bound + low(self));
        let mut out = Self::zero(self.vars, bound);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let exps: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.push(exps, x * y);
            }
        }
        out
    }

    /// Substitutes `x_to` for `x_from`.
    pub fn identify(&self, from: usize, to: usize) -> Self {
        let mut out = Self::zero(self.vars, self.bound);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps[to] += exps[from];
            exps[from] = 0;
            out.push(exps, c.clone());
        }
        out
    }

    /// Exchanges `x_a` and `x_b`.
    pub fn swap(&self, a: usize, b: usize) -> Self {
        let mut out = Self::zero(self.vars, self.bound);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps.swap(a, b);
            out.push(exps, c.clone());
        }
        out
    }

    /// Exact quotient by `x_l − x_k`.
    pub fn divide_difference(&self, l: usize, k: usize) -> Result<Self> {
        let mut rest = self.terms.clone();
        let mut quotient = Self::zero(self.vars, self.bound.saturating_sub(1));
        // the term with the largest power of x_l goes first
        while let Some((exps, c)) = rest
            .iter()
            .filter(|(e, _)| e[l] > 0)
            .max_by_key(|(e, _)| (e[l], (*e).clone()))
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            rest.remove(&exps);
            let mut q = exps.clone();
            q[l] -= 1;
            quotient.push(q.clone(), c.clone());
            // c·x^q·(x_l − x_k) has been removed; add back c·x^q·x_k
            let mut back = q;
            back[k] += 1;
            let entry = rest.entry(back.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                rest.remove(&back);
            }
        }
        if rest.values().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        Ok(quotient)
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", c.abs())?;
            for (v, p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "·x{}", v + 1)?,
                    _ => write!(f, "·x{}^{p}", v + 1)?,
                }
            }
        }
        write!(f, " + O(deg {})", self.bound)
    }
}

/// Determinant by expansion along columns, memoized on row subsets.
fn determinant(m: &[Vec<TruncatedPoly>], vars: usize, bound: u32) -> TruncatedPoly {
    let size = m.len();
    let mut memo: BTreeMap<u64, TruncatedPoly> = BTreeMap::new();
    memo.insert(0, TruncatedPoly::one(vars, bound));
    for mask in 1u64..(1u64 << size) {
        let col = mask.count_ones() as usize - 1;
        let mut acc = TruncatedPoly::zero(vars, bound);
        let mut sign_pos = col % 2 == 0;
        for row in 0..size {
            if mask & (1 << row) == 0 {
                continue;
            }
            let minor = &memo[&(mask & !(1 << row))];
            let term = m[row][col].mul(minor);
            acc = acc.add(&if sign_pos { term } else { term.neg() });
            sign_pos = !sign_pos;
        }
        memo.insert(mask, acc);
    }
    memo.remove(&((1u64 << size) - 1)).expect("full minor")
}

/// Variable index of `x_k^{(j)}`.
pub fn variable(j: usize, k: usize, n: usize) -> usize {
    j * n + k
}

/// The determinant formula for an explicit basis: `basis[i][j]` is the
/// `j`-th component of `f_i`, a power series in its own variable, and
/// each component contributes `n` points `x_1^{(j)}, …, x_n^{(j)}`.
pub fn tau_from_basis(basis: &[Vector], n: usize, bound: u32) -> Result<TruncatedPoly> {
    let r = basis.first().map_or(0, Vec::len);
    let mut det = abel_determinant(basis, n, bound)?;
    for j in 0..r {
        for k in 0..n {
            for l in k + 1..n {
                det = det.divide_difference(variable(j, l, n), variable(j, k, n))?;
            }
        }
    }
    Ok(det)
}

/// The numerator `det(f_i^{(j)}(x_k^{(j)}))` alone.
pub fn abel_determinant(basis: &[Vector], n: usize, bound: u32) -> Result<TruncatedPoly> {
    let r = basis.first().map_or(0, Vec::len);
    if basis.len() != n * r || basis.iter().any(|f| f.len() != r) {
        return Err(Error::Dimension(format!(
            "need {} basis vectors with {r} components, got {}",
            n * r,
            basis.len()
        )));
    }
    let vars = n * r;
    let matrix: Vec<Vec<TruncatedPoly>> = basis
        .iter()
        .map(|f| {
            (0..r)
                .flat_map(|j| (0..n).map(move |k| (j, k)))
                .map(|(j, k)| TruncatedPoly::from_series(&f[j], variable(j, k, n), vars, bound))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(determinant(&matrix, vars, bound))
}

/// `∏_j ∏_{k<l} (x_l^{(j)} − x_k^{(j)})`.
pub fn vandermonde(n: usize, r: usize, bound: u32) -> TruncatedPoly {
    let vars = n * r;
    let mut acc = TruncatedPoly::one(vars, bound);
    for j in 0..r {
        for k in 0..n {
            for l in k + 1..n {
                let mut diff = TruncatedPoly::zero(vars, bound);
                let mut xl = vec![0; vars];
                xl[variable(j, l, n)] = 1;
                let mut xk = vec![0; vars];
                xk[variable(j, k, n)] = 1;
                diff.push(xl, Rational::from_integer(1.into()));
                diff.push(xk, Rational::from_integer((-1).into()));
                acc = acc.mul(&diff);
            }
        }
    }
    acc
}

/// The windowed point `W` carried to the branch coordinates, shifted by
/// `T_•^N`, and the tau determinant of `V⁺ ∩ T_•^N W`.
#[derive(Clone, Debug)]
pub struct TauReport {
    pub partition: Vec<usize>,
    pub basis: Vec<Vector>,
    pub tau: TruncatedPoly,
}

/// `W` must have index 0 in branch coordinates and `V/(V⁺ + T_•^N W)`
/// must vanish inside the window.
pub fn abel_tau_determinant(w: &GrassmannPoint, n_shift: usize, bound: u32) -> Result<TauReport> {
    let p = w
        .ambient()
        .spectral()
        .ok_or_else(|| Error::Dimension("W must live in V_p".into()))?;
    let dec = decompose(p)?;
    let r = dec.components.len();
    let images: Vec<Vector> = w
        .lifts()?
        .iter()
        .map(|v| {
            let x = crate::spectral::AlgebraElement::new(v.clone());
            dec.components.iter().map(|c| c.image(&x)).collect::<Result<Vector>>()
        })
        .collect::<Result<_>>()?;
    let (low, _) = w.window();
    let nmin = dec.components.iter().map(|c| c.n as i64).min().unwrap_or(1);
    let top = images
        .iter()
        .flatten()
        .map(LaurentSeries::precision)
        .min()
        .unwrap_or(i64::from(bound))
        .min(i64::from(bound) + n_shift as i64);
    let window = (nmin * low, top);
    let branch = GrassmannPoint::new(Ambient::Rank(r), CoordinateAlgebra::constants(), images, window)?;
    let report = branch.index();
    if report.index != 0 {
        return Err(Error::Dimension(format!("W has index {} in branch coordinates", report.index)));
    }
    let shifted: Vec<Vector> = branch
        .basis()
        .iter()
        .map(|v| v.iter().map(|c| c.shift(n_shift as i64)).collect())
        .collect();
    let shifted_window = (window.0 + n_shift as i64, window.1);
    let moved = GrassmannPoint::new(Ambient::Rank(r), CoordinateAlgebra::constants(), shifted, shifted_window)?;
    let moved_report = moved.index();
    if moved_report.codim != 0 {
        return Err(Error::WindowUnstable(format!(
            "V/(V⁺ + T^N W) has dimension {} in the window",
            moved_report.codim
        )));
    }
    let basis: Vec<Vector> = moved
        .basis()
        .into_iter()
        .zip(moved.pivots())
        .filter(|(_, (e, _))| *e >= 0)
        .map(|(v, _)| v)
        .collect();
    if basis.len() != n_shift * r {
        return Err(Error::WindowUnstable(format!(
            "V⁺ ∩ T^N W has {} basis vectors in the window, expected {}",
            basis.len(),
            n_shift * r
        )));
    }
    let tau = tau_from_basis(&basis, n_shift, bound)?;
    Ok(TauReport {
        partition: dec.partition(),
        basis,
        tau,
    })
}
