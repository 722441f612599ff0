//! Arithmetic in `V_p = k((z))[T]/p(T)`.
//!
//! Elements are stored in the basis `1, T, …, T^(n-1)`. The characteristic
//! coefficients follow the sign convention
//! `p(T) = T^n − a₁T^(n−1) + a₂T^(n−2) − … + (−1)^n a_n`, so `a_i` is the
//! `i`-th elementary symmetric function of the roots.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{rat, LaurentSeries, Rational, EXACT};

/// Default number of coefficients kept when an expansion is unavoidable.
pub const DEFAULT_WORKING_PRECISION: i64 = 16;

/// Inverse of a scalar series, truncating exact non-monomials to
/// `working` coefficients past their order first.
pub(crate) fn invert_series(s: &LaurentSeries, working: i64) -> Result<LaurentSeries> {
    match s.invert() {
        Err(Error::Precision(_)) => s.truncate(s.order() + working).invert(),
        other => other,
    }
}

/// Dense square or rectangular matrix of Laurent series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentSeries>,
}

impl SeriesMatrix {
    pub fn from_rows(rows: Vec<Vec<LaurentSeries>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(SeriesMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SeriesMatrix {
            rows,
            cols,
            entries: vec![LaurentSeries::zero(EXACT); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentSeries::one(EXACT));
        }
        m
    }

    /// `c·I` for a scalar series `c`.
    pub fn scalar(n: usize, c: &LaurentSeries) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentSeries) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentSeries>> {
        self.entries.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<LaurentSeries> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<LaurentSeries>]) -> Result<Self> {
        let n = cols.first().map_or(0, Vec::len);
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn mul(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentSeries::zero(EXACT);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() && a.is_exact() || b.is_zero() && b.is_exact() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let col = Self::from_columns(&[v.to_vec()])?;
        Ok(self.mul(&col)?.column(0))
    }

    pub fn trace(&self) -> LaurentSeries {
        (0..self.rows.min(self.cols)).fold(LaurentSeries::zero(EXACT), |acc, i| &acc + self.get(i, i))
    }

    pub fn pow(&self, k: u32) -> Result<SeriesMatrix> {
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Determinant by subset dynamic programming over the Laplace
    /// expansion. Only ring operations are used, so no precision is lost
    /// to division.
    pub fn det(&self) -> Result<LaurentSeries> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.minor_det(&idx, &idx))
    }

    /// Determinant of the submatrix on `rows × cols` (equal lengths).
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> LaurentSeries {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        // f[mask] = det of rows[0..popcount(mask)] × the columns in mask.
        let mut f: Vec<Option<LaurentSeries>> = vec![None; 1 << k];
        f[0] = Some(LaurentSeries::one(EXACT));
        for mask in 1usize..(1 << k) {
            let r = mask.count_ones() as usize - 1;
            let mut acc = LaurentSeries::zero(EXACT);
            let mut position = 0usize;
            for j in 0..k {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let entry = self.get(rows[r], cols[j]);
                let sub = f[mask ^ (1 << j)].as_ref().expect("filled in mask order");
                if !(entry.is_zero() && entry.is_exact()) && !(sub.is_zero() && sub.is_exact()) {
                    let term = entry * sub;
                    // sign of the cofactor: column j is at `position` among the mask.
                    acc = if (r + position) % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                position += 1;
            }
            f[mask] = Some(acc);
        }
        f[(1 << k) - 1].take().expect("full mask")
    }

    /// Inverse by Gauss–Jordan elimination, choosing pivots of minimal
    /// order so precision loss is as small as possible.
    pub fn inverse(&self, working: i64) -> Result<SeriesMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for k in 0..n {
            let pivot = (k..n)
                .filter(|&r| !a[r][k].is_zero())
                .min_by_key(|&r| a[r][k].order())
                .ok_or_else(|| Error::NotInvertible("singular to known precision".into()))?;
            a.swap(k, pivot);
            inv.swap(k, pivot);
            let pinv = invert_series(&a[k][k], working)?;
            for j in 0..n {
                a[k][j] = &a[k][j] * &pinv;
                inv[k][j] = &inv[k][j] * &pinv;
            }
            for r in 0..n {
                if r == k || a[r][k].is_zero() {
                    continue;
                }
                let factor = a[r][k].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&factor * &a[k][j]);
                    inv[r][j] = &inv[r][j] - &(&factor * &inv[k][j]);
                }
            }
        }
        Self::from_rows(inv)
    }

    /// Entrywise agreement on common known windows.
    pub fn agrees_with(&self, other: &SeriesMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.agrees_with(b))
    }

    /// Smallest precision among the entries.
    pub fn precision(&self) -> i64 {
        self.entries.iter().map(LaurentSeries::precision).min().unwrap_or(EXACT)
    }
}

/// Characteristic coefficients `a_i = Tr(Λ^i A)`, computed as sums of
/// principal `i × i` minors.
pub fn matrix_char_coefficients(a: &SeriesMatrix) -> Result<SpectralPolynomial> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::Dimension("characteristic coefficients need a nonempty square matrix".into()));
    }
    let n = a.nrows();
    let mut coeffs = vec![LaurentSeries::zero(EXACT); n];
    for mask in 1usize..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let m = a.minor_det(&idx, &idx);
        let i = idx.len() - 1;
        coeffs[i] = &coeffs[i] + &m;
    }
    SpectralPolynomial::new(coeffs)
}

/// Monic `p(T) = T^n − a₁T^(n−1) + … + (−1)^n a_n` with power series
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPolynomial {
    a: Vec<LaurentSeries>,
    working: i64,
}

impl SpectralPolynomial {
    /// `a` holds `a₁, …, a_n`.
    pub fn new(a: Vec<LaurentSeries>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Dimension("rank must be positive".into()));
        }
        if let Some(bad) = a.iter().find(|s| s.order() < 0) {
            return Err(Error::Dimension(format!(
                "characteristic coefficients must be power series, got order {}",
                bad.order()
            )));
        }
        Ok(SpectralPolynomial {
            a,
            working: DEFAULT_WORKING_PRECISION,
        })
    }

    /// From the ordinary monic coefficients: `p = T^n + Σ c_k T^k` with
    /// `c = [c_0, …, c_{n−1}]`.
    pub fn from_monic(c: Vec<LaurentSeries>) -> Result<Self> {
        let n = c.len();
        let a = (1..=n)
            .map(|i| {
                let ci = &c[n - i];
                if i % 2 == 0 { ci.clone() } else { -ci }
            })
            .collect();
        Self::new(a)
    }

    /// Number of coefficients kept when an inverse has to be expanded.
    pub fn with_working_precision(mut self, working: i64) -> Self {
        self.working = working;
        self
    }

    pub fn working_precision(&self) -> i64 {
        self.working
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `a_i` for `1 ≤ i ≤ n`; zero for `i > n`.
    pub fn a(&self, i: usize) -> LaurentSeries {
        if i == 0 {
            LaurentSeries::one(EXACT)
        } else if i <= self.n() {
            self.a[i - 1].clone()
        } else {
            LaurentSeries::zero(EXACT)
        }
    }

    pub fn coefficients(&self) -> &[LaurentSeries] {
        &self.a
    }

    /// Ordinary monic coefficients `c_0, …, c_{n−1}`.
    pub fn monic_coefficients(&self) -> Vec<LaurentSeries> {
        let n = self.n();
        (0..n)
            .map(|k| {
                let i = n - k;
                let ai = self.a(i);
                if i % 2 == 0 { ai } else { -&ai }
            })
            .collect()
    }

    pub fn precision(&self) -> i64 {
        self.a.iter().map(LaurentSeries::precision).min().unwrap_or(EXACT)
    }

    /// Residual polynomial `p mod z` as rational coefficients `c_0..c_n`
    /// (with `c_n = 1`).
    pub fn residual(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .monic_coefficients()
            .iter()
            .map(|c| c.coeff_or_zero(0))
            .collect();
        out.push(Rational::one());
        out
    }

    /// The companion matrix: ones on the subdiagonal, last column
    /// `((−1)^(n+1) a_n, …, −a₂, a₁)`.
    pub fn companion_matrix(&self) -> SeriesMatrix {
        let n = self.n();
        let mut m = SeriesMatrix::zeros(n, n);
        for i in 1..n {
            m.set(i, i - 1, LaurentSeries::one(EXACT));
        }
        let c = self.monic_coefficients();
        for (i, ci) in c.iter().enumerate() {
            m.set(i, n - 1, -ci);
        }
        m
    }

    fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.c.len() != self.n() {
            return Err(Error::Dimension(format!(
                "element of length {} in an algebra of rank {}",
                x.c.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// Reduces a polynomial in `T` (ascending coefficients) modulo `p`.
    pub fn reduce(&self, mut poly: Vec<LaurentSeries>) -> AlgebraElement {
        let n = self.n();
        let c = self.monic_coefficients();
        while poly.len() > n {
            let top = poly.pop().expect("nonempty");
            if top.is_zero() && top.is_exact() {
                continue;
            }
            let shift = poly.len() - n;
            for (k, ck) in c.iter().enumerate() {
                if ck.is_zero() && ck.is_exact() {
                    continue;
                }
                poly[shift + k] = &poly[shift + k] - &(&top * ck);
            }
        }
        while poly.len() < n {
            poly.push(LaurentSeries::zero(EXACT));
        }
        AlgebraElement { c: poly }
    }

    /// Product in `V_p`.
    pub fn mul_mod(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n();
        let mut prod = vec![LaurentSeries::zero(EXACT); 2 * n - 1];
        for (i, ai) in a.c.iter().enumerate() {
            if ai.is_zero() && ai.is_exact() {
                continue;
            }
            for (j, bj) in b.c.iter().enumerate() {
                if bj.is_zero() && bj.is_exact() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(ai * bj);
            }
        }
        Ok(self.reduce(prod))
    }

    /// Multiplication by `T`.
    pub fn mul_t(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        let mut poly = vec![LaurentSeries::zero(EXACT)];
        poly.extend(a.c.iter().cloned());
        Ok(self.reduce(poly))
    }

    /// The class of `T` in `V_p` (a scalar when `n = 1`).
    pub fn t_element(&self) -> AlgebraElement {
        self.mul_t(&AlgebraElement::one(self.n())).expect("rank matches")
    }

    /// Matrix of multiplication by `a` in the basis `1, T, …, T^(n−1)`
    /// (column `j` is `a·T^j`).
    pub fn multiplication_matrix(&self, a: &AlgebraElement) -> Result<SeriesMatrix> {
        self.check(a)?;
        let mut cols = Vec::with_capacity(self.n());
        let mut cur = a.clone();
        for _ in 0..self.n() {
            cols.push(cur.c.clone());
            cur = self.mul_t(&cur)?;
        }
        SeriesMatrix::from_columns(&cols)
    }

    pub fn invert_element(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        let m = self.multiplication_matrix(a)?;
        let inv = m.inverse(self.working).map_err(|e| match e {
            Error::NotInvertible(_) => Error::NotInvertible("norm vanishes to known precision".into()),
            other => other,
        })?;
        Ok(AlgebraElement { c: inv.column(0) })
    }

    /// `Tr(T^k)` for `0 ≤ k ≤ kmax` by the Newton recursion
    /// `p_k = a₁p_{k−1} − a₂p_{k−2} + … + (−1)^(k−1) k·a_k`.
    pub fn power_traces(&self, kmax: usize) -> Vec<LaurentSeries> {
        let n = self.n();
        let mut p: Vec<LaurentSeries> = Vec::with_capacity(kmax + 1);
        p.push(LaurentSeries::constant(rat(n as i64), EXACT));
        for k in 1..=kmax {
            let mut acc = LaurentSeries::zero(EXACT);
            for i in 1..=k.min(n) {
                let term = if i == k {
                    self.a(i).scale(&rat(k as i64))
                } else {
                    &self.a(i) * &p[k - i]
                };
                acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            p.push(acc);
        }
        p
    }

    /// `Tr(T^k)` for `k ≥ −1`.
    pub fn power_trace(&self, k: i64) -> Result<LaurentSeries> {
        match k {
            -1 => {
                let tinv = self.invert_element(&self.t_element())?;
                self.element_trace(&tinv)
            }
            k if k >= 0 => Ok(self.power_traces(k as usize).pop().expect("nonempty")),
            _ => Err(Error::Dimension(format!("power trace index {k} < -1"))),
        }
    }

    /// Trace of multiplication by `a`, by linearity over the power traces.
    pub fn element_trace(&self, a: &AlgebraElement) -> Result<LaurentSeries> {
        self.check(a)?;
        let traces = self.power_traces(self.n() - 1);
        Ok(a.c
            .iter()
            .zip(&traces)
            .fold(LaurentSeries::zero(EXACT), |acc, (c, t)| &acc + &(c * t)))
    }

    /// `Res_{z=0} Tr(a·b) dz`.
    pub fn trace_pairing(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<Rational> {
        self.element_trace(&self.mul_mod(a, b)?)?.residue()
    }

    /// Gram matrix `Tr(T^(i+j))` of the trace form.
    pub fn trace_gram(&self) -> SeriesMatrix {
        let n = self.n();
        let t = self.power_traces(2 * n - 2);
        let rows = (0..n).map(|i| (0..n).map(|j| t[i + j].clone()).collect()).collect();
        SeriesMatrix::from_rows(rows).expect("square")
    }

    /// Discriminant of `p`, computed as the determinant of the trace form.
    pub fn discriminant(&self) -> LaurentSeries {
        self.trace_gram().det().expect("square")
    }

    /// Whether `p` is separable over `k((z))`. A discriminant that vanishes
    /// on a truncated (non-exact) window cannot be decided and is reported
    /// as a precision error.
    pub fn is_separable(&self) -> Result<bool> {
        let d = self.discriminant();
        if !d.is_zero() {
            return Ok(true);
        }
        if d.is_exact() {
            Ok(false)
        } else {
            Err(Error::precision(format!(
                "discriminant vanishes modulo z^{}",
                d.precision()
            )))
        }
    }
}

impl fmt::Display for SpectralPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{}", self.n())?;
        for (i, a) in self.a.iter().enumerate() {
            let sign = if i % 2 == 0 { '-' } else { '+' };
            write!(f, " {sign} ({a})T^{}", self.n() - i - 1)?;
        }
        Ok(())
    }
}

/// Element `c₀ + c₁T + … + c_{n−1}T^(n−1)` of `V_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    c: Vec<LaurentSeries>,
}

impl AlgebraElement {
    pub fn new(c: Vec<LaurentSeries>) -> Self {
        AlgebraElement { c }
    }

    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            c: vec![LaurentSeries::zero(EXACT); n],
        }
    }

    /// A scalar series embedded as `s·1`.
    pub fn scalar(s: LaurentSeries, n: usize) -> Self {
        let mut e = Self::zero(n);
        e.c[0] = s;
        e
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(LaurentSeries::one(EXACT), n)
    }

    /// `T^i` for `i < n`.
    pub fn basis(i: usize, n: usize) -> Self {
        let mut e = Self::zero(n);
        e.c[i] = LaurentSeries::one(EXACT);
        e
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<LaurentSeries> {
        self.c
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(LaurentSeries::is_zero)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            c: self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect(),
        }
    }

    /// Multiplication by a scalar series.
    pub fn scale(&self, s: &LaurentSeries) -> AlgebraElement {
        AlgebraElement {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn order(&self) -> i64 {
        self.c.iter().map(LaurentSeries::order).min().unwrap_or(EXACT)
    }

    pub fn precision(&self) -> i64 {
        self.c.iter().map(LaurentSeries::precision).min().unwrap_or(EXACT)
    }

    pub fn truncate(&self, prec: i64) -> AlgebraElement {
        AlgebraElement {
            c: self.c.iter().map(|a| a.truncate(prec)).collect(),
        }
    }

    pub fn agrees_with(&self, other: &AlgebraElement) -> bool {
        self.c.len() == other.c.len() && self.c.iter().zip(&other.c).all(|(a, b)| a.agrees_with(b))
    }
}
