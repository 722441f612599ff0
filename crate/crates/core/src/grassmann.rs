//! Windowed points of the Sato Grassmannian of `k((z))^n` or `V_p`.
//!
//! A point is a finitely generated module over a coordinate algebra of
//! scalar series. Everything is computed inside an exponent window
//! `[low, high)`: the point's window basis is the reduced echelon basis of
//! `W ∩ z^low V⁺` modulo `z^high`, and every yes/no answer holds modulo the
//! window.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseRow};
use crate::series::{LaurentSeries, Rational, EXACT};
use crate::spectral::{AlgebraElement, SeriesMatrix, SpectralPolynomial};

pub const DEFAULT_WINDOW: (i64, i64) = (-8, 8);
pub const DEFAULT_CUTOFF: usize = 24;

pub type Vector = Vec<LaurentSeries>;

#[derive(Clone, Debug, PartialEq)]
pub enum Ambient {
    Rank(usize),
    Spectral(SpectralPolynomial),
}

impl Ambient {
    pub fn n(&self) -> usize {
        match self {
            Ambient::Rank(n) => *n,
            Ambient::Spectral(p) => p.n(),
        }
    }

    pub fn spectral(&self) -> Option<&SpectralPolynomial> {
        match self {
            Ambient::Spectral(p) => Some(p),
            Ambient::Rank(_) => None,
        }
    }
}

/// Coordinates a point is written in. In the dual frame of `V_p` a vector
/// `y` stands for `G⁻¹y`, with `G` the trace Gram matrix, so the trace
/// pairing becomes the plain residue pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    Standard,
    Dual,
}

impl Frame {
    fn flip(self) -> Frame {
        match self {
            Frame::Standard => Frame::Dual,
            Frame::Dual => Frame::Standard,
        }
    }
}

/// Unital algebra generated by scalar series; monomials are enumerated up
/// to total degree `cutoff`.
#[derive(Clone, Debug)]
pub struct CoordinateAlgebra {
    pub generators: Vec<LaurentSeries>,
    pub cutoff: usize,
}

impl CoordinateAlgebra {
    pub fn new(generators: Vec<LaurentSeries>) -> Self {
        CoordinateAlgebra {
            generators,
            cutoff: DEFAULT_CUTOFF,
        }
    }

    /// `k[z⁻¹]`, functions on the affine line away from the point at infinity.
    pub fn affine_line() -> Self {
        Self::new(vec![LaurentSeries::z_pow(-1)])
    }

    /// Just the constants: the module is the span of its generators.
    pub fn constants() -> Self {
        Self::new(Vec::new())
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }

    /// Monomials of total degree at most `cutoff`.
    pub fn monomials(&self, cutoff: usize) -> Vec<LaurentSeries> {
        let mut out = vec![LaurentSeries::one(EXACT)];
        let mut frontier: Vec<(usize, LaurentSeries)> = vec![(0, LaurentSeries::one(EXACT))];
        for _ in 0..cutoff {
            let mut next = Vec::new();
            for (start, m) in &frontier {
                for (k, g) in self.generators.iter().enumerate().skip(*start) {
                    let prod = m * g;
                    out.push(prod.clone());
                    next.push((k, prod));
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    fn union(&self, other: &CoordinateAlgebra) -> CoordinateAlgebra {
        let mut generators = self.generators.clone();
        for g in &other.generators {
            if !generators.iter().any(|h| h.agrees_with(g) && h.precision() == g.precision()) {
                generators.push(g.clone());
            }
        }
        CoordinateAlgebra {
            generators,
            cutoff: self.cutoff.max(other.cutoff),
        }
    }
}

/// Dimension count of a windowed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowReport {
    pub window: (i64, i64),
    /// `dim W ∩ V⁺` inside the window.
    pub dim_plus: i64,
    /// `dim V / (W + V⁺)` inside the window.
    pub codim: i64,
    pub index: i64,
}

#[derive(Clone, Debug)]
pub struct GrassmannPoint {
    ambient: Ambient,
    frame: Frame,
    algebra: CoordinateAlgebra,
    generators: Vec<Vector>,
    window: (i64, i64),
    echelon: Echelon,
}

/// Column of `z^e` in component `i`, relative to exponent `base`.
fn column(n: usize, base: i64, e: i64, i: usize) -> usize {
    (e - base) as usize * n + i
}

fn to_row(n: usize, base: i64, high: i64, v: &[LaurentSeries]) -> SparseRow {
    let mut row = SparseRow::new();
    for (i, c) in v.iter().enumerate() {
        for (e, x) in c.terms() {
            if e < high {
                row.insert(column(n, base, e, i), x.clone());
            }
        }
    }
    row
}

fn from_row(n: usize, base: i64, high: i64, row: &SparseRow) -> Vector {
    (0..n)
        .map(|i| {
            LaurentSeries::from_terms(
                row.iter()
                    .filter(|(c, _)| *c % n == i)
                    .map(|(c, x)| ((c / n) as i64 + base, x.clone())),
                high,
            )
        })
        .collect()
}

fn vector_order(v: &[LaurentSeries]) -> i64 {
    v.iter().map(LaurentSeries::order).min().unwrap_or(EXACT)
}

fn vector_precision(v: &[LaurentSeries]) -> i64 {
    v.iter().map(LaurentSeries::precision).min().unwrap_or(EXACT)
}

/// Echelon basis of `span(vectors) ∩ z^low V⁺` modulo `z^high`, in window
/// columns.
fn window_echelon(n: usize, vectors: &[Vector], window: (i64, i64)) -> Result<Echelon> {
    let (low, high) = window;
    let base = vectors.iter().map(|v| vector_order(v)).filter(|&o| o < high).min().unwrap_or(low).min(low);
    let mut ech = Echelon::new();
    for v in vectors {
        if vector_order(v) >= high {
            continue;
        }
        if vector_precision(v) < high {
            return Err(Error::precision(format!(
                "module element known to z^{} but the window reaches z^{high}",
                vector_precision(v)
            )));
        }
        ech.insert(to_row(n, base, high, v));
    }
    let offset = column(n, base, low, 0);
    Ok(Echelon::from_rows(ech.rows().filter(|(p, _)| *p >= offset).map(|(_, r)| {
        r.iter().map(|(c, x)| (c - offset, x.clone())).collect::<SparseRow>()
    })))
}

fn scale_vector(v: &[LaurentSeries], s: &LaurentSeries) -> Vector {
    v.iter().map(|c| c * s).collect()
}

impl GrassmannPoint {
    /// Builds the point and certifies its window basis: doubling the
    /// enumeration cutoff must not change it.
    pub fn new(
        ambient: Ambient,
        algebra: CoordinateAlgebra,
        generators: Vec<Vector>,
        window: (i64, i64),
    ) -> Result<Self> {
        Self::with_frame(ambient, Frame::Standard, algebra, generators, window)
    }

    pub fn with_frame(
        ambient: Ambient,
        frame: Frame,
        algebra: CoordinateAlgebra,
        generators: Vec<Vector>,
        window: (i64, i64),
    ) -> Result<Self> {
        let n = ambient.n();
        if window.0 >= window.1 {
            return Err(Error::Dimension(format!("empty window {window:?}")));
        }
        if let Some(bad) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::Dimension(format!(
                "generator has {} coordinates, ambient rank is {n}",
                bad.len()
            )));
        }
        let echelon = Self::enumerate(n, &algebra, &generators, window, algebra.cutoff)?;
        if !algebra.generators.is_empty() {
            let doubled = Self::enumerate(n, &algebra, &generators, window, 2 * algebra.cutoff)?;
            if doubled != echelon {
                return Err(Error::WindowUnstable(format!(
                    "window basis changes when the cutoff grows from {} to {}",
                    algebra.cutoff,
                    2 * algebra.cutoff
                )));
            }
        }
        Ok(GrassmannPoint {
            ambient,
            frame,
            algebra,
            generators,
            window,
            echelon,
        })
    }

    /// A point over `V_p` from algebra elements.
    pub fn in_spectral(
        p: &SpectralPolynomial,
        algebra: CoordinateAlgebra,
        generators: &[AlgebraElement],
        window: (i64, i64),
    ) -> Result<Self> {
        let gens = generators.iter().map(|g| g.coeffs().to_vec()).collect();
        Self::new(Ambient::Spectral(p.clone()), algebra, gens, window)
    }

    /// A module inside `k((z))`.
    pub fn scalar(algebra: CoordinateAlgebra, generators: &[LaurentSeries], window: (i64, i64)) -> Result<Self> {
        let gens = generators.iter().map(|g| vec![g.clone()]).collect();
        Self::new(Ambient::Rank(1), algebra, gens, window)
    }

    fn enumerate(
        n: usize,
        algebra: &CoordinateAlgebra,
        generators: &[Vector],
        window: (i64, i64),
        cutoff: usize,
    ) -> Result<Echelon> {
        let monomials = algebra.monomials(cutoff);
        let mut vectors = Vec::with_capacity(monomials.len() * generators.len());
        for m in &monomials {
            for g in generators {
                vectors.push(scale_vector(g, m));
            }
        }
        window_echelon(n, &vectors, window)
    }

    /// Module elements (finite combinations of monomial multiples of the
    /// generators) whose truncations modulo `z^high` are the window basis
    /// vectors, in the same order.
    pub fn lifts(&self) -> Result<Vec<Vector>> {
        let n = self.n();
        let (low, high) = self.window;
        let monomials = self.algebra.monomials(self.algebra.cutoff);
        let mut vectors = Vec::new();
        for m in &monomials {
            for g in &self.generators {
                let v = scale_vector(g, m);
                if vector_order(&v) < high {
                    vectors.push(v);
                }
            }
        }
        let base = vectors.iter().map(|v| vector_order(v)).min().unwrap_or(low).min(low);
        let tag0 = column(n, base, high, 0);
        let mut ech = Echelon::new();
        for (t, v) in vectors.iter().enumerate() {
            let mut row = to_row(n, base, high, v);
            row.insert(tag0 + t, Rational::from_integer(1.into()));
            ech.insert(row);
        }
        let offset = column(n, base, low, 0);
        let mut out = Vec::new();
        for (pivot, row) in ech.rows() {
            if pivot < offset || pivot >= tag0 {
                continue;
            }
            let mut lift: Vector = vec![LaurentSeries::zero(EXACT); n];
            for (c, x) in row.range(tag0..) {
                let term = scale_vector(&vectors[c - tag0], &LaurentSeries::constant(x.clone(), EXACT));
                for (acc, t) in lift.iter_mut().zip(term) {
                    *acc = &*acc + &t;
                }
            }
            out.push(lift);
        }
        Ok(out)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn algebra(&self) -> &CoordinateAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn n(&self) -> usize {
        self.ambient.n()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// The window basis as vectors known modulo `z^high`.
    pub fn basis(&self) -> Vec<Vector> {
        let (low, high) = self.window;
        self.echelon.rows().map(|(_, r)| from_row(self.n(), low, high, r)).collect()
    }

    /// Leading `(exponent, component)` of each window basis vector.
    pub fn pivots(&self) -> Vec<(i64, usize)> {
        let n = self.n();
        self.echelon
            .pivots()
            .map(|c| ((c / n) as i64 + self.window.0, c % n))
            .collect()
    }

    /// The same module in another window.
    pub fn rewindow(&self, window: (i64, i64)) -> Result<Self> {
        Self::with_frame(
            self.ambient.clone(),
            self.frame,
            self.algebra.clone(),
            self.generators.clone(),
            window,
        )
    }

    pub fn index(&self) -> WindowReport {
        let low = self.window.0;
        let n = self.n() as i64;
        let pivots = self.pivots();
        let dim_plus = pivots.iter().filter(|(e, _)| *e >= 0).count() as i64;
        let below = pivots.iter().filter(|(e, _)| *e < 0).count() as i64;
        let codim = n * (-low).max(0) - below;
        WindowReport {
            window: self.window,
            dim_plus,
            codim,
            index: dim_plus - codim,
        }
    }

    /// Membership modulo `z^min(high, precision of v)`.
    pub fn contains(&self, v: &[LaurentSeries]) -> Result<bool> {
        let (low, high) = self.window;
        if v.len() != self.n() {
            return Err(Error::Dimension(format!("vector has {} coordinates", v.len())));
        }
        let top = vector_precision(v).min(high);
        if vector_order(v) < low {
            return Err(Error::precision(format!(
                "vector has order {} below the window {low}",
                vector_order(v)
            )));
        }
        if top <= low {
            return Err(Error::precision("vector is not known inside the window"));
        }
        let mut row = to_row(self.n(), low, high, v);
        self.echelon.reduce(&mut row);
        let limit = column(self.n(), low, top, 0);
        Ok(row.keys().all(|&c| c >= limit))
    }

    /// Scalar multiple `g·W`.
    pub fn scale(&self, g: &LaurentSeries) -> Result<Self> {
        let gens = self.generators.iter().map(|v| scale_vector(v, g)).collect();
        Self::with_frame(self.ambient.clone(), self.frame, self.algebra.clone(), gens, self.window)
    }

    /// `a·W` for an element `a` of `V_p`.
    pub fn mul_element(&self, a: &AlgebraElement) -> Result<Self> {
        let p = self.require_spectral()?;
        let m = p.multiplication_matrix(a)?;
        let m = match self.frame {
            Frame::Standard => m,
            Frame::Dual => transpose(&m),
        };
        let gens = self
            .generators
            .iter()
            .map(|v| m.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Self::with_frame(self.ambient.clone(), self.frame, self.algebra.clone(), gens, self.window)
    }

    /// `T·W`.
    pub fn apply_t(&self) -> Result<Self> {
        let p = self.require_spectral()?;
        self.mul_element(&p.t_element())
    }

    fn require_spectral(&self) -> Result<&SpectralPolynomial> {
        self.ambient
            .spectral()
            .ok_or_else(|| Error::Dimension("operation needs a spectral ambient".into()))
    }

    /// Converts a standard-coordinate vector into this point's frame.
    pub fn to_frame(&self, v: &[LaurentSeries]) -> Result<Vector> {
        match (self.frame, &self.ambient) {
            (Frame::Dual, Ambient::Spectral(p)) => p.trace_gram().apply(v),
            _ => Ok(v.to_vec()),
        }
    }

    /// Converts a vector in this point's frame into standard coordinates.
    pub fn from_frame(&self, v: &[LaurentSeries]) -> Result<Vector> {
        match (self.frame, &self.ambient) {
            (Frame::Dual, Ambient::Spectral(p)) => {
                let g = p.trace_gram().inverse(p.working_precision())?;
                g.apply(v)
            }
            _ => Ok(v.to_vec()),
        }
    }

    /// Complement under the residue of the trace pairing, in the window
    /// `[−high, −low)` and in the opposite frame. Its algebra is the
    /// constants: the complement is handed over as a windowed subspace.
    pub fn orthogonal_complement(&self) -> Result<Self> {
        let (low, high) = self.window;
        let n = self.n();
        let size = (high - low) as usize * n;
        // y-column of (a, i) pairs with x-column of (−1 − a, i).
        let constraints: Vec<SparseRow> = self
            .echelon
            .rows()
            .map(|(_, r)| {
                r.iter()
                    .map(|(c, x)| {
                        let (e, i) = ((c / n) as i64 + low, c % n);
                        (column(n, -high, -1 - e, i), x.clone())
                    })
                    .collect()
            })
            .collect();
        let columns: Vec<usize> = (0..size).collect();
        let gens = linalg::nullspace(&constraints, &columns)
            .iter()
            .map(|r| from_row(n, -high, -low, r))
            .collect();
        let frame = match self.ambient {
            Ambient::Spectral(_) => self.frame.flip(),
            Ambient::Rank(_) => self.frame,
        };
        Self::with_frame(self.ambient.clone(), frame, CoordinateAlgebra::constants(), gens, (-high, -low))
    }

    /// Whether two points have the same window basis in the same frame.
    pub fn same_window_basis(&self, other: &GrassmannPoint) -> bool {
        self.window == other.window && self.frame == other.frame && self.echelon == other.echelon
    }
}

fn transpose(m: &SeriesMatrix) -> SeriesMatrix {
    let rows = m.to_rows();
    let cols: Vec<Vector> = rows;
    SeriesMatrix::from_columns(&cols).expect("square matrix")
}

/// `U·W` for a scalar module `U ⊂ k((z))`, over the algebra generated by
/// both coordinate algebras. The result keeps `W`'s window.
pub fn module_product(u: &GrassmannPoint, w: &GrassmannPoint) -> Result<GrassmannPoint> {
    if u.n() != 1 {
        return Err(Error::Dimension("the left factor must be a module in k((z))".into()));
    }
    let mut gens = Vec::new();
    for a in u.generators() {
        for b in w.generators() {
            gens.push(scale_vector(b, &a[0]));
        }
    }
    GrassmannPoint::with_frame(
        w.ambient.clone(),
        w.frame,
        u.algebra.union(&w.algebra),
        gens,
        w.window,
    )
}

/// Whether every generator of `a` maps every window basis vector of `w`
/// back into `w`, modulo the window. Products falling below the window are
/// not checked.
pub fn stabilizer_check(a: &CoordinateAlgebra, w: &GrassmannPoint) -> bool {
    let low = w.window.0;
    for g in &a.generators {
        for b in w.basis() {
            let prod = scale_vector(&b, g);
            if vector_order(&prod) < low || vector_precision(&prod) <= low {
                continue;
            }
            if !w.contains(&prod).unwrap_or(false) {
                return false;
            }
        }
    }
    true
}

/// `Res(a·b)` without forming the product.
pub fn residue_of_product(a: &LaurentSeries, b: &LaurentSeries) -> Result<Rational> {
    if a.is_zero() && a.is_exact() || b.is_zero() && b.is_exact() {
        return Ok(Rational::zero());
    }
    let bound = |x: &LaurentSeries, y: &LaurentSeries| {
        if y.is_exact() { EXACT } else { x.order().saturating_add(y.precision()) }
    };
    let prec = bound(a, b).min(bound(b, a));
    if prec <= -1 {
        return Err(Error::precision(format!(
            "residue needs the product to z^-1, it is known to z^{prec}"
        )));
    }
    let mut acc = Rational::zero();
    for (e, x) in a.terms() {
        if let Ok(y) = b.coeff(-1 - e) {
            if !y.is_zero() {
                acc += x * y;
            }
        }
    }
    Ok(acc)
}

/// `Σ Res(y_i·x_i)`, the pairing between dual and standard coordinates.
pub fn residue_pairing(y: &[LaurentSeries], x: &[LaurentSeries]) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (a, b) in y.iter().zip(x) {
        acc += residue_of_product(a, b)?;
    }
    Ok(acc)
}
