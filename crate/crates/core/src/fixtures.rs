//! Catalogued spectral data on the projective line.
//!
//! The basic family lives over `A = k[z⁻¹]`: `W = A·1 + A·z^{−a}T` inside
//! `V_p` with `p = T² − q(z)`, and `Ω = z^s·A`. Then `T·W ⊆ W·Ω` exactly
//! when `s ≥ a` and `deg q ≤ s + a`.

use crate::error::{Error, Result};
use crate::grassmann::{CoordinateAlgebra, GrassmannPoint, Vector, DEFAULT_WINDOW};
use crate::series::{rat, LaurentSeries, EXACT};
use crate::spectral::{AlgebraElement, SpectralPolynomial};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub p: SpectralPolynomial,
    pub w: GrassmannPoint,
    pub omega: GrassmannPoint,
    pub omega_inv: GrassmannPoint,
    /// Known answer to `T·W ⊆ W·Ω`, when there is one.
    pub expected: Option<bool>,
}

pub const CATALOGUE: &[&str] = &["p1-ramified-positive", "p1-trivial-negative", "p1-unramified"];

fn poly_in_z(q: &[i64]) -> LaurentSeries {
    LaurentSeries::from_ints(0, q, EXACT)
}

/// `Ω = z^s·A` together with its inverse `z^{−s}·A`.
pub fn twist(s: i64, window: (i64, i64)) -> Result<(GrassmannPoint, GrassmannPoint)> {
    let a = CoordinateAlgebra::affine_line;
    Ok((
        GrassmannPoint::scalar(a(), &[LaurentSeries::z_pow(s)], window)?,
        GrassmannPoint::scalar(a(), &[LaurentSeries::z_pow(-s)], window)?,
    ))
}

/// `p = T² − q(z)`, `W = A·1 + A·z^{−a}T`, `Ω = z^s A`.
pub fn line_family(a: i64, s: i64, q: &[i64], window: (i64, i64)) -> Result<Fixture> {
    let q_series = poly_in_z(q);
    let p = SpectralPolynomial::from_monic(vec![-&q_series, LaurentSeries::zero(EXACT)])?;
    let gens = [
        AlgebraElement::one(2),
        AlgebraElement::basis(1, 2).scale(&LaurentSeries::z_pow(-a)),
    ];
    let w = GrassmannPoint::in_spectral(&p, CoordinateAlgebra::affine_line(), &gens, window)?;
    let (omega, omega_inv) = twist(s, window)?;
    let deg_q = q_series.degree().unwrap_or(0);
    let coeffs: Vec<String> = q.iter().map(i64::to_string).collect();
    Ok(Fixture {
        name: format!("p1-family-a{a}-s{s}-q{}", coeffs.join("_")),
        p,
        w,
        omega,
        omega_inv,
        expected: Some(s >= a && deg_q <= s + a),
    })
}

/// A catalogued fixture by name, in the default window.
pub fn projective_line_fixture(name: &str) -> Result<Fixture> {
    fixture_in_window(name, DEFAULT_WINDOW)
}

pub fn fixture_in_window(name: &str, window: (i64, i64)) -> Result<Fixture> {
    let mut f = match name {
        "p1-ramified-positive" => line_family(1, 2, &[0, 1], window)?,
        "p1-trivial-negative" => line_family(1, 0, &[0, 1], window)?,
        "p1-unramified" => line_family(0, 0, &[1], window)?,
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    f.name = name.to_string();
    Ok(f)
}

/// Parameters `(a, s, q)` of the positive members used in tests.
pub const POSITIVE_FAMILY: &[(i64, i64, &[i64])] = &[
    (1, 2, &[0, 1]),
    (1, 2, &[0, 1, 0, 1]),
    (1, 1, &[0, 1, 1]),
    (2, 3, &[0, 1]),
    (2, 2, &[0, 1, 0, 0, 1]),
    (0, 1, &[1, 1]),
    (0, 0, &[1]),
    (1, 3, &[0, 2, 0, 0, -1]),
    (0, 2, &[0, 1, 1]),
    (2, 2, &[0, -1, 1]),
];

/// Parameters of members that fail containment for a known reason.
pub const NEGATIVE_FAMILY: &[(i64, i64, &[i64])] = &[
    (1, 0, &[0, 1]),
    (2, 1, &[0, 1]),
    (1, 1, &[0, 1, 1, 1]),
    (0, 0, &[1, 1]),
    (2, 2, &[0, 1, 0, 0, 0, 1]),
];

/// Adds `c·z^j·T^e` to generator `index` of `W`.
pub fn perturb(f: &Fixture, index: usize, j: i64, e: usize, c: i64) -> Result<Fixture> {
    let mut gens: Vec<Vector> = f.w.generators().to_vec();
    let slot = &mut gens[index][e];
    *slot = &*slot + &LaurentSeries::monomial(rat(c), j, EXACT);
    let w = GrassmannPoint::new(f.w.ambient().clone(), f.w.algebra().clone(), gens, f.w.window())?;
    Ok(Fixture {
        name: format!("{}+gen{index}:{c}z^{j}T^{e}", f.name),
        p: f.p.clone(),
        w,
        omega: f.omega.clone(),
        omega_inv: f.omega_inv.clone(),
        expected: None,
    })
}
