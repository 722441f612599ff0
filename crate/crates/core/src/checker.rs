//! Deciding whether a windowed point carries a Higgs field twisted by `Ω`.
//!
//! Two independent routes: membership `T·W ⊆ W·Ω` by echelon reduction,
//! and orthogonality `T·W^⊥ ⊥ Ω⁻¹·W` under the residue of the trace form.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grassmann::{self, module_product, Frame, GrassmannPoint, Vector, DEFAULT_WINDOW};
use crate::ramification::decompose;
use crate::series::{LaurentSeries, Rational};
use crate::spectral::{matrix_char_coefficients, SeriesMatrix, SpectralPolynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckerConfig {
    /// Exponent `γ` of the normalizing factor `z^{−γ}`.
    pub gamma: i64,
    pub window: (i64, i64),
    /// Working precision for inverses and expansions.
    pub precision: i64,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            gamma: 0,
            window: DEFAULT_WINDOW,
            precision: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub u: usize,
    pub f: usize,
    pub v: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub contained: bool,
    pub window: (i64, i64),
    pub residuals: Vec<Residual>,
    pub consistent: bool,
}

impl CheckReport {
    pub fn nonzero_residuals(&self) -> usize {
        self.residuals.iter().filter(|r| !r.value.is_zero()).count()
    }
}

fn require_spectral(w: &GrassmannPoint) -> Result<&SpectralPolynomial> {
    w.ambient()
        .spectral()
        .ok_or_else(|| Error::Dimension("W must live in V_p".into()))
}

/// `T·W ⊆ W·Ω`, tested on every window basis vector of `W`.
pub fn check_containment(w: &GrassmannPoint, omega: &GrassmannPoint, cfg: &CheckerConfig) -> Result<CheckReport> {
    let w = w.rewindow(cfg.window)?;
    let p = require_spectral(&w)?;
    let product = module_product(&omega.rewindow(cfg.window)?, &w)?;
    let t = p.multiplication_matrix(&p.t_element())?;
    let mut contained = true;
    for b in w.basis() {
        if !product.contains(&t.apply(&b)?)? {
            contained = false;
            break;
        }
    }
    Ok(CheckReport {
        contained,
        window: cfg.window,
        residuals: Vec::new(),
        consistent: true,
    })
}

/// The ingredients shared by both residual forms.
struct Pairing {
    /// Window basis of `T·W^⊥`, dual coordinates.
    u: Vec<Vector>,
    f: Vec<LaurentSeries>,
    /// Exact lifts of the window basis of `W`.
    v: Vec<Vector>,
    twist: LaurentSeries,
}

fn pairing_data(
    w: &GrassmannPoint,
    omega_inv: &GrassmannPoint,
    cfg: &CheckerConfig,
) -> Result<Pairing> {
    let (low, high) = cfg.window;
    let w = w.rewindow(cfg.window)?;
    if w.frame() != Frame::Standard {
        return Err(Error::Dimension("W must be given in standard coordinates".into()));
    }
    require_spectral(&w)?;
    let omega_inv = omega_inv.rewindow(cfg.window)?;
    // Deep enough that the truncation of W^⊥ cannot reach a residue.
    let depth = cfg.gamma - 2 * low;
    let perp = w.rewindow((-depth, high))?.orthogonal_complement()?;
    let u = perp.apply_t()?.basis();
    let f = omega_inv.lifts()?.into_iter().map(|mut x| x.remove(0)).collect();
    Ok(Pairing {
        u,
        f,
        v: w.lifts()?,
        twist: LaurentSeries::z_pow(-cfg.gamma),
    })
}

/// `T₂(u, f·v·z^{−γ})` for `u` in the window basis of `T·W^⊥`, `f` in
/// that of `Ω⁻¹` and `v` in that of `W`.
pub fn residual_matrix(w: &GrassmannPoint, omega_inv: &GrassmannPoint, cfg: &CheckerConfig) -> Result<CheckReport> {
    let data = pairing_data(w, omega_inv, cfg)?;
    let mut residuals = Vec::new();
    for (fi, f) in data.f.iter().enumerate() {
        let scale = f * &data.twist;
        for (vi, v) in data.v.iter().enumerate() {
            let fv: Vector = v.iter().map(|c| c * &scale).collect();
            for (ui, u) in data.u.iter().enumerate() {
                residuals.push(Residual {
                    u: ui,
                    f: fi,
                    v: vi,
                    value: grassmann::residue_pairing(u, &fv)?,
                });
            }
        }
    }
    residuals.sort_by_key(|r| (r.u, r.f, r.v));
    let contained = residuals.iter().all(|r| r.value.is_zero());
    Ok(CheckReport {
        contained,
        window: cfg.window,
        residuals,
        consistent: true,
    })
}

/// Residuals through the power-trace expansion
/// `Σ_k Σ_{i+j=k} Res(Ψ*(i)·f·Ψ(j)·Tr(T^{k−1})·z^{−γ})` with `Ψ* = u`
/// in standard coordinates and `Ψ = T·v`; `consistent` records whether
/// every entry equals the trace-of-product value.
pub fn totally_ramified_residuals(
    w: &GrassmannPoint,
    omega_inv: &GrassmannPoint,
    cfg: &CheckerConfig,
) -> Result<CheckReport> {
    let p = require_spectral(w)?.clone().with_working_precision(cfg.precision);
    let partition = decompose(&p)?.partition();
    if partition.len() != 1 {
        return Err(Error::NotTotallyRamified(partition));
    }
    let n = p.n();
    let data = pairing_data(w, omega_inv, cfg)?;
    let gram_inv = p.trace_gram().inverse(cfg.precision)?;
    let traces: Vec<LaurentSeries> = (0..2 * n as i64 - 1)
        .map(|k| p.power_trace(k - 1))
        .collect::<Result<_>>()?;
    let t = p.multiplication_matrix(&p.t_element())?;
    let standard_u: Vec<Vector> = data.u.iter().map(|u| gram_inv.apply(u)).collect::<Result<_>>()?;
    let psi: Vec<Vector> = data.v.iter().map(|v| t.apply(v)).collect::<Result<_>>()?;
    let reference = residual_matrix(w, omega_inv, cfg)?;

    let mut residuals = Vec::new();
    for (fi, f) in data.f.iter().enumerate() {
        let scale = f * &data.twist;
        for (vi, psi_v) in psi.iter().enumerate() {
            // Σ_j Ψ(j)·f·Tr(T^{i+j−1}) for each i
            let weights: Vec<LaurentSeries> = (0..n)
                .map(|i| {
                    (0..n).fold(LaurentSeries::zero(crate::series::EXACT), |acc, j| {
                        &acc + &(&(&psi_v[j] * &scale) * &traces[i + j])
                    })
                })
                .collect();
            for (ui, u) in standard_u.iter().enumerate() {
                residuals.push(Residual {
                    u: ui,
                    f: fi,
                    v: vi,
                    value: grassmann::residue_pairing(u, &weights)?,
                });
            }
        }
    }
    residuals.sort_by_key(|r| (r.u, r.f, r.v));
    let consistent = residuals == reference.residuals;
    Ok(CheckReport {
        contained: residuals.iter().all(|r| r.value.is_zero()),
        window: cfg.window,
        residuals,
        consistent,
    })
}

/// Both routes; `consistent` records whether their verdicts agree.
pub fn check(
    w: &GrassmannPoint,
    omega: &GrassmannPoint,
    omega_inv: &GrassmannPoint,
    cfg: &CheckerConfig,
) -> Result<CheckReport> {
    let membership = check_containment(w, omega, cfg)?;
    let residual = residual_matrix(w, omega_inv, cfg)?;
    Ok(CheckReport {
        contained: membership.contained,
        window: cfg.window,
        consistent: membership.contained == residual.contained,
        residuals: residual.residuals,
    })
}

/// Change of basis `P` with `P·A·P⁻¹` the companion matrix of the
/// characteristic polynomial of `A`.
pub fn cyclic_trivialization(a: &SeriesMatrix, working: i64) -> Result<(SeriesMatrix, SpectralPolynomial)> {
    let p = matrix_char_coefficients(a)?.with_working_precision(working);
    if !p.is_separable()? {
        return Err(Error::NotSeparable);
    }
    let n = a.nrows();
    let companion = p.companion_matrix();
    let mut best: Option<(i64, SeriesMatrix)> = None;
    for v in candidate_vectors(n) {
        let mut cols = vec![v];
        for _ in 1..n {
            let next = a.apply(cols.last().expect("nonempty"))?;
            cols.push(next);
        }
        let krylov = SeriesMatrix::from_columns(&cols)?;
        let det = krylov.det()?;
        if det.is_zero() {
            continue;
        }
        let order = det.order();
        if best.as_ref().is_none_or(|(o, _)| order < *o) {
            best = Some((order, krylov));
        }
        if order == 0 {
            break;
        }
    }
    let (_, krylov) = best.ok_or(Error::NoCyclicVector)?;
    let change = krylov.inverse(working)?;
    let conj = change.mul(a)?.mul(&krylov)?;
    if !conj.agrees_with(&companion) {
        return Err(Error::NoCyclicVector);
    }
    Ok((change, p))
}

/// Standard basis vectors, then sums and differences of pairs, then
/// the all-ones vector.
fn candidate_vectors(n: usize) -> Vec<Vector> {
    let unit = |i: usize, c: i64| -> Vec<(usize, i64)> { vec![(i, c)] };
    let mut specs: Vec<Vec<(usize, i64)>> = (0..n).map(|i| unit(i, 1)).collect();
    for i in 0..n {
        for j in i + 1..n {
            specs.push(vec![(i, 1), (j, 1)]);
            specs.push(vec![(i, 1), (j, -1)]);
            specs.push(vec![(i, 1), (j, 2)]);
        }
    }
    specs.push((0..n).map(|i| (i, 1)).collect());
    specs.push((0..n).map(|i| (i, i as i64 + 1)).collect());
    specs
        .into_iter()
        .map(|spec| {
            let mut v = vec![LaurentSeries::zero(crate::series::EXACT); n];
            for (i, c) in spec {
                v[i] = LaurentSeries::constant(crate::series::rat(c), crate::series::EXACT);
            }
            v
        })
        .collect()
}
