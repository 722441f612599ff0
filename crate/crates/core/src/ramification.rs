//! Splitting `k[[z]][T]/p` into totally ramified pieces
//! `k[[z]][T_i]/(T_i^{n_i} − z·u_i(T_i))`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::poly::{self, SeriesPoly};
use crate::series::{rat, solve_implicit, ImplicitRelation, LaurentSeries, Rational, EXACT};
use crate::spectral::{AlgebraElement, SpectralPolynomial};

/// A monic factor of `p` over `k[[z]]` with a single residual root.
#[derive(Clone, Debug)]
pub struct Factor {
    pub shift: Rational,
    /// Coefficients low degree first; the last one is exactly 1.
    pub poly: SeriesPoly,
}

impl Factor {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// `q(T + c)`.
    pub fn shifted(&self) -> SeriesPoly {
        poly::s_taylor_shift(&self.poly, &self.shift)
    }
}

#[derive(Clone, Debug)]
pub struct RamifiedComponent {
    pub n: usize,
    pub shift: Rational,
    /// Unit with `z = T^n · u^{-1}`.
    pub u: LaurentSeries,
    pub z_of_t: LaurentSeries,
    /// `T − c` on this component, written in the local variable.
    pub root_param: LaurentSeries,
    pub factor: SeriesPoly,
}

impl RamifiedComponent {
    /// `q(c + root_param)` with the coefficients pulled back; zero to
    /// precision for a correct component.
    pub fn root_residual(&self) -> Result<LaurentSeries> {
        let x = &LaurentSeries::constant(self.shift.clone(), EXACT) + &self.root_param;
        let mut acc = LaurentSeries::zero(EXACT);
        for c in self.factor.iter().rev() {
            acc = &(&acc * &x) + &pull_back_scalar(c, self)?;
        }
        Ok(acc)
    }

    /// Image of an element of `V_p` in `k((T_i))`.
    pub fn image(&self, x: &AlgebraElement) -> Result<LaurentSeries> {
        let t = &LaurentSeries::constant(self.shift.clone(), EXACT) + &self.root_param;
        let mut acc = LaurentSeries::zero(EXACT);
        for c in x.coeffs().iter().rev() {
            acc = &(&acc * &t) + &pull_back_scalar(c, self)?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub poly: SpectralPolynomial,
    pub components: Vec<RamifiedComponent>,
}

impl Decomposition {
    pub fn partition(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.n).collect()
    }

    pub fn is_totally_ramified(&self) -> bool {
        self.components.len() == 1
    }
}

fn working_precision(p: &SpectralPolynomial) -> i64 {
    p.precision().min(p.working_precision())
}

/// Factors `p` into monic pieces with a single residual root and a single
/// Newton-polygon slope each.
pub fn hensel_split(p: &SpectralPolynomial) -> Result<Vec<Factor>> {
    if !p.is_separable()? {
        return Err(Error::NotSeparable);
    }
    let target = working_precision(p);
    // lifting loses at most ord(disc) digits; exact input can pay for them
    let guard = p.discriminant().order().max(0);
    let prec = p.precision().min(target + guard);
    let (roots, rest) = poly::q_rational_roots(&p.residual());
    if rest.len() > 1 {
        return Err(Error::ResidualFieldExtensionRequired(format!(
            "irreducible residual factor of degree {}",
            rest.len() - 1
        )));
    }
    let mut f: SeriesPoly = p.monic_coefficients().iter().map(|c| c.truncate(prec)).collect();
    f.push(LaurentSeries::one(EXACT));

    let mut clusters = Vec::new();
    let mut residual = p.residual();
    for (i, (c, m)) in roots.iter().enumerate() {
        if i + 1 == roots.len() {
            clusters.push((c.clone(), f.clone()));
            break;
        }
        let g0 = poly::q_linear_power(c, *m);
        let (h0, _) = poly::q_divrem(&residual, &g0);
        let (g, h) = hensel_lift(&f, &g0, &h0, prec)?;
        clusters.push((c.clone(), g));
        f = h;
        residual = h0;
    }

    let mut out = Vec::new();
    for (c, q) in clusters {
        let shifted = poly::s_taylor_shift(&q, &c);
        for piece in slope_split(&shifted, prec)? {
            let back = poly::s_taylor_shift(&piece, &-c.clone());
            out.push(Factor {
                shift: c.clone(),
                poly: monic(back.iter().map(|x| x.truncate(target)).collect()),
            });
        }
    }
    Ok(out)
}

fn monic(mut p: SeriesPoly) -> SeriesPoly {
    if let Some(last) = p.last_mut() {
        *last = LaurentSeries::one(EXACT);
    }
    p
}

fn rem(a: &[LaurentSeries], b: &[LaurentSeries], prec: i64) -> SeriesPoly {
    poly::s_truncate(&poly::s_divrem(a, b).1, prec)
}

/// Quadratic lifting of `f ≡ g0·h0 mod z` with coprime monic residual
/// factors.
fn hensel_lift(f: &[LaurentSeries], g0: &[Rational], h0: &[Rational], prec: i64) -> Result<(SeriesPoly, SeriesPoly)> {
    let (one, s0, t0) = poly::q_ext_gcd(g0, h0);
    if one != vec![Rational::one()] {
        return Err(Error::NotSeparable);
    }
    let (mut g, mut h) = (monic(poly::lift(g0)), monic(poly::lift(h0)));
    let (mut s, mut t) = (poly::lift(&s0), poly::lift(&t0));
    let mut known = 1i64;
    while known < prec {
        let e = poly::s_truncate(&poly::s_sub(f, &poly::s_mul(&g, &h)), prec);
        let dh = rem(&poly::s_mul(&s, &e), &h, prec);
        let dg = rem(&poly::s_mul(&t, &e), &g, prec);
        g = monic(poly::s_truncate(&poly::s_add(&g, &dg), prec));
        h = monic(poly::s_truncate(&poly::s_add(&h, &dh), prec));
        let mut b = poly::s_add(&poly::s_mul(&s, &g), &poly::s_mul(&t, &h));
        b[0] = &b[0] - &LaurentSeries::one(EXACT);
        let b = poly::s_truncate(&b, prec);
        s = poly::s_sub(&s, &rem(&poly::s_mul(&s, &b), &h, prec));
        t = poly::s_sub(&t, &rem(&poly::s_mul(&t, &b), &g, prec));
        known *= 2;
    }
    let check = poly::s_sub(f, &poly::s_mul(&g, &h));
    if !check.iter().all(LaurentSeries::is_zero) {
        return Err(Error::NoConvergence("Hensel lifting did not converge".into()));
    }
    Ok((g, h))
}

/// Valuations of the coefficients below the leading one; a coefficient
/// that vanishes to its precision counts with valuation equal to it.
fn valuations(q: &[LaurentSeries], prec: i64) -> Vec<i64> {
    q.iter().map(|c| c.order().min(prec)).collect()
}

/// Vertices of the lower convex hull of `(i, v_i)`.
fn lower_hull(v: &[i64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..v.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the segment a..i
            let lhs = (v[b] - v[a]) * (i - a) as i64;
            let rhs = (v[i] - v[a]) * (b - a) as i64;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// `c(z) ↦ c(s^b)·s^offset`.
fn stretch(c: &LaurentSeries, b: i64, offset: i64) -> LaurentSeries {
    let prec = if c.is_exact() { EXACT } else { b * c.precision() + offset };
    LaurentSeries::from_terms(c.terms().map(|(e, x)| (b * e + offset, x.clone())), prec)
}

/// Splits a monic `q ≡ T^m mod z` along the slopes of its Newton polygon.
fn slope_split(q: &[LaurentSeries], prec: i64) -> Result<Vec<SeriesPoly>> {
    let m = q.len() - 1;
    let q: SeriesPoly = q.iter().map(|c| c.truncate(prec)).collect();
    let v = valuations(&q, prec);
    let hull = lower_hull(&v);
    if hull.len() <= 2 {
        return Ok(vec![q]);
    }
    let (i_left, i0, i_right) = (hull[0], hull[1], hull[2]);
    let left = Rational::new((v[i_left] - v[i0]).into(), ((i0 - i_left) as i64).into());
    let right = Rational::new((v[i0] - v[i_right]).into(), ((i_right - i0) as i64).into());
    let candidate = right.floor() + Rational::one();
    let mu = if candidate < left {
        candidate
    } else {
        (&left + &right) / rat(2)
    };
    let (a, b) = (
        i64::try_from(mu.numer()).expect("slope numerator fits"),
        i64::try_from(mu.denom()).expect("slope denominator fits"),
    );
    let w0 = b * v[i0] + a * i0 as i64;
    let big: SeriesPoly = q.iter().enumerate().map(|(i, c)| stretch(c, b, a * i as i64 - w0)).collect();
    let sprec = b * prec - w0;
    let unit = big[i0].coeff(0)?;
    if unit.is_zero() {
        return Err(Error::precision("Newton polygon vertex is not known"));
    }

    // Linear lifting of big = G·H with G ≡ S^i0 and H ≡ unit mod s.
    let mut g: SeriesPoly = (0..=i0)
        .map(|i| if i == i0 { LaurentSeries::one(EXACT) } else { LaurentSeries::zero(EXACT) })
        .collect();
    let mut h: SeriesPoly = vec![LaurentSeries::constant(unit.clone(), EXACT)];
    h.resize(m - i0 + 1, LaurentSeries::zero(EXACT));
    let inv = unit.recip();
    for _ in 0..=sprec + 1 {
        let e = poly::s_truncate(&poly::s_sub(&big, &poly::s_mul(&g, &h)), sprec);
        if e.iter().all(LaurentSeries::is_zero) {
            break;
        }
        for (i, ei) in e.iter().enumerate() {
            if i < i0 {
                g[i] = (&g[i] + &ei.scale(&inv)).truncate(sprec);
            } else if i - i0 < h.len() {
                h[i - i0] = (&h[i - i0] + ei).truncate(sprec);
            }
        }
    }

    // Back to z: coefficient j of g(T) is G_j(s)·s^{a(i0−j)}.
    let mut gz = Vec::with_capacity(i0 + 1);
    for (j, gj) in g.iter().enumerate() {
        let off = a * (i0 - j) as i64;
        let shifted = gj.shift(off);
        let mut terms = Vec::new();
        for (e, x) in shifted.terms() {
            if e.rem_euclid(b) != 0 {
                return Err(Error::precision("slope factor is not defined over k[[z]]"));
            }
            terms.push((e / b, x.clone()));
        }
        let zp = if shifted.is_exact() { EXACT } else { Integer::div_floor(&shifted.precision(), &b) };
        gz.push(LaurentSeries::from_terms(terms, zp.min(prec)));
    }
    let gz = monic(gz);
    let (hz, _) = poly::s_divrem(&q, &gz);
    let mut out = slope_split(&gz, poly::s_precision(&gz[..i0]).min(prec))?;
    out.extend(slope_split(&hz, poly::s_precision(&hz).min(prec))?);
    Ok(out)
}

/// Normal form of a factor with a single residual root and slope `1/n`.
pub fn eisenstein_normalize(q: &Factor) -> Result<RamifiedComponent> {
    let n = q.degree();
    let shifted = q.shifted();
    if n == 1 {
        let root = -&shifted[0];
        if root.order() < 1 {
            return Err(Error::NotEisenstein("residual root does not match the shift".into()));
        }
        return Ok(RamifiedComponent {
            n,
            shift: q.shift.clone(),
            u: LaurentSeries::one(EXACT),
            z_of_t: LaurentSeries::z_pow(1),
            root_param: root,
            factor: q.poly.clone(),
        });
    }
    let constant = &shifted[0];
    if constant.order() != 1 {
        return Err(Error::NotEisenstein(format!(
            "shifted constant term has valuation {}",
            constant.order()
        )));
    }
    if shifted[1..n].iter().any(|c| c.order() < 1) {
        return Err(Error::NotEisenstein("factor is not residually a power of T".into()));
    }
    let prec = poly::s_precision(&shifted);
    let zprec = prec.min(EXACT / 4);
    let target = n as i64 * zprec;
    // Σ_j r_j(T) z^j with r_j(T) = Σ_i β_{i,j} T^i.
    let relation: Vec<LaurentSeries> = (0..zprec)
        .map(|j| {
            LaurentSeries::from_terms(
                shifted.iter().enumerate().map(|(i, c)| (i as i64, c.coeff_or_zero(j))),
                EXACT,
            )
        })
        .collect();
    let z_of_t = solve_implicit(&ImplicitRelation::new(relation), &LaurentSeries::zero(EXACT), target)?;
    let u = z_of_t.shift(-(n as i64)).invert()?;
    Ok(RamifiedComponent {
        n,
        shift: q.shift.clone(),
        u,
        z_of_t,
        root_param: LaurentSeries::z_pow(1),
        factor: q.poly.clone(),
    })
}

/// Components sorted by ramification index, largest first.
pub fn decompose(p: &SpectralPolynomial) -> Result<Decomposition> {
    let mut components = hensel_split(p)?
        .iter()
        .map(eisenstein_normalize)
        .collect::<Result<Vec<_>>>()?;
    components.sort_by_key(|c| std::cmp::Reverse(c.n));
    Ok(Decomposition { poly: p.clone(), components })
}

/// `f(z(T))` for a scalar Laurent series `f`.
pub fn pull_back_scalar(f: &LaurentSeries, comp: &RamifiedComponent) -> Result<LaurentSeries> {
    let n = comp.n as i64;
    if f.is_zero() {
        let prec = if f.is_exact() { EXACT } else { n * f.precision() };
        return Ok(LaurentSeries::zero(prec));
    }
    let o = f.order();
    let regular = f.shift(-o).compose(&comp.z_of_t)?;
    let zpow = comp.z_of_t.pow(o)?;
    Ok(&regular * &zpow)
}

/// The element chosen for index `m`, with its certificate.
#[derive(Clone, Debug)]
pub struct VmChoice {
    pub element: AlgebraElement,
    /// Valuation on each component.
    pub exponents: Vec<i64>,
    /// `dim V⁺/vV⁺` measured by linear algebra.
    pub dimension: i64,
    /// Valuations prescribed by the closed formula, when it applies.
    pub formula_exponents: Option<Vec<i64>>,
}

impl VmChoice {
    pub fn formula_dimension(&self) -> Option<i64> {
        self.formula_exponents.as_ref().map(|e| e.iter().sum())
    }

    pub fn formula_matches(&self) -> Option<bool> {
        self.formula_dimension().map(|d| d == self.dimension)
    }
}

fn balanced(m: i64, r: usize) -> Vec<i64> {
    let r = r as i64;
    let (base, extra) = (Integer::div_floor(&m, &r), m.rem_euclid(r));
    (0..r).map(|j| base + i64::from(j < extra)).collect()
}

/// Valuation vector of the closed-form `v_m`; `None` when the cover is
/// unramified (`n = r`).
pub fn formula_exponents(m: i64, partition: &[usize]) -> Option<Vec<i64>> {
    let r = partition.len() as i64;
    let n: i64 = partition.iter().map(|&x| x as i64).sum();
    if n == r {
        return None;
    }
    if 2 * m <= r - n {
        let q = Integer::div_floor(&-m, &(n - r));
        let p = (-m).rem_euclid(n - r);
        let (s, t) = (p / r, p % r);
        Some(
            partition
                .iter()
                .enumerate()
                .map(|(j, &nj)| q * (1 - nj as i64) + s + i64::from((j as i64) < t))
                .collect(),
        )
    } else {
        let inner = formula_exponents(r - n - m, partition)?;
        Some(partition.iter().zip(inner).map(|(&nj, e)| 1 - nj as i64 - e).collect())
    }
}

/// An element of `V_p` with `dim V⁺/vV⁺ = m`, with balanced valuations
/// across the components (earlier components take the remainder).
pub fn choose_vm(m: i64, dec: &Decomposition) -> Result<VmChoice> {
    let p = &dec.poly;
    let n = p.n();
    let r = dec.components.len();
    let exponents = balanced(m, r);
    let t = p.t_element();
    let mut v = AlgebraElement::zero(n);
    for (j, comp) in dec.components.iter().enumerate() {
        let mut e_j = AlgebraElement::one(n);
        for (i, other) in dec.components.iter().enumerate() {
            if i != j {
                e_j = p.mul_mod(&e_j, &p.reduce(other.factor.clone()))?;
            }
        }
        let nu = comp.image(&e_j)?.order();
        let need = exponents[j] - nu;
        let (k, l) = if comp.n == 1 {
            (0, need)
        } else {
            let l = Integer::div_floor(&need, &(comp.n as i64));
            (need - l * comp.n as i64, l)
        };
        let pi = t.sub(&AlgebraElement::scalar(LaurentSeries::constant(comp.shift.clone(), EXACT), n));
        let mut term = e_j.scale(&LaurentSeries::z_pow(l));
        for _ in 0..k {
            term = p.mul_mod(&term, &pi)?;
        }
        v = v.add(&term);
    }
    let dimension = quotient_dimension(p, &v).ok_or(Error::NoSuchElement(m))?;
    if dimension != m {
        return Err(Error::NoSuchElement(m));
    }
    Ok(VmChoice {
        element: v,
        exponents,
        dimension,
        formula_exponents: formula_exponents(m, &dec.partition()),
    })
}

/// `dim_k V⁺/vV⁺ − dim_k V⁺/z^q V⁺` counted as the cokernel of
/// multiplication by `z^q v` on `V⁺/z^K`; `None` if the truncation is too
/// coarse to decide.
pub fn quotient_dimension(p: &SpectralPolynomial, v: &AlgebraElement) -> Option<i64> {
    let n = p.n();
    let mv = p.multiplication_matrix(v).ok()?;
    let q = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| mv.get(i, j).order())
        .min()?
        .min(0)
        .abs();
    let prec = mv.precision();
    let det = mv.det().ok()?;
    if det.is_zero() {
        return None;
    }
    let d = det.order() + q * n as i64;
    let k = d + 1;
    if k + q > prec || k > 4096 {
        return None;
    }
    let ku = k as usize;
    // Column index of z^a T^i is a·n + i.
    let mut ech = Echelon::new();
    for j in 0..n {
        for a in 0..k {
            let mut row = crate::linalg::SparseRow::new();
            for i in 0..n {
                let entry = mv.get(i, j).shift(q + a);
                for (e, x) in entry.terms() {
                    if e < k {
                        row.insert(e as usize * n + i, x.clone());
                    }
                }
            }
            ech.insert(row);
        }
    }
    let coker = (n * ku - ech.rank()) as i64;
    Some(coker - q * n as i64)
}
