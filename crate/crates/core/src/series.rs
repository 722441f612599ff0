//! Truncated Laurent series over the rationals.
//!
//! A series is known modulo `z^precision`: every coefficient below the
//! precision is exact, everything at or above it is unknown. Operations
//! compute the precision their result is provably correct to, so nothing
//! ever silently reports a zero that was really an unknown.
//!
//! Polynomials that are known exactly carry [`EXACT`] as their precision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The base field.
pub type Rational = BigRational;

/// Precision marker for series that are known exactly (finite polynomials).
pub const EXACT: i64 = 1_000_000_000;

/// Largest number of coefficients an expansion (inverse, composition) will
/// generate. Exact inputs have to be truncated before being expanded.
const MAX_EXPANSION: i64 = 1 << 14;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn clamp(prec: i64) -> i64 {
    prec.min(EXACT)
}

/// `offset + prec`, keeping exact precisions exact.
fn offset_prec(offset: i64, prec: i64) -> i64 {
    if prec >= EXACT {
        EXACT
    } else {
        clamp(offset.saturating_add(prec))
    }
}

/// Truncated Laurent series `Σ c_e z^e + O(z^precision)`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    terms: BTreeMap<i64, Rational>,
    prec: i64,
}

impl LaurentSeries {
    /// Builds a series from `(exponent, coefficient)` pairs. Zero
    /// coefficients and exponents at or beyond `prec` are dropped.
    pub fn from_terms<I>(terms: I, prec: i64) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let prec = clamp(prec);
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e >= prec {
                continue;
            }
            let slot: &mut Rational = map.entry(e).or_insert_with(Rational::zero);
            *slot += c;
        }
        map.retain(|_, c: &mut Rational| !c.is_zero());
        LaurentSeries { terms: map, prec }
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `z^(order + i)`.
    pub fn from_coeffs(order: i64, coeffs: Vec<Rational>, prec: i64) -> Self {
        Self::from_terms(
            coeffs
                .into_iter()
                .enumerate()
                .map(|(i, c)| (order + i as i64, c)),
            prec,
        )
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_ints(order: i64, coeffs: &[i64], prec: i64) -> Self {
        Self::from_coeffs(order, coeffs.iter().map(|&c| rat(c)).collect(), prec)
    }

    pub fn zero(prec: i64) -> Self {
        LaurentSeries {
            terms: BTreeMap::new(),
            prec: clamp(prec),
        }
    }

    pub fn constant(c: Rational, prec: i64) -> Self {
        Self::monomial(c, 0, prec)
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(Rational::one(), prec)
    }

    /// `c·z^exp`.
    pub fn monomial(c: Rational, exp: i64, prec: i64) -> Self {
        Self::from_terms([(exp, c)], prec)
    }

    /// Exact `z^exp`.
    pub fn z_pow(exp: i64) -> Self {
        Self::monomial(Rational::one(), exp, EXACT)
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Lowest possibly-nonzero exponent; equals the precision when the
    /// series is zero to known precision.
    pub fn order(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    /// Number of known coefficients from the order up.
    pub fn relative_precision(&self) -> i64 {
        self.prec - self.order()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `z^e`. Exponents at or beyond the precision are
    /// unknown and yield an error.
    pub fn coeff(&self, e: i64) -> Result<Rational> {
        if e >= self.prec {
            return Err(Error::precision(format!(
                "coefficient of z^{e} requested from a series known modulo z^{}",
                self.prec
            )));
        }
        Ok(self.coeff_or_zero(e))
    }

    pub(crate) fn coeff_or_zero(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Drops everything at or above `prec` (never raises the precision).
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        LaurentSeries {
            terms: self.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect(),
            prec,
        }
    }

    /// Reinterprets the known terms as exact up to `prec`. Used where the
    /// series is a chosen approximation rather than a measured quantity.
    pub(crate) fn assume_precision(&self, prec: i64) -> Self {
        let prec = clamp(prec);
        LaurentSeries {
            terms: self.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect(),
            prec,
        }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: offset_prec(k, self.prec),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.prec);
        }
        LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
            prec: self.prec,
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(e, c)| (e - 1, c * rat(*e))),
            offset_prec(-1, self.prec),
        )
    }

    /// Coefficient of `z^-1`.
    pub fn residue(&self) -> Result<Rational> {
        if self.prec <= -1 {
            return Err(Error::precision(format!(
                "residue needs z^-1 inside the known window, precision is {}",
                self.prec
            )));
        }
        Ok(self.coeff_or_zero(-1))
    }

    /// Multiplicative inverse to the precision the input supports.
    pub fn invert(&self) -> Result<Self> {
        let Some(lead) = self.leading_coefficient().cloned() else {
            return Err(Error::ZeroLeadingCoefficient);
        };
        let order = self.order();
        let rel = self.relative_precision();
        if self.terms.len() == 1 {
            let prec = if self.is_exact() { EXACT } else { -order + rel };
            return Ok(Self::monomial(lead.recip(), -order, prec));
        }
        if rel > MAX_EXPANSION {
            return Err(Error::precision(
                "inverse of an exact non-monomial series; truncate it first",
            ));
        }
        let n = rel as usize;
        let a: Vec<Rational> = (0..n).map(|i| self.coeff_or_zero(order + i as i64)).collect();
        let inv_lead = lead.recip();
        let mut b: Vec<Rational> = Vec::with_capacity(n);
        b.push(inv_lead.clone());
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !a[j].is_zero() {
                    acc += &a[j] * &b[k - j];
                }
            }
            b.push(-acc * &inv_lead);
        }
        Ok(Self::from_coeffs(-order, b, -order + rel))
    }

    /// `self^k`, negative exponents through [`invert`](Self::invert).
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(EXACT);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `f ∘ g` for a power series `f` and `g` with zero constant term.
    pub fn compose(&self, g: &LaurentSeries) -> Result<Self> {
        if self.order() < 0 {
            return Err(Error::precision("compose expects a power series as the outer function"));
        }
        if g.order() < 1 {
            return Err(Error::NonzeroConstantTerm);
        }
        let v = g.order();
        let outer_bound = if self.is_exact() {
            EXACT
        } else {
            v.saturating_mul(self.prec)
        };
        let first_nonconstant = self.terms.keys().copied().find(|&k| k >= 1);
        let inner_bound = match first_nonconstant {
            Some(k) if g.prec < EXACT => (k - 1) * v + g.prec,
            _ => EXACT,
        };
        let prec = clamp(outer_bound.min(inner_bound));
        if prec < EXACT && prec > MAX_EXPANSION {
            return Err(Error::precision("composition would expand an unbounded series"));
        }
        let mut acc = Self::zero(prec);
        let mut power = Self::one(prec);
        let mut k = 0i64;
        let max_k = self.degree().unwrap_or(0);
        while k <= max_k && k.saturating_mul(v) < prec {
            let c = self.coeff_or_zero(k);
            if !c.is_zero() {
                acc = &acc + &power.scale(&c);
            }
            power = (&power * g).truncate(prec);
            k += 1;
        }
        Ok(acc.truncate(prec))
    }

    /// Value of `x` such that the two series agree on their common known
    /// window.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        let prec = self.prec.min(other.prec);
        self.terms.range(..prec).eq(other.terms.range(..prec))
    }

    /// Series from an exact polynomial evaluated exactly at rational `x`.
    /// Only meaningful for exact finite series with nonnegative order.
    pub fn eval_polynomial(&self, x: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mut p = Rational::one();
            for _ in 0..*e {
                p *= x;
            }
            acc + c * p
        })
    }
}

impl PartialEq for LaurentSeries {
    /// Equality on the common known window.
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

impl<'a> Add<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let prec = self.prec.min(rhs.prec);
        let mut terms: BTreeMap<i64, Rational> =
            self.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect();
        for (e, c) in rhs.terms.range(..prec) {
            let slot = terms.entry(*e).or_insert_with(Rational::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentSeries { terms, prec }
    }
}

impl<'a> Sub<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            prec: self.prec,
        }
    }
}

impl<'a> Mul<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        let prec = offset_prec(self.order(), rhs.prec).min(offset_prec(rhs.order(), self.prec));
        let (Some((&lo_a, _)), Some((&lo_b, _))) = (self.terms.first_key_value(), rhs.terms.first_key_value()) else {
            return LaurentSeries { terms: BTreeMap::new(), prec };
        };
        let base = lo_a + lo_b;
        let top = (self.terms.last_key_value().unwrap().0 + rhs.terms.last_key_value().unwrap().0 + 1).min(prec);
        if top <= base {
            return LaurentSeries { terms: BTreeMap::new(), prec };
        }
        let mut dense: Vec<Rational> = vec![Rational::zero(); (top - base) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                if e >= top {
                    break;
                }
                dense[(e - base) as usize] += ca * cb;
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (base + i as i64, c))
            .collect();
        LaurentSeries { terms, prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match *e {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "z")?,
                1 => write!(f, "{a}z")?,
                _ if a.is_one() => write!(f, "z^{e}")?,
                _ => write!(f, "{a}z^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            write!(f, " + O(z^{})", self.prec)?;
        }
        Ok(())
    }
}

/// A polynomial relation `Σ_j r_j(T)·s^j = 0` in an unknown power series
/// `s(T)`, with coefficients `r_j` that are series in `T`.
#[derive(Clone, Debug)]
pub struct ImplicitRelation {
    pub coeffs: Vec<LaurentSeries>,
}

impl ImplicitRelation {
    pub fn new(coeffs: Vec<LaurentSeries>) -> Self {
        ImplicitRelation { coeffs }
    }

    pub fn eval(&self, s: &LaurentSeries, prec: i64) -> LaurentSeries {
        let mut acc = LaurentSeries::zero(prec);
        for r in self.coeffs.iter().rev() {
            acc = (&(&acc * s) + r).truncate(prec);
        }
        acc
    }

    pub fn derivative(&self) -> ImplicitRelation {
        ImplicitRelation {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.scale(&rat(j as i64)))
                .collect(),
        }
    }
}

/// Newton iteration with precision doubling for a simple root of
/// `relation` near `initial_guess`. The result satisfies the relation
/// modulo `T^target_precision`.
pub fn solve_implicit(
    relation: &ImplicitRelation,
    initial_guess: &LaurentSeries,
    target_precision: i64,
) -> Result<LaurentSeries> {
    let deriv = relation.derivative();
    let mut s = initial_guess.assume_precision(target_precision);
    let mut residual = relation.eval(&s, target_precision);
    if residual.is_zero() {
        return Ok(s);
    }
    let mut gained = residual.order();
    if gained < 1 {
        return Err(Error::NoConvergence(
            "initial guess is not a root modulo T".into(),
        ));
    }
    let mut working = (2 * gained).min(target_precision);
    let max_steps = 2 + (64 - (target_precision.max(1) as u64).leading_zeros()) as usize;
    for _ in 0..=max_steps {
        let r = relation.eval(&s, working);
        let d = deriv.eval(&s, working);
        if d.order() != 0 {
            return Err(Error::NoConvergence(
                "derivative is not a unit at the current approximation".into(),
            ));
        }
        let step = (&r * &d.invert()?).truncate(working);
        s = (&s - &step).assume_precision(working);
        s = s.assume_precision(target_precision);
        residual = relation.eval(&s, target_precision);
        if residual.is_zero() && residual.precision() >= target_precision {
            return Ok(s.truncate(target_precision));
        }
        let now = residual.order();
        if now <= gained && working >= target_precision {
            return Err(Error::NoConvergence(format!(
                "residual valuation stuck at {now}"
            )));
        }
        gained = now.max(gained);
        working = (2 * working).min(target_precision);
    }
    Err(Error::NoConvergence(format!(
        "residual still has valuation {} after {max_steps} steps",
        residual.order()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(order: i64, c: &[i64], prec: i64) -> LaurentSeries {
        LaurentSeries::from_ints(order, c, prec)
    }

    #[test]
    fn add_cancels_and_floors_precision() {
        let a = s(0, &[1, 1], 10);
        let b = s(0, &[-1, 1], 10);
        assert_eq!(&a + &b, s(1, &[2], 10));
        let sum = &s(-1, &[1, 0, 1], EXACT) + &LaurentSeries::zero(EXACT);
        assert_eq!(sum.order(), -1);
        let c = &s(0, &[1], 2) + &s(2, &[1], 3);
        assert_eq!(c.precision(), 2);
        assert_eq!(c, s(0, &[1], 2));
    }

    #[test]
    fn mul_tracks_precision() {
        let a = s(0, &[1, 1], 3);
        let b = s(0, &[1, -1], 3);
        let p = &a * &b;
        assert_eq!(p.precision(), 3);
        assert_eq!(p, s(0, &[1, 0, -1], 3));
        assert!(p.coeff(3).is_err());
        let q = &LaurentSeries::z_pow(-1) * &LaurentSeries::z_pow(1);
        assert_eq!(q, LaurentSeries::one(EXACT));
    }

    #[test]
    fn invert_examples() {
        let inv = s(0, &[1, 1], 6).invert().unwrap();
        assert_eq!(inv, s(0, &[1, -1, 1, -1, 1, -1], 6));
        let inv = LaurentSeries::z_pow(1).invert().unwrap();
        assert_eq!(inv.order(), -1);
        assert!(inv.is_exact());
        let inv = s(0, &[2, 1], 4).invert().unwrap();
        assert_eq!(
            inv,
            LaurentSeries::from_coeffs(0, vec![ratio(1, 2), ratio(-1, 4), ratio(1, 8), ratio(-1, 16)], 4)
        );
        assert_eq!(LaurentSeries::zero(5).invert(), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(s(-1, &[2, 3], 5).residue().unwrap(), rat(2));
        assert_eq!(s(0, &[1, 1], 5).residue().unwrap(), rat(0));
        assert_eq!(s(-2, &[1, 5], 5).residue().unwrap(), rat(5));
        assert!(s(-4, &[1], -2).residue().is_err());
    }

    #[test]
    fn compose_examples() {
        let f = s(1, &[1, 1], EXACT);
        let g = LaurentSeries::z_pow(2);
        assert_eq!(f.compose(&g).unwrap(), s(2, &[1, 0, 1], EXACT));

        let geo = s(0, &[1, 1], 8).invert().unwrap();
        let c = geo.compose(&g).unwrap();
        assert_eq!(c.precision(), 16);
        assert_eq!(c, s(0, &[1, 0, -1, 0, 1, 0, -1], 7));

        let h = s(0, &[3, 1, 4], 9);
        assert_eq!(h.compose(&LaurentSeries::z_pow(1)).unwrap(), h);
        assert_eq!(h.compose(&s(0, &[1, 1], 9)), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn solve_implicit_examples() {
        // z(1+z) = T^2  =>  z^2 + z - T^2 = 0
        let rel = ImplicitRelation::new(vec![
            s(2, &[-1], EXACT),
            LaurentSeries::one(EXACT),
            LaurentSeries::one(EXACT),
        ]);
        let z = solve_implicit(&rel, &LaurentSeries::zero(EXACT), 7).unwrap();
        assert_eq!(z, s(2, &[1, 0, -1, 0, 2], 7));
        assert!(rel.eval(&z, 7).is_zero());

        let rel = ImplicitRelation::new(vec![s(2, &[-1], EXACT), LaurentSeries::one(EXACT)]);
        let z = solve_implicit(&rel, &LaurentSeries::zero(EXACT), 10).unwrap();
        assert_eq!(z, s(2, &[1], 10));

        // z(1-z) = T^2
        let rel = ImplicitRelation::new(vec![
            s(2, &[-1], EXACT),
            LaurentSeries::one(EXACT),
            LaurentSeries::constant(rat(-1), EXACT),
        ]);
        let z = solve_implicit(&rel, &LaurentSeries::zero(EXACT), 7).unwrap();
        assert_eq!(z, s(2, &[1, 0, 1, 0, 2], 7));
    }

    #[test]
    fn solve_implicit_rejects_non_roots() {
        let rel = ImplicitRelation::new(vec![LaurentSeries::one(EXACT), LaurentSeries::one(EXACT)]);
        assert!(matches!(
            solve_implicit(&rel, &LaurentSeries::zero(EXACT), 5),
            Err(Error::NoConvergence(_))
        ));
    }
}
