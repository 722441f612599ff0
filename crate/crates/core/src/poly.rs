//! Univariate polynomials in `T` with rational or series coefficients,
//! stored low degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::series::{LaurentSeries, Rational, EXACT};

pub type QPoly = Vec<Rational>;
pub type SeriesPoly = Vec<LaurentSeries>;

pub fn q_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn q_mul(a: &[Rational], b: &[Rational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_trim(out)
}

pub fn q_sub(a: &[Rational], b: &[Rational]) -> QPoly {
    let n = a.len().max(b.len());
    q_trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(Rational::zero)
                    - b.get(i).cloned().unwrap_or_else(Rational::zero)
            })
            .collect(),
    )
}

/// Quotient and remainder; `b` must be nonzero.
pub fn q_divrem(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly) {
    let b = q_trim(b.to_vec());
    let mut r = q_trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = b[db].clone().recip();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().expect("nonempty") * &lead_inv;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
        r = q_trim(r);
    }
    (q_trim(q), r)
}

/// `(g, s, t)` with `s·a + t·b = g` and `g` monic.
pub fn q_ext_gcd(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (q_trim(a.to_vec()), q_trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = q_divrem(&r0, &r1);
        let s2 = q_sub(&s0, &q_mul(&q, &s1));
        let t2 = q_sub(&t0, &q_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let lead = r0.last().cloned().unwrap_or_else(Rational::one).recip();
    let scale = |p: QPoly| q_trim(p.into_iter().map(|c| c * &lead).collect());
    (scale(r0), scale(s0), scale(t0))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

/// Rational roots with multiplicities, plus the cofactor without rational
/// roots.
pub fn q_rational_roots(p: &[Rational]) -> (Vec<(Rational, usize)>, QPoly) {
    let mut rest = q_trim(p.to_vec());
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let push = |roots: &mut Vec<(Rational, usize)>, r: Rational| {
        if let Some(slot) = roots.iter_mut().find(|(x, _)| *x == r) {
            slot.1 += 1;
        } else {
            roots.push((r, 1));
        }
    };
    while rest.len() > 1 && rest[0].is_zero() {
        rest.remove(0);
        push(&mut roots, Rational::zero());
    }
    loop {
        if rest.len() <= 1 {
            break;
        }
        let denom_lcm = rest.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = rest.iter().map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer()).collect();
        let lead = ints.last().expect("nonempty").clone();
        let constant = ints[0].clone();
        let mut found = None;
        'search: for p in divisors(&constant) {
            for q in divisors(&lead) {
                for sign in [1, -1] {
                    let cand = Rational::new(BigInt::from(sign) * &p, q.clone());
                    let val = rest.iter().rev().fold(Rational::zero(), |acc, c| acc * &cand + c);
                    if val.is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                let (quot, _) = q_divrem(&rest, &[-r.clone(), Rational::one()]);
                rest = quot;
                push(&mut roots, r);
            }
            None => break,
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, rest)
}

/// `(T − c)^m` with rational coefficients.
pub fn q_linear_power(c: &Rational, m: usize) -> QPoly {
    (0..m).fold(vec![Rational::one()], |acc, _| q_mul(&acc, &[-c.clone(), Rational::one()]))
}

pub fn lift(p: &[Rational]) -> SeriesPoly {
    p.iter().map(|c| LaurentSeries::constant(c.clone(), EXACT)).collect()
}

fn exact_zero(s: &LaurentSeries) -> bool {
    s.is_zero() && s.is_exact()
}

pub fn s_trim(mut p: SeriesPoly) -> SeriesPoly {
    while p.last().is_some_and(exact_zero) {
        p.pop();
    }
    p
}

pub fn s_add(a: &[LaurentSeries], b: &[LaurentSeries]) -> SeriesPoly {
    let n = a.len().max(b.len());
    let zero = LaurentSeries::zero(EXACT);
    (0..n).map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero)).collect()
}

pub fn s_sub(a: &[LaurentSeries], b: &[LaurentSeries]) -> SeriesPoly {
    let n = a.len().max(b.len());
    let zero = LaurentSeries::zero(EXACT);
    (0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect()
}

pub fn s_mul(a: &[LaurentSeries], b: &[LaurentSeries]) -> SeriesPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![LaurentSeries::zero(EXACT); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if exact_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if exact_zero(y) {
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

pub fn s_truncate(a: &[LaurentSeries], prec: i64) -> SeriesPoly {
    a.iter().map(|c| c.truncate(prec)).collect()
}

/// Division by a monic polynomial `b` (leading coefficient exactly 1).
pub fn s_divrem(a: &[LaurentSeries], b: &[LaurentSeries]) -> (SeriesPoly, SeriesPoly) {
    let b = s_trim(b.to_vec());
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![LaurentSeries::zero(EXACT); r.len() - db];
    while r.len() > db {
        let top = r.pop().expect("nonempty");
        let k = r.len() - db;
        for i in 0..db {
            r[k + i] = &r[k + i] - &(&top * &b[i]);
        }
        q[k] = top;
    }
    (q, r)
}

/// `p(T + c)`.
pub fn s_taylor_shift(p: &[LaurentSeries], c: &Rational) -> SeriesPoly {
    let mut out: SeriesPoly = Vec::new();
    let lin = [LaurentSeries::constant(c.clone(), EXACT), LaurentSeries::one(EXACT)];
    for coeff in p.iter().rev() {
        out = s_mul(&out, &lin);
        if out.is_empty() {
            out.push(coeff.clone());
        } else {
            out[0] = &out[0] + coeff;
        }
    }
    out
}

/// Evaluates `p` at a series value.
pub fn s_eval(p: &[LaurentSeries], x: &LaurentSeries) -> LaurentSeries {
    p.iter()
        .rev()
        .fold(LaurentSeries::zero(EXACT), |acc, c| &(&acc * x) + c)
}

/// Smallest coefficient precision.
pub fn s_precision(p: &[LaurentSeries]) -> i64 {
    p.iter().map(LaurentSeries::precision).min().unwrap_or(EXACT)
}

/// Whether the coefficients agree on their common windows.
pub fn s_agrees(a: &[LaurentSeries], b: &[LaurentSeries]) -> bool {
    let n = a.len().max(b.len());
    let zero = LaurentSeries::zero(EXACT);
    (0..n).all(|i| a.get(i).unwrap_or(&zero).agrees_with(b.get(i).unwrap_or(&zero)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, ratio};

    fn qp(c: &[i64]) -> QPoly {
        c.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (T − 1)^2 (2T + 3) T = 2T^4 − T^3 − 4T^2 + 3T
        let p = qp(&[0, 3, -4, -1, 2]);
        let (roots, rest) = q_rational_roots(&p);
        assert_eq!(roots, vec![(ratio(-3, 2), 1), (rat(0), 1), (rat(1), 2)]);
        assert_eq!(rest.len(), 1);

        let (roots, rest) = q_rational_roots(&qp(&[-2, 0, 1]));
        assert!(roots.is_empty());
        assert_eq!(rest, qp(&[-2, 0, 1]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = qp(&[1, 0, 1]);
        let b = qp(&[-1, 1]);
        let (g, s, t) = q_ext_gcd(&a, &b);
        assert_eq!(g, qp(&[1]));
        let combo = q_trim(
            q_mul(&s, &a)
                .iter()
                .zip(q_mul(&t, &b).iter().chain(std::iter::repeat(&rat(0))))
                .map(|(x, y)| x + y)
                .collect(),
        );
        assert_eq!(combo, qp(&[1]));
    }

    #[test]
    fn taylor_shift_and_divrem() {
        let p = lift(&qp(&[1, 2, 1])); // (T + 1)^2
        let shifted = s_taylor_shift(&p, &rat(-1));
        assert!(s_agrees(&shifted, &lift(&qp(&[0, 0, 1]))));
        let (q, r) = s_divrem(&p, &lift(&qp(&[1, 1])));
        assert!(s_agrees(&q, &lift(&qp(&[1, 1]))));
        assert!(r.iter().all(LaurentSeries::is_zero));
    }
}
