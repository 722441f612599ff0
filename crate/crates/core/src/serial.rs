//! JSON encodings. All numbers that are field elements travel as exact
//! rational strings `"num/den"`.

use serde_json::{json, Map, Value};

use crate::checker::{CheckReport, CheckerConfig};
use crate::error::{Error, Result};
use crate::grassmann::{Ambient, CoordinateAlgebra, Frame, GrassmannPoint};
use crate::ramification::Decomposition;
use crate::series::{LaurentSeries, Rational, EXACT};
use crate::spectral::{SeriesMatrix, SpectralPolynomial};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<Rational>()
            .map_err(|e| parse_err(format!("bad rational {s:?}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(crate::series::rat)
            .ok_or_else(|| parse_err(format!("rationals must be integers or strings, got {n}"))),
        other => Err(parse_err(format!("expected a rational, got {other}"))),
    }
}

fn int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

/// `{"order", "precision", "coeffs": [[e, "num/den"], …]}`; exact series
/// carry `"precision": "exact"`.
pub fn series_to_json(s: &LaurentSeries) -> Value {
    let precision = if s.is_exact() { json!("exact") } else { json!(s.precision()) };
    let coeffs: Vec<Value> = s.terms().map(|(e, c)| json!([e, rational_to_json(c)])).collect();
    let order = if s.is_zero() { Value::Null } else { json!(s.order()) };
    json!({"order": order, "precision": precision, "coeffs": coeffs})
}

pub fn series_from_json(v: &Value) -> Result<LaurentSeries> {
    let prec = match field(v, "precision")? {
        Value::String(s) if s == "exact" => EXACT,
        other => int(other, "precision")?,
    };
    let mut terms = Vec::new();
    for pair in array(field(v, "coeffs")?, "coeffs")? {
        let pair = array(pair, "coefficient entry")?;
        if pair.len() != 2 {
            return Err(parse_err("coefficient entries are [exponent, value]"));
        }
        let e = int(&pair[0], "exponent")?;
        if e >= prec {
            return Err(parse_err(format!("coefficient z^{e} lies beyond precision {prec}")));
        }
        terms.push((e, rational_from_json(&pair[1])?));
    }
    Ok(LaurentSeries::from_terms(terms, prec))
}

fn series_list(v: &Value, what: &str) -> Result<Vec<LaurentSeries>> {
    array(v, what)?.iter().map(series_from_json).collect()
}

pub fn polynomial_to_json(p: &SpectralPolynomial) -> Value {
    let a: Vec<Value> = p.coefficients().iter().map(series_to_json).collect();
    json!({"n": p.n(), "a": a})
}

pub fn polynomial_from_json(v: &Value) -> Result<SpectralPolynomial> {
    let a = series_list(field(v, "a")?, "a")?;
    if let Some(n) = v.get("n") {
        if int(n, "n")? != a.len() as i64 {
            return Err(parse_err("n does not match the number of coefficients"));
        }
    }
    SpectralPolynomial::new(a)
}

pub fn matrix_to_json(m: &SeriesMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(series_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<SeriesMatrix> {
    let rows = array(v, "matrix")?
        .iter()
        .map(|row| series_list(row, "matrix row"))
        .collect::<Result<Vec<_>>>()?;
    SeriesMatrix::from_rows(rows)
}

pub fn point_to_json(w: &GrassmannPoint) -> Value {
    let ambient = match w.ambient() {
        Ambient::Rank(n) => json!({"n": n}),
        Ambient::Spectral(p) => json!({"p": polynomial_to_json(p)}),
    };
    let gens: Vec<Value> = w
        .generators()
        .iter()
        .map(|g| Value::Array(g.iter().map(series_to_json).collect()))
        .collect();
    let alg: Vec<Value> = w.algebra().generators.iter().map(series_to_json).collect();
    let mut out = json!({
        "ambient": ambient,
        "algebra": {"generators": alg, "cutoff": w.algebra().cutoff},
        "generators": gens,
        "window": [w.window().0, w.window().1],
    });
    if w.frame() == Frame::Dual {
        out["frame"] = json!("dual");
    }
    out
}

fn window_from_json(v: &Value) -> Result<(i64, i64)> {
    let w = array(v, "window")?;
    if w.len() != 2 {
        return Err(parse_err("window is [low, high]"));
    }
    let (low, high) = (int(&w[0], "window low")?, int(&w[1], "window high")?);
    if !(low < 0 && 0 < high) {
        return Err(parse_err(format!("window [{low}, {high}) must straddle 0")));
    }
    Ok((low, high))
}

pub fn point_from_json(v: &Value) -> Result<GrassmannPoint> {
    let amb = field(v, "ambient")?;
    let ambient = if let Some(p) = amb.get("p") {
        Ambient::Spectral(polynomial_from_json(p)?)
    } else {
        let n = int(field(amb, "n")?, "ambient rank")?;
        if n < 1 {
            return Err(parse_err("ambient rank must be positive"));
        }
        Ambient::Rank(n as usize)
    };
    let mut algebra = match v.get("algebra") {
        Some(a) => CoordinateAlgebra::new(series_list(field(a, "generators")?, "algebra generators")?),
        None => CoordinateAlgebra::affine_line(),
    };
    if let Some(c) = v.get("algebra").and_then(|a| a.get("cutoff")) {
        algebra = algebra.with_cutoff(int(c, "cutoff")?.max(0) as usize);
    }
    let generators = array(field(v, "generators")?, "generators")?
        .iter()
        .map(|g| series_list(g, "generator"))
        .collect::<Result<Vec<_>>>()?;
    let frame = match v.get("frame").and_then(Value::as_str) {
        Some("dual") => Frame::Dual,
        Some("standard") | None => Frame::Standard,
        Some(other) => return Err(parse_err(format!("unknown frame {other:?}"))),
    };
    let window = window_from_json(field(v, "window")?)?;
    GrassmannPoint::with_frame(ambient, frame, algebra, generators, window)
}

/// Everything a command needs.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub p: Option<SpectralPolynomial>,
    pub matrix: Option<SeriesMatrix>,
    pub w: Option<GrassmannPoint>,
    pub omega: Option<GrassmannPoint>,
    pub omega_inv: Option<GrassmannPoint>,
    pub config: CheckerConfig,
}

pub fn config_to_json(cfg: &CheckerConfig) -> Value {
    json!({"window": [cfg.window.0, cfg.window.1], "precision": cfg.precision, "gamma": cfg.gamma})
}

pub fn config_from_json(v: Option<&Value>) -> Result<CheckerConfig> {
    let mut cfg = CheckerConfig::default();
    let Some(v) = v else { return Ok(cfg) };
    if let Some(w) = v.get("window") {
        cfg.window = window_from_json(w)?;
    }
    if let Some(p) = v.get("precision") {
        cfg.precision = int(p, "precision")?;
    }
    if let Some(g) = v.get("gamma") {
        cfg.gamma = int(g, "gamma")?;
        if cfg.gamma < 0 {
            return Err(parse_err("gamma must be nonnegative"));
        }
    }
    Ok(cfg)
}

impl ProblemSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        let opt_point = |key: &str| v.get(key).map(point_from_json).transpose();
        Ok(ProblemSpec {
            p: v.get("p").map(polynomial_from_json).transpose()?,
            matrix: v.get("matrix").map(matrix_from_json).transpose()?,
            w: opt_point("W")?,
            omega: opt_point("omega")?,
            omega_inv: opt_point("omega_inv")?,
            config: config_from_json(v.get("config"))?,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        if let Some(p) = &self.p {
            out.insert("p".into(), polynomial_to_json(p));
        }
        if let Some(m) = &self.matrix {
            out.insert("matrix".into(), matrix_to_json(m));
        }
        for (key, point) in [("W", &self.w), ("omega", &self.omega), ("omega_inv", &self.omega_inv)] {
            if let Some(pt) = point {
                out.insert(key.into(), point_to_json(pt));
            }
        }
        out.insert("config".into(), config_to_json(&self.config));
        Value::Object(out)
    }

    /// `p` from the top level or from `W`'s ambient.
    pub fn polynomial(&self) -> Option<&SpectralPolynomial> {
        self.p.as_ref().or_else(|| self.w.as_ref().and_then(|w| w.ambient().spectral()))
    }
}

pub fn decomposition_to_json(dec: &Decomposition) -> Value {
    let comps: Vec<Value> = dec
        .components
        .iter()
        .map(|c| {
            json!({
                "n": c.n,
                "shift": rational_to_json(&c.shift),
                "u": series_to_json(&c.u),
                "z_of_T": series_to_json(&c.z_of_t),
            })
        })
        .collect();
    json!({"partition": dec.partition(), "components": comps})
}

pub fn check_report_to_json(r: &CheckReport) -> Value {
    let residuals: Vec<Value> = r
        .residuals
        .iter()
        .map(|x| json!({"u": x.u, "f": x.f, "v": x.v, "value": rational_to_json(&x.value)}))
        .collect();
    json!({
        "contained": r.contained,
        "precision": {"window": [r.window.0, r.window.1]},
        "residuals": residuals,
        "consistent": r.consistent,
    })
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": e.name(), "message": e.to_string()})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::projective_line_fixture;
    use crate::series::ratio;

    #[test]
    fn series_round_trip() {
        for s in [
            LaurentSeries::from_ints(-2, &[1, 0, 3], 5),
            LaurentSeries::from_ints(0, &[0, 1], EXACT),
            LaurentSeries::zero(4),
            LaurentSeries::monomial(ratio(-3, 7), 2, 9),
        ] {
            let back = series_from_json(&series_to_json(&s)).unwrap();
            assert!(back.agrees_with(&s));
            assert_eq!(back.precision(), s.precision());
        }
        assert!(series_from_json(&json!({"precision": 2, "coeffs": [[3, "1"]]})).is_err());
        assert!(rational_from_json(&json!("1/0x")).is_err());
    }

    #[test]
    fn point_round_trip() {
        let f = projective_line_fixture("p1-ramified-positive").unwrap();
        let back = point_from_json(&point_to_json(&f.w)).unwrap();
        assert!(back.same_window_basis(&f.w));
        assert_eq!(point_to_json(&back), point_to_json(&f.w));
    }
}
