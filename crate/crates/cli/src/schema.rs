//! The JSON query grammar. Parsing accepts a few conveniences (bare integers
//! for rationals, omitted dimensions); serialization always emits the
//! canonical form: sorted keys, sorted term lists, rationals as `"p/q"`.

use std::fmt;
use std::str::FromStr;

use goodtrace::arith::{format_rational, parse_rational};
use goodtrace::lattice::RealBasis;
use goodtrace::laurent::LaurentPoly;
use goodtrace::poly::IntPolynomial;
use goodtrace::{Int, Rat};
use serde_json::{json, Map, Value};

use crate::CliError;

type Parsed<T> = Result<T, CliError>;

fn schema<T>(msg: impl Into<String>) -> Parsed<T> {
    Err(CliError::Schema(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Trace1d,
    TraceRational,
    Fitting,
    Simplicial,
    DirectSum,
    Simplex,
    PolytopeInfo,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Trace1d,
        Kind::TraceRational,
        Kind::Fitting,
        Kind::Simplicial,
        Kind::DirectSum,
        Kind::Simplex,
        Kind::PolytopeInfo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Trace1d => "trace-1d",
            Kind::TraceRational => "trace-rational",
            Kind::Fitting => "fitting",
            Kind::Simplicial => "simplicial",
            Kind::DirectSum => "directsum",
            Kind::Simplex => "simplex",
            Kind::PolytopeInfo => "polytope-info",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Parsed<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CliError::Schema(format!("unknown query kind {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub n_max: Option<u32>,
    pub bound: Option<u32>,
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisSpec {
    /// `{1, √n_1, ..., √n_k}`.
    Radicals(Vec<u64>),
    /// Labels with rational enclosures; independence is taken on trust.
    Asserted {
        labels: Vec<String>,
        approx: Vec<(Rat, Rat)>,
    },
}

impl BasisSpec {
    pub fn build(&self) -> Result<RealBasis, goodtrace::Error> {
        match self {
            BasisSpec::Radicals(r) => RealBasis::radicals(r),
            BasisSpec::Asserted { labels, approx } => {
                RealBasis::asserted(labels.clone(), approx.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub basis: BasisSpec,
    pub gens: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    /// `P` by ascending coefficients and `r` as a root of `minpoly`, chosen by
    /// an isolating interval when one is given.
    Trace1d {
        p: IntPolynomial,
        minpoly: IntPolynomial,
        interval: Option<(Rat, Rat)>,
    },
    TraceRational {
        p: LaurentPoly,
        r: Vec<Rat>,
    },
    Fitting {
        p: LaurentPoly,
        candidates: Vec<LaurentPoly>,
    },
    Simplicial(Vec<Rat>),
    DirectSum(Vec<GroupSpec>),
    Simplex {
        n: usize,
        points: Vec<Vec<Rat>>,
    },
    PolytopeInfo(LaurentPoly),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Trace1d { .. } => Kind::Trace1d,
            Payload::TraceRational { .. } => Kind::TraceRational,
            Payload::Fitting { .. } => Kind::Fitting,
            Payload::Simplicial(_) => Kind::Simplicial,
            Payload::DirectSum(_) => Kind::DirectSum,
            Payload::Simplex { .. } => Kind::Simplex,
            Payload::PolytopeInfo(_) => Kind::PolytopeInfo,
        }
    }

    pub fn parse(kind: Kind, v: &Value) -> Parsed<Self> {
        match kind {
            Kind::Trace1d => {
                let o = object(v, "trace-1d payload")?;
                let p = int_poly(field(o, "p")?)?;
                let (minpoly, interval) = match field(o, "r")? {
                    Value::Object(r) => {
                        let minpoly = int_poly(field(r, "minpoly")?)?;
                        let interval = match r.get("interval") {
                            None | Some(Value::Null) => None,
                            Some(i) => {
                                let ends = rationals(i)?;
                                let [lo, hi]: [Rat; 2] = ends
                                    .try_into()
                                    .or_else(|_| schema("interval must have two endpoints"))?;
                                Some((lo, hi))
                            }
                        };
                        (minpoly, interval)
                    }
                    other => {
                        let q = rational(other)?;
                        let poly = IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()])
                            .or_else(|e| schema(e.to_string()))?;
                        (poly, None)
                    }
                };
                Ok(Payload::Trace1d {
                    p,
                    minpoly,
                    interval,
                })
            }
            Kind::TraceRational => {
                let o = object(v, "trace-rational payload")?;
                Ok(Payload::TraceRational {
                    p: laurent(field(o, "p")?)?,
                    r: rationals(field(o, "r")?)?,
                })
            }
            Kind::Fitting => {
                let o = object(v, "fitting payload")?;
                let candidates = array(field(o, "candidates")?, "candidates")?
                    .iter()
                    .map(laurent)
                    .collect::<Parsed<Vec<_>>>()?;
                Ok(Payload::Fitting {
                    p: laurent(field(o, "p")?)?,
                    candidates,
                })
            }
            Kind::Simplicial => Ok(Payload::Simplicial(rationals(v)?)),
            Kind::DirectSum => {
                let groups = array(v, "directsum payload")?
                    .iter()
                    .map(group)
                    .collect::<Parsed<Vec<_>>>()?;
                Ok(Payload::DirectSum(groups))
            }
            Kind::Simplex => {
                let o = object(v, "simplex payload")?;
                let n = unsigned(field(o, "n")?, "n")? as usize;
                let points = array(field(o, "points")?, "points")?
                    .iter()
                    .map(rationals)
                    .collect::<Parsed<Vec<_>>>()?;
                Ok(Payload::Simplex { n, points })
            }
            Kind::PolytopeInfo => Ok(Payload::PolytopeInfo(laurent(v)?)),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Payload::Trace1d {
                p,
                minpoly,
                interval,
            } => {
                let mut r = Map::new();
                r.insert("minpoly".into(), int_poly_value(minpoly));
                if let Some((lo, hi)) = interval {
                    r.insert(
                        "interval".into(),
                        json!([format_rational(lo), format_rational(hi)]),
                    );
                }
                json!({ "p": int_poly_value(p), "r": r })
            }
            Payload::TraceRational { p, r } => {
                json!({ "p": laurent_value(p), "r": rational_list(r) })
            }
            Payload::Fitting { p, candidates } => json!({
                "p": laurent_value(p),
                "candidates": candidates.iter().map(laurent_value).collect::<Vec<_>>(),
            }),
            Payload::Simplicial(v) => rational_list(v),
            Payload::DirectSum(groups) => Value::Array(groups.iter().map(group_value).collect()),
            Payload::Simplex { n, points } => json!({
                "n": n,
                "points": points.iter().map(|p| rational_list(p)).collect::<Vec<_>>(),
            }),
            Payload::PolytopeInfo(p) => laurent_value(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub payload: Payload,
    pub options: Options,
}

impl Query {
    pub fn new(payload: Payload, options: Options) -> Self {
        Self { payload, options }
    }

    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }

    /// Parses `{kind, payload, options?}`.
    pub fn from_value(v: &Value) -> Parsed<Self> {
        let o = object(v, "query")?;
        let kind: Kind = match field(o, "kind")? {
            Value::String(s) => s.parse()?,
            _ => return schema("kind must be a string"),
        };
        let payload = Payload::parse(kind, field(o, "payload")?)?;
        let options = match o.get("options") {
            None | Some(Value::Null) => Options::default(),
            Some(v) => options(v)?,
        };
        if let Some(extra) = o
            .keys()
            .find(|k| !["kind", "payload", "options"].contains(&k.as_str()))
        {
            return schema(format!("unexpected query field {extra:?}"));
        }
        Ok(Self { payload, options })
    }

    pub fn parse(text: &str) -> Parsed<Self> {
        Self::from_value(&serde_json::from_str(text)?)
    }

    pub fn to_value(&self) -> Value {
        let mut opts = Map::new();
        if let Some(n) = self.options.n_max {
            opts.insert("n_max".into(), json!(n));
        }
        if let Some(b) = self.options.bound {
            opts.insert("bound".into(), json!(b));
        }
        opts.insert("oracle".into(), json!(self.options.oracle));
        json!({ "kind": self.kind().as_str(), "payload": self.payload.to_value(), "options": opts })
    }

    /// Canonical single-line text; the input to the query digest.
    pub fn canonical(&self) -> String {
        self.to_value().to_string()
    }
}

fn options(v: &Value) -> Parsed<Options> {
    let o = object(v, "options")?;
    let opt_u32 = |key: &str| -> Parsed<Option<u32>> {
        match o.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => Ok(Some(unsigned(v, key)?)),
        }
    };
    let oracle = match o.get("oracle") {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return schema("oracle must be a boolean"),
    };
    if let Some(extra) = o
        .keys()
        .find(|k| !["n_max", "bound", "oracle"].contains(&k.as_str()))
    {
        return schema(format!("unknown option {extra:?}"));
    }
    Ok(Options {
        n_max: opt_u32("n_max")?,
        bound: opt_u32("bound")?,
        oracle,
    })
}

fn object<'a>(v: &'a Value, what: &str) -> Parsed<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| CliError::Schema(format!("{what} must be an object")))
}

fn array<'a>(v: &'a Value, what: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| CliError::Schema(format!("{what} must be an array")))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str) -> Parsed<&'a Value> {
    o.get(key)
        .ok_or_else(|| CliError::Schema(format!("missing field {key:?}")))
}

fn unsigned(v: &Value, what: &str) -> Parsed<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| CliError::Schema(format!("{what} must be a nonnegative integer")))
}

fn integer(v: &Value) -> Parsed<Int> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(n.to_string().parse().expect("integral JSON number"))
        }
        Value::String(s) => s
            .trim()
            .parse()
            .or_else(|_| schema(format!("malformed integer {s:?}"))),
        _ => schema(format!("expected an integer, found {v}")),
    }
}

fn small_integer(v: &Value) -> Parsed<i64> {
    v.as_i64()
        .ok_or_else(|| CliError::Schema(format!("expected a 64-bit integer, found {v}")))
}

fn rational(v: &Value) -> Parsed<Rat> {
    match v {
        Value::String(s) => parse_rational(s).or_else(|e| schema(e.to_string())),
        Value::Number(_) => integer(v).map(Rat::from_integer),
        _ => schema(format!("expected a rational, found {v}")),
    }
}

fn rationals(v: &Value) -> Parsed<Vec<Rat>> {
    array(v, "rational list")?.iter().map(rational).collect()
}

/// `{coeffs: [c0, c1, ...]}`, or the bare list.
fn int_poly(v: &Value) -> Parsed<IntPolynomial> {
    let list = match v {
        Value::Object(o) => field(o, "coeffs")?,
        other => other,
    };
    let coeffs = array(list, "coefficient list")?
        .iter()
        .map(integer)
        .collect::<Parsed<Vec<_>>>()?;
    IntPolynomial::new(coeffs).or_else(|e| schema(e.to_string()))
}

/// `{dim?, terms: [{exp, coeff}, ...]}`; a term may also be written as the
/// pair `[exp, coeff]`.
fn laurent(v: &Value) -> Parsed<LaurentPoly> {
    let o = object(v, "Laurent polynomial")?;
    let terms = array(field(o, "terms")?, "terms")?
        .iter()
        .map(|t| {
            let (e, c) = match t {
                Value::Object(o) => (field(o, "exp")?, field(o, "coeff")?),
                Value::Array(pair) if pair.len() == 2 => (&pair[0], &pair[1]),
                _ => return schema("a term is {exp, coeff} or [exp, coeff]"),
            };
            let exp = array(e, "exponent")?
                .iter()
                .map(small_integer)
                .collect::<Parsed<Vec<_>>>()?;
            Ok((exp, integer(c)?))
        })
        .collect::<Parsed<Vec<_>>>()?;
    let dim = match o.get("dim") {
        Some(d) => unsigned(d, "dim")? as usize,
        None => match terms.first() {
            Some((e, _)) => e.len(),
            None => return schema("dim is required when there are no terms"),
        },
    };
    LaurentPoly::new(dim, terms).or_else(|e| schema(e.to_string()))
}

fn group(v: &Value) -> Parsed<GroupSpec> {
    let o = object(v, "group")?;
    let b = object(field(o, "basis")?, "basis")?;
    let labels = match b.get("labels") {
        None => None,
        Some(l) => Some(
            array(l, "labels")?
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| CliError::Schema("labels are strings".into()))
                })
                .collect::<Parsed<Vec<_>>>()?,
        ),
    };
    let basis = match (b.get("radicals"), b.get("approx")) {
        (Some(r), None) => {
            let radicands = array(r, "radicals")?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .ok_or_else(|| CliError::Schema("radicands are positive integers".into()))
                })
                .collect::<Parsed<Vec<_>>>()?;
            let spec = BasisSpec::Radicals(radicands);
            let built = spec.build().or_else(|e| schema(e.to_string()))?;
            if labels
                .as_ref()
                .is_some_and(|l| l.as_slice() != built.labels())
            {
                return schema(format!(
                    "labels must be {:?} for this radical basis",
                    built.labels()
                ));
            }
            spec
        }
        (None, Some(a)) => {
            let approx = array(a, "approx")?
                .iter()
                .map(|i| match rationals(i)?.as_slice() {
                    [lo, hi] if lo <= hi => Ok((lo.clone(), hi.clone())),
                    _ => schema("each enclosure is [lo, hi] with lo <= hi"),
                })
                .collect::<Parsed<Vec<_>>>()?;
            let Some(labels) = labels else {
                return schema("an asserted basis needs labels");
            };
            BasisSpec::Asserted { labels, approx }
        }
        _ => return schema("basis needs exactly one of radicals or approx"),
    };
    let gens = array(field(o, "gens")?, "gens")?
        .iter()
        .map(rationals)
        .collect::<Parsed<Vec<_>>>()?;
    Ok(GroupSpec { basis, gens })
}

fn group_value(g: &GroupSpec) -> Value {
    let basis = match &g.basis {
        BasisSpec::Radicals(r) => {
            let labels = g
                .basis
                .build()
                .map(|b| b.labels().to_vec())
                .unwrap_or_default();
            json!({ "labels": labels, "radicals": r })
        }
        BasisSpec::Asserted { labels, approx } => json!({
            "labels": labels,
            "approx": approx.iter().map(|(lo, hi)| json!([format_rational(lo), format_rational(hi)])).collect::<Vec<_>>(),
        }),
    };
    json!({ "basis": basis, "gens": g.gens.iter().map(|r| rational_list(r)).collect::<Vec<_>>() })
}

/// Integers as JSON numbers when they fit in 64 bits, else as strings.
pub(crate) fn int_value(n: &Int) -> Value {
    match i64::try_from(n) {
        Ok(x) => json!(x),
        Err(_) => json!(n.to_string()),
    }
}

pub(crate) fn int_poly_value(p: &IntPolynomial) -> Value {
    json!({ "coeffs": int_list(p.coeffs()) })
}

pub(crate) fn int_list(ns: &[Int]) -> Value {
    Value::Array(ns.iter().map(int_value).collect())
}

pub(crate) fn rational_list(qs: &[Rat]) -> Value {
    Value::Array(qs.iter().map(|q| json!(format_rational(q))).collect())
}

pub(crate) fn laurent_value(p: &LaurentPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(e, c)| json!({ "exp": e, "coeff": int_value(c) }))
        .collect();
    json!({ "dim": p.dim(), "terms": terms })
}
