//! JSON interchange. Every number is written as a rational string `"p/q"`.
//!
//! Function format:
//!
//! ```json
//! {"breakpoints": ["0", "1/2", "1"],
//!  "limits": [["0", "1/2", "1/2"], ["1", "1/2", "1/2"], ["0", "1/2", "1/2"]],
//!  "f": "1/2"}
//! ```
//!
//! Limit triples are ordered `[value, right, left]`. A continuous function may
//! give `"values"` instead of `"limits"`; the serializer emits that shorthand
//! whenever the function is continuous.

use serde_json::{json, Map, Value};

use crate::analysis::{
    AdditiveFaceSet, CoveredComponents, ExtremalityReport, MinimalityReport, SymmetryViolation, Violation,
};
use crate::deltap::{Face, IntervalOrPoint, Point, Triple, VertexSign};
use crate::error::{Error, Result};
use crate::pwl::{LimitTriple, PiecewiseLinear, Side};
use crate::scalar::{format_rational, parse_rational, Scalar};

pub fn rational<T: Scalar>(v: &T) -> Value {
    Value::String(format_rational(v))
}

fn rationals<T: Scalar>(vs: &[T]) -> Value {
    Value::Array(vs.iter().map(rational).collect())
}

pub fn point<T: Scalar>(p: &Point<T>) -> Value {
    json!([rational(&p.0), rational(&p.1)])
}

fn interval<T: Scalar>(i: &IntervalOrPoint<T>) -> Value {
    json!([rational(&i.lo), rational(&i.hi)])
}

fn side(s: Side) -> Value {
    Value::String(s.symbol().to_string())
}

pub fn limit_triple<T: Scalar>(l: &LimitTriple<T>) -> Value {
    json!([rational(&l.value), rational(&l.right), rational(&l.left)])
}

pub fn function_to_json<T: Scalar>(function: &PiecewiseLinear<T>) -> Value {
    let mut obj = Map::new();
    obj.insert("breakpoints".into(), rationals(function.end_points()));
    if function.is_continuous() {
        obj.insert("values".into(), rationals(&function.values_at_end_points()));
    } else {
        obj.insert(
            "limits".into(),
            Value::Array(function.limits_at_end_points().iter().map(limit_triple).collect()),
        );
    }
    if let Some(f) = function.declared_f() {
        obj.insert("f".into(), rational(f));
    }
    Value::Object(obj)
}

fn parse_value<T: Scalar>(v: &Value, what: &str) -> Result<T> {
    match v {
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("{what}: expected a rational string, got {other}"))),
    }
}

fn parse_list<T: Scalar>(v: &Value, what: &str) -> Result<Vec<T>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array")))?
        .iter()
        .map(|x| parse_value(x, what))
        .collect()
}

pub fn function_from_json<T: Scalar>(v: &Value) -> Result<PiecewiseLinear<T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("function must be a JSON object".into()))?;
    let breakpoints = parse_list(
        obj.get("breakpoints")
            .ok_or_else(|| Error::Parse("missing \"breakpoints\"".into()))?,
        "breakpoints",
    )?;
    let function = match (obj.get("limits"), obj.get("values")) {
        (Some(_), Some(_)) => return Err(Error::Parse("give either \"limits\" or \"values\", not both".into())),
        (Some(limits), None) => {
            let triples = limits
                .as_array()
                .ok_or_else(|| Error::Parse("limits: expected an array".into()))?
                .iter()
                .map(|t| {
                    let parts: Vec<T> = parse_list(t, "limits")?;
                    match <[T; 3]>::try_from(parts) {
                        Ok([value, right, left]) => Ok(LimitTriple::new(value, right, left)),
                        Err(_) => Err(Error::Parse("limit triples need exactly 3 entries".into())),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            PiecewiseLinear::from_breakpoints_and_limits(breakpoints, triples)?
        }
        (None, Some(values)) => PiecewiseLinear::from_breakpoints_and_values(breakpoints, parse_list(values, "values")?)?,
        (None, None) => return Err(Error::Parse("missing \"limits\" or \"values\"".into())),
    };
    match obj.get("f") {
        None | Some(Value::Null) => Ok(function),
        Some(f) => function.with_declared_f(parse_value(f, "f")?),
    }
}

pub fn function_from_str<T: Scalar>(text: &str) -> Result<PiecewiseLinear<T>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    function_from_json(&v)
}

pub fn load_function<T: Scalar>(path: &std::path::Path) -> Result<PiecewiseLinear<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    function_from_str(&text)
}

fn triple_fields<T: Scalar>(t: &Triple<T>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("I".into(), interval(&t.i));
    m.insert("J".into(), interval(&t.j));
    m.insert("K".into(), interval(&t.k));
    m
}

pub fn face_to_json<T: Scalar>(face: &Face<T>) -> Value {
    let mut m = triple_fields(&face.triple);
    m.insert("vertices".into(), Value::Array(face.vertices.iter().map(point).collect()));
    m.insert("projections".into(), Value::Object(triple_fields(&face.projections)));
    m.insert("dimension".into(), json!(face.dimension));
    Value::Object(m)
}

pub fn vertex_sign_to_json<T: Scalar>(s: &VertexSign<T>) -> Value {
    json!({
        "vertex": point(&s.vertex),
        "face": face_to_json(&s.face),
        "slack": rational(&s.slack),
    })
}

fn symmetry_violation<T: Scalar>(s: &SymmetryViolation<T>) -> Value {
    json!({
        "x": rational(&s.x),
        "sides": [side(s.sides.0), side(s.sides.1)],
        "residual": rational(&s.residual),
    })
}

fn violation<T: Scalar>(v: &Violation<T>) -> Value {
    match v {
        Violation::Origin { value } => json!({"kind": "origin", "value": rational(value)}),
        Violation::Range { point, side: s, value } => json!({
            "kind": "range",
            "point": rational(point),
            "side": side(*s),
            "value": rational(value),
        }),
        Violation::Subadditivity(s) => {
            let mut obj = vertex_sign_to_json(s);
            obj["kind"] = json!("subadditivity");
            obj
        }
        Violation::Symmetry(s) => {
            let mut obj = symmetry_violation(s);
            obj["kind"] = json!("symmetry");
            obj
        }
    }
}

pub fn minimality_report_to_json<T: Scalar>(r: &MinimalityReport<T>) -> Value {
    let mut obj = json!({
        "is_minimal": r.is_minimal,
        "f": rational(&r.f_used),
        "violations": r.violations.iter().map(violation).collect::<Vec<_>>(),
    });
    if let Some(alt) = &r.alternative_f {
        obj["alternative_f"] = rational(alt);
    }
    obj
}

pub fn additive_faces_to_json<T: Scalar>(set: &AdditiveFaceSet<T>) -> Value {
    Value::Array(
        set.faces
            .iter()
            .map(|a| {
                let mut obj = face_to_json(&a.face);
                if let Some(w) = &a.witness {
                    obj["witness"] = face_to_json(w);
                }
                obj
            })
            .collect(),
    )
}

pub fn covered_to_json<T: Scalar>(c: &CoveredComponents<T>) -> Value {
    Value::Array(
        c.components
            .iter()
            .map(|comp| {
                json!({
                    "intervals": comp.intervals.iter().map(|i| json!({
                        "interval": [rational(&i.lo), rational(&i.hi)],
                        "directly_covered": i.directly_covered,
                    })).collect::<Vec<_>>(),
                    "covered": comp.covered,
                    "directly_covered": comp.directly_covered,
                })
            })
            .collect(),
    )
}

pub fn extremality_report_to_json<T: Scalar>(r: &ExtremalityReport<T>) -> Value {
    let mut obj = json!({
        "is_extreme": r.is_extreme,
        "f": rational(&r.f),
        "grid_denominator": r.grid_denominator,
        "perturbation_space_dimension": r.perturbation_space_dimension,
        "experimental": r.experimental,
        "covered": covered_to_json(&r.covered),
    });
    if let Some(p) = &r.perturbation {
        obj["perturbation"] = function_to_json(p);
    }
    if let Some(c) = &r.certificate {
        obj["certificate"] = json!({
            "perturbation": function_to_json(&c.perturbation),
            "epsilon": rational(&c.epsilon),
        });
    }
    obj
}
