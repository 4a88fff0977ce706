//! JSON model files.
//!
//! Parsers take a `serde_json::Value` plus the JSON path of that value, so
//! every error names where in the file it happened.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;
use thiserror::Error;

use crate::complex::{assemble_grid, CochainComplex, ComplexError, ComplexGrid, Verticals};
use crate::exactla::{big_to_json, json_to_big, CyclicSum, FgAbGroup, Field, FieldMatrix, GroupMap, IntMatrix};
use crate::finspace::{Cover, FiniteSpace, PointSet};
use crate::hochschild::FiniteDimAlgebra;
use crate::ktheory::{validate_bundle, AbelianMonoid, BundleModel, MonoidTable};
use crate::ringspec::{FiniteRing, RingHom};
use crate::sheaf::{Presheaf, SheafError};
use crate::strcat::{Alignment, Carrier, Component, Entry, StructuredFamily, StructuredHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("{file}: line {line}, column {column}: {message}")]
    Syntax { file: String, line: usize, column: usize, message: String },
    #[error("cannot read {file}: {message}")]
    Read { file: String, message: String },
    #[error("at {path}: {message}")]
    Invalid { path: String, message: String },
    /// Well-formed input describing an object that breaks a law, such as a
    /// non-functorial presheaf or a sequence with `d ∘ d != 0`.
    #[error("at {path}: {message}")]
    Rejected { path: String, message: String },
}

fn rejected(path: &str, message: impl ToString) -> InputError {
    InputError::Rejected { path: if path.is_empty() { "/".into() } else { path.to_string() }, message: message.to_string() }
}

fn from_sheaf_error(path: &str, e: SheafError) -> InputError {
    match e {
        SheafError::PresheafLawsViolated(_) | SheafError::Composition(_) => rejected(path, e),
        other => invalid(path, other),
    }
}

fn from_complex_error(path: &str, e: ComplexError) -> InputError {
    match e {
        ComplexError::NotAComplex { .. }
        | ComplexError::RowNotAComplex { .. }
        | ComplexError::AnticommutationFails { .. }
        | ComplexError::VerticalsNotAComplex { .. } => rejected(path, e),
        other => invalid(path, other),
    }
}

fn invalid(path: &str, message: impl ToString) -> InputError {
    InputError::Invalid { path: if path.is_empty() { "/".into() } else { path.to_string() }, message: message.to_string() }
}

fn child(path: &str, key: impl std::fmt::Display) -> String {
    format!("{path}/{key}")
}

/// Reads and parses a JSON file.
pub fn read_json(file: &Path) -> Result<Value, InputError> {
    let text = std::fs::read_to_string(file).map_err(|e| InputError::Read { file: file.display().to_string(), message: e.to_string() })?;
    parse_json(&file.display().to_string(), &text)
}

/// Parses JSON text, reporting line and column of syntax errors.
pub fn parse_json(name: &str, text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Syntax { file: name.to_string(), line: e.line(), column: e.column(), message: e.to_string() })
}

fn field_of<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, InputError> {
    v.get(key).ok_or_else(|| invalid(path, format!("missing field {key:?}")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, InputError> {
    v.as_u64().map(|u| u as usize).ok_or_else(|| invalid(path, "expected a nonnegative integer"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, InputError> {
    v.as_str().ok_or_else(|| invalid(path, "expected a string"))
}

fn as_strings(v: &Value, path: &str) -> Result<Vec<String>, InputError> {
    as_array(v, path)?.iter().enumerate().map(|(i, s)| as_str(s, &child(path, i)).map(str::to_string)).collect()
}

fn as_bigint(v: &Value, path: &str) -> Result<BigInt, InputError> {
    match v {
        Value::Number(n) => json_to_big(n).ok_or_else(|| invalid(path, "expected an integer")),
        Value::String(s) => BigInt::from_str(s).map_err(|_| invalid(path, "expected an integer")),
        _ => invalid_value(path, "expected an integer"),
    }
}

fn invalid_value<T>(path: &str, message: &str) -> Result<T, InputError> {
    Err(invalid(path, message))
}

fn as_rational(v: &Value, path: &str) -> Result<BigRational, InputError> {
    match v {
        Value::Number(_) => Ok(BigRational::from_integer(as_bigint(v, path)?)),
        Value::String(s) => BigRational::from_str(s.trim()).map_err(|_| invalid(path, "expected a rational like \"3/4\"")),
        _ => invalid_value(path, "expected a rational number"),
    }
}

/// `{"points": [...], "opens": [[...], ...]}`; the empty open is implied.
/// `{"named": "pseudocircle" | "sierpinski" | "one_point"}` is also accepted.
pub fn parse_space(v: &Value, path: &str) -> Result<FiniteSpace, InputError> {
    if let Some(name) = v.get("named") {
        return match as_str(name, &child(path, "named"))? {
            "pseudocircle" => Ok(FiniteSpace::pseudocircle()),
            "sierpinski" => Ok(FiniteSpace::sierpinski()),
            "one_point" => Ok(FiniteSpace::one_point()),
            other => Err(invalid(&child(path, "named"), format!("unknown space {other:?}"))),
        };
    }
    let points = as_strings(field_of(v, path, "points")?, &child(path, "points"))?;
    let opens_path = child(path, "opens");
    let opens = as_array(field_of(v, path, "opens")?, &opens_path)?
        .iter()
        .enumerate()
        .map(|(i, o)| as_strings(o, &child(&opens_path, i)))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteSpace::new(&points, &opens).map_err(|e| invalid(path, e))
}

/// JSON form of a space.
pub fn space_json(x: &FiniteSpace) -> Value {
    serde_json::to_value(x.to_file()).expect("space files serialize")
}

/// `{"rank": r, "torsion": [...]}`.
pub fn parse_group(v: &Value, path: &str) -> Result<FgAbGroup, InputError> {
    serde_json::from_value(v.clone()).map_err(|e| invalid(path, e))
}

pub fn group_json(g: &FgAbGroup) -> Value {
    serde_json::to_value(g).expect("groups serialize")
}

/// A group literal in its free-first generators, or `{"orders": [...]}`
/// for an explicit cyclic decomposition (`0` for `Z`).
pub fn parse_cyclic(v: &Value, path: &str) -> Result<CyclicSum, InputError> {
    if let Some(orders) = v.get("orders") {
        let p = child(path, "orders");
        let orders = as_array(orders, &p)?.iter().enumerate().map(|(i, o)| as_bigint(o, &child(&p, i))).collect::<Result<Vec<_>, _>>()?;
        return CyclicSum::new(orders).map_err(|e| invalid(path, e));
    }
    Ok(parse_group(v, path)?.to_cyclic())
}

fn parse_int_rows(v: &Value, path: &str, cols: usize) -> Result<IntMatrix, InputError> {
    let rows = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let rp = child(path, i);
            let row = as_array(r, &rp)?.iter().enumerate().map(|(j, e)| as_bigint(e, &child(&rp, j))).collect::<Result<Vec<_>, _>>()?;
            if row.len() != cols {
                return Err(invalid(&rp, format!("row has {} entries, expected {cols}", row.len())));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_big_rows(rows, cols))
}

/// `{"matrix": [[...]], "source": <group>, "target": <group>}`; rows are
/// target generators. Endpoints may be omitted when the context fixes them.
pub fn parse_map(v: &Value, path: &str, source: Option<&CyclicSum>, target: Option<&CyclicSum>) -> Result<GroupMap, InputError> {
    let endpoint = |key: &str, given: Option<&CyclicSum>| -> Result<CyclicSum, InputError> {
        match (v.get(key), given) {
            (Some(lit), Some(g)) => {
                let parsed = parse_cyclic(lit, &child(path, key))?;
                if parsed != *g {
                    return Err(invalid(&child(path, key), "does not match the value it should map from/to"));
                }
                Ok(parsed)
            }
            (Some(lit), None) => parse_cyclic(lit, &child(path, key)),
            (None, Some(g)) => Ok(g.clone()),
            (None, None) => Err(invalid(path, format!("missing field {key:?}"))),
        }
    };
    let s = endpoint("source", source)?;
    let t = endpoint("target", target)?;
    if v.as_str() == Some("identity") {
        return if s == t { Ok(GroupMap::identity(&s)) } else { Err(invalid(path, "identity between different groups")) };
    }
    let matrix = parse_int_rows(field_of(v, path, "matrix")?, &child(path, "matrix"), s.ngens())?;
    if matrix.nrows() != t.ngens() {
        return Err(invalid(&child(path, "matrix"), format!("{} rows for a target with {} generators", matrix.nrows(), t.ngens())));
    }
    GroupMap::new(s, t, matrix).map_err(|e| invalid(path, e))
}

pub fn map_json(g: &GroupMap) -> Value {
    let orders = |c: &CyclicSum| serde_json::json!({ "orders": c.orders().iter().map(big_to_json).collect::<Vec<_>>() });
    let rows: Vec<Vec<serde_json::Number>> = g.matrix().to_rows().iter().map(|r| r.iter().map(big_to_json).collect()).collect();
    serde_json::json!({ "source": orders(g.source()), "target": orders(g.target()), "matrix": rows })
}

fn element_table(v: &Value, path: &str, elements: &[String]) -> Result<Vec<Vec<usize>>, InputError> {
    let n = elements.len();
    let rows = as_array(v, path)?;
    if rows.len() != n {
        return Err(invalid(path, format!("{} rows, expected {n}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let rp = child(path, i);
            let row = as_array(r, &rp)?;
            if row.len() != n {
                return Err(invalid(&rp, format!("{} entries, expected {n}", row.len())));
            }
            row.iter()
                .enumerate()
                .map(|(j, e)| {
                    let ep = child(&rp, j);
                    match e {
                        Value::String(s) => elements.iter().position(|x| x == s).ok_or_else(|| invalid(&ep, format!("unknown element {s:?}"))),
                        _ => as_usize(e, &ep).and_then(|k| if k < n { Ok(k) } else { Err(invalid(&ep, "index out of range")) }),
                    }
                })
                .collect()
        })
        .collect()
}

/// `{"elements": [...], "add": [[...]], "mul": [[...]]}` with entries given
/// as labels or indices, `{"zmod": n}`, or `{"product": [<ring>, ...]}`.
pub fn parse_ring(v: &Value, path: &str, bound: usize) -> Result<FiniteRing, InputError> {
    if let Some(n) = v.get("zmod") {
        let n = as_usize(n, &child(path, "zmod"))?;
        if n > bound {
            return Err(invalid(path, format!("Z/{n} exceeds the element bound {bound}")));
        }
        return FiniteRing::zmod(n).map_err(|e| invalid(path, e));
    }
    if let Some(fs) = v.get("product") {
        let p = child(path, "product");
        let factors = as_array(fs, &p)?.iter().enumerate().map(|(i, f)| parse_ring(f, &child(&p, i), bound)).collect::<Result<Vec<_>, _>>()?;
        let refs: Vec<&FiniteRing> = factors.iter().collect();
        return FiniteRing::product(&refs, bound).map_err(|e| invalid(path, e));
    }
    let elements = as_strings(field_of(v, path, "elements")?, &child(path, "elements"))?;
    if elements.len() > bound {
        return Err(invalid(path, format!("{} elements exceed the bound {bound}", elements.len())));
    }
    let add = element_table(field_of(v, path, "add")?, &child(path, "add"), &elements)?;
    let mul = element_table(field_of(v, path, "mul")?, &child(path, "mul"), &elements)?;
    FiniteRing::from_tables(elements, add, mul, false).map_err(|e| invalid(path, e))
}

pub fn ring_json(r: &FiniteRing) -> Value {
    serde_json::json!({ "elements": r.elements(), "add": r.add_table(), "mul": r.mul_table() })
}

/// Images of the source elements in order, as labels, or an object `label -> label`,
/// or `"identity"`.
pub fn parse_ring_map(v: &Value, path: &str, source: &FiniteRing, target: &FiniteRing) -> Result<RingHom, InputError> {
    let lookup = |label: &str, p: &str| target.element(label).map_err(|e| invalid(p, e));
    let table = match v {
        Value::String(s) if s == "identity" => (0..source.size()).map(|x| lookup(source.label(x), path)).collect::<Result<Vec<_>, _>>()?,
        Value::Array(items) => {
            if items.len() != source.size() {
                return Err(invalid(path, format!("{} images for {} elements", items.len(), source.size())));
            }
            items.iter().enumerate().map(|(i, e)| lookup(as_str(e, &child(path, i))?, &child(path, i))).collect::<Result<Vec<_>, _>>()?
        }
        Value::Object(map) => (0..source.size())
            .map(|x| {
                let l = source.label(x);
                let p = child(path, l);
                lookup(as_str(map.get(l).ok_or_else(|| invalid(path, format!("no image for {l:?}")))?, &p)?, &p)
            })
            .collect::<Result<Vec<_>, _>>()?,
        _ => return Err(invalid(path, "expected a list of images, an object, or \"identity\"")),
    };
    RingHom::new(source.clone(), target.clone(), table).map_err(|e| invalid(path, e))
}

/// `{"prime": q}` or `"Q"`.
pub fn parse_field(v: &Value, path: &str) -> Result<Field, InputError> {
    match v {
        Value::String(s) if s == "Q" => Ok(Field::Rationals),
        _ => {
            let q = as_usize(field_of(v, path, "prime")?, &child(path, "prime"))?;
            Field::prime(q as u64).map_err(|e| invalid(path, e))
        }
    }
}

fn parse_field_matrix(v: &Value, path: &str, field: Field, rows: usize, cols: usize) -> Result<FieldMatrix, InputError> {
    let mut m = FieldMatrix::zeros(field, rows, cols);
    let data = as_array(v, path)?;
    if data.len() != rows {
        return Err(invalid(path, format!("{} rows, expected {rows}", data.len())));
    }
    for (i, r) in data.iter().enumerate() {
        let rp = child(path, i);
        let row = as_array(r, &rp)?;
        if row.len() != cols {
            return Err(invalid(&rp, format!("{} entries, expected {cols}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            let ep = child(&rp, j);
            let q = as_rational(e, &ep)?;
            m.set(i, j, field.element(&q).ok_or_else(|| invalid(&ep, format!("{q} has no image in {field}")))?);
        }
    }
    Ok(m)
}

fn parse_carrier(tag: &str, v: &Value, path: &str, bound: usize) -> Result<Carrier, InputError> {
    match tag {
        "AbGroup" => Ok(Carrier::Group(parse_cyclic(v, path)?)),
        "Ring" => Ok(Carrier::Ring(parse_ring(v, path, bound)?)),
        "VectorSpace" => Ok(Carrier::Vector {
            field: parse_field(field_of(v, path, "field")?, &child(path, "field"))?,
            dim: as_usize(field_of(v, path, "dim")?, &child(path, "dim"))?,
        }),
        "Opaque" => Ok(Carrier::Opaque(as_str(v, path)?.to_string())),
        other => Err(invalid(path, format!("unknown tag {other:?}"))),
    }
}

/// `{"partitionable": true, "entries": [{"p": 1, "tag": "AbGroup", "carrier": <group>}, ...]}`.
pub fn parse_family(v: &Value, path: &str, bound: usize) -> Result<StructuredFamily, InputError> {
    let partitionable = v.get("partitionable").map_or(Ok(true), |b| b.as_bool().ok_or_else(|| invalid(&child(path, "partitionable"), "expected a boolean")))?;
    let ep = child(path, "entries");
    let entries = as_array(field_of(v, path, "entries")?, &ep)?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let p = child(&ep, i);
            let tag = as_str(field_of(e, &p, "tag")?, &child(&p, "tag"))?;
            Ok(Entry {
                p: e.get("p").map_or(Ok(i + 1), |v| as_usize(v, &child(&p, "p")))?,
                carrier: parse_carrier(tag, field_of(e, &p, "carrier")?, &child(&p, "carrier"), bound)?,
            })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    StructuredFamily::new(entries, partitionable).map_err(|e| invalid(path, e))
}

fn parse_component(v: &Value, path: &str, source: &Carrier, target: &Carrier) -> Result<Component, InputError> {
    if v.as_str() == Some("identity") {
        return if source == target { Ok(Component::identity(source)) } else { Err(invalid(path, "identity between different carriers")) };
    }
    match (source, target) {
        (Carrier::Group(s), Carrier::Group(t)) => Ok(Component::Group(parse_map(v, path, Some(s), Some(t))?)),
        (Carrier::Ring(s), Carrier::Ring(t)) => Ok(Component::Ring(parse_ring_map(v, path, s, t)?)),
        (Carrier::Vector { field, dim: ds }, Carrier::Vector { dim: dt, .. }) => {
            Ok(Component::Linear(parse_field_matrix(field_of(v, path, "matrix")?, &child(path, "matrix"), *field, *dt, *ds)?))
        }
        _ => Err(invalid(path, "component does not fit the carriers")),
    }
}

/// `{"alignment": [[p, q], ...], "components": [...]}`; both default to identities.
pub fn parse_structured_hom(v: &Value, path: &str, source: &StructuredFamily, target: &StructuredFamily) -> Result<StructuredHom, InputError> {
    let alignment = match v.get("alignment") {
        None => Alignment::identity(source.len()),
        Some(a) => {
            let ap = child(path, "alignment");
            let pairs = as_array(a, &ap)?
                .iter()
                .enumerate()
                .map(|(i, pair)| {
                    let pp = child(&ap, i);
                    let pr = as_array(pair, &pp)?;
                    if pr.len() != 2 {
                        return Err(invalid(&pp, "expected a pair [p, q]"));
                    }
                    Ok((as_usize(&pr[0], &pp)?, as_usize(&pr[1], &pp)?))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Alignment::from_pairs(&pairs).map_err(|e| invalid(&ap, e))?
        }
    };
    let carriers = |p: usize| -> Result<(&Carrier, &Carrier), InputError> {
        let s = &source.entry(p).ok_or_else(|| invalid(path, format!("no entry {p}")))?.carrier;
        let t = &target.entry(alignment.apply(p)).ok_or_else(|| invalid(path, format!("no entry {}", alignment.apply(p))))?.carrier;
        Ok((s, t))
    };
    let components = match v.get("components") {
        None => (1..=source.len())
            .map(|p| {
                let (s, t) = carriers(p)?;
                if s == t {
                    Ok(Component::identity(s))
                } else {
                    Err(invalid(path, format!("entry {p} changes, so its component must be given")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(cs) => {
            let cp = child(path, "components");
            as_array(cs, &cp)?
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let (s, t) = carriers(i + 1)?;
                    parse_component(c, &child(&cp, i), s, t)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    StructuredHom::new(source.clone(), target.clone(), alignment, components).map_err(|e| invalid(path, e))
}

/// A presheaf file in one of its value kinds.
#[derive(Clone, Debug)]
pub enum PresheafInput {
    AbGroup(Presheaf<GroupMap>),
    Ring(Presheaf<RingHom>),
    Structured(Presheaf<StructuredHom>),
}

impl PresheafInput {
    pub fn kind(&self) -> &'static str {
        match self {
            PresheafInput::AbGroup(_) => "AbGroup",
            PresheafInput::Ring(_) => "Ring",
            PresheafInput::Structured(_) => "Structured",
        }
    }
}

/// Parses `U<=V` restriction keys.
fn parse_restriction_key(x: &FiniteSpace, key: &str, path: &str) -> Result<(usize, usize), InputError> {
    let (u, v) = key.split_once("<=").ok_or_else(|| invalid(path, "restriction keys look like \"a<=a|b\""))?;
    let open = |k: &str| -> Result<usize, InputError> {
        let s = x.parse_set_key(k).map_err(|e| invalid(path, e))?;
        x.open_index(s).ok_or_else(|| invalid(path, format!("{k:?} is not open")))
    };
    Ok((open(u)?, open(v)?))
}

fn build<A: crate::sheaf::Arrow>(
    x: &FiniteSpace,
    v: &Value,
    path: &str,
    value: &dyn Fn(&Value, &str) -> Result<A::Object, InputError>,
    arrow: &dyn Fn(&Value, &str, &A::Object, &A::Object) -> Result<A, InputError>,
) -> Result<Presheaf<A>, InputError> {
    if let Some(c) = v.get("constant") {
        return Ok(Presheaf::constant(x.clone(), value(c, &child(path, "constant"))?));
    }
    let vp = child(path, "values");
    let vals = field_of(v, path, "values")?.as_object().ok_or_else(|| invalid(&vp, "expected an object keyed by opens"))?;
    let mut values = Vec::with_capacity(x.nopens());
    for (i, &open) in x.opens().iter().enumerate() {
        let key = x.set_key(open);
        match vals.get(&key) {
            Some(lit) => values.push(value(lit, &child(&vp, &key))?),
            None if i == 0 => values.push(value(vals.values().next().ok_or_else(|| invalid(&vp, "no values"))?, &vp)?),
            None => return Err(invalid(&vp, format!("no value for open {key:?}"))),
        }
    }
    for key in vals.keys() {
        let s = x.parse_set_key(key).map_err(|e| invalid(&child(&vp, key), e))?;
        if x.open_index(s).is_none() {
            return Err(invalid(&child(&vp, key), "not an open set"));
        }
    }
    let mut given = BTreeMap::new();
    if let Some(rs) = v.get("restrictions") {
        let rp = child(path, "restrictions");
        for (key, lit) in rs.as_object().ok_or_else(|| invalid(&rp, "expected an object keyed by \"U<=V\""))? {
            let kp = child(&rp, key);
            let (u, w) = parse_restriction_key(x, key, &kp)?;
            if !x.opens()[u].is_subset(x.opens()[w]) {
                return Err(invalid(&kp, "not an inclusion of opens"));
            }
            if u == 0 {
                continue;
            }
            given.insert((u, w), arrow(lit, &kp, &values[w], &values[u])?);
        }
    }
    Presheaf::new(x.clone(), values, given).map_err(|e| from_sheaf_error(path, e))
}

/// `{"space": <space>, "kind": ..., "values": {...}, "restrictions": {...}}`.
///
/// Kinds: `AbGroup` (group literals and integer matrices), `Ring` (ring
/// literals and element maps), `RingFamily` (lists of rings, identity
/// alignment), `Structured` (family literals). `{"constant": <value>}`
/// replaces values and restrictions; for `AbGroup`,
/// `{"constant_sheaf": <group>}` gives locally constant functions.
/// `space` may be supplied separately.
pub fn parse_presheaf(v: &Value, path: &str, space: Option<&FiniteSpace>, bound: usize) -> Result<PresheafInput, InputError> {
    let x = match (v.get("space"), space) {
        (Some(s), None) => parse_space(s, &child(path, "space"))?,
        (None, Some(s)) => s.clone(),
        (Some(s), Some(given)) => {
            let inner = parse_space(s, &child(path, "space"))?;
            if &inner != given {
                return Err(invalid(&child(path, "space"), "differs from the space given separately"));
            }
            inner
        }
        (None, None) => return Err(invalid(path, "missing field \"space\"")),
    };
    let kind = v.get("kind").map_or(Ok("AbGroup"), |k| as_str(k, &child(path, "kind")))?;
    match kind {
        "AbGroup" => {
            if let Some(g) = v.get("constant_sheaf") {
                return Ok(PresheafInput::AbGroup(Presheaf::constant_sheaf(x, &parse_cyclic(g, &child(path, "constant_sheaf"))?)));
            }
            build::<GroupMap>(&x, v, path, &parse_cyclic, &|lit, p, s, t| parse_map(lit, p, Some(s), Some(t))).map(PresheafInput::AbGroup)
        }
        "Ring" => build::<RingHom>(&x, v, path, &|lit, p| parse_ring(lit, p, bound), &|lit, p, s, t| parse_ring_map(lit, p, s, t)).map(PresheafInput::Ring),
        "RingFamily" => {
            let family = |lit: &Value, p: &str| -> Result<StructuredFamily, InputError> {
                let rings = as_array(lit, p)?.iter().enumerate().map(|(i, r)| parse_ring(r, &child(p, i), bound).map(Carrier::Ring)).collect::<Result<Vec<_>, _>>()?;
                StructuredFamily::from_carriers(rings, true).map_err(|e| invalid(p, e))
            };
            let hom = |lit: &Value, p: &str, s: &StructuredFamily, t: &StructuredFamily| -> Result<StructuredHom, InputError> {
                if lit.as_str() == Some("identity") {
                    return parse_structured_hom(&serde_json::json!({}), p, s, t);
                }
                parse_structured_hom(&serde_json::json!({ "components": lit }), p, s, t)
            };
            build::<StructuredHom>(&x, v, path, &family, &hom).map(PresheafInput::Structured)
        }
        "Structured" => build::<StructuredHom>(&x, v, path, &|lit, p| parse_family(lit, p, bound), &|lit, p, s, t| {
            if lit.as_str() == Some("identity") {
                return parse_structured_hom(&serde_json::json!({}), p, s, t);
            }
            parse_structured_hom(lit, p, s, t)
        })
        .map(PresheafInput::Structured),
        other => Err(invalid(&child(path, "kind"), format!("unknown kind {other:?}"))),
    }
}

/// `{"covers": [[<open>, ...], ...]}` or a bare list, coarse to fine; every
/// cover is of the whole space.
pub fn parse_covers(v: &Value, path: &str, x: &FiniteSpace) -> Result<Vec<Cover>, InputError> {
    let (list, lp) = match v.get("covers") {
        Some(c) => (c, child(path, "covers")),
        None => (v, path.to_string()),
    };
    as_array(list, &lp)?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let cp = child(&lp, i);
            let members = as_array(c, &cp)?
                .iter()
                .enumerate()
                .map(|(j, o)| {
                    let op = child(&cp, j);
                    x.set_from_labels(&as_strings(o, &op)?).map_err(|e| invalid(&op, e))
                })
                .collect::<Result<Vec<PointSet>, _>>()?;
            Cover::new(x, x.full(), members).map_err(|e| invalid(&cp, e))
        })
        .collect()
}

/// `{"field": {"prime": q} | "Q", "dim": d, "mul": c[i][j][k], "one": [...]}`.
pub fn parse_algebra(v: &Value, path: &str) -> Result<FiniteDimAlgebra, InputError> {
    let field = parse_field(field_of(v, path, "field")?, &child(path, "field"))?;
    let dim = as_usize(field_of(v, path, "dim")?, &child(path, "dim"))?;
    let mp = child(path, "mul");
    let mul = as_array(field_of(v, path, "mul")?, &mp)?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let ap = child(&mp, i);
            as_array(a, &ap)?
                .iter()
                .enumerate()
                .map(|(j, b)| {
                    let bp = child(&ap, j);
                    as_array(b, &bp)?.iter().enumerate().map(|(k, e)| as_rational(e, &child(&bp, k))).collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let op = child(path, "one");
    let one = as_array(field_of(v, path, "one")?, &op)?.iter().enumerate().map(|(i, e)| as_rational(e, &child(&op, i))).collect::<Result<Vec<_>, _>>()?;
    if one.len() != dim {
        return Err(invalid(&op, format!("unit has {} coordinates, expected {dim}", one.len())));
    }
    FiniteDimAlgebra::new(field, mul, one).map_err(|e| invalid(path, e))
}

/// `{"base": <space>, "m": 2, "ranks": {"a": [1, 0], ...}, "field": "R"}`.
pub fn parse_bundle(v: &Value, path: &str) -> Result<BundleModel, InputError> {
    let base = parse_space(field_of(v, path, "base")?, &child(path, "base"))?;
    let m = as_usize(field_of(v, path, "m")?, &child(path, "m"))?;
    let field = v.get("field").map_or(Ok("R"), |f| as_str(f, &child(path, "field")))?;
    let rp = child(path, "ranks");
    let ranks = field_of(v, path, "ranks")?
        .as_object()
        .ok_or_else(|| invalid(&rp, "expected an object keyed by points"))?
        .iter()
        .map(|(k, r)| {
            let kp = child(&rp, k);
            let rs = as_array(r, &kp)?.iter().enumerate().map(|(i, e)| as_usize(e, &child(&kp, i)).map(|u| u as u64)).collect::<Result<Vec<_>, _>>()?;
            Ok((k.clone(), rs))
        })
        .collect::<Result<BTreeMap<_, _>, InputError>>()?;
    validate_bundle(&base, field, m, &ranks).map_err(|e| invalid(path, e))
}

/// `{"elements": [...], "op": [[...]]}` for a finite table, or
/// `{"dim": d, "generators": [[...], ...]}` for a submonoid of `N^d`.
pub fn parse_monoid(v: &Value, path: &str, bound: usize) -> Result<AbelianMonoid, InputError> {
    if let Some(gens) = v.get("generators") {
        let dim = as_usize(field_of(v, path, "dim")?, &child(path, "dim"))?;
        let gp = child(path, "generators");
        let generators = as_array(gens, &gp)?
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let p = child(&gp, i);
                as_array(g, &p)?.iter().enumerate().map(|(j, e)| as_usize(e, &child(&p, j)).map(|u| u as u64)).collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(AbelianMonoid::Affine { dim, generators });
    }
    let elements = as_strings(field_of(v, path, "elements")?, &child(path, "elements"))?;
    if elements.len() > bound {
        return Err(invalid(path, format!("{} elements exceed the bound {bound}", elements.len())));
    }
    let op = element_table(field_of(v, path, "op")?, &child(path, "op"), &elements)?;
    MonoidTable::new(elements, op).map(AbelianMonoid::Table).map_err(|e| invalid(path, e))
}

/// `{"groups": [<group>, ...], "differentials": [<map>, ...]}`.
pub fn parse_complex(v: &Value, path: &str) -> Result<CochainComplex<GroupMap>, InputError> {
    let gp = child(path, "groups");
    let groups = as_array(field_of(v, path, "groups")?, &gp)?.iter().enumerate().map(|(i, g)| parse_cyclic(g, &child(&gp, i))).collect::<Result<Vec<_>, _>>()?;
    let dp = child(path, "differentials");
    let empty = Vec::new();
    let ds = v.get("differentials").map_or(Ok(&empty), |d| as_array(d, &dp))?;
    if ds.len() + 1 != groups.len() {
        return Err(invalid(&dp, format!("{} differentials for {} groups", ds.len(), groups.len())));
    }
    let diffs = ds.iter().enumerate().map(|(n, d)| parse_map(d, &child(&dp, n), Some(&groups[n]), Some(&groups[n + 1]))).collect::<Result<Vec<_>, _>>()?;
    CochainComplex::new(groups, diffs).map_err(|e| from_complex_error(path, e))
}

/// `"trivial"`, a list of rows of maps (anticommuting), or
/// `{"convention": "anticommuting" | "commuting", "maps": [[...]]}`.
pub fn parse_verticals(v: &Value, path: &str, rows: &[CochainComplex<GroupMap>]) -> Result<Verticals<GroupMap>, InputError> {
    if v.as_str() == Some("trivial") {
        return Ok(Verticals::Trivial);
    }
    let (maps, commuting, mp) = match v {
        Value::Array(_) => (v, false, path.to_string()),
        _ => {
            let conv = as_str(field_of(v, path, "convention")?, &child(path, "convention"))?;
            let commuting = match conv {
                "anticommuting" => false,
                "commuting" => true,
                other => return Err(invalid(&child(path, "convention"), format!("unknown convention {other:?}"))),
            };
            (field_of(v, path, "maps")?, commuting, child(path, "maps"))
        }
    };
    let maps = as_array(maps, &mp)?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let rp = child(&mp, r);
            let (below, above) = (rows.get(r), rows.get(r + 1));
            let (Some(below), Some(above)) = (below, above) else {
                return Err(invalid(&rp, "more vertical rows than gaps between rows"));
            };
            as_array(row, &rp)?
                .iter()
                .enumerate()
                .map(|(c, m)| parse_map(m, &child(&rp, c), Some(&below.object(c)), Some(&above.object(c))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(if commuting { Verticals::Commuting(maps) } else { Verticals::Anticommuting(maps) })
}

/// `{"rows": [<complex>, ...], "verticals": ..., "max_degree": n}`.
pub fn parse_grid(v: &Value, path: &str) -> Result<(ComplexGrid<GroupMap>, usize), InputError> {
    let rp = child(path, "rows");
    let rows = as_array(field_of(v, path, "rows")?, &rp)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_complex(r, &child(&rp, i)))
        .collect::<Result<Vec<_>, _>>()?;
    let verticals = match v.get("verticals") {
        None => Verticals::Trivial,
        Some(vs) => parse_verticals(vs, &child(path, "verticals"), &rows)?,
    };
    let max = v.get("max_degree").map_or(Ok(2), |m| as_usize(m, &child(path, "max_degree")))?;
    Ok((assemble_grid(rows, verticals).map_err(|e| from_complex_error(path, e))?, max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_json("f.json", "{\n  \"points\": [\n}").unwrap_err();
        assert!(matches!(e, InputError::Syntax { line: 3, .. }));
    }

    #[test]
    fn space_and_presheaf() {
        let v = json!({
            "space": {"points": ["a", "b"], "opens": [["a"], ["a", "b"]]},
            "values": {"a": {"rank": 1}, "a|b": {"rank": 1}},
            "restrictions": {"a<=a|b": {"matrix": [[1]]}}
        });
        let PresheafInput::AbGroup(f) = parse_presheaf(&v, "", None, 64).unwrap() else { panic!() };
        assert!(f.is_sheaf().unwrap());
        let bad = json!({"space": v["space"], "values": {"a": {"rank": 1}}});
        let e = parse_presheaf(&bad, "", None, 64).unwrap_err();
        assert_eq!(e, invalid("/values", "no value for open \"a|b\""));
    }

    #[test]
    fn shorthand_constant_sheaf() {
        let v = json!({"space": {"named": "pseudocircle"}, "constant_sheaf": {"rank": 1}});
        let PresheafInput::AbGroup(f) = parse_presheaf(&v, "", None, 64).unwrap() else { panic!() };
        assert_eq!(f.global_sections().ngens(), 1);
    }

    #[test]
    fn rings_and_families() {
        let r = parse_ring(&json!({"product": [{"zmod": 4}, {"zmod": 3}]}), "", 64).unwrap();
        assert_eq!(r.size(), 12);
        let fam = parse_family(&json!({"entries": [{"p": 1, "tag": "Ring", "carrier": {"zmod": 2}}, {"p": 2, "tag": "AbGroup", "carrier": {"rank": 1}}]}), "", 64).unwrap();
        assert_eq!(fam.len(), 2);
        let e = parse_ring(&json!({"zmod": 100}), "/ring", 64).unwrap_err();
        assert!(matches!(e, InputError::Invalid { .. }));
    }

    #[test]
    fn group_round_trip() {
        let g = FgAbGroup::from_parts(2, &[2, 4]).unwrap();
        assert_eq!(parse_group(&group_json(&g), "").unwrap(), g);
    }

    #[test]
    fn algebra_literal() {
        let a = parse_algebra(&json!({"field": {"prime": 2}, "dim": 1, "mul": [[[1]]], "one": [1]}), "").unwrap();
        assert_eq!(a.dim(), 1);
        let q = parse_algebra(&json!({"field": "Q", "dim": 1, "mul": [[["1/1"]]], "one": ["1"]}), "").unwrap();
        assert_eq!(q.field(), Field::Rationals);
    }

    #[test]
    fn non_complex_is_rejected() {
        let v = json!({"groups": [{"rank": 1}, {"rank": 1}, {"rank": 1}], "differentials": [{"matrix": [[1]]}, {"matrix": [[1]]}]});
        assert!(matches!(parse_complex(&v, "").unwrap_err(), InputError::Rejected { .. }));
    }

    #[test]
    fn grid_literal() {
        let v = json!({"rows": [{"groups": [{"rank": 1}]}, {"groups": [{"rank": 1}]}], "verticals": "trivial", "max_degree": 1});
        let (g, max) = parse_grid(&v, "").unwrap();
        assert_eq!(g.total_cohomology(max).unwrap(), vec![FgAbGroup::free(1), FgAbGroup::free(1)]);
    }
}
