//! File formats. Polyhedra serialize as
//! `{"dim": n, "polytopes": [[["p/q", ...], ...], ...]}` with rationals as
//! `p/q` strings in lowest terms; compiled functions add the affine piece
//! per cell. Output is canonical, so identical inputs produce identical
//! bytes.

use num::{One, Signed};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{fmt_rat, parse_rat, Int, Point, Rat};
use crate::geom::{Polyhedron, Polytope};
use crate::pl::{AffinePiece, Cell, PLFunction};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoError {
    #[error("bad polyhedron/function file: {0}")]
    BadFormat(String),
}

fn bad<T>(msg: &str) -> Result<T, IoError> {
    Err(IoError::BadFormat(msg.to_string()))
}

fn point_to_json(p: &[Rat]) -> Value {
    Value::Array(p.iter().map(|c| Value::String(fmt_rat(c))).collect())
}

fn point_from_json(v: &Value, dim: usize) -> Result<Point, IoError> {
    let arr = v.as_array().ok_or_else(|| IoError::BadFormat("vertex must be an array".into()))?;
    if arr.len() != dim {
        return bad("vertex has wrong dimension");
    }
    let mut p = Vec::with_capacity(dim);
    for c in arr {
        let s = c.as_str().ok_or_else(|| IoError::BadFormat("coordinate must be a string".into()))?;
        let r = parse_rat(s).map_err(|e| IoError::BadFormat(e.to_string()))?;
        if r.is_negative() || r > Rat::one() {
            return bad("coordinate outside [0,1]");
        }
        p.push(r);
    }
    Ok(p)
}

pub fn polyhedron_to_json(p: &Polyhedron) -> Value {
    json!({
        "dim": p.dim(),
        "polytopes": p
            .polytopes()
            .iter()
            .map(|poly| Value::Array(poly.vertices().iter().map(|v| point_to_json(v)).collect()))
            .collect::<Vec<_>>(),
    })
}

pub fn polyhedron_from_json(v: &Value) -> Result<Polyhedron, IoError> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| IoError::BadFormat("missing dim".into()))? as usize;
    if dim == 0 {
        return bad("dim must be at least 1");
    }
    let polys = v
        .get("polytopes")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::BadFormat("missing polytopes".into()))?;
    let mut out = Vec::with_capacity(polys.len());
    for poly in polys {
        let verts = poly.as_array().ok_or_else(|| IoError::BadFormat("polytope must be an array".into()))?;
        if verts.is_empty() {
            return bad("polytope needs at least one vertex");
        }
        let pts = verts.iter().map(|w| point_from_json(w, dim)).collect::<Result<Vec<_>, _>>()?;
        out.push(Polytope::new(pts));
    }
    Ok(Polyhedron::new(dim, out))
}

fn int_to_json(i: &Int) -> Result<Value, IoError> {
    i64::try_from(i.clone())
        .map(|n| json!(n))
        .map_err(|_| IoError::BadFormat("coefficient out of i64 range".into()))
}

pub fn plfunction_to_json(f: &PLFunction) -> Result<Value, IoError> {
    let mut cells = Vec::with_capacity(f.cells().len());
    for c in f.cells() {
        cells.push(json!({
            "vertices": c.poly.vertices().iter().map(|v| point_to_json(v)).collect::<Vec<_>>(),
            "a": c.piece.a.iter().map(int_to_json).collect::<Result<Vec<_>, _>>()?,
            "b": int_to_json(&c.piece.b)?,
        }));
    }
    Ok(json!({ "dim": f.dim(), "cells": cells }))
}

pub fn plfunction_from_json(v: &Value) -> Result<PLFunction, IoError> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| IoError::BadFormat("missing dim".into()))? as usize;
    if dim == 0 {
        return bad("dim must be at least 1");
    }
    let cells = v
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::BadFormat("missing cells".into()))?;
    let mut out = Vec::with_capacity(cells.len());
    for c in cells {
        let verts = c
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| IoError::BadFormat("cell missing vertices".into()))?;
        let pts = verts.iter().map(|w| point_from_json(w, dim)).collect::<Result<Vec<_>, _>>()?;
        let a = c
            .get("a")
            .and_then(Value::as_array)
            .ok_or_else(|| IoError::BadFormat("cell missing a".into()))?
            .iter()
            .map(|x| x.as_i64().map(Int::from).ok_or_else(|| IoError::BadFormat("bad coefficient".into())))
            .collect::<Result<Vec<_>, _>>()?;
        if a.len() != dim {
            return bad("piece has wrong dimension");
        }
        let b = c
            .get("b")
            .and_then(Value::as_i64)
            .map(Int::from)
            .ok_or_else(|| IoError::BadFormat("cell missing b".into()))?;
        out.push(Cell { poly: Polytope::new(pts), piece: AffinePiece { a, b } });
    }
    Ok(PLFunction::new(dim, out))
}
