//! Browser bindings: permutahedron constants, polygon realization and the
//! circle-to-hexagon simplicial approximation.
//!
//! Each export returns a JSON string; the plain functions underneath are
//! usable natively.

use cycleforge::permutahedron::{constants as perm_constants, RadialChart};
use cycleforge::realization::{
    build_pairings, enumerate_covering, verify_certificate, ColoredCycleInput, PairingPolicy,
};
use cycleforge::simplicial::{validate_pseudo_manifold, AbstractComplex, VertexColoring};
use cycleforge::sphere_maps::{dominate_via_permutahedron, FineData};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Realization runs in the page thread, so the atlas is capped.
const DEMO_BUDGET: usize = 200_000;

pub fn constants_json(n: usize) -> Result<String, String> {
    if n == 0 {
        return Err("n must be at least 1".into());
    }
    let c = perm_constants(n).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": n,
        "N": c.big_n.to_string(),
        "eps": c.eps,
        "eps_degrees": c.eps.to_degrees(),
        "rho": c.rho,
        "circumradius": c.circumradius,
        "inradius": c.facet_distance,
        "cos_eps": format!("{}/{}", c.cos_eps.0, c.cos_eps.1),
    })
    .to_string())
}

/// Realizes the `sides`-gon with alternating colors; `seed = None` uses the
/// canonical pairings.
pub fn realize_polygon_json(sides: usize, seed: Option<u64>) -> Result<String, String> {
    if sides < 4 || sides % 2 == 1 {
        return Err("the polygon needs an even number of sides, at least 4".into());
    }
    let z = validate_pseudo_manifold(AbstractComplex::cycle(sides), true).map_err(|e| e.to_string())?;
    let col = VertexColoring::new((0..sides).map(|i| (i % 2 + 1) as u8).collect(), 2).map_err(|e| e.to_string())?;
    let input = ColoredCycleInput::new(z, col).map_err(|e| e.to_string())?;
    let policy = seed.map_or(PairingPolicy::Canonical, PairingPolicy::Seeded);
    let fam = build_pairings(&input, policy).map_err(|e| e.to_string())?;
    let atlas = enumerate_covering(&input, &fam, DEMO_BUDGET);
    let cert = verify_certificate(&atlas, &input);
    Ok(json!({
        "sides": sides,
        "cells": cert.cells,
        "k": cert.k,
        "complete": cert.complete,
        "passed": cert.passed(),
        "checks": cert.checks,
    })
    .to_string())
}

/// Places the `m`-gon evenly on the circle, rotated by `rotation` radians,
/// and maps it onto the hexagon dual to the 2-dimensional permutahedron.
pub fn circle_phi_json(m: usize, rotation: f64) -> Result<String, String> {
    let chart = RadialChart::new(2).map_err(|e| e.to_string())?;
    if m < 3 {
        return Err("need at least 3 vertices".into());
    }
    let step = std::f64::consts::TAU / m as f64;
    let vectors: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let t = rotation + step * i as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let z = validate_pseudo_manifold(AbstractComplex::cycle(m), true).map_err(|e| e.to_string())?;
    let fine = FineData::new(z, vectors.clone(), chart.eps).map_err(|e| e.to_string())?;
    let p = dominate_via_permutahedron(&fine).map_err(|e| e.to_string())?;
    Ok(json!({
        "m": m,
        "eps": chart.eps,
        "points": vectors,
        "regions": p.phi.regions.iter().map(|w| w.colors()).collect::<Vec<_>>(),
        "phi_degree": p.phi.degree,
        "domination_degree": p.domination.degree,
        "m1": p.domination.m1,
        "m2": p.domination.m2,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn constants(n: usize) -> Result<String, JsValue> {
    constants_json(n).map_err(|e| JsValue::from_str(&e))
}

/// `seed < 0` selects canonical pairings.
#[wasm_bindgen]
pub fn realize_polygon(sides: usize, seed: f64) -> Result<String, JsValue> {
    let seed = (seed >= 0.0).then_some(seed as u64);
    realize_polygon_json(sides, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn circle_phi(m: usize, rotation: f64) -> Result<String, JsValue> {
    circle_phi_json(m, rotation).map_err(|e| JsValue::from_str(&e))
}
