//! Acceptance suite: nine criteria, one PASS/FAIL line each.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cycleforge::coxeter::{verify_section4, Poset};
use cycleforge::permutahedron::{constants, dual_complex, pi_projection, sparse_certificate, RadialChart};
use cycleforge::realization::{
    build_pairings, enumerate_covering, local_checks, verify_certificate, ColoredCycleInput, CoveringAtlas,
    PairingPolicy,
};
use cycleforge::simplicial::{
    chess_coloring, subdivide_oriented, validate_pseudo_manifold, AbstractComplex, SimplicialMap,
};
use cycleforge::small_cover::{induced_domination, real_moment_angle, small_cover, CharacteristicFunction, SimpleCell};
use cycleforge::sphere_maps::{construct_phi, FineData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn algebra_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    for i in 0..500u64 {
        let size = rng.gen_range(1..=6);
        let density = rng.gen_range(0.0..0.9);
        let p = Poset::random(size, density, &mut rng);
        let report = verify_section4(&p, 10, 12, i);
        checks += report.checks;
        if let Some(c) = report.counterexamples.first() {
            return Err(format!("poset {i}: {c:?}"));
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("500 posets, {checks} identity checks, 0 counterexamples, {:?}", start.elapsed()))
}

fn permutahedron_suite() -> Outcome {
    for n in 1..=5 {
        dual_complex(n).map_err(|e| format!("n={n}: {e}"))?;
    }
    for n in 1..=4 {
        let p = pi_projection(n).map_err(|e| format!("n={n}: {e}"))?;
        ensure(p.degree == 1, format!("deg π = {} at n={n}", p.degree))?;
        ensure(p.containment_ok, format!("containment fails at n={n}"))?;
    }
    let c2 = constants(2).map_err(|e| e.to_string())?;
    ensure((c2.eps - std::f64::consts::PI / 3.0).abs() <= 1e-12, format!("ε₂ = {}", c2.eps))?;
    ensure((c2.rho - (2.0 + 3f64.sqrt()).ln()).abs() <= 1e-12, format!("ρ₂ = {}", c2.rho))?;
    let mut worst = 0.0f64;
    for n in 1..=50 {
        let c = constants(n).map_err(|e| e.to_string())?;
        let cot = 1.0 / (c.eps / 2.0).tan();
        worst = worst.max((c.rho - cot.asinh()).abs());
    }
    ensure(worst <= 1e-9, format!("identity residual {worst:e}"))?;
    Ok(format!("iso n≤5, deg π = 1 n≤4, max |ρ − arsinh cot(ε/2)| = {worst:.1e}"))
}

fn sparseness_suite() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    let mut random = 0;
    for n in 1..=4 {
        let r = sparse_certificate(n, 10_000, n as u64).map_err(|e| e.to_string())?;
        ensure(r.violations.is_empty(), format!("n={n}: {:?}", r.violations.first()))?;
        ensure(r.passed(), format!("n={n}: facet distance or diameter bound fails"))?;
        pairs += r.vertex_pairs_checked;
        random += r.random_pairs_checked;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{pairs} vertex pairs, {random} random pairs, 0 violations, {:?}", start.elapsed()))
}

/// `Σ_faces (−1)^{dim} 2^{m−|face|}` over the faces of the polygon.
fn polygon_coset_count(m: u32) -> i64 {
    let body = 1i64 << m;
    let edges = m as i64 * (1i64 << (m - 1));
    let vertices = m as i64 * (1i64 << (m - 2));
    body - edges + vertices
}

fn small_cover_suite() -> Outcome {
    for m in 3..=8u32 {
        let cell = SimpleCell::new(AbstractComplex::cycle(m as usize));
        let r = real_moment_angle(&cell).map_err(|e| e.to_string())?;
        let oracle = polygon_coset_count(m);
        ensure(oracle == (1i64 << (m - 2)) * (4 - m as i64), "coset oracle disagrees with closed form")?;
        ensure(r.euler_characteristic() == oracle, format!("χ(R_{m}-gon) = {}", r.euler_characteristic()))?;
        ensure(r.local_check().is_empty(), format!("local check fails for m={m}"))?;
    }
    for n in 1..=4usize {
        let cell = SimpleCell::new(AbstractComplex::simplex_boundary(n));
        let r = real_moment_angle(&cell).map_err(|e| e.to_string())?;
        ensure(r.top_cells().len() == 1 << (n + 1), format!("R_Δ{n} has {} top cells", r.top_cells().len()))?;
        let sphere = if n % 2 == 0 { 2 } else { 0 };
        ensure(r.euler_characteristic() == sphere, format!("χ(R_Δ{n}) = {}", r.euler_characteristic()))?;
        ensure(r.local_check().is_empty(), format!("local check fails for Δ{n}"))?;
    }
    let square = SimpleCell::new(AbstractComplex::cycle(4));
    let lambda = CharacteristicFunction::from_rows(2, &[vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]);
    let torus = small_cover(&square, &lambda).map_err(|e| e.to_string())?;
    ensure(torus.euler_characteristic() == 0, format!("χ(torus) = {}", torus.euler_characteristic()))?;
    ensure(torus.local_check().is_empty(), "torus local check")?;
    Ok("polygons 3..8, simplices 1..4 and the square torus all match".into())
}

fn domination_suite() -> Outcome {
    let k1 = validate_pseudo_manifold(AbstractComplex::cycle(6), true).map_err(|e| e.to_string())?;
    let k2 = validate_pseudo_manifold(AbstractComplex::cycle(3), true).map_err(|e| e.to_string())?;
    let phi = SimplicialMap::new(k1.complex().clone(), k2.complex().clone(), (0..6).map(|i| i % 3).collect())
        .map_err(|e| e.to_string())?;
    let d = induced_domination(&phi, &k1, &k2).map_err(|e| e.to_string())?;
    ensure(d.cell_fiber_degree.abs() == 16, format!("fiber degree {}", d.cell_fiber_degree))?;
    ensure(d.degree.abs() == 16, format!("model degree {}", d.degree))?;
    let expected = (1i64 << (d.m1 - d.m2)) * d.map_degree;
    ensure(d.cell_fiber_degree == expected, format!("{} vs 2^(m1-m2)·deg φ = {expected}", d.cell_fiber_degree))?;
    for k in [
        AbstractComplex::cycle(4),
        AbstractComplex::cycle(5),
        AbstractComplex::simplex_boundary(2),
        AbstractComplex::simplex_boundary(3),
    ] {
        let pm = validate_pseudo_manifold(k.clone(), true).map_err(|e| e.to_string())?;
        let id = induced_domination(&SimplicialMap::identity(&k), &pm, &pm).map_err(|e| e.to_string())?;
        ensure(id.degree.abs() == 1 && id.cell_fiber_degree.abs() == 1, format!("identity degree {}", id.degree))?;
    }
    Ok(format!("6-cycle → 3-cycle degree {} (deg φ = {}), identities ±1", d.degree, d.map_degree))
}

/// Walks the 1-dimensional cover as a cycle and tracks the image vertex on
/// the polygon `0 → 1 → … → 2k−1 → 0`, counting net turns.
fn walk_winding(atlas: &CoveringAtlas, input: &ColoredCycleInput) -> Option<i64> {
    let m = &atlas.machine;
    let sides = input.simplex_count() as i64;
    let omegas = m.omegas();
    let exit_index = |color: u8| omegas.iter().position(|w| w.colors() == vec![color]).unwrap();
    let start_edge = input.simplex(m.a_at(atlas.state(0), input.base));
    let color_of = |v: usize| input.coloring.color(v);
    let mut pos = *start_edge.iter().find(|&&v| color_of(v) == 1)? as i64;
    let mut steps = 0i64;
    let mut cur = 0;
    let mut exit = 2u8;
    for _ in 0..atlas.len() {
        let edge = input.simplex(m.a_at(atlas.state(cur), input.base));
        if !edge.contains(&(pos as usize)) {
            return None;
        }
        let next = *edge.iter().find(|&&v| v as i64 != pos)? as i64;
        let delta = (next - pos).rem_euclid(sides);
        steps += if delta == 1 {
            1
        } else if delta == sides - 1 {
            -1
        } else {
            return None;
        };
        pos = next;
        cur = atlas.transition(cur, exit_index(exit))?;
        exit = 3 - exit;
    }
    (cur == 0 && steps % sides == 0).then_some(steps / sides)
}

fn realization_n1_suite() -> Outcome {
    let mut lines = Vec::new();
    for k in 2..=6usize {
        let start = Instant::now();
        let input = common::polygon_input(2 * k);
        let fam = build_pairings(&input, PairingPolicy::Canonical).map_err(|e| e.to_string())?;
        let atlas = enumerate_covering(&input, &fam, 1_000_000);
        ensure(atlas.complete, format!("{}-gon incomplete", 2 * k))?;
        let cert = verify_certificate(&atlas, &input);
        ensure(cert.passed(), format!("{}-gon: {:?}", 2 * k, cert.witnesses.first()))?;
        let mult = cert.cells / (2 * k);
        ensure(cert.cells.is_multiple_of(2 * k) && mult >= 1, format!("N = {} for the {}-gon", cert.cells, 2 * k))?;
        let winding = walk_winding(&atlas, &input).ok_or("walk did not close")?;
        ensure(winding.unsigned_abs() as usize == mult, format!("winding {winding} vs N/2k = {mult}"))?;
        within(start, Duration::from_secs(10))?;
        lines.push(format!("{}-gon N={} k={}", 2 * k, cert.cells, mult));
    }
    Ok(lines.join(", "))
}

fn realization_n2_suite() -> Outcome {
    let z = validate_pseudo_manifold(AbstractComplex::simplex_boundary(3), true).map_err(|e| e.to_string())?;
    let input = ColoredCycleInput::prepare(z, None, true).map_err(|e| e.to_string())?;
    ensure(input.simplex_count() == 24, "(∂Δ³)′ should have 24 triangles")?;
    let fam = build_pairings(&input, PairingPolicy::Canonical).map_err(|e| e.to_string())?;
    let atlas = enumerate_covering(&input, &fam, 1_000_000);
    if atlas.complete {
        let cert = verify_certificate(&atlas, &input);
        let c = &cert.checks;
        ensure(c.fiber_uniform, "fiber uniformity")?;
        ensure(c.parity_coherent, "parity coherence")?;
        ensure(c.well_defined, "type-face well-definedness")?;
        ensure(c.codim2_commute, "codim-2 commutation")?;
        ensure(c.projection_uniform, "projection fibers")?;
        ensure(cert.witnesses.is_empty(), format!("{:?}", cert.witnesses.first()))?;
        ensure(cert.cells.is_multiple_of(24) && cert.cells >= 24, format!("N = {}", cert.cells))?;
        Ok(format!("complete: N = {}, N/24 = {}", cert.cells, cert.cells / 24))
    } else {
        let bad = local_checks(&atlas, &input);
        ensure(bad.is_empty(), format!("{} local violations", bad.len()))?;
        Ok(format!("partial: {} states, 0 local violations", atlas.len()))
    }
}

fn chess_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut faces = 0;
    for trial in 0..100 {
        let n = 1 + trial % 3;
        let moves = rng.gen_range(0..6);
        let z = common::random_pseudo_manifold(n, moves, &mut rng);
        let (zs, sub) = subdivide_oriented(&z).map_err(|e| e.to_string())?;
        let chess = chess_coloring(&zs, &sub.coloring).map_err(|e| e.to_string())?;
        let tops = zs.complex().top_simplices();
        for tau in zs.complex().all_faces().into_iter().filter(|f| f.len() <= n) {
            let (mut white, mut black) = (0, 0);
            for (i, s) in tops.iter().enumerate() {
                if tau.iter().all(|v| s.binary_search(v).is_ok()) {
                    if chess.white[i] {
                        white += 1;
                    } else {
                        black += 1;
                    }
                }
            }
            ensure(white == black, format!("trial {trial}: face {tau:?} has {white} white, {black} black"))?;
            faces += 1;
        }
    }
    Ok(format!("100 pseudo-manifolds, {faces} lower faces balanced"))
}

fn sphere_suite() -> Outcome {
    use std::f64::consts::PI;
    let chart = RadialChart::new(2).map_err(|e| e.to_string())?;
    let z = validate_pseudo_manifold(AbstractComplex::cycle(12), true).map_err(|e| e.to_string())?;
    let place = |theta: f64| -> Vec<Vec<f64>> {
        (0..12).map(|i| vec![(theta + PI / 6.0 * i as f64).cos(), (theta + PI / 6.0 * i as f64).sin()]).collect()
    };
    let base = FineData::new(z.clone(), place(0.0), PI / 3.0).map_err(|e| e.to_string())?;
    let phi = construct_phi(&base, &chart).map_err(|e| e.to_string())?;
    ensure(phi.degree.abs() == 1, format!("degree {}", phi.degree))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100 {
        let theta = rng.gen_range(0.0..2.0 * PI);
        let placement = place(theta);
        let winding = common::polygon_winding(&z, &placement);
        let fine = FineData::new(z.clone(), placement, PI / 3.0).map_err(|e| e.to_string())?;
        let phi = construct_phi(&fine, &chart).map_err(|e| format!("rotation {trial} (θ = {theta}): {e}"))?;
        ensure(phi.degree == winding, format!("rotation {trial}: degree {} vs winding {winding}", phi.degree))?;
    }
    Ok(format!("base degree {}, 100 rotations agree with the angle-sweep winding", phi.degree))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("right-angled Coxeter algebra identities", algebra_suite),
        ("permutahedron dual complex, projection degree and constants", permutahedron_suite),
        ("exact sparseness inequality", sparseness_suite),
        ("small cover Euler characteristics and local structure", small_cover_suite),
        ("domination degree", domination_suite),
        ("realization of 2k-gons", realization_n1_suite),
        ("realization of the subdivided tetrahedron boundary", realization_n2_suite),
        ("chess coloring balance", chess_suite),
        ("fine map into the hexagon chart", sphere_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS: {name}: {detail} [{took:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL: {name}: {detail} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
