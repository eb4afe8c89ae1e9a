//! One test per acceptance criterion; each prints a single PASS/FAIL line.

mod common;

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use radlayer::bundle::{
    fiber_constancy_probe, sample_layered, truncated_polynomial_presentation, two_vertex_presentation,
};
use radlayer::construct::search_witness;
use radlayer::layering::{
    dominance_comparable, exceptional_pair, fixed_point_check, h0_generic, h1_generic, root_generators,
};
use radlayer::sampler::sample_seed;
use radlayer::{
    brute_force_layerings, components, dominance_leq, estimate_generic, fiber_dim, generic_socdim, rad_nonempty,
    root_decompose, sample_with_radlayering, tits_q, witness_any, witness_exceptional, DimVec3, EstimationReport,
    LayeringVector, LocalAlgebra, Matrix, PrimeField,
};

use common::*;

const SEED: u64 = 20_260_101;

fn report(id: u32, name: &str, failures: &[String], elapsed: Duration, limit: Duration) {
    let slow = elapsed > limit;
    let ok = failures.is_empty() && !slow;
    println!(
        "criterion {id} {name}: {} ({:.2} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for f in failures.iter().take(10) {
        println!("  {f}");
    }
    if slow {
        println!("  over the time limit");
    }
    assert!(ok, "criterion {id} failed");
}

fn dv(a: usize, b: usize, c: usize) -> DimVec3 {
    DimVec3::new(a, b, c)
}

fn alg(n: usize) -> LocalAlgebra<PrimeField> {
    LocalAlgebra::standard(&PrimeField::generic(), n).unwrap()
}

#[test]
fn criterion_01_component_tables() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for d in 0..=13 {
        let rep = components(2, d).unwrap();
        let listed: BTreeSet<DimVec3> = rep.entries.iter().filter(|e| !e.exceptional).map(|e| e.layering).collect();
        for v in DimVec3::with_total(d) {
            if passes_component_inequalities(2, v) != listed.contains(&v) {
                failures.push(format!("d={d}: {v} listed={}", listed.contains(&v)));
            }
        }
        for e in &rep.entries {
            if !fixed_point_check(2, e.layering).unwrap_or(false) {
                failures.push(format!("d={d}: {} is not a fixed point", e.layering));
            }
        }
    }
    for (d, expected) in [(7, [dv(2, 2, 3), dv(3, 3, 1)]), (13, [dv(3, 4, 6), dv(6, 5, 2)])] {
        let got: Vec<_> = components(2, d).unwrap().entries.iter().filter(|e| e.exceptional).map(|e| e.layering).collect();
        if got != expected {
            failures.push(format!("d={d}: exceptional entries {got:?}"));
        }
    }
    report(1, "component tables", &failures, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_02_existence_iff_construction() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 2..=3 {
        let a = alg(n);
        for total in 0..=12 {
            for d in DimVec3::with_total(total) {
                checked += 1;
                let predicate = rad_nonempty(n, d);
                let built = if predicate {
                    witness_any(&a, d, SEED, 100).map(|w| w.raddim() == d.to_layering()).unwrap_or(false)
                } else {
                    search_witness(&a, d, SEED, 100).is_ok()
                };
                if predicate != built {
                    failures.push(format!("n={n} {d}: predicate {predicate}, construction {built}"));
                }
            }
        }
    }
    println!("  {checked} triples checked");
    report(2, "existence iff construction", &failures, start.elapsed(), Duration::from_secs(120));
}

#[test]
fn criterion_03_brute_force_oracle() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for total in 1..=3 {
        let found = brute_force_layerings(2, total, 3, 10_000_000).unwrap();
        let predicate: BTreeSet<_> = DimVec3::with_total(total).filter(|&d| rad_nonempty(2, d)).collect();
        if found != predicate {
            failures.push(format!("total {total}: enumeration {found:?}, predicate {predicate:?}"));
        }
    }
    report(3, "brute-force layerings", &failures, start.elapsed(), Duration::from_secs(60));
}

fn non_component_layerings() -> Vec<(usize, DimVec3)> {
    vec![
        (2, dv(3, 5, 2)),
        (2, dv(10, 5, 1)),
        (2, dv(2, 3, 1)),
        (2, dv(8, 4, 1)),
        (2, dv(3, 3, 0)),
        (2, dv(5, 4, 1)),
        (3, dv(2, 4, 1)),
        (3, dv(3, 7, 2)),
        (3, dv(1, 3, 0)),
        (3, dv(4, 8, 2)),
    ]
}

fn generic_test_set() -> Vec<(usize, DimVec3)> {
    let mut set = Vec::new();
    for n in 2..=3 {
        for d in 0..=15 {
            set.extend(components(n, d).unwrap().entries.into_iter().map(|e| (n, e.layering)));
        }
    }
    set.extend(non_component_layerings());
    set
}

struct Estimates {
    reports: Vec<EstimationReport>,
    elapsed: Duration,
}

fn estimates() -> &'static Estimates {
    static CELL: OnceLock<Estimates> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let algs = [alg(2), alg(3)];
        let reports = generic_test_set()
            .into_iter()
            .map(|(n, d)| estimate_generic(&algs[n - 2], d, 200, SEED).unwrap())
            .collect();
        Estimates { reports, elapsed: start.elapsed() }
    })
}

#[test]
fn criterion_04_generic_socdim() {
    let mut failures = Vec::new();
    for (n, d) in non_component_layerings() {
        if !rad_nonempty(n, d) || h1_generic(n, d).unwrap() == 0 || components(n, d.total()).unwrap().entries.iter().any(|e| e.layering == d) {
            failures.push(format!("fixture n={n} {d} is not a nonempty non-component layering with h1 > 0"));
        }
    }
    let est = estimates();
    for r in &est.reports {
        let expected = generic_socdim(r.n, r.layering).ok();
        if r.socdim_min.is_none() || r.socdim_min != expected {
            failures.push(format!("n={} {}: min {:?}, closed form {:?}", r.n, r.layering, r.socdim_min, expected));
        }
        if r.attaining * 10 < r.samples * 9 {
            failures.push(format!("n={} {}: only {}/{} samples attain the minimum", r.n, r.layering, r.attaining, r.samples));
        }
    }
    println!("  {} layerings, 200 samples each", est.reports.len());
    report(4, "generic socle layering", &failures, est.elapsed, Duration::from_secs(300));
}

#[test]
fn criterion_05_generic_h_values() {
    let mut failures = Vec::new();
    let est = estimates();
    for r in &est.reports {
        let (h0, h1) = (h0_generic(r.n, r.layering).unwrap(), h1_generic(r.n, r.layering).unwrap());
        if (r.h0_min, r.h1_min) != (h0, h1) {
            failures.push(format!("n={} {}: minima ({},{}), closed forms ({h0},{h1})", r.n, r.layering, r.h0_min, r.h1_min));
        }
    }
    report(5, "generic h-values", &failures, est.elapsed, Duration::from_secs(300));
}

#[test]
fn criterion_06_fiber_dimensions() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let local_layerings = [
        (2, [dv(1, 2, 1), dv(2, 2, 3), dv(2, 3, 2), dv(3, 4, 2), dv(1, 1, 1)]),
        (3, [dv(1, 2, 1), dv(2, 3, 8), dv(2, 4, 3), dv(3, 3, 5), dv(1, 3, 2)]),
    ];
    for (n, layerings) in local_layerings {
        let a = alg(n);
        for d in layerings {
            let lower = LayeringVector::single(&[d.d1, d.d2]);
            let mut seen = BTreeSet::new();
            for i in 0..100 {
                let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(SEED, i));
                let mprime = sample_layered(a.presentation(), &lower, &mut rng, 200).unwrap();
                let got = fiber_dim(&mprime, &[d.d0]).unwrap();
                let oracle = fiber_kernel_oracle(&mprime, &[d.d0]);
                if got != oracle {
                    failures.push(format!("n={n} {d} sample {i}: formula {got}, kernel {oracle}"));
                }
                seen.insert(got);
            }
            let expected = local_fiber_formula(n, d);
            if seen != BTreeSet::from([expected]) {
                failures.push(format!("n={n} {d}: fiber dims {seen:?}, expected constant {expected}"));
            }
        }
    }

    let f3 = PrimeField::new(3).unwrap();
    let poly = Arc::new(truncated_polynomial_presentation(&f3).unwrap());
    let r = fiber_constancy_probe(&poly, &LayeringVector::single(&[1, 1, 1]), 500, SEED).unwrap();
    match &r.witness_pair {
        Some((p, q)) => println!(
            "  k[x,y]/(x³,y²): samples {} and {} have fiber dims {} and {}",
            p.sample, q.sample, p.fiber_dim, q.fiber_dim
        ),
        None => failures.push("k[x,y]/(x³,y²): no non-constancy witness in 500 samples".into()),
    }

    let two = Arc::new(two_vertex_presentation(&f3, "bab+bc2", 4).unwrap());
    let candidates = ["1,0;1,1;1,0;0,1", "1,0;1,1;2,0;0,1", "2,0;1,1;1,0;0,1", "1,0;0,1;1,0;0,1", "1,1;1,1;1,1;0,1"];
    let mut witness = None;
    let mut observed = Vec::new();
    for (k, layering) in candidates.iter().enumerate() {
        let l: LayeringVector = layering.parse().unwrap();
        match fiber_constancy_probe(&two, &l, 100, SEED + k as u64) {
            Ok(r) => {
                observed.push(format!("{layering}: {:?}", r.fiber_dims));
                if r.witness_pair.is_some() {
                    witness = Some(layering);
                    break;
                }
            }
            Err(e) => observed.push(format!("{layering}: {e}")),
        }
    }
    match witness {
        Some(l) => println!("  bab+bc²: non-constancy witness at layering {l}"),
        None => failures.push(format!("bab+bc²: no non-constancy witness in 500 samples; observed {}", observed.join(", "))),
    }
    report(6, "fiber dimensions", &failures, start.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_07_exceptional_witness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let w = witness_exceptional(&alg(2), 2).unwrap();
    if w.raddim() != dv(2, 2, 3).to_layering() {
        failures.push(format!("raddim {}", w.raddim()));
    }
    if w.socdim() != dv(3, 3, 1).to_layering() {
        failures.push(format!("socdim {}", w.socdim()));
    }
    let h = w.adapt_basis().h_invariants().unwrap();
    if h.h0 != 1 {
        failures.push(format!("h0 = {}", h.h0));
    }
    report(7, "exceptional witness", &failures, start.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_08_root_region() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=4 {
        if tits_q(n, 1, n) != 1 {
            failures.push(format!("q(1,{n}) = {}", tits_q(n, 1, n)));
        }
        let gens = root_generators(n);
        for d1 in 0..=40 {
            for d2 in 0..=40 {
                let valid = n * d2 <= (n * n - 1) * d1;
                match root_decompose(n, d1, d2) {
                    Ok(parts) => {
                        let sum = parts.iter().fold((0, 0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
                        if !valid || sum != (d1, d2) || !parts.iter().all(|p| gens.contains(p)) {
                            failures.push(format!("n={n} ({d1},{d2}): bad decomposition {parts:?}"));
                        }
                    }
                    Err(_) if valid => failures.push(format!("n={n} ({d1},{d2}): no decomposition")),
                    Err(_) => {}
                }
                if d1 <= 12 && d2 <= 12 && root_decompose(n, d1, d2).is_ok() != is_root_combination(n, d1, d2) {
                    failures.push(format!("n={n} ({d1},{d2}): disagrees with combination search"));
                }
            }
        }
    }
    report(8, "root region", &failures, start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_09_structural_properties() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let f = PrimeField::generic();
    let algs = [alg(2), alg(3)];
    let pool: Vec<(usize, DimVec3)> = (2..=3)
        .flat_map(|n| (0..=9).flat_map(DimVec3::with_total).filter(move |&d| rad_nonempty(n, d)).map(move |d| (n, d)))
        .collect();
    let mut previous: Option<LayeringVector> = None;
    for i in 0..1000 {
        let (n, d) = pool[i * 7919 % pool.len()];
        let s = sample_seed(SEED, i);
        let rep = sample_with_radlayering(&algs[n - 2], d, s, 100).unwrap();
        let (rad, soc) = (rep.raddim(), rep.socdim());
        let tag = format!("sample {i} n={n} {d}");
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let p = Matrix::random_invertible(&f, d.total(), &mut rng);
        let moved = rep.change_basis(&[p]).unwrap();
        if moved.raddim() != rad || moved.socdim() != soc {
            failures.push(format!("{tag}: layerings change under conjugation"));
        }
        for x in rep.arrow_matrices() {
            if x.rank() + x.kernel_basis().cols() != x.cols() {
                failures.push(format!("{tag}: rank-nullity"));
            }
        }
        let leq = |u: &LayeringVector, v: &LayeringVector| dominance_leq(u, v).unwrap();
        if !leq(&rad, &rad) || !leq(&soc, &soc) {
            failures.push(format!("{tag}: reflexivity"));
        }
        if leq(&rad, &soc) && leq(&soc, &rad) && rad != soc {
            failures.push(format!("{tag}: antisymmetry"));
        }
        let g = generic_socdim(n, d).ok().map(|g| g.to_layering());
        if let Some(g) = &g {
            if leq(g, &soc) && leq(&soc, &rad.reversed()) && !leq(g, &rad.reversed()) {
                failures.push(format!("{tag}: transitivity"));
            }
        }
        if let Some(prev) = &previous {
            if prev.totals() == rad.totals() && leq(prev, &rad) && leq(&rad, &soc) && !leq(prev, &soc) {
                failures.push(format!("{tag}: transitivity"));
            }
        }
        previous = Some(rad.clone());
        if !leq(&rad.reversed(), &soc) || !leq(&soc.reversed(), &rad) {
            failures.push(format!("{tag}: complement bound fails for raddim {rad}, socdim {soc}"));
        }
        let dual = rep.transpose_dual().unwrap();
        if dual.socdim() != rad || dual.raddim() != soc {
            failures.push(format!("{tag}: transpose does not swap the layerings"));
        }
        if dual.transpose_dual().unwrap() != rep {
            failures.push(format!("{tag}: transpose is not an involution"));
        }
    }
    report(9, "structural properties", &failures, start.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_10_theta_separation() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for d in [7, 13] {
        let rep = components(2, d).unwrap();
        let pairs = rep.theta_pairs();
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                let (p, q) = (&pairs[i], &pairs[j]);
                let rad_cmp = dominance_comparable(&p.rad, &q.rad).unwrap();
                let soc_cmp = dominance_comparable(&p.soc, &q.soc).unwrap();
                if p == q || p.comparable(q).unwrap() {
                    failures.push(format!(
                        "d={d}: ({},{}) vs ({},{}) comparable (rad {rad_cmp}, soc {soc_cmp})",
                        p.rad, p.soc, q.rad, q.soc
                    ));
                }
            }
        }
        let a = (d - 1) / 6 + 1;
        let (e1, e2) = exceptional_pair(2, a);
        if !rep.entries.iter().any(|e| e.layering == e1) || !rep.entries.iter().any(|e| e.layering == e2) {
            failures.push(format!("d={d}: exceptional pair missing"));
        }
    }
    report(10, "theta separation", &failures, start.elapsed(), Duration::from_secs(10));
}
