mod common;

use common::{naive_stabilize, random_config, random_pile};
use fractal_sandpile::graph::{build, triangle_chain};
use fractal_sandpile::sandpile::{stabilize, stabilize_random_order};
use fractal_sandpile::{Boundary, Family, FamilySpec, SinkedGraph};

fn graphs() -> Vec<(String, SinkedGraph)> {
    let mut out = Vec::new();
    for (family, boundary, levels) in [
        (Family::Sg, Boundary::CornerSinks, 1..=3u32),
        (Family::Sg, Boundary::CollapsedSink, 1..=3),
        (Family::Sgc, Boundary::CornerSinks, 1..=3),
        (Family::Sgc, Boundary::CornerCells, 2..=3),
        (Family::Hg, Boundary::CornerSinks, 1..=2),
        (Family::Pg, Boundary::CornerSinks, 1..=2),
        (Family::Mg, Boundary::CornerSinks, 1..=2),
    ] {
        for level in levels {
            let spec = FamilySpec::new(family, level, boundary);
            out.push((spec.to_string(), build(spec).unwrap()));
        }
    }
    for t in 1..=4 {
        out.push((format!("ring{t}"), triangle_chain(t).unwrap()));
    }
    out
}

#[test]
fn engine_matches_naive_single_topples() {
    for (name, g) in graphs() {
        for seed in 0..8 {
            let c = random_config(&g, seed, 12);
            let r = stabilize(&g, &c).unwrap();
            let (x, odo) = naive_stabilize(&g, &c);
            assert_eq!(r.config.as_slice(), &x[..], "{name} seed {seed}");
            assert_eq!(r.odometer.as_slice(), &odo[..], "{name} seed {seed}");
        }
    }
}

#[test]
fn random_orders_match_fifo() {
    for (name, g) in graphs() {
        let c = random_pile(&g, 3, 40 * g.n_vertices() as u64);
        let fifo = stabilize(&g, &c).unwrap();
        for seed in 0..3 {
            let r = stabilize_random_order(&g, &c, seed).unwrap();
            assert_eq!(r.config, fifo.config, "{name} seed {seed}");
            assert_eq!(r.odometer, fifo.odometer, "{name} seed {seed}");
            assert_eq!(r.absorbed, fifo.absorbed, "{name} seed {seed}");
        }
    }
}
