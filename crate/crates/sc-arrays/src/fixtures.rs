//! Built-in presentations and sweep scenarios.

use smallcancel::cayley::Region;
use smallcancel::presentation::{generate_family, parse_presentation};
use smallcancel::properarray::ProperArrayParams;
use smallcancel::rational::q;
use smallcancel::{Presentation, Result};

pub const COMMUTATOR: &str = "gens: a b\nlambda: 1/6\na b A B\n";

/// Three generators, one relator of length 10, longest piece 1.
pub const T10: &str = "gens: a b c\nlambda: 1/8\nc A B B c b c B a a\n";

/// Three generators, one relator of length 12, longest piece 1.
pub const T12: &str = "gens: a b c\nlambda: 1/8\nB B c c b A c A b a a c\n";

pub fn p8() -> Presentation {
    generate_family(7, q(1, 6))
}

/// `<x_0..x_k | (x_i x_{i+1})^18>`: a path-shaped letter graph of valency 2.
pub fn chain(k: usize) -> Presentation {
    let mut text = String::from("gens:");
    for i in 0..=k {
        text.push_str(&format!(" x{i}"));
    }
    text.push_str("\nlambda: 15/512\n");
    for i in 0..k {
        text.push_str(&format!("(x{i} x{})^18\n", i + 1));
    }
    parse_presentation(&text).expect("chain presentation parses")
}

/// A single relator source with small exponent `M`.
pub const SHORT_POWER: &str = "gens: x y\nlambda: 1/1000\n(x y)^17\n";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionSpec {
    PieceFree,
    Ball { radius: usize },
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub presentation: Presentation,
    pub region: RegionSpec,
    pub params: ProperArrayParams,
    /// Largest requested distance between the sampled `g` and `h`.
    pub max_dist: usize,
}

impl Scenario {
    pub fn build_region(&self, max_vertices: usize) -> Result<Region> {
        match self.region {
            RegionSpec::PieceFree => Region::piece_free(&self.presentation),
            RegionSpec::Ball { radius } => Region::ball(&self.presentation, radius, max_vertices),
        }
    }

    pub fn relaxed(&self) -> bool {
        self.params.relaxed
    }
}

/// Relaxed constants for the short-relator balls.
pub fn relaxed_params() -> ProperArrayParams {
    ProperArrayParams::relaxed(q(1, 8), q(1, 5), q(1, 4), q(2, 5), q(3, 10), q(1, 2)).expect("valid relaxed params")
}

fn paper(name: &str, text: &str, max_dist: usize) -> Scenario {
    Scenario {
        name: name.into(),
        presentation: parse_presentation(text).expect("fixture parses"),
        region: RegionSpec::PieceFree,
        params: ProperArrayParams::paper(),
        max_dist,
    }
}

/// Sweeps at the paper constants; all presentations are piece-free, so the
/// unbounded region backend applies.
pub fn paper_scenarios() -> Vec<Scenario> {
    vec![
        paper("free-rank-2", "gens: a b\nlambda: 1/33\n", 10),
        paper("cyclic-34", "gens: a\nlambda: 1/33\na^34\n", 17),
        paper("two-cyclic-34-35", "gens: a b\nlambda: 1/33\na^34\nb^35\n", 40),
        paper("power-ab-17", "gens: a b\nlambda: 1/33\n(a b)^17\n", 40),
        paper("cyclic-60-free", "gens: a b\nlambda: 1/33\na^60\n", 45),
    ]
}

/// Balls of short-relator presentations with genuine contour overlaps;
/// bounds are informational there.
pub fn relaxed_scenarios() -> Vec<Scenario> {
    let ball = |name: &str, text: &str| Scenario {
        name: name.into(),
        presentation: parse_presentation(text).expect("fixture parses"),
        region: RegionSpec::Ball { radius: 6 },
        params: relaxed_params(),
        max_dist: 5,
    };
    vec![ball("t10-ball", T10), ball("t12-ball", T12)]
}
