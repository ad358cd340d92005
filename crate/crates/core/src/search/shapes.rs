use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::maxpoly::{Atom, MaxPoly};

/// Template classes, in progressive order after `Constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    /// Cost exactly 1; never used for sizes.
    Constant,
    Additive,
    Linear,
    Simple,
    Quadratic,
    SimpleQuadratic,
}

impl Shape {
    pub const GROWING: [Shape; 5] = [
        Shape::Additive,
        Shape::Linear,
        Shape::Simple,
        Shape::Quadratic,
        Shape::SimpleQuadratic,
    ];

    fn rank(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Constant => "constant",
            Shape::Additive => "additive",
            Shape::Linear => "linear",
            Shape::Simple => "simple",
            Shape::Quadratic => "quadratic",
            Shape::SimpleQuadratic => "simple-quadratic",
        }
    }
}

/// A (cost shape, size shape) pair for every symbol of a stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Proposal {
    pub cost: Shape,
    pub size: Shape,
}

impl fmt::Display for Proposal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cost {} / size {}", self.cost.name(), self.size.name())
    }
}

/// All pairs ordered by their larger class, then size, then cost.
pub fn progressive_order() -> Vec<Proposal> {
    let mut out = Vec::new();
    for cost in Shape::GROWING {
        for size in Shape::GROWING {
            out.push(Proposal { cost, size });
        }
    }
    out.sort_by_key(|p| {
        (
            p.cost.rank().max(p.size.rank()),
            p.size.rank(),
            p.cost.rank(),
        )
    });
    out
}

pub fn all_proposals() -> Vec<Proposal> {
    let mut out = vec![Proposal {
        cost: Shape::Constant,
        size: Shape::Additive,
    }];
    out.extend(progressive_order());
    out
}

pub fn blind_order(seed: u64) -> Vec<Proposal> {
    let mut v = all_proposals();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v
}

/// One group of argument atoms per argument, tagged with the argument sort.
pub struct ArgAtoms<'a> {
    pub groups: &'a [(usize, Vec<Atom>)],
}

impl ArgAtoms<'_> {
    fn flat(&self) -> Vec<&Atom> {
        self.groups.iter().flat_map(|(_, g)| g.iter()).collect()
    }

    /// Same-component atoms of distinct arguments of the same sort.
    fn max_pairs(&self) -> Vec<(&Atom, &Atom)> {
        let mut out = Vec::new();
        for (i, (si, gi)) in self.groups.iter().enumerate() {
            for (sj, gj) in &self.groups[i + 1..] {
                if si != sj {
                    continue;
                }
                for (a, b) in gi.iter().zip(gj) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Base expressions whose parametric linear combination forms the template.
pub fn basis(shape: Shape, args: &ArgAtoms<'_>) -> Vec<MaxPoly> {
    let atoms = args.flat();
    let mut out = vec![MaxPoly::int(1)];
    if shape == Shape::Constant {
        return out;
    }
    out.extend(atoms.iter().map(|a| MaxPoly::atom((*a).clone())));
    let with_max = matches!(shape, Shape::Linear | Shape::SimpleQuadratic);
    let products = match shape {
        Shape::Simple => Some(false),
        Shape::Quadratic | Shape::SimpleQuadratic => Some(true),
        _ => None,
    };
    if let Some(squares) = products {
        for (i, a) in atoms.iter().enumerate() {
            let from = if squares { i } else { i + 1 };
            for b in &atoms[from..] {
                out.push(MaxPoly::atom((*a).clone()).mul(&MaxPoly::atom((*b).clone())));
            }
        }
    }
    if with_max {
        for (a, b) in args.max_pairs() {
            out.push(MaxPoly::atom(a.clone()).max_with(&MaxPoly::atom(b.clone())));
        }
    }
    out
}

/// `Σ p_i · basis_i` with parameters `<prefix>_<i>`.
pub fn template(shape: Shape, args: &ArgAtoms<'_>, prefix: &str) -> MaxPoly {
    if shape == Shape::Constant {
        return MaxPoly::int(1);
    }
    let terms: Vec<MaxPoly> = basis(shape, args)
        .into_iter()
        .enumerate()
        .map(|(i, b)| MaxPoly::param(format!("{prefix}_{i}")).mul(&b))
        .collect();
    MaxPoly::sum(&terms)
}
