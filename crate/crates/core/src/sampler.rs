//! Uniform candidate sets on the six triangular front geometries.
//!
//! A triangular front is the positive-orthant part of the unit `l_p` sphere
//! `sum f_i^p = 1`. Its inverted counterpart is the point reflection
//! `f = 1 - g` of a triangular sample `g`, which satisfies
//! `sum (1 - f_i)^p = 1` with `0 <= f_i <= 1`.
//!
//! Sphere samples follow the exponential-power construction: draw
//! `|x_i|` from the exponential power law `exp(-|x|^p)` and normalize by the
//! `p`-norm. `|x_i|^p` is Gamma(1/p, 1) distributed, so we draw
//! `g_i ~ Gamma(1/p, 1)` directly and return `s_i = (g_i / sum g)^(1/p)`,
//! which equals `|x_i| / ||x||_p`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::exec;
use crate::point::{PointSet, Seed};

/// Points per independently seeded generation block.
const BLOCK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontKind {
    LinearTriangular,
    ConvexTriangular,
    ConcaveTriangular,
    LinearInverted,
    ConvexInverted,
    ConcaveInverted,
}

impl FrontKind {
    pub const ALL: [FrontKind; 6] = [
        FrontKind::LinearTriangular,
        FrontKind::ConvexTriangular,
        FrontKind::ConcaveTriangular,
        FrontKind::LinearInverted,
        FrontKind::ConvexInverted,
        FrontKind::ConcaveInverted,
    ];

    /// Sphere exponent `p` and whether the sample is inverted.
    pub fn shape(self) -> (f64, bool) {
        match self {
            FrontKind::LinearTriangular => (1.0, false),
            FrontKind::ConvexTriangular => (0.5, false),
            FrontKind::ConcaveTriangular => (2.0, false),
            FrontKind::LinearInverted => (1.0, true),
            FrontKind::ConvexInverted => (2.0, true),
            FrontKind::ConcaveInverted => (0.5, true),
        }
    }

    pub fn is_inverted(self) -> bool {
        self.shape().1
    }

    /// Nadir point of the continuous front, which is all ones for every kind.
    pub fn true_nadir(self, m: usize) -> Vec<f64> {
        vec![1.0; m]
    }

    /// Residual of the defining equation at `f`: `sum h(f_i)^p - 1` with
    /// `h(f) = f` for triangular and `h(f) = 1 - f` for inverted kinds.
    pub fn residual(self, f: &[f64]) -> f64 {
        let (p, inverted) = self.shape();
        f.iter()
            .map(|&v| {
                let g = if inverted { 1.0 - v } else { v };
                g.powf(p)
            })
            .sum::<f64>()
            - 1.0
    }

    pub fn name(self) -> &'static str {
        match self {
            FrontKind::LinearTriangular => "linear-triangular",
            FrontKind::ConvexTriangular => "convex-triangular",
            FrontKind::ConcaveTriangular => "concave-triangular",
            FrontKind::LinearInverted => "linear-inverted",
            FrontKind::ConvexInverted => "convex-inverted",
            FrontKind::ConcaveInverted => "concave-inverted",
        }
    }
}

impl fmt::Display for FrontKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrontKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let kind = match key.as_str() {
            "lineartriangular" | "linear" => FrontKind::LinearTriangular,
            "convextriangular" | "convex" => FrontKind::ConvexTriangular,
            "concavetriangular" | "concave" => FrontKind::ConcaveTriangular,
            "linearinverted" | "linearinvertedtriangular" => FrontKind::LinearInverted,
            "convexinverted" | "convexinvertedtriangular" => FrontKind::ConvexInverted,
            "concaveinverted" | "concaveinvertedtriangular" => FrontKind::ConcaveInverted,
            _ => return Err(Error::InvalidParameter(format!("unknown front kind '{s}'"))),
        };
        Ok(kind)
    }
}

/// Declarative description of a sampled candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrontSpec {
    pub kind: FrontKind,
    pub m: usize,
    pub n: usize,
    pub seed: Seed,
}

fn check_args(m: usize, p: f64, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::TooFewObjectives(m));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sphere exponent must be positive, got {p}"
        )));
    }
    Ok(())
}

fn fill_block<R: Rng>(rng: &mut R, gamma: &Gamma<f64>, p: f64, out: &mut [f64], m: usize) {
    let inv_p = 1.0 / p;
    for row in out.chunks_exact_mut(m) {
        let total = loop {
            for v in row.iter_mut() {
                *v = gamma.sample(rng);
            }
            let t: f64 = row.iter().sum();
            if t > 0.0 {
                break t;
            }
        };
        for v in row.iter_mut() {
            let share = *v / total;
            *v = if p == 1.0 { share } else { share.powf(inv_p) };
        }
    }
}

/// `n` points on the positive part of the unit `l_p` sphere in `m`
/// dimensions, distributed as normalized exponential-power vectors.
///
/// Generation proceeds in fixed blocks, each with its own derived seed, so
/// the output does not depend on the number of worker threads.
pub fn sample_lp_sphere(m: usize, p: f64, n: usize, seed: Seed) -> Result<PointSet> {
    check_args(m, p, n)?;
    let gamma = Gamma::new(1.0 / p, 1.0)
        .map_err(|e| Error::InvalidParameter(format!("gamma shape: {e}")))?;
    let mut data = vec![0.0; n * m];
    let mut blocks: Vec<&mut [f64]> = data.chunks_mut(BLOCK * m).collect();
    exec::for_each_mut(&mut blocks, |b, block| {
        let mut rng = seed.derive_index("lp-sphere-block", b as u64).rng();
        fill_block(&mut rng, &gamma, p, block, m);
    });
    PointSet::new(m, data)
}

/// Samples the candidate set described by `spec`.
pub fn generate_front(spec: &FrontSpec) -> Result<PointSet> {
    let (p, inverted) = spec.kind.shape();
    let sphere = sample_lp_sphere(spec.m, p, spec.n, spec.seed)?;
    let set = if inverted {
        let data = sphere.into_flat().into_iter().map(|g| 1.0 - g).collect();
        PointSet::new(spec.m, data)?
    } else {
        sphere
    };
    Ok(set.with_label(format!(
        "{}-m{}-n{}-s{}",
        spec.kind, spec.m, spec.n, spec.seed.0
    )))
}
