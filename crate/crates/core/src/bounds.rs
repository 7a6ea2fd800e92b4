//! Stability bounds `N₁`, `N₂` and `N` of an ample class.
//!
//! `N₁(β) = 2·codim(|β| \ |β|°) - 2`, where the complement of the integral
//! locus is the union of the images of `|β₁| × |β₂| → |β|` over splittings
//! `β = β₁ + β₂` into nonzero effective classes. The addition map has finite
//! fibres, so each image has dimension `dim|β₁| + dim|β₂|`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::surface::{CurveClass, Surface, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("NotAmple: class {0} is not ample")]
    NotAmple(CurveClass),
    #[error("EmptyLinearSystem: dim|{0}| < 1")]
    EmptyLinearSystem(CurveClass),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// An integer or `+∞`. Orders with `Infinite` above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(i64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<i64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Extended::Infinite
    }

    pub fn min_with(self, v: i64) -> i64 {
        match self {
            Extended::Finite(x) => x.min(v),
            Extended::Infinite => v,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodimResult {
    pub value: Extended,
    /// A splitting realising the maximum, when one exists.
    pub witness: Option<(CurveClass, CurveClass)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityBounds {
    pub codim: CodimResult,
    pub n1: Extended,
    pub n2: i64,
    pub n: i64,
}

fn check_ample(s: &Surface, beta: &CurveClass) -> Result<(), BoundsError> {
    s.check_dim(beta)?;
    if !s.is_ample(beta) {
        return Err(BoundsError::NotAmple(beta.clone()));
    }
    Ok(())
}

/// Codimension of the non-integral locus in `|β|`.
pub fn integral_complement_codim(
    s: &Surface,
    beta: &CurveClass,
) -> Result<CodimResult, BoundsError> {
    check_ample(s, beta)?;
    let dim = s.dim_linear_system(beta);
    if dim < 1 {
        return Err(BoundsError::EmptyLinearSystem(beta.clone()));
    }
    let best = best_splitting(s, beta);
    Ok(match best {
        Some((split_dim, b1, b2)) => CodimResult {
            value: Extended::Finite(dim - split_dim),
            witness: Some((b1, b2)),
        },
        None => CodimResult {
            value: Extended::Infinite,
            witness: None,
        },
    })
}

/// Maximum of `dim|β₁| + dim|β₂|` over unordered splittings into nonzero
/// effective classes, with the lexicographically first maximiser `β₁ <= β₂`.
pub fn best_splitting(s: &Surface, beta: &CurveClass) -> Option<(i64, CurveClass, CurveClass)> {
    let gens = s.nef_generators();
    let beta_deg = s.anticanonical_degree(beta);
    let mut best: Option<(i64, CurveClass, CurveClass)> = None;
    for_each_in_box(s, beta, |b1| {
        if b1.is_zero() {
            return;
        }
        let b2 = beta.sub(b1);
        if b2.is_zero() || b1 > &b2 {
            return;
        }
        // nonzero effective classes have positive anticanonical degree
        let d1 = s.anticanonical_degree(b1);
        if d1 < 1 || beta_deg - d1 < 1 {
            return;
        }
        debug_assert!(gens
            .iter()
            .all(|n| s.pair(b1, n) >= 0 && s.pair(&b2, n) >= 0));
        let h1 = s.h0(b1);
        if h1 == 0 {
            return;
        }
        let h2 = s.h0(&b2);
        if h2 == 0 {
            return;
        }
        let total = h1 as i64 - 1 + h2 as i64 - 1;
        let better = match &best {
            None => true,
            Some((v, c1, _)) => match total.cmp(v) {
                Ordering::Greater => true,
                Ordering::Equal => b1 < c1,
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((total, b1.clone(), b2));
        }
    });
    best
}

// Visits every class `b1` with `0 <= b1·N <= β·N` for each nef generator `N`.
// Effective summands of β satisfy these inequalities since effective·nef >= 0.
fn for_each_in_box<F: FnMut(&CurveClass)>(s: &Surface, beta: &CurveClass, mut visit: F) {
    let x = beta.coords();
    match s.kind() {
        crate::surface::SurfaceKind::ProjectivePlane => {
            for d in 0..=x[0] {
                visit(&CurveClass::new(vec![d]));
            }
        }
        crate::surface::SurfaceKind::QuadricProduct => {
            for a in 0..=x[0] {
                for b in 0..=x[1] {
                    visit(&CurveClass::new(vec![a, b]));
                }
            }
        }
        crate::surface::SurfaceKind::BlowUp(_) => {
            // b1·H = d1 ∈ [0, d]; b1·(H - E_i) = d1 - m1_i ∈ [0, d - m_i]
            let n = x.len() - 1;
            let mut c = vec![0i64; n + 1];
            for d1 in 0..=x[0] {
                c[0] = d1;
                let ranges: Vec<(i64, i64)> = (1..=n).map(|i| (d1 - (x[0] - x[i]), d1)).collect();
                if ranges.iter().any(|(lo, hi)| lo > hi) {
                    continue;
                }
                for (k, r) in ranges.iter().enumerate() {
                    c[k + 1] = r.0;
                }
                loop {
                    visit(&CurveClass::new(c.clone()));
                    let mut k = 0;
                    loop {
                        if k == n {
                            break;
                        }
                        c[k + 1] += 1;
                        if c[k + 1] <= ranges[k].1 {
                            break;
                        }
                        c[k + 1] = ranges[k].0;
                        k += 1;
                    }
                    if k == n {
                        break;
                    }
                }
            }
        }
    }
}

pub fn n1_from_codim(codim: Extended) -> Extended {
    match codim {
        Extended::Finite(c) => Extended::Finite(2 * c - 2),
        Extended::Infinite => Extended::Infinite,
    }
}

pub fn n1(s: &Surface, beta: &CurveClass) -> Result<Extended, BoundsError> {
    Ok(n1_from_codim(integral_complement_codim(s, beta)?.value))
}

pub fn n2(s: &Surface, beta: &CurveClass) -> Result<i64, BoundsError> {
    Ok(compute(s, beta)?.n2)
}

pub fn n_bound(s: &Surface, beta: &CurveClass) -> Result<i64, BoundsError> {
    Ok(compute(s, beta)?.n)
}

/// `N₁`, `N₂ = min{N₁, -β·K - 1}` and `N = min{N₂, β(β+K) + 2}` in one pass.
pub fn compute(s: &Surface, beta: &CurveClass) -> Result<StabilityBounds, BoundsError> {
    let codim = integral_complement_codim(s, beta)?;
    let n1 = n1_from_codim(codim.value);
    let n2 = n1.min_with(s.anticanonical_degree(beta) - 1);
    let n = n2.min(s.self_intersection(beta) + s.pair(beta, s.canonical()) + 2);
    Ok(StabilityBounds { codim, n1, n2, n })
}
