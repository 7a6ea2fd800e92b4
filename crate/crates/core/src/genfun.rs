//! Generating functions of the stable range and the lookups built on them.
//!
//! * `T(q)`: the stable Betti numbers of Hilbert schemes of points,
//! * `H(q,t)`: its two-variable refinement, whose coefficients are the
//!   refined BPS invariants in the stable range,
//! * `G(z,w)`: the full two-variable Göttsche series, `z` tracking
//!   cohomological degree and `w` the number of points.
//!
//! All three are [`ProductForm`]s in the two formal variables of
//! [`crate::qseries`]; `G` keeps its own variable roles and only meets `H`
//! through [`ProductForm::substitute_factorwise`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bounds::{self, BoundsError, StabilityBounds};
use crate::qseries::{BiSeries, Factor, ProductForm, SeriesError};
use crate::surface::{CurveClass, Surface, SurfaceKind};

/// Largest series cap accepted by the public entry points.
pub const MAX_CAP: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenfunError {
    #[error("InvalidRho: Picard number {0} is outside 1..=9")]
    InvalidRho(u32),
    #[error("CapTooLarge: requested cap {0} exceeds {MAX_CAP}")]
    CapTooLarge(u32),
    #[error("OutOfStableRange: {0}")]
    OutOfStableRange(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn check_rho(rho: u32) -> Result<(), GenfunError> {
    if !(1..=9).contains(&rho) {
        return Err(GenfunError::InvalidRho(rho));
    }
    Ok(())
}

pub fn check_cap(cap: u32) -> Result<(), GenfunError> {
    if cap > MAX_CAP {
        return Err(GenfunError::CapTooLarge(cap));
    }
    Ok(())
}

/// `T(q) = ∏_{i>=0} (1-q^{2i+2})^{-(ρ+1)} (1-q^{2i+4})^{-1}`, in the first variable.
pub fn t_form(rho: u32, cap: u32) -> Result<ProductForm, GenfunError> {
    check_rho(rho)?;
    let e = rho as i32;
    let mut factors = Vec::new();
    let mut i = 0;
    while 2 * i + 2 <= cap {
        factors.push(Factor::new(2 * i + 2, 0, -(e + 1)));
        factors.push(Factor::new(2 * i + 4, 0, -1));
        i += 1;
    }
    Ok(ProductForm::truncated(factors, cap)?)
}

/// `H(q,t) = (1-qt)^{-(ρ-1)} ∏_{i>=0} (1-(qt)^i q²)^{-1} (1-(qt)^{i+2})^{-ρ} (1-(qt)^i t²)^{-1}`.
pub fn h_form(rho: u32, cap: u32) -> Result<ProductForm, GenfunError> {
    check_rho(rho)?;
    let e = rho as i32;
    let mut factors = Vec::new();
    if rho > 1 {
        factors.push(Factor::new(1, 1, -(e - 1)));
    }
    let mut i = 0;
    while 2 * i + 2 <= cap {
        factors.push(Factor::new(i + 2, i, -1));
        factors.push(Factor::new(i + 2, i + 2, -e));
        factors.push(Factor::new(i, i + 2, -1));
        i += 1;
    }
    Ok(ProductForm::truncated(factors, cap)?)
}

/// `G(z,w) = ∏_{i>=1} (1-z^{2i-2}w^i)^{-1} (1-z^{2i}w^i)^{-ρ} (1-z^{2i+2}w^i)^{-1}`,
/// with `z` the first variable and `w` the second.
pub fn g_form(rho: u32, cap: u32) -> Result<ProductForm, GenfunError> {
    check_rho(rho)?;
    let e = rho as i32;
    let mut factors = Vec::new();
    let mut i = 1;
    while 3 * i - 2 <= cap {
        factors.push(Factor::new(2 * i - 2, i, -1));
        factors.push(Factor::new(2 * i, i, -e));
        factors.push(Factor::new(2 * i + 2, i, -1));
        i += 1;
    }
    Ok(ProductForm::truncated(factors, cap)?)
}

pub fn t_series(rho: u32, cap: u32) -> Result<BiSeries, GenfunError> {
    check_cap(cap)?;
    Ok(t_form(rho, cap)?.expand(cap)?)
}

pub fn h_series(rho: u32, cap: u32) -> Result<BiSeries, GenfunError> {
    check_cap(cap)?;
    Ok(h_form(rho, cap)?.expand(cap)?)
}

pub fn g_series(rho: u32, cap: u32) -> Result<BiSeries, GenfunError> {
    check_cap(cap)?;
    Ok(g_form(rho, cap)?.expand(cap)?)
}

/// `G·(1-w)/(1-z²)` after `z = t, w = q/t`, expanded to total degree `cap`.
pub fn substituted_g_series(rho: u32, cap: u32) -> Result<BiSeries, GenfunError> {
    check_cap(cap)?;
    let correction = ProductForm::finite(vec![Factor::new(0, 1, 1), Factor::new(2, 0, -1)])?;
    let form = g_form(rho, 2 * cap)?.times(&correction);
    Ok(form.substitute_factorwise()?.expand(cap)?)
}

/// `H/(1-qt)` expanded to total degree `cap`.
pub fn h_over_one_minus_qt(rho: u32, cap: u32) -> Result<BiSeries, GenfunError> {
    check_cap(cap)?;
    let extra = ProductForm::finite(vec![Factor::new(1, 1, -1)])?;
    Ok(h_form(rho, cap)?.times(&extra).expand(cap)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Formula,
    Extraction,
    ChernCount,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Formula => "formula",
            Route::Extraction => "extraction",
            Route::ChernCount => "chern-count",
        })
    }
}

/// Refined BPS invariants `n^{i,j}` of a class for `i + j <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpsTable {
    pub surface: SurfaceKind,
    pub beta: CurveClass,
    pub bound: i64,
    pub entries: BTreeMap<(u32, u32), BigInt>,
    pub route: Route,
}

impl BpsTable {
    pub fn get(&self, i: u32, j: u32) -> Option<&BigInt> {
        self.entries.get(&(i, j))
    }

    /// Checks the structural invariants of a table: exact support, nonnegative
    /// entries, the `n^{0,j}` parity pattern and `i <-> j` symmetry.
    pub fn check_structure(&self) -> Result<(), String> {
        let expected_len = if self.bound < 0 {
            0
        } else {
            let b = self.bound as usize;
            (b + 1) * (b + 2) / 2
        };
        if self.entries.len() != expected_len {
            return Err(format!(
                "{} entries, expected {expected_len}",
                self.entries.len()
            ));
        }
        for (&(i, j), n) in &self.entries {
            if i64::from(i + j) > self.bound {
                return Err(format!("entry ({i},{j}) beyond bound {}", self.bound));
            }
            if n.is_negative() {
                return Err(format!("negative entry at ({i},{j})"));
            }
            if i == 0 {
                let want = if j % 2 == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                if *n != want {
                    return Err(format!("n^(0,{j}) = {n}"));
                }
            }
            if self.entries.get(&(j, i)) != Some(n) {
                return Err(format!("asymmetric at ({i},{j})"));
            }
        }
        Ok(())
    }

    /// `Σ_i n^{i,k-i}`.
    pub fn diagonal_sum(&self, k: u32) -> BigInt {
        (0..=k).filter_map(|i| self.get(i, k - i)).sum()
    }
}

fn rho_of(s: &Surface) -> u32 {
    s.rho() as u32
}

fn stable_bounds(s: &Surface, beta: &CurveClass) -> Result<StabilityBounds, GenfunError> {
    Ok(bounds::compute(s, beta)?)
}

/// The formula route: `n^{i,j} = [H(q,t)]^{i,j}` for every `i + j <= N(β)`.
pub fn bps_table(s: &Surface, beta: &CurveClass) -> Result<BpsTable, GenfunError> {
    let b = stable_bounds(s, beta)?;
    bps_table_with_bound(s, beta, b.n)
}

pub(crate) fn bps_table_with_bound(
    s: &Surface,
    beta: &CurveClass,
    bound: i64,
) -> Result<BpsTable, GenfunError> {
    let mut entries = BTreeMap::new();
    if bound >= 0 {
        let cap = bound as u32;
        check_cap(cap)?;
        let h = h_series(rho_of(s), cap)?;
        for (i, j, c) in h.iter() {
            entries.insert((i, j), c.clone());
        }
    }
    Ok(BpsTable {
        surface: s.kind(),
        beta: beta.clone(),
        bound,
        entries,
        route: Route::Formula,
    })
}

pub fn refined_bps(s: &Surface, beta: &CurveClass, i: u32, j: u32) -> Result<BigInt, GenfunError> {
    let n = stable_bounds(s, beta)?.n;
    if i64::from(i + j) > n {
        return Err(GenfunError::OutOfStableRange(format!(
            "i + j = {} exceeds N(β) = {n}",
            i + j
        )));
    }
    let h = h_series(rho_of(s), i + j)?;
    Ok(h.coeff(i, j)?.clone())
}

/// `dim IH^k = [T(q)]^k` for `k <= N(β)`.
pub fn stable_ih_betti(s: &Surface, beta: &CurveClass, k: u32) -> Result<BigInt, GenfunError> {
    let n = stable_bounds(s, beta)?.n;
    if i64::from(k) > n {
        return Err(GenfunError::OutOfStableRange(format!(
            "k = {k} exceeds N(β) = {n}"
        )));
    }
    let t = t_series(rho_of(s), k)?;
    Ok(t.coeff(k, 0)?.clone())
}

/// `b_s(S^[n]) = [G(z,w)]^{s,n}`.
pub fn hilb_betti(s: &Surface, n: u32, degree: u32) -> Result<BigInt, GenfunError> {
    let g = g_series(rho_of(s), n + degree)?;
    Ok(g.coeff(degree, n)?.clone())
}

/// `b_0 .. b_max_degree` of `S^[n]`.
pub fn hilb_betti_row(s: &Surface, n: u32, max_degree: u32) -> Result<Vec<BigInt>, GenfunError> {
    let g = g_series(rho_of(s), n + max_degree)?;
    (0..=max_degree)
        .map(|d| Ok(g.coeff(d, n)?.clone()))
        .collect()
}

/// `dim C^[k] = dim|β| + k`.
pub fn relhilb_dim(s: &Surface, beta: &CurveClass, k: u32) -> i64 {
    s.dim_linear_system(beta) + i64::from(k)
}

/// `b_i(C^[k]) = b_i(S^[k] × P^{dim|β| - k})` in the range `i <= N₁`, `k <= N₂`, `k <= dim|β|`.
pub fn relhilb_betti(
    s: &Surface,
    beta: &CurveClass,
    k: u32,
    i: u32,
) -> Result<BigInt, GenfunError> {
    let b = stable_bounds(s, beta)?;
    let dim = s.dim_linear_system(beta);
    check_relhilb_range(&b, dim, k, i)?;
    let g = g_series(rho_of(s), k + i)?;
    Ok(relhilb_betti_from(&g, dim, k, i))
}

pub(crate) fn check_relhilb_range(
    b: &StabilityBounds,
    dim: i64,
    k: u32,
    i: u32,
) -> Result<(), GenfunError> {
    if b.n1 < bounds::Extended::Finite(i64::from(i)) {
        return Err(GenfunError::OutOfStableRange(format!(
            "degree {i} exceeds N₁ = {}",
            b.n1
        )));
    }
    if i64::from(k) > b.n2 {
        return Err(GenfunError::OutOfStableRange(format!(
            "k = {k} exceeds N₂ = {}",
            b.n2
        )));
    }
    if i64::from(k) > dim {
        return Err(GenfunError::OutOfStableRange(format!(
            "k = {k} exceeds dim|β| = {dim}"
        )));
    }
    Ok(())
}

// Betti numbers of a product with P^{dim - k}: sum over the hyperplane powers.
pub(crate) fn relhilb_betti_from(g: &BiSeries, dim: i64, k: u32, i: u32) -> BigInt {
    let fibre = dim - i64::from(k);
    let mut total = BigInt::zero();
    let mut j = 0i64;
    while j <= fibre && 2 * j <= i64::from(i) {
        let s = i - 2 * j as u32;
        if let Ok(c) = g.coeff(s, k) {
            total += c;
        }
        j += 1;
    }
    total
}
