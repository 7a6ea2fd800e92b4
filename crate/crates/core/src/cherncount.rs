//! Monomial counts in the free algebra on the normalized tautological classes.
//!
//! In cohomological degree 2 the generators are `c_0(pt)`, `c_1(γ_i)` and
//! `c_2(1_S)`; in degree `2a >= 4` they are `c_{a-1}(pt)`, `c_a(D)`,
//! `c_a(γ_i)` and `c_{a+1}(1_S)`. `c_1(1_S)` and `c_1(D)` vanish after
//! normalization. A monomial has Chern weight `i` (sum of the subscripts) and
//! cohomological degree `i + j`; counting by `(i, j)` is done by direct
//! enumeration and shares no code with [`crate::qseries`].

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("InvalidRho: Picard number {0} is outside 1..=9")]
    InvalidRho(u32),
    #[error("InvalidDepth: m must be at least 1")]
    InvalidDepth,
    #[error("OutOfRange: i + j = {total} exceeds 2m = {limit}")]
    OutOfRange { total: u32, limit: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Generator {
    pub coh_degree: u32,
    pub chern_weight: u32,
    pub multiplicity: u32,
}

const fn gen(coh_degree: u32, chern_weight: u32, multiplicity: u32) -> Generator {
    Generator {
        coh_degree,
        chern_weight,
        multiplicity,
    }
}

/// Generators in cohomological degrees `2..=2m`, ordered by degree.
pub fn generator_set(rho: u32, m: u32) -> Result<Vec<Generator>, ChernError> {
    if !(1..=9).contains(&rho) {
        return Err(ChernError::InvalidRho(rho));
    }
    if m == 0 {
        return Err(ChernError::InvalidDepth);
    }
    let mut gens = vec![gen(2, 0, 1)];
    if rho > 1 {
        gens.push(gen(2, 1, rho - 1));
    }
    gens.push(gen(2, 2, 1));
    for a in 2..=m {
        gens.push(gen(2 * a, a - 1, 1));
        // c_a(D) together with the c_a(γ_i)
        gens.push(gen(2 * a, a, rho));
        gens.push(gen(2 * a, a + 1, 1));
    }
    Ok(gens)
}

/// A set of generators known to be complete up to cohomological degree `2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    m: u32,
    // one entry per distinguishable copy: (coh_degree, chern_weight)
    copies: Vec<(u32, u32)>,
}

impl GeneratorSet {
    pub fn new(rho: u32, m: u32) -> Result<Self, ChernError> {
        let gens = generator_set(rho, m)?;
        Ok(Self::from_generators(&gens, m))
    }

    pub fn from_generators(gens: &[Generator], m: u32) -> Self {
        let mut copies: Vec<(u32, u32)> = gens
            .iter()
            .flat_map(|g| {
                std::iter::repeat_n((g.coh_degree, g.chern_weight), g.multiplicity as usize)
            })
            .collect();
        copies.sort();
        Self { m, copies }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of monomials of Chern weight `i` and cohomological degree `i + j`.
    pub fn count_monomials(&self, i: u32, j: u32) -> Result<BigUint, ChernError> {
        let total = i + j;
        if total > 2 * self.m {
            return Err(ChernError::OutOfRange {
                total,
                limit: 2 * self.m,
            });
        }
        let mut counter = Counter::default();
        enumerate(&self.copies, 0, total, i, &mut counter);
        Ok(counter.finish())
    }
}

pub fn count_monomials(gens: &[Generator], m: u32, i: u32, j: u32) -> Result<BigUint, ChernError> {
    GeneratorSet::from_generators(gens, m).count_monomials(i, j)
}

// Exponent choices for copies[pos..] with the given remaining degree and weight.
fn enumerate(
    copies: &[(u32, u32)],
    pos: usize,
    degree_left: u32,
    weight_left: u32,
    counter: &mut Counter,
) {
    if degree_left == 0 {
        if weight_left == 0 {
            counter.bump();
        }
        return;
    }
    // copies are sorted by degree, so once one no longer fits none of the rest do
    let Some(&(deg, weight)) = copies.get(pos) else {
        return;
    };
    if deg > degree_left {
        return;
    }
    let mut e = 0;
    loop {
        let (d_used, w_used) = (e * deg, e * weight);
        if d_used > degree_left || w_used > weight_left {
            break;
        }
        enumerate(
            copies,
            pos + 1,
            degree_left - d_used,
            weight_left - w_used,
            counter,
        );
        e += 1;
    }
}

#[derive(Default)]
struct Counter {
    small: u64,
    big: BigUint,
}

impl Counter {
    fn bump(&mut self) {
        match self.small.checked_add(1) {
            Some(v) => self.small = v,
            None => {
                self.big += self.small;
                self.small = 1;
            }
        }
    }

    fn finish(self) -> BigUint {
        self.big + self.small
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernCell {
    pub i: u32,
    pub j: u32,
    pub count: BigUint,
    pub expected: num_bigint::BigInt,
}

impl ChernCell {
    pub fn ok(&self) -> bool {
        num_bigint::BigInt::from(self.count.clone()) == self.expected
    }
}

#[derive(Debug, Clone)]
pub struct ChernReport {
    pub rho: u32,
    pub m: u32,
    pub cells: Vec<ChernCell>,
}

impl ChernReport {
    pub fn all_ok(&self) -> bool {
        self.cells.iter().all(ChernCell::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ChernCell> {
        self.cells.iter().filter(|c| !c.ok())
    }
}

/// Compares monomial counts with `[H(q,t)]^{i,j}` for every `i + j <= 2m`.
pub fn verify_chern_vs_h(rho: u32, m: u32) -> Result<ChernReport, crate::Error> {
    let set = GeneratorSet::new(rho, m)?;
    let h = crate::genfun::h_series(rho, 2 * m)?;
    let mut cells = Vec::new();
    for (i, j, expected) in h.iter() {
        cells.push(ChernCell {
            i,
            j,
            count: set.count_monomials(i, j)?,
            expected: expected.clone(),
        });
    }
    Ok(ChernReport { rho, m, cells })
}

/// The Chern-count route as a BPS table for `(S, β)`: counts for `i + j <= N(β)`.
pub fn bps_table(
    s: &crate::surface::Surface,
    beta: &crate::surface::CurveClass,
) -> Result<crate::genfun::BpsTable, crate::Error> {
    let b = crate::bounds::compute(s, beta)?;
    let mut entries = std::collections::BTreeMap::new();
    if b.n >= 0 {
        let bound = b.n as u32;
        let set = GeneratorSet::new(s.rho() as u32, bound.div_ceil(2).max(1))?;
        for total in 0..=bound {
            for i in 0..=total {
                entries.insert((i, total - i), set.count_monomials(i, total - i)?.into());
            }
        }
    }
    Ok(crate::genfun::BpsTable {
        surface: s.kind(),
        beta: beta.clone(),
        bound: b.n,
        entries,
        route: crate::genfun::Route::ChernCount,
    })
}
