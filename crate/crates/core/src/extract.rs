//! Recovering refined BPS invariants from Betti numbers of relative Hilbert
//! schemes of points on the universal curve.
//!
//! The Betti numbers satisfy
//! `b_m(C^[k]) = Σ_{i+j<=k, j>=0} n^{i, m-i-2j}`, so
//! `b_m(C^[ℓ]) - b_m(C^[ℓ-1]) = Σ_{i<=ℓ} n^{i, m+i-2ℓ}`, whose `i = ℓ` term is
//! `n^{ℓ, m-ℓ}`. Solving for it level by level in `ℓ` recovers the table.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bounds;
use crate::genfun::{self, BpsTable, GenfunError, Route};
use crate::surface::{CurveClass, Surface};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("NegativeInvariant: n^({i},{j}) = {value} < 0; the Betti table is inconsistent")]
    NegativeInvariant { i: u32, j: u32, value: BigInt },
    #[error("IncompleteInput: missing b_{m}(C^[{k}])")]
    IncompleteInput { k: u32, m: u32 },
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Genfun(#[from] GenfunError),
}

/// Betti numbers `b_m(C^[k])` for `0 <= k <= k_max`, `0 <= m <= m_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiInput {
    k_max: u32,
    m_max: u32,
    table: BTreeMap<(u32, u32), BigInt>,
}

impl BettiInput {
    /// Validates nonnegativity and the projective-space pattern of `C^[0]`.
    /// Completeness of the grid is checked lazily by [`extract_bps`].
    pub fn new(
        k_max: u32,
        m_max: u32,
        table: BTreeMap<(u32, u32), BigInt>,
    ) -> Result<Self, ExtractError> {
        for (&(k, m), b) in &table {
            if b.is_negative() {
                return Err(ExtractError::InvalidInput(format!(
                    "b_{m}(C^[{k}]) = {b} is negative"
                )));
            }
            if k > k_max || m > m_max {
                return Err(ExtractError::InvalidInput(format!(
                    "cell (k={k}, m={m}) lies outside the declared bounds ({k_max}, {m_max})"
                )));
            }
        }
        for m in 0..=m_max {
            if let Some(b) = table.get(&(0, m)) {
                let want = if m % 2 == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                if *b != want {
                    return Err(ExtractError::InvalidInput(format!(
                        "b_{m}(C^[0]) = {b}, but C^[0] is a projective space"
                    )));
                }
            }
        }
        Ok(Self {
            k_max,
            m_max,
            table,
        })
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn get(&self, k: u32, m: u32) -> Option<&BigInt> {
        self.table.get(&(k, m))
    }

    fn require(&self, k: u32, m: u32) -> Result<&BigInt, ExtractError> {
        self.get(k, m).ok_or(ExtractError::IncompleteInput { k, m })
    }

    /// Reads the `k,m,b` CSV format. Bounds are the largest `k` and `m` present.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, ExtractError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .transpose()?
            .ok_or_else(|| ExtractError::InvalidInput("empty input".into()))?;
        if header.trim_end_matches('\r').trim() != "k,m,b" {
            return Err(ExtractError::InvalidInput(format!(
                "bad header {header:?}, expected \"k,m,b\""
            )));
        }
        let mut table = BTreeMap::new();
        let (mut k_max, mut m_max) = (0, 0);
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || ExtractError::InvalidInput(format!("line {}: {line:?}", lineno + 2));
            if fields.len() != 3 {
                return Err(bad());
            }
            let k: u32 = fields[0].parse().map_err(|_| bad())?;
            let m: u32 = fields[1].parse().map_err(|_| bad())?;
            let b: BigInt = fields[2].parse().map_err(|_| bad())?;
            if table.insert((k, m), b).is_some() {
                return Err(ExtractError::InvalidInput(format!(
                    "duplicate cell (k={k}, m={m})"
                )));
            }
            k_max = k_max.max(k);
            m_max = m_max.max(m);
        }
        if table.is_empty() {
            return Err(ExtractError::InvalidInput("no data rows".into()));
        }
        Self::new(k_max, m_max, table)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,m,b")?;
        for ((k, m), b) in &self.table {
            writeln!(w, "{k},{m},{b}")?;
        }
        Ok(())
    }
}

/// Output of [`extract_bps`]: cells with `i + j <= bound` are backed by the
/// Betti relation; the rest were produced by the recursion but lie outside
/// the region where that relation is asserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    pub bound: u32,
    pub entries: BTreeMap<(u32, u32), BigInt>,
    pub unverified: BTreeMap<(u32, u32), BigInt>,
}

impl Extracted {
    pub fn into_table(self, s: &Surface, beta: &CurveClass) -> BpsTable {
        BpsTable {
            surface: s.kind(),
            beta: beta.clone(),
            bound: i64::from(self.bound),
            entries: self.entries,
            route: Route::Extraction,
        }
    }
}

pub fn extract_bps(input: &BettiInput) -> Result<Extracted, ExtractError> {
    extract_bps_ordered(input, |ms| ms)
}

// `order` may permute the m values visited inside one level ℓ.
pub(crate) fn extract_bps_ordered<F>(
    input: &BettiInput,
    mut order: F,
) -> Result<Extracted, ExtractError>
where
    F: FnMut(Vec<u32>) -> Vec<u32>,
{
    let bound = input.k_max.min(input.m_max);
    let mut all: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    for level in 0..=input.k_max {
        for m in order((level..=input.m_max).collect()) {
            let mut n = input.require(level, m)?.clone();
            if level > 0 {
                n -= input.require(level - 1, m)?;
            }
            for i in 0..level {
                // n^{i, m+i-2ℓ}; vanishes when the second index is negative
                let j = i64::from(m) + i64::from(i) - 2 * i64::from(level);
                if j >= 0 {
                    let key = (i, j as u32);
                    let prev = all.get(&key).ok_or(ExtractError::IncompleteInput {
                        k: i,
                        m: i + j as u32,
                    })?;
                    n -= prev;
                }
            }
            let j = m - level;
            if n.is_negative() {
                return Err(ExtractError::NegativeInvariant {
                    i: level,
                    j,
                    value: n,
                });
            }
            all.insert((level, j), n);
        }
    }
    let (entries, unverified) = all.into_iter().partition(|&((i, j), _)| i + j <= bound);
    Ok(Extracted {
        bound,
        entries,
        unverified,
    })
}

/// The forward relation: `b_m(C^[k]) = Σ_{i+j<=k, j>=0} n^{i, m-i-2j}`.
pub fn betti_from_bps<F>(n: F, k: u32, m: u32) -> BigInt
where
    F: Fn(u32, u32) -> BigInt,
{
    let mut total = BigInt::zero();
    for i in 0..=k.min(m) {
        for j in 0..=(k - i) {
            let second = i64::from(m) - i64::from(i) - 2 * i64::from(j);
            if second >= 0 {
                total += n(i, second as u32);
            }
        }
    }
    total
}

/// Betti input generated from Hilbert-scheme Betti numbers for `(S, β)`,
/// on the grid `k <= k_max`, `m <= m_max`.
pub fn betti_input_for(
    s: &Surface,
    beta: &CurveClass,
    k_max: u32,
    m_max: u32,
) -> Result<BettiInput, ExtractError> {
    let b = bounds::compute(s, beta).map_err(GenfunError::from)?;
    let dim = s.dim_linear_system(beta);
    genfun::check_relhilb_range(&b, dim, k_max, m_max)?;
    genfun::check_cap(k_max + m_max)?;
    let g = genfun::g_series(s.rho() as u32, k_max + m_max)?;
    let mut table = BTreeMap::new();
    for k in 0..=k_max {
        for m in 0..=m_max {
            table.insert((k, m), genfun::relhilb_betti_from(&g, dim, k, m));
        }
    }
    BettiInput::new(k_max, m_max, table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCheck {
    pub i: u32,
    pub j: u32,
    pub got: BigInt,
    pub expected: BigInt,
}

impl CellCheck {
    pub fn ok(&self) -> bool {
        self.got == self.expected
    }
}

#[derive(Debug, Clone)]
pub struct RoundtripReport {
    pub bound: i64,
    pub extracted: BpsTable,
    pub unverified: BTreeMap<(u32, u32), BigInt>,
    pub cells: Vec<CellCheck>,
}

impl RoundtripReport {
    pub fn all_ok(&self) -> bool {
        self.cells.iter().all(CellCheck::ok)
    }
}

/// Extracts from `input` and compares every cell `i + j <= N(β)` against the formula route.
pub fn compare_with_formula(
    s: &Surface,
    beta: &CurveClass,
    input: &BettiInput,
) -> Result<RoundtripReport, ExtractError> {
    let b = bounds::compute(s, beta).map_err(GenfunError::from)?;
    if i64::from(input.k_max) > b.n2 || b.n1 < bounds::Extended::Finite(i64::from(input.m_max)) {
        return Err(ExtractError::InvalidInput(format!(
            "declared bounds k <= {}, m <= {} exceed N₂ = {}, N₁ = {}",
            input.k_max, input.m_max, b.n2, b.n1
        )));
    }
    let extracted = extract_bps(input)?;
    let formula = genfun::bps_table(s, beta)?;
    let mut cells = Vec::new();
    for (&(i, j), expected) in &formula.entries {
        let got = extracted
            .entries
            .get(&(i, j))
            .cloned()
            .ok_or(ExtractError::IncompleteInput { k: i, m: i + j })?;
        cells.push(CellCheck {
            i,
            j,
            got,
            expected: expected.clone(),
        });
    }
    let unverified = extracted.unverified.clone();
    Ok(RoundtripReport {
        bound: b.n,
        extracted: extracted.into_table(s, beta),
        unverified,
        cells,
    })
}

/// Builds the Betti input on the grid `k, m <= N(β)` from Hilbert-scheme data,
/// extracts, and compares with `[H(q,t)]^{i,j}`.
pub fn roundtrip_verify(s: &Surface, beta: &CurveClass) -> Result<RoundtripReport, ExtractError> {
    let b = bounds::compute(s, beta).map_err(GenfunError::from)?;
    if b.n < 0 {
        return Err(ExtractError::InvalidInput(format!(
            "N(β) = {} is negative",
            b.n
        )));
    }
    let n = b.n as u32;
    let k_max = b.n2.min(b.n) as u32;
    let m_max = b.n1.min_with(b.n) as u32;
    debug_assert_eq!((k_max, m_max), (n, n));
    let input = betti_input_for(s, beta, k_max, m_max)?;
    compare_with_formula(s, beta, &input)
}
