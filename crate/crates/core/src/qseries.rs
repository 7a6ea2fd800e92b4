//! Exact truncated bivariate power series and unexpanded product forms.
//!
//! A [`BiSeries`] stores every coefficient of total degree `i + j <= cap` in a
//! dense triangular array of arbitrary-precision integers. A [`ProductForm`]
//! is a list of factors `(1 - x^a y^b)^e` that is only expanded on demand,
//! which lets substitutions act on factors instead of on expanded series.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("InvalidFactor: factor {0} has a degree-0 monomial or a zero exponent")]
    InvalidFactor(Factor),
    #[error("OutOfTruncation: coefficient ({i},{j}) lies beyond the degree cap {cap}")]
    OutOfTruncation { i: u32, j: u32, cap: u32 },
    #[error("BeyondFormCap: expansion to degree {requested} requested but the form is only complete to degree {cap}")]
    BeyondFormCap { requested: u32, cap: u32 },
    #[error("NegativeExponentAfterSubstitution: factor {0} has first degree below second degree")]
    NegativeExponentAfterSubstitution(Factor),
}

/// Exponent pair `x^a y^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
}

impl Monomial {
    pub const fn new(a: u32, b: u32) -> Self {
        Self { a, b }
    }

    pub const fn degree(self) -> u32 {
        self.a + self.b
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}y^{}", self.a, self.b)
    }
}

/// `(1 - monomial)^exponent`. A negative exponent expands as a geometric series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub monomial: Monomial,
    pub exponent: i32,
}

impl Factor {
    pub const fn new(a: u32, b: u32, exponent: i32) -> Self {
        Self {
            monomial: Monomial::new(a, b),
            exponent,
        }
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.exponent == 0 || self.monomial.degree() == 0 {
            return Err(SeriesError::InvalidFactor(*self));
        }
        Ok(())
    }

    pub fn inverse(self) -> Self {
        Self {
            exponent: -self.exponent,
            ..self
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - {})^{}", self.monomial, self.exponent)
    }
}

/// Unexpanded product `∏ (1 - x^a y^b)^e`.
///
/// `degree_cap` records up to which total degree the factor list is complete.
/// `None` means the list is an exact finite product; `Some(d)` means the form
/// stands for an infinite family from which all factors of degree `> d` were
/// dropped, so only coefficients of total degree `<= d` are meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductForm {
    factors: Vec<Factor>,
    degree_cap: Option<u32>,
}

impl ProductForm {
    /// An exact finite product.
    pub fn finite(factors: Vec<Factor>) -> Result<Self, SeriesError> {
        for f in &factors {
            f.validate()?;
        }
        Ok(Self {
            factors,
            degree_cap: None,
        })
    }

    /// A truncated infinite family, complete up to total degree `cap`.
    /// Factors above the cap are discarded.
    pub fn truncated(factors: Vec<Factor>, cap: u32) -> Result<Self, SeriesError> {
        for f in &factors {
            f.validate()?;
        }
        let factors = factors
            .into_iter()
            .filter(|f| f.monomial.degree() <= cap)
            .collect();
        Ok(Self {
            factors,
            degree_cap: Some(cap),
        })
    }

    pub fn one() -> Self {
        Self {
            factors: Vec::new(),
            degree_cap: None,
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.degree_cap
    }

    /// Product of two forms; the result is complete up to the smaller cap.
    pub fn times(&self, other: &ProductForm) -> ProductForm {
        let degree_cap = match (self.degree_cap, other.degree_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        ProductForm {
            factors,
            degree_cap,
        }
        .normalized()
    }

    /// Merges factors sharing a monomial and drops those whose exponents cancel.
    /// Order of the result is by monomial.
    pub fn normalized(&self) -> ProductForm {
        let mut merged: BTreeMap<Monomial, i32> = BTreeMap::new();
        for f in &self.factors {
            *merged.entry(f.monomial).or_insert(0) += f.exponent;
        }
        let factors = merged
            .into_iter()
            .filter(|&(_, e)| e != 0)
            .map(|(monomial, exponent)| Factor { monomial, exponent })
            .collect();
        ProductForm {
            factors,
            degree_cap: self.degree_cap,
        }
    }

    /// Change of variables `x = y'`, `y = x'/y'` performed factor by factor:
    /// `x^s y^m` becomes `x'^m y'^(s-m)`.
    ///
    /// Factors are merged first so that cancellations such as `(1-y)·(1-y)^-1`
    /// disappear before the exponent check. A factor of first degree `s` maps
    /// to total degree `s`, and it had total degree at most `2s` before, so a
    /// form complete to degree `d` yields one complete to degree `d / 2`.
    pub fn substitute_factorwise(&self) -> Result<ProductForm, SeriesError> {
        let normalized = self.normalized();
        let mut factors = Vec::with_capacity(normalized.factors.len());
        for f in &normalized.factors {
            let Monomial { a: s, b: m } = f.monomial;
            if s < m {
                return Err(SeriesError::NegativeExponentAfterSubstitution(*f));
            }
            let image = Factor::new(m, s - m, f.exponent);
            image.validate()?;
            factors.push(image);
        }
        let degree_cap = normalized.degree_cap.map(|d| d / 2);
        let mut out = ProductForm {
            factors,
            degree_cap,
        };
        if let Some(cap) = degree_cap {
            out.factors.retain(|f| f.monomial.degree() <= cap);
        }
        Ok(out.normalized())
    }

    pub fn expand(&self, cap: u32) -> Result<BiSeries, SeriesError> {
        expand(self, cap)
    }
}

/// Truncated expansion of a product form to total degree `cap`.
pub fn expand(form: &ProductForm, cap: u32) -> Result<BiSeries, SeriesError> {
    if let Some(form_cap) = form.degree_cap {
        if cap > form_cap {
            return Err(SeriesError::BeyondFormCap {
                requested: cap,
                cap: form_cap,
            });
        }
    }
    let mut series = BiSeries::one(cap);
    for f in &form.factors {
        f.validate()?;
        if f.monomial.degree() > cap {
            continue;
        }
        for _ in 0..f.exponent.unsigned_abs() {
            if f.exponent > 0 {
                series.mul_one_minus(f.monomial);
            } else {
                series.div_one_minus(f.monomial);
            }
        }
    }
    Ok(series)
}

#[inline]
fn tri_index(i: u32, j: u32) -> usize {
    let n = (i + j) as usize;
    n * (n + 1) / 2 + i as usize
}

/// Truncated bivariate series with exact integer coefficients, total degree `<= cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    cap: u32,
    coeffs: Vec<BigInt>,
}

impl BiSeries {
    pub fn zero(cap: u32) -> Self {
        let len = tri_index(0, cap + 1);
        Self {
            cap,
            coeffs: vec![BigInt::zero(); len],
        }
    }

    pub fn one(cap: u32) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds a series from `(i, j, c)` terms; terms beyond the cap are dropped.
    pub fn from_terms<I>(cap: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, BigInt)>,
    {
        let mut s = Self::zero(cap);
        for (i, j, c) in terms {
            if i + j <= cap {
                s.coeffs[tri_index(i, j)] += c;
            }
        }
        s
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn coeff(&self, i: u32, j: u32) -> Result<&BigInt, SeriesError> {
        if i + j > self.cap {
            return Err(SeriesError::OutOfTruncation {
                i,
                j,
                cap: self.cap,
            });
        }
        Ok(&self.coeffs[tri_index(i, j)])
    }

    /// All `(i, j, coefficient)` triples with `i + j <= cap`, by total degree then `i`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> + '_ {
        (0..=self.cap)
            .flat_map(move |n| (0..=n).map(move |i| (i, n - i, &self.coeffs[tri_index(i, n - i)])))
    }

    pub fn truncate(&self, cap: u32) -> BiSeries {
        let cap = cap.min(self.cap);
        let len = tri_index(0, cap + 1);
        BiSeries {
            cap,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Truncated product; the result cap is the smaller of the two input caps.
    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let cap = self.cap.min(other.cap);
        let mut out = BiSeries::zero(cap);
        for n1 in 0..=cap {
            for i1 in 0..=n1 {
                let c1 = &self.coeffs[tri_index(i1, n1 - i1)];
                if c1.is_zero() {
                    continue;
                }
                for n2 in 0..=(cap - n1) {
                    for i2 in 0..=n2 {
                        let c2 = &other.coeffs[tri_index(i2, n2 - i2)];
                        if c2.is_zero() {
                            continue;
                        }
                        out.coeffs[tri_index(i1 + i2, n1 - i1 + n2 - i2)] += c1 * c2;
                    }
                }
            }
        }
        out
    }

    /// Sums each anti-diagonal: the coefficient at `k` is `Σ_{i+j=k} c(i,j)`.
    pub fn specialize_diagonal(&self) -> UniSeries {
        let coeffs = (0..=self.cap)
            .map(|n| {
                (0..=n)
                    .map(|i| &self.coeffs[tri_index(i, n - i)])
                    .sum::<BigInt>()
            })
            .collect();
        UniSeries {
            cap: self.cap,
            coeffs,
        }
    }

    // In place multiplication by (1 - x^a y^b). Targets are visited from high to
    // low total degree so every source is still the old value.
    fn mul_one_minus(&mut self, m: Monomial) {
        let shift = m.degree();
        for n in (shift..=self.cap).rev() {
            for i in m.a..=(n - m.b) {
                let j = n - i;
                let dst = tri_index(i, j);
                let src = tri_index(i - m.a, j - m.b);
                let (lo, hi) = self.coeffs.split_at_mut(dst);
                hi[0] -= &lo[src];
            }
        }
    }

    // In place division by (1 - x^a y^b), i.e. multiplication by the geometric
    // series; low-to-high order lets each target see already updated sources.
    fn div_one_minus(&mut self, m: Monomial) {
        let shift = m.degree();
        for n in shift..=self.cap {
            for i in m.a..=(n - m.b) {
                let j = n - i;
                let dst = tri_index(i, j);
                let src = tri_index(i - m.a, j - m.b);
                let (lo, hi) = self.coeffs.split_at_mut(dst);
                hi[0] += &lo[src];
            }
        }
    }
}

/// Truncated univariate series, coefficients for `k <= cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniSeries {
    cap: u32,
    coeffs: Vec<BigInt>,
}

impl UniSeries {
    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn coeff(&self, k: u32) -> Result<&BigInt, SeriesError> {
        self.coeffs
            .get(k as usize)
            .ok_or(SeriesError::OutOfTruncation {
                i: k,
                j: 0,
                cap: self.cap,
            })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, other: &UniSeries) -> UniSeries {
        let cap = self.cap.min(other.cap);
        let n = cap as usize + 1;
        let mut coeffs = vec![BigInt::zero(); n];
        for (a, ca) in self.coeffs.iter().take(n).enumerate() {
            for (b, cb) in other.coeffs.iter().take(n - a).enumerate() {
                coeffs[a + b] += ca * cb;
            }
        }
        UniSeries { cap, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn h_rho1_factors(cap: u32) -> ProductForm {
        // (1-q^2)^-1 (1-t^2)^-1 (1-(qt)^2)^-1 (1-q^3 t)^-1 (1-q t^3)^-1 ...
        let mut f = Vec::new();
        for i in 0..cap {
            f.push(Factor::new(i + 2, i, -1));
            f.push(Factor::new(i + 2, i + 2, -1));
            f.push(Factor::new(i, i + 2, -1));
        }
        ProductForm::truncated(f, cap).unwrap()
    }

    #[test]
    fn geometric_series() {
        let s = ProductForm::finite(vec![Factor::new(1, 0, -1)])
            .unwrap()
            .expand(3)
            .unwrap();
        for k in 0..=3 {
            assert_eq!(s.coeff(k, 0).unwrap(), &big(1));
        }
        assert_eq!(s.coeff(0, 1).unwrap(), &big(0));
    }

    #[test]
    fn single_factor() {
        let s = ProductForm::finite(vec![Factor::new(1, 0, 1)])
            .unwrap()
            .expand(2)
            .unwrap();
        assert_eq!(s.coeff(0, 0).unwrap(), &big(1));
        assert_eq!(s.coeff(1, 0).unwrap(), &big(-1));
        assert_eq!(s.coeff(2, 0).unwrap(), &big(0));
    }

    #[test]
    fn h_rho1_degree_two() {
        let s = h_rho1_factors(2).expand(2).unwrap();
        assert_eq!(s.coeff(0, 0).unwrap(), &big(1));
        assert_eq!(s.coeff(2, 0).unwrap(), &big(1));
        assert_eq!(s.coeff(0, 2).unwrap(), &big(1));
        assert_eq!(s.coeff(1, 1).unwrap(), &big(0));
        let s4 = h_rho1_factors(4).expand(4).unwrap();
        assert_eq!(s4.coeff(2, 2).unwrap(), &big(2));
        assert_eq!(s4.specialize_diagonal().coeff(4).unwrap(), &big(6));
    }

    #[test]
    fn invalid_factors_rejected() {
        assert!(matches!(
            ProductForm::finite(vec![Factor::new(0, 0, -1)]),
            Err(SeriesError::InvalidFactor(_))
        ));
        assert!(matches!(
            ProductForm::finite(vec![Factor::new(1, 2, 0)]),
            Err(SeriesError::InvalidFactor(_))
        ));
    }

    #[test]
    fn out_of_truncation_is_an_error() {
        let s = BiSeries::one(3);
        assert_eq!(
            s.coeff(2, 2),
            Err(SeriesError::OutOfTruncation { i: 2, j: 2, cap: 3 })
        );
        assert!(s.specialize_diagonal().coeff(4).is_err());
    }

    #[test]
    fn expanding_past_form_cap_fails() {
        let form = h_rho1_factors(4);
        assert!(matches!(
            form.expand(5),
            Err(SeriesError::BeyondFormCap {
                requested: 5,
                cap: 4
            })
        ));
    }

    #[test]
    fn inverse_factors_multiply_to_one() {
        let a = ProductForm::finite(vec![Factor::new(1, 0, 1)])
            .unwrap()
            .expand(3)
            .unwrap();
        let b = ProductForm::finite(vec![Factor::new(1, 0, -1)])
            .unwrap()
            .expand(3)
            .unwrap();
        assert_eq!(a.mul(&b), BiSeries::one(3));
        assert_eq!(a.mul(&BiSeries::one(3)), a);
    }

    #[test]
    fn mul_cap_is_minimum() {
        let a = BiSeries::one(5);
        let b = BiSeries::one(3);
        assert_eq!(a.mul(&b).cap(), 3);
    }

    #[test]
    fn substitution_maps_exponents() {
        let form = ProductForm::finite(vec![Factor::new(2, 1, -1)]).unwrap();
        let sub = form.substitute_factorwise().unwrap();
        assert_eq!(sub.factors(), &[Factor::new(1, 1, -1)]);

        let bad = ProductForm::finite(vec![Factor::new(0, 1, -1)]).unwrap();
        assert!(matches!(
            bad.substitute_factorwise(),
            Err(SeriesError::NegativeExponentAfterSubstitution(_))
        ));

        // the offending factor cancels once multiplied by (1 - w)
        let cancelled = bad.times(&ProductForm::finite(vec![Factor::new(0, 1, 1)]).unwrap());
        assert!(cancelled.factors().is_empty());
        assert!(cancelled.substitute_factorwise().is_ok());
    }

    #[test]
    fn substitution_halves_cap() {
        let form =
            ProductForm::truncated(vec![Factor::new(4, 2, -1), Factor::new(6, 3, 1)], 9).unwrap();
        let sub = form.substitute_factorwise().unwrap();
        assert_eq!(sub.degree_cap(), Some(4));
        assert_eq!(sub.factors(), &[Factor::new(2, 2, -1)]);
    }

    #[test]
    fn constant_term_of_pure_inverse_product() {
        let form = ProductForm::finite(vec![
            Factor::new(1, 2, -3),
            Factor::new(0, 1, -1),
            Factor::new(5, 0, -2),
        ])
        .unwrap();
        assert_eq!(form.expand(10).unwrap().coeff(0, 0).unwrap(), &big(1));
    }

    // Naive oracle: multiply truncated binomial/geometric polynomials with a map.
    fn naive_expand(factors: &[Factor], cap: u32) -> BTreeMap<(u32, u32), BigInt> {
        let mut acc: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        acc.insert((0, 0), BigInt::one());
        for f in factors {
            let (a, b) = (f.monomial.a, f.monomial.b);
            for _ in 0..f.exponent.unsigned_abs() {
                let mut poly: Vec<((u32, u32), BigInt)> = vec![((0, 0), BigInt::one())];
                if f.exponent > 0 {
                    poly.push(((a, b), big(-1)));
                } else {
                    let mut k = 1;
                    while k * (a + b) <= cap {
                        poly.push(((k * a, k * b), BigInt::one()));
                        k += 1;
                    }
                }
                let mut next: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
                for ((i, j), c) in &acc {
                    for ((pi, pj), pc) in &poly {
                        if i + j + pi + pj <= cap {
                            *next.entry((i + pi, j + pj)).or_insert_with(BigInt::zero) += c * pc;
                        }
                    }
                }
                acc = next;
            }
        }
        acc
    }

    fn arb_factor() -> impl Strategy<Value = Factor> {
        (0u32..4, 0u32..4, prop_oneof![-3i32..=-1, 1i32..=3])
            .prop_filter("degree >= 1", |(a, b, _)| a + b >= 1)
            .prop_map(|(a, b, e)| Factor::new(a, b, e))
    }

    fn arb_series(cap: u32) -> impl Strategy<Value = BiSeries> {
        proptest::collection::vec((0u32..=cap, 0u32..=cap, -5i64..=5), 0..12).prop_map(
            move |terms| {
                BiSeries::from_terms(cap, terms.into_iter().map(|(i, j, c)| (i, j, big(c))))
            },
        )
    }

    proptest! {
        #[test]
        fn expand_matches_naive_product(factors in proptest::collection::vec(arb_factor(), 0..5)) {
            let cap = 6;
            let s = ProductForm::finite(factors.clone()).unwrap().expand(cap).unwrap();
            let oracle = naive_expand(&factors, cap);
            for (i, j, c) in s.iter() {
                let expected = oracle.get(&(i, j)).cloned().unwrap_or_default();
                prop_assert_eq!(c, &expected);
            }
        }

        #[test]
        fn inverse_factor_property(f in arb_factor()) {
            let cap = 8;
            let a = ProductForm::finite(vec![f]).unwrap().expand(cap).unwrap();
            let b = ProductForm::finite(vec![f.inverse()]).unwrap().expand(cap).unwrap();
            prop_assert_eq!(a.mul(&b), BiSeries::one(cap));
        }

        #[test]
        fn cap_stability(factors in proptest::collection::vec(arb_factor(), 0..6), small in 0u32..8) {
            let form = ProductForm::finite(factors).unwrap();
            let big_s = form.expand(9).unwrap();
            prop_assert_eq!(big_s.truncate(small), form.expand(small).unwrap());
        }

        #[test]
        fn ring_axioms(a in arb_series(5), b in arb_series(5), c in arb_series(5)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn diagonal_is_multiplicative(a in arb_series(6), b in arb_series(6)) {
            let lhs = a.mul(&b).specialize_diagonal();
            let rhs = a.specialize_diagonal().mul(&b.specialize_diagonal());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
