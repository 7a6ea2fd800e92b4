//! Del Pezzo surfaces as Picard-lattice data.
//!
//! Coordinates on a blow-up of the plane in `n` points are `(d, m_1, .., m_n)`
//! and stand for `dH - Σ m_i E_i`, so the exceptional curve `E_i` has
//! `m_i = -1`. On `P1 x P1` the coordinates `(a, b)` stand for `aH_1 + bH_2`;
//! on the plane `(d)` is `dH`.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("DimensionMismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("HalfIntegerGenus: β(β+K) = {0} is odd")]
    HalfIntegerGenus(i64),
    #[error("InvalidSurface: a blow-up needs between 1 and 8 points, got {0}")]
    InvalidBlowUp(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    ProjectivePlane,
    QuadricProduct,
    /// The plane blown up in `n` very general points, `1 <= n <= 8`.
    BlowUp(u32),
}

impl SurfaceKind {
    pub fn rho(self) -> usize {
        match self {
            SurfaceKind::ProjectivePlane => 1,
            SurfaceKind::QuadricProduct => 2,
            SurfaceKind::BlowUp(n) => n as usize + 1,
        }
    }
}

/// A divisor or curve class, as coordinates in the surface's Picard basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass(Vec<i64>);

impl CurveClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(rho: usize) -> Self {
        Self(vec![0; rho])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rho(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> CurveClass {
        CurveClass(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> CurveClass {
        self.scale(-1)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    kind: SurfaceKind,
    gram: Vec<Vec<i64>>,
    canonical: CurveClass,
    mori_rays: Vec<CurveClass>,
    minus_one: Vec<CurveClass>,
    nef_generators: Vec<CurveClass>,
}

impl Surface {
    pub fn new(kind: SurfaceKind) -> Result<Self, SurfaceError> {
        match kind {
            SurfaceKind::ProjectivePlane => Ok(Self::projective_plane()),
            SurfaceKind::QuadricProduct => Ok(Self::quadric()),
            SurfaceKind::BlowUp(n) => Self::blow_up(n),
        }
    }

    pub fn projective_plane() -> Self {
        let h = CurveClass::new(vec![1]);
        Surface {
            kind: SurfaceKind::ProjectivePlane,
            gram: vec![vec![1]],
            canonical: CurveClass::new(vec![-3]),
            mori_rays: vec![h.clone()],
            minus_one: Vec::new(),
            nef_generators: vec![h],
        }
    }

    pub fn quadric() -> Self {
        let rays = vec![CurveClass::new(vec![1, 0]), CurveClass::new(vec![0, 1])];
        Surface {
            kind: SurfaceKind::QuadricProduct,
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical: CurveClass::new(vec![-2, -2]),
            mori_rays: rays.clone(),
            minus_one: Vec::new(),
            nef_generators: rays,
        }
    }

    pub fn blow_up(n: u32) -> Result<Self, SurfaceError> {
        if !(1..=8).contains(&n) {
            return Err(SurfaceError::InvalidBlowUp(n));
        }
        let rho = n as usize + 1;
        let gram = (0..rho)
            .map(|r| {
                (0..rho)
                    .map(|c| match (r == c, r) {
                        (false, _) => 0,
                        (true, 0) => 1,
                        (true, _) => -1,
                    })
                    .collect()
            })
            .collect();
        let mut canonical = vec![-1; rho];
        canonical[0] = -3;
        let minus_one = cached_minus_one_classes(n).to_vec();
        let mori_rays = if n == 1 {
            // E and the fibre class H - E
            vec![CurveClass::new(vec![0, -1]), CurveClass::new(vec![1, 1])]
        } else {
            minus_one.clone()
        };
        let mut nef_generators = vec![unit(rho, 0)];
        for i in 1..rho {
            let mut c = vec![0; rho];
            c[0] = 1;
            c[i] = 1;
            nef_generators.push(CurveClass::new(c));
        }
        Ok(Surface {
            kind: SurfaceKind::BlowUp(n),
            gram,
            canonical: CurveClass::new(canonical),
            mori_rays,
            minus_one,
            nef_generators,
        })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn rho(&self) -> usize {
        self.kind.rho()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &CurveClass {
        &self.canonical
    }

    pub fn anticanonical(&self) -> CurveClass {
        self.canonical.neg()
    }

    pub fn mori_rays(&self) -> &[CurveClass] {
        &self.mori_rays
    }

    /// Nef classes used to box in effective summands: `H, H - E_i` on blow-ups,
    /// the two rulings on the quadric, `H` on the plane.
    pub fn nef_generators(&self) -> &[CurveClass] {
        &self.nef_generators
    }

    pub fn check_dim(&self, d: &CurveClass) -> Result<(), SurfaceError> {
        if d.rho() != self.rho() {
            return Err(SurfaceError::DimensionMismatch {
                expected: self.rho(),
                got: d.rho(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, d1: &CurveClass, d2: &CurveClass) -> Result<i64, SurfaceError> {
        self.check_dim(d1)?;
        self.check_dim(d2)?;
        Ok(self.pair(d1, d2))
    }

    // Unchecked pairing for callers that already validated dimensions.
    pub(crate) fn pair(&self, d1: &CurveClass, d2: &CurveClass) -> i64 {
        self.pair_raw(&d1.0, &d2.0)
    }

    #[inline]
    fn pair_raw(&self, x: &[i64], y: &[i64]) -> i64 {
        match self.kind {
            SurfaceKind::QuadricProduct => x[0] * y[1] + x[1] * y[0],
            _ => x[0] * y[0] - x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<i64>(),
        }
    }

    fn anticanonical_degree_raw(&self, x: &[i64]) -> i64 {
        -self.pair_raw(x, &self.canonical.0)
    }

    pub fn self_intersection(&self, d: &CurveClass) -> i64 {
        self.pair(d, d)
    }

    /// `D · (-K_S)`.
    pub fn anticanonical_degree(&self, d: &CurveClass) -> i64 {
        -self.pair(d, &self.canonical)
    }

    /// All classes with `E² = -1` and `E·K = -1`.
    pub fn minus_one_classes(&self) -> &[CurveClass] {
        &self.minus_one
    }

    pub fn is_nef(&self, d: &CurveClass) -> bool {
        self.mori_rays.iter().all(|c| self.pair(d, c) >= 0)
    }

    pub fn is_ample(&self, d: &CurveClass) -> bool {
        d.rho() == self.rho()
            && self.mori_rays.iter().all(|c| self.pair(d, c) > 0)
            && self.self_intersection(d) > 0
    }

    /// Holomorphic Euler characteristic `D(D-K)/2 + 1`.
    pub fn chi(&self, d: &CurveClass) -> i64 {
        (self.self_intersection(d) - self.pair(d, &self.canonical)) / 2 + 1
    }

    /// `h⁰(O_S(D))` for points in very general position.
    ///
    /// Strips `(-1)`-curves that `D` meets negatively (they are fixed
    /// components), then applies Riemann–Roch to the nef remainder.
    pub fn h0(&self, d: &CurveClass) -> u64 {
        if d.rho() != self.rho() {
            return 0;
        }
        let mut current = d.0.clone();
        loop {
            if self.anticanonical_degree_raw(&current) < 0 {
                return 0;
            }
            match self
                .minus_one
                .iter()
                .find(|e| self.pair_raw(&current, &e.0) < 0)
            {
                Some(e) => current.iter_mut().zip(&e.0).for_each(|(x, y)| *x -= y),
                None => break,
            }
        }
        self.h0_of_reduced(&CurveClass(current))
    }

    // Fixed-part reduction with a caller-chosen order; `pick` receives the
    // indices of the (-1)-classes meeting the current class negatively.
    #[cfg(test)]
    pub(crate) fn h0_with<F>(&self, d: &CurveClass, mut pick: F) -> u64
    where
        F: FnMut(&[usize]) -> usize,
    {
        let mut current = d.clone();
        loop {
            if self.anticanonical_degree(&current) < 0 {
                return 0;
            }
            let negative: Vec<usize> = self
                .minus_one
                .iter()
                .enumerate()
                .filter(|(_, e)| self.pair(&current, e) < 0)
                .map(|(k, _)| k)
                .collect();
            if negative.is_empty() {
                break;
            }
            current = current.sub(&self.minus_one[pick(&negative)]);
        }
        self.h0_of_reduced(&current)
    }

    fn h0_of_reduced(&self, d: &CurveClass) -> u64 {
        if self.is_nef(d) {
            // nef on a del Pezzo surface: higher cohomology vanishes
            self.chi(d).max(0) as u64
        } else {
            0
        }
    }

    pub fn dim_linear_system(&self, d: &CurveClass) -> i64 {
        self.h0(d) as i64 - 1
    }

    pub fn arithmetic_genus(&self, beta: &CurveClass) -> Result<i64, SurfaceError> {
        self.check_dim(beta)?;
        let twice = self.self_intersection(beta) + self.pair(beta, &self.canonical);
        if twice % 2 != 0 {
            return Err(SurfaceError::HalfIntegerGenus(twice));
        }
        Ok(twice / 2 + 1)
    }

    /// Checks the lattice invariants: symmetric Gram form of signature
    /// `(1, ρ-1)`, `K² = 10 - ρ`, positive anticanonical degree on every Mori
    /// ray and ampleness of `-K`.
    pub fn check_invariants(&self) -> Result<(), String> {
        let rho = self.rho();
        for r in 0..rho {
            for c in 0..rho {
                if self.gram[r][c] != self.gram[c][r] {
                    return Err(format!("gram not symmetric at ({r},{c})"));
                }
            }
        }
        let sig = signature(&self.gram);
        if sig != (1, rho - 1) {
            return Err(format!("signature {sig:?}"));
        }
        // gram and pairing must agree on the basis
        for r in 0..rho {
            for c in 0..rho {
                if self.pair(&unit(rho, r), &unit(rho, c)) != self.gram[r][c] {
                    return Err(format!("pairing disagrees with gram at ({r},{c})"));
                }
            }
        }
        let k2 = self.self_intersection(&self.canonical);
        if k2 + rho as i64 != 10 {
            return Err(format!("K^2 = {k2} with rho = {rho}"));
        }
        if let Some(c) = self
            .mori_rays
            .iter()
            .find(|c| self.anticanonical_degree(c) <= 0)
        {
            return Err(format!(
                "Mori ray {c} has non-positive anticanonical degree"
            ));
        }
        if !self.is_ample(&self.anticanonical()) {
            return Err("-K is not ample".into());
        }
        Ok(())
    }
}

fn unit(rho: usize, k: usize) -> CurveClass {
    let mut c = vec![0; rho];
    c[k] = 1;
    CurveClass::new(c)
}

/// Signature `(positive, negative)` of a symmetric integer matrix, by
/// congruence diagonalization over the integers.
#[allow(clippy::needless_range_loop)]
pub fn signature(gram: &[Vec<i64>]) -> (usize, usize) {
    let mut a: Vec<Vec<i128>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let n = a.len();
    let (mut pos, mut neg) = (0, 0);
    for p in 0..n {
        if a[p][p] == 0 {
            if let Some(q) = (p + 1..n).find(|&q| a[q][q] != 0) {
                a.swap(p, q);
                for row in a.iter_mut() {
                    row.swap(p, q);
                }
            } else if let Some(q) = (p + 1..n).find(|&q| a[p][q] != 0) {
                // replace e_p by e_p + e_q, making the pivot 2·a[p][q]
                for c in 0..n {
                    a[p][c] += a[q][c];
                }
                for r in 0..n {
                    a[r][p] += a[r][q];
                }
            } else {
                continue;
            }
        }
        let pivot = a[p][p];
        if pivot > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in p + 1..n {
            let f = a[r][p];
            if f == 0 {
                continue;
            }
            for c in 0..n {
                a[r][c] = pivot * a[r][c] - f * a[p][c];
            }
            for rr in 0..n {
                a[rr][r] = pivot * a[rr][r] - f * a[rr][p];
            }
        }
    }
    (pos, neg)
}

/// Bounds for the exhaustive `(-1)`-class search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBox {
    pub d: (i64, i64),
    pub m: (i64, i64),
}

impl SearchBox {
    /// `d ∈ [0, 7]`, `m_i ∈ [-1, 7]`.
    pub const STANDARD: SearchBox = SearchBox {
        d: (0, 7),
        m: (-1, 7),
    };

    pub fn widened(self) -> SearchBox {
        SearchBox {
            d: (self.d.0 - 1, self.d.1 + 1),
            m: (self.m.0 - 1, self.m.1 + 1),
        }
    }

    pub fn on_boundary(&self, c: &CurveClass) -> bool {
        let x = c.coords();
        x[0] == self.d.0
            || x[0] == self.d.1
            || x[1..].iter().any(|&m| m == self.m.0 || m == self.m.1)
    }
}

/// Exhaustive search for `(d, m)` with `d² - Σm² = -1` and `3d - Σm = 1`
/// on the blow-up in `n` points, within `bounds`. Branches are pruned with
/// the remaining square budget and Cauchy–Schwarz on the remaining sum.
pub fn search_minus_one_classes(n: u32, bounds: SearchBox) -> Vec<CurveClass> {
    let n = n as usize;
    let mut out = Vec::new();
    let mut m = vec![0i64; n];
    for d in bounds.d.0..=bounds.d.1 {
        let sum = 3 * d - 1;
        let squares = d * d + 1;
        search_rec(d, &mut m, 0, sum, squares, bounds.m, &mut out);
    }
    out.sort();
    out
}

fn search_rec(
    d: i64,
    m: &mut [i64],
    pos: usize,
    sum_left: i64,
    sq_left: i64,
    range: (i64, i64),
    out: &mut Vec<CurveClass>,
) {
    let remaining = (m.len() - pos) as i64;
    if remaining == 0 {
        if sum_left == 0 && sq_left == 0 {
            let mut c = Vec::with_capacity(m.len() + 1);
            c.push(d);
            c.extend_from_slice(m);
            out.push(CurveClass::new(c));
        }
        return;
    }
    // integer squares dominate absolute values, and Cauchy–Schwarz
    if sq_left < sum_left.abs() || sum_left * sum_left > remaining * sq_left {
        return;
    }
    for v in range.0..=range.1 {
        let sq = v * v;
        if sq > sq_left {
            continue;
        }
        m[pos] = v;
        search_rec(d, m, pos + 1, sum_left - v, sq_left - sq, range, out);
    }
}

/// `(-1)`-classes of the blow-up in `n` points, searched in a box one step
/// wider than [`SearchBox::STANDARD`]; every hit is checked to lie strictly
/// inside the wider box, which certifies that nothing escapes the standard box.
pub fn minus_one_classes_certified(n: u32) -> Result<Vec<CurveClass>, CurveClass> {
    let wide = SearchBox::STANDARD.widened();
    let found = search_minus_one_classes(n, wide);
    if let Some(c) = found.iter().find(|c| wide.on_boundary(c)) {
        return Err(c.clone());
    }
    Ok(found)
}

fn cached_minus_one_classes(n: u32) -> &'static [CurveClass] {
    static CACHE: [OnceLock<Vec<CurveClass>>; 8] = [const { OnceLock::new() }; 8];
    CACHE[(n - 1) as usize].get_or_init(|| {
        minus_one_classes_certified(n)
            .unwrap_or_else(|c| panic!("(-1)-class {c} touches the search boundary"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cc(v: &[i64]) -> CurveClass {
        CurveClass::new(v.to_vec())
    }

    fn all_surfaces() -> Vec<Surface> {
        let mut v = vec![Surface::projective_plane(), Surface::quadric()];
        for n in 1..=8 {
            v.push(Surface::blow_up(n).unwrap());
        }
        v
    }

    #[test]
    fn invariants_hold_for_every_kind() {
        for s in all_surfaces() {
            s.check_invariants()
                .unwrap_or_else(|e| panic!("{:?}: {e}", s.kind()));
        }
    }

    #[test]
    fn intersections() {
        let p2 = Surface::projective_plane();
        assert_eq!(p2.intersect(&cc(&[1]), &cc(&[1])).unwrap(), 1);
        let bl1 = Surface::blow_up(1).unwrap();
        assert_eq!(bl1.intersect(&cc(&[1, 1]), &cc(&[1, 1])).unwrap(), 0);
        let q = Surface::quadric();
        assert_eq!(q.intersect(&cc(&[1, 1]), &cc(&[1, 1])).unwrap(), 2);
        assert_eq!(
            q.intersect(&cc(&[2, 3]), &cc(&[5, 7])).unwrap(),
            2 * 7 + 5 * 3
        );
        assert_eq!(
            q.intersect(&cc(&[1]), &cc(&[1, 1])),
            Err(SurfaceError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn minus_one_counts() {
        assert!(Surface::projective_plane().minus_one_classes().is_empty());
        assert!(Surface::quadric().minus_one_classes().is_empty());
        let bl1 = Surface::blow_up(1).unwrap();
        assert_eq!(bl1.minus_one_classes(), &[cc(&[0, -1])]);
        let bl3 = Surface::blow_up(3).unwrap();
        let mut expected = vec![
            cc(&[0, -1, 0, 0]),
            cc(&[0, 0, -1, 0]),
            cc(&[0, 0, 0, -1]),
            cc(&[1, 1, 1, 0]),
            cc(&[1, 1, 0, 1]),
            cc(&[1, 0, 1, 1]),
        ];
        expected.sort();
        assert_eq!(bl3.minus_one_classes(), expected.as_slice());
        let counts: Vec<usize> = (1..=8)
            .map(|n| Surface::blow_up(n).unwrap().minus_one_classes().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 6, 10, 16, 27, 56, 240]);
    }

    #[test]
    fn standard_box_contains_every_class() {
        for n in 1..=8 {
            let standard = search_minus_one_classes(n, SearchBox::STANDARD);
            assert_eq!(standard, minus_one_classes_certified(n).unwrap());
            let s = Surface::blow_up(n).unwrap();
            for e in &standard {
                assert_eq!(s.self_intersection(e), -1);
                assert_eq!(s.intersect(e, s.canonical()).unwrap(), -1);
            }
        }
    }

    #[test]
    fn nef_and_ample() {
        let p2 = Surface::projective_plane();
        assert!(p2.is_ample(&cc(&[3])));
        assert!(p2.is_nef(&cc(&[0])));
        assert!(!p2.is_ample(&cc(&[0])));
        assert!(!p2.is_nef(&cc(&[-1])));

        let bl1 = Surface::blow_up(1).unwrap();
        for a in -3..8 {
            for b in -3..8 {
                let expect = a - b > 0 && b > 0;
                assert_eq!(bl1.is_ample(&cc(&[a, b])), expect, "({a},{b})");
            }
        }

        let q = Surface::quadric();
        for a in -2..4 {
            for b in -2..4 {
                assert_eq!(q.is_nef(&cc(&[a, b])), a >= 0 && b >= 0);
            }
        }
    }

    #[test]
    fn h0_values() {
        let p2 = Surface::projective_plane();
        for d in 0..10 {
            assert_eq!(p2.h0(&cc(&[d])) as i64, (d + 1) * (d + 2) / 2);
        }
        assert_eq!(p2.h0(&cc(&[3])), 10);
        assert_eq!(p2.h0(&cc(&[-1])), 0);

        let bl1 = Surface::blow_up(1).unwrap();
        assert_eq!(bl1.h0(&cc(&[0, -1])), 1);
        assert_eq!(bl1.h0(&cc(&[0, -3])), 1);
        assert_eq!(bl1.h0(&cc(&[2, 2])), 3);

        let q = Surface::quadric();
        assert_eq!(q.h0(&cc(&[2, 3])), 12);
        assert_eq!(q.h0(&cc(&[-1, 5])), 0);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(q.h0(&cc(&[a, b])) as i64, (a + 1) * (b + 1));
            }
        }
    }

    #[test]
    fn linear_system_dimensions() {
        assert_eq!(Surface::projective_plane().dim_linear_system(&cc(&[6])), 27);
        let dp6 = Surface::blow_up(6).unwrap();
        assert_eq!(dp6.dim_linear_system(&dp6.anticanonical()), 3);
        assert_eq!(Surface::quadric().dim_linear_system(&cc(&[4, 4])), 24);
        assert_eq!(
            Surface::projective_plane().dim_linear_system(&cc(&[-2])),
            -1
        );
    }

    #[test]
    fn genus() {
        let p2 = Surface::projective_plane();
        assert_eq!(p2.arithmetic_genus(&cc(&[4])).unwrap(), 3);
        assert_eq!(p2.arithmetic_genus(&cc(&[1])).unwrap(), 0);
        assert_eq!(
            Surface::quadric().arithmetic_genus(&cc(&[2, 2])).unwrap(),
            1
        );
        for d in 1..12 {
            assert_eq!(
                p2.arithmetic_genus(&cc(&[d])).unwrap(),
                (d - 1) * (d - 2) / 2
            );
        }
    }

    #[test]
    fn signature_of_forms() {
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), (1, 1));
        assert_eq!(
            signature(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]),
            (1, 2)
        );
        assert_eq!(signature(&[vec![2, 1], vec![1, 2]]), (2, 0));
    }

    fn box_classes(s: &Surface, lo: i64, hi: i64) -> Vec<CurveClass> {
        let rho = s.rho();
        let mut out = Vec::new();
        let mut c = vec![lo; rho];
        loop {
            out.push(CurveClass::new(c.clone()));
            let mut k = 0;
            loop {
                if k == rho {
                    return out;
                }
                c[k] += 1;
                if c[k] <= hi {
                    break;
                }
                c[k] = lo;
                k += 1;
            }
        }
    }

    #[test]
    fn effective_classes_pair_nonnegatively_with_nef_generators() {
        for s in [
            Surface::projective_plane(),
            Surface::quadric(),
            Surface::blow_up(1).unwrap(),
            Surface::blow_up(2).unwrap(),
            Surface::blow_up(3).unwrap(),
        ] {
            for d in box_classes(&s, -2, 4) {
                if s.h0(&d) > 0 {
                    for n in s.nef_generators() {
                        assert!(s.pair(&d, n) >= 0, "{:?} {d} · {n}", s.kind());
                    }
                }
            }
        }
    }

    #[test]
    fn h0_is_independent_of_reduction_order() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [2, 4, 6, 7, 8] {
            let s = Surface::blow_up(n).unwrap();
            for _ in 0..150 {
                let mut c = vec![rng.gen_range(0..6i64)];
                c.extend((0..n).map(|_| rng.gen_range(-3..4i64)));
                let d = CurveClass::new(c);
                let first = s.h0(&d);
                let last = s.h0_with(&d, |cands| cands[cands.len() - 1]);
                let random = s.h0_with(&d, |cands| cands[rng.gen_range(0..cands.len())]);
                assert_eq!(first, last, "{d}");
                assert_eq!(first, random, "{d}");
            }
        }
    }

    #[test]
    fn h0_reduction_step_is_invariant() {
        let s = Surface::blow_up(3).unwrap();
        for d in box_classes(&s, -2, 4) {
            for e in s.minus_one_classes() {
                if s.pair(&d, e) < 0 {
                    assert_eq!(s.h0(&d), s.h0(&d.sub(e)), "{d} - {e}");
                }
            }
        }
    }

    #[test]
    fn nef_h0_is_riemann_roch() {
        for s in all_surfaces().into_iter().take(5) {
            for d in box_classes(&s, 0, 4) {
                if s.is_nef(&d) {
                    assert_eq!(s.h0(&d) as i64, s.chi(&d));
                }
            }
        }
    }
}
