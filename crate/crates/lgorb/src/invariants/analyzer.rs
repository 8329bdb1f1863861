//! Orbifold invariants of a symmetric singularity, organized by sector
//! (conjugacy class of the monomial symmetry group) and by level (conjugacy
//! class of the permutation part): Euler characteristic, monodromy zeta
//! function, and E-function, plus the bridge reconstructing the reduced zeta
//! function from the E-function.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::cyclotomic::UnitRootSum;
use crate::arith::efunction::EFunction;
use crate::arith::phase::{rat, rat_int, Phase, Rational};
use crate::arith::zeta::ZetaProduct;
use crate::arith::{divisors, moebius};
use crate::error::{LgError, Result};
use crate::invariants::character::character_series;
use crate::polynomial::{milnor_basis, InvertiblePolynomial, QhPolynomial, WeightSystem};
use crate::symmetry::{
    element_eigenvalues_on_locus, fixed_locus, grading_element, restrict_polynomial,
    DiagonalElement, ElementKey, FixedLocus, MonomialElement, SymmetryData,
};

/// χ of the global Milnor fiber of the restriction of `f` to a fixed locus:
/// `1 + (−1)^{m−1}·μ` for `m = dim > 0` (Milnor fiber of an isolated
/// `m`-variable singularity), `0` for `m = 0` (empty fiber of the function
/// of zero variables at a nonzero value).
pub fn chi_fiber_on_locus(f: &InvertiblePolynomial, locus: &FixedLocus) -> Result<BigInt> {
    assert_eq!(f.vars(), locus.n(), "locus must live in the ambient space of f");
    let m = locus.dim();
    if m == 0 {
        return Ok(BigInt::zero());
    }
    let mu = locus.induced_weights().milnor_number()?;
    if m % 2 == 1 {
        Ok(BigInt::one() + mu)
    } else {
        Ok(BigInt::one() - mu)
    }
}

/// Memo of `χ(fiber inside Fix(a) ∩ Fix(b))` keyed by the unordered element
/// pair (the joint locus is symmetric in `a` and `b`).  For two diagonal
/// elements the joint locus is the coordinate subspace where both phase
/// vectors vanish, so χ is memoized by that mask instead.
#[derive(Default)]
struct ChiCache {
    memo: BTreeMap<(ElementKey, ElementKey), BigInt>,
    mask_memo: BTreeMap<Vec<bool>, BigInt>,
}

impl ChiCache {
    fn chi_pair(
        &mut self,
        f: &InvertiblePolynomial,
        a: &MonomialElement,
        b: &MonomialElement,
    ) -> Result<BigInt> {
        if a.sigma().is_identity() && b.sigma().is_identity() {
            let mask: Vec<bool> = a
                .lambda()
                .phases()
                .iter()
                .zip(b.lambda().phases())
                .map(|(p, q)| p.is_zero() && q.is_zero())
                .collect();
            return self.chi_mask(f, mask);
        }
        let mut key = (a.key(), b.key());
        if key.0 > key.1 {
            std::mem::swap(&mut key.0, &mut key.1);
        }
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let locus = fixed_locus(&[a.clone(), b.clone()], f.weights())?;
        let chi = chi_fiber_on_locus(f, &locus)?;
        self.memo.insert(key, chi.clone());
        Ok(chi)
    }

    /// χ of the fiber inside a coordinate subspace, the specialization of
    /// `chi_fiber_on_locus` to an untwisted locus.
    fn chi_mask(&mut self, f: &InvertiblePolynomial, mask: Vec<bool>) -> Result<BigInt> {
        if let Some(v) = self.mask_memo.get(&mask) {
            return Ok(v.clone());
        }
        let kept: Vec<u64> = mask
            .iter()
            .zip(f.weights().weights())
            .filter_map(|(&m, &w)| m.then_some(w))
            .collect();
        let chi = if kept.is_empty() {
            BigInt::zero()
        } else {
            let odd = kept.len() % 2 == 1;
            let mu = WeightSystem::new(kept, f.weights().degree()).milnor_number()?;
            if odd {
                BigInt::one() + mu
            } else {
                BigInt::one() - mu
            }
        };
        self.mask_memo.insert(mask, chi.clone());
        Ok(chi)
    }

    /// Euler characteristic of the `shift`-fixed part of the quotient of the
    /// fiber in `Fix(rep)` by the finite group `centralizer`, via the exact
    /// finite-quotient identity `χ((X/C)^h) = (1/|C|)·Σ_{c∈C} χ(X^{hc})`.
    /// The average must be an integer; a failure aborts.
    fn quotient_chi(
        &mut self,
        f: &InvertiblePolynomial,
        rep: &MonomialElement,
        shift: Option<&MonomialElement>,
        centralizer: &[MonomialElement],
    ) -> Result<BigInt> {
        assert!(!centralizer.is_empty(), "centralizer always contains the identity");
        let mut sum = BigInt::zero();
        for c in centralizer {
            let other = match shift {
                Some(h) => h.mul(c),
                None => c.clone(),
            };
            sum += self.chi_pair(f, rep, &other)?;
        }
        let count = BigInt::from(centralizer.len() as u64);
        let (q, r) = sum.div_rem(&count);
        if !r.is_zero() {
            return Err(LgError::NonIntegralBurnsideAverage(format!(
                "class of {}: Σ χ = {} is not divisible by |C| = {}",
                rep, sum, count
            )));
        }
        Ok(q)
    }
}

/// Everything one conjugacy class contributes to the invariants: the
/// representative, its fixed locus and the restricted polynomial on it, and
/// the ambient centralizer used for all quotient averages.
#[derive(Clone, Debug)]
pub struct SectorData {
    /// Index of the class in `SymmetryData::classes()`.
    pub class_index: usize,
    /// Index of the level the class belongs to.
    pub level: usize,
    /// Class representative.
    pub rep: MonomialElement,
    /// Fixed subspace of the representative.
    pub locus: FixedLocus,
    /// Dimension of the fixed subspace.
    pub n_g: usize,
    /// Age of the representative (per-cycle eigenvalue phases in `[0,1)`,
    /// summed without further reduction).
    pub age: Rational,
    /// Restriction of the polynomial to the fixed subspace (the function of
    /// zero variables when `n_g = 0`).
    pub restricted: QhPolynomial,
    /// Centralizer of the representative in the full group.
    pub centralizer: Vec<MonomialElement>,
}

/// Builds the sector data of one conjugacy class.
pub fn sector_data(data: &SymmetryData, class_index: usize) -> Result<SectorData> {
    let class = &data.classes()[class_index];
    let rep = class.representative.clone();
    let locus = fixed_locus(std::slice::from_ref(&rep), data.f().weights())?;
    let restricted = restrict_polynomial(&data.f().base(), &locus)?;
    Ok(SectorData {
        class_index,
        level: class.level,
        n_g: locus.dim(),
        age: rep.age(),
        rep,
        locus,
        restricted,
        centralizer: class.centralizer.clone(),
    })
}

/// Dimensions of the centralizer-invariant part of the top-form module of
/// the restricted polynomial, keyed by normalized degree `α = degree/d` of
/// the restricted weight system.  A zero-dimensional sector is the rank-one
/// trivial module, `{0 → 1}`.
///
/// Uses the monomial-basis count when the entire centralizer acts
/// diagonally (the two routes agree; see `sector_dimensions_via_character`),
/// and the trace average over the centralizer otherwise.
pub fn sector_invariant_dimensions(sector: &SectorData) -> Result<BTreeMap<Rational, u64>> {
    if sector.n_g == 0 {
        return Ok(BTreeMap::from([(Rational::zero(), 1)]));
    }
    if let Some(dims) = basis_count_dimensions(sector)? {
        return Ok(dims);
    }
    molien_dimensions(sector)
}

/// The trace-average (Molien) route for the invariant dimensions, always
/// applicable: averages the graded traces of all centralizer elements on
/// the top-form module and checks each averaged coefficient is a
/// nonnegative integer.
pub fn sector_dimensions_via_character(sector: &SectorData) -> Result<BTreeMap<Rational, u64>> {
    if sector.n_g == 0 {
        return Ok(BTreeMap::from([(Rational::zero(), 1)]));
    }
    molien_dimensions(sector)
}

fn molien_dimensions(sector: &SectorData) -> Result<BTreeMap<Rational, u64>> {
    let d = sector.restricted.weights().degree();
    let mut acc: Vec<UnitRootSum> = Vec::new();
    for c in &sector.centralizer {
        let eig = element_eigenvalues_on_locus(c, &sector.locus)?;
        let series = character_series(&sector.restricted, &eig)?;
        if acc.len() < series.len() {
            acc.resize(series.len(), UnitRootSum::zero());
        }
        for (k, v) in series.iter().enumerate() {
            acc[k].add_assign(v);
        }
    }
    let inv = Rational::new(BigInt::one(), BigInt::from(sector.centralizer.len() as u64));
    let mut dims = BTreeMap::new();
    for (deg, total) in acc.iter().enumerate() {
        let avg = total.normal_form().scale(&inv);
        if avg.is_zero() {
            continue;
        }
        let dim = avg
            .as_rational()
            .filter(|r| r.is_integer() && !r.is_negative())
            .and_then(|r| r.to_integer().to_u64())
            .ok_or_else(|| {
                LgError::NonIntegralMolienAverage(format!(
                    "sector of {}: averaged trace at weighted degree {} is not a \
                     nonnegative integer",
                    sector.rep, deg
                ))
            })?;
        dims.insert(rat(deg as i64, d as i64), dim);
    }
    Ok(dims)
}

/// Monomial-basis shortcut, valid when the representative and every
/// centralizer element act diagonally: the monomial basis forms `x^k·dx` of
/// the restricted polynomial are then simultaneous eigenvectors, the
/// element with coordinate phases `φ` acting by `e[Σ_j (k_j+1)·φ_j]`, so
/// averaging traces over the centralizer is exactly the count of forms
/// invariant under every element.  Returns `None` when the precondition
/// (or the atomic-shape reconstruction) fails, falling back to the trace
/// average.
fn basis_count_dimensions(sector: &SectorData) -> Result<Option<BTreeMap<Rational, u64>>> {
    if !sector.rep.sigma().is_identity()
        || sector.centralizer.iter().any(|c| !c.sigma().is_identity())
    {
        return Ok(None);
    }
    let m = sector.locus.dim();
    let monos = sector.restricted.monomials();
    if monos.len() != m {
        return Ok(None);
    }
    let rows: Vec<Vec<u64>> = monos.iter().map(|mo| mo.exponents.clone()).collect();
    let names = sector.restricted.var_names().to_vec();
    let Ok(shape) = InvertiblePolynomial::from_exponent_matrix(rows, names) else {
        return Ok(None);
    };
    let ws = sector.restricted.weights();
    debug_assert_eq!(shape.weights().weights(), ws.weights());
    debug_assert_eq!(shape.weights().degree(), ws.degree());
    let basis = milnor_basis(&shape);
    let (w, d) = (ws.weights(), ws.degree());
    // With a diagonal representative the locus classes are single
    // coordinates, so each element's action on the locus is read off its
    // phase at that coordinate.
    let coords: Vec<usize> = sector.locus.classes().iter().map(|cl| cl[0]).collect();
    let phase_rows: Vec<Vec<&Phase>> = sector
        .centralizer
        .iter()
        .map(|c| coords.iter().map(|&i| &c.lambda().phases()[i]).collect())
        .collect();
    let mut dims: BTreeMap<Rational, u64> = BTreeMap::new();
    for k in &basis {
        let invariant = phase_rows.iter().all(|row| {
            let mut t = Phase::zero();
            for (j, p) in row.iter().enumerate() {
                t = t.add(&p.scale_u64(k[j] + 1));
            }
            t.is_zero()
        });
        if invariant {
            let deg: u64 = k.iter().zip(w).map(|(&kj, &wj)| (kj + 1) * wj).sum();
            *dims.entry(rat(deg as i64, d as i64)).or_insert(0) += 1;
        }
    }
    Ok(Some(dims))
}

/// Assembles a sector's E-function terms from its invariant dimensions: a
/// dimension at normalized degree `α` lands at
/// `(u, v) = (n_g − α + age − n/2, α + age − n/2)` with coefficient
/// `(−1)^{n_g}·dim` (or `+dim` for the unsigned variant).
fn e_from_dims(
    sector: &SectorData,
    ambient_n: usize,
    dims: &BTreeMap<Rational, u64>,
    signed: bool,
) -> EFunction {
    let mut e = EFunction::zero(ambient_n);
    let shift = sector.age.clone() - rat(ambient_n as i64, 2);
    let sign = if signed && sector.n_g % 2 == 1 { -1 } else { 1 };
    for (alpha, dim) in dims {
        if *dim == 0 {
            continue;
        }
        let coeff = sign * i64::try_from(*dim).expect("sector dimension fits i64");
        let u = rat_int(sector.n_g as i64) - alpha + &shift;
        let v = alpha + &shift;
        e.add_term(u, v, coeff);
    }
    e
}

/// E-function contribution of a single sector.
pub fn e_function_sector(sector: &SectorData, ambient_n: usize) -> Result<EFunction> {
    let dims = sector_invariant_dimensions(sector)?;
    Ok(e_from_dims(sector, ambient_n, &dims, true))
}

/// Monodromy zeta function of one sector: Lefschetz numbers of the powers of
/// the grading symmetry on the quotiented fiber, Möbius inversion to factor
/// exponents, then the age twist `t → e[−age]·t`.
fn zeta_sector_impl(
    cache: &mut ChiCache,
    f: &InvertiblePolynomial,
    grading: &DiagonalElement,
    sector: &SectorData,
) -> Result<ZetaProduct> {
    // A sector fixing only the origin has the empty fiber: every Lefschetz
    // number is zero and its zeta function is trivially 1.
    if sector.n_g == 0 {
        return Ok(ZetaProduct::one());
    }
    let d = f.weights().degree();
    let divs = divisors(d);
    // When the grading symmetry lies in the centralizer, multiplying by its
    // powers permutes the centralizer, so every Lefschetz number equals the
    // shift-free average (the induced monodromy on the quotient is trivial).
    let grading_elem = MonomialElement::from_diagonal(grading.clone());
    let shared = if sector.centralizer.binary_search(&grading_elem).is_ok() {
        Some(cache.quotient_chi(f, &sector.rep, None, &sector.centralizer)?)
    } else {
        None
    };
    let mut lefschetz: BTreeMap<u64, BigInt> = BTreeMap::new();
    for &k in &divs {
        let value = match &shared {
            Some(v) => v.clone(),
            None => {
                let h = MonomialElement::from_diagonal(grading.pow(k));
                cache.quotient_chi(f, &sector.rep, Some(&h), &sector.centralizer)?
            }
        };
        lefschetz.insert(k, value);
    }
    let mut zeta = ZetaProduct::one();
    for &m in &divs {
        let mut num = BigInt::zero();
        for &k in &divs {
            if m % k == 0 {
                num += BigInt::from(moebius(m / k)) * &lefschetz[&k];
            }
        }
        let (q, r) = num.div_rem(&BigInt::from(m));
        if !r.is_zero() {
            return Err(LgError::NonIntegralLefschetzExponent(format!(
                "class of {}: Σ_(k|{m}) μ({m}/k)·L_k = {num} is not divisible by {m}",
                sector.rep
            )));
        }
        let s = q.to_i64().expect("zeta exponent fits i64");
        zeta.mul_factor(m, Phase::zero(), s);
    }
    Ok(zeta.twist(&Phase::new(sector.age.clone())))
}

/// Standalone sector zeta (builds a fresh χ memo; the `Analyzer` methods
/// share one across sectors).
pub fn zeta_sector(sector: &SectorData, f: &InvertiblePolynomial) -> Result<ZetaProduct> {
    let grading = grading_element(f);
    let mut cache = ChiCache::default();
    zeta_sector_impl(&mut cache, f, &grading, sector)
}

/// Rebuilds the reduced orbifold zeta function from the E-function: writing
/// `E(1, t̄) = Σ_s a_s·t̄^s`, the result is `Π_s (1 − e[s + n/2]·t)^{−a_s}`.
pub fn zeta_from_e(e: &EFunction, ambient_n: usize) -> ZetaProduct {
    let half = rat(ambient_n as i64, 2);
    let mut zeta = ZetaProduct::one();
    for (s, a) in e.at_t_one() {
        zeta.mul_factor(1, Phase::new(s + &half), -a);
    }
    zeta
}

/// The per-level slice of every invariant, ready for serialization.
#[derive(Clone, Debug)]
pub struct LevelReport {
    /// Index of the level in `SymmetryData::levels()`.
    pub level_index: usize,
    /// Display name: the minimal permutation of the level in cycle notation
    /// (`"1"` for the identity level).
    pub level: String,
    pub chi: BigInt,
    pub chi_reduced: BigInt,
    pub zeta: ZetaProduct,
    pub zeta_reduced: ZetaProduct,
    pub e: EFunction,
}

impl LevelReport {
    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "chi": bigint_json(&self.chi),
            "chi_reduced": bigint_json(&self.chi_reduced),
            "zeta": self.zeta.to_json(),
            "zeta_reduced": self.zeta_reduced.to_json(),
            "e": self.e.to_json(),
        })
    }
}

pub(crate) fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Computes all invariants of one symmetric singularity, sharing the χ memo
/// and the per-sector invariant dimensions across levels and routes.
pub struct Analyzer<'a> {
    data: &'a SymmetryData,
    sectors: Vec<SectorData>,
    chi: RefCell<ChiCache>,
    dims: RefCell<BTreeMap<usize, BTreeMap<Rational, u64>>>,
}

impl<'a> Analyzer<'a> {
    pub fn new(data: &'a SymmetryData) -> Result<Self> {
        let sectors = (0..data.classes().len())
            .map(|ci| sector_data(data, ci))
            .collect::<Result<Vec<_>>>()?;
        Ok(Analyzer {
            data,
            sectors,
            chi: RefCell::default(),
            dims: RefCell::default(),
        })
    }

    pub fn data(&self) -> &'a SymmetryData {
        self.data
    }

    pub fn sectors(&self) -> &[SectorData] {
        &self.sectors
    }

    pub fn sector(&self, class_index: usize) -> &SectorData {
        &self.sectors[class_index]
    }

    fn level_classes(&self, level: usize) -> &[usize] {
        &self.data.levels()[level].classes
    }

    /// Display name of a level: its minimal permutation in cycle notation.
    pub fn level_name(&self, level: usize) -> String {
        self.data.levels()[level].representative.to_string()
    }

    // ----- Euler characteristics -------------------------------------------

    /// χ of the quotiented fiber of one sector.
    pub fn chi_class(&self, class_index: usize) -> Result<BigInt> {
        let s = &self.sectors[class_index];
        // A sector fixing only the origin misses the fiber entirely, so
        // every term of the quotient average vanishes.
        if s.n_g == 0 {
            return Ok(BigInt::zero());
        }
        self.chi
            .borrow_mut()
            .quotient_chi(self.data.f(), &s.rep, None, &s.centralizer)
    }

    /// Sum of the sector χ over the classes of one level.
    pub fn chi_level(&self, level: usize) -> Result<BigInt> {
        let mut sum = BigInt::zero();
        for &ci in self.level_classes(level) {
            sum += self.chi_class(ci)?;
        }
        Ok(sum)
    }

    /// Level χ minus the number of classes in the level (the point-orbifold
    /// subtraction, distributed over levels).
    pub fn chi_level_reduced(&self, level: usize) -> Result<BigInt> {
        Ok(self.chi_level(level)? - BigInt::from(self.level_classes(level).len() as u64))
    }

    pub fn chi_total(&self) -> Result<BigInt> {
        let mut sum = BigInt::zero();
        for level in 0..self.data.levels().len() {
            sum += self.chi_level(level)?;
        }
        Ok(sum)
    }

    pub fn chi_total_reduced(&self) -> Result<BigInt> {
        Ok(self.chi_total()? - BigInt::from(self.data.classes().len() as u64))
    }

    /// The commuting-pair form of the level χ:
    /// `(1/|K|)·Σ_{(g₁,g₂) commuting, σ(g₁) in the level} χ(fiber in
    /// Fix(g₁) ∩ Fix(g₂))` over the full group `K`.  Agrees with
    /// `chi_level` (conjugation covariance of the joint loci); exposed for
    /// cross-checking.  Cost is quadratic in `|K|`.
    pub fn chi_level_commuting_pairs(&self, level: usize) -> Result<BigInt> {
        let members = &self.data.levels()[level].members;
        let mut sum = BigInt::zero();
        let mut cache = self.chi.borrow_mut();
        for g1 in self.data.elements() {
            if members.binary_search(g1.sigma()).is_err() {
                continue;
            }
            for g2 in self.data.elements() {
                if !g1.commutes_with(g2) {
                    continue;
                }
                sum += cache.chi_pair(self.data.f(), g1, g2)?;
            }
        }
        let count = BigInt::from(self.data.order() as u64);
        let (q, r) = sum.div_rem(&count);
        if !r.is_zero() {
            return Err(LgError::NonIntegralBurnsideAverage(format!(
                "commuting-pair sum {} over level {} is not divisible by |K| = {}",
                sum,
                self.level_name(level),
                count
            )));
        }
        Ok(q)
    }

    /// Diagnostic: the sector χ averaged over the diagonal part of the
    /// centralizer only (a subgroup), answering how the choice of
    /// centralizer convention changes the numbers.  Not used by any
    /// invariant.
    pub fn chi_class_diagonal_centralizer(&self, class_index: usize) -> Result<BigInt> {
        let s = &self.sectors[class_index];
        let diagonal: Vec<MonomialElement> = s
            .centralizer
            .iter()
            .filter(|c| c.sigma().is_identity())
            .cloned()
            .collect();
        self.chi
            .borrow_mut()
            .quotient_chi(self.data.f(), &s.rep, None, &diagonal)
    }

    // ----- Invariant dimensions and E-functions ----------------------------

    /// Memoized invariant dimensions of one sector.
    pub fn sector_dims(&self, class_index: usize) -> Result<BTreeMap<Rational, u64>> {
        if let Some(d) = self.dims.borrow().get(&class_index) {
            return Ok(d.clone());
        }
        let dims = sector_invariant_dimensions(&self.sectors[class_index])?;
        self.dims.borrow_mut().insert(class_index, dims.clone());
        Ok(dims)
    }

    /// The trace-average route for one sector, bypassing the monomial-count
    /// shortcut (cross-check diagnostic).
    pub fn sector_dims_via_character(
        &self,
        class_index: usize,
    ) -> Result<BTreeMap<Rational, u64>> {
        sector_dimensions_via_character(&self.sectors[class_index])
    }

    pub fn e_class(&self, class_index: usize) -> Result<EFunction> {
        let dims = self.sector_dims(class_index)?;
        Ok(e_from_dims(
            &self.sectors[class_index],
            self.data.f().vars(),
            &dims,
            true,
        ))
    }

    /// Unsigned variant: sector contributions enter with `+dim` regardless
    /// of the parity of `n_g`.
    pub fn e_prime_class(&self, class_index: usize) -> Result<EFunction> {
        let dims = self.sector_dims(class_index)?;
        Ok(e_from_dims(
            &self.sectors[class_index],
            self.data.f().vars(),
            &dims,
            false,
        ))
    }

    pub fn e_level(&self, level: usize) -> Result<EFunction> {
        let mut e = EFunction::zero(self.data.f().vars());
        for &ci in self.level_classes(level) {
            e = e.add(&self.e_class(ci)?);
        }
        Ok(e)
    }

    pub fn e_prime_level(&self, level: usize) -> Result<EFunction> {
        let mut e = EFunction::zero(self.data.f().vars());
        for &ci in self.level_classes(level) {
            e = e.add(&self.e_prime_class(ci)?);
        }
        Ok(e)
    }

    pub fn e_total(&self) -> Result<EFunction> {
        let mut e = EFunction::zero(self.data.f().vars());
        for level in 0..self.data.levels().len() {
            e = e.add(&self.e_level(level)?);
        }
        Ok(e)
    }

    pub fn e_prime_total(&self) -> Result<EFunction> {
        let mut e = EFunction::zero(self.data.f().vars());
        for level in 0..self.data.levels().len() {
            e = e.add(&self.e_prime_level(level)?);
        }
        Ok(e)
    }

    // ----- Zeta functions --------------------------------------------------

    /// Sector zeta function; its degree is asserted equal to the sector χ.
    pub fn zeta_sector(&self, class_index: usize) -> Result<ZetaProduct> {
        let sector = &self.sectors[class_index];
        let zeta = {
            let mut cache = self.chi.borrow_mut();
            zeta_sector_impl(&mut cache, self.data.f(), self.data.grading(), sector)?
        };
        let chi = self.chi_class(class_index)?;
        assert_eq!(
            BigInt::from(zeta.degree()),
            chi,
            "sector zeta degree must equal the sector χ"
        );
        Ok(zeta)
    }

    /// Sector zeta divided by `(1 − e[−age]·t)` (the reduced form).
    pub fn zeta_sector_reduced(&self, class_index: usize) -> Result<ZetaProduct> {
        let mut zeta = self.zeta_sector(class_index)?;
        let age = Phase::new(self.sectors[class_index].age.clone());
        zeta.mul_factor(1, age.neg(), -1);
        Ok(zeta)
    }

    pub fn zeta_level(&self, level: usize) -> Result<ZetaProduct> {
        let mut zeta = ZetaProduct::one();
        for &ci in self.level_classes(level) {
            zeta = zeta.mul(&self.zeta_sector(ci)?);
        }
        Ok(zeta)
    }

    pub fn zeta_level_reduced(&self, level: usize) -> Result<ZetaProduct> {
        let mut zeta = ZetaProduct::one();
        for &ci in self.level_classes(level) {
            zeta = zeta.mul(&self.zeta_sector_reduced(ci)?);
        }
        Ok(zeta)
    }

    pub fn zeta_total(&self) -> Result<ZetaProduct> {
        let mut zeta = ZetaProduct::one();
        for level in 0..self.data.levels().len() {
            zeta = zeta.mul(&self.zeta_level(level)?);
        }
        Ok(zeta)
    }

    pub fn zeta_total_reduced(&self) -> Result<ZetaProduct> {
        let mut zeta = ZetaProduct::one();
        for level in 0..self.data.levels().len() {
            zeta = zeta.mul(&self.zeta_level_reduced(level)?);
        }
        Ok(zeta)
    }

    // ----- Reports ---------------------------------------------------------

    pub fn level_report(&self, level: usize) -> Result<LevelReport> {
        Ok(LevelReport {
            level_index: level,
            level: self.level_name(level),
            chi: self.chi_level(level)?,
            chi_reduced: self.chi_level_reduced(level)?,
            zeta: self.zeta_level(level)?,
            zeta_reduced: self.zeta_level_reduced(level)?,
            e: self.e_level(level)?,
        })
    }

    pub fn level_reports(&self) -> Result<Vec<LevelReport>> {
        (0..self.data.levels().len())
            .map(|level| self.level_report(level))
            .collect()
    }
}

// ----- Free functions mirroring the Analyzer methods -----------------------

pub fn chi_orb_level(data: &SymmetryData, level: usize) -> Result<BigInt> {
    Analyzer::new(data)?.chi_level(level)
}

pub fn chi_orb_level_reduced(data: &SymmetryData, level: usize) -> Result<BigInt> {
    Analyzer::new(data)?.chi_level_reduced(level)
}

pub fn chi_orb_total(data: &SymmetryData) -> Result<BigInt> {
    Analyzer::new(data)?.chi_total()
}

pub fn chi_orb_total_reduced(data: &SymmetryData) -> Result<BigInt> {
    Analyzer::new(data)?.chi_total_reduced()
}

pub fn e_function_level(data: &SymmetryData, level: usize) -> Result<EFunction> {
    Analyzer::new(data)?.e_level(level)
}

pub fn e_function_total(data: &SymmetryData) -> Result<EFunction> {
    Analyzer::new(data)?.e_total()
}

pub fn e_prime_function_level(data: &SymmetryData, level: usize) -> Result<EFunction> {
    Analyzer::new(data)?.e_prime_level(level)
}

pub fn e_prime_function_total(data: &SymmetryData) -> Result<EFunction> {
    Analyzer::new(data)?.e_prime_total()
}

pub fn zeta_orb_level(data: &SymmetryData, level: usize) -> Result<ZetaProduct> {
    Analyzer::new(data)?.zeta_level(level)
}

pub fn zeta_orb_level_reduced(data: &SymmetryData, level: usize) -> Result<ZetaProduct> {
    Analyzer::new(data)?.zeta_level_reduced(level)
}

pub fn zeta_orb_total(data: &SymmetryData) -> Result<ZetaProduct> {
    Analyzer::new(data)?.zeta_total()
}

pub fn zeta_orb_total_reduced(data: &SymmetryData) -> Result<ZetaProduct> {
    Analyzer::new(data)?.zeta_total_reduced()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{
        build_symmetry_data, full_symmetry_group, DiagonalGroup, PermGroup, Permutation,
    };

    fn instance(
        expr: &str,
        g: GSpec,
        s_gens: &[&str],
    ) -> (InvertiblePolynomial, SymmetryData) {
        let f = InvertiblePolynomial::parse(expr, None).unwrap();
        let n = f.vars();
        let g_group = match g {
            GSpec::Trivial => DiagonalGroup::trivial(n),
            GSpec::Full => full_symmetry_group(&f, 1_000_000).unwrap(),
            GSpec::Cyclic(parts) => {
                let phases: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                let delta = DiagonalElement::parse_strings(&phases).unwrap();
                DiagonalGroup::cyclic(delta, 1_000_000).unwrap()
            }
        };
        let s_group = if s_gens.is_empty() {
            PermGroup::trivial(n)
        } else {
            let gens = s_gens
                .iter()
                .map(|t| Permutation::parse(t, n).unwrap())
                .collect();
            PermGroup::closure(n, gens)
        };
        let data = build_symmetry_data(&f, &g_group, &s_group).unwrap();
        (f, data)
    }

    enum GSpec {
        Trivial,
        Full,
        Cyclic(Vec<&'static str>),
    }

    fn seven_instance() -> (InvertiblePolynomial, SymmetryData) {
        instance(
            "x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1",
            GSpec::Cyclic(vec!["1/8", "5/8", "7/8", "3/8"]),
            &["(1 3)(2 4)"],
        )
    }

    fn dims_total(dims: &BTreeMap<Rational, u64>) -> u64 {
        dims.values().sum()
    }

    #[test]
    fn trivial_group_cubic() {
        let (_, data) = instance("x^3", GSpec::Trivial, &[]);
        let a = Analyzer::new(&data).unwrap();
        assert_eq!(a.sectors().len(), 1);

        // χ(V) = 1 + μ = 3 for the single unit class.
        assert_eq!(a.chi_class(0).unwrap(), BigInt::from(3));
        assert_eq!(a.chi_total().unwrap(), BigInt::from(3));
        assert_eq!(a.chi_total_reduced().unwrap(), BigInt::from(2));
        assert_eq!(a.chi_level_commuting_pairs(0).unwrap(), BigInt::from(3));

        // Dimensions are the Milnor-algebra form degrees {1, 2} over d = 3.
        let dims = a.sector_dims(0).unwrap();
        assert_eq!(dims, BTreeMap::from([(rat(1, 3), 1), (rat(2, 3), 1)]));
        assert_eq!(dims_total(&dims), 2);
        assert_eq!(a.sector_dims_via_character(0).unwrap(), dims);

        // ζ = (1 − t³); ζ̄ = (1 − t³)/(1 − t), degrees 3 and 2.
        let zeta = a.zeta_total().unwrap();
        assert_eq!(zeta, ZetaProduct::factor(3, Phase::zero(), 1));
        assert_eq!(zeta.degree(), 3);
        let reduced = a.zeta_total_reduced().unwrap();
        let mut expect = ZetaProduct::factor(3, Phase::zero(), 1);
        expect.mul_factor(1, Phase::zero(), -1);
        assert_eq!(reduced, expect);
        assert_eq!(reduced.degree(), 2);

        // E = −t^{1/6}t̄^{−1/6} − t^{−1/6}t̄^{1/6}.
        let e = a.e_total().unwrap();
        let mut want = EFunction::zero(1);
        want.add_term(rat(1, 6), rat(-1, 6), -1);
        want.add_term(rat(-1, 6), rat(1, 6), -1);
        assert_eq!(e, want);
        // Coefficient sum at t = 1 is −χ̄.
        let sum: i64 = e.at_t_one().values().sum();
        assert_eq!(BigInt::from(-sum), a.chi_total_reduced().unwrap());

        // The E → ζ̄ bridge reproduces the reduced zeta exactly.
        let bridged = zeta_from_e(&e, 1);
        assert!(bridged.same_function(&reduced));
        let lin = reduced.linearized();
        assert_eq!(
            lin,
            BTreeMap::from([(Phase::from_frac(1, 3), 1), (Phase::from_frac(2, 3), 1)])
        );

        // E′ has the same terms with positive signs.
        let eprime = a.e_prime_total().unwrap();
        assert_eq!(eprime, e.neg());
    }

    #[test]
    fn quartic_full_group() {
        let (_, data) = instance("x^4", GSpec::Full, &[]);
        assert_eq!(data.order(), 4);
        let a = Analyzer::new(&data).unwrap();
        assert_eq!(a.sectors().len(), 4);

        // Unit sector quotient χ = (4 + 0 + 0 + 0)/4 = 1; others vanish.
        assert_eq!(a.chi_total().unwrap(), BigInt::from(1));
        assert_eq!(a.chi_total_reduced().unwrap(), BigInt::from(-3));

        // No invariant forms in the unit sector; three point sectors.
        let e = a.e_total().unwrap();
        let mut want = EFunction::zero(1);
        want.add_term(rat(-1, 4), rat(-1, 4), 1);
        want.add_term(rat(0, 1), rat(0, 1), 1);
        want.add_term(rat(1, 4), rat(1, 4), 1);
        assert_eq!(e, want);

        let reduced = a.zeta_total_reduced().unwrap();
        let bridged = zeta_from_e(&e, 1);
        assert!(bridged.same_function(&reduced));
        assert_eq!(
            reduced.linearized(),
            BTreeMap::from([
                (Phase::from_frac(1, 4), -1),
                (Phase::from_frac(1, 2), -1),
                (Phase::from_frac(3, 4), -1),
            ])
        );
    }

    #[test]
    fn fast_and_character_dims_agree() {
        for (expr, gspec) in [
            ("x1^3*x2 + x2^4", GSpec::Full),
            ("x^2*y + y^3*x", GSpec::Full),
            ("x1^4 + x2^4", GSpec::Full),
        ] {
            let (_, data) = instance(expr, gspec, &[]);
            let a = Analyzer::new(&data).unwrap();
            for ci in 0..a.sectors().len() {
                let fast = a.sector_dims(ci).unwrap();
                let slow = a.sector_dims_via_character(ci).unwrap();
                assert_eq!(fast, slow, "dims routes disagree at {expr} class {ci}");
            }
        }
    }

    #[test]
    fn finite_set_quotient_identity() {
        // χ((X/C)^h) = (1/|C|)·Σ_c #Fix(hc) on a finite model: X = {0..5},
        // C = ⟨(012)(345)⟩, h = (012).  Orbits {0,1,2}, {3,4,5} are both
        // h-stable, so the left side is 2; the right side is (3+0+3)/3.
        let compose = |p: &[usize; 6], q: &[usize; 6]| {
            let mut r = [0usize; 6];
            for i in 0..6 {
                r[i] = p[q[i]];
            }
            r
        };
        let id = [0, 1, 2, 3, 4, 5];
        let c = [1, 2, 0, 4, 5, 3]; // (012)(345)
        let h = [1, 2, 0, 3, 4, 5]; // (012)
        let c2 = compose(&c, &c);
        let fix = |p: &[usize; 6]| (0..6).filter(|&i| p[i] == i).count();
        let rhs_sum = fix(&compose(&h, &id)) + fix(&compose(&h, &c)) + fix(&compose(&h, &c2));
        assert_eq!(rhs_sum % 3, 0);
        // Orbits of C and their h-stability.
        let orbits = [[0usize, 1, 2], [3, 4, 5]];
        let lhs = orbits
            .iter()
            .filter(|orb| orb.iter().all(|&i| orb.contains(&h[i])))
            .count();
        assert_eq!(lhs, rhs_sum / 3);
        assert_eq!(lhs, 2);
    }

    #[test]
    fn worked_level_s() {
        let (_, data) = seven_instance();
        let a = Analyzer::new(&data).unwrap();

        // Identify the level of s and the class of (1, s).
        let s = Permutation::parse("(1 3)(2 4)", 4).unwrap();
        let s_elem = MonomialElement::from_permutation(s.clone());
        let ci = data.class_index_of(&s_elem).unwrap();
        let level = data.classes()[ci].level;
        assert_eq!(a.level_name(level), "(1 3)(2 4)");
        assert_eq!(a.level_classes(level).len(), 2);

        // Sector shape: 2-dimensional locus, age 1, restriction 2y₁³y₂+2y₂⁵y₁.
        let sector = a.sector(ci);
        assert_eq!(sector.n_g, 2);
        assert_eq!(sector.age, rat_int(1));
        assert_eq!(sector.centralizer.len(), 4);
        assert_eq!(sector.restricted.weights().weights().to_vec(), vec![2, 1]);
        assert_eq!(sector.restricted.weights().degree(), 7);
        // Merged restriction 2y₁³y₂ + 2y₂⁵y₁.
        assert_eq!(sector.restricted.monomials().len(), 2);
        for mono in sector.restricted.monomials() {
            assert_eq!(mono.coefficient.as_integer().unwrap(), BigInt::from(2));
        }

        // Both classes have quotient χ = −7; level −14, reduced −16.
        for &cj in a.level_classes(level) {
            assert_eq!(a.chi_class(cj).unwrap(), BigInt::from(-7));
        }
        assert_eq!(a.chi_level(level).unwrap(), BigInt::from(-14));
        assert_eq!(a.chi_level_reduced(level).unwrap(), BigInt::from(-16));
        assert_eq!(
            a.chi_level_commuting_pairs(level).unwrap(),
            BigInt::from(-14)
        );

        // Sector zeta (1 − t⁷)^{−1}; reduced adds (1 − t)^{−1}.
        let zeta = a.zeta_sector(ci).unwrap();
        assert_eq!(zeta, ZetaProduct::factor(7, Phase::zero(), -1));
        let reduced = a.zeta_sector_reduced(ci).unwrap();
        let mut expect = ZetaProduct::factor(7, Phase::zero(), -1);
        expect.mul_factor(1, Phase::zero(), -1);
        assert_eq!(reduced, expect);

        // Invariant dimensions: the eight even-total-order basis forms.
        let dims = a.sector_dims(ci).unwrap();
        assert_eq!(dims_total(&dims), 8);
        let expect_dims = BTreeMap::from([
            (rat(3, 7), 1),
            (rat(5, 7), 1),
            (rat(6, 7), 1),
            (rat(1, 1), 2),
            (rat(8, 7), 1),
            (rat(9, 7), 1),
            (rat(11, 7), 1),
        ]);
        assert_eq!(dims, expect_dims);

        // The level E-function: 2·[(t̄/t)^{∓4/7} + (t̄/t)^{∓2/7} +
        // (t̄/t)^{∓1/7} + 2].
        let e = a.e_level(level).unwrap();
        let mut want = EFunction::zero(4);
        for (num, coeff) in [(-4i64, 2i64), (-2, 2), (-1, 2), (0, 4), (1, 2), (2, 2), (4, 2)] {
            want.add_term(rat(-num, 7), rat(num, 7), coeff);
        }
        assert_eq!(e, want);

        // Diagnostic: diagonal-only centralizer average gives the same χ here.
        assert_eq!(
            a.chi_class_diagonal_centralizer(ci).unwrap(),
            BigInt::from(-7)
        );
    }

    #[test]
    fn worked_level_1() {
        let (_, data) = seven_instance();
        let a = Analyzer::new(&data).unwrap();
        let level = data.identity_level();
        assert_eq!(a.level_name(level), "1");
        assert_eq!(a.level_classes(level).len(), 5);

        assert_eq!(a.chi_level(level).unwrap(), BigInt::from(-21));
        assert_eq!(a.chi_level_reduced(level).unwrap(), BigInt::from(-26));

        // The 13-term E-function with constant term 8.
        let e = a.e_level(level).unwrap();
        let coeffs: &[(i64, i64)] = &[
            (-8, 1),
            (-6, 1),
            (-4, 2),
            (-3, 1),
            (-2, 3),
            (-1, 1),
            (0, 8),
            (1, 1),
            (2, 3),
            (3, 1),
            (4, 2),
            (6, 1),
            (8, 1),
        ];
        let mut want = EFunction::zero(4);
        for &(num, coeff) in coeffs {
            want.add_term(rat(-num, 7), rat(num, 7), coeff);
        }
        assert_eq!(e, want);
    }

    #[test]
    fn seven_totals_and_bridge() {
        let (_, data) = seven_instance();
        let a = Analyzer::new(&data).unwrap();
        assert_eq!(a.chi_total().unwrap(), BigInt::from(-35));
        assert_eq!(a.chi_total_reduced().unwrap(), BigInt::from(-42));

        let e = a.e_total().unwrap();
        let bridged = zeta_from_e(&e, 4);
        let reduced = a.zeta_total_reduced().unwrap();
        assert!(bridged.same_function(&reduced));

        // Degrees match the Euler characteristics levelwise.
        for level in 0..data.levels().len() {
            assert_eq!(
                BigInt::from(a.zeta_level(level).unwrap().degree()),
                a.chi_level(level).unwrap()
            );
            assert_eq!(
                BigInt::from(a.zeta_level_reduced(level).unwrap().degree()),
                a.chi_level_reduced(level).unwrap()
            );
        }

        // Coefficient sum of E at t = 1 equals −χ̄ levelwise.
        for level in 0..data.levels().len() {
            let sum: i64 = a.e_level(level).unwrap().at_t_one().values().sum();
            assert_eq!(BigInt::from(-sum), a.chi_level_reduced(level).unwrap());
        }
    }

    #[test]
    fn level_report_json_shape() {
        let (_, data) = instance("x^3", GSpec::Trivial, &[]);
        let a = Analyzer::new(&data).unwrap();
        let report = a.level_report(0).unwrap();
        let json = report.to_json();
        assert_eq!(json["level"], "1");
        assert_eq!(json["chi"], 3);
        assert_eq!(json["chi_reduced"], 2);
        assert!(json["zeta"].is_array());
        assert!(json["zeta_reduced"].is_array());
        assert!(json["e"].is_array());
    }

    #[test]
    fn free_functions_match_analyzer() {
        let (_, data) = instance("x1^3*x2 + x2^4", GSpec::Full, &[]);
        let a = Analyzer::new(&data).unwrap();
        assert_eq!(chi_orb_total(&data).unwrap(), a.chi_total().unwrap());
        assert_eq!(
            chi_orb_level_reduced(&data, 0).unwrap(),
            a.chi_level_reduced(0).unwrap()
        );
        assert_eq!(e_function_total(&data).unwrap(), a.e_total().unwrap());
        assert_eq!(
            zeta_orb_total_reduced(&data).unwrap(),
            a.zeta_total_reduced().unwrap()
        );
        let sector = sector_data(&data, 0).unwrap();
        assert_eq!(
            zeta_sector(&sector, data.f()).unwrap(),
            a.zeta_sector(0).unwrap()
        );
        assert_eq!(
            sector_invariant_dimensions(&sector).unwrap(),
            a.sector_dims(0).unwrap()
        );
    }
}
