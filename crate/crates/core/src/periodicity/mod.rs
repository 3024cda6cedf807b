//! Periodicity of graded rings: inducing elements, period spectra, and
//! the ring-level periodicity theorems.

mod checks;
mod classify;

pub use checks::{
    check_bodd_corollary, check_factorization_lemma, check_odd_p_theorem, check_power_of_two_theorem,
    decompose_odd_period, difference_closed, rational_gcd_periodicity, Outcome, Verdict,
};
pub use classify::{classify_4periodic, FourPeriodicLabel};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::Field;
use crate::linalg::rank;
use crate::rings::{GradedAlgebra, Matrix};

/// Largest number of candidate vectors enumerated in one degree.
pub const MAX_CANDIDATES: u64 = 1 << 20;
/// Witnesses kept per degree; the total is still counted.
pub const WITNESS_CAP: usize = 32;
/// Coordinates tried over `Q`, in search order.
pub const Q_BOX: [i64; 5] = [0, 1, -1, 2, -2];
const PROBE_SEED: u64 = 0x9e37_79b9;
const PROBE_RANGE: i64 = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodicityError {
    #[error("degree out of range: k = {k}, c = {c}, n = {n}")]
    DegreeOutOfRange { k: usize, c: usize, n: usize },
    #[error("element has {got} coordinates but H^{degree} has dimension {expected}")]
    WrongLength { degree: usize, expected: usize, got: usize },
    #[error("H^{degree} has dimension {dim}: {count} candidates exceed the limit of {limit}")]
    SliceTooLarge { degree: usize, dim: usize, count: u64, limit: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("not 4-periodic: {0}")]
    NotFourPeriodic(String),
    #[error("wrong coefficient field: {0}")]
    WrongField(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Surjective,
    Injective,
    ZeroMarker,
}

/// First degree where an element fails to induce periodicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureLocus {
    pub degree: usize,
    pub direction: Direction,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// A verified inducing element. The zero marker has an all-zero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityWitness<E> {
    pub degree: usize,
    pub element: Vec<E>,
    pub zero_marker: bool,
    pub c: usize,
    /// Inclusive ranges of `i` that were checked.
    pub surjective: Option<(usize, usize)>,
    pub injective: Option<(usize, usize)>,
}

impl<E> PeriodicityWitness<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "degree": self.degree,
            "element": self.element.iter().map(|v| f.to_json(v)).collect::<Vec<_>>(),
            "zero_marker": self.zero_marker,
            "c": self.c,
            "surjective": self.surjective.map(|(a, b)| vec![a, b]),
            "injective": self.injective.map(|(a, b)| vec![a, b]),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InducerCheck<E> {
    Induces(PeriodicityWitness<E>),
    Fails(FailureLocus),
}

impl<E> InducerCheck<E> {
    pub fn witness(&self) -> Option<&PeriodicityWitness<E>> {
        match self {
            InducerCheck::Induces(w) => Some(w),
            InducerCheck::Fails(_) => None,
        }
    }

    pub fn induces(&self) -> bool {
        matches!(self, InducerCheck::Induces(_))
    }
}

fn check_range(n: usize, k: usize, c: usize) -> Result<(), PeriodicityError> {
    if k == 0 || k > n || c > n {
        return Err(PeriodicityError::DegreeOutOfRange { k, c, n });
    }
    Ok(())
}

fn is_zero_vec<F: Field>(f: &F, x: &[F::Elem]) -> bool {
    x.iter().all(|v| f.is_zero(v))
}

fn marker_check<F: Field>(alg: &GradedAlgebra<F>, k: usize, c: usize) -> InducerCheck<F::Elem> {
    let locus = |degree: usize| FailureLocus {
        degree,
        direction: Direction::ZeroMarker,
        rank: 0,
        source_dim: 0,
        target_dim: alg.dim(degree),
    };
    if 2 * k > c {
        return InducerCheck::Fails(locus(k));
    }
    if let Some(i) = (1..c).find(|&i| alg.dim(i) != 0) {
        return InducerCheck::Fails(locus(i));
    }
    InducerCheck::Induces(PeriodicityWitness {
        degree: k,
        element: alg.zero_vec(k),
        zero_marker: true,
        c,
        surjective: None,
        injective: None,
    })
}

/// Multiplication matrices by each basis element of `H^k`, indexed by source degree.
struct MultTables<E> {
    k: usize,
    c: usize,
    by_degree: Vec<Vec<Matrix<E>>>,
}

impl<E: Clone> MultTables<E> {
    fn new<F: Field<Elem = E>>(alg: &GradedAlgebra<F>, k: usize, c: usize) -> Self {
        let top = c.saturating_sub(k);
        let by_degree = (0..=top)
            .map(|i| (0..alg.dim(k)).map(|a| alg.mult_matrix(k, &alg.basis(k, a), i)).collect())
            .collect();
        MultTables { k, c, by_degree }
    }

    fn check<F: Field<Elem = E>>(&self, alg: &GradedAlgebra<F>, x: &[E]) -> InducerCheck<E> {
        let f = alg.field();
        let (k, c) = (self.k, self.c);
        if c > k {
            for (i, mats) in self.by_degree.iter().enumerate() {
                let (src, tgt) = (alg.dim(i), alg.dim(i + k));
                let mut m: Matrix<E> = vec![vec![f.zero(); tgt]; src];
                for (xa, ma) in x.iter().zip(mats) {
                    if f.is_zero(xa) {
                        continue;
                    }
                    for (row, mrow) in m.iter_mut().zip(ma) {
                        for (v, w) in row.iter_mut().zip(mrow) {
                            *v = f.add(v, &f.mul(xa, w));
                        }
                    }
                }
                let r = rank(f, &m, tgt);
                let locus = |direction| FailureLocus { degree: i, direction, rank: r, source_dim: src, target_dim: tgt };
                if i < c - k && r != tgt {
                    return InducerCheck::Fails(locus(Direction::Surjective));
                }
                if i > 0 && r != src {
                    return InducerCheck::Fails(locus(Direction::Injective));
                }
            }
        }
        InducerCheck::Induces(PeriodicityWitness {
            degree: k,
            element: x.to_vec(),
            zero_marker: false,
            c,
            surjective: (c > k).then(|| (0, c - k - 1)),
            injective: (c > k).then(|| (1, c - k)),
        })
    }
}

/// Does `x ∈ H^k` induce periodicity up to degree `c`?
///
/// Multiplication by `x` must be surjective `H^i → H^{i+k}` for
/// `0 ≤ i < c−k` and injective for `0 < i ≤ c−k`. A zero `x` is accepted
/// only as the marker: `2k ≤ c` and `H^i = 0` for `0 < i < c`.
pub fn is_inducer<F: Field>(
    alg: &GradedAlgebra<F>,
    k: usize,
    x: &[F::Elem],
    c: usize,
) -> Result<InducerCheck<F::Elem>, PeriodicityError> {
    check_range(alg.n(), k, c)?;
    if x.len() != alg.dim(k) {
        return Err(PeriodicityError::WrongLength { degree: k, expected: alg.dim(k), got: x.len() });
    }
    if is_zero_vec(alg.field(), x) {
        return Ok(marker_check(alg, k, c));
    }
    Ok(MultTables::new(alg, k, c).check(alg, x))
}

/// Inducing elements found in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeWitnesses<E> {
    pub degree: usize,
    pub marker: Option<PeriodicityWitness<E>>,
    /// True over `Z_p`, where every vector was tried.
    pub exhaustive: bool,
    /// Nonzero inducers among the enumerated candidates.
    pub count: u64,
    /// The first [`WITNESS_CAP`] of them in search order.
    pub witnesses: Vec<PeriodicityWitness<E>>,
    /// Over `Q`, a pseudo-random element tested after the box search.
    pub probe: Option<PeriodicityWitness<E>>,
}

impl<E> DegreeWitnesses<E> {
    /// Least nonzero inducer in search order, else the probe.
    pub fn first_nonzero(&self) -> Option<&PeriodicityWitness<E>> {
        self.witnesses.first().or(self.probe.as_ref())
    }

    pub fn has_nonzero(&self) -> bool {
        self.first_nonzero().is_some()
    }

    pub fn has_any(&self) -> bool {
        self.marker.is_some() || self.has_nonzero()
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "degree": self.degree,
            "marker": self.marker.is_some(),
            "exhaustive": self.exhaustive,
            "count": self.count,
            "witnesses": self.witnesses.iter().map(|w| w.to_json(f)).collect::<Vec<_>>(),
            "probe": self.probe.as_ref().map(|w| w.to_json(f)),
        })
    }
}

/// Candidate coordinate values in search order.
fn coordinate_values<F: Field>(f: &F) -> (Vec<F::Elem>, bool) {
    match f.elements() {
        Some(v) => (v, true),
        None => (Q_BOX.iter().map(|&v| f.from_i64(v)).collect(), false),
    }
}

/// Searches `H^k` for elements inducing periodicity up to `c`.
///
/// Over `Z_p` every vector is tried. Over `Q` the box of coordinates in
/// [`Q_BOX`] is tried, then one pseudo-random element: the rank
/// conditions are Zariski-open, so a generic element induces whenever any
/// element does.
pub fn search_degree<F: Field>(
    alg: &GradedAlgebra<F>,
    k: usize,
    c: usize,
) -> Result<DegreeWitnesses<F::Elem>, PeriodicityError> {
    check_range(alg.n(), k, c)?;
    let f = alg.field();
    let d = alg.dim(k);
    let (values, exhaustive) = coordinate_values(f);
    let base = values.len() as u64;
    let total = base.checked_pow(d as u32).filter(|&t| t <= MAX_CANDIDATES).ok_or(
        PeriodicityError::SliceTooLarge {
            degree: k,
            dim: d,
            count: base.checked_pow(d as u32).unwrap_or(u64::MAX),
            limit: MAX_CANDIDATES,
        },
    )?;
    let marker = marker_check(alg, k, c).witness().cloned();
    let mut out =
        DegreeWitnesses { degree: k, marker, exhaustive, count: 0, witnesses: Vec::new(), probe: None };
    if d == 0 {
        return Ok(out);
    }
    let tables = MultTables::new(alg, k, c);
    let mut x = vec![values[0].clone(); d];
    for idx in 1..total {
        let mut rest = idx;
        for j in (0..d).rev() {
            x[j] = values[(rest % base) as usize].clone();
            rest /= base;
        }
        if let InducerCheck::Induces(w) = tables.check(alg, &x) {
            out.count += 1;
            if out.witnesses.len() < WITNESS_CAP {
                out.witnesses.push(w);
            }
        }
    }
    if !exhaustive {
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED ^ k as u64);
        let probe: Vec<F::Elem> = (0..d)
            .map(|_| f.from_i64(rng.gen_range(-PROBE_RANGE..=PROBE_RANGE)))
            .collect();
        if !is_zero_vec(f, &probe) {
            out.probe = tables.check(alg, &probe).witness().cloned();
        }
    }
    Ok(out)
}

/// All inducing degrees up to `c` with their witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSpectrum<E> {
    pub ring: String,
    pub c: usize,
    /// Degrees `1..=c` that have at least one witness (marker or nonzero).
    pub degrees: Vec<DegreeWitnesses<E>>,
    /// Least degree with any witness, the zero marker included.
    pub minimal_period: Option<usize>,
    /// Least-degree nonzero inducer; ties go to the first in search order.
    pub minimal_inducer: Option<PeriodicityWitness<E>>,
}

impl<E> PeriodSpectrum<E> {
    pub fn degree(&self, k: usize) -> Option<&DegreeWitnesses<E>> {
        self.degrees.iter().find(|d| d.degree == k)
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "ring": self.ring,
            "c": self.c,
            "minimal_period": self.minimal_period,
            "minimal_inducer": self.minimal_inducer.as_ref().map(|w| w.to_json(f)),
            "degrees": self.degrees.iter().map(|d| d.to_json(f)).collect::<Vec<_>>(),
        })
    }
}

/// Searches every degree `1..=c`.
pub fn minimal_period<F: Field>(
    alg: &GradedAlgebra<F>,
    c: usize,
) -> Result<PeriodSpectrum<F::Elem>, PeriodicityError> {
    if c == 0 || c > alg.n() {
        return Err(PeriodicityError::DegreeOutOfRange { k: 0, c, n: alg.n() });
    }
    let mut degrees = Vec::new();
    for k in 1..=c {
        let w = search_degree(alg, k, c)?;
        if w.has_any() {
            degrees.push(w);
        }
    }
    let minimal_period = degrees.first().map(|d| d.degree);
    let minimal_inducer = degrees.iter().find_map(|d| d.first_nonzero().cloned());
    Ok(PeriodSpectrum { ring: alg.name().to_string(), c, degrees, minimal_period, minimal_inducer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::rings::{build_connected_sum_m6, build_cp, build_hp, build_product, build_sphere};
    use crate::steenrod::Prime;

    const Z2: PrimeField = PrimeField(Prime::TWO);
    const Z3: PrimeField = PrimeField(Prime::THREE);

    #[test]
    fn cp_generator_induces() {
        let cp5 = build_cp(5, Z2).unwrap();
        let w = is_inducer(&cp5, 2, &[1], 10).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.surjective, Some((0, 7)));
        assert_eq!(w.injective, Some((1, 8)));
    }

    #[test]
    fn sphere_marker() {
        let s8 = build_sphere(8, Rationals).unwrap();
        let w = is_inducer(&s8, 4, &[], 8).unwrap();
        assert!(w.witness().unwrap().zero_marker);
        // 2k > c
        assert_eq!(
            is_inducer(&s8, 5, &[], 8).unwrap(),
            InducerCheck::Fails(FailureLocus {
                degree: 5,
                direction: Direction::ZeroMarker,
                rank: 0,
                source_dim: 0,
                target_dim: 0
            })
        );
    }

    #[test]
    fn m6_degree_two_fails_first_at_degree_one() {
        let m6 = build_connected_sum_m6(2).unwrap();
        let q = Rationals;
        let x = vec![q.one()];
        match is_inducer(&m6, 2, &x, 6).unwrap() {
            InducerCheck::Fails(l) => {
                // H^1 = 0 cannot surject onto H^3 = Q^4
                assert_eq!((l.degree, l.direction, l.target_dim), (1, Direction::Surjective, 4));
            }
            other => panic!("{other:?}"),
        }
        let z = vec![q.one()];
        assert!(is_inducer(&m6, 4, &z, 6).unwrap().induces());
    }

    #[test]
    fn degree_errors() {
        let cp2 = build_cp(2, Z2).unwrap();
        assert!(matches!(is_inducer(&cp2, 6, &[], 4), Err(PeriodicityError::DegreeOutOfRange { .. })));
        assert!(matches!(is_inducer(&cp2, 2, &[1], 5), Err(PeriodicityError::DegreeOutOfRange { .. })));
        assert!(matches!(is_inducer(&cp2, 2, &[1, 0], 4), Err(PeriodicityError::WrongLength { .. })));
    }

    #[test]
    fn documented_minimal_periods() {
        let s = minimal_period(&build_cp(6, Z2).unwrap(), 12).unwrap();
        assert_eq!(s.minimal_period, Some(2));
        let s = minimal_period(&build_hp(3, Z3).unwrap(), 12).unwrap();
        assert_eq!(s.minimal_period, Some(4));
        let q = Rationals;
        let a = build_product(&build_sphere(3, q).unwrap(), &build_hp(2, q).unwrap()).unwrap();
        let s = minimal_period(&a, 11).unwrap();
        assert_eq!(s.minimal_period, Some(4));
        assert_eq!(s.minimal_inducer.unwrap().degree, 4);
    }

    #[test]
    fn sphere_spectrum_uses_markers() {
        let s = minimal_period(&build_sphere(6, Z2).unwrap(), 6).unwrap();
        assert_eq!(s.minimal_period, Some(1));
        assert_eq!(s.minimal_inducer.unwrap().degree, 6);
        assert_eq!(s.degrees.iter().map(|d| d.degree).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
    }

    #[test]
    fn slice_refusal() {
        let wide = GradedAlgebra::zero_tables(Rationals, vec![1, 9, 0], "wide").unwrap();
        assert_eq!(
            search_degree(&wide, 1, 2),
            Err(PeriodicityError::SliceTooLarge { degree: 1, dim: 9, count: 1_953_125, limit: MAX_CANDIDATES })
        );
    }

    #[test]
    fn q_probe_agrees_with_box() {
        let q = Rationals;
        let cp3 = build_cp(3, q).unwrap();
        let d = search_degree(&cp3, 2, 6).unwrap();
        assert_eq!(d.count, 4);
        assert_eq!(d.witnesses[0].element, vec![q.one()]);
        assert!(d.probe.is_some());
        let s2 = build_sphere(2, q).unwrap();
        let d = search_degree(&build_product(&s2, &s2).unwrap(), 2, 4).unwrap();
        assert!(!d.has_any());
    }
}
