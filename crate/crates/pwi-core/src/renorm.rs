//! The interval renormalization maps `f` and `r = f²`, their index
//! combinatorics, symbolic (digit-expansion) dynamics, eventual-periodicity
//! detection, and the scenario classifier.
//!
//! The parameter interval is I = [0, α]. The map `f` is piecewise affine
//! with full branches over the partition {I_i}; an orbit of `f` generates a
//! symbol sequence over Z ∪ {−∞, +∞}, and `s` is eventually periodic under
//! `f` exactly when s ∈ Q(√2).

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{ParamInterval, QSqrt2};

#[derive(Debug, Error)]
pub enum RenormError {
    #[error("parameter {0:?} outside [0, \u{03b1}]")]
    OutOfRange(QSqrt2),
    #[error("index pair ({0}, {1}) not covered by the scenario table")]
    UnknownScenario(ExtIndex, ExtIndex),
    #[error("malformed symbol sequence: {0}")]
    BadSequence(String),
    #[error("iteration budget exhausted")]
    Budget,
}

/// A symbol of the itinerary alphabet Z ∪ {−∞, +∞}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ExtIndex {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtIndex {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtIndex::Fin(k) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for ExtIndex {
    /// Text form used by the CLI: `w` for +∞ and `-w` for −∞.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtIndex::NegInf => write!(f, "-w"),
            ExtIndex::PosInf => write!(f, "w"),
            ExtIndex::Fin(k) => write!(f, "{k}"),
        }
    }
}

impl std::str::FromStr for ExtIndex {
    type Err = RenormError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "w" | "+w" => Ok(ExtIndex::PosInf),
            "-w" => Ok(ExtIndex::NegInf),
            t => t
                .parse::<i64>()
                .map(ExtIndex::Fin)
                .map_err(|_| RenormError::BadSequence(format!("bad symbol {t:?}"))),
        }
    }
}

/// Δ_i: the branch point of `f` labeled by the finite index i.
pub fn delta(i: i64) -> QSqrt2 {
    if i < 0 {
        QSqrt2::beta_pow(-i)
    } else if i == 0 {
        QSqrt2::beta()
    } else {
        &QSqrt2::alpha() - &QSqrt2::beta_pow(i)
    }
}

/// Δ_{i,j}: the branch point of `r = f²` labeled by the finite pair (i, j).
pub fn delta2(i: i64, j: i64) -> QSqrt2 {
    if i <= 0 && j <= 0 {
        &QSqrt2::beta_pow(-i + 1) + &QSqrt2::beta_pow(-i - j + 1)
    } else if i < 0 && j > 0 {
        &QSqrt2::beta_pow(-i) - &QSqrt2::beta_pow(-i + j + 1)
    } else {
        // i > 0, or i = 0 and j > 0: the mirror rule.
        &QSqrt2::alpha() - &delta2(-i, -j)
    }
}

/// The interval I_i of the partition for `f` (finite i).
pub fn interval_i(i: i64) -> ParamInterval {
    if i < 0 {
        ParamInterval::new(delta(i - 1), delta(i), false, true)
    } else if i == 0 {
        ParamInterval::open(QSqrt2::beta(), QSqrt2::one())
    } else {
        ParamInterval::new(delta(i), delta(i + 1), true, false)
    }
}

/// The interval I_{i,j} of the partition for `r` (finite i, j).
pub fn interval_ij(i: i64, j: i64) -> ParamInterval {
    if j < 0 {
        ParamInterval::new(delta2(i, j - 1), delta2(i, j), false, true)
    } else if j == 0 && i < 0 {
        ParamInterval::open(delta2(i, -1), delta2(i, 0))
    } else if j == 0 {
        ParamInterval::open(delta2(i, 0), delta2(i, 1))
    } else {
        ParamInterval::new(delta2(i, j), delta2(i, j + 1), true, false)
    }
}

/// The index function: the unique i with s ∈ I_i, with −∞ at s = 0 and +∞
/// at s = α.
///
/// The sign convention follows the interval membership: negative indices on
/// (0, β], zero on (β, 1), positive on [1, α).
pub fn index_i(s: &QSqrt2) -> Result<ExtIndex, RenormError> {
    if s.sign() < 0 || s > &QSqrt2::alpha() {
        return Err(RenormError::OutOfRange(s.clone()));
    }
    if s.is_zero() {
        return Ok(ExtIndex::NegInf);
    }
    if s == &QSqrt2::alpha() {
        return Ok(ExtIndex::PosInf);
    }
    let beta = QSqrt2::beta();
    if s <= &beta {
        // s ∈ (β^{k+1}, β^k] gives i = −k.
        let mut k: i64 = 1;
        let mut pow = beta.clone(); // β^k
        loop {
            if s > &(&pow * &beta) {
                return Ok(ExtIndex::Fin(-k));
            }
            pow = &pow * &beta;
            k += 1;
        }
    }
    if s < &QSqrt2::one() {
        return Ok(ExtIndex::Fin(0));
    }
    // 1 ≤ s < α: α − s ∈ (0, β], and i = +⌊log_β(α − s)⌋ ≥ 1.
    let t = &QSqrt2::alpha() - s;
    let mut k: i64 = 1;
    let mut pow = beta.clone();
    loop {
        if t > &pow * &beta {
            return Ok(ExtIndex::Fin(k));
        }
        pow = &pow * &beta;
        k += 1;
    }
}

/// The index pair (i, j) labeling the branch of `r = f²` containing `s`.
///
/// The second entry is orientation-relative: j = σ(i)·i(f(s)), so that the
/// branch points Δ_{i,j} and intervals I_{i,j} increase with j within each
/// I_i regardless of whether the first branch is increasing or decreasing.
/// Boundary values carry the conventional labels: s = 0 ↦ (−∞, 0),
/// s = α ↦ (+∞, 0), s = Δ_i ↦ (i, −∞) for i < 0 and (i, +∞) for i > 0.
pub fn index_pair(s: &QSqrt2) -> Result<(ExtIndex, ExtIndex), RenormError> {
    match index_i(s)? {
        ExtIndex::NegInf => Ok((ExtIndex::NegInf, ExtIndex::Fin(0))),
        ExtIndex::PosInf => Ok((ExtIndex::PosInf, ExtIndex::Fin(0))),
        i @ ExtIndex::Fin(i0) => {
            let j = match index_i(&f_map(s)?)? {
                ExtIndex::Fin(k) => ExtIndex::Fin(if i0 < 0 { -k } else { k }),
                // f(s) = 0 only at s = Δ_i; α is never attained.
                _ if i0 < 0 => ExtIndex::NegInf,
                _ => ExtIndex::PosInf,
            };
            Ok((i, j))
        }
    }
}

/// σ(i): the branch slope sign, −1 for i < 0 and +1 for i ≥ 0.
pub fn sigma(i: i64) -> i64 {
    if i < 0 {
        -1
    } else {
        1
    }
}

/// One step of the renormalization map `f`, exact.
pub fn f_map(s: &QSqrt2) -> Result<QSqrt2, RenormError> {
    match index_i(s)? {
        ExtIndex::NegInf | ExtIndex::PosInf => Ok(QSqrt2::zero()),
        ExtIndex::Fin(i) => {
            let slope = QSqrt2::omega().pow(i.abs() + 1);
            let d = delta(i);
            let diff = if i < 0 { &d - s } else { s - &d };
            Ok(&slope * &diff)
        }
    }
}

/// The second-iterate map `r = f²` computed as two steps of `f`.
pub fn r_map(s: &QSqrt2) -> Result<QSqrt2, RenormError> {
    f_map(&f_map(s)?)
}

/// `r` computed directly from its own piecewise-affine branch formula over
/// I_{i,j}; must agree with [`r_map`] everywhere.
pub fn r_map_direct(s: &QSqrt2) -> Result<QSqrt2, RenormError> {
    let (i, j) = index_pair(s)?;
    match (i, j) {
        (ExtIndex::Fin(i), ExtIndex::Fin(j)) => {
            let slope = QSqrt2::omega().pow(i.abs() + j.abs() + 2);
            let d = delta2(i, j);
            let decreasing = j < 0 || (j == 0 && i < 0);
            let diff = if decreasing { &d - s } else { s - &d };
            Ok(&slope * &diff)
        }
        // At boundary labels the second iterate lands on 0.
        _ => Ok(QSqrt2::zero()),
    }
}

/// A one-sided symbol sequence, eventually periodic: finite preperiod
/// followed by a repeating period (empty period for raw prefixes).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolSeq {
    pub preperiod: Vec<ExtIndex>,
    pub period: Vec<ExtIndex>,
}

impl SymbolSeq {
    /// Enforces the admissibility constraints: after any ∓∞ only −∞ may
    /// follow, and +∞ may only lead.
    pub fn validate(&self) -> Result<(), RenormError> {
        let all: Vec<ExtIndex> = self
            .preperiod
            .iter()
            .chain(self.period.iter())
            .chain(self.period.first())
            .copied()
            .collect();
        for (k, w) in all.windows(2).enumerate() {
            if matches!(w[0], ExtIndex::NegInf | ExtIndex::PosInf) && w[1] != ExtIndex::NegInf {
                return Err(RenormError::BadSequence(format!(
                    "symbol {} follows {} at position {}",
                    w[1], w[0], k
                )));
            }
        }
        for (k, sym) in all.iter().enumerate().skip(1) {
            if *sym == ExtIndex::PosInf {
                return Err(RenormError::BadSequence(format!(
                    "+\u{221e} at non-leading position {k}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.preperiod {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        if !self.period.is_empty() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (k, s) in self.period.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The first `n` symbols of the itinerary of `s` under `f`.
pub fn luroth_prefix(s: &QSqrt2, n: usize) -> Result<SymbolSeq, RenormError> {
    let mut out = Vec::with_capacity(n);
    let mut x = s.clone();
    for _ in 0..n {
        out.push(index_i(&x)?);
        x = f_map(&x)?;
    }
    Ok(SymbolSeq {
        preperiod: out,
        period: vec![],
    })
}

/// Reconstructs the exact parameter value from an eventually periodic
/// symbol sequence, by composing the inverse branch maps
/// s_k = π_k − σ_k β^{|i_k|} + σ_k β^{|i_k|+1} s_{k+1}
/// and solving the resulting affine fixed-point equation for the cycle
/// (equivalently: summing the finitely many geometric series of the digit
/// expansion in closed form).
pub fn luroth_reconstruct(seq: &SymbolSeq) -> Result<QSqrt2, RenormError> {
    seq.validate()?;
    // The value at the start of the periodic part.
    let cycle_value = if seq.period.is_empty()
        || seq.period.iter().all(|s| *s == ExtIndex::NegInf)
    {
        QSqrt2::zero()
    } else {
        // Compose the inverse steps over one period: s_start = A + B·s_start.
        let (a, b) = compose_inverse(&seq.period)?;
        // |B| = β^{Σ(|i_k|+1)} < 1, so 1 − B ≠ 0.
        let one_minus_b = &QSqrt2::one() - &b;
        &a / &one_minus_b
    };
    // Pull back through the preperiod.
    let (a, b) = compose_inverse(&seq.preperiod)?;
    Ok(&a + &(&b * &cycle_value))
}

/// Composes inverse branch maps for a finite symbol block, returning the
/// affine map s ↦ A + B·s such that the block's starting value is
/// A + B·(value after the block).
fn compose_inverse(block: &[ExtIndex]) -> Result<(QSqrt2, QSqrt2), RenormError> {
    let mut a = QSqrt2::zero();
    let mut b = QSqrt2::one();
    // Process from the end of the block backwards.
    for sym in block.iter().rev() {
        let (step_a, step_b) = match sym {
            ExtIndex::NegInf => (QSqrt2::zero(), QSqrt2::zero()),
            ExtIndex::PosInf => (QSqrt2::alpha(), QSqrt2::zero()),
            ExtIndex::Fin(i) => {
                let sg = sigma(*i);
                let pi_k = if sg > 0 { QSqrt2::alpha() } else { QSqrt2::zero() };
                let bi = QSqrt2::beta_pow(i.abs());
                let bi1 = QSqrt2::beta_pow(i.abs() + 1);
                let sgn = QSqrt2::from_int(sg);
                (&pi_k - &(&sgn * &bi), &sgn * &bi1)
            }
        };
        // New map: s ↦ step_a + step_b (a + b s).
        a = &step_a + &(&step_b * &a);
        b = &step_b * &b;
    }
    Ok((a, b))
}

/// The exact orbit data of `s` under `f`: preperiod length, period length,
/// and the cycle values.
pub struct OrbitData {
    pub preperiod: usize,
    pub period: usize,
    pub cycle: Vec<QSqrt2>,
    pub orbit: Vec<QSqrt2>,
}

impl OrbitData {
    /// The eventually periodic symbol sequence of the orbit.
    pub fn symbols(&self) -> Result<SymbolSeq, RenormError> {
        let pre = self.orbit[..self.preperiod]
            .iter()
            .map(index_i)
            .collect::<Result<Vec<_>, _>>()?;
        let per = self.cycle.iter().map(index_i).collect::<Result<Vec<_>, _>>()?;
        Ok(SymbolSeq {
            preperiod: pre,
            period: per,
        })
    }
}

/// Iterates `f` exactly until a value repeats. Termination for field inputs
/// is guaranteed (bounded lattice orbits); the budget is a crash guard only.
pub fn eventual_period(s: &QSqrt2, budget: usize) -> Result<OrbitData, RenormError> {
    let mut seen: HashMap<QSqrt2, usize> = HashMap::new();
    let mut orbit: Vec<QSqrt2> = Vec::new();
    let mut x = s.clone();
    loop {
        if let Some(&k) = seen.get(&x) {
            let period = orbit.len() - k;
            return Ok(OrbitData {
                preperiod: k,
                period,
                cycle: orbit[k..].to_vec(),
                orbit,
            });
        }
        if orbit.len() >= budget {
            return Err(RenormError::Budget);
        }
        seen.insert(x.clone(), orbit.len());
        orbit.push(x.clone());
        x = f_map(&x)?;
    }
}

/// The default iteration budget for [`eventual_period`].
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// The smallest natural d with d·s ∈ Z[√2] (the conserved denominator of
/// the lattice dynamics).
pub fn denominator(s: &QSqrt2) -> BigInt {
    s.rat_part().denom().lcm(s.sqrt2_part().denom())
}

/// One step of the lattice map on ζ = d·s after clearing denominators;
/// stays in Z[√2] whenever d is (a multiple of) the conserved denominator.
pub fn lattice_step(zeta: &QSqrt2, d: &BigInt) -> Result<QSqrt2, RenormError> {
    let dq = QSqrt2::new(
        num_rational::BigRational::from_integer(d.clone()),
        num_rational::BigRational::zero(),
    );
    let s = zeta / &dq;
    match index_i(&s)? {
        ExtIndex::NegInf | ExtIndex::PosInf => Ok(QSqrt2::zero()),
        ExtIndex::Fin(i) => {
            let slope = &QSqrt2::from_int(sigma(i)) * &QSqrt2::omega().pow(i.abs() + 1);
            Ok(&slope * &(zeta - &(&dq * &delta(i))))
        }
    }
}

/// The ten renormalization scenarios.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScenarioLabel {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioLabel::I => write!(f, "I"),
            ScenarioLabel::II => write!(f, "II"),
            ScenarioLabel::III => write!(f, "III"),
            ScenarioLabel::IV => write!(f, "IV"),
        }
    }
}

/// Scenario classification of an index pair: the circuit label, the signs
/// μ, ν where applicable, and the scaling data κ = β^{|i|+|j|+2},
/// parity (−1)^{|i|+|j|} for finite pairs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ScenarioInfo {
    pub label: ScenarioLabel,
    pub mu: Option<i32>,
    pub nu: Option<i32>,
    /// Exponent e with κ = β^e; None at the boundary labels, where κ is not
    /// a pure power of β.
    pub kappa_exponent: Option<i64>,
    /// (−1)^{|i|+|j|} for finite pairs.
    pub parity: Option<i32>,
}

/// Classifies an index pair per the scenario table.
pub fn scenario(i: ExtIndex, j: ExtIndex) -> Result<ScenarioInfo, RenormError> {
    use ExtIndex::*;
    let info = |label, mu, nu| ScenarioInfo {
        label,
        mu,
        nu,
        kappa_exponent: None,
        parity: None,
    };
    match (i, j) {
        (NegInf, Fin(0)) | (PosInf, Fin(0)) | (Fin(0), NegInf) | (Fin(0), PosInf) => {
            Ok(info(ScenarioLabel::I, None, None))
        }
        (Fin(i0), NegInf) if i0 <= -1 => Ok(info(ScenarioLabel::II, None, None)),
        (Fin(i0), PosInf) if i0 >= 1 => Ok(info(ScenarioLabel::II, None, None)),
        (Fin(i0), Fin(j0)) => {
            let abs = i0.abs() + j0.abs();
            let finite_info = |label, mu: Option<i32>, nu: Option<i32>| ScenarioInfo {
                label,
                mu,
                nu,
                kappa_exponent: Some(abs + 2),
                parity: Some(if abs % 2 == 0 { 1 } else { -1 }),
            };
            let nu = Some(if j0.abs() % 2 == 0 { 1 } else { -1 });
            let label = match i0 {
                0 => {
                    if j0.abs() <= 2 {
                        finite_info(ScenarioLabel::I, None, None)
                    } else {
                        finite_info(ScenarioLabel::III, Some(-1), nu)
                    }
                }
                1 => match j0 {
                    0 | -1 | -2 | -3 => finite_info(ScenarioLabel::I, None, None),
                    1 | 2 => finite_info(ScenarioLabel::II, None, None),
                    j if j <= -4 => finite_info(ScenarioLabel::III, Some(1), nu),
                    _ => finite_info(ScenarioLabel::IV, Some(-1), nu), // j ≥ 3
                },
                -1 => match j0 {
                    0 | 1 | 2 | 3 => finite_info(ScenarioLabel::I, None, None),
                    -1 | -2 => finite_info(ScenarioLabel::II, None, None),
                    j if j >= 4 => finite_info(ScenarioLabel::III, Some(1), nu),
                    _ => finite_info(ScenarioLabel::IV, Some(-1), nu), // j ≤ −3
                },
                i if i >= 2 => match j0 {
                    -3..=2 => finite_info(ScenarioLabel::II, None, None),
                    j if j >= 3 => finite_info(ScenarioLabel::IV, Some(-1), nu),
                    _ => finite_info(ScenarioLabel::IV, Some(1), nu), // j ≤ −4
                },
                _ => match j0 {
                    // i ≤ −2
                    -2..=3 => finite_info(ScenarioLabel::II, None, None),
                    j if j <= -3 => finite_info(ScenarioLabel::IV, Some(-1), nu),
                    _ => finite_info(ScenarioLabel::IV, Some(1), nu), // j ≥ 4
                },
            };
            Ok(label)
        }
        _ => Err(RenormError::UnknownScenario(i, j)),
    }
}

/// The fixed point of `r` in I_{i,j} with period-2 symbolic representation
/// (i, j, i, j, …): β^{|i|+1}(1 + β^{|j|}) / (1 + β^{|i|+|j|+2}).
pub fn s_fix(i: i64, j: i64) -> QSqrt2 {
    let num = &QSqrt2::beta_pow(i.abs() + 1)
        * &(&QSqrt2::one() + &QSqrt2::beta_pow(j.abs()));
    let den = &QSqrt2::one() + &QSqrt2::beta_pow(i.abs() + j.abs() + 2);
    &num / &den
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(p: i64, q_: i64) -> QSqrt2 {
        QSqrt2::ratio(p, q_)
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(-2), QSqrt2::from_parts(3, -2, 1));
        assert_eq!(delta(1), QSqrt2::one());
        assert_eq!(
            delta2(-1, 0),
            &QSqrt2::beta_pow(2) + &QSqrt2::beta_pow(2)
        );
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_i(&q(1, 2)).unwrap(), ExtIndex::Fin(0));
        assert_eq!(index_i(&QSqrt2::zero()).unwrap(), ExtIndex::NegInf);
        assert_eq!(index_i(&QSqrt2::beta_pow(2)).unwrap(), ExtIndex::Fin(-2));
        assert_eq!(index_i(&QSqrt2::alpha()).unwrap(), ExtIndex::PosInf);
        assert_eq!(index_i(&QSqrt2::one()).unwrap(), ExtIndex::Fin(1));
    }

    #[test]
    fn f_fixed_point_and_orbit() {
        let half_alpha = &QSqrt2::alpha() * &q(1, 2);
        assert_eq!(f_map(&half_alpha).unwrap(), half_alpha);
        // f(1/3) = √2/3, f(√2/3) = (√2−1)/3, f((√2−1)/3) = √2/3.
        let third = q(1, 3);
        let a = f_map(&third).unwrap();
        assert_eq!(a, QSqrt2::from_parts(0, 1, 3));
        let b = f_map(&a).unwrap();
        assert_eq!(b, QSqrt2::from_parts(-1, 1, 3));
        let c = f_map(&b).unwrap();
        assert_eq!(c, a);
        assert_eq!(f_map(&QSqrt2::beta()).unwrap(), QSqrt2::zero());
        assert_eq!(f_map(&QSqrt2::one()).unwrap(), QSqrt2::zero());
    }

    #[test]
    fn orbit_periods() {
        let d = eventual_period(&q(1, 3), DEFAULT_BUDGET).unwrap();
        assert_eq!((d.preperiod, d.period), (1, 2));
        let fix = &QSqrt2::alpha() * &q(1, 2);
        let d = eventual_period(&fix, DEFAULT_BUDGET).unwrap();
        assert_eq!((d.preperiod, d.period), (0, 1));
        let d = eventual_period(&QSqrt2::beta(), DEFAULT_BUDGET).unwrap();
        assert_eq!((d.preperiod, d.period), (1, 1));
        assert_eq!(d.cycle, vec![QSqrt2::zero()]);
    }

    #[test]
    fn luroth_round_trip() {
        for s in [q(1, 3), q(1, 10), QSqrt2::from_parts(2, 1, 7), QSqrt2::beta()] {
            let d = eventual_period(&s, DEFAULT_BUDGET).unwrap();
            let seq = d.symbols().unwrap();
            assert_eq!(luroth_reconstruct(&seq).unwrap(), s, "round trip for {s:?}");
        }
        // All-zero sequence is the fixed point √2/2.
        let seq = SymbolSeq {
            preperiod: vec![],
            period: vec![ExtIndex::Fin(0)],
        };
        assert_eq!(
            luroth_reconstruct(&seq).unwrap(),
            &QSqrt2::alpha() * &q(1, 2)
        );
        // All −∞ is 0.
        let seq = SymbolSeq {
            preperiod: vec![],
            period: vec![ExtIndex::NegInf],
        };
        assert_eq!(luroth_reconstruct(&seq).unwrap(), QSqrt2::zero());
    }

    #[test]
    fn r_agreement() {
        for s in [q(1, 3), q(107, 200), QSqrt2::from_parts(5, -1, 9), q(9, 10)] {
            assert_eq!(r_map(&s).unwrap(), r_map_direct(&s).unwrap(), "at {s:?}");
        }
    }

    #[test]
    fn scenario_examples() {
        let s = scenario(ExtIndex::Fin(0), ExtIndex::Fin(-1)).unwrap();
        assert_eq!(s.label, ScenarioLabel::I);
        let s = scenario(ExtIndex::Fin(1), ExtIndex::Fin(-5)).unwrap();
        assert_eq!(s.label, ScenarioLabel::III);
        assert_eq!((s.mu, s.nu), (Some(1), Some(-1)));
        let s = scenario(ExtIndex::Fin(-3), ExtIndex::Fin(-7)).unwrap();
        assert_eq!(s.label, ScenarioLabel::IV);
        assert_eq!((s.mu, s.nu), (Some(-1), Some(-1)));
    }

    #[test]
    fn fixed_point_of_r() {
        for (i, j) in [(-1, -4), (-2, -6)] {
            let s = s_fix(i, j);
            assert_eq!(r_map(&s).unwrap(), s);
            assert!(interval_ij(i, j).contains(&s), "s_fix({i},{j}) in I_ij");
        }
    }

    #[test]
    fn denominator_invariance() {
        let s = QSqrt2::from_parts(3, 2, 7);
        let d0 = denominator(&s);
        let orbit = eventual_period(&s, DEFAULT_BUDGET).unwrap();
        for v in &orbit.orbit {
            assert!(
                (&d0.clone() % denominator(v)) == BigInt::from(0) || denominator(v) <= d0,
                "denominator grew along the orbit"
            );
            // The conserved quantity: d·v stays in Z[√2].
            let zeta = v * &QSqrt2::new(
                num_rational::BigRational::from_integer(d0.clone()),
                num_rational::BigRational::zero(),
            );
            assert!(zeta.rat_part().denom().is_one());
            assert!(zeta.sqrt2_part().denom().is_one());
        }
    }
}
