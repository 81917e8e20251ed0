//! Cost dioids: complete idempotent commutative semirings with an nth root.
//!
//! Each [`CostDioid`] bundles a carrier with ⊕ (merging alternative paths),
//! ⊗ (accumulating along a path), the neutral elements `e` and `⊥`, the top
//! element `⊤`, the nth root, the Kleene star and left residuation.
//!
//! | identifier      | carrier           | ⊕   | ⊗   | ⁿ√q     |
//! |-----------------|-------------------|-----|-----|---------|
//! | `minmax`        | ℚ ∪ {±∞}          | min | max | q       |
//! | `maxmin`        | ℚ ∪ {±∞}          | max | min | q       |
//! | `cap-cup`       | P(S)              | ∩   | ∪   | q       |
//! | `cup-cap`       | P(S)              | ∪   | ∩   | q       |
//! | `minplus_vec(m)`| ℚ₊ᵐ ∪ {+∞}        | min | +   | q/n     |
//! | `maxtimes`      | ℚ₊ ∪ {+∞}         | max | ×   | q^(1/n) |
//! | `maxplus`       | ℚ ∪ {±∞}          | max | +   | q/n     |
//! | `minplus`       | ℚ ∪ {±∞}          | min | +   | q/n     |
//!
//! All arithmetic is exact over arbitrary-precision rationals, except the
//! irrational roots of `maxtimes`, which are rounded and compared under a
//! relative tolerance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::DioidError;

/// Iteration cap for [`CostDioid::star`] on carriers without a divergence certificate.
pub const STAR_ITERATION_CAP: usize = 1000;

/// Default relative tolerance for comparing irrational `maxtimes` roots.
pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-9;

/// Largest set universe; set values are stored as bit masks.
pub const MAX_UNIVERSE: usize = 64;

/// A rational extended with both infinities, ordered `-∞ < q < +∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl Extended {
    pub fn int(v: i64) -> Self {
        Extended::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Extended::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Extended::Finite(q) => Some(q),
            _ => None,
        }
    }
}

/// Vector carrier of `minplus_vec(m)`: nonnegative rational m-vectors plus one global `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VecCost {
    Finite(Vec<BigRational>),
    Infinite,
}

/// A value in one dioid carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CostValue {
    Scalar(Extended),
    /// Subset of the declared universe, bit `i` standing for `universe[i]`.
    Set(u64),
    Vector(VecCost),
}

impl CostValue {
    pub fn int(v: i64) -> Self {
        CostValue::Scalar(Extended::int(v))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        CostValue::Scalar(Extended::ratio(numer, denom))
    }

    pub fn pos_inf() -> Self {
        CostValue::Scalar(Extended::PosInf)
    }

    pub fn neg_inf() -> Self {
        CostValue::Scalar(Extended::NegInf)
    }

    pub fn vector(entries: &[i64]) -> Self {
        CostValue::Vector(VecCost::Finite(
            entries
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        ))
    }

    pub fn as_scalar(&self) -> Option<&Extended> {
        match self {
            CostValue::Scalar(x) => Some(x),
            _ => None,
        }
    }
}

/// The dioid identifiers accepted in files and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DioidKind {
    MinMax,
    MaxMin,
    CapCup,
    CupCap,
    MinPlusVec(usize),
    MaxTimes,
    MaxPlus,
    MinPlus,
}

impl DioidKind {
    pub const SCALAR_KINDS: [DioidKind; 5] = [
        DioidKind::MinMax,
        DioidKind::MaxMin,
        DioidKind::MaxTimes,
        DioidKind::MaxPlus,
        DioidKind::MinPlus,
    ];

    pub fn needs_universe(self) -> bool {
        matches!(self, DioidKind::CapCup | DioidKind::CupCap)
    }

    pub fn is_scalar(self) -> bool {
        !matches!(
            self,
            DioidKind::CapCup | DioidKind::CupCap | DioidKind::MinPlusVec(_)
        )
    }
}

impl fmt::Display for DioidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DioidKind::MinMax => f.write_str("minmax"),
            DioidKind::MaxMin => f.write_str("maxmin"),
            DioidKind::CapCup => f.write_str("cap-cup"),
            DioidKind::CupCap => f.write_str("cup-cap"),
            DioidKind::MinPlusVec(m) => write!(f, "minplus_vec({m})"),
            DioidKind::MaxTimes => f.write_str("maxtimes"),
            DioidKind::MaxPlus => f.write_str("maxplus"),
            DioidKind::MinPlus => f.write_str("minplus"),
        }
    }
}

impl FromStr for DioidKind {
    type Err = DioidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let kind = match s {
            "minmax" => DioidKind::MinMax,
            "maxmin" => DioidKind::MaxMin,
            "cap-cup" => DioidKind::CapCup,
            "cup-cap" => DioidKind::CupCap,
            "maxtimes" => DioidKind::MaxTimes,
            "maxplus" => DioidKind::MaxPlus,
            "minplus" => DioidKind::MinPlus,
            _ => {
                let dim = s
                    .strip_prefix("minplus_vec(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .and_then(|m| m.trim().parse::<usize>().ok())
                    .filter(|&m| m > 0)
                    .ok_or_else(|| DioidError::UnknownKind(s.to_string()))?;
                DioidKind::MinPlusVec(dim)
            }
        };
        Ok(kind)
    }
}

/// Taxonomy flags of a dioid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Taxonomy {
    pub selective: bool,
    pub cancellative: bool,
    pub double_idempotent: bool,
}

/// A cost dioid: carrier descriptor plus every operation of the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct CostDioid {
    kind: DioidKind,
    universe: Vec<String>,
    root_tolerance: f64,
}

impl CostDioid {
    /// Builds a dioid; set kinds need a finite universe, other kinds ignore it.
    pub fn new(kind: DioidKind, universe: Option<Vec<String>>) -> Result<Self, DioidError> {
        let universe = if kind.needs_universe() {
            let universe = universe.ok_or(DioidError::MissingUniverse(kind))?;
            if universe.len() > MAX_UNIVERSE {
                return Err(DioidError::UniverseTooLarge(universe.len()));
            }
            for (i, name) in universe.iter().enumerate() {
                if universe[..i].contains(name) {
                    return Err(DioidError::DuplicateUniverseElement(name.clone()));
                }
            }
            universe
        } else {
            Vec::new()
        };
        Ok(CostDioid {
            kind,
            universe,
            root_tolerance: DEFAULT_ROOT_TOLERANCE,
        })
    }

    /// Builds a dioid from its identifier, e.g. `maxplus` or `minplus_vec(3)`.
    pub fn make(name: &str, universe: Option<Vec<String>>) -> Result<Self, DioidError> {
        CostDioid::new(name.parse()?, universe)
    }

    pub fn maxplus() -> Self {
        CostDioid::new(DioidKind::MaxPlus, None).expect("scalar dioid")
    }

    pub fn minplus() -> Self {
        CostDioid::new(DioidKind::MinPlus, None).expect("scalar dioid")
    }

    pub fn with_root_tolerance(mut self, tolerance: f64) -> Self {
        self.root_tolerance = tolerance;
        self
    }

    pub fn kind(&self) -> DioidKind {
        self.kind
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn root_tolerance(&self) -> f64 {
        self.root_tolerance
    }

    pub fn taxonomy(&self) -> Taxonomy {
        use DioidKind::*;
        Taxonomy {
            selective: matches!(self.kind, MaxTimes | MaxPlus | MinPlus),
            cancellative: matches!(self.kind, MinPlusVec(_)),
            double_idempotent: matches!(self.kind, MinMax | MaxMin | CapCup | CupCap),
        }
    }

    pub fn is_selective(&self) -> bool {
        self.taxonomy().selective
    }

    /// True when the induced order is total. This covers the selective rows
    /// and the two scalar double-idempotent rows.
    pub fn is_totally_ordered(&self) -> bool {
        self.kind.is_scalar()
    }

    fn universe_mask(&self) -> u64 {
        match self.universe.len() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    /// The neutral element of ⊕, absorbing for ⊗.
    pub fn zero(&self) -> CostValue {
        use DioidKind::*;
        match self.kind {
            MinMax | MinPlus => CostValue::pos_inf(),
            MaxMin | MaxPlus => CostValue::neg_inf(),
            MaxTimes => CostValue::int(0),
            CupCap => CostValue::Set(0),
            CapCup => CostValue::Set(self.universe_mask()),
            MinPlusVec(_) => CostValue::Vector(VecCost::Infinite),
        }
    }

    /// The neutral element of ⊗: a transition that costs nothing.
    pub fn unit(&self) -> CostValue {
        use DioidKind::*;
        match self.kind {
            MinMax => CostValue::neg_inf(),
            MaxMin => CostValue::pos_inf(),
            MaxPlus | MinPlus => CostValue::int(0),
            MaxTimes => CostValue::int(1),
            CupCap => CostValue::Set(self.universe_mask()),
            CapCup => CostValue::Set(0),
            MinPlusVec(m) => CostValue::Vector(VecCost::Finite(vec![BigRational::zero(); m])),
        }
    }

    /// The sum of all carrier elements.
    pub fn top(&self) -> CostValue {
        use DioidKind::*;
        match self.kind {
            MinMax | MinPlus => CostValue::neg_inf(),
            MaxMin | MaxPlus | MaxTimes => CostValue::pos_inf(),
            CupCap => CostValue::Set(self.universe_mask()),
            CapCup => CostValue::Set(0),
            MinPlusVec(m) => CostValue::Vector(VecCost::Finite(vec![BigRational::zero(); m])),
        }
    }

    pub fn is_zero(&self, v: &CostValue) -> bool {
        *v == self.zero()
    }

    pub fn is_top(&self, v: &CostValue) -> bool {
        *v == self.top()
    }

    /// Carrier membership.
    pub fn contains(&self, v: &CostValue) -> bool {
        use DioidKind::*;
        match (self.kind, v) {
            (MinMax | MaxMin | MaxPlus | MinPlus, CostValue::Scalar(_)) => true,
            (MaxTimes, CostValue::Scalar(x)) => match x {
                Extended::NegInf => false,
                Extended::Finite(q) => !q.is_negative(),
                Extended::PosInf => true,
            },
            (CupCap | CapCup, CostValue::Set(mask)) => mask & !self.universe_mask() == 0,
            (MinPlusVec(m), CostValue::Vector(vc)) => match vc {
                VecCost::Infinite => true,
                VecCost::Finite(xs) => xs.len() == m && xs.iter().all(|x| !x.is_negative()),
            },
            _ => false,
        }
    }

    pub fn check(&self, v: &CostValue) -> Result<(), DioidError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(DioidError::CarrierMismatch {
                kind: self.kind,
                value: format!("{v:?}"),
            })
        }
    }

    /// ⊕ on carrier values. Arguments are assumed to be in the carrier;
    /// use [`CostDioid::try_oplus`] for unvalidated input.
    pub fn oplus(&self, a: &CostValue, b: &CostValue) -> CostValue {
        use DioidKind::*;
        match (self.kind, a, b) {
            (MaxMin | MaxPlus | MaxTimes, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                CostValue::Scalar(x.max(y).clone())
            }
            (MinMax | MinPlus, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                CostValue::Scalar(x.min(y).clone())
            }
            (CupCap, CostValue::Set(x), CostValue::Set(y)) => CostValue::Set(x | y),
            (CapCup, CostValue::Set(x), CostValue::Set(y)) => CostValue::Set(x & y),
            (MinPlusVec(_), CostValue::Vector(x), CostValue::Vector(y)) => {
                CostValue::Vector(match (x, y) {
                    (VecCost::Infinite, other) | (other, VecCost::Infinite) => other.clone(),
                    (VecCost::Finite(xs), VecCost::Finite(ys)) => VecCost::Finite(
                        xs.iter().zip(ys).map(|(p, q)| p.min(q).clone()).collect(),
                    ),
                })
            }
            _ => panic!("oplus: value outside the {} carrier", self.kind),
        }
    }

    /// ⊗ on carrier values; ⊥ is absorbing, including against ⊤.
    pub fn otimes(&self, a: &CostValue, b: &CostValue) -> CostValue {
        use DioidKind::*;
        use Extended::*;
        match (self.kind, a, b) {
            (MinMax, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                CostValue::Scalar(x.max(y).clone())
            }
            (MaxMin, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                CostValue::Scalar(x.min(y).clone())
            }
            (MaxPlus, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                CostValue::Scalar(match (x, y) {
                    (NegInf, _) | (_, NegInf) => NegInf,
                    (PosInf, _) | (_, PosInf) => PosInf,
                    (Finite(p), Finite(q)) => Finite(p + q),
                })
            }
            (MinPlus, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                CostValue::Scalar(match (x, y) {
                    (PosInf, _) | (_, PosInf) => PosInf,
                    (NegInf, _) | (_, NegInf) => NegInf,
                    (Finite(p), Finite(q)) => Finite(p + q),
                })
            }
            (MaxTimes, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                let is_zero = |v: &Extended| matches!(v, Finite(q) if q.is_zero());
                CostValue::Scalar(if is_zero(x) || is_zero(y) {
                    Finite(BigRational::zero())
                } else {
                    match (x, y) {
                        (Finite(p), Finite(q)) => Finite(p * q),
                        _ => PosInf,
                    }
                })
            }
            (CupCap, CostValue::Set(x), CostValue::Set(y)) => CostValue::Set(x & y),
            (CapCup, CostValue::Set(x), CostValue::Set(y)) => CostValue::Set(x | y),
            (MinPlusVec(_), CostValue::Vector(x), CostValue::Vector(y)) => {
                CostValue::Vector(match (x, y) {
                    (VecCost::Infinite, _) | (_, VecCost::Infinite) => VecCost::Infinite,
                    (VecCost::Finite(xs), VecCost::Finite(ys)) => {
                        VecCost::Finite(xs.iter().zip(ys).map(|(p, q)| p + q).collect())
                    }
                })
            }
            _ => panic!("otimes: value outside the {} carrier", self.kind),
        }
    }

    pub fn try_oplus(&self, a: &CostValue, b: &CostValue) -> Result<CostValue, DioidError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.oplus(a, b))
    }

    pub fn try_otimes(&self, a: &CostValue, b: &CostValue) -> Result<CostValue, DioidError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.otimes(a, b))
    }

    /// ⊕ over an iterator; `⊥` for an empty one.
    pub fn sum<'a, I>(&self, values: I) -> CostValue
    where
        I: IntoIterator<Item = &'a CostValue>,
    {
        values
            .into_iter()
            .fold(self.zero(), |acc, v| self.oplus(&acc, v))
    }

    /// The induced order: `a ≤ b ⟺ a ⊕ b = b`.
    pub fn leq(&self, a: &CostValue, b: &CostValue) -> bool {
        self.oplus(a, b) == *b
    }

    pub fn try_leq(&self, a: &CostValue, b: &CostValue) -> Result<bool, DioidError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq(a, b))
    }

    /// `a ⊗ … ⊗ a` with `n` factors; `e` when `n = 0`.
    pub fn pow(&self, a: &CostValue, n: u32) -> CostValue {
        (0..n).fold(self.unit(), |acc, _| self.otimes(&acc, a))
    }

    /// The unique `r` with `rⁿ = q`.
    pub fn nth_root(&self, q: &CostValue, n: u32) -> Result<CostValue, DioidError> {
        if n == 0 {
            return Err(DioidError::ZeroRoot);
        }
        use DioidKind::*;
        let divide = |x: &BigRational| x / BigRational::from_integer(BigInt::from(n));
        Ok(match (self.kind, q) {
            (MinMax | MaxMin | CupCap | CapCup, _) => q.clone(),
            (MaxPlus | MinPlus, CostValue::Scalar(Extended::Finite(x))) => {
                CostValue::Scalar(Extended::Finite(divide(x)))
            }
            (MaxPlus | MinPlus, CostValue::Scalar(_)) => q.clone(),
            (MinPlusVec(_), CostValue::Vector(VecCost::Finite(xs))) => {
                CostValue::Vector(VecCost::Finite(xs.iter().map(divide).collect()))
            }
            (MinPlusVec(_), CostValue::Vector(VecCost::Infinite)) => q.clone(),
            (MaxTimes, CostValue::Scalar(Extended::Finite(x))) => {
                CostValue::Scalar(Extended::Finite(rational_root(x, n)))
            }
            (MaxTimes, CostValue::Scalar(_)) => q.clone(),
            _ => {
                return Err(DioidError::CarrierMismatch {
                    kind: self.kind,
                    value: format!("{q:?}"),
                })
            }
        })
    }

    /// `a* = e ⊕ a ⊕ a² ⊕ …`.
    ///
    /// On totally ordered carriers `a > e` certifies divergence and yields `⊤`.
    /// Otherwise partial sums are iterated until they stabilize.
    pub fn star(&self, a: &CostValue) -> Result<CostValue, DioidError> {
        let e = self.unit();
        if self.is_totally_ordered() && !self.leq(a, &e) {
            return Ok(self.top());
        }
        let mut sum = e.clone();
        let mut power = e;
        for _ in 0..STAR_ITERATION_CAP {
            power = self.otimes(&power, a);
            let next = self.oplus(&sum, &power);
            if next == sum {
                return Ok(sum);
            }
            sum = next;
        }
        Err(DioidError::StarIterationCap(STAR_ITERATION_CAP))
    }

    /// Left residual `a \ b`: the greatest `x` with `a ⊗ x ≤ b`.
    pub fn residual(&self, a: &CostValue, b: &CostValue) -> CostValue {
        use DioidKind::*;
        use Extended::*;
        let top = self.top();
        let zero = self.zero();
        match (self.kind, a, b) {
            (MaxPlus, CostValue::Scalar(x), CostValue::Scalar(y)) => match (x, y) {
                (NegInf, _) => top,
                (PosInf, PosInf) => top,
                (PosInf, _) => zero,
                (Finite(_), NegInf) => zero,
                (Finite(_), PosInf) => top,
                (Finite(p), Finite(q)) => CostValue::Scalar(Finite(q - p)),
            },
            (MinPlus, CostValue::Scalar(x), CostValue::Scalar(y)) => match (x, y) {
                (PosInf, _) => top,
                (NegInf, NegInf) => top,
                (NegInf, _) => zero,
                (Finite(_), PosInf) => zero,
                (Finite(_), NegInf) => top,
                (Finite(p), Finite(q)) => CostValue::Scalar(Finite(q - p)),
            },
            (MaxTimes, CostValue::Scalar(x), CostValue::Scalar(y)) => match (x, y) {
                (Finite(p), _) if p.is_zero() => top,
                (PosInf, PosInf) => top,
                (PosInf, _) => zero,
                (Finite(_), PosInf) => top,
                (Finite(p), Finite(q)) => CostValue::Scalar(Finite(q / p)),
                (NegInf, _) | (_, NegInf) => panic!("residual: -inf outside maxtimes carrier"),
            },
            (MinMax, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                if x >= y {
                    top
                } else {
                    b.clone()
                }
            }
            (MaxMin, CostValue::Scalar(x), CostValue::Scalar(y)) => {
                if x <= y {
                    top
                } else {
                    b.clone()
                }
            }
            (CupCap, CostValue::Set(x), CostValue::Set(y)) => {
                CostValue::Set((!x & self.universe_mask()) | y)
            }
            (CapCup, CostValue::Set(x), CostValue::Set(y)) => CostValue::Set(y & !x),
            (MinPlusVec(_), CostValue::Vector(x), CostValue::Vector(y)) => match (x, y) {
                (VecCost::Infinite, _) => top,
                (VecCost::Finite(_), VecCost::Infinite) => zero,
                (VecCost::Finite(xs), VecCost::Finite(ys)) => CostValue::Vector(VecCost::Finite(
                    xs.iter()
                        .zip(ys)
                        .map(|(p, q)| {
                            let d = q - p;
                            if d.is_negative() {
                                BigRational::zero()
                            } else {
                                d
                            }
                        })
                        .collect(),
                )),
            },
            _ => panic!("residual: value outside the {} carrier", self.kind),
        }
    }

    /// Equality, exact except for `maxtimes`, which compares finite values
    /// under the relative root tolerance.
    pub fn approx_eq(&self, a: &CostValue, b: &CostValue) -> bool {
        if a == b {
            return true;
        }
        match (self.kind, a, b) {
            (
                DioidKind::MaxTimes,
                CostValue::Scalar(Extended::Finite(x)),
                CostValue::Scalar(Extended::Finite(y)),
            ) => {
                let (x, y) = (x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN));
                (x - y).abs() <= self.root_tolerance * x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
            }
            _ => false,
        }
    }

    /// `≤` that tolerates root rounding in `maxtimes`.
    pub fn approx_leq(&self, a: &CostValue, b: &CostValue) -> bool {
        self.leq(a, b) || self.approx_eq(a, b)
    }

    /// Renders a value; `⊤` and `⊥` print as `top` and `bot`.
    pub fn format_value(&self, v: &CostValue) -> String {
        if self.is_top(v) {
            return "top".to_string();
        }
        if self.is_zero(v) {
            return "bot".to_string();
        }
        match v {
            CostValue::Scalar(Extended::Finite(q)) => q.to_string(),
            CostValue::Scalar(Extended::PosInf) => "inf".to_string(),
            CostValue::Scalar(Extended::NegInf) => "-inf".to_string(),
            CostValue::Set(mask) => {
                let names: Vec<&str> = self
                    .universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1u64 << i) != 0)
                    .map(|(_, n)| n.as_str())
                    .collect();
                format!("{{{}}}", names.join(","))
            }
            CostValue::Vector(VecCost::Infinite) => "inf".to_string(),
            CostValue::Vector(VecCost::Finite(xs)) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// Parses a cost literal for this carrier: `p/q`, decimals, `inf`,
    /// `-inf`, `top`, `bot`, `{a,b}` for sets and `(x,y)` for vectors.
    pub fn parse_value(&self, text: &str) -> Result<CostValue, DioidError> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let invalid = || DioidError::InvalidLiteral {
            kind: self.kind,
            literal: text.clone(),
        };
        let value = match text.as_str() {
            "top" => return Ok(self.top()),
            "bot" => return Ok(self.zero()),
            _ if self.kind.needs_universe() => {
                let inner = text
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(invalid)?;
                let mut mask = 0u64;
                for name in inner.split(',').filter(|n| !n.is_empty()) {
                    let idx = self
                        .universe
                        .iter()
                        .position(|u| u == name)
                        .ok_or_else(|| DioidError::NotInUniverse(name.to_string()))?;
                    mask |= 1u64 << idx;
                }
                CostValue::Set(mask)
            }
            _ if matches!(self.kind, DioidKind::MinPlusVec(_)) => {
                if matches!(text.as_str(), "inf" | "+inf") {
                    CostValue::Vector(VecCost::Infinite)
                } else {
                    let inner = text
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(invalid)?;
                    let xs = inner
                        .split(',')
                        .map(parse_rational)
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(invalid)?;
                    CostValue::Vector(VecCost::Finite(xs))
                }
            }
            "inf" | "+inf" => CostValue::pos_inf(),
            "-inf" => CostValue::neg_inf(),
            other => CostValue::Scalar(Extended::Finite(parse_rational(other).ok_or_else(invalid)?)),
        };
        if !self.contains(&value) {
            return Err(DioidError::CarrierMismatch {
                kind: self.kind,
                value: text,
            });
        }
        Ok(value)
    }
}

/// Parses `p`, `p/q` or a decimal such as `-3.25` exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac);
        let magnitude: BigInt = digits.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let q = BigRational::new(magnitude, scale);
        return Some(if negative { -q } else { q });
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// Nonnegative nth root, exact for perfect powers and rounded through `f64` otherwise.
fn rational_root(x: &BigRational, n: u32) -> BigRational {
    if n == 1 || x.is_zero() || x.is_one() {
        return x.clone();
    }
    let (p, q) = (x.numer(), x.denom());
    let (rp, rq) = (p.nth_root(n), q.nth_root(n));
    if rp.pow(n) == *p && rq.pow(n) == *q {
        return BigRational::new(rp, rq);
    }
    let approx = x.to_f64().unwrap_or(f64::INFINITY).powf(1.0 / f64::from(n));
    BigRational::from_float(approx).unwrap_or_else(|| x.clone())
}
