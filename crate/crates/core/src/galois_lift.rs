//! Galois connections lifted to moduloids.
//!
//! A concrete boolean lattice `B` is encoded on its atoms: every element is
//! the ⊕ of the unit vectors of the atoms below it. An abstract finite
//! lattice `A` is embedded in the powerset of its join-irreducible elements
//! (each element maps to the join-irreducibles below it), written `B(A)`.
//!
//! An abstraction `α: B → A` then splits into
//!
//! * the linear part `α₁`, a `{⊥, e}` matrix whose column for atom `b` is
//!   the encoding of `α(b)`;
//! * the projection `π`, sending a `B(A)` vector to the encoding of the least
//!   element of `A` above it (an upper closure);
//! * the residual `γ₁` of `α₁`, and the injection `ι` of encoded `A` into `B(A)`,
//!   which is the identity on vectors.
//!
//! `π ∘ α₁` is residuated with residual `γ₁ ∘ ι`, even though `π ∘ α₁` is not
//! linear when `A` is not boolean.

use std::sync::Arc;

use crate::cost_dioid::CostDioid;
use crate::error::LatticeError;
use crate::moduloid::{CostMatrix, CostVector};

/// Largest number of join-irreducibles (and concrete atoms) supported; vectors are bit masks.
pub const MAX_BASIS: usize = 64;

/// A finite lattice given by its order, with join/meet tables and its
/// set encoding over join-irreducible elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    join_irreducibles: Vec<usize>,
    encoding: Vec<u64>,
}

fn bit(i: usize) -> u64 {
    1u64 << i
}

fn subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

impl FiniteLattice {
    /// Builds a lattice from a reflexive, transitive order relation.
    pub fn from_order(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(LatticeError::DuplicateElement(name.clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(LatticeError::NotAntisymmetric(names[i].clone(), names[j].clone()));
                }
            }
        }
        let least_of = |cands: &[usize]| cands.iter().copied().find(|&c| cands.iter().all(|&k| leq[c][k]));
        let greatest_of = |cands: &[usize]| cands.iter().copied().find(|&c| cands.iter().all(|&k| leq[k][c]));
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let upper: Vec<usize> = (0..n).filter(|&k| leq[i][k] && leq[j][k]).collect();
                join[i][j] = least_of(&upper)
                    .ok_or_else(|| LatticeError::NoJoin(names[i].clone(), names[j].clone()))?;
                let lower: Vec<usize> = (0..n).filter(|&k| leq[k][i] && leq[k][j]).collect();
                meet[i][j] = greatest_of(&lower)
                    .ok_or_else(|| LatticeError::NoMeet(names[i].clone(), names[j].clone()))?;
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let bottom = least_of(&all).ok_or(LatticeError::Empty)?;
        let top = greatest_of(&all).ok_or(LatticeError::Empty)?;

        // j is join-irreducible iff it has exactly one lower cover.
        let covers_below = |j: usize| {
            (0..n)
                .filter(|&k| k != j && leq[k][j])
                .filter(|&k| !(0..n).any(|m| m != k && m != j && leq[k][m] && leq[m][j]))
                .count()
        };
        let join_irreducibles: Vec<usize> = (0..n).filter(|&j| j != bottom && covers_below(j) == 1).collect();
        if join_irreducibles.len() > MAX_BASIS {
            return Err(LatticeError::Syntax {
                line: 0,
                message: format!("{} join-irreducibles exceed the supported 64", join_irreducibles.len()),
            });
        }
        let encoding = (0..n)
            .map(|x| {
                join_irreducibles
                    .iter()
                    .enumerate()
                    .filter(|(_, &j)| leq[j][x])
                    .fold(0u64, |acc, (pos, _)| acc | bit(pos))
            })
            .collect();
        Ok(FiniteLattice {
            names,
            leq,
            join,
            meet,
            bottom,
            top,
            join_irreducibles,
            encoding,
        })
    }

    /// Builds a lattice from its cover pairs `(lower, upper)`.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(lo, hi) in covers {
            leq[lo][hi] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        FiniteLattice::from_order(names, leq)
    }

    /// The powerset of `atoms`, element `m` being the subset with bit mask `m`.
    pub fn powerset(atoms: &[String]) -> Result<Self, LatticeError> {
        if atoms.len() > 16 {
            return Err(LatticeError::NotBoolean(format!(
                "powerset of {} atoms is too large to tabulate",
                atoms.len()
            )));
        }
        let size = 1usize << atoms.len();
        let names = (0..size)
            .map(|mask| {
                let members: Vec<&str> = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, a)| a.as_str())
                    .collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let leq = (0..size)
            .map(|a| (0..size).map(|b| a & !b == 0).collect())
            .collect();
        FiniteLattice::from_order(names, leq)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_irreducibles(&self) -> &[usize] {
        &self.join_irreducibles
    }

    /// Dimension of `B(A)`, the powerset the lattice embeds into.
    pub fn basis_len(&self) -> usize {
        self.join_irreducibles.len()
    }

    /// Bit mask over [`FiniteLattice::join_irreducibles`].
    pub fn encoding(&self, x: usize) -> u64 {
        self.encoding[x]
    }

    pub fn encode(&self, dioid: &Arc<CostDioid>, x: usize) -> CostVector {
        mask_to_vector(dioid, self.basis_len(), self.encoding[x])
    }

    /// The element whose encoding is exactly `mask`, if any.
    pub fn decode(&self, mask: u64) -> Option<usize> {
        self.encoding.iter().position(|&m| m == mask)
    }

    /// Join of a set of elements; bottom for the empty set.
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// True when `x ∨ y` is encoded by the union of the encodings of `x` and `y`.
    pub fn join_is_union(&self, x: usize, y: usize) -> bool {
        self.encoding[self.join(x, y)] == self.encoding[x] | self.encoding[y]
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    /// Cover pairs `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for lo in 0..n {
            for hi in 0..n {
                if lo != hi
                    && self.leq[lo][hi]
                    && !(0..n).any(|m| m != lo && m != hi && self.leq[lo][m] && self.leq[m][hi])
                {
                    out.push((lo, hi));
                }
            }
        }
        out
    }

    /// Indices sorted by encoding size; any superset search in this order
    /// meets the least superset first.
    fn by_encoding_size(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| self.encoding[x].count_ones());
        order
    }
}

/// `e` at the set bits of `mask`.
pub fn mask_to_vector(dioid: &Arc<CostDioid>, len: usize, mask: u64) -> CostVector {
    CostVector::indicator(dioid.clone(), len, (0..len).filter(|&i| mask & bit(i) != 0))
}

/// Bit mask of a `{⊥, e}` vector; `None` when some entry is neither.
pub fn vector_to_mask(v: &CostVector) -> Option<u64> {
    let d = v.dioid();
    let unit = d.unit();
    let mut mask = 0u64;
    for (i, x) in v.entries().iter().enumerate() {
        if *x == unit {
            mask |= bit(i);
        } else if !d.is_zero(x) {
            return None;
        }
    }
    Some(mask)
}

/// The atom basis of a boolean lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanEncoding {
    /// Atom element ids, in element order.
    pub atoms: Vec<usize>,
    /// Per element, the bit mask of the atoms below it.
    pub masks: Vec<u64>,
}

/// Encodes a boolean lattice on its atoms, failing if some element is not
/// the union of the atoms below it.
pub fn encode_boolean(b: &FiniteLattice) -> Result<BooleanEncoding, LatticeError> {
    let atoms: Vec<usize> = b.join_irreducibles().to_vec();
    if let Some(&j) = atoms.iter().find(|&&j| b.covers().iter().all(|&(lo, hi)| !(hi == j && lo == b.bottom()))) {
        return Err(LatticeError::NotBoolean(format!(
            "join-irreducible `{}` is not an atom",
            b.name(j)
        )));
    }
    if atoms.len() >= 32 || b.len() != 1usize << atoms.len() {
        return Err(LatticeError::NotBoolean(format!(
            "{} elements over {} atoms",
            b.len(),
            atoms.len()
        )));
    }
    for x in 0..b.len() {
        for y in 0..b.len() {
            if !b.join_is_union(x, y) {
                return Err(LatticeError::NotBoolean(format!(
                    "join of `{}` and `{}` is not a union of atoms",
                    b.name(x),
                    b.name(y)
                )));
            }
        }
    }
    Ok(BooleanEncoding {
        atoms,
        masks: (0..b.len()).map(|x| b.encoding(x)).collect(),
    })
}

/// Name of an even interval `[lo, hi]` (`[k]` when `lo = hi`).
pub fn interval_name(lo: i64, hi: i64) -> String {
    if lo == hi {
        format!("[{lo}]")
    } else {
        format!("[{lo},{hi}]")
    }
}

/// Name of the empty interval.
pub const EMPTY_INTERVAL: &str = "empty";

/// Intervals with even bounds inside `{-n..n}`, plus the empty interval, ordered by inclusion.
///
/// Elements are listed by increasing upper bound, then increasing width, so
/// for `n = 2`: `empty, [-2], [0], [-2,0], [2], [0,2], [-2,2]`. The
/// join-irreducibles are the singleton intervals `[-n], …, [n]`.
pub fn even_interval_lattice(n: i64) -> Result<FiniteLattice, LatticeError> {
    if n <= 0 || n % 2 != 0 {
        return Err(LatticeError::InvalidBound(n));
    }
    let mut bounds: Vec<Option<(i64, i64)>> = vec![None];
    for hi in (-n..=n).step_by(2) {
        for lo in (-n..=hi).rev().step_by(2) {
            bounds.push(Some((lo, hi)));
        }
    }
    let names = bounds
        .iter()
        .map(|b| match b {
            None => EMPTY_INTERVAL.to_string(),
            Some((lo, hi)) => interval_name(*lo, *hi),
        })
        .collect();
    let leq = bounds
        .iter()
        .map(|x| {
            bounds
                .iter()
                .map(|y| match (x, y) {
                    (None, _) => true,
                    (Some(_), None) => false,
                    (Some((a, b)), Some((c, d))) => c <= a && b <= d,
                })
                .collect()
        })
        .collect();
    FiniteLattice::from_order(names, leq)
}

/// Even-interval abstraction of a single integer: `[k - (k mod 2), k + (k mod 2)]`.
pub fn even_interval_of(k: i64) -> (i64, i64) {
    let r = k.rem_euclid(2);
    (k - r, k + r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Least encoded lattice element above the vector.
    LeastUpperClosure,
    /// No projection; `π ∘ α₁` degenerates to `α₁`.
    Identity,
}

/// A Galois connection `B ⇄ A` lifted to `α₁`, `π`, `γ₁` over moduloids.
#[derive(Clone, Debug, PartialEq)]
pub struct GaloisLift {
    dioid: Arc<CostDioid>,
    concrete_atoms: Vec<String>,
    abstract_lattice: FiniteLattice,
    alpha: Vec<usize>,
    alpha1: CostMatrix,
    columns: Vec<u64>,
    projection: Projection,
}

/// Lifts `α`, given on the atoms of the boolean lattice `b` as `(atom, element of a)` pairs.
pub fn build_galois_lift(
    dioid: Arc<CostDioid>,
    b: &FiniteLattice,
    a: &FiniteLattice,
    alpha: &[(String, String)],
) -> Result<GaloisLift, LatticeError> {
    let basis = encode_boolean(b)?;
    let mut images = Vec::with_capacity(basis.atoms.len());
    for &atom in &basis.atoms {
        let atom_name = b.name(atom);
        let target = alpha
            .iter()
            .find(|(src, _)| src == atom_name)
            .ok_or_else(|| LatticeError::PartialAlpha(atom_name.to_string()))?;
        let image = a
            .index_of(&target.1)
            .ok_or_else(|| LatticeError::UnknownElement(target.1.clone()))?;
        images.push(image);
    }
    if let Some((src, _)) = alpha
        .iter()
        .find(|(src, _)| !basis.atoms.iter().any(|&x| b.name(x) == src))
    {
        return Err(LatticeError::UnknownElement(src.clone()));
    }
    let atom_names = basis.atoms.iter().map(|&x| b.name(x).to_string()).collect();
    Ok(GaloisLift::from_images(dioid, atom_names, a.clone(), images))
}

impl GaloisLift {
    /// Lifts `α` given as an abstract element per concrete atom.
    pub fn from_images(
        dioid: Arc<CostDioid>,
        concrete_atoms: Vec<String>,
        abstract_lattice: FiniteLattice,
        alpha: Vec<usize>,
    ) -> Self {
        assert_eq!(concrete_atoms.len(), alpha.len(), "one image per atom");
        assert!(concrete_atoms.len() <= MAX_BASIS, "too many concrete atoms");
        let rows = abstract_lattice.basis_len().max(1);
        let cols = concrete_atoms.len().max(1);
        let mut alpha1 = CostMatrix::zero(dioid.clone(), rows, cols);
        let columns: Vec<u64> = alpha.iter().map(|&x| abstract_lattice.encoding(x)).collect();
        for (c, &mask) in columns.iter().enumerate() {
            for r in 0..abstract_lattice.basis_len() {
                if mask & bit(r) != 0 {
                    alpha1.set(r, c, dioid.unit());
                }
            }
        }
        GaloisLift {
            dioid,
            concrete_atoms,
            abstract_lattice,
            alpha,
            alpha1,
            columns,
            projection: Projection::LeastUpperClosure,
        }
    }

    /// Even-interval abstraction of `P({-n..n})`.
    pub fn even_intervals(dioid: Arc<CostDioid>, n: i64) -> Result<Self, LatticeError> {
        let lattice = even_interval_lattice(n)?;
        let atoms: Vec<String> = (-n..=n).map(|k| k.to_string()).collect();
        let images = (-n..=n)
            .map(|k| {
                let (lo, hi) = even_interval_of(k);
                lattice
                    .index_of(&interval_name(lo, hi))
                    .expect("interval present in lattice")
            })
            .collect();
        Ok(GaloisLift::from_images(dioid, atoms, lattice, images))
    }

    /// Same lift with a different projection.
    pub fn with_projection(mut self, projection: Projection) -> Self {
        self.projection = projection;
        self
    }

    pub fn dioid(&self) -> &Arc<CostDioid> {
        &self.dioid
    }

    pub fn concrete_atoms(&self) -> &[String] {
        &self.concrete_atoms
    }

    pub fn abstract_lattice(&self) -> &FiniteLattice {
        &self.abstract_lattice
    }

    pub fn alpha_image(&self, atom: usize) -> usize {
        self.alpha[atom]
    }

    /// `α₁`: rows are join-irreducibles of `A`, columns are atoms of `B`.
    pub fn alpha1(&self) -> &CostMatrix {
        &self.alpha1
    }

    pub fn concrete_dim(&self) -> usize {
        self.concrete_atoms.len()
    }

    pub fn abstract_dim(&self) -> usize {
        self.abstract_lattice.basis_len()
    }

    /// Vector encoding a subset of concrete atoms.
    pub fn concrete_vector(&self, atoms: &[usize]) -> CostVector {
        CostVector::indicator(self.dioid.clone(), self.concrete_dim(), atoms.iter().copied())
    }

    /// Vector encoding an element of `A`.
    pub fn abstract_vector(&self, x: usize) -> CostVector {
        self.abstract_lattice.encode(&self.dioid, x)
    }

    fn alpha1_mask(&self, concrete: u64) -> u64 {
        self.columns
            .iter()
            .enumerate()
            .filter(|(c, _)| concrete & bit(*c) != 0)
            .fold(0, |acc, (_, &m)| acc | m)
    }

    fn pi_mask(&self, x: u64) -> u64 {
        match self.projection {
            Projection::Identity => x,
            Projection::LeastUpperClosure => {
                let lattice = &self.abstract_lattice;
                lattice
                    .by_encoding_size()
                    .into_iter()
                    .map(|e| lattice.encoding(e))
                    .find(|&m| subset(x, m))
                    .expect("top encodes every join-irreducible")
            }
        }
    }

    fn gamma1_mask(&self, y: u64) -> u64 {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, &m)| subset(m, y))
            .fold(0, |acc, (c, _)| acc | bit(c))
    }

    /// `α₁ v`.
    pub fn apply_alpha1(&self, v: &CostVector) -> Result<CostVector, crate::error::MatrixError> {
        self.alpha1.mul_vec(v).map(|out| {
            if self.abstract_dim() == 0 {
                CostVector::zero(self.dioid.clone(), 0)
            } else {
                out
            }
        })
    }

    /// `π x`: encoding of the least element of `A` above `x`.
    ///
    /// # Panics
    /// If `x` has entries outside `{⊥, e}` or the wrong length.
    pub fn project_pi(&self, x: &CostVector) -> CostVector {
        assert_eq!(x.len(), self.abstract_dim(), "vector over B(A) expected");
        let mask = vector_to_mask(x).expect("π is defined on {⊥, e} vectors");
        mask_to_vector(&self.dioid, self.abstract_dim(), self.pi_mask(mask))
    }

    /// `γ₁ y`: the greatest `{⊥, e}` vector `v` with `α₁ v ≤ y`. Component
    /// `b` is `e` iff the encoding of `α(b)` lies below `y`.
    ///
    /// # Panics
    /// If `y` has entries outside `{⊥, e}` or the wrong length.
    pub fn apply_gamma1(&self, y: &CostVector) -> CostVector {
        assert_eq!(y.len(), self.abstract_dim(), "vector over B(A) expected");
        let mask = vector_to_mask(y).expect("γ₁ is defined on {⊥, e} vectors");
        mask_to_vector(&self.dioid, self.concrete_dim(), self.gamma1_mask(mask))
    }

    /// `ι`: encoded elements of `A` are already `B(A)` vectors.
    pub fn inject(&self, x: &CostVector) -> CostVector {
        x.clone()
    }

    /// `π ∘ α₁` on a concrete bit mask.
    pub fn abstraction_mask(&self, concrete: u64) -> u64 {
        self.pi_mask(self.alpha1_mask(concrete))
    }

    /// `γ₁ ∘ ι` on an abstract bit mask.
    pub fn concretization_mask(&self, abstract_mask: u64) -> u64 {
        self.gamma1_mask(abstract_mask)
    }

    /// `α₁` on a concrete bit mask.
    pub fn linear_mask(&self, concrete: u64) -> u64 {
        self.alpha1_mask(concrete)
    }

    /// `π` on a `B(A)` bit mask.
    pub fn projection_mask(&self, x: u64) -> u64 {
        self.pi_mask(x)
    }
}

/// Outcome of [`check_residuated_pair`]; every flag must hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResiduationReport {
    /// `π ∘ α₁` lands in encoded `A` for every concrete vector.
    pub range_in_lattice: bool,
    /// `(π∘α₁)∘(γ₁∘ι) ≤ Id` on encoded `A`.
    pub reductive: bool,
    /// `Id ≤ (γ₁∘ι)∘(π∘α₁)` on encoded `B`.
    pub extensive: bool,
    pub abstraction_monotone: bool,
    pub concretization_monotone: bool,
}

impl ResiduationReport {
    pub fn holds(&self) -> bool {
        self.range_in_lattice
            && self.reductive
            && self.extensive
            && self.abstraction_monotone
            && self.concretization_monotone
    }
}

/// Exhaustively checks that `π ∘ α₁` and `γ₁ ∘ ι` form a Galois connection
/// between encoded `B` and encoded `A`.
///
/// # Panics
/// Above 20 concrete atoms, where exhaustive enumeration is impractical.
pub fn check_residuated_pair(g: &GaloisLift) -> ResiduationReport {
    let k = g.concrete_dim();
    assert!(k <= 20, "exhaustive check limited to 20 concrete atoms");
    let lattice = g.abstract_lattice();
    let concrete: Vec<u64> = (0..1u64 << k).collect();
    let f: Vec<u64> = concrete.iter().map(|&b| g.abstraction_mask(b)).collect();
    let encoded: Vec<u64> = (0..lattice.len()).map(|x| lattice.encoding(x)).collect();
    let gm: Vec<u64> = encoded.iter().map(|&a| g.concretization_mask(a)).collect();

    let range_in_lattice = f.iter().all(|m| lattice.decode(*m).is_some());
    let reductive = encoded
        .iter()
        .zip(&gm)
        .all(|(&a, &c)| subset(g.abstraction_mask(c), a));
    let extensive = concrete
        .iter()
        .zip(&f)
        .all(|(&b, &fb)| subset(b, g.concretization_mask(fb)));
    let abstraction_monotone = concrete.iter().all(|&b1| {
        concrete
            .iter()
            .filter(|&&b2| subset(b1, b2))
            .all(|&b2| subset(f[b1 as usize], f[b2 as usize]))
    });
    let concretization_monotone = (0..encoded.len()).all(|x| {
        (0..encoded.len())
            .filter(|&y| subset(encoded[x], encoded[y]))
            .all(|y| subset(gm[x], gm[y]))
    });
    ResiduationReport {
        range_in_lattice,
        reductive,
        extensive,
        abstraction_monotone,
        concretization_monotone,
    }
}

/// Two concrete sets pushed through both lifts of the same abstraction.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearizabilityReport {
    pub left: Vec<String>,
    pub right: Vec<String>,
    /// Lattice elements indexing the one-vector-per-element lift, in order.
    pub partition_basis: Vec<String>,
    /// `α(left) ⊕ α(right)` in the one-vector-per-element lift.
    pub partition_sum: CostVector,
    /// `α(left ∪ right)` in the same lift.
    pub partition_joint: CostVector,
    /// `π(α₁(left ∪ right))`.
    pub lifted_joint: CostVector,
    /// Encoding of `α(left ∪ right)`.
    pub lifted_expected: CostVector,
    /// `π(α₁ left) ⊕ π(α₁ right)`.
    pub lifted_sum: CostVector,
}

impl LinearizabilityReport {
    /// The one-vector-per-element lift is not additive on this pair.
    pub fn partition_mismatch(&self) -> bool {
        self.partition_sum != self.partition_joint
    }

    /// 1-based positions of `e` in the partition-style sum and joint image.
    pub fn mismatch_positions(&self) -> (Vec<usize>, Vec<usize>) {
        let one_based = |v: &CostVector| v.support().into_iter().map(|i| i + 1).collect();
        (one_based(&self.partition_sum), one_based(&self.partition_joint))
    }

    /// `π ∘ α₁` reproduces `α` on the joint set.
    pub fn lifted_agrees(&self) -> bool {
        self.lifted_joint == self.lifted_expected
    }

    /// `π ∘ α₁` is additive on this pair.
    pub fn lifted_additive(&self) -> bool {
        self.lifted_sum == self.lifted_joint
    }
}

/// Compares both lifts of `g`'s abstraction on two sets of concrete atoms.
pub fn linearizability_check(g: &GaloisLift, left: &[usize], right: &[usize]) -> LinearizabilityReport {
    let lattice = g.abstract_lattice();
    let d = g.dioid();
    let to_mask = |atoms: &[usize]| atoms.iter().fold(0u64, |m, &a| m | bit(a));
    let (lm, rm) = (to_mask(left), to_mask(right));
    let alpha_of = |mask: u64| {
        lattice.join_all((0..g.concrete_dim()).filter(|&a| mask & bit(a) != 0).map(|a| g.alpha_image(a)))
    };
    let unit_at = |x: usize| CostVector::indicator(d.clone(), lattice.len(), [x]);
    let partition_sum = unit_at(alpha_of(lm))
        .oplus(&unit_at(alpha_of(rm)))
        .expect("same length");
    let partition_joint = unit_at(alpha_of(lm | rm));
    let dim = g.abstract_dim();
    let lifted = |mask: u64| mask_to_vector(d, dim, g.abstraction_mask(mask));
    let names = |atoms: &[usize]| atoms.iter().map(|&a| g.concrete_atoms()[a].clone()).collect();
    LinearizabilityReport {
        left: names(left),
        right: names(right),
        partition_basis: lattice.names().to_vec(),
        partition_sum,
        partition_joint,
        lifted_joint: lifted(lm | rm),
        lifted_expected: lattice.encode(d, alpha_of(lm | rm)),
        lifted_sum: lifted(lm).oplus(&lifted(rm)).expect("same length"),
    }
}

/// The even-interval example at `n = 2` on `{-2}` and `{2}`.
pub fn check_linearizability_counterexample() -> LinearizabilityReport {
    let dioid = Arc::new(CostDioid::maxplus());
    let g = GaloisLift::even_intervals(dioid, 2).expect("n = 2 is valid");
    let pos = |name: &str| {
        g.concrete_atoms()
            .iter()
            .position(|a| a == name)
            .expect("atom present")
    };
    linearizability_check(&g, &[pos("-2")], &[pos("2")])
}

/// First pair of concrete atoms on which `π ∘ α₁` is not additive.
pub fn find_linearizability_counterexample(g: &GaloisLift) -> Option<(usize, usize)> {
    let k = g.concrete_dim();
    (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .find(|&(i, j)| g.abstraction_mask(bit(i)) | g.abstraction_mask(bit(j)) != g.abstraction_mask(bit(i) | bit(j)))
}

/// A custom lattice with an atom map, as read from a lattice file.
#[derive(Clone, Debug)]
pub struct LatticeFile {
    pub lattice: FiniteLattice,
    /// `(concrete atom, abstract element)` in file order.
    pub alpha: Vec<(String, String)>,
}

impl LatticeFile {
    /// Concrete atoms in order of appearance.
    pub fn atoms(&self) -> Vec<String> {
        self.alpha.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn into_lift(self, dioid: Arc<CostDioid>) -> Result<GaloisLift, LatticeError> {
        let b = FiniteLattice::powerset(&self.atoms())?;
        let alpha: Vec<(String, String)> = self
            .alpha
            .iter()
            .map(|(atom, x)| (format!("{{{atom}}}"), x.clone()))
            .collect();
        let lift = build_galois_lift(dioid, &b, &self.lattice, &alpha)?;
        Ok(GaloisLift {
            concrete_atoms: self.atoms(),
            ..lift
        })
    }
}

/// Parses `element a b c`, `cover x y` (x covered by y) and `alpha atom -> element` lines.
pub fn parse_lattice_file(text: &str) -> Result<LatticeFile, LatticeError> {
    let mut names: Vec<String> = Vec::new();
    let mut covers: Vec<(String, String, usize)> = Vec::new();
    let mut alpha: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| LatticeError::Syntax { line: line_no, message };
        let mut words = line.split_whitespace();
        match words.next() {
            Some("element") => {
                for w in words {
                    if names.iter().any(|n| n == w) {
                        return Err(LatticeError::DuplicateElement(w.to_string()));
                    }
                    names.push(w.to_string());
                }
            }
            Some("cover") => {
                let parts: Vec<&str> = words.collect();
                let [lo, hi] = parts[..] else {
                    return Err(syntax("expected `cover LOWER UPPER`".into()));
                };
                covers.push((lo.to_string(), hi.to_string(), line_no));
            }
            Some("alpha") => {
                let rest = line["alpha".len()..].trim();
                let (atom, target) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax("expected `alpha ATOM -> ELEMENT`".into()))?;
                let (atom, target) = (atom.trim(), target.trim());
                if atom.is_empty() || target.is_empty() {
                    return Err(syntax("expected `alpha ATOM -> ELEMENT`".into()));
                }
                if alpha.iter().any(|(a, _)| a == atom) {
                    return Err(syntax(format!("atom `{atom}` mapped twice")));
                }
                alpha.push((atom.to_string(), target.to_string()));
            }
            Some(other) => return Err(syntax(format!("unknown directive `{other}`"))),
            None => {}
        }
    }
    let index = |name: &str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
    };
    let cover_ids = covers
        .iter()
        .map(|(lo, hi, _)| Ok((index(lo)?, index(hi)?)))
        .collect::<Result<Vec<_>, LatticeError>>()?;
    for (_, target) in &alpha {
        index(target)?;
    }
    let lattice = FiniteLattice::from_covers(names, &cover_ids)?;
    Ok(LatticeFile { lattice, alpha })
}
