//! Graded vector spaces over exact rationals and sparse graded multilinear
//! maps.
//!
//! All coefficients are arbitrary-precision rationals: every identity checked
//! by this crate is a polynomial identity in signs and coefficients, so
//! equality tests are exact, never approximate. A [`MultiMap`] is a sparse
//! multilinear map `V^⊗k → W` of a fixed internal degree; an
//! [`OperatorSeries`] is an arity-indexed family of endo-maps sharing one
//! B-degree, the carrier for structures like `μ = μ₁ + μ₂ + ⋯`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::signs::{all_permutations, antisym_koszul_sign, Permutation};

/// Exact rational scalar; always kept in lowest terms with positive
/// denominator by the underlying representation.
pub type Scalar = BigRational;

/// Integer scalar shorthand.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// Rational scalar shorthand.
pub fn rat(numer: i64, denom: i64) -> Scalar {
    Scalar::new(numer.into(), denom.into())
}

#[derive(Debug, PartialEq, Eq)]
struct SpaceInner {
    name: String,
    basis: Vec<(String, i64)>,
}

/// A finite-dimensional graded vector space with a named, ordered basis.
///
/// The declaration order of the basis is the fixed total order referenced by
/// every canonical form (sorted antisymmetric storage, deterministic
/// printing). Cloning is cheap.
#[derive(Debug, Clone)]
pub struct GradedSpace(Arc<SpaceInner>);

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new(name: impl Into<String>, basis: Vec<(String, i64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (b, _) in &basis {
            if !seen.insert(b.clone()) {
                return Err(Error::Validation(format!("duplicate basis name `{b}`")));
            }
        }
        Ok(Self(Arc::new(SpaceInner {
            name: name.into(),
            basis,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    pub fn basis_name(&self, index: usize) -> &str {
        &self.0.basis[index].0
    }

    pub fn degree(&self, index: usize) -> i64 {
        self.0.basis[index].1
    }

    pub fn basis(&self) -> &[(String, i64)] {
        &self.0.basis
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .basis
            .iter()
            .position(|(b, _)| b == name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    /// Basis vector by index.
    pub fn e(&self, index: usize) -> Vector {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(index, Scalar::one());
        Vector {
            space: self.clone(),
            coeffs,
        }
    }

    /// Basis vector by name.
    pub fn gen(&self, name: &str) -> Result<Vector> {
        Ok(self.e(self.index_of(name)?))
    }

    /// The same space with all degrees negated (the convention flip
    /// `V_k ↦ V_{−k}`).
    pub fn flipped(&self) -> Self {
        Self(Arc::new(SpaceInner {
            name: self.0.name.clone(),
            basis: self
                .0
                .basis
                .iter()
                .map(|(b, d)| (b.clone(), -d))
                .collect(),
        }))
    }

    /// All index tuples of the given length, lexicographically.
    pub fn all_tuples(&self, len: usize) -> Vec<Vec<usize>> {
        let dim = self.dim();
        let mut out = Vec::new();
        let mut t = vec![0usize; len];
        if dim == 0 && len > 0 {
            return out;
        }
        loop {
            out.push(t.clone());
            let mut pos = len;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                t[pos] += 1;
                if t[pos] < dim {
                    break;
                }
                t[pos] = 0;
            }
        }
    }

    /// Index tuples in canonical antisymmetric storage form: non-decreasing,
    /// with repeats admitted only on odd-degree basis elements.
    pub fn canonical_tuples(&self, len: usize) -> Vec<Vec<usize>> {
        let dim = self.dim();
        let mut out = Vec::new();
        let mut t: Vec<usize> = Vec::with_capacity(len);
        fn rec(space: &GradedSpace, dim: usize, len: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if t.len() == len {
                out.push(t.clone());
                return;
            }
            let lo = t.last().copied().unwrap_or(0);
            for i in lo..dim {
                if Some(&i) == t.last() && space.degree(i) % 2 == 0 {
                    continue;
                }
                t.push(i);
                rec(space, dim, len, t, out);
                t.pop();
            }
        }
        rec(self, dim, len, &mut t, &mut out);
        out
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

/// A sparse vector in a graded space.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    space: GradedSpace,
    coeffs: BTreeMap<usize, Scalar>,
}

impl Vector {
    pub fn zero(space: GradedSpace) -> Self {
        Self {
            space,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs(space: GradedSpace, coeffs: Vec<(usize, Scalar)>) -> Self {
        let mut v = Self::zero(space);
        for (i, c) in coeffs {
            v.add_term(i, &c);
        }
        v
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: usize) -> Scalar {
        self.coeffs.get(&index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    /// The common degree of all terms, if the vector is homogeneous.
    /// The zero vector is homogeneous of every degree and reports `None`.
    pub fn degree(&self) -> Option<i64> {
        let mut deg = None;
        for (&i, _) in &self.coeffs {
            let d = self.space.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn add_term(&mut self, index: usize, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, coeff: &Scalar) {
        assert_eq!(self.space, other.space, "vector spaces differ");
        for (i, c) in other.iter() {
            self.add_term(i, &(c * coeff));
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn scaled(&self, coeff: &Scalar) -> Vector {
        let mut out = Vector::zero(self.space.clone());
        out.add_scaled(self, coeff);
        out
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.iter() {
            let name = self.space.basis_name(i);
            if first {
                if c.is_one() {
                    write!(f, "{name}")?;
                } else if (-c.clone()).is_one() {
                    write!(f, "-{name}")?;
                } else {
                    write!(f, "{c}*{name}")?;
                }
                first = false;
            } else if c.is_negative() {
                let neg = -c.clone();
                if neg.is_one() {
                    write!(f, " - {name}")?;
                } else {
                    write!(f, " - {neg}*{name}")?;
                }
            } else if c.is_one() {
                write!(f, " + {name}")?;
            } else {
                write!(f, " + {c}*{name}")?;
            }
        }
        Ok(())
    }
}

/// A sparse multilinear map `domain^⊗arity → codomain` of fixed internal
/// degree.
///
/// Entries are keyed by basis index tuples. A map flagged antisymmetric
/// stores entries only on canonical tuples (non-decreasing, repeats only on
/// odd-degree basis elements); lookups on other tuples resolve through the
/// antisymmetric Koszul sign, and a tuple repeating an even-degree element is
/// zero by the sign rule. Immutable after construction.
#[derive(Debug, Clone)]
pub struct MultiMap {
    domain: GradedSpace,
    codomain: GradedSpace,
    arity: usize,
    degree: i64,
    antisym: bool,
    entries: BTreeMap<Vec<usize>, Vector>,
}

impl MultiMap {
    pub fn builder(domain: GradedSpace, codomain: GradedSpace, arity: usize, degree: i64) -> MultiMapBuilder {
        MultiMapBuilder {
            map: MultiMap {
                domain,
                codomain,
                arity,
                degree,
                antisym: false,
                entries: BTreeMap::new(),
            },
        }
    }

    /// Builder for an endo-map on one space.
    pub fn endo_builder(space: GradedSpace, arity: usize, degree: i64) -> MultiMapBuilder {
        Self::builder(space.clone(), space, arity, degree)
    }

    pub fn zero(domain: GradedSpace, codomain: GradedSpace, arity: usize, degree: i64) -> Self {
        Self {
            domain,
            codomain,
            arity,
            degree,
            antisym: false,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(space: GradedSpace) -> Self {
        let mut entries = BTreeMap::new();
        for i in 0..space.dim() {
            entries.insert(vec![i], space.e(i));
        }
        Self {
            domain: space.clone(),
            codomain: space,
            arity: 1,
            degree: 0,
            antisym: false,
            entries,
        }
    }

    pub fn domain(&self) -> &GradedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &GradedSpace {
        &self.codomain
    }

    pub fn is_endo(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// B-degree `p − k + 1` of an arity-`k`, degree-`p` map.
    pub fn b_degree(&self) -> i64 {
        self.degree - self.arity as i64 + 1
    }

    /// Arity-1 maps are antisymmetric for free: there is nothing to swap.
    pub fn is_antisym(&self) -> bool {
        self.antisym || self.arity <= 1
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored entries, keyed by canonical tuples when antisymmetric.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.entries.iter()
    }

    /// Canonical tuple and resolving sign, or `None` when the sign rule
    /// forces the value to zero (a repeated even-degree element).
    fn canonicalize(&self, tuple: &[usize]) -> Option<(Vec<usize>, i64)> {
        let sigma = Permutation::sorting(tuple);
        let sorted: Vec<usize> = sigma.images().iter().map(|&t| tuple[t]).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] && self.domain.degree(w[0]) % 2 == 0 {
                return None;
            }
        }
        let degs: Vec<i64> = tuple.iter().map(|&i| self.domain.degree(i)).collect();
        let chi = antisym_koszul_sign(&sigma, &degs).expect("lengths agree");
        Some((sorted, chi))
    }

    /// Value on a basis index tuple.
    pub fn value_on_basis(&self, tuple: &[usize]) -> Vector {
        assert_eq!(tuple.len(), self.arity, "tuple length must equal arity");
        if self.antisym {
            match self.canonicalize(tuple) {
                None => Vector::zero(self.codomain.clone()),
                Some((sorted, chi)) => match self.entries.get(&sorted) {
                    None => Vector::zero(self.codomain.clone()),
                    Some(v) => v.scaled(&int(chi)),
                },
            }
        } else {
            self.entries
                .get(tuple)
                .cloned()
                .unwrap_or_else(|| Vector::zero(self.codomain.clone()))
        }
    }

    /// Multilinear extension: apply the map to homogeneous vectors.
    pub fn apply(&self, args: &[Vector]) -> Result<Vector> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        for (i, a) in args.iter().enumerate() {
            if *a.space() != self.domain {
                return Err(Error::SpaceMismatch);
            }
            if !a.is_zero() && a.degree().is_none() {
                return Err(Error::InhomogeneousArgument { index: i });
            }
        }
        let mut out = Vector::zero(self.codomain.clone());
        let supports: Vec<Vec<(usize, Scalar)>> = args
            .iter()
            .map(|a| a.iter().map(|(i, c)| (i, c.clone())).collect())
            .collect();
        if supports.iter().any(|s| s.is_empty()) && self.arity > 0 {
            return Ok(out);
        }
        let mut cursor = vec![0usize; self.arity];
        loop {
            let mut coeff = Scalar::one();
            let tuple: Vec<usize> = cursor
                .iter()
                .enumerate()
                .map(|(slot, &c)| {
                    let (i, ref s) = supports[slot][c];
                    coeff *= s.clone();
                    i
                })
                .collect();
            out.add_scaled(&self.value_on_basis(&tuple), &coeff);
            let mut pos = self.arity;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                cursor[pos] += 1;
                if cursor[pos] < supports[pos].len() {
                    break;
                }
                cursor[pos] = 0;
            }
        }
    }

    /// Sum of two maps with identical signatures. Mixed storage conventions
    /// fall back to plain storage.
    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        self.check_same_signature(other)?;
        if self.antisym && other.antisym {
            let mut entries = self.entries.clone();
            for (t, v) in &other.entries {
                let e = entries
                    .entry(t.clone())
                    .or_insert_with(|| Vector::zero(self.codomain.clone()));
                *e = e.add(v);
            }
            entries.retain(|_, v| !v.is_zero());
            Ok(MultiMap {
                antisym: true,
                entries,
                ..self.clone_signature()
            })
        } else {
            let mut entries = BTreeMap::new();
            for t in self.domain.all_tuples(self.arity) {
                let v = self.value_on_basis(&t).add(&other.value_on_basis(&t));
                if !v.is_zero() {
                    entries.insert(t, v);
                }
            }
            Ok(MultiMap {
                antisym: false,
                entries,
                ..self.clone_signature()
            })
        }
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.add(&other.scaled(&-Scalar::one()))
    }

    pub fn scaled(&self, coeff: &Scalar) -> MultiMap {
        let mut out = self.clone();
        if coeff.is_zero() {
            out.entries.clear();
            return out;
        }
        for v in out.entries.values_mut() {
            *v = v.scaled(coeff);
        }
        out
    }

    fn clone_signature(&self) -> MultiMap {
        MultiMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            arity: self.arity,
            degree: self.degree,
            antisym: false,
            entries: BTreeMap::new(),
        }
    }

    fn check_same_signature(&self, other: &MultiMap) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::SpaceMismatch);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                context: "map sum".into(),
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    /// The same map with all degrees negated, living on the flipped spaces.
    pub fn flipped(&self) -> MultiMap {
        let domain = self.domain.flipped();
        let codomain = self.codomain.flipped();
        let entries = self
            .entries
            .iter()
            .map(|(t, v)| {
                (
                    t.clone(),
                    Vector::from_coeffs(
                        codomain.clone(),
                        v.iter().map(|(i, c)| (i, c.clone())).collect(),
                    ),
                )
            })
            .collect();
        MultiMap {
            domain,
            codomain,
            arity: self.arity,
            degree: -self.degree,
            antisym: self.antisym,
            entries,
        }
    }
}

impl PartialEq for MultiMap {
    /// Equality as multilinear maps, independent of storage convention.
    fn eq(&self, other: &Self) -> bool {
        if self.domain != other.domain
            || self.codomain != other.codomain
            || self.arity != other.arity
        {
            return false;
        }
        if self.degree != other.degree && !(self.is_zero() && other.is_zero()) {
            return false;
        }
        self.domain
            .all_tuples(self.arity)
            .iter()
            .all(|t| self.value_on_basis(t) == other.value_on_basis(t))
    }
}

pub struct MultiMapBuilder {
    map: MultiMap,
}

impl MultiMapBuilder {
    pub fn antisym(mut self) -> Self {
        self.map.antisym = true;
        self
    }

    /// Adds an entry by basis names; antisymmetric entries given on
    /// non-canonical tuples are resolved through the sign rule.
    pub fn entry(self, inputs: &[&str], value: &[(Scalar, &str)]) -> Result<Self> {
        let tuple: Vec<usize> = inputs
            .iter()
            .map(|n| self.map.domain.index_of(n))
            .collect::<Result<_>>()?;
        let mut v = Vector::zero(self.map.codomain.clone());
        for (c, n) in value {
            v.add_term(self.map.codomain.index_of(n)?, c);
        }
        self.entry_indices(tuple, v)
    }

    /// Adds an entry by basis index tuple.
    pub fn entry_indices(mut self, tuple: Vec<usize>, value: Vector) -> Result<Self> {
        if tuple.len() != self.map.arity {
            return Err(Error::ArityMismatch {
                expected: self.map.arity,
                got: tuple.len(),
            });
        }
        if tuple.iter().any(|&i| i >= self.map.domain.dim()) {
            return Err(Error::Validation("basis index out of range".into()));
        }
        let (key, value) = if self.map.antisym {
            match self.map.canonicalize(&tuple) {
                None => {
                    if value.is_zero() {
                        return Ok(self);
                    }
                    return Err(Error::Validation(format!(
                        "antisymmetric entry on {tuple:?} repeats an even-degree element and must be zero"
                    )));
                }
                Some((sorted, chi)) => (sorted, value.scaled(&int(chi))),
            }
        } else {
            (tuple, value)
        };
        if value.is_zero() {
            return Ok(self);
        }
        let expected: i64 = key
            .iter()
            .map(|&i| self.map.domain.degree(i))
            .sum::<i64>()
            + self.map.degree;
        match value.degree() {
            Some(d) if d == expected => {}
            Some(d) => {
                return Err(Error::DegreeMismatch {
                    context: format!("{key:?}"),
                    expected,
                    got: d,
                })
            }
            None => {
                return Err(Error::DegreeMismatch {
                    context: format!("{key:?} (inhomogeneous value)"),
                    expected,
                    got: 0,
                })
            }
        }
        if self.map.entries.contains_key(&key) {
            return Err(Error::DuplicateEntry(format!("{key:?}")));
        }
        self.map.entries.insert(key, value);
        Ok(self)
    }

    pub fn build(self) -> MultiMap {
        self.map
    }
}

/// Re-stores a map in antisymmetric form after verifying the adjacent-swap
/// identity on every basis tuple; errors if the map is not antisymmetric.
pub fn into_antisym(f: &MultiMap) -> Result<MultiMap> {
    if f.is_antisym() {
        return Ok(f.clone());
    }
    if !f.is_endo() {
        return Err(Error::SpaceMismatch);
    }
    let space = f.domain().clone();
    let k = f.arity();
    for t in space.all_tuples(k) {
        for i in 0..k.saturating_sub(1) {
            let mut s = t.clone();
            s.swap(i, i + 1);
            let sign = if space.degree(t[i]) % 2 != 0 && space.degree(t[i + 1]) % 2 != 0 {
                1
            } else {
                -1
            };
            if f.value_on_basis(&t) != f.value_on_basis(&s).scaled(&int(sign)) {
                return Err(Error::NotAntisymmetric(format!("map entry at {t:?}")));
            }
        }
    }
    let mut entries = BTreeMap::new();
    for t in space.canonical_tuples(k) {
        let v = f.value_on_basis(&t);
        if !v.is_zero() {
            entries.insert(t, v);
        }
    }
    Ok(MultiMap {
        domain: f.domain().clone(),
        codomain: f.codomain().clone(),
        arity: k,
        degree: f.degree(),
        antisym: true,
        entries,
    })
}

/// Anti-symmetrization `as(f)(v₁,…,v_k) = Σ_σ χ(σ)·f(v_{σ(1)},…,v_{σ(k)})`.
pub fn antisymmetrize(f: &MultiMap) -> MultiMap {
    let k = f.arity();
    let space = f.domain().clone();
    let mut entries = BTreeMap::new();
    for tuple in space.canonical_tuples(k) {
        let degs: Vec<i64> = tuple.iter().map(|&i| space.degree(i)).collect();
        let mut value = Vector::zero(f.codomain().clone());
        for sigma in all_permutations(k) {
            let permuted: Vec<usize> = sigma.images().iter().map(|&t| tuple[t]).collect();
            let chi = antisym_koszul_sign(&sigma, &degs).expect("lengths agree");
            value.add_scaled(&f.value_on_basis(&permuted), &int(chi));
        }
        if !value.is_zero() {
            entries.insert(tuple, value);
        }
    }
    MultiMap {
        domain: f.domain().clone(),
        codomain: f.codomain().clone(),
        arity: k,
        degree: f.degree(),
        antisym: true,
        entries,
    }
}

/// Composition in one slot: `f ∘_slot g` with the Koszul sign
/// `(−1)^{deg(g)·(deg v₁ + ⋯)}` for the inputs `g` jumps over.
///
/// For `arity(f) = 1` this is plain composition and `g` may map between
/// different spaces; for higher arities both maps must live on one space.
pub fn compose_in_slot(f: &MultiMap, g: &MultiMap, slot: usize) -> Result<MultiMap> {
    if slot >= f.arity() {
        return Err(Error::SlotOutOfRange {
            slot,
            arity: f.arity(),
        });
    }
    if *g.codomain() != *f.domain() {
        return Err(Error::SpaceMismatch);
    }
    if f.arity() > 1 && *g.domain() != *f.domain() {
        return Err(Error::SpaceMismatch);
    }
    let arity = f.arity() + g.arity() - 1;
    let degree = f.degree() + g.degree();
    let domain = if f.arity() == 1 {
        g.domain().clone()
    } else {
        f.domain().clone()
    };
    let mut entries = BTreeMap::new();
    for tuple in domain.all_tuples(arity) {
        let left = &tuple[..slot];
        let block = &tuple[slot..slot + g.arity()];
        let right = &tuple[slot + g.arity()..];
        let skipped: i64 = left.iter().map(|&i| domain.degree(i)).sum();
        let sign = if g.degree() % 2 != 0 && skipped % 2 != 0 {
            -Scalar::one()
        } else {
            Scalar::one()
        };
        let mid = g.value_on_basis(block);
        if mid.is_zero() {
            continue;
        }
        let mut args: Vec<Vector> = Vec::with_capacity(f.arity());
        for &i in left {
            args.push(f.domain().e(i));
        }
        args.push(mid);
        for &i in right {
            args.push(f.domain().e(i));
        }
        let value = f.apply(&args)?.scaled(&sign);
        if !value.is_zero() {
            entries.insert(tuple, value);
        }
    }
    Ok(MultiMap {
        domain,
        codomain: f.codomain().clone(),
        arity,
        degree,
        antisym: false,
        entries,
    })
}

/// `f ∘ (g₁ ⊗ ⋯ ⊗ g_k)` with the Koszul evaluation rule: each `g_t` picks up
/// `(−1)^{deg(g_t)·(sum of input degrees in earlier blocks)}`.
pub fn precompose_all(f: &MultiMap, gs: &[&MultiMap]) -> Result<MultiMap> {
    if gs.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            got: gs.len(),
        });
    }
    let domain = match gs.first() {
        None => f.domain().clone(),
        Some(g) => g.domain().clone(),
    };
    for g in gs {
        if *g.codomain() != *f.domain() || *g.domain() != domain {
            return Err(Error::SpaceMismatch);
        }
    }
    let arity: usize = gs.iter().map(|g| g.arity()).sum();
    let degree: i64 = f.degree() + gs.iter().map(|g| g.degree()).sum::<i64>();
    let mut entries = BTreeMap::new();
    for tuple in domain.all_tuples(arity) {
        let mut sign = 1i64;
        let mut args: Vec<Vector> = Vec::with_capacity(gs.len());
        let mut offset = 0usize;
        let mut degrees_before = 0i64;
        for g in gs {
            let block = &tuple[offset..offset + g.arity()];
            if g.degree() % 2 != 0 && degrees_before % 2 != 0 {
                sign = -sign;
            }
            args.push(g.value_on_basis(block));
            degrees_before += block.iter().map(|&i| domain.degree(i)).sum::<i64>();
            offset += g.arity();
        }
        let value = f.apply(&args)?.scaled(&int(sign));
        if !value.is_zero() {
            entries.insert(tuple, value);
        }
    }
    Ok(MultiMap {
        domain,
        codomain: f.codomain().clone(),
        arity,
        degree,
        antisym: false,
        entries,
    })
}

/// An arity-indexed family `{F_k}` of endo-maps sharing one B-degree,
/// truncated at a maximum arity. Arities beyond the bound are identically
/// zero by convention, which models the completions the structures live in.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSeries {
    space: GradedSpace,
    b_degree: i64,
    max_arity: usize,
    components: BTreeMap<usize, MultiMap>,
}

impl OperatorSeries {
    pub fn zero(space: GradedSpace, b_degree: i64, max_arity: usize) -> Self {
        Self {
            space,
            b_degree,
            max_arity,
            components: BTreeMap::new(),
        }
    }

    pub fn from_maps(
        space: GradedSpace,
        b_degree: i64,
        max_arity: usize,
        maps: Vec<MultiMap>,
    ) -> Result<Self> {
        let mut s = Self::zero(space, b_degree, max_arity);
        for m in maps {
            s.insert(m)?;
        }
        Ok(s)
    }

    /// A single map viewed as a series, truncated at the given arity.
    pub fn from_map(map: MultiMap, max_arity: usize) -> Self {
        let mut s = Self::zero(map.domain().clone(), map.b_degree(), max_arity);
        s.insert(map).expect("single component is consistent");
        s
    }

    /// Adds a component; arities beyond the truncation bound are dropped.
    pub fn insert(&mut self, map: MultiMap) -> Result<()> {
        if !map.is_endo() || *map.domain() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if map.b_degree() != self.b_degree && !map.is_zero() {
            return Err(Error::SeriesDegree {
                arity: map.arity(),
                expected: self.b_degree,
                got: map.b_degree(),
            });
        }
        if map.arity() > self.max_arity || map.is_zero() {
            return Ok(());
        }
        let arity = map.arity();
        match self.components.remove(&arity) {
            None => {
                self.components.insert(arity, map);
            }
            Some(existing) => {
                let sum = existing.add(&map)?;
                if !sum.is_zero() {
                    self.components.insert(arity, sum);
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn b_degree(&self) -> i64 {
        self.b_degree
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn component(&self, arity: usize) -> Option<&MultiMap> {
        self.components.get(&arity)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &MultiMap)> {
        self.components.iter().map(|(&k, m)| (k, m))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Arities whose components are nonzero.
    pub fn arities(&self) -> Vec<usize> {
        self.components.keys().copied().collect()
    }

    pub fn add(&self, other: &OperatorSeries) -> Result<OperatorSeries> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.b_degree != other.b_degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::SeriesDegree {
                arity: 0,
                expected: self.b_degree,
                got: other.b_degree,
            });
        }
        let b_degree = if self.is_zero() { other.b_degree } else { self.b_degree };
        let mut out = OperatorSeries::zero(
            self.space.clone(),
            b_degree,
            self.max_arity.min(other.max_arity),
        );
        for (_, m) in self.components() {
            out.insert(m.clone())?;
        }
        for (_, m) in other.components() {
            out.insert(m.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OperatorSeries) -> Result<OperatorSeries> {
        self.add(&other.scaled(&-Scalar::one()))
    }

    pub fn scaled(&self, coeff: &Scalar) -> OperatorSeries {
        let mut out = OperatorSeries::zero(self.space.clone(), self.b_degree, self.max_arity);
        if coeff.is_zero() {
            return out;
        }
        for (_, m) in self.components() {
            out.insert(m.scaled(coeff)).expect("scaling preserves signature");
        }
        out
    }

    /// The same series with the truncation bound lowered or raised; raising
    /// the bound never invents components.
    pub fn truncated(&self, max_arity: usize) -> OperatorSeries {
        let mut out = OperatorSeries::zero(self.space.clone(), self.b_degree, max_arity);
        for (k, m) in self.components() {
            if k <= max_arity {
                out.insert(m.clone()).expect("component already consistent");
            }
        }
        out
    }
}
