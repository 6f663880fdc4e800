//! A∞ and L∞ structure predicates and the Chevalley–Eilenberg calculus on
//! the brace algebra of a Lie structure.
//!
//! A strong homotopy structure is carried by an [`OperatorSeries`] of
//! B-degree −1: an A∞ structure is `μ = μ₁ + μ₂ + ⋯` with `μ{μ} = 0`, an L∞
//! structure is an antisymmetric `l = l₁ + l₂ + ⋯` with `l⟨l⟩ = 0`. All
//! statements are arity-truncated: "is a structure" always means "the defect
//! vanishes at every arity up to the series bound", which is the only finite
//! faithful model of the completions the operations live in.

use crate::braces::{series_nonsym_brace, series_sym_brace, sym_brace_hom};
use crate::error::{Error, Result};
use crate::graded::{antisymmetrize, MultiMap, OperatorSeries};

/// `μ{μ}` truncated at `max_arity`; the zero series iff `μ` is an A∞
/// structure up to that arity.
pub fn a_infinity_defect(mu: &OperatorSeries, max_arity: usize) -> Result<OperatorSeries> {
    if mu.b_degree() != -1 {
        return Err(Error::SeriesDegree {
            arity: 0,
            expected: -1,
            got: mu.b_degree(),
        });
    }
    Ok(series_nonsym_brace(mu, &[mu.clone()], max_arity))
}

/// `l⟨l⟩` truncated at `max_arity`; the zero series iff `l` is an L∞
/// structure up to that arity. Components must be antisymmetric.
pub fn l_infinity_defect(l: &OperatorSeries, max_arity: usize) -> Result<OperatorSeries> {
    if l.b_degree() != -1 {
        return Err(Error::SeriesDegree {
            arity: 0,
            expected: -1,
            got: l.b_degree(),
        });
    }
    if let Some((k, _)) = l.components().find(|(_, m)| !m.is_antisym()) {
        return Err(Error::NotAntisymmetric(format!(
            "series component at arity {k}"
        )));
    }
    Ok(series_sym_brace(l, &[l.clone()], max_arity))
}

/// An A∞ structure: a B-degree −1 series with vanishing defect, checked on
/// construction rather than assumed.
#[derive(Debug, Clone)]
pub struct AInfinity {
    mu: OperatorSeries,
}

impl AInfinity {
    pub fn new(mu: OperatorSeries) -> Result<Self> {
        let defect = a_infinity_defect(&mu, mu.max_arity())?;
        if let Some((arity, _)) = defect.components().next() {
            return Err(Error::Validation(format!(
                "mu{{mu}} is nonzero at arity {arity}; not an A-infinity structure"
            )));
        }
        Ok(Self { mu })
    }

    pub fn series(&self) -> &OperatorSeries {
        &self.mu
    }

    pub fn max_arity(&self) -> usize {
        self.mu.max_arity()
    }
}

/// An L∞ structure: an antisymmetric B-degree −1 series with vanishing
/// defect, checked on construction.
#[derive(Debug, Clone)]
pub struct LInfinity {
    l: OperatorSeries,
}

impl LInfinity {
    pub fn new(l: OperatorSeries) -> Result<Self> {
        let defect = l_infinity_defect(&l, l.max_arity())?;
        if let Some((arity, _)) = defect.components().next() {
            return Err(Error::Validation(format!(
                "l<l> is nonzero at arity {arity}; not an L-infinity structure"
            )));
        }
        Ok(Self { l })
    }

    pub fn series(&self) -> &OperatorSeries {
        &self.l
    }

    pub fn max_arity(&self) -> usize {
        self.l.max_arity()
    }
}

/// Componentwise anti-symmetrization of a series: sends an A∞ structure `μ`
/// to the L∞ structure `as(μ)`.
pub fn as_of_a_infinity(mu: &OperatorSeries) -> OperatorSeries {
    let mut out = OperatorSeries::zero(mu.space().clone(), mu.b_degree(), mu.max_arity());
    for (_, m) in mu.components() {
        out.insert(antisymmetrize(m))
            .expect("antisymmetrization preserves the signature");
    }
    out
}

/// The differential induced on Hom-spaces by an arity-1 differential:
/// `∂u := d{u} − (−1)^{|u|} u{d}` with `|u|` the B-degree.
pub fn hom_differential_nonsym(d: &MultiMap, u: &MultiMap) -> Result<MultiMap> {
    check_differential_shape(d)?;
    let du = crate::braces::nonsym_brace(d, &[u])?;
    let ud = crate::braces::nonsym_brace(u, &[d])?;
    let sign = if u.b_degree() % 2 == 0 { -1 } else { 1 };
    du.add(&ud.scaled(&crate::graded::int(sign)))
}

/// Symmetric-brace version of the induced differential:
/// `∂u := d⟨u⟩ − (−1)^{|u|} u⟨d⟩`.
pub fn hom_differential_sym(d: &MultiMap, u: &MultiMap) -> Result<MultiMap> {
    check_differential_shape(d)?;
    let ad = antisymmetrize(d); // arity 1: identical entries, now flagged
    let du = sym_brace_hom(&ad, &[u])?;
    let ud = sym_brace_hom(u, &[&ad])?;
    let sign = if u.b_degree() % 2 == 0 { -1 } else { 1 };
    du.add(&ud.scaled(&crate::graded::int(sign)))
}

fn check_differential_shape(d: &MultiMap) -> Result<()> {
    if d.arity() != 1 || d.degree() != -1 {
        return Err(Error::Validation(format!(
            "differential must have arity 1 and degree -1, got arity {} degree {}",
            d.arity(),
            d.degree()
        )));
    }
    let dd = crate::graded::compose_in_slot(d, d, 0)?;
    if !dd.is_zero() {
        return Err(Error::NotDifferential("d".into()));
    }
    Ok(())
}

fn check_lie(l2: &MultiMap) -> Result<()> {
    if l2.arity() != 2 || l2.degree() != 0 {
        return Err(Error::Validation(format!(
            "Lie bracket must have arity 2 and degree 0, got arity {} degree {}",
            l2.arity(),
            l2.degree()
        )));
    }
    if !l2.is_antisym() {
        return Err(Error::NotAntisymmetric("l2".into()));
    }
    if !sym_brace_hom(l2, &[l2])?.is_zero() {
        return Err(Error::NotLie);
    }
    Ok(())
}

/// Chevalley–Eilenberg differential of a Lie structure `l₂`:
/// `∂f := l⟨f⟩ − (−1)^{|f|} f⟨l⟩`. Refuses an `l₂` that fails Jacobi, since
/// the square-zero property would silently be lost.
pub fn ce_differential(l2: &MultiMap, f: &MultiMap) -> Result<MultiMap> {
    check_lie(l2)?;
    let lf = sym_brace_hom(l2, &[f])?;
    let fl = sym_brace_hom(f, &[l2])?;
    let sign = if f.b_degree() % 2 == 0 { -1 } else { 1 };
    lf.add(&fl.scaled(&crate::graded::int(sign)))
}

/// Chevalley–Eilenberg bracket `{f, g} := l⟨f, g⟩`, of B-degree −1.
pub fn ce_bracket(l2: &MultiMap, f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    check_lie(l2)?;
    sym_brace_hom(l2, &[f, g])
}
