//! Homotopy transfer of A∞ and L∞ structures along a contraction.
//!
//! Given chain complexes `(V, d_V)` and `(W, d_W)` with chain maps
//! `f : V → W`, `g : W → V` and a homotopy `h` witnessing
//! `d_V h + h d_V = id − gf`, an A∞ structure `μ` on `V` with `μ₁ = d_V`
//! transfers to `W` as `ν₁ = d_W`, `νₙ = f ∘ pₙ ∘ g^⊗n`, where the p-kernel
//! is the arity-indexed fixed point of
//!
//! ```text
//! p = μ̄ + μ̄{h∘p} + μ̄{h∘p, h∘p} + ⋯            (nonsymmetric)
//! p = l̄ + l̄⟨h∘p⟩ + (1/2!) l̄⟨h∘p, h∘p⟩ + ⋯     (symmetric)
//! ```
//!
//! with `μ̄ = μ₂ + μ₃ + ⋯`. The arity-n output depends only on arities
//! below n, so one bottom-up pass per arity computes the kernel exactly; no
//! convergence tolerance exists or is needed. The explicit sign-sum form of
//! the kernel is implemented independently ([`p_kernel_explicit_nonsym`])
//! and compared against the recursion — reconciling the two shapes is a
//! machine-checked step here, not a by-hand one.

use crate::braces::{series_nonsym_brace, series_sym_brace};
use crate::error::{Error, Result};
use crate::graded::{
    compose_in_slot, int, into_antisym, precompose_all, rat, GradedSpace, MultiMap,
    OperatorSeries,
};
use crate::structures::{hom_differential_nonsym, hom_differential_sym, AInfinity, LInfinity};

fn pow_sign(e: i64) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A contraction: chain complexes and maps with every invariant checked on
/// construction. A violated `∂h = id − gf` is a constructor error, never a
/// silent state.
#[derive(Debug, Clone)]
pub struct Contraction {
    d_v: MultiMap,
    d_w: MultiMap,
    f: MultiMap,
    g: MultiMap,
    h: MultiMap,
}

impl Contraction {
    pub fn new(
        d_v: MultiMap,
        d_w: MultiMap,
        f: MultiMap,
        g: MultiMap,
        h: MultiMap,
    ) -> Result<Self> {
        let v = d_v.domain().clone();
        let w = d_w.domain().clone();
        for (name, map, dom, cod, arity, degree) in [
            ("dV", &d_v, &v, &v, 1usize, -1i64),
            ("dW", &d_w, &w, &w, 1, -1),
            ("f", &f, &v, &w, 1, 0),
            ("g", &g, &w, &v, 1, 0),
            ("h", &h, &v, &v, 1, 1),
        ] {
            if map.domain() != dom || map.codomain() != cod {
                return Err(Error::ContractionInvariant(format!(
                    "{name} has the wrong domain or codomain"
                )));
            }
            if map.arity() != arity || map.degree() != degree {
                return Err(Error::ContractionInvariant(format!(
                    "{name} must have arity {arity} and degree {degree}"
                )));
            }
        }
        if !compose_in_slot(&d_v, &d_v, 0)?.is_zero() {
            return Err(Error::ContractionInvariant("dV∘dV ≠ 0".into()));
        }
        if !compose_in_slot(&d_w, &d_w, 0)?.is_zero() {
            return Err(Error::ContractionInvariant("dW∘dW ≠ 0".into()));
        }
        let fd = compose_in_slot(&f, &d_v, 0)?;
        let df = compose_in_slot(&d_w, &f, 0)?;
        if fd != df {
            return Err(Error::ContractionInvariant("f∘dV ≠ dW∘f".into()));
        }
        let gd = compose_in_slot(&g, &d_w, 0)?;
        let dg = compose_in_slot(&d_v, &g, 0)?;
        if gd != dg {
            return Err(Error::ContractionInvariant("g∘dW ≠ dV∘g".into()));
        }
        let dh = compose_in_slot(&d_v, &h, 0)?;
        let hd = compose_in_slot(&h, &d_v, 0)?;
        let gf = compose_in_slot(&g, &f, 0)?;
        let lhs = dh.add(&hd)?;
        let rhs = MultiMap::identity(v.clone()).sub(&gf)?;
        if lhs != rhs {
            return Err(Error::ContractionInvariant(
                "dV∘h + h∘dV ≠ id − g∘f".into(),
            ));
        }
        Ok(Self { d_v, d_w, f, g, h })
    }

    /// The trivial contraction of a complex onto itself: `f = g = id`,
    /// `h = 0`.
    pub fn identity(d: MultiMap) -> Result<Self> {
        let space = d.domain().clone();
        let id = MultiMap::identity(space.clone());
        let h = MultiMap::zero(space.clone(), space, 1, 1);
        Self::new(d.clone(), d, id.clone(), id, h)
    }

    pub fn space_v(&self) -> &GradedSpace {
        self.d_v.domain()
    }

    pub fn space_w(&self) -> &GradedSpace {
        self.d_w.domain()
    }

    pub fn d_v(&self) -> &MultiMap {
        &self.d_v
    }

    pub fn d_w(&self) -> &MultiMap {
        &self.d_w
    }

    pub fn f(&self) -> &MultiMap {
        &self.f
    }

    pub fn g(&self) -> &MultiMap {
        &self.g
    }

    pub fn h(&self) -> &MultiMap {
        &self.h
    }

    /// `Φ(u) = f ∘ u ∘ g^⊗arity`, the transport of an endo-map of V to one
    /// of W.
    pub fn phi(&self, u: &MultiMap) -> Result<MultiMap> {
        let fu = compose_in_slot(&self.f, u, 0)?;
        let gs: Vec<&MultiMap> = (0..u.arity()).map(|_| &self.g).collect();
        precompose_all(&fu, &gs)
    }

    /// Componentwise `Φ` of a series on V, landing on W.
    pub fn phi_series(&self, series: &OperatorSeries) -> Result<OperatorSeries> {
        let mut out = OperatorSeries::zero(
            self.space_w().clone(),
            series.b_degree(),
            series.max_arity(),
        );
        for (_, m) in series.components() {
            out.insert(self.phi(m)?)?;
        }
        Ok(out)
    }

    /// `h ∘ pₙ` componentwise: a B-degree 0 series.
    fn h_series(&self, p: &OperatorSeries) -> Result<OperatorSeries> {
        let mut out = OperatorSeries::zero(self.space_v().clone(), 0, p.max_arity());
        for (_, m) in p.components() {
            out.insert(compose_in_slot(&self.h, m, 0)?)?;
        }
        Ok(out)
    }

    fn h_series_antisym(&self, p: &OperatorSeries) -> Result<OperatorSeries> {
        let mut out = OperatorSeries::zero(self.space_v().clone(), 0, p.max_arity());
        for (_, m) in p.components() {
            out.insert(into_antisym(&compose_in_slot(&self.h, m, 0)?)?)?;
        }
        Ok(out)
    }

    /// `gf ∘ pₙ` componentwise, re-stored antisymmetric for brace use.
    pub fn gf_series_antisym(&self, p: &OperatorSeries) -> Result<OperatorSeries> {
        let gf = compose_in_slot(&self.g, &self.f, 0)?;
        let mut out = OperatorSeries::zero(self.space_v().clone(), -1, p.max_arity());
        for (_, m) in p.components() {
            out.insert(into_antisym(&compose_in_slot(&gf, m, 0)?)?)?;
        }
        Ok(out)
    }
}

fn check_unary_part(series: &OperatorSeries, d: &MultiMap) -> Result<()> {
    match series.component(1) {
        Some(m) if m == d => Ok(()),
        Some(_) => Err(Error::WrongUnaryPart),
        None if d.is_zero() => Ok(()),
        None => Err(Error::WrongUnaryPart),
    }
}

fn strip_unary(series: &OperatorSeries) -> OperatorSeries {
    let mut out = OperatorSeries::zero(
        series.space().clone(),
        series.b_degree(),
        series.max_arity(),
    );
    for (k, m) in series.components() {
        if k >= 2 {
            out.insert(m.clone()).expect("component already consistent");
        }
    }
    out
}

/// Nonsymmetric p-kernel by the fixed-point recursion
/// `p = μ̄ + μ̄{h∘p} + μ̄{h∘p, h∘p} + ⋯`, truncated at `max_arity`.
/// Requires `μ₁ = d_V`.
pub fn p_kernel_nonsym(
    mu: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<OperatorSeries> {
    check_unary_part(mu, c.d_v())?;
    let mu_bar = strip_unary(&mu.truncated(max_arity));
    let mut p = OperatorSeries::zero(c.space_v().clone(), -1, max_arity);
    for n in 2..=max_arity {
        let hp = c.h_series(&p)?;
        let mut rhs = mu_bar.clone();
        if !hp.is_zero() {
            for j in 1..=max_arity {
                let args = vec![hp.clone(); j];
                rhs = rhs.add(&series_nonsym_brace(&mu_bar, &args, max_arity))?;
            }
        }
        if let Some(m) = rhs.component(n) {
            p.insert(m.clone())?;
        }
    }
    Ok(p)
}

/// Nonsymmetric p-kernel by the explicit signed sum
/// `pₙ = Σ (−1)^{ϑ(r₁,…,r_k)} μ_k(h∘p_{r₁} ⊗ ⋯ ⊗ h∘p_{r_k})` over
/// `2 ≤ k ≤ n`, `rᵢ ≥ 1`, `Σrᵢ = n`, with `ϑ(u₁,…,u_s) = Σ_{α<β} u_α(u_β+1)`
/// and the convention `h∘p₁ = id`. An independent route to the same series,
/// kept for cross-checking the recursion.
pub fn p_kernel_explicit_nonsym(
    mu: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<OperatorSeries> {
    check_unary_part(mu, c.d_v())?;
    let space = c.space_v().clone();
    let id = MultiMap::identity(space.clone());
    let mut p = OperatorSeries::zero(space.clone(), -1, max_arity);
    for n in 2..=max_arity {
        let mut p_n: Option<MultiMap> = None;
        for k in 2..=n {
            let Some(mu_k) = mu.component(k) else { continue };
            for r in compositions(n, k) {
                // ϑ pairs the arity tuple against the slots in reverse
                // order; this is the orientation that makes the signed sum
                // agree with the brace recursion, and the cross-check test
                // holds it in place
                let mut theta = 0i64;
                for a in 0..k {
                    for b in a + 1..k {
                        theta += r[b] as i64 * (r[a] as i64 + 1);
                    }
                }
                let mut slot_maps: Vec<MultiMap> = Vec::with_capacity(k);
                let mut missing = false;
                for &ri in &r {
                    if ri == 1 {
                        slot_maps.push(id.clone());
                    } else {
                        match p.component(ri) {
                            Some(pr) => slot_maps.push(compose_in_slot(c.h(), pr, 0)?),
                            None => {
                                missing = true;
                                break;
                            }
                        }
                    }
                }
                if missing {
                    continue;
                }
                let refs: Vec<&MultiMap> = slot_maps.iter().collect();
                let term = precompose_all(mu_k, &refs)?.scaled(&int(pow_sign(theta)));
                p_n = Some(match p_n {
                    None => term,
                    Some(acc) => acc.add(&term)?,
                });
            }
        }
        if let Some(m) = p_n {
            p.insert(m)?;
        }
    }
    Ok(p)
}

/// All ordered ways to write `n` as a sum of `k` parts, each at least 1.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            if n >= 1 {
                cur.push(n);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=n.saturating_sub(k - 1) {
            cur.push(first);
            rec(n - first, k - 1, cur, out);
            cur.pop();
        }
    }
    if k >= 1 {
        rec(n, k, &mut cur, &mut out);
    }
    out
}

/// Symmetric p-kernel: the arity-truncated fixed point of
/// `p = l̄⟨exp(h∘p)⟩ = Σ_j (1/j!) l̄⟨h∘p, …, h∘p⟩`. Requires `l₁ = d_V` and
/// antisymmetric components; the factorials demand characteristic zero,
/// which the rational scalars provide.
pub fn p_kernel_sym(
    l: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<OperatorSeries> {
    check_unary_part(l, c.d_v())?;
    if let Some((k, _)) = l.components().find(|(_, m)| !m.is_antisym()) {
        return Err(Error::NotAntisymmetric(format!(
            "series component at arity {k}"
        )));
    }
    let l_bar = strip_unary(&l.truncated(max_arity));
    let mut p = OperatorSeries::zero(c.space_v().clone(), -1, max_arity);
    for n in 2..=max_arity {
        let hp = c.h_series_antisym(&p)?;
        let mut rhs = l_bar.clone();
        if !hp.is_zero() {
            for j in 1..=max_arity {
                let args = vec![hp.clone(); j];
                let factorial: i64 = (1..=j as i64).product();
                let term =
                    series_sym_brace(&l_bar, &args, max_arity).scaled(&rat(1, factorial));
                rhs = rhs.add(&term)?;
            }
        }
        if let Some(m) = rhs.component(n) {
            p.insert(m.clone())?;
        }
    }
    Ok(p)
}

/// Transferred A∞ structure `ν₁ = d_W`, `ν̄ = Φ(p)`; building the
/// [`AInfinity`] revalidates the master equation.
pub fn transfer_a_infinity(
    mu: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<AInfinity> {
    let p = p_kernel_nonsym(mu, c, max_arity)?;
    let mut nu = c.phi_series(&p)?;
    if !c.d_w().is_zero() {
        nu.insert(c.d_w().clone())?;
    }
    AInfinity::new(nu)
}

/// Transferred L∞ structure `k₁ = d_W`, `k̄ = Φ(p)` for the symmetric
/// p-kernel; validated on construction.
pub fn transfer_l_infinity(
    l: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<LInfinity> {
    let p = p_kernel_sym(l, c, max_arity)?;
    let phi_p = c.phi_series(&p)?;
    let mut k = OperatorSeries::zero(c.space_w().clone(), -1, max_arity);
    for (_, m) in phi_p.components() {
        k.insert(into_antisym(m)?)?;
    }
    if !c.d_w().is_zero() {
        k.insert(into_antisym(c.d_w())?)?;
    }
    LInfinity::new(k)
}

/// Report carrying one line per checked arity.
#[derive(Debug, Clone)]
pub struct ArityReport {
    pub name: String,
    pub per_arity: Vec<(usize, bool, Option<String>)>,
}

impl ArityReport {
    pub fn pass(&self) -> bool {
        self.per_arity.iter().all(|(_, ok, _)| *ok)
    }
}

/// The differential identity of the nonsymmetric p-kernel:
/// `∂(pₙ) = Σ (−1)^{i(l+1)+n} p_k(id^{⊗i−1} ⊗ gf∘p_l ⊗ id^{⊗k−i})` summed
/// over `k + l = n + 1` with `k, l ≥ 2` and `1 ≤ i ≤ k`, for each
/// `2 ≤ n ≤ max_arity`.
pub fn check_p_kernel_identity_nonsym(
    p: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<ArityReport> {
    let space = c.space_v().clone();
    let id = MultiMap::identity(space.clone());
    let gf = compose_in_slot(c.g(), c.f(), 0)?;
    let mut per_arity = Vec::new();
    for n in 2..=max_arity {
        let lhs = match p.component(n) {
            Some(pn) => hom_differential_nonsym(c.d_v(), pn)?,
            None => MultiMap::zero(space.clone(), space.clone(), n, n as i64 - 3),
        };
        let mut rhs = MultiMap::zero(space.clone(), space.clone(), n, lhs.degree());
        for l in 2..n {
            let k = n + 1 - l;
            if k < 2 {
                continue;
            }
            let (Some(pk), Some(pl)) = (p.component(k), p.component(l)) else {
                continue;
            };
            let gfpl = compose_in_slot(&gf, pl, 0)?;
            for i in 1..=k {
                let sign = pow_sign(i as i64 * (l as i64 + 1) + n as i64);
                let mut slots: Vec<&MultiMap> = Vec::with_capacity(k);
                for slot in 1..=k {
                    slots.push(if slot == i { &gfpl } else { &id });
                }
                let term = precompose_all(pk, &slots)?.scaled(&int(sign));
                rhs = rhs.add(&term)?;
            }
        }
        let witness = crate::braces::first_map_difference(&lhs, &rhs);
        per_arity.push((n, witness.is_none(), witness));
    }
    Ok(ArityReport {
        name: "p-kernel-differential-identity".into(),
        per_arity,
    })
}

/// The symmetric p-kernel identity `∂p + p⟨gf∘p⟩ = 0`, arity by arity.
pub fn check_p_kernel_identity_sym(
    p: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<ArityReport> {
    let space = c.space_v().clone();
    let gfp = c.gf_series_antisym(p)?;
    let braced = series_sym_brace(p, &[gfp], max_arity);
    let mut per_arity = Vec::new();
    for n in 2..=max_arity {
        let dp = match p.component(n) {
            Some(pn) => hom_differential_sym(c.d_v(), pn)?,
            None => MultiMap::zero(space.clone(), space.clone(), n, n as i64 - 3),
        };
        let total = match braced.component(n) {
            Some(b) => dp.add(b)?,
            None => dp,
        };
        let witness = if total.is_zero() {
            None
        } else {
            crate::braces::first_map_difference(
                &total,
                &MultiMap::zero(space.clone(), space.clone(), n, total.degree()),
            )
        };
        per_arity.push((n, witness.is_none(), witness));
    }
    Ok(ArityReport {
        name: "p-kernel-differential-identity-sym".into(),
        per_arity,
    })
}

/// `x⟨args…, exp c⟩ = Σ_j (1/j!)·x⟨args…, c, …, c⟩`, truncated. Only
/// finitely many terms contribute: an argument list longer than the top
/// arity of `x` braces to zero.
pub fn brace_with_exp(
    x: &OperatorSeries,
    prefix: &[OperatorSeries],
    c: &OperatorSeries,
    max_arity: usize,
) -> OperatorSeries {
    let mut out = if prefix.is_empty() {
        x.truncated(max_arity)
    } else {
        series_sym_brace(x, prefix, max_arity)
    };
    for j in 1..=max_arity {
        let mut args: Vec<OperatorSeries> = prefix.to_vec();
        args.extend(std::iter::repeat(c.clone()).take(j));
        let factorial: i64 = (1..=j as i64).product();
        let term = series_sym_brace(x, &args, max_arity).scaled(&rat(1, factorial));
        if term.is_zero() {
            continue;
        }
        out = out.add(&term).expect("terms share space and degree");
    }
    out
}

/// The two exp-brace identities for series `a, b, c` with `|b| = |c| = −1`:
///
/// ```text
/// a⟨exp c⟩⟨b⟩ = a⟨c⟨b⟩, exp c⟩ + a⟨b, exp c⟩
/// a⟨b⟩⟨exp c⟩ = a⟨b⟨exp c⟩, exp c⟩
/// ```
pub fn check_exp_brace_identities(
    a: &OperatorSeries,
    b: &OperatorSeries,
    c: &OperatorSeries,
    max_arity: usize,
) -> Result<(ArityReport, ArityReport)> {
    if b.b_degree() != -1 && !b.is_zero() {
        return Err(Error::SeriesDegree {
            arity: 0,
            expected: -1,
            got: b.b_degree(),
        });
    }
    if c.b_degree() != -1 && !c.is_zero() {
        return Err(Error::SeriesDegree {
            arity: 0,
            expected: -1,
            got: c.b_degree(),
        });
    }
    let space = a.space().clone();

    let lhs1 = series_sym_brace(&brace_with_exp(a, &[], c, max_arity), &[b.clone()], max_arity);
    let cb = series_sym_brace(c, &[b.clone()], max_arity);
    let rhs1 = brace_with_exp(a, &[cb], c, max_arity)
        .add(&brace_with_exp(a, &[b.clone()], c, max_arity))?;
    let report1 = arity_difference_report("exp-brace-identity-1", &lhs1, &rhs1, &space, max_arity);

    let lhs2 = brace_with_exp(&series_sym_brace(a, &[b.clone()], max_arity), &[], c, max_arity);
    let b_exp = brace_with_exp(b, &[], c, max_arity);
    let rhs2 = brace_with_exp(a, &[b_exp], c, max_arity);
    let report2 = arity_difference_report("exp-brace-identity-2", &lhs2, &rhs2, &space, max_arity);

    Ok((report1, report2))
}

fn arity_difference_report(
    name: &str,
    lhs: &OperatorSeries,
    rhs: &OperatorSeries,
    space: &GradedSpace,
    max_arity: usize,
) -> ArityReport {
    let mut per_arity = Vec::new();
    for n in 1..=max_arity {
        let witness = match (lhs.component(n), rhs.component(n)) {
            (None, None) => None,
            (Some(l), None) => crate::braces::first_map_difference(
                l,
                &MultiMap::zero(space.clone(), space.clone(), n, l.degree()),
            ),
            (None, Some(r)) => crate::braces::first_map_difference(
                &MultiMap::zero(space.clone(), space.clone(), n, r.degree()),
                r,
            ),
            (Some(l), Some(r)) => crate::braces::first_map_difference(l, r),
        };
        per_arity.push((n, witness.is_none(), witness));
    }
    ArityReport {
        name: name.into(),
        per_arity,
    }
}

/// Mutual agreement of the recursion and the explicit signed sum for the
/// nonsymmetric p-kernel.
pub fn check_p_kernel_cross(
    mu: &OperatorSeries,
    c: &Contraction,
    max_arity: usize,
) -> Result<ArityReport> {
    let rec = p_kernel_nonsym(mu, c, max_arity)?;
    let exp = p_kernel_explicit_nonsym(mu, c, max_arity)?;
    Ok(arity_difference_report(
        "p-kernel-recursion-vs-explicit",
        &rec,
        &exp,
        c.space_v(),
        max_arity,
    ))
}
