//! Decorated rooted trees, grafting, and the free symmetric brace algebra
//! they span.
//!
//! Everything here is degree 0: the free symmetric brace algebra and the free
//! pre-Lie algebra are concentrated in degree zero, so no signs appear. A
//! tree is stored in canonical form (children sorted by a fixed total order),
//! one canonical form per isomorphism class of labeled rooted trees. The
//! brace of linear combinations of trees is the grafting sum over all vertex
//! assignments; evaluating a decorated tree inside any symmetric brace
//! algebra is the recursive `root⟨subtree values⟩`.

use crate::braces::{IdentityReport, SymmetricBraceAlgebra};
use crate::error::{Error, Result};
use crate::graded::Scalar;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A rooted tree with vertices decorated by string labels, kept in canonical
/// form: children sorted, recursively. Vertices are addressed by preorder
/// index (root = 0, then each child subtree in canonical order).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedTree {
    label: String,
    children: Vec<DecoratedTree>,
}

impl DecoratedTree {
    pub fn leaf(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            children: Vec::new(),
        }
    }

    pub fn new(label: impl Into<String>, mut children: Vec<DecoratedTree>) -> Self {
        children.sort();
        Self {
            label: label.into(),
            children,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[DecoratedTree] {
        &self.children
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.vertex_count()).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    /// Labels in preorder; index position = vertex address.
    pub fn labels_preorder(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn rec<'a>(t: &'a DecoratedTree, out: &mut Vec<&'a str>) {
            out.push(&t.label);
            for c in &t.children {
                rec(c, out);
            }
        }
        rec(self, &mut out);
        out
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Grafts the attached trees onto the host: the root of `attach[i]` gains an
/// edge to the host vertex `assignment[i]` (preorder address). The vertex set
/// of the result is the disjoint union and the edge count grows by the number
/// of attachments.
pub fn graft(
    host: &DecoratedTree,
    attach: &[DecoratedTree],
    assignment: &[usize],
) -> Result<DecoratedTree> {
    if attach.len() != assignment.len() {
        return Err(Error::Validation(format!(
            "{} attachments but {} targets",
            attach.len(),
            assignment.len()
        )));
    }
    let n = host.vertex_count();
    let mut per_vertex: BTreeMap<usize, Vec<DecoratedTree>> = BTreeMap::new();
    for (tree, &v) in attach.iter().zip(assignment) {
        if v >= n {
            return Err(Error::Validation(format!(
                "vertex {v} out of range for a {n}-vertex host"
            )));
        }
        per_vertex.entry(v).or_default().push(tree.clone());
    }
    fn rec(
        node: &DecoratedTree,
        counter: &mut usize,
        extra: &BTreeMap<usize, Vec<DecoratedTree>>,
    ) -> DecoratedTree {
        let here = *counter;
        *counter += 1;
        let mut children: Vec<DecoratedTree> =
            node.children.iter().map(|c| rec(c, counter, extra)).collect();
        if let Some(more) = extra.get(&here) {
            children.extend(more.iter().cloned());
        }
        DecoratedTree::new(node.label.clone(), children)
    }
    let mut counter = 0;
    Ok(rec(host, &mut counter, &per_vertex))
}

/// A finite linear combination of decorated trees with rational
/// coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeLC {
    terms: BTreeMap<DecoratedTree, Scalar>,
}

impl TreeLC {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_tree(tree: DecoratedTree) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(tree, Scalar::one());
        Self { terms }
    }

    pub fn singleton(label: impl Into<String>) -> Self {
        Self::from_tree(DecoratedTree::leaf(label))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, tree: &DecoratedTree) -> Scalar {
        self.terms.get(tree).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DecoratedTree, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, tree: DecoratedTree, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(tree.clone()).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&tree);
        }
    }

    pub fn add(&self, other: &TreeLC) -> TreeLC {
        let mut out = self.clone();
        for (t, c) in other.iter() {
            out.add_term(t.clone(), c);
        }
        out
    }

    pub fn scaled(&self, coeff: &Scalar) -> TreeLC {
        if coeff.is_zero() {
            return TreeLC::zero();
        }
        TreeLC {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.clone(), c * coeff))
                .collect(),
        }
    }
}

impl fmt::Display for TreeLC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (tree, c) in self.iter() {
            if first {
                if c.is_one() {
                    write!(f, "{tree}")?;
                } else if (-c.clone()).is_one() {
                    write!(f, "-{tree}")?;
                } else {
                    write!(f, "{c}*{tree}")?;
                }
                first = false;
            } else if c.is_negative() {
                let neg = -c.clone();
                if neg.is_one() {
                    write!(f, " - {tree}")?;
                } else {
                    write!(f, " - {neg}*{tree}")?;
                }
            } else if c.is_one() {
                write!(f, " + {tree}")?;
            } else {
                write!(f, " + {c}*{tree}")?;
            }
        }
        Ok(())
    }
}

/// Free symmetric brace `x⟨x₁,…,xₙ⟩`: the multilinear extension of the sum of
/// graftings over all maps from the attached trees to host vertices.
pub fn free_brace(x: &TreeLC, args: &[TreeLC]) -> TreeLC {
    if args.is_empty() {
        return x.clone();
    }
    let mut out = TreeLC::zero();
    for (host, hc) in x.iter() {
        let nverts = host.vertex_count();
        let arg_terms: Vec<Vec<(&DecoratedTree, &Scalar)>> =
            args.iter().map(|a| a.iter().collect()).collect();
        if arg_terms.iter().any(|t| t.is_empty()) {
            continue;
        }
        let mut cursor = vec![0usize; args.len()];
        loop {
            let mut coeff = hc.clone();
            let trees: Vec<DecoratedTree> = cursor
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let (t, s) = arg_terms[i][c];
                    coeff *= s.clone();
                    t.clone()
                })
                .collect();
            let mut assignment = vec![0usize; trees.len()];
            loop {
                let grafted = graft(host, &trees, &assignment).expect("assignment stays in range");
                out.add_term(grafted, &coeff);
                let mut pos = trees.len();
                let mut done = false;
                loop {
                    if pos == 0 {
                        done = true;
                        break;
                    }
                    pos -= 1;
                    assignment[pos] += 1;
                    if assignment[pos] < nverts {
                        break;
                    }
                    assignment[pos] = 0;
                }
                if done {
                    break;
                }
            }
            let mut pos = args.len();
            let mut done = false;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                cursor[pos] += 1;
                if cursor[pos] < arg_terms[pos].len() {
                    break;
                }
                cursor[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    out
}

/// The free symmetric brace algebra on string generators.
#[derive(Debug, Clone, Default)]
pub struct TreeAlgebra;

impl SymmetricBraceAlgebra for TreeAlgebra {
    type Elem = TreeLC;

    fn brace(&self, x: &TreeLC, args: &[TreeLC]) -> TreeLC {
        free_brace(x, args)
    }

    fn add(&self, x: &TreeLC, y: &TreeLC) -> TreeLC {
        x.add(y)
    }

    fn scale(&self, c: &Scalar, x: &TreeLC) -> TreeLC {
        x.scaled(c)
    }

    fn is_zero(&self, x: &TreeLC) -> bool {
        x.is_zero()
    }

    fn degree(&self, _x: &TreeLC) -> i64 {
        0
    }

    fn describe(&self, x: &TreeLC) -> String {
        format!("{x}")
    }
}

/// Evaluates a decorated tree inside a symmetric brace algebra:
/// a singleton evaluates to its decoration, and `{r}{T₁,…,T_m}` evaluates to
/// `b(r)⟨T₁(b),…,T_m(b)⟩`. The decoration is supplied per vertex as
/// `(preorder index, label) → element`.
pub fn eval_tree<A, F>(alg: &A, tree: &DecoratedTree, decoration: &F) -> A::Elem
where
    A: SymmetricBraceAlgebra,
    F: Fn(usize, &str) -> A::Elem,
{
    fn rec<A, F>(alg: &A, tree: &DecoratedTree, decoration: &F, counter: &mut usize) -> A::Elem
    where
        A: SymmetricBraceAlgebra,
        F: Fn(usize, &str) -> A::Elem,
    {
        let here = *counter;
        *counter += 1;
        let root = decoration(here, &tree.label);
        if tree.children.is_empty() {
            return root;
        }
        let args: Vec<A::Elem> = tree
            .children
            .iter()
            .map(|c| rec(alg, c, decoration, counter))
            .collect();
        alg.brace(&root, &args)
    }
    let mut counter = 0;
    rec(alg, tree, decoration, &mut counter)
}

/// The unique brace homomorphism out of the free algebra extending a map of
/// generators: the linear extension of decorated-tree evaluation.
pub fn universal_map<A, F>(alg: &A, phi: &F, x: &TreeLC) -> A::Elem
where
    A: SymmetricBraceAlgebra,
    F: Fn(&str) -> A::Elem,
{
    let mut acc: Option<A::Elem> = None;
    for (tree, coeff) in x.iter() {
        let value = alg.scale(coeff, &eval_tree(alg, tree, &|_, label| phi(label)));
        acc = Some(match acc {
            None => value,
            Some(a) => alg.add(&a, &value),
        });
    }
    acc.unwrap_or_else(|| {
        let z = phi("0");
        alg.sub(&z, &z)
    })
}

/// Exact check of the grafting expansion
/// `S(c)⟨S₁(c₁),…,Sₙ(cₙ)⟩ = Σ_v (S with the Sᵢ grafted by v)(c ⊔ c₁ ⊔ ⋯)`
/// inside an arbitrary symmetric brace algebra.
pub fn check_grafting_expansion<A, F>(
    alg: &A,
    host: &DecoratedTree,
    attach: &[DecoratedTree],
    phi: &F,
) -> IdentityReport
where
    A: SymmetricBraceAlgebra,
    F: Fn(&str) -> A::Elem,
{
    let lhs_args: Vec<A::Elem> = attach
        .iter()
        .map(|t| eval_tree(alg, t, &|_, l| phi(l)))
        .collect();
    let lhs = alg.brace(&eval_tree(alg, host, &|_, l| phi(l)), &lhs_args);

    let n = attach.len();
    let nverts = host.vertex_count();
    let mut rhs: Option<A::Elem> = None;
    let mut assignment = vec![0usize; n];
    loop {
        let grafted = graft(host, attach, &assignment).expect("assignment in range");
        let value = eval_tree(alg, &grafted, &|_, l| phi(l));
        rhs = Some(match rhs {
            None => value,
            Some(acc) => alg.add(&acc, &value),
        });
        if n == 0 {
            break;
        }
        let mut pos = n;
        let mut done = false;
        loop {
            if pos == 0 {
                done = true;
                break;
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < nverts {
                break;
            }
            assignment[pos] = 0;
        }
        if done {
            break;
        }
    }
    let rhs = rhs.expect("at least one assignment");
    let diff = alg.sub(&lhs, &rhs);
    if alg.is_zero(&diff) {
        IdentityReport::pass("grafting-expansion")
    } else {
        IdentityReport::fail(
            "grafting-expansion",
            format!("difference = {}", alg.describe(&diff)),
        )
    }
}

/// All rooted trees whose vertices are bijectively labeled by the given
/// distinct labels, in canonical form.
pub fn enumerate_labeled_trees(labels: &[String]) -> BTreeSet<DecoratedTree> {
    let mut out = BTreeSet::new();
    if labels.is_empty() {
        return out;
    }
    for (i, root) in labels.iter().enumerate() {
        let rest: Vec<String> = labels
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, l)| l.clone())
            .collect();
        for forest in enumerate_forests(&rest) {
            out.insert(DecoratedTree::new(root.clone(), forest));
        }
    }
    out
}

fn enumerate_forests(labels: &[String]) -> BTreeSet<Vec<DecoratedTree>> {
    let mut out = BTreeSet::new();
    if labels.is_empty() {
        out.insert(Vec::new());
        return out;
    }
    // the block containing the first label, then forests on the rest
    let first = &labels[0];
    let rest = &labels[1..];
    for subset_mask in 0u32..(1 << rest.len()) {
        let mut block: Vec<String> = vec![first.clone()];
        let mut remaining: Vec<String> = Vec::new();
        for (i, l) in rest.iter().enumerate() {
            if subset_mask & (1 << i) != 0 {
                block.push(l.clone());
            } else {
                remaining.push(l.clone());
            }
        }
        for tree in enumerate_labeled_trees(&block) {
            for forest in enumerate_forests(&remaining) {
                let mut f = forest.clone();
                f.push(tree.clone());
                f.sort();
                out.insert(f);
            }
        }
    }
    out
}

/// Number of decorated trees on `n` distinct generators, by exhaustive
/// enumeration (Cayley's `n^{n−1}` is the cross-check, not the method).
pub fn count_labeled_trees(n: usize) -> u64 {
    let labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    enumerate_labeled_trees(&labels).len() as u64
}

type CharStream<'a> = std::iter::Peekable<std::str::CharIndices<'a>>;

/// Parses the `label(child,child,…)` tree notation.
pub fn parse_tree(input: &str) -> Result<DecoratedTree> {
    let mut chars = input.char_indices().peekable();
    let tree = parse_tree_inner(input, &mut chars)?;
    skip_ws(&mut chars);
    if let Some(&(pos, c)) = chars.peek() {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected `{c}` at byte {pos}"),
        });
    }
    Ok(tree)
}

fn skip_ws(chars: &mut CharStream) {
    while matches!(chars.peek(), Some(&(_, c)) if c.is_whitespace()) {
        chars.next();
    }
}

fn parse_label(input: &str, chars: &mut CharStream) -> Result<String> {
    skip_ws(chars);
    let start = match chars.peek() {
        Some(&(pos, c)) if c.is_alphanumeric() || c == '_' => pos,
        Some(&(pos, c)) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected a label, found `{c}` at byte {pos}"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "expected a label, found end of input".into(),
            })
        }
    };
    let mut end = start;
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_alphanumeric() || c == '_' {
            end = pos + c.len_utf8();
            chars.next();
        } else {
            break;
        }
    }
    Ok(input[start..end].to_string())
}

fn parse_tree_inner(input: &str, chars: &mut CharStream) -> Result<DecoratedTree> {
    let label = parse_label(input, chars)?;
    skip_ws(chars);
    let mut children = Vec::new();
    if matches!(chars.peek(), Some(&(_, '('))) {
        chars.next();
        loop {
            children.push(parse_tree_inner(input, chars)?);
            skip_ws(chars);
            match chars.next() {
                Some((_, ',')) => continue,
                Some((_, ')')) => break,
                Some((pos, c)) => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("expected `,` or `)`, found `{c}` at byte {pos}"),
                    })
                }
                None => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: "unterminated `(`".into(),
                    })
                }
            }
        }
    }
    Ok(DecoratedTree::new(label, children))
}

/// Parses and evaluates a free-brace expression: a tree literal, or
/// `expr<expr,…>` applying the free symmetric brace (`a<>` is `a`).
pub fn eval_brace_expr(input: &str) -> Result<TreeLC> {
    let mut chars = input.char_indices().peekable();
    let value = parse_expr(input, &mut chars)?;
    skip_ws(&mut chars);
    if let Some(&(pos, c)) = chars.peek() {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected `{c}` at byte {pos}"),
        });
    }
    Ok(value)
}

fn parse_expr(input: &str, chars: &mut CharStream) -> Result<TreeLC> {
    let mut value = TreeLC::from_tree(parse_tree_inner(input, chars)?);
    loop {
        skip_ws(chars);
        if !matches!(chars.peek(), Some(&(_, '<'))) {
            return Ok(value);
        }
        chars.next();
        skip_ws(chars);
        let mut args: Vec<TreeLC> = Vec::new();
        if matches!(chars.peek(), Some(&(_, '>'))) {
            chars.next();
        } else {
            loop {
                args.push(parse_expr(input, chars)?);
                skip_ws(chars);
                match chars.next() {
                    Some((_, ',')) => continue,
                    Some((_, '>')) => break,
                    Some((pos, c)) => {
                        return Err(Error::Parse {
                            line: 1,
                            msg: format!("expected `,` or `>`, found `{c}` at byte {pos}"),
                        })
                    }
                    None => {
                        return Err(Error::Parse {
                            line: 1,
                            msg: "unterminated `<`".into(),
                        })
                    }
                }
            }
        }
        value = free_brace(&value, &args);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braces::{check_sym_brace_axiom, oudom_guin_brace, pre_lie};
    use crate::graded::int;

    fn t(s: &str) -> DecoratedTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn canonical_form_sorts_children() {
        assert_eq!(t("a(c,b)"), t("a(b,c)"));
        assert_eq!(t("a(c(d),b)").to_string(), "a(b,c(d))");
        assert_ne!(t("a(b(c))"), t("a(b,c)"));
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["a", "a(b)", "a(b,c)", "a(b(c),d)", "x1(x2(x3,x4),x5)"] {
            let tree = t(s);
            assert_eq!(parse_tree(&tree.to_string()).unwrap(), tree);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_tree("a(").is_err());
        assert!(parse_tree("a)b").is_err());
        assert!(parse_tree("(a)").is_err());
        assert!(parse_tree("a(b,,c)").is_err());
    }

    #[test]
    fn graft_onto_singleton_rebuilds_the_tree() {
        let host = DecoratedTree::leaf("r");
        let parts = vec![t("a(b)"), t("c")];
        let grafted = graft(&host, &parts, &[0, 0]).unwrap();
        assert_eq!(grafted, t("r(a(b),c)"));
        // empty attachment list is the identity
        assert_eq!(graft(&t("a(b)"), &[], &[]).unwrap(), t("a(b)"));
        // singleton onto singleton
        assert_eq!(
            graft(&DecoratedTree::leaf("a"), &[DecoratedTree::leaf("b")], &[0]).unwrap(),
            t("a(b)")
        );
    }

    #[test]
    fn graft_counts_vertices_and_edges() {
        let host = t("a(b,c)");
        let grafted = graft(&host, &[t("d(e)")], &[2]).unwrap();
        assert_eq!(grafted.vertex_count(), host.vertex_count() + 2);
        assert_eq!(grafted.edge_count(), host.edge_count() + 2);
    }

    #[test]
    fn graft_rejects_bad_vertex() {
        assert!(graft(&t("a"), &[t("b")], &[3]).is_err());
    }

    #[test]
    fn graft_is_multiset_on_attachments() {
        // permuting the attachments along with the assignment changes nothing
        let host = t("a(b)");
        let g1 = graft(&host, &[t("c"), t("d(e)")], &[0, 1]).unwrap();
        let g2 = graft(&host, &[t("d(e)"), t("c")], &[1, 0]).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn free_brace_base_cases() {
        let a = TreeLC::singleton("a");
        let b = TreeLC::singleton("b");
        assert_eq!(free_brace(&a, &[]), a);
        assert_eq!(free_brace(&a, &[b.clone()]), TreeLC::from_tree(t("a(b)")));
        // a(b)⟨c⟩ = a(b,c) + a(b(c))
        let ab = TreeLC::from_tree(t("a(b)"));
        let braced = free_brace(&ab, &[TreeLC::singleton("c")]);
        assert_eq!(braced.coeff(&t("a(b,c)")), int(1));
        assert_eq!(braced.coeff(&t("a(b(c))")), int(1));
        assert_eq!(braced.len(), 2);
    }

    #[test]
    fn free_brace_accumulates_coefficients() {
        // a(b,b)⟨c⟩: attaching c to either b gives the same canonical tree
        let host = TreeLC::from_tree(t("a(b,b)"));
        let braced = free_brace(&host, &[TreeLC::singleton("c")]);
        assert_eq!(braced.coeff(&t("a(b,b(c))")), int(2));
        assert_eq!(braced.coeff(&t("a(b,b,c)")), int(1));
    }

    #[test]
    fn tree_algebra_satisfies_the_brace_axiom() {
        let alg = TreeAlgebra;
        let x = TreeLC::from_tree(t("a(b)"));
        let xs = vec![TreeLC::singleton("c"), TreeLC::from_tree(t("d(e)"))];
        let ys = vec![TreeLC::singleton("f"), TreeLC::singleton("g")];
        for m in 0..=2 {
            for n in 0..=2 {
                let r = check_sym_brace_axiom(&alg, &x, &xs[..m], &ys[..n]);
                assert!(r.pass, "m={m} n={n}: {:?}", r.counterexample);
            }
        }
    }

    #[test]
    fn eval_tree_in_the_tree_algebra_is_the_identity() {
        let alg = TreeAlgebra;
        for s in ["a", "a(b)", "a(b(c),d)"] {
            let tree = t(s);
            let value = eval_tree(&alg, &tree, &|_, l| TreeLC::singleton(l));
            assert_eq!(value, TreeLC::from_tree(tree));
        }
    }

    #[test]
    fn corolla_evaluates_to_a_single_brace() {
        // x(x1,…,xm) evaluates to x⟨x₁,…,x_m⟩
        let alg = TreeAlgebra;
        let corolla = t("x(x1,x2,x3)");
        let lhs = eval_tree(&alg, &corolla, &|_, l| TreeLC::singleton(l));
        let rhs = free_brace(
            &TreeLC::singleton("x"),
            &[
                TreeLC::singleton("x1"),
                TreeLC::singleton("x2"),
                TreeLC::singleton("x3"),
            ],
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grafting_expansion_holds_in_the_tree_algebra() {
        let alg = TreeAlgebra;
        let phi = |l: &str| TreeLC::singleton(l);
        for (host, attach) in [
            (t("a"), vec![t("b"), t("c")]),
            (t("a(b)"), vec![t("c")]),
            (t("a(b)"), vec![t("c(d)"), t("e")]),
            (t("a(b,c)"), vec![t("d")]),
            (t("a(b)"), vec![]),
        ] {
            let r = check_grafting_expansion(&alg, &host, &attach, &phi);
            assert!(r.pass, "{:?}", r.counterexample);
        }
    }

    #[test]
    fn labeled_tree_counts_match_cayley() {
        assert_eq!(count_labeled_trees(1), 1);
        assert_eq!(count_labeled_trees(2), 2);
        assert_eq!(count_labeled_trees(3), 9);
        assert_eq!(count_labeled_trees(4), 64);
        for n in 1..=5usize {
            assert_eq!(count_labeled_trees(n), (n as u64).pow(n as u32 - 1));
        }
    }

    #[test]
    fn universal_map_is_a_homomorphism_into_the_tree_algebra() {
        // relabeling generators is a brace homomorphism
        let alg = TreeAlgebra;
        let phi = |l: &str| TreeLC::from_tree(t(&format!("{l}_img")));
        let t1 = TreeLC::from_tree(t("a(b)"));
        let t2 = TreeLC::singleton("c");
        let t3 = TreeLC::from_tree(t("d"));
        let lhs = universal_map(&alg, &phi, &free_brace(&t1, &[t2.clone(), t3.clone()]));
        let rhs = free_brace(
            &universal_map(&alg, &phi, &t1),
            &[
                universal_map(&alg, &phi, &t2),
                universal_map(&alg, &phi, &t3),
            ],
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn universal_map_on_singletons_is_phi() {
        let alg = TreeAlgebra;
        let phi = |l: &str| TreeLC::from_tree(t(&format!("{l}{l}")));
        assert_eq!(universal_map(&alg, &phi, &TreeLC::singleton("a")), phi("a"));
    }

    #[test]
    fn perturbing_one_tree_value_breaks_the_homomorphism() {
        // uniqueness: changing the value on the 2-vertex tree a(b) while
        // keeping generator values spoils multiplicativity
        let alg = TreeAlgebra;
        let phi = |l: &str| TreeLC::singleton(l);
        let perturbed = |x: &TreeLC| -> TreeLC {
            let mut out = universal_map(&alg, &phi, x);
            let bump = x.coeff(&t("a(b)"));
            out.add_term(t("zz"), &bump);
            out
        };
        let a = TreeLC::singleton("a");
        let b = TreeLC::singleton("b");
        let lhs = perturbed(&free_brace(&a, &[b.clone()]));
        let rhs = free_brace(&perturbed(&a), &[perturbed(&b)]);
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn oudom_guin_reconstructs_free_braces() {
        let alg = TreeAlgebra;
        let prelie = |x: &TreeLC, y: &TreeLC| pre_lie(&alg, x, y);
        let x = TreeLC::from_tree(t("a(b)"));
        let args = vec![
            TreeLC::singleton("c"),
            TreeLC::from_tree(t("d(e)")),
            TreeLC::singleton("f"),
        ];
        for n in 0..=3usize {
            let og = oudom_guin_brace(&alg, &prelie, &x, &args[..n]);
            let native = free_brace(&x, &args[..n]);
            assert_eq!(og, native, "n = {n}");
        }
    }

    #[test]
    fn brace_expression_evaluation() {
        assert_eq!(eval_brace_expr("a<>").unwrap(), TreeLC::singleton("a"));
        assert_eq!(eval_brace_expr("a<b>").unwrap(), TreeLC::from_tree(t("a(b)")));
        let e = eval_brace_expr("a(b)<c>").unwrap();
        assert_eq!(e.coeff(&t("a(b,c)")), int(1));
        assert_eq!(e.coeff(&t("a(b(c))")), int(1));
        // chained braces apply left to right
        let chained = eval_brace_expr("a<b><c>").unwrap();
        assert_eq!(chained.coeff(&t("a(b,c)")), int(1));
        assert_eq!(chained.coeff(&t("a(b(c))")), int(1));
    }
}
