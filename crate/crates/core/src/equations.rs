//! Equations and inequations over an algebra: evaluation, checking,
//! exhaustive solving over finite fields, division witnesses through
//! HNN-extensions, centralizers, normalizers and the normalizer-to-biderivation
//! map.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::derivations::{
    assignment_on_domain, biderivation_space, inner_biderivation, is_biderivation, restrict_map,
    AssignmentConflict, MapKind, MapOnSubspace,
};
use crate::error::{Error, Result};
use crate::fdalg::{Element, StructureAlgebra};
use crate::free::FreeElement;
use crate::hnn::{
    embedding_check_presentation, exact_model_check, hnn_extend, linear_form, EmbeddingStatus,
    EmbeddingVerdict, ExactModel, ModelOutcome,
};
use crate::linalg::{
    axpy, is_zero_vector, null_space, scale, Matrix, Subspace, Vector,
};
use crate::scalar::{Field, Scalar};

/// Default enumeration budget for [`solve_in`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Unreduced term over variables and constants of one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermExpr {
    Var(String),
    Const(Element),
    Bracket(Box<TermExpr>, Box<TermExpr>),
    Scale(Scalar, Box<TermExpr>),
    Sum(Vec<TermExpr>),
}

impl TermExpr {
    pub fn var(name: &str) -> TermExpr {
        TermExpr::Var(name.to_string())
    }

    pub fn bracket(a: TermExpr, b: TermExpr) -> TermExpr {
        TermExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn scale(c: Scalar, t: TermExpr) -> TermExpr {
        TermExpr::Scale(c, Box::new(t))
    }

    /// `self - other`.
    pub fn minus(self, other: TermExpr) -> TermExpr {
        let f = other.field_hint();
        let neg = match f {
            Some(f) => f.from_i64(-1),
            None => Field::Rational.from_i64(-1),
        };
        TermExpr::Sum(vec![self, TermExpr::scale(neg, other)])
    }

    fn field_hint(&self) -> Option<Field> {
        match self {
            TermExpr::Var(_) => None,
            TermExpr::Const(c) => c.first().map(Scalar::field),
            TermExpr::Bracket(a, b) => a.field_hint().or_else(|| b.field_hint()),
            TermExpr::Scale(c, _) => Some(c.field()),
            TermExpr::Sum(ts) => ts.iter().find_map(TermExpr::field_hint),
        }
    }

    pub fn variables(&self, out: &mut BTreeSet<String>) {
        match self {
            TermExpr::Var(x) => {
                out.insert(x.clone());
            }
            TermExpr::Const(_) => {}
            TermExpr::Bracket(a, b) => {
                a.variables(out);
                b.variables(out);
            }
            TermExpr::Scale(_, t) => t.variables(out),
            TermExpr::Sum(ts) => ts.iter().for_each(|t| t.variables(out)),
        }
    }
}

/// Equations `Φ = 0` and inequations `Φ ≠ 0` in the declared variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqSystem {
    pub vars: Vec<String>,
    pub equations: Vec<TermExpr>,
    pub inequations: Vec<TermExpr>,
}

impl EqSystem {
    pub fn new(vars: Vec<String>, equations: Vec<TermExpr>, inequations: Vec<TermExpr>) -> Result<Self> {
        let declared: BTreeSet<String> = vars.iter().cloned().collect();
        if declared.len() != vars.len() {
            return Err(Error::Usage("variable declared twice".into()));
        }
        let mut used = BTreeSet::new();
        for t in equations.iter().chain(&inequations) {
            t.variables(&mut used);
        }
        if let Some(x) = used.difference(&declared).next() {
            return Err(Error::Usage(format!("undeclared variable \"{x}\"")));
        }
        Ok(EqSystem {
            vars,
            equations,
            inequations,
        })
    }

    pub fn empty() -> EqSystem {
        EqSystem {
            vars: Vec::new(),
            equations: Vec::new(),
            inequations: Vec::new(),
        }
    }
}

pub type Assignment = BTreeMap<String, Element>;

/// Target algebra plus a pre-checked homomorphism from the constants' algebra.
#[derive(Clone, Debug)]
pub struct EvalContext<'a> {
    target: &'a StructureAlgebra,
    inclusion: Matrix,
    source_dim: usize,
}

impl<'a> EvalContext<'a> {
    pub fn identity(a: &'a StructureAlgebra) -> EvalContext<'a> {
        EvalContext {
            target: a,
            inclusion: Matrix::identity(a.field(), a.dim()),
            source_dim: a.dim(),
        }
    }

    pub fn new(source: &StructureAlgebra, target: &'a StructureAlgebra, inclusion: Matrix) -> Result<Self> {
        if !source.is_homomorphism_into(target, &inclusion) {
            return Err(Error::Rejected("inclusion is not an algebra homomorphism".into()));
        }
        Ok(EvalContext {
            target,
            inclusion,
            source_dim: source.dim(),
        })
    }

    pub fn target(&self) -> &StructureAlgebra {
        self.target
    }
}

pub fn eval_term(t: &TermExpr, asg: &Assignment, ctx: &EvalContext<'_>) -> Result<Element> {
    let a = ctx.target;
    match t {
        TermExpr::Var(x) => {
            let v = asg
                .get(x)
                .ok_or_else(|| Error::Usage(format!("no value for variable \"{x}\"")))?;
            if v.len() != a.dim() {
                return Err(Error::Dimension {
                    expected: a.dim(),
                    found: v.len(),
                });
            }
            Ok(v.clone())
        }
        TermExpr::Const(c) => {
            if c.len() != ctx.source_dim {
                return Err(Error::Dimension {
                    expected: ctx.source_dim,
                    found: c.len(),
                });
            }
            ctx.inclusion.mul_vec(c)
        }
        TermExpr::Bracket(x, y) => a.bracket(&eval_term(x, asg, ctx)?, &eval_term(y, asg, ctx)?),
        TermExpr::Scale(c, x) => Ok(scale(&a.field().convert(c)?, &eval_term(x, asg, ctx)?)),
        TermExpr::Sum(ts) => {
            let mut out = a.zero_element();
            for x in ts {
                axpy(&mut out, &a.field().one(), &eval_term(x, asg, ctx)?);
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintResult {
    /// `"eq"` or `"neq"`.
    pub kind: &'static str,
    pub index: usize,
    #[serde(serialize_with = "crate::io::ser_vector")]
    pub value: Vector,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionReport {
    pub holds: bool,
    pub constraints: Vec<ConstraintResult>,
}

pub fn check_solution(s: &EqSystem, asg: &Assignment, ctx: &EvalContext<'_>) -> Result<SolutionReport> {
    let mut constraints = Vec::new();
    for (index, t) in s.equations.iter().enumerate() {
        let value = eval_term(t, asg, ctx)?;
        let satisfied = is_zero_vector(&value);
        constraints.push(ConstraintResult {
            kind: "eq",
            index,
            value,
            satisfied,
        });
    }
    for (index, t) in s.inequations.iter().enumerate() {
        let value = eval_term(t, asg, ctx)?;
        let satisfied = !is_zero_vector(&value);
        constraints.push(ConstraintResult {
            kind: "neq",
            index,
            value,
            satisfied,
        });
    }
    Ok(SolutionReport {
        holds: constraints.iter().all(|c| c.satisfied),
        constraints,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveVerdict {
    Found(Assignment),
    /// Complete: every assignment was checked, in both enumeration orders.
    NoSolution,
    /// The search space exceeds the budget; nothing is claimed.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: SolveVerdict,
    /// `|L|^|X|`, or `None` if it overflows.
    pub search_space: Option<u64>,
    pub checked: u64,
    pub budget: u64,
}

impl SolveOutcome {
    pub fn label(&self) -> &'static str {
        match self.verdict {
            SolveVerdict::Found(_) => "found",
            SolveVerdict::NoSolution => "no-solution",
            SolveVerdict::Undecided => "undecided-budget",
        }
    }
}

fn decode(code: u64, p: u64, slots: usize, field: Field) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(slots);
    let mut c = code;
    let mut digits = vec![0u64; slots];
    for d in digits.iter_mut().rev() {
        *d = c % p;
        c /= p;
    }
    for d in digits {
        out.push(field.from_i64(d as i64));
    }
    out
}

fn assignment_from(vars: &[String], n: usize, flat: Vec<Scalar>) -> Assignment {
    vars.iter()
        .zip(flat.chunks(n.max(1)))
        .map(|(x, v)| (x.clone(), v[..n].to_vec()))
        .collect()
}

/// Exhaustive search over `L^X` for `L` over `GF(p)`, in lexicographic order
/// of coordinates (variables in declaration order).
pub fn solve_in(s: &EqSystem, a: &StructureAlgebra, budget: u64) -> Result<SolveOutcome> {
    let field = a.field();
    let p = field
        .order()
        .ok_or_else(|| Error::Usage("exhaustive solving needs a finite field".into()))?;
    if budget == 0 {
        return Err(Error::Usage("budget must be at least 1".into()));
    }
    let n = a.dim();
    let slots = n * s.vars.len();
    let space = u32::try_from(slots).ok().and_then(|e| p.checked_pow(e));
    let total = match space {
        Some(t) if t <= budget => t,
        _ => {
            return Ok(SolveOutcome {
                verdict: SolveVerdict::Undecided,
                search_space: space,
                checked: 0,
                budget,
            })
        }
    };
    let ctx = EvalContext::identity(a);
    let test = |code: u64| -> Result<Option<Assignment>> {
        let asg = assignment_from(&s.vars, n, decode(code, p, slots, field));
        Ok(check_solution(s, &asg, &ctx)?.holds.then_some(asg))
    };
    for code in 0..total {
        if let Some(asg) = test(code)? {
            return Ok(SolveOutcome {
                verdict: SolveVerdict::Found(asg),
                search_space: space,
                checked: code + 1,
                budget,
            });
        }
    }
    for code in (0..total).rev() {
        if test(code)?.is_some() {
            return Err(Error::Invariant(format!(
                "reverse enumeration found a solution at code {code} missed by the forward pass"
            )));
        }
    }
    Ok(SolveOutcome {
        verdict: SolveVerdict::NoSolution,
        search_space: space,
        checked: total,
        budget,
    })
}

/// Which unknown sits next to `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `[x, a] = b`, realised by an anti-derivation.
    Left,
    /// `[a, y] = b`, realised by a derivation.
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Side> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Usage(format!("side must be left or right, not \"{other}\""))),
        }
    }
}

/// Domain of the map `a ↦ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainMode {
    /// The subalgebra generated by `a`.
    Generated,
    /// The line through `a`; must itself be a subalgebra.
    Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisionConfig {
    pub side: Side,
    pub domain: DomainMode,
    pub degree: usize,
}

impl Default for DivisionConfig {
    fn default() -> Self {
        DivisionConfig {
            side: Side::Right,
            domain: DomainMode::Generated,
            degree: crate::hnn::DEFAULT_DEGREE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionWitness {
    pub kind: MapKind,
    pub map: MapOnSubspace,
    /// Model in which `t` solves the equation, when one was found.
    pub model: Option<ExactModel>,
    pub model_check: Option<SolutionReport>,
    pub embedding: EmbeddingVerdict,
    /// Whether the relator-level equation lies in the truncated relator ideal.
    pub relator_check: bool,
    pub verified: bool,
    /// `"exact-model"`, `"truncated-certificate"` or `"none"`.
    pub method: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisionOutcome {
    Witness(Box<DivisionWitness>),
    Inconsistent(AssignmentConflict),
    /// The forced map on `⟨a⟩` collapses the base, so no Leibniz algebra
    /// containing `L` solves the equation.
    Obstructed {
        map: MapOnSubspace,
        embedding: EmbeddingVerdict,
    },
}

impl DivisionOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, DivisionOutcome::Witness(w) if w.verified)
    }
}

/// The one-variable system `[a, y] - b = 0` (right) or `[x, a] - b = 0` (left).
pub fn division_system(a: &[Scalar], b: &[Scalar], side: Side) -> EqSystem {
    let (name, lhs) = match side {
        Side::Right => ("y", TermExpr::bracket(TermExpr::Const(a.to_vec()), TermExpr::var("y"))),
        Side::Left => ("x", TermExpr::bracket(TermExpr::var("x"), TermExpr::Const(a.to_vec()))),
    };
    EqSystem {
        vars: vec![name.to_string()],
        equations: vec![lhs.minus(TermExpr::Const(b.to_vec()))],
        inequations: Vec::new(),
    }
}

/// Solves `[a, y] = b` or `[x, a] = b` in an HNN-extension of `L`, with the
/// stable letter `t` as the unknown.
pub fn division_witness(
    l: &StructureAlgebra,
    a: &[Scalar],
    b: &[Scalar],
    config: DivisionConfig,
) -> Result<DivisionOutcome> {
    l.require_verified()?;
    let (f, n) = (l.field(), l.dim());
    for v in [a, b] {
        if v.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: v.len(),
            });
        }
    }
    if is_zero_vector(a) {
        return Err(Error::Rejected("a = 0 has no division witness".into()));
    }
    let kind = match config.side {
        Side::Right => MapKind::Derivation,
        Side::Left => MapKind::AntiDerivation,
    };
    let domain = match config.domain {
        DomainMode::Generated => l.subalgebra_generated(&[a.to_vec()])?,
        DomainMode::Span => {
            let s = Subspace::span(f, n, vec![a.to_vec()]);
            if !l.is_subalgebra(&s) {
                return Err(Error::Rejected("span of a is not a subalgebra".into()));
            }
            s
        }
    };
    let map = match assignment_on_domain(l, &domain, &[(a.to_vec(), b.to_vec())], kind)? {
        Ok(m) => m,
        Err(conflict) => return Ok(DivisionOutcome::Inconsistent(conflict)),
    };
    let h = hnn_extend(l, &map, kind)?;
    let (embedding, quotient) = embedding_check_presentation(&h.presentation, n, config.degree)?;
    // A solution `t` in any extension acts on `⟨a⟩` by exactly this map, so
    // the relators hold there and a collapse rules every extension out.
    if embedding.status == EmbeddingStatus::Collapse {
        return Ok(DivisionOutcome::Obstructed { map, embedding });
    }

    let t = FreeElement::generator(f, h.stable_letter());
    let av = linear_form(f, a);
    let lhs = match config.side {
        Side::Right => av.bracket(&t),
        Side::Left => t.bracket(&av),
    };
    let relator_check = quotient.contains(&lhs.sub(&linear_form(f, b)))?;

    let system = division_system(a, b, config.side);
    let (model, model_check) = match exact_model_check(&h) {
        ModelOutcome::Model(m) if m.verify(&h) => {
            let ctx = EvalContext::new(l, &m.algebra, m.embedding.clone())?;
            let asg: Assignment = [(system.vars[0].clone(), m.stable.clone())].into();
            let report = check_solution(&system, &asg, &ctx)?;
            (Some(*m), Some(report))
        }
        _ => (None, None),
    };
    let exact_ok = model_check.as_ref().is_some_and(|r| r.holds);
    let truncated_ok = embedding.status == EmbeddingStatus::NoCollapse && relator_check;
    let method = if exact_ok {
        "exact-model"
    } else if truncated_ok {
        "truncated-certificate"
    } else {
        "none"
    };
    Ok(DivisionOutcome::Witness(Box::new(DivisionWitness {
        kind,
        map,
        model,
        model_check,
        embedding,
        relator_check,
        verified: exact_ok || truncated_ok,
        method,
    })))
}

fn stacked(f: Field, n: usize, maps: impl Iterator<Item = Matrix>) -> Matrix {
    maps.fold(Matrix::zeros(f, 0, n), |acc, m| acc.vstack(&m).expect("same width"))
}

/// `{x : [x, s] = [s, x] = 0 for all s in span S}`.
pub fn centralizer(l: &StructureAlgebra, s: &[Element]) -> Subspace {
    let (f, n) = (l.field(), l.dim());
    let m = stacked(
        f,
        n,
        s.iter()
            .flat_map(|v| [l.right_multiplication(v), l.left_multiplication(v)]),
    );
    null_space(&m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalizers {
    /// `{x : [A, x] ⊆ A}`.
    pub left: Subspace,
    /// `{y : [y, A] ⊆ A}`.
    pub right: Subspace,
    pub both: Subspace,
}

pub fn normalizer(l: &StructureAlgebra, a: &Subspace) -> Result<Normalizers> {
    let (f, n) = (l.field(), l.dim());
    if a.ambient() != n {
        return Err(Error::Dimension {
            expected: n,
            found: a.ambient(),
        });
    }
    let q = a.quotient_map();
    let compose = |m: Matrix| q.mul(&m).expect("shape");
    let left = null_space(&stacked(
        f,
        n,
        a.basis().iter().map(|v| compose(l.left_multiplication(v))),
    ));
    let right = null_space(&stacked(
        f,
        n,
        a.basis().iter().map(|v| compose(l.right_multiplication(v))),
    ));
    let both = left.intersection(&right)?;
    Ok(Normalizers { left, right, both })
}

/// Pair attached to `z`: `(-R_z, L_z)` restricted to `A`, in `A`'s basis.
pub fn normalizer_pair(l: &StructureAlgebra, a: &Subspace, z: &[Scalar]) -> Result<(Matrix, Matrix)> {
    let f = l.field();
    let minus_r = l.right_multiplication(z).scaled(&f.from_i64(-1));
    let left = l.left_multiplication(z);
    let leaves = |w: Element| Error::Rejected(format!("z does not normalize A: image {:?} leaves A", crate::io::vector_strings(&w)));
    Ok((
        restrict_map(a, &minus_r).map_err(leaves)?,
        restrict_map(a, &left).map_err(leaves)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NzBiderReport {
    pub normalizer: Subspace,
    pub centralizer: Subspace,
    /// Indices of normalizer basis vectors whose pair fails the biderivation check.
    pub failing_pairs: Vec<usize>,
    pub linear: bool,
    pub kernel: Subspace,
    pub kernel_contains_centralizer: bool,
    pub image_dim: usize,
    pub bider_dim: usize,
    /// For `A = L`: per basis vector, whether the pair equals the inner biderivation.
    pub inner_comparison: Option<Vec<bool>>,
}

impl NzBiderReport {
    pub fn passes(&self) -> bool {
        self.failing_pairs.is_empty() && self.linear && self.kernel_contains_centralizer
    }
}

fn flat_pair(d: &Matrix, big_d: &Matrix) -> Vector {
    let mut v = crate::derivations::flatten(d);
    v.extend(crate::derivations::flatten(big_d));
    v
}

/// The map `N(A) → Bider(A)`, `z ↦ (-R_z|_A, L_z|_A)`: pair checks, linearity,
/// kernel and dimensions.
pub fn nz_to_bider(l: &StructureAlgebra, a: &Subspace) -> Result<NzBiderReport> {
    let f = l.field();
    let sub = l.subalgebra_structure(a)?;
    let norm = normalizer(l, a)?.both;
    let cent = centralizer(l, a.basis()).intersection(&norm)?;
    let zs = norm.basis();
    let mut images = Vec::with_capacity(zs.len());
    let mut failing_pairs = Vec::new();
    for (i, z) in zs.iter().enumerate() {
        let (d, big_d) = normalizer_pair(l, a, z)?;
        if !is_biderivation(&sub, &d, &big_d) {
            failing_pairs.push(i);
        }
        images.push(flat_pair(&d, &big_d));
    }
    let phi = |z: &[Scalar]| -> Result<Vector> {
        let (d, big_d) = normalizer_pair(l, a, z)?;
        Ok(flat_pair(&d, &big_d))
    };
    let mut linear = true;
    let two = f.from_i64(2);
    for (i, zi) in zs.iter().enumerate() {
        linear &= phi(&scale(&two, zi))? == scale(&two, &images[i]);
        for (j, zj) in zs.iter().enumerate().skip(i) {
            let mut sum = zi.clone();
            axpy(&mut sum, &f.one(), zj);
            let mut expect = images[i].clone();
            axpy(&mut expect, &f.one(), &images[j]);
            linear &= phi(&sum)? == expect;
        }
    }
    let width = 2 * a.dim() * a.dim();
    let kernel = if zs.is_empty() {
        Subspace::zero(f, l.dim())
    } else {
        let m = Matrix::from_columns(f, width, &images)?;
        let coords = null_space(&m);
        Subspace::span(
            f,
            l.dim(),
            coords
                .basis()
                .iter()
                .map(|c| norm.vector_from_coordinates(c))
                .collect(),
        )
    };
    let image_dim = if zs.is_empty() {
        0
    } else {
        Matrix::from_columns(f, width, &images)?.rank()
    };
    let inner_comparison = if a.is_full() {
        let mut rows = Vec::with_capacity(l.dim());
        for i in 0..l.dim() {
            let z = l.basis_element(i);
            let inner = inner_biderivation(l, &z)?;
            let (d, big_d) = normalizer_pair(l, a, &z)?;
            rows.push(&d == inner.d() && &big_d == inner.big_d());
        }
        Some(rows)
    } else {
        None
    };
    Ok(NzBiderReport {
        kernel_contains_centralizer: cent.is_subspace_of(&kernel),
        normalizer: norm,
        centralizer: cent,
        failing_pairs,
        linear,
        kernel,
        image_dim,
        bider_dim: biderivation_space(&sub).dim(),
        inner_comparison,
    })
}

/// Variables `x1..xn`, equations `[x_i, x_j] - Σ c(i,j,r) x_r = 0`, inequations `x_i ≠ 0`.
pub fn system_from_constants(h: &StructureAlgebra) -> Result<EqSystem> {
    h.require_verified()?;
    let n = h.dim();
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut equations = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut terms = vec![TermExpr::bracket(TermExpr::var(&vars[i]), TermExpr::var(&vars[j]))];
            for (r, c) in h.basis_bracket(i, j).iter().enumerate() {
                if !c.is_zero() {
                    terms.push(TermExpr::scale(-c, TermExpr::var(&vars[r])));
                }
            }
            equations.push(if terms.len() == 1 {
                terms.pop().expect("one term")
            } else {
                TermExpr::Sum(terms)
            });
        }
    }
    let inequations = vars.iter().map(|x| TermExpr::var(x)).collect();
    EqSystem::new(vars, equations, inequations)
}

/// Coordinates of an assignment in a fixed order, for reports.
pub fn assignment_rows(asg: &Assignment) -> Vec<(String, Vec<String>)> {
    asg.iter()
        .map(|(k, v)| (k.clone(), crate::io::vector_strings(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn n2(f: Field) -> StructureAlgebra {
        StructureAlgebra::from_brackets(f, 2, &[(1, 1, vec![(0, f.one())])]).unwrap()
    }

    fn v(f: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn evaluation() {
        let a = n2(q());
        let ctx = EvalContext::identity(&a);
        let e1 = v(q(), &[1, 0]);
        let e2 = v(q(), &[0, 1]);
        let asg: Assignment = [("x".to_string(), e2.clone())].into();
        assert_eq!(eval_term(&TermExpr::Const(e1.clone()), &asg, &ctx).unwrap(), e1);
        let t = TermExpr::bracket(TermExpr::var("x"), TermExpr::Const(e2.clone()));
        assert_eq!(eval_term(&t, &asg, &ctx).unwrap(), e1);
        assert!(eval_term(&TermExpr::var("y"), &asg, &ctx).is_err());
    }

    #[test]
    fn checking() {
        let a = n2(q());
        let ctx = EvalContext::identity(&a);
        assert!(check_solution(&EqSystem::empty(), &Assignment::new(), &ctx).unwrap().holds);
        let s = EqSystem::new(
            vec!["x".into()],
            vec![TermExpr::bracket(TermExpr::var("x"), TermExpr::var("x"))],
            vec![TermExpr::var("x")],
        )
        .unwrap();
        let asg: Assignment = [("x".to_string(), v(q(), &[1, 0]))].into();
        assert!(check_solution(&s, &asg, &ctx).unwrap().holds);
        let asg: Assignment = [("x".to_string(), v(q(), &[0, 1]))].into();
        assert!(!check_solution(&s, &asg, &ctx).unwrap().holds);
    }

    #[test]
    fn homomorphism_is_prechecked() {
        let a = n2(q());
        let ab = StructureAlgebra::abelian(q(), 2);
        assert!(EvalContext::new(&a, &ab, Matrix::identity(q(), 2)).is_err());
        assert!(EvalContext::new(&ab, &ab, Matrix::identity(q(), 2)).is_ok());
    }

    #[test]
    fn exhaustive_solving() {
        let f = Field::prime(5).unwrap();
        let a = n2(f);
        let s = EqSystem::new(
            vec!["x".into()],
            vec![TermExpr::bracket(TermExpr::var("x"), TermExpr::var("x")).minus(TermExpr::Const(v(f, &[1, 0])))],
            vec![TermExpr::var("x")],
        )
        .unwrap();
        let out = solve_in(&s, &a, DEFAULT_BUDGET).unwrap();
        let SolveVerdict::Found(asg) = out.verdict else {
            panic!("expected a solution");
        };
        // [x, x] = x_2^2 e1, so x_2 = ±1; lexicographically first is (0, 1).
        assert_eq!(asg["x"], v(f, &[0, 1]));

        let ab = StructureAlgebra::abelian(f, 2);
        let s = division_system(&v(f, &[1, 0]), &v(f, &[0, 1]), Side::Right);
        assert_eq!(solve_in(&s, &ab, DEFAULT_BUDGET).unwrap().verdict, SolveVerdict::NoSolution);
        assert_eq!(solve_in(&s, &ab, 3).unwrap().verdict, SolveVerdict::Undecided);

        let eq = EqSystem::new(
            vec!["x".into()],
            vec![TermExpr::var("x").minus(TermExpr::Const(v(f, &[3, 4])))],
            vec![],
        )
        .unwrap();
        assert_eq!(
            solve_in(&eq, &ab, DEFAULT_BUDGET).unwrap().verdict,
            SolveVerdict::Found([("x".to_string(), v(f, &[3, 4]))].into())
        );
        assert!(solve_in(&eq, &StructureAlgebra::abelian(q(), 2), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn centralizers_and_normalizers() {
        let a = n2(q());
        assert!(centralizer(&a, &[]).is_full());
        assert_eq!(centralizer(&a, &[v(q(), &[0, 1])]), Subspace::span(q(), 2, vec![v(q(), &[1, 0])]));
        let ab = StructureAlgebra::abelian(q(), 3);
        assert!(centralizer(&ab, &[v(q(), &[1, 2, 3])]).is_full());

        let line = Subspace::span(q(), 2, vec![v(q(), &[1, 0])]);
        let nz = normalizer(&a, &line).unwrap();
        assert!(nz.left.is_full() && nz.right.is_full() && nz.both.is_full());
        assert!(normalizer(&a, &Subspace::full(q(), 2)).unwrap().both.is_full());
        assert!(normalizer(&a, &Subspace::zero(q(), 2)).unwrap().both.is_full());
        // span{e2}: [e2, e2] = e1 leaves it, so neither normalizer contains e2.
        let e2 = Subspace::span(q(), 2, vec![v(q(), &[0, 1])]);
        let nz = normalizer(&a, &e2).unwrap();
        assert_eq!(nz.both, Subspace::span(q(), 2, vec![v(q(), &[1, 0])]));
    }

    #[test]
    fn normalizer_to_biderivations() {
        let ab = StructureAlgebra::abelian(q(), 2);
        let line = Subspace::span(q(), 2, vec![v(q(), &[1, 1])]);
        let r = nz_to_bider(&ab, &line).unwrap();
        assert!(r.passes());
        assert!(r.kernel.is_full());
        assert_eq!(r.image_dim, 0);

        let a = n2(q());
        let line = Subspace::span(q(), 2, vec![v(q(), &[1, 0])]);
        let r = nz_to_bider(&a, &line).unwrap();
        assert!(r.passes());
        assert!(r.centralizer.contains(&v(q(), &[1, 0])));

        let r = nz_to_bider(&a, &Subspace::full(q(), 2)).unwrap();
        assert!(r.passes());
        assert_eq!(r.inner_comparison, Some(vec![true, true]));
        assert_eq!(r.kernel, Subspace::span(q(), 2, vec![v(q(), &[1, 0])]));
        assert_eq!(r.image_dim, 1);
    }

    #[test]
    fn constants_system() {
        let one = StructureAlgebra::abelian(q(), 1);
        let s = system_from_constants(&one).unwrap();
        assert_eq!(s.equations.len(), 1);
        assert_eq!(s.inequations.len(), 1);
        let f = Field::prime(3).unwrap();
        let a = n2(f);
        let s = system_from_constants(&a).unwrap();
        assert_eq!(s.equations.len(), 4);
        let asg: Assignment = [("x1".to_string(), v(f, &[1, 0])), ("x2".to_string(), v(f, &[0, 1]))].into();
        assert!(check_solution(&s, &asg, &EvalContext::identity(&a)).unwrap().holds);
        assert!(matches!(solve_in(&s, &a, DEFAULT_BUDGET).unwrap().verdict, SolveVerdict::Found(_)));
    }

    #[test]
    fn division_in_abelian_and_n2() {
        let ab = StructureAlgebra::abelian(q(), 2);
        let out = division_witness(&ab, &v(q(), &[1, 0]), &v(q(), &[2, 3]), DivisionConfig::default()).unwrap();
        let DivisionOutcome::Witness(w) = &out else {
            panic!("abelian assignments are consistent");
        };
        assert!(w.verified);
        assert_eq!(w.method, "exact-model");
        let left = DivisionConfig {
            side: Side::Left,
            ..DivisionConfig::default()
        };
        assert!(division_witness(&ab, &v(q(), &[1, 1]), &v(q(), &[0, 1]), left).unwrap().is_verified());

        let a = n2(q());
        let out = division_witness(&a, &v(q(), &[1, 0]), &v(q(), &[1, 0]), DivisionConfig::default()).unwrap();
        assert!(out.is_verified());

        // A = L, d(e2) = e2 forces d(e1) = 2 e1.
        let DivisionOutcome::Witness(w) =
            division_witness(&a, &v(q(), &[0, 1]), &v(q(), &[0, 1]), DivisionConfig::default()).unwrap()
        else {
            panic!("consistent");
        };
        assert_eq!(w.map.apply(&v(q(), &[1, 0])).unwrap(), v(q(), &[2, 0]));
        assert!(w.verified);

        assert!(matches!(
            division_witness(&a, &v(q(), &[0, 0]), &v(q(), &[1, 0]), DivisionConfig::default()),
            Err(Error::Rejected(_))
        ));
        let span = DivisionConfig {
            domain: DomainMode::Span,
            ..DivisionConfig::default()
        };
        assert!(division_witness(&a, &v(q(), &[0, 1]), &v(q(), &[0, 1]), span).is_err());

        // e1 is a square, so [x, e1] = 0 everywhere and [x, e1] = e1 is obstructed.
        let left = DivisionConfig {
            side: Side::Left,
            ..DivisionConfig::default()
        };
        let out = division_witness(&a, &v(q(), &[1, 0]), &v(q(), &[1, 0]), left).unwrap();
        let DivisionOutcome::Obstructed { embedding, .. } = out else {
            panic!("expected an obstruction");
        };
        assert_eq!(embedding.witness, Some(v(q(), &[1, 0])));
    }
}
