//! Presentations, HNN-extensions by (anti-)derivations, and the
//! degree-truncated quotient engine used to test that a base algebra embeds
//! into its HNN-extension.
//!
//! The relator ideal is approximated inside the degree-`≤ N` slice of the
//! free algebra by saturation: starting from the relators, every element `r`
//! of the current span is bracketed on both sides with every word `m` such
//! that `deg r + deg m ≤ N`. The resulting `J_N` is contained in the true
//! ideal, so a linear dependence among the base generators modulo `J_N` is a
//! genuine collapse, while independence is only evidence up to degree `N`.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::derivations::{extend_to_algebra, MapKind, MapOnSubspace};
use crate::error::{Error, Result};
use crate::fdalg::{Element, LeibnizReport, StructureAlgebra};
use crate::free::{bracket_words, graded_basis, FreeElement, Monomial};
use crate::linalg::{null_space, zero_vector, Matrix, Vector};
use crate::scalar::{Field, Scalar};

pub const DEFAULT_DEGREE: usize = 4;
/// Largest truncation degree accepted without an explicit override.
pub const MAX_DEGREE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub field: Field,
    pub generators: usize,
    pub relators: Vec<FreeElement>,
}

impl Presentation {
    pub fn new(field: Field, generators: usize, relators: Vec<FreeElement>) -> Result<Self> {
        for (i, r) in relators.iter().enumerate() {
            if r.is_zero() {
                return Err(Error::Usage(format!("relator {i} is zero")));
            }
            if r.generator_bound() > generators {
                return Err(Error::Usage(format!("relator {i} uses an undeclared generator")));
            }
        }
        Ok(Presentation {
            field,
            generators,
            relators,
        })
    }

    pub fn max_relator_degree(&self) -> usize {
        self.relators.iter().map(FreeElement::degree).max().unwrap_or(0)
    }
}

/// `Σ coords_i x_i` in the free algebra.
pub fn linear_form(field: Field, coords: &[Scalar]) -> FreeElement {
    let mut e = FreeElement::zero(field);
    for (g, c) in coords.iter().enumerate() {
        e.add_term(Monomial::letter(g), c);
    }
    e
}

/// Structure-constant presentation: `[x_i, x_j] - Σ_k c(i,j,k) x_k` for all pairs.
pub fn present(a: &StructureAlgebra) -> Result<Presentation> {
    a.require_verified()?;
    let f = a.field();
    let n = a.dim();
    let mut relators = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let word = FreeElement::monomial(f, Monomial::new(vec![i, j]), f.one());
            relators.push(word.sub(&linear_form(f, a.basis_bracket(i, j))));
        }
    }
    Presentation::new(f, n, relators)
}

/// `⟨L, t : d(a) = [a, t], a ∈ A⟩` (derivation) or `⟨L, t : d(a) = [t, a]⟩` (anti).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnnExtension {
    pub base: StructureAlgebra,
    pub map: MapOnSubspace,
    pub kind: MapKind,
    /// Generators `0..n` are the base basis, `n` is the stable letter `t`.
    pub presentation: Presentation,
}

impl HnnExtension {
    pub fn stable_letter(&self) -> usize {
        self.base.dim()
    }
}

pub fn hnn_extend(a: &StructureAlgebra, map: &MapOnSubspace, kind: MapKind) -> Result<HnnExtension> {
    a.require_verified()?;
    if map.domain.ambient() != a.dim() || map.images.iter().any(|v| v.len() != a.dim()) {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: map.domain.ambient(),
        });
    }
    if !a.is_subalgebra(&map.domain) {
        let basis = map.domain.basis();
        let mut witness = None;
        'outer: for u in basis {
            for v in basis {
                let w = a.bracket_unchecked(u, v);
                if !map.domain.contains(&w) {
                    witness = Some(crate::io::vector_strings(&w));
                    break 'outer;
                }
            }
        }
        return Err(Error::Rejected(format!(
            "A is not a subalgebra: bracket {:?} leaves A",
            witness.unwrap_or_default()
        )));
    }
    if let Some(r) = map.residual_on(a, kind) {
        if let Some(pos) = r.iter().position(|x| !x.is_zero()) {
            let n = a.dim();
            let k = map.domain.dim();
            let pair = pos / n;
            return Err(Error::Rejected(format!(
                "map is not a {kind:?} on A: identity fails on basis pair ({}, {}) of A",
                pair / k,
                pair % k
            )));
        }
    }
    let f = a.field();
    let n = a.dim();
    let t = FreeElement::generator(f, n);
    let mut presentation = present(a)?;
    presentation.generators = n + 1;
    for (basis_vec, image) in map.domain.basis().iter().zip(&map.images) {
        let av = linear_form(f, basis_vec);
        let bracket = match kind {
            MapKind::Derivation => av.bracket(&t),
            MapKind::AntiDerivation => t.bracket(&av),
        };
        presentation
            .relators
            .push(bracket.sub(&linear_form(f, image)));
    }
    Ok(HnnExtension {
        base: a.clone(),
        map: map.clone(),
        kind,
        presentation,
    })
}

type SparseVec = BTreeMap<usize, Scalar>;

/// Indexing of all words of length `1..=N`, highest degree first so that the
/// leading entry of a sparse vector is one of its top-degree words.
#[derive(Clone, Debug)]
struct WordIndex {
    generators: usize,
    degree: usize,
    offsets: Vec<usize>,
}

impl WordIndex {
    fn new(generators: usize, degree: usize) -> WordIndex {
        let mut offsets = vec![0; degree + 1];
        let mut acc = 0;
        for d in (1..=degree).rev() {
            offsets[d] = acc;
            acc += generators.pow(d as u32);
        }
        WordIndex {
            generators,
            degree,
            offsets,
        }
    }

    fn index(&self, word: &[usize]) -> usize {
        let code = word.iter().fold(0, |acc, &g| acc * self.generators + g);
        self.offsets[word.len()] + code
    }

    fn degree_of(&self, idx: usize) -> usize {
        (1..=self.degree)
            .find(|&d| idx >= self.offsets[d] && idx < self.offsets[d] + self.generators.pow(d as u32))
            .expect("index in range")
    }

    fn word(&self, idx: usize) -> Vec<usize> {
        let d = self.degree_of(idx);
        let mut code = idx - self.offsets[d];
        let mut w = vec![0; d];
        for slot in w.iter_mut().rev() {
            *slot = code % self.generators;
            code /= self.generators;
        }
        w
    }
}

/// Degree-`≤ N` slice of the free algebra modulo the saturated relator span `J_N`.
#[derive(Clone, Debug)]
pub struct TruncatedQuotient {
    field: Field,
    index: WordIndex,
    /// Semi-echelon basis of `J_N` keyed by leading column; leading coefficient 1.
    pivots: BTreeMap<usize, SparseVec>,
}

impl TruncatedQuotient {
    pub fn degree(&self) -> usize {
        self.index.degree
    }

    pub fn generators(&self) -> usize {
        self.index.generators
    }

    pub fn ideal_dim(&self) -> usize {
        self.pivots.len()
    }

    /// `k^d - #(basis vectors of J_N with top degree d)` for `d = 1..=N`.
    pub fn quotient_dims_per_degree(&self) -> Vec<usize> {
        let mut per = vec![0usize; self.index.degree + 1];
        for &p in self.pivots.keys() {
            per[self.index.degree_of(p)] += 1;
        }
        (1..=self.index.degree)
            .map(|d| self.index.generators.pow(d as u32) - per[d])
            .collect()
    }

    fn to_sparse(&self, e: &FreeElement) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (m, c) in e.terms() {
            if m.degree() > self.index.degree {
                return Err(Error::Usage(format!(
                    "element of degree {} exceeds truncation degree {}",
                    m.degree(),
                    self.index.degree
                )));
            }
            if m.word().iter().any(|&g| g >= self.index.generators) {
                return Err(Error::Usage("element uses an undeclared generator".into()));
            }
            v.insert(self.index.index(m.word()), c.clone());
        }
        Ok(v)
    }

    fn to_free(&self, v: &SparseVec) -> FreeElement {
        let mut e = FreeElement::zero(self.field);
        for (&i, c) in v {
            e.add_term(Monomial::new(self.index.word(i)), c);
        }
        e
    }

    fn sub_scaled(v: &mut SparseVec, c: &Scalar, b: &SparseVec) {
        for (&i, x) in b {
            let delta = c * x;
            match v.get_mut(&i) {
                Some(y) => {
                    *y -= &delta;
                    if y.is_zero() {
                        v.remove(&i);
                    }
                }
                None => {
                    v.insert(i, -delta);
                }
            }
        }
    }

    /// Reduces until the leading column is not a pivot; returns the remainder.
    fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((&lead, c)) = v.iter().next() {
            match self.pivots.get(&lead) {
                Some(b) => {
                    let c = c.clone();
                    Self::sub_scaled(&mut v, &c, b);
                }
                None => break,
            }
        }
        v
    }

    /// Canonical representative: no entry sits on a pivot column.
    fn normal_form_sparse(&self, mut v: SparseVec) -> SparseVec {
        let mut from = 0;
        loop {
            let next = v
                .range(from..)
                .find(|(i, _)| self.pivots.contains_key(i))
                .map(|(&i, c)| (i, c.clone()));
            match next {
                Some((i, c)) => {
                    Self::sub_scaled(&mut v, &c, &self.pivots[&i]);
                    from = i + 1;
                }
                None => return v,
            }
        }
    }

    fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let mut r = self.reduce_leading(v);
        let (&lead, c) = r.iter().next()?;
        let inv = c.inverse().expect("nonzero lead");
        for x in r.values_mut() {
            *x = &*x * &inv;
        }
        self.pivots.insert(lead, r);
        Some(lead)
    }

    /// Normal form of `e` modulo `J_N`.
    pub fn normal_form(&self, e: &FreeElement) -> Result<FreeElement> {
        let v = self.to_sparse(e)?;
        Ok(self.to_free(&self.normal_form_sparse(v)))
    }

    /// Whether `e` lies in `J_N`.
    pub fn contains(&self, e: &FreeElement) -> Result<bool> {
        Ok(self.normal_form(e)?.is_zero())
    }

    /// Basis of `J_N` as free-algebra elements.
    pub fn ideal_basis(&self) -> Vec<FreeElement> {
        self.pivots.values().map(|v| self.to_free(v)).collect()
    }

    fn saturate(&mut self, mut queue: VecDeque<usize>) {
        let words_by_degree: Vec<Vec<Monomial>> = (0..=self.index.degree)
            .map(|d| {
                if d == 0 {
                    Vec::new()
                } else {
                    graded_basis(self.index.generators, d)
                }
            })
            .collect();
        while let Some(lead) = queue.pop_front() {
            let b = self.to_free(&self.pivots[&lead]);
            let room = self.index.degree - self.index.degree_of(lead);
            let mut products = Vec::new();
            for words in &words_by_degree[1..=room] {
                for m in words {
                    products.push(bracket_with_word(&b, m.word(), true));
                    products.push(bracket_with_word(&b, m.word(), false));
                }
            }
            for p in products {
                if p.is_zero() {
                    continue;
                }
                let v = self.to_sparse(&p).expect("degree within bound");
                if let Some(new_lead) = self.insert(v) {
                    queue.push_back(new_lead);
                }
            }
        }
    }

    /// Verifies the saturation invariant directly: every basis element of
    /// `J_N`, bracketed on either side with every word that keeps the degree
    /// within `N`, lands back in `J_N`.
    pub fn is_saturated(&self) -> bool {
        for (&lead, v) in &self.pivots {
            let b = self.to_free(v);
            let room = self.index.degree - self.index.degree_of(lead);
            for d in 1..=room {
                for m in graded_basis(self.index.generators, d) {
                    for right in [true, false] {
                        let p = bracket_with_word(&b, m.word(), right);
                        if !self.contains(&p).expect("within bound") {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// `[e, m]` when `right`, else `[m, e]`.
fn bracket_with_word(e: &FreeElement, m: &[usize], right: bool) -> FreeElement {
    let mut out = FreeElement::zero(e.field());
    for (w, c) in e.terms() {
        let p = if right {
            bracket_words(e.field(), w.word(), m)
        } else {
            bracket_words(e.field(), m, w.word())
        };
        out.add_scaled(c, &p);
    }
    out
}

pub fn build_truncated_quotient(p: &Presentation, degree: usize) -> Result<TruncatedQuotient> {
    if degree == 0 {
        return Err(Error::Usage("degree bound must be at least 1".into()));
    }
    if degree < p.max_relator_degree() {
        return Err(Error::Usage(format!(
            "degree bound {degree} is below the relator degree {}",
            p.max_relator_degree()
        )));
    }
    let mut q = TruncatedQuotient {
        field: p.field,
        index: WordIndex::new(p.generators, degree),
        pivots: BTreeMap::new(),
    };
    let mut queue = VecDeque::new();
    for r in &p.relators {
        let v = q.to_sparse(r)?;
        if let Some(lead) = q.insert(v) {
            queue.push_back(lead);
        }
    }
    q.saturate(queue);
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingStatus {
    #[serde(rename = "no-collapse")]
    NoCollapse,
    #[serde(rename = "collapse")]
    Collapse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingVerdict {
    pub status: EmbeddingStatus,
    pub degree: usize,
    pub quotient_dims_per_degree: Vec<usize>,
    pub ideal_dim: usize,
    /// Coefficients `c` with `Σ c_i x_i ∈ J_N`, when the base collapses.
    #[serde(serialize_with = "crate::io::ser_opt_vector")]
    pub witness: Option<Vector>,
    pub note: String,
}

impl EmbeddingVerdict {
    pub fn label(&self) -> String {
        match self.status {
            EmbeddingStatus::NoCollapse => format!("no-collapse-up-to-{}", self.degree),
            EmbeddingStatus::Collapse => "collapse-with-witness".to_string(),
        }
    }
}

/// Tests whether generators `x_0 .. x_{base-1}` stay linearly independent modulo `J_N`.
pub fn embedding_check_presentation(
    p: &Presentation,
    base: usize,
    degree: usize,
) -> Result<(EmbeddingVerdict, TruncatedQuotient)> {
    let q = build_truncated_quotient(p, degree)?;
    let verdict = generator_independence(&q, base);
    Ok((verdict, q))
}

fn generator_independence(q: &TruncatedQuotient, base: usize) -> EmbeddingVerdict {
    let f = q.field;
    // Coordinates of each normal form over the degree-1 columns (normal forms of letters stay in degree 1).
    let mut columns: Vec<Vector> = Vec::with_capacity(base);
    for g in 0..base {
        let nf = q
            .normal_form(&FreeElement::generator(f, g))
            .expect("letter within bound");
        let mut col = zero_vector(f, q.index.generators);
        for (m, c) in nf.terms() {
            col[m.word()[0]] = c.clone();
        }
        columns.push(col);
    }
    let m = Matrix::from_columns(f, q.index.generators, &columns).expect("shape");
    let kernel = null_space(&m);
    let dims = q.quotient_dims_per_degree();
    let n = q.degree();
    match kernel.basis().first() {
        None => EmbeddingVerdict {
            status: EmbeddingStatus::NoCollapse,
            degree: n,
            quotient_dims_per_degree: dims,
            ideal_dim: q.ideal_dim(),
            witness: None,
            note: format!(
                "base generators independent modulo the degree-{n} truncation of the relator ideal; \
                 a passed falsification test, not a proof of embedding"
            ),
        },
        Some(w) => EmbeddingVerdict {
            status: EmbeddingStatus::Collapse,
            degree: n,
            quotient_dims_per_degree: dims,
            ideal_dim: q.ideal_dim(),
            witness: Some(w.clone()),
            note: "a nonzero combination of base generators lies in the truncated relator ideal, \
                   which is contained in the full ideal: the base does not embed"
                .to_string(),
        },
    }
}

/// Truncated embedding test of the base algebra into the HNN-extension.
pub fn embedding_check(h: &HnnExtension, degree: usize) -> Result<EmbeddingVerdict> {
    Ok(embedding_check_presentation(&h.presentation, h.base.dim(), degree)?.0)
}

/// A finite-dimensional algebra satisfying the HNN relators, with the base
/// included in the first `n` coordinates and `t` as the last basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactModel {
    pub algebra: StructureAlgebra,
    pub embedding: Matrix,
    pub stable: Element,
    /// The full map `L → L` whose restriction to `A` is the HNN map.
    pub extended_map: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelOutcome {
    Model(Box<ExactModel>),
    /// `A = 0`: the extension is a free product and no model is built.
    FreeProduct,
    /// The map does not extend to the whole algebra.
    NoExtension,
    /// The one-dimensional extension violates the Leibniz identity.
    Rejected(LeibnizReport),
}

/// Builds `L ⋊ ⟨t⟩` when the map extends to a full map `D` on `L`.
///
/// Derivations try `[a, t] = D a` with `[t, a] = 0`, then `[t, a] = -D a`;
/// anti-derivations try `[t, a] = D a` with `[a, t] = 0`, then `[a, t] = -D a`.
/// Each candidate is verified against the Leibniz identity before use.
pub fn exact_model_check(h: &HnnExtension) -> ModelOutcome {
    let a = &h.base;
    let f = a.field();
    let n = a.dim();
    if h.map.domain.is_zero() {
        return ModelOutcome::FreeProduct;
    }
    let Some(full) = extend_to_algebra(a, &h.map, h.kind) else {
        return ModelOutcome::NoExtension;
    };
    let zero = Matrix::zeros(f, n, n);
    let neg = full.scaled(&f.from_i64(-1));
    let candidates = match h.kind {
        MapKind::Derivation => vec![
            (full.clone(), zero),
            (full.clone(), full.clone()),
            (full.clone(), full.mul(&off_kernel(a)).expect("square")),
        ],
        MapKind::AntiDerivation => vec![(zero, neg.clone()), (neg.clone(), neg)],
    };
    let mut last = None;
    for (d, dm) in &candidates {
        match a.one_dim_extension(d, dm) {
            Ok(algebra) => {
                let mut embedding = Matrix::zeros(f, n + 1, n);
                for i in 0..n {
                    embedding.set(i, i, f.one());
                }
                return ModelOutcome::Model(Box::new(ExactModel {
                    algebra,
                    embedding,
                    stable: crate::linalg::unit_vector(f, n + 1, n),
                    extended_map: full,
                }));
            }
            Err(report) => last = Some(report),
        }
    }
    ModelOutcome::Rejected(last.expect("at least one candidate"))
}

/// Projection with kernel `span{[x, x]}`, along the coordinate complement.
/// Left multiplication by anything kills that span.
fn off_kernel(a: &StructureAlgebra) -> Matrix {
    let n = a.dim();
    let mut squares = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut v = a.basis_bracket(i, j).to_vec();
            if i != j {
                v = crate::linalg::add_vectors(&v, a.basis_bracket(j, i));
            }
            squares.push(v);
        }
    }
    let kernel = crate::linalg::Subspace::span(a.field(), n, squares);
    let mut p = Matrix::identity(a.field(), n);
    for b in kernel.basis() {
        let pivot = b.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
        for (r, x) in b.iter().enumerate() {
            let v = p.get(r, pivot) - x;
            p.set(r, pivot, v);
        }
    }
    p
}

impl ExactModel {
    /// Homomorphism, injectivity and every HNN relator, checked exactly.
    pub fn verify(&self, h: &HnnExtension) -> bool {
        let n = h.base.dim();
        if !h.base.is_homomorphism_into(&self.algebra, &self.embedding) {
            return false;
        }
        if self.embedding.rank() != n {
            return false;
        }
        h.map.domain.basis().iter().zip(&h.map.images).all(|(b, img)| {
            let eb = self.embedding.mul_vec(b).expect("shape");
            let lhs = match h.kind {
                MapKind::Derivation => self.algebra.bracket_unchecked(&eb, &self.stable),
                MapKind::AntiDerivation => self.algebra.bracket_unchecked(&self.stable, &eb),
            };
            lhs == self.embedding.mul_vec(img).expect("shape")
        })
    }
}
