//! The free right Leibniz algebra on generators `x1 .. xk`.
//!
//! Every element is written in the basis of left-normed words: the word
//! `(x_{i1} … x_{ik})` stands for `[[…[x_{i1}, x_{i2}], …], x_{ik}]`.
//! Brackets are normalised with `[u, [v, w]] = [[u, v], w] - [[u, w], v]`,
//! recursing on the right argument until it is a single letter.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fdalg::{Element, StructureAlgebra};
use crate::linalg::axpy;
use crate::scalar::{Field, Scalar};

/// Default degree cap for expression evaluation.
pub const DEFAULT_DEGREE_CAP: usize = 6;

/// A nonempty word of 0-based generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn new(word: Vec<usize>) -> Monomial {
        assert!(!word.is_empty(), "monomials are nonempty");
        Monomial(word)
    }

    pub fn letter(g: usize) -> Monomial {
        Monomial(vec![g])
    }

    pub fn word(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

/// Degree first, then lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.0.iter().map(|g| format!("x{}", g + 1)).collect();
        write!(f, "({})", letters.join(" "))
    }
}

/// Finite linear combination of left-normed words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl FreeElement {
    pub fn zero(field: Field) -> FreeElement {
        FreeElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(field: Field, g: usize) -> FreeElement {
        FreeElement::monomial(field, Monomial::letter(g), field.one())
    }

    pub fn monomial(field: Field, m: Monomial, c: Scalar) -> FreeElement {
        let mut e = FreeElement::zero(field);
        e.add_term(m, &c);
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest word length present (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .map(|g| g + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &FreeElement) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), &(c * x));
        }
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out.add_scaled(&self.field.one(), other);
        out
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out.add_scaled(&self.field.from_i64(-1), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> FreeElement {
        let mut out = FreeElement::zero(self.field);
        out.add_scaled(c, self);
        out
    }

    /// Drops every word longer than `degree`.
    pub fn truncate(&self, degree: usize) -> FreeElement {
        FreeElement {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The Leibniz bracket, in normal form.
    pub fn bracket(&self, other: &FreeElement) -> FreeElement {
        let mut out = FreeElement::zero(self.field);
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                out.add_scaled(&(cu * cv), &bracket_words(self.field, u.word(), v.word()));
            }
        }
        out
    }

    /// Image under the homomorphism extending `x_g ↦ assignment[g]`.
    pub fn evaluate(&self, target: &StructureAlgebra, assignment: &[Element]) -> Result<Element> {
        let mut out = target.zero_element();
        for (m, c) in &self.terms {
            let mut acc = assignment
                .get(m.0[0])
                .ok_or_else(|| Error::Usage(format!("no value assigned to x{}", m.0[0] + 1)))?
                .clone();
            for &g in &m.0[1..] {
                let y = assignment
                    .get(g)
                    .ok_or_else(|| Error::Usage(format!("no value assigned to x{}", g + 1)))?;
                acc = target.bracket(&acc, y)?;
            }
            axpy(&mut out, c, &acc);
        }
        Ok(out)
    }
}

/// `[u, v]` for left-normed words `u`, `v`, expanded into left-normed words.
pub fn bracket_words(field: Field, u: &[usize], v: &[usize]) -> FreeElement {
    let mut out = FreeElement::zero(field);
    accumulate_bracket(&mut out, &field.one(), u, v);
    out
}

fn accumulate_bracket(out: &mut FreeElement, coef: &Scalar, u: &[usize], v: &[usize]) {
    match v.split_last() {
        None => panic!("empty word"),
        Some((&last, [])) => {
            let mut w = u.to_vec();
            w.push(last);
            out.add_term(Monomial(w), coef);
        }
        Some((&last, prefix)) => {
            // [u, [v', l]] = [[u, v'], l] - [[u, l], v']
            let inner = bracket_words(out.field, u, prefix);
            for (m, c) in inner.terms {
                let mut w = m.0;
                w.push(last);
                out.add_term(Monomial(w), &(coef * &c));
            }
            let mut ul = u.to_vec();
            ul.push(last);
            accumulate_bracket(out, &-coef, &ul, prefix);
        }
    }
}

/// All `k^n` words of length `n` in lexicographic order.
pub fn graded_basis(generators: usize, degree: usize) -> Vec<Monomial> {
    assert!(degree >= 1, "degree must be at least 1");
    let count = generators.pow(degree as u32);
    (0..count)
        .map(|mut code| {
            let mut w = vec![0; degree];
            for slot in w.iter_mut().rev() {
                *slot = code % generators;
                code /= generators;
            }
            Monomial(w)
        })
        .collect()
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter().map(|(m, c)| (m.to_string(), c)))
    }
}

/// Shared `c*(word) + …` rendering for free and dialgebra elements.
pub(crate) fn write_combination<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a Scalar)>,
) -> fmt::Result {
    let mut first = true;
    for (word, c) in terms {
        let (negative, magnitude) = if c.is_negative() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if magnitude.is_one() {
            write!(f, "{word}")?;
        } else {
            write!(f, "{magnitude}*{word}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
