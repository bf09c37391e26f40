//! Free dialgebras in the center-marked-word normal form.
//!
//! A monomial is a word with one distinguished position. `u ⊣ v` concatenates
//! and keeps `u`'s center; `u ⊢ v` concatenates and moves the center to `v`'s.
//! With these rules both products are associative and the three interchange
//! laws hold on the nose; [`axioms_check`] confirms it on samples.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::free::{write_combination, FreeElement};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DialgMonomial {
    word: Vec<usize>,
    center: usize,
}

impl DialgMonomial {
    pub fn new(word: Vec<usize>, center: usize) -> DialgMonomial {
        assert!(center < word.len(), "center must index into the word");
        DialgMonomial { word, center }
    }

    pub fn letter(g: usize) -> DialgMonomial {
        DialgMonomial::new(vec![g], 0)
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    fn concat(&self, other: &DialgMonomial, center: usize) -> DialgMonomial {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        DialgMonomial { word, center }
    }
}

/// `u ⊣ v`
pub fn mono_left(u: &DialgMonomial, v: &DialgMonomial) -> DialgMonomial {
    u.concat(v, u.center)
}

/// `u ⊢ v`
pub fn mono_right(u: &DialgMonomial, v: &DialgMonomial) -> DialgMonomial {
    u.concat(v, u.len() + v.center)
}

impl fmt::Display for DialgMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.word.iter().map(|g| format!("x{}", g + 1)).collect();
        write!(f, "({}, c={})", letters.join(" "), self.center)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DialgElement {
    field: Field,
    terms: BTreeMap<DialgMonomial, Scalar>,
}

impl DialgElement {
    pub fn zero(field: Field) -> DialgElement {
        DialgElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: Field, m: DialgMonomial, c: Scalar) -> DialgElement {
        let mut e = DialgElement::zero(field);
        e.add_term(m, &c);
        e
    }

    pub fn generator(field: Field, g: usize) -> DialgElement {
        DialgElement::monomial(field, DialgMonomial::letter(g), field.one())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DialgMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: DialgMonomial, c: &Scalar) {
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

    pub fn add_scaled(&mut self, c: &Scalar, other: &DialgElement) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), &(c * x));
        }
    }

    pub fn add(&self, other: &DialgElement) -> DialgElement {
        let mut out = self.clone();
        out.add_scaled(&self.field.one(), other);
        out
    }

    pub fn sub(&self, other: &DialgElement) -> DialgElement {
        let mut out = self.clone();
        out.add_scaled(&self.field.from_i64(-1), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> DialgElement {
        let mut out = DialgElement::zero(self.field);
        out.add_scaled(c, self);
        out
    }

    fn product(
        &self,
        other: &DialgElement,
        op: fn(&DialgMonomial, &DialgMonomial) -> DialgMonomial,
    ) -> DialgElement {
        let mut out = DialgElement::zero(self.field);
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                out.add_term(op(u, v), &(cu * cv));
            }
        }
        out
    }
}

impl fmt::Display for DialgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter().map(|(m, c)| (m.to_string(), c)))
    }
}

/// `u ⊣ v`
pub fn dprod_left(u: &DialgElement, v: &DialgElement) -> DialgElement {
    u.product(v, mono_left)
}

/// `u ⊢ v`
pub fn dprod_right(u: &DialgElement, v: &DialgElement) -> DialgElement {
    u.product(v, mono_right)
}

/// `[u, v] = u ⊣ v - v ⊢ u`
pub fn dialg_bracket(u: &DialgElement, v: &DialgElement) -> DialgElement {
    dprod_left(u, v).sub(&dprod_right(v, u))
}

/// Image of a left-normed word under `x ↦ x`, brackets expanded in the dialgebra.
pub fn word_to_dialgebra(field: Field, word: &[usize]) -> DialgElement {
    let mut acc = DialgElement::generator(field, word[0]);
    for &g in &word[1..] {
        acc = dialg_bracket(&acc, &DialgElement::generator(field, g));
    }
    acc
}

pub fn leibniz_to_dialgebra(e: &FreeElement) -> DialgElement {
    let mut out = DialgElement::zero(e.field());
    for (m, c) in e.terms() {
        out.add_scaled(c, &word_to_dialgebra(e.field(), m.word()));
    }
    out
}

/// Rewrites Leibniz relators into the free dialgebra via `[x,y] = x⊣y - y⊢x`.
pub fn transfer_presentation(relators: &[FreeElement]) -> Vec<DialgElement> {
    relators.iter().map(leibniz_to_dialgebra).collect()
}

pub type MonoOp = dyn Fn(&DialgMonomial, &DialgMonomial) -> DialgMonomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DialgebraAxiom {
    /// `(x⊣y)⊣z = x⊣(y⊣z)`
    LeftAssociative,
    /// `(x⊢y)⊢z = x⊢(y⊢z)`
    RightAssociative,
    /// `(x⊣y)⊣z = x⊣(y⊢z)`
    LeftAbsorbsRight,
    /// `(x⊢y)⊣z = x⊢(y⊣z)`
    Interchange,
    /// `(x⊣y)⊢z = (x⊢y)⊢z`
    RightAbsorbsLeft,
}

pub const AXIOMS: [DialgebraAxiom; 5] = [
    DialgebraAxiom::LeftAssociative,
    DialgebraAxiom::RightAssociative,
    DialgebraAxiom::LeftAbsorbsRight,
    DialgebraAxiom::Interchange,
    DialgebraAxiom::RightAbsorbsLeft,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: DialgebraAxiom,
    pub triple: [String; 3],
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checked: usize,
    pub holds: bool,
    pub failures: Vec<AxiomFailure>,
}

/// Checks the five axioms for the normal-form products on the given
/// monomial triples (enough by trilinearity).
pub fn axioms_check(samples: &[[DialgMonomial; 3]]) -> AxiomReport {
    axioms_check_with(&mono_left, &mono_right, samples)
}

/// [`axioms_check`] for arbitrary monomial products.
pub fn axioms_check_with(left: &MonoOp, right: &MonoOp, samples: &[[DialgMonomial; 3]]) -> AxiomReport {
    let mut failures = Vec::new();
    for [x, y, z] in samples {
        for axiom in AXIOMS {
            let (lhs, rhs) = match axiom {
                DialgebraAxiom::LeftAssociative => (left(&left(x, y), z), left(x, &left(y, z))),
                DialgebraAxiom::RightAssociative => {
                    (right(&right(x, y), z), right(x, &right(y, z)))
                }
                DialgebraAxiom::LeftAbsorbsRight => (left(&left(x, y), z), left(x, &right(y, z))),
                DialgebraAxiom::Interchange => (left(&right(x, y), z), right(x, &left(y, z))),
                DialgebraAxiom::RightAbsorbsLeft => {
                    (right(&left(x, y), z), right(&right(x, y), z))
                }
            };
            if lhs != rhs {
                failures.push(AxiomFailure {
                    axiom,
                    triple: [x.to_string(), y.to_string(), z.to_string()],
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
    }
    AxiomReport {
        checked: samples.len(),
        holds: failures.is_empty(),
        failures,
    }
}

/// Every monomial (all words, all centers) of length `1..=max_len`.
pub fn all_monomials(generators: usize, max_len: usize) -> Vec<DialgMonomial> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for m in crate::free::graded_basis(generators, len) {
            for center in 0..len {
                out.push(DialgMonomial::new(m.word().to_vec(), center));
            }
        }
    }
    out
}

/// Every triple of monomials whose lengths sum to at most `max_total`.
pub fn all_triples(generators: usize, max_total: usize) -> Vec<[DialgMonomial; 3]> {
    let by_len: Vec<Vec<DialgMonomial>> = (0..=max_total)
        .map(|len| {
            if len == 0 {
                Vec::new()
            } else {
                all_monomials(generators, len)
                    .into_iter()
                    .filter(|m| m.len() == len)
                    .collect()
            }
        })
        .collect();
    let mut out = Vec::new();
    for a in 1..=max_total {
        for b in 1..=max_total.saturating_sub(a + 1) {
            for c in 1..=max_total.saturating_sub(a + b) {
                for x in &by_len[a] {
                    for y in &by_len[b] {
                        for z in &by_len[c] {
                            out.push([x.clone(), y.clone(), z.clone()]);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn random_monomial<R: Rng>(rng: &mut R, generators: usize, max_len: usize) -> DialgMonomial {
    let len = rng.gen_range(1..=max_len);
    let word = (0..len).map(|_| rng.gen_range(0..generators)).collect();
    DialgMonomial::new(word, rng.gen_range(0..len))
}

/// Rank of the map sending degree-`degree` left-normed Leibniz words over
/// `generators` letters to their dialgebra expansions, and the number of words.
pub fn leibniz_embedding_rank(field: Field, generators: usize, degree: usize) -> (usize, usize) {
    let words = crate::free::graded_basis(generators, degree);
    let images: Vec<DialgElement> = words
        .iter()
        .map(|w| word_to_dialgebra(field, w.word()))
        .collect();
    let mut columns: BTreeMap<DialgMonomial, usize> = BTreeMap::new();
    for img in &images {
        for (m, _) in img.terms() {
            let next = columns.len();
            columns.entry(m.clone()).or_insert(next);
        }
    }
    let rows: Vec<Vector> = images
        .iter()
        .map(|img| {
            let mut row = vec![field.zero(); columns.len()];
            for (m, c) in img.terms() {
                row[columns[m]] = c.clone();
            }
            row
        })
        .collect();
    let m = Matrix::from_rows(field, columns.len(), rows).expect("uniform rows");
    (m.rank(), words.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn dm(word: &[usize], c: usize) -> DialgMonomial {
        DialgMonomial::new(word.to_vec(), c)
    }

    fn de(word: &[usize], c: usize) -> DialgElement {
        DialgElement::monomial(q(), dm(word, c), q().one())
    }

    #[test]
    fn left_product() {
        assert_eq!(mono_left(&dm(&[0], 0), &dm(&[1], 0)), dm(&[0, 1], 0));
        assert_eq!(mono_left(&dm(&[0, 1], 1), &dm(&[2], 0)), dm(&[0, 1, 2], 1));
        let (x, y, z) = (de(&[0], 0), de(&[1], 0), de(&[2], 0));
        let a = dprod_left(&x, &dprod_right(&y, &z));
        let b = dprod_left(&dprod_left(&x, &y), &z);
        assert_eq!(a, b);
        assert_eq!(a, de(&[0, 1, 2], 0));
    }

    #[test]
    fn right_product() {
        let (x, y, z) = (de(&[0], 0), de(&[1], 0), de(&[2], 0));
        assert_eq!(dprod_right(&x, &y), de(&[0, 1], 1));
        assert_eq!(dprod_left(&dprod_right(&x, &y), &z), de(&[0, 1, 2], 1));
        let a = dprod_right(&dprod_left(&x, &y), &z);
        let b = dprod_right(&dprod_right(&x, &y), &z);
        assert_eq!(a, b);
        assert_eq!(a, de(&[0, 1, 2], 2));
    }

    #[test]
    fn axioms_on_letters_and_single_generator() {
        let letters = vec![[dm(&[0], 0), dm(&[1], 0), dm(&[2], 0)]];
        assert!(axioms_check(&letters).holds);
        assert!(axioms_check(&all_triples(1, 5)).holds);
    }

    #[test]
    fn mutated_right_product_is_caught() {
        let bad = |u: &DialgMonomial, v: &DialgMonomial| {
            let mut w = u.word().to_vec();
            w.extend_from_slice(v.word());
            DialgMonomial::new(w, u.len() + v.center() - 1)
        };
        let report = axioms_check_with(&mono_left, &bad, &all_triples(2, 4));
        assert!(!report.holds);
        assert!(report
            .failures
            .iter()
            .any(|f| f.axiom == DialgebraAxiom::RightAssociative));
    }

    #[test]
    fn bracket_is_not_antisymmetric() {
        let x = DialgElement::generator(q(), 0);
        let xx = dialg_bracket(&x, &x);
        assert_eq!(xx, de(&[0, 0], 0).sub(&de(&[0, 0], 1)));
        assert!(dialg_bracket(&x, &DialgElement::zero(q())).is_zero());
    }

    #[test]
    fn relator_transfer() {
        use crate::free::{FreeElement, Monomial};
        let x12 = FreeElement::monomial(q(), Monomial::new(vec![0, 1]), q().one());
        let t = transfer_presentation(&[x12]);
        assert_eq!(t, vec![de(&[0, 1], 0).sub(&de(&[1, 0], 1))]);
        let r = FreeElement::monomial(q(), Monomial::new(vec![0, 0]), q().one())
            .sub(&FreeElement::generator(q(), 1));
        let t = transfer_presentation(&[r]);
        assert_eq!(t[0], de(&[0, 0], 0).sub(&de(&[0, 0], 1)).sub(&de(&[1], 0)));
        assert!(transfer_presentation(&[]).is_empty());
    }

    #[test]
    fn triple_enumeration_respects_total_length() {
        let t = all_triples(2, 4);
        assert!(t.iter().all(|[a, b, c]| a.len() + b.len() + c.len() <= 4));
        // lengths (1,1,1): 2^3 triples; (2,1,1) and permutations: 3 * (2*4)*2*2.
        assert_eq!(t.len(), 8 + 3 * 8 * 4);
    }
}
