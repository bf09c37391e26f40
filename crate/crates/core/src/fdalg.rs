//! Finite-dimensional right Leibniz algebras given by structure constants.
//!
//! `[e_i, e_j] = Σ_k c(i, j, k) e_k`. Elements are plain coordinate vectors in
//! the basis `e_0 .. e_{n-1}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    add_vectors, axpy, is_zero_vector, sub_vectors, unit_vector, zero_vector, Matrix, Subspace,
    Vector,
};
use crate::scalar::{Field, Scalar};

/// Coordinates of an algebra element.
pub type Element = Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    field: Field,
    dim: usize,
    constants: Vec<Scalar>,
    verified: bool,
}

/// A basis triple `(x, y, z)` on which `[[x,y],z] = [[x,z],y] + [x,[y,z]]` fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub triple: (usize, usize, usize),
    #[serde(serialize_with = "crate::io::ser_vector")]
    pub lhs: Vector,
    #[serde(serialize_with = "crate::io::ser_vector")]
    pub rhs: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeibnizReport {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedSeriesResult {
    /// `L^[1] ⊇ L^[2] ⊇ …`, ending at the first repeated (or zero) term.
    pub terms: Vec<Subspace>,
    pub solvable: bool,
    /// 1-based index of the term at which the series stabilizes.
    pub stabilization_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityReport {
    /// Verdict under the literal definition: every ideal is `0`, `[L,L]` or `L`.
    pub simple: bool,
    /// True when the ideal enumeration was exhaustive (finite fields).
    pub complete: bool,
    pub derived: Subspace,
    /// Distinct ideals found as closures of enumerated lines.
    pub ideals: Vec<Subspace>,
    pub witness: Option<Subspace>,
    pub warnings: Vec<String>,
}

impl StructureAlgebra {
    /// Builds an algebra from the flat constant table indexed by `(i*n + j)*n + k`
    /// and records whether the Leibniz identity holds.
    pub fn new(field: Field, dim: usize, constants: Vec<Scalar>) -> Result<StructureAlgebra> {
        if constants.len() != dim * dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim * dim,
                found: constants.len(),
            });
        }
        if let Some(bad) = constants.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(format!("constant {bad} is not in {field}")));
        }
        let mut a = StructureAlgebra {
            field,
            dim,
            constants,
            verified: false,
        };
        a.verified = a.verify_leibniz().holds;
        Ok(a)
    }

    /// Builds from sparse bracket entries `(i, j, [(k, c)])`; missing pairs bracket to zero.
    pub fn from_brackets(
        field: Field,
        dim: usize,
        entries: &[(usize, usize, Vec<(usize, Scalar)>)],
    ) -> Result<StructureAlgebra> {
        let mut constants = vec![field.zero(); dim * dim * dim];
        for (i, j, out) in entries {
            for (k, c) in out {
                if *i >= dim || *j >= dim || *k >= dim {
                    return Err(Error::Usage(format!(
                        "bracket index ({i},{j})->{k} out of range for dim {dim}"
                    )));
                }
                let slot = &mut constants[(i * dim + j) * dim + k];
                *slot = &*slot + c;
            }
        }
        StructureAlgebra::new(field, dim, constants)
    }

    pub fn abelian(field: Field, dim: usize) -> StructureAlgebra {
        StructureAlgebra::new(field, dim, vec![field.zero(); dim * dim * dim]).expect("sizes")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            let v = &self.verify_leibniz().violations[0];
            Err(Error::Rejected(format!(
                "Leibniz identity fails on basis triple {:?}",
                v.triple
            )))
        }
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Copy with one structure constant replaced (re-verified).
    pub fn with_constant(&self, i: usize, j: usize, k: usize, value: Scalar) -> StructureAlgebra {
        let mut constants = self.constants.clone();
        constants[(i * self.dim + j) * self.dim + k] = value;
        StructureAlgebra::new(self.field, self.dim, constants).expect("same shape")
    }

    /// `[e_i, e_j]` as a coordinate slice.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        let start = (i * self.dim + j) * self.dim;
        &self.constants[start..start + self.dim]
    }

    pub fn zero_element(&self) -> Element {
        zero_vector(self.field, self.dim)
    }

    pub fn basis_element(&self, i: usize) -> Element {
        unit_vector(self.field, self.dim, i)
    }

    fn check_element(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Element> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Element {
        let mut out = self.zero_element();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xi * yj), self.basis_bracket(i, j));
            }
        }
        out
    }

    /// Matrix of `x ↦ [z, x]`.
    pub fn left_multiplication(&self, z: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.bracket_unchecked(z, &self.basis_element(j)))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    /// Matrix of `x ↦ [x, z]`.
    pub fn right_multiplication(&self, z: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.bracket_unchecked(&self.basis_element(j), z))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    /// Checks the identity on all n³ basis triples, which suffices by trilinearity.
    pub fn verify_leibniz(&self) -> LeibnizReport {
        let mut violations = Vec::new();
        let n = self.dim;
        for x in 0..n {
            for y in 0..n {
                let xy = self.basis_bracket(x, y).to_vec();
                for z in 0..n {
                    let ez = self.basis_element(z);
                    let lhs = self.bracket_unchecked(&xy, &ez);
                    let xz = self.basis_bracket(x, z).to_vec();
                    let yz = self.basis_bracket(y, z).to_vec();
                    let rhs = add_vectors(
                        &self.bracket_unchecked(&xz, &self.basis_element(y)),
                        &self.bracket_unchecked(&self.basis_element(x), &yz),
                    );
                    if lhs != rhs {
                        violations.push(Violation {
                            triple: (x, y, z),
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        LeibnizReport {
            holds: violations.is_empty(),
            violations,
        }
    }

    /// Span of all `[u, v]` with `u ∈ left`, `v ∈ right`.
    pub fn product_space(&self, left: &Subspace, right: &Subspace) -> Subspace {
        let mut gens = Vec::new();
        for u in left.basis() {
            for v in right.basis() {
                gens.push(self.bracket_unchecked(u, v));
            }
        }
        Subspace::span(self.field, self.dim, gens)
    }

    /// Smallest bracket-closed subspace containing `gens`.
    pub fn subalgebra_generated(&self, gens: &[Element]) -> Result<Subspace> {
        for g in gens {
            self.check_element(g)?;
        }
        let mut current = Subspace::span(self.field, self.dim, gens.to_vec());
        loop {
            let next = current
                .sum(&self.product_space(&current, &current))
                .expect("same ambient");
            if next.dim() == current.dim() {
                return Ok(current);
            }
            current = next;
        }
    }

    /// Least two-sided ideal containing `gens`.
    pub fn ideal_closure(&self, gens: &[Element]) -> Result<Subspace> {
        for g in gens {
            self.check_element(g)?;
        }
        let full = Subspace::full(self.field, self.dim);
        let mut current = Subspace::span(self.field, self.dim, gens.to_vec());
        loop {
            let next = current
                .sum(&self.product_space(&current, &full))
                .and_then(|s| s.sum(&self.product_space(&full, &current)))
                .expect("same ambient");
            if next.dim() == current.dim() {
                return Ok(current);
            }
            current = next;
        }
    }

    pub fn is_subalgebra(&self, v: &Subspace) -> bool {
        self.product_space(v, v).is_subspace_of(v)
    }

    /// `[L, V] ⊆ V`
    pub fn is_left_ideal(&self, v: &Subspace) -> bool {
        let full = Subspace::full(self.field, self.dim);
        self.product_space(&full, v).is_subspace_of(v)
    }

    /// `[V, L] ⊆ V`
    pub fn is_right_ideal(&self, v: &Subspace) -> bool {
        let full = Subspace::full(self.field, self.dim);
        self.product_space(v, &full).is_subspace_of(v)
    }

    pub fn is_ideal(&self, v: &Subspace) -> bool {
        self.is_left_ideal(v) && self.is_right_ideal(v)
    }

    pub fn derived_algebra(&self) -> Subspace {
        let full = Subspace::full(self.field, self.dim);
        self.product_space(&full, &full)
    }

    pub fn derived_series(&self) -> DerivedSeriesResult {
        let mut terms = vec![Subspace::full(self.field, self.dim)];
        loop {
            let last = terms.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = self.product_space(last, last);
            if next == *last {
                break;
            }
            terms.push(next);
        }
        let solvable = terms.last().expect("nonempty").is_zero();
        DerivedSeriesResult {
            stabilization_index: terms.len(),
            terms,
            solvable,
        }
    }

    /// Simplicity in the literal sense: the only ideals are `0`, `[L,L]`, `L`.
    ///
    /// Over GF(p) every line is enumerated, which is complete because a nonzero
    /// ideal other than `[L,L]` always contains a line whose closure is another
    /// such ideal. Over ℚ only lines with coordinates in {-1, 0, 1} are tried.
    pub fn is_simple(&self) -> SimplicityReport {
        let derived = self.derived_algebra();
        let full = Subspace::full(self.field, self.dim);
        let zero = Subspace::zero(self.field, self.dim);
        let (lines, complete) = enumerate_lines(self.field, self.dim);
        let mut ideals: Vec<Subspace> = Vec::new();
        for line in lines {
            let closure = self.ideal_closure(&[line]).expect("dimension");
            if !ideals.contains(&closure) {
                ideals.push(closure);
            }
        }
        let witness = ideals
            .iter()
            .find(|i| **i != zero && **i != derived && **i != full)
            .cloned();
        let mut warnings = Vec::new();
        if !complete {
            warnings.push(
                "ideal search over Q is restricted to {-1,0,1} lines: no counterexample found is not a proof"
                    .to_string(),
            );
        }
        if derived.is_zero() {
            warnings.push("degenerate: [L,L] = 0".to_string());
        }
        if self.dim <= 1 {
            warnings.push("degenerate: dimension at most 1".to_string());
        }
        if witness.is_none() && self.dim > 0 && self.derived_series().solvable {
            warnings.push("simple by the literal definition although the algebra is solvable".to_string());
        }
        SimplicityReport {
            simple: witness.is_none(),
            complete,
            derived,
            ideals,
            witness,
            warnings,
        }
    }

    /// `self × other`: componentwise bracket on the direct sum.
    pub fn direct_product(&self, other: &StructureAlgebra) -> Result<StructureAlgebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        let (n, m) = (self.dim, other.dim);
        let total = n + m;
        let mut constants = vec![self.field.zero(); total * total * total];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    constants[(i * total + j) * total + k] = self.constant(i, j, k).clone();
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    constants[((n + i) * total + n + j) * total + n + k] =
                        other.constant(i, j, k).clone();
                }
            }
        }
        StructureAlgebra::new(self.field, total, constants)
    }

    /// Adjoins a basis vector `t` with `[a, t] = d(a)`, `[t, a] = -dm(a)`,
    /// `[t, t] = 0`, then verifies the Leibniz identity.
    ///
    /// `d` and `dm` act on coordinate columns. On failure the violation report
    /// is returned instead of the algebra.
    pub fn one_dim_extension(
        &self,
        d: &Matrix,
        dm: &Matrix,
    ) -> Result<StructureAlgebra, LeibnizReport> {
        let n = self.dim;
        assert_eq!((d.rows(), d.cols()), (n, n), "d must be n×n");
        assert_eq!((dm.rows(), dm.cols()), (n, n), "Dm must be n×n");
        let total = n + 1;
        let mut constants = vec![self.field.zero(); total * total * total];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    constants[(i * total + j) * total + k] = self.constant(i, j, k).clone();
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                constants[(i * total + n) * total + k] = d.get(k, i).clone();
                constants[(n * total + i) * total + k] = -dm.get(k, i);
            }
        }
        let ext = StructureAlgebra::new(self.field, total, constants).expect("shape");
        if ext.verified {
            Ok(ext)
        } else {
            Err(ext.verify_leibniz())
        }
    }

    /// Structure constants of a subalgebra in its canonical basis.
    pub fn subalgebra_structure(&self, sub: &Subspace) -> Result<StructureAlgebra> {
        if !self.is_subalgebra(sub) {
            return Err(Error::Rejected("subspace is not closed under the bracket".into()));
        }
        let k = sub.dim();
        let mut constants = Vec::with_capacity(k * k * k);
        for u in sub.basis() {
            for v in sub.basis() {
                let w = self.bracket_unchecked(u, v);
                constants.extend(sub.coordinates(&w).expect("closed"));
            }
        }
        StructureAlgebra::new(self.field, k, constants)
    }

    /// The same constants read in another field (ℚ → GF(p) reduces).
    pub fn over_field(&self, field: Field) -> Result<StructureAlgebra> {
        let constants = self
            .constants
            .iter()
            .map(|c| field.convert(c))
            .collect::<Result<Vec<_>>>()?;
        StructureAlgebra::new(field, self.dim, constants)
    }

    /// Whether `m` (columns = images of this algebra's basis inside `target`)
    /// is a bracket-preserving linear map.
    pub fn is_homomorphism_into(&self, target: &StructureAlgebra, m: &Matrix) -> bool {
        if m.rows() != target.dim || m.cols() != self.dim {
            return false;
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = m.mul_vec(self.basis_bracket(i, j)).expect("shape");
                let rhs = target.bracket_unchecked(&m.column(i), &m.column(j));
                if !is_zero_vector(&sub_vectors(&lhs, &rhs)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Representatives of all lines through the origin: over GF(p) every
/// projective point, over ℚ those with entries in {-1, 0, 1}. The flag is
/// true when the list is exhaustive.
fn enumerate_lines(field: Field, n: usize) -> (Vec<Vector>, bool) {
    let (values, complete): (Vec<Scalar>, bool) = match field.elements() {
        Some(all) => (all, true),
        None => (vec![field.zero(), field.one(), field.from_i64(-1)], false),
    };
    let base = values.len();
    let mut lines = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        let count = base.pow(tail as u32);
        for mut code in 0..count {
            let mut v = zero_vector(field, n);
            v[lead] = field.one();
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = values[code % base].clone();
                code /= base;
            }
            lines.push(v);
        }
    }
    (lines, complete)
}
