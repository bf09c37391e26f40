//! Derivations, anti-derivations and biderivations as solution spaces of
//! linear systems, plus the biderivation bracket and maps defined on
//! subalgebras.
//!
//! A linear map on an `n`-dimensional algebra is an `n×n` [`Matrix`] whose
//! column `j` is the image of `e_j`. Spaces of maps are returned as
//! [`Subspace`]s of the row-major flattening (`n²` coordinates; `2n²` for
//! pairs `(d, D)`, `d` first).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdalg::{Element, StructureAlgebra};
use crate::linalg::{
    is_zero_vector, null_space, solve_with_certificate, sub_vectors, zero_vector, Matrix,
    Subspace, Vector,
};
use crate::scalar::{Field, Scalar};

pub type LinearMap = Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// `d[x,y] = [dx,y] + [x,dy]`
    Derivation,
    /// `d[x,y] = [dx,y] - [dy,x]`
    AntiDerivation,
}

impl std::str::FromStr for MapKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<MapKind> {
        match s {
            "derivation" | "der" => Ok(MapKind::Derivation),
            "anti" | "anti-derivation" | "antiderivation" => Ok(MapKind::AntiDerivation),
            _ => Err(Error::Usage(format!("unknown map kind `{s}`"))),
        }
    }
}

pub fn flatten(m: &Matrix) -> Vector {
    m.to_rows().into_iter().flatten().collect()
}

pub fn unflatten(field: Field, n: usize, flat: &[Scalar]) -> Matrix {
    Matrix::from_rows(field, n, flat.chunks(n).map(<[Scalar]>::to_vec).collect())
        .expect("n×n entries")
}

/// Null space of a homogeneous linear residual, found by probing it on unit
/// vectors of the unknowns.
fn kernel_of<F>(field: Field, unknowns: usize, residual: F) -> Subspace
where
    F: Fn(&[Scalar]) -> Vector,
{
    null_space(&system_matrix(field, unknowns, residual))
}

fn system_matrix<F>(field: Field, unknowns: usize, residual: F) -> Matrix
where
    F: Fn(&[Scalar]) -> Vector,
{
    let columns: Vec<Vector> = (0..unknowns)
        .map(|u| {
            let mut x = zero_vector(field, unknowns);
            x[u] = field.one();
            residual(&x)
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    Matrix::from_columns(field, rows, &columns).expect("uniform residual length")
}

fn apply(m: &Matrix, x: &[Scalar]) -> Vector {
    m.mul_vec(x).expect("square map")
}

/// `d[e_i,e_j] - [d e_i, e_j] - [e_i, d e_j]` over all basis pairs.
pub fn derivation_residual(a: &StructureAlgebra, d: &Matrix) -> Vector {
    let n = a.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let di = d.column(i);
        let ei = a.basis_element(i);
        for j in 0..n {
            let ej = a.basis_element(j);
            let lhs = apply(d, a.basis_bracket(i, j));
            let r1 = a.bracket_unchecked(&di, &ej);
            let r2 = a.bracket_unchecked(&ei, &d.column(j));
            out.extend(sub_vectors(&sub_vectors(&lhs, &r1), &r2));
        }
    }
    out
}

/// `d[e_i,e_j] - [d e_i, e_j] + [d e_j, e_i]` over all basis pairs.
pub fn antiderivation_residual(a: &StructureAlgebra, d: &Matrix) -> Vector {
    let n = a.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let di = d.column(i);
        let ei = a.basis_element(i);
        for j in 0..n {
            let ej = a.basis_element(j);
            let lhs = apply(d, a.basis_bracket(i, j));
            let r1 = a.bracket_unchecked(&di, &ej);
            let r2 = a.bracket_unchecked(&d.column(j), &ei);
            out.extend(crate::linalg::add_vectors(&sub_vectors(&lhs, &r1), &r2));
        }
    }
    out
}

/// `[e_i, d e_j] - [e_i, D e_j]` over all basis pairs.
fn compatibility_residual(a: &StructureAlgebra, d: &Matrix, big_d: &Matrix) -> Vector {
    let n = a.dim();
    let diff = d.sub(big_d);
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let ei = a.basis_element(i);
        for j in 0..n {
            out.extend(a.bracket_unchecked(&ei, &diff.column(j)));
        }
    }
    out
}

pub fn residual(a: &StructureAlgebra, d: &Matrix, kind: MapKind) -> Vector {
    match kind {
        MapKind::Derivation => derivation_residual(a, d),
        MapKind::AntiDerivation => antiderivation_residual(a, d),
    }
}

pub fn is_derivation(a: &StructureAlgebra, d: &Matrix) -> bool {
    is_zero_vector(&derivation_residual(a, d))
}

pub fn is_antiderivation(a: &StructureAlgebra, d: &Matrix) -> bool {
    is_zero_vector(&antiderivation_residual(a, d))
}

pub fn is_biderivation(a: &StructureAlgebra, d: &Matrix, big_d: &Matrix) -> bool {
    is_derivation(a, d)
        && is_antiderivation(a, big_d)
        && is_zero_vector(&compatibility_residual(a, d, big_d))
}

pub fn derivation_space(a: &StructureAlgebra) -> Subspace {
    map_space(a, MapKind::Derivation)
}

pub fn antiderivation_space(a: &StructureAlgebra) -> Subspace {
    map_space(a, MapKind::AntiDerivation)
}

pub fn map_space(a: &StructureAlgebra, kind: MapKind) -> Subspace {
    let (f, n) = (a.field(), a.dim());
    kernel_of(f, n * n, |x| residual(a, &unflatten(f, n, x), kind))
}

/// Pairs `(d, D)`: `d` a derivation, `D` an anti-derivation and
/// `[l, d l'] = [l, D l']` for all `l, l'`.
pub fn biderivation_space(a: &StructureAlgebra) -> Subspace {
    let (f, n) = (a.field(), a.dim());
    kernel_of(f, 2 * n * n, |x| {
        let (d, big_d) = split_pair(f, n, x);
        let mut r = derivation_residual(a, &d);
        r.extend(antiderivation_residual(a, &big_d));
        r.extend(compatibility_residual(a, &d, &big_d));
        r
    })
}

fn split_pair(field: Field, n: usize, flat: &[Scalar]) -> (Matrix, Matrix) {
    let (d, big_d) = flat.split_at(n * n);
    (unflatten(field, n, d), unflatten(field, n, big_d))
}

/// A pair `(d, D)` checked against the three biderivation equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biderivation {
    d: LinearMap,
    big_d: LinearMap,
}

impl Biderivation {
    pub fn new(a: &StructureAlgebra, d: LinearMap, big_d: LinearMap) -> Result<Biderivation> {
        let n = a.dim();
        for m in [&d, &big_d] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: m.rows(),
                });
            }
        }
        if !is_derivation(a, &d) {
            return Err(Error::Rejected("first component is not a derivation".into()));
        }
        if !is_antiderivation(a, &big_d) {
            return Err(Error::Rejected("second component is not an anti-derivation".into()));
        }
        if !is_zero_vector(&compatibility_residual(a, &d, &big_d)) {
            return Err(Error::Rejected("[l, d l'] != [l, D l'] for some basis pair".into()));
        }
        Ok(Biderivation { d, big_d })
    }

    /// Reads a member of [`biderivation_space`].
    pub fn from_flat(a: &StructureAlgebra, flat: &[Scalar]) -> Result<Biderivation> {
        let (d, big_d) = split_pair(a.field(), a.dim(), flat);
        Biderivation::new(a, d, big_d)
    }

    pub fn d(&self) -> &LinearMap {
        &self.d
    }

    pub fn big_d(&self) -> &LinearMap {
        &self.big_d
    }

    pub fn flat(&self) -> Vector {
        let mut v = flatten(&self.d);
        v.extend(flatten(&self.big_d));
        v
    }
}

/// `[(d1,D1),(d2,D2)] = (d1 d2 - d2 d1, D1 d2 - d2 D1)`, re-verified.
pub fn bider_bracket(
    a: &StructureAlgebra,
    p1: &Biderivation,
    p2: &Biderivation,
) -> Result<Biderivation> {
    let mul = |x: &Matrix, y: &Matrix| x.mul(y).expect("square");
    let d = mul(&p1.d, &p2.d).sub(&mul(&p2.d, &p1.d));
    let big_d = mul(&p1.big_d, &p2.d).sub(&mul(&p2.d, &p1.big_d));
    Biderivation::new(a, d, big_d).map_err(|e| {
        Error::Invariant(format!("biderivation bracket left the biderivation space: {e}"))
    })
}

/// `(ad l, Ad l)` with `ad(l)(x) = -[x, l]` and `Ad(l)(x) = [l, x]`.
pub fn inner_biderivation(a: &StructureAlgebra, l: &[Scalar]) -> Result<Biderivation> {
    if l.len() != a.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: l.len(),
        });
    }
    let ad = a.right_multiplication(l).scaled(&a.field().from_i64(-1));
    let big_ad = a.left_multiplication(l);
    Biderivation::new(a, ad, big_ad)
}

/// Restriction of `m` to `sub`, written in `sub`'s basis, or the first image
/// vector that leaves `sub`.
pub fn restrict_map(sub: &Subspace, m: &Matrix) -> Result<Matrix, Element> {
    let k = sub.dim();
    let mut cols = Vec::with_capacity(k);
    for b in sub.basis() {
        let image = apply(m, b);
        match sub.coordinates(&image) {
            Some(c) => cols.push(c),
            None => return Err(image),
        }
    }
    Ok(Matrix::from_columns(sub.field(), k, &cols).expect("coordinates"))
}

/// A linear map from a subspace `A` of an algebra into the whole algebra,
/// stored as the images of `A`'s canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapOnSubspace {
    pub domain: Subspace,
    pub images: Vec<Element>,
}

impl MapOnSubspace {
    /// The map determined by `source_i ↦ target_i`; sources must be independent.
    pub fn from_pairs(field: Field, n: usize, pairs: &[(Element, Element)]) -> Result<Self> {
        let sources: Vec<Element> = pairs.iter().map(|(s, _)| s.clone()).collect();
        let domain = Subspace::span(field, n, sources.clone());
        if domain.dim() != pairs.len() {
            return Err(Error::Usage("source vectors are linearly dependent".into()));
        }
        // Canonical basis vector b = Σ c_i source_i, so its image is Σ c_i target_i.
        let src = Matrix::from_columns(field, n, &sources)?;
        let mut images = Vec::with_capacity(domain.dim());
        for b in domain.basis() {
            let c = crate::linalg::solve(&src, b).expect("b lies in the span");
            let mut img = zero_vector(field, n);
            for (ci, (_, t)) in c.iter().zip(pairs) {
                if t.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        found: t.len(),
                    });
                }
                crate::linalg::axpy(&mut img, ci, t);
            }
            images.push(img);
        }
        Ok(MapOnSubspace { domain, images })
    }

    /// Restriction of a map defined on the whole algebra.
    pub fn restriction_of(domain: &Subspace, m: &Matrix) -> MapOnSubspace {
        MapOnSubspace {
            domain: domain.clone(),
            images: domain.basis().iter().map(|b| apply(m, b)).collect(),
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Option<Element> {
        let c = self.domain.coordinates(v)?;
        let mut out = zero_vector(self.domain.field(), self.domain.ambient());
        for (ci, img) in c.iter().zip(&self.images) {
            crate::linalg::axpy(&mut out, ci, img);
        }
        Some(out)
    }

    /// Defining identity of `kind` checked on basis pairs of the domain.
    /// `None` when the domain is not a subalgebra.
    pub fn residual_on(&self, a: &StructureAlgebra, kind: MapKind) -> Option<Vector> {
        let basis = self.domain.basis();
        let mut out = Vec::new();
        for (p, u) in basis.iter().enumerate() {
            for (q, v) in basis.iter().enumerate() {
                let uv = a.bracket_unchecked(u, v);
                let lhs = self.apply(&uv)?;
                let r1 = a.bracket_unchecked(&self.images[p], v);
                let r = match kind {
                    MapKind::Derivation => {
                        sub_vectors(&lhs, &crate::linalg::add_vectors(&r1, &a.bracket_unchecked(u, &self.images[q])))
                    }
                    MapKind::AntiDerivation => crate::linalg::add_vectors(
                        &sub_vectors(&lhs, &r1),
                        &a.bracket_unchecked(&self.images[q], u),
                    ),
                };
                out.extend(r);
            }
        }
        Some(out)
    }

    pub fn satisfies(&self, a: &StructureAlgebra, kind: MapKind) -> bool {
        self.residual_on(a, kind)
            .is_some_and(|r| is_zero_vector(&r))
    }
}

/// Why an assignment cannot extend: a weighted sum of the listed constraints
/// reads `0 = nonzero`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentConflict {
    pub constraints: Vec<String>,
    #[serde(serialize_with = "crate::io::ser_vector")]
    pub weights: Vector,
}

impl std::fmt::Display for AssignmentConflict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .constraints
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| format!("({w})·[{c}]"))
            .collect();
        write!(f, "inconsistent: {} gives 0 = nonzero", terms.join(" + "))
    }
}

/// Solves for a map of `kind` on `A = ⟨sources⟩` (the generated subalgebra)
/// with `d(source_i) = target_i`.
pub fn derivation_from_assignment(
    a: &StructureAlgebra,
    gens: &[(Element, Element)],
    kind: MapKind,
) -> Result<Result<MapOnSubspace, AssignmentConflict>> {
    let sources: Vec<Element> = gens.iter().map(|(s, _)| s.clone()).collect();
    let domain = a.subalgebra_generated(&sources)?;
    assignment_on_domain(a, &domain, gens, kind)
}

/// [`derivation_from_assignment`] with an explicit domain, which must be a
/// subalgebra containing every source.
pub fn assignment_on_domain(
    a: &StructureAlgebra,
    domain: &Subspace,
    gens: &[(Element, Element)],
    kind: MapKind,
) -> Result<Result<MapOnSubspace, AssignmentConflict>> {
    let (f, n) = (a.field(), a.dim());
    if !a.is_subalgebra(domain) {
        return Err(Error::Rejected("domain is not a subalgebra".into()));
    }
    let k = domain.dim();
    let unknowns = k * n;
    let as_map = |x: &[Scalar]| MapOnSubspace {
        domain: domain.clone(),
        images: x.chunks(n).map(<[Scalar]>::to_vec).collect(),
    };
    let mut labels = Vec::new();
    for p in 0..k {
        for q in 0..k {
            for c in 0..n {
                labels.push(format!("{kind:?} rule on basis pair ({p},{q}), coordinate {c}"));
            }
        }
    }
    let rule = system_matrix(f, unknowns, |x| {
        as_map(x).residual_on(a, kind).expect("domain is a subalgebra")
    });
    let mut rhs = zero_vector(f, rule.rows());
    let mut assign_rows = Vec::new();
    for (i, (s, t)) in gens.iter().enumerate() {
        if t.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: t.len(),
            });
        }
        let coords = domain
            .coordinates(s)
            .ok_or_else(|| Error::Usage(format!("source {i} is outside the domain")))?;
        for c in 0..n {
            let mut row = zero_vector(f, unknowns);
            for (sidx, cs) in coords.iter().enumerate() {
                row[sidx * n + c] = cs.clone();
            }
            assign_rows.push(row);
            rhs.push(t[c].clone());
            labels.push(format!("assignment {i}, coordinate {c}"));
        }
    }
    let system = rule.vstack(&Matrix::from_rows(f, unknowns, assign_rows)?)?;
    match solve_with_certificate(&system, &rhs) {
        Ok(x) => Ok(Ok(as_map(&x))),
        Err(w) => {
            let (constraints, weights) = labels
                .into_iter()
                .zip(w)
                .filter(|(_, w)| !w.is_zero())
                .unzip();
            Ok(Err(AssignmentConflict {
                constraints,
                weights,
            }))
        }
    }
}

/// A map of `kind` on the whole algebra agreeing with `m` on its domain.
pub fn extend_to_algebra(
    a: &StructureAlgebra,
    m: &MapOnSubspace,
    kind: MapKind,
) -> Option<LinearMap> {
    let (f, n) = (a.field(), a.dim());
    let mut rows = system_matrix(f, n * n, |x| residual(a, &unflatten(f, n, x), kind));
    let mut rhs = zero_vector(f, rows.rows());
    let agree = system_matrix(f, n * n, |x| {
        let d = unflatten(f, n, x);
        m.domain.basis().iter().flat_map(|b| apply(&d, b)).collect()
    });
    rows = rows.vstack(&agree).ok()?;
    rhs.extend(m.images.iter().flatten().cloned());
    let x = crate::linalg::solve(&rows, &rhs)?;
    Some(unflatten(f, n, &x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn n2() -> StructureAlgebra {
        StructureAlgebra::from_brackets(q(), 2, &[(1, 1, vec![(0, q().one())])]).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(q(), rows[0].len(), rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn derivation_spaces() {
        assert_eq!(derivation_space(&StructureAlgebra::abelian(q(), 3)).dim(), 9);
        let ds = derivation_space(&n2());
        assert_eq!(ds.dim(), 2);
        // d(e1) = 2δ e1, d(e2) = γ e1 + δ e2
        assert!(ds.contains(&flatten(&mat(&[&[2, 0], &[0, 1]]))));
        assert!(ds.contains(&flatten(&mat(&[&[0, 1], &[0, 0]]))));
    }

    #[test]
    fn idempotent_line_is_not_leibniz_and_has_no_derivations() {
        let a = StructureAlgebra::from_brackets(q(), 1, &[(0, 0, vec![(0, q().one())])]).unwrap();
        assert!(!a.is_verified());
        assert!(derivation_space(&a).is_zero());
        let p = StructureAlgebra::from_brackets(Field::Prime(5), 1, &[(0, 0, vec![(0, Field::Prime(5).one())])])
            .unwrap();
        assert!(derivation_space(&p).is_zero());
    }

    #[test]
    fn antiderivation_spaces() {
        assert_eq!(antiderivation_space(&StructureAlgebra::abelian(q(), 2)).dim(), 4);
        let s = antiderivation_space(&n2());
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&flatten(&mat(&[&[0, 1], &[0, 0]]))));
        assert!(s.contains(&flatten(&mat(&[&[0, 0], &[0, 1]]))));
        assert!(!s.contains(&flatten(&mat(&[&[1, 0], &[0, 0]]))));
    }

    #[test]
    fn inner_pairs() {
        let a = n2();
        let zero = inner_biderivation(&a, &v(&[0, 0])).unwrap();
        assert!(zero.d().is_zero() && zero.big_d().is_zero());
        let p = inner_biderivation(&a, &v(&[0, 1])).unwrap();
        assert_eq!(p.d(), &mat(&[&[0, -1], &[0, 0]]));
        assert_eq!(p.big_d(), &mat(&[&[0, 1], &[0, 0]]));
        assert!(biderivation_space(&a).contains(&p.flat()));
    }

    #[test]
    fn bracket_of_pair_with_itself() {
        let a = n2();
        let space = biderivation_space(&a);
        for b in space.basis() {
            let p = Biderivation::from_flat(&a, b).unwrap();
            let pp = bider_bracket(&a, &p, &p).unwrap();
            assert!(pp.d().is_zero());
            let expected = p.big_d().mul(p.d()).unwrap().sub(&p.d().mul(p.big_d()).unwrap());
            assert_eq!(pp.big_d(), &expected);
        }
        let zero = Biderivation::new(&a, Matrix::zeros(q(), 2, 2), Matrix::zeros(q(), 2, 2)).unwrap();
        let p = inner_biderivation(&a, &v(&[1, 1])).unwrap();
        let z = bider_bracket(&a, &p, &zero).unwrap();
        assert!(z.d().is_zero() && z.big_d().is_zero());
    }

    #[test]
    fn restrictions() {
        let line = Subspace::span(q(), 2, vec![v(&[1, 0])]);
        assert_eq!(restrict_map(&line, &Matrix::identity(q(), 2)).unwrap(), Matrix::identity(q(), 1));
        let d = mat(&[&[1, 0], &[0, 0]]);
        assert_eq!(restrict_map(&line, &d).unwrap(), Matrix::identity(q(), 1));
        let m = mat(&[&[0, 0], &[1, 0]]);
        assert_eq!(restrict_map(&line, &m).unwrap_err(), v(&[0, 1]));
    }

    #[test]
    fn assignments() {
        let a = n2();
        let m = derivation_from_assignment(&a, &[(v(&[1, 0]), v(&[1, 0]))], MapKind::Derivation)
            .unwrap()
            .unwrap();
        assert_eq!(m.domain.dim(), 1);
        assert!(m.satisfies(&a, MapKind::Derivation));

        let m = derivation_from_assignment(&a, &[(v(&[0, 1]), v(&[0, 1]))], MapKind::Derivation)
            .unwrap()
            .unwrap();
        assert!(m.domain.is_full());
        assert_eq!(m.apply(&v(&[1, 0])).unwrap(), v(&[2, 0]));

        let ab = StructureAlgebra::abelian(q(), 3);
        let gens = vec![(v(&[1, 0, 0]), v(&[4, 5, 6])), (v(&[0, 1, 1]), v(&[-1, 0, 2]))];
        let m = derivation_from_assignment(&ab, &gens, MapKind::AntiDerivation)
            .unwrap()
            .unwrap();
        for (s, t) in &gens {
            assert_eq!(&m.apply(s).unwrap(), t);
        }
    }

    #[test]
    fn inconsistent_assignment_reports_conflict() {
        // d(e2) = e2 forces d(e1) = 2 e1, contradicting d(e1) = 0.
        let a = n2();
        let gens = vec![(v(&[0, 1]), v(&[0, 1])), (v(&[1, 0]), v(&[0, 0]))];
        let conflict = derivation_from_assignment(&a, &gens, MapKind::Derivation)
            .unwrap()
            .unwrap_err();
        assert!(!conflict.constraints.is_empty());
        assert!(conflict.to_string().contains("assignment"));
    }

    #[test]
    fn extension_to_whole_algebra() {
        let ab = StructureAlgebra::abelian(q(), 2);
        let line = Subspace::span(q(), 2, vec![v(&[1, 1])]);
        let m = MapOnSubspace {
            domain: line,
            images: vec![v(&[3, 0])],
        };
        let d = extend_to_algebra(&ab, &m, MapKind::Derivation).unwrap();
        assert_eq!(d.mul_vec(&v(&[1, 1])).unwrap(), v(&[3, 0]));
    }

    #[test]
    fn map_from_pairs_uses_canonical_basis() {
        let pairs = vec![(v(&[1, 1]), v(&[1, 0])), (v(&[0, 1]), v(&[0, 1]))];
        let m = MapOnSubspace::from_pairs(q(), 2, &pairs).unwrap();
        assert!(m.domain.is_full());
        assert_eq!(m.apply(&v(&[1, 0])).unwrap(), v(&[1, -1]));
        assert!(MapOnSubspace::from_pairs(q(), 2, &[pairs[0].clone(), pairs[0].clone()]).is_err());
    }
}
