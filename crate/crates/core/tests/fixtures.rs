//! Library results on the shipped fixtures against the reference values
//! stored in each fixture's `expected` block.

mod common;

use common::{fixture, fixtures, violating_triples, FIXTURE_NAMES};
use leibniz::derivations::{antiderivation_space, biderivation_space, derivation_space};
use leibniz::equations::{centralizer, normalizer};
use leibniz::linalg::Subspace;
use leibniz::Field;
use serde_json::Value;

fn exp(doc: &leibniz::io::AlgebraDocument, key: &str) -> Value {
    doc.expected.get(key).cloned().unwrap_or_else(|| panic!("missing expected.{key}"))
}

#[test]
fn every_fixture_is_leibniz() {
    for doc in fixtures() {
        assert_eq!(exp(&doc, "leibniz"), Value::Bool(true));
        assert!(doc.algebra.verify_leibniz().holds, "{:?}", doc.name);
        assert!(violating_triples(&doc.algebra).is_empty());
    }
}

#[test]
fn derived_series_matches() {
    for doc in fixtures() {
        let s = doc.algebra.derived_series();
        let dims: Vec<usize> = s.terms.iter().map(Subspace::dim).collect();
        assert_eq!(serde_json::to_value(&dims).unwrap(), exp(&doc, "derived_dims"), "{:?}", doc.name);
        assert_eq!(Value::Bool(s.solvable), exp(&doc, "solvable"));
    }
}

#[test]
fn map_space_dimensions_match() {
    for doc in fixtures() {
        let a = &doc.algebra;
        assert_eq!(derivation_space(a).dim() as u64, exp(&doc, "derivation_dim").as_u64().unwrap());
        assert_eq!(antiderivation_space(a).dim() as u64, exp(&doc, "antiderivation_dim").as_u64().unwrap());
        assert_eq!(biderivation_space(a).dim() as u64, exp(&doc, "biderivation_dim").as_u64().unwrap(), "{:?}", doc.name);
        for p in [3u64, 5] {
            let ap = a.over_field(Field::prime(p).unwrap()).unwrap();
            assert!(ap.is_verified());
            assert_eq!(
                derivation_space(&ap).dim() as u64,
                exp(&doc, &format!("derivation_dim_gf{p}")).as_u64().unwrap()
            );
            assert_eq!(
                antiderivation_space(&ap).dim() as u64,
                exp(&doc, &format!("antiderivation_dim_gf{p}")).as_u64().unwrap()
            );
        }
    }
}

#[test]
fn simplicity_over_gf3_matches_exhaustive_search() {
    for doc in fixtures() {
        let a = doc.algebra.over_field(Field::prime(3).unwrap()).unwrap();
        let r = a.is_simple();
        assert!(r.complete);
        assert_eq!(Value::Bool(r.simple), exp(&doc, "simple_gf3"), "{:?}", doc.name);
    }
}

#[test]
fn subalgebra_reports_match() {
    for doc in fixtures() {
        let a = &doc.algebra;
        let reports = exp(&doc, "subalgebras");
        let reports = reports.as_array().unwrap();
        assert_eq!(reports.len(), doc.subalgebras.len());
        for (s, r) in doc.subalgebras.iter().zip(reports) {
            let get = |k: &str| r[k].as_u64().unwrap() as usize;
            assert_eq!(s.dim(), get("dim"));
            assert_eq!(a.is_subalgebra(s), r["is_subalgebra"].as_bool().unwrap());
            assert_eq!(centralizer(a, s.basis()).dim(), get("centralizer_dim"), "{:?}", doc.name);
            let nz = normalizer(a, s).unwrap();
            assert_eq!(nz.left.dim(), get("left_normalizer_dim"));
            assert_eq!(nz.right.dim(), get("right_normalizer_dim"));
            assert_eq!(nz.both.dim(), get("normalizer_dim"));
        }
    }
}

#[test]
fn fixture_names_are_unique() {
    let mut names: Vec<_> = FIXTURE_NAMES.to_vec();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), FIXTURE_NAMES.len());
    assert_eq!(fixture("n2").name.as_deref(), Some("n2"));
}
