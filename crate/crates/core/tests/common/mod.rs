//! Shared fixture loading and independent reference computations for the
//! integration tests. The reference code works on plain integers and does not
//! call back into the library's arithmetic.

#![allow(dead_code)]

use std::path::PathBuf;

use leibniz::equations::{EqSystem, TermExpr};
use leibniz::io::{load_algebra, AlgebraDocument};
use leibniz::{Field, Scalar, StructureAlgebra};
use rand::Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub const FIXTURE_NAMES: [&str; 7] = [
    "abelian1", "abelian2", "abelian3", "abelian4", "n2", "solvable3", "sl2",
];

pub fn fixture(name: &str) -> AlgebraDocument {
    load_algebra(&fixtures_dir().join(format!("{name}.json"))).expect("fixture loads")
}

pub fn fixtures() -> Vec<AlgebraDocument> {
    FIXTURE_NAMES.iter().map(|n| fixture(n)).collect()
}

pub fn random_element<R: Rng>(rng: &mut R, f: Field, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| match f.order() {
            Some(p) => f.from_i64(rng.gen_range(0..p) as i64),
            None => f.from_i64(rng.gen_range(-3..=3)),
        })
        .collect()
}

/// Residue of a GF(p) scalar as a plain integer.
pub fn residue(s: &Scalar) -> u64 {
    s.to_string().parse().expect("GF(p) scalars print as residues")
}

/// Rational scalar as an exact `(num, den)` pair of `i128`.
pub fn rational(s: &Scalar) -> (i128, i128) {
    let t = s.to_string();
    match t.split_once('/') {
        Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
        None => (t.parse().unwrap(), 1),
    }
}

/// Structure constants reduced mod `p`, read through the public accessor.
pub struct ModTable {
    pub p: u64,
    pub n: usize,
    pub c: Vec<u64>,
}

impl ModTable {
    /// A GF(p) residue, or a rational `a/b` read as `a * b^(p-2) mod p`.
    fn reduce(&self, s: &Scalar) -> u64 {
        if matches!(s.field(), Field::Prime(_)) {
            return residue(s);
        }
        let p = self.p as i128;
        let (a, b) = rational(s);
        let mut inv = 1i128;
        let (mut base, mut e) = (b.rem_euclid(p), p - 2);
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        (a.rem_euclid(p) * inv % p) as u64
    }

    pub fn of(a: &StructureAlgebra) -> ModTable {
        let p = a.field().order().expect("finite field");
        let n = a.dim();
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c.push(residue(a.constant(i, j, k)));
                }
            }
        }
        ModTable { p, n, c }
    }

    pub fn bracket(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let (n, p) = (self.n, self.p);
        let mut out = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                let xy = x[i] * y[j] % p;
                if xy == 0 {
                    continue;
                }
                for k in 0..n {
                    out[k] = (out[k] + xy * self.c[(i * n + j) * n + k]) % p;
                }
            }
        }
        out
    }

    pub fn eval(&self, t: &TermExpr, vars: &[String], values: &[Vec<u64>]) -> Vec<u64> {
        let p = self.p;
        match t {
            TermExpr::Var(x) => values[vars.iter().position(|v| v == x).expect("declared")].clone(),
            TermExpr::Const(c) => c.iter().map(residue).collect(),
            TermExpr::Bracket(a, b) => self.bracket(&self.eval(a, vars, values), &self.eval(b, vars, values)),
            TermExpr::Scale(c, a) => {
                let c = self.reduce(c);
                self.eval(a, vars, values).into_iter().map(|x| x * c % p).collect()
            }
            TermExpr::Sum(ts) => {
                let mut out = vec![0; self.n];
                for t in ts {
                    for (o, x) in out.iter_mut().zip(self.eval(t, vars, values)) {
                        *o = (*o + x) % p;
                    }
                }
                out
            }
        }
    }
}

/// Every solution of `s` in `a`, listed in lexicographic coordinate order.
pub fn brute_force_solutions(s: &EqSystem, a: &StructureAlgebra) -> Vec<Vec<Vec<u64>>> {
    let t = ModTable::of(a);
    let slots = t.n * s.vars.len();
    let mut digits = vec![0u64; slots];
    let mut out = Vec::new();
    loop {
        let values: Vec<Vec<u64>> = digits.chunks(t.n.max(1)).map(<[u64]>::to_vec).collect();
        let values = if t.n == 0 { vec![Vec::new(); s.vars.len()] } else { values };
        let ok = s.equations.iter().all(|e| t.eval(e, &s.vars, &values).iter().all(|&x| x == 0))
            && s.inequations.iter().all(|e| t.eval(e, &s.vars, &values).iter().any(|&x| x != 0));
        if ok {
            out.push(values);
        }
        // Odometer, last coordinate fastest.
        let mut i = slots;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < t.p {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Leibniz identity on basis triples, recomputed with `i128` fractions.
pub fn violating_triples(a: &StructureAlgebra) -> Vec<(usize, usize, usize)> {
    let n = a.dim();
    let c = |i: usize, j: usize, k: usize| -> (i128, i128) { rational(a.constant(i, j, k)) };
    let add = |x: (i128, i128), y: (i128, i128)| reduce((x.0 * y.1 + y.0 * x.1, x.1 * y.1));
    let mul = |x: (i128, i128), y: (i128, i128)| reduce((x.0 * y.0, x.1 * y.1));
    let mut bad = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for out in 0..n {
                    let mut lhs = (0, 1);
                    let mut rhs = (0, 1);
                    for m in 0..n {
                        // [[x,y],z] = Σ_m c(x,y,m) c(m,z,out)
                        lhs = add(lhs, mul(c(x, y, m), c(m, z, out)));
                        // [[x,z],y] = Σ_m c(x,z,m) c(m,y,out); [x,[y,z]] = Σ_m c(y,z,m) c(x,m,out)
                        rhs = add(rhs, mul(c(x, z, m), c(m, y, out)));
                        rhs = add(rhs, mul(c(y, z, m), c(x, m, out)));
                    }
                    if lhs != rhs {
                        bad.push((x, y, z));
                        break;
                    }
                }
            }
        }
    }
    bad
}

fn reduce((a, b): (i128, i128)) -> (i128, i128) {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(a, b).max(1);
    let (a, b) = (a / g, b / g);
    if b < 0 {
        (-a, -b)
    } else {
        (a, b)
    }
}
