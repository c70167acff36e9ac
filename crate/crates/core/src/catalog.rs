//! Built-in algebras: fields, products, matrix algebras, quiver path algebras
//! and their tensor products, each with the data needed for a diagonal
//! resolution.

use num_traits::Zero;

use crate::algebra::{opposite, tensor_algebras, tensor_elements, validate_algebra, AlgebraData, DgAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{q, qf, unit_vec, zero_vec, Rational};

/// How the diagonal bimodule of a catalog algebra is resolved.
#[derive(Clone, Debug)]
pub enum Presentation {
    /// Separable algebra with idempotent `ε ∈ A ⊗ A^op`, `μ(ε) = 1`.
    Separable(Vec<Rational>),
    /// Path algebra of an acyclic quiver; vertices are basis `0..vertices`,
    /// arrows are `(source, target, basis index)`.
    Quiver { vertices: usize, arrows: Vec<(usize, usize, usize)> },
    /// Tensor product of two presented algebras.
    Tensor(Box<CatalogEntry>, Box<CatalogEntry>),
    /// Opposite of a presented algebra.
    Opposite(Box<CatalogEntry>),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub algebra: DgAlgebra,
    pub presentation: Presentation,
}

/// Catalog names in the order used by the verification suite.
pub const NAMES: [&str; 7] = ["k", "kxk", "M2", "A2", "A3", "Kronecker", "A2xA2"];

pub fn ground_field() -> DgAlgebra {
    product_field(1).with_name("k")
}

/// `k^n` with orthogonal idempotents `e1, ..., en`.
pub fn product_field(n: usize) -> DgAlgebra {
    let labels = if n == 1 { vec!["1".to_string()] } else { (1..=n).map(|i| format!("e{i}")).collect() };
    let data = AlgebraData {
        name: if n == 2 { "kxk".into() } else { format!("k^{n}") },
        labels,
        degrees: vec![0; n],
        mult: (0..n).map(|i| (i, i, i, q(1))).collect(),
        unit: vec![q(1); n],
        diff: vec![],
        idempotents: (0..n).map(|i| unit_vec(n, i)).collect(),
    };
    validate_algebra(data).expect("product field")
}

/// `M_n(k)` with basis `E_ij` at index `n i + j`.
pub fn matrix_algebra(n: usize) -> DgAlgebra {
    let idx = |i: usize, j: usize| n * i + j;
    let mut mult = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                mult.push((idx(i, j), idx(j, l), idx(i, l), q(1)));
            }
        }
    }
    let mut unit = zero_vec(n * n);
    for i in 0..n {
        unit[idx(i, i)] = q(1);
    }
    let data = AlgebraData {
        name: format!("M{n}"),
        labels: (0..n).flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1))).collect(),
        degrees: vec![0; n * n],
        mult,
        unit,
        diff: vec![],
        idempotents: (0..n).map(|i| unit_vec(n * n, idx(i, i))).collect(),
    };
    validate_algebra(data).expect("matrix algebra")
}

/// Separability idempotent `(1/n) Σ E_ij ⊗ E_ji` of `M_n`.
pub fn matrix_separability_idempotent(n: usize) -> Vec<Rational> {
    let m = n * n;
    let mut eps = zero_vec(m * m);
    for i in 0..n {
        for j in 0..n {
            eps[(n * i + j) * m + n * j + i] = qf(1, n as i64);
        }
    }
    eps
}

/// Path algebra data for an acyclic quiver. Paths compose left to right:
/// for an arrow `α: u → v`, `e_u α = α = α e_v`, so `e_u A e_v` is spanned
/// by the paths from `u` to `v`.
pub fn quiver_data(name: &str, vertices: usize, arrows: &[(usize, usize, &str)]) -> (AlgebraData, Vec<(usize, usize, usize)>) {
    // Each path: (source, target, arrow sequence). Vertices first.
    let mut paths: Vec<(usize, usize, Vec<usize>)> = (0..vertices).map(|v| (v, v, vec![])).collect();
    let mut frontier: Vec<(usize, usize, Vec<usize>)> =
        arrows.iter().enumerate().map(|(a, (u, v, _))| (*u, *v, vec![a])).collect();
    while !frontier.is_empty() {
        paths.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for (u, v, seq) in &frontier {
            for (a, (s, t, _)) in arrows.iter().enumerate() {
                if s == v {
                    let mut seq2 = seq.clone();
                    seq2.push(a);
                    next.push((*u, *t, seq2));
                }
            }
        }
        assert!(next.len() < 10_000, "quiver must be acyclic");
        frontier = next;
    }
    let n = paths.len();
    let labels: Vec<String> = paths
        .iter()
        .map(|(u, _, seq)| {
            if seq.is_empty() {
                format!("e{}", u + 1)
            } else {
                seq.iter().map(|&a| arrows[a].2).collect::<Vec<_>>().join("")
            }
        })
        .collect();
    let find = |u: usize, seq: &[usize]| paths.iter().position(|(s, _, p)| *s == u && p.as_slice() == seq);
    let mut mult = Vec::new();
    for (i, (u, v, p)) in paths.iter().enumerate() {
        for (j, (u2, _, p2)) in paths.iter().enumerate() {
            if v == u2 {
                let mut seq = p.clone();
                seq.extend(p2.iter().copied());
                let k = find(*u, &seq).expect("path closed under concatenation");
                mult.push((i, j, k, q(1)));
            }
        }
    }
    let mut unit = zero_vec(n);
    for u in unit.iter_mut().take(vertices) {
        *u = q(1);
    }
    let arrow_idx = arrows.iter().enumerate().map(|(a, (u, v, _))| (*u, *v, find(*u, &[a]).unwrap())).collect();
    let data = AlgebraData {
        name: name.into(),
        labels,
        degrees: vec![0; n],
        mult,
        unit,
        diff: vec![],
        idempotents: (0..vertices).map(|v| unit_vec(n, v)).collect(),
    };
    (data, arrow_idx)
}

const ARROW_NAMES: [&str; 8] = ["a", "b", "c", "d", "f", "g", "h", "i"];

fn linear_arrows(n: usize) -> Vec<(usize, usize, &'static str)> {
    (0..n.saturating_sub(1)).map(|i| (i, i + 1, if n == 2 { "α" } else { ARROW_NAMES[i] })).collect()
}

pub fn path_algebra_a_data(n: usize) -> AlgebraData {
    quiver_data(&format!("A{n}"), n, &linear_arrows(n)).0
}

/// Path algebra of the linear quiver `1 → 2 → ... → n`.
pub fn path_algebra_a(n: usize) -> DgAlgebra {
    validate_algebra(path_algebra_a_data(n)).expect("linear quiver")
}

pub fn kronecker() -> DgAlgebra {
    catalog_entry("Kronecker").unwrap().algebra
}

/// `k[x]/x^2` with `|x| = 1` and zero differential.
pub fn graded_dual_numbers() -> DgAlgebra {
    let data = AlgebraData {
        name: "k[x]/x2".into(),
        labels: vec!["1".into(), "x".into()],
        degrees: vec![0, 1],
        mult: vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))],
        unit: vec![q(1), q(0)],
        diff: vec![],
        idempotents: vec![vec![q(1), q(0)]],
    };
    validate_algebra(data).expect("graded dual numbers")
}

/// Square-zero algebra on `1, x, y` with `|x| = -1`, `|y| = 0`, `dx = y`;
/// quasi-isomorphic to `k`.
pub fn acyclic_extension() -> DgAlgebra {
    let data = AlgebraData {
        name: "k<x,dx>".into(),
        labels: vec!["1".into(), "x".into(), "y".into()],
        degrees: vec![0, -1, 0],
        mult: vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1)), (0, 2, 2, q(1)), (2, 0, 2, q(1))],
        unit: vec![q(1), q(0), q(0)],
        diff: vec![(1, 2, q(1))],
        idempotents: vec![],
    };
    validate_algebra(data).expect("acyclic extension")
}

fn quiver_entry(name: &str, vertices: usize, arrows: &[(usize, usize, &str)]) -> CatalogEntry {
    let (data, arrows) = quiver_data(name, vertices, arrows);
    CatalogEntry { algebra: validate_algebra(data).expect("quiver algebra"), presentation: Presentation::Quiver { vertices, arrows } }
}

fn separable_entry(algebra: DgAlgebra, eps: Vec<Rational>) -> CatalogEntry {
    CatalogEntry { algebra, presentation: Presentation::Separable(eps) }
}

pub fn product_idempotent(a: &DgAlgebra) -> Vec<Rational> {
    let mut eps = zero_vec(a.dim() * a.dim());
    for e in a.idempotents() {
        for (i, c) in tensor_elements(e, e).into_iter().enumerate() {
            if !c.is_zero() {
                eps[i] += c;
            }
        }
    }
    eps
}

pub fn tensor_entries(a: &CatalogEntry, b: &CatalogEntry) -> CatalogEntry {
    let algebra = tensor_algebras(&a.algebra, &b.algebra);
    let name = format!("{}x{}", a.algebra.name(), b.algebra.name());
    CatalogEntry {
        algebra: algebra.with_name(name),
        presentation: Presentation::Tensor(Box::new(a.clone()), Box::new(b.clone())),
    }
}

/// Looks up a catalog algebra by name. Tensor products are written `XxY`
/// (e.g. `A2xA2`, `M2xA2`), `⊗` is accepted too.
pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    let name = name.trim();
    match name {
        "k" => {
            let k = ground_field();
            return Ok(separable_entry(k, vec![q(1)]));
        }
        "kxk" | "k×k" | "k^2" => {
            let a = product_field(2);
            let eps = product_idempotent(&a);
            return Ok(separable_entry(a, eps));
        }
        "Kronecker" => return Ok(quiver_entry("Kronecker", 2, &[(0, 1, "a"), (0, 1, "b")])),
        _ => {}
    }
    if let Some(n) = name.strip_prefix('M').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=4).contains(&n) {
            return Ok(separable_entry(matrix_algebra(n), matrix_separability_idempotent(n)));
        }
    }
    if let Some(n) = name.strip_prefix('A').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=6).contains(&n) {
            return Ok(quiver_entry(&format!("A{n}"), n, &linear_arrows(n)));
        }
    }
    for sep in ["⊗", "x"] {
        // Split at the first separator whose both halves resolve.
        for (pos, _) in name.match_indices(sep) {
            let (l, r) = (&name[..pos], &name[pos + sep.len()..]);
            if l.is_empty() || r.is_empty() {
                continue;
            }
            let (l, r) = (l.trim_matches(|c| c == '(' || c == ')'), r.trim_matches(|c| c == '(' || c == ')'));
            if let (Ok(a), Ok(b)) = (catalog_entry(l), catalog_entry(r)) {
                return Ok(tensor_entries(&a, &b));
            }
        }
    }
    Err(Error::Input(format!("unknown catalog algebra {name:?}")))
}

/// Opposite of a catalog algebra; its resolution is transported from `e`.
pub fn opposite_entry(e: &CatalogEntry) -> CatalogEntry {
    match &e.presentation {
        Presentation::Opposite(inner) => (**inner).clone(),
        _ => CatalogEntry { algebra: opposite(&e.algebra), presentation: Presentation::Opposite(Box::new(e.clone())) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_dimensions() {
        let dims: Vec<usize> = NAMES.iter().map(|n| catalog_entry(n).unwrap().algebra.dim()).collect();
        assert_eq!(dims, vec![1, 2, 4, 3, 6, 4, 9]);
    }

    #[test]
    fn a3_labels_and_paths() {
        let a3 = path_algebra_a(3);
        assert_eq!(a3.labels(), ["e1", "e2", "e3", "a", "b", "ab"]);
        let (a, b) = (a3.basis(3), a3.basis(4));
        assert_eq!(a3.mul(&a, &b), a3.basis(5));
        assert_eq!(a3.mul(&b, &a), a3.zero());
    }

    #[test]
    fn separability_idempotents_are_idempotent() {
        for name in ["k", "kxk", "M2", "M3"] {
            let e = catalog_entry(name).unwrap();
            let Presentation::Separable(eps) = &e.presentation else { panic!() };
            let a = &e.algebra;
            let ae = tensor_algebras(a, &opposite(a));
            assert_eq!(&ae.mul(eps, eps), eps, "{name}");
            // μ(ε) = 1 with μ(x ⊗ y) = x y.
            let n = a.dim();
            let mut mu = a.zero();
            for (i, c) in eps.iter().enumerate() {
                if !c.is_zero() {
                    let v = a.basis_product(i / n, i % n);
                    for (k, x) in v.into_iter().enumerate() {
                        mu[k] += c * x;
                    }
                }
            }
            assert_eq!(mu, a.unit(), "{name}");
        }
    }

    #[test]
    fn unknown_names_fail() {
        assert!(catalog_entry("B7").is_err());
        assert!(catalog_entry("M2xQ").is_err());
        assert_eq!(catalog_entry("M2⊗A2").unwrap().algebra.dim(), 12);
    }

    #[test]
    fn acyclic_extension_has_cohomology_k() {
        let a = acyclic_extension();
        let h = a.cohomology_dims();
        assert_eq!(h.total_dim(), 1);
        assert_eq!(h.dim(0), 1);
    }
}
