//! Finite-dimensional dg algebras given by a graded basis and structure constants.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::{cohomology, Complex, GradedSpace, Layout};
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, is_zero_vec, sign, unit_vec, zero_vec, Matrix, Rational, SubspacePresentation};

/// Unvalidated description of an algebra.
#[derive(Clone, Debug, Default)]
pub struct AlgebraData {
    pub name: String,
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    /// `e_i * e_j` has coefficient `c` on `e_k`.
    pub mult: Vec<(usize, usize, usize, Rational)>,
    pub unit: Vec<Rational>,
    /// `d(e_j)` has coefficient `c` on `e_i`, given as `(j, i, c)`.
    pub diff: Vec<(usize, usize, Rational)>,
    /// Optional complete set of orthogonal idempotents, used to name
    /// projective modules.
    pub idempotents: Vec<Vec<Rational>>,
}

type Sparse = Vec<(usize, Rational)>;

#[derive(Clone)]
pub struct DgAlgebra {
    name: String,
    labels: Vec<String>,
    degrees: Vec<i32>,
    table: Vec<Vec<Sparse>>,
    unit: Vec<Rational>,
    diff: Matrix,
    idempotents: Vec<Vec<Rational>>,
    degree_zero: bool,
}

impl fmt::Debug for DgAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DgAlgebra({}, dim {})", self.name, self.dim())
    }
}

/// Structural equality: labels, names and idempotent lists are ignored.
impl PartialEq for DgAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.degrees == other.degrees
            && self.table == other.table
            && self.unit == other.unit
            && self.diff == other.diff
    }
}

impl Eq for DgAlgebra {}

fn normalize(mut v: Sparse) -> Sparse {
    v.sort_by_key(|(k, _)| *k);
    let mut out: Sparse = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((k0, c0)) if *k0 == k => *c0 += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Validates all dg-algebra axioms exhaustively over basis tuples.
pub fn validate_algebra(data: AlgebraData) -> Result<DgAlgebra> {
    let n = data.degrees.len();
    if data.labels.len() != n {
        return Err(Error::DimensionMismatch(format!("{} labels for dimension {n}", data.labels.len())));
    }
    if data.unit.len() != n {
        return Err(Error::DimensionMismatch("unit length".into()));
    }
    let mut raw: Vec<Vec<Sparse>> = vec![vec![Vec::new(); n]; n];
    for (i, j, k, c) in data.mult {
        if i >= n || j >= n || k >= n {
            return Err(Error::IndexOutOfRange { i, j, k, dim: n });
        }
        raw[i][j].push((k, c));
    }
    let table: Vec<Vec<Sparse>> =
        raw.into_iter().map(|row| row.into_iter().map(normalize).collect()).collect();
    let mut diff = Matrix::zeros(n, n);
    for (j, i, c) in data.diff {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { i: j, j: i, k: 0, dim: n });
        }
        diff.add_at(i, j, &c);
    }
    for e in &data.idempotents {
        if e.len() != n {
            return Err(Error::DimensionMismatch("idempotent length".into()));
        }
    }
    let degree_zero = data.degrees.iter().all(|&d| d == 0) && diff.is_zero();
    let a = DgAlgebra {
        name: data.name,
        labels: data.labels,
        degrees: data.degrees,
        table,
        unit: data.unit,
        diff,
        idempotents: data.idempotents,
        degree_zero,
    };
    a.check()?;
    Ok(a)
}

impl DgAlgebra {
    fn check(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for (k, _) in &self.table[i][j] {
                    if self.degrees[*k] != self.degrees[i] + self.degrees[j] {
                        return Err(Error::DegreeViolation(i, j));
                    }
                }
            }
        }
        for i in 0..n {
            let e = unit_vec(n, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::UnitViolation(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let left = self.mul(&ij, &unit_vec(n, k));
                    let jk = self.basis_product(j, k);
                    let right = self.mul(&unit_vec(n, i), &jk);
                    if left != right {
                        return Err(Error::AssociativityViolation(i, j, k));
                    }
                }
            }
        }
        for j in 0..n {
            for i in 0..n {
                if !self.diff.get(i, j).is_zero() && self.degrees[i] != self.degrees[j] + 1 {
                    return Err(Error::DegreeViolation(j, i));
                }
            }
        }
        let d2 = &self.diff * &self.diff;
        for j in 0..n {
            if !is_zero_vec(&d2.column(j)) {
                return Err(Error::DifferentialSquareViolation(j));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (unit_vec(n, i), unit_vec(n, j));
                let lhs = self.d(&self.basis_product(i, j));
                let mut rhs = self.mul(&self.d(&ei), &ej);
                add_scaled(&mut rhs, &sign(self.degrees[i] as i64), &self.mul(&ei, &self.d(&ej)));
                if lhs != rhs {
                    return Err(Error::LeibnizViolation(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the recorded idempotents after checking `e·e = e`.
    pub fn with_idempotents(mut self, idempotents: Vec<Vec<Rational>>) -> Result<Self> {
        for e in &idempotents {
            if e.len() != self.dim() || self.mul(e, e) != *e {
                return Err(Error::BadIdempotent);
            }
        }
        self.idempotents = idempotents;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn differential(&self) -> &Matrix {
        &self.diff
    }

    pub fn idempotents(&self) -> &[Vec<Rational>] {
        &self.idempotents
    }

    /// Concentrated in degree 0 with zero differential.
    pub fn is_degree_zero(&self) -> bool {
        self.degree_zero
    }

    pub fn require_degree_zero(&self) -> Result<()> {
        if self.degree_zero {
            Ok(())
        } else {
            Err(Error::NotDegreeZeroConcentrated)
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis(&self, i: usize) -> Vec<Rational> {
        unit_vec(self.dim(), i)
    }

    pub fn zero(&self) -> Vec<Rational> {
        zero_vec(self.dim())
    }

    /// Sparse structure constants `e_i e_j`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut out = self.zero();
        for (k, c) in &self.table[i][j] {
            out[*k] += c;
        }
        out
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn d(&self, x: &[Rational]) -> Vec<Rational> {
        self.diff.mul_vec(x)
    }

    /// `L_x` with `L_x[c][b]` the coefficient of `e_c` in `x e_b`.
    pub fn left_matrix(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for b in 0..n {
            let col = self.mul(x, &unit_vec(n, b));
            for (c, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(c, b, v);
                }
            }
        }
        m
    }

    /// `R_x` with `R_x[c][b]` the coefficient of `e_c` in `e_b x`.
    pub fn right_matrix(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for b in 0..n {
            let col = self.mul(&unit_vec(n, b), x);
            for (c, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(c, b, v);
                }
            }
        }
        m
    }

    /// `tr(z ↦ p z q)` over the whole algebra.
    pub fn sandwich_trace(&self, p: &[Rational], q: &[Rational]) -> Rational {
        let n = self.dim();
        let mut acc = Rational::zero();
        for c in 0..n {
            let v = self.mul(&self.mul(p, &unit_vec(n, c)), q);
            acc += &v[c];
        }
        acc
    }

    /// Underlying complex with basis grouped by degree (stable in index order).
    pub fn carrier(&self) -> (Complex, Layout) {
        Complex::from_flat(&self.degrees, &self.diff).expect("validated differential")
    }

    /// Cohomology dimensions of the underlying complex; finite by construction.
    pub fn cohomology_dims(&self) -> GradedSpace {
        let (c, _) = self.carrier();
        cohomology(&c).expect("d^2 = 0 validated").space()
    }

    pub fn is_proper(&self) -> bool {
        // Finite dimension implies finite total cohomology.
        self.cohomology_dims().total_dim() <= self.dim()
    }

    /// Span of all basis commutators `e_i e_j - (-1)^{|i||j|} e_j e_i`.
    pub fn commutator_span(&self) -> SubspacePresentation {
        let n = self.dim();
        let mut vs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut v = self.basis_product(i, j);
                let s = -sign(self.degrees[i] as i64 * self.degrees[j] as i64);
                add_scaled(&mut v, &s, &self.basis_product(j, i));
                if !is_zero_vec(&v) {
                    vs.push(v);
                }
            }
        }
        SubspacePresentation::span(n, &vs)
    }

    /// `{ e x f : x ∈ A }` as a subspace.
    pub fn corner(&self, e: &[Rational], f: &[Rational]) -> SubspacePresentation {
        let n = self.dim();
        let vs: Vec<Vec<Rational>> =
            (0..n).map(|b| self.mul(&self.mul(e, &unit_vec(n, b)), f)).filter(|v| !is_zero_vec(v)).collect();
        SubspacePresentation::span(n, &vs)
    }

    pub fn format_element(&self, x: &[Rational]) -> String {
        let mut parts = Vec::new();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(self.labels[i].clone());
            } else {
                parts.push(format!("{}*{}", crate::linalg::fmt_rational(c), self.labels[i]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Sign-twisted opposite: `a · b = (-1)^{|a||b|} b a`.
pub fn opposite(a: &DgAlgebra) -> DgAlgebra {
    let n = a.dim();
    let mut table = vec![vec![Vec::new(); n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let s = sign(a.degrees[i] as i64 * a.degrees[j] as i64);
            *cell = a.table[j][i].iter().map(|(k, c)| (*k, c * &s)).collect();
        }
    }
    DgAlgebra {
        name: op_name(&a.name),
        labels: a.labels.clone(),
        degrees: a.degrees.clone(),
        table,
        unit: a.unit.clone(),
        diff: a.diff.clone(),
        idempotents: a.idempotents.clone(),
        degree_zero: a.degree_zero,
    }
}

fn op_name(name: &str) -> String {
    match name.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{name}^op"),
    }
}

/// `A ⊗ B` with `(a ⊗ b)(a' ⊗ b') = (-1)^{|b||a'|} aa' ⊗ bb'`; basis index `i * dim B + j`.
pub fn tensor_algebras(a: &DgAlgebra, b: &DgAlgebra) -> DgAlgebra {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let idx = |i: usize, j: usize| i * nb + j;
    let mut labels = Vec::with_capacity(n);
    let mut degrees = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nb {
            labels.push(format!("{}⊗{}", a.labels[i], b.labels[j]));
            degrees.push(a.degrees[i] + b.degrees[j]);
        }
    }
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..na {
        for j in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let s = sign(b.degrees[j] as i64 * a.degrees[i2] as i64);
                    let mut terms = Vec::new();
                    for (k, c) in &a.table[i][i2] {
                        for (l, c2) in &b.table[j][j2] {
                            terms.push((idx(*k, *l), c * c2 * &s));
                        }
                    }
                    table[idx(i, j)][idx(i2, j2)] = normalize(terms);
                }
            }
        }
    }
    let mut unit = zero_vec(n);
    for i in 0..na {
        for j in 0..nb {
            unit[idx(i, j)] = &a.unit[i] * &b.unit[j];
        }
    }
    let mut diff = Matrix::zeros(n, n);
    for i in 0..na {
        for j in 0..nb {
            for k in 0..na {
                let v = a.diff.get(k, i);
                if !v.is_zero() {
                    diff.add_at(idx(k, j), idx(i, j), v);
                }
            }
            let s = sign(a.degrees[i] as i64);
            for l in 0..nb {
                let v = b.diff.get(l, j);
                if !v.is_zero() {
                    diff.add_at(idx(i, l), idx(i, j), &(v * &s));
                }
            }
        }
    }
    let mut idempotents = Vec::new();
    for e in &a.idempotents {
        for f in &b.idempotents {
            idempotents.push(tensor_elements(e, f));
        }
    }
    DgAlgebra {
        name: format!("{}⊗{}", paren(&a.name), paren(&b.name)),
        labels,
        degrees,
        table,
        unit,
        diff,
        idempotents,
        degree_zero: a.degree_zero && b.degree_zero,
    }
}

fn paren(name: &str) -> String {
    if name.contains('⊗') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

/// Coordinates of `x ⊗ y` in the tensor basis.
pub fn tensor_elements(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut out = zero_vec(x.len() * y.len());
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                out[i * y.len() + j] = a * b;
            }
        }
    }
    out
}

/// `(A^e, ^eA) = (A ⊗ A^op, A^op ⊗ A)`.
pub fn enveloping(a: &DgAlgebra) -> (DgAlgebra, DgAlgebra) {
    let op = opposite(a);
    (tensor_algebras(a, &op), tensor_algebras(&op, a))
}

/// Matrix of `x ⊗ y ↦ (-1)^{|x||y|} y ⊗ x` from `X ⊗ Y` to `Y ⊗ X`.
pub fn swap_matrix(x: &DgAlgebra, y: &DgAlgebra) -> Matrix {
    let (nx, ny) = (x.dim(), y.dim());
    let mut m = Matrix::zeros(nx * ny, nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            m.set(j * nx + i, i * ny + j, sign(x.degrees[i] as i64 * y.degrees[j] as i64));
        }
    }
    m
}

/// Checks that `phi` (columns = images of basis vectors of `a`) is an
/// isomorphism of dg algebras `a -> b`.
pub fn is_algebra_isomorphism(a: &DgAlgebra, b: &DgAlgebra, phi: &Matrix) -> bool {
    let n = a.dim();
    if phi.shape() != (b.dim(), n) || phi.inverse().is_none() {
        return false;
    }
    if phi.mul_vec(&a.unit) != b.unit {
        return false;
    }
    for i in 0..n {
        let pi = phi.column(i);
        if a.degrees[i] != 0 || b.degrees.iter().any(|&d| d != 0) {
            for (k, c) in pi.iter().enumerate() {
                if !c.is_zero() && b.degrees[k] != a.degrees[i] {
                    return false;
                }
            }
        }
        for j in 0..n {
            let lhs = phi.mul_vec(&a.basis_product(i, j));
            let rhs = b.mul(&pi, &phi.column(j));
            if lhs != rhs {
                return false;
            }
        }
    }
    &(phi * &a.diff) == &(&b.diff * phi)
}

/// Shared handle used throughout the module layer.
pub type Alg = Arc<DgAlgebra>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::q;

    #[test]
    fn ground_field_is_valid() {
        let k = catalog::ground_field();
        assert_eq!(k.dim(), 1);
        assert!(k.is_degree_zero());
    }

    #[test]
    fn a2_and_m2_validate() {
        let a2 = catalog::path_algebra_a(2);
        assert_eq!(a2.dim(), 3);
        let m2 = catalog::matrix_algebra(2);
        assert_eq!(m2.dim(), 4);
    }

    #[test]
    fn broken_associativity_is_reported() {
        let mut data = catalog::path_algebra_a_data(2);
        // e1 * e1 = e2 breaks unit and associativity; the unit check runs first.
        data.mult.retain(|t| !(t.0 == 0 && t.1 == 0));
        data.mult.push((0, 0, 1, q(1)));
        assert!(validate_algebra(data).is_err());

        let mut data = catalog::path_algebra_a_data(2);
        data.mult.push((9, 0, 0, q(1)));
        assert!(matches!(validate_algebra(data), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn leibniz_violation_is_reported() {
        // k[x]/x^2 with |x| = 1 and d(1) = x breaks d(1·1) = d1·1 + 1·d1.
        let data = AlgebraData {
            name: "bad".into(),
            labels: vec!["1".into(), "x".into()],
            degrees: vec![0, 1],
            mult: vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))],
            unit: vec![q(1), q(0)],
            diff: vec![(0, 1, q(1))],
            idempotents: vec![],
        };
        assert_eq!(validate_algebra(data).unwrap_err(), Error::LeibnizViolation(0, 0));
    }

    #[test]
    fn opposite_is_involution() {
        for a in [catalog::path_algebra_a(2), catalog::matrix_algebra(2), catalog::graded_dual_numbers()] {
            assert_eq!(opposite(&opposite(&a)), a);
            assert_eq!(opposite(&opposite(&a)).name(), a.name());
        }
        let k = catalog::ground_field();
        assert_eq!(opposite(&k), k);
    }

    #[test]
    fn opposite_m2_is_transpose() {
        let m2 = catalog::matrix_algebra(2);
        let op = opposite(&m2);
        // E_ij -> E_ji, basis index 2i + j.
        let mut t = Matrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                t.set(2 * j + i, 2 * i + j, q(1));
            }
        }
        assert!(is_algebra_isomorphism(&op, &m2, &t));
        assert!(!is_algebra_isomorphism(&op, &m2, &Matrix::identity(4)));
    }

    #[test]
    fn opposite_a2_reverses_arrow() {
        let a2 = catalog::path_algebra_a(2);
        let op = opposite(&a2);
        let (e1, e2, al) = (a2.basis(0), a2.basis(1), a2.basis(2));
        assert_eq!(op.mul(&al, &e1), al);
        assert_eq!(op.mul(&e2, &al), al);
        assert_eq!(op.mul(&e1, &al), a2.zero());
    }

    #[test]
    fn tensors_and_envelopes() {
        let k = catalog::ground_field();
        let a2 = catalog::path_algebra_a(2);
        assert_eq!(tensor_algebras(&k, &a2), a2);
        assert_eq!(tensor_algebras(&a2, &catalog::product_field(2)).dim(), 6);
        let m2a2 = tensor_algebras(&catalog::matrix_algebra(2), &a2);
        validate_algebra(AlgebraData {
            name: "re".into(),
            labels: m2a2.labels().to_vec(),
            degrees: m2a2.degrees().to_vec(),
            mult: (0..12)
                .flat_map(|i| (0..12).map(move |j| (i, j)))
                .flat_map(|(i, j)| m2a2.product_terms(i, j).iter().map(move |(k, c)| (i, j, *k, c.clone())))
                .collect(),
            unit: m2a2.unit().to_vec(),
            diff: vec![],
            idempotents: vec![],
        })
        .unwrap();
        let (ae, ea) = enveloping(&a2);
        assert_eq!((ae.dim(), ea.dim()), (9, 9));
        assert!(is_algebra_isomorphism(&ae, &ea, &swap_matrix(&a2, &opposite(&a2))));
        let (ke, _) = enveloping(&k);
        assert_eq!(ke, k);
    }

    #[test]
    fn graded_tensor_is_valid() {
        let g = catalog::graded_dual_numbers();
        assert!(!g.is_degree_zero());
        let t = tensor_algebras(&g, &opposite(&g));
        t.check().unwrap();
        assert!(t.is_proper());
    }
}
