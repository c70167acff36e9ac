//! Finitely generated semi-free dg modules over degree-0 algebras, their
//! maps, perfect modules (semi-free carrier + exact idempotent) and finite
//! modules given by explicit action matrices.
//!
//! Conventions. A generator `g_j` with shift `s_j` sits in degree `-s_j`.
//! Module elements are left combinations `Σ a_j g_j`. The twist entry
//! `δ[i][j]` is the coefficient of `g_i` in `D(g_j)`; a map matrix entry
//! `F[i][j]` is the coefficient of the target generator `g_i` in `f(g_j)`.
//! Composition is therefore `(h∘f)_{kj} = Σ_i F_{ij} H_{ki}` with the
//! products taken in `A`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{tensor_elements, Alg, DgAlgebra};
use crate::complex::{Complex, Layout};
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, is_zero_vec, q, sign, zero_vec, Matrix, Rational};

pub type Elem = Vec<Rational>;

/// Matrix with entries in an algebra, stored densely.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    dim: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for AlgMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgMatrix({}x{} over dim {})", self.rows, self.cols, self.dim)
    }
}

impl AlgMatrix {
    pub fn zeros(rows: usize, cols: usize, dim: usize) -> Self {
        AlgMatrix { rows, cols, dim, data: vec![zero_vec(dim); rows * cols] }
    }

    /// Diagonal matrix with `x` on the diagonal.
    pub fn diagonal(n: usize, x: &[Rational]) -> Self {
        let mut m = Self::zeros(n, n, x.len());
        for i in 0..n {
            m.set(i, i, x.to_vec());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, dim: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols || data.iter().any(|e| e.len() != dim) {
            return Err(Error::DimensionMismatch("algebra matrix entries".into()));
        }
        Ok(AlgMatrix { rows, cols, dim, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn algebra_dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        assert_eq!(x.len(), self.dim);
        self.data[i * self.cols + j] = x;
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: &Rational, x: &[Rational]) {
        add_scaled(&mut self.data[i * self.cols + j], c, x);
    }

    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        is_zero_vec(self.get(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| is_zero_vec(e))
    }

    /// Off-diagonal entries all vanish.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.is_zero_at(i, j)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let data = self.data.iter().map(|e| e.iter().map(|x| x * c).collect()).collect();
        AlgMatrix { data, ..*self }
    }

    pub fn add(&self, other: &AlgMatrix) -> Result<Self> {
        if (self.rows, self.cols, self.dim) != (other.rows, other.cols, other.dim) {
            return Err(Error::DimensionMismatch("algebra matrix sum".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            add_scaled(a, &q(1), b);
        }
        Ok(out)
    }

    pub fn map_entries(&self, dim: usize, f: impl Fn(&[Rational]) -> Elem) -> Self {
        AlgMatrix { rows: self.rows, cols: self.cols, dim, data: self.data.iter().map(|e| f(e)).collect() }
    }

    /// Matrix of `h∘f` where `self = F` and `h = H`: `(h∘f)_{kj} = Σ_i F_ij H_ki`.
    pub fn then(&self, h: &AlgMatrix, a: &DgAlgebra) -> Result<Self> {
        if h.cols != self.rows {
            return Err(Error::DimensionMismatch("composition of module maps".into()));
        }
        let mut out = Self::zeros(h.rows, self.cols, self.dim);
        for k in 0..h.rows {
            for i in 0..self.rows {
                if h.is_zero_at(k, i) {
                    continue;
                }
                for j in 0..self.cols {
                    if self.is_zero_at(i, j) {
                        continue;
                    }
                    let p = a.mul(self.get(i, j), h.get(k, i));
                    out.add_at(k, j, &q(1), &p);
                }
            }
        }
        Ok(out)
    }
}

/// Semi-free module: free generators with shifts and a strictly
/// lower-triangular twist. Equality ignores generator labels.
#[derive(Clone)]
pub struct SemiFreeModule {
    algebra: Alg,
    labels: Vec<String>,
    shifts: Vec<i32>,
    twist: AlgMatrix,
}

impl PartialEq for SemiFreeModule {
    fn eq(&self, other: &Self) -> bool {
        self.shifts == other.shifts && self.twist == other.twist && *self.algebra == *other.algebra
    }
}

impl Eq for SemiFreeModule {}

impl fmt::Debug for SemiFreeModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SemiFreeModule(over {}, shifts {:?})", self.algebra.name(), self.shifts)
    }
}

impl SemiFreeModule {
    pub fn new(algebra: Alg, labels: Vec<String>, shifts: Vec<i32>, twist: AlgMatrix) -> Result<Self> {
        algebra.require_degree_zero()?;
        let n = shifts.len();
        if labels.len() != n || twist.rows != n || twist.cols != n || twist.dim != algebra.dim() {
            return Err(Error::DimensionMismatch("semi-free module data".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if twist.is_zero_at(i, j) {
                    continue;
                }
                if i <= j {
                    return Err(Error::NotTriangular(i, j));
                }
                if shifts[i] != shifts[j] - 1 {
                    return Err(Error::ShiftMismatch(i, j));
                }
            }
        }
        let d2 = twist.then(&twist, &algebra)?;
        for j in 0..n {
            for k in 0..n {
                if !d2.is_zero_at(k, j) {
                    return Err(Error::DifferentialSquare(-shifts[j]));
                }
            }
        }
        Ok(SemiFreeModule { algebra, labels, shifts, twist })
    }

    pub fn free(algebra: Alg, shifts: Vec<i32>) -> Result<Self> {
        let n = shifts.len();
        let dim = algebra.dim();
        let labels = (0..n).map(|j| format!("g{j}")).collect();
        Self::new(algebra, labels, shifts, AlgMatrix::zeros(n, n, dim))
    }

    pub fn algebra(&self) -> &Alg {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn twist(&self) -> &AlgMatrix {
        &self.twist
    }

    pub fn generator_degree(&self, j: usize) -> i32 {
        -self.shifts[j]
    }
}

/// Morphism of semi-free modules of a fixed degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap {
    pub source: Arc<SemiFreeModule>,
    pub target: Arc<SemiFreeModule>,
    pub degree: i32,
    pub matrix: AlgMatrix,
}

fn same_module(a: &Arc<SemiFreeModule>, b: &Arc<SemiFreeModule>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ModuleMap {
    pub fn new(source: Arc<SemiFreeModule>, target: Arc<SemiFreeModule>, degree: i32, matrix: AlgMatrix) -> Result<Self> {
        if *source.algebra != *target.algebra {
            return Err(Error::AlgebraMismatch("map between modules over different algebras".into()));
        }
        if matrix.rows != target.rank() || matrix.cols != source.rank() || matrix.dim != source.algebra.dim() {
            return Err(Error::DimensionMismatch("module map matrix shape".into()));
        }
        for i in 0..target.rank() {
            for j in 0..source.rank() {
                if !matrix.is_zero_at(i, j) && target.shifts[i] != source.shifts[j] - degree {
                    return Err(Error::WrongDegree { expected: degree, got: source.shifts[j] - target.shifts[i] });
                }
            }
        }
        Ok(ModuleMap { source, target, degree, matrix })
    }

    pub fn identity(m: &Arc<SemiFreeModule>) -> Self {
        let mat = AlgMatrix::diagonal(m.rank(), m.algebra.unit());
        ModuleMap { source: m.clone(), target: m.clone(), degree: 0, matrix: mat }
    }

    pub fn zero(source: &Arc<SemiFreeModule>, target: &Arc<SemiFreeModule>, degree: i32) -> Self {
        let mat = AlgMatrix::zeros(target.rank(), source.rank(), source.algebra.dim());
        ModuleMap { source: source.clone(), target: target.clone(), degree, matrix: mat }
    }

    pub fn is_endomorphism(&self) -> bool {
        same_module(&self.source, &self.target)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if !same_module(&other.target, &self.source) {
            return Err(Error::DimensionMismatch("composition of incompatible module maps".into()));
        }
        let m = other.matrix.then(&self.matrix, &self.source.algebra)?;
        Ok(ModuleMap { source: other.source.clone(), target: self.target.clone(), degree: self.degree + other.degree, matrix: m })
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.degree != other.degree || !same_module(&self.source, &other.source) || !same_module(&self.target, &other.target) {
            return Err(Error::DimensionMismatch("sum of incompatible module maps".into()));
        }
        Ok(ModuleMap { matrix: self.matrix.add(&other.matrix)?, ..self.clone() })
    }

    pub fn scale(&self, c: &Rational) -> ModuleMap {
        ModuleMap { matrix: self.matrix.scale(c), ..self.clone() }
    }

    /// Hom-complex differential `d(f) = D'∘f - (-1)^n f∘D`.
    pub fn boundary(&self) -> ModuleMap {
        let a = &self.source.algebra;
        let left = self.matrix.then(&self.target.twist, a).expect("shapes");
        let right = self.source.twist.then(&self.matrix, a).expect("shapes");
        let m = left.add(&right.scale(&-sign(self.degree as i64))).expect("shapes");
        ModuleMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree + 1, matrix: m }
    }

    pub fn is_closed(&self) -> bool {
        self.boundary().matrix.is_zero()
    }
}

/// Homotopy direct summand of a semi-free module, cut out by an exact
/// closed degree-0 idempotent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PerfectModule {
    pub carrier: Arc<SemiFreeModule>,
    idempotent: Option<AlgMatrix>,
}

impl PerfectModule {
    pub fn new(carrier: SemiFreeModule, idempotent: Option<AlgMatrix>) -> Result<Self> {
        Self::from_arc(Arc::new(carrier), idempotent)
    }

    pub fn from_arc(carrier: Arc<SemiFreeModule>, idempotent: Option<AlgMatrix>) -> Result<Self> {
        if let Some(e) = &idempotent {
            let map = ModuleMap::new(carrier.clone(), carrier.clone(), 0, e.clone()).map_err(|_| Error::BadIdempotent)?;
            if !map.is_closed() || map.compose(&map)? != map {
                return Err(Error::BadIdempotent);
            }
        }
        Ok(PerfectModule { carrier, idempotent })
    }

    pub fn free(algebra: Alg, shifts: Vec<i32>) -> Result<Self> {
        Self::new(SemiFreeModule::free(algebra, shifts)?, None)
    }

    /// `A e` placed with generator shift `shift`.
    pub fn projective(algebra: Alg, e: &[Rational], shift: i32) -> Result<Self> {
        let m = SemiFreeModule::free(algebra, vec![shift])?;
        Self::new(m, Some(AlgMatrix::diagonal(1, e)))
    }

    pub fn algebra(&self) -> &Alg {
        &self.carrier.algebra
    }

    pub fn has_idempotent(&self) -> bool {
        self.idempotent.is_some()
    }

    pub fn idempotent_matrix(&self) -> AlgMatrix {
        match &self.idempotent {
            Some(e) => e.clone(),
            None => AlgMatrix::diagonal(self.carrier.rank(), self.carrier.algebra.unit()),
        }
    }

    pub fn idempotent_map(&self) -> ModuleMap {
        ModuleMap { source: self.carrier.clone(), target: self.carrier.clone(), degree: 0, matrix: self.idempotent_matrix() }
    }

    /// The identity of the summand, i.e. the idempotent.
    pub fn identity(&self) -> ModuleMap {
        self.idempotent_map()
    }

    /// `e_target ∘ f ∘ e_source`.
    pub fn sandwich(f: &ModuleMap, source: &PerfectModule, target: &PerfectModule) -> Result<ModuleMap> {
        target.idempotent_map().compose(&f.compose(&source.idempotent_map())?)
    }

    pub fn is_compatible(f: &ModuleMap, source: &PerfectModule, target: &PerfectModule) -> bool {
        Self::sandwich(f, source, target).map(|g| g == *f).unwrap_or(false)
    }
}

/// `M[n]`: shifts raised by `n`, twist multiplied by `(-1)^n`.
pub fn shift_module(m: &PerfectModule, n: i32) -> PerfectModule {
    let c = &m.carrier;
    let carrier = SemiFreeModule {
        algebra: c.algebra.clone(),
        labels: c.labels.clone(),
        shifts: c.shifts.iter().map(|s| s + n).collect(),
        twist: c.twist.scale(&sign(n as i64)),
    };
    PerfectModule { carrier: Arc::new(carrier), idempotent: m.idempotent.clone() }
}

fn block_diag(a: &AlgMatrix, b: &AlgMatrix) -> AlgMatrix {
    let mut out = AlgMatrix::zeros(a.rows + b.rows, a.cols + b.cols, a.dim);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
        }
    }
    out
}

pub fn direct_sum(m: &PerfectModule, n: &PerfectModule) -> Result<PerfectModule> {
    let (a, b) = (&m.carrier, &n.carrier);
    if *a.algebra != *b.algebra {
        return Err(Error::AlgebraMismatch("direct sum".into()));
    }
    let carrier = SemiFreeModule {
        algebra: a.algebra.clone(),
        labels: a.labels.iter().chain(&b.labels).cloned().collect(),
        shifts: a.shifts.iter().chain(&b.shifts).copied().collect(),
        twist: block_diag(&a.twist, &b.twist),
    };
    let idem = if m.idempotent.is_none() && n.idempotent.is_none() {
        None
    } else {
        Some(block_diag(&m.idempotent_matrix(), &n.idempotent_matrix()))
    };
    Ok(PerfectModule { carrier: Arc::new(carrier), idempotent: idem })
}

/// `f ⊕ g` on `direct_sum(source_f, source_g)`.
pub fn direct_sum_maps(f: &ModuleMap, g: &ModuleMap, source: &PerfectModule, target: &PerfectModule) -> Result<ModuleMap> {
    if f.degree != g.degree {
        return Err(Error::WrongDegree { expected: f.degree, got: g.degree });
    }
    ModuleMap::new(source.carrier.clone(), target.carrier.clone(), f.degree, block_diag(&f.matrix, &g.matrix))
}

/// `cone(p) = (L[1] ⊕ M, [[-D_L, 0], [p, D_M]])` for a closed degree-0
/// map `p: L → M` compatible with the idempotents.
pub fn cone_module(p: &ModuleMap, source: &PerfectModule, target: &PerfectModule) -> Result<PerfectModule> {
    if p.degree != 0 {
        return Err(Error::WrongDegree { expected: 0, got: p.degree });
    }
    if !p.is_closed() {
        return Err(Error::NotClosed("cone of a non-closed map".into()));
    }
    if !same_module(&p.source, &source.carrier) || !same_module(&p.target, &target.carrier) {
        return Err(Error::DimensionMismatch("cone: map does not match modules".into()));
    }
    if !PerfectModule::is_compatible(p, source, target) {
        return Err(Error::IdempotentIncompatible);
    }
    let (l, m) = (&p.source, &p.target);
    let (nl, nm) = (l.rank(), m.rank());
    let mut twist = AlgMatrix::zeros(nl + nm, nl + nm, l.algebra.dim());
    for i in 0..nl {
        for j in 0..nl {
            twist.set(i, j, l.twist.get(i, j).iter().map(|x| -x).collect());
        }
    }
    for i in 0..nm {
        for j in 0..nl {
            twist.set(nl + i, j, p.matrix.get(i, j).clone());
        }
        for j in 0..nm {
            twist.set(nl + i, nl + j, m.twist.get(i, j).clone());
        }
    }
    let labels = l.labels.iter().map(|s| format!("{s}[1]")).chain(m.labels.iter().cloned()).collect();
    let shifts = l.shifts.iter().map(|s| s + 1).chain(m.shifts.iter().copied()).collect();
    let carrier = SemiFreeModule::new(l.algebra.clone(), labels, shifts, twist)?;
    let idem = if source.idempotent.is_none() && target.idempotent.is_none() {
        None
    } else {
        Some(block_diag(&source.idempotent_matrix(), &target.idempotent_matrix()))
    };
    PerfectModule::new(carrier, idem)
}

/// External tensor `M ⊠ N` over `A ⊗ B`; generators `(j, l)` in
/// lexicographic order, `D(g⊠h) = Dg⊠h + (-1)^{|g|} g⊠Dh`.
pub fn external_tensor(m: &PerfectModule, n: &PerfectModule, ab: &Alg) -> Result<PerfectModule> {
    let (x, y) = (&m.carrier, &n.carrier);
    let (ra, rb) = (x.rank(), y.rank());
    let idx = |j: usize, l: usize| j * rb + l;
    let dim = ab.dim();
    if dim != x.algebra.dim() * y.algebra.dim() {
        return Err(Error::AlgebraMismatch("external tensor algebra".into()));
    }
    let mut twist = AlgMatrix::zeros(ra * rb, ra * rb, dim);
    for j in 0..ra {
        for l in 0..rb {
            for i in 0..ra {
                if !x.twist.is_zero_at(i, j) {
                    twist.add_at(idx(i, l), idx(j, l), &q(1), &tensor_elements(x.twist.get(i, j), y.algebra.unit()));
                }
            }
            for k in 0..rb {
                if !y.twist.is_zero_at(k, l) {
                    let s = sign(x.shifts[j] as i64);
                    twist.add_at(idx(j, k), idx(j, l), &s, &tensor_elements(x.algebra.unit(), y.twist.get(k, l)));
                }
            }
        }
    }
    let mut labels = Vec::new();
    let mut shifts = Vec::new();
    for j in 0..ra {
        for l in 0..rb {
            labels.push(format!("{}⊠{}", x.labels[j], y.labels[l]));
            shifts.push(x.shifts[j] + y.shifts[l]);
        }
    }
    let carrier = SemiFreeModule::new(ab.clone(), labels, shifts, twist)?;
    let idem = if m.idempotent.is_none() && n.idempotent.is_none() {
        None
    } else {
        Some(external_matrix(&m.idempotent_matrix(), &n.idempotent_matrix(), &x.shifts, 0))
    };
    PerfectModule::new(carrier, idem)
}

/// Matrix of `f ⊠ g` with `(f⊠g)(x⊠y) = (-1)^{|g||x|} f(x) ⊠ g(y)`.
fn external_matrix(f: &AlgMatrix, g: &AlgMatrix, src_shifts: &[i32], g_degree: i32) -> AlgMatrix {
    let dim = f.dim * g.dim;
    let mut out = AlgMatrix::zeros(f.rows * g.rows, f.cols * g.cols, dim);
    for i in 0..f.rows {
        for j in 0..f.cols {
            if f.is_zero_at(i, j) {
                continue;
            }
            let s = sign(g_degree as i64 * src_shifts[j] as i64);
            for k in 0..g.rows {
                for l in 0..g.cols {
                    if !g.is_zero_at(k, l) {
                        out.add_at(i * g.rows + k, j * g.cols + l, &s, &tensor_elements(f.get(i, j), g.get(k, l)));
                    }
                }
            }
        }
    }
    out
}

pub fn external_tensor_maps(f: &ModuleMap, g: &ModuleMap, source: &PerfectModule, target: &PerfectModule) -> Result<ModuleMap> {
    let m = external_matrix(&f.matrix, &g.matrix, &f.source.shifts, g.degree);
    ModuleMap::new(source.carrier.clone(), target.carrier.clone(), f.degree + g.degree, m)
}

/// Transports a module along an algebra isomorphism `phi: A → B` (columns
/// are images of basis vectors).
pub fn transport(m: &PerfectModule, b: &Alg, phi: &Matrix) -> Result<PerfectModule> {
    let c = &m.carrier;
    let f = |x: &[Rational]| phi.mul_vec(x);
    let carrier = SemiFreeModule::new(b.clone(), c.labels.clone(), c.shifts.clone(), c.twist.map_entries(b.dim(), f))?;
    PerfectModule::new(carrier, m.idempotent.as_ref().map(|e| e.map_entries(b.dim(), f)))
}

pub fn transport_map(f: &ModuleMap, source: &PerfectModule, target: &PerfectModule, phi: &Matrix) -> Result<ModuleMap> {
    let dim = source.algebra().dim();
    ModuleMap::new(source.carrier.clone(), target.carrier.clone(), f.degree, f.matrix.map_entries(dim, |x| phi.mul_vec(x)))
}

/// Coordinates of `(1 ⊗ e_c) · x` in `A ⊗ C`, split as `Σ_{c''} y_{c''} ⊗ e_{c''}`.
fn left_factor_split(a: &DgAlgebra, c: &DgAlgebra, ac: &DgAlgebra, cb: usize, x: &[Rational]) -> Vec<Elem> {
    let (na, nc) = (a.dim(), c.dim());
    let y = ac.mul(&tensor_elements(a.unit(), &c.basis(cb)), x);
    let mut out = vec![zero_vec(na); nc];
    for (idx, v) in y.into_iter().enumerate() {
        if !v.is_zero() {
            out[idx % nc][idx / nc] = v;
        }
    }
    out
}

fn left_factor_matrix(m: &AlgMatrix, a: &DgAlgebra, c: &DgAlgebra, ac: &DgAlgebra) -> AlgMatrix {
    let nc = c.dim();
    let mut out = AlgMatrix::zeros(m.rows * nc, m.cols * nc, a.dim());
    for i in 0..m.rows {
        for j in 0..m.cols {
            if m.is_zero_at(i, j) {
                continue;
            }
            for cb in 0..nc {
                for (c2, y) in left_factor_split(a, c, ac, cb, m.get(i, j)).into_iter().enumerate() {
                    if !is_zero_vec(&y) {
                        out.add_at(i * nc + c2, j * nc + cb, &q(1), &y);
                    }
                }
            }
        }
    }
    out
}

/// Restriction of scalars along `A → A ⊗ C`, `a ↦ a ⊗ 1`. Generator
/// `(j, c)` is `(1 ⊗ e_c) g_j`.
pub fn restrict_to_left_factor(m: &PerfectModule, a: &Alg, c: &DgAlgebra) -> Result<PerfectModule> {
    let k = &m.carrier;
    let ac = &k.algebra;
    if ac.dim() != a.dim() * c.dim() {
        return Err(Error::AlgebraMismatch("restriction to a tensor factor".into()));
    }
    let nc = c.dim();
    let twist = left_factor_matrix(&k.twist, a, c, ac);
    let mut labels = Vec::new();
    let mut shifts = Vec::new();
    for j in 0..k.rank() {
        for cb in 0..nc {
            labels.push(format!("{}·{}", c.labels()[cb], k.labels[j]));
            shifts.push(k.shifts[j]);
        }
    }
    let carrier = SemiFreeModule::new(a.clone(), labels, shifts, twist)?;
    let idem = m.idempotent.as_ref().map(|e| left_factor_matrix(e, a, c, ac));
    PerfectModule::new(carrier, idem)
}

/// A module map `f` over `A ⊗ C` read on the restriction to `A`.
pub fn restrict_map_to_left_factor(f: &ModuleMap, source: &PerfectModule, target: &PerfectModule, c: &DgAlgebra) -> Result<ModuleMap> {
    let a = source.algebra().clone();
    let m = left_factor_matrix(&f.matrix, &a, c, &f.source.algebra);
    ModuleMap::new(source.carrier.clone(), target.carrier.clone(), f.degree, m)
}

/// Left action of `1 ⊗ x` (x ∈ C) on the restriction `r` of a module over
/// `A ⊗ C`; closed and `A`-linear since `A ⊗ 1` and `1 ⊗ C` commute.
pub fn left_factor_action(r: &PerfectModule, c: &DgAlgebra, x: &[Rational]) -> Result<ModuleMap> {
    let a = r.algebra();
    let nc = c.dim();
    let n = r.carrier.rank() / nc;
    let mut m = AlgMatrix::zeros(n * nc, n * nc, a.dim());
    for j in 0..n {
        for cb in 0..nc {
            let y = c.mul(x, &c.basis(cb));
            for (c2, v) in y.into_iter().enumerate() {
                if !v.is_zero() {
                    m.add_at(j * nc + c2, j * nc + cb, &v, a.unit());
                }
            }
        }
    }
    ModuleMap::new(r.carrier.clone(), r.carrier.clone(), 0, m)
}

/// Finite-dimensional module given by a flat basis with degrees, a
/// differential and left action matrices of the basis of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    pub algebra: Alg,
    pub degrees: Vec<i32>,
    pub d: Matrix,
    pub action: Vec<Matrix>,
}

impl FiniteModule {
    pub fn new(algebra: Alg, degrees: Vec<i32>, d: Matrix, action: Vec<Matrix>) -> Result<Self> {
        algebra.require_degree_zero()?;
        let n = degrees.len();
        if d.shape() != (n, n) || action.len() != algebra.dim() || action.iter().any(|m| m.shape() != (n, n)) {
            return Err(Error::DimensionMismatch("finite module data".into()));
        }
        let fm = FiniteModule { algebra, degrees, d, action };
        fm.check()?;
        Ok(fm)
    }

    fn check(&self) -> Result<()> {
        let a = &self.algebra;
        let n = self.dim();
        if !(&self.d * &self.d).is_zero() {
            return Err(Error::NotClosed("finite module differential squares to nonzero".into()));
        }
        if self.act(a.unit()) != Matrix::identity(n) {
            return Err(Error::UnitViolation(0));
        }
        for i in 0..a.dim() {
            if &self.action[i] * &self.d != &self.d * &self.action[i] {
                return Err(Error::NotClosed(format!("action of basis element {i} does not commute with d")));
            }
            for r in 0..n {
                for c in 0..n {
                    if !self.action[i].get(r, c).is_zero() && self.degrees[r] != self.degrees[c] {
                        return Err(Error::DegreeViolation(i, c));
                    }
                }
            }
            for j in 0..a.dim() {
                if &self.action[i] * &self.action[j] != self.act(&a.basis_product(i, j)) {
                    return Err(Error::AssociativityViolation(i, j, 0));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn act(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (b, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = &m + &self.action[b].scale(c);
            }
        }
        m
    }

    pub fn complex(&self) -> (Complex, Layout) {
        Complex::from_flat(&self.degrees, &self.d).expect("validated differential")
    }

    /// Restriction of scalars along an algebra map given on basis vectors.
    pub fn restrict_scalars(&self, b: &Alg, f: impl Fn(usize) -> Elem) -> Result<FiniteModule> {
        let action = (0..b.dim()).map(|i| self.act(&f(i))).collect();
        FiniteModule::new(b.clone(), self.degrees.clone(), self.d.clone(), action)
    }

    /// `A` as a module over itself by left multiplication.
    pub fn regular(a: &Alg) -> Result<FiniteModule> {
        let n = a.dim();
        let action = (0..n).map(|i| a.left_matrix(&a.basis(i))).collect();
        FiniteModule::new(a.clone(), vec![0; n], Matrix::zeros(n, n), action)
    }

    /// Linear dual `M^* = Hom_k(M, k)` as a module over `A^op`:
    /// `(φ·a)(m) = φ(a m)`; `d(φ) = -(-1)^{|φ|} φ∘d`.
    pub fn linear_dual(&self, op: &Alg) -> Result<FiniteModule> {
        let n = self.dim();
        let degrees: Vec<i32> = self.degrees.iter().map(|p| -p).collect();
        let mut d = self.d.transpose();
        for c in 0..n {
            let s = -sign(degrees[c] as i64);
            for r in 0..n {
                let v = d.get(r, c) * &s;
                d.set(r, c, v);
            }
        }
        let action = self.action.iter().map(|m| m.transpose()).collect();
        FiniteModule::new(op.clone(), degrees, d, action)
    }
}
