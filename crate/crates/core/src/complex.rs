//! Finitely supported cochain complexes of rational vector spaces.
//!
//! Conventions (cohomological, differential of degree +1):
//! - `M[n]^p = M^{n+p}` with differential `(-1)^n d`.
//! - `cone(p: L -> M)^n = L^{n+1} ⊕ M^n` with differential `[[-d_L, 0], [p, d_M]]`.
//! - `d(v ⊗ w) = dv ⊗ w + (-1)^{|v|} v ⊗ dw` and
//!   `(f ⊗ g)(v ⊗ w) = (-1)^{|g||v|} f(v) ⊗ g(w)`.
//! - `Hom^n(A, B) = ∏_p Hom(A^p, B^{p+n})`, `d(f) = d_B f - (-1)^n f d_A`.
//!
//! Direct sums and tensors order their bases by degree, then by source block,
//! then by source index, so every matrix here is reproducible.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, sign, Matrix, Rational};

/// Degree -> dimension, with zero dimensions dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    dims: BTreeMap<i32, usize>,
}

impl GradedSpace {
    pub fn new(dims: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let mut out = BTreeMap::new();
        for (p, d) in dims {
            if d > 0 {
                *out.entry(p).or_insert(0) += d;
            }
        }
        GradedSpace { dims: out }
    }

    pub fn dim(&self, p: i32) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|(&p, &d)| if p.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.dims.iter().map(|(&p, &d)| (p, d))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn as_map(&self) -> &BTreeMap<i32, usize> {
        &self.dims
    }
}

/// Where each vector of a flat (unsorted) basis lands in a graded basis.
#[derive(Clone, Debug)]
pub struct Layout {
    pub degrees: Vec<i32>,
    /// Index of the flat vector inside its degree.
    pub pos: Vec<usize>,
    pub dims: BTreeMap<i32, usize>,
}

impl Layout {
    pub fn new(degrees: &[i32]) -> Self {
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        let mut pos = Vec::with_capacity(degrees.len());
        for &p in degrees {
            let e = dims.entry(p).or_insert(0);
            pos.push(*e);
            *e += 1;
        }
        Layout { degrees: degrees.to_vec(), pos, dims }
    }

    pub fn dim(&self, p: i32) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Flat indices in degree `p`, ordered by position.
    pub fn indices_in(&self, p: i32) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).filter(|&i| self.degrees[i] == p).collect();
        v.sort_by_key(|&i| self.pos[i]);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    dims: BTreeMap<i32, usize>,
    /// `d^p : C^p -> C^{p+1}`, stored only where both ends are nonzero.
    diff: BTreeMap<i32, Matrix>,
}

impl Complex {
    pub fn zero() -> Self {
        Complex { dims: BTreeMap::new(), diff: BTreeMap::new() }
    }

    /// The ground field in degree 0.
    pub fn unit() -> Self {
        Self::concentrated(0, 1)
    }

    pub fn concentrated(p: i32, dim: usize) -> Self {
        Self::from_space(&GradedSpace::new([(p, dim)]))
    }

    /// Zero differential on the given space.
    pub fn from_space(space: &GradedSpace) -> Self {
        Complex { dims: space.dims.clone(), diff: BTreeMap::new() }
    }

    /// Builds a complex, checking matrix shapes. `d^2 = 0` is not checked here.
    pub fn new(
        dims: impl IntoIterator<Item = (i32, usize)>,
        diffs: impl IntoIterator<Item = (i32, Matrix)>,
    ) -> Result<Self> {
        let space = GradedSpace::new(dims);
        let mut c = Complex { dims: space.dims, diff: BTreeMap::new() };
        for (p, m) in diffs {
            let expect = (c.dim(p + 1), c.dim(p));
            if m.shape() != expect {
                return Err(Error::DimensionMismatch(format!(
                    "d^{p} has shape {:?}, expected {:?}",
                    m.shape(),
                    expect
                )));
            }
            if expect.0 > 0 && expect.1 > 0 && !m.is_zero() {
                c.diff.insert(p, m);
            }
        }
        Ok(c)
    }

    /// Groups a flat basis by degree; `d` acts on flat column vectors.
    pub fn from_flat(degrees: &[i32], d: &Matrix) -> Result<(Self, Layout)> {
        let layout = Layout::new(degrees);
        if d.shape() != (degrees.len(), degrees.len()) {
            return Err(Error::DimensionMismatch("flat differential shape".into()));
        }
        let mut diffs: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (&p, &dp) in &layout.dims {
            let dq = layout.dim(p + 1);
            if dq > 0 {
                diffs.insert(p, Matrix::zeros(dq, dp));
            }
        }
        for r in 0..degrees.len() {
            for c in 0..degrees.len() {
                let v = d.get(r, c);
                if v.is_zero() {
                    continue;
                }
                let (pr, pc) = (degrees[r], degrees[c]);
                if pr != pc + 1 {
                    return Err(Error::DimensionMismatch(format!(
                        "flat differential entry from degree {pc} to {pr}"
                    )));
                }
                diffs.get_mut(&pc).expect("block exists").set(layout.pos[r], layout.pos[c], v.clone());
            }
        }
        let c = Complex::new(layout.dims.clone(), diffs)?;
        Ok((c, layout))
    }

    pub fn dim(&self, p: i32) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn space(&self) -> GradedSpace {
        GradedSpace { dims: self.dims.clone() }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.dims.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.dims.keys().next_back().copied()
    }

    /// `d^p` as a `dim(p+1) x dim(p)` matrix (zero when not stored).
    pub fn d(&self, p: i32) -> Matrix {
        self.diff.get(&p).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(p + 1), self.dim(p)))
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (&p, m) in &self.diff {
            if let Some(next) = self.diff.get(&(p + 1)) {
                if !(next * m).is_zero() {
                    return Err(Error::DifferentialSquare(p));
                }
            }
        }
        Ok(())
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(cohomology(self)?.space().is_zero())
    }

    /// Flattened basis in degree order, with the full differential.
    pub fn flatten(&self) -> (Vec<i32>, Matrix) {
        let offsets = self.offsets();
        let n = self.total_dim();
        let mut degrees = Vec::with_capacity(n);
        for (&p, &d) in &self.dims {
            degrees.extend(std::iter::repeat(p).take(d));
        }
        let mut big = Matrix::zeros(n, n);
        for (&p, m) in &self.diff {
            big.set_block(offsets[&(p + 1)], offsets[&p], m);
        }
        (degrees, big)
    }

    pub fn offsets(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        let mut acc = 0;
        for (&p, &d) in &self.dims {
            out.insert(p, acc);
            acc += d;
        }
        out
    }
}

/// A graded map `f^p : M^p -> N^{p + degree}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    pub degree: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn new(
        source: &Complex,
        target: &Complex,
        degree: i32,
        blocks: impl IntoIterator<Item = (i32, Matrix)>,
    ) -> Result<Self> {
        let mut out = ChainMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks: BTreeMap::new(),
        };
        for (p, m) in blocks {
            let expect = (target.dim(p + degree), source.dim(p));
            if m.shape() != expect {
                return Err(Error::DimensionMismatch(format!(
                    "block {p} has shape {:?}, expected {:?}",
                    m.shape(),
                    expect
                )));
            }
            if !m.is_zero() {
                out.blocks.insert(p, m);
            }
        }
        Ok(out)
    }

    pub fn zero(source: &Complex, target: &Complex, degree: i32) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), degree, blocks: BTreeMap::new() }
    }

    pub fn identity(c: &Complex) -> Self {
        Self::scalar(c, &Rational::one())
    }

    pub fn scalar(c: &Complex, s: &Rational) -> Self {
        let blocks: Vec<(i32, Matrix)> = c.dims.iter().map(|(&p, &d)| (p, Matrix::scalar(d, s))).collect();
        Self::new(c, c, 0, blocks).expect("square blocks")
    }

    /// Builds a map from a matrix between flat bases laid out by `Layout`s.
    pub fn from_flat(
        source: &Complex,
        src: &Layout,
        target: &Complex,
        tgt: &Layout,
        degree: i32,
        m: &Matrix,
    ) -> Result<Self> {
        let mut blocks: BTreeMap<i32, Matrix> = BTreeMap::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if v.is_zero() {
                    continue;
                }
                let (pr, pc) = (tgt.degrees[r], src.degrees[c]);
                if pr != pc + degree {
                    return Err(Error::WrongDegree { expected: degree, got: pr - pc });
                }
                blocks
                    .entry(pc)
                    .or_insert_with(|| Matrix::zeros(target.dim(pr), source.dim(pc)))
                    .set(tgt.pos[r], src.pos[c], v.clone());
            }
        }
        Self::new(source, target, degree, blocks)
    }

    pub fn block(&self, p: i32) -> Matrix {
        self.blocks
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(p + self.degree), self.source.dim(p)))
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// The Hom-complex boundary `d_N f - (-1)^{|f|} f d_M`, as blocks.
    pub fn boundary(&self) -> Result<ChainMap> {
        let mut blocks = Vec::new();
        let lo = self.source.min_degree().unwrap_or(0) - 1;
        let hi = self.source.max_degree().unwrap_or(0) + 1;
        for p in lo..=hi {
            let left = &self.target.d(p + self.degree) * &self.block(p);
            let right = &self.block(p + 1) * &self.source.d(p);
            let b = &left - &right.scale(&sign(self.degree as i64));
            blocks.push((p, b));
        }
        ChainMap::new(&self.source, &self.target, self.degree + 1, blocks)
    }

    pub fn is_closed(&self) -> bool {
        self.boundary().map(|b| b.blocks.is_empty()).unwrap_or(false)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        let mut blocks = Vec::new();
        for (&p, m) in &other.blocks {
            let b = &self.block(p + other.degree) * m;
            blocks.push((p, b));
        }
        ChainMap::new(&other.source, &self.target, self.degree + other.degree, blocks)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::DimensionMismatch("sum of incompatible maps".into()));
        }
        let mut keys: Vec<i32> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let blocks: Vec<(i32, Matrix)> = keys.into_iter().map(|p| (p, &self.block(p) + &other.block(p))).collect();
        ChainMap::new(&self.source, &self.target, self.degree, blocks)
    }

    pub fn scale(&self, c: &Rational) -> ChainMap {
        let blocks: Vec<(i32, Matrix)> = self.blocks.iter().map(|(&p, m)| (p, m.scale(c))).collect();
        ChainMap::new(&self.source, &self.target, self.degree, blocks).expect("same shapes")
    }

    /// Full matrix between flattened bases.
    pub fn flatten(&self) -> Matrix {
        let so = self.source.offsets();
        let to = self.target.offsets();
        let mut big = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (&p, m) in &self.blocks {
            big.set_block(to[&(p + self.degree)], so[&p], m);
        }
        big
    }

    fn require_closed_endo(&self) -> Result<()> {
        if !self.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        if self.degree != 0 {
            return Err(Error::WrongDegree { expected: 0, got: self.degree });
        }
        if !self.is_closed() {
            return Err(Error::NotClosed("endomorphism".into()));
        }
        Ok(())
    }
}

/// Shift by `n`: `c[n]^p = c^{n+p}`, differential `(-1)^n d`.
pub fn shift(c: &Complex, n: i32) -> Complex {
    let dims: Vec<(i32, usize)> = c.dims.iter().map(|(&p, &d)| (p - n, d)).collect();
    let s = sign(n as i64);
    let diffs: Vec<(i32, Matrix)> = c.diff.iter().map(|(&p, m)| (p - n, m.scale(&s))).collect();
    Complex::new(dims, diffs).expect("shift preserves shapes")
}

/// Shift of a degree-zero map (no sign).
pub fn shift_map(f: &ChainMap, n: i32) -> ChainMap {
    let blocks: Vec<(i32, Matrix)> = f.blocks.iter().map(|(&p, m)| (p - n, m.clone())).collect();
    ChainMap::new(&shift(&f.source, n), &shift(&f.target, n), f.degree, blocks).expect("shapes")
}

/// Cone of a closed degree-zero map, with `r: cone -> L[1]` and `q: M -> cone`.
pub fn cone(p: &ChainMap) -> Result<(Complex, ChainMap, ChainMap)> {
    if p.degree != 0 {
        return Err(Error::WrongDegree { expected: 0, got: p.degree });
    }
    if !p.is_closed() {
        return Err(Error::NotClosed("cone of a non-closed map".into()));
    }
    let (l, m) = (&p.source, &p.target);
    let lo = l.min_degree().map(|x| x - 1).into_iter().chain(m.min_degree()).min();
    let hi = l.max_degree().map(|x| x - 1).into_iter().chain(m.max_degree()).max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        let z = Complex::zero();
        return Ok((z.clone(), ChainMap::zero(&z, &shift(l, 1), 0), ChainMap::zero(m, &z, 0)));
    };
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let (ln, mn) = (l.dim(n + 1), m.dim(n));
        dims.push((n, ln + mn));
        let (ln1, mn1) = (l.dim(n + 2), m.dim(n + 1));
        let mut d = Matrix::zeros(ln1 + mn1, ln + mn);
        d.set_block(0, 0, &-&l.d(n + 1));
        d.set_block(ln1, 0, &p.block(n + 1));
        d.set_block(ln1, ln, &m.d(n));
        diffs.push((n, d));
    }
    let c = Complex::new(dims, diffs)?;
    let l1 = shift(l, 1);
    let mut rb = Vec::new();
    let mut qb = Vec::new();
    for n in lo..=hi {
        let (ln, mn) = (l.dim(n + 1), m.dim(n));
        let mut r = Matrix::zeros(ln, ln + mn);
        r.set_block(0, 0, &Matrix::identity(ln));
        rb.push((n, r));
        let mut qm = Matrix::zeros(ln + mn, mn);
        qm.set_block(ln, 0, &Matrix::identity(mn));
        qb.push((n, qm));
    }
    let r = ChainMap::new(&c, &l1, 0, rb)?;
    let q = ChainMap::new(m, &c, 0, qb)?;
    Ok((c, r, q))
}

/// Cohomology in one degree: representatives of a basis and the projection
/// from cycles onto their coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyDegree {
    pub degree: i32,
    /// `dim C^p x h`, columns are cycle representatives.
    pub representatives: Matrix,
    /// `h x dim C^p`; exact on cycles, kills boundaries.
    pub projection: Matrix,
}

impl CohomologyDegree {
    pub fn dim(&self) -> usize {
        self.representatives.cols()
    }
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degrees: BTreeMap<i32, CohomologyDegree>,
}

impl Cohomology {
    pub fn space(&self) -> GradedSpace {
        GradedSpace::new(self.degrees.iter().map(|(&p, h)| (p, h.dim())))
    }

    pub fn dim(&self, p: i32) -> usize {
        self.degrees.get(&p).map_or(0, CohomologyDegree::dim)
    }

    /// Matrix of `H^p(f)` for a closed map of degree zero.
    pub fn induced(&self, target: &Cohomology, f: &ChainMap, p: i32) -> Matrix {
        let (Some(hs), Some(ht)) = (self.degrees.get(&p), target.degrees.get(&p)) else {
            return Matrix::zeros(target.dim(p), self.dim(p));
        };
        &(&ht.projection * &f.block(p)) * &hs.representatives
    }
}

pub fn cohomology(c: &Complex) -> Result<Cohomology> {
    c.check_square_zero()?;
    let mut degrees = BTreeMap::new();
    for (&p, &n) in &c.dims {
        let cycles = c.d(p).kernel();
        let boundaries = c.d(p - 1).image();
        // Extend a boundary basis by cycle columns, first pivots first.
        let stacked = boundaries.hstack(&cycles);
        let (_, pivots) = stacked.rref();
        let b = boundaries.cols();
        let chosen: Vec<usize> = pivots.iter().filter(|&&i| i >= b).map(|&i| i - b).collect();
        if chosen.is_empty() {
            continue;
        }
        let reps = cycles.select_columns(&chosen);
        let basis = boundaries.hstack(&reps);
        // Complete to a basis of C^p with standard vectors and invert.
        let (_, piv2) = basis.hstack(&Matrix::identity(n)).rref();
        let extra: Vec<usize> =
            piv2.iter().filter(|&&i| i >= basis.cols()).map(|&i| i - basis.cols()).collect();
        let full = basis.hstack(&Matrix::identity(n).select_columns(&extra));
        let inv = full.inverse().expect("completed basis is invertible");
        let rows: Vec<usize> = (b..b + reps.cols()).collect();
        let projection = inv.select_rows(&rows);
        degrees.insert(p, CohomologyDegree { degree: p, representatives: reps, projection });
    }
    Ok(Cohomology { degrees })
}

/// Tensor product with Koszul signs; see module docs for ordering.
pub fn tensor(a: &Complex, b: &Complex) -> Complex {
    tensor_with_offsets(a, b).0
}

type PairOffsets = BTreeMap<(i32, i32), usize>;

fn tensor_with_offsets(a: &Complex, b: &Complex) -> (Complex, PairOffsets) {
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut offsets = BTreeMap::new();
    let mut pairs: Vec<(i32, i32)> =
        a.dims.keys().flat_map(|&p| b.dims.keys().map(move |&q| (p, q))).collect();
    pairs.sort_by_key(|&(p, q)| (p + q, p));
    for &(p, q) in &pairs {
        let e = dims.entry(p + q).or_insert(0);
        offsets.insert((p, q), *e);
        *e += a.dim(p) * b.dim(q);
    }
    let mut diffs: BTreeMap<i32, Matrix> = BTreeMap::new();
    for &(p, q) in &pairs {
        let n = p + q;
        if dims.get(&(n + 1)).copied().unwrap_or(0) == 0 {
            continue;
        }
        let d = diffs.entry(n).or_insert_with(|| Matrix::zeros(dims[&(n + 1)], dims[&n]));
        let col0 = offsets[&(p, q)];
        if let Some(&row0) = offsets.get(&(p + 1, q)) {
            let blk = a.d(p).kron(&Matrix::identity(b.dim(q)));
            d.set_block(row0, col0, &blk);
        }
        if let Some(&row0) = offsets.get(&(p, q + 1)) {
            let blk = Matrix::identity(a.dim(p)).kron(&b.d(q)).scale(&sign(p as i64));
            d.set_block(row0, col0, &blk);
        }
    }
    (Complex::new(dims, diffs).expect("tensor shapes"), offsets)
}

/// `(f ⊗ g)(v ⊗ w) = (-1)^{|g||v|} f(v) ⊗ g(w)`.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let (src, so) = tensor_with_offsets(&f.source, &g.source);
    let (tgt, to) = tensor_with_offsets(&f.target, &g.target);
    let mut blocks: BTreeMap<i32, Matrix> = BTreeMap::new();
    for (&(p, q), &c0) in &so {
        let Some(&r0) = to.get(&(p + f.degree, q + g.degree)) else { continue };
        let n = p + q;
        let blk = f.block(p).kron(&g.block(q)).scale(&sign(g.degree as i64 * p as i64));
        let deg = f.degree + g.degree;
        blocks
            .entry(n)
            .or_insert_with(|| Matrix::zeros(tgt.dim(n + deg), src.dim(n)))
            .set_block(r0, c0, &blk);
    }
    ChainMap::new(&src, &tgt, f.degree + g.degree, blocks)
}

/// Range of Hom degrees with possibly nonzero components.
fn hom_range(a: &Complex, b: &Complex) -> Option<(i32, i32)> {
    Some((b.min_degree()? - a.max_degree()?, b.max_degree()? - a.min_degree()?))
}

/// Coordinates in `Hom^n(a, b)`: blocks ordered by source degree `p`, each
/// `dim b^{p+n} x dim a^p` matrix flattened row-major.
pub fn hom_offsets(a: &Complex, b: &Complex, n: i32) -> (BTreeMap<i32, usize>, usize) {
    let mut offs = BTreeMap::new();
    let mut acc = 0;
    for (&p, &dp) in &a.dims {
        let dt = b.dim(p + n);
        if dt > 0 {
            offs.insert(p, acc);
            acc += dt * dp;
        }
    }
    (offs, acc)
}

pub fn hom_complex(a: &Complex, b: &Complex) -> Complex {
    let Some((lo, hi)) = hom_range(a, b) else { return Complex::zero() };
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let (offs, total) = hom_offsets(a, b, n);
        dims.push((n, total));
        let (offs1, total1) = hom_offsets(a, b, n + 1);
        if total == 0 || total1 == 0 {
            continue;
        }
        let mut d = Matrix::zeros(total1, total);
        let s = sign(n as i64);
        for (&p, &o) in &offs {
            let (rows, cols) = (b.dim(p + n), a.dim(p));
            let db = b.d(p + n);
            let da = a.d(p - 1);
            for r in 0..rows {
                for c in 0..cols {
                    let col = o + r * cols + c;
                    // d_b ∘ E_rc lands in block p of degree n+1.
                    if let Some(&o1) = offs1.get(&p) {
                        for r2 in 0..db.rows() {
                            let v = db.get(r2, r);
                            if !v.is_zero() {
                                d.add_at(o1 + r2 * cols + c, col, v);
                            }
                        }
                    }
                    // -(-1)^n E_rc ∘ d_a^{p-1} lands in block p-1.
                    if let Some(&o1) = offs1.get(&(p - 1)) {
                        let cols1 = a.dim(p - 1);
                        for c2 in 0..cols1 {
                            let v = da.get(c, c2);
                            if !v.is_zero() {
                                d.add_at(o1 + r * cols1 + c2, col, &(-(v * &s)));
                            }
                        }
                    }
                }
            }
        }
        diffs.push((n, d));
    }
    Complex::new(dims, diffs).expect("hom shapes")
}

/// Reads a degree-`n` Hom coordinate vector back as a graded map.
pub fn hom_element_to_map(a: &Complex, b: &Complex, n: i32, coords: &[Rational]) -> ChainMap {
    let (offs, total) = hom_offsets(a, b, n);
    assert_eq!(coords.len(), total);
    let mut blocks = Vec::new();
    for (&p, &o) in &offs {
        let (rows, cols) = (b.dim(p + n), a.dim(p));
        let m = Matrix::from_vec(rows, cols, coords[o..o + rows * cols].to_vec()).expect("block size");
        blocks.push((p, m));
    }
    ChainMap::new(a, b, n, blocks).expect("hom block shapes")
}

pub fn map_to_hom_element(f: &ChainMap) -> Vec<Rational> {
    let (offs, total) = hom_offsets(&f.source, &f.target, f.degree);
    let mut v = vec![Rational::zero(); total];
    for (&p, &o) in &offs {
        let blk = f.block(p);
        for (i, x) in blk.entries().iter().enumerate() {
            v[o + i] = x.clone();
        }
    }
    v
}

/// `c^* = Hom(c, k)`, so `(c^*)^p = (c^{-p})^*`.
pub fn linear_dual(c: &Complex) -> Complex {
    hom_complex(c, &Complex::unit())
}

/// Alternating sum of traces on cohomology.
pub fn euler_trace(f: &ChainMap) -> Result<Rational> {
    f.require_closed_endo()?;
    let h = cohomology(&f.source)?;
    let mut acc = Rational::zero();
    for &p in h.degrees.keys() {
        acc += sign(p as i64) * h.induced(&h, f, p).trace();
    }
    Ok(acc)
}

/// Alternating sum of traces at chain level.
pub fn chain_supertrace(f: &ChainMap) -> Result<Rational> {
    if !f.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    if f.degree != 0 {
        return Err(Error::WrongDegree { expected: 0, got: f.degree });
    }
    Ok(f.blocks.iter().fold(Rational::zero(), |acc, (&p, m)| acc + sign(p as i64) * m.trace()))
}

pub fn direct_sum(a: &Complex, b: &Complex) -> Complex {
    let mut keys: Vec<i32> = a.dims.keys().chain(b.dims.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let dims: Vec<(i32, usize)> = keys.iter().map(|&p| (p, a.dim(p) + b.dim(p))).collect();
    let diffs: Vec<(i32, Matrix)> = keys
        .iter()
        .map(|&p| {
            let mut m = Matrix::zeros(a.dim(p + 1) + b.dim(p + 1), a.dim(p) + b.dim(p));
            m.set_block(0, 0, &a.d(p));
            m.set_block(a.dim(p + 1), a.dim(p), &b.d(p));
            (p, m)
        })
        .collect();
    Complex::new(dims, diffs).expect("sum shapes")
}

pub fn direct_sum_maps(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    if f.degree != g.degree {
        return Err(Error::WrongDegree { expected: f.degree, got: g.degree });
    }
    let src = direct_sum(&f.source, &g.source);
    let tgt = direct_sum(&f.target, &g.target);
    let blocks: Vec<(i32, Matrix)> = src
        .degrees()
        .map(|p| {
            let t = p + f.degree;
            let mut m = Matrix::zeros(tgt.dim(t), src.dim(p));
            m.set_block(0, 0, &f.block(p));
            m.set_block(f.target.dim(t), f.source.dim(p), &g.block(p));
            (p, m)
        })
        .collect();
    ChainMap::new(&src, &tgt, f.degree, blocks)
}

/// Image of a closed idempotent endomorphism, with inclusion and projection.
pub fn split_idempotent(e: &ChainMap) -> Result<(Complex, ChainMap, ChainMap)> {
    e.require_closed_endo()?;
    if e.compose(e)? != *e {
        return Err(Error::BadIdempotent);
    }
    let c = &e.source;
    let mut incl = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for p in c.degrees() {
        let ep = e.block(p);
        let img = ep.image();
        let pr = img.solve_matrix(&ep)?.expect("columns of e lie in its image");
        incl.insert(p, img);
        proj.insert(p, pr);
    }
    let dims: Vec<(i32, usize)> = incl.iter().map(|(&p, m)| (p, m.cols())).collect();
    let mut diffs = Vec::new();
    for p in c.degrees() {
        if let (Some(i0), Some(p1)) = (incl.get(&p), proj.get(&(p + 1))) {
            diffs.push((p, &(p1 * &c.d(p)) * i0));
        }
    }
    let image = Complex::new(dims, diffs)?;
    let inclusion = ChainMap::new(&image, c, 0, incl)?;
    let projection = ChainMap::new(c, &image, 0, proj)?;
    Ok((image, inclusion, projection))
}

/// The complex `k --c--> k` in degrees `p, p+1`.
pub fn two_term(p: i32, c: i64) -> Complex {
    Complex::new([(p, 1), (p + 1, 1)], [(p, Matrix::from_rows(&[vec![q(c)]]))]).expect("1x1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Complex {
        Complex::unit()
    }

    #[test]
    fn shift_conventions() {
        let c = two_term(0, 1);
        assert_eq!(shift(&c, 0), c);
        assert_eq!(shift(&k(), 1).dim(-1), 1);
        let s = shift(&c, 1);
        assert_eq!(s.d(-1), Matrix::from_i64(&[&[-1]]));
    }

    #[test]
    fn cone_examples() {
        let (c, _, _) = cone(&ChainMap::identity(&k())).unwrap();
        assert_eq!(c.total_dim(), 2);
        assert!(c.is_acyclic().unwrap());

        let (c, _, _) = cone(&ChainMap::zero(&k(), &k(), 0)).unwrap();
        assert_eq!(cohomology(&c).unwrap().space(), GradedSpace::new([(-1, 1), (0, 1)]));

        let two = ChainMap::scalar(&k(), &q(2));
        let (c, r, qm) = cone(&two).unwrap();
        let h = cohomology(&c).unwrap();
        assert_eq!(h.dim(0), 0);
        assert_eq!(h.dim(-1), 0);
        assert!(r.is_closed() && qm.is_closed());
    }

    #[test]
    fn cone_rejects_bad_maps() {
        let c = two_term(0, 1);
        let f = ChainMap::new(&c, &c, 0, [(0, Matrix::from_i64(&[&[1]]))]).unwrap();
        assert!(matches!(cone(&f), Err(Error::NotClosed(_))));
        let g = ChainMap::zero(&k(), &k(), 1);
        assert!(matches!(cone(&g), Err(Error::WrongDegree { .. })));
    }

    #[test]
    fn cohomology_examples() {
        let sp = GradedSpace::new([(0, 2), (3, 1)]);
        assert_eq!(cohomology(&Complex::from_space(&sp)).unwrap().space(), sp);
        let c = Complex::new([(0, 2), (1, 1)], [(0, Matrix::from_i64(&[&[1, 0]]))]).unwrap();
        let h = cohomology(&c).unwrap();
        assert_eq!((h.dim(0), h.dim(1)), (1, 0));

        let bad = Complex::new(
            [(0, 1), (1, 1), (2, 1)],
            [(0, Matrix::from_i64(&[&[1]])), (1, Matrix::from_i64(&[&[1]]))],
        )
        .unwrap();
        assert!(cohomology(&bad).is_err());
    }

    #[test]
    fn tensor_examples() {
        let c = two_term(0, 1);
        let u = tensor(&c, &k());
        assert_eq!(u, c);
        let free = Complex::from_space(&GradedSpace::new([(0, 1), (1, 1)]));
        let t = tensor(&free, &free);
        assert_eq!(t.space(), GradedSpace::new([(0, 1), (1, 2), (2, 1)]));
        let t = tensor(&c, &c);
        t.check_square_zero().unwrap();
        assert!(t.is_acyclic().unwrap());
    }

    #[test]
    fn hom_examples() {
        let b = two_term(0, 3);
        let h = hom_complex(&k(), &b);
        assert_eq!(h.space(), b.space());
        assert_eq!(h.d(0), b.d(0));
        let d = linear_dual(&b);
        assert_eq!(d.space(), GradedSpace::new([(-1, 1), (0, 1)]));
        d.check_square_zero().unwrap();
    }

    #[test]
    fn dual_index_reflection() {
        let c = Complex::new([(0, 1), (1, 2)], [(0, Matrix::from_i64(&[&[1], &[0]]))]).unwrap();
        let d = linear_dual(&c);
        assert_eq!(d.space(), GradedSpace::new([(-1, 2), (0, 1)]));
        assert_eq!(linear_dual(&k()), k());
    }

    #[test]
    fn traces() {
        let sp = Complex::from_space(&GradedSpace::new([(0, 1), (1, 1)]));
        let id = ChainMap::identity(&sp);
        assert_eq!(euler_trace(&id).unwrap(), q(0));
        let f = ChainMap::scalar(&k(), &q(2));
        assert_eq!(euler_trace(&f).unwrap(), q(2));
        assert_eq!(chain_supertrace(&f).unwrap(), q(2));
        let (c, _, _) = cone(&ChainMap::identity(&k())).unwrap();
        let id = ChainMap::identity(&c);
        assert_eq!(euler_trace(&id).unwrap(), q(0));
        assert_eq!(chain_supertrace(&id).unwrap(), q(0));
    }

    #[test]
    fn split_projector() {
        let sp = Complex::from_space(&GradedSpace::new([(0, 2)]));
        let e = ChainMap::new(&sp, &sp, 0, [(0, Matrix::from_i64(&[&[1, 1], &[0, 0]]))]).unwrap();
        let (img, i, p) = split_idempotent(&e).unwrap();
        assert_eq!(img.total_dim(), 1);
        assert_eq!(p.compose(&i).unwrap(), ChainMap::identity(&img));
    }
}
