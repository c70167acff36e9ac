//! Complexes assembled from blocks indexed by generators, optionally cut
//! down by a block-structured idempotent. Restriction to the ground field,
//! `⊗_A` and `Hom_A` are all instances.

use std::sync::Arc;

use crate::algebra::{opposite, DgAlgebra};
use crate::complex::{ChainMap, Complex, Layout};
use crate::error::{Error, Result};
use crate::linalg::{sign, Matrix, Rational};
use crate::module::{FiniteModule, ModuleMap, PerfectModule};

/// Block operator: `(row block, column block) -> matrix`, `None` for zero.
pub type BlockOp<'a> = dyn Fn(usize, usize) -> Option<Matrix> + 'a;


/// One connected group of blocks of the idempotent, with the inclusion
/// (local unsplit × image) and projection (image × local unsplit) of its
/// image. `incl = None` means the group is not cut down.
#[derive(Clone, Debug)]
struct Group {
    blocks: Vec<usize>,
    local_offsets: Vec<usize>,
    split: Option<(Matrix, Matrix)>,
    image_offset: usize,
    image_dim: usize,
}

#[derive(Clone, Debug)]
pub struct Blocked {
    block_degrees: Vec<Vec<i32>>,
    block_offsets: Vec<usize>,
    groups: Vec<Group>,
    pub degrees: Vec<i32>,
    pub complex: Complex,
    pub layout: Layout,
    /// Flat differential on the image basis.
    pub d: Matrix,
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

fn diag_sign(m: &Matrix, degrees: &[i32], shift: i64, neg: bool) -> Matrix {
    let mut out = m.clone();
    for c in 0..m.cols() {
        let mut s = sign(degrees[c] as i64 + shift);
        if neg {
            s = -s;
        }
        if s != Rational::from_integer(1.into()) {
            for r in 0..m.rows() {
                let v = out.get(r, c) * &s;
                out.set(r, c, v);
            }
        }
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

impl Blocked {
    pub fn build(block_degrees: Vec<Vec<i32>>, diff: &BlockOp, idem: Option<&BlockOp>) -> Result<Blocked> {
        let nb = block_degrees.len();
        let block_offsets = offsets(block_degrees.iter().map(|d| d.len()));
        // Connected components of the idempotent's block pattern.
        let mut parent: Vec<usize> = (0..nb).collect();
        let mut cache: Vec<Vec<Option<Matrix>>> = vec![vec![None; nb]; nb];
        if let Some(e) = idem {
            for i in 0..nb {
                for j in 0..nb {
                    if let Some(m) = e(i, j).filter(|m| !m.is_zero()) {
                        cache[i][j] = Some(m);
                        if i != j {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                }
            }
        }
        let mut group_of = vec![usize::MAX; nb];
        let mut groups: Vec<Group> = Vec::new();
        let mut degrees = Vec::new();
        for b in 0..nb {
            if group_of[b] != usize::MAX {
                continue;
            }
            let root = find(&mut parent, b);
            let members: Vec<usize> = (b..nb).filter(|&x| find(&mut parent, x) == root).collect();
            let gi = groups.len();
            for &m in &members {
                group_of[m] = gi;
            }
            let local_offsets = offsets(members.iter().map(|&m| block_degrees[m].len()));
            let local_deg: Vec<i32> = members.iter().flat_map(|&m| block_degrees[m].iter().copied()).collect();
            let image_offset = degrees.len();
            let split = if idem.is_some() {
                let n = *local_offsets.last().unwrap();
                let mut full = Matrix::zeros(n, n);
                for (a, &i) in members.iter().enumerate() {
                    for (c, &j) in members.iter().enumerate() {
                        if let Some(m) = &cache[i][j] {
                            full.set_block(local_offsets[a], local_offsets[c], m);
                        }
                    }
                }
                let (_, piv) = full.rref();
                let incl = full.select_columns(&piv);
                let proj = incl.solve_matrix(&full)?.ok_or(Error::BadIdempotent)?;
                degrees.extend(piv.iter().map(|&p| local_deg[p]));
                Some((incl, proj))
            } else {
                degrees.extend_from_slice(&local_deg);
                None
            };
            let image_dim = degrees.len() - image_offset;
            groups.push(Group { blocks: members, local_offsets, split, image_offset, image_dim });
        }
        let mut b = Blocked {
            block_degrees,
            block_offsets,
            groups,
            degrees,
            complex: Complex::zero(),
            layout: Layout::new(&[]),
            d: Matrix::zeros(0, 0),
        };
        let d = Blocked::operator(&b, &b, diff);
        let (complex, layout) = Complex::from_flat(&b.degrees, &d)?;
        b.complex = complex;
        b.layout = layout;
        b.d = d;
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_degrees.len()
    }

    pub fn block_degrees(&self, j: usize) -> &[i32] {
        &self.block_degrees[j]
    }

    pub fn unsplit_dim(&self) -> usize {
        *self.block_offsets.last().unwrap()
    }

    pub fn block_offset(&self, j: usize) -> usize {
        self.block_offsets[j]
    }

    /// Inclusion of the image into the unsplit flat space.
    pub fn inclusion(&self) -> Matrix {
        let mut m = Matrix::zeros(self.unsplit_dim(), self.dim());
        for g in &self.groups {
            for (a, &blk) in g.blocks.iter().enumerate() {
                let (lo, len) = (g.local_offsets[a], self.block_degrees[blk].len());
                let part = match &g.split {
                    Some((incl, _)) => incl.block(lo, 0, len, g.image_dim),
                    None => Matrix::identity(len),
                };
                let col = if g.split.is_some() { g.image_offset } else { g.image_offset + lo };
                m.set_block(self.block_offsets[blk], col, &part);
            }
        }
        m
    }

    /// Projection of the unsplit flat space onto the image.
    pub fn projection(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.unsplit_dim());
        for g in &self.groups {
            for (a, &blk) in g.blocks.iter().enumerate() {
                let (lo, len) = (g.local_offsets[a], self.block_degrees[blk].len());
                let part = match &g.split {
                    Some((_, proj)) => proj.block(0, lo, g.image_dim, len),
                    None => Matrix::identity(len),
                };
                let row = if g.split.is_some() { g.image_offset } else { g.image_offset + lo };
                m.set_block(row, self.block_offsets[blk], &part);
            }
        }
        m
    }

    /// Matrix of a block operator from `src`'s image to `tgt`'s image.
    pub fn operator(src: &Blocked, tgt: &Blocked, op: &BlockOp) -> Matrix {
        let mut out = Matrix::zeros(tgt.dim(), src.dim());
        for tg in &tgt.groups {
            for sg in &src.groups {
                let rows = *tg.local_offsets.last().unwrap();
                let cols = *sg.local_offsets.last().unwrap();
                let mut local: Option<Matrix> = None;
                for (a, &i) in tg.blocks.iter().enumerate() {
                    for (c, &j) in sg.blocks.iter().enumerate() {
                        if let Some(m) = op(i, j).filter(|m| !m.is_zero()) {
                            local
                                .get_or_insert_with(|| Matrix::zeros(rows, cols))
                                .set_block(tg.local_offsets[a], sg.local_offsets[c], &m);
                        }
                    }
                }
                let Some(m) = local else { continue };
                let m = match &tg.split {
                    Some((_, proj)) => proj * &m,
                    None => m,
                };
                let m = match &sg.split {
                    Some((incl, _)) => &m * incl,
                    None => m,
                };
                out.set_block(tg.image_offset, sg.image_offset, &m);
            }
        }
        out
    }

    pub fn chain_map(src: &Blocked, tgt: &Blocked, degree: i32, op: &BlockOp) -> Result<ChainMap> {
        let m = Blocked::operator(src, tgt, op);
        ChainMap::from_flat(&src.complex, &src.layout, &tgt.complex, &tgt.layout, degree, &m)
    }
}

/// Underlying complex of a perfect module over `k`, with the idempotent
/// split off. The basis of block `j` is `e_b g_j`, `b` running over the
/// algebra basis.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub module: PerfectModule,
    pub blocked: Blocked,
}

pub fn restrict_to_ground(m: &PerfectModule) -> Result<Restricted> {
    let c = &m.carrier;
    let a = c.algebra().clone();
    let n = a.dim();
    let block_degrees = c.shifts().iter().map(|s| vec![-s; n]).collect();
    let tw = c.twist();
    let diff = |i: usize, j: usize| (!tw.is_zero_at(i, j)).then(|| a.right_matrix(tw.get(i, j)));
    let blocked = if m.has_idempotent() {
        let e = m.idempotent_matrix();
        let idem = |i: usize, j: usize| (!e.is_zero_at(i, j)).then(|| a.right_matrix(e.get(i, j)));
        Blocked::build(block_degrees, &diff, Some(&idem))?
    } else {
        Blocked::build(block_degrees, &diff, None)?
    };
    Ok(Restricted { module: m.clone(), blocked })
}

impl Restricted {
    pub fn complex(&self) -> &Complex {
        &self.blocked.complex
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        self.module.algebra()
    }

    /// Left action of `x` on the image.
    pub fn action(&self, x: &[Rational]) -> Matrix {
        let l = self.algebra().left_matrix(x);
        Blocked::operator(&self.blocked, &self.blocked, &|i, j| (i == j).then(|| l.clone()))
    }

    /// Restriction of a module map between perfect modules.
    pub fn map(&self, f: &ModuleMap, target: &Restricted) -> Result<ChainMap> {
        let a = self.algebra().clone();
        let fm = &f.matrix;
        Blocked::chain_map(&self.blocked, &target.blocked, f.degree, &|i, j| {
            (!fm.is_zero_at(i, j)).then(|| a.right_matrix(fm.get(i, j)))
        })
    }

    /// Flat matrix (image bases) of a restricted module map.
    pub fn map_matrix(&self, f: &ModuleMap, target: &Restricted) -> Matrix {
        let a = self.algebra().clone();
        let fm = &f.matrix;
        Blocked::operator(&self.blocked, &target.blocked, &|i, j| (!fm.is_zero_at(i, j)).then(|| a.right_matrix(fm.get(i, j))))
    }

    pub fn map_endo(&self, f: &ModuleMap) -> Result<ChainMap> {
        self.map(f, self)
    }

    pub fn to_finite_module(&self) -> Result<FiniteModule> {
        let a = self.algebra().clone();
        let action = (0..a.dim()).map(|b| self.action(&a.basis(b))).collect();
        FiniteModule::new(a, self.blocked.degrees.clone(), self.blocked.d.clone(), action)
    }
}

/// `N ⊗_A M` for `N` a finite module over `A^op` (a right `A`-module) and
/// `M` perfect over `A`: `⊕_j N ⊗ g_j` with `n ⊗ g_j` in degree
/// `|n| - s_j` and `D(n⊗g_j) = D_N n ⊗ g_j + (-1)^{|n|} Σ_i n·δ_ij ⊗ g_i`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub right: FiniteModule,
    pub left: PerfectModule,
    pub blocked: Blocked,
}

fn check_opposite(n_alg: &DgAlgebra, a: &DgAlgebra) -> Result<()> {
    if *n_alg != opposite(a) {
        return Err(Error::AlgebraMismatch(format!(
            "right module over {} cannot be tensored with a module over {}",
            n_alg.name(),
            a.name()
        )));
    }
    Ok(())
}

pub fn tensor_over_algebra(n: &FiniteModule, m: &PerfectModule) -> Result<TensorProduct> {
    check_opposite(&n.algebra, m.algebra())?;
    let c = &m.carrier;
    let block_degrees = c.shifts().iter().map(|s| n.degrees.iter().map(|p| p - s).collect()).collect();
    let tw = c.twist();
    let diff = |i: usize, j: usize| {
        if i == j {
            Some(n.d.clone())
        } else if !tw.is_zero_at(i, j) {
            Some(diag_sign(&n.act(tw.get(i, j)), &n.degrees, 0, false))
        } else {
            None
        }
    };
    let blocked = if m.has_idempotent() {
        let e = m.idempotent_matrix();
        let idem = |i: usize, j: usize| (!e.is_zero_at(i, j)).then(|| n.act(e.get(i, j)));
        Blocked::build(block_degrees, &diff, Some(&idem))?
    } else {
        Blocked::build(block_degrees, &diff, None)?
    };
    Ok(TensorProduct { right: n.clone(), left: m.clone(), blocked })
}

impl TensorProduct {
    pub fn complex(&self) -> &Complex {
        &self.blocked.complex
    }

    /// `g ⊗ f` with `(g⊗f)(n⊗x) = (-1)^{|f||n|} g(n) ⊗ f(x)`; `g` is a flat
    /// matrix on `N` commuting with the `A^op`-action.
    pub fn map(&self, g: &Matrix, g_degree: i32, f: &ModuleMap, target: &TensorProduct) -> Result<ChainMap> {
        let n = &self.right;
        let fm = &f.matrix;
        let fd = f.degree as i64;
        Blocked::chain_map(&self.blocked, &target.blocked, g_degree + f.degree, &|i, j| {
            if fm.is_zero_at(i, j) {
                return None;
            }
            let gs = if fd % 2 == 0 { g.clone() } else { diag_sign(g, &n.degrees, 0, false) };
            Some(&target.right.act(fm.get(i, j)) * &gs)
        })
    }

    /// Residual left action of a bimodule: `N` carries commuting left
    /// action matrices `left_action`, acting on each block.
    pub fn left_action(&self, left_action: &Matrix) -> Matrix {
        Blocked::operator(&self.blocked, &self.blocked, &|i, j| (i == j).then(|| left_action.clone()))
    }
}

/// `N ⊗_A M` with `N` a bimodule over `C ⊗ A^op`; the result keeps the
/// left `C`-action.
pub fn tensor_bimodule(n: &FiniteModule, c: &Arc<DgAlgebra>, m: &PerfectModule) -> Result<FiniteModule> {
    let a = m.algebra();
    let aop = Arc::new(opposite(a));
    let nc = c.dim();
    let na = a.dim();
    if n.algebra.dim() != nc * na {
        return Err(Error::AlgebraMismatch("bimodule tensor".into()));
    }
    let right = n.restrict_scalars(&aop, |i| crate::algebra::tensor_elements(c.unit(), &aop.basis(i)))?;
    let t = tensor_over_algebra(&right, m)?;
    let action = (0..nc)
        .map(|i| t.left_action(&n.act(&crate::algebra::tensor_elements(&c.basis(i), aop.unit()))))
        .collect();
    FiniteModule::new(c.clone(), t.blocked.degrees.clone(), t.blocked.d.clone(), action)
}

/// `Hom_A(M, N)` for `M` perfect and `N` finite over `A`. Block `j` holds
/// `φ(g_j) ∈ N`, so a coordinate of `N`-degree `p` has Hom-degree `p + s_j`;
/// `d(φ)_j = D_N φ_j - (-1)^{|φ|} Σ_i δ_ij · φ_i`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub source: PerfectModule,
    pub target: FiniteModule,
    pub blocked: Blocked,
}

pub fn hom_over_algebra(m: &PerfectModule, n: &FiniteModule) -> Result<HomComplex> {
    if *m.algebra() != n.algebra && **m.algebra() != *n.algebra {
        return Err(Error::AlgebraMismatch("Hom over different algebras".into()));
    }
    let c = &m.carrier;
    let block_degrees: Vec<Vec<i32>> = c.shifts().iter().map(|s| n.degrees.iter().map(|p| p + s).collect()).collect();
    let tw = c.twist();
    let shifts = c.shifts().to_vec();
    let diff = |j: usize, i: usize| {
        if i == j {
            Some(n.d.clone())
        } else if !tw.is_zero_at(i, j) {
            Some(diag_sign(&n.act(tw.get(i, j)), &n.degrees, shifts[i] as i64, true))
        } else {
            None
        }
    };
    let blocked = if m.has_idempotent() {
        let e = m.idempotent_matrix();
        let idem = |j: usize, i: usize| (!e.is_zero_at(i, j)).then(|| n.act(e.get(i, j)));
        Blocked::build(block_degrees, &diff, Some(&idem))?
    } else {
        Blocked::build(block_degrees, &diff, None)?
    };
    Ok(HomComplex { source: m.clone(), target: n.clone(), blocked })
}

impl HomComplex {
    pub fn complex(&self) -> &Complex {
        &self.blocked.complex
    }

    /// Unsplit coordinates (block `j`, index in `N`) of the image basis
    /// vectors of degree `p`, as columns.
    pub fn basis_in_degree(&self, p: i32) -> Matrix {
        let idx = self.blocked.layout.indices_in(p);
        self.blocked.inclusion().select_columns(&idx)
    }
}

/// Sign helper shared with the duality code: multiply column `c` by
/// `(-1)^{degrees[c] + shift}` (negated if `neg`).
pub fn signed_columns(m: &Matrix, degrees: &[i32], shift: i64, neg: bool) -> Matrix {
    diag_sign(m, degrees, shift, neg)
}
