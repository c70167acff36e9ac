//! Diagonal resolutions, `D_A = Hom_A(-, A)`, the bimodules `A^*`, `ω^{-1}`,
//! the Serre functor, integration and evaluation/coevaluation.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{opposite, swap_matrix, tensor_algebras, tensor_elements, Alg, DgAlgebra};
use crate::blocked::{hom_over_algebra, restrict_to_ground, signed_columns, tensor_bimodule, tensor_over_algebra, Blocked};
use crate::catalog::{CatalogEntry, Presentation};
use crate::complex::{cohomology, cone, ChainMap, Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{q, sign, Matrix, Rational};
use crate::module::{external_tensor, restrict_to_left_factor, transport, AlgMatrix, Elem, FiniteModule, PerfectModule, SemiFreeModule};

/// Finite resolution `P → A` of the diagonal bimodule over `A^e = A ⊗ A^op`.
#[derive(Clone, Debug)]
pub struct DiagonalResolution {
    pub algebra: Alg,
    pub enveloping: Alg,
    pub resolution: PerfectModule,
    /// Image of each generator of `P` in `A`.
    pub augmentation: Vec<Elem>,
    pub presentation: Presentation,
}

/// `A` as a left `A^e`-module: `(x ⊗ y)·a = x a y`.
pub fn diagonal_module(a: &Alg, ae: &Alg) -> Result<FiniteModule> {
    let n = a.dim();
    let mut action = Vec::with_capacity(n * n);
    for x in 0..n {
        let lx = a.left_matrix(&a.basis(x));
        for y in 0..n {
            action.push(&lx * &a.right_matrix(&a.basis(y)));
        }
    }
    FiniteModule::new(ae.clone(), vec![0; n], Matrix::zeros(n, n), action)
}

fn enveloping_of(a: &DgAlgebra) -> Alg {
    Arc::new(tensor_algebras(a, &opposite(a)))
}

/// Builds the shipped resolution of a catalog algebra and checks that the
/// augmentation is a quasi-isomorphism.
pub fn diagonal_resolution(entry: &CatalogEntry) -> Result<DiagonalResolution> {
    let r = build_resolution(entry)?;
    if !r.is_quasi_iso()? {
        return Err(Error::AugmentationNotQuasiIso);
    }
    Ok(r)
}

fn build_resolution(entry: &CatalogEntry) -> Result<DiagonalResolution> {
    let a: Alg = Arc::new(entry.algebra.clone());
    a.require_degree_zero()?;
    let ae = enveloping_of(&a);
    let n = a.dim();
    let (resolution, augmentation) = match &entry.presentation {
        Presentation::Separable(eps) => {
            let p = PerfectModule::projective(ae.clone(), eps, 0)?;
            (p, vec![a.unit().to_vec()])
        }
        Presentation::Quiver { vertices, arrows } => {
            let na = arrows.len();
            let m = na + vertices;
            let mut twist = AlgMatrix::zeros(m, m, n * n);
            let mut idem = AlgMatrix::zeros(m, m, n * n);
            let mut labels = Vec::new();
            let mut shifts = Vec::new();
            let mut aug = Vec::new();
            let e = |v: usize| a.basis(v);
            for (k, &(u, v, al)) in arrows.iter().enumerate() {
                twist.set(na + v, k, tensor_elements(&a.basis(al), &e(v)));
                twist.add_at(na + u, k, &q(-1), &tensor_elements(&e(u), &a.basis(al)));
                idem.set(k, k, tensor_elements(&e(u), &e(v)));
                labels.push(format!("g_{}", a.labels()[al]));
                shifts.push(1);
                aug.push(a.zero());
            }
            for v in 0..*vertices {
                idem.set(na + v, na + v, tensor_elements(&e(v), &e(v)));
                labels.push(format!("g_{}", a.labels()[v]));
                shifts.push(0);
                aug.push(e(v));
            }
            let carrier = SemiFreeModule::new(ae.clone(), labels, shifts, twist)?;
            (PerfectModule::new(carrier, Some(idem))?, aug)
        }
        Presentation::Tensor(x, y) => {
            let rx = build_resolution(x)?;
            let ry = build_resolution(y)?;
            let (nx, ny) = (rx.algebra.dim(), ry.algebra.dim());
            let big = Arc::new(tensor_algebras(&rx.enveloping, &ry.enveloping));
            let p = external_tensor(&rx.resolution, &ry.resolution, &big)?;
            // (x ⊗ x') ⊗ (y ⊗ y') ↦ (x ⊗ y) ⊗ (x' ⊗ y').
            let dim = nx * nx * ny * ny;
            let mut phi = Matrix::zeros(dim, dim);
            for x in 0..nx {
                for x2 in 0..nx {
                    for y in 0..ny {
                        for y2 in 0..ny {
                            let src = (x * nx + x2) * (ny * ny) + y * ny + y2;
                            let tgt = (x * ny + y) * (nx * ny) + x2 * ny + y2;
                            phi.set(tgt, src, q(1));
                        }
                    }
                }
            }
            let p = transport(&p, &ae, &phi)?;
            let mut aug = Vec::new();
            for ax in &rx.augmentation {
                for ay in &ry.augmentation {
                    aug.push(tensor_elements(ax, ay));
                }
            }
            (p, aug)
        }
        Presentation::Opposite(inner) => {
            let r = build_resolution(inner)?;
            let base = &r.algebra;
            let p = transport(&r.resolution, &ae, &swap_matrix(base, &opposite(base)))?;
            (p, r.augmentation.clone())
        }
    };
    Ok(DiagonalResolution { algebra: a, enveloping: ae, resolution, augmentation, presentation: entry.presentation.clone() })
}

impl DiagonalResolution {
    /// Length of the resolution (number of distinct generator shifts minus one).
    pub fn length(&self) -> usize {
        let s = self.resolution.carrier.shifts();
        match (s.iter().min(), s.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo) as usize,
            _ => 0,
        }
    }

    pub fn diagonal(&self) -> Result<FiniteModule> {
        diagonal_module(&self.algebra, &self.enveloping)
    }

    /// The augmentation as a chain map from the restricted resolution to `A`.
    pub fn augmentation_map(&self) -> Result<ChainMap> {
        let diag = self.diagonal()?;
        let r = restrict_to_ground(&self.resolution)?;
        let n = self.algebra.dim();
        let target = Blocked::build(vec![vec![0; n]], &|_, _| None, None)?;
        let aug = &self.augmentation;
        let op = |_: usize, j: usize| {
            let mut m = Matrix::zeros(n, self.enveloping.dim());
            for b in 0..self.enveloping.dim() {
                let col = diag.action[b].mul_vec(&aug[j]);
                for (c, v) in col.into_iter().enumerate() {
                    m.set(c, b, v);
                }
            }
            Some(m)
        };
        Blocked::chain_map(&r.blocked, &target, 0, &op)
    }

    /// The cone of the augmentation is acyclic.
    pub fn is_quasi_iso(&self) -> Result<bool> {
        let f = self.augmentation_map()?;
        if !f.is_closed() {
            return Ok(false);
        }
        let (c, _, _) = cone(&f)?;
        c.is_acyclic()
    }

    /// Euler class of the resolution in `A^e`, as the supertrace element.
    pub fn supertrace_terms(&self) -> Vec<(i32, Elem)> {
        let e = self.resolution.idempotent_matrix();
        self.resolution.carrier.shifts().iter().enumerate().map(|(j, s)| (*s, e.get(j, j).clone())).collect()
    }
}

fn tri(x: i32) -> i64 {
    let x = x as i64;
    x * (x + 1) / 2
}

/// `D_A(M) = Hom_A(M, A)` as a perfect module over `A^op`. Dual generators
/// come in reverse order with negated shifts; `g_j^*` is the dual basis
/// functional rescaled by `(-1)^{s_j(s_j+1)/2}`, which makes `D∘D = id`
/// hold on the nose.
pub fn dualize(m: &PerfectModule) -> Result<PerfectModule> {
    let c = &m.carrier;
    let op: Alg = Arc::new(opposite(c.algebra()));
    let r = c.rank();
    let s = c.shifts();
    let tw = c.twist();
    let dim = op.dim();
    let mut twist = AlgMatrix::zeros(r, r, dim);
    for i in 0..r {
        for j in 0..r {
            if !tw.is_zero_at(j, i) {
                let sg = sign(1 + s[j] as i64 + tri(s[j]) - tri(s[i]));
                twist.add_at(r - 1 - i, r - 1 - j, &sg, tw.get(j, i));
            }
        }
    }
    let shifts = (0..r).map(|k| -s[r - 1 - k]).collect();
    let labels = (0..r).map(|k| format!("{}^*", c.labels()[r - 1 - k])).collect();
    let carrier = SemiFreeModule::new(op, labels, shifts, twist)?;
    let idem = if m.has_idempotent() {
        let e = m.idempotent_matrix();
        let mut d = AlgMatrix::zeros(r, r, dim);
        for j in 0..r {
            for k in 0..r {
                d.set(r - 1 - k, r - 1 - j, e.get(j, k).clone());
            }
        }
        Some(d)
    } else {
        None
    };
    PerfectModule::new(carrier, idem)
}

/// `A^*` as a left `A^e`-module: `((a ⊗ c)·φ)(x) = φ(c x a)`.
pub fn bimodule_linear_dual(a: &Alg, ae: &Alg) -> Result<FiniteModule> {
    a.require_degree_zero()?;
    let n = a.dim();
    let mut action = Vec::with_capacity(n * n);
    for x in 0..n {
        let rx = a.right_matrix(&a.basis(x));
        for y in 0..n {
            action.push((&a.left_matrix(&a.basis(y)) * &rx).transpose());
        }
    }
    FiniteModule::new(ae.clone(), vec![0; n], Matrix::zeros(n, n), action)
}

/// `ω^{-1} = Hom_{A^e}(P, A^e)`, transported back to a left `A^e`-module
/// along `A^op ⊗ A ≅ A ⊗ A^op`.
pub fn omega_inverse(r: &DiagonalResolution) -> Result<PerfectModule> {
    let d = dualize(&r.resolution)?;
    let a = &r.algebra;
    transport(&d, &r.enveloping, &swap_matrix(&opposite(a), a))
}

/// `ω^{-1}` together with `ω = A^*`.
#[derive(Clone, Debug)]
pub struct DualizingPair {
    pub omega_inv: PerfectModule,
    pub omega: FiniteModule,
}

pub fn dualizing_pair(r: &DiagonalResolution) -> Result<DualizingPair> {
    Ok(DualizingPair { omega_inv: omega_inverse(r)?, omega: bimodule_linear_dual(&r.algebra, &r.enveloping)? })
}

/// `A^*` viewed as a right `A`-module (left `A^op`-module).
pub fn dual_as_right_module(a: &Alg) -> Result<FiniteModule> {
    let ae = enveloping_of(a);
    let op: Alg = Arc::new(opposite(a));
    let dual = bimodule_linear_dual(a, &ae)?;
    dual.restrict_scalars(&op, |i| tensor_elements(a.unit(), &op.basis(i)))
}

/// `S(M) = A^* ⊗_A M` with its left `A`-action.
pub fn serre_apply(a: &Alg, m: &PerfectModule) -> Result<FiniteModule> {
    a.require_degree_zero()?;
    let ae = enveloping_of(a);
    let dual = bimodule_linear_dual(a, &ae)?;
    tensor_bimodule(&dual, a, m)
}

/// Cohomology dimensions of `A^* ⊗_A ω^{-1}` (`ω^{-1}` restricted to its
/// left `A`-structure).
pub fn dual_tensor_omega_inverse(r: &DiagonalResolution) -> Result<GradedSpace> {
    let a = &r.algebra;
    let w = omega_inverse(r)?;
    let left = restrict_to_left_factor(&w, a, &opposite(a))?;
    let t = tensor_over_algebra(&dual_as_right_module(a)?, &left)?;
    Ok(cohomology(t.complex())?.space())
}

/// Cohomology dims of `Hom_{A^e}(ω^{-1}, A)`, the dualizing description of HH.
pub fn hh_via_dualizing(r: &DiagonalResolution) -> Result<GradedSpace> {
    let w = omega_inverse(r)?;
    let h = hom_over_algebra(&w, &r.diagonal()?)?;
    Ok(cohomology(h.complex())?.space())
}

/// The pairing `A^* ⊗_{A^e} A → k`, `φ ⊗ x ↦ φ(x)`.
#[derive(Clone, Debug)]
pub struct Integration {
    pub algebra: Alg,
    dual: FiniteModule,
    diag: FiniteModule,
}

pub fn integrate(a: &Alg) -> Result<Integration> {
    a.require_degree_zero()?;
    let ae = enveloping_of(a);
    Ok(Integration { algebra: a.clone(), dual: bimodule_linear_dual(a, &ae)?, diag: diagonal_module(a, &ae)? })
}

impl Integration {
    pub fn eval(&self, phi: &[Rational], x: &[Rational]) -> Rational {
        phi.iter().zip(x).map(|(p, v)| p * v).sum()
    }

    /// Checks `∫(φ·z ⊗ x) = ∫(φ ⊗ z·x)` for all basis `φ`, `x` and
    /// `z ∈ A^e`, where `φ·z` is the right action dual to the left action
    /// on `A`: `(φ·(a⊗b))(x) = φ(a x b)`.
    pub fn vanishes_on_balancing(&self) -> bool {
        let n = self.algebra.dim();
        for z in 0..n * n {
            let act = &self.diag.action[z];
            let right = act.transpose();
            for p in 0..n {
                let phi = self.algebra.basis(p);
                let phiz = right.mul_vec(&phi);
                for xb in 0..n {
                    let x = self.algebra.basis(xb);
                    if self.eval(&phiz, &x) != self.eval(&phi, &act.mul_vec(&x)) {
                        return false;
                    }
                }
            }
        }
        // The dual bimodule is the one used by the Serre functor.
        self.dual.dim() == n
    }
}

/// Outcome of comparing `Hom_A(N, M)^*` with `M^* ⊗_A N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualHomReport {
    pub hom_dual_dims: GradedSpace,
    pub tensor_dims: GradedSpace,
    pub map_closed: bool,
    pub quasi_iso: bool,
}

/// Builds `Θ: M^* ⊗_A N → Hom_A(N, M)^*`,
/// `Θ(φ ⊗ g_j)(ψ) = (-1)^{s_j(|φ|+1)} φ(ψ(g_j))`, and tests it on cohomology.
pub fn dualhom_check(n: &PerfectModule, m: &PerfectModule) -> Result<DualHomReport> {
    if **n.algebra() != **m.algebra() {
        return Err(Error::AlgebraMismatch("dualhom_check".into()));
    }
    let a = m.algebra();
    let op: Alg = Arc::new(opposite(a));
    let mfin = restrict_to_ground(m)?.to_finite_module()?;
    let h = hom_over_algebra(n, &mfin)?;
    let mstar = mfin.linear_dual(&op)?;
    let t = tensor_over_algebra(&mstar, n)?;
    // Dual of the Hom complex.
    let hd_deg: Vec<i32> = h.blocked.degrees.iter().map(|p| -p).collect();
    let hd_d = signed_columns(&h.blocked.d.transpose(), &hd_deg, 0, true);
    let (hd, hd_layout) = Complex::from_flat(&hd_deg, &hd_d)?;
    // Θ on unsplit coordinates.
    let rows = h.blocked.unsplit_dim();
    let cols = t.blocked.unsplit_dim();
    let mut theta = Matrix::zeros(rows, cols);
    let shifts = n.carrier.shifts();
    for (j, s) in shifts.iter().enumerate() {
        for (r, p) in mfin.degrees.iter().enumerate() {
            let phi_deg = -(*p as i64);
            let sg = sign(*s as i64 * (phi_deg + 1));
            theta.set(h.blocked.block_offset(j) + r, t.blocked.block_offset(j) + r, sg);
        }
    }
    let theta = &(&h.blocked.inclusion().transpose() * &theta) * &t.blocked.inclusion();
    let f = ChainMap::from_flat(t.complex(), &t.blocked.layout, &hd, &hd_layout, 0, &theta)?;
    let map_closed = f.is_closed();
    let quasi_iso = map_closed && cone(&f)?.0.is_acyclic()?;
    Ok(DualHomReport {
        hom_dual_dims: cohomology(&hd)?.space(),
        tensor_dims: cohomology(t.complex())?.space(),
        map_closed,
        quasi_iso,
    })
}

/// Evaluation `ε: M ⊗_k D_A M → A` and coevaluation for separable `A`.
#[derive(Clone, Debug)]
pub struct CoevEval {
    /// `M ⊠ D_A M` over `A^e`.
    pub product: PerfectModule,
    /// `ε` on generators.
    pub evaluation: Vec<Elem>,
    pub evaluation_closed: bool,
    /// `η(1)`: coefficients in `A^e` of the generators of the product.
    pub coevaluation: Vec<Elem>,
    pub coevaluation_closed: bool,
    /// `ε(η(1)) ∈ A`.
    pub composite: Elem,
}

/// `ε(g_i ⊠ g_j^*) = δ_ij (-1)^{s_i + s_i(s_i+1)/2}`, the Koszul-signed
/// evaluation in the rescaled dual basis; `η(1) = ε_sep · Σ_j e(g_j) ⊗ g_j^∨`.
pub fn coevaluation_and_evaluation(m: &PerfectModule, r: &DiagonalResolution) -> Result<CoevEval> {
    let a = &r.algebra;
    a.require_degree_zero()?;
    let Presentation::Separable(eps) = &r.presentation else {
        return Err(Error::NotSeparable(a.name().to_string()));
    };
    let dm = dualize(m)?;
    let product = external_tensor(&PerfectModule::from_arc(m.carrier.clone(), None)?, &PerfectModule::from_arc(dm.carrier.clone(), None)?, &r.enveloping)?;
    let rank = m.carrier.rank();
    let s = m.carrier.shifts();
    let idx = |i: usize, j: usize| i * rank + (rank - 1 - j);
    let mut evaluation = vec![a.zero(); rank * rank];
    for i in 0..rank {
        let mut v = a.unit().to_vec();
        let sg = sign(s[i] as i64 + tri(s[i]));
        v.iter_mut().for_each(|x| *x *= &sg);
        evaluation[idx(i, i)] = v;
    }
    let diag = r.diagonal()?;
    let tw = product.carrier.twist();
    let nprod = rank * rank;
    let evaluation_closed = (0..nprod).all(|jj| {
        let mut acc = a.zero();
        for ii in 0..nprod {
            if !tw.is_zero_at(ii, jj) {
                let v = diag.act(tw.get(ii, jj)).mul_vec(&evaluation[ii]);
                crate::linalg::add_scaled(&mut acc, &q(1), &v);
            }
        }
        crate::linalg::is_zero_vec(&acc)
    });
    let e = m.idempotent_matrix();
    let ae = &r.enveloping;
    let mut coevaluation = vec![ae.zero(); nprod];
    for j in 0..rank {
        let sg = sign(tri(s[j]));
        for k in 0..rank {
            if !e.is_zero_at(k, j) {
                let c = ae.mul(eps, &tensor_elements(e.get(k, j), a.unit()));
                crate::linalg::add_scaled(&mut coevaluation[idx(k, j)], &sg, &c);
            }
        }
    }
    let coevaluation_closed = (0..nprod).all(|ii| {
        let mut acc = ae.zero();
        for jj in 0..nprod {
            if !tw.is_zero_at(ii, jj) {
                crate::linalg::add_scaled(&mut acc, &q(1), &ae.mul(&coevaluation[jj], tw.get(ii, jj)));
            }
        }
        crate::linalg::is_zero_vec(&acc)
    });
    let mut composite = a.zero();
    for (c, v) in coevaluation.iter().zip(&evaluation) {
        if !crate::linalg::is_zero_vec(c) && !crate::linalg::is_zero_vec(v) {
            crate::linalg::add_scaled(&mut composite, &q(1), &diag.act(c).mul_vec(v));
        }
    }
    Ok(CoevEval { product, evaluation, evaluation_closed, coevaluation, coevaluation_closed, composite })
}

/// `dim H^0 Hom_A(Y, X)` and `dim H^0 Hom_A(X, S Y)` for `X = A e_i`,
/// `Y = A e_j` over all idempotents (or the unit).
pub fn serre_dimension_table(a: &Alg) -> Result<Vec<(usize, usize, usize, usize)>> {
    let mut idems: Vec<Elem> = a.idempotents().to_vec();
    if idems.is_empty() {
        idems.push(a.unit().to_vec());
    }
    let proj: Vec<PerfectModule> = idems.iter().map(|e| PerfectModule::projective(a.clone(), e, 0)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (i, x) in proj.iter().enumerate() {
        let xfin = restrict_to_ground(x)?.to_finite_module()?;
        for (j, y) in proj.iter().enumerate() {
            let lhs = cohomology(hom_over_algebra(y, &xfin)?.complex())?.dim(0);
            let sy = serre_apply(a, y)?;
            let rhs = cohomology(hom_over_algebra(x, &sy)?.complex())?.dim(0);
            out.push((i, j, lhs, rhs));
        }
    }
    Ok(out)
}

/// Dimensions of `(e_i ⊗ e_j) · A^*` for the idempotents of `A`.
pub fn dual_component_dims(a: &Alg) -> Result<Vec<Vec<usize>>> {
    let ae = enveloping_of(a);
    let dual = bimodule_linear_dual(a, &ae)?;
    let idems = a.idempotents();
    Ok(idems
        .iter()
        .map(|ei| idems.iter().map(|ej| dual.act(&tensor_elements(ei, ej)).rank()).collect())
        .collect())
}

pub fn is_zero_elem(x: &[Rational]) -> bool {
    x.iter().all(|c| c.is_zero())
}
