//! Künneth map, kernel-induced maps `Φ_K`, the cup `∪_B`, the scalar
//! pairing on `HH_0(A^op) ⊗ HH_0(A)` and the Riemann-Roch verifier.
//!
//! The closed form of the pairing comes from `Φ_A ∘ 𝔎`: the right
//! `^eA`-action on `A` is `x·(b ⊗ a) = b x a`, so `⟨[b], [a]⟩ = tr(x ↦ bxa)`.
//! The cup is computed independently from a diagonal resolution `P` of `B`:
//! its Euler class `S ∈ HH_0(B ⊗ B^op)` and the trace form
//! `T[p][q] = tr(x ↦ e_p x e_q)` give the contraction form `κ_B = T S T`.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{opposite, tensor_algebras, tensor_elements, Alg, DgAlgebra};
use crate::blocked::{restrict_to_ground, tensor_over_algebra};
use crate::catalog::{catalog_entry, opposite_entry, CatalogEntry, Presentation};
use crate::complex::euler_trace;
use crate::duality::{diagonal_module, diagonal_resolution, DiagonalResolution};
use crate::error::{Error, Result};
use crate::hochschild::{euler_class, hh0_space, hh_class, HH0Space, HochschildClass};
use crate::linalg::{fmt_rational, q, sign, Matrix, Rational};
use crate::module::{external_tensor, left_factor_action, restrict_to_left_factor, transport, ModuleMap, PerfectModule};
use crate::random::{random_closed_endo, random_perfect, Lcg};

/// `𝔎([x], [y]) = [x ⊗ y]` in `HH_0(A ⊗ B)`; `target` is `HH_0(A ⊗ B)`.
pub fn kunneth(x: &HochschildClass, y: &HochschildClass, target: &Arc<HH0Space>) -> Result<HochschildClass> {
    let (na, nb) = (x.space.algebra.dim(), y.space.algebra.dim());
    if target.algebra.dim() != na * nb {
        return Err(Error::AlgebraMismatch("Künneth target".into()));
    }
    Ok(target.class_of(&tensor_elements(&x.representative(), &y.representative())))
}

/// `⟨λ, μ⟩ = tr_A(x ↦ b x a)` for `λ = [b] ∈ HH_0(A^op)`, `μ = [a] ∈ HH_0(A)`.
pub fn pair_scalar(lambda: &HochschildClass, mu: &HochschildClass) -> Result<Rational> {
    let a = &mu.space.algebra;
    a.require_degree_zero()?;
    if *lambda.space.algebra != opposite(a) {
        return Err(Error::AlgebraMismatch("pairing needs classes over A^op and A".into()));
    }
    Ok(a.sandwich_trace(&lambda.representative(), &mu.representative()))
}

/// `T[p][q] = tr(x ↦ e_p x e_q)`.
pub fn trace_form(a: &DgAlgebra) -> Matrix {
    let n = a.dim();
    let mut t = Matrix::zeros(n, n);
    for p in 0..n {
        for r in 0..n {
            t.set(p, r, a.sandwich_trace(&a.basis(p), &a.basis(r)));
        }
    }
    t
}

/// Euler class of the resolution as an `n × n` matrix:
/// `S[b][c]` = coefficient of `e_b ⊗ e_c` in `Σ_j (-1)^{s_j} E_jj`.
pub fn euler_matrix(r: &DiagonalResolution) -> Matrix {
    let n = r.algebra.dim();
    let mut s = Matrix::zeros(n, n);
    for (shift, e) in r.supertrace_terms() {
        let sg = sign(shift as i64);
        for (i, c) in e.iter().enumerate() {
            if *c != q(0) {
                s.add_at(i / n, i % n, &(c * &sg));
            }
        }
    }
    s
}

/// Contraction form of `B` read off a diagonal resolution.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub algebra: Alg,
    /// `κ[b'][b]` pairs `e_{b'} ∈ B^op` with `e_b ∈ B`.
    pub form: Matrix,
}

pub fn contraction(r: &DiagonalResolution) -> Contraction {
    let t = trace_form(&r.algebra);
    let s = euler_matrix(r);
    Contraction { algebra: r.algebra.clone(), form: &(&t * &s) * &t }
}

/// Contraction form for `B = X ⊗ Y` from the forms of the factors.
pub fn contraction_product(x: &Contraction, y: &Contraction) -> Contraction {
    Contraction { algebra: Arc::new(tensor_algebras(&x.algebra, &y.algebra)), form: x.form.kron(&y.form) }
}

/// Reads a class over `X ⊗ Y` as a `dim X × dim Y` coefficient matrix.
fn as_matrix(x: &[Rational], rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for (i, c) in x.iter().enumerate() {
        if *c != q(0) {
            m.set(i / cols, i % cols, c.clone());
        }
    }
    m
}

/// `∪_B: HH_0(A ⊗ B^op) ⊗ HH_0(B ⊗ C^op) → HH_0(A ⊗ C^op)`,
/// `[a ⊗ b'] ∪ [b ⊗ c] = κ_B(b', b) [a ⊗ c]`; `target` is `HH_0(A ⊗ C^op)`.
pub fn cup(x: &HochschildClass, y: &HochschildClass, kappa: &Contraction, target: &Arc<HH0Space>) -> Result<HochschildClass> {
    let nb = kappa.algebra.dim();
    let (nx, ny) = (x.space.algebra.dim(), y.space.algebra.dim());
    if nx % nb != 0 || ny % nb != 0 {
        return Err(Error::AlgebraMismatch("cup: middle algebra does not divide".into()));
    }
    let (na, nc) = (nx / nb, ny / nb);
    if target.algebra.dim() != na * nc {
        return Err(Error::AlgebraMismatch("cup target".into()));
    }
    let xm = as_matrix(&x.representative(), na, nb);
    let ym = as_matrix(&y.representative(), nb, nc);
    let z = &(&xm * &kappa.form) * &ym;
    let flat: Vec<Rational> = (0..na * nc).map(|i| z.get(i / nc, i % nc).clone()).collect();
    Ok(target.class_of(&flat))
}

/// `Φ_K(λ) = hh_A(K|_A, e ∘ (·λ))`: the right action of a representative of
/// `λ ∈ HH_0(B)` is a closed `A`-linear endomorphism of the restriction of
/// `K` to `A` (`K` perfect over `A ⊗ B^op`).
pub fn phi_map(kernel: &PerfectModule, a: &Arc<HH0Space>, lambda: &HochschildClass) -> Result<HochschildClass> {
    let b = &lambda.space.algebra;
    b.require_degree_zero()?;
    let bop = opposite(b);
    let alg = &a.algebra;
    let expected = tensor_algebras(alg, &bop);
    if **kernel.algebra() != expected {
        return Err(Error::AlgebraMismatch("phi_map kernel must live over A ⊗ B^op".into()));
    }
    let r = restrict_to_left_factor(kernel, alg, &bop)?;
    let act = left_factor_action(&r, &bop, &lambda.representative())?;
    let f = r.idempotent_map().compose(&act)?;
    hh_class(a, &r, &f)
}

/// Everything attached to one catalog algebra.
#[derive(Clone, Debug)]
pub struct PairingContext {
    pub entry: CatalogEntry,
    pub algebra: Alg,
    pub opposite: Alg,
    pub hh: Arc<HH0Space>,
    pub hh_op: Arc<HH0Space>,
    pub resolution: DiagonalResolution,
    pub kappa: Contraction,
    pub kappa_op: Contraction,
}

impl PairingContext {
    pub fn new(entry: &CatalogEntry) -> Result<Self> {
        let algebra: Alg = Arc::new(entry.algebra.clone());
        algebra.require_degree_zero()?;
        let op_entry = opposite_entry(entry);
        let opposite: Alg = Arc::new(op_entry.algebra.clone());
        let resolution = diagonal_resolution(entry)?;
        let kappa = contraction(&resolution);
        let kappa_op = contraction(&diagonal_resolution(&op_entry)?);
        Ok(PairingContext {
            entry: entry.clone(),
            hh: hh0_space(&algebra)?,
            hh_op: hh0_space(&opposite)?,
            algebra,
            opposite,
            resolution,
            kappa,
            kappa_op,
        })
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::new(&catalog_entry(name)?)
    }

    pub fn name(&self) -> &str {
        self.algebra.name()
    }

    /// `⟨[e_i], [e_j]⟩` over the idempotents (or the unit).
    pub fn cartan_pairing(&self) -> Result<Vec<Vec<Rational>>> {
        let idems = idempotents_or_unit(&self.algebra);
        idems
            .iter()
            .map(|ei| idems.iter().map(|ej| pair_scalar(&self.hh_op.class_of(ei), &self.hh.class_of(ej))).collect())
            .collect()
    }

    /// The three constructions of the pairing on `λ ⊗ μ`:
    /// the closed form, `Φ_A ∘ 𝔎` with `A` (resolved by `P`) as a
    /// `(k, ^eA)`-bimodule, and `hh(A) ∪_{^eA} 𝔎(λ, μ)`.
    pub fn three_pairings(&self, lambda: &HochschildClass, mu: &HochschildClass) -> Result<[Rational; 3]> {
        let closed = pair_scalar(lambda, mu)?;
        let n = self.algebra.dim();
        let k: Alg = Arc::new(crate::catalog::ground_field());
        let hk = hh0_space(&k)?;
        // ^eA = A^op ⊗ A; its opposite is A ⊗ A^op = A^e, over which P lives.
        let ea: Alg = Arc::new(tensor_algebras(&self.opposite, &self.algebra));
        let hh_ea = hh0_space(&ea)?;
        let km = kunneth(lambda, mu, &hh_ea)?;
        // P over A^e is a kernel over k ⊗ (^eA)^op.
        let p_over_k = &self.resolution.resolution;
        let via_phi = phi_map(p_over_k, &hk, &km)?.coords[0].clone();
        let kappa_ea = contraction_product(&self.kappa_op, &self.kappa);
        let s = euler_matrix(&self.resolution);
        let y = as_matrix(&km.representative(), n, n);
        let mut via_cup = Rational::from_integer(0.into());
        for i in 0..n * n {
            let si = s.get(i / n, i % n);
            if *si == q(0) {
                continue;
            }
            for j in 0..n * n {
                let yj = y.get(j / n, j % n);
                if *yj != q(0) {
                    via_cup += si * kappa_ea.form.get(i, j) * yj;
                }
            }
        }
        Ok([closed, via_phi, via_cup])
    }

    /// `hh_{A⊗A^op}(A) ∪_A λ` for `λ ∈ HH_0(A)`, which must give back `λ`.
    pub fn unit_law(&self, lambda: &HochschildClass) -> Result<HochschildClass> {
        let ae = &self.resolution.enveloping;
        let hh_ae = hh0_space(ae)?;
        let diag = euler_class(&hh_ae, &self.resolution.resolution)?;
        cup(&diag, lambda, &self.kappa, &self.hh)
    }

    /// `Φ_P(λ)` for the resolution `P` of the diagonal; equals `λ`.
    pub fn diagonal_phi(&self, lambda: &HochschildClass) -> Result<HochschildClass> {
        phi_map(&self.resolution.resolution, &self.hh, lambda)
    }

    /// Prop adapt: `hh_k(A ⊗_{^eA} M, id ⊗ f)` against
    /// `hh_{A^e}(A) ∪_{^eA} hh_{^eA}(M, f)` for `M` perfect over `^eA`.
    pub fn adapt(&self, m: &PerfectModule, f: &ModuleMap) -> Result<(Rational, Rational)> {
        let ea = m.algebra();
        let n = self.algebra.dim();
        let diag = diagonal_module(&self.algebra, &Arc::new(opposite(ea)))?;
        let t = tensor_over_algebra(&diag, m)?;
        let id = Matrix::identity(diag.dim());
        let lhs = euler_trace(&t.map(&id, 0, f, &t)?)?;
        let y = hh_class(&hh0_space(ea)?, m, f)?.representative();
        let s = euler_matrix(&self.resolution);
        let kappa_ea = contraction_product(&self.kappa_op, &self.kappa);
        let mut rhs = Rational::from_integer(0.into());
        for i in 0..n * n {
            let si = s.get(i / n, i % n);
            if *si == q(0) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if *yj != q(0) {
                    rhs += si * kappa_ea.form.get(i, j) * yj;
                }
            }
        }
        Ok((lhs, rhs))
    }

    /// A random verify-rr instance for stream `(seed, index)`.
    pub fn random_instance(&self, seed: u64, index: u64) -> Result<RrInstance> {
        let mut rng = Lcg::derive(seed, index);
        let m = random_perfect(&self.algebra, &mut rng, 4)?;
        let f = random_closed_endo(&m, &mut rng)?;
        let n = random_perfect(&self.opposite, &mut rng, 4)?;
        let g = random_closed_endo(&n, &mut rng)?;
        Ok(RrInstance { m, f, n, g, descriptor: format!("{}#{index}", self.name()), seed })
    }

    pub fn verify_random(&self, seed: u64, index: u64) -> Result<PairingReport> {
        let inst = self.random_instance(seed, index)?;
        verify_rr_in(self, &inst)
    }
}

/// One sample of the Main Theorem: `M, f` over `A` and `N, g` over `A^op`.
#[derive(Clone, Debug)]
pub struct RrInstance {
    pub m: PerfectModule,
    pub f: ModuleMap,
    pub n: PerfectModule,
    pub g: ModuleMap,
    pub descriptor: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub descriptor: String,
    pub seed: u64,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub equal: bool,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::io::rational_string(x))
}

impl PairingReport {
    pub fn new(descriptor: String, seed: u64, lhs: Rational, rhs: Rational) -> Self {
        let equal = lhs == rhs;
        PairingReport { descriptor, seed, lhs, rhs, equal }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: lhs={} rhs={}",
            if self.equal { "PASS" } else { "FAIL" },
            self.descriptor,
            fmt_rational(&self.lhs),
            fmt_rational(&self.rhs)
        )
    }
}

/// `hh_k(N ⊗_A M, g ⊗ f)` against `⟨hh_{A^op}(N, g), hh_A(M, f)⟩`.
pub fn verify_rr(m: &PerfectModule, f: &ModuleMap, n: &PerfectModule, g: &ModuleMap) -> Result<PairingReport> {
    let a = m.algebra().clone();
    let hh = hh0_space(&a)?;
    let hh_op = hh0_space(n.algebra())?;
    verify_rr_with(&hh, &hh_op, m, f, n, g, "verify-rr".into(), 0)
}

fn verify_rr_in(ctx: &PairingContext, inst: &RrInstance) -> Result<PairingReport> {
    verify_rr_with(&ctx.hh, &ctx.hh_op, &inst.m, &inst.f, &inst.n, &inst.g, inst.descriptor.clone(), inst.seed)
}

fn verify_rr_with(
    hh: &Arc<HH0Space>,
    hh_op: &Arc<HH0Space>,
    m: &PerfectModule,
    f: &ModuleMap,
    n: &PerfectModule,
    g: &ModuleMap,
    descriptor: String,
    seed: u64,
) -> Result<PairingReport> {
    let rn = restrict_to_ground(n)?;
    let nfin = rn.to_finite_module()?;
    let gflat = rn.map_matrix(g, &rn);
    let t = tensor_over_algebra(&nfin, m)?;
    let lhs = euler_trace(&t.map(&gflat, g.degree, f, &t)?)?;
    let rhs = pair_scalar(&hh_class(hh_op, n, g)?, &hh_class(hh, m, f)?)?;
    Ok(PairingReport::new(descriptor, seed, lhs, rhs))
}

/// Final remark of the pairing section for separable `B`:
/// `hh_{A⊗C^op}(K₁ ⊗_B K₂)` against `hh(K₁) ∪_B hh(K₂)`.
/// `K₁ ⊗_B K₂` is the summand of `K₁ ⊗_k K₂` cut out by the separability
/// idempotent `ε` acting through `B^op ⊗ B`.
pub fn verify_kernel_composition(
    k1: &PerfectModule,
    k2: &PerfectModule,
    a: &Alg,
    b: &CatalogEntry,
    c: &Alg,
    descriptor: String,
) -> Result<PairingReport> {
    let Presentation::Separable(eps) = &b.presentation else {
        return Err(Error::NotSeparable(b.algebra.name().to_string()));
    };
    let balg: Alg = Arc::new(b.algebra.clone());
    let bop = opposite(&balg);
    let cop = opposite(c);
    let (na, nb, nc) = (a.dim(), balg.dim(), c.dim());
    let ab = tensor_algebras(a, &bop);
    let bc = tensor_algebras(&balg, &cop);
    if **k1.algebra() != ab || **k2.algebra() != bc {
        return Err(Error::AlgebraMismatch("kernel composition".into()));
    }
    let big = Arc::new(tensor_algebras(&ab, &bc));
    let ext = external_tensor(k1, k2, &big)?;
    let ac: Alg = Arc::new(tensor_algebras(a, &cop));
    let middle = tensor_algebras(&bop, &balg);
    let target = Arc::new(tensor_algebras(&ac, &middle));
    let dim = na * nb * nb * nc;
    let mut phi = Matrix::zeros(dim, dim);
    for x in 0..na {
        for b1 in 0..nb {
            for b2 in 0..nb {
                for z in 0..nc {
                    let src = (x * nb + b1) * (nb * nc) + b2 * nc + z;
                    let tgt = (x * nc + z) * (nb * nb) + b1 * nb + b2;
                    phi.set(tgt, src, q(1));
                }
            }
        }
    }
    let moved = transport(&ext, &target, &phi)?;
    let r = restrict_to_left_factor(&moved, &ac, &middle)?;
    let cut = r.idempotent_map().compose(&left_factor_action(&r, &middle, eps)?)?;
    let composed = PerfectModule::from_arc(r.carrier.clone(), Some(cut.matrix.clone()))?;
    let hh_ac = hh0_space(&ac)?;
    let lhs_class = euler_class(&hh_ac, &composed)?;
    let kappa = contraction(&diagonal_resolution(b)?);
    let x = euler_class(&hh0_space(&Arc::new(ab))?, k1)?;
    let y = euler_class(&hh0_space(&Arc::new(bc))?, k2)?;
    let rhs_class = cup(&x, &y, &kappa, &hh_ac)?;
    // Compare classes through a functional that separates HH_0: report the
    // first differing coordinate, or the first coordinate when equal.
    let pos = (0..hh_ac.dim()).find(|&i| lhs_class.coords[i] != rhs_class.coords[i]).unwrap_or(0);
    let zero = Rational::from_integer(0.into());
    let pick = |cl: &HochschildClass| cl.coords.get(pos).cloned().unwrap_or_else(|| zero.clone());
    let mut rep = PairingReport::new(descriptor, 0, pick(&lhs_class), pick(&rhs_class));
    rep.equal = lhs_class == rhs_class;
    Ok(rep)
}

/// Idempotents of the algebra, or the unit when none are recorded.
pub fn idempotents_or_unit(a: &DgAlgebra) -> Vec<Vec<Rational>> {
    if a.idempotents().is_empty() {
        vec![a.unit().to_vec()]
    } else {
        a.idempotents().to_vec()
    }
}

/// `dim e_i A e_j` by enumerating basis elements fixed by `x ↦ e_i x e_j`;
/// valid for the path-algebra bases of the catalog.
pub fn cartan_by_enumeration(a: &DgAlgebra) -> Vec<Vec<usize>> {
    let idems = idempotents_or_unit(a);
    idems
        .iter()
        .map(|ei| {
            idems
                .iter()
                .map(|ej| (0..a.dim()).filter(|&b| a.mul(&a.mul(ei, &a.basis(b)), ej) == a.basis(b)).count())
                .collect()
        })
        .collect()
}
