//! Seeded random instances.
//!
//! The generator is the 64-bit linear congruential generator
//! `x ← 6364136223846793005·x + 1442695040888963407 (mod 2^64)` (Knuth's
//! MMIX constants); outputs use the high 31 bits `x >> 33`. The state is
//! initialised as `seed ^ 0x9E3779B97F4A7C15` followed by one step, and
//! per-instance streams are derived with [`Lcg::derive`], so randomized
//! suites are reproducible across implementations.

use std::sync::Arc;

use crate::algebra::Alg;
use crate::blocked::{hom_over_algebra, restrict_to_ground};
use crate::error::Result;
use crate::linalg::{add_scaled, is_zero_vec, q, Rational};
use crate::module::{AlgMatrix, Elem, ModuleMap, PerfectModule, SemiFreeModule};

pub const MUL: u64 = 6364136223846793005;
pub const INC: u64 = 1442695040888963407;

/// Small integer coefficients used for all random entries.
pub const COEFFS: [i64; 5] = [-2, -1, 0, 1, 2];

#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        let mut g = Lcg { state: seed ^ 0x9E37_79B9_7F4A_7C15 };
        g.next_u32();
        g
    }

    /// Independent stream for instance `index` of a suite seeded by `seed`.
    pub fn derive(seed: u64, index: u64) -> Self {
        Lcg::new(seed.wrapping_mul(0x100_0000_01B3).wrapping_add(index.wrapping_mul(MUL) ^ INC))
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(MUL).wrapping_add(INC);
        (self.state >> 33) as u32
    }

    /// Uniform-ish integer in `0..n` (modulo reduction).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u32() as usize) % n.max(1)
    }

    pub fn range(&mut self, lo: i32, hi: i32) -> i32 {
        lo + self.below((hi - lo + 1) as usize) as i32
    }

    pub fn coeff(&mut self) -> Rational {
        q(COEFFS[self.below(COEFFS.len())])
    }

    pub fn chance(&mut self, num: usize, den: usize) -> bool {
        self.below(den) < num
    }
}

/// Random element of `e A f`.
pub fn random_corner_element(a: &Alg, e: &[Rational], f: &[Rational], rng: &mut Lcg) -> Elem {
    let mut out = a.zero();
    for b in 0..a.dim() {
        let c = rng.coeff();
        if c != q(0) {
            let x = a.mul(&a.mul(e, &a.basis(b)), f);
            add_scaled(&mut out, &c, &x);
        }
    }
    out
}

/// Random perfect module: at most `max_gens` generators with shifts in
/// `[-2, 2]`, each cut down by an idempotent of the algebra (or 1), and a
/// twist with entries in the compatible corners `ε_j A ε_i`.
pub fn random_perfect(a: &Alg, rng: &mut Lcg, max_gens: usize) -> Result<PerfectModule> {
    let n = 1 + rng.below(max_gens);
    let mut shifts: Vec<i32> = (0..n).map(|_| rng.range(-2, 2)).collect();
    shifts.sort_by(|x, y| y.cmp(x));
    let mut choices: Vec<Elem> = a.idempotents().to_vec();
    choices.push(a.unit().to_vec());
    let eps: Vec<Elem> = (0..n).map(|_| choices[rng.below(choices.len())].clone()).collect();
    let labels: Vec<String> = (0..n).map(|j| format!("g{j}")).collect();
    let mut carrier = None;
    for _ in 0..8 {
        let mut twist = AlgMatrix::zeros(n, n, a.dim());
        for j in 0..n {
            for i in (j + 1)..n {
                if shifts[i] == shifts[j] - 1 && rng.chance(2, 3) {
                    twist.set(i, j, random_corner_element(a, &eps[j], &eps[i], rng));
                }
            }
        }
        if let Ok(m) = SemiFreeModule::new(a.clone(), labels.clone(), shifts.clone(), twist) {
            carrier = Some(m);
            break;
        }
    }
    let carrier = match carrier {
        Some(m) => m,
        None => SemiFreeModule::free(a.clone(), shifts.clone())?,
    };
    let trivial = eps.iter().all(|e| e.as_slice() == a.unit());
    let idem = (!trivial).then(|| {
        let mut e = AlgMatrix::zeros(n, n, a.dim());
        for (j, x) in eps.iter().enumerate() {
            e.set(j, j, x.clone());
        }
        e
    });
    PerfectModule::new(carrier, idem)
}

/// Basis of closed degree-0 maps `P.carrier → Q.carrier` (idempotents not applied).
pub fn closed_map_basis(p: &PerfectModule, target: &PerfectModule) -> Result<Vec<AlgMatrix>> {
    let src = PerfectModule::from_arc(p.carrier.clone(), None)?;
    let tgt = PerfectModule::from_arc(target.carrier.clone(), None)?;
    let n = restrict_to_ground(&tgt)?.to_finite_module()?;
    let h = hom_over_algebra(&src, &n)?;
    let c = h.complex();
    let cycles = c.d(0).kernel();
    let idx = h.blocked.layout.indices_in(0);
    let dim = p.algebra().dim();
    let (rs, rt) = (p.carrier.rank(), target.carrier.rank());
    let mut out = Vec::with_capacity(cycles.cols());
    for col in cycles.columns() {
        let mut m = AlgMatrix::zeros(rt, rs, dim);
        for (pos, v) in col.iter().enumerate() {
            if *v == q(0) {
                continue;
            }
            let flat = idx[pos];
            let j = (0..rs).rev().find(|&j| h.blocked.block_offset(j) <= flat).unwrap();
            let r = flat - h.blocked.block_offset(j);
            let mut e = vec![q(0); dim];
            e[r % dim] = v.clone();
            m.add_at(r / dim, j, &q(1), &e);
        }
        out.push(m);
    }
    Ok(out)
}

/// Random closed degree-0 map `P → Q` compatible with both idempotents.
pub fn random_closed_map(p: &PerfectModule, target: &PerfectModule, rng: &mut Lcg) -> Result<ModuleMap> {
    let basis = closed_map_basis(p, target)?;
    let dim = p.algebra().dim();
    let mut m = AlgMatrix::zeros(target.carrier.rank(), p.carrier.rank(), dim);
    for b in &basis {
        let c = rng.coeff();
        if c != q(0) {
            m = m.add(&b.scale(&c))?;
        }
    }
    let f = ModuleMap::new(p.carrier.clone(), target.carrier.clone(), 0, m)?;
    PerfectModule::sandwich(&f, p, target)
}

pub fn random_closed_endo(p: &PerfectModule, rng: &mut Lcg) -> Result<ModuleMap> {
    random_closed_map(p, p, rng)
}

/// True when a map has at least one nonzero entry.
pub fn is_nonzero(f: &ModuleMap) -> bool {
    (0..f.matrix.rows()).any(|i| (0..f.matrix.cols()).any(|j| !is_zero_vec(f.matrix.get(i, j))))
}

pub fn shared(a: crate::algebra::DgAlgebra) -> Alg {
    Arc::new(a)
}
