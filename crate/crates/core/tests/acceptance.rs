//! Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.

use std::sync::Arc;
use std::time::Instant;

use ncrr::algebra::{opposite, tensor_algebras, tensor_elements, Alg};
use ncrr::blocked::restrict_to_ground;
use ncrr::catalog::{catalog_entry, CatalogEntry, NAMES};
use ncrr::complex::{chain_supertrace, euler_trace, GradedSpace};
use ncrr::duality::{diagonal_resolution, dual_tensor_omega_inverse, dualhom_check, dualize, hh_via_dualizing, serre_dimension_table};
use ncrr::hochschild::{euler_class, hh0_space, hh_class};
use ncrr::io::{run_command, CommandArgs, Workspace};
use ncrr::linalg::q;
use ncrr::module::PerfectModule;
use ncrr::pairing::{cartan_by_enumeration, cup, phi_map, verify_kernel_composition, PairingContext};
use ncrr::random::{random_closed_endo, random_closed_map, random_perfect, Lcg};

const SEED: u64 = 42;
const SMALL: [&str; 6] = ["k", "kxk", "M2", "A2", "A3", "Kronecker"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn alg(name: &str) -> Alg {
    Arc::new(catalog_entry(name).unwrap().algebra)
}

fn suite_args(count: usize, jobs: usize) -> CommandArgs {
    CommandArgs { random: Some(count), seed: SEED, jobs, ..CommandArgs::default() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for name in NAMES {
        let ctx = PairingContext::from_name(name).unwrap();
        let reps = ncrr::io::random_rr_batch(&ctx, SEED, 200, 4).unwrap();
        let ok = reps.iter().filter(|r| r.equal).count();
        pass &= ok == 200;
        parts.push(format!("{name} {ok}/200"));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    outcome(pass, format!("{} in {secs:.1}s", parts.join(", ")))
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, n) in [("A2", 2usize), ("A3", 3)] {
        let ctx = PairingContext::from_name(name).unwrap();
        let table = ctx.cartan_pairing().unwrap();
        let oracle = cartan_by_enumeration(&ctx.algebra);
        let upper: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i <= j) as usize).collect()).collect();
        let as_q: Vec<Vec<_>> = oracle.iter().map(|r| r.iter().map(|&d| q(d as i64)).collect()).collect();
        pass &= table == as_q && oracle == upper;
        detail.push(format!("{name} {oracle:?}"));
    }
    outcome(pass, detail.join("; "))
}

fn criterion_3() -> Outcome {
    let mut ok = 0;
    let mut nonzero = 0;
    for i in 0..1000u64 {
        let a = alg(SMALL[(i % 6) as usize]);
        let mut rng = Lcg::derive(SEED, i);
        let m = random_perfect(&a, &mut rng, 4).unwrap();
        let f = random_closed_endo(&m, &mut rng).unwrap();
        let fr = restrict_to_ground(&m).unwrap().map_endo(&f).unwrap();
        let (s, e) = (chain_supertrace(&fr).unwrap(), euler_trace(&fr).unwrap());
        ok += (s == e) as usize;
        nonzero += (e != q(0)) as usize;
    }
    outcome(ok == 1000, format!("{ok}/1000 equal ({nonzero} with nonzero trace)"))
}

fn criterion_4() -> Outcome {
    let mut ok = 0;
    for i in 0..200u64 {
        let a = alg(NAMES[(i % 7) as usize]);
        let h = hh0_space(&a).unwrap();
        let mut rng = Lcg::derive(SEED ^ 0xC0, i);
        let m = random_perfect(&a, &mut rng, 3).unwrap();
        let n = random_perfect(&a, &mut rng, 3).unwrap();
        let g = random_closed_map(&m, &n, &mut rng).unwrap();
        let h2 = random_closed_map(&n, &m, &mut rng).unwrap();
        let lhs = hh_class(&h, &n, &g.compose(&h2).unwrap()).unwrap();
        let rhs = hh_class(&h, &m, &h2.compose(&g).unwrap()).unwrap();
        ok += (lhs == rhs) as usize;
    }
    outcome(ok == 200, format!("{ok}/200 pairs"))
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for name in NAMES {
        let entry = catalog_entry(name).unwrap();
        let a = Arc::new(entry.algebra.clone());
        let h0 = hh0_space(&a).unwrap().dim();
        let dims = hh_via_dualizing(&diagonal_resolution(&entry).unwrap()).unwrap();
        pass &= dims == GradedSpace::new([(0, h0)]);
        detail.push(format!("{name} {h0}"));
    }
    outcome(pass, format!("dim HH_0 = dim H^0, higher dims 0: {}", detail.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut dd = 0;
    let mut total = 0;
    for (k, name) in NAMES.iter().enumerate() {
        let a = alg(name);
        for i in 0..20u64 {
            let mut rng = Lcg::derive(SEED + k as u64, i);
            let m = random_perfect(&a, &mut rng, 4).unwrap();
            let back = dualize(&dualize(&m).unwrap()).unwrap();
            dd += (*back.carrier == *m.carrier && back.idempotent_matrix() == m.idempotent_matrix()) as usize;
            total += 1;
        }
    }
    let mut qi = 0;
    for i in 0..50u64 {
        let a = alg(NAMES[(i % 7) as usize]);
        let mut rng = Lcg::derive(SEED ^ 0xD0, i);
        let n = random_perfect(&a, &mut rng, 3).unwrap();
        let m = random_perfect(&a, &mut rng, 3).unwrap();
        let r = dualhom_check(&n, &m).unwrap();
        qi += (r.quasi_iso && r.hom_dual_dims == r.tensor_dims) as usize;
    }
    let mut omega = 0;
    let mut serre = 0;
    for name in NAMES {
        let entry = catalog_entry(name).unwrap();
        let r = diagonal_resolution(&entry).unwrap();
        omega += (dual_tensor_omega_inverse(&r).unwrap() == GradedSpace::new([(0, r.algebra.dim())])) as usize;
        serre += serre_dimension_table(&r.algebra).unwrap().iter().all(|(_, _, l, r)| l == r) as usize;
    }
    let pass = dd == total && qi == 50 && omega == 7 && serre == 7;
    outcome(pass, format!("D∘D {dd}/{total}, dualhom {qi}/50, A^*⊗ω⁻¹ {omega}/7, Serre {serre}/7"))
}

fn catalog_kernels(entry: &CatalogEntry, rng: &mut Lcg) -> Vec<PerfectModule> {
    let a: Alg = Arc::new(entry.algebra.clone());
    let ae: Alg = Arc::new(tensor_algebras(&a, &opposite(&a)));
    let mut out = vec![diagonal_resolution(entry).unwrap().resolution];
    let idems = ncrr::pairing::idempotents_or_unit(&a);
    for e in &idems {
        for f in &idems {
            out.push(PerfectModule::projective(ae.clone(), &tensor_elements(e, f), 0).unwrap());
        }
    }
    for _ in 0..2 {
        out.push(random_perfect(&ae, rng, 2).unwrap());
    }
    out
}

fn criterion_7() -> Outcome {
    let mut three = (0, 0);
    let mut unit = (0, 0);
    let mut action = (0, 0);
    for name in NAMES {
        let ctx = PairingContext::from_name(name).unwrap();
        for i in 0..ctx.hh_op.dim() {
            for j in 0..ctx.hh.dim() {
                let [x, y, z] = ctx.three_pairings(&ctx.hh_op.basis_class(i), &ctx.hh.basis_class(j)).unwrap();
                three.0 += (x == y && y == z) as usize;
                three.1 += 1;
            }
        }
        for j in 0..ctx.hh.dim() {
            let l = ctx.hh.basis_class(j);
            unit.0 += (ctx.unit_law(&l).unwrap() == l) as usize;
            unit.1 += 1;
        }
        let ae = Arc::new(tensor_algebras(&ctx.algebra, &ctx.opposite));
        let hae = hh0_space(&ae).unwrap();
        let mut rng = Lcg::derive(SEED, 7);
        for k in catalog_kernels(&ctx.entry, &mut rng) {
            let hk = euler_class(&hae, &k).unwrap();
            for j in 0..ctx.hh.dim() {
                let l = ctx.hh.basis_class(j);
                let lhs = phi_map(&k, &ctx.hh, &l).unwrap();
                let rhs = cup(&hk, &l, &ctx.kappa, &ctx.hh).unwrap();
                action.0 += (lhs == rhs) as usize;
                action.1 += 1;
            }
        }
    }
    let pass = three.0 == three.1 && unit.0 == unit.1 && action.0 == action.1;
    outcome(pass, format!("three pairings {}/{}, unit law {}/{}, Φ_K = hh(K)∪ {}/{}", three.0, three.1, unit.0, unit.1, action.0, action.1))
}

fn criterion_8() -> Outcome {
    let outer = ["k", "kxk", "A2", "M2"];
    let middle = ["k", "kxk", "M2"];
    let mut ok = 0;
    let mut total = 0;
    let mut idx = 0u64;
    for bn in middle {
        let b = catalog_entry(bn).unwrap();
        for an in outer {
            for cn in outer {
                if (idx % 2) == 1 && an != cn {
                    idx += 1;
                    continue;
                }
                let a = alg(an);
                let c = alg(cn);
                let ab = Arc::new(tensor_algebras(&a, &opposite(&b.algebra)));
                let bc = Arc::new(tensor_algebras(&b.algebra, &opposite(&c)));
                let mut rng = Lcg::derive(SEED ^ 0x88, idx);
                let k1 = random_perfect(&ab, &mut rng, 2).unwrap();
                let k2 = random_perfect(&bc, &mut rng, 2).unwrap();
                let rep = verify_kernel_composition(&k1, &k2, &a, &b, &c, format!("{an}|{bn}|{cn}")).unwrap();
                ok += rep.equal as usize;
                total += 1;
                idx += 1;
            }
        }
    }
    outcome(ok == total && total >= 20, format!("{ok}/{total} kernel pairs over separable B"))
}

fn criterion_9() -> Outcome {
    let ws = Workspace::catalog_only();
    let first = run_command(&ws, "verify-suite", &suite_args(20, 1)).unwrap().to_json();
    let second = run_command(&ws, "verify-suite", &suite_args(20, 4)).unwrap().to_json();
    let again = run_command(&ws, "verify-suite", &suite_args(20, 1)).unwrap().to_json();
    outcome(first == second && first == again, format!("3 runs of verify-suite --seed 42, {} bytes each", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Main Theorem suite (verify_rr, 200 per catalog algebra)", criterion_1),
        ("Cartan-matrix oracle (A2, A3)", criterion_2),
        ("chain_supertrace = euler_trace (1000 endomorphisms)", criterion_3),
        ("conjugation invariance (200 pairs)", criterion_4),
        ("two HH descriptions", criterion_5),
        ("duality suite", criterion_6),
        ("pairing coherence", criterion_7),
        ("kernel composition", criterion_8),
        ("determinism (seed 42)", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += (!o.pass) as usize;
        println!(
            "{} criterion {}: {name} — {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
