use std::sync::Arc;

use ncrr::algebra::{opposite, tensor_algebras};
use ncrr::catalog::{self, catalog_entry};
use ncrr::hochschild::{euler_class, hh0_space};
use ncrr::linalg::q;
use ncrr::module::{cone_module, AlgMatrix, ModuleMap, PerfectModule};
use ncrr::pairing::*;
use ncrr::random::{random_closed_endo, random_perfect, Lcg};

#[test]
fn cartan_tables() {
    let ctx = PairingContext::from_name("A2").unwrap();
    let t = ctx.cartan_pairing().unwrap();
    assert_eq!(t, vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
    assert_eq!(cartan_by_enumeration(&ctx.algebra), vec![vec![1, 1], vec![0, 1]]);
    let ctx = PairingContext::from_name("A3").unwrap();
    let t = ctx.cartan_pairing().unwrap();
    let expect: Vec<Vec<_>> = (0..3).map(|i| (0..3).map(|j| q((i <= j) as i64)).collect()).collect();
    assert_eq!(t, expect);
    let ctx = PairingContext::from_name("M2").unwrap();
    let e11 = ctx.algebra.basis(0);
    assert_eq!(pair_scalar(&ctx.hh_op.class_of(&e11), &ctx.hh.class_of(&e11)).unwrap(), q(1));
}

#[test]
fn pair_scalar_ignores_commutators() {
    for name in ["A2", "M2", "Kronecker"] {
        let ctx = PairingContext::from_name(name).unwrap();
        let a = &ctx.algebra;
        let n = a.dim();
        for u in 0..n {
            for v in 0..n {
                let c: Vec<_> = a.mul(&a.basis(u), &a.basis(v)).iter().zip(a.mul(&a.basis(v), &a.basis(u))).map(|(x, y)| x - y).collect();
                for w in 0..n {
                    assert_eq!(a.sandwich_trace(&c, &a.basis(w)), q(0));
                    assert_eq!(a.sandwich_trace(&a.basis(w), &c), q(0));
                }
            }
        }
    }
}

#[test]
fn kunneth_examples() {
    let m2 = Arc::new(catalog::matrix_algebra(2));
    let h = hh0_space(&m2).unwrap();
    let hh = hh0_space(&Arc::new(tensor_algebras(&m2, &m2))).unwrap();
    assert_eq!(hh.dim(), 1);
    let x = h.class_of(&m2.basis(0));
    let k = kunneth(&x, &x, &hh).unwrap();
    assert!(!k.is_zero());
    // [E12] = 0, so replacing E11 by E11 + E12 changes nothing.
    let mut y = m2.basis(0);
    y[1] = q(1);
    assert_eq!(kunneth(&h.class_of(&y), &x, &hh).unwrap(), k);
}

#[test]
fn contraction_matches_trace_form_on_hh0() {
    for name in ["k", "kxk", "M2", "A2", "A3", "Kronecker"] {
        let ctx = PairingContext::from_name(name).unwrap();
        let t = trace_form(&ctx.algebra);
        assert_eq!(ctx.kappa.form, t, "{name}");
    }
}

#[test]
fn three_pairings_agree() {
    for name in ["k", "kxk", "M2", "A2", "A3", "Kronecker"] {
        let ctx = PairingContext::from_name(name).unwrap();
        for i in 0..ctx.hh_op.dim() {
            for j in 0..ctx.hh.dim() {
                let [a, b, c] = ctx.three_pairings(&ctx.hh_op.basis_class(i), &ctx.hh.basis_class(j)).unwrap();
                assert_eq!(a, b, "{name} ({i},{j}) phi");
                assert_eq!(a, c, "{name} ({i},{j}) cup");
            }
        }
    }
}

#[test]
fn unit_law_and_diagonal_kernel() {
    for name in ["k", "kxk", "M2", "A2", "A3", "Kronecker"] {
        let ctx = PairingContext::from_name(name).unwrap();
        for i in 0..ctx.hh.dim() {
            let l = ctx.hh.basis_class(i);
            assert_eq!(ctx.unit_law(&l).unwrap(), l, "{name} cup");
            assert_eq!(ctx.diagonal_phi(&l).unwrap(), l, "{name} phi");
        }
    }
}

#[test]
fn phi_map_examples() {
    // K = A ⊗ B^op free of rank 1: Φ([b]) = tr_B(x ↦ x b)·[1_A].
    let a = Arc::new(catalog::path_algebra_a(2));
    let b = Arc::new(catalog::matrix_algebra(2));
    let ab = Arc::new(tensor_algebras(&a, &opposite(&b)));
    let k = PerfectModule::free(ab, vec![0]).unwrap();
    let ha = hh0_space(&a).unwrap();
    let hb = hh0_space(&b).unwrap();
    let out = phi_map(&k, &ha, &hb.class_of(&b.basis(0))).unwrap();
    assert_eq!(out, ha.class_of(a.unit()).scale(&q(2)));
}

#[test]
fn phi_map_is_cup_with_kernel_class() {
    let pairs = [("k", "A2"), ("A2", "A2"), ("M2", "kxk"), ("A2", "M2"), ("Kronecker", "k"), ("A3", "A2")];
    for (an, bn) in pairs {
        let a = Arc::new(catalog_entry(an).unwrap().algebra);
        let bctx = PairingContext::from_name(bn).unwrap();
        let ab = Arc::new(tensor_algebras(&a, &opposite(&bctx.algebra)));
        let ha = hh0_space(&a).unwrap();
        let hab = hh0_space(&ab).unwrap();
        for i in 0..6 {
            let mut rng = Lcg::derive(3, i);
            let kern = random_perfect(&ab, &mut rng, 3).unwrap();
            let hk = euler_class(&hab, &kern).unwrap();
            for j in 0..bctx.hh.dim() {
                let l = bctx.hh.basis_class(j);
                let lhs = phi_map(&kern, &ha, &l).unwrap();
                let rhs = cup(&hk, &l, &bctx.kappa, &ha).unwrap();
                assert_eq!(lhs, rhs, "{an},{bn} #{i} [{j}]");
            }
        }
    }
}

#[test]
fn adapt_identity() {
    for name in ["k", "kxk", "A2", "M2"] {
        let ctx = PairingContext::from_name(name).unwrap();
        let ea = Arc::new(tensor_algebras(&ctx.opposite, &ctx.algebra));
        for i in 0..8 {
            let mut rng = Lcg::derive(9, i);
            let m = random_perfect(&ea, &mut rng, 3).unwrap();
            let f = random_closed_endo(&m, &mut rng).unwrap();
            let (l, r) = ctx.adapt(&m, &f).unwrap();
            assert_eq!(l, r, "{name} #{i}");
        }
    }
}

#[test]
fn verify_rr_examples() {
    // Identities on e_i A ⊗ A e_j give dim e_i A e_j.
    let ctx = PairingContext::from_name("A2").unwrap();
    let a = &ctx.algebra;
    for i in 0..2 {
        for j in 0..2 {
            let m = PerfectModule::projective(a.clone(), &a.basis(j), 0).unwrap();
            let n = PerfectModule::projective(ctx.opposite.clone(), &a.basis(i), 0).unwrap();
            let rep = verify_rr(&m, &m.identity(), &n, &n.identity()).unwrap();
            assert!(rep.equal);
            assert_eq!(rep.lhs, q((i <= j) as i64));
        }
    }
    // Cone of α: Ae1 → Ae2 with f = 3·id against N = A.
    let p1 = PerfectModule::projective(a.clone(), &a.basis(0), 0).unwrap();
    let p2 = PerfectModule::projective(a.clone(), &a.basis(1), 0).unwrap();
    let alpha = ModuleMap::new(p1.carrier.clone(), p2.carrier.clone(), 0, AlgMatrix::diagonal(1, &a.basis(2))).unwrap();
    let c = cone_module(&alpha, &p1, &p2).unwrap();
    let f = c.identity().scale(&q(3));
    let n = PerfectModule::free(ctx.opposite.clone(), vec![0]).unwrap();
    let rep = verify_rr(&c, &f, &n, &n.identity()).unwrap();
    assert!(rep.equal);
    // χ(cone) = dim Ae2 - dim Ae1 = 2 - 1 (α = e1 α e2 lies in Ae2).
    assert_eq!(rep.lhs, q(3));
}

#[test]
fn verify_rr_random_small() {
    for name in ["k", "kxk", "M2", "A2", "A3", "Kronecker", "A2xA2"] {
        let ctx = PairingContext::from_name(name).unwrap();
        for i in 0..10 {
            let rep = ctx.verify_random(1, i).unwrap();
            assert!(rep.equal, "{}", rep.line());
        }
    }
}

#[test]
fn kernel_composition_separable() {
    let cases = [("k", "k", "A2"), ("A2", "M2", "k"), ("kxk", "kxk", "A2"), ("M2", "M2", "M2"), ("A2", "kxk", "M2")];
    for (an, bn, cn) in cases {
        let a = Arc::new(catalog_entry(an).unwrap().algebra);
        let b = catalog_entry(bn).unwrap();
        let c = Arc::new(catalog_entry(cn).unwrap().algebra);
        let ab = Arc::new(tensor_algebras(&a, &opposite(&b.algebra)));
        let bc = Arc::new(tensor_algebras(&b.algebra, &opposite(&c)));
        for i in 0..4 {
            let mut rng = Lcg::derive(21, i);
            let k1 = random_perfect(&ab, &mut rng, 2).unwrap();
            let k2 = random_perfect(&bc, &mut rng, 2).unwrap();
            let rep = verify_kernel_composition(&k1, &k2, &a, &b, &c, format!("{an}|{bn}|{cn}#{i}")).unwrap();
            assert!(rep.equal, "{}", rep.line());
        }
    }
    let b = catalog_entry("A2").unwrap();
    let a = Arc::new(catalog::ground_field());
    let ab = Arc::new(tensor_algebras(&a, &opposite(&b.algebra)));
    let k1 = PerfectModule::free(ab.clone(), vec![0]).unwrap();
    let k2 = PerfectModule::free(Arc::new(tensor_algebras(&b.algebra, &opposite(&a))), vec![0]).unwrap();
    assert!(verify_kernel_composition(&k1, &k2, &a, &b, &a, "A2".into()).is_err());
}
