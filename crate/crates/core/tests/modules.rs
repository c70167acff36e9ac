use std::sync::Arc;

use ncrr::algebra::opposite;
use ncrr::blocked::{hom_over_algebra, restrict_to_ground, tensor_over_algebra};
use ncrr::catalog;
use ncrr::complex::{cohomology, cone, GradedSpace};
use ncrr::linalg::q;
use ncrr::module::{cone_module, direct_sum, shift_module, AlgMatrix, FiniteModule, ModuleMap, PerfectModule};

fn a2() -> Arc<ncrr::algebra::DgAlgebra> {
    Arc::new(catalog::path_algebra_a(2))
}

fn dims(c: &ncrr::complex::Complex) -> GradedSpace {
    cohomology(c).unwrap().space()
}

#[test]
fn free_module_dims() {
    let k = Arc::new(catalog::ground_field());
    let r = restrict_to_ground(&PerfectModule::free(k, vec![0]).unwrap()).unwrap();
    assert_eq!(r.complex().space(), GradedSpace::new([(0, 1)]));
    let r = restrict_to_ground(&PerfectModule::free(a2(), vec![0, 1]).unwrap()).unwrap();
    assert_eq!(r.complex().space(), GradedSpace::new([(-1, 3), (0, 3)]));
}

#[test]
fn cone_of_identity_is_contractible() {
    let p = PerfectModule::free(a2(), vec![0]).unwrap();
    let c = cone_module(&p.identity(), &p, &p).unwrap();
    let r = restrict_to_ground(&c).unwrap();
    assert!(r.complex().is_acyclic().unwrap());
}

fn alpha_map() -> (PerfectModule, PerfectModule, ModuleMap) {
    let a = a2();
    let p1 = PerfectModule::projective(a.clone(), &a.basis(0), 0).unwrap();
    let p2 = PerfectModule::projective(a.clone(), &a.basis(1), 0).unwrap();
    // e1 ↦ e1·α = α lands in A e2.
    let f = ModuleMap::new(p1.carrier.clone(), p2.carrier.clone(), 0, AlgMatrix::diagonal(1, &a.basis(2))).unwrap();
    (p1, p2, f)
}

#[test]
fn cone_of_arrow_is_simple() {
    let (p1, p2, f) = alpha_map();
    assert!(PerfectModule::is_compatible(&f, &p1, &p2));
    let c = cone_module(&f, &p1, &p2).unwrap();
    let h = dims(restrict_to_ground(&c).unwrap().complex());
    assert_eq!(h, GradedSpace::new([(0, 1)]));
}

#[test]
fn cone_of_zero_is_shift_plus_target() {
    let (p1, p2, f) = alpha_map();
    let z = f.scale(&q(0));
    let c = cone_module(&z, &p1, &p2).unwrap();
    let s = direct_sum(&shift_module(&p1, 1), &p2).unwrap();
    assert_eq!(c, s);
}

#[test]
fn restriction_commutes_with_cone() {
    let (p1, p2, f) = alpha_map();
    let c = restrict_to_ground(&cone_module(&f, &p1, &p2).unwrap()).unwrap();
    let (r1, r2) = (restrict_to_ground(&p1).unwrap(), restrict_to_ground(&p2).unwrap());
    let (cc, _, _) = cone(&r1.map(&f, &r2).unwrap()).unwrap();
    assert_eq!(c.complex(), &cc);
}

fn right_projective(i: usize) -> FiniteModule {
    let op = Arc::new(opposite(&a2()));
    let p = PerfectModule::projective(op.clone(), &op.basis(i), 0).unwrap();
    restrict_to_ground(&p).unwrap().to_finite_module().unwrap()
}

#[test]
fn tensor_examples() {
    let a = a2();
    let m = PerfectModule::free(a.clone(), vec![0, 1]).unwrap();
    let op = Arc::new(opposite(&a));
    let reg = FiniteModule::regular(&op).unwrap();
    let t = tensor_over_algebra(&reg, &m).unwrap();
    assert_eq!(dims(t.complex()), dims(restrict_to_ground(&m).unwrap().complex()));

    let ae2 = PerfectModule::projective(a.clone(), &a.basis(1), 0).unwrap();
    let ae1 = PerfectModule::projective(a.clone(), &a.basis(0), 0).unwrap();
    let t = tensor_over_algebra(&right_projective(0), &ae2).unwrap();
    assert_eq!(dims(t.complex()), GradedSpace::new([(0, 1)]));
    let t = tensor_over_algebra(&right_projective(1), &ae1).unwrap();
    assert!(dims(t.complex()).is_zero());
    assert!(tensor_over_algebra(&FiniteModule::regular(&a).unwrap(), &ae1).is_err());
}

#[test]
fn hom_examples() {
    let a = a2();
    let ae1 = PerfectModule::projective(a.clone(), &a.basis(0), 0).unwrap();
    let ae2 = PerfectModule::projective(a.clone(), &a.basis(1), 0).unwrap();
    let n = restrict_to_ground(&ae2).unwrap().to_finite_module().unwrap();
    let h = hom_over_algebra(&ae1, &n).unwrap();
    assert_eq!(dims(h.complex()), GradedSpace::new([(0, 1)]));

    let free = PerfectModule::free(a.clone(), vec![0]).unwrap();
    let m = PerfectModule::free(a.clone(), vec![0, 2]).unwrap();
    let rm = restrict_to_ground(&m).unwrap().to_finite_module().unwrap();
    let h = hom_over_algebra(&free, &rm).unwrap();
    assert_eq!(h.complex().space(), restrict_to_ground(&m).unwrap().complex().space());

    let k = Arc::new(catalog::ground_field());
    let m = PerfectModule::free(k, vec![0, 0]).unwrap();
    let rm = restrict_to_ground(&m).unwrap().to_finite_module().unwrap();
    assert_eq!(dims(hom_over_algebra(&m, &rm).unwrap().complex()), GradedSpace::new([(0, 4)]));
}
