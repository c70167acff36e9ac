//! `HH_0` of degree-0 algebras and Hochschild classes of endomorphisms of
//! perfect modules (Hattori-Stallings supertraces).

use std::sync::Arc;

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, fmt_rational, quotient_presentation, sign, Matrix, Rational};
use crate::module::{ModuleMap, PerfectModule};

/// `A/[A,A]` with first-pivot coset representatives.
#[derive(Clone, Debug)]
pub struct HH0Space {
    pub algebra: Alg,
    /// `dim HH_0 × dim A`; kills exactly the commutator subspace.
    pub projection: Matrix,
    /// `dim A × dim HH_0`; columns are the chosen representatives.
    pub section: Matrix,
}

pub fn hh0_space(a: &Alg) -> Result<Arc<HH0Space>> {
    a.require_degree_zero()?;
    let comm = a.commutator_span();
    let (projection, section) = quotient_presentation(a.dim(), &comm)?;
    Ok(Arc::new(HH0Space { algebra: a.clone(), projection, section }))
}

impl HH0Space {
    pub fn dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn class_of(self: &Arc<Self>, x: &[Rational]) -> HochschildClass {
        HochschildClass { space: self.clone(), coords: self.projection.mul_vec(x) }
    }

    pub fn basis_class(self: &Arc<Self>, i: usize) -> HochschildClass {
        let mut coords = vec![Rational::from_integer(0.into()); self.dim()];
        coords[i] = Rational::from_integer(1.into());
        HochschildClass { space: self.clone(), coords }
    }

    /// Labels `[x]` of the representatives.
    pub fn basis_labels(&self) -> Vec<String> {
        self.section.columns().iter().map(|c| format!("[{}]", self.algebra.format_element(c))).collect()
    }

    pub fn from_coords(self: &Arc<Self>, coords: Vec<Rational>) -> Result<HochschildClass> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch("HH_0 coordinates".into()));
        }
        Ok(HochschildClass { space: self.clone(), coords })
    }
}

#[derive(Clone, Debug)]
pub struct HochschildClass {
    pub space: Arc<HH0Space>,
    pub coords: Vec<Rational>,
}

impl PartialEq for HochschildClass {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.space.algebra == other.space.algebra
    }
}

impl HochschildClass {
    pub fn representative(&self) -> Vec<Rational> {
        self.space.section.mul_vec(&self.coords)
    }

    pub fn add(&self, other: &HochschildClass) -> HochschildClass {
        let mut coords = self.coords.clone();
        add_scaled(&mut coords, &Rational::from_integer(1.into()), &other.coords);
        HochschildClass { space: self.space.clone(), coords }
    }

    pub fn scale(&self, c: &Rational) -> HochschildClass {
        HochschildClass { space: self.space.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        crate::linalg::is_zero_vec(&self.coords)
    }

    pub fn format(&self) -> String {
        let labels = self.space.basis_labels();
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(labels)
            .filter(|(c, _)| **c != Rational::from_integer(0.into()))
            .map(|(c, l)| if *c == Rational::from_integer(1.into()) { l } else { format!("{}*{l}", fmt_rational(c)) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Supertrace `Σ_j (-1)^{s_j} F_jj` as an element of `A`.
pub fn supertrace_element(f: &ModuleMap) -> Vec<Rational> {
    let a = f.source.algebra();
    let mut acc = a.zero();
    for (j, s) in f.source.shifts().iter().enumerate() {
        add_scaled(&mut acc, &sign(*s as i64), f.matrix.get(j, j));
    }
    acc
}

/// `hh_A(M, f)` for a closed degree-0 endomorphism with `e f e = f`.
pub fn hh_class(space: &Arc<HH0Space>, m: &PerfectModule, f: &ModuleMap) -> Result<HochschildClass> {
    m.algebra().require_degree_zero()?;
    if **m.algebra() != *space.algebra {
        return Err(Error::AlgebraMismatch("class space and module algebras differ".into()));
    }
    if !f.is_endomorphism() || *f.source != *m.carrier {
        return Err(Error::NotEndomorphism);
    }
    if f.degree != 0 {
        return Err(Error::WrongDegree { expected: 0, got: f.degree });
    }
    if !f.is_closed() {
        return Err(Error::NotClosed("Hochschild class of a non-closed map".into()));
    }
    if !PerfectModule::is_compatible(f, m, m) {
        return Err(Error::IdempotentIncompatible);
    }
    Ok(space.class_of(&supertrace_element(f)))
}

/// `hh_A(M) = hh_A(M, id)`.
pub fn euler_class(space: &Arc<HH0Space>, m: &PerfectModule) -> Result<HochschildClass> {
    hh_class(space, m, &m.identity())
}
