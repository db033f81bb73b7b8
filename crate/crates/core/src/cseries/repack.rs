//! Linear maps between the relativistic moment pieces `(F₂, F₂ⁱ, F₃, F₃ⁱ, F₃ⁱʲ)`
//! and the classical blocks `(F, Fⁱ, Fⁱʲ, Fⁱˡˡ, F_iill)`.

use serde::{Deserialize, Serialize};

use super::cpoly::CPoly;
use crate::moments::{FluxSet, MomentSet};
use crate::scalar::Scalar;
use crate::tensor::Sym3;
use crate::tensor::Vec3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepackedMoments {
    pub f2: CPoly,
    pub f2_i: Vec3<CPoly>,
    pub f3: CPoly,
    pub f3_i: Vec3<CPoly>,
    pub f3_ij: Sym3<CPoly>,
}

fn c(n: i32) -> CPoly {
    CPoly::c_pow(n)
}

/// Classical blocks from the relativistic pieces.
pub fn repack_forward(r: &RepackedMoments) -> MomentSet<CPoly> {
    let f3_ll = r.f3_ij.trace();
    let bracket = r.f2.clone().scale(2, 1) - r.f3.clone().scale(2, 1) + f3_ll.clone() * c(-2);
    MomentSet {
        f: r.f3.clone() - f3_ll.clone() * c(-2),
        f_i: r.f2_i.clone(),
        f_ij: r.f3_ij.clone() + Sym3::identity().scaled(&(c(2).scale(1, 3) * bracket)),
        f_ill: (r.f3_i.clone() - r.f2_i.clone()).scaled(&c(2).scale(2, 1)),
        f_iill: (r.f3.clone() - r.f2.clone()) * c(4).scale(8, 1) - f3_ll * c(2).scale(4, 1),
    }
}

/// Relativistic pieces from the classical blocks.
pub fn repack_inverse(f: &MomentSet<CPoly>) -> RepackedMoments {
    let f_ll = f.f_ij.trace();
    RepackedMoments {
        f2: f_ll.clone().scale(1, 2) * c(-2) + f.f.clone(),
        f2_i: f.f_i.clone(),
        f3: f.f.clone() + f.f_iill.clone().scale(1, 4) * c(-4) + f_ll * c(-2),
        f3_i: f.f_ill.scaled(&c(-2).scale(1, 2)) + f.f_i.clone(),
        f3_ij: f.f_ij.clone() + Sym3::identity().scaled(&(f.f_iill.clone().scale(1, 12) * c(-2))),
    }
}

/// Flux pieces, one [`RepackedMoments`] per `k`.
pub fn repack_flux_inverse(g: &FluxSet<CPoly>) -> [RepackedMoments; 3] {
    g.components().each_ref().map(repack_inverse)
}

pub fn repack_flux_forward(r: &[RepackedMoments; 3]) -> FluxSet<CPoly> {
    FluxSet::from_components(r.each_ref().map(repack_forward))
}

/// `R = pˡˡ/c²`, the constraint that makes mass conservation exact.
pub fn mass_constraint(p_ll: &CPoly) -> CPoly {
    p_ll.clone() * c(-2)
}

/// `pⁱˡˡ = 2c² Qⁱ`.
pub fn production_ill(q_i: &Vec3<CPoly>) -> Vec3<CPoly> {
    q_i.scaled(&c(2).scale(2, 1))
}

/// `pⁱⁱˡˡ = 4c² pˡˡ`.
pub fn production_iill(p_ll: &CPoly) -> CPoly {
    p_ll.clone() * c(2).scale(4, 1)
}
