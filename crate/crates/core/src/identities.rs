//! Matrix-polynomial identities used to reduce and verify the invariants.
//!
//! Each residual is assembled from a list of signed terms. The float checks
//! compare the residual against the largest term entry, so the tolerance
//! stays meaningful for large states.

use crate::scalar::Scalar;
use crate::state::MultiplierState;
use crate::tensor::Sym3;

fn sum_terms<T: Scalar>(terms: Vec<Sym3<T>>) -> Sym3<T> {
    terms.into_iter().fold(Sym3::zero(), |acc, t| acc + t)
}

/// Largest entry over all terms: the scale a float residual is measured against.
pub fn term_scale(terms: &[Sym3<f64>]) -> f64 {
    terms.iter().map(Sym3::max_abs).fold(0.0, f64::max)
}

/// Signed terms of `A³ − [tr A·A² + ½(tr A² − (tr A)²)A + (⅓tr A³ − ½tr A·tr A² + ⅙(tr A)³)I]`.
pub fn hamilton_cayley_terms<T: Scalar>(a: &Sym3<T>) -> Vec<Sym3<T>> {
    let tr = a.trace();
    let a2 = a.mul_commuting(a);
    let a3 = a2.mul_commuting(a);
    let tr2 = a2.trace();
    let tr3 = a3.trace();
    let id = Sym3::identity();
    vec![
        a3,
        -a2.scaled(&tr),
        -a.scaled(&tr2.clone().scale(1, 2)),
        a.scaled(&tr.square().scale(1, 2)),
        -id.scaled(&tr3.scale(1, 3)),
        id.scaled(&(tr.clone() * tr2).scale(1, 2)),
        -id.scaled(&tr.powi(3).scale(1, 6)),
    ]
}

/// Cayley–Hamilton residual of a symmetric 3×3 matrix; identically zero.
pub fn hamilton_cayley_residual<T: Scalar>(a: &Sym3<T>) -> Sym3<T> {
    sum_terms(hamilton_cayley_terms(a))
}

/// Signed terms of the auxiliary identity in `λ_ij` and `λ_ill`.
pub fn auxiliary_identity_terms<T: Scalar>(s: &MultiplierState<T>) -> Vec<Sym3<T>> {
    let m = &s.lambda_ij;
    let b = &s.lambda_ill;
    let ll = m.trace();
    let m2 = m.mul_commuting(m);
    let tr2 = m2.trace();
    let mb = m.mul_vec(b);
    let m2b = m2.mul_vec(b);
    let bb = b.dot(b);
    let bmb = b.dot(&mb);
    let bm2b = b.dot(&m2b);
    let id = Sym3::identity();
    let half = |x: T| x.scale(1, 2);
    vec![
        -id.scaled(&bm2b),
        id.scaled(&(ll.clone() * bmb.clone())),
        id.scaled(&half(bb.clone() * tr2.clone())),
        -id.scaled(&half(bb.clone() * ll.square())),
        -m.scaled(&bmb),
        m.scaled(&(ll.clone() * bb.clone())),
        -m2.scaled(&bb),
        b.outer_self().scaled(&half(ll.square())),
        -b.outer_self().scaled(&half(tr2)),
        -b.sym_outer2(&mb).scaled(&ll),
        mb.outer_self(),
        b.sym_outer2(&m2b),
    ]
}

/// Right-hand side of the auxiliary identity; identically zero.
///
/// The symmetrized terms use `a_(i b_j) = ½(a_i b_j + a_j b_i)`.
pub fn auxiliary_identity_residual<T: Scalar>(s: &MultiplierState<T>) -> Sym3<T> {
    sum_terms(auxiliary_identity_terms(s))
}
