//! Gate constructors on terms and the seven built-in gate identities.

use super::prove::Identity;
use super::scale_expr::ScaleExpr;
use super::tree::Term;

fn v(name: &str) -> Term {
    Term::var(name)
}

pub fn dil_t(e: &ScaleExpr, base: Term, arg: Term) -> Term {
    Term::dil(e.clone(), base, arg)
}

/// `Δ^x_e(u,v) = (x ∘_e u) •_e (x ∘_e v)`.
pub fn difference_t(x: Term, e: &ScaleExpr, u: Term, w: Term) -> Term {
    Term::codil(e, dil_t(e, x.clone(), u), dil_t(e, x, w))
}

/// `Σ^x_e(u,v) = x •_e ((x ∘_e u) ∘_e v)`.
pub fn sum_t(x: Term, e: &ScaleExpr, u: Term, w: Term) -> Term {
    let xu = dil_t(e, x.clone(), u);
    Term::codil(e, x, dil_t(e, xu, w))
}

/// `inv^x_e u = Δ^x_e(u, x)`.
pub fn inverse_t(x: Term, e: &ScaleExpr, u: Term) -> Term {
    difference_t(x.clone(), e, u, x)
}

/// The identities (a)–(g) over point variables `x,u,v,w` and scale `e`.
pub fn builtin_identities() -> Vec<Identity> {
    let e = ScaleExpr::var("e");
    let (x, u, w1, w2) = (v("x"), v("u"), v("v"), v("w"));
    let xu = dil_t(&e, x.clone(), u.clone());
    vec![
        Identity::new(
            "(a) difference is the inverse of sum",
            difference_t(x.clone(), &e, u.clone(), sum_t(x.clone(), &e, u.clone(), w1.clone())),
            w1.clone(),
        ),
        Identity::new(
            "(b) sum is the inverse of difference",
            sum_t(x.clone(), &e, u.clone(), difference_t(x.clone(), &e, u.clone(), w1.clone())),
            w1.clone(),
        ),
        Identity::new(
            "(c) difference is the sum of the inverse",
            difference_t(x.clone(), &e, u.clone(), w1.clone()),
            sum_t(xu.clone(), &e, inverse_t(x.clone(), &e, u.clone()), w1.clone()),
        ),
        Identity::new(
            "(d) inverse is an involution",
            inverse_t(xu.clone(), &e, inverse_t(x.clone(), &e, u.clone())),
            u.clone(),
        ),
        Identity::new(
            "(e) associativity of the sum",
            sum_t(x.clone(), &e, u.clone(), sum_t(xu, &e, w1.clone(), w2.clone())),
            sum_t(x.clone(), &e, sum_t(x.clone(), &e, u.clone(), w1.clone()), w2),
        ),
        Identity::new(
            "(f) inverse as a difference",
            inverse_t(x.clone(), &e, u.clone()),
            difference_t(x.clone(), &e, u.clone(), x.clone()),
        ),
        Identity::new("(g) neutral element at right", sum_t(x.clone(), &e, x, u.clone()), u),
    ]
}
