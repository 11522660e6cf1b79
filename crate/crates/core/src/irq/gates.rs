//! Gates built from the single dilation operation.

use crate::model::{Model, ModelError};
use crate::scale::Scale;

type R<P> = Result<P, ModelError>;

/// `x •_ε y`, realized as `x ∘_{ε⁻¹} y`.
pub fn codil<M: Model>(m: &M, x: &M::Point, eps: &Scale, y: &M::Point) -> R<M::Point> {
    m.dil(x, &eps.inv(), y)
}

/// `Δ^x_ε(u,v) = (x ∘_ε u) •_ε (x ∘_ε v)`.
pub fn approx_difference<M: Model>(
    m: &M,
    x: &M::Point,
    eps: &Scale,
    u: &M::Point,
    v: &M::Point,
) -> R<M::Point> {
    let xu = m.dil(x, eps, u)?;
    let xv = m.dil(x, eps, v)?;
    codil(m, &xu, eps, &xv)
}

/// `Σ^x_ε(u,v) = x •_ε ((x ∘_ε u) ∘_ε v)`.
pub fn approx_sum<M: Model>(
    m: &M,
    x: &M::Point,
    eps: &Scale,
    u: &M::Point,
    v: &M::Point,
) -> R<M::Point> {
    let xu = m.dil(x, eps, u)?;
    let inner = m.dil(&xu, eps, v)?;
    codil(m, x, eps, &inner)
}

/// `inv^x_ε u = Δ^x_ε(u, x)`.
pub fn approx_inverse<M: Model>(m: &M, x: &M::Point, eps: &Scale, u: &M::Point) -> R<M::Point> {
    approx_difference(m, x, eps, u, x)
}

/// `u ∘^{x,ε}_λ v = x •_ε ((x ∘_ε u) ∘_λ (x ∘_ε v))`.
pub fn relative_dilation<M: Model>(
    m: &M,
    x: &M::Point,
    eps: &Scale,
    lambda: &Scale,
    u: &M::Point,
    v: &M::Point,
) -> R<M::Point> {
    let xu = m.dil(x, eps, u)?;
    let xv = m.dil(x, eps, v)?;
    let inner = m.dil(&xu, lambda, &xv)?;
    codil(m, x, eps, &inner)
}

/// `D_ε f(x) u = f(x) •_ε f(x ∘_ε u)`.
pub fn derivative<M, F>(m: &M, f: F, x: &M::Point, eps: &Scale, u: &M::Point) -> R<M::Point>
where
    M: Model,
    F: Fn(&M::Point) -> R<M::Point>,
{
    let fx = f(x)?;
    let moved = f(&m.dil(x, eps, u)?)?;
    codil(m, &fx, eps, &moved)
}
