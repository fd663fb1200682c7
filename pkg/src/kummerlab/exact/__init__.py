"""Exact arithmetic: fields, sparse polynomials, dense linear algebra."""

from .fields import (
    GF,
    QQ,
    Field,
    FieldMismatch,
    Fp,
    PrimeField,
    QuadElement,
    QuadExt,
    QuadraticField,
    RationalField,
    common_field,
    field_of,
    finite_field,
    scalar_key,
)
from .linalg import (
    LinearSolution,
    det,
    identity,
    kernel,
    mat_inv,
    mat_mul,
    mat_vec,
    normalize_vector,
    rank,
    rref,
    solve_linear,
    transpose,
)
from .poly import MultiPoly, monomials_of_degree, parse_poly, poly_eval, poly_gradient, to_text


def quadext_ops(a, b, op: str):
    """Binary/unary arithmetic inside one quadratic extension.

    ``op`` is one of ``add``, ``mul``, ``inv``, ``conj``, ``norm``; unary ops
    ignore ``b``.
    """
    if not isinstance(a, QuadElement):
        raise TypeError("quadext_ops needs quadratic-extension elements")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "conj":
        return a.conjugate()
    if op == "norm":
        return a.norm()
    raise ValueError(f"unknown op {op!r}")
