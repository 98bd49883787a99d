"""Finite fields: GWH certificates over F_p and descent from F_p[alpha] back to F_p."""

from __future__ import annotations

import math

import numpy as np

from ..fields import FieldDescriptor, FieldError, InvariantViolation, frobenius_conjugates, power_basis, power_sum_weight
from ..linalg import ExactMatrix, SparseChanges
from ..structured import explicit, move_descriptor, realize
from .core import Certificate, CertificateError, capped_rank
from .gwh import gwh_decompose, gwh_field


def frobenius_map(field: FieldDescriptor, power: int = 1):
    """Integer matrix of x -> x^(p^power) on coefficient vectors of F_p[alpha]."""
    k, p = field.degree, field.p
    q = p ** power
    table = power_basis(field, q * (k - 1) + 1)
    return np.array([[table[t * q][u] for t in range(k)] for u in range(k)], dtype=object)


def frobenius_matrix(m: ExactMatrix, power: int = 1) -> ExactMatrix:
    """Entrywise Frobenius."""
    if not m.field.is_finite:
        raise FieldError("Frobenius needs a finite field")
    if m.field.degree == 1:
        return m
    return m.map_coefficients(frobenius_map(m.field, power))


def _base_field(field: FieldDescriptor):
    from ..fields import prime_field

    return prime_field(field.p)


def conjugate_descent(cert: Certificate, base: FieldDescriptor | None = None) -> Certificate:
    """Move a certificate for a matrix with entries in F_p from F_p[alpha] down to F_p.

    With gamma_i the conjugates of the generator and k the first power whose
    conjugate power sum c is nonzero, E' = sum_i gamma_i^k Frob^i(E) / c is
    Frobenius-fixed, has support inside that of E, and M - E' is a sum of g
    matrices of rank <= r, so the claim becomes (g r, s).
    """
    F = cert.field
    if not F.is_finite:
        raise CertificateError("descent needs a finite field")
    base = base or _base_field(F)
    if base.degree != 1 or base.p != F.p:
        raise CertificateError("descent targets the prime subfield only")
    M = realize(cert.matrix)
    if F.degree == 1:
        return cert
    if not (M.num[:, :, 1:] == 0).all():
        raise CertificateError(f"the matrix has entries outside {base}")
    gammas = frobenius_conjugates(F.gen)
    g = len(gammas)
    k, c = power_sum_weight(gammas)
    E = cert.changes.to_dense()
    acc = ExactMatrix.zeros(F, *E.shape)
    cur = E
    for i in range(g):
        acc = acc + cur * (gammas[i] ** k)
        cur = frobenius_matrix(cur)
    E2 = acc * c.inverse()
    if frobenius_matrix(E2) != E2:
        raise InvariantViolation("descended changes are not Frobenius-fixed")
    moved = None
    try:
        cand = move_descriptor(cert.matrix, base)
        if realize(cand).in_field(F) == M:
            moved = cand
    except FieldError:
        moved = None
    if moved is None:
        moved = explicit(M.in_field(base))
    changes = SparseChanges.from_dense(E2.in_field(base))
    return Certificate(
        moved, base, changes, capped_rank(g * cert.claimed_rank, M.shape), cert.claimed_regular_sparsity,
        dict(cert.provenance, descended_from=str(F), conjugates=g, weight_power=k),
    )


def gwh_finite_field(d: int, n: int, base: FieldDescriptor, m, descend: bool = True) -> Certificate:
    """H_{d,n} certificate over F_p or F_p[alpha]; needs gcd(d, p) = 1.

    When the rescaling root is missing from ``base`` the work happens in an
    extension; with ``descend`` the result is brought back when H_{d,n}
    itself has entries in ``base``.
    """
    if not base.is_finite:
        raise CertificateError("base must be a finite field")
    if math.gcd(d, base.p) != 1:
        raise CertificateError(f"p = {base.p} divides d = {d}")
    F = gwh_field(d, base)
    cert = gwh_decompose(d, n, m, F)
    if descend and cert.field != base and base.degree == 1:
        M = realize(cert.matrix)
        if (M.num[:, :, 1:] == 0).all():
            return conjugate_descent(cert, base)
    return cert
