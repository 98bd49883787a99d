"""G-circulants for arbitrary finite abelian G, over cyclotomic fields and over F_q."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..fields import FieldDescriptor, cyclotomic, field_with_roots, prime_field
from ..linalg import ExactMatrix, SparseChanges, rank
from ..structured import adjusted_g_circulant, dft_g, g_circulant, realize
from ..tuples import m_from_epsilon
from .core import (
    Certificate,
    CertificateError,
    as_group,
    binomial_certificate,
    capped_rank,
    diagonalization_transfer,
    kronecker_transfer,
    lift_certificate,
    permute_certificate,
    reorder_character_certificate,
    trivial_certificate,
)
from .circulant import dft_any_decompose
from .gwh import gwh_decompose
from .reduction import reduction_for_cyclic, reduction_for_small_power, reduction_product


def _log_log(P):
    return math.log(math.log(P)) if P > math.e else 0.0


def abelian_plan(factors, k: int = 5, epsilon=Fraction(1, 2)):
    """Group the invariant factors.

    Returns (small, large, carried): small maps c < k to the positions of its
    copies, large is a list of dyadic buckets (lists of positions) whose
    product is big enough to be worth certifying, carried are the rest.
    """
    epsilon = Fraction(epsilon)
    P = math.prod(factors)
    L = max(1, math.ceil(2 * _log_log(P)))
    small, buckets = {}, {}
    for i, c in enumerate(factors):
        if c < k:
            small.setdefault(c, []).append(i)
        else:
            j, hi = 1, k * k
            while c >= hi:
                j, hi = j + 1, hi * hi
            buckets.setdefault(j, []).append(i)
    large, carried = [], []
    for j in sorted(buckets):
        idx = buckets[j]
        Pj = math.prod(factors[i] for i in idx)
        if Pj ** (2 * L * epsilon.denominator) >= P ** epsilon.numerator:
            large.append(idx)
        else:
            carried.extend(idx)
    return small, large, carried


def _small_m(c, count, epsilon):
    if count // c < 1:
        return None
    return min(max(1, m_from_epsilon(count, c, float(epsilon))), count // c)


def _negated(G, f):
    neg = G.negation()
    return [f[int(neg[z])] for z in range(G.order)]


def character_certificate(factors, field: FieldDescriptor, k=5, epsilon=Fraction(1, 2), trivial="full"):
    """Certificate for DFT_G over a cyclotomic field, in the given factor order."""
    small, large, carried = abelian_plan(factors, k, epsilon)
    pieces = []  # (positions, certificate)
    for c, idx in sorted(small.items()):
        m = _small_m(c, len(idx), epsilon)
        if m is None or c < 2:
            carried.extend(idx)
            continue
        pieces.append((idx, gwh_decompose(c, len(idx), m, field)))
    for idx in large:
        certs = [dft_any_decompose(factors[i], field) for i in idx]
        F = cyclotomic(math.lcm(*[c.field.m for c in certs]))
        certs = [lift_certificate(c, F) for c in certs]
        l = max(1, math.ceil(Fraction(epsilon) * len(certs)))
        pieces.append((idx, binomial_certificate(certs, l)))
    for i in sorted(carried):
        pieces.append(([i], trivial_certificate(dft_g([factors[i]], field_with_roots(field, [factors[i]])), trivial)))
    F = cyclotomic(math.lcm(*[c.field.m for _, c in pieces]))
    pieces = [(idx, lift_certificate(c, F)) for idx, c in pieces]
    cert = pieces[0][1]
    for _, c in pieces[1:]:
        cert = kronecker_transfer(cert, c)
    positions = [i for idx, _ in pieces for i in idx]
    blocks = [factors[i] for i in positions]
    want = sorted(range(len(positions)), key=lambda j: positions[j])
    cert = reorder_character_certificate(cert, blocks, want, [[b] for b in blocks])
    cert.provenance = {
        "route": "character_table",
        "small": {str(c): len(v) for c, v in small.items()},
        "large": [[factors[i] for i in idx] for idx in large],
        "carried": [factors[i] for i in sorted(carried)],
        "degenerate": all(bool(c.provenance.get("degenerate")) for _, c in pieces),
    }
    return cert


def _finite_reductions(factors, base, k, epsilon):
    small, large, carried = abelian_plan(factors, k, epsilon)
    parts, positions = [], []
    for c, idx in sorted(small.items()):
        m = _small_m(c, len(idx), epsilon)
        if m is not None and c >= 2:
            parts.append(reduction_for_small_power(c, len(idx), base, m))
            positions.append(idx)
        else:
            for i in idx:
                parts.append(reduction_for_cyclic(factors[i], base))
                positions.append([i])
    for i in sorted(i for idx in large for i in idx) + sorted(carried):
        parts.append(reduction_for_cyclic(factors[i], base))
        positions.append([i])
    return parts, positions


def abelian_decompose(G, f, field: FieldDescriptor, k: int = 5, epsilon=Fraction(1, 2), trivial="full") -> Certificate:
    """Certificate for the G-circulant M[x, y] = f(x - y).

    Over a cyclotomic field the character table of G is certified and
    transferred by M(f') = X diag X, with f'(z) = f(-z) giving the plain form
    after a row permutation.  Over F_q (gcd(|G|, q) = 1) the factors get
    (r, s)-reductions that are multiplied together and evaluated at f'.
    """
    G = as_group(G)
    factors = list(G.invariant_factors)
    if field.is_finite:
        if math.gcd(G.order, field.p) != 1:
            raise CertificateError(f"p = {field.p} divides |G| = {G.order}")
        return _finite_abelian(G, f, field, k, epsilon)
    cert_x = character_certificate(factors, field, k, epsilon, trivial)
    F = cert_x.field
    if F.m % field.m:
        F = cyclotomic(math.lcm(F.m, field.m))
        cert_x = lift_certificate(cert_x, F)
    values = [F.element(field.element(v)) for v in f]
    fneg = _negated(G, values)
    X = realize(cert_x.matrix)
    v = X @ ExactMatrix.from_vector(F, fneg)
    neg = G.negation()
    inv = F.element(G.order).inverse()
    D = [v.entry(int(neg[j]), 0) * inv for j in range(G.order)]
    adj = diagonalization_transfer(cert_x, D, "ADA", adjusted_g_circulant(G, fneg, F))
    out = permute_certificate(adj, neg, None, g_circulant(G, values, F))
    out.provenance = dict(cert_x.provenance, route="abelian", group=factors)
    return out


def _finite_abelian(G, f, field, k, epsilon):
    factors = list(G.invariant_factors)
    base = prime_field(field.p)
    parts, positions = _finite_reductions(factors, base, k, epsilon)
    order = [i for idx in positions for i in idx]
    if order != list(range(len(factors))):
        # certify the isomorphic group with factors in part order, then map back
        G2 = as_group([factors[i] for i in order])
        coords = G2.elements()
        orig = np.zeros_like(coords)
        orig[:, order] = coords
        p = G.index(orig)
        pinv = np.argsort(p)
        values = [field.element(v) for v in f]
        inner = _finite_abelian(G2, [values[int(j)] for j in p], field, k, epsilon)
        return permute_certificate(inner, pinv, pinv, g_circulant(G, values, field))
    l = max(1, math.ceil(Fraction(epsilon) * len(parts)))
    data = reduction_product(parts, l) if len(parts) > 1 else parts[0]
    if tuple(data.group.invariant_factors) != tuple(factors):
        raise CertificateError("reduction group does not match G")
    values = [field.element(v) for v in f]
    fneg = _negated(G, values)
    # the reduction is over F_p; f may live in an extension, so combine after lifting
    E = None
    for g, c in enumerate(fneg):
        if c.is_zero():
            continue
        term = data.E[g].in_field(field) * c
        E = term if E is None else E + term
    if E is None:
        E = ExactMatrix.zeros(field, G.order, G.order)
    neg = G.negation()
    E = E.permute(neg, None)
    r = rank(data.A) + rank(data.B)
    desc = g_circulant(G, values, field)
    out = Certificate(
        desc, field, SparseChanges.from_dense(E), capped_rank(r, (G.order, G.order)), data.s,
        {"route": "abelian_finite", "group": factors, "l": l, "reduction_r": data.r, "reduction_s": data.s,
         "rank_formula": data.provenance.get("rank_formula"),
         "degenerate": r >= G.order or data.s >= G.order},
    )
    return out
