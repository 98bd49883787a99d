"""Certificates for Kronecker products of GWH blocks, bucketed by size."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..fields import FieldDescriptor, field_with_roots
from ..numtheory import gwh_root_order
from ..structured import dft_g
from ..tuples import m_from_epsilon
from .core import (
    Certificate,
    CertificateError,
    binomial_certificate,
    kronecker_transfer,
    reorder_character_certificate,
    trivial_certificate,
)
from .gwh import gwh_decompose


def _log_log(P):
    return math.log(math.log(P)) if P > math.e else 0.0


@dataclass
class ProductPlan:
    """Factors (t, a, m): a copies of DFT_t handled by one GWH certificate with parameter m.

    m = None picks m from epsilon, clamped to [1, a // t].  A factor is used
    only when t * m <= a; otherwise it is carried unchanged.
    """

    factors: list
    epsilon: Fraction = Fraction(1, 2)
    k: int = 2
    trivial: str = "full"
    buckets: list = dc_field(default=None, repr=False)

    def __post_init__(self):
        fac = []
        for item in self.factors:
            t, a, *rest = item
            m = rest[0] if rest else None
            fac.append((int(t), int(a), None if m is None else int(m)))
        self.factors = fac
        self.epsilon = Fraction(self.epsilon)
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.k < 2:
            raise ValueError("bucket base k must be >= 2")
        for t, a, m in fac:
            if t < 2 or a < 1:
                raise ValueError(f"bad factor ({t}, {a})")
            if m is not None and (m < 1 or t * m > a):
                raise CertificateError(f"multiplicity {a} of t={t} is too low for m={m} (need t*m <= a)")
        self.buckets = self._bucket()

    @property
    def P(self) -> int:
        return math.prod(t ** a for t, a, _ in self.factors)

    @property
    def L(self) -> int:
        return max(1, math.ceil(2 * _log_log(self.P)))

    def m_for(self, i) -> int | None:
        t, a, m = self.factors[i]
        if m is not None:
            return m
        if a // t < 1:
            return None
        return min(max(1, m_from_epsilon(a, t, float(self.epsilon))), a // t)

    def bucket_of(self, value) -> int:
        """0 for values below k, j for values in [k^(2^(j-1)), k^(2^j))."""
        if value < self.k:
            return 0
        j, hi = 1, self.k ** 2
        while value >= hi:
            j += 1
            hi = hi * hi
        return j

    def _bucket(self):
        groups = {}
        for i, (t, a, _) in enumerate(self.factors):
            groups.setdefault(self.bucket_of(t ** a), []).append(i)
        return [groups[j] for j in sorted(groups)]

    def bucket_is_large(self, idx) -> bool:
        """P_j >= P^(epsilon / 2L), compared exactly in integers."""
        Pj = math.prod(self.factors[i][0] ** self.factors[i][1] for i in idx)
        num, den = self.epsilon.numerator, self.epsilon.denominator
        return Pj ** (2 * self.L * den) >= self.P ** num


def product_field(factors, field: FieldDescriptor) -> FieldDescriptor:
    return field_with_roots(field, [gwh_root_order(t) for t, *_ in factors])


def productbound_decompose(plan: ProductPlan, field: FieldDescriptor) -> Certificate:
    """Certificate for (x)_i H_{t_i, a_i} in the plan's factor order."""
    F = product_field(plan.factors, field)
    blocks, factor_lists, pieces = [], [], []
    high_any = False

    def carry(i):
        t, a, _ = plan.factors[i]
        c = trivial_certificate(dft_g([t] * a, F), plan.trivial)
        pieces.append(([i], c))

    for idx in plan.buckets:
        large = plan.bucket_is_large(idx)
        high = [i for i in idx if large and plan.m_for(i) is not None]
        for i in idx:
            if i not in high:
                carry(i)
        if not high:
            continue
        high_any = True
        certs = []
        for i in high:
            t, a, _ = plan.factors[i]
            certs.append(gwh_decompose(t, a, plan.m_for(i), F))
        l = max(1, math.ceil(plan.epsilon * len(high)))
        pieces.append((high, binomial_certificate(certs, l)))
    if not high_any:
        desc = dft_g([t for t, a, _ in plan.factors for _ in range(a)], F)
        out = trivial_certificate(desc, "zero" if plan.trivial == "zero" else plan.trivial)
        out.provenance.update(route="productbound", reason="no factor admits a GWH plan")
        return out
    # chain the pieces, then restore the factor order
    order_of_pieces = [i for ids, _ in pieces for i in ids]
    cert = pieces[0][1]
    for _, c in pieces[1:]:
        cert = kronecker_transfer(cert, c)
    for i in order_of_pieces:
        t, a, _ = plan.factors[i]
        blocks.append(t ** a)
        factor_lists.append([t] * a)
    want = sorted(range(len(order_of_pieces)), key=lambda k: order_of_pieces[k])
    cert = reorder_character_certificate(cert, blocks, want, factor_lists)
    degenerate = all(bool(c.provenance.get("degenerate")) for _, c in pieces)
    cert.provenance = {
        "route": "productbound",
        "factors": [list(f) for f in plan.factors],
        "buckets": plan.buckets,
        "epsilon": str(plan.epsilon),
        "degenerate": degenerate,
    }
    return cert
