"""(r, s)-reductions over F_q: every adjusted G-circulant as A Y_f + Z_f B + E_f, linear in f.

All matrices here are for the adjusted form M(f)[x, y] = f(x + y); the plain
form is a fixed row permutation of it and carries the same data.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..fields import FieldDescriptor, InvariantViolation, frobenius_conjugates, power_sum_weight, prime_field
from ..linalg import ExactMatrix, column_basis, hstack, rank
from ..structured import AbelianGroupSpec, adjusted_g_circulant, cyclic_group, embed_hankel, gwh_group, realize
from .core import CertificateError, require_verified
from .finite import frobenius_matrix, gwh_finite_field


@dataclass
class ReductionData:
    """Matrices with M(e_g) = A Y[g] + Z[g] B + E[g] for every group element g (index order)."""

    group: AbelianGroupSpec
    field: FieldDescriptor
    A: ExactMatrix
    B: ExactMatrix
    Y: list
    Z: list
    E: list
    r: int
    s: int
    provenance: dict = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.group.order

    def support(self) -> np.ndarray:
        mask = np.zeros((self.n, self.n), dtype=bool)
        for e in self.E:
            mask |= e.nonzero_mask()
        return mask

    def support_sparsity(self) -> int:
        mask = self.support()
        if not mask.any():
            return 0
        return int(max(mask.sum(axis=0).max(), mask.sum(axis=1).max()))

    def materialized_rank(self) -> int:
        return max(rank(self.A), rank(self.B))

    def combine(self, f):
        """(Y_f, Z_f, E_f) for values f on the group."""
        f = [self.field.element(v) for v in f]
        Y = sum_scaled(self.Y, f)
        Z = sum_scaled(self.Z, f)
        E = sum_scaled(self.E, f)
        return Y, Z, E

    def check_identity(self, f=None) -> bool:
        """Identity on the indicator basis, or for one given f."""
        G, F = self.group, self.field
        if f is not None:
            Y, Z, E = self.combine(f)
            return realize(adjusted_g_circulant(G, f, F)) == self.A @ Y + Z @ self.B + E
        for g in range(self.n):
            e = [F.one if k == g else F.zero for k in range(self.n)]
            M = realize(adjusted_g_circulant(G, e, F))
            if M != self.A @ self.Y[g] + self.Z[g] @ self.B + self.E[g]:
                return False
        return True

    def claims_hold(self) -> bool:
        return self.materialized_rank() <= self.r and self.support_sparsity() <= self.s


def sum_scaled(mats, coeffs):
    out = None
    for m, c in zip(mats, coeffs):
        if c.is_zero():
            continue
        term = m * c
        out = term if out is None else out + term
    if out is None:
        out = ExactMatrix.zeros(mats[0].field, *mats[0].shape)
    return out


def _indicators(F, n):
    return [[F.one if k == g else F.zero for k in range(n)] for g in range(n)]


def _factor_left(parts):
    """A and Y[g] with parts[g] = A @ Y[g]."""
    F = parts[0].field
    n_rows = parts[0].rows
    big = hstack(parts)
    basis, coords = column_basis(big)
    if basis.cols == 0:
        A = ExactMatrix.zeros(F, n_rows, 1)
        return A, [ExactMatrix.zeros(F, 1, p.cols) for p in parts]
    Y, start = [], 0
    for p in parts:
        Y.append(coords.take(np.arange(coords.rows), np.arange(start, start + p.cols)))
        start += p.cols
    return basis, Y


def _factor_right(parts):
    """B and Z[g] with parts[g] = Z[g] @ B."""
    A, Y = _factor_left([p.transpose() for p in parts])
    return A.transpose(), [y.transpose() for y in Y]


def degenerate_reduction(group, field: FieldDescriptor) -> ReductionData:
    """A = B = 0 and E_g = M(e_g): always valid, with s = |G|."""
    G = group if isinstance(group, AbelianGroupSpec) else AbelianGroupSpec(tuple(group))
    n = G.order
    E = [realize(adjusted_g_circulant(G, e, field)) for e in _indicators(field, n)]
    zA = ExactMatrix.zeros(field, n, 1)
    zB = ExactMatrix.zeros(field, 1, n)
    Y = [ExactMatrix.zeros(field, 1, n) for _ in range(n)]
    Z = [ExactMatrix.zeros(field, n, 1) for _ in range(n)]
    return ReductionData(G, field, zA, zB, Y, Z, E, 0, n, {"route": "degenerate"})


def _conjugate_sum(m: ExactMatrix, weights):
    """sum_i w_i Frob^i(m), moved to the prime field."""
    F = m.field
    if F.degree == 1:
        return m
    acc = None
    cur = m
    for w in weights:
        term = cur * w
        acc = term if acc is None else acc + term
        cur = frobenius_matrix(cur)
    if frobenius_matrix(acc) != acc:
        raise InvariantViolation("conjugate sum is not Frobenius-fixed")
    return acc.in_field(prime_field(F.p))


def _weights(F):
    if F.degree == 1:
        return [F.one]
    gammas = frobenius_conjugates(F.gen)
    k, c = power_sum_weight(gammas)
    inv = c.inverse()
    return [(x ** k) * inv for x in gammas]


def _split_reduction(cert, ambient: AbelianGroupSpec, base: FieldDescriptor, target: AbelianGroupSpec, embed, keep):
    """Three-term split M(u) = (X - E) D X + E D (X - E) + E D E with X the certified character table.

    ``embed`` maps an indicator on the target group to values on the ambient
    group; ``keep`` is the number of leading rows and columns retained.
    """
    F = cert.field
    require_verified(cert, "character table certificate")
    X = realize(cert.matrix)
    EX = cert.changes.to_dense()
    XmE = X - EX
    w = _weights(F)
    N0 = ambient.order
    neg = ambient.negation()
    inv = F.element(N0).inverse()
    idx = np.arange(keep)
    T1s, T2s, T3s = [], [], []
    for e in _indicators(base, target.order):
        u = ExactMatrix.from_vector(F, [F.element(v) for v in embed(e)])
        v = X @ u
        D = [v.entry(int(neg[j]), 0) * inv for j in range(N0)]
        T1 = XmE.scale_cols(D) @ X
        T2 = EX.scale_cols(D) @ XmE
        T3 = EX.scale_cols(D) @ EX
        if T1 + T2 + T3 != realize(adjusted_g_circulant(ambient, [F.element(x) for x in embed(e)], F)):
            raise InvariantViolation("three-term split does not reproduce M(u)")
        T1s.append(_conjugate_sum(T1, w).take(idx, idx))
        T2s.append(_conjugate_sum(T2, w).take(idx, idx))
        T3s.append(_conjugate_sum(T3, w).take(idx, idx))
    A, Y = _factor_left(T1s)
    B, Z = _factor_right(T2s)
    data = ReductionData(target, base, A, B, Y, Z, T3s, 0, 0)
    data.r = data.materialized_rank()
    data.s = data.support_sparsity()
    data.provenance = {
        "conjugates": len(w),
        "ambient": list(ambient.invariant_factors),
        "certificate_rank": cert.claimed_rank,
        "certificate_sparsity": cert.claimed_regular_sparsity,
        # each term is a sum of g conjugates of a rank <= r piece
        "rank_bound": len(w) * cert.claimed_rank,
        "sparsity_bound": cert.claimed_regular_sparsity ** 2,
    }
    if not data.check_identity():
        raise InvariantViolation("reduction identity failed on the indicator basis")
    return data


def _squarefree(n):
    from ..numtheory import factorize

    return all(e == 1 for e in factorize(n).values())


def reduction_for_cyclic(N: int, base: FieldDescriptor, ambient=None, family=None, dft_options=None) -> ReductionData:
    """Reduction for Z_N over F_p from a DFT certificate for a squarefree N0.

    N0 = N when N is squarefree and prime to p; otherwise Z_N embeds as the
    Hankel block h(k) = f(k mod N), k <= 2N - 2, of an adjusted circulant
    over Z_N0 with N0 >= 2N - 1.
    """
    from ..numtheory import factorize
    from .circulant import _ambient
    from .dft import DftBlockPlan, dft_decompose, dft_field

    if base.degree != 1:
        raise CertificateError("reductions are built over a prime field")
    p = base.p
    if N % p == 0:
        raise CertificateError(f"p = {p} divides N = {N}")
    target = cyclic_group(N)
    if N == 1:
        return degenerate_reduction(target, base)
    if ambient is None and _squarefree(N):
        N0, primes = N, tuple(sorted(factorize(N)))
        direct = True
    else:
        N0, primes, _ = _ambient(2 * N - 1, p, ambient, family, base)
        direct = N0 == N
    plan = DftBlockPlan(primes, **(dft_options or {}))
    cert = dft_decompose(plan, dft_field(plan, base))
    amb = cyclic_group(N0)
    if direct:
        def embed(e):
            return e
    else:
        def embed(e):
            return embed_hankel([e[k % N] for k in range(2 * N - 1)], N0)
    data = _split_reduction(cert, amb, base, target, embed, N)
    data.provenance.update(route="cyclic", N=N, N0=N0, direct=direct)
    return data


def reduction_for_small_power(d: int, n: int, base: FieldDescriptor, m=1) -> ReductionData:
    """Reduction for Z_d^n over F_p from the H_{d,n} certificate."""
    if base.degree != 1:
        raise CertificateError("reductions are built over a prime field")
    if math.gcd(d, base.p) != 1:
        raise CertificateError(f"p = {base.p} divides d = {d}")
    G = gwh_group(d, n)
    if d * m > n:
        data = degenerate_reduction(G, base)
        data.provenance.update(route="small_power", d=d, n=n, reason="d*m exceeds n")
        return data
    cert = gwh_finite_field(d, n, base, m, descend=False)
    data = _split_reduction(cert, G, base, G, lambda e: e, G.order)
    data.provenance.update(route="small_power", d=d, n=n, m=m)
    return data


# ---------------------------------------------------------------------------
# products


def product_rank_formula(rs, ns, l) -> int:
    """ceil of sum_{|S| = l} 2^l prod_S sqrt(r_i n_i) prod_{not S} n_i."""
    import sympy

    a = len(rs)
    total = 0
    for S in itertools.combinations(range(a), l):
        term = sympy.Integer(2) ** l
        for i in range(a):
            term *= sympy.sqrt(rs[i] * ns[i]) if i in S else ns[i]
        total += term
    return int(sympy.ceiling(total))


def product_sparsity_formula(ss, ns, l) -> int:
    a = len(ss)
    total = 0
    for size in range(l):
        for S in itertools.combinations(range(a), size):
            term = 2 ** size
            for i in range(a):
                term *= ns[i] if i in S else ss[i]
            total += term
    return total


def reduction_product(parts, l: int) -> ReductionData:
    """Reduction for G_1 x ... x G_a from reductions of the factors.

    M(e_g) is the Kronecker product of the factor matrices, each split as
    L + R + S.  Expanding, terms with fewer than l low-rank factors go to the
    sparse part; the rest go left or right according to which side has the
    smaller relative rank, and A, B are factored from the materialized sums.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    F = parts[0].field
    if any(p.field != F for p in parts):
        raise CertificateError("all parts must share one field")
    a = len(parts)
    if not 1 <= l <= a:
        raise ValueError(f"l must lie in [1, {a}]")
    if a == 1 and l == 1:
        return parts[0]
    rs = [p.r for p in parts]
    ns = [p.n for p in parts]
    ss = [p.s for p in parts]
    group = AbelianGroupSpec(tuple(x for p in parts for x in p.group.invariant_factors))
    ratio = [max(r, 0) / n for r, n in zip(rs, ns)]
    left_terms, right_terms, sparse_terms = [], [], []
    for I in itertools.product((1, 2, 3), repeat=a):
        n3 = sum(1 for x in I if x == 3)
        if n3 > a - l:
            sparse_terms.append(I)
            continue
        s1 = [i for i in range(a) if I[i] == 1]
        s2 = [i for i in range(a) if I[i] == 2]
        if math.prod(ratio[i] for i in s1) <= math.prod(ratio[i] for i in s2):
            left_terms.append(I)
        else:
            right_terms.append(I)
    P1, P2, P3 = [], [], []
    for coords in itertools.product(*[range(n) for n in ns]):
        pieces = []
        for i, g in enumerate(coords):
            p = parts[i]
            pieces.append({1: p.A @ p.Y[g], 2: p.Z[g] @ p.B, 3: p.E[g]})

        def total(terms):
            out = None
            for I in terms:
                m = pieces[0][I[0]]
                for i in range(1, a):
                    m = m.kron(pieces[i][I[i]])
                out = m if out is None else out + m
            return out if out is not None else ExactMatrix.zeros(F, group.order, group.order)

        P1.append(total(left_terms))
        P2.append(total(right_terms))
        P3.append(total(sparse_terms))
    A, Y = _factor_left(P1)
    B, Z = _factor_right(P2)
    data = ReductionData(group, F, A, B, Y, Z, P3, 0, 0)
    data.r = data.materialized_rank()
    data.s = data.support_sparsity()
    data.provenance = {
        "route": "product",
        "l": l,
        "parts": [list(p.group.invariant_factors) for p in parts],
        "rank_formula": product_rank_formula(rs, ns, l),
        "sparsity_formula": product_sparsity_formula(ss, ns, l),
    }
    if not data.check_identity():
        raise InvariantViolation("product reduction identity failed on the indicator basis")
    return data
