"""Index tuples of Z_d^n: permutation classes, the S/T sets behind GWH decompositions, and P_f evaluation.

Tuples are indexed in mixed radix with the first coordinate most significant,
which matches the row order of DFT_d (x) ... (x) DFT_d.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .fields import FieldElement, RootOfUnity


def all_tuples(d: int, n: int) -> np.ndarray:
    """(d**n, n) array of every tuple, row k being the base-d digits of k."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((d,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def tuple_index(t, d: int) -> int:
    k = 0
    for x in t:
        k = k * d + int(x)
    return k


def index_tuple(k: int, d: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        k, r = divmod(k, d)
        out.append(r)
    return tuple(reversed(out))


def _check_tuple(t, d):
    if any(not 0 <= int(x) < d for x in t):
        raise ValueError(f"tuple {tuple(t)} has entries outside [0, {d - 1}]")


def multinomial(counts) -> int:
    total = sum(counts)
    out = math.factorial(total)
    for c in counts:
        out //= math.factorial(c)
    return out


def perm_class(t, d: int | None = None):
    """(sorted representative, number of distinct permutations)."""
    if d is not None:
        _check_tuple(t, d)
    rep = tuple(sorted(int(x) for x in t))
    return rep, multinomial(Counter(rep).values())


def classes(d: int, n: int):
    """All sorted representatives of Z_d^n, i.e. multisets of size n."""
    return list(itertools.combinations_with_replacement(range(d), n))


@dataclass
class SPlan:
    d: int
    n: int
    m: int
    S: list = field(repr=False)
    T_support: list = field(repr=False)

    @property
    def free(self) -> int:
        return self.n - self.d * self.m

    @property
    def t_size(self) -> int:
        return sum(perm_class(c)[1] for c in self.T_support)

    def in_perm_s(self, t) -> bool:
        counts = Counter(int(x) for x in t)
        return all(counts[v] >= self.m for v in range(self.d))

    def in_t(self, t) -> bool:
        return sum(1 for x in t if int(x) == 0) >= self.d * self.m


def build_s_plan(d: int, n: int, m: int) -> SPlan:
    if d < 2 or m < 1 or n < 1:
        raise ValueError("need d >= 2, m >= 1, n >= 1")
    if d * m > n:
        raise ValueError(f"d*m = {d * m} exceeds n = {n}")
    prefix = tuple(v for v in range(d) for _ in range(m))
    free = n - d * m
    S = [prefix + tail for tail in itertools.product(range(d), repeat=free)]
    T = [c for c in classes(d, n) if c.count(0) >= d * m]
    return SPlan(d, n, m, S, T)


def count_perm_s(plan: SPlan) -> int:
    """Tuples in which every value appears at least m times, summed over classes."""
    total = 0
    for c in classes(plan.d, plan.n):
        counts = Counter(c)
        if all(counts[v] >= plan.m for v in range(plan.d)):
            total += multinomial(counts.values())
    return total


def perm_s_mask(plan: SPlan) -> np.ndarray:
    """Boolean mask over all_tuples(d, n) of the permutation closure of S."""
    tup = all_tuples(plan.d, plan.n)
    counts = np.stack([(tup == v).sum(axis=1) for v in range(plan.d)], axis=1)
    return (counts >= plan.m).all(axis=1)


def t_mask(plan: SPlan) -> np.ndarray:
    tup = all_tuples(plan.d, plan.n)
    return (tup == 0).sum(axis=1) >= plan.d * plan.m


def eval_pf(f, omega: RootOfUnity, J) -> FieldElement:
    """Sum over I of f(I) * omega**(I . J).

    f is a dict from tuples to field elements (missing keys are zero) or a
    sequence of values in tuple index order.
    """
    d = omega.order
    J = tuple(int(x) for x in J)
    _check_tuple(J, d)
    n = len(J)
    fld = omega.field
    if isinstance(f, dict):
        items = f.items()
    else:
        values = list(f)
        if len(values) != d ** n:
            raise ValueError(f"expected {d ** n} values, got {len(values)}")
        items = ((index_tuple(k, d, n), v) for k, v in enumerate(values))
    buckets = [fld.zero] * d
    for I, v in items:
        if len(I) != n:
            raise ValueError("tuple length mismatch")
        _check_tuple(I, d)
        e = sum(a * b for a, b in zip(I, J)) % d
        buckets[e] = buckets[e] + fld.element(v)
    out = fld.zero
    for e, c in enumerate(buckets):
        if not c.is_zero():
            out = out + c * omega.power(e)
    return out


def m_from_epsilon(n: int, d: int, eps: float) -> int:
    """Asymptotic recipe m = ceil(n (1 - delta) / d) with delta = eps / (10 ln(1/eps))."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    delta = eps / (10 * math.log(1 / eps))
    return math.ceil(n * (1 - delta) / d)


def zero_tail_estimate(n: int, d: int, delta: float) -> float:
    """Advisory Chernoff estimate of the fraction of tuples with >= n(1-delta) zeros."""
    a = 1 - delta
    div = a * math.log(d * a) + (delta * math.log(d * delta / (d - 1)) if delta > 0 else 0.0)
    return math.exp(-n * div)
