"""Number theory for choosing DFT sizes: smoothness, good primes, factorable integers, discrete logs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy


class SearchExhausted(RuntimeError):
    """A desk-scale search ran out of candidates; ``diagnosis`` says where."""

    def __init__(self, message, diagnosis=None):
        super().__init__(message)
        self.diagnosis = diagnosis or []


def factorize(n: int) -> dict:
    """{prime: exponent}; factorize(1) is empty."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def prime_powers(n: int) -> list:
    """Exact prime-power divisors of n, ascending by prime."""
    return [p**e for p, e in sorted(factorize(n).items())]


def rho_plus(n: int) -> int:
    if n < 1:
        raise ValueError("rho_plus needs n >= 1")
    f = factorize(n)
    return max(f) if f else 1


def pi_a(a: int, x: int, y: int) -> int:
    """Number of primes a < p <= x with p - a being y-smooth."""
    if a < 1:
        raise ValueError("a must be >= 1")
    return sum(1 for p in sympy.primerange(a + 1, x + 1) if rho_plus(p - a) <= y)


@dataclass(frozen=True)
class GoodPrimeConfig:
    lower_bound: int
    upper_bound: int
    max_prime_power: int
    alpha: Fraction = Fraction(3, 10)

    def __post_init__(self):
        if self.lower_bound > self.upper_bound:
            raise ValueError("lower_bound exceeds upper_bound")
        if self.max_prime_power < 2:
            raise ValueError("max_prime_power must be >= 2")

    @classmethod
    def for_scale(cls, x: int, alpha=Fraction(3, 10), c0: float = 1.0):
        """Interval [x / (ln x)^c0, x] and prime powers up to x^alpha."""
        lower = max(2, math.ceil(x / math.log(x) ** c0)) if x > 2 else 2
        return cls(lower, x, max(2, math.floor(x ** float(alpha))), Fraction(alpha))

    def is_good(self, q: int) -> bool:
        if not (self.lower_bound <= q <= self.upper_bound and sympy.isprime(q)):
            return False
        return all(pp <= self.max_prime_power for pp in prime_powers(q - 1)) if q > 2 else True


def good_primes(config: GoodPrimeConfig) -> list:
    return [
        int(q)
        for q in sympy.primerange(config.lower_bound, config.upper_bound + 1)
        if q == 2 or all(pp <= config.max_prime_power for pp in prime_powers(q - 1))
    ]


@dataclass(frozen=True)
class FactorableWitness:
    N: int
    primes: tuple
    config: GoodPrimeConfig
    x: int | None = None

    def __post_init__(self):
        ps = tuple(sorted(self.primes))
        object.__setattr__(self, "primes", ps)
        if len(set(ps)) != len(ps):
            raise ValueError("primes must be distinct")
        if math.prod(ps) != self.N:
            raise ValueError("N is not the product of the primes")
        bad = [q for q in ps if not self.config.is_good(q)]
        if bad:
            raise ValueError(f"primes {bad} are not good under {self.config}")

    @property
    def l(self) -> int:
        return len(self.primes)


def find_factorable(l: int, config: GoodPrimeConfig) -> FactorableWitness:
    if l < 1:
        raise ValueError("l must be >= 1")
    good = good_primes(config)
    if len(good) < l:
        raise SearchExhausted(f"only {len(good)} good primes in [{config.lower_bound}, {config.upper_bound}], need {l}")
    chosen = good[-l:]
    return FactorableWitness(math.prod(chosen), tuple(chosen), config)


# ---------------------------------------------------------------------------
# interval search


@dataclass(frozen=True)
class ConfigFamily:
    """Scale-indexed good-prime configurations and admissible prime counts.

    At scale x the good primes come from GoodPrimeConfig.for_scale(x) and the
    number of primes l ranges over [x / (ln x)^(c0 + k_high), x / (ln x)^(c0 + k_low)],
    clamped below by 1.  The asymptotic statement uses k_low = 10, k_high = 100;
    desk-scale defaults are much smaller so that the ranges are nonempty.
    """

    alpha: Fraction = Fraction(3, 5)
    c0: float = 1.0
    k_low: float = 0.0
    k_high: float = 2.0
    x_start: int = 3

    def config_at(self, x: int) -> GoodPrimeConfig:
        return GoodPrimeConfig.for_scale(x, self.alpha, self.c0)

    def l_range(self, x: int):
        lx = math.log(max(x, 3))
        hi = max(1, math.floor(x / lx ** (self.c0 + self.k_low)))
        lo = max(1, math.ceil(x / lx ** (self.c0 + self.k_high)))
        return min(lo, hi), hi


def _largest_product_at_most(primes, limit, lo, hi):
    """Largest product of between lo and hi distinct primes from the list that is <= limit."""
    primes = sorted(primes)
    best = (0, ())

    def dfs(start, prod, chosen):
        nonlocal best
        if lo <= len(chosen) <= hi and prod > best[0]:
            best = (prod, tuple(chosen))
        if len(chosen) == hi:
            return
        for i in range(start, len(primes)):
            q = primes[i]
            if prod * q > limit:
                break
            chosen.append(q)
            dfs(i + 1, prod * q, chosen)
            chosen.pop()

    dfs(0, 1, [])
    return best


def _scales(family: ConfigFamily, K: int):
    x = family.x_start
    while x <= K:
        yield x
        x *= 2
    yield x


def well_factorable_at_most(K: int, family: ConfigFamily):
    """(N0, primes, x) with N0 the largest well-factorable integer <= K, or None."""
    best = None
    for x in _scales(family, K):
        good = good_primes(family.config_at(x))
        lo, hi = family.l_range(x)
        prod, chosen = _largest_product_at_most(good, K, lo, hi)
        if prod and (best is None or prod > best[0]):
            best = (prod, chosen, x)
    return best


def scales_search(K: int, family: ConfigFamily | None = None) -> FactorableWitness:
    """Well-factorable N with K < N < K (ln K)^2, via augment / replace / rescale steps."""
    family = family or ConfigFamily()
    if K < 3:
        raise ValueError("K must be >= 3")
    upper = K * math.log(K) ** 2
    start = well_factorable_at_most(K, family)
    if start is None:
        raise SearchExhausted(f"no well-factorable integer <= {K}", ["no starting point"])
    N0, primes, x = start
    diagnosis = [f"start N0={N0} primes={list(primes)} x={x}"]

    def accept(cands, x, step):
        N = math.prod(cands)
        ok = K < N < upper
        diagnosis.append(f"{step}: N={N} primes={sorted(cands)} x={x} -> {'ok' if ok else 'outside window'}")
        if ok:
            return FactorableWitness(N, tuple(cands), family.config_at(x), x)
        return None

    for _ in range(32):
        config = family.config_at(x)
        good = good_primes(config)
        lo, hi = family.l_range(x)
        unused = [q for q in good if q not in primes]
        if len(primes) < hi and unused:
            w = accept(list(primes) + [unused[0]], x, "augment")
            if w:
                return w
        largest = good[-len(primes):] if len(primes) <= len(good) else good
        if sorted(primes) != sorted(largest):
            q1 = min(primes)
            larger = [q for q in unused if q > q1]
            if larger:
                w = accept([q for q in primes if q != q1] + [larger[0]], x, "replace")
                if w:
                    return w
        x2 = 2 * x
        cfg2 = family.config_at(x2)
        lo2, hi2 = family.l_range(x2)
        if not all(cfg2.is_good(q) for q in primes) or not lo2 <= len(primes) <= hi2:
            diagnosis.append(f"rescale: primes not admissible at x={x2}")
            break
        diagnosis.append(f"rescale: x={x} -> {x2}")
        x = x2
    raise SearchExhausted(f"no well-factorable N in ({K}, {upper:.1f}) found", diagnosis)


def factorable_window_scan(K: int, family: ConfigFamily | None = None):
    """Exhaustive oracle: smallest well-factorable N with K < N < K (ln K)^2, or None."""
    family = family or ConfigFamily()
    upper = K * math.log(K) ** 2
    best = None
    for x in _scales(family, int(upper) + 1):
        good = good_primes(family.config_at(x))
        lo, hi = family.l_range(x)

        def dfs(start, prod, count):
            nonlocal best
            if prod > K and lo <= count <= hi and (best is None or prod < best[0]):
                best = (prod, x)
            if count == hi:
                return
            for i in range(start, len(good)):
                if prod * good[i] >= upper:
                    break
                dfs(i + 1, prod * good[i], count + 1)

        dfs(0, 1, 0)
    return best


# ---------------------------------------------------------------------------
# cyclic groups mod p


def primitive_root(p: int) -> int:
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    return int(sympy.primitive_root(p))


@lru_cache(maxsize=None)
def _log_table(g: int, p: int):
    table = {}
    x = 1
    for e in range(p - 1):
        if x in table:
            raise ValueError(f"{g} is not a primitive root mod {p}")
        table[x] = e
        x = x * g % p
    return table


def discrete_log(g: int, t: int, p: int) -> int:
    if t % p == 0:
        raise ValueError("t must be a unit mod p")
    return _log_table(g % p, p)[t % p]


def ord_mod(q: int, n: int) -> int:
    """Multiplicative order of q modulo n."""
    if math.gcd(q, n) != 1:
        raise ValueError(f"gcd({q}, {n}) > 1")
    if n == 1:
        return 1
    return int(sympy.n_order(q, n))


# ---------------------------------------------------------------------------
# field sizes


def gwh_root_order(t: int) -> int:
    """Root order needed to rescale a GWH matrix over Z_t: t for odd t, 2t for even t."""
    return t if t % 2 else 2 * t


def dft_root_orders(N: int) -> list:
    """All root orders used when decomposing DFT_N through its prime factorization."""
    orders = {N}
    for q in factorize(N):
        for t in prime_powers(q - 1):
            orders.add(gwh_root_order(t))
    return sorted(orders)


@dataclass
class ExtensionReport:
    m: int
    N_prime: int
    N: int
    log_ratio_to_cube: float = field(default=0.0)


def extension_degree_account(witness: FactorableWitness, target: int):
    """Cyclotomic order used for a size-``target`` circulant routed through DFT_N."""
    if 2 * target > witness.N:
        raise ValueError("target must be at most N / 2")
    m = math.lcm(*dft_root_orders(witness.N))
    report = ExtensionReport(m, target, witness.N, math.log(m) - 3 * math.log(max(target, 2)))
    return m, report
