"""Circulant, Toeplitz and Hankel certificates through a squarefree ambient DFT, and DFT_N for any N."""

from __future__ import annotations

from ..fields import FieldDescriptor, InvariantViolation, field_with_roots, primitive_root_of_unity
from ..linalg import ExactMatrix
from ..numtheory import SearchExhausted, factorize, gwh_root_order, scales_search
from ..structured import (
    adjusted_circulant,
    circulant,
    cyclic_group,
    dft,
    embed_circulant,
    embed_hankel,
    hankel,
    realize,
    reversal,
    toeplitz,
)
from .core import (
    Certificate,
    CertificateError,
    diagonalization_transfer,
    permute_certificate,
    restrict_certificate,
    scale_certificate,
)
from .dft import DftBlockPlan, dft_decompose, dft_field

KINDS = ("circulant", "adjusted_circulant", "toeplitz", "hankel")


def _squarefree(n):
    return all(e == 1 for e in factorize(n).values())


def smallest_ambient(K: int, characteristic: int = 0) -> int:
    """Smallest squarefree N0 > K coprime to the characteristic."""
    n = K + 1
    while not (_squarefree(n) and (characteristic == 0 or n % characteristic)):
        n += 1
    return n


def choose_ambient(K: int, characteristic: int = 0, family=None, field=None):
    """(N0, primes, how) with N0 > K squarefree and prime to the characteristic.

    With a ``family`` the well-factorable N0 from the scale search is used
    when it exists.  Otherwise the candidates in (K, 2K + 2] are ranked by the
    degree of the field the DFT needs, then by size.
    """
    if family is not None:
        try:
            w = scales_search(K, family) if K >= 3 else None
        except SearchExhausted:
            w = None
        if w is not None and (characteristic == 0 or w.N % characteristic):
            return w.N, w.primes, "scales_search"
    cands = [n for n in range(K + 1, 2 * K + 3) if _squarefree(n) and (characteristic == 0 or n % characteristic)]
    if not cands:
        cands = [smallest_ambient(K, characteristic)]
    if field is None:
        n = cands[0]
        return n, tuple(sorted(factorize(n))), "smallest_squarefree"

    def cost(n):
        return dft_field(DftBlockPlan(tuple(sorted(factorize(n)))), field).degree, n

    n = min(cands, key=cost)
    return n, tuple(sorted(factorize(n))), "smallest_field"


def _ambient(need, char, ambient=None, family=None, field=None):
    if ambient is None:
        return choose_ambient(need - 1, char, family, field)
    N0 = int(ambient)
    if N0 < need:
        raise CertificateError(f"ambient size {N0} is below {need}")
    if not _squarefree(N0):
        raise CertificateError(f"ambient size {N0} is not squarefree")
    if char and N0 % char == 0:
        raise CertificateError(f"characteristic {char} divides the ambient size {N0}")
    return N0, tuple(sorted(factorize(N0))), "given"


def _adjusted_from_dft(g, N0, primes, field, dft_options):
    """Certificate for the adjusted circulant M(g) over Z_N0 via M(g) = X diag(v) X, X = DFT_N0."""
    plan = DftBlockPlan(primes, **(dft_options or {}))
    F = dft_field(plan, field)
    cert_x = dft_decompose(plan, F)
    F = cert_x.field
    g = [F.element(field.element(v)) for v in g]
    X = realize(cert_x.matrix)
    v = X @ ExactMatrix.from_vector(F, g)
    neg = cyclic_group(N0).negation()
    inv = F.element(N0).inverse()
    D = [v.entry(int(neg[j]), 0) * inv for j in range(N0)]
    out = diagonalization_transfer(cert_x, D, "ADA", adjusted_circulant(g, F))
    out.provenance.update(dft=cert_x.provenance)
    return out, F


def circulant_decompose(values, field: FieldDescriptor, kind: str = "circulant", ambient=None, family=None,
                        dft_options=None) -> Certificate:
    """Certificate for an N x N circulant, adjusted circulant, Toeplitz or Hankel matrix.

    ``values`` are f (length N) for the circulants and t or h (length 2N-1)
    for Toeplitz and Hankel.  The matrix is the upper-left block of a
    circulant over Z_N0 with N0 squarefree; ``ambient`` fixes N0 directly.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    values = [field.element(v) for v in values]
    if kind in ("circulant", "adjusted_circulant"):
        N = len(values)
    else:
        if len(values) % 2 == 0:
            raise ValueError("Toeplitz and Hankel data must have odd length 2N-1")
        N = (len(values) + 1) // 2
    need = 2 * N if kind == "circulant" else 2 * N - 1
    N0, primes, how = _ambient(need, field.characteristic, ambient, family, field)
    zero_rows = list(range(N))
    if kind == "circulant":
        g = embed_circulant(values, N0)
        g_neg = [g[(-z) % N0] for z in range(N0)]
        cert, F = _adjusted_from_dft(g_neg, N0, primes, field, dft_options)
        neg = cyclic_group(N0).negation()
        g = [F.element(v) for v in g]
        cert = permute_certificate(cert, neg, None, circulant(g, F))
        target = circulant([F.element(v) for v in values], F)
        out = restrict_certificate(cert, zero_rows, zero_rows, target)
    else:
        if kind == "adjusted_circulant":
            h = [values[k % N] for k in range(2 * N - 1)]
        elif kind == "toeplitz":
            h = list(reversed(values))
        else:
            h = values
        cert, F = _adjusted_from_dft(embed_hankel(h, N0), N0, primes, field, dft_options)
        sub = restrict_certificate(cert, zero_rows, zero_rows, hankel([F.element(v) for v in h], F))
        if kind == "hankel":
            out = sub
        elif kind == "toeplitz":
            out = permute_certificate(sub, reversal(N), None, toeplitz([F.element(v) for v in values], F))
        else:
            out = Certificate(adjusted_circulant([F.element(v) for v in values], F), F, sub.changes,
                              sub.claimed_rank, sub.claimed_regular_sparsity, sub.provenance)
            if realize(out.matrix) != realize(sub.matrix):
                raise InvariantViolation("adjusted circulant is not the Hankel block")
    out.provenance = {
        "route": "circulant",
        "kind": kind,
        "N": N,
        "ambient": N0,
        "ambient_primes": list(primes),
        "ambient_from": how,
        "degenerate": bool(cert.provenance.get("degenerate")) or out.claimed_rank >= N,
    }
    return out


def _half_root(field: FieldDescriptor, N: int):
    """zeta with zeta^2 equal to the root realize uses for DFT_N."""
    omega = primitive_root_of_unity(field, N).element
    if N % 2:
        zeta = omega ** ((N + 1) // 2)
    else:
        zeta = primitive_root_of_unity(field, 2 * N).element
    if zeta * zeta != omega:
        raise InvariantViolation("square root of the DFT root is inconsistent")
    return zeta


def dft_any_decompose(N: int, field: FieldDescriptor, ambient=None, family=None, dft_options=None) -> Certificate:
    """Certificate for DFT_N with arbitrary N: omega^(xy) = zeta^((x+y)^2) zeta^(-x^2) zeta^(-y^2)."""
    if N < 1:
        raise ValueError("N must be positive")
    F = field_with_roots(field, [gwh_root_order(N), N])
    if F.is_finite and N % F.characteristic == 0:
        raise CertificateError(f"characteristic {F.characteristic} divides N = {N}")
    # fix the working field first so that zeta is the square root of the DFT_N root there
    N0, primes, _ = _ambient(2 * N - 1, F.characteristic, ambient, family, F)
    G = dft_field(DftBlockPlan(primes, **(dft_options or {})), F)
    zeta = _half_root(G, N)
    h = [zeta ** (k * k) for k in range(2 * N - 1)]
    cert = circulant_decompose(h, G, "hankel", ambient=N0, dft_options=dft_options)
    if cert.field != G:
        raise InvariantViolation("Hankel certificate left the working field")
    scales = [(zeta ** (x * x)).inverse() for x in range(N)]
    out = scale_certificate(cert, scales, scales, dft(N, G))
    out.provenance = dict(cert.provenance, route="dft_any", N=N)
    return out
