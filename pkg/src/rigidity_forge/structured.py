"""Structured matrix families and the transforms between them.

Group elements of G = Z_n1 x ... x Z_na are indexed in mixed radix (first factor
most significant).  Adjusted forms M[x, y] = f(x + y) are the working
representation; the plain G-circulant M[x, y] = f(x - y) equals the row
permutation x -> -x of the adjusted matrix built from g(z) = f(-z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import (
    FieldDescriptor,
    FieldElement,
    FieldError,
    InvariantViolation,
    primitive_root_of_unity,
    root_power_table,
    square_root,
)
from .linalg import ExactMatrix, element_coeffs, scale_and_permute


@dataclass(frozen=True)
class AbelianGroupSpec:
    invariant_factors: tuple

    def __post_init__(self):
        fac = tuple(int(n) for n in self.invariant_factors)
        if not fac or any(n < 2 for n in fac):
            raise ValueError("invariant factors must be a nonempty list of integers >= 2")
        object.__setattr__(self, "invariant_factors", fac)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.invariant_factors)

    def elements(self) -> np.ndarray:
        """(|G|, a) array of coordinates in index order."""
        grids = np.indices(self.invariant_factors).reshape(len(self.invariant_factors), -1).T
        return np.ascontiguousarray(grids, dtype=np.int64)

    def index(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        out = np.zeros(coords.shape[:-1], dtype=np.int64)
        for i, n in enumerate(self.invariant_factors):
            out = out * n + coords[..., i] % n
        return out

    def sum_table(self) -> np.ndarray:
        """Index of x + y for every pair of indices."""
        el = self.elements()
        return self.index(el[:, None, :] + el[None, :, :])

    def difference_table(self) -> np.ndarray:
        el = self.elements()
        return self.index(el[:, None, :] - el[None, :, :])

    def negation(self) -> np.ndarray:
        return self.index(-self.elements())


def gwh_group(d: int, n: int) -> AbelianGroupSpec:
    return AbelianGroupSpec((d,) * n)


def cyclic_group(N: int) -> AbelianGroupSpec:
    return AbelianGroupSpec((N,))


@dataclass
class MatrixDescriptor:
    """A matrix family member described by parameters; realize() rebuilds it."""

    kind: str
    params: dict
    field: FieldDescriptor = dc_field(default=None)

    KINDS = (
        "gwh",
        "dft",
        "circulant",
        "adjusted_circulant",
        "toeplitz",
        "hankel",
        "g_circulant",
        "adjusted_g_circulant",
        "dft_g",
        "vandermonde_geometric",
        "kronecker",
        "explicit",
    )

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown matrix kind {self.kind!r}")

    @property
    def size(self):
        return realize_shape(self)


def gwh(d, n, field):
    return MatrixDescriptor("gwh", {"d": int(d), "n": int(n)}, field)


def dft(N, field):
    return MatrixDescriptor("dft", {"N": int(N)}, field)


def dft_g(group, field):
    return MatrixDescriptor("dft_g", {"group": list(_group(group).invariant_factors)}, field)


def _values(field, values):
    return [field.element(v) for v in values]


def circulant(f, field):
    return MatrixDescriptor("circulant", {"f": _values(field, f)}, field)


def adjusted_circulant(f, field):
    return MatrixDescriptor("adjusted_circulant", {"f": _values(field, f)}, field)


def g_circulant(group, f, field):
    return MatrixDescriptor("g_circulant", {"group": list(_group(group).invariant_factors), "f": _values(field, f)}, field)


def adjusted_g_circulant(group, f, field):
    return MatrixDescriptor(
        "adjusted_g_circulant", {"group": list(_group(group).invariant_factors), "f": _values(field, f)}, field
    )


def toeplitz(t, field):
    """t has length 2N-1; entry (i, j) is t[i - j + N - 1]."""
    return MatrixDescriptor("toeplitz", {"t": _values(field, t)}, field)


def hankel(h, field):
    """h has length 2N-1; entry (i, j) is h[i + j]."""
    return MatrixDescriptor("hankel", {"h": _values(field, h)}, field)


def vandermonde_geometric(a, b, N, field):
    return MatrixDescriptor("vandermonde_geometric", {"a": field.element(a), "b": field.element(b), "N": int(N)}, field)


def explicit(matrix: ExactMatrix):
    """A matrix given entry by entry; used when no family describes it."""
    return MatrixDescriptor("explicit", {"matrix": matrix}, matrix.field)


def kronecker_descriptor(factors):
    factors = list(factors)
    return MatrixDescriptor("kronecker", {"factors": factors}, factors[0].field)


def _group(g) -> AbelianGroupSpec:
    if isinstance(g, AbelianGroupSpec):
        return g
    return AbelianGroupSpec(tuple(g))


def descriptor_group(desc: MatrixDescriptor) -> AbelianGroupSpec:
    """Group underlying a group-indexed descriptor."""
    k, p = desc.kind, desc.params
    if k == "gwh":
        return gwh_group(p["d"], p["n"])
    if k == "dft":
        return cyclic_group(p["N"])
    if k in ("circulant", "adjusted_circulant"):
        return cyclic_group(len(p["f"]))
    if k in ("g_circulant", "adjusted_g_circulant", "dft_g"):
        return _group(p["group"])
    raise ValueError(f"{k} matrices are not indexed by a group")


def realize_shape(desc: MatrixDescriptor):
    k, p = desc.kind, desc.params
    if k in ("toeplitz", "hankel"):
        n = (len(p["t" if k == "toeplitz" else "h"]) + 1) // 2
        return n, n
    if k == "vandermonde_geometric":
        return p["N"], p["N"]
    if k == "explicit":
        return p["matrix"].shape
    if k == "kronecker":
        r = c = 1
        for f in p["factors"]:
            a, b = realize_shape(f)
            r, c = r * a, c * b
        return r, c
    n = descriptor_group(desc).order
    return n, n


def _from_values(field, values, index):
    coeffs, den = element_coeffs(field, values)
    return ExactMatrix(field, coeffs[index], den)


def character_table(group: AbelianGroupSpec, field: FieldDescriptor) -> ExactMatrix:
    """DFT_G: entry (x, y) = prod_i omega_{n_i}^(x_i y_i)."""
    L = group.exponent
    root = primitive_root_of_unity(field, L)
    table = np.array(root_power_table(root), dtype=object)
    el = group.elements()
    weights = np.array([L // n for n in group.invariant_factors], dtype=np.int64)
    exps = (el[:, None, :] * el[None, :, :] * weights).sum(axis=2) % L
    return ExactMatrix(field, table[exps])


def realize(desc: MatrixDescriptor) -> ExactMatrix:
    k, p, field = desc.kind, desc.params, desc.field
    if k in ("gwh", "dft", "dft_g"):
        return character_table(descriptor_group(desc), field)
    if k in ("adjusted_circulant", "adjusted_g_circulant"):
        return _from_values(field, p["f"], descriptor_group(desc).sum_table())
    if k in ("circulant", "g_circulant"):
        return _from_values(field, p["f"], descriptor_group(desc).difference_table())
    if k == "toeplitz":
        n = (len(p["t"]) + 1) // 2
        i = np.arange(n)
        return _from_values(field, p["t"], i[:, None] - i[None, :] + n - 1)
    if k == "hankel":
        n = (len(p["h"]) + 1) // 2
        i = np.arange(n)
        return _from_values(field, p["h"], i[:, None] + i[None, :])
    if k == "vandermonde_geometric":
        a, b, n = p["a"], p["b"], p["N"]
        rows = []
        for i in range(n):
            x = a * b ** i
            rows.append([x ** j for j in range(n)])
        return ExactMatrix.from_rows(field, rows)
    if k == "explicit":
        return p["matrix"]
    if k == "kronecker":
        out = realize(p["factors"][0])
        for f in p["factors"][1:]:
            out = out.kron(realize(f))
        return out
    raise ValueError(k)


def move_descriptor(desc: MatrixDescriptor, field: FieldDescriptor) -> MatrixDescriptor:
    """The same matrix described over another field.

    Values are re-encoded with field.element, so this both lifts into larger
    fields and descends into a prime field when every value lies there.
    Character tables keep their kind and pick up the target field's roots.
    """
    if desc.field == field:
        return desc
    params = {}
    for key, val in desc.params.items():
        if key in ("f", "t", "h"):
            params[key] = [field.element(v) for v in val]
        elif key in ("a", "b"):
            params[key] = field.element(val)
        elif key == "factors":
            params[key] = [move_descriptor(d, field) for d in val]
        elif key == "matrix":
            m = val.lift(field) if _is_lift(val.field, field) else val.in_field(field)
            params[key] = m
        else:
            params[key] = val
    return MatrixDescriptor(desc.kind, params, field)


def _is_lift(src, dst):
    return src.degree <= dst.degree and not (src.is_finite and dst.is_finite and dst.degree == 1)


# ---------------------------------------------------------------------------
# diagonalization


def group_transform(f, group: AbelianGroupSpec, field: FieldDescriptor) -> ExactMatrix:
    """Column vector (DFT_G f)_J = sum_I f(I) omega^(I.J)."""
    vec = ExactMatrix.from_vector(field, f)
    return character_table(group, field) @ vec


def diagonalize_adjusted(f, group, field: FieldDescriptor) -> ExactMatrix:
    """Diagonal of DFT_G M(f) DFT_G for the adjusted matrix M(f), as a column vector."""
    group = _group(group)
    return group_transform(f, group, field) * group.order


def check_diagonalization(f, group, field) -> bool:
    group = _group(group)
    H = character_table(group, field)
    M = realize(adjusted_g_circulant(group, f, field))
    return H @ M @ H == ExactMatrix.diagonal(diagonalize_adjusted(f, group, field))


def rank_via_roots(f, group, field) -> int:
    """|G| minus the number of characters at which f's transform vanishes."""
    group = _group(group)
    vec = group_transform(f, group, field)
    return int(vec.nonzero_mask().sum())


# ---------------------------------------------------------------------------
# rescalings and embeddings


def gwh_rescaling_root(d: int, field: FieldDescriptor):
    """zeta with zeta^2 = omega_d and zeta^(x^2) well defined on Z_d."""
    if d % 2:
        return primitive_root_of_unity(field, d).power((d + 1) // 2)
    return primitive_root_of_unity(field, 2 * d).element


def rescale_gwh(d: int, n: int, field: FieldDescriptor):
    """(row_scales, col_scales, f) with diag(rows) H_{d,n} diag(cols) = M(f) adjusted, f(x) = zeta^(sum x_i^2)."""
    try:
        zeta = gwh_rescaling_root(d, field)
    except FieldError as exc:
        raise FieldError(f"{field} cannot host the rescaling root for d={d}: {exc}") from None
    group = gwh_group(d, n)
    el = group.elements()
    sq = (el * el).sum(axis=1)
    order = d if d % 2 else 2 * d
    powers = [zeta ** e for e in range(order)]
    scales = [powers[int(e) % order] for e in sq]
    f_sym = scales
    H = character_table(group, field)
    lhs = scale_and_permute(H, scales, scales)
    if lhs != realize(adjusted_g_circulant(group, f_sym, field)):
        raise InvariantViolation("GWH rescaling identity failed")
    return scales, list(scales), f_sym


def embed_circulant(f, N: int):
    """Values g on Z_N whose circulant has the circulant of f (length N') as upper-left block."""
    f = list(f)
    n0 = len(f)
    if N < 2 * n0:
        raise ValueError(f"ambient size {N} is below 2 * {n0}")
    zero = f[0] - f[0]
    g = [zero] * N
    for j in range(n0):
        g[j] = f[j]
    for j in range(1, n0):
        g[N - j] = f[n0 - j]
    return g


def embed_hankel(h, N: int):
    """Values g on Z_N whose adjusted circulant has the Hankel matrix of h as upper-left block."""
    h = list(h)
    if N < len(h):
        raise ValueError(f"ambient size {N} is below {len(h)}")
    zero = h[0] - h[0]
    return h + [zero] * (N - len(h))


def toeplitz_to_hankel(t):
    """Reversing the rows of toeplitz(t) gives hankel(h) with h[k] = t[2N-2-k]."""
    return list(reversed(list(t)))


def reversal(n: int) -> np.ndarray:
    return np.arange(n - 1, -1, -1)


def vandermonde_to_hankel(a: FieldElement, b: FieldElement, N: int):
    """Scales turning V(a, ab, ..., ab^(N-1)) into a Hankel matrix c^((i+j)^2), c^2 = b."""
    field = a.field
    if a.is_zero() or b.is_zero():
        raise ValueError("a and b must be nonzero")
    c = square_root(b)
    if c is None:
        raise FieldError(f"{b} has no square root in {field}; use a larger field")
    rows = [c ** (i * i) for i in range(N)]
    cols = [a ** (-j) * c ** (j * j) for j in range(N)]
    return rows, cols


def crt_permutations(factors):
    """(row_perm, col_perm) with DFT_N.permute(row_perm, col_perm) = DFT_x1 (x) ... (x) DFT_xj.

    Rows follow i -> (i mod x_1, ..., i mod x_j); columns follow
    (k_1, ..., k_j) -> sum k_s N / x_s mod N.
    """
    factors = [int(x) for x in factors]
    N = math.prod(factors)
    for a in range(len(factors)):
        for b in range(a + 1, len(factors)):
            if math.gcd(factors[a], factors[b]) != 1:
                raise ValueError("factors must be pairwise coprime")
    group = AbelianGroupSpec(tuple(factors))
    el = group.elements()
    rows = np.zeros(N, dtype=np.int64)
    idx = group.index(np.stack([np.arange(N) % x for x in factors], axis=1))
    rows[idx] = np.arange(N)
    weights = np.array([N // x for x in factors], dtype=np.int64)
    cols = (el * weights).sum(axis=1) % N
    return rows, cols
