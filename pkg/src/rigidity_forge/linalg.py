"""Dense exact matrices over a FieldDescriptor, sparse change sets and exact rank.

A matrix stores an integer coefficient tensor ``num`` of shape (rows, cols, degree)
and one positive common denominator ``den`` (always 1 over finite fields), so an
entry equals ``sum_t num[i, j, t] * gen**t / den``.  Products go through integer
matrix multiplication with Kronecker substitution for the polynomial part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import flint
import numpy as np
import sympy

from .fields import FieldDescriptor, FieldElement, FieldError, lift_map, power_basis


class ShapeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer kernels


def _zeros(shape):
    return np.zeros(shape, dtype=object)


def _as_int_list(arr):
    return [int(x) for x in arr.ravel().tolist()]


def int_matmul(a, b):
    """Exact product of two 2-D arrays of Python ints."""
    n, k = a.shape
    k2, c = b.shape
    if k != k2:
        raise ShapeError(f"inner dimensions {k} and {k2} differ")
    if n == 0 or c == 0 or k == 0:
        return _zeros((n, c))
    fa = flint.fmpz_mat(n, k, _as_int_list(a))
    fb = flint.fmpz_mat(k, c, _as_int_list(b))
    out = np.empty(n * c, dtype=object)
    out[:] = [int(x) for x in (fa * fb).entries()]
    return out.reshape(n, c)


def _max_abs(arr) -> int:
    if arr.size == 0:
        return 0
    return int(max(abs(int(x)) for x in arr.ravel().tolist()))


def _pack(num, bits):
    """Evaluate coefficient vectors at 2**bits (Kronecker substitution)."""
    length = num.shape[-1]
    v = num[..., length - 1].copy()
    for j in range(length - 2, -1, -1):
        v = (v << bits) + num[..., j]
    return v


def _unpack(v, length, bits):
    half = 1 << (bits - 1)
    mask = (1 << bits) - 1
    out = _zeros(v.shape + (length,))
    v = v.copy()
    for j in range(length):
        c = ((v + half) & mask) - half
        out[..., j] = c
        v = (v - c) >> bits
    return out


def _reduce_poly(poly, field: FieldDescriptor):
    """Reduce coefficient tensors of arbitrary length modulo the field's modulus."""
    k = field.degree
    length = poly.shape[-1]
    lead = poly.shape[:-1]
    if length <= k:
        out = _zeros(lead + (k,))
        out[..., :length] = poly
    else:
        table = np.array(power_basis(field, length), dtype=object)
        flat = poly.reshape(-1, length)
        if flat.shape[0] * length * k < 20000:
            out = flat.dot(table)
        else:
            out = int_matmul(flat, table)
        out = out.reshape(lead + (k,))
    if field.is_finite:
        out = out % field.p
    return out


def _poly_product_bits(a, b, terms):
    bound = terms * _max_abs(a) * _max_abs(b)
    return bound.bit_length() + 2


def _elementwise_mul(a, b, field: FieldDescriptor):
    """Entrywise field product of two broadcastable coefficient tensors."""
    k = field.degree
    if k == 1:
        out = a * b
        return out % field.p if field.is_finite else out
    bits = _poly_product_bits(a, b, k)
    prod = _pack(a, bits) * _pack(b, bits)
    return _reduce_poly(_unpack(prod, 2 * k - 1, bits), field)


def _poly_matmul(a, b, field: FieldDescriptor):
    k = field.degree
    if k == 1:
        out = int_matmul(a[..., 0], b[..., 0])[..., None]
        return out % field.p if field.is_finite else out
    bits = _poly_product_bits(a, b, k * a.shape[1])
    prod = int_matmul(_pack(a, bits), _pack(b, bits))
    return _reduce_poly(_unpack(prod, 2 * k - 1, bits), field)


def _normalize(num, den, field):
    if field.is_finite:
        return num % field.p, 1
    if den <= 0:
        raise ValueError("denominator must be positive")
    if den == 1:
        return num, 1
    g = gcd(den, *_as_int_list(num)) if num.size else den
    if g > 1:
        num = num // g
        den //= g
    return num, den


def element_coeffs(field, elements):
    """Integer coefficient rows (len x degree) plus common denominator for a list of elements."""
    if field.is_finite:
        return np.array([list(e.coeffs) for e in elements], dtype=object).reshape(len(elements), field.degree), 1
    den = 1
    for e in elements:
        for c in e.coeffs:
            den = lcm(den, c.denominator)
    rows = [[int(c * den) for c in e.coeffs] for e in elements]
    return np.array(rows, dtype=object).reshape(len(elements), field.degree), den


# ---------------------------------------------------------------------------
# dense matrices


class ExactMatrix:
    __slots__ = ("field", "num", "den")

    def __init__(self, field: FieldDescriptor, num, den: int = 1):
        num = np.asarray(num, dtype=object)
        if num.ndim != 3 or num.shape[2] != field.degree:
            raise ShapeError(f"coefficient tensor has shape {num.shape}, degree {field.degree} expected")
        self.field = field
        self.num, self.den = _normalize(num, int(den), field)

    # constructors

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, _zeros((rows, cols, field.degree)))

    @classmethod
    def identity(cls, field, n):
        num = _zeros((n, n, field.degree))
        for i in range(n):
            num[i, i, 0] = 1
        return cls(field, num)

    @classmethod
    def from_rows(cls, field, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        c = len(rows[0]) if n else 0
        if any(len(r) != c for r in rows):
            raise ShapeError("ragged rows")
        elems = [field.element(x) for r in rows for x in r]
        coeffs, den = element_coeffs(field, elems)
        return cls(field, coeffs.reshape(n, c, field.degree), den)

    @classmethod
    def from_vector(cls, field, values):
        """Column vector (n x 1)."""
        return cls.from_rows(field, [[v] for v in values])

    @classmethod
    def diagonal(cls, vec: "ExactMatrix"):
        n = vec.rows
        num = _zeros((n, n, vec.field.degree))
        idx = np.arange(n)
        num[idx, idx] = vec.num[:, 0]
        return cls(vec.field, num, vec.den)

    # shape and access

    @property
    def rows(self):
        return self.num.shape[0]

    @property
    def cols(self):
        return self.num.shape[1]

    @property
    def shape(self):
        return self.num.shape[:2]

    def entry(self, i, j) -> FieldElement:
        vals = self.num[i, j]
        if self.field.is_finite:
            return FieldElement._raw(self.field, [int(v) for v in vals])
        return FieldElement._raw(self.field, [Fraction(int(v), self.den) for v in vals])

    def __getitem__(self, key):
        i, j = key
        if isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer)):
            return self.entry(int(i), int(j))
        rows = np.arange(self.rows)[i]
        cols = np.arange(self.cols)[j]
        return self.take(np.atleast_1d(rows), np.atleast_1d(cols))

    def take(self, rows, cols) -> "ExactMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        return ExactMatrix(self.field, self.num[np.ix_(rows, cols)], self.den)

    def to_rows(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def nonzero_mask(self):
        return (self.num != 0).any(axis=2)

    def is_zero(self) -> bool:
        return not self.nonzero_mask().any()

    def coefficient_array(self, field_check=None):
        return self.num, self.den

    # arithmetic

    def _check(self, other):
        if not isinstance(other, ExactMatrix):
            raise TypeError("expected an ExactMatrix")
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")

    def _combine(self, other, sign):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"shapes {self.shape} and {other.shape} differ")
        d = lcm(self.den, other.den)
        a = self.num if d == self.den else self.num * (d // self.den)
        b = other.num if d == other.den else other.num * (d // other.den)
        return ExactMatrix(self.field, a + b if sign > 0 else a - b, d)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return ExactMatrix(self.field, -self.num, self.den)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return ExactMatrix(self.field, _poly_matmul(self.num, other.num, self.field), self.den * other.den)

    def scale(self, scalar) -> "ExactMatrix":
        s = self.field.element(scalar)
        coeffs, den = element_coeffs(self.field, [s])
        return ExactMatrix(self.field, _elementwise_mul(self.num, coeffs[0], self.field), self.den * den)

    def __mul__(self, scalar):
        if isinstance(scalar, ExactMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(scalar)

    __rmul__ = __mul__

    def hadamard(self, other) -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(self.field, _elementwise_mul(self.num, other.num, self.field), self.den * other.den)

    def _vector_coeffs(self, values, length):
        if isinstance(values, ExactMatrix):
            if values.shape != (length, 1):
                raise ShapeError("scale vector has the wrong length")
            return values.num[:, 0, :], values.den
        values = [self.field.element(v) for v in values]
        if len(values) != length:
            raise ShapeError("scale vector has the wrong length")
        return element_coeffs(self.field, values)

    def scale_rows(self, values) -> "ExactMatrix":
        coeffs, den = self._vector_coeffs(values, self.rows)
        return ExactMatrix(self.field, _elementwise_mul(self.num, coeffs[:, None, :], self.field), self.den * den)

    def scale_cols(self, values) -> "ExactMatrix":
        coeffs, den = self._vector_coeffs(values, self.cols)
        return ExactMatrix(self.field, _elementwise_mul(self.num, coeffs[None, :, :], self.field), self.den * den)

    def kron(self, other) -> "ExactMatrix":
        self._check(other)
        n1, c1 = self.shape
        n2, c2 = other.shape
        prod = _elementwise_mul(self.num[:, None, :, None, :], other.num[None, :, None, :, :], self.field)
        return ExactMatrix(self.field, prod.reshape(n1 * n2, c1 * c2, self.field.degree), self.den * other.den)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.num.transpose(1, 0, 2), self.den)

    @property
    def T(self):
        return self.transpose()

    def permute(self, row_perm=None, col_perm=None) -> "ExactMatrix":
        """Entry (i, j) of the result is self[row_perm[i], col_perm[j]]."""
        rows = np.arange(self.rows) if row_perm is None else np.asarray(row_perm, dtype=np.int64)
        cols = np.arange(self.cols) if col_perm is None else np.asarray(col_perm, dtype=np.int64)
        if sorted(rows.tolist()) != list(range(self.rows)) or sorted(cols.tolist()) != list(range(self.cols)):
            raise ShapeError("not a permutation of the index range")
        return self.take(rows, cols)

    def map_coefficients(self, linear_map) -> "ExactMatrix":
        """Apply an integer linear map to every coefficient vector (e.g. Frobenius)."""
        lm = np.asarray(linear_map, dtype=object)
        flat = self.num.reshape(-1, self.field.degree)
        out = int_matmul(flat, lm.T) if flat.size else flat
        return ExactMatrix(self.field, out.reshape(self.num.shape), self.den)

    def in_field(self, field: FieldDescriptor) -> "ExactMatrix":
        """Move a matrix between a prime field and an extension over it."""
        if field == self.field:
            return self
        if not (field.is_finite and self.field.is_finite and field.p == self.field.p):
            raise FieldError(f"cannot move a matrix from {self.field} to {field}")
        if field.degree == 1:
            if (self.num[:, :, 1:] != 0).any():
                raise FieldError(f"entries do not lie in {field}")
            return ExactMatrix(field, self.num[:, :, :1], 1)
        if self.field.degree != 1:
            raise FieldError("only prime-field matrices can be lifted")
        num = _zeros(self.shape + (field.degree,))
        num[:, :, 0] = self.num[:, :, 0]
        return ExactMatrix(field, num, 1)

    def lift(self, field: FieldDescriptor) -> "ExactMatrix":
        """Same matrix viewed over a larger field (cyclotomic tower or prime field to extension)."""
        if field == self.field:
            return self
        if field.is_finite and self.field.is_finite:
            return self.in_field(field)
        lm = np.array(lift_map(self.field, field), dtype=object)
        flat = self.num.reshape(-1, self.field.degree)
        out = int_matmul(flat, lm.T) if flat.size else _zeros((flat.shape[0], field.degree))
        return ExactMatrix(field, out.reshape(self.rows, self.cols, field.degree), self.den)

    def conjugate(self) -> "ExactMatrix":
        """Entrywise zeta -> zeta^-1 over cyclotomic fields; the identity over finite fields."""
        if self.field.is_finite:
            return self
        m = self.field.m
        k = self.field.degree
        table = power_basis(self.field, m)
        lm = np.array([[table[(-t) % m][u] for t in range(k)] for u in range(k)], dtype=object)
        return self.map_coefficients(lm)

    def adjoint(self) -> "ExactMatrix":
        """Conjugate transpose (plain transpose over finite fields)."""
        return self.conjugate().transpose()

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and self.den == other.den
            and bool((self.num == other.num).all())
        )

    __hash__ = None

    def rank(self) -> int:
        return rank(self)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field})"


def block_matrix(blocks) -> ExactMatrix:
    """Assemble a matrix from a 2-D list of blocks with matching shapes."""
    field = blocks[0][0].field
    den = 1
    for row in blocks:
        for b in row:
            den = lcm(den, b.den)
    rows = []
    for row in blocks:
        rows.append(np.concatenate([b.num * (den // b.den) for b in row], axis=1))
    return ExactMatrix(field, np.concatenate(rows, axis=0), den)


def hstack(mats) -> ExactMatrix:
    return block_matrix([list(mats)])


def vstack(mats) -> ExactMatrix:
    return block_matrix([[m] for m in mats])


def kronecker(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a.kron(b)


def mixed_product_check(a, b, c, d) -> bool:
    if a.cols != c.rows or b.cols != d.rows:
        raise ShapeError("factors are not dimension-compatible")
    return (a.kron(b)) @ (c.kron(d)) == (a @ c).kron(b @ d)


def scale_and_permute(m: ExactMatrix, row_scales, col_scales, row_perm=None, col_perm=None) -> ExactMatrix:
    """Entry (i, j) = row_scales[i] * col_scales[j] * m[row_perm[i], col_perm[j]]."""
    for v in list(row_scales) + list(col_scales):
        if m.field.element(v).is_zero():
            raise ValueError("scales must be nonzero")
    return m.permute(row_perm, col_perm).scale_rows(row_scales).scale_cols(col_scales)


# ---------------------------------------------------------------------------
# sparse change sets


@dataclass(frozen=True)
class SparsityReport:
    total_nonzeros: int
    max_per_row: int
    max_per_col: int

    @property
    def regular(self) -> int:
        return max(self.max_per_row, self.max_per_col)


class SparseChanges:
    """Triplet list (row, col, value) with unique positions and nonzero values."""

    __slots__ = ("field", "rows", "cols", "positions", "num", "den")

    def __init__(self, field, rows, cols, positions, num, den=1):
        positions = np.asarray(positions, dtype=np.int64).reshape(-1, 2)
        num = np.asarray(num, dtype=object).reshape(len(positions), field.degree)
        if len(positions):
            if (positions < 0).any() or (positions[:, 0] >= rows).any() or (positions[:, 1] >= cols).any():
                raise ShapeError("change position out of range")
            keys = positions[:, 0] * cols + positions[:, 1]
            order = np.argsort(keys, kind="stable")
            positions, num, keys = positions[order], num[order], keys[order]
            if (np.diff(keys) == 0).any():
                raise ValueError("duplicate change position")
            num, den = _normalize(num, int(den), field)
            if not (num != 0).any(axis=1).all():
                raise ValueError("change values must be nonzero")
        else:
            den = 1
        self.field = field
        self.rows = int(rows)
        self.cols = int(cols)
        self.positions = positions
        self.num = num
        self.den = int(den)

    @classmethod
    def empty(cls, field, rows, cols):
        return cls(field, rows, cols, np.zeros((0, 2), dtype=np.int64), _zeros((0, field.degree)))

    @classmethod
    def from_dense(cls, m: ExactMatrix):
        mask = m.nonzero_mask()
        pos = np.argwhere(mask)
        return cls(m.field, m.rows, m.cols, pos, m.num[mask], m.den)

    @classmethod
    def from_triplets(cls, field, rows, cols, triplets):
        triplets = list(triplets)
        pos = [(int(i), int(j)) for i, j, _ in triplets]
        vals = [field.element(v) for _, _, v in triplets]
        if any(v.is_zero() for v in vals):
            raise ValueError("change values must be nonzero")
        coeffs, den = element_coeffs(field, vals)
        return cls(field, rows, cols, np.array(pos, dtype=np.int64).reshape(-1, 2), coeffs, den)

    def __len__(self):
        return len(self.positions)

    def to_dense(self) -> ExactMatrix:
        num = _zeros((self.rows, self.cols, self.field.degree))
        if len(self.positions):
            num[self.positions[:, 0], self.positions[:, 1]] = self.num
        return ExactMatrix(self.field, num, self.den)

    def triplets(self):
        out = []
        for (i, j), vals in zip(self.positions.tolist(), self.num):
            if self.field.is_finite:
                e = FieldElement._raw(self.field, [int(v) for v in vals])
            else:
                e = FieldElement._raw(self.field, [Fraction(int(v), self.den) for v in vals])
            out.append((i, j, e))
        return out

    def sparsity(self) -> SparsityReport:
        return sparsity(self)

    def kron(self, other: "SparseChanges") -> "SparseChanges":
        """Triplet Kronecker product; positions and values multiply pairwise."""
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")
        rows, cols = self.rows * other.rows, self.cols * other.cols
        if not len(self) or not len(other):
            return SparseChanges.empty(self.field, rows, cols)
        pa, pb = self.positions, other.positions
        pos = np.stack(
            [
                (pa[:, None, 0] * other.rows + pb[None, :, 0]).ravel(),
                (pa[:, None, 1] * other.cols + pb[None, :, 1]).ravel(),
            ],
            axis=1,
        )
        vals = _elementwise_mul(self.num[:, None, :], other.num[None, :, :], self.field)
        return SparseChanges(self.field, rows, cols, pos, vals.reshape(-1, self.field.degree), self.den * other.den)

    def permute(self, row_perm=None, col_perm=None) -> "SparseChanges":
        """Changes for m.permute(row_perm, col_perm): entry (i, j) moves to (inv_r[i], inv_c[j])."""
        pos = self.positions.copy()
        if row_perm is not None:
            inv = np.empty(self.rows, dtype=np.int64)
            inv[np.asarray(row_perm, dtype=np.int64)] = np.arange(self.rows)
            pos[:, 0] = inv[pos[:, 0]]
        if col_perm is not None:
            inv = np.empty(self.cols, dtype=np.int64)
            inv[np.asarray(col_perm, dtype=np.int64)] = np.arange(self.cols)
            pos[:, 1] = inv[pos[:, 1]]
        return SparseChanges(self.field, self.rows, self.cols, pos, self.num, self.den)

    def restrict(self, rows, cols) -> "SparseChanges":
        """Changes for m.take(rows, cols) when rows and cols are injective index lists."""
        rmap = -np.ones(self.rows, dtype=np.int64)
        rmap[np.asarray(rows, dtype=np.int64)] = np.arange(len(rows))
        cmap = -np.ones(self.cols, dtype=np.int64)
        cmap[np.asarray(cols, dtype=np.int64)] = np.arange(len(cols))
        if not len(self):
            return SparseChanges.empty(self.field, len(rows), len(cols))
        r, c = rmap[self.positions[:, 0]], cmap[self.positions[:, 1]]
        keep = (r >= 0) & (c >= 0)
        return SparseChanges(self.field, len(rows), len(cols), np.stack([r[keep], c[keep]], axis=1), self.num[keep], self.den)

    def lift(self, field: FieldDescriptor) -> "SparseChanges":
        if field == self.field:
            return self
        return SparseChanges.from_dense(self.to_dense().lift(field))

    def support(self):
        return {tuple(p) for p in self.positions.tolist()}

    def __eq__(self, other):
        if not isinstance(other, SparseChanges):
            return NotImplemented
        return (
            self.field == other.field
            and (self.rows, self.cols) == (other.rows, other.cols)
            and np.array_equal(self.positions, other.positions)
            and self.den == other.den
            and bool((self.num == other.num).all())
        )

    __hash__ = None

    def __repr__(self):
        return f"SparseChanges({self.rows}x{self.cols}, {len(self)} entries over {self.field})"


def sparsity(e: SparseChanges) -> SparsityReport:
    if not len(e.positions):
        return SparsityReport(0, 0, 0)
    rows = np.bincount(e.positions[:, 0], minlength=e.rows)
    cols = np.bincount(e.positions[:, 1], minlength=e.cols)
    return SparsityReport(len(e.positions), int(rows.max()), int(cols.max()))


def apply_changes(m: ExactMatrix, e: SparseChanges, sign: str = "subtract") -> ExactMatrix:
    if (m.rows, m.cols) != (e.rows, e.cols):
        raise ShapeError("change set and matrix shapes differ")
    if sign == "subtract":
        return m - e.to_dense()
    if sign == "add":
        return m + e.to_dense()
    raise ValueError(f"unknown sign {sign!r}")


# ---------------------------------------------------------------------------
# rank


def _nmod_rank(arr, p) -> int:
    n, c = arr.shape
    if n == 0 or c == 0:
        return 0
    return flint.nmod_mat(n, c, [int(x) % p for x in arr.ravel().tolist()], p).rank()


def regular_representation(m: ExactMatrix):
    """Integer matrix of m as an F_p-linear map, each entry replaced by its multiplication matrix."""
    field = m.field
    k = field.degree
    table = power_basis(field, 2 * k - 1)
    w = np.array([[table[s + t] for t in range(k)] for s in range(k)], dtype=object)  # [s, t, u]
    big = np.tensordot(m.num, w, axes=([2], [0]))  # [i, j, t, u]
    big = big.transpose(0, 3, 1, 2).reshape(m.rows * k, m.cols * k)
    return big % field.p


_SPLIT_PRIMES = {}


def _split_primes(m):
    """Primes p = 1 (mod lcm(m, 2)) below 2**62 with all primitive m-th roots of unity mod p."""
    cache = _SPLIT_PRIMES.setdefault(m, [])
    i = 0
    step = lcm(m, 2)
    cand = ((1 << 62) - 2) // step * step + 1
    if cache:
        cand = cache[-1][0] - step
    ells = sympy.primefactors(m)
    while True:
        if i < len(cache):
            yield cache[i]
            i += 1
            continue
        while not sympy.isprime(cand):
            cand -= step
        p = cand
        cand -= step
        a = 2
        while True:
            rho = pow(a, (p - 1) // m, p)
            if all(pow(rho, m // ell, p) != 1 for ell in ells):
                break
            a += 1
        roots = [pow(rho, k, p) for k in range(1, m + 1) if gcd(k, m) == 1]
        cache.append((p, roots))


def _top_product(sorted_desc, k):
    out = 1
    for x in sorted_desc[:k]:
        out *= x
    return out


def _cyclotomic_rank(m: ExactMatrix) -> int:
    """Exact rank over Q(zeta_m) from ranks under ring maps Z[zeta] -> F_p.

    Each map zeta -> rho (rho a primitive m-th root mod a prime p = 1 mod m)
    can only lower the rank, and it does so only if every maximal nonzero minor
    lies in the prime ideal (p, zeta - rho).  A nonzero (k x k) minor mu has
    |N(mu)| <= H_k^phi with H_k the Hadamard bound built from l1 coefficient
    norms, so once the product of the ideal norms used exceeds that bound, the
    largest rank seen is the true rank.
    """
    n, c = m.shape
    if n == 0 or c == 0 or not (m.num != 0).any():
        return 0
    field = m.field
    phi = field.degree
    if phi == 1:
        # over Q the fraction-free integer rank is exact and faster than the prime loop
        return flint.fmpz_mat(n, c, [int(x) for x in m.num.ravel().tolist()]).rank()
    order = field.m
    l1 = np.abs(m.num).sum(axis=2)
    sq = l1 * l1
    row_sq = sorted((int(x) for x in sq.sum(axis=1).tolist()), reverse=True)
    col_sq = sorted((int(x) for x in sq.sum(axis=0).tolist()), reverse=True)
    limit = min(n, c)
    flat = m.num.reshape(n * c, phi)
    best = 0
    norm_product = 1
    for p, roots in _split_primes(order):
        residues = flint.nmod_mat(n * c, phi, [int(x) % p for x in flat.ravel().tolist()], p)
        vander = flint.nmod_mat(phi, len(roots), [pow(r, t, p) for t in range(phi) for r in roots], p)
        values = [int(x) for x in (residues * vander).entries()]
        width = len(roots)
        for j in range(width):
            col = values[j::width]
            best = max(best, flint.nmod_mat(n, c, col, p).rank())
            norm_product *= p
        if best == limit:
            return best
        k = best + 1
        bound_sq = min(_top_product(row_sq, k), _top_product(col_sq, k))
        lhs = norm_product * norm_product
        if lhs.bit_length() > phi * bound_sq.bit_length() or lhs > bound_sq ** phi:
            return best


def rank(m: ExactMatrix) -> int:
    """Exact rank over the matrix's field."""
    field = m.field
    if field.kind == "prime":
        return _nmod_rank(m.num[:, :, 0], field.p)
    if field.kind == "extension":
        return _nmod_rank(regular_representation(m), field.p) // field.degree
    return _cyclotomic_rank(m)


def elimination_rank(m: ExactMatrix) -> int:
    """Reference rank by textbook Gaussian elimination on field elements.

    Pivots are the first nonzero entry in column order.  Quadratic in the
    number of entries per pivot; meant for small matrices and as an oracle.
    """
    rows = m.to_rows()
    n = len(rows)
    r = 0
    for col in range(m.cols):
        piv = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        pivot_row = [x * inv for x in rows[r]]
        rows[r] = pivot_row
        for i in range(r + 1, n):
            f = rows[i][col]
            if not f.is_zero():
                rows[i] = [a - f * b for a, b in zip(rows[i], pivot_row)]
        r += 1
        if r == n:
            break
    return r


def row_reduce(m: ExactMatrix):
    """Reduced row echelon form and pivot columns."""
    field = m.field
    if field.kind == "prime" and m.rows and m.cols:
        mat = flint.nmod_mat(m.rows, m.cols, [int(x) for x in m.num[:, :, 0].ravel().tolist()], field.p)
        red, r = mat.rref()
        vals = np.array([int(x) for x in red.entries()], dtype=object).reshape(m.rows, m.cols)
        pivots = []
        for i in range(r):
            pivots.append(int(np.flatnonzero(vals[i] != 0)[0]))
        return ExactMatrix(field, vals[:, :, None]), pivots
    rows = m.to_rows()
    n = len(rows)
    r = 0
    pivots = []
    for col in range(m.cols):
        piv = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r:
                f = rows[i][col]
                if not f.is_zero():
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    if n == 0:
        return m, []
    return ExactMatrix.from_rows(field, rows), pivots


def column_basis(m: ExactMatrix):
    """(basis, coords) with m == basis @ coords and basis of full column rank."""
    red, pivots = row_reduce(m)
    basis = m.take(np.arange(m.rows), pivots)
    coords = red.take(np.arange(len(pivots)), np.arange(m.cols))
    return basis, coords


def solve(a: ExactMatrix, b: ExactMatrix, free_values=None):
    """One solution x of a @ x = b (b a column), free variables set from free_values.

    Returns None when the system is inconsistent.
    """
    aug = hstack([a, b])
    red, pivots = row_reduce(aug)
    n = a.cols
    if n in pivots:
        return None
    field = a.field
    x = [field.zero] * n
    free = [j for j in range(n) if j not in pivots]
    if free_values is not None:
        for j in free:
            x[j] = field.element(free_values[j])
    for i, col in enumerate(pivots):
        val = red.entry(i, n)
        for j in free:
            coef = red.entry(i, j)
            if not coef.is_zero():
                val = val - coef * x[j]
        x[col] = val
    return x
