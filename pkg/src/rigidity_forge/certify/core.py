"""Certificates, the verifier, and the generic transfers between certificates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..fields import FieldDescriptor, FieldError, InvariantViolation
from ..linalg import ExactMatrix, ShapeError, SparseChanges, apply_changes, rank, sparsity
from ..structured import (
    AbelianGroupSpec,
    MatrixDescriptor,
    dft_g,
    explicit,
    kronecker_descriptor,
    move_descriptor,
    realize,
    realize_shape,
)


class CertificateError(ValueError):
    """A construction was asked to do something its inputs do not allow."""


@dataclass
class Certificate:
    """Claim: rank(M - E) <= claimed_rank, with E at most claimed_regular_sparsity per row and column."""

    matrix: MatrixDescriptor
    field: FieldDescriptor
    changes: SparseChanges
    claimed_rank: int
    claimed_regular_sparsity: int
    provenance: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.matrix.field != self.field:
            raise FieldError("descriptor and certificate fields differ")
        if self.changes.field != self.field:
            raise FieldError("change set and certificate fields differ")
        if realize_shape(self.matrix) != (self.changes.rows, self.changes.cols):
            raise ShapeError("change set shape does not match the matrix")
        self.claimed_rank = int(self.claimed_rank)
        self.claimed_regular_sparsity = int(self.claimed_regular_sparsity)

    @property
    def shape(self):
        return self.changes.rows, self.changes.cols

    @property
    def degenerate(self) -> bool:
        """True when the claim is no better than leaving M alone or replacing it outright."""
        n = min(self.shape)
        return self.claimed_rank >= n or self.claimed_regular_sparsity >= max(self.shape) or bool(
            self.provenance.get("degenerate")
        )

    def realize(self) -> ExactMatrix:
        return realize(self.matrix)

    def residual(self) -> ExactMatrix:
        return apply_changes(self.realize(), self.changes)


@dataclass(frozen=True)
class VerificationReport:
    shape_ok: bool
    rank_ok: bool
    sparsity_ok: bool
    achieved_rank: int
    claimed_rank: int
    max_per_row: int
    max_per_col: int
    claimed_regular_sparsity: int
    total_changes: int

    @property
    def passed(self) -> bool:
        return self.shape_ok and self.rank_ok and self.sparsity_ok

    def lines(self):
        tag = {True: "pass", False: "FAIL"}
        return [
            f"shape: {tag[self.shape_ok]}",
            f"rank: {tag[self.rank_ok]} (achieved {self.achieved_rank}, claimed <= {self.claimed_rank})",
            f"sparsity: {tag[self.sparsity_ok]} (rows {self.max_per_row}, cols {self.max_per_col}, "
            f"claimed <= {self.claimed_regular_sparsity})",
        ]


def verify(cert: Certificate, matrix: ExactMatrix | None = None) -> VerificationReport:
    """Rebuild M (or take the supplied matrix) and check both claims exactly."""
    M = realize(cert.matrix) if matrix is None else matrix
    sp = sparsity(cert.changes)
    shape_ok = M.shape == cert.shape and M.field == cert.field
    achieved = rank(apply_changes(M, cert.changes)) if shape_ok else -1
    return VerificationReport(
        shape_ok=shape_ok,
        rank_ok=shape_ok and achieved <= cert.claimed_rank,
        sparsity_ok=sp.max_per_row <= cert.claimed_regular_sparsity and sp.max_per_col <= cert.claimed_regular_sparsity,
        achieved_rank=achieved,
        claimed_rank=cert.claimed_rank,
        max_per_row=sp.max_per_row,
        max_per_col=sp.max_per_col,
        claimed_regular_sparsity=cert.claimed_regular_sparsity,
        total_changes=sp.total_nonzeros,
    )


def require_verified(cert: Certificate, what="input certificate"):
    rep = verify(cert)
    if not rep.passed:
        raise CertificateError(f"{what} does not verify: " + "; ".join(rep.lines()))
    return rep


def tightened(cert: Certificate) -> Certificate:
    """Copy whose claims are the verified achieved values."""
    rep = verify(cert)
    if not rep.passed:
        raise CertificateError("cannot tighten a failing certificate")
    prov = dict(cert.provenance, tightened_from=(cert.claimed_rank, cert.claimed_regular_sparsity))
    return Certificate(cert.matrix, cert.field, cert.changes, rep.achieved_rank, max(rep.max_per_row, rep.max_per_col), prov)


def capped_rank(r, shape):
    return min(int(r), min(shape))


def trivial_certificate(desc: MatrixDescriptor, mode: str = "zero", **provenance) -> Certificate:
    """E = 0 with r = min dimension ('zero'), or E = M with r = 0 ('full')."""
    M = realize(desc)
    if mode == "zero":
        return Certificate(desc, desc.field, SparseChanges.empty(desc.field, *M.shape), min(M.shape), 0,
                           {"route": "trivial", "mode": "zero", "degenerate": True, **provenance})
    if mode == "full":
        E = SparseChanges.from_dense(M)
        sp = sparsity(E)
        return Certificate(desc, desc.field, E, 0, max(sp.max_per_row, sp.max_per_col),
                           {"route": "trivial", "mode": "full", "degenerate": True, **provenance})
    raise ValueError(f"unknown trivial mode {mode!r}")


def lift_certificate(cert: Certificate, field: FieldDescriptor) -> Certificate:
    """The same certificate over a larger cyclotomic field (or prime field to extension)."""
    if field == cert.field:
        return cert
    return Certificate(
        move_descriptor(cert.matrix, field),
        field,
        cert.changes.lift(field),
        cert.claimed_rank,
        cert.claimed_regular_sparsity,
        dict(cert.provenance, lifted_from=str(cert.field)),
    )


# ---------------------------------------------------------------------------
# permutations and restrictions


def permute_certificate(cert: Certificate, row_perm, col_perm, target: MatrixDescriptor | None = None) -> Certificate:
    """Certificate for M.permute(row_perm, col_perm); ranks and sparsities are unchanged."""
    M = realize(cert.matrix).permute(row_perm, col_perm)
    if target is None:
        target = explicit(M)
    elif realize(target) != M:
        raise InvariantViolation("target descriptor is not the permuted matrix")
    return Certificate(
        target, cert.field, cert.changes.permute(row_perm, col_perm), cert.claimed_rank, cert.claimed_regular_sparsity,
        dict(cert.provenance, permuted=True),
    )


def restrict_certificate(cert: Certificate, rows, cols, target: MatrixDescriptor | None = None) -> Certificate:
    """Certificate for a submatrix; restriction can only lower rank and sparsity."""
    M = realize(cert.matrix).take(rows, cols)
    if target is None:
        target = explicit(M)
    elif realize(target) != M:
        raise InvariantViolation("target descriptor is not the submatrix")
    return Certificate(
        target, cert.field, cert.changes.restrict(rows, cols), capped_rank(cert.claimed_rank, M.shape),
        min(cert.claimed_regular_sparsity, max(M.shape)), dict(cert.provenance, restricted_to=M.shape),
    )


def scale_certificate(cert: Certificate, row_scales, col_scales, target: MatrixDescriptor | None = None) -> Certificate:
    """Certificate for diag(row_scales) M diag(col_scales) with nonzero scales."""
    field = cert.field
    if any(field.element(v).is_zero() for v in list(row_scales) + list(col_scales)):
        raise ValueError("scales must be nonzero")
    M = realize(cert.matrix).scale_rows(row_scales).scale_cols(col_scales)
    if target is None:
        target = explicit(M)
    elif realize(target) != M:
        raise InvariantViolation("target descriptor is not the rescaled matrix")
    E = SparseChanges.from_dense(cert.changes.to_dense().scale_rows(row_scales).scale_cols(col_scales))
    return Certificate(target, field, E, cert.claimed_rank, cert.claimed_regular_sparsity, dict(cert.provenance, rescaled=True))


def group_reorder_permutation(blocks, order):
    """Index map for Kronecker factors.

    ``blocks`` are factor sizes in the current order and ``order[k]`` is the
    position (in the current order) of the factor that should come k-th.
    Returns perm with (A_order[0] x A_order[1] x ...)[i, j] = current[perm[i], perm[j]].
    """
    blocks = [int(b) for b in blocks]
    new_sizes = [blocks[o] for o in order]
    coords = np.indices(new_sizes).reshape(len(blocks), -1).T  # coordinates in the new order
    cur = np.zeros_like(coords)
    for k, o in enumerate(order):
        cur[:, o] = coords[:, k]
    idx = np.zeros(len(coords), dtype=np.int64)
    for i, b in enumerate(blocks):
        idx = idx * b + cur[:, i]
    return idx


# ---------------------------------------------------------------------------
# transfers


def diagonalization_transfer(cert: Certificate, D, side: str = "A*DA", target: MatrixDescriptor | None = None,
                             check: bool = True) -> Certificate:
    """Certificate for B = A^* D A (or A D A) from one for A, with D diagonal.

    E_B = E^* D E (or E D E); B - E_B splits into two terms of rank <= r each,
    so the claim is rank 2r with sparsity s^2.  Over finite fields ^* is the
    plain transpose.
    """
    if side not in ("A*DA", "ADA"):
        raise ValueError("side must be 'A*DA' or 'ADA'")
    if check:
        require_verified(cert)
    field = cert.field
    A = realize(cert.matrix)
    d = D if isinstance(D, ExactMatrix) else ExactMatrix.from_vector(field, D)
    if d.shape != (A.rows, 1):
        raise ShapeError("diagonal length does not match the matrix")
    E = cert.changes.to_dense()
    left_A, left_E = (A.adjoint(), E.adjoint()) if side == "A*DA" else (A, E)
    B = left_A.scale_cols(d) @ A
    if target is None:
        target = explicit(B)
    elif realize(target) != B:
        raise InvariantViolation("target descriptor does not equal the transformed matrix")
    EB = SparseChanges.from_dense(left_E.scale_cols(d) @ E)
    return Certificate(
        target, field, EB, capped_rank(2 * cert.claimed_rank, B.shape), cert.claimed_regular_sparsity ** 2,
        {"route": "diagonalization", "side": side, "inner": cert.provenance.get("route"),
         "degenerate": bool(cert.provenance.get("degenerate"))},
    )


def character_factors(desc: MatrixDescriptor):
    """Invariant factors if desc is a group character table, else None."""
    if desc.kind == "gwh":
        return [desc.params["d"]] * desc.params["n"]
    if desc.kind == "dft":
        return [desc.params["N"]]
    if desc.kind == "dft_g":
        return list(desc.params["group"])
    return None


def kronecker_transfer(a: Certificate, b: Certificate) -> Certificate:
    """A (x) B - E_A (x) E_B = (A - E_A) (x) B + E_A (x) (B - E_B)."""
    if a.field != b.field:
        raise FieldError(f"certificates live over {a.field} and {b.field}")
    fa, fb = character_factors(a.matrix), character_factors(b.matrix)
    if fa is not None and fb is not None:
        desc = dft_g(fa + fb, a.field)
    else:
        parts = []
        for c in (a, b):
            parts.extend(c.matrix.params["factors"] if c.matrix.kind == "kronecker" else [c.matrix])
        desc = kronecker_descriptor(parts)
    dim_a, dim_b = min(a.shape), min(b.shape)
    r = a.claimed_rank * dim_b + b.claimed_rank * dim_a
    shape = (a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return Certificate(
        desc, a.field, a.changes.kron(b.changes), capped_rank(r, shape),
        a.claimed_regular_sparsity * b.claimed_regular_sparsity,
        {"route": "kronecker", "degenerate": bool(a.provenance.get("degenerate") and b.provenance.get("degenerate"))},
    )


@dataclass
class BinomialSplit:
    low_rank: ExactMatrix
    sparse: SparseChanges
    rank_bound: int
    sparsity_bound: int
    l: int


def binomial_split(parts, l: int) -> BinomialSplit:
    """Split (x)_i (A_i + E_i) into N1 (terms with >= l low-rank factors) and N2 (the rest).

    ``parts`` are (A_i, E_i, r_i, s_i) with dense A_i, E_i.  N1 is built in the
    grouped form: for each l-subset S0 the term has A_i on S0, E_i below
    max(S0) off S0, and the full M_i above max(S0).  Each grouped term has
    rank at most prod_{S0} r_i prod_{others} dim_i.
    """
    parts = list(parts)
    b = len(parts)
    if not 1 <= l <= b:
        raise ValueError(f"need 1 <= l <= {b}")
    field = parts[0][0].field
    mats = [(A, E, A + E) for A, E, _, _ in parts]
    dims = [min(A.shape) for A, _, _, _ in parts]
    ranks = [int(r) for _, _, r, _ in parts]
    sps = [int(s) for _, _, _, s in parts]
    widths = [max(A.shape) for A, _, _, _ in parts]

    def kron_all(ms):
        out = ms[0]
        for m in ms[1:]:
            out = out.kron(m)
        return out

    rows = math.prod(A.rows for A, _, _, _ in parts)
    cols = math.prod(A.cols for A, _, _, _ in parts)
    N1 = ExactMatrix.zeros(field, rows, cols)
    rank_bound = 0
    for S0 in itertools.combinations(range(b), l):
        top = max(S0)
        factors = []
        for i in range(b):
            A, E, M = mats[i]
            factors.append(A if i in S0 else (E if i < top else M))
        N1 = N1 + kron_all(factors)
        rank_bound += math.prod(ranks[i] for i in S0) * math.prod(dims[i] for i in range(b) if i not in S0)
    N2 = ExactMatrix.zeros(field, rows, cols)
    sparsity_bound = 0
    for size in range(l):
        for S in itertools.combinations(range(b), size):
            N2 = N2 + kron_all([mats[i][0] if i in S else mats[i][1] for i in range(b)])
            sparsity_bound += math.prod(widths[i] for i in S) * math.prod(sps[i] for i in range(b) if i not in S)
    return BinomialSplit(N1, SparseChanges.from_dense(N2), rank_bound, sparsity_bound, l)


def binomial_certificate(certs, l: int, desc: MatrixDescriptor | None = None) -> Certificate:
    """Certificate for the Kronecker product of the certified matrices via binomial_split."""
    certs = list(certs)
    if len(certs) == 1 and l == 1:
        return certs[0]
    parts = []
    for c in certs:
        M = realize(c.matrix)
        E = c.changes.to_dense()
        parts.append((M - E, E, c.claimed_rank, c.claimed_regular_sparsity))
    split = binomial_split(parts, l)
    if desc is None:
        factors = [character_factors(c.matrix) for c in certs]
        if all(f is not None for f in factors):
            desc = dft_g([x for f in factors for x in f], certs[0].field)
        else:
            desc = kronecker_descriptor([c.matrix for c in certs])
    shape = (split.low_rank.rows, split.low_rank.cols)
    return Certificate(
        desc, certs[0].field, split.sparse, capped_rank(split.rank_bound, shape),
        min(split.sparsity_bound, max(shape)),
        {"route": "binomial", "l": l, "parts": len(certs),
         "degenerate": all(bool(c.provenance.get("degenerate")) for c in certs)},
    )


def reorder_character_certificate(cert: Certificate, blocks, order, factor_blocks) -> Certificate:
    """Reorder the Kronecker blocks of a dft_g certificate.

    ``blocks`` are the sizes of the current blocks, ``factor_blocks`` the lists
    of invariant factors making up each block, and ``order`` the block order
    wanted (positions in the current order).
    """
    if list(order) == list(range(len(blocks))):
        return cert
    perm = group_reorder_permutation(blocks, order)
    target = dft_g([x for o in order for x in factor_blocks[o]], cert.field)
    return permute_certificate(cert, perm, perm, target)


def as_group(g) -> AbelianGroupSpec:
    return g if isinstance(g, AbelianGroupSpec) else AbelianGroupSpec(tuple(g))
