"""Hadamard-type certificates: symmetric functions on Z_d^n, H_{d,n}, and general f on Z_d^n."""

from __future__ import annotations

import numpy as np

from ..fields import FieldDescriptor, InvariantViolation, field_with_roots, primitive_root_of_unity, root_power_table
from ..linalg import ExactMatrix, SparseChanges, solve
from ..numtheory import gwh_root_order
from ..structured import adjusted_g_circulant, gwh, gwh_group, realize, rank_via_roots, rescale_gwh
from ..tuples import SPlan, all_tuples, build_s_plan, classes, perm_class
from .core import Certificate, CertificateError, diagonalization_transfer, scale_certificate


def _class_ids(d, n):
    """Class index of every tuple (sorted order of classes) and the class list."""
    cls = classes(d, n)
    lookup = {c: i for i, c in enumerate(cls)}
    tup = np.sort(all_tuples(d, n), axis=1)
    ids = np.array([lookup[tuple(int(x) for x in row)] for row in tup], dtype=np.int64)
    return ids, cls


def class_character_sums(d, n, points, field, omega=None):
    """Matrix [point, class] of sum_{J in class} omega^(J . point)."""
    omega = omega or primitive_root_of_unity(field, d)
    ids, cls = _class_ids(d, n)
    tup = all_tuples(d, n)
    pts = np.asarray(points, dtype=np.int64).reshape(len(points), n)
    exps = (pts @ tup.T) % d  # [point, tuple]
    counts = np.zeros((len(pts), len(cls), d), dtype=np.int64)
    for k in range(len(pts)):
        np.add.at(counts[k], (ids, exps[k]), 1)
    table = np.array(root_power_table(omega), dtype=object)  # d x degree
    num = np.tensordot(counts.astype(object), table, axes=([2], [0]))
    return ExactMatrix(field, num)


def _symmetric_values(f, d, n, field):
    """Value per class from a full value list (tuple order), a dict on tuples, or a dict on classes."""
    ids, cls = _class_ids(d, n)
    size = d ** n
    if isinstance(f, dict):
        full = [field.zero] * size
        tup = all_tuples(d, n)
        for k, row in enumerate(tup):
            key = tuple(int(x) for x in row)
            rep = tuple(sorted(key))
            v = f.get(key, f.get(rep, 0))
            full[k] = field.element(v)
    else:
        full = [field.element(v) for v in f]
        if len(full) != size:
            raise ValueError(f"expected {size} values, got {len(full)}")
    per_class = [None] * len(cls)
    for k, c in enumerate(ids):
        if per_class[c] is None:
            per_class[c] = full[k]
        elif per_class[c] != full[k]:
            raise CertificateError("f is not symmetric under permutations of the coordinates")
    return per_class, ids, cls


def gwh_symmetric_decompose(f, plan: SPlan, field: FieldDescriptor) -> Certificate:
    """Change a symmetric f only on classes with >= dm zeros so its transform vanishes on perm(S).

    Unknowns are the values on those classes, one equation per class of S;
    free unknowns keep their original values.  The certificate is for the
    adjusted matrix M(f) over Z_d^n.
    """
    d, n = plan.d, plan.n
    omega = primitive_root_of_unity(field, d)
    values, ids, cls = _symmetric_values(f, d, n, field)
    t_idx = [i for i, c in enumerate(cls) if c.count(0) >= d * plan.m]
    other = [i for i in range(len(cls)) if i not in set(t_idx)]
    s_reps = sorted({perm_class(s)[0] for s in plan.S})
    coef = class_character_sums(d, n, s_reps, field, omega)
    A = coef.take(np.arange(len(s_reps)), t_idx)
    rhs = ExactMatrix.zeros(field, len(s_reps), 1)
    if other:
        fo = ExactMatrix.from_vector(field, [values[i] for i in other])
        rhs = -(coef.take(np.arange(len(s_reps)), other) @ fo)
    sol = solve(A, rhs, free_values=[values[i] for i in t_idx])
    if sol is None:
        raise InvariantViolation("the vanishing system on the S classes is inconsistent")
    new_values = list(values)
    for i, v in zip(t_idx, sol):
        new_values[i] = v
    f_old = [values[c] for c in ids]
    f_new = [new_values[c] for c in ids]
    group = gwh_group(d, n)
    # the transform of f' must vanish on every point of perm(S)
    check = class_character_sums(d, n, s_reps, field, omega) @ ExactMatrix.from_vector(field, new_values)
    if not check.is_zero():
        raise InvariantViolation("f' does not vanish on S")
    desc = adjusted_g_circulant(group, f_old, field)
    M_new = realize(adjusted_g_circulant(group, f_new, field))
    E = SparseChanges.from_dense(realize(desc) - M_new)
    r = rank_via_roots(f_new, group, field)
    changed = sum(perm_class(cls[i])[1] for i in t_idx if new_values[i] != values[i])
    return Certificate(
        desc, field, E, r, plan.t_size,
        {"route": "gwh_symmetric", "d": d, "n": n, "m": plan.m, "changed_tuples": changed,
         "f_prime": f_new, "degenerate": r >= d ** n},
    )


def _plan(d, n, m):
    if isinstance(m, SPlan):
        return m
    m = int(m)
    if d * m > n:
        raise CertificateError(f"no plan for H_{{{d},{n}}} with m = {m}: d*m exceeds n")
    return build_s_plan(d, n, m)


def gwh_field(d: int, field: FieldDescriptor) -> FieldDescriptor:
    """Field hosting the rescaling root for H_{d,n}."""
    return field_with_roots(field, [gwh_root_order(d)])


def gwh_decompose(d: int, n: int, m, field: FieldDescriptor | None = None) -> Certificate:
    """Certificate for H_{d,n}: rescale to M(zeta^(sum x^2)) and apply the symmetric construction."""
    from ..fields import cyclotomic

    field = field or cyclotomic(d)
    plan = _plan(d, n, m)
    field = gwh_field(d, field)
    rows, cols, f_sym = rescale_gwh(d, n, field)
    cert_m = gwh_symmetric_decompose(f_sym, plan, field)
    inv_rows = [x.inverse() for x in rows]
    inv_cols = [x.inverse() for x in cols]
    out = scale_certificate(cert_m, inv_rows, inv_cols, gwh(d, n, field))
    out.provenance = dict(cert_m.provenance, route="gwh")
    out.provenance.pop("f_prime", None)
    return out


def general_group_fn_decompose(f, d: int, n: int, m, field: FieldDescriptor | None = None) -> Certificate:
    """Certificate for the adjusted M(f) over Z_d^n via H M H diagonal and the H_{d,n} certificate."""
    from ..fields import cyclotomic

    base = field or cyclotomic(d)
    cert_h = gwh_decompose(d, n, m, base)
    F = cert_h.field
    group = gwh_group(d, n)
    values = [F.element(base.element(v)) for v in f]
    H = realize(cert_h.matrix)
    v = H @ ExactMatrix.from_vector(F, values)
    neg = group.negation()
    inv = F.element(group.order).inverse()
    D = [v.entry(int(neg[j]), 0) * inv for j in range(group.order)]
    out = diagonalization_transfer(cert_h, D, "ADA", adjusted_g_circulant(group, values, F))
    out.provenance.update(route="group_function", d=d, n=n, m=cert_h.provenance.get("m"))
    return out
