"""Parameter sweeps: certify, verify and tabulate achieved (rank, sparsity)."""

from __future__ import annotations

import csv
import io
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .fields import FieldDescriptor, cyclotomic
from .certify.core import verify

HEADER = ["family", "N", "params", "rank", "row_s", "col_s", "field_order", "wall_ms"]
FAMILIES = ("gwh", "dft", "circulant", "abelian")


@dataclass
class SweepRow:
    family: str
    N: int
    params: str
    rank: int
    row_s: int
    col_s: int
    field_order: int
    wall_ms: int

    def as_list(self):
        return [self.family, self.N, self.params, self.rank, self.row_s, self.col_s, self.field_order, self.wall_ms]


def field_order(field: FieldDescriptor) -> int:
    """m for Q(zeta_m), q for F_q."""
    return field.m if field.kind == "cyclotomic" else field.order


def _random_values(n, seed, field):
    rng = random.Random(seed)
    if field.is_finite:
        return [rng.randrange(field.p) for _ in range(n)]
    return [rng.randint(-5, 5) for _ in range(n)]


def build(family: str, value: int, params: dict, field: FieldDescriptor | None):
    """Certificate for one sweep point; ``value`` is n for gwh/abelian and N otherwise."""
    from .certify.abelian import abelian_decompose
    from .certify.circulant import circulant_decompose, dft_any_decompose
    from .certify.dft import DftBlockPlan, dft_decompose
    from .certify.gwh import gwh_decompose
    from .numtheory import factorize

    seed = int(params.get("seed", 0))
    if family == "gwh":
        d, m = int(params.get("d", 2)), int(params.get("m", 1))
        return gwh_decompose(d, value, m, field or cyclotomic(d))
    if family == "dft":
        F = field or cyclotomic(1)
        if all(e == 1 for e in factorize(value).values()) and value > 1:
            return dft_decompose(DftBlockPlan(tuple(sorted(factorize(value)))), F)
        return dft_any_decompose(value, F)
    if family == "circulant":
        F = field or cyclotomic(1)
        return circulant_decompose(_random_values(value, seed + value, F), F)
    if family == "abelian":
        d = int(params.get("d", 2))
        F = field or cyclotomic(1)
        return abelian_decompose([d] * value, _random_values(d ** value, seed + value, F), F)
    raise ValueError(f"unknown family {family!r}")


def _job(args):
    family, value, params, field = args
    t0 = time.perf_counter()
    cert = build(family, value, params, field)
    rep = verify(cert)
    ms = int(round((time.perf_counter() - t0) * 1000))
    label = ";".join(f"{k}={params[k]}" for k in sorted(params))
    return SweepRow(family, cert.shape[0], label, rep.achieved_rank, rep.max_per_row, rep.max_per_col,
                    field_order(cert.field), ms)


def worker_count(requested=None) -> int:
    cap = os.environ.get("RIGIDITY_FORGE_THREADS")
    n = requested or os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def run_sweep(family: str, values, params=None, field=None, workers=None):
    """Rows in parameter order; independent points may run in separate processes."""
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")
    params = dict(params or {})
    jobs = [(family, int(v), params, field) for v in values]
    n = min(worker_count(workers), len(jobs)) if jobs else 1
    if n <= 1:
        return [_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_job, jobs))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(r.as_list())
    return buf.getvalue()


def parse_range(text: str):
    """'a:b' or 'a:b:step' (inclusive) or a comma list."""
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        a, b, step = parts
        if step < 1:
            raise ValueError("step must be positive")
        return list(range(a, b + 1, step))
    return [int(x) for x in text.split(",") if x.strip()]
