"""Acceptance criteria 1-11, one test each; every test records a PASS/FAIL line with its time limit.

Run directly (python tests/test_acceptance.py) to get the lines without pytest.
"""

from __future__ import annotations

import json
import math
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import LINES
from oracles import discrete_log_oracle, pi_a_oracle, rank_mod_p, rank_rational

from rigidity_forge import io as cio
from rigidity_forge.certify import (
    Certificate,
    circulant_decompose,
    conjugate_descent,
    dft_blocks,
    DftBlockPlan,
    diagonalization_transfer,
    frobenius_matrix,
    gwh_finite_field,
    gwh_symmetric_decompose,
    kronecker_transfer,
    reduction_for_cyclic,
    reduction_product,
    verify,
)
from rigidity_forge.fields import (
    cyclotomic,
    field_with_roots,
    prime_field,
    primitive_root_of_unity,
)
from rigidity_forge.linalg import ExactMatrix, SparseChanges, elimination_rank, rank
from rigidity_forge.numtheory import (
    ConfigFamily,
    GoodPrimeConfig,
    SearchExhausted,
    good_primes,
    pi_a,
    primitive_root,
    scales_search,
)
from rigidity_forge.structured import (
    adjusted_g_circulant,
    circulant,
    explicit,
    gwh,
    gwh_group,
    realize,
    rescale_gwh,
)
from rigidity_forge.tuples import all_tuples, build_s_plan, count_perm_s, eval_pf, perm_s_mask

# value of pi_1(50, 5) from the enumeration oracle, fixed before the build:
# primes p <= 50 with p - 1 5-smooth are 2 3 5 7 11 13 17 19 31 37 41
PI_1_50_5 = 11

LIMITS = {1: 30, 2: 60, 3: 120, 4: 60, 5: 60, 6: 30, 7: 60, 8: 30, 9: 60, 10: 30, 11: 10}


@contextmanager
def criterion(n, title):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        within = dt < LIMITS[n]
        status = "PASS" if ok and within else "FAIL"
        why = "" if ok else " (assertion failed)"
        line = f"criterion {n:2d} {status}: {title} [{dt:.1f}s, limit {LIMITS[n]}s]{why}"
        LINES.append(line)
        print(line)
    assert within, f"criterion {n} exceeded {LIMITS[n]}s ({dt:.1f}s)"


def _cli(*args, cwd=None):
    env = dict(os.environ)
    src = str(Path(__file__).resolve().parent.parent / "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run([sys.executable, "-m", "rigidity_forge", *args], capture_output=True, text=True, cwd=cwd,
                          env=env)


def test_criterion_01_gwh_orthogonality():
    with criterion(1, "H_{d,n} H^* = d^n I for d <= 5, d^n <= 256"):
        for d in range(2, 6):
            n = 1
            while d ** n <= 256:
                F = cyclotomic(d)
                H = realize(gwh(d, n, F))
                N = d ** n
                assert H @ H.adjoint() == ExactMatrix.identity(F, N) * N, (d, n)
                n += 1


def _fft_root_count(f, d, n):
    """#J with P_f(omega^J) = 0 via a floating DFT; nonzero values here have modulus >= 1."""
    vals = np.fft.fftn(np.asarray(f, dtype=float).reshape((d,) * n))
    return int((np.abs(vals) < 1e-6).sum())


def test_criterion_02_rank_formula():
    rng = random.Random(2)
    with criterion(2, "rank M(f) = d^n - #roots of P_f, 50 random f per (d, n)"):
        for d, nmax in ((2, 8), (3, 4)):
            F = cyclotomic(d)
            omega = primitive_root_of_unity(F, d)
            for n in range(1, nmax + 1):
                G = gwh_group(d, n)
                tup = [tuple(int(x) for x in t) for t in all_tuples(d, n)]
                for trial in range(50):
                    # sparse f makes roots of P_f common enough to matter
                    f = [rng.choice([0, 0, 1, -1, 2]) for _ in range(d ** n)]
                    if trial % 5 == 0:
                        f = [1 if t.count(0) >= n - 1 else 0 for t in tup]
                    roots = _fft_root_count(f, d, n)
                    if trial < 2 and d ** n <= 81:
                        assert roots == sum(1 for J in tup if eval_pf(f, omega, J).is_zero())
                    M = realize(adjusted_g_circulant(G, f, F))
                    assert rank(M) == d ** n - roots, (d, n, trial)
                    if d ** n <= 27 and trial < 5:
                        assert elimination_rank(M) == d ** n - roots


def test_criterion_03_gwh_decomposition():
    with criterion(3, "GWH (2,8,3) over Q: 182 vanishing points, s <= 37, r <= 74; (3,4,1) over Q(zeta_3): r <= 45, s <= 9"):
        for d, n, m, base, r_max, s_max, points in ((2, 8, 3, cyclotomic(1), 74, 37, 182), (3, 4, 1, cyclotomic(3), 45, 9, 36)):
            plan = build_s_plan(d, n, m)
            assert count_perm_s(plan) == points
            F = field_with_roots(base, [2 * d if d % 2 == 0 else d])
            _, _, f_sym = rescale_gwh(d, n, F)
            cert = gwh_symmetric_decompose(f_sym, plan, F)
            f_new = cert.provenance["f_prime"]
            omega = primitive_root_of_unity(F, d)
            mask = perm_s_mask(plan)
            tup = all_tuples(d, n)
            assert int(mask.sum()) == points
            for k in np.flatnonzero(mask):
                assert eval_pf(f_new, omega, tup[k]).is_zero()
            rep = verify(cert)
            assert rep.passed
            assert rep.achieved_rank <= r_max
            assert max(rep.max_per_row, rep.max_per_col) <= s_max
            # the same bounds for H_{d,n} itself
            from rigidity_forge.certify import gwh_decompose

            h = gwh_decompose(d, n, m, base)
            rep = verify(h)
            assert rep.passed and rep.achieved_rank <= r_max and max(rep.max_per_row, rep.max_per_col) <= s_max


def _random_low_rank_plus_sparse(F, n, rng):
    r = rng.randint(0, max(1, n // 3))
    s = rng.randint(0, 2)

    def el():
        return F.element(rng.randint(-3, 3) if not F.is_finite else rng.randrange(F.p))

    U = ExactMatrix.from_rows(F, [[el() for _ in range(max(r, 1))] for _ in range(n)])
    V = ExactMatrix.from_rows(F, [[el() for _ in range(n)] for _ in range(max(r, 1))])
    L = U @ V if r else ExactMatrix.zeros(F, n, n)
    trip = {}
    for i in range(n):
        for j in rng.sample(range(n), s):
            # at most s per column too: shift pattern
            trip[(i, (j + i) % n)] = el()
    trip = {k: v for k, v in trip.items() if not v.is_zero()}
    mask_cols = {}
    keep = {}
    for (i, j), v in sorted(trip.items()):
        if mask_cols.get(j, 0) < s:
            keep[(i, j)] = v
            mask_cols[j] = mask_cols.get(j, 0) + 1
    E = SparseChanges.from_triplets(F, n, n, [(i, j, v) for (i, j), v in keep.items()])
    A = L + E.to_dense()
    return A, E


def test_criterion_04_diagonalization_transfer():
    rng = random.Random(4)
    with criterion(4, "100 random (A, E, D): rank(B - E*DE) <= 2 rank(A - E), sparsity <= s^2"):
        failures = 0
        for trial in range(100):
            F = cyclotomic(1) if trial % 2 == 0 else prime_field(7)
            n = rng.randint(2, 12)
            A, E = _random_low_rank_plus_sparse(F, n, rng)
            r = rank(A - E.to_dense())
            sp = E.sparsity()
            s = max(sp.max_per_row, sp.max_per_col)
            cert = Certificate(explicit(A), F, E, r, s)
            D = [F.element(rng.randint(-4, 4) if not F.is_finite else rng.randrange(7)) for _ in range(n)]
            out = diagonalization_transfer(cert, D, "A*DA")
            B = A.transpose().scale_cols(D) @ A
            EB = out.changes.to_dense()
            assert EB == E.to_dense().transpose().scale_cols(D) @ E.to_dense()
            entries = [[x for x in row] for row in (B - EB).num[:, :, 0].tolist()]
            if F.is_finite:
                achieved = rank_mod_p(entries, 7)
            else:
                achieved = rank_rational([[Fraction(int(x), (B - EB).den) for x in row] for row in entries])
            spB = out.changes.sparsity()
            if achieved > 2 * r or max(spB.max_per_row, spB.max_per_col) > s * s or not verify(out).passed:
                failures += 1
        assert failures == 0


def test_criterion_05_kronecker_transfer():
    rng = random.Random(5)
    with criterion(5, "50 random certificate pairs: rank(A(x)B - E_A(x)E_B) <= r_A dim B + r_B dim A"):
        for trial in range(50):
            F = cyclotomic(1) if trial % 2 else prime_field(5)
            certs = []
            for _ in range(2):
                n = rng.randint(2, 6)
                A, E = _random_low_rank_plus_sparse(F, n, rng)
                r = rank(A - E.to_dense())
                sp = E.sparsity()
                certs.append(Certificate(explicit(A), F, E, r, max(sp.max_per_row, sp.max_per_col)))
            a, b = certs
            out = kronecker_transfer(a, b)
            bound = a.claimed_rank * b.shape[0] + b.claimed_rank * a.shape[0]
            M = realize(a.matrix).kron(realize(b.matrix))
            R = M - a.changes.to_dense().kron(b.changes.to_dense())
            assert rank(R) <= min(bound, M.rows)
            assert verify(out).passed
            sp = out.changes.sparsity()
            assert max(sp.max_per_row, sp.max_per_col) <= a.claimed_regular_sparsity * b.claimed_regular_sparsity


def test_criterion_06_dft15_blocks():
    with criterion(6, "DFT_15: T_S partition, copy counts prod(2q-1), M({1,2}) adjusted Z_2 x Z_4-circulant"):
        plan = DftBlockPlan((3, 5))
        F = field_with_roots(cyclotomic(1), [15])
        blocks = dft_blocks(plan, F)
        assert blocks.partition_ok and blocks.counts_ok and blocks.circulant_ok
        expected = {(): 5 * 9, (0,): 9, (1,): 5, (0, 1): 1}
        for S, count in expected.items():
            assert len(blocks.records[S].copies) == count
        # independent check of the partition: every (i, j) lands in exactly one block
        seen = np.zeros((15, 15), dtype=int)
        for S, rec in blocks.records.items():
            for c1, c2 in rec.copies:
                seen[np.ix_(rec.rows[c1], rec.cols[c2])] += 1
                for i in rec.rows[c1]:
                    for j in rec.cols[c2]:
                        units = tuple(s for s, q in enumerate((3, 5)) if (i * j) % q)
                        assert units == S
        assert (seen == 1).all()
        # M({1,2}) through discrete logs: entry at (A, B) depends only on A + B in Z_2 x Z_4
        rec = blocks.records[(0, 1)]
        assert rec.group == (2, 4)
        g3, g5 = primitive_root(3), primitive_root(5)
        omega = primitive_root_of_unity(F, 15).element
        c1, c2 = rec.copies[0]
        by_sum = {}
        for a, (x1, x2) in enumerate(np.ndindex(2, 4)):
            for b, (y1, y2) in enumerate(np.ndindex(2, 4)):
                i, j = int(rec.rows[c1][a]), int(rec.cols[c2][b])
                assert discrete_log_oracle(g3, j % 3, 3) == y1 and discrete_log_oracle(g5, j % 5, 5) == y2
                value = omega ** (i * j % 15)
                key = ((x1 + y1) % 2, (x2 + y2) % 4)
                assert by_sum.setdefault(key, value) == value


def test_criterion_07_circulant_end_to_end(tmp_path):
    rng = random.Random(7)
    with criterion(7, "random 6x6 circulant over Q(zeta_3), ambient N0 = 15, CLI verify exits 0"):
        F = cyclotomic(3)
        f = [F.element([rng.randint(-4, 4), rng.randint(-4, 4)]) for _ in range(6)]
        cert = circulant_decompose(f, F, ambient=15)
        assert cert.provenance["ambient"] == 15
        rep = verify(cert)
        assert rep.passed
        M = realize(cert.matrix)
        assert M == realize(circulant([cert.field.element(v) for v in f], cert.field))
        path = tmp_path / "circ.json"
        cio.save(cert, path)
        proc = _cli("verify", str(path))
        assert proc.returncode == 0, proc.stdout + proc.stderr


def test_criterion_08_finite_fields():
    with criterion(8, "H_{3,3} over F_7 without extension; descent of a 3x3 F_5 circulant via F_25"):
        F7 = prime_field(7)
        cert = gwh_finite_field(3, 3, F7, 1)
        assert cert.field == F7
        assert verify(cert).passed
        F5 = prime_field(5)
        base = circulant_decompose([1, 2, 3], F5, ambient=6, dft_options={"trivial_blocks": "full"})
        assert base.field.p == 5 and base.field.degree == 2
        # a nontrivial extension certificate as well: M - E equals a rank one matrix over F_25
        F25 = base.field
        M = realize(base.matrix)
        u = ExactMatrix.from_vector(F25, [F25.gen, F25.one, F25.gen + 1])
        v = ExactMatrix.from_vector(F25, [F25.one, F25.gen * 2, F25.gen])
        E = SparseChanges.from_dense(M - u @ v.transpose())
        rank_one = Certificate(base.matrix, F25, E, 1, 3)
        for c in (base, rank_one):
            assert verify(c).passed
            down = conjugate_descent(c)
            assert down.field == F5
            E2 = down.changes.to_dense().in_field(F25)
            assert frobenius_matrix(E2) == E2
            resid = realize(down.matrix).in_field(F25) - E2
            assert rank(resid) <= 2 * c.claimed_rank
            assert verify(down).passed


def test_criterion_09_reducibility():
    with criterion(9, "Z_3 over F_5 reduction identity; Z_3 x Z_3 product (l=1) identity and rank <= formula"):
        F5 = prime_field(5)
        red = reduction_for_cyclic(3, F5)
        assert red.check_identity()
        prod = reduction_product([red, red], 1)
        assert prod.group.order == 9
        assert prod.check_identity()
        formula = prod.provenance["rank_formula"]
        assert rank(prod.A) <= formula and rank(prod.B) <= formula
        assert prod.support_sparsity() <= max(prod.provenance["sparsity_formula"], prod.s)


def test_criterion_10_number_theory():
    with criterion(10, "pi_1(50,5) = 11, good primes in [10,100] with max_pp 10, scales_search on 20 K"):
        assert pi_a_oracle(1, 50, 5) == PI_1_50_5
        assert pi_a(1, 50, 5) == PI_1_50_5
        good = good_primes(GoodPrimeConfig(10, 100, 10))
        assert 17 not in good and 41 in good
        family = ConfigFamily()
        for K in range(20, 420, 20):
            try:
                w = scales_search(K, family)
            except SearchExhausted as exc:
                assert exc.diagnosis
                continue
            assert K < w.N < K * math.log(K) ** 2
            assert math.prod(w.primes) == w.N


def test_criterion_11_negative(tmp_path):
    with criterion(11, "tampered rank, tampered sparsity and truncated file give exit 1, 1, 2"):
        from rigidity_forge.certify import gwh_decompose

        cert = gwh_decompose(2, 4, 1)
        good = tmp_path / "good.json"
        cio.save(cert, good)
        assert _cli("verify", str(good)).returncode == 0
        obj = json.loads(good.read_text())
        obj["claimed_rank"] = str(verify(cert).achieved_rank - 1)
        bad_rank = tmp_path / "rank.json"
        bad_rank.write_text(json.dumps(obj))
        obj = json.loads(good.read_text())
        rep = verify(cert)
        obj["claimed_regular_sparsity"] = str(max(rep.max_per_row, rep.max_per_col) - 1)
        bad_sp = tmp_path / "sparsity.json"
        bad_sp.write_text(json.dumps(obj))
        trunc = tmp_path / "trunc.json"
        trunc.write_bytes(good.read_bytes()[: len(good.read_bytes()) // 2])
        assert _cli("verify", str(bad_rank)).returncode == 1
        assert _cli("verify", str(bad_sp)).returncode == 1
        assert _cli("verify", str(trunc)).returncode == 2


if __name__ == "__main__":
    import tempfile

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            if "tmp_path" in t.__code__.co_varnames[: t.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    t(Path(d))
            else:
                t()
        except AssertionError:
            pass
