import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rigidity_forge.certify import (
    Certificate,
    CertificateError,
    binomial_split,
    diagonalization_transfer,
    gwh_decompose,
    kronecker_transfer,
    lift_certificate,
    permute_certificate,
    require_verified,
    restrict_certificate,
    scale_certificate,
    tightened,
    trivial_certificate,
    verify,
)
from rigidity_forge.fields import cyclotomic, finite_field, prime_field
from rigidity_forge.linalg import ExactMatrix, SparseChanges, rank
from rigidity_forge.structured import circulant, explicit, gwh, realize


def random_cert(F, n, rng, r=None, s=None):
    """Low rank plus a permutation-pattern sparse part, with exact claims."""
    r = rng.randint(0, n // 2) if r is None else r
    s = rng.randint(0, 2) if s is None else s

    def el():
        if F.is_finite:
            return F.element([rng.randrange(F.p) for _ in range(F.degree)])
        return F.element([rng.randint(-3, 3) for _ in range(F.degree)])

    L = ExactMatrix.zeros(F, n, n)
    if r:
        U = ExactMatrix.from_rows(F, [[el() for _ in range(r)] for _ in range(n)])
        V = ExactMatrix.from_rows(F, [[el() for _ in range(n)] for _ in range(r)])
        L = U @ V
    trip = []
    for k in range(s):
        shift = rng.randrange(n)
        trip += [(i, (i + shift) % n, el()) for i in range(n)]
    dedup = {}
    for i, j, v in trip:
        dedup[(i, j)] = v
    E = SparseChanges.from_triplets(F, n, n, [(i, j, v) for (i, j), v in dedup.items() if not v.is_zero()])
    M = L + E.to_dense()
    return Certificate(explicit(M), F, E, rank(L), s, {"route": "random"})


FIELDS = [cyclotomic(1), cyclotomic(3), prime_field(7), finite_field(3, 2)]


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_random_certificates_verify(F):
    rng = random.Random(1)
    for _ in range(10):
        c = random_cert(F, rng.randint(2, 8), rng)
        assert verify(c).passed


def test_verify_rejects_false_claims():
    rng = random.Random(2)
    F = cyclotomic(1)
    c = random_cert(F, 6, rng, r=2, s=1)
    rep = verify(c)
    assert rep.passed
    low = Certificate(c.matrix, F, c.changes, rep.achieved_rank - 1, c.claimed_regular_sparsity)
    assert not verify(low).passed and not verify(low).rank_ok
    sp = max(rep.max_per_row, rep.max_per_col)
    if sp:
        tight = Certificate(c.matrix, F, c.changes, c.claimed_rank, sp - 1)
        assert not verify(tight).sparsity_ok
    with pytest.raises(CertificateError):
        require_verified(low)


def test_tightened_matches_achieved():
    rng = random.Random(3)
    c = random_cert(prime_field(5), 7, rng, r=1, s=2)
    loose = Certificate(c.matrix, c.field, c.changes, 6, 7)
    t = tightened(loose)
    rep = verify(c)
    assert t.claimed_rank == rep.achieved_rank
    assert t.claimed_regular_sparsity == max(rep.max_per_row, rep.max_per_col)


@pytest.mark.parametrize("mode", ["zero", "full"])
def test_trivial_certificates(mode):
    F = cyclotomic(4)
    c = trivial_certificate(gwh(2, 3, F), mode)
    assert verify(c).passed and c.degenerate


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.sampled_from(FIELDS))
def test_transfers_preserve_validity(seed, F):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    c = random_cert(F, n, rng)
    perm_r, perm_c = list(range(n)), list(range(n))
    rng.shuffle(perm_r)
    rng.shuffle(perm_c)
    assert verify(permute_certificate(c, perm_r, perm_c)).passed
    k = rng.randint(1, n)
    rows = sorted(rng.sample(range(n), k))
    cols = sorted(rng.sample(range(n), k))
    assert verify(restrict_certificate(c, np.array(rows), np.array(cols))).passed

    def unit():
        while True:
            v = F.element([rng.randint(0, 4) for _ in range(F.degree)])
            if not v.is_zero():
                return v

    sc = scale_certificate(c, [unit() for _ in range(n)], [unit() for _ in range(n)])
    assert verify(sc).passed


def test_lift_certificate():
    rng = random.Random(4)
    c = random_cert(cyclotomic(3), 5, rng, r=1, s=1)
    up = lift_certificate(c, cyclotomic(12))
    assert up.field == cyclotomic(12) and verify(up).passed
    d = random_cert(prime_field(5), 5, rng, r=1, s=1)
    assert verify(lift_certificate(d, finite_field(5, 2))).passed


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.sampled_from(["A*DA", "ADA"]), st.sampled_from(FIELDS))
def test_diagonalization_bounds(seed, side, F):
    rng = random.Random(seed)
    c = random_cert(F, rng.randint(2, 7), rng)
    D = [F.element(rng.randint(-3, 3)) for _ in range(c.shape[0])]
    out = diagonalization_transfer(c, D, side)
    rep = verify(out)
    assert rep.passed
    assert rep.achieved_rank <= 2 * c.claimed_rank
    assert max(rep.max_per_row, rep.max_per_col) <= c.claimed_regular_sparsity ** 2


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_kronecker_bounds(seed):
    rng = random.Random(seed)
    F = prime_field(11)
    a = random_cert(F, rng.randint(2, 5), rng)
    b = random_cert(F, rng.randint(2, 5), rng)
    out = kronecker_transfer(a, b)
    rep = verify(out)
    assert rep.passed
    assert rep.achieved_rank <= a.claimed_rank * b.shape[0] + b.claimed_rank * a.shape[0]


def test_kronecker_of_gwh_is_character_table():
    F = cyclotomic(4)
    a = gwh_decompose(2, 4, 1, F)
    out = kronecker_transfer(a, a)
    assert out.matrix.kind == "dft_g" and list(out.matrix.params["group"]) == [2] * 8
    assert verify(out).passed


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_binomial_split(seed, b):
    rng = random.Random(seed)
    F = prime_field(7)
    parts = []
    for _ in range(b):
        c = random_cert(F, rng.randint(2, 3), rng)
        M = realize(c.matrix)
        E = c.changes.to_dense()
        parts.append((M - E, E, c.claimed_rank, c.claimed_regular_sparsity))
    l = rng.randint(1, b)
    split = binomial_split(parts, l)
    total = parts[0][0] + parts[0][1]
    for A, E, _, _ in parts[1:]:
        total = total.kron(A + E)
    assert split.low_rank + split.sparse.to_dense() == total
    assert rank(split.low_rank) <= split.rank_bound
    sp = split.sparse.sparsity()
    assert max(sp.max_per_row, sp.max_per_col) <= split.sparsity_bound


def test_certificate_rejects_mismatches():
    F, G = cyclotomic(1), prime_field(5)
    desc = circulant([1, 2, 3], F)
    with pytest.raises(Exception):
        Certificate(desc, F, SparseChanges.empty(F, 3, 4), 3, 0)
    with pytest.raises(Exception):
        Certificate(desc, F, SparseChanges.empty(G, 3, 3), 3, 0)
