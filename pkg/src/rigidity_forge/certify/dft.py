"""DFT_N for squarefree N = q_1 ... q_l: block structure by unit patterns and the assembled certificate.

For S a set of prime indices, T_S holds the (i, j) with ij a unit mod q_s
exactly for s in S.  Fixing i, j modulo the primes outside S cuts T_S into
copies of one matrix M(S) whose rows and columns are the units mod mult(S).
Through discrete logarithms M(S) is an adjusted circulant over
prod_{s in S} Z_{q_s - 1}, which splits into a small part G_d and a part
G_T built from the frequent prime powers; DFT_{G_T} diagonalizes each
G_T-block and its certificate gives the changes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from ..fields import FieldDescriptor, InvariantViolation, field_with_roots, primitive_root_of_unity, root_power_table
from ..linalg import ExactMatrix, SparseChanges
from ..numtheory import FactorableWitness, factorize, gwh_root_order, prime_powers, primitive_root
from ..structured import AbelianGroupSpec, dft, realize
from .core import Certificate, CertificateError, capped_rank, require_verified
from .product import ProductPlan, productbound_decompose


def _crt(residues, moduli):
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        # solve x + M*k = r (mod m)
        k = ((r - x) * pow(M, -1, m)) % m if m > 1 else 0
        x += M * k
        M *= m
    return x % M


@dataclass
class DftBlockPlan:
    primes: tuple
    k0: int | None = None
    m_threshold: int | None = None
    cutoff: int = 1
    epsilon: Fraction = Fraction(1, 2)
    bucket_base: int = 2
    trivial_blocks: str = "zero"
    gwh_m: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.primes, FactorableWitness):
            self.primes = self.primes.primes
        ps = tuple(sorted(int(q) for q in self.primes))
        if len(set(ps)) != len(ps) or not ps:
            raise CertificateError("primes must be a nonempty list of distinct primes")
        for q in ps:
            if factorize(q) != {q: 1}:
                raise CertificateError(f"{q} is not prime")
        self.primes = ps
        l = len(ps)
        if self.k0 is None:
            self.k0 = l
        if not 0 <= self.k0 <= l:
            raise ValueError(f"k0 must lie in [0, {l}]")
        if self.m_threshold is None:
            self.m_threshold = max(1, (l - self.k0 + 2) // 2)
        if self.trivial_blocks not in ("zero", "full"):
            raise ValueError("trivial_blocks must be 'zero' or 'full'")
        self.epsilon = Fraction(self.epsilon)

    @property
    def N(self) -> int:
        return math.prod(self.primes)

    @property
    def l(self) -> int:
        return len(self.primes)

    def subsets(self):
        for size in range(self.l + 1):
            yield from itertools.combinations(range(self.l), size)

    def mult(self, S) -> int:
        return math.prod(self.primes[s] for s in S)

    def fact(self, S) -> int:
        return math.prod(self.primes[s] - 1 for s in S)

    def chosen_powers(self, S, characteristic=0):
        """Prime powers t exactly dividing q_s - 1 for at least ``cutoff`` of the s in S."""
        count = {}
        for s in S:
            for t in prime_powers(self.primes[s] - 1):
                count[t] = count.get(t, 0) + 1
        return sorted(
            t for t, c in count.items() if c >= self.cutoff and (characteristic == 0 or t % characteristic)
        )


@dataclass
class BlockRecord:
    """One unit pattern S: how its copies of M(S) sit inside DFT_N."""

    S: tuple
    mult: int
    fact: int
    group: tuple  # (q_s - 1 for s in S)
    labels: np.ndarray  # residue mod mult(S) for each element of the group
    copies: list  # (c1, c2) residues mod the product of the other primes
    rows: dict = dc_field(repr=False, default_factory=dict)  # c1 -> row indices per group element
    cols: dict = dc_field(repr=False, default_factory=dict)
    exponents: np.ndarray = dc_field(repr=False, default=None)  # gamma-exponent of h(C) per group element


@dataclass
class DftBlocks:
    plan: DftBlockPlan
    records: dict
    partition_ok: bool
    counts_ok: bool
    circulant_ok: bool


def _group_elements(factors):
    if not factors:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices(factors).reshape(len(factors), -1).T


def _record(plan: DftBlockPlan, S) -> BlockRecord:
    N = plan.N
    mult = plan.mult(S)
    qbar = N // mult
    others = [s for s in range(plan.l) if s not in S]
    factors = [plan.primes[s] - 1 for s in S]
    el = _group_elements(factors)
    gens = [primitive_root(plan.primes[s]) for s in S]
    moduli = [plan.primes[s] for s in S]
    labels = np.array(
        [_crt([pow(g, int(a), q) for g, a, q in zip(gens, row, moduli)], moduli) if S else 0 for row in el],
        dtype=np.int64,
    )
    # copies: per outside prime, residue pairs (x, y) with xy = 0 mod q
    per_prime = []
    for s in others:
        q = plan.primes[s]
        per_prime.append([(x, y) for x in range(q) for y in range(q) if (x * y) % q == 0])
    copies = []
    outside = [plan.primes[s] for s in others]
    for combo in itertools.product(*per_prime):
        c1 = _crt([x for x, _ in combo], outside) if others else 0
        c2 = _crt([y for _, y in combo], outside) if others else 0
        copies.append((c1, c2))
    rec = BlockRecord(tuple(S), mult, plan.fact(S), tuple(factors), labels, copies)
    row_res = (qbar * labels) % mult if mult > 1 else labels * 0
    for c1 in {c for c, _ in copies}:
        rec.rows[c1] = np.array([_crt([c1 % qbar, int(a)], [qbar, mult]) for a in row_res], dtype=np.int64)
    for c2 in {c for _, c in copies}:
        rec.cols[c2] = np.array([_crt([c2 % qbar, int(b)], [qbar, mult]) for b in labels], dtype=np.int64)
    # h(C): theta^(label(C)) with theta = gamma^qbar
    rec.exponents = (qbar * labels) % N
    return rec


def dft_blocks(plan: DftBlockPlan, field: FieldDescriptor | None = None) -> DftBlocks:
    """Cut DFT_N into copies of M(S) and check the structure exactly.

    Checks that the blocks partition [N] x [N] with every block inside its
    T_S, that each S has prod_{s not in S} (2 q_s - 1) copies, and that each
    copy equals M(S) whose entries depend only on the sum of discrete-log
    coordinates.  With a field the entries are compared against DFT_N itself.
    """
    N = plan.N
    owner = -np.ones((N, N), dtype=np.int64)
    records = {}
    partition_ok = counts_ok = circulant_ok = True
    gamma_table = None
    if field is not None:
        gamma = primitive_root_of_unity(field, N)
        gamma_table = np.array(root_power_table(gamma), dtype=object)
        DFT = realize(dft(N, field))
    for code, S in enumerate(plan.subsets()):
        rec = _record(plan, S)
        records[S] = rec
        expected = math.prod(2 * plan.primes[s] - 1 for s in range(plan.l) if s not in S)
        counts_ok &= len(rec.copies) == expected
        for c1, c2 in rec.copies:
            ri, cj = rec.rows[c1], rec.cols[c2]
            sub = owner[np.ix_(ri, cj)]
            if (sub != -1).any():
                partition_ok = False
            owner[np.ix_(ri, cj)] = code
            prod = np.outer(ri, cj) % N
            for s in range(plan.l):
                unit = prod % plan.primes[s] != 0
                if (s in S and not unit.all()) or (s not in S and unit.any()):
                    partition_ok = False
            if field is not None:
                # entries are gamma^(ij) = theta^(ab): the h value at A + B
                block = DFT.take(ri, cj)
                summed = _sum_index(rec.group)
                want = ExactMatrix(field, gamma_table[rec.exponents[summed]])
                if block != want:
                    circulant_ok = False
    partition_ok &= bool((owner >= 0).all())
    return DftBlocks(plan, records, partition_ok, counts_ok, circulant_ok)


def _sum_index(factors):
    """Index of A + B for all pairs; factors equal to 1 (the prime 2) are allowed."""
    el = _group_elements(factors)
    out = np.zeros((len(el), len(el)), dtype=np.int64)
    for k, n in enumerate(factors):
        out = out * n + (el[:, None, k] + el[None, :, k]) % n
    return out


# ---------------------------------------------------------------------------
# the certificate


def _split_coordinates(rec: BlockRecord, plan: DftBlockPlan, chosen):
    """Per group element: index in G_d, index in G_T; plus the sizes and G_T factor list."""
    S = rec.S
    el = _group_elements(list(rec.group))
    T = []
    d = []
    for s in S:
        q1 = plan.primes[s] - 1
        Ts = math.prod(t for t in chosen if q1 % t == 0 and math.gcd(t, q1 // t) == 1)
        T.append(Ts)
        d.append(q1 // Ts)
    gt_factors = [(t, k) for t in chosen for k, s in enumerate(S)
                  if (plan.primes[s] - 1) % t == 0 and math.gcd(t, (plan.primes[s] - 1) // t) == 1]
    d_idx = np.zeros(len(el), dtype=np.int64)
    for k in range(len(S)):
        d_idx = d_idx * d[k] + el[:, k] % d[k]
    t_idx = np.zeros(len(el), dtype=np.int64)
    for t, k in gt_factors:
        t_idx = t_idx * t + el[:, k] % t
    return d_idx, t_idx, d, [t for t, _ in gt_factors]


def _block_changes(rec, plan, field, chosen, gamma_table, trivial):
    """E(S) over the group (fact x fact) plus (r_X, s_X, |G_d|) for the accounting."""
    d_idx, t_idx, d, gt = _split_coordinates(rec, plan, chosen)
    Gd = math.prod(d)
    P = math.prod(gt) if gt else 1
    if gt:
        counts = {}
        for t in gt:
            counts[t] = counts.get(t, 0) + 1
        factors = [(t, counts[t], plan.gwh_m.get(t)) for t in sorted(counts)]
        cert_x = productbound_decompose(
            ProductPlan(factors, epsilon=plan.epsilon, k=plan.bucket_base, trivial=trivial), field
        )
        if cert_x.field != field:
            raise InvariantViolation("DFT_{G_T} certificate left the working field")
        require_verified(cert_x, "DFT_{G_T} certificate")
        X = realize(cert_x.matrix)
        EX = cert_x.changes.to_dense()
        r_x, s_x = cert_x.claimed_rank, cert_x.claimed_regular_sparsity
        neg = AbelianGroupSpec(tuple(gt)).negation()
        tgroup = AbelianGroupSpec(tuple(gt))
    else:
        X = ExactMatrix.identity(field, 1)
        EX = X if trivial == "full" else ExactMatrix.zeros(field, 1, 1)
        r_x, s_x = (0, 1) if trivial == "full" else (1, 0)
        neg = np.zeros(1, dtype=np.int64)
        tgroup = None
    # value table h over (G_d index, G_T index)
    size = len(d_idx)
    h_exp = np.zeros((Gd, P), dtype=np.int64)
    # element C with coordinates (C', y): any group element with those indices
    h_exp[d_idx, t_idx] = rec.exponents
    inv_p = field.element(P).inverse()
    blocks = []
    for cp in range(Gd):
        h = ExactMatrix(field, gamma_table[h_exp[cp]][:, None, :])
        v = X @ h
        Dvec = [v.entry(int(neg[j]), 0) * inv_p for j in range(P)]
        Dm = ExactMatrix.from_vector(field, Dvec)
        if tgroup is not None:
            Mblk = ExactMatrix(field, gamma_table[h_exp[cp][tgroup.sum_table()]])
            if X.scale_cols(Dm) @ X != Mblk:
                raise InvariantViolation("DFT_{G_T} does not diagonalize a block of M(S)")
        blocks.append(EX.scale_cols(Dm) @ EX)
    # assemble E(S) over group indices: (A, B) -> block[(A' + B') mod d][A_T, B_T]
    el = _group_elements(list(rec.group))
    dvec = np.array(d, dtype=np.int64) if d else np.zeros(0, dtype=np.int64)
    A_d = el % dvec if len(d) else np.zeros((size, 0), dtype=np.int64)
    num_den = 1
    for b in blocks:
        num_den = math.lcm(num_den, b.den)
    num = np.zeros((size, size, field.degree), dtype=object)
    for a in range(size):
        sums = (A_d[a][None, :] + A_d) % dvec if len(d) else np.zeros((size, 0), dtype=np.int64)
        cp = np.zeros(size, dtype=np.int64)
        for k in range(len(d)):
            cp = cp * d[k] + sums[:, k]
        for b in range(size):
            blk = blocks[cp[b]]
            num[a, b] = blk.num[t_idx[a], t_idx[b]] * (num_den // blk.den)
    return ExactMatrix(field, num, num_den), r_x, s_x, Gd


def dft_field(plan: DftBlockPlan, field: FieldDescriptor) -> FieldDescriptor:
    char = field.characteristic
    orders = [plan.N]
    for S in plan.subsets():
        if len(S) >= plan.k0:
            orders.extend(gwh_root_order(t) for t in plan.chosen_powers(S, char))
    return field_with_roots(field, orders)


def dft_decompose(plan: DftBlockPlan, field: FieldDescriptor) -> Certificate:
    """Certificate for DFT_N assembled from per-pattern block changes.

    Patterns with |S| >= k0 get E(S) built from a DFT_{G_T} certificate; the
    rank claim charges every row and column divisible by at least
    m_threshold primes, plus a per-copy bound on what remains.
    """
    N = plan.N
    F = dft_field(plan, field)
    if F.is_finite and N % F.p == 0:
        raise CertificateError(f"characteristic {F.p} divides N = {N}")
    blocks = dft_blocks(plan, F)
    if not (blocks.partition_ok and blocks.counts_ok and blocks.circulant_ok):
        raise InvariantViolation("DFT block structure check failed")
    gamma_table = np.array(root_power_table(primitive_root_of_unity(F, N)), dtype=object)
    ndiv = np.array([sum(1 for q in plan.primes if i % q == 0) for i in range(N)])
    removed = ndiv >= plan.m_threshold
    kept = ~removed
    row_load = np.zeros(N, dtype=np.int64)
    col_load = np.zeros(N, dtype=np.int64)
    rank_total = 2 * int(removed.sum())
    pieces = []
    changed_patterns = 0
    for S, rec in blocks.records.items():
        if len(S) >= plan.k0:
            chosen = plan.chosen_powers(S, F.characteristic)
            ES, r_x, s_x, Gd = _block_changes(rec, plan, F, chosen, gamma_table, plan.trivial_blocks)
            per_copy = 2 * Gd * r_x
            load = min(Gd * s_x * s_x, rec.fact)
            changed_patterns += 1
        else:
            ES, per_copy, load = None, None, 0
        for c1, c2 in rec.copies:
            ri, cj = rec.rows[c1], rec.cols[c2]
            kr, kc = int(kept[ri].sum()), int(kept[cj].sum())
            bound = min(kr, kc) if per_copy is None else min(per_copy, kr, kc)
            rank_total += bound
            if ES is not None and not ES.is_zero():
                pieces.append((ri, cj, ES))
                row_load[ri] += load
                col_load[cj] += load
    den = 1
    for _, _, m in pieces:
        den = math.lcm(den, m.den)
    num = np.zeros((N, N, F.degree), dtype=object)
    for ri, cj, m in pieces:
        num[np.ix_(ri, cj)] = m.num * (den // m.den)
    E = SparseChanges.from_dense(ExactMatrix(F, num, den))
    s_claim = int(max(row_load.max(initial=0), col_load.max(initial=0)))
    r_claim = capped_rank(rank_total, (N, N))
    return Certificate(
        dft(N, F), F, E, r_claim, min(s_claim, N),
        {
            "route": "dft_blocks",
            "primes": list(plan.primes),
            "k0": plan.k0,
            "m_threshold": plan.m_threshold,
            "removed": int(removed.sum()),
            "changed_patterns": changed_patterns,
            "uncapped_rank": int(rank_total),
            "degenerate": rank_total >= N,
        },
    )
