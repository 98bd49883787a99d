"""Circulant, Toeplitz and Hankel certificates via an embedding into a larger squarefree circulant."""

import random

from rigidity_forge.certify import choose_ambient, circulant_decompose, dft_any_decompose, verify
from rigidity_forge.fields import cyclotomic, prime_field

rng = random.Random(0)

# %% a 6 x 6 circulant over Q(zeta_3) sitting inside a 15 x 15 one
F = cyclotomic(3)
f = [F.element([rng.randint(-4, 4), rng.randint(-4, 4)]) for _ in range(6)]
cert = circulant_decompose(f, F, ambient=15)
print(cert.provenance["route"], "ambient", cert.provenance["ambient"], "field", cert.field)
print(verify(cert).lines())

# %% ambient chosen automatically: smallest DFT field among squarefree candidates
print(choose_ambient(20, field=cyclotomic(1)))

# %% Toeplitz and Hankel take 2N - 1 values
t = [rng.randint(-3, 3) for _ in range(9)]
for kind in ("toeplitz", "hankel"):
    rep = verify(circulant_decompose(t, cyclotomic(1), kind=kind))
    print(kind, rep.passed, rep.achieved_rank)

# %% DFT of a size that is not squarefree goes through a Hankel matrix
print(verify(dft_any_decompose(8, cyclotomic(1))).lines())

# %% and over a finite field
print(verify(circulant_decompose([1, 2, 3, 4], prime_field(7), ambient=15)).passed)
