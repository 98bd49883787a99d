"""Circulants over finite abelian groups: character certificates over Q(zeta) and reductions over F_p."""

import random

from rigidity_forge.certify import (
    abelian_decompose,
    abelian_plan,
    reduction_for_cyclic,
    reduction_product,
    verify,
)
from rigidity_forge.fields import cyclotomic, prime_field
from rigidity_forge.structured import AbelianGroupSpec

rng = random.Random(1)

# %% how the invariant factors get grouped
print(abelian_plan([2, 2, 2, 2, 3, 30]))

# %% Z_2^4 over Q(i), Z_3 x Z_5 over Q
for factors, F in (((2, 2, 2, 2), cyclotomic(4)), ((3, 5), cyclotomic(1))):
    G = AbelianGroupSpec(factors)
    f = [rng.randint(-2, 2) for _ in range(G.order)]
    rep = verify(abelian_decompose(list(factors), f, F))
    print(factors, rep.passed, rep.achieved_rank, max(rep.max_per_row, rep.max_per_col))

# %% over F_p the certificate is built from reductions M(e_g) = A Y_g + Z_g B + E_g
red = reduction_for_cyclic(3, prime_field(5))
print("Z_3 over F_5: r", red.r, "s", red.s, "identity", red.check_identity())
prod = reduction_product([red, red], 1)
print("Z_3 x Z_3: r", prod.r, "s", prod.s, "identity", prod.check_identity(),
      "formula", prod.provenance["rank_formula"])

rep = verify(abelian_decompose([2, 4], [rng.randrange(7) for _ in range(8)], prime_field(7)))
print("Z_2 x Z_4 over F_7:", rep.passed)
