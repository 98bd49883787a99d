import math
import random

import pytest

from rigidity_forge.certify import (
    degenerate_reduction,
    product_rank_formula,
    product_sparsity_formula,
    reduction_for_cyclic,
    reduction_for_small_power,
    reduction_product,
)
from rigidity_forge.fields import prime_field
from rigidity_forge.linalg import rank
from rigidity_forge.structured import AbelianGroupSpec


@pytest.mark.parametrize("N,p", [(3, 5), (4, 5), (5, 3), (2, 7)])
def test_cyclic_reductions(N, p):
    red = reduction_for_cyclic(N, prime_field(p))
    assert red.n == N
    assert red.check_identity()
    assert red.claims_hold()


def test_identity_for_random_functions():
    rng = random.Random(0)
    red = reduction_for_cyclic(3, prime_field(5))
    for _ in range(5):
        f = [rng.randrange(5) for _ in range(3)]
        assert red.check_identity(f)


def test_small_power_reduction():
    red = reduction_for_small_power(2, 3, prime_field(3))
    assert red.check_identity() and red.claims_hold()


def test_degenerate_reduction():
    G = AbelianGroupSpec((2, 2))
    red = degenerate_reduction(G, prime_field(3))
    assert red.check_identity()


def test_product_reduction():
    F = prime_field(5)
    a = reduction_for_cyclic(3, F)
    b = reduction_for_cyclic(2, F)
    for l in (1, 2):
        prod = reduction_product([a, b], l)
        assert prod.group.order == 6
        assert prod.check_identity()
        assert max(rank(prod.A), rank(prod.B)) <= prod.provenance["rank_formula"]


def test_formulas_by_hand():
    # one part: 2 sqrt(r n) for l = 1
    assert product_rank_formula([4], [9], 1) == 12
    assert product_rank_formula([1, 1], [4, 4], 1) == math.ceil(2 * 2 * 4 * 2)
    assert product_sparsity_formula([1, 1], [4, 4], 1) == 1
    assert product_sparsity_formula([1, 2], [4, 4], 2) == 2 + 2 * 4 * 2 + 2 * 4 * 1
