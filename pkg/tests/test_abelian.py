import random

import pytest

from rigidity_forge.certify import abelian_decompose, abelian_plan, character_certificate, verify
from rigidity_forge.fields import cyclotomic, prime_field
from rigidity_forge.structured import AbelianGroupSpec, g_circulant, realize


def test_plan_groups_factors():
    small, large, carried = abelian_plan([2, 2, 3, 7, 30])
    assert small == {2: [0, 1], 3: [2]}
    positions = sorted(i for b in large for i in b) + sorted(carried)
    assert sorted(positions) == [3, 4]


@pytest.mark.parametrize("factors", [(2, 2, 2, 2), (3, 5), (2, 3)])
def test_character_certificates(factors):
    cert = character_certificate(list(factors), cyclotomic(1))
    assert verify(cert).passed
    assert cert.shape[0] == AbelianGroupSpec(factors).order


@pytest.mark.parametrize("factors,F", [((2, 2, 2, 2), cyclotomic(4)), ((3, 5), cyclotomic(1)), ((2, 4), prime_field(7)),
                                       ((6, 2), prime_field(7)), ((3, 3), prime_field(5))])
def test_abelian_circulants(factors, F):
    rng = random.Random(sum(factors))
    G = AbelianGroupSpec(factors)
    f = [rng.randrange(5) for _ in range(G.order)]
    cert = abelian_decompose(list(factors), f, F)
    assert verify(cert).passed
    H = realize(cert.matrix)
    assert H.shape == (G.order, G.order)
    # the certified matrix is the plain G-circulant f(x - y)
    assert H == realize(g_circulant(G, [cert.field.element(F.element(v)) for v in f], cert.field))
