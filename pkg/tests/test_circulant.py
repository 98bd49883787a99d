import random

import pytest

from rigidity_forge.certify import CertificateError, choose_ambient, circulant_decompose, dft_any_decompose, verify
from rigidity_forge.fields import cyclotomic, prime_field
from rigidity_forge.numtheory import ConfigFamily
from rigidity_forge.structured import adjusted_circulant, circulant, hankel, realize, toeplitz


@pytest.mark.parametrize("kind,length", [("circulant", 5), ("adjusted_circulant", 5), ("toeplitz", 9), ("hankel", 9)])
def test_kinds_over_q(kind, length):
    rng = random.Random(length)
    F = cyclotomic(1)
    vals = [rng.randint(-3, 3) for _ in range(length)]
    cert = circulant_decompose(vals, F, kind=kind)
    assert verify(cert).passed
    build = {"circulant": circulant, "adjusted_circulant": adjusted_circulant, "toeplitz": toeplitz, "hankel": hankel}[kind]
    assert realize(cert.matrix) == realize(build([cert.field.element(v) for v in vals], cert.field))


def test_finite_field_circulant():
    F = prime_field(7)
    cert = circulant_decompose([1, 2, 3, 4], F, ambient=15)
    assert cert.field.p == 7
    assert verify(cert).passed


def test_ambient_validation():
    F = cyclotomic(1)
    with pytest.raises(CertificateError):
        circulant_decompose([1, 2, 3], F, ambient=5)
    with pytest.raises(CertificateError):
        circulant_decompose([1, 2, 3], F, ambient=12)
    with pytest.raises(CertificateError):
        circulant_decompose([1, 2, 3], prime_field(3), ambient=15)


def test_choose_ambient():
    N0, primes, how = choose_ambient(10)
    assert N0 > 10 and how == "smallest_squarefree"
    N0, primes, how = choose_ambient(10, 7, field=prime_field(7))
    assert N0 > 10 and N0 % 7 and how == "smallest_field"
    N0, primes, how = choose_ambient(40, 0, family=ConfigFamily())
    assert N0 > 40


@pytest.mark.parametrize("N,F", [(4, cyclotomic(1)), (6, cyclotomic(1)), (5, prime_field(11))])
def test_dft_any_size(N, F):
    cert = dft_any_decompose(N, F)
    assert verify(cert).passed
    assert cert.shape == (N, N)
