import random

import numpy as np
import pytest

from rigidity_forge.certify import (
    CertificateError,
    ProductPlan,
    general_group_fn_decompose,
    gwh_decompose,
    gwh_symmetric_decompose,
    productbound_decompose,
    verify,
)
from rigidity_forge.fields import cyclotomic, field_with_roots, primitive_root_of_unity
from rigidity_forge.structured import rescale_gwh
from rigidity_forge.tuples import all_tuples, build_s_plan, count_perm_s, eval_pf, perm_s_mask


@pytest.mark.parametrize("d,n,m", [(2, 4, 1), (2, 6, 2), (3, 3, 1), (4, 4, 1), (2, 5, 2)])
def test_gwh_certificates_verify(d, n, m):
    cert = gwh_decompose(d, n, m)
    rep = verify(cert)
    assert rep.passed
    plan = build_s_plan(d, n, m)
    assert rep.achieved_rank <= d ** n - count_perm_s(plan)
    assert max(rep.max_per_row, rep.max_per_col) <= plan.t_size


@pytest.mark.parametrize("d,n,m", [(2, 5, 2), (3, 3, 1), (2, 6, 1)])
def test_modified_function_vanishes_on_closure(d, n, m):
    F = field_with_roots(cyclotomic(1), [2 * d if d % 2 == 0 else d])
    plan = build_s_plan(d, n, m)
    _, _, f = rescale_gwh(d, n, F)
    cert = gwh_symmetric_decompose(f, plan, F)
    f_new = cert.provenance["f_prime"]
    om = primitive_root_of_unity(F, d)
    tup = all_tuples(d, n)
    mask = perm_s_mask(plan)
    for k in np.flatnonzero(mask):
        assert eval_pf(f_new, om, tup[k]).is_zero()
    # f - f' is supported on the tuples with enough zeros
    diff = [a - b for a, b in zip(f, f_new)]
    zeros = (tup == 0).sum(axis=1)
    for k, v in enumerate(diff):
        if not v.is_zero():
            assert zeros[k] >= d * m


def test_group_function_certificate():
    rng = random.Random(0)
    d, n = 2, 4
    f = [rng.randint(-2, 2) for _ in range(d ** n)]
    cert = general_group_fn_decompose(f, d, n, 1)
    rep = verify(cert)
    assert rep.passed
    plan = build_s_plan(d, n, 1)
    assert max(rep.max_per_row, rep.max_per_col) <= plan.t_size ** 2


def test_gwh_rejects_bad_plan():
    with pytest.raises((ValueError, CertificateError)):
        gwh_decompose(3, 2, 1)


def test_productbound_two_factors():
    plan = ProductPlan([(2, 2, 1), (3, 3, 1)])
    cert = productbound_decompose(plan, cyclotomic(1))
    assert cert.matrix.kind == "dft_g"
    assert list(cert.matrix.params["group"]) == [2] * 2 + [3] * 3
    assert verify(cert).passed


def test_productbound_carries_small_factors():
    plan = ProductPlan([(5, 1)], trivial="zero")
    cert = productbound_decompose(plan, cyclotomic(1))
    rep = verify(cert)
    assert rep.passed and cert.degenerate


def test_product_plan_validation():
    with pytest.raises(CertificateError):
        ProductPlan([(3, 2, 1)])
    with pytest.raises(ValueError):
        ProductPlan([(2, 4)], epsilon=1)
