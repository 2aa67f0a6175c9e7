import pytest

from localmoufang.action import closure
from localmoufang.localring import make_ring
from localmoufang.projective import (RequirementError, build_MR, mu_closed_form_suite,
                                     reconstruct_ring, ring_iso_check, verify_star)


def passed(checks):
    return all(c["status"] != "fail" for c in checks)


def test_p1_z9_group(M9):
    assert M9.n == 12
    assert len(closure(M9.gens_U + M9.gens_U0, M9.n)) == 324


def test_mu_closed_form(M9, M25):
    assert passed(mu_closed_form_suite(M9))
    assert passed(mu_closed_form_suite(M25))


def test_mu_matrix(M9):
    R = M9.line.R
    for r in R.units:
        x = M9.point(f"[1,{r}]")
        assert M9.mu(x) == M9.line.act((0, R.neg(r), R.inv(r), 0))


@pytest.mark.parametrize("desc,unit", [("zmod:9", "[1,1]"), ("zmod:25", "[1,2]")])
def test_reconstruction(desc, unit):
    R = make_ring(desc)
    M = build_MR(R)
    R2, points, checks = reconstruct_ring(M, M.point(unit))
    assert passed(checks)
    assert ring_iso_check(R2, R) is not None
    assert points[1] == M.point(unit)


def test_reconstruction_requires_two_invertible():
    M = build_MR(make_ring("zmod:4"))
    with pytest.raises(RequirementError) as err:
        reconstruct_ring(M)
    assert err.value.requirement == "R4"


@pytest.mark.parametrize("desc", ["zmod:9", "zmod:5", "zmod:27"])
def test_star_condition(desc):
    assert passed(verify_star(build_MR(make_ring(desc))))


def test_ring_isomorphism_search():
    Z9 = make_ring("zmod:9")
    assert ring_iso_check(Z9, make_ring("gfpoly:3:t:2")) is None
    assert ring_iso_check(Z9, Z9) == list(Z9.elements)
