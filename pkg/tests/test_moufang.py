import pytest

from localmoufang.action import compose, is_identity
from localmoufang.localring import make_ring
from localmoufang.moufang import (MoufangSeed, SeedError, check_homomorphism, construct,
                                  find_isomorphism, hua_identity_suite, is_local_moufang,
                                  mu_identity_suite, quasi_inverse, quasi_invertible,
                                  quasi_inverse_suite, quotient, special_suite,
                                  sum_formula_suite, twisted_seed, verify_hua_theorem)
from localmoufang.projective import build_MR, reduction_map


def passed(checks):
    return all(c["status"] != "fail" for c in checks)


def test_seed_of_p1_z9(M9):
    assert M9.n == 12
    assert all(len(M9.root_group(x)) == 9 for x in range(M9.n))


def test_field_case_is_ordinary(M5):
    assert all(len(c) == 1 for c in M5.space.classes)
    assert is_local_moufang(M5).ok


def test_seed_rejects_tau_fixing_infinity_class(M9):
    tau = list(range(M9.n))
    with pytest.raises(SeedError) as err:
        construct(MoufangSeed(M9.space, M9.U, tuple(tau), M9.inf))
    assert err.value.axiom == "C2"


def test_mu_of_one(M9):
    mu = M9.mu(M9.point("[1,1]"))
    assert M9.label(mu[M9.point("[1,2]")]) == "[1,4]"
    R = M9.line.R
    for y in R.units:
        assert mu[M9.point(f"[1,{y}]")] == M9.point(f"[1,{R.neg(R.inv(y))}]")
    assert mu == M9.mu_formula(M9.point("[1,1]"))


@pytest.mark.parametrize("fixture", ["M9", "M25"])
def test_axioms(fixture, request):
    M = request.getfixturevalue(fixture)
    verdict = is_local_moufang(M)
    assert verdict.ok, verdict.failure()


def test_twisted_seed_fails_with_witness(M9):
    bad = construct(twisted_seed(M9), check_group=False)
    verdict = is_local_moufang(bad)
    assert not verdict.ok
    assert verdict.failure["witness"] is not None


def test_hua_theorem_counts(M9):
    verdict = verify_hua_theorem(M9)
    assert verdict.ok
    bruhat = next(c for c in verdict.checks if c["name"] == "Bruhat decomposition")
    assert bruhat["witness"] == {"G": 324, "big_cell": 9 * 3 * 9, "small_cell": 9 * 3 * 3, "H": 3}


@pytest.mark.parametrize("fixture", ["M9", "M25"])
def test_identity_suites(fixture, request):
    M = request.getfixturevalue(fixture)
    for suite in (mu_identity_suite, hua_identity_suite, sum_formula_suite, quasi_inverse_suite):
        assert passed(suite(M)), suite.__name__


def test_quasi_inverse_example(M9):
    x, y = M9.point("[1,3]"), M9.point("[1,1]")
    assert quasi_invertible(M9, x, y)
    left, right = quasi_inverse(M9, x, y)
    assert M9.equiv(right, M9.zero)
    assert M9.is_unit(left)


def test_special_suite(M9):
    assert passed(special_suite(M9))
    assert len(M9.units) == 6
    assert all(is_identity(compose(M9.mu(x), M9.mu(x))) for x in M9.units)


def test_quotient_is_ordinary_p1_f3(M9):
    Mbar, proj = quotient(M9)
    assert Mbar.n == 4
    assert find_isomorphism(Mbar, build_MR(make_ring("zmod:3"))) is not None
    assert check_homomorphism(M9, Mbar, proj)[0].ok


def test_identity_is_homomorphism(M9):
    verdict, thetas = check_homomorphism(M9, M9, list(range(M9.n)))
    assert verdict.ok
    assert all(u == v for th in thetas.values() for u, v in th.items())


def test_reduction_is_homomorphism(M9):
    M3 = build_MR(make_ring("zmod:3"))
    assert check_homomorphism(M9, M3, reduction_map(M9, M3))[0].ok


def test_isomorphism_search():
    M9 = build_MR(make_ring("zmod:9"))
    assert find_isomorphism(M9, build_MR(make_ring("zmod:9"))) is not None
    assert find_isomorphism(M9, build_MR(make_ring("gfpoly:3:t:2"))) is None
