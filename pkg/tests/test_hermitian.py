import pytest

from localmoufang.forms import QuadraticForm
from localmoufang.hermitian import (FormRing, LambdaQuadraticModule, PreconditionError,
                                    build_hermitian, build_orthogonal, is_abelian_U,
                                    make_form_ring, mu_action_check)
from localmoufang.localring import make_ring
from localmoufang.moufang import find_isomorphism, is_local_moufang
from localmoufang.jordan import build_MV, make_pair


def passed(checks):
    return all(c["status"] != "fail" for c in checks)


@pytest.fixture(scope="module")
def unital():
    FR = make_form_ring("gf:9:frob", "min")
    return build_hermitian(FR, LambdaQuadraticModule.parse(FR, "", 1))


@pytest.fixture(scope="module")
def O9():
    R = make_ring("zmod:9")
    return build_orthogonal(R, QuadraticForm.parse(R, "x1^2+x2^2"))


def test_unital_size(unital):
    assert unital.n == 28
    assert len(unital.space.classes) == 28
    assert len(unital.herm.first_points()) == 27


def test_unital_axioms_and_mu(unital):
    assert passed(unital.precondition_checks)
    assert is_local_moufang(unital).ok
    checks = mu_action_check(unital)
    assert all(c["status"] == "pass" for c in checks)
    assert not is_abelian_U(unital)


def test_mu_swaps_base_points(unital):
    for x in unital.units:
        mu = unital.mu(x)
        assert mu[unital.zero] == unital.inf and mu[unital.inf] == unital.zero


def test_form_parameter_bounds():
    FR = make_form_ring("gf:9:frob", "min")
    assert set(FR.lam_min) <= set(FR.lam) <= set(FR.lam_max)
    assert passed(FR.checks())


def test_orthogonal_z9(O9):
    assert O9.n == 90
    assert is_local_moufang(O9).ok


def test_orthogonal_f5_rank_one():
    R = make_ring("zmod:5")
    M = build_orthogonal(R, QuadraticForm.parse(R, "x1^2"))
    assert M.n == 6
    assert all(len(c) == 1 for c in M.space.classes)


def test_isotropic_form_rejected():
    R = make_ring("zmod:5")
    with pytest.raises(PreconditionError) as err:
        build_orthogonal(R, QuadraticForm.parse(R, "x1^2+x2^2"))
    assert err.value.condition == "anisotropic"
    assert err.value.witness == "(2,1)"


def test_trivial_involution_matches_orthogonal():
    R = make_ring("zmod:9")
    FR = FormRing(R, [0], 1)
    H = build_hermitian(FR, LambdaQuadraticModule.parse(FR, "", 1))
    O = build_orthogonal(R, QuadraticForm.parse(R, "x1^2"))
    assert H.n == O.n == 12
    assert find_isomorphism(H, O) is not None


def test_jordan_pair_of_form_matches_orthogonal(O9):
    M = build_MV(make_pair("qform:zmod:9:x1^2+x2^2"))
    assert find_isomorphism(M, O9) is not None
