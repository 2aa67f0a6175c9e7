import numpy as np
import pytest

from localmoufang.action import CapExceeded
from localmoufang.jordan import (build_MV, jp_axioms, jp_basic_suite,
                                 jp_inverse, locality, make_pair, mv_suite, pair_isomorphism,
                                 quasi_inv, reconstruct_jordan, ring_pair, roundtrip,
                                 verify_extra)
from localmoufang.localring import make_ring
from localmoufang.moufang import find_isomorphism, is_local_moufang
from localmoufang.projective import build_MR


def passed(checks):
    return all(c["status"] != "fail" for c in checks)


@pytest.fixture(scope="module")
def V25():
    return make_pair("ring:zmod:25")


def test_quadratic_operator(V25):
    assert V25.Q[0][2, 3] == 12


def test_axioms_and_locality(V25):
    assert passed(jp_axioms(V25))
    assert passed(locality(V25))
    assert passed(jp_basic_suite(V25))


def test_radical(V25):
    for s in (0, 1):
        assert sorted(np.flatnonzero(V25.radical(s)).tolist()) == [0, 5, 10, 15, 20]


def test_division_pair():
    V = make_pair("ring:zmod:5")
    assert V.invertible(0).sum() == 4 and V.radical(0).sum() == 1
    assert jp_inverse(V, 0) is None


def test_quasi_inverse(V25):
    assert quasi_inv(V25, 2, 1) == 23


def test_projective_space_sizes(V25):
    M = build_MV(V25)
    assert M.n == 30
    assert len(M.space.classes) == 6
    assert is_local_moufang(M).ok
    assert passed(mv_suite(M))


def test_division_pair_gives_projective_line():
    M = build_MV(make_pair("ring:zmod:5"))
    assert M.n == 6
    assert find_isomorphism(M, build_MR(make_ring("zmod:5"))) is not None


def test_roundtrip(V25):
    assert passed(roundtrip(V25))
    assert passed(verify_extra(build_MV(V25)))


def test_projective_line_gives_ring_pair(M25):
    V, rp, checks = reconstruct_jordan(M25)
    assert passed(checks)
    assert pair_isomorphism(V, ring_pair(make_ring("zmod:25"))) is not None
    assert passed(verify_extra(M25))


def test_quadratic_form_pair():
    V = make_pair("qform:zmod:5:x1^2+2x2^2")
    assert passed(jp_axioms(V)) and passed(locality(V))


def test_split_form_is_not_local():
    assert not passed(locality(make_pair("qform:zmod:5:x1*x2")))


def test_pair_cap():
    with pytest.raises(CapExceeded):
        make_pair("qform:zmod:25:x1^2+2x2^2")
