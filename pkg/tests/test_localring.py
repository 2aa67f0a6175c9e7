import pytest

from localmoufang.localring import DescriptorError, NotLocalError, make_ring, ring_ops


def statuses(checks):
    return {c["name"]: c["status"] for c in checks}


def test_zmod9_units_and_ideal():
    R = make_ring("zmod:9")
    assert sorted(R.units) == [1, 2, 4, 5, 7, 8]
    assert sorted(R.ideal) == [0, 3, 6]


def test_zmod5_is_a_field():
    R = make_ring("zmod:5")
    assert sorted(R.ideal) == [0]


def test_inverse_and_units_in_zmod9():
    R = make_ring("zmod:9")
    assert R.inv(2) == 5
    assert not R.is_unit(3)


def test_residue_in_zmod25():
    assert make_ring("zmod:25").residue(7) == 2


def test_gf9_frobenius_is_involutive_local():
    R = make_ring("gf:9:frob")
    assert R.n == 9 and sorted(R.ideal) == [0]
    assert all(R.star(R.star(a)) == a for a in R.elements)
    assert any(R.star(a) != a for a in R.elements)
    assert all(s != "fail" for s in statuses(ring_ops(R)).values())


@pytest.mark.parametrize("desc,order", [("zmod:3^2", 9), ("gfpoly:5:t:2", 25),
                                        ("gfpoly:3:t^2+1:2", 81), ("gf:9:trunc=2:inv=frob", 81)])
def test_descriptors(desc, order):
    R = make_ring(desc)
    assert R.n == order
    assert all(c["status"] != "fail" for c in ring_ops(R, limit=1 << 16))


@pytest.mark.parametrize("desc", ["bogus", "zmod:x", "gfpoly:4:t:2"])
def test_bad_descriptors(desc):
    with pytest.raises((DescriptorError, NotLocalError)):
        make_ring(desc)


def test_non_local_modulus_rejected():
    with pytest.raises((DescriptorError, NotLocalError)):
        make_ring("zmod:6")


def test_reducible_polynomial_rejected():
    with pytest.raises(NotLocalError):
        make_ring("gfpoly:5:t^2-1:1")
