import pytest

from localmoufang.localring import DescriptorError
from localmoufang.tree import (TruncatedDVR, adjacent, canonical, chi, graph_check, kernel,
                               kernel_checks, projection_checks, rep_label, sphere,
                               sphere_action, to_dot, verify_sphere_iso)


def passed(checks):
    return all(c["status"] != "fail" for c in checks)


@pytest.fixture(scope="module")
def T3():
    return TruncatedDVR(3, 3)


def test_sphere_sizes(T3):
    assert [len(sphere(T3, n)) for n in (1, 2, 3)] == [4, 12, 36]


def test_chi(T3):
    L = canonical(T3, 2, 1, 5)
    assert T3.lines[2].space.labels[chi(T3, L)] == "[1,5]"


def test_adjacency(T3):
    L = canonical(T3, 1, 1, 2)
    near = sorted(rep_label(T3, x) for x in sphere(T3, 2) if adjacent(T3, L, x))
    assert near == ["[1,2]@2", "[1,5]@2", "[1,8]@2"]


def test_tree_structure(T3):
    assert passed(graph_check(T3))
    assert passed(projection_checks(T3))
    assert passed(T3.reduction_checks())


def test_kernel_and_image(T3):
    info = kernel(T3, 2, 3)
    assert info["sl2_order"] == 17496
    assert info["kernel_is_scalar_mod"]
    assert info["image_order"] == 324
    assert passed(kernel_checks(T3, 2, 3))


def test_identity_and_determinant(T3):
    assert sphere_action(T3, 2, (1, 0, 0, 1)) == tuple(range(12))
    with pytest.raises(DescriptorError):
        sphere_action(T3, 2, (2, 0, 0, 1))


@pytest.mark.parametrize("p,n", [(3, 2), (5, 1)])
def test_sphere_isomorphism(p, n):
    assert passed(verify_sphere_iso(TruncatedDVR(p, n), n))


def test_power_series_chain():
    T = TruncatedDVR(3, 2, "power")
    assert passed(graph_check(T)) and passed(verify_sphere_iso(T, 2))


def test_dot(T3):
    text = to_dot(TruncatedDVR(2, 2))
    assert text.startswith("graph T {") and text.count("--") == 3 + 6
