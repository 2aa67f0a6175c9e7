from localmoufang.action import (closure, compose, identity, induced, inverse, is_identity,
                                 stabilizer)
from localmoufang.moufang import hua_subgroup


def test_identity_and_inverse_laws():
    p = (2, 0, 3, 1)
    assert compose(identity(4), p) == p
    assert is_identity(compose(inverse(p), p))


def test_right_action_convention():
    p, q = (1, 2, 0), (0, 2, 1)
    assert compose(p, q) == tuple(q[p[x]] for x in range(3))


def test_alpha_product_in_p1_z9(M9):
    a = M9.a
    x1, x2, x3 = (M9.point(s) for s in ("[1,1]", "[1,2]", "[1,3]"))
    assert compose(a(x1), a(x2)) == a(x3)


def test_closure_orders(M9):
    G = closure(M9.gens_U + M9.gens_U0, M9.n)
    assert len(G) == 324
    assert closure([identity(5)], 5) == [identity(5)]
    H = hua_subgroup(M9)
    assert len(H) == 3
    assert set(stabilizer(G, [M9.zero, M9.inf])) == set(H)


def test_induced_maps(M9):
    assert is_identity(induced(identity(M9.n), M9.space))
    assert is_identity(induced(M9.a(M9.point("[1,3]")), M9.space))
    assert not is_identity(induced(M9.a(M9.point("[1,1]")), M9.space))
