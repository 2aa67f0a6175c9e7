"""Quadratic Jordan pairs over finite rings and their local Moufang sets.

A pair ``V = (V+, V-)`` is stored as two addition tables and two quadratic
operator tables, indexed by side ``s`` (0 for ``V+``, 1 for ``V-``)::

    Q[0][x, y] = y Q_x  in V+   (x in V+, y in V-)
    Q[1][y, x] = x Q_y  in V-   (y in V-, x in V+)

Operators act on the right, as in ``y Q_x``. All checks are exhaustive over
the finite tables and vectorized with numpy.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .action import CapExceeded, EquivSet, Perm, compose, compose_all, conj, inverse
from .forms import FreeModule, QuadraticForm
from .localring import DescriptorError, Ring, make_ring
from .moufang import (LocalMoufang, MoufangSeed, check_homomorphism, construct,
                      is_special, times)
from .report import record

# largest module order for which the cubic tables (triple product, Bergman) are built
PAIR_CAP = 128


class JordanPair:
    def __init__(self, name: str, add: Sequence, Q: Sequence, labels: Sequence[List[str]],
                 scalars: Optional[Tuple[Ring, Sequence]] = None):
        self.name = name
        self.A = [np.asarray(add[0], dtype=np.int64), np.asarray(add[1], dtype=np.int64)]
        self.Q = [np.asarray(Q[0], dtype=np.int64), np.asarray(Q[1], dtype=np.int64)]
        self.n = [self.A[0].shape[0], self.A[1].shape[0]]
        if max(self.n) > PAIR_CAP:
            raise CapExceeded("Jordan pair order", PAIR_CAP)
        self.N = [np.argmax(A == 0, axis=1) for A in self.A]
        self.labels = [list(labels[0]), list(labels[1])]
        # optional scalar action: (ring, [table side 0, table side 1]) with table[r][x]
        self.scalars = scalars
        self._cache: Dict[tuple, np.ndarray] = {}

    def opposite(self) -> "JordanPair":
        sc = None
        if self.scalars is not None:
            sc = (self.scalars[0], [self.scalars[1][1], self.scalars[1][0]])
        return JordanPair(self.name + "^op", (self.A[1], self.A[0]), (self.Q[1], self.Q[0]),
                          (self.labels[1], self.labels[0]), sc)

    def label(self, s: int, x: int) -> str:
        return self.labels[s][int(x)]

    # arithmetic helpers -------------------------------------------------------
    def add(self, s, a, b):
        return self.A[s][a, b]

    def sub(self, s, a, b):
        return self.A[s][a, self.N[s][b]]

    def neg(self, s, a):
        return self.N[s][a]

    # derived tables -------------------------------------------------------------
    def triple(self, s: int) -> np.ndarray:
        """``T[x, y, z] = {x y z} = y Q_{x,z}`` for ``x, z`` in side ``s``."""
        key = ("T", s)
        if key not in self._cache:
            S = self.A[s]
            Qs = self.Q[s]
            QS = Qs[S]  # [x, z, y] = y Q_{x+z}
            t = self.sub(s, self.sub(s, QS, Qs[:, None, :]), Qs[None, :, :])
            self._cache[key] = np.ascontiguousarray(t.transpose(0, 2, 1))
        return self._cache[key]

    def bergman_table(self, s: int) -> np.ndarray:
        """``B[x, y, z] = z B_{x,y} = z - {x y z} + z Q_y Q_x``."""
        key = ("B", s)
        if key not in self._cache:
            o = 1 - s
            ns = self.n[s]
            T = self.triple(s)
            z = np.arange(ns)[None, None, :]
            zqyqx = self.Q[s][np.arange(ns)[:, None, None], self.Q[o][None, :, :]]
            self._cache[key] = self.add(s, self.sub(s, np.broadcast_to(z, T.shape), T), zqyqx)
        return self._cache[key]

    def qi_table(self, s: int) -> np.ndarray:
        key = ("QI", s)
        if key not in self._cache:
            B = self.bergman_table(s)
            srt = np.sort(B, axis=2)
            self._cache[key] = (srt == np.arange(self.n[s])[None, None, :]).all(axis=2)
        return self._cache[key]

    def qinv_table(self, s: int) -> np.ndarray:
        """Quasi-inverse ``x^y`` for all pairs, ``-1`` where not quasi-invertible."""
        key = ("QV", s)
        if key not in self._cache:
            B = self.bergman_table(s)
            inv = np.argsort(B, axis=2, kind="stable")
            ns, no = self.n[s], self.n[1 - s]
            x = np.arange(ns)[:, None]
            v = self.sub(s, np.broadcast_to(x, (ns, no)), self.Q[s])
            res = np.take_along_axis(inv, v[..., None], axis=2)[..., 0]
            res = np.where(self.qi_table(s), res, -1)
            self._cache[key] = res
        return self._cache[key]

    def invertible(self, s: int) -> np.ndarray:
        key = ("INV", s)
        if key not in self._cache:
            if self.n[0] != self.n[1]:
                self._cache[key] = np.zeros(self.n[s], dtype=bool)
            else:
                srt = np.sort(self.Q[s], axis=1)
                self._cache[key] = (srt == np.arange(self.n[s])[None, :]).all(axis=1)
        return self._cache[key]

    def Q_inverse_table(self, s: int) -> np.ndarray:
        """``Qi[x, v]`` is the ``y`` with ``y Q_x = v`` (valid for invertible ``x``)."""
        key = ("QINV", s)
        if key not in self._cache:
            self._cache[key] = np.argsort(self.Q[s], axis=1, kind="stable")
        return self._cache[key]

    def inverse_elem(self, s: int) -> np.ndarray:
        """``x^-1 = x Q_x^-1`` for invertible ``x``, ``-1`` otherwise."""
        key = ("XINV", s)
        if key not in self._cache:
            Qi = self.Q_inverse_table(s)
            x = np.arange(self.n[s])
            out = Qi[x, x]
            self._cache[key] = np.where(self.invertible(s), out, -1)
        return self._cache[key]

    def radical(self, s: int) -> np.ndarray:
        """Boolean mask of properly quasi-invertible elements of side ``s``."""
        if s == 0:
            return self.qi_table(0).all(axis=1)
        return self.qi_table(0).all(axis=0)


# constructors -------------------------------------------------------------------

def ring_pair(R: Ring) -> JordanPair:
    """``(A, A)`` with ``y Q_x = x y x``."""
    n = R.n
    add = [[R.add(a, b) for b in range(n)] for a in range(n)]
    Q = [[R.mul(R.mul(x, y), x) for y in range(n)] for x in range(n)]
    labels = [R.label(a) for a in range(n)]
    sc = [[R.mul(r, x) for x in range(n)] for r in range(n)]
    return JordanPair(f"ring:{R.name}", (add, add), (Q, Q), (labels, labels), (R, [sc, sc]))


def qform_pair(R: Ring, q: QuadraticForm) -> JordanPair:
    """``(W, W)`` with ``y Q_x = y q(x) - x f(x, y)``."""
    W = FreeModule(R, q.rank)
    vs = W.vectors
    n = W.size
    add = [[W.encode(W.add(u, v)) for v in vs] for u in vs]
    Q = []
    for x in vs:
        qx = q.q(x)
        row = []
        for y in vs:
            row.append(W.encode(W.sub(W.scale(y, qx), W.scale(x, q.f(x, y)))))
        Q.append(row)
    labels = [W.label(v) for v in vs]
    sc = [[W.encode(W.scale(v, r)) for v in vs] for r in range(R.n)]
    return JordanPair(f"qform:{R.name}:{q.text}", (add, add), (Q, Q), (labels, labels),
                      (R, [sc, sc]))


def from_tables(name: str, add_plus, add_minus, Q_plus, Q_minus,
                labels_plus=None, labels_minus=None) -> JordanPair:
    lp = labels_plus or [str(i) for i in range(len(add_plus))]
    lm = labels_minus or [str(i) for i in range(len(add_minus))]
    return JordanPair(name, (add_plus, add_minus), (Q_plus, Q_minus), (lp, lm))


def make_pair(desc: str, cap: int = 2 ** 14) -> JordanPair:
    """``ring:<ring descriptor>`` or ``qform:<ring descriptor>:<q>``."""
    if desc.startswith("ring:"):
        return ring_pair(make_ring(desc[len("ring:"):], cap))
    if desc.startswith("qform:"):
        body = desc[len("qform:"):]
        ring_desc, sep, qtext = body.rpartition(":")
        if not sep or "x" not in qtext:
            raise DescriptorError(f"expected qform:<ring>:<q(x)> in {desc!r}")
        R = make_ring(ring_desc, cap)
        q = QuadraticForm.parse(R, qtext)
        if R.n ** q.rank > min(cap, PAIR_CAP):
            raise CapExceeded(f"module of order {R.n ** q.rank}", min(cap, PAIR_CAP))
        return qform_pair(R, q)
    raise DescriptorError(f"unknown pair descriptor {desc!r}")


def bergman(V: JordanPair, x: int, y: int, side: int = 0) -> List[int]:
    return [int(v) for v in V.bergman_table(side)[x, y]]


def quasi_inv(V: JordanPair, x: int, y: int, side: int = 0) -> Optional[int]:
    v = int(V.qinv_table(side)[x, y])
    return None if v < 0 else v


def jp_inverse(V: JordanPair, x: int, side: int = 0) -> Optional[int]:
    v = int(V.inverse_elem(side)[x])
    return None if v < 0 else v


# axioms ---------------------------------------------------------------------------

def _witness(mask: np.ndarray, V: JordanPair, sides: Sequence[int]):
    bad = np.argwhere(~mask)
    if len(bad) == 0:
        return None
    return [V.label(s, int(i)) for s, i in zip(sides, bad[0])]


def jp_axioms(V: JordanPair) -> List[dict]:
    """JP1, JP2, JP3 and the linearizations of JP1 and JP2 on both sides."""
    checks = []
    for s in (0, 1):
        o = 1 - s
        sg = "+" if s == 0 else "-"
        Ts, To = V.triple(s), V.triple(o)
        Qs, Qo = V.Q[s], V.Q[o]
        ns, no = V.n[s], V.n[o]
        xi = np.arange(ns)
        yi = np.arange(no)

        # Q_x additive in its argument
        ok = V.add(s, Qs[:, :, None], Qs[:, None, :]) == Qs[xi[:, None, None],
                                                             V.A[o][None, :, :]]
        checks.append(record(f"Q_x additive ({sg})", "(y+w) Q_x = y Q_x + w Q_x",
                             bool(ok.all()), _witness(ok, V, (s, o, o))))
        # Q_{x,z} additive in x
        w = None
        for x in range(ns):
            lhs = Ts[V.A[s][x]]  # [x', y, z] -> {x+x' y z}
            rhs = V.add(s, Ts[x][None, :, :], Ts)
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                w = [V.label(s, x)] + [V.label(t, int(i)) for t, i in zip((s, o, s), bad[0])]
                break
        checks.append(record(f"Q_(x,z) bilinear ({sg})", "{x+x' y z} = {x y z} + {x' y z}",
                             w is None, w))
        if V.scalars is not None:
            R, tabs = V.scalars
            sc_s, sc_o = np.asarray(tabs[s]), np.asarray(tabs[o])
            w = None
            for r in range(R.n):
                r2 = R.mul(r, r)
                ok = Qs[sc_s[r]] == sc_s[r2][Qs]
                if not ok.all():
                    w = [R.label(r)] + _witness(ok, V, (s, o))
                    break
            checks.append(record(f"Q quadratic ({sg})", "Q_(rx) = r^2 Q_x", w is None, w))

        zQx = Qs  # [x, z]
        lhs = Ts[xi[:, None, None], yi[None, :, None], zQx[:, None, :]]
        rhs = Qs[xi[:, None, None], To.transpose(1, 0, 2)]
        ok = lhs == rhs
        checks.append(record(f"JP1 ({sg})", "{x y zQ_x} = {y x z}Q_x", bool(ok.all()),
                             _witness(ok, V, (s, o, o))))

        zi = np.arange(ns)
        lhs = Ts[Qs[:, :, None], yi[None, :, None], zi[None, None, :]]
        rhs = Ts[xi[:, None, None], Qo.T[:, :, None], zi[None, None, :]]
        ok = lhs == rhs
        checks.append(record(f"JP2 ({sg})", "{yQ_x y z} = {x xQ_y z}", bool(ok.all()),
                             _witness(ok, V, (s, o, s))))

        wi = np.arange(no)
        lhs = Qs[Qs[:, :, None], wi[None, None, :]]
        inner = Qo[yi[None, :, None], Qs[:, None, :]]
        rhs = Qs[xi[:, None, None], inner]
        ok = lhs == rhs
        checks.append(record(f"JP3 ({sg})", "Q_(yQ_x) = Q_x Q_y Q_x", bool(ok.all()),
                             _witness(ok, V, (s, o, o))))

        # linearizations, looping over the first variable
        w1 = w2 = w3 = None
        vi = np.arange(ns)
        for x in range(ns):
            if w1 is None:
                a = Ts[vi[:, None, None], yi[None, :, None], Qs[x][None, None, :]]
                b = Ts[x][yi[None, :, None], Ts[x].T[:, None, :]]
                c = Qs[x][To[yi[None, :, None], vi[:, None, None], yi[None, None, :]]]
                d = Ts[x][To[:, x, :][None, :, :], vi[:, None, None]]
                bad = np.argwhere(V.add(s, a, b) != V.add(s, c, d))
                if len(bad):
                    v_, y_, z_ = bad[0]
                    w1 = [V.label(s, x), V.label(s, v_), V.label(o, y_), V.label(o, z_)]
            if w2 is None:
                lhs = Ts[Ts[x].T[:, :, None], yi[None, :, None], zi[None, None, :]]
                r1 = Ts[x][Qo.T[:, :, None], zi[None, None, :]]
                r2 = Ts[vi[:, None, None], Qo[:, x][None, :, None], zi[None, None, :]]
                bad = np.argwhere(lhs != V.add(s, r1, r2))
                if len(bad):
                    v_, y_, z_ = bad[0]
                    w2 = [V.label(s, x), V.label(s, v_), V.label(o, y_), V.label(s, z_)]
            if w3 is None:
                a = Ts[Qs[x][:, None, None], wi[None, :, None], zi[None, None, :]]
                b = Ts[Qs[x][None, :, None], yi[:, None, None], zi[None, None, :]]
                c = Ts[x][To[:, x, :][:, :, None], zi[None, None, :]]
                bad = np.argwhere(V.add(s, a, b) != c)
                if len(bad):
                    y_, w_, z_ = bad[0]
                    w3 = [V.label(s, x), V.label(o, y_), V.label(o, w_), V.label(s, z_)]
        checks.append(record(f"JP1 linearized in x ({sg})",
                             "{v y zQ_x} + {x y zQ_(x,v)} = {y v z}Q_x + {y x z}Q_(x,v)",
                             w1 is None, w1))
        checks.append(record(f"JP2 linearized in x ({sg})",
                             "{yQ_(x,v) y z} = {x vQ_y z} + {v xQ_y z}", w2 is None, w2))
        checks.append(record(f"JP2 linearized in y ({sg})",
                             "{yQ_x w z} + {wQ_x y z} = {x xQ_(y,w) z}", w3 is None, w3))
    return checks


def is_ideal(V: JordanPair, I: Sequence[np.ndarray]) -> Optional[str]:
    """None if ``(I+, I-)`` (boolean masks) is an ideal, else a reason."""
    for s in (0, 1):
        o = 1 - s
        m = I[s]
        idx = np.flatnonzero(m)
        if not m[0] or not m[V.A[s][np.ix_(idx, idx)]].all() or not m[V.N[s][idx]].all():
            return f"side {s} is not a subgroup"
        if not m[V.Q[s][idx, :]].all():
            return f"Q_x V not in I for x in I (side {s})"
        if not m[V.Q[s][:, np.flatnonzero(I[o])]].all():
            return f"Q_V I not in I (side {s})"
        if not m[V.triple(s)[:, :, idx]].all():
            return f"{{V V I}} not in I (side {s})"
    return None


def locality(V: JordanPair) -> List[dict]:
    checks = []
    noninv = [~V.invertible(0), ~V.invertible(1)]
    reason = is_ideal(V, noninv)
    proper = bool(V.invertible(0).any())
    checks.append(record("local", "non-invertible elements form a proper ideal",
                         reason is None and proper, reason))
    return checks


def quotient_pair(V: JordanPair, I: Sequence[np.ndarray]):
    """``V / I`` for an ideal ``I``; returns the pair and the coset maps."""
    maps = []
    reps = []
    for s in (0, 1):
        idx = np.flatnonzero(I[s])
        cls = -np.ones(V.n[s], dtype=np.int64)
        r = []
        for x in range(V.n[s]):
            if cls[x] < 0:
                cls[V.A[s][x, idx]] = len(r)
                r.append(x)
        maps.append(cls)
        reps.append(np.array(r))
    add = [maps[s][V.A[s][np.ix_(reps[s], reps[s])]] for s in (0, 1)]
    Q = [maps[s][V.Q[s][np.ix_(reps[s], reps[1 - s])]] for s in (0, 1)]
    labels = [[V.label(s, int(x)) + "+I" for x in reps[s]] for s in (0, 1)]
    return JordanPair(V.name + "/I", add, Q, labels), maps


def jp_basic_suite(V: JordanPair) -> List[dict]:
    """The standard identities of quasi-inverses, inverses and the radical."""
    checks = []
    rad = [V.radical(0), V.radical(1)]
    for s in (0, 1):
        o = 1 - s
        sg = "+" if s == 0 else "-"
        Ts, To = V.triple(s), V.triple(o)
        Qs, Qo = V.Q[s], V.Q[o]
        ns, no = V.n[s], V.n[o]
        xi, yi = np.arange(ns), np.arange(no)
        inv_s, inv_o = V.invertible(s), V.invertible(o)
        xinv_s, xinv_o = V.inverse_elem(s), V.inverse_elem(o)
        QI, QV = V.qi_table(s), V.qinv_table(s)
        QIo, QVo = V.qi_table(o), V.qinv_table(o)

        # (i)
        z = np.arange(no)
        a = Ts[xi[:, None, None], z[None, None, :], Qs[:, :, None]]       # [x,y,z] z Q_{x,yQ_x}
        b = Ts[xi[:, None, None], yi[None, :, None], Qs[:, None, :]]       # zQ_x D_{x,y}
        c = Qs[xi[:, None, None], To.transpose(1, 0, 2)]                  # z D_{y,x} Q_x
        ok = (a == b) & (b == c)
        checks.append(record(f"JPbasic (i) ({sg})", "Q_(x,yQ_x) = Q_x D_(x,y) = D_(y,x) Q_x",
                             bool(ok.all()), _witness(ok, V, (s, o, o))))
        # (ii)
        w = None
        Qi = V.Q_inverse_table(s)
        for x in np.flatnonzero(inv_s):
            lhs = Qi[x][Ts[x].T]                     # [y, z] -> z Q_{x,y} Q_x^-1
            rhs = To[xinv_s[x]][np.arange(ns)[:, None], z[None, :]]
            if not (lhs == rhs).all():
                w = V.label(s, x)
                break
        checks.append(record(f"JPbasic (ii) ({sg})", "Q_(x,y) Q_x^-1 = D_(x^-1,y)", w is None, w))
        # (iii)
        B = V.bergman_table(s)
        w = None
        zs = np.arange(ns)
        for x in np.flatnonzero(inv_s):
            d = V.sub(o, xinv_s[x], yi)                        # x^-1 - y
            rhs = Qs[x][Qo[d][:, zs]]
            if not (B[x] == rhs).all():
                w = V.label(s, x)
                break
        if w is None:
            for y in np.flatnonzero(inv_o):
                d = V.sub(s, xi, xinv_o[y])                    # x - y^-1
                rhs = Qs[d][:, Qo[y][zs]]
                if not (B[:, y, :] == rhs).all():
                    w = V.label(o, y)
                    break
        checks.append(record(f"JPbasic (iii) ({sg})",
                             "B_(x,y) = Q_(x^-1 - y) Q_x = Q_y Q_(x - y^-1)", w is None, w))
        # (iv)
        xy = np.where(QI, QV, 0)
        yz = V.A[o]                                             # [y, z] -> y + z
        lhs_qi = QI[xy[:, :, None], z[None, None, :]]
        rhs_qi = QI[xi[:, None, None], yz[None, :, :]]
        both = QI[:, :, None] & lhs_qi
        eq = QV[xi[:, None, None], yz[None, :, :]] == QV[xy[:, :, None], z[None, None, :]]
        ok = ~QI[:, :, None] | ((lhs_qi == rhs_qi) & (~both | eq))
        checks.append(record(f"JPbasic (iv) ({sg})", "x^(y+z) = (x^y)^z", bool(ok.all()),
                             _witness(ok, V, (s, o, o))))
        # (v)
        sw = QIo.T
        yx = np.where(sw, QVo.T, 0)
        rhs = V.add(s, np.broadcast_to(xi[:, None], (ns, no)), Qs[xi[:, None], yx])
        ok = (QI == sw) & (~QI | (QV == rhs))
        checks.append(record(f"JPbasic (v) ({sg})", "x^y = x + y^x Q_x", bool(ok.all()),
                             _witness(ok, V, (s, o))))
        # (vi): x in V^s, y in V^o, z in V^s
        zQy = Qo                                              # [y, z] -> z Q_y in V^o
        xQy = Qo.T                                            # [x, y] -> x Q_y in V^o
        l_qi = QI[xi[:, None, None], zQy[None, :, :]]
        r_qi = QIo[xQy[:, :, None], zs[None, None, :]]
        lv = QVo[xQy[:, :, None], zs[None, None, :]]
        xv = np.where(l_qi, QV[xi[:, None, None], zQy[None, :, :]], 0)
        rv = Qo[yi[None, :, None], xv]
        ok = (l_qi == r_qi) & (~l_qi | (lv == rv))
        checks.append(record(f"JPbasic (vi) ({sg})", "(xQ_y)^z = x^(zQ_y) Q_y", bool(ok.all()),
                             _witness(ok, V, (s, o, s))))
        # (xi)
        ok = ~rad[s][:, None] | ~QI | rad[s][np.where(QI, QV, 0)]
        checks.append(record(f"JPbasic (xi) ({sg})", "x in Rad implies x^y in Rad",
                             bool(ok.all()), _witness(ok, V, (s, o))))
        # (xii)
        w = None
        iv = np.flatnonzero(inv_s)
        for x in iv:
            d = V.sub(s, x, iv)
            cand = iv[rad[s][d]]
            bad = ~rad[o][V.sub(o, xinv_s[x], xinv_s[cand])]
            if bad.any():
                w = [V.label(s, x), V.label(s, cand[np.argmax(bad)])]
                break
        checks.append(record(f"JPbasic (xii) ({sg})",
                             "x - y in Rad implies x^-1 - y^-1 in Rad", w is None, w))

    reason = is_ideal(V, rad)
    checks.append(record("JPbasic (vii)", "Rad V is an ideal", reason is None, reason))
    local = locality(V)[0]["status"] == "pass"
    noninv_match = all((rad[s] == ~V.invertible(s)).all() for s in (0, 1))
    checks.append(record("JPbasic (viii)", "V local implies Rad V = non-invertibles",
                         (not local) or noninv_match, None))
    if reason is None:
        W, maps = quotient_pair(V, rad)
        division = all(W.invertible(s)[1:].all() for s in (0, 1)) and W.n[0] > 1
        checks.append(record("JPbasic (ix)", "V/Rad division implies V local",
                             (not division) or local, {"quotient_division": division}))
        qi_bar = W.qi_table(0)[maps[0][:, None], maps[1][None, :]]
        ok = ~qi_bar | V.qi_table(0)
        checks.append(record("JPbasic (x)", "quasi-invertible mod Rad implies quasi-invertible",
                             bool(ok.all()), _witness(ok, V, (0, 1))))
    return checks


def pair_info(V: JordanPair) -> dict:
    rad = [V.radical(0), V.radical(1)]
    return {
        "name": V.name,
        "order": [int(V.n[0]), int(V.n[1])],
        "invertible": [int(V.invertible(0).sum()), int(V.invertible(1).sum())],
        "radical_order": [int(rad[0].sum()), int(rad[1].sum())],
        "radical_plus": [V.label(0, i) for i in np.flatnonzero(rad[0])][:32],
    }


# projective space ------------------------------------------------------------------

class ProjectiveSpace:
    """Representatives ``[x,0]`` (``x`` in ``V+``) and ``[e,e^-1+y]`` (``y`` in ``Rad V-``)."""

    def __init__(self, V: JordanPair, e: int):
        if not V.invertible(0)[e]:
            raise ValueError(f"{V.label(0, e)} is not invertible")
        self.V = V
        self.e = e
        self.e_inv = int(V.inverse_elem(0)[e])
        self.rad = [V.radical(0), V.radical(1)]
        self.rad_minus = [int(y) for y in np.flatnonzero(self.rad[1])]
        np_ = V.n[0]
        self.n_first = np_
        self.second_index = {y: np_ + i for i, y in enumerate(self.rad_minus)}
        self.n = np_ + len(self.rad_minus)
        labels = [f"[{V.label(0, x)},0]" for x in range(np_)]
        labels += [f"[e,e^-1+{V.label(1, y)}]" for y in self.rad_minus]
        radp = np.flatnonzero(self.rad[0])
        coset = -np.ones(np_, dtype=np.int64)
        k = 0
        for x in range(np_):
            if coset[x] < 0:
                coset[V.A[0][x, radp]] = k
                k += 1
        self.coset = coset
        cls = [int(c) for c in coset] + [k] * len(self.rad_minus)
        self.space = EquivSet(labels, cls)
        self.inf = self.second_index[0]
        self.zero = 0

    def first(self, x: int) -> int:
        return int(x)

    def second(self, s: int) -> int:
        """The point ``[e, e^-1 + s]`` for any ``s`` in ``V-``."""
        V = self.V
        if self.rad[1][s]:
            return self.second_index[int(s)]
        t = V.inverse_elem(1)[s]
        return int(V.neg(0, t))

    def is_second(self, p: int) -> bool:
        return p >= self.n_first

    def second_coord(self, p: int) -> int:
        """``y`` with ``p = [e, e^-1 + y]``, for any point not equivalent to ``[0,0]``."""
        V = self.V
        if self.is_second(p):
            return self.rad_minus[p - self.n_first]
        if not V.invertible(0)[p]:
            raise ValueError("point has no second-type representative")
        return int(V.neg(1, V.inverse_elem(0)[p]))

    def alpha(self, v: int) -> Perm:
        V = self.V
        qv = V.qinv_table(1)
        out = [int(V.A[0][x, v]) for x in range(self.n_first)]
        out += [self.second_index[int(qv[y, v])] for y in self.rad_minus]
        return tuple(out)

    def zeta(self, w: int) -> Perm:
        V = self.V
        qv = V.qinv_table(0)
        out = []
        for x in range(self.n_first):
            if self.rad[0][x]:
                out.append(int(qv[x, w]))
            else:
                out.append(self.second(V.A[1][self.second_coord(x), w]))
        out += [self.second(V.A[1][y, w]) for y in self.rad_minus]
        return tuple(out)

    def mu(self, v: int) -> Perm:
        """Closed form: ``[e,e^-1+y] -> [yQ_v,0]``, ``[x,0] -> [e,e^-1+xQ_v^-1]``."""
        V = self.V
        Qi = V.Q_inverse_table(0)
        out = [self.second(Qi[v, x]) for x in range(self.n_first)]
        out += [int(V.Q[0][v, y]) for y in self.rad_minus]
        return tuple(out)

    def mu_word(self, v: int) -> Perm:
        w = int(self.V.inverse_elem(0)[v])
        z = self.zeta(w)
        return compose_all((z, self.alpha(v), z), self.n)


def build_MV(V: JordanPair, e: Optional[int] = None) -> LocalMoufang:
    """``M(V)`` with ``U = {alpha_v}`` and ``tau = mu_e``."""
    if e is None:
        e = int(np.flatnonzero(V.invertible(0))[0])
    P = ProjectiveSpace(V, e)
    U = [P.alpha(v) for v in range(V.n[0])]
    M = construct(MoufangSeed(P.space, U, P.mu(e), P.inf, f"M({V.name})"))
    M.pv = P
    return M


def mv_suite(M: LocalMoufang, class_limit: int = 1 << 20) -> List[dict]:
    """Closed forms and identities of ``M(V)``."""
    P: ProjectiveSpace = M.pv
    V = P.V
    checks = []
    inv = [int(v) for v in np.flatnonzero(V.invertible(0))]
    w = next((V.label(0, v) for v in inv if P.mu(v) != P.mu_word(v)), None)
    checks.append(record("mu closed form", "mu_v = zeta_(v^-1) alpha_v zeta_(v^-1)", w is None, w))
    ident = tuple(range(M.n))
    w = next((V.label(0, v) for v in inv if compose(P.mu(v), P.mu(v)) != ident), None)
    checks.append(record("mu involution", "mu_v^2 = 1", w is None, w))
    w = None
    for v in inv:
        mv = P.mu(v)
        for x in inv:
            target = V.neg(0, V.Q[0][v, V.inverse_elem(0)[x]])
            if mv[x] != target:
                w = [V.label(0, v), V.label(0, x)]
                break
        if w:
            break
    checks.append(record("mu on invertible points", "[x,0] mu_v = [-x^-1 Q_v, 0]", w is None, w))
    w = None
    Qi = V.Q_inverse_table(0)
    alphas = [P.alpha(v) for v in range(V.n[0])]
    for t in inv:
        mt = P.mu(t)
        for v in range(V.n[0]):
            if conj(alphas[v], mt) != P.zeta(int(Qi[t, v])):
                w = [V.label(0, v), V.label(0, t)]
                break
        if w:
            break
    checks.append(record("alpha conjugated by mu", "alpha_v^(mu_t) = zeta_(v Q_t^-1)", w is None, w))
    zetas = {P.zeta(y) for y in range(V.n[1])}
    ok = set(M.U0) == zetas
    checks.append(record("U_0 is the zeta group", "U^tau = {zeta_w}", ok, None))
    # [t,0] = [e, e^-1 - t^-1] through projective equivalence
    QI, QV = V.qi_table(0), V.qinv_table(0)
    w = None
    for t in inv:
        d = V.sub(1, V.inverse_elem(0)[t], P.e_inv)       # 0 - (e^-1 - t^-1)
        if not QI[t, d] or QV[t, d] != P.e:
            w = V.label(0, t)
            break
    checks.append(record("second representative", "[t,0] = [e, e^-1 - t^-1]", w is None, w))
    if V.n[0] * V.n[1] * V.n[1] <= class_limit:
        classes = set()
        reps_ok = True
        for x in range(V.n[0]):
            for y in range(V.n[1]):
                yp = np.arange(V.n[1])
                d = V.sub(1, y, yp)
                mask = QI[x, d]
                cls = frozenset(zip(QV[x, d][mask].tolist(), yp[mask].tolist()))
                if (x, y) not in cls:
                    reps_ok = False
                classes.add(cls)
        # count classes that contain a representative of the chosen system
        firsts = sum(1 for c in classes if any(b == 0 for a, b in c))
        ok = reps_ok and len(classes) == M.n
        checks.append(record("projective space", "|P(V)| = |V+| + |Rad V-|", ok,
                             {"classes": len(classes), "points": M.n, "first_type": firsts}))
    return checks


# reconstruction -------------------------------------------------------------------

class RequirementFailure(ValueError):
    def __init__(self, requirement: str, witness=None, checks=None):
        super().__init__(f"{requirement} fails")
        self.requirement = requirement
        self.witness = witness
        self.checks = checks or []


class ReconstructedPair:
    """Jordan pair read off a local Moufang set.

    ``plus[i]`` is the point carrying ``V+`` element ``i`` (``plus[0]`` is 0),
    ``minus[j]`` the point carrying ``V-`` element ``j`` (``minus[0]`` is infinity).
    """

    def __init__(self, M: LocalMoufang):
        self.M = M
        n = M.n
        self.plus = [M.zero] + [x for x in range(n) if not M.equiv(x, M.inf) and x != M.zero]
        self.minus = [M.inf] + [y for y in range(n) if not M.equiv(y, M.zero) and y != M.inf]
        self.pp = {x: i for i, x in enumerate(self.plus)}
        self.pm = {y: i for i, y in enumerate(self.minus)}
        np_, nm = len(self.plus), len(self.minus)
        self.Ap = np.array([[self.pp[M.add(x, z)] for z in self.plus] for x in self.plus])
        self.Am = np.array([[self.pm[M.u0_to[w][y]] for w in self.minus] for y in self.minus])
        self.Np = np.argmax(self.Ap == 0, axis=1)
        self.Nm = np.argmax(self.Am == 0, axis=1)
        dbl_p = self.Ap[np.arange(np_), np.arange(np_)]
        dbl_m = self.Am[np.arange(nm), np.arange(nm)]
        self.halving_ok = len(set(dbl_p.tolist())) == np_ and len(set(dbl_m.tolist())) == nm
        self.half_p = np.argsort(dbl_p, kind="stable")
        self.half_m = np.argsort(dbl_m, kind="stable")
        self.unit_p = np.array([M.is_unit(x) for x in self.plus])
        self.unit_m = np.array([M.is_unit(y) for y in self.minus])
        self.e = M.least_unit()
        self.ep, self.em = self.pp[self.e], self.pm[self.e]
        self.mu_pm: Dict[int, np.ndarray] = {}
        self.mu_mp: Dict[int, np.ndarray] = {}
        for t in M.units:
            mt = M.mu(t)
            self.mu_pm[t] = np.array([self.pp[mt[y]] for y in self.minus])
            self.mu_mp[t] = np.array([self.pm[mt[x]] for x in self.plus])
        self._mu2: Dict[Tuple[int, int], np.ndarray] = {}
        self._mut2: Dict[Tuple[int, int], np.ndarray] = {}

    def mu2(self, i: int, j: int) -> np.ndarray:
        """``mu_{x,z}`` for ``V+`` indices, as an array ``V- -> V+``."""
        key = (i, j)
        if key in self._mu2:
            return self._mu2[key]
        A, N, u = self.Ap, self.Np, self.unit_p
        if u[i] and u[j]:
            k = A[i, j]
            if u[k]:
                mp = self.mu_pm
                val = A[A[mp[self.plus[k]], N[mp[self.plus[i]]]], N[mp[self.plus[j]]]]
            else:
                val = N[self.mu2(int(N[i]), j)]
        elif u[i]:
            val = A[self.mu2(i, int(A[i, j])), N[self.mu2(i, i)]]
        elif u[j]:
            val = self.mu2(j, i)
        else:
            val = A[self.mu2(int(A[i, self.ep]), j), N[self.mu2(self.ep, j)]]
        self._mu2[key] = val
        return val

    def mut2(self, i: int, j: int) -> np.ndarray:
        """``mu~_{y,w}`` for ``V-`` indices, as an array ``V+ -> V-``."""
        key = (i, j)
        if key in self._mut2:
            return self._mut2[key]
        A, N, u = self.Am, self.Nm, self.unit_m
        if u[i] and u[j]:
            k = A[i, j]
            if u[k]:
                mp = self.mu_mp
                val = A[A[mp[self.minus[k]], N[mp[self.minus[i]]]], N[mp[self.minus[j]]]]
            else:
                val = N[self.mut2(int(N[i]), j)]
        elif u[i]:
            val = A[self.mut2(i, int(A[i, j])), N[self.mut2(i, i)]]
        elif u[j]:
            val = self.mut2(j, i)
        else:
            val = A[self.mut2(int(A[i, self.em]), j), N[self.mut2(self.em, j)]]
        self._mut2[key] = val
        return val

    def full_tables(self):
        np_, nm = len(self.plus), len(self.minus)
        MU = np.array([[self.mu2(i, j) for j in range(np_)] for i in range(np_)])
        MUT = np.array([[self.mut2(i, j) for j in range(nm)] for i in range(nm)])
        return MU, MUT


def jordan_requirements(M: LocalMoufang) -> List[dict]:
    checks = []
    bad = next((M.label(x) for x in M.units if M.tilde(x) != M.minus(x)), None)
    checks.append(record("J1 special", "~x = -x", bad is None, bad))
    ab = next(([M.label(a[M.zero]), M.label(b[M.zero])] for a in M.gens_U for b in M.gens_U
               if compose(a, b) != compose(b, a)), None)
    checks.append(record("J2 abelian U_inf", "U_inf abelian", ab is None, ab))
    bad = next((M.label(x) for x in M.units
                if not (M.is_unit(times(M, x, 2)) and M.is_unit(times(M, x, 3)))), None)
    checks.append(record("J3 multiples of units", "x unit implies x.2, x.3 units", bad is None, bad))
    return checks


def reconstruct_jordan(M: LocalMoufang):
    """Build the Jordan pair of ``M``.

    Returns ``(V, rp, checks)`` with ``rp`` the :class:`ReconstructedPair`
    holding the point correspondences. Raises :class:`RequirementFailure`.
    """
    checks = jordan_requirements(M)
    bad = next((c for c in checks if c["status"] == "fail"), None)
    if bad is not None:
        raise RequirementFailure(bad["name"], bad["witness"], checks)
    rp = ReconstructedPair(M)
    if not rp.halving_ok:
        raise RequirementFailure("halving", None, checks)
    MU, MUT = rp.full_tables()
    Ap, Am = rp.Ap, rp.Am
    np_, nm = len(rp.plus), len(rp.minus)
    wb = None
    for i in range(np_):
        lhs = MU[Ap[i]]                       # [i', j, y] -> mu_{x+x', z}
        rhs = Ap[MU[i][None, :, :], MU]       # mu_{x,z} + mu_{x',z}
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            wb = [M.label(rp.plus[i]), M.label(rp.plus[bad[0][0]]), M.label(rp.plus[bad[0][1]])]
            break
    sym = (MU == MU.transpose(1, 0, 2)).all()
    wt = None
    for i in range(nm):
        bad = np.argwhere(MUT[Am[i]] != Am[MUT[i][None, :, :], MUT])
        if len(bad):
            wt = [M.label(rp.minus[i]), M.label(rp.minus[bad[0][0]]), M.label(rp.minus[bad[0][1]])]
            break
    symt = (MUT == MUT.transpose(1, 0, 2)).all()
    ok = wb is None and wt is None and bool(sym) and bool(symt)
    checks.append(record("J4 bilinear extension", "mu_(x,z), mu~_(y,w) symmetric bilinear",
                         ok, wb or wt))
    if not ok:
        raise RequirementFailure("J4", wb or wt, checks)
    idx_p = np.arange(np_)
    idx_m = np.arange(nm)
    Qp = rp.half_p[MU[idx_p, idx_p]]          # [x, y] -> y Q_x
    Qm = rp.half_m[MUT[idx_m, idx_m]]         # [y, x] -> x Q_y
    labels = ([M.label(x) for x in rp.plus], [M.label(y) for y in rp.minus])
    V = JordanPair(f"V({M.name})", (Ap, Am), (Qp, Qm), labels)
    rp.MU, rp.MUT, rp.V = MU, MUT, V
    checks += unit_identity_suite(rp)
    return V, rp, checks


def unit_identity_suite(rp: ReconstructedPair) -> List[dict]:
    """Identities of the bilinear mu-maps on units."""
    M = rp.M
    MU, MUT = rp.MU, rp.MUT
    Ap, Am, Np, Nm = rp.Ap, rp.Am, rp.Np, rp.Nm
    pp, pm = rp.pp, rp.pm
    units = M.units
    checks = []

    w = None
    for t in units:
        lhs = MU[pp[t]][:, pm[t]]             # [x] -> t mu_{t,x}
        rhs = Np[Ap[np.arange(len(rp.plus)), np.arange(len(rp.plus))]]
        if not (lhs == rhs).all():
            w = M.label(t)
            break
    checks.append(record("t mu_(t,x) = -x.2", "t mu_(t,x) = -x.2", w is None, w))
    w = next((M.label(t) for t in units
              if not (MU[pp[t], pp[t]] == Ap[rp.mu_pm[t], rp.mu_pm[t]]).all()), None)
    checks.append(record("y mu_(t,t) = y mu_t . 2", "y mu_(t,t) = y mu_t . 2", w is None, w))
    w = None
    for s in units:
        for t in units:
            # x mu_s mu_{s,t} mu_t and x mu_t mu_{s,t} mu_s versus x mu~_{s,t}
            st = MU[pp[s], pp[t]]
            a = rp.mu_mp[t][st[rp.mu_mp[s]]]
            b = rp.mu_mp[s][st[rp.mu_mp[t]]]
            c = MUT[pm[s], pm[t]]
            if not ((a == c).all() and (b == c).all()):
                w = [M.label(s), M.label(t)]
                break
        if w:
            break
    checks.append(record("mu_s mu_(s,t) mu_t = mu~_(s,t)",
                         "mu_s mu_(s,t) mu_t = mu_t mu_(s,t) mu_s = mu~_(s,t)", w is None, w))
    w = None
    for s in units:
        for t in units:
            lhs = MU[pp[s], pp[t]][pm[M.mu(t)[s]]]
            rhs = Np[Ap[pp[M.mu(s)[t]], pp[M.mu(s)[t]]]]
            if lhs != rhs:
                w = [M.label(s), M.label(t)]
                break
        if w:
            break
    checks.append(record("s mu_t mu_(s,t) = -t mu_s . 2", "s mu_t mu_(s,t) = -t mu_s . 2",
                         w is None, w))
    w = None
    tau = M.tau
    tau_p = np.array([pm[tau[x]] for x in rp.plus])     # V+ -> V-
    tau_m = np.array([pp[tau[y]] for y in rp.minus])    # V- -> V+
    for i in range(len(rp.plus)):
        for j in range(len(rp.plus)):
            lhs = tau_p[MU[i, j]]
            rhs = MUT[tau_p[i], tau_p[j]][tau_m]
            if not (lhs == rhs).all():
                w = [M.label(rp.plus[i]), M.label(rp.plus[j])]
                break
        if w:
            break
    checks.append(record("mu_(x,z) tau = tau mu~_(x tau, z tau)", "y mu_(x,z) tau = y tau mu~_(x tau, z tau)",
                         w is None, w))
    w1 = w2 = None
    for x in units:
        for z in units:
            xz = MU[pp[x], pp[z]]
            for y in units:
                my = M.mu(y)
                if w1 is None:
                    lhs = MUT[pm[my[z]], pm[y]][pp[x]]
                    mid = rp.plus[xz[pm[y]]]
                    rhs = pm[my[mid]]
                    alt = MUT[pm[my[x]], pm[y]][pp[z]]
                    if not (lhs == rhs == alt):
                        w1 = [M.label(x), M.label(z), M.label(y)]
                if w2 is None:
                    lhs = xz[pm[my[x]]]
                    rhs = MU[pp[M.mu(x)[y]], pp[z]][pm[y]]
                    if lhs != rhs:
                        w2 = [M.label(x), M.label(z), M.label(y)]
    checks.append(record("JP1 on units", "x mu~_(z mu_y, y) = y mu_(x,z) mu_y = z mu~_(x mu_y, y)",
                         w1 is None, w1))
    checks.append(record("JP2 on units", "x mu_y mu_(x,z) = y mu_(y mu_x, z)", w2 is None, w2))
    w = None
    for x in units:
        if not (rp.half_p[MU[pp[x], pp[x]]] == rp.mu_pm[x]).all():
            w = M.label(x)
            break
    checks.append(record("Q_x = mu_x on units", "Q_x = mu_(x,x) . 1/2 = mu_x", w is None, w))
    return checks


def reconstructed_checks(M: LocalMoufang, V: JordanPair, rp: ReconstructedPair) -> List[dict]:
    checks = jp_axioms(V) + locality(V)
    radp = V.radical(0)
    radm = V.radical(1)
    ok = all(radp[i] == M.equiv(x, M.zero) for i, x in enumerate(rp.plus)) and \
        all(radm[j] == M.equiv(y, M.inf) for j, y in enumerate(rp.minus))
    checks.append(record("radical", "Rad V = (class of 0, class of inf)", ok, None))
    return checks


def extra_condition(M: LocalMoufang, rp: ReconstructedPair) -> dict:
    """The condition characterising ``M(V)`` among reconstructable sets."""
    MU, MUT = rp.MU, rp.MUT
    Am, Nm = rp.Am, rp.Nm
    hm = rp.half_m
    bad = None
    count = 0
    ts = [j for j, y in enumerate(rp.minus) if M.equiv(y, M.inf)]
    for tj in ts:
        t = rp.minus[tj]
        tt = MUT[tj, tj]
        for xi, x in enumerate(rp.plus):
            ta = rp.pm[M.a(x)[t]]
            term1 = MUT[tj, ta][xi]
            term2 = hm[hm[tt[MU[xi, xi][ta]]]]
            lhs = Am[Am[ta, Nm[term1]], term2]
            rhs = Am[tj, Nm[hm[tt[xi]]]]
            count += 1
            if lhs != rhs:
                bad = {"t": M.label(t), "x": M.label(x)}
                break
        if bad:
            break
    return record("extra condition",
                  "t alpha_x - x mu~_(t, t alpha_x) + t alpha_x mu_(x,x) mu~_(t,t) . 1/4 "
                  "= t - x mu~_(t,t) . 1/2", bad is None, bad if bad else {"pairs": count})


def verify_extra(M: LocalMoufang) -> List[dict]:
    """Check the extra condition and the isomorphism ``M -> M(V)``."""
    V, rp, checks = reconstruct_jordan(M)
    checks = checks + reconstructed_checks(M, V, rp)
    star = extra_condition(M, rp)
    checks.append(star)
    if star["status"] == "fail":
        return checks
    MV = build_MV(V, rp.ep)
    P: ProjectiveSpace = MV.pv
    phi = []
    for x in range(M.n):
        if M.equiv(x, M.inf):
            phi.append(P.second_index[rp.pm[x]])
        else:
            phi.append(P.first(rp.pp[x]))
    verdict, _ = check_homomorphism(M, MV, phi, require_bijective=True)
    checks += verdict.checks
    mue = M.mu(rp.e)
    tau2 = MV.tau
    ok = all(phi[mue[x]] == tau2[phi[x]] for x in range(M.n))
    checks.append(record("swap intertwined", "mu_e phi = phi mu_[e,0]", ok, None))
    ok = all(phi[M.a(y)[x]] == P.alpha(rp.pp[y])[phi[x]] for y in rp.plus for x in range(M.n))
    checks.append(record("root group intertwined", "alpha_x phi = phi alpha_[x,0]", ok, None))
    return checks


# isomorphisms of pairs --------------------------------------------------------------

def _group_isos(A1: np.ndarray, A2: np.ndarray):
    """Yield all isomorphisms between two finite abelian groups given by tables."""
    n = A1.shape[0]
    if A2.shape[0] != n:
        return

    def order(A, x):
        k, y = 1, x
        while y != 0:
            y = A[y, x]
            k += 1
        return k

    ord1 = [order(A1, x) for x in range(n)]
    ord2 = [order(A2, x) for x in range(n)]
    if sorted(ord1) != sorted(ord2):
        return
    gens = []
    span = {0}
    for x in sorted(range(n), key=lambda v: -ord1[v]):
        if x not in span:
            gens.append(x)
            new = set(span)
            frontier = list(span)
            while frontier:
                nxt = []
                for a in frontier:
                    b = int(A1[a, x])
                    if b not in new:
                        new.add(b)
                        nxt.append(b)
                frontier = nxt
            span = new
        if len(span) == n:
            break

    def extend(phi, g, h):
        phi = dict(phi)
        base = list(phi.items())
        mult_g, mult_h = g, h
        for _ in range(ord1[g] - 1):
            for a, b in base:
                s, t = int(A1[a, mult_g]), int(A2[b, mult_h])
                if phi.setdefault(s, t) != t:
                    return None
            mult_g, mult_h = int(A1[mult_g, g]), int(A2[mult_h, h])
        if len(set(phi.values())) != len(phi):
            return None
        return phi

    def search(phi, k):
        if k == len(gens):
            if len(phi) == n:
                yield phi
            return
        g = gens[k]
        for h in range(n):
            if ord2[h] == ord1[g]:
                ext = extend(phi, g, h)
                if ext is not None:
                    yield from search(ext, k + 1)

    yield from search({0: 0}, 0)


def pair_isomorphism(V: JordanPair, W: JordanPair) -> Optional[Tuple[List[int], List[int]]]:
    """Additive bijections ``(h+, h-)`` intertwining ``Q`` on both sides, or None."""
    if V.n != W.n:
        return None
    invV = np.flatnonzero(V.invertible(0))
    if len(invV) == 0:
        return None
    x0 = int(invV[0])
    WQi = W.Q_inverse_table(0)
    for hp in _group_isos(V.A[0], W.A[0]):
        hp_arr = np.array([hp[i] for i in range(V.n[0])])
        hx = hp_arr[x0]
        if not W.invertible(0)[hx]:
            continue
        hm_arr = WQi[hx][hp_arr[V.Q[0][x0]]]
        if len(set(hm_arr.tolist())) != V.n[1]:
            continue
        if not (hm_arr[V.A[1]] == W.A[1][hm_arr[:, None], hm_arr[None, :]]).all():
            continue
        if not (hp_arr[V.Q[0]] == W.Q[0][hp_arr[:, None], hm_arr[None, :]]).all():
            continue
        if not (hm_arr[V.Q[1]] == W.Q[1][hm_arr[:, None], hp_arr[None, :]]).all():
            continue
        return hp_arr.tolist(), hm_arr.tolist()
    return None


def check_pair_map(V: JordanPair, W: JordanPair, hp: Sequence[int], hm: Sequence[int]) -> dict:
    hp = np.asarray(hp)
    hm = np.asarray(hm)
    ok = (len(set(hp.tolist())) == V.n[0] == W.n[0] and len(set(hm.tolist())) == V.n[1] == W.n[1]
          and (hp[V.A[0]] == W.A[0][hp[:, None], hp[None, :]]).all()
          and (hm[V.A[1]] == W.A[1][hm[:, None], hm[None, :]]).all()
          and (hp[V.Q[0]] == W.Q[0][hp[:, None], hm[None, :]]).all()
          and (hm[V.Q[1]] == W.Q[1][hm[:, None], hp[None, :]]).all())
    return record("pair isomorphism", "h+(y Q_x) = h-(y) Q_h+(x) and symmetrically", bool(ok), None)


def roundtrip(V: JordanPair, e: Optional[int] = None) -> List[dict]:
    """``V -> M(V) -> W`` with the explicit maps ``[x,0] -> x``, ``[e,e^-1+y] -> y``."""
    M = build_MV(V, e)
    P: ProjectiveSpace = M.pv
    W, rp, checks = reconstruct_jordan(M)
    checks = checks + reconstructed_checks(M, W, rp)
    # h maps W -> V
    hp = [int(x) for x in rp.plus]                     # point [x,0] has index x
    hm = [P.second_coord(y) for y in rp.minus]
    checks.append(check_pair_map(W, V, hp, hm))
    return checks
