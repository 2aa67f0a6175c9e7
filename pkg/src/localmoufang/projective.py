"""The projective line over a local ring and the ring reconstruction.

Points of ``M(R)`` are ``[1, r]`` for ``r`` in ``R`` and ``[m, 1]`` for ``m``
in the maximal ideal. Matrices act on row vectors from the right.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .action import EquivSet, Perm, compose, inverse
from .localring import Ring, TableRing, ring_ops
from .moufang import (LocalMoufang, MoufangSeed, check_homomorphism, construct,
                      hua_subgroup, is_special, times, with_tau)
from .report import record

Matrix = Tuple[int, int, int, int]


class RequirementError(ValueError):
    """A reconstruction requirement fails. ``requirement`` names it."""

    def __init__(self, requirement: str, message: str, witness=None, checks=None):
        super().__init__(f"{requirement}: {message}")
        self.requirement = requirement
        self.witness = witness
        self.checks = checks or []


class ProjectiveLine:
    """Point bookkeeping for ``P^1(R)``."""

    def __init__(self, R: Ring):
        self.R = R
        ideal = R.ideal
        self.coords: List[Tuple[int, int]] = [(1, r) for r in R.elements] + [(m, 1) for m in ideal]
        self.index: Dict[Tuple[int, int], int] = {c: i for i, c in enumerate(self.coords)}
        labels = [f"[{R.label(a)},{R.label(b)}]" for a, b in self.coords]
        inf_class = -1
        cls = [R.residue(b) if a == 1 else inf_class for a, b in self.coords]
        self.space = EquivSet(labels, cls)

    def normalize(self, a: int, b: int) -> int:
        R = self.R
        if R.is_unit(a):
            return self.index[(1, R.mul(b, R.inv(a)))]
        if R.is_unit(b):
            return self.index[(R.mul(a, R.inv(b)), 1)]
        raise ValueError("not a unimodular pair")

    def act(self, mat: Matrix) -> Perm:
        A, B, C, D = mat
        R = self.R
        out = []
        for a, b in self.coords:
            out.append(self.normalize(R.add(R.mul(a, A), R.mul(b, C)),
                                      R.add(R.mul(a, B), R.mul(b, D))))
        return tuple(out)

    def point(self, a: int, b: int) -> int:
        return self.normalize(a, b)


def build_MR(R: Ring, check: bool = True) -> LocalMoufang:
    """``M(R)`` with ``U`` the upper unipotent matrices and ``tau = [[0,-1],[1,0]]``."""
    P = ProjectiveLine(R)
    one = 1
    U = [P.act((one, r, 0, one)) for r in R.elements]
    tau = P.act((0, R.neg(one), one, 0))
    M = construct(MoufangSeed(P.space, U, tau, P.index[(0, one)], f"M({R.name})"),
                  check_group=check)
    M.line = P
    return M


def mu_closed_form_suite(M: LocalMoufang) -> List[dict]:
    """Compare mu- and Hua maps of ``M(R)`` with their matrix forms."""
    P: ProjectiveLine = M.line
    R = P.R
    checks = []
    w = None
    for x in M.units:
        r = P.coords[x][1]
        mat = (0, R.neg(r), R.inv(r), 0)
        if M.mu(x) != P.act(mat):
            w = M.label(x)
            break
    checks.append(record("mu matrix", "mu_[1,r] = [[0,-r],[r^-1,0]]", w is None, w))
    w = None
    for x in M.units:
        r = P.coords[x][1]
        if M.hua(x) != P.act((R.inv(r), 0, 0, r)):
            w = M.label(x)
            break
    checks.append(record("Hua matrix", "h_[1,r] = diag(r^-1, r), y -> y r^2", w is None, w))
    return checks


# ring reconstruction ------------------------------------------------------------

def ring_requirements(M: LocalMoufang, cap: int = 50000) -> List[dict]:
    """The four requirements for reconstructing a ring."""
    checks = []
    bad = next((M.label(x) for x in M.units if M.tilde(x) != M.minus(x)), None)
    checks.append(record("R1 special", "~x = -x", bad is None, bad))
    ab = next(([M.label(a[M.zero]), M.label(b[M.zero])] for a in M.gens_U for b in M.gens_U
               if compose(a, b) != compose(b, a)), None)
    checks.append(record("R2 abelian U_inf", "U_inf abelian", ab is None, ab))
    H = hua_subgroup(M, cap)
    hg = H[1:40]
    ab = next((True for a in hg for b in hg if compose(a, b) != compose(b, a)), None)
    if ab is None:
        ab = next((True for a in H for b in H if compose(a, b) != compose(b, a)), None) \
            if len(H) <= 400 else None
    checks.append(record("R3 abelian Hua subgroup", "H abelian", ab is None,
                         {"H": len(H)} if ab is None else "non-commuting pair"))
    bad = next((M.label(x) for x in M.units if not M.is_unit(times(M, x, 2))), None)
    checks.append(record("R4 doubling units", "x unit implies x.2 unit", bad is None, bad))
    return checks


class ReconstructedRing:
    """Ring structure on the points not equivalent to infinity."""

    def __init__(self, M: LocalMoufang, e: int):
        self.M = M
        self.e = e
        Me = with_tau(M, M.mu(e))
        self.Me = Me
        self.points = [x for x in range(M.n) if not M.equiv(x, M.inf)]
        self.pos = {x: i for i, x in enumerate(self.points)}
        self.half = {times(M, y, 2): y for y in self.points}
        self._R: Dict[int, List[int]] = {}

    def add(self, x: int, y: int) -> int:
        return self.M.add(x, y)

    def neg(self, x: int) -> int:
        return self.M.minus(x)

    def h(self, y: int) -> Perm:
        return self.Me.hua_tau(y)

    def R_map(self, y: int) -> List[int]:
        """``x -> x R_y`` as a list indexed by point."""
        if y in self._R:
            return self._R[y]
        M = self.M
        add, neg, e = self.add, self.neg, self.e
        out = [0] * M.n
        if M.is_unit(y):
            ye = add(e, y)
            hy = self.h(y)
            if M.is_unit(ye):
                h1 = self.h(ye)
                for x in self.points:
                    out[x] = add(add(h1[x], neg(hy[x])), neg(x))
            else:
                h1 = self.h(add(neg(e), y))
                for x in self.points:
                    out[x] = add(add(neg(h1[x]), x), hy[x])
        else:
            e2 = add(e, e)
            h1 = self.h(add(e2, y))
            h2 = self.h(add(e, y))
            h3 = self.h(neg(e2))
            for x in self.points:
                out[x] = add(add(add(h1[x], neg(h2[x])), neg(h3[x])), x)
        self._R[y] = out
        return out

    def mul(self, x: int, y: int) -> int:
        return self.half[self.R_map(y)[x]]

    def table_ring(self) -> Tuple[TableRing, List[int]]:
        """A :class:`TableRing` with 0 and ``e`` at indices 0 and 1.

        Returns the ring and the list of points in index order.
        """
        M = self.M
        order = [M.zero, self.e] + [x for x in self.points if x not in (M.zero, self.e)]
        idx = {x: i for i, x in enumerate(order)}
        addt = [[idx[self.add(x, y)] for y in order] for x in order]
        mult = [[idx[self.mul(x, y)] for y in order] for x in order]
        labels = [M.label(x) for x in order]
        R = TableRing(f"R({M.name}, e={M.label(self.e)})", addt, mult, labels)
        return R, order


def reconstruct_ring(M: LocalMoufang, e: Optional[int] = None, cap: int = 50000):
    """Reconstruct the coordinate ring from ``M`` and the unit ``e``.

    Returns ``(ring, points, checks)`` where ``points[i]`` is the point
    carrying ring element ``i``. Raises :class:`RequirementError` when one of
    the four requirements fails.
    """
    req = ring_requirements(M, cap)
    bad = next((c for c in req if c["status"] == "fail"), None)
    if bad is not None:
        raise RequirementError(bad["name"].split()[0], bad["name"], bad["witness"], req)
    if e is None:
        e = M.least_unit()
    if not M.is_unit(e):
        raise ValueError(f"{M.label(e)} is not a unit")
    rec = ReconstructedRing(M, e)
    R, order = rec.table_ring()
    checks = list(req)
    checks += [c for c in ring_ops(R) if c["name"] not in ("involution", "eps central with eps eps* = 1")]
    ok = all(R.mul(1, x) == x for x in R.elements)
    checks.append(record("identity element", "e x = x", ok, None))
    bad = None
    for i, x in enumerate(order):
        if M.is_unit(x):
            xi = order.index(M.mu(e)[M.minus(x)])
            if R.mul(i, xi) != 1:
                bad = M.label(x)
                break
    checks.append(record("inverse", "x^-1 = (-x) mu_e", bad is None, bad))
    ok = set(R.ideal) == {i for i, x in enumerate(order) if M.equiv(x, M.zero)}
    checks.append(record("maximal ideal", "m = class of 0", ok, None))
    return R, order, checks


def verify_star(M: LocalMoufang, e: Optional[int] = None, cap: int = 50000) -> List[dict]:
    """Check the extra condition for the ring reconstruction and the isomorphism."""
    if e is None:
        e = M.least_unit()
    R, order, checks = reconstruct_ring(M, e, cap)
    rec = ReconstructedRing(M, e)
    mue = M.mu(e)
    m2e = M.minus(M.add(e, e))
    a2 = M.a(m2e)
    bad = None
    count = 0
    for x in range(M.n):
        if not M.equiv(x, M.zero):
            continue
        Rx = rec.R_map(x)
        for y in rec.points:
            lhs = M.a(y)[mue[x]]
            z = mue[a2[Rx[y]]]
            if M.equiv(z, M.inf):
                bad = {"x": M.label(x), "y": M.label(y), "reason": "R_x undefined"}
                break
            rhs = mue[Rx[z]]
            count += 1
            if lhs != rhs:
                bad = {"x": M.label(x), "y": M.label(y)}
                break
        if bad:
            break
    checks.append(record("star condition",
                         "x mu_e alpha_y = y R_x alpha_{-2e} mu_e R_x mu_e for x ~ 0",
                         bad is None, bad if bad else {"pairs": count}))
    MR = build_MR(R, check=False)
    P: ProjectiveLine = MR.line
    pos = {x: i for i, x in enumerate(order)}
    phi = []
    for x in range(M.n):
        if M.equiv(x, M.inf):
            phi.append(P.index[(R.neg(pos[mue[x]]), 1)])
        else:
            phi.append(P.index[(1, pos[x])])
    verdict, _ = check_homomorphism(M, MR, phi, require_bijective=True)
    checks += verdict.checks
    tau2 = P.act((0, 1, R.neg(1), 0))
    ok = all(phi[mue[x]] == tau2[phi[x]] for x in range(M.n))
    checks.append(record("swap intertwined", "mu_e phi = phi [[0,e],[-e,0]]", ok, None))
    ok = all(phi[M.a(y)[x]] == P.act((1, pos[y], 0, 1))[phi[x]]
             for y in rec.points for x in range(M.n))
    checks.append(record("root group intertwined", "alpha_x phi = phi [[e,x],[0,e]]", ok, None))
    return checks


def ring_iso_check(R1: Ring, R2: Ring) -> Optional[List[int]]:
    """An isomorphism ``R1 -> R2`` as an image list, or None."""
    if R1.n != R2.n or len(R1.units) != len(R2.units):
        return None

    def add_order(R, x):
        k, y = 1, x
        while y != 0:
            y = R.add(y, x)
            k += 1
        return k

    if add_order(R1, 1) != add_order(R2, 1):
        return None

    def signature(R, x):
        pw = [x]
        for _ in range(3):
            pw.append(R.mul(pw[-1], x))
        return (add_order(R, x), R.is_unit(x), tuple(p == 0 for p in pw))

    sig2: Dict[tuple, List[int]] = {}
    for y in R2.elements:
        sig2.setdefault(signature(R2, y), []).append(y)

    def extend(phi: Dict[int, int]) -> Optional[Dict[int, int]]:
        phi = dict(phi)
        changed = True
        while changed:
            changed = False
            keys = list(phi)
            for a in keys:
                for b in keys:
                    for val, img in ((R1.add(a, b), R2.add(phi[a], phi[b])),
                                     (R1.mul(a, b), R2.mul(phi[a], phi[b]))):
                        old = phi.get(val)
                        if old is None:
                            phi[val] = img
                            changed = True
                        elif old != img:
                            return None
            if len(set(phi.values())) != len(phi):
                return None
        return phi

    base = extend({0: 0, 1: 1})
    if base is None:
        return None

    def search(phi):
        if len(phi) == R1.n:
            return phi
        g = next(x for x in R1.elements if x not in phi)
        used = set(phi.values())
        for y in sig2.get(signature(R1, g), []):
            if y in used:
                continue
            ext = extend({**phi, g: y})
            if ext is not None:
                found = search(ext)
                if found is not None:
                    return found
        return None

    found = search(base)
    if found is None:
        return None
    return [found[x] for x in R1.elements]


def reduction_map(M: LocalMoufang, Mbar: LocalMoufang) -> List[int]:
    """Map a projective line ``M(R)`` onto ``M(k)`` by reducing coordinates."""
    P: ProjectiveLine = M.line
    Q: ProjectiveLine = Mbar.line
    R, k = P.R, Q.R
    red = {}
    for r in R.elements:
        red[r] = next(s for s in k.elements if k.residue(s) == R.residue(r)) \
            if k.n == R.residue_size() else None
    out = []
    for a, b in P.coords:
        if a == 1:
            out.append(Q.index[(1, red[b])])
        else:
            out.append(Q.index[(0, 1)])
    return out
