"""Local Moufang sets built from a root group ``U`` and a swap ``tau``.

Given a permutation group ``U`` of an equivalence set fixing a point ``inf``
and a permutation ``tau`` exchanging ``inf`` with a point ``0`` (up to
equivalence), :func:`construct` produces all derived data: the maps
``alpha_x``, root groups ``U_x``, ``-x``, ``~x``, the mu-maps and Hua maps.
The checks in this module decide whether the result is a local Moufang set
and verify the standard identities among the derived maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .action import (CLOSURE_CAP, CapExceeded, EquivSet, Perm, closure, compose,
                     compose_all, conj, identity, induced, inverse, is_group,
                     small_generating_set)
from .report import record

# LM1 enumerates every root group when n^2 |U| stays below this bound
LM1_FULL_LIMIT = 4_000_000


class SeedError(ValueError):
    """The seed violates a construction condition. ``axiom`` names it."""

    def __init__(self, axiom: str, message: str, witness=None):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = witness


@dataclass
class MoufangSeed:
    space: EquivSet
    U: List[Perm]
    tau: Perm
    inf: int
    name: str = ""


@dataclass
class Verdict:
    ok: bool
    checks: List[dict]

    @property
    def failure(self) -> Optional[dict]:
        return next((c for c in self.checks if c["status"] == "fail"), None)


class LocalMoufang:
    """Derived data of the construction ``M(U, tau)``."""

    def __init__(self, seed: MoufangSeed):
        self.seed = seed
        self.name = seed.name
        self.space = seed.space
        self.n = seed.space.n
        self.U = list(seed.U)
        self.tau = tuple(seed.tau)
        self.tau_inv = inverse(self.tau)
        self.inf = seed.inf
        self.zero = self.tau[self.inf]
        sp = self.space
        self.alpha: List[Optional[Perm]] = [None] * self.n
        for u in self.U:
            self.alpha[u[self.zero]] = u
        self.U0 = [conj(u, self.tau) for u in self.U]
        # element of U_0 sending inf to y, for y not equivalent to 0
        self.u0_to: List[Optional[Perm]] = [None] * self.n
        for g in self.U0:
            self.u0_to[g[self.inf]] = g
        self.units = [x for x in range(self.n)
                      if not sp.equiv(x, self.inf) and not sp.equiv(x, self.zero)]
        self._unit_set = set(self.units)
        self._root: Dict[int, List[Perm]] = {}
        self._root_set: Dict[int, set] = {}
        self._mu: Dict[int, Perm] = {}
        self._gens_U: Optional[List[Perm]] = None
        self.U_set = set(self.U)
        self.U0_set = set(self.U0)

    # labels --------------------------------------------------------------
    def label(self, x: int) -> str:
        return self.space.labels[x]

    def point(self, label: str) -> int:
        return self.space.point(label)

    def is_unit(self, x: int) -> bool:
        return x in self._unit_set

    def equiv(self, x: int, y: int) -> bool:
        return self.space.equiv(x, y)

    # basic maps ------------------------------------------------------------
    def a(self, x: int) -> Perm:
        """``alpha_x``: the element of ``U`` sending 0 to ``x``."""
        g = self.alpha[x]
        if g is None:
            raise ValueError(f"alpha is undefined at {self.label(x)} (equivalent to infinity)")
        return g

    def gamma(self, x: int) -> Perm:
        """``gamma_x = alpha_x^tau``, defined for ``x`` not equivalent to infinity."""
        return conj(self.a(x), self.tau)

    def minus(self, x: int) -> int:
        return inverse(self.a(x))[self.zero]

    def tilde(self, x: int) -> int:
        """``~x = (-(x tau^-1)) tau`` for ``x`` not equivalent to 0."""
        return self.tau[self.minus(self.tau_inv[x])]

    def add(self, x: int, y: int) -> int:
        """``x + y = 0 alpha_x alpha_y`` on points not equivalent to infinity."""
        return self.a(y)[self.a(x)[self.zero]]

    def root_group(self, x: int) -> List[Perm]:
        if x not in self._root:
            if self.equiv(x, self.inf):
                g = self.gamma(self.tau_inv[x])
                self._root[x] = [conj(u, g) for u in self.U]
            else:
                g = self.a(x)
                self._root[x] = [conj(u, g) for u in self.U0]
            self._root_set[x] = set(self._root[x])
        return self._root[x]

    def root_set(self, x: int) -> set:
        self.root_group(x)
        return self._root_set[x]

    def conjugator(self, x: int) -> Perm:
        """``g`` with ``U_x = U_0^g`` (``x`` not ~ inf) or ``U_x = U^g`` (``x`` ~ inf)."""
        if self.equiv(x, self.inf):
            return self.gamma(self.tau_inv[x])
        return self.a(x)

    def in_root(self, x: int, p: Perm) -> bool:
        """Membership ``p in U_x`` without listing ``U_x``."""
        if x in self._root_set:
            return p in self._root_set[x]
        g = self.conjugator(x)
        base = self.U_set if self.equiv(x, self.inf) else self.U0_set
        return conj(p, inverse(g)) in base

    def root_gens(self, x: int) -> List[Perm]:
        if self.equiv(x, self.inf):
            g = self.gamma(self.tau_inv[x])
            return [conj(u, g) for u in self.gens_U]
        g = self.a(x)
        return [conj(u, g) for u in self.gens_U0]

    @property
    def gens_U(self) -> List[Perm]:
        if self._gens_U is None:
            self._gens_U = small_generating_set(self.U, self.n)
        return self._gens_U

    @property
    def gens_U0(self) -> List[Perm]:
        return [conj(u, self.tau) for u in self.gens_U]

    @property
    def gens_G(self) -> List[Perm]:
        return self.gens_U + self.gens_U0

    def mu(self, x: int) -> Perm:
        """The unique ``g alpha_x h`` with ``g, h`` in ``U_0`` swapping 0 and infinity."""
        if not self.is_unit(x):
            raise ValueError(f"{self.label(x)} is not a unit")
        if x not in self._mu:
            g = self.u0_to[self.minus(x)]
            h = inverse(self.u0_to[x])
            self._mu[x] = compose_all((g, self.a(x), h), self.n)
        return self._mu[x]

    def mu_formula(self, x: int) -> Perm:
        """``alpha^tau_{(-x) tau^-1} alpha_x alpha^tau_{-(x tau^-1)}``."""
        left = self.gamma(self.tau_inv[self.minus(x)])
        right = self.gamma(self.minus(self.tau_inv[x]))
        return compose_all((left, self.a(x), right), self.n)

    def hua(self, x: int) -> Perm:
        """Hua map as the word ``tau alpha_x tau^-1 alpha_{-(x tau^-1)} tau alpha_{-~x}``."""
        return compose_all((self.tau, self.a(x), self.tau_inv,
                            self.a(self.minus(self.tau_inv[x])), self.tau,
                            self.a(self.minus(self.tilde(x)))), self.n)

    def hua_tau(self, x: int) -> Perm:
        """``h_{x, tau} = tau mu_x``."""
        return compose(self.tau, self.mu(x))

    def least_unit(self) -> int:
        return self.units[0]


def _is_group_by_closure(elements: Sequence[Perm], n: int) -> bool:
    """True when the listed permutations are closed under products."""
    members = set(elements)
    if identity(n) not in members:
        return False
    gens: List[Perm] = []
    span = {identity(n)}
    for g in elements:
        if g not in span:
            gens.append(g)
            try:
                span = set(closure(gens, n, cap=len(members)))
            except CapExceeded:
                return False
    return span == members


def construct(seed: MoufangSeed, check_group: bool = True) -> LocalMoufang:
    """Validate the seed conditions and build the derived data.

    Raises :class:`SeedError` naming the violated condition.
    """
    sp = seed.space
    n = sp.n
    inf = seed.inf
    tau = tuple(seed.tau)
    if len(sp.classes) < 3:
        raise SeedError("classes", "need at least three equivalence classes",
                        len(sp.classes))
    for p in list(seed.U) + [tau]:
        if len(p) != n or sorted(p) != list(range(n)):
            raise SeedError("perm", "not a permutation of the point set")
        if not sp.preserves(p):
            raise SeedError("perm", "does not preserve the equivalence")
    if check_group and not _is_group_by_closure(seed.U, n):
        raise SeedError("C1", "U is not a group")
    zero = tau[inf]
    if sp.equiv(zero, inf):
        raise SeedError("C2", "inf tau is equivalent to inf", sp.labels[zero])
    if tau[zero] != inf:
        raise SeedError("C2", "inf tau^2 differs from inf", sp.labels[tau[zero]])
    outside = [x for x in range(n) if not sp.equiv(x, inf)]
    for u in seed.U:
        if u[inf] != inf:
            raise SeedError("C1", "U does not fix infinity", sp.labels[u[inf]])
    images = {u[zero] for u in seed.U}
    if len(images) != len(seed.U) or images != set(outside):
        raise SeedError("C1", "U is not regular off the class of infinity",
                        sorted(sp.labels[x] for x in set(outside) - images)[:3])
    ind = {induced(u, sp) for u in seed.U}
    others = [c for c in range(len(sp.classes)) if c != sp.cls[inf]]
    orbit = {g[sp.cls[zero]] for g in ind}
    if len(ind) != len(others) or orbit != set(others):
        raise SeedError("C1'", "induced U is not regular on the other classes",
                        {"induced_order": len(ind), "classes": len(others)})
    return LocalMoufang(seed)


def with_tau(M: LocalMoufang, tau: Perm) -> LocalMoufang:
    """Rebuild ``M(U, tau')`` with the same ``U``."""
    return construct(MoufangSeed(M.space, M.U, tau, M.inf, M.name), check_group=False)


def _labels(M: LocalMoufang, *pts: int) -> List[str]:
    return [M.label(x) for x in pts]


# axioms ------------------------------------------------------------------

def is_local_moufang(M: LocalMoufang) -> Verdict:
    """Check the axioms LM0, LM1, LM1', LM2 and the Hua criterion."""
    sp = M.space
    n = M.n
    checks = []

    ind_U = [induced(u, sp) for u in M.U]
    ind_U0 = [induced(u, sp) for u in M.U0]
    ind_sets = {}
    for x in range(n):
        g = induced(M.conjugator(x), sp)
        base = ind_U if sp.equiv(x, M.inf) else ind_U0
        ind_sets[x] = frozenset(conj(u, g) for u in base)
    w = None
    for members in sp.classes:
        ref = ind_sets[members[0]]
        for y in members[1:]:
            if ind_sets[y] != ref:
                w = _labels(M, members[0], y)
                break
        if w:
            break
    checks.append(record("LM0", "x ~ y implies induced U_x = induced U_y", w is None, w))

    # U_x is a conjugate of U_0 or U by an element moving 0 or inf to x, so
    # regularity at 0 and inf implies it everywhere; all points are still
    # enumerated when that is cheap.
    w = None
    points = range(n) if n * n * len(M.U) <= LM1_FULL_LIMIT else (M.zero, M.inf)
    for x in points:
        Ux = M.root_group(x)
        if any(u[x] != x for u in Ux):
            w = {"point": M.label(x), "reason": "U_x moves x"}
            break
        outside = [y for y in range(n) if not sp.equiv(x, y)]
        orb = {u[outside[0]] for u in Ux}
        if len(Ux) != len(outside) or orb != set(outside):
            w = {"point": M.label(x), "reason": "not sharply transitive"}
            break
    checks.append(record("LM1", "U_x fixes x and is regular on X minus [x]", w is None, w))

    w = None
    for x in range(n):
        ind = ind_sets[x]
        others = [c for c in range(len(sp.classes)) if c != sp.cls[x]]
        orb = {g[others[0]] for g in ind}
        if len(ind) != len(others) or orb != set(others):
            w = {"point": M.label(x), "induced_order": len(ind)}
            break
    checks.append(record("LM1'", "induced U_x is regular on the other classes", w is None, w))

    w = None
    for g in M.gens_G:
        for x in range(n):
            if any(not M.in_root(g[x], conj(u, g)) for u in M.root_gens(x)):
                w = {"point": M.label(x), "image": M.label(g[x])}
                break
        if w:
            break
    checks.append(record("LM2", "U_x^g = U_{xg} for g in a generating set of G",
                         w is None, w))

    w = None
    for x in M.units:
        h = M.hua(x)
        if any(conj(u, h) not in M.U_set for u in M.gens_U):
            w = M.label(x)
            break
    checks.append(record("hua maps normalize U", "U^{h_x} = U for every unit x",
                         w is None, w))
    return Verdict(all(c["status"] != "fail" for c in checks), checks)


# group structure ---------------------------------------------------------

def hua_subgroup(M: LocalMoufang, cap: int = CLOSURE_CAP) -> List[Perm]:
    """``H = <mu_x mu_y>`` generated by products of two mu-maps."""
    e = M.least_unit()
    gens = list(dict.fromkeys(compose(M.mu(e), M.mu(y)) for y in M.units))
    gens += [compose(M.mu(x), M.mu(e)) for x in M.units]
    gens = list(dict.fromkeys(gens))
    H = closure(gens, M.n, cap, "Hua subgroup")
    # every mu_x mu_y lies in the group generated above
    Hs = set(H)
    for x in M.units:
        for y in M.units:
            if compose(M.mu(x), M.mu(y)) not in Hs:
                H = closure(gens + [compose(M.mu(x), M.mu(y))], M.n, cap, "Hua subgroup")
                Hs = set(H)
    return H


def little_projective_group(M: LocalMoufang, cap: int = CLOSURE_CAP) -> List[Perm]:
    return closure(M.gens_G, M.n, cap, "little projective group")


def kernel_U0(M: LocalMoufang) -> List[Perm]:
    """Elements of ``U_0`` acting trivially on the classes."""
    triv = identity(len(M.space.classes))
    return [g for g in M.U0 if induced(g, M.space) == triv]


def bruhat_decompose(M: LocalMoufang, g: Perm, Hset: set):
    """Write ``g`` as ``u h v`` or ``u h tau w``; return the parts or None."""
    sp = M.space
    if not sp.equiv(g[M.zero], M.inf):
        v = M.a(g[M.zero])
        rest = compose(g, inverse(v))
        cell = "big"
        tail = v
    else:
        w = M.u0_to[g[M.zero]]
        if w is None:
            return None
        rest = compose_all((g, inverse(w), M.tau_inv), M.n)
        cell = "small"
        tail = w
    y = inverse(rest)[M.inf]
    if sp.equiv(y, M.zero):
        return None
    u_inv = M.u0_to[y]
    u = inverse(u_inv)
    h = compose(u_inv, rest)
    if h not in Hset:
        return None
    return cell, u, h, tail


def verify_hua_theorem(M: LocalMoufang, cap: int = CLOSURE_CAP, seed: int = 0,
                       samples: int = 200) -> Verdict:
    """Hua subgroup equals the two-point stabilizer, ``G_0 = U_0 H``, Bruhat cells.

    When ``G`` exceeds ``cap`` the decomposition checks run on seeded random
    elements and are reported as sampled.
    """
    checks = []
    H = hua_subgroup(M, cap)
    Hset = set(H)
    kern = kernel_U0(M)
    kern_expected = {M.gamma(x) for x in range(M.n) if M.equiv(x, M.zero)}
    ok = set(kern) == kern_expected
    checks.append(record("kernel of U_0 on classes", "U_0 kernel = {gamma_x : x ~ 0}", ok,
                         None if ok else {"kernel": len(kern), "expected": len(kern_expected)}))
    hua_in = all(h[M.zero] == M.zero and h[M.inf] == M.inf for h in map(M.hua, M.units))
    checks.append(record("Hua maps fix 0 and infinity", "h_x in G_{0,inf}", hua_in,
                         None))
    try:
        G = little_projective_group(M, cap)
    except CapExceeded:
        G = None
    if G is not None:
        stab = [g for g in G if g[M.zero] == M.zero and g[M.inf] == M.inf]
        ok = set(stab) == Hset
        checks.append(record("H = G_{0,inf}", "H = G_{0,inf}", ok,
                             {"H": len(H), "G_0_inf": len(stab)}))
        G0 = {g for g in G if g[M.zero] == M.zero}
        prods = {compose(u, h) for u in M.U0 for h in H}
        ok = prods == G0 and len(prods) == len(M.U0) * len(H)
        checks.append(record("G_0 = U_0 H", "G_0 = U_0 H", ok,
                             {"G_0": len(G0), "U_0 H": len(prods)}))
        big = {compose_all((u, h, v), M.n) for u in M.U0 for h in H for v in M.U}
        small = {compose_all((u, h, M.tau, w), M.n) for u in M.U0 for h in H for w in kern}
        Gset = set(G)
        sizes_ok = (len(big) == len(M.U0) * len(H) * len(M.U)
                    and len(small) == len(M.U0) * len(H) * len(kern))
        ok = sizes_ok and not (big & small) and (big | small) == Gset
        split_ok = all((g in small) == M.equiv(g[M.zero], M.inf) for g in G)
        checks.append(record("Bruhat decomposition",
                             "G = U_0 H U_inf disjoint union U_0 H tau U_0 kernel",
                             ok and split_ok,
                             {"G": len(G), "big_cell": len(big), "small_cell": len(small),
                              "H": len(H)}))
    else:
        rng = random.Random(seed)
        gens = M.gens_G
        bad = None
        for _ in range(samples):
            g = identity(M.n)
            for _ in range(rng.randrange(1, 40)):
                g = compose(g, rng.choice(gens))
            parts = bruhat_decompose(M, g, Hset)
            if parts is None:
                bad = "no decomposition"
                break
            cell, u, h, tail = parts
            word = (u, h, tail) if cell == "big" else (u, h, M.tau, tail)
            if compose_all(word, M.n) != g:
                bad = "decomposition mismatch"
                break
        checks.append(record("Bruhat decomposition", "G = U_0 H U_inf disjoint union "
                             "U_0 H tau U_0 kernel", bad is None,
                             {"samples": samples, "seed": seed, "H": len(H)} if bad is None
                             else bad, "sampled"))
    return Verdict(all(c["status"] != "fail" for c in checks), checks)


# identities ----------------------------------------------------------------

def mu_identity_suite(M: LocalMoufang, alt_taus: Optional[Sequence[Perm]] = None,
                      brute_limit: int = 1 << 16) -> List[dict]:
    """The mu-map identities, exhaustively over all units."""
    n = M.n
    units = M.units
    checks = []
    if alt_taus is None:
        alt_taus = [M.tau_inv]
        other = next((M.mu(e) for e in units if M.mu(e) != M.tau), None)
        if other is not None:
            alt_taus.append(other)
    alts = [with_tau(M, t) for t in alt_taus]

    if len(M.U0) ** 2 * len(units) <= brute_limit:
        bad = None
        for x in units:
            found = [(g, h) for g in M.U0 for h in M.U0
                     if (lambda m: m[M.zero] == M.inf and m[M.inf] == M.zero)(
                         compose_all((g, M.a(x), h), n))]
            if len(found) != 1 or compose_all((found[0][0], M.a(x), found[0][1]), n) != M.mu(x):
                bad = M.label(x)
                break
        checks.append(record("mu uniqueness", "unique g alpha_x h swapping 0 and inf",
                             bad is None, bad))

    def each(name, anchor, pred):
        w = next((M.label(x) for x in units if not pred(x)), None)
        checks.append(record(name, anchor, w is None, w))

    each("mu (i)", "mu_x independent of tau",
         lambda x: all(A.mu(x) == M.mu(x) for A in alts))
    each("mu (ii)", "mu_x = alpha^tau_{(-x)tau^-1} alpha_x alpha^tau_{-(x tau^-1)}",
         lambda x: M.mu_formula(x) == M.mu(x))
    each("mu (iii)", "mu_{-x} = mu_x^-1",
         lambda x: M.mu(M.minus(x)) == inverse(M.mu(x)))
    each("mu (iv)", "mu_{x tau} = mu_{-x}^tau",
         lambda x: M.mu(M.tau[x]) == conj(M.mu(M.minus(x)), M.tau))
    each("mu (v)", "mu_x = alpha_x alpha^tau_{-(x tau^-1)} alpha_{-~x}",
         lambda x: compose_all((M.a(x), M.gamma(M.minus(M.tau_inv[x])),
                                M.a(M.minus(M.tilde(x)))), n) == M.mu(x))
    each("mu (vi)", "~x = -((-x) mu_x)",
         lambda x: M.tilde(x) == M.minus(M.mu(x)[M.minus(x)]))
    each("mu (vii)", "~x independent of tau",
         lambda x: all(A.tilde(x) == M.tilde(x) for A in alts))

    def viii(x):
        mx = M.minus(x)
        rhs = compose_all((M.a(M.minus(M.tilde(x))), M.mu(mx), M.a(x), M.mu(mx),
                           M.a(M.tilde(mx))), n)
        return rhs == M.mu(mx)
    each("mu (viii)", "mu_{-x} = alpha_{-~x} mu_{-x} alpha_x mu_{-x} alpha_{~(-x)}", viii)
    each("hua word", "h_x = tau mu_x", lambda x: M.hua(x) == M.hua_tau(x))
    return checks


def hua_identity_suite(M: LocalMoufang) -> List[dict]:
    n = M.n
    units = M.units
    checks = []
    Mi = with_tau(M, M.tau_inv)

    def each(name, anchor, pred):
        w = next((M.label(x) for x in units if not pred(x)), None)
        checks.append(record(name, anchor, w is None, w))

    def pairs(name, anchor, pred):
        w = next((_labels(M, x, y) for x in units for y in units if not pred(x, y)), None)
        checks.append(record(name, anchor, w is None, w))

    each("hua (i)", "h_{x, tau^-1} = h_{x tau, tau}^-1",
         lambda x: Mi.hua_tau(x) == inverse(M.hua_tau(M.tau[x])))
    pairs("hua (ii)", "mu_{x h_y} = mu_x^{h_y}",
          lambda x, y: M.mu(M.hua(y)[x]) == conj(M.mu(x), M.hua(y)))
    each("hua (iii)", "h_{x tau} = h_{-x}^tau",
         lambda x: M.hua(M.tau[x]) == conj(M.hua(M.minus(x)), M.tau))
    pairs("hua (iv)", "h_{x h_y} = h_{-y} h_{x tau}^-1 h_y",
          lambda x, y: M.hua(M.hua(y)[x]) == compose_all(
              (M.hua(M.minus(y)), inverse(M.hua(M.tau[x])), M.hua(y)), n))
    nonfin = [y for y in range(n) if not M.equiv(y, M.inf)]
    w = next((_labels(M, x, y) for x in units for y in nonfin
              if conj(M.a(y), M.hua(x)) != M.a(M.hua(x)[y])), None)
    checks.append(record("hua automorphism", "alpha_y^{h_x} = alpha_{y h_x}", w is None, w))
    return checks


def sum_formula_suite(M: LocalMoufang) -> List[dict]:
    n = M.n
    checks = []
    w1 = w2 = w3 = None
    for x in M.units:
        for y in M.units:
            if M.equiv(x, y):
                continue
            z = M.tau[M.a(M.minus(M.tau_inv[y]))[M.tau_inv[x]]]
            if not M.is_unit(z):
                w1 = w1 or _labels(M, x, y)
                continue
            if w1 is None and z != M.a(M.tilde(y))[M.mu(y)[M.a(M.minus(y))[x]]]:
                w1 = _labels(M, x, y)
            if w2 is None and M.tilde(z) != M.a(M.tilde(x))[M.mu(x)[M.a(M.minus(x))[y]]]:
                w2 = _labels(M, x, y)
            ymx = M.a(M.minus(x))[y]
            if w3 is None and compose_all((M.mu(y), M.mu(z), M.mu(M.minus(x))), n) != M.mu(ymx):
                w3 = _labels(M, x, y)
    checks.append(record("sum formula z", "z = x alpha_{-y} mu_y alpha_{~y}", w1 is None, w1))
    checks.append(record("sum formula ~z", "~z = y alpha_{-x} mu_x alpha_{~x}", w2 is None, w2))
    checks.append(record("sum formula mu", "mu_y mu_z mu_{-x} = mu_{y alpha_{-x}}",
                         w3 is None, w3))
    return checks


def quasi_invertible(M: LocalMoufang, x: int, y: int) -> bool:
    return (not M.equiv(M.tau[x], M.minus(y))) or M.equiv(x, M.zero) or M.equiv(y, M.zero)


def quasi_inverse(M: LocalMoufang, x: int, y: int) -> Optional[Tuple[int, int]]:
    """Left and right quasi-inverses ``(x^y-left, x^y-right)`` or None."""
    if M.equiv(x, M.inf) or M.equiv(y, M.inf):
        raise ValueError("quasi-inverse needs points not equivalent to infinity")
    if not quasi_invertible(M, x, y):
        return None
    left = M.gamma(M.minus(x))[M.minus(y)]
    right = M.minus(conj(M.a(y), M.tau_inv)[x])
    return left, right


def quasi_inverse_suite(M: LocalMoufang) -> List[dict]:
    n = M.n
    pts = [x for x in range(n) if not M.equiv(x, M.inf)]
    w1 = w2 = None
    count = 0
    for x in pts:
        for y in pts:
            q = quasi_inverse(M, x, y)
            if q is None:
                continue
            count += 1
            left, right = q
            lhs = compose_all((M.a(left), M.gamma(x), M.a(y), M.gamma(right)), n)
            if not M.equiv(y, M.zero) and w1 is None:
                if not M.is_unit(left) or lhs != compose(M.mu(left), M.mu(y)):
                    w1 = _labels(M, x, y)
            if not M.equiv(x, M.zero) and w2 is None:
                if not M.is_unit(right) or lhs != compose(M.mu(right), M.mu(x)):
                    w2 = _labels(M, x, y)
    return [
        record("quasi-inverse left", "alpha_{xy} alpha_x^tau alpha_y alpha^tau_{x^y} = "
               "mu_{xy} mu_y", w1 is None, w1 if w1 else {"pairs": count}),
        record("quasi-inverse right", "alpha_{xy} alpha_x^tau alpha_y alpha^tau_{x^y} = "
               "mu_{x^y} mu_x", w2 is None, w2 if w2 else {"pairs": count}),
    ]


# multiples -------------------------------------------------------------------

def times(M: LocalMoufang, x: int, k: int) -> int:
    """``x . k = 0 alpha_x^k`` for ``x`` not equivalent to infinity."""
    g = M.a(x) if k >= 0 else inverse(M.a(x))
    y = M.zero
    for _ in range(abs(k)):
        y = g[y]
    return y


def times_tilde(M: LocalMoufang, x: int, k: int) -> int:
    """``x .~ k = inf gamma_{x tau^-1}^k`` for ``x`` not equivalent to 0."""
    g = M.gamma(M.tau_inv[x])
    if k < 0:
        g = inverse(g)
    y = M.inf
    for _ in range(abs(k)):
        y = g[y]
    return y


def div(M: LocalMoufang, x: int, k: int) -> int:
    """The unique ``y`` with ``y . k = x``."""
    sols = [y for y in range(M.n) if not M.equiv(y, M.inf) and times(M, y, k) == x]
    if len(sols) != 1:
        raise ValueError(f"{M.label(x)} has {len(sols)} solutions of y.{k} = x")
    return sols[0]


def div_tilde(M: LocalMoufang, x: int, k: int) -> int:
    sols = [y for y in range(M.n) if not M.equiv(y, M.zero) and times_tilde(M, y, k) == x]
    if len(sols) != 1:
        raise ValueError(f"{M.label(x)} has {len(sols)} solutions of y.~{k} = x")
    return sols[0]


# special local Moufang sets ------------------------------------------------------

def is_special(M: LocalMoufang) -> bool:
    return all(M.tilde(x) == M.minus(x) for x in M.units)


def special_suite(M: LocalMoufang, ell: int = 2) -> List[dict]:
    """Properties of special local Moufang sets with abelian root groups."""
    n = M.n
    units = M.units
    checks = []
    w = next((M.label(x) for x in units if M.tilde(x) != M.minus(x)), None)
    checks.append(record("special", "~x = -x", w is None, w))
    ab = all(compose(a, b) == compose(b, a) for a in M.gens_U for b in M.gens_U) and \
        all(compose(a, b) == compose(b, a) for a in M.gens_U0 for b in M.gens_U0)
    checks.append(record("abelian root groups", "U_inf and U_0 abelian", ab, None))
    big = len(M.space.classes) > 3
    checks.append(record("more than three classes", "|X/~| > 3", big,
                         len(M.space.classes)))

    def each(name, anchor, pred):
        w = next((M.label(x) for x in units if not pred(x)), None)
        checks.append(record(name, anchor, w is None, w))

    ident = identity(n)
    each("mu involution", "mu_x^2 = 1", lambda x: compose(M.mu(x), M.mu(x)) == ident)
    each("h_x = h_{-x}", "h_x = h_{-x}", lambda x: M.hua(x) == M.hua(M.minus(x)))
    each("h_{x tau} = h_x^-1", "h_{x tau} = h_x^-1",
         lambda x: M.hua(M.tau[x]) == inverse(M.hua(x)))
    w = next((_labels(M, x, y) for x in units for y in units
              if compose_all((M.hua(x), M.hua(y), M.hua(x)), n) != M.hua(M.hua(x)[y])), None)
    checks.append(record("h_x h_y h_x = h_{y h_x}", "h_x h_y h_x = h_{y h_x}", w is None, w))

    # unique divisibility of U_inf by ell
    nonfin = [x for x in range(n) if not M.equiv(x, M.inf)]
    image = [times(M, x, ell) for x in nonfin]
    ok = len(set(image)) == len(nonfin)
    checks.append(record("unique divisibility", f"alpha -> alpha^{ell} bijective on U_inf",
                         ok, None))
    if not ok:
        return checks
    sq = ell * ell
    w = None
    for x in units:
        xl = times(M, x, ell)
        xh = div(M, x, ell)
        if not (M.is_unit(xl) and M.is_unit(xh)):
            w = {"x": M.label(x), "reason": "multiple is not a unit"}
            break
        for y in units:
            ym = M.mu(x)[y]
            if M.mu(xl)[y] != times(M, ym, sq) or M.mu(xh)[y] != div(M, ym, sq):
                w = _labels(M, x, y)
                break
            yh = M.hua(x)[y]
            if M.hua(xl)[y] != times(M, yh, sq) or M.hua(xh)[y] != div(M, yh, sq):
                w = _labels(M, x, y)
                break
        if w:
            break
    checks.append(record("scaling of mu and h", f"y mu_(x.l) = y mu_x . l^2, "
                         f"y h_(x.l) = y h_x . l^2 for l in ({ell}, 1/{ell})", w is None, w))
    w = next((M.label(x) for x in units
              if times_tilde(M, x, ell) != M.tau[times(M, M.tau_inv[x], ell)]), None)
    checks.append(record("tilde multiples", "x .~ l = ((x tau^-1) . l) tau", w is None, w))
    return checks


# homomorphisms -------------------------------------------------------------------

def check_homomorphism(M1: LocalMoufang, M2: LocalMoufang, phi: Sequence[int],
                       require_bijective: bool = False) -> Tuple[Verdict, Dict[int, Dict[Perm, Perm]]]:
    """Check that the point map ``phi`` is a homomorphism ``M1 -> M2``.

    Returns a verdict and, per point ``x``, the induced map ``theta_x`` on
    root groups.
    """
    checks = []
    n1 = M1.n
    phi = list(phi)
    w = next((_labels(M1, x, y) for x in range(n1) for y in range(n1)
              if M1.equiv(x, y) != M2.equiv(phi[x], phi[y])), None)
    checks.append(record("equivalence", "x ~ y iff x phi ~ y phi", w is None, w))
    if require_bijective:
        ok = sorted(phi) == list(range(M2.n))
        checks.append(record("bijective", "phi bijective", ok, None))
    thetas: Dict[int, Dict[Perm, Perm]] = {}
    w = None
    for x in range(n1):
        xp = phi[x]
        probe = next(y for y in range(n1) if not M1.equiv(x, y))
        lookup = {v[phi[probe]]: v for v in M2.root_group(xp)}
        theta = {}
        for u in M1.root_group(x):
            v = lookup.get(phi[u[probe]])
            if v is None or any(phi[u[y]] != v[phi[y]] for y in range(n1)):
                w = {"point": M1.label(x)}
                break
            theta[u] = v
        if w:
            break
        gens = small_generating_set(M1.root_group(x), n1) if x in (M1.zero, M1.inf) else None
        if gens:
            for a in gens:
                for b in gens:
                    if theta[compose(a, b)] != compose(theta[a], theta[b]):
                        w = {"point": M1.label(x), "reason": "theta not multiplicative"}
        thetas[x] = theta
        if w:
            break
    checks.append(record("root groups", "U_x phi = phi V_{x phi}", w is None, w))
    return Verdict(all(c["status"] != "fail" for c in checks), checks), thetas


def quotient(M: LocalMoufang) -> Tuple[LocalMoufang, List[int]]:
    """The Moufang set on equivalence classes and the projection map."""
    sp = M.space
    classes = sp.classes
    labels = ["{" + ",".join(M.label(x) for x in members) + "}" for members in classes]
    bar = EquivSet(labels, list(range(len(classes))))
    U = sorted(set(induced(u, sp) for u in M.U))
    tau = induced(M.tau, sp)
    Mbar = construct(MoufangSeed(bar, U, tau, sp.cls[M.inf], f"{M.name}/~"))
    return Mbar, list(sp.cls)


def twisted_seed(M: LocalMoufang) -> MoufangSeed:
    """A seed whose swap is an involution that is not a mu-map.

    Two pairs ``a <-> a tau`` and ``c <-> c tau`` with ``c ~ a`` are
    re-paired crosswise; equivalence is still preserved.
    """
    sp = M.space
    tau = list(M.tau)
    for a in M.units:
        b = tau[a]
        for c in sp.classes[sp.cls[a]]:
            d = tau[c]
            if c == a or c == b or d == a:
                continue
            new = list(tau)
            new[a], new[d], new[c], new[b] = d, a, b, c
            new = tuple(new)
            if compose(new, new) != identity(M.n):
                continue
            return MoufangSeed(sp, M.U, new, M.inf, M.name + " twisted")
    raise ValueError("no twist available")


def _add_order(M: LocalMoufang, x: int) -> int:
    k, y = 1, x
    while y != M.zero:
        y = M.add(y, x)
        k += 1
    return k


def find_isomorphism(M1: LocalMoufang, M2: LocalMoufang, limit: int = 200000) -> Optional[List[int]]:
    """A bijective homomorphism ``M1 -> M2`` fixing 0 and infinity, or None.

    Candidates come from isomorphisms ``U1 -> U2``, read as point maps off
    the class of infinity; the class of infinity is then filled in through
    ``mu_e``. Each candidate is checked with :func:`check_homomorphism`.
    """
    if M1.n != M2.n or len(M1.U) != len(M2.U) or len(M1.units) != len(M2.units):
        return None
    gens = [g[M1.zero] for g in M1.gens_U]
    off1 = [x for x in range(M1.n) if not M1.equiv(x, M1.inf)]
    off2 = [x for x in range(M2.n) if not M2.equiv(x, M2.inf)]
    ord2: Dict[int, List[int]] = {}
    for y in off2:
        ord2.setdefault(_add_order(M2, y), []).append(y)
    cands = [ord2.get(_add_order(M1, g), []) for g in gens]
    e1 = M1.least_unit()
    mu_inv = inverse(M1.mu(e1))
    tried = 0

    def extend(theta: Dict[int, int], k: int):
        nonlocal tried
        if k == len(gens):
            yield theta
            return
        for h in cands[k]:
            tried += 1
            if tried > limit:
                raise CapExceeded("isomorphism candidates", limit)
            th = dict(theta)
            th[gens[k]] = h
            frontier = list(th.items())
            ok = True
            while frontier and ok:
                nxt = []
                for x, y in frontier:
                    for g in gens[:k + 1]:
                        s, t = M1.add(x, g), M2.add(y, th[g])
                        old = th.get(s)
                        if old is None:
                            th[s] = t
                            nxt.append((s, t))
                        elif old != t:
                            ok = False
                            break
                    if not ok:
                        break
                frontier = nxt
            if ok and len(set(th.values())) == len(th):
                yield from extend(th, k + 1)

    for theta in extend({M1.zero: M2.zero}, 0):
        if len(theta) != len(off1):
            continue
        pe = theta[e1]
        if not M2.is_unit(pe):
            continue
        mu2 = M2.mu(pe)
        phi = [0] * M1.n
        for x in range(M1.n):
            phi[x] = theta[x] if x in theta else mu2[theta[mu_inv[x]]]
        if sorted(phi) != list(range(M2.n)):
            continue
        pos = inverse(tuple(phi))
        if any(tuple(phi[u[pos[y]]] for y in range(M2.n)) not in M2.U0_set for u in M1.gens_U0):
            continue
        verdict, _ = check_homomorphism(M1, M2, phi, require_bijective=True)
        if verdict.ok:
            return phi
    return None
