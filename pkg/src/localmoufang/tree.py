"""Finite-depth model of the Bruhat-Tits tree of SL_2 over a discrete valuation ring.

The valuation ring ``O`` is seen through its truncations ``O / pi^n O``: the
p-adic chain ``Z/p^n`` or the power series chain ``F_p[t]/(t^n)``. A vertex at
distance ``n`` from ``L0 = e1 O + e2 O`` is the lattice
``L = (a e1 + b e2) O + pi^n L0`` with ``[a, b]`` a canonical point of
``P^1(O / pi^n O)``. Lattices are also realized as explicit subgroups of
``(O / pi^(N+1) O)^2`` so that adjacency and sums can be checked by
containment instead of by coordinates.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .action import EquivSet, Perm, closure, identity
from .localring import DescriptorError, PolyQuotient, Ring, ZMod
from .moufang import MoufangSeed, check_homomorphism, construct, is_local_moufang
from .projective import ProjectiveLine, build_MR
from .report import record

Rep = Tuple[int, int, int]  # (depth, a, b)
Matrix = Tuple[int, int, int, int]


class TruncatedDVR:
    """The rings ``O / pi^n O`` for ``0 <= n <= N + 1`` with reduction maps.

    ``kind`` is ``padic`` (``Z/p^n``, uniformizer ``p``) or ``power``
    (``F_p[t]/(t^n)``, uniformizer ``t``). In both encodings reduction to
    level ``k`` is ``a mod p^k``.
    """

    def __init__(self, p: int, N: int, kind: str = "padic"):
        if N < 1:
            raise DescriptorError("depth must be at least 1")
        if kind not in ("padic", "power"):
            raise DescriptorError(f"unknown valuation ring kind {kind!r}")
        if p ** (N + 1) > 1024:
            raise DescriptorError(f"p^(N+1) = {p ** (N + 1)} exceeds the table limit 1024")
        self.p = p
        self.N = N
        self.kind = kind
        self.rings: Dict[int, Ring] = {}
        for n in range(1, N + 2):
            self.rings[n] = ZMod(p ** n) if kind == "padic" else PolyQuotient(p, [0, 1], n)
        self.lines = {n: ProjectiveLine(self.rings[n]) for n in range(1, N + 1)}

    @property
    def name(self) -> str:
        return f"Z_{self.p}" if self.kind == "padic" else f"F_{self.p}[[t]]"

    def ring(self, n: int) -> Ring:
        return self.rings[n]

    def reduce(self, a: int, k: int) -> int:
        return a % (self.p ** k)

    def uniformizer(self, n: int) -> int:
        """``pi`` as an element of ``O / pi^n O`` (``p`` in both encodings)."""
        return self.p % (self.p ** n)

    def reduction_checks(self) -> List[dict]:
        """Reduction maps are surjective unital ring homomorphisms and compose."""
        bad = None
        for n in range(2, self.N + 2):
            for k in range(1, n):
                R, S = self.rings[n], self.rings[k]
                for a in R.elements:
                    ra = self.reduce(a, k)
                    for b in R.elements:
                        if self.reduce(R.add(a, b), k) != S.add(ra, self.reduce(b, k)) or \
                                self.reduce(R.mul(a, b), k) != S.mul(ra, self.reduce(b, k)):
                            bad = {"from": n, "to": k, "a": R.label(a), "b": R.label(b)}
                            break
                    if bad:
                        break
                if bad is None and self.reduce(1, k) != 1:
                    bad = {"from": n, "to": k, "reason": "not unital"}
                if bad:
                    break
            if bad:
                break
        return [record("reduction homomorphisms", "O/pi^n -> O/pi^k ring maps, compatible",
                       bad is None, bad)]


# vertices ----------------------------------------------------------------------

def sphere(T: TruncatedDVR, n: int) -> List[Rep]:
    """Canonical representatives of the vertices at distance ``n`` from ``L0``."""
    if n < 0 or n > T.N:
        raise DescriptorError(f"level {n} outside 0..{T.N}")
    if n == 0:
        return [(0, 1, 0)]
    return [(n, a, b) for a, b in T.lines[n].coords]


def chi(T: TruncatedDVR, L: Rep) -> int:
    """Index of ``[a mod pi^n, b mod pi^n]`` in ``P^1(O/pi^n O)``."""
    n, a, b = L
    return T.lines[n].point(a, b)


def rep_label(T: TruncatedDVR, L: Rep) -> str:
    n, a, b = L
    if n == 0:
        return "L0"
    R = T.ring(n)
    return f"[{R.label(a)},{R.label(b)}]@{n}"


def canonical(T: TruncatedDVR, n: int, a: int, b: int) -> Rep:
    """The canonical representative of ``(a e1 + b e2) O + pi^n L0``."""
    if n == 0:
        return (0, 1, 0)
    P = T.lines[n]
    R = T.ring(n)
    a, b = a % R.n, b % R.n
    return (n,) + P.coords[P.normalize(a, b)]


def lattice(T: TruncatedDVR, L: Rep) -> FrozenSet[int]:
    """``L`` as a subgroup of ``(O/pi^(N+1) O)^2``, pairs encoded as ``a * q + b``."""
    n, a, b = L
    R = T.ring(T.N + 1)
    q = R.n
    pin = R.power(T.uniformizer(T.N + 1), n)
    ideal = sorted({R.mul(pin, r) for r in R.elements})
    gens = sorted({(R.mul(t, a), R.mul(t, b)) for t in R.elements})
    out = set()
    for u, v in gens:
        for i in ideal:
            ui = R.add(u, i)
            for j in ideal:
                out.add(ui * q + R.add(v, j))
    return frozenset(out)


def lattice_sum(T: TruncatedDVR, A: FrozenSet[int], B: FrozenSet[int]) -> FrozenSet[int]:
    R = T.ring(T.N + 1)
    q = R.n
    return frozenset((R.add(x // q, y // q)) * q + R.add(x % q, y % q) for x in A for y in B)


def lattice_scale(T: TruncatedDVR, A: FrozenSet[int]) -> FrozenSet[int]:
    """``pi A``."""
    R = T.ring(T.N + 1)
    q = R.n
    pi = T.uniformizer(T.N + 1)
    return frozenset(R.mul(pi, x // q) * q + R.mul(pi, x % q) for x in A)


def scaled_base(T: TruncatedDVR, n: int) -> FrozenSet[int]:
    """``pi^n L0``."""
    out = lattice(T, (0, 1, 0))
    for _ in range(n):
        out = lattice_scale(T, out)
    return out


def parent(T: TruncatedDVR, L: Rep) -> Optional[Rep]:
    """The neighbour one level closer to ``L0`` (coefficient reduction)."""
    n, a, b = L
    if n == 0:
        return None
    if n == 1:
        return (0, 1, 0)
    return canonical(T, n - 1, T.reduce(a, n - 1), T.reduce(b, n - 1))


def adjacent(T: TruncatedDVR, L: Rep, Lp: Rep) -> bool:
    """Adjacency for vertices on consecutive levels."""
    if abs(L[0] - Lp[0]) != 1:
        return False
    lo, hi = (L, Lp) if L[0] < Lp[0] else (Lp, L)
    return parent(T, hi) == lo


def graph_check(T: TruncatedDVR, N: Optional[int] = None) -> List[dict]:
    """The union of the spheres up to level ``N`` is a tree rooted at ``L0``."""
    N = T.N if N is None else N
    p = T.p
    verts = [L for n in range(N + 1) for L in sphere(T, n)]
    edges = [(parent(T, L), L) for L in verts if L[0] > 0]
    checks = []
    sizes = [len(sphere(T, n)) for n in range(N + 1)]
    expected = [1] + [p ** n + p ** (n - 1) for n in range(1, N + 1)]
    checks.append(record("sphere sizes", "|T_n| = p^n + p^(n-1)", sizes == expected,
                         {"sizes": sizes}))
    adj: Dict[Rep, List[Rep]] = {L: [] for L in verts}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = {verts[0]: 0}
    queue = deque([verts[0]])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    connected = len(dist) == len(verts)
    acyclic = len(edges) == len(verts) - 1
    checks.append(record("tree", "connected with |E| = |V| - 1", connected and acyclic,
                         {"vertices": len(verts), "edges": len(edges)}))
    bad = next((rep_label(T, L) for L in verts if dist.get(L) != L[0]), None)
    checks.append(record("distance", "d(L0, L) = n for L in T_n", bad is None, bad))
    bad = None
    for L in verts:
        deg = len(adj[L])
        want = p + 1 if L[0] < N else 1
        if deg != want:
            bad = {"vertex": rep_label(T, L), "degree": deg}
            break
    checks.append(record("degrees", "internal degree p+1, p children per vertex", bad is None, bad))
    # cross-check adjacency by reduction against index-p containment
    bad = None
    lat = {L: lattice(T, L) for L in verts}
    for n in range(N):
        for L in sphere(T, n):
            for Lp in sphere(T, n + 1):
                contained = lat[Lp] <= lat[L] and len(lat[L]) == p * len(lat[Lp]) \
                    and lattice_scale(T, lat[L]) <= lat[Lp]
                if contained != adjacent(T, L, Lp):
                    bad = [rep_label(T, L), rep_label(T, Lp)]
                    break
            if bad:
                break
        if bad:
            break
    checks.append(record("adjacency by containment", "pi L < L' < L with index p iff coefficients reduce",
                         bad is None, bad))
    distinct = len(set(lat.values())) == len(verts)
    checks.append(record("distinct lattices", "canonical representatives give distinct lattices",
                         distinct, None))
    bad = next((rep_label(T, L) for n in range(1, N) for L in sphere(T, n)
                if not any(parent(T, Lp) == L for Lp in sphere(T, n + 1))), None)
    checks.append(record("lifts", "every level-n vertex lifts to level n+1", bad is None, bad))
    return checks


def to_dot(T: TruncatedDVR, N: Optional[int] = None) -> str:
    N = T.N if N is None else N
    lines = ["graph T {"]
    for n in range(1, N + 1):
        for L in sphere(T, n):
            lines.append(f'  "{rep_label(T, parent(T, L))}" -- "{rep_label(T, L)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# the SL_2 action ---------------------------------------------------------------

def sphere_action(T: TruncatedDVR, n: int, g: Matrix, level: Optional[int] = None) -> Perm:
    """Permutation of ``T_n`` induced by ``g = (a', b', c', d')`` over ``O/pi^level``."""
    level = n if level is None else level
    if level < n:
        raise DescriptorError("matrix level below sphere level")
    Rg = T.ring(level)
    A, B, C, D = g
    if Rg.sub(Rg.mul(A, D), Rg.mul(B, C)) % (T.p ** n) != 1 % (T.p ** n):
        raise DescriptorError("determinant is not 1 at this level")
    R = T.ring(n)
    A, B, C, D = (T.reduce(v, n) for v in g)
    pts = sphere(T, n)
    index = {L: i for i, L in enumerate(pts)}
    out = []
    for _, a, b in pts:
        img = canonical(T, n, R.add(R.mul(a, A), R.mul(b, C)), R.add(R.mul(a, B), R.mul(b, D)))
        out.append(index[img])
    return tuple(out)


def sl2(R: Ring) -> List[Matrix]:
    out = []
    for a in R.elements:
        for b in R.elements:
            for c in R.elements:
                if R.is_unit(a):
                    # d is determined by ad - bc = 1
                    d = R.mul(R.inv(a), R.add(1, R.mul(b, c)))
                    out.append((a, b, c, d))
                else:
                    for d in R.elements:
                        if R.sub(R.mul(a, d), R.mul(b, c)) == 1:
                            out.append((a, b, c, d))
    return out


def kernel(T: TruncatedDVR, n: int, level: Optional[int] = None) -> dict:
    """Kernel and image of ``SL_2(O/pi^level) -> Sym(T_n)``."""
    level = T.N if level is None else level
    R = T.ring(level)
    mats = sl2(R)
    ident = identity(len(sphere(T, n)))
    images = set()
    ker = []
    for g in mats:
        img = sphere_action(T, n, g, level)
        images.add(img)
        if img == ident:
            ker.append(g)
    q = T.p ** n

    def scalar_mod(g):
        A, B, C, D = (v % q for v in g)
        return B == 0 and C == 0 and A == D and A % T.p != 0

    expected = [g for g in mats if scalar_mod(g)]
    gens = [(1, 1, 0, 1), (1, 0, 1, 1)]
    if T.p > 2:
        gens.append((1, R.neg(1), 0, 1))
    gen_imgs = [sphere_action(T, n, g, level) for g in gens]
    closed = closure(gen_imgs, len(ident))
    return {
        "sl2_order": len(mats),
        "kernel_order": len(ker),
        "kernel_is_scalar_mod": sorted(ker) == sorted(expected),
        "image_order": len(images),
        "closure_order": len(closed),
        "closure_matches": set(closed) == images,
    }


def kernel_checks(T: TruncatedDVR, n: int, level: Optional[int] = None) -> List[dict]:
    info = kernel(T, n, level)
    R = T.ring(n)
    psl = len(sl2(R)) // sum(1 for u in R.units if R.mul(u, u) == 1)
    ident = sphere_action(T, n, (1, 0, 0, 1)) == identity(len(sphere(T, n)))
    return [
        record("identity acts trivially", "L I = L", ident, None),
        record("kernel", "kernel = matrices scalar mod pi^n", info["kernel_is_scalar_mod"], info),
        record("faithful image", "image = PSL_2(O/pi^n)",
               info["image_order"] == psl and info["closure_matches"],
               {"image_order": info["image_order"], "psl2_order": psl}),
    ]


def sphere_equivalence(T: TruncatedDVR, n: int) -> EquivSet:
    """``L ~ L'`` iff ``L + pi L0 = L' + pi L0``, computed on lattices."""
    pts = sphere(T, n)
    piL0 = scaled_base(T, 1)
    keys: Dict[FrozenSet[int], int] = {}
    cls = []
    for L in pts:
        k = lattice_sum(T, lattice(T, L), piL0)
        cls.append(keys.setdefault(k, len(keys)))
    return EquivSet([rep_label(T, L) for L in pts], cls)


def tree_moufang(T: TruncatedDVR, n: int):
    """Seed from the sphere action: ``U`` upper unipotent, ``tau = [[0,-1],[1,0]]``."""
    R = T.ring(n)
    sp = sphere_equivalence(T, n)
    U = [sphere_action(T, n, (1, t, 0, 1)) for t in R.elements]
    tau = sphere_action(T, n, (0, R.neg(1), 1, 0))
    inf = sphere(T, n).index((n, 0, 1))
    return construct(MoufangSeed(sp, U, tau, inf, f"T_{n}({T.name})"))


def verify_sphere_iso(T: TruncatedDVR, n: int) -> List[dict]:
    """``chi_n`` is an isomorphism from the sphere action to ``M(O/pi^n O)``."""
    pts = sphere(T, n)
    Mt = tree_moufang(T, n)
    MR = build_MR(T.ring(n))
    checks = list(is_local_moufang(Mt).checks)
    phi = [chi(T, L) for L in pts]
    ok = sorted(phi) == list(range(len(pts)))
    checks.append(record("chi bijective", "chi_n: T_n -> P^1(O/pi^n O)", ok, None))
    P = T.lines[n]
    R = T.ring(n)
    gens = [(1, t, 0, 1) for t in R.elements] + [(0, R.neg(1), 1, 0)]
    gens += [(u, 0, 0, R.inv(u)) for u in R.units]
    bad = None
    for g in gens:
        tp = sphere_action(T, n, g)
        pp = P.act(g)
        if any(phi[tp[i]] != pp[phi[i]] for i in range(len(pts))):
            bad = list(g)
            break
    checks.append(record("chi intertwines", "chi(L g) = chi(L) g", bad is None, bad))
    verdict, _ = check_homomorphism(Mt, MR, phi, require_bijective=True)
    checks += verdict.checks
    return checks


def projection_checks(T: TruncatedDVR) -> List[dict]:
    """``L -> L + pi^n L0`` from ``T_(n+1)`` to ``T_n`` commutes with ``chi``."""
    checks = []
    bad = None
    for n in range(1, T.N):
        pin_L0 = scaled_base(T, n)
        by_lattice = {lattice(T, L): L for L in sphere(T, n)}
        for L in sphere(T, n + 1):
            img = by_lattice.get(lattice_sum(T, lattice(T, L), pin_L0))
            red = T.lines[n].normalize(T.reduce(L[1], n), T.reduce(L[2], n))
            if img is None or chi(T, img) != red:
                bad = rep_label(T, L)
                break
        if bad:
            break
    checks.append(record("projection square", "chi_n(L + pi^n L0) = red(chi_(n+1)(L))",
                         bad is None, bad))
    # compatible sequences of points at levels 1..N versus P^1 at level N
    N = T.N
    seqs = [[(i,) for i in range(len(T.lines[1].coords))]]
    for k in range(2, N + 1):
        Pk, Pprev = T.lines[k], T.lines[k - 1]
        nxt = []
        for s in seqs[-1]:
            for j, (a, b) in enumerate(Pk.coords):
                if Pprev.normalize(T.reduce(a, k - 1), T.reduce(b, k - 1)) == s[-1]:
                    nxt.append(s + (j,))
        seqs.append(nxt)
    top = [s[-1] for s in seqs[-1]]
    ok = sorted(top) == list(range(len(T.lines[N].coords)))
    checks.append(record("inverse system", "compatible sequences <-> P^1(O/pi^N O)", ok,
                         {"sequences": len(seqs[-1]), "points": len(T.lines[N].coords)}))
    return checks
