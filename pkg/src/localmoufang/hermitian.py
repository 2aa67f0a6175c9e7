"""Form rings, Lambda-quadratic forms and the Hermitian and orthogonal families.

Points of ``H(W, q)`` are stored as normalized triples ``(a, x, b)`` with
``a = 1`` or ``b = 1``. All permutations are induced by linear maps of
``R x W x R`` followed by normalization, so a map that fails to preserve the
point set is detected instead of silently producing garbage.

Only commutative rings (with a possibly nontrivial involution) are supported.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence, Tuple

from .action import EquivSet, Perm, compose, compose_all, conj, inverse
from .forms import FreeModule, QuadraticForm, Vec
from .localring import DescriptorError, Ring, make_ring
from .moufang import LocalMoufang, MoufangSeed, construct
from .report import record

Triple = Tuple[int, Vec, int]


class PreconditionError(ValueError):
    def __init__(self, condition: str, message: str, witness=None, checks=None):
        super().__init__(f"{condition}: {message}")
        self.condition = condition
        self.witness = witness
        self.checks = checks or []


class FormRing:
    """``(R, Lambda)`` with involution ``*`` and central ``eps``, ``eps eps* = 1``."""

    def __init__(self, R: Ring, lam: Sequence[int], eps: Optional[int] = None):
        self.R = R
        self.eps = R.eps if eps is None else eps
        self.lam = sorted(set(lam))
        self.lam_set = set(self.lam)
        e = self.eps
        self.lam_min = sorted({R.sub(r, R.mul(R.star(r), e)) for r in R.elements})
        self.lam_max = sorted(r for r in R.elements if R.mul(R.star(r), e) == R.neg(r))
        self._rep: Dict[int, int] = {}

    @classmethod
    def from_option(cls, R: Ring, option: str, eps: Optional[int] = None) -> "FormRing":
        """``option`` is ``min``, ``max``, ``zero`` or a comma-separated element list."""
        probe = cls(R, [0], eps)
        if option == "min":
            return cls(R, probe.lam_min, eps)
        if option == "max":
            return cls(R, probe.lam_max, eps)
        if option == "zero":
            return cls(R, [0], eps)
        try:
            return cls(R, [R.parse(s) for s in option.split(",")], eps)
        except DescriptorError:
            raise DescriptorError(f"cannot parse form parameter {option!r}")

    def in_lam(self, a: int) -> bool:
        return a in self.lam_set

    def coset_rep(self, a: int) -> int:
        """Least element of ``a + Lambda``."""
        if a not in self._rep:
            self._rep[a] = min(self.R.add(a, l) for l in self.lam)
        return self._rep[a]

    def checks(self) -> List[dict]:
        R = self.R
        out = []
        e = self.eps
        ok = R.mul(e, R.star(e)) == 1 and all(R.mul(e, r) == R.mul(r, e) for r in R.elements)
        out.append(record("eps", "eps central, eps eps* = 1", ok, R.label(e)))
        bad = next(([R.label(a), R.label(b)] for a in R.elements for b in R.elements
                     if R.star(R.add(a, b)) != R.add(R.star(a), R.star(b))
                     or R.star(R.mul(a, b)) != R.mul(R.star(b), R.star(a))), None)
        if bad is None:
            bad = next((R.label(a) for a in R.elements if R.star(R.star(a)) != a), None)
        out.append(record("involution", "(ab)* = b* a*, a** = a", bad is None, bad))
        L = self.lam_set
        ok = 0 in L and all(R.sub(a, b) in L for a in self.lam for b in self.lam)
        out.append(record("Lambda subgroup", "Lambda additive subgroup", ok, None))
        bad = next((R.label(a) for a in self.lam_min if a not in L), None)
        bad = bad or next((R.label(a) for a in self.lam if a not in set(self.lam_max)), None)
        out.append(record("Lambda bounds", "Lambda_min <= Lambda <= Lambda_max", bad is None, bad))
        bad = next(([R.label(r), R.label(l)] for r in R.elements for l in self.lam
                    if R.mul(R.mul(R.star(r), l), r) not in L), None)
        out.append(record("Lambda stable", "r* Lambda r <= Lambda", bad is None, bad))
        witness = next((r for r in R.elements if R.is_unit(R.add(r, R.star(r)))), None)
        if witness is not None:
            ok = self.lam_min == self.lam_max == self.lam
            out.append(record("Lambda forced", "r + r* invertible implies Lambda_min = Lambda = Lambda_max",
                              ok, {"r": R.label(witness)}))
        return out

    def describe(self) -> dict:
        R = self.R
        return {"ring": R.name, "involution": R.star_name, "eps": R.label(self.eps),
                "lambda": [R.label(a) for a in self.lam],
                "lambda_min": len(self.lam_min), "lambda_max": len(self.lam_max)}


class LambdaQuadraticModule:
    """``W = R^n`` with the *-form ``h(x, y) = sum x_i* H_ij y_j``."""

    def __init__(self, FR: FormRing, H: Sequence[Sequence[int]], text: str = ""):
        self.FR = FR
        self.R = FR.R
        self.H = [list(row) for row in H]
        self.rank = len(H)
        self.W = FreeModule(self.R, self.rank)
        self.text = text or ";".join(",".join(self.R.label(c) for c in row) for row in H)

    @classmethod
    def parse(cls, FR: FormRing, text: str, rank: int) -> "LambdaQuadraticModule":
        """Matrix rows separated by ``;`` and entries by ``,``; empty means identity."""
        R = FR.R
        if not text:
            H = [[1 if i == j else 0 for j in range(rank)] for i in range(rank)]
            return cls(FR, H, "id")
        rows = [r.split(",") for r in text.split(";")]
        if any(len(r) != len(rows) for r in rows):
            raise DescriptorError(f"form matrix {text!r} is not square")
        return cls(FR, [[R.parse(c) for c in r] for r in rows], text)

    def h(self, x: Vec, y: Vec) -> int:
        R = self.R
        out = 0
        for i in range(self.rank):
            if x[i] == 0:
                continue
            xs = R.star(x[i])
            for j in range(self.rank):
                c = self.H[i][j]
                if c and y[j]:
                    out = R.add(out, R.mul(R.mul(xs, c), y[j]))
        return out

    def f(self, x: Vec, y: Vec) -> int:
        R = self.R
        return R.add(self.h(x, y), R.mul(R.star(self.h(y, x)), self.FR.eps))

    def q(self, x: Vec) -> int:
        """Canonical representative of ``q(x) = h(x, x) + Lambda``."""
        return self.FR.coset_rep(self.h(x, x))

    def q_in(self, x: Vec, r: int) -> bool:
        """``q(x) = r + Lambda``."""
        return self.FR.in_lam(self.R.sub(r, self.h(x, x)))

    def anisotropy_witness(self) -> Optional[Vec]:
        R = self.R
        ideal = R.ideal
        for x in self.W.vectors:
            if self.W.in_radical(x):
                continue
            hx = self.h(x, x)
            if any(self.FR.in_lam(R.sub(m, hx)) for m in ideal):
                return x
        return None

    def checks(self) -> List[dict]:
        R, W = self.R, self.W
        FR = self.FR
        vs = W.vectors
        out = []
        bad = next(([W.label(x), W.label(y)] for x in vs for y in vs
                    if not FR.in_lam(R.sub(R.sub(R.sub(self.h(W.add(x, y), W.add(x, y)),
                                                       self.h(x, x)), self.h(y, y)), self.f(x, y)))),
                   None)
        out.append(record("LQ1", "q(x+y) = q(x) + q(y) + f(x,y) + Lambda", bad is None, bad))
        bad = next(([W.label(x), R.label(r)] for x in vs for r in R.elements
                    if not FR.in_lam(R.sub(self.h(W.scale(x, r), W.scale(x, r)),
                                           R.mul(R.mul(R.star(r), self.h(x, x)), r)))), None)
        out.append(record("LQ2", "q(xr) = r* q(x) r", bad is None, bad))
        bad = None
        for x in vs:
            hx = self.h(x, x)
            fx = self.f(x, x)
            for l in FR.lam:
                r = R.add(hx, l)
                if fx != R.add(r, R.mul(R.star(r), FR.eps)):
                    bad = [W.label(x), R.label(r)]
                    break
            if bad:
                break
        out.append(record("LQ3", "f(x,x) = r + r* eps for q(x) = r + Lambda", bad is None, bad))
        bad = next(([W.label(x), W.label(y)] for x in vs for y in vs
                    if self.f(x, y) != R.mul(R.star(self.f(y, x)), FR.eps)), None)
        out.append(record("f eps-hermitian", "f(x,y) = f(y,x)* eps", bad is None, bad))
        w = self.anisotropy_witness()
        out.append(record("anisotropic", "q(x) in m + Lambda implies x in W m", w is None,
                          None if w is None else W.label(w)))
        return out


class HermitianSpace:
    """The point set ``H(W, q)`` with its equivalence relation."""

    def __init__(self, mod: LambdaQuadraticModule):
        self.mod = mod
        R, W = mod.R, mod.W
        self.R, self.W = R, W
        pts: List[Triple] = []
        for x in W.vectors:
            hx = mod.h(x, x)
            for l in mod.FR.lam:
                pts.append((1, x, R.add(hx, l)))
        inf_pts = []
        for r in R.ideal:
            for x in W.vectors:
                if W.in_radical(x) and mod.q_in(x, R.star(r)):
                    inf_pts.append((r, x, 1))
        pts = sorted(set(pts), key=lambda t: (W.encode(t[1]), t[2]))
        self.points: List[Triple] = pts + sorted(inf_pts, key=lambda t: (t[0], W.encode(t[1])))
        self.index: Dict[Triple, int] = {p: i for i, p in enumerate(self.points)}
        self.n = len(self.points)
        labels = [self.label(p) for p in self.points]
        cls = [self.class_key(p) for p in self.points]
        self.space = EquivSet(labels, cls)
        self.inf = self.index[(0, W.zero(), 1)]
        self.zero = self.index[(1, W.zero(), 0)]

    def label(self, p: Triple) -> str:
        a, x, b = p
        R = self.R
        return f"[{R.label(a)},{self.W.label(x)},{R.label(b)}]"

    def class_key(self, p: Triple):
        a, x, b = p
        R = self.R
        if a == 1:
            return ("fin", tuple(R.residue(c) for c in x), R.residue(b))
        return ("inf",)

    def normalize(self, a: int, x: Vec, b: int) -> Triple:
        R, W = self.R, self.W
        if R.is_unit(a):
            t = R.inv(a)
            return (1, W.scale(x, t), R.mul(b, t))
        if not R.is_unit(b):
            raise ValueError("triple is not unimodular")
        t = R.inv(b)
        return (R.mul(a, t), W.scale(x, t), 1)

    def perm(self, linear) -> Perm:
        """Permutation induced by a linear map of triples."""
        out = []
        for p in self.points:
            img = self.normalize(*linear(*p))
            j = self.index.get(img)
            if j is None:
                raise ValueError(f"image {self.label(img)} of {self.label(p)} is not a point")
            out.append(j)
        return tuple(out)

    # the maps ------------------------------------------------------------------
    def alpha(self, x: Vec, r: int) -> Perm:
        R, W, f = self.R, self.W, self.mod.f
        return self.perm(lambda a, y, b: (a, W.add(y, W.scale(x, a)),
                                          R.add(R.add(b, R.mul(r, a)), f(x, y))))

    def zeta(self, r: int, x: Vec) -> Perm:
        R, W, f = self.R, self.W, self.mod.f
        es = R.star(self.mod.FR.eps)
        return self.perm(lambda a, y, b: (R.add(R.add(a, R.mul(r, b)), R.mul(es, f(x, y))),
                                          W.add(y, W.scale(x, b)), b))

    def tau(self) -> Perm:
        e = self.mod.FR.eps
        return self.perm(lambda a, y, b: (b, y, self.R.mul(a, e)))

    def mu_closed(self, x: Vec, r: int) -> Perm:
        """``[1,y,s] -> [eps* r^-* s r^-1, (y - x r^-1 f(x,y)) r^-1, 1]``, extended linearly."""
        R, W, f = self.R, self.W, self.mod.f
        ri = R.inv(r)
        c = R.mul(R.mul(R.star(self.mod.FR.eps), R.inv(R.star(r))), ri)
        return self.perm(lambda a, y, b: (R.mul(c, b),
                                          W.scale(W.sub(y, W.scale(x, R.mul(ri, f(x, y)))), ri), a))

    def mu_word(self, x: Vec, r: int) -> Perm:
        """``zeta_[e* r^-*, -x e* r^-*, 1] alpha_[1,x,r] zeta_[e* r^-*, -x r^-1, 1]``."""
        R, W = self.R, self.W
        ers = R.mul(R.star(self.mod.FR.eps), R.inv(R.star(r)))
        left = self.zeta(ers, W.neg(W.scale(x, ers)))
        right = self.zeta(ers, W.neg(W.scale(x, R.inv(r))))
        return compose_all((left, self.alpha(x, r), right), self.n)

    def as_third_one(self, p: Triple) -> Tuple[int, Vec]:
        """``(r, x)`` with ``p = [r, x, 1]``; needs the third coordinate to be a unit."""
        a, x, b = p
        t = self.R.inv(b)
        return self.R.mul(a, t), self.W.scale(x, t)

    def first_points(self) -> List[Triple]:
        return [p for p in self.points if p[0] == 1]

    def unit_points(self) -> List[Triple]:
        return [p for p in self.points if p[0] == 1 and self.R.is_unit(p[2])]


def build_hermitian(FR: FormRing, mod: LambdaQuadraticModule, check: bool = True) -> LocalMoufang:
    """``M(U, tau)`` on ``H(W, q)`` with ``U = {alpha_[1,x,r]}``."""
    checks = FR.checks() + mod.checks()
    bad = next((c for c in checks if c["status"] == "fail"), None)
    if check and bad is not None:
        raise PreconditionError(bad["name"], bad["anchor"], bad["witness"], checks)
    H = HermitianSpace(mod)
    U = [H.alpha(p[1], p[2]) for p in H.first_points()]
    name = f"H({FR.R.name},{mod.text},Lambda={len(FR.lam)})"
    M = construct(MoufangSeed(H.space, U, H.tau(), H.inf, name))
    M.herm = H
    M.precondition_checks = checks
    return M


def build_orthogonal(R: Ring, q: QuadraticForm, check: bool = True) -> LocalMoufang:
    """Orthogonal family as the Hermitian one with trivial involution, ``eps = 1``, ``Lambda = 0``.

    ``h`` is the upper-triangular form with ``h(x, x) = q(x)``.
    """
    if R.star_name != "id":
        raise DescriptorError("the orthogonal family needs the trivial involution")
    FR = FormRing(R, [0], 1)
    mod = LambdaQuadraticModule(FR, q.c, q.text)
    if check:
        w = q.isotropic_witness(mod.W)
        if w is not None:
            raise PreconditionError("anisotropic", "q(x) in m implies x in W m", mod.W.label(w))
    M = build_hermitian(FR, mod, check)
    M.name = f"O({R.name},{q.text})"
    return M


def make_form_ring(ring_desc: str, lam: str = "min", eps: Optional[str] = None) -> FormRing:
    R = make_ring(ring_desc)
    e = R.parse(eps) if eps is not None else None
    return FormRing.from_option(R, lam, e)


def equivalence_overlap_check(H: HermitianSpace) -> dict:
    """Printed equivalence rule agrees on points with two representations."""
    R, W = H.R, H.W
    pts = H.unit_points()

    def key_first(p):
        return tuple(R.residue(c) for c in p[1]), R.residue(p[2])

    def key_second(p):
        ri = R.inv(p[2])
        return tuple(R.residue(c) for c in W.scale(p[1], ri)), R.residue(ri)

    groups1: Dict[tuple, set] = {}
    groups2: Dict[tuple, set] = {}
    for i, p in enumerate(pts):
        groups1.setdefault(key_first(p), set()).add(i)
        groups2.setdefault(key_second(p), set()).add(i)
    part1 = {frozenset(g) for g in groups1.values()}
    part2 = {frozenset(g) for g in groups2.values()}
    ok = part1 == part2
    # the stored classes come from the same residues
    ok = ok and all(H.space.equiv(H.index[pts[min(g)]], H.index[pts[j]]) for g in part1 for j in g)
    return record("equivalence well defined",
                  "[1,x,r] ~ [1,y,s] iff [r^-1,x r^-1,1] ~ [s^-1,y s^-1,1]", ok,
                  {"points": len(pts), "classes": len(part1)})


def mu_action_check(M: LocalMoufang, limit: int = 30_000_000, seed: int = 0) -> List[dict]:
    """Closed forms of the mu-maps against the constructed ones, for every unit.

    The conjugation identity is checked for all pairs when
    ``|units| |U| n <= limit``; otherwise for a generating set of ``U`` plus
    a seeded sample, and reported as sampled.
    """
    H: HermitianSpace = M.herm
    R, W = H.R, H.W
    FR = H.mod.FR
    units = H.unit_points()
    out = []
    w_word = w_closed = w_inv = w_conj = w_u0 = w_gamma = None
    U0 = M.U0_set
    firsts = H.first_points()
    alphas = {p: M.a(H.index[p]) for p in firsts}
    exhaustive = len(units) * len(firsts) * M.n <= limit
    if exhaustive:
        probe = firsts
    else:
        rng = random.Random(seed)
        gens = {g[M.zero] for g in M.gens_U}
        probe = [p for p in firsts if H.index[p] in gens]
        probe += rng.sample(firsts, min(len(firsts), 8))
    zetas: Dict[int, Perm] = {}

    def zeta_at(j: int) -> Perm:
        if j not in zetas:
            zetas[j] = H.zeta(*H.as_third_one(H.points[j]))
        return zetas[j]

    for p in units:
        x, r = p[1], p[2]
        i = H.index[p]
        mu = M.mu(i)
        if w_word is None and H.mu_word(x, r) != mu:
            w_word = H.label(p)
        closed = H.mu_closed(x, r)
        if w_closed is None and closed != mu:
            bad = next(j for j in range(M.n) if closed[j] != mu[j])
            w_closed = {"unit": H.label(p), "point": M.label(bad)}
        inv_pt = H.normalize(1, W.neg(x), R.mul(R.star(r), FR.eps))
        if w_inv is None and inverse(mu) != M.mu(H.index[inv_pt]):
            w_inv = H.label(p)
        for q_ in probe:
            c = conj(alphas[q_], mu)
            if w_conj is None and c != zeta_at(mu[H.index[q_]]):
                w_conj = [H.label(q_), H.label(p)]
            if w_u0 is None and c not in U0:
                w_u0 = [H.label(q_), H.label(p)]
        if w_conj and w_u0:
            break
    status = "pass" if exhaustive else "sampled"
    for q_ in H.first_points():
        r2, x2 = H.as_third_one(H.points[M.tau[H.index[q_]]])
        if M.gamma(H.index[q_]) != H.zeta(r2, x2):
            w_gamma = H.label(q_)
            break
    out.append(record("mu word", "mu_[1,x,r] = zeta alpha_[1,x,r] zeta", w_word is None, w_word))
    out.append(record("mu closed form",
                      "[1,y,s] mu = [e* r^-* s r^-1, (y - x r^-1 f(x,y)) r^-1, 1]; "
                      "[s,y,1] mu = [1, (y - x r^-1 f(x,y)) r* e, r s r* e]",
                      w_closed is None, w_closed))
    out.append(record("mu inverse", "mu_[1,x,r]^-1 = mu_[1,-x,r* e]", w_inv is None, w_inv))
    out.append(record("alpha conjugated by mu", "alpha_[1,y,s]^mu_[1,x,r] = zeta_([1,y,s] mu_[1,x,r])",
                      w_conj is None, w_conj, status))
    # generators of U are always probed, so this one is exact in both modes
    out.append(record("U^mu = U_0", "U^mu_[1,x,r] = U_0", w_u0 is None, w_u0))
    out.append(record("gamma", "gamma_[1,x,r] = zeta_([1,x,r] tau)", w_gamma is None, w_gamma))
    ident = tuple(range(M.n))
    bad = next((H.label(p) for p in units
                if compose(M.mu(H.index[p]), inverse(M.mu(H.index[p]))) != ident), None)
    out.append(record("mu then inverse", "x mu mu^-1 = x", bad is None, bad))
    out.append(equivalence_overlap_check(H))
    return out


def root_commutator(M: LocalMoufang, p1: Triple, p2: Triple) -> dict:
    """The commutator of two elements of ``U``, as the point ``0 [a, b]``."""
    H: HermitianSpace = M.herm
    a = H.alpha(p1[1], p1[2])
    b = H.alpha(p2[1], p2[2])
    c = compose_all((inverse(a), inverse(b), a, b), M.n)
    return {"a": H.label(p1), "b": H.label(p2), "commutator": M.label(c[M.zero]),
            "trivial": c == tuple(range(M.n))}


def is_abelian_U(M: LocalMoufang) -> bool:
    gens = M.gens_U
    return all(compose(a, b) == compose(b, a) for a in gens for b in gens)
