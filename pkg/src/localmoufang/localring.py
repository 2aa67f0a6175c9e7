"""Finite commutative local rings with integer-encoded elements.

Every ring has elements ``0..n-1``. ``0`` encodes the zero element and ``1``
encodes the identity. Three concrete kinds are provided:

* :class:`ZMod` for ``Z/p^k``,
* :class:`PolyQuotient` for ``F_p[t]/(f^m)`` with ``f`` irreducible,
* :class:`TableRing` for rings given by explicit addition and multiplication
  tables (used for rings reconstructed from a local Moufang set).

A ring may carry an involution and a distinguished central element ``eps``.
"""

from __future__ import annotations

import random
import re
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .action import CapExceeded

ELEMENT_CAP = 2 ** 14
TABLE_LIMIT = 1024


class DescriptorError(ValueError):
    """Raised when a ring or structure descriptor cannot be parsed."""


class NotLocalError(ValueError):
    """Raised when a candidate ring is not local, with a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _prime_power(n: int) -> Tuple[int, int]:
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            m = n
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise NotLocalError(f"Z/{n} is not local: {n} is not a prime power",
                                    witness=[p, n // p])
            return p, k
    raise DescriptorError(f"bad modulus {n}")


class Ring:
    """Common interface. Subclasses fill ``_add`` and ``_mul``."""

    name: str = "ring"
    n: int = 0
    p: int = 0  # residue characteristic

    def __init__(self):
        self._star: Optional[Callable[[int], int]] = None
        self.star_name = "id"
        self.eps = 1
        self._units: Optional[List[int]] = None
        self._inv: Dict[int, int] = {}
        self._add_t = None
        self._mul_t = None

    # basic arithmetic -----------------------------------------------------
    def _add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def _mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def _neg(self, a: int) -> int:
        raise NotImplementedError

    def _build_tables(self):
        if self.n <= TABLE_LIMIT:
            rng = range(self.n)
            self._add_t = [[self._add(a, b) for b in rng] for a in rng]
            self._mul_t = [[self._mul(a, b) for b in rng] for a in rng]
        self._neg_t = [self._neg(a) for a in range(self.n)]

    def add(self, a: int, b: int) -> int:
        if self._add_t is not None:
            return self._add_t[a][b]
        return self._add(a, b)

    def mul(self, a: int, b: int) -> int:
        if self._mul_t is not None:
            return self._mul_t[a][b]
        return self._mul(a, b)

    def neg(self, a: int) -> int:
        return self._neg_t[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg_t[b])

    @property
    def elements(self) -> range:
        return range(self.n)

    def from_int(self, k: int) -> int:
        out = 0
        step = 1 if k >= 0 else self.neg(1)
        for _ in range(abs(k)):
            out = self.add(out, step)
        return out

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    # units, ideal, residue -------------------------------------------------
    def _compute_units(self) -> List[int]:
        one = 1
        units = []
        for a in range(self.n):
            for b in range(self.n):
                if self.mul(a, b) == one:
                    units.append(a)
                    self._inv[a] = b
                    break
        return units

    @property
    def units(self) -> List[int]:
        if self._units is None:
            self._units = sorted(self._compute_units())
            self._unit_set = set(self._units)
        return self._units

    def is_unit(self, a: int) -> bool:
        self.units
        return a in self._unit_set

    @property
    def ideal(self) -> List[int]:
        return [a for a in range(self.n) if not self.is_unit(a)]

    def inv(self, a: int) -> int:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{self.label(a)} is not a unit of {self.name}")
        if a not in self._inv:
            for b in range(self.n):
                if self.mul(a, b) == 1:
                    self._inv[a] = b
                    break
        return self._inv[a]

    def residue_size(self) -> int:
        return self.n // len(self.ideal)

    def residue(self, a: int) -> int:
        """Index of the coset ``a + m`` (coset of ``0`` has index 0)."""
        if not hasattr(self, "_residue"):
            ideal = set(self.ideal)
            labels: Dict[int, int] = {}
            res = [0] * self.n
            reps: List[int] = []
            for x in range(self.n):
                if x in labels:
                    continue
                idx = len(reps)
                reps.append(x)
                for m in ideal:
                    labels[self.add(x, m)] = idx
            for x in range(self.n):
                res[x] = labels[x]
            self._residue = res
            self._residue_reps = reps
        return self._residue[a]

    def same_residue(self, a: int, b: int) -> bool:
        return not self.is_unit(self.sub(a, b))

    # involution ------------------------------------------------------------
    def star(self, a: int) -> int:
        if self._star is None:
            return a
        return self._star(a)

    def set_involution(self, kind: str):
        if kind in ("id", "trivial"):
            self._star = None
            self.star_name = "id"
        elif kind == "frob":
            self._star = self._frobenius
            self.star_name = "frob"
        else:
            raise DescriptorError(f"unknown involution {kind!r}")

    def _frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    # labels ----------------------------------------------------------------
    def label(self, a: int) -> str:
        return str(a)

    def parse(self, s: str) -> int:
        s = s.strip()
        try:
            return self.from_int(int(s))
        except ValueError:
            raise DescriptorError(f"cannot parse element {s!r} of {self.name}")

    def describe(self) -> dict:
        return {
            "name": self.name,
            "order": self.n,
            "units": len(self.units),
            "ideal_order": len(self.ideal),
            "residue_field_order": self.residue_size(),
            "residue_characteristic": self.p,
            "involution": self.star_name,
            "eps": self.label(self.eps),
        }


class ZMod(Ring):
    def __init__(self, n: int):
        super().__init__()
        if n < 2:
            raise DescriptorError("modulus must be at least 2")
        self.p, self.k = _prime_power(n)
        self.n = n
        self.name = f"zmod:{n}"
        self._build_tables()

    def _add(self, a, b):
        return (a + b) % self.n

    def _mul(self, a, b):
        return (a * b) % self.n

    def _neg(self, a):
        return (-a) % self.n

    def _compute_units(self):
        units = [a for a in range(self.n) if gcd(a, self.n) == 1]
        for a in units:
            self._inv[a] = pow(a, -1, self.n)
        return units

    def from_int(self, k):
        return k % self.n

    def label(self, a):
        return str(a)


def _poly_trim(c: List[int]) -> List[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    a = list(a)
    dm = len(m) - 1
    lead_inv = pow(m[-1], -1, p)
    while len(_poly_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        c = (a[-1] * lead_inv) % p
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
    return _poly_trim(a)


def _irreducible(f: Sequence[int], p: int) -> bool:
    d = len(f) - 1
    if d < 1:
        return False
    for dd in range(1, d // 2 + 1):
        for code in range(p ** dd):
            g = [(code // p ** i) % p for i in range(dd)] + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


_TERM = re.compile(r"^([+-]?)(\d*)\*?(t(?:\^(\d+))?)?$")


def parse_poly(s: str, p: int) -> List[int]:
    """Parse an integer polynomial in ``t`` such as ``t^2+2t+1``."""
    text = s.replace(" ", "")
    if not text:
        raise DescriptorError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", text)
    if "".join(terms) != text:
        raise DescriptorError(f"cannot parse polynomial {s!r}")
    coeffs: Dict[int, int] = {}
    for term in terms:
        m = _TERM.match(term)
        if not m or (not m.group(2) and not m.group(3)):
            raise DescriptorError(f"cannot parse term {term!r} in {s!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            e = int(m.group(4)) if m.group(4) else 1
        else:
            e = 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
    deg = max(coeffs)
    return _poly_trim([coeffs.get(i, 0) % p for i in range(deg + 1)])


class PolyQuotient(Ring):
    """``F_p[t]/(f^m)``; elements are coefficient vectors read in base ``p``."""

    def __init__(self, p: int, f: Sequence[int], m: int):
        super().__init__()
        if not _is_prime(p):
            raise DescriptorError(f"{p} is not prime")
        f = _poly_trim([c % p for c in f])
        if len(f) < 2:
            raise DescriptorError("f must have positive degree")
        if f[-1] != 1:
            inv = pow(f[-1], -1, p)
            f = [(c * inv) % p for c in f]
        if not _irreducible(f, p):
            raise NotLocalError(f"f = {_fmt_poly(f)} is reducible mod {p}", witness=_fmt_poly(f))
        if m < 1:
            raise DescriptorError("exponent m must be positive")
        self.p = p
        self.f = f
        self.m = m
        mod = [1]
        for _ in range(m):
            mod = _poly_mul(mod, f, p)
        self.modulus = mod
        self.deg = len(mod) - 1
        self.n = p ** self.deg
        if self.n > ELEMENT_CAP:
            raise CapExceeded(f"ring of order {self.n}", ELEMENT_CAP)
        self.name = f"gfpoly:{p}:{_fmt_poly(f)}:{m}"
        self._build_tables()

    def decode(self, a: int) -> List[int]:
        out = []
        for _ in range(self.deg):
            out.append(a % self.p)
            a //= self.p
        return out

    def encode(self, c: Sequence[int]) -> int:
        out = 0
        for i in reversed(range(self.deg)):
            out = out * self.p + (c[i] if i < len(c) else 0)
        return out

    def _add(self, a, b):
        x, y = self.decode(a), self.decode(b)
        return self.encode([(u + v) % self.p for u, v in zip(x, y)])

    def _neg(self, a):
        return self.encode([(-u) % self.p for u in self.decode(a)])

    def _mul(self, a, b):
        prod = _poly_mul(_poly_trim(self.decode(a)), _poly_trim(self.decode(b)), self.p)
        return self.encode(_poly_mod(prod, self.modulus, self.p))

    def _compute_units(self):
        units = []
        for a in range(self.n):
            c = _poly_trim(self.decode(a))
            if c and _poly_mod(c, self.f, self.p):
                units.append(a)
        order = len(units)
        for a in units:
            self._inv[a] = self.power(a, order - 1)
        return units

    def from_int(self, k):
        return k % self.p

    def label(self, a):
        return _fmt_poly(self.decode(a))

    def parse(self, s):
        coeffs = parse_poly(s, self.p)
        if not coeffs:
            return 0
        return self.encode(_poly_mod(coeffs, self.modulus, self.p))


def _fmt_poly(c: Sequence[int]) -> str:
    parts = []
    for e in reversed(range(len(c))):
        v = c[e]
        if not v:
            continue
        if e == 0:
            parts.append(str(v))
        else:
            coef = "" if v == 1 else str(v)
            parts.append(coef + ("t" if e == 1 else f"t^{e}"))
    return "+".join(parts) if parts else "0"


class TableRing(Ring):
    """Ring defined by explicit tables, e.g. a ring reconstructed from points."""

    def __init__(self, name: str, add_table, mul_table, labels: Optional[List[str]] = None,
                 p: Optional[int] = None):
        super().__init__()
        self.name = name
        self.n = len(add_table)
        self._add_t = [list(r) for r in add_table]
        self._mul_t = [list(r) for r in mul_table]
        self._neg_t = [row.index(0) for row in self._add_t]
        self._labels = labels
        if p is None:
            order = 1
            x = 1
            while x != 0:
                x = self._add_t[x][1]
                order += 1
            p = _prime_power(order)[0] if order > 1 else 1
        self.p = p

    def _add(self, a, b):
        return self._add_t[a][b]

    def _mul(self, a, b):
        return self._mul_t[a][b]

    def _neg(self, a):
        return self._neg_t[a]

    def label(self, a):
        if self._labels:
            return self._labels[a]
        return str(a)

    def parse(self, s):
        s = s.strip()
        if self._labels and s in self._labels:
            return self._labels.index(s)
        return super().parse(s)


class Truncated(Ring):
    """``B[u]/(u^k)`` over a finite field ``B``; the involution acts on coefficients."""

    def __init__(self, base: Ring, k: int):
        super().__init__()
        if k < 1:
            raise DescriptorError("truncation depth must be positive")
        self.base = base
        self.k = k
        self.n = base.n ** k
        self.p = base.p
        self.name = f"{base.name}:trunc={k}"
        self._build_tables()

    def decode(self, a: int) -> List[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.base.n)
            a //= self.base.n
        return out

    def encode(self, c: Sequence[int]) -> int:
        out = 0
        for x in reversed(list(c)):
            out = out * self.base.n + x
        return out

    def _add(self, a, b):
        B = self.base
        return self.encode([B.add(x, y) for x, y in zip(self.decode(a), self.decode(b))])

    def _neg(self, a):
        return self.encode([self.base.neg(x) for x in self.decode(a)])

    def _mul(self, a, b):
        B = self.base
        ca, cb = self.decode(a), self.decode(b)
        out = [0] * self.k
        for i, x in enumerate(ca):
            for j in range(self.k - i):
                out[i + j] = B.add(out[i + j], B.mul(x, cb[j]))
        return self.encode(out)

    def _compute_units(self):
        units = [a for a in range(self.n) if self.base.is_unit(self.decode(a)[0])]
        return units

    def _frobenius(self, a: int) -> int:
        return self.encode([self.base._frobenius(x) for x in self.decode(a)])

    def label(self, a):
        parts = []
        for e, x in enumerate(self.decode(a)):
            if x == 0:
                continue
            c = self.base.label(x)
            if e == 0:
                parts.append(c)
            else:
                coef = "" if c == "1" else (f"({c})" if "+" in c else c)
                parts.append(coef + ("u" if e == 1 else f"u^{e}"))
        return "+".join(parts) if parts else "0"

    def parse(self, s):
        s = s.strip()
        for a in range(self.n):
            if self.label(a) == s:
                return a
        return super().parse(s)


def _least_irreducible_quadratic(p: int) -> List[int]:
    for c in range(1, p):
        f = [c, 0, 1]
        if _irreducible(f, p):
            return f
    for code in range(p * p):
        f = [code % p, code // p, 1]
        if _irreducible(f, p):
            return f
    raise DescriptorError(f"no irreducible quadratic mod {p}")


def make_ring(desc: str, cap: int = ELEMENT_CAP) -> Ring:
    """Parse a ring descriptor and build the ring.

    Accepted forms: ``zmod:9``, ``zmod:3^2``, ``gfpoly:5:t:2``,
    ``gfpoly:3:t^2+1:2``, ``gf:9``, ``gf:9:frob`` and the option suffixes
    ``:inv=frob|id``, ``:eps=<element>`` and ``:trunc=<k>`` (``GF(q)[u]/(u^k)``).
    """
    if not isinstance(desc, str) or ":" not in desc:
        raise DescriptorError(f"cannot parse ring descriptor {desc!r}")
    parts = desc.strip().split(":")
    options = {}
    core = []
    for part in parts:
        if "=" in part:
            key, _, val = part.partition("=")
            options[key] = val
        else:
            core.append(part)
    kind = core[0]
    involution = options.pop("inv", None)
    trunc = options.pop("trunc", None)
    eps_text = options.pop("eps", None)
    if options:
        raise DescriptorError(f"unknown option(s) {sorted(options)} in {desc!r}")
    try:
        if kind == "zmod":
            if len(core) != 2:
                raise DescriptorError(f"expected zmod:<n> in {desc!r}")
            n = _parse_int_power(core[1])
            if n > cap:
                raise CapExceeded(f"ring of order {n}", cap)
            ring: Ring = ZMod(n)
        elif kind == "gfpoly":
            if len(core) != 4:
                raise DescriptorError(f"expected gfpoly:<p>:<f(t)>:<m> in {desc!r}")
            p = int(core[1])
            if not _is_prime(p):
                raise DescriptorError(f"{p} is not prime")
            ring = PolyQuotient(p, parse_poly(core[2], p), int(core[3]))
        elif kind == "gf":
            if len(core) not in (2, 3):
                raise DescriptorError(f"expected gf:<q>[:frob] in {desc!r}")
            q = _parse_int_power(core[1])
            p, k = _prime_power(q)
            if len(core) == 3:
                if core[2] != "frob":
                    raise DescriptorError(f"unknown gf option {core[2]!r}")
                involution = involution or "frob"
            if k == 1:
                ring = ZMod(p)
            elif k == 2:
                ring = PolyQuotient(p, _least_irreducible_quadratic(p), 1)
                ring.name = f"gf:{q}"
            else:
                raise DescriptorError("only prime fields and quadratic extensions are supported")
        else:
            raise DescriptorError(f"unknown ring kind {kind!r}")
    except NotLocalError:
        raise
    except (ValueError, IndexError) as exc:
        if isinstance(exc, DescriptorError):
            raise
        raise DescriptorError(f"cannot parse ring descriptor {desc!r}: {exc}")
    if trunc is not None:
        if kind != "gf" or not trunc.isdigit():
            raise DescriptorError("trunc=<k> applies to gf:<q> only")
        if ring.n ** int(trunc) > cap:
            raise CapExceeded(f"ring of order {ring.n ** int(trunc)}", cap)
        ring = Truncated(ring, int(trunc))
    if ring.n > cap:
        raise CapExceeded(f"ring of order {ring.n}", cap)
    if involution:
        ring.set_involution(involution)
        if involution == "frob" and not _frob_is_involution(ring):
            raise DescriptorError(f"Frobenius is not an involution of {ring.name}")
    if eps_text is not None:
        ring.eps = ring.parse(eps_text)
    if involution and involution != "id":
        ring.name += f":inv={involution}"
    if eps_text is not None:
        ring.name += f":eps={eps_text}"
    return ring


def _frob_is_involution(ring: Ring) -> bool:
    return all(ring.star(ring.star(a)) == a for a in ring.elements) and \
        any(ring.star(a) != a for a in ring.elements)


def _parse_int_power(s: str) -> int:
    if "^" in s:
        b, _, e = s.partition("^")
        return int(b) ** int(e)
    return int(s)


def _sample_tuples(n: int, arity: int, limit: int, seed: int):
    total = n ** arity
    if total <= limit:
        for code in range(total):
            yield tuple((code // n ** i) % n for i in range(arity))
        return
    rng = random.Random(seed)
    for _ in range(limit):
        yield tuple(rng.randrange(n) for _ in range(arity))


def ring_ops(R: Ring, limit: int = 1 << 20, seed: int = 0) -> List[dict]:
    """Verify ring, locality and involution invariants.

    Returns check records. Triple-indexed checks run exhaustively while
    ``n^3 <= limit`` and on a seeded sample otherwise.
    """
    from .report import record

    n = R.n
    exhaustive = n ** 3 <= limit
    status_ok = "pass" if exhaustive else "sampled"
    out = []

    def first_failure(pred, arity):
        for t in _sample_tuples(n, arity, limit, seed):
            if not pred(*t):
                return [R.label(v) for v in t]
        return None

    w = first_failure(lambda a, b, c: R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
                      and R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)), 3)
    out.append(record("associativity and distributivity", "(ab)c = a(bc), a(b+c) = ab+ac",
                      w is None, w, status_ok))
    w = first_failure(lambda a, b: R.mul(a, b) == R.mul(b, a) and R.add(a, b) == R.add(b, a), 2)
    out.append(record("commutativity", "ab = ba", w is None, w))
    w = next(([R.label(u)] for u in R.units if R.mul(u, R.inv(u)) != 1), None)
    out.append(record("unit inverses", "r * r^-1 = 1", w is None, w))
    ideal = R.ideal
    iset = set(ideal)
    w = next(([R.label(a), R.label(b)] for a in ideal for b in ideal
              if R.add(a, b) not in iset), None)
    out.append(record("non-units form an ideal", "m + m in m", w is None, w))
    w = next(([R.label(a), R.label(r)] for a in ideal for r in R.elements
              if R.mul(r, a) not in iset), None)
    out.append(record("ideal absorbs products", "R m in m", w is None, w))
    w = first_failure(lambda a, b: R.star(R.add(a, b)) == R.add(R.star(a), R.star(b))
                      and R.star(R.mul(a, b)) == R.mul(R.star(b), R.star(a))
                      and R.star(R.star(a)) == a, 2)
    out.append(record("involution", "(a+b)* = a*+b*, (ab)* = b*a*, a** = a", w is None, w))
    e = R.eps
    ok = R.mul(e, R.star(e)) == 1 and all(R.mul(e, r) == R.mul(r, e) for r in R.elements)
    out.append(record("eps central with eps eps* = 1", "eps eps* = 1", ok,
                      None if ok else [R.label(e)]))
    return out
