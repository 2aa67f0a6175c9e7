"""Free modules ``R^n`` and quadratic forms given by polynomial strings."""

from __future__ import annotations

import re
from typing import List, Sequence, Tuple

from .localring import DescriptorError, Ring

Vec = Tuple[int, ...]


class FreeModule:
    """``W = R^n`` with vectors encoded as integers in base ``|R|``."""

    def __init__(self, R: Ring, rank: int):
        if rank < 1:
            raise DescriptorError("rank must be positive")
        self.R = R
        self.rank = rank
        self.size = R.n ** rank
        self.vectors: List[Vec] = [self.decode(i) for i in range(self.size)]

    def decode(self, i: int) -> Vec:
        out = []
        for _ in range(self.rank):
            out.append(i % self.R.n)
            i //= self.R.n
        return tuple(out)

    def encode(self, v: Sequence[int]) -> int:
        out = 0
        for c in reversed(v):
            out = out * self.R.n + c
        return out

    def add(self, u: Vec, v: Vec) -> Vec:
        return tuple(self.R.add(a, b) for a, b in zip(u, v))

    def neg(self, u: Vec) -> Vec:
        return tuple(self.R.neg(a) for a in u)

    def sub(self, u: Vec, v: Vec) -> Vec:
        return tuple(self.R.sub(a, b) for a, b in zip(u, v))

    def scale(self, u: Vec, r: int) -> Vec:
        """Right scalar multiplication ``u r``."""
        return tuple(self.R.mul(a, r) for a in u)

    def zero(self) -> Vec:
        return (0,) * self.rank

    def in_radical(self, u: Vec) -> bool:
        """True when every coordinate lies in the maximal ideal (``u`` in ``W m``)."""
        return not any(self.R.is_unit(a) for a in u)

    def label(self, u: Vec) -> str:
        if self.rank == 1:
            return self.R.label(u[0])
        return "(" + ",".join(self.R.label(a) for a in u) + ")"


_QTERM = re.compile(r"^([+-]?)(\d*)\*?((?:x\d+(?:\^\d+)?\*?)+)$")


class QuadraticForm:
    """``q(v) = sum_{i<=j} c_ij v_i v_j`` over a commutative ring.

    ``h(u, v) = sum_{i<=j} c_ij u_i v_j`` is the associated (non-symmetric)
    bilinear form with ``h(v, v) = q(v)``; ``f(u, v) = h(u, v) + h(v, u)``.
    """

    def __init__(self, R: Ring, coeffs: List[List[int]], text: str = ""):
        self.R = R
        self.c = coeffs
        self.rank = len(coeffs)
        self.text = text

    @classmethod
    def parse(cls, R: Ring, text: str, rank: int = 0) -> "QuadraticForm":
        s = text.replace(" ", "")
        terms = re.findall(r"[+-]?[^+-]+", s)
        if not terms or "".join(terms) != s:
            raise DescriptorError(f"cannot parse quadratic form {text!r}")
        parsed = []
        top = rank
        for term in terms:
            m = _QTERM.match(term)
            if not m:
                raise DescriptorError(f"cannot parse term {term!r} of {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            idx = []
            for var, exp in re.findall(r"x(\d+)(?:\^(\d+))?", m.group(3)):
                idx += [int(var) - 1] * (int(exp) if exp else 1)
            if len(idx) != 2 or min(idx) < 0:
                raise DescriptorError(f"term {term!r} is not quadratic")
            i, j = sorted(idx)
            parsed.append((i, j, sign * coef))
            top = max(top, j + 1)
        c = [[0] * top for _ in range(top)]
        for i, j, k in parsed:
            c[i][j] = R.add(c[i][j], R.from_int(k))
        return cls(R, c, text)

    def h(self, u: Vec, v: Vec) -> int:
        R = self.R
        out = 0
        for i in range(self.rank):
            for j in range(i, self.rank):
                if self.c[i][j]:
                    out = R.add(out, R.mul(self.c[i][j], R.mul(u[i], v[j])))
        return out

    def q(self, v: Vec) -> int:
        return self.h(v, v)

    def f(self, u: Vec, v: Vec) -> int:
        return self.R.add(self.h(u, v), self.h(v, u))

    def isotropic_witness(self, W: FreeModule):
        """A vector outside ``W m`` with ``q`` in ``m``, or None."""
        for v in W.vectors:
            if not W.in_radical(v) and not self.R.is_unit(self.q(v)):
                return v
        return None
