"""Permutations of finite sets with an equivalence relation, acting on the right.

A permutation is a tuple ``p`` with ``x . p = p[x]``. Products follow the
right-action rule ``x . (pq) = (x . p) . q``.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Perm = Tuple[int, ...]

CLOSURE_CAP = 50000


class CapExceeded(RuntimeError):
    """A closure or enumeration grew beyond the configured cap."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeds cap {cap}")
        self.what = what
        self.cap = cap


class EquivSet:
    """Points ``0..n-1`` with labels and a class index for each point."""

    def __init__(self, labels: Sequence[str], cls: Sequence[int]):
        if len(labels) != len(cls):
            raise ValueError("labels and classes differ in length")
        self.labels = list(labels)
        # renumber classes by first occurrence so class ids are canonical
        renum: Dict[int, int] = {}
        self.cls = [renum.setdefault(c, len(renum)) for c in cls]
        self.n = len(labels)
        self.classes: List[List[int]] = [[] for _ in renum]
        for x, c in enumerate(self.cls):
            self.classes[c].append(x)
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    def equiv(self, x: int, y: int) -> bool:
        return self.cls[x] == self.cls[y]

    def label(self, x: int) -> str:
        return self.labels[x]

    def point(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise ValueError(f"unknown point {label!r}")

    def preserves(self, p: Perm) -> bool:
        """True if ``p`` maps classes to classes."""
        image: Dict[int, int] = {}
        for x in range(self.n):
            c = self.cls[x]
            d = self.cls[p[x]]
            if image.setdefault(c, d) != d:
                return False
        return len(set(image.values())) == len(image)


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """First ``p`` then ``q``."""
    return tuple([q[i] for i in p])


def compose_all(perms: Iterable[Perm], n: int) -> Perm:
    out = identity(n)
    for p in perms:
        out = compose(out, p)
    return out


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def conj(g: Perm, h: Perm) -> Perm:
    """``g^h = h^-1 g h``."""
    hinv = inverse(h)
    return tuple([h[g[i]] for i in hinv])


def power(p: Perm, k: int) -> Perm:
    if k < 0:
        return power(inverse(p), -k)
    out = identity(len(p))
    for _ in range(k):
        out = compose(out, p)
    return out


def is_identity(p: Perm) -> bool:
    return all(i == j for i, j in enumerate(p))


def closure(gens: Sequence[Perm], n: int, cap: int = CLOSURE_CAP,
            what: str = "group") -> List[Perm]:
    """All elements of the group generated by ``gens``, in BFS order."""
    start = identity(n)
    seen = {start}
    order = [start]
    queue = deque([start])
    gens = [g for g in dict.fromkeys(gens)]
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h not in seen:
                seen.add(h)
                order.append(h)
                if len(order) > cap:
                    raise CapExceeded(what, cap)
                queue.append(h)
    return order


def small_generating_set(group: Sequence[Perm], n: int) -> List[Perm]:
    """Greedy generating subset of an explicitly listed group."""
    gens: List[Perm] = []
    span = {identity(n)}
    target = len(set(group))
    for g in group:
        if g not in span:
            gens.append(g)
            span = set(closure(gens, n, cap=max(target, 1) + 1))
            if len(span) == target:
                break
    return gens


def is_group(elements: Sequence[Perm]) -> Optional[Tuple[Perm, Perm]]:
    """None if ``elements`` is closed under products, else a bad pair."""
    s = set(elements)
    for a in elements:
        for b in elements:
            if compose(a, b) not in s:
                return a, b
    return None


def stabilizer(group: Iterable[Perm], points: Iterable[int]) -> List[Perm]:
    pts = list(points)
    return [g for g in group if all(g[x] == x for x in pts)]


def orbit(x: int, group: Iterable[Perm]) -> List[int]:
    return sorted({g[x] for g in group})


def induced(p: Perm, space: EquivSet) -> Perm:
    """The permutation of classes induced by ``p``."""
    return tuple(space.cls[p[members[0]]] for members in space.classes)


def perm_labels(p: Perm, space: EquivSet) -> Dict[str, str]:
    """Moved points of ``p`` as a label map (for witnesses)."""
    return {space.labels[i]: space.labels[j] for i, j in enumerate(p) if i != j}
