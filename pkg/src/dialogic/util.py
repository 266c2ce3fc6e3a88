"""Small shared helpers: union-find with lexicographic representatives, naming."""

from __future__ import annotations

import hashlib


def name_rank(x: str) -> tuple[bool, str]:
    """Merge preference: given names beat chase-generated ones (which always
    contain '#'), ties break lexicographically.  Keeps user-facing names as
    representatives when a fresh element collapses onto a seeded one."""
    return ("#" in x, x)


class UnionFind:
    """Union-find over strings; the class representative is the member with
    the smallest name_rank, so merge results do not depend on merge order."""

    def __init__(self):
        self.parent: dict[str, str] = {}

    def add(self, x: str) -> None:
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x: str) -> str:
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> str:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        lo, hi = (ra, rb) if name_rank(ra) < name_rank(rb) else (rb, ra)
        self.parent[hi] = lo
        return lo

    def same(self, a: str, b: str) -> bool:
        return self.find(a) == self.find(b)


def digest8(*parts: str) -> str:
    h = hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()
    return h[:8]


def fresh_name(point: str, step: int, *parts: str) -> str:
    """Deterministic name for a chase-created element: point#step#digest."""
    return f"{point}#{step}#{digest8(*parts)}"
