"""The category a sketch presents, computed by congruence closure.

Morphism classes are paths modulo the declared composite and identity
equations.  Closure proceeds by alternating three steps until stable: merge
pending equalities, make composition total on known classes, and propagate
associativity.  A budget on the number of classes keeps divergence loud:
presentations with infinitely many morphisms raise instead of spinning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ChaseBudgetExceeded
from .realization import Realization
from .sketch import Sketch

DEFAULT_CLASS_BUDGET = 4000


class _Closure:
    def __init__(self, sketch: Sketch, budget: int):
        self.sketch = sketch
        self.budget = budget
        self.parent: list[int] = []
        self.csrc: list[str] = []
        self.ctgt: list[str] = []
        self.is_id: list[bool] = []
        self.witness: list[tuple[str, ...]] = []
        self.comp: dict[tuple[int, int], int] = {}
        self.pending: list[tuple[int, int]] = []

    def new_class(self, src: str, tgt: str, witness: tuple[str, ...], is_id: bool = False) -> int:
        if len(self.parent) >= self.budget:
            raise ChaseBudgetExceeded(
                self.budget, "class budget exhausted; presented category may be infinite"
            )
        i = len(self.parent)
        self.parent.append(i)
        self.csrc.append(src)
        self.ctgt.append(tgt)
        self.is_id.append(is_id)
        self.witness.append(witness)
        return i

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def merge(self, i: int, j: int) -> None:
        self.pending.append((i, j))

    def _apply_merges(self) -> bool:
        changed = False
        while self.pending:
            i, j = self.pending.pop()
            ri, rj = self.find(i), self.find(j)
            if ri == rj:
                continue
            changed = True
            keep, drop = min(ri, rj), max(ri, rj)
            self.parent[drop] = keep
            self.is_id[keep] = self.is_id[keep] or self.is_id[drop]
            self.witness[keep] = min(
                (self.witness[keep], self.witness[drop]),
                key=lambda w: (len(w), w),
            )
        return changed

    def _normalize_table(self) -> None:
        """Re-key the composition table by roots; collisions become merges,
        and pairs involving an identity dissolve into equalities."""
        while True:
            self._apply_merges()
            fresh: dict[tuple[int, int], int] = {}
            dirty = False
            for (a, b), c in self.comp.items():
                ra, rb, rc = self.find(a), self.find(b), self.find(c)
                if self.is_id[ra]:
                    if rb != rc:
                        self.merge(rb, rc)
                        dirty = True
                    continue
                if self.is_id[rb]:
                    if ra != rc:
                        self.merge(ra, rc)
                        dirty = True
                    continue
                key = (ra, rb)
                if key in fresh and fresh[key] != rc:
                    self.merge(fresh[key], rc)
                    dirty = True
                else:
                    fresh[key] = rc
            self.comp = fresh
            if not dirty and not self.pending:
                return

    def compose(self, a: int, b: int) -> int | None:
        ra, rb = self.find(a), self.find(b)
        if self.is_id[ra]:
            return rb
        if self.is_id[rb]:
            return ra
        got = self.comp.get((ra, rb))
        return None if got is None else self.find(got)

    def roots(self) -> list[int]:
        return [i for i in range(len(self.parent)) if self.find(i) == i]

    def run(self) -> None:
        while True:
            self._normalize_table()
            changed = False
            rs = self.roots()
            by_src: dict[str, list[int]] = {}
            for r in rs:
                by_src.setdefault(self.csrc[r], []).append(r)
            for a in rs:
                for b in by_src.get(self.ctgt[a], ()):
                    if self.is_id[a] or self.is_id[b]:
                        continue
                    if (a, b) not in self.comp:
                        w = self.witness[a] + self.witness[b]
                        self.comp[(a, b)] = self.new_class(self.csrc[a], self.ctgt[b], w)
                        changed = True
            # associativity sweep over the (now total) table
            for (a, b), c in list(self.comp.items()):
                rc = self.find(c)
                for d in by_src.get(self.ctgt[rc], ()):
                    left = self.compose(rc, d)
                    bd = self.compose(b, d)
                    right = None if bd is None else self.compose(a, bd)
                    if left is not None and right is not None and left != right:
                        self.merge(left, right)
                        changed = True
            if not changed and not self.pending:
                return


@dataclass
class Prototype:
    """Finite presentation closure: classes of parallel paths with a total
    composition law."""

    sketch: Sketch
    _closure: _Closure
    _arrow_class: dict[str, int]
    _id_class: dict[str, int]

    def class_of_arrow(self, a: str) -> int:
        return self._closure.find(self._arrow_class[a])

    def class_of_path(self, path: list[str]) -> int:
        if not path:
            raise ValueError("empty path needs a point; use identity_class")
        cur = self.class_of_arrow(path[0])
        for a in path[1:]:
            nxt = self._closure.compose(cur, self.class_of_arrow(a))
            if nxt is None:
                raise ValueError(f"composite undefined along {path}")
            cur = nxt
        return cur
    def identity_class(self, point: str) -> int:
        return self._closure.find(self._id_class[point])

    def compose_classes(self, a: int, b: int) -> int:
        got = self._closure.compose(a, b)
        if got is None:
            raise ValueError("classes not composable")
        return got

    def hom(self, src: str, tgt: str) -> list[int]:
        out = [
            r
            for r in self._closure.roots()
            if self._closure.csrc[r] == src and self._closure.ctgt[r] == tgt
        ]
        return sorted(out)

    def hom_sizes(self) -> dict[tuple[str, str], int]:
        sizes: dict[tuple[str, str], int] = {}
        for r in self._closure.roots():
            key = (self._closure.csrc[r], self._closure.ctgt[r])
            sizes[key] = sizes.get(key, 0) + 1
        return sizes

    def witness(self, cls: int) -> tuple[str, ...]:
        return self._closure.witness[self._closure.find(cls)]

    def is_identity_class(self, cls: int) -> bool:
        return self._closure.is_id[self._closure.find(cls)]

    def size(self) -> int:
        return len(self._closure.roots())


def prototype(sketch: Sketch, budget: int = DEFAULT_CLASS_BUDGET) -> Prototype:
    cl = _Closure(sketch, budget)
    id_class: dict[str, int] = {}
    for p in sorted(sketch.points):
        id_class[p] = cl.new_class(p, p, (), is_id=True)
    arrow_class: dict[str, int] = {}
    for a in sorted(sketch.arrows):
        src, tgt = sketch.arrows[a]
        if sketch.is_identity(a):
            arrow_class[a] = id_class[src]
        else:
            arrow_class[a] = cl.new_class(src, tgt, (a,))
    for (f, g), h in sorted(sketch.composites.items()):
        cf, cg, ch = arrow_class[f], arrow_class[g], arrow_class[h]
        cur = cl.compose(cf, cg)
        if cur is None:
            cl.comp[(cl.find(cf), cl.find(cg))] = ch
        else:
            cl.merge(cur, ch)
    cl.run()
    return Prototype(sketch, cl, arrow_class, id_class)


def is_acyclic(sketch: Sketch, budget: int = DEFAULT_CLASS_BUDGET) -> bool:
    """True when the presented category is finite with no non-identity
    endomorphisms.  One-sided: budget exhaustion counts as False, so True is
    trustworthy while False may only mean the budget was too small."""
    try:
        proto = prototype(sketch, budget)
    except ChaseBudgetExceeded:
        return False
    for r in proto._closure.roots():
        if proto._closure.csrc[r] == proto._closure.ctgt[r] and not proto._closure.is_id[r]:
            return False
    return True


def yoneda(sketch: Sketch, point: str, budget: int = DEFAULT_CLASS_BUDGET) -> Realization:
    """Representable realization at a point: the carrier at q is the set of
    path classes point -> q and arrows act by composing on the right.  Needs
    a finite prototype; the chase of a single generic element computes the
    same realization without one."""
    proto = prototype(sketch, budget)

    def name(cls: int) -> str:
        if proto.is_identity_class(cls):
            return "x0"
        return "x0." + ".".join(proto.witness(cls))

    carriers = {
        q: tuple(sorted(name(c) for c in proto.hom(point, q)))
        for q in sorted(sketch.points)
    }
    by_name = {
        name(c): c for q in sketch.points for c in proto.hom(point, q)
    }
    actions: dict[str, dict[str, str]] = {}
    for a in sorted(sketch.arrows):
        src, _tgt = sketch.arrows[a]
        table = {}
        for x in carriers[src]:
            table[x] = name(proto.compose_classes(by_name[x], proto.class_of_arrow(a)))
        actions[a] = table
    return Realization(sketch, carriers, actions)
