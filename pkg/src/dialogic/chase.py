"""Saturation: complete a partial realization so all actions are total, the
declared equations hold, and every cone is an honest limit.

The loop alternates three phases until stable:

  closure   propagate identities and composites over known values, including
            backward determination (h and f known forces g on the image of f),
            and merge conflicting values;
  totalize  invent one fresh element per genuinely undetermined action value;
  repair    per cone, first merge vertex elements whose projection tuples
            agree, then add a fresh vertex element for each unmatched tuple.

Fresh names are deterministic (point, global step, digest of the creating
tuple), merges resolve to the lexicographically smallest member, and the
whole run is capped by an element budget so divergent inputs fail loudly.
Every creation is recorded; replay of the event log is what builds induced
morphisms out of chased realizations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ChaseBudgetExceeded, InvalidRealization
from .realization import Realization, matching_tuples
from .sketch import Sketch
from .util import UnionFind, fresh_name

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class PreRealization:
    """Partial input to the chase; actions may be missing values, and
    equations are element pairs to identify up front."""

    sketch: Sketch
    carriers: dict[str, list[str]]
    actions: dict[str, dict[str, str]]
    equations: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class TraceEvent:
    step: int
    kind: str  # "seed" | "app" | "cone"
    element: str
    point: str
    data: tuple


@dataclass
class ChaseResult:
    realization: Realization
    events: tuple[TraceEvent, ...]
    uf: UnionFind

    def resolve(self, name: str) -> str:
        return self.uf.find(name)


class _Chase:
    def __init__(self, pre: PreRealization, budget: int):
        self.sketch = pre.sketch
        self.budget = budget
        self.uf = UnionFind()
        self.point_of: dict[str, str] = {}
        self.actions: dict[str, dict[str, str]] = {a: {} for a in pre.sketch.arrows}
        self.events: list[TraceEvent] = []
        self.step = 0
        for p in sorted(pre.sketch.points):
            for x in sorted(pre.carriers.get(p, ())):
                if x in self.point_of:
                    raise InvalidRealization(
                        f"element name {x} used at both {self.point_of[x]} and {p}"
                    )
                self._register(x, p, "seed", ())
        for a, table in pre.actions.items():
            for x, y in table.items():
                if self.point_of.get(x) != pre.sketch.src(a):
                    raise InvalidRealization(f"action {a} defined at foreign element {x}")
                if self.point_of.get(y) != pre.sketch.tgt(a):
                    raise InvalidRealization(f"action {a} hits foreign element {y}")
                self._set(a, x, y)
        for x, y in pre.equations:
            self._merge(x, y)

    # -- primitives -----------------------------------------------------

    def _register(self, name: str, point: str, kind: str, data: tuple) -> str:
        if len(self.point_of) >= self.budget:
            raise ChaseBudgetExceeded(self.budget, "element budget exhausted")
        self.uf.add(name)
        self.point_of[name] = point
        self.events.append(TraceEvent(self.step, kind, name, point, data))
        self.step += 1
        return name

    def _fresh(self, point: str, kind: str, data: tuple) -> str:
        name = fresh_name(point, self.step, kind, *map(str, data))
        assert name not in self.point_of
        return self._register(name, point, kind, data)

    def _set(self, arrow: str, x: str, y: str) -> bool:
        """Record arrow(x) = y; a conflicting prior value becomes a merge."""
        table = self.actions[arrow]
        rx, ry = self.uf.find(x), self.uf.find(y)
        old = table.get(rx)
        if old is None:
            table[rx] = ry
            return True
        rold = self.uf.find(old)
        if rold != ry:
            self._merge(rold, ry)
            return True
        return False

    def _merge(self, a: str, b: str) -> None:
        pa, pb = self.point_of[self.uf.find(a)], self.point_of[self.uf.find(b)]
        assert pa == pb, f"cross-point merge {a}:{pa} with {b}:{pb}"
        self.uf.union(a, b)

    def _alive(self, point: str) -> list[str]:
        return sorted(
            {self.uf.find(x) for x, p in self.point_of.items() if p == point}
        )

    def _normalize_actions(self) -> bool:
        changed = False
        for a in sorted(self.actions):
            table = self.actions[a]
            fresh: dict[str, str] = {}
            for x, y in sorted(table.items()):
                rx, ry = self.uf.find(x), self.uf.find(y)
                old = fresh.get(rx)
                if old is None:
                    fresh[rx] = ry
                elif self.uf.find(old) != ry:
                    self._merge(old, ry)
                    changed = True
            if fresh != table:
                self.actions[a] = fresh
                changed = True
        return changed

    # -- phases ----------------------------------------------------------

    def closure(self) -> None:
        s = self.sketch
        changed = True
        while changed:
            changed = self._normalize_actions()
            for p, ident in sorted(s.identities.items()):
                for x in self._alive(p):
                    changed |= self._set(ident, x, x)
            for (f, g), h in sorted(s.composites.items()):
                for x, y in sorted(self.actions[f].items()):
                    ry = self.uf.find(y)
                    z = self.actions[g].get(ry)
                    w = self.actions[h].get(self.uf.find(x))
                    if z is not None:
                        changed |= self._set(h, x, z)
                    elif w is not None:
                        changed |= self._set(g, ry, w)

    def totalize(self) -> bool:
        # Only elements alive before the sweep: an element created here gets
        # its actions next round, after closure had a chance to pin them, so
        # determined values are never preempted by fresh ones.
        created = False
        alive = {p: self._alive(p) for p in self.sketch.points}
        for a in sorted(self.actions):
            src, tgt = self.sketch.arrows[a]
            for x in alive[src]:
                if self.uf.find(x) not in self.actions[a]:
                    y = self._fresh(tgt, "app", (a, self.uf.find(x)))
                    self._set(a, x, y)
                    created = True
        return created

    def repair_cones(self) -> bool:
        # Soundness first: a vertex element's projections must satisfy the
        # base edges, so force each edge action over them (set or merge).
        changed = False
        for cone in self.sketch.cones:
            for v in self._alive(cone.vertex):
                for _, (n1, n2, f) in sorted(cone.base.edges.items()):
                    x = self.actions[cone.projections[n1]].get(v)
                    y = self.actions[cone.projections[n2]].get(v)
                    if x is not None and y is not None:
                        changed |= self._set(f, x, y)
        if changed:
            return True
        # Uniqueness one cone per pass: merges invalidate the normalized
        # tables, so later cones must wait for the next closure.
        for cone in self.sketch.cones:
            nodes = sorted(cone.base.nodes)
            image: dict[tuple[str, ...], list[str]] = {}
            for v in self._alive(cone.vertex):
                t = tuple(
                    self.uf.find(self.actions[cone.projections[n]][v]) for n in nodes
                )
                image.setdefault(t, []).append(v)
            for t, vs in sorted(image.items()):
                for other in vs[1:]:
                    self._merge(vs[0], other)
                    changed = True
            if changed:
                return True
        # Existence in bulk: fresh vertices never merge, so one snapshot
        # serves every cone.  Materializing law situations in the same wave
        # as the structure they govern keeps their merges one closure away,
        # which is what stops freely generated elements from snowballing.
        snapshot = self._snapshot()
        for cone in self.sketch.cones:
            nodes = sorted(cone.base.nodes)
            covered = {
                tuple(snapshot.actions[cone.projections[n]][v] for n in nodes)
                for v in snapshot.carriers[cone.vertex]
            }
            for t in matching_tuples(snapshot, cone):
                if t not in covered:
                    v = self._fresh(cone.vertex, "cone", (cone.name,) + t)
                    for n, value in zip(nodes, t):
                        self._set(cone.projections[n], v, value)
                    changed = True
        return changed

    def _snapshot(self) -> Realization:
        carriers = {p: tuple(self._alive(p)) for p in self.sketch.points}
        actions = {
            a: {self.uf.find(x): self.uf.find(y) for x, y in table.items()}
            for a, table in self.actions.items()
        }
        return Realization(self.sketch, carriers, actions)

    def run(self) -> None:
        while True:
            self.closure()
            if self.totalize():
                continue
            if not self.repair_cones():
                return


def saturate(pre: PreRealization, budget: int = DEFAULT_BUDGET) -> ChaseResult:
    engine = _Chase(pre, budget)
    engine.run()
    engine.closure()
    return ChaseResult(engine._snapshot(), tuple(engine.events), engine.uf)


def chase_generic(sketch: Sketch, point: str, budget: int = DEFAULT_BUDGET) -> ChaseResult:
    """Saturation of a single generic element sitting at the given point."""
    pre = PreRealization(sketch, {point: ["x0"]}, {})
    return saturate(pre, budget)


def replay(
    result: ChaseResult,
    seed_images: dict[str, str],
    target: Realization,
) -> dict[str, str]:
    """Map a chased realization into any saturated realization over the same
    sketch by replaying the event log: seeds go where seed_images says, an
    applied-action element goes to the action applied to the image, and a
    cone-repair element goes to the unique vertex element over the mapped
    projection tuple.  Returns components keyed by resolved element names."""

    sketch = target.sketch
    cone_index: dict[str, dict[tuple[str, ...], str]] = {}

    def index_for(cone_name: str) -> dict[tuple[str, ...], str]:
        got = cone_index.get(cone_name)
        if got is None:
            cone = sketch.cone_named(cone_name)
            nodes = sorted(cone.base.nodes)
            got = {}
            for v in target.carriers[cone.vertex]:
                t = tuple(target.actions[cone.projections[n]][v] for n in nodes)
                got[t] = v
            cone_index[cone_name] = got
        return got

    phi: dict[str, str] = {}
    for ev in result.events:
        rep = result.resolve(ev.element)
        if rep in phi:
            continue
        if ev.kind == "seed":
            phi[rep] = seed_images[ev.element]
        elif ev.kind == "app":
            arrow, arg = ev.data
            phi[rep] = target.actions[arrow][phi[result.resolve(arg)]]
        else:
            cone_name, *t = ev.data
            mapped = tuple(phi[result.resolve(x)] for x in t)
            phi[rep] = index_for(cone_name)[mapped]
    return phi
