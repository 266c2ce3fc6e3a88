"""Backtracking search for realization morphisms.

Assigning an element immediately forces the images of all its action values,
so the search propagates forward along arrows before branching again.  Pins
fix chosen elements in advance; proof directives compile to pins.
"""

from __future__ import annotations

from .errors import InvalidMorphism, InvalidRealization, ShapeMismatch
from .realization import (
    Realization,
    RealizationMorphism,
    check_realization_morphism,
)


def hom_search(
    source: Realization,
    target: Realization,
    pins: dict[str, str] | None = None,
    limit: int | None = None,
) -> list[RealizationMorphism]:
    """All (or the first `limit`) morphisms source -> target, in a canonical
    order.  Element names must be globally unique within each realization."""
    if source.sketch != target.sketch:
        raise ShapeMismatch("hom search needs a shared sketch")
    point_of: dict[str, str] = {}
    for p, xs in source.carriers.items():
        for x in xs:
            if x in point_of:
                raise InvalidRealization(f"ambiguous element name {x}")
            point_of[x] = p
    arrows_from: dict[str, list[str]] = {p: [] for p in source.sketch.points}
    for a in sorted(source.sketch.arrows):
        arrows_from[source.sketch.src(a)].append(a)

    elems = [x for p in sorted(source.carriers) for x in source.carriers[p]]
    assignment: dict[str, str] = {}
    results: list[dict[str, str]] = []

    def assign(x: str, v: str, trail: list[str]) -> bool:
        queue = [(x, v)]
        while queue:
            x, v = queue.pop()
            cur = assignment.get(x)
            if cur is not None:
                if cur != v:
                    return False
                continue
            assignment[x] = v
            trail.append(x)
            p = point_of[x]
            for a in arrows_from[p]:
                queue.append((source.actions[a][x], target.actions[a][v]))
        return True

    def search(i: int) -> None:
        if limit is not None and len(results) >= limit:
            return
        while i < len(elems) and elems[i] in assignment:
            i += 1
        if i == len(elems):
            results.append(dict(assignment))
            return
        x = elems[i]
        for v in target.carriers[point_of[x]]:
            trail: list[str] = []
            if assign(x, v, trail):
                search(i + 1)
            for y in trail:
                del assignment[y]
            if limit is not None and len(results) >= limit:
                return

    trail0: list[str] = []
    ok = True
    for x, v in sorted((pins or {}).items()):
        if x not in point_of:
            raise ShapeMismatch(f"pin {x} is not a source element")
        if v not in target.carriers[point_of[x]]:
            ok = False
            break
        if not assign(x, v, trail0):
            ok = False
            break
    if ok:
        search(0)

    out = []
    for found in results:
        comps: dict[str, dict[str, str]] = {p: {} for p in source.sketch.points}
        for x, v in found.items():
            comps[point_of[x]][x] = v
        out.append(RealizationMorphism(source, target, comps))
    return out


def extend_morphism(
    source: Realization,
    target: Realization,
    partial: dict[str, dict[str, str]],
) -> RealizationMorphism:
    """Complete a partial assignment to a full morphism, or fail.

    Two closure rules run to a fixpoint: an assigned element forces the
    images of its action values, and a cone vertex whose projections all
    have images is sent to the target vertex over that tuple.  The second
    rule needs the target's cones to pick vertices uniquely, which holds
    for saturated targets.  Elements still unassigned at the fixpoint are
    genuinely underdetermined and raise InvalidMorphism.
    """
    if source.sketch != target.sketch:
        raise ShapeMismatch("morphism extension needs a shared sketch")
    comps: dict[str, dict[str, str]] = {
        p: dict(partial.get(p, {})) for p in source.sketch.points
    }
    vertex_index: dict[str, dict[tuple[str, ...], str]] = {}
    for cone in target.sketch.cones:
        nodes = sorted(cone.base.nodes)
        idx: dict[tuple[str, ...], str] = {}
        for v in target.carriers[cone.vertex]:
            key = tuple(target.actions[cone.projections[n]][v] for n in nodes)
            idx[key] = v
        vertex_index[cone.name] = idx

    changed = True
    while changed:
        changed = False
        for a in sorted(source.sketch.arrows):
            sp = source.sketch.src(a)
            tp = source.sketch.tgt(a)
            for x, fx in comps[sp].items():
                y = source.actions[a][x]
                want = target.actions[a][fx]
                have = comps[tp].get(y)
                if have is None:
                    comps[tp][y] = want
                    changed = True
                elif have != want:
                    raise InvalidMorphism(f"extension conflict at {y}")
        for cone in source.sketch.cones:
            nodes = sorted(cone.base.nodes)
            for v in source.carriers[cone.vertex]:
                if v in comps[cone.vertex]:
                    continue
                key = []
                for n in nodes:
                    img = comps[cone.base.nodes[n]].get(
                        source.actions[cone.projections[n]][v]
                    )
                    if img is None:
                        break
                    key.append(img)
                else:
                    hit = vertex_index[cone.name].get(tuple(key))
                    if hit is None:
                        raise InvalidMorphism(
                            f"no target vertex over cone {cone.name} tuple"
                        )
                    comps[cone.vertex][v] = hit
                    changed = True

    for p, xs in source.carriers.items():
        for x in xs:
            if x not in comps[p]:
                raise InvalidMorphism(f"extension does not determine {x}")
    m = RealizationMorphism(source, target, comps)
    check_realization_morphism(m)
    return m
