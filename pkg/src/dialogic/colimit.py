"""Finite colimits of realizations: gluing, pushouts.

Gluing quotients a disjoint union by the congruence generated from the given
identifications: whenever two elements merge, their action values merge too.
Class names are recovered from member names where possible so pushouts of
readable specifications stay readable.
"""

from __future__ import annotations

from .errors import ShapeMismatch
from .realization import Realization, RealizationMorphism


def glue(
    parts: list[Realization],
    relations: list[tuple[int, str, int, str]],
    prefer: int | None = None,
) -> tuple[Realization, list[dict[str, str]]]:
    """Colimit of the parts modulo relations (i, x, j, y) meaning part i's x
    equals part j's y.  Returns the glued realization and one element map per
    part.  When prefer is given, classes containing an element of that part
    are named after it, so the preferred part's names survive the quotient."""
    if not parts:
        raise ShapeMismatch("glue needs at least one part")
    sketch = parts[0].sketch
    for r in parts[1:]:
        if r.sketch != sketch:
            raise ShapeMismatch("glue needs a shared sketch")

    point_of: dict[tuple[int, str], str] = {}
    for i, r in enumerate(parts):
        for p, xs in r.carriers.items():
            for x in xs:
                point_of[(i, x)] = p

    parent: dict[tuple[int, str], tuple[int, str]] = {t: t for t in point_of}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    pending = list(relations)
    while pending:
        i, x, j, y = pending.pop()
        a, b = find((i, x)), find((j, y))
        if a == b:
            continue
        if point_of[a] != point_of[b]:
            raise ShapeMismatch(f"cannot identify {a} with {b}: different points")
        keep, drop = min(a, b), max(a, b)
        parent[drop] = keep
        # congruence: matching action values must merge as well
        for arrow in sketch.arrows_from(point_of[keep]):
            ia, xa = keep
            ib, xb = drop
            pending.append(
                (ia, parts[ia].actions[arrow][xa], ib, parts[ib].actions[arrow][xb])
            )

    classes: dict[tuple[int, str], list[tuple[int, str]]] = {}
    for t in sorted(point_of):
        classes.setdefault(find(t), []).append(t)

    taken: set[str] = set()
    name_of: dict[tuple[int, str], str] = {}
    for root in sorted(classes):
        preferred = [x for (i, x) in classes[root] if i == prefer]
        name = min(preferred) if preferred else min(x for (_i, x) in classes[root])
        while name in taken:
            name += "+"
        taken.add(name)
        name_of[root] = name

    carriers: dict[str, list[str]] = {p: [] for p in sketch.points}
    for root, members in classes.items():
        carriers[point_of[root]].append(name_of[root])
    actions: dict[str, dict[str, str]] = {a: {} for a in sketch.arrows}
    for root, members in classes.items():
        i, x = root
        for a in sketch.arrows_from(point_of[root]):
            actions[a][name_of[root]] = name_of[find((i, parts[i].actions[a][x]))]

    glued = Realization(
        sketch, {p: tuple(xs) for p, xs in carriers.items()}, actions
    )
    injections = [
        {x: name_of[find((i, x))] for p in r.carriers for x in r.carriers[p]}
        for i, r in enumerate(parts)
    ]
    return glued, injections


def pushout(
    f: RealizationMorphism, g: RealizationMorphism, prefer: int | None = None
) -> tuple[Realization, RealizationMorphism, RealizationMorphism]:
    """Pushout of a span: f: A -> B and g: A -> C with the same A.  Returns
    (P, B -> P, C -> P).  prefer=0 keeps B's names on merged classes,
    prefer=1 keeps C's."""
    if f.source is not g.source and f.source != g.source:
        raise ShapeMismatch("pushout needs a shared span source")
    a = f.source
    relations = [
        (0, f.components[p][x], 1, g.components[p][x])
        for p in sorted(a.carriers)
        for x in a.carriers[p]
    ]
    glued, (inj_b, inj_c) = glue([f.target, g.target], relations, prefer)

    def as_morphism(src: Realization, mapping: dict[str, str]) -> RealizationMorphism:
        comps = {
            p: {x: mapping[x] for x in src.carriers[p]} for p in src.carriers
        }
        return RealizationMorphism(src, glued, comps)

    return glued, as_morphism(f.target, inj_b), as_morphism(g.target, inj_c)
