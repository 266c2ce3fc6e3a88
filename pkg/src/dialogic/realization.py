"""Finite set-valued realizations of a sketch and their morphisms.

A realization assigns a finite carrier to each point and a total function to
each arrow.  Specifications are plain realizations of a logic's data sketch;
theories are realizations that additionally take every cone to an honest
limit (see cones_are_limits), which the chase establishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidMorphism, InvalidRealization, ParseError
from .sketch import Cone, Sketch


@dataclass(frozen=True)
class Realization:
    sketch: Sketch
    carriers: dict[str, tuple[str, ...]]
    actions: dict[str, dict[str, str]]

    def __post_init__(self):
        object.__setattr__(
            self, "carriers", {p: tuple(sorted(set(v))) for p, v in self.carriers.items()}
        )

    def carrier(self, point: str) -> tuple[str, ...]:
        return self.carriers[point]

    def act(self, arrow: str, element: str) -> str:
        return self.actions[arrow][element]

    def act_path(self, path: list[str], element: str) -> str:
        for a in path:
            element = self.actions[a][element]
        return element

    def size(self) -> int:
        return sum(len(v) for v in self.carriers.values())

    def point_of(self, element: str) -> str:
        for p, xs in self.carriers.items():
            if element in xs:
                return p
        raise KeyError(element)


def check_realization(r: Realization) -> None:
    """Totality of actions plus the identity and composite equations."""
    s = r.sketch
    if set(r.carriers) != set(s.points):
        raise InvalidRealization("carriers must cover the points exactly")
    for a, (src, tgt) in s.arrows.items():
        action = r.actions.get(a)
        if action is None:
            raise InvalidRealization(f"arrow {a} has no action")
        if set(action) != set(r.carriers[src]):
            raise InvalidRealization(f"action of {a} is not total on {src}")
        for x, y in action.items():
            if y not in r.carriers[tgt]:
                raise InvalidRealization(f"action of {a} sends {x} outside {tgt}")
    for p, ident in s.identities.items():
        for x in r.carriers[p]:
            if r.actions[ident][x] != x:
                raise InvalidRealization(f"identity {ident} moves {x}")
    for (f, g), h in s.composites.items():
        for x in r.carriers[s.src(f)]:
            if r.actions[g][r.actions[f][x]] != r.actions[h][x]:
                raise InvalidRealization(
                    f"composite ({f};{g})={h} fails at {x}"
                )


def matching_tuples(r: Realization, cone: Cone) -> list[tuple[str, ...]]:
    """All edge-compatible assignments to the cone base, as tuples over the
    sorted node names.  Assignments are grown node by node, preferring nodes
    already constrained by edges so joins stay small."""
    nodes = sorted(cone.base.nodes)
    edges = sorted(cone.base.edges.items())
    order: list[str] = []
    remaining = set(nodes)
    while remaining:
        def constraint_count(n: str) -> int:
            c = 0
            for _, (a, b, _f) in edges:
                if a == n and b in order:
                    c += 1
                if b == n and a in order:
                    c += 1
            return c

        nxt = max(sorted(remaining), key=constraint_count)
        order.append(nxt)
        remaining.discard(nxt)

    reverse: dict[str, dict[str, list[str]]] = {}
    for _, (_a, _b, f) in edges:
        if f not in reverse:
            idx: dict[str, list[str]] = {}
            for x, y in r.actions[f].items():
                idx.setdefault(y, []).append(x)
            reverse[f] = idx

    results: list[dict[str, str]] = []

    def extend(i: int, assign: dict[str, str]) -> None:
        if i == len(order):
            results.append(dict(assign))
            return
        n = order[i]
        candidates: list[str] | None = None
        for _, (a, b, f) in edges:
            if b == n and a in assign:
                forced = r.actions[f][assign[a]]
                candidates = [forced] if (candidates is None or forced in candidates) else []
            elif a == n and b in assign:
                pool = reverse[f].get(assign[b], [])
                candidates = pool if candidates is None else [x for x in candidates if x in pool]
        if candidates is None:
            candidates = list(r.carriers[cone.base.nodes[n]])
        for x in sorted(set(candidates)):
            ok = True
            for _, (a, b, f) in edges:
                if a == n and b in assign and r.actions[f][x] != assign[b]:
                    ok = False
                    break
                if b == n and a in assign and r.actions[f][assign[a]] != x:
                    ok = False
                    break
            if not ok:
                continue
            assign[n] = x
            extend(i + 1, assign)
            del assign[n]

    extend(0, {})
    seen = set()
    out = []
    for assign in results:
        t = tuple(assign[n] for n in nodes)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return sorted(out)


def cone_violations(r: Realization, cone: Cone) -> list[str]:
    """Ways this cone fails to be a limit in r; empty means it is one."""
    nodes = sorted(cone.base.nodes)
    tuples = set(matching_tuples(r, cone))
    image: dict[tuple[str, ...], list[str]] = {}
    bad: list[str] = []
    for v in r.carriers[cone.vertex]:
        t = tuple(r.actions[cone.projections[n]][v] for n in nodes)
        if t not in tuples:
            bad.append(f"{cone.name}: vertex {v} projects to a non-matching tuple")
        image.setdefault(t, []).append(v)
    for t, vs in sorted(image.items()):
        if len(vs) > 1:
            bad.append(f"{cone.name}: elements {vs} share the tuple {t}")
    for t in sorted(tuples):
        if t not in image:
            bad.append(f"{cone.name}: tuple {t} has no vertex element")
    return bad


def cones_are_limits(r: Realization) -> list[str]:
    out: list[str] = []
    for c in r.sketch.cones:
        out.extend(cone_violations(r, c))
    return out


# -- morphisms ------------------------------------------------------------


@dataclass(frozen=True)
class RealizationMorphism:
    source: Realization
    target: Realization
    components: dict[str, dict[str, str]]

    def at(self, point: str, element: str) -> str:
        return self.components[point][element]


def check_realization_morphism(m: RealizationMorphism) -> None:
    src, tgt = m.source, m.target
    if src.sketch != tgt.sketch:
        raise InvalidMorphism("realization morphism needs a shared sketch")
    for p in src.sketch.points:
        comp = m.components.get(p)
        if comp is None or set(comp) != set(src.carriers[p]):
            raise InvalidMorphism(f"component at {p} is not total")
        for x, y in comp.items():
            if y not in tgt.carriers[p]:
                raise InvalidMorphism(f"component at {p} sends {x} outside the target")
    for a, (s_pt, t_pt) in src.sketch.arrows.items():
        for x in src.carriers[s_pt]:
            left = m.components[t_pt][src.actions[a][x]]
            right = tgt.actions[a][m.components[s_pt][x]]
            if left != right:
                raise InvalidMorphism(f"naturality fails for {a} at {x}")


def is_iso(m: RealizationMorphism) -> bool:
    """All components bijective.  Callers must have checked the morphism."""
    for p in m.source.sketch.points:
        comp = m.components[p]
        if len(set(comp.values())) != len(comp):
            return False
        if len(comp) != len(m.target.carriers[p]):
            return False
    return True


def identity_morphism(r: Realization) -> RealizationMorphism:
    return RealizationMorphism(
        r, r, {p: {x: x for x in xs} for p, xs in r.carriers.items()}
    )


def compose_realization_morphisms(
    f: RealizationMorphism, g: RealizationMorphism
) -> RealizationMorphism:
    """First f, then g."""
    if f.target.carriers != g.source.carriers:
        raise InvalidMorphism("realization morphisms not composable")
    return RealizationMorphism(
        f.source,
        g.target,
        {
            p: {x: g.components[p][y] for x, y in comp.items()}
            for p, comp in f.components.items()
        },
    )


# -- text format -----------------------------------------------------------
#
# elem X : x1 x2
# map f : x1 -> y1, x2 -> y2


def parse_realization(text: str, sketch: Sketch) -> Realization:
    carriers: dict[str, tuple[str, ...]] = {p: () for p in sketch.points}
    actions: dict[str, dict[str, str]] = {a: {} for a in sketch.arrows}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, rest = line.split(None, 1)
        except ValueError:
            raise ParseError(f"cannot parse {line!r}", lineno)
        if head == "elem":
            name, elems = _split_decl(rest, lineno)
            if name not in sketch.points:
                raise ParseError(f"unknown point {name}", lineno)
            carriers[name] = tuple(elems.split())
        elif head == "map":
            name, body = _split_decl(rest, lineno)
            if name not in sketch.arrows:
                raise ParseError(f"unknown arrow {name}", lineno)
            table: dict[str, str] = {}
            body = body.strip()
            if body:
                for pair in body.split(","):
                    bits = pair.split("->")
                    if len(bits) != 2:
                        raise ParseError(f"bad pair {pair!r}", lineno)
                    table[bits[0].strip()] = bits[1].strip()
            actions[name] = table
        else:
            raise ParseError(f"unknown declaration {head!r}", lineno)
    r = Realization(sketch, carriers, actions)
    check_realization(r)
    return r


def _split_decl(rest: str, lineno: int) -> tuple[str, str]:
    parts = rest.split(":", 1)
    if len(parts) != 2:
        raise ParseError("expected ':'", lineno)
    return parts[0].strip(), parts[1]


def serialize_realization(r: Realization) -> str:
    lines = []
    for p in sorted(r.carriers):
        lines.append(f"elem {p} : {' '.join(r.carriers[p])}".rstrip())
    for a in sorted(r.actions):
        pairs = ", ".join(f"{x} -> {y}" for x, y in sorted(r.actions[a].items()))
        lines.append(f"map {a} : {pairs}".rstrip())
    return "\n".join(lines) + "\n"


def realization_to_dict(r: Realization) -> dict:
    return {
        "carriers": {p: list(xs) for p, xs in sorted(r.carriers.items())},
        "actions": {
            a: {x: y for x, y in sorted(table.items())}
            for a, table in sorted(r.actions.items())
        },
    }


def realization_from_dict(data: dict, sketch: Sketch) -> Realization:
    r = Realization(
        sketch,
        {p: tuple(xs) for p, xs in data["carriers"].items()},
        {a: dict(table) for a, table in data["actions"].items()},
    )
    check_realization(r)
    return r
