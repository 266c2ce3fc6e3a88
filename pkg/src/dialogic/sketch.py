"""Limit sketches: graphs with declared identities, composites and limit cones.

A sketch only *declares* features; nothing here imposes laws.  The prototype
(see proto.py) is where declarations become actual category structure, and
realizations (realization.py) are where cones become actual limits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidSketch, InvalidMorphism


@dataclass(frozen=True)
class Diagram:
    """Finite shape graph with labels in a sketch.

    nodes: shape node -> labeling point
    edges: shape edge -> (source node, target node, labeling arrow)
    """

    nodes: dict[str, str]
    edges: dict[str, tuple[str, str, str]]

    def validate_in(self, sketch: "Sketch", where: str) -> None:
        for n, p in self.nodes.items():
            if p not in sketch.points:
                raise InvalidSketch(f"{where}: node {n} labeled by unknown point {p}")
        for e, (a, b, f) in self.edges.items():
            if a not in self.nodes or b not in self.nodes:
                raise InvalidSketch(f"{where}: edge {e} has unknown endpoint")
            if f not in sketch.arrows:
                raise InvalidSketch(f"{where}: edge {e} labeled by unknown arrow {f}")
            src, tgt = sketch.arrows[f]
            if (src, tgt) != (self.nodes[a], self.nodes[b]):
                raise InvalidSketch(
                    f"{where}: edge {e} label {f}: {src}->{tgt} does not match "
                    f"{self.nodes[a]}->{self.nodes[b]}"
                )


@dataclass(frozen=True)
class Cone:
    """Potential limit: a vertex, a base diagram and one projection per node.

    Every base edge must be witnessed by a declared composite: for an edge
    J -> K labeled a, the sketch must declare proj(J);a = proj(K).
    """

    name: str
    vertex: str
    base: Diagram
    projections: dict[str, str]


@dataclass(frozen=True)
class Sketch:
    points: frozenset[str]
    arrows: dict[str, tuple[str, str]]
    identities: dict[str, str] = field(default_factory=dict)
    composites: dict[tuple[str, str], str] = field(default_factory=dict)
    cones: tuple[Cone, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(self.points))
        object.__setattr__(self, "cones", tuple(sorted(self.cones, key=lambda c: c.name)))

    # -- feature access -------------------------------------------------

    def src(self, arrow: str) -> str:
        return self.arrows[arrow][0]

    def tgt(self, arrow: str) -> str:
        return self.arrows[arrow][1]

    def identity_of(self, point: str) -> str | None:
        return self.identities.get(point)

    def is_identity(self, arrow: str) -> bool:
        src, tgt = self.arrows[arrow]
        return src == tgt and self.identities.get(src) == arrow

    def compose(self, f: str, g: str) -> str | None:
        """Declared composite of f followed by g, treating declared identity
        arrows as strict units.  None when no composite is declared."""
        got = self.composites.get((f, g))
        if got is not None:
            return got
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        return None

    def compose_path(self, path: list[str]) -> str | None:
        """Fold a nonempty arrow path through declared composites; None if a
        step is missing."""
        cur = path[0]
        for a in path[1:]:
            nxt = self.compose(cur, a)
            if nxt is None:
                return None
            cur = nxt
        return cur

    def cone_named(self, name: str) -> Cone:
        for c in self.cones:
            if c.name == name:
                return c
        raise KeyError(name)

    def arrows_from(self, point: str) -> list[str]:
        return sorted(a for a, (s, _) in self.arrows.items() if s == point)

    def arrows_into(self, point: str) -> list[str]:
        return sorted(a for a, (_, t) in self.arrows.items() if t == point)


def validate_sketch(s: Sketch) -> None:
    """Check well-formedness; raises InvalidSketch with the first failure."""
    for a, (src, tgt) in s.arrows.items():
        if src not in s.points or tgt not in s.points:
            raise InvalidSketch(f"arrow {a}: endpoint not a point ({src}->{tgt})")
    for p, ident in s.identities.items():
        if p not in s.points:
            raise InvalidSketch(f"identity declared at unknown point {p}")
        if ident not in s.arrows:
            raise InvalidSketch(f"identity {ident} of {p} is not an arrow")
        if s.arrows[ident] != (p, p):
            raise InvalidSketch(f"identity {ident} of {p} is not a loop at {p}")
    owners: dict[str, str] = {}
    for p, ident in s.identities.items():
        if ident in owners:
            raise InvalidSketch(f"arrow {ident} declared identity of both {owners[ident]} and {p}")
        owners[ident] = p
    for (f, g), h in s.composites.items():
        for x in (f, g, h):
            if x not in s.arrows:
                raise InvalidSketch(f"composite ({f},{g})={h}: unknown arrow {x}")
        if s.tgt(f) != s.src(g):
            raise InvalidSketch(f"composite ({f},{g}): arrows not consecutive")
        if (s.src(f), s.tgt(g)) != s.arrows[h]:
            raise InvalidSketch(f"composite ({f},{g})={h}: endpoints disagree")
    seen_cones: set[str] = set()
    for c in s.cones:
        if c.name in seen_cones:
            raise InvalidSketch(f"duplicate cone name {c.name}")
        seen_cones.add(c.name)
        if c.vertex not in s.points:
            raise InvalidSketch(f"cone {c.name}: unknown vertex {c.vertex}")
        c.base.validate_in(s, f"cone {c.name}")
        if set(c.projections) != set(c.base.nodes):
            raise InvalidSketch(f"cone {c.name}: projections must cover base nodes exactly")
        for n, pr in c.projections.items():
            if pr not in s.arrows:
                raise InvalidSketch(f"cone {c.name}: projection {pr} not an arrow")
            if s.arrows[pr] != (c.vertex, c.base.nodes[n]):
                raise InvalidSketch(
                    f"cone {c.name}: projection {pr} is not {c.vertex}->{c.base.nodes[n]}"
                )
        for e, (a, b, f) in c.base.edges.items():
            comp = s.compose(c.projections[a], f)
            if comp is None:
                raise InvalidSketch(
                    f"cone {c.name}: edge {e} lacks a declared composite witness "
                    f"({c.projections[a]};{f})"
                )
            if comp != c.projections[b]:
                raise InvalidSketch(
                    f"cone {c.name}: edge {e} witness {comp} differs from projection "
                    f"{c.projections[b]}"
                )


def with_identities(s: Sketch, points: list[str] | None = None) -> Sketch:
    """Return s with identity arrows declared at the given points (all by default)."""
    targets = sorted(s.points) if points is None else points
    arrows = dict(s.arrows)
    identities = dict(s.identities)
    for p in targets:
        if p in identities:
            continue
        name = f"id_{p}"
        while name in arrows:
            name += "'"
        arrows[name] = (p, p)
        identities[p] = name
    return Sketch(s.points, arrows, identities, dict(s.composites), s.cones)


# -- morphisms ----------------------------------------------------------


@dataclass(frozen=True)
class SketchMorphism:
    """Feature-preserving map of sketches."""

    source: Sketch
    target: Sketch
    point_map: dict[str, str]
    arrow_map: dict[str, str]

    def on_point(self, p: str) -> str:
        return self.point_map[p]

    def on_arrow(self, a: str) -> str:
        return self.arrow_map[a]

    def is_inclusion(self) -> bool:
        return all(k == v for k, v in self.point_map.items()) and all(
            k == v for k, v in self.arrow_map.items()
        )


def compose_sketch_morphisms(f: SketchMorphism, g: SketchMorphism) -> SketchMorphism:
    """First f, then g."""
    if f.target is not g.source and f.target != g.source:
        raise InvalidMorphism("sketch morphisms not composable")
    return SketchMorphism(
        f.source,
        g.target,
        {p: g.point_map[v] for p, v in f.point_map.items()},
        {a: g.arrow_map[v] for a, v in f.arrow_map.items()},
    )


def _contract_cone(vertex: str, nodes: dict[str, str], edges: list[tuple[str, str, str]],
                   projections: dict[str, str], sketch: Sketch):
    """Normal form of cone data for comparison: contract identity-labeled edges,
    drop duplicate edges, forget node names."""
    parent = {n: n for n in nodes}

    def find(n):
        while parent[n] != n:
            n = parent[n]
        return n

    changed = True
    while changed:
        changed = False
        for (a, b, f) in edges:
            if sketch.is_identity(f):
                ra, rb = find(a), find(b)
                if ra != rb and projections[ra] == projections[rb]:
                    parent[max(ra, rb)] = min(ra, rb)
                    changed = True
    kept_edges = set()
    for (a, b, f) in edges:
        if sketch.is_identity(f) and projections[find(a)] == projections[find(b)]:
            continue
        kept_edges.add((find(a), find(b), f))
    kept_nodes = {find(n) for n in nodes}
    # forget names: identify a node by (label, projection); edges by those keys
    key = {n: (nodes[n], projections[n]) for n in kept_nodes}
    if len(set(key.values())) != len(kept_nodes):
        # two distinct slots share label+projection: keep them apart by multiset
        norm_nodes = sorted(key.values())
    else:
        norm_nodes = sorted(set(key.values()))
    norm_edges = sorted((key[a], key[b], f) for (a, b, f) in kept_edges)
    return (vertex, tuple(norm_nodes), tuple(norm_edges))


def cone_signature(c: Cone, sketch: Sketch):
    edges = [(a, b, f) for (a, b, f) in c.base.edges.values()]
    return _contract_cone(c.vertex, dict(c.base.nodes), edges, dict(c.projections), sketch)


def validate_sketch_morphism(m: SketchMorphism) -> None:
    """Totality plus preservation of endpoints, identities, composites, cones.
    Cone images are matched against target cones up to contraction of
    identity-labeled edges."""
    s, t = m.source, m.target
    for p in s.points:
        if m.point_map.get(p) not in t.points:
            raise InvalidMorphism(f"point {p} has no valid image")
    for a, (src, tgt) in s.arrows.items():
        fa = m.arrow_map.get(a)
        if fa not in t.arrows:
            raise InvalidMorphism(f"arrow {a} has no valid image")
        if t.arrows[fa] != (m.point_map[src], m.point_map[tgt]):
            raise InvalidMorphism(f"arrow {a}: image {fa} has wrong endpoints")
    for p, ident in s.identities.items():
        img = m.arrow_map[ident]
        if not t.is_identity(img):
            raise InvalidMorphism(f"identity {ident} maps to non-identity {img}")
        if t.src(img) != m.point_map[p]:
            raise InvalidMorphism(f"identity {ident} maps to identity of wrong point")
    for (f, g), h in s.composites.items():
        got = t.compose(m.arrow_map[f], m.arrow_map[g])
        if got != m.arrow_map[h]:
            raise InvalidMorphism(
                f"composite ({f},{g})={h} not preserved: image composite is {got}"
            )
    target_sigs = {cone_signature(c, t) for c in t.cones}
    for c in s.cones:
        edges = [(a, b, m.arrow_map[f]) for (a, b, f) in c.base.edges.values()]
        nodes = {n: m.point_map[p] for n, p in c.base.nodes.items()}
        projections = {n: m.arrow_map[pr] for n, pr in c.projections.items()}
        sig = _contract_cone(m.point_map[c.vertex], nodes, edges, projections, t)
        if sig not in target_sigs:
            raise InvalidMorphism(f"cone {c.name}: image is not a cone of the target")


# -- builder ------------------------------------------------------------


class SketchBuilder:
    """Incremental construction with helpers for path equations.

    equate_paths declares two arrow paths equal by funneling both into one
    shared arrow through declared composites; auxiliary arrows for long paths
    are named deterministically from the path."""

    def __init__(self):
        self.points: set[str] = set()
        self.arrows: dict[str, tuple[str, str]] = {}
        self.identities: dict[str, str] = {}
        self.composites: dict[tuple[str, str], str] = {}
        self.cones: list[Cone] = []

    def point(self, *names: str) -> None:
        for n in names:
            self.points.add(n)

    def arrow(self, name: str, src: str, tgt: str) -> str:
        if name in self.arrows:
            if self.arrows[name] != (src, tgt):
                raise InvalidSketch(f"arrow {name} redeclared with different endpoints")
            return name
        self.points.add(src)
        self.points.add(tgt)
        self.arrows[name] = (src, tgt)
        return name

    def identity(self, point: str, name: str | None = None) -> str:
        if point in self.identities:
            return self.identities[point]
        name = name or f"id_{point}"
        self.arrow(name, point, point)
        self.identities[point] = name
        return name

    def composite(self, f: str, g: str, h: str) -> str:
        key = (f, g)
        if key in self.composites:
            if self.composites[key] != h:
                raise InvalidSketch(f"composite ({f},{g}) declared twice with different results")
            return h
        fs, ft = self.arrows[f]
        gs, gt = self.arrows[g]
        if ft != gs:
            raise InvalidSketch(f"composite ({f},{g}): not consecutive")
        self.arrow(h, fs, gt)
        self.composites[key] = h
        return h

    def _fold_path(self, path: list[str], result: str) -> None:
        """Declare composites so that the whole path equals `result`."""
        if len(path) == 1:
            if path[0] != result:
                raise InvalidSketch(f"cannot equate distinct single arrows {path[0]}, {result}")
            return
        cur = path[0]
        for i, a in enumerate(path[1:-1], start=1):
            key = (cur, a)
            if key in self.composites:
                cur = self.composites[key]
            else:
                aux = f"{result}.{i}"
                cur = self.composite(cur, a, aux)
        self.composite(cur, path[-1], result)

    def path_arrow(self, name: str, path: list[str]) -> str:
        """Declare (or reuse) an arrow equal to the given nonempty path."""
        if len(path) == 1:
            return path[0]
        src = self.arrows[path[0]][0]
        tgt = self.arrows[path[-1]][1]
        self.arrow(name, src, tgt)
        self._fold_path(path, name)
        return name

    def equate_paths(self, name: str, path1: list[str], path2: list[str]) -> str:
        """Declare path1 = path2.  When one side is a single arrow it is the
        shared target, otherwise a fresh arrow `name` carries both."""
        if len(path1) == 1:
            shared = path1[0]
            self._fold_path(path2, shared)
            return shared
        if len(path2) == 1:
            shared = path2[0]
            self._fold_path(path1, shared)
            return shared
        shared = self.path_arrow(name, path1)
        self._fold_path(path2, shared)
        return shared

    def cone(self, name: str, vertex: str, nodes: dict[str, str],
             edges: dict[str, tuple[str, str, str]], projections: dict[str, str]) -> Cone:
        c = Cone(name, vertex, Diagram(dict(nodes), dict(edges)), dict(projections))
        self.cones.append(c)
        return c

    def build(self) -> Sketch:
        s = Sketch(frozenset(self.points), dict(self.arrows), dict(self.identities),
                   dict(self.composites), tuple(self.cones))
        validate_sketch(s)
        return s


# -- text format ---------------------------------------------------------
#
# point X
# arrow f : X -> Y
# id X = idX
# comp g . f = h          (h = g after f)
# cone c0 V base { n : X ; e : n1 -> n2 = f } proj { n = p }


def parse_sketch(text: str) -> Sketch:
    from .errors import ParseError

    points: set[str] = set()
    arrows: dict[str, tuple[str, str]] = {}
    identities: dict[str, str] = {}
    composites: dict[tuple[str, str], str] = {}
    cones: list[Cone] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, rest = line.split(None, 1)
        except ValueError:
            raise ParseError(f"cannot parse {line!r}", lineno)
        if head == "point":
            points.add(rest.strip())
        elif head == "arrow":
            name, sig = _split(rest, ":", lineno)
            src, tgt = _split(sig, "->", lineno)
            arrows[name] = (src, tgt)
        elif head == "id":
            pt, name = _split(rest, "=", lineno)
            identities[pt] = name
        elif head == "comp":
            lhs, h = _split(rest, "=", lineno)
            g, f = _split(lhs, ".", lineno)
            composites[(f, g)] = h
        elif head == "cone":
            cones.append(_parse_cone(rest, lineno))
        else:
            raise ParseError(f"unknown declaration {head!r}", lineno)
    for src, tgt in arrows.values():
        points.add(src)
        points.add(tgt)
    s = Sketch(frozenset(points), arrows, identities, composites, tuple(cones))
    validate_sketch(s)
    return s


def _split(text: str, sep: str, lineno: int) -> tuple[str, str]:
    from .errors import ParseError

    parts = text.split(sep)
    if len(parts) != 2:
        raise ParseError(f"expected single {sep!r} in {text!r}", lineno)
    return parts[0].strip(), parts[1].strip()


def _parse_cone(rest: str, lineno: int) -> Cone:
    from .errors import ParseError

    try:
        header, tail = rest.split("base", 1)
        base_part, proj_part = tail.split("proj", 1)
    except ValueError:
        raise ParseError("cone needs base { ... } proj { ... }", lineno)
    bits = header.split()
    if len(bits) != 2:
        raise ParseError("cone header must be: cone <name> <vertex>", lineno)
    name, vertex = bits
    nodes: dict[str, str] = {}
    edges: dict[str, tuple[str, str, str]] = {}
    for item in _brace_items(base_part, lineno):
        if "->" in item:
            ename, spec = _split(item, ":", lineno)
            arrow_part, label = _split(spec, "=", lineno)
            a, b = _split(arrow_part, "->", lineno)
            edges[ename] = (a, b, label)
        else:
            n, p = _split(item, ":", lineno)
            nodes[n] = p
    projections: dict[str, str] = {}
    for item in _brace_items(proj_part, lineno):
        n, pr = _split(item, "=", lineno)
        projections[n] = pr
    return Cone(name, vertex, Diagram(nodes, edges), projections)


def _brace_items(part: str, lineno: int) -> list[str]:
    from .errors import ParseError

    part = part.strip()
    if not (part.startswith("{") and part.endswith("}")):
        raise ParseError("expected { ... }", lineno)
    inner = part[1:-1].strip()
    if not inner:
        return []
    return [item.strip() for item in inner.split(";") if item.strip()]


def serialize_sketch(s: Sketch) -> str:
    """Canonical text form: declarations sorted, one per line."""
    lines: list[str] = []
    for p in sorted(s.points):
        lines.append(f"point {p}")
    for a in sorted(s.arrows):
        src, tgt = s.arrows[a]
        lines.append(f"arrow {a} : {src} -> {tgt}")
    for p in sorted(s.identities):
        lines.append(f"id {p} = {s.identities[p]}")
    for (f, g) in sorted(s.composites):
        lines.append(f"comp {g} . {f} = {s.composites[(f, g)]}")
    for c in s.cones:
        base_items = [f"{n} : {p}" for n, p in sorted(c.base.nodes.items())]
        base_items += [
            f"{e} : {a} -> {b} = {f}" for e, (a, b, f) in sorted(c.base.edges.items())
        ]
        proj_items = [f"{n} = {pr}" for n, pr in sorted(c.projections.items())]
        lines.append(
            f"cone {c.name} {c.vertex} base {{ "
            + " ; ".join(base_items)
            + " } proj { "
            + " ; ".join(proj_items)
            + " }"
        )
    return "\n".join(lines) + "\n"
