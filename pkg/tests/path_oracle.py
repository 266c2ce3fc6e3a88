"""Independent oracle for hom-set sizes in the category presented by a sketch.

Brute force, usable only when the non-identity arrow graph is acyclic: list
every identity-free path, then close the declared equations under subpath
replacement.  Deliberately shares no code with the production congruence
closure; only the Sketch input type is common.
"""

from __future__ import annotations

import itertools

from dialogic.sketch import Sketch


def _strip(sketch: Sketch, path: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(a for a in path if not sketch.is_identity(a))


def _check_dag(sketch: Sketch) -> None:
    adj: dict[str, set[str]] = {p: set() for p in sketch.points}
    for a, (src, tgt) in sketch.arrows.items():
        if not sketch.is_identity(a):
            adj[src].add(tgt)
    seen: dict[str, int] = {}

    def visit(p: str) -> None:
        seen[p] = 1
        for q in adj[p]:
            state = seen.get(q, 0)
            if state == 1:
                raise ValueError("oracle requires an acyclic arrow graph")
            if state == 0:
                visit(q)
        seen[p] = 2

    for p in sketch.points:
        if seen.get(p, 0) == 0:
            visit(p)


def enumerate_paths(sketch: Sketch) -> dict[tuple[str, str], set[tuple[str, ...]]]:
    """All identity-free paths, including the empty path at each point."""
    _check_dag(sketch)
    outgoing: dict[str, list[str]] = {p: [] for p in sketch.points}
    for a in sorted(sketch.arrows):
        if not sketch.is_identity(a):
            outgoing[sketch.src(a)].append(a)
    universe: dict[tuple[str, str], set[tuple[str, ...]]] = {}
    for p in sketch.points:
        universe.setdefault((p, p), set()).add(())

    def extend(start: str, here: str, path: tuple[str, ...]) -> None:
        for a in outgoing[here]:
            nxt = path + (a,)
            universe.setdefault((start, sketch.tgt(a)), set()).add(nxt)
            extend(start, sketch.tgt(a), nxt)

    for p in sketch.points:
        extend(p, p, ())
    return universe


def hom_classes(sketch: Sketch) -> dict[tuple[str, str], list[list[tuple[str, ...]]]]:
    """Equivalence classes of paths under the declared equations."""
    universe = enumerate_paths(sketch)
    rules: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    for (f, g), h in sketch.composites.items():
        lhs = _strip(sketch, (f, g))
        rhs = _strip(sketch, (h,))
        if lhs != rhs:
            rules.append((lhs, rhs))
            rules.append((rhs, lhs))

    parent: dict[tuple, tuple] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
            return True
        return False

    all_paths = sorted(itertools.chain.from_iterable(universe.values()))
    changed = True
    while changed:
        changed = False
        for p in all_paths:
            for lhs, rhs in rules:
                k = len(lhs)
                for i in range(len(p) - k + 1):
                    if p[i : i + k] == lhs:
                        q = p[:i] + rhs + p[i + k :]
                        if union(p, q):
                            changed = True

    out: dict[tuple[str, str], list[list[tuple[str, ...]]]] = {}
    for key, paths in universe.items():
        groups: dict[tuple, list[tuple[str, ...]]] = {}
        for p in sorted(paths):
            groups.setdefault(find(p), []).append(p)
        out[key] = [groups[r] for r in sorted(groups)]
    return out


def hom_sizes(sketch: Sketch) -> dict[tuple[str, str], int]:
    return {key: len(classes) for key, classes in hom_classes(sketch).items() if classes}


def loop_classes(sketch: Sketch) -> int:
    """Number of non-identity endomorphism classes; 0 exactly when the
    presented category is loop-free."""
    total = 0
    for (a, b), classes in hom_classes(sketch).items():
        if a != b:
            continue
        for cls in classes:
            if () not in cls:
                total += 1
    return total
