"""Propagators: sketch morphisms with an induced free/underlying adjunction.

The underlying functor precomposes carriers; the free functor seeds the
target-side chase with the source realization and saturates.  Freeness of the
chase gives the left adjoint directly: any map into an underlying realization
replays uniquely along the chase trace.  Entailments are morphisms the free
functor makes invertible; localizers invert chosen arrows; swellings are the
inclusions whose free functor adds nothing; decompose factors an
arrow/equation-adding inclusion into a swelling followed by a localization
and an equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chase import DEFAULT_BUDGET, ChaseResult, PreRealization, replay, saturate
from .errors import InvalidMorphism, NotInclusion, UnsupportedAddition
from .realization import (
    Realization,
    RealizationMorphism,
    check_realization,
    check_realization_morphism,
    is_iso,
)
from .sketch import (
    Sketch,
    SketchBuilder,
    SketchMorphism,
    _contract_cone,
    cone_signature,
    validate_sketch,
    validate_sketch_morphism,
    with_identities,
)


@dataclass(frozen=True)
class Propagator:
    morphism: SketchMorphism
    inverses: dict[str, str] = field(default_factory=dict)

    @property
    def source(self) -> Sketch:
        return self.morphism.source

    @property
    def target(self) -> Sketch:
        return self.morphism.target

    @property
    def is_localizer(self) -> bool:
        return bool(self.inverses)


def identity_propagator(s: Sketch) -> Propagator:
    m = SketchMorphism(s, s, {p: p for p in s.points}, {a: a for a in s.arrows})
    return Propagator(m)


# -- underlying -----------------------------------------------------------


@dataclass(frozen=True)
class Underlying:
    """Precomposed realization plus the element renaming used to keep names
    globally unique when several source points share an image."""

    realization: Realization
    back: dict[str, str]
    forward: dict[str, dict[str, str]]


def underlying(p: Propagator, theory: Realization) -> Underlying:
    src = p.source
    fiber: dict[str, list[str]] = {}
    for s_point in sorted(src.points):
        fiber.setdefault(p.morphism.point_map[s_point], []).append(s_point)
    carriers: dict[str, tuple[str, ...]] = {}
    back: dict[str, str] = {}
    forward: dict[str, dict[str, str]] = {}
    for s_point in sorted(src.points):
        t_point = p.morphism.point_map[s_point]
        rename = len(fiber[t_point]) > 1
        table = {}
        for x in theory.carriers[t_point]:
            name = f"{x}@{s_point}" if rename else x
            table[x] = name
            back[name] = x
        forward[s_point] = table
        carriers[s_point] = tuple(table[x] for x in theory.carriers[t_point])
    actions: dict[str, dict[str, str]] = {}
    for a in sorted(src.arrows):
        s_pt, t_pt = src.arrows[a]
        ta = p.morphism.arrow_map[a]
        actions[a] = {
            forward[s_pt][x]: forward[t_pt][theory.actions[ta][x]]
            for x in theory.carriers[p.morphism.point_map[s_pt]]
        }
    real = Realization(src, carriers, actions)
    check_realization(real)
    return Underlying(real, back, forward)


# -- free -----------------------------------------------------------------


@dataclass
class AdjunctionWitness:
    free: Realization
    unit: RealizationMorphism
    chase: ChaseResult
    seed_names: dict[str, str]  # source element -> seeded element over E_T


def free(p: Propagator, spec: Realization, budget: int = DEFAULT_BUDGET) -> AdjunctionWitness:
    src, tgt = p.source, p.target
    if spec.sketch != src:
        raise InvalidMorphism("specification is not over the propagator source")
    carriers: dict[str, list[str]] = {t: [] for t in tgt.points}
    seed_names: dict[str, str] = {}
    used: set[str] = set()
    for s_point in sorted(src.points):
        t_point = p.morphism.point_map[s_point]
        for x in spec.carriers[s_point]:
            name = x if x not in used else f"{x}@{s_point}"
            used.add(name)
            seed_names[x] = name
            carriers[t_point].append(name)
    actions: dict[str, dict[str, str]] = {a: {} for a in tgt.arrows}
    equations: list[tuple[str, str]] = []
    for a in sorted(src.arrows):
        ta = p.morphism.arrow_map[a]
        for x, y in sorted(spec.actions[a].items()):
            sx, sy = seed_names[x], seed_names[y]
            if tgt.is_identity(ta):
                if sx != sy:
                    equations.append((sx, sy))
                continue
            prior = actions[ta].get(sx)
            if prior is None:
                actions[ta][sx] = sy
            elif prior != sy:
                equations.append((prior, sy))
    pre = PreRealization(tgt, carriers, actions, tuple(equations))
    result = saturate(pre, budget)
    check_realization(result.realization)
    under = underlying(p, result.realization)
    components: dict[str, dict[str, str]] = {pt: {} for pt in src.points}
    for s_point in sorted(src.points):
        for x in spec.carriers[s_point]:
            theory_elt = result.resolve(seed_names[x])
            components[s_point][x] = under.forward[s_point][theory_elt]
    unit = RealizationMorphism(spec, under.realization, components)
    check_realization_morphism(unit)
    return AdjunctionWitness(result.realization, unit, result, seed_names)


def free_morphism(
    p: Propagator,
    m: RealizationMorphism,
    witness_src: AdjunctionWitness,
    witness_tgt: AdjunctionWitness,
) -> RealizationMorphism:
    """F(m) by replaying the source chase into the target free theory."""
    seed_images = {}
    for s_point in sorted(p.source.points):
        for x in m.source.carriers[s_point]:
            image = m.components[s_point][x]
            seed_images[witness_src.seed_names[x]] = witness_tgt.chase.resolve(
                witness_tgt.seed_names[image]
            )
    phi = replay(witness_src.chase, seed_images, witness_tgt.free)
    comps = {t: {} for t in p.target.points}
    for t_point, xs in witness_src.free.carriers.items():
        for x in xs:
            comps[t_point][x] = phi[x]
    return RealizationMorphism(witness_src.free, witness_tgt.free, comps)


def transpose(
    p: Propagator,
    witness: AdjunctionWitness,
    under: Underlying,
    m: RealizationMorphism,
    theory: Realization,
) -> RealizationMorphism:
    """Turn m: Σ -> U(Θ) into its mate F(Σ) -> Θ along the adjunction."""
    seed_images = {}
    for s_point in sorted(p.source.points):
        for x in m.source.carriers[s_point]:
            seed_images[witness.seed_names[x]] = under.back[m.components[s_point][x]]
    phi = replay(witness.chase, seed_images, theory)
    comps = {t: {} for t in p.target.points}
    for t_point, xs in witness.free.carriers.items():
        for x in xs:
            comps[t_point][x] = phi[x]
    return RealizationMorphism(witness.free, theory, comps)


def untranspose(
    p: Propagator,
    witness: AdjunctionWitness,
    under: Underlying,
    mate: RealizationMorphism,
) -> RealizationMorphism:
    """Turn a mate F(Σ) -> Θ back into Σ -> U(Θ): apply U and precompose the
    unit."""
    spec = witness.unit.source
    comps: dict[str, dict[str, str]] = {s: {} for s in p.source.points}
    for s_point in sorted(p.source.points):
        t_point = p.morphism.point_map[s_point]
        for x in spec.carriers[s_point]:
            fx = witness.chase.resolve(witness.seed_names[x])
            comps[s_point][x] = under.forward[s_point][
                mate.components[t_point][fx]
            ]
    return RealizationMorphism(spec, under.realization, comps)


def is_entailment(
    p: Propagator, m: RealizationMorphism, budget: int = DEFAULT_BUDGET
) -> bool:
    """True when the free functor makes m invertible.  Budget exhaustion
    raises: an undecided entailment is never guessed."""
    w_src = free(p, m.source, budget)
    w_tgt = free(p, m.target, budget)
    fm = free_morphism(p, m, w_src, w_tgt)
    return is_iso(fm)


def counit_iso_check(p: Propagator, theory: Realization, budget: int = DEFAULT_BUDGET) -> bool:
    """True when the canonical map F(U(Θ)) -> Θ is an isomorphism, i.e. Θ is
    reached by the free construction."""
    under = underlying(p, theory)
    w = free(p, under.realization, budget)
    seed_images = {
        w.seed_names[u]: under.back[u]
        for s_point in sorted(p.source.points)
        for u in under.realization.carriers[s_point]
    }
    phi = replay(w.chase, seed_images, theory)
    comps = {t: {} for t in p.target.points}
    for t_point, xs in w.free.carriers.items():
        for x in xs:
            comps[t_point][x] = phi[x]
    counit = RealizationMorphism(w.free, theory, comps)
    check_realization_morphism(counit)
    return is_iso(counit)


# -- localizer -------------------------------------------------------------


def localizer(s: Sketch, arrows: list[str]) -> Propagator:
    """Invert the given arrows: add one formal inverse each plus the two unit
    composites, declaring identities at the endpoints when missing."""
    for a in arrows:
        if a not in s.arrows:
            raise InvalidMorphism(f"cannot localize unknown arrow {a}")
    endpoints = sorted({e for a in arrows for e in s.arrows[a]})
    enriched = with_identities(s, endpoints)
    new_arrows = dict(enriched.arrows)
    composites = dict(enriched.composites)
    inverses: dict[str, str] = {}
    for a in sorted(arrows):
        inv = f"{a}_inv"
        while inv in new_arrows:
            inv += "'"
        src, tgt = enriched.arrows[a]
        new_arrows[inv] = (tgt, src)
        composites[(a, inv)] = enriched.identities[src]
        composites[(inv, a)] = enriched.identities[tgt]
        inverses[a] = inv
    target = Sketch(
        enriched.points, new_arrows, dict(enriched.identities), composites, enriched.cones
    )
    validate_sketch(target)
    m = SketchMorphism(
        s,
        target,
        {pt: pt for pt in s.points},
        {a: a for a in s.arrows},
    )
    validate_sketch_morphism(m)
    return Propagator(m, inverses)


# -- swelling and decomposition ---------------------------------------------


def is_swelling(p: Propagator) -> bool:
    """Syntactic check of the four swelling clauses for an inclusion-like
    propagator: old-source arrows are old, old-source compositions are old
    (identity declarations at old points likewise), old-vertex cones are old
    cones, and every new cone has a projection entirely outside the image."""
    m = p.morphism
    if len(set(m.point_map.values())) != len(m.point_map) or len(
        set(m.arrow_map.values())
    ) != len(m.arrow_map):
        raise NotInclusion("swelling check needs an injective propagator")
    old_points = set(m.point_map.values())
    old_arrows = set(m.arrow_map.values())
    tgt = p.target
    for a, (src, _tgt) in tgt.arrows.items():
        if src in old_points and a not in old_arrows:
            return False
    image_composites = {
        (m.arrow_map[f], m.arrow_map[g]): m.arrow_map[h]
        for (f, g), h in p.source.composites.items()
    }
    for (f, g), h in tgt.composites.items():
        if tgt.src(f) in old_points and image_composites.get((f, g)) != h:
            return False
    image_identities = {
        m.point_map[pt]: m.arrow_map[i] for pt, i in p.source.identities.items()
    }
    for pt, ident in tgt.identities.items():
        if pt in old_points and image_identities.get(pt) != ident:
            return False
    image_cone_sigs = set()
    for c in p.source.cones:
        edges = [(a, b, m.arrow_map[f]) for (a, b, f) in c.base.edges.values()]
        nodes = {n: m.point_map[pt] for n, pt in c.base.nodes.items()}
        projections = {n: m.arrow_map[pr] for n, pr in c.projections.items()}
        image_cone_sigs.add(
            _contract_cone(m.point_map[c.vertex], nodes, edges, projections, tgt)
        )
    for c in tgt.cones:
        if c.vertex in old_points:
            if cone_signature(c, tgt) not in image_cone_sigs:
                return False
        else:
            outside = any(
                c.projections[n] not in old_arrows
                and c.base.nodes[n] not in old_points
                for n in c.base.nodes
            )
            if not outside:
                return False
    return True


def decompose(p: Propagator) -> tuple[Propagator, Propagator, SketchMorphism]:
    """Factor an inclusion that only adds arrows and equations: a swelling
    adds one span per addition, a localizer inverts the span handles, and an
    equivalence maps handles and inverses to identities.  Composing the three
    reproduces p up to that equivalence.  Each added arrow f: X -> Y becomes
    a fresh point with a handle to X and a top arrow to Y; each added
    equation among existing arrows becomes a handle whose two outgoing paths
    share a composite."""
    m = p.morphism
    if not m.is_inclusion():
        raise UnsupportedAddition("decompose expects a name-preserving inclusion")
    src, tgt = p.source, p.target
    if src.points != tgt.points:
        raise UnsupportedAddition("decompose cannot handle added points")
    src_sigs = {cone_signature(c, tgt) for c in src.cones}
    for c in tgt.cones:
        if cone_signature(c, tgt) not in src_sigs:
            raise UnsupportedAddition("decompose cannot handle added cones")
    if tgt.identities != src.identities:
        raise UnsupportedAddition("decompose cannot handle added identities")
    added_arrows = sorted(set(tgt.arrows) - set(src.arrows))
    added_comps = sorted(set(tgt.composites) - set(src.composites))
    for f, g in added_comps:
        h = tgt.composites[(f, g)]
        if any(x in added_arrows for x in (f, g, h)):
            raise UnsupportedAddition(
                "decompose supports added equations among existing arrows only"
            )

    mid = SketchBuilder()
    for pt in sorted(src.points):
        mid.point(pt)
    for a in sorted(src.arrows):
        mid.arrow(a, *src.arrows[a])
    mid.identities.update(src.identities)
    mid.composites.update(src.composites)
    mid.cones = list(src.cones)

    handles: list[str] = []
    point_map: dict[str, str] = {pt: pt for pt in src.points}
    arrow_target: dict[str, str] = {a: a for a in src.arrows}
    handle_points: dict[str, str] = {}  # handle -> old point it collapses onto
    ident_needed: set[str] = set()

    for a in added_arrows:
        x, y = tgt.arrows[a]
        dom = f"{a}_dom"
        handle = f"{a}_t"
        mid.point(dom)
        mid.arrow(handle, dom, x)
        mid.arrow(f"{a}_top", dom, y)
        handles.append(handle)
        handle_points[handle] = x
        point_map[dom] = x
        arrow_target[f"{a}_top"] = a
        ident_needed.add(x)

    for k, (f, g) in enumerate(added_comps):
        h = tgt.composites[(f, g)]
        x = src.src(f)
        dom = f"eq{k}_dom"
        handle = f"eq{k}_t"
        mid.point(dom)
        mid.arrow(handle, dom, x)
        handles.append(handle)
        handle_points[handle] = x
        leg = mid.composite(handle, f, f"eq{k}_leg")
        shared = mid.composite(leg, g, f"eq{k}_res")
        mid.composites[(handle, h)] = shared
        point_map[dom] = x
        arrow_target[f"eq{k}_leg"] = f
        arrow_target[f"eq{k}_res"] = h
        ident_needed.add(x)

    mid_sketch = mid.build()
    swelling_m = SketchMorphism(
        src,
        mid_sketch,
        {pt: pt for pt in src.points},
        {a: a for a in src.arrows},
    )
    validate_sketch_morphism(swelling_m)
    swelling = Propagator(swelling_m)

    localization = localizer(mid_sketch, handles)
    loc_target = localization.target

    enriched_tgt = with_identities(tgt, sorted(ident_needed))

    def identity_at(old_point: str) -> str:
        return enriched_tgt.identities[old_point]

    inverse_handles = {inv: h for h, inv in localization.inverses.items()}
    arrow_map: dict[str, str] = {}
    for a in loc_target.arrows:
        if a in arrow_target:
            arrow_map[a] = arrow_target[a]
        elif a in handle_points:
            arrow_map[a] = identity_at(handle_points[a])
        elif a in inverse_handles:
            arrow_map[a] = identity_at(handle_points[inverse_handles[a]])
        else:  # identities added by the localizer at handle endpoints
            pt = loc_target.src(a)
            arrow_map[a] = identity_at(point_map[pt])
    equivalence = SketchMorphism(loc_target, enriched_tgt, point_map, arrow_map)
    validate_sketch_morphism(equivalence)
    return swelling, localization, equivalence
