"""Fractions, rules, and pushout-based inference.

A fraction packages a span of morphisms out of a shared apex: a numerator
anyone may choose and a denominator that the free functor inverts.  Rules are
fractions from a conclusion pattern to a hypothesis pattern; applying a rule
to an instance is fraction composition, whose pushout grows the working
specification by exactly the rule's conclusion.  Proofs fold rule steps and
carry the accumulated entailment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chase import DEFAULT_BUDGET, PreRealization, chase_generic, replay, saturate
from .colimit import glue, pushout
from .errors import (
    AmbiguousMatch,
    InvalidMorphism,
    NoMatch,
    NotEntailment,
    ProofError,
    ShapeMismatch,
    UnknownRule,
)
from .hom import extend_morphism, hom_search
from .propagator import Propagator, free, free_morphism, is_entailment
from .realization import (
    Realization,
    RealizationMorphism,
    check_realization_morphism,
    compose_realization_morphisms,
    identity_morphism,
    is_iso,
)

CERT_VERIFIED = "verified"
CERT_INHERITED = "inherited"
CERT_UNKNOWN = "unknown"


@dataclass(frozen=True)
class Certificate:
    """Verification record for a denominator: `verified` means is_entailment
    ran and returned true, `inherited` means the morphism was produced by a
    construction that preserves entailments, `unknown` blocks proof use."""

    status: str
    detail: str = ""

    def __post_init__(self):
        if self.status not in (CERT_VERIFIED, CERT_INHERITED, CERT_UNKNOWN):
            raise ValueError(f"bad certificate status {self.status}")


@dataclass(frozen=True)
class Fraction:
    source: Realization
    target: Realization
    numerator: RealizationMorphism  # source -> apex
    denominator: RealizationMorphism  # target -> apex
    cert: Certificate

    @property
    def apex(self) -> Realization:
        return self.numerator.target


def check_fraction(f: Fraction) -> None:
    if f.numerator.source != f.source:
        raise ShapeMismatch("numerator does not start at the fraction source")
    if f.denominator.source != f.target:
        raise ShapeMismatch("denominator does not start at the fraction target")
    if f.numerator.target != f.denominator.target:
        raise ShapeMismatch("numerator and denominator do not share an apex")
    check_realization_morphism(f.numerator)
    check_realization_morphism(f.denominator)


def morphism_fraction(m: RealizationMorphism) -> Fraction:
    """A plain morphism as a fraction with identity denominator."""
    return Fraction(
        m.source,
        m.target,
        m,
        identity_morphism(m.target),
        Certificate(CERT_VERIFIED, "identity denominator"),
    )


def identity_fraction(sigma: Realization) -> Fraction:
    return morphism_fraction(identity_morphism(sigma))


def _is_identity(m: RealizationMorphism) -> bool:
    return m.source == m.target and all(
        x == y for comp in m.components.values() for x, y in comp.items()
    )


def _merge_status(*certs: Certificate) -> str:
    if any(c.status == CERT_UNKNOWN for c in certs):
        return CERT_UNKNOWN
    return CERT_INHERITED


def resaturate(r: Realization, budget: int = DEFAULT_BUDGET):
    """Close a realization under its sketch's composites and cones.  Returns
    the saturated realization and the quotient-inclusion into it."""
    pre = PreRealization(
        r.sketch,
        {p: list(xs) for p, xs in r.carriers.items()},
        {a: dict(t) for a, t in r.actions.items()},
    )
    result = saturate(pre, budget)
    comps = {
        p: {x: result.resolve(x) for x in r.carriers[p]} for p in r.carriers
    }
    unit = RealizationMorphism(r, result.realization, comps)
    return result.realization, unit


def compose_fractions(f1: Fraction, f2: Fraction, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Composite along the pushout of f1's denominator against f2's
    numerator; the apex is re-saturated so later instance matching sees every
    consequence of the gluing."""
    if f1.target != f2.source:
        raise ShapeMismatch("fractions are not consecutive")
    if _is_identity(f1.denominator):
        return Fraction(
            f1.source,
            f2.target,
            compose_realization_morphisms(f1.numerator, f2.numerator),
            f2.denominator,
            f2.cert,
        )
    if _is_identity(f2.numerator):
        return Fraction(
            f1.source,
            f2.target,
            f1.numerator,
            compose_realization_morphisms(f2.denominator, f1.denominator),
            Certificate(_merge_status(f1.cert, f2.cert), "composed entailments"),
        )
    # prefer=1 keeps the names of f2's apex, where the working specification
    # lives during proofs
    _p, j1, j2 = pushout(f1.denominator, f2.numerator, prefer=1)
    _sat, unit = resaturate(_p, budget)
    numerator = compose_realization_morphisms(
        f1.numerator, compose_realization_morphisms(j1, unit)
    )
    denominator = compose_realization_morphisms(
        f2.denominator, compose_realization_morphisms(j2, unit)
    )
    return Fraction(
        f1.source,
        f2.target,
        numerator,
        denominator,
        Certificate(_merge_status(f1.cert, f2.cert), "pushout of entailment"),
    )


@dataclass(frozen=True)
class FractionCell:
    """2-cell between parallel fractions: a morphism of apexes commuting with
    both numerators and both denominators."""

    source: Fraction
    target: Fraction
    cell: RealizationMorphism


def check_fraction_cell(c: FractionCell) -> None:
    if c.source.source != c.target.source or c.source.target != c.target.target:
        raise ShapeMismatch("cell between non-parallel fractions")
    if c.cell.source != c.source.apex or c.cell.target != c.target.apex:
        raise ShapeMismatch("cell does not map apex to apex")
    check_realization_morphism(c.cell)
    left = compose_realization_morphisms(c.source.numerator, c.cell)
    if left.components != c.target.numerator.components:
        raise ShapeMismatch("cell does not commute with the numerators")
    left = compose_realization_morphisms(c.source.denominator, c.cell)
    if left.components != c.target.denominator.components:
        raise ShapeMismatch("cell does not commute with the denominators")


def _invert_iso(m: RealizationMorphism) -> RealizationMorphism:
    comps = {
        p: {v: x for x, v in table.items()} for p, table in m.components.items()
    }
    return RealizationMorphism(m.target, m.source, comps)


def classes_equal(
    f1: Fraction, f2: Fraction, p: Propagator, budget: int = DEFAULT_BUDGET
) -> bool:
    """Connectivity-class equality: compare the two composites
    (free denominator)^-1 after (free numerator) as plain tables."""
    if f1.source != f2.source or f1.target != f2.target:
        raise ShapeMismatch("classes_equal needs parallel fractions")
    w_src = free(p, f1.source, budget)
    w_tgt = free(p, f1.target, budget)

    def table(f: Fraction) -> dict[str, dict[str, str]]:
        w_apex = free(p, f.apex, budget)
        fn = free_morphism(p, f.numerator, w_src, w_apex)
        fd = free_morphism(p, f.denominator, w_tgt, w_apex)
        if not is_iso(fd):
            raise NotEntailment("denominator is not inverted by the free functor")
        back = _invert_iso(fd)
        return compose_realization_morphisms(fn, back).components

    return table(f1) == table(f2)


# -- rules ------------------------------------------------------------------


@dataclass(frozen=True)
class GluingShape:
    """Finite diagram of specifications with a chosen colimit: nodes carry
    realizations, edges carry morphisms, and when a colimit is supplied its
    injections must form a commuting cocone."""

    nodes: dict[str, Realization]
    edges: dict[str, tuple[str, str, RealizationMorphism]]
    colimit: Realization | None = None
    injections: dict[str, RealizationMorphism] | None = None


def shape_colimit(shape: GluingShape, budget: int = DEFAULT_BUDGET):
    """The colimit of the shape and its injections; uses the declared one
    when present.  A computed colimit is re-saturated, so the result lives
    in the same saturated world as its nodes."""
    if shape.colimit is not None:
        if shape.injections is None:
            raise ShapeMismatch("declared colimit needs declared injections")
        for name in sorted(shape.edges):
            src_n, tgt_n, m = shape.edges[name]
            left = compose_realization_morphisms(m, shape.injections[tgt_n])
            if left.components != shape.injections[src_n].components:
                raise ShapeMismatch(f"declared injections break cocone edge {name}")
        return shape.colimit, shape.injections
    order = sorted(shape.nodes)
    index = {n: i for i, n in enumerate(order)}
    relations = []
    for name in sorted(shape.edges):
        src_n, tgt_n, m = shape.edges[name]
        for pt in sorted(m.source.carriers):
            for x in m.source.carriers[pt]:
                relations.append((index[src_n], x, index[tgt_n], m.components[pt][x]))
    glued, maps = glue([shape.nodes[n] for n in order], relations)
    sat, unit = resaturate(glued, budget)
    injections = {
        n: RealizationMorphism(
            shape.nodes[n],
            sat,
            {
                pt: {
                    x: unit.components[pt][maps[index[n]][x]]
                    for x in shape.nodes[n].carriers[pt]
                }
                for pt in shape.nodes[n].carriers
            },
        )
        for n in order
    }
    return sat, injections


@dataclass(frozen=True)
class Rule:
    """Named inference rule: a fraction from the conclusion pattern to the
    hypothesis pattern.  Bindings name hypothesis elements so proof scripts
    can pin matches; a decomposition, when present, presents the hypothesis
    as a colimit for piecewise matching."""

    name: str
    fraction: Fraction
    bindings: dict[str, str] = field(default_factory=dict)
    decomposition: GluingShape | None = None

    @property
    def hypothesis(self) -> Realization:
        return self.fraction.target

    @property
    def conclusion(self) -> Realization:
        return self.fraction.source


def rule_from_span(
    p: Propagator,
    t: str,
    conclusion: str,
    name: str,
    bindings: dict[str, str] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Rule:
    """Build a rule from two arrows out of the same pattern point: t selects
    the hypothesis part of the pattern and must be inverted by the
    propagator, conclusion selects what the rule derives.  The hypothesis,
    the enriched pattern, and the conclusion are the chases of single generic
    elements; binding names resolve through arrows out of the hypothesis
    pattern point."""
    sketch = p.source
    if t not in sketch.arrows or conclusion not in sketch.arrows:
        raise UnknownRule(f"span arrows {t}/{conclusion} not in the sketch")
    pattern_pt, hyp_pt = sketch.arrows[t]
    if sketch.arrows[conclusion][0] != pattern_pt:
        raise ShapeMismatch("conclusion arrow must leave the pattern point")
    concl_pt = sketch.arrows[conclusion][1]

    pattern_res = chase_generic(sketch, pattern_pt, budget)
    pattern = pattern_res.realization
    generic = pattern_res.resolve("x0")

    hyp_res = chase_generic(sketch, hyp_pt, budget)
    hypothesis = hyp_res.realization
    tau_map = replay(hyp_res, {"x0": pattern.actions[t][generic]}, pattern)
    tau = RealizationMorphism(
        hypothesis,
        pattern,
        {pt: {x: tau_map[x] for x in xs} for pt, xs in hypothesis.carriers.items()},
    )
    check_realization_morphism(tau)

    concl_res = chase_generic(sketch, concl_pt, budget)
    concl = concl_res.realization
    sigma_map = replay(concl_res, {"x0": pattern.actions[conclusion][generic]}, pattern)
    sigma = RealizationMorphism(
        concl,
        pattern,
        {pt: {x: sigma_map[x] for x in xs} for pt, xs in concl.carriers.items()},
    )
    check_realization_morphism(sigma)

    if not is_entailment(p, tau, budget):
        raise NotEntailment(f"rule span {t} is not inverted by the propagator")
    cert = Certificate(CERT_VERIFIED, f"is_entailment over localized {t}")

    hyp_generic = hyp_res.resolve("x0")
    resolved = {}
    for key, arrow in sorted((bindings or {}).items()):
        if arrow not in sketch.arrows or sketch.arrows[arrow][0] != hyp_pt:
            raise UnknownRule(f"binding {key}: arrow {arrow} does not leave {hyp_pt}")
        resolved[key] = hypothesis.actions[arrow][hyp_generic]

    return Rule(name, Fraction(concl, hypothesis, sigma, tau, cert), resolved)


def rule_from_parts(
    p: Propagator,
    name: str,
    hypothesis: Realization,
    extended: Realization,
    conclusion: Realization,
    concl_map: dict[str, dict[str, str]],
    bindings: dict[str, str] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Rule:
    """Build a rule from hand-written realizations: extended must contain
    every hypothesis element under the same name, the denominator is that
    inclusion, and the conclusion maps into extended through concl_map
    (completed by morphism extension when partial).  The inclusion is
    verified as an entailment; bindings name hypothesis elements directly."""
    tau = RealizationMorphism(
        hypothesis,
        extended,
        {pt: {x: x for x in xs} for pt, xs in hypothesis.carriers.items()},
    )
    check_realization_morphism(tau)
    sigma = extend_morphism(conclusion, extended, concl_map)
    if not is_entailment(p, tau, budget):
        raise NotEntailment(f"rule {name}: the added structure is not forced")
    cert = Certificate(CERT_VERIFIED, "is_entailment over the inclusion")

    for key, elem in sorted((bindings or {}).items()):
        if not any(elem in xs for xs in hypothesis.carriers.values()):
            raise UnknownRule(f"binding {key}: {elem} is not a hypothesis element")

    return Rule(
        name, Fraction(conclusion, hypothesis, sigma, tau, cert), dict(bindings or {})
    )


# -- instances and steps ----------------------------------------------------


def find_instances(
    h: Realization,
    sigma: Realization,
    limit: int | None = None,
    pins: dict[str, str] | None = None,
) -> list[Fraction]:
    """Matches of a hypothesis pattern in a specification, as fractions with
    identity denominators, in the canonical search order."""
    return [morphism_fraction(m) for m in hom_search(h, sigma, pins=pins, limit=limit)]


def _require_certified(f: Fraction, what: str) -> None:
    if f.cert.status == CERT_UNKNOWN:
        raise ProofError(f"{what} carries an unverified denominator")


def apply_rule(rule: Rule, kappa: Fraction, budget: int = DEFAULT_BUDGET):
    """One inference step: compose the rule fraction with the instance.
    Returns the resulting fraction (conclusion into the enlarged
    specification) and the step entailment out of the old specification."""
    if kappa.source != rule.hypothesis:
        raise ShapeMismatch("instance does not start at the rule hypothesis")
    _require_certified(rule.fraction, f"rule {rule.name}")
    _require_certified(kappa, "instance")
    gamma = compose_fractions(rule.fraction, kappa, budget)
    return gamma, gamma.denominator


# -- lax cotuples -----------------------------------------------------------


def lax_cotuple(
    parts: dict[str, Fraction],
    shape: GluingShape,
    cells: dict[str, RealizationMorphism] | None = None,
    budget: int = DEFAULT_BUDGET,
):
    """Assemble one fraction out of the shape's colimit from compatible
    per-node fractions into a common specification.  For each edge the parts
    must agree up to a cell (supplied, or inferred when both denominators are
    identities); the apexes and the shared target are glued, re-saturated,
    and the mediating fraction plus the per-node comparison cells are
    returned."""
    if set(parts) != set(shape.nodes):
        raise ShapeMismatch("parts must be indexed by the shape nodes")
    names = sorted(parts)
    sigma_t = parts[names[0]].target
    for n in names[1:]:
        if parts[n].target != sigma_t:
            raise ShapeMismatch("parts do not share a target specification")
    for n in names:
        if parts[n].source != shape.nodes[n]:
            raise ShapeMismatch(f"part {n} does not start at its shape node")

    if len(shape.nodes) == 1 and not shape.edges and shape.colimit is None:
        only = names[0]
        f = parts[only]
        cell = FractionCell(f, f, identity_morphism(f.apex))
        return f, {only: cell}

    # one comparison cell per edge: alpha: apex(f_J) -> apex(f_K after b(j))
    checked_cells: dict[str, RealizationMorphism] = {}
    for edge in sorted(shape.edges):
        src_n, tgt_n, bj = shape.edges[edge]
        composed = compose_fractions(morphism_fraction(bj), parts[tgt_n], budget)
        if cells is not None and edge in cells:
            alpha = cells[edge]
        elif _is_identity(parts[src_n].denominator) and _is_identity(
            parts[tgt_n].denominator
        ):
            alpha = identity_morphism(sigma_t)
        else:
            raise ShapeMismatch(f"edge {edge} needs an explicit cell")
        check_fraction_cell(FractionCell(parts[src_n], composed, alpha))
        checked_cells[edge] = alpha

    colim, injections = shape_colimit(shape, budget)

    # glue the shared target with every apex, identifying along the
    # denominators and the cells; part 0 is the target so its names win
    index = {n: i for i, n in enumerate(names, start=1)}
    pieces = [sigma_t] + [parts[n].apex for n in names]
    relations = []
    for n in names:
        denom = parts[n].denominator
        for pt in sorted(sigma_t.carriers):
            for x in sigma_t.carriers[pt]:
                relations.append((0, x, index[n], denom.components[pt][x]))
    for edge in sorted(shape.edges):
        src_n, tgt_n, _bj = shape.edges[edge]
        alpha = checked_cells[edge]
        for pt in sorted(alpha.source.carriers):
            for x in alpha.source.carriers[pt]:
                relations.append(
                    (index[src_n], x, index[tgt_n], alpha.components[pt][x])
                )
    glued, maps = glue(pieces, relations, prefer=0)
    apex, unit = resaturate(glued, budget)

    def into_apex(i: int, r: Realization) -> RealizationMorphism:
        comps = {
            pt: {x: unit.components[pt][maps[i][x]] for x in r.carriers[pt]}
            for pt in r.carriers
        }
        return RealizationMorphism(r, apex, comps)

    tau = into_apex(0, sigma_t)
    betas = {n: into_apex(index[n], parts[n].apex) for n in names}

    # mediating numerator out of the colimit, defined through any covering
    # injection; a declared saturated colimit may have forced elements
    # (cone repairs over injected ones) which the extension fills in
    comps: dict[str, dict[str, str]] = {pt: {} for pt in colim.carriers}
    for n in names:
        inj = injections[n]
        through = compose_realization_morphisms(parts[n].numerator, betas[n])
        for pt in sorted(shape.nodes[n].carriers):
            for x in shape.nodes[n].carriers[pt]:
                z = inj.components[pt][x]
                want = through.components[pt][x]
                if comps[pt].setdefault(z, want) != want:
                    raise ShapeMismatch("cotuple parts disagree on a shared element")
    try:
        sigma = extend_morphism(colim, apex, comps)
    except InvalidMorphism as exc:
        raise ShapeMismatch(f"colimit injections do not determine the mediator: {exc}")

    cert = Certificate(
        _merge_status(*(parts[n].cert for n in names)), "lax cotuple gluing"
    )
    result = Fraction(colim, sigma_t, sigma, tau, cert)
    beta_cells = {}
    for n in names:
        target_fraction = compose_fractions(morphism_fraction(injections[n]), result, budget)
        cell = FractionCell(parts[n], target_fraction, betas[n])
        check_fraction_cell(cell)
        beta_cells[n] = cell
    return result, beta_cells


# -- proofs -----------------------------------------------------------------


@dataclass(frozen=True)
class ProofStep:
    rule: str
    directives: dict[str, str]
    instance: Fraction
    result: Fraction
    entailment: RealizationMorphism


@dataclass(frozen=True)
class Proof:
    start: Realization
    steps: tuple[ProofStep, ...]
    fraction: Fraction
    entailment: RealizationMorphism

    @property
    def final(self) -> Realization:
        return self.entailment.target


def run_proof(
    script: list[tuple[str, dict[str, str]]],
    start: Realization,
    rules: dict[str, Rule],
    budget: int = DEFAULT_BUDGET,
) -> Proof:
    """Fold rule applications over the script, threading the growing
    specification.  Each directive must select exactly one instance."""
    sigma = start
    entail = identity_morphism(start)
    steps: list[ProofStep] = []
    for i, (rule_name, directives) in enumerate(script):
        rule = rules.get(rule_name)
        if rule is None:
            raise UnknownRule(f"step {i}: no rule named {rule_name}")
        pins = {}
        for key in sorted(directives):
            if key not in rule.bindings:
                raise ProofError(
                    f"step {i}: rule {rule_name} has no binding {key}"
                )
            pins[rule.bindings[key]] = directives[key]
        instances = find_instances(rule.hypothesis, sigma, pins=pins)
        if not instances:
            raise NoMatch(f"step {i}: rule {rule_name} matches nothing for {directives}")
        if len(instances) > 1:
            shown = []
            for inst in instances:
                picks = {
                    key: inst.numerator.components[
                        inst.source.point_of(elem)
                    ][elem]
                    for key, elem in sorted(rule.bindings.items())
                }
                shown.append(str(picks))
            raise AmbiguousMatch(
                f"step {i}: rule {rule_name} matches {len(instances)} instances: "
                + "; ".join(shown)
            )
        gamma, tau = apply_rule(rule, instances[0], budget)
        steps.append(ProofStep(rule_name, dict(directives), instances[0], gamma, tau))
        entail = compose_realization_morphisms(entail, tau)
        sigma = tau.target
    if steps:
        last = steps[-1].result
        composite = Fraction(
            last.source,
            start,
            last.numerator,
            entail,
            Certificate(
                _merge_status(*(s.result.cert for s in steps)), "proof composite"
            ),
        )
    else:
        composite = identity_fraction(start)
    return Proof(start, tuple(steps), composite, entail)
