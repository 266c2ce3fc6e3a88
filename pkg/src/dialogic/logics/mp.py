"""Minimal propositional logic: formulas, implication definitions, provables,
and the modus ponens rule.

The data sketch has formulas (Fm), implication definitions (Dm) with left,
right, and result formulas, and provability witnesses (Pm) pointing at the
formula they prove.  The premise pattern MPH is the limit of "an implication
together with proofs of its left part and of itself"; the enriched pattern
MPH2 adds the conclusion witness.  Localizing the projection t_mp: MPH2 ->
MPH makes the conclusion derivable from the premise, which is the modus
ponens rule.
"""

from __future__ import annotations

from ..chase import DEFAULT_BUDGET, PreRealization, saturate
from ..errors import InvalidRealization
from ..inference import rule_from_span
from ..propagator import localizer
from ..realization import Realization
from ..sketch import SketchBuilder
from .base import Logic


def _sketch():
    b = SketchBuilder()
    b.arrow("l", "Dm", "Fm")
    b.arrow("r", "Dm", "Fm")
    b.arrow("imp", "Dm", "Fm")
    b.arrow("j", "Pm", "Fm")
    b.arrow("hd", "MPH", "Dm")
    b.arrow("h1", "MPH", "Pm")
    b.arrow("h2", "MPH", "Pm")
    b.arrow("t_mp", "MPH2", "MPH")
    b.arrow("concl", "MPH2", "Pm")
    # shared composites tie the premise parts together: the first proof is of
    # the implication's left formula, the second of the implication itself
    b.composite("hd", "l", "hf1")
    b.composite("h1", "j", "hf1")
    b.composite("hd", "imp", "hf2")
    b.composite("h2", "j", "hf2")
    # the conclusion proves the implication's right formula
    b.composite("hd", "r", "hdr")
    b.composite("t_mp", "hdr", "hb2")
    b.composite("concl", "j", "hb2")
    b.cone(
        "premise",
        "MPH",
        nodes={"nd": "Dm", "n1": "Pm", "n2": "Pm", "na": "Fm", "nb": "Fm"},
        edges={
            "e1": ("nd", "na", "l"),
            "e2": ("n1", "na", "j"),
            "e3": ("nd", "nb", "imp"),
            "e4": ("n2", "nb", "j"),
        },
        projections={"nd": "hd", "n1": "h1", "n2": "h2", "na": "hf1", "nb": "hf2"},
    )
    return b.build()


def build(budget: int = DEFAULT_BUDGET) -> Logic:
    sketch = _sketch()
    p = localizer(sketch, ["t_mp"])
    rule = rule_from_span(
        p,
        "t_mp",
        "concl",
        "mp",
        bindings={"A": "hf1", "B": "hdr", "AB": "hf2"},
        budget=budget,
    )
    return Logic("mp", sketch, p, {"mp": rule})


def mp_spec(
    logic: Logic,
    formulas: dict[str, tuple[str, str] | None],
    provables: list[str],
    budget: int = DEFAULT_BUDGET,
) -> Realization:
    """Specification from formula syntax: formulas maps each name to None
    (atomic) or (left, right) (implication); provables lists formula names.
    Implication definitions are named <formula>.d and provability witnesses
    <formula>!; the result is saturated so the premise patterns are
    materialized."""
    fm = sorted(formulas)
    for name, parts in formulas.items():
        if parts is not None:
            left, right = parts
            if left not in formulas or right not in formulas:
                raise InvalidRealization(f"implication {name} uses unknown formulas")
    for name in provables:
        if name not in formulas:
            raise InvalidRealization(f"provable {name} is not a formula")
    dm = [f"{n}.d" for n in fm if formulas[n] is not None]
    pm = [f"{n}!" for n in sorted(set(provables))]
    actions = {
        "l": {f"{n}.d": formulas[n][0] for n in fm if formulas[n] is not None},
        "r": {f"{n}.d": formulas[n][1] for n in fm if formulas[n] is not None},
        "imp": {f"{n}.d": n for n in fm if formulas[n] is not None},
        "j": {f"{n}!": n for n in sorted(set(provables))},
    }
    pre = PreRealization(
        logic.data_sketch,
        {"Fm": list(fm), "Dm": dm, "Pm": pm, "MPH": [], "MPH2": []},
        actions,
    )
    return saturate(pre, budget).realization


def provable_formulas(spec: Realization) -> set[str]:
    """The set of formulas with at least one provability witness."""
    return set(spec.actions["j"].values())
