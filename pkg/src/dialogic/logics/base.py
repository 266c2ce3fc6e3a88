"""Logic objects: a data sketch, a localizer over it, and named rules.

A logic morphism is a sketch morphism between data sketches that sends every
source entailment to an entailment of the target logic; registration checks
that on the rule denominators, which generate the inference content.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..chase import DEFAULT_BUDGET
from ..errors import EntailmentNotPreserved, InvalidMorphism
from ..inference import Rule
from ..propagator import Propagator, free, free_morphism, is_entailment
from ..sketch import Sketch, SketchMorphism, validate_sketch_morphism


@dataclass
class Logic:
    name: str
    data_sketch: Sketch  # specifications live over this
    propagator: Propagator  # localizer into the theory sketch
    rules: dict[str, Rule]
    morphisms: dict[str, "LogicMorphism"] = field(default_factory=dict)


def check_logic(logic: Logic) -> None:
    if logic.propagator.source != logic.data_sketch:
        raise InvalidMorphism("propagator does not start at the data sketch")
    if not logic.propagator.is_localizer:
        raise InvalidMorphism("inference system must be a localizer")
    for name, rule in logic.rules.items():
        if rule.fraction.cert.status != "verified":
            raise InvalidMorphism(f"rule {name} lacks a verified certificate")


@dataclass
class LogicMorphism:
    """Translation between logics: a sketch morphism on the data sketches
    plus, for proof translation, an image rule for every source rule."""

    name: str
    source: Logic
    target: Logic
    sketch_morphism: SketchMorphism
    rule_images: dict[str, str] = field(default_factory=dict)


def register_morphism(lm: LogicMorphism, budget: int = DEFAULT_BUDGET) -> None:
    """Admit a logic morphism after checking that every source rule's
    denominator, pushed forward along the sketch morphism, is still an
    entailment for the target logic."""
    validate_sketch_morphism(lm.sketch_morphism)
    carry = Propagator(lm.sketch_morphism)
    for rule_name, rule in sorted(lm.source.rules.items()):
        tau = rule.fraction.denominator
        w_src = free(carry, tau.source, budget)
        w_tgt = free(carry, tau.target, budget)
        moved = free_morphism(carry, tau, w_src, w_tgt)
        if not is_entailment(lm.target.propagator, moved, budget):
            raise EntailmentNotPreserved(
                f"{lm.name}: rule {rule_name} loses its entailment"
            )
    for rule_name in lm.rule_images:
        if rule_name not in lm.source.rules:
            raise InvalidMorphism(f"{lm.name}: no source rule {rule_name}")
        if lm.rule_images[rule_name] not in lm.target.rules:
            raise InvalidMorphism(f"{lm.name}: no target rule {lm.rule_images[rule_name]}")
    lm.source.morphisms[lm.name] = lm
