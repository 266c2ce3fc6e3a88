"""Shipped logics and the morphisms between them."""

from __future__ import annotations

from ..errors import UnknownLogic
from .base import Logic, LogicMorphism, check_logic, register_morphism

_BUILDERS = {}
_CACHE: dict[str, Logic] = {}


def _register(name):
    def wrap(fn):
        _BUILDERS[name] = fn
        return fn

    return wrap


def builtin(name: str) -> Logic:
    """Return a shipped logic by name; instances are cached and immutable by
    convention."""
    if name not in _BUILDERS:
        raise UnknownLogic(
            f"no logic named {name}; available: {', '.join(sorted(_BUILDERS))}"
        )
    if name not in _CACHE:
        logic = _BUILDERS[name]()
        check_logic(logic)
        _CACHE[name] = logic
    return _CACHE[name]


@_register("mp")
def _mp() -> Logic:
    from . import mp

    return mp.build()


@_register("eq")
def _eq() -> Logic:
    from . import eq

    return eq.build()


@_register("eq-effect")
def _eq_effect() -> Logic:
    from . import effect

    return effect.build()
