"""Independent closure oracle for the modus ponens logic.

Works on plain formula syntax, no engine imports: formulas are atoms or
implication pairs, and the provable set is closed under one rule: if A is
provable and A=>B is provable then B is provable.  Iterate to a fixpoint.
"""

from __future__ import annotations


def close_provables(
    implications: dict[str, tuple[str, str]], provables: set[str]
) -> set[str]:
    """implications: formula name -> (left, right); provables: formula names.
    Returns the least fixpoint of the modus ponens step."""
    out = set(provables)
    changed = True
    while changed:
        changed = False
        for name, (left, right) in sorted(implications.items()):
            if name in out and left in out and right not in out:
                out.add(right)
                changed = True
    return out
