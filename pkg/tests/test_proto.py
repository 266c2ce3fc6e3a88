import pytest
from hypothesis import given, settings, strategies as st

from dialogic.errors import ChaseBudgetExceeded
from dialogic.proto import is_acyclic, prototype
from dialogic.sketch import SketchBuilder

from path_oracle import hom_sizes, loop_classes


def build(spec):
    b = SketchBuilder()
    for name, src, tgt in spec.get("arrows", ()):
        b.arrow(name, src, tgt)
    for p in spec.get("ids", ()):
        b.identity(p)
    for f, g, h in spec.get("comps", ()):
        b.composite(f, g, h)
    return b.build()


class TestAgainstOracle:
    """Expected sizes below were computed with the path enumeration oracle
    and frozen; each test also reruns the oracle to keep both routes live."""

    def test_single_arrow(self):
        s = build({"arrows": [("f", "X", "Y")]})
        expected = {("X", "X"): 1, ("X", "Y"): 1, ("Y", "Y"): 1}
        assert hom_sizes(s) == expected
        assert prototype(s).hom_sizes() == expected
        assert loop_classes(s) == 0
        assert is_acyclic(s)

    def test_chain_with_composite_and_stray(self):
        s = build(
            {
                "arrows": [("f", "X", "Y"), ("g", "Y", "Z"), ("k", "X", "Z")],
                "comps": [("f", "g", "h")],
            }
        )
        expected = {
            ("X", "X"): 1,
            ("X", "Y"): 1,
            ("X", "Z"): 2,
            ("Y", "Y"): 1,
            ("Y", "Z"): 1,
            ("Z", "Z"): 1,
        }
        assert hom_sizes(s) == expected
        assert prototype(s).hom_sizes() == expected

    def test_associativity_collapses_bracketings(self):
        # only (f;g)=p and (g;h)=q are declared; p;h = f;q must follow
        s = build(
            {
                "arrows": [("f", "A", "B"), ("g", "B", "C"), ("h", "C", "D")],
                "comps": [("f", "g", "p"), ("g", "h", "q")],
            }
        )
        assert hom_sizes(s)[("A", "D")] == 1
        p = prototype(s)
        assert p.hom_sizes()[("A", "D")] == 1
        assert p.class_of_path(["p", "h"]) == p.class_of_path(["f", "q"])
        assert p.class_of_path(["f", "g", "h"]) == p.class_of_path(["p", "h"])

    def test_commuting_square(self):
        b = SketchBuilder()
        b.arrow("t", "A", "B")
        b.arrow("u", "B", "D")
        b.arrow("l", "A", "C")
        b.arrow("v", "C", "D")
        b.equate_paths("d", ["t", "u"], ["l", "v"])
        s = b.build()
        expected = {
            ("A", "A"): 1,
            ("A", "B"): 1,
            ("A", "C"): 1,
            ("A", "D"): 1,
            ("B", "B"): 1,
            ("B", "D"): 1,
            ("C", "C"): 1,
            ("C", "D"): 1,
            ("D", "D"): 1,
        }
        assert hom_sizes(s) == expected
        assert prototype(s).hom_sizes() == expected


class TestInvertedPair:
    """Cyclic graph whose unit equations keep the prototype finite."""

    def setup_method(self):
        b = SketchBuilder()
        b.arrow("t", "H1", "H")
        b.arrow("t_inv", "H", "H1")
        b.identity("H1")
        b.identity("H")
        b.composite("t", "t_inv", "id_H1")
        b.composite("t_inv", "t", "id_H")
        self.sketch = b.build()

    def test_prototype_is_finite_and_collapsed(self):
        p = prototype(self.sketch)
        assert p.size() == 4
        assert p.hom_sizes() == {
            ("H", "H"): 1,
            ("H", "H1"): 1,
            ("H1", "H"): 1,
            ("H1", "H1"): 1,
        }
        assert p.is_identity_class(p.class_of_path(["t", "t_inv"]))
        assert p.class_of_path(["t", "t_inv", "t"]) == p.class_of_arrow("t")

    def test_counts_as_loop_free(self):
        assert is_acyclic(self.sketch)


class TestDivergence:
    def test_free_loop_exceeds_budget(self):
        s = build({"arrows": [("e", "X", "X")]})
        with pytest.raises(ChaseBudgetExceeded):
            prototype(s, budget=60)

    def test_is_acyclic_false_on_budget(self):
        s = build({"arrows": [("e", "X", "X")]})
        assert is_acyclic(s, budget=60) is False


@st.composite
def dag_sketches(draw):
    n = draw(st.integers(2, 4))
    points = [f"P{i}" for i in range(n)]
    k = draw(st.integers(1, 5))
    b = SketchBuilder()
    for p in points:
        b.point(p)
    arrows = []
    for i in range(k):
        lo = draw(st.integers(0, n - 2))
        hi = draw(st.integers(lo + 1, n - 1))
        b.arrow(f"a{i}", points[lo], points[hi])
        arrows.append(f"a{i}")
    composable = sorted(
        (f, g)
        for f in arrows
        for g in arrows
        if b.arrows[f][1] == b.arrows[g][0]
    )
    if composable:
        chosen = draw(st.sets(st.sampled_from(composable), max_size=3))
        for i, (f, g) in enumerate(sorted(chosen)):
            b.composite(f, g, f"c{i}")
    return b.build()


@settings(max_examples=40, derandomize=True, deadline=None)
@given(dag_sketches())
def test_prototype_matches_oracle_on_random_dags(s):
    assert prototype(s).hom_sizes() == hom_sizes(s)
