import re

import pytest
from hypothesis import given, settings, strategies as st

from dialogic.chase import PreRealization, chase_generic, replay, saturate
from dialogic.errors import ChaseBudgetExceeded, InvalidRealization
from dialogic.realization import (
    Realization,
    RealizationMorphism,
    check_realization,
    check_realization_morphism,
    cones_are_limits,
    serialize_realization,
)
from dialogic.sketch import SketchBuilder


def chain_sketch():
    b = SketchBuilder()
    b.arrow("f", "X", "Y")
    b.arrow("g", "Y", "Z")
    b.composite("f", "g", "h")
    return b.build()


def product_sketch():
    b = SketchBuilder()
    b.arrow("p1", "P", "A")
    b.arrow("p2", "P", "B")
    b.cone("prod", "P", {"na": "A", "nb": "B"}, {}, {"na": "p1", "nb": "p2"})
    return b.build()


def equalizer_sketch():
    b = SketchBuilder()
    b.arrow("pe", "E", "X")
    b.arrow("py", "E", "Y")
    b.arrow("f", "X", "Y")
    b.arrow("g", "X", "Y")
    b.composite("pe", "f", "py")
    b.composite("pe", "g", "py")
    b.cone(
        "eq",
        "E",
        {"nx": "X", "ny": "Y"},
        {"e1": ("nx", "ny", "f"), "e2": ("nx", "ny", "g")},
        {"nx": "pe", "ny": "py"},
    )
    return b.build()


class TestDeterminations:
    def test_forward_composite_needs_no_fresh(self):
        pre = PreRealization(
            chain_sketch(),
            {"X": ["x"], "Y": ["y"], "Z": ["z"]},
            {"f": {"x": "y"}, "g": {"y": "z"}},
        )
        res = saturate(pre)
        assert res.realization.actions["h"] == {"x": "z"}
        assert res.realization.carriers["Z"] == ("z",)

    def test_backward_determination(self):
        # h and f are known; g must be filled on the image of f, not invented
        pre = PreRealization(
            chain_sketch(),
            {"X": ["x"], "Y": ["y"], "Z": ["z"]},
            {"f": {"x": "y"}, "h": {"x": "z"}},
        )
        res = saturate(pre)
        assert res.realization.actions["g"] == {"y": "z"}
        assert res.realization.size() == 3

    def test_conflict_merges_to_lex_smallest(self):
        # g;f lands on z1 while h is pinned to z2, so z1 and z2 must merge
        pre = PreRealization(
            chain_sketch(),
            {"X": ["x"], "Y": ["y"], "Z": ["z1", "z2"]},
            {"f": {"x": "y"}, "g": {"y": "z1"}, "h": {"x": "z2"}},
        )
        res = saturate(pre)
        assert res.realization.carriers["Z"] == ("z1",)
        assert res.resolve("z2") == "z1"
        assert res.realization.actions["h"] == {"x": "z1"}

    def test_fresh_element_naming(self):
        b = SketchBuilder()
        b.arrow("f", "X", "Y")
        s = b.build()
        res = saturate(PreRealization(s, {"X": ["x"]}, {}))
        (y,) = res.realization.carriers["Y"]
        assert re.fullmatch(r"Y#\d+#[0-9a-f]{8}", y)
        assert res.realization.actions["f"] == {"x": y}

    def test_global_name_clash_rejected(self):
        s = chain_sketch()
        with pytest.raises(InvalidRealization):
            saturate(PreRealization(s, {"X": ["a"], "Y": ["a"], "Z": []}, {}))


class TestConeRepair:
    def test_product_is_materialized(self):
        pre = PreRealization(
            product_sketch(), {"A": ["a1", "a2"], "B": ["b1"]}, {}
        )
        res = saturate(pre)
        r = res.realization
        assert len(r.carriers["P"]) == 2
        assert cones_are_limits(r) == []
        check_realization(r)

    def test_duplicate_vertices_merge_to_lex_smallest(self):
        pre = PreRealization(
            product_sketch(),
            {"A": ["a"], "B": ["b"], "P": ["v1", "v2"]},
            {"p1": {"v1": "a", "v2": "a"}, "p2": {"v1": "b", "v2": "b"}},
        )
        res = saturate(pre)
        assert res.realization.carriers["P"] == ("v1",)
        assert res.resolve("v2") == "v1"

    def test_equalizer_selects_agreeing_elements(self):
        pre = PreRealization(
            equalizer_sketch(),
            {"X": ["x1", "x2", "x3"], "Y": ["y1", "y2"]},
            {
                "f": {"x1": "y1", "x2": "y2", "x3": "y1"},
                "g": {"x1": "y1", "x2": "y1", "x3": "y1"},
            },
        )
        res = saturate(pre)
        r = res.realization
        assert len(r.carriers["E"]) == 2
        assert sorted(r.actions["pe"].values()) == ["x1", "x3"]
        assert cones_are_limits(r) == []

    def test_empty_base_cone_makes_singleton(self):
        b = SketchBuilder()
        b.point("One")
        b.cone("terminal", "One", {}, {}, {})
        s = b.build()
        res = saturate(PreRealization(s, {}, {}))
        assert len(res.realization.carriers["One"]) == 1


class TestBudgetAndDeterminism:
    def test_divergent_chase_raises(self):
        b = SketchBuilder()
        b.arrow("s", "N", "N")
        s = b.build()
        with pytest.raises(ChaseBudgetExceeded):
            saturate(PreRealization(s, {"N": ["z"]}, {}), budget=40)

    def test_byte_identical_reruns(self):
        pre = PreRealization(
            equalizer_sketch(),
            {"X": ["x1", "x2"], "Y": []},
            {},
        )
        one = serialize_realization(saturate(pre).realization)
        two = serialize_realization(saturate(pre).realization)
        assert one == two

    def test_resaturation_adds_nothing(self):
        pre = PreRealization(product_sketch(), {"A": ["a1", "a2"], "B": ["b1"]}, {})
        first = saturate(pre).realization
        again = saturate(
            PreRealization(
                first.sketch,
                {p: list(xs) for p, xs in first.carriers.items()},
                {a: dict(t) for a, t in first.actions.items()},
            )
        ).realization
        assert again == first


class TestReplay:
    def test_replay_into_closed_target(self):
        pre = PreRealization(product_sketch(), {"A": ["a1", "a2"], "B": ["b1"]}, {})
        res = saturate(pre)
        target = saturate(
            PreRealization(product_sketch(), {"A": ["u"], "B": ["w"]}, {})
        ).realization
        phi = replay(res, {"a1": "u", "a2": "u", "b1": "w"}, target)
        comps = {p: {} for p in target.sketch.points}
        for p, xs in res.realization.carriers.items():
            for x in xs:
                comps[p][x] = phi[x]
        m = RealizationMorphism(res.realization, target, comps)
        check_realization_morphism(m)

    def test_generic_element_chase(self):
        res = chase_generic(chain_sketch(), "X")
        r = res.realization
        assert r.carriers["X"] == ("x0",)
        assert len(r.carriers["Y"]) == 1
        assert len(r.carriers["Z"]) == 1
        assert r.actions["h"]["x0"] == r.actions["g"][r.actions["f"]["x0"]]


@st.composite
def product_inputs(draw):
    na = draw(st.integers(0, 3))
    nb = draw(st.integers(0, 3))
    return [f"a{i}" for i in range(na)], [f"b{i}" for i in range(nb)]


@settings(max_examples=40, derandomize=True)
@given(product_inputs())
def test_product_cardinality_property(data):
    xs, ys = data
    res = saturate(PreRealization(product_sketch(), {"A": xs, "B": ys}, {}))
    r = res.realization
    assert len(r.carriers["P"]) == len(xs) * len(ys)
    assert cones_are_limits(r) == []
    check_realization(r)


@st.composite
def equalizer_inputs(draw):
    nx = draw(st.integers(0, 4))
    ny = draw(st.integers(1, 3))
    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{i}" for i in range(ny)]
    f = {x: ys[draw(st.integers(0, ny - 1))] for x in xs}
    g = {x: ys[draw(st.integers(0, ny - 1))] for x in xs}
    return xs, ys, f, g


@settings(max_examples=40, derandomize=True)
@given(equalizer_inputs())
def test_equalizer_cardinality_property(data):
    xs, ys, f, g = data
    res = saturate(
        PreRealization(equalizer_sketch(), {"X": xs, "Y": ys}, {"f": f, "g": g})
    )
    r = res.realization
    expected = sum(1 for x in xs if f[x] == g[x])
    assert len(r.carriers["E"]) == expected
    assert cones_are_limits(r) == []
