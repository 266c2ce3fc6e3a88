import pytest
from hypothesis import given, settings, strategies as st

from dialogic.colimit import glue, pushout
from dialogic.errors import ShapeMismatch
from dialogic.hom import hom_search
from dialogic.realization import (
    Realization,
    RealizationMorphism,
    check_realization,
    check_realization_morphism,
    compose_realization_morphisms,
    is_iso,
)
from dialogic.sketch import SketchBuilder


def arrow_sketch():
    b = SketchBuilder()
    b.arrow("f", "X", "Y")
    return b.build()


def spec(xs, ys, f):
    return Realization(arrow_sketch(), {"X": tuple(xs), "Y": tuple(ys)}, {"f": dict(f)})


class TestHomSearch:
    def test_counts_functions(self):
        # with f forced, maps X -> X' are free choices compatible with f
        a = spec(["a"], ["c"], {"a": "c"})
        b = spec(["p", "q"], ["r"], {"p": "r", "q": "r"})
        homs = hom_search(a, b)
        # a can land on p or q, c must land on r
        assert len(homs) == 2
        for m in homs:
            check_realization_morphism(m)

    def test_pins(self):
        a = spec(["a"], ["c"], {"a": "c"})
        b = spec(["p", "q"], ["r"], {"p": "r", "q": "r"})
        homs = hom_search(a, b, pins={"a": "q"})
        assert len(homs) == 1
        assert homs[0].components["X"]["a"] == "q"

    def test_no_match(self):
        a = spec(["a"], ["c"], {"a": "c"})
        empty = spec([], [], {})
        assert hom_search(a, empty) == []

    def test_limit(self):
        a = spec(["a"], ["c"], {"a": "c"})
        b = spec(["p", "q", "s"], ["r"], {"p": "r", "q": "r", "s": "r"})
        homs = hom_search(a, b, limit=2)
        assert len(homs) == 2

    def test_propagation_respects_actions(self):
        a = spec(["a"], ["c"], {"a": "c"})
        b = spec(["p"], ["r", "t"], {"p": "r"})
        homs = hom_search(a, b)
        assert len(homs) == 1
        assert homs[0].components["Y"]["c"] == "r"

    def test_sketch_mismatch(self):
        other = SketchBuilder()
        other.point("Z")
        z = Realization(other.build(), {"Z": ()}, {})
        with pytest.raises(ShapeMismatch):
            hom_search(spec([], [], {}), z)


class TestGlue:
    def test_disjoint_union(self):
        a = spec(["a"], ["c"], {"a": "c"})
        b = spec(["a"], ["d"], {"a": "d"})
        out, injections = glue([a, b], [])
        assert len(out.carriers["X"]) == 2
        assert len(out.carriers["Y"]) == 2
        # name collision across parts is disambiguated
        assert injections[0]["a"] != injections[1]["a"]
        check_realization(out)

    def test_identification_propagates_along_actions(self):
        a = spec(["a"], ["c"], {"a": "c"})
        b = spec(["b"], ["d"], {"b": "d"})
        out, injections = glue([a, b], [(0, "a", 1, "b")])
        # merging a with b forces f(a) = f(b)
        assert len(out.carriers["X"]) == 1
        assert len(out.carriers["Y"]) == 1
        assert injections[0]["c"] == injections[1]["d"]

    def test_cross_point_identification_rejected(self):
        a = spec(["a"], ["c"], {"a": "c"})
        with pytest.raises(ShapeMismatch):
            glue([a, a], [(0, "a", 1, "c")])

    def test_deterministic_naming(self):
        a = spec(["a"], ["c"], {"a": "c"})
        b = spec(["b"], ["d"], {"b": "d"})
        out1, _ = glue([a, b], [(0, "a", 1, "b")])
        out2, _ = glue([a, b], [(0, "a", 1, "b")])
        assert out1 == out2


class TestPushout:
    def make_span(self):
        apex = spec(["m"], ["n"], {"m": "n"})
        left = spec(["a", "x"], ["c"], {"a": "c", "x": "c"})
        right = spec(["b"], ["d", "e"], {"b": "d"})
        f = RealizationMorphism(apex, left, {"X": {"m": "a"}, "Y": {"n": "c"}})
        g = RealizationMorphism(apex, right, {"X": {"m": "b"}, "Y": {"n": "d"}})
        check_realization_morphism(f)
        check_realization_morphism(g)
        return apex, left, right, f, g

    def test_square_commutes(self):
        apex, left, right, f, g = self.make_span()
        out, inj_l, inj_r = pushout(f, g)
        check_realization(out)
        check_realization_morphism(inj_l)
        check_realization_morphism(inj_r)
        lf = compose_realization_morphisms(f, inj_l)
        rg = compose_realization_morphisms(g, inj_r)
        assert lf.components == rg.components

    def test_cardinality(self):
        apex, left, right, f, g = self.make_span()
        out, inj_l, inj_r = pushout(f, g)
        # |left| + |right| - |apex| pointwise when the legs are injective
        assert len(out.carriers["X"]) == 2
        assert len(out.carriers["Y"]) == 2

    def test_universal_property(self):
        apex, left, right, f, g = self.make_span()
        out, inj_l, inj_r = pushout(f, g)
        # any cocone through the span factors uniquely
        target = spec(["u", "v", "w"], ["s", "t"], {"u": "s", "v": "s", "w": "t"})
        for m_l in hom_search(left, target):
            for m_r in hom_search(right, target):
                lf = compose_realization_morphisms(f, m_l)
                rg = compose_realization_morphisms(g, m_r)
                if lf.components != rg.components:
                    continue
                factorings = [
                    h
                    for h in hom_search(out, target)
                    if compose_realization_morphisms(inj_l, h).components == m_l.components
                    and compose_realization_morphisms(inj_r, h).components == m_r.components
                ]
                assert len(factorings) == 1

    def test_pushout_along_identity_is_iso(self):
        apex, left, right, f, g = self.make_span()
        ident = RealizationMorphism(
            apex, apex, {p: {x: x for x in apex.carriers[p]} for p in sorted(apex.sketch.points)}
        )
        out, inj_l, inj_r = pushout(ident, g)
        assert is_iso(inj_r)


@st.composite
def small_spans(draw):
    nx = draw(st.integers(min_value=1, max_value=3))
    ny = draw(st.integers(min_value=1, max_value=2))
    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{i}" for i in range(ny)]
    f = {x: draw(st.sampled_from(ys)) for x in xs}
    apex = spec(xs, ys, f)

    def random_morphism(tag):
        mx = draw(st.integers(min_value=nx, max_value=nx + 2))
        my = draw(st.integers(min_value=ny, max_value=ny + 2))
        txs = [f"{tag}x{i}" for i in range(mx)]
        tys = [f"{tag}y{i}" for i in range(my)]
        # keep the X component injective so the naturality constraints
        # tf(cx(x)) = cy(f(x)) never collide
        cx = {x: txs[i] for i, x in enumerate(xs)}
        cy = {y: draw(st.sampled_from(tys)) for y in ys}
        tf = {cx[x]: cy[f[x]] for x in xs}
        for tx in txs:
            if tx not in tf:
                tf[tx] = draw(st.sampled_from(tys))
        tgt = spec(txs, tys, tf)
        return RealizationMorphism(apex, tgt, {"X": cx, "Y": cy})

    return apex, random_morphism("l"), random_morphism("r")


class TestPushoutProperties:
    @settings(max_examples=30, derandomize=True, deadline=None)
    @given(small_spans())
    def test_random_pushouts_commute_and_validate(self, span):
        apex, f, g = span
        check_realization_morphism(f)
        check_realization_morphism(g)
        out, inj_l, inj_r = pushout(f, g)
        check_realization(out)
        check_realization_morphism(inj_l)
        check_realization_morphism(inj_r)
        lf = compose_realization_morphisms(f, inj_l)
        rg = compose_realization_morphisms(g, inj_r)
        assert lf.components == rg.components
        # jointly surjective: every element of the pushout is hit
        for p in out.sketch.points:
            hit = set(inj_l.components[p].values()) | set(inj_r.components[p].values())
            assert hit == set(out.carriers[p])
