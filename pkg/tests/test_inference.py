import pytest
from hypothesis import given, settings, strategies as st

from dialogic.errors import (
    AmbiguousMatch,
    NoMatch,
    NotEntailment,
    ProofError,
    ShapeMismatch,
    UnknownRule,
)
from dialogic.hom import hom_search
from dialogic.inference import (
    Certificate,
    Fraction,
    FractionCell,
    GluingShape,
    Rule,
    apply_rule,
    check_fraction,
    check_fraction_cell,
    classes_equal,
    compose_fractions,
    find_instances,
    identity_fraction,
    lax_cotuple,
    morphism_fraction,
    run_proof,
    shape_colimit,
)
from dialogic.logics import builtin
from dialogic.logics.mp import mp_spec, provable_formulas
from dialogic.propagator import free, is_entailment, localizer
from dialogic.realization import (
    Realization,
    compose_realization_morphisms,
    identity_morphism,
    is_iso,
)
from dialogic.sketch import SketchBuilder

from mp_oracle import close_provables


def arrow_sketch():
    b = SketchBuilder()
    b.arrow("f", "X", "Y")
    return b.build()


def arrow_spec(xs, ys, f):
    return Realization(arrow_sketch(), {"X": tuple(xs), "Y": tuple(ys)}, {"f": dict(f)})


P = localizer(arrow_sketch(), ["f"])


def unit_fraction(src_spec, tgt_spec, pick=0):
    """A fraction src -> tgt whose denominator is the free-theory unit of the
    target, so it is an entailment by construction; the numerator is one of
    the morphisms into that underlying theory, chosen by index."""
    w = free(P, tgt_spec)
    assert is_entailment(P, w.unit)
    homs = hom_search(src_spec, w.unit.target)
    num = homs[pick % len(homs)]
    return Fraction(
        src_spec, tgt_spec, num, w.unit, Certificate("verified", "unit denominator")
    )


@pytest.fixture(scope="module")
def mp():
    return builtin("mp")


def chain_spec(logic):
    return mp_spec(logic, {"p": None, "q": None, "p=>q": ("p", "q")}, ["p", "p=>q"])


def doubled_spec(logic):
    # two implications out of the same provable premise
    return mp_spec(
        logic,
        {"p": None, "q": None, "r": None, "p=>q": ("p", "q"), "p=>r": ("p", "r")},
        ["p", "p=>q", "p=>r"],
    )


class TestFractionBasics:
    def test_morphism_fraction(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        m = hom_search(s0, s1)[0]
        f = morphism_fraction(m)
        check_fraction(f)
        assert f.apex is s1
        assert f.cert.status == "verified"
        assert f.denominator.components == identity_morphism(s1).components

    def test_identity_fraction(self):
        s = arrow_spec(["a"], ["c"], {"a": "c"})
        f = identity_fraction(s)
        check_fraction(f)
        assert f.source is s and f.target is s

    def test_check_rejects_split_apex(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["b"], ["d"], {"b": "d"})
        bad = Fraction(
            s0,
            s1,
            identity_morphism(s0),
            identity_morphism(s1),
            Certificate("verified"),
        )
        with pytest.raises(ShapeMismatch):
            check_fraction(bad)

    def test_certificate_status_validated(self):
        with pytest.raises(ValueError):
            Certificate("plausible")


class TestCompose:
    def test_identity_denominators_compose_plainly(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        s2 = arrow_spec(["a", "b"], ["c", "d"], {"a": "c", "b": "d"})
        m1 = hom_search(s0, s1)[0]
        m2 = hom_search(s1, s2)[0]
        g = compose_fractions(morphism_fraction(m1), morphism_fraction(m2))
        plain = compose_realization_morphisms(m1, m2)
        assert g.numerator.components == plain.components
        assert g.denominator.components == identity_morphism(s2).components

    def test_identity_numerator_composes_denominators(self):
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        w = free(P, s1)
        under = w.unit.target
        s0 = arrow_spec(["z"], ["w"], {"z": "w"})
        num = hom_search(s0, under)[0]
        f1 = morphism_fraction(num)
        # inverse fraction of the unit: points back from the theory to s1
        f2 = Fraction(
            under,
            s1,
            identity_morphism(under),
            w.unit,
            Certificate("verified", "unit denominator"),
        )
        g = compose_fractions(f1, f2)
        assert g.source is s0 and g.target is s1
        assert g.numerator.components == num.components
        assert g.denominator.components == w.unit.components

    def test_pushout_path_keeps_entailment(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        s2 = arrow_spec(["a"], ["c", "d"], {"a": "c"})
        g = compose_fractions(unit_fraction(s0, s1), unit_fraction(s1, s2))
        check_fraction(g)
        assert g.cert.status == "inherited"
        assert is_entailment(P, g.denominator)

    def test_non_consecutive_raises(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        f = unit_fraction(s0, s1)
        with pytest.raises(ShapeMismatch):
            compose_fractions(f, f)


class TestClassesEqual:
    def test_reflexive(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        f = unit_fraction(s0, s1)
        assert classes_equal(f, f, P)

    def test_entailment_extension_equal(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        f = unit_fraction(s0, s1)
        w = free(P, f.apex)
        assert is_entailment(P, w.unit)
        ext = Fraction(
            f.source,
            f.target,
            compose_realization_morphisms(f.numerator, w.unit),
            compose_realization_morphisms(f.denominator, w.unit),
            Certificate("verified", "extended along a unit"),
        )
        check_fraction(ext)
        assert classes_equal(f, ext, P)

    def test_distinct_picks_differ(self):
        s0 = arrow_spec(["x0"], ["y0"], {"x0": "y0"})
        s1 = arrow_spec(["a", "b"], ["c", "d"], {"a": "c", "b": "d"})
        m1 = hom_search(s0, s1, pins={"x0": "a"})[0]
        m2 = hom_search(s0, s1, pins={"x0": "b"})[0]
        assert not classes_equal(morphism_fraction(m1), morphism_fraction(m2), P)

    def test_uninverted_denominator_raises(self):
        # folding two Y elements with distinct X fibers is not recoverable
        tgt = arrow_spec(["a", "b"], ["c", "d"], {"a": "c", "b": "d"})
        apex = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        tau = hom_search(tgt, apex)[0]
        f = Fraction(apex, tgt, identity_morphism(apex), tau, Certificate("unknown"))
        with pytest.raises(NotEntailment):
            classes_equal(f, f, P)

    def test_parallel_shape_required(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        f = unit_fraction(s0, s1)
        g = identity_fraction(s0)
        with pytest.raises(ShapeMismatch):
            classes_equal(f, g, P)


class TestFractionCells:
    def test_unit_extension_cell(self):
        s0 = arrow_spec(["a"], ["c"], {"a": "c"})
        s1 = arrow_spec(["a", "b"], ["c"], {"a": "c", "b": "c"})
        f = unit_fraction(s0, s1)
        w = free(P, f.apex)
        ext = Fraction(
            f.source,
            f.target,
            compose_realization_morphisms(f.numerator, w.unit),
            compose_realization_morphisms(f.denominator, w.unit),
            Certificate("verified"),
        )
        check_fraction_cell(FractionCell(f, ext, w.unit))

    def test_cell_must_commute(self):
        s0 = arrow_spec(["x0"], ["y0"], {"x0": "y0"})
        s1 = arrow_spec(["a", "b"], ["c", "d"], {"a": "c", "b": "d"})
        m1 = hom_search(s0, s1, pins={"x0": "a"})[0]
        m2 = hom_search(s0, s1, pins={"x0": "b"})[0]
        cell = identity_morphism(s1)
        with pytest.raises(ShapeMismatch):
            check_fraction_cell(
                FractionCell(morphism_fraction(m1), morphism_fraction(m2), cell)
            )


class TestMpRule:
    def test_hypothesis_shape(self, mp):
        hp = mp.rules["mp"].hypothesis
        sizes = {p: len(xs) for p, xs in hp.carriers.items()}
        assert sizes == {"Fm": 3, "Dm": 1, "Pm": 2, "MPH": 1, "MPH2": 0}
        assert set(mp.rules["mp"].bindings) == {"A", "B", "AB"}

    def test_conclusion_shape(self, mp):
        cp = mp.rules["mp"].conclusion
        sizes = {p: len(xs) for p, xs in cp.carriers.items()}
        assert sizes == {"Fm": 1, "Dm": 0, "Pm": 1, "MPH": 0, "MPH2": 0}

    def test_rule_cert_verified(self, mp):
        assert mp.rules["mp"].fraction.cert.status == "verified"

    def test_find_instances_chain(self, mp):
        insts = find_instances(mp.rules["mp"].hypothesis, chain_spec(mp))
        assert len(insts) == 1
        assert insts[0].cert.status == "verified"

    def test_find_instances_empty_hypothesis(self, mp):
        empty = mp_spec(mp, {}, [])
        assert len(find_instances(empty, chain_spec(mp))) == 1

    def test_find_instances_unprovable_premise(self, mp):
        sigma = mp_spec(mp, {"p": None, "q": None, "p=>q": ("p", "q")}, ["p=>q"])
        assert find_instances(mp.rules["mp"].hypothesis, sigma) == []

    def test_find_instances_doubled_and_pins(self, mp):
        rule = mp.rules["mp"]
        sigma = doubled_spec(mp)
        assert len(find_instances(rule.hypothesis, sigma)) == 2
        pinned = find_instances(
            rule.hypothesis, sigma, pins={rule.bindings["B"]: "r"}
        )
        assert len(pinned) == 1


class TestApplyRule:
    def test_single_step_matches_oracle(self, mp):
        rule = mp.rules["mp"]
        sigma = chain_spec(mp)
        kappa = find_instances(rule.hypothesis, sigma)[0]
        gamma, tau = apply_rule(rule, kappa)
        expected = close_provables({"p=>q": ("p", "q")}, {"p", "p=>q"})
        assert provable_formulas(gamma.apex) == expected
        assert set(gamma.apex.carriers["Fm"]) == {"p", "q", "p=>q"}
        assert tau is gamma.denominator
        assert is_entailment(mp.propagator, tau)
        # the conclusion witness lands on the newly provable formula
        concl = gamma.source.carriers["Pm"][0]
        witness = gamma.numerator.components["Pm"][concl]
        assert gamma.apex.actions["j"][witness] == "q"

    def test_identity_rule_is_inert(self, mp):
        rule = mp.rules["mp"]
        sigma = chain_spec(mp)
        kappa = find_instances(rule.hypothesis, sigma)[0]
        noop = Rule("noop", identity_fraction(rule.hypothesis))
        gamma, tau = apply_rule(noop, kappa)
        assert gamma.numerator.components == kappa.numerator.components
        assert gamma.denominator.components == kappa.denominator.components
        assert tau.components == identity_morphism(sigma).components

    def test_instance_must_start_at_hypothesis(self, mp):
        sigma = chain_spec(mp)
        with pytest.raises(ShapeMismatch):
            apply_rule(mp.rules["mp"], identity_fraction(sigma))

    def test_unverified_instance_blocked(self, mp):
        rule = mp.rules["mp"]
        kappa = find_instances(rule.hypothesis, chain_spec(mp))[0]
        shady = Fraction(
            kappa.source,
            kappa.target,
            kappa.numerator,
            kappa.denominator,
            Certificate("unknown"),
        )
        with pytest.raises(ProofError):
            apply_rule(rule, shady)

    def test_mp_step_classes(self, mp):
        # same conclusion up to entailment extension, different conclusions apart
        rule = mp.rules["mp"]
        sigma = doubled_spec(mp)
        iq = find_instances(rule.hypothesis, sigma, pins={rule.bindings["B"]: "q"})[0]
        ir = find_instances(rule.hypothesis, sigma, pins={rule.bindings["B"]: "r"})[0]
        gq, _ = apply_rule(rule, iq)
        gr, _ = apply_rule(rule, ir)
        assert not classes_equal(gq, gr, mp.propagator)
        w = free(mp.propagator, gq.apex)
        ext = Fraction(
            gq.source,
            gq.target,
            compose_realization_morphisms(gq.numerator, w.unit),
            compose_realization_morphisms(gq.denominator, w.unit),
            Certificate("verified"),
        )
        assert classes_equal(gq, ext, mp.propagator)


class TestLaxCotuple:
    def span_parts(self, mp, sigma, picks):
        """The premise span: a bare formula shared by a provable formula and
        a provable implication, mapped into sigma by the given element picks."""
        h1 = mp_spec(mp, {"A": None}, ["A"])
        h2 = mp_spec(mp, {"A": None, "B": None, "AB": ("A", "B")}, ["AB"])
        h0 = mp_spec(mp, {"A": None}, [])
        shape = GluingShape(
            nodes={"base": h0, "left": h1, "right": h2},
            edges={
                "to_left": ("base", "left", hom_search(h0, h1, pins={"A": "A"})[0]),
                "to_right": ("base", "right", hom_search(h0, h2, pins={"A": "A"})[0]),
            },
        )
        parts = {
            "base": morphism_fraction(hom_search(h0, sigma, pins={"A": picks["base"]})[0]),
            "left": morphism_fraction(hom_search(h1, sigma, pins={"A": picks["left"]})[0]),
            "right": morphism_fraction(
                hom_search(h2, sigma, pins={"AB": picks["right"]})[0]
            ),
        }
        return shape, parts

    def test_computed_colimit_is_rule_hypothesis(self, mp):
        shape, _ = self.span_parts(
            mp, chain_spec(mp), {"base": "p", "left": "p", "right": "p=>q"}
        )
        colim, injections = shape_colimit(shape)
        hp = mp.rules["mp"].hypothesis
        sizes = {p: len(xs) for p, xs in colim.carriers.items()}
        assert sizes == {p: len(xs) for p, xs in hp.carriers.items()}
        assert len([m for m in hom_search(colim, hp) if is_iso(m)]) == 1
        assert set(injections) == {"base", "left", "right"}

    def test_assembles_usable_instance(self, mp):
        rule = mp.rules["mp"]
        hp = rule.hypothesis
        sigma = chain_spec(mp)
        shape, parts = self.span_parts(
            mp, sigma, {"base": "p", "left": "p", "right": "p=>q"}
        )
        bind = rule.bindings
        pins = {
            "base": {"A": bind["A"]},
            "left": {"A": bind["A"]},
            "right": {"A": bind["A"], "B": bind["B"], "AB": bind["AB"]},
        }
        declared = GluingShape(
            nodes=shape.nodes,
            edges=shape.edges,
            colimit=hp,
            injections={
                n: hom_search(shape.nodes[n], hp, pins=pins[n])[0] for n in pins
            },
        )
        inst, cells = lax_cotuple(parts, declared)
        assert inst.source is hp
        assert set(cells) == {"base", "left", "right"}
        gamma, _ = apply_rule(rule, inst)
        assert provable_formulas(gamma.apex) == {"p", "q", "p=>q"}

    def test_single_part_passthrough(self, mp):
        sigma = chain_spec(mp)
        h1 = mp_spec(mp, {"A": None}, ["A"])
        part = morphism_fraction(hom_search(h1, sigma, pins={"A": "p"})[0])
        shape = GluingShape(nodes={"only": h1}, edges={})
        result, cells = lax_cotuple({"only": part}, shape)
        assert result is part
        assert set(cells) == {"only"}

    def test_disagreeing_parts_need_a_cell(self, mp):
        sigma = mp_spec(mp, {"p": None, "q": None}, ["p", "q"])
        h1 = mp_spec(mp, {"A": None}, ["A"])
        h0 = mp_spec(mp, {"A": None}, [])
        shape = GluingShape(
            nodes={"base": h0, "left": h1},
            edges={"to_left": ("base", "left", hom_search(h0, h1, pins={"A": "A"})[0])},
        )
        parts = {
            "base": morphism_fraction(hom_search(h0, sigma, pins={"A": "p"})[0]),
            "left": morphism_fraction(hom_search(h1, sigma, pins={"A": "q"})[0]),
        }
        with pytest.raises(ShapeMismatch):
            lax_cotuple(parts, shape)

    def test_declared_injections_must_commute(self, mp):
        rule = mp.rules["mp"]
        hp = rule.hypothesis
        sigma = chain_spec(mp)
        shape, parts = self.span_parts(
            mp, sigma, {"base": "p", "left": "p", "right": "p=>q"}
        )
        bind = rule.bindings
        # base lands on A but left lands on the implication formula
        broken = GluingShape(
            nodes=shape.nodes,
            edges=shape.edges,
            colimit=hp,
            injections={
                "base": hom_search(shape.nodes["base"], hp, pins={"A": bind["A"]})[0],
                "left": hom_search(shape.nodes["left"], hp, pins={"A": bind["AB"]})[0],
                "right": hom_search(
                    shape.nodes["right"],
                    hp,
                    pins={"A": bind["A"], "B": bind["B"], "AB": bind["AB"]},
                )[0],
            },
        )
        with pytest.raises(ShapeMismatch):
            lax_cotuple(parts, broken)


class TestProofs:
    def test_two_step_proof_matches_oracle(self, mp):
        implications = {"p=>q": ("p", "q"), "q=>r": ("q", "r")}
        start = mp_spec(
            mp,
            {"p": None, "q": None, "r": None, **{k: v for k, v in implications.items()}},
            ["p", "p=>q", "q=>r"],
        )
        script = [("mp", {"A": "p", "B": "q"}), ("mp", {"A": "q", "B": "r"})]
        proof = run_proof(script, start, mp.rules)
        expected = close_provables(implications, {"p", "p=>q", "q=>r"})
        assert expected == {"p", "q", "r", "p=>q", "q=>r"}
        assert provable_formulas(proof.final) == expected
        assert len(proof.steps) == 2
        assert is_entailment(mp.propagator, proof.entailment)
        assert proof.fraction.denominator is proof.entailment
        assert proof.fraction.target is start
        # the closed theory agrees with the proof on provables
        w = free(mp.propagator, start)
        assert provable_formulas(w.unit.target) == expected

    def test_empty_script(self, mp):
        start = chain_spec(mp)
        proof = run_proof([], start, mp.rules)
        assert proof.steps == ()
        assert proof.final is start
        assert proof.fraction.numerator.components == identity_morphism(start).components

    def test_unknown_rule(self, mp):
        with pytest.raises(UnknownRule):
            run_proof([("cut", {})], chain_spec(mp), mp.rules)

    def test_unknown_directive_key(self, mp):
        with pytest.raises(ProofError):
            run_proof([("mp", {"C": "p"})], chain_spec(mp), mp.rules)

    def test_no_match(self, mp):
        with pytest.raises(NoMatch):
            run_proof([("mp", {"A": "q"})], chain_spec(mp), mp.rules)

    def test_ambiguous_match_lists_candidates(self, mp):
        with pytest.raises(AmbiguousMatch) as exc:
            run_proof([("mp", {"A": "p"})], doubled_spec(mp), mp.rules)
        assert "2 instances" in str(exc.value)

    def test_directives_disambiguate(self, mp):
        proof = run_proof([("mp", {"A": "p", "B": "r"})], doubled_spec(mp), mp.rules)
        assert provable_formulas(proof.final) == {"p", "r", "p=>q", "p=>r"}


@st.composite
def spec_of(draw, tag):
    nx = draw(st.integers(1, 2))
    ny = draw(st.integers(1, 2))
    xs = [f"{tag}x{i}" for i in range(nx)]
    ys = [f"{tag}y{i}" for i in range(ny)]
    f = {x: ys[draw(st.integers(0, ny - 1))] for x in xs}
    return arrow_spec(xs, ys, f)


@st.composite
def fraction_chain(draw):
    specs = [draw(spec_of(tag)) for tag in ("a", "b", "c", "d")]
    picks = [draw(st.integers(0, 3)) for _ in range(3)]
    return [
        unit_fraction(specs[i], specs[i + 1], picks[i]) for i in range(3)
    ]


class TestClassLaws:
    @settings(max_examples=15, deadline=None, derandomize=True)
    @given(fraction_chain())
    def test_composition_associative_on_classes(self, chain):
        f1, f2, f3 = chain
        left = compose_fractions(compose_fractions(f1, f2), f3)
        right = compose_fractions(f1, compose_fractions(f2, f3))
        assert is_entailment(P, left.denominator)
        assert is_entailment(P, right.denominator)
        assert classes_equal(left, right, P)

    @settings(max_examples=10, deadline=None, derandomize=True)
    @given(fraction_chain())
    def test_identity_units_on_classes(self, chain):
        f1 = chain[0]
        left = compose_fractions(identity_fraction(f1.source), f1)
        right = compose_fractions(f1, identity_fraction(f1.target))
        assert classes_equal(left, f1, P)
        assert classes_equal(right, f1, P)
