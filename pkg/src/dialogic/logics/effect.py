"""Equational reasoning decorated with effects.

Specifications carry two kinds of arrows: plain ones and pure ones.  A pure
arrow is a separate carrier element whose underlying plain arrow is picked
out by inj; pureness is extra structure on top of the graph, not a flag.
Alongside equations between parallel arrows there is a second, one-sided
relation: a semi-congruence declaration says the left arrow can replace the
right one wherever only results matter.  Reading arrows as state-passing
programs, two semi-congruent arrows compute the same value but may write
the state differently, which is why the relation is reflexive and
transitive but deliberately not symmetric and not required antisymmetric.

The relation interacts with composition asymmetrically.  Feeding a common
arrow into both sides of a semi-congruence is always sound (substitution),
but wrapping both sides in a common context is only sound when the context
is pure (pure replacement): an impure context can observe the differing
state writes.  Products follow the same discipline.  Tuples require pure
legs and a pure mediator.  A semi-product pairs an arbitrary first
component with a pure second component; its first projection law is an
equation, its second only a semi-congruence.

The theory sketch materializes the closure of all of this.  A kernel cone
on the semi-congruence carrier merges any two declarations with the same
endpoints, which keeps the transitive closure finite and makes a declared
witness land on the computed one.  Witness arrows supply reflexivity,
transitivity, substitution and pure-replacement closure, a pure witness
for every identity and for every projection.  Localized arrows fill the
same gaps as in the plain equational logic: identities, composites, and
tuples over pure spans.  Semi-products are deliberately not localized:
they are chosen structure carried by a specification, never invented,
because inventing one for every compatible component pair floods the
vertex hom-sets with mediators that nothing collapses.  No canonical
localized arrow set is prescribed for this logic anywhere; the three
chosen here are this engine's own reconstruction and should be read as a
design decision.

Pure arrows are not deduplicated: inj is a plain arrow, so two pure
declarations over the same underlying arrow stay distinct elements.  The
stronger encoding (a pullback cone making inj mono) is deliberately off.
"""

from __future__ import annotations

from ..chase import DEFAULT_BUDGET
from ..errors import InvalidRealization
from ..inference import Rule, rule_from_parts
from ..propagator import Propagator, free
from ..realization import Realization, check_realization
from ..sketch import Sketch, SketchBuilder, SketchMorphism, validate_sketch_morphism
from .base import Logic

LOCALIZED = {
    "t_cmp": "t_cmp_inv",
    "ip": "ip_inv",
    "t_tup": "t_tup_inv",
}


def _data(b: SketchBuilder) -> None:
    """Declaration layer shared by the data and theory sketches."""
    b.arrow("src", "Ar", "Pt")
    b.arrow("tgt", "Ar", "Pt")
    # a pure arrow names its underlying plain arrow
    b.arrow("inj", "PAr", "Ar")
    # equations carry two parallel arrows
    b.arrow("e1", "Eq", "Ar")
    b.arrow("e2", "Eq", "Ar")
    b.equate_paths("qs", ["e1", "src"], ["e2", "src"])
    b.equate_paths("qt", ["e1", "tgt"], ["e2", "tgt"])
    # a semi-congruence declaration also carries two parallel arrows
    b.arrow("l1", "Leq", "Ar")
    b.arrow("l2", "Leq", "Ar")
    b.equate_paths("lqs", ["l1", "src"], ["l2", "src"])
    b.equate_paths("lqt", ["l1", "tgt"], ["l2", "tgt"])
    # an identity declaration picks a loop at a point
    b.arrow("ip", "IdDecl", "Pt")
    b.arrow("ia", "IdDecl", "Ar")
    b.equate_paths("ip", ["ia", "src"], ["ip"])
    b.equate_paths("ip", ["ia", "tgt"], ["ip"])
    # a composite declaration names the result of two consecutive arrows
    b.arrow("c1", "Cmp", "Ar")
    b.arrow("c2", "Cmp", "Ar")
    b.arrow("cc", "Cmp", "Ar")
    b.equate_paths("cmid", ["c1", "tgt"], ["c2", "src"])
    b.equate_paths("csrc", ["c1", "src"], ["cc", "src"])
    b.equate_paths("ctgt", ["c2", "tgt"], ["cc", "tgt"])
    # a product declaration: vertex, two factors, two projections
    b.arrow("pv", "Prd", "Pt")
    b.arrow("fa", "Prd", "Pt")
    b.arrow("fb", "Prd", "Pt")
    b.arrow("pp1", "Prd", "Ar")
    b.arrow("pp2", "Prd", "Ar")
    b.equate_paths("pv", ["pp1", "src"], ["pv"])
    b.equate_paths("pv", ["pp2", "src"], ["pv"])
    b.equate_paths("fa", ["pp1", "tgt"], ["fa"])
    b.equate_paths("fb", ["pp2", "tgt"], ["fb"])
    # a tuple declaration: pure legs and a pure mediating arrow
    b.arrow("tprd", "Tup", "Prd")
    b.arrow("tu", "Tup", "PAr")
    b.arrow("tv", "Tup", "PAr")
    b.arrow("tt", "Tup", "PAr")
    b.path_arrow("tua", ["tu", "inj"])
    b.path_arrow("tva", ["tv", "inj"])
    b.path_arrow("tta", ["tt", "inj"])
    b.equate_paths("tz", ["tua", "src"], ["tva", "src"])
    b.equate_paths("tz", ["tta", "src"], ["tz"])
    b.equate_paths("tea", ["tua", "tgt"], ["tprd", "fa"])
    b.equate_paths("teb", ["tva", "tgt"], ["tprd", "fb"])
    b.equate_paths("tev", ["tta", "tgt"], ["tprd", "pv"])
    # a semi-product: componentwise maps, the second one pure, and the
    # mediating arrow between the vertices
    b.arrow("ssrc", "SemiProd", "Prd")
    b.arrow("stgt", "SemiProd", "Prd")
    b.arrow("st1", "SemiProd", "Ar")
    b.arrow("st2", "SemiProd", "PAr")
    b.arrow("sw", "SemiProd", "Ar")
    b.path_arrow("st2a", ["st2", "inj"])
    b.equate_paths("se1s", ["st1", "src"], ["ssrc", "fa"])
    b.equate_paths("se1t", ["st1", "tgt"], ["stgt", "fa"])
    b.equate_paths("se2s", ["st2a", "src"], ["ssrc", "fb"])
    b.equate_paths("se2t", ["st2a", "tgt"], ["stgt", "fb"])
    b.equate_paths("sews", ["sw", "src"], ["ssrc", "pv"])
    b.equate_paths("sewt", ["sw", "tgt"], ["stgt", "pv"])


def data_sketch() -> Sketch:
    b = SketchBuilder()
    _data(b)
    return b.build()


def theory_sketch() -> Sketch:
    b = SketchBuilder()
    _data(b)
    b.identity("Ar")
    b.identity("Leq")

    # equations collapse: both projections of a witness are the same arrow,
    # and every arrow carries its reflexivity witness
    b.composite("e1", "id_Ar", "e2")
    b.cone(
        "eq_diag",
        "Eq",
        nodes={"l": "Ar", "r": "Ar"},
        edges={"d": ("l", "r", "id_Ar")},
        projections={"l": "e1", "r": "e2"},
    )

    # semi-congruence witnesses with the same endpoints merge: the identity
    # projections force a fresh vertex onto both members of the pair.  This
    # keeps the transitive closure finite and lands declared witnesses on
    # computed ones, without forcing symmetry or totality.
    b.cone(
        "leq_ker",
        "Leq",
        nodes={"x": "Leq", "y": "Leq", "a": "Ar", "b": "Ar"},
        edges={
            "xa": ("x", "a", "l1"), "ya": ("y", "a", "l1"),
            "xb": ("x", "b", "l2"), "yb": ("y", "b", "l2"),
        },
        projections={"x": "id_Leq", "y": "id_Leq", "a": "l1", "b": "l2"},
    )

    # the relation is reflexive
    b.arrow("t_lrefl", "Ar", "Leq")
    b.composite("t_lrefl", "l1", "id_Ar")
    b.composite("t_lrefl", "l2", "id_Ar")

    # and transitive: a matching middle arrow yields the outer witness
    b.arrow("lt_u", "LTSit", "Leq")
    b.arrow("lt_v", "LTSit", "Leq")
    b.equate_paths("lt_m", ["lt_u", "l2"], ["lt_v", "l1"])
    b.cone(
        "lt_sit",
        "LTSit",
        nodes={"u": "Leq", "v": "Leq", "m": "Ar"},
        edges={"um": ("u", "m", "l2"), "vm": ("v", "m", "l1")},
        projections={"u": "lt_u", "v": "lt_v", "m": "lt_m"},
    )
    b.arrow("t_ltrans", "LTSit", "Leq")
    b.equate_paths("lt_a", ["t_ltrans", "l1"], ["lt_u", "l1"])
    b.equate_paths("lt_b", ["t_ltrans", "l2"], ["lt_v", "l2"])

    # feeding a common arrow into both sides preserves the relation
    b.arrow("ls_w", "LSSit", "Leq")
    b.arrow("ls_x", "LSSit", "Cmp")
    b.arrow("ls_y", "LSSit", "Cmp")
    b.equate_paths("ls_f", ["ls_x", "c1"], ["ls_y", "c1"])
    b.equate_paths("ls_a", ["ls_x", "c2"], ["ls_w", "l1"])
    b.equate_paths("ls_b", ["ls_y", "c2"], ["ls_w", "l2"])
    b.cone(
        "ls_sit",
        "LSSit",
        nodes={"w": "Leq", "x": "Cmp", "y": "Cmp", "f": "Ar", "a": "Ar", "b": "Ar"},
        edges={
            "xf": ("x", "f", "c1"), "yf": ("y", "f", "c1"),
            "xa": ("x", "a", "c2"), "wa": ("w", "a", "l1"),
            "yb": ("y", "b", "c2"), "wb": ("w", "b", "l2"),
        },
        projections={
            "w": "ls_w", "x": "ls_x", "y": "ls_y",
            "f": "ls_f", "a": "ls_a", "b": "ls_b",
        },
    )
    b.arrow("t_lsub", "LSSit", "Leq")
    b.equate_paths("ls_m1", ["t_lsub", "l1"], ["ls_x", "cc"])
    b.equate_paths("ls_m2", ["t_lsub", "l2"], ["ls_y", "cc"])

    # wrapping both sides in a pure context preserves it too
    b.arrow("lp_w", "LPSit", "Leq")
    b.arrow("lp_p", "LPSit", "PAr")
    b.arrow("lp_x", "LPSit", "Cmp")
    b.arrow("lp_y", "LPSit", "Cmp")
    b.equate_paths("lp_v", ["lp_x", "c2"], ["lp_p", "inj"])
    b.equate_paths("lp_v", ["lp_y", "c2"], ["lp_v"])
    b.equate_paths("lp_a", ["lp_x", "c1"], ["lp_w", "l1"])
    b.equate_paths("lp_b", ["lp_y", "c1"], ["lp_w", "l2"])
    b.cone(
        "lp_sit",
        "LPSit",
        nodes={
            "w": "Leq", "p": "PAr", "x": "Cmp", "y": "Cmp",
            "v": "Ar", "a": "Ar", "b": "Ar",
        },
        edges={
            "xv": ("x", "v", "c2"), "pv": ("p", "v", "inj"),
            "yv": ("y", "v", "c2"),
            "xa": ("x", "a", "c1"), "wa": ("w", "a", "l1"),
            "yb": ("y", "b", "c1"), "wb": ("w", "b", "l2"),
        },
        projections={
            "w": "lp_w", "p": "lp_p", "x": "lp_x", "y": "lp_y",
            "v": "lp_v", "a": "lp_a", "b": "lp_b",
        },
    )
    b.arrow("t_lpur", "LPSit", "Leq")
    b.equate_paths("lp_m1", ["t_lpur", "l1"], ["lp_x", "cc"])
    b.equate_paths("lp_m2", ["t_lpur", "l2"], ["lp_y", "cc"])

    # declared identities are pure
    b.arrow("t_pid", "IdDecl", "PAr")
    b.composite("t_pid", "inj", "ia")

    # every composable pair is a situation, and every situation has its
    # composite: t_cmp is inverted below
    b.arrow("r1", "CmpReq", "Ar")
    b.arrow("r2", "CmpReq", "Ar")
    b.equate_paths("rm", ["r1", "tgt"], ["r2", "src"])
    b.cone(
        "cmp_req",
        "CmpReq",
        nodes={"f": "Ar", "g": "Ar", "m": "Pt"},
        edges={"ef": ("f", "m", "tgt"), "eg": ("g", "m", "src")},
        projections={"f": "r1", "g": "r2", "m": "rm"},
    )
    b.arrow("t_cmp", "Cmp", "CmpReq")
    b.equate_paths("c1", ["t_cmp", "r1"], ["c1"])
    b.equate_paths("c2", ["t_cmp", "r2"], ["c2"])
    b.equate_paths("cmid", ["t_cmp", "rm"], ["cmid"])

    # identity as first factor changes nothing
    b.arrow("ul_c", "ULSit", "Cmp")
    b.arrow("ul_i", "ULSit", "IdDecl")
    b.equate_paths("ul_a", ["ul_c", "c1"], ["ul_i", "ia"])
    b.cone(
        "ul_sit",
        "ULSit",
        nodes={"c": "Cmp", "i": "IdDecl", "a": "Ar"},
        edges={"ec": ("c", "a", "c1"), "ei": ("i", "a", "ia")},
        projections={"c": "ul_c", "i": "ul_i", "a": "ul_a"},
    )
    b.equate_paths("ul_law", ["ul_c", "cc"], ["ul_c", "c2"])

    # identity as second factor changes nothing
    b.arrow("ur_c", "URSit", "Cmp")
    b.arrow("ur_i", "URSit", "IdDecl")
    b.equate_paths("ur_a", ["ur_c", "c2"], ["ur_i", "ia"])
    b.cone(
        "ur_sit",
        "URSit",
        nodes={"c": "Cmp", "i": "IdDecl", "a": "Ar"},
        edges={"ec": ("c", "a", "c2"), "ei": ("i", "a", "ia")},
        projections={"c": "ur_c", "i": "ur_i", "a": "ur_a"},
    )
    b.equate_paths("ur_law", ["ur_c", "cc"], ["ur_c", "c1"])

    # the two ways around three consecutive arrows agree
    b.arrow("as_x", "ASSit", "Cmp")
    b.arrow("as_y", "ASSit", "Cmp")
    b.arrow("as_z", "ASSit", "Cmp")
    b.arrow("as_w", "ASSit", "Cmp")
    b.equate_paths("as_f", ["as_x", "c1"], ["as_w", "c1"])
    b.equate_paths("as_g", ["as_x", "c2"], ["as_z", "c1"])
    b.equate_paths("as_h", ["as_y", "c2"], ["as_z", "c2"])
    b.equate_paths("as_p", ["as_x", "cc"], ["as_y", "c1"])
    b.equate_paths("as_r", ["as_z", "cc"], ["as_w", "c2"])
    b.cone(
        "as_sit",
        "ASSit",
        nodes={
            "x": "Cmp", "y": "Cmp", "z": "Cmp", "w": "Cmp",
            "f": "Ar", "g": "Ar", "h": "Ar", "p": "Ar", "r": "Ar",
        },
        edges={
            "xf": ("x", "f", "c1"), "xg": ("x", "g", "c2"), "xp": ("x", "p", "cc"),
            "yp": ("y", "p", "c1"), "yh": ("y", "h", "c2"),
            "zg": ("z", "g", "c1"), "zh": ("z", "h", "c2"), "zr": ("z", "r", "cc"),
            "wf": ("w", "f", "c1"), "wr": ("w", "r", "c2"),
        },
        projections={
            "x": "as_x", "y": "as_y", "z": "as_z", "w": "as_w",
            "f": "as_f", "g": "as_g", "h": "as_h", "p": "as_p", "r": "as_r",
        },
    )
    b.equate_paths("as_law", ["as_y", "cc"], ["as_w", "cc"])

    # projections are pure
    b.arrow("t_pp1", "Prd", "PAr")
    b.composite("t_pp1", "inj", "pp1")
    b.arrow("t_pp2", "Prd", "PAr")
    b.composite("t_pp2", "inj", "pp2")

    # every pure span over a product is a situation with its tuple: t_tup
    # inverted.  Spans with an impure leg get nothing.
    b.arrow("w1", "TupReq", "PAr")
    b.arrow("w2", "TupReq", "PAr")
    b.arrow("wp", "TupReq", "Prd")
    b.path_arrow("w1a", ["w1", "inj"])
    b.path_arrow("w2a", ["w2", "inj"])
    b.equate_paths("wz", ["w1a", "src"], ["w2a", "src"])
    b.equate_paths("wfa", ["w1a", "tgt"], ["wp", "fa"])
    b.equate_paths("wfb", ["w2a", "tgt"], ["wp", "fb"])
    b.cone(
        "tup_req",
        "TupReq",
        nodes={
            "p": "Prd", "u": "PAr", "v": "PAr", "ua": "Ar", "va": "Ar",
            "z": "Pt", "a": "Pt", "b": "Pt",
        },
        edges={
            "ui": ("u", "ua", "inj"), "vi": ("v", "va", "inj"),
            "uz": ("ua", "z", "src"), "vz": ("va", "z", "src"),
            "ut": ("ua", "a", "tgt"), "pa": ("p", "a", "fa"),
            "vt": ("va", "b", "tgt"), "pb": ("p", "b", "fb"),
        },
        projections={
            "p": "wp", "u": "w1", "v": "w2", "ua": "w1a", "va": "w2a",
            "z": "wz", "a": "wfa", "b": "wfb",
        },
    )
    b.arrow("t_tup", "Tup", "TupReq")
    b.equate_paths("tprd", ["t_tup", "wp"], ["tprd"])
    b.equate_paths("tu", ["t_tup", "w1"], ["tu"])
    b.equate_paths("tv", ["t_tup", "w2"], ["tv"])

    # composing a tuple with a projection gives back the matching leg
    b.path_arrow("tpp1", ["tprd", "pp1"])
    b.path_arrow("tpp2", ["tprd", "pp2"])
    b.arrow("pe1_t", "PE1Sit", "Tup")
    b.arrow("pe1_c", "PE1Sit", "Cmp")
    b.equate_paths("pe1_w", ["pe1_t", "tta"], ["pe1_c", "c1"])
    b.equate_paths("pe1_j", ["pe1_t", "tpp1"], ["pe1_c", "c2"])
    b.cone(
        "pe1_sit",
        "PE1Sit",
        nodes={"t": "Tup", "c": "Cmp", "w": "Ar", "j": "Ar"},
        edges={
            "tw": ("t", "w", "tta"), "cw": ("c", "w", "c1"),
            "tj": ("t", "j", "tpp1"), "cj": ("c", "j", "c2"),
        },
        projections={"t": "pe1_t", "c": "pe1_c", "w": "pe1_w", "j": "pe1_j"},
    )
    b.equate_paths("pe1_law", ["pe1_c", "cc"], ["pe1_t", "tua"])
    b.arrow("pe2_t", "PE2Sit", "Tup")
    b.arrow("pe2_c", "PE2Sit", "Cmp")
    b.equate_paths("pe2_w", ["pe2_t", "tta"], ["pe2_c", "c1"])
    b.equate_paths("pe2_j", ["pe2_t", "tpp2"], ["pe2_c", "c2"])
    b.cone(
        "pe2_sit",
        "PE2Sit",
        nodes={"t": "Tup", "c": "Cmp", "w": "Ar", "j": "Ar"},
        edges={
            "tw": ("t", "w", "tta"), "cw": ("c", "w", "c1"),
            "tj": ("t", "j", "tpp2"), "cj": ("c", "j", "c2"),
        },
        projections={"t": "pe2_t", "c": "pe2_c", "w": "pe2_w", "j": "pe2_j"},
    )
    b.equate_paths("pe2_law", ["pe2_c", "cc"], ["pe2_t", "tva"])

    # a pure arrow whose projection composites are a tuple's legs is that
    # tuple's mediator; impure competitors are exempt
    b.arrow("uq_p", "TUSit", "Prd")
    b.arrow("uq_c1", "TUSit", "Cmp")
    b.arrow("uq_c2", "TUSit", "Cmp")
    b.arrow("uq_t", "TUSit", "Tup")
    b.arrow("uq_s", "TUSit", "PAr")
    b.equate_paths("uq_w", ["uq_s", "inj"], ["uq_c1", "c1"])
    b.equate_paths("uq_w", ["uq_c2", "c1"], ["uq_w"])
    b.equate_paths("uq_j1", ["uq_c1", "c2"], ["uq_p", "pp1"])
    b.equate_paths("uq_j2", ["uq_c2", "c2"], ["uq_p", "pp2"])
    b.equate_paths("uq_m1", ["uq_c1", "cc"], ["uq_t", "tua"])
    b.equate_paths("uq_m2", ["uq_c2", "cc"], ["uq_t", "tva"])
    b.equate_paths("uq_p", ["uq_t", "tprd"], ["uq_p"])
    b.cone(
        "uq_sit",
        "TUSit",
        nodes={
            "p": "Prd", "x": "Cmp", "y": "Cmp", "t": "Tup", "s": "PAr",
            "w": "Ar", "j1": "Ar", "j2": "Ar", "m1": "Ar", "m2": "Ar",
        },
        edges={
            "sw": ("s", "w", "inj"), "xw": ("x", "w", "c1"), "yw": ("y", "w", "c1"),
            "xj1": ("x", "j1", "c2"), "pj1": ("p", "j1", "pp1"),
            "yj2": ("y", "j2", "c2"), "pj2": ("p", "j2", "pp2"),
            "xm1": ("x", "m1", "cc"), "tm1": ("t", "m1", "tua"),
            "ym2": ("y", "m2", "cc"), "tm2": ("t", "m2", "tva"),
            "tp": ("t", "p", "tprd"),
        },
        projections={
            "p": "uq_p", "x": "uq_c1", "y": "uq_c2", "t": "uq_t", "s": "uq_s",
            "w": "uq_w", "j1": "uq_j1", "j2": "uq_j2", "m1": "uq_m1", "m2": "uq_m2",
        },
    )
    b.equate_paths("uq_s", ["uq_t", "tt"], ["uq_s"])

    # the first projection law of a semi-product is an equation
    b.path_arrow("sqt1", ["stgt", "pp1"])
    b.path_arrow("sps1", ["ssrc", "pp1"])
    b.arrow("spl_m", "SPLSit", "SemiProd")
    b.arrow("spl_c", "SPLSit", "Cmp")
    b.arrow("spl_d", "SPLSit", "Cmp")
    b.equate_paths("spl_w", ["spl_m", "sw"], ["spl_c", "c1"])
    b.equate_paths("spl_jt", ["spl_m", "sqt1"], ["spl_c", "c2"])
    b.equate_paths("spl_js", ["spl_m", "sps1"], ["spl_d", "c1"])
    b.equate_paths("spl_t1", ["spl_m", "st1"], ["spl_d", "c2"])
    b.cone(
        "spl_sit",
        "SPLSit",
        nodes={
            "m": "SemiProd", "c": "Cmp", "d": "Cmp",
            "w": "Ar", "jt": "Ar", "js": "Ar", "t1": "Ar",
        },
        edges={
            "mw": ("m", "w", "sw"), "cw": ("c", "w", "c1"),
            "mjt": ("m", "jt", "sqt1"), "cjt": ("c", "jt", "c2"),
            "mjs": ("m", "js", "sps1"), "djs": ("d", "js", "c1"),
            "mt1": ("m", "t1", "st1"), "dt1": ("d", "t1", "c2"),
        },
        projections={
            "m": "spl_m", "c": "spl_c", "d": "spl_d",
            "w": "spl_w", "jt": "spl_jt", "js": "spl_js", "t1": "spl_t1",
        },
    )
    b.equate_paths("spl_law", ["spl_c", "cc"], ["spl_d", "cc"])

    # the second projection law is only a semi-congruence
    b.path_arrow("sqt2", ["stgt", "pp2"])
    b.path_arrow("sps2", ["ssrc", "pp2"])
    b.arrow("spr_m", "SPRSit", "SemiProd")
    b.arrow("spr_c", "SPRSit", "Cmp")
    b.arrow("spr_d", "SPRSit", "Cmp")
    b.equate_paths("spr_w", ["spr_m", "sw"], ["spr_c", "c1"])
    b.equate_paths("spr_jt", ["spr_m", "sqt2"], ["spr_c", "c2"])
    b.equate_paths("spr_js", ["spr_m", "sps2"], ["spr_d", "c1"])
    b.equate_paths("spr_t2", ["spr_m", "st2a"], ["spr_d", "c2"])
    b.cone(
        "spr_sit",
        "SPRSit",
        nodes={
            "m": "SemiProd", "c": "Cmp", "d": "Cmp",
            "w": "Ar", "jt": "Ar", "js": "Ar", "t2": "Ar",
        },
        edges={
            "mw": ("m", "w", "sw"), "cw": ("c", "w", "c1"),
            "mjt": ("m", "jt", "sqt2"), "cjt": ("c", "jt", "c2"),
            "mjs": ("m", "js", "sps2"), "djs": ("d", "js", "c1"),
            "mt2": ("m", "t2", "st2a"), "dt2": ("d", "t2", "c2"),
        },
        projections={
            "m": "spr_m", "c": "spr_c", "d": "spr_d",
            "w": "spr_w", "jt": "spr_jt", "js": "spr_js", "t2": "spr_t2",
        },
    )
    b.arrow("t_spr", "SPRSit", "Leq")
    b.equate_paths("spr_a", ["t_spr", "l1"], ["spr_c", "cc"])
    b.equate_paths("spr_b", ["t_spr", "l2"], ["spr_d", "cc"])

    # but when the first component is pure as well, it strengthens back
    # to an equation
    b.arrow("spp_m", "SPPSit", "SemiProd")
    b.arrow("spp_u", "SPPSit", "PAr")
    b.arrow("spp_c", "SPPSit", "Cmp")
    b.arrow("spp_d", "SPPSit", "Cmp")
    b.equate_paths("spp_t1", ["spp_m", "st1"], ["spp_u", "inj"])
    b.equate_paths("spp_w", ["spp_m", "sw"], ["spp_c", "c1"])
    b.equate_paths("spp_jt", ["spp_m", "sqt2"], ["spp_c", "c2"])
    b.equate_paths("spp_js", ["spp_m", "sps2"], ["spp_d", "c1"])
    b.equate_paths("spp_t2", ["spp_m", "st2a"], ["spp_d", "c2"])
    b.cone(
        "spp_sit",
        "SPPSit",
        nodes={
            "m": "SemiProd", "u": "PAr", "c": "Cmp", "d": "Cmp",
            "t1": "Ar", "w": "Ar", "jt": "Ar", "js": "Ar", "t2": "Ar",
        },
        edges={
            "mt1": ("m", "t1", "st1"), "ut1": ("u", "t1", "inj"),
            "mw": ("m", "w", "sw"), "cw": ("c", "w", "c1"),
            "mjt": ("m", "jt", "sqt2"), "cjt": ("c", "jt", "c2"),
            "mjs": ("m", "js", "sps2"), "djs": ("d", "js", "c1"),
            "mt2": ("m", "t2", "st2a"), "dt2": ("d", "t2", "c2"),
        },
        projections={
            "m": "spp_m", "u": "spp_u", "c": "spp_c", "d": "spp_d",
            "t1": "spp_t1", "w": "spp_w", "jt": "spp_jt", "js": "spp_js",
            "t2": "spp_t2",
        },
    )
    b.equate_paths("spp_law", ["spp_c", "cc"], ["spp_d", "cc"])
    # a doubly pure semi-product is the pure pairing in disguise: its
    # mediator gains a pure witness, and pure tuple uniqueness then
    # collapses it onto the tuple mediator it duplicates
    b.arrow("t_spm", "SPPSit", "PAr")
    b.composite("t_spm", "inj", "spp_w")

    for point in sorted(b.points):
        b.identity(point)
    for t, inv in sorted(LOCALIZED.items()):
        s_pt, t_pt = b.arrows[t]
        b.arrow(inv, t_pt, s_pt)
        b.composite(t, inv, b.identities[s_pt])
        b.composite(inv, t, b.identities[t_pt])
    return b.build()


def _propagator() -> Propagator:
    data = data_sketch()
    theory = theory_sketch()
    m = SketchMorphism(
        data,
        theory,
        {p: p for p in data.points},
        {a: a for a in data.arrows},
    )
    validate_sketch_morphism(m)
    return Propagator(m, dict(LOCALIZED))


def effect_spec(
    logic: Logic,
    points: list[str],
    arrows: dict[str, tuple[str, str]],
    pures: dict[str, str] | None = None,
    identities: dict[str, tuple[str, str]] | None = None,
    composites: dict[str, tuple[str, str, str]] | None = None,
    equations: dict[str, tuple[str, str]] | None = None,
    leqs: dict[str, tuple[str, str]] | None = None,
    products: dict[str, tuple[str, str, str, str, str]] | None = None,
    tuples: dict[str, tuple[str, str, str, str]] | None = None,
    semi_products: dict[str, tuple[str, str, str, str, str]] | None = None,
) -> Realization:
    """Decorated specification from named declarations.

    arrows: name -> (source point, target point)
    pures: name -> underlying arrow
    identities: name -> (point, loop arrow)
    composites: name -> (first, second, result arrow)
    equations: name -> (left arrow, right arrow), parallel
    leqs: name -> (left arrow, right arrow), parallel; reads "left can
        stand in for right wherever only results matter"
    products: name -> (vertex, factor a, factor b, projection 1, projection 2)
    tuples: name -> (product, pure leg into a, pure leg into b, pure mediator)
    semi_products: name -> (source product, target product, map on a,
                            pure map on b, arrow between the vertices)

    Composites whose factors are both underlying arrows of declared pures
    must name a result that is one too: the pure arrows of a specification
    are closed under its declared composition.
    """
    pures = pures or {}
    identities = identities or {}
    composites = composites or {}
    equations = equations or {}
    leqs = leqs or {}
    products = products or {}
    tuples = tuples or {}
    semi_products = semi_products or {}

    def arrow_at(name: str, what: str) -> tuple[str, str]:
        if name not in arrows:
            raise InvalidRealization(f"{what} uses unknown arrow {name}")
        return arrows[name]

    def pure_at(name: str, what: str) -> str:
        if name not in pures:
            raise InvalidRealization(f"{what} uses unknown pure arrow {name}")
        return pures[name]

    for a, (s, t) in arrows.items():
        if s not in points or t not in points:
            raise InvalidRealization(f"arrow {a}: endpoint not a declared point")
    for u, a in pures.items():
        arrow_at(a, f"pure arrow {u}")

    pure_image = set(pures.values())
    for c, (f, g, h) in composites.items():
        if f in pure_image and g in pure_image and h not in pure_image:
            raise InvalidRealization(
                f"composite {c}: both factors are pure but result {h} is not"
            )

    actions: dict[str, dict[str, str]] = {
        "src": {a: st[0] for a, st in arrows.items()},
        "tgt": {a: st[1] for a, st in arrows.items()},
        "inj": dict(pures),
        "e1": {}, "e2": {}, "qs": {}, "qt": {},
        "l1": {}, "l2": {}, "lqs": {}, "lqt": {},
        "ip": {}, "ia": {},
        "c1": {}, "c2": {}, "cc": {}, "cmid": {}, "csrc": {}, "ctgt": {},
        "pv": {}, "fa": {}, "fb": {}, "pp1": {}, "pp2": {},
        "tprd": {}, "tu": {}, "tv": {}, "tt": {},
        "tua": {}, "tva": {}, "tta": {}, "tz": {},
        "tea": {}, "teb": {}, "tev": {},
        "ssrc": {}, "stgt": {}, "st1": {}, "st2": {}, "st2a": {}, "sw": {},
        "se1s": {}, "se1t": {}, "se2s": {}, "se2t": {}, "sews": {}, "sewt": {},
    }
    for e, (u, v) in equations.items():
        us, ut = arrow_at(u, f"equation {e}")
        vs, vt = arrow_at(v, f"equation {e}")
        if (us, ut) != (vs, vt):
            raise InvalidRealization(f"equation {e}: arrows {u}, {v} not parallel")
        actions["e1"][e] = u
        actions["e2"][e] = v
        actions["qs"][e] = us
        actions["qt"][e] = ut
    for e, (u, v) in leqs.items():
        us, ut = arrow_at(u, f"semi-congruence {e}")
        vs, vt = arrow_at(v, f"semi-congruence {e}")
        if (us, ut) != (vs, vt):
            raise InvalidRealization(
                f"semi-congruence {e}: arrows {u}, {v} not parallel"
            )
        actions["l1"][e] = u
        actions["l2"][e] = v
        actions["lqs"][e] = us
        actions["lqt"][e] = ut
    for i, (p, a) in identities.items():
        if arrow_at(a, f"identity {i}") != (p, p):
            raise InvalidRealization(f"identity {i}: arrow {a} is not a loop at {p}")
        actions["ip"][i] = p
        actions["ia"][i] = a
    for c, (f, g, h) in composites.items():
        fs, ft = arrow_at(f, f"composite {c}")
        gs, gt = arrow_at(g, f"composite {c}")
        hs, ht = arrow_at(h, f"composite {c}")
        if ft != gs:
            raise InvalidRealization(f"composite {c}: {f} and {g} not consecutive")
        if (hs, ht) != (fs, gt):
            raise InvalidRealization(f"composite {c}: result {h} has wrong endpoints")
        actions["c1"][c] = f
        actions["c2"][c] = g
        actions["cc"][c] = h
        actions["cmid"][c] = ft
        actions["csrc"][c] = fs
        actions["ctgt"][c] = gt
    for pr, (v, a, b2, p1, p2) in products.items():
        if arrow_at(p1, f"product {pr}") != (v, a):
            raise InvalidRealization(f"product {pr}: projection {p1} is not {v}->{a}")
        if arrow_at(p2, f"product {pr}") != (v, b2):
            raise InvalidRealization(f"product {pr}: projection {p2} is not {v}->{b2}")
        actions["pv"][pr] = v
        actions["fa"][pr] = a
        actions["fb"][pr] = b2
        actions["pp1"][pr] = p1
        actions["pp2"][pr] = p2
    for tp, (pr, u, v, t) in tuples.items():
        if pr not in products:
            raise InvalidRealization(f"tuple {tp} uses unknown product {pr}")
        vx, a, b2, _, _ = products[pr]
        ua = pure_at(u, f"tuple {tp}")
        va = pure_at(v, f"tuple {tp}")
        ta = pure_at(t, f"tuple {tp}")
        us, ut = arrows[ua]
        vs, vt = arrows[va]
        ts, tt_ = arrows[ta]
        if us != vs or us != ts:
            raise InvalidRealization(f"tuple {tp}: legs do not share a source")
        if ut != a or vt != b2 or tt_ != vx:
            raise InvalidRealization(f"tuple {tp}: legs do not land in the factors")
        actions["tprd"][tp] = pr
        actions["tu"][tp] = u
        actions["tv"][tp] = v
        actions["tt"][tp] = t
        actions["tua"][tp] = ua
        actions["tva"][tp] = va
        actions["tta"][tp] = ta
        actions["tz"][tp] = us
        actions["tea"][tp] = a
        actions["teb"][tp] = b2
        actions["tev"][tp] = vx
    for sp, (p, q, t1, t2, w) in semi_products.items():
        if p not in products or q not in products:
            raise InvalidRealization(f"semi-product {sp} uses unknown product")
        pv_, pa, pb, _, _ = products[p]
        qv, qa, qb, _, _ = products[q]
        t2a = pure_at(t2, f"semi-product {sp}")
        if arrow_at(t1, f"semi-product {sp}") != (pa, qa):
            raise InvalidRealization(f"semi-product {sp}: {t1} is not {pa}->{qa}")
        if arrows[t2a] != (pb, qb):
            raise InvalidRealization(
                f"semi-product {sp}: pure map {t2} is not over {pb}->{qb}"
            )
        if arrow_at(w, f"semi-product {sp}") != (pv_, qv):
            raise InvalidRealization(f"semi-product {sp}: {w} is not {pv_}->{qv}")
        actions["ssrc"][sp] = p
        actions["stgt"][sp] = q
        actions["st1"][sp] = t1
        actions["st2"][sp] = t2
        actions["st2a"][sp] = t2a
        actions["sw"][sp] = w
        actions["se1s"][sp] = pa
        actions["se1t"][sp] = qa
        actions["se2s"][sp] = pb
        actions["se2t"][sp] = qb
        actions["sews"][sp] = pv_
        actions["sewt"][sp] = qv

    spec = Realization(
        logic.data_sketch,
        {
            "Pt": tuple(sorted(points)),
            "Ar": tuple(sorted(arrows)),
            "PAr": tuple(sorted(pures)),
            "Eq": tuple(sorted(equations)),
            "Leq": tuple(sorted(leqs)),
            "IdDecl": tuple(sorted(identities)),
            "Cmp": tuple(sorted(composites)),
            "Prd": tuple(sorted(products)),
            "Tup": tuple(sorted(tuples)),
            "SemiProd": tuple(sorted(semi_products)),
        },
        actions,
    )
    check_realization(spec)
    return spec


def arrow_classes(logic: Logic, spec: Realization, budget: int = DEFAULT_BUDGET) -> dict[str, str]:
    """Map each declared arrow to its class representative in the generated
    theory; two arrows are provably equal iff they share a representative."""
    w = free(logic.propagator, spec, budget)
    return {a: w.chase.resolve(w.seed_names[a]) for a in spec.carriers["Ar"]}


def leq_pairs(logic: Logic, spec: Realization, budget: int = DEFAULT_BUDGET) -> set[tuple[str, str]]:
    """Ordered pairs (a, b) of declared arrows with a provable
    semi-congruence from a to b.  Reflexive pairs are always present."""
    w = free(logic.propagator, spec, budget)
    classes = {a: w.chase.resolve(w.seed_names[a]) for a in spec.carriers["Ar"]}
    theory = w.free
    related = {
        (theory.actions["l1"][x], theory.actions["l2"][x])
        for x in theory.carriers["Leq"]
    }
    return {
        (a, b)
        for a in spec.carriers["Ar"]
        for b in spec.carriers["Ar"]
        if (classes[a], classes[b]) in related
    }


def _rules(logic: Logic, budget: int) -> dict[str, Rule]:
    p = logic.propagator

    def spec(**kw) -> Realization:
        return effect_spec(logic, **kw)

    concl_arrow = spec(points=["A", "B"], arrows={"u": ("A", "B")})
    concl_eq = spec(
        points=["A", "B"],
        arrows={"l": ("A", "B"), "r": ("A", "B")},
        equations={"w": ("l", "r")},
    )
    concl_leq = spec(
        points=["A", "B"],
        arrows={"l": ("A", "B"), "r": ("A", "B")},
        leqs={"w": ("l", "r")},
    )

    def arrow_concl(a_img: str, b_img: str, u_img: str) -> dict[str, dict[str, str]]:
        return {"Pt": {"A": a_img, "B": b_img}, "Ar": {"u": u_img}}

    def eq_concl(a_img: str, b_img: str, l_img: str, r_img: str, w_img: str):
        return {
            "Pt": {"A": a_img, "B": b_img},
            "Ar": {"l": l_img, "r": r_img},
            "Eq": {"w": w_img},
        }

    def leq_concl(a_img: str, b_img: str, l_img: str, r_img: str, w_img: str):
        return {
            "Pt": {"A": a_img, "B": b_img},
            "Ar": {"l": l_img, "r": r_img},
            "Leq": {"w": w_img},
        }

    rules: dict[str, Rule] = {}

    def add(name, hypothesis, extended, conclusion, concl_map, bindings):
        rules[name] = rule_from_parts(
            p, name, hypothesis, extended, conclusion, concl_map, bindings, budget
        )

    # a pure arrow may be used as its underlying plain arrow; nothing is
    # derived, the step only moves between the two readings
    h = spec(points=["X", "Y"], arrows={"g": ("X", "Y")}, pures={"u": "g"})
    add("pure-promotion", h, h, concl_arrow, arrow_concl("X", "Y", "g"), {"u": "u"})

    h = spec(
        points=["A", "B", "C"],
        arrows={
            "k": ("A", "B"), "f": ("B", "C"), "g": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        leqs={"e": ("f", "g")},
        composites={"cf": ("k", "f", "m"), "cg": ("k", "g", "n")},
    )
    h2 = spec(
        points=["A", "B", "C"],
        arrows={
            "k": ("A", "B"), "f": ("B", "C"), "g": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        leqs={"e": ("f", "g"), "w": ("m", "n")},
        composites={"cf": ("k", "f", "m"), "cg": ("k", "g", "n")},
    )
    add("substitution", h, h2, concl_leq, leq_concl("A", "C", "m", "n", "w"),
        {"k": "k", "f": "f", "g": "g"})

    # the context side is restricted to pure arrows: an impure context may
    # observe the state difference the relation permits
    h = spec(
        points=["A", "B", "C"],
        arrows={
            "f": ("A", "B"), "g": ("A", "B"), "k": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        pures={"v": "k"},
        leqs={"e": ("f", "g")},
        composites={"cf": ("f", "k", "m"), "cg": ("g", "k", "n")},
    )
    h2 = spec(
        points=["A", "B", "C"],
        arrows={
            "f": ("A", "B"), "g": ("A", "B"), "k": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        pures={"v": "k"},
        leqs={"e": ("f", "g"), "w": ("m", "n")},
        composites={"cf": ("f", "k", "m"), "cg": ("g", "k", "n")},
    )
    add("pure-replacement-only", h, h2, concl_leq, leq_concl("A", "C", "m", "n", "w"),
        {"f": "f", "g": "g", "v": "v"})

    sp_points = ["A", "B", "C", "D", "P", "Q"]
    sp_arrows = {
        "p1": ("P", "A"), "p2": ("P", "B"),
        "q1": ("Q", "C"), "q2": ("Q", "D"),
        "t1": ("A", "C"), "t2a": ("B", "D"), "w": ("P", "Q"),
    }
    sp_products = {
        "prd_p": ("P", "A", "B", "p1", "p2"),
        "prd_q": ("Q", "C", "D", "q1", "q2"),
    }
    sp_decl = {"sp": ("prd_p", "prd_q", "t1", "t2", "w")}

    h = spec(
        points=sp_points,
        arrows=dict(sp_arrows, m=("P", "C"), n=("P", "C")),
        pures={"t2": "t2a"},
        products=sp_products,
        semi_products=sp_decl,
        composites={"c": ("w", "q1", "m"), "d": ("p1", "t1", "n")},
    )
    h2 = spec(
        points=sp_points,
        arrows=dict(sp_arrows, m=("P", "C"), n=("P", "C")),
        pures={"t2": "t2a"},
        products=sp_products,
        semi_products=sp_decl,
        composites={"c": ("w", "q1", "m"), "d": ("p1", "t1", "n")},
        equations={"we": ("m", "n")},
    )
    add("semi-product-left", h, h2, concl_eq, eq_concl("P", "C", "m", "n", "we"),
        {"sp": "sp"})

    h = spec(
        points=sp_points,
        arrows=dict(sp_arrows, m=("P", "D"), n=("P", "D")),
        pures={"t2": "t2a"},
        products=sp_products,
        semi_products=sp_decl,
        composites={"c": ("w", "q2", "m"), "d": ("p2", "t2a", "n")},
    )
    h2 = spec(
        points=sp_points,
        arrows=dict(sp_arrows, m=("P", "D"), n=("P", "D")),
        pures={"t2": "t2a"},
        products=sp_products,
        semi_products=sp_decl,
        composites={"c": ("w", "q2", "m"), "d": ("p2", "t2a", "n")},
        leqs={"w2": ("m", "n")},
    )
    add("semi-product-right", h, h2, concl_leq, leq_concl("P", "D", "m", "n", "w2"),
        {"sp": "sp"})

    # pairing through a middle product: the first component beside an
    # identity, then an identity beside the second component, composed.
    # The two stepping-stone semi-products are hypothesis data; the rule
    # derives the diagonal arrow between the outer vertices.
    seq_points = ["A", "B", "C", "D", "P", "R", "Q"]
    seq_arrows = {
        "p1": ("P", "A"), "p2": ("P", "B"),
        "r1": ("R", "C"), "r2": ("R", "B"),
        "q1": ("Q", "C"), "q2": ("Q", "D"),
        "t1": ("A", "C"), "t2a": ("B", "D"),
        "ib": ("B", "B"), "ic": ("C", "C"),
        "w1": ("P", "R"), "w2": ("R", "Q"),
    }
    seq_ids = {"db": ("B", "ib"), "dc": ("C", "ic")}
    seq_pures = {"t2": "t2a", "ub": "ib", "uc": "ic"}
    seq_products = {
        "prd_p": ("P", "A", "B", "p1", "p2"),
        "prd_r": ("R", "C", "B", "r1", "r2"),
        "prd_q": ("Q", "C", "D", "q1", "q2"),
    }
    seq_sps = {
        "sp1": ("prd_p", "prd_r", "t1", "ub", "w1"),
        "sp2": ("prd_r", "prd_q", "ic", "t2", "w2"),
    }
    h = spec(
        points=seq_points,
        arrows=seq_arrows,
        pures=seq_pures,
        identities=seq_ids,
        products=seq_products,
        semi_products=seq_sps,
    )
    h2 = spec(
        points=seq_points,
        arrows=dict(seq_arrows, m=("P", "Q")),
        pures=seq_pures,
        identities=seq_ids,
        products=seq_products,
        semi_products=seq_sps,
        composites={"c": ("w1", "w2", "m")},
    )
    add("sequential-product-def", h, h2, concl_arrow, arrow_concl("P", "Q", "m"),
        {"sp1": "sp1", "sp2": "sp2"})

    return rules


def build(budget: int = DEFAULT_BUDGET) -> Logic:
    p = _propagator()
    logic = Logic("eq-effect", p.source, p, {})
    logic.rules.update(_rules(logic, budget))
    return logic
