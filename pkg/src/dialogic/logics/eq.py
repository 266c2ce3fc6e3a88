"""Equational reasoning over graph presentations.

The data sketch is pure declaration structure: points and arrows of a graph,
equations between parallel arrows, identity declarations, binary composite
declarations, and declared binary products with their tuples and morphism
pairs.  Nothing is computed inside a specification: declaring an equation
does not merge anything, declaring a composite does not compose.

The theory sketch is where the laws live.  Situation cones materialize every
composable pair, every span over a declared product, and every configuration
a law speaks about; shared-result composites state the category and product
laws; a diagonal cone forces every equation witness onto the reflexivity
witness of a single arrow, which is what being equal means in a theory.
Four localized arrows glue the gaps: every point gains its identity
declaration, every composable pair its composite, every span over a product
its tuple, and every pair of maps between factors its product morphism.

Rules are inclusions: the hypothesis plus the derived declaration, verified
to change nothing in the theory.  The thirteen rule names are a curated
finite presentation, not a completeness claim.
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
    "t_pm": "t_pm_inv",
}


def _data(b: SketchBuilder) -> None:
    """Declaration layer shared by the data and theory sketches."""
    b.arrow("src", "Ar", "Pt")
    b.arrow("tgt", "Ar", "Pt")
    # id_Ar is declared at the data level so that sketch morphisms from
    # richer declaration layers have a degenerate arrow field to land on
    b.identity("Ar")
    # equations carry two parallel arrows
    b.arrow("e1", "Eq", "Ar")
    b.arrow("e2", "Eq", "Ar")
    b.equate_paths("qs", ["e1", "src"], ["e2", "src"])
    b.equate_paths("qt", ["e1", "tgt"], ["e2", "tgt"])
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
    # a tuple declaration: a span into the factors and its mediating arrow
    b.arrow("tprd", "Tup", "Prd")
    b.arrow("tu", "Tup", "Ar")
    b.arrow("tv", "Tup", "Ar")
    b.arrow("tt", "Tup", "Ar")
    b.equate_paths("tz", ["tu", "src"], ["tv", "src"])
    b.equate_paths("tz", ["tt", "src"], ["tz"])
    b.equate_paths("tea", ["tu", "tgt"], ["tprd", "fa"])
    b.equate_paths("teb", ["tv", "tgt"], ["tprd", "fb"])
    b.equate_paths("tev", ["tt", "tgt"], ["tprd", "pv"])
    # a product morphism: componentwise maps and the arrow between vertices
    b.arrow("msrc", "PrdMor", "Prd")
    b.arrow("mtgt", "PrdMor", "Prd")
    b.arrow("m1", "PrdMor", "Ar")
    b.arrow("m2", "PrdMor", "Ar")
    b.arrow("mm", "PrdMor", "Ar")
    b.equate_paths("me1s", ["m1", "src"], ["msrc", "fa"])
    b.equate_paths("me1t", ["m1", "tgt"], ["mtgt", "fa"])
    b.equate_paths("me2s", ["m2", "src"], ["msrc", "fb"])
    b.equate_paths("me2t", ["m2", "tgt"], ["mtgt", "fb"])
    b.equate_paths("mems", ["mm", "src"], ["msrc", "pv"])
    b.equate_paths("memt", ["mm", "tgt"], ["mtgt", "pv"])


def data_sketch() -> Sketch:
    b = SketchBuilder()
    _data(b)
    return b.build()


def theory_sketch() -> Sketch:
    b = SketchBuilder()
    _data(b)

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

    # every span over a product is a situation with its tuple: t_tup inverted
    b.arrow("w1", "TupReq", "Ar")
    b.arrow("w2", "TupReq", "Ar")
    b.arrow("wp", "TupReq", "Prd")
    b.equate_paths("wz", ["w1", "src"], ["w2", "src"])
    b.equate_paths("wfa", ["w1", "tgt"], ["wp", "fa"])
    b.equate_paths("wfb", ["w2", "tgt"], ["wp", "fb"])
    b.cone(
        "tup_req",
        "TupReq",
        nodes={"p": "Prd", "u": "Ar", "v": "Ar", "z": "Pt", "a": "Pt", "b": "Pt"},
        edges={
            "uz": ("u", "z", "src"), "vz": ("v", "z", "src"),
            "ua": ("u", "a", "tgt"), "pa": ("p", "a", "fa"),
            "vb": ("v", "b", "tgt"), "pb": ("p", "b", "fb"),
        },
        projections={"p": "wp", "u": "w1", "v": "w2", "z": "wz", "a": "wfa", "b": "wfb"},
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
    b.equate_paths("pe1_w", ["pe1_t", "tt"], ["pe1_c", "c1"])
    b.equate_paths("pe1_j", ["pe1_t", "tpp1"], ["pe1_c", "c2"])
    b.cone(
        "pe1_sit",
        "PE1Sit",
        nodes={"t": "Tup", "c": "Cmp", "w": "Ar", "j": "Ar"},
        edges={
            "tw": ("t", "w", "tt"), "cw": ("c", "w", "c1"),
            "tj": ("t", "j", "tpp1"), "cj": ("c", "j", "c2"),
        },
        projections={"t": "pe1_t", "c": "pe1_c", "w": "pe1_w", "j": "pe1_j"},
    )
    b.equate_paths("pe1_law", ["pe1_c", "cc"], ["pe1_t", "tu"])
    b.arrow("pe2_t", "PE2Sit", "Tup")
    b.arrow("pe2_c", "PE2Sit", "Cmp")
    b.equate_paths("pe2_w", ["pe2_t", "tt"], ["pe2_c", "c1"])
    b.equate_paths("pe2_j", ["pe2_t", "tpp2"], ["pe2_c", "c2"])
    b.cone(
        "pe2_sit",
        "PE2Sit",
        nodes={"t": "Tup", "c": "Cmp", "w": "Ar", "j": "Ar"},
        edges={
            "tw": ("t", "w", "tt"), "cw": ("c", "w", "c1"),
            "tj": ("t", "j", "tpp2"), "cj": ("c", "j", "c2"),
        },
        projections={"t": "pe2_t", "c": "pe2_c", "w": "pe2_w", "j": "pe2_j"},
    )
    b.equate_paths("pe2_law", ["pe2_c", "cc"], ["pe2_t", "tv"])

    # an arrow whose projection composites are a tuple's legs is that tuple
    b.arrow("uq_p", "TUSit", "Prd")
    b.arrow("uq_c1", "TUSit", "Cmp")
    b.arrow("uq_c2", "TUSit", "Cmp")
    b.arrow("uq_t", "TUSit", "Tup")
    b.equate_paths("uq_w", ["uq_c1", "c1"], ["uq_c2", "c1"])
    b.equate_paths("uq_j1", ["uq_c1", "c2"], ["uq_p", "pp1"])
    b.equate_paths("uq_j2", ["uq_c2", "c2"], ["uq_p", "pp2"])
    b.equate_paths("uq_m1", ["uq_c1", "cc"], ["uq_t", "tu"])
    b.equate_paths("uq_m2", ["uq_c2", "cc"], ["uq_t", "tv"])
    b.equate_paths("uq_p", ["uq_t", "tprd"], ["uq_p"])
    b.cone(
        "uq_sit",
        "TUSit",
        nodes={
            "p": "Prd", "x": "Cmp", "y": "Cmp", "t": "Tup",
            "w": "Ar", "j1": "Ar", "j2": "Ar", "m1": "Ar", "m2": "Ar",
        },
        edges={
            "xw": ("x", "w", "c1"), "yw": ("y", "w", "c1"),
            "xj1": ("x", "j1", "c2"), "pj1": ("p", "j1", "pp1"),
            "yj2": ("y", "j2", "c2"), "pj2": ("p", "j2", "pp2"),
            "xm1": ("x", "m1", "cc"), "tm1": ("t", "m1", "tu"),
            "ym2": ("y", "m2", "cc"), "tm2": ("t", "m2", "tv"),
            "tp": ("t", "p", "tprd"),
        },
        projections={
            "p": "uq_p", "x": "uq_c1", "y": "uq_c2", "t": "uq_t",
            "w": "uq_w", "j1": "uq_j1", "j2": "uq_j2", "m1": "uq_m1", "m2": "uq_m2",
        },
    )
    b.equate_paths("uq_w", ["uq_t", "tt"], ["uq_w"])

    # every pair of maps between the factors of two products is a situation
    # with its product morphism: t_pm inverted
    b.arrow("n1", "PMReq", "Ar")
    b.arrow("n2", "PMReq", "Ar")
    b.arrow("np", "PMReq", "Prd")
    b.arrow("nq", "PMReq", "Prd")
    b.equate_paths("nsa", ["n1", "src"], ["np", "fa"])
    b.equate_paths("nta", ["n1", "tgt"], ["nq", "fa"])
    b.equate_paths("nsb", ["n2", "src"], ["np", "fb"])
    b.equate_paths("ntb", ["n2", "tgt"], ["nq", "fb"])
    b.cone(
        "pm_req",
        "PMReq",
        nodes={
            "p": "Prd", "q": "Prd", "t1": "Ar", "t2": "Ar",
            "a": "Pt", "a2": "Pt", "b": "Pt", "b2": "Pt",
        },
        edges={
            "t1a": ("t1", "a", "src"), "pa": ("p", "a", "fa"),
            "t1a2": ("t1", "a2", "tgt"), "qa2": ("q", "a2", "fa"),
            "t2b": ("t2", "b", "src"), "pb": ("p", "b", "fb"),
            "t2b2": ("t2", "b2", "tgt"), "qb2": ("q", "b2", "fb"),
        },
        projections={
            "p": "np", "q": "nq", "t1": "n1", "t2": "n2",
            "a": "nsa", "a2": "nta", "b": "nsb", "b2": "ntb",
        },
    )
    b.arrow("t_pm", "PrdMor", "PMReq")
    b.equate_paths("msrc", ["t_pm", "np"], ["msrc"])
    b.equate_paths("mtgt", ["t_pm", "nq"], ["mtgt"])
    b.equate_paths("m1", ["t_pm", "n1"], ["m1"])
    b.equate_paths("m2", ["t_pm", "n2"], ["m2"])

    # the vertex arrow commutes with each projection pair
    b.path_arrow("mpt1", ["mtgt", "pp1"])
    b.path_arrow("mps1", ["msrc", "pp1"])
    b.path_arrow("mpt2", ["mtgt", "pp2"])
    b.path_arrow("mps2", ["msrc", "pp2"])
    b.arrow("pm1_m", "PM1Sit", "PrdMor")
    b.arrow("pm1_c", "PM1Sit", "Cmp")
    b.arrow("pm1_d", "PM1Sit", "Cmp")
    b.equate_paths("pm1_w", ["pm1_m", "mm"], ["pm1_c", "c1"])
    b.equate_paths("pm1_jt", ["pm1_m", "mpt1"], ["pm1_c", "c2"])
    b.equate_paths("pm1_js", ["pm1_m", "mps1"], ["pm1_d", "c1"])
    b.equate_paths("pm1_t1", ["pm1_m", "m1"], ["pm1_d", "c2"])
    b.cone(
        "pm1_sit",
        "PM1Sit",
        nodes={
            "m": "PrdMor", "c": "Cmp", "d": "Cmp",
            "w": "Ar", "jt": "Ar", "js": "Ar", "t1": "Ar",
        },
        edges={
            "mw": ("m", "w", "mm"), "cw": ("c", "w", "c1"),
            "mjt": ("m", "jt", "mpt1"), "cjt": ("c", "jt", "c2"),
            "mjs": ("m", "js", "mps1"), "djs": ("d", "js", "c1"),
            "mt1": ("m", "t1", "m1"), "dt1": ("d", "t1", "c2"),
        },
        projections={
            "m": "pm1_m", "c": "pm1_c", "d": "pm1_d",
            "w": "pm1_w", "jt": "pm1_jt", "js": "pm1_js", "t1": "pm1_t1",
        },
    )
    b.equate_paths("pm1_law", ["pm1_c", "cc"], ["pm1_d", "cc"])
    b.arrow("pm2_m", "PM2Sit", "PrdMor")
    b.arrow("pm2_c", "PM2Sit", "Cmp")
    b.arrow("pm2_d", "PM2Sit", "Cmp")
    b.equate_paths("pm2_w", ["pm2_m", "mm"], ["pm2_c", "c1"])
    b.equate_paths("pm2_jt", ["pm2_m", "mpt2"], ["pm2_c", "c2"])
    b.equate_paths("pm2_js", ["pm2_m", "mps2"], ["pm2_d", "c1"])
    b.equate_paths("pm2_t2", ["pm2_m", "m2"], ["pm2_d", "c2"])
    b.cone(
        "pm2_sit",
        "PM2Sit",
        nodes={
            "m": "PrdMor", "c": "Cmp", "d": "Cmp",
            "w": "Ar", "jt": "Ar", "js": "Ar", "t2": "Ar",
        },
        edges={
            "mw": ("m", "w", "mm"), "cw": ("c", "w", "c1"),
            "mjt": ("m", "jt", "mpt2"), "cjt": ("c", "jt", "c2"),
            "mjs": ("m", "js", "mps2"), "djs": ("d", "js", "c1"),
            "mt2": ("m", "t2", "m2"), "dt2": ("d", "t2", "c2"),
        },
        projections={
            "m": "pm2_m", "c": "pm2_c", "d": "pm2_d",
            "w": "pm2_w", "jt": "pm2_jt", "js": "pm2_js", "t2": "pm2_t2",
        },
    )
    b.equate_paths("pm2_law", ["pm2_c", "cc"], ["pm2_d", "cc"])

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


def eq_spec(
    logic: Logic,
    points: list[str],
    arrows: dict[str, tuple[str, str]],
    identities: dict[str, tuple[str, str]] | None = None,
    composites: dict[str, tuple[str, str, str]] | None = None,
    equations: dict[str, tuple[str, str]] | None = None,
    products: dict[str, tuple[str, str, str, str, str]] | None = None,
    tuples: dict[str, tuple[str, str, str, str]] | None = None,
    prod_morphisms: dict[str, tuple[str, str, str, str, str]] | None = None,
) -> Realization:
    """Specification from named declarations.

    arrows: name -> (source point, target point)
    identities: name -> (point, loop arrow)
    composites: name -> (first, second, result arrow)
    equations: name -> (left arrow, right arrow), parallel
    products: name -> (vertex, factor a, factor b, projection 1, projection 2)
    tuples: name -> (product, leg into a, leg into b, mediating arrow)
    prod_morphisms: name -> (source product, target product, map on a,
                             map on b, arrow between the vertices)
    """
    identities = identities or {}
    composites = composites or {}
    equations = equations or {}
    products = products or {}
    tuples = tuples or {}
    prod_morphisms = prod_morphisms or {}

    def arrow_at(name: str, what: str) -> tuple[str, str]:
        if name not in arrows:
            raise InvalidRealization(f"{what} uses unknown arrow {name}")
        return arrows[name]

    for a, (s, t) in arrows.items():
        if s not in points or t not in points:
            raise InvalidRealization(f"arrow {a}: endpoint not a declared point")

    actions: dict[str, dict[str, str]] = {
        "src": {a: st[0] for a, st in arrows.items()},
        "tgt": {a: st[1] for a, st in arrows.items()},
        "id_Ar": {a: a for a in arrows},
        "e1": {}, "e2": {}, "qs": {}, "qt": {},
        "ip": {}, "ia": {},
        "c1": {}, "c2": {}, "cc": {}, "cmid": {}, "csrc": {}, "ctgt": {},
        "pv": {}, "fa": {}, "fb": {}, "pp1": {}, "pp2": {},
        "tprd": {}, "tu": {}, "tv": {}, "tt": {}, "tz": {},
        "tea": {}, "teb": {}, "tev": {},
        "msrc": {}, "mtgt": {}, "m1": {}, "m2": {}, "mm": {},
        "me1s": {}, "me1t": {}, "me2s": {}, "me2t": {}, "mems": {}, "memt": {},
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
        us, ut = arrow_at(u, f"tuple {tp}")
        vs, vt = arrow_at(v, f"tuple {tp}")
        ts, tt_ = arrow_at(t, f"tuple {tp}")
        if us != vs or us != ts:
            raise InvalidRealization(f"tuple {tp}: legs do not share a source")
        if ut != a or vt != b2 or tt_ != vx:
            raise InvalidRealization(f"tuple {tp}: legs do not land in the factors")
        actions["tprd"][tp] = pr
        actions["tu"][tp] = u
        actions["tv"][tp] = v
        actions["tt"][tp] = t
        actions["tz"][tp] = us
        actions["tea"][tp] = a
        actions["teb"][tp] = b2
        actions["tev"][tp] = vx
    for pm, (p, q, t1, t2, w) in prod_morphisms.items():
        if p not in products or q not in products:
            raise InvalidRealization(f"product morphism {pm} uses unknown product")
        pv_, pa, pb, _, _ = products[p]
        qv, qa, qb, _, _ = products[q]
        if arrow_at(t1, f"product morphism {pm}") != (pa, qa):
            raise InvalidRealization(f"product morphism {pm}: {t1} is not {pa}->{qa}")
        if arrow_at(t2, f"product morphism {pm}") != (pb, qb):
            raise InvalidRealization(f"product morphism {pm}: {t2} is not {pb}->{qb}")
        if arrow_at(w, f"product morphism {pm}") != (pv_, qv):
            raise InvalidRealization(f"product morphism {pm}: {w} is not {pv_}->{qv}")
        actions["msrc"][pm] = p
        actions["mtgt"][pm] = q
        actions["m1"][pm] = t1
        actions["m2"][pm] = t2
        actions["mm"][pm] = w
        actions["me1s"][pm] = pa
        actions["me1t"][pm] = qa
        actions["me2s"][pm] = pb
        actions["me2t"][pm] = qb
        actions["mems"][pm] = pv_
        actions["memt"][pm] = qv

    spec = Realization(
        logic.data_sketch,
        {
            "Pt": tuple(sorted(points)),
            "Ar": tuple(sorted(arrows)),
            "Eq": tuple(sorted(equations)),
            "IdDecl": tuple(sorted(identities)),
            "Cmp": tuple(sorted(composites)),
            "Prd": tuple(sorted(products)),
            "Tup": tuple(sorted(tuples)),
            "PrdMor": tuple(sorted(prod_morphisms)),
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


def _rules(logic: Logic, budget: int) -> dict[str, Rule]:
    p = logic.propagator

    def spec(**kw) -> Realization:
        return eq_spec(logic, **kw)

    concl_arrow = spec(points=["A", "B"], arrows={"u": ("A", "B")})
    concl_eq = spec(
        points=["A", "B"],
        arrows={"l": ("A", "B"), "r": ("A", "B")},
        equations={"w": ("l", "r")},
    )

    def arrow_concl(a_img: str, b_img: str, u_img: str) -> dict[str, dict[str, str]]:
        return {"Pt": {"A": a_img, "B": b_img}, "Ar": {"u": u_img}}

    def eq_concl(a_img: str, b_img: str, l_img: str, r_img: str, w_img: str):
        return {
            "Pt": {"A": a_img, "B": b_img},
            "Ar": {"l": l_img, "r": r_img},
            "Eq": {"w": w_img},
        }

    rules: dict[str, Rule] = {}

    def add(name, hypothesis, extended, conclusion, concl_map, bindings):
        rules[name] = rule_from_parts(
            p, name, hypothesis, extended, conclusion, concl_map, bindings, budget
        )

    h = spec(points=["X"], arrows={})
    h2 = spec(
        points=["X"],
        arrows={"e": ("X", "X")},
        identities={"i": ("X", "e")},
    )
    add("identity-intro", h, h2, concl_arrow, arrow_concl("X", "X", "e"), {"X": "X"})

    h = spec(points=["A", "B", "C"], arrows={"f": ("A", "B"), "g": ("B", "C")})
    h2 = spec(
        points=["A", "B", "C"],
        arrows={"f": ("A", "B"), "g": ("B", "C"), "m": ("A", "C")},
        composites={"c": ("f", "g", "m")},
    )
    add("composite-intro", h, h2, concl_arrow, arrow_concl("A", "C", "m"),
        {"f": "f", "g": "g"})

    assoc_arrows = {
        "f": ("A", "B"), "g": ("B", "C"), "h": ("C", "D"),
        "p": ("A", "C"), "q": ("A", "D"), "r": ("B", "D"), "s": ("A", "D"),
    }
    assoc_comps = {
        "x": ("f", "g", "p"), "y": ("p", "h", "q"),
        "z": ("g", "h", "r"), "w": ("f", "r", "s"),
    }
    h = spec(points=["A", "B", "C", "D"], arrows=assoc_arrows, composites=assoc_comps)
    h2 = spec(
        points=["A", "B", "C", "D"],
        arrows=assoc_arrows,
        composites=assoc_comps,
        equations={"e": ("q", "s")},
    )
    add("assoc", h, h2, concl_eq, eq_concl("A", "D", "q", "s", "e"),
        {"f": "f", "g": "g", "h": "h"})

    h = spec(
        points=["X", "Y"],
        arrows={"f": ("X", "Y"), "e": ("X", "X"), "m": ("X", "Y")},
        identities={"i": ("X", "e")},
        composites={"c": ("e", "f", "m")},
    )
    h2 = spec(
        points=["X", "Y"],
        arrows={"f": ("X", "Y"), "e": ("X", "X"), "m": ("X", "Y")},
        identities={"i": ("X", "e")},
        composites={"c": ("e", "f", "m")},
        equations={"w": ("m", "f")},
    )
    add("unit-left", h, h2, concl_eq, eq_concl("X", "Y", "m", "f", "w"), {"f": "f"})

    h = spec(
        points=["X", "Y"],
        arrows={"f": ("X", "Y"), "e": ("Y", "Y"), "m": ("X", "Y")},
        identities={"i": ("Y", "e")},
        composites={"c": ("f", "e", "m")},
    )
    h2 = spec(
        points=["X", "Y"],
        arrows={"f": ("X", "Y"), "e": ("Y", "Y"), "m": ("X", "Y")},
        identities={"i": ("Y", "e")},
        composites={"c": ("f", "e", "m")},
        equations={"w": ("m", "f")},
    )
    add("unit-right", h, h2, concl_eq, eq_concl("X", "Y", "m", "f", "w"), {"f": "f"})

    h = spec(points=["A", "B"], arrows={"f": ("A", "B")})
    h2 = spec(
        points=["A", "B"], arrows={"f": ("A", "B")}, equations={"w": ("f", "f")}
    )
    add("refl", h, h2, concl_eq, eq_concl("A", "B", "f", "f", "w"), {"f": "f"})

    h = spec(
        points=["A", "B"],
        arrows={"f": ("A", "B"), "g": ("A", "B")},
        equations={"e": ("f", "g")},
    )
    h2 = spec(
        points=["A", "B"],
        arrows={"f": ("A", "B"), "g": ("A", "B")},
        equations={"e": ("f", "g"), "w": ("g", "f")},
    )
    add("sym", h, h2, concl_eq, eq_concl("A", "B", "g", "f", "w"),
        {"f": "f", "g": "g"})

    h = spec(
        points=["A", "B"],
        arrows={"f": ("A", "B"), "g": ("A", "B"), "h": ("A", "B")},
        equations={"e1": ("f", "g"), "e2": ("g", "h")},
    )
    h2 = spec(
        points=["A", "B"],
        arrows={"f": ("A", "B"), "g": ("A", "B"), "h": ("A", "B")},
        equations={"e1": ("f", "g"), "e2": ("g", "h"), "w": ("f", "h")},
    )
    add("trans", h, h2, concl_eq, eq_concl("A", "B", "f", "h", "w"),
        {"f": "f", "g": "g", "h": "h"})

    # substitution feeds a common arrow into both sides of an equation,
    # replacement wraps both sides in a common context
    h = spec(
        points=["A", "B", "C"],
        arrows={
            "k": ("A", "B"), "f": ("B", "C"), "g": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        equations={"e": ("f", "g")},
        composites={"cf": ("k", "f", "m"), "cg": ("k", "g", "n")},
    )
    h2 = spec(
        points=["A", "B", "C"],
        arrows={
            "k": ("A", "B"), "f": ("B", "C"), "g": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        equations={"e": ("f", "g"), "w": ("m", "n")},
        composites={"cf": ("k", "f", "m"), "cg": ("k", "g", "n")},
    )
    add("substitution", h, h2, concl_eq, eq_concl("A", "C", "m", "n", "w"),
        {"k": "k", "f": "f", "g": "g"})

    h = spec(
        points=["A", "B", "C"],
        arrows={
            "f": ("A", "B"), "g": ("A", "B"), "k": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        equations={"e": ("f", "g")},
        composites={"cf": ("f", "k", "m"), "cg": ("g", "k", "n")},
    )
    h2 = spec(
        points=["A", "B", "C"],
        arrows={
            "f": ("A", "B"), "g": ("A", "B"), "k": ("B", "C"),
            "m": ("A", "C"), "n": ("A", "C"),
        },
        equations={"e": ("f", "g"), "w": ("m", "n")},
        composites={"cf": ("f", "k", "m"), "cg": ("g", "k", "n")},
    )
    add("replacement", h, h2, concl_eq, eq_concl("A", "C", "m", "n", "w"),
        {"f": "f", "g": "g", "k": "k"})

    prd_points = ["Z", "A", "B", "P"]
    prd_arrows = {
        "p1": ("P", "A"), "p2": ("P", "B"), "u": ("Z", "A"), "v": ("Z", "B"),
    }
    prd_decl = {"prd": ("P", "A", "B", "p1", "p2")}
    h = spec(points=prd_points, arrows=prd_arrows, products=prd_decl)
    h2 = spec(
        points=prd_points,
        arrows=dict(prd_arrows, t=("Z", "P")),
        products=prd_decl,
        tuples={"tp": ("prd", "u", "v", "t")},
    )
    add("tuple-intro", h, h2, concl_arrow, arrow_concl("Z", "P", "t"),
        {"u": "u", "v": "v"})

    h = spec(
        points=prd_points,
        arrows=dict(prd_arrows, t=("Z", "P"), n=("Z", "A")),
        products=prd_decl,
        tuples={"tp": ("prd", "u", "v", "t")},
        composites={"c": ("t", "p1", "n")},
    )
    h2 = spec(
        points=prd_points,
        arrows=dict(prd_arrows, t=("Z", "P"), n=("Z", "A")),
        products=prd_decl,
        tuples={"tp": ("prd", "u", "v", "t")},
        composites={"c": ("t", "p1", "n")},
        equations={"w": ("n", "u")},
    )
    add("projection-eq", h, h2, concl_eq, eq_concl("Z", "A", "n", "u", "w"),
        {"t": "t", "u": "u"})

    h = spec(
        points=prd_points,
        arrows=dict(
            prd_arrows, s=("Z", "P"), w=("Z", "P"),
            m1=("Z", "A"), m2=("Z", "B"),
        ),
        products=prd_decl,
        composites={"c1x": ("w", "p1", "m1"), "c2x": ("w", "p2", "m2")},
        tuples={"tp": ("prd", "m1", "m2", "s")},
    )
    h2 = spec(
        points=prd_points,
        arrows=dict(
            prd_arrows, s=("Z", "P"), w=("Z", "P"),
            m1=("Z", "A"), m2=("Z", "B"),
        ),
        products=prd_decl,
        composites={"c1x": ("w", "p1", "m1"), "c2x": ("w", "p2", "m2")},
        tuples={"tp": ("prd", "m1", "m2", "s")},
        equations={"we": ("w", "s")},
    )
    add("tuple-uniqueness", h, h2, concl_eq, eq_concl("Z", "P", "w", "s", "we"),
        {"w": "w"})

    return rules


def build(budget: int = DEFAULT_BUDGET) -> Logic:
    p = _propagator()
    logic = Logic("eq", p.source, p, {})
    logic.rules.update(_rules(logic, budget))
    return logic
