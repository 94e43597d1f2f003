"""Command-line front end.

Parses documents in the shared text format, dispatches the analyses the
library modules provide, and emits reports in two formats: a human text
rendering (with timing) and a canonical machine rendering (sorted-key
JSON with no timing, so identical inputs give byte-identical output).

Exit codes: 0 decided-pass, 1 decided-fail, 2 undecided or size-bounded,
64 usage errors, 65 parse and input-document errors.
"""

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field

from .classify import (classify, constant_fiber_criterion,
                       etale_family_check, factor0, FactorError)
from .covers import (CoverError, CoverMap, enumerate_covers, monodromy,
                     shape_of_total, total_space, universal_cover_ball)
from .dot import fin_groupoid_dot, graph_dot
from .fingroupoids import (FinGroupoid, classify_trunc, compare_modalities,
                           homotopy_pullback, nine_way, product_groupoid,
                           random_functor, random_functor_into,
                           random_groupoid)
from .graphs import GraphError, pi0
from .hfiber import gamma_is_equivalence, prism
from .quotients import (ActionError, QUOTIENT_GROUP_BOUND, SizeError,
                        fiber_sequence_check, orbit_graph,
                        quotient_is_fibration, shape_of_quotient)
from .textio import ParseError, cycles_of_perm, parse_document

__all__ = ["AnalysisRequest", "Report", "run", "main",
           "UsageError", "InputError"]


class UsageError(Exception):
    """Bad invocation: unknown command, flag, or option value."""


class InputError(Exception):
    """Well-formed invocation, unusable document content."""


_KNOWN_OPTIONS = {
    "format", "dot", "radius", "seed", "samples", "n", "vertex",
    "max_group",
}

_INT_OPTIONS = {"radius": 0, "seed": None, "samples": 1, "n": 1,
                "max_group": 1}


@dataclass(frozen=True)
class AnalysisRequest:
    """One dispatchable unit of work: a command, its parsed input
    documents, and validated options."""

    command: str
    documents: tuple = ()
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = sorted(set(self.options) - _KNOWN_OPTIONS)
        if unknown:
            raise UsageError("unknown option keys: %s" % ", ".join(unknown))
        for key, low in _INT_OPTIONS.items():
            if key not in self.options:
                continue
            v = self.options[key]
            if not isinstance(v, int) or isinstance(v, bool):
                raise UsageError("option %r wants an integer" % key)
            if low is not None and v < low:
                raise UsageError("option %r must be at least %d" % (key, low))
        fmt = self.options.get("format", "text")
        if fmt not in ("text", "json"):
            raise UsageError("format must be text or json")

    def opt(self, key, default=None):
        return self.options.get(key, default)


@dataclass
class Report:
    """Verdicts plus certificates, renderable both ways.

    `data` carries the structured result (undecided flags keep their
    bounds inside the rendered value); `elapsed` is text-only so the
    machine format stays deterministic.
    """

    command: str
    data: dict
    status: int
    lines: list
    elapsed: float = 0.0

    def machine(self):
        return json.dumps(self.data, sort_keys=True, separators=(",", ":"))

    def text(self):
        out = list(self.lines)
        out.append("elapsed: %.3fs" % self.elapsed)
        return "\n".join(out)


def _coerce(tok):
    try:
        return int(tok)
    except (TypeError, ValueError):
        return tok


def _has_undecided(x):
    if isinstance(x, str):
        return x.startswith("undecided")
    if isinstance(x, dict):
        return any(_has_undecided(v) for v in x.values())
    if isinstance(x, (list, tuple)):
        return any(_has_undecided(v) for v in x)
    return False


def _descriptive_status(data):
    return 2 if _has_undecided(data) else 0


def _write_dot(request, text):
    path = request.opt("dot")
    if path is None:
        return None
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _single(doc, kind, what):
    try:
        return doc.single(kind)
    except ValueError:
        raise InputError("document needs exactly one %s section (%s)"
                         % (kind, what))


def _flag_line(name, verdicts):
    d = verdicts.as_dict()
    return "%s: %s" % (name, " ".join("%s=%s" % (k, d[k])
                                      for k in ("modal", "connected",
                                                "etale", "equivalence",
                                                "fibration")))


def _tri(v):
    if v is None:
        return "blocked"
    return "holds" if v else "violated"


def _automaton_data(a):
    return {
        "letters": list(a.letters),
        "states": a.n,
        "complete": a.complete(),
        "index": a.index(),
        "rank": a.rank(),
        "transitions": [list(t) for t in a.transitions()],
    }


# ---------------------------------------------------------------------------
# per-command handlers; each returns (data, lines, status)

def _cmd_classify(request):
    doc = request.documents[0]
    f = _single(doc, "map", "the map to classify")
    c = classify(f)
    data = {"command": "classify",
            "levels": c.as_dict(),
            "coherence": c.coherent()}
    lines = [_flag_line("pi0", c.pi0), _flag_line("pi1", c.pi1)]
    lines += ["coherence %s: %s" % (k, _tri(v))
              for k, v in sorted(c.coherent().items())]
    return data, lines, _descriptive_status(data)


def _cmd_factor0(request):
    doc = request.documents[0]
    f = _single(doc, "map", "the map to factor")
    try:
        mid, left, right = factor0(f)
    except FactorError as e:
        data = {"command": "factor0", "ok": False, "reason": str(e)}
        return data, ["factorization failed: %s" % e], 1
    lv = classify(left).pi0
    rv = classify(right).pi0
    data = {
        "command": "factor0",
        "ok": True,
        "middle": {"vertices": len(mid.vertices),
                   "edges": len(mid.edges),
                   "components": len(pi0(mid))},
        "left": lv.as_dict(),
        "right": rv.as_dict(),
        "recomposes": left.compose(right) == f,
    }
    lines = ["middle graph: %d vertices, %d edges, %d components"
             % (len(mid.vertices), len(mid.edges), len(pi0(mid))),
             _flag_line("left (collapse)", lv),
             _flag_line("right (spread)", rv),
             "recomposes: %s" % str(data["recomposes"]).lower()]
    path = _write_dot(request, graph_dot(mid, "middle"))
    if path:
        lines.append("dot written: %s" % path)
    return data, lines, _descriptive_status(data)


def _cmd_criteria(request):
    doc = request.documents[0]
    f = _single(doc, "map", "the map to test")
    c = classify(f)
    cf = constant_fiber_criterion(f)
    ef = etale_family_check(f)
    checks = {}
    if ef != "inapplicable" and c.pi1.etale.decided:
        checks["family_matches_etale"] = (ef == c.pi1.etale.is_true)
    if (len(pi0(f.target)) == 1 and c.pi1.fibration.decided
            and c.pi1.fibration.is_true):
        checks["fibration_implies_constant_fiber"] = cf
    data = {"command": "criteria",
            "levels": c.as_dict(),
            "constant_fiber": cf,
            "etale_family": ef,
            "consistency": checks}
    lines = [_flag_line("pi0", c.pi0), _flag_line("pi1", c.pi1),
             "constant fiber signature: %s" % str(cf).lower(),
             "discrete family check: %s"
             % (ef if isinstance(ef, str) else str(ef).lower())]
    lines += ["consistency %s: %s" % (k, _tri(v))
              for k, v in sorted(checks.items())]
    if _has_undecided(data):
        return data, lines, 2
    return data, lines, 0 if all(checks.values()) else 1


def _cmd_prism(request):
    doc = request.documents[0]
    f = _single(doc, "map", "the map to analyze")
    y = request.opt("vertex")
    if y is None:
        y = f.target.basepoint
        if y is None:
            raise InputError("target has no basepoint; pass --vertex")
    else:
        y = _coerce(y)
    if y not in f.target.vertices:
        raise InputError("vertex %r is not in the target" % (y,))
    p = prism(f, y)
    cosets = p.hfib.total_cosets()
    gamma = gamma_is_equivalence(f, y)
    data = {
        "command": "prism",
        "vertex": y,
        "fiber_vertices": len(p.fiber.subgraph.vertices),
        "fiber_edges": len(p.fiber.subgraph.edges),
        "fiber_shape": [list(row) for row in p.fiber_shape.summary()],
        "symbolic_cosets": cosets,
        "triangle_commutes": p.triangle_commutes,
        "gamma_equivalence": gamma,
    }
    lines = ["fiber over %r: %d vertices, %d edges"
             % (y, data["fiber_vertices"], data["fiber_edges"]),
             "fiber shape: %s" % (p.fiber_shape.summary(),),
             "symbolic fiber cosets: %s"
             % ("infinite" if cosets is None else cosets),
             "triangle commutes: %s" % str(p.triangle_commutes).lower(),
             "comparison is equivalence: %s" % str(gamma).lower()]
    return data, lines, _descriptive_status(data)


def _cmd_covers_enumerate(request):
    doc = request.documents[0]
    g = _single(doc, "graph", "the base space")
    n = request.opt("n")
    if n is None:
        raise UsageError("covers enumerate needs --n")
    out = enumerate_covers(g, n)
    listed = [{l: cycles_of_perm(m.perms[l]) for l in m.letters}
              for m in out]
    data = {"command": "covers enumerate", "sheets": n,
            "count": len(out), "covers": listed}
    lines = ["%d marked %d-sheeted covers" % (len(out), n)]
    for i, row in enumerate(listed):
        desc = " ".join("%s=%s" % (l, c or "id")
                        for l, c in sorted(row.items()))
        lines.append("cover %d: %s" % (i, desc))
    return data, lines, _descriptive_status(data)


def _monodromy_from(doc):
    if doc.of_kind("monodromy"):
        return _single(doc, "monodromy", "the cover description")
    f = _single(doc, "map", "the covering map")
    base = f.target.basepoint
    if base is None:
        raise InputError("cover target needs a basepoint")
    return monodromy(CoverMap(f), base)


def _cmd_covers_monodromy(request):
    m = _monodromy_from(request.documents[0])
    orbits = m.orbits()
    perms = {l: cycles_of_perm(m.perms[l]) for l in m.letters}
    data = {"command": "covers monodromy", "base": m.base,
            "fiber": list(m.fiber),
            "letters": {l: perms[l] for l in m.letters},
            "orbits": [list(o) for o in orbits]}
    lines = ["base %r, fiber %s" % (m.base, list(m.fiber))]
    lines += ["letter %s: %s" % (l, perms[l] or "identity")
              for l in m.letters]
    lines.append("orbits: %s" % [list(o) for o in orbits])
    return data, lines, _descriptive_status(data)


def _cmd_covers_total(request):
    m = _monodromy_from(request.documents[0])
    cover = total_space(m)
    total = cover.source
    comps = pi0(total)
    data = {"command": "covers total",
            "vertices": len(total.vertices),
            "edges": len(total.edges),
            "components": len(comps),
            "orbits": len(m.orbits())}
    lines = ["total space: %d vertices, %d edges, %d components"
             % (len(total.vertices), len(total.edges), len(comps)),
             "monodromy orbits: %d" % len(m.orbits())]
    path = _write_dot(request, graph_dot(total, "total"))
    if path:
        lines.append("dot written: %s" % path)
    return data, lines, _descriptive_status(data)


def _cmd_covers_universal_ball(request):
    doc = request.documents[0]
    g = _single(doc, "graph", "the base space")
    if g.basepoint is None:
        raise InputError("base needs a basepoint")
    r = request.opt("radius", 3)
    U, proj = universal_cover_ball(g, g.basepoint, r)
    data = {"command": "covers universal-ball", "radius": r,
            "vertices": len(U.vertices), "edges": len(U.edges),
            "components": len(pi0(U))}
    lines = ["radius-%d ball: %d vertices, %d edges"
             % (r, len(U.vertices), len(U.edges))]
    path = _write_dot(request, graph_dot(U, "ball"))
    if path:
        lines.append("dot written: %s" % path)
    return data, lines, _descriptive_status(data)


def _cmd_covers_verify_shape(request):
    doc = request.documents[0]
    if doc.of_kind("map"):
        p = CoverMap(_single(doc, "map", "the covering map"))
    else:
        p = total_space(_monodromy_from(doc))
    rep = shape_of_total(p)
    certs = [{"orbit": list(c["orbit"]), "point": c["point"],
              "image": _automaton_data(c["image"]),
              "stabilizer": _automaton_data(c["stabilizer"]),
              "image_rank": c["image_rank"], "index": c["index"],
              "equal": c["equal"]}
             for c in rep["certificates"]]
    data = {"command": "covers verify-shape", "ok": rep["ok"],
            "components_match_orbits": rep["components_match_orbits"],
            "orbit_count": rep["orbit_count"],
            "component_count": rep["component_count"],
            "certificates": certs}
    lines = ["components match orbits: %s"
             % str(rep["components_match_orbits"]).lower(),
             "orbits %d, components %d"
             % (rep["orbit_count"], rep["component_count"])]
    for c in certs:
        lines.append(
            "orbit at %r: image rank %d, stabilizer index %s, equal %s"
            % (c["point"], c["image_rank"], c["index"],
               str(c["equal"]).lower()))
    lines.append("verdict: %s" % ("pass" if rep["ok"] else "fail"))
    return data, lines, 0 if rep["ok"] else 1


def _cmd_quotient_shape(request):
    doc = request.documents[0]
    a = _single(doc, "action", "the group action")
    bound = request.opt("max_group", QUOTIENT_GROUP_BOUND)
    q = shape_of_quotient(a, max_group_order=bound)
    if isinstance(q, FinGroupoid):
        data = {"command": "quotient shape", "kind": "groupoid",
                "objects": list(q.objects),
                "morphisms": len(q.morphisms)}
        lines = ["quotient shape: groupoid with %d objects, %d morphisms"
                 % (len(q.objects), len(q.morphisms))]
        path = _write_dot(request, fin_groupoid_dot(q, "quotient"))
        if path:
            lines.append("dot written: %s" % path)
        return data, lines, _descriptive_status(data)
    reps = q.component_reps()
    ranks = {}
    for v in reps:
        try:
            ranks[str(v)] = q.vertex_group_rank(v)
        except ActionError:
            ranks[str(v)] = "unavailable (action not free)"
    data = {"command": "quotient shape", "kind": "presented",
            "component_reps": list(reps), "ranks": ranks}
    lines = ["quotient shape: %d component(s)" % len(reps)]
    lines += ["component at %r: rank %s" % (v, ranks[str(v)])
              for v in reps]
    dot_note = None
    if request.opt("dot") is not None:
        try:
            path = _write_dot(request, graph_dot(orbit_graph(a), "orbit"))
            lines.append("dot written: %s" % path)
        except ActionError:
            dot_note = "unavailable (action not free)"
            lines.append("dot: %s" % dot_note)
    if dot_note is not None:
        data["dot"] = dot_note
    return data, lines, _descriptive_status(data)


def _cmd_quotient_verify(request):
    doc = request.documents[0]
    a = _single(doc, "action", "the group action")
    bound = request.opt("max_group", QUOTIENT_GROUP_BOUND)
    fib = quotient_is_fibration(a, max_group_order=bound)
    rows = [fiber_sequence_check(a, x, max_group_order=bound)
            for x in a.space.vertices]
    ok = fib and all(r["exact"] for r in rows)
    data = {"command": "quotient verify", "fibration": fib,
            "rows": rows, "ok": ok}
    lines = ["quotient map is a fibration: %s" % str(fib).lower()]
    for r in rows:
        lines.append(
            "vertex %r: orbit %d, stabilizer %d, group %d, exact %s"
            % (r["vertex"], r["orbit_size"], r["stabilizer_size"],
               r["group_order"], str(r["exact"]).lower()))
    lines.append("verdict: %s" % ("pass" if ok else "fail"))
    return data, lines, 0 if ok else 1


def _cmd_suite_nine_way(request):
    samples = request.opt("samples", 1000)
    seed = request.opt("seed", 0)
    rng = random.Random(seed)
    disagreements = connecting = 0
    gamma_true = gamma_false = 0
    for _ in range(samples):
        F = random_functor(rng)
        rep = nine_way(F, rng)
        if not rep["agree"]:
            disagreements += 1
        if not rep["connecting_ok"]:
            connecting += 1
        if rep["gamma_equivalence"]:
            gamma_true += 1
        else:
            gamma_false += 1
    ok = disagreements == 0 and connecting == 0
    data = {"command": "suite nine-way", "samples": samples, "seed": seed,
            "disagreements": disagreements,
            "connecting_failures": connecting,
            "gamma_true": gamma_true, "gamma_false": gamma_false,
            "ok": ok}
    lines = ["%d samples (seed %d)" % (samples, seed),
             "disagreements: %d" % disagreements,
             "connecting-map failures: %d" % connecting,
             "gamma equivalence: %d true, %d false"
             % (gamma_true, gamma_false),
             "verdict: %s" % ("pass" if ok else "fail")]
    return data, lines, 0 if ok else 1


def _cmd_suite_closure(request):
    samples = request.opt("samples", 1000)
    seed = request.opt("seed", 0)
    rng = random.Random(seed)
    fibrations = pullback_bad = composite_bad = 0
    for _ in range(samples):
        F = random_functor(rng)
        if not classify_trunc(F, 0).fibration.is_true:
            continue
        fibrations += 1
        G = random_functor_into(rng, F.target, max_objects=2,
                                max_morphisms=8)
        P, p1, p2 = homotopy_pullback(F, G)
        if not classify_trunc(p2, 0).fibration.is_true:
            pullback_bad += 1
        A = random_groupoid(rng, max_objects=2, max_morphisms=8)
        PP, fst, snd = product_groupoid(F.source, A)
        if not classify_trunc(fst.compose(F), 0).fibration.is_true:
            composite_bad += 1
    ok = pullback_bad == 0 and composite_bad == 0
    data = {"command": "suite closure", "samples": samples, "seed": seed,
            "fibrations_seen": fibrations,
            "pullback_violations": pullback_bad,
            "composite_violations": composite_bad, "ok": ok}
    lines = ["%d samples (seed %d), %d fibrations exercised"
             % (samples, seed, fibrations),
             "pullback violations: %d" % pullback_bad,
             "composite violations: %d" % composite_bad,
             "verdict: %s" % ("pass" if ok else "fail")]
    return data, lines, 0 if ok else 1


def _cmd_suite_compare(request):
    samples = request.opt("samples", 1000)
    seed = request.opt("seed", 0)
    rng = random.Random(seed)
    violations = 0
    for _ in range(samples):
        F = random_functor(rng)
        if not compare_modalities(F)["all_hold"]:
            violations += 1
    ok = violations == 0
    data = {"command": "suite compare-modalities", "samples": samples,
            "seed": seed, "violations": violations, "ok": ok}
    lines = ["%d samples (seed %d)" % (samples, seed),
             "implication violations: %d" % violations,
             "verdict: %s" % ("pass" if ok else "fail")]
    return data, lines, 0 if ok else 1


_HANDLERS = {
    "classify": (_cmd_classify, True),
    "factor0": (_cmd_factor0, True),
    "criteria": (_cmd_criteria, True),
    "prism": (_cmd_prism, True),
    "covers enumerate": (_cmd_covers_enumerate, True),
    "covers monodromy": (_cmd_covers_monodromy, True),
    "covers total": (_cmd_covers_total, True),
    "covers universal-ball": (_cmd_covers_universal_ball, True),
    "covers verify-shape": (_cmd_covers_verify_shape, True),
    "quotient shape": (_cmd_quotient_shape, True),
    "quotient verify": (_cmd_quotient_verify, True),
    "suite nine-way": (_cmd_suite_nine_way, False),
    "suite closure": (_cmd_suite_closure, False),
    "suite compare-modalities": (_cmd_suite_compare, False),
}


def run(request):
    """Dispatch one request and package the outcome as a Report."""
    if request.command not in _HANDLERS:
        raise UsageError("unknown command %r" % request.command)
    handler, wants_doc = _HANDLERS[request.command]
    if wants_doc and not request.documents:
        raise UsageError("command %r needs an input document"
                         % request.command)
    t0 = time.perf_counter()
    data, lines, status = handler(request)
    elapsed = time.perf_counter() - t0
    return Report(command=request.command, data=data, status=status,
                  lines=lines, elapsed=elapsed)


# ---------------------------------------------------------------------------
# argv plumbing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_format(p):
    p.add_argument("--format", choices=("text", "json"), default="text")


def _add_doc(p):
    p.add_argument("document", help="input file in the shared text format")


def _build_parser():
    parser = _Parser(prog="modalfib",
                     description="Modal classification toolkit for maps "
                                 "of graphs and finite groupoids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="five-way verdicts at both levels")
    _add_doc(p); _add_format(p)

    p = sub.add_parser("factor0", help="connected/discrete factorization")
    _add_doc(p); _add_format(p)
    p.add_argument("--dot", metavar="PATH")

    p = sub.add_parser("criteria", help="cross-check fiber criteria")
    _add_doc(p); _add_format(p)

    p = sub.add_parser("prism", help="fiber triangle over one vertex")
    _add_doc(p); _add_format(p)
    p.add_argument("--vertex", metavar="V")

    covers = sub.add_parser("covers", help="covering-space analyses")
    csub = covers.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("enumerate", help="all marked n-sheeted covers")
    _add_doc(p); _add_format(p)
    p.add_argument("--n", type=int, required=True, metavar="N")
    p = csub.add_parser("monodromy", help="fiber permutations of a cover")
    _add_doc(p); _add_format(p)
    p = csub.add_parser("total", help="total space of a monodromy action")
    _add_doc(p); _add_format(p)
    p.add_argument("--dot", metavar="PATH")
    p = csub.add_parser("universal-ball",
                        help="finite ball of the universal cover")
    _add_doc(p); _add_format(p)
    p.add_argument("--radius", type=int, default=3, metavar="R")
    p.add_argument("--dot", metavar="PATH")
    p = csub.add_parser("verify-shape",
                        help="certify orbits against components")
    _add_doc(p); _add_format(p)

    quot = sub.add_parser("quotient", help="group-action quotients")
    qsub = quot.add_subparsers(dest="subcommand", required=True)
    p = qsub.add_parser("shape", help="shape of the homotopy quotient")
    _add_doc(p); _add_format(p)
    p.add_argument("--dot", metavar="PATH")
    p.add_argument("--max-group", type=int, default=QUOTIENT_GROUP_BOUND,
                   metavar="N")
    p = qsub.add_parser("verify", help="fibration and fiber-sequence check")
    _add_doc(p); _add_format(p)
    p.add_argument("--max-group", type=int, default=QUOTIENT_GROUP_BOUND,
                   metavar="N")

    suite = sub.add_parser("suite", help="randomized theorem suites")
    ssub = suite.add_subparsers(dest="subcommand", required=True)
    for name, hlp in (("nine-way", "agreement of all decision routes"),
                      ("closure", "pullback and composite closure"),
                      ("compare-modalities", "level-comparison implications")):
        p = ssub.add_parser(name, help=hlp)
        _add_format(p)
        p.add_argument("--samples", type=int, default=1000, metavar="N")
        p.add_argument("--seed", type=int, default=0, metavar="S")

    return parser


def _request_from(ns):
    command = ns.command
    if getattr(ns, "subcommand", None):
        command = "%s %s" % (command, ns.subcommand)
    options = {}
    for key in ("format", "dot", "radius", "seed", "samples", "n",
                "vertex", "max_group"):
        if getattr(ns, key, None) is not None:
            options[key] = getattr(ns, key)
    documents = ()
    if getattr(ns, "document", None) is not None:
        try:
            with open(ns.document) as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError("cannot read %s: %s" % (ns.document, e.strerror))
        documents = (parse_document(text),)
    return AnalysisRequest(command=command, documents=documents,
                           options=options)


def main(argv=None):
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return 64
    except SystemExit as e:      # --help
        return e.code or 0
    try:
        request = _request_from(ns)
        report = run(request)
    except UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return 64
    except ParseError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 65
    except InputError as e:
        print("input error: %s" % e, file=sys.stderr)
        return 65
    except (GraphError, CoverError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return 65
    except SizeError as e:
        print("size bound: %s (raise with --max-group)" % e,
              file=sys.stderr)
        return 2
    except ActionError as e:
        print("input error: %s" % e, file=sys.stderr)
        return 65
    if request.opt("format", "text") == "json":
        print(report.machine())
    else:
        print(report.text())
    return report.status


if __name__ == "__main__":
    sys.exit(main())
