"""Line-oriented text format shared by every command.

A document is a sequence of named sections.  A section starts at the
left margin with ``kind: name ...`` and owns the following lines until
the next section header.  ``#`` starts a comment, blank lines are
skipped, and ids are bare tokens: integers where they look like
integers, strings otherwise.

Section kinds and their body lines:

  graph: NAME            vertices: a b c | edges: id u v | basepoint: v
  map: NAME SRC DST      v u -> w  |  e id -> id' [+|-]  |  e id -> deg
  monodromy: NAME BASE   degree: n (fiber 1..n) or fiber: x y z
                         perm: letter (a b)(c d e)
  action: NAME SPACE     group-gen: p0 p1 ...  followed by its
                         vertex-perm: u -> w  and  edge-perm: e -> e' [+|-]
  groupoid: NAME         graph body lines; parses to the presented shape
  automaton: NAME        letters: a b | states: n | delta: s letter t
  fingroupoid: NAME      objects: a b | morphisms: id src dst
                         identity: obj id | compose: f g h

Maps, monodromy data, and actions refer to graphs defined earlier in
the same document.  Parse errors carry 1-based line numbers.
"""

import re

from .graphs import FinGraph, GraphMap, GraphError, _sort_key
from .groupoids import PresGroupoid, shape1
from .automata import SubgroupAutomaton
from .covers import MonodromyAction, CoverError
from .fingroupoids import FinGroupoid, FinGroupoidError
from .quotients import FinGroup, GraphAction, ActionError, graph_action

__all__ = [
    "ParseError", "Document", "parse_document", "serialize_document",
    "serialize_graph", "serialize_map", "serialize_monodromy",
    "serialize_action", "serialize_groupoid", "serialize_automaton",
    "serialize_fingroupoid", "cycles_of_perm",
]

SECTION_KINDS = ("graph", "map", "monodromy", "action",
                 "groupoid", "automaton", "fingroupoid")

_INT = re.compile(r"-?\d+\Z")
_CYCLE = re.compile(r"\(([^()]*)\)")
_BAD_TOKENS = {"deg", "->", "+", "-", ""}


class ParseError(ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__("line %d: %s" % (line, message))


def _atom(tok):
    return int(tok) if _INT.match(tok) else tok


def token(x):
    """Render an id for the text format; not every id is representable."""
    if isinstance(x, bool):
        raise ValueError("boolean ids are not representable")
    if isinstance(x, int):
        return str(x)
    if not isinstance(x, str):
        raise ValueError("id %r is not representable as a token" % (x,))
    if x in _BAD_TOKENS or _INT.match(x) or "(" in x or ")" in x \
            or "#" in x or any(c.isspace() for c in x):
        raise ValueError("id %r is not representable as a token" % (x,))
    return x


class Document:
    """Parsed sections in file order."""

    def __init__(self):
        self.entries = {}
        self.kinds = {}
        self.order = []

    def add(self, kind, name, obj):
        if name in self.entries:
            raise ValueError("duplicate section name %r" % (name,))
        self.entries[name] = obj
        self.kinds[name] = kind
        self.order.append(name)

    def of_kind(self, kind):
        return [n for n in self.order if self.kinds[n] == kind]

    def single(self, kind):
        names = self.of_kind(kind)
        if len(names) != 1:
            raise ValueError("document needs exactly one %s section, found %d"
                             % (kind, len(names)))
        return self.entries[names[0]]


# -- parsing ----------------------------------------------------------------


class _Section:
    def __init__(self, kind, name, header_line, args):
        self.kind = kind
        self.name = name
        self.header_line = header_line
        self.args = args
        self.rows = []          # (line_no, key, tokens)


def _split_sections(text):
    sections = []
    current = None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = line.split()
        head = toks[0]
        if not raw[0].isspace() and head.endswith(":") \
                and head[:-1] in SECTION_KINDS:
            if len(toks) < 2:
                raise ParseError(i, "section %s needs a name" % (head,))
            current = _Section(head[:-1], toks[1], i, toks[2:])
            sections.append(current)
            continue
        if current is None:
            raise ParseError(i, "content before any section header")
        key = head[:-1] if head.endswith(":") else head
        current.rows.append((i, key, toks[1:]))
    return sections


def _build_graph(sec):
    verts = []
    edges = []
    bp = None
    for line, key, toks in sec.rows:
        if key == "vertices":
            verts.extend(_atom(t) for t in toks)
        elif key == "edges":
            if len(toks) != 3:
                raise ParseError(line, "edges line wants: id tail head")
            edges.append(tuple(_atom(t) for t in toks))
        elif key == "basepoint":
            if len(toks) != 1:
                raise ParseError(line, "basepoint wants one vertex")
            bp = _atom(toks[0])
        else:
            raise ParseError(line, "unknown graph line %r" % (key,))
    try:
        return FinGraph(tuple(verts), tuple(edges), bp)
    except GraphError as e:
        raise ParseError(sec.header_line, str(e))


def _arrow(line, toks, want):
    if len(toks) < 3 or toks[1] != "->":
        raise ParseError(line, "expected: %s" % (want,))
    return toks


def _build_map(sec, doc):
    if len(sec.args) != 2:
        raise ParseError(sec.header_line, "map header wants: name src dst")
    graphs = {}
    for role, gname in zip(("source", "target"), sec.args):
        if doc.kinds.get(gname) != "graph":
            raise ParseError(sec.header_line,
                             "%s graph %r is not defined" % (role, gname))
        graphs[role] = doc.entries[gname]
    src, dst = graphs["source"], graphs["target"]
    src_vs, dst_vs = set(src.vertices), set(dst.vertices)
    src_es, dst_es = set(src.edge_ids()), set(dst.edge_ids())
    vm = {}
    em = {}
    for line, key, toks in sec.rows:
        if key == "v":
            toks = _arrow(line, toks, "v u -> w")
            u, w = _atom(toks[0]), _atom(toks[2])
            if u not in src_vs:
                raise ParseError(line, "unknown source vertex %r" % (u,))
            if w not in dst_vs:
                raise ParseError(line, "unknown target vertex %r" % (w,))
            vm[u] = w
        elif key == "e":
            toks = _arrow(line, toks, "e id -> id' [+|-] or e id -> deg")
            e = _atom(toks[0])
            if e not in src_es:
                raise ParseError(line, "unknown source edge %r" % (e,))
            if toks[2] == "deg":
                em[e] = None
            else:
                e2 = _atom(toks[2])
                if e2 not in dst_es:
                    raise ParseError(line, "unknown target edge %r" % (e2,))
                if len(toks) == 4:
                    if toks[3] not in ("+", "-"):
                        raise ParseError(line, "sign must be + or -")
                    em[e] = (e2, +1 if toks[3] == "+" else -1)
                else:
                    em[e] = e2
        else:
            raise ParseError(line, "unknown map line %r" % (key,))
    for u in src.vertices:
        if u not in vm:
            raise ParseError(sec.header_line,
                             "map %r gives no image for vertex %r"
                             % (sec.name, u))
    for e in src.edge_ids():
        if e not in em:
            raise ParseError(sec.header_line,
                             "map %r gives no image for edge %r"
                             % (sec.name, e))
    try:
        return GraphMap.build(src, dst, vm, em)
    except GraphError as e:
        raise ParseError(sec.header_line, "bad map %r: %s" % (sec.name, e))


def _parse_cycles(line, toks, points):
    text = " ".join(toks)
    stripped = _CYCLE.sub("", text).strip()
    if stripped:
        raise ParseError(line, "stray tokens in cycle spec: %r" % (stripped,))
    perm = {p: p for p in points}
    seen = set()
    for body in _CYCLE.findall(text):
        cyc = [_atom(t) for t in body.split()]
        if len(cyc) < 2:
            raise ParseError(line, "cycles need at least two points")
        for p in cyc:
            if p not in perm:
                raise ParseError(line, "unknown fiber point %r" % (p,))
            if p in seen:
                raise ParseError(line, "point %r repeated in cycles" % (p,))
            seen.add(p)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return perm


def _build_monodromy(sec, doc):
    if len(sec.args) != 1:
        raise ParseError(sec.header_line, "monodromy header wants: name base")
    gname = sec.args[0]
    if doc.kinds.get(gname) != "graph":
        raise ParseError(sec.header_line,
                         "base graph %r is not defined" % (gname,))
    base_graph = doc.entries[gname]
    if base_graph.basepoint is None:
        raise ParseError(sec.header_line, "base graph needs a basepoint")
    shape = shape1(base_graph)
    letters = shape.components[shape.comp_of[base_graph.basepoint]].letters
    fiber = None
    perm_rows = []
    for line, key, toks in sec.rows:
        if key == "degree":
            if len(toks) != 1 or not _INT.match(toks[0]) or int(toks[0]) < 1:
                raise ParseError(line, "degree wants a positive integer")
            fiber = tuple(range(1, int(toks[0]) + 1))
        elif key == "fiber":
            fiber = tuple(_atom(t) for t in toks)
        elif key == "perm":
            if not toks:
                raise ParseError(line, "perm wants a letter")
            perm_rows.append((line, _atom(toks[0]), toks[1:]))
        else:
            raise ParseError(line, "unknown monodromy line %r" % (key,))
    if fiber is None:
        raise ParseError(sec.header_line,
                         "monodromy needs a degree or fiber line")
    perms = {l: {p: p for p in fiber} for l in letters}
    for line, letter, toks in perm_rows:
        if letter not in perms:
            raise ParseError(line, "%r is not a loop letter of the base; "
                             "letters are %s" % (letter, list(letters)))
        perms[letter] = _parse_cycles(line, toks, fiber)
    try:
        return MonodromyAction(shape, base_graph.basepoint, fiber, perms)
    except CoverError as e:
        raise ParseError(sec.header_line, str(e))


def _build_action(sec, doc):
    if len(sec.args) != 1:
        raise ParseError(sec.header_line, "action header wants: name space")
    gname = sec.args[0]
    if doc.kinds.get(gname) != "graph":
        raise ParseError(sec.header_line,
                         "space graph %r is not defined" % (gname,))
    space = doc.entries[gname]
    gens = []
    blocks = []
    for line, key, toks in sec.rows:
        if key == "group-gen":
            try:
                gens.append(tuple(int(t) for t in toks))
            except ValueError:
                raise ParseError(line, "group-gen wants integer images")
            blocks.append((line, {}, {}))
        elif key in ("vertex-perm", "edge-perm"):
            if not blocks:
                raise ParseError(line, "%s before any group-gen" % (key,))
            _, vm, em = blocks[-1]
            toks = _arrow(line, toks, key + ": a -> b")
            if key == "vertex-perm":
                vm[_atom(toks[0])] = _atom(toks[2])
            elif len(toks) == 4:
                if toks[3] not in ("+", "-"):
                    raise ParseError(line, "sign must be + or -")
                em[_atom(toks[0])] = (_atom(toks[2]),
                                      +1 if toks[3] == "+" else -1)
            else:
                em[_atom(toks[0])] = _atom(toks[2])
        else:
            raise ParseError(line, "unknown action line %r" % (key,))
    degree = len(gens[0]) if gens else 1
    if any(len(g) != degree for g in gens):
        raise ParseError(sec.header_line, "generators disagree on degree")
    for line, vm, em in blocks:
        for u in space.vertices:
            if u not in vm:
                raise ParseError(line, "generator block gives no image "
                                 "for vertex %r" % (u,))
        for e in space.edge_ids():
            if e not in em:
                raise ParseError(line, "generator block gives no image "
                                 "for edge %r" % (e,))
    try:
        group = FinGroup(degree, tuple(gens))
        images = [GraphMap.build(space, space, vm, em)
                  for _, vm, em in blocks]
        return graph_action(group, space, images)
    except (ActionError, GraphError) as e:
        raise ParseError(sec.header_line, "bad action %r: %s" % (sec.name, e))


def _build_automaton(sec):
    letters = []
    n = None
    delta = {}
    for line, key, toks in sec.rows:
        if key == "letters":
            letters.extend(_atom(t) for t in toks)
        elif key == "states":
            if len(toks) != 1 or not _INT.match(toks[0]):
                raise ParseError(line, "states wants an integer")
            n = int(toks[0])
        elif key == "delta":
            if len(toks) != 3:
                raise ParseError(line, "delta line wants: state letter state")
            s, a, t = toks
            if not (_INT.match(s) and _INT.match(t)):
                raise ParseError(line, "states are integers")
            delta[(int(s), _atom(a))] = int(t)
        else:
            raise ParseError(line, "unknown automaton line %r" % (key,))
    if n is None:
        raise ParseError(sec.header_line, "automaton needs a states line")
    for (s, a), t in delta.items():
        if not (0 <= s < n and 0 <= t < n):
            raise ParseError(sec.header_line,
                             "delta state out of range in %r" % (sec.name,))
        if a not in set(letters):
            raise ParseError(sec.header_line,
                             "delta letter %r not declared" % (a,))
    try:
        return SubgroupAutomaton(tuple(letters), n, delta)
    except AssertionError:
        raise ParseError(sec.header_line,
                         "automaton %r is not folded" % (sec.name,))


def _build_fingroupoid(sec):
    objs = []
    mors = []
    src = {}
    dst = {}
    comp = {}
    ident = {}
    for line, key, toks in sec.rows:
        if key == "objects":
            objs.extend(_atom(t) for t in toks)
        elif key == "morphisms":
            if len(toks) != 3:
                raise ParseError(line, "morphisms line wants: id src dst")
            m, a, b = (_atom(t) for t in toks)
            mors.append(m)
            src[m] = a
            dst[m] = b
        elif key == "identity":
            if len(toks) != 2:
                raise ParseError(line, "identity line wants: object morphism")
            ident[_atom(toks[0])] = _atom(toks[1])
        elif key == "compose":
            if len(toks) != 3:
                raise ParseError(line, "compose line wants: f g h")
            f, g, h = (_atom(t) for t in toks)
            comp[(f, g)] = h
        else:
            raise ParseError(line, "unknown fingroupoid line %r" % (key,))
    try:
        return FinGroupoid(tuple(objs), tuple(mors), src, dst, comp, ident)
    except FinGroupoidError as e:
        raise ParseError(sec.header_line,
                         "bad fingroupoid %r: %s" % (sec.name, e))


def parse_document(text):
    doc = Document()
    for sec in _split_sections(text):
        if sec.kind == "graph":
            obj = _build_graph(sec)
        elif sec.kind == "map":
            obj = _build_map(sec, doc)
        elif sec.kind == "monodromy":
            obj = _build_monodromy(sec, doc)
        elif sec.kind == "action":
            obj = _build_action(sec, doc)
        elif sec.kind == "groupoid":
            obj = PresGroupoid(_build_graph(sec))
        elif sec.kind == "automaton":
            obj = _build_automaton(sec)
        else:
            obj = _build_fingroupoid(sec)
        try:
            doc.add(sec.kind, sec.name, obj)
        except ValueError as e:
            raise ParseError(sec.header_line, str(e))
    return doc


# -- serialization ----------------------------------------------------------


def _graph_body(g):
    out = []
    if g.vertices:
        out.append("vertices: " + " ".join(token(v) for v in g.vertices))
    for eid, u, v in g.edges:
        out.append("edges: %s %s %s" % (token(eid), token(u), token(v)))
    if g.basepoint is not None:
        out.append("basepoint: " + token(g.basepoint))
    return out


def serialize_graph(name, g):
    return "\n".join(["graph: " + token(name)] + _graph_body(g)) + "\n"


def serialize_map(name, f, src_name, dst_name):
    out = ["map: %s %s %s" % (token(name), token(src_name), token(dst_name))]
    for u in f.source.vertices:
        out.append("v %s -> %s" % (token(u), token(f.vertex_map[u])))
    for e in f.source.edge_ids():
        img = f.edge_map[e]
        if img is None:
            out.append("e %s -> deg" % (token(e),))
        else:
            out.append("e %s -> %s %s"
                       % (token(e), token(img[0]), "+" if img[1] > 0 else "-"))
    return "\n".join(out) + "\n"


def cycles_of_perm(perm):
    """Disjoint-cycle rendering of a permutation dict; fixed points
    omitted, identity rendered as the empty string."""
    seen = set()
    out = []
    for start in sorted(perm, key=_sort_key):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        out.append("(" + " ".join(token(p) for p in cyc) + ")")
    return "".join(out)


def serialize_monodromy(name, m, base_name):
    out = ["monodromy: %s %s" % (token(name), token(base_name))]
    n = len(m.fiber)
    if m.fiber == tuple(range(1, n + 1)):
        out.append("degree: %d" % n)
    else:
        out.append("fiber: " + " ".join(token(p) for p in m.fiber))
    for letter in m.letters:
        cyc = cycles_of_perm(m.perms[letter])
        if cyc:
            out.append("perm: %s %s" % (token(letter), cyc))
    return "\n".join(out) + "\n"


def serialize_action(name, a, space_name):
    out = ["action: %s %s" % (token(name), token(space_name))]
    for gen in a.group.generators:
        out.append("group-gen: " + " ".join(str(i) for i in gen))
        m = a.maps[gen]
        for u in a.space.vertices:
            out.append("vertex-perm: %s -> %s"
                       % (token(u), token(m.vertex_map[u])))
        for e in a.space.edge_ids():
            e2, s = m.edge_map[e]
            out.append("edge-perm: %s -> %s %s"
                       % (token(e), token(e2), "+" if s > 0 else "-"))
    return "\n".join(out) + "\n"


def serialize_groupoid(name, shape):
    return "\n".join(["groupoid: " + token(name)]
                     + _graph_body(shape.graph)) + "\n"


def serialize_automaton(name, a):
    out = ["automaton: " + token(name)]
    if a.letters:
        out.append("letters: " + " ".join(token(l) for l in a.letters))
    out.append("states: %d" % a.n)
    for (s, l), t in a.transitions():
        out.append("delta: %d %s %d" % (s, token(l), t))
    return "\n".join(out) + "\n"


def serialize_fingroupoid(name, q):
    out = ["fingroupoid: " + token(name)]
    if q.objects:
        out.append("objects: " + " ".join(token(o) for o in q.objects))
    for m in q.morphisms:
        out.append("morphisms: %s %s %s"
                   % (token(m), token(q.src[m]), token(q.dst[m])))
    for o in q.objects:
        out.append("identity: %s %s" % (token(o), token(q.ident[o])))
    for (f, g), h in sorted(q.comp.items(),
                            key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        out.append("compose: %s %s %s" % (token(f), token(g), token(h)))
    return "\n".join(out) + "\n"


def _find_graph_name(doc, g, what):
    for n in doc.of_kind("graph"):
        if doc.entries[n] == g:
            return n
    raise ValueError("document has no graph section for the %s" % (what,))


def serialize_document(doc):
    parts = []
    for name in doc.order:
        kind = doc.kinds[name]
        obj = doc.entries[name]
        if kind == "graph":
            parts.append(serialize_graph(name, obj))
        elif kind == "map":
            parts.append(serialize_map(
                name, obj,
                _find_graph_name(doc, obj.source, "map source"),
                _find_graph_name(doc, obj.target, "map target")))
        elif kind == "monodromy":
            parts.append(serialize_monodromy(
                name, obj, _find_graph_name(doc, obj.shape.graph,
                                            "monodromy base")))
        elif kind == "action":
            parts.append(serialize_action(
                name, obj, _find_graph_name(doc, obj.space, "action space")))
        elif kind == "groupoid":
            parts.append(serialize_groupoid(name, obj))
        elif kind == "automaton":
            parts.append(serialize_automaton(name, obj))
        else:
            parts.append(serialize_fingroupoid(name, obj))
    return "\n".join(parts)
