"""Finite objects and morphisms of the four base categories.

Backends:
  pos   finite posets and monotone maps
  met   finite separated extended-metric spaces and nonexpansive maps
  gra   finite graphs (symmetric edge relation) and edge-preserving maps
  mgra  finite directed multigraphs and maps commuting with src/tgt

Everything is immutable after construction and canonically ordered, so
enumeration output is reproducible byte for byte.  Distances are exact
(Fraction or infinity); there is no floating point beyond `inf` itself.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InvariantViolation, SizeLimitExceeded, Violation
from .extrat import INF, as_ext, ext_add, ext_str
from . import limits as _limits


class Backend(Enum):
    POS = "pos"
    MET = "met"
    GRA = "gra"
    MGRA = "mgra"


def backend_of(tag):
    if isinstance(tag, Backend):
        return tag
    return Backend(tag)


# ---------------------------------------------------------------------------
# labels

def label_key(x):
    """Total order on labels, across the mixed types constructions produce."""
    if isinstance(x, bool):
        raise TypeError("booleans are not labels")
    if isinstance(x, int):
        return ("i", x)
    if isinstance(x, str):
        return ("s", x)
    if isinstance(x, tuple):
        return ("t", tuple(label_key(e) for e in x))
    if isinstance(x, frozenset):
        return ("f", tuple(sorted(label_key(e) for e in x)))
    raise TypeError(f"unsupported label type: {type(x).__name__}")


def label_str(x):
    """Display form; used when structured labels leave the process as JSON."""
    if isinstance(x, tuple):
        return "(" + ",".join(label_str(e) for e in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(label_str(e) for e in x)) + "}"
    return str(x)


def _sorted_labels(labels):
    return tuple(sorted(labels, key=label_key))


# ---------------------------------------------------------------------------
# objects

@dataclass(frozen=True)
class FiniteObject:
    """A validated finite object of one backend.

    `elements` are the points (for mgra: the vertices), sorted canonically.
    `structure` is a canonical hashable payload:
      pos   frozenset of (a, b) pairs meaning a <= b, reflexive pairs included
      met   tuple of ((a, b), distance) for a < b in label order
      gra   frozenset of directed (a, b) pairs, closed under symmetry
      mgra  (edges, src_pairs, tgt_pairs) with edge labels in their own namespace
    """

    backend: Backend
    elements: tuple
    structure: object

    def __post_init__(self):
        caches = {}
        if self.backend is Backend.MET:
            dist = {}
            for (a, b), d in self.structure:
                dist[(a, b)] = d
                dist[(b, a)] = d
            for a in self.elements:
                dist[(a, a)] = Fraction(0)
            caches["dist"] = dist
        elif self.backend is Backend.MGRA:
            edges, src_pairs, tgt_pairs = self.structure
            caches["src"] = dict(src_pairs)
            caches["tgt"] = dict(tgt_pairs)
            caches["edge_set"] = frozenset(edges)
        object.__setattr__(self, "_caches", caches)

    # -- accessors ---------------------------------------------------------
    @property
    def size(self):
        return len(self.elements)

    def leq(self, a, b):
        assert self.backend is Backend.POS
        return (a, b) in self.structure

    def dist(self, a, b):
        assert self.backend is Backend.MET
        return self._caches["dist"][(a, b)]

    def has_edge(self, a, b):
        assert self.backend is Backend.GRA
        return (a, b) in self.structure

    @property
    def edges(self):
        assert self.backend is Backend.MGRA
        return self.structure[0]

    def src(self, e):
        return self._caches["src"][e]

    def tgt(self, e):
        return self._caches["tgt"][e]

    def __repr__(self):
        return f"<{self.backend.value} object on {[label_str(e) for e in self.elements]}>"


def _check_pos(elements, pairs):
    elset = set(elements)
    violations = []
    rel = set(pairs)
    for a, b in rel:
        if a not in elset or b not in elset:
            violations.append(Violation("UnknownElement", (a, b)))
    if violations:
        return violations, rel
    for a in elements:
        rel.add((a, a))
    for a, b in sorted(rel, key=lambda p: (label_key(p[0]), label_key(p[1]))):
        for c, d in sorted(rel, key=lambda p: (label_key(p[0]), label_key(p[1]))):
            if b == c and (a, d) not in rel:
                violations.append(Violation("TransitivityViolation", (a, b, d)))
        if a != b and (b, a) in rel:
            violations.append(Violation("AntisymmetryViolation", (a, b)))
    return violations, rel


def pos_object(elements, leq_pairs=(), transitive_close=False):
    """Build a poset.  Reflexive pairs are implicit; transitivity and
    antisymmetry are checked unless `transitive_close` asks for the generated
    order (used for DSL contexts, where the pairs are generators)."""
    elements = _sorted_labels(elements)
    rel = set(leq_pairs)
    if transitive_close:
        rel |= {(a, a) for a in elements}
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
    violations, rel = _check_pos(elements, rel)
    if violations:
        raise InvariantViolation(violations)
    return FiniteObject(Backend.POS, elements, frozenset(rel))


def met_object(elements, entries):
    """Build a separated extended-metric space.

    `entries` maps unordered pairs to distances: an iterable of
    ((a, b), value) or of (a, b, value); value is Fraction / int / 'p/q' / 'inf'.
    Missing pairs default to infinity.
    """
    elements = _sorted_labels(elements)
    elset = set(elements)
    violations = []
    dist = {}
    for entry in entries:
        if len(entry) == 2:
            (a, b), v = entry
        else:
            a, b, v = entry
        v = as_ext(v)
        if a not in elset or b not in elset:
            violations.append(Violation("UnknownElement", (a, b)))
            continue
        if a == b:
            if v != 0:
                violations.append(Violation("DiagonalViolation", (a, v)))
            continue
        key = tuple(sorted((a, b), key=label_key))
        if key in dist and dist[key] != v:
            violations.append(Violation("SymmetryViolation", (a, b, dist[key], v)))
        dist[key] = v
    if violations:
        raise InvariantViolation(violations)
    for a, b in itertools.combinations(elements, 2):
        dist.setdefault((a, b), INF)
        if dist[(a, b)] <= 0:
            violations.append(Violation("SeparationViolation", (a, b)))
    lookup = dict(dist)
    lookup.update({(b, a): v for (a, b), v in dist.items()})
    for a in elements:
        lookup[(a, a)] = Fraction(0)
    for a, b, c in itertools.permutations(elements, 3):
        if lookup[(a, c)] > ext_add(lookup[(a, b)], lookup[(b, c)]):
            violations.append(Violation("TriangleViolation", (a, b, c)))
    if violations:
        raise InvariantViolation(violations)
    structure = tuple(sorted(dist.items(), key=lambda kv: label_key(kv[0])))
    return FiniteObject(Backend.MET, elements, structure)


def gra_object(elements, edges):
    """Build a graph.  `edges` is a directed pair list; symmetry is checked,
    not repaired (a one-sided pair is a SymmetryViolation)."""
    elements = _sorted_labels(elements)
    elset = set(elements)
    violations = []
    rel = frozenset(edges)
    for a, b in rel:
        if a not in elset or b not in elset:
            violations.append(Violation("UnknownElement", (a, b)))
        elif (b, a) not in rel:
            violations.append(Violation("SymmetryViolation", (a, b)))
    if violations:
        raise InvariantViolation(violations)
    return FiniteObject(Backend.GRA, elements, rel)


def mgra_object(vertices, edges, src, tgt):
    """Build a directed multigraph; `src`/`tgt` map each edge label to a vertex."""
    vertices = _sorted_labels(vertices)
    edges = _sorted_labels(edges)
    vset, eset = set(vertices), set(edges)
    src, tgt = dict(src), dict(tgt)
    violations = []
    for e in edges:
        for name, mapping in (("src", src), ("tgt", tgt)):
            if e not in mapping:
                violations.append(Violation("MissingIncidence", (name, e)))
            elif mapping[e] not in vset:
                violations.append(Violation("UnknownElement", (name, e, mapping[e])))
    for e in set(src) | set(tgt):
        if e not in eset:
            violations.append(Violation("UnknownEdge", (e,)))
    if violations:
        raise InvariantViolation(violations)
    structure = (
        edges,
        tuple((e, src[e]) for e in edges),
        tuple((e, tgt[e]) for e in edges),
    )
    return FiniteObject(Backend.MGRA, vertices, structure)


def object_violations(raw):
    """Structured invariant check of a raw JSON-style object description."""
    try:
        validate_object(raw)
        return []
    except InvariantViolation as exc:
        return list(exc.violations)


def validate_object(raw):
    """Build a FiniteObject from {'backend': ..., 'elements': ..., 'structure': ...}."""
    backend = backend_of(raw["backend"])
    structure = raw.get("structure", {})
    if backend is Backend.POS:
        return pos_object(raw["elements"], [tuple(p) for p in structure.get("leq", [])])
    if backend is Backend.MET:
        entries = [(e[0], e[1], as_ext(e[2])) for e in structure.get("dist", [])]
        return met_object(raw["elements"], entries)
    if backend is Backend.GRA:
        return gra_object(raw["elements"], [tuple(p) for p in structure.get("edges", [])])
    return mgra_object(
        structure.get("vertices", raw.get("elements", [])),
        structure.get("edges", []),
        structure.get("src", {}),
        structure.get("tgt", {}),
    )


def object_to_json(x):
    """JSON form; structured labels are flattened to their display strings."""
    if x.backend is Backend.POS:
        pairs = sorted((p for p in x.structure if p[0] != p[1]),
                       key=lambda p: (label_key(p[0]), label_key(p[1])))
        structure = {"leq": [[label_str(a), label_str(b)] for a, b in pairs]}
    elif x.backend is Backend.MET:
        structure = {"dist": [[label_str(a), label_str(b), ext_str(d)]
                              for (a, b), d in x.structure if d != INF]}
    elif x.backend is Backend.GRA:
        pairs = sorted(x.structure, key=lambda p: (label_key(p[0]), label_key(p[1])))
        structure = {"edges": [[label_str(a), label_str(b)] for a, b in pairs]}
    else:
        edges, src_pairs, tgt_pairs = x.structure
        structure = {
            "vertices": [label_str(v) for v in x.elements],
            "edges": [label_str(e) for e in edges],
            "src": {label_str(e): label_str(v) for e, v in src_pairs},
            "tgt": {label_str(e): label_str(v) for e, v in tgt_pairs},
        }
    return {
        "backend": x.backend.value,
        "elements": [label_str(e) for e in x.elements],
        "structure": structure,
    }


# ---------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True)
class Morphism:
    dom: FiniteObject
    cod: FiniteObject
    point_map: tuple          # sorted ((x, y), ...) pairs
    edge_map: tuple = None    # mgra only

    def __post_init__(self):
        object.__setattr__(self, "_pmap", dict(self.point_map))
        object.__setattr__(self, "_emap", dict(self.edge_map) if self.edge_map is not None else None)

    @property
    def backend(self):
        return self.dom.backend

    def __call__(self, x):
        return self._pmap[x]

    def apply_edge(self, e):
        return self._emap[e]

    def __repr__(self):
        arrows = ", ".join(f"{label_str(a)}->{label_str(b)}" for a, b in self.point_map)
        return f"<morphism {arrows or 'empty'}>"


def morphism_violations(dom, cod, pmap, emap=None):
    violations = []
    if dom.backend is not cod.backend:
        return [Violation("BackendMismatch", (dom.backend.value, cod.backend.value))]
    codset = set(cod.elements)
    for x in dom.elements:
        if x not in pmap:
            violations.append(Violation("MissingImage", (x,)))
        elif pmap[x] not in codset:
            violations.append(Violation("UnknownElement", (x, pmap[x])))
    if violations:
        return violations
    b = dom.backend
    if b is Backend.POS:
        for a, c in dom.structure:
            if not cod.leq(pmap[a], pmap[c]):
                violations.append(Violation("MonotonicityViolation", (a, c)))
    elif b is Backend.MET:
        for a, c in itertools.combinations(dom.elements, 2):
            if cod.dist(pmap[a], pmap[c]) > dom.dist(a, c):
                violations.append(Violation("NonexpansivenessViolation", (a, c)))
    elif b is Backend.GRA:
        for a, c in dom.structure:
            if not cod.has_edge(pmap[a], pmap[c]):
                violations.append(Violation("EdgeViolation", (a, c)))
    else:
        emap = emap or {}
        cod_edges = cod._caches["edge_set"]
        for e in dom.edges:
            if e not in emap:
                violations.append(Violation("MissingEdgeImage", (e,)))
            elif emap[e] not in cod_edges:
                violations.append(Violation("UnknownEdge", (e, emap[e])))
            else:
                if cod.src(emap[e]) != pmap[dom.src(e)]:
                    violations.append(Violation("SourceViolation", (e,)))
                if cod.tgt(emap[e]) != pmap[dom.tgt(e)]:
                    violations.append(Violation("TargetViolation", (e,)))
    return violations


def make_morphism(dom, cod, mapping, edge_mapping=None, check=True):
    pmap = dict(mapping)
    emap = dict(edge_mapping) if edge_mapping is not None else None
    if dom.backend is Backend.MGRA and emap is None:
        emap = {}
    if check:
        violations = morphism_violations(dom, cod, pmap, emap)
        if violations:
            raise InvariantViolation(violations)
    point_map = tuple(sorted(pmap.items(), key=lambda kv: label_key(kv[0])))
    edge_map = None
    if dom.backend is Backend.MGRA:
        edge_map = tuple(sorted(emap.items(), key=lambda kv: label_key(kv[0])))
    return Morphism(dom, cod, point_map, edge_map)


def identity(x):
    return make_morphism(x, x, {e: e for e in x.elements},
                         {e: e for e in x.edges} if x.backend is Backend.MGRA else None,
                         check=False)


def compose(g, f):
    """g after f."""
    if f.cod != g.dom:
        raise InvariantViolation([Violation("NotComposable", (f.cod, g.dom))])
    pmap = {x: g(f(x)) for x in f.dom.elements}
    emap = None
    if f.backend is Backend.MGRA:
        emap = {e: g.apply_edge(f.apply_edge(e)) for e in f.dom.edges}
    return make_morphism(f.dom, g.cod, pmap, emap, check=False)


def morphism_to_json(f):
    data = {
        "dom": object_to_json(f.dom),
        "cod": object_to_json(f.cod),
        "map": {label_str(a): label_str(b) for a, b in f.point_map},
    }
    if f.edge_map is not None:
        data["edge_map"] = {label_str(a): label_str(b) for a, b in f.edge_map}
    return data


def morphism_from_json(raw):
    dom = validate_object(raw["dom"])
    cod = validate_object(raw["cod"])
    dom_by_str = {label_str(e): e for e in dom.elements}
    cod_by_str = {label_str(e): e for e in cod.elements}
    pmap = {dom_by_str[str(k)]: cod_by_str[str(v)] for k, v in raw["map"].items()}
    emap = None
    if dom.backend is Backend.MGRA:
        dom_e = {label_str(e): e for e in dom.edges}
        cod_e = {label_str(e): e for e in cod.edges}
        emap = {dom_e[str(k)]: cod_e[str(v)] for k, v in raw.get("edge_map", {}).items()}
    return make_morphism(dom, cod, pmap, emap)


# ---------------------------------------------------------------------------
# points functor

def hom_points(x):
    """Global points: maps from the unit object, as a subset of elements.

    pos/met: all elements; gra: the loop vertices; mgra: all vertices
    (the unit is the single bare vertex)."""
    if x.backend is Backend.GRA:
        return tuple(v for v in x.elements if x.has_edge(v, v))
    return x.elements


def points_map(f):
    """The underlying function hom_points(dom) -> hom_points(cod)."""
    return {p: f(p) for p in hom_points(f.dom)}


def unit(backend):
    backend = backend_of(backend)
    if backend is Backend.POS:
        return pos_object(["*"])
    if backend is Backend.MET:
        return met_object(["*"], [])
    if backend is Backend.GRA:
        return gra_object(["*"], [("*", "*")])
    return mgra_object(["*"], [], {}, {})


def initial(backend):
    backend = backend_of(backend)
    if backend is Backend.POS:
        return pos_object([])
    if backend is Backend.MET:
        return met_object([], [])
    if backend is Backend.GRA:
        return gra_object([], [])
    return mgra_object([], [], {}, {})


def is_initial(x):
    return not x.elements and (x.backend is not Backend.MGRA or not x.edges)


# ---------------------------------------------------------------------------
# morphism enumeration

def enumerate_morphisms(x, y, limits=None):
    """All morphisms x -> y, duplicate-free, in canonical lexicographic order."""
    limits = limits or _limits.DEFAULT
    if x.backend is not y.backend:
        raise InvariantViolation([Violation("BackendMismatch", (x.backend.value, y.backend.value))])
    n, m = len(x.elements), len(y.elements)
    if m == 0:
        if n == 0:
            return [make_morphism(x, y, {}, check=False)]
        return []
    if m ** n > limits.max_maps:
        raise SizeLimitExceeded(f"{m}^{n} candidate maps exceeds cap {limits.max_maps}")

    b = x.backend
    elems = x.elements
    out = []

    def compatible(i, image, partial):
        xi = elems[i]
        if b is Backend.POS:
            if x.leq(xi, xi) and not y.leq(image, image):
                return False
            for j in range(i):
                xj = elems[j]
                if x.leq(xj, xi) and not y.leq(partial[xj], image):
                    return False
                if x.leq(xi, xj) and not y.leq(image, partial[xj]):
                    return False
        elif b is Backend.MET:
            for j in range(i):
                xj = elems[j]
                if y.dist(partial[xj], image) > x.dist(xj, xi):
                    return False
        elif b is Backend.GRA:
            if x.has_edge(xi, xi) and not y.has_edge(image, image):
                return False
            for j in range(i):
                xj = elems[j]
                if x.has_edge(xj, xi) and not y.has_edge(partial[xj], image):
                    return False
                if x.has_edge(xi, xj) and not y.has_edge(image, partial[xj]):
                    return False
        return True

    def backtrack(i, partial):
        if i == n:
            out.append(dict(partial))
            return
        xi = elems[i]
        for image in y.elements:
            if compatible(i, image, partial):
                partial[xi] = image
                backtrack(i + 1, partial)
                del partial[xi]

    backtrack(0, {})

    if b is not Backend.MGRA:
        return [make_morphism(x, y, pmap, check=False) for pmap in out]

    results = []
    y_edges_by_ends = {}
    for e in y.edges:
        y_edges_by_ends.setdefault((y.src(e), y.tgt(e)), []).append(e)
    for pmap in out:
        choices = []
        for e in x.edges:
            cands = y_edges_by_ends.get((pmap[x.src(e)], pmap[x.tgt(e)]), [])
            if not cands:
                choices = None
                break
            choices.append(cands)
        if choices is None:
            continue
        total = 1
        for c in choices:
            total *= len(c)
            if total > limits.max_maps:
                raise SizeLimitExceeded("edge-map choices exceed cap")
        for combo in itertools.product(*choices):
            emap = dict(zip(x.edges, combo))
            results.append(make_morphism(x, y, pmap, emap, check=False))
    return results


# ---------------------------------------------------------------------------
# discretization

@dataclass(frozen=True)
class Discretization:
    base: FiniteObject
    discrete: FiniteObject
    counit: Morphism


def is_discrete(x):
    """True iff x is (equal to) the discrete object on its own points."""
    return discretize(x).discrete == x


def discretize(x):
    """The discrete object on hom_points(x) with its point-identity counit."""
    pts = hom_points(x)
    b = x.backend
    if b is Backend.POS:
        disc = pos_object(pts)
    elif b is Backend.MET:
        disc = met_object(pts, [])
    elif b is Backend.GRA:
        disc = gra_object(pts, [(p, p) for p in pts])
    else:
        disc = mgra_object(pts, [], {}, {})
    counit = make_morphism(disc, x, {p: p for p in pts},
                           {} if b is Backend.MGRA else None, check=False)
    return Discretization(x, disc, counit)


# ---------------------------------------------------------------------------
# products

@dataclass(frozen=True)
class Product:
    obj: FiniteObject
    projections: tuple


def product_many(factors, backend=None, limits=None):
    """Categorical product with tuple labels; the empty product is terminal."""
    limits = limits or _limits.DEFAULT
    if not factors:
        if backend is None:
            raise ValueError("empty product needs an explicit backend")
        return Product(terminal(backend), ())
    backend = factors[0].backend
    count = 1
    for f in factors:
        count *= len(f.elements)
    if count > limits.max_elements:
        raise SizeLimitExceeded(f"product would have {count} elements")
    points = list(itertools.product(*(f.elements for f in factors)))
    if backend is Backend.POS:
        rel = [(p, q) for p in points for q in points
               if all(f.leq(a, b) for f, a, b in zip(factors, p, q))]
        obj = pos_object(points, rel)
    elif backend is Backend.MET:
        entries = []
        for p, q in itertools.combinations(points, 2):
            d = max((f.dist(a, b) for f, a, b in zip(factors, p, q)), default=Fraction(0))
            entries.append((tuple(sorted((p, q), key=label_key)), d))
        obj = met_object(points, entries)
    elif backend is Backend.GRA:
        rel = [(p, q) for p in points for q in points
               if all(f.has_edge(a, b) for f, a, b in zip(factors, p, q))]
        obj = gra_object(points, rel)
    else:
        edges = list(itertools.product(*(f.edges for f in factors)))
        if len(edges) > limits.max_elements:
            raise SizeLimitExceeded("product would have too many edges")
        src = {e: tuple(f.src(c) for f, c in zip(factors, e)) for e in edges}
        tgt = {e: tuple(f.tgt(c) for f, c in zip(factors, e)) for e in edges}
        obj = mgra_object(points, edges, src, tgt)
    projections = []
    for i, f in enumerate(factors):
        emap = {e: e[i] for e in obj.edges} if backend is Backend.MGRA else None
        projections.append(make_morphism(obj, f, {p: p[i] for p in obj.elements}, emap, check=False))
    return Product(obj, tuple(projections))


def product(x, y, limits=None):
    return product_many([x, y], limits=limits)


def terminal(backend):
    backend = backend_of(backend)
    if backend is Backend.POS:
        return pos_object(["*"])
    if backend is Backend.MET:
        return met_object(["*"], [])
    if backend is Backend.GRA:
        return gra_object(["*"], [("*", "*")])
    return mgra_object(["*"], ["loop"], {"loop": "*"}, {"loop": "*"})


# ---------------------------------------------------------------------------
# coproducts

@dataclass(frozen=True)
class Coproduct:
    obj: FiniteObject
    injections: tuple


def coproduct(parts, limits=None):
    """Disjoint union with (index, label) labels; cross distances are inf."""
    if not parts:
        raise ValueError("coproduct needs at least one part")
    backend = parts[0].backend
    points = [(i, e) for i, p in enumerate(parts) for e in p.elements]
    if backend is Backend.POS:
        rel = [((i, a), (i, b)) for i, p in enumerate(parts) for (a, b) in p.structure]
        obj = pos_object(points, rel)
    elif backend is Backend.MET:
        entries = [(((i, a), (i, b)), d)
                   for i, p in enumerate(parts) for (a, b), d in p.structure]
        obj = met_object(points, entries)
    elif backend is Backend.GRA:
        rel = [((i, a), (i, b)) for i, p in enumerate(parts) for (a, b) in p.structure]
        obj = gra_object(points, rel)
    else:
        edges = [(i, e) for i, p in enumerate(parts) for e in p.edges]
        src = {(i, e): (i, parts[i].src(e)) for (i, e) in edges}
        tgt = {(i, e): (i, parts[i].tgt(e)) for (i, e) in edges}
        obj = mgra_object(points, edges, src, tgt)
    injections = []
    for i, p in enumerate(parts):
        emap = {e: (i, e) for e in p.edges} if backend is Backend.MGRA else None
        injections.append(make_morphism(p, obj, {e: (i, e) for e in p.elements}, emap, check=False))
    return Coproduct(obj, tuple(injections))


# ---------------------------------------------------------------------------
# coequalizers

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic: smaller label wins as root
            if label_key(ra) > label_key(rb):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), set()).add(x)
        return [frozenset(g) for g in groups.values()]


def _shortest_paths(nodes, weight):
    """All-pairs shortest paths (Floyd-Warshall) over exact extended rationals."""
    d = {(a, b): (Fraction(0) if a == b else weight(a, b)) for a in nodes for b in nodes}
    for k in nodes:
        for a in nodes:
            ak = d[(a, k)]
            if ak == INF:
                continue
            for b in nodes:
                alt = ext_add(ak, d[(k, b)])
                if alt < d[(a, b)]:
                    d[(a, b)] = alt
    return d


@dataclass(frozen=True)
class Coequalizer:
    obj: FiniteObject
    quotient: Morphism


def coequalizer(f, g):
    """Coequalizer of a parallel pair f, g : A -> B.

    pos: quotient preorder, order-cycles collapsed; met: chain-infimum
    quotient metric with zero-distance classes merged; gra/mgra: elementwise.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise InvariantViolation([Violation("NotParallel", (f, g))])
    b = f.cod
    backend = b.backend
    uf = _UnionFind(b.elements)
    for a in f.dom.elements:
        uf.union(f(a), g(a))

    if backend is Backend.POS:
        classes = uf.classes()
        # generated preorder on classes, then collapse its cycles
        of = {x: next(c for c in classes if x in c) for x in b.elements}
        rel = {(c, c) for c in classes}
        rel |= {(of[x], of[y]) for (x, y) in b.structure}
        changed = True
        while changed:
            changed = False
            for p in list(rel):
                for q in list(rel):
                    if p[1] == q[0] and (p[0], q[1]) not in rel:
                        rel.add((p[0], q[1]))
                        changed = True
        cyc = _UnionFind(classes)
        for c, d in rel:
            if c != d and (d, c) in rel:
                cyc.union(c, d)
        merged = {c: frozenset().union(*grp) for grp in cyc.classes() for c in grp}
        final = sorted(set(merged.values()), key=label_key)
        order = {(merged[c], merged[d]) for (c, d) in rel}
        obj = pos_object(final, order)
        q = make_morphism(b, obj, {x: merged[of[x]] for x in b.elements}, check=False)
        return Coequalizer(obj, q)

    if backend is Backend.MET:
        classes = uf.classes()
        of = {x: next(c for c in classes if x in c) for x in b.elements}

        def base_weight(c, d):
            return min((b.dist(u, v) for u in c for v in d), default=INF)

        while True:
            paths = _shortest_paths(classes, base_weight)
            zero = [(c, d) for c, d in paths if c != d and paths[(c, d)] == 0]
            if not zero:
                break
            zf = _UnionFind(classes)
            for c, d in zero:
                zf.union(c, d)
            merged = {c: frozenset().union(*grp) for grp in zf.classes() for c in grp}
            classes = sorted(set(merged.values()), key=label_key)
            of = {x: merged[of[x]] for x in b.elements}
        entries = [((c, d), paths[(c, d)]) for c, d in itertools.combinations(classes, 2)]
        obj = met_object(classes, [(tuple(sorted(k, key=label_key)), v) for k, v in entries])
        q = make_morphism(b, obj, {x: of[x] for x in b.elements}, check=False)
        return Coequalizer(obj, q)

    if backend is Backend.GRA:
        classes = uf.classes()
        of = {x: next(c for c in classes if x in c) for x in b.elements}
        rel = {(of[x], of[y]) for (x, y) in b.structure}
        obj = gra_object(classes, rel)
        q = make_morphism(b, obj, {x: of[x] for x in b.elements}, check=False)
        return Coequalizer(obj, q)

    vuf = uf
    euf = _UnionFind(b.edges)
    for e in f.dom.edges:
        euf.union(f.apply_edge(e), g.apply_edge(e))
    vclasses = vuf.classes()
    eclasses = euf.classes()
    vof = {x: next(c for c in vclasses if x in c) for x in b.elements}
    eof = {e: next(c for c in eclasses if e in c) for e in b.edges}
    src = {}
    tgt = {}
    for c in eclasses:
        reps = {vof[b.src(e)] for e in c}
        assert len(reps) == 1, "source map not constant on an edge class"
        src[c] = reps.pop()
        reps = {vof[b.tgt(e)] for e in c}
        assert len(reps) == 1, "target map not constant on an edge class"
        tgt[c] = reps.pop()
    obj = mgra_object(vclasses, eclasses, src, tgt)
    q = make_morphism(b, obj, {x: vof[x] for x in b.elements},
                      {e: eof[e] for e in b.edges}, check=False)
    return Coequalizer(obj, q)


def quotient_distance_oracle(b, classes, start, end):
    """Independent chain-infimum check for the met quotient metric.

    Brute force over sequences of distinct classes; each hop costs the least
    representative distance.  Used only to cross-validate coequalizer output.
    """
    classes = list(classes)

    def hop(c, d):
        return min((b.dist(u, v) for u in c for v in d), default=INF)

    if start == end:
        return Fraction(0)
    best = INF
    middles = [c for c in classes if c not in (start, end)]
    for r in range(len(middles) + 1):
        for mid in itertools.permutations(middles, r):
            chain = [start, *mid, end]
            total = Fraction(0)
            for a, c in zip(chain, chain[1:]):
                total = ext_add(total, hop(a, c))
                if total >= best:
                    break
            if total < best:
                best = total
    return best


# ---------------------------------------------------------------------------
# tensor

def tensor(x, y, limits=None):
    """Monoidal product: sum metric on met; the cartesian product elsewhere."""
    if x.backend is not Backend.MET:
        return product(x, y, limits=limits).obj
    limits = limits or _limits.DEFAULT
    points = list(itertools.product(x.elements, y.elements))
    if len(points) > limits.max_elements:
        raise SizeLimitExceeded("tensor would be too large")
    entries = []
    for p, q in itertools.combinations(points, 2):
        d = ext_add(x.dist(p[0], q[0]), y.dist(p[1], q[1]))
        entries.append((tuple(sorted((p, q), key=label_key)), d))
    return met_object(points, entries)


# ---------------------------------------------------------------------------
# pullbacks

def pullback(f, g, limits=None):
    """Pullback of f : A -> C, g : B -> C with the induced structure."""
    if f.cod != g.cod:
        raise InvariantViolation([Violation("NoCommonCodomain", (f, g))])
    prod = product(f.dom, g.dom, limits=limits)
    keep = [p for p in prod.obj.elements if f(p[0]) == g(p[1])]
    if f.backend is Backend.MGRA:
        keep_edges = [e for e in prod.obj.edges
                      if f.apply_edge(e[0]) == g.apply_edge(e[1])]
        obj = mgra_object(keep, keep_edges,
                          {e: prod.obj.src(e) for e in keep_edges},
                          {e: prod.obj.tgt(e) for e in keep_edges})
        p1 = make_morphism(obj, f.dom, {p: p[0] for p in keep},
                           {e: e[0] for e in keep_edges}, check=False)
        p2 = make_morphism(obj, g.dom, {p: p[1] for p in keep},
                           {e: e[1] for e in keep_edges}, check=False)
        return obj, p1, p2
    obj = full_subobject(prod.obj, keep)
    p1 = make_morphism(obj, f.dom, {p: p[0] for p in keep}, check=False)
    p2 = make_morphism(obj, g.dom, {p: p[1] for p in keep}, check=False)
    return obj, p1, p2


def full_subobject(x, subset):
    """The full induced substructure on `subset` (mgra: all edges between kept vertices)."""
    subset = set(subset)
    b = x.backend
    if b is Backend.POS:
        return pos_object(subset, [(a, c) for (a, c) in x.structure if a in subset and c in subset])
    if b is Backend.MET:
        return met_object(subset, [((a, c), d) for (a, c), d in x.structure
                                   if a in subset and c in subset])
    if b is Backend.GRA:
        return gra_object(subset, [(a, c) for (a, c) in x.structure if a in subset and c in subset])
    edges = [e for e in x.edges if x.src(e) in subset and x.tgt(e) in subset]
    return mgra_object(subset, edges, {e: x.src(e) for e in edges}, {e: x.tgt(e) for e in edges})


def inclusion(sub, whole):
    emap = {e: e for e in sub.edges} if sub.backend is Backend.MGRA else None
    return make_morphism(sub, whole, {e: e for e in sub.elements}, emap)


def relabel(x, mapping, edge_mapping=None):
    """Isomorphic copy of x along a label bijection; returns (copy, iso)."""
    b = x.backend
    if b is Backend.POS:
        obj = pos_object([mapping[e] for e in x.elements],
                         [(mapping[a], mapping[c]) for (a, c) in x.structure])
    elif b is Backend.MET:
        obj = met_object([mapping[e] for e in x.elements],
                         [((mapping[a], mapping[c]), d) for (a, c), d in x.structure])
    elif b is Backend.GRA:
        obj = gra_object([mapping[e] for e in x.elements],
                         [(mapping[a], mapping[c]) for (a, c) in x.structure])
    else:
        edge_mapping = edge_mapping or {e: e for e in x.edges}
        obj = mgra_object([mapping[e] for e in x.elements],
                          [edge_mapping[e] for e in x.edges],
                          {edge_mapping[e]: mapping[x.src(e)] for e in x.edges},
                          {edge_mapping[e]: mapping[x.tgt(e)] for e in x.edges})
    iso = make_morphism(x, obj, mapping, edge_mapping, check=False)
    return obj, iso


# ---------------------------------------------------------------------------
# isomorphism and canonical enumeration

def canonical_key(x):
    """Label-independent canonical form: minimal serialization over relabelings."""
    n = len(x.elements)
    best = None
    for perm in itertools.permutations(range(n)):
        pos_of = {e: perm[i] for i, e in enumerate(x.elements)}
        if x.backend is Backend.POS or x.backend is Backend.GRA:
            cells = tuple(sorted((pos_of[a], pos_of[b]) for (a, b) in x.structure))
        elif x.backend is Backend.MET:
            cells = tuple(sorted(((min(pos_of[a], pos_of[b]), max(pos_of[a], pos_of[b])), d)
                                 for (a, b), d in x.structure))
        else:
            cells = tuple(sorted((pos_of[x.src(e)], pos_of[x.tgt(e)]) for e in x.edges))
        if best is None or cells < best:
            best = cells
    return (x.backend.value, n, best)


def are_isomorphic(x, y):
    if x.backend is not y.backend or len(x.elements) != len(y.elements):
        return False
    if x.backend is Backend.MGRA and len(x.edges) != len(y.edges):
        return False
    return canonical_key(x) == canonical_key(y)


def enumerate_objects(backend, max_size, grid=None, max_edges=None, up_to_iso=True):
    """All objects with at most `max_size` elements, canonical labels 0..n-1.

    met requires a distance `grid`; the off-diagonal draws from its positive
    values.  mgra is additionally bounded by `max_edges` (default 2).
    """
    backend = backend_of(backend)
    out = []
    seen = set()

    def emit(obj):
        if up_to_iso:
            key = canonical_key(obj)
            if key in seen:
                return
            seen.add(key)
        out.append(obj)

    for n in range(max_size + 1):
        labels = list(range(n))
        if backend is Backend.POS:
            offdiag = [(a, b) for a in labels for b in labels if a != b]
            for bits in itertools.product([False, True], repeat=len(offdiag)):
                rel = [p for p, keep in zip(offdiag, bits) if keep]
                try:
                    emit(pos_object(labels, rel))
                except InvariantViolation:
                    continue
        elif backend is Backend.MET:
            if grid is None:
                raise ValueError("met enumeration needs a distance grid")
            choices = sorted({as_ext(v) for v in grid if as_ext(v) > 0},
                             key=lambda v: (v == INF, v))
            pairs = list(itertools.combinations(labels, 2))
            for values in itertools.product(choices, repeat=len(pairs)):
                try:
                    emit(met_object(labels, [(p, v) for p, v in zip(pairs, values)]))
                except InvariantViolation:
                    continue
        elif backend is Backend.GRA:
            cells = [(a, b) for a in labels for b in labels if a <= b]
            for bits in itertools.product([False, True], repeat=len(cells)):
                edges = []
                for (a, b), keep in zip(cells, bits):
                    if keep:
                        edges.append((a, b))
                        if a != b:
                            edges.append((b, a))
                emit(gra_object(labels, edges))
        else:
            cap = 2 if max_edges is None else max_edges
            for k in range(cap + 1):
                if n == 0 and k > 0:
                    break
                ends = list(itertools.product(labels, labels))
                for assignment in itertools.product(ends, repeat=k):
                    edges = [f"e{i}" for i in range(k)]
                    src = {f"e{i}": assignment[i][0] for i in range(k)}
                    tgt = {f"e{i}": assignment[i][1] for i in range(k)}
                    emit(mgra_object(labels, edges, src, tgt))
    return out
