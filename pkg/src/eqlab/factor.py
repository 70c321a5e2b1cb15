"""The (surjection, injection) factorization machinery.

Surjections are morphisms whose underlying point function is onto; the
injection class is their unique-right-lifting orthogonal complement.  pos,
met and mgra admit closed-form injection predicates and image
factorizations; gra has no factorization system, so its injection test is
bound-relative orthogonality against enumerated surjections.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    NoFactorizationSystem,
    NonCommutingSquare,
    NotStronglyConnected,
)
from .extrat import INF
from .vbase import (
    Backend,
    backend_of,
    compose,
    coproduct,
    enumerate_morphisms,
    enumerate_objects,
    full_subobject,
    hom_points,
    identity,
    inclusion,
    is_initial,
    make_morphism,
    points_map,
)


DEFAULT_MET_GRID = (0, Fraction(1, 2), 1, 2, INF)
DEFAULT_GRA_BOUND = 2


def is_surjection(f):
    """True iff the underlying function on global points is onto."""
    image = set(points_map(f).values())
    return all(p in image for p in hom_points(f.cod))


def vertex_injective(f):
    """The looser multigraph predicate: injective on vertices only."""
    values = [f(x) for x in f.dom.elements]
    return len(values) == len(set(values))


def is_injection(g, gra_bound=DEFAULT_GRA_BOUND, limits=None):
    """Membership in the right-orthogonal class of the surjections.

    pos: full order-embedding; met: isometry onto image; mgra: vertex
    injective and edge-bijective over the vertex image.  gra: decided by
    exhaustive lifting tests against all surjections between graphs of at
    most `gra_bound` vertices (sound relative to that bound).
    """
    b = g.backend
    if b is Backend.POS:
        if not vertex_injective(g):
            return False
        return all(g.dom.leq(x, y) == g.cod.leq(g(x), g(y))
                   for x in g.dom.elements for y in g.dom.elements)
    if b is Backend.MET:
        if not vertex_injective(g):
            return False
        return all(g.dom.dist(x, y) == g.cod.dist(g(x), g(y))
                   for x, y in itertools.combinations(g.dom.elements, 2))
    if b is Backend.MGRA:
        if not vertex_injective(g):
            return False
        image = {g(x) for x in g.dom.elements}
        for u in g.dom.elements:
            for v in g.dom.elements:
                dom_edges = [e for e in g.dom.edges
                             if g.dom.src(e) == u and g.dom.tgt(e) == v]
                cod_edges = [e for e in g.cod.edges
                             if g.cod.src(e) == g(u) and g.cod.tgt(e) == g(v)]
                images = [g.apply_edge(e) for e in dom_edges]
                if sorted(map(str, images)) != sorted(map(str, cod_edges)):
                    return False
        # no stray codomain edges between image vertices beyond the bijection
        for e in g.cod.edges:
            if g.cod.src(e) in image and g.cod.tgt(e) in image:
                if e not in {g.apply_edge(d) for d in g.dom.edges}:
                    return False
        return True
    return _gra_injection_by_lifting(g, gra_bound, limits)


def _gra_injection_by_lifting(g, bound, limits=None):
    for f in _surjection_pool(Backend.GRA, bound, limits=limits):
        for u in enumerate_morphisms(f.dom, g.dom, limits=limits):
            # v is forced on the image of f; reject if ill-defined or invalid
            for v in enumerate_morphisms(f.cod, g.cod, limits=limits):
                if compose(g, u) != compose(v, f):
                    continue
                diagonals = [t for t in enumerate_morphisms(f.cod, g.dom, limits=limits)
                             if compose(t, f) == u and compose(g, t) == v]
                if len(diagonals) != 1:
                    return False
    return True


_POOL_CACHE = {}


def _surjection_pool(backend, bound, grid=DEFAULT_MET_GRID, limits=None):
    key = (backend, bound, grid)
    if key not in _POOL_CACHE:
        objs = enumerate_objects(backend, bound, grid=grid if backend is Backend.MET else None)
        pool = []
        for a in objs:
            for b in objs:
                for f in enumerate_morphisms(a, b, limits=limits):
                    if is_surjection(f):
                        pool.append(f)
        _POOL_CACHE[key] = pool
    return _POOL_CACHE[key]


# ---------------------------------------------------------------------------
# lifting squares

@dataclass(frozen=True)
class LiftingReport:
    square: tuple              # (f, g, u, v) with v.f = g.u
    diagonals: tuple           # all t with t.f = u and g.t = v


def check_unique_lifting(f, g, u, v, limits=None):
    """Exhaustive diagonal search for the square u,v : f -> g."""
    if compose(v, f) != compose(g, u):
        raise NonCommutingSquare("v.f != g.u")
    diagonals = tuple(t for t in enumerate_morphisms(f.cod, g.dom, limits=limits)
                      if compose(t, f) == u and compose(g, t) == v)
    return LiftingReport((f, g, u, v), diagonals)


def commuting_squares(f, g, limits=None):
    """All (u, v) making a commuting square from f to g."""
    out = []
    for u in enumerate_morphisms(f.dom, g.dom, limits=limits):
        gu = compose(g, u)
        for v in enumerate_morphisms(f.cod, g.cod, limits=limits):
            if compose(v, f) == gu:
                out.append((u, v))
    return out


# ---------------------------------------------------------------------------
# factorization

@dataclass(frozen=True)
class Factorization:
    original: object
    epi_part: object
    mono_part: object
    image: object


def factorize(f):
    """Image factorization f = mono_part . epi_part.

    pos/met: the image with its induced (full) structure; mgra: the full
    sub-multigraph on the vertex image.  gra raises NoFactorizationSystem.
    """
    b = f.backend
    if b is Backend.GRA:
        raise NoFactorizationSystem(
            "graphs: a regular epimorphism exists that is not a surjection")
    image_points = sorted({f(x) for x in f.dom.elements},
                          key=lambda e: str(e))
    image = full_subobject(f.cod, image_points)
    if b is Backend.MGRA:
        epi = make_morphism(f.dom, image, {x: f(x) for x in f.dom.elements},
                            {e: f.apply_edge(e) for e in f.dom.edges})
        mono = inclusion(image, f.cod)
    else:
        epi = make_morphism(f.dom, image, {x: f(x) for x in f.dom.elements})
        mono = inclusion(image, f.cod)
    return Factorization(f, epi, mono, image)


# ---------------------------------------------------------------------------
# strong connectedness and split coproduct injections

def is_strongly_connected(backend, size_bound, grid=DEFAULT_MET_GRID,
                          max_edges=None, limits=None):
    """Check hom(K, K') nonempty for all pairs with K' non-initial, up to bound.

    Returns (verdict, witness) where witness is a failing pair or None.
    """
    backend = backend_of(backend)
    objs = enumerate_objects(backend, size_bound,
                             grid=grid if backend is Backend.MET else None,
                             max_edges=max_edges)
    for k in objs:
        for k2 in objs:
            if is_initial(k2):
                continue
            if not enumerate_morphisms(k, k2, limits=limits):
                return False, (k, k2)
    return True, None


def split_coproduct_injection(parts, index, limits=None):
    """A retraction of the coproduct injection of `parts[index]`.

    Built from a cocone into the chosen part with the identity at `index`;
    raises NotStronglyConnected when some other part has no morphism there.
    """
    for p in parts:
        if is_initial(p):
            raise ValueError("all parts must be non-initial")
    target = parts[index]
    cop = coproduct(parts)
    legs = []
    for i, p in enumerate(parts):
        if i == index:
            legs.append(identity(target))
            continue
        hom = enumerate_morphisms(p, target, limits=limits)
        if not hom:
            raise NotStronglyConnected((p, target))
        legs.append(hom[0])
    pmap = {}
    emap = {} if cop.obj.backend is Backend.MGRA else None
    for i, p in enumerate(parts):
        for e in p.elements:
            pmap[(i, e)] = legs[i](e)
        if emap is not None:
            for e in p.edges:
                emap[(i, e)] = legs[i].apply_edge(e)
    retraction = make_morphism(cop.obj, target, pmap, emap)
    assert compose(retraction, cop.injections[index]) == identity(target)
    return retraction
