"""Homotopy colimits of enriched set-valued diagrams.

A diagram assigns a truncated simplicial set to every object of an
enriched groupoid and a levelwise action to every hom cell.  Its total
object is a bisimplicial set whose horizontal strings pair a value
simplex with composable hom cells; the homotopy colimit is the diagonal.
The zeroth horizontal face pushes the value simplex along the first
cell, so the projection to the diagonal nerve forgets exactly the value
coordinate and its fibres recover the values on the nose.

The comma construction for an enriched functor is itself a translation
object: over a target object, take the functor that assigns to each
source object the cells into the target and lets source cells act by
precomposition with inverses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bisset import BisSSet, build_bisset, diagonal
from .groupoid import Fin2Groupoid, FinGroupoid
from .kan import fibration_check, iterated_degeneracy, weq_check
from .ordinal import OrdinalMap, coface, codegeneracy
from .report import Check, require
from .sgroupoid import (
    SgdFunctor,
    SimpGroupoid,
    _nerve_level_theta,
    b_2groupoid,
    db_sgroupoid,
    string_steps,
)
from .sset import SSetMap, TruncSSet, build_sset, point, relabel, sset_map, subcomplex
from .wbar import wbar


@dataclass
class SimplicialFunctor:
    """Levelwise action tables over an enriched groupoid.

    values: object -> TruncSSet (same truncation as the source)
    action: (a, b) -> {level: {(hom cell, value simplex): value simplex}}
    """

    source: SimpGroupoid
    values: dict
    action: dict

    def act(self, a, b, n, g, x):
        return self.action[(a, b)][n][(g, x)]


def simplicial_functor(C: SimpGroupoid, value, act) -> SimplicialFunctor:
    """Build from callables value(a) and act(a, b, n, g, x)."""
    values = {a: value(a) for a in C.objects}
    action = {
        (a, b): {
            n: {
                (g, x): act(a, b, n, g, x)
                for g in C.homs[(a, b)].level(n)
                for x in values[a].level(n)
            }
            for n in range(C.trunc + 1)
        }
        for a, b in itertools.product(C.objects, repeat=2)
    }
    return SimplicialFunctor(C, values, action)


def validate_simplicial_functor(X: SimplicialFunctor):
    from .sset import validate_sset

    problems = []
    C = X.source
    N = C.trunc
    for a in C.objects:
        V = X.values.get(a)
        if V is None or V.trunc != N:
            problems.append(f"value at {a!r} missing or mistruncated")
            continue
        ok, probs = validate_sset(V)
        if not ok:
            problems.append(f"value at {a!r}: {probs[0]}")
    if problems:
        return False, problems
    for a, b in itertools.product(C.objects, repeat=2):
        hom = C.homs[(a, b)]
        for n in range(N + 1):
            for g in hom.level(n):
                for x in X.values[a].level(n):
                    y = X.action[(a, b)].get(n, {}).get((g, x))
                    if y is None or y not in set(X.values[b].level(n)):
                        problems.append(f"action missing/mistyped at {(a, b)} level {n}")
                        return False, problems
        # action commutes with the simplicial structure in both variables
        for n in range(1, N + 1):
            for i in range(n + 1):
                for g in hom.level(n):
                    for x in X.values[a].level(n):
                        lhs = X.values[b].face(n, i, X.act(a, b, n, g, x))
                        rhs = X.act(a, b, n - 1, hom.face(n, i, g), X.values[a].face(n, i, x))
                        if lhs != rhs:
                            problems.append(f"action breaks d_{i} at {(a, b)} level {n}")
        for n in range(N):
            for j in range(n + 1):
                for g in hom.level(n):
                    for x in X.values[a].level(n):
                        lhs = X.values[b].degen(n, j, X.act(a, b, n, g, x))
                        rhs = X.act(a, b, n + 1, hom.degen(n, j, g), X.values[a].degen(n, j, x))
                        if lhs != rhs:
                            problems.append(f"action breaks s_{j} at {(a, b)} level {n}")
    if problems:
        return False, problems
    for a in C.objects:
        for n in range(N + 1):
            e = C.identity_at(a, n)
            for x in X.values[a].level(n):
                if X.act(a, a, n, e, x) != x:
                    problems.append(f"identity cell moves {x!r} at {a!r} level {n}")
    for a, b, c in itertools.product(C.objects, repeat=3):
        for n in range(N + 1):
            for g in C.homs[(b, c)].level(n):
                for f in C.homs[(a, b)].level(n):
                    gf = C.compose(a, b, c, n, g, f)
                    for x in X.values[a].level(n):
                        if X.act(a, c, n, gf, x) != X.act(b, c, n, g, X.act(a, b, n, f, x)):
                            problems.append(f"action breaks composition at {(a, b, c)} level {n}")
    return not problems, problems


def constant_functor(C: SimpGroupoid, V: TruncSSet) -> SimplicialFunctor:
    assert V.trunc == C.trunc
    return simplicial_functor(C, lambda a: V, lambda a, b, n, g, x: x)


def point_functor(C: SimpGroupoid) -> SimplicialFunctor:
    return constant_functor(C, point(C.trunc))


def corepresented_functor(C: SimpGroupoid, a) -> SimplicialFunctor:
    """b maps to the cells a -> b, with hom cells acting by composition.

    For a one-object enriched group this is the group acting on itself.
    """
    return simplicial_functor(
        C,
        lambda b: C.homs[(a, b)],
        lambda b, c, n, g, x: C.compose(a, b, c, n, g, x),
    )


# ---------------------------------------------------------------------------
# The translation total object and its diagonal.


def translation_theta(X: SimplicialFunctor, theta: OrdinalMap, q, simplex):
    """Horizontal ordinal action on (base object, value simplex, cell string).

    The value rides at position 0; when theta moves position 0 forward the
    composite of the skipped cells acts on it.
    """
    C = X.source
    a0, x, fs = simplex
    objs = [a0] + [b for _, b, _ in string_steps(C, a0, fs, q)]
    k = theta(0)
    if k == 0:
        new_x = x
    else:
        g = C.compose_path(objs[: k + 1], q, list(fs[:k]))
        new_x = X.act(a0, objs[k], q, g, x)
    _, new_fs = _nerve_level_theta(C, theta, q, (a0, fs))
    return (objs[k], new_x, new_fs)


def translation_total(X: SimplicialFunctor) -> BisSSet:
    """At bidegree (p, q): a level-q value simplex and p composable q-cells."""
    C = X.source
    N = C.trunc

    def levels(p, q):
        out = []

        def extend(a0, x, at, fs, k):
            if k == 0:
                out.append((a0, x, tuple(fs)))
                return
            for b in C.objects:
                for f in C.homs[(at, b)].level(q):
                    extend(a0, x, b, fs + [f], k - 1)

        for a0 in C.objects:
            for x in X.values[a0].level(q):
                extend(a0, x, a0, [], p)
        return out

    def hface(p, q, i, s):
        return translation_theta(X, coface(p, i), q, s)

    def hdeg(p, q, j, s):
        return translation_theta(X, codegeneracy(p, j), q, s)

    def vface(p, q, i, s):
        a0, x, fs = s
        steps = string_steps(C, a0, fs, q)
        return (
            a0,
            X.values[a0].face(q, i, x),
            tuple(C.homs[(a, b)].face(q, i, f) for a, b, f in steps),
        )

    def vdeg(p, q, j, s):
        a0, x, fs = s
        steps = string_steps(C, a0, fs, q)
        return (
            a0,
            X.values[a0].degen(q, j, x),
            tuple(C.homs[(a, b)].degen(q, j, f) for a, b, f in steps),
        )

    return build_bisset(N, levels, hface, vface, hdeg, vdeg)


def holim(X: SimplicialFunctor) -> TruncSSet:
    return diagonal(translation_total(X))


def holim_projection(X: SimplicialFunctor) -> SSetMap:
    """Forget the value coordinate; lands in the diagonal nerve."""
    E = holim(X)
    B = db_sgroupoid(X.source)
    return sset_map(E, B, lambda n, s: (s[0], s[2]))


# ---------------------------------------------------------------------------
# Set-valued translation groupoids: the one-level classical construction,
# kept separate because it doubles as an independent oracle.


def translation_groupoid(G: FinGroupoid, values, act) -> FinGroupoid:
    """Objects are pairs (object, element); arrows follow the action.

    values: object -> iterable; act(f, x) pushes x forward along f.
    """
    from .sset import idkey

    objects = tuple(
        sorted(((a, x) for a in G.objects for x in values[a]), key=idkey)
    )
    morphisms = {}
    for f, (a, b) in G.morphisms.items():
        for x in values[a]:
            morphisms[(f, x)] = ((a, x), (b, act(f, x)))
    comp = {}
    for (g, y), (yb, yc) in morphisms.items():
        for (f, x), (xa, xb) in morphisms.items():
            if xb == yb:
                comp[((g, y), (f, x))] = (G.comp[(g, f)], x)
    identities = {(a, x): (G.identities[a], x) for a, x in objects}
    inverses = {
        (f, x): (G.inverses[f], act(f, x)) for (f, x) in morphisms
    }
    return FinGroupoid(objects, morphisms, comp, identities, inverses)


# ---------------------------------------------------------------------------
# Comma constructions.


def comma_fibre_functor(F: SgdFunctor, a) -> SimplicialFunctor:
    """The diagram on F's source whose translation object is the comma
    construction over a: values are the cells into a, and a source cell
    acts by precomposing with the inverse of its image."""
    U, H = F.source, F.target

    def act(b, c, n, u, g):
        fu = F.on_hom(b, c, n, u)
        inv = H.inverse(F.ob[b], F.ob[c], n, fu)
        return H.compose(F.ob[c], F.ob[b], a, n, g, inv)

    return simplicial_functor(U, lambda b: H.homs[(F.ob[b], a)], act)


def comma_db(F: SgdFunctor, a) -> TruncSSet:
    """Diagonal of the comma construction over a.

    n-simplices are (source object, cell of hom(image, a) at level n,
    string of n source cells at level n).
    """
    return holim(comma_fibre_functor(F, a))


def comma_construction_functor(F: SgdFunctor) -> SimplicialFunctor:
    """The diagram on F's target sending a to the comma diagonal over a;
    target cells act by composing into the attached cell."""
    H = F.target

    def act(a, a2, n, h, s):
        b0, g0, us = s
        return (b0, H.compose(F.ob[b0], a, a2, n, h, g0), us)

    return simplicial_functor(H, lambda a: comma_db(F, a), act)


def comma_2groupoid(T: Fin2Groupoid, x0) -> FinGroupoid:
    """Arrows into x0, with the unique filling cell between any two.

    All filler cells exist and are unique because every arrow of T is
    invertible, so the result is the chaotic groupoid on the arrow set
    and its classifying object is contractible.
    """
    from .groupoid import trivial_groupoid

    cells = [
        c
        for x in T.objects
        for c in T.homs[(x, x0)].objects
    ]
    return trivial_groupoid(tuple(cells))


# ---------------------------------------------------------------------------
# Homotopy colimits over a 2-groupoid.  Simplices pair a value element
# with a classifying-object simplex; the element sits at the last vertex,
# the one whose outgoing connecting cell has simplicial degree zero, and
# only the last face transports it, along that single arrow.


def holim_2gpd(T: Fin2Groupoid, values, act1, trunc):
    """values: object -> tuple of elements; act1(arrow, x) the 1-cell action.

    Returns (Y, projection) with the projection landing in the
    classifying object of T.
    """
    C = b_2groupoid(T, trunc)
    W = wbar(C)

    def levels(n):
        return [
            (x, sigma)
            for sigma in W.level(n)
            for x in values[sigma[0][n]]
        ]

    def face(n, i, s):
        x, sigma = s
        new_sigma = W.face(n, i, sigma)
        if i == n:
            arrow = sigma[1][n - 1][0]
            return (act1(arrow, x), new_sigma)
        return (x, new_sigma)

    def degen(n, j, s):
        x, sigma = s
        return (x, W.degen(n, j, sigma))

    Y = build_sset(trunc, levels, face, degen)
    proj = sset_map(Y, W, lambda n, s: s[1])
    return Y, proj


def holim_2gpd_oracle_check(G: FinGroupoid, values, act1, trunc) -> Check:
    """For 1-groupoid input the two constructions agree on the nose.

    The identification relabels a simplex by transporting the element to
    the first vertex and reading the connecting arrows forward; it must
    be a simplicial bijection onto the nerve of the translation groupoid.
    """
    from .groupoid import groupoid_as_2groupoid, nerve_groupoid
    from .sset import is_bijective, validate_sset_map

    T = groupoid_as_2groupoid(G)
    Y, _ = holim_2gpd(T, values, act1, trunc)
    E = translation_groupoid(G, values, act1)
    B = nerve_groupoid(E, trunc)

    def assign(n, s):
        x, (objs, arrows) = s
        # hom-nerve cells of a discrete-hom 2-groupoid are degenerate
        # strings on a single arrow
        cells = [arrows[i][0] for i in range(n)]
        xs = [None] * (n + 1)
        xs[n] = x
        for i in range(n, 0, -1):
            xs[i - 1] = act1(cells[i - 1], xs[i])
        ms = tuple(
            (G.inverses[cells[i]], xs[i]) for i in range(n)
        )
        return ((objs[0], xs[0]), ms)

    f = sset_map(Y, B, assign)
    ok, problems = validate_sset_map(f)
    check = Check("translation nerve matches the classifying total object", ok,
                  params={"trunc": trunc}, witness=problems[:3] if not ok else None)
    check.add(require(is_bijective(f), "identification is a levelwise bijection"))
    return check


# ---------------------------------------------------------------------------
# Homotopy fibres of the projection.


def functor_transport_map(X: SimplicialFunctor, a, b, g) -> SSetMap:
    """The map of values induced by a vertex cell g: a -> b, levelwise via
    its degeneracies."""
    C = X.source
    hom = C.homs[(a, b)]

    def assign(n, x):
        return X.act(a, b, n, iterated_degeneracy(hom, g, n), x)

    return sset_map(X.values[a], X.values[b], assign)


def literal_fibre(X: SimplicialFunctor, a) -> TruncSSet:
    """Simplices of the homotopy colimit over the degenerate simplices at
    the vertex a, relabeled to bare value simplices."""
    E = holim(X)
    p = holim_projection(X)
    B = p.target
    base = {
        n: iterated_degeneracy(B, (a, ()), n) for n in range(B.trunc + 1)
    }
    sub = subcomplex(E, lambda n, s: p(n, s) == base[n])
    return relabel(sub, lambda n, s: s[1])


def homotopy_fibre_check(X: SimplicialFunctor, maxdim=None) -> Check:
    """The projection lifts horns relative to the base, its fibre over
    every vertex is the assigned value on the nose, and every vertex cell
    transports values by a weak equivalence."""
    C = X.source
    N = C.trunc
    if maxdim is None:
        maxdim = N - 1
    check = Check(
        "homotopy fibres of the translation projection",
        True,
        params={"maxdim": maxdim, "trunc": N},
    )
    ok, problems = validate_simplicial_functor(X)
    check.add(require(ok, "diagram is a valid enriched functor", witness=problems[:3]))
    if not ok:
        return check
    p = holim_projection(X)
    check.add(fibration_check(p, maxdim))
    for a in C.objects:
        fib = literal_fibre(X, a)
        check.add(
            require(
                fib == X.values[a],
                f"fibre over {a!r} equals the assigned value exactly",
                witness={"fibre_counts": fib.level_counts(),
                         "value_counts": X.values[a].level_counts()},
            )
        )
    for a, b in itertools.product(C.objects, repeat=2):
        for g in C.homs[(a, b)].level(0):
            rep = weq_check(functor_transport_map(X, a, b, g), maxdeg=max(0, N - 2))
            check.add(
                require(
                    rep.ok,
                    f"vertex cell {g!r} transports values by a weak equivalence",
                    witness=(a, b, g),
                )
            )
    return check
