"""Presheaves on a finite site, stored as explicit tables.

Four value kinds cover everything downstream: plain sets, finite
groups, truncated simplicial sets, and enriched groupoids.  Restriction
tables are indexed by the morphism being restricted along: res[f] for
f: V -> U carries sections over U to sections over V.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .groupoid import FinGroup
from .sgroupoid import SgdFunctor, SimpGroupoid, validate_sgd_functor
from .site import FinSite
from .sset import SSetMap, TruncSSet, idkey, validate_sset_map


@dataclass
class SetPresheaf:
    site: FinSite
    values: dict   # object -> tuple
    res: dict      # morphism -> {section over dst -> section over src}

    def value(self, U):
        return self.values[U]

    def restrict(self, f, s):
        return self.res[f][s]


def set_presheaf(site, value, restrict):
    """Build from callables value(U) and restrict(f, s)."""
    values = {U: tuple(sorted(value(U), key=idkey)) for U in site.objects}
    res = {
        f: {s: restrict(f, s) for s in values[site.cat.dst(f)]}
        for f in site.morphisms
    }
    return SetPresheaf(site, values, res)


def validate_set_presheaf(P: SetPresheaf):
    problems = []
    C = P.site.cat
    for f, (V, U) in C.morphisms.items():
        tab = P.res.get(f)
        if tab is None:
            problems.append(f"no restriction along {f!r}")
            continue
        for s in P.values[U]:
            if s not in tab or tab[s] not in set(P.values[V]):
                problems.append(f"restriction along {f!r} mistyped at {s!r}")
    if problems:
        return False, problems
    for U in C.objects:
        e = C.identities[U]
        for s in P.values[U]:
            if P.res[e][s] != s:
                problems.append(f"identity restriction moves {s!r} at {U!r}")
    for f, (V, U) in C.morphisms.items():
        for g, (W, V2) in C.morphisms.items():
            if V2 != V:
                continue
            fg = C.comp[(f, g)]
            for s in P.values[U]:
                if P.res[fg][s] != P.res[g][P.res[f][s]]:
                    problems.append(f"restrictions break composition {f!r},{g!r}")
    return not problems, problems


def terminal_presheaf(site) -> SetPresheaf:
    return set_presheaf(site, lambda U: ("*",), lambda f, s: "*")


def yoneda(site, U) -> SetPresheaf:
    """Sections over V are the morphisms V -> U."""
    C = site.cat
    return set_presheaf(
        site, lambda V: C.hom(V, U), lambda f, h: C.comp[(h, f)]
    )


def product_set_presheaf(P: SetPresheaf, Q: SetPresheaf) -> SetPresheaf:
    return set_presheaf(
        P.site,
        lambda U: itertools.product(P.values[U], Q.values[U]),
        lambda f, s: (P.res[f][s[0]], Q.res[f][s[1]]),
    )


@dataclass
class SetPresheafMap:
    source: SetPresheaf
    target: SetPresheaf
    components: dict   # object -> {section -> section}

    def at(self, U, s):
        return self.components[U][s]


def set_presheaf_map(P, Q, component):
    return SetPresheafMap(
        P, Q,
        {U: {s: component(U, s) for s in P.values[U]} for U in P.site.objects},
    )


def validate_set_presheaf_map(phi: SetPresheafMap):
    P, Q = phi.source, phi.target
    problems = []
    for U in P.site.objects:
        tab = phi.components.get(U)
        if tab is None:
            problems.append(f"no component at {U!r}")
            continue
        for s in P.values[U]:
            if s not in tab or tab[s] not in set(Q.values[U]):
                problems.append(f"component at {U!r} mistyped at {s!r}")
    if problems:
        return False, problems
    for f, (V, U) in P.site.cat.morphisms.items():
        for s in P.values[U]:
            if phi.components[V][P.res[f][s]] != Q.res[f][phi.components[U][s]]:
                problems.append(f"naturality fails along {f!r} at {s!r}")
    return not problems, problems


def enumerate_presheaf_maps(P: SetPresheaf, Q: SetPresheaf, limit=None):
    """All natural maps P -> Q, by backtracking over sections."""
    keys = [
        (U, s)
        for U in sorted(P.site.objects, key=idkey)
        for s in P.values[U]
    ]
    C = P.site.cat
    out = []

    def consistent(assign, U, s, t):
        for f, (V, U2) in C.morphisms.items():
            if U2 == U:
                down = (V, P.res[f][s])
                if down in assign and assign[down] != Q.res[f][t]:
                    return False
        for f, (V2, W) in C.morphisms.items():
            if V2 != U:
                continue
            for r in P.values[W]:
                if P.res[f][r] == s and (W, r) in assign and Q.res[f][assign[(W, r)]] != t:
                    return False
        return True

    def extend(assign, i):
        if limit is not None and len(out) >= limit:
            return
        if i == len(keys):
            out.append(
                SetPresheafMap(
                    P, Q,
                    {
                        U: {s: assign[(U, s)] for s in P.values[U]}
                        for U in P.site.objects
                    },
                )
            )
            return
        U, s = keys[i]
        for t in Q.values[U]:
            if consistent(assign, U, s, t):
                assign[(U, s)] = t
                extend(assign, i + 1)
                del assign[(U, s)]

    extend({}, 0)
    return out


# ---------------------------------------------------------------------------
# Group-valued presheaves.


@dataclass
class GroupPresheaf:
    site: FinSite
    values: dict   # object -> FinGroup
    res: dict      # morphism -> {element -> element}

    def underlying(self) -> SetPresheaf:
        return SetPresheaf(
            self.site,
            {U: tuple(F.elements) for U, F in self.values.items()},
            self.res,
        )


def validate_group_presheaf(G: GroupPresheaf):
    ok, problems = validate_set_presheaf(G.underlying())
    if not ok:
        return False, problems
    C = G.site.cat
    for f, (V, U) in C.morphisms.items():
        FU, FV = G.values[U], G.values[V]
        for a, b in itertools.product(FU.elements, repeat=2):
            if G.res[f][FU.mul[(a, b)]] != FV.mul[(G.res[f][a], G.res[f][b])]:
                problems.append(f"restriction along {f!r} is not a homomorphism")
    return not problems, problems


def constant_group_presheaf(site, F: FinGroup) -> GroupPresheaf:
    return GroupPresheaf(
        site,
        {U: F for U in site.objects},
        {f: {g: g for g in F.elements} for f in site.morphisms},
    )


def section_group(G: GroupPresheaf, F: SetPresheaf):
    """The group of maps F -> underlying(G), multiplied pointwise.

    Elements are canonical tuples ((U, s, value), ...) sorted by key.
    """
    maps = enumerate_presheaf_maps(F, G.underlying())
    elements = []
    from_map = {}
    for phi in maps:
        key = tuple(
            (U, s, phi.components[U][s])
            for U in sorted(F.site.objects, key=idkey)
            for s in F.values[U]
        )
        elements.append(key)
        from_map[key] = phi
    elements = sorted(elements, key=idkey)

    def mul(k1, k2):
        return tuple(
            (U, s, G.values[U].mul[(v1, v2)])
            for (U, s, v1), (_, _, v2) in zip(k1, k2)
        )

    from .groupoid import make_group

    return make_group("sections", elements, mul), from_map


# ---------------------------------------------------------------------------
# Simplicial-set-valued presheaves.


@dataclass
class SSetPresheaf:
    site: FinSite
    values: dict   # object -> TruncSSet
    res: dict      # morphism -> {dim: {id: id}}

    def res_map(self, f) -> SSetMap:
        V, U = self.site.cat.morphisms[f]
        return SSetMap(self.values[U], self.values[V], self.res[f])

    def restrict(self, f, n, x):
        return self.res[f][n][x]


def sset_presheaf(site, value, restrict):
    """Build from callables value(U) -> TruncSSet, restrict(f, n, x)."""
    values = {U: value(U) for U in site.objects}
    res = {}
    for f, (V, U) in site.cat.morphisms.items():
        res[f] = {
            n: {x: restrict(f, n, x) for x in values[U].level(n)}
            for n in range(values[U].trunc + 1)
        }
    return SSetPresheaf(site, values, res)


def validate_sset_presheaf(Y: SSetPresheaf):
    from .sset import validate_sset

    problems = []
    C = Y.site.cat
    truncs = {X.trunc for X in Y.values.values()}
    if len(truncs) != 1:
        return False, ["sections have mixed truncations"]
    for U, X in Y.values.items():
        ok, probs = validate_sset(X)
        if not ok:
            problems.append(f"sections over {U!r}: {probs[0]}")
    if problems:
        return False, problems
    for f in C.morphisms:
        ok, probs = validate_sset_map(Y.res_map(f))
        if not ok:
            problems.append(f"restriction along {f!r}: {probs[0]}")
    if problems:
        return False, problems
    for U in C.objects:
        e = C.identities[U]
        for n in range(Y.values[U].trunc + 1):
            for x in Y.values[U].level(n):
                if Y.res[e][n][x] != x:
                    problems.append(f"identity restriction moves {x!r} at {U!r}")
    for f, (V, U) in C.morphisms.items():
        for g, (W, V2) in C.morphisms.items():
            if V2 != V:
                continue
            fg = C.comp[(f, g)]
            for n in range(Y.values[U].trunc + 1):
                for x in Y.values[U].level(n):
                    if Y.res[fg][n][x] != Y.res[g][n][Y.res[f][n][x]]:
                        problems.append(f"restrictions break composition {f!r},{g!r}")
    return not problems, problems


def constant_sset_presheaf(site, X: TruncSSet) -> SSetPresheaf:
    return SSetPresheaf(
        site,
        {U: X for U in site.objects},
        {
            f: {n: {x: x for x in X.level(n)} for n in range(X.trunc + 1)}
            for f in site.morphisms
        },
    )


def terminal_sset_presheaf(site, trunc) -> SSetPresheaf:
    from .sset import point

    return constant_sset_presheaf(site, point(trunc))


def yoneda_sset_presheaf(site, U, trunc) -> SSetPresheaf:
    """The represented presheaf viewed as discrete simplicial sets."""
    from .sset import build_sset

    P = yoneda(site, U)

    def value(V):
        elems = P.values[V]
        return build_sset(trunc, lambda n: elems, lambda n, i, x: x, lambda n, j, x: x)

    return sset_presheaf(site, value, lambda f, n, x: P.res[f][x])


@dataclass
class SSetPresheafMap:
    source: SSetPresheaf
    target: SSetPresheaf
    components: dict   # object -> {dim: {id: id}}

    def component(self, U) -> SSetMap:
        return SSetMap(self.source.values[U], self.target.values[U], self.components[U])

    def at(self, U, n, x):
        return self.components[U][n][x]


def sset_presheaf_map(Y, Z, component):
    """Build from a callable component(U, n, x)."""
    comps = {}
    for U in Y.site.objects:
        X = Y.values[U]
        comps[U] = {
            n: {x: component(U, n, x) for x in X.level(n)}
            for n in range(X.trunc + 1)
        }
    return SSetPresheafMap(Y, Z, comps)


def validate_sset_presheaf_map(phi: SSetPresheafMap):
    Y, Z = phi.source, phi.target
    problems = []
    for U in Y.site.objects:
        ok, probs = validate_sset_map(phi.component(U))
        if not ok:
            problems.append(f"component at {U!r}: {probs[0]}")
    if problems:
        return False, problems
    for f, (V, U) in Y.site.cat.morphisms.items():
        for n in range(Y.values[U].trunc + 1):
            for x in Y.values[U].level(n):
                if phi.components[V][n][Y.res[f][n][x]] != Z.res[f][n][phi.components[U][n][x]]:
                    problems.append(f"naturality fails along {f!r} at dim {n}")
    return not problems, problems


# ---------------------------------------------------------------------------
# Enriched-groupoid-valued presheaves.


@dataclass
class SgdPresheaf:
    site: FinSite
    values: dict   # object -> SimpGroupoid
    res: dict      # morphism -> SgdFunctor

    def restrict_ob(self, f, a):
        return self.res[f].ob[a]

    def restrict_cell(self, f, a, b, n, c):
        return self.res[f].on_hom(a, b, n, c)


def validate_sgd_presheaf(Q: SgdPresheaf):
    from .sgroupoid import validate_sgroupoid

    problems = []
    C = Q.site.cat
    for U, H in Q.values.items():
        ok, probs = validate_sgroupoid(H)
        if not ok:
            problems.append(f"sections over {U!r}: {probs[0]}")
    if problems:
        return False, problems
    for f, (V, U) in C.morphisms.items():
        F = Q.res[f]
        if F.source is not Q.values[U] or F.target is not Q.values[V]:
            problems.append(f"restriction along {f!r} connects the wrong sections")
            continue
        ok, probs = validate_sgd_functor(F)
        if not ok:
            problems.append(f"restriction along {f!r}: {probs[0]}")
    if problems:
        return False, problems
    for U in C.objects:
        e = C.identities[U]
        F = Q.res[e]
        if any(F.ob[a] != a for a in Q.values[U].objects):
            problems.append(f"identity restriction moves objects at {U!r}")
        H = Q.values[U]
        for a, b in itertools.product(H.objects, repeat=2):
            for n in range(H.trunc + 1):
                for c in H.homs[(a, b)].level(n):
                    if F.on_hom(a, b, n, c) != c:
                        problems.append(f"identity restriction moves cells at {U!r}")
    for f, (V, U) in C.morphisms.items():
        for g, (W, V2) in C.morphisms.items():
            if V2 != V:
                continue
            fg = C.comp[(f, g)]
            Ff, Fg, Ffg = Q.res[f], Q.res[g], Q.res[fg]
            H = Q.values[U]
            if any(Ffg.ob[a] != Fg.ob[Ff.ob[a]] for a in H.objects):
                problems.append(f"object restrictions break composition {f!r},{g!r}")
                continue
            for a, b in itertools.product(H.objects, repeat=2):
                for n in range(H.trunc + 1):
                    for c in H.homs[(a, b)].level(n):
                        lhs = Ffg.on_hom(a, b, n, c)
                        rhs = Fg.on_hom(Ff.ob[a], Ff.ob[b], n, Ff.on_hom(a, b, n, c))
                        if lhs != rhs:
                            problems.append(f"cell restrictions break composition {f!r},{g!r}")
    return not problems, problems


def constant_sgd_presheaf(site, H: SimpGroupoid) -> SgdPresheaf:
    from .sgroupoid import sgd_functor

    ident = sgd_functor(H, H, lambda a: a, lambda a, b, n, c: c)
    return SgdPresheaf(site, {U: H for U in site.objects}, {f: ident for f in site.morphisms})
