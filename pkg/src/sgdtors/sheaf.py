"""Sheafification and local notions over a finite site.

Everything is computed against the smallest covering sieves.  On a
finite site the plus construction is just the matching families of that
sieve, and applying it twice gives the associated sheaf.  Local
surjectivity and local weak equivalence quantify over those sieves, so
with no covering data they collapse to their sectionwise versions.
"""

from __future__ import annotations

import itertools

from .kan import TruncationError, induced_pi_map, kan_check, pi_n
from .presheaf import (
    SetPresheaf,
    SetPresheafMap,
    SSetPresheaf,
    SSetPresheafMap,
    set_presheaf_map,
    validate_set_presheaf_map,
    validate_sset_presheaf_map,
)
from .report import Check, require
from .site import FinSite, comma_site, min_sieves
from .sset import build_sset, idkey, pi0, pi0_classes


def matching_families(P: SetPresheaf, sieve):
    """All sieve-indexed families compatible under restriction.

    A family assigns m_f over the source of each f in the sieve, with
    m_{f . h} equal to the restriction of m_f along h.  Families are
    canonical tuples ((f, m_f), ...) sorted by key.
    """
    C = P.site.cat
    order = sorted(sieve, key=idkey)
    out = []

    def consistent(assign, f, m):
        V = C.src(f)
        for h in C.into(V):
            fh = C.comp[(f, h)]
            if fh in assign and assign[fh] != P.res[h][m]:
                return False
        for g in assign:
            W = C.src(g)
            for h in C.into(W):
                if C.comp[(g, h)] == f and P.res[h][assign[g]] != m:
                    return False
        return True

    def extend(assign, i):
        if i == len(order):
            out.append(tuple((f, assign[f]) for f in order))
            return
        f = order[i]
        for m in P.values[C.src(f)]:
            if consistent(assign, f, m):
                assign[f] = m
                extend(assign, i + 1)
                del assign[f]

    extend({}, 0)
    return out


def plus_construction(P: SetPresheaf, depth=2) -> SetPresheaf:
    """Sections over U are matching families for its smallest sieve."""
    site = P.site
    sieves = min_sieves(site, depth)
    C = site.cat
    values = {U: tuple(matching_families(P, sieves[U])) for U in site.objects}
    res = {}
    for f, (V, U) in C.morphisms.items():
        tab = {}
        for m in values[U]:
            lookup = dict(m)
            tab[m] = tuple(
                (g, lookup[C.comp[(f, g)]]) for g in sorted(sieves[V], key=idkey)
            )
        res[f] = tab
    return SetPresheaf(site, values, res)


def plus_unit(P: SetPresheaf, depth=2) -> SetPresheafMap:
    """Canonical map into the plus construction: restrict along the sieve."""
    sieves = min_sieves(P.site, depth)
    C = P.site.cat
    Q = plus_construction(P, depth)
    return set_presheaf_map(
        P, Q,
        lambda U, s: tuple(
            (f, P.res[f][s]) for f in sorted(sieves[U], key=idkey)
        ),
    )


def plus_map(phi: SetPresheafMap, depth=2) -> SetPresheafMap:
    """The plus construction applied to a map, componentwise on families."""
    Pp = plus_construction(phi.source, depth)
    Qp = plus_construction(phi.target, depth)
    C = phi.source.site.cat
    return SetPresheafMap(
        Pp, Qp,
        {
            U: {
                m: tuple((f, phi.components[C.src(f)][v]) for f, v in m)
                for m in Pp.values[U]
            }
            for U in Pp.site.objects
        },
    )


def sheafify(P: SetPresheaf, depth=2) -> SetPresheaf:
    return plus_construction(plus_construction(P, depth), depth)


def sheafify_unit(P: SetPresheaf, depth=2) -> SetPresheafMap:
    first = plus_unit(P, depth)
    second = plus_unit(first.target, depth)
    return SetPresheafMap(
        P,
        second.target,
        {
            U: {
                s: second.components[U][first.components[U][s]]
                for s in P.values[U]
            }
            for U in P.site.objects
        },
    )


def sheafify_map(phi: SetPresheafMap, depth=2) -> SetPresheafMap:
    return plus_map(plus_map(phi, depth), depth)


def is_separated(P: SetPresheaf, depth=2):
    unit = plus_unit(P, depth)
    return all(
        len(set(unit.components[U].values())) == len(P.values[U])
        for U in P.site.objects
    )


def is_sheaf(P: SetPresheaf, depth=2):
    unit = plus_unit(P, depth)
    Q = unit.target
    return all(
        len(set(unit.components[U].values())) == len(P.values[U]) == len(Q.values[U])
        for U in P.site.objects
    )


def local_epi_check(phi: SetPresheafMap, depth=2) -> Check:
    """Every section of the target is hit after restricting along a cover."""
    P, Q = phi.source, phi.target
    site = P.site
    sieves = min_sieves(site, depth)
    check = Check("map is a local epimorphism", True)
    ok, problems = validate_set_presheaf_map(phi)
    check.add(require(ok, "input is a presheaf map", witness=problems[:3]))
    if not ok:
        return check
    C = site.cat
    for U in site.objects:
        for s in Q.values[U]:
            hit = frozenset(
                f
                for f in C.into(U)
                if Q.res[f][s] in set(phi.components[C.src(f)].values())
            )
            if not sieves[U] <= hit:
                check.add(
                    Check(
                        f"section {s!r} over {U!r} is locally hit",
                        False,
                        witness=sorted(sieves[U] - hit, key=idkey)[:3],
                    )
                )
                return check
    check.add(Check("all sections locally hit", True))
    return check


# ---------------------------------------------------------------------------
# Pieces-of-covers resolution.


def cover_elements(site: FinSite, cover) -> SetPresheaf:
    """Disjoint union of the representables of a covering family.

    cover: {"object": base or None, "family": [...]}; with a base the
    family lists morphisms into it, without one it lists objects and the
    family covers the terminal presheaf.
    """
    C = site.cat
    base = cover.get("object")
    family = list(cover["family"])
    if base is None:
        def value(W):
            return [
                (i, h) for i, V in enumerate(family) for h in C.hom(W, V)
            ]
    else:
        def value(W):
            return [
                (i, h)
                for i, m in enumerate(family)
                for h in C.hom(W, C.src(m))
            ]

    return SetPresheaf(
        site,
        {U: tuple(sorted(value(U), key=idkey)) for U in site.objects},
        {
            f: {
                (i, h): (i, C.comp[(h, f)])
                for (i, h) in sorted(value(C.dst(f)), key=idkey)
            }
            for f in C.morphisms
        },
    )


def cover_base_map(site: FinSite, cover):
    """For a based cover, the map (i, h) -> composite into the base."""
    C = site.cat
    family = list(cover["family"])

    def base_of(elt):
        i, h = elt
        return C.comp[(family[i], h)]

    return base_of


def cech_resolution(site: FinSite, cover, trunc) -> SSetPresheaf:
    """Levelwise nerve of the chaotic groupoid on the cover's elements.

    n-simplices over W are (n + 1)-tuples of elements, constrained to a
    common composite into the base when the cover has one; faces drop an
    entry and degeneracies repeat one.
    """
    E = cover_elements(site, cover)
    based = cover.get("object") is not None
    base_of = cover_base_map(site, cover) if based else None

    values = {}
    for W in site.objects:
        elems = E.values[W]

        def levels(n, elems=elems):
            tuples = itertools.product(elems, repeat=n + 1)
            if based:
                return [t for t in tuples if len({base_of(e) for e in t}) <= 1]
            return list(tuples)

        values[W] = build_sset(
            trunc,
            levels,
            lambda n, i, t: t[:i] + t[i + 1:],
            lambda n, j, t: t[: j + 1] + t[j:],
        )

    def restrict(f, n, t):
        return tuple(E.res[f][e] for e in t)

    return SSetPresheaf(
        site,
        values,
        {
            f: {
                n: {t: restrict(f, n, t) for t in values[site.cat.dst(f)].level(n)}
                for n in range(trunc + 1)
            }
            for f in site.morphisms
        },
    )


def cech_local_epi_check(site: FinSite, cover, depth=2) -> Check:
    """The cover's elements hit the terminal presheaf locally."""
    from .presheaf import terminal_presheaf

    E = cover_elements(site, cover)
    T = terminal_presheaf(site)
    phi = set_presheaf_map(E, T, lambda U, s: "*")
    check = local_epi_check(phi, depth)
    check.claim = "cover elements surject locally onto the point"
    return check


# ---------------------------------------------------------------------------
# Local weak equivalence of simplicial presheaves.


def pi0_presheaf(Y: SSetPresheaf) -> SetPresheaf:
    """Component classes sectionwise, with induced restrictions."""
    roots = {U: pi0(Y.values[U]) for U in Y.site.objects}

    def value(U):
        return pi0_classes(Y.values[U])

    def restrict(f, r):
        V, U = Y.site.cat.morphisms[f]
        return roots[V][Y.res[f][0][r]]

    from .presheaf import set_presheaf

    return set_presheaf(Y.site, value, restrict)


def pi0_presheaf_map(phi: SSetPresheafMap) -> SetPresheafMap:
    PX = pi0_presheaf(phi.source)
    PY = pi0_presheaf(phi.target)
    roots = {U: pi0(phi.target.values[U]) for U in phi.target.site.objects}
    return set_presheaf_map(
        PX, PY, lambda U, r: roots[U][phi.components[U][0][r]]
    )


def _bijective_componentwise(phi: SetPresheafMap):
    return all(
        len(set(phi.components[U].values()))
        == len(phi.source.values[U])
        == len(phi.target.values[U])
        for U in phi.source.site.objects
    )


def _comma_pi_presheaves(phi: SSetPresheafMap, U, v, n):
    """Homotopy presheaves at degree n on the site over U, plus the map.

    v is a vertex of the source sections over U; base vertices elsewhere
    come from restricting it.  Class indices name the elements.
    """
    from .presheaf import set_presheaf
    from .sset import SSetMap

    X, Y = phi.source, phi.target
    over, forget = comma_site(X.site, U)
    groups_x, groups_y, comps = {}, {}, {}
    for f in over.objects:
        V = forget[f]
        vx = X.res[f][0][v]
        pgx = pi_n(X.values[V], vx, n)
        pgy = pi_n(Y.values[V], phi.components[V][0][vx], n)
        groups_x[f] = pgx
        groups_y[f] = pgy
        comps[f] = induced_pi_map(phi.component(V), pgx, pgy)

    def build(Z, groups):
        def value(fobj):
            return range(len(groups[fobj].classes))

        def restrict(mor, idx):
            (h, f1, f2) = mor
            rmap = SSetMap(Z.values[forget[f2]], Z.values[forget[f1]], Z.res[h])
            return induced_pi_map(rmap, groups[f2], groups[f1])[idx]

        return set_presheaf(over, value, restrict)

    PX = build(X, groups_x)
    PY = build(Y, groups_y)
    themap = set_presheaf_map(PX, PY, lambda fobj, idx: comps[fobj][idx])
    return PX, PY, themap, over


def local_weq_check(phi: SSetPresheafMap, maxdeg=None, depth=2) -> Check:
    """Sheafified components and homotopy classes match in all degrees.

    Degree n uses the comma site over each object at every source
    vertex; Kan sections are a stated precondition checked first.
    """
    X, Y = phi.source, phi.target
    trunc = next(iter(X.values.values())).trunc
    if maxdeg is None:
        maxdeg = trunc - 2
    check = Check(
        "map is a local weak equivalence", True,
        params={"maxdeg": maxdeg, "depth": depth},
    )
    ok, problems = validate_sset_presheaf_map(phi)
    check.add(require(ok, "input is a presheaf map", witness=problems[:3]))
    if not ok:
        return check
    if maxdeg >= 1:
        for U in X.site.objects:
            for label, Z in (("source", X), ("target", Y)):
                rep = kan_check(Z.values[U], maxdeg + 1)
                if not rep.ok:
                    check.add(require(False, f"{label} sections over {U!r} are fibrant",
                                      witness=rep.witness))
                    return check
        check.add(Check("sections are fibrant", True))

    sh = sheafify_map(pi0_presheaf_map(phi), depth)
    ok0 = _bijective_componentwise(sh)
    check.add(require(ok0, "associated component sheaves agree",
                      witness={U: (len(sh.source.values[U]), len(sh.target.values[U]))
                               for U in X.site.objects}))
    if not ok0:
        return check

    for n in range(1, maxdeg + 1):
        for U in X.site.objects:
            for v in X.values[U].level(0):
                try:
                    PX, PY, themap, over = _comma_pi_presheaves(phi, U, v, n)
                except TruncationError as e:
                    check.add(Check(f"degree {n} classes over {U!r}", False, witness=str(e)))
                    return check
                shn = sheafify_map(themap, depth)
                okn = _bijective_componentwise(shn)
                check.add(
                    require(
                        okn,
                        f"degree {n} class sheaves agree over {U!r} at {v!r}",
                        witness={
                            f: (len(shn.source.values[f]), len(shn.target.values[f]))
                            for f in over.objects
                        } if not okn else None,
                    )
                )
                if not okn:
                    return check
    return check
