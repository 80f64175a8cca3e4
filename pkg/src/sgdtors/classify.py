"""Classification runs for every torsor flavour.

Each run computes two sides and matches them class by class:

* the torsor side enumerates a family of representatives and groups
  them into isomorphism classes by searching for equivariant maps;
* the maps side enumerates strict presheaf maps from the covering
  resolution of the point into the flavour's classifying object and
  groups them into homotopy classes over the cylinder.

The bridge in both directions is the transition cocycle of a chosen
local section: a torsor yields a classifying map on the nose, and the
map's homotopy class is located among the enumerated ones.  The report
fails loudly whenever the two sides disagree.
"""

from __future__ import annotations

import itertools

from .bundles import (
    SgdDiagram,
    SgdPresheafMap,
    cech_sgd_presheaf,
    corepresented_diagram,
    enumerate_sgd_presheaf_maps,
    level0_group_torsor,
    psi_sgd,
    sgd_diagram_maps,
    sgd_torsor_check,
    sgroup_torsor_check,
    twisted_sgroup_action,
    twisted_two_gpd_action,
    two_gpd_action_maps,
    two_gpd_display,
    two_gpd_torsor_check,
    validate_sgd_diagram,
    vertex_group_presheaf,
)
from .groupoid import FinGroup, group_as_2groupoid
from .holim import holim_2gpd
from .kan import enumerate_sset_maps
from .presheaf import (
    GroupPresheaf,
    SgdPresheaf,
    SSetPresheaf,
    SSetPresheafMap,
    constant_group_presheaf,
    validate_sset_presheaf_map,
)
from .report import Check, require
from .sgroupoid import string_steps
from .sheaf import cech_resolution, cover_elements
from .sset import delta, sset_map, sset_product
from .torsors import (
    ActionTorsor,
    GroupoidPresheaf,
    action_to_bundle,
    action_torsor_check,
    action_torsor_maps,
    bg_presheaf,
    bundle_to_action,
    bundle_torsor_check,
    db_presheaf,
    enumerate_action_torsors,
    enumerate_group_cochains,
    enumerate_group_torsors,
    group_presheaf_as_groupoid,
    group_torsor_check,
    group_torsor_maps,
    group_torsor_to_action,
    h1_cech_classes,
    torsor_cech_class,
    wbar_presheaf,
)

KINDS = (
    "group",
    "groupoid-action",
    "groupoid-bundle",
    "2gpd",
    "sgroup",
    "sgpd",
)


def star_cover(site):
    """The designated covering family of the terminal presheaf."""
    return {"object": None, "family": list(site.star_covers[0])}


# ---------------------------------------------------------------------------
# strict presheaf maps and homotopy classes of them


def _natural_components(Y: SSetPresheaf, Z: SSetPresheaf, comps) -> bool:
    for f, (V, U) in Y.site.cat.morphisms.items():
        X = Y.values[U]
        for n in range(X.trunc + 1):
            for x in X.level(n):
                if Z.res[f][n][comps[U][n][x]] != comps[V][n][Y.res[f][n][x]]:
                    return False
    return True


def _components_of(Y: SSetPresheaf, per_section) -> dict:
    return {
        U: {
            n: {x: per_section[U](n, x) for x in Y.values[U].level(n)}
            for n in range(Y.values[U].trunc + 1)
        }
        for U in Y.site.objects
    }


def enumerate_sset_presheaf_maps(Y: SSetPresheaf, Z: SSetPresheaf, bound=None):
    """All strict presheaf maps: sectionwise simplicial maps that are
    natural along every site morphism."""
    site = Y.site
    slots = []
    total = 1
    for U in site.objects:
        maps_U = enumerate_sset_maps(Y.values[U], Z.values[U])
        if not maps_U:
            return []
        slots.append(maps_U)
        total *= len(maps_U)
        if bound is not None and total > bound:
            raise ValueError(
                f"presheaf map enumeration needs {total} candidates, bound is {bound}"
            )
    out = []
    for combo in itertools.product(*slots):
        per = dict(zip(site.objects, combo))
        comps = _components_of(Y, per)
        if _natural_components(Y, Z, comps):
            out.append(SSetPresheafMap(Y, Z, comps))
    return out


def cylinder_presheaf(Y: SSetPresheaf) -> SSetPresheaf:
    """Sectionwise product with the interval, restricting the first
    coordinate only."""
    site = Y.site
    trunc = Y.values[site.objects[0]].trunc
    I = delta(1, trunc)
    values = {U: sset_product(Y.values[U], I) for U in site.objects}
    res = {
        f: {
            n: {
                (x, t): (Y.res[f][n][x], t)
                for (x, t) in values[U].level(n)
            }
            for n in range(trunc + 1)
        }
        for f, (V, U) in site.cat.morphisms.items()
    }
    return SSetPresheaf(site, values, res)


def presheaf_homotopies(f: SSetPresheafMap, g: SSetPresheafMap, limit=1):
    """Natural cylinder homotopies from f to g, found sectionwise with
    both ends forced and then filtered for naturality."""
    Y, Z = f.source, f.target
    P = cylinder_presheaf(Y)
    site = Y.site
    slots = []
    for U in site.objects:
        X = Y.values[U]
        forced = {}
        for n in range(X.trunc + 1):
            for x in X.level(n):
                forced[(n, (x, (0,) * (n + 1)))] = f.components[U][n][x]
                forced[(n, (x, (1,) * (n + 1)))] = g.components[U][n][x]
        maps_U = enumerate_sset_maps(P.values[U], Z.values[U], forced=forced)
        if not maps_U:
            return []
        slots.append(maps_U)
    out = []
    for combo in itertools.product(*slots):
        per = dict(zip(site.objects, combo))
        comps = _components_of(P, per)
        if _natural_components(P, Z, comps):
            out.append(SSetPresheafMap(P, Z, comps))
            if limit is not None and len(out) >= limit:
                break
    return out


def presheaf_homotopic(f: SSetPresheafMap, g: SSetPresheafMap) -> bool:
    if f.components == g.components:
        return True
    return bool(presheaf_homotopies(f, g) or presheaf_homotopies(g, f))


def _grouped(count, related):
    parent = list(range(count))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(count):
        for j in range(i + 1, count):
            if find(i) != find(j) and related(i, j):
                parent[find(j)] = find(i)
    classes = {}
    for i in range(count):
        classes.setdefault(find(i), []).append(i)
    return [sorted(members) for _, members in sorted(classes.items())]


def presheaf_map_classes(maps):
    """Homotopy classes of strict presheaf maps, as index lists."""
    return _grouped(len(maps), lambda i, j: presheaf_homotopic(maps[i], maps[j]))


# ---------------------------------------------------------------------------
# classifying maps from torsors


def action_classifying_map(
    T: ActionTorsor, cover, trunc, target: SSetPresheaf = None
) -> SSetPresheafMap:
    """The transition cocycle of one chosen section over each cover
    member, as a map from the covering resolution into the nerve."""
    site = T.total.site
    source = cech_resolution(site, cover, trunc)
    if target is None:
        target = bg_presheaf(T.gpd, trunc)
    family = list(cover["family"])
    chosen = {}
    for i, member in enumerate(family):
        secs = T.total.values[member]
        assert secs, f"no section over {member!r} to trivialise with"
        chosen[i] = secs[0]
    E = cover_elements(site, cover)
    comps = {}
    for W in site.objects:
        G = T.gpd.values[W]
        anchor = T.anchor[W]
        tab = T.action[W]
        local = {(i, h): T.total.res[h][chosen[i]] for (i, h) in E.values[W]}

        def transition(prev, nxt, local=local, G=G, anchor=anchor, tab=tab):
            hits = [
                g
                for g, (a, b) in G.morphisms.items()
                if b == anchor[local[nxt]] and tab[(local[nxt], g)] == local[prev]
            ]
            assert len(hits) == 1, "transitions must be unique to classify"
            return hits[0]

        table = {}
        for n in range(trunc + 1):
            for cell in source.values[W].level(n):
                table.setdefault(n, {})[cell] = (
                    anchor[local[cell[0]]],
                    tuple(
                        transition(cell[m - 1], cell[m]) for m in range(1, n + 1)
                    ),
                )
        comps[W] = table
    u = SSetPresheafMap(source, target, comps)
    ok, problems = validate_sset_presheaf_map(u)
    assert ok, problems[:3]
    return u


def sgroup_classifying_map(
    A, cover, target: SSetPresheaf = None
) -> SSetPresheafMap:
    """Transition cocycle of an enriched group action with a discrete
    total space, into the cocycle object."""
    Q = A.group
    site = Q.site
    trunc = next(iter(Q.values.values())).trunc
    source = cech_resolution(site, cover, trunc)
    if target is None:
        target = wbar_presheaf(Q)
    family = list(cover["family"])
    chosen = {
        i: A.space.values[member].level(0)[0] for i, member in enumerate(family)
    }
    E = cover_elements(site, cover)
    comps = {}
    for W in site.objects:
        H = Q.values[W]
        a = next(iter(H.objects))
        local = {(i, h): A.space.res[h][0][chosen[i]] for (i, h) in E.values[W]}

        def transition(prev, nxt, k, local=local, H=H, a=a, W=W):
            hits = [
                g
                for g in H.homs[(a, a)].level(k)
                if A.act(W, k, g, local[nxt]) == local[prev]
            ]
            assert len(hits) == 1, "transitions must be unique to classify"
            return hits[0]

        table = {}
        for n in range(trunc + 1):
            for cell in source.values[W].level(n):
                table.setdefault(n, {})[cell] = (
                    (a,) * (n + 1),
                    tuple(
                        transition(cell[m - 1], cell[m], n - m)
                        for m in range(1, n + 1)
                    ),
                )
        comps[W] = table
    u = SSetPresheafMap(source, target, comps)
    ok, problems = validate_sset_presheaf_map(u)
    assert ok, problems[:3]
    return u


def two_gpd_base_presheaf(site, T, trunc) -> SSetPresheaf:
    """The constant presheaf on the 2-groupoid's cocycle object."""
    _, proj = holim_2gpd(
        T,
        {p: () for p in T.objects},
        lambda arrow, x: x,
        trunc,
    )
    W = proj.target
    return SSetPresheaf(
        site,
        {U: W for U in site.objects},
        {
            f: {n: {s: s for s in W.level(n)} for n in range(trunc + 1)}
            for f in site.morphisms
        },
    )


def two_gpd_classifying_map(
    A, cover, trunc, target: SSetPresheaf = None
) -> SSetPresheafMap:
    """Transition cocycle of a 2-groupoid action, for discrete hom
    2-cells; entries are degenerate strings on the transition arrow."""
    site = A.site
    source = cech_resolution(site, cover, trunc)
    if target is None:
        target = two_gpd_base_presheaf(site, A.gpd2, trunc)
    T = A.gpd2
    family = list(cover["family"])
    chosen = {}
    for i, member in enumerate(family):
        pool = [x for p in sorted(A.elements[member]) for x in A.elements[member][p]]
        assert pool, f"no element over {member!r} to trivialise with"
        chosen[i] = pool[0]
    E = cover_elements(site, cover)
    owner = {
        U: {x: p for p, xs in A.elements[U].items() for x in xs}
        for U in site.objects
    }
    comps = {}
    for W in site.objects:
        local = {(i, h): A.res[h][chosen[i]] for (i, h) in E.values[W]}
        anchors = {e: owner[W][local[e]] for e in local}
        act = A.act1[W]

        def transition(prev, nxt, local=local, anchors=anchors, act=act):
            p, q = anchors[nxt], anchors[prev]
            hits = [
                arrow
                for arrow in T.homs[(p, q)].objects
                if act[(arrow, local[nxt])] == local[prev]
            ]
            assert len(hits) == 1, "transitions must be unique to classify"
            return hits[0]

        table = {}
        for n in range(trunc + 1):
            for cell in source.values[W].level(n):
                objs = tuple(anchors[e] for e in cell)
                arrows = tuple(
                    (
                        transition(cell[m - 1], cell[m]),
                        (("id", transition(cell[m - 1], cell[m])),) * (n - m),
                    )
                    for m in range(1, n + 1)
                )
                table.setdefault(n, {})[cell] = (objs, arrows)
        comps[W] = table
    u = SSetPresheafMap(source, target, comps)
    ok, problems = validate_sset_presheaf_map(u)
    assert ok, problems[:3]
    return u


def db_presheaf_map(u: SgdPresheafMap) -> SSetPresheafMap:
    """Diagonal nerve of a map of enriched groupoid presheaves."""
    DP = db_presheaf(u.source)
    DQ = db_presheaf(u.target)
    comps = {}
    for U in u.source.site.objects:
        F = u.components[U]
        H = u.source.values[U]
        table = {}
        for n in range(DP.values[U].trunc + 1):
            for (x0, fs) in DP.values[U].level(n):
                table.setdefault(n, {})[(x0, fs)] = (
                    F.ob[x0],
                    tuple(
                        F.on_hom(a, b, n, g)
                        for (a, b, g) in string_steps(H, x0, fs, n)
                    ),
                )
        comps[U] = table
    return SSetPresheafMap(DP, DQ, comps)


def sgd_classifying_map(
    u: SgdPresheafMap, cover, target: SSetPresheaf = None
) -> SSetPresheafMap:
    """For a map off the covering coefficients, the induced cocycle map
    on resolutions: entries are the images of the unique connecting
    cells, read backwards along each string."""
    P, Q = u.source, u.target
    site = P.site
    trunc = next(iter(P.values.values())).trunc
    source = cech_resolution(site, cover, trunc)
    if target is None:
        target = wbar_presheaf(Q)
    comps = {}
    for W in site.objects:
        F = u.components[W]
        HP = P.values[W]
        table = {}
        for n in range(trunc + 1):
            for cell in source.values[W].level(n):
                objs = tuple(F.ob[e] for e in cell)
                arrows = tuple(
                    F.on_hom(
                        cell[m],
                        cell[m - 1],
                        n - m,
                        HP.homs[(cell[m], cell[m - 1])].level(n - m)[0],
                    )
                    for m in range(1, n + 1)
                )
                table.setdefault(n, {})[cell] = (objs, arrows)
        comps[W] = table
    kappa = SSetPresheafMap(source, target, comps)
    ok, problems = validate_sset_presheaf_map(kappa)
    assert ok, problems[:3]
    return kappa


def constant_cocycle_map(
    source: SSetPresheaf, target: SSetPresheaf, Q: SgdPresheaf, a
) -> SSetPresheafMap:
    """The trivial cocycle at a constant object: every resolution cell
    goes to the identity string."""
    site = source.site
    comps = {}
    for W in site.objects:
        H = Q.values[W]
        X = source.values[W]
        comps[W] = {
            n: {
                cell: (
                    (a,) * (n + 1),
                    tuple(H.identity_at(a, n - m) for m in range(1, n + 1)),
                )
                for cell in X.level(n)
            }
            for n in range(X.trunc + 1)
        }
    u = SSetPresheafMap(source, target, comps)
    ok, problems = validate_sset_presheaf_map(u)
    assert ok, problems[:3]
    return u


# ---------------------------------------------------------------------------
# the classification runs


def _locate(u: SSetPresheafMap, maps, classes):
    for index, candidate in enumerate(maps):
        if candidate.components == u.components:
            for ci, members in enumerate(classes):
                if index in members:
                    return ci
    for ci, members in enumerate(classes):
        if any(presheaf_homotopic(u, maps[k]) for k in members):
            return ci
    return None


def _assemble(kind, torsors, torsor_classes, maps, map_classes, matching, check):
    report = {
        "kind": kind,
        "family": len(torsors),
        "torsor_classes": torsor_classes,
        "map_count": len(maps),
        "map_classes": map_classes,
        "matching": matching,
        "classes": len(torsor_classes),
        "check": check,
    }
    assignment = [j for _, j in matching]
    check.add(
        require(
            len(torsor_classes) == len(map_classes),
            "both sides have the same number of classes",
            torsor_classes=len(torsor_classes),
            map_classes=len(map_classes),
        )
    )
    check.add(
        require(
            None not in assignment
            and sorted(assignment) == list(range(len(map_classes))),
            "classifying maps hit every homotopy class exactly once",
            assignment=matching,
        )
    )
    return report


def classify_group(G: GroupPresheaf, trunc, depth=2, bound=None, cover=None):
    site = G.site
    cover = cover or star_cover(site)
    torsors = enumerate_group_torsors(G, bound)
    torsor_classes = _grouped(
        len(torsors),
        lambda i, j: bool(group_torsor_maps(torsors[i], torsors[j])),
    )
    target = bg_presheaf(group_presheaf_as_groupoid(G), trunc)
    source = cech_resolution(site, cover, trunc)
    maps = enumerate_sset_presheaf_maps(source, target, bound=bound)
    map_classes = presheaf_map_classes(maps)
    check = Check("group torsors match classifying maps", True,
                  params={"trunc": trunc, "depth": depth})
    for members in torsor_classes:
        check.add(group_torsor_check(torsors[members[0]], depth=depth))
    data = h1_cech_classes(G, cover["family"])
    cech_of_class = sorted(
        torsor_cech_class(torsors[members[0]], data) for members in torsor_classes
    )
    check.add(
        require(
            cech_of_class == list(range(len(data["reps"]))),
            "torsor classes match cocycle classes exactly",
            classes=cech_of_class,
            cocycle_classes=len(data["reps"]),
        )
    )
    matching = [
        (
            ci,
            _locate(
                action_classifying_map(
                    group_torsor_to_action(torsors[members[0]]),
                    cover,
                    trunc,
                    target=target,
                ),
                maps,
                map_classes,
            ),
        )
        for ci, members in enumerate(torsor_classes)
    ]
    report = _assemble("group", torsors, torsor_classes, maps, map_classes,
                       matching, check)
    report["cocycle_classes"] = len(data["reps"])
    return report


def classify_groupoid_action(GP: GroupoidPresheaf, trunc, depth=2, bound=None,
                             cover=None):
    site = GP.site
    cover = cover or star_cover(site)
    torsors = enumerate_action_torsors(GP, bound)
    torsor_classes = _grouped(
        len(torsors),
        lambda i, j: bool(action_torsor_maps(torsors[i], torsors[j])),
    )
    target = bg_presheaf(GP, trunc)
    source = cech_resolution(site, cover, trunc)
    maps = enumerate_sset_presheaf_maps(source, target, bound=bound)
    map_classes = presheaf_map_classes(maps)
    check = Check("anchored torsors match classifying maps", True,
                  params={"trunc": trunc, "depth": depth})
    for members in torsor_classes:
        check.add(action_torsor_check(torsors[members[0]], depth=depth))
    matching = [
        (
            ci,
            _locate(
                action_classifying_map(torsors[members[0]], cover, trunc,
                                       target=target),
                maps,
                map_classes,
            ),
        )
        for ci, members in enumerate(torsor_classes)
    ]
    return _assemble("groupoid-action", torsors, torsor_classes, maps,
                     map_classes, matching, check)


def classify_groupoid_bundle(GP: GroupoidPresheaf, trunc, depth=2, bound=None,
                             cover=None):
    site = GP.site
    cover = cover or star_cover(site)
    actions = enumerate_action_torsors(GP, bound)
    bundles = [action_to_bundle(T, trunc) for T in actions]
    recovered = [bundle_to_action(B) for B in bundles]
    torsor_classes = _grouped(
        len(recovered),
        lambda i, j: bool(action_torsor_maps(recovered[i], recovered[j])),
    )
    target = bg_presheaf(GP, trunc)
    source = cech_resolution(site, cover, trunc)
    maps = enumerate_sset_presheaf_maps(source, target, bound=bound)
    map_classes = presheaf_map_classes(maps)
    check = Check("pulled-back bundles match classifying maps", True,
                  params={"trunc": trunc, "depth": depth})
    for members in torsor_classes:
        check.add(bundle_torsor_check(bundles[members[0]], depth=depth))
    check.add(
        require(
            all(recovered[i] == actions[i] for i in range(len(actions))),
            "bundle round trip recovers every action",
        )
    )
    matching = [
        (
            ci,
            _locate(
                action_classifying_map(recovered[members[0]], cover, trunc,
                                       target=target),
                maps,
                map_classes,
            ),
        )
        for ci, members in enumerate(torsor_classes)
    ]
    return _assemble("groupoid-bundle", bundles, torsor_classes, maps,
                     map_classes, matching, check)


def classify_two_gpd(site, F: FinGroup, trunc, depth=2, bound=None, cover=None):
    cover = cover or star_cover(site)
    cochains = enumerate_group_cochains(constant_group_presheaf(site, F), bound)
    actions = [twisted_two_gpd_action(site, F, c) for c in cochains]
    torsor_classes = _grouped(
        len(actions),
        lambda i, j: bool(two_gpd_action_maps(actions[i], actions[j])),
    )
    T = group_as_2groupoid(F)
    target = two_gpd_base_presheaf(site, T, trunc)
    source = cech_resolution(site, cover, trunc)
    maps = enumerate_sset_presheaf_maps(source, target, bound=bound)
    map_classes = presheaf_map_classes(maps)
    check = Check("2-groupoid actions match classifying maps", True,
                  params={"trunc": trunc, "depth": depth})
    for members in torsor_classes:
        total, pi = two_gpd_display(actions[members[0]], trunc)
        check.add(two_gpd_torsor_check(total, pi, depth=depth))
    matching = [
        (
            ci,
            _locate(
                two_gpd_classifying_map(actions[members[0]], cover, trunc,
                                        target=target),
                maps,
                map_classes,
            ),
        )
        for ci, members in enumerate(torsor_classes)
    ]
    return _assemble("2gpd", actions, torsor_classes, maps, map_classes,
                     matching, check)


def classify_sgroup(Q: SgdPresheaf, depth=2, bound=None, cover=None):
    site = Q.site
    cover = cover or star_cover(site)
    trunc = next(iter(Q.values.values())).trunc
    G0 = vertex_group_presheaf(Q)
    cochains = enumerate_group_cochains(G0, bound)
    actions = [twisted_sgroup_action(Q, c) for c in cochains]
    level0 = [level0_group_torsor(A) for A in actions]
    torsor_classes = _grouped(
        len(actions),
        lambda i, j: bool(group_torsor_maps(level0[i], level0[j])),
    )
    target = wbar_presheaf(Q)
    source = cech_resolution(site, cover, trunc)
    maps = enumerate_sset_presheaf_maps(source, target, bound=bound)
    map_classes = presheaf_map_classes(maps)
    check = Check("enriched group actions match classifying maps", True,
                  params={"trunc": trunc, "depth": depth})
    for members in torsor_classes:
        check.add(sgroup_torsor_check(actions[members[0]], depth=depth))
    data = h1_cech_classes(G0, cover["family"])
    cech_of_class = sorted(
        torsor_cech_class(level0[members[0]], data) for members in torsor_classes
    )
    check.add(
        require(
            cech_of_class == list(range(len(data["reps"]))),
            "vertex-level classes match cocycle classes exactly",
            classes=cech_of_class,
        )
    )
    matching = [
        (
            ci,
            _locate(
                sgroup_classifying_map(actions[members[0]], cover, target=target),
                maps,
                map_classes,
            ),
        )
        for ci, members in enumerate(torsor_classes)
    ]
    report = _assemble("sgroup", actions, torsor_classes, maps, map_classes,
                       matching, check)
    report["cocycle_classes"] = len(data["reps"])
    return report


def classify_sgd(Q: SgdPresheaf, depth=2, bound=None, cover=None):
    site = Q.site
    cover = cover or star_cover(site)
    trunc = next(iter(Q.values.values())).trunc
    P = cech_sgd_presheaf(site, cover, trunc)
    us = enumerate_sgd_presheaf_maps(P, Q, bound=bound)
    pulled = [psi_sgd(u) for u in us]
    torsor_classes = _grouped(
        len(pulled),
        lambda i, j: bool(sgd_diagram_maps(pulled[i], pulled[j], bound=bound)),
    )
    target = wbar_presheaf(Q)
    source = cech_resolution(site, cover, trunc)
    maps = enumerate_sset_presheaf_maps(source, target, bound=bound)
    map_classes = presheaf_map_classes(maps)
    check = Check("pulled-back diagrams match classifying maps", True,
                  params={"trunc": trunc, "depth": depth})
    for members in torsor_classes:
        ok, problems = validate_sgd_diagram(pulled[members[0]])
        check.add(require(ok, "pullback is a valid diagram", witness=problems[:3]))
        check.add(sgd_torsor_check(pulled[members[0]], depth=depth))
    matching = [
        (
            ci,
            _locate(
                sgd_classifying_map(us[members[0]], cover, target=target),
                maps,
                map_classes,
            ),
        )
        for ci, members in enumerate(torsor_classes)
    ]
    constant_objects = [
        a
        for a in sorted(
            set.intersection(*[set(H.objects) for H in Q.values.values()]),
            key=repr,
        )
        if all(Q.res[f].ob.get(a) == a for f in site.morphisms)
    ]
    for a in constant_objects:
        # the represented torsor classifies by the constant cocycle; a
        # strict comparison with its class exists only when no section
        # carries more than one chart
        triv = constant_cocycle_map(source, target, Q, a)
        partners = [
            ci for ci, mj in matching if mj == _locate(triv, maps, map_classes)
        ]
        D = corepresented_diagram(Q, {U: a for U in site.objects})
        hits = [
            ci
            for ci, members in enumerate(torsor_classes)
            if sgd_diagram_maps(D, pulled[members[0]], bound=bound)
            and sgd_diagram_maps(pulled[members[0]], D, bound=bound)
        ]
        if hits:
            check.add(
                require(
                    hits == partners,
                    f"the represented torsor at {a!r} lands in its classified class",
                    hits=hits,
                    partners=partners,
                )
            )
        else:
            check.add(
                require(
                    len(partners) == 1,
                    f"the represented torsor at {a!r} classifies into exactly one class",
                    partners=partners,
                )
            )
    return _assemble("sgpd", pulled, torsor_classes, maps, map_classes,
                     matching, check)


def classify(kind, site, coefficients, trunc=None, depth=2, bound=None,
             cover=None):
    """Dispatch a classification run.

    coefficients: a GroupPresheaf for "group", a GroupoidPresheaf for
    the two groupoid flavours, a FinGroup for "2gpd", and an
    SgdPresheaf for "sgroup" and "sgpd".
    """
    if kind == "group":
        return classify_group(coefficients, trunc, depth=depth, bound=bound,
                              cover=cover)
    if kind == "groupoid-action":
        return classify_groupoid_action(coefficients, trunc, depth=depth,
                                        bound=bound, cover=cover)
    if kind == "groupoid-bundle":
        return classify_groupoid_bundle(coefficients, trunc, depth=depth,
                                        bound=bound, cover=cover)
    if kind == "2gpd":
        return classify_two_gpd(site, coefficients, trunc, depth=depth,
                                bound=bound, cover=cover)
    if kind == "sgroup":
        return classify_sgroup(coefficients, depth=depth, bound=bound,
                               cover=cover)
    if kind == "sgpd":
        return classify_sgd(coefficients, depth=depth, bound=bound, cover=cover)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
