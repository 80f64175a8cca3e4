"""Groupoids enriched in truncated simplicial sets.

A ``SimpGroupoid`` has a fixed object set and a hom simplicial set per
ordered pair of objects, with levelwise composition tables that the
face and degeneracy maps respect.  Equivalently, one finite groupoid per
level with a constant object set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bisset import BisSSet, build_bisset, diagonal
from .groupoid import Fin2Groupoid, FinGroup, FinGroupoid, nerve_groupoid
from .ordinal import OrdinalMap, coface, codegeneracy
from .sset import TruncSSet, build_sset, idkey, relabel, sset_product


@dataclass
class SimpGroupoid:
    trunc: int
    objects: tuple
    homs: dict        # (a, b) -> TruncSSet
    comp: dict        # (a, b, c) -> {level: {(g, f): g . f}}  with f: a->b, g: b->c
    identities: dict  # a -> vertex id of homs[(a, a)]

    def hom(self, a, b) -> TruncSSet:
        return self.homs[(a, b)]

    def identity_at(self, a, n):
        cur = self.identities[a]
        for d in range(n):
            cur = self.homs[(a, a)].degen(d, 0, cur)
        return cur

    def compose(self, a, b, c, n, g, f):
        return self.comp[(a, b, c)][n][(g, f)]

    def compose_path(self, objs, n, fs):
        """Composite of f1; ...; fk along the object chain objs (k+1 long)."""
        assert len(objs) == len(fs) + 1
        cur = fs[0]
        src = objs[0]
        at = objs[1]
        for f, nxt in zip(fs[1:], objs[2:]):
            cur = self.compose(src, at, nxt, n, f, cur)
            at = nxt
        return cur

    def inverse(self, a, b, n, f):
        back = self.homs[(b, a)]
        for g in back.level(n):
            if (
                self.compose(a, b, a, n, g, f) == self.identity_at(a, n)
                and self.compose(b, a, b, n, f, g) == self.identity_at(b, n)
            ):
                return g
        raise ValueError(f"no inverse for {f!r} in hom({a!r},{b!r}) level {n}")


def validate_sgroupoid(H: SimpGroupoid):
    from .sset import validate_sset

    problems = []
    N = H.trunc
    for (a, b), hom in H.homs.items():
        ok, probs = validate_sset(hom)
        if not ok:
            problems.append(f"hom({a!r},{b!r}): {probs[0]}")
    if problems:
        return False, problems
    for a, b, c in itertools.product(H.objects, repeat=3):
        table = H.comp.get((a, b, c))
        if table is None:
            problems.append(f"no composition table for {(a, b, c)}")
            continue
        AB, BC, AC = H.homs[(a, b)], H.homs[(b, c)], H.homs[(a, c)]
        for n in range(N + 1):
            for g, f in itertools.product(BC.level(n), AB.level(n)):
                h = table.get(n, {}).get((g, f))
                if h is None or h not in set(AC.level(n)):
                    problems.append(f"composite missing at {(a, b, c)} level {n}")
                    return False, problems
        # composition is a simplicial map
        for n in range(1, N + 1):
            for i in range(n + 1):
                for g, f in itertools.product(BC.level(n), AB.level(n)):
                    lhs = AC.face(n, i, table[n][(g, f)])
                    rhs = table[n - 1][(BC.face(n, i, g), AB.face(n, i, f))]
                    if lhs != rhs:
                        problems.append(f"composition breaks d_{i} at {(a, b, c)} level {n}")
        for n in range(N):
            for j in range(n + 1):
                for g, f in itertools.product(BC.level(n), AB.level(n)):
                    lhs = AC.degen(n, j, table[n][(g, f)])
                    rhs = table[n + 1][(BC.degen(n, j, g), AB.degen(n, j, f))]
                    if lhs != rhs:
                        problems.append(f"composition breaks s_{j} at {(a, b, c)} level {n}")
    if problems:
        return False, problems
    for a in H.objects:
        if H.identities[a] not in set(H.homs[(a, a)].level(0)):
            problems.append(f"identity vertex missing at {a!r}")
    for a, b in itertools.product(H.objects, repeat=2):
        for n in range(N + 1):
            for f in H.homs[(a, b)].level(n):
                if H.compose(a, a, b, n, f, H.identity_at(a, n)) != f:
                    problems.append(f"right identity law fails at {(a, b)} level {n}")
                if H.compose(a, b, b, n, H.identity_at(b, n), f) != f:
                    problems.append(f"left identity law fails at {(a, b)} level {n}")
    for a, b, c, d in itertools.product(H.objects, repeat=4):
        for n in range(N + 1):
            for h in H.homs[(c, d)].level(n):
                for g in H.homs[(b, c)].level(n):
                    hg = H.compose(b, c, d, n, h, g)
                    for f in H.homs[(a, b)].level(n):
                        if H.compose(a, b, d, n, hg, f) != H.compose(
                            a, c, d, n, h, H.compose(a, b, c, n, g, f)
                        ):
                            problems.append(f"associativity fails at {(a, b, c, d)} level {n}")
    # groupoid: inverses exist levelwise
    for a, b in itertools.product(H.objects, repeat=2):
        for n in range(N + 1):
            for f in H.homs[(a, b)].level(n):
                try:
                    H.inverse(a, b, n, f)
                except ValueError as e:
                    problems.append(str(e))
    return not problems, problems


# ---------------------------------------------------------------------------
# Constructors.


def constant_sset(elements, trunc) -> TruncSSet:
    """Constant simplicial set: every level is the same finite set."""
    elements = tuple(elements)
    return build_sset(
        trunc,
        lambda n: elements,
        lambda n, i, x: x,
        lambda n, j, x: x,
    )


def constant_sgroupoid(G: FinGroupoid, trunc) -> SimpGroupoid:
    homs = {}
    comp = {}
    for a, b in itertools.product(G.objects, repeat=2):
        cells = [f for f, (s, d) in G.morphisms.items() if (s, d) == (a, b)]
        homs[(a, b)] = constant_sset(cells, trunc)
    for a, b, c in itertools.product(G.objects, repeat=3):
        gs = [g for g, (s, d) in G.morphisms.items() if (s, d) == (b, c)]
        fs = [f for f, (s, d) in G.morphisms.items() if (s, d) == (a, b)]
        table = {(g, f): G.comp[(g, f)] for g in gs for f in fs}
        comp[(a, b, c)] = {n: dict(table) for n in range(trunc + 1)}
    return SimpGroupoid(trunc, G.objects, homs, comp, dict(G.identities))


def constant_sgroup(F: FinGroup, trunc) -> SimpGroupoid:
    from .groupoid import group_as_groupoid

    return constant_sgroupoid(group_as_groupoid(F), trunc)


def b_2groupoid(T: Fin2Groupoid, trunc) -> SimpGroupoid:
    """Hom simplicial sets are the nerves of the hom groupoids."""
    homs = {
        (a, b): nerve_groupoid(T.homs[(a, b)], trunc)
        for a, b in itertools.product(T.objects, repeat=2)
    }
    comp = {}
    for a, b, c in itertools.product(T.objects, repeat=3):
        h1 = T.hcomp1[(a, b, c)]
        h2 = T.hcomp2[(a, b, c)]
        per = {}
        for n in range(trunc + 1):
            table = {}
            for g in homs[(b, c)].level(n):
                for f in homs[(a, b)].level(n):
                    q0, betas = g
                    p0, alphas = f
                    table[(g, f)] = (
                        h1[(q0, p0)],
                        tuple(h2[(b2, a2)] for b2, a2 in zip(betas, alphas)),
                    )
            per[n] = table
        comp[(a, b, c)] = per
    identities = {a: (T.identities1[a], ()) for a in T.objects}
    return SimpGroupoid(trunc, T.objects, homs, comp, identities)


def disjoint_union_sgd(pieces: dict) -> SimpGroupoid:
    truncs = {H.trunc for H in pieces.values()}
    assert len(truncs) == 1
    (N,) = truncs
    empty = build_sset(N, lambda n: (), None, None)
    objects = tuple((t, a) for t, H in pieces.items() for a in H.objects)
    homs = {}
    comp = {}
    for ta, a in objects:
        for tb, b in objects:
            if ta == tb:
                homs[((ta, a), (tb, b))] = relabel(
                    pieces[ta].homs[(a, b)], lambda n, x: (ta, x)
                )
            else:
                homs[((ta, a), (tb, b))] = empty
    for ta, a in objects:
        for tb, b in objects:
            for tc, c in objects:
                key = ((ta, a), (tb, b), (tc, c))
                if ta == tb == tc:
                    src = pieces[ta].comp[(a, b, c)]
                    comp[key] = {
                        n: {((ta, g), (ta, f)): (ta, h) for (g, f), h in tab.items()}
                        for n, tab in src.items()
                    }
                else:
                    comp[key] = {n: {} for n in range(N + 1)}
    identities = {(t, a): (t, pieces[t].identities[a]) for t, H in pieces.items() for a in H.objects}
    return SimpGroupoid(N, objects, homs, comp, identities)


def product_sgd(G: SimpGroupoid, H: SimpGroupoid) -> SimpGroupoid:
    assert G.trunc == H.trunc
    N = G.trunc
    objects = tuple(itertools.product(G.objects, H.objects))
    homs = {
        ((a1, a2), (b1, b2)): sset_product(G.homs[(a1, b1)], H.homs[(a2, b2)])
        for (a1, a2), (b1, b2) in itertools.product(objects, repeat=2)
    }
    comp = {}
    for (a1, a2), (b1, b2), (c1, c2) in itertools.product(objects, repeat=3):
        per = {}
        for n in range(N + 1):
            t1 = G.comp[(a1, b1, c1)][n]
            t2 = H.comp[(a2, b2, c2)][n]
            per[n] = {
                ((g1, g2), (f1, f2)): (t1[(g1, f1)], t2[(g2, f2)])
                for (g1, f1) in t1
                for (g2, f2) in t2
            }
        comp[((a1, a2), (b1, b2), (c1, c2))] = per
    identities = {
        (a1, a2): (G.identities[a1], H.identities[a2]) for (a1, a2) in objects
    }
    return SimpGroupoid(N, objects, homs, comp, identities)


def pi0_sgroupoid(H: SimpGroupoid):
    """Isomorphism classes of objects: nonempty hom means connected."""
    parent = {a: a for a in H.objects}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in itertools.product(H.objects, repeat=2):
        if H.homs[(a, b)].size(0) > 0:
            ra, rb = find(a), find(b)
            if ra != rb:
                if idkey(rb) < idkey(ra):
                    ra, rb = rb, ra
                parent[rb] = ra
    return sorted({find(a) for a in H.objects}, key=idkey)


# ---------------------------------------------------------------------------
# Enriched functors.


@dataclass
class SgdFunctor:
    source: SimpGroupoid
    target: SimpGroupoid
    ob: dict      # object -> object
    maps: dict    # (a, b) -> {level: {hom simplex -> hom simplex}}

    def on_hom(self, a, b, n, f):
        return self.maps[(a, b)][n][f]


def sgd_functor(source, target, ob, on_hom):
    """Build from callables ob(a) and on_hom(a, b, n, f)."""
    obd = {a: ob(a) for a in source.objects}
    maps = {
        (a, b): {
            n: {f: on_hom(a, b, n, f) for f in source.homs[(a, b)].level(n)}
            for n in range(source.trunc + 1)
        }
        for a, b in itertools.product(source.objects, repeat=2)
    }
    return SgdFunctor(source, target, obd, maps)


def validate_sgd_functor(F: SgdFunctor):
    problems = []
    G, H = F.source, F.target
    N = G.trunc
    for a, b in itertools.product(G.objects, repeat=2):
        hom_s = G.homs[(a, b)]
        hom_t = H.homs[(F.ob[a], F.ob[b])]
        for n in range(N + 1):
            for f in hom_s.level(n):
                v = F.maps[(a, b)].get(n, {}).get(f)
                if v is None or v not in set(hom_t.level(n)):
                    problems.append(f"value missing/mistyped at {(a, b)} level {n}")
                    return False, problems
        for n in range(1, N + 1):
            for i in range(n + 1):
                for f in hom_s.level(n):
                    if F.on_hom(a, b, n - 1, hom_s.face(n, i, f)) != hom_t.face(
                        n, i, F.on_hom(a, b, n, f)
                    ):
                        problems.append(f"breaks d_{i} at {(a, b)} level {n}")
        for n in range(N):
            for j in range(n + 1):
                for f in hom_s.level(n):
                    if F.on_hom(a, b, n + 1, hom_s.degen(n, j, f)) != hom_t.degen(
                        n, j, F.on_hom(a, b, n, f)
                    ):
                        problems.append(f"breaks s_{j} at {(a, b)} level {n}")
    for a in G.objects:
        if F.on_hom(a, a, 0, G.identities[a]) != H.identities[F.ob[a]]:
            problems.append(f"does not preserve identity at {a!r}")
    for a, b, c in itertools.product(G.objects, repeat=3):
        for n in range(N + 1):
            for g in G.homs[(b, c)].level(n):
                for f in G.homs[(a, b)].level(n):
                    lhs = F.on_hom(a, c, n, G.compose(a, b, c, n, g, f))
                    rhs = H.compose(
                        F.ob[a], F.ob[b], F.ob[c], n,
                        F.on_hom(b, c, n, g), F.on_hom(a, b, n, f),
                    )
                    if lhs != rhs:
                        problems.append(f"does not preserve composition at {(a, b, c)} level {n}")
    return not problems, problems


def pullback_sgd(p: SgdFunctor, g: SgdFunctor) -> tuple:
    """Pullback of Z --g--> W <--p-- Y among enriched groupoids.

    Returns (P, to_Z, to_Y) with P the levelwise fibered product: objects
    are pairs agreeing in W, hom simplices are pairs agreeing in W.
    """
    Z, Y, W = g.source, p.source, p.target
    assert g.target is W or g.target == W
    N = Z.trunc
    objects = tuple(
        (z, y) for z in Z.objects for y in Y.objects if g.ob[z] == p.ob[y]
    )

    homs = {}
    comp = {}
    for (z1, y1), (z2, y2) in itertools.product(objects, repeat=2):
        pairs = {
            n: tuple(
                (f1, f2)
                for f1 in Z.homs[(z1, z2)].level(n)
                for f2 in Y.homs[(y1, y2)].level(n)
                if g.on_hom(z1, z2, n, f1) == p.on_hom(y1, y2, n, f2)
            )
            for n in range(N + 1)
        }
        ZH, YH = Z.homs[(z1, z2)], Y.homs[(y1, y2)]
        homs[((z1, y1), (z2, y2))] = build_sset(
            N,
            lambda n, pairs=pairs: pairs[n],
            lambda n, i, x, ZH=ZH, YH=YH: (ZH.face(n, i, x[0]), YH.face(n, i, x[1])),
            lambda n, j, x, ZH=ZH, YH=YH: (ZH.degen(n, j, x[0]), YH.degen(n, j, x[1])),
        )
    for (z1, y1), (z2, y2), (z3, y3) in itertools.product(objects, repeat=3):
        per = {}
        for n in range(N + 1):
            per[n] = {
                (gg, ff): (
                    Z.compose(z1, z2, z3, n, gg[0], ff[0]),
                    Y.compose(y1, y2, y3, n, gg[1], ff[1]),
                )
                for gg in homs[((z2, y2), (z3, y3))].level(n)
                for ff in homs[((z1, y1), (z2, y2))].level(n)
            }
        comp[((z1, y1), (z2, y2), (z3, y3))] = per
    identities = {
        (z, y): (Z.identities[z], Y.identities[y]) for (z, y) in objects
    }
    P = SimpGroupoid(N, objects, homs, comp, identities)
    to_z = sgd_functor(P, Z, lambda o: o[0], lambda a, b, n, f: f[0])
    to_y = sgd_functor(P, Y, lambda o: o[1], lambda a, b, n, f: f[1])
    return P, to_z, to_y


# ---------------------------------------------------------------------------
# Nerve: a bisimplicial set, horizontally the levelwise nerve.


def _nerve_level_theta(H: SimpGroupoid, theta: OrdinalMap, q, simplex):
    """Horizontal ordinal action on a string of q-cells (x0, (f1, ..., fp))."""
    x0, fs = simplex
    objs = [x0]
    for a, b, f in string_steps(H, x0, fs, q):
        objs.append(b)
    new_fs = []
    for i in range(1, theta.dom + 1):
        p0, q0 = theta(i - 1), theta(i)
        if p0 == q0:
            new_fs.append(H.identity_at(objs[p0], q))
        else:
            new_fs.append(H.compose_path(objs[p0 : q0 + 1], q, list(fs[p0:q0])))
    return (objs[theta(0)], tuple(new_fs))


def string_steps(H: SimpGroupoid, x0, fs, q):
    """Recover the object chain of a string of q-cells by matching hom levels.

    Requires hom cell ids to be distinct across hom pairs with a common
    source object; every constructor here arranges that.
    """
    steps = []
    at = x0
    for f in fs:
        hits = [b for b in H.objects if f in set(H.homs[(at, b)].level(q))]
        assert len(hits) == 1, f"cell {f!r} from {at!r} matches {len(hits)} targets"
        steps.append((at, hits[0], f))
        at = hits[0]
    return steps


def nerve_sgroupoid(H: SimpGroupoid) -> BisSSet:
    """Horizontal degree p, vertical degree q: strings of p composable q-cells."""
    N = H.trunc

    def levels(p, q):
        out = []

        def extend(x0, at, fs, k):
            if k == 0:
                out.append((x0, tuple(fs)))
                return
            for b in H.objects:
                for f in H.homs[(at, b)].level(q):
                    extend(x0, b, fs + [f], k - 1)

        for x0 in H.objects:
            extend(x0, x0, [], p)
        return out

    def hface(p, q, i, x):
        return _nerve_level_theta(H, coface(p, i), q, x)

    def hdeg(p, q, j, x):
        return _nerve_level_theta(H, codegeneracy(p, j), q, x)

    def vface(p, q, i, x):
        x0, fs = x
        steps = string_steps(H, x0, fs, q)
        return (x0, tuple(H.homs[(a, b)].face(q, i, f) for a, b, f in steps))

    def vdeg(p, q, j, x):
        x0, fs = x
        steps = string_steps(H, x0, fs, q)
        return (x0, tuple(H.homs[(a, b)].degen(q, j, f) for a, b, f in steps))

    return build_bisset(N, levels, hface, vface, hdeg, vdeg)


def db_sgroupoid(H: SimpGroupoid) -> TruncSSet:
    """Diagonal of the nerve: n-simplices are strings of n composable n-cells."""
    return diagonal(nerve_sgroupoid(H))


def identity_functor(H: SimpGroupoid) -> SgdFunctor:
    return sgd_functor(H, H, lambda a: a, lambda a, b, n, f: f)


def db_map(F: SgdFunctor):
    """The map of diagonal nerves induced by an enriched functor."""
    from .sset import sset_map

    src = db_sgroupoid(F.source)
    tgt = db_sgroupoid(F.target)

    def assign(n, s):
        x0, fs = s
        steps = string_steps(F.source, x0, fs, n)
        return (F.ob[x0], tuple(F.on_hom(a, b, n, f) for a, b, f in steps))

    return sset_map(src, tgt, assign)
