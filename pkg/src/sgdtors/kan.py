"""Horn filling, homotopy groups, and weak-equivalence checks.

Everything is exhaustive over the stored simplices.  Horn enumeration
walks compatible face tuples with backtracking; homotopy groups are
computed from explicit candidate sets and single-simplex homotopies,
closed transitively.  All claims are bounded by the truncation and say
so in the returned ``Check``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .report import Check, require
from .sset import SSetMap, TruncSSet, idkey, pi0, pi0_classes, sset_product, validate_sset_map


def horn_assignments(X: TruncSSet, n: int, k: int):
    """All compatible families (x_i)_{i != k} of (n-1)-simplices.

    Compatibility is the face matching d_i x_j = d_{j-1} x_i for i < j.
    Yields dicts index -> simplex id.
    """
    positions = [i for i in range(n + 1) if i != k]
    level = X.level(n - 1)

    def extend(chosen, rest):
        if not rest:
            yield dict(chosen)
            return
        j = rest[0]
        for cand in level:
            ok = True
            for i, xi in chosen.items():
                # i < j by construction order
                if n - 1 >= 1:
                    if X.face(n - 1, i, cand) != X.face(n - 1, j - 1, xi):
                        ok = False
                        break
            if ok:
                yield from extend({**chosen, j: cand}, rest[1:])

    return extend({}, positions)


def horn_fillers(X: TruncSSet, n: int, k: int, assignment):
    return [
        z
        for z in X.level(n)
        if all(X.face(n, i, z) == x for i, x in assignment.items())
    ]


def kan_check(X: TruncSSet, maxdim=None) -> Check:
    """Search a filler for every horn of dimension <= maxdim."""
    if maxdim is None:
        maxdim = X.trunc - 1
    assert 1 <= maxdim <= X.trunc, "horns need fillers inside the truncation"
    check = Check("every horn has a filler", True, params={"maxdim": maxdim, "trunc": X.trunc})
    horns = 0
    for n in range(1, maxdim + 1):
        for k in range(n + 1):
            for assignment in horn_assignments(X, n, k):
                horns += 1
                if not horn_fillers(X, n, k, assignment):
                    check.ok = False
                    check.witness = ("horn", n, k, tuple(sorted(assignment.items())))
                    check.params["horns_checked"] = horns
                    return check
    check.params["horns_checked"] = horns
    return check


def fibration_check(p: SSetMap, maxdim=None) -> Check:
    """Search a lift for every horn in the source relative to the target.

    For each horn (x_i)_{i != k} upstairs and each n-simplex downstairs
    whose faces away from k match the images, some filler upstairs must
    have those faces and that image.
    """
    X, B = p.source, p.target
    if maxdim is None:
        maxdim = X.trunc - 1
    assert 1 <= maxdim <= X.trunc, "horns need fillers inside the truncation"
    check = Check(
        "every horn lifts against the base",
        True,
        params={"maxdim": maxdim, "trunc": X.trunc},
    )
    horns = 0
    for n in range(1, maxdim + 1):
        for k in range(n + 1):
            for assignment in horn_assignments(X, n, k):
                images = {i: p(n - 1, x) for i, x in assignment.items()}
                for sigma in B.level(n):
                    if any(B.face(n, i, sigma) != y for i, y in images.items()):
                        continue
                    horns += 1
                    fillers = [
                        z
                        for z in horn_fillers(X, n, k, assignment)
                        if p(n, z) == sigma
                    ]
                    if not fillers:
                        check.ok = False
                        check.witness = (
                            "relative horn",
                            n,
                            k,
                            tuple(sorted(assignment.items())),
                            sigma,
                        )
                        check.params["horns_checked"] = horns
                        return check
    check.params["horns_checked"] = horns
    return check


# ---------------------------------------------------------------------------
# Homotopy groups.


@dataclass
class PiGroup:
    """pi_n at a base vertex: explicit classes and multiplication table."""

    n: int
    base: object
    classes: list          # list of frozensets of n-simplices
    cls_of: dict           # simplex -> index into classes
    mult: dict             # (index, index) -> index
    identity: int

    def order(self):
        return len(self.classes)

    def inverse(self, a):
        for b in range(len(self.classes)):
            if self.mult[(a, b)] == self.identity:
                return b
        raise ValueError("no inverse found")


def iterated_degeneracy(X: TruncSSet, v, n: int):
    """s_0^n of a vertex."""
    cur = v
    for d in range(n):
        cur = X.degen(d, 0, cur)
    return cur


class TruncationError(Exception):
    """A homotopy claim was requested beyond what the truncation supports."""


def pi_n(X: TruncSSet, v, n: int) -> PiGroup:
    """The n-th homotopy group at vertex v, from explicit tables.

    Requires n + 1 <= trunc; the caller is expected to have passed
    kan_check up to dimension n + 1.  Group axioms are verified from the
    computed table; a violation raises, it is never papered over.
    """
    if n + 1 > X.trunc:
        raise TruncationError(f"pi_{n} needs simplices in dimension {n + 1}")
    assert n >= 1
    base_lo = iterated_degeneracy(X, v, n - 1)
    base = iterated_degeneracy(X, v, n)
    candidates = [
        x for x in X.level(n) if all(X.face(n, i, x) == base_lo for i in range(n + 1))
    ]
    # single-simplex homotopies, then transitive closure
    parent = {x: x for x in candidates}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if idkey(rb) < idkey(ra):
                ra, rb = rb, ra
            parent[rb] = ra

    cand_set = set(candidates)
    for w in X.level(n + 1):
        if all(X.face(n + 1, i, w) == base for i in range(n)):
            a, b = X.face(n + 1, n, w), X.face(n + 1, n + 1, w)
            if a in cand_set and b in cand_set:
                union(a, b)

    reps = sorted({find(x) for x in candidates}, key=idkey)
    index = {r: i for i, r in enumerate(reps)}
    cls_of = {x: index[find(x)] for x in candidates}
    classes = [frozenset(x for x in candidates if find(x) == r) for r in reps]

    # multiplication via horn fillers: faces (base,...,base, x, -, y)
    mult = {}
    for (a, ca), (b, cb) in itertools.product(enumerate(classes), repeat=2):
        results = set()
        for x, y in itertools.product(ca, cb):
            assignment = {i: base for i in range(n - 1)}
            assignment[n - 1] = x
            assignment[n + 1] = y
            for w in horn_fillers(X, n + 1, n, assignment):
                results.add(cls_of[X.face(n + 1, n, w)])
        if len(results) != 1:
            raise TruncationError(
                f"pi_{n} product of classes {a},{b} not single-valued: {sorted(results)}"
            )
        mult[(a, b)] = results.pop()

    identity = cls_of[base]
    pg = PiGroup(n, v, classes, cls_of, mult, identity)
    _assert_group(pg)
    return pg


def _assert_group(pg: PiGroup):
    k = len(pg.classes)
    for a in range(k):
        assert pg.mult[(a, pg.identity)] == a and pg.mult[(pg.identity, a)] == a
        pg.inverse(a)
    for a, b, c in itertools.product(range(k), repeat=3):
        assert pg.mult[(pg.mult[(a, b)], c)] == pg.mult[(a, pg.mult[(b, c)])]


def induced_pi_map(f: SSetMap, pg_x: PiGroup, pg_y: PiGroup):
    """Class map induced by f; checked single-valued and multiplicative."""
    n = pg_x.n
    out = {}
    for i, cls in enumerate(pg_x.classes):
        images = {pg_y.cls_of[f(n, x)] for x in cls}
        if len(images) != 1:
            raise TruncationError(f"induced map on pi_{n} not single-valued on class {i}")
        out[i] = images.pop()
    for a, b in itertools.product(range(len(pg_x.classes)), repeat=2):
        assert out[pg_x.mult[(a, b)]] == pg_y.mult[(out[a], out[b])]
    return out


def weq_check(f: SSetMap, maxdeg=None) -> Check:
    """Bijective on components and isomorphic on pi_n up to maxdeg.

    maxdeg defaults to trunc - 2, the largest degree the truncation
    supports honestly (pi_n consumes simplices of dimension n + 1 and the
    Kan precondition one more).
    """
    X, Y = f.source, f.target
    assert X.trunc == Y.trunc
    if maxdeg is None:
        maxdeg = X.trunc - 2
    assert 0 <= maxdeg <= X.trunc - 2, "weak-equivalence degree exceeds truncation support"
    check = Check(
        "weak equivalence", True, params={"maxdeg": maxdeg, "trunc": X.trunc}
    )
    ok, problems = validate_sset_map(f)
    check.add(require(ok, "input is a simplicial map", witness=problems[:3]))
    if not ok:
        return check
    if maxdeg >= 1:
        check.add(kan_check(X, maxdeg + 1))
        check.add(kan_check(Y, maxdeg + 1))
        if not check.ok:
            return check

    px, py = pi0(X), pi0(Y)
    image = {}
    for v, r in px.items():
        image.setdefault(r, set()).add(py[f(0, v)])
    single = all(len(s) == 1 for s in image.values())
    check.add(require(single, "pi_0 map single-valued", witness=image))
    if not single:
        return check
    cls_map = {r: next(iter(s)) for r, s in image.items()}
    inj = len(set(cls_map.values())) == len(cls_map)
    surj = set(cls_map.values()) == set(pi0_classes(Y))
    check.add(
        require(
            inj and surj,
            "bijective on components",
            witness={"source": len(cls_map), "target": len(pi0_classes(Y))},
        )
    )
    if not check.ok:
        return check

    for v in X.level(0):
        for n in range(1, maxdeg + 1):
            try:
                pgx = pi_n(X, v, n)
                pgy = pi_n(Y, f(0, v), n)
                m = induced_pi_map(f, pgx, pgy)
            except TruncationError as e:
                check.add(Check(f"pi_{n} at {v!r}", False, witness=str(e)))
                return check
            bij = len(set(m.values())) == len(m) == pgy.order()
            check.add(
                require(
                    bij,
                    f"pi_{n} isomorphism at vertex {v!r}",
                    witness={"source_order": pgx.order(), "target_order": pgy.order()},
                )
            )
            if not bij:
                return check
    return check


# ---------------------------------------------------------------------------
# Exhaustive simplicial-map enumeration and naive homotopies.


def _degeneracy_origin(X: TruncSSet, n, x):
    """Some (j, y) with s_j y = x, or None if x is nondegenerate."""
    if n == 0:
        return None
    for j in range(n):
        for y in X.level(n - 1):
            if X.degen(n - 1, j, y) == x:
                return (j, y)
    return None


def enumerate_sset_maps(X: TruncSSet, Y: TruncSSet, forced=None, limit=None):
    """All simplicial maps X -> Y, as SSetMaps.

    Values are chosen on nondegenerate simplices dimension by dimension;
    degenerate values follow.  ``forced`` is a dict (dim, id) -> id of
    required values (applied to nondegenerate ids during the search and
    verified on the rest).  ``limit`` stops the search early.
    """
    assert X.trunc == Y.trunc
    forced = forced or {}
    N = X.trunc
    origins = {
        (n, x): _degeneracy_origin(X, n, x) for n in range(N + 1) for x in X.level(n)
    }
    nondeg = {n: [x for x in X.level(n) if origins[(n, x)] is None] for n in range(N + 1)}
    results = []

    def value(assign, n, x):
        o = origins[(n, x)]
        if o is None:
            return assign[(n, x)]
        j, y = o
        return Y.degen(n - 1, j, value(assign, n - 1, y))

    def extend(assign, n, idx):
        if limit is not None and len(results) >= limit:
            return
        if n > N:
            levels = {
                m: {x: value(assign, m, x) for x in X.level(m)} for m in range(N + 1)
            }
            f = SSetMap(X, Y, levels)
            for (m, x), want in forced.items():
                if levels[m][x] != want:
                    return
            results.append(f)
            return
        if idx == len(nondeg[n]):
            extend(assign, n + 1, 0)
            return
        x = nondeg[n][idx]
        want = forced.get((n, x))
        if n == 0:
            candidates = Y.level(0)
        else:
            targets = [value(assign, n - 1, X.face(n, i, x)) for i in range(n + 1)]
            candidates = [
                z for z in Y.level(n) if all(Y.face(n, i, z) == targets[i] for i in range(n + 1))
            ]
        for z in candidates:
            if want is not None and z != want:
                continue
            assign[(n, x)] = z
            extend(assign, n, idx + 1)
            del assign[(n, x)]
            if limit is not None and len(results) >= limit:
                return

    extend({}, 0, 0)
    return results


def naive_homotopy_search(f: SSetMap, g: SSetMap):
    """A one-step homotopy X x Delta^1 -> Y from f to g, or None.

    The ends are the faces of the interval coordinate: constant 0 gives f,
    constant 1 gives g.
    """
    from .sset import delta

    X, Y = f.source, f.target
    assert g.source == X and g.target == Y
    interval = delta(1, X.trunc)
    P = sset_product(X, interval)
    forced = {}
    for n in range(X.trunc + 1):
        for x in X.level(n):
            forced[(n, (x, tuple([0] * (n + 1))))] = f(n, x)
            forced[(n, (x, tuple([1] * (n + 1))))] = g(n, x)
    found = enumerate_sset_maps(P, Y, forced=forced, limit=1)
    return found[0] if found else None


def homotopy_classes(maps, symmetric_closure=True):
    """Partition maps by existence of naive homotopies, closed transitively."""
    k = len(maps)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(k), 2):
        if find(i) == find(j):
            continue
        if naive_homotopy_search(maps[i], maps[j]) is not None or (
            symmetric_closure and naive_homotopy_search(maps[j], maps[i]) is not None
        ):
            parent[find(j)] = find(i)
    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())
