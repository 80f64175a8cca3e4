"""Finite ordinals and monotone maps.

An ordinal map is a weakly monotone function [m] -> [n] between the
finite totally ordered sets [m] = {0, ..., m} and [n] = {0, ..., n}.
These index the face/degeneracy calculus of every truncated simplicial
object in this package: a map theta: [m] -> [n] acts on n-simplices and
produces m-simplices.

>>> theta = OrdinalMap(2, 1, (0, 0, 1))
>>> theta(2)
1
>>> theta.is_surjective()
True
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class OrdinalMap:
    """Monotone map [dom] -> [cod], stored by its value tuple."""

    dom: int
    cod: int
    values: tuple

    def __post_init__(self):
        assert self.dom >= 0 and self.cod >= 0
        assert len(self.values) == self.dom + 1, "one value per element of [dom]"
        for v in self.values:
            assert 0 <= v <= self.cod, "value out of range"
        for a, b in zip(self.values, self.values[1:]):
            assert a <= b, "not monotone"

    def __call__(self, i):
        return self.values[i]

    def after(self, other: "OrdinalMap") -> "OrdinalMap":
        """Composite self . other, defined when other.cod == self.dom."""
        assert other.cod == self.dom, "not composable"
        return OrdinalMap(other.dom, self.cod, tuple(self.values[v] for v in other.values))

    def is_identity(self):
        return self.dom == self.cod and all(self.values[i] == i for i in range(self.dom + 1))

    def is_surjective(self):
        return set(self.values) == set(range(self.cod + 1))

    def is_injective(self):
        return len(set(self.values)) == self.dom + 1

    def restricted(self, i: int) -> "OrdinalMap":
        """The map [dom - i] -> [cod - theta(i)] sending j to theta(i + j) - theta(i).

        This is the restriction of theta to the interval [i, dom],
        renumbered so both intervals start at 0.  It is the ordinal map
        through which cocycle entries get reindexed.
        """
        assert 0 <= i <= self.dom
        base = self.values[i]
        return OrdinalMap(
            self.dom - i,
            self.cod - base,
            tuple(self.values[i + j] - base for j in range(self.dom - i + 1)),
        )


def identity(n: int) -> OrdinalMap:
    return OrdinalMap(n, n, tuple(range(n + 1)))


def coface(n: int, i: int) -> OrdinalMap:
    """The injection [n-1] -> [n] missing i."""
    assert n >= 1 and 0 <= i <= n
    return OrdinalMap(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))


def codegeneracy(n: int, j: int) -> OrdinalMap:
    """The surjection [n+1] -> [n] repeating j."""
    assert 0 <= j <= n
    return OrdinalMap(n + 1, n, tuple(k if k <= j else k - 1 for k in range(n + 2)))


def all_maps(m: int, n: int):
    """All monotone maps [m] -> [n], lexicographically ordered."""
    return [
        OrdinalMap(m, n, vals)
        for vals in itertools.combinations_with_replacement(range(n + 1), m + 1)
    ]


def decompose(theta: OrdinalMap):
    """Peel theta into elementary steps, innermost action first.

    Returns a list of ("d", n, i) / ("s", n, j) instructions such that
    applying face d_i at dimension n, resp. degeneracy s_j at dimension n,
    in order, realizes the contravariant action of theta on simplices.
    """
    steps = []
    cur = theta
    while True:
        if cur.is_identity():
            return steps
        if not cur.is_surjective():
            # theta = coface(i) . rest: act by d_i first.
            img = set(cur.values)
            i = min(v for v in range(cur.cod + 1) if v not in img)
            steps.append(("d", cur.cod, i))
            cur = OrdinalMap(
                cur.dom, cur.cod - 1, tuple(v if v < i else v - 1 for v in cur.values)
            )
        else:
            # theta = rest . codegeneracy(j): act by s_j last.
            j = next(k for k in range(cur.dom) if cur.values[k] == cur.values[k + 1])
            # record after recursing: s_j applies after the rest of theta
            rest = OrdinalMap(
                cur.dom - 1,
                cur.cod,
                cur.values[: j + 1] + cur.values[j + 2 :],
            )
            return steps + decompose(rest) + [("s", cur.dom - 1, j)]


# ---------------------------------------------------------------------------
# Poset joins.  join_size(n) elements, totally ordered; the left and right
# copies of [n] include as initial and final segments.


def join_size(n: int) -> int:
    return 2 * n + 2


def join_left(n: int) -> OrdinalMap:
    """[n] -> [2n+1]: the initial segment."""
    return OrdinalMap(n, 2 * n + 1, tuple(range(n + 1)))


def join_right(n: int) -> OrdinalMap:
    """[n] -> [2n+1]: the final segment."""
    return OrdinalMap(n, 2 * n + 1, tuple(n + 1 + i for i in range(n + 1)))


def join_of_maps(theta: OrdinalMap) -> OrdinalMap:
    """theta * theta: [2m+1] -> [2n+1], acting as theta on both halves."""
    m, n = theta.dom, theta.cod
    left = tuple(theta.values[i] for i in range(m + 1))
    right = tuple(n + 1 + theta.values[i] for i in range(m + 1))
    return OrdinalMap(2 * m + 1, 2 * n + 1, left + right)


def h_map(n: int):
    """The comparison (i, eps) -> element of the join, for i in [n], eps in {0,1}.

    Sends (i, 0) to the left copy and (i, 1) to the right copy of i.  As a
    function on the product poset [n] x [1] it is monotone, and it is natural:
    join_of_maps(theta) . h_m = h_n . (theta x 1).
    """
    return {(i, eps): i if eps == 0 else n + 1 + i for i in range(n + 1) for eps in (0, 1)}
