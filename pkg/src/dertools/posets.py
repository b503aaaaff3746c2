"""Exhaustive enumeration of finite posets up to isomorphism.

Every poset on n elements arises from one on n - 1 elements by adjoining a
new maximal element above some down-closed subset, so growing level by level
and keeping one canonical representative per class reaches all of them.
Counts for n = 0..7 are 1, 1, 2, 5, 16, 63, 318, 2045.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

from .fincat import FinCat, poset_category

# A poset on range(n) is stored as a tuple of bitmasks: below[i] has bit j set
# when j < i strictly.
Poset = tuple


def _refine(below: Poset) -> list[int]:
    n = len(below)
    above = [sum(1 << j for j in range(n) if below[j] >> i & 1) for i in range(n)]
    colors = [0] * n
    while True:
        sig = [(colors[i],
                tuple(sorted(colors[j] for j in range(n) if below[i] >> j & 1)),
                tuple(sorted(colors[j] for j in range(n) if above[i] >> j & 1)))
               for i in range(n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_form(below: Poset) -> Poset:
    """Lexicographically least relabelling among those compatible with the
    refined colour classes; equal for isomorphic posets."""
    n = len(below)
    colors = _refine(below)
    classes = [[i for i in range(n) if colors[i] == c] for c in sorted(set(colors))]
    best = None
    for perms in product(*(permutations(cl) for cl in classes)):
        order = [i for p in perms for i in p]
        pos = {v: k for k, v in enumerate(order)}
        relabelled = tuple(sum(1 << pos[j] for j in range(n) if below[v] >> j & 1)
                           for v in order)
        if best is None or relabelled < best:
            best = relabelled
    return best if best is not None else ()


def _down_sets(below: Poset):
    n = len(below)
    for mask in range(1 << n):
        if all(below[i] & ~mask == 0 for i in range(n) if mask >> i & 1):
            yield mask


@lru_cache(maxsize=None)
def posets_of_size(n: int) -> tuple:
    """One representative per isomorphism class of posets on n elements."""
    if n == 0:
        return ((),)
    seen = set()
    for P in posets_of_size(n - 1):
        for ideal in _down_sets(P):
            seen.add(canonical_form(P + (ideal,)))
    return tuple(sorted(seen))


def all_posets(max_size: int):
    for n in range(max_size + 1):
        yield from posets_of_size(n)


def relations(below: Poset) -> list[tuple[int, int]]:
    return [(j, i) for i in range(len(below)) for j in range(len(below)) if below[i] >> j & 1]


def height(below: Poset) -> int:
    """Number of elements in a longest chain, minus one (-1 when empty)."""
    n = len(below)
    longest = [0] * n
    # n rounds of relaxation suffice since a chain has at most n elements
    for _ in range(n):
        for i in range(n):
            for j in range(n):
                if below[i] >> j & 1:
                    longest[i] = max(longest[i], longest[j] + 1)
    return max(longest, default=-1)


def as_category(below: Poset, name: str = "") -> FinCat:
    return poset_category(list(range(len(below))), relations(below), name=name)
