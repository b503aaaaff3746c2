"""Finite group presentations and bounded Tietze simplification.

Words are tuples of nonzero ints: ``k`` is generator ``k`` and ``-k`` its
inverse. Generators are numbered from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def free_reduce(word) -> tuple:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word) -> tuple:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert(word) -> tuple:
    return tuple(-x for x in reversed(word))


@dataclass
class GroupPresentation:
    generators: tuple
    relators: tuple
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        gens = set(self.generators)
        for r in self.relators:
            for x in r:
                if abs(x) not in gens:
                    raise ValueError(f"relator {r} uses unknown generator {abs(x)}")

    def is_trivial_presentation(self) -> bool:
        return not self.generators


@dataclass
class TietzeResult:
    presentation: GroupPresentation
    moves: int
    exhausted: bool

    @property
    def trivial(self) -> bool:
        return self.presentation.is_trivial_presentation()


def _substitute(word, gen, replacement) -> tuple:
    inv = invert(replacement)
    out = []
    for x in word:
        if x == gen:
            out.extend(replacement)
        elif x == -gen:
            out.extend(inv)
        else:
            out.append(x)
    return cyclic_reduce(out)


def simplify(pres: GroupPresentation, max_moves: int = 10_000) -> TietzeResult:
    """Eliminate generators with Tietze moves until none apply or the budget runs out.

    A move is one relator rewrite or one generator elimination. Elimination
    uses a relator in which some generator occurs exactly once, preferring
    the shortest such relator.
    """
    gens = list(pres.generators)
    rels = {cyclic_reduce(r) for r in pres.relators}
    rels.discard(())
    moves = 0
    while gens:
        best = None
        for r in sorted(rels, key=lambda w: (len(w), w)):
            counts: dict = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = [g for g, c in counts.items() if c == 1]
            if once:
                best = (r, min(once))
                break
        if best is None:
            break
        r, g = best
        k = next(i for i, x in enumerate(r) if abs(x) == g)
        rotated = r[k:] + r[:k]
        rest = rotated[1:]
        # x·rest = 1 gives x = rest⁻¹; x⁻¹·rest = 1 gives x = rest
        replacement = invert(rest) if rotated[0] > 0 else tuple(rest)
        rels.discard(r)
        new_rels = set()
        for w in rels:
            if g in map(abs, w):
                moves += 1
                w = _substitute(w, g, replacement)
            if w:
                new_rels.add(w)
        rels = new_rels
        gens.remove(g)
        moves += 1
        if moves > max_moves:
            return TietzeResult(GroupPresentation(tuple(gens), tuple(sorted(rels))),
                                moves, exhausted=True)
    return TietzeResult(GroupPresentation(tuple(gens), tuple(sorted(rels))), moves,
                        exhausted=False)
