"""Nerves of finite categories, integral homology, and a contractibility ladder."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .constructions import find_adjoint
from .fincat import FinCat, full_subcategory
from .presentation import GroupPresentation, simplify
from .snf import invariant_factors


class DegreeError(ValueError):
    pass


class NerveTooLarge(ValueError):
    """The nerve is infinite-dimensional and no finite ``max_dim`` was given."""


@dataclass
class IntChainComplex:
    """Normalized chain complex of a nerve.

    ``bases[n]`` lists the nondegenerate n-simplices (tuples of composable
    nonidentity morphisms; 0-simplices are 1-tuples holding an object).
    ``boundaries[n]`` is the dense integer matrix of ∂_n : C_n → C_{n-1}
    with rows indexed by ``bases[n-1]`` (``boundaries[0]`` is empty).
    ``complete`` is False when simplices above ``top`` were cut off.
    """

    bases: list
    boundaries: list
    complete: bool

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def rank(self, n: int) -> int:
        return len(self.bases[n]) if 0 <= n <= self.top else 0

    def boundary(self, n: int) -> list[list[int]]:
        if 1 <= n <= self.top:
            return self.boundaries[n]
        return []

    def check(self) -> None:
        for n in range(2, self.top + 1):
            d1, d2 = self.boundaries[n - 1], self.boundaries[n]
            for i in range(len(d1)):
                for j in range(len(self.bases[n])):
                    if sum(d1[i][k] * d2[k][j] for k in range(len(d2))):
                        raise AssertionError(f"∂∂ ≠ 0 in degree {n}")

    def dump(self) -> str:
        """Dense integer rows, one matrix block per degree."""
        lines = []
        for n in range(1, self.top + 1):
            lines.append(f"d{n} {len(self.bases[n - 1])}x{len(self.bases[n])}")
            for row in self.boundaries[n]:
                lines.append(" ".join(map(str, row)))
        return "\n".join(lines)


def nerve_complex(C: FinCat, max_dim: int | None = None) -> IntChainComplex:
    """Normalized chains on the nerve of ``C`` up to dimension ``max_dim``.

    For loop-free ``C`` and ``max_dim=None`` the whole nerve is built;
    otherwise ``max_dim`` is required.
    """
    loop_free = C.is_loop_free()
    if max_dim is None:
        if not loop_free:
            raise NerveTooLarge("category has cycles of nonidentity morphisms; give max_dim")
        max_dim = len(C.objects)
    nonid = C.nonidentity()
    by_src: dict = {}
    for m in nonid:
        by_src.setdefault(C.src[m], []).append(m)
    bases = [[(x,) for x in C.objects]]
    if max_dim >= 1:
        bases.append([(m,) for m in nonid])
    while len(bases) <= max_dim:
        nxt = [s + (m,) for s in bases[-1] for m in by_src.get(C.tgt[s[-1]], ())]
        if not nxt:
            break
        bases.append(nxt)
    complete = loop_free or len(bases) <= max_dim
    if not complete and len(bases) == max_dim + 1:
        complete = not any(by_src.get(C.tgt[s[-1]]) for s in bases[-1]) if max_dim >= 1 else False
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    boundaries: list = [[]]
    for n in range(1, len(bases)):
        rows = len(bases[n - 1])
        mat = [[0] * len(bases[n]) for _ in range(rows)]
        for j, s in enumerate(bases[n]):
            for i, face in enumerate(_faces(C, s)):
                if face is not None:
                    mat[index[n - 1][face]][j] += -1 if i % 2 else 1
        boundaries.append(mat)
    return IntChainComplex(bases, boundaries, complete)


def _faces(C: FinCat, s: tuple):
    """Faces d_0..d_n of a nondegenerate simplex; degenerate faces are None."""
    n = len(s)
    if n == 1:
        m = s[0]
        return [(C.tgt[m],), (C.src[m],)]
    out = [s[1:]]
    for i in range(1, n):
        h = C.comp[(s[i], s[i - 1])]
        out.append(None if C.is_identity(h) else s[:i - 1] + (h,) + s[i + 1:])
    out.append(s[:-1])
    return out


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = ["Z" if self.betti == 1 else f"Z^{self.betti}"] if self.betti else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology(X: IntChainComplex, n: int, reduced: bool = False) -> HomologyGroup:
    """H_n via Smith normal form; ``reduced`` augments C_0 → Z."""
    limit = X.top if X.complete else X.top - 1
    if n < (-1 if reduced else 0) or n > max(limit, -1) and not X.complete:
        raise DegreeError(f"degree {n} outside the computed range")
    if n == -1:
        return HomologyGroup(0 if X.rank(0) else 1, ())
    d_out = X.boundary(n)
    if n == 0 and reduced:
        d_out = [[1] * X.rank(0)] if X.rank(0) else []
    d_in = X.boundary(n + 1)
    rank_out = len(invariant_factors(d_out)) if d_out and d_out[0] else 0
    factors = invariant_factors(d_in) if d_in and d_in[0] else []
    betti = X.rank(n) - rank_out - len(factors)
    return HomologyGroup(betti, tuple(f for f in factors if f > 1))


def homology_table(X: IntChainComplex, reduced: bool = False) -> dict[int, HomologyGroup]:
    top = X.top if X.complete else X.top - 1
    return {n: homology(X, n, reduced) for n in range(0, top + 1)}


# -- fundamental group ------------------------------------------------------------


def fundamental_group_presentation(C: FinCat) -> GroupPresentation:
    """π1 of the nerve (at any base point of a connected ``C``) from its 2-skeleton.

    Generators are nonidentity morphisms off a spanning forest; each composable
    pair (f, g) of nonidentity morphisms contributes the relator f·g·(g∘f)⁻¹.
    """
    nonid = C.nonidentity()
    parent = {x: x for x in C.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for m in nonid:
        a, b = find(C.src[m]), find(C.tgt[m])
        if a != b:
            parent[a] = b
            tree.add(m)
    gens = [m for m in nonid if m not in tree]
    number = {m: i + 1 for i, m in enumerate(gens)}

    def letter(m):
        return () if m not in number else (number[m],)

    relators = []
    by_src: dict = {}
    for m in nonid:
        by_src.setdefault(C.src[m], []).append(m)
    for f in nonid:
        for g in by_src.get(C.tgt[f], ()):
            h = C.comp[(g, f)]
            word = letter(f) + letter(g)
            if not C.is_identity(h):
                word += tuple(-x for x in letter(h))
            relators.append(word)
    return GroupPresentation(tuple(number.values()), tuple(relators),
                             labels={v: k for k, v in number.items()})


# -- contractibility ------------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    max_dim: int = 6
    tietze_moves: int = 10_000
    zigzag_steps: int = 200
    size_limit: int = 100_000

    @classmethod
    def from_env(cls, **overrides) -> "Budget":
        env = {
            "max_dim": os.environ.get("DERTOOLS_MAX_DIM"),
            "tietze_moves": os.environ.get("DERTOOLS_TIETZE_MOVES"),
            "zigzag_steps": os.environ.get("DERTOOLS_ZIGZAG_STEPS"),
            "size_limit": os.environ.get("DERTOOLS_SIZE_LIMIT"),
        }
        kw = {k: int(v) for k, v in env.items() if v is not None}
        kw.update({k: v for k, v in overrides.items() if v is not None})
        b = cls(**kw)
        if min(b.max_dim, b.tietze_moves, b.zigzag_steps, b.size_limit) <= 0:
            raise ValueError("budgets must be positive")
        return b


CONTRACTIBLE = "contractible"
NOT_CONTRACTIBLE = "not_contractible"
INCONCLUSIVE = "inconclusive"


@dataclass
class ContractibilityVerdict:
    """Outcome of :func:`decide_contractible`.

    ``step`` names the ladder rung that decided; ``witness`` is data that
    :func:`recheck` can confirm (an object, a homology degree, a reduction
    sequence); ``trace`` records each rung tried.
    """

    status: str
    step: str
    witness: object = None
    trace: list = field(default_factory=list)

    @property
    def contractible(self) -> bool:
        return self.status == CONTRACTIBLE

    @property
    def decided(self) -> bool:
        return self.status != INCONCLUSIVE

    def __str__(self):
        return f"{self.status} ({self.step})"


def _reflective_reduction(C: FinCat, steps: int):
    """Greedily drop objects whose removal leaves a (co)reflective full subcategory.

    Returns the removal sequence and the final category, which is homotopy
    equivalent to ``C`` (the inclusion is an adjoint).
    """
    removed = []
    cur = C
    used = 0
    while len(cur.objects) > 1:
        if cur.initial_objects() or cur.terminal_objects():
            break
        progress = False
        for x in cur.objects:
            used += 1
            if used > steps:
                return removed, cur, True
            rest = [y for y in cur.objects if y != x]
            sub, inc = full_subcategory(cur, rest)
            if _has_universal_arrow(cur, x, rest, "out") or _has_universal_arrow(cur, x, rest, "in"):
                removed.append(x)
                cur = sub
                progress = True
                break
        if not progress:
            break
    return removed, cur, False


def _has_universal_arrow(C: FinCat, x, rest, direction: str) -> bool:
    """Is there an initial arrow x → r (or terminal arrow r → x) with r in ``rest``?"""
    if direction == "out":
        cands = [(r, g) for r in rest for g in C.hom(x, r)]
        for r, g in cands:
            if all(sum(1 for s in C.hom(r, r2) if C.comp[(s, g)] == g2) == 1
                   for r2, g2 in cands):
                return True
        return False
    cands = [(r, g) for r in rest for g in C.hom(r, x)]
    for r, g in cands:
        if all(sum(1 for s in C.hom(r2, r) if C.comp[(g, s)] == g2) == 1
               for r2, g2 in cands):
            return True
    return False


def decide_contractible(C: FinCat, budget: Budget | None = None) -> ContractibilityVerdict:
    """Three-valued decision of homotopy contractibility.

    Ladder: empty or disconnected; initial/terminal object; reduction along
    reflective or coreflective full subcategories; for loop-free categories
    reduced homology plus a Tietze-simplified π1 presentation. Contractible
    and not-contractible answers are sound; anything else is inconclusive.
    """
    budget = budget or Budget()
    trace = []
    if not C.objects:
        return ContractibilityVerdict(NOT_CONTRACTIBLE, "empty", None, ["empty"])
    comps = C.components()
    if len(comps) > 1:
        return ContractibilityVerdict(NOT_CONTRACTIBLE, "disconnected",
                                      [c[0] for c in comps[:2]], ["disconnected"])
    trace.append("connected")
    ini, ter = C.initial_objects(), C.terminal_objects()
    if ini:
        return ContractibilityVerdict(CONTRACTIBLE, "initial_object", ("initial", ini[0]),
                                      trace + ["initial object"])
    if ter:
        return ContractibilityVerdict(CONTRACTIBLE, "terminal_object", ("terminal", ter[0]),
                                      trace + ["terminal object"])
    trace.append("no initial/terminal object")
    removed, reduced, ran_out = _reflective_reduction(C, budget.zigzag_steps)
    if reduced.initial_objects() or reduced.terminal_objects() or len(reduced.objects) == 1 \
            and len(reduced.morphisms) == 1:
        return ContractibilityVerdict(CONTRACTIBLE, "adjunction_zigzag", tuple(removed),
                                      trace + [f"reduced by removing {len(removed)} objects"])
    trace.append("zigzag search " + ("exhausted budget" if ran_out else "stalled"))
    work = reduced
    loop_free = work.is_loop_free()
    try:
        X = nerve_complex(work, None if loop_free else budget.max_dim)
    except MemoryError:
        return ContractibilityVerdict(INCONCLUSIVE, "budget", None, trace + ["nerve too large"])
    table = homology_table(X, reduced=True)
    for n, H in table.items():
        if not H.is_zero():
            return ContractibilityVerdict(NOT_CONTRACTIBLE, "homology", (n, H),
                                          trace + [f"reduced H_{n} = {H}"])
    trace.append(f"reduced homology vanishes through degree {max(table) if table else 0}")
    if not X.complete:
        return ContractibilityVerdict(INCONCLUSIVE, "budget", None,
                                      trace + ["nerve not loop-free; higher homology unchecked"])
    result = simplify(fundamental_group_presentation(work), budget.tietze_moves)
    if result.trivial:
        return ContractibilityVerdict(CONTRACTIBLE, "homology_and_pi1", (tuple(removed),
                                      result.moves), trace + ["π1 presentation trivial"])
    trace.append(f"π1 not trivialized ({len(result.presentation.generators)} generators left"
                 + (", budget exhausted)" if result.exhausted else ")"))
    return ContractibilityVerdict(INCONCLUSIVE, "budget", None, trace)


def recheck(C: FinCat, verdict: ContractibilityVerdict) -> bool:
    """Re-verify a verdict's witness independently of the ladder that produced it."""
    if verdict.status == INCONCLUSIVE:
        return True
    if verdict.step == "empty":
        return not C.objects
    if verdict.step == "disconnected":
        return len(C.components()) > 1
    if verdict.step in ("initial_object", "terminal_object"):
        kind, x = verdict.witness
        objs = C.initial_objects() if kind == "initial" else C.terminal_objects()
        return x in objs
    if verdict.step == "homology":
        n, H = verdict.witness
        loop_free = C.is_loop_free()
        X = nerve_complex(C, None if loop_free else n + 1)
        return homology(X, n, reduced=True) == H and not H.is_zero()
    if verdict.step == "adjunction_zigzag":
        cur = C
        for x in verdict.witness:
            rest = [y for y in cur.objects if y != x]
            if not (_has_universal_arrow(cur, x, rest, "out")
                    or _has_universal_arrow(cur, x, rest, "in")):
                return False
            cur = full_subcategory(cur, rest)[0]
        return bool(cur.initial_objects() or cur.terminal_objects())
    if verdict.step == "homology_and_pi1":
        removed, _ = verdict.witness
        cur = C
        for x in removed:
            cur = full_subcategory(cur, [y for y in cur.objects if y != x])[0]
        X = nerve_complex(cur)
        return (all(H.is_zero() for H in homology_table(X, reduced=True).values())
                and simplify(fundamental_group_presentation(cur)).trivial)
    return False


def adjoint_reduction_available(C: FinCat, sub_objects) -> bool:
    """Whether the inclusion of the full subcategory on ``sub_objects`` has an adjoint."""
    _, inc = full_subcategory(C, sub_objects)
    return find_adjoint(inc, "left") is not None or find_adjoint(inc, "right") is not None
