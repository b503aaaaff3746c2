"""Homotopy exactness of squares and homotopy finality of functors.

A square is decided by its triple fibers (a/D/b)_γ, one for every a, b and
γ: u a → v b. The square is exact when every fiber is contractible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constructions import final_square, slice_under, triple_fiber
from .fincat import FunctorData, SquareData, sort_key
from .nerve import (
    CONTRACTIBLE,
    INCONCLUSIVE,
    NOT_CONTRACTIBLE,
    Budget,
    ContractibilityVerdict,
    decide_contractible,
    recheck,
)

EXACT = "exact"
NOT_EXACT = "not_exact"


@dataclass
class ExactnessVerdict:
    """``witnesses`` maps each examined (a, b, γ) to its fiber verdict.

    For a NotExact result ``witness`` is the first triple, in the fixed
    enumeration order, whose fiber is not contractible. ``undecided`` lists
    fibers the contractibility ladder could not settle.
    """

    status: str
    witnesses: dict = field(default_factory=dict)
    witness: tuple | None = None
    undecided: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def __str__(self):
        if self.status == NOT_EXACT:
            return f"{self.status} at {self.witness}"
        return self.status


def fiber_triples(sq: SquareData):
    """All (a, b, γ) with γ: u a → v b, ordered by the string form of the ids."""
    for a in sorted(sq.A.objects, key=sort_key):
        for b in sorted(sq.B.objects, key=sort_key):
            for g in sorted(sq.C.hom(sq.u(a), sq.v(b)), key=sort_key):
                yield a, b, g


def _aggregate(items, budget: Budget) -> ExactnessVerdict:
    out = ExactnessVerdict(EXACT)
    for key, build in items:
        verdict = decide_contractible(build(), budget)
        out.witnesses[key] = verdict
        if verdict.status == NOT_CONTRACTIBLE:
            out.status, out.witness = NOT_EXACT, key
            return out
        if verdict.status == INCONCLUSIVE:
            out.undecided.append(key)
    if out.undecided:
        out.status = INCONCLUSIVE
    return out


def check_homotopy_exact(sq: SquareData, budget: Budget | None = None) -> ExactnessVerdict:
    budget = budget or Budget()
    items = ((t, lambda t=t: triple_fiber(sq, *t, limit=budget.size_limit))
             for t in fiber_triples(sq))
    return _aggregate(items, budget)


def check_homotopy_final(f: FunctorData, budget: Budget | None = None) -> ExactnessVerdict:
    """Sufficient test for homotopy finality: every (b/f) contractible.

    Keys in ``witnesses`` are objects b of the codomain.
    """
    budget = budget or Budget()
    items = ((b, lambda b=b: slice_under(b, f, limit=budget.size_limit).category)
             for b in sorted(f.cod.objects, key=sort_key))
    return _aggregate(items, budget)


def recheck_witness(sq: SquareData, verdict: ExactnessVerdict) -> bool:
    """Rebuild the reported fiber(s) and confirm each stored verdict."""
    for key, v in verdict.witnesses.items():
        if not recheck(triple_fiber(sq, *key), v):
            return False
    if verdict.status == NOT_EXACT:
        return verdict.witnesses[verdict.witness].status == NOT_CONTRACTIBLE
    if verdict.status == EXACT:
        return set(verdict.witnesses) == set(fiber_triples(sq)) and all(
            v.status == CONTRACTIBLE for v in verdict.witnesses.values())
    return True


def fiber_verdict(sq: SquareData, a, b, gamma, budget: Budget | None = None
                  ) -> ContractibilityVerdict:
    return decide_contractible(triple_fiber(sq, a, b, gamma), budget or Budget())


__all__ = [
    "EXACT", "NOT_EXACT", "INCONCLUSIVE", "ExactnessVerdict", "check_homotopy_exact",
    "check_homotopy_final", "fiber_triples", "recheck_witness", "final_square",
    "fiber_verdict",
]
