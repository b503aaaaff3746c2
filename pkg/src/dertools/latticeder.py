"""The derivator represented by a finite lattice.

A diagram of shape A is a monotone assignment of lattice elements to the
objects of A. Left Kan extension along u: A → B is the pointwise join over
the objects a with some arrow u a → b; right Kan extension is the meet over
those with some arrow b → u a. Empty joins are ⊥ and empty meets are ⊤.
Since all 2-cells collapse to the order, a mate is invertible exactly when
its two sides are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product as iproduct

import numpy as np

from .constructions import Cone, find_adjoint, induced_over_functor
from .fincat import (
    FinCat,
    FunctorData,
    SquareData,
    StructuralError,
    poset_category,
    sort_key,
    square,
)


class LatticeError(ValueError):
    pass


class LatticePoset:
    """A finite lattice with precomputed order, join and meet tables.

    Elements are arbitrary hashable labels. ``leq_matrix[i, j]`` holds when
    element i ≤ element j; ``join_table`` and ``meet_table`` hold indices.
    """

    def __init__(self, elements, leq_matrix, name: str = ""):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise LatticeError("duplicate lattice elements")
        n = len(self.elements)
        if n == 0:
            raise LatticeError("a lattice has at least one element")
        le = np.asarray(leq_matrix, dtype=bool)
        if le.shape != (n, n):
            raise LatticeError("order matrix has the wrong shape")
        if not le.diagonal().all():
            raise LatticeError("order is not reflexive")
        if (le & le.T & ~np.eye(n, dtype=bool)).any():
            raise LatticeError("order is not antisymmetric")
        if ((le.astype(np.int64) @ le.astype(np.int64) > 0) & ~le).any():
            raise LatticeError("order is not transitive")
        self.leq_matrix = le
        self.name = name
        self.join_table = self._bounds(le)
        self.meet_table = self._bounds(le.T)
        self.bottom = self.elements[int(np.flatnonzero(le.all(axis=1))[0])]
        self.top = self.elements[int(np.flatnonzero(le.all(axis=0))[0])]

    def _bounds(self, le: np.ndarray) -> np.ndarray:
        """Least upper bounds with respect to ``le`` (pass the transpose for meets)."""
        n = len(self.elements)
        out = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                ub = np.flatnonzero(le[i] & le[j])
                least = [c for c in ub if le[c, ub].all()]
                if not least:
                    raise LatticeError(
                        f"{self.elements[i]!r} and {self.elements[j]!r} have no least bound")
                out[i, j] = out[j, i] = least[0]
        return out

    @classmethod
    def from_covers(cls, elements, covers, name: str = "") -> "LatticePoset":
        """Build from cover (or any generating) relations ``(a, b)`` meaning a < b."""
        elements = list(elements)
        idx = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        le = np.eye(n, dtype=bool)
        for a, b in covers:
            if a not in idx or b not in idx:
                raise LatticeError(f"cover ({a!r}, {b!r}) names an unknown element")
            le[idx[a], idx[b]] = True
        for k in range(n):
            le |= le[:, [k]] & le[[k], :]
        return cls(elements, le, name)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"LatticePoset({self.name or len(self.elements)})"

    def leq(self, a, b) -> bool:
        return bool(self.leq_matrix[self.index[a], self.index[b]])

    def join(self, a, b):
        return self.elements[self.join_table[self.index[a], self.index[b]]]

    def meet(self, a, b):
        return self.elements[self.meet_table[self.index[a], self.index[b]]]

    def join_all(self, xs):
        return reduce(self.join, xs, self.bottom)

    def meet_all(self, xs):
        return reduce(self.meet, xs, self.top)

    def covers(self) -> list:
        le = self.leq_matrix
        out = []
        for i, j in zip(*np.nonzero(le & ~np.eye(len(le), dtype=bool))):
            between = le[i] & le[:, j]
            if between.sum() == 2:
                out.append((self.elements[i], self.elements[j]))
        return sorted(out, key=sort_key)

    def as_category(self) -> FinCat:
        return poset_category(self.elements, self.covers(), name=self.name)

    def check_bounds(self) -> list[str]:
        """Re-verify join/meet tables against the order; returns violations."""
        bad = []
        le = self.leq_matrix
        n = len(self.elements)
        for i in range(n):
            for j in range(n):
                for table, rel, what in ((self.join_table, le, "join"),
                                         (self.meet_table, le.T, "meet")):
                    k = table[i, j]
                    if not (rel[i, k] and rel[j, k]):
                        bad.append(f"{what}({self.elements[i]}, {self.elements[j]}) not a bound")
                    elif not all(rel[k, c] for c in range(n) if rel[i, c] and rel[j, c]):
                        bad.append(f"{what}({self.elements[i]}, {self.elements[j]}) not least")
        return bad


def chain_lattice(n: int) -> LatticePoset:
    return LatticePoset.from_covers(range(n), [(i, i + 1) for i in range(n - 1)],
                                    name=f"chain{n}")


def boolean_lattice(k: int) -> LatticePoset:
    """Subsets of {1..k}, labelled by strings such as '13' and '0' for the empty set."""
    def label(mask):
        return "".join(str(i + 1) for i in range(k) if mask >> i & 1) or "0"

    elems = [label(m) for m in range(1 << k)]
    covers = [(label(m), label(m | 1 << i)) for m in range(1 << k) for i in range(k)
              if not m >> i & 1]
    return LatticePoset.from_covers(elems, covers, name=f"B{k}")


def n5() -> LatticePoset:
    return LatticePoset.from_covers(
        ["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        name="N5")


def m3() -> LatticePoset:
    return LatticePoset.from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")], name="M3")


def divisor_lattice(n: int) -> LatticePoset:
    ds = [d for d in range(1, n + 1) if n % d == 0]
    return LatticePoset.from_covers(ds, [(a, b) for a in ds for b in ds if a != b and b % a == 0],
                                    name=f"Div{n}")


def product_lattice(L1: LatticePoset, L2: LatticePoset) -> LatticePoset:
    elems = list(iproduct(L1.elements, L2.elements))
    le = np.kron(L1.leq_matrix.astype(np.int8), L2.leq_matrix.astype(np.int8)).astype(bool)
    return LatticePoset(elems, le, name=f"{L1.name}x{L2.name}")


def standard_lattices() -> list[LatticePoset]:
    """The five fixed test lattices: two chains, the square, N5 and M3."""
    return [chain_lattice(2), chain_lattice(3), boolean_lattice(2), n5(), m3()]


# -- diagrams -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticeDiagram:
    """A monotone map from the objects of ``shape`` into ``lattice``."""

    shape: FinCat
    lattice: LatticePoset
    values: dict

    def __post_init__(self):
        missing = [x for x in self.shape.objects if x not in self.values]
        if missing:
            raise StructuralError(f"diagram has no value at {missing[0]!r}")
        for x in self.shape.objects:
            if self.values[x] not in self.lattice.index:
                raise LatticeError(f"value {self.values[x]!r} at {x!r} is not in the lattice")
        for m in self.shape.nonidentity():
            s, t = self.shape.src[m], self.shape.tgt[m]
            if not self.lattice.leq(self.values[s], self.values[t]):
                raise LatticeError(f"diagram not monotone along {m!r}: {s!r} -> {t!r}")

    def __getitem__(self, x):
        return self.values[x]

    def __eq__(self, other):
        return (isinstance(other, LatticeDiagram) and self.shape == other.shape
                and self.values == other.values)

    def __hash__(self):
        return hash(tuple(sorted(map(str, self.values.items()))))

    def __repr__(self):
        body = ", ".join(f"{k}: {self.values[k]}" for k in sorted(self.values, key=sort_key))
        return f"LatticeDiagram({body})"

    def leq(self, other: "LatticeDiagram") -> bool:
        return all(self.lattice.leq(self.values[x], other.values[x]) for x in self.shape.objects)


def constant_diagram(shape: FinCat, L: LatticePoset, x) -> LatticeDiagram:
    return LatticeDiagram(shape, L, {a: x for a in shape.objects})


def restrict(u: FunctorData, Y: LatticeDiagram) -> LatticeDiagram:
    """u* Y = Y ∘ u."""
    if Y.shape != u.cod:
        raise StructuralError("diagram shape does not match the functor's codomain")
    return LatticeDiagram(u.dom, Y.lattice, {a: Y.values[u(a)] for a in u.dom.objects})


def kan_extend(u: FunctorData, X: LatticeDiagram, direction: str = "left") -> LatticeDiagram:
    """Pointwise left (join) or right (meet) Kan extension of ``X`` along ``u``."""
    if X.shape != u.dom:
        raise StructuralError("diagram shape does not match the functor's domain")
    L, A, B = X.lattice, u.dom, u.cod
    vals = {}
    for b in B.objects:
        if direction == "left":
            vals[b] = L.join_all(X.values[a] for a in A.objects if B.hom(u(a), b))
        elif direction == "right":
            vals[b] = L.meet_all(X.values[a] for a in A.objects if B.hom(b, u(a)))
        else:
            raise ValueError("direction must be 'left' or 'right'")
    Y = LatticeDiagram(B, L, vals)
    back = restrict(u, Y)
    if direction == "left" and not X.leq(back) or direction == "right" and not back.leq(X):
        raise AssertionError("Kan extension fails its adjunction inequality")
    return Y


def all_diagrams(shape: FinCat, L: LatticePoset) -> np.ndarray:
    """Every monotone diagram as a row of element indices (objects in ``shape`` order)."""
    objs = list(shape.objects)
    pos = {x: i for i, x in enumerate(objs)}
    edges = {(pos[shape.src[m]], pos[shape.tgt[m]]) for m in shape.nonidentity()}
    rows = np.zeros((1, 0), dtype=np.int64)
    n = len(L)
    for k in range(len(objs)):
        cand = np.repeat(rows, n, axis=0)
        cand = np.hstack([cand, np.tile(np.arange(n), len(rows))[:, None]])
        ok = np.ones(len(cand), dtype=bool)
        for s, t in edges:
            if max(s, t) == k:
                ok &= L.leq_matrix[cand[:, s], cand[:, t]]
        rows = cand[ok]
    return rows


def kan_extend_rows(u: FunctorData, L: LatticePoset, rows, direction: str = "left"
                    ) -> np.ndarray:
    """:func:`kan_extend` applied to many diagrams at once.

    ``rows`` holds element indices in ``u.dom.objects`` order (as produced by
    :func:`all_diagrams`); the result has one row per input in ``u.cod.objects``
    order.
    """
    A, B = u.dom, u.cod
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        # a flat array cannot be reshaped against an empty domain
        rows = rows.reshape(-1, len(A.objects)) if A.objects else np.zeros((1, 0), np.int64)
    a_objs = list(A.objects)
    if direction == "left":
        table, empty = L.join_table, L.index[L.bottom]
        reach = lambda b, a: B.hom(u(a), b)  # noqa: E731
    elif direction == "right":
        table, empty = L.meet_table, L.index[L.top]
        reach = lambda b, a: B.hom(b, u(a))  # noqa: E731
    else:
        raise ValueError("direction must be 'left' or 'right'")
    out = np.empty((len(rows), len(B.objects)), dtype=np.int64)
    for j, b in enumerate(B.objects):
        acc = np.full(len(rows), empty, dtype=np.int64)
        for i, a in enumerate(a_objs):
            if reach(b, a):
                acc = table[acc, rows[:, i]]
        out[:, j] = acc
    return out


def diagrams_from_rows(shape: FinCat, L: LatticePoset, rows) -> list[LatticeDiagram]:
    objs = list(shape.objects)
    return [LatticeDiagram(shape, L, {x: L.elements[r[i]] for i, x in enumerate(objs)})
            for r in rows]


# -- squares ------------------------------------------------------------------------


def beck_chevalley_sides(sq: SquareData, X: LatticeDiagram):
    """(q_! p* X, v* u_! X) as diagrams on B."""
    lhs = kan_extend(sq.q, restrict(sq.p, X), "left")
    rhs = restrict(sq.v, kan_extend(sq.u, X, "left"))
    return lhs, rhs


def beck_chevalley_holds(sq: SquareData, L: LatticePoset, X: LatticeDiagram) -> bool:
    if X.shape != sq.A:
        raise StructuralError("diagram must live on the square's A")
    if X.lattice is not L:
        X = LatticeDiagram(X.shape, L, dict(X.values))
    lhs, rhs = beck_chevalley_sides(sq, X)
    return lhs.values == rhs.values


def _square_check(X: LatticeDiagram):
    if set(X.shape.objects) != set(square().objects) or X.shape != square():
        raise StructuralError("diagram must have the square shape")


def is_cocartesian_poset(X: LatticeDiagram) -> bool:
    _square_check(X)
    L = X.lattice
    return X[(1, 1)] == L.join(X[(0, 1)], X[(1, 0)])


def is_cartesian_poset(X: LatticeDiagram) -> bool:
    _square_check(X)
    L = X.lattice
    return X[(0, 0)] == L.meet(X[(0, 1)], X[(1, 0)])


def in_essential_image(u: FunctorData, Y: LatticeDiagram, direction: str = "left") -> bool:
    """Whether Y equals the Kan extension of its own restriction along u."""
    return kan_extend(u, restrict(u, Y), direction).values == Y.values


def is_colimiting(cone: Cone, Y: LatticeDiagram) -> bool:
    """Y on A^▷ is a colimit cocone: its apex value is the join of the rest."""
    if Y.shape != cone.category:
        raise StructuralError("diagram must live on the cone category")
    return in_essential_image(cone.incl, Y, "left")


def check_detection_hypotheses(u: FunctorData, v: FunctorData, Bprime, cone: Cone) -> bool:
    """Hypotheses under which v* u_! X is a colimiting cocone for every X.

    u: C → B and v: A^▷ → B with A^▷ the given cone; Bprime a set of objects of B.
    """
    B = u.cod
    if v.cod != B or v.dom != cone.category:
        raise StructuralError("v must map the cone category into the codomain of u")
    Bp = set(Bprime)
    if not Bp <= set(B.objects):
        raise StructuralError("B' must be a set of objects of B")
    if not all(u(c) in Bp for c in u.dom.objects) or v(cone.infinity) in Bp:
        return False
    A = cone.incl.dom
    if not all(v(cone.incl(a)) in Bp for a in A.objects):
        return False
    induced = induced_over_functor(v, cone, sorted(Bp, key=sort_key))
    return find_adjoint(induced, "left") is not None


# -- diagram categories ------------------------------------------------------------------


def diagram_category(A: FinCat, L: LatticePoset) -> FinCat:
    """The poset of all diagrams of shape A in L, ordered pointwise.

    Objects are tuples of lattice elements listed in ``A.objects`` order.
    """
    rows = all_diagrams(A, L)
    objs = [tuple(L.elements[i] for i in r) for r in rows]
    le = L.leq_matrix
    rels = [(objs[i], objs[j]) for i in range(len(rows)) for j in range(len(rows))
            if i != j and le[rows[i], rows[j]].all()]
    return poset_category(objs, rels, name=f"{L.name}^{A.name or 'A'}", closure=False)


def restriction_functor(u: FunctorData, L: LatticePoset) -> FunctorData:
    """u*: L^B → L^A between diagram categories."""
    DA, DB = diagram_category(u.dom, L), diagram_category(u.cod, L)
    posB = {b: i for i, b in enumerate(u.cod.objects)}
    omap = {y: tuple(y[posB[u(a)]] for a in u.dom.objects) for y in DB.objects}
    mmap = {m: (omap[m[0]], omap[m[1]]) for m in DB.morphisms}
    return FunctorData(DB, DA, omap, mmap, check=False)


def diagram_as_tuple(X: LatticeDiagram) -> tuple:
    return tuple(X.values[a] for a in X.shape.objects)
