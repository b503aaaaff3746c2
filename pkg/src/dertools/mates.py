"""Mates of 2-cells in squares of functors between finite categories.

A :class:`MateSquare` has functors

    f: A → B (top)     h: A → C (left)
    k: B → D (right)   g: C → D (bottom)

and a 2-cell α: k f ⇒ g h. If f and g have left adjoints f_!, g_! the left
mate is α_!: g_! k ⇒ h f_!; if h and k have right adjoints the right mate is
α_*: f h_* ⇒ k_* g. Components are computed by explicit whiskering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fincat import (
    AdjunctionData,
    FunctorData,
    NatTransData,
    StructuralError,
    ValidationReport,
    compose_functors,
    identity_functor,
    identity_nat,
    naturality_violations,
    vcompose,
    whisker_left,
    whisker_right,
)


class MissingAdjunction(ValueError):
    pass


# -- adjunctions ---------------------------------------------------------------------


def check_adjunction(adj: AdjunctionData) -> ValidationReport:
    """Verify shapes, naturality of unit and counit, and both triangle identities."""
    F, G = adj.left, adj.right
    if F.dom != G.cod or F.cod != G.dom:
        raise StructuralError("left and right functors do not point in opposite directions")
    X, Y = F.dom, F.cod
    out = []
    if adj.unit.source.dom != X or adj.counit.source.dom != Y:
        raise StructuralError("unit or counit has the wrong domain")
    out += [f"unit: {m}" for m in naturality_violations(adj.unit)]
    out += [f"counit: {m}" for m in naturality_violations(adj.counit)]
    if out:
        return ValidationReport(out)
    for x in X.objects:
        got = Y.comp[(adj.counit[F(x)], F.on(adj.unit[x]))]
        if got != Y.ident[F(x)]:
            out.append(f"left triangle identity (εF)(Fη) = 1 fails at {x!r}")
    for y in Y.objects:
        got = X.comp[(G.on(adj.counit[y]), adj.unit[G(y)])]
        if got != X.ident[G(y)]:
            out.append(f"right triangle identity (Gε)(ηG) = 1 fails at {y!r}")
    return ValidationReport(out)


def compose_adjunctions(first: AdjunctionData, second: AdjunctionData) -> AdjunctionData:
    """Adjunction for ``second.right ∘ first.right`` with left adjoint
    ``first.left ∘ second.left``."""
    L1, R1, L2, R2 = first.left, first.right, second.left, second.right
    if R1.cod != R2.dom:
        raise StructuralError("right adjoints are not composable")
    L, R = compose_functors(L1, L2), compose_functors(R2, R1)
    unit = vcompose(whisker_left(R2, whisker_right(first.unit, L2)), second.unit)
    counit = vcompose(first.counit, whisker_left(L1, whisker_right(second.counit, R1)))
    return AdjunctionData(
        L, R,
        NatTransData(identity_functor(L2.dom), compose_functors(R, L), unit.components),
        NatTransData(compose_functors(L, R), identity_functor(L1.cod), counit.components))


def identity_adjunction(C) -> AdjunctionData:
    one = identity_functor(C)
    return AdjunctionData(one, one, identity_nat(one), identity_nat(one))


# -- squares -------------------------------------------------------------------------


@dataclass(eq=False)
class MateSquare:
    """``left_adj[x]`` is an adjunction whose right functor is x; ``right_adj[x]``
    one whose left functor is x, for x among 'f', 'g', 'h', 'k'."""

    f: FunctorData
    h: FunctorData
    k: FunctorData
    g: FunctorData
    alpha: NatTransData
    left_adj: dict = field(default_factory=dict)
    right_adj: dict = field(default_factory=dict)

    def __post_init__(self):
        f, h, k, g = self.f, self.h, self.k, self.g
        if f.dom != h.dom or f.cod != k.dom or h.cod != g.dom or k.cod != g.cod:
            raise StructuralError("square boundary functors do not fit together")
        kf, gh = compose_functors(k, f), compose_functors(g, h)
        if self.alpha.source != kf or self.alpha.target != gh:
            raise StructuralError("α must go from k∘f to g∘h")
        for name, adj in self.left_adj.items():
            if adj.right != getattr(self, name):
                raise StructuralError(f"left adjunction for {name} has the wrong right functor")
        for name, adj in self.right_adj.items():
            if adj.left != getattr(self, name):
                raise StructuralError(f"right adjunction for {name} has the wrong left functor")

    def _left(self, name) -> AdjunctionData:
        if name not in self.left_adj:
            raise MissingAdjunction(f"{name} needs a left adjoint for this mate")
        return self.left_adj[name]

    def _right(self, name) -> AdjunctionData:
        if name not in self.right_adj:
            raise MissingAdjunction(f"{name} needs a right adjoint for this mate")
        return self.right_adj[name]


def _chain(*steps: NatTransData) -> NatTransData:
    """Vertical composite of steps listed in the order they are applied."""
    out = steps[0]
    for s in steps[1:]:
        out = vcompose(s, out)
    return out


def mate(sq: MateSquare, direction: str = "left") -> NatTransData:
    if direction == "left":
        af, ag = sq._left("f"), sq._left("g")
        f_lower, g_lower = af.left, ag.left
        step1 = whisker_left(compose_functors(g_lower, sq.k), af.unit)
        step2 = whisker_left(g_lower, whisker_right(sq.alpha, f_lower))
        step3 = whisker_right(ag.counit, compose_functors(sq.h, f_lower))
        out = _chain(step1, step2, step3)
        return NatTransData(compose_functors(g_lower, sq.k),
                            compose_functors(sq.h, f_lower), out.components)
    if direction == "right":
        ah, ak = sq._right("h"), sq._right("k")
        h_upper, k_upper = ah.right, ak.right
        step1 = whisker_right(ak.unit, compose_functors(sq.f, h_upper))
        step2 = whisker_left(k_upper, whisker_right(sq.alpha, h_upper))
        step3 = whisker_left(compose_functors(k_upper, sq.g), ah.counit)
        out = _chain(step1, step2, step3)
        return NatTransData(compose_functors(sq.f, h_upper),
                            compose_functors(k_upper, sq.g), out.components)
    raise ValueError("direction must be 'left' or 'right'")


def reorient_left_mate(sq: MateSquare) -> MateSquare:
    """α_! as a square: top k, left f_!, right g_!, bottom h.

    f_! and g_! carry right adjoints f and g, so the right mate applies; if
    k and h have left adjoints the left mate applies as well.
    """
    af, ag = sq._left("f"), sq._left("g")
    left_adj = {}
    if "k" in sq.left_adj:
        left_adj["f"] = sq.left_adj["k"]
    if "h" in sq.left_adj:
        left_adj["g"] = sq.left_adj["h"]
    return MateSquare(sq.k, af.left, ag.left, sq.h, mate(sq, "left"),
                      left_adj=left_adj, right_adj={"h": af, "k": ag})


def reorient_right_mate(sq: MateSquare) -> MateSquare:
    """α_* as a square: top h_*, left g, right f, bottom k_*."""
    ah, ak = sq._right("h"), sq._right("k")
    right_adj = {}
    if "g" in sq.right_adj:
        right_adj["h"] = sq.right_adj["g"]
    if "f" in sq.right_adj:
        right_adj["k"] = sq.right_adj["f"]
    return MateSquare(ah.right, sq.g, sq.f, ak.right, mate(sq, "right"),
                      left_adj={"f": ah, "g": ak}, right_adj=right_adj)


def round_trip(sq: MateSquare, direction: str = "left") -> NatTransData:
    """(α_!)_* for ``left``, (α_*)_! for ``right``; both should return α."""
    if direction == "left":
        return mate(reorient_left_mate(sq), "right")
    return mate(reorient_right_mate(sq), "left")


def composite_square(sq: MateSquare) -> MateSquare:
    """α viewed in the square with top k∘f, identity sides and bottom g∘h."""
    A, D = sq.f.dom, sq.g.cod
    kf, gh = compose_functors(sq.k, sq.f), compose_functors(sq.g, sq.h)
    left_adj = {}
    if all(x in sq.left_adj for x in "fghk"):
        left_adj["f"] = compose_adjunctions(sq.left_adj["f"], sq.left_adj["k"])
        left_adj["g"] = compose_adjunctions(sq.left_adj["h"], sq.left_adj["g"])
    alpha = NatTransData(compose_functors(identity_functor(D), kf),
                         compose_functors(gh, identity_functor(A)), sq.alpha.components)
    return MateSquare(kf, identity_functor(A), identity_functor(D), gh, alpha,
                      left_adj=left_adj)


def iterated_mates(sq: MateSquare) -> tuple[NatTransData, NatTransData]:
    """The two constructions of h_! g_! ⇒ f_! k_!: iterating the left mate, and
    the left mate of the composite square."""
    twice = mate(reorient_left_mate(sq), "left")
    once = mate(composite_square(sq), "left")
    return twice, once


# -- pasting -------------------------------------------------------------------------


def paste_mate_horizontal(left: MateSquare, right: MateSquare) -> MateSquare:
    """``right`` glued along the edge ``left.k == right.h``."""
    if left.k != right.h:
        raise StructuralError("squares do not share the middle edge")
    f = compose_functors(right.f, left.f)
    g = compose_functors(right.g, left.g)
    first = whisker_right(right.alpha, left.f)
    second = whisker_left(right.g, left.alpha)
    alpha = NatTransData(compose_functors(right.k, f), compose_functors(g, left.h),
                         vcompose(second, first).components)
    left_adj = {}
    if all(x in d.left_adj for d in (left, right) for x in "fg"):
        left_adj["f"] = compose_adjunctions(left.left_adj["f"], right.left_adj["f"])
        left_adj["g"] = compose_adjunctions(left.left_adj["g"], right.left_adj["g"])
    right_adj = {}
    if "h" in left.right_adj and "k" in right.right_adj:
        right_adj = {"h": left.right_adj["h"], "k": right.right_adj["k"]}
    return MateSquare(f, left.h, right.k, g, alpha, left_adj, right_adj)


def paste_mate_vertical(top: MateSquare, bottom: MateSquare) -> MateSquare:
    """``bottom`` glued along the edge ``top.g == bottom.f``."""
    if top.g != bottom.f:
        raise StructuralError("squares do not share the middle edge")
    h = compose_functors(bottom.h, top.h)
    k = compose_functors(bottom.k, top.k)
    first = whisker_left(bottom.k, top.alpha)
    second = whisker_right(bottom.alpha, top.h)
    alpha = NatTransData(compose_functors(k, top.f), compose_functors(bottom.g, h),
                         vcompose(second, first).components)
    left_adj = {}
    if "f" in top.left_adj and "g" in bottom.left_adj:
        left_adj = {"f": top.left_adj["f"], "g": bottom.left_adj["g"]}
    right_adj = {}
    if all(x in d.right_adj for d in (top, bottom) for x in "hk"):
        # the left functor of compose_adjunctions(x, y) is x.left ∘ y.left
        right_adj["h"] = compose_adjunctions(bottom.right_adj["h"], top.right_adj["h"])
        right_adj["k"] = compose_adjunctions(bottom.right_adj["k"], top.right_adj["k"])
    return MateSquare(top.f, h, k, bottom.g, alpha, left_adj, right_adj)


def pasted_left_mate_horizontal(left: MateSquare, right: MateSquare) -> NatTransData:
    """(α1_! f2_!) · (g1_! α2_!): g1_! g2_! k2 ⇒ h1 f1_! f2_!."""
    m1, m2 = mate(left, "left"), mate(right, "left")
    f2_lower = right._left("f").left
    g1_lower = left._left("g").left
    step1 = whisker_left(g1_lower, m2)
    step2 = whisker_right(m1, f2_lower)
    out = vcompose(step2, step1)
    return NatTransData(step1.source, step2.target, out.components)


def pasted_left_mate_vertical(top: MateSquare, bottom: MateSquare) -> NatTransData:
    """(h2 α1_!) · (α2_! k1): g2_! k2 k1 ⇒ h2 h1 f1_!."""
    m1, m2 = mate(top, "left"), mate(bottom, "left")
    step1 = whisker_right(m2, top.k)
    step2 = whisker_left(bottom.h, m1)
    out = vcompose(step2, step1)
    return NatTransData(step1.source, step2.target, out.components)


def pasted_right_mate_horizontal(left: MateSquare, right: MateSquare) -> NatTransData:
    """(α2_* g1) · (f2 α1_*): f2 f1 h1_* ⇒ f2 k1_* g1 ⇒ k2_* g2 g1."""
    m1, m2 = mate(left, "right"), mate(right, "right")
    step1 = whisker_left(right.f, m1)
    step2 = whisker_right(m2, left.g)
    out = vcompose(step2, step1)
    return NatTransData(step1.source, step2.target, out.components)


def pasted_right_mate_vertical(top: MateSquare, bottom: MateSquare) -> NatTransData:
    """(k1_* α2_*) · (α1_* h2_*): f1 h1_* h2_* ⇒ k1_* g1 h2_* ⇒ k1_* k2_* g2."""
    m1, m2 = mate(top, "right"), mate(bottom, "right")
    h2_upper = bottom._right("h").right
    k1_upper = top._right("k").right
    step1 = whisker_right(m1, h2_upper)
    step2 = whisker_left(k1_upper, m2)
    out = vcompose(step2, step1)
    return NatTransData(step1.source, step2.target, out.components)
