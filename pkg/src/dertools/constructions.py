"""Comma categories, triple fibers, cones, functor classification and adjoints."""

from __future__ import annotations

from dataclasses import dataclass

from .fincat import (
    DEFAULT_SIZE_LIMIT,
    AdjunctionData,
    FinCat,
    FunctorData,
    NatTransData,
    SizeGuardError,
    SquareData,
    StructuralError,
    compose_functors,
    constant_functor,
    functor_violations,
    full_subcategory,
    naturality_violations,
    object_functor,
    terminal,
)


@dataclass(eq=False)
class Comma:
    """The comma category (u/v) with its projections and canonical 2-cell."""

    category: FinCat
    p: FunctorData
    q: FunctorData
    alpha: NatTransData
    u: FunctorData
    v: FunctorData

    def __iter__(self):
        return iter((self.category, self.p, self.q, self.alpha))

    def square(self) -> SquareData:
        return SquareData(self.p, self.q, self.u, self.v, self.alpha)


def _guard(n: int, limit: int, what: str):
    if n > limit:
        raise SizeGuardError(f"{what}: {n} items exceed the size guard {limit}")


def comma(u: FunctorData, v: FunctorData, limit: int = DEFAULT_SIZE_LIMIT) -> Comma:
    """(u/v): objects (a, b, γ: u a → v b), morphisms (s, t) with v t∘γ = γ'∘u s."""
    if u.cod != v.cod:
        raise StructuralError("comma needs functors with a common codomain")
    A, B, C = u.dom, v.dom, u.cod
    _guard(sum(len(C.hom(u(a), v(b))) for a in A.objects for b in B.objects),
           limit, "comma objects")
    objs = [(a, b, g) for a in A.objects for b in B.objects for g in C.hom(u(a), v(b))]
    mors, src, tgt, ident = [], {}, {}, {}
    for o in objs:
        a, b, g = o
        for s in A.out_of(a):
            us = u.on(s)
            for t in B.out_of(b):
                g2 = C.comp[(v.on(t), g)]
                for h in C.hom(u(A.tgt[s]), v(B.tgt[t])):
                    if C.comp[(h, us)] != g2:
                        continue
                    o2 = (A.tgt[s], B.tgt[t], h)
                    m = (o, o2, s, t)
                    mors.append(m)
                    src[m], tgt[m] = o, o2
        ident[o] = (o, o, A.ident[a], B.ident[b])
    _guard(len(mors), limit, "comma morphisms")
    by_src: dict = {}
    for m in mors:
        by_src.setdefault(m[0], []).append(m)
    comp = {}
    for f in mors:
        for g in by_src.get(f[1], ()):
            comp[(g, f)] = (f[0], g[1], A.comp[(g[2], f[2])], B.comp[(g[3], f[3])])
    K = FinCat(objs, mors, src, tgt, ident, comp, name=f"({u.name}/{v.name})")
    p = FunctorData(K, A, {o: o[0] for o in objs}, {m: m[2] for m in mors}, name="p",
                    check=False)
    q = FunctorData(K, B, {o: o[1] for o in objs}, {m: m[3] for m in mors}, name="q",
                    check=False)
    alpha = NatTransData(compose_functors(u, p), compose_functors(v, q),
                         {o: o[2] for o in objs}, check=False)
    return Comma(K, p, q, alpha, u, v)


def slice_under(b, f: FunctorData, limit: int = DEFAULT_SIZE_LIMIT) -> Comma:
    """(b/f) = comma(b: 1 → B, f)."""
    return comma(object_functor(f.cod, b), f, limit)


def slice_over(f: FunctorData, b, limit: int = DEFAULT_SIZE_LIMIT) -> Comma:
    """(f/b) = comma(f, b: 1 → B)."""
    return comma(f, object_functor(f.cod, b), limit)


def comma_lift(cm: Comma, P: FunctorData, Q: FunctorData, beta: NatTransData) -> FunctorData:
    """The functor T → (u/v) induced by P: T → A, Q: T → B and β: uP ⇒ vQ.

    Every object and morphism of T has exactly one candidate image; the lift
    is checked to be a functor satisfying pK = P, qK = Q, αK = β, and
    :class:`StructuralError` is raised if a candidate is missing or ambiguous.
    """
    K = cm.category
    T = P.dom
    omap = {}
    for t in T.objects:
        cands = [o for o in K.objects if o == (P(t), Q(t), beta[t])]
        if len(cands) != 1:
            raise StructuralError(f"object {t!r} has {len(cands)} lifts")
        omap[t] = cands[0]
    mmap = {}
    for m in T.morphisms:
        cands = [k for k in K.hom(omap[T.src[m]], omap[T.tgt[m]])
                 if k[2] == P.on(m) and k[3] == Q.on(m)]
        if len(cands) != 1:
            raise StructuralError(f"morphism {m!r} has {len(cands)} lifts")
        mmap[m] = cands[0]
    L = FunctorData(T, K, omap, mmap, check=False)
    problems = functor_violations(L)
    if problems:
        raise StructuralError("; ".join(problems))
    return L


def check_comma_universal(cm: Comma, P: FunctorData, Q: FunctorData,
                          beta: NatTransData) -> bool:
    """Exhaustively confirm the universal property for one test cone."""
    if naturality_violations(beta):
        return False
    L = comma_lift(cm, P, Q, beta)
    return (compose_functors(cm.p, L).obj_map == P.obj_map
            and compose_functors(cm.p, L).mor_map == P.mor_map
            and compose_functors(cm.q, L).mor_map == Q.mor_map
            and all(cm.alpha[L(t)] == beta[t] for t in P.dom.objects))


def triple_fiber(sq: SquareData, a, b, gamma, limit: int = DEFAULT_SIZE_LIMIT) -> FinCat:
    """(a/D/b)_γ: triples (d, φ: a → p d, ψ: q d → b) with vψ∘α_d∘uφ = γ."""
    C = sq.C
    if C.src.get(gamma) != sq.u(a) or C.tgt.get(gamma) != sq.v(b):
        raise StructuralError("γ must be a morphism u(a) → v(b)")
    D, A, B = sq.D, sq.A, sq.B
    p, q, u, v = sq.p, sq.q, sq.u, sq.v
    _guard(sum(len(A.hom(a, p(d))) * len(B.hom(q(d), b)) for d in D.objects),
           limit, "triple fiber candidates")
    objs = []
    for d in D.objects:
        ad = sq.alpha[d]
        for phi in A.hom(a, p(d)):
            left = C.comp[(ad, u.on(phi))]
            for psi in B.hom(q(d), b):
                if C.comp[(v.on(psi), left)] == gamma:
                    objs.append((d, phi, psi))
    by_d: dict = {}
    for o in objs:
        by_d.setdefault(o[0], []).append(o)
    mors, src, tgt, ident = [], {}, {}, {}
    for o in objs:
        d, phi, psi = o
        ident[o] = (o, o, D.ident[d])
        for m in D.out_of(d):
            pm, qm = p.on(m), q.on(m)
            for o2 in by_d.get(D.tgt[m], ()):
                if A.comp[(pm, phi)] == o2[1] and B.comp[(o2[2], qm)] == psi:
                    k = (o, o2, m)
                    mors.append(k)
                    src[k], tgt[k] = o, o2
    _guard(len(mors), limit, "triple fiber morphisms")
    by_src: dict = {}
    for k in mors:
        by_src.setdefault(k[0], []).append(k)
    comp = {}
    for f in mors:
        for g in by_src.get(f[1], ()):
            comp[(g, f)] = (f[0], g[1], D.comp[(g[2], f[2])])
    return FinCat(objs, mors, src, tgt, ident, comp, name="fiber")


@dataclass(eq=False)
class Cone:
    category: FinCat
    incl: FunctorData
    infinity: object

    def __iter__(self):
        return iter((self.category, self.incl, self.infinity))


def cone_category(A: FinCat, apex="∞") -> Cone:
    """A^▷: A with a freely adjoined terminal object."""
    while A.has_object(apex):
        apex = f"{apex}'"
    objs = list(A.objects) + [apex]
    mors = list(A.morphisms)
    src = dict(A.src)
    tgt = dict(A.tgt)
    ident = dict(A.ident)
    comp = dict(A.comp)
    top = ("1", apex)
    mors.append(top)
    src[top] = tgt[top] = apex
    ident[apex] = top
    to_apex = {}
    for x in A.objects:
        m = ("to", x, apex)
        to_apex[x] = m
        mors.append(m)
        src[m], tgt[m] = x, apex
        comp[(top, m)] = m
    comp[(top, top)] = top
    for f in A.morphisms:
        comp[(to_apex[A.tgt[f]], f)] = to_apex[A.src[f]]
    R = FinCat(objs, mors, src, tgt, ident, comp, name=f"{A.name}^>" if A.name else "")
    i = FunctorData(A, R, {x: x for x in A.objects}, {m: m for m in A.morphisms},
                    name="i", check=False)
    return Cone(R, i, apex)


def cone_leg(cone: Cone, x):
    """The unique morphism x → ∞ in the cone category."""
    return cone.category.hom(x, cone.infinity)[0]


@dataclass(frozen=True)
class FunctorFlags:
    fully_faithful: bool
    sieve: bool
    cosieve: bool
    opfibration: bool
    fibration: bool


def is_fully_faithful(f: FunctorData) -> bool:
    A, B = f.dom, f.cod
    for x in A.objects:
        for y in A.objects:
            img = [f.on(m) for m in A.hom(x, y)]
            if len(set(img)) != len(img) or len(img) != len(B.hom(f(x), f(y))):
                return False
    return True


def _closed(f: FunctorData, backwards: bool) -> bool:
    B = f.cod
    image = set(f.obj_map.values())
    for a in f.dom.objects:
        arrows = B.into(f(a)) if backwards else B.out_of(f(a))
        for m in arrows:
            other = B.src[m] if backwards else B.tgt[m]
            if other not in image:
                return False
    return True


def _is_opfibration(f: FunctorData) -> bool:
    A, B = f.dom, f.cod
    for a in A.objects:
        for g in B.out_of(f(a)):
            if not any(_opcartesian(f, h) for h in A.out_of(a) if f.on(h) == g):
                return False
    return True


def _opcartesian(f: FunctorData, h) -> bool:
    A, B = f.dom, f.cod
    a, a1 = A.src[h], A.tgt[h]
    g = f.on(h)
    for k in A.out_of(a):
        a2 = A.tgt[k]
        for m in B.hom(f(a1), f(a2)):
            if B.comp[(m, g)] != f.on(k):
                continue
            lifts = [l for l in A.hom(a1, a2) if f.on(l) == m and A.comp[(l, h)] == k]
            if len(lifts) != 1:
                return False
    return True


def _is_fibration(f: FunctorData) -> bool:
    A, B = f.dom, f.cod
    for a in A.objects:
        for g in B.into(f(a)):
            if not any(_cartesian(f, h) for h in A.into(a) if f.on(h) == g):
                return False
    return True


def _cartesian(f: FunctorData, h) -> bool:
    A, B = f.dom, f.cod
    a1, a = A.src[h], A.tgt[h]
    g = f.on(h)
    for k in A.into(a):
        a2 = A.src[k]
        for m in B.hom(f(a2), f(a1)):
            if B.comp[(g, m)] != f.on(k):
                continue
            lifts = [l for l in A.hom(a2, a1) if f.on(l) == m and A.comp[(h, l)] == k]
            if len(lifts) != 1:
                return False
    return True


def classify_functor(f: FunctorData) -> FunctorFlags:
    ff = is_fully_faithful(f)
    return FunctorFlags(
        fully_faithful=ff,
        sieve=ff and _closed(f, backwards=True),
        cosieve=ff and _closed(f, backwards=False),
        opfibration=_is_opfibration(f),
        fibration=_is_fibration(f),
    )


# -- adjoints --------------------------------------------------------------------


def initial_object(C: FinCat):
    found = C.initial_objects()
    return found[0] if found else None


def terminal_object(C: FinCat):
    found = C.terminal_objects()
    return found[0] if found else None


def _universal_arrows_from(f: FunctorData):
    """For each b, an initial object (a, η: b → f a) of (b/f), or None."""
    A, B = f.dom, f.cod
    out = {}
    for b in B.objects:
        cands = [(a, g) for a in A.objects for g in B.hom(b, f(a))]
        hit = None
        for a, g in cands:
            ok = True
            for a2, g2 in cands:
                n = sum(1 for s in A.hom(a, a2) if B.comp[(f.on(s), g)] == g2)
                if n != 1:
                    ok = False
                    break
            if ok:
                hit = (a, g)
                break
        if hit is None:
            return None
        out[b] = hit
    return out


def _universal_arrows_into(f: FunctorData):
    """For each b, a terminal object (a, ε: f a → b) of (f/b), or None."""
    A, B = f.dom, f.cod
    out = {}
    for b in B.objects:
        cands = [(a, g) for a in A.objects for g in B.hom(f(a), b)]
        hit = None
        for a, g in cands:
            ok = True
            for a2, g2 in cands:
                n = sum(1 for s in A.hom(a2, a) if B.comp[(g, f.on(s))] == g2)
                if n != 1:
                    ok = False
                    break
            if ok:
                hit = (a, g)
                break
        if hit is None:
            return None
        out[b] = hit
    return out


def find_adjoint(f: FunctorData, side: str) -> AdjunctionData | None:
    """Search for a left (``side='left'``) or right adjoint of ``f``.

    A left adjoint exists iff every (b/f) has an initial object; the result is
    the full adjunction ``L ⊣ f``. Dually ``side='right'`` returns ``f ⊣ R``.
    """
    A, B = f.dom, f.cod
    if side == "left":
        arrows = _universal_arrows_from(f)
        if arrows is None:
            return None
        omap = {b: arrows[b][0] for b in B.objects}
        mmap = {}
        for m in B.morphisms:
            b, b2 = B.src[m], B.tgt[m]
            target = B.comp[(arrows[b2][1], m)]
            (l,) = [s for s in A.hom(omap[b], omap[b2])
                    if B.comp[(f.on(s), arrows[b][1])] == target]
            mmap[m] = l
        L = FunctorData(B, A, omap, mmap, name="L", check=False)
        fL = compose_functors(f, L)
        unit = NatTransData(FunctorData(B, B, {b: b for b in B.objects},
                                        {m: m for m in B.morphisms}, check=False),
                            fL, {b: arrows[b][1] for b in B.objects}, check=False)
        counit = {}
        for a in A.objects:
            eta = arrows[f(a)][1]
            (e,) = [s for s in A.hom(L(f(a)), a) if B.comp[(f.on(s), eta)] == B.ident[f(a)]]
            counit[a] = e
        Lf = compose_functors(L, f)
        eps = NatTransData(Lf, FunctorData(A, A, {a: a for a in A.objects},
                                           {m: m for m in A.morphisms}, check=False),
                           counit, check=False)
        return AdjunctionData(L, f, unit, eps)
    if side == "right":
        arrows = _universal_arrows_into(f)
        if arrows is None:
            return None
        omap = {b: arrows[b][0] for b in B.objects}
        mmap = {}
        for m in B.morphisms:
            b, b2 = B.src[m], B.tgt[m]
            target = B.comp[(m, arrows[b][1])]
            (r,) = [s for s in A.hom(omap[b], omap[b2])
                    if B.comp[(arrows[b2][1], f.on(s))] == target]
            mmap[m] = r
        R = FunctorData(B, A, omap, mmap, name="R", check=False)
        fR = compose_functors(f, R)
        counit = NatTransData(fR, FunctorData(B, B, {b: b for b in B.objects},
                                              {m: m for m in B.morphisms}, check=False),
                              {b: arrows[b][1] for b in B.objects}, check=False)
        unit = {}
        for a in A.objects:
            eps = arrows[f(a)][1]
            (e,) = [s for s in A.hom(a, R(f(a))) if B.comp[(eps, f.on(s))] == B.ident[f(a)]]
            unit[a] = e
        Rf = compose_functors(R, f)
        eta = NatTransData(FunctorData(A, A, {a: a for a in A.objects},
                                       {m: m for m in A.morphisms}, check=False),
                           Rf, unit, check=False)
        return AdjunctionData(f, R, eta, counit)
    raise ValueError("side must be 'left' or 'right'")


# -- other squares -----------------------------------------------------------------


def pullback_square(u: FunctorData, v: FunctorData) -> SquareData:
    """The strict pullback A ×_C B with its projections, as a commuting square."""
    if u.cod != v.cod:
        raise StructuralError("pullback needs a common codomain")
    A, B = u.dom, v.dom
    objs = [(a, b) for a in A.objects for b in B.objects if u(a) == v(b)]
    mors = [(s, t) for s in A.morphisms for t in B.morphisms if u.on(s) == v.on(t)]
    src = {(s, t): (A.src[s], B.src[t]) for (s, t) in mors}
    tgt = {(s, t): (A.tgt[s], B.tgt[t]) for (s, t) in mors}
    ident = {(a, b): (A.ident[a], B.ident[b]) for (a, b) in objs}
    by_src: dict = {}
    for m in mors:
        by_src.setdefault(src[m], []).append(m)
    comp = {}
    for f in mors:
        for g in by_src.get(tgt[f], ()):
            comp[(g, f)] = (A.comp[(g[0], f[0])], B.comp[(g[1], f[1])])
    P = FinCat(objs, mors, src, tgt, ident, comp, name="pullback")
    p = FunctorData(P, A, {o: o[0] for o in objs}, {m: m[0] for m in mors}, check=False)
    q = FunctorData(P, B, {o: o[1] for o in objs}, {m: m[1] for m in mors}, check=False)
    up = compose_functors(u, p)
    alpha = NatTransData(up, compose_functors(v, q),
                         {o: u.cod.ident[u(o[0])] for o in objs}, check=False)
    return SquareData(p, q, u, v, alpha)


def identity_square(u: FunctorData) -> SquareData:
    """The square u∘1 = u∘1 (D = B = A)."""
    A = u.dom
    one = FunctorData(A, A, {x: x for x in A.objects}, {m: m for m in A.morphisms},
                      check=False)
    return SquareData(one, one, u, u, NatTransData(
        u, u, {x: u.cod.ident[u(x)] for x in A.objects}, check=False))


def collapse_square(D: FinCat) -> SquareData:
    """The square D → 1, D → 1, 1 = 1 = 1."""
    one = terminal()
    t = constant_functor(D, one, "*")
    i = FunctorData(one, one, {"*": "*"}, {one.ident["*"]: one.ident["*"]}, check=False)
    return SquareData(t, t, i, i, NatTransData(t, t, {d: one.ident["*"] for d in D.objects},
                                               check=False))


def final_square(f: FunctorData) -> SquareData:
    """The square A → B, A → 1, B → 1, 1 = 1 whose exactness is homotopy finality."""
    one = terminal()
    tA = constant_functor(f.dom, one, "*")
    tB = constant_functor(f.cod, one, "*")
    i = FunctorData(one, one, {"*": "*"}, {one.ident["*"]: one.ident["*"]}, check=False)
    return SquareData(f, tA, tB, i, NatTransData(
        compose_functors(tB, f), tA, {a: one.ident["*"] for a in f.dom.objects},
        check=False))


def induced_over_functor(v: FunctorData, cone: Cone, Bprime) -> FunctorData:
    """A → B'/v(∞) sending a to (v a, v(a → ∞)), as a functor into a comma category."""
    B = v.cod
    Bsub, incl = full_subcategory(B, Bprime)
    over = slice_over(incl, v(cone.infinity))
    A = cone.incl.dom
    omap, mmap = {}, {}
    for a in A.objects:
        if v(a) not in set(Bsub.objects):
            raise StructuralError(f"v({a!r}) lies outside B'")
        omap[a] = (v(a), "*", v.on(cone_leg(cone, a)))
    for m in A.morphisms:
        s, t = omap[A.src[m]], omap[A.tgt[m]]
        (k,) = [k for k in over.category.hom(s, t) if k[2] == v.on(m)]
        mmap[m] = k
    return FunctorData(A, over.category, omap, mmap, check=False)
