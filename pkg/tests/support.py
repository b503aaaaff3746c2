"""Independent oracles and instance generators shared by the test modules."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from dertools import chainstable as cs
from dertools import posets
from dertools.constructions import comma, find_adjoint
from dertools.fincat import (
    FunctorData,
    NatTransData,
    all_functors,
    compose_functors,
    cyclic_group,
    identity_functor,
    make_category,
    poset_category,
)
from dertools.mates import MateSquare

# -- rational Betti numbers of an order complex ------------------------------------------


def rational_rank(rows: list[list[int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                c = m[i][col] / m[rank][col]
                m[i] = [a - c * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def order_complex_betti(below: tuple) -> list[int]:
    """Betti numbers of the order complex of a poset (strict chains as simplices)."""
    n = len(below)
    chains = [[(i,) for i in range(n)]]
    while True:
        nxt = [c + (j,) for c in chains[-1] for j in range(n) if below[j] >> c[-1] & 1]
        if not nxt:
            break
        chains.append(nxt)
    index = [{c: i for i, c in enumerate(level)} for level in chains]
    ranks = [0]
    for k in range(1, len(chains)):
        mat = [[0] * len(chains[k]) for _ in chains[k - 1]]
        for j, c in enumerate(chains[k]):
            for i in range(len(c)):
                mat[index[k - 1][c[:i] + c[i + 1:]]][j] += (-1) ** i
        ranks.append(rational_rank(mat))
    ranks.append(0)
    return [len(chains[k]) - ranks[k] - ranks[k + 1] for k in range(len(chains))]


# -- brute-force lattice Kan extension oracle --------------------------------------------


def extension_oracle(u, L, x_rows, y_rows, direction: str = "left") -> np.ndarray:
    """For each X, the pointwise meet (left) or join (right) of every monotone Y
    on the codomain with X ≤ Y∘u (left) or Y∘u ≤ X (right)."""
    le = L.leq_matrix
    cols = [list(u.cod.objects).index(u(a)) for a in u.dom.objects]
    mask = np.ones((len(x_rows), len(y_rows)), dtype=bool)
    for i, c in enumerate(cols):
        if direction == "left":
            mask &= le[x_rows[:, i]][:, y_rows[:, c]]
        else:
            mask &= le[y_rows[:, c]][:, x_rows[:, i]].T
    nL, nB = len(L), y_rows.shape[1]
    # bound[e, b] fails for Y when e is not below (left) / above (right) Y[b]
    if direction == "left":
        fails = ~le[:, y_rows]            # (e, Y, b): not e ≤ Y[b]
    else:
        fails = ~le.T[:, y_rows]          # (e, Y, b): not Y[b] ≤ e
    fails = fails.transpose(1, 0, 2).reshape(len(y_rows), nL * nB).astype(np.float32)
    bad = (mask.astype(np.float32) @ fails).reshape(len(x_rows), nL, nB) > 0
    # the meet is the lower bound with the largest down-set, the join the upper
    # bound with the smallest one
    size = le.sum(axis=0) if direction == "left" else -le.sum(axis=0)
    score = np.where(bad, np.iinfo(np.int64).min, size[None, :, None])
    return score.argmax(axis=1)


# -- small categories --------------------------------------------------------------------


def small_posets(max_size: int):
    for n in range(1, max_size + 1):
        for P in posets.posets_of_size(n):
            yield posets.as_category(P, name=f"P{n}:{P}")


def small_categories():
    """A handful of non-thin categories alongside small posets."""
    yield from small_posets(3)
    yield cyclic_group(2)
    yield make_category(["x", "y"], {"a": ("x", "y"), "b": ("x", "y")}, {}, name="pair")


def random_comma_square(rng, max_c: int = 4):
    """Comma square of two random functors into a random poset or small category."""
    cats = [C for C in small_categories() if len(C.objects) <= max_c]
    while True:
        C = cats[rng.integers(len(cats))]
        A = cats[rng.integers(len(cats))]
        B = cats[rng.integers(len(cats))]
        us, vs = list(all_functors(A, C)), list(all_functors(B, C))
        if us and vs:
            u, v = us[rng.integers(len(us))], vs[rng.integers(len(vs))]
            return comma(u, v).square()


# -- poset adjunction squares for the mate calculus ------------------------------------


def poset_catalog(max_size: int = 3):
    return list(small_posets(max_size))


def adjoint_functors(A, B):
    """Functors A → B with both a left and a right adjoint, with the adjunctions."""
    out = []
    for f in all_functors(A, B):
        la, ra = find_adjoint(f, "left"), find_adjoint(f, "right")
        if la is not None and ra is not None:
            out.append((f, la, ra))
    return out


def poset_alpha(kf: FunctorData, gh: FunctorData):
    """The unique 2-cell kf ⇒ gh between functors into a poset, or None."""
    D = kf.cod
    comps = {}
    for a in kf.dom.objects:
        hom = D.hom(kf(a), gh(a))
        if not hom:
            return None
        comps[a] = hom[0]
    return NatTransData(kf, gh, comps)


def mate_squares(cats, limit: int | None = None):
    """Every square of doubly adjoint functors between the given posets that
    carries a 2-cell k f ⇒ g h, with all eight adjunctions attached."""
    adj = {(i, j): adjoint_functors(A, B) for (i, A), (j, B)
           in itertools.product(enumerate(cats), repeat=2)}
    count = 0
    n = len(cats)
    for a, b, c, d in itertools.product(range(n), repeat=4):
        for (f, fl, fr), (h, hl, hr) in itertools.product(adj[a, b], adj[a, c]):
            for (k, kl, kr), (g, gl, gr) in itertools.product(adj[b, d], adj[c, d]):
                alpha = poset_alpha(compose_functors(k, f), compose_functors(g, h))
                if alpha is None:
                    continue
                yield MateSquare(f, h, k, g, alpha,
                                 left_adj={"f": fl, "g": gl, "h": hl, "k": kl},
                                 right_adj={"f": fr, "g": gr, "h": hr, "k": kr})
                count += 1
                if limit is not None and count >= limit:
                    return


def group_square(n: int, shift: int):
    """All four functors the identity of Z/n, α the constant loop ``shift``,
    with the adjunction id ⊣ id twisted by a unit ``u`` and counit ``-u``."""
    G = cyclic_group(n)
    one = identity_functor(G)
    star = G.objects[0]
    alpha = NatTransData(one, one, {star: shift % n})

    def twisted(u):
        from dertools.fincat import AdjunctionData
        return AdjunctionData(one, one, NatTransData(one, one, {star: u % n}),
                              NatTransData(one, one, {star: -u % n}))

    adjs = {x: twisted(i + 1) for i, x in enumerate("fghk")}
    return MateSquare(one, one, one, one, alpha, left_adj=adjs, right_adj=adjs)


# -- chain-level squares ---------------------------------------------------------------


def random_strict_square(rng, p: int = 3, kind: int | None = None) -> cs.StrictSquare:
    """A random strictly commuting square from one of four families: homotopy
    pushouts, strict pushouts, pushouts followed by a random map, and squares
    with w = 0."""
    f, g = cs.random_span(rng, p, -2, 2, 3)
    kind = int(rng.integers(4)) if kind is None else kind
    if kind == 0:
        return cs.hopushout(f, g).square
    sq = cs.strict_pushout(f, g)
    if kind == 1:
        return sq
    if kind == 2:
        W = cs.random_complex(rng, p, -2, 3, 3)
        t = cs.random_chain_map(rng, sq.w, W)
        return cs.StrictSquare(f, g, cs.compose(t, sq.j), cs.compose(t, sq.k))
    Z = cs.zero_complex(p)
    return cs.StrictSquare(f, g, cs.zero_map(f.cod, Z), cs.zero_map(g.cod, Z))


def random_pasting(rng, p: int = 3):
    """Strict 2×3 diagrams whose left square is a homotopy pushout.

    Returns (left, right, outer) squares; the right square is either another
    homotopy pushout or a strict pushout followed by a random map.
    """
    f1, g = cs.random_span(rng, p, -2, 2, 3)
    ho = cs.hopushout(f1, g)
    left = ho.square
    x02 = cs.random_complex(rng, p, -2, 2, 3)
    f2 = cs.compose(cs.random_chain_map(rng, f1.cod, x02), ho.cylinder.pi)
    if rng.integers(2):
        right = cs.hopushout(f2, left.j).square
    else:
        sp = cs.strict_pushout(f2, left.j)
        W = cs.random_complex(rng, p, -2, 3, 3)
        t = cs.random_chain_map(rng, sp.w, W)
        right = cs.StrictSquare(f2, left.j, cs.compose(t, sp.j), cs.compose(t, sp.k))
    outer = cs.StrictSquare(cs.compose(right.f, left.f), left.g, right.j,
                            cs.compose(right.k, left.k))
    return left, right, outer
