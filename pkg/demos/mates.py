"""Mates of a square of restriction functors.

Restricting lattice diagrams along a comma square gives a square of monotone
maps between diagram posets. Its left mate compares the two ways of extending
and restricting, so it is invertible exactly when base change holds.
"""

from dertools import fincat as fc
from dertools import latticeder as ld
from dertools.constructions import comma, find_adjoint
from dertools.mates import MateSquare, check_adjunction, mate, round_trip

L = ld.chain_lattice(3)
u = fc.functor_from_objects(fc.terminal(), fc.arrow(), {"*": 0})
v = fc.functor_from_objects(fc.terminal(), fc.arrow(), {"*": 1})
sq = comma(u, v).square()

f = ld.restriction_functor(sq.u, L)
h = ld.restriction_functor(sq.v, L)
k = ld.restriction_functor(sq.p, L)
g = ld.restriction_functor(sq.q, L)
kf, gh = fc.compose_functors(k, f), fc.compose_functors(g, h)
# in a poset the 2-cell is forced: each component is the unique arrow
alpha = fc.NatTransData(kf, gh, {x: kf.cod.hom(kf(x), gh(x))[0] for x in kf.dom.objects})

left_adj = {"f": find_adjoint(f, "left"), "g": find_adjoint(g, "left")}
print("adjunctions valid:", all(check_adjunction(a).ok for a in left_adj.values()))
msq = MateSquare(f, h, k, g, alpha, left_adj=left_adj)
print("round trip returns the original 2-cell:",
      round_trip(msq, "left").components == alpha.components)


def show(msq):
    m = mate(msq, "left")
    D = m.target.cod
    for x in msq.f.cod.objects:
        kind = "iso" if D.src[m[x]] == D.tgt[m[x]] else "not invertible"
        print(f"  X = {x}: {D.src[m[x]]} -> {D.tgt[m[x]]} ({kind})")


print("comma square:")
show(msq)

# the square with empty corner: extending from nothing gives the bottom element
t = fc.FunctorData(fc.empty(), fc.terminal(), {}, {})
i = fc.identity_functor(fc.terminal())
f = ld.restriction_functor(i, L)
k = ld.restriction_functor(t, L)
kf = fc.compose_functors(k, f)
empty = MateSquare(f, f, k, k, fc.identity_nat(kf),
                   left_adj={"f": find_adjoint(f, "left"), "g": find_adjoint(k, "left")})
print("square over the empty category:")
show(empty)
