"""Kan extensions of lattice-valued diagrams, and Beck-Chevalley.

Diagrams on a poset with values in a complete lattice form a small derivator:
left extension takes joins over the comma category, right extension takes meets.
"""

from dertools import fincat as fc
from dertools import latticeder as ld
from dertools.constructions import collapse_square
from dertools.hoexact import check_homotopy_exact

L = ld.n5()
corner = fc.corner()
X = ld.LatticeDiagram(corner, L, dict(zip(corner.objects, ("0", "a", "c"))))
# on the missing corner the left extension is the join a v c; the right
# extension sees nothing above it and takes the top element
inc = fc.functor_from_objects(corner, fc.square(), {x: x for x in corner.objects})
print("left extension to the square:", ld.diagram_as_tuple(ld.kan_extend(inc, X, "left")))
print("right extension to the square:", ld.diagram_as_tuple(ld.kan_extend(inc, X, "right")))

# the collapse square satisfies base change in every lattice, yet it is not
# homotopy exact: lattices cannot see the circle in its fiber
sq = collapse_square(fc.parallel_pair())
for M in ld.standard_lattices():
    rows = ld.all_diagrams(sq.A, M)
    holds = all(ld.beck_chevalley_holds(sq, M, Y) for Y in ld.diagrams_from_rows(sq.A, M, rows))
    print(f"{M.name}: Beck-Chevalley holds for all {len(rows)} diagrams: {holds}")
print("homotopy exact:", check_homotopy_exact(sq))
