"""Which squares of small categories are homotopy exact?

Comma squares always are. Collapsing the parallel pair to a point is not:
the fiber over the point is the parallel pair itself, whose nerve is a circle.
"""

from dertools import fincat as fc
from dertools.constructions import collapse_square, comma
from dertools.hoexact import check_homotopy_exact, recheck_witness
from dertools.nerve import homology_table, nerve_complex

u = fc.functor_from_objects(fc.terminal(), fc.arrow(), {"*": 0})
v = fc.functor_from_objects(fc.terminal(), fc.arrow(), {"*": 1})
sq = comma(u, v).square()
print("comma square:", check_homotopy_exact(sq))

pair = fc.parallel_pair()
collapse = collapse_square(pair)
verdict = check_homotopy_exact(collapse)
print("collapse of the parallel pair:", verdict)
print("witness rechecks:", recheck_witness(collapse, verdict))

for n, group in homology_table(nerve_complex(pair, max_dim=3)).items():
    print(f"H{n}(parallel pair) = {group}")
