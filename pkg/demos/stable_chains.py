"""Chain complexes over F_p as a stable model.

The Mayer-Vietoris triangle of a span needs a sign on one leg, and the two
ways of building a connecting map from a fiber sequence differ by -1.
"""

import numpy as np

from dertools import chainstable as cs

rng = np.random.default_rng(1)
f, g = cs.random_span(rng, p=3)
t = cs.mv_triangle(f, g)
print("Mayer-Vietoris triangle distinguished:", cs.is_distinguished(t))
print("long exact sequence in homology is exact:", cs.les_check(t).ok)

one = cs.identity_map(cs.point(3))
unsigned = cs.compose(cs.copair_map(one, one), cs.pair_map(one, one))
print("(id, id) then [id, id] null-homotopic:", cs.null_homotopic(unsigned) is not None)

d_fib, d_cof = cs.connecting_maps(cs.zero_map(cs.zero_complex(), cs.point(3)))
print("fiber and cofiber connecting maps agree:", cs.are_homotopic(d_fib, d_cof) is not None)
print("they agree up to sign:", cs.are_homotopic(d_fib, -d_cof) is not None)

h = cs.hopushout(f, g)
print("homotopy pushout square is cocartesian:", cs.is_bicartesian_side(h.square, "cocartesian"))
print("and cartesian:", cs.is_bicartesian_side(h.square, "cartesian"))
