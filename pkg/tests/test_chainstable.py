import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dertools import chainstable as cs
from dertools import fp_linalg as la

from support import random_pasting, random_strict_square


def rank_mod_p(rows, p):
    """Plain Gaussian elimination over F_p on Python lists."""
    m = [[int(v) % p for v in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                t = m[i][c]
                m[i] = [(a - t * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def betti_oracle(X):
    def r(n):
        d = X.d(n)
        return rank_mod_p(d.tolist(), X.p) if d.size else 0
    return {n: X.dim(n) - r(n) - r(n + 1) for n in X.degrees()}


def F(p=3, degree=0, dim=1):
    return cs.point(p, degree, dim)


def two_term(p=3):
    """F_p → F_p in degrees 1 → 0 with d = 1."""
    return cs.FpChainComplex(p, 0, [1, 1], {1: [[1]]})


# -- linear algebra ------------------------------------------------------------------------


def test_rank_and_nullspace():
    a = np.array([[1, 2, 0], [2, 1, 0]])
    assert la.rank(a, 3) == 1
    ns = la.nullspace(a, 3)
    assert ns.shape[1] == 2 and not la.mul(3, a, ns).any()


def test_inverse_and_solve():
    a = np.array([[1, 1], [0, 2]])
    inv = la.inverse(a, 5)
    assert np.array_equal(la.mul(5, a, inv), la.eye(2))
    x = la.solve(a, np.array([3, 4]), 5)
    assert np.array_equal(la.mul(5, a, x.reshape(-1, 1))[:, 0], [3, 4])
    assert la.solve(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 3) is None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_matches_plain_elimination(p, r, c, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c),
                              min_size=r, max_size=r))
    assert la.rank(np.array(rows), p) == rank_mod_p(rows, p)


def test_complexes_validate():
    with pytest.raises(cs.ChainError):
        cs.FpChainComplex(4, 0, [1])
    with pytest.raises(cs.ChainError):
        cs.FpChainComplex(3, 0, [1, 1, 1], {1: [[1]], 2: [[1]]})
    X = two_term()
    with pytest.raises(cs.ChainError):
        cs.FpChainMap(X, F(), {0: [[1]]})


# -- shifts and cones ------------------------------------------------------------------


def test_suspension_of_a_point():
    assert cs.suspend(F()) == F(degree=1)


def test_suspension_flips_the_differential():
    S = cs.suspend(two_term())
    assert (S.lo, S.hi) == (1, 2)
    assert S.d(2)[0, 0] == 2


def test_suspension_shifts_homology():
    rng = np.random.default_rng(1)
    for _ in range(20):
        X = cs.random_complex(rng)
        hs = cs.homology_dims(cs.suspend(X))
        assert all(hs.get(n + 1, 0) == h for n, h in cs.homology_dims(X).items())
        assert cs.suspend(cs.loop(X)) == X and cs.loop(cs.suspend(X)) == X


def test_homology_matches_the_rank_oracle():
    rng = np.random.default_rng(2)
    for p in (3, 5):
        for _ in range(25):
            X = cs.random_complex(rng, p)
            want = betti_oracle(X)
            got = cs.homology_dims(X)
            assert {n: got.get(n, 0) for n in want} == want


def test_cone_of_identity_is_acyclic():
    rng = np.random.default_rng(3)
    for _ in range(5):
        X = cs.random_complex(rng)
        assert cs.is_acyclic(cs.cone(cs.identity_map(X)).complex)


def test_cone_of_map_to_zero_is_the_suspension():
    rng = np.random.default_rng(4)
    for _ in range(5):
        X = cs.random_complex(rng)
        f = cs.zero_map(X, cs.zero_complex())
        assert cs.cone(f).complex == cs.suspend(X)


def test_cone_inclusion_kills_the_map():
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = cs.random_map(rng)
        mc = cs.cone(f)
        zero = cs.zero_map(f.dom, mc.complex)
        assert cs.check_homotopy(cs.compose(mc.incl, f), zero, mc.null_homotopy)


def test_cone_triangles_have_exact_sequences():
    rng = np.random.default_rng(6)
    for _ in range(15):
        t = cs.cone_triangle(cs.random_map(rng))
        assert cs.is_distinguished(t)
        assert cs.les_check(t).ok


def test_injection_gives_short_exact_pieces():
    X = F()
    Y = F(dim=2)
    f = cs.FpChainMap(X, Y, {0: [[1], [0]]})
    rep = cs.les_check(cs.cone_triangle(f))
    assert rep.ok
    row = {name: (rin, rout) for name, _, rin, rout in rep.rows}
    assert row["H-1(X)"] == (0, 0) and row["H0(Z)"] == (1, 0)


# -- homotopies --------------------------------------------------------------------------


def test_identity_of_an_acyclic_cone_is_null_homotopic():
    C = cs.cone(cs.identity_map(two_term())).complex
    one = cs.identity_map(C)
    for method in ("retraction", "system"):
        assert cs.are_homotopic(one, cs.zero_map(C, C), method) is not None


def test_identity_of_a_point_is_not_null_homotopic():
    one = cs.identity_map(F())
    for method in ("retraction", "system"):
        assert cs.are_homotopic(one, cs.zero_map(F(), F()), method) is None


def test_homotopy_methods_agree():
    rng = np.random.default_rng(7)
    for _ in range(40):
        X = cs.random_complex(rng, 3, -2, 2, 3)
        Y = cs.random_complex(rng, 3, -2, 2, 3)
        f, g = cs.random_chain_map(rng, X, Y), cs.random_chain_map(rng, X, Y)
        # make some pairs homotopic by adding a boundary
        if rng.integers(2):
            h = {n: rng.integers(0, 3, size=(Y.dim(n + 1), X.dim(n))) for n in X.degrees()}
            g = f - cs.Homotopy(X, Y, h).boundary()
        a = cs.are_homotopic(f, g, "retraction")
        b = cs.are_homotopic(f, g, "system")
        assert (a is None) == (b is None)


def test_homotopy_method_is_checked():
    with pytest.raises(ValueError):
        cs.are_homotopic(cs.identity_map(F()), cs.identity_map(F()), "guess")


def test_parallel_maps_required():
    with pytest.raises(cs.ChainError):
        cs.are_homotopic(cs.identity_map(F()), cs.identity_map(F(dim=2)))


# -- homotopy pushouts and squares ----------------------------------------------------------


def test_pushout_of_zero_span_is_the_suspension():
    rng = np.random.default_rng(8)
    for _ in range(10):
        X = cs.random_complex(rng)
        Z0 = cs.zero_complex()
        hp = cs.hopushout(cs.zero_map(X, Z0), cs.zero_map(X, Z0))
        hs = cs.homology_dims(hp.w)
        assert all(hs.get(n + 1, 0) == h for n, h in cs.homology_dims(X).items())
        assert sum(hs.values()) == sum(cs.homology_dims(X).values())


def test_pushout_over_zero_is_the_sum():
    rng = np.random.default_rng(9)
    for _ in range(10):
        Y, Z = cs.random_complex(rng), cs.random_complex(rng)
        Z0 = cs.zero_complex()
        hp = cs.hopushout(cs.zero_map(Z0, Y), cs.zero_map(Z0, Z))
        assert cs.is_quasi_isomorphism(cs.copair_map(hp.jprime, hp.k))


def test_pushout_along_an_isomorphism():
    rng = np.random.default_rng(10)
    for _ in range(10):
        X, Z = cs.random_complex(rng), cs.random_complex(rng)
        g = cs.random_chain_map(rng, X, Z)
        hp = cs.hopushout(cs.identity_map(X), g)
        assert cs.is_quasi_isomorphism(hp.k)


def test_hopushout_is_bicartesian():
    rng = np.random.default_rng(11)
    for _ in range(20):
        sq = cs.hopushout(*cs.random_span(rng)).square
        assert cs.is_bicartesian_side(sq, "cocartesian")
        assert cs.is_bicartesian_side(sq, "cartesian")


def test_constant_square_is_bicartesian():
    X = cs.random_complex(np.random.default_rng(12))
    sq = cs.constant_square(X)
    assert cs.is_bicartesian_side(sq, "cocartesian") and cs.is_bicartesian_side(sq, "cartesian")


def test_square_to_zero_is_neither():
    one = cs.identity_map(F())
    Z0 = cs.zero_complex()
    sq = cs.StrictSquare(one, one, cs.zero_map(F(), Z0), cs.zero_map(F(), Z0))
    # the pushout F ⊔_F F = F has nonzero homology, but w = 0
    assert not cs.is_bicartesian_side(sq, "cocartesian")
    assert not cs.is_bicartesian_side(sq, "cartesian")


def test_square_side_is_checked():
    with pytest.raises(ValueError):
        cs.is_bicartesian_side(cs.constant_square(F()), "both")


def test_non_commuting_square_is_refused():
    one = cs.identity_map(F())
    with pytest.raises(cs.ChainError):
        cs.StrictSquare(one, one, one, cs.zero_map(F(), F()))


@pytest.mark.parametrize("kind", range(4))
def test_cartesian_iff_cocartesian(kind):
    rng = np.random.default_rng(100 + kind)
    for _ in range(15):
        sq = random_strict_square(rng, 3, kind)
        assert (cs.is_bicartesian_side(sq, "cartesian")
                == cs.is_bicartesian_side(sq, "cocartesian"))


def test_sums_are_products_and_coproducts():
    rng = np.random.default_rng(13)
    Z0 = cs.zero_complex()
    for _ in range(10):
        X, Y = cs.random_complex(rng), cs.random_complex(rng)
        ds = cs.direct_sum(X, Y)
        sq = cs.StrictSquare(cs.zero_map(Z0, X), cs.zero_map(Z0, Y), ds.in1, ds.in2)
        assert cs.is_bicartesian_side(sq, "cocartesian")
        assert cs.is_bicartesian_side(sq, "cartesian")
        assert cs.compose(ds.pr1, ds.in1) == cs.identity_map(X)
        assert cs.compose(ds.pr2, ds.in1).is_zero()


def test_pasting_of_strict_squares():
    rng = np.random.default_rng(14)
    seen = set()
    for _ in range(30):
        left, right, outer = random_pasting(rng)
        assert cs.is_bicartesian_side(left, "cocartesian")
        r = cs.is_bicartesian_side(right, "cocartesian")
        assert cs.is_bicartesian_side(outer, "cocartesian") == r
        seen.add(r)
    assert seen == {True, False}


# -- triangles -------------------------------------------------------------------------


def identity_span(p=3):
    one = cs.identity_map(F(p))
    return one, one


def test_mv_triangle_of_identity_span():
    t = cs.mv_triangle(*identity_span())
    assert t.a.m(0).tolist() == [[1], [2]]
    assert cs.is_distinguished(t)
    rep = cs.les_check(t)
    assert rep.ok
    dims = {name: dim for name, dim, _, _ in rep.rows}
    assert (dims["H0(X)"], dims["H0(Y)"], dims["H0(Z)"]) == (1, 2, 1)


def test_unsigned_identity_span_is_not_a_triangle():
    one, _ = identity_span()
    X = F()
    a = cs.pair_map(one, one)
    b = cs.copair_map(one, one)
    assert cs.compose(b, a).m(0).tolist() == [[2]]
    t = cs.Triangle(a, b, cs.zero_map(X, cs.suspend(X)))
    assert cs.null_homotopic(cs.compose(b, a)) is None
    assert not cs.is_distinguished(t)
    with pytest.raises(cs.NotDistinguished):
        cs.les_check(t)


def test_mv_triangle_with_zero_legs():
    rng = np.random.default_rng(15)
    X = cs.random_complex(rng)
    Z0 = cs.zero_complex()
    t = cs.mv_triangle(cs.zero_map(X, Z0), cs.zero_map(X, Z0))
    assert cs.is_quasi_isomorphism(t.c)
    assert cs.is_distinguished(t)


def test_mv_triangles_are_distinguished():
    rng = np.random.default_rng(16)
    for _ in range(20):
        t = cs.mv_triangle(*cs.random_span(rng))
        assert cs.is_distinguished(t)
        assert cs.les_check(t).ok


def test_mv_sign_matters_on_random_spans():
    rng = np.random.default_rng(17)
    broken = 0
    for _ in range(20):
        f, g = cs.random_span(rng)
        hp = cs.hopushout(f, g)
        b = cs.copair_map(hp.jprime, hp.k)
        if cs.null_homotopic(cs.compose(b, cs.pair_map(f, g))) is None:
            broken += 1
    assert broken > 0


def test_rotation_stays_distinguished():
    rng = np.random.default_rng(18)
    for _ in range(10):
        t = cs.cone_triangle(cs.random_map(rng))
        r = cs.rotate(t)
        assert cs.is_distinguished(r)
        assert cs.is_distinguished(cs.rotate(r))


def test_triangle_maps_must_compose():
    one = cs.identity_map(F())
    with pytest.raises(cs.ChainError):
        cs.Triangle(one, cs.identity_map(F(dim=2)), one)


# -- cofiber cubed and the sign of δ ---------------------------------------------------------


def test_cofiber_cubed_is_the_suspension():
    rng = np.random.default_rng(19)
    for _ in range(15):
        assert all(cs.check_cofiber_cubed(cs.random_map(rng)).values())


def test_connecting_maps_differ_by_a_sign():
    rng = np.random.default_rng(20)
    for _ in range(15):
        d_fib, d_cof = cs.connecting_maps(cs.random_map(rng))
        assert cs.are_homotopic(d_fib, -d_cof) is not None


def test_connecting_map_sign_is_visible():
    f = cs.zero_map(cs.zero_complex(), F())
    d_fib, d_cof = cs.connecting_maps(f)
    assert cs.null_homotopic(cs.scale(d_fib, 2)) is None
    assert cs.are_homotopic(d_fib, -d_cof) is not None
    assert cs.are_homotopic(d_fib, d_cof) is None


def test_sign_is_invisible_in_characteristic_two():
    f = cs.zero_map(cs.zero_complex(2), F(2))
    d_fib, d_cof = cs.connecting_maps(f)
    assert cs.are_homotopic(d_fib, d_cof) is not None
