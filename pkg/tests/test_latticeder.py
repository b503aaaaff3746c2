import itertools

import numpy as np
import pytest

from dertools import fincat as fc
from dertools import latticeder as ld
from dertools.constructions import (
    classify_functor,
    collapse_square,
    comma,
    cone_category,
    find_adjoint,
)
from dertools.fincat import (
    FunctorData,
    NatTransData,
    SquareData,
    all_functors,
    arrow,
    boxbar,
    corner,
    functor_from_objects,
    identity_functor,
    object_functor,
    square,
    terminal,
    to_terminal,
)

from support import extension_oracle, small_posets

LATTICES = ld.standard_lattices()


def every_diagram(shape, L):
    return ld.diagrams_from_rows(shape, L, ld.all_diagrams(shape, L))


def iota(j, k):
    """□ → ⊠, identity on the first factor and 0 ↦ j, 1 ↦ k on the second."""
    return functor_from_objects(square(), boxbar(),
                                {(i, e): (i, (j, k)[e]) for (i, e) in square().objects})


# -- Kan extensions ----------------------------------------------------------------------


def test_left_extension_to_a_point_is_the_join():
    L = ld.boolean_lattice(2)
    X = ld.LatticeDiagram(arrow(), L, {0: "1", 1: "1"})
    Y = ld.kan_extend(to_terminal(arrow()), X, "left")
    assert Y["*"] == "1"
    X = ld.LatticeDiagram(fc.discrete("ab"), L, {"a": "1", "b": "2"})
    assert ld.kan_extend(to_terminal(X.shape), X)["*"] == "12"


def test_extension_from_the_source_of_an_arrow():
    L = ld.chain_lattice(3)
    u = object_functor(arrow(), 0)
    X = ld.LatticeDiagram(terminal(), L, {"*": 1})
    assert ld.kan_extend(u, X, "left").values == {0: 1, 1: 1}
    assert ld.kan_extend(u, X, "right").values == {0: 1, 1: 2}


def test_unknown_direction_is_refused():
    L = ld.chain_lattice(2)
    X = ld.constant_diagram(terminal(), L, 0)
    with pytest.raises(ValueError):
        ld.kan_extend(identity_functor(terminal()), X, "sideways")


def test_non_monotone_diagram_is_refused():
    with pytest.raises(ld.LatticeError):
        ld.LatticeDiagram(arrow(), ld.chain_lattice(2), {0: 1, 1: 0})


def test_standard_lattices_are_lattices():
    for L in LATTICES + [ld.boolean_lattice(3), ld.divisor_lattice(12)]:
        assert L.check_bounds() == []


@pytest.mark.parametrize("L", LATTICES, ids=lambda L: L.name)
def test_extensions_match_the_brute_force_oracle(L):
    cats = list(small_posets(3))
    for A, B in itertools.product(cats, repeat=2):
        xr, yr = ld.all_diagrams(A, L), ld.all_diagrams(B, L)
        for u in all_functors(A, B):
            for direction in ("left", "right"):
                got = ld.kan_extend_rows(u, L, xr, direction)
                assert np.array_equal(got, extension_oracle(u, L, xr, yr, direction))


def test_batched_extension_agrees_with_the_scalar_one():
    L = ld.n5()
    A = fc.poset_category("abc", [("a", "b")])
    B = fc.poset_category("xyz", [("x", "y"), ("x", "z")])
    for u in all_functors(A, B):
        rows = ld.all_diagrams(A, L)
        for direction in ("left", "right"):
            batch = ld.kan_extend_rows(u, L, rows, direction)
            for r, X in zip(batch, ld.diagrams_from_rows(A, L, rows)):
                Y = ld.kan_extend(u, X, direction)
                assert [L.index[Y[b]] for b in B.objects] == list(r)


def test_coproduct_of_functors_extends_componentwise():
    # Der1 in the lattice model: diagrams on A ⊔ A' are pairs of diagrams
    L = ld.boolean_lattice(2)
    A, B = arrow(), terminal()
    A2, B2 = fc.discrete("pq"), arrow()
    S, ia, ib = fc.coproduct(A, A2)
    u = to_terminal(A)
    for u2 in all_functors(A2, B2):
        w = fc.coproduct_functor(u, u2)
        for X in every_diagram(S, L):
            X1 = ld.restrict(ia, X)
            X2 = ld.restrict(ib, X)
            Y = ld.kan_extend(w, X)
            assert Y[(0, "*")] == ld.kan_extend(u, X1)["*"]
            for b in B2.objects:
                assert Y[(1, b)] == ld.kan_extend(u2, X2)[b]


@pytest.mark.parametrize("L", [ld.chain_lattice(3), ld.boolean_lattice(2)],
                         ids=lambda L: L.name)
def test_extensions_are_adjoint_to_restriction(L):
    # Der3: u_! X ≤ Y iff X ≤ u* Y, and u* Y ≤ X iff Y ≤ u_* X
    for A in small_posets(2):
        for B in small_posets(3):
            xs, ys = every_diagram(A, L), every_diagram(B, L)
            for u in all_functors(A, B):
                for X in xs:
                    lan, ran = ld.kan_extend(u, X, "left"), ld.kan_extend(u, X, "right")
                    for Y in ys:
                        uY = ld.restrict(u, Y)
                        assert lan.leq(Y) == X.leq(uY)
                        assert uY.leq(X) == Y.leq(ran)


def test_restriction_functor_adjoints_are_the_extensions():
    L = ld.chain_lattice(2)
    for A in small_posets(2):
        for B in small_posets(3):
            for u in all_functors(A, B):
                res = ld.restriction_functor(u, L)
                for side, direction in (("left", "left"), ("right", "right")):
                    adj = find_adjoint(res, side)
                    assert adj is not None
                    other = adj.left if side == "left" else adj.right
                    for x in res.cod.objects:
                        X = ld.LatticeDiagram(A, L, dict(zip(A.objects, x)))
                        want = ld.diagram_as_tuple(ld.kan_extend(u, X, direction))
                        assert other(x) == want


def test_fully_faithful_extension_restricts_back():
    # Der2-style consequence: for fully faithful u, u* u_! X = X
    L = ld.m3()
    for A in small_posets(2):
        for B in small_posets(3):
            for u in all_functors(A, B):
                if not classify_functor(u).fully_faithful:
                    continue
                for X in every_diagram(A, L):
                    for direction in ("left", "right"):
                        assert ld.restrict(u, ld.kan_extend(u, X, direction)) == X


def test_extension_by_top_along_a_sieve():
    # for a sieve u, Y is in the image of u_* iff Y is ⊤ off the image of u
    L = ld.n5()
    checked = 0
    for A in small_posets(2):
        for B in small_posets(3):
            for u in all_functors(A, B):
                if not classify_functor(u).sieve:
                    continue
                image = {u(a) for a in A.objects}
                for Y in every_diagram(B, L):
                    outside_top = all(Y[b] == L.top for b in B.objects if b not in image)
                    assert ld.in_essential_image(u, Y, "right") == outside_top
                    checked += 1
    assert checked > 100


# -- Beck-Chevalley --------------------------------------------------------------------


def test_comma_squares_satisfy_beck_chevalley():
    for C in small_posets(3):
        for u in all_functors(arrow(), C):
            for v in all_functors(terminal(), C):
                sq = comma(u, v).square()
                for L in (ld.chain_lattice(3), ld.n5()):
                    for X in every_diagram(sq.A, L):
                        assert ld.beck_chevalley_holds(sq, L, X)


def test_collapse_square_satisfies_beck_chevalley():
    sq = collapse_square(fc.parallel_pair())
    for L in LATTICES:
        assert all(ld.beck_chevalley_holds(sq, L, X) for X in every_diagram(sq.A, L))


def test_empty_square_fails_beck_chevalley_off_bottom():
    one = terminal()
    t = FunctorData(fc.empty(), one, {}, {})
    i = identity_functor(one)
    sq = SquareData(t, t, i, i, NatTransData(t, t, {}))
    L = ld.chain_lattice(3)
    for X in every_diagram(one, L):
        assert ld.beck_chevalley_holds(sq, L, X) == (X["*"] == L.bottom)


def test_beck_chevalley_rejects_wrong_shape():
    sq = comma(object_functor(arrow(), 0), object_functor(arrow(), 1)).square()
    with pytest.raises(fc.StructuralError):
        L = ld.chain_lattice(2)
        ld.beck_chevalley_holds(sq, L, ld.constant_diagram(arrow(), L, 0))


# -- cocartesian and cartesian squares ----------------------------------------------------


def square_diagram(L, x00, x01, x10, x11):
    return ld.LatticeDiagram(square(), L, {(0, 0): x00, (0, 1): x01, (1, 0): x10, (1, 1): x11})


def test_constant_square_is_bicartesian():
    for L in LATTICES:
        for x in L.elements:
            X = ld.constant_diagram(square(), L, x)
            assert ld.is_cocartesian_poset(X) and ld.is_cartesian_poset(X)


def test_square_over_bottom_is_a_coproduct():
    L = ld.boolean_lattice(2)
    X = square_diagram(L, "0", "1", "2", "12")
    assert ld.is_cocartesian_poset(X) and ld.is_cartesian_poset(X)


def test_corner_above_the_join_is_not_cocartesian():
    L = ld.boolean_lattice(2)
    X = square_diagram(L, "0", "1", "0", "12")
    assert not ld.is_cocartesian_poset(X)
    assert ld.is_cartesian_poset(X)


def test_cocartesian_means_extended_from_the_corner():
    cinc = functor_from_objects(corner(), square(), {x: x for x in corner().objects})
    linc = functor_from_objects(fc.lrcorner(), square(), {x: x for x in fc.lrcorner().objects})
    for L in LATTICES:
        for X in every_diagram(square(), L):
            assert ld.is_cocartesian_poset(X) == ld.in_essential_image(cinc, X, "left")
            assert ld.is_cartesian_poset(X) == ld.in_essential_image(linc, X, "right")


def test_square_check_needs_the_square_shape():
    with pytest.raises(fc.StructuralError):
        ld.is_cocartesian_poset(ld.constant_diagram(arrow(), ld.chain_lattice(2), 0))


def test_pasting_over_boxbar_in_lattices_up_to_eight_elements():
    lattices = LATTICES + [ld.chain_lattice(8), ld.boolean_lattice(3), ld.divisor_lattice(12),
                           ld.product_lattice(ld.chain_lattice(2), ld.chain_lattice(4))]
    objs = list(boxbar().objects)
    at = {x: i for i, x in enumerate(objs)}

    def cocart(rows, L, j, k):
        jt = L.join_table
        return rows[:, at[(1, k)]] == jt[rows[:, at[(0, k)]], rows[:, at[(1, j)]]]

    for L in lattices:
        assert len(L) <= 8
        rows = ld.all_diagrams(boxbar(), L)
        c01, c02, c12 = cocart(rows, L, 0, 1), cocart(rows, L, 0, 2), cocart(rows, L, 1, 2)
        assert np.array_equal(c02[c01], c12[c01])
        # spot-check the vectorized test against the diagram-level one
        for r, X in enumerate(ld.diagrams_from_rows(boxbar(), L, rows[:40])):
            assert ld.is_cocartesian_poset(ld.restrict(iota(0, 2), X)) == c02[r]


# -- detection ------------------------------------------------------------------------------


A_OBJECTS = [(0, 0), (0, 1), (0, 2), (1, 0)]


def pasting_setup(j, k):
    A, jinc = fc.full_subcategory(boxbar(), A_OBJECTS)
    cone = cone_category(corner())
    omap = {x: iota(j, k)(x) for x in corner().objects}
    omap[cone.infinity] = (1, k)
    v = functor_from_objects(cone.category, boxbar(), omap)
    return jinc, v, cone


def test_detection_applies_to_the_outer_square_of_the_grid():
    u, v, cone = pasting_setup(0, 2)
    assert ld.check_detection_hypotheses(u, v, A_OBJECTS, cone)
    # removing only the apex leaves (1, 1) with nothing in the corner above it
    rest = [b for b in boxbar().objects if b != (1, 2)]
    assert not ld.check_detection_hypotheses(u, v, rest, cone)


@pytest.mark.parametrize("j,k,bprime", [
    (0, 1, [(0, 0), (0, 1), (0, 2), (1, 0), (1, 2)]),
    (0, 2, A_OBJECTS),
    (1, 2, [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)]),
])
def test_detection_conclusion_on_boxbar(j, k, bprime):
    u, v, cone = pasting_setup(j, k)
    assert ld.check_detection_hypotheses(u, v, bprime, cone)
    for L in LATTICES:
        for X in every_diagram(u.dom, L):
            Y = ld.restrict(v, ld.kan_extend(u, X))
            assert ld.is_colimiting(cone, Y)
            assert ld.is_cocartesian_poset(ld.restrict(iota(j, k), ld.kan_extend(u, X)))


def test_cone_inclusion_detects_itself():
    cone = cone_category(arrow())
    u = cone.incl
    v = identity_functor(cone.category)
    assert ld.check_detection_hypotheses(u, v, list(arrow().objects), cone)
    L = ld.n5()
    for X in every_diagram(arrow(), L):
        assert ld.is_colimiting(cone, ld.kan_extend(u, X))


def test_apex_inside_b_prime_fails():
    u, v, cone = pasting_setup(0, 2)
    assert not ld.check_detection_hypotheses(u, v, A_OBJECTS + [(1, 2)], cone)


def test_coproducts_are_pushouts_over_bottom():
    C, u = fc.full_subcategory(square(), [(1, 0), (0, 1)])
    cone = cone_category(C)
    omap = {x: x for x in C.objects}
    omap[cone.infinity] = (1, 1)
    v = functor_from_objects(cone.category, square(), omap)
    assert ld.check_detection_hypotheses(u, v, list(C.objects), cone)
    for L in LATTICES:
        for X in every_diagram(C, L):
            W = ld.kan_extend(u, X)
            assert W[(0, 0)] == L.bottom
            assert W[(1, 1)] == L.join(X[(1, 0)], X[(0, 1)])
            assert ld.is_cocartesian_poset(W)
            assert ld.is_colimiting(cone, ld.restrict(v, W))


def test_detection_hypotheses_reject_mismatched_functors():
    u, v, cone = pasting_setup(0, 2)
    with pytest.raises(fc.StructuralError):
        ld.check_detection_hypotheses(u, identity_functor(boxbar()), A_OBJECTS, cone)


def test_extension_from_the_empty_category():
    L = ld.chain_lattice(3)
    u = fc.FunctorData(fc.empty(), fc.arrow(), {}, {})
    rows = ld.all_diagrams(fc.empty(), L)
    assert ld.kan_extend_rows(u, L, rows, "left").tolist() == [[0, 0]]
    assert ld.kan_extend_rows(u, L, rows, "right").tolist() == [[2, 2]]
