import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dertools import fincat as fc
from dertools import posets
from dertools.constructions import (
    check_comma_universal,
    classify_functor,
    comma,
    cone_category,
    find_adjoint,
    identity_square,
    initial_object,
    slice_under,
    terminal_object,
    triple_fiber,
)
from dertools.fincat import (
    LawViolation,
    StructuralError,
    all_functors,
    arrow,
    corner,
    functor_from_objects,
    identity_functor,
    object_functor,
    poset_category,
    square,
    terminal,
    validate_category,
)
from dertools.latticeder import boolean_lattice
from dertools.mates import check_adjunction


def broken_associativity():
    return {
        "objects": ["a", "b", "c"],
        "morphisms": {"f": ("a", "b"), "e": ("b", "b"), "g": ("b", "c"),
                      "g2": ("b", "c"), "gf": ("a", "c"), "x": ("a", "c")},
        "compose": {("e", "e"): "e", ("e", "f"): "f", ("g", "e"): "g2", ("g2", "e"): "g2",
                    ("g", "f"): "gf", ("g2", "f"): "x"},
    }


def test_terminal_is_valid():
    assert validate_category(terminal()).ok


def test_broken_associativity_is_named():
    rep = validate_category(broken_associativity())
    assert not rep.ok
    assert any("('g', 'e', 'f')" in v for v in rep.violations)


def test_broken_table_refused_when_checked():
    with pytest.raises(LawViolation):
        fc.category_from_description(broken_associativity())


def test_dangling_ids_are_structural():
    raw = {"objects": ["a"], "morphisms": {"f": ("a", "zz")}, "compose": {}}
    with pytest.raises(StructuralError):
        validate_category(raw)


def test_hasse_chain_expands_to_six_morphisms():
    raw = {"objects": ["a", "b", "c"], "poset": [("a", "b"), ("b", "c")]}
    C = fc.category_from_description(raw)
    assert len(C.morphisms) == 6
    assert validate_category(C).ok


def test_arrow_and_parallel_pair_shapes():
    assert len(arrow().morphisms) == 3
    P = fc.parallel_pair()
    assert len(P.hom("x", "y")) == 2 and P.is_loop_free()
    assert not fc.idempotent_monoid().is_loop_free()


# -- comma categories -----------------------------------------------------------------


def test_comma_of_identities_on_point():
    one = terminal()
    cm = comma(identity_functor(one), identity_functor(one))
    assert len(cm.category.objects) == 1 and len(cm.category.morphisms) == 1


def test_comma_of_endpoints_of_arrow():
    one, two = terminal(), arrow()
    cm = comma(object_functor(two, 0), object_functor(two, 1))
    (obj,) = cm.category.objects
    assert obj[2] == (0, 1)
    assert cm.category.nonidentity() == []


def test_slice_has_terminal_identity():
    A = poset_category("abc", [("a", "b"), ("a", "c")])
    for c in A.objects:
        cm = comma(identity_functor(A), object_functor(A, c))
        assert terminal_object(cm.category) == (c, "*", A.ident[c])


def test_comma_codomain_mismatch():
    with pytest.raises(StructuralError):
        comma(identity_functor(arrow()), identity_functor(terminal()))


def test_comma_universal_property_on_test_cones():
    two = arrow()
    u, v = identity_functor(two), identity_functor(two)
    cm = comma(u, v)
    checked = 0
    for T in (terminal(), arrow()):
        for P in all_functors(T, two):
            for Q in all_functors(T, two):
                comps = {t: two.hom(P(t), Q(t)) for t in T.objects}
                if any(not c for c in comps.values()):
                    continue
                beta = fc.NatTransData(P, Q, {t: c[0] for t, c in comps.items()}, check=False)
                if fc.naturality_violations(beta):
                    continue
                assert check_comma_universal(cm, P, Q, beta)
                checked += 1
    assert checked > 3


# -- fibers -------------------------------------------------------------------------------


def test_triple_fiber_of_empty_source():
    one = terminal()
    e = fc.empty()
    t = fc.FunctorData(e, one, {}, {})
    i = identity_functor(one)
    sq = fc.SquareData(t, t, i, i, fc.NatTransData(t, t, {}))
    assert triple_fiber(sq, "*", "*", one.ident["*"]).objects == ()


def test_triple_fiber_factorizations_in_arrow():
    sq = identity_square(identity_functor(arrow()))
    F = triple_fiber(sq, 0, 1, (0, 1))
    assert len(F.objects) == 2
    assert len(F.nonidentity()) == 1


def test_triple_fiber_identity_square_on_point():
    one = terminal()
    F = triple_fiber(identity_square(identity_functor(one)), "*", "*", one.ident["*"])
    assert len(F.objects) == 1 and len(F.morphisms) == 1


def test_triple_fiber_endpoint_mismatch():
    sq = identity_square(identity_functor(arrow()))
    with pytest.raises(StructuralError):
        triple_fiber(sq, 1, 0, (0, 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_comma_fiber_at_defining_arrow_has_initial_object(n):
    C = fc.chain(n)
    for x, y in itertools.product(C.objects, repeat=2):
        sq = comma(object_functor(C, x), object_functor(C, y)).square()
        for gamma in C.hom(x, y):
            F = triple_fiber(sq, "*", "*", gamma)
            assert initial_object(F) is not None


# -- cones ------------------------------------------------------------------------------


def _iso_to(R, target, obj_map):
    F = functor_from_objects(R, target, obj_map)
    return fc.is_isomorphism_witness(F)


def test_cone_on_point_is_arrow():
    cone = cone_category(terminal())
    assert _iso_to(cone.category, arrow(), {"*": 0, cone.infinity: 1})


def test_cone_on_corner_is_square():
    cone = cone_category(corner())
    omap = {x: x for x in corner().objects}
    omap[cone.infinity] = (1, 1)
    assert _iso_to(cone.category, square(), omap)


def test_cone_on_empty_is_point():
    cone = cone_category(fc.empty())
    assert _iso_to(cone.category, terminal(), {cone.infinity: "*"})


# -- functor classification ----------------------------------------------------------------


def test_origin_of_corner_is_sieve():
    f = functor_from_objects(terminal(), corner(), {"*": (0, 0)})
    assert classify_functor(f).sieve


def test_corner_inclusion_flags():
    i = functor_from_objects(corner(), square(), {x: x for x in corner().objects})
    flags = classify_functor(i)
    assert flags.fully_faithful and flags.sieve and not flags.cosieve


def test_square_projection_is_bifibration():
    pr = functor_from_objects(square(), arrow(), {(i, j): i for (i, j) in square().objects})
    flags = classify_functor(pr)
    assert flags.fibration and flags.opfibration


def test_flags_dualize_under_opposite():
    for P in posets.all_posets(3):
        for Q in posets.all_posets(3):
            A, B = posets.as_category(P), posets.as_category(Q)
            for f in all_functors(A, B):
                a = classify_functor(f)
                b = classify_functor(fc.opposite_functor(f))
                assert (a.sieve, a.cosieve) == (b.cosieve, b.sieve)
                assert (a.fibration, a.opfibration) == (b.opfibration, b.fibration)
                assert a.fully_faithful == b.fully_faithful
                if a.sieve or a.cosieve:
                    assert a.fully_faithful


# -- adjoints ------------------------------------------------------------------------------


def test_projection_of_arrow_has_right_adjoint_at_one():
    pi = fc.to_terminal(arrow())
    adj = find_adjoint(pi, "right")
    assert adj.right("*") == 1
    assert check_adjunction(adj).ok


def test_diagonal_of_boolean_lattice_has_join_as_left_adjoint():
    L = boolean_lattice(2)
    P = L.as_category()
    PP = fc.product(P, P)[0]
    diag = functor_from_objects(P, PP, {x: (x, x) for x in P.objects})
    adj = find_adjoint(diag, "left")
    assert adj is not None and check_adjunction(adj).ok
    for (a, b) in PP.objects:
        assert adj.left((a, b)) == L.join(a, b)


def test_parallel_pair_point_inclusion_has_no_adjoint():
    P = fc.parallel_pair()
    f = functor_from_objects(terminal(), P, {"*": "x"})
    assert find_adjoint(f, "left") is None


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_found_adjoints_pass_the_triangle_identities(data):
    shapes = [P for n in range(1, 4) for P in posets.posets_of_size(n)]
    A = posets.as_category(data.draw(st.sampled_from(shapes)))
    B = posets.as_category(data.draw(st.sampled_from(shapes)))
    fs = list(all_functors(A, B))
    f = data.draw(st.sampled_from(fs))
    for side in ("left", "right"):
        adj = find_adjoint(f, side)
        if adj is not None:
            assert check_adjunction(adj).ok
            assert (adj.right if side == "left" else adj.left) == f


def test_slice_under_right_adjoint_has_initial_objects():
    # 1: 1 → 2 is a right adjoint, so every (b/f) has an initial object
    f = object_functor(arrow(), 1)
    for b in arrow().objects:
        assert initial_object(slice_under(b, f).category) is not None
