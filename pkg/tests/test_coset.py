import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charsheaf.arith import cyclo_embed
from charsheaf.chartab import character_table, induce, inner_product, reflection_character, sign_character
from charsheaf.coset import (Coset, CosetClassFunction, ExtendedGroup, b_preferred_character,
                             b_preferred_extension, coset_induce, coset_inner_product, coset_restrict,
                             cyclic_product_setting, extend_character, extension_characters, inner_automorphism,
                             is_phi_stable, transport_ambient, transport_psi_g, twisted_classes)
from charsheaf.coxeter import Automorphism, FiniteGroup, build_group, levi
from charsheaf.errors import ValidationError
from charsheaf.molien import b_invariant, j_induce
from charsheaf.oracles import coset_induce_direct, swap_tensor_trace
from charsheaf.selftest import coset_fixtures

FIXTURES = coset_fixtures()
IDS = [f[0] for f in FIXTURES]


def s3_inner():
    g = build_group("A2")
    return g, inner_automorphism(g, g.generators[0])


# twisted classes ---------------------------------------------------------------

def test_identity_twist_gives_ordinary_classes():
    g = build_group("B2")
    tc = twisted_classes(g, list(range(g.order)))
    assert sorted(tc.sizes) == sorted(c.size for c in g.classes)


def test_inversion_on_cyclic_group_has_one_class():
    z3 = FiniteGroup.generate([[1, 2, 0]])
    phi = [z3.inv(x) for x in range(3)]
    assert len(twisted_classes(z3, phi)) == 1


def test_inner_twist_class_count():
    g, phi = s3_inner()
    assert len(twisted_classes(g, phi)) == len(g.classes)


@pytest.mark.parametrize("fixture", FIXTURES, ids=IDS)
def test_stable_irreducibles_count_twisted_classes(fixture):
    _, G, phi, eg, _ = fixture
    stable = [chi for chi in character_table(G) if is_phi_stable(chi, phi)]
    assert len(stable) == len(twisted_classes(G, phi))


@pytest.mark.parametrize("fixture", FIXTURES, ids=IDS)
def test_twisted_classes_inside_extended_classes(fixture):
    _, G, _, eg, _ = fixture
    for i in range(eg.n):
        tc = twisted_classes(G, eg.phi_perm, i)
        for rep in tc.representatives:
            cls = {y for y in range(G.order) if tc.class_of[y] == tc.class_of[rep]}
            target = eg.class_of[eg.element(rep, i)]
            full = {y for y in range(G.order) if eg.class_of[eg.element(y, i)] == target}
            assert cls <= full
            if i == 1:
                assert cls == full


# inner products and extensions -------------------------------------------------

def test_constant_function_has_norm_one():
    g, phi = s3_inner()
    c = Coset(g, phi)
    one = CosetClassFunction(c, [1] * len(c.orbits))
    assert coset_inner_product(one, one) == 1


@pytest.mark.parametrize("fixture", FIXTURES, ids=IDS)
def test_extensions_form_orthonormal_basis(fixture):
    _, G, phi, eg, _ = fixture
    ambient = Coset(G, phi)
    exts = [CosetClassFunction(ambient, extend_character(chi, eg)[0].values)
            for chi in character_table(G) if is_phi_stable(chi, phi)]
    assert len(exts) == len(ambient.orbits)
    for i, a in enumerate(exts):
        for j, b in enumerate(exts):
            assert coset_inner_product(a, b) == (1 if i == j else 0)


def test_distinct_extensions_differ_by_a_root_of_unity():
    g = build_group("A2")
    eg = ExtendedGroup.from_automorphism(Automorphism(g, (1, 0)))
    chi = reflection_character(g)
    e0, e1 = extend_character(chi, eg)
    assert e1.values == tuple(-v for v in e0.values)
    assert coset_inner_product(e0, e1) == -1
    psi0, psi1 = extension_characters(chi, eg)
    assert inner_product(psi0, psi1) == 0


def test_identity_twist_extension_is_the_character():
    g = build_group("B2")
    eg = ExtendedGroup.from_automorphism(Automorphism.identity(g))
    chi = character_table(g)[4]
    (e,) = extend_character(chi, eg)
    assert all(e(x) == chi(x) for x in range(g.order))
    assert b_preferred_character(chi, eg).values == chi.values


def test_trivial_character_extensions_are_plus_minus_one():
    cp = cyclic_product_setting("A1", (0,), 2)
    eg = cp.extended
    chi = character_table(cp.group)[0]
    values = sorted(sorted(set(e.values)) for e in extend_character(chi, eg))
    assert values == [[-1], [1]]


def test_refl_tensor_refl_extensions_match_swap_trace():
    cp = cyclic_product_setting("A2", (0, 1), 2)
    G1, eg = cp.factor, cp.extended
    refl = reflection_character(G1)
    chi = cp.outer_character([refl, refl])
    exts = extend_character(chi, eg)
    coset = exts[0].coset

    def folded(x):
        a, b = cp.components(x)
        return swap_tensor_trace(G1.matrix(a), G1.matrix(b))

    F = CosetClassFunction.from_function(coset, folded)
    assert sorted(e.values for e in exts) == sorted([F.values, tuple(-v for v in F.values)])


def test_unstable_character_rejected():
    cp = cyclic_product_setting("A1", (0,), 2)
    t = character_table(cp.group)
    unstable = [chi for chi in t if not is_phi_stable(chi, cp.automorphism.element_perm)]
    with pytest.raises(ValidationError):
        extend_character(unstable[0], cp.extended)


@pytest.mark.parametrize("factor,perm", [("A1", (0,)), ("A2", (0, 1))])
def test_b_preferred_matches_j_induction(factor, perm):
    cp = cyclic_product_setting(factor, perm, 2)
    eg, G = cp.extended, cp.group
    for chi in character_table(G):
        if not is_phi_stable(chi, eg.phi_perm):
            continue
        bp = b_preferred_character(chi, eg)
        assert b_invariant(bp, eg)[1] == b_invariant(chi, G)[1]
        assert j_induce(eg.base_subgroup(), chi, V=eg, U=G) == bp


def test_sign_sign_b_preferred_has_b_two():
    cp = cyclic_product_setting("A1", (0,), 2)
    eg, G = cp.extended, cp.group
    sgn = sign_character(G)
    bp = b_preferred_character(sgn, eg)
    assert b_invariant(sgn, G)[1] == 2
    assert b_invariant(bp, eg)[1] == 2
    others = [psi for psi in extension_characters(sgn, eg) if psi != bp]
    assert b_invariant(others[0], eg, adaptive=True)[1] > 2
    assert all(b_preferred_extension(sgn, eg)(x) == bp(eg.element(x, 1)) for x in range(G.order))


def test_refl_tensor_refl_b_preferred_has_b_two():
    cp = cyclic_product_setting("A2", (0, 1), 2)
    refl = reflection_character(cp.factor)
    chi = cp.outer_character([refl, refl])
    assert b_invariant(b_preferred_character(chi, cp.extended), cp.extended)[1] == 2


# induction and transport -----------------------------------------------------

def test_induction_from_whole_group_is_identity():
    g, phi = s3_inner()
    c = Coset(g, phi)
    f = CosetClassFunction(c, list(range(len(c.orbits))))
    assert coset_induce(f, c) == f


def test_untwisted_induction_is_ordinary_induction():
    g = build_group("B2")
    ident = list(range(g.order))
    H = levi(g, [1]).elements
    sub = g.subgroup(H)
    for chi in character_table(sub.group):
        f = CosetClassFunction.from_function(Coset(g, ident, H, 0), lambda x: chi(sub.restrict_index(x)))
        ind = coset_induce(f)
        ordinary = induce(sub, chi)
        assert all(ind(x) == ordinary(x) for x in range(g.order))


def test_frobenius_reciprocity_on_swapped_squares():
    cp = cyclic_product_setting("A1", (0,), 2)
    G, phi = cp.group, cp.automorphism.element_perm
    ambient = Coset(G, phi)
    stable = [CosetClassFunction(ambient, extend_character(chi, cp.extended)[0].values)
              for chi in character_table(G) if is_phi_stable(chi, phi)]
    for H in ([0], G.closure([G.generators[0], G.generators[1]]), list(range(G.order))):
        for g in range(G.order):
            try:
                sub = Coset(G, phi, H, g)
            except ValidationError:
                continue
            for k in range(len(sub.orbits)):
                f = CosetClassFunction(sub, [1 if i == k else 0 for i in range(len(sub.orbits))])
                ind = coset_induce(f, ambient)
                direct = coset_induce_direct(G.mul, G.inv, phi, G.order, sub.elements,
                                             {x: f(x) for x in sub.elements}, len(H))
                assert all(ind(x) == direct[x] for x in range(G.order))
                for F in stable:
                    assert coset_inner_product(ind, F) == coset_inner_product(f, coset_restrict(F, sub))


def test_bad_subgroup_rejected():
    g, phi = s3_inner()
    with pytest.raises(ValidationError):
        Coset(g, phi, [0, 1, 2])


def test_transport_with_trivial_element_is_identity():
    g, phi = s3_inner()
    c = Coset(g, phi, levi(g, [0]).elements, 0)
    f = CosetClassFunction(c, list(range(1, len(c.orbits) + 1)))
    t = transport_psi_g(f)
    assert t.values == f.values and t.coset.phi == phi


@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_transport_is_an_isometry_and_commutes_with_induction(data):
    g, phi = s3_inner()
    H = data.draw(st.sampled_from([[0], levi(g, [0]).elements, levi(g, [1]).elements, list(range(g.order))]))
    x = data.draw(st.integers(0, g.order - 1))
    try:
        c = Coset(g, phi, H, x)
    except ValidationError:
        return
    vals = st.lists(st.integers(-3, 3), min_size=len(c.orbits), max_size=len(c.orbits))
    f = CosetClassFunction(c, data.draw(vals))
    f2 = CosetClassFunction(c, data.draw(vals))
    tf, tf2 = transport_psi_g(f), transport_psi_g(f2)
    assert coset_inner_product(tf, tf2) == coset_inner_product(f, f2)
    lhs = transport_ambient(coset_induce(f), x)
    rhs = coset_induce(tf, Coset(g, tf.coset.phi))
    assert lhs == rhs


def test_root_of_unity_parameter_orders_extensions():
    cp = cyclic_product_setting("A1", (0,), 2)
    eg = cp.extended
    chi = character_table(cp.group)[0]
    exts = extension_characters(chi, eg)
    N = cp.group.order
    for x in range(eg.order):
        assert exts[1](x) == exts[0](x) * cyclo_embed(2, x // N)
