import numpy as np
import pytest

from icckit.descriptors import DirectProduct, Finite, Free, FreeAbelian
from icckit.errors import AutCapExceededError, IccKitError, InvalidHomomorphismError, WordSyntaxError
from icckit.groupkit import (
    BS_ALPHABET,
    FcKind,
    Word,
    alternating_group,
    britton_reduce,
    bs_normal_form,
    cbar_fixpoint,
    coupling_injective_finite,
    cyclic_group,
    direct_product,
    element_word,
    evaluate_word,
    extend_homomorphism,
    extend_partial_isomorphism,
    fc_of_group,
    fin_aut_group,
    fin_center,
    fin_conjugacy_classes,
    fin_core,
    fin_is_simple,
    fin_normal_closure,
    format_word,
    free_reduce,
    group_from_permutations,
    group_from_table,
    inner_automorphism,
    klein_four_group,
    named_group,
    parse_word,
    quaternion_group,
    symmetric_group,
)


def random_bs_word(rng, length: int) -> Word:
    letters = tuple((int(g), int(e)) for g, e in zip(rng.integers(0, 2, size=length), rng.choice([-1, 1], size=length)))
    return Word(BS_ALPHABET, letters)


# ----------------------------------------------------------------------
# Grupos finitos
# ----------------------------------------------------------------------
def test_s3_class_sizes_and_center():
    s3 = symmetric_group(3)
    assert s3.order == 6
    assert sorted(len(c) for c in fin_conjugacy_classes(s3)) == [1, 2, 3]
    assert fin_center(s3) == frozenset({s3.identity})


def test_quaternion_center_is_plus_minus_one():
    q8 = quaternion_group()
    center = fin_center(q8)
    assert {q8.label(z) for z in center} == {"1", "-1"}


def test_conjugacy_classes_partition_the_group():
    for G in (symmetric_group(4), named_group("D5"), quaternion_group()):
        classes = fin_conjugacy_classes(G)
        assert sum(len(c) for c in classes) == G.order
        assert frozenset().union(*classes) == frozenset(G.elements)
        for c in classes:
            x = min(c)
            assert c == frozenset(G.conj(g, x) for g in G.elements)


@pytest.mark.parametrize("name, order", [("Z3", 2), ("V4", 6), ("S3", 6), ("Q8", 24)])
def test_automorphism_group_orders(name, order):
    assert fin_aut_group(named_group(name)).order == order


def test_aut_cap_is_enforced():
    with pytest.raises(AutCapExceededError):
        fin_aut_group(symmetric_group(4), cap=10)


def test_inner_automorphisms_of_s3():
    aut = fin_aut_group(symmetric_group(3))
    assert len(aut.inner) == 6


def test_core_and_normal_closure():
    s3 = symmetric_group(3)
    transposition = s3.index_of("(0 1)")
    assert fin_core(s3, {s3.identity, transposition}) == frozenset({s3.identity})
    rotations = fin_normal_closure(s3, [s3.index_of("(0 1 2)")])
    assert len(rotations) == 3
    assert fin_core(s3, rotations) == rotations
    assert fin_normal_closure(s3, [transposition]) == frozenset(s3.elements)


@pytest.mark.parametrize(
    "group, simple",
    [(cyclic_group(5), True), (symmetric_group(3), False), (alternating_group(5), True), (klein_four_group(), False)],
)
def test_fin_is_simple(group, simple):
    assert fin_is_simple(group) is simple


def test_group_from_table_rejects_non_groups():
    with pytest.raises(IccKitError):
        group_from_table([[0, 1], [1, 1]])
    with pytest.raises(IccKitError):
        group_from_table([[0, 1, 2], [1, 0, 2]])
    with pytest.raises(IccKitError, match="não geram"):
        group_from_table([[0, 1], [1, 0]], generators=[0])


def test_group_from_permutations_matches_named_group():
    s3 = group_from_permutations([[1, 0, 2], [1, 2, 0]], name="S3")
    assert s3.order == 6
    assert not s3.is_abelian


def test_direct_product_and_klein_four():
    v4 = klein_four_group()
    assert v4.order == 4 and v4.is_abelian
    assert all(v4.element_order(x) <= 2 for x in v4.elements)
    z2xz3 = direct_product(cyclic_group(2), cyclic_group(3))
    assert any(z2xz3.element_order(x) == 6 for x in z2xz3.elements)


def test_named_group_errors():
    with pytest.raises(IccKitError):
        named_group("X4")
    with pytest.raises(IccKitError):
        named_group("D1")


# ----------------------------------------------------------------------
# Homomorfismos, acoplamento, C̃
# ----------------------------------------------------------------------
def test_extend_homomorphism():
    z4, z2, z3 = cyclic_group(4), cyclic_group(2), cyclic_group(3)
    assert extend_homomorphism(z4, z2, [1]) == (0, 1, 0, 1)
    assert extend_homomorphism(z3, z2, [1]) is None
    with pytest.raises(InvalidHomomorphismError):
        extend_homomorphism(z4, z2, [1, 1])


def test_coupling_detects_inner_action():
    s3 = symmetric_group(3)
    z2 = cyclic_group(2)
    inner = inner_automorphism(s3, s3.index_of("(0 1)"))
    report = coupling_injective_finite(s3, z2, [inner])
    assert not report.injective
    assert report.witness == 1


def test_coupling_outer_action_on_z3_is_injective():
    z3 = cyclic_group(3)
    inversion = tuple(z3.inv(x) for x in z3.elements)
    assert coupling_injective_finite(z3, cyclic_group(2), [inversion]).injective


def test_cbar_hnn_over_s3_is_trivial():
    s3 = symmetric_group(3)
    t = s3.index_of("(0 1)")
    C = {s3.identity, t}
    phi = extend_partial_isomorphism(s3, s3, [(t, t)])
    assert cbar_fixpoint(s3, C, C, phi) == frozenset({s3.identity})


def test_cbar_amalgam_z6_v4_is_whole_edge_group():
    z6, v4 = named_group("Z6"), klein_four_group()
    phi = extend_partial_isomorphism(z6, v4, [(3, 1)])
    assert cbar_fixpoint(z6, {0, 3}, {0, 1}, phi, B=v4) == frozenset({0, 3})


def test_partial_isomorphism_must_respect_relations():
    z6, z4 = named_group("Z6"), named_group("Z4")
    with pytest.raises(InvalidHomomorphismError):
        extend_partial_isomorphism(z6, z4, [(2, 1)])


# ----------------------------------------------------------------------
# Palavras
# ----------------------------------------------------------------------
def test_parse_and_format_words():
    word = parse_word("t*a^2*t^-1", BS_ALPHABET)
    assert len(word) == 4
    assert format_word(word) == "t*a^2*t^-1"
    assert format_word(parse_word("", BS_ALPHABET)) == "1"
    assert format_word(parse_word("a*a^-1", BS_ALPHABET)) == "1"


@pytest.mark.parametrize("text", ["a^", "b", "a**t", "t^x"])
def test_parse_word_errors(text):
    with pytest.raises(WordSyntaxError):
        parse_word(text, BS_ALPHABET)


def test_free_reduce():
    word = parse_word("a*t*t^-1*a^-1*t", BS_ALPHABET)
    assert format_word(free_reduce(word)) == "t"


def test_element_word_evaluates_back():
    G = symmetric_group(4)
    for x in G.elements:
        assert evaluate_word(G, element_word(G, x)) == x


# ----------------------------------------------------------------------
# Baumslag–Solitar
# ----------------------------------------------------------------------
def test_britton_reduction_removes_pinch():
    reduced = britton_reduce(2, 3, parse_word("t*a^2*t^-1", BS_ALPHABET))
    assert format_word(reduced) == "a^3"
    kept = britton_reduce(2, 3, parse_word("t*a*t^-1", BS_ALPHABET))
    assert format_word(kept) == "t*a*t^-1"


@pytest.mark.parametrize("m, n", [(1, 2), (2, 3), (2, 2), (2, -2), (-3, 5), (4, 6)])
def test_bs_normal_form_kills_relators(m, n):
    rng = np.random.default_rng(abs(m) * 10 + abs(n))
    relator = parse_word(f"t*a^{m}*t^-1*a^{-n}", BS_ALPHABET)
    assert bs_normal_form(m, n, relator) == (0,)
    for _ in range(25):
        w = random_bs_word(rng, int(rng.integers(1, 9)))
        assert bs_normal_form(m, n, w * relator * w.inverse()) == (0,)
        assert bs_normal_form(m, n, w * w.inverse()) == (0,)


def test_bs_normal_form_identifies_equal_elements():
    assert bs_normal_form(2, 3, parse_word("a^3*t", BS_ALPHABET)) == bs_normal_form(
        2, 3, parse_word("t*a^2", BS_ALPHABET)
    )
    assert bs_normal_form(2, 3, parse_word("a", BS_ALPHABET)) == (1,)
    assert bs_normal_form(2, 3, parse_word("t", BS_ALPHABET)) == (0, 1, 0)
    assert bs_normal_form(2, 3, parse_word("t", BS_ALPHABET)) != bs_normal_form(2, 3, parse_word("t*a", BS_ALPHABET))


def test_bs_requires_nonzero_parameters():
    with pytest.raises(IccKitError):
        bs_normal_form(0, 2, parse_word("a", BS_ALPHABET))


# ----------------------------------------------------------------------
# FC(Q)
# ----------------------------------------------------------------------
def test_fc_of_catalog_quotients():
    assert fc_of_group(Free(2)).is_trivial
    assert fc_of_group(Free(1)).kind == FcKind.WHOLE
    assert fc_of_group(FreeAbelian(3)).generator_indices == (0, 1, 2)
    assert fc_of_group(Finite(symmetric_group(3))).kind == FcKind.WHOLE

    product = fc_of_group(DirectProduct((FreeAbelian(1), Free(2))))
    assert product.kind == FcKind.PRODUCT
    assert product.generator_indices == (0,)
    assert product.is_infinite


def test_fc_of_finite_product_matches_brute_force():
    G = direct_product(symmetric_group(3), cyclic_group(2))
    fc = fc_of_group(DirectProduct((Finite(symmetric_group(3)), Finite(cyclic_group(2)))))
    assert fc.kind == FcKind.WHOLE
    assert all(len(c) < G.order for c in fin_conjugacy_classes(G))
