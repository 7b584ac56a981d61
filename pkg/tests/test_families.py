import pytest

from icckit.descriptors import (
    BS,
    Amalgam,
    Builtin,
    CosetsOmega,
    Declared,
    DirectProduct,
    Finite,
    FiniteExt,
    FiniteSetOmega,
    Free,
    FreeAbelian,
    FreeProduct,
    HNNFiniteBase,
    RegularOmega,
    WreathComplete,
    WreathRestricted,
)
from icckit.errors import IccKitError, InvalidHomomorphismError
from icckit.families import FamilyEngine, resolve_omega
from icckit.groupkit import (
    alternating_group,
    cyclic_group,
    inner_automorphism,
    klein_four_group,
    named_group,
    quaternion_group,
    symmetric_group,
)
from icckit.verdict import Clause, Outcome, WitnessKind
from icckit.zlinalg import IntMatrix

F2_ICC = Declared(name="F2", icc=True, infinite=True, generators=("x", "y"))


@pytest.fixture(scope="module")
def engine():
    return FamilyEngine()


def _nonzero(bound):
    return [k for k in range(-bound, bound + 1) if k != 0]


# ----------------------------------------------------------------------
# Baumslag–Solitar
# ----------------------------------------------------------------------
@pytest.mark.parametrize("m", _nonzero(5))
@pytest.mark.parametrize("n", _nonzero(5))
def test_bs_grid(engine, m, n):
    verdict = engine.dispatch_decide(BS(m, n))
    assert verdict.is_icc is (m != n and m != -n)
    assert verdict.fired() == (Clause.BS_M_NE_PM_N,)
    assert verdict.family == "bs"
    if m == n:
        assert verdict.witness.kind == WitnessKind.CENTRAL
        assert verdict.witness.class_size == 1
    elif m == -n:
        assert verdict.witness.class_size == 2


def test_bs_rejects_zero(engine):
    with pytest.raises(IccKitError):
        engine.decide_icc_bs(0, 2)


# ----------------------------------------------------------------------
# Famílias simples
# ----------------------------------------------------------------------
def test_finite_groups_are_never_icc(engine):
    for G in (symmetric_group(3), quaternion_group(), cyclic_group(1), alternating_group(4)):
        verdict = engine.dispatch_decide(Finite(G))
        assert verdict.is_not_icc
        assert verdict.witness.kind == WitnessKind.FINITE_GROUP


def test_finite_witness_class_size(engine):
    q8 = engine.decide_finite(Finite(quaternion_group()))
    assert q8.witness.class_size == 1
    s3 = engine.decide_finite(Finite(symmetric_group(3)))
    assert s3.witness.class_size in (2, 3)


def test_simple_groups(engine):
    assert engine.decide_icc_simple(Declared(name="T", simple=True, infinite=True)).is_icc
    assert engine.decide_icc_simple(Declared(name="T", simple=True)).is_unknown
    assert engine.dispatch_decide(Finite(alternating_group(5), simple=True)).is_not_icc
    with pytest.raises(IccKitError):
        engine.decide_icc_simple(Finite(symmetric_group(3), simple=True))


@pytest.mark.parametrize(
    "desc, outcome",
    [
        (Declared(icc=True), Outcome.ICC),
        (Declared(icc=False), Outcome.NOT_ICC),
        (Declared(centerless=False), Outcome.NOT_ICC),
        (Declared(infinite=False), Outcome.NOT_ICC),
        (Declared(name="G"), Outcome.UNKNOWN),
    ],
)
def test_declared(engine, desc, outcome):
    assert engine.dispatch_decide(desc).outcome == outcome


def test_declared_contradiction(engine):
    with pytest.raises(IccKitError):
        engine.dispatch_decide(Declared(icc=True, infinite=False))


@pytest.mark.parametrize(
    "desc, outcome",
    [
        (FreeAbelian(2), Outcome.NOT_ICC),
        (FreeAbelian(0), Outcome.NOT_ICC),
        (Free(1), Outcome.NOT_ICC),
        (Free(2), Outcome.ICC),
        (Free(5), Outcome.ICC),
    ],
)
def test_abelian_and_free(engine, desc, outcome):
    assert engine.dispatch_decide(desc).outcome == outcome


def test_direct_products(engine):
    assert engine.dispatch_decide(DirectProduct((Free(2), Free(2)))).is_icc
    mixed = engine.dispatch_decide(DirectProduct((Free(2), FreeAbelian(1))))
    assert mixed.is_not_icc
    assert "fator 1" in mixed.witness.detail
    assert engine.dispatch_decide(DirectProduct((Free(2), Finite(cyclic_group(1))))).is_icc
    assert engine.dispatch_decide(DirectProduct((Free(2), Declared(name="G")))).is_unknown


# ----------------------------------------------------------------------
# Wreath
# ----------------------------------------------------------------------
def test_lamplighter(engine):
    z2 = Finite(cyclic_group(2))
    assert engine.dispatch_decide(WreathRestricted(z2, FreeAbelian(1))).is_icc

    complete = engine.dispatch_decide(WreathComplete(z2, FreeAbelian(1)))
    assert complete.is_not_icc
    assert complete.condition(Clause.WREATH_BASE_CENTERLESS).holds is False
    assert complete.witness.kind == WitnessKind.CENTRAL


@pytest.mark.parametrize(
    "base, top, omega, ia, ib, ii, outcome",
    [
        (Finite(symmetric_group(3)), FreeAbelian(1), RegularOmega(), False, True, True, Outcome.ICC),
        (Finite(symmetric_group(3)), FreeAbelian(1), CosetsOmega(index=3), False, False, False, Outcome.NOT_ICC),
        (F2_ICC, FreeAbelian(1), CosetsOmega(index=3), True, False, False, Outcome.NOT_ICC),
        (F2_ICC, Finite(cyclic_group(2)), RegularOmega(), True, False, True, Outcome.ICC),
        (Finite(cyclic_group(2)), Finite(cyclic_group(2)), RegularOmega(), False, False, True, Outcome.NOT_ICC),
        (Free(2), Finite(symmetric_group(3)), RegularOmega(), True, False, True, Outcome.ICC),
    ],
)
def test_wreath_truth_table(engine, base, top, omega, ia, ib, ii, outcome):
    verdict = engine.decide_icc_wreath_restricted(base, top, omega)
    assert verdict.outcome == outcome
    assert verdict.condition(Clause.WREATH_BASE_ICC).holds is ia
    assert verdict.condition(Clause.WREATH_ORBITS_INFINITE).holds is ib
    assert verdict.condition(Clause.WREATH_FC_FIXES_OMEGA).holds is ii


def test_wreath_witnesses(engine):
    cosets = engine.decide_icc_wreath_restricted(Finite(cyclic_group(3)), FreeAbelian(1), CosetsOmega(index=3))
    assert cosets.witness.element == "t^3"

    finite = engine.decide_icc_wreath_restricted(Finite(cyclic_group(2)), Finite(cyclic_group(2)))
    assert finite.witness.element == "d0*d1"


def test_wreath_over_lattice_with_finite_omega(engine):
    omega = FiniteSetOmega(2, ((1, 0), (0, 1)))
    verdict = engine.decide_icc_wreath_restricted(F2_ICC, FreeAbelian(2), omega)
    assert verdict.is_not_icc
    assert verdict.witness.element == "t0^2"


def test_resolve_omega_validation():
    with pytest.raises(InvalidHomomorphismError):
        resolve_omega(FreeAbelian(2), FiniteSetOmega(3, ((1, 2, 0), (1, 0, 2))))
    with pytest.raises(InvalidHomomorphismError):
        resolve_omega(Finite(cyclic_group(3)), FiniteSetOmega(2, ((1, 0),)))
    s3 = symmetric_group(3)
    cosets = resolve_omega(Finite(s3), CosetsOmega(subgroup=(s3.identity, s3.index_of("(0 1)"))))
    assert cosets.size == 3


# ----------------------------------------------------------------------
# Produtos livres, amálgamas, HNN
# ----------------------------------------------------------------------
def test_free_products(engine):
    z2, z3 = Finite(cyclic_group(2)), Finite(cyclic_group(3))
    assert engine.dispatch_decide(FreeProduct((z2, z3))).is_icc
    assert engine.dispatch_decide(FreeProduct((FreeAbelian(1), FreeAbelian(1)))).is_icc
    assert engine.dispatch_decide(FreeProduct((z2, z2, z2))).is_icc

    dihedral = engine.dispatch_decide(FreeProduct((z2, z2)))
    assert dihedral.is_not_icc
    assert dihedral.witness.element == "a0*b0"
    assert dihedral.witness.class_size == 2

    with pytest.raises(IccKitError):
        engine.decide_icc_free_product((z2,))
    with pytest.raises(IccKitError):
        engine.decide_icc_free_product((z2, Finite(cyclic_group(1))))


def test_free_product_factor_orders_through_descriptors(engine):
    z2, z3 = Finite(cyclic_group(2)), Finite(cyclic_group(3))
    padded = DirectProduct((z2, Finite(cyclic_group(1))))
    assert engine.dispatch_decide(FreeProduct((padded, z2))).is_not_icc

    finite_unknown = Declared(name="H", infinite=False)
    verdict = engine.dispatch_decide(FreeProduct((finite_unknown, z2)))
    assert verdict.outcome == Outcome.UNKNOWN
    assert verdict.condition(Clause.FREE_PRODUCT_NOT_DIHEDRAL).holds is None

    assert engine.dispatch_decide(FreeProduct((finite_unknown, z3))).is_icc
    assert engine.dispatch_decide(FreeProduct((F2_ICC, z2))).is_icc


def test_amalgams(engine):
    z2 = cyclic_group(2)
    dihedral = engine.dispatch_decide(Amalgam(z2, z2, frozenset({0}), frozenset({0}), ()))
    assert dihedral.is_not_icc
    assert dihedral.witness.element == "a0*b0"

    z6, v4 = named_group("Z6"), klein_four_group()
    verdict = engine.decide_icc_amalgam(z6, v4, {0, 3}, {0, 1}, [(3, 1)])
    assert verdict.is_not_icc
    assert verdict.condition(Clause.AMALGAM_CBAR_TRIVIAL).holds is False
    assert verdict.witness.element == "a0^3"

    s3 = symmetric_group(3)
    t = s3.index_of("(0 1)")
    assert engine.decide_icc_amalgam(s3, s3, {s3.identity, t}, {s3.identity, t}, [(t, t)]).is_icc

    z4 = cyclic_group(4)
    degenerate = engine.decide_icc_amalgam(z4, z4, {0, 2}, {0, 2}, [(2, 2)])
    assert degenerate.is_not_icc
    assert degenerate.condition(Clause.AMALGAM_DEGENERATE).holds is False

    with pytest.raises(IccKitError):
        engine.decide_icc_amalgam(z2, z2, {0, 1}, {0, 1}, [(1, 1)])


def test_hnn_extensions(engine):
    s3 = symmetric_group(3)
    t = s3.index_of("(0 1)")
    verdict = engine.dispatch_decide(HNNFiniteBase(s3, frozenset({s3.identity, t}), frozenset({s3.identity, t}),
                                                   ((t, t),)))
    assert verdict.is_icc
    assert verdict.fired() == (Clause.HNN_DEGENERATE, Clause.HNN_CBAR_TRIVIAL)

    z2 = cyclic_group(2)
    degenerate = engine.decide_icc_hnn_finite_base(z2, {0, 1}, {0, 1}, [(1, 1)])
    assert degenerate.is_not_icc
    assert degenerate.condition(Clause.HNN_DEGENERATE).holds is False

    z4 = cyclic_group(4)
    normal = engine.decide_icc_hnn_finite_base(z4, {0, 2}, {0, 2}, [(2, 2)])
    assert normal.is_not_icc
    assert normal.witness.element == "g^2"


# ----------------------------------------------------------------------
# Extensões cindidas e embutidos
# ----------------------------------------------------------------------
def test_twisted_builtin_is_icc(engine):
    verdict = engine.dispatch_decide(Builtin("twisted_z2_f2"))
    assert verdict.is_icc
    assert verdict.family == "builtin"


def test_unknown_builtin(engine):
    with pytest.raises(IccKitError):
        engine.dispatch_decide(Builtin("missing"))


# ----------------------------------------------------------------------
# Extensões finitas
# ----------------------------------------------------------------------
def _finite_ext_corpus():
    s3, z2, z3, z4 = symmetric_group(3), cyclic_group(2), cyclic_group(3), cyclic_group(4)
    v4 = klein_four_group()
    k3 = cyclic_group(3)
    inversion3 = tuple(k3.inv(x) for x in k3.elements)
    k4 = cyclic_group(4)
    inversion4 = tuple(k4.inv(x) for x in k4.elements)
    identity = IntMatrix.identity(2)
    return [
        FiniteExt(Finite(s3), z2, (inner_automorphism(s3, s3.index_of("(0 1)")),)),
        FiniteExt(Finite(s3), z2, (tuple(s3.elements),)),
        FiniteExt(Finite(k3), z2, (inversion3,)),
        FiniteExt(Finite(k4), z2, (inversion4,)),
        FiniteExt(Finite(v4), z3, ((0, 2, 3, 1),)),
        FiniteExt(Finite(quaternion_group()), z2, (tuple(range(8)),)),
        FiniteExt(FreeAbelian(2), z2, (IntMatrix.from_rows([[0, 1], [1, 0]]),)),
        FiniteExt(FreeAbelian(2), z2, (IntMatrix.from_rows([[-1, 0], [0, -1]]),)),
        FiniteExt(FreeAbelian(2), z4, (IntMatrix.from_rows([[0, -1], [1, 0]]),)),
        FiniteExt(FreeAbelian(2), z3, (IntMatrix.from_rows([[0, -1], [1, -1]]),)),
        FiniteExt(FreeAbelian(2), named_group("Z6"), (IntMatrix.from_rows([[1, -1], [1, 0]]),)),
        FiniteExt(FreeAbelian(1), z2, (IntMatrix.from_rows([[-1]]),)),
        FiniteExt(FreeAbelian(2), v4, (IntMatrix.from_rows([[-1, 0], [0, 1]]), IntMatrix.from_rows([[1, 0], [0, -1]]))),
        FiniteExt(FreeAbelian(2), z2, (identity,)),
        FiniteExt(F2_ICC, z2, (), (True, False), True),
        FiniteExt(F2_ICC, z2, (), (True, False)),
        FiniteExt(F2_ICC, z2, (), (True, True)),
        FiniteExt(F2_ICC, z4, (), (True, False, True, False)),
        FiniteExt(F2_ICC, named_group("Z8"), (), None, True),
        FiniteExt(Declared(name="A", abelian=True, infinite=True), z2, (), (True, False)),
    ]


def test_finite_extension_forms_agree(engine):
    corpus = _finite_ext_corpus()
    assert len(corpus) == 20
    outcomes = set()
    for ext in corpus:
        coupling = engine.decide_icc_finite_extension(ext)
        torsion = engine.decide_icc_finite_index_torsion(ext)
        assert coupling.outcome == torsion.outcome
        assert engine.dispatch_decide(ext).outcome == coupling.outcome
        outcomes.add(coupling.outcome)
    assert outcomes == {Outcome.ICC, Outcome.NOT_ICC}


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_kernel_times_cyclic_is_not_icc(engine, p):
    Zp = cyclic_group(p)
    trivial_action = FiniteExt(F2_ICC, Zp, (), (True,) * p)
    verdict = engine.dispatch_decide(trivial_action)
    assert verdict.is_not_icc
    assert verdict.condition(Clause.FINITE_EXT_COUPLING_INJECTIVE).holds is False


def test_finite_extension_validation(engine):
    z2 = cyclic_group(2)
    with pytest.raises(IccKitError):
        engine.validate_finite_ext(FiniteExt(F2_ICC, z2, (), (False, False)))
    with pytest.raises(IccKitError):
        engine.validate_finite_ext(FiniteExt(F2_ICC, z2, (), (True, True), True))
    with pytest.raises(IccKitError, match="non-unimodular"):
        engine.validate_finite_ext(FiniteExt(FreeAbelian(1), z2, (IntMatrix.from_rows([[2]]),)))
