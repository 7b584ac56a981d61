import numpy as np
import pytest

from icckit.descriptors import (
    BS,
    Amalgam,
    CosetsOmega,
    Declared,
    Finite,
    Free,
    FreeAbelian,
    FreeProduct,
    SplitExtensionDesc,
    WreathRestricted,
)
from icckit.errors import IccKitError, UnsupportedDescriptorError
from icckit.families import FamilyEngine
from icckit.groupkit import Word, cyclic_group, direct_product, fin_conjugacy_classes, named_group, symmetric_group
from icckit.oracle import (
    BaumslagSolitarGroup,
    FiniteTableGroup,
    FreeAbelianGroup,
    FreeGroup,
    FreeProductGroup,
    NormalFormGroup,
    OracleEngine,
    ProductGroup,
    SemidirectGroup,
    WreathZGroup,
    normal_form_group,
    twisted_z2_f2_group,
)
from icckit.verdict import Outcome, Verdict, Witness, WitnessKind, icc, not_icc
from icckit.zlinalg import IntMatrix


@pytest.fixture(scope="module")
def oracle():
    return OracleEngine({"oracle_radius": 6})


@pytest.fixture(scope="module")
def families():
    return FamilyEngine()


def random_element(group, rng, length):
    letters = tuple(
        (int(g), int(e))
        for g, e in zip(rng.integers(0, len(group.alphabet), size=length), rng.choice([-1, 1], size=length))
    )
    return group.normalize(Word(group.alphabet, letters))


def _nonzero(bound):
    return [k for k in range(-bound, bound + 1) if k != 0]


# ----------------------------------------------------------------------
# Formas normais
# ----------------------------------------------------------------------
def test_relators_normalize_to_identity():
    bs = BaumslagSolitarGroup(2, 3)
    assert bs.parse("t*a^2*t^-1*a^-3") == bs.identity()
    assert bs.parse("a^3*t") == bs.parse("t*a^2")

    lamp = WreathZGroup(cyclic_group(2))
    assert lamp.parse("d0^2") == lamp.identity()
    assert lamp.parse("d0*t*d0*t^-1*d0^-1*t*d0^-1*t^-1") == lamp.identity()

    dihedral = normal_form_group(FreeProduct((Finite(cyclic_group(2)), Finite(cyclic_group(2)))))
    assert dihedral.parse("a0*a0") == dihedral.identity()
    assert dihedral.parse("b0^3") == dihedral.parse("b0")


PHI = IntMatrix.from_rows([[1, 1], [0, 1]])
PSI = IntMatrix.from_rows([[1, 0], [1, 1]])

NORMAL_FORMS = [
    pytest.param(lambda: FiniteTableGroup(symmetric_group(4)), id="s4"),
    pytest.param(lambda: FreeAbelianGroup(3), id="z3"),
    pytest.param(lambda: FreeGroup(2), id="f2"),
    pytest.param(lambda: ProductGroup([FreeGroup(2), FiniteTableGroup(symmetric_group(3))]), id="f2xs3"),
    pytest.param(lambda: normal_form_group(SplitExtensionDesc(kernel=FreeAbelian(2), quotient=Free(2),
                                                              action=(PHI, PSI))), id="z2-f2"),
    pytest.param(lambda: normal_form_group(SplitExtensionDesc(kernel=FreeAbelian(2), quotient=Finite(cyclic_group(2)),
                                                              action=(IntMatrix.from_rows([[-1, 0], [0, -1]]),))),
                 id="z2-c2"),
    pytest.param(lambda: WreathZGroup(cyclic_group(3)), id="wreath"),
    pytest.param(lambda: WreathZGroup(cyclic_group(2), period=3), id="wreath-periodic"),
    pytest.param(lambda: BaumslagSolitarGroup(2, 3), id="bs23"),
    pytest.param(lambda: BaumslagSolitarGroup(-1, 4), id="bs-14"),
    pytest.param(lambda: FreeProductGroup([cyclic_group(2), cyclic_group(3)]), id="c2*c3"),
    pytest.param(twisted_z2_f2_group, id="twisted"),
]


def random_word(group, rng, length):
    letters = tuple(
        (int(g), int(e))
        for g, e in zip(rng.integers(0, len(group.alphabet), size=length), rng.choice([-1, 1], size=length))
    )
    return Word(group.alphabet, letters)


def test_normal_forms_cover_every_family():
    built = [p.values[0]() for p in NORMAL_FORMS]
    covered = {type(g) for g in built}
    assert covered == set(NormalFormGroup.__subclasses__())
    assert isinstance(built[4], SemidirectGroup)


@pytest.mark.parametrize("factory", NORMAL_FORMS)
def test_normalize_is_multiplicative(factory):
    group = factory()
    rng = np.random.default_rng(11)
    for _ in range(1000):
        u = random_word(group, rng, int(rng.integers(0, 7)))
        v = random_word(group, rng, int(rng.integers(0, 7)))
        assert group.normalize(u * v) == group.multiply(group.normalize(u), group.normalize(v))


@pytest.mark.parametrize("factory", NORMAL_FORMS)
def test_group_axioms_on_random_words(factory):
    group = factory()
    rng = np.random.default_rng(7)
    e = group.identity()
    for _ in range(30):
        x, y, z = (random_element(group, rng, int(rng.integers(0, 7))) for _ in range(3))
        assert group.multiply(x, group.invert(x)) == e
        assert group.multiply(e, x) == x
        assert group.multiply(group.multiply(x, y), z) == group.multiply(x, group.multiply(y, z))


def test_unsupported_descriptor_has_no_normal_form(oracle):
    with pytest.raises(UnsupportedDescriptorError):
        oracle.group_for(Declared(name="G"))
    with pytest.raises(UnsupportedDescriptorError):
        normal_form_group(Amalgam(named_group("Z6"), named_group("V4"), frozenset({0, 3}), frozenset({0, 1}), ((3, 1),)))


# ----------------------------------------------------------------------
# Certificação
# ----------------------------------------------------------------------
FINITE_GROUPS = [
    symmetric_group(3),
    symmetric_group(4),
    named_group("Q8"),
    named_group("D4"),
    named_group("D5"),
    named_group("D12"),
    named_group("A4"),
    named_group("Z7"),
    named_group("V4"),
    direct_product(symmetric_group(4), cyclic_group(2)),
]


@pytest.mark.parametrize("G", FINITE_GROUPS, ids=lambda G: f"{G.name}")
def test_certified_class_matches_conjugacy_classes(oracle, families, G):
    group = FiniteTableGroup(G)
    for cls in fin_conjugacy_classes(G):
        x = min(cls)
        assert oracle.certify_finite_class(group, x, G.order) == cls
    assert families.dispatch_decide(Finite(G)).is_not_icc


@pytest.mark.parametrize("m", _nonzero(5))
@pytest.mark.parametrize("n", _nonzero(5))
def test_bs_witness_class_is_certified(oracle, families, m, n):
    if m not in (n, -n):
        pytest.skip("BS(m,n) é icc")
    verdict = families.decide_icc_bs(m, n)
    bs = BaumslagSolitarGroup(m, n)
    found = oracle.certify_finite_class(bs, bs.parse(verdict.witness.element), 4)
    assert found is not None
    assert len(found) == verdict.witness.class_size


@pytest.mark.parametrize(
    "m, n, radius",
    [(m, n, 8) for m in _nonzero(3) for n in _nonzero(3) if m not in (n, -n)]
    + [(m, n, 5) for m in _nonzero(5) for n in _nonzero(5) if m not in (n, -n) and max(abs(m), abs(n)) > 3],
)
def test_bs_icc_conjugates_keep_growing(oracle, m, n, radius):
    bs = BaumslagSolitarGroup(m, n)
    report = oracle.ball_conjugates(bs, bs.parse("a"), radius)
    assert not report.closed
    assert len(report.counts) == radius + 1
    assert all(b > a for a, b in zip(report.counts, report.counts[1:]))


def test_lamplighter_generator_is_not_certified(oracle):
    lamp = WreathZGroup(cyclic_group(2))
    assert oracle.certify_finite_class(lamp, lamp.parse("d0"), 6) is None
    report = oracle.ball_conjugates(lamp, lamp.parse("d0"), 6)
    assert not report.closed
    assert report.counts[-1] > report.counts[0]


def test_periodic_wreath_shift_is_central(oracle):
    desc = WreathRestricted(Finite(cyclic_group(3)), FreeAbelian(1), CosetsOmega(index=3))
    group = oracle.group_for(desc)
    found = oracle.certify_finite_class(group, group.parse("t^3"), 4)
    assert found is not None and len(found) == 1


def test_infinite_dihedral_class_has_two_elements_in_every_presentation(oracle):
    z2 = cyclic_group(2)
    semidirect = SplitExtensionDesc(kernel=FreeAbelian(1), quotient=Finite(z2), action=(IntMatrix.from_rows([[-1]]),),
                                    kernel_names=("t",), quotient_names=("s",))
    presentations = [
        (FreeProduct((Finite(z2), Finite(z2))), "a0*b0"),
        (Amalgam(z2, z2, frozenset({0}), frozenset({0}), ()), "a0*b0"),
        (semidirect, "t"),
    ]
    for desc, word in presentations:
        group = oracle.group_for(desc)
        found = oracle.certify_finite_class(group, group.parse(word), 4)
        assert found is not None
        assert len(found) == 2


def test_twisted_probes_keep_growing(oracle):
    group = twisted_z2_f2_group()
    words = oracle.probe_words(group)
    assert len(words) == 7 + 21
    for word in words:
        radius = 3 if "*" not in word else 2
        report = oracle.ball_conjugates(group, group.parse(word), radius)
        assert all(b > a for a, b in zip(report.counts, report.counts[1:]))


# ----------------------------------------------------------------------
# Teto e relatórios
# ----------------------------------------------------------------------
def test_conjugate_cap_truncates_enumeration():
    capped = OracleEngine({"oracle_max_conjugates": 50})
    free = FreeGroup(2)
    report = capped.ball_conjugates(free, free.parse("x0"), 10)
    assert not report.closed
    assert report.radius < 10
    assert report.conjugates == ()
    assert capped.certify_finite_class(free, free.parse("x0"), 10) is None


def test_negative_radius_is_rejected(oracle):
    bs = BaumslagSolitarGroup(2, 3)
    with pytest.raises(IccKitError):
        oracle.ball_conjugates(bs, bs.parse("a"), -1)


def test_ball_report_exports(oracle):
    bs = BaumslagSolitarGroup(2, -2)
    report = oracle.ball_conjugates(bs, bs.parse("a^2"), 3)
    assert report.closed
    assert report.counts == (1, 2, 2, 2)
    assert sorted(report.to_dict()["conjugates"]) == ["a^-2", "a^2"]

    frame = report.to_frame()
    assert list(frame.columns) == ["radius", "count"]
    assert frame["count"].tolist() == [1, 2, 2, 2]


# ----------------------------------------------------------------------
# Verificação cruzada
# ----------------------------------------------------------------------
def test_cross_check_skips_unsupported_and_unknown(oracle, families):
    declared = Declared(name="G", icc=True)
    assert oracle.cross_check(declared, families.dispatch_decide(declared)).status == "skipped"
    assert oracle.cross_check(BS(2, 3), Verdict(Outcome.UNKNOWN)).status == "skipped"


def test_cross_check_confirms_structural_verdicts(oracle, families):
    for desc in (BS(2, 2), BS(3, -3), FreeProduct((Finite(cyclic_group(2)), Finite(cyclic_group(2))))):
        record = oracle.cross_check(desc, families.dispatch_decide(desc), 4)
        assert record.status == "consistent"
        assert record.probes[0].closed


def test_cross_check_icc_verdict_records_probes(oracle, families):
    record = oracle.cross_check(BS(2, 3), families.dispatch_decide(BS(2, 3)), 4)
    assert record.status == "consistent"
    assert [p.element for p in record.probes] == ["a", "t", "a*t"]
    assert not any(p.closed for p in record.probes)


def test_cross_check_flags_wrong_verdicts(oracle):
    dihedral = FreeProduct((Finite(cyclic_group(2)), Finite(cyclic_group(2))))
    record = oracle.cross_check(dihedral, icc([]), 4)
    assert record.status == "inconsistent"
    assert record.probes[-1].element == "a0*b0"

    s3 = Finite(symmetric_group(3))
    assert oracle.cross_check(s3, icc([]), 4).status == "inconsistent"


def test_cross_check_class_size_mismatch(oracle):
    verdict = not_icc([], Witness("a^2", WitnessKind.CENTRAL, class_size=2))
    assert oracle.cross_check(BS(2, 2), verdict, 4).status == "inconsistent"


@pytest.mark.parametrize(
    "element, kind, status",
    [
        ("zz", WitnessKind.ORACLE, "skipped"),
        ("zz", WitnessKind.FINITE_NORMAL_SUBGROUP, "consistent"),
        ("a", WitnessKind.ORACLE, "inconsistent"),
        ("a", WitnessKind.CENTRAL, "consistent"),
    ],
)
def test_cross_check_witness_kinds(oracle, element, kind, status):
    record = oracle.cross_check(BS(2, 3), not_icc([], Witness(element, kind)), 3)
    assert record.status == status
    assert record.consistent is (status != "inconsistent")
