import pytest

from icckit.descriptors import BS, Builtin, CosetsOmega, Finite, FiniteExt, FreeAbelian, SplitExtensionDesc, WreathRestricted
from icckit.errors import SpecFileError
from icckit.families import family_engine
from icckit.spec_loader import desc_from_dict, parse_spec, serialize_desc
from icckit.verdict import Outcome

CATALOG_OUTCOMES = {
    "amalgam_z6_v4": Outcome.NOT_ICC,
    "bs_1_2": Outcome.ICC,
    "bs_2_2": Outcome.NOT_ICC,
    "bs_2_3": Outcome.ICC,
    "bs_2_m2": Outcome.NOT_ICC,
    "dihedral_amalgam": Outcome.NOT_ICC,
    "dihedral_free_product": Outcome.NOT_ICC,
    "dihedral_semidirect": Outcome.NOT_ICC,
    "direct_product_f2_f2": Outcome.ICC,
    "finite_extension_declared": Outcome.ICC,
    "finite_extension_lattice": Outcome.NOT_ICC,
    "finite_s3": Outcome.NOT_ICC,
    "free_product_z2_z2_z2": Outcome.ICC,
    "free_product_z2_z3": Outcome.ICC,
    "free_product_z_z": Outcome.ICC,
    "hnn_s3": Outcome.ICC,
    "lamplighter": Outcome.ICC,
    "lamplighter_complete": Outcome.NOT_ICC,
    "semidirect_anosov": Outcome.ICC,
    "twisted_z2_f2": Outcome.ICC,
    "wreath_z3_cosets": Outcome.NOT_ICC,
}


def test_catalog_is_complete(catalog_dir):
    assert sorted(p.stem for p in catalog_dir.glob("*.json")) == sorted(CATALOG_OUTCOMES)


@pytest.mark.parametrize("name, outcome", sorted(CATALOG_OUTCOMES.items()))
def test_catalog_verdicts(catalog_dir, name, outcome):
    desc = parse_spec(catalog_dir / f"{name}.json")
    assert family_engine.dispatch_decide(desc).outcome == outcome


@pytest.mark.parametrize("name", sorted(CATALOG_OUTCOMES))
def test_catalog_serialization_round_trip(catalog_dir, name):
    desc = parse_spec(catalog_dir / f"{name}.json")
    assert desc_from_dict(serialize_desc(desc)) == desc


def test_catalog_specific_shapes(catalog_dir):
    assert parse_spec(catalog_dir / "bs_2_m2.json") == BS(2, -2)
    assert parse_spec(catalog_dir / "twisted_z2_f2.json") == Builtin("twisted_z2_f2")

    semidirect = parse_spec(catalog_dir / "dihedral_semidirect.json")
    assert isinstance(semidirect, SplitExtensionDesc)
    assert semidirect.kernel == FreeAbelian(1)
    assert semidirect.kernel_names == ("t",)

    wreath = parse_spec(catalog_dir / "wreath_z3_cosets.json")
    assert isinstance(wreath, WreathRestricted)
    assert wreath.omega == CosetsOmega(index=3)

    lattice = parse_spec(catalog_dir / "finite_extension_lattice.json")
    assert isinstance(lattice, FiniteExt)
    assert lattice.quotient.order == 2


def test_shorthands_expand():
    assert desc_from_dict({"free_abelian": 3}) == FreeAbelian(3)
    finite = desc_from_dict({"named": "S3"})
    assert isinstance(finite, Finite) and finite.group.order == 6


def test_finite_from_table_and_permutations():
    table = desc_from_dict({"family": "finite", "table": [[0, 1], [1, 0]], "name": "C2"})
    assert table.group.order == 2
    perms = desc_from_dict({"family": "finite", "permutation_generators": [[1, 0, 2], [1, 2, 0]]})
    assert perms.group.order == 6


def test_non_unimodular_action_reports_key_path(write_spec):
    path = write_spec({
        "family": "semidirect",
        "kernel": {"free_abelian": 2},
        "quotient": {"free_abelian": 1},
        "action": [[[2, 0], [0, 1]]],
    })
    with pytest.raises(SpecFileError, match="non-unimodular") as info:
        parse_spec(path)
    assert info.value.key_path == ("action",)


def test_action_violating_relations_is_rejected(write_spec):
    path = write_spec({
        "family": "semidirect",
        "kernel": {"free_abelian": 2},
        "quotient": {"named": "Z3"},
        "action": [[[0, 1], [1, 0]]],
    })
    with pytest.raises(SpecFileError) as info:
        parse_spec(path)
    assert info.value.key_path == ("action",)


def test_unknown_family_is_rejected():
    with pytest.raises(SpecFileError, match="família desconhecida") as info:
        desc_from_dict({"family": "lie_algebra"})
    assert info.value.key_path == ("family",)


def test_nested_schema_error_path():
    with pytest.raises(SpecFileError) as info:
        desc_from_dict({"family": "direct_product", "factors": [{"free": 2}, {"family": "bs", "m": 2}]})
    assert info.value.key_path[:3] == ("factors", 1, "n")


@pytest.mark.parametrize(
    "node",
    [
        {"family": "bs", "m": 0, "n": 2},
        {"family": "bs", "m": 1, "n": 2, "extra": True},
        {"family": "finite", "named": "S3", "table": [[0]]},
        {"family": "free", "rank": -1},
        {"family": "builtin", "name": "missing"},
        {"rank": 2},
        [1, 2],
    ],
)
def test_invalid_documents(node):
    with pytest.raises(SpecFileError):
        desc_from_dict(node)


def test_invalid_json_reports_line(write_spec):
    path = write_spec('{\n  "family": "bs",\n  "m": 2,\n  "n": \n}')
    with pytest.raises(SpecFileError, match="linha 5"):
        parse_spec(path)


def test_missing_file(tmp_path):
    with pytest.raises(SpecFileError, match="não foi possível ler"):
        parse_spec(tmp_path / "missing.json")


def test_hnn_requires_subgroups(write_spec):
    path = write_spec({"family": "hnn", "base": {"named": "S3"}, "C": [0, 3], "C_prime": [0, 2], "phi": [[3, 2]]})
    with pytest.raises(SpecFileError) as info:
        parse_spec(path)
    assert info.value.key_path == ("C",)
