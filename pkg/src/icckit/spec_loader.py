"""
Spec Loader - Arquivos JSON de descritores de grupos

Lê um documento JSON cuja chave "family" escolhe a variante do descritor,
valida o esquema com pydantic e converte para os dataclasses de descriptors.
Erros de esquema, de relações (ação que não respeita Q) e matrizes não
unimodulares viram SpecFileError com o caminho da chave culpada.

Formas abreviadas aceitas onde se espera um grupo:
    {"free_abelian": 2}   {"free": 2}   {"named": "S3"}

serialize_desc é a inversa: parse(serialize(desc)) == desc.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .descriptors import (
    BS,
    Amalgam,
    Builtin,
    CenterData,
    CosetsOmega,
    Declared,
    DirectProduct,
    Finite,
    FiniteExt,
    FiniteSetOmega,
    Free,
    FreeAbelian,
    FreeProduct,
    GroupDesc,
    HNNFiniteBase,
    KernelPhiEntry,
    OmegaDesc,
    RegularOmega,
    SplitExtensionDesc,
    WreathComplete,
    WreathRestricted,
)
from .errors import IccKitError, SpecFileError
from .extensions import validate_action
from .families import BUILTINS, family_engine, resolve_omega
from .groupkit import FiniteGroup, group_from_permutations, group_from_table, named_group, require_subgroup
from .zlinalg import IntMatrix

KeyPath = Tuple[Union[str, int], ...]
Matrix = List[List[int]]


# ----------------------------------------------------------------------
# Esquema
# ----------------------------------------------------------------------
class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str


class BSSpec(_Spec):
    m: int
    n: int


class RankSpec(_Spec):
    rank: int = Field(ge=0)


class FiniteSpec(_Spec):
    table: Optional[Matrix] = None
    permutation_generators: Optional[Matrix] = None
    named: Optional[str] = None
    labels: Optional[List[str]] = None
    generators: Optional[List[int]] = None
    generator_names: Optional[List[str]] = None
    name: str = ""
    simple: Optional[bool] = None

    @model_validator(mode="after")
    def _one_source(self):
        given = [k for k in ("table", "permutation_generators", "named") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError("informe exatamente uma de: table, permutation_generators, named")
        return self


class DeclaredSpec(_Spec):
    name: str = ""
    icc: Optional[bool] = None
    centerless: Optional[bool] = None
    infinite: Optional[bool] = None
    simple: Optional[bool] = None
    abelian: Optional[bool] = None
    fc: Optional[Literal["trivial", "whole"]] = None
    generators: List[str] = []


class FactorsSpec(_Spec):
    factors: List[Dict[str, Any]]


class CenterSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rank: int = Field(ge=0)
    action: List[Matrix]
    twists: List[Matrix] = []
    free_rank: int = Field(default=0, ge=0)
    fc_is_center: bool = False


class KernelPhiSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    word: str
    central: List[int]
    free: List[int] = []


class SemidirectSpec(_Spec):
    kernel: Dict[str, Any]
    quotient: Dict[str, Any]
    action: List[List[Any]] = []
    kernel_names: List[str] = []
    quotient_names: List[str] = []
    center: Optional[CenterSpec] = None
    kernel_of_phi: List[KernelPhiSpec] = []
    centralizer_generators: Optional[List[int]] = None


class OmegaSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["regular", "finite_set", "cosets"] = "regular"
    size: Optional[int] = Field(default=None, ge=0)
    images: Optional[Matrix] = None
    index: Optional[int] = None
    subgroup: Optional[List[int]] = None


class WreathSpec(_Spec):
    base: Dict[str, Any]
    top: Dict[str, Any]
    omega: OmegaSpec = OmegaSpec()


class HNNSpec(_Spec):
    base: Dict[str, Any]
    C: List[int]
    C_prime: List[int]
    phi: List[Tuple[int, int]]


class AmalgamSpec(_Spec):
    A: Dict[str, Any]
    B: Dict[str, Any]
    C: List[int]
    C_prime: List[int]
    phi: List[Tuple[int, int]]


class FiniteExtSpec(_Spec):
    kernel: Dict[str, Any]
    quotient: Dict[str, Any]
    action: List[List[Any]] = []
    inner: Optional[List[bool]] = None
    torsion_free_outside: Optional[bool] = None


class BuiltinSpec(_Spec):
    name: str


# Esquemas por família - EDITE AQUI para registrar novas famílias
FAMILY_SCHEMAS = {
    "bs": BSSpec,
    "free_abelian": RankSpec,
    "free": RankSpec,
    "finite": FiniteSpec,
    "declared": DeclaredSpec,
    "direct_product": FactorsSpec,
    "free_product": FactorsSpec,
    "semidirect": SemidirectSpec,
    "wreath_restricted": WreathSpec,
    "wreath_complete": WreathSpec,
    "hnn": HNNSpec,
    "amalgam": AmalgamSpec,
    "finite_extension": FiniteExtSpec,
    "builtin": BuiltinSpec,
}

_SHORTHANDS = {
    "free_abelian": lambda v: {"family": "free_abelian", "rank": v},
    "free": lambda v: {"family": "free", "rank": v},
    "named": lambda v: {"family": "finite", "named": v},
}


# ----------------------------------------------------------------------
# Conversão
# ----------------------------------------------------------------------
def _expand_shorthand(node: Any, path: KeyPath) -> Dict[str, Any]:
    if not isinstance(node, dict):
        raise SpecFileError("esperado um objeto JSON descrevendo um grupo", path)
    if "family" not in node and len(node) == 1:
        key, value = next(iter(node.items()))
        if key in _SHORTHANDS:
            return _SHORTHANDS[key](value)
    if "family" not in node:
        raise SpecFileError("chave 'family' ausente", path)
    return node


def _validated(node: Dict[str, Any], path: KeyPath) -> _Spec:
    family = node["family"]
    schema = FAMILY_SCHEMAS.get(family)
    if schema is None:
        raise SpecFileError(f"família desconhecida '{family}' (esperado uma de {sorted(FAMILY_SCHEMAS)})",
                            path + ("family",))
    try:
        return schema.model_validate(node)
    except ValidationError as e:
        first = e.errors()[0]
        raise SpecFileError(first["msg"], path + tuple(first["loc"])) from e


def _matrix(rows: Sequence[Sequence[int]], path: KeyPath) -> IntMatrix:
    try:
        return IntMatrix.from_rows(rows)
    except IccKitError as e:
        raise SpecFileError(str(e), path) from e


def _finite_group(spec: FiniteSpec) -> FiniteGroup:
    if spec.named is not None:
        return named_group(spec.named)
    if spec.permutation_generators is not None:
        return group_from_permutations(spec.permutation_generators, name=spec.name,
                                       generator_names=spec.generator_names)
    return group_from_table(spec.table, labels=spec.labels, generators=spec.generators,
                            name=spec.name, generator_names=spec.generator_names)


def _finite_only(node: Any, path: KeyPath) -> FiniteGroup:
    desc = desc_from_dict(node, path)
    if not isinstance(desc, Finite):
        raise SpecFileError("esperado um grupo finito", path)
    return desc.group


def _action(raw: Sequence[Any], kernel: GroupDesc, path: KeyPath) -> Tuple:
    if isinstance(kernel, FreeAbelian):
        return tuple(_matrix(m, path + (i,)) for i, m in enumerate(raw))
    return tuple(tuple(int(x) for x in alpha) for alpha in raw)


def _omega(spec: OmegaSpec) -> OmegaDesc:
    if spec.kind == "regular":
        return RegularOmega()
    if spec.kind == "finite_set":
        images = tuple(tuple(p) for p in (spec.images or ()))
        size = spec.size if spec.size is not None else (len(images[0]) if images else 0)
        return FiniteSetOmega(size, images)
    return CosetsOmega(spec.index, tuple(spec.subgroup) if spec.subgroup is not None else None)


def _build(spec: _Spec, path: KeyPath) -> GroupDesc:
    family = spec.family
    if family == "bs":
        if spec.m == 0 or spec.n == 0:
            raise SpecFileError("BS(m,n) exige m, n não nulos", path)
        return BS(spec.m, spec.n)
    if family == "free_abelian":
        return FreeAbelian(spec.rank)
    if family == "free":
        return Free(spec.rank)
    if family == "finite":
        return Finite(_finite_group(spec), spec.simple)
    if family == "declared":
        return Declared(spec.name, spec.icc, spec.centerless, spec.infinite, spec.simple,
                        spec.abelian, spec.fc, tuple(spec.generators))
    if family in ("direct_product", "free_product"):
        factors = tuple(desc_from_dict(f, path + ("factors", i)) for i, f in enumerate(spec.factors))
        return DirectProduct(factors) if family == "direct_product" else FreeProduct(factors)

    if family == "semidirect":
        kernel = desc_from_dict(spec.kernel, path + ("kernel",))
        quotient = desc_from_dict(spec.quotient, path + ("quotient",))
        center = None
        if spec.center is not None:
            c = spec.center
            center = CenterData(
                rank=c.rank,
                action=tuple(_matrix(m, path + ("center", "action", i)) for i, m in enumerate(c.action)),
                twists=tuple(_matrix(m, path + ("center", "twists", i)) for i, m in enumerate(c.twists)),
                free_rank=c.free_rank,
                fc_is_center=c.fc_is_center,
            )
        ext = SplitExtensionDesc(
            kernel=kernel,
            quotient=quotient,
            action=_action(spec.action, kernel, path + ("action",)),
            kernel_names=tuple(spec.kernel_names),
            quotient_names=tuple(spec.quotient_names),
            center=center,
            kernel_of_phi=tuple(KernelPhiEntry(e.word, tuple(e.central), tuple(e.free)) for e in spec.kernel_of_phi),
            centralizer_generators=(tuple(spec.centralizer_generators)
                                    if spec.centralizer_generators is not None else None),
        )
        _check(lambda: validate_action(ext), path + ("action",))
        return ext

    if family in ("wreath_restricted", "wreath_complete"):
        base = desc_from_dict(spec.base, path + ("base",))
        top = desc_from_dict(spec.top, path + ("top",))
        omega = _omega(spec.omega)
        _check(lambda: resolve_omega(top, omega), path + ("omega",))
        cls = WreathRestricted if family == "wreath_restricted" else WreathComplete
        return cls(base, top, omega)

    if family == "hnn":
        A = _finite_only(spec.base, path + ("base",))
        _check(lambda: require_subgroup(A, spec.C, "C"), path + ("C",))
        _check(lambda: require_subgroup(A, spec.C_prime, "C'"), path + ("C_prime",))
        return HNNFiniteBase(A, frozenset(spec.C), frozenset(spec.C_prime), tuple(tuple(p) for p in spec.phi))

    if family == "amalgam":
        A = _finite_only(spec.A, path + ("A",))
        B = _finite_only(spec.B, path + ("B",))
        _check(lambda: require_subgroup(A, spec.C, "C"), path + ("C",))
        _check(lambda: require_subgroup(B, spec.C_prime, "C'"), path + ("C_prime",))
        return Amalgam(A, B, frozenset(spec.C), frozenset(spec.C_prime), tuple(tuple(p) for p in spec.phi))

    if family == "finite_extension":
        kernel = desc_from_dict(spec.kernel, path + ("kernel",))
        Q = _finite_only(spec.quotient, path + ("quotient",))
        ext = FiniteExt(kernel, Q, _action(spec.action, kernel, path + ("action",)),
                        tuple(spec.inner) if spec.inner is not None else None, spec.torsion_free_outside)
        _check(lambda: family_engine.validate_finite_ext(ext), path)
        return ext

    if spec.name not in BUILTINS:
        raise SpecFileError(f"grupo embutido desconhecido '{spec.name}'", path + ("name",))
    return Builtin(spec.name)


def _check(validation, path: KeyPath):
    try:
        validation()
    except SpecFileError:
        raise
    except IccKitError as e:
        raise SpecFileError(str(e), path) from e


def desc_from_dict(node: Any, path: KeyPath = ()) -> GroupDesc:
    """
    Converte um nó JSON já carregado em descritor.

    Raises:
        SpecFileError: com o caminho da chave culpada
    """
    node = _expand_shorthand(node, path)
    spec = _validated(node, path)
    try:
        return _build(spec, path)
    except SpecFileError:
        raise
    except IccKitError as e:
        raise SpecFileError(str(e), path) from e


def parse_spec(path: Union[str, Path]) -> GroupDesc:
    """
    Lê e valida um arquivo de especificação.

    Exemplo de uso:
        parse_spec("config/catalog/bs_2_3.json")  # BS(2,3)

    Raises:
        SpecFileError: arquivo ilegível, JSON inválido (com linha) ou esquema violado
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SpecFileError(f"não foi possível ler {path}: {e.strerror}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFileError(f"JSON inválido na linha {e.lineno}, coluna {e.colno}: {e.msg}") from e
    desc = desc_from_dict(data)
    logger.debug(f"Especificação {path.name} carregada: família {desc.family}")
    return desc


# ----------------------------------------------------------------------
# Serialização
# ----------------------------------------------------------------------
def _finite_dict(G: FiniteGroup, simple: Optional[bool] = None) -> Dict[str, Any]:
    node = {
        "family": "finite",
        "table": [list(row) for row in G.table],
        "labels": list(G.labels),
        "generators": list(G.generators),
        "generator_names": list(G.generator_names),
        "name": G.name,
    }
    if simple is not None:
        node["simple"] = simple
    return node


def _action_list(action: Sequence) -> List:
    return [a.tolist() if isinstance(a, IntMatrix) else list(a) for a in action]


def _omega_dict(omega: OmegaDesc) -> Dict[str, Any]:
    if isinstance(omega, FiniteSetOmega):
        return {"kind": "finite_set", "size": omega.size, "images": [list(p) for p in omega.images]}
    if isinstance(omega, CosetsOmega):
        return {"kind": "cosets", "index": omega.index,
                "subgroup": list(omega.subgroup) if omega.subgroup is not None else None}
    return {"kind": "regular"}


def serialize_desc(desc: GroupDesc) -> Dict[str, Any]:
    """Descritor -> dicionário JSON aceito por desc_from_dict."""
    if isinstance(desc, BS):
        return {"family": "bs", "m": desc.m, "n": desc.n}
    if isinstance(desc, (FreeAbelian, Free)):
        return {"family": desc.family, "rank": desc.rank}
    if isinstance(desc, Finite):
        return _finite_dict(desc.group, desc.simple)
    if isinstance(desc, Declared):
        return {"family": "declared", "name": desc.name, "icc": desc.icc, "centerless": desc.centerless,
                "infinite": desc.infinite, "simple": desc.simple, "abelian": desc.abelian, "fc": desc.fc,
                "generators": list(desc.generators)}
    if isinstance(desc, (DirectProduct, FreeProduct)):
        return {"family": desc.family, "factors": [serialize_desc(f) for f in desc.factors]}
    if isinstance(desc, SplitExtensionDesc):
        node = {
            "family": "semidirect",
            "kernel": serialize_desc(desc.kernel),
            "quotient": serialize_desc(desc.quotient),
            "action": _action_list(desc.action),
            "kernel_names": list(desc.kernel_names),
            "quotient_names": list(desc.quotient_names),
            "kernel_of_phi": [{"word": e.word, "central": list(e.central), "free": list(e.free)}
                              for e in desc.kernel_of_phi],
            "centralizer_generators": (list(desc.centralizer_generators)
                                       if desc.centralizer_generators is not None else None),
        }
        if desc.center is not None:
            c = desc.center
            node["center"] = {"rank": c.rank, "action": _action_list(c.action), "twists": _action_list(c.twists),
                              "free_rank": c.free_rank, "fc_is_center": c.fc_is_center}
        return node
    if isinstance(desc, (WreathRestricted, WreathComplete)):
        return {"family": desc.family, "base": serialize_desc(desc.base), "top": serialize_desc(desc.top),
                "omega": _omega_dict(desc.omega)}
    if isinstance(desc, HNNFiniteBase):
        return {"family": "hnn", "base": _finite_dict(desc.base), "C": sorted(desc.C),
                "C_prime": sorted(desc.C_prime), "phi": [list(p) for p in desc.phi]}
    if isinstance(desc, Amalgam):
        return {"family": "amalgam", "A": _finite_dict(desc.A), "B": _finite_dict(desc.B), "C": sorted(desc.C),
                "C_prime": sorted(desc.C_prime), "phi": [list(p) for p in desc.phi]}
    if isinstance(desc, FiniteExt):
        return {"family": "finite_extension", "kernel": serialize_desc(desc.kernel),
                "quotient": _finite_dict(desc.quotient), "action": _action_list(desc.action),
                "inner": list(desc.inner) if desc.inner is not None else None,
                "torsion_free_outside": desc.torsion_free_outside}
    if isinstance(desc, Builtin):
        return {"family": "builtin", "name": desc.name}
    raise IccKitError(f"Descritor sem serialização: {type(desc).__name__}")
