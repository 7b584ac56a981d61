"""
Descritores de grupos do catálogo

Cada família é um dataclass imutável; os decisores despacham pelo tipo.
Descritores compostos (produtos, wreath, extensões) são recursivos.
"""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, ClassVar, FrozenSet, Optional, Tuple, Union

from .zlinalg import IntMatrix

if TYPE_CHECKING:
    from .groupkit import FiniteGroup


@dataclass(frozen=True)
class GroupDesc:
    family: ClassVar[str] = "group"


@dataclass(frozen=True)
class Finite(GroupDesc):
    family: ClassVar[str] = "finite"
    group: "FiniteGroup" = None
    simple: Optional[bool] = None


@dataclass(frozen=True)
class FreeAbelian(GroupDesc):
    family: ClassVar[str] = "free_abelian"
    rank: int = 0


@dataclass(frozen=True)
class Free(GroupDesc):
    family: ClassVar[str] = "free"
    rank: int = 0


@dataclass(frozen=True)
class Declared(GroupDesc):
    """
    Grupo dado apenas por propriedades declaradas (fronteira de confiança).

    fc: "trivial" ou "whole" quando FC do grupo é conhecido.
    generators: nomes dos geradores, usados quando o grupo é quociente de uma extensão.
    """

    family: ClassVar[str] = "declared"
    name: str = ""
    icc: Optional[bool] = None
    centerless: Optional[bool] = None
    infinite: Optional[bool] = None
    simple: Optional[bool] = None
    abelian: Optional[bool] = None
    fc: Optional[str] = None
    generators: Tuple[str, ...] = ()


@dataclass(frozen=True)
class DirectProduct(GroupDesc):
    family: ClassVar[str] = "direct_product"
    factors: Tuple[GroupDesc, ...] = ()


# ----------------------------------------------------------------------
# Extensões cindidas
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class CenterData:
    """
    Centro Z(K) = Z^rank de um núcleo declarado e a ação induzida.

    action[u]: matriz de θ_u em Z(K). twists[u]: matriz rank × free_rank com
    θ_u(k_F) = k_F · twists[u]·ab(k_F) para k_F na parte não central.
    fc_is_center afirma FC(K) = Z(K).
    """

    rank: int
    action: Tuple[IntMatrix, ...]
    twists: Tuple[IntMatrix, ...] = ()
    free_rank: int = 0
    fc_is_center: bool = False


@dataclass(frozen=True)
class KernelPhiEntry:
    """Gerador q de ker Φ (palavra no quociente) com o conjugador k: θ_q = conjugação por k."""

    word: str
    central: Tuple[int, ...]
    free: Tuple[int, ...] = ()


Action = Union[IntMatrix, Tuple[int, ...]]


@dataclass(frozen=True)
class SplitExtensionDesc(GroupDesc):
    """
    K ⋊_θ Q com θ dado por gerador de Q.

    Núcleo Z^n: action é uma IntMatrix por gerador. Núcleo finito: um
    automorfismo (tupla de índices) por gerador. Núcleo declarado: centre
    e ker Φ vêm em center / kernel_of_phi.
    """

    family: ClassVar[str] = "semidirect"
    kernel: GroupDesc = None
    quotient: GroupDesc = None
    action: Tuple[Action, ...] = ()
    kernel_names: Tuple[str, ...] = ()
    quotient_names: Tuple[str, ...] = ()
    center: Optional[CenterData] = None
    kernel_of_phi: Tuple[KernelPhiEntry, ...] = ()
    centralizer_generators: Optional[Tuple[int, ...]] = None


Semidirect = SplitExtensionDesc


# ----------------------------------------------------------------------
# Wreath
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class OmegaDesc:
    kind: ClassVar[str] = "omega"


@dataclass(frozen=True)
class RegularOmega(OmegaDesc):
    """Ω = Q com multiplicação à esquerda."""

    kind: ClassVar[str] = "regular"


@dataclass(frozen=True)
class FiniteSetOmega(OmegaDesc):
    """Ω = {0..size-1}; images[j] é a permutação do gerador j do topo."""

    kind: ClassVar[str] = "finite_set"
    size: int = 1
    images: Tuple[Tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class CosetsOmega(OmegaDesc):
    """
    Ω = Q/H. Topo finito: subgroup lista os elementos de H.
    Topo Z: index n descreve H = nZ.
    """

    kind: ClassVar[str] = "cosets"
    index: Optional[int] = None
    subgroup: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class WreathRestricted(GroupDesc):
    family: ClassVar[str] = "wreath_restricted"
    complete: ClassVar[bool] = False
    base: GroupDesc = None
    top: GroupDesc = None
    omega: OmegaDesc = field(default_factory=RegularOmega)


@dataclass(frozen=True)
class WreathComplete(GroupDesc):
    family: ClassVar[str] = "wreath_complete"
    complete: ClassVar[bool] = True
    base: GroupDesc = None
    top: GroupDesc = None
    omega: OmegaDesc = field(default_factory=RegularOmega)


Wreath = Union[WreathRestricted, WreathComplete]


# ----------------------------------------------------------------------
# HNN, amálgamas, produtos livres
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class BS(GroupDesc):
    """BS(m,n) = <a, t | t a^m t⁻¹ = a^n>"""

    family: ClassVar[str] = "bs"
    m: int = 1
    n: int = 1


@dataclass(frozen=True)
class HNNFiniteBase(GroupDesc):
    """A*_φ com φ: C -> C' dado por pares (gerador de C, imagem)."""

    family: ClassVar[str] = "hnn"
    base: "FiniteGroup" = None
    C: FrozenSet[int] = frozenset()
    C_prime: FrozenSet[int] = frozenset()
    phi: Tuple[Tuple[int, int], ...] = ()


@dataclass(frozen=True)
class Amalgam(GroupDesc):
    """A *_C B com φ: C -> C' <= B dado por pares (gerador de C, imagem em B)."""

    family: ClassVar[str] = "amalgam"
    A: "FiniteGroup" = None
    B: "FiniteGroup" = None
    C: FrozenSet[int] = frozenset()
    C_prime: FrozenSet[int] = frozenset()
    phi: Tuple[Tuple[int, int], ...] = ()


@dataclass(frozen=True)
class FreeProduct(GroupDesc):
    family: ClassVar[str] = "free_product"
    factors: Tuple[GroupDesc, ...] = ()


# ----------------------------------------------------------------------
# Extensões finitas
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class FiniteExt(GroupDesc):
    """
    1 -> K -> G -> Q -> 1 com Q finito.

    action: automorfismo (núcleo finito) ou IntMatrix (núcleo Z^n) por gerador de Q.
    Núcleos declarados usam inner[q] (θ(q) é interno?) indexado pelos elementos
    de Q e, opcionalmente, torsion_free_outside (G∖K sem torção).
    """

    family: ClassVar[str] = "finite_extension"
    kernel: GroupDesc = None
    quotient: "FiniteGroup" = None
    action: Tuple[Action, ...] = ()
    inner: Optional[Tuple[bool, ...]] = None
    torsion_free_outside: Optional[bool] = None


@dataclass(frozen=True)
class Builtin(GroupDesc):
    """Grupo embutido com forma normal própria (ex.: twisted_z2_f2)."""

    family: ClassVar[str] = "builtin"
    name: str = ""


def describe(desc: GroupDesc) -> str:
    """Nome curto e legível do descritor, usado em logs e relatórios."""
    if isinstance(desc, Finite):
        return str(desc.group)
    if isinstance(desc, FreeAbelian):
        return f"Z^{desc.rank}"
    if isinstance(desc, Free):
        return f"F{desc.rank}"
    if isinstance(desc, Declared):
        return desc.name or "declarado"
    if isinstance(desc, DirectProduct):
        return " × ".join(describe(f) for f in desc.factors)
    if isinstance(desc, SplitExtensionDesc):
        return f"{describe(desc.kernel)} ⋊ {describe(desc.quotient)}"
    if isinstance(desc, (WreathRestricted, WreathComplete)):
        sub = "_r" if not desc.complete else ""
        return f"{describe(desc.base)} ≀{sub}[{desc.omega.kind}] {describe(desc.top)}"
    if isinstance(desc, BS):
        return f"BS({desc.m},{desc.n})"
    if isinstance(desc, HNNFiniteBase):
        return f"HNN({desc.base})"
    if isinstance(desc, Amalgam):
        return f"{desc.A} *_C {desc.B}"
    if isinstance(desc, FreeProduct):
        return " * ".join(describe(f) for f in desc.factors)
    if isinstance(desc, FiniteExt):
        return f"{describe(desc.kernel)} . {desc.quotient}"
    if isinstance(desc, Builtin):
        return desc.name
    return type(desc).__name__
