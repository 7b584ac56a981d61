"""
Vereditos e certificados

Um Verdict traz o resultado (icc, not_icc, unknown), as condições avaliadas
com a etiqueta da cláusula que disparou, uma testemunha quando o grupo não é
icc e, opcionalmente, o registro da verificação cruzada do oráculo.
"""

from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple


class Outcome(str, Enum):
    ICC = "icc"
    NOT_ICC = "not_icc"
    UNKNOWN = "unknown"


class Clause(str, Enum):
    """Enumeração publicada das etiquetas de cláusula usadas nos relatórios."""

    FINITE_NOT_INFINITE = "finite.not_infinite"
    ABELIAN_CENTER = "abelian.nontrivial_center"
    FREE_RANK = "free.rank_at_least_2"
    DECLARED = "declared"
    SIMPLE_INFINITE = "simple.infinite"
    DIRECT_PRODUCT_FACTORS = "direct_product.factors_icc"
    FC_GK_TRIVIAL = "fc_gk.trivial"
    LATTICE_FINITE_IMAGE = "lattice.finite_image"
    THETA_FC_INJECTIVE = "theta.fc_injective"
    THETA_OUT_INJECTIVE = "theta.out_injective"
    H1_CLASS_NONZERO = "h1.class_nonzero"
    CENTERLESS = "centerless"
    WREATH_BASE_ICC = "wreath.base_icc"
    WREATH_ORBITS_INFINITE = "wreath.orbits_infinite"
    WREATH_FC_FIXES_OMEGA = "wreath.fc_fixes_omega"
    WREATH_BASE_CENTERLESS = "wreath.base_centerless"
    FINITE_EXT_KERNEL_ICC = "finite_ext.kernel_icc"
    FINITE_EXT_COUPLING_INJECTIVE = "finite_ext.coupling_injective"
    FINITE_INDEX_TORSION_NOT_INNER = "finite_index.torsion_not_inner"
    FINITE_INDEX_TORSION_FREE = "finite_index.torsion_free_outside"
    BS_M_NE_PM_N = "bs.m_ne_pm_n"
    HNN_DEGENERATE = "hnn.degenerate"
    HNN_CBAR_TRIVIAL = "hnn.cbar_trivial"
    AMALGAM_DEGENERATE = "amalgam.degenerate"
    AMALGAM_CBAR_TRIVIAL = "amalgam.cbar_trivial"
    FREE_PRODUCT_NOT_DIHEDRAL = "free_product.not_dihedral"


# Texto das cláusulas para o modo explicativo - EDITE AQUI para ajustar a redação
CLAUSE_TEXT: Dict[Clause, str] = {
    Clause.FINITE_NOT_INFINITE: "o grupo é infinito (um grupo icc é infinito)",
    Clause.ABELIAN_CENTER: "o grupo não é abeliano não trivial (o centro seria todo o grupo)",
    Clause.FREE_RANK: "o grupo livre tem posto pelo menos 2",
    Clause.DECLARED: "propriedade declarada no descritor",
    Clause.SIMPLE_INFINITE: "um grupo simples é icc se e só se é infinito",
    Clause.DIRECT_PRODUCT_FACTORS: "todo fator não trivial é icc e há pelo menos um fator não trivial",
    Clause.FC_GK_TRIVIAL: "FC_G(K) = {1}: nenhum elemento não trivial de K tem classe finita em G",
    Clause.LATTICE_FINITE_IMAGE: "K = Z^n não contém subreticulado normal com imagem finita em GL(n,Z)",
    Clause.THETA_FC_INJECTIVE: "a restrição θ: FC(Q) -> Aut(K) é injetiva",
    Clause.THETA_OUT_INJECTIVE: "o acoplamento Θ: Q -> Out(K) é injetivo",
    Clause.H1_CLASS_NONZERO: "Ξ: ker Φ -> H¹(C_Q(FC(Q)), Z(K)) é injetiva ([q] ≠ 0 para q ≠ 1)",
    Clause.CENTERLESS: "o grupo tem centro trivial",
    Clause.WREATH_BASE_ICC: "a base D é icc",
    Clause.WREATH_ORBITS_INFINITE: "todas as Q-órbitas em Ω são infinitas",
    Clause.WREATH_FC_FIXES_OMEGA: "1 é o único elemento de FC(Q) que fixa Ω ponto a ponto",
    Clause.WREATH_BASE_CENTERLESS: "a base D tem centro trivial",
    Clause.FINITE_EXT_KERNEL_ICC: "o núcleo K é icc",
    Clause.FINITE_EXT_COUPLING_INJECTIVE: "Θ: Q -> Out(K) é injetivo",
    Clause.FINITE_INDEX_TORSION_NOT_INNER: "nenhum g de ordem finita fora de K age por automorfismo interno",
    Clause.FINITE_INDEX_TORSION_FREE: "G∖K não tem torção e K é icc",
    Clause.BS_M_NE_PM_N: "BS(m,n) é icc se e só se m ≠ ±n",
    Clause.HNN_DEGENERATE: "a extensão HNN não é degenerada (A = C = C')",
    Clause.HNN_CBAR_TRIVIAL: "FC_G(C̃) = {1}: o maior subgrupo de C ∩ C' normal em G é trivial",
    Clause.AMALGAM_DEGENERATE: "o amálgama não é degenerado ([A:C] = [B:C] = 2)",
    Clause.AMALGAM_CBAR_TRIVIAL: "FC_G(C̃) = {1}: o maior subgrupo de C normal em G é trivial",
    Clause.FREE_PRODUCT_NOT_DIHEDRAL: "um produto livre de grupos não triviais é icc ou é Z/2 * Z/2",
}


class WitnessKind(str, Enum):
    ORACLE = "oracle"
    CENTRAL = "central"
    FINITE_NORMAL_SUBGROUP = "finite_normal_subgroup"
    FINITE_IMAGE_LATTICE = "finite_image_lattice"
    FINITE_GROUP = "finite_group"
    DECLARED = "declared"


@dataclass(frozen=True)
class Condition:
    """Cláusula avaliada; holds None quando não foi possível decidir."""

    clause: Clause
    holds: Optional[bool]
    detail: str = ""


@dataclass(frozen=True)
class Witness:
    """Elemento (palavra) com classe de conjugação finita e o tipo de certificado."""

    element: str
    kind: WitnessKind
    detail: str = ""
    class_size: Optional[int] = None


@dataclass(frozen=True)
class ProbeRecord:
    element: str
    counts: Tuple[int, ...]
    closed: bool


@dataclass(frozen=True)
class OracleRecord:
    """
    Registro da verificação cruzada.

    status: consistent | inconsistent | skipped. Para vereditos icc os probes
    são evidência, nunca prova.
    """

    status: str
    budget: int
    probes: Tuple[ProbeRecord, ...] = ()
    message: str = ""

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    conditions: Tuple[Condition, ...] = ()
    witness: Optional[Witness] = None
    reason: str = ""
    family: str = ""
    oracle: Optional[OracleRecord] = None

    @property
    def is_icc(self) -> bool:
        return self.outcome == Outcome.ICC

    @property
    def is_not_icc(self) -> bool:
        return self.outcome == Outcome.NOT_ICC

    @property
    def is_unknown(self) -> bool:
        return self.outcome == Outcome.UNKNOWN

    def fired(self) -> Tuple[Clause, ...]:
        return tuple(c.clause for c in self.conditions)

    def condition(self, clause: Clause) -> Optional[Condition]:
        return next((c for c in self.conditions if c.clause == clause), None)

    def with_family(self, family: str) -> "Verdict":
        return replace(self, family=family) if not self.family else self

    def with_oracle(self, record: OracleRecord) -> "Verdict":
        return replace(self, oracle=record)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.outcome.value,
            "family": self.family,
            "reason": self.reason,
            "conditions": [
                {"clause": c.clause.value, "holds": c.holds, "detail": c.detail} for c in self.conditions
            ],
            "witness": None if self.witness is None else {
                "element": self.witness.element,
                "kind": self.witness.kind.value,
                "detail": self.witness.detail,
                "class_size": self.witness.class_size,
            },
            "oracle": None if self.oracle is None else asdict(self.oracle),
        }


def icc(conditions, reason: str = "") -> Verdict:
    return Verdict(Outcome.ICC, tuple(conditions), None, reason)


def not_icc(conditions, witness: Witness, reason: str = "") -> Verdict:
    return Verdict(Outcome.NOT_ICC, tuple(conditions), witness, reason)


def unknown(conditions, reason: str) -> Verdict:
    return Verdict(Outcome.UNKNOWN, tuple(conditions), None, reason)


def combine_all(conditions) -> Optional[bool]:
    """Conjunção de três valores: False domina, depois None."""
    values = [c.holds for c in conditions]
    if any(v is False for v in values):
        return False
    if any(v is None for v in values):
        return None
    return True
