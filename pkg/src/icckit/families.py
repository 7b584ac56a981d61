"""
Family Engine - Decisores por família do catálogo

Este módulo roteia cada descritor para o seu decisor:
- Grupos finitos, abelianos livres, livres, declarados, simples e produtos diretos
- Produtos wreath restritos e completos sobre um Q-conjunto Ω
- Extensões finitas (acoplamento em Out(K) e forma por torção)
- Baumslag–Solitar, extensões HNN e amálgamas com fatores finitos
- Produtos livres e o grupo embutido twisted_z2_f2

Instruções para personalização:
1. Novas famílias entram em dispatch_decide()
2. Grupos embutidos ficam em BUILTINS
3. Os decisores de extensões cindidas vêm do ExtensionEngine (extensions.py)
"""

import math
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

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
    describe,
)
from .errors import IccKitError, InvalidHomomorphismError, UnsupportedDescriptorError, WordSyntaxError
from .extensions import (
    CheckResult,
    ExtensionEngine,
    extend_matrix_action,
    generator_orders,
    is_abelian_desc,
    power_word,
)
from .groupkit import (
    FiniteGroup,
    cbar_fixpoint,
    compose,
    coupling_injective_finite,
    element_word,
    extend_action,
    extend_partial_isomorphism,
    fc_of_group,
    fin_center,
    fin_conjugacy_classes,
    fin_is_simple,
    format_word,
    generator_count,
    inner_automorphism,
    inner_conjugator,
    is_subgroup,
    parse_word,
    require_subgroup,
)
from .settings import load_settings
from .verdict import Clause, Condition, Verdict, Witness, WitnessKind, icc, not_icc, unknown
from .zlinalg import IntMatrix


# ----------------------------------------------------------------------
# Alfabetos compartilhados com o oráculo
# ----------------------------------------------------------------------
def group_alphabet(desc: GroupDesc) -> Tuple[str, ...]:
    """Nomes dos geradores de um descritor simples (x0, x1, ... para Z^n e F_n)."""
    if isinstance(desc, Finite):
        return desc.group.generator_names
    if isinstance(desc, (FreeAbelian, Free)):
        return tuple(f"x{i}" for i in range(desc.rank))
    if isinstance(desc, Declared):
        return desc.generators
    return ()


def top_alphabet(top: GroupDesc) -> Tuple[str, ...]:
    if isinstance(top, Finite):
        return top.group.generator_names
    if isinstance(top, (FreeAbelian, Free)):
        return ("t",) if top.rank == 1 else tuple(f"t{i}" for i in range(top.rank))
    return group_alphabet(top)


def factor_alphabet(index: int, group: FiniteGroup) -> Tuple[str, ...]:
    """Letras do fator index num produto livre: a0, a1, ... / b0, ... / c0, ..."""
    prefix = chr(ord("a") + index)
    return tuple(f"{prefix}{j}" for j in range(len(group.generators)))


def wreath_letter(point: int, generator: int, base_generators: int) -> str:
    return f"d{point}" if base_generators == 1 else f"d{point}_{generator}"


def is_trivial_desc(desc: GroupDesc) -> bool:
    if isinstance(desc, Finite):
        return desc.group.order == 1
    if isinstance(desc, (FreeAbelian, Free)):
        return desc.rank == 0
    if isinstance(desc, DirectProduct):
        return all(is_trivial_desc(f) for f in desc.factors)
    return False


def is_infinite_desc(desc: GroupDesc) -> Optional[bool]:
    if isinstance(desc, Finite):
        return False
    if isinstance(desc, (FreeAbelian, Free)):
        return desc.rank >= 1
    if isinstance(desc, Declared):
        return desc.infinite if desc.infinite is not None else (True if desc.icc else None)
    if isinstance(desc, DirectProduct):
        values = [is_infinite_desc(f) for f in desc.factors]
        if any(v is True for v in values):
            return True
        return False if all(v is False for v in values) else None
    if isinstance(desc, (BS, FreeProduct, HNNFiniteBase, Amalgam, Builtin)):
        return True
    if isinstance(desc, SplitExtensionDesc):
        values = [is_infinite_desc(desc.kernel), is_infinite_desc(desc.quotient)]
        if any(v is True for v in values):
            return True
        return False if all(v is False for v in values) else None
    if isinstance(desc, FiniteExt):
        return is_infinite_desc(desc.kernel)
    return None


def finite_order(desc: GroupDesc) -> Optional[int]:
    """Ordem de um descritor sabidamente finito, quando calculável."""
    if isinstance(desc, Finite):
        return desc.group.order
    if isinstance(desc, DirectProduct):
        orders = [finite_order(f) for f in desc.factors]
        return math.prod(orders) if all(o is not None for o in orders) else None
    if isinstance(desc, SplitExtensionDesc):
        parts = [finite_order(desc.kernel), finite_order(desc.quotient)]
        return parts[0] * parts[1] if None not in parts else None
    if isinstance(desc, FiniteExt) and isinstance(desc.kernel, Finite):
        return desc.kernel.group.order * desc.quotient.order
    return None


def or3(a: Optional[bool], b: Optional[bool]) -> Optional[bool]:
    """Disjunção de três valores: True domina, depois None."""
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def wreath_truth_table(base_icc: Optional[bool], orbits_infinite: Optional[bool], fc_fixes_omega: Optional[bool],
                       base_centerless: Optional[bool] = True) -> Optional[bool]:
    """(base icc ou órbitas infinitas) e FC(Q) age fielmente; no caso completo, também base sem centro."""
    values = [or3(base_icc, orbits_infinite), fc_fixes_omega, base_centerless]
    if any(v is False for v in values):
        return False
    if any(v is None for v in values):
        return None
    return True


# ----------------------------------------------------------------------
# Ω
# ----------------------------------------------------------------------
def extend_permutation_action(Q: FiniteGroup, images: Sequence[Sequence[int]]) -> Dict[int, Tuple[int, ...]]:
    """
    Estende a ação dos geradores de Q finito sobre Ω = {0..n-1} a todo Q.

    Raises:
        InvalidHomomorphismError: as permutações não respeitam as relações de Q
    """
    perms = [tuple(p) for p in images]
    size = len(perms[0]) if perms else 0
    action: Dict[int, Tuple[int, ...]] = {Q.identity: tuple(range(size))}
    queue = deque([Q.identity])
    while queue:
        x = queue.popleft()
        for g, p in zip(Q.generators, perms):
            y = Q.mul(x, g)
            value = compose(action[x], p)
            if y not in action:
                action[y] = value
                queue.append(y)
            elif action[y] != value:
                raise InvalidHomomorphismError(f"A ação em Ω não respeita as relações de {Q}")
    return action


def resolve_omega(top: GroupDesc, omega: OmegaDesc) -> OmegaDesc:
    """
    Normaliza Ω: FiniteSet validado, ou Regular quando Q é infinito.

    Regular sobre Q finito vira FiniteSet (multiplicação à esquerda); Cosets
    vira FiniteSet (classes laterais à esquerda de H em Q finito, ou Z/n para Q = Z).
    """
    if isinstance(omega, RegularOmega):
        if isinstance(top, Finite):
            Q = top.group
            images = tuple(tuple(Q.mul(g, x) for x in Q.elements) for g in Q.generators)
            return FiniteSetOmega(Q.order, images)
        return omega

    if isinstance(omega, CosetsOmega):
        if isinstance(top, Finite):
            Q = top.group
            if omega.subgroup is None:
                raise IccKitError("Ω = Q/H exige a lista de elementos de H")
            H = require_subgroup(Q, omega.subgroup, "H")
            cosets: List[frozenset] = []
            for x in Q.elements:
                coset = frozenset(Q.mul(x, h) for h in H)
                if coset not in cosets:
                    cosets.append(coset)
            position = {c: i for i, c in enumerate(cosets)}
            images = tuple(
                tuple(position[frozenset(Q.mul(g, y) for y in c)] for c in cosets) for g in Q.generators
            )
            return FiniteSetOmega(len(cosets), images)
        if isinstance(top, (FreeAbelian, Free)) and top.rank == 1:
            n = omega.index
            if n is None or n < 1:
                raise IccKitError("Ω = Z/nZ exige índice n >= 1")
            return FiniteSetOmega(n, (tuple((j + 1) % n for j in range(n)),))
        raise UnsupportedDescriptorError(f"Classes laterais não suportadas sobre {describe(top)}")

    if isinstance(omega, FiniteSetOmega):
        if len(omega.images) != generator_count(top):
            raise InvalidHomomorphismError(
                f"Ω com {len(omega.images)} permutações para {generator_count(top)} geradores de {describe(top)}"
            )
        for p in omega.images:
            if sorted(p) != list(range(omega.size)):
                raise InvalidHomomorphismError(f"{list(p)} não é permutação de {omega.size} pontos")
        if isinstance(top, Finite):
            extend_permutation_action(top.group, omega.images)
        elif isinstance(top, FreeAbelian):
            for i, p in enumerate(omega.images):
                for q in omega.images[i + 1:]:
                    if compose(p, q) != compose(q, p):
                        raise InvalidHomomorphismError("As permutações de Ω não comutam")
        return omega

    raise UnsupportedDescriptorError(f"Ω desconhecido: {type(omega).__name__}")


def omega_orbits(omega: FiniteSetOmega) -> List[List[int]]:
    seen, orbits = set(), []
    for start in range(omega.size):
        if start in seen:
            continue
        orbit, queue = [start], deque([start])
        seen.add(start)
        while queue:
            x = queue.popleft()
            for p in omega.images:
                y = p[x]
                if y not in seen:
                    seen.add(y)
                    orbit.append(y)
                    queue.append(y)
        orbits.append(sorted(orbit))
    return orbits


def _permutation_order(p: Sequence[int]) -> int:
    identity = tuple(range(len(p)))
    k, x = 1, tuple(p)
    while x != identity:
        x = compose(x, p)
        k += 1
    return k


# ----------------------------------------------------------------------
# Grupos embutidos
# ----------------------------------------------------------------------
def twisted_z2_f2() -> SplitExtensionDesc:
    """
    (Z² × F₂) ⋊ (Z × F₂) com θ(q0) = conjugação por k0, θ(q1) = M_φ em Z² e
    k0 -> k0·a2, θ(q2) = M_ψ em Z² e k0 -> k0·a1.
    """
    m_phi = IntMatrix.from_rows([[1, 1], [0, 1]])
    m_psi = IntMatrix.from_rows([[1, 0], [1, 1]])
    return SplitExtensionDesc(
        kernel=Declared(name="Z2xF2", icc=False, centerless=False, infinite=True,
                        generators=("a1", "a2", "k0", "k1")),
        quotient=DirectProduct((FreeAbelian(1), Free(2))),
        action=(),
        kernel_names=("a1", "a2", "k0", "k1"),
        quotient_names=("q0", "q1", "q2"),
        center=CenterData(
            rank=2,
            action=(IntMatrix.identity(2), m_phi, m_psi),
            twists=(IntMatrix.zeros(2, 2), IntMatrix.from_rows([[0, 0], [1, 0]]),
                    IntMatrix.from_rows([[1, 0], [0, 0]])),
            free_rank=2,
            fc_is_center=True,
        ),
        kernel_of_phi=(KernelPhiEntry("q0", (0, 0), (1, 0)),),
        centralizer_generators=(0, 1, 2),
    )


# Grupos embutidos - EDITE AQUI para registrar novos
BUILTINS = {
    "twisted_z2_f2": twisted_z2_f2,
}


class FamilyEngine:
    """
    Motor de decisão por família:
    - Decisores estruturais por família do catálogo
    - Despacho recursivo (bases de wreath, fatores de produtos)
    - Verificação de consistência entre formulações equivalentes
    """

    def __init__(self, config: Optional[Dict] = None):
        """
        Inicializa o FamilyEngine com configurações opcionais.

        Args:
            config (Dict, optional): Configurações personalizadas
        """
        self.config = config or {}

        # Configurações padrão (settings.py + .env) - EDITE AQUI conforme necessário
        self.default_config = load_settings()

        # Mescla configurações
        self.settings = {**self.default_config, **self.config}

        self.extensions = ExtensionEngine(self.config)

        logger.info("FamilyEngine inicializado com sucesso")

    # ------------------------------------------------------------------
    # Famílias simples
    # ------------------------------------------------------------------
    def decide_finite(self, desc: Finite) -> Verdict:
        """Grupo finito: nunca icc. O certificado usa |x^G| = [G : C_G(x)]."""
        G = desc.group
        names = G.generator_names
        condition = Condition(Clause.FINITE_NOT_INFINITE, False, f"|G| = {G.order}")
        if G.order == 1:
            return not_icc([condition], Witness("1", WitnessKind.FINITE_GROUP, "grupo trivial", 1), "grupo trivial")
        center = sorted(fin_center(G) - {G.identity})
        if center:
            x, size = center[0], 1
        else:
            x = G.generators[0]
            size = next(len(c) for c in fin_conjugacy_classes(G) if x in c)
        word = format_word(element_word(G, x, names))
        witness = Witness(word, WitnessKind.FINITE_GROUP, f"classe de tamanho {size} = [G : C_G(x)] em |G| = {G.order}", size)
        return not_icc([condition], witness, "um grupo icc é infinito")

    def decide_icc_simple(self, g: GroupDesc) -> Verdict:
        """
        Grupo simples: icc se e só se é infinito.

        Raises:
            IccKitError: declaração que contradiz a tábua
        """
        try:
            if isinstance(g, Finite):
                if g.simple is not None and g.simple != fin_is_simple(g.group):
                    raise IccKitError(f"{g.group} declarado simple={g.simple}, mas a tábua diz o contrário")
                verdict = self.decide_finite(g)
                condition = Condition(Clause.SIMPLE_INFINITE, False, f"{g.group} é finito")
                return not_icc([condition, *verdict.conditions], verdict.witness, "simples e finito")
            if not isinstance(g, Declared) or not g.simple:
                raise UnsupportedDescriptorError("decide_icc_simple exige grupo declarado simples")
            if g.infinite is None:
                condition = Condition(Clause.SIMPLE_INFINITE, None, "infinitude não declarada")
                return unknown([condition], "grupo simples com infinitude desconhecida")
            if g.infinite:
                return icc([Condition(Clause.SIMPLE_INFINITE, True, f"{g.name or 'G'} simples e infinito")],
                           "um grupo simples infinito é icc")
            element = g.generators[0] if g.generators else "g"
            witness = Witness(element, WitnessKind.FINITE_GROUP, "grupo finito declarado")
            return not_icc([Condition(Clause.SIMPLE_INFINITE, False, "declarado finito")], witness, "simples e finito")

        except Exception as e:
            logger.error(f"Erro ao decidir grupo simples: {str(e)}")
            raise

    def decide_declared(self, g: Declared) -> Verdict:
        if g.simple:
            return self.decide_icc_simple(g)
        witness = Witness(g.generators[0] if g.generators else "z", WitnessKind.DECLARED,
                          f"FC({g.name or 'G'}) ≠ 1 declarado")
        if g.icc is True:
            if g.infinite is False:
                raise IccKitError(f"{g.name or 'grupo'} declarado icc e finito")
            return icc([Condition(Clause.DECLARED, True, "icc declarado")], "declaração")
        if g.icc is False:
            return not_icc([Condition(Clause.DECLARED, False, "não icc declarado")], witness, "declaração")
        if g.infinite is False:
            return not_icc([Condition(Clause.FINITE_NOT_INFINITE, False, "declarado finito")], witness, "grupo finito")
        if g.centerless is False:
            return not_icc([Condition(Clause.ABELIAN_CENTER, False, "centro não trivial declarado")], witness,
                           "centro não trivial")
        if g.abelian:
            return not_icc([Condition(Clause.ABELIAN_CENTER, False, "abeliano declarado")], witness,
                           "abeliano não trivial")
        return unknown([Condition(Clause.DECLARED, None, "icc não declarado")], "declaração insuficiente")

    def decide_abelian(self, g: GroupDesc) -> Verdict:
        names = group_alphabet(g)
        if g.rank == 0:
            return not_icc([Condition(Clause.FINITE_NOT_INFINITE, False, "grupo trivial")],
                           Witness("1", WitnessKind.FINITE_GROUP, "grupo trivial", 1), "grupo trivial")
        if isinstance(g, Free) and g.rank >= 2:
            return icc([Condition(Clause.FREE_RANK, True, f"F{g.rank} = Z * ... * Z")],
                       "produto livre de fatores não triviais fora da exceção diédrica")
        witness = Witness(names[0], WitnessKind.CENTRAL, "grupo abeliano: todo elemento é central", 1)
        return not_icc([Condition(Clause.ABELIAN_CENTER, False, f"{describe(g)} é abeliano não trivial")],
                       witness, "centro não trivial")

    def decide_icc_direct_product(self, factors: Sequence[GroupDesc]) -> Verdict:
        """Produto direto: icc se e só se todo fator não trivial é icc e algum fator não é trivial."""
        try:
            nontrivial = [(i, f) for i, f in enumerate(factors) if not is_trivial_desc(f)]
            if not nontrivial:
                return not_icc([Condition(Clause.DIRECT_PRODUCT_FACTORS, False, "todos os fatores são triviais")],
                               Witness("1", WitnessKind.FINITE_GROUP, "grupo trivial", 1), "grupo trivial")
            verdicts = [(i, self.dispatch_decide(f)) for i, f in nontrivial]
            for i, v in verdicts:
                if v.is_not_icc:
                    w = v.witness
                    witness = Witness(w.element, w.kind, f"fator {i}: {w.detail}", w.class_size)
                    return not_icc([Condition(Clause.DIRECT_PRODUCT_FACTORS, False, f"fator {i} não é icc")],
                                   witness, "fator não icc")
            if any(v.is_unknown for _, v in verdicts):
                pending = ", ".join(str(i) for i, v in verdicts if v.is_unknown)
                return unknown([Condition(Clause.DIRECT_PRODUCT_FACTORS, None, f"fatores indecididos: {pending}")],
                               "fator indecidido")
            return icc([Condition(Clause.DIRECT_PRODUCT_FACTORS, True, "todos os fatores não triviais são icc")],
                       "produto de fatores icc")

        except Exception as e:
            logger.error(f"Erro ao decidir produto direto: {str(e)}")
            raise

    # ------------------------------------------------------------------
    # Wreath
    # ------------------------------------------------------------------
    def base_icc(self, base: GroupDesc) -> Tuple[Optional[bool], Verdict]:
        verdict = self.dispatch_decide(base)
        return {"icc": True, "not_icc": False}.get(verdict.outcome.value), verdict

    def base_centerless(self, base: GroupDesc) -> Tuple[Optional[bool], Optional[str]]:
        """(D sem centro?, palavra de um elemento central não trivial)"""
        if isinstance(base, Finite):
            G = base.group
            center = sorted(fin_center(G) - {G.identity})
            if not center:
                return True, None
            return False, format_word(element_word(G, center[0], G.generator_names))
        if isinstance(base, (FreeAbelian, Free)):
            if base.rank == 0 or (isinstance(base, Free) and base.rank >= 2):
                return True, None
            return False, group_alphabet(base)[0]
        if isinstance(base, Declared):
            if base.centerless is not None:
                return base.centerless, None if base.centerless else "z"
            if base.icc:
                return True, None
            if base.abelian:
                return False, base.generators[0] if base.generators else "z"
            return None, None
        if isinstance(base, DirectProduct):
            parts = [self.base_centerless(f) for f in base.factors]
            for holds, word in parts:
                if holds is False:
                    return False, word
            return (True, None) if all(h is True for h, _ in parts) else (None, None)
        verdict = self.dispatch_decide(base)
        if verdict.is_icc:
            return True, None
        if verdict.is_not_icc and verdict.witness.kind == WitnessKind.CENTRAL:
            return False, verdict.witness.element
        return None, None

    def orbits_infinite(self, top: GroupDesc, omega: OmegaDesc) -> Optional[bool]:
        if isinstance(omega, RegularOmega):
            return is_infinite_desc(top)
        return False

    def fc_fixes_omega(self, top: GroupDesc, omega: OmegaDesc) -> CheckResult:
        """Nenhum q ≠ 1 em FC(Q) fixa Ω ponto a ponto."""
        if isinstance(omega, RegularOmega):
            return CheckResult(True, detail="a ação regular é livre")
        names = top_alphabet(top)
        kind = WitnessKind.CENTRAL if is_abelian_desc(top) else WitnessKind.ORACLE
        if isinstance(top, Finite):
            Q = top.group
            action = extend_permutation_action(Q, omega.images)
            identity = tuple(range(omega.size))
            for q in Q.elements:
                if q != Q.identity and action[q] == identity:
                    word = format_word(element_word(Q, q, names))
                    return CheckResult(False, Witness(word, kind, "fixa Ω ponto a ponto e comuta com a base"),
                                       f"{word} ∈ FC(Q) fixa Ω")
            return CheckResult(True, detail="busca exaustiva em Q")
        try:
            fc = fc_of_group(top)
        except UnsupportedDescriptorError as e:
            return CheckResult(None, detail=str(e))
        if fc.is_trivial:
            return CheckResult(True, detail="FC(Q) trivial")
        orders = generator_orders(top)
        for i in fc.generator_indices:
            p = omega.images[i]
            if orders[i] is None:
                word = power_word(names[i], _permutation_order(p))
                return CheckResult(False, Witness(word, kind, "fixa Ω ponto a ponto e comuta com a base"),
                                   f"FC(Q) infinito age em Ω finito: {word} fixa Ω")
            if p == tuple(range(omega.size)):
                return CheckResult(False, Witness(names[i], kind, "fixa Ω ponto a ponto"),
                                   f"{names[i]} ∈ FC(Q) fixa Ω")
        return CheckResult(None, detail="FC(Q) de ordem finita sem busca exaustiva")

    def _orbit_witness(self, base: GroupDesc, base_verdict: Verdict, omega: FiniteSetOmega) -> Witness:
        orbit = omega_orbits(omega)[0]
        value = base_verdict.witness.element
        alphabet = group_alphabet(base)
        central = base_verdict.witness.kind == WitnessKind.CENTRAL or is_abelian_desc(base)
        kind = WitnessKind.CENTRAL if central else WitnessKind.ORACLE
        try:
            word = parse_word(value, alphabet)
        except WordSyntaxError:
            return Witness(f"const({value}) em {orbit}", kind, "função constante numa órbita finita")
        letters = []
        for point in orbit:
            for g, k in word.syllables():
                letters.append(power_word(wreath_letter(point, g, len(alphabet)), k))
        return Witness("*".join(letters) or "1", kind, f"{value} em cada ponto da órbita finita {orbit}")

    def _decide_wreath(self, base: GroupDesc, top: GroupDesc, omega: OmegaDesc, complete: bool) -> Verdict:
        label = "completo" if complete else "restrito"
        logger.info(f"Decidindo wreath {label}: {describe(base)} ≀ {describe(top)}")
        if not isinstance(top, (Finite, FreeAbelian, Free, DirectProduct, Declared)):
            raise UnsupportedDescriptorError(f"Topo {describe(top)} fora do catálogo")
        omega = resolve_omega(top, omega)
        if is_trivial_desc(base) or (isinstance(omega, FiniteSetOmega) and omega.size == 0):
            return self.dispatch_decide(top)

        ia, base_verdict = self.base_icc(base)
        ib = self.orbits_infinite(top, omega)
        ii = self.fc_fixes_omega(top, omega)
        conditions = [
            Condition(Clause.WREATH_BASE_ICC, ia, base_verdict.reason or base_verdict.outcome.value),
            Condition(Clause.WREATH_ORBITS_INFINITE, ib,
                      "Ω regular sobre Q infinito" if ib else "Ω tem órbita finita" if ib is False else "Q de tamanho desconhecido"),
            Condition(Clause.WREATH_FC_FIXES_OMEGA, ii.holds, ii.detail),
        ]
        iii, central_word = (True, None)
        if complete:
            iii, central_word = self.base_centerless(base)
            conditions.append(Condition(Clause.WREATH_BASE_CENTERLESS, iii,
                                        "D sem centro" if iii else f"{central_word} ∈ Z(D)" if iii is False
                                        else "centro de D desconhecido"))

        outcome = wreath_truth_table(ia, ib, ii.holds, iii)
        if outcome is True:
            return icc(conditions, "(base icc ou órbitas infinitas) e FC(Q) fiel em Ω" + (" e base sem centro" if complete else ""))
        if outcome is None:
            pending = "; ".join(c.detail for c in conditions if c.holds is None)
            logger.warning(f"Wreath {label} indecidido: {pending}")
            return unknown(conditions, pending)

        if ii.holds is False:
            witness = ii.witness
        elif ia is False and ib is False:
            witness = self._orbit_witness(base, base_verdict, omega)
        else:
            witness = Witness(f"const({central_word})", WitnessKind.CENTRAL, "função constante com valor central em D", 1)
        return not_icc(conditions, witness, "condição do wreath falha")

    def decide_icc_wreath_restricted(self, d: GroupDesc, q: GroupDesc, omega: Optional[OmegaDesc] = None) -> Verdict:
        """
        D ≀_Ω,r Q é icc se e só se (D icc ou todas as órbitas infinitas) e
        só 1 ∈ FC(Q) fixa Ω ponto a ponto.

        Exemplo de uso:
            engine.decide_icc_wreath_restricted(Finite(cyclic_group(2)), FreeAbelian(1))  # lamplighter: icc
        """
        try:
            return self._decide_wreath(d, q, omega or RegularOmega(), complete=False)
        except Exception as e:
            logger.error(f"Erro ao decidir wreath restrito: {str(e)}")
            raise

    def decide_icc_wreath_complete(self, d: GroupDesc, q: GroupDesc, omega: Optional[OmegaDesc] = None) -> Verdict:
        """Como o restrito, exigindo também D sem centro."""
        try:
            return self._decide_wreath(d, q, omega or RegularOmega(), complete=True)
        except Exception as e:
            logger.error(f"Erro ao decidir wreath completo: {str(e)}")
            raise

    # ------------------------------------------------------------------
    # Extensões finitas
    # ------------------------------------------------------------------
    def validate_finite_ext(self, ext: FiniteExt) -> Dict[int, object]:
        """Ação estendida a todo Q (núcleos finito/reticulado) e checagem das flags de interno."""
        Q = ext.quotient
        kernel = ext.kernel
        action: Dict[int, object] = {}
        if isinstance(kernel, FreeAbelian):
            if len(ext.action) != len(Q.generators):
                raise InvalidHomomorphismError(f"{len(ext.action)} ações para {len(Q.generators)} geradores de {Q}")
            for i, M in enumerate(ext.action):
                if not isinstance(M, IntMatrix) or not M.is_unimodular():
                    raise IccKitError(f"non-unimodular: ação {i} não está em GL({kernel.rank},Z)")
            action = extend_matrix_action(Q, list(ext.action)) if Q.generators else {Q.identity: IntMatrix.identity(kernel.rank)}
        elif isinstance(kernel, Finite):
            if Q.generators:
                action = extend_action(Q, kernel.group, list(ext.action))
            else:
                action = {Q.identity: tuple(kernel.group.elements)}

        if ext.inner is not None:
            if len(ext.inner) != Q.order:
                raise IccKitError(f"inner tem {len(ext.inner)} entradas para |Q| = {Q.order}")
            if not ext.inner[Q.identity]:
                raise IccKitError("θ(1) é a identidade, logo interno")
            flagged = [q for q in Q.elements if ext.inner[q]]
            if not is_subgroup(Q, flagged):
                raise IccKitError("Os q com θ(q) interno devem formar um subgrupo de Q")
            if ext.torsion_free_outside and len(flagged) > 1:
                raise IccKitError("torsion_free_outside contradiz θ(q) interno para algum q ≠ 1")
        return action

    def _kernel_icc(self, ext: FiniteExt) -> Tuple[Optional[bool], Optional[Witness], str]:
        kernel = ext.kernel
        if isinstance(kernel, Finite):
            K = kernel.group
            if K.order == 1:
                return False, Witness("1", WitnessKind.FINITE_GROUP, "G ≅ Q finito", 1), "K trivial, G finito"
            word = format_word(element_word(K, K.generators[0], K.generator_names))
            return False, Witness(word, WitnessKind.FINITE_NORMAL_SUBGROUP, f"K = {K} finito e normal"), f"K = {K} é finito"
        if isinstance(kernel, FreeAbelian):
            if kernel.rank == 0:
                return False, Witness("1", WitnessKind.FINITE_GROUP, "G ≅ Q finito", 1), "K trivial, G finito"
            return False, Witness("k0", WitnessKind.FINITE_IMAGE_LATTICE, "imagem de Q finito em GL(n,Z) é finita"), \
                f"K = Z^{kernel.rank} abeliano"
        verdict = self.dispatch_decide(kernel)
        if verdict.is_icc:
            return True, None, "K icc"
        if verdict.is_not_icc:
            w = verdict.witness
            return False, Witness(w.element, w.kind if w.kind != WitnessKind.CENTRAL else WitnessKind.ORACLE,
                                  f"em K: {w.detail}", None), f"K não é icc ({verdict.reason})"
        return None, None, f"icc de K indecidido ({verdict.reason})"

    def _torsion_element(self, ext: FiniteExt, q: int) -> str:
        Q = ext.quotient
        return format_word(element_word(Q, q, Q.generator_names))

    def decide_icc_finite_extension(self, ext: FiniteExt) -> Verdict:
        """
        Q finito: G é icc se e só se K é icc e Θ: Q -> Out(K) é injetivo.

        Núcleo finito: força bruta. Núcleo Z^n: Inn trivial, interno ⇔ matriz identidade.
        Núcleo declarado: flags inner (e torsion_free_outside).
        """
        try:
            logger.info(f"Decidindo extensão finita {describe(ext)}")
            action = self.validate_finite_ext(ext)
            Q = ext.quotient

            kernel_icc, kernel_witness, kernel_detail = self._kernel_icc(ext)
            conditions = [Condition(Clause.FINITE_EXT_KERNEL_ICC, kernel_icc, kernel_detail)]

            coupling, coupling_witness, coupling_detail = None, None, ""
            if isinstance(ext.kernel, Finite):
                report = coupling_injective_finite(ext.kernel.group, Q, list(ext.action)) if Q.generators else None
                if report is None or report.injective:
                    coupling, coupling_detail = True, "nenhum q ≠ 1 age por automorfismo interno"
                else:
                    word = self._torsion_element(ext, report.witness)
                    coupling, coupling_detail = False, f"θ({word}) é interno"
            elif isinstance(ext.kernel, FreeAbelian):
                identity = IntMatrix.identity(ext.kernel.rank)
                hit = next((q for q in Q.elements if q != Q.identity and action[q] == identity), None)
                coupling = hit is None
                coupling_detail = "nenhum q ≠ 1 age trivialmente" if hit is None else \
                    f"θ({self._torsion_element(ext, hit)}) = I"
            elif ext.inner is not None:
                hit = next((q for q in Q.elements if q != Q.identity and ext.inner[q]), None)
                coupling = hit is None
                if hit is None:
                    coupling_detail = "nenhum q ≠ 1 declarado interno"
                else:
                    word = self._torsion_element(ext, hit)
                    coupling_detail = f"θ({word}) declarado interno"
                    coupling_witness = Witness(f"{word}*k^-1", WitnessKind.ORACLE, "centraliza K, classe finita")
            elif ext.torsion_free_outside and kernel_icc:
                coupling, coupling_detail = True, "G∖K sem torção e K icc: nenhum θ(q) interno"
            else:
                coupling_detail = "inner-ness de θ(q) não declarada"
            conditions.append(Condition(Clause.FINITE_EXT_COUPLING_INJECTIVE, coupling, coupling_detail))

            if kernel_icc is False:
                return not_icc(conditions, kernel_witness, "K não é icc")
            if coupling is False:
                return not_icc(conditions, coupling_witness, "Θ não é injetivo")
            if kernel_icc is None or coupling is None:
                pending = "; ".join(c.detail for c in conditions if c.holds is None)
                logger.warning(f"Extensão finita indecidida: {pending}")
                return unknown(conditions, pending)
            return icc(conditions, "K icc e Θ injetivo")

        except Exception as e:
            logger.error(f"Erro ao decidir extensão finita: {str(e)}")
            raise

    def decide_icc_finite_index_torsion(self, ext: FiniteExt) -> Verdict:
        """
        Forma por torção: G é icc se e só se K é icc e nenhum g ∈ G∖K de
        ordem finita age em K por automorfismo interno.

        Percorre os elementos g = k·q de G∖K (núcleo finito) ou os q com
        θ(q) = I (núcleo Z^n, onde (0, q) tem ordem finita).
        """
        try:
            logger.info(f"Decidindo extensão finita {describe(ext)} pela forma de torção")
            action = self.validate_finite_ext(ext)
            Q = ext.quotient

            kernel_icc, kernel_witness, kernel_detail = self._kernel_icc(ext)
            conditions = [Condition(Clause.FINITE_EXT_KERNEL_ICC, kernel_icc, kernel_detail)]

            torsion, torsion_witness, detail = None, None, ""
            if isinstance(ext.kernel, Finite):
                K = ext.kernel.group
                found = None
                for q in Q.elements:
                    if q == Q.identity:
                        continue
                    for k in K.elements:
                        # g = k·q age por inn(k) ∘ θ(q); todo g tem ordem finita
                        if inner_conjugator(K, compose(inner_automorphism(K, k), action[q])) is not None:
                            found = q
                            break
                    if found is not None:
                        break
                torsion = found is None
                detail = "nenhum g fora de K age internamente" if found is None else \
                    f"g = k·{self._torsion_element(ext, found)} de ordem finita age internamente"
            elif isinstance(ext.kernel, FreeAbelian):
                identity = IntMatrix.identity(ext.kernel.rank)
                found = next((q for q in Q.elements if q != Q.identity and action[q] == identity), None)
                torsion = found is None
                detail = "nenhum (v, q) de ordem finita com θ(q) = I" if found is None else \
                    f"(0, {self._torsion_element(ext, found)}) tem ordem finita e age trivialmente"
            elif ext.torsion_free_outside:
                torsion, detail = True, "G∖K sem torção declarado"
                conditions.append(Condition(Clause.FINITE_INDEX_TORSION_FREE, kernel_icc, "G∖K sem torção: icc ⇔ K icc"))
            elif ext.inner is not None:
                found = next((q for q in Q.elements if q != Q.identity and ext.inner[q]), None)
                if found is None:
                    torsion, detail = True, "nenhum q ≠ 1 com θ(q) interno"
                else:
                    # com K icc, u = q·k⁻¹ centraliza K e tem ordem finita; sem K icc o veredito já é negativo
                    word = self._torsion_element(ext, found)
                    torsion = False
                    detail = f"{word}·k⁻¹ centraliza K e, com K icc, tem ordem finita"
                    torsion_witness = Witness(f"{word}*k^-1", WitnessKind.ORACLE, "elemento de torção que centraliza K")
            else:
                detail = "torção fora de K não declarada"
            conditions.append(Condition(Clause.FINITE_INDEX_TORSION_NOT_INNER, torsion, detail))

            if kernel_icc is False:
                return not_icc(conditions, kernel_witness, "K não é icc")
            if torsion is False:
                return not_icc(conditions, torsion_witness, "torção fora de K age internamente")
            if kernel_icc is None or torsion is None:
                pending = "; ".join(c.detail for c in conditions if c.holds is None)
                logger.warning(f"Extensão finita (torção) indecidida: {pending}")
                return unknown(conditions, pending)
            return icc(conditions, "K icc e nenhuma torção fora de K age internamente")

        except Exception as e:
            logger.error(f"Erro ao decidir extensão finita por torção: {str(e)}")
            raise

    # ------------------------------------------------------------------
    # HNN, Baumslag–Solitar, amálgamas, produtos livres
    # ------------------------------------------------------------------
    def decide_icc_bs(self, m: int, n: int) -> Verdict:
        """
        BS(m,n) é icc se e só se m ≠ ±n.

        Exemplo de uso:
            engine.decide_icc_bs(2, 3).is_icc  # True
        """
        if m == 0 or n == 0:
            raise IccKitError("BS(m,n) exige m, n não nulos")
        if m not in (n, -n):
            return icc([Condition(Clause.BS_M_NE_PM_N, True, f"{m} ≠ ±{n}")], "m ≠ ±n")
        condition = Condition(Clause.BS_M_NE_PM_N, False, f"m = {'n' if m == n else '-n'}")
        if m == n:
            witness = Witness(power_word("a", m), WitnessKind.CENTRAL, "t·a^m·t⁻¹ = a^m", 1)
        else:
            witness = Witness(power_word("a", m), WitnessKind.ORACLE, "t·a^m·t⁻¹ = a^-m: classe {a^m, a^-m}", 2)
        return not_icc([condition], witness, "m = ±n")

    def decide_icc_hnn_finite_base(self, A: FiniteGroup, C, C_prime, phi: Sequence[Tuple[int, int]]) -> Verdict:
        """
        HNN com base finita. Degenerada (A = C = C'): não icc. Caso contrário,
        icc se e só se C̃ é trivial (C̃ finito e normal em G).
        """
        try:
            logger.info(f"Decidindo HNN sobre {A}")
            C = require_subgroup(A, C, "C")
            C_prime = require_subgroup(A, C_prime, "C'")
            mapping = extend_partial_isomorphism(A, A, phi)
            names = A.generator_names
            full = frozenset(A.elements)
            if C == full and C_prime == full:
                condition = Condition(Clause.HNN_DEGENERATE, False, "A = C = C'")
                if A.order == 1:
                    return not_icc([condition], Witness("t", WitnessKind.CENTRAL, "G ≅ Z", 1), "G ≅ Z")
                word = format_word(element_word(A, A.generators[0], names))
                return not_icc([condition], Witness(word, WitnessKind.FINITE_NORMAL_SUBGROUP, f"A = {A} normal em G"),
                               "A é subgrupo normal finito")

            cbar = cbar_fixpoint(A, C, C_prime, mapping)
            conditions = [
                Condition(Clause.HNN_DEGENERATE, True, "não degenerada"),
                Condition(Clause.HNN_CBAR_TRIVIAL, len(cbar) == 1, f"C̃ tem ordem {len(cbar)}"),
            ]
            if len(cbar) == 1:
                return icc(conditions, "C̃ = 1")
            x = min(cbar - {A.identity})
            word = format_word(element_word(A, x, names))
            return not_icc(conditions, Witness(word, WitnessKind.FINITE_NORMAL_SUBGROUP, f"C̃ de ordem {len(cbar)} normal em G"),
                           "C̃ ≠ 1")

        except Exception as e:
            logger.error(f"Erro ao decidir HNN: {str(e)}")
            raise

    def decide_icc_amalgam(self, A: FiniteGroup, B: FiniteGroup, C, C_prime, phi: Sequence[Tuple[int, int]]) -> Verdict:
        """
        A *_C B com fatores finitos. Degenerado ([A:C] = [B:C'] = 2): não icc.
        Caso contrário, icc se e só se C̃ é trivial.

        Raises:
            IccKitError: C não é próprio nos dois fatores
        """
        try:
            logger.info(f"Decidindo amálgama {A} *_C {B}")
            C = require_subgroup(A, C, "C")
            C_prime = require_subgroup(B, C_prime, "C'")
            if len(C) >= A.order or len(C_prime) >= B.order:
                raise IccKitError("C deve ser próprio em A e em B")
            mapping = extend_partial_isomorphism(A, B, phi)
            a_names = factor_alphabet(0, A)

            if A.order == 2 * len(C) and B.order == 2 * len(C_prime):
                condition = Condition(Clause.AMALGAM_DEGENERATE, False, "[A:C] = [B:C'] = 2")
                if len(C) == 1:
                    witness = Witness("a0*b0", WitnessKind.ORACLE, "translação do diedral infinito: classe {a0·b0, b0·a0}", 2)
                    return not_icc([condition], witness, "Z/2 * Z/2 é o diedral infinito")
                x = min(C - {A.identity})
                word = format_word(element_word(A, x, a_names))
                return not_icc([condition], Witness(word, WitnessKind.FINITE_NORMAL_SUBGROUP, "C de índice 2 é normal em G"),
                               "C é subgrupo normal finito")

            cbar = cbar_fixpoint(A, C, C_prime, mapping, B=B)
            conditions = [
                Condition(Clause.AMALGAM_DEGENERATE, True, "não degenerado"),
                Condition(Clause.AMALGAM_CBAR_TRIVIAL, len(cbar) == 1, f"C̃ tem ordem {len(cbar)}"),
            ]
            if len(cbar) == 1:
                return icc(conditions, "C̃ = 1")
            x = min(cbar - {A.identity})
            word = format_word(element_word(A, x, a_names))
            return not_icc(conditions, Witness(word, WitnessKind.FINITE_NORMAL_SUBGROUP, f"C̃ de ordem {len(cbar)} normal em G"),
                           "C̃ ≠ 1")

        except Exception as e:
            logger.error(f"Erro ao decidir amálgama: {str(e)}")
            raise

    def decide_icc_free_product(self, factors: Sequence[GroupDesc]) -> Verdict:
        """Produto livre de fatores não triviais: icc, exceto Z/2 * Z/2."""
        try:
            if len(factors) < 2:
                raise IccKitError("Produto livre exige pelo menos 2 fatores")
            for i, f in enumerate(factors):
                if is_trivial_desc(f):
                    raise IccKitError(f"Fator {i} do produto livre é trivial")
            if len(factors) == 2:
                # ordem de cada fator: None = infinito, 0 = não determinada
                orders = [None if is_infinite_desc(f) is True else (finite_order(f) or 0) for f in factors]
                excluded = any(o is None or (o and o != 2) for o in orders)
                if not excluded and 0 in orders:
                    condition = Condition(Clause.FREE_PRODUCT_NOT_DIHEDRAL, None,
                                          "ordem de um fator não determinada: pode ser Z/2 * Z/2")
                    return unknown([condition], "não é possível excluir o diedral infinito")
            dihedral = len(factors) == 2 and orders == [2, 2]
            if dihedral:
                condition = Condition(Clause.FREE_PRODUCT_NOT_DIHEDRAL, False, "Z/2 * Z/2")
                witness = Witness("a0*b0", WitnessKind.ORACLE, "translação do diedral infinito: classe {a0·b0, b0·a0}", 2)
                return not_icc([condition], witness, "diedral infinito")
            return icc([Condition(Clause.FREE_PRODUCT_NOT_DIHEDRAL, True, f"{len(factors)} fatores, não é Z/2 * Z/2")],
                       "produto livre fora da exceção diédrica")

        except Exception as e:
            logger.error(f"Erro ao decidir produto livre: {str(e)}")
            raise

    # ------------------------------------------------------------------
    # Extensões cindidas
    # ------------------------------------------------------------------
    def decide_semidirect(self, ext: SplitExtensionDesc) -> Verdict:
        kernel, quotient = ext.kernel, ext.quotient
        engine = self.extensions
        if isinstance(kernel, Declared):
            return engine.decide_icc_split_extension(ext)
        if isinstance(kernel, Finite) and not kernel.group.is_abelian:
            first = engine.check_fc_gk_trivial(ext)
            condition = Condition(Clause.FC_GK_TRIVIAL, first.holds, first.detail)
            if first.holds is False:
                return not_icc([condition], first.witness, "K finito não trivial é normal")
            return self.dispatch_decide(quotient)
        if not is_abelian_desc(kernel):
            return unknown([], f"núcleo {describe(kernel)} fora do catálogo de extensões cindidas")
        if isinstance(quotient, (FreeAbelian, Free)) and quotient.rank == 1:
            return engine.decide_icc_abelian_quotient_cyclic(ext)
        verdict = engine.decide_icc_split_abelian_kernel(ext)
        if isinstance(quotient, FreeAbelian) and isinstance(kernel, FreeAbelian):
            other = engine.decide_icc_abelian_quotient(ext)
            if verdict.is_unknown:
                return other
            if not other.is_unknown and other.outcome != verdict.outcome:
                raise IccKitError(f"Formulações divergentes para {describe(ext)}: {verdict.outcome.value} x {other.outcome.value}")
        return verdict

    # ------------------------------------------------------------------
    # Despacho
    # ------------------------------------------------------------------
    def dispatch_decide(self, g: GroupDesc) -> Verdict:
        """
        Roteia o descritor para o decisor da família.

        Returns:
            Verdict: com family preenchida

        Raises:
            IccKitError: descritor malformado
        """
        try:
            if isinstance(g, Finite):
                verdict = self.decide_icc_simple(g) if g.simple else self.decide_finite(g)
            elif isinstance(g, (FreeAbelian, Free)):
                verdict = self.decide_abelian(g)
            elif isinstance(g, Declared):
                verdict = self.decide_declared(g)
            elif isinstance(g, DirectProduct):
                verdict = self.decide_icc_direct_product(g.factors)
            elif isinstance(g, SplitExtensionDesc):
                verdict = self.decide_semidirect(g)
            elif isinstance(g, WreathRestricted):
                verdict = self.decide_icc_wreath_restricted(g.base, g.top, g.omega)
            elif isinstance(g, WreathComplete):
                verdict = self.decide_icc_wreath_complete(g.base, g.top, g.omega)
            elif isinstance(g, FiniteExt):
                verdict = self.decide_icc_finite_extension(g)
                torsion = self.decide_icc_finite_index_torsion(g)
                if verdict.outcome != torsion.outcome:
                    raise IccKitError(
                        f"Formas equivalentes divergem em {describe(g)}: {verdict.outcome.value} x {torsion.outcome.value}"
                    )
            elif isinstance(g, BS):
                verdict = self.decide_icc_bs(g.m, g.n)
            elif isinstance(g, HNNFiniteBase):
                verdict = self.decide_icc_hnn_finite_base(g.base, g.C, g.C_prime, g.phi)
            elif isinstance(g, Amalgam):
                verdict = self.decide_icc_amalgam(g.A, g.B, g.C, g.C_prime, g.phi)
            elif isinstance(g, FreeProduct):
                verdict = self.decide_icc_free_product(g.factors)
            elif isinstance(g, Builtin):
                if g.name not in BUILTINS:
                    raise UnsupportedDescriptorError(f"Grupo embutido desconhecido: {g.name}")
                verdict = self.decide_semidirect(BUILTINS[g.name]())
            else:
                verdict = unknown([], f"família {type(g).__name__} sem decisor")
                logger.warning(verdict.reason)

            return verdict.with_family(g.family)

        except Exception as e:
            logger.error(f"Erro no despacho de {type(g).__name__}: {str(e)}")
            raise


# Instância global do Family Engine
family_engine = FamilyEngine()


# Exemplo de uso e testes
if __name__ == "__main__":
    from .groupkit import cyclic_group, symmetric_group

    print(f"BS(2,3): {family_engine.decide_icc_bs(2, 3).outcome.value}")
    print(f"Lamplighter: {family_engine.decide_icc_wreath_restricted(Finite(cyclic_group(2)), FreeAbelian(1)).outcome.value}")
    s3 = symmetric_group(3)
    transposition = s3.index_of("(0 1)")
    hnn = family_engine.decide_icc_hnn_finite_base(s3, {s3.identity, transposition}, {s3.identity, transposition},
                                                   [(transposition, transposition)])
    print(f"HNN sobre S3: {hnn.outcome.value}")
    print(f"twisted_z2_f2: {family_engine.dispatch_decide(Builtin('twisted_z2_f2')).outcome.value}")
