"""
Extension Engine - Extensões cindidas K ⋊_θ Q

Este módulo decide icc para produtos semidiretos:
- FC_G(K) trivial (subgrupo normal finito ou subreticulado com imagem finita)
- Cociclo d_q(u) = [k⁻¹, u] em notação aditiva e anulamento em H¹
- Injetividade de θ restrita a FC(Q)
- Núcleo abeliano, quociente cíclico infinito e quociente abeliano livre
- Núcleo com centro declarado e ker Φ explícito (homomorfismo Ξ)

Instruções para personalização:
1. A profundidade das buscas limitadas vem de settings['word_cutoff']
2. Novos tipos de núcleo entram em check_fc_gk_trivial()
3. Os nomes padrão dos geradores (k0, k1, ..., q0, q1, ...) ficam em kernel_alphabet()
"""

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from .descriptors import (
    CenterData,
    Declared,
    DirectProduct,
    Finite,
    Free,
    FreeAbelian,
    GroupDesc,
    KernelPhiEntry,
    SplitExtensionDesc,
    describe,
)
from .errors import (
    DimensionMismatchError,
    IccKitError,
    InvalidHomomorphismError,
    NotUnimodularError,
    UnsupportedDescriptorError,
)
from .groupkit import (
    FcSubgroup,
    FiniteGroup,
    compose,
    element_word,
    extend_action,
    fc_of_group,
    format_word,
    generator_count,
    inner_conjugator,
    is_automorphism,
)
from .settings import load_settings
from .verdict import Clause, Condition, Verdict, Witness, WitnessKind, icc, not_icc, unknown
from .zlinalg import (
    IntMatrix,
    Lattice,
    Resolution,
    Vector,
    fc_lattice,
    integer_kernel,
    integer_solve,
    matrix_order,
    vec_add,
)


# ----------------------------------------------------------------------
# Nomes e estrutura dos quocientes
# ----------------------------------------------------------------------
def kernel_alphabet(ext: SplitExtensionDesc) -> Tuple[str, ...]:
    if ext.kernel_names:
        return tuple(ext.kernel_names)
    kernel = ext.kernel
    if isinstance(kernel, FreeAbelian):
        return tuple(f"k{i}" for i in range(kernel.rank))
    if isinstance(kernel, Finite):
        return kernel.group.generator_names
    if isinstance(kernel, Declared):
        return kernel.generators
    return ()


def quotient_alphabet(ext: SplitExtensionDesc) -> Tuple[str, ...]:
    if ext.quotient_names:
        return tuple(ext.quotient_names)
    quotient = ext.quotient
    if isinstance(quotient, Finite):
        return quotient.group.generator_names
    if isinstance(quotient, Declared) and quotient.generators:
        return quotient.generators
    return tuple(f"q{i}" for i in range(generator_count(quotient)))


def power_word(name: str, exponent: int) -> str:
    if exponent == 0:
        return "1"
    return name if exponent == 1 else f"{name}^{exponent}"


def vector_word(names: Sequence[str], v: Sequence[int]) -> str:
    return "*".join(power_word(name, c) for name, c in zip(names, v) if c) or "1"


def generator_orders(Q: GroupDesc) -> List[Optional[int]]:
    """Ordem de cada gerador de Q (None = infinita)."""
    if isinstance(Q, Finite):
        return [Q.group.element_order(g) for g in Q.group.generators]
    if isinstance(Q, (FreeAbelian, Free)):
        return [None] * Q.rank
    if isinstance(Q, DirectProduct):
        return [o for f in Q.factors for o in generator_orders(f)]
    if isinstance(Q, Declared):
        return [None] * len(Q.generators)
    raise UnsupportedDescriptorError(f"Ordens de geradores indisponíveis para {describe(Q)}")


def commuting_pairs(Q: GroupDesc) -> List[Tuple[int, int]]:
    """Pares de geradores (i < j) que comutam em Q por definição da família."""
    if isinstance(Q, FreeAbelian) or (isinstance(Q, Declared) and Q.abelian):
        return list(itertools.combinations(range(generator_count(Q)), 2))
    if isinstance(Q, Finite):
        G = Q.group
        gens = G.generators
        return [(i, j) for i, j in itertools.combinations(range(len(gens)), 2)
                if G.mul(gens[i], gens[j]) == G.mul(gens[j], gens[i])]
    if isinstance(Q, DirectProduct):
        pairs, blocks, offset = [], [], 0
        for factor in Q.factors:
            size = generator_count(factor)
            pairs.extend((offset + i, offset + j) for i, j in commuting_pairs(factor))
            blocks.append(range(offset, offset + size))
            offset += size
        for a, b in itertools.combinations(blocks, 2):
            pairs.extend((i, j) for i in a for j in b)
        return sorted(pairs)
    return []


def is_abelian_desc(desc: GroupDesc) -> bool:
    if isinstance(desc, FreeAbelian):
        return True
    if isinstance(desc, Free):
        return desc.rank <= 1
    if isinstance(desc, Finite):
        return desc.group.is_abelian
    if isinstance(desc, DirectProduct):
        return all(is_abelian_desc(f) for f in desc.factors)
    if isinstance(desc, Declared):
        return bool(desc.abelian)
    return False


# ----------------------------------------------------------------------
# Ações
# ----------------------------------------------------------------------
def extend_matrix_action(Q: FiniteGroup, matrices: Sequence[IntMatrix]) -> Dict[int, IntMatrix]:
    """
    Estende θ dos geradores de Q finito para Q -> GL(n,Z).

    Raises:
        InvalidHomomorphismError: as matrizes não respeitam as relações de Q
    """
    if len(matrices) != len(Q.generators):
        raise InvalidHomomorphismError(f"{len(matrices)} matrizes para {len(Q.generators)} geradores de {Q}")
    n = matrices[0].rows if matrices else 0
    theta: Dict[int, IntMatrix] = {Q.identity: IntMatrix.identity(n)}
    queue = deque([Q.identity])
    while queue:
        x = queue.popleft()
        for g, M in zip(Q.generators, matrices):
            y = Q.mul(x, g)
            value = theta[x] @ M
            if y not in theta:
                theta[y] = value
                queue.append(y)
            elif theta[y] != value:
                raise InvalidHomomorphismError(f"A ação não respeita as relações de {Q}")
    return theta


def _action_identity(action: Sequence, kernel: GroupDesc):
    if isinstance(kernel, FreeAbelian):
        return IntMatrix.identity(kernel.rank)
    return tuple(kernel.group.elements)


def _action_compose(a, b):
    if isinstance(a, IntMatrix):
        return a @ b
    return compose(a, b)


def _action_power(a, e: int):
    if isinstance(a, IntMatrix):
        return a.power(e)
    base = a if e >= 0 else tuple(sorted(range(len(a)), key=lambda x: a[x]))
    result = tuple(range(len(a)))
    for _ in range(abs(e)):
        result = compose(result, base)
    return result


def _action_order(a) -> Optional[int]:
    if isinstance(a, IntMatrix):
        return matrix_order(a)
    identity = tuple(range(len(a)))
    k, x = 1, tuple(a)
    while x != identity:
        x = compose(x, a)
        k += 1
    return k


def _finite_blocks(Q: GroupDesc, offset: int = 0) -> List[Tuple[int, FiniteGroup]]:
    """Fatores finitos não triviais de Q, com a posição do primeiro gerador de cada um."""
    if isinstance(Q, Finite):
        return [(offset, Q.group)] if Q.group.order > 1 else []
    if isinstance(Q, DirectProduct):
        blocks = []
        for factor in Q.factors:
            blocks.extend(_finite_blocks(factor, offset))
            offset += generator_count(factor)
        return blocks
    return []


def _finite_part_actions(ext: SplitExtensionDesc, kernel: GroupDesc, qnames: Sequence[str],
                         identity) -> List[Tuple[str, object]]:
    """
    Todos os elementos do produto dos fatores finitos do quociente, com a ação
    de cada um; a identidade vem com a palavra "1".
    """
    elements: List[Tuple[str, object]] = [("1", identity)]
    for offset, G in _finite_blocks(ext.quotient):
        size = len(G.generators)
        block = list(ext.action[offset:offset + size])
        if isinstance(kernel, FreeAbelian):
            full = extend_matrix_action(G, block)
        else:
            full = extend_action(G, kernel.group, block)
        names = qnames[offset:offset + size]
        combined = []
        for word, a in elements:
            for g in G.elements:
                w = format_word(element_word(G, g, names)) if g != G.identity else "1"
                joined = "*".join(x for x in (word, w) if x != "1") or "1"
                combined.append((joined, _action_compose(a, full[g])))
        elements = combined
    return elements


def validate_action(ext: SplitExtensionDesc):
    """
    Verifica a ação de uma extensão cindida: uma imagem por gerador de Q,
    imagens em Aut(K) e relações de Q respeitadas (Q finito ou abeliano livre).

    Raises:
        InvalidHomomorphismError, DimensionMismatchError, NotUnimodularError
    """
    kernel, quotient = ext.kernel, ext.quotient
    count = generator_count(quotient)

    if isinstance(kernel, Declared):
        if ext.center is not None:
            _validate_center(ext.center, count)
        return

    if len(ext.action) != count:
        raise InvalidHomomorphismError(f"{len(ext.action)} ações para {count} geradores do quociente")

    if isinstance(kernel, FreeAbelian):
        for i, M in enumerate(ext.action):
            if not isinstance(M, IntMatrix) or M.rows != kernel.rank or M.cols != kernel.rank:
                raise DimensionMismatchError(f"Ação {i} não é matriz {kernel.rank}x{kernel.rank}")
            if not M.is_unimodular():
                raise NotUnimodularError(f"non-unimodular: ação {i} tem det {M.det()}")
    elif isinstance(kernel, Finite):
        for i, alpha in enumerate(ext.action):
            if not is_automorphism(kernel.group, alpha):
                raise InvalidHomomorphismError(f"Ação {i} não é automorfismo de {kernel.group}")
    else:
        raise UnsupportedDescriptorError(f"Núcleo {describe(kernel)} não suportado em extensões cindidas")

    _check_relations(ext.action, quotient, kernel, 0)


def _check_relations(action: Sequence, Q: GroupDesc, kernel: GroupDesc, offset: int):
    if isinstance(Q, Finite):
        block = list(action[offset:offset + len(Q.group.generators)])
        if isinstance(kernel, FreeAbelian):
            extend_matrix_action(Q.group, block)
        else:
            extend_action(Q.group, kernel.group, block)
        return
    if isinstance(Q, DirectProduct):
        position = offset
        for factor in Q.factors:
            _check_relations(action, factor, kernel, position)
            position += generator_count(factor)
    for i, j in commuting_pairs(Q):
        a, b = action[offset + i], action[offset + j]
        if _action_compose(a, b) != _action_compose(b, a):
            raise InvalidHomomorphismError(f"As ações dos geradores {offset + i} e {offset + j} não comutam")


def _validate_center(center: CenterData, count: int):
    if len(center.action) != count:
        raise InvalidHomomorphismError(f"Ação no centro com {len(center.action)} matrizes para {count} geradores")
    for i, M in enumerate(center.action):
        if M.rows != center.rank or M.cols != center.rank:
            raise DimensionMismatchError(f"Ação {i} no centro não é {center.rank}x{center.rank}")
        if not M.is_unimodular():
            raise NotUnimodularError(f"non-unimodular: ação {i} no centro tem det {M.det()}")
    if center.twists:
        if len(center.twists) != count:
            raise InvalidHomomorphismError("Quantidade de torções diferente da quantidade de geradores")
        for i, T in enumerate(center.twists):
            if T.rows != center.rank or T.cols != center.free_rank:
                raise DimensionMismatchError(f"Torção {i} não é {center.rank}x{center.free_rank}")


# ----------------------------------------------------------------------
# Cociclos e H¹
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Cocycle:
    """
    d: geradores -> Z = Z^m em notação aditiva, com a ação A_u de cada gerador.

    commuting: pares de geradores que comutam no domínio; orders: ordem finita
    de um gerador (None = infinita). A condição de cociclo é verificada nessas
    relações: (A_u - I)d(v) = (A_v - I)d(u) e Σ A_u^t d(u) = 0.
    """

    dimension: int
    values: Tuple[Vector, ...]
    action: Tuple[IntMatrix, ...]
    generators: Tuple[str, ...] = ()
    commuting: Tuple[Tuple[int, int], ...] = ()
    orders: Tuple[Optional[int], ...] = ()

    def violations(self) -> List[str]:
        problems = []
        identity = IntMatrix.identity(self.dimension)
        for i, j in self.commuting:
            left = (self.action[i] - identity).apply(self.values[j])
            right = (self.action[j] - identity).apply(self.values[i])
            if left != right:
                problems.append(f"relação de comutação entre {i} e {j}")
        for i, order in enumerate(self.orders):
            if order is None:
                continue
            total, power = (0,) * self.dimension, identity
            for _ in range(order):
                total = vec_add(total, power.apply(self.values[i]))
                power = power @ self.action[i]
            if any(total):
                problems.append(f"relação de ordem {order} do gerador {i}")
        return problems


@dataclass(frozen=True)
class H1Verdict:
    """
    zero: a classe se anula. Certificado: z com (A_u - I)z = d(u) para todo u,
    ou a linha infactível do sistema empilhado na forma de Smith.
    """

    zero: bool
    z: Optional[Vector] = None
    failing_row: Optional[int] = None
    divisor: Optional[int] = None

    def recheck(self, cocycle: Cocycle) -> bool:
        if not self.zero:
            return _stacked_solution(cocycle).solution is None
        identity = IntMatrix.identity(cocycle.dimension)
        return all((A - identity).apply(self.z) == tuple(d) for A, d in zip(cocycle.action, cocycle.values))


def split_cocycle_dq(action: Sequence[IntMatrix], k: Sequence[int],
                     twists: Optional[Sequence[IntMatrix]] = None, k_free: Optional[Sequence[int]] = None,
                     generators: Sequence[str] = (), commuting: Iterable[Tuple[int, int]] = (),
                     orders: Sequence[Optional[int]] = ()) -> Cocycle:
    """
    Cociclo do caso cindido, d(u) = (A_u - I)·k + T_u·k_F.

    k é a parte central do conjugador; T_u·k_F é a contribuição da parte não
    central (torções declaradas), nula para núcleos reticulados.

    Exemplo de uso:
        split_cocycle_dq([IntMatrix.from_rows([[1, 1], [0, 1]])], (0, 1)).values  # ((1, 0),)
    """
    m = len(k)
    identity = IntMatrix.identity(m)
    values = []
    for index, A in enumerate(action):
        if A.rows != m or A.cols != m:
            raise DimensionMismatchError(f"Ação {index} não é {m}x{m}")
        d = (A - identity).apply(tuple(k))
        if twists is not None and k_free is not None and len(k_free) > 0:
            T = twists[index]
            if T.cols != len(k_free) or T.rows != m:
                raise DimensionMismatchError(f"Torção {index} incompatível com o conjugador")
            d = vec_add(d, T.apply(tuple(k_free)))
        values.append(d)
    return Cocycle(m, tuple(values), tuple(action), tuple(generators), tuple(commuting), tuple(orders))


def _stacked_solution(cocycle: Cocycle):
    identity = IntMatrix.identity(cocycle.dimension)
    stacked = IntMatrix.vstack([A - identity for A in cocycle.action])
    target = tuple(x for d in cocycle.values for x in d)
    return integer_solve(stacked, target)


def h1_class_is_zero(cocycle: Cocycle) -> H1Verdict:
    """
    Decide se [d] = 0 em H¹: existe z com (A_u - I)z = d(u) para todos os geradores?

    Raises:
        IccKitError: o cociclo viola as relações do domínio
    """
    problems = cocycle.violations()
    if problems:
        raise IccKitError("Cociclo inválido: " + "; ".join(problems))
    if not cocycle.values:
        return H1Verdict(True, z=(0,) * cocycle.dimension)
    result = _stacked_solution(cocycle)
    if result.solution is not None:
        return H1Verdict(True, z=result.solution)
    return H1Verdict(False, failing_row=result.failing_row, divisor=result.divisor)


# ----------------------------------------------------------------------
# Resultados intermediários
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class CheckResult:
    """Sub-decisão: holds None significa não resolvido."""

    holds: Optional[bool]
    witness: Optional[Witness] = None
    detail: str = ""


@dataclass(frozen=True)
class XiReport:
    holds: Optional[bool]
    entries: Tuple[H1Verdict, ...] = ()
    witness: Optional[str] = None
    exponents: Optional[Tuple[int, ...]] = None
    detail: str = ""


def _exponent_vectors(k: int, cutoff: int) -> List[Tuple[int, ...]]:
    """Vetores não nulos com |e|∞ <= cutoff e primeira coordenada não nula positiva."""
    vectors = []
    for e in itertools.product(range(-cutoff, cutoff + 1), repeat=k):
        first = next((x for x in e if x), 0)
        if first > 0:
            vectors.append(e)
    vectors.sort(key=lambda e: (max(abs(x) for x in e), sum(abs(x) for x in e), e))
    return vectors


class ExtensionEngine:
    """
    Motor de decisão para extensões cindidas:
    - FC_G(K) = {1} (nenhum elemento do núcleo com classe finita)
    - θ|FC(Q) injetiva ou Ξ injetiva
    - Casos de quociente cíclico e abeliano livre
    """

    def __init__(self, config: Optional[Dict] = None):
        """
        Inicializa o ExtensionEngine com configurações opcionais.

        Args:
            config (Dict, optional): Configurações personalizadas
        """
        self.config = config or {}

        # Configurações padrão (settings.py + .env) - EDITE AQUI conforme necessário
        self.default_config = load_settings()

        # Mescla configurações
        self.settings = {**self.default_config, **self.config}

        logger.info("ExtensionEngine inicializado com sucesso")

    # ------------------------------------------------------------------
    # FC_G(K) trivial
    # ------------------------------------------------------------------
    def _lattice_check(self, lattice: Lattice, resolution: Resolution, names: Sequence[str], what: str) -> CheckResult:
        if lattice.is_zero:
            return CheckResult(True, detail=f"reticulado de órbitas finitas em {what} é nulo")
        if resolution == Resolution.UNRESOLVED:
            return CheckResult(
                None,
                detail=f"reticulado candidato de posto {lattice.rank} em {what} não certificado até "
                       f"palavras de comprimento {self.settings['word_cutoff']}",
            )
        v = lattice.vectors()[0]
        witness = Witness(vector_word(names, v), WitnessKind.FINITE_IMAGE_LATTICE,
                          f"subreticulado de posto {lattice.rank} com imagem finita em GL({lattice.rank},Z)")
        return CheckResult(False, witness, f"{what} contém subreticulado invariante de posto {lattice.rank} com ação finita")

    def check_fc_gk_trivial(self, ext: SplitExtensionDesc) -> CheckResult:
        """
        Decide FC_G(K) = {1}.

        Núcleo finito não trivial: falso (é subgrupo normal finito).
        Núcleo Z^n: verdadeiro se e só se fc_lattice das matrizes é nulo.
        Núcleo declarado: pela declaração ou pelo centro quando FC(K) = Z(K).

        Returns:
            CheckResult: com testemunha quando falso
        """
        try:
            kernel = ext.kernel
            names = kernel_alphabet(ext)

            if isinstance(kernel, Finite):
                K = kernel.group
                if K.order == 1:
                    return CheckResult(True, detail="núcleo trivial")
                k = K.generators[0]
                word = format_word(element_word(K, k, names))
                return CheckResult(
                    False,
                    Witness(word, WitnessKind.FINITE_NORMAL_SUBGROUP, f"K = {K} é subgrupo normal finito",
                            class_size=None),
                    f"K = {K} é um subgrupo normal finito não trivial",
                )

            if isinstance(kernel, FreeAbelian):
                if kernel.rank == 0:
                    return CheckResult(True, detail="núcleo trivial")
                lattice, resolution = fc_lattice(list(ext.action), self.settings["word_cutoff"], dimension=kernel.rank)
                return self._lattice_check(lattice, resolution, names, f"K = Z^{kernel.rank}")

            if isinstance(kernel, Declared):
                if kernel.icc:
                    return CheckResult(True, detail="K declarado icc: FC(K) = {1}")
                center = ext.center
                if center is not None and center.fc_is_center:
                    center_names = names[:center.rank] if len(names) >= center.rank else tuple(
                        f"z{i}" for i in range(center.rank))
                    lattice, resolution = fc_lattice(list(center.action), self.settings["word_cutoff"],
                                                     dimension=center.rank)
                    return self._lattice_check(lattice, resolution, center_names, f"Z(K) = Z^{center.rank}")
                return CheckResult(None, detail="FC_G(K) não determinado para núcleo declarado sem centro")

            raise UnsupportedDescriptorError(f"Núcleo {describe(kernel)} fora do catálogo")

        except Exception as e:
            logger.error(f"Erro ao verificar FC_G(K): {str(e)}")
            raise

    # ------------------------------------------------------------------
    # Injetividade sobre FC(Q)
    # ------------------------------------------------------------------
    def theta_restricted_injective(self, ext: SplitExtensionDesc, fc: FcSubgroup) -> CheckResult:
        """
        Decide se θ: FC(Q) -> Aut(K) é injetiva (núcleo abeliano).

        FC(Q) trivial: sim. Um gerador de ordem infinita: ordem da matriz.
        Parte finita de FC(Q) (fatores finitos): busca exaustiva, combinada com a
        busca de expoentes até settings["word_cutoff"] sobre os geradores de ordem
        infinita quando há mais de um; sem resposta nessa busca, não resolvido.
        """
        try:
            if fc.is_trivial:
                return CheckResult(True, detail="FC(Q) trivial")
            kernel = ext.kernel
            if not is_abelian_desc(kernel):
                raise IccKitError(f"θ|FC(Q) só é tratada para núcleo abeliano, não {describe(kernel)}")
            if isinstance(kernel, Declared):
                return CheckResult(None, detail="ação sobre núcleo declarado não disponível")

            qnames = quotient_alphabet(ext)
            kind = WitnessKind.CENTRAL if is_abelian_desc(ext.quotient) else WitnessKind.ORACLE
            identity = _action_identity(ext.action, kernel)

            if isinstance(ext.quotient, Finite):
                Q = ext.quotient.group
                if isinstance(kernel, FreeAbelian):
                    full = extend_matrix_action(Q, list(ext.action))
                else:
                    full = extend_action(Q, kernel.group, list(ext.action))
                for q in Q.elements:
                    if q != Q.identity and full[q] == identity:
                        word = format_word(element_word(Q, q, qnames))
                        return CheckResult(False, Witness(word, kind, "age trivialmente em K"),
                                           f"{word} ≠ 1 em FC(Q) age trivialmente em K")
                return CheckResult(True, detail="nenhum q ≠ 1 de Q age trivialmente (busca exaustiva)")

            # parte finita de FC(Q): produto dos fatores finitos, percorrido por inteiro
            finite_part = _finite_part_actions(ext, kernel, qnames, identity)
            for word, a in finite_part:
                if word != "1" and a == identity:
                    return CheckResult(False, Witness(word, kind, "age trivialmente em K"),
                                       f"{word} ≠ 1 em FC(Q) age trivialmente em K")

            orders = generator_orders(ext.quotient)
            gens = [i for i in fc.generator_indices if orders[i] is None]
            if not gens:
                return CheckResult(True, detail="FC(Q) finito: nenhum q ≠ 1 age trivialmente (busca exaustiva)")

            actions = [ext.action[i] for i in gens]
            for i, a in zip(gens, actions):
                order = _action_order(a)
                if order is not None:
                    word = power_word(qnames[i], order)
                    return CheckResult(False, Witness(word, kind, f"θ({qnames[i]}) tem ordem {order}"),
                                       f"θ({qnames[i]}) tem ordem finita {order}")
            if len(gens) == 1:
                # θ(f)·θ(z)^e = 1 com e ≠ 0 daria ordem finita a θ(z)
                return CheckResult(True, detail=f"θ({qnames[gens[0]]}) tem ordem infinita e a parte finita age fielmente")

            cutoff = self.settings["word_cutoff"]
            for e in _exponent_vectors(len(gens), cutoff):
                product = identity
                for a, x in zip(actions, e):
                    product = _action_compose(product, _action_power(a, x))
                for finite_word, f in finite_part:
                    if _action_compose(f, product) == identity:
                        parts = [finite_word] if finite_word != "1" else []
                        parts += [power_word(qnames[i], x) for i, x in zip(gens, e) if x]
                        word = "*".join(parts)
                        return CheckResult(False, Witness(word, kind, "age trivialmente em K"),
                                           f"{word} ≠ 1 em FC(Q) age trivialmente em K")
            return CheckResult(
                None,
                detail=f"nenhum elemento do núcleo de θ|FC(Q) com expoentes até {cutoff}; injetividade não certificada",
            )

        except Exception as e:
            logger.error(f"Erro ao verificar injetividade de θ: {str(e)}")
            raise

    # ------------------------------------------------------------------
    # Decisores
    # ------------------------------------------------------------------
    @staticmethod
    def _conclude(conditions: List[Condition], results: List[CheckResult], reason: str) -> Verdict:
        for result in results:
            if result is not None and result.holds is False:
                return not_icc(conditions, result.witness, reason)
        if any(c.holds is None for c in conditions):
            pending = "; ".join(c.detail for c in conditions if c.holds is None)
            logger.warning(f"Veredito unknown: {pending}")
            return unknown(conditions, pending)
        return icc(conditions, reason)

    def decide_icc_split_abelian_kernel(self, ext: SplitExtensionDesc) -> Verdict:
        """
        K abeliano: G é icc se e só se FC_G(K) = {1} e θ|FC(Q) é injetiva.

        Returns:
            Verdict: icc, not_icc (com testemunha) ou unknown

        Exemplo de uso:
            verdict = engine.decide_icc_split_abelian_kernel(anosov)
        """
        try:
            logger.info(f"Decidindo {describe(ext)} (núcleo abeliano)")
            if not is_abelian_desc(ext.kernel):
                raise UnsupportedDescriptorError(f"Núcleo {describe(ext.kernel)} não é abeliano")
            validate_action(ext)

            first = self.check_fc_gk_trivial(ext)
            conditions = [Condition(Clause.FC_GK_TRIVIAL, first.holds, first.detail)]
            if first.holds is False:
                return self._conclude(conditions, [first], "FC_G(K) não trivial")

            try:
                fc = fc_of_group(ext.quotient)
            except UnsupportedDescriptorError as e:
                conditions.append(Condition(Clause.THETA_FC_INJECTIVE, None, str(e)))
                return self._conclude(conditions, [first], "")
            second = self.theta_restricted_injective(ext, fc)
            conditions.append(Condition(Clause.THETA_FC_INJECTIVE, second.holds, second.detail))

            verdict = self._conclude(conditions, [first, second], "FC_G(K) = {1} e θ|FC(Q) injetiva")
            logger.info(f"{describe(ext)}: {verdict.outcome.value}")
            return verdict

        except Exception as e:
            logger.error(f"Erro ao decidir extensão com núcleo abeliano: {str(e)}")
            raise

    def decide_icc_abelian_quotient_cyclic(self, ext: SplitExtensionDesc) -> Verdict:
        """
        Q = Z: G é icc se e só se FC_G(K) = {1} e Θ: Z -> Out(K) é injetivo.

        Para K = Z^n, Out(K) = GL(n,Z) e Θ é injetivo se e só se a matriz tem ordem infinita.
        """
        try:
            logger.info(f"Decidindo {describe(ext)} (quociente cíclico infinito)")
            quotient = ext.quotient
            if not ((isinstance(quotient, (FreeAbelian, Free)) and quotient.rank == 1)):
                raise UnsupportedDescriptorError(f"Quociente {describe(quotient)} não é cíclico infinito")
            if not isinstance(ext.kernel, (FreeAbelian, Finite)):
                raise UnsupportedDescriptorError(f"Núcleo {describe(ext.kernel)} não suportado")
            validate_action(ext)

            first = self.check_fc_gk_trivial(ext)
            conditions = [Condition(Clause.FC_GK_TRIVIAL, first.holds, first.detail)]

            qname = quotient_alphabet(ext)[0]
            action = ext.action[0]
            if isinstance(ext.kernel, FreeAbelian):
                order = matrix_order(action)
                if order is None:
                    second = CheckResult(True, detail=f"θ({qname}) tem ordem infinita em GL({ext.kernel.rank},Z)")
                else:
                    second = CheckResult(
                        False,
                        Witness(power_word(qname, order), WitnessKind.CENTRAL, f"θ({qname})^{order} = I"),
                        f"θ({qname}) tem ordem {order}: Θ não é injetivo",
                    )
            else:
                K = ext.kernel.group
                e, alpha = 1, tuple(action)
                while inner_conjugator(K, alpha) is None:
                    alpha = compose(alpha, action)
                    e += 1
                second = CheckResult(False, None, f"Out({K}) é finito: Θ({qname}^{e}) = 1")
            conditions.append(Condition(Clause.THETA_OUT_INJECTIVE, second.holds, second.detail))

            verdict = self._conclude(conditions, [first, second], "FC_G(K) = {1} e Θ injetivo")
            logger.info(f"{describe(ext)}: {verdict.outcome.value}")
            return verdict

        except Exception as e:
            logger.error(f"Erro ao decidir extensão por Z: {str(e)}")
            raise

    def decide_icc_abelian_quotient(self, ext: SplitExtensionDesc) -> Verdict:
        """
        Z^n ⋊ Z^k: G é icc se e só se FC_G(K) = {1} e G tem centro trivial.

        O centro é {(v, e) : ∏M_i^{e_i} = I e M_i v = v para todo i}.
        """
        try:
            logger.info(f"Decidindo {describe(ext)} (quociente abeliano livre, forma sem centro)")
            quotient = ext.quotient
            if not isinstance(quotient, FreeAbelian) or not isinstance(ext.kernel, FreeAbelian):
                raise UnsupportedDescriptorError("Forma sem centro exige K = Z^n e Q = Z^k")
            validate_action(ext)

            first = self.check_fc_gk_trivial(ext)
            conditions = [Condition(Clause.FC_GK_TRIVIAL, first.holds, first.detail)]

            n = ext.kernel.rank
            names = kernel_alphabet(ext)
            identity = IntMatrix.identity(n)
            if ext.action:
                fixed = integer_kernel(IntMatrix.vstack([M - identity for M in ext.action]))
            else:
                fixed = Lattice.full(n)

            if not fixed.is_zero:
                v = fixed.vectors()[0]
                second = CheckResult(
                    False,
                    Witness(vector_word(names, v), WitnessKind.CENTRAL, "vetor fixo por toda a ação"),
                    f"vetores fixos por todas as matrizes formam reticulado de posto {fixed.rank}",
                )
            else:
                theta = self.theta_restricted_injective(ext, fc_of_group(quotient))
                if theta.holds is False:
                    second = CheckResult(False, theta.witness, f"elemento central fora de K: {theta.detail}")
                elif theta.holds is None:
                    second = CheckResult(None, detail=theta.detail)
                else:
                    second = CheckResult(True, detail="nenhum vetor fixo e nenhum expoente com ação trivial")
            conditions.append(Condition(Clause.CENTERLESS, second.holds, second.detail))

            verdict = self._conclude(conditions, [first, second], "FC_G(K) = {1} e G sem centro")
            logger.info(f"{describe(ext)}: {verdict.outcome.value}")
            return verdict

        except Exception as e:
            logger.error(f"Erro ao decidir quociente abeliano: {str(e)}")
            raise

    # ------------------------------------------------------------------
    # Núcleo com centro declarado
    # ------------------------------------------------------------------
    def xi_injective_report(self, ext: SplitExtensionDesc,
                            kernel_of_phi: Optional[Sequence[KernelPhiEntry]] = None) -> XiReport:
        """
        Injetividade de Ξ: ker Φ -> H¹(C_Q(FC(Q)), Z(K)).

        Para cada gerador q de ker Φ (com conjugador k) monta d_q sobre os
        geradores de C_Q(FC(Q)) e testa [q] = 0; depois procura combinações
        Σ e_j·d_j que sejam cobordos (núcleo de [B | -D]).

        Raises:
            IccKitError: dados do conjugador ausentes
        """
        try:
            entries = tuple(ext.kernel_of_phi if kernel_of_phi is None else kernel_of_phi)
            if not entries:
                return XiReport(True, detail="ker Φ trivial")
            center = ext.center
            if center is None:
                raise IccKitError("Dados do centro Z(K) ausentes para calcular Ξ")

            count = generator_count(ext.quotient)
            gens = list(ext.centralizer_generators) if ext.centralizer_generators is not None else list(range(count))
            qnames = quotient_alphabet(ext)
            position = {g: i for i, g in enumerate(gens)}
            pairs = tuple((position[i], position[j]) for i, j in commuting_pairs(ext.quotient)
                          if i in position and j in position)
            all_orders = generator_orders(ext.quotient)
            orders = tuple(all_orders[g] for g in gens)
            action = [center.action[g] for g in gens]
            twists = [center.twists[g] for g in gens] if center.twists else None

            verdicts = []
            cocycles = []
            for entry in entries:
                if len(entry.central) != center.rank or (center.free_rank and len(entry.free) != center.free_rank):
                    raise IccKitError(f"Conjugador ausente ou incompleto para {entry.word}")
                cocycle = split_cocycle_dq(action, entry.central, twists, entry.free,
                                           generators=[qnames[g] for g in gens], commuting=pairs, orders=orders)
                verdict = h1_class_is_zero(cocycle)
                logger.debug(f"Ξ({entry.word}): [q] = 0? {verdict.zero}")
                verdicts.append(verdict)
                cocycles.append(cocycle)
                if verdict.zero:
                    return XiReport(False, tuple(verdicts), witness=entry.word,
                                    exponents=tuple(1 if e is entry else 0 for e in entries),
                                    detail=f"[{entry.word}] = 0 em H¹")

            if gens:
                identity = IntMatrix.identity(center.rank)
                B = IntMatrix.vstack([A - identity for A in action])
                D = IntMatrix.from_columns(B.rows, [tuple(x for d in c.values for x in d) for c in cocycles])
                joint = integer_kernel(IntMatrix.hstack([B, -D]))
                for v in joint.vectors():
                    e = v[center.rank:]
                    if any(e):
                        word = "*".join(power_word(entry.word if entry.word.isidentifier() else f"({entry.word})", x)
                                        for entry, x in zip(entries, e) if x)
                        return XiReport(False, tuple(verdicts), witness=word, exponents=tuple(e),
                                        detail=f"combinação {tuple(e)} dos geradores de ker Φ tem classe nula")

            return XiReport(True, tuple(verdicts), detail="nenhuma combinação não trivial de ker Φ tem classe nula")

        except Exception as e:
            logger.error(f"Erro ao calcular Ξ: {str(e)}")
            raise

    def decide_icc_split_extension(self, ext: SplitExtensionDesc) -> Verdict:
        """
        Núcleo declarado com FC(Q) finitamente gerado: G é icc se e só se
        FC_G(K) = {1} e Ξ é injetiva.
        """
        try:
            logger.info(f"Decidindo {describe(ext)} (centro declarado)")
            kernel = ext.kernel
            if not isinstance(kernel, Declared):
                raise UnsupportedDescriptorError("decide_icc_split_extension exige núcleo declarado")
            validate_action(ext)

            first = self.check_fc_gk_trivial(ext)
            conditions = [Condition(Clause.FC_GK_TRIVIAL, first.holds, first.detail)]

            try:
                fc_of_group(ext.quotient)
            except UnsupportedDescriptorError as e:
                conditions.append(Condition(Clause.H1_CLASS_NONZERO, None, f"FC(Q) não calculável: {e}"))
                return self._conclude(conditions, [first], "")

            if kernel.icc or kernel.centerless:
                # Z(K) = 1: toda classe em H¹ é nula, Ξ injetiva só com ker Φ trivial
                if ext.kernel_of_phi:
                    entry = ext.kernel_of_phi[0]
                    second = CheckResult(False, Witness(f"{entry.word}*k^-1", WitnessKind.ORACLE,
                                                        "q·k⁻¹ centraliza K"),
                                         f"Z(K) = 1 e {entry.word} ∈ ker Φ")
                else:
                    second = CheckResult(True, detail="Z(K) = 1 e ker Φ trivial")
            elif ext.center is None:
                second = CheckResult(None, detail="centro de K não declarado")
            else:
                report = self.xi_injective_report(ext)
                if report.holds is False:
                    second = CheckResult(False, Witness(report.witness, WitnessKind.ORACLE,
                                                        "q ∈ ker Φ com [q] = 0"), report.detail)
                else:
                    second = CheckResult(report.holds, detail=report.detail)
            conditions.append(Condition(Clause.H1_CLASS_NONZERO, second.holds, second.detail))

            verdict = self._conclude(conditions, [first, second], "FC_G(K) = {1} e Ξ injetiva")
            logger.info(f"{describe(ext)}: {verdict.outcome.value}")
            return verdict

        except Exception as e:
            logger.error(f"Erro ao decidir extensão com centro declarado: {str(e)}")
            raise


# Instância global do Extension Engine
extension_engine = ExtensionEngine()


# Exemplo de uso e testes
if __name__ == "__main__":
    anosov = SplitExtensionDesc(
        kernel=FreeAbelian(2),
        quotient=FreeAbelian(1),
        action=(IntMatrix.from_rows([[2, 1], [1, 1]]),),
    )
    print(f"Z² ⋊ Z (Anosov): {extension_engine.decide_icc_split_abelian_kernel(anosov).outcome.value}")

    m_phi = IntMatrix.from_rows([[1, 1], [0, 1]])
    cocycle = split_cocycle_dq([m_phi], (0, 0), [IntMatrix.from_rows([[0, 0], [1, 0]])], (3, 0))
    print(f"Classe do sistema com n = 3 é nula? {h1_class_is_zero(cocycle).zero}")
