"""
Oracle Engine - Evidência por força bruta em bolas de conjugação

Este módulo enumera conjugados w·x·w⁻¹ por palavras de comprimento <= r:
- Grupos com forma normal: finitos (tábua), Z^n, F_n, produtos diretos,
  semidiretos (núcleo Z^n ou finito), wreath sobre Z, BS(m,n), produtos
  livres de grupos finitos e o embutido twisted_z2_f2
- Certificação de classes finitas por fechamento sob conjugação pelos geradores
- Verificação cruzada de vereditos (testemunhas e sondas de crescimento)

Instruções para personalização:
1. O raio padrão vem de settings['oracle_radius']
2. Novas formas normais: subclasse de NormalFormGroup + normal_form_group()
3. Sondas para vereditos icc ficam em probe_words()
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

import pandas as pd
from loguru import logger

from .descriptors import (
    BS,
    Amalgam,
    Builtin,
    DirectProduct,
    Finite,
    FiniteExt,
    FiniteSetOmega,
    Free,
    FreeAbelian,
    FreeProduct,
    GroupDesc,
    RegularOmega,
    SplitExtensionDesc,
    WreathRestricted,
    describe,
)
from .errors import IccKitError, UnsupportedDescriptorError
from .extensions import kernel_alphabet, quotient_alphabet
from .families import factor_alphabet, resolve_omega, top_alphabet
from .groupkit import (
    FiniteGroup,
    Letter,
    Word,
    bs_normal_form_from_syllables,
    bs_syllables_of,
    cyclic_group,
    element_word,
    format_word,
    generator_count,
    parse_word,
)
from .settings import load_settings
from .verdict import OracleRecord, ProbeRecord, Verdict, WitnessKind
from .zlinalg import IntMatrix, vec_add, vec_sub

Element = Hashable
KernelMap = Callable[[Element], Element]


# ----------------------------------------------------------------------
# Formas normais
# ----------------------------------------------------------------------
class NormalFormGroup:
    """
    Grupo com forma normal canônica: elementos são valores imutáveis e
    comparáveis, e a forma normal serializada identifica o elemento.
    """

    name: str = "grupo"
    alphabet: Tuple[str, ...] = ()

    def identity(self) -> Element:
        raise NotImplementedError

    def generator(self, index: int) -> Element:
        raise NotImplementedError

    def multiply(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def invert(self, x: Element) -> Element:
        raise NotImplementedError

    def letters(self, x: Element) -> List[Letter]:
        """Uma palavra (gerador, expoente) que representa x; usada quando o grupo é quociente."""
        raise UnsupportedDescriptorError(f"{self.name} não fornece palavras para seus elementos")

    def format(self, x: Element) -> str:
        return str(x)

    def conjugate(self, w: Element, x: Element) -> Element:
        return self.multiply(self.multiply(w, x), self.invert(w))

    def normalize(self, word: Word) -> Element:
        result = self.identity()
        for g, e in word.letters:
            x = self.generator(g)
            result = self.multiply(result, x if e > 0 else self.invert(x))
        return result

    def parse(self, text: str) -> Element:
        return self.normalize(parse_word(text, self.alphabet))

    def conjugators(self) -> List[Tuple[Element, Element]]:
        """Pares (g, g⁻¹) para todo gerador e inverso."""
        pairs = []
        for i in range(len(self.alphabet)):
            g = self.generator(i)
            g_inv = self.invert(g)
            pairs.append((g, g_inv))
            pairs.append((g_inv, g))
        return pairs


class FiniteTableGroup(NormalFormGroup):
    def __init__(self, group: FiniteGroup, alphabet: Optional[Sequence[str]] = None):
        self.group = group
        self.name = str(group)
        self.alphabet = tuple(alphabet) if alphabet is not None else group.generator_names
        self._words: Dict[int, List[Letter]] = {}

    def identity(self) -> int:
        return self.group.identity

    def generator(self, index: int) -> int:
        return self.group.generators[index]

    def multiply(self, x: int, y: int) -> int:
        return self.group.mul(x, y)

    def invert(self, x: int) -> int:
        return self.group.inv(x)

    def letters(self, x: int) -> List[Letter]:
        if x not in self._words:
            self._words[x] = element_word(self.group, x, self.alphabet).syllables()
        return self._words[x]

    def format(self, x: int) -> str:
        return format_word(element_word(self.group, x, self.alphabet))


class FreeAbelianGroup(NormalFormGroup):
    def __init__(self, rank: int, alphabet: Optional[Sequence[str]] = None):
        self.rank = rank
        self.name = f"Z^{rank}"
        self.alphabet = tuple(alphabet) if alphabet is not None else tuple(f"x{i}" for i in range(rank))

    def identity(self) -> Tuple[int, ...]:
        return (0,) * self.rank

    def generator(self, index: int) -> Tuple[int, ...]:
        return tuple(1 if i == index else 0 for i in range(self.rank))

    def multiply(self, x, y):
        return vec_add(x, y)

    def invert(self, x):
        return tuple(-c for c in x)

    def letters(self, x) -> List[Letter]:
        return [(i, c) for i, c in enumerate(x) if c]

    def format(self, x) -> str:
        return format_word(Word.from_syllables(self.alphabet, self.letters(x)))


class FreeGroup(NormalFormGroup):
    """Palavras reduzidas: tuplas de letras (gerador, ±1)."""

    def __init__(self, rank: int, alphabet: Optional[Sequence[str]] = None):
        self.rank = rank
        self.name = f"F{rank}"
        self.alphabet = tuple(alphabet) if alphabet is not None else tuple(f"x{i}" for i in range(rank))

    def identity(self) -> Tuple[Letter, ...]:
        return ()

    def generator(self, index: int):
        return ((index, 1),)

    def multiply(self, x, y):
        left = list(x)
        for letter in y:
            if left and left[-1] == (letter[0], -letter[1]):
                left.pop()
            else:
                left.append(letter)
        return tuple(left)

    def invert(self, x):
        return tuple((g, -e) for g, e in reversed(x))

    def letters(self, x) -> List[Letter]:
        return Word(self.alphabet, tuple(x)).syllables()

    def abelianize(self, x) -> Tuple[int, ...]:
        sums = [0] * self.rank
        for g, e in x:
            sums[g] += e
        return tuple(sums)

    def format(self, x) -> str:
        return format_word(Word(self.alphabet, tuple(x)))


class ProductGroup(NormalFormGroup):
    """Produto direto; o alfabeto é a concatenação dos alfabetos dos fatores."""

    def __init__(self, factors: Sequence[NormalFormGroup]):
        self.factors = tuple(factors)
        self.name = " × ".join(f.name for f in self.factors)
        names = [name for f in self.factors for name in f.alphabet]
        if len(set(names)) != len(names):
            names = [f"p{i}_{name}" for i, f in enumerate(self.factors) for name in f.alphabet]
        self.alphabet = tuple(names)
        self._owner = [(i, j) for i, f in enumerate(self.factors) for j in range(len(f.alphabet))]
        self._offsets = []
        offset = 0
        for f in self.factors:
            self._offsets.append(offset)
            offset += len(f.alphabet)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def generator(self, index: int):
        owner, j = self._owner[index]
        return tuple(f.generator(j) if i == owner else f.identity() for i, f in enumerate(self.factors))

    def multiply(self, x, y):
        return tuple(f.multiply(a, b) for f, a, b in zip(self.factors, x, y))

    def invert(self, x):
        return tuple(f.invert(a) for f, a in zip(self.factors, x))

    def letters(self, x) -> List[Letter]:
        out = []
        for f, offset, a in zip(self.factors, self._offsets, x):
            out.extend((offset + g, e) for g, e in f.letters(a))
        return out

    def format(self, x) -> str:
        parts = [f.format(a) for f, a in zip(self.factors, x)]
        return "*".join(p for p in parts if p != "1") or "1"


class SemidirectGroup(NormalFormGroup):
    """
    K ⋊ Q em forma de par (k, q): (k1, q1)(k2, q2) = (k1·θ(q1)(k2), q1·q2).

    actions[j] = (θ(q_j), θ(q_j)⁻¹) como funções sobre elementos de K.
    """

    def __init__(self, kernel: NormalFormGroup, quotient: NormalFormGroup,
                 actions: Sequence[Tuple[KernelMap, KernelMap]], name: str = ""):
        if len(actions) != len(quotient.alphabet):
            raise IccKitError(f"{len(actions)} ações para {len(quotient.alphabet)} geradores do quociente")
        clash = set(kernel.alphabet) & set(quotient.alphabet)
        if clash:
            raise IccKitError(f"Nomes de geradores repetidos entre núcleo e quociente: {sorted(clash)}")
        self.kernel = kernel
        self.quotient = quotient
        self.actions = tuple(actions)
        self.name = name or f"{kernel.name} ⋊ {quotient.name}"
        self.alphabet = kernel.alphabet + quotient.alphabet

    def theta(self, q: Element, k: Element) -> Element:
        for g, e in reversed(self.quotient.letters(q)):
            forward, backward = self.actions[g]
            step = forward if e > 0 else backward
            for _ in range(abs(e)):
                k = step(k)
        return k

    def identity(self):
        return (self.kernel.identity(), self.quotient.identity())

    def generator(self, index: int):
        n = len(self.kernel.alphabet)
        if index < n:
            return (self.kernel.generator(index), self.quotient.identity())
        return (self.kernel.identity(), self.quotient.generator(index - n))

    def multiply(self, x, y):
        k1, q1 = x
        k2, q2 = y
        return (self.kernel.multiply(k1, self.theta(q1, k2)), self.quotient.multiply(q1, q2))

    def invert(self, x):
        k, q = x
        q_inv = self.quotient.invert(q)
        return (self.theta(q_inv, self.kernel.invert(k)), q_inv)

    def format(self, x) -> str:
        k, q = x
        parts = [self.kernel.format(k), self.quotient.format(q)]
        return "*".join(p for p in parts if p != "1") or "1"


class WreathZGroup(NormalFormGroup):
    """
    D ≀_Ω Z com D finito e Ω = Z (regular, suporte finito) ou Ω = Z/period.

    Elemento: (suporte ordenado ((posição, valor), ...), deslocamento s ∈ Z);
    (f, s)(g, r) = (f · s·g, s + r) com (s·g)(x) = g(x - s).
    """

    def __init__(self, base: FiniteGroup, period: Optional[int] = None, shift_name: str = "t"):
        self.base = base
        self.period = period
        points = 1 if period is None else period
        single = len(base.generators) == 1
        self._letters = [(p, i) for p in range(points) for i in range(len(base.generators))]
        names = [f"d{p}" if single else f"d{p}_{i}" for p, i in self._letters]
        self.alphabet = tuple(names) + (shift_name,)
        omega = "Z" if period is None else f"Z/{period}"
        self.name = f"{base} ≀[{omega}] Z"

    def _position(self, p: int) -> int:
        return p if self.period is None else p % self.period

    def identity(self):
        return ((), 0)

    def generator(self, index: int):
        if index == len(self._letters):
            return ((), 1)
        p, i = self._letters[index]
        return (((p, self.base.generators[i]),), 0)

    def multiply(self, x, y):
        f, s = x
        g, r = y
        values = dict(f)
        identity = self.base.identity
        for p, d in g:
            q = self._position(p + s)
            values[q] = self.base.mul(values.get(q, identity), d)
        support = tuple(sorted((p, d) for p, d in values.items() if d != identity))
        return (support, s + r)

    def invert(self, x):
        f, s = x
        support = tuple(sorted((self._position(p - s), self.base.inv(d)) for p, d in f))
        return (support, -s)

    def format(self, x) -> str:
        f, s = x
        values = ", ".join(f"{p}:{self.base.label(d)}" for p, d in f)
        return f"{{{values}}}·{self.alphabet[-1]}^{s}"


class BaumslagSolitarGroup(NormalFormGroup):
    """BS(m,n) = <a, t | t a^m t⁻¹ = a^n> com a forma normal de bs_normal_form."""

    alphabet = ("a", "t")

    def __init__(self, m: int, n: int):
        if m == 0 or n == 0:
            raise IccKitError("BS(m,n) exige m, n não nulos")
        self.m, self.n = m, n
        self.name = f"BS({m},{n})"

    def identity(self):
        return (0,)

    def generator(self, index: int):
        return (1,) if index == 0 else (0, 1, 0)

    def multiply(self, x, y):
        return bs_normal_form_from_syllables(self.m, self.n, bs_syllables_of(x) + bs_syllables_of(y))

    def invert(self, x):
        syllables = [(g, -k) for g, k in reversed(bs_syllables_of(x))]
        return bs_normal_form_from_syllables(self.m, self.n, syllables)

    def format(self, x) -> str:
        return format_word(Word.from_syllables(self.alphabet, bs_syllables_of(x)))


class FreeProductGroup(NormalFormGroup):
    """Produto livre de grupos finitos: sílabas (fator, elemento ≠ 1) alternadas."""

    def __init__(self, factors: Sequence[FiniteGroup]):
        self.factors = tuple(factors)
        self.name = " * ".join(str(f) for f in self.factors)
        self._letters = [(i, j) for i, f in enumerate(self.factors) for j in range(len(f.generators))]
        self.alphabet = tuple(name for i, f in enumerate(self.factors) for name in factor_alphabet(i, f))

    def identity(self):
        return ()

    def generator(self, index: int):
        i, j = self._letters[index]
        return ((i, self.factors[i].generators[j]),)

    def multiply(self, x, y):
        out = list(x)
        for i, e in y:
            if out and out[-1][0] == i:
                merged = self.factors[i].mul(out[-1][1], e)
                if merged == self.factors[i].identity:
                    out.pop()
                else:
                    out[-1] = (i, merged)
            else:
                out.append((i, e))
        return tuple(out)

    def invert(self, x):
        return tuple((i, self.factors[i].inv(e)) for i, e in reversed(x))

    def format(self, x) -> str:
        parts = []
        for i, e in x:
            G = self.factors[i]
            parts.append(format_word(element_word(G, e, factor_alphabet(i, G))))
        return "*".join(parts) or "1"


# ----------------------------------------------------------------------
# Construção a partir de descritores
# ----------------------------------------------------------------------
def _lattice_actions(matrices: Sequence[IntMatrix]) -> List[Tuple[KernelMap, KernelMap]]:
    actions = []
    for M in matrices:
        M_inv = M.inverse()
        actions.append((M.apply, M_inv.apply))
    return actions


def _permutation_actions(perms: Sequence[Sequence[int]]) -> List[Tuple[KernelMap, KernelMap]]:
    actions = []
    for p in perms:
        forward = tuple(p)
        backward = tuple(sorted(range(len(p)), key=lambda x: p[x]))
        actions.append((forward.__getitem__, backward.__getitem__))
    return actions


def _kernel_group(kernel: GroupDesc, names: Sequence[str]) -> NormalFormGroup:
    if isinstance(kernel, FreeAbelian):
        return FreeAbelianGroup(kernel.rank, names)
    if isinstance(kernel, Finite):
        return FiniteTableGroup(kernel.group, names)
    raise UnsupportedDescriptorError(f"Núcleo {describe(kernel)} sem forma normal")


def _quotient_group(quotient: GroupDesc, names: Sequence[str]) -> NormalFormGroup:
    if isinstance(quotient, Finite):
        return FiniteTableGroup(quotient.group, names)
    if isinstance(quotient, FreeAbelian):
        return FreeAbelianGroup(quotient.rank, names)
    if isinstance(quotient, Free):
        return FreeGroup(quotient.rank, names)
    if isinstance(quotient, DirectProduct):
        parts, offset = [], 0
        for factor in quotient.factors:
            size = generator_count(factor)
            parts.append(_quotient_group(factor, names[offset:offset + size]))
            offset += size
        return ProductGroup(parts)
    raise UnsupportedDescriptorError(f"Quociente {describe(quotient)} sem forma normal")


def _disjoint_names(kernel_names: Sequence[str], quotient_names: Sequence[str]) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Renomeia para k{i} / q{i} quando núcleo e quociente repetem nomes (ex.: dois cíclicos com gerador g)."""
    kernel_names, quotient_names = tuple(kernel_names), tuple(quotient_names)
    if set(kernel_names) & set(quotient_names):
        quotient_names = tuple(f"q{i}" for i in range(len(quotient_names)))
    if set(kernel_names) & set(quotient_names):
        kernel_names = tuple(f"k{i}" for i in range(len(kernel_names)))
    return kernel_names, quotient_names


def _kernel_actions(kernel: GroupDesc, action: Sequence) -> List[Tuple[KernelMap, KernelMap]]:
    if isinstance(kernel, FreeAbelian):
        return _lattice_actions(action)
    return _permutation_actions(action)


def twisted_z2_f2_group() -> SemidirectGroup:
    """
    (Z² × F₂) ⋊ (Z × F₂): q0 conjuga por k0; q1 age por M_φ em Z² e k0 -> k0·a2;
    q2 age por M_ψ em Z² e k0 -> k0·a1; k1 é fixo por todos.
    """
    lattice = FreeAbelianGroup(2, ("a1", "a2"))
    free = FreeGroup(2, ("k0", "k1"))
    kernel = ProductGroup([lattice, free])
    quotient = ProductGroup([FreeAbelianGroup(1, ("q0",)), FreeGroup(2, ("q1", "q2"))])
    k0 = free.generator(0)
    k0_inv = free.invert(k0)

    def twist(matrix: IntMatrix, column: Tuple[int, int]):
        M_inv = matrix.inverse()

        def forward(k):
            a, w = k
            shift = tuple(c * free.abelianize(w)[0] for c in column)
            return (vec_add(matrix.apply(a), shift), w)

        def backward(k):
            a, w = k
            shift = tuple(c * free.abelianize(w)[0] for c in column)
            return (M_inv.apply(vec_sub(a, shift)), w)

        return forward, backward

    actions = [
        (lambda k: (k[0], free.multiply(free.multiply(k0, k[1]), k0_inv)),
         lambda k: (k[0], free.multiply(free.multiply(k0_inv, k[1]), k0))),
        twist(IntMatrix.from_rows([[1, 1], [0, 1]]), (0, 1)),
        twist(IntMatrix.from_rows([[1, 0], [1, 1]]), (1, 0)),
    ]
    return SemidirectGroup(kernel, quotient, actions, name="twisted_z2_f2")


# Formas normais embutidas - EDITE AQUI para registrar novas
BUILTIN_GROUPS = {
    "twisted_z2_f2": twisted_z2_f2_group,
}


def normal_form_group(desc: GroupDesc) -> NormalFormGroup:
    """
    Forma normal para o descritor.

    Raises:
        UnsupportedDescriptorError: família sem forma normal implementada
    """
    if isinstance(desc, Finite):
        return FiniteTableGroup(desc.group)
    if isinstance(desc, FreeAbelian):
        return FreeAbelianGroup(desc.rank)
    if isinstance(desc, Free):
        return FreeGroup(desc.rank)
    if isinstance(desc, DirectProduct):
        return ProductGroup([normal_form_group(f) for f in desc.factors])
    if isinstance(desc, SplitExtensionDesc):
        kernel_names, quotient_names = _disjoint_names(kernel_alphabet(desc), quotient_alphabet(desc))
        kernel = _kernel_group(desc.kernel, kernel_names)
        quotient = _quotient_group(desc.quotient, quotient_names)
        return SemidirectGroup(kernel, quotient, _kernel_actions(desc.kernel, desc.action))
    if isinstance(desc, FiniteExt):
        if not isinstance(desc.kernel, (Finite, FreeAbelian)):
            raise UnsupportedDescriptorError(f"Núcleo {describe(desc.kernel)} sem forma normal")
        kernel_names, quotient_names = _disjoint_names(
            kernel_alphabet(SplitExtensionDesc(kernel=desc.kernel)), desc.quotient.generator_names)
        kernel = _kernel_group(desc.kernel, kernel_names)
        return SemidirectGroup(kernel, FiniteTableGroup(desc.quotient, quotient_names), _kernel_actions(desc.kernel, desc.action))
    if isinstance(desc, WreathRestricted):
        if not isinstance(desc.base, Finite) or not (isinstance(desc.top, (FreeAbelian, Free)) and desc.top.rank == 1):
            raise UnsupportedDescriptorError("Forma normal de wreath exige base finita e topo Z")
        omega = resolve_omega(desc.top, desc.omega)
        shift = top_alphabet(desc.top)[0]
        if isinstance(omega, RegularOmega):
            return WreathZGroup(desc.base.group, None, shift)
        if isinstance(omega, FiniteSetOmega) and omega.images[0] == tuple((j + 1) % omega.size for j in range(omega.size)):
            return WreathZGroup(desc.base.group, omega.size, shift)
        raise UnsupportedDescriptorError("Forma normal de wreath exige Ω = Z ou Z/n com deslocamento")
    if isinstance(desc, BS):
        return BaumslagSolitarGroup(desc.m, desc.n)
    if isinstance(desc, FreeProduct):
        if all(isinstance(f, Finite) for f in desc.factors):
            return FreeProductGroup([f.group for f in desc.factors])
        if all(isinstance(f, (FreeAbelian, Free)) and f.rank == 1 for f in desc.factors):
            return FreeGroup(len(desc.factors))
        raise UnsupportedDescriptorError("Forma normal de produto livre exige fatores finitos ou cíclicos infinitos")
    if isinstance(desc, Amalgam):
        if len(desc.C) == 1:
            return FreeProductGroup([desc.A, desc.B])
        raise UnsupportedDescriptorError("Forma normal de amálgama só para C trivial")
    if isinstance(desc, Builtin) and desc.name in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[desc.name]()
    raise UnsupportedDescriptorError(f"Família {desc.family} sem forma normal implementada")


# ----------------------------------------------------------------------
# Relatórios
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class BallReport:
    """
    Conjugados de x por palavras de comprimento <= radius.

    counts[r] = |{w·x·w⁻¹ : |w| <= r}|; closed indica que o conjunto é estável
    sob conjugação por todo gerador e inverso (e então é a classe inteira).
    """

    element: str
    radius: int
    counts: Tuple[int, ...]
    closed: bool
    conjugates: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict:
        return {
            "element": self.element,
            "radius": self.radius,
            "counts": list(self.counts),
            "closed": self.closed,
            "conjugates": list(self.conjugates),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"radius": range(len(self.counts)), "count": list(self.counts)})


def _expand(group: NormalFormGroup, layer: Sequence[Element], seen: set,
            conjugators: Sequence[Tuple[Element, Element]]) -> List[Element]:
    new = []
    for c in layer:
        for g, g_inv in conjugators:
            y = group.multiply(group.multiply(g, c), g_inv)
            if y not in seen:
                seen.add(y)
                new.append(y)
    return new


class OracleEngine:
    """
    Motor do oráculo de conjugação:
    - Bolas de conjugados por raio
    - Certificação de classes finitas por fechamento
    - Verificação cruzada de vereditos
    """

    def __init__(self, config: Optional[Dict] = None):
        """
        Inicializa o OracleEngine com configurações opcionais.

        Args:
            config (Dict, optional): Configurações personalizadas
        """
        self.config = config or {}

        # Configurações padrão (settings.py + .env) - EDITE AQUI conforme necessário
        self.default_config = load_settings()

        # Mescla configurações
        self.settings = {**self.default_config, **self.config}

        logger.info("OracleEngine inicializado com sucesso")

    def group_for(self, desc: GroupDesc) -> NormalFormGroup:
        return normal_form_group(desc)

    def ball_conjugates(self, group: NormalFormGroup, x: Element, radius: Optional[int] = None) -> BallReport:
        """
        Enumera {w·x·w⁻¹ : |w| <= radius} camada a camada.

        Args:
            group (NormalFormGroup): grupo com forma normal
            x (Element): elemento já normalizado (use group.parse para palavras)
            radius (int, optional): padrão settings['oracle_radius']

        Returns:
            BallReport: contagens por raio e flag de fechamento
        """
        try:
            radius = self.settings["oracle_radius"] if radius is None else radius
            if radius < 0:
                raise IccKitError("O raio deve ser >= 0")
            cap = self.settings["oracle_max_conjugates"]
            conjugators = group.conjugators()
            seen = {x}
            layer = [x]
            counts = [1]
            truncated = False
            for r in range(1, radius + 1):
                layer = _expand(group, layer, seen, conjugators)
                counts.append(len(seen))
                logger.debug(f"Raio {r}: {len(seen)} conjugados de {group.format(x)}")
                if len(seen) > cap:
                    logger.warning(f"Teto de {cap} conjugados atingido no raio {r}; enumeração interrompida")
                    truncated = True
                    break
            closed = not truncated and not _expand(group, layer, set(seen), conjugators)
            conjugates = tuple(sorted(group.format(c) for c in seen)) if closed else ()
            return BallReport(group.format(x), len(counts) - 1, tuple(counts), closed, conjugates)

        except Exception as e:
            logger.error(f"Erro ao enumerar conjugados: {str(e)}")
            raise

    def certify_finite_class(self, group: NormalFormGroup, x: Element,
                             r_max: Optional[int] = None) -> Optional[FrozenSet[Element]]:
        """
        Classe de x se ela fechar sob conjugação pelos geradores até r_max, senão None.

        Exemplo de uso:
            bs = BaumslagSolitarGroup(2, 2)
            oracle_engine.certify_finite_class(bs, bs.parse("a^2"), 4)  # {a^2}
        """
        r_max = self.settings["oracle_radius"] if r_max is None else r_max
        cap = self.settings["oracle_max_conjugates"]
        conjugators = group.conjugators()
        seen = {x}
        layer = [x]
        for r in range(1, r_max + 1):
            layer = _expand(group, layer, seen, conjugators)
            if not layer:
                logger.debug(f"Classe de {group.format(x)} fechada no raio {r} com {len(seen)} elementos")
                return frozenset(seen)
            if len(seen) > cap:
                break
        return None

    def probe_words(self, group: NormalFormGroup) -> List[str]:
        """Sondas padrão: os geradores e os produtos de dois geradores distintos."""
        names = list(group.alphabet)
        words = names + [f"{a}*{b}" for i, a in enumerate(names) for b in names[i + 1:]]
        identity = group.identity()
        return [w for w in words if group.parse(w) != identity]

    def cross_check(self, desc: GroupDesc, verdict: Verdict, budget: Optional[int] = None) -> OracleRecord:
        """
        Confronta o veredito com o oráculo.

        not_icc: a testemunha precisa fechar uma classe finita (ou ter certificado estrutural).
        icc: nenhuma sonda pode fechar até o orçamento (evidência, nunca prova).
        """
        try:
            budget = self.settings["oracle_radius"] if budget is None else budget
            try:
                group = self.group_for(desc)
            except UnsupportedDescriptorError as e:
                logger.warning(f"Verificação cruzada ignorada: {e}")
                return OracleRecord("skipped", budget, message=str(e))

            if verdict.is_unknown:
                return OracleRecord("skipped", budget, message="veredito unknown: nada a confrontar")

            if verdict.is_not_icc:
                witness = verdict.witness
                try:
                    x = group.parse(witness.element)
                except IccKitError:
                    if witness.kind == WitnessKind.ORACLE:
                        return OracleRecord("skipped", budget,
                                            message=f"testemunha '{witness.element}' fora do alfabeto do oráculo")
                    return OracleRecord("consistent", budget, message=f"certificado estrutural ({witness.kind.value})")
                found = self.certify_finite_class(group, x, budget)
                if found is None:
                    report = self.ball_conjugates(group, x, budget)
                    probe = ProbeRecord(witness.element, report.counts, False)
                    if witness.kind == WitnessKind.ORACLE:
                        return OracleRecord("inconsistent", budget, (probe,),
                                            f"classe de {witness.element} não fechou até o raio {budget}")
                    return OracleRecord("consistent", budget, (probe,),
                                        f"certificado estrutural ({witness.kind.value}); classe não fechou no orçamento")
                probe = ProbeRecord(witness.element, (len(found),), True)
                if witness.class_size is not None and witness.class_size != len(found):
                    return OracleRecord("inconsistent", budget, (probe,),
                                        f"classe de {witness.element} tem {len(found)} elementos, esperado {witness.class_size}")
                return OracleRecord("consistent", budget, (probe,),
                                    f"classe de {witness.element} certificada com {len(found)} elementos")

            probes = []
            for word in self.probe_words(group):
                report = self.ball_conjugates(group, group.parse(word), budget)
                probes.append(ProbeRecord(word, report.counts, report.closed))
                if report.closed:
                    logger.error(f"Sonda {word} tem classe finita, mas o veredito é icc")
                    return OracleRecord("inconsistent", budget, tuple(probes),
                                        f"a sonda {word} tem classe finita com {report.counts[-1]} elementos")
            return OracleRecord("consistent", budget, tuple(probes),
                                "evidência: nenhuma sonda fechou até o orçamento")

        except Exception as e:
            logger.error(f"Erro na verificação cruzada: {str(e)}")
            raise


# Instância global do Oracle Engine
oracle_engine = OracleEngine()


# Exemplo de uso e testes
if __name__ == "__main__":
    bs = BaumslagSolitarGroup(2, -2)
    print(f"Classe de a^2 em BS(2,-2): {oracle_engine.certify_finite_class(bs, bs.parse('a^2'), 4)}")
    lamp = WreathZGroup(cyclic_group(2))
    print(f"Lamplighter, d0: {oracle_engine.ball_conjugates(lamp, lamp.parse('d0'), 6).counts}")
