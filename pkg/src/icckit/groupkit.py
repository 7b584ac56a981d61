"""
Group Kit - Grupos finitos, palavras e formas normais

Este módulo reúne a maquinaria combinatória usada pelos decisores:
- Grupos finitos por tábua de multiplicação (classes, centro, core, Aut)
- Extensão de homomorfismos a partir de imagens de geradores
- Palavras: sintaxe compartilhada com a CLI, redução livre
- Redução de Britton e forma normal em BS(m,n)
- Ponto fixo C̃ de HNN e amálgamas com fatores finitos
- Subgrupo FC(Q) dos grupos quociente do catálogo

Instruções para personalização:
1. Novos grupos nomeados entram em NAMED_GROUPS
2. O limite de força bruta em Aut vem de settings['aut_cap']
3. A verificação de associatividade usa settings['assoc_full_check'] e ['assoc_samples']
"""

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, DihedralGroup, SymmetricGroup

from .descriptors import Declared, DirectProduct, Finite, Free, FreeAbelian, GroupDesc
from .errors import (
    AutCapExceededError,
    IccKitError,
    InvalidHomomorphismError,
    InvalidSubgroupError,
    UnsupportedDescriptorError,
    WordSyntaxError,
)
from .settings import DEFAULT_SETTINGS

Subgroup = FrozenSet[int]
Automorphism = Tuple[int, ...]


# ----------------------------------------------------------------------
# Grupos finitos
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class FiniteGroup:
    """
    Grupo finito dado pela tábua de multiplicação sobre índices 0..order-1.

    table[a][b] é o índice do produto a·b. Geradores são índices; os nomes dos
    geradores (generator_names) formam o alfabeto das palavras.
    """

    table: Tuple[Tuple[int, ...], ...]
    identity: int
    inverses: Tuple[int, ...]
    generators: Tuple[int, ...]
    labels: Tuple[str, ...]
    name: str = ""
    generator_names: Tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """g·x·g⁻¹"""
        return self.table[self.table[g][x]][self.inverses[g]]

    def power(self, a: int, k: int) -> int:
        base = a if k >= 0 else self.inverses[a]
        result = self.identity
        for _ in range(abs(k)):
            result = self.table[result][base]
        return result

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def product(self, elements: Iterable[int]) -> int:
        result = self.identity
        for x in elements:
            result = self.table[result][x]
        return result

    @property
    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise IccKitError(f"Elemento '{label}' não existe em {self.name or 'grupo finito'}")

    def label(self, a: int) -> str:
        return self.labels[a]

    def __str__(self) -> str:
        return self.name or f"grupo finito de ordem {self.order}"


def _generating_set(table: Sequence[Sequence[int]], identity: int) -> Tuple[int, ...]:
    gens: List[int] = []
    reached = {identity}
    for x in range(len(table)):
        if x not in reached:
            gens.append(x)
            reached = set(_closure(table, identity, gens))
    return tuple(gens)


def _closure(table: Sequence[Sequence[int]], identity: int, gens: Sequence[int]) -> Subgroup:
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = table[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def group_from_table(table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                     generators: Optional[Sequence[int]] = None, name: str = "",
                     generator_names: Optional[Sequence[str]] = None,
                     settings: Optional[Dict] = None) -> FiniteGroup:
    """
    Valida uma tábua e constrói o FiniteGroup.

    Associatividade é verificada em todas as triplas até settings['assoc_full_check']
    e por amostragem (numpy, semente fixa) acima disso.

    Raises:
        IccKitError: tábua que não define um grupo
    """
    settings = {**DEFAULT_SETTINGS, **(settings or {})}
    table = tuple(tuple(int(x) for x in row) for row in table)
    order = len(table)
    if order == 0:
        raise IccKitError("Tábua vazia")
    if any(len(row) != order for row in table):
        raise IccKitError("Tábua de multiplicação não é quadrada")
    if any(not 0 <= x < order for row in table for x in row):
        raise IccKitError("Tábua com índice fora do intervalo")

    identity = next(
        (e for e in range(order) if all(table[e][x] == x and table[x][e] == x for x in range(order))),
        None,
    )
    if identity is None:
        raise IccKitError("Tábua sem elemento identidade")

    inverses = []
    for a in range(order):
        inv = next((b for b in range(order) if table[a][b] == identity and table[b][a] == identity), None)
        if inv is None:
            raise IccKitError(f"Elemento {a} sem inverso")
        inverses.append(inv)

    if order <= settings["assoc_full_check"]:
        triples = itertools.product(range(order), repeat=3)
    else:
        rng = np.random.default_rng(0)
        triples = (tuple(int(v) for v in row) for row in rng.integers(0, order, size=(settings["assoc_samples"], 3)))
    for a, b, c in triples:
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise IccKitError(f"Tábua não associativa em ({a}, {b}, {c})")

    gens = tuple(generators) if generators is not None else _generating_set(table, identity)
    if _closure(table, identity, gens) != frozenset(range(order)):
        raise IccKitError("Os geradores informados não geram o grupo")
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(order))
    if len(labels) != order:
        raise IccKitError("Quantidade de rótulos diferente da ordem")
    names = tuple(generator_names) if generator_names else tuple(f"g{i}" for i in range(len(gens)))
    if len(names) != len(gens):
        raise IccKitError("Quantidade de nomes diferente da quantidade de geradores")

    return FiniteGroup(table, identity, tuple(inverses), gens, labels, name, names)


def _permutation_label(p: Permutation) -> str:
    return "".join("(" + " ".join(str(i) for i in cycle) + ")" for cycle in p.cyclic_form) or "()"


def group_from_permutations(perms: Sequence[Sequence[int]], name: str = "",
                            generator_names: Optional[Sequence[str]] = None) -> FiniteGroup:
    """
    Constrói a tábua a partir de geradores em forma de lista (array form, base 0).

    Exemplo de uso:
        s3 = group_from_permutations([[1, 0, 2], [1, 2, 0]], name="S3")
    """
    degree = max((len(p) for p in perms), default=1)
    generators = [Permutation(list(p), size=degree) for p in perms]
    if not generators:
        generators = [Permutation(list(range(degree)))]
    return _from_permutation_group(PermutationGroup(generators), generators, name, generator_names)


def _from_permutation_group(G: PermutationGroup, generators: Sequence[Permutation], name: str,
                            generator_names: Optional[Sequence[str]] = None) -> FiniteGroup:
    elements = sorted(G.generate(), key=lambda p: (p.array_form != list(range(p.size)), p.array_form))
    index = {tuple(p.array_form): i for i, p in enumerate(elements)}
    table = [[index[tuple((a * b).array_form)] for b in elements] for a in elements]
    gens = tuple(index[tuple(g.array_form)] for g in generators)
    return group_from_table(
        table,
        labels=[_permutation_label(p) for p in elements],
        generators=gens,
        name=name,
        generator_names=generator_names,
    )


def cyclic_group(n: int) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return group_from_table(table, generators=[1 % n] if n > 1 else [], name=f"Z{n}",
                            generator_names=["g"] if n > 1 else [])


def symmetric_group(n: int) -> FiniteGroup:
    G = SymmetricGroup(n)
    return _from_permutation_group(G, G.generators, f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    G = AlternatingGroup(n)
    return _from_permutation_group(G, G.generators, f"A{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Grupo diedral de ordem 2n."""
    G = DihedralGroup(n)
    return _from_permutation_group(G, G.generators, f"D{n}")


def quaternion_group() -> FiniteGroup:
    # elementos ±1, ±i, ±j, ±k como (sinal, unidade) com unidade em 1, i, j, k
    units = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elements = [(s, u) for u in ("1", "i", "j", "k") for s in (1, -1)]
    index = {e: i for i, e in enumerate(elements)}
    table = []
    for s1, u1 in elements:
        row = []
        for s2, u2 in elements:
            s, u = units[(u1, u2)]
            row.append(index[(s * s1 * s2, u)])
        table.append(row)
    labels = [("" if s > 0 else "-") + u for s, u in elements]
    return group_from_table(table, labels=labels, generators=[index[(1, "i")], index[(1, "j")]],
                            name="Q8", generator_names=["i", "j"])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    pairs = [(a, b) for a in G.elements for b in H.elements]
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(G.mul(a1, a2), H.mul(b1, b2))] for (a2, b2) in pairs] for (a1, b1) in pairs]
    gens = [index[(g, H.identity)] for g in G.generators] + [index[(G.identity, h)] for h in H.generators]
    names = [f"{n}_0" for n in G.generator_names] + [f"{n}_1" for n in H.generator_names]
    return group_from_table(
        table,
        labels=[f"({G.label(a)},{H.label(b)})" for a, b in pairs],
        generators=gens,
        name=f"{G.name}x{H.name}",
        generator_names=names,
    )


def klein_four_group() -> FiniteGroup:
    V = direct_product(cyclic_group(2), cyclic_group(2))
    return FiniteGroup(V.table, V.identity, V.inverses, V.generators, V.labels, "V4", V.generator_names)


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


NAMED_GROUPS: Dict[str, Callable[[], FiniteGroup]] = {
    "1": trivial_group,
    "Q8": quaternion_group,
    "V4": klein_four_group,
}


def named_group(name: str) -> FiniteGroup:
    """
    Grupos pelo nome: Zn, Sn, An, Dn (ordem 2n), Q8, V4.

    Exemplo de uso:
        named_group("S3").order  # 6
    """
    if name in NAMED_GROUPS:
        return NAMED_GROUPS[name]()
    match = re.fullmatch(r"([ZSAD])(\d+)", name)
    if not match:
        raise UnsupportedDescriptorError(f"Grupo nomeado desconhecido: {name}")
    family, n = match.group(1), int(match.group(2))
    builders = {"Z": cyclic_group, "S": symmetric_group, "A": alternating_group, "D": dihedral_group}
    if n < 1 or (family == "D" and n < 2):
        raise UnsupportedDescriptorError(f"Parâmetro inválido para grupo nomeado: {name}")
    return builders[family](n)


# ----------------------------------------------------------------------
# Subgrupos, classes, centro, core
# ----------------------------------------------------------------------
def is_subgroup(G: FiniteGroup, H: Iterable[int]) -> bool:
    H = frozenset(H)
    return G.identity in H and all(G.mul(a, G.inv(b)) in H for a in H for b in H)


def require_subgroup(G: FiniteGroup, H: Iterable[int], what: str = "H") -> Subgroup:
    H = frozenset(H)
    if any(not 0 <= x < G.order for x in H) or not is_subgroup(G, H):
        raise InvalidSubgroupError(f"{what} não é subgrupo de {G}")
    return H


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return _closure(G.table, G.identity, list(gens))


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    return all(G.conj(g, h) in H for g in G.generators for h in H)


def fin_conjugacy_classes(G: FiniteGroup) -> List[Subgroup]:
    """Partição de G em classes de conjugação, ordenadas pelo menor representante."""
    classes: List[Subgroup] = []
    assigned = set()
    for x in G.elements:
        if x in assigned:
            continue
        cls = frozenset(G.conj(g, x) for g in G.elements)
        assigned |= cls
        classes.append(cls)
    return classes


def fin_center(G: FiniteGroup) -> Subgroup:
    return frozenset(z for z in G.elements if all(G.mul(z, g) == G.mul(g, z) for g in G.generators))


def fin_core(G: FiniteGroup, H: Iterable[int]) -> Subgroup:
    """
    Core de H em G: interseção dos conjugados gHg⁻¹, o maior normal de G contido em H.

    Raises:
        InvalidSubgroupError: H não é subgrupo
    """
    H = require_subgroup(G, H)
    core = set(H)
    for g in G.elements:
        core &= {G.conj(g, h) for h in H}
    return frozenset(core)


def fin_normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    """Menor subgrupo normal de G contendo S."""
    gens = set(S)
    while True:
        N = subgroup_generated(G, gens)
        conjugates = {G.conj(g, x) for g in G.generators for x in N}
        if conjugates <= N:
            return N
        gens |= conjugates


def fin_is_simple(G: FiniteGroup) -> bool:
    if G.order == 1:
        return False
    full = frozenset(G.elements)
    return all(fin_normal_closure(G, [x]) == full for x in G.elements if x != G.identity)


# ----------------------------------------------------------------------
# Homomorfismos e automorfismos
# ----------------------------------------------------------------------
def extend_homomorphism(source: FiniteGroup, target: FiniteGroup, images: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """
    Estende imagens dos geradores de source a um homomorfismo source -> target.

    Percorre o grafo de Cayley em largura definindo f(x·g) = f(x)·img(g); uma
    aresta que chega a um vértice já definido com valor diferente prova que as
    imagens não respeitam as relações.

    Returns:
        Optional[Tuple[int, ...]]: f como tupla indexada por elemento, ou None
    """
    if len(images) != len(source.generators):
        raise InvalidHomomorphismError(
            f"{len(images)} imagens para {len(source.generators)} geradores de {source}"
        )
    mapping: Dict[int, int] = {source.identity: target.identity}
    queue = deque([source.identity])
    while queue:
        x = queue.popleft()
        for g, img in zip(source.generators, images):
            y = source.mul(x, g)
            value = target.mul(mapping[x], img)
            if y not in mapping:
                mapping[y] = value
                queue.append(y)
            elif mapping[y] != value:
                return None
    return tuple(mapping[x] for x in source.elements)


def is_automorphism(G: FiniteGroup, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(G.elements):
        return False
    return all(perm[G.mul(a, b)] == G.mul(perm[a], perm[b]) for a in G.elements for b in G.generators)


def compose(alpha: Automorphism, beta: Automorphism) -> Automorphism:
    """(alpha ∘ beta)(x) = alpha(beta(x))"""
    return tuple(alpha[beta[x]] for x in range(len(beta)))


def inner_automorphism(G: FiniteGroup, k: int) -> Automorphism:
    return tuple(G.conj(k, x) for x in G.elements)


def inner_conjugator(G: FiniteGroup, alpha: Sequence[int]) -> Optional[int]:
    """Algum k com alpha = conjugação por k, ou None se alpha não é interno."""
    alpha = tuple(alpha)
    return next((k for k in G.elements if all(G.conj(k, x) == alpha[x] for x in G.generators)), None)


@dataclass(frozen=True)
class AutomorphismGroup:
    """Aut(G) como grupo finito; a entrada i da tábua corresponde a automorphisms[i]."""

    source: FiniteGroup
    group: FiniteGroup
    automorphisms: Tuple[Automorphism, ...]
    inner: FrozenSet[int]

    @property
    def order(self) -> int:
        return self.group.order

    def index_of(self, alpha: Sequence[int]) -> int:
        return self.automorphisms.index(tuple(alpha))


def fin_aut_group(G: FiniteGroup, cap: Optional[int] = None) -> AutomorphismGroup:
    """
    Aut(G) por força bruta sobre as imagens dos geradores.

    Args:
        G (FiniteGroup): grupo de ordem <= cap
        cap (int, optional): padrão settings['aut_cap']

    Raises:
        AutCapExceededError: ordem acima do limite
    """
    cap = DEFAULT_SETTINGS["aut_cap"] if cap is None else cap
    if G.order > cap:
        raise AutCapExceededError(f"|G| = {G.order} acima do limite {cap} para Aut por força bruta")

    orders = [G.element_order(g) for g in G.generators]
    candidates = [[x for x in G.elements if G.element_order(x) == o] for o in orders]
    automorphisms = []
    for images in itertools.product(*candidates):
        f = extend_homomorphism(G, G, images)
        if f is not None and len(set(f)) == G.order:
            automorphisms.append(f)
    automorphisms.sort(key=lambda f: (f != tuple(G.elements), f))

    index = {f: i for i, f in enumerate(automorphisms)}
    table = [[index[compose(a, b)] for b in automorphisms] for a in automorphisms]
    inner = frozenset(index[inner_automorphism(G, k)] for k in G.elements)
    labels = [f"aut{i}" for i in range(len(automorphisms))]
    aut = group_from_table(table, labels=labels, name=f"Aut({G})")
    logger.debug(f"Aut({G}) tem ordem {aut.order}, {len(inner)} internos")
    return AutomorphismGroup(G, aut, tuple(automorphisms), inner)


def extend_action(Q: FiniteGroup, K: FiniteGroup, generator_automorphisms: Sequence[Sequence[int]]) -> Dict[int, Automorphism]:
    """
    Estende θ dos geradores de Q a todo Q, θ(x·g) = θ(x) ∘ θ(g).

    Raises:
        InvalidHomomorphismError: imagem que não é automorfismo ou relação de Q violada
    """
    auts = [tuple(a) for a in generator_automorphisms]
    if len(auts) != len(Q.generators):
        raise InvalidHomomorphismError(f"{len(auts)} automorfismos para {len(Q.generators)} geradores de {Q}")
    for i, alpha in enumerate(auts):
        if not is_automorphism(K, alpha):
            raise InvalidHomomorphismError(f"Ação do gerador {i} não é automorfismo de {K}")

    identity = tuple(K.elements)
    theta: Dict[int, Automorphism] = {Q.identity: identity}
    queue = deque([Q.identity])
    while queue:
        x = queue.popleft()
        for g, alpha in zip(Q.generators, auts):
            y = Q.mul(x, g)
            value = compose(theta[x], alpha)
            if y not in theta:
                theta[y] = value
                queue.append(y)
            elif theta[y] != value:
                raise InvalidHomomorphismError(f"Ação não respeita as relações de {Q}")
    return theta


@dataclass(frozen=True)
class CouplingReport:
    injective: bool
    witness: Optional[int] = None
    conjugator: Optional[int] = None


def coupling_injective_finite(K: FiniteGroup, Q: FiniteGroup, theta: Sequence[Sequence[int]]) -> CouplingReport:
    """
    Decide se Θ: Q -> Out(K) é injetiva.

    Args:
        theta: automorfismo de K para cada gerador de Q

    Returns:
        CouplingReport: em caso negativo, q ≠ 1 e k com θ(q) = conjugação por k
    """
    action = extend_action(Q, K, theta)
    for q in Q.elements:
        if q == Q.identity:
            continue
        k = inner_conjugator(K, action[q])
        if k is not None:
            return CouplingReport(False, witness=q, conjugator=k)
    return CouplingReport(True)


def extend_partial_isomorphism(source: FiniteGroup, target: FiniteGroup,
                               pairs: Sequence[Tuple[int, int]]) -> Dict[int, int]:
    """
    Estende φ definido em geradores de C <= source a um isomorfismo C -> C' <= target.

    Raises:
        InvalidHomomorphismError: relações violadas ou φ não injetiva
    """
    mapping: Dict[int, int] = {source.identity: target.identity}
    queue = deque([source.identity])
    while queue:
        x = queue.popleft()
        for c, img in pairs:
            y = source.mul(x, c)
            value = target.mul(mapping[x], img)
            if y not in mapping:
                mapping[y] = value
                queue.append(y)
            elif mapping[y] != value:
                raise InvalidHomomorphismError("φ não respeita as relações de C")
    if len(set(mapping.values())) != len(mapping):
        raise InvalidHomomorphismError("φ não é injetiva")
    return mapping


# ----------------------------------------------------------------------
# Ponto fixo C̃
# ----------------------------------------------------------------------
def cbar_fixpoint(A: FiniteGroup, C: Iterable[int], C_prime: Iterable[int], phi: Dict[int, int],
                  B: Optional[FiniteGroup] = None) -> Subgroup:
    """
    Maior subgrupo da aresta normal no grupo todo.

    Modo HNN (B ausente): C, C' <= A, φ: C -> C'; itera
        C_{k+1} = core_A(C_k ∩ φ(C_k) ∩ φ⁻¹(C_k)) a partir de C ∩ C'.
    Modo amálgama: C <= A, C' <= B, φ: C -> C'; itera
        X_{k+1} = core_A(X_k) ∩ φ⁻¹(core_B(φ(X_k))) a partir de C.

    Returns:
        Subgroup: C̃ como conjunto de elementos de A
    """
    C = require_subgroup(A, C, "C")
    C_prime = require_subgroup(B if B is not None else A, C_prime, "C'")
    if frozenset(phi) != C or frozenset(phi.values()) != C_prime:
        raise InvalidHomomorphismError("φ não é uma bijeção C -> C'")
    inverse_phi = {v: k for k, v in phi.items()}

    if B is None:
        current = C & C_prime
        rounds = 0
        while True:
            image = {phi[x] for x in current if x in phi}
            preimage = {inverse_phi[x] for x in current if x in inverse_phi}
            nxt = fin_core(A, current & image & preimage)
            rounds += 1
            if nxt == current:
                logger.debug(f"C̃ (HNN) estabilizou após {rounds} rodadas com ordem {len(nxt)}")
                return nxt
            current = nxt

    current = C
    rounds = 0
    while True:
        image = frozenset(phi[x] for x in current)
        core_b = fin_core(B, image)
        nxt = fin_core(A, current) & frozenset(inverse_phi[y] for y in core_b)
        rounds += 1
        if nxt == current:
            logger.debug(f"C̃ (amálgama) estabilizou após {rounds} rodadas com ordem {len(nxt)}")
            return nxt
        current = nxt


# ----------------------------------------------------------------------
# Palavras
# ----------------------------------------------------------------------
Letter = Tuple[int, int]

_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?")


@dataclass(frozen=True)
class Word:
    """Palavra sobre um alfabeto de geradores; letras são (índice, ±1)."""

    alphabet: Tuple[str, ...]
    letters: Tuple[Letter, ...] = ()

    def __mul__(self, other: "Word") -> "Word":
        if self.alphabet != other.alphabet:
            raise WordSyntaxError("Produto de palavras sobre alfabetos diferentes")
        return Word(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.alphabet, tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def exponent_sum(self, generator: int) -> int:
        return sum(e for g, e in self.letters if g == generator)

    def syllables(self) -> List[Tuple[int, int]]:
        """Letras consecutivas do mesmo gerador somadas em (gerador, expoente)."""
        out: List[List[int]] = []
        for g, e in self.letters:
            if out and out[-1][0] == g:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([g, e])
        return [(g, e) for g, e in out]

    @classmethod
    def from_syllables(cls, alphabet: Sequence[str], syllables: Iterable[Tuple[int, int]]) -> "Word":
        letters = []
        for g, k in syllables:
            letters.extend([(g, 1 if k > 0 else -1)] * abs(k))
        return cls(tuple(alphabet), tuple(letters))

    def __str__(self) -> str:
        return format_word(self)


def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    """
    Lê a sintaxe `t*a^2*t^-1`; a string vazia e "1" são a identidade.

    Raises:
        WordSyntaxError: token mal formado ou gerador fora do alfabeto
    """
    alphabet = tuple(alphabet)
    text = (text or "").strip()
    if text in ("", "1"):
        return Word(alphabet)
    letters: List[Letter] = []
    for token in text.split("*"):
        token = token.strip()
        match = _TOKEN.fullmatch(token)
        if not match:
            raise WordSyntaxError(f"Token inválido '{token}' em '{text}'")
        name, exponent = match.group(1), int(match.group(2) or 1)
        if name not in alphabet:
            raise WordSyntaxError(f"Gerador '{name}' fora do alfabeto {list(alphabet)}")
        g = alphabet.index(name)
        letters.extend([(g, 1 if exponent > 0 else -1)] * abs(exponent))
    return Word(alphabet, tuple(letters))


def element_word(G: FiniteGroup, x: int, alphabet: Optional[Sequence[str]] = None) -> Word:
    """Palavra positiva mais curta nos geradores de G que representa x."""
    alphabet = tuple(alphabet) if alphabet is not None else G.generator_names
    words: Dict[int, Tuple[Letter, ...]] = {G.identity: ()}
    queue = deque([G.identity])
    while queue and x not in words:
        y = queue.popleft()
        for i, g in enumerate(G.generators):
            z = G.mul(y, g)
            if z not in words:
                words[z] = words[y] + ((i, 1),)
                queue.append(z)
    return Word(alphabet, words[x])


def evaluate_word(G: FiniteGroup, word: Word) -> int:
    """Elemento de G representado por uma palavra no alfabeto dos geradores."""
    result = G.identity
    for i, e in word.letters:
        g = G.generators[i]
        result = G.mul(result, g if e > 0 else G.inv(g))
    return result


def format_word(word: Word) -> str:
    parts = []
    for g, k in word.syllables():
        name = word.alphabet[g]
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts) or "1"


def free_reduce(word: Word) -> Word:
    """Remove pares adjacentes x·x⁻¹ até não restar nenhum."""
    stack: List[Letter] = []
    for g, e in word.letters:
        if stack and stack[-1] == (g, -e):
            stack.pop()
        else:
            stack.append((g, e))
    return Word(word.alphabet, tuple(stack))


# ----------------------------------------------------------------------
# Baumslag–Solitar: t·a^m·t⁻¹ = a^n
# ----------------------------------------------------------------------
BS_ALPHABET = ("a", "t")
_A, _T = 0, 1


def _bs_syllables(m: int, n: int, syllables: Iterable[Tuple[int, int]]) -> List[List[int]]:
    """Pilha de sílabas ('a', k) / ('t', ±1) sem pinças."""
    if m == 0 or n == 0:
        raise IccKitError("BS(m,n) exige m, n não nulos")
    stack: List[List[int]] = []

    def push_a(k: int):
        if k == 0:
            return
        if stack and stack[-1][0] == _A:
            stack[-1][1] += k
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([_A, k])

    for gen, k in syllables:
        if gen == _A:
            push_a(k)
            continue
        for _ in range(abs(k)):
            eps = 1 if k > 0 else -1
            if stack and stack[-1] == [_T, -eps]:
                stack.pop()
                continue
            if len(stack) >= 2 and stack[-1][0] == _A and stack[-2] == [_T, -eps]:
                power = stack[-1][1]
                # t·a^k·t⁻¹ com m | k  e  t⁻¹·a^k·t com n | k
                divisor, multiplier = (m, n) if eps == -1 else (n, m)
                if power % divisor == 0:
                    stack.pop()
                    stack.pop()
                    push_a(power // divisor * multiplier)
                    continue
            stack.append([_T, eps])
    return stack


def britton_reduce(m: int, n: int, word: Word) -> Word:
    """
    Forma Britton-reduzida de uma palavra em BS(m,n) = <a, t | t a^m t⁻¹ = a^n>.

    Exemplo de uso:
        britton_reduce(2, 3, parse_word("t*a^2*t^-1", BS_ALPHABET))  # a^3
    """
    stack = _bs_syllables(m, n, word.syllables())
    return Word.from_syllables(word.alphabet, [(g, k) for g, k in stack])


def bs_normal_form(m: int, n: int, word: Word) -> Tuple[int, ...]:
    """
    Forma normal única (r0, ε1, r1, ..., εp, k): a^r0 t^ε1 a^r1 ··· t^εp a^k.

    Antes de t, r está em [0, |n|); antes de t⁻¹, r está em [0, |m|).
    """
    return bs_normal_form_from_syllables(m, n, word.syllables())


def bs_normal_form_from_syllables(m: int, n: int, syllables: Iterable[Tuple[int, int]]) -> Tuple[int, ...]:
    stack = _bs_syllables(m, n, syllables)
    out: List[int] = []
    carry = 0
    for gen, k in stack:
        if gen == _A:
            carry += k
            continue
        if k == 1:
            # a^{qn} t = t a^{qm}
            r = carry % abs(n)
            q = (carry - r) // n
            out.extend([r, 1])
            carry = q * m
        else:
            # a^{qm} t⁻¹ = t⁻¹ a^{qn}
            r = carry % abs(m)
            q = (carry - r) // m
            out.extend([r, -1])
            carry = q * n
    out.append(carry)
    return tuple(out)


def bs_syllables_of(normal_form: Sequence[int]) -> List[Tuple[int, int]]:
    syllables = []
    for i, value in enumerate(normal_form):
        if i % 2 == 0:
            if value:
                syllables.append((_A, value))
        else:
            syllables.append((_T, value))
    return syllables


# ----------------------------------------------------------------------
# FC(Q) para quocientes do catálogo
# ----------------------------------------------------------------------
class FcKind(str, Enum):
    WHOLE = "whole"
    TRIVIAL = "trivial"
    PRODUCT = "product"


@dataclass(frozen=True)
class FcSubgroup:
    """
    FC(Q) descrito pelos geradores de Q que o geram (índices no alfabeto de Q).

    Para produtos diretos, parts guarda o FC de cada fator.
    """

    kind: FcKind
    generator_indices: Tuple[int, ...] = ()
    is_infinite: bool = False
    description: str = ""
    parts: Tuple["FcSubgroup", ...] = field(default_factory=tuple)

    @property
    def is_trivial(self) -> bool:
        return self.kind == FcKind.TRIVIAL


def generator_count(desc: GroupDesc) -> int:
    if isinstance(desc, Finite):
        return len(desc.group.generators)
    if isinstance(desc, (FreeAbelian, Free)):
        return desc.rank
    if isinstance(desc, DirectProduct):
        return sum(generator_count(f) for f in desc.factors)
    if isinstance(desc, Declared):
        return len(desc.generators)
    raise UnsupportedDescriptorError(f"Contagem de geradores indisponível para {type(desc).__name__}")


def fc_of_group(Q: GroupDesc) -> FcSubgroup:
    """
    FC(Q) calculado estruturalmente.

    Finito e abeliano livre: Q todo. Livre de posto >= 2: trivial.
    Produto direto: produto dos FCs. Declarado: conforme a declaração.

    Raises:
        UnsupportedDescriptorError: descritor fora do catálogo
    """
    if isinstance(Q, Finite):
        gens = tuple(range(len(Q.group.generators)))
        kind = FcKind.WHOLE if Q.group.order > 1 else FcKind.TRIVIAL
        return FcSubgroup(kind, gens if kind == FcKind.WHOLE else (), False, f"FC({Q.group}) = {Q.group}")
    if isinstance(Q, FreeAbelian):
        if Q.rank == 0:
            return FcSubgroup(FcKind.TRIVIAL, (), False, "grupo trivial")
        return FcSubgroup(FcKind.WHOLE, tuple(range(Q.rank)), True, f"FC(Z^{Q.rank}) = Z^{Q.rank}")
    if isinstance(Q, Free):
        if Q.rank == 1:
            return FcSubgroup(FcKind.WHOLE, (0,), True, "FC(Z) = Z")
        return FcSubgroup(FcKind.TRIVIAL, (), False, f"FC(F{Q.rank}) = 1")
    if isinstance(Q, DirectProduct):
        parts = tuple(fc_of_group(f) for f in Q.factors)
        offset, gens = 0, []
        for factor, part in zip(Q.factors, parts):
            gens.extend(offset + i for i in part.generator_indices)
            offset += generator_count(factor)
        if all(p.kind == FcKind.TRIVIAL for p in parts):
            kind = FcKind.TRIVIAL
        elif all(p.kind == FcKind.WHOLE for p in parts):
            kind = FcKind.WHOLE
        else:
            kind = FcKind.PRODUCT
        return FcSubgroup(kind, tuple(gens), any(p.is_infinite for p in parts),
                          " × ".join(p.description for p in parts), parts)
    if isinstance(Q, Declared):
        if Q.icc or Q.fc == "trivial":
            return FcSubgroup(FcKind.TRIVIAL, (), False, f"FC({Q.name or 'Q'}) = 1 (declarado)")
        if Q.fc == "whole":
            return FcSubgroup(FcKind.WHOLE, tuple(range(len(Q.generators))), bool(Q.infinite),
                              f"FC({Q.name or 'Q'}) = {Q.name or 'Q'} (declarado)")
        raise UnsupportedDescriptorError(f"FC de {Q.name or 'grupo declarado'} não foi declarado")
    raise UnsupportedDescriptorError(f"FC(Q) não é calculável para {type(Q).__name__}")


# Exemplo de uso e testes
if __name__ == "__main__":
    s3 = symmetric_group(3)
    print(f"Classes de S3: {[len(c) for c in fin_conjugacy_classes(s3)]}")
    print(f"Aut(V4) tem ordem {fin_aut_group(klein_four_group()).order}")
    print(f"BS(2,3): t*a^2*t^-1 = {britton_reduce(2, 3, parse_word('t*a^2*t^-1', BS_ALPHABET))}")
