"""
Álgebra linear inteira exata

Este módulo concentra as contas sobre Z usadas pelos decisores:
- Forma normal de Smith com matrizes de transformação (U·M·V = D)
- Solução de sistemas lineares inteiros A·x = b com certificado
- Ordem de matrizes em GL(n,Z) e finitude de subgrupos finitamente gerados
- Reticulados em forma de Hermite, núcleo inteiro, interseção
- Sub-reticulado periódico de uma matriz e reticulado de órbitas finitas

Toda a aritmética é feita com inteiros de precisão arbitrária (int do Python
e sympy.Matrix); não há ponto flutuante em lugar nenhum.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, reduce
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import Matrix, divisors, eye, totient

from .errors import DimensionMismatchError, NotUnimodularError

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """
    Matriz inteira imutável, armazenada linha a linha.

    Usada como suporte das ações θ(q) ∈ GL(n,Z) e de todos os sistemas
    lineares inteiros do toolkit. É hashable, o que permite usá-la como
    chave nas buscas em largura por fechamentos de grupos.
    """

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"IntMatrix {self.rows}x{self.cols} requer {self.rows * self.cols} entradas, "
                f"recebeu {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    # ------------------------------------------------------------------
    # Construtores
    # ------------------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        if any(len(r) != n_cols for r in rows):
            raise DimensionMismatchError("Linhas com comprimentos diferentes")
        return cls(n_rows, n_cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        if any(len(c) != n_rows for c in columns):
            raise DimensionMismatchError("Colunas com comprimentos diferentes")
        return cls(n_rows, len(columns), tuple(columns[j][i] for i in range(n_rows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_sympy(cls, m: Matrix) -> "IntMatrix":
        return cls(m.rows, m.cols, tuple(int(x) for x in m))

    def to_sympy(self) -> Matrix:
        return Matrix(self.rows, self.cols, list(self.entries))

    # ------------------------------------------------------------------
    # Acesso
    # ------------------------------------------------------------------
    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> List[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    @property
    def is_identity(self) -> bool:
        return self.is_square and self == IntMatrix.identity(self.rows)

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------
    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"Produto {self.rows}x{self.cols} por {other.rows}x{other.cols}"
            )
        other_cols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in other_cols)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vector: Sequence[int]) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatchError(
                f"Vetor de dimensão {len(vector)} para matriz {self.rows}x{self.cols}"
            )
        return tuple(sum(a * b for a, b in zip(self.row(i), vector)) for i in range(self.rows))

    def _check_same_shape(self, other: "IntMatrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(
                f"Formas diferentes: {self.rows}x{self.cols} e {other.rows}x{other.cols}"
            )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def det(self) -> int:
        if not self.is_square:
            raise DimensionMismatchError("Determinante de matriz não quadrada")
        if self.rows == 0:
            return 1
        return int(self.to_sympy().det(method="bareiss"))

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det()) == 1

    def inverse(self) -> "IntMatrix":
        """Inversa exata; só existe sobre Z para matrizes unimodulares."""
        if not self.is_unimodular():
            raise NotUnimodularError(f"Matriz com det {self.det() if self.is_square else '?'} não é invertível sobre Z")
        if self.rows == 0:
            return self
        return IntMatrix.from_sympy(self.to_sympy().inv())

    def power(self, k: int) -> "IntMatrix":
        """Potência por quadrados sucessivos; expoente negativo usa a inversa."""
        if not self.is_square:
            raise DimensionMismatchError("Potência de matriz não quadrada")
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = IntMatrix.identity(self.rows)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self) -> int:
        return sum(self[i, i] for i in range(min(self.rows, self.cols)))

    @staticmethod
    def hstack(blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        n_rows = blocks[0].rows
        if any(b.rows != n_rows for b in blocks):
            raise DimensionMismatchError("hstack com alturas diferentes")
        rows = [sum((list(b.row(i)) for b in blocks), []) for i in range(n_rows)]
        return IntMatrix(n_rows, sum(b.cols for b in blocks), tuple(x for r in rows for x in r))

    @staticmethod
    def vstack(blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        n_cols = blocks[0].cols
        if any(b.cols != n_cols for b in blocks):
            raise DimensionMismatchError("vstack com larguras diferentes")
        return IntMatrix(sum(b.rows for b in blocks), n_cols, tuple(x for b in blocks for x in b.entries))

    def __str__(self) -> str:
        return str(self.tolist())


def vec_add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(k: int, u: Sequence[int]) -> Vector:
    return tuple(k * a for a in u)


# ----------------------------------------------------------------------
# Forma normal de Smith
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class SmithDecomposition:
    """U·M·V = D, com U e V unimodulares e D diagonal com cadeia de divisibilidade."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _swap_rows(A: Matrix, U: Matrix, i: int, j: int):
    if i != j:
        A.row_swap(i, j)
        U.row_swap(i, j)


def _swap_cols(A: Matrix, V: Matrix, i: int, j: int):
    if i != j:
        A.col_swap(i, j)
        V.col_swap(i, j)


def _add_row(A: Matrix, U: Matrix, target: int, source: int, factor: int):
    # linha target += factor * linha source
    A.row_op(target, lambda val, col: val + factor * A[source, col])
    U.row_op(target, lambda val, col: val + factor * U[source, col])


def _add_col(A: Matrix, V: Matrix, target: int, source: int, factor: int):
    A.col_op(target, lambda val, row: val + factor * A[row, source])
    V.col_op(target, lambda val, row: val + factor * V[row, source])


def _smallest_nonzero(A: Matrix, positions: Iterable[Tuple[int, int]]) -> Optional[Tuple[int, int]]:
    best = None
    for i, j in positions:
        value = int(A[i, j])
        if value != 0 and (best is None or abs(value) < best[0]):
            best = (abs(value), i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """
    Calcula a forma normal de Smith de M com as matrizes de transformação.

    Args:
        M (IntMatrix): matriz inteira qualquer

    Returns:
        SmithDecomposition: U·M·V = D, |det U| = |det V| = 1,
        d_1 | d_2 | ... com d_i >= 0 e zeros no final
    """
    A = M.to_sympy()
    rows, cols = A.rows, A.cols
    U = eye(rows)
    V = eye(cols)

    for s in range(min(rows, cols)):
        block = [(i, j) for i in range(s, rows) for j in range(s, cols)]
        pivot = _smallest_nonzero(A, block)
        if pivot is None:
            break
        _swap_rows(A, U, s, pivot[0])
        _swap_cols(A, V, s, pivot[1])

        while True:
            dirty = False
            for i in range(s + 1, rows):
                if A[i, s] != 0:
                    _add_row(A, U, i, s, -(int(A[i, s]) // int(A[s, s])))
                    dirty = dirty or A[i, s] != 0
            for j in range(s + 1, cols):
                if A[s, j] != 0:
                    _add_col(A, V, j, s, -(int(A[s, j]) // int(A[s, s])))
                    dirty = dirty or A[s, j] != 0

            if dirty:
                # restos menores que o pivô: traz o menor deles para (s, s)
                edge = [(s, s)] + [(i, s) for i in range(s + 1, rows)] + [(s, j) for j in range(s + 1, cols)]
                i, j = _smallest_nonzero(A, edge)
                _swap_rows(A, U, s, i)
                _swap_cols(A, V, s, j)
                continue

            pivot_value = int(A[s, s])
            offender = next(
                (i for i in range(s + 1, rows) for j in range(s + 1, cols) if int(A[i, j]) % pivot_value != 0),
                None,
            )
            if offender is None:
                break
            # a linha s herda uma entrada não divisível; a próxima eliminação reduz o pivô
            _add_row(A, U, s, offender, 1)

        if A[s, s] < 0:
            A.row_op(s, lambda val, col: -val)
            U.row_op(s, lambda val, col: -val)

    return SmithDecomposition(U=IntMatrix.from_sympy(U), D=IntMatrix.from_sympy(A), V=IntMatrix.from_sympy(V))


# ----------------------------------------------------------------------
# Sistemas lineares inteiros
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class IntegerSolveResult:
    """
    Resultado de A·x = b sobre Z.

    Quando não há solução, failing_row aponta a linha de D·y = U·b que falha:
    ou d_i não divide a coordenada transformada, ou a linha é nula e o alvo não.
    """

    solution: Optional[Vector]
    transformed_target: Vector
    failing_row: Optional[int] = None
    divisor: Optional[int] = None


def integer_solve(A: IntMatrix, b: Sequence[int]) -> IntegerSolveResult:
    if len(b) != A.rows:
        raise DimensionMismatchError(f"Sistema {A.rows}x{A.cols} com alvo de dimensão {len(b)}")

    snf = smith_normal_form(A)
    target = snf.U.apply(tuple(b))
    diagonal = snf.diagonal
    y = [0] * A.cols

    for i in range(A.rows):
        d = diagonal[i] if i < len(diagonal) else 0
        if d == 0:
            if target[i] != 0:
                return IntegerSolveResult(None, target, failing_row=i, divisor=0)
        elif target[i] % d != 0:
            return IntegerSolveResult(None, target, failing_row=i, divisor=d)
        else:
            y[i] = target[i] // d

    return IntegerSolveResult(snf.V.apply(y), target)


def solve_linear_z(A: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """
    Resolve A·x = b em inteiros.

    Returns:
        Optional[Vector]: uma solução exata, ou None quando não existe solução inteira

    Exemplo de uso:
        solve_linear_z(IntMatrix.diagonal([2, 2]), (2, 4))  # -> (1, 2)
    """
    return integer_solve(A, b).solution


# ----------------------------------------------------------------------
# Ordem e finitude em GL(n,Z)
# ----------------------------------------------------------------------
@lru_cache(maxsize=None)
def cyclotomic_exponent(n: int) -> int:
    """
    L(n) = mmc dos m com φ(m) <= n.

    Toda raiz da unidade que é autovalor de uma matriz inteira n×n tem ordem m
    com φ(m) <= n; como φ(m) >= sqrt(m/2), basta varrer m <= 2n².
    """
    exps = [m for m in range(1, 2 * n * n + 3) if int(totient(m)) <= n]
    return reduce(math.lcm, exps, 1)


@lru_cache(maxsize=None)
def gl_order_mod3(n: int) -> int:
    """|GL(n, Z/3)|: cota para subgrupos finitos de GL(n,Z) (redução mod 3 é injetiva neles)."""
    return math.prod(3 ** n - 3 ** i for i in range(n))


def _require_unimodular(M: IntMatrix):
    if not M.is_square:
        raise DimensionMismatchError(f"Matriz {M.rows}x{M.cols} não é quadrada")
    if not M.is_unimodular():
        raise NotUnimodularError(f"non-unimodular: det = {M.det()}")


def matrix_order(M: IntMatrix) -> Optional[int]:
    """
    Ordem de M em GL(n,Z).

    M tem ordem finita se e só se M^L = I com L = cyclotomic_exponent(n); nesse
    caso a ordem é o menor divisor d de L com M^d = I.

    Returns:
        Optional[int]: a ordem, ou None quando a ordem é infinita
    """
    _require_unimodular(M)
    n = M.rows
    identity = IntMatrix.identity(n)
    if M == identity:
        return 1
    # traço de matriz de ordem finita é soma de n raízes da unidade
    if abs(M.trace()) > n:
        return None
    L = cyclotomic_exponent(n)
    if M.power(L) != identity:
        return None
    return next(d for d in divisors(L) if M.power(int(d)) == identity)


@dataclass(frozen=True)
class FinitenessVerdict:
    """
    Veredito de finitude para o subgrupo gerado por matrizes.

    Finito: elements é o fechamento completo e order = |elements|.
    Infinito: witness_word (índices de geradores) tem ordem infinita, ou
    closure_count ultrapassou bound = |GL(n,Z/3)|.
    """

    finite: bool
    bound: int
    order: Optional[int] = None
    elements: FrozenSet[IntMatrix] = frozenset()
    witness_word: Optional[Tuple[int, ...]] = None
    closure_count: Optional[int] = None


def _check_generators(gens: Sequence[IntMatrix]) -> int:
    if not gens:
        return 0
    n = gens[0].rows
    for g in gens:
        if not g.is_square or g.rows != n:
            raise DimensionMismatchError("Geradores com dimensões diferentes")
        _require_unimodular(g)
    return n


def matrix_group_is_finite(gens: Sequence[IntMatrix], dimension: Optional[int] = None) -> FinitenessVerdict:
    """
    Decide se <gens> ⊂ GL(n,Z) é finito por fechamento em largura.

    Args:
        gens (List[IntMatrix]): geradores n×n unimodulares
        dimension (int, optional): n quando a lista é vazia

    Returns:
        FinitenessVerdict: com o fechamento (finito) ou uma testemunha (infinito)
    """
    n = _check_generators(gens) if gens else (dimension or 0)
    bound = gl_order_mod3(n)
    identity = IntMatrix.identity(n)

    for index, g in enumerate(gens):
        if matrix_order(g) is None:
            logger.debug(f"Gerador {index} tem ordem infinita")
            return FinitenessVerdict(False, bound, witness_word=(index,))

    words: Dict[IntMatrix, Tuple[int, ...]] = {identity: ()}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for X in frontier:
            for index, g in enumerate(gens):
                Y = X @ g
                if Y in words:
                    continue
                word = words[X] + (index,)
                if matrix_order(Y) is None:
                    return FinitenessVerdict(False, bound, witness_word=word)
                words[Y] = word
                next_frontier.append(Y)
                if len(words) > bound:
                    return FinitenessVerdict(False, bound, closure_count=len(words))
        frontier = next_frontier

    return FinitenessVerdict(True, bound, order=len(words), elements=frozenset(words))


def word_matrix(gens: Sequence[IntMatrix], word: Sequence[int], dimension: Optional[int] = None) -> IntMatrix:
    """Produto gens[w_0]·gens[w_1]···, na ordem da palavra."""
    n = gens[0].rows if gens else (dimension or 0)
    result = IntMatrix.identity(n)
    for index in word:
        result = result @ gens[index]
    return result


# ----------------------------------------------------------------------
# Reticulados
# ----------------------------------------------------------------------
def _row_hermite(rows: List[List[int]], width: int) -> List[List[int]]:
    """Forma de Hermite por linhas: pivôs positivos, entradas acima reduzidas em [0, pivô)."""
    A = [list(r) for r in rows if any(r)]
    top = 0
    for col in range(width):
        if top == len(A):
            break
        while True:
            candidates = [i for i in range(top, len(A)) if A[i][col] != 0]
            if not candidates:
                break
            best = min(candidates, key=lambda i: abs(A[i][col]))
            A[top], A[best] = A[best], A[top]
            clean = True
            for i in range(top + 1, len(A)):
                if A[i][col] != 0:
                    q = A[i][col] // A[top][col]
                    A[i] = [a - q * p for a, p in zip(A[i], A[top])]
                    clean = clean and A[i][col] == 0
            if clean:
                break
        if A[top][col] == 0:
            continue
        if A[top][col] < 0:
            A[top] = [-a for a in A[top]]
        pivot = A[top][col]
        for i in range(top):
            q = A[i][col] // pivot
            if q:
                A[i] = [a - q * p for a, p in zip(A[i], A[top])]
        top += 1
    return A[:top]


def hermite_normal_form(M: IntMatrix) -> IntMatrix:
    """
    Forma de Hermite do reticulado gerado pelas colunas de M.

    Returns:
        IntMatrix: n × posto, colunas linearmente independentes; representante canônico
    """
    basis_rows = _row_hermite([list(c) for c in M.columns()], M.rows)
    return IntMatrix.from_columns(M.rows, basis_rows)


@dataclass(frozen=True)
class Lattice:
    """
    Sub-reticulado de Z^n dado por base em forma de Hermite (colunas).

    Como a forma é canônica, igualdade de reticulados é igualdade de dataclasses.
    """

    ambient_rank: int
    basis: IntMatrix

    @classmethod
    def from_generators(cls, ambient_rank: int, vectors: Iterable[Sequence[int]]) -> "Lattice":
        vectors = [tuple(v) for v in vectors]
        if any(len(v) != ambient_rank for v in vectors):
            raise DimensionMismatchError(f"Geradores fora de Z^{ambient_rank}")
        rows = _row_hermite([list(v) for v in vectors], ambient_rank)
        return cls(ambient_rank, IntMatrix.from_columns(ambient_rank, rows))

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls.from_generators(n, IntMatrix.identity(n).columns())

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, IntMatrix.zeros(n, 0))

    @property
    def rank(self) -> int:
        return self.basis.cols

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def vectors(self) -> List[Vector]:
        return self.basis.columns()

    def contains(self, v: Sequence[int]) -> bool:
        if self.is_zero:
            return not any(v)
        return solve_linear_z(self.basis, v) is not None

    def intersect(self, other: "Lattice") -> "Lattice":
        if self.ambient_rank != other.ambient_rank:
            raise DimensionMismatchError("Interseção de reticulados em ambientes diferentes")
        if self.is_zero or other.is_zero:
            return Lattice.zero(self.ambient_rank)
        # B1·x = B2·y  <=>  [B1 | -B2]·(x, y) = 0
        joint = IntMatrix.hstack([self.basis, -other.basis])
        kernel = integer_kernel(joint)
        k = self.rank
        generators = [self.basis.apply(v[:k]) for v in kernel.vectors()]
        return Lattice.from_generators(self.ambient_rank, generators)

    def is_fixed_by(self, M: IntMatrix) -> bool:
        """Todo vetor do reticulado é fixo por M."""
        return all(M.apply(v) == v for v in self.vectors())

    def is_invariant(self, M: IntMatrix) -> bool:
        return all(self.contains(M.apply(v)) for v in self.vectors())

    def restrict(self, M: IntMatrix) -> IntMatrix:
        """Matriz da ação induzida de M na base do reticulado (exige invariância)."""
        columns = []
        for v in self.vectors():
            coords = solve_linear_z(self.basis, M.apply(v))
            if coords is None:
                raise ValueError("Reticulado não é invariante pela matriz")
            columns.append(coords)
        return IntMatrix.from_columns(self.rank, columns)


def integer_kernel(A: IntMatrix) -> Lattice:
    """{x ∈ Z^n : A·x = 0}, sempre saturado (colunas finais de V na forma de Smith)."""
    snf = smith_normal_form(A)
    r = snf.rank
    return Lattice.from_generators(A.cols, [snf.V.col(j) for j in range(r, A.cols)])


def periodic_sublattice(M: IntMatrix) -> Lattice:
    """
    Vetores de órbita finita sob uma matriz unimodular: ker(M^L - I) ∩ Z^n.

    Exemplo de uso:
        periodic_sublattice(IntMatrix.from_rows([[1, 1], [0, 1]]))  # reta gerada por (1, 0)
    """
    _require_unimodular(M)
    n = M.rows
    L = cyclotomic_exponent(n)
    return integer_kernel(M.power(L) - IntMatrix.identity(n))


class Resolution(str, Enum):
    RESOLVED = "resolved"
    UNRESOLVED = "unresolved"


def fc_lattice(gens: Sequence[IntMatrix], word_cutoff: int = 8,
               dimension: Optional[int] = None) -> Tuple[Lattice, Resolution]:
    """
    Reticulado dos vetores de órbita finita sob o grupo gerado por gens.

    Refina W <- W ∩ periodic_sublattice(g) percorrendo palavras em largura até
    o comprimento word_cutoff. Sempre vale FC ⊆ W; quando W é invariante e a
    ação induzida é finita, W é exatamente o conjunto de órbitas finitas.

    Returns:
        Tuple[Lattice, Resolution]: o reticulado e se ele foi certificado
    """
    n = _check_generators(gens) if gens else (dimension or 0)
    W = Lattice.full(n)
    identity = IntMatrix.identity(n)
    L = cyclotomic_exponent(n)
    alphabet = list(gens) + [g.inverse() for g in gens]

    seen = {identity}
    frontier = [identity]
    for radius in range(word_cutoff + 1):
        for X in frontier:
            if W.is_zero:
                break
            if not W.is_fixed_by(X.power(L)):
                W = W.intersect(periodic_sublattice(X))
                logger.debug(f"fc_lattice: raio {radius}, posto de W caiu para {W.rank}")

        if W.is_zero:
            return W, Resolution.RESOLVED
        if all(W.is_invariant(g) for g in gens):
            induced = [W.restrict(g) for g in gens]
            if matrix_group_is_finite(induced, dimension=W.rank).finite:
                return W, Resolution.RESOLVED

        next_frontier = []
        for X in frontier:
            for a in alphabet:
                Y = X @ a
                if Y not in seen:
                    seen.add(Y)
                    next_frontier.append(Y)
        frontier = next_frontier
        if not frontier:
            break

    logger.warning(f"fc_lattice não resolvido até palavras de comprimento {word_cutoff}")
    return W, Resolution.UNRESOLVED


# Exemplo de uso e testes
if __name__ == "__main__":
    m_phi = IntMatrix.from_rows([[1, 1], [0, 1]])
    m_psi = IntMatrix.from_rows([[1, 0], [1, 1]])
    lattice, resolution = fc_lattice([m_phi, m_psi])
    print(f"FC lattice: posto {lattice.rank} ({resolution.value})")
    print(f"Smith de [[0,-3],[0,0]]: {smith_normal_form(IntMatrix.from_rows([[0, -3], [0, 0]])).diagonal}")
