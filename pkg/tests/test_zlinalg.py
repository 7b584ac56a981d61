import itertools
import math

import numpy as np
import pytest

from icckit.errors import DimensionMismatchError, NotUnimodularError
from icckit.zlinalg import (
    IntMatrix,
    Lattice,
    Resolution,
    cyclotomic_exponent,
    fc_lattice,
    hermite_normal_form,
    integer_kernel,
    integer_solve,
    matrix_group_is_finite,
    matrix_order,
    periodic_sublattice,
    smith_normal_form,
    solve_linear_z,
)


def random_matrix(rng, rows, cols, bound):
    return IntMatrix.from_rows(rng.integers(-bound, bound + 1, size=(rows, cols)).tolist())


def test_smith_normal_form_property_suite():
    rng = np.random.default_rng(20240601)
    for _ in range(500):
        rows, cols = (int(x) for x in rng.integers(1, 7, size=2))
        M = random_matrix(rng, rows, cols, 9)
        snf = smith_normal_form(M)

        assert snf.U @ M @ snf.V == snf.D
        assert abs(snf.U.det()) == 1
        assert abs(snf.V.det()) == 1
        for i in range(rows):
            for j in range(cols):
                if i != j:
                    assert snf.D[i, j] == 0

        diagonal = snf.diagonal
        assert all(d >= 0 for d in diagonal)
        for a, b in zip(diagonal, diagonal[1:]):
            if a == 0:
                assert b == 0
            else:
                assert b % a == 0


def test_smith_normal_form_known_values():
    M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(M).diagonal == [2, 6, 12]
    assert smith_normal_form(IntMatrix.from_rows([[0, -3], [0, 0]])).diagonal == [3, 0]
    assert smith_normal_form(IntMatrix.zeros(2, 3)).rank == 0


def _brute_force_solutions(A: IntMatrix, b, bound: int = 20) -> bool:
    grid = np.array(list(itertools.product(range(-bound, bound + 1), repeat=A.cols)), dtype=np.int64)
    matrix = np.array(A.tolist(), dtype=np.int64)
    images = grid @ matrix.T
    return bool(np.any(np.all(images == np.array(b, dtype=np.int64), axis=1)))


def test_solve_linear_z_against_brute_force():
    rng = np.random.default_rng(11)
    found_none = 0
    for _ in range(40):
        A = random_matrix(rng, 3, 3, 4)
        b = tuple(int(x) for x in rng.integers(-6, 7, size=3))
        x = solve_linear_z(A, b)
        if x is None:
            found_none += 1
            assert not _brute_force_solutions(A, b)
        else:
            assert A.apply(x) == b
    assert found_none > 0


def test_solve_linear_z_always_finds_planted_solutions():
    rng = np.random.default_rng(5)
    for _ in range(100):
        A = random_matrix(rng, 3, 4, 5)
        planted = tuple(int(v) for v in rng.integers(-5, 6, size=4))
        b = A.apply(planted)
        x = solve_linear_z(A, b)
        assert x is not None
        assert A.apply(x) == b


def test_integer_solve_reports_failing_row():
    result = integer_solve(IntMatrix.diagonal([2, 2]), (1, 4))
    assert result.solution is None
    assert result.divisor == 2

    assert solve_linear_z(IntMatrix.diagonal([2, 2]), (2, 4)) == (1, 2)

    with pytest.raises(DimensionMismatchError):
        integer_solve(IntMatrix.identity(2), (1, 2, 3))


def test_cyclotomic_exponent_small_dimensions():
    assert cyclotomic_exponent(1) == 2
    assert cyclotomic_exponent(2) == 12


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 0], [0, 1]], 1),
        ([[-1, 0], [0, -1]], 2),
        ([[0, -1], [1, 0]], 4),
        ([[0, -1], [1, -1]], 3),
        ([[1, -1], [1, 0]], 6),
        ([[1, 1], [0, 1]], None),
        ([[2, 1], [1, 1]], None),
    ],
)
def test_matrix_order(rows, expected):
    assert matrix_order(IntMatrix.from_rows(rows)) == expected


def test_matrix_order_rejects_non_unimodular():
    with pytest.raises(NotUnimodularError, match="non-unimodular"):
        matrix_order(IntMatrix.from_rows([[2, 0], [0, 1]]))


@pytest.mark.parametrize(
    "generators, finite, order",
    [
        ([[[1, 0], [0, 1]]], True, 1),
        ([[[-1, 0], [0, -1]]], True, 2),
        ([[[0, -1], [1, 0]]], True, 4),
        ([[[1, 1], [0, 1]]], False, None),
        ([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], False, None),
        ([[[2, 1], [1, 1]]], False, None),
        ([[[0, -1], [1, 0]], [[0, 1], [1, 0]]], True, 8),
    ],
)
def test_matrix_group_is_finite(generators, finite, order):
    verdict = matrix_group_is_finite([IntMatrix.from_rows(g) for g in generators])
    assert verdict.finite is finite
    assert verdict.order == order
    if not finite:
        assert verdict.witness_word is not None or verdict.closure_count is not None


def test_hermite_normal_form_spans_same_lattice():
    M = IntMatrix.from_rows([[2, 4], [3, 6], [1, 1]])
    H = hermite_normal_form(M)
    assert H.rows == 3 and H.cols == 2
    original = Lattice.from_generators(3, M.columns())
    reduced = Lattice.from_generators(3, H.columns())
    assert all(original.contains(c) for c in H.columns())
    assert all(reduced.contains(c) for c in M.columns())
    assert hermite_normal_form(H) == H


def test_lattice_operations():
    x_axis = Lattice.from_generators(2, [(1, 0), (3, 0)])
    y_axis = Lattice.from_generators(2, [(0, 2)])
    assert x_axis.rank == 1
    assert x_axis.contains((5, 0))
    assert not y_axis.contains((0, 1))
    assert x_axis.intersect(y_axis).is_zero
    assert Lattice.full(2).intersect(x_axis).rank == 1


def test_integer_kernel_is_saturated():
    kernel = integer_kernel(IntMatrix.from_rows([[2, 4]]))
    assert kernel.rank == 1
    assert kernel.contains((-2, 1))


def test_periodic_sublattice(m_phi):
    periodic = periodic_sublattice(m_phi)
    assert periodic.rank == 1
    assert periodic.contains((1, 0))
    assert not periodic.contains((0, 1))
    assert periodic_sublattice(IntMatrix.from_rows([[2, 1], [1, 1]])).is_zero


def test_fc_lattice_of_phi_and_psi_is_zero(m_phi, m_psi):
    lattice, resolution = fc_lattice([m_phi, m_psi])
    assert lattice.is_zero
    assert resolution == Resolution.RESOLVED


def test_fc_lattice_of_finite_action_is_full():
    lattice, resolution = fc_lattice([IntMatrix.from_rows([[0, 1], [1, 0]])])
    assert lattice.rank == 2
    assert resolution == Resolution.RESOLVED


def test_fc_lattice_of_unipotent_is_fixed_line(m_phi):
    lattice, resolution = fc_lattice([m_phi])
    assert lattice.rank == 1
    assert lattice.contains((1, 0))
    assert resolution == Resolution.RESOLVED


ELEMENTARY_2X2 = [
    IntMatrix.from_rows([[1, 1], [0, 1]]),
    IntMatrix.from_rows([[1, 0], [1, 1]]),
    IntMatrix.from_rows([[-1, 0], [0, -1]]),
    IntMatrix.from_rows([[0, 1], [1, 0]]),
    IntMatrix.from_rows([[-1, 0], [0, 1]]),
    IntMatrix.from_rows([[0, -1], [1, 0]]),
    IntMatrix.from_rows([[0, -1], [1, 1]]),
    IntMatrix.identity(2),
]


def orbit_is_finite(gens, v):
    # subgrupos finitos de GL(2,Z) têm ordem <= 12, logo órbitas finitas também
    letters = list(gens) + [g.inverse() for g in gens]
    seen, queue = {tuple(v)}, [tuple(v)]
    while queue:
        x = queue.pop()
        for g in letters:
            y = g.apply(x)
            if y not in seen:
                seen.add(y)
                if len(seen) > 12:
                    return False
                queue.append(y)
    return True


def test_fc_lattice_agrees_with_orbit_search():
    rng = np.random.default_rng(20240615)
    primitive = [v for v in itertools.product(range(-5, 6), repeat=2) if math.gcd(*v) == 1]
    for _ in range(30):
        gens = []
        for _ in range(int(rng.integers(1, 3))):
            M = IntMatrix.identity(2)
            for k in rng.integers(0, len(ELEMENTARY_2X2), size=int(rng.integers(1, 4))):
                M = M @ ELEMENTARY_2X2[int(k)]
            gens.append(M)

        lattice, resolution = fc_lattice(gens)
        for v in primitive:
            finite = orbit_is_finite(gens, v)
            if finite:
                assert lattice.contains(v)
            elif resolution == Resolution.RESOLVED:
                assert not lattice.contains(v)
        if resolution == Resolution.RESOLVED:
            assert all(orbit_is_finite(gens, b) for b in lattice.vectors())


def test_int_matrix_shape_checks():
    with pytest.raises(DimensionMismatchError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(DimensionMismatchError):
        IntMatrix.identity(2) @ IntMatrix.identity(3)
