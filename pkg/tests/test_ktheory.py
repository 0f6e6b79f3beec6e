from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from ultragraph.errors import NotEventuallyConstant
from ultragraph.ktheory import (
    EventuallyConstantVector, SymbolicIntMatrix, apply_symbolic, canonical_kernel_basis, determinant,
    graph_algebra_rank_obstruction, k_groups, kernel_basis, matmul, six_term_rank_report,
    smith_normal_form, symbolic_transpose_minus_identity, transpose_minus_identity,
    truncated_kernel_stabilization,
)
from ultragraph.symbolic import RowFamily, SymbolicMatrix


def diag(form):
    return list(form.diagonal)


def test_snf_examples():
    assert diag(smith_normal_form([[0]])) == [0]
    assert diag(smith_normal_form([[0, 1], [1, 0]])) == [1, 1]
    assert diag(smith_normal_form([[2, 0], [0, 4]])) == [2, 4]
    assert diag(smith_normal_form([[2, 0], [0, 3]])) == [1, 6]


def sympy_invariants(m):
    d = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    vals = [abs(int(d[i, i])) for i in range(min(d.shape))]
    nz = sorted(v for v in vals if v)
    return nz + [0] * (len(vals) - len(nz))


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_matches_sympy_and_verifies(m):
    f = smith_normal_form(m)
    assert matmul(matmul(f.U, m), f.V) == [list(r) for r in f.D]
    assert abs(determinant(f.U)) == 1 and abs(determinant(f.V)) == 1
    d = diag(f)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert d == sympy_invariants(m)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_kernel_basis_is_exact_and_full(m):
    basis = kernel_basis(m)
    for x in basis:
        assert all(sum(a * b for a, b in zip(row, x)) == 0 for row in m)
    assert len(basis) == len(sympy.Matrix(m).nullspace())


def test_k_groups_examples():
    assert k_groups([[1]]).describe() == ("Z", "Z")
    assert k_groups([[1, 1], [1, 1]]).describe() == ("0", "0")
    assert k_groups([[0, 1], [1, 0]]).describe() == ("Z", "Z")
    assert k_groups([[1, 1, 1], [1, 1, 1], [1, 1, 1]]).describe() == ("Z/2", "0")


def test_rank_nullity_and_permutation_invariance():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 6)
        a = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        kg = k_groups(a)
        rank = smith_normal_form(transpose_minus_identity(a)).rank
        assert kg.k1_free_rank + rank == n
        p = list(range(n))
        rng.shuffle(p)
        b = [[a[p[i]][p[j]] for j in range(n)] for i in range(n)]
        other = k_groups(b)
        assert (other.k0_invariant_factors, other.k0_free_rank, other.k1_free_rank) == \
            (kg.k0_invariant_factors, kg.k0_free_rank, kg.k1_free_rank)


def brute_truncated_kernel(a: SymbolicMatrix, size: int, margin: int) -> int:
    m = sympy.Matrix(transpose_minus_identity(a.truncate(size)))
    return len(m[:, : size - margin + 1].nullspace())


def test_stabilization_on_period3(period3):
    r = truncated_kernel_stabilization(period3, [12, 24, 36, 48])
    assert r.stabilized and r.rank == 2
    assert r.basis == ((-1, 1), (-1, 0, 1))
    assert r.margin == 4
    assert brute_truncated_kernel(period3, 24, r.margin) == 2


def test_stabilization_on_shift_matches_brute_force(shift):
    r = truncated_kernel_stabilization(shift, [12, 24, 36, 48])
    assert brute_truncated_kernel(shift, 12, r.margin) == 0
    assert r.stabilized and r.rank == 0 and r.basis == ()


def test_identity_pattern_does_not_stabilize():
    ident = SymbolicMatrix(0, (), (RowFamily(0, 0, (0,)),))
    r = truncated_kernel_stabilization(ident, [12, 24, 36, 48])
    assert r.status == "NotStabilized" and not r.stabilized
    assert [s.rank for s in r.steps] == [12 - r.margin + 1, 24 - r.margin + 1, 36 - r.margin + 1, 48 - r.margin + 1]


def test_canonical_basis_is_unique_for_a_lattice():
    assert canonical_kernel_basis([(0, 1, -1), (1, 0, -1)]) == canonical_kernel_basis([(1, 1, -2), (1, 0, -1)])


def test_apply_symbolic_generator_identities(period3):
    m = symbolic_transpose_minus_identity(period3)
    for i in range(1, 5):
        y = apply_symbolic(m, EventuallyConstantVector.delta(i + 3, 1))
        assert y == EventuallyConstantVector.delta(i, 1)
    y = apply_symbolic(m, EventuallyConstantVector.delta(1, 1))
    assert y == EventuallyConstantVector((0, 0, 0), 1, 1)
    assert [y[k] for k in range(1, 9)] == [0, 0, 0, 1, 1, 1, 1, 1]


def test_apply_symbolic_zero_and_errors(period3):
    zero = SymbolicIntMatrix(period3, True, 0, 0)
    y = apply_symbolic(zero, EventuallyConstantVector((1, 2, 3), 5, 1))
    assert y == EventuallyConstantVector((), 0, 1)
    with pytest.raises(NotEventuallyConstant):
        apply_symbolic(symbolic_transpose_minus_identity(period3), EventuallyConstantVector((), 1, 1))


def test_rank_obstruction():
    assert graph_algebra_rank_obstruction(0, 2) is False
    assert graph_algebra_rank_obstruction(1, 1) is True
    assert graph_algebra_rank_obstruction(3, 0) is True


def test_six_term_report_for_extension():
    rep = six_term_rank_report((0, 2), (1, 0))
    assert rep.rank_difference == 1 and rep.k0_less_than_k1
    assert rep.feasible == ((0, 1), (1, 2))
    assert not rep.graph_algebra_possible
