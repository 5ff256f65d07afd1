"""Shuffle product, symmetrization and elementary products for ``A^±``."""

from __future__ import annotations

import itertools
from collections.abc import Sequence

from .rmatrix import (
    R_bar_sigma,
    R_ij,
    R_sigma,
    R_sigma_inverse,
    Rtilde_ij,
    permutation_compose,
)
from .tensor import MatRat, compose, embed

__all__ = [
    "shuffle_product",
    "shuffle_power",
    "symmetrize",
    "is_symmetric",
    "elementary_product",
    "shuffles",
    "bracket_orders",
]


def shuffles(k: int, l: int):
    """All ``(a, b)`` with ``a`` and ``b`` increasing and partitioning ``1..k+l``."""
    total = k + l
    for a in itertools.combinations(range(1, total + 1), k):
        aset = set(a)
        b = tuple(i for i in range(1, total + 1) if i not in aset)
        yield a, b


def bracket_orders(a: Sequence[int], b: Sequence[int]):
    """The three ordered lists of slot pairs in one summand of the product.

    Returns ``(left, middle, right)``; ``left`` and ``right`` hold the pairs
    with ``a_i < b_j`` (resp. ``a_i > b_j``) in the order ``i`` decreasing,
    ``j`` increasing, and ``middle`` runs over all pairs with ``i`` increasing
    and ``j`` decreasing.
    """
    k, l = len(a), len(b)
    left = [(a[i], b[j]) for i in reversed(range(k)) for j in range(l) if a[i] < b[j]]
    middle = [(a[i], b[j]) for i in range(k) for j in reversed(range(l))]
    right = [(a[i], b[j]) for i in reversed(range(k)) for j in range(l) if a[i] > b[j]]
    return left, middle, right


def _mult_all(acc: MatRat, mats) -> MatRat:
    for m in mats:
        acc = compose(acc, m)
    return acc


def shuffle_product(A: MatRat, B: MatRat, sign: int = 1) -> MatRat:
    """``A * B`` in ``A^{sign}``."""
    if A.n != B.n:
        raise ValueError("rank mismatch")
    n, k, l = A.n, A.k, B.k
    if k == 0:
        return B.scale(A.entry((), ()))
    if l == 0:
        return A.scale(B.entry((), ()))
    N = k + l
    total = MatRat.zero(n, N)
    for a, b in shuffles(k, l):
        left, middle, right = bracket_orders(a, b)
        term = MatRat.identity(n, N)
        term = _mult_all(term, (R_ij(n, i, j, N) for i, j in left))
        term = compose(term, embed(A, a, N))
        term = _mult_all(term, (Rtilde_ij(n, i, j, N, sign) for i, j in middle))
        term = compose(term, embed(B, b, N))
        term = _mult_all(term, (R_ij(n, i, j, N) for i, j in right))
        total = total + term
    return total


def shuffle_power(factors: Sequence[MatRat], sign: int = 1) -> MatRat:
    """Left-to-right iterated product ``X_1 * X_2 * ... * X_m``."""
    acc = factors[0]
    for X in factors[1:]:
        acc = shuffle_product(acc, X, sign)
    return acc


def symmetrize(X: MatRat) -> MatRat:
    """``sum_σ R_σ · σ X σ^{-1} · R_σ^{-1}``."""
    n, k = X.n, X.k
    total = MatRat.zero(n, k)
    for perm in itertools.permutations(range(1, k + 1)):
        term = compose(compose(R_sigma(n, perm), X.conjugate(perm)), R_sigma_inverse(n, perm))
        total = total + term
    return total


def _simple(k: int, i: int) -> tuple[int, ...]:
    p = list(range(1, k + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def is_symmetric(X: MatRat) -> bool:
    """Check ``R_{i,i+1}(z_i/z_{i+1}) · s_i X s_i = X · R_{i,i+1}(z_i/z_{i+1})`` for all ``i``."""
    n, k = X.n, X.k
    for i in range(1, k):
        Rs = R_ij(n, i, i + 1, k)
        if compose(Rs, X.conjugate(_simple(k, i))) != compose(X, Rs):
            return False
    return True


def _omega(k: int) -> tuple[int, ...]:
    return tuple(range(k, 0, -1))


def elementary_product(factors: Sequence[MatRat], sign: int = 1) -> MatRat:
    """``I_1 * ... * I_k`` for single-slot factors via the explicit ``S(k)`` sum."""
    k = len(factors)
    if k == 0:
        raise ValueError("need at least one factor")
    n = factors[0].n
    if any(I.k != 1 for I in factors):
        raise ValueError("elementary products take single-slot factors")
    if k == 1:
        return factors[0]
    omega = _omega(k)
    total = MatRat.zero(n, k)
    for perm in itertools.permutations(range(1, k + 1)):
        term = R_sigma(n, permutation_compose(perm, omega))
        for a in range(k):
            sa = perm[a]
            term = compose(term, embed(factors[a], (sa,), k))
            for b in range(a + 1, k):
                term = compose(term, Rtilde_ij(n, sa, perm[b], k, sign))
        term = compose(term, R_bar_sigma(n, perm))
        total = total + term
    return total
