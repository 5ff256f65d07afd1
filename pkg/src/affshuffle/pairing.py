"""The pairing between ``A^+`` and ``A^-``.

Both evaluation formulas take a trace of an explicit braid word against the
other argument, divide by ``prod_{i<j} f(z_i/z_j)`` and extract the iterated
residue at ``0`` in the order ``|z_1| << ... << |z_k|``.  Two conventions are
left open by the formulas and are fixed by :func:`calibrate`:

* ``K1``: whether the residue at ``0`` is the coefficient of ``z^{-1}``
  (``"residue"``) or the constant term, i.e. measure ``dz/z`` (``"constant"``).
* ``K2``: whether a minus-family generator of degree ``-[i;j)`` is built from
  ``E_ij``-type (``"E_ij"``) or ``E_ji``-type (``"E_ji"``) monomials.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from contextlib import contextmanager
from dataclasses import dataclass

from . import pbw
from .ring import ONE, ZERO, Rat, gen, q, residue_at_zero_in_region, rsum
from .rmatrix import R_omega, Rtilde_ij, f
from .shuffle import elementary_product
from .linalg import independent_subset, pole_clearing, solve_linear, vectorize
from .tensor import MatRat, compose, element_degree, embed, trace

__all__ = [
    "CONVENTION",
    "use_convention",
    "pair_right_elementary",
    "pair_left_elementary",
    "decompose_elementary",
    "pair_general",
    "nested_residue",
    "calibrate",
    "CalibrationError",
]

CONVENTION = {"K1": "constant", "K2": "E_ij"}


@contextmanager
def use_convention(K1: str | None = None, K2: str | None = None):
    """Temporarily switch the pairing knobs (and the matching generator knob)."""
    saved = dict(CONVENTION), dict(pbw.CONVENTION)
    try:
        if K1 is not None:
            CONVENTION["K1"] = K1
        if K2 is not None:
            CONVENTION["K2"] = K2
            pbw.CONVENTION["minus_label"] = K2
        pbw._F.cache_clear()
        yield
    finally:
        CONVENTION.clear()
        CONVENTION.update(saved[0])
        pbw.CONVENTION.clear()
        pbw.CONVENTION.update(saved[1])
        pbw._F.cache_clear()


def nested_residue(g: Rat, k: int, mode: str | None = None) -> Rat:
    """Iterated residue at 0, first in ``z_1``, then ``z_2``, ..., then ``z_k``."""
    mode = mode or CONVENTION["K1"]
    for a in range(1, k + 1):
        g = residue_at_zero_in_region(g, f"z{a}", mode)
        if not g:
            return ZERO
    return g


def _f_product(k: int) -> Rat:
    out = ONE
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            out = out * f(gen(f"z{i}") / gen(f"z{j}"))
    return out


def _braid_word(factors: Sequence[MatRat], sign: int) -> MatRat:
    """``R_ω prod_a [ I_a^{(a)}(z_a) prod_{b>a} R̃^±_{ab}(z_a/z_b) ]``."""
    k = len(factors)
    n = factors[0].n
    W = R_omega(n, k)
    for a in range(1, k + 1):
        W = compose(W, embed(factors[a - 1], (a,), k))
        for b in range(a + 1, k + 1):
            W = compose(W, Rtilde_ij(n, a, b, k, sign))
    return W


def _opposite(X: MatRat, factors: Sequence[MatRat]) -> bool:
    """True unless the degrees visibly fail to be opposite."""
    try:
        dx = element_degree(X)
        dj = element_degree(elementary_product_degree_proxy(factors))
    except ValueError:
        return True
    if dx is None or dj is None:
        return False
    return all(a + b == 0 for a, b in zip(dx.hdeg, dj.hdeg))


def elementary_product_degree_proxy(factors: Sequence[MatRat]) -> MatRat:
    """A tensor with the same degree as ``I_1 * ... * I_k`` (their plain tensor product)."""
    from .tensor import tensor

    acc = factors[0]
    for I in factors[1:]:
        acc = tensor(acc, I)
    return acc


def _pair(X: MatRat, factors: Sequence[MatRat], word_sign: int) -> Rat:
    k = X.k
    if len(factors) != k:
        return ZERO
    if k == 0:
        return X.entry((), ())
    if not _opposite(X, factors):
        return ZERO
    W = _braid_word(factors, word_sign)
    integrand = trace(compose(W, X)).entry((), ()) / _f_product(k)
    return (q ** 2 - 1) ** k * nested_residue(integrand, k)


def pair_right_elementary(X: MatRat, J: Sequence[MatRat]) -> Rat:
    """``<X, J_1 * ... * J_k>`` for ``X`` in ``A^+`` and single-slot ``J_a`` in ``A^-``."""
    return _pair(X, J, -1)


def pair_left_elementary(I: Sequence[MatRat], Y: MatRat) -> Rat:
    """``<I_1 * ... * I_k, Y>`` for single-slot ``I_a`` in ``A^+`` and ``Y`` in ``A^-``."""
    return _pair(Y, I, +1)


# ---------------------------------------------------------------------------
# Decomposition into elementary products
# ---------------------------------------------------------------------------


@dataclass
class Decomposition:
    terms: list[tuple[Rat, tuple[MatRat, ...]]]
    window: tuple[int, int]

    def assemble(self, sign: int) -> MatRat:
        if not self.terms:
            raise ValueError("empty decomposition has no arity")
        k = len(self.terms[0][1])
        n = self.terms[0][1][0].n
        acc = MatRat.zero(n, k)
        for c, facs in self.terms:
            acc = acc + elementary_product(list(facs), sign).scale(c)
        return acc


def _single(n: int, i: int, j: int, e: int) -> MatRat:
    return MatRat(n, 1, {((i,), (j,)): gen("z1") ** e})


def _candidates(n: int, k: int, hdeg: Sequence[int], window: int):
    """Tuples of single-slot monomials ``E_{ij} z^e`` with total degree ``hdeg``."""
    from .tensor import monomial_degree

    singles = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for e in range(-window, window + 1):
                singles.append((i, j, e, monomial_degree(n, e, (i,), (j,)).hdeg))
    target = tuple(hdeg)

    def rec(prefix, acc):
        if len(prefix) == k:
            if tuple(acc) == target:
                yield prefix
            return
        for s in singles:
            new = [a + b for a, b in zip(acc, s[3])]
            yield from rec(prefix + (s,), new)

    yield from rec((), [0] * n)


def decompose_elementary(Y: MatRat, sign: int) -> Decomposition:
    """Write ``Y`` as a combination of elementary products of single-slot monomials."""
    n, k = Y.n, Y.k
    if Y.is_zero():
        return Decomposition([], (0, 0))
    if k == 1:
        return Decomposition([(ONE, (Y,))], (0, 0))
    deg = element_degree(Y)
    window = abs(deg.size) // n + k
    names = [f"z{a}" for a in range(1, k + 1)]
    mult = pole_clearing(n, k, sign)
    cands = list(_candidates(n, k, deg.hdeg, window))
    columns, tuples = [], []
    for cand in cands:
        facs = tuple(_single(n, i, j, e) for i, j, e, _ in cand)
        columns.append(vectorize(elementary_product(list(facs), sign), mult, names))
        tuples.append(facs)
    target = vectorize(Y, mult, names)
    basis_idx = independent_subset(columns)
    basis_cols = [columns[c] for c in basis_idx]
    sol, rk = solve_linear(basis_cols, target)
    if sol is None:
        raise ValueError(
            f"degree piece not spanned within the window |e| <= {window} (rank {rk})"
        )
    terms = [(c, tuples[basis_idx[a]]) for a, c in enumerate(sol) if c]
    return Decomposition(terms, (-window, window))


def pair_general(X: MatRat, Y: MatRat) -> Rat:
    """``<X, Y>`` for ``X`` in ``A^+`` and ``Y`` in ``A^-``."""
    if X.k != Y.k:
        return ZERO
    if X.k == 0:
        return X.entry((), ()) * Y.entry((), ())
    try:
        dx, dy = element_degree(X), element_degree(Y)
    except ValueError:
        dx = dy = None
    if dx is not None and dy is not None and any(a + b for a, b in zip(dx.hdeg, dy.hdeg)):
        return ZERO
    dec = decompose_elementary(Y, -1)
    return rsum(c * pair_right_elementary(X, facs) for c, facs in dec.terms)


# ---------------------------------------------------------------------------
# Calibration of (K1, K2)
# ---------------------------------------------------------------------------


class CalibrationError(RuntimeError):
    pass


def main_pair_1_table(n: int, dmax: int = 4) -> list[dict]:
    """``<P_{[i;j)}, F_{-[i';j')}>`` at ``k = 1`` against ``-δ qbar_+^{-1/n}``."""
    rows = []
    labels = [(i, i + d) for i in range(1, n + 1) for d in range(1, dmax + 1)]
    for (i, j) in labels:
        P = pbw.P_simple(n, 1, i, j, 1)
        for (i2, j2) in labels:
            if j2 - i2 != j - i:
                continue
            Fm = pbw.F(n, -1, i2, j2, 1)
            val = pair_general(P, Fm)
            expected = -pbw._qbar_frac(n, -math.gcd(1, j - i)) if (i, j) == (i2, j2) else ZERO
            rows.append({"label": (i, j), "other": (i2, j2), "value": val, "ok": val == expected})
    return rows


def calibrate(n: int = 2, dmax: int = 4) -> dict:
    """Find the unique ``(K1, K2)`` under which the first pairing formula holds at ``k = 1``."""
    table = {}
    winners = []
    for K1 in ("residue", "constant"):
        for K2 in ("E_ij", "E_ji"):
            with use_convention(K1, K2):
                rows = main_pair_1_table(n, dmax)
            ok = all(r["ok"] for r in rows)
            table[(K1, K2)] = ok
            if ok:
                winners.append((K1, K2))
    if len(winners) != 1:
        raise CalibrationError(f"expected exactly one admissible convention, got {table}")
    K1, K2 = winners[0]
    CONVENTION["K1"], CONVENTION["K2"] = K1, K2
    pbw.CONVENTION["minus_label"] = K2
    pbw._F.cache_clear()
    return {"K1": K1, "K2": K2, "table": {f"{a},{b}": ok for (a, b), ok in table.items()}}
