"""Slope generators, linear functionals and the leading coproduct.

Generators are labelled by ``(i, j, k)``: the slope is ``μ = (j - i) / k``.
The plus family ``F^{(k)}_{[i;j)}`` has degree ``([i;j), k)``; the minus family
``F^{(-k)}_{[i;j)}`` (written ``F(n, -1, i, j, k)``) has degree ``(-[i;j), k)``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ring import ONE, ZERO, Rat, gen, laurent_leading, q, v
from .rmatrix import Q, R_omega, Rtilde_ij, f
from .shuffle import symmetrize
from .tensor import (
    E,
    MatRat,
    compose,
    element_degree,
    embed,
    interval,
    monomial_degree,
    residue_class,
    tensor,
)
from .wheel import extract_top

__all__ = [
    "CONVENTION",
    "F",
    "Fbar",
    "F_mu",
    "Fbar_mu",
    "alpha",
    "P_simple",
    "P_simple_bar",
    "PsiTerm",
    "delta_mu_split",
    "slope_membership",
    "split_slopes",
    "P_imaginary_solve",
    "psi_pairing_form",
]

#: Convention knobs; ``minus_prefactor`` selects how ``qbar`` is read inside the
#: minus-family prefactors and ``minus_label`` the index orientation (K2).
CONVENTION = {"minus_prefactor": "plain", "minus_label": "E_ij"}


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _steps(i: int, j: int, k: int, bar: bool) -> list[int]:
    """``s_a = j - ⌈μ a⌉`` (or ``⌊μ a⌋`` when ``bar``) for ``a = 0..k``."""
    mu = Fraction(j - i, k)
    rnd = _floor if bar else _ceil
    return [j - rnd(mu * a) for a in range(k + 1)]


def _zv(a: int) -> Rat:
    return gen(f"z{a}")


def _qbar_frac(n: int, m: int, sign: int = 1) -> Rat:
    """``qbar_±^{m/n}``."""
    return v ** m if sign > 0 else (q * v) ** (-m)


def _braid_word(n: int, k: int, steps: Sequence[int], sign: int, bar: bool, weight) -> MatRat:
    """``R_ω Π_a [R̃_{1a} ... R̃_{a-2,a} Q_{a-1,a} E^{(a)}_{s_{a-1} s_a} · weight(a)]``."""
    X = R_omega(n, k)
    for a in range(1, k + 1):
        for b in range(1, a - 1):
            X = compose(X, Rtilde_ij(n, b, a, k, sign))
        if a >= 2:
            loc = Q(n, _zv(a - 1) / _zv(a), sign, bar)
            X = compose(X, embed(loc, (a - 1, a), k, relabel=False))
        X = compose(X, embed(E(n, steps[a - 1], steps[a]), (a,), k).scale(weight(a)))
    return X


@lru_cache(maxsize=None)
def _F(n: int, sign: int, i: int, j: int, k: int, bar: bool) -> MatRat:
    if k < 1:
        raise ValueError("k must be positive")
    if sign > 0:
        s = _steps(i, j, k, bar)

        def weight(a):
            return v ** (2 * residue_class(s[a], n))

        pref = (-(q ** 2) * v ** 2) ** (-k) if bar else ONE
    else:
        a_lab, b_lab = (j, i) if CONVENTION["minus_label"] == "E_ij" else (i, j)
        s = _steps(a_lab, b_lab, k, bar)
        psign = 1 if CONVENTION["minus_prefactor"] == "plain" else -1

        def weight(a):
            return _qbar_frac(n, -2 * residue_class(s[a - 1], n), psign)

        pref = (-_qbar_frac(n, 2, psign)) ** k if bar else ONE
    X = _braid_word(n, k, s, sign, bar, weight)
    return symmetrize(X).scale(pref)


def F(n: int, sign: int, i: int, j: int, k: int) -> MatRat:
    """``F^{(±k)}_{[i;j)}``."""
    return _F(n, sign, i, j, k, False)


def Fbar(n: int, sign: int, i: int, j: int, k: int) -> MatRat:
    """``F̄^{(±k)}_{[i;j)}``."""
    return _F(n, sign, i, j, k, True)


def _k_of(i: int, j: int, mu: Fraction) -> int | None:
    if mu == 0:
        return None
    k = Fraction(j - i) / mu
    if k.denominator != 1 or k <= 0:
        return None
    return int(k)


def F_mu(n: int, sign: int, i: int, j: int, mu) -> MatRat | None:
    """``F^μ_{[i;j)}``, or ``None`` (the zero element) when ``(j - i)/μ`` is not a
    positive integer."""
    k = _k_of(i, j, Fraction(mu))
    return None if k is None else F(n, sign, i, j, k)


def Fbar_mu(n: int, sign: int, i: int, j: int, mu) -> MatRat | None:
    k = _k_of(i, j, Fraction(mu))
    return None if k is None else Fbar(n, sign, i, j, k)


# ---------------------------------------------------------------------------
# Linear functionals
# ---------------------------------------------------------------------------


def _block(i: int, n: int) -> int:
    return (i - 1) // n


def coefficient_in(val: Rat, name: str, power: int) -> Rat:
    """Coefficient of ``name^power`` in a Laurent polynomial in ``name``."""
    from .ring import series

    if not val:
        return ZERO
    if not val.is_laurent_polynomial([name]):
        raise ValueError(f"{val} is not a Laurent polynomial in {name}")
    m0, _ = series(val, name, 1)
    if power < m0:
        return ZERO
    _, coeffs = series(val, name, power - m0 + 1)
    return coeffs[power - m0]


def top_coefficient(Xtop: MatRat, row: int, col: int) -> Rat:
    """Coefficient of the general-index ``E_{row, col}`` in a single-slot
    operator in ``y_1``."""
    n = Xtop.n
    val = Xtop.entry((residue_class(row, n),), (residue_class(col, n),))
    return coefficient_in(val, "y1", _block(row, n) - _block(col, n))


def alpha(n: int, sign: int, i: int, j: int, X: MatRat, Xtop: MatRat | None = None) -> Rat:
    """``α_{±[i;j)}(X)``.

    Zero when ``X`` does not have degree ``±[i;j)``.
    """
    k = X.k
    if k == 0:
        return ZERO
    target = interval(i, j, n) if sign > 0 else tuple(-c for c in interval(i, j, n))
    try:
        deg = element_degree(X)
    except ValueError:
        deg = None
    if deg is None or deg.hdeg != target:
        return ZERO
    if Xtop is None:
        Xtop = extract_top(X, sign)
    ib, jb = residue_class(i, n), residue_class(j, n)
    if sign > 0:
        c = top_coefficient(Xtop, j, i)
        m = k * (i - j) + (j - i) + k - 2 * k * ib
    else:
        c = top_coefficient(Xtop, i, j)
        m = k * (j - i) + (i - j) + k - 2 * (k - 1) * jb - 2 * ib
    return c * (1 - q ** 2) ** k * _qbar_frac(n, m, sign)


# ---------------------------------------------------------------------------
# Normalized simple generators
# ---------------------------------------------------------------------------


def P_simple(n: int, sign: int, i: int, j: int, k: int) -> MatRat:
    """``P^{(±k)}_{[i;j)}``, normalized so that ``α_{±[i;j)}`` takes the value ``±1``."""
    if math.gcd(j - i, k) != 1:
        raise ValueError(
            f"gcd({j - i}, {k}) != 1: [{i};{j}) at k={k} is imaginary, use P_imaginary_solve"
        )
    norm = _qbar_frac(n, 1, sign) * (1 - q ** 2)
    return F(n, sign, i, j, k).scale(Rat.coerce(sign) / norm)


def P_simple_bar(n: int, sign: int, i: int, j: int, k: int) -> MatRat:
    """The same generator computed from ``F̄`` instead of ``F``."""
    if math.gcd(j - i, k) != 1:
        raise ValueError(f"gcd({j - i}, {k}) != 1: use P_imaginary_solve")
    norm = _qbar_frac(n, -1, sign) * (1 - q ** -2)
    return Fbar(n, sign, i, j, k).scale(Rat.coerce(sign) / norm)


# ---------------------------------------------------------------------------
# Leading coproduct
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PsiTerm:
    """One summand ``left · ψ^psi ⊗ right`` of the leading coproduct.

    ``tensor`` is ``left ⊗ right`` as a single operator on all slots; it is the
    canonical data.  ``left`` and ``right`` are filled in when the summand
    factors as a single pure tensor.
    """

    psi: tuple[int, ...]
    tensor: MatRat
    split: int
    left: MatRat | None = None
    right: MatRat | None = None


def unit(n: int) -> MatRat:
    """The unit of the shuffle algebra (arity 0)."""
    return MatRat(n, 0, {((), ()): ONE})


def psi_of(hdeg: Sequence[int]) -> tuple[int, ...]:
    """The ψ exponent attached to a right factor of horizontal degree ``hdeg``.

    A right factor of degree ``[i;j)`` comes with ``ψ_i/ψ_j``.
    """
    n = len(hdeg)
    return tuple(hdeg[s] - hdeg[s - 1] for s in range(n))


def psi_pairing_form(d: Sequence[int], s: int) -> int:
    """``<d, ς^s> = d_s - d_{s-1}`` (indices mod n, ``s`` in ``1..n``)."""
    n = len(d)
    return d[(s - 1) % n] - d[(s - 2) % n]


def _keys_degree(n: int, zdeg: int, rows, cols) -> tuple[int, ...]:
    return monomial_degree(n, zdeg, rows, cols).hdeg


def _expansion(X: MatRat, l: int, mu: Fraction):
    """Yield ``(m, coefficient MatRat)`` for all t-orders that can reach slope ``mu``."""
    n, k = X.n, X.k
    names_left = [f"z{a}" for a in range(1, l + 1)]
    fprod = ONE
    for u in range(1, l + 1):
        for w in range(l + 1, k + 1):
            fprod = fprod * f(_zv(u) / _zv(w))
    # Right factors at t-order m have size n(h - m) + sum(x - y) with
    # sum(x - y) <= (n - 1)(k - l), so orders beyond m_max stay below slope mu.
    h = next(iter(X.entries.values())).degree_in(X.variables())
    bound = Fraction(n * h + (n - 1) * (k - l)) - mu * (k - l)
    m_max = _floor(bound / n)
    per_entry = {}
    m0 = None
    for key, val in X.entries.items():
        g = val / fprod
        lead = laurent_leading(g, names_left, 0)[0][0]
        per_entry[key] = (g, lead)
        m0 = lead if m0 is None else min(m0, lead)
    if m0 is None or m_max < m0:
        return h, []
    out = {}
    for key, (g, lead) in per_entry.items():
        if lead > m_max:
            continue
        for m, c in laurent_leading(g, names_left, m_max - lead):
            if c:
                out.setdefault(m, {})[key] = c
    return h, sorted(out.items())


class SlopeError(ValueError):
    """Raised when an element has a coproduct summand of slope above ``μ``."""


def split_slopes(X: MatRat, l: int, mu) -> dict[Fraction, int]:
    """Counts of surviving monomial entries per second-factor slope ``>= mu``."""
    mu = Fraction(mu)
    n, k = X.n, X.k
    if not X or l >= k:
        return {}
    _, orders = _expansion(X, l, mu)
    out: dict[Fraction, int] = {}
    for _, ents in orders:
        for (rows, cols), c in ents.items():
            size = sum(_keys_degree(n, _entry_zdeg_right(c, l, k), rows[l:], cols[l:]))
            slope = Fraction(size, k - l)
            if slope >= mu:
                out[slope] = out.get(slope, 0) + 1
    return out


def _entry_zdeg_right(val: Rat, l: int, k: int) -> int:
    d = val.degree_in([f"z{a}" for a in range(l + 1, k + 1)])
    if d is None:
        raise ValueError("expansion coefficient is not homogeneous in the right variables")
    return d


def delta_mu_split(X: MatRat, l: int, mu) -> list[PsiTerm]:
    """The slope-``μ`` part of the coproduct of ``X`` at the split after slot ``l``.

    Expands ``X / prod_{u<=l<v} f(z_u/z_v)`` for ``z_1..z_l`` small, keeps the
    terms whose right factor (slots ``l+1..k``) has slope exactly ``μ``, groups
    them by ψ exponent, and moves the ψ's to the right of the left factor.
    Raises :class:`SlopeError` if a term of larger slope survives.
    """
    mu = Fraction(mu)
    n, k = X.n, X.k
    if not X:
        return []
    if l == k:
        return [PsiTerm((0,) * n, X, l, X, unit(n))]
    _, orders = _expansion(X, l, mu)
    groups: dict[tuple[int, ...], dict] = {}
    for m, ents in orders:
        for (rows, cols), c in ents.items():
            h_right = _entry_zdeg_right(c, l, k)
            d_right = _keys_degree(n, h_right, rows[l:], cols[l:])
            size = sum(d_right)
            if size > mu * (k - l):
                raise SlopeError(
                    f"split {l}: summand of slope {Fraction(size, k - l)} > {mu} at t-order {m}"
                )
            if size < mu * (k - l):
                continue
            d_left = _keys_degree(n, m, rows[:l], cols[:l])
            shift = sum(psi_pairing_form(d_left, x) for x in rows[l:])
            psi = psi_of(d_right)
            bucket = groups.setdefault(psi, {})
            val = c * q ** shift if shift else c
            key = (rows, cols)
            bucket[key] = bucket[key] + val if key in bucket else val
    out = []
    for psi in sorted(groups):
        T = MatRat(n, k, groups[psi])
        if not T:
            continue
        left, right = _factor(T, l)
        out.append(PsiTerm(psi, T, l, left, right))
    return out


def _factor(T: MatRat, l: int) -> tuple[MatRat | None, MatRat | None]:
    """Write ``T = left ⊗ right`` if possible (``right`` in its own variables)."""
    n, k = T.n, T.k
    if l == 0:
        return unit(n), T
    keys = sorted(T.entries, key=repr)
    (r0, c0) = keys[0]
    lkey0, rkey0 = (r0[:l], c0[:l]), (r0[l:], c0[l:])
    pivot = T.entries[keys[0]]
    left_entries, right_entries = {}, {}
    for (r, c), val in T.entries.items():
        if (r[l:], c[l:]) == rkey0:
            left_entries[(r[:l], c[:l])] = val
        if (r[:l], c[:l]) == lkey0:
            right_entries[(r[l:], c[l:])] = val / pivot
    L = MatRat(n, l, left_entries)
    Rfull = MatRat(n, k - l, right_entries)
    # T[κL, κR] = L[κL] · R[κR] must hold for every entry.
    for (r, c), val in T.entries.items():
        a = left_entries.get((r[:l], c[:l]), ZERO)
        b = right_entries.get((r[l:], c[l:]), ZERO)
        if a * b != val:
            return None, None
    # Move the dependence on the right variables out of ``L``.
    names_r = [f"z{a}" for a in range(l + 1, k + 1)]
    sample = {nm: Rat.coerce(3 + a) for a, nm in enumerate(names_r)}
    try:
        lam = pivot.subs(sample) / pivot
        L2 = L.subs(sample)
    except ZeroDivisionError:
        return None, None
    if any(nm in val.variables() for val in L2.entries.values() for nm in names_r):
        return None, None
    R2 = Rfull.scale(lam.inverse())
    if any(nm in val.variables() for val in R2.entries.values() for nm in (f"z{a}" for a in range(1, l + 1))):
        return None, None
    back = {f"z{a}": gen(f"z{a - l}") for a in range(l + 1, k + 1)}
    R3 = R2.subs(back)
    if tensor(L2, R3) != T:
        return None, None
    return L2, R3


def slope_membership(X: MatRat, mu) -> bool:
    """Whether every coproduct summand of ``X`` has right factor of slope ``<= μ``."""
    mu = Fraction(mu)
    if not X:
        return True
    deg = element_degree(X)
    if Fraction(sum(deg.hdeg), X.k) > mu:
        return False
    for l in range(1, X.k):
        try:
            delta_mu_split(X, l, mu)
        except SlopeError:
            return False
    return True


# ---------------------------------------------------------------------------
# Products of slope-μ generators and the imaginary generators
# ---------------------------------------------------------------------------


def slope_labels(n: int, mu, k: int) -> list[tuple[int, int, int]]:
    """All ``(i, j, k)`` with ``i`` in ``1..n`` and ``j - i = μ k``."""
    mu = Fraction(mu)
    span = mu * k
    if span.denominator != 1 or span <= 0:
        return []
    return [(i, i + int(span), k) for i in range(1, n + 1)]


def ordered_products(n: int, mu, d: Sequence[int], k: int):
    """Ordered tuples of labels ``(i, j, k_s)`` of slope ``μ`` with total degree ``(d, k)``."""
    target = tuple(d)

    def rec(prefix, acc, left):
        if left == 0:
            if tuple(acc) == target:
                yield tuple(prefix)
            return
        for ks in range(1, left + 1):
            for (i, j, _) in slope_labels(n, mu, ks):
                new = [a + b for a, b in zip(acc, interval(i, j, n))]
                if any(x > y for x, y in zip(new, target)):
                    continue
                yield from rec(prefix + [(i, j, ks)], new, left - ks)

    yield from rec([], [0] * n, k)


def product_of(n: int, sign: int, labels, bar: bool = False) -> MatRat:
    from .shuffle import shuffle_power

    gens = [(Fbar if bar else F)(n, sign, i, j, ks) for (i, j, ks) in labels]
    return shuffle_power(gens, sign)


def _primitivity_vector(X: MatRat, mu: Fraction) -> dict:
    from .linalg import pole_clearing, vectorize

    vec = {}
    names = [f"z{a}" for a in range(1, X.k + 1)]
    mult = pole_clearing(X.n, X.k, 1)
    for l in range(1, X.k):
        for term in delta_mu_split(X, l, mu):
            for key, val in vectorize(term.tensor, mult, names).items():
                vec[("prim", l, term.psi, key)] = val
    return vec


@dataclass
class ImaginarySolution:
    element: MatRat
    coefficients: list[tuple[Rat, tuple]]
    rank: int
    candidates: int


def P_imaginary_solve(n: int, mu, l: int, r: int, sign: int = 1, targets=None) -> ImaginarySolution:
    """Solve for ``P^μ_{±lδ,r}``: primitive for ``Δ_μ`` with prescribed α values.

    The α targets are ``±δ^r_{s mod g}`` on ``[s;s+ln)`` for ``s = 1..n``
    unless ``targets`` overrides them.
    """
    mu = Fraction(mu)
    a = mu.numerator
    g = math.gcd(n, a)
    if not 1 <= r <= g:
        raise ValueError(f"r must lie in 1..{g}")
    kk = Fraction(l * n) / mu
    if kk.denominator != 1 or kk <= 0:
        raise ValueError(f"(lδ, ln/μ) = ({l}δ, {kk}) is not a valid degree")
    k = int(kk)
    if sign < 0 and k > 1:
        raise ValueError("primitivity constraints are only modelled on the plus side")
    if targets is None:
        targets = [Rat.coerce(sign if (s - r) % g == 0 else 0) for s in range(1, n + 1)]
    d = (l,) * n
    labels = list(ordered_products(n, mu, d, k))
    elems = [product_of(n, sign, lab) for lab in labels]
    from .linalg import independent_subset, pole_clearing, solve_linear, vectorize

    names = [f"z{a}" for a in range(1, k + 1)]
    mult = pole_clearing(n, k, sign)
    spans = [vectorize(X, mult, names) for X in elems]
    basis = independent_subset(spans)
    columns = []
    for idx in basis:
        col = _primitivity_vector(elems[idx], mu) if sign > 0 else {}
        for s in range(1, n + 1):
            val = alpha(n, sign, s, s + l * n, elems[idx])
            if val:
                col[("alpha", s)] = val
        columns.append(col)
    target = {("alpha", s): t for s, t in zip(range(1, n + 1), targets) if t}
    try:
        sol, rk = solve_linear(columns, target)
    except ValueError as exc:
        raise ValueError(f"imaginary generator not unique: {exc}") from None
    if sol is None:
        raise ValueError(f"no solution: rank {rk} over {len(basis)} independent candidates")
    X = MatRat.zero(n, k)
    coeffs = []
    for c, idx in zip(sol, basis):
        if c:
            X = X + elems[idx].scale(c)
            coeffs.append((c, labels[idx]))
    return ImaginarySolution(X, coeffs, rk, len(labels))


# ---------------------------------------------------------------------------
# Relations among the generators, checked inside the shuffle algebra
# ---------------------------------------------------------------------------


def _delta(n: int, a: int, b: int) -> int:
    return 1 if (a - b) % n == 0 else 0


def _residue(x: int, n: int) -> int:
    return residue_class(x, n)


def shuffle_mul(A: MatRat, B: MatRat, sign: int = 1) -> MatRat:
    from .shuffle import shuffle_product

    return shuffle_product(A, B, sign)


def _gen_or_unit(fn, n: int, sign: int, i: int, j: int, mu: Fraction) -> MatRat | None:
    if i == j:
        return unit(n)
    if j < i:
        return None
    k = _k_of(i, j, mu)
    return None if k is None else fn(n, sign, i, j, k)


@dataclass
class RelationCheck:
    lhs: MatRat
    rhs: MatRat
    data: dict

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def rel3_gamma(n: int, s: int, i2: int, j2: int, k2: int, sign: int = 1) -> Rat:
    """The scalar multiplying the ``(t, s)`` summand of the commutator relation."""
    qb = _qbar_frac(n, 2 * _residue(k2 * (s - i2), n), -sign)
    qb_full = _qbar_frac(n, 2 * n, -sign)
    out = ZERO
    if _delta(n, j2, s):
        out = out + q ** (-_delta(n, j2, i2)) / (q ** -1 - q)
    if _delta(n, j2, i2):
        out = out - qb / (qb_full - 1)
    return out


def rel3_instance(n: int, first: tuple[int, int, int], second: tuple[int, int, int]) -> RelationCheck:
    """The q-commutator of two simple generators against its ``F F̄`` expansion (plus side)."""
    (i, j, k), (i2, j2, k2) = first, second
    det = k * (j2 - i2) - k2 * (j - i)
    g = math.gcd(k + k2, j + j2 - i - i2)
    if det != g:
        raise ValueError(f"determinant {det} differs from gcd {g}")
    mu = Fraction(j + j2 - i - i2, k + k2)
    P1, P2 = P_simple(n, 1, i, j, k), P_simple(n, 1, i2, j2, k2)
    lhs = shuffle_mul(P1, P2).scale(q ** (_delta(n, j2, i) - _delta(n, i2, i))) - shuffle_mul(
        P2, P1
    ).scale(q ** (_delta(n, j2, j) - _delta(n, i2, j)))
    rhs = MatRat.zero(n, k + k2)
    terms = []
    # (t, s) runs over intervals with the same degree as [i';j'); t <= j and
    # s >= i are needed for the two factors to be non-zero.
    width = j2 - i2
    target_deg = interval(i2, j2, n)
    for t in range(i - width, j + 1):
        s = t + width
        if interval(t, s, n) != target_deg:
            continue
        left = _gen_or_unit(F, n, 1, t, j, mu)
        right = _gen_or_unit(Fbar, n, 1, i, s, mu)
        if left is None or right is None:
            continue
        gam = rel3_gamma(n, s, i2, j2, k2)
        if not gam:
            continue
        term = shuffle_mul(left, right) if left.k and right.k else (right if not left.k else left)
        if term.k != k + k2:
            continue
        rhs = rhs + term.scale(gam)
        terms.append({"t": t, "s": s, "gamma": gam})
    return RelationCheck(lhs, rhs, {"mu": mu, "det": det, "terms": terms})


def rel2_instance(n: int, simple: tuple[int, int, int], l: int, k2: int, r: int) -> RelationCheck:
    """The commutator of a simple generator with an imaginary one (plus side)."""
    i, j, k = simple
    d = k * n * l - k2 * (j - i)
    if abs(d) != math.gcd(k2, n * l):
        raise ValueError(f"|det| = {abs(d)} differs from gcd({k2}, {n * l})")
    mu2 = Fraction(n * l, k2)
    g = math.gcd(n, mu2.numerator)
    P = P_simple(n, 1, i, j, k)
    Pim = P_imaginary_solve(n, mu2, l, r).element
    lhs = shuffle_mul(P, Pim) - shuffle_mul(Pim, P)
    coeff = _qbar_frac(n, d, 1) * (1 if (i - r) % g == 0 else 0) - _qbar_frac(n, -d, 1) * (
        1 if (j - r) % g == 0 else 0
    )
    rhs = P_simple(n, 1, i, j + l * n, k + k2).scale(coeff)
    return RelationCheck(lhs, rhs, {"det": d, "g": g, "coefficient": coeff})


def antipode_sum(n: int, i: int, j: int, mu, sign: int = 1) -> MatRat | None:
    """``sum_s F̄^μ_{[s;j)} * F^μ_{[i;s)} qbar_∓^{2(s-i)/n}`` (``None`` if no term has full degree)."""
    mu = Fraction(mu)
    total = None
    for s in range(i, j + 1):
        A = _gen_or_unit(Fbar, n, sign, s, j, mu)
        B = _gen_or_unit(F, n, sign, i, s, mu)
        if A is None or B is None:
            continue
        term = shuffle_mul(A, B, sign) if A.k and B.k else (A if B.k == 0 else B)
        term = term.scale(_qbar_frac(n, 2 * (s - i), -sign))
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# Dimension count
# ---------------------------------------------------------------------------


def unordered_collections(n: int, mu, d: Sequence[int], k: int) -> int:
    """Multisets of labels ``(i, j, λ)`` with ``j - i = μ λ`` and total degree ``(d, k)``."""
    seen = set()
    for labels in ordered_products(n, mu, d, k):
        seen.add(tuple(sorted(labels)))
    return len(seen)


def magic_rank(n: int, mu, d: Sequence[int], k: int, bar: bool = False) -> tuple[int, int]:
    """``(rank of the span of ordered products, number of unordered collections)``."""
    from .linalg import pole_clearing, rank, vectorize

    names = [f"z{a}" for a in range(1, k + 1)]
    mult = pole_clearing(n, k, 1)
    vecs = [vectorize(product_of(n, 1, lab, bar), mult, names) for lab in ordered_products(n, mu, d, k)]
    return rank(vecs), unordered_collections(n, mu, d, k)
