"""The trigonometric R-matrix of gl_n and its relatives.

All constructors take the spectral ratio ``x`` as a :class:`~affshuffle.ring.Rat`,
so ``R(n, z(1) / z(2))`` is ``R_12(z_1/z_2)`` directly.  Slot-indexed versions
(``R_ab(z_a/z_b)`` inside ``End(V^{⊗k})``) are produced by :func:`R_ij`.

``sign`` is ``+1`` or ``-1`` and selects ``qbar_+ = v^n`` or
``qbar_- = q^-n v^-n``.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache

from .ring import ONE, Rat, q, qbar, residue_at, v
from .tensor import MatRat, compose, embed

__all__ = [
    "R",
    "Rtilde",
    "Rtilde_minus_closed",
    "f",
    "zeta",
    "Q",
    "D",
    "R_ij",
    "Rtilde_ij",
    "R_ij_inverse",
    "R_omega",
    "R_sigma",
    "R_sigma_inverse",
    "R_bar_sigma",
    "ratio_residue",
    "matrix_ratio_residue",
    "swap",
]


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")


def R(n: int, x) -> MatRat:
    """``R(x)`` on ``V ⊗ V``."""
    x = Rat.coerce(x)
    den = ONE - x
    diag = (q - x / q) / den
    off_lo = (q - 1 / q) / den
    off_hi = off_lo * x
    ents = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                ents[((i, i), (i, i))] = diag
            else:
                ents[((i, j), (i, j))] = ONE
                ents[((i, j), (j, i))] = off_hi if i < j else off_lo
    return MatRat(n, 2, ents)


def swap(n: int) -> MatRat:
    """The permutation operator ``(12)`` on ``V ⊗ V``."""
    return MatRat(n, 2, {((i, j), (j, i)): ONE for i in range(1, n + 1) for j in range(1, n + 1)})


def _flip(X: MatRat) -> MatRat:
    """``X_21``: the same operator acting with its tensor factors exchanged."""
    return embed(X, (2, 1), 2, relabel=False)


def D(n: int, slot: int = 1, k: int = 1) -> MatRat:
    """``D = diag(q^2, ..., q^{2n})`` placed in ``slot`` of ``V^{⊗k}``."""
    d = MatRat(n, 1, {((i,), (i,)): q ** (2 * i) for i in range(1, n + 1)})
    return embed(d, (slot,), k, relabel=False)


def _conj_D2(X: MatRat) -> MatRat:
    """``D_2 X D_2^{-1}`` for an operator on ``V ⊗ V``."""
    return X.__class__(
        X.n,
        2,
        {(r, c): val * q ** (2 * (r[1] - c[1])) for (r, c), val in X.entries.items()},
    )


def Rtilde(n: int, x, sign: int = 1) -> MatRat:
    """``R̃^±(x)``.

    ``R̃^+(x) = R_21(1 / (x qbar^2))`` and ``R̃^-(x) = D_2 R̃^+(x) D_2^{-1}``
    evaluated at ``qbar_-``.
    """
    _check_sign(sign)
    x = Rat.coerce(x)
    qb = qbar(n, sign)
    plus = _flip(R(n, 1 / (x * qb ** 2)))
    return plus if sign > 0 else _conj_D2(plus)


def Rtilde_minus_closed(n: int, x) -> MatRat:
    """Entrywise closed form of ``R̃^-(x)``, kept separate as a cross-check."""
    x = Rat.coerce(x)
    qm2 = qbar(n, -1) ** 2
    den = ONE - x * qm2
    ents = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                ents[((i, i), (i, i))] = (1 / q - x * q * qm2) / den
            else:
                ents[((i, j), (i, j))] = ONE
                val = -(q - 1 / q) * q ** (2 * (j - i)) / den
                if i < j:
                    val = val * x * qm2
                ents[((i, j), (j, i))] = val
    return MatRat(n, 2, ents)


def f(x) -> Rat:
    """``f(x) = (1 - x q^2)(1 - x q^-2) / (1 - x)^2``."""
    x = Rat.coerce(x)
    return (ONE - x * q ** 2) * (ONE - x / q ** 2) / (ONE - x) ** 2


def zeta(zz, ww, col_z: int, col_w: int, n: int) -> Rat:
    """``ζ(z/w)`` for variables of colors ``col_z`` and ``col_w``."""
    zz, ww = Rat.coerce(zz), Rat.coerce(ww)
    diff = col_z - col_w
    if diff % n == 0:
        k = diff // n
        s = v ** (2 * k)
        return (zz * q * s - ww / q) / (zz * s - ww)
    if (diff + 1) % n == 0:
        k = (diff + 1) // n
        s = v ** (2 * k)
        return (zz * s - ww) / (zz * q * s - ww / q)
    return ONE


def Q(n: int, x, sign: int = 1, bar: bool = False) -> MatRat:
    """``Q(x)`` (``bar=False``) or ``Q̄(x)`` (``bar=True``); minus variants by
    ``D_2``-conjugation at ``qbar_-``."""
    _check_sign(sign)
    x = Rat.coerce(x)
    xs = x * qbar(n, sign) ** 2
    den = ONE - xs
    ents = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if bar:
                val = -q * (xs if i <= j else ONE) / den
            else:
                val = (xs if i < j else ONE) / (q * den)
            ents[((i, j), (j, i))] = val
    out = MatRat(n, 2, ents)
    return out if sign > 0 else _conj_D2(out)


# ---------------------------------------------------------------------------
# Slot-indexed versions and braid lifts
# ---------------------------------------------------------------------------


def _zv(var: str, a: int) -> Rat:
    from .ring import gen

    return gen(f"{var}{a}")


@lru_cache(maxsize=None)
def R_ij(n: int, a: int, b: int, k: int, var: str = "z") -> MatRat:
    """``R_ab(z_a / z_b)`` inside ``End(V^{⊗k})``."""
    local = R(n, _zv(var, a) / _zv(var, b))
    out = embed(local, (a, b), k, relabel=False)
    out.var = var
    return out


@lru_cache(maxsize=None)
def Rtilde_ij(n: int, a: int, b: int, k: int, sign: int = 1, var: str = "z") -> MatRat:
    """``R̃^±_ab(z_a / z_b)`` inside ``End(V^{⊗k})``."""
    local = Rtilde(n, _zv(var, a) / _zv(var, b), sign)
    out = embed(local, (a, b), k, relabel=False)
    out.var = var
    return out


@lru_cache(maxsize=None)
def R_ij_inverse(n: int, a: int, b: int, k: int, var: str = "z") -> MatRat:
    """``R_ab(z_a/z_b)^{-1} = R_ba(z_b/z_a) / f(z_a/z_b)``."""
    return R_ij(n, b, a, k, var).scale(1 / f(_zv(var, a) / _zv(var, b)))


@lru_cache(maxsize=None)
def R_omega(n: int, k: int) -> MatRat:
    """``R_{ω_k} = prod_{i<j} R_ij(z_i/z_j)``, ``i`` outer and ``j`` inner."""
    out = MatRat.identity(n, k)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            out = compose(out, R_ij(n, i, j, k))
    return out


def _descent(perm: tuple[int, ...]) -> int | None:
    """Smallest ``i`` with ``σ = s_i τ`` and ``ℓ(τ) < ℓ(σ)``, i.e. ``σ^{-1}(i) > σ^{-1}(i+1)``."""
    inv = _inverse_perm(perm)
    for i in range(1, len(perm)):
        if inv[i - 1] > inv[i]:
            return i
    return None


def _inverse_perm(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for a, b in enumerate(perm, 1):
        inv[b - 1] = a
    return tuple(inv)


def _compose_perm(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """``(s ∘ t)(a) = s(t(a))``."""
    return tuple(s[t[a] - 1] for a in range(len(t)))


def _simple(k: int, i: int) -> tuple[int, ...]:
    p = list(range(1, k + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


@lru_cache(maxsize=None)
def R_sigma(n: int, perm: tuple[int, ...]) -> MatRat:
    """Positive braid lift ``R_σ`` built from the lexicographically minimal reduced word.

    It obeys ``R_{s τ} = R_s · σ_s R_τ σ_s^{-1}`` with ``R_{s_i} = R_{i,i+1}(z_i/z_{i+1})``.
    """
    perm = tuple(perm)
    k = len(perm)
    i = _descent(perm)
    if i is None:
        return MatRat.identity(n, k)
    s = _simple(k, i)
    tau = _compose_perm(s, perm)
    return compose(R_ij(n, i, i + 1, k), R_sigma(n, tau).conjugate(s))


@lru_cache(maxsize=None)
def R_sigma_inverse(n: int, perm: tuple[int, ...]) -> MatRat:
    perm = tuple(perm)
    k = len(perm)
    i = _descent(perm)
    if i is None:
        return MatRat.identity(n, k)
    s = _simple(k, i)
    tau = _compose_perm(s, perm)
    return compose(R_sigma_inverse(n, tau).conjugate(s), R_ij_inverse(n, i, i + 1, k))


@lru_cache(maxsize=None)
def R_bar_sigma(n: int, perm: tuple[int, ...]) -> MatRat:
    """``R̄_σ = σ R_{σ^{-1}} σ^{-1}``."""
    perm = tuple(perm)
    return R_sigma(n, _inverse_perm(perm)).conjugate(perm)


# ---------------------------------------------------------------------------
# Residues in a spectral ratio
# ---------------------------------------------------------------------------


def ratio_residue(g: Rat, name: str, point) -> Rat:
    """Residue of ``g(x) dx/x`` at ``x = point`` with the convention
    ``Res 1/(point - x) = +1`` for the variable ``x = name``."""
    from .ring import gen

    return residue_at(g / gen(name), name, point)


def matrix_ratio_residue(X: MatRat, name: str, point) -> MatRat:
    return X.map(lambda val: ratio_residue(val, name, point))


permutation_inverse = _inverse_perm
permutation_compose = _compose_perm
