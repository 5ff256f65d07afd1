"""The scalar shuffle algebra: color-symmetric rational functions with the ζ-twisted product.

Variables ``z_{i,a}`` (color ``i`` in ``1..n``, index ``a``) are stored as the
ring generators ``z_{(i-1)·cap + a}`` with a per-color capacity ``cap``.

Colors are extended to all integers through a multiplicative shift: a variable
of color ``i + pn`` equals the color-``i`` variable times ``qbar^{-2p/n}``
(``SHIFT`` below), which is the reading under which ``ζ`` has its poles only
along ``z_{ia} q = z_{i+1,a'} q^{-1}``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .ring import INDEX, ONE, ZERO, Rat, gen, q, rsum, v
from .rmatrix import zeta

__all__ = [
    "ColorSymFunc",
    "classic_product",
    "classic_wheel_check",
    "classic_A",
    "classic_B",
    "pole_shape_ok",
    "SHIFT",
]

#: How a color shift by ``n`` rescales a variable, as a power of ``v = qbar^{1/n}``
#: per unit of ``p``.  ``"fractional"`` gives ``qbar^{-2p/n}``; ``"literal"``
#: gives ``qbar^{-2p}``.
SHIFT = {"mode": "fractional"}


#: Which power of the color shift a relabelled variable carries: ``"absolute"``
#: uses the block ``p`` with ``a = ā + pn``; ``"occurrence"`` counts previous
#: variables of the same color inside the interval.
RELABEL = {"mode": "absolute"}


def _shift(n: int, p: int) -> Rat:
    """The factor multiplying ``z_{i,·}`` to produce a variable of color ``i + pn``."""
    if SHIFT["mode"] == "fractional":
        return v ** (-2 * p)
    return v ** (-2 * p * n)


def capacity(n: int) -> int:
    return sum(1 for name in INDEX if name.startswith("z") and name[1:].isdigit()) // n


def zvar(n: int, i: int, a: int) -> Rat:
    """The ring variable standing for ``z_{i,a}``."""
    cap = capacity(n)
    if not (1 <= i <= n and 1 <= a <= cap):
        raise ValueError(f"z_({i},{a}) exceeds the per-color capacity {cap}")
    return gen(f"z{(i - 1) * cap + a}")


def zname(n: int, i: int, a: int) -> str:
    return f"z{(i - 1) * capacity(n) + a}"


@dataclass(frozen=True)
class ColorSymFunc:
    """A rational function in ``z_{i,a}`` for ``a <= d[i-1]``."""

    n: int
    d: tuple[int, ...]
    expr: Rat

    def __post_init__(self):
        if len(self.d) != self.n:
            raise ValueError("need one multiplicity per color")

    @classmethod
    def one(cls, n: int) -> "ColorSymFunc":
        return cls(n, (0,) * n, ONE)

    def __add__(self, other: "ColorSymFunc") -> "ColorSymFunc":
        if other.d != self.d and other.expr and self.expr:
            raise ValueError("cannot add functions of different color degrees")
        d = self.d if self.expr else other.d
        return ColorSymFunc(self.n, d, self.expr + other.expr)

    def __sub__(self, other: "ColorSymFunc") -> "ColorSymFunc":
        return self + other.scale(-1)

    def scale(self, c) -> "ColorSymFunc":
        return ColorSymFunc(self.n, self.d, self.expr * Rat.coerce(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColorSymFunc):
            return NotImplemented
        if not self.expr and not other.expr:
            return True
        return self.d == other.d and self.expr == other.expr

    def __hash__(self) -> int:
        return hash((self.d, self.expr))

    def variables(self) -> list[tuple[int, int]]:
        return [(i, a) for i in range(1, self.n + 1) for a in range(1, self.d[i - 1] + 1)]

    def is_symmetric(self) -> bool:
        """Invariance under each adjacent transposition within a color."""
        for i in range(1, self.n + 1):
            for a in range(1, self.d[i - 1]):
                swap = {
                    zname(self.n, i, a): zvar(self.n, i, a + 1),
                    zname(self.n, i, a + 1): zvar(self.n, i, a),
                }
                if self.expr.subs(swap) != self.expr:
                    return False
        return True

    def degree(self) -> tuple[tuple[int, ...], int | None]:
        names = [zname(self.n, i, a) for i, a in self.variables()]
        return self.d, self.expr.degree_in(names)


def color_sym(n: int, d: Sequence[int], expr: Rat) -> Rat:
    """Sum over ``S(d_1) x ... x S(d_n)`` permuting the variables of each color."""
    per_color = [list(itertools.permutations(range(1, di + 1))) for di in d]
    terms = []
    for choice in itertools.product(*per_color):
        mapping = {}
        for i, perm in enumerate(choice, start=1):
            for a, b in enumerate(perm, start=1):
                if a != b:
                    mapping[zname(n, i, a)] = zvar(n, i, b)
        terms.append(expr.subs(mapping) if mapping else expr)
    return rsum(terms)


def classic_product(R: ColorSymFunc, S: ColorSymFunc) -> ColorSymFunc:
    """``R * S``: symmetrize ``R(z_{i,a<=d_i}) S(z_{i,a>d_i}) prod ζ(z_{ia}/z_{i'a'})``."""
    if R.n != S.n:
        raise ValueError("color count mismatch")
    n = R.n
    d, e = R.d, S.d
    if not R.expr or not S.expr:
        return ColorSymFunc(n, tuple(x + y for x, y in zip(d, e)), ZERO)
    shift = {}
    for i in range(1, n + 1):
        for a in range(1, e[i - 1] + 1):
            shift[zname(n, i, a)] = zvar(n, i, d[i - 1] + a)
    S_shifted = S.expr.subs(shift) if shift else S.expr
    twist = ONE
    for i in range(1, n + 1):
        for i2 in range(1, n + 1):
            for a in range(1, d[i - 1] + 1):
                for a2 in range(d[i2 - 1] + 1, d[i2 - 1] + e[i2 - 1] + 1):
                    twist = twist * zeta(zvar(n, i, a), zvar(n, i2, a2), i, i2, n)
    norm = math.prod(math.factorial(x) for x in d) * math.prod(math.factorial(x) for x in e)
    total = tuple(x + y for x, y in zip(d, e))
    body = R.expr * S_shifted * twist / norm
    return ColorSymFunc(n, total, color_sym(n, total, body))


def _neighbor(n: int, i: int, a: int) -> Rat:
    """``z_{i,a}`` for ``i`` in ``0..n+1`` using the color-shift convention."""
    if i == 0:
        return zvar(n, n, a) * _shift(n, -1)
    if i == n + 1:
        return zvar(n, 1, a) * _shift(n, 1)
    return zvar(n, i, a)


def pole_denominator(F: ColorSymFunc) -> Rat:
    n, d = F.n, F.d
    out = ONE
    for i in range(1, n + 1):
        j = i + 1 if i < n else 1
        for a in range(1, d[i - 1] + 1):
            for a2 in range(1, d[j - 1] + 1):
                out = out * (zvar(n, i, a) * q - _neighbor(n, i + 1, a2) / q)
    return out


def pole_shape_ok(F: ColorSymFunc) -> bool:
    """Whether ``F`` times the allowed pole product is a Laurent polynomial."""
    names = [zname(F.n, i, a) for i, a in F.variables()]
    return (F.expr * pole_denominator(F)).is_laurent_polynomial(names)


def classic_wheel_check(F: ColorSymFunc) -> bool:
    """Pole shape plus vanishing of the numerator at both wheel specializations."""
    if not F.expr:
        return True
    if not pole_shape_ok(F):
        return False
    n, d = F.n, F.d
    r = F.expr * pole_denominator(F)
    w = gen("w")
    for i in range(1, n + 1):
        if d[i - 1] < 2:
            continue
        for nb, ratio in ((i - 1, q ** 2), (i + 1, q ** -2)):
            col = (nb - 1) % n + 1
            if d[col - 1] < 1:
                continue
            # The neighbor variable z_{nb,1} must equal w; undo its color shift.
            scale = _neighbor(n, nb, 1) / zvar(n, col, 1)
            mapping = {
                zname(n, i, 1): w,
                zname(n, i, 2): w * ratio,
                zname(n, col, 1): w / scale,
            }
            if r.subs(mapping):
                return False
    return True


def _relabel(n: int, i: int, j: int) -> dict[int, Rat]:
    """Map the labels ``a in i..j-1`` to shifted classic variables."""
    out = {}
    counters = [0] * n
    for a in range(i, j):
        col = (a - 1) % n + 1
        counters[col - 1] += 1
        p = (a - 1) // n if RELABEL["mode"] == "absolute" else counters[col - 1] - 1
        out[a] = zvar(n, col, counters[col - 1]) * _shift(n, p)
    return out


def _pbw_classic(n: int, mu, i: int, j: int, bar: bool) -> ColorSymFunc:
    mu = Fraction(mu)
    size = j - i
    if size <= 0:
        raise ValueError("need i < j")
    d = [0] * n
    for a in range(i, j):
        d[(a - 1) % n] += 1
    if mu == 0 or (Fraction(size) / mu).denominator != 1:
        return ColorSymFunc(n, tuple(d), ZERO)
    rnd = (lambda x: x.numerator // x.denominator) if bar else (lambda x: -((-x.numerator) // x.denominator))
    z = _relabel(n, i, j)
    num = ONE
    for a in range(i, j):
        e = rnd(Fraction(a - i + 1) / mu) - rnd(Fraction(a - i) / mu)
        if e:
            num = num * (z[a] * v ** (2 * a)) ** e
    den = ONE
    for a in range(i, j - 1):
        den = den * ((ONE - z[a + 1] / z[a]) if bar else (ONE - z[a] * q ** 2 / z[a + 1]))
    tw = ONE
    for a in range(i, j):
        for b in range(a + 1, j):
            if bar:
                tw = tw * zeta(z[a], z[b], a, b, n)
            else:
                tw = tw * zeta(z[b], z[a], b, a, n)
    return ColorSymFunc(n, tuple(d), color_sym(n, d, num / den * tw))


def classic_A(n: int, mu, i: int, j: int) -> ColorSymFunc:
    """``A^μ_{[i;j)}``; zero when ``(j - i)/μ`` is not an integer."""
    return _pbw_classic(n, mu, i, j, bar=False)


def classic_B(n: int, mu, i: int, j: int) -> ColorSymFunc:
    """``B^μ_{[i;j)}``; zero when ``(j - i)/μ`` is not an integer."""
    return _pbw_classic(n, mu, i, j, bar=True)


def monomial(n: int, i: int, power: int) -> ColorSymFunc:
    """The degree-``ς^i`` element ``z_{i1}^power``."""
    d = [0] * n
    d[i - 1] = 1
    return ColorSymFunc(n, tuple(d), zvar(n, i, 1) ** power)
