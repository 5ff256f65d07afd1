"""Exact arithmetic in Q(q, v)(z_1, ..., z_k).

Every quantity in the package (matrix entries, scalars, pairing values) is a
:class:`Rat`: a canonical fraction ``num / (c * prod f_i^e_i)`` where ``num`` is
an integer polynomial, ``c`` a positive integer and the ``f_i`` are distinct
irreducible, primitive polynomials with positive leading coefficient.  Keeping
the denominator factored means sums only need an lcm of factor multisets plus a
handful of trial divisions, never a full polynomial GCD.  Monomials are just
irreducible factors of degree one, so Laurent polynomials come for free.

The symbol ``v`` stands for ``qbar^(1/n)``; ``qbar`` itself is ``v**n``.

Polynomial multiplication, exact division and factorisation are delegated to
FLINT (through ``python-flint``).
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Mapping, Sequence
from typing import Union

import flint

__all__ = [
    "NAMES",
    "Rat",
    "ONE",
    "ZERO",
    "Scalar",
    "ZRat",
    "PoleError",
    "gen",
    "q",
    "v",
    "z",
    "y",
    "qbar",
    "rsum",
    "residue_at",
    "residue_at_zero_in_region",
    "laurent_leading",
    "series",
]

NAMES: tuple[str, ...] = (
    ("q", "v")
    + tuple(f"z{i}" for i in range(1, 11))
    + tuple(f"y{i}" for i in range(1, 7))
    + ("t", "x", "w")
)
NVARS = len(NAMES)
INDEX = {name: i for i, name in enumerate(NAMES)}
CTX = flint.fmpz_mpoly_ctx.get(NAMES, "deglex")
_GENS = CTX.gens()
_ONE = CTX.from_dict({(0,) * NVARS: 1})
_ZERO = CTX.from_dict({})


class PoleError(ZeroDivisionError):
    """Raised when a substitution lands on a pole or a division by zero occurs."""


# ---------------------------------------------------------------------------
# Registry of irreducible denominator factors
# ---------------------------------------------------------------------------

_FACTORS: list = []
_FACTOR_ID: dict[str, int] = {}
_FACTOR_MONO: list[int] = []  # variable index if the factor is a generator, else -1
_FACTORIZATION: dict[str, tuple[int, tuple[tuple[int, int], ...], object]] = {}
_POW_CACHE: dict[tuple[int, int], object] = {}
_SUBS_CACHE: dict[tuple[int, tuple], "Rat"] = {}


def _register(f) -> int:
    """Register a normalized irreducible polynomial and return its id."""
    key = str(f)
    fid = _FACTOR_ID.get(key)
    if fid is None:
        fid = len(_FACTORS)
        _FACTORS.append(f)
        _FACTOR_ID[key] = fid
        mono = -1
        if len(f) == 1:
            exps = next(iter(f.monoms()))
            if sum(exps) == 1:
                mono = exps.index(1)
        _FACTOR_MONO.append(mono)
    return fid


def _fpow(fid: int, e: int):
    if e == 1:
        return _FACTORS[fid]
    key = (fid, e)
    p = _POW_CACHE.get(key)
    if p is None:
        p = _FACTORS[fid] ** e
        _POW_CACHE[key] = p
    return p


def _factorize(p) -> tuple[int, tuple[tuple[int, int], ...], object]:
    """Return ``(const, ((fid, e), ...), unit)`` with ``p = const * prod f^e``.

    ``const`` is a signed integer.  Results are cached by the printed form.
    """
    key = str(p)
    hit = _FACTORIZATION.get(key)
    if hit is not None:
        return hit
    content, facs = p.factor()
    const = int(content)
    out: dict[int, int] = {}
    for f, e in facs:
        if f.leading_coefficient() < 0:
            f = -f
            if e % 2:
                const = -const
        fid = _register(f)
        out[fid] = out.get(fid, 0) + int(e)
    res = (const, tuple(sorted(out.items())), None)
    _FACTORIZATION[key] = res
    return res


def _divide_out(num, den: dict[int, int], fids: Iterable[int] | None = None):
    """Trial-divide ``num`` by the registered factors of ``den`` (in place on den)."""
    keys = list(den) if fids is None else [f for f in fids if f in den]
    for fid in keys:
        f = _FACTORS[fid]
        e = den[fid]
        while e > 0:
            quo, rem = divmod(num, f)
            if rem != 0:
                break
            num = quo
            e -= 1
        if e:
            den[fid] = e
        else:
            del den[fid]
    return num


def _poly_from_dict(d: Mapping[tuple[int, ...], int]):
    return CTX.from_dict(dict(d))


# ---------------------------------------------------------------------------
# The fraction type
# ---------------------------------------------------------------------------

RatLike = Union["Rat", int]


class Rat:
    """Canonical exact fraction over the integers in the global variable set."""

    __slots__ = ("num", "den", "c", "_hash")

    def __init__(self, value: int = 0):
        self.num = CTX.from_dict({(0,) * NVARS: int(value)}) if value else _ZERO
        self.den: tuple[tuple[int, int], ...] = ()
        self.c = 1
        self._hash = None

    # -- construction helpers ---------------------------------------------
    @classmethod
    def _raw(cls, num, den: tuple[tuple[int, int], ...], c: int) -> "Rat":
        r = object.__new__(cls)
        r.num = num
        r.den = den
        r.c = c
        r._hash = None
        return r

    @classmethod
    def _build(cls, num, den: dict[int, int], c: int, check=None) -> "Rat":
        """Normalize ``num / (c * prod den)``; ``check`` limits the trial divisions."""
        if num == 0:
            return ZERO
        if c < 0:
            num, c = -num, -c
        if den and (check is None or check):
            num = _divide_out(num, den, check)
        if c != 1:
            g = math.gcd(int(num.content()), c)
            if g != 1:
                num = num / g
                c //= g
        return cls._raw(num, tuple(sorted(den.items())), c)

    @classmethod
    def from_poly(cls, p) -> "Rat":
        if p == 0:
            return ZERO
        return cls._raw(p, (), 1)

    @classmethod
    def from_polys(cls, num, den) -> "Rat":
        """Fraction of two FLINT polynomials (den is factorized)."""
        if den == 0:
            raise PoleError("division by zero polynomial")
        if num == 0:
            return ZERO
        const, facs, _ = _factorize(den)
        return cls._build(num, dict(facs), const)

    # -- basic predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num == 0

    def __bool__(self) -> bool:
        return self.num != 0

    def is_one(self) -> bool:
        return not self.den and self.c == 1 and self.num == 1

    def den_poly(self):
        """The expanded denominator polynomial (including the integer constant)."""
        p = CTX.from_dict({(0,) * NVARS: self.c})
        for fid, e in self.den:
            p = p * _fpow(fid, e)
        return p

    def variables(self) -> set[str]:
        used = set()
        for i, d in enumerate(self.num.degrees()):
            if d:
                used.add(NAMES[i])
        for fid, _ in self.den:
            for i, d in enumerate(_FACTORS[fid].degrees()):
                if d:
                    used.add(NAMES[i])
        return used

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def coerce(x: RatLike) -> "Rat":
        if isinstance(x, Rat):
            return x
        if isinstance(x, int):
            return Rat(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Rat")

    def __neg__(self) -> "Rat":
        if not self:
            return self
        return Rat._raw(-self.num, self.den, self.c)

    def __add__(self, other: RatLike) -> "Rat":
        other = Rat.coerce(other)
        if not other:
            return self
        if not self:
            return other
        if self.den == other.den and self.c == other.c:
            num = self.num + other.num
            return Rat._build(num, dict(self.den), self.c)
        return rsum((self, other))

    __radd__ = __add__

    def __sub__(self, other: RatLike) -> "Rat":
        return self + (-Rat.coerce(other))

    def __rsub__(self, other: RatLike) -> "Rat":
        return Rat.coerce(other) + (-self)

    def __mul__(self, other: RatLike) -> "Rat":
        if isinstance(other, int):
            if other == 0 or not self:
                return ZERO
            if other == 1:
                return self
            return Rat._build(self.num * other, dict(self.den), self.c, check=())
        if not self or not other:
            return ZERO
        if not other.den and other.c == 1 and not self.den and self.c == 1:
            return Rat._raw(self.num * other.num, (), 1)
        an, bn = self.num, other.num
        ad, bd = dict(self.den), dict(other.den)
        if bd:
            an = _divide_out(an, bd)
        if ad:
            bn = _divide_out(bn, ad)
        for fid, e in bd.items():
            ad[fid] = ad.get(fid, 0) + e
        num = an * bn
        c = self.c * other.c
        return Rat._build(num, ad, c, check=())

    __rmul__ = __mul__

    def inverse(self) -> "Rat":
        if not self:
            raise PoleError("inverse of zero")
        const, facs, _ = _factorize(self.num)
        num = CTX.from_dict({(0,) * NVARS: self.c})
        for fid, e in self.den:
            num = num * _fpow(fid, e)
        return Rat._build(num, dict(facs), const, check=())

    def __truediv__(self, other: RatLike) -> "Rat":
        other = Rat.coerce(other)
        if not other:
            raise PoleError("division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other: RatLike) -> "Rat":
        return Rat.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "Rat":
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return ONE
        if not self.den and self.c == 1:
            return Rat._raw(self.num ** e, (), 1)
        den = {fid: k * e for fid, k in self.den}
        return Rat._raw(self.num ** e, tuple(sorted(den.items())), self.c ** e)

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Rat(other)
        if not isinstance(other, Rat):
            return NotImplemented
        return self.den == other.den and self.c == other.c and self.num == other.num

    def __ne__(self, other) -> bool:
        res = self.__eq__(other)
        if res is NotImplemented:
            return res
        return not res

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.to_str())
        return self._hash

    # -- substitution -----------------------------------------------------
    def subs(self, mapping: Mapping[str, "Rat"]) -> "Rat":
        """Substitute monomials (or polynomials) for variables.

        Images must be monomials with integer coefficient (negative exponents
        allowed) or arbitrary polynomials.  Landing on a pole raises
        :class:`PoleError`.
        """
        if not mapping:
            return self
        images = _prepare_images(mapping)
        key = images[0]
        num, mden = _subst_poly(self.num, images)
        den: dict[int, int] = {}
        const = self.c
        for fid, e in self.den:
            ck = (fid, key)
            sub = _SUBS_CACHE.get(ck)
            if sub is None:
                p, md = _subst_poly(_FACTORS[fid], images)
                if p == 0:
                    raise PoleError(f"substitution hits the pole {_FACTORS[fid]} = 0")
                sub = Rat.from_polys(p, md)
                _SUBS_CACHE[ck] = sub
            # sub = num_s / (c_s * den_s); we need 1/sub^e
            const_s, facs_s, _ = _factorize(sub.num)
            const *= const_s ** e
            for f2, e2 in facs_s:
                den[f2] = den.get(f2, 0) + e2 * e
            num = num * (CTX.from_dict({(0,) * NVARS: sub.c ** e}))
            for f2, e2 in sub.den:
                num = num * _fpow(f2, e2 * e)
        res = Rat._build(num, den, const)
        if mden != 1:
            res = res / Rat.from_poly(mden)
        return res

    def subs_var(self, name: str, value: "Rat") -> "Rat":
        return self.subs({name: value})

    # -- structure ----------------------------------------------------------
    def as_monomial(self) -> tuple[int, tuple[int, ...]] | None:
        """Return ``(coeff, exps)`` if self is ``coeff * monomial``, else None."""
        if len(self.num) != 1 or self.c != 1:
            return None
        exps = list(next(iter(self.num.monoms())))
        coeff = int(next(iter(self.num.coeffs())))
        for fid, e in self.den:
            m = _FACTOR_MONO[fid]
            if m < 0:
                return None
            exps[m] -= e
        return coeff, tuple(exps)

    def degree_in(self, names: Iterable[str]) -> int | None:
        """Total degree in the given variables, or None if not homogeneous."""
        idx = [INDEX[n] for n in names]
        degs = {int(sum(m[i] for i in idx)) for m in self.num.monoms()}
        if len(degs) != 1:
            return None if degs else 0
        d = degs.pop()
        for fid, e in self.den:
            fd = {int(sum(m[i] for i in idx)) for m in _FACTORS[fid].monoms()}
            if len(fd) != 1:
                return None
            d -= e * fd.pop()
        return d

    def is_laurent_polynomial(self, names: Iterable[str] | None = None) -> bool:
        """True if every denominator factor is a monomial (in ``names`` if given)."""
        watch = None if names is None else {INDEX[n] for n in names}
        for fid, _ in self.den:
            f = _FACTORS[fid]
            if _FACTOR_MONO[fid] >= 0:
                continue
            if watch is None:
                return False
            degs = f.degrees()
            if any(degs[i] for i in watch):
                return False
        return True

    def derivative(self, name: str) -> "Rat":
        i = INDEX[name]
        out = Rat.from_poly(self.num.derivative(i))
        for fid, e in self.den:
            f = _FACTORS[fid]
            df = f.derivative(i)
            if df != 0:
                out = out - Rat.from_poly(self.num * df * e) / Rat.from_poly(f)
        return out / Rat._raw(_ONE, self.den, self.c)

    # -- serialization --------------------------------------------------------
    def to_str(self) -> str:
        if not self:
            return "0"
        shift = [0] * NVARS
        rest = CTX.from_dict({(0,) * NVARS: self.c})
        for fid, e in self.den:
            m = _FACTOR_MONO[fid]
            if m >= 0:
                shift[m] += e
            else:
                rest = rest * _fpow(fid, e)
        numstr = _laurent_str(self.num, shift)
        if rest == 1:
            return numstr
        return f"({numstr})/({_laurent_str(rest, [0] * NVARS)})"

    __str__ = to_str

    def to_str_pair(self) -> tuple[str, str]:
        """Numerator and denominator strings (monomial factors folded into the numerator)."""
        if not self:
            return "0", "1"
        shift = [0] * NVARS
        rest = CTX.from_dict({(0,) * NVARS: self.c})
        for fid, e in self.den:
            m = _FACTOR_MONO[fid]
            if m >= 0:
                shift[m] += e
            else:
                rest = rest * _fpow(fid, e)
        return _laurent_str(self.num, shift), _laurent_str(rest, [0] * NVARS)

    def __repr__(self) -> str:
        return f"Rat({self.to_str()!r})"

    @classmethod
    def parse(cls, text: str) -> "Rat":
        return _Parser(text).parse()


Scalar = Rat
ZRat = Rat

ZERO = Rat._raw(_ZERO, (), 1)
ONE = Rat._raw(_ONE, (), 1)


def rsum(items: Iterable[Rat]) -> Rat:
    """Sum of many fractions with a single lcm and one cancellation pass."""
    groups: dict[tuple, list] = {}
    for r in items:
        if r.num == 0:
            continue
        key = (r.den, r.c)
        g = groups.get(key)
        if g is None:
            groups[key] = [r.num]
        else:
            g.append(r.num)
    if not groups:
        return ZERO
    parts = []
    for (den, c), nums in groups.items():
        total = nums[0]
        for p in nums[1:]:
            total = total + p
        if total == 0:
            continue
        if len(nums) > 1 and (den or c != 1):
            # the partial sum may share factors with its own denominator
            r = Rat._build(total, dict(den), c)
            parts.append((r.den, r.c, r.num))
        else:
            parts.append((den, c, total))
    if not parts:
        return ZERO
    if len(parts) == 1:
        den, c, total = parts[0]
        return Rat._build(total, dict(den), c)
    lcm_den: dict[int, int] = {}
    attained: dict[int, int] = {}
    lc = 1
    for den, c, _ in parts:
        lc = lc * c // math.gcd(lc, c)
        for fid, e in den:
            cur = lcm_den.get(fid, 0)
            if e > cur:
                lcm_den[fid] = e
                attained[fid] = 1
            elif e == cur:
                attained[fid] += 1
    num = _ZERO
    for den, c, total in parts:
        dd = dict(den)
        mult = total * (lc // c) if lc != c else total
        for fid, e in lcm_den.items():
            k = e - dd.get(fid, 0)
            if k:
                mult = mult * _fpow(fid, k)
        num = num + mult
    check = [fid for fid, cnt in attained.items() if cnt >= 2]
    return Rat._build(num, lcm_den, lc, check=check)


# ---------------------------------------------------------------------------
# Substitution machinery
# ---------------------------------------------------------------------------


def _prepare_images(mapping: Mapping[str, Rat]):
    """Return ``(key, kind, data)`` describing a substitution."""
    polys = {}
    monos = {}
    for name, img in mapping.items():
        img = Rat.coerce(img)
        i = INDEX[name]
        if not img.den and img.c == 1:
            polys[i] = img.num
        mono = img.as_monomial()
        if mono is not None:
            monos[i] = mono
        elif i not in polys:
            raise ValueError(f"image of {name} must be a monomial or polynomial: {img}")
    if len(monos) == len(mapping):
        key = ("m",) + tuple(sorted(monos.items()))
        return key, "mono", monos
    key = ("p",) + tuple(sorted((i, str(p)) for i, p in polys.items()))
    return key, "poly", polys


def _subst_poly(p, images):
    """Substitute into a FLINT polynomial; return ``(poly, monomial_den_poly)``."""
    _, kind, data = images
    if kind == "poly":
        gens = list(_GENS)
        for i, img in data.items():
            gens[i] = img
        return p.compose(*gens), _ONE
    # monomial images (possibly negative exponents): act on exponent vectors
    if all(min(e) >= 0 for _, e in data.values()):
        gens = list(_GENS)
        for i, (coeff, exps) in data.items():
            gens[i] = CTX.from_dict({exps: coeff})
        return p.compose(*gens), _ONE
    items = list(data.items())
    out: dict[tuple[int, ...], int] = {}
    for exps, coeff in zip(p.monoms(), p.coeffs()):
        new = list(exps)
        c = int(coeff)
        for i, (ic, iexp) in items:
            a = exps[i]
            if a:
                new[i] -= a
                for j in range(NVARS):
                    if iexp[j]:
                        new[j] += a * iexp[j]
                if ic != 1:
                    c *= ic ** a
        key = tuple(new)
        out[key] = out.get(key, 0) + c
    out = {k: val for k, val in out.items() if val}
    if not out:
        return _ZERO, _ONE
    mins = [min(k[j] for k in out) for j in range(NVARS)]
    shift = [-m if m < 0 else 0 for m in mins]
    if any(shift):
        out = {tuple(k[j] + shift[j] for j in range(NVARS)): val for k, val in out.items()}
    return CTX.from_dict(out), CTX.from_dict({tuple(shift): 1})


# ---------------------------------------------------------------------------
# Generators and named constants
# ---------------------------------------------------------------------------


def gen(name: str) -> Rat:
    return Rat._raw(_GENS[INDEX[name]], (), 1)


q = gen("q")
v = gen("v")


def z(i: int) -> Rat:
    return gen(f"z{i}")


def y(i: int) -> Rat:
    return gen(f"y{i}")


def qbar(n: int, sign: int = 1) -> Rat:
    """``qbar_+ = v^n`` and ``qbar_- = q^-n v^-n``."""
    if sign > 0:
        return v ** n
    return (q * v) ** (-n)


# ---------------------------------------------------------------------------
# Series, residues
# ---------------------------------------------------------------------------


def _coeffs_in(p, i: int) -> dict[int, object]:
    """Split a polynomial by powers of variable ``i``."""
    groups: dict[int, dict] = {}
    for exps, coeff in zip(p.monoms(), p.coeffs()):
        k = exps[i]
        e2 = exps[:i] + (0,) + exps[i + 1:]
        groups.setdefault(k, {})[e2] = int(coeff)
    return {k: CTX.from_dict(d) for k, d in groups.items()}


def series(g: Rat, name: str, nterms: int) -> tuple[int, list[Rat]]:
    """Laurent expansion of ``g`` at ``name = 0`` with the other variables generic.

    Returns ``(m0, [c_0, ..., c_{nterms-1}])`` with ``g = sum c_j name^(m0+j)``.
    Every denominator factor other than ``name`` itself has a nonzero constant
    term in ``name`` (it is irreducible), so it is inverted as a power series.
    """
    i = INDEX[name]
    if not g:
        return 0, [ZERO] * nterms
    numc = _coeffs_in(g.num, i)
    nmin = min(numc)
    shift = nmin
    series_list: list[list[Rat]] = []
    for fid, e in g.den:
        if _FACTOR_MONO[fid] == i:
            shift -= e
            continue
        f = _FACTORS[fid]
        if f.degrees()[i] == 0:
            inv = [Rat._raw(_ONE, ((fid, e),), 1)] + [ZERO] * (nterms - 1)
            series_list.append(inv)
            continue
        fc = _coeffs_in(f, i)
        f0inv = Rat.from_poly(fc[0]).inverse()
        inv = [f0inv]
        for k in range(1, nterms):
            acc = [Rat.from_poly(fc[j]) * inv[k - j] for j in range(1, k + 1) if j in fc]
            inv.append(-(rsum(acc) * f0inv))
        for _ in range(e):
            series_list.append(inv)
    cur = [Rat.from_poly(numc[nmin + j]) if (nmin + j) in numc else ZERO for j in range(nterms)]
    if g.c != 1:
        inv_c = Rat._raw(_ONE, (), g.c)
        cur = [x * inv_c for x in cur]
    for s in series_list:
        cur = [rsum(cur[a] * s[k - a] for a in range(k + 1) if cur[a] and s[k - a]) for k in range(nterms)]
    return shift, cur


def residue_at(g: Rat, name: str, point: Rat) -> Rat:
    """Residue at ``name = point`` with the convention Res 1/(point - name) = +1.

    Equivalently minus the classical residue.  Only simple poles are allowed.
    """
    point = Rat.coerce(point)
    if not g:
        return ZERO
    i = INDEX[name]
    mapping = {name: point}
    images = _prepare_images(mapping)
    pole = None
    for fid, e in g.den:
        f = _FACTORS[fid]
        if f.degrees()[i] == 0:
            continue
        p, _ = _subst_poly(f, images)
        if p == 0:
            if pole is not None:
                raise PoleError("two factors vanish at the same point")
            if e > 1:
                raise PoleError(f"pole of order {e} along {f} = 0")
            pole = fid
    if pole is None:
        return ZERO
    rest = dict(g.den)
    del rest[pole]
    h = Rat._raw(g.num, tuple(sorted(rest.items())), g.c)
    fprime = Rat.from_poly(_FACTORS[pole].derivative(i))
    classical = h.subs(mapping) / fprime.subs(mapping)
    return -classical


def residue_at_zero_in_region(g: Rat, name: str, mode: str = "residue") -> Rat:
    """Coefficient of ``name^-1`` (mode "residue") or ``name^0`` (mode "constant")
    in the expansion of ``g`` where ``name`` is smaller than every other variable."""
    target = -1 if mode == "residue" else 0
    if mode not in ("residue", "constant"):
        raise ValueError(f"unknown mode {mode!r}")
    if not g:
        return ZERO
    m0, _ = series(g, name, 1)
    if m0 > target:
        return ZERO
    _, coeffs = series(g, name, target - m0 + 1)
    return coeffs[target - m0]


def laurent_leading(g: Rat, scaled: Sequence[str], depth: int) -> list[tuple[int, Rat]]:
    """Substitute ``z -> t z`` for ``z`` in ``scaled`` and expand at ``t = 0``.

    Returns the ``depth + 1`` lowest orders ``(m, coefficient)``, starting at the
    leading order.  Coefficients are free of ``t``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    t = gen("t")
    if "t" in g.variables():
        raise ValueError("the series variable t must not occur in the input")
    scaled_g = g.subs({name: t * gen(name) for name in scaled}) if scaled else g
    m0, coeffs = series(scaled_g, "t", depth + 1)
    return [(m0 + j, c) for j, c in enumerate(coeffs)]


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def _term_str(coeff: int, exps: Sequence[int]) -> str:
    factors = []
    for j, e in enumerate(exps):
        if e == 0:
            continue
        factors.append(NAMES[j] if e == 1 else f"{NAMES[j]}^{e}")
    body = "*".join(factors)
    a = abs(coeff)
    if not body:
        return str(a)
    return body if a == 1 else f"{a}*{body}"


def _laurent_str(p, shift: Sequence[int]) -> str:
    terms = []
    for exps, coeff in zip(p.monoms(), p.coeffs()):
        e = tuple(exps[j] - shift[j] for j in range(NVARS))
        terms.append((e, int(coeff)))
    terms.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
    out = []
    for idx, (e, c) in enumerate(terms):
        s = _term_str(c, e)
        if idx == 0:
            out.append(s if c > 0 else f"-{s}")
        else:
            out.append(f" + {s}" if c > 0 else f" - {s}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\)))")


class _Parser:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        kinds = ("int", "name", "^", "*", "/", "+", "-", "(", ")")
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text!r} at position {pos}")
            for kind, val in zip(kinds, m.groups()):
                if val is not None:
                    self.tokens.append((kind, val))
                    break
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            raise ValueError(f"expected {kind!r} in expression")
        val = self.tokens[self.i][1]
        self.i += 1
        return val

    def parse(self) -> Rat:
        r = self.sum()
        if self.i != len(self.tokens):
            raise ValueError("trailing input")
        return r

    def sum(self) -> Rat:
        acc = [self.product()]
        while self.peek() in ("+", "-"):
            op = self.take(self.peek())
            term = self.product()
            acc.append(term if op == "+" else -term)
        return rsum(acc)

    def product(self) -> Rat:
        r = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take(self.peek())
            rhs = self.unary()
            r = r * rhs if op == "*" else r / rhs
        return r

    def unary(self) -> Rat:
        if self.peek() == "-":
            self.take("-")
            return -self.unary()
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            sign = 1
            if self.peek() == "-":
                self.take("-")
                sign = -1
            base = base ** (sign * int(self.take("int")))
        return base

    def atom(self) -> Rat:
        kind = self.peek()
        if kind == "int":
            return Rat(int(self.take("int")))
        if kind == "name":
            name = self.take("name")
            if name not in INDEX:
                raise ValueError(f"unknown variable {name!r}")
            return gen(name)
        if kind == "(":
            self.take("(")
            r = self.sum()
            self.take(")")
            return r
        raise ValueError("unexpected token")
