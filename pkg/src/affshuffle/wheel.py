"""Iterated residues, wheel conditions and membership in ``A^±``.

For a composition ``λ = (λ_1, ..., λ_u)`` of ``k`` the variables of group ``s``
are ``z_{c_s}, ..., z_{c_s + λ_s - 1}`` with anchors ``c_s = 1 + λ_1 + ... +
λ_{s-1}``.  The residue chain specializes ``z_{c_s + e} = z_{c_s} qbar^{2e}``
one variable at a time and then renames ``z_{c_s}`` to ``y_s``.

Each step is the residue of ``g dx / x`` in the spectral ratio
``x = z_{c_s + e - 1} / z_{c_s + e}`` with ``Res 1/(α - x) = +1``.  In terms of the
variable itself this is the classical residue of ``g dz / z`` at the
specialization point.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

from .ring import ONE, PoleError, Rat, gen, q, qbar, residue_at
from .rmatrix import D, f
from .tensor import MatRat, compose, embed, permutation_operator
from .shuffle import is_symmetric

__all__ = [
    "anchors",
    "compositions",
    "iterated_residue",
    "wheel_rhs_factors",
    "wheel_extract",
    "WheelFailure",
    "is_in_A",
    "Membership",
    "extract_top",
    "check_extract_properties",
    "pole_free",
]


class WheelFailure(ValueError):
    """Raised when a residue does not factor through the wheel prescription."""


def anchors(lam: Sequence[int]) -> list[int]:
    out, c = [], 1
    for part in lam:
        out.append(c)
        c += part
    return out


def compositions(k: int):
    """Compositions of ``k`` in lexicographic order."""
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in compositions(k - first):
            yield (first,) + rest


def _zv(a: int) -> Rat:
    return gen(f"z{a}")


def _yv(s: int) -> Rat:
    return gen(f"y{s}")


def _step_residue(g: Rat, name: str, point: Rat) -> Rat:
    # residue_at uses the opposite sign convention to the classical dz/z residue
    return -residue_at(g / gen(name), name, point)


def iterated_residue(X: MatRat, lam: Sequence[int], sign: int = 1) -> MatRat:
    """The specialized residue of ``X`` along ``λ``, as an operator on ``V^{⊗k}``
    whose entries are functions of ``y_1..y_u``."""
    lam = tuple(lam)
    if sum(lam) != X.k:
        raise ValueError(f"composition {lam} does not sum to {X.k}")
    qb2 = qbar(X.n, sign) ** 2
    cur = X
    cs = anchors(lam)
    for c, part in zip(cs, lam):
        for e in range(1, part):
            name = f"z{c + e}"
            point = _zv(c) * qb2 ** e

            def step(g, name=name, point=point):
                try:
                    return _step_residue(g, name, point)
                except PoleError as exc:
                    raise PoleError(f"along {name} = z{c}*qbar^{2 * e}: {exc}") from None

            cur = cur.map(step)
    mapping = {f"z{c}": _yv(s) for s, c in enumerate(cs, 1)}
    out = cur.subs(mapping)
    out.var = "y"
    return out


# ---------------------------------------------------------------------------
# Right-hand side of the wheel condition
# ---------------------------------------------------------------------------


def _cycle(lam: Sequence[int]) -> tuple[int, ...]:
    """``c_s ↦ c_s + 1 ↦ ... ↦ c_{s+1} - 1 ↦ c_s`` for every group."""
    perm = []
    for c, part in zip(anchors(lam), lam):
        for e in range(part):
            perm.append(c + (e + 1) % part)
    return tuple(perm)


@dataclass
class WheelFactors:
    scalar: Rat
    left: list[MatRat]
    right: list[MatRat]
    left_inv: list[MatRat]
    right_inv: list[MatRat]
    perm: MatRat
    perm_inv: MatRat


def _R_at(n: int, a: int, b: int, k: int, x: Rat) -> MatRat:
    from .rmatrix import R

    return embed(R(n, x), (a, b), k, relabel=False)


def _R_at_inverse(n: int, a: int, b: int, k: int, x: Rat) -> MatRat:
    from .rmatrix import R

    return embed(R(n, 1 / x), (b, a), k, relabel=False).scale(1 / f(x))


def wheel_rhs_factors(n: int, lam: Sequence[int], sign: int = 1) -> WheelFactors:
    """All ingredients of the wheel right-hand side around ``X^{(λ)}``."""
    lam = tuple(lam)
    k, u = sum(lam), len(lam)
    cs = anchors(lam)
    qb2 = qbar(n, sign) ** 2
    ys = [_yv(s) for s in range(1, u + 1)]
    pts = [(s, d) for s in range(u) for d in range(1, lam[s])]
    scalar = (1 / q - q) ** (k - u)
    for a, b in itertools.combinations(pts, 2):
        (s, d), (t, e) = a, b
        scalar = scalar * f(ys[s] * qb2 ** d / (ys[t] * qb2 ** e))
    left, left_inv = [], []
    for s in reversed(range(u)):
        for t in range(s, u):
            for e in range(1, lam[t]):
                x = ys[s] / (ys[t] * qb2 ** e)
                left.append(_R_at(n, cs[s], cs[t] + e, k, x))
                left_inv.append(_R_at_inverse(n, cs[s], cs[t] + e, k, x))
    right, right_inv = [], []
    for s in range(u):
        for t in reversed(range(s + 1, u)):
            for e in reversed(range(1, lam[t])):
                x = ys[t] * qb2 ** e / (ys[s] * qb2 ** lam[s])
                right.append(_R_at(n, cs[t] + e, cs[s], k, x))
                right_inv.append(_R_at_inverse(n, cs[t] + e, cs[s], k, x))
    cyc = _cycle(lam)
    perm = permutation_operator(n, cyc)
    inv = [0] * k
    for a, b in enumerate(cyc, 1):
        inv[b - 1] = a
    perm_inv = permutation_operator(n, tuple(inv))
    return WheelFactors(scalar, left, right, left_inv, right_inv, perm, perm_inv)


def _dmat(n: int, k: int, power: int) -> MatRat:
    out = MatRat.identity(n, k)
    for a in range(1, k + 1):
        out = compose(out, D(n, a, k))
    if power == -1:
        out = out.map(lambda val: 1 / val)
    return out


def _assemble(Y_full: MatRat, fac: WheelFactors) -> MatRat:
    acc = MatRat.identity(Y_full.n, Y_full.k)
    for m in fac.left:
        acc = compose(acc, m)
    acc = compose(acc, Y_full)
    for m in fac.right:
        acc = compose(acc, m)
    return compose(acc, fac.perm).scale(fac.scalar)


def wheel_extract(X: MatRat, lam: Sequence[int], sign: int = 1) -> MatRat:
    """Solve the wheel condition for ``X^{(λ)}`` (an operator on ``V^{⊗u}`` in
    ``y_1..y_u``); raises :class:`WheelFailure` if no such operator exists."""
    lam = tuple(lam)
    n, k = X.n, X.k
    res = iterated_residue(X, lam, sign)
    if sign < 0:
        res = compose(_dmat(n, k, -1), res)
    fac = wheel_rhs_factors(n, lam, sign)
    acc = MatRat.identity(n, k)
    for m in reversed(fac.left_inv):
        acc = compose(acc, m)
    acc = compose(acc, res)
    acc = compose(acc, fac.perm_inv)
    for m in reversed(fac.right_inv):
        acc = compose(acc, m)
    Y_full = acc.scale(1 / fac.scalar)
    cs = anchors(lam)
    Y = _restrict(Y_full, cs)
    if embed(Y, cs, k, relabel=False) != Y_full:
        raise WheelFailure(f"residue along {lam} is not of the form X^(λ) ⊗ 1")
    Y.var = "y"
    return Y


def _restrict(Y_full: MatRat, slots: Sequence[int]) -> MatRat:
    """Read off ``Y`` from ``Y_full = Y_{slots} ⊗ 1`` using index 1 elsewhere."""
    keep = [a - 1 for a in slots]
    others = [a for a in range(Y_full.k) if a not in keep]
    out = {}
    for (r, c), val in Y_full.entries.items():
        if all(r[a] == 1 and c[a] == 1 for a in others):
            out[(tuple(r[a] for a in keep), tuple(c[a] for a in keep))] = val
    return MatRat(Y_full.n, len(slots), out, "y")


def extract_top(X: MatRat, sign: int = 1) -> MatRat:
    """``X^{(k)}(y)`` for ``λ = (k)``, a single-slot operator in ``y_1``."""
    return wheel_extract(X, (X.k,), sign)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def pole_free(X: MatRat, sign: int = 1) -> bool:
    """True iff ``X · prod_{i≠j} (z_i - z_j qbar^2)`` is a Laurent polynomial."""
    qb2 = qbar(X.n, sign) ** 2
    k = X.k
    mult = ONE
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i != j:
                mult = mult * (_zv(i) - _zv(j) * qb2)
    names = [f"z{a}" for a in range(1, k + 1)]
    return all((val * mult).is_laurent_polynomial(names) for val in X.entries.values())


@dataclass
class Membership:
    ok: bool
    poles_ok: bool
    symmetric: bool
    failed_composition: tuple[int, ...] | None = None
    message: str = ""
    extracted: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def is_in_A(X: MatRat, sign: int = 1) -> Membership:
    poles = pole_free(X, sign)
    sym = is_symmetric(X)
    if not (poles and sym):
        return Membership(False, poles, sym, message="pole shape" if not poles else "not symmetric")
    extracted = {}
    for lam in compositions(X.k):
        try:
            extracted[lam] = wheel_extract(X, lam, sign)
        except (WheelFailure, PoleError) as exc:
            return Membership(False, poles, sym, lam, str(exc), extracted)
    return Membership(True, poles, sym, extracted=extracted)


def check_extract_properties(X: MatRat, lam: Sequence[int], sign: int = 1) -> dict:
    """Pole locations of ``X^{(λ)}`` and the exchange symmetry of equal parts.

    Allowed denominators are monomials and, for ``s < t`` and ``0 ≤ d < λ_s``,
    the linear forms ``y_s qbar^{2d} - y_t qbar^{-2}`` and
    ``y_s qbar^{2d} - y_t qbar^{2 λ_t}``.
    """
    lam = tuple(lam)
    Y = wheel_extract(X, lam, sign)
    return extract_report(Y, lam, sign)


def extract_report(Y: MatRat, lam: Sequence[int], sign: int = 1) -> dict:
    lam = tuple(lam)
    n, u = Y.n, len(lam)
    qb2 = qbar(n, sign) ** 2
    ys = [_yv(s) for s in range(1, u + 1)]
    allowed = ONE
    for s in range(u):
        for t in range(s + 1, u):
            for d in range(lam[s]):
                allowed = allowed * (ys[s] * qb2 ** d - ys[t] / qb2)
                allowed = allowed * (ys[s] * qb2 ** d - ys[t] * qb2 ** lam[t])
    names = [f"y{s}" for s in range(1, u + 1)]
    bad = [
        key for key, val in Y.entries.items() if not (val * allowed).is_laurent_polynomial(names)
    ]
    symmetric_pairs = []
    sym_ok = True
    for s in range(u - 1):
        if lam[s] == lam[s + 1]:
            perm = list(range(1, u + 1))
            perm[s], perm[s + 1] = perm[s + 1], perm[s]
            swapped = Y.conjugate(perm)
            lhs = compose(_R_at(n, s + 1, s + 2, u, ys[s] / ys[s + 1]), swapped)
            rhs = compose(Y, _R_at(n, s + 1, s + 2, u, ys[s] / ys[s + 1]))
            ok = lhs == rhs
            sym_ok &= ok
            symmetric_pairs.append((s + 1, s + 2, ok))
    return {
        "composition": list(lam),
        "poles_ok": not bad,
        "bad_entries": [list(map(list, key)) for key in bad],
        "symmetry_ok": sym_ok,
        "symmetric_pairs": symmetric_pairs,
        "ok": not bad and sym_ok,
    }
