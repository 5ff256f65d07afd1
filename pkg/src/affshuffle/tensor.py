"""Sparse End(V^{⊗k})-valued rational functions.

A :class:`MatRat` stores the nonzero matrix coefficients of an element of
``End(V^{⊗k})(z_1, ..., z_k)`` as a dictionary keyed by pairs of index tuples
``(rows, cols)`` with entries in ``{1, ..., n}``.  Tensor slot ``a`` carries the
spectral variable ``<var><a>`` (``z_a`` by default, ``y_a`` for extracted
wheel data).
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .ring import ONE, ZERO, Rat, gen, rsum

__all__ = [
    "MatRat",
    "Degree",
    "residue_class",
    "interval",
    "deg_E",
    "E",
    "elementary",
    "tensor",
    "permutation_operator",
    "inverse",
    "monomial_degree",
    "element_degree",
    "Inhomogeneous",
    "compose",
    "product",
    "embed",
    "conjugate_by_permutation",
    "transpose_slot",
    "trace",
]

Key = tuple[tuple[int, ...], tuple[int, ...]]


def residue_class(i: int, n: int) -> int:
    """The representative of ``i`` mod ``n`` in ``{1, ..., n}``."""
    return i - n * ((i - 1) // n)


def _block(i: int, n: int) -> int:
    return (i - 1) // n


def interval(i: int, j: int, n: int) -> tuple[int, ...]:
    """The vector ``[i;j)`` in ``Z^n``; ``[i;j) = -[j;i)`` when ``i > j``."""
    vec = [0] * n
    lo, hi, s = (i, j, 1) if i <= j else (j, i, -1)
    for a in range(lo, hi):
        vec[residue_class(a, n) - 1] += s
    return tuple(vec)


def deg_E(i: int, j: int, n: int) -> tuple[int, ...]:
    """``deg E_ij = -[i;j)`` for matrix indices ``i, j`` in ``{1..n}``."""
    return tuple(-c for c in interval(i, j, n))


class MatRat:
    """Sparse matrix-valued rational function on ``V^{⊗k}``, ``dim V = n``."""

    __slots__ = ("n", "k", "entries", "var")

    def __init__(self, n: int, k: int, entries: Mapping[Key, Rat] | None = None, var: str = "z"):
        self.n = n
        self.k = k
        self.var = var
        clean: dict[Key, Rat] = {}
        for key, val in (entries or {}).items():
            val = Rat.coerce(val)
            if val:
                clean[key] = val
        self.entries = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, n: int, k: int, var: str = "z") -> "MatRat":
        return cls(n, k, {}, var)

    @classmethod
    def identity(cls, n: int, k: int, var: str = "z") -> "MatRat":
        return cls.scalar(n, k, ONE, var)

    @classmethod
    def scalar(cls, n: int, k: int, c, var: str = "z") -> "MatRat":
        c = Rat.coerce(c)
        ents = {}
        if c:
            for idx in itertools.product(range(1, n + 1), repeat=k):
                ents[(idx, idx)] = c
        return cls(n, k, ents, var)

    def _new(self, entries: dict[Key, Rat], k: int | None = None) -> "MatRat":
        out = MatRat.__new__(MatRat)
        out.n = self.n
        out.k = self.k if k is None else k
        out.var = self.var
        out.entries = entries
        return out

    # -- basic access -----------------------------------------------------------

    def entry(self, rows: Sequence[int], cols: Sequence[int]) -> Rat:
        return self.entries.get((tuple(rows), tuple(cols)), ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def variables(self) -> tuple[str, ...]:
        return tuple(f"{self.var}{a}" for a in range(1, self.k + 1))

    def _check(self, other: "MatRat") -> None:
        if self.n != other.n or self.k != other.k:
            raise ValueError(
                f"shape mismatch: (n={self.n}, k={self.k}) vs (n={other.n}, k={other.k})"
            )

    # -- linear structure ---------------------------------------------------------

    def __add__(self, other: "MatRat") -> "MatRat":
        self._check(other)
        out = dict(self.entries)
        for key, val in other.entries.items():
            cur = out.get(key)
            s = val if cur is None else cur + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return self._new(out)

    def __neg__(self) -> "MatRat":
        return self._new({key: -val for key, val in self.entries.items()})

    def __sub__(self, other: "MatRat") -> "MatRat":
        return self + (-other)

    def scale(self, c) -> "MatRat":
        c = Rat.coerce(c)
        if not c:
            return self._new({})
        return self._new({key: val * c for key, val in self.entries.items()})

    def __mul__(self, other):
        if isinstance(other, MatRat):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other: "MatRat") -> "MatRat":
        return compose(self, other)

    def __truediv__(self, c) -> "MatRat":
        return self.scale(Rat.coerce(c).inverse())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatRat):
            return NotImplemented
        return self.n == other.n and self.k == other.k and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.n, self.k, frozenset(self.entries)))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{_fmt_key(key)}: {val.to_str()}" for key, val in sorted(self.entries.items())
        )
        return f"MatRat(n={self.n}, k={self.k}, {{{body}}})"

    def map(self, fn) -> "MatRat":
        """Apply ``fn`` to every entry."""
        out = {}
        for key, val in self.entries.items():
            new = fn(val)
            if new:
                out[key] = new
        return self._new(out)

    def subs(self, mapping: Mapping[str, Rat]) -> "MatRat":
        return self.map(lambda val: val.subs(mapping))

    def with_var(self, var: str) -> "MatRat":
        """Rename the slot variables from ``self.var`` to ``var``."""
        if var == self.var:
            return self
        mapping = {f"{self.var}{a}": gen(f"{var}{a}") for a in range(1, self.k + 1)}
        out = self.subs(mapping)
        out.var = var
        return out

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        rows = []
        for (r, c), val in sorted(self.entries.items()):
            num, den = val.to_str_pair()
            rows.append([list(r), list(c), num, den])
        return {"n": self.n, "k": self.k, "entries": rows}

    @classmethod
    def from_json(cls, data: Mapping) -> "MatRat":
        ents = {}
        for r, c, num, den in data["entries"]:
            ents[(tuple(r), tuple(c))] = Rat.parse(num) / Rat.parse(den)
        return cls(int(data["n"]), int(data["k"]), ents)

    def dense(self) -> list[list[Rat]]:
        """Dense matrix in lexicographic index order (tests only)."""
        idx = list(itertools.product(range(1, self.n + 1), repeat=self.k))
        return [[self.entry(r, c) for c in idx] for r in idx]

    # -- structural operations ----------------------------------------------------

    def embed(self, slots: Sequence[int], N: int, relabel: bool = True) -> "MatRat":
        return embed(self, slots, N, relabel)

    def conjugate(self, perm: Sequence[int]) -> "MatRat":
        return conjugate_by_permutation(self, perm)

    def transpose_slot(self, s: int) -> "MatRat":
        return transpose_slot(self, s)

    def trace(self, slots: Iterable[int] | None = None) -> "MatRat":
        return trace(self, slots)


def _fmt_key(key: Key) -> str:
    r, c = key
    return "E[" + ",".join(f"{a}{b}" for a, b in zip(r, c)) + "]"


def compose(A: MatRat, B: MatRat) -> MatRat:
    """Matrix product ``A ∘ B``."""
    A._check(B)
    by_row: dict[tuple[int, ...], list[tuple[tuple[int, ...], Rat]]] = {}
    for (r, c), val in B.entries.items():
        by_row.setdefault(r, []).append((c, val))
    acc: dict[Key, list[Rat]] = {}
    for (r, m), a in A.entries.items():
        for c, b in by_row.get(m, ()):
            acc.setdefault((r, c), []).append(a * b)
    out = {}
    for key, terms in acc.items():
        s = terms[0] if len(terms) == 1 else rsum(terms)
        if s:
            out[key] = s
    return A._new(out)


def product(mats: Iterable[MatRat]) -> MatRat:
    """Ordered product of an iterable of matrices (left to right)."""
    it = iter(mats)
    acc = next(it)
    for m in it:
        acc = compose(acc, m)
    return acc


def embed(X: MatRat, slots: Sequence[int], N: int, relabel: bool = True) -> MatRat:
    """``X_{a_1 ... a_k}``: act by ``X`` on slots ``a_1..a_k`` of ``V^{⊗N}``.

    With ``relabel`` the variable of slot ``i`` of ``X`` becomes the variable of
    slot ``a_i``; otherwise entries are copied verbatim.
    """
    slots = tuple(slots)
    if len(slots) != X.k:
        raise ValueError("need one slot per tensor factor")
    if len(set(slots)) != len(slots):
        raise ValueError(f"repeated slot index in {slots}")
    if slots and (min(slots) < 1 or max(slots) > N):
        raise ValueError(f"slots {slots} out of range for arity {N}")
    ents = X.entries
    if relabel and slots != tuple(range(1, X.k + 1)):
        mapping = {f"{X.var}{i}": gen(f"{X.var}{a}") for i, a in enumerate(slots, 1)}
        ents = {key: val.subs(mapping) for key, val in ents.items()}
    rest = [a for a in range(1, N + 1) if a not in slots]
    out: dict[Key, Rat] = {}
    for spect in itertools.product(range(1, X.n + 1), repeat=len(rest)):
        for (r, c), val in ents.items():
            row = [0] * N
            col = [0] * N
            for a, i, j in zip(slots, r, c):
                row[a - 1] = i
                col[a - 1] = j
            for a, i in zip(rest, spect):
                row[a - 1] = i
                col[a - 1] = i
            out[(tuple(row), tuple(col))] = val
    res = MatRat.__new__(MatRat)
    res.n, res.k, res.var, res.entries = X.n, N, X.var, out
    return res


def tensor(A: MatRat, B: MatRat) -> MatRat:
    """``A ⊗ B`` with ``B``'s variables shifted past ``A``'s."""
    if A.n != B.n:
        raise ValueError("rank mismatch")
    k, l = A.k, B.k
    if k == 0:
        return B.scale(A.entry((), ()))
    if l == 0:
        return A.scale(B.entry((), ()))
    if l and B.var == A.var:
        mapping = {f"{B.var}{b}": gen(f"{A.var}{b + k}") for b in range(1, l + 1)}
        bents = {key: val.subs(mapping) for key, val in B.entries.items()}
    else:
        bents = B.entries
    out = {}
    for (r1, c1), a in A.entries.items():
        for (r2, c2), b in bents.items():
            out[(r1 + r2, c1 + c2)] = a * b
    return MatRat(A.n, k + l, out, A.var)


def conjugate_by_permutation(X: MatRat, perm: Sequence[int]) -> MatRat:
    """``σ X σ^{-1} = X_{σ(1) ... σ(k)}(z_{σ(1)}, ..., z_{σ(k)})``.

    ``perm`` lists ``σ(1), ..., σ(k)``.
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(1, X.k + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{X.k}")
    return embed(X, perm, X.k, relabel=True)


def permutation_operator(n: int, perm: Sequence[int], var: str = "z") -> MatRat:
    """The operator moving tensor factor ``a`` to position ``perm[a-1]``.

    It satisfies ``P X_{1..k} P^{-1} = X_{σ(1)..σ(k)}`` (without touching
    variables).
    """
    k = len(perm)
    out = {}
    for col in itertools.product(range(1, n + 1), repeat=k):
        row = [0] * k
        for a, target in enumerate(perm):
            row[target - 1] = col[a]
        out[(tuple(row), col)] = ONE
    return MatRat(n, k, out, var)


def transpose_slot(X: MatRat, s: int) -> MatRat:
    """Partial transpose in tensor factor ``s``."""
    i = s - 1
    out = {}
    for (r, c), val in X.entries.items():
        r2 = r[:i] + (c[i],) + r[i + 1:]
        c2 = c[:i] + (r[i],) + c[i + 1:]
        out[(r2, c2)] = val
    return X._new(out)


def trace(X: MatRat, slots: Iterable[int] | None = None) -> MatRat:
    """Partial trace over ``slots`` (all slots by default).

    The remaining slots keep their order and entries are not relabelled.
    """
    slots = sorted(set(range(1, X.k + 1) if slots is None else slots))
    keep = [a for a in range(1, X.k + 1) if a not in slots]
    acc: dict[Key, list[Rat]] = {}
    for (r, c), val in X.entries.items():
        if all(r[a - 1] == c[a - 1] for a in slots):
            key = (tuple(r[a - 1] for a in keep), tuple(c[a - 1] for a in keep))
            acc.setdefault(key, []).append(val)
    out = {key: rsum(vals) for key, vals in acc.items()}
    return MatRat(X.n, len(keep), out, X.var)


def inverse(X: MatRat) -> MatRat:
    """Matrix inverse by Gauss-Jordan elimination over the rational function field.

    Intended for small arities (dense ``n^k`` square system).
    """
    idx = list(itertools.product(range(1, X.n + 1), repeat=X.k))
    size = len(idx)
    pos = {t: a for a, t in enumerate(idx)}
    rows = [dict() for _ in range(size)]
    for (r, c), val in X.entries.items():
        rows[pos[r]][pos[c]] = val
    inv = [{a: ONE} for a in range(size)]
    for col in range(size):
        piv = next((a for a in range(col, size) if rows[a].get(col)), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = rows[col][col].inverse()
        rows[col] = {c: val * p for c, val in rows[col].items()}
        inv[col] = {c: val * p for c, val in inv[col].items()}
        for a in range(size):
            if a == col:
                continue
            fct = rows[a].get(col)
            if not fct:
                continue
            for target, source in ((rows, rows[col]), (inv, inv[col])):
                row = dict(target[a])
                for c, val in source.items():
                    s = row.get(c, ZERO) - fct * val
                    if s:
                        row[c] = s
                    else:
                        row.pop(c, None)
                target[a] = row
    out = {}
    for a, row in enumerate(inv):
        for c, val in row.items():
            out[(idx[a], idx[c])] = val
    return X._new(out)


# ---------------------------------------------------------------------------
# General-index elementary matrices
# ---------------------------------------------------------------------------


def E(n: int, i: int, j: int, slot_var: Rat | None = None, var: str = "z") -> MatRat:
    """``E_ij`` for arbitrary integers, normalised as ``E_{īj̄} z^{⌊(i-1)/n⌋-⌊(j-1)/n⌋}``."""
    zz = gen(f"{var}1") if slot_var is None else slot_var
    power = _block(i, n) - _block(j, n)
    val = zz ** power
    return MatRat(n, 1, {((residue_class(i, n),), (residue_class(j, n),)): val}, var)


def elementary(n: int, pairs: Sequence[tuple[int, int]], var: str = "z") -> MatRat:
    """``E^{(1)}_{i_1 j_1} ⊗ ... ⊗ E^{(k)}_{i_k j_k}`` with general integer indices."""
    k = len(pairs)
    val = ONE
    rows, cols = [], []
    for a, (i, j) in enumerate(pairs, 1):
        rows.append(residue_class(i, n))
        cols.append(residue_class(j, n))
        power = _block(i, n) - _block(j, n)
        if power:
            val = val * gen(f"{var}{a}") ** power
    return MatRat(n, k, {(tuple(rows), tuple(cols)): val}, var)


# ---------------------------------------------------------------------------
# Gradings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Degree:
    """Bidegree ``(hdeg, vdeg)`` of a homogeneous element."""

    hdeg: tuple[int, ...]
    vdeg: int

    @property
    def size(self) -> int:
        return sum(self.hdeg)

    @property
    def slope(self) -> Fraction | None:
        if self.vdeg == 0:
            return None
        return Fraction(self.size, self.vdeg)

    def __add__(self, other: "Degree") -> "Degree":
        return Degree(tuple(a + b for a, b in zip(self.hdeg, other.hdeg)), self.vdeg + other.vdeg)


class Inhomogeneous(ValueError):
    """Raised when a degree is requested for an inhomogeneous element."""


def monomial_degree(n: int, zdeg: int, rows: Sequence[int], cols: Sequence[int]) -> Degree:
    """Degree of ``(z-monomial of total degree zdeg) · E_{rows, cols}``."""
    h = [zdeg] * n
    for i, j in zip(rows, cols):
        for s, c in enumerate(deg_E(i, j, n)):
            h[s] += c
    return Degree(tuple(h), len(rows))


def element_degree(X: MatRat) -> Degree | None:
    """The common degree of all terms of ``X`` (``None`` for ``X = 0``).

    Raises :class:`Inhomogeneous` if the terms disagree.
    """
    names = X.variables()
    found: Degree | None = None
    for (r, c), val in X.entries.items():
        zdeg = val.degree_in(names)
        if zdeg is None:
            raise Inhomogeneous(f"entry {_fmt_key((r, c))} is not homogeneous in {names}")
        d = monomial_degree(X.n, zdeg, r, c)
        if found is None:
            found = d
        elif d != found:
            raise Inhomogeneous(f"terms of degree {found} and {d}")
    return found


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)
