"""Exact linear algebra over the coefficient field, for shuffle elements."""

from __future__ import annotations

from collections.abc import Sequence

from .ring import _FACTOR_MONO, _ONE, CTX, INDEX, NVARS, ONE, ZERO, Rat, gen, qbar
from .tensor import MatRat

__all__ = ["vectorize", "laurent_terms", "solve_linear", "rank", "pole_clearing", "Echelon", "independent_subset"]


def vectorize(X: MatRat, mult: Rat, names: Sequence[str]) -> dict:
    """Coefficients of ``X * mult`` over the basis (matrix unit, z-monomial)."""
    vec = {}
    for key, val in X.entries.items():
        prod = val * mult
        if not prod.is_laurent_polynomial(names):
            raise ValueError("entry is not a Laurent polynomial after clearing poles")
        for mono, coeff in laurent_terms(prod, names).items():
            vec[(key, mono)] = coeff
    return vec


def laurent_terms(g: Rat, names: Sequence[str]) -> dict[tuple[int, ...], Rat]:
    """Split a Laurent polynomial in ``names`` into ``{exponents: coefficient}``."""
    idx = [INDEX[nm] for nm in names]
    shift = [0] * NVARS
    scalar_den = []
    for fid, e in g.den:
        m = _FACTOR_MONO[fid]
        if m in idx:
            shift[m] += e
        else:
            scalar_den.append((fid, e))
    groups: dict[tuple[int, ...], dict] = {}
    for exps, coeff in zip(g.num.monoms(), g.num.coeffs()):
        key = tuple(exps[i] - shift[i] for i in idx)
        rest = list(exps)
        for i in idx:
            rest[i] = 0
        groups.setdefault(key, {})[tuple(rest)] = int(coeff)
    den = Rat._raw(_ONE, tuple(scalar_den), g.c)
    out = {}
    for key, d in groups.items():
        out[key] = Rat.from_poly(CTX.from_dict(d)) * den
    return out


def solve_linear(columns: Sequence[dict], target: dict) -> tuple[list[Rat] | None, int]:
    """Exact solve of ``sum_c x_c columns[c] = target`` by Gaussian elimination.

    Returns ``(solution or None, rank)``; raises if the solution is not unique.
    """
    keys = sorted({k for col in columns for k in col} | set(target), key=repr)
    rows = []
    for key in keys:
        row = {c: col[key] for c, col in enumerate(columns) if key in col}
        rhs = target.get(key, ZERO)
        if row or rhs:
            rows.append([row, rhs])
    ncols = len(columns)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((a for a in range(r, len(rows)) if rows[a][0].get(c)), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][0][c].inverse()
        rows[r][0] = {cc: val * p for cc, val in rows[r][0].items()}
        rows[r][1] = rows[r][1] * p
        for a in range(len(rows)):
            if a == r:
                continue
            fct = rows[a][0].get(c)
            if not fct:
                continue
            row = dict(rows[a][0])
            for cc, val in rows[r][0].items():
                s = row.get(cc, ZERO) - fct * val
                if s:
                    row[cc] = s
                else:
                    row.pop(cc, None)
            rows[a][0] = row
            rows[a][1] = rows[a][1] - fct * rows[r][1]
        pivots.append(c)
        r += 1
    for row, rhs in rows[r:]:
        if rhs:
            return None, r
    if r < ncols:
        raise ValueError(f"solution not unique: rank {r} < {ncols} unknowns")
    sol = [ZERO] * ncols
    for a, c in enumerate(pivots):
        sol[c] = rows[a][1]
    return sol, r


class Echelon:
    """Incremental row echelon form of sparse vectors (dicts) over the field."""

    def __init__(self):
        self.rows: list[tuple[object, dict]] = []

    def reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        for pkey, row in self.rows:
            c = vec.get(pkey)
            if not c:
                continue
            for key, val in row.items():
                s = vec.get(key, ZERO) - c * val
                if s:
                    vec[key] = s
                else:
                    vec.pop(key, None)
        return vec

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return False if it was already in the span."""
        red = self.reduce(vec)
        if not red:
            return False
        pkey = min(red, key=repr)
        inv = red[pkey].inverse()
        red = {key: val * inv for key, val in red.items()}
        for idx, (okey, row) in enumerate(self.rows):
            c = row.get(pkey)
            if c:
                new = dict(row)
                for key, val in red.items():
                    s = new.get(key, ZERO) - c * val
                    if s:
                        new[key] = s
                    else:
                        new.pop(key, None)
                self.rows[idx] = (okey, new)
        self.rows.append((pkey, red))
        return True

    def __len__(self) -> int:
        return len(self.rows)


def rank(columns: Sequence[dict]) -> int:
    ech = Echelon()
    for col in columns:
        ech.add(col)
    return len(ech)


def independent_subset(columns: Sequence[dict]) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    ech = Echelon()
    return [c for c, col in enumerate(columns) if ech.add(col)]


def pole_clearing(n: int, k: int, sign: int) -> Rat:
    qb2 = qbar(n, sign) ** 2
    out = ONE
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i != j:
                out = out * (gen(f"z{i}") - gen(f"z{j}") * qb2)
    return out
