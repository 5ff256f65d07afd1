"""Named batches of exact identity checks, shared by ``affshuffle verify``.

Every check is a pure function returning ``(ok, witness)``. The witness is a
JSON-ready dict describing the instance. On failure it also carries the two
sides that differed.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from . import classic, pairing, pbw
from .pbw import F, Fbar, _qbar_frac
from .ring import ONE, ZERO, Rat, gen, q, qbar, v
from .rmatrix import (
    Q,
    R,
    R_ij,
    Rtilde,
    Rtilde_ij,
    f,
    matrix_ratio_residue,
    swap,
)
from .shuffle import elementary_product, shuffle_product
from .tensor import MatRat, element_degree, embed, interval, monomial_degree, tensor
from .wheel import extract_top, is_in_A

SUITES = (
    "ybe",
    "unitarity",
    "shuffle-assoc",
    "wheel",
    "alpha",
    "coproduct",
    "pbw-relations",
    "pairing",
    "classic",
)

Witness = dict


@dataclass(frozen=True)
class Check:
    id: str
    ref: str
    run: Callable[[], tuple[bool, Witness]]


def _txt(x) -> str:
    if isinstance(x, MatRat):
        return repr(x)
    if isinstance(x, Rat):
        return x.to_str()
    return str(x)


def _cmp(lhs, rhs, **info) -> tuple[bool, Witness]:
    ok = lhs == rhs
    w = {key: _txt(val) if isinstance(val, (Rat, MatRat, Fraction)) else val for key, val in info.items()}
    if not ok:
        w["lhs"], w["rhs"] = _txt(lhs), _txt(rhs)
    return ok, w


# ---------------------------------------------------------------------------
# Closed forms used as expected values
# ---------------------------------------------------------------------------


def expected_alpha(n: int, sign: int, i: int, j: int, k: int, bar: bool) -> Rat:
    """The value of ``α_{±[i;j)}`` on the generator with the same label."""
    g = math.gcd(k, j - i)
    if bar:
        return (1 - q ** -2) * _qbar_frac(n, -g, sign)
    return (1 - q ** 2) * _qbar_frac(n, g, sign)


def _gen_or_unit(fn, n: int, i: int, j: int, mu: Fraction) -> MatRat:
    if i == j:
        return pbw.unit(n)
    return fn(n, 1, i, j, int(Fraction(j - i) / mu))


def expected_coproduct(n: int, i: int, j: int, k: int, bar: bool) -> dict[int, dict[tuple, MatRat]]:
    """Leading coproduct summands of ``F`` or ``F̄``, keyed by split and then ψ exponent."""
    fn = Fbar if bar else F
    mu = Fraction(j - i, k)
    out: dict[int, dict[tuple, MatRat]] = {}
    for s in range(i, j + 1):
        if bar:
            left, right, ka = (i, s), (s, j), Fraction(s - i) / mu
        else:
            left, right, ka = (s, j), (i, s), Fraction(j - s) / mu
        if ka.denominator != 1:
            continue
        T = tensor(_gen_or_unit(fn, n, *left, mu), _gen_or_unit(fn, n, *right, mu))
        if bar:
            dL = interval(i, s, n)
            e = -pbw.psi_pairing_form(dL, (s - 1) % n + 1) + pbw.psi_pairing_form(dL, (j - 1) % n + 1)
            T = T.scale(q ** e)
        out.setdefault(int(ka), {})[pbw.psi_of(interval(*right, n))] = T
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _ybe(n: int, **_) -> list[Check]:
    def ybe():
        lhs = R_ij(n, 1, 2, 3) @ R_ij(n, 1, 3, 3) @ R_ij(n, 2, 3, 3)
        rhs = R_ij(n, 2, 3, 3) @ R_ij(n, 1, 3, 3) @ R_ij(n, 1, 2, 3)
        return _cmp(lhs, rhs, n=n)

    checks = [Check(f"ybe/n={n}", "yang-baxter", ybe)]
    for sign in (1, -1):
        def qybe1(sign=sign):
            T = lambda a, b: Rtilde_ij(n, a, b, 3, sign)  # noqa: E731
            lhs = T(2, 1) @ T(3, 1) @ R_ij(n, 2, 3, 3)
            rhs = R_ij(n, 2, 3, 3) @ T(3, 1) @ T(2, 1)
            return _cmp(lhs, rhs, n=n, sign=sign)

        def qybe2(sign=sign):
            T = lambda a, b: Rtilde_ij(n, a, b, 3, sign)  # noqa: E731
            lhs = R_ij(n, 1, 2, 3) @ T(3, 1) @ T(3, 2)
            rhs = T(3, 2) @ T(3, 1) @ R_ij(n, 1, 2, 3)
            return _cmp(lhs, rhs, n=n, sign=sign)

        tag = "+" if sign > 0 else "-"
        checks.append(Check(f"quasi-ybe-1/{tag}/n={n}", "quasi-yang-baxter", qybe1))
        checks.append(Check(f"quasi-ybe-2/{tag}/n={n}", "quasi-yang-baxter", qybe2))

    x = gen("x")

    def res_rtilde():
        return _cmp(matrix_ratio_residue(Rtilde(n, x), "x", qbar(n) ** -2), swap(n).scale(1 / q - q), n=n)

    def res_q():
        return _cmp(matrix_ratio_residue(Q(n, x), "x", qbar(n) ** -2).scale(q), swap(n), n=n)

    checks.append(Check(f"residue-rtilde/n={n}", "ratio-residue", res_rtilde))
    checks.append(Check(f"residue-q/n={n}", "ratio-residue", res_q))
    return checks


def _unitarity(n: int, **_) -> list[Check]:
    x = gen("x")

    def unit():
        lhs = R(n, x) @ embed(R(n, 1 / x), (2, 1), 2, relabel=False)
        return _cmp(lhs, MatRat.scalar(n, 2, f(x)), n=n)

    return [Check(f"unitarity/n={n}", "unitarity", unit)]


def monomial_pool(n: int, emax: int = 1) -> list[MatRat]:
    """Single-slot monomials ``E_ij z^e`` with ``|e| <= emax``."""
    pool = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for e in range(-emax, emax + 1):
                pool.append(MatRat(n, 1, {((i,), (j,)): gen("z1") ** e}))
    return pool


def random_triples(n: int, count: int, seed: int = 0) -> list[tuple[MatRat, MatRat, MatRat]]:
    """A seeded sample of single-slot monomial triples (total arity 3)."""
    rng = random.Random(seed)
    pool = monomial_pool(n)
    return [tuple(rng.choice(pool) for _ in range(3)) for _ in range(count)]


def _shuffle_assoc(n: int, kmax: int = 3, count: int = 20, **_) -> list[Check]:
    checks = []
    triples = random_triples(n, count, seed=n)
    for sign in (1, -1):
        tag = "+" if sign > 0 else "-"
        for idx, (A, B, C) in enumerate(triples):
            def assoc(A=A, B=B, C=C, sign=sign):
                lhs = shuffle_product(shuffle_product(A, B, sign), C, sign)
                rhs = shuffle_product(A, shuffle_product(B, C, sign), sign)
                return _cmp(lhs, rhs, a=repr(A), b=repr(B), c=repr(C))

            checks.append(Check(f"assoc/{tag}/{idx:02d}", "shuffle-associativity", assoc))

        def unit_law(sign=sign):
            one = MatRat.scalar(n, 0, ONE)
            A = triples[0][0]
            ok = shuffle_product(one, A, sign) == A and shuffle_product(A, one, sign) == A
            return ok, {"a": repr(A)}

        checks.append(Check(f"unit/{tag}", "shuffle-unit", unit_law))
    return checks


def closure_corpus(n: int) -> list[tuple[str, MatRat]]:
    """``E_ij`` and the first ``F^{(1)}``, ``F^{(2)}`` generators."""
    out = [(f"E{i}{j}", MatRat(n, 1, {((i,), (j,)): ONE})) for i in range(1, n + 1) for j in range(1, n + 1)]
    for i, j in ((1, 2), (2, 3), (1, 3)):
        out.append((f"F1[{i};{j})", F(n, 1, i, j, 1)))
    for i, j in ((1, 3), (2, 3)):
        out.append((f"F2[{i};{j})", F(n, 1, i, j, 2)))
    return out


def interval_labels(X: MatRat, span: int = 5) -> list[tuple[int, int]]:
    """Labels ``(i, j)`` in a small window with ``hdeg X = [i;j)``."""
    h = element_degree(X).hdeg
    n = X.n
    return [(a, b) for a in range(-3, n + 3) for b in range(a + 1, a + span + 1) if interval(a, b, n) == h]


def _wheel(n: int, kmax: int = 3, **_) -> list[Check]:
    corpus = closure_corpus(n)
    checks = []
    tops: dict[str, MatRat] = {}

    def top(name, X):
        if name not in tops:
            tops[name] = extract_top(X, 1)
        return tops[name]

    for (na, A), (nb, B) in itertools.product(corpus, repeat=2):
        if max(A.k, B.k) > kmax:
            continue

        def closed(A=A, B=B, na=na, nb=nb):
            m = is_in_A(shuffle_product(A, B, 1), 1)
            w = {"a": na, "b": nb}
            if not m.ok:
                w.update(composition=m.failed_composition, message=m.message)
            return m.ok, w

        def quasi(A=A, B=B, na=na, nb=nb):
            X = shuffle_product(A, B, 1)
            eB = element_degree(B).hdeg[-1]
            rhs = (top(na, A) @ top(nb, B)).scale(v ** (2 * n * A.k * eB))
            return _cmp(extract_top(X, 1), rhs, a=na, b=nb)

        def multiplicative(A=A, B=B, na=na, nb=nb):
            la, lb = interval_labels(A), interval_labels(B)
            X = shuffle_product(A, B, 1)
            Xt = extract_top(X, 1)
            for s, j in la:
                for i, s2 in lb:
                    if s2 != s:
                        continue
                    lhs = pbw.alpha(n, 1, i, j, X, Xt)
                    rhs = (
                        pbw.alpha(n, 1, s, j, A, top(na, A))
                        * pbw.alpha(n, 1, i, s, B, top(nb, B))
                        * v ** (A.k * (s - i) - B.k * (j - s))
                    )
                    if lhs != rhs:
                        return _cmp(lhs, rhs, a=na, b=nb, label=[i, s, j])
            return True, {"a": na, "b": nb}

        checks.append(Check(f"closure/{na}*{nb}", "wheel-closure", closed))
        checks.append(Check(f"quasi/{na}*{nb}", "top-coefficient-multiplicativity", quasi))
        checks.append(Check(f"alpha-product/{na}*{nb}", "alpha-multiplicativity", multiplicative))
    return checks


def _labels(n: int, dmax: int = 4):
    return [(i, i + d) for i in range(1, n + 1) for d in range(1, dmax + 1)]


def _alpha(n: int, kmax: int = 3, **_) -> list[Check]:
    checks = []
    for k in range(1, kmax + 1):
        for i, j in _labels(n):
            for bar in (False, True):
                name = "Fbar" if bar else "F"

                def one(i=i, j=j, k=k, bar=bar):
                    X = (Fbar if bar else F)(n, 1, i, j, k)
                    return _cmp(pbw.alpha(n, 1, i, j, X), expected_alpha(n, 1, i, j, k, bar), label=[i, j, k])

                checks.append(Check(f"alpha/{name}/+/[{i};{j})/k={k}", "alpha-values", one))
    for i, j in _labels(n):
        for bar in (False, True):
            name = "Fbar" if bar else "F"

            def minus(i=i, j=j, bar=bar):
                X = (Fbar if bar else F)(n, -1, i, j, 1)
                for i2, j2 in _labels(n):
                    if j2 - i2 != j - i:
                        continue
                    exp = expected_alpha(n, -1, i, j, 1, bar) if (i2, j2) == (i, j) else ZERO
                    got = pbw.alpha(n, -1, i2, j2, X)
                    if got != exp:
                        return _cmp(got, exp, label=[i, j], other=[i2, j2])
                return True, {"label": [i, j]}

            checks.append(Check(f"alpha/{name}/-/[{i};{j})/k=1", "alpha-values-minus", minus))
    return checks


def _slope_ok(mus, mu) -> bool:
    return not mus or Fraction(mu) in {Fraction(m) for m in mus}


def _coproduct(n: int, kmax: int = 3, mus: Sequence = (), **_) -> list[Check]:
    checks = []
    for bar in (False, True):
        name = "Fbar" if bar else "F"
        for k in range(1, min(kmax, 2) + 1):
            for i, j in _labels(n):
                mu = Fraction(j - i, k)
                if not _slope_ok(mus, mu):
                    continue

                def cop(i=i, j=j, k=k, bar=bar, mu=mu):
                    X = (Fbar if bar else F)(n, 1, i, j, k)
                    exp = expected_coproduct(n, i, j, k, bar)
                    for l in range(k + 1):
                        got = {t.psi: t.tensor for t in pbw.delta_mu_split(X, l, mu)}
                        if got != exp.get(l, {}):
                            return False, {
                                "label": [i, j, k],
                                "split": l,
                                "psi_got": sorted(map(list, got)),
                                "psi_expected": sorted(map(list, exp.get(l, {}))),
                            }
                    return True, {"label": [i, j, k], "mu": str(mu)}

                def member(i=i, j=j, k=k, bar=bar, mu=mu):
                    X = (Fbar if bar else F)(n, 1, i, j, k)
                    return pbw.slope_membership(X, mu), {"label": [i, j, k], "mu": str(mu)}

                checks.append(Check(f"coproduct/{name}/[{i};{j})/k={k}", "coproduct-leading-term", cop))
                checks.append(Check(f"slope/{name}/[{i};{j})/k={k}", "slope-membership", member))
    return checks


def _pbw_relations(n: int, kmax: int = 3, mus: Sequence = (), **_) -> list[Check]:
    def rel3():
        c = pbw.rel3_instance(n, (1, 2, 1), (2, 4, 1))
        return _cmp(c.lhs, c.rhs, mu=c.data["mu"], terms=len(c.data["terms"]))

    checks = [Check("rel3/(1,2,1)x(2,4,1)", "pbw-relation-3", rel3)]
    for r in range(1, math.gcd(n, 2) + 1):
        def imag(r=r):
            sol = pbw.P_imaginary_solve(n, 2, 1, r)
            return sol.rank == sol.candidates, {"r": r, "rank": sol.rank, "candidates": sol.candidates}

        def rel2(r=r):
            c = pbw.rel2_instance(n, (1, 2, 1), 1, 1, r)
            return _cmp(c.lhs, c.rhs, r=r, coefficient=c.data["coefficient"])

        checks.append(Check(f"imaginary/mu=2/l=1/r={r}", "imaginary-generator", imag))
        checks.append(Check(f"rel2/(1,2,1)/r={r}", "pbw-relation-2", rel2))
    slopes = [Fraction(m) for m in mus] or [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2)]
    for mu in slopes:
        for k in range(1, kmax + 1):
            size = mu * k
            if size.denominator != 1:
                continue
            for d in _color_splits(n, int(size)):
                if pbw.unordered_collections(n, mu, d, k) == 0:
                    continue

                def magic(mu=mu, d=d, k=k):
                    rk, cnt = pbw.magic_rank(n, mu, d, k)
                    return rk == cnt, {"mu": str(mu), "d": list(d), "k": k, "rank": rk, "count": cnt}

                checks.append(Check(f"magic/mu={mu}/d={list(d)}/k={k}", "ordered-product-rank", magic))
    return checks


def _color_splits(n: int, size: int):
    for d in itertools.product(range(size + 1), repeat=n):
        if sum(d) == size:
            yield d


def former_latter_pairs(n: int, count: int, seed: int = 1) -> list:
    """Degree-opposite pairs of ``k = 2`` elementary words of ``E_ab z^e``."""
    singles = [(i, j, e) for i in range(1, n + 1) for j in range(1, n + 1) for e in (-1, 0, 1)]

    def deg(word):
        return [sum(x) for x in zip(*[monomial_degree(n, e, (i,), (j,)).hdeg for i, j, e in word])]

    words = list(itertools.product(singles, repeat=2))
    pairs = [(I, J) for I in words for J in words if all(a + b == 0 for a, b in zip(deg(I), deg(J)))]
    return random.Random(seed).sample(pairs, min(count, len(pairs)))


def _pairing(n: int, count: int = 20, **_) -> list[Check]:
    def calib():
        res = pairing.calibrate(n, 3)
        return True, {"K1": res["K1"], "K2": res["K2"], "table": res["table"]}

    checks = [Check("calibration", "pairing-calibration", calib)]
    for i, j in _labels(n):
        def main(i=i, j=j):
            out = []
            for i2, j2 in _labels(n):
                if j2 - i2 != j - i:
                    continue
                same = (i, j) == (i2, j2)
                g = math.gcd(1, j - i)
                Pp, Pm = pbw.P_simple(n, 1, i, j, 1), pbw.P_simple(n, -1, i, j, 1)
                cases = [
                    ("P+,F-", pairing.pair_general(Pp, F(n, -1, i2, j2, 1)), -_qbar_frac(n, -g, 1)),
                    ("P+,Fbar-", pairing.pair_general(Pp, Fbar(n, -1, i2, j2, 1)), _qbar_frac(n, g, 1)),
                    ("F+,P-", pairing.pair_general(F(n, 1, i2, j2, 1), Pm), _qbar_frac(n, -g, -1)),
                    ("Fbar+,P-", pairing.pair_general(Fbar(n, 1, i2, j2, 1), Pm), -_qbar_frac(n, g, -1)),
                ]
                for tag, got, exp in cases:
                    exp = exp if same else ZERO
                    if got != exp:
                        return _cmp(got, exp, case=tag, label=[i, j], other=[i2, j2])
                for Y in (F(n, -1, i, j, 1), Fbar(n, -1, i, j, 1), Pm):
                    got = pairing.pair_general(Fbar(n, 1, i2, j2, 1), Y)
                    exp = pbw.alpha(n, -1, i2, j2, Y) * _qbar_frac(n, g, -1)
                    if got != exp:
                        return _cmp(got, exp, case="Fbar+ against alpha", label=[i, j], other=[i2, j2])
                out.append([i2, j2])
            return True, {"label": [i, j], "others": out}

        checks.append(Check(f"main-pair/[{i};{j})", "pairing-values", main))

    def mk(i, j, e):
        return MatRat(n, 1, {((i,), (j,)): gen("z1") ** e})

    for idx, (I, J) in enumerate(former_latter_pairs(n, count)):
        def fl(I=I, J=J):
            Is, Js = [mk(*x) for x in I], [mk(*x) for x in J]
            a = pairing.pair_left_elementary(Is, elementary_product(Js, -1))
            b = pairing.pair_right_elementary(elementary_product(Is, 1), Js)
            return _cmp(a, b, left=[list(x) for x in I], right=[list(x) for x in J])

        checks.append(Check(f"former-latter/{idx:02d}", "pairing-well-defined", fl))
    return checks


def _classic(n: int, kmax: int = 3, **_) -> list[Check]:
    checks = []
    for i in range(1, n + 1):
        for L in range(1, 4):
            for k in range(1, kmax + 1):
                mu = Fraction(L, k)
                for kind, fn in (("A", classic.classic_A), ("B", classic.classic_B)):
                    def wheel(fn=fn, i=i, L=L, mu=mu):
                        X = fn(n, mu, i, i + L)
                        ok = classic.classic_wheel_check(X) and X.is_symmetric()
                        return ok, {"label": [i, i + L], "mu": str(mu), "zero": not X.expr}

                    checks.append(Check(f"classic-{kind}/[{i};{i + L})/mu={mu}", "classic-wheel", wheel))
    small = classic_small(n)
    for a, b, c in itertools.product(range(len(small)), repeat=3):
        def assoc(a=a, b=b, c=c):
            A, B, C = small[a], small[b], small[c]
            lhs = classic.classic_product(classic.classic_product(A, B), C)
            rhs = classic.classic_product(A, classic.classic_product(B, C))
            ok = lhs == rhs and classic.classic_wheel_check(lhs)
            return ok, {"triple": [a, b, c]}

        checks.append(Check(f"classic-assoc/{a}{b}{c}", "classic-associativity", assoc))
    return checks


def classic_small(n: int) -> list:
    """Degree-``ς^i`` classic elements used for associativity triples."""
    out = [classic.classic_A(n, Fraction(1, k), i, i + 1) for i in range(1, n + 1) for k in (1, 2)]
    out += [classic.classic_B(n, 1, i, i + 1) for i in range(1, n + 1)]
    out.append(classic.monomial(n, 1, -1))
    return out


_BUILDERS = {
    "ybe": _ybe,
    "unitarity": _unitarity,
    "shuffle-assoc": _shuffle_assoc,
    "wheel": _wheel,
    "alpha": _alpha,
    "coproduct": _coproduct,
    "pbw-relations": _pbw_relations,
    "pairing": _pairing,
    "classic": _classic,
}


def build(suite: str, n: int, kmax: int, mus: Sequence = ()) -> list[Check]:
    """The checks of ``suite``, or of every suite for ``"all"``, in a fixed order."""
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name not in _BUILDERS:
            raise KeyError(name)
        out.extend(_BUILDERS[name](n=n, kmax=kmax, mus=mus))
    return out
