"""Acceptance gates, one test per criterion.

Each test checks exact equality of rational functions (no tolerance) and
asserts its own time budget.  ``conftest.py`` prints one PASS/FAIL line per
criterion at the end of the run.
"""

import itertools
import math
import time
from fractions import Fraction
from functools import cache

import pytest

from affshuffle import classic, pairing, pbw
from affshuffle.pbw import F, Fbar, P_simple
from affshuffle.ring import ONE, ZERO, gen, q, qbar, v
from affshuffle.rmatrix import Q, R, R_ij, Rtilde, Rtilde_ij, f, matrix_ratio_residue, swap
from affshuffle.shuffle import elementary_product, shuffle_product
from affshuffle.tensor import MatRat, element_degree, embed, interval, monomial_degree, tensor
from affshuffle.wheel import extract_top, is_in_A

N = 2
x = gen("x")
LABELS = [(i, i + d) for i in (1, 2) for d in (1, 2, 3, 4)]


def qp(m):
    """``qbar_+^{m/2}`` at ``n = 2``."""
    return v ** m


def qm(m):
    """``qbar_-^{m/2}`` at ``n = 2``, with ``qbar_- = (qv)^-2``."""
    return (q * v) ** (-m)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False

    def check(self):
        assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def collect(failures, label, lhs, rhs):
    if lhs != rhs:
        failures.append(label)


# ---------------------------------------------------------------------------


@pytest.mark.criterion(1, "Yang-Baxter and unitarity at n = 2, 3")
def test_criterion_01_yang_baxter_and_unitarity():
    failures = []
    with Budget(10) as b:
        for n in (2, 3):
            lhs = R_ij(n, 1, 2, 3) @ R_ij(n, 1, 3, 3) @ R_ij(n, 2, 3, 3)
            rhs = R_ij(n, 2, 3, 3) @ R_ij(n, 1, 3, 3) @ R_ij(n, 1, 2, 3)
            collect(failures, ("ybe", n), lhs, rhs)
            unit = R(n, x) @ embed(R(n, 1 / x), (2, 1), 2, relabel=False)
            collect(failures, ("unitarity", n), unit, MatRat.scalar(n, 2, f(x)))
    assert not failures
    b.check()


@pytest.mark.criterion(2, "quasi Yang-Baxter for both signs and matching residues")
def test_criterion_02_quasi_yang_baxter_and_residues():
    failures = []
    with Budget(10) as b:
        for sign in (1, -1):
            def T(a, c):
                return Rtilde_ij(N, a, c, 3, sign)

            R23, R12 = R_ij(N, 2, 3, 3), R_ij(N, 1, 2, 3)
            collect(failures, ("quasi-1", sign), T(2, 1) @ T(3, 1) @ R23, R23 @ T(3, 1) @ T(2, 1))
            collect(failures, ("quasi-2", sign), R12 @ T(3, 1) @ T(3, 2), T(3, 2) @ T(3, 1) @ R12)
        point, P = qbar(N) ** -2, swap(N)
        collect(failures, "res R~", matrix_ratio_residue(Rtilde(N, x), "x", point), P.scale(1 / q - q))
        collect(failures, "res Q", matrix_ratio_residue(Q(N, x), "x", point).scale(q), P)
        collect(failures, "res Qbar", matrix_ratio_residue(Q(N, x, bar=True), "x", point).scale(-1 / q), P)
    assert not failures
    b.check()


def _triples(count, seed):
    import random

    rng = random.Random(seed)
    pool = [MatRat(N, 1, {((i,), (j,)): gen("z1") ** e}) for i in (1, 2) for j in (1, 2) for e in (-1, 0, 1)]
    return [tuple(rng.choice(pool) for _ in range(3)) for _ in range(count)]


@pytest.mark.criterion(3, "shuffle associativity and unit on 20 random triples, both signs")
def test_criterion_03_shuffle_associativity():
    failures = []
    triples = _triples(20, seed=2026)
    one = MatRat.scalar(N, 0, ONE)
    with Budget(120) as b:
        for sign in (1, -1):
            for idx, (A, B, C) in enumerate(triples):
                lhs = shuffle_product(shuffle_product(A, B, sign), C, sign)
                collect(failures, ("assoc", sign, idx), lhs, shuffle_product(A, shuffle_product(B, C, sign), sign))
                collect(failures, ("unit-left", sign, idx), shuffle_product(one, A, sign), A)
                collect(failures, ("unit-right", sign, idx), shuffle_product(A, one, sign), A)
    assert not failures
    b.check()


def _closure_corpus():
    out = [(f"E{i}{j}", MatRat(N, 1, {((i,), (j,)): ONE})) for i in (1, 2) for j in (1, 2)]
    out += [(f"F1[{i};{j})", F(N, 1, i, j, 1)) for i, j in ((1, 2), (2, 3), (1, 3))]
    out += [(f"F2[{i};{j})", F(N, 1, i, j, 2)) for i, j in ((1, 3), (2, 3))]
    return out


CORPUS = _closure_corpus()


@cache
def _product(a, b):
    return shuffle_product(CORPUS[a][1], CORPUS[b][1], 1)


@cache
def _top(a, b=None):
    return extract_top(CORPUS[a][1] if b is None else _product(a, b), 1)


@pytest.mark.slow
@pytest.mark.criterion(4, "symmetric-tensor and wheel closure of the E, F1, F2 corpus")
def test_criterion_04_wheel_closure():
    failures = []
    with Budget(300) as b:
        for a, c in itertools.product(range(len(CORPUS)), repeat=2):
            m = is_in_A(_product(a, c), 1)
            if not (m.ok and m.symmetric):
                failures.append((CORPUS[a][0], CORPUS[c][0], m.message))
    assert not failures
    b.check()


def _labels_of(X):
    h = element_degree(X).hdeg
    return [(s, t) for s in range(-3, 5) for t in range(s + 1, s + 6) if interval(s, t, N) == h]


@pytest.mark.slow
@pytest.mark.criterion(5, "top coefficient and alpha multiplicativity on the same corpus")
def test_criterion_05_quasi_multiplicativity():
    failures = []
    checked = 0
    with Budget(120) as b:
        for a, c in itertools.product(range(len(CORPUS)), repeat=2):
            A, B = CORPUS[a][1], CORPUS[c][1]
            last = element_degree(B).hdeg[-1]
            collect(failures, ("top", a, c), _top(a, c), (_top(a) @ _top(c)).scale(v ** (2 * N * A.k * last)))
            X = _product(a, c)
            for s, j in _labels_of(A):
                for i, s2 in _labels_of(B):
                    if s2 != s:
                        continue
                    lhs = pbw.alpha(N, 1, i, j, X, _top(a, c))
                    rhs = (
                        pbw.alpha(N, 1, s, j, A, _top(a))
                        * pbw.alpha(N, 1, i, s, B, _top(c))
                        * v ** (A.k * (s - i) - B.k * (j - s))
                    )
                    checked += 1
                    collect(failures, ("alpha", a, c, i, s, j), lhs, rhs)
    assert checked > 0
    assert not failures
    b.check()


@pytest.mark.criterion(6, "alpha values on F and Fbar, k <= 3 and both signs at k = 1")
def test_criterion_06_alpha_values():
    failures = []
    with Budget(300) as b:
        for (i, j), k in itertools.product(LABELS, (1, 2, 3)):
            g = math.gcd(k, j - i)
            for u, w in LABELS:
                if w - u != j - i:
                    continue
                hit = (u, w) == (i, j)
                collect(failures, ("F+", i, j, k, u), pbw.alpha(N, 1, u, w, F(N, 1, i, j, k)),
                        (1 - q ** 2) * qp(g) if hit else ZERO)
                collect(failures, ("Fbar+", i, j, k, u), pbw.alpha(N, 1, u, w, Fbar(N, 1, i, j, k)),
                        (1 - q ** -2) * qp(-g) if hit else ZERO)
                if k == 1:
                    collect(failures, ("F-", i, j, u), pbw.alpha(N, -1, u, w, F(N, -1, i, j, 1)),
                            (1 - q ** 2) * qm(1) if hit else ZERO)
                    collect(failures, ("Fbar-", i, j, u), pbw.alpha(N, -1, u, w, Fbar(N, -1, i, j, 1)),
                            (1 - q ** -2) * qm(-1) if hit else ZERO)
    assert not failures
    b.check()


def _gen_or_unit(maker, i, j, mu):
    return pbw.unit(N) if i == j else maker(N, 1, i, j, int(Fraction(j - i) / mu))


def _coproduct_oracle(i, j, k, bar):
    maker = Fbar if bar else F
    mu = Fraction(j - i, k)
    out = {}
    for s in range(i, j + 1):
        if bar:
            left, right, arity = (i, s), (s, j), Fraction(s - i) / mu
        else:
            left, right, arity = (s, j), (i, s), Fraction(j - s) / mu
        if arity.denominator != 1:
            continue
        T = tensor(_gen_or_unit(maker, *left, mu), _gen_or_unit(maker, *right, mu))
        if bar:
            # ψ_j ψ_s^{-1} moved past the left factor of degree [i;s).
            dL = interval(i, s, N)
            jb, sb = (j - 1) % N + 1, (s - 1) % N + 1
            pair = (dL[jb - 1] - dL[jb - 2]) - (dL[sb - 1] - dL[sb - 2])
            T = T.scale(q ** pair)
        h = interval(*right, N)
        psi = tuple(h[t] - h[t - 1] for t in range(N))
        out.setdefault(int(arity), {})[psi] = T
    return out


@pytest.mark.criterion(7, "leading coproduct of F and Fbar summand by summand, k <= 2")
def test_criterion_07_leading_coproduct():
    failures = []
    with Budget(300) as b:
        for (i, j), k, bar in itertools.product(LABELS, (1, 2), (False, True)):
            X = (Fbar if bar else F)(N, 1, i, j, k)
            mu = Fraction(j - i, k)
            expected = _coproduct_oracle(i, j, k, bar)
            for l in range(k + 1):
                got = {t.psi: t.tensor for t in pbw.delta_mu_split(X, l, mu)}
                collect(failures, (i, j, k, bar, l), got, expected.get(l, {}))
    assert not failures
    b.check()


@pytest.mark.criterion(8, "F and Fbar lie in the slope subalgebra B_mu")
def test_criterion_08_slope_membership():
    failures = []
    with Budget(300) as b:
        for (i, j), k, bar in itertools.product(LABELS, (1, 2), (False, True)):
            X = (Fbar if bar else F)(N, 1, i, j, k)
            mu = Fraction(j - i, k)
            if not pbw.slope_membership(X, mu) or sum(element_degree(X).hdeg) != mu * k:
                failures.append((i, j, k, bar))
    assert not failures
    b.check()


@pytest.mark.criterion(9, "q-commutator relation of two simple generators at slope 3/2")
def test_criterion_09_rel3():
    with Budget(120) as b:
        # (i,j,k) = (1,2,1), (i',j',k') = (2,4,1): det = 1*2 - 1*1 = 1 = gcd(2, 3).
        P1, P2 = P_simple(N, 1, 1, 2, 1), P_simple(N, 1, 2, 4, 1)
        lhs = shuffle_product(P1, P2) - shuffle_product(P2, P1)
        qm2 = qm(4)  # qbar_-^2
        gamma_s4 = (1 / q) / (1 / q - q) - qm2 / (qm2 - 1)
        gamma_s1 = -qm(2) / (qm2 - 1)
        mu = Fraction(3, 2)
        rhs = pbw.F_mu(N, 1, -1, 2, mu).scale(gamma_s1) + pbw.Fbar_mu(N, 1, 1, 4, mu).scale(gamma_s4)
        check = pbw.rel3_instance(N, (1, 2, 1), (2, 4, 1))
    assert check.data["det"] == 1 and check.data["mu"] == mu
    assert lhs == rhs
    assert check.lhs == lhs and check.rhs == rhs
    b.check()


@pytest.mark.criterion(10, "imaginary generator at mu = 2, l = 1 and the mixed commutator relation")
def test_criterion_10_imaginary_and_rel2():
    failures = []
    with Budget(120) as b:
        P = P_simple(N, 1, 1, 2, 1)
        for r, coefficient in ((1, v), (2, -1 / v)):
            sol = pbw.P_imaginary_solve(N, 2, 1, r)
            if sol.rank != sol.candidates:
                failures.append(("not unique", r))
            Pim = sol.element
            lhs = shuffle_product(P, Pim) - shuffle_product(Pim, P)
            collect(failures, ("rel2", r), lhs, P_simple(N, 1, 1, 4, 2).scale(coefficient))
    assert not failures
    b.check()


def _opposite_words():
    singles = [(i, j, e) for i in (1, 2) for j in (1, 2) for e in (-1, 0, 1)]

    def degree(word):
        return [sum(t) for t in zip(*(monomial_degree(N, e, (i,), (j,)).hdeg for i, j, e in word))]

    words = list(itertools.product(singles, repeat=2))
    return [(I, J) for I in words for J in words if all(a + c == 0 for a, c in zip(degree(I), degree(J)))]


@pytest.mark.slow
@pytest.mark.criterion(11, "pairing calibration, pairing values and well-definedness")
def test_criterion_11_pairing():
    failures = []
    with Budget(600) as b:
        result = pairing.calibrate(N, 4)
        if sum(result["table"].values()) != 1:
            failures.append(("calibration", result["table"]))
        for (i, j), (u, w) in itertools.product(LABELS, LABELS):
            if w - u != j - i:
                continue
            hit = (i, j) == (u, w)
            Pp, Pm = P_simple(N, 1, i, j, 1), P_simple(N, -1, i, j, 1)
            collect(failures, ("pair1", i, j, u), pairing.pair_general(Pp, F(N, -1, u, w, 1)), -qp(-1) if hit else ZERO)
            collect(failures, ("pair2", i, j, u), pairing.pair_general(Pp, Fbar(N, -1, u, w, 1)), qp(1) if hit else ZERO)
            collect(failures, ("pair1-", i, j, u), pairing.pair_general(F(N, 1, u, w, 1), Pm), qm(-1) if hit else ZERO)
            collect(failures, ("pair2-", i, j, u), pairing.pair_general(Fbar(N, 1, u, w, 1), Pm), -qm(1) if hit else ZERO)
            for Y in (F(N, -1, i, j, 1), Fbar(N, -1, i, j, 1), Pm):
                collect(failures, ("pair-f", i, j, u), pairing.pair_general(Fbar(N, 1, u, w, 1), Y),
                        pbw.alpha(N, -1, u, w, Y) * qm(1))
        for r in (1, 2):
            plus = pbw.P_imaginary_solve(N, 2, 1, r).element
            minus = pbw.P_imaginary_solve(N, 2, 1, r, sign=-1).element
            for u in (1, 2):
                hit = (u - r) % 2 == 0
                collect(failures, ("pair3", r, u), pairing.pair_general(plus, F(N, -1, u, u + 2, 1)), -qp(-1) if hit else ZERO)
                collect(failures, ("pair4", r, u), pairing.pair_general(plus, Fbar(N, -1, u, u + 2, 1)), qp(1) if hit else ZERO)
                collect(failures, ("pair3-", r, u), pairing.pair_general(F(N, 1, u, u + 2, 1), minus), qm(-1) if hit else ZERO)
                collect(failures, ("pair4-", r, u), pairing.pair_general(Fbar(N, 1, u, u + 2, 1), minus), -qm(1) if hit else ZERO)

        def single(i, j, e):
            return MatRat(N, 1, {((i,), (j,)): gen("z1") ** e})

        for I, J in _opposite_words():
            Is, Js = [single(*t) for t in I], [single(*t) for t in J]
            former = pairing.pair_left_elementary(Is, elementary_product(Js, -1))
            latter = pairing.pair_right_elementary(elementary_product(Is, 1), Js)
            collect(failures, ("former-latter", I, J), former, latter)
    assert (result["K1"], result["K2"]) == ("constant", "E_ij")
    assert not failures
    b.check()


@pytest.mark.criterion(12, "rank of ordered products equals the unordered-collection count, k <= 3")
def test_criterion_12_magic_rank():
    failures = []
    cases = 0
    with Budget(600) as b:
        for mu in (Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(3, 2), Fraction(1, 3), Fraction(2, 3)):
            for k in (1, 2, 3):
                size = mu * k
                if size.denominator != 1:
                    continue
                for d0 in range(int(size) + 1):
                    d = (d0, int(size) - d0)
                    if pbw.unordered_collections(N, mu, d, k) == 0:
                        continue
                    rank, count = pbw.magic_rank(N, mu, d, k)
                    cases += 1
                    if rank != count:
                        failures.append((mu, d, k, rank, count))
    assert cases >= 20
    assert not failures
    b.check()


@pytest.mark.criterion(13, "classic A and B elements: wheel conditions and associativity, |d| <= 3")
def test_criterion_13_classic():
    failures = []
    with Budget(300) as b:
        for maker, i, length, k in itertools.product((classic.classic_A, classic.classic_B), (1, 2), (1, 2, 3), (1, 2, 3)):
            X = maker(N, Fraction(length, k), i, i + length)
            if not (X.expr and X.is_symmetric() and classic.classic_wheel_check(X)):
                failures.append((maker.__name__, i, length, k))
        small = [classic.classic_A(N, Fraction(1, k), i, i + 1) for i in (1, 2) for k in (1, 2)]
        small += [classic.classic_B(N, 1, i, i + 1) for i in (1, 2)] + [classic.monomial(N, 1, -1)]
        for A, B, C in itertools.product(small, repeat=3):
            lhs = classic.classic_product(classic.classic_product(A, B), C)
            if lhs != classic.classic_product(A, classic.classic_product(B, C)) or not classic.classic_wheel_check(lhs):
                failures.append("assoc")
    assert not failures
    b.check()
