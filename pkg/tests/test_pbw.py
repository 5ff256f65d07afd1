import math
from fractions import Fraction

import pytest

from affshuffle import pbw
from affshuffle.pbw import (
    F,
    F_mu,
    Fbar,
    P_imaginary_solve,
    P_simple,
    P_simple_bar,
    SlopeError,
    alpha,
    delta_mu_split,
    psi_of,
    psi_pairing_form,
    slope_membership,
    unit,
)
from affshuffle.ring import ZERO, gen, q, v
from affshuffle.shuffle import shuffle_product
from affshuffle.tensor import MatRat, element_degree, interval, tensor

N = 2
LABELS = [(i, i + d) for i in (1, 2) for d in (1, 2, 3, 4)]


def qbar_frac(m, sign=1):
    """``qbar_±^{m/2}`` at ``n = 2`` written out by hand: ``qbar_+ = v^2``, ``qbar_- = (qv)^-2``."""
    return v ** m if sign > 0 else (q * v) ** (-m)


@pytest.mark.parametrize("i, j", LABELS)
def test_single_factor_generator(i, j):
    ib, jb = (i - 1) % N + 1, (j - 1) % N + 1
    z_power = (j - 1) // N - (i - 1) // N
    expected = MatRat(N, 1, {((jb,), (ib,)): gen("z1") ** z_power * v ** (2 * ib)})
    assert F(N, 1, i, j, 1) == expected


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("i, j", LABELS)
def test_alpha_on_f_and_fbar(i, j, k):
    g = math.gcd(k, j - i)
    assert alpha(N, 1, i, j, F(N, 1, i, j, k)) == (1 - q ** 2) * qbar_frac(g)
    assert alpha(N, 1, i, j, Fbar(N, 1, i, j, k)) == (1 - q ** -2) * qbar_frac(-g)


@pytest.mark.parametrize("i, j", LABELS)
def test_alpha_minus_single_factor(i, j):
    for i2, j2 in LABELS:
        if j2 - i2 != j - i:
            continue
        same = (i2, j2) == (i, j)
        expect_f = (1 - q ** 2) * qbar_frac(1, -1) if same else ZERO
        expect_fbar = (1 - q ** -2) * qbar_frac(-1, -1) if same else ZERO
        assert alpha(N, -1, i2, j2, F(N, -1, i, j, 1)) == expect_f
        assert alpha(N, -1, i2, j2, Fbar(N, -1, i, j, 1)) == expect_fbar


def test_alpha_vanishes_off_degree():
    assert alpha(N, 1, 1, 3, F(N, 1, 1, 2, 1)) == ZERO


def test_alpha_of_single_factor_e21():
    assert alpha(N, 1, 1, 2, F(N, 1, 1, 2, 1)) == (1 - q ** 2) * v


def test_f_mu_zero_when_not_integral():
    assert F_mu(N, 1, 1, 2, Fraction(2)) is None
    assert F_mu(N, 1, 1, 3, Fraction(2)) == F(N, 1, 1, 3, 1)


@pytest.mark.parametrize("i, j, k", [(1, 2, 1), (1, 4, 1), (2, 3, 2), (1, 2, 3)])
def test_p_simple_normalization(i, j, k):
    assert P_simple(N, 1, i, j, k) == F(N, 1, i, j, k).scale(1 / (v * (1 - q ** 2)))
    assert P_simple(N, 1, i, j, k) == P_simple_bar(N, 1, i, j, k)


def test_p_simple_minus_sign():
    assert P_simple(N, -1, 1, 2, 1) == F(N, -1, 1, 2, 1).scale(-1 / (qbar_frac(1, -1) * (1 - q ** 2)))
    assert P_simple(N, -1, 1, 2, 1) == P_simple_bar(N, -1, 1, 2, 1)


def test_p_simple_rejects_imaginary_label():
    with pytest.raises(ValueError, match="gcd"):
        P_simple(N, 1, 1, 3, 2)


# ---------------------------------------------------------------------------
# Leading coproduct
# ---------------------------------------------------------------------------


def gen_or_unit(maker, i, j, mu):
    return unit(N) if i == j else maker(N, 1, i, j, int(Fraction(j - i) / mu))


def coproduct_oracle(i, j, k, bar, flip=1):
    """Summands read off the closed coproduct formulas, keyed by split and ψ exponent."""
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
        T = tensor(gen_or_unit(maker, *left, mu), gen_or_unit(maker, *right, mu))
        if bar:
            dL = interval(i, s, N)
            T = T.scale(q ** (flip * (psi_pairing_form(dL, (j - 1) % N + 1) - psi_pairing_form(dL, (s - 1) % N + 1))))
        out.setdefault(int(arity), {})[psi_of(interval(*right, N))] = T
    return out


def split_of(X, l, mu):
    return {t.psi: t.tensor for t in delta_mu_split(X, l, mu)}


@pytest.mark.parametrize("bar", [False, True])
@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("i, j", LABELS)
def test_coproduct_summands(i, j, k, bar):
    X = (Fbar if bar else F)(N, 1, i, j, k)
    mu = Fraction(j - i, k)
    expected = coproduct_oracle(i, j, k, bar)
    for l in range(k + 1):
        assert split_of(X, l, mu) == expected.get(l, {})


def test_psi_exponent_sign_matters():
    X = Fbar(N, 1, 1, 3, 2)
    flipped = coproduct_oracle(1, 3, 2, True, flip=-1)
    assert split_of(X, 1, Fraction(1)) != flipped[1]


def test_split_terms_factor():
    terms = delta_mu_split(F(N, 1, 1, 3, 2), 1, 1)
    assert terms and all(t.left is not None and t.right is not None for t in terms)
    for t in terms:
        assert tensor(t.left, t.right) == t.tensor


@pytest.mark.parametrize("bar", [False, True])
@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("i, j", LABELS)
def test_generators_are_slope_bounded(i, j, k, bar):
    X = (Fbar if bar else F)(N, 1, i, j, k)
    mu = Fraction(j - i, k)
    assert slope_membership(X, mu)
    assert sum(element_degree(X).hdeg) == mu * X.k


def test_mixed_slope_product_is_not_in_b():
    X = shuffle_product(F(N, 1, 1, 3, 1), F(N, 1, 3, 4, 1))
    assert not slope_membership(X, Fraction(3, 2))
    with pytest.raises(SlopeError):
        delta_mu_split(X, 1, Fraction(3, 2))


def test_large_z_power_breaks_small_slope():
    X = MatRat(N, 1, {((1,), (1,)): gen("z1") ** 5})
    assert not slope_membership(X, 1)
    assert slope_membership(X, 100)


# ---------------------------------------------------------------------------
# Relations, imaginary generators and ranks
# ---------------------------------------------------------------------------


def test_rel3_at_mandated_instance():
    check = pbw.rel3_instance(N, (1, 2, 1), (2, 4, 1))
    assert check.holds
    assert check.data["mu"] == Fraction(3, 2)
    assert sorted((t["t"], t["s"]) for t in check.data["terms"]) == [(-1, 1), (2, 4)]


def test_rel3_congruence_reading_fails():
    # Keeping only the (t, s) = (2, 4) summand, whose labels are congruent to [i';j'), breaks the relation.
    check = pbw.rel3_instance(N, (1, 2, 1), (2, 4, 1))
    congruent_only = Fbar(N, 1, 1, 4, 2).scale(pbw.rel3_gamma(N, 4, 2, 4, 1))
    assert check.lhs != congruent_only
    assert check.lhs == Fbar(N, 1, 1, 4, 2).scale(-q ** 2 / (q ** 2 - 1))


@pytest.mark.parametrize("r, coefficient", [(1, v), (2, -1 / v)])
def test_rel2_with_imaginary_generator(r, coefficient):
    check = pbw.rel2_instance(N, (1, 2, 1), 1, 1, r)
    assert check.data["coefficient"] == coefficient
    assert check.holds


@pytest.mark.parametrize("r", [1, 2])
def test_imaginary_generator_is_unique(r):
    sol = P_imaginary_solve(N, 2, 1, r)
    assert sol.rank == sol.candidates
    assert sol.element == P_simple(N, 1, r, r + 2, 1)


def test_imaginary_with_zero_targets_is_zero():
    sol = P_imaginary_solve(N, 2, 1, 1, targets=[ZERO, ZERO])
    assert sol.element.is_zero()


def test_imaginary_rejects_bad_r():
    with pytest.raises(ValueError):
        P_imaginary_solve(N, 2, 1, 3)


@pytest.mark.parametrize(
    "i, j, mu, vanishes",
    [
        (1, 3, 1, True),
        (1, 2, 1, True),
        (1, 4, 1, True),
        (2, 4, 1, True),
        (1, 3, Fraction(1, 2), True),
        (1, 5, 2, False),
        (1, 3, 2, False),
        (1, 4, Fraction(3, 2), False),
    ],
)
def test_antipode_sum_exploratory(i, j, mu, vanishes):
    total = pbw.antipode_sum(N, i, j, mu)
    assert (total is None or total.is_zero()) == vanishes


@pytest.mark.parametrize(
    "mu, d, k",
    [
        (Fraction(1), (1, 1), 2),
        (Fraction(1), (1, 2), 3),
        (Fraction(2), (2, 2), 2),
        (Fraction(1, 2), (1, 0), 2),
        (Fraction(3, 2), (1, 2), 2),
        (Fraction(2, 3), (1, 1), 3),
    ],
)
def test_ordered_products_span_expected_dimension(mu, d, k):
    rank, count = pbw.magic_rank(N, mu, d, k)
    assert count > 0
    assert rank == count
