import pytest

from demi.errors import DomainError
from demi.halfexp import half_iterate, kappa, ln_half, ln_kappa, psi, special_values, xi, xi_prime
from demi.numerics import central_derivative, matched_digits

from conftest import ref

KNESER_PHI_0 = "0.49856328794111443467"


@pytest.mark.parametrize("x", [0, 1, -1, -2, 2])
def test_psi_reference_points(ctx30, x):
    assert matched_digits(psi(x, ctx30), ref(f"psi({x})")) >= 29


def test_intermediates_at_zero(ctx30):
    v = half_iterate(0, "exp_half", ctx30)
    assert matched_digits(v.h_in, ref("h(e^0)")) >= 29
    assert matched_digits(v.shifted, ref("A(h(e^0))-1/2")) >= 28
    assert matched_digits(v.h_out, ref("h(psi(0))")) >= 29


def test_psi_one_is_exp_kappa(ctx30):
    mp = ctx30.mp
    assert abs(psi(1, ctx30) - mp.exp(kappa(ctx30))) < ctx30.eps(27)


@pytest.mark.parametrize("x", ["-3", "-1", "0", "0.5", "1", "2"])
def test_half_iterate_law(ctx30, x):
    mp = ctx30.mp
    x = ctx30.mpf(x)
    assert abs(psi(psi(x, ctx30), ctx30) - mp.exp(x)) < ctx30.eps(15) * mp.exp(x)


@pytest.mark.parametrize("x", ["0.5", "1", "2", "e", "5"])
def test_inverse_law(ctx30, x):
    x = ctx30.mp.e if x == "e" else ctx30.mpf(x)
    assert abs(psi(ln_half(x, ctx30), ctx30) - x) < ctx30.eps(15)


@pytest.mark.parametrize("x", ["0.5", "1", "2"])
def test_xi_law(ctx30, x):
    mp = ctx30.mp
    x = ctx30.mpf(x)
    assert abs(xi(xi(x, ctx30), ctx30) - mp.expm1(x)) < ctx30.eps(15)


def test_ln_half_reference_points(ctx30):
    mp = ctx30.mp
    assert abs(ln_half(1, ctx30) - kappa(ctx30)) < ctx30.eps(27)
    # the e row of the landmark table reads (exp(exp(kappa)), exp(kappa))
    assert abs(ln_half(mp.e, ctx30) - mp.exp(kappa(ctx30))) < ctx30.eps(27)
    assert matched_digits(ln_half(2, ctx30), ref("ln_half(2)")) >= 29


def test_ln_half_domain(ctx30):
    with pytest.raises(DomainError):
        ln_half(ln_kappa(ctx30), ctx30)
    with pytest.raises(DomainError):
        ln_half(-1, ctx30)


def test_xi_examples(ctx30):
    mp = ctx30.mp
    x1 = xi(1, ctx30)
    assert matched_digits(x1, ref("xi(1)")) >= 25
    from demi.abel import A_inverse
    assert abs(mp.expm1(x1) - A_inverse("1.5", ctx30)) < ctx30.eps(27)
    with pytest.raises(DomainError):
        xi(0, ctx30)


def test_xi_prime(ctx30):
    ratio = xi_prime(1, ctx30)
    assert matched_digits(ratio, ref("xi'(1)")) >= 15
    fd = central_derivative(lambda t: xi(t, ctx30), ctx30.mpf(1), 1, ctx30)
    assert matched_digits(ratio, ctx30.mp.nstr(fd, 30)) >= 10


@pytest.mark.parametrize("x", [3, 5, 10])
def test_ordering_chain(ctx30, x):
    mp = ctx30.mp
    assert mp.log(x) < ln_half(x, ctx30) < x < psi(x, ctx30) < mp.exp(x)


def test_not_kneser(ctx30):
    assert abs(kappa(ctx30) - ctx30.mpf(KNESER_PHI_0)) > 1e-4


def test_special_values_relations(ctx30):
    mp = ctx30.mp
    tol = ctx30.eps(25)
    rows = {r.label: r for r in special_values(ctx30)}
    assert list(rows) == ["-inf", "ln(kappa)", "0", "kappa", "1", "exp(kappa)", "e"]
    k = kappa(ctx30)
    assert rows["-inf"].exp_half == mp.log(k) and rows["-inf"].ln_half is None
    assert abs(rows["ln(kappa)"].exp_half) < tol
    assert abs(rows["0"].exp_half - k) < tol and abs(rows["0"].ln_half - mp.log(k)) < tol
    assert abs(rows["kappa"].exp_half - 1) < tol and abs(rows["kappa"].ln_half) < tol
    assert abs(rows["1"].exp_half - mp.exp(k)) < tol and abs(rows["1"].ln_half - k) < tol
    assert abs(rows["exp(kappa)"].exp_half - mp.e) < tol
    assert abs(rows["exp(kappa)"].ln_half - 1) < tol
    assert abs(rows["e"].exp_half - mp.exp(mp.exp(k))) < tol
    assert abs(rows["e"].ln_half - mp.exp(k)) < tol
