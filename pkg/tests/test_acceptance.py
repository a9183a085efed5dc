"""Acceptance gate.

One test per acceptance criterion; the pytest -v line for each test is
the pass/fail verdict for that criterion.  Expected values come from
closed forms or from the adaptive/AGM reference oracles, never from the
engine under test.  Each test prints its measured numbers so a failing
run shows how far off it was.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from dyadicint import cli
from dyadicint.applications import PendulumParams, elliptic_f, li, pendulum_period
from dyadicint.dyadic import digit, floor_log2, scaled_floor
from dyadicint.engine import (
    error_bound,
    integrate,
    integrate_2d,
    integrate_direct,
    integrate_incremental,
    integrate_inverse,
)
from dyadicint.errors import DomainError
from dyadicint.expansions import (
    advance,
    periodic_residual,
    unit_exponential_expansion,
    unit_expansion_terms,
)
from dyadicint.exprparse import (
    BinOp,
    Call,
    Const,
    Neg,
    Num,
    ParseError,
    Var,
    evaluate,
    parse,
    pretty,
)
from dyadicint.oracle import OracleConfig, adaptive_quad, agm_complete_elliptic

ORACLE_CFG = OracleConfig(tol=1e-10)


def test_c01_monomial_exactness_and_digit_levels():
    one = lambda t: 1.0
    result = integrate(one, 0.0, 0.625, 6)
    assert result.value == 0.625

    # 0.625 = 0.101 in binary; each level contributes digit(2,-k) * 2^-k.
    for k, contribution in result.levels:
        assert contribution == math.ldexp(digit(2, -k, 0.625), -k)

    best = min(
        _timed(lambda: integrate(one, 0.0, 0.625, 6)) for _ in range(5))
    print(f"value={result.value} best_runtime={best * 1e6:.1f}us")
    assert best < 1e-3


def _timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def test_c02_identity_truncation_closed_form():
    ident = lambda t: t
    for levels in (4, 8, 12):
        value = integrate(ident, 0.0, 1.0, levels).value
        expected = 0.5 + math.ldexp(1.0, -levels - 1)
        print(f"P={levels} value={value!r} expected={expected!r}")
        assert abs(value - expected) <= 1e-15


def test_c03_li_grid_against_adaptive_oracle():
    start = time.perf_counter()
    xs = [float(x) for x in range(10, 101, 10)]
    oracles = {
        x: adaptive_quad(lambda t: 1.0 / math.log(t), 2.0, x, ORACLE_CFG)
        for x in xs
    }
    max_dev = {}
    for levels in (3, 6, 10):
        max_dev[levels] = max(
            abs(li(x, levels) - oracles[x]) / oracles[x] for x in xs)
    elapsed = time.perf_counter() - start
    print(f"max_rel_dev={max_dev} elapsed={elapsed:.2f}s")
    assert max_dev[10] <= 0.02
    assert max_dev[3] >= max_dev[6] >= max_dev[10]
    assert elapsed < 5.0


def test_c04_elliptic_grid_against_oracles():
    start = time.perf_counter()
    h_grid = [i / 10.0 for i in range(10)]

    worst_complete = 0.0
    for h in h_grid:
        reference = agm_complete_elliptic(h)
        value = elliptic_f(math.pi / 2.0, h, 10)
        worst_complete = max(worst_complete,
                             abs(value - reference) / reference)
    assert worst_complete <= 1e-2

    worst_partial = 0.0
    for phi in (math.pi / 4.0, math.pi / 3.0):
        for h in h_grid:
            fn = lambda t: 1.0 / math.sqrt(1.0 - h * math.sin(t) ** 2)
            reference = adaptive_quad(fn, 0.0, phi, ORACLE_CFG)
            value = elliptic_f(phi, h, 10)
            worst_partial = max(worst_partial, abs(value - reference))
    elapsed = time.perf_counter() - start
    print(f"worst_complete_rel={worst_complete:.2e} "
          f"worst_partial_abs={worst_partial:.2e} elapsed={elapsed:.2f}s")
    assert worst_partial <= 1e-2
    assert elapsed < 5.0


def test_c05_gaussian_constant_from_inverse_identity():
    # The area under sqrt(ln(1/y)) on (0,1] equals sqrt(pi)/2.
    fn = lambda y: math.sqrt(math.log(1.0 / y))
    target = math.sqrt(math.pi) / 2.0
    err16 = abs(integrate_direct(fn, 0.0, 1.0, 16).value - target)
    err8 = abs(integrate_direct(fn, 0.0, 1.0, 8).value - target)
    print(f"err_P8={err8:.3e} err_P16={err16:.3e} target={target!r}")
    assert err16 <= 1e-2
    assert err16 < err8


def test_c06_pendulum_limits_and_monotonicity():
    params = PendulumParams(mass=1.0, well_depth=1.0, energy=-1.0 + 1e-4)
    ratio = pendulum_period(params, 14) / (2.0 * math.pi)
    print(f"small_amplitude_ratio={ratio!r}")
    assert 0.99 <= ratio <= 1.01

    periods = [
        pendulum_period(PendulumParams(1.0, 1.0, -0.9 + 0.18 * i), 14)
        for i in range(10)
    ]
    print(f"periods={[f'{t:.4f}' for t in periods]}")
    assert all(b > a for a, b in zip(periods, periods[1:]))

    for energy in (1.0, 1.5):
        with pytest.raises(DomainError):
            PendulumParams(1.0, 1.0, energy)


def _poly_fn(coefs):
    def fn(t: float) -> float:
        acc = 0.0
        for c in reversed(coefs):
            acc = acc * t + float(c)
        return acc
    return fn


def _poly_exact(coefs, a, b):
    anti = [Fraction(0)] + [c / (i + 1) for i, c in enumerate(coefs)]

    def at(t: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(anti):
            acc = acc * t + c
        return acc

    return at(b) - at(a)


def _poly_slope_max(coefs, a, b):
    """Exact max of |f'| on [a, b]: check endpoints and roots of f''."""
    deriv = [c * (i + 1) for i, c in enumerate(coefs[1:])]
    candidates = [a, b]
    second = [float(c * (i + 1)) for i, c in enumerate(deriv[1:])]
    if any(c != 0.0 for c in second):
        import numpy

        for root in numpy.roots(list(reversed(second))):
            # Keep near-real roots; extra candidates only raise the max.
            if abs(root.imag) < 1e-9 and a < root.real < b:
                candidates.append(root.real)
    fn = _poly_fn(deriv)
    return max(abs(fn(float(t))) for t in candidates)


def test_c07_property_suite_polynomials_and_engines():
    rng = random.Random(1105)
    worst_ratio = 0.0
    for _ in range(50):
        degree = rng.randint(0, 5)
        coefs = [Fraction(rng.randint(-12, 12), 4) for _ in range(degree + 1)]
        ia, ib = sorted(rng.sample(range(0, 257), 2))
        a, b = ia / 64.0, ib / 64.0

        result = integrate_incremental(_poly_fn(coefs), a, b, 18)
        exact = float(_poly_exact(coefs, Fraction(ia, 64), Fraction(ib, 64)))
        err = abs(result.value - exact)
        m1 = _poly_slope_max(coefs, a, b)
        allowed = max(error_bound(m1, a, b, 18), 1e-4)
        worst_ratio = max(worst_ratio, err / allowed)
        assert err <= allowed
    print(f"worst_err_over_allowed={worst_ratio:.3f}")

    # Linearity of the quadrature in the integrand.
    f, g = math.sin, lambda t: t * t
    combo = lambda t: 1.7 * f(t) - 0.6 * g(t)
    lhs = integrate(combo, 0.3, 2.1, 14).value
    rhs = (1.7 * integrate(f, 0.3, 2.1, 14).value
           - 0.6 * integrate(g, 0.3, 2.1, 14).value)
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    print(f"linearity_rel={rel:.2e}")
    assert rel <= 1e-12

    # Incremental refinement agrees with the naive engine and costs less.
    naive = integrate(math.exp, 0.3, 2.7, 14)
    incremental = integrate_incremental(math.exp, 0.3, 2.7, 14)
    rel = abs(naive.value - incremental.value) / abs(naive.value)
    print(f"incremental_rel={rel:.2e} "
          f"evals={incremental.evaluations}<{naive.evaluations}")
    assert rel <= 1e-12
    assert incremental.evaluations < naive.evaluations

    # Inverse-function form against the shifted form.
    square = lambda t: t * t
    root = lambda y: math.sqrt(y)
    inv_value = integrate_inverse(square, root, 1.0, 2.0, 16).value
    fwd_value = integrate(square, 1.0, 2.0, 16).value
    print(f"inverse_vs_shifted={abs(inv_value - fwd_value):.2e}")
    assert abs(inv_value - fwd_value) <= 1e-3

    # Separable 2D integrand factors into the product of 1D runs.
    plane = integrate_2d(lambda x, y: (x + 1.0) * (y + 2.0),
                         0.0, 1.0, 0.0, 1.0, 12, 12)
    product = (integrate(lambda x: x + 1.0, 0.0, 1.0, 12).value
               * integrate(lambda y: y + 2.0, 0.0, 1.0, 12).value)
    print(f"separability={abs(plane.value - product):.2e}")
    assert abs(plane.value - product) <= 1e-3


def test_c08_corollary_suite_expansions():
    rng = random.Random(914)
    worst = 0.0
    for _ in range(20):
        x = rng.uniform(-3.0, 3.0)
        h = rng.uniform(0.05, 1.95)
        value = advance(math.sin(x), math.cos, x, h, 14)
        worst = max(worst, abs(value - math.sin(x + h)))
    print(f"advance_worst={worst:.2e}")
    assert worst <= 1e-3

    residual = periodic_residual(math.cos, 2.0 * math.pi, 0.0, 14)
    print(f"periodic_residual={residual!r}")
    assert abs(residual) < 1e-3

    rng = random.Random(412)
    worst = 0.0
    for _ in range(100):
        x = rng.uniform(0.05, 0.95)
        worst = max(worst, abs(unit_exponential_expansion(x, 0, 16) - x))
    print(f"unit_worst={worst:.2e}")
    assert worst < 1e-3

    # Scale shift rescales every term without touching the index table.
    for x in (0.7, 0.3):
        for s in (-1, 1, 2):
            for k, n, term in unit_expansion_terms(x, s, 12):
                rebuilt = math.ldexp(
                    math.exp(-math.ldexp(float(n), -(k - s))), -(k - s))
                if n % 2:
                    rebuilt = -rebuilt
                assert term == rebuilt


def _random_ast(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([
            Num(round(rng.uniform(0.0, 99.0), 3)),
            Var("x"),
            Const(rng.choice(["pi", "e"])),
        ])
    pick = rng.random()
    if pick < 0.55:
        op = rng.choice(["+", "-", "*", "/", "^"])
        return BinOp(op, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    if pick < 0.75:
        return Neg(_random_ast(rng, depth - 1))
    fn = rng.choice(["sin", "cos", "exp", "sqrt", "abs", "atan"])
    return Call(fn, _random_ast(rng, depth - 1))


def test_c09_parser_vectors_fuzz_and_round_trip():
    vectors = [
        ("1+2*3", 7.0),
        ("2^3^2", 512.0),
        ("-2^2", -4.0),
        ("2^-3", 0.125),
        ("(1+2)*3", 9.0),
        ("6/3/2", 1.0),
        ("1-2-3", -4.0),
        ("2*-3", -6.0),
    ]
    for src, expected in vectors:
        assert evaluate(parse(src), {}) == expected

    rng = random.Random(20147)
    for trial in range(100_000):
        length = rng.randint(0, 24)
        if trial % 2:
            src = "".join(chr(rng.randint(32, 126)) for _ in range(length))
        else:
            src = bytes(rng.randint(0, 255) for _ in range(length)).decode(
                "latin-1")
        try:
            parse(src)
        except ParseError:
            pass

    rng = random.Random(77)
    for _ in range(200):
        ast = _random_ast(rng, rng.randint(1, 5))
        assert parse(pretty(ast)) == ast
    print("vectors, 1e5 fuzz inputs and 200 round trips exercised")


BATTERY = [
    ["integrate", "--expr", "sqrt(ln(1/x))", "--a", "0", "--b", "1",
     "--levels", "12", "--form", "direct"],
    ["integrate", "--expr", "cos(x)", "--a", "0.3", "--b", "2.7",
     "--levels", "12", "--m1", "1"],
    ["integrate", "--expr", "x^2", "--inv-expr", "sqrt(x)",
     "--a", "1", "--b", "2", "--levels", "12", "--form", "inverse"],
    ["integrate", "--expr", "x^2+1", "--a", "2", "--b", "0.25",
     "--levels", "12", "--oriented"],
    ["integrate2d", "--expr", "x*y", "--a", "0", "--b", "1",
     "--c", "0", "--d", "1", "--levels-x", "10", "--levels-y", "10"],
    ["li", "--grid", "10:100:10", "--levels-list", "3,6,10"],
    ["li", "--x", "10", "--levels", "10", "--verify"],
    ["elliptic",
     "--phi", "0.7853981633974483,1.0471975511965976,1.5707963267948966",
     "--hgrid", "0:0.9:0.1", "--levels-list", "3,10"],
    ["pendulum", "--m", "1", "--u0", "1", "--esweep=-0.9:0.72:0.18",
     "--levels", "12"],
    ["advance", "--fprime-expr", "cos(x)", "--f-at-x", "0",
     "--x", "0", "--h", "1", "--levels", "14"],
    ["expand-unit", "--x", "0.7", "--s", "1", "--levels", "16"],
    ["digits", "--p", "2", "--x", "0.625", "--kmin", "-6"],
]


def test_c10_cli_determinism(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("DYADICINT_THREADS", raising=False)
    for index, argv in enumerate(BATTERY):
        first = tmp_path / f"run{index}a.csv"
        second = tmp_path / f"run{index}b.csv"
        assert cli.main(argv + ["--out", str(first)]) == 0, argv
        assert cli.main(argv + ["--out", str(second)]) == 0, argv
        assert first.read_bytes() == second.read_bytes(), argv
    capsys.readouterr()
    print(f"{len(BATTERY)} invocations byte-identical across reruns")
