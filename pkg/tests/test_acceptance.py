"""Acceptance criteria, one test (or parametrized family) per criterion.

A summary line per criterion is printed at the end of the pytest run.
"""

import random
import time
from fractions import Fraction as F
from itertools import product

import pytest

from conftest import random_params, random_rational, random_spec
from newform_periods.algebra import QSqrt, ratfun_eval
from newform_periods.lfactors import (
    asai,
    bump_friedberg,
    exterior_square,
    rankin_selberg,
    symmetric_square_formal,
    tate_value,
)
from newform_periods.partitions import enumerate_dominant
from newform_periods.periods import (
    CROSS_CHECK_TOL,
    MAX_CROSS_CHECK_TERMS,
    asai_lattice_sum,
    bf_lattice_sum,
    bg_even_sum,
    expected_lfactor,
    js_even_lattice_sum,
    js_odd_lattice_sum,
    lattice_sum,
    period_series,
    rs_lattice_sum,
    special_value,
)
from newform_periods.reps import (
    QuadraticExtensionSpec,
    RepresentationSpec,
    SatakeParams,
    make_ramified,
    make_unramified,
)
from newform_periods.schur import schur, schur_alternant, schur_jacobi_trudi, schur_ssyt_oracle
from newform_periods.verify import grid_certify
from newform_periods.whittaker import essential_value


def sqrt_free(series):
    return all(not isinstance(c, QSqrt) or c.b == 0 for c in series)


def assert_exact(ps, lf, order):
    expected = lf.series(order)
    k = ps.series.first_mismatch(expected)
    assert k is None, f"first mismatch at t^{k}: {ps.series[k]} vs {expected[k]}"
    assert sqrt_free(ps.series)


# ---------------------------------------------------------------------------


@pytest.mark.criterion(1, "Rankin-Selberg test vectors (three branches, N = 12, < 5 s)")
def test_rankin_selberg_test_vectors():
    q = 13
    start = time.perf_counter()
    b = SatakeParams([2, F(-1, 3), 5], q)
    cases = [
        (make_unramified(SatakeParams([F(1, 2), 3, F(2, 5)], q)), make_unramified(b)),
        (make_ramified(3, 1, SatakeParams([F(3, 2)], q), 2), make_unramified(b)),
        (make_ramified(3, 2, SatakeParams([F(3, 2), F(-2, 7)], q), 5),
         make_ramified(3, 1, SatakeParams([4], q), 1)),
    ]
    for pi, sigma in cases:
        ps = rs_lattice_sum(pi, sigma, 12)
        assert_exact(ps, rankin_selberg(pi.unramified_part, sigma.unramified_part), 12)
    assert time.perf_counter() - start < 5


@pytest.mark.criterion(2, "Asai test vectors, r <= 3, both extension kinds (N = 10)")
@pytest.mark.parametrize("kind", ["unramified", "ramified"])
def test_asai_test_vectors(kind):
    rng = random.Random(f"asai-{kind}")
    ext = QuadraticExtensionSpec(kind, 3)
    for r in (1, 2, 3):
        params = random_params(rng, r, ext.q_E)
        specs = [RepresentationSpec(r, 0, params, params.product(), ext)]
        specs.append(RepresentationSpec(r + 1, 1, params, random_rational(rng), ext))
        specs.append(RepresentationSpec(3, 2, random_params(rng, r - 1, ext.q_E), 1, ext))
        for pi in specs:
            assert_exact(asai_lattice_sum(pi, order=10), asai(pi.unramified_part, ext), 10)


@pytest.mark.criterion(3, "Jacquet-Shalika even (rank 2, 4) and odd (rank 3, 5), N = 10")
@pytest.mark.parametrize("rank", [2, 3, 4, 5])
def test_jacquet_shalika(rank):
    rng = random.Random(f"js-{rank}")
    build = js_even_lattice_sum if rank % 2 == 0 else js_odd_lattice_sum
    specs = [
        make_unramified(random_params(rng, rank, 2)),
        make_ramified(rank, 1, random_params(rng, rank - 1, 3), random_rational(rng)),
        make_ramified(rank, 3, random_params(rng, rank - 2, 5), random_rational(rng)),
    ]
    for pi in specs:
        assert_exact(build(pi, 10), exterior_square(pi.unramified_part), 10)


@pytest.mark.criterion(4, "Bump-Friedberg specialization, r <= 4, N = 12")
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_bump_friedberg(r):
    rng = random.Random(f"bf-{r}")
    for pi in (
        make_unramified(random_params(rng, r, 3)),
        make_ramified(r + 1, 1, random_params(rng, r, 5), random_rational(rng)),
    ):
        ps = bf_lattice_sum(pi, 12)
        # prod (1 - a_i t)^-1 prod_{i<j} (1 - a_i a_j t^2)^-1, written out
        a = pi.alpha
        factors = [(x, 1) for x in a] + [(a[i] * a[j], 2) for i in range(r) for j in range(i + 1, r)]
        assert bump_friedberg(pi.unramified_part).factors == tuple(sorted(factors, key=lambda f: (f[1], f[0])))
        assert_exact(ps, bump_friedberg(pi.unramified_part), 12)


@pytest.mark.criterion(5, "Bump-Ginzburg even-weight sum, r <= 4, N = 10")
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_bump_ginzburg(r):
    rng = random.Random(f"bg-{r}")
    for pi in (
        make_unramified(random_params(rng, r, 3)),
        make_ramified(r + 1, 2, random_params(rng, r, 7), random_rational(rng)),
    ):
        assert_exact(bg_even_sum(pi, 10), symmetric_square_formal(pi.unramified_part), 10)


@pytest.mark.criterion(6, "L(pi x pi) = L(wedge^2) L(Sym^2) as reduced rational functions, 50 sets")
def test_factorization():
    rng = random.Random("factorization")
    for _ in range(50):
        p = random_params(rng, rng.randint(1, 4), 3)
        lhs = rankin_selberg(p, p).as_ratfun().reduce()
        rhs = (exterior_square(p) * symmetric_square_formal(p)).as_ratfun().reduce()
        assert lhs.numerator == rhs.numerator and lhs.denominator == rhs.denominator


def _ramified_cases():
    q = 13
    ext = QuadraticExtensionSpec("unramified", 3)
    return [
        ("rs", [make_ramified(3, 1, SatakeParams([F(1, 2)], q), 3),
                make_unramified(SatakeParams([1, F(1, 2), 3], q))]),
        ("asai", [RepresentationSpec(3, 1, SatakeParams([2, F(1, 3)], 9), 1, ext)]),
        ("jse", [make_ramified(4, 1, SatakeParams([2, F(1, 3), -1], q), 2)]),
        ("jso", [make_ramified(3, 2, SatakeParams([F(1, 2), 4], q), 1)]),
        ("bf", [make_ramified(3, 1, SatakeParams([F(1, 2), 2], q), 1)]),
        ("bg", [make_ramified(3, 1, SatakeParams([F(-1, 2), 2], q), 1)]),
    ]


def _unramified_cases():
    q = 13
    ext = QuadraticExtensionSpec("ramified", 5)
    return [
        ("rs", [make_unramified(SatakeParams([F(1, 2), 2], q)), make_unramified(SatakeParams([F(1, 3), 3], q))]),
        ("rs", [make_unramified(SatakeParams([F(1, 2), 3, F(2, 5)], q)),
                make_unramified(SatakeParams([2, F(-1, 3), 1], q))]),
        ("asai", [RepresentationSpec(2, 0, SatakeParams([2, F(1, 3)], 5), F(2, 3), ext)]),
        ("jse", [make_unramified(SatakeParams([2, F(1, 3), -1, F(1, 2)], q))]),
        ("jso", [make_unramified(SatakeParams([F(1, 2), F(1, 3), F(1, 5)], 2))]),
        ("bf", [make_unramified(SatakeParams([F(1, 2), 2], q))]),
        ("bg", [make_unramified(SatakeParams([F(1, 2), F(-2, 3)], q))]),
    ]


@pytest.mark.criterion(7, "special values: ramified exact, unramified to 1e-12 in <= 300 terms, GL(2) oracle")
@pytest.mark.parametrize("kind, specs", _ramified_cases())
def test_special_values_ramified(kind, specs):
    sv = special_value(kind, specs, cross_check=True)
    assert sv.branch == "ramified" and sv.correction_divisor == 1
    lf = expected_lfactor(kind, specs)
    assert sv.value == ratfun_eval(lf.as_ratfun(), sv.point)
    # the mirabolic series is the L-factor itself, coefficient by coefficient
    assert period_series(kind, specs, 12) == lf.series(12)
    assert sv.cross_check.passed


@pytest.mark.criterion(7, "special values: ramified exact, unramified to 1e-12 in <= 300 terms, GL(2) oracle")
@pytest.mark.parametrize("kind, specs", _unramified_cases())
def test_special_values_unramified(kind, specs):
    sv = special_value(kind, specs, cross_check=True)
    assert sv.branch == "unramified"
    cc = sv.cross_check
    assert cc.terms <= MAX_CROSS_CHECK_TERMS
    assert cc.difference < CROSS_CHECK_TOL
    assert cc.passed


@pytest.mark.criterion(7, "special values: ramified exact, unramified to 1e-12 in <= 300 terms, GL(2) oracle")
def test_gl2_rankin_selberg_two_row_oracle():
    # GL(2) x GL(2): the Cauchy sum runs over two-row partitions (k + l, l), and
    # s_(k+l, l)(x) = (x1 x2)^l s_(k)(x).  Summing over l pulls out the geometric
    # factor (1 - omega_pi omega_sigma t^2)^-1 = L(2s, omega_pi omega_sigma), so
    # the single-row (mirabolic) sum is L(s, pi x sigma) / L(2s, omega_pi omega_sigma).
    a, b, q = F(1, 2), F(1, 3), 13
    x, y = [a, 1 / a], [b, 1 / b]
    for k in range(6):
        for l in range(4):
            assert schur((k + l, l), x) == (x[0] * x[1]) ** l * schur((k,), x)

    pi = make_unramified(SatakeParams(x, q))
    sigma = make_unramified(SatakeParams(y, q))
    lf = rankin_selberg(pi.unramified_part, sigma.unramified_part)
    closed = lf.evaluate(F(1, q)) / tate_value(2, pi.omega * sigma.omega, q)

    def h(z, k):
        return sum(z ** i * (1 / z) ** (k - i) for i in range(k + 1))

    partial = sum(h(a, k) * h(b, k) * F(1, q) ** k for k in range(200))
    assert abs(float(closed - partial)) < 1e-12
    sv = special_value("rs", [pi, sigma], cross_check=True)
    assert sv.value == closed
    assert sv.correction_divisor == tate_value(2, 1, q)
    assert sv.cross_check.passed


@pytest.mark.criterion(8, "grid certification of Cauchy and Littlewood identities, r <= 3, N <= 8, < 60 s")
def test_grid_certification():
    start = time.perf_counter()
    failures = []
    for r in (1, 2, 3):
        for p in (1, 2, 3):
            rep = grid_certify("cauchy", r, 8, p=p)
            if not rep.passed:
                failures.append(rep.scenario)
        for identity in ("littlewood", "littlewood-even-columns", "littlewood-even-rows"):
            rep = grid_certify(identity, r, 8)
            if not rep.passed:
                failures.append(rep.scenario)
            cert = rep.checks["certificate"]
            assert cert["grid_size"] > cert["degree_bound"]
    elapsed = time.perf_counter() - start
    assert not failures
    assert elapsed < 60


@pytest.mark.criterion(9, "Schur alternant = Jacobi-Trudi = tableaux, |lam| <= 6, r <= 4, 20 points")
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_schur_three_way(r):
    rng = random.Random(f"schur-{r}")
    shapes = enumerate_dominant(r, 6)
    for _ in range(20):
        pts: list = []
        while len(pts) < r:
            v = random_rational(rng, -3, 3, 7)
            if v not in pts:
                pts.append(v)
        for lam in shapes:
            a = schur_alternant(lam, pts)
            assert a == schur_jacobi_trudi(lam, pts) == schur_ssyt_oracle(lam, pts), (lam, pts)


@pytest.mark.criterion(10, "normalization, support and sqrt(q)-vanishing invariants")
def test_normalization_and_support():
    rng = random.Random("invariants")
    specs = [random_spec(rng) for _ in range(50)]
    for spec in specs:
        assert essential_value(spec, (0,) * (spec.rank - 1)) == 1

    tested = 0
    while tested < 500:
        spec = random_spec(rng, max_rank=5)
        if spec.rank == 1:
            continue
        lam = tuple(rng.randint(-4, 4) for _ in range(spec.rank - 1))
        r = spec.rank if spec.is_unramified else spec.r
        full = lam + (0,) if spec.is_unramified else lam
        head, tail = full[:r], full[r:]
        in_cone = (
            all(p == 0 for p in tail)
            and all(head[i] >= head[i + 1] for i in range(len(head) - 1))
            and (not head or head[-1] >= 0)
        )
        if in_cone:
            continue
        assert essential_value(spec, lam) == 0, (spec, lam)
        tested += 1


@pytest.mark.criterion(10, "normalization, support and sqrt(q)-vanishing invariants")
def test_sqrt_q_components_vanish():
    rng = random.Random("sqrt-vanishing")
    for _ in range(40):
        rank = rng.randint(1, 4)
        q = rng.choice([2, 3, 5, 7])
        pi = random_spec(rng, q=q, max_rank=rank)
        kinds = ["bf", "bg"] + (["jse"] if pi.rank % 2 == 0 else ["jso"])
        for kind in kinds:
            assert sqrt_free(lattice_sum(kind, [pi], 8).series)
        sigma = make_unramified(random_params(rng, pi.rank, q))
        assert sqrt_free(rs_lattice_sum(pi, sigma, 8).series)
        for kind in ("unramified", "ramified"):
            ext = QuadraticExtensionSpec(kind, 3)
            params = random_params(rng, rank, ext.q_E)
            spec = RepresentationSpec(rank, 0, params, params.product(), ext)
            assert sqrt_free(asai_lattice_sum(spec, order=8).series)
