import random
from fractions import Fraction as F

from newform_periods.reps import SatakeParams, make_ramified, make_unramified


def random_rational(rng: random.Random, lo: int = -5, hi: int = 5, den: int = 6) -> F:
    while True:
        x = F(rng.randint(lo * den, hi * den), rng.randint(1, den))
        if x:
            return x


def random_params(rng: random.Random, r: int, q: int) -> SatakeParams:
    return SatakeParams([random_rational(rng) for _ in range(r)], q)


def random_spec(rng: random.Random, q: int = None, max_rank: int = 4):
    q = q or rng.choice([2, 3, 4, 5, 7, 9])
    n = rng.randint(1, max_rank)
    if rng.random() < 0.5:
        return make_unramified(random_params(rng, n, q))
    r = rng.randint(0, n)
    return make_ramified(n, rng.randint(1, 3), random_params(rng, r, q), random_rational(rng))


_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): an acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, text = mark.args
    ok = call.excinfo is None
    prev = _ACCEPTANCE.get(number, (True, text))
    _ACCEPTANCE[number] = (prev[0] and ok, text)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, text = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {text}")
