import math

import numpy as np
import pytest

from hypersqueeze.coset import SqueezeParams

SEED = 0x5EED
_VERDICTS = []


@pytest.fixture
def verdict():
    """Record and print one PASS/FAIL line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"[acceptance {number}] {'PASS' if ok else 'FAIL'}: {title} ({detail})"
        _VERDICTS.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_VERDICTS):
        terminalreporter.write_line(line)


def seeded_params(count: int, rho_max: float = 1.5, rho_min: float = 0.0, seed: int = SEED):
    rng = np.random.default_rng(seed)
    return [SqueezeParams.random(rng, rho_max=rho_max, rho_min=rho_min) for _ in range(count)]


GENERIC = SqueezeParams(1.0, 0.7, 1.2, 2.1)
HALF_PI = math.pi / 2
