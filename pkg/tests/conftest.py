import re
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = Path(__file__).resolve().parent / "fixtures"
CONFIGS = ROOT / "configs"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def parse_qasm(text):
    """Tiny reference parser for the subset the exporter emits.

    Returns (num_qubits, [(name, angle_text_or_None, [targets])], [measured]).
    """
    n = None
    gates, measured = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("OPENQASM", "include", "creg")):
            continue
        if m := re.fullmatch(r"qreg q\[(\d+)\];", line):
            n = int(m.group(1))
        elif m := re.fullmatch(r"measure q\[(\d+)\] -> c\[(\d+)\];", line):
            measured.append(int(m.group(1)))
        elif m := re.fullmatch(r"(\w+)(?:\(([^)]*)\))? (q\[\d+\](?:,q\[\d+\])*);", line):
            targets = [int(t) for t in re.findall(r"q\[(\d+)\]", m.group(3))]
            gates.append((m.group(1), m.group(2), targets))
        else:
            raise ValueError(f"unparsed QASM line: {line!r}")
    return n, gates, measured


def binomial_sigma(p, shots):
    return np.sqrt(max(p * (1 - p), 1e-12) / shots)


# criterion number -> (passed, description, seconds); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, desc, secs = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n}: {desc}  ({secs:.2f} s)")
