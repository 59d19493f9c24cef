import pytest

from qlass.data import generate_synthetic, prepare

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def separable():
    """Synthetic benchmark split used throughout: n=400, d=4, k=4, sep=6."""
    def make(seed=0):
        return prepare(generate_synthetic(400, 4, 4, 6.0, seed), ratio=0.8, seed=seed)
    return make


@pytest.fixture
def criterion():
    """Record one acceptance line; shown in the terminal summary."""
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pipeline():
    """Run the full CLI pipeline into ``out``; returns the list of exit codes."""
    from qlass.cli import main

    def run(out, seed=0, episodes=6, extra=()):
        common = ["--out", str(out), "--seed", str(seed)]
        codes = [main(["preprocess", "--synthetic", "400,4,4,6", *common])]
        for family in ("tree", "forest", "nb"):
            codes.append(main(["train-baseline", "--family", family, *common]))
            codes.append(main(["train-dqn", "--family", family, "--episodes", str(episodes),
                               "--ensemble-size", "3", "--epsilon-decay", "0.8", *common, *extra]))
        codes.append(main(["compare", *common]))
        return codes
    return run
