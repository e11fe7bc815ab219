import pytest

from pentaca.automata import build_A, build_B, build_C, propagation_table, raw_spec
from pentaca.oned import stub_automaton


@pytest.fixture(scope="session")
def stub():
    return stub_automaton()


@pytest.fixture(scope="session")
def specs(stub):
    return {"A13": build_A(stub), "B12": build_B(stub), "C9": build_C(stub)}


@pytest.fixture(scope="session")
def prop_spec():
    return raw_spec(propagation_table())


ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(name, ok, detail):
        line = f"{name} {'PASS' if ok else 'FAIL'}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
