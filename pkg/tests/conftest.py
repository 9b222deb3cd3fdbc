import pytest

from ekron.arithmetic_stream import lambda_stream
from ekron.number_fields import field_from_cyclotomic, field_from_quadratic, field_rational

# gamma_{K,r}, r = 0..3, from scripts/oracles.py (Stieltjes / L-function expansions, 30 digits)
TRUE_GAMMA = {
    "Q": [0.57721566490153286, -0.18754623284036522, 0.051688632033192894, -0.014751658825453744],
    "Q(sqrt(-1))": [0.82282524967884703, -0.44412964001195043, 0.19921386774319736, -0.084146238861298203],
    "Q(sqrt(5))": [1.4048951416170377, -1.2654010997301611, 1.1013675666559001, -1.0308006757667201],
    "Q(zeta_5)": [1.7206242125134048, -1.6859699841169515, 1.3884625022481628, -1.1743326799422555],
}
STIELTJES = [0.57721566490153286, -0.072815845483676725, -0.0096903631928723185, 0.0020538344203033459]


def builtin_fields():
    return [field_rational(), field_from_quadratic(-1), field_from_quadratic(5), field_from_cyclotomic(5)]


@pytest.fixture(scope="session")
def fields():
    return {f.label: f for f in builtin_fields()}


@pytest.fixture(scope="session")
def streams_1e6(fields):
    return {label: lambda_stream(f, 10**6) for label, f in fields.items()}


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one 'A#: PASS|FAIL ...' line; echoed live and again in the terminal summary."""
    def record(tag: str, ok: bool, detail: str) -> bool:
        line = f"{tag}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
