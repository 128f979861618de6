import pytest

from bpvcrypt import ED25519, SECP256K1, BpvParams, SeededRng, bpv_offline, generate_keypair

CURVES = [SECP256K1, ED25519]


@pytest.fixture(params=CURVES, ids=lambda c: c.name)
def curve(request):
    return request.param


@pytest.fixture(scope="session")
def tables():
    """Default-size (k=1024, v=16) tables, one per curve."""
    return {c.id: bpv_offline(BpvParams(1024, 16, c.id), SeededRng(f"table-{c.name}")) for c in CURVES}


@pytest.fixture
def table(tables, curve):
    return tables[curve.id]


@pytest.fixture
def rng():
    return SeededRng(20240601)


@pytest.fixture
def keypair(curve, rng):
    return generate_keypair(curve, rng)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            name = rep.nodeid.rsplit("::", 1)[-1]
            if "criterion" not in props and name.startswith("test_criterion_"):
                # failed before it could describe itself
                number, _, rest = name[len("test_criterion_"):].partition("_")
                props["criterion"] = f"{number}: {rest.replace('_', ' ')}"
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for title, status, detail in sorted(lines, key=lambda t: int(t[0].split(":")[0])):
        terminalreporter.write_line(f"[{status}] criterion {title}" + (f" ({detail})" if detail else ""))
