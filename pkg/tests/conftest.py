from pathlib import Path

import pytest

from coxrigid.diagram import CoxeterMatrix, parse_diagram

DIAGRAMS = Path(__file__).resolve().parent.parent / "diagrams"


def load(name: str) -> CoxeterMatrix:
    return parse_diagram((DIAGRAMS / f"{name}.cox").read_text())


def mat(gens: str, *edges) -> CoxeterMatrix:
    """mat("a b c", ("a", "b", 3), ...) -- unlisted pairs are inf."""
    return CoxeterMatrix.from_labels(sorted(gens.split()), edges)


def path(labels, names="abcdefgh") -> CoxeterMatrix:
    """Linear diagram with the given consecutive labels, all other pairs 2."""
    n = len(labels) + 1
    g = names[:n]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((g[i], g[j], labels[i] if j == i + 1 else 2))
    return CoxeterMatrix.from_labels(list(g), edges)


def commuting(n: int, names="abcdefgh") -> CoxeterMatrix:
    g = names[:n]
    return CoxeterMatrix.from_labels(list(g), [(g[i], g[j], 2) for i in range(n) for j in range(i + 1, n)])


# finite-type catalogue used by several test modules
def catalogue():
    d4 = CoxeterMatrix.from_labels(list("abcd"), [("a", "b", 3), ("b", "c", 3), ("b", "d", 3),
                                                  ("a", "c", 2), ("a", "d", 2), ("c", "d", 2)])
    i2a1 = CoxeterMatrix.from_labels(list("abc"), [("a", "b", 3), ("a", "c", 2), ("b", "c", 2)])
    return {
        "A2": (path([3]), 6), "A3": (path([3, 3]), 24), "A4": (path([3, 3, 3]), 120),
        "B2": (path([4]), 8), "B3": (path([4, 3]), 48), "B4": (path([4, 3, 3]), 384),
        "H3": (path([5, 3]), 120), "I2(7)": (path([7]), 14), "D4": (d4, 192),
        "F4": (path([3, 4, 3]), 1152), "A1^3": (commuting(3), 8), "I2(3)xA1": (i2a1, 12),
    }


@pytest.fixture(params=["fig1_left_k3", "fig1_right_k3", "fig2_left", "fig2_right", "fig3_left", "fig3_right"])
def figure(request):
    return request.param, load(request.param)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
