import itertools

import pytest

from coversplit.hypergraph import Color


def brute_force_two_colorable(n_vertices, edges):
    """Plain itertools scan: is there a 2-coloring with no monochromatic edge?"""
    for bits in itertools.product((0, 1), repeat=n_vertices):
        if all(len({bits[v] for v in e}) == 2 for e in edges):
            return True
    return False


def brute_force_property_b(h):
    """Asymmetric version for H(k,l): red edges must not be all red, blue not all blue."""
    for bits in itertools.product((Color.RED, Color.BLUE), repeat=h.n_vertices):
        if all(any(bits[v] is not Color.RED for v in e) for e in h.red_edges) and all(
            any(bits[v] is not Color.BLUE for v in e) for e in h.blue_edges
        ):
            return True
    return False


@pytest.fixture
def tmp_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path
