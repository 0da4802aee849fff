import itertools

import pytest

from bellcomm.core import Pattern, Picture, Scenario
from bellcomm.errors import EnumerationCapError
from bellcomm.protocols import _point, enumerate_protocols, iter_protocols, protocol_point, vertex_set


def test_local_count():
    assert len(enumerate_protocols(Scenario(2, 2, 0))) == 16


def test_one_bit_count():
    ps = enumerate_protocols(Scenario(2, 2, 1))
    assert sum(p.pattern is Pattern.A_TO_B for p in ps) == 4 * 4 * 16
    assert sum(p.pattern is Pattern.B_TO_A for p in ps) == 4 * 4 * 16


def test_unrestricted_count_is_lazy():
    it = iter_protocols(Scenario(2, 2, 2))
    assert not isinstance(it, list)
    # (K^2)^(M^2) output tables: alpha and beta each free on M^2 contexts
    assert sum(1 for _ in it) == 16 * 16


def test_cap():
    with pytest.raises(EnumerationCapError, match="512"):
        enumerate_protocols(Scenario(2, 2, 1), cap=100)


@pytest.mark.parametrize("scenario,picture,count", [
    (Scenario(2, 2, 1), "probability", 112),
    (Scenario(3, 2, 1), "correlation", 320),
    (Scenario(2, 2, 0), "probability", 16),
    (Scenario(2, 2, 1), "correlation", 16),
    (Scenario(2, 2, 2), "probability", 256),
])
def test_vertex_counts(scenario, picture, count):
    assert len(vertex_set(scenario, picture)) == count


def test_fast_point_matches_exact_route():
    for p in enumerate_protocols(Scenario(2, 2, 1))[::7]:
        for picture in Picture:
            assert tuple(_point(p, picture)) == protocol_point(p, picture)


def test_all_correlation_sign_matrices_at_m2():
    pts = set(vertex_set(Scenario(2, 2, 1), "correlation").points)
    assert pts == set(itertools.product((-1, 1), repeat=4))


@pytest.mark.parametrize("M,picture", [(2, "probability"), (2, "correlation"), (3, "correlation")])
def test_nesting(M, picture):
    local = set(vertex_set(Scenario(M, 2, 0), picture).points)
    one = set(vertex_set(Scenario(M, 2, 1), picture).points)
    assert local < one
    if M == 2:
        assert one <= set(vertex_set(Scenario(M, 2, 2), picture).points)


def test_extreme_valued():
    for p in vertex_set(Scenario(2, 2, 1), "probability"):
        assert set(p) <= {0, 1}
    for p in vertex_set(Scenario(3, 2, 1), "correlation"):
        assert set(p) <= {-1, 1}


def test_party_swap_symmetry():
    # swapping parties transposes the correlation matrix
    pts = set(vertex_set(Scenario(3, 2, 1), "correlation").points)
    transposed = {tuple(p[3 * j + i] for i in range(3) for j in range(3)) for p in pts}
    assert transposed == pts


def test_party_swap_symmetry_probability():
    s = Scenario(2, 2, 1)
    pts = set(vertex_set(s, "probability").points)

    def swap(p):
        full = {}
        for n, (i, j) in enumerate(s.contexts()):
            block = list(p[3 * n:3 * n + 3]) + [1 - sum(p[3 * n:3 * n + 3])]
            for a in range(2):
                for b in range(2):
                    full[a, b, i, j] = block[2 * a + b]
        out = []
        for i, j in s.contexts():
            for a in range(2):
                for b in range(2):
                    if (a, b) != (1, 1):
                        out.append(full[b, a, j, i])
        return tuple(out)

    assert {swap(p) for p in pts} == pts


@pytest.mark.parametrize("picture", ["probability", "correlation"])
def test_single_setting_communication_useless(picture):
    assert vertex_set(Scenario(1, 2, 0), picture).points == vertex_set(Scenario(1, 2, 1), picture).points
