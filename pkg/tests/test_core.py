from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bellcomm.core import (CorrMatrix, DetProtocol, Direction, LinearInequality, Pattern, Picture,
                           ProbTable, ProbVector, Scenario, one_way_no_signaling, prob_coordinate,
                           protocol_table, table_to_vector, to_correlation, validate_prob_table,
                           vector_to_table)
from bellcomm.errors import DimensionError, InvalidTableError, ScenarioError

from conftest import S221, signaling_mixture, swap_table

F = Fraction


def zero_table(s=S221):
    return ProbTable.from_function(s, lambda a, b, i, j: int(a == 0 and b == 0))


class TestScenario:
    def test_comm_models(self):
        assert Scenario(2, 2, 0).comm_model == "local"
        assert Scenario(2, 2, 1).comm_model == "one_bit"
        assert Scenario(2, 2, 2).comm_model == "unrestricted"
        assert Scenario(3, 2, 4).comm_model == "unrestricted"

    @pytest.mark.parametrize("args", [(0, 2, 1), (2, 1, 1), (2, 2, -1), (3, 2, 2)])
    def test_rejects(self, args):
        with pytest.raises(ScenarioError):
            Scenario(*args)

    def test_dims(self):
        assert Scenario(2, 2, 1).prob_dim == 12
        assert Scenario(3, 3, 1).prob_dim == 72
        assert Scenario(3, 2, 1).corr_dim == 9


class TestValidate:
    def test_uniform(self):
        assert validate_prob_table(ProbTable.uniform(S221)).valid

    def test_short_context(self):
        t = ProbTable.from_function(S221, lambda a, b, i, j: F(1, 2) if (a, b, i, j) == (0, 0, 0, 0)
                                    else (0 if (i, j) == (0, 0) else F(1, 4)))
        rep = validate_prob_table(t)
        assert not rep.valid
        assert rep.bad_contexts == (((0, 0), F(1, 2)),)
        assert rep.negative == ()

    def test_negative_entry(self):
        t = ProbTable.from_function(S221, lambda a, b, i, j: F(-1, 4) if (a, b) == (0, 0) else
                                    (F(3, 4) if (a, b) == (1, 1) else F(1, 4)))
        rep = validate_prob_table(t)
        assert len(rep.negative) == 4 and rep.bad_contexts == ()

    def test_swap(self):
        assert validate_prob_table(swap_table()).valid


class TestNoSignaling:
    def test_uniform(self):
        for d in Direction:
            assert one_way_no_signaling(ProbTable.uniform(S221), d)[0]

    @pytest.mark.parametrize("table", [signaling_mixture, swap_table])
    def test_signaling_both_ways(self, table):
        for d in Direction:
            ok, witness = one_way_no_signaling(table(), d)
            assert not ok and witness

    def test_one_way_only(self):
        # B outputs A's setting: A's marginal is fixed, B's depends on i
        t = ProbTable.from_function(S221, lambda a, b, i, j: int(a == 0 and b == i))
        assert one_way_no_signaling(t, "AtoB")[0]
        assert not one_way_no_signaling(t, "BtoA")[0]

    def test_invalid_rejected(self):
        t = ProbTable.from_function(S221, lambda a, b, i, j: 0)
        with pytest.raises(InvalidTableError):
            one_way_no_signaling(t)

    @given(st.lists(st.fractions(0, 1), min_size=16, max_size=16), st.sampled_from(list(Direction)))
    def test_receiver_relabeling_invariant(self, ws, direction):
        # mixtures of deterministic tables; swap the receiver's outcome labels
        t = random_table(ws)
        if direction is Direction.A_TO_B:
            relabeled = ProbTable.from_function(S221, lambda a, b, i, j: t[a, 1 - b, i, j])
        else:
            relabeled = ProbTable.from_function(S221, lambda a, b, i, j: t[1 - a, b, i, j])
        assert one_way_no_signaling(t, direction)[0] == one_way_no_signaling(relabeled, direction)[0]


def random_table(ws):
    """Valid table from 16 raw weights: one normalized 2x2 block per context."""
    vals = {}
    for n, (i, j) in enumerate(S221.contexts()):
        w = [x + F(1, 100) for x in ws[4 * n:4 * n + 4]]
        tot = sum(w)
        vals[i, j] = [x / tot for x in w]
    return ProbTable.from_function(S221, lambda a, b, i, j: vals[i, j][2 * a + b])


class TestCorrelation:
    def test_uniform(self):
        assert to_correlation(ProbTable.uniform(S221)).c == ((0, 0), (0, 0))

    def test_all_zero_outputs(self):
        assert to_correlation(zero_table()).c == ((1, 1), (1, 1))

    def test_swap(self):
        c = to_correlation(swap_table()).c
        assert c == tuple(tuple((-1) ** (i + j) for j in range(2)) for i in range(2))

    def test_rejects_k3(self):
        with pytest.raises(ScenarioError):
            to_correlation(ProbTable.uniform(Scenario(2, 3, 1)))

    @given(st.lists(st.fractions(0, 1), min_size=16, max_size=16),
           st.lists(st.fractions(0, 1), min_size=16, max_size=16),
           st.fractions(0, 1))
    def test_linear(self, w1, w2, lam):
        t1, t2 = random_table(w1), random_table(w2)
        mixed = to_correlation(t1.mix(t2, lam)).coords
        c1, c2 = to_correlation(t1).coords, to_correlation(t2).coords
        assert mixed == tuple(lam * x + (1 - lam) * y for x, y in zip(c1, c2))
        assert all(-1 <= x <= 1 for x in mixed)


class TestProtocolTable:
    def test_constant(self):
        d = DetProtocol(S221, Pattern.NO_COMM, (0, 0), (0, 0))
        assert protocol_table(d) == zero_table()

    def test_b_outputs_a_setting(self):
        d = DetProtocol(S221, Pattern.A_TO_B, (0, 0), ((0, 0), (1, 1)), (0, 1))
        t = protocol_table(d)
        for i, j in S221.contexts():
            assert t[0, i, i, j] == 1
            assert sum(v for _, v in t.entries()) == 4

    def test_identity(self):
        d = DetProtocol(S221, Pattern.NO_COMM, (0, 1), (0, 1))
        t = protocol_table(d)
        assert all(t[i, j, i, j] == 1 for i, j in S221.contexts())

    def test_b_to_a(self):
        # A outputs B's setting after B sends j
        d = DetProtocol(S221, Pattern.B_TO_A, ((0, 0), (1, 1)), (0, 0), (0, 1))
        t = protocol_table(d)
        assert all(t[j, 0, i, j] == 1 for i, j in S221.contexts())


class TestVector:
    def test_uniform(self):
        v = table_to_vector(ProbTable.uniform(S221))
        assert v.coords == (F(1, 4),) * 12

    def test_round_trip_swap(self):
        assert vector_to_table(table_to_vector(swap_table())) == swap_table()

    def test_zero_vector(self):
        t = vector_to_table(ProbVector(S221, (0,) * 12))
        assert all(t[1, 1, i, j] == 1 for i, j in S221.contexts())

    def test_length_checked(self):
        with pytest.raises(DimensionError):
            vector_to_table(ProbVector(S221, (0,) * 11))

    def test_order(self):
        assert prob_coordinate(S221, 0, 1, 0, 0) == 1
        assert prob_coordinate(S221, 0, 0, 1, 0) == 6
        with pytest.raises(KeyError):
            prob_coordinate(S221, 1, 1, 0, 0)

    @given(st.lists(st.fractions(0, 1), min_size=16, max_size=16))
    def test_round_trip(self, ws):
        t = random_table(ws)
        assert vector_to_table(table_to_vector(t)) == t
        v = table_to_vector(t)
        assert table_to_vector(vector_to_table(v)) == v


class TestInequality:
    def test_canonical(self):
        q = LinearInequality("correlation", [F(1, 6), F(-1, 3)], F(1, 2)).canonical()
        assert q.coeffs == (1, -2) and q.bound == 3

    def test_canonical_idempotent(self):
        q = LinearInequality("correlation", [4, -6], 2).canonical()
        assert q.canonical() == q and q.coeffs == (2, -3)

    def test_from_table_matches_full_evaluation(self):
        # p(1,1|0,0) <= 1/2 in reduced coordinates
        q = LinearInequality.from_table(S221, lambda a, b, i, j: int((a, b, i, j) == (1, 1, 0, 0)), F(1, 2))
        for t in (ProbTable.uniform(S221), swap_table(), zero_table()):
            assert (q.value(table_to_vector(t).coords) <= q.bound) == (t[1, 1, 0, 0] <= F(1, 2))
            assert q.value(table_to_vector(t).coords) - q.bound == t[1, 1, 0, 0] - F(1, 2)

    def test_dimension_checked(self):
        with pytest.raises(DimensionError):
            LinearInequality(Picture.CORRELATION, [1, 1], 1).value([1])

    def test_corr_from_coords(self):
        c = CorrMatrix.from_coords(Scenario(2), [1, 0, 0, -1])
        assert c.c == ((1, 0), (0, -1))
