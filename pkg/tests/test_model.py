import json
from fractions import Fraction

import pytest

from l0mult.errors import DimensionError, InfeasiblePoint, ParseError
from l0mult.model import (is_feasible, make_record, parse_instance, parse_point,
                          parse_rational, serialize_instance)

F = Fraction


class TestParseRational:
    def test_decimal_exact(self):
        assert parse_rational("-2.5") == F(-5, 2)
        assert parse_rational("0.1") == F(1, 10)
        assert parse_rational("12") == 12

    def test_fraction_form(self):
        assert parse_rational("1/10") == F(1, 10)
        assert parse_rational("0.1") == parse_rational("1/10")
        assert parse_rational("-7/3") == F(-7, 3)

    def test_int_token(self):
        assert parse_rational(3) == 3

    def test_rejects(self):
        for bad in ("1e3", "1.2.3", "", "a", "1/0", None, 0.1, True, "2/-3"):
            with pytest.raises(ParseError):
                parse_rational(bad)


class TestParseInstance:
    def test_example(self, example_text, example):
        assert example.epsilon == F(1, 10)
        assert example.A.at(0, 2) == -2
        assert example.B.at(0, 3) == F(-5, 2)
        assert (example.m, example.n, example.l) == (3, 4, 3)

    def test_round_trip(self, example_text, example):
        again = parse_instance(serialize_instance(example))
        assert again == example

    def test_short_row_rejected(self, example_text):
        doc = json.loads(example_text)
        doc["A"][0] = doc["A"][0][:3]
        with pytest.raises(DimensionError):
            parse_instance(json.dumps(doc))

    def test_negative_epsilon_rejected(self, example_text):
        doc = json.loads(example_text)
        doc["epsilon"] = "-1"
        with pytest.raises(ValueError):
            parse_instance(json.dumps(doc))

    def test_l_zero_without_b(self):
        text = json.dumps({"m": 1, "n": 2, "l": 0, "A": [["1", "1"]],
                           "y": ["1"], "epsilon": "0"})
        inst = parse_instance(text)
        assert inst.l == 0 and inst.B.rows == 0
        again = parse_instance(serialize_instance(inst))
        assert again == inst

    def test_float_entries_rejected(self):
        text = json.dumps({"m": 1, "n": 1, "l": 0, "A": [[0.1]],
                           "y": ["1"], "epsilon": "0"})
        with pytest.raises(ParseError):
            parse_instance(text)

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            parse_instance("{nope")


class TestFeasibility:
    def test_example_points(self, example):
        assert is_feasible(example, parse_point("0,0,2,1", 4))
        assert is_feasible(example, parse_point("0,1,-1/2,0", 4))
        assert not is_feasible(example, parse_point("0,0,0,0", 4))

    def test_exactness_at_the_boundary(self, example):
        x = parse_point("0,0,2,1", 4)
        rec = make_record(example, x)
        # perturbing a tight constraint by any positive rational flips it
        j = rec.active_set[0]
        b_list = list(example.b)
        for delta in (F(1, 10 ** 12), F(1, 7)):
            b_list[j] = example.b[j] - delta
            tightened = type(example)(m=example.m, n=example.n, l=example.l,
                                      A=example.A, B=example.B, y=example.y,
                                      b=tuple(b_list), epsilon=example.epsilon)
            assert not is_feasible(tightened, x)


class TestMakeRecord:
    def test_first_example_point(self, example):
        rec = make_record(example, parse_point("0,0,2,1", 4))
        assert rec.support == (2, 3)
        assert rec.active_set == (0, 2)
        assert rec.residual_sq == 0
        assert rec.strict_interior

    def test_second_example_point(self, example):
        rec = make_record(example, parse_point("0,1,-1/2,0", 4))
        assert rec.support == (1, 2)
        assert rec.active_set == (0,)
        assert rec.residual_sq == 0

    def test_third_example_point(self, example):
        rec = make_record(example, parse_point("1/2,0,-1/4,0", 4))
        assert rec.support == (0, 2)
        assert rec.active_set == (0, 2)
        assert rec.residual_sq == 0

    def test_infeasible_rejected(self, example):
        with pytest.raises(InfeasiblePoint):
            make_record(example, parse_point("0,0,0,0", 4))

    def test_partition_invariant(self, example):
        rec = make_record(example, parse_point("0,0,2,1", 4))
        inactive = tuple(j for j in range(example.l) if j not in rec.active_set)
        assert sorted(rec.active_set + inactive) == list(range(example.l))
        assert len(rec.support) == sum(1 for v in rec.x if v != 0)
