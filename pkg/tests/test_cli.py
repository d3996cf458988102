import json

import pytest

from feketeca import cli
from feketeca.cli import (
    EXIT_NONSURJECTIVE,
    EXIT_OK,
    EXIT_UNKNOWN,
    EXIT_USAGE,
    EXIT_VIOLATIONS,
    parse_schedule,
    parse_sides,
)


@pytest.fixture
def describe(tmp_path):
    def write(name, payload):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(payload))
        return str(path)

    return write


AND1D_TABLE_CSV = """\
x1,out_size,full_size,ratio,lambda_qits,status
1,2,2,1,0,ok
2,4,4,1,0,ok
3,7,8,0.935784974019,0.192645077942,ok
4,12,16,0.89624062518,0.415037499279,ok
5,21,32,0.878463484556,0.607682577221,ok
6,37,64,0.868242227605,0.790546634371,ok
"""


class TestParsers:
    def test_parse_sides(self):
        assert parse_sides("3") == (3,)
        assert parse_sides("2x3") == (2, 3)
        assert parse_sides("2 x 3 x 4") == (2, 3, 4)
        with pytest.raises(cli.DescriptionError):
            parse_sides("0x3")
        with pytest.raises(cli.DescriptionError):
            parse_sides("2x3", dim=1)

    def test_parse_schedule(self):
        assert parse_schedule("diag:1..3", 2) == [(1, 1), (2, 2), (3, 3)]
        assert parse_schedule("1x1,2x2", 2) == [(1, 1), (2, 2)]
        with pytest.raises(cli.DescriptionError):
            parse_schedule("diag:5..3", 1)
        with pytest.raises(cli.DescriptionError):
            parse_schedule("diag:x..3", 1)


class TestDescriptionFiles:
    def test_builtin_round_trip(self, describe):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        ca, labels = cli.load_description(path)
        assert ca.name == "and1d" and labels is None

    def test_explicit_table(self, describe):
        path = describe(
            "custom",
            {
                "dimension": 1,
                "states": 2,
                "neighborhood": [0, 1],
                "rule": {"table": [0, 0, 0, 1]},
            },
        )
        ca, _ = cli.load_description(path)
        assert ca.rule_table == (0, 0, 0, 1)

    def test_labelled_states(self, describe):
        path = describe(
            "labels",
            {
                "dimension": 1,
                "states": ["a", "b"],
                "neighborhood": [0, 1],
                "rule": {"table": ["a", "a", "a", "b"]},
            },
        )
        ca, labels = cli.load_description(path)
        assert ca.rule_table == (0, 0, 0, 1)
        assert labels == {"a": 0, "b": 1}

    @pytest.mark.parametrize(
        "payload, fragment",
        [
            ({}, "rule"),
            ({"rule": {"builtin": "nope"}}, "rule"),
            ({"rule": {"table": [0, 0]}}, "dimension"),
            (
                {"dimension": 1, "states": 1, "neighborhood": [0], "rule": {"table": [0]}},
                "states",
            ),
            (
                {
                    "dimension": 1,
                    "states": 2,
                    "neighborhood": [0, 0],
                    "rule": {"table": [0, 0, 0, 1]},
                },
                "neighborhood",
            ),
            (
                {
                    "dimension": 1,
                    "states": 2,
                    "neighborhood": [0, 1],
                    "rule": {"table": [0, 0, 1]},
                },
                "rule",
            ),
            ({"rule": {"builtin": "and1d"}, "bogus": 1}, "bogus"),
        ],
    )
    def test_errors_name_the_offending_key(self, describe, payload, fragment):
        path = describe("bad", payload)
        with pytest.raises(cli.DescriptionError) as info:
            cli.load_description(path)
        assert fragment in str(info.value)

    def test_parse_error_exit_code(self, describe, capsys):
        path = describe("bad", {"rule": {"builtin": "nope"}})
        assert cli.main(["decide", path]) == EXIT_USAGE
        assert "rule" in capsys.readouterr().err


class TestOutTable:
    def test_golden_and1d(self, describe, capsys):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        assert cli.main(["out-table", path, "--max-sides", "6"]) == EXIT_OK
        assert capsys.readouterr().out == AND1D_TABLE_CSV

    def test_methods_agree(self, describe, capsys):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        cli.main(["out-table", path, "--max-sides", "6", "--method", "brute"])
        brute = capsys.readouterr().out
        cli.main(["out-table", path, "--max-sides", "6", "--method", "transfer"])
        transfer = capsys.readouterr().out
        assert brute == transfer == AND1D_TABLE_CSV

    def test_byte_identical_across_runs(self, describe, capsys):
        path = describe("and2d", {"rule": {"builtin": "and2d"}})
        argv = ["out-table", path, "--sides-list", "1x1,2x2,3x3"]
        cli.main(argv)
        first = capsys.readouterr().out
        cli.main(argv)
        assert capsys.readouterr().out == first
        assert "340" in first

    def test_sides_list_2d(self, describe, capsys):
        path = describe("and2d", {"rule": {"builtin": "and2d"}})
        cli.main(["out-table", path, "--sides-list", "2x3"])
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "x1,x2,out_size,full_size,ratio,lambda_qits,status"
        assert out[1].startswith("2,3,58,64,")

    def test_refusal_row(self, describe, capsys):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        cli.main(
            ["out-table", path, "--sides-list", "3,40", "--budget", "1024", "--method", "brute"]
        )
        lines = capsys.readouterr().out.splitlines()
        assert lines[1].startswith("3,7,8,")
        assert "refused: cost 2199023255552 exceeds budget 1024" in lines[2]

    def test_out_file(self, describe, tmp_path, capsys):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        target = tmp_path / "table.csv"
        cli.main(["out-table", path, "--max-sides", "6", "--out", str(target)])
        assert capsys.readouterr().out == ""
        assert target.read_text() == AND1D_TABLE_CSV

    def test_label_mapping_reported(self, describe, capsys):
        path = describe(
            "labels",
            {
                "dimension": 1,
                "states": ["a", "b"],
                "neighborhood": [0, 1],
                "rule": {"table": ["a", "a", "a", "b"]},
            },
        )
        cli.main(["out-table", path, "--max-sides", "3"])
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "# states: a=0 b=1"


class TestDecide:
    def test_shift_exit_zero(self, describe, capsys):
        path = describe("shift", {"rule": {"builtin": "shift"}})
        assert cli.main(["decide", path]) == EXIT_OK
        assert "PROVED_SURJECTIVE" in capsys.readouterr().out

    def test_and1d_exit_ten_with_certificate(self, describe, capsys):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        assert cli.main(["decide", path]) == EXIT_NONSURJECTIVE
        out = capsys.readouterr().out
        assert "verdict: NONSURJECTIVE" in out
        block = "```\nsides: 3\n1 0 1\ncode: 5\n```"
        assert block in out

    def test_and2d_certificate_grid(self, describe, capsys):
        path = describe("and2d", {"rule": {"builtin": "and2d"}})
        assert cli.main(["decide", path]) == EXIT_NONSURJECTIVE
        out = capsys.readouterr().out
        assert "sides: 2 x 3" in out
        assert "code: " in out

    def test_and2d_small_budget_unknown(self, describe, capsys):
        path = describe("and2d", {"rule": {"builtin": "and2d"}})
        assert cli.main(["decide", path, "--budget", "100"]) == EXIT_UNKNOWN
        out = capsys.readouterr().out
        assert "verdict: UNKNOWN" in out
        assert "cleared sizes: 1x1" in out

    def test_xor_exit_zero(self, describe):
        path = describe("xor", {"rule": {"builtin": "xor1d"}})
        assert cli.main(["decide", path]) == EXIT_OK


class TestLambda:
    def test_shift_bracket_line(self, describe, capsys):
        path = describe("shift", {"rule": {"builtin": "shift"}})
        assert cli.main(["lambda", path, "--schedule", "diag:1..50"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "lambda bracket: [1.000000, 1.000000]" in out

    def test_xor_bracket_line(self, describe, capsys):
        path = describe("xor", {"rule": {"builtin": "xor1d"}})
        cli.main(["lambda", path, "--schedule", "diag:1..50"])
        assert "lambda bracket: [1.000000, 1.000000]" in capsys.readouterr().out

    def test_and1d_bracket_around_growth_rate(self, describe, capsys):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        assert cli.main(["lambda", path, "--schedule", "diag:1..2000"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "lambda bracket: [0.811370, 0.811541]" in out
        assert "x1,out_size,ratio" in out

    def test_deterministic(self, describe, capsys):
        path = describe("and", {"rule": {"builtin": "and1d"}})
        cli.main(["lambda", path, "--schedule", "diag:1..100"])
        first = capsys.readouterr().out
        cli.main(["lambda", path, "--schedule", "diag:1..100"])
        assert capsys.readouterr().out == first


class TestFekete:
    def test_builtin_additive(self, capsys):
        assert cli.main(["fekete", "--function", "3n", "--schedule", "diag:1..100"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "violations: 0" in out
        assert "running infimum: 3" in out

    def test_builtin_product_plus(self, capsys):
        rc = cli.main(["fekete", "--function", "xy+x+y", "--schedule", "diag:1..1000"])
        assert rc == EXIT_OK
        out = capsys.readouterr().out
        assert "running infimum: 1.002" in out

    def test_violation_gate_suppresses_estimate(self, capsys):
        rc = cli.main(["fekete", "--function", "n^2", "--schedule", "diag:1..10"])
        assert rc == EXIT_VIOLATIONS
        out = capsys.readouterr().out
        assert "estimate suppressed" in out
        assert "running infimum" not in out

    def test_table_gate(self, tmp_path, capsys):
        path = tmp_path / "table.json"
        path.write_text(json.dumps({"values": {"1": 2, "2": 5, "3": 12}}))
        rc = cli.main(["fekete", "--table", str(path), "--schedule", "1,2,3"])
        assert rc == EXIT_VIOLATIONS
        assert "estimate suppressed" in capsys.readouterr().out

    def test_table_estimate(self, tmp_path, capsys):
        path = tmp_path / "table.json"
        path.write_text(json.dumps({"values": {"1": 3, "2": 6, "3": 9}}))
        rc = cli.main(["fekete", "--table", str(path), "--schedule", "1,2,3"])
        assert rc == EXIT_OK
        assert "running infimum: 3" in capsys.readouterr().out

    def test_incomplete_table_names_missing_index(self, tmp_path, capsys):
        path = tmp_path / "table.json"
        path.write_text(json.dumps({"values": {"1": 3, "2": 6}}))
        rc = cli.main(["fekete", "--table", str(path), "--schedule", "1,2,3"])
        assert rc == EXIT_USAGE
        assert "missing index 3" in capsys.readouterr().err

    def test_function_xor_table_exclusive(self, capsys):
        rc = cli.main(["fekete", "--schedule", "diag:1..5"])
        assert rc == EXIT_USAGE
