import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from urnpuzzle.cli import run
from urnpuzzle.errors import ParseError, ValidationError
from urnpuzzle.exact import parse_rational
from urnpuzzle.scenario import ScenarioDocument, emit_scenario, parse_scenario
from urnpuzzle.urn import Color

DATA = Path(__file__).parent / "data"


def invoke(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestParseScenario:
    def test_defaults(self):
        doc = parse_scenario("{}")
        assert doc == ScenarioDocument()
        assert doc.balls == 100 and doc.prior.type == "uniform"
        assert doc.evidence == (Color.RED,) and doc.query.color is Color.RED

    def test_blank_is_default(self):
        assert parse_scenario("  \n") == ScenarioDocument()

    def test_custom_weights_normalized(self):
        doc = parse_scenario((DATA / "custom_weights.json").read_text())
        assert doc.prior.weights == (0, Fraction(1, 2), Fraction(1, 2))
        assert doc.scenario().prior.masses == (0, Fraction(1, 2), Fraction(1, 2))

    def test_binomial_p_is_rational(self):
        assert parse_scenario((DATA / "binomial.json").read_text()).prior.p == Fraction(1, 3)

    @pytest.mark.parametrize(
        "name, field",
        [
            ("bad_p.json", "prior.p"),
            ("bad_color.json", "evidence[1]"),
            ("negative_weight.json", "prior.weights[2]"),
        ],
    )
    def test_validation_names_field(self, name, field):
        with pytest.raises(ValidationError) as info:
            parse_scenario((DATA / name).read_text())
        assert info.value.field == field

    @pytest.mark.parametrize(
        "text, field",
        [
            ('{"balls": 0}', "balls"),
            ('{"balls": true}', "balls"),
            ('{"balls": 3, "prior": {"type": "point", "r": 4}}', "prior.r"),
            ('{"balls": 3, "prior": {"type": "point"}}', "prior.r"),
            ('{"balls": 3, "prior": {"type": "beta"}}', "prior.type"),
            ('{"balls": 3, "prior": {"type": "custom", "weights": ["1", "1"]}}', "prior.weights"),
            ('{"balls": 3, "prior": {"type": "custom", "weights": ["0", "0", "0", "0"]}}', "prior.weights"),
            ('{"balls": 3, "prior": {"type": "binomial", "p": "0.5"}}', "prior.p"),
            ('{"balls": 1, "evidence": ["red", "red"]}', "evidence"),
            ('{"query": {"type": "mean"}}', "query.type"),
            ('{"query": {"type": "next", "color": "blue"}}', "query.color"),
            ('{"colour": "red"}', "colour"),
            ('[1, 2]', "(document)"),
        ],
    )
    def test_validation_errors(self, text, field):
        with pytest.raises(ValidationError) as info:
            parse_scenario(text)
        assert info.value.field == field

    def test_malformed_has_location(self):
        with pytest.raises(ParseError, match=r"line 3 column 1"):
            parse_scenario((DATA / "malformed.json").read_text())

    def test_round_trip(self):
        valid = 0
        for path in sorted(DATA.glob("*.json")):
            try:
                doc = parse_scenario(path.read_text())
            except (ParseError, ValidationError):
                continue
            assert parse_scenario(emit_scenario(doc)) == doc, path.name
            valid += 1
        assert valid >= 6


class TestExact:
    def test_default(self):
        code, out, _ = invoke("exact")
        assert code == 0
        assert "2/3" in out and "more likely red" in out and "0.666666666667" in out

    def test_file_and_stdin_agree(self):
        text = (DATA / "default.json").read_text()
        assert invoke("exact", DATA / "default.json")[1] == invoke("exact", "-", stdin=text)[1]

    def test_binomial(self):
        code, out, _ = invoke("exact", DATA / "binomial.json")
        assert code == 0 and "= 1/3" in out and "more likely green" in out

    def test_green_query_verdict_refers_to_red(self):
        # after two greens the next is more likely green
        code, out, _ = invoke("exact", DATA / "greens.json")
        assert code == 0 and "P(next=green | evidence) = 3/4" in out and "more likely green" in out

    def test_equally_likely(self):
        code, out, _ = invoke("exact", "-", stdin='{"evidence": []}')
        assert code == 0 and "1/2" in out and "equally likely" in out

    def test_posterior_query_delegates(self):
        code, out, _ = invoke("exact", DATA / "posterior.json")
        # weights r(4 - r) over r = 0..4 are 0, 3, 4, 3, 0
        assert code == 0 and "P(R=2) = 2/5" in out and "P(R=1) = 3/10" in out

    def test_json_lines(self):
        code, out, _ = invoke("--format", "json-lines", "exact")
        rec = json.loads(out)
        assert parse_rational(rec["value"]) == Fraction(2, 3)
        assert rec["verdict"] == "more likely red"

    def test_flag_after_subcommand(self):
        assert invoke("exact", "--format", "json-lines")[1] == invoke("--format", "json-lines", "exact")[1]


@pytest.mark.parametrize(
    "argv, code, kind",
    [
        (("exact", DATA / "impossible.json"), 5, "conditioning"),
        (("posterior", DATA / "impossible.json"), 5, "conditioning"),
        (("simulate", DATA / "impossible.json", "--trials", "10"), 5, "conditioning"),
        (("exact", DATA / "bad_p.json"), 4, "validation"),
        (("exact", DATA / "bad_color.json"), 4, "validation"),
        (("exact", DATA / "negative_weight.json"), 4, "validation"),
        (("exact", DATA / "malformed.json"), 3, "parse"),
        (("exact", DATA / "exhausted.json"), 6, "domain"),
        (("simulate", "--trials", "0"), 6, "domain"),
        (("simulate", DATA / "rare.json", "--trials", "50"), 7, "saturation"),
        (("puzzle", "litt", "--balls", "1"), 6, "domain"),
        (("exact", DATA / "missing.json"), 64, "usage"),
        (("frobnicate",), 64, "usage"),
        (("crosscheck", "--depth", "1"), 64, "usage"),
        (("crosscheck", "-", "--depth", "5"), 6, "domain"),
    ],
)
def test_error_exit_codes(argv, code, kind):
    got, out, err = invoke(*argv)
    assert got == code
    lines = err.strip().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["error"] == kind


def test_posterior_command():
    code, out, _ = invoke("--format", "json-lines", "posterior", DATA / "custom_weights.json")
    recs = [json.loads(l) for l in out.splitlines()]
    assert [parse_rational(r["value"]) for r in recs] == [0, Fraction(1, 2), Fraction(1, 2)]


def test_posterior_text():
    code, out, _ = invoke("posterior", "-", stdin='{"balls": 2}')
    assert code == 0 and "P(R=1) = 1/3" in out and "P(R=2) = 2/3" in out


class TestPuzzle:
    def test_monty_hall(self):
        code, out, _ = invoke("puzzle", "monty-hall")
        assert code == 0 and "P(win by switching) = 2/3" in out

    def test_bertrand(self):
        code, out, _ = invoke("puzzle", "bertrand-box")
        assert code == 0 and "= 2/3" in out

    def test_litt(self):
        code, out, _ = invoke("--format", "json-lines", "puzzle", "litt", "--balls", "37")
        assert code == 0 and parse_rational(json.loads(out)["value"]) == Fraction(2, 3)


class TestCrosscheck:
    def test_default_agrees(self):
        code, out, _ = invoke("crosscheck")
        assert code == 0 and "AGREE" in out and "DISAGREE" not in out

    @pytest.mark.parametrize("name", ["binomial.json", "greens.json", "posterior.json", "custom_weights.json"])
    def test_files_agree(self, name):
        assert invoke("crosscheck", DATA / name)[0] == 0

    def test_disagree_exits_two(self, monkeypatch):
        from urnpuzzle import urn

        monkeypatch.setattr(urn, "predictive_next", lambda *a: Fraction(1, 2))
        code, out, _ = invoke("crosscheck")
        assert code == 2 and "DISAGREE" in out

    def test_json_lines_parse(self):
        code, out, _ = invoke("--format", "json-lines", "crosscheck", "--depth", "3")
        recs = [json.loads(l) for l in out.splitlines()]
        for r in recs[:-1]:
            assert parse_rational(r["urn_model"]) == parse_rational(r["bayesnet"])
        assert recs[-1]["result"] == "AGREE" and recs[-1]["depth"] == 3


class TestSimulate:
    def test_text_report(self):
        code, out, _ = invoke("simulate", "--trials", "20000", "--seed", "1")
        assert code == 0
        assert "accepted: 20000" in out and "ci(z=3)" in out and "Philox" in out

    def test_json_lines(self):
        code, out, _ = invoke("--format", "json-lines", "simulate", "--trials", "20000")
        rec = json.loads(out)
        assert rec["accepted"] == 20000
        lo, hi = rec["ci_z3"]
        assert lo <= rec["estimate"] <= hi


def test_emit_scenario_round_trip():
    code, out, _ = invoke("--emit-scenario", "exact", DATA / "custom_weights.json")
    assert code == 0
    assert parse_scenario(out) == parse_scenario((DATA / "custom_weights.json").read_text())
    code, again, _ = invoke("--emit-scenario", "exact", "-", stdin=out)
    assert again == out


def test_emit_default_scenario():
    code, out, _ = invoke("exact", "--emit-scenario")
    assert json.loads(out) == {
        "balls": 100,
        "prior": {"type": "uniform"},
        "evidence": ["red"],
        "query": {"type": "next", "color": "red"},
    }
