import itertools
import math
import time

import pytest
from click.testing import CliRunner

from uvk.cli import ExitCode, cli
from uvk.evaluator import BoolVal, Numeral, Strategy, Stuck
from uvk.library.manifest import check_manifest, load_manifest
from uvk.library.report import Outcome, Status
from uvk.library.session import Session
from uvk.syntax import terms as t
from uvk.syntax.parser import parse_file, parse_term
from uvk.syntax.pretty import pretty
from uvk.syntax.resolve import resolve, resolve_term
from uvk.universes import UniverseMode

pytestmark = pytest.mark.slow

HPROP = "Foundations.hlevel1.hProp_core"


def _check_tier(repo_root, foundations, mode):
    session = Session(mode, [foundations])
    manifest = load_manifest(repo_root / "lib" / "manifests" / "tier3.txt")
    report = check_manifest(manifest, [foundations], mode, session=session)
    return session, report


@pytest.fixture(scope="module")
def strict(repo_root, foundations):
    return _check_tier(repo_root, foundations, UniverseMode.STRICT)


@pytest.fixture(scope="module")
def off(repo_root, foundations):
    return _check_tier(repo_root, foundations, UniverseMode.OFF)


def test_strict_manifest_holds(strict):
    _, report = strict
    assert report.ok, "\n".join(report.summary_lines())
    assert report.unsatisfied_cycle is None
    outcomes = {check.module: check.actual for check in report.manifest}
    assert outcomes.pop(HPROP) is Outcome.UNIVERSE_FAIL
    assert set(outcomes.values()) == {Outcome.OK}


def test_truncation_is_what_strict_universes_reject(strict):
    _, report = strict
    hprop = report.file(HPROP)
    failures = {entry.definition: entry for entry in hprop.failures()}
    assert set(failures) == {"ishinh", "hinhand", "hdisj"}
    assert all(entry.status is Status.UNIVERSE_FAIL for entry in failures.values())
    assert "universe inconsistency" in failures["ishinh"].diagnostic
    assert "ishinh" in failures["hinhand"].diagnostic
    assert hprop.universe_cycles


def test_hprop_checks_within_ten_seconds(foundations):
    session = Session(UniverseMode.STRICT, [foundations])
    start = time.perf_counter()
    session.require(HPROP)
    elapsed = time.perf_counter() - start
    assert elapsed < 10, "\n".join(session.report().summary_lines())


def test_everything_checks_with_universes_off(off):
    session, report = off
    assert report.ok
    assert all(file.outcome is Outcome.OK for file in report.files)
    assert "ishinh" in session.env
    assert report.unsatisfied_cycle is not None


def test_axiom_sets(strict):
    _, report = strict
    axioms = report.axioms()
    assert axioms["funcontr"] == ["etacorrection", "funextfunax"]
    assert axioms["stuck_nat"] == ["funextfunax"]
    # Mentions the postulate yet computes, since it sits in the second component.
    assert axioms["unstuck_nat"] == ["funextfunax"]
    assert "lem" in axioms["decidebool"]
    for module in ("Foundations.Generalities.uuu_core", "Foundations.hlevel2.hnat_core"):
        for entry in report.file(module).entries:
            assert entry.axioms == [], entry.definition


def test_counting_equivalences_are_proved(strict):
    session, report = strict
    axioms = report.axioms()
    for name in ("weqstnsn", "weqfromcoprodofstn", "weqfromprodofstn", "isfinitecoprod", "isfinitedirprod"):
        assert axioms[name] == [], name
    for name in ("weqweqcoprodunit", "weqfromweqstn", "isfiniteweqself"):
        assert axioms[name] == ["etacorrection", "funextfunax"], name
    assert "funextfunax" in axioms["impred"]
    postulates = {entry.name for entry in session.env if entry.is_postulate}
    assert postulates.isdisjoint({"weqfromcoprodofstn", "weqfromprodofstn", "weqfromweqstn"})


def test_automorphism_count_computes_lazily(strict):
    session, _ = strict
    expr = "stntonat (factorial 2) (pr1weq (weq (stn 2) (stn 2)) (stn (factorial 2)) (weqfromweqstn 2) (idweq (stn 2)))"
    assert session.evaluate_text(expr, Strategy.LAZY).classification == Numeral(0)


@pytest.mark.parametrize(
    "expr, expected",
    [
        ("natgtb 7 5", BoolVal(True)),
        ("natgtb 5 7", BoolVal(False)),
        ("factorial 5", Numeral(120)),
        ("unstuck_nat", Numeral(3)),
        ("stntonat 5 (lastelement 4)", Numeral(4)),
        ("fincard (coprod (stn 2) (stn 3)) (isfinitecoprod (stn 2) (stn 3) (isfinitestn 2) (isfinitestn 3))", Numeral(5)),
        ("fincard (dirprod (stn 2) (stn 3)) (isfinitedirprod (stn 2) (stn 3) (isfinitestn 2) (isfinitestn 3))", Numeral(6)),
    ],
)
@pytest.mark.parametrize("strategy", list(Strategy))
def test_library_terms_compute(strict, expr, expected, strategy):
    session, _ = strict
    assert session.evaluate_text(expr, strategy).classification == expected


def test_function_extensionality_blocks_computation(strict):
    session, _ = strict
    result = session.evaluate_text("stuck_nat", Strategy.LAZY)
    assert isinstance(result.classification, Stuck)
    assert result.classification.blockers == frozenset({"funextfunax"})


def test_cli_eval_against_a_tier():
    result = CliRunner().invoke(cli, ["eval", "--lib", "tier2", "natgtb 7 5"])
    assert result.exit_code == ExitCode.OK, result.output
    lines = result.output.splitlines()
    assert lines[0] == "true"
    assert lines[2] == "  BoolVal true"


def test_cli_check_tier():
    result = CliRunner().invoke(cli, ["check", "tier1"])
    assert result.exit_code == ExitCode.OK, result.output
    assert "manifest Foundations.Generalities.uu0_core: expected ok, got ok [ok]" in result.output


def test_cli_check_tier_with_a_broken_file(tmp_path):
    broken = tmp_path / "broken.uv"
    broken.write_text("Definition oops : nat := true.\n")
    result = CliRunner().invoke(cli, ["check", "tier1", str(broken)])
    assert result.exit_code == ExitCode.FAILURE, result.output
    assert "oops: error" in result.output


def _shipped_terms(repo_root, env):
    for path in sorted((repo_root / "lib").rglob("*.uv")):
        for command in parse_file(path.read_text(), str(path)):
            resolved = resolve(command, env)
            for field in ("type", "body", "expr"):
                term = getattr(resolved, field, None)
                if isinstance(term, t.Term):
                    yield f"{path.name}:{command.location.line}", term


def test_every_shipped_term_prints_and_parses_back(repo_root, off):
    session, _ = off
    count = 0
    for where, term in _shipped_terms(repo_root, session.env):
        text = pretty(term)
        assert t.struct_eq(resolve_term(parse_term(text), session.env), term), f"{where}: {text}"
        count += 1
    assert count > 100


def test_arithmetic_matches_python_up_to_ten(strict):
    session, _ = strict
    for n, m in itertools.product(range(11), repeat=2):
        assert session.evaluate_text(f"natgtb {n} {m}").classification == BoolVal(n > m)
        assert session.evaluate_text(f"natplus {n} {m}").classification == Numeral(n + m)
        assert session.evaluate_text(f"natmult {n} {m}").classification == Numeral(n * m)


@pytest.mark.parametrize("strategy", list(Strategy))
def test_finite_cardinalities_add_and_multiply(strict, strategy):
    session, _ = strict
    for a, b in itertools.product(range(5), repeat=2):
        witnesses = f"(stn {a}) (stn {b}) (isfinitestn {a}) (isfinitestn {b})"
        coprod = f"fincard (coprod (stn {a}) (stn {b})) (isfinitecoprod {witnesses})"
        dirprod = f"fincard (dirprod (stn {a}) (stn {b})) (isfinitedirprod {witnesses})"
        assert session.evaluate_text(coprod, strategy).classification == Numeral(a + b)
        assert session.evaluate_text(dirprod, strategy).classification == Numeral(a * b)


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("n", range(4))
def test_automorphisms_of_stn_are_counted(strict, strategy, n):
    session, _ = strict
    expr = f"fincard (weq (stn {n}) (stn {n})) (isfiniteweqself (stn {n}) (isfinitestn {n}))"
    assert session.evaluate_text(expr, strategy).classification == Numeral(math.factorial(n))


def test_finiteness_axiom_sets(strict):
    _, report = strict
    axioms = report.axioms()
    assert axioms["impred"] == ["etacorrection", "funextfunax"]
    for name in ("isfinite", "fincard", "isfinitestn", "isfiniteempty", "isfiniteweq"):
        assert axioms[name] == [], name


def test_eta_is_available_only_as_a_postulate(strict):
    session, _ = strict
    source = (
        "Require Import Foundations.Generalities.uu0_core.\n"
        "Definition etanat (f : nat -> nat) : paths (nat -> nat) (fun x : nat => f x) f :=\n"
        "  etacorrection nat (fun _ : nat => nat) f.\n"
    )
    report = session.load_text(source, "eta_use.uv")
    entry = next(entry for entry in report.entries if entry.definition == "etanat")
    assert entry.status is Status.OK, entry.diagnostic
    assert entry.axioms == ["etacorrection"]
