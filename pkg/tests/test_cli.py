import csv
import io
import math
import subprocess
import sys

import pytest

from fraclimit import __version__
from fraclimit.cli import (
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    UsageError,
    main,
    parse_order,
    parse_schedule,
)
from fraclimit.functions import Power
from fraclimit.gl_engine import convergence_sweep
from fraclimit.specfun import Rational
from fraclimit.verify import CHECKS, CheckResult


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def parse_report(text):
    return dict(
        (k.strip(), v.strip()) for k, v in (line.split("=", 1) for line in text.splitlines())
    )


# {{{ argument parsing


@pytest.mark.parametrize(
    ("text", "expected"),
    [("1/2", Rational(1, 2)), ("0.5", Rational(1, 2)), ("2/6", Rational(1, 3)),
     ("1.5", Rational(3, 2)), ("-3/4", Rational(-3, 4)), ("2", Rational(2))],
)
def test_parse_order(text, expected):
    assert parse_order(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1/2/3"])
def test_parse_order_rejects(text):
    with pytest.raises(UsageError):
        parse_order(text)


def test_parse_schedule():
    assert parse_schedule("100:100000:10") == [100, 1000, 10000, 100000]
    assert parse_schedule("10,20,40") == [10, 20, 40]
    assert parse_schedule("7") == [7]
    assert parse_schedule("1:8:2") == [1, 2, 4, 8]


@pytest.mark.parametrize("text", ["10,5", "10,10", "0,5", "a:b:c", "1:10:1", "1:100000000:10", "1:2"])
def test_parse_schedule_rejects(text):
    with pytest.raises(UsageError):
        parse_schedule(text)


# }}}


# {{{ eval


def test_eval_half_derivative(capsys):
    code, out, _ = run(capsys, "eval", "--function", "power:1", "--order", "1/2",
                       "--x", "1", "--q", "1", "--n", "10000")
    assert code == EXIT_OK
    report = parse_report(out)
    assert float(report["abs_error"]) < 5e-3
    assert report["handedness"] == "forward"
    assert set(report) >= {"gl_value", "rl_value", "abs_error", "h", "handedness"}


def test_eval_even_denominator_negative_q(capsys):
    code, _, err = run(capsys, "eval", "--function", "power:1", "--order", "1/2",
                       "--x", "1", "--q", "-1", "--n", "100")
    assert code == EXIT_NUMERIC
    assert "BranchError" in err


def test_eval_poly_matches_power_bitwise(capsys):
    _, a, _ = run(capsys, "eval", "--function", "power:1", "--order", "1/2", "--n", "10000")
    _, b, _ = run(capsys, "eval", "--function", "poly:0,1", "--order", "1/2", "--n", "10000")
    assert parse_report(a)["gl_value"] == parse_report(b)["gl_value"]


def test_eval_reverse_handed(capsys):
    code, out, _ = run(capsys, "eval", "--order", "1/3", "--q", "-8", "--n", "10000")
    assert code == EXIT_OK
    assert parse_report(out)["handedness"] == "reverse"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--order", "1/2"],
        ["eval", "--order", "x", "--n", "10"],
        ["eval", "--function", "bogus", "--order", "1/2", "--n", "10"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_numeric_error_names(capsys):
    code, _, err = run(capsys, "eval", "--order", "1/2", "--x", "0", "--n", "10")
    assert code == EXIT_NUMERIC
    assert "DegenerateError" in err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert __version__ in out


# }}}


# {{{ roots


def test_roots_third(capsys):
    code, out, _ = run(capsys, "roots", "--order", "1/3", "--m", "1")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "q,residual,handedness,branch_note"
    rows = parse_csv(out)
    assert [float(r["q"]) for r in rows] == pytest.approx([-8.0, 1.0], abs=1e-9)
    assert [r["handedness"] for r in rows] == ["reverse", "forward"]


def test_roots_half(capsys):
    code, out, _ = run(capsys, "roots", "--order", "1/2", "--m", "1")
    assert code == EXIT_OK
    rows = parse_csv(out)
    assert len(rows) == 1 and float(rows[0]["q"]) == 1.0


def test_roots_search_matches_default(capsys):
    _, default, _ = run(capsys, "roots", "--order", "1/2", "--m", "1")
    _, positive, _ = run(capsys, "roots", "--order", "1/2", "--m", "1", "--search", "0:50")
    assert default == positive


def test_roots_negative_search_value(capsys):
    code, out, _ = run(capsys, "roots", "--order", "1/3", "--search", "-10:-1")
    assert code == EXIT_OK
    assert [float(r["q"]) for r in parse_csv(out)] == pytest.approx([-8.0], abs=1e-9)


def test_roots_decimal_even_denominator_warns(capsys):
    code, _, err = run(capsys, "roots", "--order", "0.5")
    assert code == EXIT_OK
    assert "even denominator" in err


def test_roots_integer_order(capsys):
    code, out, _ = run(capsys, "roots", "--order", "1")
    assert code == EXIT_OK
    assert parse_csv(out)[0]["branch_note"] == "integer-order-limit"
    code, _, err = run(capsys, "roots", "--order", "2")
    assert code == EXIT_NUMERIC and "ParameterError" in err


# }}}


# {{{ converge and diverge-demo


CONVERGE_HEADER = "N,h,gl_value,rl_value,abs_error,observed_order"


def test_converge_half(capsys):
    code, out, _ = run(capsys, "converge", "--function", "power:1", "--order", "1/2",
                       "--x", "1", "--q", "1", "--n", "100:100000:10")
    assert code == EXIT_OK
    assert out.splitlines()[0] == CONVERGE_HEADER
    rows = parse_csv(out)
    assert len(rows) == 4
    assert rows[0]["observed_order"] == ""
    errs = [float(r["abs_error"]) for r in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_converge_taylor(capsys):
    _, out, _ = run(capsys, "converge", "--function", "taylor-exp:12", "--order", "1/2",
                    "--x", "0.5", "--q", "1", "--n", "100:10000:10")
    assert float(parse_csv(out)[-1]["abs_error"]) < 1e-2


def test_converge_non_root_stalls(capsys):
    _, out, _ = run(capsys, "converge", "--function", "power:1", "--order", "1/2",
                    "--x", "1", "--q", "2", "--n", "100:100000:10")
    errs = [float(r["abs_error"]) for r in parse_csv(out)]
    assert min(errs) > 0.05


def test_converge_fields_round_trip(capsys):
    _, out, _ = run(capsys, "converge", "--order", "1/3", "--q", "-8", "--n", "10,100,1000")
    rows = parse_csv(out)
    sweep = convergence_sweep(Power(1), 1.0, "1/3", -8.0, [10, 100, 1000])
    for row, ref in zip(rows, sweep):
        assert int(row["N"]) == ref.N
        assert float(row["h"]) == ref.h
        assert float(row["gl_value"]) == ref.gl_value
        assert float(row["abs_error"]) == ref.abs_error


def test_converge_matches_fixture(capsys, fixtures_dir):
    _, out, _ = run(capsys, "converge", "--function", "power:1", "--order", "1/2",
                    "--q", "1", "--n", "100:100000:10")
    expected = parse_csv((fixtures_dir / "calib_half_q1.csv").read_text())
    for row, want in zip(parse_csv(out), expected):
        assert float(row["gl_value"]) == pytest.approx(float(want["gl_value"]), rel=1e-12)


def test_converge_deterministic_across_threads(capsys, monkeypatch):
    argv = ["converge", "--function", "taylor-sin:9", "--order", "2/3", "--x", "0.8",
            "--q", "1", "--n", "10:100000:10"]
    outputs = []
    for threads in ("1", "3", "8"):
        monkeypatch.setenv("FRACLIMIT_THREADS", threads)
        outputs.append(run(capsys, *argv)[1])
    monkeypatch.delenv("FRACLIMIT_THREADS")
    outputs.append(run(capsys, *argv)[1])
    assert len(set(outputs)) == 1


@pytest.mark.parametrize("bad", ["0", "-2", "many"])
def test_bad_thread_count(capsys, monkeypatch, bad):
    monkeypatch.setenv("FRACLIMIT_THREADS", bad)
    code, _, err = run(capsys, "converge", "--order", "1/2", "--n", "10,100")
    assert code == EXIT_USAGE
    assert "FRACLIMIT_THREADS" in err


def test_diverge_demo(capsys):
    code, out, _ = run(capsys, "diverge-demo", "--order", "1/2", "--x", "1",
                       "--h", "0.01", "--n", "100:100000:10")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "N,partial_value"
    values = [abs(float(r["partial_value"])) for r in parse_csv(out)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] / values[0] > 10


def test_diverge_demo_integer_order_settles(capsys):
    _, out, _ = run(capsys, "diverge-demo", "--order", "1", "--x", "1",
                    "--h", "0.01", "--n", "100:100000:10")
    for r in parse_csv(out):
        assert float(r["partial_value"]) == pytest.approx(1.0, rel=1e-12)


def test_diverge_demo_smaller_step(capsys):
    _, a, _ = run(capsys, "diverge-demo", "--order", "1/2", "--h", "0.01", "--n", "10000:1000000:10")
    _, b, _ = run(capsys, "diverge-demo", "--order", "1/2", "--h", "0.001", "--n", "10000:1000000:10")
    va = [float(r["partial_value"]) for r in parse_csv(a)]
    vb = [float(r["partial_value"]) for r in parse_csv(b)]
    # same growth per decade, different prefactor
    assert va[-1] / va[-2] == pytest.approx(math.sqrt(10), rel=0.2)
    assert vb[-1] / vb[-2] == pytest.approx(math.sqrt(10), rel=0.2)
    assert va[-1] / vb[-1] == pytest.approx(math.sqrt(10), rel=0.1)


def test_zero_step_is_numeric_error(capsys):
    code, _, err = run(capsys, "diverge-demo", "--order", "1/2", "--h", "0", "--n", "10")
    assert code == EXIT_NUMERIC and "ZeroStepError" in err


# }}}


# {{{ verify


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == len(CHECKS)
    assert all(" PASS " in line for line in lines)


def test_verify_only(capsys):
    code, out, _ = run(capsys, "verify", "--only", "result4")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 1 and out.startswith("result4")


def test_verify_reduced_lemma7(capsys):
    code, out, _ = run(capsys, "verify", "--only", "lemma7", "--max-n", "1000")
    assert code == EXIT_OK
    assert "PASS" in out and "tol=5e-02" in out


def test_verify_unknown_check(capsys):
    code, _, _ = run(capsys, "verify", "--only", "nope")
    assert code == EXIT_USAGE


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(CHECKS, "result4", lambda n: CheckResult("result4", False, 1.0, 1e-12))
    code, out, _ = run(capsys, "verify", "--only", "result4")
    assert code == EXIT_VERIFY_FAILED
    assert "FAIL" in out


# }}}


# {{{ output handling


def test_output_file(capsys, tmp_path):
    target = tmp_path / "roots.csv"
    code, out, _ = run(capsys, "roots", "--order", "1/3", "-o", str(target))
    assert code == EXIT_OK and out == ""
    data = target.read_bytes()
    assert b"\r\n" not in data
    assert data.startswith(b"q,residual,handedness,branch_note\n")


def test_byte_identical_reruns(capsys):
    argv = ["converge", "--order", "1/3", "--q", "-8", "--n", "10:10000:10"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fraclimit", "verify", "--only", "result1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("result1")


# }}}
