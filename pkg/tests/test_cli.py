import hashlib
import json
import os

import pytest

from ccgrowth.cli import ExperimentPlan, UsageError, main, parse_args

HEIS = "gens a b\nrel [a,[a,b]]\nrel [b,[a,b]]\n"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def digest(path):
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


@pytest.fixture()
def heis(tmp_path):
    p = tmp_path / "heis.txt"
    p.write_text(HEIS)
    return p


# -- plan parsing -----------------------------------------------------------------


def test_parse_args_heisenberg_plan():
    plan = parse_args(["heisenberg", "--n-max", "100", "--radius", "40", "--csv", "out.csv"])
    assert isinstance(plan, ExperimentPlan)
    assert plan.command == "heisenberg"
    assert plan.n_max == 100 and plan.radius == 40 and plan.csv == "out.csv"


def test_parse_args_rejects_k_zero():
    with pytest.raises(UsageError):
        parse_args(["growth", "--presentation", "q.txt", "--k", "0", "--q", "a",
                    "--class", "x", "--n-max", "5", "--csv", "c.csv"])


def test_parse_args_rejects_unknown_flag():
    with pytest.raises(UsageError):
        parse_args(["heisenberg", "--n-max", "5", "--radius", "4", "--csv", "x", "--nope", "1"])


def test_no_arguments_is_usage_error(capsys):
    code, _, err = run([], capsys)
    assert code == 64 and "usage" in err.lower()


# -- exit codes --------------------------------------------------------------------


def test_unreadable_input_exits_66(tmp_path, capsys):
    code, _, err = run(["parse", "--presentation", tmp_path / "missing.txt"], capsys)
    assert code == 66


def test_bad_presentation_exits_66(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("gens a\nrel a a^-1\n")
    code, _, err = run(["parse", "--presentation", bad], capsys)
    assert code == 66 and "empty word" in err


def test_sc_check_verdicts(tmp_path, heis, capsys):
    g16 = tmp_path / "g16.txt"
    code, _, _ = run(["rips-gen", "--presentation", heis, "--k", "16",
                      "--mode", "complete", "--out", g16], capsys)
    assert code == 0
    code, out, _ = run(["sc-check", "--presentation", g16], capsys)
    assert code == 0 and "verdict=pass" in out
    code, out, _ = run(["sc-check", "--presentation", heis], capsys)
    assert code == 1 and "verdict=fail" in out


def test_dehn_exit_codes(tmp_path, heis, capsys):
    g16 = tmp_path / "g16.txt"
    run(["rips-gen", "--presentation", heis, "--k", "16", "--mode", "complete",
         "--out", g16], capsys)
    with open(g16) as f:
        first_relator = f.readlines()[1].removeprefix("rel ").strip()
    code, out, _ = run(["dehn", "--presentation", g16, "--word", first_relator], capsys)
    assert code == 0 and "trivial" in out
    code, out, _ = run(["dehn", "--presentation", g16, "--word", "x y"], capsys)
    assert code == 1 and "non-trivial" in out
    g2 = tmp_path / "g2.txt"
    run(["rips-gen", "--presentation", heis, "--k", "2", "--mode", "complete",
         "--out", g2], capsys)
    code, out, _ = run(["dehn", "--presentation", g2, "--word", "x y"], capsys)
    assert code == 2


def test_growth_materialize_budget_exits_3(tmp_path, heis, capsys):
    code, _, err = run(["growth", "--presentation", heis, "--k", "10", "--q", "[a,b]",
                        "--class", "x", "--n-max", "40", "--mode", "materialize",
                        "--csv", tmp_path / "c.csv"], capsys)
    assert code == 3 and "counts" in err


def test_lip_uncertified_context_exits_2(tmp_path, heis, capsys):
    code, _, err = run(["lip", "--presentation", heis, "--k", "10", "--q", "a",
                        "--radius", "1"], capsys)
    assert code == 2


def test_lenfun_verdict_exit(capsys):
    code, out, _ = run(["lenfun", "--alpha", "1/2", "--lambda", "4", "--rmax", "10"], capsys)
    assert code == 0 and json.loads(out)["verdict"] is True
    code, out, _ = run(["lenfun", "--alpha", "1/3", "--lambda", "4", "--rmax", "10"], capsys)
    assert code == 1 and json.loads(out)["verdict"] is False


# -- outputs -----------------------------------------------------------------------


def test_heisenberg_csv_shape(tmp_path, capsys):
    csv = tmp_path / "h.csv"
    code, out, _ = run(["heisenberg", "--n-max", "12", "--radius", "10", "--csv", csv], capsys)
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "n,z_power_length,four_sqrt_bound"
    assert lines[1] == "1,4,4"
    # rows outside the ball keep an empty cell, never a guess
    beyond = [ln for ln in lines[1:] if ln.split(",")[1] == ""]
    assert beyond, "radius 10 cannot cover n=12"


def test_growth_csv_real_formatting(tmp_path, heis, capsys):
    csv = tmp_path / "g.csv"
    code, _, _ = run(["growth", "--presentation", heis, "--k", "10", "--q", "[a,b]",
                      "--class", "x", "--n-max", "6", "--mode", "counts",
                      "--csv", csv], capsys)
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "n,q_length,ln_upper,oracle_exact"
    assert lines[1].startswith("0,0,0,")
    cell = lines[2].split(",")[2]
    assert len(cell.replace(".", "").replace("-", "").lstrip("0")) <= 12


def test_rips_gen_sidecar(tmp_path, heis, capsys):
    out = tmp_path / "g.txt"
    code, _, _ = run(["rips-gen", "--presentation", heis, "--k", "3",
                      "--mode", "complete", "--out", out], capsys)
    assert code == 0
    sidecar = json.loads((tmp_path / "g.txt.json").read_text())
    assert sidecar["k"] == 3 and sidecar["mode"] == "complete"
    assert len(sidecar["rules"]) == 8 and len(sidecar["block_table"]) == 10
    assert sidecar["block_table"][0]["block"] == [3, 6]
    # the emitted presentation re-parses
    code, out_text, _ = run(["parse", "--presentation", out], capsys)
    assert code == 0 and json.loads(out_text)["relators"] == 10


def test_no_temp_residue(tmp_path, heis, capsys):
    csv = tmp_path / "h.csv"
    run(["heisenberg", "--n-max", "5", "--radius", "6", "--csv", csv], capsys)
    assert [p for p in os.listdir(tmp_path) if p.endswith(".tmp")] == []


# -- determinism ---------------------------------------------------------------------


def test_plans_are_byte_deterministic(tmp_path, heis, capsys):
    """Every plan re-run with the same seed produces byte-identical files."""
    plans = [
        (["heisenberg", "--n-max", "10", "--radius", "8"], ["--csv", "h.csv"]),
        (
            ["growth", "--presentation", heis, "--k", "10", "--q", "[a,b]",
             "--class", "x", "--n-max", "8", "--mode", "counts"],
            ["--csv", "g.csv", "--fig", "g.png"],
        ),
        (
            ["product-growth", "--n-max", "8", "--seed", "11"],
            ["--csv", "p.csv", "--fig", "p.png"],
        ),
        (["rips-gen", "--presentation", heis, "--k", "2", "--mode", "paper"], ["--out", "r.txt"]),
    ]
    for fixed, outs in plans:
        digests = []
        for attempt in ("one", "two"):
            d = tmp_path / f"{fixed[0]}-{attempt}"
            d.mkdir()
            argv = list(fixed)
            for flag, name in zip(outs[0::2], outs[1::2]):
                argv += [flag, d / name]
            code, _, _ = run(argv, capsys)
            assert code == 0
            digests.append(sorted(digest(d / p) for p in os.listdir(d)))
        assert digests[0] == digests[1], f"non-deterministic outputs for {fixed[0]}"


def test_stdout_deterministic_for_lip_and_lenfun(tmp_path, heis, capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(["lenfun", "--alpha", "2/3", "--lambda", "4", "--rmax", "6",
                            "--seed", "5"], capsys)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
