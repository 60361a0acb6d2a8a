import numpy as np
import pytest

from toneres.cli import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_OK, main
from toneres.config import load_run_config
from toneres.montecarlo import gen_data_symbols, trial_rng
from toneres.ofdm import FreqVector, TimeSignal, idft, make_allocation, papr
from toneres.reduction import reduce_sparse


def _fields(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert "toneres" in capsys.readouterr().out


def test_missing_config_names_the_path(tmp_path, capsys):
    path = tmp_path / "missing.ini"
    assert main(["reduce", "--config", str(path)]) == EXIT_CONFIG_ERROR
    assert str(path) in capsys.readouterr().err


def test_zero_trials_are_rejected(tmp_path):
    assert main(["campaign", "--trials", "0", "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR


def test_low_papr_symbol_frees_every_reserved_tone(tmp_path, capsys):
    prt = list(range(1, 21))
    config = tmp_path / "fixed.ini"
    config.write_text("[allocation]\nstrategy = fixed\nindices = " + ", ".join(map(str, prt)) + "\n")
    d = np.zeros(128, dtype=complex)
    d[0] = 1.0
    data = tmp_path / "data.csv"
    FreqVector(d).to_csv(data)

    code = main(["reduce", "--method", "sparse-fp", "--config", str(config), "--data", str(data)])
    fields = _fields(capsys.readouterr().out)
    assert code == EXIT_OK
    assert fields["status"] == "Refined"
    assert fields["n_active"] == "0"
    assert fields["active_prt"] == ""
    assert fields["n_freed"] == "20"
    assert fields["freed_prt"] == ",".join(map(str, prt))


def test_data_file_needs_a_fixed_allocation(tmp_path):
    data = tmp_path / "data.csv"
    FreqVector([1, 0, 0, 0]).to_csv(data)
    assert main(["reduce", "--data", str(data)]) == EXIT_CONFIG_ERROR


def test_reduce_matches_the_library(capsys):
    assert main(["reduce", "--n", "32", "--n-prt", "6", "--seed", "3", "--trial", "2"]) == EXIT_OK
    fields = _fields(capsys.readouterr().out)

    cfg = load_run_config(None, dict(n_total=32, n_prt=6, seed=3)).campaign
    rng = trial_rng(3, 2)
    alloc = make_allocation(32, 6, cfg.allocation, rng=rng)
    d = gen_data_symbols(alloc, cfg.constellation, rng)
    result = reduce_sparse(d, alloc, cfg.sparse)

    assert fields["method"] == "sparse-fp"
    assert fields["status"] == result.status.value
    assert fields["iterations"] == str(result.iterations)
    assert fields["n_active"] == str(result.n_active)
    assert fields["active_prt"] == ",".join(str(i) for i in result.active_prt)
    assert fields["freed_prt"] == ",".join(str(i) for i in result.freed_prt)
    assert fields["papr_db"] == format(result.achieved_papr.db, ".12g")
    assert fields["input_papr_db"] == format(papr(idft(d)).db, ".12g")


def test_reduce_writes_signals(tmp_path, capsys):
    out = tmp_path / "signals"
    assert main(["reduce", "--method", "sota", "--n", "16", "--n-prt", "3", "--write-signals", "--out", str(out)]) == 0
    assert _fields(capsys.readouterr().out)["status"] == "Optimal"
    d = FreqVector.from_csv(out / "data_freq.csv")
    r = FreqVector.from_csv(out / "prt_freq.csv")
    x = TimeSignal.from_csv(out / "tx_time.csv")
    assert np.max(np.abs(x.values - idft(FreqVector(d.values + r.values)).values)) <= 1e-12


def test_campaign_is_reproducible_across_worker_counts(tmp_path):
    args = ["campaign", "--n", "16", "--n-prt", "3", "--trials", "4", "--seed", "5"]
    assert main(args + ["--out", str(tmp_path / "a")]) == EXIT_OK
    assert main(args + ["--threads", "2", "--out", str(tmp_path / "b")]) == EXIT_OK
    for name in ("trials.csv", "summary.csv", "ecdf_none.csv", "ecdf_sota.csv", "pmf_sparse-fp.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_campaign_with_several_targets(tmp_path):
    args = ["campaign", "--n", "16", "--n-prt", "3", "--trials", "2", "--rho-star-db", "5", "7.5"]
    assert main(args + ["--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "rho_5dB" / "ecdf_sparse-fp.csv").is_file()
    assert (tmp_path / "rho_7.5dB" / "pmf_sparse-fp.csv").is_file()


def test_sweep_writes_one_ecdf_per_size_and_method(tmp_path):
    args = ["sweep", "--n", "16", "--n-prt", "4", "--trials", "3", "--method", "none", "sota", "--n-values", "16", "32"]
    assert main(args + ["--out", str(tmp_path)]) == EXIT_OK
    for n in (16, 32):
        for method in ("none", "sota"):
            assert (tmp_path / f"n_{n}" / f"ecdf_{method}.csv").is_file()
        assert not (tmp_path / f"n_{n}" / "ecdf_sparse-fp.csv").exists()
    rows = (tmp_path / "sweep_summary.csv").read_text().splitlines()
    assert rows[0] == "n_total,n_prt,method,trials,success_rate,mean_active,mode_active"
    assert [row.split(",")[:3] for row in rows[1:]] == [
        ["16", "4", "none"],
        ["16", "4", "sota"],
        ["32", "8", "none"],
        ["32", "8", "sota"],
    ]


def test_selfcheck(capsys):
    assert main(["selfcheck", "--instances", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 8
    assert all(line.startswith("PASS ") for line in lines)


def test_selfcheck_failure_exit_code(monkeypatch, capsys):
    from toneres import cli
    from toneres.selfcheck import SelfCheck

    class Broken(SelfCheck):
        def __init__(self, seed=0, instances=20):
            super().__init__(seed=seed, transform=lambda v: TimeSignal(idft(v).values * 1.01), instances=instances)

    monkeypatch.setattr(cli, "SelfCheck", Broken)
    assert main(["selfcheck", "--instances", "1"]) == EXIT_CHECK_FAILED
    assert "first failing check: unitarity" in capsys.readouterr().err
