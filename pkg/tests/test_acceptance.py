"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <k> PASS|FAIL`` line with the measured
numbers before asserting. Run directly with ``python3 tests/test_acceptance.py``
for the summary lines alone.
"""

from __future__ import annotations

import csv
import time

import numpy as np
import pytest

from efmonogamy import cli, discord, dynamics, indicators, measures, roof, states
from efmonogamy.roof import RoofConfig

TABLE1_TARGET = {3: 0.2992, 4: 0.2813, 7: 0.0992, 10: 0.0401, 20: 0.0053, 30: 0.0015}


@pytest.fixture
def report(capsys):
    def emit(k: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\nACCEPTANCE {k:>2} {'PASS' if ok else 'FAIL'}: {detail}")
        return ok

    return emit


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_01_table1(report, tmp_path, capsys):
    assert cli.main(["table1", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    got = {int(r["N"]): float(r["tau1"]) for r in read_csv(tmp_path / "table1.csv")}
    diffs = {n: got[n] - v for n, v in TABLE1_TARGET.items()}
    ok = all(abs(d) <= 5e-4 for d in diffs.values())
    report(1, ok, "table1 " + ", ".join(f"N={n}: {got[n]:.4f} (target {TABLE1_TARGET[n]})" for n in TABLE1_TARGET))
    assert ok, f"deviations from the target table: {diffs}"


def test_02_ghzw_constants(report):
    p0, s_p, s_w = indicators.ghzw_constants()
    tangle = measures.three_tangle_pure(states.psi_j_p(0, p0))
    ok = abs(s_w - 0.238162) <= 1e-5 and abs(s_p - 0.217061) <= 1e-4 and abs(p0 - 0.627) <= 1e-3 and tangle < 1e-8
    report(2, ok, f"s_w={s_w:.7f} s_p={s_p:.7f} p0={p0:.7f} tangle(p0)={tangle:.1e}")
    assert ok


def test_03_w_state_score(report):
    score = indicators.monogamy_score_ef(states.w3())
    ok = abs(score - (-0.1818)) <= 1e-3
    report(3, ok, f"W-state EoF score {score:.5f}")
    assert ok


def test_04_locc(report):
    rep = dynamics.locc_counterexample()
    (p1, b1), _ = rep.branches
    b2 = rep.branches[1][1]
    checks = [
        abs(rep.before.value - 0.0925) <= 1e-3,
        abs(rep.average - 0.1034) <= 1e-3,
        abs(rep.difference - 0.0109) <= 2e-3,
        abs(p1 - 0.6047) <= 1e-3,
        abs(b1.value - 0.0157) <= 1e-3,
        abs(b2.value - 0.2376) <= 1e-3,
        rep.difference > 0,
    ]
    ok = all(checks)
    report(4, ok, f"before={rep.before.value:.4f} average={rep.average:.4f} diff={rep.difference:.4f} "
                  f"p1={p1:.4f} branches=({b1.value:.4f}, {b2.value:.4f})")
    assert ok


def test_05_propositions(report, tmp_path, capsys):
    code = cli.main(["verify-propositions", "--out", str(tmp_path)])
    capsys.readouterr()
    rows = {r["check"]: r for r in read_csv(tmp_path / "propositions.csv")}
    xs = np.linspace(0, 1, 10_002)[1:-1]
    extra = [
        bool(np.all(measures.sef_d1(xs) > 0)),
        bool(np.all(measures.sef_d2(xs) > 0)),
        abs(measures.sef_d2(1 - 1e-7) - 0.55979) <= 1e-4,
        abs(xs[np.argmax(measures.m_function(xs))] - 4 / np.e**3) <= 1e-3,
    ]
    ok = code == 0 and all(extra) and all(r["passed"] == "true" for r in rows.values())
    report(5, ok, f"fd errors d1={float(rows['sef_d1_vs_fd']['value']):.1e} d2={float(rows['sef_d2_vs_fd']['value']):.1e}, "
                  f"d2(1)={float(rows['sef_d2_at_1']['value']):.5f}, argmax={float(rows['m_function_argmax']['value']):.4f}")
    assert ok


def test_06_monte_carlo(report, tmp_path, capsys):
    start = time.perf_counter()
    codes = {k: cli.main(["montecarlo", k, "--out", str(tmp_path)]) for k in ("pure3", "pure4", "rank2mixed3")}
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    mins = {}
    for k in codes:
        rows = read_csv(tmp_path / f"montecarlo_{k}.csv")
        if k == "rank2mixed3":
            mins[k] = (len(rows), min(float(r["residual"]) for r in rows))
        else:
            mins[k] = (len(rows), min(float(r["tau1"]) for r in rows), min(float(r["ckw"]) for r in rows))
    ok = (
        all(c == 0 for c in codes.values())
        and mins["pure3"][0] == 10_000 and mins["pure4"][0] == 1_000 and mins["rank2mixed3"][0] == 500
        and min(mins["pure3"][1:] + mins["pure4"][1:]) >= -1e-9
        and mins["rank2mixed3"][1] >= -1e-6
        and elapsed <= 120
    )
    report(6, ok, f"pure3 min(sef, ckw)=({mins['pure3'][1]:.2e}, {mins['pure3'][2]:.2e}) "
                  f"pure4=({mins['pure4'][1]:.2e}, {mins['pure4'][2]:.2e}) rank2={mins['rank2mixed3'][1]:.2e} "
                  f"in {elapsed:.0f}s")
    assert ok


def test_07_oracle_equivalence(report):
    two_qubit = []
    for i in range(200):
        rho = states.random_mixed((2, 2), 2 + i % 3, states.sample_seed(7, i))
        two_qubit.append(abs(roof.eof_mixed(rho, [0], RoofConfig(restarts=2, seed=i)) - measures.eof_two_qubit(rho)))
    closed = []
    for a in np.linspace(0, 1, 10):
        for kt in np.linspace(0, 3, 10):
            rho = dynamics.cavity_reduced(a, kt, ("c1", "c2", "r1"))
            closed.append(abs(discord.eof_via_koashi_winter(rho, 0) - discord.eof_c1_c2r1_closed_form(a, kt)))
    routes = []
    for i in range(50):
        rho = states.random_mixed((2, 2, 2), 2, states.sample_seed(8, i))
        routes.append(abs(roof.eof_mixed(rho, [0], RoofConfig(restarts=4, seed=i)) - discord.eof_via_koashi_winter(rho, 0)))
    ok = max(two_qubit) <= 1e-3 and max(closed) <= 1e-6 and max(routes) <= 2e-3
    report(7, ok, f"roof vs Wootters {max(two_qubit):.1e}, Koashi-Winter vs closed form {max(closed):.1e}, "
                  f"roof vs Koashi-Winter {max(routes):.1e}")
    assert ok


def test_08_fig1(report):
    p0 = indicators.ghzw_constants()[0]
    grid = np.linspace(0, p0, 202)[1:-1]
    closed_min = min(indicators.tau1_ghzw_closed_form(p) for p in grid)
    conc = [max(indicators.pairwise_concurrences(states.ghzw_mixture(p))) for p in np.linspace(0.3, p0, 12)[1:-1]]
    gaps = []
    for k in range(1, 11):
        p = p0 * k / 11
        gaps.append(roof.tau1_mixed(states.ghzw_mixture(p), 0, RoofConfig(restarts=32)) - indicators.tau1_ghzw_closed_form(p))
    ok = closed_min > 0 and max(conc) == 0 and max(gaps) <= 2e-3
    report(8, ok, f"min closed form {closed_min:.4f}, max pair concurrence {max(conc):.1e}, "
                  f"optimizer minus closed form in [{min(gaps):.1e}, {max(gaps):.1e}]")
    assert ok


def test_09_fig2(report, tmp_path, capsys):
    code = cli.main(["fig2", "--out", str(tmp_path)])
    capsys.readouterr()
    rows = read_csv(tmp_path / "fig2.csv")
    tau = np.array([float(r["tau2"]) for r in rows])
    edge = [float(r["tau2"]) for r in rows if float(r["alpha"]) == 1.0]
    bound_ok = all(r["bound_ok"] == "true" for r in rows)
    reps = dynamics.tau2_grid_c1_c2r1(*dynamics.default_grid())
    raw_min = min(r.metadata["raw"] for r in reps)
    slack = min(r.metadata["eof_split"] - r.metadata["lower_bound"] for r in reps)
    ok = code == 0 and len(rows) == 2500 and tau.min() >= -1e-6 and raw_min >= -1e-6 and edge and max(map(abs, edge)) == 0 \
        and bound_ok and slack >= -1e-6
    report(9, ok, f"{len(rows)} cells, min raw tau2 {raw_min:.2e}, alpha=1 edge max {max(map(abs, edge)):.1e}, "
                  f"min bound slack {slack:.2e}")
    assert ok


DETERMINISM_RUNS = [
    ("verify-propositions", [], "propositions.csv"),
    ("montecarlo", ["pure3", "--samples", "300"], "montecarlo_pure3.csv"),
    ("montecarlo", ["pure4", "--samples", "100"], "montecarlo_pure4.csv"),
    ("montecarlo", ["rank2mixed3", "--samples", "20"], "montecarlo_rank2mixed3.csv"),
    ("fig1", ["--grid", "3", "--restarts", "4"], "fig1.csv"),
    ("fig2", ["--grid", "12x12"], "fig2.csv"),
    ("table1", [], "table1.csv"),
    ("locc", [], "locc.csv"),
]


def test_10_determinism(report, tmp_path, capsys):
    same = {}
    for cmd, extra, name in DETERMINISM_RUNS:
        outs = []
        for rep in ("a", "b"):
            d = tmp_path / f"{cmd}-{rep}"
            assert cli.main([cmd, *extra, "--seed", "2024", "--out", str(d)]) == 0
            outs.append((d / name).read_bytes())
        same[name] = outs[0] == outs[1]
    d = tmp_path / "other-seed"
    cli.main(["montecarlo", "pure3", "--samples", "300", "--seed", "2025", "--out", str(d)])
    capsys.readouterr()
    seed_matters = [r["tau1"] for r in read_csv(d / "montecarlo_pure3.csv")] != \
        [r["tau1"] for r in read_csv(tmp_path / "montecarlo-a" / "montecarlo_pure3.csv")]
    ok = all(same.values()) and seed_matters
    report(10, ok, f"byte-identical reruns for {sum(same.values())}/{len(same)} CSV outputs; seed changes samples: {seed_matters}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
