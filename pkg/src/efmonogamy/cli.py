"""Command-line entry point: reproductions, Monte Carlo checks and CSV output.

Exit status: 0 when every check passes, 1 when a numerical check fails,
2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import discord, dynamics, indicators, measures, roof, states
from .linalg import ContractError, PureState
from .states import StateFileError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MC_DEFAULTS = {"pure3": (10_000, 1e-9), "pure4": (1_000, 1e-9), "rank2mixed3": (500, 1e-6)}
TABLE1_N = (3, 4, 7, 10, 20, 30)

# values checked by `locc`: (target, tolerance)
LOCC_TARGETS = {
    "before": (0.0925, 1e-3),
    "average": (0.1034, 1e-3),
    "difference": (0.0109, 2e-3),
    "p1": (0.6047, 1e-3),
    "branch1": (0.0157, 1e-3),
    "branch2": (0.2376, 1e-3),
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int | None = None
    grid: tuple[int, int] | None = None
    out: Path = Path(".")
    tol: float | None = None
    restarts: int = 32

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ContractError("seed must be an unsigned 64-bit integer")
        if self.samples is not None and self.samples < 1:
            raise ContractError("samples must be positive")
        if self.grid is not None and min(self.grid) < 1:
            raise ContractError("grid sizes must be positive")
        if self.tol is not None and self.tol <= 0:
            raise ContractError("tolerance must be positive")
        if self.restarts < 1:
            raise ContractError("restarts must be positive")

    def roof(self) -> roof.RoofConfig:
        return roof.RoofConfig(restarts=self.restarts, seed=self.seed)


def parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise ContractError(f"grid must look like R or RxC, got {text!r}") from None
    if len(vals) == 1:
        return vals[0], 1
    if len(vals) != 2:
        raise ContractError(f"grid must look like R or RxC, got {text!r}")
    return vals[0], vals[1]


_CONVERTERS = {
    "seed": int,
    "samples": int,
    "grid": parse_grid,
    "out": Path,
    "tol": float,
    "restarts": int,
}


def read_config_file(path: str | os.PathLike) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise StateFileError("expected key=value", lineno)
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in _CONVERTERS:
                raise StateFileError(f"unknown key {key!r}", lineno)
            try:
                values[key] = _CONVERTERS[key](val)
            except (ValueError, ContractError) as exc:
                raise StateFileError(f"bad value for {key}: {exc}", lineno) from None
    return values


def build_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    """Defaults, then ``MONOGAMY_SEED``, then the config file, then flags."""
    values = {}
    if environ.get("MONOGAMY_SEED"):
        try:
            values["seed"] = int(environ["MONOGAMY_SEED"])
        except ValueError:
            raise ContractError("MONOGAMY_SEED must be an integer") from None
    if args.config:
        values.update(read_config_file(args.config))
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    return RunConfig(**values)


# --- output helpers ---------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _f4(x: float) -> str:
    out = f"{x:.4f}"
    return "0.0000" if out == "-0.0000" else out


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# --- subcommands ------------------------------------------------------------


def cmd_verify_propositions(cfg: RunConfig) -> int:
    n = cfg.samples or 10_000
    xs = np.linspace(0, 1, n + 2)[1:-1]
    rows = []

    def check(name, ok, value, detail=""):
        rows.append((name, value, ok))
        print(f"{_verdict(ok)} {name}: {_fmt(value)} {detail}".rstrip())
        return ok

    d1 = measures.sef_d1(xs)
    d2 = measures.sef_d2(xs)
    vals = measures._sef(xs)
    ok = check("sef_d1_positive", bool(np.all(d1 > 0)), float(d1.min()), f"(min over {n} points)")
    bad = xs[d1 <= 0]
    if bad.size:
        print("  failing x:", " ".join(_fmt(x) for x in bad[:20]))
    ok &= check("sef_d2_positive", bool(np.all(d2 > 0)), float(d2.min()), f"(min over {n} points)")
    bad = xs[d2 <= 0]
    if bad.size:
        print("  failing x:", " ".join(_fmt(x) for x in bad[:20]))
    ok &= check("sef_increasing", bool(np.all(np.diff(vals) > 0)), float(np.diff(vals).min()))

    rng = np.random.default_rng([cfg.seed, 1])
    pairs = rng.random((100_000, 2))
    mid = measures._sef(pairs.mean(axis=1))
    chord = measures._sef(pairs).mean(axis=1)
    ok &= check("sef_midpoint_convex", bool(np.all(mid <= chord + 1e-15)), float(np.max(mid - chord)))

    xc = np.linspace(0.01, 0.99, 981)
    h1, h2 = 1e-6, 5e-5
    fd1 = (measures._sef(xc + h1) - measures._sef(xc - h1)) / (2 * h1)
    fd2 = (measures._sef(xc + h2) - 2 * measures._sef(xc) + measures._sef(xc - h2)) / h2**2
    rel1 = float(np.max(np.abs(fd1 - measures.sef_d1(xc)) / np.abs(fd1)))
    rel2 = float(np.max(np.abs(fd2 - measures.sef_d2(xc)) / np.abs(fd2)))
    ok &= check("sef_d1_vs_fd", rel1 <= 1e-5, rel1, "(max relative error)")
    ok &= check("sef_d2_vs_fd", rel2 <= 1e-5, rel2, "(max relative error)")

    small = 10.0 ** -np.arange(2.0, 31.0)
    d2_small = measures.sef_d2(small)
    asym = measures.sef_d2_small_x(small)
    grows = bool(np.all(np.diff(d2_small) > 0))
    rel_asym = abs(d2_small[4] / asym[4] - 1)
    ok &= check("sef_d2_diverges_at_0", grows and rel_asym < 1e-3 and d2_small[-1] > 1e3, float(d2_small[4]),
                f"(x=1e-6; log-squared asymptote {_fmt(asym[4])}; {_fmt(d2_small[-1])} at x=1e-30)")
    end = measures.sef_d2(1 - 1e-6)
    ok &= check("sef_d2_at_1", abs(end - 0.55979) <= 1e-4, end,
                f"(closed form {_fmt(measures.SEF_D2_AT_ONE)})")

    mv = measures.m_function(xs)
    xmax = float(xs[np.argmax(mv)])
    ok &= check("m_function_argmax", abs(xmax - 4 / np.e**3) <= 1e-3, xmax, f"(4/e^3 = {_fmt(4 / np.e**3)})")
    ok &= check("m_function_positive", bool(np.all(mv > 0)), float(mv.min()))

    write_csv(cfg.out / "propositions.csv", ["check", "value", "passed"], rows)
    return EXIT_OK if ok else EXIT_FAIL


def _mc_pure(kind: str, cfg: RunConfig, n_qubits: int, samples: int, tol: float):
    header = ["sample", "seed", "residual", "tau1", "chain_concurrence", "chain_convexity", "ckw"]
    rows, worst = [], (np.inf, None)
    for i in range(samples):
        psi = states.haar_random_pure((2,) * n_qubits, states.sample_seed(cfg.seed, i))
        c1, c2 = indicators.sef_chain_residuals(psi, 0)
        t1 = indicators.tau1_pure(psi, 0)
        ckw = measures.ckw_residual_pure(psi, 0)
        res = min(t1, c1, c2, ckw)
        rows.append((i, cfg.seed, res, t1, c1, c2, ckw))
        if res < worst[0]:
            worst = (res, psi)
    return header, rows, worst


def _mc_rank2(cfg: RunConfig, samples: int):
    header = ["sample", "seed", "residual", "ef_split", "ef_pair_1", "ef_pair_2"]
    rows, worst = [], (np.inf, None)
    for i in range(samples):
        rho = states.random_mixed((2, 2, 2), 2, states.sample_seed(cfg.seed, i))
        ef = discord.eof_via_koashi_winter(rho, 0)
        pairs = indicators.pairwise_eofs(rho, 0)
        res = ef**2 - sum(e**2 for e in pairs)
        rows.append((i, cfg.seed, res, ef, *pairs))
        if res < worst[0]:
            worst = (res, rho)
    return header, rows, worst


def cmd_montecarlo(kind: str, cfg: RunConfig) -> int:
    default_n, default_tol = MC_DEFAULTS[kind]
    samples = cfg.samples or default_n
    tol = cfg.tol or default_tol
    if kind == "rank2mixed3":
        header, rows, (worst, state) = _mc_rank2(cfg, samples)
    else:
        header, rows, (worst, state) = _mc_pure(kind, cfg, int(kind[-1]), samples, tol)
    path = write_csv(cfg.out / f"montecarlo_{kind}.csv", header, rows)
    ok = worst >= -tol
    print(f"{_verdict(ok)} montecarlo {kind}: {samples} samples, min residual {_fmt(worst)} (tol {tol:g})")
    print(f"wrote {path}")
    if not ok:
        dump = cfg.out / f"violation_{kind}.state"
        states.write_state(dump, state)
        print(f"violating state written to {dump}")
        return EXIT_FAIL
    return EXIT_OK


def cmd_fig1(cfg: RunConfig) -> int:
    npts = cfg.grid[0] if cfg.grid else 11
    p0, s_p, s_w = indicators.ghzw_constants()
    tol = cfg.tol or 2e-3
    rows, ok = [], True
    for k in range(npts):
        p = p0 * k / npts
        rho = states.ghzw_mixture(p)
        closed = indicators.tau1_ghzw_closed_form(p)
        pairs = indicators.pairwise_eofs(rho, 0)
        concs = indicators.pairwise_concurrences(rho, 0)
        ef_split = discord.eof_via_koashi_winter(rho, 0)
        opt = roof.tau1_mixed(rho, 0, cfg.roof())
        good = closed > 0 and opt <= closed + tol
        ok &= good
        rows.append((p, closed, opt, ef_split**2, sum(e**2 for e in pairs), sum(c**2 for c in concs), good))
    header = ["p", "tau1_closed_form", "tau1_optimizer", "ef2_A_BC", "ef2_AB_plus_AC", "c2_AB_plus_AC", "ok"]
    path = write_csv(cfg.out / "fig1.csv", header, rows)
    print(f"p0 = {p0:.10f}  s_p = {s_p:.6f}  s_w = {s_w:.6f}")
    print(f"{_verdict(ok)} fig1: {npts} points, optimizer within {tol:g} of the closed form")
    print(f"wrote {path}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fig2(cfg: RunConfig) -> int:
    r, c = cfg.grid or (50, 50)
    tol = cfg.tol or 1e-6
    alphas, kts = dynamics.default_grid(r, c)
    rows, ok = [], True
    try:
        reports = dynamics.tau2_grid_c1_c2r1(alphas, kts, tol)
    except indicators.MonogamyViolation as exc:
        print(f"FAIL fig2: {exc}")
        states.write_state(cfg.out / "violation_fig2.state", exc.state)
        return EXIT_FAIL
    for rep in reports:
        m = rep.metadata
        bound_ok = m["lower_bound"] <= m["eof_split"] + tol
        ok &= bound_ok
        rows.append((m["alpha"], m["kt"], rep.value, rep.components["Ef2(c1|c2r1)"],
                     rep.components["Ef2(c1c2)"], rep.components["Ef2(c1r1)"], m["lower_bound"], bound_ok))
    header = ["alpha", "kt", "tau2", "ef2_c1_c2r1", "ef2_c1c2", "ef2_c1r1", "eof_lower_bound", "bound_ok"]
    path = write_csv(cfg.out / "fig2.csv", header, rows)
    print(f"{_verdict(ok)} fig2: {r}x{c} grid, tau2 >= -{tol:g} and lower bound respected")
    print(f"wrote {path}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_table1(ns, cfg: RunConfig) -> int:
    ns = list(ns) or list(TABLE1_N)
    rows = [(n, indicators.table1_value(n)) for n in ns]
    for n, v in rows:
        print(f"N={n:<4d} {v:.4f}")
    write_csv(cfg.out / "table1.csv", ["N", "tau1"], rows)
    return EXIT_OK


def cmd_locc(cfg: RunConfig) -> int:
    rep = dynamics.locc_counterexample(config=cfg.roof())
    (p1, b1), (p2, b2) = rep.branches
    got = {"before": rep.before.value, "average": rep.average, "difference": rep.difference,
           "p1": p1, "branch1": b1.value, "branch2": b2.value}
    ok = rep.difference > 0
    rows = []
    for key, (target, tol) in LOCC_TARGETS.items():
        good = abs(got[key] - target) <= tol
        ok &= good
        rows.append((key, got[key], target, tol, good))
        print(f"{_verdict(good)} {key:<10s} {got[key]:.4f}  (target {target}, tol {tol:g})")
    print(f"branch 1: p={p1:.4f} tau2={b1.value:.4f} route={b1.metadata['route']} {b1.components}")
    print(f"branch 2: p={p2:.4f} tau2={b2.value:.4f} route={b2.metadata['route']} {b2.components}")
    print(f"{_verdict(rep.difference > 0)} average minus before is positive: {rep.difference:.4f}")
    write_csv(cfg.out / "locc.csv", ["quantity", "value", "target", "tolerance", "ok"], rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bound(path: str, focus: int, cfg: RunConfig) -> int:
    state = states.read_state(path)
    if any(d != 2 for d in state.dims):
        raise ContractError("bound needs a multiqubit state")
    pairs = indicators.pairwise_eofs(state, focus)
    bound = indicators.eof_lower_bound(pairs)
    print("pairwise EoF:", " ".join(_f4(e) for e in pairs))
    print(f"lower bound: {_f4(bound)}")
    rank = 1 if isinstance(state, PureState) else state.rank()
    if rank > 2:
        print("E_f(focus|rest): not computed exactly for rank > 2")
        print("verdict: SKIPPED")
        return EXIT_OK
    ef, route = indicators.eof_bipartite(state, focus)
    ok = bound <= ef + (cfg.tol or 1e-6)
    print(f"E_f(focus|rest): {_f4(ef)} ({route})")
    print(f"verdict: {_verdict(ok)}")
    return EXIT_OK if ok else EXIT_FAIL


# --- argument parsing -------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="master seed (unsigned 64-bit)")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--grid", type=parse_grid, default=None, help="R or RxC")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--restarts", type=int, default=None, help="convex-roof restarts")
    p.add_argument("--config", default=None, help="key=value config file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="efmonogamy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-propositions", parents=[common], help="derivative and convexity checks")
    mc = sub.add_parser("montecarlo", parents=[common], help="random-state inequality checks")
    mc.add_argument("kind", choices=sorted(MC_DEFAULTS))
    sub.add_parser("fig1", parents=[common], help="GHZ/W mixture indicators")
    sub.add_parser("fig2", parents=[common], help="cavity-reservoir indicator grid")
    t1 = sub.add_parser("table1", parents=[common], help="W_N / |1^N> mixture indicator")
    t1.add_argument("n", nargs="*", type=int)
    sub.add_parser("locc", parents=[common], help="LOCC non-monotonicity example")
    bd = sub.add_parser("bound", parents=[common], help="EoF lower bound for a state file")
    bd.add_argument("state_file")
    bd.add_argument("--focus", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        cfg = replace(cfg, out=Path(cfg.out))
        cmd = args.command
        if cmd == "verify-propositions":
            return cmd_verify_propositions(cfg)
        if cmd == "montecarlo":
            return cmd_montecarlo(args.kind, cfg)
        if cmd == "fig1":
            return cmd_fig1(cfg)
        if cmd == "fig2":
            return cmd_fig2(cfg)
        if cmd == "table1":
            return cmd_table1(args.n, cfg)
        if cmd == "locc":
            return cmd_locc(cfg)
        if cmd == "bound":
            return cmd_bound(args.state_file, args.focus, cfg)
    except (ContractError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
