"""``evaplab`` command-line front end.

Every command can be driven by flags, by a JSON config file, or both (flags
win). A config file looks like::

    {"command": "paradox", "seed": 0, "output_dir": "out", "theta": 0.01,
     "params": {"theorem": "T1", "s_bh": 100, "steps": 200}}

Exit status: 0 on success, 1 on usage/config errors, 2 when a verification
suite finds a violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np
from scipy import stats

from . import io as aio
from .errors import CapacityError, InsufficientDataError, RegulatorError
from .lattice import HarmonicChain, entanglement_vs_separation, fit_decay
from .nocomm import verify_eq2, verify_eq6
from .page_curve import LN2, EvaporationParams, analytic_curve, analytic_mutual_information
from .page_curve import analytic_radiation_entropy, monte_carlo_curve
from .paradox import SWEEPABLE, Theorem, TheoremParams, evaluate, evaporation_sweep, report_document
from .qstate import haar_random_pure, haar_random_unitary, make_rng, haar_vectors, TensorRegister

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# Schema
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Field:
    name: str
    kind: str  # int, float, bool, str, opt_float, int3
    default: Any
    help: str = ""
    choices: tuple[str, ...] | None = None

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")

    def coerce(self, value: Any, where: str) -> Any:
        def bad(expected: str):
            return UsageError(f"{where}: expected {expected}, got {value!r}")

        if self.kind == "int":
            if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
                raise bad("integer")
            return int(value)
        if self.kind in ("float", "opt_float"):
            if value is None and self.kind == "opt_float":
                return None
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise bad("finite number")
            return float(value)
        if self.kind == "bool":
            if not isinstance(value, bool):
                raise bad("boolean")
            return value
        if self.kind == "str":
            if not isinstance(value, str):
                raise bad("string")
            if self.choices is not None:
                match = [c for c in self.choices if c.lower() == value.lower()]
                if not match:
                    raise UsageError(f"{where}: expected one of {list(self.choices)}, got {value!r}")
                return match[0]
            return value
        if self.kind == "int3":
            if not isinstance(value, (list, tuple)) or len(value) != 3:
                raise bad("list of 3 integers")
            return [Field(self.name, "int", None).coerce(v, where) for v in value]
        raise AssertionError(self.kind)


COMMON = (
    Field("seed", "int", 0, "RNG seed"),
    Field("output_dir", "str", "evaplab-out", "directory for artifacts"),
    Field("theta", "float", 0.01, "dominance threshold for 'much less than'"),
    Field("units", "str", "qunats", "units for the printed summary (artifacts stay in qunats)", ("qunats", "bits")),
)

PARAMS: dict[str, tuple[Field, ...]] = {
    "page-curve": (
        Field("n_evap", "int", 10, "evaporating qubits"),
        Field("n_matter", "int", 0, "matter reference qubits"),
        Field("trials", "int", 200, "Haar trials per cut (0: analytic only)"),
        Field("steps", "int", 200, "analytic grid steps when trials = 0"),
    ),
    "paradox": (
        Field("theorem", "str", "T1", "which bound to evaluate", tuple(t.value for t in Theorem)),
        Field("s_bh", "float", 100.0, "initial Bekenstein-Hawking entropy (qunats)"),
        Field("s_matter", "float", 0.0, "infallen matter entropy (qunats)"),
        Field("mu", "float", 1.0, "atmosphere scale in Planck units"),
        Field("epsilon", "float", 0.05, "residual fraction"),
        Field("eta", "float", 0.05, "interior correlation fraction"),
        Field("log_dim_b", "opt_float", None, "override interior log-dimension"),
        Field("stretched_horizon", "bool", False, "include the near-horizon atmosphere allowance"),
        Field("steps", "int", 200, "sweep grid steps"),
    ),
    "nocomm-verify": (
        Field("samples", "int", 500, "random circuits per check"),
        Field("shape", "int3", [2, 2, 2], "qubits in B N R"),
        Field("n_rp", "int", 1, "outgoing radiation qubits"),
        Field("n_c", "int", 1, "back-channel qubits"),
        Field("checks", "str", "all", "which suites to run", ("all", "eq2", "eq6")),
    ),
    "lattice-decay": (
        Field("n_sites", "int", 60, "chain length"),
        Field("mass", "float", 1.0, "site mass"),
        Field("self_freq", "float", 1.0, "on-site frequency (IR regulator)"),
        Field("coupling", "float", 1.0, "nearest-neighbour spring constant"),
        Field("boundary", "str", "open", "chain ends", ("open", "periodic")),
        Field("block_size", "int", 1, "sites per block"),
        Field("d_max", "int", 12, "largest separation"),
        Field("floor", "float", 1e-12, "fit floor"),
    ),
    "haar-verify": (
        Field("dim", "int", 8, "dimension for vector/unitary checks"),
        Field("samples", "int", 2000, "samples per KS test"),
        Field("qubit_samples", "int", 10000, "qubit states for the Bloch-vector check"),
        Field("alpha", "float", 1e-3, "KS rejection level"),
    ),
}


@dataclass
class RunConfig:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output_dir: str = "evaplab-out"
    theta: float = 0.01
    units: str = "qunats"

    @property
    def out(self) -> Path:
        return Path(self.output_dir)

    def show(self, qunats: float | None) -> float | None:
        """Entropy converted for display only."""
        if qunats is None or self.units == "qunats":
            return qunats
        return qunats / LN2


def load_config_file(path: str) -> dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"config: cannot read {path}: {exc.strerror}") from exc
    if not text.strip():
        raise UsageError(f"config: {path} is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(data, dict) or not data:
        raise UsageError("config: expected a non-empty JSON object")
    return data


def build_config(command: str | None, file_data: dict[str, Any], flags: dict[str, Any]) -> RunConfig:
    """Merge defaults < config file < explicit flags, validating every field."""
    file_data = dict(file_data)
    file_cmd = file_data.pop("command", None)
    if file_cmd is not None and file_cmd not in PARAMS:
        raise UsageError(f"config.command: unknown command {file_cmd!r}")
    if command is None:
        command = file_cmd
    if command is None:
        raise UsageError("config.command: missing")
    if file_cmd is not None and file_cmd != command:
        raise UsageError(f"config.command: file says {file_cmd!r} but {command!r} was requested")

    file_params = file_data.pop("params", {})
    if not isinstance(file_params, dict):
        raise UsageError("config.params: expected an object")
    common = {f.name: f for f in COMMON}
    for key in file_data:
        if key not in common:
            raise UsageError(f"config.{key}: unknown field")
    schema = {f.name: f for f in PARAMS[command]}
    for key in file_params:
        if key not in schema:
            raise UsageError(f"config.params.{key}: unknown field for {command}")

    values: dict[str, Any] = {}
    for f in COMMON:
        v = f.default
        if f.name in file_data:
            v = f.coerce(file_data[f.name], f"config.{f.name}")
        if flags.get(f.name) is not None:
            v = f.coerce(flags[f.name], f.flag)
        values[f.name] = v
    params: dict[str, Any] = {}
    for f in PARAMS[command]:
        v = f.default
        if f.name in file_params:
            v = f.coerce(file_params[f.name], f"config.params.{f.name}")
        if flags.get(f.name) is not None:
            v = f.coerce(flags[f.name], f.flag)
        params[f.name] = v
    return RunConfig(command, params, values["seed"], values["output_dir"], values["theta"], values["units"])


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _print_table(title: str, rows: list[tuple[str, Any]]) -> None:
    width = max((len(k) for k, _ in rows), default=0)
    print(title)
    for k, v in rows:
        if isinstance(v, float):
            v = f"{v:.6g}"
        print(f"  {k:<{width}}  {v}")


def _run_meta(cfg: RunConfig) -> dict[str, Any]:
    return {"command": cfg.command, "seed": cfg.seed, "theta": cfg.theta, "params": dict(cfg.params)}


def cmd_page_curve(cfg: RunConfig) -> int:
    p = cfg.params
    n, m, trials = p["n_evap"], p["n_matter"], p["trials"]
    if n < 1 or not 0 <= m <= n:
        raise UsageError("params: need n_evap >= 1 and 0 <= n_matter <= n_evap")
    if trials < 0 or p["steps"] < 1:
        raise UsageError("params: trials must be >= 0 and steps >= 1")
    s_bh, s_m = n * LN2, m * LN2
    rows = []
    worst_s = worst_mi = None
    if trials == 0:
        for pt in analytic_curve(s_bh, s_m, step=s_bh / p["steps"]):
            rows.append((pt.r, pt.s_r, pt.mi, None, None, None, None))
    else:
        mc = monte_carlo_curve(n, m, trials, cfg.seed)
        worst_s = worst_mi = 0.0
        base = EvaporationParams(s_bh, s_m)
        for pt in mc:
            q = base.at(min(pt.r, s_bh))
            a_s, a_mi = analytic_radiation_entropy(q), analytic_mutual_information(q)
            worst_s, worst_mi = max(worst_s, abs(a_s - pt.s_r)), max(worst_mi, abs(a_mi - pt.mi))
            rows.append((pt.r, a_s, a_mi, pt.s_r, pt.s_r_stderr, pt.mi, pt.mi_stderr))
    path = aio.write_csv(cfg.out / "curve.csv", aio.CURVE_HEADER, rows)
    u = cfg.units
    summary = [(f"s_bh ({u})", cfg.show(s_bh)), (f"s_matter ({u})", cfg.show(s_m)), ("points", len(rows))]
    if worst_s is not None:
        summary += [
            (f"max |S(R) mc - analytic| ({u})", cfg.show(worst_s)),
            (f"max |MI mc - analytic| ({u})", cfg.show(worst_mi)),
        ]
    summary.append(("artifact", str(path)))
    _print_table("page-curve", summary)
    return EXIT_OK


def cmd_paradox(cfg: RunConfig) -> int:
    p = cfg.params
    theorem = Theorem.parse(p["theorem"])
    tp = TheoremParams(
        s_bh=p["s_bh"],
        s_matter=p["s_matter"],
        mu=p["mu"],
        epsilon=p["epsilon"],
        eta=p["eta"],
        log_dim_b=p["log_dim_b"],
        theta=cfg.theta,
        stretched_horizon=p["stretched_horizon"],
    )
    if theorem in SWEEPABLE:
        if p["steps"] < 2:
            raise UsageError(f"--steps: expected an integer >= 2, got {p['steps']}")
        doc = evaporation_sweep(tp, theorem, p["steps"]).to_dict()
    else:
        doc = report_document(tp, evaluate(tp, theorem))
    points = doc["points"]
    aio.write_json(cfg.out / "report.json", doc)
    aio.write_csv(
        cfg.out / "report.csv",
        aio.REPORT_HEADER,
        [(q["r"], q["lhs"], q["rhs"], q["margin"], q["contradiction"], ";".join(q["assumptions"])) for q in points],
    )
    flagged = sum(1 for q in points if q["contradiction"])
    _print_table(
        f"paradox {theorem.value}",
        [
            ("points", len(points)),
            ("contradictions", flagged),
            (f"onset_r ({cfg.units})", cfg.show(doc.get("onset_r"))),
            (f"predicted_onset_r ({cfg.units})", cfg.show(doc.get("predicted_onset_r"))),
            ("artifact", str(cfg.out / "report.json")),
        ],
    )
    return EXIT_OK


def cmd_nocomm_verify(cfg: RunConfig) -> int:
    p = cfg.params
    if p["samples"] < 1 or min(p["shape"]) < 1 or p["n_rp"] < 1 or p["n_c"] < 1:
        raise UsageError("params: samples, shape entries, n_rp and n_c must all be >= 1")
    results = []
    if p["checks"] in ("all", "eq2"):
        results.append(verify_eq2(p["samples"], p["shape"], cfg.seed))
    if p["checks"] in ("all", "eq6"):
        results.append(verify_eq6(p["samples"], p["shape"], cfg.seed, p["n_rp"], p["n_c"]))
    passed = all(r.passed for r in results)
    doc = {**_run_meta(cfg), "passed": passed, "results": [r.to_dict() for r in results]}
    aio.write_json(cfg.out / "verify.json", doc)
    rows = [(f"{r.check} min margin ({cfg.units})", cfg.show(r.min_margin)) for r in results]
    rows += [(f"{r.check} failures", len(r.failures)) for r in results]
    rows.append(("passed", passed))
    _print_table("nocomm-verify", rows)
    return EXIT_OK if passed else EXIT_VIOLATION


def cmd_lattice_decay(cfg: RunConfig) -> int:
    p = cfg.params
    chain = HarmonicChain(p["n_sites"], p["mass"], p["self_freq"], p["coupling"], p["boundary"])
    series = entanglement_vs_separation(chain, p["block_size"], p["d_max"])
    aio.write_csv(cfg.out / "decay.csv", aio.DECAY_HEADER, series)
    try:
        fit = fit_decay(series, p["floor"]).to_dict()
    except InsufficientDataError as exc:
        fit = {"rate": None, "r_squared": None, "floor": p["floor"], "points_used": 0, "error": str(exc)}
    aio.write_json(cfg.out / "fit.json", fit)
    _print_table(
        "lattice-decay",
        [
            (f"MI(d=0) ({cfg.units})", cfg.show(series[0][1])),
            ("rate per site", fit["rate"]),
            ("r^2", fit["r_squared"]),
            ("points used", fit["points_used"]),
        ],
    )
    return EXIT_OK


def haar_checks(dim: int, samples: int, qubit_samples: int, alpha: float, seed: int) -> dict[str, Any]:
    """KS and moment checks of the Haar samplers; deterministic in ``seed``."""
    checks = []

    # Bloch vector of Haar qubit states averages to zero.
    psi = haar_vectors(2, qubit_samples, make_rng(seed, "haar-verify", "bloch"))
    a, b = psi[:, 0], psi[:, 1]
    bloch = np.stack([2 * np.real(np.conj(a) * b), 2 * np.imag(np.conj(a) * b), np.abs(a) ** 2 - np.abs(b) ** 2], 1)
    mean_len = float(np.linalg.norm(bloch.mean(0)))
    checks.append({"name": "qubit_mean_bloch_length", "value": mean_len, "limit": 0.05, "passed": mean_len < 0.05})

    # |<0|psi>|^2 of a Haar state in dimension d is Beta(1, d-1).
    reg = TensorRegister.of(("H", dim))
    overlaps = [abs(haar_random_pure(reg, seed, ("haar-verify", i)).amplitudes[0]) ** 2 for i in range(samples)]
    ks = stats.kstest(overlaps, stats.beta(1, dim - 1).cdf)
    checks.append({"name": "state_overlap_ks_pvalue", "value": float(ks.pvalue), "limit": alpha,
                   "passed": bool(ks.pvalue > alpha)})

    # One column of a Haar unitary is a Haar vector; eigenphases are uniform.
    cols, phases, worst_unitarity = [], [], 0.0
    for i in range(samples):
        u = haar_random_unitary(dim, seed, ("haar-verify", i)).matrix
        worst_unitarity = max(worst_unitarity, float(np.max(np.abs(u.conj().T @ u - np.eye(dim)))))
        cols.append(abs(u[0, 0]) ** 2)
        phases.append(np.angle(np.linalg.eigvals(u)[0]))
    ks_col = stats.kstest(cols, stats.beta(1, dim - 1).cdf)
    ks_ph = stats.kstest(phases, stats.uniform(-np.pi, 2 * np.pi).cdf)
    checks.append({"name": "unitary_entry_ks_pvalue", "value": float(ks_col.pvalue), "limit": alpha,
                   "passed": bool(ks_col.pvalue > alpha)})
    checks.append({"name": "unitary_eigenphase_ks_pvalue", "value": float(ks_ph.pvalue), "limit": alpha,
                   "passed": bool(ks_ph.pvalue > alpha)})
    checks.append({"name": "unitarity_max_error", "value": worst_unitarity, "limit": 1e-10,
                   "passed": worst_unitarity < 1e-10})
    return {"passed": all(c["passed"] for c in checks), "checks": checks}


def cmd_haar_verify(cfg: RunConfig) -> int:
    p = cfg.params
    if p["dim"] < 2 or p["samples"] < 2 or p["qubit_samples"] < 1 or not 0 < p["alpha"] < 1:
        raise UsageError("params: need dim >= 2, samples >= 2, qubit_samples >= 1, 0 < alpha < 1")
    res = haar_checks(p["dim"], p["samples"], p["qubit_samples"], p["alpha"], cfg.seed)
    aio.write_json(cfg.out / "verify.json", {**_run_meta(cfg), **res})
    _print_table("haar-verify", [(c["name"], c["value"]) for c in res["checks"]] + [("passed", res["passed"])])
    return EXIT_OK if res["passed"] else EXIT_VIOLATION


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "page-curve": cmd_page_curve,
    "paradox": cmd_paradox,
    "nocomm-verify": cmd_nocomm_verify,
    "lattice-decay": cmd_lattice_decay,
    "haar-verify": cmd_haar_verify,
}

COMMAND_HELP = {
    "page-curve": "radiation entropy curve, analytic and Monte Carlo (curve.csv)",
    "paradox": "evaluate a bound over the evaporation (report.json, report.csv)",
    "nocomm-verify": "sample the mutual-information inequalities (verify.json)",
    "lattice-decay": "harmonic-chain mutual information vs separation (decay.csv, fit.json)",
    "haar-verify": "statistical checks of the Haar samplers (verify.json)",
}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except (ValueError, CapacityError, RegulatorError) as exc:
        raise UsageError(str(exc)) from exc


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; 2 is reserved
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_field(p: argparse.ArgumentParser, f: Field) -> None:
    kw: dict[str, Any] = {"dest": f.name, "default": None, "help": f.help}
    if f.kind == "bool":
        p.add_argument(f.flag, action=argparse.BooleanOptionalAction, **kw)
    elif f.kind == "int3":
        p.add_argument(f.flag, type=int, nargs=3, metavar=("B", "N", "R"), **kw)
    elif f.kind == "int":
        p.add_argument(f.flag, type=int, **kw)
    elif f.kind in ("float", "opt_float"):
        p.add_argument(f.flag, type=float, **kw)
    else:
        p.add_argument(f.flag, type=str, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evaplab", description="Evaporation entropy bookkeeping experiments.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    r = sub.add_parser("run", help="run the command named in a config file")
    r.add_argument("config", help="JSON config file")
    for name in PARAMS:
        sp = sub.add_parser(name, help=COMMAND_HELP[name])
        sp.add_argument("--config", default=None, help="JSON config file (flags override it)")
        for f in COMMON + PARAMS[name]:
            _add_field(sp, f)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    flags = vars(args)
    try:
        if args.command == "run":
            cfg = build_config(None, load_config_file(args.config), {})
        else:
            file_data = load_config_file(args.config) if args.config else {}
            cfg = build_config(args.command, file_data, flags)
        return run(cfg)
    except UsageError as exc:
        print(f"evaplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
