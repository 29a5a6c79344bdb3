"""Command-line front end: verification suites, state export and statistics tables.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import ast
import itertools
import math
import operator
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as hio
from .coset import SqueezeParams, coset_checks, su11_checks, su2_checks
from .fock import FockBasis, StateVector, required_cutoff, sector_tail
from .lie import (ALGEBRA_TOLERANCE, build_generators, k_family_breaks_algebra, matrix_family_checks,
                  sandwich_cross_check, verify_casimir, verify_so42_algebra)
from .squeeze import (ROUTES, pairwise_fidelities, squeezed_vacuum, squeezed_vacuum_closed_form,
                      two_mode_squeezed_vacuum)
from .statistics import (argmax_two_s, closed_form_moments, entropy_series, reduced_density,
                         total_spin_probability, von_neumann_entropy, wick_moments)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
DEFAULT_DIM_CAP = 300_000
FIDELITY_FLOOR = 1 - 1e-7
COSET_TOLERANCE = 1e-12
SEED_DEFAULT = 0x5EED

COMMON_DEFAULTS = {
    "rho": "1.0", "chi": "0.0", "theta": "0.0", "phi": "0.0",
    "epsilon": 1e-10, "cutoff": None, "out": None, "format": "csv", "seed": SEED_DEFAULT,
    "dim_cap": DEFAULT_DIM_CAP,
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# value and grid parsing

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_number(text: str) -> float:
    """Float literal or arithmetic in numbers and ``pi`` (e.g. ``pi/2``, ``0.25*pi``)."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc

    def ev(n):
        if isinstance(n, ast.Constant) and isinstance(n.value, (int, float)):
            return float(n.value)
        if isinstance(n, ast.Name) and n.id == "pi":
            return math.pi
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, ast.USub):
            return -ev(n.operand)
        if isinstance(n, ast.BinOp) and type(n.op) in _BINOPS:
            return _BINOPS[type(n.op)](ev(n.left), ev(n.right))
        raise ConfigError(f"cannot parse number {text!r}")

    return ev(node)


def parse_grid(text) -> list[float]:
    """``x``, ``x,y,z`` or the inclusive range ``start:stop:step``."""
    if isinstance(text, (int, float)):
        return [float(text)]
    text = str(text).strip()
    if not text:
        raise ConfigError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range {text!r} must be start:stop:step")
        start, stop, step = (parse_number(p) for p in parts)
        if step <= 0 or stop < start:
            raise ConfigError(f"range {text!r} needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [parse_number(p) for p in text.split(",") if p.strip()]


def read_config_file(path: str) -> dict:
    """Line-oriented ``key=value`` file; ``#`` starts a comment."""
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{num}: expected key=value, got {line!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


@dataclass
class RunConfig:
    command: str
    rho: list
    chi: list
    theta: list
    phi: list
    epsilon: float
    cutoff: int | None
    out: str | None
    format: str
    seed: int
    dim_cap: int
    extra: dict

    def points(self) -> list[SqueezeParams]:
        pts = []
        for r, c, t, p in itertools.product(self.rho, self.chi, self.theta, self.phi):
            try:
                pts.append(SqueezeParams(r, c, t, p))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        return pts

    def single_point(self) -> SqueezeParams:
        pts = self.points()
        if len(pts) != 1:
            raise ConfigError(f"{self.command} needs a single parameter point, grid has {len(pts)}")
        return pts[0]

    def cutoff_for(self, rho: float) -> int:
        """Explicit cutoff, else the smallest one meeting the truncation budget; enforces the cap."""
        n = self.cutoff if self.cutoff is not None else required_cutoff(rho, self.epsilon)
        dim = (n + 1) ** 4
        if dim > self.dim_cap:
            raise ConfigError(
                f"cutoff infeasible: rho={rho:g}, epsilon={self.epsilon:g} requires cutoff N={n} "
                f"(dimension {dim}) which exceeds the cap of {self.dim_cap} basis states")
        return n


def _to_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    text = str(v).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"expected a boolean, got {v!r}")


# command-specific options: dest -> (default, converter)
_OPTIONS: dict = {}
_COMMAND_DEFAULTS = {"entropy": {"rho": "0:3:0.1"}, "algebra": {"rho": "0.0"}}


def _merge(args: argparse.Namespace, command: str) -> RunConfig:
    """Flags win over the config file, which wins over defaults."""
    file_cfg = read_config_file(args.config) if args.config else {}
    defaults = {**COMMON_DEFAULTS, **_COMMAND_DEFAULTS.get(command, {})}
    values = {}
    for key, default in defaults.items():
        v = getattr(args, key)
        values[key] = file_cfg.pop(key, default) if v is None else v
        file_cfg.pop(key, None)
    extra = {}
    for key, (default, conv) in _OPTIONS[command].items():
        v = getattr(args, key)
        if v is None:
            v = file_cfg.pop(key, default)
        file_cfg.pop(key, None)
        try:
            extra[key] = conv(v) if v is not None else None
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {v!r}") from exc
    if file_cfg:
        raise ConfigError(f"unknown config keys for {command}: {', '.join(sorted(file_cfg))}")
    try:
        eps = float(values["epsilon"])
        cutoff = None if values["cutoff"] in (None, "", "auto") else int(values["cutoff"])
        seed = int(str(values["seed"]), 0)
        dim_cap = int(values["dim_cap"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad numeric option: {exc}") from exc
    if not 0 < eps < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {eps}")
    if cutoff is not None and cutoff < 0:
        raise ConfigError(f"cutoff must be >= 0, got {cutoff}")
    if values["format"] not in hio.FORMATS:
        raise ConfigError(f"format must be one of {hio.FORMATS}, got {values['format']!r}")
    grids = {k: parse_grid(values[k]) for k in ("rho", "chi", "theta", "phi")}
    return RunConfig(command, grids["rho"], grids["chi"], grids["theta"], grids["phi"], eps, cutoff,
                     values["out"], values["format"], seed, dim_cap, extra)


# ---------------------------------------------------------------------------
# commands

def _emit(cfg: RunConfig, rows, meta=None, extra=None, path=None) -> None:
    hio.write_table(rows, path if path is not None else cfg.out, cfg.format, meta, extra)


def _fail(msg: str) -> int:
    print(f"FAILED: {msg}", file=sys.stderr)
    return EXIT_FAIL


def cmd_algebra(cfg: RunConfig) -> int:
    cutoff = 5 if cfg.cutoff is None else cfg.cutoff
    margin = int(cfg.extra["margin"])
    if margin < 2:
        raise ConfigError(f"margin must be >= 2, got {margin}")
    if cutoff - margin < 0:
        raise ConfigError(f"margin {margin} leaves no interior states at cutoff {cutoff}")
    rows = []

    def add(name, residual, passed, tolerance):
        rows.append({"check": name, "residual": float(residual), "tolerance": tolerance, "passed": bool(passed)})

    for c in matrix_family_checks():
        add(f"matrix:{c.name}", c.residual, c.passed, 0.0)
    for name, val in k_family_breaks_algebra().items():
        # the bare k matrices must fail to close; a zero here would be a bug
        add(f"matrix:k_family_not_{name}", val, val > 0, 0.0)
    bundle = build_generators(FockBasis(4, cutoff))
    if cfg.extra.get("corrupt"):
        bundle.X_ab[(1, 2)] = bundle.X_ab[(1, 2)] + 1e-3 * _identity(bundle.dim)
    add("operator:sandwich_vs_printed", sandwich_cross_check(bundle),
        sandwich_cross_check(bundle) <= ALGEBRA_TOLERANCE, ALGEBRA_TOLERANCE)
    report = verify_so42_algebra(bundle, margin)
    worst = report.worst_pair
    label = "[X{}{},X{}{}]".format(*worst[0], *worst[1])
    add(f"operator:so42_commutators(worst {label})", report.max_residual,
        report.passed, ALGEBRA_TOLERANCE)
    cas = verify_casimir(bundle, margin)
    add("operator:casimir_off_diagonal", cas.off_diagonal, cas.off_diagonal <= ALGEBRA_TOLERANCE, ALGEBRA_TOLERANCE)
    add("operator:casimir_eigenvalues", cas.eigenvalue, cas.eigenvalue <= ALGEBRA_TOLERANCE, ALGEBRA_TOLERANCE)
    add("operator:casimir_vacuum_minus_12", abs(cas.vacuum + 12), cas.vacuum == -12.0, 0.0)
    meta = {"command": "algebra", "cutoff": cutoff, "margin": margin, "interior_dim": report.interior_dim,
            "corrupt": bool(cfg.extra.get("corrupt"))}
    pair_rows = [{"A": a, "B": b, "C": c, "D": d, "residual": r}
                 for ((a, b), (c, d)), r in report.residuals.items()]
    _emit(cfg, rows, meta, extra={"pair_residuals": pair_rows} if cfg.format == "json" else None)
    failures = [r for r in rows if not r["passed"]]
    for row in failures:
        _fail(f"{row['check']} residual={row['residual']:.3e}")
    return EXIT_FAIL if failures else EXIT_OK


def _identity(n: int):
    import scipy.sparse as sp

    return sp.identity(n, dtype=complex, format="csr")


def cmd_decompose(cfg: RunConfig) -> int:
    rows, worst = [], (0.0, "")
    for p in cfg.points():
        row = {"rho": p.rho, "chi": p.chi, "theta": p.theta, "phi": p.phi}
        checks = dict(coset_checks(p))
        su2 = su2_checks(p.theta, p.phi, p.chi)
        if p.theta == math.pi:
            su2.pop("gauss")            # Gauss chart is singular at the south pole
        checks.update({f"su2_{k}": v for k, v in su2.items()})
        checks.update({f"su11_{k}": v for k, v in su11_checks(p.rho, p.phi, p.chi).items()})
        row.update(checks)
        row["max_residual"] = max(checks.values())
        k = max(checks, key=checks.get)
        if checks[k] > worst[0]:
            worst = (checks[k], f"{k} at {p.as_tuple()}")
        rows.append(row)
    _emit(cfg, rows, {"command": "decompose", "tolerance": COSET_TOLERANCE})
    if worst[0] > COSET_TOLERANCE:
        return _fail(f"{worst[1]} residual={worst[0]:.3e}")
    return EXIT_OK


def _stem(out: str | None) -> Path | None:
    if out is None:
        return None
    p = Path(out)
    return p.with_suffix("") if p.suffix in (".csv", ".json") else p


def cmd_vacuum(cfg: RunConfig) -> int:
    p = cfg.single_point()
    route = cfg.extra["route"]
    routes = ROUTES if route == "all" else (route,)
    n = cfg.cutoff_for(p.rho)
    basis = FockBasis(4, n)
    states = {r: squeezed_vacuum(p, basis, r) for r in routes}
    stem = _stem(cfg.out)
    meta = {"command": "vacuum", "rho": p.rho, "chi": p.chi, "theta": p.theta, "phi": p.phi,
            "epsilon": cfg.epsilon, "cutoff": n, "dimension": basis.dim, "tail": sector_tail(p.rho, n)}
    sidecar = {"schema": hio.SCHEMA, **meta, "routes": {}}
    for r, sv in states.items():
        state_meta = {**meta, "route": r, "norm": sv.state.norm, "leakage": sv.leakage}
        sidecar["routes"][r] = {"norm": sv.state.norm, "leakage": sv.leakage}
        if stem is None:
            if len(routes) == 1:
                hio.write_state_csv(sv.state, None, state_meta)
        else:
            name = f"{stem}.csv" if len(routes) == 1 else f"{stem}.{r}.csv"
            hio.write_state_csv(sv.state, name, state_meta)
    status = EXIT_OK
    if len(routes) > 1:
        fids = pairwise_fidelities(states)
        fid_rows = [{"route_a": a, "route_b": b, "fidelity": f, "passed": f >= FIDELITY_FLOOR}
                    for (a, b), f in fids.items()]
        sidecar["fidelities"] = fid_rows
        text = hio.render_csv(fid_rows, {**meta, "floor": FIDELITY_FLOOR})
        hio.write_text(text, None if stem is None else f"{stem}.fidelity.csv")
        bad = [r for r in fid_rows if not r["passed"]]
        if bad:
            status = _fail(f"fidelity {bad[0]['route_a']}/{bad[0]['route_b']} = {bad[0]['fidelity']:.12f}")
    if stem is not None:
        hio.write_text(hio.render_json([], None, sidecar), f"{stem}.json")
    return status


def _spectral_so41(p: SqueezeParams, cfg: RunConfig) -> float:
    """Spectral entropy from the closed-form state when the basis fits the cap, else NaN."""
    try:
        n = cfg.cutoff_for(p.rho)
    except ConfigError:
        return float("nan")
    sv = squeezed_vacuum_closed_form(p, FockBasis(4, n))
    return von_neumann_entropy(reduced_density(sv.state).eigenvalues)


def _spectral_so21(rho: float, cfg: RunConfig) -> float:
    if rho == 0:
        return 0.0
    x = math.tanh(rho / 2) ** 2
    n = 1
    while x ** (n + 1) > cfg.epsilon:       # two-mode tail weight x^(N+1)
        n += 1
    state = two_mode_squeezed_vacuum(rho, 0.0, FockBasis(2, n))
    return von_neumann_entropy(reduced_density(state).eigenvalues)


def cmd_stats(cfg: RunConfig) -> int:
    smax = int(cfg.extra["smax"])
    source = cfg.extra["moments"]
    spectral = bool(cfg.extra.get("spectral"))
    rows = []
    for p in cfg.points():
        row = {"rho": p.rho, "chi": p.chi, "theta": p.theta, "phi": p.phi}
        total = 0.0
        for k in range(smax + 1):
            prob = total_spin_probability(p.rho, k)
            row[f"P(2S={k})"] = prob
            total += prob
        row["P_tail"] = max(0.0, 1.0 - total)
        row["argmax_2S"] = argmax_two_s(p.rho)
        report = closed_form_moments(p) if source == "closed" else wick_moments(p)
        row.update(hio.flatten_row(report.values))
        row["entropy_so41"] = entropy_series(p.rho, "so41")
        row["entropy_so21"] = entropy_series(p.rho, "so21")
        if spectral:
            row["entropy_so41_spectral"] = _spectral_so41(p, cfg)
        rows.append(row)
    _emit(cfg, rows, {"command": "stats", "moments": source, "smax": smax})
    return EXIT_OK


def cmd_entropy(cfg: RunConfig) -> int:
    spectral = bool(cfg.extra.get("spectral"))
    rows, bad = [], None
    for rho in cfg.rho:
        if rho < 0:
            raise ConfigError(f"rho must be >= 0, got {rho}")
        s41, s21 = entropy_series(rho, "so41"), entropy_series(rho, "so21")
        row = {"rho": rho, "entropy_so41": s41, "entropy_so21": s21, "so41_ge_so21": s41 >= s21}
        if spectral:
            row["entropy_so41_spectral"] = _spectral_so41(SqueezeParams(rho, 0.0, 0.0, 0.0), cfg)
            row["entropy_so21_spectral"] = _spectral_so21(rho, cfg)
        if rho > 0 and s41 < s21 and bad is None:
            bad = rho
        rows.append(row)
    _emit(cfg, rows, {"command": "entropy"})
    if bad is not None:
        return _fail(f"so(4,1) entropy below so(2,1) entropy at rho={bad:g}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    """Route-equivalence sweep over random tuples (``--count``) or the flag grid."""
    count = cfg.extra.get("count")
    routes = [r.strip() for r in cfg.extra["routes"].split(",") if r.strip()]
    unknown = [r for r in routes if r not in ROUTES]
    if len(routes) < 2 or unknown:
        raise ConfigError(f"--routes needs at least two of {ROUTES}; got {cfg.extra['routes']!r}")
    if count:
        rng = np.random.default_rng(cfg.seed)
        points = [SqueezeParams.random(rng, rho_max=float(cfg.extra["rho_max"])) for _ in range(int(count))]
    else:
        points = cfg.points()
    for p in points:
        cfg.cutoff_for(p.rho)           # validate every point before any work
    rows, failed = [], None
    for p in points:
        n = cfg.cutoff_for(p.rho)
        basis = FockBasis(4, n)
        states = {r: squeezed_vacuum(p, basis, r) for r in routes}
        fids = pairwise_fidelities(states)
        pair = min(fids, key=fids.get)
        row = {"rho": p.rho, "chi": p.chi, "theta": p.theta, "phi": p.phi, "cutoff": n,
               "tail": sector_tail(p.rho, n)}
        row.update({f"F({a},{b})": f for (a, b), f in fids.items()})
        row["min_fidelity"] = fids[pair]
        row["passed"] = fids[pair] >= FIDELITY_FLOOR
        if not row["passed"] and failed is None:
            failed = f"fidelity {pair[0]}/{pair[1]} = {fids[pair]:.12f} at {p.as_tuple()}"
        rows.append(row)
    _emit(cfg, rows, {"command": "sweep", "seed": cfg.seed, "epsilon": cfg.epsilon, "floor": FIDELITY_FLOOR})
    return _fail(failed) if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _common(p: argparse.ArgumentParser) -> None:
    for name in ("rho", "chi", "theta", "phi"):
        p.add_argument(f"--{name}", default=None, help="value, list a,b,c or range start:stop:step (pi allowed)")
    p.add_argument("--epsilon", default=None, help="truncation budget (default 1e-10)")
    p.add_argument("--cutoff", default=None, help="per-mode cutoff (default: from epsilon)")
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    p.add_argument("--format", default=None, choices=hio.FORMATS)
    p.add_argument("--seed", default=None, help=f"random seed (default {SEED_DEFAULT:#x})")
    p.add_argument("--dim-cap", dest="dim_cap", default=None, help=f"basis size cap (default {DEFAULT_DIM_CAP})")
    p.add_argument("--config", default=None, help="key=value file; command-line flags win")


def _add(sub, name, handler, help_text, options=()):
    """``options``: (flag, default, converter, argparse kwargs)."""
    p = sub.add_parser(name, help=help_text)
    _common(p)
    table = {}
    for flag, default, conv, kwargs in options:
        dest = flag.lstrip("-").replace("-", "_")
        p.add_argument(flag, dest=dest, default=None, **kwargs)
        table[dest] = (default, conv)
    _OPTIONS[name] = table
    p.set_defaults(handler=handler)
    return p


def _choice(allowed):
    def conv(v):
        if v not in allowed:
            raise ConfigError(f"expected one of {allowed}, got {v!r}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypersqueeze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    store = {"action": "store_const", "const": True}
    _add(sub, "algebra", cmd_algebra, "matrix identities, so(4,2) commutators and Casimir", [
        ("--margin", 2, int, {"help": "interior margin (default 2)"}),
        ("--corrupt", False, _to_bool, {**store, "help": "self-test: perturb one generator so the suite must fail"}),
    ])
    _add(sub, "decompose", cmd_decompose, "coset matrix factorisations over a parameter grid")
    _add(sub, "vacuum", cmd_vacuum, "squeezed vacuum state files", [
        ("--route", "numeric", _choice(ROUTES + ("all",)), {"help": f"one of {', '.join(ROUTES)} or all"}),
    ])
    _add(sub, "stats", cmd_stats, "probabilities, moments, correlations and entropies", [
        ("--smax", 10, int, {"help": "largest 2S column (default 10)"}),
        ("--moments", "closed", _choice(("closed", "wick")), {"help": "closed (default) or wick"}),
        ("--spectral", False, _to_bool, {**store, "help": "add spectral entropy from the closed-form state"}),
    ])
    _add(sub, "entropy", cmd_entropy, "entanglement entropy curves (rho grid, default 0:3:0.1)", [
        ("--spectral", False, _to_bool, {**store, "help": "add spectral entropies of truncated states"}),
    ])
    _add(sub, "sweep", cmd_sweep, "route-equivalence sweep", [
        ("--count", None, int, {"help": "number of random tuples drawn from --seed instead of the grid"}),
        ("--rho-max", 1.5, float, {"help": "upper rho bound for random tuples (default 1.5)"}),
        ("--routes", "numeric,euler,closed,cg", str, {"help": "comma-separated routes to compare"}),
    ])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:           # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        cfg = _merge(args, args.command)
        return args.handler(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
