"""Command-line driver: figure data, Zeno sweeps and oracle cross-checks.

Every subcommand writes a table (CSV or JSON) to ``--out`` or stdout.
Exit codes: 0 ok, 1 check breach, 2 degenerate/marginal regime, 3 I/O.
"""
from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .coherent import distill_record, zeno_series
from .errors import QuadratureNotConverged, RegimeError, TruncationTooSmall, ZenoDistillError
from .free import free_field_ensemble, free_mean_quanta, free_survival
from .iterates import closed_form_matrix, step_closure
from .oracle import (coherent_density, dominant_mode, oracle_series, projected_v_matrix,
                     squeezed_vacuum_vector, thermal_density, u_p_exact, u_p_factored)
from .params import FIG1, SystemParams, derive_kernel, target_squeeze
from .pfunc import (CoherentMixture, Delta, ThermalGaussian, ensemble_fidelity,
                    ensemble_mean_quanta, evolve_ensemble)

EXIT_OK, EXIT_BREACH, EXIT_REGIME, EXIT_IO, EXIT_USAGE = 0, 1, 2, 3, 64
HEADER = f"# zeno-distill v{__version__}"


@dataclass
class RunConfig:
    tau_bar: float = FIG1.tau_bar
    g_bar: float = FIG1.g_bar
    dp_bar: float = FIG1.dp_bar
    alpha0_re: float = 1.0
    alpha0_im: float = 0.0
    n_max: int = 20
    fock_dim: int = 80
    p_quad_order: int = 64
    alpha_quad_order: int = 32
    state: str = "coherent"
    format: str = "csv"
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n-max must be >= 1")
        if self.fock_dim < 16:
            raise ValueError("fock-dim must be >= 16")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")

    @property
    def alpha0(self) -> complex:
        return complex(self.alpha0_re, self.alpha0_im)

    @property
    def params(self) -> SystemParams:
        return SystemParams(self.tau_bar, self.g_bar, self.dp_bar)

    def pfunction(self):
        kind, _, arg = self.state.partition(":")
        if kind == "coherent":
            return Delta(self.alpha0)
        if kind == "thermal":
            return ThermalGaussian(float(arg), self.alpha0)
        if kind == "mixture":
            return read_mixture(arg)
        raise ValueError(f"unknown state {self.state!r}")


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def read_mixture(path: str) -> CoherentMixture:
    """Lines of ``weight re im`` (comma or whitespace separated, # comments)."""
    comps = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        w, re_, im = (float(t) for t in line.split())
        comps.append((w, complex(re_, im)))
    return CoherentMixture(tuple(comps))


def read_config(path: str) -> dict:
    """Flat ``key = value`` (or ``key: value``) file with kebab-case keys."""
    out = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        key, _, val = line.partition(sep)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def _coerce(name: str, value):
    kind = _TYPES.get(name)
    if kind in ("float", float):
        return float(value)
    if kind in ("int", int):
        return int(value)
    return value


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render(command: str, columns: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        doc = {"format": "zeno-distill", "version": __version__, "command": command,
               "columns": columns, "rows": [[_jsonable(v) for v in r] for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    lines = [HEADER, ",".join(columns)]
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def emit(cfg: RunConfig, command: str, columns, rows) -> int:
    text = render(command, columns, rows, cfg.format)
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(cfg.out).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# --- subcommands ----------------------------------------------------------

DISTILL_COLUMNS = ["N", "P", "lnP", "F", "mean_quanta", "alpha_N_re", "alpha_N_im", "r_N", "phi_N"]


def distill_rows(cfg: RunConfig) -> list[list]:
    kernel = derive_kernel(cfg.params)
    pf = cfg.pfunction()
    rows = []
    if isinstance(pf, Delta):
        for N in range(1, cfg.n_max + 1):
            rec = distill_record(kernel, pf.alpha0, N)
            a = rec.state.alpha
            rows.append([N, math.exp(rec.logP), rec.logP, rec.fidelity, rec.mean_quanta,
                         a.real, a.imag, abs(rec.state.xi), cmath.phase(rec.state.xi)])
        return rows
    target = target_squeeze(kernel)
    for N in range(1, cfg.n_max + 1):
        ens = evolve_ensemble(kernel, pf, N, order=cfg.alpha_quad_order)
        mean_a = complex(np.sum(ens.probabilities * ens.alphas))
        xi = complex(ens.xis[0])
        rows.append([N, ens.normalization, math.log(ens.normalization),
                     ensemble_fidelity(ens, target), ensemble_mean_quanta(ens),
                     mean_a.real, mean_a.imag, abs(xi), cmath.phase(xi)])
    return rows


def cmd_distill(cfg: RunConfig) -> int:
    return emit(cfg, "distill", DISTILL_COLUMNS, distill_rows(cfg))


def second_difference(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    d2 = np.full(v.shape, np.nan)
    d2[1:-1] = v[2:] - 2.0 * v[1:-1] + v[:-2]
    return d2


def cmd_lnp_curvature(cfg: RunConfig) -> int:
    alphas = [complex(s.strip()) for s in str(cfg.extra.get("alpha0_list", "0,2,4")).split(",")]
    kernel = derive_kernel(cfg.params)
    Ns = list(range(1, cfg.n_max + 1))
    cols, data = ["N"], []
    for a in alphas:
        label = _fmt(a.real) if a.imag == 0 else f"{_fmt(a.real)}{a.imag:+.17g}j"
        lnp = [distill_record(kernel, a, N).logP for N in Ns]
        cols += [f"lnP_alpha0={label}", f"d2lnP_alpha0={label}"]
        data += [lnp, list(second_difference(lnp))]
    rows = [[N] + [col[i] for col in data] for i, N in enumerate(Ns)]
    return emit(cfg, "lnp-curvature", cols, rows)


def cmd_free(cfg: RunConfig) -> int:
    t_max = float(cfg.extra.get("t_max") or cfg.n_max * cfg.tau_bar)
    npts = int(cfg.extra.get("t_points") or 101)
    pf = cfg.pfunction()
    rows = []
    for t in np.linspace(0.0, t_max, npts):
        rows.append([float(t), free_survival(cfg.params, pf, float(t), order=cfg.alpha_quad_order),
                     free_mean_quanta(cfg.params, pf, float(t))])
    return emit(cfg, "free", ["t_bar", "P0", "mean_quanta0"], rows)


def cmd_zeno(cfg: RunConfig) -> int:
    t_bar = float(cfg.extra.get("t_bar") if cfg.extra.get("t_bar") is not None else 0.9 * math.pi)
    k_min = int(cfg.extra.get("k_min") or 4)
    k_max = int(cfg.extra.get("k_max") or 12)
    if not t_bar > 0:
        print("error: t-bar must be > 0 (tau_bar = 0 is a degenerate kernel)", file=sys.stderr)
        return EXIT_REGIME
    Ns = [2 ** k for k in range(k_min, k_max + 1)]
    out = zeno_series(cfg.g_bar, cfg.dp_bar, t_bar, Ns, cfg.alpha0)
    rows = [[r.N, r.tau_bar, r.P, r.logP, r.fidelity, r.regime] for r in out]
    return emit(cfg, "zeno", ["N", "tau_bar", "P", "lnP", "fidelity_rotated", "regime"], rows)


@dataclass
class Check:
    name: str
    tolerance: float
    observed: float
    passed: bool
    note: str = ""


def _run(name: str, tol: float, fn) -> Check:
    try:
        err = float(fn())
    except (QuadratureNotConverged, TruncationTooSmall, ZenoDistillError) as exc:
        return Check(name, tol, math.nan, False, f"{type(exc).__name__}: {exc}")
    return Check(name, tol, err, bool(err <= tol))


def oracle_checks(cfg: RunConfig) -> list[Check]:
    """Cross-validate the closed forms against the Fock oracle at ``cfg``."""
    params, D = cfg.params, cfg.fock_dim
    kernel = derive_kernel(params)
    target = target_squeeze(kernel)
    n_chk = min(cfg.n_max, 10)
    cache = {}

    def V():
        if "V" not in cache:
            cache["V"] = projected_v_matrix(params, D, cfg.p_quad_order)
        return cache["V"]

    def quadrature_gate():
        V()
        return 0.0

    def kernel_equivalence():
        m = min(21, D // 4)
        VN, worst = np.eye(D), 0.0
        for N in range(1, n_chk + 1):
            VN = VN @ V()
            ref = closed_form_matrix(step_closure(kernel, N), m)
            worst = max(worst, float(np.abs(VN[:m, :m] - ref).max()))
        return worst

    def propagator():
        block = D - 20
        return max(np.linalg.norm((u_p_exact(params, p, params.tau_bar, D, check=False)
                                   - u_p_factored(params, p, params.tau_bar, D, check=False))[:block, :block], 2)
                   for p in (0.0, 0.7, -1.0))

    xi_vec = squeezed_vacuum_vector(target.xi, D).entries
    pf = cfg.pfunction()

    def triple():
        if isinstance(pf, Delta):
            rho0 = coherent_density(pf.alpha0, D)
        elif isinstance(pf, ThermalGaussian):
            rho0 = thermal_density(pf.nbar, D, pf.center)
        else:
            rho0 = sum(w * coherent_density(a, D) for w, a in pf.components)
        recs = oracle_series(V(), rho0, n_chk, xi_vec)
        worst = 0.0
        for rec in recs[1:]:
            ens = evolve_ensemble(kernel, pf, rec.N, order=cfg.alpha_quad_order)
            got = (ens.normalization, ensemble_fidelity(ens, target), ensemble_mean_quanta(ens))
            ref = (rec.P, rec.fidelity, rec.mean_quanta)
            worst = max(worst, max(abs(g - r) / abs(r) for g, r in zip(got, ref) if r != 0))
        return worst

    def dominant():
        dm = dominant_mode(V())
        return 1.0 - abs(np.vdot(xi_vec, dm.vector)) ** 2

    def free_quanta():
        ens = free_field_ensemble(params, pf, params.tau_bar, cfg.p_quad_order, cfg.alpha_quad_order)
        via_rows = float(np.sum(ens.probabilities * np.abs(ens.alphas) ** 2))
        return abs(via_rows - free_mean_quanta(params, pf, params.tau_bar))

    tol_triple = 1e-6 if isinstance(pf, (Delta, CoherentMixture)) else 1e-4
    return [
        _run("quadrature-gate", 0.0, quadrature_gate),
        _run("propagator-factorization", 1e-8, propagator),
        _run("kernel-equivalence", 1e-8, kernel_equivalence),
        _run("observables-vs-oracle", tol_triple, triple),
        _run("dominant-mode-overlap", 1e-6, dominant),
        _run("free-mean-quanta", 1e-10, free_quanta),
    ]


def cmd_oracle_check(cfg: RunConfig) -> int:
    checks = oracle_checks(cfg)
    rows = [[c.name, c.tolerance, c.observed, "pass" if c.passed else "FAIL", c.note] for c in checks]
    code = emit(cfg, "oracle-check", ["check", "tolerance", "observed", "status", "note"], rows)
    if code != EXIT_OK:
        return code
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: observed {c.observed:.3g} "
              f"(tol {c.tolerance:.0e}) {c.note}".rstrip(), file=sys.stderr)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_BREACH


COMMANDS = {
    "distill": cmd_distill,
    "lnp-curvature": cmd_lnp_curvature,
    "free": cmd_free,
    "zeno": cmd_zeno,
    "oracle-check": cmd_oracle_check,
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="flat key=value file (kebab-case keys)")
    p.add_argument("--tau-bar", type=float, default=S)
    p.add_argument("--g-bar", type=float, default=S)
    p.add_argument("--dp-bar", type=float, default=S)
    p.add_argument("--alpha0-re", type=float, default=S)
    p.add_argument("--alpha0-im", type=float, default=S)
    p.add_argument("--n-max", type=int, default=S)
    p.add_argument("--fock-dim", type=int, default=S)
    p.add_argument("--p-quad-order", type=int, default=S)
    p.add_argument("--alpha-quad-order", type=int, default=S)
    p.add_argument("--state", default=S, help="coherent | mixture:<file> | thermal:<nbar>")
    p.add_argument("--format", choices=["csv", "json"], default=S)
    p.add_argument("--out", default=S, help="output path (default stdout)")
    return p


class _Parser(argparse.ArgumentParser):
    # keep 2 free for regime errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="zeno-distill", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"zeno-distill {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("distill", parents=[common], help="P, F, <a+a> for N = 1..n-max")
    c = sub.add_parser("lnp-curvature", parents=[common], help="ln P and its second difference")
    c.add_argument("--alpha0-list", default=argparse.SUPPRESS, help="comma-separated, e.g. 0,2,4")
    f = sub.add_parser("free", parents=[common], help="no-measurement baseline")
    f.add_argument("--t-max", type=float, default=argparse.SUPPRESS)
    f.add_argument("--t-points", type=int, default=argparse.SUPPRESS)
    z = sub.add_parser("zeno", parents=[common], help="fixed total time, N = 2^k")
    z.add_argument("--t-bar", type=float, default=argparse.SUPPRESS)
    z.add_argument("--k-min", type=int, default=argparse.SUPPRESS)
    z.add_argument("--k-max", type=int, default=argparse.SUPPRESS)
    sub.add_parser("oracle-check", parents=[common], help="closed forms vs Fock oracle")
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    """Defaults < config file < command-line flags."""
    values = {}
    given = vars(ns).copy()
    given.pop("command", None)
    cfg_path = given.pop("config", None)
    if cfg_path:
        values.update(read_config(cfg_path))
    values.update(given)
    known = {k: _coerce(k, v) for k, v in values.items() if k in _TYPES and k != "extra"}
    extra = {k: v for k, v in values.items() if k not in _TYPES}
    return replace(RunConfig(), **known, extra=extra) if known else RunConfig(extra=extra)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = make_config(ns)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME if "degenerate" in str(exc) else EXIT_USAGE
    try:
        return COMMANDS[ns.command](cfg)
    except RegimeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
