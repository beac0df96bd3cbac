"""Command-line entry point.

    exactcs verify   [--max-degree N] [--b B] [--lambda L] [--format json]
    exactcs cs-eval  --potential {morse,spt,pt} ...
    exactcs weights  --potential {morse,spt,pt} ...
    exactcs autocorr --potential {spt,pt} ...
    exactcs carpet   --potential {spt,pt} ...

Exit codes: 0 success, 1 numerical-invariant failure, 2 configuration error.
Every data file is written together with ``<output>.meta.json``.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .. import coherent, dynamics, potentials, specfun
from . import io
from .verify import run_suites

COMMANDS = ("verify", "cs-eval", "weights", "autocorr", "carpet")
EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    potential: str = "spt"
    lam: float = 3.0
    rho: float = 2.0
    kappa: float = 2.0
    beta: complex = 1.5
    gamma: complex = 10.0
    nmax: int = 80
    xpoints: int = 512
    tpoints: int | None = None
    tmax: float | None = None
    xmin: float | None = None
    xmax: float | None = None
    threshold: float = 0.3
    output: str | None = None
    format: str = "csv"
    series_only: bool = False
    max_degree: int = 30
    b: float | None = None

    def validate(self) -> None:
        if self.potential not in ("morse", "spt", "pt"):
            raise ConfigError(f"unknown potential {self.potential!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.nmax < 0 or self.xpoints < 1 or (self.tpoints is not None and self.tpoints < 1):
            raise ConfigError("nmax must be >= 0 and point counts >= 1")
        if self.tmax is not None and not self.tmax >= 0:
            raise ConfigError("tmax must be non-negative")
        if not 0 < self.threshold < 1:
            raise ConfigError("threshold must lie in (0, 1)")
        if self.max_degree < 0 or self.max_degree > 200:
            raise ConfigError("max-degree must lie in [0, 200]")
        if self.b is not None and float(self.b).is_integer() and self.b <= 0:
            raise ConfigError(f"b={self.b} is a non-positive integer; the CHG series is undefined")
        if self.potential == "morse" and not self.lam > 0:
            raise ConfigError("Morse requires lambda > 0")
        if self.potential == "spt" and not self.rho > 1:
            raise ConfigError("SPT requires rho > 1")
        if self.potential == "pt" and not (self.kappa > 1 and self.rho > 1):
            raise ConfigError("PT requires kappa, rho > 1")

    def spec(self) -> potentials.PotentialSpec:
        if self.potential == "morse":
            return potentials.morse(self.lam)
        if self.potential == "spt":
            return potentials.spt(self.rho)
        return potentials.pt(self.kappa, self.rho)

    def params(self) -> dict:
        """Complete, JSON-ready parameter record for sidecars."""
        d = asdict(self)
        for key in ("beta", "gamma"):
            d[key] = [d[key].real, d[key].imag]
        if d["output"] is not None:
            d["output"] = Path(d["output"]).name
        return d


def parse_complex(text: str) -> complex:
    """'re' or 're,im'."""
    parts = [p.strip() for p in str(text).split(",")]
    if not 1 <= len(parts) <= 2:
        raise ConfigError(f"cannot parse complex value {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex value {text!r}") from exc
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


_CONVERTERS = {
    "potential": str, "lam": float, "rho": float, "kappa": float,
    "beta": parse_complex, "gamma": parse_complex, "nmax": int, "xpoints": int,
    "tpoints": int, "tmax": float, "xmin": float, "xmax": float, "threshold": float,
    "output": str, "format": str, "max_degree": int, "b": float,
    "series_only": lambda s: str(s).strip().lower() in ("1", "true", "yes", "on"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--potential", choices=("morse", "spt", "pt"))
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--rho", type=float)
    common.add_argument("--kappa", type=float)
    common.add_argument("--beta", help="complex as re[,im]")
    common.add_argument("--gamma", help="complex as re[,im]")
    common.add_argument("--nmax", type=int)
    common.add_argument("--xpoints", type=int)
    common.add_argument("--tpoints", type=int)
    common.add_argument("--tmax", type=float)
    common.add_argument("--xmin", type=float)
    common.add_argument("--xmax", type=float)
    common.add_argument("--threshold", type=float)
    common.add_argument("--output")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--config", type=Path, help="key=value file, overridden by flags")
    common.add_argument("--series-only", action="store_true", default=None)
    common.add_argument("--max-degree", dest="max_degree", type=int)
    common.add_argument("--b", type=float, help="CHG parameter for verify")

    parser = argparse.ArgumentParser(prog="exactcs", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values: dict = {}
    if ns.config is not None:
        try:
            raw = io.read_config(ns.config)
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        for key, text in raw.items():
            key = "lam" if key == "lambda" else key
            if key not in _CONVERTERS:
                raise ConfigError(f"unknown config key {key!r}")
            try:
                values[key] = _CONVERTERS[key](text)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {text!r}") from exc
    for key in _CONVERTERS:
        flag = getattr(ns, key, None)
        if flag is not None:
            values[key] = _CONVERTERS[key](flag) if key in ("beta", "gamma") else flag
    cfg = RunConfig(command=ns.command, **values)
    cfg.beta, cfg.gamma = complex(cfg.beta), complex(cfg.gamma)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _output(cfg: RunConfig) -> Path:
    return Path(cfg.output or f"{cfg.command}.{cfg.format}")


def _emit(cfg: RunConfig, header, rows, meta: dict) -> Path:
    out = _output(cfg)
    rows = [list(r) for r in rows]
    if cfg.format == "csv":
        io.write_csv(out, header, rows)
    else:
        io.write_json(out, {"columns": list(header), "rows": [[float(v) for v in r] for r in rows]})
    meta = {"command": cfg.command, "params": cfg.params(), **meta}
    io.write_json(io.sidecar_path(out), meta)
    return out


def _label(cfg: RunConfig) -> complex:
    return cfg.beta if cfg.potential == "morse" else cfg.gamma


def _dynamic_state(cfg: RunConfig) -> coherent.CoeffSeq:
    # nmax is the largest retained n; weights renormalized over n <= nmax
    if cfg.potential == "spt":
        return coherent.spt_cs(cfg.gamma, cfg.rho, cfg.nmax, norm="numeric", strict=False)
    return coherent.pt_cs(cfg.gamma, cfg.kappa, cfg.rho, cfg.nmax, strict=False)


def _state_meta(cs: coherent.CoeffSeq) -> dict:
    return {"state": {k: v for k, v in cs.as_dict().items() if k != "c"}}


def cmd_verify(cfg: RunConfig) -> int:
    b_values = (cfg.b,) if cfg.b is not None else (1.5, 4.0, 7.2)
    checks = run_suites(cfg.max_degree, b_values, cfg.lam)
    ok = all(c.passed for c in checks)
    if cfg.format == "json":
        report = io.dumps({"passed": ok, "max_degree": cfg.max_degree, "checks": [c.as_dict() for c in checks]})
        if cfg.output:
            Path(cfg.output).write_text(report, encoding="utf-8")
        else:
            sys.stdout.write(report)
    else:
        print(f"exactcs verify: max degree {cfg.max_degree}")
        for c in checks:
            print(c.line())
        print("all checks passed" if ok else "SOME CHECKS FAILED")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_carpet(cfg: RunConfig) -> int:
    if cfg.potential == "morse":
        raise ConfigError("carpet: Morse dynamics are not supported")
    spec = cfg.spec()
    cs = _dynamic_state(cfg)
    cfg.tmax = 2 * math.pi if cfg.tmax is None else cfg.tmax
    cfg.tpoints = cfg.tpoints or 2048
    x = dynamics.default_x_grid(spec, cfg.xpoints)
    t = dynamics.default_t_grid(cfg.tpoints, cfg.tmax)
    grid = dynamics.evolve(cs, spec, x, t)
    header = ["x"] + [io.fmt(v) for v in t]
    rows = ([xv, *row] for xv, row in zip(x, grid.density))
    _emit(cfg, header, rows, {
        "layout": "rows are x, columns are t; cells are |psi(x,t)|^2",
        "x_grid": {"start": float(x[0]), "stop": float(x[-1]), "points": int(x.size)},
        "t_grid": {"start": float(t[0]), "stop": float(t[-1]), "points": int(t.size)},
        "max_norm_drift": grid.meta["max_norm_drift"],
        **_state_meta(cs),
    })
    return EXIT_OK


def cmd_autocorr(cfg: RunConfig) -> int:
    if cfg.potential == "morse":
        raise ConfigError("autocorr: Morse dynamics are not supported")
    spec = cfg.spec()
    cs = _dynamic_state(cfg)
    # 2049 samples on [0, 4 pi]: step pi/512 hits both 2 pi and pi/2 exactly
    cfg.tmax = 4 * math.pi if cfg.tmax is None else cfg.tmax
    cfg.tpoints = cfg.tpoints or 2049
    t = dynamics.default_t_grid(cfg.tpoints, cfg.tmax)
    series = dynamics.autocorrelation(cs, spec, t, cfg.threshold)
    rows = zip(t, series.A.real, series.A.imag, series.intensity)
    _emit(cfg, ["t", "re_A", "im_A", "abs2_A"], rows, {
        "t_grid": {"start": float(t[0]), "stop": float(t[-1]), "points": int(t.size)},
        "markers": [m._asdict() for m in series.markers],
        **_state_meta(cs),
    })
    return EXIT_OK


def cmd_weights(cfg: RunConfig) -> int:
    if cfg.potential == "morse":
        cs = coherent.morse_cs(cfg.beta, cfg.lam, cfg.nmax, norm="numeric", strict=False)
    else:
        cs = _dynamic_state(cfg)
    dist = dynamics.weight_distribution(cs)
    _emit(cfg, ["n", "weight"], dist, {"sum": float(sum(w for _, w in dist)), **_state_meta(cs)})
    return EXIT_OK


def _x_grid(cfg: RunConfig, spec: potentials.PotentialSpec) -> np.ndarray:
    lo, hi = {"morse": (0.05, 20.0), "spt": (-1.0, 1.0), "pt": (0.0, 0.5 * math.pi)}[cfg.potential]
    lo = lo if cfg.xmin is None else cfg.xmin
    hi = hi if cfg.xmax is None else cfg.xmax
    if hi < lo:
        raise ConfigError("xmax < xmin")
    x = np.linspace(lo, hi, cfg.xpoints)
    try:
        spec.check_domain(x)
    except specfun.DomainError as exc:
        raise ConfigError(f"cs-eval: {exc}") from exc
    return x


def cmd_cs_eval(cfg: RunConfig) -> int:
    spec = cfg.spec()
    x = _x_grid(cfg, spec)
    label = _label(cfg)
    closed_available = cfg.potential in ("morse", "spt") and not cfg.series_only
    if closed_available and (label.imag != 0 or not label.real > 0):
        raise ConfigError("closed form needs a real positive parameter; pass --series-only")
    if cfg.potential == "morse":
        cs = coherent.morse_cs(label, cfg.lam, cfg.nmax)
        closed = (lambda: coherent.morse_cs_closed(label.real, cfg.lam, x))
    elif cfg.potential == "spt":
        cs = coherent.spt_cs(label, cfg.rho, cfg.nmax)
        closed = (lambda: coherent.spt_cs_closed(label.real, cfg.rho, x))
    else:
        cs = coherent.pt_cs(label, cfg.kappa, cfg.rho, cfg.nmax)
        closed = None
    series = cs.evaluate(x)
    meta = {"closed_form": bool(closed_available), **_state_meta(cs)}
    if closed_available:
        try:
            cf = np.asarray(closed(), dtype=complex)
        except specfun.DomainError as exc:
            raise ConfigError(f"closed form outside its validity window: {exc}") from exc
        diff = np.abs(series - cf)
        meta["max_abs_diff"] = float(diff.max())
        header = ["x", "series_re", "series_im", "closed_re", "closed_im", "abs_diff"]
        rows = zip(x, series.real, series.imag, cf.real, cf.imag, diff)
    else:
        if cfg.potential == "pt":
            meta["note"] = "no closed form is available for the PT coherent state"
        header = ["x", "series_re", "series_im"]
        rows = zip(x, series.real, series.imag)
    _emit(cfg, header, rows, meta)
    return EXIT_OK


_DISPATCH = {
    "verify": cmd_verify,
    "cs-eval": cmd_cs_eval,
    "weights": cmd_weights,
    "autocorr": cmd_autocorr,
    "carpet": cmd_carpet,
}


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
        return _DISPATCH[cfg.command](cfg)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code) if isinstance(exc.code, int) else EXIT_CONFIG
    except (ConfigError, specfun.DomainError, potentials.UnsupportedError,
            dynamics.UnsupportedBasisError) as exc:
        print(f"exactcs: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (coherent.TruncationError, dynamics.NormDriftError, specfun.ConvergenceError) as exc:
        print(f"exactcs: numerical check failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"exactcs: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
