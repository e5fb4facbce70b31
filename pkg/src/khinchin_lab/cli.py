"""Command-line front end.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 invalid configuration,
3 a numerical precondition rejected the input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Optional, Sequence

import numpy as np
import scipy

from . import __version__
from . import specialfn as sf
from .dist import RadialDist3D, UnitVector, parse_dist_spec
from .perturbed import geometric_grid, phi3, phi3_prime, psi, psi_prime
from .report import LemmaReport, Verdict, _jsonable
from .verify import PreconditionError

SCHEMA = "khinchin-lab/1"
COMMANDS = ("eval-psi0", "eval-phi0", "eval-psi", "eval-phi", "certify-lemmas",
            "verify-szarek", "verify-ball", "np-analysis", "sweep")
NORMALIZE_SLACK = 1e-3
EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_REJECTED = 0, 1, 2, 3


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    command: str
    s: Optional[float] = None
    s_grid: Optional[str] = None
    dist: list[str] = field(default_factory=list)
    vector: Optional[str] = None
    tol: Optional[float] = None
    mc_samples: int = 0
    seed: int = 0
    output: Optional[str] = None
    format: str = "json"
    order: int = 0
    method: Optional[str] = None
    a_param: Optional[float] = None
    s0: Optional[float] = None
    n_vectors: int = 100
    n_min: int = 3
    n_max: int = 12
    intermediates: bool = False
    only: list[str] = field(default_factory=list)
    no_dists: bool = False

    # ---- validation --------------------------------------------------------
    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError("command", f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError("format", "must be json or csv")
        if self.format == "csv" and self.command not in CSV_COMMANDS:
            raise ConfigError("format", "csv is only available for the eval-* scans")
        if self.tol is not None and not (math.isfinite(self.tol) and self.tol > 0):
            raise ConfigError("tol", "must be a positive number")
        if self.mc_samples < 0 or (0 < self.mc_samples < 1000):
            raise ConfigError("mc_samples", "must be 0 or at least 1000")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed", "must be a 64-bit unsigned integer")
        if self.order not in (0, 1):
            raise ConfigError("order", "must be 0 or 1")
        needs_s = {"eval-psi0", "eval-phi0", "eval-psi", "eval-phi"}
        if self.command in needs_s:
            if (self.s is None) == (self.s_grid is None):
                raise ConfigError("s", "give exactly one of --s and --s-grid")
            for s in self.s_values():
                self._check_s(s)
        if self.command in {"eval-psi", "eval-phi", "verify-szarek", "verify-ball", "sweep"} \
                and not self.dist:
            raise ConfigError("dist", f"{self.command} needs --dist")
        if self.command in {"eval-psi", "eval-phi", "verify-szarek", "verify-ball"} \
                and len(self.dist) > 1:
            raise ConfigError("dist", f"{self.command} takes a single --dist")
        for text in self.dist:
            self._dist(text)
        if self.command in {"eval-psi", "verify-szarek"} and self.dist:
            if isinstance(self._dist(self.dist[0]), RadialDist3D):
                raise ConfigError("dist", "needs a one-dimensional family")
        if self.command in {"eval-phi", "verify-ball"} and self.dist:
            if not isinstance(self._dist(self.dist[0]), RadialDist3D):
                raise ConfigError("dist", "needs a radial family (sphere, shell, two_shell)")
        if self.command in {"verify-szarek", "verify-ball"}:
            if self.vector is None:
                raise ConfigError("vector", f"{self.command} needs --vector")
            self.unit_vector()
        if self.command == "np-analysis" and self.a_param is None:
            raise ConfigError("a_param", "np-analysis needs --a")
        if self.command == "sweep":
            if not 2 <= self.n_min <= self.n_max:
                raise ConfigError("n_min", "need 2 <= n_min <= n_max")
            if self.n_vectors < 1:
                raise ConfigError("n_vectors", "must be positive")
        items = [self.only] if isinstance(self.only, str) else self.only
        self.only = [x.strip() for item in items for x in item.split(",") if x.strip()]
        if self.command == "certify-lemmas" and self.only:
            from .certify import LEMMA_IDS
            bad = sorted(set(self.only) - set(LEMMA_IDS))
            if bad:
                raise ConfigError("only", f"unknown lemma ids {bad}")

    def _check_s(self, s: float) -> None:
        lower = {"eval-psi0": (0.0, False), "eval-phi0": (1.0, False),
                 "eval-psi": (2.0 if self.order else 1.0, True),
                 "eval-phi": (2.0, True)}[self.command]
        lo, inclusive = lower
        if not math.isfinite(s) or (s < lo if inclusive else s <= lo):
            raise ConfigError("s", f"s={s:g} outside the domain ({'>=' if inclusive else '>'} {lo:g})")

    @staticmethod
    def _dist(text: str):
        try:
            return parse_dist_spec(text)
        except ValueError as exc:
            raise ConfigError("dist", str(exc)) from None

    def dists(self):
        return [self._dist(t) for t in self.dist]

    def s_values(self) -> list[float]:
        if self.s is not None:
            return [float(self.s)]
        return parse_grid(self.s_grid)

    def unit_vector(self) -> UnitVector:
        text = self.vector.strip()
        try:
            if text.startswith("random"):
                kv = dict(p.split("=", 1) for p in text.partition(":")[2].split(",") if p)
                n = int(kv.get("n", 8))
                seed = int(kv.get("seed", self.seed))
                small = kv.get("small_coeff", "true").lower() in ("1", "true", "yes")
                return UnitVector.random(n, seed, small)
            try:
                return UnitVector.parse(text)
            except ValueError:
                # typed decimals like 0.9,0.436 are unit only to a few digits
                v = UnitVector.parse(text, normalize=True)
                raw = UnitVector.parse_raw(text)
                if abs(math.fsum(x * x for x in raw) - 1.0) > NORMALIZE_SLACK:
                    raise
                return v
        except ValueError as exc:
            raise ConfigError("vector", str(exc)) from None


def parse_grid(text: str) -> list[float]:
    """``min:max:points[:log|lin]``, or an explicit comma list."""
    try:
        if ":" not in text:
            return [float(x) for x in text.split(",") if x.strip()]
        parts = text.split(":")
        lo, hi, pts = float(parts[0]), float(parts[1]), int(parts[2])
        spacing = parts[3] if len(parts) > 3 else "log"
    except (ValueError, IndexError):
        raise ConfigError("s_grid", f"cannot parse {text!r}; use min:max:points[:log|lin]") from None
    if pts < 1 or not lo <= hi:
        raise ConfigError("s_grid", "need min <= max and points >= 1")
    if spacing == "log":
        if lo <= 0:
            raise ConfigError("s_grid", "log spacing needs min > 0")
        return [float(x) for x in geometric_grid(lo, hi, pts)] if pts > 1 else [lo]
    if spacing == "lin":
        return [float(x) for x in np.linspace(lo, hi, pts)]
    raise ConfigError("s_grid", f"spacing must be log or lin, got {spacing!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@dataclass
class Outcome:
    reports: list[LemmaReport] = field(default_factory=list)
    values: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    rejected_reason: Optional[str] = None

    @property
    def exit_code(self) -> int:
        if self.rejected_reason or any(r.verdict is Verdict.REJECTED for r in self.reports):
            if not any(r.verdict is Verdict.FAIL for r in self.reports):
                return EXIT_REJECTED
        if any(r.verdict is Verdict.FAIL for r in self.reports):
            return EXIT_FAIL
        return EXIT_PASS


def _eval_row(s, value, unc, converged=True, **kw) -> dict:
    return {"s": s, "value": value, "uncertainty": unc, "converged": converged, **kw}


def cmd_eval_psi0(cfg: RunConfig) -> Outcome:
    method = cfg.method or "gamma_closed_form"
    rows = []
    for s in cfg.s_values():
        v = sf.psi0_prime(s) if cfg.order else sf.psi0(s, method, cfg.tol or sf.DEFAULT_TOL)
        rows.append(_eval_row(s, v.value, v.uncertainty, v.converged, method=v.method.value))
    return Outcome(values=rows)


def cmd_eval_phi0(cfg: RunConfig) -> Outcome:
    rows = []
    for s in cfg.s_values():
        v = sf.phi0(s, cfg.order, cfg.tol or sf.DEFAULT_TOL, cfg.method)
        rows.append(_eval_row(s, v.value, v.uncertainty, v.converged, method=v.method.value))
    return Outcome(values=rows)


def cmd_eval_psi(cfg: RunConfig) -> Outcome:
    d = cfg.dists()[0]
    fn = psi_prime if cfg.order else psi
    rows = []
    for s in cfg.s_values():
        v = fn(s, d, cfg.tol or 1e-9)
        rows.append(_eval_row(s, v.value, v.uncertainty, v.converged))
    return Outcome(values=rows, extra={"dist": d.describe()})


def cmd_eval_phi(cfg: RunConfig) -> Outcome:
    d = cfg.dists()[0]
    fn = phi3_prime if cfg.order else phi3
    rows = []
    for s in cfg.s_values():
        v = fn(s, d, cfg.tol or 1e-9)
        rows.append(_eval_row(s, v.value, v.uncertainty, v.converged))
    return Outcome(values=rows, extra={"dist": d.describe()})


def cmd_certify(cfg: RunConfig) -> Outcome:
    from .certify import DEFAULT_TOL, certify_all
    line = radial = None
    if cfg.no_dists:
        line, radial = [], []
    elif cfg.dist:
        ds = cfg.dists()
        line = [d for d in ds if not isinstance(d, RadialDist3D)]
        radial = [d for d in ds if isinstance(d, RadialDist3D)]
    summary = certify_all(cfg.tol or DEFAULT_TOL, line, radial, cfg.only or None)
    return Outcome(reports=summary.reports, extra={"counts": summary.counts})


def _verify_one(cfg: RunConfig, a: UnitVector, d) -> LemmaReport:
    from .verify import verify_ball, verify_szarek
    tol = cfg.tol or 1e-10
    fn = verify_ball if isinstance(d, RadialDist3D) else verify_szarek
    return fn(a, d, tol, cfg.mc_samples, cfg.seed, cfg.intermediates)


def cmd_verify(cfg: RunConfig) -> Outcome:
    d = cfg.dists()[0]
    a = cfg.unit_vector()
    try:
        r = _verify_one(cfg, a, d)
    except PreconditionError as exc:
        return Outcome(rejected_reason=str(exc))
    return Outcome(reports=[r], rejected_reason=r.notes if r.verdict is Verdict.REJECTED else None)


def cmd_np(cfg: RunConfig) -> Outcome:
    from .signchange import A_MAX, A_MIN, np_majorization_check, np_report, np_sign_change
    a = float(cfg.a_param)
    if not A_MIN <= a <= A_MAX:
        return Outcome(reports=[np_report(a)], rejected_reason=f"a_param={a} outside [1, pi/3]")
    res = np_sign_change(a)
    reports = [np_report(a)]
    if cfg.s0 is not None:
        grid = cfg.s_values() if cfg.s_grid else list(geometric_grid(cfg.s0, 1e4, 100))
        reports.append(np_majorization_check(a, cfg.s0, grid, cfg.tol or 1e-12))
    return Outcome(reports=reports, extra={"analysis": res.as_dict()})


def cmd_sweep(cfg: RunConfig) -> Outcome:
    """verify-szarek / verify-ball over random small-coefficient vectors, per distribution."""
    from .dist import rng
    g = rng(cfg.seed)
    seeds = g.integers(0, 2 ** 63, size=cfg.n_vectors)
    ns = g.integers(cfg.n_min, cfg.n_max + 1, size=cfg.n_vectors)
    reports, rows = [], []
    for d in cfg.dists():
        for i, (n, sd) in enumerate(zip(ns, seeds)):
            a = UnitVector.random(int(n), int(sd))
            try:
                r = _verify_one(cfg, a, d)
            except PreconditionError as exc:
                r = LemmaReport("mainB" if isinstance(d, RadialDist3D) else "mainS",
                                inputs={"a": list(a.coords)}, verdict=Verdict.REJECTED,
                                notes=str(exc))
            reports.append(r)
            value = r.computed[0].value if r.computed else math.nan
            rows.append({"dist": d.name, "index": i, "n": int(n), "vector_seed": int(sd),
                         "value": value, "bound": r.paper_bound, "margin": r.margin,
                         "verdict": r.verdict.value})
    return Outcome(reports=reports, values=rows)


HANDLERS = {"eval-psi0": cmd_eval_psi0, "eval-phi0": cmd_eval_phi0, "eval-psi": cmd_eval_psi,
            "eval-phi": cmd_eval_phi, "certify-lemmas": cmd_certify,
            "verify-szarek": cmd_verify, "verify-ball": cmd_verify, "np-analysis": cmd_np,
            "sweep": cmd_sweep}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def versions() -> dict:
    return {"khinchin_lab": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def envelope(cfg: RunConfig, out: Outcome, started: str, wall: float) -> dict:
    verdict = {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_REJECTED: "rejected"}[out.exit_code]
    doc = {"schema": SCHEMA, "command": cfg.command, "config": _jsonable(asdict(cfg)),
           "seed": cfg.seed, "tol": cfg.tol, "versions": versions(), "verdict": verdict,
           "reports": [r.as_dict() for r in out.reports], "values": _jsonable(out.values),
           "timing": {"started_utc": started, "wall_seconds": round(wall, 6)}}
    if out.extra:
        doc["extra"] = _jsonable(out.extra)
    if out.rejected_reason:
        doc["rejected"] = out.rejected_reason
    return doc


CSV_COLUMNS = ("s", "value", "uncertainty", "bound", "margin")
CSV_COMMANDS = ("eval-psi0", "eval-phi0", "eval-psi", "eval-phi")


def to_csv(out: Outcome) -> str:
    """Scan table; evaluations carry no bound, so those cells stay empty."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in out.values:
        w.writerow([_csv_cell(row.get(k)) for k in CSV_COLUMNS])
    return buf.getvalue()


def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return x


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="khinchin-lab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with the same keys as the flags")
    p.add_argument("--s", type=float)
    p.add_argument("--s-grid", help="min:max:points[:log|lin] or a comma list")
    p.add_argument("--dist", action="append", help="e.g. four_point:1e-5 or kind=shell,param=1e-5")
    p.add_argument("--vector", help="coordinates like 1/√3,1/√3,1/√3 or random:n=8,seed=1")
    p.add_argument("--tol", type=float)
    p.add_argument("--mc-samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--order", type=int, choices=(0, 1))
    p.add_argument("--method")
    p.add_argument("--a", dest="a_param", type=float, help="Gaussian width parameter in [1, pi/3]")
    p.add_argument("--s0", type=float)
    p.add_argument("--n-vectors", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--intermediates", action="store_true", default=None)
    p.add_argument("--only", action="append", help="certify only these lemma ids")
    p.add_argument("--no-dists", action="store_true", default=None,
                   help="certify with an empty distribution list")
    return p


def load_config(ns: argparse.Namespace) -> RunConfig:
    data: dict[str, Any] = {}
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
        data = {k.replace("-", "_"): v for k, v in data.items()}
        known = set(RunConfig.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown config key")
        if isinstance(data.get("dist"), str):
            data["dist"] = [data["dist"]]
    data["command"] = ns.command
    for key, val in vars(ns).items():
        if key in ("command", "config") or val is None:
            continue
        data[key] = val
    try:
        cfg = RunConfig(**data)
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from None
    for name, typ in (("s", float), ("tol", float), ("a_param", float), ("s0", float),
                      ("mc_samples", int), ("seed", int), ("n_vectors", int)):
        val = getattr(cfg, name)
        if val is not None and not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(name, f"expected a number, got {val!r}")
    return cfg


def run(cfg: RunConfig) -> tuple[int, dict, Outcome]:
    cfg.validate()
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    out = HANDLERS[cfg.command](cfg)
    doc = envelope(cfg, out, started, time.perf_counter() - t0)
    return out.exit_code, doc, out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = load_config(ns)
        code, doc, out = run(cfg)
    except ConfigError as exc:
        print(f"khinchin-lab: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PreconditionError as exc:
        print(f"khinchin-lab: rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    text = to_csv(out) if cfg.format == "csv" else json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if doc.get("rejected"):
        print(f"khinchin-lab: rejected: {doc['rejected']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
