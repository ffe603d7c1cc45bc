"""Command-line driver: deterministic verification runs with structured reports.

One subcommand corresponds to one verified identity.  Reports are emitted as
JSON or CSV and are byte-stable for identical configurations; the wall-clock
duration is printed on stderr rather than serialized, precisely so repeated
runs compare equal.  Exit codes: 0 all verdicts pass, 1 a verdict failed,
2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from ._linalg import NotHermitianError, NotPositiveSemidefiniteError
from .boundary import (
    adjoint_apply,
    boundary_gram,
    boundary_transform,
    carleson_eigenvalues,
    commuting_diagram_defect,
    isometry_defect,
    membership_defect,
    morphism_check,
    onto_residual,
    pencil_eigenvalues,
)
from .gaussian import build_ensemble, empirical_covariance, sample
from .kernels import (
    BargmannKernel,
    Cantor4Kernel,
    DomainError,
    ExplicitFeatureKernel,
    FrameExtension,
    PullbackExtension,
    SectionError,
    SincKernel,
    SzegoKernel,
    build_section,
    element,
    evaluate_element,
    h_norm_sq,
    pd_check,
)
from .measures import (
    atomic,
    band_gauss_legendre,
    cantor_exact,
    cantor_ifs,
    cantor4_fourier,
    gauss_hermite_plane,
    periodic_uniform,
    pushforward,
)
from .reconstruct import lambda4_set, parseval_table, shannon_reconstruct

EXIT_PASS = 0
EXIT_VERDICT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_GOLDEN = 0.6180339887498949

_DEFAULT_MEASURE = {
    "szego": "uniform:2048",
    "bargmann": "gauss-hermite:64",
    "cantor4": "cantor-exact",
    "sinc": "band:160",
}
_DEFAULT_POINTS = {
    "szego": "grid10",
    "bargmann": "grid6",
    "cantor4": "grid8",
    "sinc": "grid5",
}
_DEFAULT_TOL = {
    "pd-check": 1e-10,
    "factorize": 1e-8,
    "isometry": 1e-8,
    "carleson": 1e-8,
    "adjoint-roundtrip": 1e-9,
    "project": 1e-9,
    "gp": 0.05,
    "shannon": 1e-3,
    "cantor-onb": 1e-12,
    "morphism": 1e-12,
}


class UsageError(Exception):
    """Invalid invocation: bad flag value, malformed descriptor, unreadable input."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation: one command plus its validated parameters."""

    command: str
    kernel: str | None = None
    level: int | None = None
    measure: str | None = None
    scale: float = 1.0
    points: str | None = None
    tol: float = 1e-8
    seed: int = 0
    samples: int | None = None
    probes: int | None = None
    freq: int | None = None
    shift: float | None = None
    support: int | None = None
    grid: str | None = None
    parseval_max: int | None = None
    out: str | None = None
    fmt: str = "json"
    threads: int = 1


@dataclass
class Report:
    """Structured outcome of one run.

    Every verdict pairs the measured value with the tolerance it was judged
    against.  ``duration_ms`` is informational only and never serialized.
    """

    command: str
    config: dict
    scalars: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    version: str = __version__
    duration_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def add_verdict(self, name: str, value: float, tolerance: float, passed: bool) -> None:
        self.verdicts.append(
            {
                "name": name,
                "value": float(value),
                "tolerance": float(tolerance),
                "passed": bool(passed),
            }
        )


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def emit(report: Report, fmt: str = "json") -> str:
    """Serialize a report; identical reports produce identical bytes."""
    doc = {
        "command": report.command,
        "config": report.config,
        "scalars": report.scalars,
        "tables": report.tables,
        "verdicts": report.verdicts,
        "version": report.version,
    }
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"
    if fmt == "csv":
        lines = [f"# report,{report.command},{report.version}"]
        lines.append("# scalars")
        lines.append("name,value")
        for name in sorted(report.scalars):
            lines.append(f"{name},{_cell(report.scalars[name])}")
        lines.append("# verdicts")
        lines.append("name,value,tolerance,passed")
        for v in report.verdicts:
            lines.append(
                f"{v['name']},{_cell(v['value'])},{_cell(v['tolerance'])},{_cell(v['passed'])}"
            )
        for name in sorted(report.tables):
            table = report.tables[name]
            lines.append(f"# table,{name}")
            lines.append(",".join(table["columns"]))
            for row in table["rows"]:
                lines.append(",".join(_cell(x) for x in row))
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown report format {fmt!r}")


def _json_default(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rkboundary",
        description="Verification runs for boundary measures of positive definite kernels.",
    )
    parser.add_argument("--version", action="version", version=f"rkboundary {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def common(p, *, kernel=True, measure=True, points=True):
        if kernel:
            p.add_argument("--kernel", choices=sorted(_DEFAULT_MEASURE), default=None)
            p.add_argument("--level", type=_positive_int, default=None,
                           help="cantor4 truncation level (default 6)")
        if measure:
            p.add_argument("--measure", default=None,
                           help="kind[:param], e.g. uniform:2048, gauss-hermite:64, "
                                "cantor-ifs:12, cantor-exact, band:160, atomic:FILE")
            p.add_argument("--scale", type=_positive_float, default=None,
                           help="scale factor applied to all weights")
        if points:
            p.add_argument("--points", default=None,
                           help="gridN, a JSON file, or inline values 0.1,0.2+0.3j,...")
        p.add_argument("--tol", type=_positive_float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)
        p.add_argument("--threads", type=_positive_int, default=None,
                       help="1 guarantees byte-stable reports")
        p.add_argument("--config", default=None, help="JSON file with flag defaults")

    p = sub.add_parser("pd-check", help="positive-semidefiniteness of a sampled Gram matrix")
    common(p, measure=False)

    p = sub.add_parser("factorize", help="boundary factorization defect of a kernel/measure pair")
    common(p)

    p = sub.add_parser("isometry", help="native-vs-boundary norm agreement on random elements")
    common(p)
    p.add_argument("--samples", type=_positive_int, default=None,
                   help="number of random coefficient vectors (default 100)")

    p = sub.add_parser("carleson", help="largest boundary-to-native norm ratio on the section")
    common(p)

    p = sub.add_parser("adjoint-roundtrip", help="adjoint-after-transform identity on probe points")
    common(p)
    p.add_argument("--probes", type=_positive_int, default=None,
                   help="number of probe points (default 50)")

    p = sub.add_parser("project", help="least-squares projection of a boundary exponential")
    common(p)
    p.add_argument("--freq", type=int, default=None,
                   help="target exponential frequency (default -1)")

    p = sub.add_parser("gp", help="Gaussian sampling with kernel covariance")
    common(p, measure=False)
    p.add_argument("--samples", type=_positive_int, default=None,
                   help="Monte-Carlo sample count (default 100000)")

    p = sub.add_parser("shannon", help="cardinal-series reconstruction of a shifted sinc")
    common(p, kernel=False, measure=False, points=False)
    p.add_argument("--shift", type=float, default=None, help="target shift (default 0.3)")
    p.add_argument("--support", type=_positive_int, default=None,
                   help="samples at integers in [-support, support] (default 1000)")
    p.add_argument("--grid", default=None,
                   help="evaluation grid start:stop:step (use --grid=-2:2:0.01 "
                        "for negative starts)")

    p = sub.add_parser("cantor-onb", help="orthonormality and completeness diagnostics "
                                          "of the Cantor exponential basis")
    common(p, kernel=False, measure=False, points=False)
    p.add_argument("--level", type=_positive_int, default=None,
                   help="frequency set level (default 6)")
    p.add_argument("--freq", type=int, default=None,
                   help="completeness probe frequency (default 2)")
    p.add_argument("--parseval-max", dest="parseval_max", type=_positive_int, default=None,
                   help="largest level in the completeness table (default 12)")

    p = sub.add_parser("morphism", help="pushforward ordering and commuting-diagram check "
                                        "on the built-in atom refinement")
    common(p, kernel=False, measure=False, points=False)

    return parser


def parse_config(argv=None) -> RunConfig:
    """Parse flags, merge the optional config file, and resolve defaults.

    Flags always override file values.  Unknown file keys, malformed numbers,
    and nonpositive tolerances are usage errors.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    values = vars(args)
    config_path = values.pop("config", None)
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                overrides = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(overrides, dict):
            raise UsageError("config file must hold a JSON object")
        for key, val in overrides.items():
            attr = key.replace("-", "_")
            if attr not in values or attr == "command":
                raise UsageError(f"unknown config key {key!r}")
            if values[attr] is None:
                values[attr] = val

    command = values["command"]
    resolved: dict = {"command": command}
    if values.get("kernel") is not None or command in (
        "pd-check", "factorize", "isometry", "carleson", "adjoint-roundtrip", "project", "gp",
    ):
        resolved["kernel"] = values.get("kernel") or "szego"
    resolved["level"] = values.get("level")
    resolved["measure"] = values.get("measure")
    resolved["scale"] = float(values.get("scale") or 1.0)
    resolved["points"] = values.get("points")
    resolved["tol"] = float(values["tol"]) if values.get("tol") is not None else _DEFAULT_TOL[command]
    resolved["seed"] = int(values["seed"]) if values.get("seed") is not None else 0
    if command == "isometry":
        resolved["samples"] = int(values.get("samples") or 100)
    if command == "gp":
        resolved["samples"] = int(values.get("samples") or 100000)
    if command == "adjoint-roundtrip":
        resolved["probes"] = int(values.get("probes") or 50)
    if command == "project":
        resolved["freq"] = int(values["freq"]) if values.get("freq") is not None else -1
    if command == "shannon":
        resolved["shift"] = float(values["shift"]) if values.get("shift") is not None else 0.3
        resolved["support"] = int(values.get("support") or 1000)
        resolved["grid"] = values.get("grid") or "-2:2:0.01"
    if command == "cantor-onb":
        resolved["level"] = int(values.get("level") or 6)
        resolved["freq"] = int(values["freq"]) if values.get("freq") is not None else 2
        resolved["parseval_max"] = int(values.get("parseval_max") or 12)
    resolved["out"] = values.get("out")
    resolved["fmt"] = values.get("fmt") or "json"
    resolved["threads"] = int(values.get("threads") or 1)

    if not resolved["tol"] > 0:
        raise UsageError("tolerance must be positive")
    if not resolved["scale"] > 0:
        raise UsageError("scale must be positive")
    return RunConfig(**resolved)


# ---------------------------------------------------------------------------
# object construction from config
# ---------------------------------------------------------------------------

def make_kernel(cfg: RunConfig):
    if cfg.kernel == "szego":
        return SzegoKernel()
    if cfg.kernel == "bargmann":
        return BargmannKernel()
    if cfg.kernel == "cantor4":
        return Cantor4Kernel(level=cfg.level or 6)
    if cfg.kernel == "sinc":
        return SincKernel()
    raise UsageError(f"unknown kernel {cfg.kernel!r}")


_NODE_REQUIRED_COMMANDS = {"adjoint-roundtrip", "project"}


def make_measure(cfg: RunConfig, kernel):
    desc = cfg.measure
    if desc is None:
        desc = _DEFAULT_MEASURE[kernel.name]
        if cfg.command in _NODE_REQUIRED_COMMANDS and desc == "cantor-exact":
            desc = "cantor-ifs:10"  # these commands sample boundary values at nodes
    kind, _, param = desc.partition(":")
    try:
        if kind == "uniform":
            return periodic_uniform(int(param or 2048), scale=cfg.scale)
        if kind == "gauss-hermite":
            return gauss_hermite_plane(int(param or 64), scale=cfg.scale)
        if kind == "cantor-ifs":
            return cantor_ifs(int(param or 12), scale=cfg.scale)
        if kind == "cantor-exact":
            return cantor_exact(scale=cfg.scale)
        if kind == "band":
            return band_gauss_legendre(int(param or 160), scale=cfg.scale)
        if kind == "atomic":
            return _atomic_from_file(param, cfg.scale)
    except ValueError as exc:
        raise UsageError(f"bad measure descriptor {desc!r}: {exc}") from None
    raise UsageError(f"unknown measure kind {kind!r}")


def _atomic_from_file(path: str, scale: float):
    if not path:
        raise UsageError("atomic measures need a file: --measure atomic:FILE")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read measure file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"measure file is not valid JSON: {exc}") from None
    try:
        nodes = [_scalar_from_json(x) for x in doc["nodes"]]
        weights = [float(w) for w in doc["weights"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"measure file needs 'nodes' and 'weights' lists: {exc}") from None
    return atomic(np.asarray(nodes), weights, scale=scale)


def _scalar_from_json(entry):
    if isinstance(entry, (list, tuple)):
        if len(entry) != 2:
            raise ValueError("complex values serialize as [re, im]")
        return complex(float(entry[0]), float(entry[1]))
    return float(entry)


def _parse_inline_scalar(token: str):
    try:
        return complex(token)
    except ValueError:
        raise UsageError(f"malformed point {token!r}") from None


def builtin_grid(n: int, kernel) -> np.ndarray:
    """Deterministic point sets: a low-discrepancy spiral for disk and plane
    kernels, centered integers on the line."""
    k = np.arange(n)
    angle = 2.0 * np.pi * np.mod(_GOLDEN * k, 1.0)
    if kernel.domain == "disk":
        radius = 0.15 + 0.75 * k / max(n - 1, 1)
        return radius * np.exp(1j * angle)
    if kernel.domain == "plane":
        radius = 2.0 * (k + 1) / n
        return radius * np.exp(1j * angle)
    if kernel.domain == "line":
        return k - (n - 1) / 2.0
    raise UsageError(f"no builtin grid for domain {kernel.domain!r}")


def make_points(cfg: RunConfig, kernel) -> np.ndarray:
    src = cfg.points or _DEFAULT_POINTS[kernel.name]
    match = re.fullmatch(r"grid(\d+)", src)
    if match:
        return builtin_grid(int(match.group(1)), kernel)
    if src.endswith(".json") or os.path.exists(src):
        try:
            with open(src, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read points file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"points file is not valid JSON: {exc}") from None
        if isinstance(doc, dict) and "domain" in doc and doc["domain"] != kernel.domain:
            raise UsageError(
                f"points file is tagged for domain {doc['domain']!r} "
                f"but the kernel lives on {kernel.domain!r}"
            )
        try:
            entries = doc["points"] if isinstance(doc, dict) else doc
            return np.asarray([_scalar_from_json(x) for x in entries])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"points file needs a 'points' list: {exc}") from None
    return np.asarray([_parse_inline_scalar(tok) for tok in src.split(",") if tok])


def _domain_probes(kernel, rng: np.random.Generator, count: int) -> np.ndarray:
    if kernel.domain == "disk":
        r = 0.9 * np.sqrt(rng.uniform(size=count))
        return r * np.exp(2j * np.pi * rng.uniform(size=count))
    if kernel.domain == "plane":
        r = 2.0 * np.sqrt(rng.uniform(size=count))
        return r * np.exp(2j * np.pi * rng.uniform(size=count))
    if kernel.domain == "line":
        return rng.uniform(-5.0, 5.0, size=count)
    raise UsageError(f"no probe sampler for domain {kernel.domain!r}")


def _random_coeffs(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def _echo(cfg: RunConfig) -> dict:
    # the output path is delivery metadata, not part of the computation; keeping
    # it out of the echo keeps reports byte-identical wherever they are written
    return {k: v for k, v in asdict(cfg).items() if v is not None and k != "out"}


def _run_pd_check(cfg: RunConfig) -> Report:
    kernel = make_kernel(cfg)
    points = np.atleast_1d(kernel.validate_points(make_points(cfg, kernel)))
    gram = kernel.gram(points)
    verdict = pd_check(gram, cfg.tol)
    eigenvalues = np.linalg.eigvalsh(gram)
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {
        "min_eigenvalue": verdict.min_eigenvalue,
        "threshold": verdict.threshold,
        "points": int(points.shape[0]),
    }
    report.tables["eigenvalues"] = {
        "columns": ["index", "eigenvalue"],
        "rows": [[i, float(w)] for i, w in enumerate(eigenvalues)],
    }
    report.add_verdict(
        "positive-semidefinite",
        verdict.min_eigenvalue,
        cfg.tol,
        verdict.passed,
    )
    return report


def _run_factorize(cfg: RunConfig) -> Report:
    kernel = make_kernel(cfg)
    section = build_section(kernel, make_points(cfg, kernel))
    measure = make_measure(cfg, kernel)
    ext = kernel.boundary_extension()
    nmat = boundary_gram(ext, measure, section).matrix
    deviation = np.abs(nmat - np.conj(section.gram))
    defect = float(np.max(deviation))
    eigenvalues = pencil_eigenvalues(nmat, np.conj(section.gram))
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {
        "membership_defect": defect,
        "carleson_constant_estimate": float(eigenvalues[-1]),
        "total_mass": measure.total_mass,
    }
    report.tables["factorization_deviation"] = {
        "columns": ["i", "j", "abs_deviation"],
        "rows": [
            [i, j, float(deviation[i, j])]
            for i in range(section.size)
            for j in range(section.size)
        ],
    }
    report.tables["pencil_eigenvalues"] = {
        "columns": ["index", "eigenvalue"],
        "rows": [[i, float(w)] for i, w in enumerate(eigenvalues)],
    }
    report.add_verdict("membership", defect, cfg.tol, defect < cfg.tol)
    return report


def _run_isometry(cfg: RunConfig) -> Report:
    kernel = make_kernel(cfg)
    section = build_section(kernel, make_points(cfg, kernel))
    measure = make_measure(cfg, kernel)
    ext = kernel.boundary_extension()
    rng = np.random.default_rng(cfg.seed)
    rows = []
    worst = 0.0
    for trial in range(cfg.samples or 100):
        f = element(section, _random_coeffs(rng, section.size))
        norm_sq = h_norm_sq(f)
        defect = isometry_defect(f, ext, measure)
        normalized = defect / (1.0 + norm_sq)
        worst = max(worst, normalized)
        rows.append([trial, float(norm_sq), float(defect), float(normalized)])
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {"max_normalized_defect": worst}
    report.tables["isometry_trials"] = {
        "columns": ["trial", "norm_sq", "defect", "normalized_defect"],
        "rows": rows,
    }
    report.add_verdict("isometry", worst, cfg.tol, worst < cfg.tol)
    return report


def _run_carleson(cfg: RunConfig) -> Report:
    kernel = make_kernel(cfg)
    section = build_section(kernel, make_points(cfg, kernel))
    measure = make_measure(cfg, kernel)
    ext = kernel.boundary_extension()
    eigenvalues = carleson_eigenvalues(ext, measure, section)
    constant = float(eigenvalues[-1])
    gap = abs(constant - 1.0)
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {
        "carleson_constant_estimate": constant,
        "total_mass": measure.total_mass,
    }
    report.tables["pencil_eigenvalues"] = {
        "columns": ["index", "eigenvalue"],
        "rows": [[i, float(w)] for i, w in enumerate(eigenvalues)],
    }
    report.add_verdict("unit-carleson-constant", gap, cfg.tol, gap <= cfg.tol)
    return report


def _run_adjoint_roundtrip(cfg: RunConfig) -> Report:
    kernel = make_kernel(cfg)
    section = build_section(kernel, make_points(cfg, kernel))
    measure = make_measure(cfg, kernel)
    ext = kernel.boundary_extension()
    rng = np.random.default_rng(cfg.seed)
    f = element(section, _random_coeffs(rng, section.size))
    samples = boundary_transform(f, ext)(measure.nodes)
    probes = _domain_probes(kernel, rng, cfg.probes or 50)
    roundtrip = adjoint_apply(samples, ext, measure, probes)
    direct = evaluate_element(f, probes)
    errors = np.abs(roundtrip - direct)
    worst = float(np.max(errors))
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {"max_roundtrip_error": worst}
    report.tables["probe_errors"] = {
        "columns": ["probe_re", "probe_im", "abs_error"],
        "rows": [
            [float(np.real(p)), float(np.imag(p)), float(e)]
            for p, e in zip(np.atleast_1d(probes), errors)
        ],
    }
    report.add_verdict("adjoint-roundtrip", worst, cfg.tol, worst < cfg.tol)
    return report


def _run_project(cfg: RunConfig) -> Report:
    kernel = make_kernel(cfg)
    section = build_section(kernel, make_points(cfg, kernel))
    measure = make_measure(cfg, kernel)
    ext = kernel.boundary_extension()
    if measure.nodes is None or np.iscomplexobj(measure.nodes):
        raise UsageError("frequency targets need a node-based real boundary "
                         "(circle, band, or Cantor atoms)")
    freq = cfg.freq if cfg.freq is not None else -1
    target = np.exp(2j * np.pi * freq * measure.nodes)
    result = onto_residual(target, ext, measure, section)
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {
        "residual": result.residual,
        "target_norm": result.target_norm,
        "ridged": result.ridged,
    }
    report.tables["projection_coefficients"] = {
        "columns": ["index", "re", "im"],
        "rows": [
            [i, float(np.real(c)), float(np.imag(c))]
            for i, c in enumerate(result.coeffs)
        ],
    }
    report.add_verdict(
        "residual-bounded-by-target",
        result.residual - result.target_norm,
        cfg.tol,
        result.residual <= result.target_norm + cfg.tol,
    )
    return report


def _run_gp(cfg: RunConfig) -> Report:
    kernel = make_kernel(cfg)
    section = build_section(kernel, make_points(cfg, kernel))
    ensemble = build_ensemble(section, cfg.seed)
    batch = sample(ensemble, cfg.samples or 100000)
    cov = empirical_covariance(batch)
    gram = section.gram
    gnorm = float(np.linalg.norm(gram))
    defect = 0.0 if gnorm == 0.0 else float(np.linalg.norm(cov - gram) / gnorm)
    factor_gap = float(np.max(np.abs(ensemble.factor @ ensemble.factor.conj().T - gram)))
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {
        "covariance_defect": defect,
        "factor_residual": factor_gap,
        "sample_count": batch.count,
    }
    report.tables["entry_errors"] = {
        "columns": ["i", "j", "abs_error"],
        "rows": [
            [i, j, float(np.abs(cov[i, j] - gram[i, j]))]
            for i in range(section.size)
            for j in range(section.size)
        ],
    }
    report.add_verdict("covariance", defect, cfg.tol, defect < cfg.tol)
    return report


def _run_shannon(cfg: RunConfig) -> Report:
    shift = cfg.shift if cfg.shift is not None else 0.3
    support = cfg.support or 1000
    try:
        start, stop, step = (float(x) for x in (cfg.grid or "-2:2:0.01").split(":"))
    except ValueError:
        raise UsageError(f"malformed grid {cfg.grid!r}; expected start:stop:step") from None
    grid = np.arange(start, stop + step / 2, step)
    samples = {n: float(np.sinc(n - shift)) for n in range(-support, support + 1)}
    reconstructed = shannon_reconstruct(samples, grid)
    exact = np.sinc(grid - shift)
    errors = np.abs(reconstructed - exact)
    worst = float(np.max(errors))
    integer_mask = grid == np.rint(grid)
    integer_gap = 0.0
    if np.any(integer_mask):
        stored = np.asarray([samples[int(t)] for t in grid[integer_mask]])
        integer_gap = float(np.max(np.abs(reconstructed[integer_mask] - stored)))
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {"max_error": worst, "max_integer_gap": integer_gap}
    report.tables["grid_errors"] = {
        "columns": ["t", "abs_error"],
        "rows": [[float(t), float(e)] for t, e in zip(grid, errors)],
    }
    report.add_verdict("reconstruction", worst, cfg.tol, worst < cfg.tol)
    report.add_verdict("exact-at-integers", integer_gap, 1e-15, integer_gap == 0.0)
    return report


def _run_cantor_onb(cfg: RunConfig) -> Report:
    level = cfg.level or 6
    lam = lambda4_set(level)
    diff = (lam[None, :] - lam[:, None]).astype(float)
    inner = cantor4_fourier(diff)
    off = np.abs(inner - np.eye(lam.shape[0]))
    max_off = float(np.max(off - np.diag(np.diag(off)))) if lam.shape[0] > 1 else 0.0
    max_diag = float(np.max(np.diag(off)))
    mu_hat_one = float(np.abs(cantor4_fourier(1.0)))
    table = parseval_table(cfg.freq if cfg.freq is not None else 2, cfg.parseval_max or 12, min_level=2)
    defects = [d for _, d in table]
    max_increase = max(
        (defects[i + 1] - defects[i] for i in range(len(defects) - 1)), default=0.0
    )
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {
        "max_offdiagonal": max_off,
        "max_diagonal_gap": max_diag,
        "mu_hat_at_one": mu_hat_one,
        "frequencies": int(lam.shape[0]),
    }
    report.tables["row_max_offdiagonal"] = {
        "columns": ["lambda", "max_offdiagonal"],
        "rows": [
            [int(lam[i]), float(np.max(np.delete(off[i], i))) if lam.shape[0] > 1 else 0.0]
            for i in range(lam.shape[0])
        ],
    }
    report.tables["parseval_defects"] = {
        "columns": ["level", "defect"],
        "rows": [[int(lev), float(d)] for lev, d in table],
    }
    report.add_verdict("orthogonality", max_off, cfg.tol, max_off < cfg.tol)
    report.add_verdict("unit-norms", max_diag, cfg.tol, max_diag < cfg.tol)
    report.add_verdict("transform-zero-at-one", mu_hat_one, 1e-14, mu_hat_one < 1e-14)
    report.add_verdict(
        "parseval-monotone", max(max_increase, 0.0), 1e-15, max_increase <= 0.0
    )
    report.add_verdict(
        "parseval-bounded",
        max(max((abs(min(d, 0.0)) for d in defects), default=0.0),
            max((d - 1.0 for d in defects), default=0.0), 0.0),
        1e-10,
        all(-1e-10 <= d <= 1.0 for d in defects),
    )
    return report


def morphism_demo():
    """Built-in refinement example: four uniform atoms collapsing onto two.

    A rank-two feature kernel over three indices, a two-atom tight frame
    boundary, and its four-atom refinement pulled back through the pairing
    map.  Returns (kernel, ext_coarse, ext_fine, mu_coarse, mu_fine, atom_map,
    section, element).
    """
    features = np.array([[1.0, 0.0], [0.0, 1.0], [0.6, 0.8j]], dtype=complex)
    kernel = ExplicitFeatureKernel(features)
    frames = np.array([[np.sqrt(2.0), 0.0], [0.0, np.sqrt(2.0)]], dtype=complex)
    ext_coarse = FrameExtension(kernel, frames)
    mu_coarse = atomic([0, 1], [0.5, 0.5])
    atom_map = {0: 0, 1: 0, 2: 1, 3: 1}
    ext_fine = PullbackExtension(ext_coarse, atom_map)
    mu_fine = atomic([0, 1, 2, 3], [0.25, 0.25, 0.25, 0.25])
    section = build_section(kernel, [0, 1, 2])
    f = element(section, [1.0 + 0.5j, -0.25j, 0.75])
    return kernel, ext_coarse, ext_fine, mu_coarse, mu_fine, atom_map, section, f


def _run_morphism(cfg: RunConfig) -> Report:
    _, ext_coarse, ext_fine, mu_coarse, mu_fine, atom_map, section, f = morphism_demo()
    check = morphism_check(mu_coarse, mu_fine, atom_map, tol=cfg.tol)
    coarse_member = membership_defect(ext_coarse, mu_coarse, section, tol=cfg.tol)
    fine_member = membership_defect(ext_fine, mu_fine, section, tol=cfg.tol)
    diagram = commuting_diagram_defect(ext_coarse, ext_fine, mu_coarse, mu_fine, atom_map, f)
    image = pushforward(mu_fine, atom_map)
    report = Report(command=cfg.command, config=_echo(cfg))
    report.scalars = {
        "pushforward_mass_error": check.max_mass_error,
        "transform_defect": diagram.transform_defect,
        "pullback_isometry_defect": diagram.pullback_isometry_defect,
    }
    report.tables["pushforward_masses"] = {
        "columns": ["atom", "mass"],
        "rows": [[int(a), float(w)] for a, w in zip(image.nodes, image.weights)],
    }
    report.add_verdict("pushforward", check.max_mass_error, cfg.tol, check.passed)
    report.add_verdict("coarse-membership", coarse_member.defect, cfg.tol, coarse_member.passed)
    report.add_verdict("fine-membership", fine_member.defect, cfg.tol, fine_member.passed)
    report.add_verdict(
        "commuting-diagram", diagram.transform_defect, cfg.tol,
        diagram.transform_defect < cfg.tol,
    )
    report.add_verdict(
        "pullback-isometry", diagram.pullback_isometry_defect, cfg.tol,
        diagram.pullback_isometry_defect < cfg.tol,
    )
    return report


_RUNNERS = {
    "pd-check": _run_pd_check,
    "factorize": _run_factorize,
    "isometry": _run_isometry,
    "carleson": _run_carleson,
    "adjoint-roundtrip": _run_adjoint_roundtrip,
    "project": _run_project,
    "gp": _run_gp,
    "shannon": _run_shannon,
    "cantor-onb": _run_cantor_onb,
    "morphism": _run_morphism,
}


def run(config: RunConfig) -> Report:
    """Execute one command; deterministic given the config (seed included)."""
    started = time.perf_counter()
    report = _RUNNERS[config.command](config)
    report.duration_ms = (time.perf_counter() - started) * 1000.0
    return report


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        report = run(config)
        text = emit(report, config.fmt)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, SectionError, NotHermitianError, NotPositiveSemidefiniteError,
            np.linalg.LinAlgError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if config.out:
        try:
            with open(config.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
    else:
        sys.stdout.write(text)
    print(f"# {config.command} finished in {report.duration_ms:.1f} ms", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_VERDICT_FAIL
