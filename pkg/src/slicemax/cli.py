"""Config-driven experiment runner.

Each run reads one key-value config file, executes one experiment, and
writes ``summary.json`` plus ``detail.csv`` with stable schemas.  Identical
config and seed produce byte-identical outputs for any worker count.

Exit codes: 0 success, 2 invalid config (the message names the offending
field), 3 internal invariant violation (a bug, not a result).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .exponents import critical_r
from .framework import FrameworkSurface, check_framework, phi_linear
from .gridfn import GridFunction
from .lattice import asymptotic_diagnostic, surface_count_table
from .operators import MaximalConfig, NormalizationMode, maximal_function, multilinear_average
from .parallel import resolve_workers
from .primes import Progression, parity_rearrangement_check, sumset_check
from .sharpness import run_sharpness
from .suites import SUITE_PLANS, domination_suite
from .surfaces import SurfaceSpec

EXPERIMENTS = (
    "count",
    "diagnose_asymptotic",
    "evaluate_operator",
    "verify_slicing",
    "framework_check",
    "sharpness",
    "progressions",
)

_CLAIMS = {
    "ball": "Thm 1",
    "sphere": "Thm 2",
    "annulus": "Thm 4",
    "prime_sphere": "Thm 6",
    "prime_ball": "Thm 6",
}


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


def claim_anchor(experiment: str, family: str | None) -> str:
    if experiment == "framework_check":
        return "Thm 7"
    if experiment == "progressions":
        return "Thm 6"
    if experiment in ("count", "diagnose_asymptotic") and family in (
            "prime_sphere", "prime_ball"):
        return "Hua"
    return _CLAIMS.get(family or "", "Thm 1")


# ---------------------------------------------------------------------------
# config parsing


def parse_config(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


class Config:
    def __init__(self, raw: dict[str, str]):
        self._raw = dict(raw)
        self._used = set()

    def get(self, key: str, default=None, required: bool = False) -> str | None:
        self._used.add(key)
        if key in self._raw:
            return self._raw[key]
        if required:
            raise ConfigError(f"missing required field `{key}`")
        return default

    def get_int(self, key, default=None, required=False) -> int | None:
        val = self.get(key, None, required)
        if val is None:
            return default
        try:
            return int(val)
        except ValueError:
            raise ConfigError(f"field `{key}` must be an integer, got {val!r}")

    def get_fraction(self, key, default=None, required=False) -> Fraction | None:
        val = self.get(key, None, required)
        if val is None:
            return default
        try:
            return Fraction(val)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"field `{key}` must be a rational like 1/2, got {val!r}")

    def get_progression(self, key, required=False) -> Progression | None:
        val = self.get(key, None, required)
        if val is None:
            return None
        try:
            return Progression.parse(val)
        except ValueError as exc:
            raise ConfigError(f"field `{key}`: {exc}")

    def get_progressions(self, key, required=False) -> tuple[Progression, ...] | None:
        val = self.get(key, None, required)
        if val is None:
            return None
        try:
            return tuple(Progression.parse(part.strip()) for part in val.split(";"))
        except ValueError as exc:
            raise ConfigError(f"field `{key}`: {exc}")

    def get_list(self, key, conv, required=False):
        val = self.get(key, None, required)
        if val is None:
            return None
        try:
            return [conv(part.strip()) for part in val.split(",") if part.strip()]
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"field `{key}` has a malformed entry: {val!r}")

    def reject_unknown(self) -> None:
        unknown = set(self._raw) - self._used
        if unknown:
            raise ConfigError(f"unknown field `{sorted(unknown)[0]}`")


def _surface_spec(cfg: Config) -> SurfaceSpec:
    family = cfg.get("family", required=True)
    d = cfg.get_int("d", required=True)
    ell = cfg.get_int("ell", 2)
    k = cfg.get_int("k", 2)
    theta = cfg.get_fraction("theta")
    progressions = cfg.get_progressions("progressions")
    ambient = cfg.get_progression("ambient")
    try:
        return SurfaceSpec(family, d=d, ell=ell, k=k, theta=theta,
                           progressions=progressions, ambient=ambient)
    except ValueError as exc:
        raise ConfigError(f"surface fields: {exc}")


def _lambda_list(cfg: Config, key: str = "lambdas") -> list[int]:
    """Parse 'lo:hi:step' or a comma list of integers."""
    val = cfg.get(key, required=True)
    if ":" in val:
        parts = val.split(":")
        if len(parts) not in (2, 3):
            raise ConfigError(f"field `{key}` must be lo:hi[:step] or a comma list")
        try:
            lo, hi = int(parts[0]), int(parts[1])
            step = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise ConfigError(f"field `{key}` has non-integer bounds: {val!r}")
        return list(range(lo, hi + 1, step))
    try:
        return [int(p.strip()) for p in val.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"field `{key}` has a malformed entry: {val!r}")


# ---------------------------------------------------------------------------
# experiments


def _exp_count(cfg: Config, seed, workers):
    spec = _surface_spec(cfg)
    lams = _lambda_list(cfg)
    if not lams or min(lams) < 0:
        raise ConfigError("field `lambdas` must list heights >= 0")
    table = surface_count_table(spec, max(lams))
    rows = []
    for lam in lams:
        cnt = table[lam]
        rows.append({
            "lam": lam,
            "count": repr(float(cnt)) if spec.is_prime else str(int(cnt)),
        })
    summary = {
        "surface": spec.describe(),
        "heights": len(lams),
        "max_height": max(lams),
    }
    return spec.family, summary, ["lam", "count"], rows


def _exp_diagnose(cfg: Config, seed, workers):
    spec = _surface_spec(cfg)
    lams = _lambda_list(cfg)
    phi = cfg.get_fraction("phi", required=True)
    tol = float(cfg.get_fraction("stabilization_tolerance", Fraction(1, 10)))
    diag = asymptotic_diagnostic(spec, lams, phi)
    rows = [
        {"lam": lam, "count": repr(float(c)), "ratio": repr(r)}
        for lam, c, r in zip(diag.lambdas, diag.counts, diag.ratios)
    ]
    summary = {
        "surface": spec.describe(),
        "phi": str(phi),
        "stabilization": repr(diag.stabilization),
        "stable": diag.stable_within(tol),
        "tolerance": repr(tol),
    }
    return spec.family, summary, ["lam", "count", "ratio"], rows


def _norm_mode(cfg: Config) -> NormalizationMode:
    val = cfg.get("normalization", "power_law")
    if val == "exact_count":
        return NormalizationMode.exact_count()
    if val == "power_law":
        return NormalizationMode.power_law()
    if val.startswith("power_law:"):
        try:
            return NormalizationMode.power_law(Fraction(val.split(":", 1)[1]))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"field `normalization` has a malformed exponent: {val!r}")
    raise ConfigError(f"field `normalization` must be exact_count or power_law[:phi], got {val!r}")


def _load_inputs(cfg: Config, spec: SurfaceSpec) -> list[GridFunction]:
    paths = cfg.get_list("inputs", str, required=True)
    if len(paths) != spec.ell:
        raise ConfigError(f"field `inputs` must list {spec.ell} grid files")
    fs = []
    for path in paths:
        if not os.path.exists(path):
            raise ConfigError(f"field `inputs`: file not found: {path}")
        try:
            fs.append(GridFunction.load(path, spec.d))
        except ValueError as exc:
            raise ConfigError(f"field `inputs`: {path}: {exc}")
    return fs


def _exp_evaluate(cfg: Config, seed, workers):
    spec = _surface_spec(cfg)
    fs = _load_inputs(cfg, spec)
    norm = _norm_mode(cfg)
    lam = cfg.get_int("lam")
    lam_max = cfg.get_int("lam_max")
    rows = []
    if lam is not None:
        x = cfg.get_list("x", int, required=True)
        if len(x) != spec.d:
            raise ConfigError(f"field `x` must have {spec.d} coordinates")
        val = multilinear_average(spec, fs, lam, norm, tuple(x))
        rows.append({
            "x": " ".join(map(str, x)),
            "lam": lam,
            "value": _exact_str(val),
            "value_float": repr(float(val)),
        })
        summary = {"surface": spec.describe(), "mode": "average", "lam": lam}
    elif lam_max is not None:
        progression = spec.ambient if spec.is_prime else None
        config = MaximalConfig.upto(lam_max, norm, progression)
        grid = maximal_function(spec, fs, config)
        for pt, val in grid.items():
            rows.append({
                "x": " ".join(map(str, pt)),
                "lam": lam_max,
                "value": _exact_str(val),
                "value_float": repr(float(val)),
            })
        summary = {
            "surface": spec.describe(),
            "mode": "maximal",
            "truncation": lam_max,
            "nonzero_points": len(rows),
            "box": None if grid.box is None else grid.box.describe(),
        }
    else:
        raise ConfigError("need field `lam` (single average) or `lam_max` (maximal function)")
    return spec.family, summary, ["x", "lam", "value", "value_float"], rows


def _exact_str(val) -> str:
    from .exactnum import PowerValue

    if isinstance(val, PowerValue):
        return val.exact_str()
    if isinstance(val, float):
        return repr(val)
    return str(val)


def _exp_slicing(cfg: Config, seed, workers):
    plan = cfg.get("plan", required=True)
    if plan not in SUITE_PLANS:
        raise ConfigError(f"field `plan` must be one of {sorted(SUITE_PLANS)}")
    n = cfg.get_int("instances", required=True)
    if n < 1:
        raise ConfigError("field `instances` must be >= 1")
    weighted = cfg.get("weights", "log") != "one"
    rows = domination_suite(plan, n, seed, workers, weighted)
    family = rows[0]["family"] if rows else SUITE_PLANS[plan].family
    applicable = sum(1 for r in rows if r["applicable"])
    dominated = sum(1 for r in rows if r["dominated"])
    summary = {
        "plan": plan,
        "instances": n,
        "applicable": applicable,
        "dominated": dominated,
        "violations": sum(r["violations"] for r in rows),
        "all_dominated": dominated == applicable == n,
        "truncation": "per-instance lam_max column",
    }
    header = list(rows[0].keys()) if rows else []
    return family, summary, header, rows


def _exp_framework(cfg: Config, seed, workers):
    spec_kind = cfg.get("surface", "family")
    if spec_kind == "multiplicative":
        d = cfg.get_int("d", required=True)
        surface = FrameworkSurface.multiplicative(d)
        family = "ball"
    else:
        spec = _surface_spec(cfg)
        surface = FrameworkSurface.from_spec(spec)
        family = spec.family
    k = surface.k
    c = cfg.get_fraction("phi_constant", Fraction(0))
    lam_max = cfg.get_int("lam_max", 200)
    ambient_onset = cfg.get_int("ambient_onset", 1)
    factor_onset = cfg.get_int("factor_onset", 1)
    report = check_framework(surface, phi_linear(k, c), lam_max,
                             ambient_onset=ambient_onset,
                             factor_onset=factor_onset)
    rows = [
        {
            "condition": c_.index,
            "name": c_.name,
            "passed": c_.passed,
            "witness": "" if c_.witness is None else json.dumps(c_.witness, sort_keys=True, default=str),
            "detail": c_.detail,
        }
        for c_ in report.conditions
    ]
    summary = {
        "surface": report.surface,
        "passed": report.passed,
        "below_onset_holes": list(report.below_onset_holes),
        "lam_max": lam_max,
    }
    return family, summary, ["condition", "name", "passed", "witness", "detail"], rows


def _exp_sharpness(cfg: Config, seed, workers):
    spec = _surface_spec(cfg)
    r_grid = cfg.get_list("r_grid", Fraction, required=True)
    radii = cfg.get_list("radii", int) or [4, 8, 16, 32]
    exp = run_sharpness(spec, r_grid, radii)
    rows = exp.csv_rows()
    rc = critical_r(spec.family, spec.d, spec.k, spec.ell, spec.theta)
    summary = {
        "surface": spec.describe(),
        "critical_r": str(rc),
        "bracket_lower": None if exp.bracket.lower is None else str(exp.bracket.lower),
        "bracket_upper": None if exp.bracket.upper is None else str(exp.bracket.upper),
        "bracket_contains_critical": exp.bracket.contains(rc),
        "one_sided": exp.bracket.one_sided,
        "radii": list(exp.radii),
    }
    header = ["family", "d", "k", "ell", "theta", "r", "R", "partial_sum",
              "shell_ratio", "verdict"]
    return spec.family, summary, header, rows


def _exp_progressions(cfg: Config, seed, workers):
    gammas = cfg.get_progressions("progressions", required=True)
    ambient = cfg.get_progression("ambient", required=True)
    result = sumset_check(list(gammas), ambient)
    rows = []
    lam_max = cfg.get_int("lam_max", 0)
    for lam in range(1, (lam_max or 0) + 1):
        rows.append({
            "lam": lam,
            "in_ambient": lam in ambient,
            "slot_memberships": " ".join(str(lam in g) for g in gammas),
        })
    parity_lam = cfg.get_int("parity_lam")
    parity = None
    if parity_lam is not None:
        d = cfg.get_int("parity_d", 2)
        k = cfg.get_int("parity_k", 3)
        bound = cfg.get_int("parity_bound", required=True)
        rep = parity_rearrangement_check(d, k, parity_lam, bound)
        parity = {
            "lam": rep.lam,
            "vacuous": rep.vacuous,
            "solutions": rep.solutions,
            "odd_half_solutions": rep.odd_half_solutions,
            "ok": rep.ok,
        }
    summary = {
        "progressions": [str(g) for g in gammas],
        "ambient": str(ambient),
        "sumset_ok": result.ok,
        "sumset_modulus": result.modulus,
        "sumset_witness": result.witness,
        "parity": parity,
    }
    return "prime_sphere", summary, ["lam", "in_ambient", "slot_memberships"], rows


_RUNNERS = {
    "count": _exp_count,
    "diagnose_asymptotic": _exp_diagnose,
    "evaluate_operator": _exp_evaluate,
    "verify_slicing": _exp_slicing,
    "framework_check": _exp_framework,
    "sharpness": _exp_sharpness,
    "progressions": _exp_progressions,
}


# ---------------------------------------------------------------------------
# output


def render_reports(experiment: str, claim: str, params: dict, summary: dict,
                   header: list[str], rows: list[dict], seed) -> tuple[str, str]:
    doc = {
        "tool": f"slicemax {__version__}",
        "experiment": experiment,
        "claim": claim,
        "seed": seed,
        "params": params,
        "summary": summary,
    }
    summary_text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["claim"] + header)
    for row in rows:
        writer.writerow([claim] + [row[h] for h in header])
    return summary_text, buf.getvalue()


def run_experiment(raw_config: dict[str, str], seed, workers: int):
    cfg = Config(raw_config)
    experiment = cfg.get("experiment", required=True)
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"field `experiment` must be one of {EXPERIMENTS}, got {experiment!r}")
    cfg.get("seed")
    cfg.get("workers")
    family, summary, header, rows = _RUNNERS[experiment](cfg, seed, workers)
    cfg.reject_unknown()
    claim = claim_anchor(experiment, family)
    params = {k: v for k, v in sorted(raw_config.items())}
    return render_reports(experiment, claim, params, summary, header, rows, seed)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="slicemax",
        description="Lattice averaging operator experiments: counting, slicing "
                    "domination, sharpness, and framework checks.",
    )
    parser.add_argument("--config", help="path to a key-value experiment config")
    parser.add_argument("--out", help="output directory for summary.json and detail.csv")
    parser.add_argument("--workers", type=int, default=None, help="worker processes")
    parser.add_argument("--seed", type=int, default=None, help="seed override")
    parser.add_argument("--list-experiments", action="store_true")
    args = parser.parse_args(argv)

    if args.list_experiments:
        for name in EXPERIMENTS:
            print(name)
        return 0
    if not args.config or not args.out:
        parser.error("--config and --out are required (or use --list-experiments)")
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = parse_config(fh.read())
        seed = args.seed
        if seed is None and "seed" in raw:
            try:
                seed = int(raw["seed"])
            except ValueError:
                raise ConfigError("field `seed` must be an integer")
        if seed is None:
            seed = 0
        workers = args.workers
        if workers is None and "workers" in raw:
            try:
                workers = int(raw["workers"])
            except ValueError:
                raise ConfigError("field `workers` must be an integer")
        workers = resolve_workers(workers)
        summary_text, detail_text = run_experiment(raw, seed, workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:  # an exact invariant broke: a bug, not a result
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "summary.json"), "w", encoding="utf-8") as fh:
        fh.write(summary_text)
    with open(os.path.join(args.out, "detail.csv"), "w", encoding="utf-8") as fh:
        fh.write(detail_text)
    print(f"wrote {args.out}/summary.json and {args.out}/detail.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
