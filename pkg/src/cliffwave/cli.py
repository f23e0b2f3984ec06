"""Scenario-driven verification runner.

``cliffwave run scenario.json`` executes the stages in order and writes a JSON
report; the stage subcommands run one stage from command-line flags. Exit codes:
0 when every asserted check passes, 1 when one fails, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import inspect
import io
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import cft, cwt, multivector as mv, uncertainty as unc
from .field import GridSpec, MVField, l2_norm, partial_derivative, relative_l2_error
from .testfuncs import GENERATORS, generate

log = logging.getLogger("cliffwave")

SCHEMA_VERSION = 1
STAGES = ("algebra", "fourier", "admissibility", "cwt_roundtrip", "theorems")
THEOREMS = (
    "commutator_bound",
    "heisenberg_fourier",
    "wavelet_bound",
    "sharp_bound",
    "base_inequality_probe",
    "proof_identities",
)
ATLAS_THEOREMS = frozenset({"wavelet_bound", "sharp_bound", "proof_identities"})
DEFAULT_TOLERANCES = {
    "algebra": 1e-12,
    "fourier_fixed_point": 1e-6,
    "fourier_roundtrip": 1e-10,
    "plancherel": 1e-6,
    "derivative": 1e-8,
    "scalarness": 1e-10,
    "isometry": 0.05,
    "reconstruction": 0.02,
    "commutator": 1e-6,
    "heisenberg": 1e-6,
    "wavelet_bound": 0.05,
    "proof_identities": 0.05,
}

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------- scenario


@dataclass
class FunctionSpec:
    name: str
    params: dict[str, Any] = field(default_factory=dict)

    def build(self, grid: GridSpec, seed: int) -> MVField:
        params = dict(self.params)
        if self.name == "random_bandlimited":
            params.setdefault("seed", seed)
        return generate(self.name, grid, **params)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.name}({inner})"


@dataclass
class Scenario:
    dim: int = 2
    grid_n: int = 32
    box: float = 8.0
    wavelet: str = "mexican_hat"
    wavelet_params: dict[str, Any] = field(default_factory=dict)
    a_min: float = 0.125
    a_max: float = 8.0
    scale_count: int = 24
    spins: int = 8
    functions: list[FunctionSpec] = field(default_factory=lambda: [FunctionSpec("gaussian")])
    roundtrip_function: FunctionSpec | None = None
    theorems: list[str] = field(default_factory=lambda: list(THEOREMS))
    coordinates: list[int] = field(default_factory=lambda: [1])
    stages: list[str] = field(default_factory=lambda: list(STAGES))
    constant_mode: str = "calibrated"
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    output_json: str | None = None
    output_csv: str | None = None

    def validate(self) -> None:
        if not 1 <= self.dim <= 3:
            raise ConfigError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.grid_n < 4 or self.grid_n % 2:
            raise ConfigError(f"grid n must be even and >= 4, got {self.grid_n}")
        if not self.box > 0:
            raise ConfigError(f"box must be positive, got {self.box}")
        if self.wavelet not in cwt.WAVELETS:
            raise ConfigError(f"unknown wavelet {self.wavelet!r}; known: {sorted(cwt.WAVELETS)}")
        if not 0 < self.a_min <= self.a_max or self.scale_count < 1:
            raise ConfigError("scales need 0 < a_min <= a_max and count >= 1")
        if self.spins < 1:
            raise ConfigError("spins must be >= 1")
        for spec in self.functions + ([self.roundtrip_function] if self.roundtrip_function else []):
            if spec.name not in GENERATORS:
                raise ConfigError(f"unknown test function {spec.name!r}; known: {sorted(GENERATORS)}")
            try:
                inspect.signature(GENERATORS[spec.name]).bind(None, **spec.params)
            except TypeError as exc:
                raise ConfigError(f"bad parameters for {spec.name}: {exc}") from None
        if not self.functions:
            raise ConfigError("at least one test function is required")
        for name in self.theorems:
            if name not in THEOREMS:
                raise ConfigError(f"unknown theorem {name!r}; known: {list(THEOREMS)}")
        for name in self.stages:
            if name not in STAGES:
                raise ConfigError(f"unknown stage {name!r}; known: {list(STAGES)}")
        for k in self.coordinates:
            if not 1 <= k <= self.dim:
                raise ConfigError(f"coordinate index {k} outside [1, {self.dim}]")
        if self.constant_mode not in cwt.CONSTANT_MODES:
            raise ConfigError(f"constant_mode must be one of {cwt.CONSTANT_MODES}")
        for key, val in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}; known: {sorted(DEFAULT_TOLERANCES)}")
            if not isinstance(val, (int, float)) or not val >= 0 or math.isinf(val):
                raise ConfigError(f"tolerance {key} must be a finite number >= 0, got {val!r}")
        needs_cwt = "cwt_roundtrip" in self.stages or "admissibility" in self.stages or (
            "theorems" in self.stages and ATLAS_THEOREMS & set(self.theorems)
        )
        if needs_cwt and self.dim not in (2, 3):
            raise ConfigError("wavelet stages need dim 2 or 3 (spin sampling)")

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.dim, self.grid_n, self.box)

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def echo(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("output_json")
        d.pop("output_csv")
        d["tolerances"] = {k: self.tol(k) for k in sorted(DEFAULT_TOLERANCES)}
        return d


def _function_spec(obj) -> FunctionSpec:
    if isinstance(obj, str):
        return FunctionSpec(obj)
    if not isinstance(obj, dict) or "name" not in obj:
        raise ConfigError(f"test function entry must be a name or {{'name': ..., 'params': ...}}, got {obj!r}")
    extra = set(obj) - {"name", "params"}
    if extra:
        raise ConfigError(f"unknown keys in test function entry: {sorted(extra)}")
    return FunctionSpec(obj["name"], dict(obj.get("params", {})))


_SCENARIO_KEYS = {
    "schema", "dim", "grid", "wavelet", "scales", "spins", "functions", "roundtrip_function",
    "theorems", "coordinates", "stages", "constant_mode", "tolerances", "seed", "output",
}


def scenario_from_dict(doc: dict[str, Any]) -> Scenario:
    if not isinstance(doc, dict):
        raise ConfigError("scenario must be a JSON object")
    if doc.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"scenario schema must be {SCHEMA_VERSION}, got {doc.get('schema')!r}")
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    try:
        sc = Scenario()
        sc.dim = int(doc.get("dim", sc.dim))
        grid = doc.get("grid", {})
        sc.grid_n = int(grid.get("n", sc.grid_n))
        sc.box = float(grid.get("box", sc.box))
        wav = doc.get("wavelet", sc.wavelet)
        if isinstance(wav, dict):
            sc.wavelet = wav["name"]
            sc.wavelet_params = dict(wav.get("params", {}))
        else:
            sc.wavelet = str(wav)
        scales = doc.get("scales", {})
        sc.a_min = float(scales.get("a_min", sc.a_min))
        sc.a_max = float(scales.get("a_max", sc.a_max))
        sc.scale_count = int(scales.get("count", sc.scale_count))
        sc.spins = int(doc.get("spins", sc.spins))
        if "functions" in doc:
            sc.functions = [_function_spec(o) for o in doc["functions"]]
        if doc.get("roundtrip_function") is not None:
            sc.roundtrip_function = _function_spec(doc["roundtrip_function"])
        if "theorems" in doc:
            sc.theorems = list(doc["theorems"])
        if "coordinates" in doc:
            sc.coordinates = [int(k) for k in doc["coordinates"]]
        if "stages" in doc:
            sc.stages = list(doc["stages"])
        sc.constant_mode = doc.get("constant_mode", sc.constant_mode)
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(doc.get("tolerances", {}))
        sc.tolerances = tol
        sc.seed = int(doc.get("seed", sc.seed))
        out = doc.get("output", {})
        sc.output_json = out.get("json")
        sc.output_csv = out.get("csv")
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed scenario: {exc}") from exc
    sc.validate()
    return sc


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario {path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(doc)


# --------------------------------------------------------------------------- checks


def _error_check(name: str, observed: float, tol: float, **components) -> unc.UncertaintyReport:
    """A check that passes when ``observed < tol``; lhs is the observation, rhs the tolerance."""
    ok = math.isfinite(observed) and observed < tol
    return unc.UncertaintyReport(
        name, 0, abs(observed), tol, observed / tol if tol > 0 else float("nan"),
        components=components,
        verdict="holds" if ok else "violated",
        threshold=tol,
    )


def stage_algebra(sc: Scenario) -> list[unc.UncertaintyReport]:
    mismatches = 0
    pairs = 0
    for n in range(1, 5):
        signs, masks = mv.product_tables(n)
        for a in range(1 << n):
            for b in range(1 << n):
                pairs += 1
                if (int(signs[a, b]), int(masks[a, b])) != mv.blade_product_oracle(a, b):
                    mismatches += 1
    oracle = unc.UncertaintyReport(
        "algebra_oracle", 0, float(mismatches), 0.0, float("nan"),
        components={"pairs": pairs},
        verdict="holds" if mismatches == 0 else "violated",
        threshold=0.0,
    )
    rng = np.random.default_rng(sc.seed)
    worst = 0.0
    samples = 250
    for n in range(1, 5):
        for _ in range(samples):
            a = mv.Multivector(n, rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))
            b = mv.Multivector(n, rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))
            ab = mv.geometric_product(a, b)
            errs = (
                mv.main_involution(ab) - mv.geometric_product(mv.main_involution(a), mv.main_involution(b)),
                mv.reversion(ab) - mv.geometric_product(mv.reversion(b), mv.reversion(a)),
                mv.conjugation(ab) - mv.geometric_product(mv.conjugation(b), mv.conjugation(a)),
                mv.hermitian_conjugation(ab)
                - mv.geometric_product(mv.hermitian_conjugation(b), mv.hermitian_conjugation(a)),
                mv.reversion(mv.reversion(a)) - a,
                mv.conjugation(mv.conjugation(a)) - a,
                mv.main_involution(mv.main_involution(a)) - a,
            )
            scale = max(1.0, mv.magnitude(a) * mv.magnitude(b))
            worst = max(worst, max(mv.magnitude(e) for e in errs) / scale)
    inv = _error_check("involution_identities", worst, sc.tol("algebra"), samples=4 * samples)
    return [oracle, inv]


def stage_fourier(sc: Scenario) -> list[unc.UncertaintyReport]:
    grid = sc.grid
    G = cft.forward(generate("gaussian", grid))
    expected = MVField.from_scalar(G.grid, np.exp(-G.grid.radius() ** 2 / 2))
    fixed = relative_l2_error(G, expected)
    f = sc.functions[0].build(grid, sc.seed)
    roundtrip = relative_l2_error(cft.inverse(cft.forward(f)), f)
    planch = abs(cft.plancherel_ratio(f) - 1.0)
    g = generate("gaussian", grid)
    deriv = 0.0
    for k in range(1, sc.dim + 1):
        exact = MVField(grid, -g.data * grid.coordinate(k)[None])  # d_k g = -x_k g
        deriv = max(deriv, relative_l2_error(partial_derivative(g, k), exact))
    label = sc.functions[0].label
    return [
        _error_check("fourier_fixed_point", fixed, sc.tol("fourier_fixed_point"), function="gaussian"),
        _error_check("fourier_roundtrip", roundtrip, sc.tol("fourier_roundtrip"), function=label),
        _error_check("plancherel", planch, sc.tol("plancherel"), function=label),
        _error_check("derivative_rule", deriv, sc.tol("derivative"), function="gaussian"),
    ]


def _wavelet(sc: Scenario) -> cwt.MotherWavelet:
    psi = cwt.get_wavelet(sc.wavelet, sc.grid)
    c = sc.wavelet_params.get("scale")
    if c is not None:
        psi = psi.scaled(float(c))
    return psi


def stage_admissibility(sc: Scenario, psi: cwt.MotherWavelet) -> list[unc.UncertaintyReport]:
    rep = _error_check(
        "admissibility",
        psi.scalarness_residual if psi.admissible else float("inf"),
        sc.tol("scalarness"),
        wavelet=psi.name,
        scalar_ok=bool(psi.scalar_ok),
        divergent=bool(psi.divergent),
        A_psi=psi.A_psi,
        C_psi=psi.C_psi,
        A_over_C=psi.A_psi / psi.C_psi if psi.admissible else float("nan"),
    )
    return [rep]


def _quadrature(sc: Scenario):
    return cwt.log_scales(sc.a_min, sc.a_max, sc.scale_count, sc.dim), cwt.haar_samples(sc.dim, sc.spins)


def stage_roundtrip(sc: Scenario, psi: cwt.MotherWavelet) -> list[unc.UncertaintyReport]:
    cwt.require_admissible(psi)
    spec = sc.roundtrip_function or sc.functions[0]
    f = spec.build(sc.grid, sc.seed)
    scales, spins = _quadrature(sc)
    atlas = cwt.transform_grid(f, psi, scales, spins)
    norm_sq = l2_norm(f) ** 2
    iso = cwt.h_inner_product(atlas, atlas, sc.constant_mode)[0].real / norm_sq
    rec = relative_l2_error(cwt.inverse(atlas, psi, sc.constant_mode), f)
    quad = {**atlas.quadrature(), "constant_mode": sc.constant_mode}
    out = [
        _error_check("isometry", abs(iso - 1.0), sc.tol("isometry"), ratio=iso, function=spec.label),
        _error_check("reconstruction", rec, sc.tol("reconstruction"), function=spec.label),
    ]
    for r in out:
        r.quadrature = quad
    return out


def stage_theorems(sc: Scenario, psi: cwt.MotherWavelet | None) -> list[unc.UncertaintyReport]:
    out = []
    scales = spins = None
    if ATLAS_THEOREMS & set(sc.theorems):
        cwt.require_admissible(psi)
        scales, spins = _quadrature(sc)
    for spec in sc.functions:
        f = spec.build(sc.grid, sc.seed)
        atlas = None
        if ATLAS_THEOREMS & set(sc.theorems):
            atlas = cwt.transform_grid(f, psi, scales, spins)
        for name in sc.theorems:
            for k in sc.coordinates:
                if name == "commutator_bound":
                    r = unc.commutator_bound(f, k, 1 - sc.tol("commutator"))
                elif name == "heisenberg_fourier":
                    r = unc.heisenberg_fourier(f, k, 1 - sc.tol("heisenberg"))
                elif name == "base_inequality_probe":
                    r = unc.base_inequality_probe(f, k)
                elif name == "wavelet_bound":
                    r = unc.wavelet_bound(f, psi, k, scales, spins, 1 - sc.tol("wavelet_bound"), atlas=atlas)
                elif name == "sharp_bound":
                    r = unc.sharp_bound(f, psi, k, scales, spins, "nominal", atlas=atlas)
                else:
                    r = unc.proof_identities_check(f, psi, k, scales, spins, sc.constant_mode,
                                                   sc.tol("proof_identities"), atlas=atlas)
                r.components = {"function": spec.label, **r.components}
                out.append(r)
    return out


# --------------------------------------------------------------------------- reports


def _jsonable(val):
    if isinstance(val, mv.Multivector):
        return mv.format_multivector(val)
    if isinstance(val, complex):
        return [val.real, val.imag]
    if isinstance(val, (np.floating, np.integer, np.bool_)):
        return val.item()
    if isinstance(val, dict):
        return {k: _jsonable(v) for k, v in val.items()}
    if isinstance(val, (list, tuple)):
        return [_jsonable(v) for v in val]
    return val


@dataclass
class RunReport:
    scenario: dict[str, Any]
    checks: list[unc.UncertaintyReport]
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def failures(self) -> list[unc.UncertaintyReport]:
        return [c for c in self.checks if c.verdict == "violated"]

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.failures else EXIT_OK

    def summary(self) -> dict[str, Any]:
        counts = {v: 0 for v in unc.VERDICTS}
        for c in self.checks:
            counts[c.verdict] += 1
        return {**counts, "passed": not self.failures, "failed_checks": [c.theorem for c in self.failures]}

    def payload(self) -> dict[str, Any]:
        """Deterministic part of the report (everything except timing)."""
        return {
            "schema": SCHEMA_VERSION,
            "scenario": _jsonable(self.scenario),
            "records": [_jsonable(c.to_record()) for c in self.checks],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        doc = self.payload()
        doc["timing"] = self.timing
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def payload_bytes(report_json: str) -> bytes:
    """Canonical bytes of a written report with the timing block removed."""
    doc = json.loads(report_json)
    doc.pop("timing", None)
    return json.dumps(doc, indent=2, sort_keys=True).encode()


_LEAD_COLUMNS = ["theorem", "k", "lhs", "rhs", "ratio", "verdict", "threshold"]


def records_to_csv(records: list[dict[str, Any]]) -> str:
    extra = sorted({key for r in records for key in r} - set(_LEAD_COLUMNS))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_LEAD_COLUMNS + extra, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def run_scenario(sc: Scenario, stages: list[str] | None = None) -> RunReport:
    stages = stages or sc.stages
    checks: list[unc.UncertaintyReport] = []
    timing: dict[str, float] = {}
    psi = None
    for stage in STAGES:
        if stage not in stages:
            continue
        t0 = time.perf_counter()
        if stage in ("admissibility", "cwt_roundtrip") or (
            stage == "theorems" and ATLAS_THEOREMS & set(sc.theorems)
        ):
            psi = psi or _wavelet(sc)
        if stage == "algebra":
            checks += stage_algebra(sc)
        elif stage == "fourier":
            checks += stage_fourier(sc)
        elif stage == "admissibility":
            checks += stage_admissibility(sc, psi)
        elif stage == "cwt_roundtrip":
            checks += stage_roundtrip(sc, psi)
        else:
            checks += stage_theorems(sc, psi)
        timing[stage] = time.perf_counter() - t0
    return RunReport(sc.echo(), checks, timing)


def _print_checks(report: RunReport, stream) -> None:
    for c in report.checks:
        tag = {"holds": "PASS", "violated": "FAIL", "report-only": "INFO"}[c.verdict]
        fn = c.components.get("function", "")
        where = f" [{fn}]" if fn else ""
        print(f"{tag} {c.theorem}{where} k={c.k} lhs={c.lhs:.6g} rhs={c.rhs:.6g} "
              f"ratio={c.ratio:.6g} threshold={c.threshold}", file=stream)
        if c.theorem == "admissibility":
            print("  " + " ".join(f"{k}={c.components[k]}" for k in ("scalar_ok", "A_psi", "C_psi", "A_over_C")),
                  file=stream)
    for c in report.failures:
        print(f"failed check {c.theorem}: observed lhs={c.lhs:.6g} ratio={c.ratio:.6g} "
              f"vs threshold {c.threshold}", file=sys.stderr)


def _write_outputs(report: RunReport, json_path: str | None, csv_path: str | None) -> None:
    if json_path:
        Path(json_path).parent.mkdir(parents=True, exist_ok=True)
        Path(json_path).write_text(report.to_json())
    if csv_path:
        Path(csv_path).parent.mkdir(parents=True, exist_ok=True)
        Path(csv_path).write_text(records_to_csv(report.payload()["records"]))


# --------------------------------------------------------------------------- argparse


def _parse_scales(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, count = text.split(":")
        return float(lo), float(hi), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"scales must look like amin:amax:count, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--grid-n", type=int, default=32)
    p.add_argument("--box", type=float, default=8.0)
    p.add_argument("--wavelet", default="mexican_hat")
    p.add_argument("--scales", type=_parse_scales, default=(0.125, 8.0, 24), metavar="AMIN:AMAX:COUNT")
    p.add_argument("--spins", type=int, default=8)
    p.add_argument("--function", action="append", dest="functions", metavar="NAME",
                   help="test function generator (repeatable); default gaussian")
    p.add_argument("--constant-mode", choices=cwt.CONSTANT_MODES, default="calibrated")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="also write a CSV table here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cliffwave", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run every stage of a scenario file")
    p.add_argument("scenario")
    p.add_argument("--out")
    p.add_argument("--csv")

    for name, help_ in [
        ("verify-algebra", "blade table oracle and involution identities"),
        ("verify-fourier", "fixed point, round trip, Plancherel, derivative rule"),
        ("admissibility", "scalarness and admissibility constants of a wavelet"),
        ("cwt-roundtrip", "isometry and reconstruction under a quadrature"),
        ("uncertainty", "evaluate uncertainty inequalities"),
    ]:
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        if name == "uncertainty":
            p.add_argument("--theorem", action="append", choices=THEOREMS, dest="theorems")
            p.add_argument("--k", type=int, action="append", dest="coordinates")

    p = sub.add_parser("report", help="convert a JSON report")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    return parser


_STAGE_OF = {
    "verify-algebra": "algebra",
    "verify-fourier": "fourier",
    "admissibility": "admissibility",
    "cwt-roundtrip": "cwt_roundtrip",
    "uncertainty": "theorems",
}


def scenario_from_args(args) -> Scenario:
    a_min, a_max, count = args.scales
    sc = Scenario(
        dim=args.dim, grid_n=args.grid_n, box=args.box, wavelet=args.wavelet,
        a_min=a_min, a_max=a_max, scale_count=count, spins=args.spins,
        constant_mode=args.constant_mode, seed=args.seed,
        stages=[_STAGE_OF[args.command]],
    )
    if args.functions:
        sc.functions = [FunctionSpec(n) for n in args.functions]
    if getattr(args, "theorems", None):
        sc.theorems = list(args.theorems)
    elif args.command == "uncertainty":
        sc.theorems = ["heisenberg_fourier"]
    if getattr(args, "coordinates", None):
        sc.coordinates = list(args.coordinates)
    sc.validate()
    return sc


def _report_command(args) -> int:
    try:
        doc = json.loads(Path(args.inp).read_text())
        records = doc["records"]
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: cannot read report {args.inp}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = records_to_csv(records) if args.format == "csv" else json.dumps(records, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "report":
        return _report_command(args)
    try:
        if args.command == "run":
            sc = load_scenario(args.scenario)
            json_path = args.out or sc.output_json
            csv_path = args.csv or sc.output_csv
        else:
            sc = scenario_from_args(args)
            json_path, csv_path = args.out, args.csv
        report = run_scenario(sc)
    except (ConfigError, cwt.InadmissibleWavelet, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _print_checks(report, sys.stdout)
    _write_outputs(report, json_path, csv_path)
    return report.exit_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
