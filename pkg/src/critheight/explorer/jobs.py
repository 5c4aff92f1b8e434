"""Job descriptions, map/point parsing, flat config files and result records."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any

from .. import __version__
from ..certify.certificate import digest
from ..dynmap.ratmap import (
    RatMap,
    fixed_zero_map,
    make_map,
    milnor2,
    polynomial_map,
    sa_map,
)
from ..exactnum.places import ARCH, Place

TASKS = ("height", "canonical-height", "green", "crit-height", "verify", "sweep-quad",
         "per1-slice", "pcf-search", "spectrum")

STATEMENTS = ("theorem-quad", "quad-k", "greens-lower", "attraction", "key", "maincase",
              "fixedzero-global", "mainglobal", "theorem-geom", "sabranch", "saest", "root-coeff",
              "kbound", "iterate-identity")

FAMILIES = ("milnor2", "pm", "fixed-zero", "sa", "polynomial")

# hard limits; config files and flags are validated against these
MAX_GRID_NUM = 64
MAX_GRID_DEN = 64
MAX_PREC_BITS = 1 << 15
MIN_PREC_BITS = 32
MAX_ITERS = 64
MAX_K = 64
MIN_TOL = 1e-30
MAX_JOBS = 256


class JobError(ValueError):
    """A job description that cannot be run as given."""


# --- parsing -------------------------------------------------------------------------

def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise JobError(f"give rationals as strings 'p/q', not floats ({s!r})")
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise JobError(f"not a rational: {s!r}") from exc


def parse_point(s: str) -> list[Fraction] | str:
    """'inf', a rational 'p/q', or projective coordinates 'x:y[:...]'."""
    s = s.strip()
    if s.lower() in ("inf", "infinity", "oo"):
        return "inf"
    parts = s.split(":")
    coords = [parse_rational(c) for c in parts]
    if len(coords) > 1 and all(c == 0 for c in coords):
        raise JobError("the zero vector is not a projective point")
    return coords


def point_to_affine(pt) -> Fraction | tuple[int, int]:
    """Convert a parsed point on P^1 to what the height routines accept."""
    if pt == "inf":
        return (1, 0)
    if len(pt) == 1:
        return pt[0]
    if len(pt) != 2:
        raise JobError("a point on the projective line needs one or two coordinates")
    x, y = pt
    if y == 0:
        return (1, 0)
    return x / y


def parse_poly(s: str) -> list[int]:
    """Comma-separated integer coefficients, constant term first."""
    try:
        coeffs = [int(t) for t in s.split(",")]
    except ValueError as exc:
        raise JobError(f"polynomial must be comma-separated integers, got {s!r}") from exc
    if not any(coeffs):
        raise JobError("the zero polynomial has no roots to bound")
    return coeffs


def parse_place(s: str | None) -> Place:
    if s is None or str(s).lower() in ("inf", "arch", "infinity", "oo"):
        return ARCH
    try:
        return Place(int(s))
    except ValueError as exc:
        raise JobError(f"place must be 'inf' or a prime, got {s!r}") from exc


def _rats(xs, name: str) -> list[Fraction]:
    if not isinstance(xs, list):
        raise JobError(f"{name} must be a list of rationals")
    return [parse_rational(x) for x in xs]


def map_from_spec(spec: dict) -> RatMap:
    """Build a map from {"num": [...], "den": [...]} or {"family": ..., "params": {...}}."""
    try:
        return _map_from_spec(spec)
    except JobError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise JobError(f"bad map: {exc}") from exc


def _map_from_spec(spec: dict) -> RatMap:
    if "num" in spec or "den" in spec:
        num, den = _rats(spec.get("num"), "num"), _rats(spec.get("den"), "den")
        if len(num) != len(den):
            raise JobError("num and den must list the same number of coefficients")
        return make_map(num, den)
    fam = spec.get("family")
    params = spec.get("params", {})
    if fam not in FAMILIES:
        raise JobError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    try:
        if fam == "milnor2":
            return milnor2(parse_rational(params["lam0"]), parse_rational(params["lam_inf"]))
        if fam == "pm":
            a = parse_rational(params["a"])
            return make_map([1, a, 1], [0, 1, 0])
        if fam == "fixed-zero":
            return fixed_zero_map(parse_rational(params["lam"]), _rats(params["a"], "a"), _rats(params["b"], "b"))
        if fam == "sa":
            return sa_map(int(params["e"]), _rats(params["a"], "a"), _rats(params["b"], "b"))
        return polynomial_map(_rats(params["coeffs"], "coeffs"))
    except KeyError as exc:
        raise JobError(f"family {fam} needs parameter {exc.args[0]!r}") from exc


def load_map_source(src: str) -> dict:
    """Inline JSON (starting with '{') or a path to a JSON file."""
    text = src if src.lstrip().startswith("{") else Path(src).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"map input is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise JobError("map input must be a JSON object")
    map_from_spec(obj)
    return obj


def read_config(path: str) -> dict[str, str]:
    """Flat key = value lines; '#' starts a comment; keys use '-' or '_'."""
    out: dict[str, str] = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise JobError(f"{path}:{n}: expected key = value")
        key, val = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = val.strip('"').strip("'")
    return out


# --- job spec -------------------------------------------------------------------------

@dataclass(frozen=True)
class JobSpec:
    task: str
    map: dict | None = None
    point: str | None = None
    poly: str | None = None
    place: str | None = None
    statement: str | None = None
    family: str = "milnor2"
    lam: str | None = None
    lam0: str | None = None
    lam_inf: str | None = None
    prec_bits: int = 128
    tol: float = 1e-6
    k: int = 1
    n: int = 1
    kmax: int = 6
    iters_cap: int = 12
    grid_num_cap: int = 3
    grid_den_cap: int = 2
    jobs: int = 1
    seed: int = 0
    out: str | None = None

    def validate(self) -> "JobSpec":
        if self.task not in TASKS:
            raise JobError(f"unknown task {self.task!r}")
        if not MIN_PREC_BITS <= self.prec_bits <= MAX_PREC_BITS:
            raise JobError(f"--prec-bits must lie in [{MIN_PREC_BITS}, {MAX_PREC_BITS}]")
        if not MIN_TOL <= self.tol <= 1:
            raise JobError(f"--tol must lie in [{MIN_TOL:g}, 1]")
        if not 0 <= self.grid_num_cap <= MAX_GRID_NUM:
            raise JobError(f"--grid-num-cap must lie in [0, {MAX_GRID_NUM}]")
        if not 1 <= self.grid_den_cap <= MAX_GRID_DEN:
            raise JobError(f"--grid-den-cap must lie in [1, {MAX_GRID_DEN}]")
        if not 1 <= self.iters_cap <= MAX_ITERS:
            raise JobError(f"--iters-cap must lie in [1, {MAX_ITERS}]")
        for name in ("k", "n", "kmax"):
            if not 1 <= getattr(self, name) <= MAX_K:
                raise JobError(f"--{name} must lie in [1, {MAX_K}]")
        if not 1 <= self.jobs <= MAX_JOBS:
            raise JobError(f"--jobs must lie in [1, {MAX_JOBS}]")
        if self.family not in FAMILIES[:2] and self.task == "pcf-search":
            raise JobError("pcf-search sweeps the milnor2 or pm family")
        if self.statement is not None and self.statement not in STATEMENTS:
            raise JobError(f"unknown statement {self.statement!r}; choose from {', '.join(STATEMENTS)}")
        if self.task == "verify" and self.statement is None:
            raise JobError("verify needs --statement")
        if self.map is not None:
            map_from_spec(self.map)
        if self.point is not None:
            parse_point(self.point)
        if self.poly is not None:
            parse_poly(self.poly)
        for name in ("lam", "lam0", "lam_inf"):
            if getattr(self, name) is not None:
                parse_rational(getattr(self, name))
        parse_place(self.place)
        for name in self._required():
            if getattr(self, name) is None:
                what = self.statement if self.task == "verify" else self.task
                raise JobError(f"{what} needs --{name.replace('_', '-')}")
        if self.statement == "kbound" and self.task == "verify" and self.k == 8:
            raise JobError("kbound has a pole at k = 8; pick another --k")
        if self.task == "height" and self.point is None and self.map is None:
            raise JobError("height needs --point or --map")
        return self

    def _required(self) -> tuple[str, ...]:
        if self.task == "verify":
            if self.statement in ("theorem-quad", "quad-k"):
                # theorem-quad without multipliers sweeps the grid
                both = self.lam0 is not None or self.lam_inf is not None
                return ("lam0", "lam_inf") if self.statement == "quad-k" or both else ()
            return {"kbound": ("lam",), "root-coeff": ("poly",),
                    "greens-lower": ("map", "point")}.get(self.statement, ("map",))
        return {"canonical-height": ("map", "point"), "green": ("map", "point"), "crit-height": ("map",),
                "spectrum": ("map",), "per1-slice": ("lam",)}.get(self.task, ())

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")
        return d

    @property
    def digest(self) -> str:
        return digest(self.to_json())

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


@dataclass
class ResultRecord:
    """One output line: a job digest, the point's inputs and what was computed there."""

    job: str
    index: int
    inputs: dict
    heights: list[dict] = field(default_factory=list)
    certificates: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    error: str | None = None
    wall_time: float = 0.0
    version: str = __version__

    def verdicts(self) -> list[str]:
        return [c["verdict"] for c in self.certificates]

    def to_json(self, timings: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {"job": self.job, "index": self.index, "version": self.version,
                               "inputs": self.inputs}
        if self.heights:
            out["heights"] = self.heights
        if self.certificates:
            out["certificates"] = self.certificates
        if self.extra:
            out["extra"] = self.extra
        if self.error is not None:
            out["error"] = self.error
        if timings:
            out["wall_time"] = round(self.wall_time, 6)
        return out
