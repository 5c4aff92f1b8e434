"""Executing jobs: grid expansion, worker pool, JSONL output and exit status."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import IO, Iterable, Iterator

from .. import __version__
from ..certify.certificate import INCONCLUSIVE, VIOLATION
from ..exactnum.rbound import RBound, working_precision
from . import tasks as T
from .jobs import JobError, JobSpec, ResultRecord, parse_rational

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2
EXIT_INCONCLUSIVE = 3


# --- workers ----------------------------------------------------------------------------

def _compute(kind: str, args: tuple) -> dict:
    if kind == "quad":
        return T.quad_point(*args)
    if kind == "pcf":
        return T.pcf_point(*args)
    if kind == "per1":
        return T.per1_point(*args)
    raise ValueError(f"unknown point kind {kind!r}")


def _point_worker(item: tuple) -> tuple[dict, float]:
    """Compute one grid point; failures become an error entry instead of aborting the sweep."""
    kind, prec_bits, args = item
    t0 = time.perf_counter()
    try:
        with working_precision(prec_bits):
            out = _compute(kind, args)
    except (ArithmeticError, ValueError) as exc:
        out = {"error": f"{type(exc).__name__}: {exc}"}
    return out, time.perf_counter() - t0


def _map_points(items: list[tuple], jobs: int) -> Iterator[tuple[dict, float]]:
    if jobs <= 1 or len(items) <= 1:
        yield from map(_point_worker, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() yields in submission order, so output does not depend on scheduling
        yield from pool.map(_point_worker, items, chunksize=1)


def _record(job: JobSpec, index: int, inputs: dict, out: dict, dt: float):
    return ResultRecord(job.digest, index, inputs, out.get("heights", []), out.get("certificates", []),
                        out.get("extra", {}), out.get("error"), dt)


# --- sweeps -------------------------------------------------------------------------------

def _sweep_items(job: JobSpec) -> tuple[list[dict], list[tuple]]:
    P, Q, budget = job.grid_num_cap, job.grid_den_cap, job.iters_cap
    if job.task in ("sweep-quad", "verify"):
        grid = T.quad_grid(P, Q)
        expected = T.quad_grid_count(P, Q)
        if len(grid) != expected:
            raise ArithmeticError(f"grid has {len(grid)} points, closed form gives {expected}")
        inputs = [{"lambda0": str(a), "lambda_inf": str(b)} for a, b in grid]
        return inputs, [("quad", job.prec_bits, (a, b, job.tol, budget)) for a, b in grid]
    if job.task == "pcf-search":
        if job.family == "milnor2":
            grid = T.quad_grid(P, Q)
            inputs = [{"family": "milnor2", "lambda0": str(a), "lambda_inf": str(b)} for a, b in grid]
            return inputs, [("pcf", job.prec_bits, ("milnor2", (a, b), job.tol, budget)) for a, b in grid]
        vals = T.farey_values(P, Q)
        inputs = [{"family": "pm", "a": str(a)} for a in vals]
        return inputs, [("pcf", job.prec_bits, ("pm", (a,), job.tol, budget)) for a in vals]
    if job.task == "per1-slice":
        lam = parse_rational(_required(job, "lam"))
        vals = [t for t in T.farey_values(P, Q) if t * lam != 1]
        inputs = [{"lambda": str(lam), "lambda0": str(t)} for t in vals]
        return inputs, [("per1", job.prec_bits, (lam, t, job.tol)) for t in vals]
    raise JobError(f"task {job.task} is not a sweep")


def _required(job: JobSpec, name: str) -> str:
    val = getattr(job, name)
    if val is None:
        raise JobError(f"task {job.task} needs --{name.replace('_', '-')}")
    return val


def _is_sweep(job: JobSpec) -> bool:
    if job.task in ("sweep-quad", "pcf-search", "per1-slice"):
        return True
    return job.task == "verify" and job.statement == "theorem-quad" and job.lam0 is None and job.lam_inf is None


def _bound(d: dict) -> RBound:
    return RBound.from_json(d)


def _summary(job: JobSpec, records: list) -> dict:
    errors = [r.index for r in records if r.error is not None]
    verdicts = T.tally(v for r in records for v in r.verdicts())
    out: dict = {"points": len(records), "errors": errors, "verdicts": verdicts}
    if job.task in ("sweep-quad", "verify"):
        out["expected_points"] = T.quad_grid_count(job.grid_num_cap, job.grid_den_cap)
        best = None
        for r in records:
            if r.heights:
                hc = _bound(r.heights[0]["value"])
                if hc.lo > 0 and (best is None or hc.lo < best[0].lo):
                    best = (hc, r.inputs)
        out["min_positive_hcrit"] = None if best is None else {"value": best[0].to_json(), "at": best[1]}
        out["pcf_hits"] = [r.inputs for r in records if r.extra.get("pcf", {}).get("verdict") == T.PCF]
    elif job.task == "pcf-search":
        out["pcf_hits"] = [r.inputs for r in records if r.extra.get("pcf", {}).get("verdict") == T.PCF]
        out["pcf_verdicts"] = {v: sum(1 for r in records if r.extra.get("pcf", {}).get("verdict") == v)
                               for v in (T.PCF, T.NOT_PCF, T.BUDGET_EXHAUSTED)}
    elif job.task == "per1-slice":
        lam = parse_rational(job.lam)
        floor = T.kbound_floor(lam)
        hcs = [(_bound(r.heights[0]["value"]), r.inputs) for r in records if r.heights]
        out["mode"] = "ratio" if any("ratio" in r.extra for r in records) else "absolute"
        out["floor"] = floor.to_json()
        if hcs:
            low = min(hcs, key=lambda t: t[0].lo)
            out["min_hcrit"] = {"value": low[0].to_json(), "at": low[1]}
            out["floor_respected"] = all(h.hi >= floor.lo for h, _ in hcs)
        ratios = [(_bound(r.extra["ratio"]), r.inputs) for r in records if "ratio" in r.extra]
        if ratios:
            low = min(ratios, key=lambda t: t[0].lo)
            out["min_ratio"] = {"value": low[0].to_json(), "at": low[1]}
    return out


# --- entry points -----------------------------------------------------------------------------

def run(job: JobSpec) -> Iterator:
    """Yield ResultRecords for the job in a fixed order; a sweep ends with a summary record."""
    job.validate()
    if not _is_sweep(job):
        body = T.SINGLE_TASKS[job.task]
        t0 = time.perf_counter()
        with working_precision(job.prec_bits):
            out = body(job)
        yield _record(job, 0, job.to_json(), out, time.perf_counter() - t0)
        return
    inputs, items = _sweep_items(job)
    records = []
    for i, (inp, (out, dt)) in enumerate(zip(inputs, _map_points(items, job.jobs))):
        rec = _record(job, i, inp, out, dt)
        records.append(rec)
        yield rec
    yield ResultRecord(job.digest, len(records), {"summary": job.task}, extra={"summary": _summary(job, records)})


def header(job: JobSpec) -> dict:
    """First JSONL line; the only place a timestamp appears."""
    return {"header": {"version": __version__, "job": job.to_json(), "digest": job.digest,
                       "started": datetime.now(timezone.utc).isoformat(timespec="seconds")}}


def write_jsonl(job: JobSpec, records: Iterable, stream: IO[str], timings: bool = False) -> list:
    """Single writer: header first, then one line per record in order."""
    stream.write(json.dumps(header(job), sort_keys=True) + "\n")
    kept = []
    for rec in records:
        stream.write(json.dumps(rec.to_json(timings), sort_keys=True) + "\n")
        stream.flush()
        kept.append(rec)
    return kept


def exit_status(records: Iterable) -> int:
    """2 on any violation, else 1 on any failed point, else 3 on any inconclusive, else 0."""
    verdicts: list[str] = []
    errors = False
    for r in records:
        verdicts.extend(r.verdicts())
        errors |= r.error is not None
        summ = r.extra.get("summary", {})
        if summ.get("floor_respected") is False:
            verdicts.append(VIOLATION)
    if VIOLATION in verdicts:
        return EXIT_VIOLATION
    if errors:
        return EXIT_ERROR
    if INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


__all__ = ["EXIT_ERROR", "EXIT_INCONCLUSIVE", "EXIT_OK", "EXIT_VIOLATION", "exit_status", "header", "run",
           "write_jsonl"]
