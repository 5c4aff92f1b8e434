"""Command line, job descriptions, sweeps, PCF search and JSONL records."""
from .jobs import JobError, JobSpec, ResultRecord, map_from_spec
from .runner import exit_status, run, write_jsonl
from .tasks import (
    PcfVerdict,
    farey_count,
    farey_values,
    kbound_floor,
    pcf_test_exact,
    quad_grid,
    quad_grid_count,
    spectrum,
)

__all__ = [
    "JobError", "JobSpec", "PcfVerdict", "ResultRecord", "exit_status", "farey_count", "farey_values",
    "kbound_floor", "map_from_spec", "pcf_test_exact", "quad_grid", "quad_grid_count", "run", "spectrum",
    "write_jsonl",
]
