"""Run configuration: quadrature budgets, tolerances, and report plumbing."""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

CONFIG_ENV_VAR = "SLICEBALL_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    """Budgets and knobs echoed verbatim into every report."""

    circle_nodes: int = 2048
    disk_radial: int = 128
    disk_angular: int = 512
    sphere_theta: int = 64
    sphere_phi: int = 128
    sup_units_theta: int = 4
    sup_units_phi: int = 8
    ladder_min: int = 3
    ladder_max: int = 14
    extrapolation_order: int = 3
    arc_depth: int = 12
    arc_samples_per_cell: int = 4
    boundary_exp: int = 12          # sampling radius 1 - 2^-boundary_exp
    theta_grid: int = 256
    h_min_exp: int = 14
    h_max_exp: int = 1
    box_radial_nodes: int = 12
    box_angular_nodes: int = 12
    vmo_threshold: float = 1e-3
    seed: int = 20240801
    jobs: int = 1

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, int) and f.name != "seed" and v <= 0:
                raise ValueError(f"budget {f.name} must be positive, got {v}")

    @property
    def r_boundary(self) -> float:
        return 1.0 - 2.0 ** -self.boundary_exp

    @property
    def ladder(self):
        return (self.ladder_min, self.ladder_max)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **kw) -> "RunConfig":
        return dataclasses.replace(self, **kw)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        """Key-value text file: one `name = value` per line, # comments."""
        values = {}
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, raw = line.partition("=")
                key = key.strip()
                raw = raw.strip()
                ftypes = {f.name: f.type for f in dataclasses.fields(cls)}
                if key not in ftypes:
                    raise ValueError(f"unknown config key {key!r}")
                values[key] = float(raw) if "float" in str(ftypes[key]) else int(raw)
        return cls(**values)

    @classmethod
    def load_default(cls) -> "RunConfig":
        path = os.environ.get(CONFIG_ENV_VAR)
        if path and os.path.exists(path):
            return cls.from_file(path)
        return cls()


def pmap(fn, items, jobs: int = 1):
    """Order-preserving map, optionally on a thread pool."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def dump_report(obj: dict, path) -> None:
    """Deterministic JSON: sorted keys, no timestamps, trailing newline."""
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")
