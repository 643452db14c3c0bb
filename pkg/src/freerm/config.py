"""Run configuration and manifests.

Configs are flat JSON objects.  Scalar fields use their own name; law and
kernel parameters use dotted keys, e.g.::

    {"schema_version": 1, "law": "gamma", "law.alpha": 1.0, "law.beta": 1.0,
     "kernel": "ou_exp", "d": 100, "replicas": 50, "eps": 0.001, "seed": 7}
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .errors import ConfigError

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    law: str = "gaussian"
    law_params: dict = field(default_factory=dict)
    kernel: str = None
    kernel_params: dict = field(default_factory=dict)
    pathway: str = "A"
    d: int = 100
    replicas: int = 50
    eps: float = 1e-3
    ar_substitute: bool = False
    tolerance: float = 0.05
    seed: int = 0
    out: str = "run"
    workers: int = None
    # free target grid
    n_grid: int = 400
    # statistical checks
    level: float = 0.01
    n_samples: int = 100_000
    n_perm: int = 1000
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}; expected {SCHEMA_VERSION}")
        if self.pathway not in ("A", "B"):
            raise ConfigError("pathway must be 'A' or 'B'")
        for name in ("d", "replicas", "n_grid", "n_samples", "n_perm"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not self.eps >= 0:
            raise ConfigError("eps must be nonnegative")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")

    @property
    def n_workers(self) -> int:
        return int(self.workers) if self.workers else (os.cpu_count() or 1)

    def law_triplet(self):
        from .levy import make_law

        return make_law(self.law, **self.law_params)

    def kernel_object(self):
        from .kernels import make_kernel

        return make_kernel(self.kernel, **self.kernel_params) if self.kernel else None

    # -- flat key-value form -------------------------------------------------

    def to_flat(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in ("law_params", "kernel_params"):
                prefix = f.name.split("_")[0]
                out.update({f"{prefix}.{k}": v[k] for k in sorted(v)})
            else:
                out[f.name] = v
        return out

    @classmethod
    def from_flat(cls, flat: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)} - {"law_params", "kernel_params"}
        kw, law_p, kern_p = {}, {}, {}
        for k, v in flat.items():
            if k.startswith("law."):
                law_p[k[4:]] = v
            elif k.startswith("kernel."):
                kern_p[k[7:]] = v
            elif k in names:
                kw[k] = v
            else:
                raise ConfigError(f"unknown config key {k!r}")
        return cls(law_params=law_p, kernel_params=kern_p, **kw)

    def dumps(self) -> str:
        return json.dumps(self.to_flat(), indent=2, sort_keys=True)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps() + "\n")
        return path

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                flat = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(flat, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_flat(flat)


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    config: dict
    command: str
    version: str = __version__
    wall_clock: float = 0.0
    started: str = ""
    replica_seeds: list = field(default_factory=list)
    files: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @classmethod
    def start(cls, config: RunConfig, command: str) -> "RunManifest":
        m = cls(config.to_flat(), command)
        m.started = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        m._t0 = time.perf_counter()
        m.environment = {"python": platform.python_version(), "numpy": np.__version__}
        return m

    def add_files(self, root, paths):
        for p in paths:
            self.files[os.path.relpath(p, root)] = file_sha256(p)

    def write(self, root) -> str:
        self.wall_clock = time.perf_counter() - getattr(self, "_t0", time.perf_counter())
        path = os.path.join(root, "manifest.json")
        data = asdict(self)
        data["files"] = dict(sorted(self.files.items()))
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        return path
