"""Parameter sweeps over interferometer settings with CSV output.

Configs are flat ``key = value`` files::

    interferometer = su11
    scheme = parity
    g = 0.1, 3, 100        # start, stop, count
    r = 0
    alpha_mag = 0
    phi = 0
    coupling = independent # or optimal_alpha
    output = fig2a.csv
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .detection import phase_sensitivity
from .metrology import hl_snl, n_opa, n_total, optimal_alpha, qcrb, qcrb_su11_closed, qfi_gaussian
from .transforms import InputSpec, MZISpec, SU11Spec

COLUMNS = ("g", "r", "alpha_mag", "phi", "n_total", "snl", "hl", "qcrb", "delta_phi_scheme", "error")
RANGE_KEYS = ("g", "r", "alpha_mag", "phi")
INTERFEROMETERS = ("su11", "mzi")
SCHEMES = ("parity", "homodyne", "intensity", "qcrb")
COUPLINGS = ("independent", "optimal_alpha")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Range:
    start: float
    stop: float
    count: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError(f"range count must be >= 1, got {self.count}")
        if self.start > self.stop:
            raise ConfigError(f"range start {self.start} exceeds stop {self.stop}")

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]

    def text(self) -> str:
        if self.count == 1 and self.start == self.stop:
            return repr(self.start)
        return f"{self.start!r}, {self.stop!r}, {self.count}"


@dataclass(frozen=True)
class SweepConfig:
    interferometer: str = "su11"
    scheme: str = "parity"
    g: Range = field(default_factory=lambda: Range(1.0, 1.0))
    r: Range = field(default_factory=lambda: Range(0.0, 0.0))
    alpha_mag: Range = field(default_factory=lambda: Range(0.0, 0.0))
    phi: Range = field(default_factory=lambda: Range(0.0, 0.0))
    coupling: str = "independent"
    output: str | None = None

    def __post_init__(self):
        if self.interferometer not in INTERFEROMETERS:
            raise ConfigError(f"interferometer must be one of {INTERFEROMETERS}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}")
        if self.coupling not in COUPLINGS:
            raise ConfigError(f"coupling must be one of {COUPLINGS}")

    def echo(self) -> str:
        lines = [f"interferometer = {self.interferometer}", f"scheme = {self.scheme}"]
        lines += [f"{k} = {getattr(self, k).text()}" for k in RANGE_KEYS]
        lines.append(f"coupling = {self.coupling}")
        if self.output:
            lines.append(f"output = {self.output}")
        return "\n".join(lines) + "\n"


def _parse_range(text: str) -> Range:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        v = float(parts[0])
        return Range(v, v, 1)
    if len(parts) == 3:
        count = int(parts[2])
        return Range(float(parts[0]), float(parts[1]), count)
    raise ValueError("expected a single value or 'start, stop, count'")


def apply_settings(config: SweepConfig, items, where=None) -> SweepConfig:
    """Apply ``(key, value)`` pairs on top of ``config``; later pairs win."""
    updates = {}
    for i, (key, value) in enumerate(items):
        loc = where[i] if where else f"setting {key!r}"
        key = key.strip()
        try:
            if key in RANGE_KEYS:
                updates[key] = _parse_range(value)
            elif key in ("interferometer", "scheme", "coupling", "output"):
                updates[key] = value.strip()
            else:
                raise ValueError(f"unknown key {key!r}")
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"{loc}: {exc}") from None
    try:
        return replace(config, **updates)
    except ConfigError as exc:
        raise ConfigError(f"{where[-1] if where else 'config'}: {exc}") from None


def parse_config(text: str, name: str = "<config>", base: SweepConfig | None = None) -> SweepConfig:
    items, where = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{name}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        items.append((key, value))
        where.append(f"{name}:{lineno}")
    return apply_settings(base or SweepConfig(), items, where)


def load_config(path, overrides=()) -> SweepConfig:
    path = Path(path)
    cfg = parse_config(path.read_text(), str(path))
    pairs = []
    for ov in overrides:
        if "=" not in ov:
            raise ConfigError(f"override {ov!r}: expected key=value")
        pairs.append(tuple(ov.split("=", 1)))
    return apply_settings(cfg, pairs)


PRESETS = {
    "fig2a": SweepConfig(g=Range(0.1, 3.0, 100), r=Range(0.0, 0.0), alpha_mag=Range(0.0, 0.0)),
    "fig2b": SweepConfig(g=Range(0.5, 3.0, 101), r=Range(2.0, 2.0), coupling="optimal_alpha"),
    "fig2c": SweepConfig(g=Range(2.0, 2.0), r=Range(0.0, 3.0, 101), coupling="optimal_alpha"),
}


def grid(config: SweepConfig):
    """Grid points ``(g, r, alpha_mag, phi)`` in lexicographic order."""
    alphas = [None] if config.coupling == "optimal_alpha" else config.alpha_mag.values()
    for g, r, a, phi in itertools.product(config.g.values(), config.r.values(), alphas, config.phi.values()):
        yield g, r, (optimal_alpha(g, r) if a is None else a), phi


def evaluate_point(config: SweepConfig, g: float, r: float, alpha_mag: float, phi: float) -> dict:
    row = dict(g=g, r=r, alpha_mag=alpha_mag, phi=phi, n_total=math.nan, snl=math.nan, hl=math.nan,
               qcrb=math.nan, delta_phi_scheme=math.nan, error="")
    N_alpha, N_s = alpha_mag**2, math.sinh(r) ** 2
    try:
        inp = InputSpec(alpha_mag=alpha_mag, r=r)
        if config.interferometer == "su11":
            spec = SU11Spec.balanced(g, phi, alpha_mag=alpha_mag, r=r)
            row["n_total"] = n_total(N_alpha, N_s, n_opa(g))
            row["qcrb"] = qcrb_su11_closed(N_alpha, N_s, n_opa(g))
        else:
            # squeezed port aligned with the coherent phase under the symmetric splitter
            inp = InputSpec(alpha_mag=alpha_mag, theta_alpha=math.pi / 2, r=r)
            spec = MZISpec(phi=phi, input=inp)
            row["n_total"] = N_alpha + N_s
            row["qcrb"] = qcrb(qfi_gaussian(spec.output_state))
        row["hl"], row["snl"] = hl_snl(row["n_total"])
        if config.scheme == "qcrb":
            row["delta_phi_scheme"] = row["qcrb"]
        else:
            res = phase_sensitivity(config.scheme, spec, phi)
            row["delta_phi_scheme"] = res.delta_phi
            if res.method == "zero_derivative":
                row["error"] = res.diagnostic
    except (ArithmeticError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _evaluate_args(args):
    return evaluate_point(*args)


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[dict]:
    """Evaluate every grid point; rows come back in grid order regardless of ``jobs``."""
    work = [(config, *pt) for pt in grid(config)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_evaluate_args, work, chunksize=8))
    return [_evaluate_args(w) for w in work]


def format_value(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in COLUMNS])
    return buf.getvalue()


def write_outputs(config: SweepConfig, rows: list[dict], path) -> Path:
    """Write the CSV and a ``.meta.txt`` sidecar (version info and config echo)."""
    path = Path(path)
    path.write_text(to_csv(rows))
    meta = path.with_name(path.name + ".meta.txt")
    meta.write_text(
        f"su11lab {__version__}\npython {platform.python_version()}\nnumpy {np.__version__}\n"
        f"rows {len(rows)}\n--- config ---\n{config.echo()}"
    )
    return meta
