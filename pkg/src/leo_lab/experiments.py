"""Tau sweeps for the three LEO experiments and their CSV output."""
from __future__ import annotations

import csv
import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .algebra import EXPERIMENT_LEOS, cnot_codespace, z2_codespace, z3_codespace
from .circuits import BUILDERS, Circuit
from .engine import (
    KickSchedule,
    ShotCounts,
    distance,
    evolve_circuit,
    free_propagator,
    kick_limit,
    leakage_amplitude,
    parity_kick_propagator,
    run_circuit,
)
from .noise import NoiseConfig, NoiseModel, make_leakage_hamiltonian
from .qcore import measure_probabilities

EXPERIMENTS = ("z2", "z3", "cnot")
VARIANTS = ("leo", "free", "leo-with-id")
DEFAULT_TAUS = (1, 5, 10, 20, 50, 100, 150, 200, 300, 400, 500, 600)
FULL_TAUS = tuple(range(1, 601))
MAX_TAU = 10_000

NUM_QUBITS = {"z2": 2, "z3": 3, "cnot": 2}
CODESPACES = {"z2": z2_codespace, "z3": z3_codespace, "cnot": cnot_codespace}
# the cnot circuit maps its protected state to |00> before measuring
PROTECTED_LABELS = {
    "z2": frozenset({"01", "10"}),
    "z3": frozenset({"001", "010", "100", "111"}),
    "cnot": frozenset({"00"}),
}
CSV_COLUMNS = ("experiment", "variant", "tau", "fidelity", "shots", "seed")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    which: str
    variant: str
    tau_values: tuple[int, ...] = DEFAULT_TAUS
    shots: int = 1024
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tau_values", tuple(int(t) for t in self.tau_values))
        if self.which not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.which!r}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if not self.tau_values:
            raise ConfigError("tau_values is empty")
        if any(not 0 <= t <= MAX_TAU for t in self.tau_values):
            raise ConfigError(f"tau values must lie in [0, {MAX_TAU}]")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")

    def to_dict(self) -> dict:
        return {
            "which": self.which,
            "variant": self.variant,
            "tau": list(self.tau_values),
            "shots": self.shots,
            "seed": self.seed,
            "noise": self.noise.to_dict(),
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def noise_model(self) -> NoiseModel:
        cs = CODESPACES[self.which]()
        return self.noise.build(NUM_QUBITS[self.which], cs, rng_seed=self.seed)

    def circuit(self, tau: int) -> Circuit:
        return BUILDERS[self.which](
            tau,
            insert_identity=self.variant == "leo-with-id",
            free=self.variant == "free",
        )


@dataclass(frozen=True)
class FidelityPoint:
    tau: int
    fidelity: float
    shots: int


@dataclass(frozen=True)
class FidelitySeries:
    experiment: str
    variant: str
    points: tuple[FidelityPoint, ...]
    seed: int = 0
    config_hash: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        taus = [p.tau for p in self.points]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ValueError("tau must be strictly increasing")
        if any(not 0.0 <= p.fidelity <= 1.0 for p in self.points):
            raise ValueError("fidelity outside [0, 1]")

    @property
    def taus(self) -> list[int]:
        return [p.tau for p in self.points]

    @property
    def fidelities(self) -> list[float]:
        return [p.fidelity for p in self.points]

    def at(self, tau: int) -> float:
        for p in self.points:
            if p.tau == tau:
                return p.fidelity
        raise KeyError(tau)


def subspace_fidelity(counts: ShotCounts, cs_labels: Iterable[str]) -> float:
    """Fraction of shots whose label lies in the protected set."""
    return sum(counts.counts.get(lab, 0) for lab in set(cs_labels)) / counts.shots


def point_seed(seed: int, tau: int) -> int:
    return seed ^ tau


def _threads() -> int:
    env = os.environ.get("LEO_LAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_point(cfg: ExperimentConfig, nm: NoiseModel, tau: int) -> FidelityPoint:
    counts = run_circuit(cfg.circuit(tau), nm, cfg.shots, point_seed(cfg.seed, tau))
    return FidelityPoint(tau, subspace_fidelity(counts, PROTECTED_LABELS[cfg.which]), cfg.shots)


def run_sweep(cfg: ExperimentConfig) -> FidelitySeries:
    """Run one circuit per tau and record the protected-subspace fidelity.

    Each tau gets its own derived seed, so results do not depend on the
    thread count or completion order.
    """
    nm = cfg.noise_model()
    taus = sorted(set(cfg.tau_values))
    workers = min(_threads(), len(taus))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda t: _run_point(cfg, nm, t), taus))
    else:
        points = [_run_point(cfg, nm, t) for t in taus]
    return FidelitySeries(cfg.which, cfg.variant, tuple(points), cfg.seed, cfg.digest())


def exact_fidelity(cfg: ExperimentConfig, tau: int, nm: NoiseModel | None = None) -> float:
    """Protected-subspace population without shot noise."""
    nm = nm if nm is not None else cfg.noise_model()
    probs = measure_probabilities(evolve_circuit(cfg.circuit(tau), nm))
    n = NUM_QUBITS[cfg.which]
    return float(sum(probs[int(lab, 2)] for lab in PROTECTED_LABELS[cfg.which] if len(lab) == n))


def write_csv_stream(series: Sequence[FidelitySeries], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in series:
        for p in s.points:
            w.writerow([s.experiment, s.variant, p.tau, f"{p.fidelity:.6f}", p.shots, s.seed])


def write_csv(series: Sequence[FidelitySeries], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv_stream(series, fh)


def read_csv(path) -> list[FidelitySeries]:
    grouped: dict[tuple[str, str, int], list[FidelityPoint]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["experiment"], row["variant"], int(row["seed"]))
            grouped.setdefault(key, []).append(
                FidelityPoint(int(row["tau"]), float(row["fidelity"]), int(row["shots"]))
            )
    return [FidelitySeries(e, v, tuple(pts), seed) for (e, v, seed), pts in grouped.items()]


def _tau_values(raw) -> tuple[int, ...]:
    if raw is None or raw == "default":
        return DEFAULT_TAUS
    if raw == "full":
        return FULL_TAUS
    if isinstance(raw, list) and all(isinstance(t, int) for t in raw):
        return tuple(raw)
    raise ConfigError(f"bad tau specification {raw!r}")


def configs_from_dict(doc: dict) -> list[ExperimentConfig]:
    """One config per listed variant; ``variant`` may be a string or a list."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be an object")
    allowed = {"which", "variant", "tau", "shots", "seed", "noise"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "which" not in doc:
        raise ConfigError("config needs a 'which' field")
    variants = doc.get("variant", ["leo", "free"])
    if isinstance(variants, str):
        variants = [variants]
    try:
        noise = NoiseConfig.from_dict(doc.get("noise"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    taus = _tau_values(doc.get("tau"))
    return [
        ExperimentConfig(
            which=doc["which"],
            variant=v,
            tau_values=taus,
            shots=int(doc.get("shots", 1024)),
            noise=noise,
            seed=int(doc.get("seed", 0)),
        )
        for v in variants
    ]


def load_config(path) -> list[ExperimentConfig]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return configs_from_dict(doc)


# ---- parity-kick convergence study -----------------------------------------


@dataclass(frozen=True)
class KickStudyConfig:
    """Grids are in the dimensionless product ``t * ||H_SB||``."""

    leo: str = "z2"
    g_leak: float = 1.0
    g_logical: float = 1.0
    bath_dim: int = 1
    seed: int = 0
    t_grid: tuple[float, ...] = tuple(float(x) for x in np.logspace(-3, -1, 9))
    m_grid: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64, 128, 256)
    t_ref: float = 0.5

    def __post_init__(self):
        if self.leo not in EXPERIMENTS:
            raise ConfigError(f"unknown LEO {self.leo!r}")
        if not self.t_grid or any(t <= 0 for t in self.t_grid):
            raise ConfigError("t_grid must be non-empty and positive")
        if not self.m_grid or any(m < 1 for m in self.m_grid):
            raise ConfigError("m_grid must be non-empty with m >= 1")
        if self.t_ref <= 0:
            raise ConfigError("t_ref must be positive")

    @classmethod
    def from_dict(cls, doc: dict) -> "KickStudyConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be an object")
        fields_ = set(cls.__dataclass_fields__)
        unknown = set(doc) - fields_
        if unknown:
            raise ConfigError(f"unknown kick-study keys: {sorted(unknown)}")
        kw = dict(doc)
        if "t_grid" in kw:
            kw["t_grid"] = tuple(float(t) for t in kw["t_grid"])
        if "m_grid" in kw:
            kw["m_grid"] = tuple(int(m) for m in kw["m_grid"])
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class KickRow:
    m: int
    t: float
    leakage_with_kick: float
    leakage_free: float
    distance_to_limit: float


@dataclass(frozen=True)
class KickStudy:
    rows: tuple[KickRow, ...]
    slope_kick_vs_t: float
    slope_free_vs_t: float
    slope_distance_vs_m: float


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def kick_study(cfg: KickStudyConfig) -> KickStudy:
    """Leakage amplitude vs t at one kick pair, and distance to the limit vs m.

    Leakage amplitudes are spectral norms of ``P U Q``; ``t`` in the output
    is the dimensionless ``t * ||H_SB||``.
    """
    leo = EXPERIMENT_LEOS[cfg.leo]()
    ham = make_leakage_hamiltonian(leo.codespace, cfg.g_leak, cfg.g_logical, cfg.bath_dim, cfg.seed)
    norm = ham.interaction_norm
    ext = ham.extended_codespace

    def row(m: int, x: float) -> KickRow:
        t = x / norm
        u = parity_kick_propagator(KickSchedule(m, t, leo, ham))
        return KickRow(
            m,
            x,
            leakage_amplitude(u, ext),
            leakage_amplitude(free_propagator(ham, t), ext),
            distance(u, kick_limit(ham, t)),
        )

    t_rows = [row(1, x) for x in cfg.t_grid]
    m_rows = [row(m, cfg.t_ref) for m in cfg.m_grid]
    seen = {(r.m, r.t) for r in t_rows}
    rows = t_rows + [r for r in m_rows if (r.m, r.t) not in seen]
    return KickStudy(
        tuple(rows),
        loglog_slope([r.t for r in t_rows], [r.leakage_with_kick for r in t_rows]),
        loglog_slope([r.t for r in t_rows], [r.leakage_free for r in t_rows]),
        loglog_slope([r.m for r in m_rows], [r.distance_to_limit for r in m_rows]),
    )


KICK_CSV_COLUMNS = ("m", "t", "leakage_with_kick", "leakage_free", "distance_to_limit")


def write_kick_csv_stream(study: KickStudy, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(KICK_CSV_COLUMNS)
    for r in study.rows:
        w.writerow(
            [r.m, f"{r.t:.6e}", f"{r.leakage_with_kick:.9e}", f"{r.leakage_free:.9e}", f"{r.distance_to_limit:.9e}"]
        )


def write_kick_csv(study: KickStudy, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_kick_csv_stream(study, fh)
