"""Delayed-choice Monte-Carlo harness.

Each shot draws a joint (Alice, Bob, Victor) outcome from the Born
distribution of the full four-qubit state, then attaches timestamps in
which Victor's event is strictly later than Alice's and Bob's.  Timing is
pure metadata: it never enters the probabilities, and sorting the early
Alice/Bob records by Victor's later outcome recovers the conditional
correlations of the swapped pair.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple

import numpy as np

from . import rng as _rng
from .chsh import Settings
from .qstate import (
    StateError,
    X_DIR,
    Y_DIR,
    Z_DIR,
    _unit_vector,
    born_distribution,
    direction_basis,
    outcome_probabilities,
    project,
)
from .swapkit import OUTCOME_NAMES, make_alpha_basis, make_total_state

#: shots are sampled in fixed blocks, each from its own derived stream, so a
#: sharded run merged in block order is identical to a sequential one
SAMPLING_BLOCK = 65536

PARTIES = ("alice", "bob", "victor")

VICTOR_MODES = ("generalized-basis", "separable-z")


class InsufficientDataError(ValueError):
    """A conditional estimate was requested from an empty record subset."""


def direction_tag(direction) -> str:
    """Compact, comma-free label for a Bloch direction."""
    vec = _unit_vector(direction)
    for name, axis in (("z", Z_DIR), ("x", X_DIR), ("y", Y_DIR)):
        if np.max(np.abs(vec - axis)) < 1e-12:
            return name
        if np.max(np.abs(vec + axis)) < 1e-12:
            return "-" + name
    return "n=({:.9g} {:.9g} {:.9g})".format(*vec)


@dataclass(frozen=True)
class TimingModel:
    """Fixed per-shot timing of the space-time arrangement, in nanoseconds."""

    source_to_ab_ns: float = 20.0
    victor_delay_ns: float = 50.0
    ab_to_victor_separation_ns: float = 8.0

    def __post_init__(self):
        for name in ("source_to_ab_ns", "victor_delay_ns", "ab_to_victor_separation_ns"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0.0):
                raise StateError(f"{name} must be non-negative, got {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class ExperimentConfig:
    victor_alpha: float
    shots: int
    seed: int
    victor_mode: str = "generalized-basis"
    alice_dir: np.ndarray = field(default_factory=lambda: Z_DIR.copy())
    bob_dir: np.ndarray = field(default_factory=lambda: Z_DIR.copy())
    timing: TimingModel = field(default_factory=TimingModel)

    def __post_init__(self):
        if not 0.0 <= float(self.victor_alpha) <= 1.0:
            raise StateError(f"victor_alpha must be in [0, 1], got {self.victor_alpha}")
        if self.victor_mode not in VICTOR_MODES:
            raise StateError(f"victor_mode must be one of {VICTOR_MODES}, got {self.victor_mode!r}")
        if self.shots < 1:
            raise StateError(f"shots must be >= 1, got {self.shots}")
        if self.timing.victor_delay_ns <= 0.0:
            raise StateError("victor_delay_ns must be positive for delayed-choice ordering")
        object.__setattr__(self, "victor_alpha", float(self.victor_alpha))
        object.__setattr__(self, "alice_dir", _unit_vector(self.alice_dir))
        object.__setattr__(self, "bob_dir", _unit_vector(self.bob_dir))

    @property
    def effective_alpha(self) -> float:
        """The basis weight actually measured; separable-z mode pins it to 1."""
        return 1.0 if self.victor_mode == "separable-z" else self.victor_alpha

    @property
    def victor_tag(self) -> str:
        if self.victor_mode == "separable-z":
            return "separable-z"
        return f"alpha={self.victor_alpha:.12g}"


@dataclass(frozen=True)
class EventRecord:
    shot_id: int
    party: str
    time_ns: float
    setting_tag: str
    outcome: int

    def __post_init__(self):
        if self.party not in PARTIES:
            raise StateError(f"unknown party {self.party!r}")
        if self.party == "victor" and self.outcome not in (0, 1, 2, 3):
            raise StateError(f"victor outcome must be 0..3, got {self.outcome}")
        if self.party != "victor" and self.outcome not in (-1, 1):
            raise StateError(f"{self.party} outcome must be +-1, got {self.outcome}")


@dataclass(frozen=True)
class RunLog:
    """Per-shot outcomes, stored columnar; `events` materializes the
    three-records-per-shot view."""

    config: ExperimentConfig
    alice_outcomes: np.ndarray
    bob_outcomes: np.ndarray
    victor_outcomes: np.ndarray

    def __post_init__(self):
        for name in ("alice_outcomes", "bob_outcomes", "victor_outcomes"):
            arr = np.asarray(getattr(self, name), dtype=np.int8)
            if arr.shape != (self.config.shots,):
                raise StateError(f"{name} must have one entry per shot")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not np.all(np.isin(self.alice_outcomes, (-1, 1))):
            raise StateError("alice outcomes must be +-1")
        if not np.all(np.isin(self.bob_outcomes, (-1, 1))):
            raise StateError("bob outcomes must be +-1")
        if self.victor_outcomes.min() < 0 or self.victor_outcomes.max() > 3:
            raise StateError("victor outcomes must be 0..3")

    @property
    def shots(self) -> int:
        return self.config.shots

    @property
    def ab_time_ns(self) -> float:
        return self.config.timing.source_to_ab_ns

    @property
    def victor_time_ns(self) -> float:
        return self.config.timing.source_to_ab_ns + self.config.timing.victor_delay_ns

    def iter_events(self) -> Iterator[EventRecord]:
        cfg = self.config
        a_tag, b_tag = direction_tag(cfg.alice_dir), direction_tag(cfg.bob_dir)
        v_tag = cfg.victor_tag
        t_ab, t_v = self.ab_time_ns, self.victor_time_ns
        for i in range(self.shots):
            yield EventRecord(i, "alice", t_ab, a_tag, int(self.alice_outcomes[i]))
            yield EventRecord(i, "bob", t_ab, b_tag, int(self.bob_outcomes[i]))
            yield EventRecord(i, "victor", t_v, v_tag, int(self.victor_outcomes[i]))

    @property
    def events(self) -> list[EventRecord]:
        return list(self.iter_events())


def _measurement_bases(config: ExperimentConfig):
    alice = direction_basis(config.alice_dir, 0)
    bob = direction_basis(config.bob_dir, 3)
    victor = make_alpha_basis(config.effective_alpha).projective()
    return alice, bob, victor


def joint_distribution(config: ExperimentConfig) -> np.ndarray:
    """Born probabilities of the 16 joint outcomes, indexed (ka, kb, kv)."""
    alice, bob, victor = _measurement_bases(config)
    dist = born_distribution(make_total_state(), [alice, bob, victor])
    probs = np.zeros((2, 2, 4))
    for (ka, kb, kv), p in dist.items():
        probs[ka, kb, kv] = p
    return probs


def run_experiment(config: ExperimentConfig) -> RunLog:
    """Sample the configured number of shots; deterministic given the seed."""
    probs = joint_distribution(config).reshape(-1)
    probs = np.maximum(probs, 0.0)
    probs /= probs.sum()
    draws = np.empty(config.shots, dtype=np.int64)
    for block, start in enumerate(range(0, config.shots, SAMPLING_BLOCK)):
        stop = min(start + SAMPLING_BLOCK, config.shots)
        gen = _rng.stream(config.seed, "shots", block)
        draws[start:stop] = gen.choice(16, size=stop - start, p=probs)
    ka, kb, kv = draws >> 3, (draws >> 2) & 1, draws & 3
    return RunLog(config, 1 - 2 * ka, 1 - 2 * kb, kv)


def sort_by_victor(log: RunLog) -> dict[int, list[tuple[int, int]]]:
    """Partition the (alice, bob) outcome pairs by Victor's outcome."""
    subsets: dict[int, list[tuple[int, int]]] = {k: [] for k in range(4)}
    for k in range(4):
        mask = log.victor_outcomes == k
        subsets[k] = list(zip(log.alice_outcomes[mask].tolist(), log.bob_outcomes[mask].tolist()))
    return subsets


class CorrelationEstimate(NamedTuple):
    e_hat: float
    stderr: float
    n_samples: int


def conditional_correlation(log: RunLog, victor_outcome: int) -> CorrelationEstimate:
    """Sample mean of a*b over the shots with the given Victor outcome."""
    mask = log.victor_outcomes == victor_outcome
    n = int(mask.sum())
    if n == 0:
        raise InsufficientDataError(f"no shots with victor outcome {victor_outcome}")
    products = (log.alice_outcomes[mask] * log.bob_outcomes[mask]).astype(float)
    e_hat = float(products.mean())
    stderr = math.sqrt(max(0.0, 1.0 - e_hat**2) / n)
    return CorrelationEstimate(e_hat, stderr, n)


class ChshEstimate(NamedTuple):
    s_hat: float
    stderr: float


def delayed_chsh(config: ExperimentConfig, settings: Settings) -> dict[int, ChshEstimate]:
    """Bell-parameter estimate per Victor outcome from four sub-experiments,
    one per (alice, bob) setting pair, all sharing the victor configuration."""
    pairs = [
        (settings.a, settings.b),
        (settings.a, settings.b_prime),
        (settings.a_prime, settings.b),
        (settings.a_prime, settings.b_prime),
    ]
    estimates: list[dict[int, CorrelationEstimate]] = []
    for i, (a_dir, b_dir) in enumerate(pairs):
        sub_seed = int(_rng.stream(config.seed, "chsh-pair", i).integers(0, 2**63))
        sub = replace(config, alice_dir=a_dir, bob_dir=b_dir, seed=sub_seed)
        log = run_experiment(sub)
        estimates.append({k: conditional_correlation(log, k) for k in range(4)})
    results = {}
    for k in range(4):
        e = [estimates[i][k] for i in range(4)]
        s_hat = abs(e[0].e_hat + e[1].e_hat + e[2].e_hat - e[3].e_hat)
        stderr = math.sqrt(sum(x.stderr**2 for x in e))
        results[k] = ChshEstimate(s_hat, stderr)
    return results


@dataclass(frozen=True)
class OrderIndependenceReport:
    max_abs_diff: float
    victor_first: dict[tuple[int, int, int], float]
    parties_first: dict[tuple[int, int, int], float]

    @property
    def passed(self) -> bool:
        return self.max_abs_diff < 1e-12


def order_independence_check(config: ExperimentConfig) -> OrderIndependenceReport:
    """Joint distribution computed by projecting Victor first versus
    Alice/Bob first; the two must agree to floating-point accuracy."""
    alice, bob, victor = _measurement_bases(config)
    total = make_total_state()

    victor_first = {}
    for kv in range(4):
        p_v, post = project(total, victor, kv)
        cond = born_distribution(post, [alice, bob])
        for (ka, kb), p_ab in cond.items():
            victor_first[(ka, kb, kv)] = p_v * p_ab

    parties_first = {}
    for ka in range(2):
        p_a, post_a = project(total, alice, ka)
        for kb in range(2):
            p_b, post_ab = project(post_a, bob, kb)
            vic = outcome_probabilities(post_ab, victor)
            for kv in range(4):
                parties_first[(ka, kb, kv)] = p_a * p_b * float(vic[kv])

    diff = max(abs(victor_first[key] - parties_first[key]) for key in victor_first)
    return OrderIndependenceReport(diff, victor_first, parties_first)


# ---------------------------------------------------------------------------
# serialization

CSV_HEADER = ("shot_id", "party", "time_ns", "setting_tag", "outcome")


def write_runlog_csv(log: RunLog, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for ev in log.iter_events():
            writer.writerow([ev.shot_id, ev.party, f"{ev.time_ns:.12g}", ev.setting_tag, ev.outcome])


def read_runlog_csv(path) -> list[EventRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise StateError(f"unexpected header {header}")
        return [
            EventRecord(int(row[0]), row[1], float(row[2]), row[3], int(row[4])) for row in reader
        ]


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "victor_alpha": config.victor_alpha,
        "victor_mode": config.victor_mode,
        "alice_dir": [float(x) for x in config.alice_dir],
        "bob_dir": [float(x) for x in config.bob_dir],
        "shots": config.shots,
        "seed": config.seed,
        "timing": {
            "source_to_ab_ns": config.timing.source_to_ab_ns,
            "victor_delay_ns": config.timing.victor_delay_ns,
            "ab_to_victor_separation_ns": config.timing.ab_to_victor_separation_ns,
        },
    }


def summarize(log: RunLog) -> dict:
    """JSON-ready summary: configuration, outcome counts, and conditional
    correlation estimates keyed by Victor outcome name."""
    counts = {}
    conditional = {}
    for k, name in enumerate(OUTCOME_NAMES):
        n = int((log.victor_outcomes == k).sum())
        counts[name] = n
        if n:
            est = conditional_correlation(log, k)
            conditional[name] = {"e_hat": est.e_hat, "stderr": est.stderr, "n": est.n_samples}
        else:
            conditional[name] = {"e_hat": None, "stderr": None, "n": 0}
    return {
        "config": config_to_dict(log.config),
        "counts": counts,
        "conditional_estimates": conditional,
    }


def write_summary_json(summary: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
