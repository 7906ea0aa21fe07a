"""Seeded randomized stress-testing of the polygon inequalities.

Trials are seeded individually through :func:`mix64`, so a report depends
only on (seed, trials, config) and never on how trials are scheduled across
workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .inequalities import tau_hat_indicator, tau_indicator
from .measures import MeasureSpec, marginal_vector
from .states import MultiQuditState, generalized_ghz3, haar_random, star4, state_from_dict, state_to_dict
from .tensor import as_dims

HIST_BINS = 64
HIST_LO = -0.1
HIST_HI = 1.0
_MASK64 = (1 << 64) - 1


def mix64(seed: int, index: int) -> int:
    """Published per-trial seed mix: SplitMix64 finalizer of seed + golden-ratio steps.

    trial_seed = finalize((seed + (index + 1) * 0x9E3779B97F4A7C15) mod 2^64)
    with finalize(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31.
    """
    z = (int(seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SearchConfig:
    dims: tuple[int, ...]
    spec: MeasureSpec
    trials: int
    seed: int = 0
    tol: float = 1e-9
    record_worst: int = 4

    def __post_init__(self):
        object.__setattr__(self, "dims", as_dims(self.dims))
        if self.trials < 1:
            raise InvalidInputError("trials must be >= 1")
        if self.tol <= 0:
            raise InvalidInputError("tol must be > 0")
        if self.record_worst < 0:
            raise InvalidInputError("record_worst must be >= 0")


@dataclass(frozen=True)
class WorstState:
    """Provenance of one low-margin trial: seed, worst site, its margin, state."""

    trial: int
    seed: int
    site: int
    margin: float
    state: dict


@dataclass(frozen=True)
class ViolationReport:
    dims: tuple[int, ...]
    measure: str
    trials_run: int
    seed: int
    tol: float
    violations: int
    min_margin: float
    worst_states: tuple[WorstState, ...]
    histogram: tuple[int, ...]
    histogram_range: tuple[float, float] = (HIST_LO, HIST_HI)


def _hist_index(margin: float) -> int:
    frac = (margin - HIST_LO) / (HIST_HI - HIST_LO)
    return min(max(int(frac * HIST_BINS), 0), HIST_BINS - 1)


def _run_chunk(cfg: SearchConfig, start: int, stop: int):
    violations = 0
    min_margin = math.inf
    hist = np.zeros(HIST_BINS, dtype=np.int64)
    worst: list[tuple[float, int, int, int, dict]] = []
    for trial in range(start, stop):
        trial_seed = mix64(cfg.seed, trial)
        psi = haar_random(cfg.dims, trial_seed)
        mv = marginal_vector(psi, cfg.spec)
        total = float(np.sum(mv))
        margins = total - 2.0 * mv  # polygon slack at every site
        violations += int(np.count_nonzero(margins < -cfg.tol))
        for m in margins:
            hist[_hist_index(float(m))] += 1
        j = int(np.argmin(margins))
        worst_margin = float(margins[j])
        min_margin = min(min_margin, worst_margin)
        if cfg.record_worst > 0:
            worst.append((worst_margin, trial, trial_seed, j, state_to_dict(psi)))
            worst.sort(key=lambda t: (t[0], t[1]))
            del worst[cfg.record_worst:]
    return violations, min_margin, hist, worst


def fuzz_polygon(cfg: SearchConfig, workers: int = 1) -> ViolationReport:
    """Polygon-inequality fuzz over Haar-random states.

    Per trial t the state is ``haar_random(cfg.dims, mix64(cfg.seed, t))``
    and every one-to-group margin is accumulated.  The report is identical
    for any ``workers`` count.
    """
    if workers < 1:
        raise InvalidInputError("workers must be >= 1")
    chunk = math.ceil(cfg.trials / workers)
    bounds = [(lo, min(lo + chunk, cfg.trials)) for lo in range(0, cfg.trials, chunk)]
    if workers == 1 or len(bounds) == 1:
        parts = [_run_chunk(cfg, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, *zip(*[(cfg,) + b for b in bounds])))
    violations = sum(p[0] for p in parts)
    min_margin = min(p[1] for p in parts)
    hist = np.sum([p[2] for p in parts], axis=0)
    candidates = [w for p in parts for w in p[3]]
    candidates.sort(key=lambda t: (t[0], t[1]))
    worst = tuple(
        WorstState(trial=t, seed=s, site=j, margin=m, state=doc)
        for m, t, s, j, doc in candidates[:cfg.record_worst])
    return ViolationReport(
        dims=cfg.dims,
        measure=cfg.spec.label(),
        trials_run=cfg.trials,
        seed=cfg.seed,
        tol=cfg.tol,
        violations=violations,
        min_margin=float(min_margin),
        worst_states=worst,
        histogram=tuple(int(c) for c in hist),
    )


def recompute_margin(entry: WorstState, spec: MeasureSpec) -> float:
    """Reload a recorded worst state and recompute its polygon margin."""
    psi = state_from_dict(entry.state)
    mv = marginal_vector(psi, spec)
    return float(np.sum(mv) - 2.0 * mv[entry.site])


def report_to_dict(report: ViolationReport) -> dict:
    return {
        "dims": list(report.dims),
        "measure": report.measure,
        "trials_run": report.trials_run,
        "seed": report.seed,
        "tol": report.tol,
        "violations": report.violations,
        "min_margin": report.min_margin,
        "worst_states": [
            {"trial": w.trial, "seed": w.seed, "site": w.site,
             "margin": w.margin, "state": w.state}
            for w in report.worst_states
        ],
        "histogram": list(report.histogram),
        "histogram_range": list(report.histogram_range),
    }


def report_to_json(report: ViolationReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_from_dict(doc: dict) -> ViolationReport:
    try:
        return ViolationReport(
            dims=tuple(doc["dims"]),
            measure=doc["measure"],
            trials_run=doc["trials_run"],
            seed=doc["seed"],
            tol=doc["tol"],
            violations=doc["violations"],
            min_margin=doc["min_margin"],
            worst_states=tuple(
                WorstState(trial=w["trial"], seed=w["seed"], site=w["site"],
                           margin=w["margin"], state=w["state"])
                for w in doc["worst_states"]),
            histogram=tuple(doc["histogram"]),
            histogram_range=tuple(doc["histogram_range"]),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed report document: {exc}") from exc


def report_from_json(text: str) -> ViolationReport:
    try:
        return report_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed report JSON: {exc}") from exc


# -- parameter grid scans ------------------------------------------------------

SCAN_FAMILIES = ("generalized_ghz3", "w_interp", "star4")


def _w_interp_state(theta: float, phi: float) -> MultiQuditState:
    # Three-qubit single-excitation family: angle-weighted |100>, |010>, |001>.
    amps = np.zeros(8, dtype=np.complex128)
    amps[4] = math.sin(theta) * math.cos(phi)
    amps[2] = math.sin(theta) * math.sin(phi)
    amps[1] = math.cos(theta)
    nrm = np.linalg.norm(amps)
    return MultiQuditState((2, 2, 2), amps / nrm)


def _grid_shape(grid) -> tuple[int, int]:
    if isinstance(grid, int):
        return grid, grid
    n1, n2 = grid
    return int(n1), int(n2)


def grid_scan(family: str, grid, spec: MeasureSpec) -> list[tuple[float, float, float]]:
    """Deterministic indicator scan; rows are (param1, param2, value).

    Families:

    * ``generalized_ghz3``: tau over theta in [0, pi], phi in [0, 2 pi]
    * ``w_interp``: tau of the three-qubit single-excitation family, same box
    * ``star4``: tau-hat of the fixed hub state, scanning the measure
      parameter(s): q in [2, 9] for qconc (param2 = 0), (r, s) in
      [1, 9] x [0, 10] for unified
    """
    n1, n2 = _grid_shape(grid)
    if n1 < 2 or n2 < 2:
        raise InvalidInputError("grid resolution must be >= 2 per axis")
    rows: list[tuple[float, float, float]] = []
    if family in ("generalized_ghz3", "w_interp"):
        build = generalized_ghz3 if family == "generalized_ghz3" else _w_interp_state
        for theta in np.linspace(0.0, math.pi, n1):
            for phi in np.linspace(0.0, 2.0 * math.pi, n2):
                val = tau_indicator(build(float(theta), float(phi)), spec).value
                rows.append((float(theta), float(phi), val))
        return rows
    if family == "star4":
        psi = star4()
        if spec.kind == "qconc":
            for q in np.linspace(2.0, 9.0, n1):
                val = tau_hat_indicator(psi, None, MeasureSpec.qconcurrence(float(q))).value
                rows.append((float(q), 0.0, val))
            return rows
        if spec.kind == "unified":
            for r in np.linspace(1.0, 9.0, n1):
                for s in np.linspace(0.0, 10.0, n2):
                    val = tau_hat_indicator(
                        psi, None, MeasureSpec.unified(float(r), float(s))).value
                    rows.append((float(r), float(s), val))
            return rows
        raise InvalidInputError("star4 scans vary the measure parameter; use qconc or unified")
    raise InvalidInputError(
        f"unknown scan family {family!r}; expected one of {', '.join(SCAN_FAMILIES)}")
