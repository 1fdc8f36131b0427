"""Least-squares conversion of a 40-band graphic curve to 6-band
parametric form, matching log-magnitude responses on a fixed frequency
grid. Damped Gauss-Newton over [6 gains, 6 log-frequencies, 6 log-Q];
always returns the best parameters found plus the residual RMS in dB.
"""

from __future__ import annotations

import numpy as np

from ..eq import graphic_sections, high_shelf, low_shelf, peaking, response_db
from ..params import (
    CUTOFF_RANGE,
    GAIN_DB_RANGE,
    Q_RANGE,
    EqParams,
    GraphicEqParams,
    max_cutoff,
)

NUM_FREQS = 128
MAX_ITERS = 200
_SECTION_KEYS = ["low_shelf", "band1", "band2", "band3", "band4", "high_shelf"]


def _theta_bounds(sample_rate: int) -> tuple[np.ndarray, np.ndarray]:
    lo = np.concatenate([
        np.full(6, GAIN_DB_RANGE[0]),
        np.full(6, np.log(CUTOFF_RANGE[0])),
        np.full(6, np.log(Q_RANGE[0])),
    ])
    hi = np.concatenate([
        np.full(6, GAIN_DB_RANGE[1]),
        np.full(6, np.log(max_cutoff(sample_rate))),
        np.full(6, np.log(Q_RANGE[1])),
    ])
    return lo, hi


def _materialize(theta: np.ndarray, sample_rate: int) -> EqParams:
    # exp(log(bound)) can overshoot the bound by one ulp, so re-clip in
    # linear space; otherwise a fit that saturates q or cutoff fails
    # validation downstream.
    gains = np.clip(theta[:6], *GAIN_DB_RANGE)
    cutoffs = np.clip(np.exp(theta[6:12]), CUTOFF_RANGE[0], max_cutoff(sample_rate))
    qs = np.clip(np.exp(theta[12:]), *Q_RANGE)
    values = {}
    for i, section in enumerate(_SECTION_KEYS):
        values[f"{section}_gain_db"] = float(gains[i])
        values[f"{section}_cutoff_freq"] = float(cutoffs[i])
        values[f"{section}_q"] = float(qs[i])
    return EqParams.from_dict(values)


def _theta_from_centers(centers: np.ndarray, qs: np.ndarray, target: np.ndarray,
                        freqs: np.ndarray, sample_rate: int) -> np.ndarray:
    centers = np.clip(centers, CUTOFF_RANGE[0], max_cutoff(sample_rate))
    # Seeding gains from the target at each center starts the search on
    # the right side of every band's sign.
    gains = np.interp(np.log(centers), np.log(freqs), target)
    gains = np.clip(0.7 * gains, *GAIN_DB_RANGE)
    return np.concatenate([gains, np.log(centers), np.log(qs)])


def _peak_centers(target: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    """The four most prominent interior extrema of the target curve."""
    interior = np.arange(1, len(target) - 1)
    is_extremum = ((target[interior] - target[interior - 1])
                   * (target[interior + 1] - target[interior]) <= 0)
    candidates = interior[is_extremum]
    if len(candidates) < 4:
        return np.geomspace(120.0, 6000.0, 6)[1:-1]
    ranked = candidates[np.argsort(-np.abs(target[candidates]))][:4]
    return np.sort(freqs[ranked])


def _starting_points(target: np.ndarray, freqs: np.ndarray,
                     sample_rate: int) -> list[np.ndarray]:
    shelf_q = np.array([0.707, 0.707])
    spaced = np.concatenate([[120.0], np.geomspace(120.0, 6000.0, 6)[1:-1], [6000.0]])
    extrema = np.concatenate([[80.0], _peak_centers(target, freqs), [9000.0]])
    starts = [
        _theta_from_centers(spaced, np.concatenate([shelf_q[:1], np.ones(4), shelf_q[1:]]),
                            target, freqs, sample_rate),
        _theta_from_centers(extrema, np.concatenate([shelf_q[:1], np.full(4, 1.4), shelf_q[1:]]),
                            target, freqs, sample_rate),
    ]
    rng = np.random.default_rng(0)
    for _ in range(3):
        wobble = spaced * np.exp(rng.uniform(-0.5, 0.5, 6))
        starts.append(_theta_from_centers(
            np.sort(wobble), np.exp(rng.uniform(np.log(0.5), np.log(2.5), 6)),
            target, freqs, sample_rate))
    return starts


def fit_parametric_from_graphic(
    g: GraphicEqParams, sample_rate: int = 44100,
) -> tuple[EqParams, float]:
    """Fit the 6-band response to the graphic curve.

    Returns:
        (best EqParams, residual RMS in dB over the evaluation grid).
    """
    g.validate()
    freqs = np.geomspace(20.0, max_cutoff(sample_rate), NUM_FREQS)
    target = response_db(graphic_sections(g, sample_rate), freqs, sample_rate)
    lo, hi = _theta_bounds(sample_rate)
    eps = np.concatenate([np.full(6, 1e-3), np.full(12, 1e-4)])
    builders = [low_shelf, peaking, peaking, peaking, peaking, high_shelf]

    def section_response(s: int, theta: np.ndarray) -> np.ndarray:
        sos = builders[s](float(np.exp(theta[6 + s])), float(np.exp(theta[12 + s])),
                          float(theta[s]), sample_rate)
        return response_db(sos[np.newaxis, :], freqs, sample_rate)

    def all_sections(theta: np.ndarray) -> np.ndarray:
        return np.stack([section_response(s, theta) for s in range(6)])

    def descend(theta: np.ndarray) -> tuple[np.ndarray, float]:
        sections = all_sections(theta)
        r = sections.sum(axis=0) - target
        cost = float(r @ r)
        lam = 1e-3
        for _ in range(MAX_ITERS):
            if cost < 1e-10:
                break
            # The model is a sum of per-section dB curves, so each
            # parameter's column only needs its own section re-evaluated.
            jac = np.empty((NUM_FREQS, len(theta)))
            for j in range(len(theta)):
                step = np.zeros_like(theta)
                step[j] = eps[j]
                bumped = np.clip(theta + step, lo, hi)
                s = j % 6
                jac[:, j] = (section_response(s, bumped) - sections[s]) / eps[j]
            jtj = jac.T @ jac
            jtr = jac.T @ r
            improved = False
            for _ in range(8):
                damped = jtj + lam * np.diag(np.diag(jtj)) + 1e-12 * np.eye(len(theta))
                try:
                    delta = np.linalg.solve(damped, -jtr)
                except np.linalg.LinAlgError:
                    lam *= 4.0
                    continue
                candidate = np.clip(theta + delta, lo, hi)
                sections_new = all_sections(candidate)
                r_new = sections_new.sum(axis=0) - target
                cost_new = float(r_new @ r_new)
                if cost_new < cost - 1e-12:
                    theta, sections, r, cost = candidate, sections_new, r_new, cost_new
                    lam = max(lam / 3.0, 1e-9)
                    improved = True
                    break
                lam *= 4.0
            if not improved:
                break
        return theta, cost

    # Several deterministic starts; band-to-feature assignment is the
    # local-minimum trap, not the local polish.
    best_theta, best_cost = None, np.inf
    for start in _starting_points(target, freqs, sample_rate):
        theta, cost = descend(start)
        if cost < best_cost:
            best_theta, best_cost = theta, cost
        if np.sqrt(best_cost / NUM_FREQS) < 0.3:
            break

    # Kicks out of shallow minima: perturb the best answer and redescend.
    rng = np.random.default_rng(1)
    for _ in range(4):
        if np.sqrt(best_cost / NUM_FREQS) < 0.3:
            break
        kick = np.concatenate([rng.uniform(-1.5, 1.5, 6),
                               rng.uniform(-0.3, 0.3, 6),
                               rng.uniform(-0.3, 0.3, 6)])
        theta, cost = descend(np.clip(best_theta + kick, lo, hi))
        if cost < best_cost:
            best_theta, best_cost = theta, cost

    params = _materialize(best_theta, sample_rate)
    rms = float(np.sqrt(best_cost / NUM_FREQS))
    return params, rms
