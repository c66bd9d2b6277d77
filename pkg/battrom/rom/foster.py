"""Foster network (sum of first-order lags) identification.

The normalized step response is fitted with
    g(t) = sum_i g_i * (1 - exp(-t / tau_i))
using a separable least-squares formulation: for given time constants the
gains follow from a linear solve, so the optimizer only moves log(tau).
"""
from __future__ import annotations
import json
import logging
import numpy as np
from dataclasses import dataclass
from scipy.optimize import least_squares
from typing import List, Optional, Sequence
from .response import StepResponse
from ..exceptions import DomainError, FitError
from ..schedule import SchedulePoint

DEFAULT_ORDER = 4
MAX_NFEV = 2000
RESTARTS = 4
# fitted time constants stay at least this ratio apart
MIN_TAU_RATIO = 1.1
# given time constants closer than this ratio are merged
COLLAPSE_RATIO = 1.01


@dataclass(frozen=True, eq=False)
class FosterLtiModel:
    gains: np.ndarray  # K m3/W
    taus: np.ndarray  # s, strictly decreasing
    op: SchedulePoint
    t0_temperature: float  # K
    fit_rms: float = 0.0  # K m3/W

    def __post_init__(self):
        gains = np.array(self.gains, dtype=float)
        taus = np.array(self.taus, dtype=float)
        if gains.ndim != 1 or gains.size < 1 or gains.shape != taus.shape:
            raise DomainError('Foster model needs order >= 1 with one gain '
                              'per time constant')
        if np.any(taus <= 0.0) or not np.all(np.isfinite(taus)):
            raise DomainError('time constants must be finite and > 0')
        if np.any(np.diff(taus) >= 0.0):
            raise DomainError('time constants must be strictly decreasing')
        gains.flags.writeable = False
        taus.flags.writeable = False
        object.__setattr__(self, 'gains', gains)
        object.__setattr__(self, 'taus', taus)

    @property
    def order(self) -> int:
        return self.gains.size

    def step_response(self, t: np.ndarray) -> np.ndarray:
        """Normalized response to a unit q_gen step, K m3/W."""
        return design_matrix(np.asarray(t, dtype=float), self.taus) @ \
            self.gains

    def to_dict(self) -> dict:
        return {
            'order': self.order,
            'gains': self.gains.tolist(),
            'taus': self.taus.tolist(),
            'op': self.op.to_dict(),
            't0': self.t0_temperature,
            'fit_rms': self.fit_rms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> FosterLtiModel:
        try:
            model = cls(data['gains'], data['taus'],
                        SchedulePoint.from_dict(data['op']),
                        float(data['t0']), float(data.get('fit_rms', 0.0)))
        except (KeyError, TypeError) as e:
            raise DomainError(f'invalid Foster model document: {e}')
        if 'order' in data and data['order'] != model.order:
            raise DomainError('Foster model order does not match its gains')
        return model


def save_model(model: FosterLtiModel, path: str):
    with open(path, 'w') as fp:
        json.dump(model.to_dict(), fp, indent=2)


def load_model(path: str) -> FosterLtiModel:
    with open(path, 'r') as fp:
        return FosterLtiModel.from_dict(json.load(fp))


def design_matrix(t: np.ndarray, taus: np.ndarray) -> np.ndarray:
    return -np.expm1(-t[:, None] / taus[None, :])


def _gains(phi: np.ndarray, y: np.ndarray) -> np.ndarray:
    g, *_ = np.linalg.lstsq(phi, y, rcond=None)
    return g


# The optimizer moves z: z[0] is log of the smallest time constant and
# every next one sits a factor MIN_TAU_RATIO * (1 + exp(z[k])) higher, so
# neighbouring time constants can never meet.
_LOG_MIN_RATIO = float(np.log(MIN_TAU_RATIO))


def _to_log_taus(z: np.ndarray) -> np.ndarray:
    steps = _LOG_MIN_RATIO + np.log1p(np.exp(z[1:]))
    return np.concatenate(([z[0]], z[0] + np.cumsum(steps)))[::-1]


def _from_log_taus(log_taus: np.ndarray) -> np.ndarray:
    ascending = np.sort(log_taus)
    extra = np.maximum(np.diff(ascending) - _LOG_MIN_RATIO, 1e-6)
    return np.concatenate(([ascending[0]], np.log(np.expm1(extra))))


def _initial_z(t: np.ndarray, order: int) -> np.ndarray:
    lo = t[t > 0.0][0]
    return _from_log_taus(np.log(np.geomspace(lo, t[-1], order + 2)[1:-1]))


def _optimize(t: np.ndarray, y: np.ndarray, order: int, seed: Optional[int],
              restarts: int, max_nfev: int) -> np.ndarray:
    """Returns the best time constants (descending) for the (scaled)
    columns of y."""
    lo = np.log(t[t > 0.0][0] / 10.0)
    hi = np.log(t[-1] * 10.0)
    lower = np.full(order, -20.0)
    upper = np.full(order, np.log(hi - lo))
    lower[0], upper[0] = lo, hi

    def residual(z):
        phi = design_matrix(t, np.exp(_to_log_taus(z)))
        return (phi @ _gains(phi, y) - y).ravel()

    rng = np.random.default_rng(seed)
    z0 = _initial_z(t, order)
    best = fallback = None
    for attempt in range(restarts + 1):
        start = z0 if attempt == 0 else z0 + rng.normal(0.0, 0.5, order)
        start = np.clip(start, lower + 1e-6, upper - 1e-6)
        res = least_squares(residual, start, bounds=(lower, upper),
                            jac='3-point', xtol=1e-12, ftol=1e-12,
                            gtol=1e-12, max_nfev=max_nfev)
        if res.status > 0:
            if best is None or res.cost < best.cost:
                best = res
        elif fallback is None or res.cost < fallback.cost:
            fallback = res
    if best is None:
        assert fallback is not None
        raise FitError(
            f'Foster fit of order {order} did not converge within '
            f'{max_nfev} evaluations',
            best=np.exp(_to_log_taus(fallback.x)))
    return np.exp(_to_log_taus(best.x))


def _collapse(taus: np.ndarray) -> np.ndarray:
    taus = np.sort(taus)[::-1]
    keep = [taus[0]]
    for tau in taus[1:]:
        if keep[-1] / tau < COLLAPSE_RATIO:
            keep[-1] = np.sqrt(keep[-1] * tau)
        else:
            keep.append(tau)
    return np.array(keep)


def pad_taus(taus: Sequence[float], order: int) -> np.ndarray:
    """Appends faster time constants until `order` are present."""
    taus = list(np.sort(np.asarray(taus, dtype=float))[::-1])
    while len(taus) < order:
        taus.append(taus[-1] / MIN_TAU_RATIO ** 2)
    return np.array(taus)


def pad_order(model: FosterLtiModel, order: int) -> FosterLtiModel:
    """Restores `order` modes with zero-gain fast modes; the response is
    unchanged."""
    if model.order >= order:
        return model
    logging.warning(f'{model.op!r}: padding order {model.order} to {order} '
                    f'with zero-gain modes')
    gains = np.concatenate((model.gains, np.zeros(order - model.order)))
    return FosterLtiModel(gains, pad_taus(model.taus, order), model.op,
                          model.t0_temperature, model.fit_rms)


def _finish(resp: StepResponse, taus: np.ndarray) -> FosterLtiModel:
    y = resp.normalized
    phi = design_matrix(resp.times, taus)
    gains = _gains(phi, y)
    rms = float(np.sqrt(np.mean((phi @ gains - y) ** 2)))
    return FosterLtiModel(gains, taus, resp.op, resp.t0_temperature, rms)


def _check_samples(resp: StepResponse, order: int):
    if order < 1:
        raise DomainError(f'order must be >= 1, got {order}')
    if resp.times.size < 4 * order:
        raise DomainError(
            f'{resp.times.size} samples are too few for order {order}')


def _reduce(taus: np.ndarray, what: str) -> np.ndarray:
    reduced = _collapse(taus)
    if reduced.size < taus.size:
        logging.warning(
            f'{what}: collapsing time constants, order reduced from '
            f'{taus.size} to {reduced.size}')
    return reduced


def fit_foster(resp: StepResponse, order: int = DEFAULT_ORDER,
               seed: Optional[int] = 0,
               taus: Optional[Sequence[float]] = None,
               restarts: int = RESTARTS,
               max_nfev: int = MAX_NFEV) -> FosterLtiModel:
    """Fits an order-N Foster model to the normalized step response.

    With `taus` only the gains are solved; time constants closer than
    COLLAPSE_RATIO are merged first. Otherwise the time constants start
    log-spaced over the sampled horizon and stay at least MIN_TAU_RATIO
    apart; `restarts` extra starts are perturbed with a generator seeded
    by `seed`.
    """
    if taus is not None:
        taus = _reduce(np.asarray(taus, dtype=float), repr(resp.op))
        _check_samples(resp, taus.size)
        return _finish(resp, taus)

    _check_samples(resp, order)
    y = resp.normalized
    scale = float(np.max(np.abs(y))) or 1.0
    try:
        found = _optimize(resp.times, (y / scale)[:, None], order, seed,
                          restarts, max_nfev)
    except FitError as e:
        e.best = _finish(resp, e.best)
        raise
    return _finish(resp, found)


def fit_foster_joint(responses: Sequence[StepResponse],
                     order: int = DEFAULT_ORDER,
                     seed: Optional[int] = 0,
                     restarts: int = RESTARTS,
                     max_nfev: int = MAX_NFEV) -> List[FosterLtiModel]:
    """Fits one set of time constants shared by all responses (which must
    have the same time base); gains are solved per response. Each response
    is scaled by its peak magnitude so all weigh equally."""
    if not responses:
        raise DomainError('joint fit needs at least one response')
    t = responses[0].times
    for resp in responses:
        if not np.array_equal(resp.times, t):
            raise DomainError('joint fit needs identical time bases')
        _check_samples(resp, order)

    y = np.column_stack([r.normalized for r in responses])
    scale = np.max(np.abs(y), axis=0)
    scale[scale == 0.0] = 1.0
    try:
        taus = _optimize(t, y / scale, order, seed, restarts, max_nfev)
    except FitError as e:
        e.best = [_finish(r, e.best) for r in responses]
        raise
    return [_finish(r, taus) for r in responses]


def relative_fit_error(model: FosterLtiModel, resp: StepResponse) -> float:
    """fit_rms relative to the magnitude of the final normalized value
    (inf when the response ends at zero)."""
    final = abs(float(resp.normalized[-1]))
    return model.fit_rms / final if final > 0.0 else float('inf')
