import logging
import numpy as np
from scipy.optimize import root
from typing import Optional
from ..exceptions import ConstructionError, DomainError
from ..schedule import Profile


def _clamped_moments(q: np.ndarray, w: np.ndarray, t_end: float,
                     level: float, slope: float):
    m = np.maximum(level + slope * q, 0.0)
    mean = float(np.sum(w * m) / t_end)
    std = float(np.sqrt(np.sum(w * (m - mean) ** 2) / t_end))
    return m, mean, std


def make_proportional_flow(q_profile: Profile, mean_flow: float,
                           target_cov_pct: float,
                           t_end: Optional[float] = None) -> Profile:
    """Builds m_dot(t) = m_mean * (1 + c * (q(t) - q_mean) / q_std) with
    c = target_cov / 100, which has the requested time-weighted mean and
    coefficient of variation over [0, t_end]. When that map would go
    negative the affine map is re-solved with the clamp at zero active.

    A zero-order-hold profile holds its last value forever, so the moments
    need a horizon: `t_end` is the end of the run the flow drives. Without
    it the horizon is the last breakpoint of `q_profile` and the final
    held value does not count."""
    if not mean_flow > 0.0:
        raise DomainError(f'mean flow must be > 0, got {mean_flow}')
    if target_cov_pct < 0.0:
        raise DomainError(f'target CoV must be >= 0, got {target_cov_pct}')
    if target_cov_pct == 0.0:
        return Profile.constant(mean_flow)

    if t_end is None:
        t_end = float(q_profile.times[-1])
    if not t_end > 0.0:
        raise ConstructionError(
            'a single breakpoint gives no horizon for the flow moments')
    q_mean, q_std = q_profile.moments(t_end)
    if q_std == 0.0:
        raise ConstructionError(
            'a constant heat profile cannot produce a varying flow')

    q = q_profile.values
    w = q_profile.durations(t_end)
    c = target_cov_pct / 100.0
    slope = mean_flow * c / q_std
    level = mean_flow - slope * q_mean
    if np.all(level + slope * q[w > 0.0] >= 0.0):
        return Profile(q_profile.times,
                       np.maximum(level + slope * q, 0.0))

    logging.info(f'flow clamps at zero for CoV {target_cov_pct}%, '
                 f're-solving')
    target_std = mean_flow * c

    def residual(x):
        _, mean, std = _clamped_moments(q, w, t_end, x[0], x[1])
        return [mean / mean_flow - 1.0, std / target_std - 1.0]

    sol = root(residual, [level, slope], method='hybr')
    m, mean, std = _clamped_moments(q, w, t_end, *sol.x)
    if not sol.success or abs(mean - mean_flow) > 1e-9 or \
            abs(std / mean * 100.0 - target_cov_pct) > 0.1:
        raise ConstructionError(
            f'flow CoV of {target_cov_pct}% with mean {mean_flow} kg/s is '
            f'not attainable from this heat profile')
    return Profile(q_profile.times, m)
