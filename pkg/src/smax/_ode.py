"""RK4 marcher for the profile equations

    u'' / (1 - u'^2) + k u' / r = alpha / u,

with ``k = 0`` for translation profiles and ``k = n - 1`` for radial ones.

The state is ``(u, psi)`` with ``u' = tanh(psi)``; then ``psi' = alpha/u - k
tanh(psi)/r`` and ``1/(1 - u'^2) = cosh(psi)^2`` is available without the
cancellation that plagues ``1 - u'^2`` near a lightlike slope. The step is a
fixed fraction of the local length scales ``u/|alpha|`` and ``r/k``, so the
march slows down geometrically as it approaches ``u -> 0`` or ``r -> 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StepCollapse

ZERO_HEIGHT = "zero_height"
LIGHTLIKE_SLOPE = "lightlike_slope"
INFINITE = "infinite"
AXIS = "axis"
STOP = "stop"


@dataclass
class MarchOptions:
    eta: float = 4e-3
    r_max: float = 1e3
    eps_u: float = 1e-8
    eps_s: float = 1e-10
    r_axis: float = 1e-9
    max_steps: int = 2_000_000


def _rhs(alpha, k, r, u, psi):
    th = math.tanh(psi)
    dpsi = alpha / u
    if k:
        dpsi -= k * th / r
    return th, dpsi


def march(alpha: float, k: float, r0: float, u0: float, psi0: float, direction: int,
          opts: MarchOptions, r_stop: float | None = None):
    """March from ``r0`` in ``direction`` (+1/-1) until an endpoint event.

    With ``r_stop`` the march also ends, tagged ``"stop"``, exactly at that
    abscissa. Returns ``(rs, us, psis, tag)``; the first entry is the initial
    point.
    """
    rs, us, ps = [r0], [u0], [psi0]
    r, u, psi = r0, u0, psi0
    aa = abs(alpha) if alpha else 1e-300
    radial = k != 0
    tag = None
    for _ in range(opts.max_steps):
        if u < opts.eps_u:
            tag = LIGHTLIKE_SLOPE if 1.0 / math.cosh(psi) ** 2 < opts.eps_s else ZERO_HEIGHT
            break
        if abs(r) >= opts.r_max:
            tag = INFINITE
            break
        if radial and direction < 0 and r <= opts.r_axis:
            tag = AXIS
            break
        if r_stop is not None and direction * (r_stop - r) <= 0:
            tag = STOP
            break
        h = opts.eta * u / aa
        if radial:
            h = min(h, opts.eta * r / k)
        h = min(h, opts.r_max - abs(r)) if abs(r) + h > opts.r_max else h
        if r_stop is not None and h >= direction * (r_stop - r):
            h = direction * (r_stop - r)
        while True:
            if h < 1e-15 * (1.0 + abs(r)):
                raise StepCollapse(f"step underflow at r={r:.17g}, u={u:.3e}")
            s = direction * h
            try:
                k1 = _rhs(alpha, k, r, u, psi)
                k2 = _rhs(alpha, k, r + s / 2, u + s / 2 * k1[0], psi + s / 2 * k1[1])
                k3 = _rhs(alpha, k, r + s / 2, u + s / 2 * k2[0], psi + s / 2 * k2[1])
                k4 = _rhs(alpha, k, r + s, u + s * k3[0], psi + s * k3[1])
            except (ZeroDivisionError, OverflowError, ValueError):
                h /= 2
                continue
            un = u + s / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            pn = psi + s / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            if un > 0 and math.isfinite(un) and math.isfinite(pn):
                break
            h /= 2
        r, u, psi = r + s, un, pn
        if r_stop is not None and abs(r - r_stop) <= 1e-14 * (1.0 + abs(r_stop)):
            r = r_stop
        rs.append(r)
        us.append(u)
        ps.append(psi)
    else:
        raise StepCollapse("step budget exhausted before an endpoint event")
    return rs, us, ps, tag


def profile_upp(alpha, k, r, u, up):
    """``u''`` from the equation (``k u'/r`` replaced by its limit at ``r = 0``)."""
    w2 = 1.0 - up * up
    if k and r == 0:
        return alpha / ((k + 1) * u)
    return w2 * (alpha / u - (k * up / r if k else 0.0))
