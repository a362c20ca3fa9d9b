"""
Closed paths on the unit sphere of control angles ``(alpha, beta)``.

``alpha`` is the polar angle, ``beta`` the azimuth. A path starts and ends at
the north pole (``alpha = 0``); the gate it produces rotates by half the solid
angle it encloses, and the time needed to traverse it at fixed speed is
proportional to its length.

A :class:`SpherePath` is an ordered list of :class:`Segment` pieces, each a
smooth map ``u in [0, 1] -> (alpha, beta)`` traversed in a given duration.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "PathError",
    "Segment",
    "SpherePath",
    "ReparametrizedPath",
    "Schedule",
    "PathReport",
    "meridian",
    "parallel",
    "great_arc",
    "cap_circle",
    "curve",
    "orange_slice",
    "three_arc",
    "minimal_circle",
    "minimal_length",
    "time_ratio",
    "path_length",
    "enclosed_angle",
    "path_report",
    "reparametrize",
    "constant_speed_duration",
    "polygon_excess_oracle",
    "cap_area_oracle",
    "circle_equation_residual",
    "identity_schedule",
    "sin2_schedule",
    "scaled_schedule",
    "cubic_schedule",
    "path_from_json",
    "schedule_from_json",
]

TWO_PI = 2.0 * math.pi
_POLE_TOL = 1e-9
_QUAD_OPTS = dict(epsabs=1e-14, epsrel=1e-12, limit=400)


class PathError(ValueError):
    """Invalid path geometry or parameters."""


def _wrap_angle(x):
    """Normalize into ``[0, 2 pi)``."""
    y = math.fmod(x, TWO_PI)
    if y < 0.0:
        y += TWO_PI
    # fmod of a value a hair below 2 pi can round up to exactly 2 pi
    return 0.0 if y >= TWO_PI else y


@dataclass(frozen=True)
class Segment:
    """
    One smooth piece of a path.

    ``alpha``, ``beta`` and their ``u``-derivatives ``dalpha``, ``dbeta`` are
    callables on ``u in [0, 1]``. ``kind`` and ``params`` describe how the
    piece was built so it can be written back to JSON.
    """

    kind: str
    params: dict
    duration: float
    alpha: Callable = field(repr=False, compare=False)
    beta: Callable = field(repr=False, compare=False)
    dalpha: Callable = field(repr=False, compare=False)
    dbeta: Callable = field(repr=False, compare=False)

    def start(self):
        return float(self.alpha(0.0)), float(self.beta(0.0))

    def end(self):
        return float(self.alpha(1.0)), float(self.beta(1.0))

    def with_duration(self, duration):
        return Segment(self.kind, self.params, float(duration),
                       self.alpha, self.beta, self.dalpha, self.dbeta)

    def to_json(self):
        if self.kind == "curve":
            raise PathError("curve segments built from callables cannot be serialized")
        return {"kind": self.kind, "params": dict(self.params), "duration": self.duration}


def _default_duration(length, sweep):
    # zero-length sweeps (at a pole) still need positive time to be integrable
    return length if length > 0.0 else abs(sweep)


def meridian(beta, alpha0, alpha1, duration=None):
    """Arc at fixed azimuth ``beta`` from polar angle ``alpha0`` to ``alpha1``."""
    beta, alpha0, alpha1 = float(beta), float(alpha0), float(alpha1)
    for a in (alpha0, alpha1):
        if not 0.0 <= a <= math.pi:
            raise PathError(f"polar angle {a} outside [0, pi]")
    da = alpha1 - alpha0
    if duration is None:
        duration = abs(da)
    return Segment(
        "meridian",
        {"beta": beta, "alpha0": alpha0, "alpha1": alpha1},
        float(duration),
        alpha=lambda u: alpha0 + da * u,
        beta=lambda u: beta,
        dalpha=lambda u: da,
        dbeta=lambda u: 0.0,
    )


def parallel(alpha, beta0, beta1, duration=None):
    """Arc at fixed polar angle ``alpha`` from azimuth ``beta0`` to ``beta1``."""
    alpha, beta0, beta1 = float(alpha), float(beta0), float(beta1)
    if not 0.0 <= alpha <= math.pi:
        raise PathError(f"polar angle {alpha} outside [0, pi]")
    db = beta1 - beta0
    # sin(pi) is not exactly zero in floating point
    s = 0.0 if alpha in (0.0, math.pi) else math.sin(alpha)
    if duration is None:
        duration = _default_duration(abs(db) * s, db)
    return Segment(
        "parallel",
        {"alpha": alpha, "beta0": beta0, "beta1": beta1},
        float(duration),
        alpha=lambda u: alpha,
        beta=lambda u: beta0 + db * u,
        dalpha=lambda u: 0.0,
        dbeta=lambda u: db,
    )


def _cartesian(alpha, beta):
    sa = math.sin(alpha)
    return np.array([sa * math.cos(beta), sa * math.sin(beta), math.cos(alpha)])


def great_arc(start, end, duration=None):
    """
    Shortest great-circle arc between two ``(alpha, beta)`` points.

    Arcs touching a pole at one end are meridians. Arcs that would cross a
    pole in their interior, or join antipodal points, are rejected.
    """
    a0, b0 = map(float, start)
    a1, b1 = map(float, end)
    p0, p1 = _cartesian(a0, b0), _cartesian(a1, b1)
    cos_omega = float(np.clip(p0 @ p1, -1.0, 1.0))
    omega = math.acos(cos_omega)
    if math.pi - omega < 1e-9:
        raise PathError("great arc between antipodal points is not unique")
    pole0 = math.sin(a0) < _POLE_TOL
    pole1 = math.sin(a1) < _POLE_TOL
    if pole0 and pole1:
        if omega < _POLE_TOL:
            raise PathError("degenerate arc: both endpoints at the same pole")
        raise PathError("arc between the two poles is not unique")
    if pole0 or pole1:
        beta = b1 if pole0 else b0
        snap0 = (0.0 if a0 < 1.0 else math.pi) if pole0 else a0
        snap1 = (0.0 if a1 < 1.0 else math.pi) if pole1 else a1
        seg = meridian(beta, snap0, snap1, duration)
        return Segment("great_arc", {"start": [a0, b0], "end": [a1, b1]}, seg.duration,
                       seg.alpha, seg.beta, seg.dalpha, seg.dbeta)
    if omega < 1e-15:
        raise PathError("degenerate arc: coincident endpoints")
    # an interior pole crossing shows up as the arc's plane containing the z axis
    # with the pole lying between the endpoints
    normal = np.cross(p0, p1)
    for pole in (np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0])):
        if abs(normal @ pole) < 1e-12 * np.linalg.norm(normal):
            ang0 = math.acos(float(np.clip(p0 @ pole, -1, 1)))
            ang1 = math.acos(float(np.clip(p1 @ pole, -1, 1)))
            if abs(ang0 + ang1 - omega) < 1e-9:
                raise PathError("great arc crosses a pole; split it there")
    sin_omega = math.sin(omega)

    def point(u):
        return (math.sin((1 - u) * omega) * p0 + math.sin(u * omega) * p1) / sin_omega

    def velocity(u):
        return omega * (-math.cos((1 - u) * omega) * p0 + math.cos(u * omega) * p1) / sin_omega

    def alpha(u):
        x, y, z = point(u)
        return math.atan2(math.hypot(x, y), z)

    def beta(u):
        x, y, _ = point(u)
        # continuous branch anchored at b0; the arc sweeps less than pi in azimuth
        c, s = math.cos(b0), math.sin(b0)
        return b0 + math.atan2(-s * x + c * y, c * x + s * y)

    def dalpha(u):
        (x, y, z), (dx, dy, dz) = point(u), velocity(u)
        rho = math.hypot(x, y)
        drho = (x * dx + y * dy) / rho
        return (z * drho - rho * dz) / (rho * rho + z * z)

    def dbeta(u):
        (x, y, _), (dx, dy, _) = point(u), velocity(u)
        return (x * dy - y * dx) / (x * x + y * y)

    if duration is None:
        duration = omega
    return Segment("great_arc", {"start": [a0, b0], "end": [a1, b1]}, float(duration),
                   alpha, beta, dalpha, dbeta)


def cap_circle(phi, rotation=0.0, duration=None):
    """
    Small circle through the north pole enclosing solid angle ``2 phi``.

    The circle has angular radius ``rho = arccos(1 - phi / pi)`` and centre at
    ``(rho, rotation)``. It is traversed once, counterclockwise about its
    centre, starting and ending at the pole. ``phi = pi`` is the great circle
    through both poles and is returned by :func:`minimal_circle` as a meridian
    pair instead.

    Returns
    -------
    Segment
    """
    phi, rotation = float(phi), float(rotation)
    if not 0.0 < phi < TWO_PI or phi == math.pi:
        raise PathError(f"cap_circle needs 0 < phi < 2 pi, phi != pi; got {phi}")
    cos_rho = 1.0 - phi / math.pi
    sin_rho = math.sqrt(max(0.0, 1.0 - cos_rho * cos_rho))
    two_pi = TWO_PI

    # with s = 2 pi u the curve angle about the centre:
    #   sin(alpha / 2) = sin(rho) sin(s / 2)
    #   beta = rotation - pi / 2 + atan2(cos(rho) sin(s / 2), cos(s / 2))
    def alpha(u):
        return 2.0 * math.asin(min(1.0, sin_rho * math.sin(math.pi * u)))

    def beta(u):
        h = math.pi * u
        return rotation - 0.5 * math.pi + math.atan2(cos_rho * math.sin(h), math.cos(h))

    def dalpha(u):
        h = math.pi * u
        sh = math.sin(h)
        return two_pi * sin_rho * math.cos(h) / math.sqrt(1.0 - (sin_rho * sh) ** 2)

    def dbeta(u):
        sh = math.sin(math.pi * u)
        return two_pi * 0.5 * cos_rho / (1.0 - (sin_rho * sh) ** 2)

    if duration is None:
        duration = two_pi * sin_rho
    return Segment("cap_circle", {"phi": phi, "rotation": rotation}, float(duration),
                   alpha, beta, dalpha, dbeta)


def curve(alpha, beta, dalpha, dbeta, duration, **params):
    """Wrap user callables on ``u in [0, 1]`` as a segment."""
    return Segment("curve", params, float(duration), alpha, beta, dalpha, dbeta)


class _PathBase:
    """Shared sampling helpers for paths exposing ``rates(t)``."""

    duration: float

    def point(self, t):
        a, b, _, _ = self.rates(t)
        return a, b

    def sample(self, n=1001):
        """Return arrays ``t, alpha, beta`` on ``n`` uniform nodes."""
        t = np.linspace(0.0, self.duration, n)
        ab = np.array([self.point(x) for x in t])
        return t, ab[:, 0], ab[:, 1]

    @property
    def is_closed(self):
        a0, _ = self.point(0.0)
        a1, _ = self.point(self.duration)
        return abs(a0) <= _POLE_TOL and abs(a1) <= _POLE_TOL

    def trace_csv(self, n=1001):
        t, a, b = self.sample(n)
        lines = ["t,alpha,beta"]
        lines += [f"{x!r},{y!r},{z!r}" for x, y, z in zip(t, a, b)]
        return "\n".join(lines) + "\n"


class SpherePath(_PathBase):
    """
    Piecewise-smooth path ``t -> (alpha(t), beta(t))``.

    Parameters
    ----------
    segments : sequence of Segment
        Pieces traversed in order; each contributes its ``duration``.

    Notes
    -----
    Junctions must agree in ``alpha`` and, away from the poles, in
    ``exp(i beta)``. Paths need not be closed; operations that need a closed
    path check :attr:`is_closed` themselves.
    """

    def __init__(self, segments):
        segments = tuple(segments)
        if not segments:
            raise PathError("a path needs at least one segment")
        for seg in segments:
            if not seg.duration > 0.0:
                raise PathError(f"segment {seg.kind} has non-positive duration {seg.duration}")
        for i, (left, right) in enumerate(zip(segments, segments[1:])):
            a0, b0 = left.end()
            a1, b1 = right.start()
            if abs(a0 - a1) > _POLE_TOL:
                raise PathError(f"discontinuous alpha at junction {i}: {a0} vs {a1}")
            if math.sin(a0) > _POLE_TOL and abs(np.exp(1j * b0) - np.exp(1j * b1)) > _POLE_TOL:
                raise PathError(f"discontinuous beta at junction {i}: {b0} vs {b1}")
        self.segments = segments
        self._starts = np.concatenate(([0.0], np.cumsum([s.duration for s in segments])))
        self.duration = float(self._starts[-1])

    @property
    def breakpoints(self):
        return self._starts.copy()

    def rates(self, t):
        """Return ``(alpha, beta, dalpha/dt, dbeta/dt)`` at time ``t``."""
        i = int(np.searchsorted(self._starts, t, side="right")) - 1
        i = min(max(i, 0), len(self.segments) - 1)
        seg = self.segments[i]
        u = (t - self._starts[i]) / seg.duration
        u = min(max(u, 0.0), 1.0)
        return (seg.alpha(u), seg.beta(u), seg.dalpha(u) / seg.duration,
                seg.dbeta(u) / seg.duration)

    def to_json(self):
        return {"segments": [s.to_json() for s in self.segments]}

    def __repr__(self):
        kinds = ", ".join(s.kind for s in self.segments)
        return f"SpherePath([{kinds}], duration={self.duration:.6g})"


@dataclass(frozen=True)
class Schedule:
    """
    Monotone time map ``s: [0, duration] -> [0, target]``.

    ``func`` and ``deriv`` give ``s(u)`` and ``s'(u)``.
    """

    func: Callable
    deriv: Callable
    duration: float
    target: float
    name: str = "custom"

    def __call__(self, u):
        return self.func(u)

    def inverse(self, s):
        if s <= 0.0:
            return 0.0
        if s >= self.target:
            return self.duration
        return optimize.brentq(lambda u: self.func(u) - s, 0.0, self.duration,
                               xtol=1e-15, rtol=1e-15)

    def validate(self, n=2049):
        u = np.linspace(0.0, self.duration, n)
        s = np.array([self.func(x) for x in u])
        ds = np.array([self.deriv(x) for x in u])
        scale = self.target / self.duration
        if abs(s[0]) > 1e-12 * self.target or abs(s[-1] - self.target) > 1e-12 * self.target:
            raise PathError(f"schedule {self.name} does not map endpoints onto [0, {self.target}]")
        if np.any(ds < -1e-12 * scale) or np.any(np.diff(s) < -1e-12 * self.target):
            raise PathError(f"schedule {self.name} is not monotone")


def identity_schedule(tau):
    return Schedule(lambda u: u, lambda u: 1.0, float(tau), float(tau), "identity")


def scaled_schedule(tau, new_duration):
    k = tau / new_duration
    return Schedule(lambda u: k * u, lambda u: k, float(new_duration), float(tau), "scaled")


def sin2_schedule(tau, new_duration=None):
    """``s(u) = tau sin^2(pi u / (2 T))``: slow start and stop."""
    T = float(tau if new_duration is None else new_duration)
    c = math.pi / (2.0 * T)
    return Schedule(lambda u: tau * math.sin(c * u) ** 2,
                    lambda u: tau * c * math.sin(2.0 * c * u),
                    T, float(tau), "sin2")


def cubic_schedule(tau, p1, p2, new_duration=None):
    """
    Monotone cubic in Bernstein form with control values ``0, p1, p2, 1``.

    Monotone whenever ``0 <= p1 <= p2 <= 1``.
    """
    if not 0.0 <= p1 <= p2 <= 1.0:
        raise PathError("cubic schedule needs 0 <= p1 <= p2 <= 1")
    T = float(tau if new_duration is None else new_duration)

    def g(x):
        return 3 * p1 * x * (1 - x) ** 2 + 3 * p2 * x * x * (1 - x) + x ** 3

    def dg(x):
        return 3 * p1 * (1 - x) ** 2 + 6 * (p2 - p1) * x * (1 - x) + 3 * (1 - p2) * x * x

    return Schedule(lambda u: tau * g(u / T), lambda u: tau * dg(u / T) / T,
                    T, float(tau), f"cubic({p1:.4g},{p2:.4g})")


class ReparametrizedPath(_PathBase):
    """The geometric trace of ``base`` traversed on a new clock."""

    def __init__(self, base, schedule):
        if abs(schedule.target - base.duration) > 1e-12 * max(1.0, base.duration):
            raise PathError(
                f"schedule targets duration {schedule.target}, path has {base.duration}")
        schedule.validate()
        self.base = base
        self.schedule = schedule
        self.duration = schedule.duration
        self.segments = base.segments
        self._breaks = np.array([schedule.inverse(b) for b in base.breakpoints])
        self._breaks[0], self._breaks[-1] = 0.0, self.duration

    @property
    def breakpoints(self):
        return self._breaks.copy()

    def rates(self, t):
        s = self.schedule(t)
        ds = self.schedule.deriv(t)
        a, b, da, db = self.base.rates(s)
        return a, b, da * ds, db * ds

    def __repr__(self):
        return f"ReparametrizedPath({self.base!r}, schedule={self.schedule.name})"


def reparametrize(path, schedule):
    """
    Same trace as ``path`` on the clock given by ``schedule``.

    Raises
    ------
    PathError
        If the schedule is not monotone or its endpoints do not match.
    """
    return ReparametrizedPath(path, schedule)


def _integrate(path, integrand):
    total = 0.0
    bps = path.breakpoints
    for t0, t1 in zip(bps[:-1], bps[1:]):
        if t1 <= t0:
            continue
        val, _ = integrate.quad(lambda t: integrand(*path.rates(t)), t0, t1, **_QUAD_OPTS)
        total += val
    return total


def path_length(path):
    """Arc length ``integral sqrt(alpha'^2 + sin^2(alpha) beta'^2) dt``."""
    return _integrate(path, lambda a, b, da, db: math.sqrt(da * da + (math.sin(a) * db) ** 2))


def _raw_enclosed(path):
    return 0.5 * _integrate(path, lambda a, b, da, db: (1.0 - math.cos(a)) * db)


def enclosed_angle(path):
    """
    Half the solid angle enclosed by a closed pole-anchored path.

    Evaluated as ``(1/2) integral (1 - cos alpha) beta' dt`` and wrapped into
    ``[0, 2 pi)``; this is the rotation angle of the resulting gate.

    Raises
    ------
    PathError
        If the path does not start and end at the north pole.
    """
    if not path.is_closed:
        raise PathError("enclosed angle needs a path closed at the north pole")
    return _wrap_angle(_raw_enclosed(path))


@dataclass(frozen=True)
class PathReport:
    length: float
    enclosed_angle: float
    duration: float


def path_report(path):
    return PathReport(path_length(path), enclosed_angle(path), path.duration)


def _check_open_interval(name, x):
    if not 0.0 < x < TWO_PI:
        raise PathError(f"{name} must lie in (0, 2 pi), got {x}")


def orange_slice(delta_beta, speed=1.0):
    """
    Two meridians ``delta_beta`` apart, joined by a sweep at the south pole.

    The sweep has zero arc length but carries the whole azimuth change, so the
    enclosed angle integral picks up ``delta_beta`` from it.
    """
    _check_open_interval("delta_beta", delta_beta)
    return SpherePath([
        meridian(0.0, 0.0, math.pi, math.pi / speed),
        parallel(math.pi, 0.0, delta_beta, delta_beta / speed),
        meridian(delta_beta, math.pi, 0.0, math.pi / speed),
    ])


def three_arc(beta_f, speed=1.0):
    """Pole -> (pi/2, 0) -> (pi/2, beta_f) -> pole along three great arcs."""
    _check_open_interval("beta_f", beta_f)
    half = 0.5 * math.pi
    return SpherePath([
        meridian(0.0, 0.0, half, half / speed),
        parallel(half, 0.0, beta_f, beta_f / speed),
        meridian(beta_f, half, 0.0, half / speed),
    ])


def minimal_length(phi):
    """Circumference ``2 sqrt(2 pi phi - phi^2)`` of the shortest loop for ``phi``."""
    return 2.0 * math.sqrt(max(0.0, 2.0 * math.pi * phi - phi * phi))


def minimal_circle(phi, rotation=0.0, speed=1.0):
    """
    Shortest pole-anchored loop with enclosed angle ``phi``.

    For ``phi = pi`` the circle is a great circle through both poles and is
    built as a meridian pair with a south-pole sweep, like :func:`orange_slice`.
    """
    _check_open_interval("phi", phi)
    if phi == math.pi:
        b0, b1 = rotation - 0.5 * math.pi, rotation + 0.5 * math.pi
        return SpherePath([
            meridian(b0, 0.0, math.pi, math.pi / speed),
            parallel(math.pi, b0, b1, math.pi / speed),
            meridian(b1, math.pi, 0.0, math.pi / speed),
        ])
    return SpherePath([cap_circle(phi, rotation, minimal_length(phi) / speed)])


def circle_equation_residual(phi, alpha, beta, rotation=0.0):
    """
    ``(pi - phi)(1 - cos a) - sqrt(2 pi phi - phi^2) sin a cos(b - rotation)``.

    Vanishes on the minimal circle for ``phi``.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return ((math.pi - phi) * (1.0 - np.cos(alpha))
            - math.sqrt(2.0 * math.pi * phi - phi * phi) * np.sin(alpha) * np.cos(beta - rotation))


def time_ratio(phi):
    """Minimal traversal time relative to the ``2 pi`` orange slice at equal speed."""
    _check_open_interval("phi", phi)
    x = phi / math.pi
    return math.sqrt(2.0 * x - x * x)


def constant_speed_duration(path, omega):
    """
    Traversal time at constant angular speed ``omega``.

    Zero-length sweeps at the poles cost no time under this convention.
    """
    if not omega > 0.0:
        raise PathError("omega must be positive")
    return path_length(path) / omega


def _unit(alpha, beta):
    return _cartesian(float(alpha), float(beta))


def polygon_excess_oracle(vertices):
    """
    Signed area of a spherical polygon with great-circle edges.

    Uses a triangle fan from the first vertex and the Van Oosterom-Strackee
    formula ``tan(E/2) = a.(b x c) / (1 + a.b + b.c + c.a)`` for each
    triangle. Counterclockwise polygons (seen from outside) have positive area.

    Raises
    ------
    PathError
        Fewer than three vertices, or two adjacent vertices antipodal.
    """
    pts = [_unit(a, b) for a, b in vertices]
    if len(pts) < 3:
        raise PathError("a spherical polygon needs at least three vertices")
    for p, q in zip(pts, pts[1:] + pts[:1]):
        if p @ q < -1.0 + 1e-12:
            raise PathError("adjacent antipodal vertices make the edge ambiguous")
    a = pts[0]
    area = 0.0
    for b, c in zip(pts[1:-1], pts[2:]):
        num = a @ np.cross(b, c)
        den = 1.0 + a @ b + b @ c + c @ a
        area += 2.0 * math.atan2(num, den)
    return area


def cap_area_oracle(phi):
    """Area ``2 pi (1 - cos rho)`` of the cap bounded by the minimal circle."""
    cos_rho = 1.0 - phi / math.pi
    return TWO_PI * (1.0 - cos_rho)


def _segment_from_json(obj):
    kind = obj["kind"]
    p = obj.get("params", {})
    dur = obj.get("duration")
    if kind == "meridian":
        return [meridian(p["beta"], p["alpha0"], p["alpha1"], dur)]
    if kind == "parallel":
        return [parallel(p["alpha"], p["beta0"], p["beta1"], dur)]
    if kind == "cap_circle":
        return [cap_circle(p["phi"], p.get("rotation", 0.0), dur)]
    if kind == "great_arc":
        return [great_arc(p["start"], p["end"], dur)]
    if kind == "polyline":
        verts = p["vertices"]
        arcs = [great_arc(v, w) for v, w in zip(verts, verts[1:])]
        if dur is not None:
            total = sum(a.duration for a in arcs)
            arcs = [a.with_duration(dur * a.duration / total) for a in arcs]
        return arcs
    raise PathError(f"unknown segment kind {kind!r}")


_FAMILIES = {
    "orange_slice": lambda p: orange_slice(p["delta_beta"], p.get("speed", 1.0)),
    "three_arc": lambda p: three_arc(p["beta_f"], p.get("speed", 1.0)),
    "minimal_circle": lambda p: minimal_circle(p["phi"], p.get("rotation", 0.0),
                                               p.get("speed", 1.0)),
}


def path_from_json(obj):
    """
    Build a path from ``{"segments": [...]}`` or ``{"family": name, ...}``.

    Segment kinds are ``meridian``, ``parallel``, ``cap_circle``,
    ``great_arc`` and ``polyline``; families are ``orange_slice``,
    ``three_arc`` and ``minimal_circle``.
    """
    if "family" in obj:
        fam = obj["family"]
        if fam not in _FAMILIES:
            raise PathError(f"unknown path family {fam!r}")
        return _FAMILIES[fam](obj)
    if "segments" not in obj:
        raise PathError("path JSON needs 'segments' or 'family'")
    segs = []
    for s in obj["segments"]:
        segs.extend(_segment_from_json(s))
    return SpherePath(segs)


def schedule_from_json(obj, tau):
    kind = obj.get("kind", "identity")
    T = obj.get("duration", tau)
    if kind == "identity":
        return identity_schedule(tau)
    if kind == "scaled":
        return scaled_schedule(tau, T)
    if kind == "sin2":
        return sin2_schedule(tau, T)
    if kind == "cubic":
        return cubic_schedule(tau, obj["p1"], obj["p2"], T)
    raise PathError(f"unknown schedule kind {kind!r}")
