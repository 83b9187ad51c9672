"""Global minimization of the conditioned entropy over measurement directions.

The pipeline is: a hemisphere grid scan (the n -> -n symmetry halves the
sphere), analytic-gradient refinement driven by the stationarity vector A,
and assembly of mutual information, classical correlation and discord.
States whose canonical form lands in a solvable family skip the search and
use the closed form instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .bounds import BoundReport, theorem1_bounds
from .closed_forms import CLASS_TOL, classify, kernel_class_min_entropy
from .entropy import von_neumann_entropy
from .errors import ValidationError
from .measurement import (
    BRANCH_TOL,
    MeasurementDirection,
    _canonical_sign,
    _unit,
    conditional_entropy,
    conditional_entropy_batch,
)
from .states import (
    BlochTriple,
    canonicalize,
    reduced_states,
    triple_from_matrix,
    _require_state,
)

DEFAULT_RESOLUTION = math.pi / 180
DEFAULT_TOLERANCE = 1e-9
MAX_REFINE_ITERATIONS = 200

_ARMIJO = 1e-4
_NEWTON_THRESHOLD = 1e-2
_FD_STEP = 1e-6
_COMPASS_MIN_STEP = 1e-9


@dataclass(frozen=True)
class StationaryDiagnostics:
    """Stationarity data at a measurement direction.

    ``residual`` is the norm of the component of A orthogonal to n; it
    vanishes exactly at stationary points.  ``grad_theta`` and ``grad_phi``
    are the derivatives of the conditioned entropy in bits.  When a branch
    probability vanishes the logarithms in A are undefined: the point is
    flagged ``degenerate`` and no numbers are reported.
    """

    a_vector: np.ndarray | None
    a_scalar: float | None
    residual: float | None
    grad_theta: float | None
    grad_phi: float | None
    degenerate: bool = False


@dataclass(frozen=True)
class StationaryPoint:
    direction: MeasurementDirection
    value: float
    residual: float


@dataclass(frozen=True)
class DiscordReport:
    """All correlation quantities of one state, plus diagnostics and bounds."""

    mutual_information: float
    classical_correlation: float
    discord: float
    optimal_direction: MeasurementDirection
    min_conditional_entropy: float
    method: str  # "closed-form" or "grid+refine"
    diagnostics: StationaryDiagnostics
    bounds: BoundReport | None


def _a_vector(t: BlochTriple, n: np.ndarray) -> np.ndarray | None:
    """The stationarity vector A at direction n, or None at degenerate points.

    Terms whose unit vector (T n +- x)/|T n +- x| is undefined carry a log
    coefficient that vanishes with the norm, so they are dropped (the limit
    is zero); vanishing w or p have no finite limit and flag degeneracy.
    """
    tn = t.T @ n
    vp = tn + t.x
    vm = tn - t.x
    sp = float(np.linalg.norm(vp))
    sm = float(np.linalg.norm(vm))
    d = float(t.y @ n)
    p0 = (1 + d) / 2
    p1 = (1 - d) / 2
    w1, w2 = (2 * p0 + sp) / 4, (2 * p0 - sp) / 4
    w3, w4 = (2 * p1 + sm) / 4, (2 * p1 - sm) / 4
    if min(w1, w2, w3, w4, p0, p1) <= BRANCH_TOL:
        return None
    a = math.log2((w1 * w2 * p1 * p1) / (w3 * w4 * p0 * p0)) * t.y
    if sp > BRANCH_TOL:
        a = a + math.log2(w1 / w2) * (t.T.T @ (vp / sp))
    if sm > BRANCH_TOL:
        a = a + math.log2(w3 / w4) * (t.T.T @ (vm / sm))
    return a


def _tangential(t: BlochTriple, n: np.ndarray) -> tuple[np.ndarray | None, float]:
    a = _a_vector(t, n)
    if a is None:
        return None, math.nan
    tang = a - (n @ a) * n
    return tang, float(np.linalg.norm(tang))


def stationary_vector(t: BlochTriple, direction) -> StationaryDiagnostics:
    """Evaluate the stationarity vector A and the entropy gradient at a direction.

    The derivative of the conditioned entropy along a tangent vector tau is
    -tau.A/4 (in bits), so stationary points are exactly where A is parallel
    to n.  The Lagrange scalar of the constrained formulation equals n.A.
    """
    direction = direction if isinstance(direction, MeasurementDirection) else MeasurementDirection(direction)
    n = direction.n
    a = _a_vector(t, n)
    if a is None:
        return StationaryDiagnostics(None, None, None, None, None, degenerate=True)
    th, ph = direction.theta, direction.phi
    n_theta = np.array([math.cos(th) * math.cos(ph), math.cos(th) * math.sin(ph), -math.sin(th)])
    n_phi = np.array([-math.sin(th) * math.sin(ph), math.sin(th) * math.cos(ph), 0.0])
    tang = a - (n @ a) * n
    return StationaryDiagnostics(
        a_vector=a,
        a_scalar=_a_scalar(t, n),
        residual=float(np.linalg.norm(tang)),
        grad_theta=-0.25 * float(n_theta @ a),
        grad_phi=-0.25 * float(n_phi @ a),
    )


def _a_scalar(t: BlochTriple, n: np.ndarray) -> float:
    """Lagrange multiplier of the stationarity condition A = A_scalar * n."""
    tn = t.T @ n
    vp = tn + t.x
    vm = tn - t.x
    sp = float(np.linalg.norm(vp))
    sm = float(np.linalg.norm(vm))
    d = float(t.y @ n)
    p0 = (1 + d) / 2
    p1 = (1 - d) / 2
    w1, w2 = (2 * p0 + sp) / 4, (2 * p0 - sp) / 4
    w3, w4 = (2 * p1 + sm) / 4, (2 * p1 - sm) / 4
    value = -4 * conditional_entropy(t, MeasurementDirection(n)) \
        - math.log2((w1 * w2 * w3 * w4) / (p0 * p0 * p1 * p1))
    if sp > BRANCH_TOL:
        value -= math.log2(w1 / w2) * float(t.x @ (vp / sp))
    if sm > BRANCH_TOL:
        value += math.log2(w3 / w4) * float(t.x @ (vm / sm))
    return value


@lru_cache(maxsize=8)
def _grid(resolution: float) -> np.ndarray:
    thetas = np.arange(0.0, math.pi / 2 + resolution / 2, resolution)
    phis = np.arange(0.0, 2 * math.pi, resolution)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    st = np.sin(tt)
    dirs = np.stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)], axis=1)
    dirs.setflags(write=False)
    return dirs


def _check_resolution(resolution: float) -> float:
    resolution = float(resolution)
    if not 0 < resolution <= math.pi / 8:
        raise ValidationError(f"resolution must be in (0, pi/8], got {resolution!r}")
    return resolution


def grid_minimize(t: BlochTriple, resolution: float = DEFAULT_RESOLUTION) -> tuple[MeasurementDirection, float]:
    """Exhaustive scan of the upper hemisphere at the given angular step.

    Directions are ordered by increasing theta then phi, and ``argmin``
    keeps the first minimum, which realizes the smallest-angle tie-break.
    """
    resolution = _check_resolution(resolution)
    dirs = _grid(resolution)
    values = conditional_entropy_batch(t, dirs)
    best = MeasurementDirection(dirs[int(np.argmin(values))])
    # re-evaluate through the scalar path so refinement starts bit-consistent
    return best, conditional_entropy(t, best)


def _tangent_basis(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[k] = 1.0
    u = np.cross(n, e)
    u /= np.linalg.norm(u)
    return u, np.cross(n, u)


def _chart_gradient(t: BlochTriple, n: np.ndarray, u: np.ndarray, v: np.ndarray,
                    du: float, dv: float) -> np.ndarray | None:
    m = n + du * u + dv * v
    r = float(np.linalg.norm(m))
    m = m / r
    tang, _ = _tangential(t, m)
    if tang is None:
        return None
    g = -0.25 * tang
    return np.array([g @ u, g @ v]) / r


def _newton_step(t: BlochTriple, n: np.ndarray, f: float, resid: float,
                 g: np.ndarray) -> tuple[np.ndarray, float, float] | None:
    """One damped Newton step on the tangent-chart gradient; None if it fails."""
    u, v = _tangent_basis(n)
    g0 = np.array([g @ u, g @ v])
    cols = []
    for du, dv in ((_FD_STEP, 0.0), (0.0, _FD_STEP)):
        gp = _chart_gradient(t, n, u, v, du, dv)
        gm = _chart_gradient(t, n, u, v, -du, -dv)
        if gp is None or gm is None:
            return None
        cols.append((gp - gm) / (2 * _FD_STEP))
    hess = np.stack(cols, axis=1)
    hess = (hess + hess.T) / 2
    try:
        delta = np.linalg.solve(hess, -g0)
    except np.linalg.LinAlgError:
        return None
    if not np.isfinite(delta).all() or float(np.linalg.norm(delta)) > 0.5:
        return None
    scale = 1.0
    for _ in range(8):
        cand = n + scale * (delta[0] * u + delta[1] * v)
        cand = cand / np.linalg.norm(cand)
        fc = conditional_entropy(t, MeasurementDirection(cand))
        tang, rc = _tangential(t, cand)
        if tang is not None and rc < resid and fc <= f + 1e-14:
            return cand, fc, rc
        scale *= 0.5
    return None


def _compass(t: BlochTriple, n: np.ndarray, f: float, step: float) -> tuple[np.ndarray, float]:
    """Derivative-free descent for points where the gradient is undefined."""
    while step > _COMPASS_MIN_STEP:
        u, v = _tangent_basis(n)
        moved = False
        for probe in (u, -u, v, -v):
            cand = n + step * probe
            cand = cand / np.linalg.norm(cand)
            fc = conditional_entropy(t, MeasurementDirection(cand))
            if fc < f:
                n, f = cand, fc
                moved = True
                break
        if not moved:
            step /= 2
    return n, f


def refine_minimum(t: BlochTriple, start, *, tolerance: float = DEFAULT_TOLERANCE,
                   max_iterations: int = MAX_REFINE_ITERATIONS,
                   ) -> tuple[MeasurementDirection, float, StationaryDiagnostics]:
    """Descend the conditioned entropy from ``start`` until A is parallel to n.

    Projected gradient descent on the sphere with a Barzilai-Borwein step
    and Armijo backtracking; once the tangential residual is small a damped
    Newton step in the local tangent chart finishes the convergence.  The
    returned value never exceeds the starting value, and points where the
    gradient is undefined fall back to compass search.
    """
    n = _unit(start)
    f = conditional_entropy(t, MeasurementDirection(n))
    step: float | None = None
    n_prev = g_prev = None
    for _ in range(max_iterations):
        tang, resid = _tangential(t, n)
        if tang is None:
            n, f = _compass(t, n, f, step or 0.01)
            break
        if resid <= tolerance:
            break
        g = -0.25 * tang
        if resid < _NEWTON_THRESHOLD:
            polished = _newton_step(t, n, f, resid, g)
            if polished is not None:
                n, f, _ = polished
                continue
        if n_prev is not None:
            s_diff = n - n_prev
            y_diff = g - g_prev
            denom = float(y_diff @ y_diff)
            if denom > 1e-30:
                step = min(max(abs(float(s_diff @ y_diff) / denom), 1e-12), 1e3)
        if step is None:
            step = 1.0
        n_prev, g_prev = n, g
        gg = float(g @ g)
        moved = False
        for _ in range(60):
            cand = n - step * g
            cand = cand / np.linalg.norm(cand)
            fc = conditional_entropy(t, MeasurementDirection(cand))
            if fc <= f - _ARMIJO * step * gg:
                n, f = cand, fc
                moved = True
                break
            step /= 2
        if not moved:
            break  # improvements below machine precision
        step *= 2
    direction = MeasurementDirection(_canonical_sign(n))
    return direction, conditional_entropy(t, direction), stationary_vector(t, direction)


def minimize_conditional_entropy(t: BlochTriple, resolution: float = DEFAULT_RESOLUTION,
                                 tolerance: float = DEFAULT_TOLERANCE,
                                 ) -> tuple[MeasurementDirection, float, StationaryDiagnostics]:
    """Grid scan followed by refinement; the refined value never exceeds the grid value."""
    start, _ = grid_minimize(t, resolution)
    return refine_minimum(t, start, tolerance=tolerance)


def _closed_form_minimum(canon) -> tuple[float, np.ndarray, bool]:
    d = canon.diagonal
    min_s = kernel_class_min_entropy(canon.triple.x, canon.triple.T)
    mags = np.abs(d)
    t_max = float(mags.max())
    if t_max <= CLASS_TOL:
        # flat landscape: every direction is optimal, report theta = 0
        return min_s, np.array([0.0, 0.0, 1.0]), True
    axis = int(mags.argmax())
    direction = np.zeros(3)
    direction[axis] = 1.0
    degenerate = int((mags >= t_max - 1e-12).sum()) > 1
    return min_s, direction, degenerate


def quantum_discord(rho: np.ndarray, *, resolution: float = DEFAULT_RESOLUTION,
                    tolerance: float = DEFAULT_TOLERANCE, fast_path: bool = True,
                    with_bounds: bool = True) -> DiscordReport:
    """Mutual information, classical correlation and discord of a two-qubit state.

    Parameters
    ----------
    rho :
        4x4 density matrix (measurement side is subsystem B).
    resolution :
        Angular step of the hemisphere grid, radians.
    tolerance :
        Stationarity residual at which refinement stops.
    fast_path :
        Use the closed forms when the canonical form lands in a solvable
        family; disable to force grid+refine (e.g. to cross-check oracles).
    with_bounds :
        Attach the correlation bounds to the report.

    Returns
    -------
    DiscordReport
        With ``discord = mutual_information - classical_correlation`` exact.
    """
    rho = _require_state(rho)
    rho = rho / np.trace(rho).real
    t = triple_from_matrix(rho)
    rho_a, rho_b = reduced_states(rho)
    s_a = von_neumann_entropy(rho_a)
    mutual = s_a + von_neumann_entropy(rho_b) - von_neumann_entropy(rho)

    canon = canonicalize(t)
    tag = classify(canon)
    if fast_path and tag.kind.has_closed_form:
        min_s, axis_dir, tie_degenerate = _closed_form_minimum(canon)
        direction = MeasurementDirection(_canonical_sign(canon.rotation_b.T @ axis_dir))
        method = "closed-form"
        diagnostics = stationary_vector(t, direction)
        if tie_degenerate:
            diagnostics = replace(diagnostics, degenerate=True)
    else:
        direction, min_s, diagnostics = minimize_conditional_entropy(t, resolution, tolerance)
        method = "grid+refine"

    classical = max(0.0, s_a - min_s)
    discord = mutual - classical
    bounds = theorem1_bounds(rho, discord=discord) if with_bounds else None
    return DiscordReport(
        mutual_information=mutual,
        classical_correlation=classical,
        discord=discord,
        optimal_direction=direction,
        min_conditional_entropy=min_s,
        method=method,
        diagnostics=diagnostics,
        bounds=bounds,
    )


def classical_correlation(rho: np.ndarray, **kwargs) -> float:
    """max over measurements of S(rho_A) - S(A | measurement), in bits."""
    return quantum_discord(rho, with_bounds=False, **kwargs).classical_correlation


def _residual_batch(t: BlochTriple, dirs: np.ndarray) -> np.ndarray:
    """Vectorized stationarity residual; inf at degenerate directions."""
    tn = dirs @ t.T.T
    vp = tn + t.x
    vm = tn - t.x
    sp = np.linalg.norm(vp, axis=1)
    sm = np.linalg.norm(vm, axis=1)
    d = dirs @ t.y
    p0 = (1 + d) / 2
    p1 = (1 - d) / 2
    w1, w2 = (2 * p0 + sp) / 4, (2 * p0 - sp) / 4
    w3, w4 = (2 * p1 + sm) / 4, (2 * p1 - sm) / 4
    valid = np.minimum.reduce([w1, w2, w3, w4, p0, p1]) > BRANCH_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        ly = np.log2((w1 * w2 * p1 * p1) / (w3 * w4 * p0 * p0))
        lp = np.log2(w1 / w2)
        lm = np.log2(w3 / w4)
        a = ly[:, None] * t.y
        safe_sp = np.where(sp > BRANCH_TOL, sp, 1.0)
        safe_sm = np.where(sm > BRANCH_TOL, sm, 1.0)
        a = a + np.where(sp > BRANCH_TOL, lp, 0.0)[:, None] * ((vp / safe_sp[:, None]) @ t.T)
        a = a + np.where(sm > BRANCH_TOL, lm, 0.0)[:, None] * ((vm / safe_sm[:, None]) @ t.T)
    tang = a - (np.sum(a * dirs, axis=1))[:, None] * dirs
    resid = np.linalg.norm(tang, axis=1)
    return np.where(valid, resid, np.inf)


def _refine_stationary(t: BlochTriple, n0: np.ndarray, tolerance: float = 1e-9,
                       max_iterations: int = 60) -> tuple[np.ndarray, float] | None:
    """Damped Newton iteration toward the nearest stationary point (any type)."""
    n = n0.copy()
    tang, resid = _tangential(t, n)
    if tang is None:
        return None
    for _ in range(max_iterations):
        if resid <= tolerance:
            return n, resid
        g = -0.25 * tang
        u, v = _tangent_basis(n)
        g0 = np.array([g @ u, g @ v])
        cols = []
        for du, dv in ((_FD_STEP, 0.0), (0.0, _FD_STEP)):
            gp = _chart_gradient(t, n, u, v, du, dv)
            gm = _chart_gradient(t, n, u, v, -du, -dv)
            if gp is None or gm is None:
                return None
            cols.append((gp - gm) / (2 * _FD_STEP))
        hess = np.stack(cols, axis=1)
        hess = (hess + hess.T) / 2
        delta, *_ = np.linalg.lstsq(hess, -g0, rcond=None)
        if not np.isfinite(delta).all():
            return None
        norm = float(np.linalg.norm(delta))
        if norm > 0.5:
            delta *= 0.5 / norm
        scale = 1.0
        improved = False
        for _ in range(10):
            cand = n + scale * (delta[0] * u + delta[1] * v)
            cand = cand / np.linalg.norm(cand)
            tang_c, resid_c = _tangential(t, cand)
            if tang_c is not None and resid_c < resid:
                n, tang, resid = cand, tang_c, resid_c
                improved = True
                break
            scale /= 2
        if not improved:
            return (n, resid) if resid <= tolerance else None
    return (n, resid) if resid <= tolerance else None


def stationary_scan(t: BlochTriple, resolution: float = math.pi / 60) -> list[StationaryPoint]:
    """All stationary measurement directions found from a hemisphere grid.

    Grid-local minima of the stationarity residual are refined with a damped
    Newton iteration (this captures saddles and maxima of the entropy, not
    just its minima), deduplicated with antipodes identified, and returned
    sorted by entropy value.  Points that fail to reach residual 1e-7 are
    dropped.
    """
    resolution = _check_resolution(resolution)
    thetas = np.arange(0.0, math.pi / 2 + resolution / 2, resolution)
    phis = np.arange(0.0, 2 * math.pi, resolution)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    st = np.sin(tt)
    dirs = np.stack([(st * np.cos(pp)).ravel(), (st * np.sin(pp)).ravel(),
                     np.cos(tt).ravel()], axis=1)
    resid = _residual_batch(t, dirs).reshape(len(thetas), len(phis))

    padded = np.pad(resid, ((1, 1), (0, 0)), constant_values=np.inf)
    is_min = np.ones_like(resid, dtype=bool)
    for dth in (-1, 0, 1):
        rows = padded[1 + dth:1 + dth + len(thetas), :]
        for dph in (-1, 0, 1):
            if dth == 0 and dph == 0:
                continue
            is_min &= resid <= np.roll(rows, dph, axis=1)
    candidates = dirs[is_min.ravel() & np.isfinite(resid.ravel())]

    found: list[StationaryPoint] = []
    for n0 in candidates:
        refined = _refine_stationary(t, n0)
        if refined is None:
            continue
        n, r = refined
        if r > 1e-7:
            continue
        n = _canonical_sign(n)
        if any(math.acos(min(1.0, abs(float(n @ p.direction.n)))) < 1e-4 for p in found):
            continue
        direction = MeasurementDirection(n)
        found.append(StationaryPoint(direction, conditional_entropy(t, direction), r))
    found.sort(key=lambda p: (p.value, p.direction.theta, p.direction.phi))
    return found
