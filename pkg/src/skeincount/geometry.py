"""Explicit holomorphic model families in C^3 and their intersection bookkeeping.

Coordinates are z_k = x_k + i y_k.  The Lagrangian is L = R^3 = {y = 0} with
vector field xi = d/dx3.  Real 6-vectors are ordered (x1, y1, x2, y2, x3, y3).

Two chain charts are provided:

* ``standard``: C = {y1 = y2 = 0}, split into C+ (y3 >= 0) and C- (y3 <= 0).
  Frames (-d/dy3, d/dx1, d/dx2, d/dx3) on C+ and (d/dy3, d/dx1, d/dx2, d/dx3)
  on C-, so both pieces induce the positive orientation on R^3.
* ``gamma``: C = {x1 = y2, x2 = y1} with frame (d/dx1 + d/dy2, d/dx2 + d/dy1,
  d/dx3, d/dy3), the curve gamma = x3-axis oriented by d/dx3, and the capping
  half-plane sigma = {x1 <= 0, x2 = 0} in L with frame (d/dx3, d/dx1).

Domains are handled through real parameters (p, q) that are an
orientation-preserving chart of the complex domain coordinate.  Punctured
ends are compactified with w = e^zeta.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from ._kernels import sign_change_cells

__all__ = [
    "ModelChart",
    "STANDARD",
    "GAMMA",
    "Piece",
    "LocalModelFamily",
    "SignedCount",
    "NonTransverseError",
    "DegenerateError",
    "through_gamma",
    "tangency",
    "hyperbolic_pair",
    "hyperbolic_nodal",
    "elliptic_cylinder",
    "elliptic_nodal",
    "make_family",
    "chain_intersections",
    "boundary_sigma_intersections",
    "linking_number",
    "projected_writhe",
    "framing_balance",
    "convergence_check",
    "elliptic_boundary_radius",
    "report",
]

GRID = 200
RESIDUAL_TOL = 1e-9
TRANSVERSE_TOL = 1e-6
PUSH_EPS = 0.01
PUSH_COLLAR = 0.05


class NonTransverseError(RuntimeError):
    """An intersection point whose orientation determinant is (nearly) zero."""


class DegenerateError(RuntimeError):
    """A boundary point lies on gamma = boundary of sigma."""


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

def _e(i: int) -> np.ndarray:
    v = np.zeros(6)
    v[i] = 1.0
    return v


X1, Y1, X2, Y2, X3, Y3 = range(6)


@dataclass(frozen=True)
class ModelChart:
    name: str
    constraints: Callable  # (..., 3) complex -> two real arrays
    frames: Callable  # target point (3,) complex -> (label, 4x6 frame)

    def __repr__(self):
        return f"ModelChart({self.name!r})"


def _standard_constraints(z):
    return z[..., 0].imag, z[..., 1].imag


def _standard_frame(z):
    y3 = z[2].imag
    if y3 > 0:
        return "C+", np.array([-_e(Y3), _e(X1), _e(X2), _e(X3)])
    if y3 < 0:
        return "C-", np.array([_e(Y3), _e(X1), _e(X2), _e(X3)])
    raise NonTransverseError("intersection lies on L (y3 = 0), between C+ and C-")


def _gamma_constraints(z):
    return z[..., 0].real - z[..., 1].imag, z[..., 1].real - z[..., 0].imag


def _gamma_frame(z):
    return "C", np.array([_e(X1) + _e(Y2), _e(X2) + _e(Y1), _e(X3), _e(Y3)])


STANDARD = ModelChart("standard", _standard_constraints, _standard_frame)
GAMMA = ModelChart("gamma", _gamma_constraints, _gamma_frame)

# sigma = {x1 <= 0, x2 = 0} oriented by (d/dx3, d/dx1): with gamma oriented by
# d/dx3 this is the orientation for which the linking number of the
# gamma-crossing family is constant
SIGMA_FRAME = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])


def _real6(v: np.ndarray) -> np.ndarray:
    return np.array([v[0].real, v[0].imag, v[1].real, v[1].imag, v[2].real, v[2].imag])


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

@dataclass
class Piece:
    """One connected domain component.

    ``f(P, Q)`` maps real parameter arrays to complex (..., 3) points.
    ``edges`` lists domain edges mapped into L as (axis, value, orient):
    axis 'q' means the edge q = value, traversed in direction orient*dp
    under the boundary orientation; axis 'p' likewise with dq.
    """

    name: str
    f: Callable
    window: tuple  # (p0, p1, q0, q1)
    edges: list = field(default_factory=list)
    scale: float = 1.0

    def __call__(self, p, q):
        return self.f(np.asarray(p, dtype=float), np.asarray(q, dtype=float))


@dataclass
class LocalModelFamily:
    kind: str
    params: dict
    pieces: list
    domain: str

    def describe(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}({args})"


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*[np.asarray(c, dtype=complex) for c in cols]), axis=-1)


def through_gamma(t: float, window=(-2.0, 2.0, 0.0, 2.0)) -> LocalModelFamily:
    """u_t(zeta) = (t, zeta, 0) on the upper half-plane."""
    def f(p, q):
        zeta = p + 1j * q
        return _stack(np.full_like(zeta, t), zeta, np.zeros_like(zeta))
    return LocalModelFamily("ThroughGamma", {"t": t},
                            [Piece("u", f, window, [("q", window[2], 1)])], "half-plane")


def tangency(s: float, branch: int = 1, window=None) -> LocalModelFamily:
    """u(z) = (z^2, z(z^2 + s), branch*z) on the upper half-plane."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    if window is None:
        r = max(2.0, 1.6 * math.sqrt(abs(s)))
        window = (-r, r, 0.0, r)

    def f(p, q):
        z = p + 1j * q
        return _stack(z * z, z * (z * z + s), branch * z)
    return LocalModelFamily("Tangency", {"s": s, "branch": branch},
                            [Piece("u", f, window, [("q", window[2], 1)])], "half-plane")


def _strip_edges(window):
    # boundary orientation of R x [0, pi]: bottom edge +dp, top edge -dp
    return [("q", window[2], 1), ("q", window[3], -1)]


def hyperbolic_pair(t: float, window=(-3.0, 3.0, 0.0, math.pi)) -> LocalModelFamily:
    """u^1(zeta) = (e^zeta, 0, 0) and u^2(zeta) = (0, e^-zeta, t) on strips."""
    def f1(p, q):
        w = np.exp(p + 1j * q)
        return _stack(w, np.zeros_like(w), np.zeros_like(w))

    def f2(p, q):
        w = np.exp(-(p + 1j * q))
        return _stack(np.zeros_like(w), w, np.full_like(w, t))
    return LocalModelFamily("HyperbolicPair", {"t": t},
                            [Piece("u1", f1, window, _strip_edges(window)),
                             Piece("u2", f2, window, _strip_edges(window))], "strip")


def hyperbolic_nodal(rho: float, window=(-3.0, 3.0, 0.0, math.pi)) -> LocalModelFamily:
    """v_rho(zeta) = (e^(zeta - rho), e^-(zeta + rho), 0) on a strip."""
    def f(p, q):
        zeta = p + 1j * q
        return _stack(np.exp(zeta - rho), np.exp(-(zeta + rho)), np.zeros_like(zeta))
    return LocalModelFamily("HyperbolicNodal", {"rho": rho},
                            [Piece("v", f, window, _strip_edges(window), scale=math.exp(-rho))], "strip")


def elliptic_cylinder(t: float, window=(-1.0, 1.0, -1.0, 1.0)) -> LocalModelFamily:
    """u_t(zeta) = (e^zeta, -i e^zeta, i t), written in w = e^zeta with the end w = 0 added."""
    def f(p, q):
        w = p + 1j * q
        return _stack(w, -1j * w, np.full_like(w, 1j * t))
    return LocalModelFamily("EllipticCylinder", {"t": t}, [Piece("u", f, window, [])], "annulus")


def elliptic_nodal(rho: float, r_max: float = 2.0) -> LocalModelFamily:
    """v_rho(zeta) = (e^zeta + e^(-zeta-2rho), i(e^zeta - e^(-zeta-2rho)), 0) on [-rho, inf) x S^1.

    Parametrized by polar coordinates (r, theta) of w = e^zeta, r >= e^-rho.
    """
    r0 = math.exp(-rho)

    def f(p, q):
        w = p * np.exp(1j * q)
        b = np.exp(-2 * rho) / w
        return _stack(w + b, 1j * (w - b), np.zeros_like(w))
    window = (r0, r_max, 0.0, 2 * math.pi)
    # boundary r = r0 of {r >= r0}: boundary orientation is -d(theta)
    return LocalModelFamily("EllipticNodal", {"rho": rho},
                            [Piece("v", f, window, [("p", r0, -1)], scale=r0)], "annulus")


_FACTORIES = {
    "through-gamma": (through_gamma, ("t",)),
    "tangency": (tangency, ("s", "branch")),
    "hyperbolic-pair": (hyperbolic_pair, ("t",)),
    "hyperbolic-nodal": (hyperbolic_nodal, ("rho",)),
    "elliptic-cylinder": (elliptic_cylinder, ("t",)),
    "elliptic-nodal": (elliptic_nodal, ("rho",)),
}


def make_family(name: str, **params) -> LocalModelFamily:
    if name not in _FACTORIES:
        raise KeyError(f"unknown family {name!r}; choose from {sorted(_FACTORIES)}")
    fn, keys = _FACTORIES[name]
    return fn(**{k: params[k] for k in keys if k in params})


# ---------------------------------------------------------------------------
# pushoff and derivatives
# ---------------------------------------------------------------------------

def _cutoff(d):
    # 1 at the edge, 0 beyond the collar, C^1 in between
    x = np.clip(np.asarray(d) / PUSH_COLLAR, 0.0, 1.0)
    return 1.0 - x * x * (3.0 - 2.0 * x)


def _edge_normal(piece: Piece, axis: str, value: float, orient: int, along):
    """Unit normal nu = T x xi along an edge, T the oriented boundary tangent."""
    h = 1e-6
    along = np.asarray(along, dtype=float)
    if axis == "q":
        T = (piece(along + h, np.full_like(along, value)) - piece(along - h, np.full_like(along, value))) / (2 * h)
    else:
        T = (piece(np.full_like(along, value), along + h) - piece(np.full_like(along, value), along - h)) / (2 * h)
    T = orient * T.real
    nu = np.stack([T[..., 1], -T[..., 0], np.zeros_like(T[..., 0])], axis=-1)  # T x e3
    norm = np.linalg.norm(nu, axis=-1, keepdims=True)
    return nu / np.where(norm > 0, norm, 1.0)


def _pushed(piece: Piece, pushoff: bool):
    if not pushoff or not piece.edges:
        return piece.__call__
    p0, p1, q0, q1 = piece.window
    span = {"q": q1 - q0, "p": p1 - p0}

    def g(p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        z = piece(p, q)
        for axis, value, orient in piece.edges:
            dist = np.abs((q if axis == "q" else p) - value) / span[axis]
            c = _cutoff(dist)
            if not np.any(c):
                continue
            along = p if axis == "q" else q
            nu = _edge_normal(piece, axis, value, orient, along)
            z = z + 1j * PUSH_EPS * piece.scale * (c[..., None] * nu)
        return z
    return g


def _frame(g, p, q, h=1e-7) -> np.ndarray:
    dp = (g(p + h, q) - g(p - h, q)) / (2 * h)
    dq = (g(p, q + h) - g(p, q - h)) / (2 * h)
    return np.array([_real6(np.asarray(dp)), _real6(np.asarray(dq))])


# ---------------------------------------------------------------------------
# intersections
# ---------------------------------------------------------------------------

@dataclass
class SignedCount:
    points: list  # (param, target, sign, label)
    total: int
    residual_max: float

    def to_json(self) -> dict:
        return {
            "points": [
                {"param": [float(x) for x in prm], "target": [float(x) for x in _real6(np.asarray(tgt))],
                 "sign": int(sg), "piece": lab}
                for prm, tgt, sg, lab in self.points
            ],
            "total": int(self.total),
            "residual_max": float(self.residual_max),
        }


def _newton(G, p, q, window, iters=60):
    p0, p1, q0, q1 = window
    h = 1e-7
    x = np.array([p, q], dtype=float)
    for _ in range(iters):
        r = np.array(G(x[0], x[1]))
        if np.max(np.abs(r)) < 1e-13:
            break
        J = np.empty((2, 2))
        J[:, 0] = (np.array(G(x[0] + h, x[1])) - np.array(G(x[0] - h, x[1]))) / (2 * h)
        J[:, 1] = (np.array(G(x[0], x[1] + h)) - np.array(G(x[0], x[1] - h))) / (2 * h)
        try:
            step = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            return x, np.inf
        lam = 1.0
        base = np.max(np.abs(r))
        while lam > 1e-4:
            y = x - lam * step
            if np.max(np.abs(np.array(G(y[0], y[1])))) < base or lam < 2e-4:
                break
            lam *= 0.5
        x = x - lam * step
        if not (p0 - 1 <= x[0] <= p1 + 1 and q0 - 1 <= x[1] <= q1 + 1):
            return x, np.inf
    return x, float(np.max(np.abs(np.array(G(x[0], x[1])))))


def chain_intersections(f: LocalModelFamily, chart: ModelChart = STANDARD, window=None,
                        grid: int = GRID, pushoff: bool = True) -> SignedCount:
    """Signed interior intersections of the (pushed-off) family with the 4-chain."""
    points = []
    res_max = 0.0
    for piece in f.pieces:
        win = window or piece.window
        g = _pushed(piece, pushoff)
        P, Q = np.meshgrid(np.linspace(win[0], win[1], grid), np.linspace(win[2], win[3], grid), indexing="ij")
        Z = g(P, Q)
        c1, c2 = chart.constraints(Z)
        cells = sign_change_cells(c1, c2)
        found = []
        periodic = f.domain == "annulus" and piece.edges and abs(win[3] - win[2] - 2 * math.pi) < 1e-12

        def G(p, q):
            z = g(np.array(p), np.array(q))
            a, b = chart.constraints(z)
            return float(a), float(b)

        dp = (win[1] - win[0]) / (grid - 1)
        dq = (win[3] - win[2]) / (grid - 1)
        for i, j in cells:
            x, res = _newton(G, P[i, j] + dp / 2, Q[i, j] + dq / 2, win)
            if not np.isfinite(res) or res > RESIDUAL_TOL:
                continue
            p, q = x
            if periodic:
                q = win[2] + (q - win[2]) % (2 * math.pi)
            tol = 1e-9 * max(1.0, abs(win[1] - win[0]))
            if not (win[0] - tol <= p <= win[1] + tol and win[2] - tol <= q <= win[3] + tol):
                continue
            # points on an edge mapped into L are boundary points, not interior intersections
            on_edge = any(abs((q if ax == "q" else p) - val) < 1e-7 * max(1.0, abs(val)) for ax, val, _ in piece.edges)
            if on_edge:
                continue
            if any(abs(p - a) < 1e-6 and abs(q - b) < 1e-6 for a, b in found):
                continue
            found.append((p, q))
            res_max = max(res_max, res)
            z = g(np.array(p), np.array(q))
            label, cframe = chart.frames(np.asarray(z))
            M = np.vstack([_frame(g, p, q), cframe]).T
            det = np.linalg.det(M)
            if abs(det) < TRANSVERSE_TOL:
                raise NonTransverseError(f"non-transverse intersection at param ({p:.6g}, {q:.6g}), det={det:.3g}")
            points.append(((p, q), np.asarray(z), int(np.sign(det)), f"{piece.name}:{label}"))
    return SignedCount(points, sum(pt[2] for pt in points), res_max)


def _boundary_curves(f: LocalModelFamily, window=None):
    """Yield (piece, along-range, curve(tau) -> R^3 array, orient) for edges in L."""
    for piece in f.pieces:
        win = window or piece.window
        for axis, value, orient in piece.edges:
            if axis == "q":
                lo, hi = win[0], win[1]
                curve = (lambda pc, v: lambda tau: pc(np.asarray(tau), np.full_like(np.asarray(tau, dtype=float), v)).real)(piece, value)
            else:
                lo, hi = win[2], win[3]
                curve = (lambda pc, v: lambda tau: pc(np.full_like(np.asarray(tau, dtype=float), v), np.asarray(tau)).real)(piece, value)
            yield piece, (lo, hi), curve, orient


def boundary_sigma_intersections(f: LocalModelFamily, chart: ModelChart = GAMMA, window=None,
                                 samples: int = 2001) -> SignedCount:
    """Signed intersections of the boundary curve with sigma = {x1 <= 0, x2 = 0}."""
    if chart is not GAMMA:
        raise ValueError("boundary/sigma intersections need the gamma chart")
    points = []
    res_max = 0.0
    for piece, (lo, hi), curve, orient in _boundary_curves(f, window):
        taus = np.linspace(lo, hi, samples)
        X = curve(taus)
        x2 = X[..., 1]
        x2 = np.where(np.abs(x2) < 1e-300, 0.0, x2)
        roots = []
        for k in range(samples - 1):
            a, b = x2[k], x2[k + 1]
            if a == 0.0:
                roots.append(taus[k])
            elif a * b < 0:
                roots.append(brentq(lambda s: float(curve(np.array(s))[1]), taus[k], taus[k + 1], xtol=1e-14))
        if samples and x2[-1] == 0.0:
            roots.append(taus[-1])
        for tau in roots:
            x = curve(np.array(tau))
            if abs(x[0]) < 1e-9:
                raise DegenerateError(f"boundary point {x} lies on gamma")
            if x[0] > 0:
                continue
            h = 1e-7
            T = orient * (curve(np.array(tau + h)) - curve(np.array(tau - h))) / (2 * h)
            det = np.linalg.det(np.vstack([T, SIGMA_FRAME]).T)
            if abs(det) < TRANSVERSE_TOL:
                raise NonTransverseError(f"boundary tangent to sigma at {x}")
            res_max = max(res_max, abs(float(x[1])))
            tgt = np.array([x[0], x[1], x[2]], dtype=complex)
            points.append(((float(tau),), tgt, int(np.sign(det)), f"{piece.name}:sigma"))
    return SignedCount(points, sum(p[2] for p in points), res_max)


def linking_number(f: LocalModelFamily, chart: ModelChart = GAMMA, window=None) -> int:
    """u_{J nu} . C + boundary . sigma."""
    total = chain_intersections(f, chart, window).total
    if chart is GAMMA:
        total += boundary_sigma_intersections(f, chart, window).total
    return total


# ---------------------------------------------------------------------------
# tangency framing
# ---------------------------------------------------------------------------

def _double_points(curve, lo, hi, samples=4001):
    """Self-intersections of the (x1, x2) projection of a real curve."""
    taus = np.linspace(lo, hi, samples)
    X = curve(taus)[:, :2]
    out = []
    segs = X[1:] - X[:-1]
    for a in range(samples - 1):
        # vectorized test of segment a against later, non-adjacent segments
        b = np.arange(a + 2, samples - 1)
        if b.size == 0:
            continue
        p, r = X[a], segs[a]
        qv, sv = X[b], segs[b]
        rxs = r[0] * sv[:, 1] - r[1] * sv[:, 0]
        qp = qv - p
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (qp[:, 0] * sv[:, 1] - qp[:, 1] * sv[:, 0]) / rxs
            u = (qp[:, 0] * r[1] - qp[:, 1] * r[0]) / rxs
        hit = (np.abs(rxs) > 0) & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
        for k in np.nonzero(hit)[0]:
            out.append((taus[a] + t[k] * (taus[1] - taus[0]), taus[b[k]] + u[k] * (taus[1] - taus[0])))
    return out


def projected_writhe(f: LocalModelFamily, s: float | None = None) -> int:
    """Writhe of the boundary projected along xi (viewer at +x3)."""
    if f.kind != "Tangency":
        raise ValueError("projected writhe is defined for the tangency family")
    s = f.params["s"] if s is None else s
    if s == 0:
        raise ValueError("s = 0 is the cusp; the projection is singular")
    fam = tangency(s, f.params["branch"])
    total = 0
    for piece, (lo, hi), curve, orient in _boundary_curves(fam):
        h = 1e-7
        for t1, t2 in _double_points(curve, lo, hi):
            # refine the pair with Newton on x12(t1) = x12(t2)
            x = np.array([t1, t2])
            for _ in range(30):
                r = curve(np.array(x[0]))[:2] - curve(np.array(x[1]))[:2]
                J = np.column_stack([(curve(np.array(x[0] + h))[:2] - curve(np.array(x[0] - h))[:2]) / (2 * h),
                                     -(curve(np.array(x[1] + h))[:2] - curve(np.array(x[1] - h))[:2]) / (2 * h)])
                x = x - np.linalg.solve(J, r)
            P1, P2 = curve(np.array(x[0])), curve(np.array(x[1]))
            T1 = orient * (curve(np.array(x[0] + h)) - curve(np.array(x[0] - h))) / (2 * h)
            T2 = orient * (curve(np.array(x[1] + h)) - curve(np.array(x[1] - h))) / (2 * h)
            over, under = (T1, T2) if P1[2] > P2[2] else (T2, T1)
            total += int(np.sign(over[0] * under[1] - over[1] * under[0]))
    return total


def framing_balance(branch: int, s0: float) -> bool:
    """Writhe plus chain count agrees on the two sides of the tangency."""
    if s0 <= 0:
        raise ValueError("s0 must be positive")
    lhs = projected_writhe(tangency(-s0, branch)) + chain_intersections(tangency(-s0, branch)).total
    rhs = projected_writhe(tangency(s0, branch)) + chain_intersections(tangency(s0, branch)).total
    return lhs == rhs


# ---------------------------------------------------------------------------
# nodal convergence
# ---------------------------------------------------------------------------

def elliptic_boundary_radius(rho: float, samples: int = 721) -> tuple:
    """(mean radius, max deviation) of the image of the boundary circle in the x1x2-plane."""
    fam = elliptic_nodal(rho)
    piece = fam.pieces[0]
    theta = np.linspace(0, 2 * math.pi, samples)
    z = piece(np.full_like(theta, math.exp(-rho)), theta)
    if np.max(np.abs(z.imag)) > 1e-12:
        raise RuntimeError("boundary circle is not in L")
    rad = np.hypot(z[:, 0].real, z[:, 1].real)
    return float(rad.mean()), float(rad.max() - rad.min())


def convergence_check(smooth: LocalModelFamily, nodal: LocalModelFamily, rho: float | None = None,
                      window=(-1.0, 1.0), samples: int = 201) -> dict:
    """Sup distance between the translated nodal family and its limit on a window.

    Hyperbolic: v_rho(zeta + rho) against u^1_0 over Re(zeta) in ``window``.
    Elliptic: v_rho against the limit (e^zeta, i e^zeta, 0) over Re(zeta) in
    ``window``; the report also carries the boundary circle radius.
    """
    rho = nodal.params["rho"] if rho is None else rho
    xs = np.linspace(window[0], window[1], samples)
    out = {"rho": rho}
    if nodal.kind == "HyperbolicNodal":
        ys = np.linspace(0, math.pi, samples)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        v = hyperbolic_nodal(rho).pieces[0](X + rho, Y)
        u = smooth.pieces[0](X, Y)
        out["sup_distance"] = float(np.max(np.linalg.norm(v - u, axis=-1)))
        out["bound"] = math.exp(window[1] - 2 * rho)
    elif nodal.kind == "EllipticNodal":
        ys = np.linspace(0, 2 * math.pi, samples)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        v = elliptic_nodal(rho).pieces[0](np.exp(X), Y)
        w = np.exp(X + 1j * Y)
        lim = np.stack([w, 1j * w, np.zeros_like(w)], axis=-1)
        out["sup_distance"] = float(np.max(np.linalg.norm(v - lim, axis=-1)))
        out["bound"] = math.sqrt(2) * math.exp(-window[0] - 2 * rho)
        out["radius"], out["radius_spread"] = elliptic_boundary_radius(rho)
    else:
        raise ValueError(f"no convergence model for {nodal.kind}")
    return out


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def report(f: LocalModelFamily, chart: ModelChart | None = None) -> dict:
    """JSON-ready report for one family at one parameter value."""
    if chart is None:
        chart = GAMMA if f.kind == "ThroughGamma" else STANDARD
    chain = chain_intersections(f, chart)
    data = chain.to_json()
    data["family"] = f.kind
    data["params"] = dict(f.params)
    data["chart"] = chart.name
    if chart is GAMMA:
        sig = boundary_sigma_intersections(f, chart)
        data["sigma"] = sig.to_json()
        data["linking"] = chain.total + sig.total
        data["residual_max"] = max(chain.residual_max, sig.residual_max)
    if f.kind == "Tangency" and f.params["s"] != 0:
        data["writhe"] = projected_writhe(f)
    if f.kind == "EllipticNodal":
        data["radius"], data["radius_spread"] = elliptic_boundary_radius(f.params["rho"])
    if f.kind == "HyperbolicNodal":
        conv = convergence_check(hyperbolic_pair(0.0), f)
        data["sup_distance"] = conv["sup_distance"]
    return data


def report_json(f: LocalModelFamily, chart: ModelChart | None = None) -> str:
    return json.dumps(report(f, chart), indent=2)
