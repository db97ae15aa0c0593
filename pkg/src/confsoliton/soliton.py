"""Conformal soliton structure of the tangential position field ``V^T``.

The Lie derivative ``(1/2) L_{V^T} g`` is computed twice: directly from
its coordinate formula with exact jet derivatives, and through the shape
operator as ``g + eps_N lambda b``. Their agreement, together with the
gradient structure of ``V^T`` and the trace relation ``phi - 1 = lambda
alpha``, is what :func:`soliton_check` certifies.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import POINT_ERRORS, EmptyGrid
from .hypersurface import curvature_residuals_of, frame_at
from .jet import Jet3

SOLITON_TOL = 1e-8
BORDERLINE_TOL = 1e-4
IDENTITY_TOL = 1e-9
MINIMAL_TOL = 1e-10
UMBILIC_LAMBDA_MIN = 0.01


class SolitonVerdict(str, Enum):
    IS_SOLITON = "IS_SOLITON"
    BORDERLINE = "BORDERLINE"
    NOT_SOLITON = "NOT_SOLITON"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PositionSplit:
    vT: np.ndarray  # chart components of V^T
    v_perp_coef: float  # V^perp = v_perp_coef * N
    f: float  # (1/2) g~(x, x)
    gradf: np.ndarray


def split_position(frame):
    """Tangential/normal split of the position vector and the potential ``f``.

    ``gradf`` is read off a separately built jet of ``f`` so that the
    gradient-soliton identity ``grad f = V^T`` is a genuine comparison.
    """
    S = frame.ambient.signs
    c = frame.tangents @ (S * frame.x)
    vT = frame.g.inverse @ c
    n = frame.n
    f_jet = Jet3.constant(0.0, n)
    for sign, comp in zip(S, frame.jets):
        f_jet = f_jet + (0.5 * sign) * (comp * comp)
    return PositionSplit(
        vT=vT,
        v_perp_coef=frame.eps_N * frame.lam,
        f=f_jet.v,
        gradf=frame.g.inverse @ f_jet.d1,
    )


def tangential_derivative(frame):
    """``[i, k] = d_i t^k`` for ``V^T = t^k d_k x``."""
    S = frame.ambient.signs
    ginv = frame.g.inverse
    c = frame.tangents @ (S * frame.x)
    t = ginv @ c
    # d_i c_j = g_ij + g~(x, d_i d_j x)
    dc = frame.g.entries + np.einsum("a,aij->ij", S * frame.x, frame.second)
    return np.einsum("kl,il->ik", ginv, dc - np.einsum("ilj,j->il", frame.dg, t))


def lie_derivative_from_frame(frame):
    """Half Lie derivative of ``g`` along ``V^T`` from its coordinate formula."""
    split = split_position(frame)
    t = split.vT
    dt = tangential_derivative(frame)
    g = frame.g.entries
    half = 0.5 * (
        np.einsum("k,kij->ij", t, frame.dg)
        + np.einsum("kj,ik->ij", g, dt)
        + np.einsum("ik,jk->ij", g, dt)
    )
    return half


def lie_derivative_direct(chart, point):
    return lie_derivative_from_frame(frame_at(chart, point))


def lie_derivative_via_shape(frame):
    """``g + eps_N lambda b``: the half Lie derivative through ``A_{V^perp}``."""
    return frame.g.entries + frame.eps_N * frame.lam * frame.b


def conformal_factor(frame, half_lie):
    """Best-fit ``phi`` (metric trace) and the normalised residual."""
    n = frame.n
    g = frame.g.entries
    phi = float(np.trace(frame.g.inverse @ half_lie)) / n
    residual = float(np.max(np.abs(half_lie - phi * g)) / np.max(np.abs(g)))
    return phi, residual


@dataclass(frozen=True)
class SolitonPointData:
    point: np.ndarray
    x: np.ndarray
    vT: np.ndarray
    v_perp_coef: float
    f: float
    gradf: np.ndarray
    lie: np.ndarray
    lie_via_shape: np.ndarray
    phi: float
    residual: float
    lam: float
    alpha: float
    eps_N: int
    kappa: np.ndarray  # eigenvalues of A (complex)
    g_max: float
    gauss: float
    codazzi: float
    frame: object = field(repr=False, compare=False)

    @property
    def lie_mismatch(self):
        """``|lie_direct - lie_via_shape|_max / |g|_max``."""
        return float(np.max(np.abs(self.lie - self.lie_via_shape))) / self.g_max

    @property
    def shape_relation_mismatch(self):
        """``|(phi - 1) g - eps_N lambda b|_max / |g|_max``."""
        f = self.frame
        diff = (self.phi - 1.0) * f.g.entries - f.eps_N * f.lam * f.b
        return float(np.max(np.abs(diff))) / self.g_max

    @property
    def gradient_mismatch(self):
        return float(np.max(np.abs(self.gradf - self.vT)))

    @property
    def trace_mismatch(self):
        return abs(self.phi - 1.0 - self.lam * self.alpha)

    @property
    def umbilic_mismatch(self):
        """``max_i |eps_N lambda kappa_i - (phi - 1)|``."""
        return float(np.max(np.abs(self.eps_N * self.lam * self.kappa - (self.phi - 1.0))))

    @property
    def trace_A(self):
        return float(np.trace(self.frame.A))


def soliton_point(chart, point, with_curvature=True):
    frame = frame_at(chart, point)
    split = split_position(frame)
    lie = lie_derivative_from_frame(frame)
    phi, residual = conformal_factor(frame, lie)
    res = curvature_residuals_of(frame) if with_curvature else None
    return SolitonPointData(
        point=frame.point, x=frame.x, vT=split.vT, v_perp_coef=split.v_perp_coef,
        f=split.f, gradf=split.gradf, lie=lie, lie_via_shape=lie_derivative_via_shape(frame),
        phi=phi, residual=residual, lam=frame.lam, alpha=frame.alpha, eps_N=frame.eps_N,
        kappa=np.linalg.eigvals(frame.A).astype(complex),
        g_max=float(np.max(np.abs(frame.g.entries))),
        gauss=res.gauss if res else float("nan"),
        codazzi=res.codazzi if res else float("nan"),
        frame=frame,
    )


@dataclass(frozen=True)
class OracleResult:
    name: str
    identity: str
    status: str  # PASS, FAIL or SKIPPED
    worst: float
    threshold: float
    points: int

    def as_dict(self):
        return {
            "name": self.name,
            "identity": self.identity,
            "status": self.status,
            "worst": _finite(self.worst),
            "threshold": self.threshold,
            "points": self.points,
        }


def _finite(v):
    return float(v) if v is not None and np.isfinite(v) else None


def _oracle(name, identity, values, threshold, skip=False):
    values = [float(v) for v in values]
    if skip or not values:
        return OracleResult(name, identity, "SKIPPED", float("nan"), threshold, 0)
    worst = max(values)
    status = "PASS" if worst <= threshold else "FAIL"
    return OracleResult(name, identity, status, worst, threshold, len(values))


@dataclass(frozen=True)
class SolitonReport:
    points: tuple  # SolitonPointData, grid order
    excluded: tuple  # (point, reason)
    verdict: SolitonVerdict
    max_residual: float
    minimal: bool
    oracles: tuple

    @property
    def phi(self):
        return np.array([p.phi for p in self.points])

    @property
    def is_soliton(self):
        return self.verdict is SolitonVerdict.IS_SOLITON

    def oracle(self, name):
        for o in self.oracles:
            if o.name == name:
                return o
        raise KeyError(name)


def collect_points(chart, grid, with_curvature=True):
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise EmptyGrid("no sample points given")
    data, excluded = [], []
    for p in grid:
        try:
            data.append(soliton_point(chart, p, with_curvature))
        except POINT_ERRORS as exc:
            excluded.append((tuple(float(v) for v in p), f"{type(exc).__name__}: {exc}"))
    if not data:
        raise EmptyGrid(f"all {len(grid)} sample points were excluded")
    return data, excluded


def soliton_check(chart, grid, soliton_tol=SOLITON_TOL, borderline_tol=BORDERLINE_TOL,
                  identity_tol=IDENTITY_TOL, minimal_tol=MINIMAL_TOL):
    """Fit ``phi`` pointwise, decide the soliton verdict and run the identity battery."""
    data, excluded = collect_points(chart, grid)
    max_res = max(d.residual for d in data)
    if max_res <= soliton_tol:
        verdict = SolitonVerdict.IS_SOLITON
    elif max_res <= borderline_tol:
        verdict = SolitonVerdict.BORDERLINE
    else:
        verdict = SolitonVerdict.NOT_SOLITON
    minimal = max(abs(d.trace_A) for d in data) <= minimal_tol
    is_sol = verdict is SolitonVerdict.IS_SOLITON
    concurrent = is_sol and all(abs(d.v_perp_coef) <= minimal_tol * (1 + np.abs(d.x).max())
                                for d in data)
    umbilic_pts = [d for d in data if abs(d.lam) > UMBILIC_LAMBDA_MIN]

    oracles = (
        _oracle("lie_derivative_shape_identity",
                "(1/2) L_{V^T} g = g + eps_N lambda b",
                [d.lie_mismatch for d in data], identity_tol),
        _oracle("soliton_shape_relation",
                "(phi - 1) g(X, Y) = g(A_{V^perp} X, Y) on solitons",
                [d.shape_relation_mismatch for d in data], identity_tol, skip=not is_sol),
        _oracle("gradient_structure",
                "V^T = grad f with f = (1/2) <x, x>",
                [d.gradient_mismatch for d in data], 1e-10),
        _oracle("trace_identity",
                "phi - 1 = lambda alpha",
                [d.trace_mismatch for d in data], 1e-10),
        _oracle("minimal_phi_one",
                "tr A = 0 implies phi = 1",
                [abs(d.phi - 1.0) for d in data], identity_tol, skip=not minimal),
        _oracle("umbilic_forcing",
                "phi - 1 = eps_N lambda kappa_i for every principal curvature",
                [d.umbilic_mismatch for d in umbilic_pts], 1e-8, skip=not is_sol),
        _oracle("concurrent_tangent_phi_one",
                "V = V^T implies (1/2) L g = g and phi = 1",
                [max(abs(d.phi - 1.0), float(np.max(np.abs(d.lie - d.frame.g.entries))))
                 for d in data], identity_tol, skip=not concurrent),
        _oracle("gauss_equation",
                "Rm_ijkl = eps_N (b_il b_jk - b_ik b_jl)",
                [d.gauss for d in data], identity_tol),
        _oracle("codazzi_equation",
                "(nabla_i b)_jk = (nabla_j b)_ik",
                [d.codazzi for d in data], identity_tol),
    )
    return SolitonReport(
        points=tuple(data), excluded=tuple(excluded), verdict=verdict,
        max_residual=max_res, minimal=minimal, oracles=oracles,
    )
