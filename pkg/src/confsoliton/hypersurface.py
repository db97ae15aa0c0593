"""Pointwise extrinsic geometry of a hypersurface from third-order jets.

Conventions:

* ``b_ij = g~(d_i d_j x, N)`` and ``h(d_i, d_j) = eps_N b_ij N``;
* shape operator ``A = g^-1 b`` so that ``g(A X, Y) = g~(h(X, Y), N)``;
* mean curvature ``alpha = eps_N tr(A) / n`` so that ``H = alpha N``;
* support function ``lambda = g~(N, x)``;
* ``N`` is the normalised generalised cross product of the tangents in the
  chart's variable order. Reversing the variable order flips ``N``.
"""

from dataclasses import dataclass

import numpy as np

from .chart import eval_chart, stack_jets
from .errors import DegenerateMetric, UnsupportedIndex
from .linalg import (
    JORDAN_TOL,
    NULL_NORMAL_TOL,
    ShapeType,
    cofactor_covector,
    eigen_structure,
    normalize_normal,
)

DEGENERATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MetricMatrix:
    entries: np.ndarray
    inverse: np.ndarray
    det: float

    @classmethod
    def from_entries(cls, g, scale=1.0, tol=DEGENERATE_TOL):
        g = np.asarray(g, dtype=float)
        n = g.shape[0]
        det = float(np.linalg.det(g))
        # det g scales like |tangent|^(2n)
        if abs(det) < tol * scale ** (2 * n):
            raise DegenerateMetric(f"induced metric is degenerate: det g = {det:.3e}")
        return cls(g, np.linalg.inv(g), det)

    @property
    def index(self):
        """Number of negative eigenvalues."""
        return int(np.sum(np.linalg.eigvalsh(self.entries) < 0))


@dataclass(frozen=True, eq=False)
class FrameData:
    point: np.ndarray
    x: np.ndarray
    tangents: np.ndarray  # (n, n+1), row i is d_i x
    g: MetricMatrix
    N: np.ndarray
    eps_N: int
    b: np.ndarray
    A: np.ndarray
    alpha: float
    lam: float
    christoffel: np.ndarray  # [k, i, j] = Gamma^k_ij
    dg: np.ndarray  # [k, i, j] = d_k g_ij
    dN: np.ndarray  # (n, n+1), row i is d_i N
    second: np.ndarray  # (n+1, n, n) second derivatives of x
    third: np.ndarray  # (n+1, n, n, n)
    jets: tuple
    ambient: object

    @property
    def n(self):
        return self.tangents.shape[0]

    @property
    def kappa(self):
        return eigen_structure(self.A)

    @property
    def principal_curvatures(self):
        return np.sort_complex(np.linalg.eigvals(self.A).astype(complex))

    @property
    def support_times_mean(self):
        """``lambda * alpha``; unchanged when the normal is flipped."""
        return self.lam * self.alpha


def _normal_and_derivative(T, X2, G, null_tol):
    """Unit normal and its chart derivatives, differentiated through the cofactor."""
    n = T.shape[0]
    w = G.signs * cofactor_covector(T)
    N, eps = normalize_normal(w, G, null_tol)
    dw = np.zeros((n, n + 1))
    for i in range(n):
        for r in range(n):
            Tr = T.copy()
            Tr[r] = X2[:, r, i]
            dw[i] += G.signs * cofactor_covector(Tr)
    q = float(np.sum(G.signs * w * w))
    s = np.sqrt(abs(q))
    ds = np.sign(q) * (dw * G.signs * w).sum(axis=1) / s
    dN = dw / s - np.outer(ds, w) / s ** 2
    return N, eps, dN


def frame_from_jets(jets, ambient, point=None, degenerate_tol=DEGENERATE_TOL,
                    null_tol=NULL_NORMAL_TOL):
    x, X1, X2, X3 = stack_jets(jets)
    S = ambient.signs
    T = X1.T.copy()
    n = T.shape[0]
    scale = float(np.max(np.linalg.norm(T, axis=1)))
    g_entries = np.einsum("ia,a,ja->ij", T, S, T)
    g = MetricMatrix.from_entries(g_entries, scale, degenerate_tol)
    N, eps, dN = _normal_and_derivative(T, X2, ambient, null_tol)

    b = np.einsum("aij,a,a->ij", X2, S, N)
    A = g.inverse @ b
    alpha = eps * float(np.trace(A)) / n
    lam = float(np.sum(S * N * x))

    # d_k g_ij = g~(d_k d_i x, d_j x) + g~(d_i x, d_k d_j x)
    t = np.einsum("aki,a,aj->kij", X2, S, X1)
    dg = t + t.transpose(0, 2, 1)
    first_kind = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)  # [l, i, j] = Gamma_{l,ij}
    gamma = np.einsum("kl,lij->kij", g.inverse, first_kind)

    return FrameData(
        point=np.asarray(point if point is not None else np.full(n, np.nan), dtype=float),
        x=x, tangents=T, g=g, N=N, eps_N=eps, b=b, A=A, alpha=alpha, lam=lam,
        christoffel=gamma, dg=dg, dN=dN, second=X2, third=X3,
        jets=tuple(jets), ambient=ambient,
    )


def frame_at(chart, point, degenerate_tol=DEGENERATE_TOL, null_tol=NULL_NORMAL_TOL):
    """Full pointwise geometric state of ``chart`` at ``point``."""
    p = np.asarray(point, dtype=float).ravel()
    return frame_from_jets(eval_chart(chart, p), chart.ambient, p, degenerate_tol, null_tol)


def christoffel_by_projection(frame):
    """Christoffels from the tangential part of ``d_i d_j x`` (cross-check only)."""
    S = frame.ambient.signs
    first_kind = np.einsum("aij,a,la->lij", frame.second, S, frame.tangents)
    return np.einsum("kl,lij->kij", frame.g.inverse, first_kind)


def riemann_lower(frame):
    """``Rm_ijkl = g(R(d_i, d_j) d_k, d_l)`` from Christoffels and their derivatives."""
    S = frame.ambient.signs
    X1 = frame.tangents.T
    X2, X3 = frame.second, frame.third
    ginv = frame.g.inverse
    gamma = frame.christoffel
    dg = frame.dg
    # [m, k, i, j] = d_m d_k g_ij
    ddg = (
        np.einsum("amki,a,aj->mkij", X3, S, X1)
        + np.einsum("aki,a,amj->mkij", X2, S, X2)
        + np.einsum("ami,a,akj->mkij", X2, S, X2)
        + np.einsum("ai,a,amkj->mkij", X1, S, X3)
    )
    first_kind = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    # [m, l, i, j] = d_m Gamma_{l,ij}
    d_first = 0.5 * (
        np.einsum("mijl->mlij", ddg) + np.einsum("mjil->mlij", ddg) - ddg
    )
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    dgamma = np.einsum("mkl,lij->mkij", dginv, first_kind) + np.einsum(
        "kl,mlij->mkij", ginv, d_first
    )  # [m, k, i, j] = d_m Gamma^k_ij
    # R^m_{ijk} = d_i G^m_jk - d_j G^m_ik + G^p_jk G^m_ip - G^p_ik G^m_jp
    R = (
        np.einsum("imjk->mijk", dgamma)
        - np.einsum("jmik->mijk", dgamma)
        + np.einsum("pjk,mip->mijk", gamma, gamma)
        - np.einsum("pik,mjp->mijk", gamma, gamma)
    )
    return np.einsum("lm,mijk->ijkl", frame.g.entries, R)


def codazzi_tensor(frame):
    """``C_ijk = d_i b_jk - Gamma^m_ij b_mk - Gamma^m_ik b_jm``."""
    S = frame.ambient.signs
    db = np.einsum("aijk,a,a->ijk", frame.third, S, frame.N) + np.einsum(
        "ajk,a,ia->ijk", frame.second, S, frame.dN
    )
    gamma, b = frame.christoffel, frame.b
    return db - np.einsum("mij,mk->ijk", gamma, b) - np.einsum("mik,jm->ijk", gamma, b)


@dataclass(frozen=True)
class CurvatureResiduals:
    gauss: float
    codazzi: float


def curvature_residuals_of(frame):
    b = frame.b
    rm = riemann_lower(frame)
    expected = frame.eps_N * (
        np.einsum("il,jk->ijkl", b, b) - np.einsum("ik,jl->ijkl", b, b)
    )
    C = codazzi_tensor(frame)
    return CurvatureResiduals(
        gauss=float(np.max(np.abs(rm - expected))),
        codazzi=float(np.max(np.abs(C - C.transpose(1, 0, 2)))),
    )


def curvature_residuals(chart, point):
    return curvature_residuals_of(frame_at(chart, point))


def shape_operator_type(frame, tol=JORDAN_TOL):
    """Canonical algebraic type of the shape operator (ambient index 0 or 1)."""
    s = frame.ambient.index
    if s >= 2:
        raise UnsupportedIndex(f"canonical shape-operator types are tabulated for index 0 and 1, got {s}")
    report = eigen_structure(frame.A, tol)
    if s == 0:
        # g is positive definite, A is g-symmetric
        assert report.type_tag is ShapeType.DIAGONALIZABLE_REAL, report
    return report
