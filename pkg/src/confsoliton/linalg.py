"""Signature-aware linear algebra on pseudo-Euclidean space.

The ambient metric is ``diag(-1, ..., -1, +1, ..., +1)`` with the negative
axes first. Everything here is a pure function of its arguments.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import ContractViolation, NullNormal

NULL_NORMAL_TOL = 1e-10
JORDAN_TOL = 1e-7
_SUBSET_SEARCH_MAX = 10


@dataclass(frozen=True)
class AmbientMetric:
    """Flat metric of index ``index`` on R^dim."""

    dim: int
    index: int = 0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ContractViolation(f"dim must be a positive integer, got {self.dim!r}")
        if int(self.index) != self.index or not 0 <= self.index <= self.dim:
            raise ContractViolation(f"index must satisfy 0 <= index <= dim, got {self.index!r}")

    @cached_property
    def signs(self):
        s = np.ones(self.dim)
        s[: self.index] = -1.0
        s.flags.writeable = False
        return s

    @property
    def matrix(self):
        return np.diag(self.signs)


def ambient_dot(a, b, G):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != G.dim or b.shape[-1] != G.dim:
        raise ContractViolation(
            f"vectors of length {a.shape[-1]} and {b.shape[-1]} for ambient dimension {G.dim}"
        )
    return np.sum(G.signs * a * b, axis=-1)


def cofactor_covector(tangents):
    """Covector ``w_a = det([e_a; t_1; ...; t_n])``.

    Euclidean-orthogonal to every row of ``tangents`` and multilinear in
    the rows, so its derivative follows by replacing one row at a time.
    """
    T = np.asarray(tangents, dtype=float)
    n, m = T.shape
    if m != n + 1:
        raise ContractViolation(f"need dim-1 tangents, got {n} of length {m}")
    out = np.empty(m)
    for a in range(m):
        minor = np.delete(T, a, axis=1)
        out[a] = (-1.0) ** a * (np.linalg.det(minor) if n else 1.0)
    return out


def generalized_cross(tangents, G):
    """Metric-raised cofactor of ``n`` tangent vectors in ``R^(n+1)``.

    The result is ``g~``-orthogonal to every tangent and vanishes exactly
    when the tangents are linearly dependent.
    """
    T = np.asarray(tangents, dtype=float)
    if T.ndim != 2 or T.shape != (G.dim - 1, G.dim):
        raise ContractViolation(f"expected {G.dim - 1} tangents of length {G.dim}, got shape {T.shape}")
    return G.signs * cofactor_covector(T)


def normalize_normal(w, G, tol=NULL_NORMAL_TOL):
    """Return ``(N, eps_N)`` with ``g~(N, N) = eps_N``.

    Raises NullNormal when ``|g~(w, w)| <= tol * |w|^2`` (Euclidean norm).
    """
    w = np.asarray(w, dtype=float)
    q = float(ambient_dot(w, w, G))
    scale = float(w @ w)
    if scale == 0.0 or abs(q) <= tol * scale:
        raise NullNormal(f"normal direction is null: g(w,w)={q:.3e}, |w|^2={scale:.3e}")
    return w / np.sqrt(abs(q)), (1 if q > 0 else -1)


class ShapeType(str, Enum):
    """Canonical algebraic types of a self-adjoint operator in Lorentzian signature."""

    DIAGONALIZABLE_REAL = "DiagonalizableReal"
    COMPLEX_PAIR = "ComplexPair"
    JORDAN2 = "Jordan2"
    JORDAN3 = "Jordan3"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    algebraic: int
    geometric: int
    max_block: int


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: tuple
    clusters: tuple
    type_tag: ShapeType
    # smallest ratio (singular value kept as nonzero) / (rank threshold);
    # values near 1 flag a borderline type decision
    margin: float
    scale: float = field(default=1.0)

    @property
    def real_eigenvalues(self):
        return tuple(sorted(c.value.real for c in self.clusters for _ in range(c.algebraic)
                            if c.value.imag == 0.0))

    def as_pairs(self):
        return [(float(z.real), float(z.imag)) for z in self.eigenvalues]


def _cluster_radius(m, base_radius, scale):
    return max(base_radius, (100 * np.finfo(float).eps) ** (1.0 / m) * scale)


def _spread(vals):
    vals = np.asarray(vals)
    return float(np.max(np.abs(vals - vals.mean())))


def _cluster(eigs, base_radius, scale):
    """Group eigenvalues, loosened for defective eigenvalue splitting.

    A group of ``m`` computed eigenvalues is accepted when every member lies
    within ``max(base_radius, (100 eps)^(1/m) * scale)`` of the group mean:
    a Jordan block of size m perturbed at rounding level splits by about
    ``eps^(1/m)``. Larger groups are searched first, since the members of a
    split block need not be pairwise close at the two-member radius.
    """
    remaining = sorted(range(len(eigs)), key=lambda k: (eigs[k].real, eigs[k].imag))
    groups = []
    if len(eigs) <= _SUBSET_SEARCH_MAX:
        for m in range(len(remaining), 1, -1):
            radius = _cluster_radius(m, base_radius, scale)
            while len(remaining) >= m:
                best = None
                for combo in combinations(remaining, m):
                    sp = _spread([eigs[k] for k in combo])
                    if sp <= radius and (best is None or sp < best[0]):
                        best = (sp, combo)
                if best is None:
                    break
                groups.append(list(best[1]))
                remaining = [k for k in remaining if k not in best[1]]
        return groups + [[k] for k in remaining]

    # large matrices: agglomerate pairs of groups
    groups = [[k] for k in remaining]
    while True:
        best = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                members = groups[a] + groups[b]
                sp = _spread([eigs[k] for k in members])
                if sp <= _cluster_radius(len(members), base_radius, scale) and (
                        best is None or sp < best[0]):
                    best = (sp, a, b)
        if best is None:
            return groups
        _, a, b = best
        groups[a] = groups[a] + groups[b]
        del groups[b]


def _nullity(B, thresh):
    s = np.linalg.svd(B, compute_uv=False)
    return int(np.sum(s <= thresh)), s


def eigen_structure(A, tol=JORDAN_TOL):
    """Spectral report of a real square matrix with a canonical type tag.

    Eigenvalues are clustered (see ``_cluster``), then each real cluster is
    probed with the ranks of ``(A - kI)^k`` to find its largest Jordan
    block. Complex clusters give ``ComplexPair``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractViolation(f"square matrix required, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractViolation("matrix has non-finite entries")
    n = A.shape[0]
    scale = max(1.0, float(np.linalg.norm(A, 2)))
    eigs = np.linalg.eigvals(A).astype(complex)
    base_radius = tol * scale
    groups = _cluster(list(eigs), base_radius, scale)

    clusters = []
    margin = np.inf
    tag = ShapeType.DIAGONALIZABLE_REAL
    rank_order = {ShapeType.DIAGONALIZABLE_REAL: 0, ShapeType.COMPLEX_PAIR: 1,
                  ShapeType.JORDAN2: 2, ShapeType.JORDAN3: 3}
    for members in groups:
        vals = np.array([eigs[k] for k in members])
        mean = complex(vals.mean())
        m = len(members)
        spread = float(np.max(np.abs(vals - mean)))
        if abs(mean.imag) > max(base_radius, spread):
            clusters.append(EigenCluster(mean, m, m, 1))
            if rank_order[ShapeType.COMPLEX_PAIR] > rank_order[tag]:
                tag = ShapeType.COMPLEX_PAIR
            continue
        kappa = mean.real
        B = A - kappa * np.eye(n)
        thresh = max(base_radius, 1e3 * spread)
        geo, s = _nullity(B, thresh)
        kept = s[s > thresh]
        if kept.size:
            margin = min(margin, float(kept.min() / thresh))
        geo = min(max(geo, 1), m)
        max_block = 1
        if geo < m:
            # largest block = smallest k with nullity(B^k) reaching m
            Bk = B.copy()
            for k in range(2, m + 1):
                Bk = Bk @ B
                nk, _ = _nullity(Bk, thresh * max(1.0, np.linalg.norm(B, 2)) ** (k - 1))
                if nk >= m:
                    max_block = k
                    break
            else:
                max_block = m - geo + 1
        clusters.append(EigenCluster(complex(kappa, 0.0), m, geo, max_block))
        if max_block >= 3:
            cand = ShapeType.JORDAN3
        elif max_block == 2:
            cand = ShapeType.JORDAN2
        else:
            cand = ShapeType.DIAGONALIZABLE_REAL
        if rank_order[cand] > rank_order[tag]:
            tag = cand

    eig_sorted = tuple(sorted((complex(z) for z in eigs), key=lambda z: (z.real, z.imag)))
    return SpectralReport(
        eigenvalues=eig_sorted,
        clusters=tuple(clusters),
        type_tag=tag,
        margin=float(margin),
        scale=scale,
    )
