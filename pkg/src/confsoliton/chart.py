"""Parametric immersion charts and sampling grids."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, EmptyGrid, OutOfDomain
from .expr import Expr, default_variables, evaluate, parse, to_string
from .jet import eval_jet3
from .linalg import AmbientMetric

EXCLUDED_TOL = 1e-14
GRID_SHRINK = 0.05


@dataclass(frozen=True)
class ImmersionChart:
    """Immersion ``x(u_1..u_n)`` into pseudo-Euclidean space.

    ``excluded`` holds expressions whose zero sets are removed from the
    chart (e.g. the vertex parameter of a cone).
    """

    components: tuple
    ambient: AmbientMetric
    domain: tuple
    variables: tuple = None
    excluded: tuple = ()
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not all(isinstance(c, Expr) for c in comps):
            raise ContractViolation("chart components must be parsed expressions")
        if len(comps) != self.ambient.dim:
            raise ContractViolation(
                f"{len(comps)} components for ambient dimension {self.ambient.dim}"
            )
        dom = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(dom) != self.n:
            raise ContractViolation(f"domain has {len(dom)} intervals, chart needs {self.n}")
        for lo, hi in dom:
            if not lo <= hi:
                raise ContractViolation(f"empty domain interval [{lo}, {hi}]")
        object.__setattr__(self, "domain", dom)
        if self.variables is None:
            object.__setattr__(self, "variables", default_variables(self.n))
        object.__setattr__(self, "excluded", tuple(self.excluded))

    @property
    def n(self):
        return self.ambient.dim - 1

    @classmethod
    def from_strings(cls, components, domain, index=0, variables=None, constants=None,
                     excluded=(), name="custom", params=None):
        n = len(components) - 1
        if variables is None:
            variables = default_variables(n)
        variables = tuple(variables)
        if len(variables) != n:
            raise ContractViolation(f"{len(variables)} variables for a {n}-dimensional chart")
        comps = tuple(parse(c, variables, constants) for c in components)
        excl = tuple(parse(c, variables, constants) for c in excluded)
        return cls(comps, AmbientMetric(n + 1, index), domain, variables, excl, name,
                   dict(params or {}))

    def component_strings(self):
        return [to_string(c, self.variables) for c in self.components]

    def check_point(self, point):
        p = np.asarray(point, dtype=float).ravel()
        if p.shape[0] != self.n:
            raise ContractViolation(f"point of length {p.shape[0]} for a {self.n}-dimensional chart")
        for x, (lo, hi) in zip(p, self.domain):
            slack = 1e-12 * max(1.0, abs(lo), abs(hi))
            if not lo - slack <= x <= hi + slack:
                raise OutOfDomain(p)
        for e in self.excluded:
            if abs(evaluate(e, p)) <= EXCLUDED_TOL:
                raise OutOfDomain(p, f"on excluded locus {to_string(e, self.variables)} = 0")
        return p


def eval_chart(chart, point):
    """One :class:`Jet3` per ambient component."""
    p = chart.check_point(point)
    return [eval_jet3(c, p) for c in chart.components]


def stack_jets(jets):
    """Arrays ``(x, dx, d2x, d3x)`` with the ambient index first."""
    return (
        np.array([j.v for j in jets]),
        np.stack([j.d1 for j in jets]),
        np.stack([j.d2 for j in jets]),
        np.stack([j.d3 for j in jets]),
    )


def axis_points(lo, hi, resolution, shrink=GRID_SHRINK):
    if resolution < 2:
        raise ContractViolation(f"grid resolution must be >= 2, got {resolution}")
    inset = shrink * (hi - lo)
    return np.linspace(lo + inset, hi - inset, resolution)


def make_grid(chart, resolution=9, shrink=GRID_SHRINK):
    """Tensor grid over the chart's domain box, inset by ``shrink`` per side.

    ``resolution`` is an int or one int per axis. Points are ordered with
    the last axis varying fastest.
    """
    if np.isscalar(resolution):
        resolution = [int(resolution)] * chart.n
    resolution = [int(r) for r in resolution]
    if len(resolution) != chart.n:
        raise ContractViolation(f"{len(resolution)} resolutions for {chart.n} axes")
    axes = [axis_points(lo, hi, r, shrink) for (lo, hi), r in zip(chart.domain, resolution)]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=1)
    if grid.size == 0:
        raise EmptyGrid("grid has no points")
    return grid


def random_points(chart, count, rng, shrink=GRID_SHRINK):
    lo = np.array([a + shrink * (b - a) for a, b in chart.domain])
    hi = np.array([b - shrink * (b - a) for a, b in chart.domain])
    return lo + (hi - lo) * rng.random((count, chart.n))
