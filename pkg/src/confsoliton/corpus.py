"""Built-in chart families.

Each entry documents its parameters and their admissible ranges. Negative
(timelike) axes come first, so in Lorentzian ambient space the first
coordinate is time.
"""

from dataclasses import dataclass

from .chart import ImmersionChart
from .expr import evaluate, parse
from .errors import ConfigError


@dataclass(frozen=True)
class Builtin:
    name: str
    summary: str
    components: tuple
    index: int
    domain: tuple  # interval endpoints as strings, may use parameters
    defaults: dict
    ranges: dict  # parameter -> (lo, hi), open interval
    excluded: tuple = ()
    resolution: int = 9
    expected: str = ""  # expected classification tag


BUILTINS = {
    b.name: b
    for b in [
        Builtin(
            "sphere", "round sphere of curvature c^2 in E^3",
            ("cos(u2)*cos(u1)/c", "cos(u2)*sin(u1)/c", "sin(u2)/c"),
            0, (("0", "2*pi"), ("-1.2", "1.2")), {"c": 1.0}, {"c": (0.0, 1e6)},
            expected="PseudoSphere",
        ),
        Builtin(
            "pseudo_sphere", "de Sitter pseudo-sphere S^2_1(c^2) in E^3_1",
            ("sinh(u1)/c", "cosh(u1)*cos(u2)/c", "cosh(u1)*sin(u2)/c"),
            1, (("-1.2", "1.2"), ("0", "2*pi")), {"c": 1.0}, {"c": (0.0, 1e6)},
            expected="PseudoSphere",
        ),
        Builtin(
            "hyperbolic", "hyperbolic plane H^2(-c^2) in E^3_1",
            ("cosh(u2)/c", "sinh(u2)*cos(u1)/c", "sinh(u2)*sin(u1)/c"),
            1, (("0", "2*pi"), ("0.2", "1.5")), {"c": 1.0}, {"c": (0.0, 1e6)},
            expected="PseudoHyperbolic",
        ),
        Builtin(
            "plane", "affine plane x3 = d in E^3",
            ("u1", "u2", "d"), 0, (("-2", "2"), ("-2", "2")), {"d": 1.0},
            {"d": (-1e6, 1e6)}, expected="Hyperplane",
        ),
        Builtin(
            "timelike_plane", "Lorentzian plane x3 = d in E^3_1",
            ("u1", "u2", "d"), 1, (("-2", "2"), ("-2", "2")), {"d": 1.0},
            {"d": (-1e6, 1e6)}, expected="Hyperplane",
        ),
        Builtin(
            "spacelike_plane", "spacelike plane x1 = d in E^3_1 (timelike normal)",
            ("d", "u1", "u2"), 1, (("-2", "2"), ("-2", "2")), {"d": 1.0},
            {"d": (-1e6, 1e6)}, expected="Hyperplane",
        ),
        Builtin(
            "cone", "circular cone v (cos u, sin u, 1) in E^3",
            ("u2*cos(u1)", "u2*sin(u1)", "u2"), 0, (("0", "2*pi"), ("0.5", "2")), {}, {},
            excluded=("u2",), expected="Cone",
        ),
        Builtin(
            "lorentz_cone", "cone over a timelike curve of S^2_1 in E^3_1",
            ("u2*sinh(u1)", "u2*cosh(u1)*cos(k*u1)", "u2*cosh(u1)*sin(k*u1)"),
            1, (("-0.5", "0.5"), ("0.5", "2")), {"k": 0.5}, {"k": (0.0, 0.88)},
            excluded=("u2",), expected="Cone",
        ),
        Builtin(
            "helicoid", "minimal helicoid in E^3",
            ("u2*cos(u1)", "u2*sin(u1)", "u1"), 0, (("-1.5", "1.5"), ("-1", "1")), {}, {},
            expected="Indeterminate",
        ),
        Builtin(
            "paraboloid", "paraboloid of revolution x3 = u1^2 + u2^2 in E^3",
            ("u1", "u2", "u1^2 + u2^2"), 0, (("-1", "1"), ("-1", "1")), {}, {},
            expected="Indeterminate",
        ),
        Builtin(
            "jordan_scroll", "flat B-scroll over a null helix, shape operator of Jordan type",
            ("u1 + u2/2", "cos(u1) + u2/2*sin(u1)", "sin(u1) - u2/2*cos(u1)"),
            1, (("-1", "1"), ("-1", "1")), {}, {}, expected="Indeterminate",
        ),
        Builtin(
            "offset_sphere", "round sphere of radius r centred at (0, 0, h) in E^3",
            ("r*cos(u2)*cos(u1)", "r*cos(u2)*sin(u1)", "h + r*sin(u2)"),
            0, (("0", "2*pi"), ("-1.2", "1.2")), {"r": 1.0, "h": 0.5},
            {"r": (0.0, 1e6), "h": (-1e6, 1e6)}, expected="PseudoSphere",
        ),
        Builtin(
            "pseudo_sphere3", "pseudo-sphere S^3_2(c^2) in E^4_2",
            ("sinh(u1)*cos(u2)/c", "sinh(u1)*sin(u2)/c",
             "cosh(u1)*cos(u3)/c", "cosh(u1)*sin(u3)/c"),
            2, (("0.3", "1.2"), ("0", "2*pi"), ("0", "2*pi")), {"c": 1.0}, {"c": (0.0, 1e6)},
            resolution=5, expected="PseudoSphere",
        ),
    ]
}

# builtin charts exercised by the default verification run
DEFAULT_CORPUS = tuple(BUILTINS)


def builtin_chart(name, **params):
    """Instantiate a built-in chart, validating parameter names and ranges."""
    try:
        entry = BUILTINS[name]
    except KeyError:
        raise ConfigError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}") from None
    values = dict(entry.defaults)
    for key, val in params.items():
        if key not in entry.defaults:
            raise ConfigError(f"builtin {name!r} has no parameter {key!r}")
        lo, hi = entry.ranges[key]
        val = float(val)
        if not lo < val < hi:
            raise ConfigError(f"parameter {key}={val} outside ({lo}, {hi}) for builtin {name!r}")
        values[key] = val
    domain = tuple(
        tuple(evaluate(parse(end, (), values), ()) for end in interval) for interval in entry.domain
    )
    return ImmersionChart.from_strings(
        entry.components, domain, index=entry.index, constants=values,
        excluded=entry.excluded, name=name, params=values,
    )
