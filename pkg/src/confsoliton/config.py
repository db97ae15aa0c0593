"""Run configuration: sectioned ``key = value`` files plus command-line overrides.

Example::

    [chart]
    builtin = sphere          # or: variables / x1 .. x{n+1} / index / excluded

    [params]
    c = 0.5

    [domain]                  # custom charts only; endpoints are expressions
    u = -1.2, 1.2

    [grid]
    resolution = 9, 9

    [tolerances]
    soliton = 1e-8

    [output]
    path = report.json
"""

import re
from dataclasses import dataclass, field

from .chart import ImmersionChart
from .corpus import BUILTINS, builtin_chart
from .errors import ConfigError, ConfSolitonError
from .expr import evaluate, parse
from .tolerances import Tolerances

SECTIONS = ("chart", "params", "domain", "grid", "tolerances", "output")
_SECTION = re.compile(r"^\[\s*([A-Za-z_][A-Za-z_0-9]*)\s*\]$")
_KEY = re.compile(r"^([A-Za-z_][A-Za-z_0-9.]*)\s*=\s*(.*)$")


@dataclass
class ConfigValue:
    value: str
    line: int
    column: int  # 1-based column of the value


def read_sections(text):
    """Parse text into ``{section: {key: ConfigValue}}``; ``#`` starts a comment."""
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        m = _SECTION.match(stripped)
        if m:
            current = m.group(1)
            if current not in SECTIONS:
                raise ConfigError(f"unknown section [{current}]", lineno, indent + 1)
            if current in sections:
                raise ConfigError(f"duplicate section [{current}]", lineno, indent + 1)
            sections[current] = {}
            continue
        m = _KEY.match(stripped)
        if not m:
            raise ConfigError("expected 'key = value' or '[section]'", lineno, indent + 1)
        if current is None:
            raise ConfigError("key outside of any section", lineno, indent + 1)
        key, value = m.group(1), m.group(2).strip()
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key!r}", lineno, indent + 1)
        col = indent + m.start(2) + 1
        sections[current][key] = ConfigValue(value, lineno, col)
    return sections


@dataclass
class RunConfig:
    chart: ImmersionChart
    resolution: list
    tolerances: Tolerances = field(default_factory=Tolerances)
    out: str = None
    builtin: str = None

    def echo(self):
        c = self.chart
        return {
            "chart": {
                "name": c.name,
                "builtin": self.builtin,
                "dim": c.ambient.dim,
                "index": c.ambient.index,
                "variables": list(c.variables),
                "components": c.component_strings(),
                "params": {k: float(v) for k, v in sorted(c.params.items())},
                "domain": [list(iv) for iv in c.domain],
            },
            "grid": list(self.resolution),
            "tolerances": self.tolerances.as_dict(),
        }


def _float(cv, what):
    try:
        return float(evaluate(parse(cv.value, ()), ()))
    except (ConfSolitonError, ValueError) as exc:
        raise ConfigError(f"{what}: {exc}", cv.line, cv.column) from None


def parse_resolution(text, n, line=None, column=None):
    try:
        res = [int(r) for r in str(text).replace(" ", "").split(",") if r]
    except ValueError:
        raise ConfigError(f"grid resolution must be integers, got {text!r}", line, column) from None
    if len(res) == 1:
        res = res * n
    if len(res) != n:
        raise ConfigError(f"{len(res)} grid resolutions for a {n}-dimensional chart", line, column)
    if any(r < 2 for r in res):
        raise ConfigError(f"grid resolution must be >= 2 per axis, got {text}", line, column)
    return res


def load_config(text=None, builtin=None, params=None, grid=None, tols=None, out=None):
    """Build a :class:`RunConfig` from file text and command-line overrides.

    Overrides take precedence over file values.
    """
    sections = read_sections(text) if text else {}
    chart_sec = sections.get("chart", {})
    param_values = {k: v for k, v in sections.get("params", {}).items()}
    cli_params = dict(params or {})

    name = builtin or (chart_sec["builtin"].value if "builtin" in chart_sec else None)
    if name is None and not any(k.startswith("x") for k in chart_sec):
        raise ConfigError("no chart given: use --builtin NAME or a [chart] section")

    merged = {k: _float(cv, f"parameter {k}") for k, cv in param_values.items()}
    for k, v in cli_params.items():
        try:
            merged[k] = float(v)
        except ValueError:
            raise ConfigError(f"parameter {k} must be a number, got {v!r}") from None

    if name is not None:
        if name not in BUILTINS:
            loc = chart_sec.get("builtin")
            raise ConfigError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}",
                              loc.line if loc and not builtin else None,
                              loc.column if loc and not builtin else None)
        for k, cv in param_values.items():
            if k not in cli_params:
                _located(lambda: builtin_chart(name, **{k: merged[k]}), cv)
        chart = builtin_chart(name, **merged)
        default_res = BUILTINS[name].resolution
    else:
        chart = _custom_chart(chart_sec, sections.get("domain", {}), merged)
        default_res = 9

    grid_cv = sections.get("grid", {}).get("resolution")
    if grid is not None:
        resolution = parse_resolution(grid, chart.n)
    elif grid_cv is not None:
        resolution = parse_resolution(grid_cv.value, chart.n, grid_cv.line, grid_cv.column)
    else:
        resolution = [default_res] * chart.n

    tol_file = sections.get("tolerances", {})
    for k, cv in tol_file.items():
        _located(lambda: Tolerances().with_overrides({k: cv.value}), cv)
    tol_over = {k: cv.value for k, cv in tol_file.items()}
    tol_over.update(tols or {})
    tolerances = Tolerances().with_overrides(tol_over)

    out_cv = sections.get("output", {}).get("path")
    return RunConfig(chart, resolution, tolerances, out or (out_cv.value if out_cv else None), name)


def _located(check, cv):
    """Run ``check`` and pin any ConfigError it raises to ``cv``'s position."""
    try:
        check()
    except ConfigError as exc:
        raise ConfigError(str(exc), cv.line, cv.column) from None


def _custom_chart(sec, domain_sec, constants):
    comps = []
    k = 1
    while f"x{k}" in sec:
        comps.append(sec[f"x{k}"])
        k += 1
    extra = [key for key in sec if key.startswith("x") and key[1:].isdigit() and int(key[1:]) >= k]
    if extra:
        cv = sec[extra[0]]
        raise ConfigError(f"component {extra[0]} given but x{k} missing", cv.line, cv.column)
    n = len(comps) - 1
    if n < 1:
        raise ConfigError("a chart needs at least two components x1, x2")
    if "variables" in sec:
        variables = tuple(v.strip() for v in sec["variables"].value.split(",") if v.strip())
    else:
        variables = tuple(f"u{i}" for i in range(1, n + 1))
    if len(variables) != n:
        cv = sec.get("variables")
        raise ConfigError(f"{len(variables)} variables for {n + 1} components",
                          cv.line if cv else None, cv.column if cv else None)
    index = 0
    if "index" in sec:
        cv = sec["index"]
        try:
            index = int(cv.value)
        except ValueError:
            raise ConfigError(f"index must be an integer, got {cv.value!r}", cv.line, cv.column) from None
        if not 0 <= index <= n + 1:
            raise ConfigError(f"index must lie in [0, {n + 1}]", cv.line, cv.column)
    domain = []
    for v in variables:
        if v not in domain_sec:
            raise ConfigError(f"[domain] has no interval for variable {v!r}")
        cv = domain_sec[v]
        parts = cv.value.split(",")
        if len(parts) != 2:
            raise ConfigError(f"domain of {v} must be 'lo, hi'", cv.line, cv.column)
        lo, hi = (_float(ConfigValue(p.strip(), cv.line, cv.column), f"domain of {v}") for p in parts)
        if not lo <= hi:
            raise ConfigError(f"empty domain [{lo}, {hi}] for {v}", cv.line, cv.column)
        domain.append((lo, hi))
    excluded = ()
    if "excluded" in sec:
        excluded = tuple(e.strip() for e in sec["excluded"].value.split(";") if e.strip())

    for label, cv in [(f"x{i + 1}", c) for i, c in enumerate(comps)]:
        try:
            parse(cv.value, variables, constants)
        except ConfSolitonError as exc:
            col = cv.column + (getattr(exc, "offset", 1) or 1) - 1
            raise ConfigError(f"component {label}: {exc}", cv.line, col) from None
    try:
        return ImmersionChart.from_strings(
            [c.value for c in comps], domain, index=index, variables=variables,
            constants=constants, excluded=excluded, name="custom", params=constants,
        )
    except ConfSolitonError as exc:
        raise ConfigError(str(exc)) from None
