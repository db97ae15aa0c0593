import textwrap

import pytest

from confsoliton.config import load_config, parse_resolution, read_sections
from confsoliton.errors import ConfigError
from confsoliton.tolerances import Tolerances


def cfg(text):
    return textwrap.dedent(text).lstrip("\n")


def test_sections_and_positions():
    s = read_sections(cfg("""
        # comment
        [chart]
        builtin = sphere   # trailing comment

        [params]
          c = 0.5
    """))
    assert s["chart"]["builtin"].value == "sphere"
    assert (s["chart"]["builtin"].line, s["chart"]["builtin"].column) == (3, 11)
    assert (s["params"]["c"].line, s["params"]["c"].column) == (6, 7)


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("[chart]\nbuiltin sphere\n", 2, 1),
        ("c = 1\n", 1, 1),
        ("[chart]\n[bogus]\n", 2, 1),
        ("[chart]\nbuiltin = a\nbuiltin = b\n", 3, 1),
        ("[chart]\n[chart]\n", 2, 1),
    ],
)
def test_syntax_errors_have_positions(text, line, column):
    with pytest.raises(ConfigError) as info:
        read_sections(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_builtin_with_params_and_grid():
    rc = load_config(cfg("""
        [chart]
        builtin = hyperbolic
        [params]
        c = 2
        [grid]
        resolution = 4, 6
        [tolerances]
        soliton = 1e-9
        [output]
        path = out.json
    """))
    assert rc.chart.name == "hyperbolic" and rc.chart.params == {"c": 2.0}
    assert rc.resolution == [4, 6]
    assert rc.tolerances.soliton == 1e-9
    assert rc.out == "out.json"


def test_command_line_overrides_win():
    text = "[chart]\nbuiltin = sphere\n[params]\nc = 2\n[grid]\nresolution = 4\n"
    rc = load_config(text, params={"c": "3"}, grid="3", tols={"alpha": "1e-6"}, out="x.json")
    assert rc.chart.name == "sphere" and rc.chart.params == {"c": 3.0}
    assert rc.resolution == [3, 3]
    assert rc.tolerances.alpha == 1e-6 and rc.out == "x.json"
    rc = load_config("[chart]\nbuiltin = sphere\n", builtin="plane")
    assert rc.chart.name == "plane"
    # file parameters must still fit the builtin chosen on the command line
    with pytest.raises(ConfigError) as info:
        load_config(text, builtin="plane")
    assert info.value.line == 4


def test_custom_chart():
    rc = load_config(cfg("""
        [chart]
        variables = u, v
        x1 = v*cos(u)
        x2 = v*sin(u)
        x3 = k*v
        excluded = v
        [params]
        k = 2
        [domain]
        u = 0, 2*pi
        v = 0.5, 2
    """))
    c = rc.chart
    assert c.variables == ("u", "v") and c.ambient.dim == 3 and c.ambient.index == 0
    assert c.domain[0][1] == pytest.approx(6.283185307179586)
    assert len(c.excluded) == 1
    assert rc.resolution == [9, 9]


def test_custom_chart_expression_error_column():
    text = "[chart]\nx1 = u1\nx2 = u2\nx3 = cosh(u1\n[domain]\nu1 = 0, 1\nu2 = 0, 1\n"
    with pytest.raises(ConfigError) as info:
        load_config(text)
    # offset 8 inside the value, which starts at column 6
    assert (info.value.line, info.value.column) == (4, 13)


@pytest.mark.parametrize(
    "text,line",
    [
        ("[chart]\nbuiltin = sphere\n[grid]\nresolution = 1\n", 4),
        ("[chart]\nbuiltin = sphere\n[tolerances]\nsoliton = -1\n", 4),
        ("[chart]\nbuiltin = sphere\n[tolerances]\nwobble = 1\n", 4),
        ("[chart]\nbuiltin = sphere\n[params]\nc = -2\n", 4),
        ("[chart]\nbuiltin = sphere\n[params]\nc = 1/0\n", 4),
        ("[chart]\nbuiltin = nothing\n", 2),
        ("[chart]\nx1 = u1\nx2 = 0\n[domain]\nu1 = 1, 0\n", 5),
        ("[chart]\nx1 = u1\nx2 = u2\nx3 = 0\nindex = 7\n[domain]\nu1 = 0, 1\nu2 = 0, 1\n", 5),
    ],
)
def test_invariant_violations_are_located(text, line):
    with pytest.raises(ConfigError) as info:
        load_config(text)
    assert info.value.line == line


def test_missing_chart():
    with pytest.raises(ConfigError):
        load_config("[grid]\nresolution = 3\n")
    with pytest.raises(ConfigError):
        load_config("[chart]\nx1 = u1\nx2 = u2\nx3 = 0\n[domain]\nu1 = 0, 1\n")


def test_resolution_parsing():
    assert parse_resolution("5", 3) == [5, 5, 5]
    assert parse_resolution("2, 3", 2) == [2, 3]
    for bad in ("1", "2,3,4", "a"):
        with pytest.raises(ConfigError):
            parse_resolution(bad, 2)


def test_tolerance_overrides():
    t = Tolerances().with_overrides({"soliton": "1e-6"})
    assert t.soliton == 1e-6 and t.borderline == 1e-4
    with pytest.raises(ConfigError):
        Tolerances().with_overrides({"soliton": "x"})
    with pytest.raises(ConfigError):
        Tolerances(soliton=0.0)


def test_echo_is_plain_data():
    rc = load_config(None, builtin="lorentz_cone", params={"k": "0.25"})
    echo = rc.echo()
    assert echo["chart"]["builtin"] == "lorentz_cone"
    assert echo["chart"]["params"] == {"k": 0.25}
    assert echo["grid"] == [9, 9]
    assert echo["tolerances"]["soliton"] == 1e-8
