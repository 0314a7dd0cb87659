import math

import pytest

from prodhyp.base_catalog import BaseKind
from prodhyp.config import parse_config, parse_document, parse_sweep
from prodhyp.errors import ConfigError
from prodhyp.hypersurface import ProfileFamily


MINIMAL = """
# unit sphere, n = 4
epsilon = 1
n = 4
base.kind = geodesic_sphere
base.r = 0.5236
profile.family = linear
profile.alpha = 1
s_range = 0, 0.5, 11
"""


def test_minimal_document():
    cfg = parse_config(MINIMAL)
    assert cfg.epsilon == 1
    assert cfg.n == 4
    assert cfg.base.kind is BaseKind.GEODESIC_SPHERE
    assert cfg.base.r == pytest.approx(0.5236)
    assert cfg.profile.family is ProfileFamily.LINEAR
    assert cfg.profile.params == {"alpha": 1.0}
    assert cfg.s_range == (0.0, 0.5, 11)
    assert cfg.out_format == "csv"
    assert cfg.out_path is None
    assert len(cfg.grid()) == 11
    assert cfg.grid()[-1] == 0.5

def test_overrides():
    cfg = parse_config(MINIMAL, tol=1e-6, jobs=4, out_format="json", out_path=None)
    assert cfg.tol == 1e-6
    assert cfg.jobs == 4
    assert cfg.out_format == "json"

def test_bad_epsilon():
    with pytest.raises(ConfigError, match="epsilon must be ±1") as info:
        parse_config(MINIMAL.replace("epsilon = 1", "epsilon = 0"))
    assert info.value.field == "epsilon"

def test_horosphere_in_sphere():
    text = MINIMAL.replace("base.kind = geodesic_sphere", "base.kind = horosphere")
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == "base"

def test_unknown_key():
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL + "colour = red\n")
    assert info.value.field == "colour"

def test_unknown_base_key():
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL + "base.radius = 2\n")
    assert info.value.field == "base.radius"

def test_unknown_section():
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL + "output.path = x\n")
    assert info.value.line == 10

def test_duplicate_key():
    with pytest.raises(ConfigError, match="duplicate key 'n'") as info:
        parse_config(MINIMAL + "n = 5\n")
    assert info.value.line == 10

def test_malformed_line():
    with pytest.raises(ConfigError) as info:
        parse_document("epsilon = 1\njust words\n")
    assert info.value.line == 2
    assert str(info.value).startswith("line 2: ")

def test_missing_value():
    with pytest.raises(ConfigError):
        parse_document("epsilon =\n")

def test_nested_key():
    with pytest.raises(ConfigError):
        parse_document("base.kind.extra = 1\n")

@pytest.mark.parametrize(
    "s_range",
    ("0, 0.5, 0", "0.5, 0, 11")
)
def test_bad_s_range(s_range):
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL.replace("0, 0.5, 11", s_range))
    assert info.value.field == "s_range"

def test_single_point_grid():
    cfg = parse_config(MINIMAL.replace("0, 0.5, 11", "0.25, 0.25, 1"))
    assert cfg.grid() == [0.25]
    assert cfg.profile_domain() == (-0.25, 0.75)

def test_bad_tol():
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL, tol=-1.0)
    assert info.value.field == "tol"

def test_bad_profile_params():
    text = MINIMAL.replace("profile.alpha = 1", "profile.alpha = -1")
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == "profile"

def test_rotation_profile_rejected():
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL.replace("family = linear", "family = rotation"))
    assert info.value.field == "profile"

def test_sampled_profile(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("s,a\n0,0\n0.25,0.5\n0.5,1\n0.75,1.5\n1,2\n", encoding="utf-8")
    text = MINIMAL.replace("profile.family = linear\nprofile.alpha = 1", f"profile.family = sampled\nprofile.path = {path}")
    cfg = parse_config(text)
    profile = cfg.build_profile()
    assert profile.family is ProfileFamily.SAMPLED
    assert profile.a1(0.3) == pytest.approx(2.0)

def test_sampled_profile_missing_file(tmp_path):
    text = MINIMAL.replace(
        "profile.family = linear\nprofile.alpha = 1",
        f"profile.family = sampled\nprofile.path = {tmp_path / 'missing.csv'}"
    )
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == "profile"

def test_sampled_profile_not_utf8(tmp_path):
    path = tmp_path / "a.csv"
    path.write_bytes(b"s,a\n0,0\n0.25,0.5\xe9\n")
    text = MINIMAL.replace("profile.family = linear\nprofile.alpha = 1", f"profile.family = sampled\nprofile.path = {path}")
    with pytest.raises(ConfigError, match="not valid UTF-8") as info:
        parse_config(text)
    assert info.value.field == "profile"

def test_sweep_product_order():
    text = MINIMAL.replace("base.r = 0.5236", "base.r = 0.3, 0.5236").replace(
        "profile.alpha = 1", "profile.alpha = 1, 2"
    )
    cfgs = parse_sweep(text)
    assert [(c.base.r, c.profile.params["alpha"]) for c in cfgs] == [
        (0.3, 1.0), (0.3, 2.0), (0.5236, 1.0), (0.5236, 2.0)
    ]

def test_sweep_over_kinds():
    text = """
epsilon = -1
n = 4
base.kind = horosphere, totally_geodesic
profile.family = sinh, exponential
profile.amplitude = 1
profile.rate = 1
s_range = 0, 0.3, 4
"""
    cfgs = parse_sweep(text)
    assert len(cfgs) == 4
    assert cfgs[0].base.kind is BaseKind.HOROSPHERE
    assert cfgs[1].profile.family is ProfileFamily.EXPONENTIAL

def test_sweep_invalid_combination():
    text = MINIMAL.replace("base.r = 0.5236", "base.r = 0.5, -1")
    with pytest.raises(ConfigError):
        parse_sweep(text)

def test_build_base_clifford():
    text = MINIMAL.replace("base.kind = geodesic_sphere\nbase.r = 0.5236", "base.kind = clifford_product\nbase.r = 0.7853981633974483\nbase.p = 1\nbase.q = 2")
    base = parse_config(text).build_base()
    assert base.curvatures[0][0] == pytest.approx(-math.tan(math.pi / 4))
