import pytest

from rotshape.config import load_config, parse_config
from rotshape.design import analytic_cubic
from rotshape.exceptions import ParseError, ValidationError

CO2 = """\
[molecule]
preset = CO2

[ensemble]
temperature = 403

[pulse]
duration_fwhm = 120
analytic_n = 32

[simulate]
t_start = 1390
t_end = 1391
dt = 0.002
solo = yes
"""


def test_minimal_config_fills_defaults():
    cfg = parse_config("[molecule]\npreset = CH3I\n")
    assert cfg.temperature == 293.0
    assert cfg.pulse.duration_fwhm == 120.0 and cfg.pulse.b_tilde == 0.0
    assert cfg.J_max >= 40 and cfg.tail < 1e-6
    assert cfg.simulate.dt < cfg.nyquist_dt
    assert cfg.slm is None and cfg.output_prefix == "run"
    assert set(cfg.derived()) >= {"sigma_rad_per_fs", "J_max", "boltzmann_tail"}


def test_analytic_phase_resolved():
    cfg = parse_config(CO2)
    assert cfg.pulse.b_tilde == analytic_cubic(32, 0.3902, 1.33e-7)
    assert cfg.simulate.solo is True
    assert len(cfg.simulate.time_axis()) == 501


@pytest.mark.parametrize("extra, message", [
    ("[pulse]\nb_tilde = 1e7\nanalytic_n = 3\n", "b_tilde"),
    ("[pulse]\nsigma = 0.01\nduration_fwhm = 100\n", "duration_fwhm"),
    ("[simulate]\ndt = 0.05\n", "Nyquist"),
    ("[slm]\nwindow_lo = 2.3\n", "window"),
    ("[design]\ncomponent = 999\n", "unknown component"),
])
def test_invariant_violations(extra, message):
    with pytest.raises(ValidationError, match=message):
        parse_config("[molecule]\npreset = CO2\n" + extra)


def test_nyquist_error_names_the_line():
    with pytest.raises(ValidationError, match=r"^line 5: .*Nyquist"):
        parse_config("[molecule]\npreset = CO2\n\n[simulate]\ndt = 0.05\n")


@pytest.mark.parametrize("text, lineno", [
    ("[molecule]\npreset = CO2\ncolour = red\n", 3),
    ("[molecule]\npreset = CO2\n[plots]\nx = 1\n", 3),
    ("preset = CO2\n", 1),
    ("[molecule]\npreset = CO2\npreset = CH3I\n", 3),
    ("[molecule]\npreset = CO2\n[pulse]\nsigma = fast\n", 4),
    ("[molecule]\npreset = CO2\n[simulate]\nsolo = maybe\n", 4),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError) as info:
        parse_config(text)
    assert info.value.lineno == lineno
    assert str(info.value).startswith(f"line {lineno}: ")


def test_inline_components():
    cfg = parse_config("""\
[molecule]
name = toy
J_max = 100

[component.a]
B = 0.4
D = 1e-7
J_parity = even

[component.b]
B = 0.41
E_vib = 500
J_min = 1
""")
    assert cfg.molecule.labels == ["a", "b"]
    assert cfg.J_max == 100 and cfg.molecule.component("b").E_vib == 500


def test_inline_component_errors():
    with pytest.raises(ValidationError, match="needs B"):
        parse_config("[component.a]\nD = 1e-7\n")
    with pytest.raises(ValidationError, match="not both"):
        parse_config("[molecule]\npreset = CO2\n[component.a]\nB = 1\n")
    with pytest.raises(ValidationError, match="no molecule"):
        parse_config("[ensemble]\ntemperature = 300\n")


def test_slm_section():
    cfg = parse_config("[molecule]\npreset = CO2\n[slm]\npixel_count = 320\nphase_wrap = true\n")
    assert cfg.slm.pixel_count == 320 and cfg.slm.phase_wrap
    lo, hi = cfg.slm.window
    assert abs((hi + lo) / 2 - cfg.pulse.omega0) < 1e-12


def test_load_from_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(CO2)
    assert load_config(path).source["path"] == str(path)
    with pytest.raises(ValidationError):
        load_config(tmp_path / "missing.ini")
