"""Run configuration files.

The format is INI-style (``[section]`` headers, ``key = value`` lines, ``#``
or ``;`` comments) read with :mod:`configparser`. Every section and key is
checked against a fixed schema; unknown names are errors. Inline molecules
use one ``[component.<label>]`` section per rotational manifold::

    [molecule]
    preset = CO2

    [ensemble]
    temperature = 403

    [pulse]
    duration_fwhm = 120
    analytic_n = 32

    [simulate]
    t_start = 1385
    t_end = 1415
    dt = 0.002
"""

import configparser
from dataclasses import asdict, dataclass, field
import math
from pathlib import Path
import re

import numpy as np

from .design import LADDERS, analytic_cubic
from .exceptions import ParseError, ValidationError
from .pulse import (DEFAULT_HALF_SPAN, DEFAULT_OMEGA0, PhaseProfile,
                    SlmConfig, make_pulse, sigma_from_intensity_fwhm, slm_discretize)
from .raman import adequate_samples, coherence_ladder
from .rotor import (MoleculeSpec, RotorComponent, TAIL_TOLERANCE, preset,
                    raman_frequency, revival_period, thermal_populations)
from .units import FS_PER_PS, wavelength_nm_to_angular


def _bool(text):
    states = configparser.ConfigParser.BOOLEAN_STATES
    if text.lower() not in states:
        raise ValueError(f"not a boolean: {text!r}")
    return states[text.lower()]


def _floats(text):
    return [float(x) for x in text.replace(",", " ").split()]


def _opt_int(text):
    return None if text.lower() in ("none", "") else int(text)


SCHEMA = {
    "molecule": {"preset": str, "name": str, "J_max": int},
    "component": {"B": float, "D": float, "E_vib": float, "g_vib": float,
                  "J_min": int, "J_parity": str},
    "ensemble": {"temperature": float, "tail_tolerance": float},
    "pulse": {"duration_fwhm": float, "sigma": float, "omega0": float,
              "wavelength_nm": float, "a_tilde": float, "b_tilde": float,
              "analytic_n": float, "analytic_component": str,
              "n_samples": int, "half_span": float},
    "slm": {"pixel_count": int, "window_lo": float, "window_hi": float,
            "half_width_sigmas": float, "phase_wrap": _bool, "phase_levels": _opt_int},
    "simulate": {"t_start": float, "t_end": float, "dt": float, "solo": _bool},
    "design": {"n": float, "component": str, "ladder": str},
    "scan": {"n": float, "component": str, "b_values": _floats, "b_factors": _floats,
             "half_width": float},
    "analyze": {"input": str, "n": float, "component": str, "half_width": float,
                "t_lo": float, "t_hi": float, "threshold": float},
    "output": {"prefix": str},
}


@dataclass(frozen=True)
class PulseSettings:
    sigma: float
    omega0: float = DEFAULT_OMEGA0
    a_tilde: float = 0.0
    b_tilde: float = 0.0
    duration_fwhm: float | None = None
    analytic_n: float | None = None
    analytic_component: str | None = None
    n_samples: int | None = None
    half_span: float = DEFAULT_HALF_SPAN


@dataclass(frozen=True)
class SimulateSettings:
    t_start: float = 0.0
    t_end: float = 100.0
    dt: float = 0.005
    solo: bool = False

    def time_axis(self):
        count = int(math.floor((self.t_end - self.t_start) / self.dt + 1e-9)) + 1
        return self.t_start + self.dt * np.arange(count)


@dataclass(frozen=True)
class DesignSettings:
    n: float | None = None
    component: str | None = None
    ladder: str = "rigid"


@dataclass(frozen=True)
class ScanSettings:
    n: float | None = None
    component: str | None = None
    b_values: tuple | None = None
    b_factors: tuple = (0.0, 0.5, 1.0, 2.0)
    half_width: float = 3.0


@dataclass(frozen=True)
class AnalyzeSettings:
    input: str | None = None
    n: float | None = None
    component: str | None = None
    half_width: float = 3.0
    t_lo: float | None = None
    t_hi: float | None = None
    threshold: float = 0.1


@dataclass(frozen=True)
class RunConfig:
    molecule: MoleculeSpec
    temperature: float
    pulse: PulseSettings
    simulate: SimulateSettings = field(default_factory=SimulateSettings)
    design: DesignSettings = field(default_factory=DesignSettings)
    scan: ScanSettings = field(default_factory=ScanSettings)
    analyze: AnalyzeSettings = field(default_factory=AnalyzeSettings)
    slm: SlmConfig | None = None
    output_prefix: str = "run"
    tail_tolerance: float = TAIL_TOLERANCE
    J_max: int = 0
    tail: float = 0.0
    nyquist_dt: float = 0.0
    source: dict = field(default_factory=dict, repr=False)

    def component(self, label=None):
        return self.molecule.components[0] if label is None else self.molecule.component(label)

    def phase_profile(self, b_tilde=None):
        b = self.pulse.b_tilde if b_tilde is None else b_tilde
        return PhaseProfile(self.pulse.a_tilde, b)

    def samples_for(self, profile):
        """Configured sample count, or the smallest adequate one when unset."""
        if self.pulse.n_samples is not None:
            return self.pulse.n_samples
        return adequate_samples(self.pulse.omega0, self.pulse.sigma, profile,
                                max_raman_frequency(self.molecule, self.J_max),
                                self.pulse.half_span)

    def make_pulse(self, b_tilde=None, use_slm=True):
        prof = self.phase_profile(b_tilde)
        p = make_pulse(self.pulse.omega0, self.pulse.sigma, prof,
                       n_samples=self.samples_for(prof), half_span=self.pulse.half_span)
        if use_slm and self.slm is not None:
            p = slm_discretize(p, self.slm)
        return p

    def ensemble(self):
        return thermal_populations(self.molecule, self.temperature, self.tail_tolerance)

    def derived(self):
        """Quantities computed from the file rather than read from it."""
        out = {
            "sigma_rad_per_fs": self.pulse.sigma,
            "b_tilde_fs3": self.pulse.b_tilde,
            "pulse_samples": self.samples_for(self.phase_profile()),
            "J_max": self.J_max,
            "boltzmann_tail": self.tail,
            "nyquist_dt_ps": self.nyquist_dt,
        }
        for c in self.molecule.components:
            out[f"T_rev_ps[{c.label}]"] = revival_period(c)
        return out


def _line_index(text):
    """(section, key) -> line number, plus section -> header line."""
    index = {}
    section = None
    header = re.compile(r"^\s*\[([^\]]+)\]")
    entry = re.compile(r"^([^\s#;=:][^=:]*?)\s*[=:]")
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = header.match(line)
        if m:
            section = m.group(1).strip()
            index.setdefault((section, None), lineno)
            continue
        m = entry.match(line)
        if m and section is not None:
            index.setdefault((section, m.group(1).strip()), lineno)
    return index


class _Reader:
    def __init__(self, text):
        self.parser = configparser.ConfigParser(interpolation=None,
                                                inline_comment_prefixes=("#", ";"))
        self.parser.optionxform = str
        try:
            self.parser.read_string(text)
        except configparser.MissingSectionHeaderError as exc:
            raise ParseError("expected a [section] header before any key", exc.lineno) from None
        except configparser.DuplicateSectionError as exc:
            raise ParseError(f"duplicate section [{exc.section}]", exc.lineno) from None
        except configparser.DuplicateOptionError as exc:
            raise ParseError(f"duplicate key {exc.option!r} in [{exc.section}]",
                             exc.lineno) from None
        except configparser.ParsingError as exc:
            lineno, line = exc.errors[0]
            raise ParseError(f"cannot parse {line.strip()!r}", lineno) from None
        self.lines = _line_index(text)
        self.values = {}
        for section in self.parser.sections():
            kind = section.split(".", 1)[0] if section.startswith("component.") else section
            if kind not in SCHEMA:
                raise ParseError(f"unknown section [{section}]", self.lines.get((section, None)))
            conv = SCHEMA[kind]
            parsed = {}
            for key, raw in self.parser.items(section):
                where = self.lines.get((section, key))
                if key not in conv:
                    raise ParseError(f"unknown key {key!r} in [{section}]", where)
                try:
                    parsed[key] = conv[key](raw.strip())
                except ValueError as exc:
                    raise ParseError(f"bad value for {key!r}: {exc}", where) from None
            self.values[section] = parsed

    def section(self, name):
        return self.values.get(name, {})

    def fail(self, message, section, key=None):
        lineno = self.lines.get((section, key)) or self.lines.get((section, None))
        prefix = f"line {lineno}: " if lineno else ""
        raise ValidationError(prefix + message)


def _molecule(r):
    mol = r.section("molecule")
    comps = [s for s in r.values if s.startswith("component.")]
    if "preset" in mol and comps:
        r.fail("give either molecule.preset or [component.*] sections, not both",
               "molecule", "preset")
    if "preset" in mol:
        m = preset(mol["preset"])
    elif comps:
        built = []
        for s in comps:
            vals = dict(r.section(s))
            if "B" not in vals:
                r.fail(f"[{s}] needs B", s)
            try:
                built.append(RotorComponent(s.split(".", 1)[1], **vals))
            except ValidationError as exc:
                r.fail(str(exc), s)
        m = MoleculeSpec(mol.get("name", "custom"), tuple(built))
    else:
        r.fail("no molecule: set molecule.preset or add [component.<label>] sections",
               "molecule")
    if "J_max" in mol:
        try:
            m = m.with_J_max(mol["J_max"])
        except ValidationError as exc:
            r.fail(str(exc), "molecule", "J_max")
    return m


def _pulse(r, m):
    s = r.section("pulse")
    if ("sigma" in s) == ("duration_fwhm" in s):
        if "sigma" in s:
            r.fail("give exactly one of pulse.duration_fwhm and pulse.sigma", "pulse", "sigma")
        s = {**s, "duration_fwhm": 120.0}
    if ("b_tilde" in s) and ("analytic_n" in s):
        r.fail("give exactly one of pulse.b_tilde and pulse.analytic_n", "pulse", "analytic_n")
    if ("omega0" in s) and ("wavelength_nm" in s):
        r.fail("give at most one of pulse.omega0 and pulse.wavelength_nm", "pulse", "omega0")
    for key in ("sigma", "duration_fwhm", "omega0", "wavelength_nm", "half_span", "n_samples"):
        if key in s and not s[key] > 0:
            r.fail(f"pulse.{key} must be > 0", "pulse", key)
    sigma = s["sigma"] if "sigma" in s else sigma_from_intensity_fwhm(s["duration_fwhm"])
    omega0 = DEFAULT_OMEGA0
    if "omega0" in s:
        omega0 = s["omega0"]
    elif "wavelength_nm" in s:
        omega0 = wavelength_nm_to_angular(s["wavelength_nm"])
    b = s.get("b_tilde", 0.0)
    label = s.get("analytic_component")
    if "analytic_n" in s:
        try:
            c = m.components[0] if label is None else m.component(label)
        except KeyError:
            r.fail(f"unknown component {label!r}", "pulse", "analytic_component")
        b = analytic_cubic(s["analytic_n"], c.B, c.D)
    return PulseSettings(sigma=sigma, omega0=omega0, a_tilde=s.get("a_tilde", 0.0),
                         b_tilde=b, duration_fwhm=s.get("duration_fwhm"),
                         analytic_n=s.get("analytic_n"), analytic_component=label,
                         n_samples=s.get("n_samples"),
                         half_span=s.get("half_span", DEFAULT_HALF_SPAN))


def _slm(r, pulse):
    if "slm" not in r.values:
        return None
    s = r.section("slm")
    lo, hi = s.get("window_lo"), s.get("window_hi")
    if (lo is None) != (hi is None):
        r.fail("give both slm.window_lo and slm.window_hi", "slm")
    if lo is not None and "half_width_sigmas" in s:
        r.fail("give either an explicit slm window or slm.half_width_sigmas", "slm",
               "half_width_sigmas")
    kw = {"phase_wrap": s.get("phase_wrap", False), "phase_levels": s.get("phase_levels", 4096)}
    count = s.get("pixel_count", 640)
    try:
        if lo is not None:
            return SlmConfig(count, (lo, hi), **kw)
        return SlmConfig.centered(pulse.omega0, pulse.sigma, count,
                                  s.get("half_width_sigmas", 4.0), **kw)
    except ValueError as exc:
        r.fail(str(exc), "slm")


def _simulate(r):
    s = r.section("simulate")
    sim = SimulateSettings(**s)
    if not sim.dt > 0:
        r.fail("simulate.dt must be > 0", "simulate", "dt")
    if not sim.t_end > sim.t_start:
        r.fail("simulate.t_end must exceed simulate.t_start", "simulate", "t_end")
    return sim


def max_raman_frequency(m, J_max):
    return max(float(np.max(raman_frequency(c, coherence_ladder(c, J_max))))
               for c in m.components)


def parse_config(text, source="<string>"):
    """Validated RunConfig from the text of a configuration file."""
    r = _Reader(text)
    m = _molecule(r)
    ens = r.section("ensemble")
    T = ens.get("temperature", 293.0)
    if not T > 0:
        r.fail("ensemble.temperature must be > 0", "ensemble", "temperature")
    tol = ens.get("tail_tolerance", TAIL_TOLERANCE)
    pulse = _pulse(r, m)
    slm = _slm(r, pulse)
    sim = _simulate(r)

    try:
        e = thermal_populations(m, T, tol)
    except Exception as exc:
        r.fail(f"populations: {exc}", "molecule", "J_max" if m.J_max else None)
    limit = 1.0 / (4.0 * max_raman_frequency(m, e.J_max)) / FS_PER_PS
    if not sim.dt < limit:
        r.fail(f"simulate.dt = {sim.dt:g} ps violates the Nyquist contract "
               f"(must be < {limit:.5g} ps for J_max = {e.J_max})", "simulate", "dt")

    design = DesignSettings(**r.section("design"))
    if design.ladder not in LADDERS:
        r.fail(f"design.ladder must be one of {LADDERS}", "design", "ladder")
    scan = r.section("scan")
    if "b_values" in scan and "b_factors" in scan:
        r.fail("give either scan.b_values or scan.b_factors", "scan", "b_factors")
    scan = ScanSettings(**{k: tuple(v) if isinstance(v, list) else v for k, v in scan.items()})
    analyze = AnalyzeSettings(**r.section("analyze"))
    if (analyze.t_lo is None) != (analyze.t_hi is None):
        r.fail("give both analyze.t_lo and analyze.t_hi", "analyze")
    for section, label in (("design", design.component), ("scan", scan.component),
                           ("analyze", analyze.component)):
        if label is not None and label not in m.labels:
            r.fail(f"unknown component {label!r}; known: {m.labels}", section, "component")

    if "output" in r.values and not r.section("output").get("prefix"):
        r.fail("output.prefix must not be empty", "output", "prefix")
    return RunConfig(
        molecule=m.with_J_max(e.J_max), temperature=T, pulse=pulse, simulate=sim,
        design=design, scan=scan, analyze=analyze, slm=slm,
        output_prefix=r.section("output").get("prefix", "run"), tail_tolerance=tol,
        J_max=e.J_max, tail=e.tail, nyquist_dt=limit,
        source={"path": source, "sections": r.values},
    )


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path))


def config_echo(cfg):
    """JSON-friendly echo of every resolved setting."""
    return {
        "molecule": {"name": cfg.molecule.name, "J_max": cfg.J_max,
                     "components": [asdict(c) for c in cfg.molecule.components]},
        "temperature": cfg.temperature,
        "pulse": asdict(cfg.pulse),
        "slm": None if cfg.slm is None else asdict(cfg.slm),
        "simulate": asdict(cfg.simulate),
        "design": asdict(cfg.design),
        "scan": asdict(cfg.scan),
        "analyze": asdict(cfg.analyze),
        "output_prefix": cfg.output_prefix,
        "source": cfg.source,
    }
