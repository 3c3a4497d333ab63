"""Run-configuration files: flat INI-style sections of ``key = value``.

All frequencies in the file are cyclic GHz (steps in MHz where named so),
times are nanoseconds; parsing converts to the angular/seconds units used
internally. The template emitted by ``ramseybias init`` reproduces the
headline double-resonance operating point.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .qubit import TransmonParams
from .spectroscopy import parse_scheme
from .units import RAD_PER_GHZ, RAD_PER_MHZ, ns

TEMPLATE = """\
# ramseybias run configuration.
# Frequencies are cyclic GHz unless a key says MHz; times are ns.
# This default reproduces the double-resonance operating point.

[transmon]
ec_ghz = 0.5            # charging energy E_C/2pi; calibration choice
ej_ratio = 100.0        # junction-to-charging energy ratio
phi_res = 0.46          # resonant-bias reduced flux
phi_disp = 0.49         # dispersive-bias reduced flux

[drive]
eta_ghz = 0.1           # probe coupling strength eta/2pi

[scheme]
kind = double           # cw | double | triple | general:<n>

[sweep]
min_ghz = 3.5
max_ghz = 5.5
step_mhz = 1.0
refine_step_mhz = 0.1
baseline_shift = true   # report the peak shift against the cw reference
cw_amplitude = 0.5      # peak value convention of the cw reference line

[averaging]
s = 0.68pi/3eta         # time constant: ns number, or rule 0.68pi/<k>eta
r = 0.001               # dispersive-to-resonant duration ratio T/tau

[optimizer]
k_values = 2.5, 3.0, 3.5        # harmonic multiples for the s seed rule
r_values = logspace:0.0005,0.1,12
p_min = 0.3                     # feasibility floor on the peak value
shift_max_mhz = 5.0             # cap on |peak shift| vs cw; narrow lines at
                                # large R come with displaced peaks
# s_values_ns = 1.0, 1.5        # optional explicit time constants

[mc]
n_samples = 1000000
seed = 42

[output]
out_dir = .
"""

_S_RULE = re.compile(r"^\s*0\.68\s*pi\s*/\s*([0-9]*\.?[0-9]+)\s*eta\s*$")


@dataclass
class RunConfig:
    """Parsed configuration with all values in internal units."""

    transmon: TransmonParams
    eta: float
    scheme: str
    omega_min: float
    omega_max: float
    coarse_step: float
    refine_step: float
    baseline_shift: bool
    cw_amplitude: float
    s: float | None
    ratio_r: float | None
    k_values: tuple[float, ...] | None
    s_values: tuple[float, ...] | None
    r_values: tuple[float, ...] | None
    p_min: float
    shift_max: float | None
    n_samples: int
    seed: int
    out_dir: str
    raw: dict = field(default_factory=dict)


def _fail(section: str, key: str, message: str):
    raise ConfigError(f"[{section}] {key}: {message}")


class _Section:
    def __init__(self, parser: configparser.ConfigParser, name: str):
        self.parser = parser
        self.name = name

    def has(self, key: str) -> bool:
        return self.parser.has_option(self.name, key)

    def text(self, key: str, default: str | None = None) -> str:
        if not self.has(key):
            if default is None:
                _fail(self.name, key, "required key is missing")
            return default
        return self.parser.get(self.name, key).strip()

    def number(self, key: str, default: float | None = None) -> float:
        value = self.text(key, None if default is None else str(default))
        try:
            return float(value)
        except ValueError:
            _fail(self.name, key, f"expected a number, got {value!r}")

    def integer(self, key: str, default: int | None = None) -> int:
        value = self.text(key, None if default is None else str(default))
        try:
            return int(value)
        except ValueError:
            _fail(self.name, key, f"expected an integer, got {value!r}")

    def flag(self, key: str, default: bool) -> bool:
        value = self.text(key, "true" if default else "false").lower()
        if value in ("true", "yes", "on", "1"):
            return True
        if value in ("false", "no", "off", "0"):
            return False
        _fail(self.name, key, f"expected true/false, got {value!r}")


def parse_time_constant(text: str, eta: float) -> float:
    """Time constant in seconds from a ns number or a 0.68pi/<k>eta rule."""
    rule = _S_RULE.match(text)
    if rule:
        k = float(rule.group(1))
        if k <= 0:
            raise ValueError(f"harmonic multiple must be positive, got {k}")
        return 0.68 * math.pi / (k * eta)
    return ns(float(text))


def _parse_values(text: str, section: str, key: str) -> tuple[float, ...]:
    """Comma list of numbers, or ``logspace:min,max,count``."""
    text = text.strip()
    if text.startswith("logspace:"):
        parts = text[len("logspace:"):].split(",")
        if len(parts) != 3:
            _fail(section, key, "logspace needs min,max,count")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            _fail(section, key, f"malformed logspace spec {text!r}")
        if lo <= 0 or hi <= 0 or count < 1:
            _fail(section, key, "logspace needs positive bounds and count >= 1")
        return tuple(float(v) for v in np.geomspace(lo, hi, count))
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        _fail(section, key, f"expected a comma list of numbers, got {text!r}")


def load_config(path: str) -> RunConfig:
    """Parse and validate a run configuration file.

    Raises ConfigError with a ``[section] key`` diagnostic on any parse or
    validation failure.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    for required in ("transmon", "drive", "sweep"):
        if not parser.has_section(required):
            raise ConfigError(f"missing required section [{required}]")

    # DomainError (e.g. invalid flux) propagates: it is a physics problem,
    # not a parse problem, and maps to a different exit code
    transmon_sec = _Section(parser, "transmon")
    transmon = TransmonParams.from_ghz(
        ec_ghz=transmon_sec.number("ec_ghz", 0.5),
        ej_ratio=transmon_sec.number("ej_ratio", 100.0),
        phi_res=transmon_sec.number("phi_res"),
        phi_disp=transmon_sec.number("phi_disp"),
    )

    eta = _Section(parser, "drive").number("eta_ghz") * RAD_PER_GHZ
    if eta <= 0:
        _fail("drive", "eta_ghz", "must be positive")

    scheme = "double"
    if parser.has_section("scheme"):
        scheme = _Section(parser, "scheme").text("kind", "double")
    try:
        parse_scheme(scheme)
    except ValueError as exc:
        _fail("scheme", "kind", str(exc))

    sweep_sec = _Section(parser, "sweep")
    omega_min = sweep_sec.number("min_ghz") * RAD_PER_GHZ
    omega_max = sweep_sec.number("max_ghz") * RAD_PER_GHZ
    if not omega_max > omega_min:
        _fail("sweep", "max_ghz", "empty grid: max_ghz must exceed min_ghz")
    coarse_step = sweep_sec.number("step_mhz", 1.0) * RAD_PER_MHZ
    refine_step = sweep_sec.number("refine_step_mhz", 0.1) * RAD_PER_MHZ
    if coarse_step <= 0 or refine_step <= 0:
        _fail("sweep", "step_mhz", "grid steps must be positive")
    baseline_shift = sweep_sec.flag("baseline_shift", True)
    cw_amplitude = sweep_sec.number("cw_amplitude", 0.5)
    if cw_amplitude <= 0:
        _fail("sweep", "cw_amplitude", "must be positive")

    s_value = None
    ratio_r = None
    if parser.has_section("averaging"):
        avg_sec = _Section(parser, "averaging")
        if avg_sec.has("s"):
            try:
                s_value = parse_time_constant(avg_sec.text("s"), eta)
            except ValueError as exc:
                _fail("averaging", "s", str(exc))
            if s_value <= 0:
                _fail("averaging", "s", "time constant must be positive")
        if avg_sec.has("r"):
            ratio_r = avg_sec.number("r")
            if ratio_r < 0:
                _fail("averaging", "r", "must be non-negative")

    k_values = s_values = r_values = None
    p_min = 0.3
    shift_max = None
    if parser.has_section("optimizer"):
        opt_sec = _Section(parser, "optimizer")
        if opt_sec.has("k_values"):
            k_values = _parse_values(opt_sec.text("k_values"), "optimizer", "k_values")
            if any(k <= 0 for k in k_values):
                _fail("optimizer", "k_values", "harmonic multiples must be positive")
        if opt_sec.has("s_values_ns"):
            raw_s = _parse_values(opt_sec.text("s_values_ns"), "optimizer", "s_values_ns")
            if any(v <= 0 for v in raw_s):
                _fail("optimizer", "s_values_ns", "time constants must be positive")
            s_values = tuple(ns(v) for v in raw_s)
        if opt_sec.has("r_values"):
            r_values = _parse_values(opt_sec.text("r_values"), "optimizer", "r_values")
            if any(r < 0 for r in r_values):
                _fail("optimizer", "r_values", "ratios must be non-negative")
        p_min = opt_sec.number("p_min", 0.3)
        if opt_sec.has("shift_max_mhz"):
            shift_max = opt_sec.number("shift_max_mhz") * RAD_PER_MHZ
            if shift_max <= 0:
                _fail("optimizer", "shift_max_mhz", "must be positive")

    n_samples = 10**6
    seed = 42
    if parser.has_section("mc"):
        mc_sec = _Section(parser, "mc")
        n_samples = mc_sec.integer("n_samples", n_samples)
        if n_samples < 1:
            _fail("mc", "n_samples", "must be at least 1")
        seed = mc_sec.integer("seed", seed)

    out_dir = "."
    if parser.has_section("output"):
        out_dir = _Section(parser, "output").text("out_dir", ".")

    raw = {sec: dict(parser.items(sec)) for sec in parser.sections()}
    return RunConfig(
        transmon=transmon, eta=eta, scheme=scheme,
        omega_min=omega_min, omega_max=omega_max,
        coarse_step=coarse_step, refine_step=refine_step,
        baseline_shift=baseline_shift, cw_amplitude=cw_amplitude,
        s=s_value, ratio_r=ratio_r,
        k_values=k_values, s_values=s_values, r_values=r_values,
        p_min=p_min, shift_max=shift_max,
        n_samples=n_samples, seed=seed, out_dir=out_dir, raw=raw,
    )
