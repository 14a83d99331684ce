"""Scenario configuration: defaults, YAML load/save and derived model objects.

A scenario is a tree of small frozen sections. Every field has a default,
so an empty file yields the reference configuration. Sweeps address
fields by dotted name, e.g. ``link.snr_db`` or ``turbulence.spectral_index``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from .beam import BeamParams, MisalignmentParams, r_max
from .errors import ConfigError, OamLinkError, ParseError, ValidationError
from .channel import DIAGONAL_MODELS
from .geometry import GEOMETRY_CONVENTIONS, ArrayGeometry
from .link import SYMBOL_METRICS, ConstellationSpec, PowerAllocation
from .optimizer import STATE_RULES, TIE_BREAKS, StateSetRule, state_set
from .purity import PurityConfig
from .turbulence import TurbulenceParams

__all__ = [
    "BeamSection",
    "ArraySection",
    "MisalignmentSection",
    "TurbulenceSection",
    "LinkSection",
    "PuritySection",
    "StatesSection",
    "OptimizerSection",
    "Scenario",
    "load_scenario",
    "save_scenario",
    "deflection_from_db",
    "deflection_to_db",
]


@dataclass(frozen=True)
class BeamSection:
    wavelength: float = 0.005
    waist: float = 11.0
    reference_state: int = 1


@dataclass(frozen=True)
class ArraySection:
    num_antennas: int = 8
    spacing: float | None = None  # None: 3 * r_max of the reference state
    link_distance: float = 50.0
    geometry: str = "signed"


@dataclass(frozen=True)
class MisalignmentSection:
    displacement: float | None = None  # None: one wavelength
    displacement_azimuth: float = math.pi / 2
    deflection: float = 1e-4
    deflection_azimuth: float = 0.0
    deflection_db_factor: int = 10


@dataclass(frozen=True)
class TurbulenceSection:
    spectral_index: float = 3.7
    structure_constant: float = 3e-12
    inner_scale: float = 0.01
    outer_scale: float = 50.0


@dataclass(frozen=True)
class LinkSection:
    snr_db: float = 10.0
    tx_power: float = 1.0
    gain_constant: float | str = "auto"  # "auto": unit aligned self-link gain
    constellation: int = 4
    symbol_metric: str = "distance"
    diagonal: str = "ideal"


@dataclass(frozen=True)
class PuritySection:
    aperture_width: float | None = None  # None: ω(z)/10 of each state
    halfwidth: int = 8


@dataclass(frozen=True)
class StatesSection:
    base_state: int = 1
    count: int = 4
    interval: int = 1
    rule: str = "from_base"


@dataclass(frozen=True)
class OptimizerSection:
    max_interval: int = 10
    tie_break: str = "first"


_SECTIONS = {
    "beam": BeamSection,
    "array": ArraySection,
    "misalignment": MisalignmentSection,
    "turbulence": TurbulenceSection,
    "link": LinkSection,
    "purity": PuritySection,
    "states": StatesSection,
    "optimizer": OptimizerSection,
}


def deflection_from_db(db: float, factor: int = 10) -> float:
    """Deflection angle in radians from γ_dB = factor·log10(γ / 1 rad)."""
    return 10 ** (db / factor)


def deflection_to_db(gamma: float, factor: int = 10) -> float:
    return factor * math.log10(gamma)


@dataclass(frozen=True)
class Scenario:
    beam: BeamSection = field(default_factory=BeamSection)
    array: ArraySection = field(default_factory=ArraySection)
    misalignment: MisalignmentSection = field(default_factory=MisalignmentSection)
    turbulence: TurbulenceSection = field(default_factory=TurbulenceSection)
    link: LinkSection = field(default_factory=LinkSection)
    purity: PuritySection = field(default_factory=PuritySection)
    states: StatesSection = field(default_factory=StatesSection)
    optimizer: OptimizerSection = field(default_factory=OptimizerSection)

    def __post_init__(self):
        self.validate()

    # derived model objects

    @property
    def z(self) -> float:
        return self.array.link_distance

    def reference_beam(self) -> BeamParams:
        b = self.beam
        return BeamParams(b.wavelength, b.waist, b.reference_state)

    def ring_radius(self) -> float:
        return r_max(self.reference_beam(), self.z)

    def geometry(self) -> ArrayGeometry:
        a = self.array
        spacing = 3 * self.ring_radius() if a.spacing is None else a.spacing
        return ArrayGeometry(a.num_antennas, spacing, a.link_distance)

    def misalignment_params(self) -> MisalignmentParams:
        m = self.misalignment
        delta = self.beam.wavelength if m.displacement is None else m.displacement
        return MisalignmentParams(delta, m.displacement_azimuth, m.deflection,
                                  m.deflection_azimuth)

    def turbulence_params(self) -> TurbulenceParams:
        t = self.turbulence
        return TurbulenceParams(t.spectral_index, t.structure_constant,
                                t.inner_scale, t.outer_scale)

    def allocation(self) -> PowerAllocation:
        return PowerAllocation.from_snr_db(self.link.snr_db, self.link.tx_power)

    def constellation(self) -> ConstellationSpec:
        return ConstellationSpec.gray(self.link.constellation)

    def purity_config(self) -> PurityConfig:
        return PurityConfig(self.purity.aperture_width, self.purity.halfwidth)

    def state_rule(self) -> StateSetRule:
        s = self.states
        return StateSetRule(s.base_state, s.count, s.rule)

    def state_list(self) -> list[int]:
        return state_set(self.state_rule(), self.states.interval)

    # functional updates

    def replace(self, name: str, value: Any) -> "Scenario":
        """Copy with the dotted field ``name`` set to ``value``."""
        section, _, key = name.partition(".")
        if section not in _SECTIONS or not key:
            raise ValidationError(f"unknown scenario field {name!r}")
        sec = getattr(self, section)
        if key not in {f.name for f in fields(sec)}:
            raise ValidationError(f"unknown scenario field {name!r}")
        return dataclasses.replace(self, **{section: dataclasses.replace(sec, **{key: value})})

    def with_interval(self, o: int) -> "Scenario":
        return self.replace("states.interval", o)

    def aligned(self) -> "Scenario":
        """The same scenario with zero displacement and deflection."""
        return self.replace("misalignment.displacement", 0.0).replace("misalignment.deflection", 0.0)

    def with_deflection_db(self, db: float) -> "Scenario":
        factor = self.misalignment.deflection_db_factor
        return self.replace("misalignment.deflection", deflection_from_db(db, factor))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def validate(self) -> None:
        """Build every derived object so that component invariants are checked."""
        m = self.misalignment
        if m.deflection_db_factor not in (10, 20):
            raise ValidationError("misalignment.deflection_db_factor must be 10 or 20")
        if self.link.constellation not in (2, 4, 16):
            raise ValidationError("link.constellation must be 2, 4 or 16")
        if self.link.symbol_metric not in SYMBOL_METRICS:
            raise ValidationError(f"link.symbol_metric must be one of {SYMBOL_METRICS}")
        g = self.link.gain_constant
        if isinstance(g, str) and g != "auto":
            raise ValidationError("link.gain_constant must be a number or 'auto'")
        if not isinstance(g, str) and not g > 0:
            raise ValidationError("link.gain_constant must be > 0")
        if self.array.geometry not in GEOMETRY_CONVENTIONS:
            raise ValidationError(f"array.geometry must be one of {GEOMETRY_CONVENTIONS}")
        if self.link.diagonal not in DIAGONAL_MODELS:
            raise ValidationError(f"link.diagonal must be one of {DIAGONAL_MODELS}")
        if self.states.rule not in STATE_RULES:
            raise ValidationError(f"states.rule must be one of {STATE_RULES}")
        if self.optimizer.tie_break not in TIE_BREAKS:
            raise ValidationError(f"optimizer.tie_break must be one of {TIE_BREAKS}")
        if self.optimizer.max_interval < 1:
            raise ValidationError("optimizer.max_interval must be >= 1")
        if self.states.interval < 1:
            raise ValidationError("states.interval must be >= 1")
        if self.beam.reference_state < 1:
            raise ValidationError("beam.reference_state must be >= 1")
        try:
            self.reference_beam()
            self.geometry()
            self.misalignment_params()
            self.turbulence_params()
            self.allocation()
            self.purity_config()
            self.state_rule()
        except ValidationError:
            raise
        except (OamLinkError, ValueError) as exc:
            raise ValidationError(str(exc)) from exc


_NUMERIC = (int, float)


def _coerce(section: str, key: str, value: Any, annotation: str) -> Any:
    where = f"{section}.{key}"
    if value is None:
        if "None" in annotation:
            return None
        raise ValidationError(f"{where} may not be null")
    if isinstance(value, bool):
        raise ValidationError(f"{where} must not be a boolean")
    if annotation.startswith("int"):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        if not isinstance(value, int):
            raise ValidationError(f"{where} must be an integer, got {value!r}")
        return value
    if "str" in annotation and isinstance(value, str):
        return value
    if annotation == "str":
        raise ValidationError(f"{where} must be a string, got {value!r}")
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise ValidationError(f"{where} must be a number, got {value!r}") from None
    if not isinstance(value, _NUMERIC):
        raise ValidationError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{where} must be finite")
    return value


def scenario_from_dict(data: dict | None) -> Scenario:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValidationError("top level of a scenario must be a mapping")
    kwargs = {}
    for name, value in data.items():
        if name not in _SECTIONS:
            raise ValidationError(
                f"unknown section {name!r}; expected one of {sorted(_SECTIONS)}")
        cls = _SECTIONS[name]
        if value is None:
            value = {}
        if not isinstance(value, dict):
            raise ValidationError(f"section {name!r} must be a mapping")
        known = {f.name: f for f in fields(cls)}
        vals = {}
        for key, v in value.items():
            if key not in known:
                raise ValidationError(
                    f"unknown key {name}.{key}; expected one of {sorted(known)}")
            f = known[key]
            vals[key] = _coerce(name, key, v, str(f.type))
        kwargs[name] = cls(**vals)
    return Scenario(**kwargs)


def load_scenario(path: str | Path | None) -> Scenario:
    """Read a YAML scenario; missing keys take their defaults."""
    if path is None:
        return Scenario()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        loc = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise ParseError(f"{path}: {loc}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        return scenario_from_dict(data)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(yaml.safe_dump(scenario.to_dict(), sort_keys=False))


def default_config_text() -> str:
    """The commented default configuration shipped with the package."""
    return (Path(__file__).parent / "data" / "default.yaml").read_text()

