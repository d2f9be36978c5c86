#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Scenario configuration: parsing, presets and validation

Grammar (see SCENARIO_GUIDE.md): flat `key = value` lines, `#` starts a
comment, and each `[scatterer]` line opens a block taking kind/center/radius/bc.
"""

from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Tuple
import math

from config.experiment_config import (
    DEFAULT_DIRECTIONS,
    DEFAULT_FORWARD_MODEL,
    DEFAULT_INCIDENCE,
    DEFAULT_NOISE_LEVEL,
    DEFAULT_NOISE_MODEL,
    DEFAULT_REFERENCE_POINT,
    DEFAULT_REGION,
    DEFAULT_SEED,
    DEFAULT_SPACING,
    DEFAULT_STRENGTHS,
    DEFAULT_THETA_SET,
    DEFAULT_WAVENUMBER,
    EXPERIMENT_PRESETS,
    SCHEME_ONE_INDICATORS,
    SCHEME_TWO_INDICATORS,
)
from config.solver_config import DEFAULT_NODES, MIN_SOLVER_NODES
from core.errors import ConfigError, GeometryError, RetrievalError
from core.models import GridSpec, Point, PointScatterer, as_point
from inversion.indicators import ThetaSet
from inversion.phase_retrieval import RetrievalTriple
from noise import NoiseSpec
from scattering.geometry import BoundaryCurve, Scatterer, Scene

SCHEMES = ('one', 'two')
SYNTHESIS_MODELS = ('additive', 'coupled')
GLOBAL_KEYS = ('k', 'directions', 'nodes', 'model', 'scheme', 'indicator', 'z0', 'strengths',
               'noise', 'noise_level', 'seed', 'region', 'spacing', 'theta', 'incidence')
SCATTERER_KEYS = ('kind', 'center', 'radius', 'bc')


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one reconstruction run needs"""
    k: float = DEFAULT_WAVENUMBER
    directions: int = DEFAULT_DIRECTIONS
    nodes: int = DEFAULT_NODES
    scatterers: Tuple[Scatterer, ...] = ()
    reference_points: Tuple[Point, ...] = (DEFAULT_REFERENCE_POINT,)
    strengths: Tuple[complex, ...] = DEFAULT_STRENGTHS
    noise: NoiseSpec = field(default_factory=lambda: NoiseSpec(DEFAULT_NOISE_MODEL, DEFAULT_NOISE_LEVEL, DEFAULT_SEED))
    grid: GridSpec = field(default_factory=lambda: GridSpec(*DEFAULT_REGION, DEFAULT_SPACING))
    scheme: str = 'two'
    indicator: str = 'i2'
    theta: Tuple[Point, ...] = DEFAULT_THETA_SET
    incidence: Point = DEFAULT_INCIDENCE
    model: str = DEFAULT_FORWARD_MODEL

    def __post_init__(self):
        object.__setattr__(self, 'scatterers', tuple(self.scatterers))
        object.__setattr__(self, 'reference_points', tuple(as_point(p) for p in self.reference_points))
        object.__setattr__(self, 'strengths', tuple(complex(t) for t in self.strengths))
        object.__setattr__(self, 'theta', tuple(as_point(d) for d in self.theta))
        object.__setattr__(self, 'incidence', as_point(self.incidence))
        object.__setattr__(self, 'k', float(self.k))
        self._validate()

    def _validate(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ConfigError(f"k must be positive, got {self.k}")
        if self.directions < 1:
            raise ConfigError(f"directions must be positive, got {self.directions}")
        if self.nodes % 2 or self.nodes < MIN_SOLVER_NODES:
            raise ConfigError(f"nodes must be even and >= {MIN_SOLVER_NODES}, got {self.nodes}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.model not in SYNTHESIS_MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {SYNTHESIS_MODELS}")
        allowed = SCHEME_ONE_INDICATORS if self.scheme == 'one' else SCHEME_TWO_INDICATORS
        if self.indicator not in allowed:
            raise ConfigError(f"indicator {self.indicator!r} does not belong to scheme {self.scheme}; "
                              f"expected one of {allowed}")
        if not self.reference_points:
            raise ConfigError("at least one reference point z0 is required")

        nonzero = [t for t in self.strengths if t != 0]
        if self.scheme == 'one' and len(nonzero) != 1:
            raise ConfigError(f"scheme one needs exactly one nonzero strength, got {self.strengths}")
        if self.scheme == 'two':
            if len(self.strengths) != 3:
                raise ConfigError(f"scheme two needs three strengths, got {len(self.strengths)}")
            try:
                self.triple()
            except RetrievalError as exc:
                raise ConfigError(str(exc)) from exc

        try:
            for z0 in self.reference_points:
                Scene(self.scatterers, PointScatterer(z0, self.primary_strength))
        except GeometryError as exc:
            raise ConfigError(f"invalid scene: {exc}") from exc

    @property
    def z0(self) -> Point:
        return self.reference_points[0]

    @property
    def primary_strength(self) -> complex:
        """tau_1 of scheme one, or the first strength of scheme two"""
        nonzero = [t for t in self.strengths if t != 0]
        return nonzero[0] if nonzero else 0j

    @property
    def scene(self) -> Scene:
        return Scene(self.scatterers)

    def triple(self, z0: Optional[Point] = None) -> RetrievalTriple:
        return RetrievalTriple(*self.strengths, z0=z0 if z0 is not None else self.z0, k=self.k)

    def theta_set(self) -> ThetaSet:
        return ThetaSet(self.theta)

    def with_overrides(self, **overrides) -> 'ScenarioConfig':
        """Copy with the given fields replaced (None values are ignored)"""
        return replace(self, **{key: value for key, value in overrides.items() if value is not None})

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['strengths'] = [[t.real, t.imag] for t in self.strengths]
        data['scatterers'] = [
            {'kind': s.curve.kind, 'center': list(s.curve.center), 'radius': s.curve.radius, 'bc': s.condition}
            for s in self.scatterers
        ]
        return data


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------
def _floats(value: str, count: int, key: str) -> Tuple[float, ...]:
    parts = [p.strip() for p in value.split(',')]
    if len(parts) != count:
        raise ConfigError(f"{key} expects {count} comma-separated numbers, got {value!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key} holds a non-numeric value: {value!r}") from exc


def _points(value: str, key: str) -> Tuple[Point, ...]:
    return tuple(_floats(part, 2, key) for part in value.split(';') if part.strip())


def _number(value: str, key: str, kind=float):
    try:
        return kind(value)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a {kind.__name__}, got {value!r}") from exc


def _strengths(value: str) -> Tuple[complex, ...]:
    try:
        return tuple(complex(part.replace(' ', '')) for part in value.split(',') if part.strip())
    except ValueError as exc:
        raise ConfigError(f"strengths must be complex literals such as -1, 1, 1j; got {value!r}") from exc


def _scatterer(block: Dict[str, str], line_number: int) -> Scatterer:
    if 'kind' not in block:
        raise ConfigError(f"[scatterer] block ending at line {line_number} has no kind")
    try:
        curve = BoundaryCurve(
            block['kind'],
            _floats(block.get('center', '0, 0'), 2, 'center'),
            _number(block.get('radius', '1'), 'radius'),
        )
        return Scatterer(curve, block.get('bc', 'dirichlet'))
    except GeometryError as exc:
        raise ConfigError(f"[scatterer] block ending at line {line_number}: {exc}") from exc


def parse_scenario(text: str, base: Optional[ScenarioConfig] = None) -> ScenarioConfig:
    """Parse scenario text; unspecified keys keep the defaults"""
    values: Dict[str, str] = {}
    blocks = []
    current: Optional[Dict[str, str]] = None

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if line == '[scatterer]':
            if current is not None:
                blocks.append((current, line_number - 1))
            current = {}
            continue
        if line.startswith('['):
            raise ConfigError(f"line {line_number}: unknown section {line!r}")
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {line_number}: expected 'key = value', got {raw.strip()!r}")
        if current is not None and key in SCATTERER_KEYS:
            if key in current:
                raise ConfigError(f"line {line_number}: duplicate {key!r} in [scatterer] block")
            current[key] = value
        elif key in GLOBAL_KEYS:
            if key in values:
                raise ConfigError(f"line {line_number}: duplicate key {key!r}")
            values[key] = value
        else:
            raise ConfigError(f"line {line_number}: unknown key {key!r}")
    if current is not None:
        blocks.append((current, len(text.splitlines())))

    overrides = {}
    if blocks or base is None:
        overrides['scatterers'] = tuple(_scatterer(block, end) for block, end in blocks)
    scheme = values.get('scheme', base.scheme if base else 'two')
    overrides['scheme'] = scheme
    same_scheme = base is not None and base.scheme == scheme
    if 'k' in values:
        overrides['k'] = _number(values['k'], 'k')
    if 'directions' in values:
        overrides['directions'] = _number(values['directions'], 'directions', int)
    if 'nodes' in values:
        overrides['nodes'] = _number(values['nodes'], 'nodes', int)
    if 'model' in values:
        overrides['model'] = values['model']
    if 'indicator' in values:
        overrides['indicator'] = values['indicator']
    elif not same_scheme:
        overrides['indicator'] = 'iz0' if scheme == 'one' else 'i2'
    if 'z0' in values:
        overrides['reference_points'] = _points(values['z0'], 'z0')
    if 'strengths' in values:
        overrides['strengths'] = _strengths(values['strengths'])
    elif not same_scheme:
        overrides['strengths'] = (DEFAULT_STRENGTHS[1],) if scheme == 'one' else DEFAULT_STRENGTHS
    if 'region' in values or 'spacing' in values:
        default_grid = base.grid if base else GridSpec(*DEFAULT_REGION, DEFAULT_SPACING)
        region = _floats(values['region'], 4, 'region') if 'region' in values else (
            default_grid.x_min, default_grid.x_max, default_grid.y_min, default_grid.y_max)
        spacing = _number(values['spacing'], 'spacing') if 'spacing' in values else default_grid.spacing
        try:
            overrides['grid'] = GridSpec(*region, spacing)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if any(key in values for key in ('noise', 'noise_level', 'seed')):
        default_noise = base.noise if base else NoiseSpec(DEFAULT_NOISE_MODEL, DEFAULT_NOISE_LEVEL, DEFAULT_SEED)
        overrides['noise'] = NoiseSpec(
            values.get('noise', default_noise.model),
            _number(values['noise_level'], 'noise_level') if 'noise_level' in values else default_noise.level,
            _number(values['seed'], 'seed', int) if 'seed' in values else default_noise.seed,
        )
    if 'theta' in values:
        overrides['theta'] = _points(values['theta'], 'theta')
    if 'incidence' in values:
        overrides['incidence'] = _floats(values['incidence'], 2, 'incidence')

    return replace(base, **overrides) if base else ScenarioConfig(**overrides)


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(text)


def load_preset(name: str) -> ScenarioConfig:
    """Named experiment preset"""
    if name not in EXPERIMENT_PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(sorted(EXPERIMENT_PRESETS))}")
    return parse_scenario(EXPERIMENT_PRESETS[name])
