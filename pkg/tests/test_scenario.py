import pytest

from config.experiment_config import EXPERIMENT_PRESETS
from core.errors import ConfigError
from core.models import GridSpec
from noise import NoiseSpec
from scenario import ScenarioConfig, load_preset, load_scenario, parse_scenario

FULL_SCENARIO = """
# kite with a second, sound-hard disk
scheme = two
indicator = i3
k = 6.5
directions = 64
nodes = 128
model = additive
z0 = 10, -4
strengths = -1, 1, 1j
noise = absolute
noise_level = 0.02
seed = 99
region = -3, 3, -2, 2
spacing = 0.1
incidence = 0, 1

[scatterer]
kind = kite
center = 0, 0
bc = dirichlet

[scatterer]
kind = circle   # small disk
center = 4, 0
radius = 0.5
bc = neumann
"""


class TestParseScenario:
    def test_full_scenario(self):
        config = parse_scenario(FULL_SCENARIO)
        assert config.scheme == 'two' and config.indicator == 'i3'
        assert config.k == 6.5 and config.directions == 64 and config.nodes == 128
        assert config.model == 'additive'
        assert config.z0 == (10.0, -4.0)
        assert config.strengths == (-1 + 0j, 1 + 0j, 1j)
        assert config.noise == NoiseSpec('absolute', 0.02, 99)
        assert config.grid == GridSpec(-3.0, 3.0, -2.0, 2.0, 0.1)
        assert config.incidence == (0.0, 1.0)
        kinds = [(s.curve.kind, s.condition) for s in config.scatterers]
        assert kinds == [('kite', 'dirichlet'), ('circle', 'neumann')]
        assert config.scatterers[1].curve.radius == 0.5
        assert len(config.scene) == 2

    def test_defaults(self):
        config = parse_scenario("")
        assert config == ScenarioConfig()
        assert config.z0 == (12.0, 12.0)
        assert config.noise == NoiseSpec('relative', 0.1, config.noise.seed)

    def test_scheme_one_defaults(self):
        config = parse_scenario("scheme = one\nz0 = 12, 12; -12, 12\n")
        assert config.indicator == 'iz0'
        assert config.strengths == (1 + 0j,)
        assert config.reference_points == ((12.0, 12.0), (-12.0, 12.0))
        assert config.primary_strength == 1

    def test_scheme_one_accepts_zero_and_one_strength(self):
        config = parse_scenario("scheme = one\nstrengths = 0, 2j\n")
        assert config.primary_strength == 2j

    def test_base_keeps_unspecified_values(self):
        base = parse_scenario(FULL_SCENARIO)
        config = parse_scenario("k = 4\n", base)
        assert config.k == 4.0
        assert config.indicator == 'i3' and len(config.scatterers) == 2
        assert config.strengths == base.strengths

    def test_theta(self):
        config = parse_scenario("scheme = one\nindicator = itheta\ntheta = 1, 0; 0, 1\n")
        assert config.theta_set().directions == ((1.0, 0.0), (0.0, 1.0))

    @pytest.mark.parametrize("text, message", [
        ("color = red\n", "unknown key"),
        ("k = 1\nk = 2\n", "duplicate"),
        ("[scatterer]\nkind = kite\nkind = pear\n", "duplicate"),
        ("[obstacle]\n", "unknown section"),
        ("k 8\n", "key = value"),
        ("[scatterer]\ncenter = 1, 1\n", "no kind"),
        ("[scatterer]\nkind = blob\n", "kind"),
        ("[scatterer]\nkind = circle\nradius = -1\n", "radius"),
        ("k = fast\n", "k"),
        ("k = -8\n", "k must be positive"),
        ("nodes = 15\n", "nodes"),
        ("scheme = three\n", "scheme"),
        ("model = exact\n", "model"),
        ("scheme = one\nindicator = i2\n", "indicator"),
        ("scheme = one\nstrengths = 1, 2\n", "exactly one"),
        ("strengths = -1, 1\n", "three strengths"),
        ("strengths = 1, 2, 3\n", "collinear"),
        ("strengths = 1, x, 3\n", "complex"),
        ("z0 = 0, 0\n[scatterer]\nkind = kite\n", "invalid scene"),
        ("[scatterer]\nkind = circle\ncenter = 0, 0\n[scatterer]\nkind = circle\ncenter = 0.5, 0\n", "invalid scene"),
        ("noise_level = 2\n", "relative noise"),
        ("region = 1, 0, 0, 1\n", "increasing"),
        ("region = 1, 2\n", "region"),
    ])
    def test_rejects_invalid(self, text, message):
        with pytest.raises(ConfigError, match=message):
            parse_scenario(text)


class TestPresetsAndFiles:
    @pytest.mark.parametrize("name", sorted(EXPERIMENT_PRESETS))
    def test_every_preset_loads(self, name):
        config = load_preset(name)
        assert config.scatterers
        assert config.scene.is_exterior(config.z0)

    def test_preset_contents(self):
        config = load_preset('itheta-small')
        assert config.scheme == 'one' and config.indicator == 'itheta'
        assert [s.curve.radius for s in config.scatterers] == [0.05, 0.15]
        assert load_preset('phase-retrieval').z0 == (2.0, 2.0)

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="unknown preset"):
            load_preset('nope')

    def test_load_scenario(self, tmp_path):
        path = tmp_path / 'scene.txt'
        path.write_text(FULL_SCENARIO, encoding='utf-8')
        assert load_scenario(path).k == 6.5
        with pytest.raises(ConfigError):
            load_scenario(tmp_path / 'missing.txt')


class TestScenarioConfig:
    def test_with_overrides_ignores_none(self):
        config = ScenarioConfig().with_overrides(k=4.0, directions=None)
        assert config.k == 4.0 and config.directions == ScenarioConfig().directions

    def test_overrides_are_validated(self):
        with pytest.raises(ConfigError):
            ScenarioConfig().with_overrides(nodes=7)

    def test_to_dict(self):
        data = parse_scenario(FULL_SCENARIO).to_dict()
        assert data['strengths'] == [[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
        assert data['scatterers'][1] == {'kind': 'circle', 'center': [4.0, 0.0], 'radius': 0.5, 'bc': 'neumann'}
        assert data['noise'] == {'model': 'absolute', 'level': 0.02, 'seed': 99}

    def test_triple_follows_reference_point(self):
        triple = ScenarioConfig().triple((5.0, 5.0))
        assert triple.z0 == (5.0, 5.0) and triple.taus == (-1 + 0j, 1 + 0j, 1j)
