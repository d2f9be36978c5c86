#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Phaseless Scattering Toolkit - Unified Entry Point
Synthesis, noise, phase retrieval, indicators and the two reconstruction schemes
"""

import sys
import os
import argparse
from pathlib import Path

# Set UTF-8 encoding for Windows console
if sys.platform == "win32":
    import codecs
    sys.stdout = codecs.getwriter("utf-8")(sys.stdout.detach())
    sys.stderr = codecs.getwriter("utf-8")(sys.stderr.detach())
    os.environ["PYTHONIOENCODING"] = "utf-8"

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent / "src"))

from config.experiment_config import DEFAULT_WORKERS, EXPERIMENT_PRESETS, LOG_DIR
from core.errors import ScatteringError
from core.logging_setup import setup_logging
from core.models import DirectionGrid, FarFieldMatrix, GridSpec, PhaselessMatrix, PointScatterer
from file_formats import read_far_field, write_far_field, write_grid, write_profile
from inversion.indicators import ThetaSet, f_matrix, indicator_i2, indicator_i3, indicator_itheta, indicator_iz0
from inversion.phase_retrieval import RetrievalTriple, incidence_profile, retrieve_far_field
from noise import NoiseSpec, add_noise
from scattering.forward import far_field_combined, far_field_obstacle, far_field_point
from scenario import ScenarioConfig, load_preset, load_scenario
from schemes.scheme_one import create_scheme as create_scheme_one
from schemes.scheme_two import create_scheme as create_scheme_two


def _point(text: str):
    parts = [p.strip() for p in text.split(',')]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    return float(parts[0]), float(parts[1])


def _points(text: str):
    return tuple(_point(part) for part in text.split(';') if part.strip())


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(' ', ''))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a complex literal such as 1j, got {text!r}") from exc


def _region(text: str):
    parts = [float(p) for p in text.split(',')]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected 'x0,x1,y0,y1'")
    return parts


def load_config(args) -> ScenarioConfig:
    """Scenario from --preset or --scenario (defaults otherwise), then CLI overrides"""
    if getattr(args, 'preset', None):
        config = load_preset(args.preset)
        print(f"🧪 PRESET: {args.preset}")
    elif getattr(args, 'scenario', None):
        config = load_scenario(args.scenario)
        print(f"📄 SCENARIO: {args.scenario}")
    else:
        config = ScenarioConfig()
        print("⚙️ DEFAULT SCENARIO")

    overrides = {
        'k': getattr(args, 'k', None),
        'directions': getattr(args, 'directions', None),
        'nodes': getattr(args, 'nodes', None),
        'reference_points': _points(args.z0) if getattr(args, 'z0', None) else None,
    }
    if getattr(args, 'noise_level', None) is not None or getattr(args, 'seed', None) is not None:
        model, level = config.noise.model, config.noise.level
        if args.noise_level is not None:
            level = args.noise_level
            model = 'none' if level == 0 else (model if model != 'none' else 'relative')
        overrides['noise'] = NoiseSpec(model, level, args.seed if args.seed is not None else config.noise.seed)
    return config.with_overrides(**overrides)


def _grid_spec(args, config: ScenarioConfig) -> GridSpec:
    spec = config.grid
    if args.region or args.spacing:
        region = args.region or (spec.x_min, spec.x_max, spec.y_min, spec.y_max)
        spec = GridSpec(*region, args.spacing or spec.spacing)
    return spec


def cmd_synth(args):
    config = load_config(args)
    grid = DirectionGrid(config.directions)
    tau = args.tau if args.tau is not None else config.primary_strength
    if args.model == 'obstacle-only':
        matrix = far_field_obstacle(config.scene, config.k, grid, config.nodes)
    elif args.model == 'point-only':
        matrix = far_field_point(PointScatterer(config.z0, tau), config.k, grid)
    else:
        matrix = far_field_combined(config.scene, PointScatterer(config.z0, tau), config.k, grid,
                                    config.nodes, args.model)
    if args.modulus:
        matrix = matrix.modulus()
    write_far_field(matrix, args.out)
    print(f"✅ {args.model} far field ({grid.N}x{grid.N}) written to {args.out}")


def cmd_noise(args):
    matrix = read_far_field(args.input)
    if isinstance(matrix, FarFieldMatrix):
        matrix = matrix.modulus()
    noisy = add_noise(matrix, NoiseSpec(args.noise, args.level, args.seed), args.index)
    write_far_field(noisy, args.out)
    print(f"✅ {args.noise} noise {args.level:g} applied, written to {args.out}")


def cmd_retrieve(args):
    moduli = [read_far_field(path) for path in args.inputs]
    if any(not isinstance(m, PhaselessMatrix) for m in moduli):
        raise ScatteringError("retrieve expects three modulus files")
    taus = args.tau or [m.tau for m in moduli]
    z0 = args.z0 or moduli[0].z0
    if any(t is None for t in taus) or z0 is None:
        raise ScatteringError("strengths and z0 must come from the file headers or --tau/--z0")
    triple = RetrievalTriple(*taus, z0=z0, k=moduli[0].k)
    retrieved = retrieve_far_field(moduli, triple)
    write_far_field(retrieved, args.out)
    print(f"✅ Retrieved phased far field written to {args.out}")


def cmd_indicate(args):
    spec = _grid_spec(args, ScenarioConfig())
    workers, progress = args.workers, not args.no_progress
    if args.indicator in ('iz0', 'itheta'):
        if not (args.combined and args.bare):
            raise ScatteringError(f"{args.indicator} needs --combined and --bare modulus files")
        combined, bare = (m.modulus() if isinstance(m, FarFieldMatrix) else m
                          for m in (read_far_field(args.combined), read_far_field(args.bare)))
        tau = args.tau if args.tau is not None else combined.tau
        F = f_matrix(combined, bare, tau)
        if args.indicator == 'iz0':
            field = indicator_iz0(F, spec, workers, progress)
        else:
            field = indicator_itheta(F, ThetaSet(args.theta), spec, workers, progress)
    else:
        if not args.far_field:
            raise ScatteringError(f"{args.indicator} needs --far-field")
        U = read_far_field(args.far_field)
        if not isinstance(U, FarFieldMatrix):
            raise ScatteringError(f"{args.indicator} needs phased data")
        if args.indicator == 'i3':
            field = indicator_i3(U, args.incidence, spec, workers, progress)
        else:
            field = indicator_i2(U, spec, workers, progress)
    write_grid(field, args.out, args.format)
    print(f"✅ {args.indicator} grid written to {args.out}")


def _run_scheme(args, factory, scheme: str):
    config = load_config(args)
    if config.scheme != scheme:
        raise ScatteringError(f"scenario is configured for scheme {config.scheme}, not {scheme}")
    pipeline = factory(config, max_workers=args.workers, show_progress=not args.no_progress,
                       log_dir=args.log_dir, output_dir=args.out_dir)
    field = pipeline.run()
    pipeline.print_summary(field)
    print(f"✅ Scheme {scheme} completed")


def cmd_compare(args):
    config = load_config(args)
    if config.scheme != 'two':
        config = config.with_overrides(scheme='two', indicator='i2', strengths=(-1, 1, 1j))
    pipeline = create_scheme_two(config, max_workers=args.workers, show_progress=not args.no_progress,
                                 log_dir=args.log_dir)
    incidence = args.incidence or config.incidence
    angles, truth = incidence_profile(pipeline.obstacle_far_field(), incidence)
    _, retrieved = incidence_profile(pipeline.retrieve(), incidence)
    write_profile(args.out, angles, truth, retrieved)
    print(f"📈 Relative retrieval error: {pipeline.retrieval_error():.3e}")
    print(f"✅ Profile written to {args.out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Phaseless Inverse Scattering - reference point reconstruction toolkit',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Scheme One (phaseless data, strengths {0, tau}) on the kite preset
  python main.py scheme-one --preset iz0-soft --out-dir results/iz0

  # Scheme Two (three strengths, phase retrieval, I2) with 5% noise
  python main.py scheme-two --preset i2-soft --noise-level 0.05 --out-dir results/i2

  # Step by step
  python main.py synth --preset i2-soft --model coupled --tau -1 --modulus --out m1.pfft
  python main.py noise --in m1.pfft --level 0.1 --seed 7 --out m1n.pfft
  python main.py retrieve --in m1n.pfft m2n.pfft m3n.pfft --out u.pfft
  python main.py indicate --indicator i2 --far-field u.pfft --out i2.pgm --format pgm

Presets: """ + ', '.join(sorted(EXPERIMENT_PRESETS))
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--workers', type=int, default=DEFAULT_WORKERS, help=f'Worker threads (default: {DEFAULT_WORKERS})')
    common.add_argument('--no-progress', action='store_true', help='Hide progress bars')
    common.add_argument('--log-dir', type=Path, default=None, help=f'Write log files here (e.g. {LOG_DIR})')

    scenario = argparse.ArgumentParser(add_help=False)
    source = scenario.add_mutually_exclusive_group()
    source.add_argument('--preset', choices=sorted(EXPERIMENT_PRESETS), help='Named experiment preset')
    source.add_argument('--scenario', type=Path, help='Scenario file')
    scenario.add_argument('--k', type=float, help='Wavenumber')
    scenario.add_argument('--directions', type=int, help='Number of directions N')
    scenario.add_argument('--nodes', type=int, help='Nystrom nodes per curve')
    scenario.add_argument('--z0', help="Reference point(s) 'x,y' or 'x,y; x,y'")
    scenario.add_argument('--noise-level', type=float, help='Noise level delta (0 disables noise)')
    scenario.add_argument('--seed', type=int, help='Noise seed')

    synth = subparsers.add_parser('synth', parents=[common, scenario], help='Synthesize a far-field matrix')
    synth.add_argument('--model', choices=['obstacle-only', 'point-only', 'additive', 'coupled'], default='coupled')
    synth.add_argument('--tau', type=_complex, help='Strength of the reference point')
    synth.add_argument('--modulus', action='store_true', help='Write |u| instead of u')
    synth.add_argument('--out', type=Path, required=True)
    synth.set_defaults(handler=cmd_synth)

    noise = subparsers.add_parser('noise', parents=[common], help='Perturb a modulus matrix')
    noise.add_argument('--in', dest='input', type=Path, required=True)
    noise.add_argument('--noise', choices=['relative', 'absolute'], default='relative')
    noise.add_argument('--level', type=float, default=0.1)
    noise.add_argument('--seed', type=int, default=0)
    noise.add_argument('--index', type=int, default=0, help='Stream index added to the seed')
    noise.add_argument('--out', type=Path, required=True)
    noise.set_defaults(handler=cmd_noise)

    retrieve = subparsers.add_parser('retrieve', parents=[common], help='Phase retrieval from three moduli')
    retrieve.add_argument('--in', dest='inputs', type=Path, nargs=3, required=True)
    retrieve.add_argument('--tau', type=_complex, nargs=3, help='Strengths (default: from file headers)')
    retrieve.add_argument('--z0', type=_point, help='Reference point (default: from file headers)')
    retrieve.add_argument('--out', type=Path, required=True)
    retrieve.set_defaults(handler=cmd_retrieve)

    indicate = subparsers.add_parser('indicate', parents=[common], help='Evaluate an indicator on a grid')
    indicate.add_argument('--indicator', choices=['iz0', 'itheta', 'i2', 'i3'], required=True)
    indicate.add_argument('--combined', type=Path, help='Modulus file measured with the reference point')
    indicate.add_argument('--bare', type=Path, help='Modulus file measured with tau = 0')
    indicate.add_argument('--tau', type=_complex, help='Strength (default: from the combined file)')
    indicate.add_argument('--far-field', type=Path, help='Phased far-field file (i2, i3)')
    indicate.add_argument('--theta', type=_points, default=None, help="Theta set 'x,y; x,y; ...'")
    indicate.add_argument('--incidence', type=_point, default=(1.0, 0.0))
    indicate.add_argument('--region', type=_region, help='x0,x1,y0,y1')
    indicate.add_argument('--spacing', type=float)
    indicate.add_argument('--format', choices=['csv', 'pgm'], default='csv')
    indicate.add_argument('--out', type=Path, required=True)
    indicate.set_defaults(handler=cmd_indicate)

    for name, factory, scheme in (('scheme-one', create_scheme_one, 'one'), ('scheme-two', create_scheme_two, 'two')):
        sub = subparsers.add_parser(name, parents=[common, scenario], help=f'Run reconstruction scheme {scheme}')
        sub.add_argument('--out-dir', type=Path, default=None, help='Directory for far fields, grids and manifest')
        sub.set_defaults(handler=lambda args, f=factory, s=scheme: _run_scheme(args, f, s))

    compare = subparsers.add_parser('compare', parents=[common, scenario],
                                    help='Compare retrieved and true far field for one incidence')
    compare.add_argument('--incidence', type=_point)
    compare.add_argument('--out', type=Path, required=True)
    compare.set_defaults(handler=cmd_compare)
    return parser


def main(argv=None) -> int:
    """Unified entry point"""
    args = build_parser().parse_args(argv)
    if getattr(args, 'theta', None) is None and getattr(args, 'command', None) == 'indicate':
        args.theta = ScenarioConfig().theta
    setup_logging(args.log_dir, run_name=args.command.replace('-', '_'))

    print(f"\n{'='*70}")
    print(f"COMMAND: {args.command}")
    print(f"{'='*70}\n")
    try:
        args.handler(args)
    except KeyboardInterrupt:
        print(f"\n⚠️ {args.command} interrupted by user")
        return 130
    except (ScatteringError, ValueError) as e:
        print(f"\n❌ {args.command} failed: {e}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
