"""Command line entry point: ``dmamimo {rates,pattern,element-response,validate}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys

import numpy as np

from .beampattern import angle_grid, array_factor, holographic_tuning
from .element import FeasibleSet, LorentzianTuning, normalized_response_curve
from .errors import ConfigError, NumericalError, SingularFrontEndError
from .experiment import ARCHITECTURES, load_config, preset, run_experiment, write_csv
from .validation import run_invariant_suite
from .waveguide import ArrayGeometry

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_SETS = {s.value: s for s in FeasibleSet}


def _csv_list(text):
    return [item.strip() for item in text.split(",") if item.strip()]


def _float_list(text):
    return [float(x) for x in _csv_list(text)]


def _build_parser():
    p = argparse.ArgumentParser(prog="dmamimo", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rates", help="Monte Carlo uplink sum-rate experiment (CSV)")
    r.add_argument("--config", help="JSON experiment config")
    r.add_argument("--preset", choices=("desk", "paper"), help="named configuration (default desk)")
    r.add_argument("--seed", type=int, help="master RNG seed (unsigned 64-bit)")
    r.add_argument("--trials", type=int, help="number of channel realizations")
    r.add_argument("--arch", type=_csv_list, help=f"comma list from {','.join(ARCHITECTURES)}")
    r.add_argument("--out", help="output CSV path (default: stdout)")
    r.add_argument("--workers", type=int, default=1, help="worker processes")

    b = sub.add_parser("pattern", help="holographic beam steering pattern of one microstrip (CSV)")
    b.add_argument("--target", type=float, default=30.0, help="steering angle in degrees")
    b.add_argument("--set", choices=sorted(_SETS), default="lorentzian", help="element weight set")
    b.add_argument("--elements", type=int, default=32, help="elements per microstrip")
    b.add_argument("--carrier", type=float, default=3.5e9, help="carrier frequency in Hz")
    b.add_argument("--step", type=float, default=0.1, help="angular grid step in degrees")
    b.add_argument("--out", help="output CSV path (default: stdout)")

    e = sub.add_parser("element-response", help="normalized Lorentzian element responses (CSV)")
    e.add_argument("--resonances", type=_float_list, default=[1.5e9, 3.3e9, 3.5e9, 3.7e9],
                   help="comma list of resonance frequencies in Hz")
    e.add_argument("--damping", type=float, default=1e8, help="damping factor in Hz")
    e.add_argument("--strength", type=float, default=1.0, help="oscillator strength")
    e.add_argument("--fmin", type=float, default=3.0e9)
    e.add_argument("--fmax", type=float, default=4.0e9)
    e.add_argument("--points", type=int, default=1001)
    e.add_argument("--out", help="output CSV path (default: stdout)")

    v = sub.add_parser("validate", help="run the randomized invariant suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--instances", type=int, default=200)
    return p


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _cmd_rates(args):
    if args.config and args.preset:
        raise ConfigError("--config and --preset are mutually exclusive; set 'preset' inside the config")
    spec = load_config(args.config) if args.config else preset(args.preset or "desk")
    try:
        scenario = spec.scenario
        if args.seed is not None:
            scenario = dataclasses.replace(scenario, rng_seed=args.seed)
        if args.trials is not None:
            scenario = dataclasses.replace(scenario, num_trials=args.trials)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    spec = dataclasses.replace(
        spec,
        scenario=scenario,
        architectures=tuple(args.arch) if args.arch else spec.architectures,
        output_path=args.out if args.out else spec.output_path,
    )
    if args.workers < 1:
        raise ConfigError("--workers must be at least 1")
    results = run_experiment(spec, workers=args.workers)
    if spec.output_path is None:
        write_csv(sys.stdout, results, spec.scenario.rng_seed)
    else:
        print(f"wrote {len(results)} rows to {spec.output_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_pattern(args):
    try:
        geo = ArrayGeometry.default(1, args.elements, args.carrier)
        angles = angle_grid(args.step)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    weights = holographic_tuning(geo, args.target, _SETS[args.set])
    pat = array_factor(geo, weights, angles)
    fh = _open_out(args.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("angle_deg", "magnitude_db"))
        for a, m in zip(pat.angles, pat.magnitudes_db):
            w.writerow((f"{a:g}", f"{m:.6f}"))
    finally:
        if fh is not sys.stdout:
            fh.close()
    print(
        f"peak {pat.peak_angle:g} deg, half-power beamwidth {pat.half_power_beamwidth:.2f} deg, "
        f"peak sidelobe {pat.peak_sidelobe_db():.2f} dB",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_element_response(args):
    try:
        f = np.linspace(args.fmin, args.fmax, args.points)
        tunings = [LorentzianTuning(args.strength, args.damping, f0) for f0 in args.resonances]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    fh = _open_out(args.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("resonance_hz", "frequency_hz", "normalized_magnitude"))
        for t in tunings:
            for fi, ci in zip(f, normalized_response_curve(t, f)):
                w.writerow((f"{t.resonance_frequency:g}", f"{fi:.6g}", f"{ci:.8f}"))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def _cmd_validate(args):
    checks = run_invariant_suite(seed=args.seed, n=args.instances)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERICAL


_COMMANDS = {
    "rates": _cmd_rates,
    "pattern": _cmd_pattern,
    "element-response": _cmd_element_response,
    "validate": _cmd_validate,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularFrontEndError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
