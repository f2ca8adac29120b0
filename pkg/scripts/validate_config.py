#!/usr/bin/env python3
"""
FluxCoupler Configuration Validation Script

Checks the environment settings, the bundled device parameter sets and,
optionally, a run config before a long sweep is started.
"""

import argparse
import json
import os
import sys
from pathlib import Path

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.config import get_config  # noqa: E402
from src.exceptions import FluxCouplerError  # noqa: E402
from src.models import load_device, load_run_config  # noqa: E402


def validate_configuration(run_config_path: str = None) -> bool:
    """Validate settings, device files and an optional run config."""
    print("🔧 FluxCoupler Configuration Validation")
    print("=" * 50)

    try:
        config = get_config()
        if not config.validate():
            print("❌ Configuration validation failed!")
            return False
        print("✅ Settings loaded and validated")

        solver = config.solver
        print("\n🧮 Solver:")
        print(f"   Levels: qubit {solver.qubit_levels}, coupler {solver.coupler_levels}, "
              f"composite {solver.composite_levels}")
        print(f"   Convergence: {solver.convergence_tolerance_ghz} GHz "
              f"({'checked' if solver.check_convergence else 'not checked'} on every build)")
        print(f"   Finite differences: {solver.fd_step_first} / {solver.fd_step_second} Φ₀")

        noise = config.noise
        print("\n📉 Noise defaults (used where a run config omits them):")
        print(f"   A = {noise.coupler_amplitude} Φ₀/√Hz, γ = {noise.noise_exponent}")
        print(f"   ω_low·t = {noise.omega_low * noise.t_evol:.3e}, T1 background {noise.t1_background} s")

        print(f"\n⚡ Threads: {config.performance.threads}")
        print(f"📝 Logging: {config.logging.level} ({config.logging.format})")

        print("\n🔌 Devices:")
        device_dir = Path(config.storage.config_dir)
        devices = sorted(device_dir.glob("*.json"))
        if not devices:
            print(f"   ❌ No device files in {device_dir}")
            return False
        for path in devices:
            params = load_device(path)
            print(f"   ✅ {path.stem} ({params.parameter_set.value}): β_C = {params.beta():.4f}, M = {params.m_shared} pH")

        if run_config_path:
            run = load_run_config(run_config_path, config)
            load_device(config.storage.resolve_device(run.device))
            print(f"\n📋 Run config {run_config_path}: device {run.device}, digest {run.digest()}")

        print("\n✅ Configuration validation completed successfully!")
        return True

    except FluxCouplerError as e:
        print(f"❌ Configuration validation failed: {e}")
        return False


def export_configuration(output_file: str = None) -> bool:
    """Export the resolved settings to JSON."""
    config_dict = get_config().to_dict()
    if output_file:
        with open(output_file, 'w') as f:
            json.dump(config_dict, f, indent=2)
        print(f"✅ Configuration exported to {output_file}")
    else:
        print(json.dumps(config_dict, indent=2))
    return True


def main():
    parser = argparse.ArgumentParser(description="FluxCoupler Configuration Validation")
    parser.add_argument("--export", "-e", help="Export settings to a JSON file")
    parser.add_argument("--run-config", "-r", help="Also validate this run config")

    args = parser.parse_args()
    success = validate_configuration(args.run_config)
    if args.export:
        export_configuration(args.export)
    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
