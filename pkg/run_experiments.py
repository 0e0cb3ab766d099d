#!/usr/bin/env python3
"""
Convenience script to run all acceptance experiments.
Run from the project root directory.
"""

import json
import subprocess
import sys
import os

EXPERIMENTS = [
    ('experiments.kronecker_crosscheck', 'Direct lattice sums against the Kronecker limit formula'),
    ('experiments.tail_law', 'Shell-sum tail decay of the twisted lattice zeta function'),
    ('experiments.cusp_integral_grid', 'Cusp integral: series against quadrature on a 12-point grid'),
    ('experiments.cusp_identity', 'Exact cusp identity for d=1 and d=3, trivial and nontrivial characters'),
    ('experiments.zeta_consistency', 'Selberg zeta log-derivative: series against numerical derivative'),
    ('experiments.divisor_tables', 'Residue tables and minimal root orders'),
    ('experiments.eisenstein_eigencheck', 'Eisenstein series Laplace eigenfunction check'),
    ('experiments.transform_pairs', 'Test-function transform pairs'),
    ('experiments.geometry_invariants', 'Isometry invariance and element classification'),
    ('experiments.cli_determinism', 'Byte-identical CLI report bodies'),
]

def run_experiment(module_name, description):
    """Run an experiment module; passing means exit 0 and "passed": true in its result file."""
    print(f"\n{'='*60}")
    print(f"Running: {description}")
    print(f"Module: {module_name}")
    print('='*60)

    try:
        result = subprocess.run([sys.executable, '-m', module_name],
                              capture_output=True, text=True, check=True)
        print(result.stdout)
        if result.stderr:
            print("STDERR:")
            print(result.stderr)
    except subprocess.CalledProcessError as e:
        print(e.stdout)
        print("STDERR:")
        print(e.stderr)
        print("[FAILED]")
        return False
    path = os.path.join('results', module_name.split('.')[-1] + '.json')
    try:
        with open(path) as f: passed = bool(json.load(f).get('passed'))
    except (OSError, ValueError):
        passed = False
    print("[SUCCESS]" if passed else "[FAILED] criterion not met")
    return passed

def main():
    print("Kleinian spectral toolkit - Running All Experiments")
    print("=" * 60)

    if not os.path.exists('core') or not os.path.exists('experiments'):
        print("[ERROR] Please run this script from the project root directory")
        print("   Expected structure: core/, lattice/, groups/, spectral/, experiments/")
        sys.exit(1)

    os.makedirs('results', exist_ok=True)

    results = [(module, run_experiment(module, description)) for module, description in EXPERIMENTS]

    print(f"\n{'='*60}")
    print("EXPERIMENT SUMMARY")
    print('='*60)
    for module, success in results:
        status = "[PASSED]" if success else "[FAILED]"
        print(f"{module:40} {status}")

    passed = sum(1 for _, success in results if success)
    print(f"\nOverall: {passed}/{len(results)} experiments passed")
    if passed == len(results):
        print("[SUCCESS] All experiments completed successfully!")
        print("Run 'python -m scripts.aggregate' for the CSV tables.")
    else:
        print("[WARNING] Some experiments failed. Check the output above for details.")
        sys.exit(1)

if __name__ == '__main__':
    main()
