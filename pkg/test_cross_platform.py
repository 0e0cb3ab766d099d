#!/usr/bin/env python3
"""
Environment smoke check for the Kleinian spectral toolkit.
Checks dependencies, layout, imports and one small computation per package.
Not a pytest module: run it directly with python test_cross_platform.py.
"""

import os
import sys
import json
import math
import platform

def print_header(title):
    print(f"\n{'='*60}")
    print(f" {title}")
    print('='*60)

def print_status(test_name, success, details=""):
    status = "[PASS]" if success else "[FAIL]"
    print(f"{test_name:36} {status}")
    if details:
        print(f"{'':38} {details}")
    return success

def test_python_environment():
    print_header("Python Environment Test")
    version = sys.version_info
    ok = print_status("Python Version", version >= (3, 10), f"Found: {version.major}.{version.minor}.{version.micro}, Required: 3.10+")
    for package in ['numpy', 'scipy', 'numba', 'pandas', 'sympy', 'pytest']:
        try:
            __import__(package)
            ok &= print_status(f"Package: {package}", True)
        except ImportError:
            ok &= print_status(f"Package: {package}", False, "Not installed")
    return ok

def test_file_structure():
    print_header("File Structure Test")
    ok = True
    for dir_name in ['core', 'lattice', 'groups', 'spectral', 'signals', 'cli', 'experiments', 'scripts', 'tests']:
        ok &= print_status(f"Directory: {dir_name}", os.path.isdir(dir_name))
    for file_name in ['requirements.txt', 'README.md', 'DESIGN.md', 'run_experiments.py',
                      'run_full_pipeline.sh', 'run_metrics.sh', 'setup.sh']:
        ok &= print_status(f"File: {file_name}", os.path.exists(file_name))
    return ok

def test_imports():
    print_header("Module Import Test")
    modules_to_test = [
        ('core.geometry', 'classify'),
        ('core.specfun', 'resolvent_pair'),
        ('lattice.sums', 'L_direct'),
        ('lattice.kronecker', 'L_kronecker'),
        ('groups.bianchi', 'cuspidal_elliptic_classes'),
        ('groups.repchar', 'decompose_restriction'),
        ('spectral.eisenstein', 'EisensteinSampler'),
        ('spectral.zeta', 'residue_table'),
        ('spectral.trace', 'geometric_side'),
        ('cli.main', 'run'),
    ]
    ok = True
    for module_name, name in modules_to_test:
        try:
            module = __import__(module_name, fromlist=[name])
            ok &= print_status(f"Import: {module_name}", hasattr(module, name), f"{name}")
        except ImportError as e:
            ok &= print_status(f"Import: {module_name}", False, str(e))
    return ok

def test_quick_computation():
    print_header("Quick Computation Test")
    try:
        from groups.bianchi import BianchiGroup, cuspidal_elliptic_classes, verify_cusp_identity
        from groups.repchar import UnitaryRepSpec, decompose_restriction
        from spectral.zeta import cusp_integral_series, cusp_integral_quadrature

        G = BianchiGroup(1)
        residual = verify_cusp_identity(G, decompose_restriction(UnitaryRepSpec.trivial(), G), cuspidal_elliptic_classes(G, 3))
        ok = print_status("Cusp identity (d=1, H=3)", residual == 0, f"residual {residual}")
        diff = abs(cusp_integral_series(2.0, math.pi / 2) - cusp_integral_quadrature(2.0, math.pi / 2))
        ok &= print_status("Cusp integral s=2, t=pi/2", diff < 1e-8, f"difference {diff:.2e}")
        return ok
    except Exception as e:
        return print_status("Quick Computation", False, str(e))

def generate_report(results):
    print_header("Compatibility Report")
    report = {
        "system_info": {
            "platform": platform.platform(),
            "system": platform.system(),
            "python_version": sys.version,
            "architecture": platform.architecture(),
        },
        "checks": results,
    }
    with open("results/compatibility_report.json", "w") as f:
        json.dump(report, f, indent=2)
    print_status("Report Generated", True, "results/compatibility_report.json")

def main():
    print("Kleinian spectral toolkit - Environment Check")
    print("=" * 60)
    os.makedirs("results", exist_ok=True)
    results = {
        "environment": test_python_environment(),
        "file_structure": test_file_structure(),
        "imports": test_imports(),
        "quick_computation": test_quick_computation(),
    }
    generate_report(results)
    print_header("Check Complete")
    sys.exit(0 if all(results.values()) else 1)

if __name__ == "__main__":
    main()
