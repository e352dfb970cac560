import sys

# Force stable, line-buffered stdout/stderr
if hasattr(sys.stdout, "reconfigure"):
    sys.stdout.reconfigure(line_buffering=True)
if hasattr(sys.stderr, "reconfigure"):
    sys.stderr.reconfigure(line_buffering=True)

import argparse
from src.runner import run_app

ROUTES = ["periodized", "spectral", "closed-form", "quadrature", "bessel"]

def _add_common(parser):
    parser.add_argument("--out", type=str, help="Output data file (the manifest goes to <out>.manifest.json).")
    parser.add_argument("--config", type=str, help="Flat key=value parameter file; flags override its values.")
    parser.add_argument("--verbose", type=int, help="Verbosity level: 0=Quiet (Default), 1=Standard, 2=Debug.")
    parser.add_argument("--logs-directory", type=str, help="Directory for failure logs (default: logs).")
    parser.add_argument("--workers", type=int, help="Processes for independent element evaluations (default: 1).")

def _add_lattice(parser):
    parser.add_argument("--alpha", type=float, help="Fractional order alpha > 0.")
    parser.add_argument("--n", type=int, help="Lattice dimension (default: 1).")
    parser.add_argument("--N", dest="N", type=str, help="Sites per axis, comma-separated or one value for all; 'inf' for an infinite lattice.")
    parser.add_argument("--omega-sq", type=float, help="Omega^2 (default: 1).")
    parser.add_argument("--mass", type=float, help="Mass mu (default: 1).")

def main():
    parser = argparse.ArgumentParser(description="Fractional Laplacian matrices, dispersion, kernels and dynamics on lattices.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    matrix = subparsers.add_parser("matrix", help="First (block) row of the fractional Laplacian matrix (JSON).")
    _add_common(matrix)
    _add_lattice(matrix)
    matrix.add_argument("--route", choices=ROUTES, help="Element route (default depends on N and n).")
    matrix.add_argument("--convention", choices=["laplacian", "characteristic"], help="Sign convention (default: laplacian).")
    matrix.add_argument("--cross-check", choices=ROUTES, help="Second route to compare against; fails with exit 3 beyond --tolerance.")
    matrix.add_argument("--radius", type=int, help="Infinite lattices: block row on [0, radius]^n (default: 8).")
    matrix.add_argument("--epsilon", type=float, help="Bessel route: lower integration cut (default: 1e-3).")
    matrix.add_argument("--cutoff", type=float, help="Bessel route: upper integration cut (default: 1e3).")
    matrix.add_argument("--tolerance", type=float, help="Cross-check tolerance (default: 1e-9).")

    dispersion = subparsers.add_parser("dispersion", help="Normalized dispersion of the 2D lattice (grid JSON or section CSV).")
    _add_common(dispersion)
    dispersion.add_argument("--alpha", type=str, help="Comma-separated fractional orders.")
    dispersion.add_argument("--n", type=int, help="Lattice dimension (only 2 is supported).")
    dispersion.add_argument("--section", choices=["grid", "010", "110"], help="Full grid or a cross-section direction (default: 110).")
    dispersion.add_argument("--points", type=int, help="Samples per axis (default: 65).")

    kernel = subparsers.add_parser("kernel", help="Continuum kernel samples (CSV).")
    _add_common(kernel)
    kernel.add_argument("--alpha", type=float, help="Fractional order, alpha/2 not an integer.")
    kernel.add_argument("--period", type=str, help="Period L, or 'inf' for the infinite line.")
    kernel.add_argument("--route", choices=["direct", "zeta", "infinite"], help="Kernel route (default: zeta).")
    kernel.add_argument("--x", type=str, help="Comma-separated abscissae (default: an even grid).")
    kernel.add_argument("--points", type=int, help="Grid size when --x is omitted (default: 33).")
    kernel.add_argument("--terms", type=int, help="Direct route: image terms per side (default: 100000).")
    kernel.add_argument("--a-const", type=float, help="Elastic scaling constant A (default: 1).")
    kernel.add_argument("--rho0", type=float, help="Mass density rho0 (default: 1).")

    limit = subparsers.add_parser("limit", help="Convergence of lattice elements to the continuum kernel (CSV).")
    _add_common(limit)
    limit.add_argument("--alpha", type=float, help="Fractional order, 0 < alpha < 2.")
    limit.add_argument("--x", type=float, help="Continuum position x != 0 (default: 1).")
    limit.add_argument("--h", type=str, help="Comma-separated, strictly decreasing spacings.")
    limit.add_argument("--mode", choices=["infinite", "periodic"], help="Infinite line or periodic string (default: infinite).")
    limit.add_argument("--period", type=str, help="Period L for the periodic mode.")
    limit.add_argument("--a-const", type=float, help="Elastic scaling constant A (default: 1).")
    limit.add_argument("--rho0", type=float, help="Mass density rho0 (default: 1).")

    evolve = subparsers.add_parser("evolve", help="Exact fractional diffusion on a finite lattice (CSV).")
    _add_common(evolve)
    _add_lattice(evolve)
    evolve.add_argument("--t", type=str, help="Comma-separated times >= 0 (default: 0,1,10,100).")
    evolve.add_argument("--diffusivity", type=float, help="Diffusion constant c (default: 1).")
    evolve.add_argument("--initial", choices=["delta", "bloch", "file"], help="Initial state (default: delta).")
    evolve.add_argument("--mode-index", type=int, help="Bloch mode index along the first axis (default: 1).")
    evolve.add_argument("--input", type=str, help="CSV with the initial field in its last column (--initial file).")

    args = parser.parse_args()

    # Pass args as keyword arguments to run_app
    sys.exit(run_app(**vars(args)))

if __name__ == "__main__":
    main()
