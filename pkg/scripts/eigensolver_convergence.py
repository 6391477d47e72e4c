#!/usr/bin/env python3
"""Grid-refinement study for the stationary-wave eigensolver.

Shows the O(h^2) error decay of the lowest oscillator levels.
"""

from cpdq_lab import Grid1D, Potential, natural_units, solve_tise


def main():
    consts = natural_units()
    print(f"{'n_grid':>7s} {'h':>10s} {'E0 err':>12s} {'E3 err':>12s}")
    prev = None
    for n in (250, 500, 1000, 2000, 4000):
        grid = Grid1D(-10.0, 10.0, n)
        sol = solve_tise(Potential.harmonic(), grid, 4, consts)
        e0 = abs(sol.energies[0] - 0.5)
        e3 = abs(sol.energies[3] - 3.5)
        note = f"  ratio {prev / e0:4.2f}" if prev else ""
        print(f"{n:7d} {grid.h:10.2e} {e0:12.4e} {e3:12.4e}{note}")
        prev = e0


if __name__ == "__main__":
    main()
