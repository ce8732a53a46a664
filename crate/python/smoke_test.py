#!/usr/bin/env python3
"""Smoke test for the `allee_py` extension module.

Builds the cdylib if needed, imports it straight from the cargo target
directory, and exercises the main entry points against known values.

Run from anywhere:  python3 python/smoke_test.py
"""

import math
import os
import subprocess
import sys

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load_module():
    target = os.path.join(REPO, "target", "debug")
    built = os.path.join(target, "liballee_py.so")
    if not os.path.exists(built):
        print("building allee-py ...")
        subprocess.run(
            ["cargo", "build", "-p", "allee-py"], cwd=REPO, check=True
        )
    # Python wants the module file to be named exactly `allee_py.so`.
    linked = os.path.join(target, "allee_py.so")
    if not os.path.exists(linked):
        os.symlink("liballee_py.so", linked)
    sys.path.insert(0, target)
    import allee_py

    return allee_py


def approx(a, b, tol=1e-9):
    assert abs(a - b) < tol, f"{a} != {b} (tol {tol})"


def main():
    ap = load_module()

    # Parameter validation raises ValueError.
    try:
        ap.Params(1.5, -0.1, 0.363, 0.2)
    except ValueError as e:
        assert "A must lie in (0, 1)" in str(e)
    else:
        raise AssertionError("Params(1.5, ...) should have raised ValueError")

    # Saddle-node thresholds at (A, M) = (0.1, -0.1): closed forms
    # Q = (73 -/+ sqrt(5))/200 at u = (5 -/+ sqrt(5))/20.
    thresholds = ap.saddle_node_thresholds(0.1, -0.1)
    assert [t[2] for t in thresholds] == ["lower", "upper"], thresholds
    approx(thresholds[0][0], (73 - math.sqrt(5)) / 200, 1e-12)
    approx(thresholds[1][0], (73 + math.sqrt(5)) / 200, 1e-12)
    approx(thresholds[0][1], (5 - math.sqrt(5)) / 20, 1e-9)
    approx(thresholds[1][1], (5 + math.sqrt(5)) / 20, 1e-9)

    # Hopf rate function peaks at u = 19/60 with value 361/1200.
    p = ap.Params(0.1, -0.1, 0.363, 0.2)
    u_star, s_max = ap.hopf_maximum(p)
    approx(u_star, 19 / 60, 1e-7)
    approx(s_max, 361 / 1200, 1e-10)

    # Three-equilibria configuration: attractor / saddle / repeller.
    interior = ap.interior_equilibria(p)
    assert [e.kind for e in interior] == ["attractor", "saddle", "repeller"], [
        e.kind for e in interior
    ]
    every = ap.all_equilibria(p)
    assert [e.kind for e in every[:2]] == ["non-hyperbolic-saddle", "saddle"]
    # Interior equilibria sit on the diagonal v = u and annihilate the field.
    for e in interior:
        approx(e.v, e.u, 1e-12)
        du, dv = ap.vector_field(p, e.u, e.v)
        assert max(abs(du), abs(dv)) < 1e-12, (du, dv)
        assert len(e.eigenvalues) == 2 and isinstance(e.eigenvalues[0], complex)

    # Jacobian determinant matches the classification record.
    jac = ap.jacobian(p, interior[1].u, interior[1].v)
    det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0]
    approx(det, interior[1].det, 1e-12)
    assert det < 0, "middle equilibrium should be a saddle"

    # Bogdanov-Takens points on the two fold branches.
    bt = ap.bt_points(0.1, -0.1)
    assert [b[3] for b in bt] == ["lower", "upper"]
    approx(bt[0][1], 0.20527864045000419, 1e-12)
    approx(bt[1][1], 0.29472135954999584, 1e-12)

    # Hopf locus samples stay inside the admissible strip.
    curve = ap.hopf_curve(0.1, -0.1, 200)
    assert len(curve) > 50
    assert all(s > 0 and 0 < u < 1 for (_, s, u) in curve)

    # An orbit launched inside the trapping region stays in it.
    samples = ap.integrate(p, 0.9, 0.3, 50.0)
    assert len(samples) > 10
    assert all(0 <= u <= 1.01 and 0 <= v <= 1.01 for (u, v) in samples)

    # Single stable limit cycle around the lone repelling focus.
    pc = ap.Params(0.5, -0.05, 0.51, 0.045)
    focus = ap.interior_equilibria(pc)[0]
    assert focus.kind == "repeller"
    cycles = ap.limit_cycles(pc, focus.u, focus.v)
    assert len(cycles) == 1 and cycles[0].stability == "stable", cycles
    approx(cycles[0].period, 134.485, 1e-2)
    assert cycles[0].residual < 1e-7
    assert len(cycles[0].polyline) > 100

    # Coarse basin map: every cell resolves to one of the attractors.
    pb = ap.Params(0.1, -0.1, 0.363, 0.18)
    grid = ap.basins(pb, resolution=8)
    assert grid.resolution == 8 and len(grid.cells) == 64
    assert len(grid.attractors) >= 1
    assert grid.undecided_fraction <= 0.05, grid.undecided_fraction
    assert all(c >= 0 or c == -1 for c in grid.cells)
    u0, v0 = grid.cell_center(0, 0)
    approx(u0, 1 / 16, 1e-12)
    approx(v0, 1 / 16, 1e-12)

    print("smoke test passed")


if __name__ == "__main__":
    main()
