"""Regenerate ``src/dechyp/data/tri444_orbit.json``.

The (4,4,4) sphere at equal weights is lifted: one triangle ``T`` of the
two-triangle Delaunay tessellation and its neighbour across one edge are the
faces; rotations by pi/2 about the three vertices of ``T`` generate the
orientation-preserving (4,4,4) triangle group; the vertex cycles of ``T`` are
the seeds.
"""

import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from dechyp.dectri import lift_triangle
from dechyp.flipper import layout_quad
from dechyp.hull import OrbitSpec, dump_orbit, orbit_generate, rotation_about
from dechyp.minkcore import mnorm2
from dechyp.surface import parse_surface

WEIGHT = 1.2
DEPTH = 4


def build():
    S = parse_surface((resources.files("dechyp") / "data" / "tri444.json").read_text())
    omega = np.full(S.n_vertices, WEIGHT)
    lift = lift_triangle(S.triangle(0, omega))
    quad = layout_quad(S, 0, omega)
    C_p, C_a, C_b, C_q = quad.C
    assert np.allclose([C_p, C_a, C_b], lift.C)
    gens = []
    for C in lift.C:
        center = C / math.sqrt(-mnorm2(C))
        gens.append(rotation_about(center, math.pi / 2))
    faces = [lift.C, np.array([C_q, C_b, C_a])]
    spec = OrbitSpec(gens, list(lift.C), DEPTH, faces)
    orbit = orbit_generate(spec.generators, spec.seeds, 2)
    gap = np.min(np.linalg.norm(orbit.vectors - C_q, axis=1))
    assert gap < 1e-9, f"neighbouring vertex not in the orbit (gap {gap})"
    return spec


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).parents[1] / "src/dechyp/data/tri444_orbit.json"
    out.write_text(dump_orbit(build()) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main(sys.argv)
