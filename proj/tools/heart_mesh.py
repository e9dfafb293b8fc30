#!/usr/bin/env python3
"""Triangulate the heart-shaped domain H1 u H2 u H3 and write a plap mesh file.

H1 = {(x-1)^2 + y^2/4 < 1, y >= 0}, H2 = {(x+1)^2 + y^2/4 < 1, y >= 0},
H3 = {x^2/4 + y^2/16 < 1, y <= 0}.

The boundary is sampled at arc-length spacing h, the interior is filled with
a triangular lattice of spacing h, and the Delaunay triangulation is clipped
to the boundary polygon. The two upper arcs meet at a cusp at the origin.
"""

import argparse
import sys

import numpy as np
from scipy.spatial import Delaunay
from shapely.geometry import Point, Polygon
from shapely.prepared import prep


def sample_curve(f, t0, t1, h, dense=20000):
    """Points of the parametric curve f on [t0, t1) at arc-length spacing ~h."""
    t = np.linspace(t0, t1, dense)
    xy = np.array([f(s) for s in t])
    seg = np.hypot(*np.diff(xy, axis=0).T)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    n = max(1, int(np.ceil(s[-1] / h)))
    targets = np.linspace(0.0, s[-1], n + 1)[:-1]
    ts = np.interp(targets, s, t)
    return np.array([f(v) for v in ts])


def boundary(h):
    # Counter-clockwise: lower half of H3 from (-2, 0) to (2, 0), then the
    # right upper arc to the cusp, then the left upper arc back to (-2, 0).
    lower = sample_curve(lambda t: (2.0 * np.cos(t), 4.0 * np.sin(t)), np.pi, 2.0 * np.pi, h)
    right = sample_curve(lambda t: (1.0 + np.cos(t), 2.0 * np.sin(t)), 0.0, np.pi, h)
    left = sample_curve(lambda t: (-1.0 + np.cos(t), 2.0 * np.sin(t)), 0.0, np.pi, h)
    pts = np.vstack([lower, right, left])
    pts[np.abs(pts) < 1e-14] = 0.0
    return pts


def lattice(poly, h):
    minx, miny, maxx, maxy = poly.bounds
    dy = h * np.sqrt(3.0) / 2.0
    inner = prep(poly.buffer(-0.6 * h))
    pts = []
    for j, y in enumerate(np.arange(miny, maxy + dy, dy)):
        shift = 0.5 * h if j % 2 else 0.0
        for x in np.arange(minx + shift, maxx + h, h):
            if inner.contains(Point(x, y)):
                pts.append((x, y))
    return np.array(pts)


def triangulate(h):
    ring = boundary(h)
    poly = Polygon(ring)
    if not poly.is_valid:
        raise RuntimeError("boundary polygon is not simple")
    nodes = np.vstack([ring, lattice(poly, h)])
    tri = Delaunay(nodes)
    region = prep(poly.buffer(1e-9 * h))
    keep = []
    for t in tri.simplices:
        a, b, c = nodes[t]
        probes = [(a + b + c) / 3.0, (a + b) / 2.0, (b + c) / 2.0, (c + a) / 2.0]
        if all(region.contains(Point(*q)) for q in probes):
            keep.append(t)
    elems = np.array(keep)

    # Every polygon edge must survive as a mesh edge; otherwise the clipped
    # triangulation does not match the boundary.
    edges = set()
    for t in elems:
        for i in range(3):
            edges.add(frozenset((t[i], t[(i + 1) % 3])))
    n_ring = len(ring)
    missing = [i for i in range(n_ring) if frozenset((i, (i + 1) % n_ring)) not in edges]
    if missing:
        raise RuntimeError(f"{len(missing)} boundary segments not recovered")

    used = np.unique(elems)
    remap = -np.ones(len(nodes), dtype=int)
    remap[used] = np.arange(len(used))
    return nodes[used], remap[elems], poly.area


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=1.0 / 16.0, help="target edge length")
    ap.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    args = ap.parse_args()

    nodes, elems, area = triangulate(args.h)
    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8")
    with out:
        out.write(f"# heart domain, h = {args.h:.17g}, polygon area {area:.17g}\n")
        out.write(f"NODES {len(nodes)}\n")
        for x, y in nodes:
            out.write(f"{x:.17g} {y:.17g}\n")
        out.write(f"ELEMENTS {len(elems)}\n")
        for i, j, k in elems:
            out.write(f"{i} {j} {k}\n")
    print(f"{len(nodes)} nodes, {len(elems)} triangles, polygon area {area:.6f}", file=sys.stderr)


if __name__ == "__main__":
    main()
