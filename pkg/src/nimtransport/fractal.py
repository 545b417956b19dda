"""Sierpinski tetrahedron and triangle point sets, with CSV/PLY/PGM writers."""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

from . import kernels

WHAT = ("tetrahedron_min", "tetrahedron_max", "triangle")
FORMATS = ("csv", "ply", "pgm")


def fractal_points(n: int, what: str) -> Iterator[tuple[int, int, int]]:
    """Integer points (mantissas at level n) of the requested set.

    The triangle is the carry-free part of the tetrahedron: pairs with
    i + j == i ^ j, carried with z = i + j.
    """
    side = 1 << n
    top = side - 1
    if what == "tetrahedron_min":
        for i in range(side):
            for j in range(side):
                yield i, j, i ^ j
    elif what == "tetrahedron_max":
        for i in range(side):
            for j in range(side):
                yield i, j, top - (i ^ j)
    elif what == "triangle":
        for i in range(side):
            for j in range(side):
                if i & j == 0:
                    yield i, j, i + j
    else:
        raise ValueError(f"what must be one of {WHAT}")


def triangle_count(n: int) -> int:
    return kernels.carry_free_count(n)


def occupancy(n: int, what: str) -> list[bytearray]:
    """2^n x 2^n binary image of a planar projection.

    Triangle: pixel (row j, col i).  Tetrahedra: every coordinate-plane
    projection is the full square, so the image shows (col (x+y)/2, row z)
    instead.
    """
    side = 1 << n
    img = [bytearray(side) for _ in range(side)]
    for i, j, k in fractal_points(n, what):
        if what == "triangle":
            img[j][i] = 1
        else:
            img[k][(i + j) >> 1] = 1
    return img


def export_fractal(n: int, what: str, fmt: str, out: str | Path) -> Path:
    """Write the level-n set to ``out``; returns the path written."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    if what not in WHAT:
        raise ValueError(f"what must be one of {WHAT}")
    path = Path(out)
    if fmt == "csv":
        lines = ["x,y,z"]
        lines += [f"{i}/2^{n},{j}/2^{n},{k}/2^{n}" for i, j, k in fractal_points(n, what)]
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "ply":
        pts = list(fractal_points(n, what))
        header = [
            "ply",
            "format ascii 1.0",
            f"comment {what} level {n}; divide coordinates by {1 << n}",
            f"element vertex {len(pts)}",
            "property int x",
            "property int y",
            "property int z",
            "end_header",
        ]
        body = [f"{i} {j} {k}" for i, j, k in pts]
        path.write_text("\n".join(header + body) + "\n")
    else:
        side = 1 << n
        img = occupancy(n, what)
        data = bytearray(f"P5\n{side} {side}\n255\n".encode("ascii"))
        for row in img:
            data.extend(0 if v else 255 for v in row)
        path.write_bytes(bytes(data))
    return path
