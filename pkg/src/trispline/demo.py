"""Analytic test fields and small reference meshes for demos and tests."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .mesh import Mesh, VertexGradientData

__all__ = ["DemoField", "FIELDS", "square_mesh", "fan_mesh", "grid_mesh", "make_mesh",
           "demo_data"]


@dataclass(frozen=True)
class DemoField:
    name: str
    value: Callable[[float, float], float]
    gradient: Callable[[float, float], tuple[float, float]]


FIELDS = {
    "constant": DemoField("constant", lambda x, y: 1.5, lambda x, y: (0.0, 0.0)),
    "linear": DemoField("linear", lambda x, y: 2.0 * x - 3.0 * y + 0.5,
                        lambda x, y: (2.0, -3.0)),
    "quadratic": DemoField("quadratic", lambda x, y: x * x + x * y,
                           lambda x, y: (2.0 * x + y, x)),
    "trig": DemoField("trig", lambda x, y: math.sin(x) * math.cos(y),
                      lambda x, y: (math.cos(x) * math.cos(y), -math.sin(x) * math.sin(y))),
}


def square_mesh() -> Mesh:
    """Unit square split along the (1,0)-(0,1) diagonal; triangle 0 is the unit right triangle."""
    return Mesh([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], [(0, 1, 3), (1, 2, 3)])


def fan_mesh(n: int = 6, radius: float = 0.5) -> Mesh:
    """Closed fan of ``n`` triangles around a centre vertex."""
    rim = [(radius * math.cos(2 * math.pi * k / n), radius * math.sin(2 * math.pi * k / n))
           for k in range(n)]
    tris = [(0, 1 + k, 1 + (k + 1) % n) for k in range(n)]
    return Mesh([(0.0, 0.0), *rim], tris)


def grid_mesh(n: int) -> Mesh:
    """``n`` by ``n`` squares on the unit square, each cut into two triangles."""
    if n < 1:
        raise ValueError("grid needs at least one cell per side")
    verts = [(i / n, j / n) for j in range(n + 1) for i in range(n + 1)]
    tris = []
    for j in range(n):
        for i in range(n):
            v = j * (n + 1) + i
            tris.append((v, v + 1, v + n + 2))
            tris.append((v, v + n + 2, v + n + 1))
    return Mesh(verts, tris)


def make_mesh(kind: str, n: int | None = None) -> Mesh:
    if kind == "square":
        return square_mesh()
    if kind == "fan":
        return fan_mesh() if n is None else fan_mesh(n)
    if kind == "grid":
        return grid_mesh(4 if n is None else n)
    raise KeyError(f"unknown mesh {kind!r}")


def demo_data(mesh: Mesh, field_name: str) -> VertexGradientData:
    f = FIELDS[field_name]
    return VertexGradientData.from_field(mesh, f.value, f.gradient)
