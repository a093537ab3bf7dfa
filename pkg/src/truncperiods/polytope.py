"""Lattice polytopes of dimension <= 3 with exact integer facet data."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

from .errors import InputError, NotOpenError

MAX_DIM = 3


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector in its direction."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    iv = [int(x * den) for x in v]
    g = 0
    for x in iv:
        g = gcd(g, x)
    if g == 0:
        return tuple(iv)
    return tuple(x // g for x in iv)


def nullspace(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Primitive integer vectors spanning {x in Q^n : row . x = 0 for all rows}."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(primitive(v))
    return basis


def rank(rows: Sequence[Sequence[int]], n: int) -> int:
    return n - len(nullspace(rows, n)) if rows else 0


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    return rank(diffs, len(base)) if diffs else 0


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many lattice points.

    ``facets`` are pairs (a, c) meaning <a, x> >= c with a primitive and lying in
    the direction space; ``equations`` pin down the affine hull when the
    polytope is not full-dimensional.  Interior always means relative interior.
    """

    ambient_dim: int
    dim: int
    vertices: tuple[tuple[int, ...], ...]
    facets: tuple[tuple[tuple[int, ...], int], ...]
    equations: tuple[tuple[tuple[int, ...], int], ...] = field(default=())

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> LatticePolytope:
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise InputError("empty support")
        n = len(pts[0])
        if n > MAX_DIM:
            raise InputError(f"dimension {n} exceeds {MAX_DIM}")
        base = pts[0]
        diffs = [tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]
        eq_normals = nullspace(diffs, n) if diffs else [
            tuple(int(i == j) for j in range(n)) for i in range(n)
        ]
        equations = tuple((a, _dot(a, base)) for a in eq_normals)
        d = n - len(eq_normals)
        if d == 0:
            return cls(n, 0, (base,), (), equations)

        facets = set()
        eq_rows = [list(a) for a in eq_normals]
        for subset in combinations(pts, d):
            sub_diffs = [tuple(a - b for a, b in zip(p, subset[0])) for p in subset[1:]]
            ns = nullspace(eq_rows + sub_diffs, n)
            if len(ns) != 1:
                continue
            for a in (ns[0], tuple(-x for x in ns[0])):
                vals = [_dot(a, p) for p in pts]
                c = min(vals)
                tight = [p for p, v in zip(pts, vals) if v == c]
                if _affine_rank(tight) == d - 1:
                    facets.add((a, c))
        facets = tuple(sorted(facets))

        verts = []
        for p in pts:
            normals = [list(a) for a, c in facets if _dot(a, p) == c]
            if rank(normals + eq_rows, n) == n:
                verts.append(p)
        return cls(n, d, tuple(verts), facets, equations)

    # -- membership ---------------------------------------------------------
    def contains(self, x: Sequence[int], strict: bool = False) -> bool:
        if any(_dot(a, x) != c for a, c in self.equations):
            return False
        if strict:
            return all(_dot(a, x) > c for a, c in self.facets)
        return all(_dot(a, x) >= c for a, c in self.facets)

    def contains_dilate(self, x: Sequence[int], k: int) -> bool:
        """Is x in k * self (k >= 0)?"""
        if any(_dot(a, x) != k * c for a, c in self.equations):
            return False
        return all(_dot(a, x) >= k * c for a, c in self.facets)

    def is_vertex(self, u: Sequence[int]) -> bool:
        return tuple(u) in self.vertices

    # -- lattice points -----------------------------------------------------
    def bounding_box(self):
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        return lo, hi

    def lattice_points(self) -> list[tuple[int, ...]]:
        lo, hi = self.bounding_box()
        ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
        return [x for x in product(*ranges) if self.contains(x)]

    def interior_lattice_points(self) -> list[tuple[int, ...]]:
        return [x for x in self.lattice_points() if self.contains(x, strict=True)]

    # -- faces --------------------------------------------------------------
    def faces(self) -> list[frozenset[int]]:
        """All nonempty faces as sets of vertex indices; the last one is the polytope."""
        tight = [
            frozenset(i for i, v in enumerate(self.vertices) if _dot(a, v) == c)
            for a, c in self.facets
        ]
        everything = frozenset(range(len(self.vertices)))
        found = set()
        for r in range(1, len(tight) + 1):
            for combo in combinations(tight, r):
                inter = frozenset.intersection(*combo)
                if inter and inter != everything:
                    found.add(inter)
        return sorted(found, key=lambda f: (len(f), sorted(f))) + [everything]

    def facets_containing(self, face: frozenset[int]) -> list[tuple[tuple[int, ...], int]]:
        verts = [self.vertices[i] for i in face]
        return [(a, c) for a, c in self.facets if all(_dot(a, v) == c for v in verts)]

    def face_contains(self, face: frozenset[int], x: Sequence[int]) -> bool:
        if not self.contains(x):
            return False
        return all(_dot(a, x) == c for a, c in self.facets_containing(face))

    def minkowski_sum(self, other: LatticePolytope) -> LatticePolytope:
        return LatticePolytope.from_points(
            tuple(a + b for a, b in zip(u, v)) for u in self.vertices for v in other.vertices
        )

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(a), "offset": c} for a, c in self.facets],
            "equations": [{"normal": list(a), "value": c} for a, c in self.equations],
        }


@dataclass(frozen=True)
class OpenSubset:
    """A subset of the polytope whose complement is a union of faces."""

    parent: LatticePolytope
    removed_faces: tuple[frozenset[int], ...]
    lattice_points: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.lattice_points)

    def index(self, u) -> int:
        return self.lattice_points.index(tuple(u))

    def to_json(self) -> dict:
        return {
            "removed_faces": [sorted(f) for f in self.removed_faces],
            "lattice_points": [list(u) for u in self.lattice_points],
        }


def open_subset(poly: LatticePolytope, spec="all") -> OpenSubset:
    """``spec`` is "all", "interior" or an iterable of faces given as vertex-index lists."""
    faces = poly.faces()
    if spec == "all":
        removed: list[frozenset[int]] = []
    elif spec == "interior":
        removed = faces[:-1]
    else:
        removed = []
        known = set(faces)
        for f in spec:
            f = frozenset(int(i) for i in f)
            if f not in known:
                raise NotOpenError(
                    f"not open: vertex set {sorted(f)} is not a face of the polytope"
                )
            removed.append(f)
    pts = tuple(
        x for x in poly.lattice_points()
        if not any(poly.face_contains(f, x) for f in removed)
    )
    return OpenSubset(poly, tuple(removed), pts)


def open_subset_from_points(poly: LatticePolytope, points: Iterable[Sequence[int]]) -> OpenSubset:
    """Smallest open subset whose lattice points are exactly ``points``, if one exists."""
    wanted = {tuple(p) for p in points}
    removed = [
        f for f in poly.faces()
        if not any(poly.face_contains(f, x) for x in wanted)
    ]
    mu = open_subset(poly, [sorted(f) for f in removed]) if removed else open_subset(poly, "all")
    if set(mu.lattice_points) != wanted:
        raise NotOpenError(
            f"not open: no open subset has lattice points exactly {sorted(wanted)}"
        )
    return mu


# short functional aliases
def pt_lattice_points(poly: LatticePolytope):
    return poly.lattice_points()


def pt_interior_lattice_points(poly: LatticePolytope):
    return poly.interior_lattice_points()


def pt_vertices(poly: LatticePolytope):
    return list(poly.vertices)


def pt_is_vertex(poly: LatticePolytope, u) -> bool:
    return poly.is_vertex(u)


pt_open_subset = open_subset
