"""Exact rational convex geometry: double-description vertex enumeration,
convex hulls, cone slices, lattice points, unimodular equivalence.

All computations are over the rationals; no floating point.  Polytopes may
be lower-dimensional: the affine hull is carried explicitly as a list of
equations and never silently dropped.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import BadParams, EmptyInput, Unbounded
from .linalg import Mat, clear_denominators, vdot, vec


def _extreme_rays(rows, dim):
    """Extreme rays of the pointed cone {x : r . x >= 0 for r in rows}.

    rows must have rank == dim (pointedness).  Returns primitive integer
    rays.  Classical double description with the combinatorial adjacency
    test.
    """
    A = [vec(r) for r in rows]
    m = Mat(A)
    if m.rank() != dim:
        raise BadParams("cone is not pointed")
    # initial simplicial subcone from dim independent rows
    idx = []
    cur = []
    for i, r in enumerate(A):
        trial = Mat(cur + [r])
        if trial.rank() == len(cur) + 1:
            idx.append(i)
            cur.append(r)
            if len(cur) == dim:
                break
    base = Mat(cur)
    inv = base.inverse()
    rays = [clear_denominators(inv.col(j)) for j in range(dim)]
    processed = list(idx)
    tight = []
    for r in rays:
        tight.append(frozenset(i for i in processed if vdot(A[i], r) == 0))

    rest = [i for i in range(len(A)) if i not in idx]
    for i in rest:
        a = A[i]
        vals = [vdot(a, r) for r in rays]
        plus = [j for j, v in enumerate(vals) if v > 0]
        zero = [j for j, v in enumerate(vals) if v == 0]
        minus = [j for j, v in enumerate(vals) if v < 0]
        if not minus:
            processed.append(i)
            tight = [t | {i} if j in zero else t for j, t in enumerate(tight)]
            continue
        new_rays = []
        new_tight = []
        for jp in plus:
            for jm in minus:
                common = tight[jp] & tight[jm]
                adjacent = True
                for jo in range(len(rays)):
                    if jo in (jp, jm):
                        continue
                    if common <= tight[jo]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = clear_denominators(
                    tuple(vals[jp] * x - vals[jm] * y
                          for x, y in zip(rays[jm], rays[jp])))
                new_rays.append(r)
                new_tight.append(common | {i})
        keep = plus + zero
        rays = [rays[j] for j in keep] + new_rays
        tight = ([tight[j] | ({i} if j in zero else set()) for j in keep]
                 + new_tight)
        processed.append(i)
        seen = {}
        for r, t in zip(rays, tight):
            if r not in seen:
                seen[r] = t
        rays = list(seen)
        tight = [seen[r] for r in rays]
    return rays


class AffineSubspace:
    """Affine subspace cut out by exact equalities <normal, x> = value."""

    def __init__(self, equalities, dim):
        self.equalities = [(vec(n), Fraction(v)) for n, v in equalities]
        self.dim = dim

    def contains(self, x):
        return all(vdot(n, x) == v for n, v in self.equalities)


class Polytope:
    """Bounded rational polytope with V- and H-representations."""

    def __init__(self, vertices, facets, equations, dim):
        self.vertices = tuple(sorted(tuple(Fraction(x) for x in v) for v in vertices))
        self.facets = [(vec(n), Fraction(b)) for n, b in facets]
        self.equations = [(vec(n), Fraction(b)) for n, b in equations]
        self.dim = dim

    def is_empty(self):
        return not self.vertices

    def contains(self, x):
        x = vec(x)
        return (all(vdot(n, x) == b for n, b in self.equations)
                and all(vdot(n, x) >= b for n, b in self.facets))

    def affine_dim(self):
        if not self.vertices:
            return -1
        v0 = self.vertices[0]
        dirs = [tuple(a - b for a, b in zip(v, v0)) for v in self.vertices[1:]]
        if not dirs:
            return 0
        return Mat(dirs).rank()

    def translate(self, shift):
        shift = vec(shift)
        return Polytope(
            [tuple(a + b for a, b in zip(v, shift)) for v in self.vertices],
            [(n, b + vdot(n, shift)) for n, b in self.facets],
            [(n, b + vdot(n, shift)) for n, b in self.equations],
            self.dim)

    def scale(self, c):
        c = Fraction(c)
        if c <= 0:
            raise BadParams("scale factor must be positive")
        return Polytope(
            [tuple(c * x for x in v) for v in self.vertices],
            [(n, c * b) for n, b in self.facets],
            [(n, c * b) for n, b in self.equations],
            self.dim)

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def to_json(self):
        return {
            "vertices": [[str(x) for x in v] for v in self.vertices],
            "facets": [{"normal": [str(x) for x in n], "offset": str(b)}
                       for n, b in self.facets],
            "equations": [{"normal": [str(x) for x in n], "value": str(b)}
                          for n, b in self.equations],
        }

    def __repr__(self):
        return "Polytope(%d vertices, dim %d)" % (len(self.vertices), self.dim)


def _affine_basis(points):
    """(x0, W) with W rows spanning the direction space of the points."""
    x0 = points[0]
    dirs = [tuple(a - b for a, b in zip(p, x0)) for p in points[1:]]
    basis = []
    for d in dirs:
        if Mat(basis + [d]).rank() == len(basis) + 1:
            basis.append(d)
    return x0, basis


def convex_hull(points):
    """Exact convex hull: irredundant vertices plus facet inequalities and
    affine-hull equations."""
    pts = [vec(p) for p in points]
    if not pts:
        raise EmptyInput("hull of empty point set")
    dim = len(pts[0])
    pts = sorted(set(pts))
    x0, basis = _affine_basis(pts)
    d = len(basis)

    # affine hull equations: kernel of the direction space
    if d < dim:
        eq_basis = Mat(basis).kernel() if basis else [
            tuple(r) for r in Mat.identity(dim).rows]
        equations = [(h, vdot(h, x0)) for h in eq_basis]
    else:
        equations = []

    if d == 0:
        return Polytope([x0], [], equations, dim)

    W = Mat(basis)
    WT = W.transpose()
    coords = []
    for p in pts:
        t = WT.solve(tuple(a - b for a, b in zip(p, x0)))
        coords.append(t)
    centroid = tuple(sum(c[i] for c in coords) / Fraction(len(coords))
                     for i in range(d))
    shifted = [tuple(a - b for a, b in zip(c, centroid)) for c in coords]

    # polar dual: vertices of {y : <y, u> <= 1 for all shifted points u}
    rows = [tuple([-x for x in u]) + (Fraction(1),) for u in shifted]
    rows.append((Fraction(0),) * d + (Fraction(1),))
    rays = _extreme_rays(rows, d + 1)
    facets_t = []
    for r in rays:
        if r[-1] == 0:
            # polar is bounded because 0 is interior; cannot happen
            raise BadParams("interior point failure in hull")
        y = tuple(Fraction(x, r[-1]) for x in r[:-1])
        facets_t.append(y)

    gram_inv = (W * WT).inverse()
    lift = gram_inv * W
    facets = []
    for y in facets_t:
        # <y, t - centroid> <= 1  becomes  <phi, x> >= offset
        phi = tuple(-q for q in (Mat([y]) * lift).rows[0])
        off = -Fraction(1) - vdot(y, centroid) + vdot(phi, x0)
        nrm = clear_denominators(phi + (off,))
        facets.append((nrm[:-1], Fraction(nrm[-1])))

    # vertices: input points where the tight facets have full rank d
    verts = []
    for p, t in zip(pts, coords):
        tightdirs = [f for f, off in facets if vdot(f, p) == off]
        if not tightdirs:
            continue
        reduced = [tuple((Mat([f]) * WT).rows[0]) for f in tightdirs]
        if Mat(reduced).rank() == d:
            verts.append(p)
    return Polytope(verts, facets, equations, dim)


def vertices_from_hrep(ineqs, equalities, dim):
    """Vertex enumeration for {x : <n,x> >= b, <h,x> = c}; raises Unbounded
    if the set is not bounded.  Returns the (possibly empty) vertex list."""
    eqs = [(vec(n), Fraction(v)) for n, v in equalities]
    if eqs:
        E = Mat([n for n, _ in eqs])
        x0 = E.solve([v for _, v in eqs])
        if x0 is None:
            return []
        Wrows = E.kernel()
    else:
        x0 = (Fraction(0),) * dim
        Wrows = [tuple(r) for r in Mat.identity(dim).rows]
    d = len(Wrows)
    if d == 0:
        for n, b in ineqs:
            if vdot(vec(n), x0) < b:
                return []
        return [x0]
    W = Mat(Wrows)
    WT = W.transpose()
    rows = []
    for n, b in ineqs:
        n = vec(n)
        coef = tuple((Mat([n]) * WT).rows[0])
        rows.append(coef + (vdot(n, x0) - Fraction(b),))
    rows.append((Fraction(0),) * d + (Fraction(1),))
    try:
        rays = _extreme_rays(rows, d + 1)
    except BadParams:
        raise Unbounded("region contains a line")
    verts = []
    for r in rays:
        if r[-1] == 0:
            if any(x != 0 for x in r[:-1]):
                raise Unbounded("region has a recession ray")
            continue
        t = tuple(Fraction(x, r[-1]) for x in r[:-1])
        xt = tuple(a + vdot(col, t) for a, col in zip(x0, WT.rows))
        verts.append(xt)
    return sorted(set(verts))


class Cone:
    """Polyhedral region in H-representation: <normal, x> >= offset rows.

    With all offsets zero this is an honest convex cone containing 0 and
    closed under positive scaling.
    """

    def __init__(self, ineqs, dim):
        self.ineqs = [(vec(n), Fraction(b)) for n, b in ineqs]
        self.dim = dim

    def contains(self, x):
        x = vec(x)
        return all(vdot(n, x) >= b for n, b in self.ineqs)

    def is_homogeneous(self):
        return all(b == 0 for _, b in self.ineqs)

    def to_json(self):
        return [{"normal": [str(x) for x in n], "offset": str(b)}
                for n, b in self.ineqs]


def superpotential_cone(summands, offsets=None):
    """Region where each tropicalized summand is >= its offset.

    Each summand is a PL function (see ctrop.trop.PLFunction); a min of
    linear forms >= c is expanded into one linear inequality per support
    exponent, exactly.
    """
    if not summands:
        raise EmptyInput("no summands")
    if offsets is None:
        offsets = [0] * len(summands)
    if len(offsets) != len(summands):
        raise BadParams("offsets must match summands")
    dim = summands[0].dim
    rows = []
    for g, c in zip(summands, offsets):
        c = Fraction(c)
        for ell in g.support:
            if g.kind == "t":
                # min <ell, x> >= c
                rows.append((vec(ell), c))
            else:
                # -max <ell, x> >= c
                rows.append((tuple(-x for x in ell), c))
    return Cone(rows, dim)


def slice_cone(cone, fiber):
    """Exact polytope cut out of the cone by an affine subspace; raises
    Unbounded when the intersection is not bounded."""
    verts = vertices_from_hrep(cone.ineqs, fiber.equalities, cone.dim)
    if not verts:
        return Polytope([], [], [], cone.dim)
    return convex_hull(verts)


def lattice_points(p, limit=5_000_000):
    """All integer points of a bounded polytope, in canonical order."""
    if p.is_empty():
        return []
    lo = []
    hi = []
    for i in range(p.dim):
        vals = [v[i] for v in p.vertices]
        lo.append(math.ceil(min(vals)))
        hi.append(math.floor(max(vals)))
    total = 1
    for a, b in zip(lo, hi):
        total *= max(0, b - a + 1)
        if total > limit:
            raise BadParams("bounding box too large for enumeration")
    out = []
    box = [range(a, b + 1) for a, b in zip(lo, hi)]

    def rec(prefix, i):
        if i == p.dim:
            out.append(tuple(prefix))
            return
        for x in box[i]:
            prefix.append(x)
            rec(prefix, i + 1)
            prefix.pop()

    rec([], 0)
    return [q for q in out if p.contains(q)]


def verify_unimodular(p, q, u, shift):
    """True iff u is unimodular and u * P + shift = Q as vertex sets."""
    if u.nrows != u.ncols:
        raise BadParams("transform must be square")
    if not u.is_integer():
        return False
    if abs(u.det()) != 1:
        return False
    shift = vec(shift)
    mapped = sorted(tuple(a + b for a, b in zip(u * vec(v), shift))
                    for v in p.vertices)
    return tuple(mapped) == q.vertices
