"""Cluster scattering diagrams with at most two mutable directions: walls,
wall-crossing, order-by-order completion, broken lines, theta functions and
structure constants.

Geometry conventions.  A diagram lives in the exponent space of its fixed
data (M°-coordinates); wall normals are stored as integer functionals (the
primitive N°-normal expressed against the coordinate basis), so crossing
powers are plain dot products.  With one or two mutable directions every
wall support is the preimage of a line or ray under projection to the
mutable coordinates, which keeps all incidence tests exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .errors import (BadParams, NonGenericEndpoint, NotInImage,
                     RankUnsupported, SingularPath, Truncated)
from .laurent import LaurentPolynomial
from .linalg import Mat, vdot, vec

_PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
           71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137,
           139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
           211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271)


def _binom(p, i):
    """Generalized binomial coefficient C(p, i) for integer p, i >= 0."""
    num = Fraction(1)
    for t in range(i):
        num *= Fraction(p - t, t + 1)
    return num


class Wall:
    """Cone support inside a hyperplane with a truncated wall series.

    phi      integer functional (primitive N°-normal) on exponent coords
    g        exponent direction p*_1(n0)
    series   {k: c_k} for f = 1 + sum c_k z^(k g)
    n0       coefficients of the N-primitive normal on the mutable indices
    deg      N_uf^+-degree of z^g
    kind     "line" (full hyperplane) or "ray" (outgoing half, rank 2)
    """

    def __init__(self, phi, g, series, n0, deg, kind):
        self.phi = tuple(int(x) for x in phi)
        self.g = tuple(int(x) for x in g)
        self.series = {int(k): Fraction(c) for k, c in series.items()
                       if Fraction(c) != 0}
        self.n0 = tuple(int(x) for x in n0)
        self.deg = int(deg)
        self.kind = kind
        if vdot(self.phi, self.g) != 0:
            raise BadParams("wall function must be constant on the wall")

    def max_k(self):
        return max(self.series, default=0)

    def power_terms(self, power, kmax):
        """Coefficients {j: a_j} of f^power = sum a_j z^(j g), j <= kmax."""
        u = {k: c for k, c in self.series.items() if k <= kmax}
        out = {0: Fraction(1)}
        ui = {0: Fraction(1)}
        i = 1
        while True:
            nxt = {}
            for ka, ca in ui.items():
                for kb, cb in u.items():
                    k = ka + kb
                    if k > kmax:
                        continue
                    nxt[k] = nxt.get(k, Fraction(0)) + ca * cb
            ui = nxt
            if not ui or min(ui) > kmax:
                break
            c = _binom(power, i)
            if c != 0:
                for k, cu in ui.items():
                    out[k] = out.get(k, Fraction(0)) + c * cu
            if 0 <= power <= i:
                break
            i += 1
        return {k: c for k, c in out.items() if c != 0}

    def to_json(self):
        kmax = self.max_k()
        return {
            "n0": list(self.n0),
            "direction": list(self.g),
            "series": [str(self.series.get(k, Fraction(0)))
                       for k in range(1, kmax + 1)],
            "kind": self.kind,
        }

    def __repr__(self):
        return "Wall(n0=%r, kind=%s, series=%r)" % (self.n0, self.kind,
                                                    dict(sorted(self.series.items())))


class ScatteringDiagram:
    """Finitely many walls plus a truncation order.

    For cluster diagrams built from fixed data the mutable coordinate
    indices give an exact two-dimensional shadow in which ray supports and
    chamber geometry are decided.
    """

    def __init__(self, walls, dim, order, unfrozen=None, fd=None, p=None):
        self.walls = list(walls)
        self.dim = dim
        self.order = order
        self.unfrozen = tuple(unfrozen) if unfrozen is not None else None
        self.fd = fd
        self.p = p
        self._offset_cache = {}

    # -- 2d shadow helpers -------------------------------------------------

    def proj(self, x):
        return tuple(x[i] for i in self.unfrozen)

    def ray_dir(self, wall):
        """Outgoing direction of a ray wall in the 2d shadow."""
        return tuple(-Fraction(x) for x in self.proj(wall.g))

    def on_wall(self, x):
        """Indices of walls whose support contains the point x."""
        out = []
        for i, w in enumerate(self.walls):
            if vdot(w.phi, x) != 0:
                continue
            if w.kind == "line":
                out.append(i)
                continue
            u = self.ray_dir(w)
            y = self.proj(x)
            if _on_ray(y, u):
                out.append(i)
        return out

    def _depth_generators(self):
        if self.fd is not None and self.unfrozen is not None:
            gs = [vec(self.fd.epsilon().rows[k]) for k in self.unfrozen]
            degs = [1] * len(gs)
        else:
            gs, degs = [], []
            for w in self.walls:
                if vec(w.g) not in gs:
                    gs.append(vec(w.g))
                    degs.append(w.deg)
        m = Mat.from_cols(gs)
        if m.rank() != len(gs):
            raise BadParams("wall exponent directions are dependent")
        return m, degs

    def offset_depth(self, offset):
        """N_uf^+-degree of an exponent offset in the positive cone of the
        wall exponent directions, or None if the offset is not there."""
        offset = tuple(offset)
        if offset in self._offset_cache:
            return self._offset_cache[offset]
        mat, degs = self._depth_generators()
        sol = mat.solve(vec(offset))
        if sol is None or any(Fraction(x).denominator != 1 or x < 0 for x in sol):
            d = None
        else:
            d = int(sum(c * w for c, w in zip(sol, degs)))
        self._offset_cache[offset] = d
        return d

    def depth_of_offset(self, offset):
        d = self.offset_depth(offset)
        if d is None:
            raise BadParams("offset %r not in the positive exponent cone"
                            % (tuple(offset),))
        return d

    def walls_sorted(self):
        return sorted(range(len(self.walls)),
                      key=lambda i: (self.walls[i].n0, self.walls[i].kind))

    def to_json(self):
        return {"order": self.order,
                "walls": [self.walls[i].to_json() for i in self.walls_sorted()]}


def _on_ray(y, u):
    """Is the 2d point y on the closed ray through u (u != 0)?"""
    if len(y) == 1:
        return y[0] * u[0] >= 0
    cross = y[0] * u[1] - y[1] * u[0]
    return cross == 0 and y[0] * u[0] + y[1] * u[1] >= 0


def initial_diagram(fd, p, order):
    """Initial cluster scattering diagram for the given fixed data and
    ensemble map; one full hyperplane per mutable direction."""
    ks = sorted(fd.unfrozen)
    if len(ks) > 2:
        raise RankUnsupported("scattering needs at most 2 mutable directions")
    eps = fd.epsilon()
    walls = []
    for k in ks:
        phi = [0] * fd.n
        phi[k] = 1
        g = [int(x) for x in eps.rows[k]]
        n0 = tuple(1 if j == k else 0 for j in ks)
        walls.append(Wall(phi, g, {1: 1}, n0, 1, "line"))
    return ScatteringDiagram(walls, fd.n, order, unfrozen=ks, fd=fd, p=p)


def _primitive_pair(a, b):
    g = gcd(a, b)
    return (a // g, b // g, g)


def _ray_wall(dia, a, b, series):
    """Wall on the ray with N-primitive normal a e_k1 + b e_k2."""
    fd = dia.fd
    ks = dia.unfrozen
    d1, d2 = fd.d[ks[0]], fd.d[ks[1]]
    t = lcm(d1 // gcd(a, d1), d2 // gcd(b, d2))
    phi = [0] * fd.n
    phi[ks[0]] = t * a // d1
    phi[ks[1]] = t * b // d2
    eps = fd.epsilon()
    g = [int(a * eps.rows[ks[0]][j] + b * eps.rows[ks[1]][j])
         for j in range(fd.n)]
    return Wall(phi, g, series, (a, b), a + b, "ray")


# -- wall crossing and path-ordered products --------------------------------


def wall_cross(mono, wall, crossing_sign, order=None, max_k=None):
    """Image of a monomial under one wall-crossing automorphism.

    mono is (coefficient, exponent); the crossing power is
    crossing_sign * <phi, exponent>.  Negative powers are expanded as
    geometric series and truncated at `max_k` series steps (or the wall
    series support when the power is nonnegative and max_k is omitted).
    """
    coef, exp = Fraction(mono[0]), tuple(mono[1])
    power = crossing_sign * vdot(wall.phi, exp)
    if power == 0:
        return LaurentPolynomial({exp: coef}, len(exp))
    if max_k is None:
        if power < 0 and order is None:
            raise BadParams("negative power needs a truncation order")
        max_k = (order // wall.deg) if order is not None else \
            wall.max_k() * power
    terms = wall.power_terms(int(power), max_k)
    out = {}
    for j, c in terms.items():
        e = tuple(a + j * b for a, b in zip(exp, wall.g))
        out[e] = out.get(e, Fraction(0)) + coef * c
    return LaurentPolynomial(out, len(exp))


def _apply_wall(poly, wall, sign, dia, base_exp):
    """Apply one crossing to a polynomial, truncating offsets beyond the
    diagram order (offsets measured from base_exp)."""
    out = LaurentPolynomial.zero(poly.dim)
    for e, c in poly.coeffs.items():
        used = dia.depth_of_offset(tuple(a - b for a, b in zip(e, base_exp)))
        budget = dia.order - used
        if budget < 0:
            continue
        out = out + wall_cross((c, e), wall, sign, max_k=budget // wall.deg)
    # re-truncate exactly
    kept = {e: c for e, c in out.coeffs.items()
            if dia.depth_of_offset(tuple(a - b for a, b in zip(e, base_exp)))
            <= dia.order}
    return LaurentPolynomial(kept, poly.dim)


def _rel_angle_key(a, u):
    """Exact sort key for the CCW angle from direction a to direction u,
    for angles in the open interval (0, 2pi).  Returns None when u is
    positively parallel to a (angle 0)."""
    cross = a[0] * u[1] - a[1] * u[0]
    dot = a[0] * u[0] + a[1] * u[1]
    if cross == 0:
        if dot > 0:
            return None
        return (1, Fraction(0))
    half = 0 if cross > 0 else 2
    return (half, -Fraction(dot, cross))


def _loop_rays(dia):
    """All (direction, wall index) crossings of a full CCW loop."""
    out = []
    for i, w in enumerate(dia.walls):
        if w.kind == "line":
            phip = [Fraction(w.phi[j]) for j in dia.unfrozen]
            if len(dia.unfrozen) == 1:
                out.append(((Fraction(1),), i))
                out.append(((Fraction(-1),), i))
            else:
                u = (-phip[1], phip[0])
                out.append((u, i))
                out.append(((-u[0], -u[1]), i))
        else:
            out.append((dia.ray_dir(w), i))
    return out


def _cross_sign(u, wall, dia):
    """Sign of the normal chosen against the flow for a CCW crossing of the
    ray with direction u."""
    travel = (-u[1], u[0])
    phip = [Fraction(wall.phi[j]) for j in dia.unfrozen]
    d = phip[0] * travel[0] + phip[1] * travel[1]
    if d == 0:
        raise SingularPath("path runs along a wall")
    return -1 if d > 0 else 1


def path_ordered_product(chambers, dia, order=None):
    """Composite wall-crossing automorphism along a path through the given
    chamber directions (2d shadow), as images of the coordinate monomials.

    The path sweeps counterclockwise from each direction to the next.
    Raises SingularPath if a chamber direction lies on a wall.
    """
    if order is not None and order != dia.order:
        dia = ScatteringDiagram(dia.walls, dia.dim, order, dia.unfrozen,
                                dia.fd, dia.p)
    dirs = [tuple(Fraction(x) for x in c) for c in chambers]
    rays = _loop_rays(dia)
    for d in dirs:
        for u, i in rays:
            if len(u) == 1:
                if d[0] * u[0] > 0:
                    raise SingularPath("chamber direction on a wall")
            elif d[0] * u[1] - d[1] * u[0] == 0 and d[0] * u[0] + d[1] * u[1] > 0:
                raise SingularPath("chamber direction on a wall")
    crossings = []
    for a, b in zip(dirs, dirs[1:]):
        if len(a) == 1:
            # rank 1: a sweep from a to b crosses a half-line once iff the
            # endpoint signs differ; against-the-flow normal points back
            # toward the start side.
            seen = set()
            for u, i in rays:
                if a[0] * u[0] > 0 and b[0] * u[0] < 0 and i not in seen:
                    phik = dia.walls[i].phi[dia.unfrozen[0]]
                    sign = 1 if phik * a[0] > 0 else -1
                    crossings.append((i, sign))
                    seen.add(i)
            continue
        key_b = _rel_angle_key(a, b)
        if key_b is None:
            continue  # repeated direction: empty arc
        seg = []
        for u, i in rays:
            k = _rel_angle_key(a, u)
            if k is not None and k < key_b:
                seg.append((k, u, i))
        seg.sort(key=lambda t: (t[0], dia.walls[t[2]].n0))
        crossings.extend((i, _cross_sign(u, dia.walls[i], dia))
                         for _, u, i in seg)
    table = {}
    for j in range(dia.dim):
        base = tuple(1 if i == j else 0 for i in range(dia.dim))
        poly = LaurentPolynomial.monomial(base)
        for i, sign in crossings:
            poly = _apply_wall(poly, dia.walls[i], sign, dia, base)
        table[j] = poly
    return table


def _loop_apply(dia, base_exp, loop_dirs):
    """Full path-ordered product applied to the single monomial z^base."""
    dirs = [tuple(Fraction(x) for x in c) for c in loop_dirs]
    rays = _loop_rays(dia)
    poly = LaurentPolynomial.monomial(base_exp)
    for a, b in zip(dirs, dirs[1:]):
        key_b = _rel_angle_key(a, b)
        if key_b is None:
            raise SingularPath("consecutive loop directions coincide")
        seg = []
        for u, i in rays:
            k = _rel_angle_key(a, u)
            if k is not None and k < key_b:
                seg.append((k, u, i))
        seg.sort(key=lambda t: (t[0], dia.walls[t[2]].n0))
        for _, u, i in seg:
            sign = _cross_sign(u, dia.walls[i], dia)
            poly = _apply_wall(poly, dia.walls[i], sign, dia, base_exp)
    return poly


def _generic_loop_dirs(dia):
    """A closed CCW loop of four generic directions, one per open quadrant
    of the 2d shadow, none parallel to a wall ray."""
    rays = [u for u, _ in _loop_rays(dia)]

    def pick(qx, qy):
        for t in range(1, 400):
            cand = (Fraction(qx * (t + 1)), Fraction(qy * t))
            if all(cand[0] * u[1] - cand[1] * u[0] != 0 for u in rays):
                return cand
        raise SingularPath("no generic loop direction found")

    d1 = pick(1, 1)
    d2 = pick(-1, 1)
    d3 = pick(-1, -1)
    d4 = pick(1, -1)
    return [d1, d2, d3, d4, d1]


def loop_defect(dia, order=None):
    """Degree-graded defect of the full loop on a generic probe monomial:
    {offset: coefficient} with the identity part removed."""
    if order is not None and order != dia.order:
        dia = ScatteringDiagram(dia.walls, dia.dim, order, dia.unfrozen,
                                dia.fd, dia.p)
    k1, k2 = dia.unfrozen
    base = tuple(1 if i in (k1, k2) else 0 for i in range(dia.dim))
    poly = _loop_apply(dia, base, _generic_loop_dirs(dia))
    out = {}
    for e, c in poly.coeffs.items():
        off = tuple(a - b for a, b in zip(e, base))
        if any(off):
            out[off] = c
        elif c != 1:
            out[off] = c - 1
    return out


def is_consistent(dia, order=None):
    """Loop path-ordered product equals the identity on all generators up
    to the truncation order."""
    if order is not None and order != dia.order:
        dia = ScatteringDiagram(dia.walls, dia.dim, order, dia.unfrozen,
                                dia.fd, dia.p)
    if len(dia.unfrozen) <= 1:
        return True
    loop = _generic_loop_dirs(dia)
    table = path_ordered_product([tuple(x) for x in loop], dia)
    for j, poly in table.items():
        base = tuple(1 if i == j else 0 for i in range(dia.dim))
        if poly != LaurentPolynomial.monomial(base):
            return False
    return True


def complete_rank2(dia, order=None):
    """Order-by-order completion of a rank <= 2 initial cluster diagram to
    a consistent diagram, inserting outgoing rays with uniquely determined
    series coefficients."""
    if dia.fd is None or dia.unfrozen is None:
        raise BadParams("completion needs a cluster diagram")
    if len(dia.unfrozen) > 2:
        raise RankUnsupported("completion implemented for <= 2 mutable directions")
    order = order if order is not None else dia.order
    walls = [Wall(w.phi, w.g, w.series, w.n0, w.deg, w.kind)
             for w in dia.walls]
    out = ScatteringDiagram(walls, dia.dim, order, dia.unfrozen, dia.fd, dia.p)
    if len(out.unfrozen) <= 1:
        return out
    k1, k2 = out.unfrozen
    if out.fd.epsilon().rows[k1][k2] == 0:
        return out
    base = tuple(1 if i in (k1, k2) else 0 for i in range(out.dim))
    gs = Mat.from_cols([vec(out.fd.epsilon().rows[k1]),
                        vec(out.fd.epsilon().rows[k2])])
    ray_index = {}

    for deg in range(2, order + 1):
        for _ in range(4):
            defect = {off: c for off, c in loop_defect(out, deg).items()
                      if out.depth_of_offset(off) == deg}
            if not defect:
                break
            for off in sorted(defect):
                c = defect[off]
                sol = gs.solve(vec(off))
                a_full, b_full = int(sol[0]), int(sol[1])
                a, b, k = _primitive_pair(a_full, b_full)
                idx = ray_index.get((a, b))
                if idx is None:
                    w = _ray_wall(out, a, b, {})
                    out.walls.append(w)
                    idx = len(out.walls) - 1
                    ray_index[(a, b)] = idx
                w = out.walls[idx]
                u = out.ray_dir(w)
                sign = _cross_sign(u, w, out)
                pairing = vdot(w.phi, base)
                delta = -c / (sign * pairing)
                w.series[k] = w.series.get(k, Fraction(0)) + delta
                if w.series[k] == 0:
                    del w.series[k]
        else:
            raise BadParams("completion did not converge at degree %d" % deg)
    if not is_consistent(out):
        raise BadParams("completed diagram fails the consistency oracle")
    out.walls.sort(key=lambda w: (w.kind != "line", w.n0))
    out._offset_cache = {}
    return out


# -- broken lines and theta functions ----------------------------------------


class BrokenLine:
    """Decorated piecewise-linear path.  Segments are listed from the
    initial (unbounded) one to the final one; each entry is
    (exponent, coefficient, wall index or None, start point or None)."""

    def __init__(self, segments, endpoint):
        self.segments = segments
        self.endpoint = tuple(endpoint)

    @property
    def initial_exponent(self):
        return self.segments[0][0]

    def final(self):
        seg = self.segments[-1]
        return (seg[1], seg[0])

    def leg_times(self):
        """Parameter time spent on each bounded segment (initial segment
        excluded; it is infinite)."""
        times = []
        for i in range(1, len(self.segments)):
            exp, _, _, start = self.segments[i]
            end = (self.segments[i + 1][3] if i + 1 < len(self.segments)
                   else self.endpoint)
            dt = None
            for j, comp in enumerate(exp):
                if comp != 0:
                    dt = Fraction(start[j] - end[j]) / comp
                    break
            times.append(dt)
        return times

    def total_bend_degree(self, dia):
        off = tuple(a - b for a, b in
                    zip(self.final()[1], self.initial_exponent))
        return dia.depth_of_offset(off) if any(off) else 0

    def __repr__(self):
        return "BrokenLine(%r -> %r at %r)" % (
            self.initial_exponent, self.final(), self.endpoint)


def _segment_crossings(dia, x, v):
    """Wall crossings along the open ray {x + s v : s > 0}: sorted list of
    (s, wall index, point).  Raises NonGenericEndpoint on joint hits."""
    found = []
    for i, w in enumerate(dia.walls):
        den = vdot(w.phi, v)
        if den == 0:
            continue
        num = vdot(w.phi, x)
        s = -Fraction(num) / Fraction(den)
        if s <= 0:
            continue
        y = tuple(a + s * b for a, b in zip(x, vec(v)))
        if w.kind == "ray":
            yp = dia.proj(y)
            if all(c == 0 for c in yp):
                raise NonGenericEndpoint("path through a joint")
            if not _on_ray(yp, dia.ray_dir(w)):
                continue
        found.append((s, i, y))
    found.sort(key=lambda t: t[0])
    for (s1, i1, y1), (s2, i2, y2) in zip(found, found[1:]):
        if s1 == s2:
            raise NonGenericEndpoint("path through a wall intersection")
    return found


def _offset_candidates(dia, bound):
    """All offsets sum j_w g_w with total degree <= bound, with degrees."""
    items = [(w.g, w.deg, max((k for k, c in w.series.items()), default=0))
             for w in dia.walls]
    offs = {(0,) * dia.dim: 0}
    for g, deg, kmax in items:
        if kmax == 0:
            continue
        cur = dict(offs)
        jmax = bound // deg
        for off, d0 in offs.items():
            for j in range(1, jmax + 1):
                d = d0 + j * deg
                if d > bound:
                    break
                e = tuple(a + j * b for a, b in zip(off, g))
                if e not in cur or cur[e] > d:
                    cur[e] = d
        offs = cur
    return offs


def enumerate_broken_lines(dia, m, endpoint, degree_bound=None):
    """All generic broken lines with the given initial exponent and
    endpoint, bending depth at most degree_bound.  Returns (lines,
    exact) where exact is False when a bend was pruned by the bound."""
    m = tuple(int(x) for x in m)
    if not any(m):
        raise BadParams("initial exponent must be nonzero")
    bound = degree_bound if degree_bound is not None else dia.order
    x0 = vec(endpoint)
    if dia.on_wall(x0):
        raise NonGenericEndpoint("endpoint lies on a wall")
    results = []

    def walk(x, v, later):
        # `later` collects (exponent, wall, bend point, factor) for the
        # segments after the current one, in reverse path order.
        rem = dia.offset_depth(tuple(a - b for a, b in zip(v, m)))
        if rem is None:
            return
        if rem == 0:
            _segment_crossings(dia, x, v)  # certify the initial ray is clean
            segs = [(m, None, None, Fraction(1))] + list(reversed(later))
            results.append(segs)
            return
        for s, i, y in _segment_crossings(dia, x, v):
            w = dia.walls[i]
            others = [j for j in dia.on_wall(y) if j != i]
            if others:
                raise NonGenericEndpoint("bend point on several walls")
            power = abs(vdot(w.phi, v))
            if power == 0:
                continue
            terms = w.power_terms(power, rem // w.deg)
            for j in sorted(terms):
                if j == 0:
                    continue
                prev = tuple(a - j * b for a, b in zip(v, w.g))
                walk(y, prev, later + [(v, i, y, terms[j])])

    for off, d in sorted(_offset_candidates(dia, bound).items()):
        v0 = tuple(a + b for a, b in zip(m, off))
        if not any(v0):
            continue
        walk(x0, v0, [])

    lines = []
    hit_bound = False
    for segs in results:
        coef = Fraction(1)
        full = []
        for exp, wi, pt, factor in segs:
            coef *= factor
            full.append((exp, coef, wi, pt))
        ln = BrokenLine(full, x0)
        off = tuple(a - b for a, b in zip(ln.final()[1], m))
        if any(off) and dia.depth_of_offset(off) >= bound:
            hit_bound = True
        lines.append(ln)
    lines.sort(key=lambda l: ([s[0] for s in l.segments],))
    return lines, not hit_bound


def _sample_basepoint(dia, attempt):
    p = _PRIMES[(2 * attempt) % len(_PRIMES)]
    q = _PRIMES[(2 * attempt + 1) % len(_PRIMES)]
    x = [Fraction(0)] * dia.dim
    ks = dia.unfrozen
    x[ks[0]] = 1 + Fraction(1, p)
    if len(ks) > 1:
        x[ks[1]] = 1 + Fraction(2, q)
    return tuple(x)


def theta_function(dia, m, basepoint=None, degree_bound=None):
    """Theta function with label m: sum of final monomials of all broken
    lines ending at a generic basepoint interior to the positive chamber.

    Returns (polynomial, exact flag).  theta_0 = 1 by definition.
    """
    m = tuple(int(x) for x in m)
    if not any(m):
        return LaurentPolynomial.one(dia.dim), True
    attempts = 32 if basepoint is None else 1
    last = None
    for attempt in range(attempts):
        x0 = vec(basepoint) if basepoint is not None else \
            _sample_basepoint(dia, attempt)
        if basepoint is None and dia.on_wall(x0):
            continue
        if any(x0[k] <= 0 for k in dia.unfrozen):
            raise NonGenericEndpoint("basepoint must be interior to C+")
        try:
            lines, exact = enumerate_broken_lines(dia, m, x0, degree_bound)
        except NonGenericEndpoint as exc:
            last = exc
            if basepoint is not None:
                raise
            continue
        poly = LaurentPolynomial.zero(dia.dim)
        for ln in lines:
            c, e = ln.final()
            poly = poly + LaurentPolynomial.monomial(e, c)
        return poly, exact
    raise last or NonGenericEndpoint("no generic basepoint found")


def theta_on_x(dia_prin, dn, p, degree_bound=None):
    """Theta function on the X variety with label dn, computed on the
    principal-coefficient diagram and rewritten through the monomial map
    n -> (p*(n), n).  Raises NotInImage if the rewrite fails."""
    fdp = dia_prin.fd
    n_small = fdp.n // 2
    d_all = lcm(*fdp.d[:n_small])
    n_vec = []
    for x in dn:
        f = Fraction(x, d_all)
        if f.denominator != 1:
            raise BadParams("label must be divisible by lcm of multipliers")
        n_vec.append(int(f))
    n_vec = tuple(n_vec)
    label = tuple(int(x) for x in p.apply(n_vec)) + n_vec
    theta, exact = theta_function(dia_prin, label, degree_bound=degree_bound)
    out = {}
    for e, c in theta.coeffs.items():
        u, w = e[:n_small], e[n_small:]
        if tuple(int(x) for x in p.apply(w)) != tuple(u):
            raise NotInImage("exponent %r is not in the image of the "
                             "coefficient quotient" % (e,))
        out[w] = c
    return LaurentPolynomial(out, n_small), exact


def structure_constant(dia, p_lab, q_lab, r_lab, degree_bound=None):
    """Structure constant alpha(p, q, r) counted by pairs of broken lines
    ending at a generic point adjacent to r."""
    p_lab = tuple(int(x) for x in p_lab)
    q_lab = tuple(int(x) for x in q_lab)
    r_lab = tuple(int(x) for x in r_lab)
    if not any(p_lab):
        return Fraction(1) if q_lab == r_lab else Fraction(0)
    if not any(q_lab):
        return Fraction(1) if p_lab == r_lab else Fraction(0)
    bound = degree_bound if degree_bound is not None else dia.order
    for attempt in range(32):
        z = _near_point(dia, r_lab, attempt)
        if z is None:
            continue
        try:
            lines_p, ex_p = enumerate_broken_lines(dia, p_lab, z, bound)
            lines_q, ex_q = enumerate_broken_lines(dia, q_lab, z, bound)
        except NonGenericEndpoint:
            continue
        if not (ex_p and ex_q):
            raise Truncated("degree bound reached while pairing broken lines")
        total = Fraction(0)
        for l1 in lines_p:
            c1, f1 = l1.final()
            for l2 in lines_q:
                c2, f2 = l2.final()
                if tuple(a + b for a, b in zip(f1, f2)) == r_lab:
                    total += c1 * c2
        return total
    raise NonGenericEndpoint("no generic endpoint near r found")


def _near_point(dia, r, attempt):
    """Generic rational point close to r: same strict side of every wall
    not containing r, off every wall."""
    delta = []
    for i in range(dia.dim):
        pr = _PRIMES[(i + 3 * attempt) % len(_PRIMES)]
        delta.append(Fraction(1, pr))
    for s in range(2, 64):
        scale = Fraction(1, 2 ** s)
        z = tuple(Fraction(a) + scale * b for a, b in zip(r, delta))
        ok = True
        for w in dia.walls:
            vr = vdot(w.phi, r)
            vz = vdot(w.phi, z)
            if vz == 0:
                ok = False
                break
            if vr != 0 and (vr > 0) != (vz > 0):
                ok = False
                break
        if ok and dia.unfrozen is not None:
            if all(c == 0 for c in dia.proj(z)):
                ok = False
        if ok and not dia.on_wall(z):
            return z
    return None


def build_theta_table(dia, labels, degree_bound=None):
    """Theta functions for a family of labels, as a plain dict; every entry
    is checked to be exact at the requested bound."""
    table = {}
    for lab in labels:
        poly, exact = theta_function(dia, tuple(lab), degree_bound=degree_bound)
        if not exact:
            raise Truncated("theta table entry %r hit the degree bound" % (lab,))
        table[tuple(int(x) for x in lab)] = poly
    return table


class LazyThetaTable:
    """Theta functions computed on demand and cached; entries that hit the
    degree bound raise Truncated rather than entering the table."""

    def __init__(self, dia, degree_bound=None):
        self.dia = dia
        self.degree_bound = degree_bound
        self._cache = {}

    def get(self, label, default=None):
        label = tuple(int(x) for x in label)
        if label not in self._cache:
            poly, exact = theta_function(self.dia, label,
                                         degree_bound=self.degree_bound)
            if not exact:
                raise Truncated("theta %r hit the degree bound" % (label,))
            self._cache[label] = poly
        return self._cache[label]

    def __getitem__(self, label):
        return self.get(label)

    def __len__(self):
        return len(self._cache)
