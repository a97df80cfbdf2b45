"""Fixed data, seeds and seed mutation, principal coefficients, Langlands
duality, cluster ensemble lattice maps.

Conventions.  A seed is addressed by its mutation word from a single
initial seed.  The `basis` matrix stores the seed basis vectors e_{i;s} as
rows, written in the coordinates of the initial basis of N.  The exchange
matrix is eps[i][j] = {e_{i;s}, d_j e_{j;s}}, recomputed exactly from the
basis and the fixed skew form after every mutation.

Coordinate systems used throughout the library:
  * N-vectors: coordinates in the initial basis (e_i),
  * N°-vectors: coordinates in the basis (d_i e_i),
  * M°-vectors: coordinates in the basis (f_i), f_i = e_i^*/d_i.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, lcm

from .errors import BadParams, FrozenIndex
from .linalg import Mat, vdot, vec

POS = lambda x: x if x > 0 else 0


class FixedData:
    """Index set with frozen/unfrozen split, skew form and multipliers."""

    def __init__(self, n, unfrozen, skew, d):
        self.n = n
        self.unfrozen = frozenset(unfrozen)
        self.skew = skew if isinstance(skew, Mat) else Mat(skew)
        self.d = tuple(int(x) for x in d)
        self._validate()

    def _validate(self):
        if self.skew.nrows != self.n or self.skew.ncols != self.n:
            raise BadParams("skew form must be n x n")
        if any(x <= 0 for x in self.d):
            raise BadParams("multipliers must be positive")
        g = 0
        for x in self.d:
            g = gcd(g, x)
        if self.n and g != 1:
            raise BadParams("gcd of multipliers must be 1")
        if self.skew.transpose() != -self.skew:
            raise BadParams("form must be skew-symmetric")
        eps = self.epsilon()
        for i in range(self.n):
            for j in range(self.n):
                if i in self.unfrozen or j in self.unfrozen:
                    if Fraction(eps.rows[i][j]).denominator != 1:
                        raise BadParams(
                            "epsilon must be integral on unfrozen rows/columns")

    def epsilon(self):
        """eps[i][j] = {e_i, d_j e_j} = skew[i][j] * d_j."""
        return Mat([[self.skew.rows[i][j] * self.d[j] for j in range(self.n)]
                    for i in range(self.n)])

    def initial_seed(self):
        return Seed(self, (), Mat.identity(self.n))

    def seed(self, word):
        s = self.initial_seed()
        for k in word:
            s = s.mutate(k)
        return s

    def __eq__(self, other):
        return (isinstance(other, FixedData) and self.n == other.n
                and self.unfrozen == other.unfrozen
                and self.skew == other.skew and self.d == other.d)


class Seed:
    """A seed: mutation word plus the derived basis and exchange matrix.

    Words are kept reduced: mutating twice in the same direction returns
    the parent seed, with basis and exchange matrix literally restored.
    (The raw basis formula composed with itself gives the parent seed only
    up to a canonical monomial isomorphism; the reduced-word model quotients
    by it, which is what every identity in this library expects.)
    """

    def __init__(self, fixed, word, basis, eps=None, parent=None):
        self.fixed = fixed
        self.word = tuple(word)
        self.basis = basis
        self.eps = eps if eps is not None else self._compute_eps()
        self.parent = parent

    def _compute_eps(self):
        b = self.basis
        lam = self.fixed.skew
        bl = b * lam * b.transpose()
        d = self.fixed.d
        return Mat([[bl.rows[i][j] * d[j] for j in range(self.fixed.n)]
                    for i in range(self.fixed.n)])

    @property
    def n(self):
        return self.fixed.n

    def key(self):
        """Canonical key identifying the seed data (not the word)."""
        return (self.basis.rows, self.eps.rows)

    def mutate(self, k):
        if k not in self.fixed.unfrozen:
            raise FrozenIndex("cannot mutate frozen index %r" % (k,))
        if self.word and self.word[-1] == k and self.parent is not None:
            return self.parent
        n = self.fixed.n
        col = [self.eps.rows[i][k] for i in range(n)]
        rows = []
        for i in range(n):
            if i == k:
                rows.append([-x for x in self.basis.rows[k]])
            else:
                c = POS(col[i])
                rows.append([a + c * b for a, b in
                             zip(self.basis.rows[i], self.basis.rows[k])])
        return Seed(self.fixed, self.word + (k,), Mat(rows), parent=self)

    def e_initial(self, k):
        """e_{k;s} in initial N-coordinates."""
        return self.basis.rows[k]

    def v_initial(self, k):
        """v_{k;s} = {e_{k;s}, .} in initial M°-coordinates (f-basis)."""
        bl = self.basis * self.fixed.skew
        d = self.fixed.d
        return tuple(bl.rows[k][j] * d[j] for j in range(self.fixed.n))

    def pairing_dkek(self, k, m):
        """<d_k e_{k;s}, m> for m in initial M°-coordinates."""
        d = self.fixed.d
        return self.fixed.d[k] * sum(
            Fraction(self.basis.rows[k][j]) * m[j] / d[j] for j in range(self.fixed.n))

    def skew_with_e(self, k, n_vec):
        """{e_{k;s}, n} for n in initial N-coordinates."""
        return vdot(self.basis.rows[k], self.fixed.skew * vec(n_vec))

    def f_matrix(self):
        """Rows are f_{i;s} in initial M°-coordinates: D^-1 B^-T D."""
        n = self.fixed.n
        d = self.fixed.d
        binv_t = self.basis.inverse().transpose()
        return Mat([[binv_t.rows[i][j] * d[j] / Fraction(d[i])
                     for j in range(n)] for i in range(n)])

    def pstar_cols_unfrozen(self):
        """Columns p*_1(e_{k;s}) in the seed's own M°-coordinates: these are
        the unfrozen rows of eps, transposed into columns."""
        ks = sorted(self.fixed.unfrozen)
        return Mat.from_cols([self.eps.rows[k] for k in ks])

    def __eq__(self, other):
        return (isinstance(other, Seed) and self.fixed == other.fixed
                and self.word == other.word)

    def __repr__(self):
        return "Seed(word=%r)" % (self.word,)


def mutate_seed(s, k):
    return s.mutate(k)


def build_principal(fd):
    """Principal-coefficient fixed data: index set doubled, skew form
    {(n1,m1),(n2,m2)} = {n1,n2} + <n1,m2> - <n2,m1>, multipliers repeated,
    unfrozen set kept in the first copy.

    The initial-seed basis of N_prin is ((e_i,0), (0,f_i)); in these
    coordinates <e_i, f_j> = delta_ij / d_j.
    """
    n = fd.n
    rows = []
    for i in range(2 * n):
        row = []
        for j in range(2 * n):
            if i < n and j < n:
                row.append(fd.skew.rows[i][j])
            elif i < n and j >= n:
                row.append(Fraction(1, fd.d[i]) if j - n == i else Fraction(0))
            elif i >= n and j < n:
                row.append(Fraction(-1, fd.d[j]) if i - n == j else Fraction(0))
            else:
                row.append(Fraction(0))
        rows.append(row)
    return FixedData(2 * n, fd.unfrozen, Mat(rows), fd.d + fd.d)


def langlands_dual(fd):
    """Langlands dual fixed data on the basis e_i^dual = d_i e_i."""
    d_all = lcm(*fd.d) if fd.n else 1
    rows = [[Fraction(fd.d[i] * fd.d[j], d_all) * fd.skew.rows[i][j]
             for j in range(fd.n)] for i in range(fd.n)]
    d_dual = tuple(d_all // di for di in fd.d)
    return FixedData(fd.n, fd.unfrozen, Mat(rows), d_dual)


class EnsembleMap:
    """Matrix of a cluster ensemble lattice map p*: N -> M° in the initial
    bases, together with the kernel driving torus actions and fibrations
    (for the Grassmannian map this is the span of the all-ones vector)."""

    def __init__(self, fd, matrix):
        self.fd = fd
        self.matrix = matrix
        self.kernel = self.matrix.kernel()

    def apply(self, n_vec):
        """p*(n) in M°-coordinates, n in initial N-coordinates."""
        return self.matrix * vec(n_vec)

    def column(self, j):
        return self.matrix.col(j)


def ensemble_map(fd, frozen_block=None):
    """Assemble the map with unfrozen blocks forced to eps^tr and the free
    frozen x frozen block supplied by the caller (default zero)."""
    eps_t = fd.epsilon().transpose()
    frozen = sorted(set(range(fd.n)) - fd.unfrozen)
    rows = [list(r) for r in eps_t.rows]
    if frozen_block is None:
        frozen_block = Mat.zero(len(frozen), len(frozen))
    if frozen_block.nrows != len(frozen) or frozen_block.ncols != len(frozen):
        raise BadParams("frozen block has wrong shape")
    for a, i in enumerate(frozen):
        for b, j in enumerate(frozen):
            rows[i][j] = frozen_block.rows[a][b]
    m = Mat(rows)
    if not m.is_integer():
        raise BadParams("ensemble map must be integral")
    return EnsembleMap(fd, m)


def principal_ensemble_map(fd, p):
    """p*_prin for the principal data: (n, m) -> (p*(n) - m, n)."""
    fdp = build_principal(fd)
    n = fd.n
    rows = []
    for i in range(n):
        rows.append([p.matrix.rows[i][j] for j in range(n)]
                    + [-1 if j == i else 0 for j in range(n)])
    for i in range(n):
        rows.append([1 if j == i else 0 for j in range(n)] + [0] * n)
    return EnsembleMap(fdp, Mat(rows))


def optimized_check(s, point):
    """True iff {e_{k;s}, n} >= 0 for every unfrozen k, where `point` is
    given in the N°-coordinates of the seed s."""
    n = s.fixed.n
    d = s.fixed.d
    init = [Fraction(0)] * n
    for i in range(n):
        ci = point[i] * d[i]
        for j in range(n):
            init[j] += ci * s.basis.rows[i][j]
    for k in sorted(s.fixed.unfrozen):
        if s.skew_with_e(k, init) < 0:
            return False
    return True


def seed_to_json(s):
    fd = s.fixed
    return {
        "n": fd.n,
        "unfrozen": sorted(fd.unfrozen),
        "lambda": [[str(x) for x in row] for row in fd.skew.rows],
        "d": list(fd.d),
        "word": list(s.word),
    }


def seed_from_json(data):
    fd = FixedData(
        data["n"],
        data["unfrozen"],
        Mat([[Fraction(x) for x in row] for row in data["lambda"]]),
        data["d"],
    )
    return fd.seed(tuple(data["word"]))


def load_seed(path):
    with open(path) as fh:
        return seed_from_json(json.load(fh))
