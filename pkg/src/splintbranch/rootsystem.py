"""Root systems, weight lattices and Weyl group actions with exact arithmetic.

Simple factors are realized in orthogonal coordinates (Bourbaki tables), with
a per-coordinate rational form scale chosen so that long roots of every simple
factor have squared length 2.  All vectors are tuples of Fractions, so every
inner product, Dynkin label and reflection is exact.

Realizations (one block per simple factor):
  A_n : R^{n+1},  alpha_i = e_i - e_{i+1},             scale 1
  B_n : R^n,      alpha_i = e_i - e_{i+1}, alpha_n = e_n,        scale 1
  C_n : R^n,      alpha_i = e_i - e_{i+1}, alpha_n = 2 e_n,      scale 1/2
  D_n : R^n,      alpha_i = e_i - e_{i+1}, alpha_n = e_{n-1}+e_n, scale 1
  E_n : R^8 (n = 6,7,8), Bourbaki simple roots,        scale 1
  F_4 : R^4,      e_2-e_3, e_3-e_4, e_4, (e_1-e_2-e_3-e_4)/2,    scale 1
  G_2 : R^3,      e_1-e_2, -2e_1+e_2+e_3,              scale 1/3
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

Vec = tuple[Fraction, ...]

# Hard cap on materialized Weyl orbits (D5/B5 scale).
MAX_ORBIT = 51840

WEYL_ORDERS = {
    ("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
    ("F", 4): 1152, ("G", 2): 12,
}

DUAL_COXETER = {
    "A": lambda n: n + 1, "B": lambda n: 2 * n - 1, "C": lambda n: n + 1,
    "D": lambda n: 2 * n - 2, "G": lambda n: 4, "F": lambda n: 9,
    "E": lambda n: {6: 12, 7: 18, 8: 30}[n],
}


def vec(xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(a: Vec, c) -> Vec:
    c = Fraction(c)
    return tuple(c * x for x in a)


def zero_vec(dim: int) -> Vec:
    return (Fraction(0),) * dim


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def solve_linear(a, b):
    """Solve a x = b exactly (a: n x n Fractions, invertible)."""
    n = len(a)
    m = [list(row) + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        d = m[col][col]
        m[col] = [x / d for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def invert_matrix(a):
    """Exact inverse of a square Fraction matrix."""
    n = len(a)
    m = [list(row) + [Fraction(i == j) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        d = m[col][col]
        m[col] = [x / d for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _ldl(a):
    """A = L D L^T for a positive definite Fraction matrix; L unit lower."""
    n = len(a)
    L = [[Fraction(i == j) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = a[j][j] - sum(L[j][k] * L[j][k] * D[k] for k in range(j))
        if D[j] <= 0:
            raise ValueError("form is not positive definite")
        for i in range(j + 1, n):
            L[i][j] = (a[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return L, D


def _int_interval(u: Fraction, rho2: Fraction):
    """All integers c with (c + u)^2 <= rho2, as a (possibly empty) range."""
    if rho2 < 0:
        return range(0)
    p, q = rho2.numerator, rho2.denominator
    a, b = u.numerator, u.denominator
    # floor(b*sqrt(p*q)) is exact via isqrt; seeds are within 1 of the truth
    t = math.isqrt(p * q * b * b)

    def le_sqrt(x):      # x <= sqrt(rho2)
        return x <= 0 or x * x <= rho2

    def ge_neg_sqrt(x):  # x >= -sqrt(rho2)
        return x >= 0 or x * x <= rho2

    hi = (t - a * q) // (q * b)          # ~ floor(sqrt(rho2) - u)
    while le_sqrt(hi + 1 + u):
        hi += 1
    while not le_sqrt(hi + u):
        hi -= 1
    lo = (-t - a * q) // (q * b)         # ~ ceil(-sqrt(rho2) - u)
    while not ge_neg_sqrt(lo + u):
        lo += 1
    while ge_neg_sqrt(lo - 1 + u):
        lo -= 1
    return range(lo, hi + 1)


def lattice_points_in_ellipsoid(gram, center, bound: Fraction):
    """Yield integer vectors c with (c+center)^T gram (c+center) <= bound.

    gram must be positive definite (Fractions); center is a rational vector in
    lattice coordinates.  Exact Fincke-Pohst style recursion via LDL.
    """
    n = len(gram)
    L, D = _ldl(gram)
    c = [0] * n

    def rec(j, budget):
        if j < 0:
            yield tuple(c)
            return
        s = sum(L[k][j] * (c[k] + center[k]) for k in range(j + 1, n))
        for cj in _int_interval(center[j] + s, budget / D[j]):
            c[j] = cj
            term = D[j] * (cj + center[j] + s) ** 2
            yield from rec(j - 1, budget - term)
        c[j] = 0

    yield from rec(n - 1, bound)


# ---------------------------------------------------------------------------
# simple factor tables


def _simple_block(family: str, rank: int):
    """Simple roots of one factor as integer/rational rows, plus block dim and
    the form scale making long roots have squared length 2."""
    f = family.upper()
    if f == "A":
        if rank < 1:
            raise ValueError(f"A{rank}: rank must be >= 1")
        dim = rank + 1
        rows = [[Fraction(int(j == i) - int(j == i + 1)) for j in range(dim)]
                for i in range(rank)]
        return rows, dim, Fraction(1)
    if f == "B":
        if rank < 2:
            raise ValueError(f"B{rank}: rank must be >= 2")
        dim = rank
        rows = [[Fraction(int(j == i) - int(j == i + 1)) for j in range(dim)]
                for i in range(rank - 1)]
        rows.append([Fraction(int(j == rank - 1)) for j in range(dim)])
        return rows, dim, Fraction(1)
    if f == "C":
        if rank < 2:
            raise ValueError(f"C{rank}: rank must be >= 2")
        dim = rank
        rows = [[Fraction(int(j == i) - int(j == i + 1)) for j in range(dim)]
                for i in range(rank - 1)]
        rows.append([Fraction(2 * int(j == rank - 1)) for j in range(dim)])
        return rows, dim, Fraction(1, 2)
    if f == "D":
        if rank < 2:
            raise ValueError(f"D{rank}: rank must be >= 2")
        dim = rank
        rows = [[Fraction(int(j == i) - int(j == i + 1)) for j in range(dim)]
                for i in range(rank - 1)]
        rows.append([Fraction(int(j == rank - 2) + int(j == rank - 1)) for j in range(dim)])
        return rows, dim, Fraction(1)
    if f == "E":
        if rank not in (6, 7, 8):
            raise ValueError(f"E{rank}: rank must be 6, 7 or 8")
        dim = 8
        half = Fraction(1, 2)
        rows8 = [
            [half, -half, -half, -half, -half, -half, -half, half],
            [1, 1, 0, 0, 0, 0, 0, 0],
            [-1, 1, 0, 0, 0, 0, 0, 0],
            [0, -1, 1, 0, 0, 0, 0, 0],
            [0, 0, -1, 1, 0, 0, 0, 0],
            [0, 0, 0, -1, 1, 0, 0, 0],
            [0, 0, 0, 0, -1, 1, 0, 0],
            [0, 0, 0, 0, 0, -1, 1, 0],
        ]
        rows = [[Fraction(x) for x in row] for row in rows8[:rank]]
        return rows, dim, Fraction(1)
    if f == "F":
        if rank != 4:
            raise ValueError(f"F{rank}: rank must be 4")
        half = Fraction(1, 2)
        rows = [
            [Fraction(0), Fraction(1), Fraction(-1), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1), Fraction(-1)],
            [Fraction(0), Fraction(0), Fraction(0), Fraction(1)],
            [half, -half, -half, -half],
        ]
        return rows, 4, Fraction(1)
    if f == "G":
        if rank != 2:
            raise ValueError(f"G{rank}: rank must be 2")
        rows = [
            [Fraction(1), Fraction(-1), Fraction(0)],
            [Fraction(-2), Fraction(1), Fraction(1)],
        ]
        return rows, 3, Fraction(1, 3)
    raise ValueError(f"unknown family {family!r} (expected one of A,B,C,D,E,F,G)")


def _weyl_order(family: str, rank: int) -> int:
    if family == "A":
        return math.factorial(rank + 1)
    if family in ("B", "C"):
        return 2 ** rank * math.factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    return WEYL_ORDERS[(family, rank)]


class RootSystem:
    """Root system of a semisimple Lie algebra, exact and immutable.

    Built through build_root_system; do not mutate fields after construction.
    """

    def __init__(self, factors):
        factors = [(f.upper(), int(r)) for f, r in factors]
        if not factors:
            raise ValueError("empty algebra specification")
        total_rank = sum(r for _, r in factors)
        if total_rank > 8:
            raise ValueError(f"total rank {total_rank} exceeds supported desk scale (8)")
        self.factors = tuple(factors)
        self.rank = total_rank
        self.name = "x".join(f"{f}{r}" for f, r in factors)

        blocks = [_simple_block(f, r) for f, r in factors]
        self.dim = sum(dim for _, dim, _ in blocks)
        gram_diag: list[Fraction] = []
        padded: list[Vec] = []
        self.factor_slices = []          # per factor: (simple index range, coord range)
        sidx = cidx = 0
        for (rows, dim, scale), (fam, r) in zip(blocks, factors):
            for row in rows:
                v = [Fraction(0)] * self.dim
                for j, x in enumerate(row):
                    v[cidx + j] = x
                padded.append(tuple(v))
            self.factor_slices.append(((sidx, sidx + r), (cidx, cidx + dim)))
            sidx += r
            cidx += dim
            gram_diag.extend([scale] * dim)
        self.simple_roots: tuple[Vec, ...] = tuple(padded)
        self.gram_diag: tuple[Fraction, ...] = tuple(gram_diag)

        gram = [[self.inner(a, b) for b in self.simple_roots] for a in self.simple_roots]
        self._gram = gram
        self._gram_inv = invert_matrix(gram)
        self._coeff_cache: dict[Vec, tuple] = {}

        self.cartan = [[self._cartan_entry(i, j) for j in range(self.rank)]
                       for i in range(self.rank)]
        cartan_inv = invert_matrix([[Fraction(x) for x in row] for row in self.cartan])
        # omega_k = sum_j (C^-1)_{kj} alpha_j
        self.fundamental_weights: tuple[Vec, ...] = tuple(
            self._combine(cartan_inv[k]) for k in range(self.rank))

        self._root_set, self.positive_roots = self._generate_roots()
        rho_sum = zero_vec(self.dim)
        for a in self.positive_roots:
            rho_sum = vadd(rho_sum, a)
        self.rho: Vec = vscale(rho_sum, Fraction(1, 2))
        rho_fw = zero_vec(self.dim)
        for w in self.fundamental_weights:
            rho_fw = vadd(rho_fw, w)
        if self.rho != rho_fw:
            raise AssertionError("rho mismatch: half-sum of positive roots != sum of "
                                 "fundamental weights")

        self.highest_roots = tuple(self._factor_highest(i) for i in range(len(factors)))
        self.dual_coxeter = tuple(DUAL_COXETER[f](r) for f, r in factors)
        for theta, h in zip(self.highest_roots, self.dual_coxeter):
            if 1 + self.inner(self.rho, theta) != h:
                raise AssertionError("dual Coxeter number disagrees with 1 + (rho, theta)")
        self.weyl_order = 1
        for f, r in factors:
            self.weyl_order *= _weyl_order(f, r)

    # -- basics ------------------------------------------------------------

    def inner(self, x: Vec, y: Vec) -> Fraction:
        """Invariant bilinear form; long roots of each factor have length^2 2."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError(f"dimension mismatch: expected vectors of length {self.dim}")
        return sum(g * a * b for g, a, b in zip(self.gram_diag, x, y))

    def _cartan_entry(self, i, j):
        a, b = self.simple_roots[i], self.simple_roots[j]
        val = 2 * self.inner(a, b) / self.inner(b, b)
        if val.denominator != 1:
            raise AssertionError("non-integer Cartan entry")
        return int(val)

    def _combine(self, coeffs) -> Vec:
        v = zero_vec(self.dim)
        for c, a in zip(coeffs, self.simple_roots):
            if c:
                v = vadd(v, vscale(a, c))
        return v

    def simple_coefficients(self, v: Vec):
        """Coordinates of v in the simple-root basis (requires v in the root span)."""
        if v in self._coeff_cache:
            return self._coeff_cache[v]
        rhs = [self.inner(v, a) for a in self.simple_roots]
        coeffs = tuple(sum(self._gram_inv[i][j] * rhs[j] for j in range(self.rank))
                       for i in range(self.rank))
        if self._combine(coeffs) != v:
            raise ValueError("vector does not lie in the span of the simple roots")
        self._coeff_cache[v] = coeffs
        return coeffs

    def height(self, v: Vec) -> Fraction:
        return sum(self.simple_coefficients(v))

    def _generate_roots(self):
        roots = set(self.simple_roots) | {vneg(a) for a in self.simple_roots}
        frontier = list(roots)
        while frontier:
            nxt = []
            for v in frontier:
                for a in self.simple_roots:
                    r = self.reflect(v, a)
                    if r not in roots:
                        roots.add(r)
                        nxt.append(r)
            frontier = nxt
        positive = []
        for v in roots:
            coeffs = self.simple_coefficients(v)
            if any(c.denominator != 1 for c in coeffs):
                raise AssertionError("root with non-integer simple coordinates")
            if all(c >= 0 for c in coeffs):
                positive.append(v)
        if 2 * len(positive) != len(roots):
            raise AssertionError("positive roots do not split the root set in half")
        positive.sort(key=lambda v: (self.height(v), v))
        return frozenset(roots), tuple(positive)

    def is_root(self, v: Vec) -> bool:
        return v in self._root_set

    @property
    def roots(self):
        return self._root_set

    def _factor_highest(self, fi):
        (s0, s1), _ = self.factor_slices[fi]
        best = None
        for v in self.positive_roots:
            coeffs = self.simple_coefficients(v)
            if any(coeffs[i] for i in range(s0, s1)) and \
               all(coeffs[i] == 0 for i in range(self.rank) if not s0 <= i < s1):
                if best is None or self.height(v) > self.height(best):
                    best = v
        if self.inner(best, best) != 2:
            raise AssertionError("highest root is not normalized to length^2 = 2")
        return best

    # -- weights -----------------------------------------------------------

    def dynkin_labels(self, v: Vec):
        return tuple(2 * self.inner(v, a) / self.inner(a, a) for a in self.simple_roots)

    def weight_from_labels(self, labels) -> Vec:
        if len(labels) != self.rank:
            raise ValueError(f"expected {self.rank} Dynkin labels, got {len(labels)}")
        v = zero_vec(self.dim)
        for m, w in zip(labels, self.fundamental_weights):
            if m:
                v = vadd(v, vscale(w, m))
        return v

    def is_dominant(self, v: Vec) -> bool:
        return all(self.inner(v, a) >= 0 for a in self.simple_roots)

    def is_dominant_integral(self, v: Vec) -> bool:
        labels = self.dynkin_labels(v)
        return all(m.denominator == 1 and m >= 0 for m in labels)

    def reflect(self, v: Vec, alpha: Vec) -> Vec:
        c = 2 * self.inner(v, alpha) / self.inner(alpha, alpha)
        return vsub(v, vscale(alpha, c))

    def dominant_representative(self, v: Vec):
        """(dominant weight, sign, regular).  Sign is the parity of the word used;
        it is only meaningful when the weight is regular."""
        sign = 1
        cur = v
        while True:
            for a in self.simple_roots:
                if self.inner(cur, a) < 0:
                    cur = self.reflect(cur, a)
                    sign = -sign
                    break
            else:
                break
        regular = all(self.inner(cur, a) != 0 for a in self.simple_roots)
        return cur, sign, regular

    def weyl_orbit(self, v: Vec):
        """Full Weyl orbit as [(weight, sign)], signs relative to the dominant
        representative.  Signs are contractually meaningful for regular weights
        only (a stabilized weight admits representatives of both parities)."""
        dom, _, _ = self.dominant_representative(v)
        seen = {dom: 1}
        frontier = [dom]
        while frontier:
            nxt = []
            for w in frontier:
                s = seen[w]
                for a in self.simple_roots:
                    r = self.reflect(w, a)
                    if r not in seen:
                        if len(seen) >= MAX_ORBIT:
                            raise ValueError(f"Weyl orbit exceeds cap {MAX_ORBIT}")
                        seen[r] = -s
                        nxt.append(r)
            frontier = nxt
        return sorted(seen.items())

    def coroot(self, alpha: Vec) -> Vec:
        return vscale(alpha, Fraction(2) / self.inner(alpha, alpha))

    def coroot_lattice_basis(self):
        return tuple(self.coroot(a) for a in self.simple_roots)

    # -- subsystems ----------------------------------------------------------

    def root_subsystem(self, subset):
        """Abstract root system of a closed subset of roots, plus the images of
        its simple roots in ambient coordinates.

        Returns (sub_rs, simple_images) where simple_images[i] realizes the
        i-th simple root of sub_rs.  The subset must contain only roots, be
        closed under negation, and closed under addition inside the root set.
        """
        sub = set(subset)
        for v in sub:
            if v not in self._root_set:
                raise ValueError(f"{v} is not a root")
            if vneg(v) not in sub:
                raise ValueError(f"subset not closed under negation at {v}")
        for x, y in itertools.combinations(sub, 2):
            s = vadd(x, y)
            if s in self._root_set and s not in sub and s != zero_vec(self.dim):
                raise ValueError(f"subset not closed under addition: {x} + {y}")
        pos = [v for v in sub if v in set(self.positive_roots)]
        pos_set = set(pos)
        simples = [v for v in pos
                   if not any(vsub(v, w) in pos_set for w in pos if w != v)]
        simples.sort(key=lambda v: (self.height(v), v))
        family_perm = _identify_components(simples, self.inner)
        factors = [fr for fr, _ in family_perm]
        order = []
        for _, perm in family_perm:
            order.extend(perm)
        sub_rs = RootSystem(factors)
        images = tuple(simples[i] for i in order)
        # consistency: linear extension maps abstract positive roots into the subset
        for proot in sub_rs.positive_roots:
            coeffs = sub_rs.simple_coefficients(proot)
            img = zero_vec(self.dim)
            for c, im in zip(coeffs, images):
                img = vadd(img, vscale(im, c))
            if img not in sub:
                raise ValueError("closed subset is not a root subsystem "
                                 f"(missing image {img})")
        return sub_rs, images


def _cartan_of(vectors, inner):
    n = len(vectors)
    return [[int(2 * inner(vectors[i], vectors[j]) / inner(vectors[j], vectors[j]))
             for j in range(n)] for i in range(n)]


def _identify_components(simples, inner):
    """Split simple roots into connected components and identify each one.

    Returns a list of ((family, rank), index permutation into `simples`)
    ordered by component; the permutation realizes the standard Cartan matrix.
    """
    n = len(simples)
    adj = {i: set() for i in range(n)}
    for i in range(n):
        for j in range(n):
            if i != j and inner(simples[i], simples[j]) != 0:
                adj[i].add(j)
    seen = set()
    comps = []
    for i in range(n):
        if i in seen:
            continue
        comp = []
        stack = [i]
        seen.add(i)
        while stack:
            k = stack.pop()
            comp.append(k)
            for j in adj[k]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    out = []
    for comp in comps:
        out.append(_identify_one(comp, simples, inner))
    return out


_CANDIDATE_FAMILIES = {
    1: ["A"], 2: ["A", "B", "C", "G"], 3: ["A", "B", "C"],
    4: ["A", "B", "C", "D", "F"], 5: ["A", "B", "C", "D"],
    6: ["A", "B", "C", "D", "E"], 7: ["A", "B", "C", "D", "E"],
    8: ["A", "B", "C", "D", "E"],
}


def _identify_one(comp, simples, inner):
    r = len(comp)
    cart = _cartan_of([simples[i] for i in comp], inner)
    for fam in _CANDIDATE_FAMILIES[r]:
        try:
            rows, dim, scale = _simple_block(fam, r)
        except ValueError:
            continue
        ref = _cartan_of([tuple(row) for row in rows],
                         lambda x, y: scale * sum(a * b for a, b in zip(x, y)))
        for perm in itertools.permutations(range(r)):
            if all(cart[perm[i]][perm[j]] == ref[i][j]
                   for i in range(r) for j in range(r)):
                return (fam, r), [comp[perm[i]] for i in range(r)]
    raise ValueError("could not identify component type from Cartan matrix")


def build_root_system(spec) -> RootSystem:
    """Build the root system for a list of (family, rank) simple factors.

    Accepts [("G", 2)], [("A", 1), ("A", 1)], or a name string like "G2",
    "A1xA1".
    """
    if isinstance(spec, str):
        spec = parse_algebra_name(spec)
    return RootSystem(list(spec))


def parse_algebra_name(name: str):
    out = []
    for part in name.replace("+", "x").split("x"):
        part = part.strip()
        if len(part) < 2 or not part[0].isalpha() or not part[1:].isdigit():
            raise ValueError(f"cannot parse algebra name {part!r} (expected e.g. G2, A1xA1)")
        out.append((part[0].upper(), int(part[1:])))
    return out
