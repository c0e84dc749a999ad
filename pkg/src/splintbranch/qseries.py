"""Exact truncated q-series with rational exponents and lattice coefficients.

A series term is q^e * c where e is a Fraction (all exponents share a common
denominator) and c is either an integer or a FormalCharacter carrying lattice
elements (the formal e^{(xi,z)} content of a theta function; z is never
specialized).  Equality of two series means equality of every (exponent,
coefficient) pair up to the common cutoff, which is strictly stronger than
sampling z.

The verifiers check the affine denominator regrouping of a splint and its two
theta-function restatements as truncated series, reporting the first
discrepancy.  Theta sums run over the translation lattice of the affine Weyl
group (the coroot lattice) at level h-dual of the respective algebra, with
exponents in that algebra's intrinsic normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .rootsystem import (RootSystem, Vec, build_root_system,
                         lattice_points_in_ellipsoid, solve_linear, vadd,
                         vneg, vscale, zero_vec)
from .characters import FormalCharacter, weyl_denominator
from .splints import Splint


def _is_zero(c):
    return not c if isinstance(c, FormalCharacter) else c == 0


def _cadd(a, b):
    if isinstance(a, FormalCharacter) != isinstance(b, FormalCharacter):
        raise TypeError("cannot mix scalar and lattice coefficients additively")
    return a + b


def _cmul(a, b):
    if isinstance(a, FormalCharacter):
        if isinstance(b, FormalCharacter):
            return a * b
        return a.scale(b)
    if isinstance(b, FormalCharacter):
        return b.scale(a)
    return a * b


class QSeries:
    """Truncated formal series in q^(1/d) with exact coefficients."""

    __slots__ = ("terms", "cutoff", "denom")

    def __init__(self, terms, cutoff, denom=None):
        self.cutoff = Fraction(cutoff)
        self.terms: dict[Fraction, object] = {}
        d = 1
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = Fraction(e)
            if e > self.cutoff or _is_zero(c):
                continue
            if e in self.terms:
                c = _cadd(self.terms[e], c)
            if _is_zero(c):
                self.terms.pop(e, None)
            else:
                self.terms[e] = c
                d = d * e.denominator // math.gcd(d, e.denominator)
        if denom is not None:
            if any((e * denom).denominator != 1 for e in self.terms):
                raise ValueError(f"exponents do not share denominator {denom}")
            self.denom = denom
        else:
            self.denom = d

    @classmethod
    def one(cls, cutoff, lattice_dim=None):
        coeff = FormalCharacter.monomial(zero_vec(lattice_dim)) if lattice_dim is not None else 1
        return cls({Fraction(0): coeff}, cutoff)

    def is_lattice_mode(self):
        return any(isinstance(c, FormalCharacter) for c in self.terms.values())

    def items(self):
        return sorted(self.terms.items())

    def min_exponent(self):
        return min(self.terms) if self.terms else None

    def coefficient(self, e):
        return self.terms.get(Fraction(e), 0)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, QSeries) and self.terms == other.terms

    def __add__(self, other):
        cutoff = min(self.cutoff, other.cutoff)
        out = dict()
        for e, c in self.terms.items():
            if e <= cutoff:
                out[e] = c
        for e, c in other.terms.items():
            if e <= cutoff:
                out[e] = _cadd(out[e], c) if e in out else c
        return QSeries(out, cutoff)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: int):
        return QSeries({e: _cmul(v, c) for e, v in self.terms.items()}, self.cutoff)

    def __mul__(self, other):
        cutoff = min(self.cutoff, other.cutoff)
        acc: dict[Fraction, object] = {}
        for e1, c1 in self.terms.items():
            if e1 > cutoff:
                continue
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e > cutoff:
                    continue
                p = _cmul(c1, c2)
                acc[e] = _cadd(acc[e], p) if e in acc else p
        return QSeries(acc, cutoff)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = QSeries({Fraction(0): 1}, self.cutoff)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries({e + c: v for e, v in self.terms.items()}, self.cutoff + c)

    def truncate(self, cutoff) -> "QSeries":
        cutoff = Fraction(cutoff)
        return QSeries({e: v for e, v in self.terms.items() if e <= cutoff},
                       min(self.cutoff, cutoff))

    def __repr__(self):
        parts = [f"q^{e}*{c!r}" for e, c in self.items()[:6]]
        return "QSeries(" + " + ".join(parts) + (" ..." if len(self.terms) > 6 else "") + ")"


def compare_qseries(a: QSeries, b: QSeries):
    """None if equal up to the common cutoff, else (exponent, description) of
    the lowest discrepancy."""
    cutoff = min(a.cutoff, b.cutoff)
    at = {e: c for e, c in a.terms.items() if e <= cutoff}
    bt = {e: c for e, c in b.terms.items() if e <= cutoff}
    for e in sorted(set(at) | set(bt)):
        ca, cb = at.get(e), bt.get(e)
        if ca is None:
            return e, f"term q^{e} only on one side"
        if cb is None:
            return e, f"term q^{e} only on one side"
        if ca != cb:
            return e, f"coefficients at q^{e} differ"
    return None


# ---------------------------------------------------------------------------
# eta and theta


def euler_product(cutoff) -> QSeries:
    """prod_{n>=1} (1 - q^n), truncated."""
    cutoff = Fraction(cutoff)
    out = QSeries({Fraction(0): 1}, cutoff)
    n = 1
    while n <= cutoff:
        out = out * QSeries({Fraction(0): 1, Fraction(n): -1}, cutoff)
        n += 1
    return out


def eta(cutoff) -> QSeries:
    """Dedekind eta: q^{1/24} prod (1 - q^n), exponent denominator 24."""
    cutoff = Fraction(cutoff)
    if cutoff < Fraction(1, 24):
        return QSeries({}, cutoff, denom=24)
    return euler_product(cutoff - Fraction(1, 24)).shift(Fraction(1, 24))


def _lattice_sum(rs: RootSystem, basis, shift: Vec, level, cutoff, inner=None):
    """Sum of q^{level*(xi,xi)/2} e^{level*xi} over xi in (lattice + shift)."""
    inner = inner or rs.inner
    gram0 = [[inner(a, b) for b in basis] for a in basis]
    rhs = [inner(shift, a) for a in basis]
    center = solve_linear(gram0, rhs)
    gram = [[Fraction(level, 2) * x for x in row] for row in gram0]
    acc: dict[Fraction, FormalCharacter] = {}
    for coeffs in lattice_points_in_ellipsoid(gram, center, Fraction(cutoff)):
        xi = shift
        for c, b in zip(coeffs, basis):
            if c:
                xi = vadd(xi, vscale(b, c))
        e = Fraction(level) * inner(xi, xi) / 2
        kxi = vscale(xi, level)
        fc = acc.setdefault(e, FormalCharacter())
        fc.terms[kxi] = fc.terms.get(kxi, 0) + 1
    return acc


def theta(rs: RootSystem, lam: Vec, level: int, cutoff) -> QSeries:
    """Classical theta of the root lattice: sum over xi in Q + lam/level of
    q^{level(xi,xi)/2} carrying the lattice element level*xi."""
    if level < 1:
        raise ValueError("level must be >= 1")
    shift = vscale(lam, Fraction(1, level))
    acc = _lattice_sum(rs, rs.simple_roots, shift, level, cutoff)
    return QSeries(acc, cutoff)


# ---------------------------------------------------------------------------
# affine denominators as products


def _binomial(dim, exponent, weight, cutoff, sign=-1) -> QSeries:
    """1 + sign * q^exponent e^{weight} in lattice mode."""
    one = FormalCharacter.monomial(zero_vec(dim))
    mono = FormalCharacter.monomial(weight, sign)
    # list form so that exponent 0 merges with the constant term
    return QSeries([(Fraction(0), one), (Fraction(exponent), mono)], cutoff)


def root_string_product(dim, root: Vec, cutoff) -> QSeries:
    """(1 - e^{-a}) prod_{n>=1} (1 - q^n e^{-a})(1 - q^n e^{a}), truncated."""
    out = _binomial(dim, 0, vneg(root), cutoff)
    n = 1
    while n <= cutoff:
        out = out * _binomial(dim, n, vneg(root), cutoff)
        out = out * _binomial(dim, n, root, cutoff)
        n += 1
    return out


def jacobi_theta_sum(dim, root: Vec, cutoff) -> QSeries:
    """sum_m (-1)^m q^{m(m-1)/2} e^{-m a}: the triple-product expansion of
    euler_product * root_string_product for the same root."""
    terms = []
    m = 0
    while Fraction(m * (m - 1), 2) <= cutoff:
        terms.append((Fraction(m * (m - 1), 2),
                      FormalCharacter.monomial(vscale(root, -m), (-1) ** m)))
        if m > 0:
            mm = -m
            if Fraction(mm * (mm - 1), 2) <= cutoff:
                terms.append((Fraction(mm * (mm - 1), 2),
                              FormalCharacter.monomial(vscale(root, m), (-1) ** m)))
        m += 1
    return QSeries(terms, cutoff)


def denominator_product(rs: RootSystem, cutoff: int) -> QSeries:
    """Truncated product over positive affine roots with standard
    multiplicities (1 for real roots, rank for n*delta)."""
    out = QSeries({Fraction(0): weyl_denominator(rs)}, cutoff)
    for n in range(1, int(cutoff) + 1):
        qn = QSeries({Fraction(0): 1, Fraction(n): -1}, cutoff)
        out = out * qn ** rs.rank
        for a in rs.roots:
            out = out * _binomial(rs.dim, n, vneg(a), cutoff)
    return out


def _embedded_affinization(dim, pos_images, rank, cutoff) -> QSeries:
    """Affine denominator of a stem pushed into ambient coordinates: the
    images carry the e-content, the grading stays the stem's own."""
    out = QSeries.one(cutoff, lattice_dim=dim)
    for img in pos_images:
        out = out * _binomial(dim, 0, vneg(img), cutoff)
    for n in range(1, int(cutoff) + 1):
        qn = QSeries({Fraction(0): 1, Fraction(n): -1}, cutoff)
        out = out * qn ** rank
        for img in pos_images:
            out = out * _binomial(dim, n, vneg(img), cutoff)
            out = out * _binomial(dim, n, img, cutoff)
    return out


@dataclass
class IdentityReport:
    name: str
    passed: bool
    detail: str = ""
    first_mismatch: Fraction | None = None
    normalization: Fraction | None = None

    def __bool__(self):
        return self.passed


def _require_splint(s: Splint):
    # Verifiers treat mismatches as data, so a structurally broken splint gets
    # a fail report, not an exception; only degenerate input is rejected.
    if not s.phi1.pos_map or not s.phi2.pos_map:
        raise ValueError(f"{s.name}: trivial splint with an empty stem is rejected")


def verify_denominator_splint(s: Splint, cutoff: int) -> IdentityReport:
    """Affine Weyl denominator regrouping over the splint:

    D^(Delta_1) * D^(phi Delta_2) =
        D^(Delta) * prod_n (1-q^n)^(rank a + rank s - rank g),
    compared exactly as truncated lattice series."""
    _require_splint(s)
    rs = s.ambient
    lhs = (_embedded_affinization(rs.dim, list(s.phi1.pos_map.values()),
                                  s.phi1.source.rank, cutoff)
           * _embedded_affinization(rs.dim, list(s.phi2.pos_map.values()),
                                    s.phi2.source.rank, cutoff))
    extra = s.phi1.source.rank + s.phi2.source.rank - rs.rank
    rhs = denominator_product(rs, cutoff)
    if extra:
        phi_scalar = euler_product(cutoff)
        lat = QSeries({e: FormalCharacter.monomial(zero_vec(rs.dim), c)
                       for e, c in phi_scalar.terms.items()}, cutoff)
        rhs = rhs * lat ** extra
    mismatch = compare_qseries(lhs, rhs)
    if mismatch is None:
        return IdentityReport("denominator", True,
                              f"grades 0..{cutoff} agree, eta-power {extra}")
    return IdentityReport("denominator", False, mismatch[1], mismatch[0])


def _normalized_compare(name, lhs, rhs) -> IdentityReport:
    """Match the overall q-power at the lowest order, then require every
    remaining term to agree."""
    if not lhs.terms or not rhs.terms:
        return IdentityReport(name, False, "one side is empty")
    c = lhs.min_exponent() - rhs.min_exponent()
    rhs = rhs.shift(c) if c else rhs
    mismatch = compare_qseries(lhs, rhs)
    if mismatch is None:
        return IdentityReport(name, True, f"normalization q^{c}", normalization=c)
    return IdentityReport(name, False, mismatch[1], mismatch[0], normalization=c)


def verify_theta_products(s: Splint, cutoff) -> IdentityReport:
    """Product form of the per-root theta identity.

    Each theta/eta quotient is realized through the Jacobi triple product of
    its affine root string.  The left side multiplies the triple-product sums
    over both stems; the right side multiplies the explicit root-string
    products over all positive roots together with the Euler-product powers
    left over from the eta bookkeeping.  The overall q-power is matched at
    lowest order; all higher terms must agree."""
    _require_splint(s)
    rs = s.ambient
    dim = rs.dim
    lhs = QSeries.one(cutoff, lattice_dim=dim)
    for img in s.phi1.pos_map.values():
        lhs = lhs * jacobi_theta_sum(dim, img, cutoff)
    for img in s.phi2.pos_map.values():
        lhs = lhs * jacobi_theta_sum(dim, img, cutoff)
    npos = len(rs.positive_roots)
    phi_scalar = euler_product(cutoff) ** npos
    rhs = QSeries({e: FormalCharacter.monomial(zero_vec(dim), c)
                   for e, c in phi_scalar.terms.items()}, cutoff)
    for a in rs.positive_roots:
        rhs = rhs * root_string_product(dim, a, cutoff)
    return _normalized_compare("theta-product", lhs, rhs)


def theta_alternating_sum(src: RootSystem, push, cutoff, drop_last=False) -> QSeries:
    """prod over simple factors of sum_{w in W_f} eps(w) Theta_{w rho_f},
    with Theta at level h-dual of the factor over its coroot lattice.

    Exponents use the factor's intrinsic normalization; the lattice content
    h-dual * xi is pushed into ambient coordinates by `push` (or kept in the
    source coordinates when push is None).  drop_last omits one Weyl term of
    the last factor (negative control)."""
    if push is None:
        push = lambda v: v
    dim = len(push(zero_vec(src.dim)))
    out = QSeries.one(cutoff, lattice_dim=dim)
    for fi, (fam, rank) in enumerate(src.factors):
        frs = build_root_system([(fam, rank)])
        c0 = src.factor_slices[fi][1][0]
        hvee = frs.dual_coxeter[0]

        def inject(v):
            full = list(zero_vec(src.dim))
            full[c0:c0 + frs.dim] = v
            return push(tuple(full))

        orbit = frs.weyl_orbit(frs.rho)
        if drop_last and fi == len(src.factors) - 1:
            orbit = orbit[:-1]
        factor_sum = QSeries({}, cutoff)
        basis = frs.coroot_lattice_basis()
        for wrho, sign in orbit:
            shift = vscale(wrho, Fraction(1, hvee))
            acc = _lattice_sum(frs, basis, shift, hvee, cutoff)
            terms = {e: fc.map_support(inject).scale(sign) for e, fc in acc.items()}
            factor_sum = factor_sum + QSeries(terms, cutoff)
        out = out * factor_sum
    return out


def verify_theta_sums(s: Splint, cutoff, drop_term=False) -> IdentityReport:
    """Alternating theta-sum identity of the splint:

      (sum_{v in W_a} eps(v) Theta_{v rho_a}) *
      (sum_{u in W_s} eps(u) Theta_{phi(u rho_s)})
        = eta^(rank a + rank s - rank g) *
          (sum_{w in W_g} eps(w) Theta_{w rho_g})

    with theta levels the dual Coxeter numbers and lattices the coroot
    lattices.  The eta power on the right restores the imaginary-root
    mismatch of the regrouped denominators; without it the identity fails
    beyond the lowest order whenever rank a + rank s > rank g."""
    _require_splint(s)
    rs = s.ambient
    lhs = (theta_alternating_sum(s.phi1.source, s.phi1.map_weight, cutoff)
           * theta_alternating_sum(s.phi2.source, s.phi2.map_weight, cutoff))
    rhs = theta_alternating_sum(rs, None, cutoff, drop_last=drop_term)
    extra = s.phi1.source.rank + s.phi2.source.rank - rs.rank
    if extra:
        eta_scalar = eta(cutoff) ** extra
        lat = QSeries({e: FormalCharacter.monomial(zero_vec(rs.dim), c)
                       for e, c in eta_scalar.terms.items()}, cutoff)
        rhs = rhs * lat
    return _normalized_compare("theta-sum", lhs, rhs)
