"""Formal characters of finite-dimensional irreducible modules.

A formal character is a finite integer combination of lattice points e^v,
stored as a dict from coordinate tuples to nonzero integers.  Weight
multiplicities come from the Freudenthal recursion; the Weyl quotient
formula is implemented independently as exact group-ring division, so the
two routes cross-check each other.
"""

from __future__ import annotations

import heapq
import threading
from fractions import Fraction

from .rootsystem import RootSystem, Vec, vadd, vsub, vneg, vscale, zero_vec


class FormalCharacter:
    """Element of the group ring of the weight lattice (finite support)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[Vec, int] = {}
        if terms:
            for v, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    self.terms[v] = self.terms.get(v, 0) + c
                    if not self.terms[v]:
                        del self.terms[v]

    @classmethod
    def monomial(cls, v: Vec, c: int = 1):
        fc = cls()
        if c:
            fc.terms[v] = c
        return fc

    @classmethod
    def zero(cls):
        return cls()

    def copy(self):
        fc = FormalCharacter()
        fc.terms = dict(self.terms)
        return fc

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalCharacter) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("FormalCharacter is unhashable")

    def get(self, v: Vec) -> int:
        return self.terms.get(v, 0)

    def items(self):
        return self.terms.items()

    def support(self):
        return self.terms.keys()

    def total(self) -> int:
        return sum(self.terms.values())

    def __add__(self, other):
        out = self.copy()
        out.iadd(other)
        return out

    def iadd(self, other, scale: int = 1):
        for v, c in other.terms.items():
            n = self.terms.get(v, 0) + scale * c
            if n:
                self.terms[v] = n
            else:
                self.terms.pop(v, None)
        return self

    def __sub__(self, other):
        out = self.copy()
        out.iadd(other, -1)
        return out

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int):
        out = FormalCharacter()
        if c:
            out.terms = {v: c * m for v, m in self.terms.items()}
        return out

    def __mul__(self, other):
        """Group ring product (convolution)."""
        out = FormalCharacter()
        t = out.terms
        for v, c in self.terms.items():
            for w, d in other.terms.items():
                u = vadd(v, w)
                n = t.get(u, 0) + c * d
                if n:
                    t[u] = n
                else:
                    del t[u]
        return out

    def shift(self, v: Vec):
        out = FormalCharacter()
        out.terms = {vadd(w, v): c for w, c in self.terms.items()}
        return out

    def map_support(self, fn):
        out = FormalCharacter()
        for v, c in self.terms.items():
            u = fn(v)
            n = out.terms.get(u, 0) + c
            if n:
                out.terms[u] = n
            else:
                del out.terms[u]
        return out

    def leading(self, key):
        """(weight, coefficient) maximizing key over the support."""
        v = max(self.terms, key=key)
        return v, self.terms[v]

    def __repr__(self):
        parts = [f"{c}*e{tuple(map(str, v))}" for v, c in sorted(self.terms.items())]
        return "FormalCharacter(" + " + ".join(parts[:8]) + (" ..." if len(parts) > 8 else "") + ")"


def order_key(rs: RootSystem):
    """Total order compatible with the root order: (rho-pairing, lex)."""
    rho = rs.rho
    return lambda v: (rs.inner(v, rho), v)


def _require_dominant_integral(rs, mu):
    labels = rs.dynkin_labels(mu)
    if any(m.denominator != 1 for m in labels):
        raise ValueError(f"weight with labels {labels} is not integral")
    if any(m < 0 for m in labels):
        raise ValueError(f"weight with labels {labels} is not dominant")


def singular_element(rs: RootSystem, mu: Vec) -> FormalCharacter:
    """Alternating Weyl-orbit sum of mu+rho, shifted back by rho.

    Exactly |W| terms with coefficients +-1 (mu+rho is regular for dominant
    integral mu).
    """
    _require_dominant_integral(rs, mu)
    shifted = vadd(mu, rs.rho)
    fc = FormalCharacter()
    for w, sign in rs.weyl_orbit(shifted):
        fc.terms[vsub(w, rs.rho)] = sign
    if len(fc) != rs.weyl_order:
        raise AssertionError("singular element has wrong number of terms")
    return fc


def weyl_denominator(rs: RootSystem) -> FormalCharacter:
    """Product of (1 - e^{-alpha}) over positive roots, fully expanded."""
    prod = FormalCharacter.monomial(zero_vec(rs.dim))
    for a in rs.positive_roots:
        factor = FormalCharacter({zero_vec(rs.dim): 1, vneg(a): -1})
        prod = prod * factor
    return prod


def divide_exact(numer: FormalCharacter, denom: FormalCharacter, key) -> FormalCharacter:
    """Exact group-ring division, eliminating leading terms under `key`.

    The leading coefficient of denom must be a unit (+-1); raises if a
    nonzero remainder survives.  A lazy-deletion heap tracks the leading
    remainder term: an eliminated weight can never re-enter (all insertions
    sit strictly below the current leading term).
    """
    lead_v, lead_c = denom.leading(key)
    if lead_c not in (1, -1):
        raise ValueError("denominator leading coefficient is not a unit")

    def heap_key(v):
        f, vec = key(v)
        return (-f, tuple(-x for x in vec), v)

    rem = dict(numer.terms)
    heap = [heap_key(v) for v in rem]
    heapq.heapify(heap)
    quot = FormalCharacter()
    dterms = denom.terms
    steps = 0
    while heap:
        v = heapq.heappop(heap)[2]
        c = rem.get(v)
        if not c:
            rem.pop(v, None)
            continue
        q = c * lead_c
        qv = vsub(v, lead_v)
        quot.terms[qv] = quot.terms.get(qv, 0) + q
        for w, d in dterms.items():
            u = vadd(qv, w)
            n = rem.get(u, 0) - q * d
            if n:
                if u not in rem:
                    heapq.heappush(heap, heap_key(u))
                rem[u] = n
            else:
                rem.pop(u, None)
        steps += 1
        if steps > 2_000_000:
            raise ArithmeticError("group-ring division does not terminate")
    if any(rem.values()):
        raise ArithmeticError("nonzero remainder in group-ring division")
    return quot


# character caches, keyed by (algebra name, Dynkin labels)
_dominant_cache: dict = {}
_cache_lock = threading.Lock()


def dominant_multiplicities(rs: RootSystem, mu: Vec) -> dict[Vec, int]:
    """Multiplicities of the dominant weights of L^mu (Freudenthal recursion)."""
    _require_dominant_integral(rs, mu)
    key = (rs.name, tuple(rs.dynkin_labels(mu)))
    hit = _dominant_cache.get(key)
    if hit is not None:
        return hit

    rho = rs.rho
    mu_rho = vadd(mu, rho)
    top = rs.inner(mu_rho, mu_rho)
    budget = top - rs.inner(rho, rho)
    weights = _dominant_weights_below(rs, mu, budget)
    # increasing distance from mu, so dependencies are already resolved
    weights.sort(key=lambda t: t[1])

    mult: dict[Vec, int] = {}
    for nu, depth in weights:
        if depth == 0:
            mult[nu] = 1
            continue
        nu_rho = vadd(nu, rho)
        denom = top - rs.inner(nu_rho, nu_rho)
        acc = Fraction(0)
        for a in rs.positive_roots:
            j = 1
            while True:
                w = vadd(nu, vscale(a, j))
                coeffs = rs.simple_coefficients(vsub(mu, w))
                if any(c < 0 for c in coeffs):
                    break
                w_rho = vadd(w, rho)
                if rs.inner(w_rho, w_rho) > top:
                    break
                dom, _, _ = rs.dominant_representative(w)
                m = mult.get(dom, 0)
                if m:
                    acc += m * rs.inner(w, a)
                j += 1
        val = 2 * acc / denom
        if val.denominator != 1 or val <= 0:
            raise AssertionError(f"Freudenthal produced non-positive multiplicity {val}")
        mult[nu] = int(val)

    with _cache_lock:
        _dominant_cache[key] = mult
    return mult


def _dominant_weights_below(rs, mu, budget):
    """All dominant nu with mu - nu in the positive root cone, with cone depth.

    Uses the bound sum_i c_i (mu+rho, alpha_i) <= (mu+rho)^2 - rho^2 valid for
    dominant nu = mu - sum c_i alpha_i.
    """
    mu_rho = vadd(mu, rs.rho)
    costs = [rs.inner(mu_rho, a) for a in rs.simple_roots]
    out = []
    coeffs = [0] * rs.rank

    def rec(i, remaining):
        if i == rs.rank:
            nu = mu
            for c, a in zip(coeffs, rs.simple_roots):
                if c:
                    nu = vsub(nu, vscale(a, c))
            if rs.is_dominant(nu):
                out.append((nu, sum(coeffs)))
            return
        c = 0
        while c * costs[i] <= remaining:
            coeffs[i] = c
            rec(i + 1, remaining - c * costs[i])
            c += 1
        coeffs[i] = 0

    rec(0, budget)
    return out


def freudenthal_character(rs: RootSystem, mu: Vec) -> FormalCharacter:
    """Full weight system of L^mu with exact multiplicities."""
    fc = FormalCharacter()
    for nu, m in dominant_multiplicities(rs, mu).items():
        for w, _ in rs.weyl_orbit(nu):
            fc.terms[w] = m
    return fc


def character_via_weyl(rs: RootSystem, mu: Vec) -> FormalCharacter:
    """ch L^mu as the exact quotient singular element / Weyl denominator."""
    return divide_exact(singular_element(rs, mu), weyl_denominator(rs), order_key(rs))


def weyl_dimension(rs: RootSystem, mu: Vec) -> int:
    _require_dominant_integral(rs, mu)
    mu_rho = vadd(mu, rs.rho)
    val = Fraction(1)
    for a in rs.positive_roots:
        val *= rs.inner(mu_rho, a) / rs.inner(rs.rho, a)
    if val.denominator != 1:
        raise AssertionError("Weyl dimension is not an integer")
    return int(val)


def decompose_character(rs: RootSystem, fc: FormalCharacter) -> dict[Vec, int]:
    """Write a character as a nonnegative sum of irreducibles of rs.

    Repeatedly subtracts the irreducible with the highest remaining weight.
    Raises if a leading weight is non-dominant or has negative coefficient,
    which signals that fc is not a genuine module character.
    """
    key = order_key(rs)
    rem = fc.copy()
    table: dict[Vec, int] = {}
    while rem:
        v, c = rem.leading(key)
        if not rs.is_dominant_integral(v):
            raise ValueError(f"leading weight {v} is not dominant: not a module character")
        if c < 0:
            raise ValueError(f"negative leading coefficient {c} at {v}")
        table[v] = c
        rem.iadd(freudenthal_character(rs, v), -c)
    return table
