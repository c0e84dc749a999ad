"""Root system embeddings, splints, injection fans and splint branching.

A splint presents the ambient root set as a disjoint union of the images of
two embeddings.  The first image is required to be a closed root subsystem
(the regular subalgebra the module is branched to); the second is the stem
whose module weight multiplicities reproduce branching coefficients through
the tilde-weight map.  The shipped catalog is re-verified on every load, and
the tilde-weight shortcut is validated empirically against the brute-force
subtraction route.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .rootsystem import (RootSystem, Vec, build_root_system, vadd, vsub, vneg,
                         vscale, zero_vec)
from .characters import (FormalCharacter, dominant_multiplicities,
                         freudenthal_character, order_key, weyl_dimension)


class Embedding:
    """Bijection from the roots of `source` onto a subset of the roots of
    `target`, stored on positive roots and extended by negation."""

    def __init__(self, source: RootSystem, target: RootSystem, pos_map):
        self.source = source
        self.target = target
        self.pos_map: dict[Vec, Vec] = dict(pos_map)
        missing = set(source.positive_roots) - set(self.pos_map)
        if missing:
            raise ValueError(f"embedding map misses source positive roots {missing}")
        self.simple_images = tuple(self.pos_map[a] for a in source.simple_roots)

    def image(self, root: Vec) -> Vec:
        if root in self.pos_map:
            return self.pos_map[root]
        return vneg(self.pos_map[vneg(root)])

    def image_roots(self):
        """All images, negative half included."""
        out = set()
        for v in self.pos_map.values():
            out.add(v)
            out.add(vneg(v))
        return out

    def map_weight(self, v: Vec) -> Vec:
        """Linear extension to the source root span (simple images as basis)."""
        coeffs = self.source.simple_coefficients(v)
        out = zero_vec(self.target.dim)
        for c, img in zip(coeffs, self.simple_images):
            if c:
                out = vadd(out, vscale(img, c))
        return out


@dataclass
class Report:
    passed: bool
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def check_embedding(e: Embedding) -> Report:
    """Verify bijectivity onto the image, negation-equivariance and additivity."""
    problems = []
    images = list(e.pos_map.values())
    for img in images:
        if not e.target.is_root(img):
            problems.append(f"image {img} is not a root of {e.target.name}")
    if len(set(images)) != len(images):
        problems.append("positive-root images are not distinct")
    if set(images) & {vneg(v) for v in images}:
        problems.append("an image coincides with the negative of another image")
    src_roots = set(e.source.roots)
    for x, y in itertools.product(src_roots, repeat=2):
        s = vadd(x, y)
        if s in src_roots:
            if vadd(e.image(x), e.image(y)) != e.image(s):
                problems.append(f"additivity broken: phi({x}) + phi({y}) != phi({x}+{y})")
    return Report(not problems, problems)


@dataclass
class Splint:
    """Splint of the ambient root system: Delta = Im(phi1) u Im(phi2)."""
    name: str
    ambient: RootSystem
    phi1: Embedding            # subalgebra stem (image must be closed)
    phi2: Embedding            # complementary stem
    correspondence: tuple      # ambient fundamental index -> stem fundamental index

    def __post_init__(self):
        self._view = None
        self._tilde_probe = None

    @property
    def subalgebra_roots(self):
        return frozenset(self.phi1.image_roots())

    @property
    def stem_roots(self):
        return frozenset(self.phi2.image_roots())

    def subalgebra_view(self) -> "SubalgebraView":
        if self._view is None:
            self._view = SubalgebraView(self.ambient, self.phi1)
        return self._view

    def branching_status(self, max_label: int | None = None) -> Report:
        """Empirical tilde-weight validation; cached.  Splints that fail are
        kept in the catalog but flagged not applicable for branching."""
        if max_label is not None:
            return probe_tilde_branching(self, max_label)
        if self._tilde_probe is None:
            default = 2 if self.ambient.rank <= 2 else 1
            self._tilde_probe = probe_tilde_branching(self, default)
        return self._tilde_probe


def check_splint(s: Splint) -> Report:
    """Disjoint-union, rank, nonempty-stem and subsystem-closure conditions."""
    problems = []
    for label, emb in (("subalgebra", s.phi1), ("stem", s.phi2)):
        if emb.target is not s.ambient:
            problems.append(f"{label} embedding targets a different root system")
        rep = check_embedding(emb)
        problems.extend(f"{label}: {p}" for p in rep.problems)
        if not emb.pos_map:
            problems.append(f"{label} stem is empty")
        if emb.source.rank > s.ambient.rank:
            problems.append(f"{label} rank exceeds ambient rank")
    im1, im2 = s.phi1.image_roots(), s.phi2.image_roots()
    if im1 & im2:
        problems.append(f"images intersect: {sorted(im1 & im2)[:3]}")
    if im1 | im2 != set(s.ambient.roots):
        missing = set(s.ambient.roots) - (im1 | im2)
        problems.append(f"union misses roots {sorted(missing)[:3]}")
    for x, y in itertools.combinations(im1, 2):
        t = vadd(x, y)
        if s.ambient.is_root(t) and t not in im1:
            problems.append(f"subalgebra image not closed: {x} + {y}")
            break
    return Report(not problems, problems)


# ---------------------------------------------------------------------------
# catalog


def _parse_embedding(entry, ambient: RootSystem) -> Embedding:
    src = build_root_system(entry["source"])
    pos_map = {}
    for coeffs, img in entry["map"]:
        root = zero_vec(src.dim)
        for c, a in zip(coeffs, src.simple_roots):
            if c:
                root = vadd(root, vscale(a, c))
        if not src.is_root(root):
            raise ValueError(f"catalog: {coeffs} is not a root of {src.name}")
        pos_map[root] = tuple(Fraction(x) for x in img)
    return Embedding(src, ambient, pos_map)


def splint_from_dict(entry, verify: bool = True) -> Splint:
    ambient = build_root_system(entry["ambient"])
    s = Splint(
        name=entry["name"],
        ambient=ambient,
        phi1=_parse_embedding(entry["subalgebra"], ambient),
        phi2=_parse_embedding(entry["stem"], ambient),
        correspondence=tuple(entry["correspondence"]),
    )
    if verify:
        rep = check_splint(s)
        if not rep:
            raise ValueError(f"splint {entry['name']} fails verification: {rep.problems}")
    return s


def load_splint_file(path, verify: bool = False) -> Splint:
    """Load a user-supplied splint file; by default without verification so
    that broken data can still be run through the identity checkers."""
    with open(path) as fh:
        return splint_from_dict(json.load(fh), verify=verify)


def _catalog_entries():
    text = resources.files("splintbranch").joinpath("data/splint_catalog.json").read_text()
    return json.loads(text)["splints"]


def splint_catalog(rs: RootSystem) -> list[Splint]:
    """Catalog splints whose ambient system matches rs, verified on load.

    Unsupported algebras yield an empty list; in particular any rank-1 system
    has no proper splint with nonempty stems.
    """
    out = []
    for entry in _catalog_entries():
        if tuple(build_root_system(entry["ambient"]).factors) == tuple(rs.factors):
            out.append(splint_from_dict(entry))
    return out


def find_splint(name: str) -> Splint:
    """Resolve a catalog splint by full name like 'G2:A2A2'."""
    for entry in _catalog_entries():
        if entry["name"] == name:
            return splint_from_dict(entry)
    known = ", ".join(e["name"] for e in _catalog_entries())
    raise KeyError(f"unknown splint {name!r}; catalog has: {known}")


# ---------------------------------------------------------------------------
# injection fan


@dataclass
class Fan:
    """Signed coefficients s(gamma) with
    prod_{beta in stem+} (1 - e^{-phi(beta)}) = - sum_gamma s(gamma) e^{-gamma}."""
    splint_name: str
    coefficients: dict


def fan_coefficients(s: Splint) -> Fan:
    rep = check_splint(s)
    if not rep:
        raise ValueError(f"not a splint: {rep.problems}")
    dim = s.ambient.dim
    prod = FormalCharacter.monomial(zero_vec(dim))
    for beta in s.phi2.source.positive_roots:
        img = s.phi2.pos_map[beta]
        prod = prod * FormalCharacter({zero_vec(dim): 1, vneg(img): -1})
    coeffs = {vneg(v): -c for v, c in prod.items()}
    return Fan(s.name, coeffs)


# ---------------------------------------------------------------------------
# branching


def tilde_weight(s: Splint, mu: Vec) -> Vec:
    """Stem weight carrying the Dynkin labels of mu under the stored
    index correspondence.  Requires rank(stem) == rank(ambient)."""
    stem = s.phi2.source
    if stem.rank != s.ambient.rank:
        raise ValueError(f"stem rank {stem.rank} != ambient rank {s.ambient.rank}; "
                         "tilde weight undefined")
    labels = s.ambient.dynkin_labels(mu)
    if any(m.denominator != 1 or m < 0 for m in labels):
        raise ValueError(f"weight with labels {labels} is not dominant integral")
    stem_labels = [0] * stem.rank
    for k, m in enumerate(labels):
        stem_labels[s.correspondence[k]] = int(m)
    return stem.weight_from_labels(stem_labels)


def branch_via_splint(s: Splint, mu: Vec, restrict_dominant: bool = False):
    """Branching table from stem weight multiplicities (tilde-weight rule).

    Every stem weight nu~ of the stem module contributes the coefficient
    b at nu = mu - phi2(mu~ - nu~).  With restrict_dominant=True only
    subalgebra-dominant nu are returned.
    """
    stem = s.phi2.source
    mu_t = tilde_weight(s, mu)
    view = s.subalgebra_view()
    table: dict[Vec, int] = {}
    for nu_t, m in dominant_multiplicities(stem, mu_t).items():
        for w, _ in stem.weyl_orbit(nu_t):
            nu = vsub(mu, s.phi2.map_weight(vsub(mu_t, w)))
            if restrict_dominant and not view.is_dominant(nu):
                continue
            if nu in table:
                raise AssertionError("stem weights collide in ambient space")
            table[nu] = m
    return table


class SubalgebraView:
    """Regular subalgebra of the ambient algebra sharing its Cartan subalgebra.

    Weights restrict identically; subalgebra modules are labeled by ambient
    vectors that are dominant for the subsystem's positive roots.
    """

    def __init__(self, ambient: RootSystem, emb: Embedding):
        self.ambient = ambient
        self.sub = emb.source
        self.emb = emb
        self._rel_chars: dict[tuple, list] = {}

    def labels(self, nu: Vec):
        return tuple(2 * self.ambient.inner(nu, img) / self.ambient.inner(img, img)
                     for img in self.emb.simple_images)

    def is_dominant(self, nu: Vec) -> bool:
        return all(m >= 0 for m in self.labels(nu))

    def is_dominant_integral(self, nu: Vec) -> bool:
        return all(m.denominator == 1 and m >= 0 for m in self.labels(nu))

    def _relative_character(self, labels):
        """Subalgebra module weights as offsets from the highest weight."""
        if labels not in self._rel_chars:
            hw = self.sub.weight_from_labels(labels)
            offsets = []
            for nu_t, m in dominant_multiplicities(self.sub, hw).items():
                for w, _ in self.sub.weyl_orbit(nu_t):
                    offsets.append((self.emb.map_weight(vsub(hw, w)), m))
            self._rel_chars[labels] = offsets
        return self._rel_chars[labels]

    def character(self, nu: Vec) -> FormalCharacter:
        """Character of the subalgebra module with highest weight nu, written
        in ambient coordinates."""
        labels = self.labels(nu)
        if any(m.denominator != 1 or m < 0 for m in labels):
            raise ValueError(f"{nu} is not subalgebra-dominant integral")
        ilabels = tuple(int(m) for m in labels)
        fc = FormalCharacter()
        for off, m in self._relative_character(ilabels):
            fc.terms[vsub(nu, off)] = m
        return fc

    def dimension(self, nu: Vec) -> int:
        labels = tuple(int(m) for m in self.labels(nu))
        return weyl_dimension(self.sub, self.sub.weight_from_labels(labels))

    def decompose(self, fc: FormalCharacter) -> dict[Vec, int]:
        """Exhaust a character by subtracting subalgebra modules at the highest
        remaining weight.  Raises on a non-dominant leading weight or a
        negative leading coefficient (internal-consistency failure)."""
        key = order_key(self.ambient)
        rem = fc.copy()
        table: dict[Vec, int] = {}
        while rem:
            v, c = rem.leading(key)
            if not self.is_dominant_integral(v):
                raise ValueError(f"leading weight {v} is not subalgebra-dominant")
            if c < 0:
                raise ValueError(f"negative leading coefficient {c} at {v}")
            table[v] = c
            rem.iadd(self.character(v), -c)
        return table


def branch_direct(rs: RootSystem, sub, mu: Vec) -> dict[Vec, int]:
    """Brute-force branching of L^mu to a regular subalgebra.

    `sub` is a SubalgebraView, an Embedding into rs, or an iterable of roots
    forming a closed subsystem.  This is the oracle the tilde-weight shortcut
    is validated against.
    """
    view = _as_view(rs, sub)
    return view.decompose(freudenthal_character(rs, mu))


def _as_view(rs, sub) -> SubalgebraView:
    if isinstance(sub, SubalgebraView):
        return sub
    if isinstance(sub, Embedding):
        return SubalgebraView(rs, sub)
    if isinstance(sub, tuple) and len(sub) == 2 and isinstance(sub[0], RootSystem):
        sub_rs, images = sub            # as returned by root_subsystem
    else:
        sub_rs, images = rs.root_subsystem(sub)
    pos_map = {}
    for proot in sub_rs.positive_roots:
        coeffs = sub_rs.simple_coefficients(proot)
        img = zero_vec(rs.dim)
        for c, im in zip(coeffs, images):
            img = vadd(img, vscale(im, c))
        pos_map[proot] = img
    return SubalgebraView(rs, Embedding(sub_rs, rs, pos_map))


def probe_tilde_branching(s: Splint, max_label: int) -> Report:
    """Compare tilde-weight branching against the subtraction oracle for all
    dominant weights with Dynkin labels <= max_label."""
    problems = []
    rs = s.ambient
    view = s.subalgebra_view()
    for labels in itertools.product(range(max_label + 1), repeat=rs.rank):
        mu = rs.weight_from_labels(labels)
        try:
            shortcut = branch_via_splint(s, mu)
        except ValueError as exc:
            return Report(False, [f"labels {labels}: {exc}"])
        bad = [nu for nu in shortcut if not view.is_dominant(nu)]
        if bad:
            problems.append(f"labels {labels}: non-dominant output {bad[:2]}")
            continue
        direct = branch_direct(rs, view, mu)
        if shortcut != direct:
            problems.append(f"labels {labels}: shortcut != direct oracle")
            continue
        total = sum(b * view.dimension(nu) for nu, b in direct.items())
        if total != weyl_dimension(rs, mu):
            problems.append(f"labels {labels}: dimension bookkeeping failed")
    return Report(not problems, problems)
