import pytest
from fractions import Fraction

from splintbranch.rootsystem import build_root_system, vneg, zero_vec
from splintbranch.characters import FormalCharacter
from splintbranch import affine as af
from splintbranch import qseries as qs
from splintbranch.splints import Embedding, Splint, find_splint

A1 = build_root_system("A1")
A2 = build_root_system("A2")
G2 = build_root_system("G2")


def pentagonal_series(cutoff):
    """prod (1-q^n) by Euler's theorem: sum (-1)^k q^{k(3k-1)/2}, k in Z."""
    terms = {0: 1}
    k = 1
    while k * (3 * k - 1) // 2 <= cutoff:
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g <= cutoff:
                terms[g] = -1 if k % 2 else 1
        k += 1
    return {Fraction(g): c for g, c in terms.items()}


def scalar_to_lattice(series, dim):
    return qs.QSeries({e: FormalCharacter.monomial(zero_vec(dim), c)
                       for e, c in series.terms.items()}, series.cutoff)


def test_qseries_ring_laws():
    a = qs.QSeries({Fraction(0): 1, Fraction(1): -2, Fraction(3, 2): 5}, 4)
    b = qs.QSeries({Fraction(1, 2): 3, Fraction(2): 1}, 4)
    c = qs.euler_product(4)
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a * b).truncate(2) == (a.truncate(2) * b.truncate(2)).truncate(2)
    assert (a + b) * c == a * c + b * c


def test_qseries_lattice_coefficients():
    t = qs.theta(A1, zero_vec(A1.dim), 1, 4)
    u = qs.theta(A1, A1.weight_from_labels([1]), 1, 4)
    assert (t * u) == (u * t)
    assert t.denom in (1, 2, 4)


def test_qseries_exponent_denominator_checks():
    with pytest.raises(ValueError):
        qs.QSeries({Fraction(1, 3): 1}, 2, denom=2)
    s = qs.eta(2)
    assert s.denom == 24


def test_eta_examples():
    assert qs.eta(Fraction(1, 24)).items() == [(Fraction(1, 24), 1)]
    # the cutoff caps the full exponent, so q^{2+1/24} needs N = 2 + 1/24
    e2 = qs.eta(Fraction(2) + Fraction(1, 24))
    offsets = {e - Fraction(1, 24): c for e, c in e2.terms.items()}
    assert offsets == {Fraction(0): 1, Fraction(1): -1, Fraction(2): -1}
    e13 = qs.eta(Fraction(13) + Fraction(1, 24))
    offsets = {e - Fraction(1, 24): c for e, c in e13.terms.items()}
    assert offsets == {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}


def test_euler_product_pentagonal_to_50():
    assert qs.euler_product(50).terms == pentagonal_series(50)


def test_theta_examples():
    t = qs.theta(A1, zero_vec(A1.dim), 1, 0)
    assert t.items() == [(Fraction(0), FormalCharacter.monomial(zero_vec(A1.dim)))]
    t = qs.theta(A1, zero_vec(A1.dim), 1, 1)
    alpha = A1.simple_roots[0]
    assert dict(t.terms[Fraction(1)].items()) == {alpha: 1, vneg(alpha): 1}
    t = qs.theta(A2, zero_vec(A2.dim), 1, 1)
    assert len(t.terms[Fraction(1)]) == 6
    assert t.terms[Fraction(1)] == FormalCharacter({a: 1 for a in A2.roots})


def test_theta_level_two_shifted():
    lam = A1.weight_from_labels([1])
    t = qs.theta(A1, lam, 2, 3)
    # xi = (m + 1/4) alpha, exponent 2(xi,xi)/2 = 2m^2 + m + 1/8: all in 1/8 + Z
    assert t.terms
    assert all((e - Fraction(1, 8)).denominator == 1 for e in t.terms)


@pytest.mark.parametrize("rs,root_index", [(A1, 0), (G2, 0), (G2, 5)])
def test_jacobi_triple_product(rs, root_index):
    root = rs.positive_roots[root_index]
    N = 8
    lhs = qs.jacobi_theta_sum(rs.dim, root, N)
    rhs = scalar_to_lattice(qs.euler_product(N), rs.dim) * \
        qs.root_string_product(rs.dim, root, N)
    assert qs.compare_qseries(lhs, rhs) is None


def test_denominator_product_small():
    d = qs.denominator_product(A1, 0)
    alpha = A1.simple_roots[0]
    assert dict(d.terms[Fraction(0)].items()) == {zero_vec(A1.dim): 1,
                                                  vneg(alpha): -1}
    d1 = qs.denominator_product(A1, 1)
    # (1-e^-a)(1-q e^-a)(1-q e^a)(1-q) truncated: grade-1 coefficient
    assert dict(d1.terms[Fraction(1)].items()) == {
        alpha: -1, tuple(-2 * x for x in alpha): 1}


@pytest.mark.parametrize("name,cutoff", [("A1", 6), ("A2", 6), ("G2", 4)])
def test_weyl_kac_denominator_identity(name, cutoff):
    rs = build_root_system(name)
    orbit = af.denominator_orbit_sum(rs, cutoff)
    product = af.affine_denominator_layers(rs, cutoff)
    for n in range(cutoff + 1):
        assert orbit[n] == product[n], f"grade {n}"


@pytest.mark.parametrize("name", ["G2:A2A2", "B2:A1A1", "B2:A1A2", "A2:A1A1A1"])
def test_denominator_splint_identity(name):
    rep = qs.verify_denominator_splint(find_splint(name), 6)
    assert rep.passed, rep.detail


def corrupted_g2_splint():
    s = find_splint("G2:A2A2")
    pos = dict(s.phi2.pos_map)
    pos[max(pos)] = sorted(s.phi1.pos_map.values())[0]
    return Splint("G2:A2A2-corrupt", s.ambient, s.phi1,
                  Embedding(s.phi2.source, s.ambient, pos), s.correspondence)


def test_denominator_splint_negative_control():
    rep = qs.verify_denominator_splint(corrupted_g2_splint(), 4)
    assert not rep.passed
    assert rep.first_mismatch == 0


@pytest.mark.parametrize("name", ["G2:A2A2", "B2:A1A1", "B2:A1A2", "A2:A1A1A1"])
def test_theta_product_identity(name):
    rep = qs.verify_theta_products(find_splint(name), 4)
    assert rep.passed, rep.detail
    assert rep.normalization == 0


def test_theta_product_negative_and_guard():
    rep = qs.verify_theta_products(corrupted_g2_splint(), 3)
    assert not rep.passed
    # a trivial "splint" with an empty stem is rejected up front
    trivial = Splint("A1:trivial", A1,
                     Embedding(A1, A1, {A1.positive_roots[0]: A1.positive_roots[0]}),
                     Embedding(A1, A1, {A1.positive_roots[0]: A1.positive_roots[0]}),
                     (0,))
    trivial.phi2.pos_map.clear()
    with pytest.raises(ValueError, match="empty stem"):
        qs.verify_theta_products(trivial, 2)


@pytest.mark.parametrize("name", ["G2:A2A2", "B2:A1A1", "B2:A1A2", "A2:A1A1A1"])
def test_theta_sum_identity(name):
    rep = qs.verify_theta_sums(find_splint(name), 4)
    assert rep.passed, rep.detail
    assert rep.normalization == 0


def test_theta_sum_negative_controls():
    s = find_splint("G2:A2A2")
    rep = qs.verify_theta_sums(s, 3, drop_term=True)
    assert not rep.passed
    # corrupting a simple-root image changes the linear push and must fail too
    pos = dict(s.phi2.pos_map)
    pos[s.phi2.source.simple_roots[0]] = sorted(s.phi1.pos_map.values())[0]
    bad = Splint("bad", s.ambient, s.phi1,
                 Embedding(s.phi2.source, s.ambient, pos), s.correspondence)
    assert not qs.verify_theta_sums(bad, 3).passed
