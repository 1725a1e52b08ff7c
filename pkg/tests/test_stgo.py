"""Operator applications: closed forms against the definitional difference oracle."""

import math

import numpy as np
import pytest

from stgo_kit.errors import DomainError
from stgo_kit.harmonics import LMIndex, HarmonicPolynomial, irregular_solid, regular_solid, regular_solid_poly
from stgo_kit.oracles import FDScheme, fd_apply_operator
from stgo_kit.radial import RadialProfile
from stgo_kit.special import double_factorial, pochhammer
from stgo_kit.stgo import (
    TensorExpansion,
    TensorTerm,
    apply_to_tensor,
    apply_via_generator,
    as_scalar_expansion,
    gamma_radial,
    hobson_general,
    hobson_harmonic,
    laplacian_on_solid,
    leibniz,
    stgo_product_linearize,
)
from stgo_kit.wigner import coupled_range, gaunt

SQ4PI = math.sqrt(4 * math.pi)


# ---------------------------------------------------------------------------
# Hobson forms

def test_hobson_general_identity_operator():
    one = HarmonicPolynomial.from_terms({(0, 0, 0): 1})
    f = RadialProfile.gaussian(1.0)
    apply = hobson_general(one, f)
    v = np.array([0.3, 0.2, -0.5])
    assert apply(v) == pytest.approx(math.exp(-float(v @ v)), rel=1e-14)


def test_hobson_general_r2_equals_laplacian():
    # p = x^2+y^2+z^2 turns the operator into the plain Laplacian;
    # analytic: (4 a^2 r^2 - 6 a) e^{-a r^2} at a = 1
    p = HarmonicPolynomial.from_terms({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    f = RadialProfile.gaussian(1.0)
    apply = hobson_general(p, f)
    for v in ([0.5, -0.2, 0.8], [1.0, 0.3, 0.1]):
        v = np.array(v)
        r2 = float(v @ v)
        want = (4 * r2 - 6) * math.exp(-r2)
        assert apply(v) == pytest.approx(want, rel=1e-12)


def test_hobson_general_r2_matches_fd_oracle(rng):
    p = HarmonicPolynomial.from_terms({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    f = RadialProfile.gaussian(1.0)
    apply = hobson_general(p, f)
    fn = lambda v: math.exp(-float(v @ v))
    for _ in range(10):
        v = rng.normal(size=3) * 0.6
        got = fd_apply_operator(p, fn, v, FDScheme(4, 0.02))
        assert apply(v) == pytest.approx(got.value, rel=1e-6)


def test_hobson_general_harmonic_reduces_to_single_term():
    idx = (3, 1)
    poly = regular_solid_poly(*idx)
    f = RadialProfile.gaussian(0.7)
    general = hobson_general(poly, f)
    closed = hobson_harmonic(idx, f)
    v = np.array([0.4, 0.8, -0.3])
    assert general(v) == pytest.approx(closed.evaluate(v), rel=1e-13)


def test_hobson_general_capability_error():
    from stgo_kit.errors import CapabilityError

    p = HarmonicPolynomial.from_terms({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    limited = RadialProfile.custom(lambda r: math.exp(-r * r), max_derivative=1)
    with pytest.raises(CapabilityError):
        hobson_general(p, limited)


def test_hobson_harmonic_gaussian_closure(rng):
    al = 0.8
    for (l, m) in [(0, 0), (2, -1), (4, 3)]:
        te = hobson_harmonic((l, m), RadialProfile.gaussian(al))
        v = rng.normal(size=3)
        want = (-2 * al) ** l * math.exp(-al * float(v @ v)) * regular_solid((l, m), v)
        assert te.evaluate(v) == pytest.approx(want, rel=1e-12)


def test_hobson_harmonic_coulomb_closure(rng):
    for (l, m) in [(1, 0), (3, -2), (5, 4)]:
        te = hobson_harmonic((l, m), RadialProfile.power(-1.0))
        v = rng.normal(size=3)
        want = (-1) ** l * double_factorial(2 * l - 1) * irregular_solid((l, m), v)
        assert te.evaluate(v) == pytest.approx(want, rel=1e-12)


def test_hobson_rank0_is_scalar_rescale():
    phi = RadialProfile.gaussian(1.3)
    te = hobson_harmonic((0, 0), phi)
    v = np.array([0.2, 0.5, -0.1])
    assert te.evaluate(v) == pytest.approx(phi.value(float(np.linalg.norm(v))) / SQ4PI, rel=1e-14)


# ---------------------------------------------------------------------------
# gamma radial forms

GAMMA_PROFILES = [
    RadialProfile.gaussian(1.0),
    RadialProfile.power(-1.0),
    RadialProfile.power(2.5),
    RadialProfile.reduced_bessel_half(2, 1.0),
]


def test_gamma_form1_scalar_reduction():
    f = RadialProfile.gaussian(0.9)
    for l1 in range(4):
        got = gamma_radial(1, l1, 0, l1, f, 1.3)
        want = (1.3**l1) * f.inv_r_ddr(l1).value(1.3)
        assert got == pytest.approx(want, rel=1e-13)


def test_gamma_six_form_agreement():
    for l1 in range(6):
        for l2 in range(6):
            for l in coupled_range(l1, 0, l2, 0):
                forms = [1, 2, 3, 6] + ([4] if l2 >= l else []) + ([5] if l >= l2 else [])
                for f in GAMMA_PROFILES:
                    for r in (0.5, 1.0, 2.3):
                        vals = [gamma_radial(fm, l1, l2, l, f, r) for fm in forms]
                        for v in vals[1:]:
                            assert v == pytest.approx(vals[0], rel=1e-10, abs=1e-280)


def test_gamma_form_ordering_errors():
    f = RadialProfile.gaussian(1.0)
    with pytest.raises(DomainError):
        gamma_radial(4, 2, 1, 3, f, 1.0)  # needs l2 >= l
    with pytest.raises(DomainError):
        gamma_radial(5, 2, 3, 1, f, 1.0)  # needs l >= l2
    with pytest.raises(DomainError):
        gamma_radial(1, 1, 1, 1, f, 1.0)  # parity violation


def test_gamma_custom_profile_form1_only():
    c = RadialProfile.custom(lambda r: math.exp(-r * r), max_derivative=4)
    got = gamma_radial(1, 1, 1, 2, c, 1.2)
    want = gamma_radial(1, 1, 1, 2, RadialProfile.gaussian(1.0), 1.2)
    assert got == pytest.approx(want, rel=1e-4)


# ---------------------------------------------------------------------------
# tensor application

def test_apply_to_scalar_term_reduces_to_hobson():
    phi = RadialProfile.gaussian(1.1)
    term = TensorTerm(1.0 + 0j, phi, LMIndex(0, 0))
    out = apply_to_tensor((2, 1), term)
    assert len(out.terms) == 1
    v = np.array([0.5, -0.3, 0.7])
    want = hobson_harmonic((2, 1), phi).evaluate(v) / SQ4PI
    assert out.evaluate(v) == pytest.approx(want, rel=1e-12)


def test_apply_to_irregular_solid_single_term(rng):
    for (l1, l2) in [(1, 1), (2, 3), (5, 4), (3, 5)]:
        m1 = int(rng.integers(-l1, l1 + 1))
        m2 = int(rng.integers(-l2, l2 + 1))
        target = TensorTerm(1.0 + 0j, RadialProfile.power(-l2 - 1.0), LMIndex(l2, m2))
        out = apply_to_tensor((l1, m1), target)
        g = gaunt(l1, m1, l2, m2, l1 + l2, m1 + m2)
        if g == 0.0:
            continue
        assert len(out.terms) == 1
        assert out.terms[0].angular.l == l1 + l2
        v = rng.normal(size=3)
        want = (
            g
            * (-2.0) ** l1
            * float(pochhammer(0.5, l1 + l2) / pochhammer(0.5, l2))
            * irregular_solid((l1 + l2, m1 + m2), v)
        )
        assert out.evaluate(v) == pytest.approx(want, rel=1e-11)


def test_apply_to_tensor_vs_fd_oracle(rng):
    al = 0.8
    op, (l2, m2) = (2, 1), (1, 0)
    target = TensorTerm(1.0 + 0j, RadialProfile.gaussian(al).times_power(l2), LMIndex(l2, m2))
    out = apply_to_tensor(op, target)
    assert sorted(t.angular.l for t in out.terms) == [1, 3]
    op_poly = regular_solid_poly(*op)
    tgt_poly = regular_solid_poly(l2, m2)
    fn = lambda v: math.exp(-al * float(v @ v)) * tgt_poly.evaluate(v)
    for _ in range(5):
        v = rng.normal(size=3) * 0.7 + np.array([0.0, 0.0, 0.4])
        got = fd_apply_operator(op_poly, fn, v, FDScheme(4, 0.03))
        assert out.evaluate(v) == pytest.approx(got.value, rel=1e-6)


def test_linearize_structure():
    terms = stgo_product_linearize((0, 0), (3, 1))
    assert len(terms) == 1
    l, g, power = terms[0]
    assert (l, power) == (3, 0)
    assert g == pytest.approx(1 / SQ4PI, rel=1e-14)

    terms = {l: (g, p) for l, g, p in stgo_product_linearize((1, 0), (1, 0))}
    assert set(terms) == {0, 2}
    assert terms[0][1] == 1  # laplacian power at l=0
    assert terms[2][1] == 0

    terms = stgo_product_linearize((1, 1), (1, 1))
    assert len(terms) == 1 and terms[0][0] == 2


def test_operator_product_route_equivalence(rng):
    # sequential application equals the linearized sum applied directly
    phi = RadialProfile.gaussian(1.0)
    for (i1, i2) in [((1, 0), (1, 0)), ((2, 1), (1, -1)), ((3, 2), (2, 0))]:
        seq = apply_to_tensor(i1, hobson_harmonic(i2, phi).terms[0])
        lin = TensorExpansion([])
        for l, g, power in stgo_product_linearize(i1, i2):
            piece = hobson_harmonic((l, i1[1] + i2[1]), phi).terms[0]
            radial = laplacian_on_solid(piece.radial.times_power(-l), l, power).times_power(l)
            lin.terms.append(TensorTerm(g, radial, piece.angular))
        v = rng.normal(size=3)
        assert seq.evaluate(v) == pytest.approx(lin.evaluate(v), rel=1e-9)


def test_laplacian_commutes_with_operator():
    # on a gaussian profile: laplacian-then-operator equals operator-then-laplacian
    al = 0.9
    phi = RadialProfile.gaussian(al)
    idx = (2, 1)
    lap_phi = laplacian_on_solid(phi, 0)  # scalar laplacian
    route1 = hobson_harmonic(idx, lap_phi)
    te = hobson_harmonic(idx, phi).terms[0]
    radial_after = laplacian_on_solid(te.radial.times_power(-idx[0]), idx[0], 1).times_power(idx[0])
    v = np.array([0.6, -0.2, 0.9])
    r1 = route1.evaluate(v)
    r2 = TensorExpansion([TensorTerm(te.coeff, radial_after, te.angular)]).evaluate(v)
    assert r1 == pytest.approx(r2, rel=1e-10)


def test_apply_via_generator_routes(rng):
    al = 1.0
    phi = RadialProfile.gaussian(al)
    # generator route vs direct tensor route on the generated gaussian tensor
    gen = (1, 0)
    target = TensorTerm(1.0 + 0j, RadialProfile.gaussian(al).times_power(1).scaled(-2 * al), LMIndex(*gen))
    for op in [(1, 0), (2, 1), (1, -1)]:
        e1 = apply_to_tensor(op, target)
        e2 = apply_via_generator(op, gen, phi)
        v = rng.normal(size=3)
        assert e1.evaluate(v) == pytest.approx(e2.evaluate(v), rel=1e-10)


def test_apply_via_generator_scalar_gen():
    phi = RadialProfile.gaussian(0.8)
    out = apply_via_generator((2, -1), (0, 0), phi)
    want = hobson_harmonic((2, -1), phi.scaled(1 / SQ4PI))
    v = np.array([0.3, 0.9, -0.4])
    assert out.evaluate(v) == pytest.approx(want.evaluate(v), rel=1e-12)


# ---------------------------------------------------------------------------
# Leibniz rule

def test_leibniz_rank0():
    f = as_scalar_expansion(RadialProfile.gaussian(1.0))
    g = as_scalar_expansion(RadialProfile.gaussian(2.0))
    out = leibniz((0, 0), f, g)
    v = np.array([0.4, 0.1, -0.6])
    r2 = float(v @ v)
    assert out.evaluate(v) == pytest.approx(math.exp(-3 * r2) / SQ4PI, rel=1e-12)


def test_leibniz_rank1_gaussians():
    for m in (-1, 0, 1):
        f = as_scalar_expansion(RadialProfile.gaussian(1.0))
        out = leibniz((1, m), f, f)
        want = hobson_harmonic((1, m), RadialProfile.gaussian(2.0))
        v = np.array([0.5, -0.3, 0.2])
        assert out.evaluate(v) == pytest.approx(want.evaluate(v), rel=1e-10)


def test_leibniz_rank2_vs_fd_oracle(rng):
    f = as_scalar_expansion(RadialProfile.gaussian(1.0))
    g = as_scalar_expansion(RadialProfile.gaussian(2.0))
    out = leibniz((2, 1), f, g)
    poly = regular_solid_poly(2, 1)
    fn = lambda v: math.exp(-3.0 * float(v @ v))
    for _ in range(5):
        v = rng.normal(size=3) * 0.5 + np.array([0.1, 0.0, 0.3])
        got = fd_apply_operator(poly, fn, v, FDScheme(4, 0.02))
        assert out.evaluate(v) == pytest.approx(got.value, rel=1e-6)


def test_expansion_pruning():
    te = TensorExpansion(
        [
            TensorTerm(1.0 + 0j, RadialProfile.power(1.0), LMIndex(1, 0)),
            TensorTerm(1e-18 + 0j, RadialProfile.power(1.0), LMIndex(1, 1)),
        ]
    )
    assert len(te.pruned().terms) == 1


def test_gamma_interleaved_forms_on_sampled_profiles():
    from stgo_kit.errors import CapabilityError

    c = RadialProfile.custom(lambda r: math.exp(-r * r), max_derivative=6)
    g = RadialProfile.gaussian(1.0)
    # pipelines that differentiate after a power multiplication cannot run on
    # sampled profiles and must fail loudly
    with pytest.raises(CapabilityError):
        gamma_radial(2, 1, 1, 0, c, 1.2)  # outer derivative after r^(l1+l2+l+1)
    for form in (3, 6):
        with pytest.raises(CapabilityError):
            gamma_radial(form, 1, 1, 2, c, 1.2)
    # a pipeline whose power factors all sit outside the derivatives works
    got = gamma_radial(2, 1, 1, 2, c, 1.2)  # delta_l = 0: no outer derivative
    want = gamma_radial(2, 1, 1, 2, g, 1.2)
    assert got == pytest.approx(want, rel=1e-7)


def test_leibniz_rank3_closure():
    # rank-3 split of the product of two identical gaussians still collapses
    # to the closed one-term form at the doubled width
    f = as_scalar_expansion(RadialProfile.gaussian(0.8))
    out = leibniz((3, 2), f, f)
    want = hobson_harmonic((3, 2), RadialProfile.gaussian(1.6))
    v = np.array([0.4, -0.5, 0.3])
    assert out.evaluate(v) == pytest.approx(want.evaluate(v), rel=1e-10)
