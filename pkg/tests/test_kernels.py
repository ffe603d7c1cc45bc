"""Kernel zoo, sections, and element arithmetic."""

import numpy as np
import pytest

from conftest import disk_points, line_points, plane_points

from rkboundary import (
    BargmannKernel,
    Cantor4Kernel,
    DomainError,
    ExplicitFeatureKernel,
    ExplicitGramKernel,
    NotHermitianError,
    SectionError,
    SincKernel,
    SzegoKernel,
    build_section,
    dist_k,
    element,
    evaluate_element,
    h_inner,
    h_norm_sq,
    lambda4_set,
    pd_check,
)

ZOO = [
    (SzegoKernel(), disk_points),
    (BargmannKernel(), plane_points),
    (Cantor4Kernel(level=4), disk_points),
    (SincKernel(), line_points),
]


# -- evaluation -------------------------------------------------------------

def test_szego_values():
    k = SzegoKernel()
    assert k(0, 0) == 1.0
    assert k(0.5, 0.5) == pytest.approx(4.0 / 3.0, abs=1e-15)


def test_bargmann_diagonal_is_one(rng):
    k = BargmannKernel()
    for z in plane_points(rng, 10):
        assert k(z, z) == pytest.approx(1.0, abs=1e-15)


def test_cantor_zero_point_gives_one():
    k = Cantor4Kernel(level=3)
    assert k(0, 0.7 * np.exp(0.3j)) == pytest.approx(1.0, abs=0)


def test_cantor_level_validation():
    with pytest.raises(ValueError):
        Cantor4Kernel(level=0)
    with pytest.raises(ValueError):
        Cantor4Kernel(level=21)


def test_szego_domain_rejected():
    k = SzegoKernel()
    with pytest.raises(DomainError):
        k(1.0, 0.0)
    with pytest.raises(DomainError):
        k.boundary_extension()(1.2j, 0.25)


def test_sinc_rejects_complex_points():
    with pytest.raises(DomainError):
        SincKernel()(0.5j, 0.0)


@pytest.mark.parametrize("kernel,sampler", ZOO, ids=lambda v: getattr(v, "name", ""))
def test_hermitian_symmetry(kernel, sampler, rng):
    s = sampler(rng, 1000)
    t = sampler(rng, 1000)
    gap = np.abs(kernel(s, t) - np.conj(kernel(t, s)))
    assert float(np.max(gap)) <= 1e-14


def test_cantor_product_equals_power_sum(rng):
    level = 5
    kernel = Cantor4Kernel(level=level)
    lam = lambda4_set(level)
    z = disk_points(rng, 20)
    w = disk_points(rng, 20)
    u = np.conj(z) * w
    power_sum = (u[:, None] ** lam[None, :]).sum(axis=1)
    assert np.max(np.abs(kernel(z, w) - power_sum)) < 1e-12


# -- boundary extensions ----------------------------------------------------

def test_szego_extension_values():
    ext = SzegoKernel().boundary_extension()
    assert ext(0.0, 0.37) == pytest.approx(1.0, abs=0)
    assert ext(0.5, 0.0) == pytest.approx(2.0, abs=1e-15)


def test_sinc_extension_unit_modulus(rng):
    ext = SincKernel().boundary_extension()
    t = line_points(rng, 50)
    xi = rng.uniform(-0.5, 0.5, size=50)
    assert np.max(np.abs(np.abs(ext(t, xi)) - 1.0)) < 1e-15
    with pytest.raises(DomainError):
        ext(0.0, 0.75)


# -- sections ---------------------------------------------------------------

def test_build_section_szego_gram():
    sec = build_section(SzegoKernel(), [0.0, 0.5])
    expected = np.array([[1.0, 1.0], [1.0, 4.0 / 3.0]])
    assert np.allclose(sec.gram, expected, atol=1e-15)


def test_orthonormal_features_give_identity():
    kernel = ExplicitFeatureKernel(np.eye(3))
    sec = build_section(kernel, [0, 1, 2])
    assert np.array_equal(sec.gram, np.eye(3))


def test_duplicate_points_rejected():
    with pytest.raises(SectionError, match="indistinguishable"):
        build_section(SzegoKernel(), [0.9, 0.9])


def test_sampled_grams_are_psd(rng):
    for kernel, sampler in ZOO:
        pts = sampler(rng, 12)
        sec = build_section(kernel, pts)
        verdict = pd_check(sec.gram)
        assert verdict.passed, (kernel.name, verdict)


def test_explicit_gram_kernel_requires_psd():
    with pytest.raises(Exception):
        ExplicitGramKernel(np.array([[1.0, 2.0], [2.0, 1.0]]))
    k = ExplicitGramKernel(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert k(0, 1) == 1.0


# -- pd_check ---------------------------------------------------------------

def test_pd_check_identity():
    verdict = pd_check(np.eye(3))
    assert verdict.passed and verdict.min_eigenvalue == pytest.approx(1.0)


def test_pd_check_indefinite():
    verdict = pd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not verdict.passed
    assert verdict.min_eigenvalue == pytest.approx(-1.0, abs=1e-12)


def test_pd_check_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        pd_check(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_pd_check_szego_random_points(rng):
    pts = disk_points(rng, 20)
    gram = SzegoKernel().gram(pts)
    assert pd_check(gram).passed


# -- element arithmetic -----------------------------------------------------

def test_h_norm_values():
    sec = build_section(SzegoKernel(), [0.0, 0.5])
    assert h_norm_sq(element(sec, [0, 0])) == 0.0
    assert h_norm_sq(element(sec, [1, 0])) == pytest.approx(1.0, abs=1e-15)
    assert h_norm_sq(element(sec, [1, -1])) == pytest.approx(1.0 / 3.0, abs=1e-14)


def test_h_norm_matches_inner_exactly(rng):
    sec = build_section(SzegoKernel(), disk_points(rng, 6))
    for _ in range(20):
        f = element(sec, rng.standard_normal(6) + 1j * rng.standard_normal(6))
        assert h_norm_sq(f) == h_inner(f, f).real
        assert h_norm_sq(f) >= -1e-12


def test_h_inner_conjugate_symmetry_and_orthogonality(rng):
    kernel = ExplicitFeatureKernel(np.eye(3))
    sec = build_section(kernel, [0, 1, 2])
    assert h_inner(element(sec, [1, 0, 0]), element(sec, [0, 1, 0])) == 0.0
    sec2 = build_section(SzegoKernel(), disk_points(rng, 5))
    for _ in range(20):
        f = element(sec2, rng.standard_normal(5) + 1j * rng.standard_normal(5))
        g = element(sec2, rng.standard_normal(5) + 1j * rng.standard_normal(5))
        assert h_inner(f, g) == pytest.approx(np.conj(h_inner(g, f)), abs=1e-12)


def test_h_inner_section_mismatch():
    sec_a = build_section(SzegoKernel(), [0.0, 0.5])
    sec_b = build_section(SzegoKernel(), [0.0, 0.4])
    with pytest.raises(SectionError):
        h_inner(element(sec_a, [1, 0]), element(sec_b, [1, 0]))


def test_h_norm_permutation_invariant(rng):
    pts = disk_points(rng, 7)
    c = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    perm = rng.permutation(7)
    a = h_norm_sq(element(build_section(SzegoKernel(), pts), c))
    b = h_norm_sq(element(build_section(SzegoKernel(), pts[perm]), c[perm]))
    assert a == pytest.approx(b, rel=1e-12)


def test_evaluate_element(rng):
    sec = build_section(SzegoKernel(), [0.0])
    assert evaluate_element(element(sec, [1.0]), 0.3) == pytest.approx(1.0, abs=0)
    pts = disk_points(rng, 4)
    sec = build_section(SzegoKernel(), pts)
    f = element(sec, [0, 1, 0, 0])
    probe = 0.2 + 0.1j
    assert evaluate_element(f, probe) == pytest.approx(SzegoKernel()(pts[1], probe), abs=1e-15)
    # at a section point the value is the Gram-row combination
    f2 = element(sec, np.arange(1, 5, dtype=complex))
    assert evaluate_element(f2, pts[2]) == pytest.approx(f2.coeffs @ sec.gram[:, 2], abs=1e-12)


# -- kernel metric ----------------------------------------------------------

def test_dist_identity_and_frozen_value():
    k = SzegoKernel()
    assert dist_k(k, 0.3 + 0.2j, 0.3 + 0.2j) == 0.0
    assert dist_k(k, 0.0, 0.5) == pytest.approx(np.sqrt(1.0 / 3.0), abs=1e-14)


@pytest.mark.parametrize("kernel,sampler", ZOO, ids=lambda v: getattr(v, "name", ""))
def test_metric_properties(kernel, sampler, rng):
    a = sampler(rng, 1000)
    b = sampler(rng, 1000)
    c = sampler(rng, 1000)
    dab = dist_k(kernel, a, b)
    dba = dist_k(kernel, b, a)
    dac = dist_k(kernel, a, c)
    dbc = dist_k(kernel, b, c)
    assert np.max(np.abs(dab - dba)) < 1e-12
    assert np.all(dab >= 0.0)
    # triangle inequality on the sampled triples
    assert np.max(dac - (dab + dbc)) <= 1e-12
    # distinct sampled points stay separated
    distinct = np.abs(a - b) > 1e-6
    assert np.all(dab[distinct] > 0.0)
