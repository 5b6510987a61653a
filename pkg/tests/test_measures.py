"""
test_measures.py - 가중 측도 대수 테스트
Hille-Phillips 함수 미적분 실험 시스템
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from src.errors import DivergenceError, DomainError, ParseError
from src.measures import (GammaKernel, WeightedMeasure, am1_norm_identity_check, convolve,
                          dumps_measure, laplace_transform, loads_measure, tv_norm)


@pytest.fixture
def exp_density():
    """e^{-s}ds"""
    return WeightedMeasure.exponential(1.0)


class TestTvNorm:

    def test_point_mass(self, dirac1):
        assert tv_norm(dirac1) == pytest.approx(1.0)

    def test_exponential(self, exp_density):
        assert tv_norm(exp_density) == pytest.approx(1.0)

    def test_weighted_atoms(self):
        mu = WeightedMeasure.build(atoms=((1.0, 2.0), (2.0, -1j)), weight_exponent=0.5)
        assert tv_norm(mu) == pytest.approx(2 * math.exp(-0.5) + math.exp(-1.0))

    def test_gridded_density_matches_kernel(self):
        mu = WeightedMeasure.from_function(lambda s: np.exp(-s), 40.0, step=1e-3)
        assert tv_norm(mu) == pytest.approx(1.0, rel=1e-6)

    def test_kernel_diverges_against_weight(self):
        mu = WeightedMeasure.build(atoms=((1.0, 2.0),),
                                   kernels=WeightedMeasure.exponential(1.0).kernels,
                                   weight_exponent=-1.0)
        with pytest.raises(DivergenceError):
            tv_norm(mu)

    def test_gridded_density_diverges_against_weight(self):
        grid = WeightedMeasure.from_function(lambda s: np.exp(-s), 20.0, step=1e-2).density
        mu = WeightedMeasure.build(atoms=((1.0, 2.0),), density=grid, weight_exponent=-1.0)
        with pytest.raises(DivergenceError):
            tv_norm(mu)

    def test_cancelling_kernels(self):
        """e^{-s} - e^{-2s} >= 0 이므로 노름은 1 - 1/2"""
        mu = WeightedMeasure.build(kernels=(GammaKernel(1.0, 0.0, 1.0, -1.0),
                                            GammaKernel(-1.0, 0.0, 1.0, -2.0)))
        assert tv_norm(mu) == pytest.approx(0.5, rel=1e-8)

    def test_dipole_smoothed_by_exponential(self, exp_density):
        dipole = WeightedMeasure.build(atoms=((0.0, 1.0), (1.0, -1.0)))
        mu = convolve(dipole, exp_density)
        assert tv_norm(mu) == pytest.approx(2.0 - 2.0 / math.e, rel=1e-8)

    def test_identical_kernels_merge(self):
        k = GammaKernel(1.0, 0.0, 0.5, -1.0)
        mu = WeightedMeasure.build(kernels=(k, replace(k, coef=-1.0)))
        assert tv_norm(mu) == 0.0

    def test_kernel_and_grid_cancel(self, exp_density):
        grid = WeightedMeasure.from_function(lambda s: -np.exp(-s), 40.0, step=1e-3).density
        mu = WeightedMeasure.build(kernels=exp_density.kernels, density=grid)
        assert tv_norm(mu) <= 1e-3


class TestAtomMerge:

    def test_opposite_atoms_cancel(self):
        mu = WeightedMeasure.point_mass(1.0).plus(WeightedMeasure.point_mass(1.0, -1.0))
        assert mu.atoms == ()
        assert tv_norm(mu) == 0.0

    def test_same_location_weights_add(self):
        mu = WeightedMeasure.point_mass(1.0, 2.0).plus(WeightedMeasure.point_mass(1.0, 1j))
        assert mu.atoms == ((1.0, 2 + 1j),)
        assert tv_norm(mu) == pytest.approx(math.sqrt(5.0))

    def test_complex_weights_at_one_location(self):
        mu = WeightedMeasure.build(atoms=((0.5, 1j), (0.5, -2j), (0.25, 3.0)))
        assert mu.atoms == ((0.25, 3 + 0j), (0.5, -1j))

    def test_nearby_locations_merge(self):
        mu = WeightedMeasure.build(atoms=((1.0, 1.0), (1.0 + 1e-15, 1.0)))
        assert len(mu.atoms) == 1
        assert mu.atoms[0][1] == 2.0


class TestConvolve:

    def test_point_masses(self):
        out = convolve(WeightedMeasure.point_mass(0.5), WeightedMeasure.point_mass(1.25))
        assert out.atoms == ((1.75, 1 + 0j),)
        assert out.support_low == pytest.approx(1.75)

    def test_shift_of_density(self, exp_density):
        out = convolve(WeightedMeasure.point_mass(0.7), exp_density)
        s = np.array([0.5, 0.7001, 1.0, 3.0])
        expected = np.where(s > 0.7, np.exp(-(s - 0.7)), 0.0)
        assert np.allclose(out.evaluate_density(s), expected)
        assert out.support_low == pytest.approx(0.7)

    def test_identity_element(self, exp_density):
        out = convolve(WeightedMeasure.point_mass(0.0), exp_density)
        s = np.linspace(0.01, 5.0, 50)
        assert np.allclose(out.evaluate_density(s), exp_density.evaluate_density(s))

    def test_same_rate_kernels_stay_closed_form(self, exp_density):
        out = convolve(exp_density, exp_density)
        assert out.density is None
        s = np.array([0.5, 1.0, 2.0])
        assert np.allclose(out.evaluate_density(s), s * np.exp(-s))

    def test_submultiplicative(self):
        rng = np.random.default_rng(11)
        for _ in range(4):
            rate = float(rng.uniform(0.5, 3))
            atoms = tuple((float(t), complex(a)) for t, a in zip(rng.uniform(0, 2, 2), rng.normal(size=2)))
            mu = WeightedMeasure.build(atoms=atoms, kernels=WeightedMeasure.exponential(rate).kernels)
            nu = WeightedMeasure.build(atoms=((0.3, 0.5 + 0j),),
                                       kernels=WeightedMeasure.exponential(rate, coef=complex(rng.normal())).kernels)
            assert tv_norm(convolve(mu, nu)) <= tv_norm(mu) * tv_norm(nu) + 1e-8

    def test_weights_must_match(self, exp_density):
        with pytest.raises(DomainError):
            convolve(exp_density, WeightedMeasure.point_mass(1.0, omega=0.5))


class TestLaplaceTransform:

    def test_point_mass(self):
        z = 0.3 + 2j
        assert laplace_transform(WeightedMeasure.point_mass(1.5), z) == pytest.approx(np.exp(-1.5 * z))

    def test_exponential(self, exp_density):
        z = 1 + 1j
        assert laplace_transform(exp_density, z) == pytest.approx(1 / (1 + z))

    def test_convolution_theorem(self, exp_density):
        z = np.array([0.5, 1 + 2j, 3 - 1j])
        conv = convolve(WeightedMeasure.point_mass(0.4), exp_density)
        assert np.allclose(laplace_transform(conv, z), np.exp(-0.4 * z) / (1 + z))

    def test_gridded_homomorphism(self):
        a = WeightedMeasure.from_function(lambda s: np.exp(-s), 30.0, step=1e-3)
        b = WeightedMeasure.from_function(lambda s: s * np.exp(-2 * s), 30.0, step=1e-3)
        z = np.array([0.5, 1 + 1j])
        lhs = laplace_transform(convolve(a, b), z)
        rhs = laplace_transform(a, z) * laplace_transform(b, z)
        assert np.allclose(lhs, rhs, atol=1e-4)

    def test_left_of_abscissa(self, exp_density):
        with pytest.raises(DomainError):
            laplace_transform(exp_density, -0.5)


class TestAM1Check:

    def test_point_mass_p1(self, dirac1):
        report = am1_norm_identity_check(dirac1, p=1, grid_norm=False)
        assert report.multiplier_norm == pytest.approx(1.0)
        assert report.boundary_sup == pytest.approx(1.0, rel=1e-6)
        assert report.equal

    def test_exponential_p2(self, exp_density):
        report = am1_norm_identity_check(exp_density, p=2, grid_norm=False)
        assert report.boundary_sup == pytest.approx(1.0, rel=1e-6)
        assert report.tv_norm == pytest.approx(1.0)
        assert report.equal and report.contractive

    def test_dipole_sup_equals_tv(self):
        mu = WeightedMeasure.build(atoms=((1.0, 1.0), (2.0, -1.0)))
        report = am1_norm_identity_check(mu, p=2, grid_norm=False)
        assert report.boundary_sup == pytest.approx(2.0, rel=1e-6)
        assert report.tv_norm == pytest.approx(2.0)

    def test_bad_p(self, dirac1):
        with pytest.raises(DomainError):
            am1_norm_identity_check(dirac1, p=3)


class TestTextFormat:

    def test_round_trip_is_exact(self):
        mu = WeightedMeasure.build(atoms=((0.1, 0.3 - 2j),),
                                   kernels=WeightedMeasure.gamma_density(0.5, -1.0, coef=2.0).kernels,
                                   weight_exponent=-0.25)
        back = loads_measure(dumps_measure(mu))
        assert back.atoms == mu.atoms
        assert back.kernels == mu.kernels
        assert back.weight_exponent == mu.weight_exponent

    def test_unknown_record(self):
        with pytest.raises(ParseError):
            loads_measure("measure 0 0\nblob 1 2\n")
