import numpy as np
import pytest

from xydqpt.pfaffian import NotSkew, pfaffian, pfaffian_cofactor, pfaffian_log


def random_skew(rng, n, complex_=True):
    a = rng.normal(size=(n, n))
    if complex_:
        a = a + 1j * rng.normal(size=(n, n))
    return a - a.T


class TestPfaffian:
    def test_two_by_two(self):
        a = np.array([[0.0, 2.5], [-2.5, 0.0]])
        assert pfaffian(a) == pytest.approx(2.5)

    def test_swap_antisymmetry(self, rng):
        a = random_skew(rng, 6)
        perm = [1, 0, 2, 3, 4, 5]  # odd permutation
        swapped = a[np.ix_(perm, perm)]
        assert pfaffian(swapped) == pytest.approx(-pfaffian(a), rel=1e-12)

    def test_cofactor_oracle_six_by_six(self, rng):
        for _ in range(50):
            a = random_skew(rng, 6)
            assert pfaffian(a) == pytest.approx(pfaffian_cofactor(a), abs=1e-10)

    def test_square_is_determinant(self, rng):
        for _ in range(100):
            n = 2 * rng.integers(1, 33)
            a = random_skew(rng, n)
            det = np.linalg.det(a)
            assert pfaffian(a) ** 2 == pytest.approx(det, rel=1e-10, abs=1e-10)

    def test_congruence_transform(self, rng):
        for _ in range(30):
            n = 2 * rng.integers(1, 5)
            a = random_skew(rng, n)
            b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            lhs = pfaffian(b @ a @ b.T)
            rhs = np.linalg.det(b) * pfaffian_cofactor(a)
            assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)

    def test_scaling(self, rng):
        a = random_skew(rng, 8)
        c = 1.7 - 0.3j
        assert pfaffian(c * a) == pytest.approx(c**4 * pfaffian(a), rel=1e-11)

    def test_singular_returns_zero(self):
        a = np.zeros((4, 4), dtype=complex)
        a[0, 1], a[1, 0] = 1.0, -1.0  # rank 2: Pf = 0
        assert pfaffian(a) == 0.0

    def test_not_skew_raises(self):
        with pytest.raises(NotSkew):
            pfaffian(np.ones((4, 4)))
        with pytest.raises(NotSkew):
            pfaffian(np.zeros((3, 3)))
        with pytest.raises(NotSkew):
            pfaffian_cofactor(np.zeros((2, 3)))

    def test_cofactor_refuses_large(self, rng):
        with pytest.raises(ValueError):
            pfaffian_cofactor(random_skew(rng, 12))


class TestPfaffianLog:
    def test_matches_direct_form(self, rng):
        for _ in range(30):
            n = 2 * rng.integers(1, 17)
            a = random_skew(rng, n)
            log_mag, phase = pfaffian_log(a)
            assert abs(phase) == pytest.approx(1.0, abs=1e-12)
            assert phase * np.exp(log_mag) == pytest.approx(pfaffian(a), rel=1e-10)

    def test_survives_underflow_scale(self, rng):
        # 120-dimensional matrix scaled so the Pfaffian magnitude is ~1e-480:
        # far outside double range, but the log form stays informative
        n = 120
        a = 1e-8 * random_skew(rng, n)
        log_mag, phase = pfaffian_log(a)
        assert np.isfinite(log_mag)
        assert log_mag < -700.0
        assert abs(phase) == pytest.approx(1.0, abs=1e-10)

    def test_singular_flagged(self):
        a = np.zeros((4, 4), dtype=complex)
        log_mag, phase = pfaffian_log(a)
        assert log_mag == -np.inf and phase == 0.0
