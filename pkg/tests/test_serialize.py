import numpy as np
import pytest

from liefact.errors import ParameterError
from liefact.fourier import forward
from liefact.groups import haar_quadrature
from liefact.serialize import (
    coefficients_from_json,
    coefficients_to_json,
    gridfunction_from_csv,
    gridfunction_to_csv,
)
from liefact.signals import random_bandlimited


class TestCoefficientJson:
    def test_roundtrip(self, t1, su2, rng):
        for g, L in ((t1, 8), (su2, 2)):
            grid = haar_quadrature(g, L)
            T = forward(random_bandlimited(g, grid, rng, value_dim=2))
            back = coefficients_from_json(coefficients_to_json(T))
            assert back.bandlimit == T.bandlimit
            assert back.value_dim == T.value_dim
            for xi in T.entries:
                assert np.allclose(back.entries[xi], T.entries[xi])

    def test_deterministic_bytes(self, t1, rng):
        grid = haar_quadrature(t1, 4)
        T = forward(random_bandlimited(t1, grid, rng))
        assert coefficients_to_json(T) == coefficients_to_json(T)

    def test_out_of_band_label_rejected(self, t1, rng):
        grid = haar_quadrature(t1, 4)
        text = coefficients_to_json(forward(random_bandlimited(t1, grid, rng)))
        bad = text.replace('"bandlimit": 4', '"bandlimit": 2')
        with pytest.raises(ParameterError):
            coefficients_from_json(bad)


class TestGridCsv:
    def test_roundtrip(self, t2, rng):
        grid = haar_quadrature(t2, 3)
        f = random_bandlimited(t2, grid, rng, value_dim=2)
        back = gridfunction_from_csv(gridfunction_to_csv(f), t2, grid)
        assert np.allclose(back.values, f.values)

    def test_node_count_mismatch(self, t1, rng):
        grid4 = haar_quadrature(t1, 4)
        grid8 = haar_quadrature(t1, 8)
        f = random_bandlimited(t1, grid4, rng)
        with pytest.raises(ParameterError):
            gridfunction_from_csv(gridfunction_to_csv(f), t1, grid8)

    def test_malformed(self, t1):
        grid = haar_quadrature(t1, 4)
        with pytest.raises(ParameterError):
            gridfunction_from_csv("x0,re0\n", t1, grid)


class TestReportCsv:
    def test_seminorm_report(self, t1):
        from liefact.serialize import seminorm_report_csv
        from liefact.signals import poisson_function
        from liefact.spectral import iterate_seminorm
        from liefact.weights import gevrey_weight

        f = poisson_function(t1, haar_quadrature(t1, 16), 1.0)
        rep = iterate_seminorm(f, gevrey_weight(1.0), 1.5)
        text = seminorm_report_csv(rep)
        lines = text.strip().splitlines()
        assert lines[0] == "j,supnorm,weighted_term"
        assert len(lines) == len(rep.js) + 1

    def test_decay_report(self, t1):
        from liefact.classify import estimate_critical_h
        from liefact.serialize import decay_report_csv, decay_report_json
        from liefact.signals import poisson_coefficients
        from liefact.weights import gevrey_weight

        rep = estimate_critical_h(poisson_coefficients(t1, 16, 1.0), gevrey_weight(1.0))
        csv_text = decay_report_csv(rep)
        assert csv_text.splitlines()[0] == "sqrt_lambda,log_hsnorm,fitted"
        doc = decay_report_json(rep)
        assert '"h_star"' in doc
