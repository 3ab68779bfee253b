"""Shared fixtures for the ehypofit test suite."""

from __future__ import annotations

import numpy as np
import pytest
from click.testing import CliRunner

from ehypofit.datasets import bladder_cancer_path, load_bladder_cancer
from ehypofit.estimate import fit
from ehypofit.models import EHypoParams, FitOptions, Sample
from tests.constants import EXAMPLE_K, EXAMPLE_RATES


@pytest.fixture
def example_params():
    """Three-stage EHypo with rates (5, 4, 3) and k = 3."""
    return EHypoParams(rates=EXAMPLE_RATES, k=EXAMPLE_K)


@pytest.fixture
def fractional_params():
    """Two-stage EHypo with a non-integer exponent."""
    return EHypoParams(rates=(0.5, 2.0), k=0.7)


@pytest.fixture
def small_sample():
    """A short deterministic sample."""
    return Sample(values=np.random.default_rng(3).exponential(2.0, size=40))


@pytest.fixture(scope="session")
def bladder():
    """The bundled bladder cancer remission times."""
    return load_bladder_cancer()


@pytest.fixture(scope="session")
def bladder_file(tmp_path_factory):
    """The bundled data copied to a plain file, as a user would pass it."""
    path = tmp_path_factory.mktemp("data") / "bladder_cancer.csv"
    path.write_bytes(bladder_cancer_path().read_bytes())
    return path


@pytest.fixture(scope="session")
def bladder_ehypo_fit(bladder):
    """Two-stage EHypo fitted to the bladder cancer data."""
    return fit(bladder, FitOptions(n=2))


@pytest.fixture(scope="session")
def bladder_hypo_fit(bladder):
    """Two-stage Hypoexponential (k pinned to 1) fitted to the bladder cancer data."""
    return fit(bladder, FitOptions(n=2, fix_k=1.0))


@pytest.fixture
def runner():
    """Create a CLI runner."""
    return CliRunner()
