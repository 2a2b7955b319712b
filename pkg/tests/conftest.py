import numpy as np
import pytest

from kerrcat.model import ModelParams, params_from_experiment

# Experimental operating point used throughout: K/2pi = 6.7 MHz,
# P/2pi = 15.5 MHz, kappa = 1/15.5 1/us (15.5 us photon lifetime),
# eps/2pi = 0.74 MHz.
K_MHZ = 6.7
P_MHZ = 15.5
KAPPA = 1.0 / 15.5
EPS_MHZ = 0.74


@pytest.fixture(scope="session")
def exp_params() -> ModelParams:
    return params_from_experiment(K_MHZ, P_MHZ, KAPPA, eps_MHz=EPS_MHZ, delta_MHz=0.2)


@pytest.fixture(scope="session")
def quiet_params(exp_params) -> ModelParams:
    """Same resonator, no detuning and no single-photon drive."""
    return exp_params.replace(drive=0.0, delta=0.0)


@pytest.fixture(scope="session")
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)


def random_params(rng, eps_box: float = 5.0) -> ModelParams:
    """Uniform draw over the operating box used by the equivalence checks."""
    alpha = rng.uniform(0.8, 2.2)
    kappa = rng.uniform(0.01, 0.3)
    box = eps_box * kappa * alpha * alpha
    kerr = rng.uniform(5.0, 60.0)
    return ModelParams(
        delta=rng.uniform(-box, box),
        kerr=kerr,
        two_photon=kerr * alpha * alpha,
        drive=rng.uniform(-box, box),
        kappa=kappa,
    )
