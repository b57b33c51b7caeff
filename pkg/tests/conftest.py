import pytest

import totscan._kernels as kernels
from totscan import sieve


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = kernels.active_name()
    kernels.set_backend(request.param)
    sieve.clear_caches()
    yield request.param
    kernels.set_backend(previous)
    sieve.clear_caches()
