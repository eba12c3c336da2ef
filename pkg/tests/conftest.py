import os

# Pin BLAS threading before numpy loads: at 100x100 the thread fan-out costs
# more than it saves, and single-threaded runs are reproducible everywhere.
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
             "NUMEXPR_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import numpy as np
import pytest

from ts1mc.scalar import rho_a


def prox_objective(y, x, a, lambda_mu):
    """The scalar prox objective (1/2)(y-x)^2 + lambda_mu * rho_a(|y|)."""
    y = np.asarray(y, dtype=float)
    return 0.5 * (y - x) ** 2 + lambda_mu * rho_a(np.abs(y), a)


def grid_prox_argmin(x, a, lambda_mu, step=1e-4):
    """Brute-force minimizer of the scalar prox objective on a uniform grid.

    The grid is centered so that 0 is an exact grid point: the objective
    has a kink there, and a grid straddling it would misstate the minimum
    by O(step) instead of O(step^2).
    """
    half = int(np.ceil((abs(x) + 1.0) / step))
    grid = np.arange(-half, half + 1, dtype=float) * step
    values = prox_objective(grid, x, a, lambda_mu)
    i = int(np.argmin(values))
    return float(grid[i]), float(values[i])


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


@pytest.fixture
def announce(capsys):
    """Print a line that survives pytest's output capture."""

    def _print(line: str) -> None:
        with capsys.disabled():
            print(line, flush=True)

    return _print
