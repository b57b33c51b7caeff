"""totscan: certified numerical scans of totient-function inequalities.

The toolkit computes, with rigorous floating-point error bounds, every
quantity in the classical chain linking the Euler totient to the primes:
primorial ratios N_k/phi(N_k), Mertens sums, the Chebyshev theta function,
the Mertens constant B1 and prime zeta values, and the empirical
distribution of n/phi(n) — and renders three-valued verdicts (Holds / Fails
/ Indeterminate) on the associated inequalities over desk-scale ranges.
"""

__version__ = "0.1.0"

from .rigor import (  # noqa: F401
    ErrorTracked,
    Outcome,
    Verdict,
    certified_compare,
    compensated_sum,
    et_add,
    et_log,
)

__all__ = [
    "ErrorTracked",
    "Outcome",
    "Verdict",
    "certified_compare",
    "compensated_sum",
    "et_add",
    "et_log",
]
