"""Associated Laguerre and Jacobi polynomials for arbitrary real parameters.

Everything downstream (superpotential deformations, exceptional-polynomial
eigenfunctions, regularity scans) reduces to evaluating L_n^alpha and
P_N^(nu,mu) with parameters that may be well outside the classical ranges
(alpha <= -1, nu + mu a negative integer).  Evaluation is by the three-term
recurrence in the degree, which stays stable for the moderate degrees and
arguments used here; the hypergeometric series is kept only as a fallback for
the degenerate Jacobi recurrence and as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LaguerreSpec",
    "JacobiSpec",
    "ZeroReport",
    "laguerre_eval",
    "laguerre_deriv",
    "laguerre_deriv2",
    "jacobi_eval",
    "jacobi_deriv",
    "jacobi_deriv2",
    "real_zeros",
]


@dataclass(frozen=True)
class LaguerreSpec:
    """Degree and parameter of an associated Laguerre polynomial L_n^alpha.

    alpha may be any real number, including alpha <= -1.
    """

    n: int
    alpha: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"degree must be nonnegative, got {self.n}")

    @property
    def degree(self):
        return self.n


@dataclass(frozen=True)
class JacobiSpec:
    """Degree and parameters of a Jacobi polynomial P_N^(nu,mu).

    nu and mu may be any reals; the degenerate recurrence cases
    (nu + mu a nonpositive integer >= -2N) are handled by series evaluation.
    """

    N: int
    nu: float
    mu: float

    def __post_init__(self):
        if self.N < 0:
            raise ValueError(f"degree must be nonnegative, got {self.N}")

    @property
    def degree(self):
        return self.N


@dataclass
class ZeroReport:
    """Real roots found in an interval, sorted ascending.

    multiplicity_flags[i] is True when the bracket for zeros[i] was degenerate
    (a scan sample landed essentially on the root, so the sign-change test
    could not certify simplicity).
    """

    zeros: list = field(default_factory=list)
    multiplicity_flags: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.zeros)


def _wrap(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _unwrap(out, scalar):
    return float(out) if scalar else out


def laguerre_eval(spec: LaguerreSpec, x):
    """Evaluate L_n^alpha(x) by upward recurrence in the degree.

    Total function: finite output for any finite (alpha, x). Accepts scalar
    or ndarray x and returns the matching kind.
    """
    arr, scalar = _wrap(x)
    n, a = spec.n, spec.alpha
    prev = np.ones_like(arr)
    if n == 0:
        return _unwrap(prev, scalar)
    cur = a + 1.0 - arr
    for k in range(1, n):
        prev, cur = cur, ((2.0 * k + a + 1.0 - arr) * cur - (k + a) * prev) / (k + 1.0)
    return _unwrap(cur, scalar)


def laguerre_deriv(spec: LaguerreSpec, x):
    """d/dx L_n^alpha(x), via the parameter-shift identity -L_{n-1}^{alpha+1}."""
    arr, scalar = _wrap(x)
    if spec.n == 0:
        return _unwrap(np.zeros_like(arr), scalar)
    inner = laguerre_eval(LaguerreSpec(spec.n - 1, spec.alpha + 1.0), arr)
    return _unwrap(-np.asarray(inner), scalar)


def laguerre_deriv2(spec: LaguerreSpec, x):
    """d^2/dx^2 L_n^alpha(x) = L_{n-2}^{alpha+2}(x)."""
    arr, scalar = _wrap(x)
    if spec.n < 2:
        return _unwrap(np.zeros_like(arr), scalar)
    inner = laguerre_eval(LaguerreSpec(spec.n - 2, spec.alpha + 2.0), arr)
    return _unwrap(np.asarray(inner), scalar)


def _gbinom(t, k):
    # binomial(t, k) for real t, integer k >= 0, as a product (no gammas,
    # valid at negative-integer t)
    out = 1.0
    for j in range(1, k + 1):
        out *= (t - k + j) / j
    return out


def _jacobi_series(N, nu, mu, y):
    # P_N^(nu,mu)(y) = sum_s C(N+nu, N-s) C(N+mu, s) ((y-1)/2)^s ((y+1)/2)^(N-s)
    # Finite sum, defined for all real nu, mu; used when the recurrence
    # denominator 2k(k+nu+mu)(2k+nu+mu-2) vanishes for some k <= N.
    half_m = (y - 1.0) / 2.0
    half_p = (y + 1.0) / 2.0
    total = np.zeros_like(np.asarray(y, dtype=float))
    for s in range(N + 1):
        c = _gbinom(N + nu, N - s) * _gbinom(N + mu, s)
        total = total + c * half_m**s * half_p ** (N - s)
    return total


def _jacobi_recurrence_degenerate(N, nu, mu, tol=1e-9):
    s = nu + mu
    for k in range(2, N + 1):
        if abs(k + s) < tol or abs(2.0 * k + s - 2.0) < tol:
            return True
    return False


def jacobi_eval(spec: JacobiSpec, y):
    """Evaluate P_N^(nu,mu)(y).

    Uses the three-term recurrence in the degree; switches to the explicit
    hypergeometric series whenever a recurrence denominator
    2k(k+nu+mu)(2k+nu+mu-2) vanishes for some k <= N.
    """
    arr, scalar = _wrap(y)
    N, nu, mu = spec.N, spec.nu, spec.mu
    if N == 0:
        return _unwrap(np.ones_like(arr), scalar)
    if _jacobi_recurrence_degenerate(N, nu, mu):
        return _unwrap(_jacobi_series(N, nu, mu, arr), scalar)
    prev = np.ones_like(arr)
    cur = 0.5 * (nu - mu) + 0.5 * (nu + mu + 2.0) * arr
    s = nu + mu
    for k in range(2, N + 1):
        c1 = 2.0 * k * (k + s) * (2.0 * k + s - 2.0)
        c2 = (2.0 * k + s - 1.0) * ((2.0 * k + s) * (2.0 * k + s - 2.0) * arr + nu * nu - mu * mu)
        c3 = 2.0 * (k + nu - 1.0) * (k + mu - 1.0) * (2.0 * k + s)
        prev, cur = cur, (c2 * cur - c3 * prev) / c1
    return _unwrap(cur, scalar)


def jacobi_deriv(spec: JacobiSpec, y):
    """d/dy P_N^(nu,mu)(y) = (N+nu+mu+1)/2 * P_{N-1}^(nu+1,mu+1)(y)."""
    arr, scalar = _wrap(y)
    if spec.N == 0:
        return _unwrap(np.zeros_like(arr), scalar)
    inner = jacobi_eval(JacobiSpec(spec.N - 1, spec.nu + 1.0, spec.mu + 1.0), arr)
    fac = 0.5 * (spec.N + spec.nu + spec.mu + 1.0)
    return _unwrap(fac * np.asarray(inner), scalar)


def jacobi_deriv2(spec: JacobiSpec, y):
    """Second derivative, by applying the parameter-shift rule twice."""
    arr, scalar = _wrap(y)
    if spec.N < 2:
        return _unwrap(np.zeros_like(arr), scalar)
    inner = jacobi_eval(JacobiSpec(spec.N - 2, spec.nu + 2.0, spec.mu + 2.0), arr)
    fac = 0.25 * (spec.N + spec.nu + spec.mu + 1.0) * (spec.N + spec.nu + spec.mu + 2.0)
    return _unwrap(fac * np.asarray(inner), scalar)


def _poly_callable(poly):
    if isinstance(poly, LaguerreSpec):
        return (lambda x: laguerre_eval(poly, x)), poly.n
    if isinstance(poly, JacobiSpec):
        return (lambda x: jacobi_eval(poly, x)), poly.N
    raise TypeError(f"expected LaguerreSpec or JacobiSpec, got {type(poly).__name__}")


def real_zeros(poly, interval, bisect_tol=1e-12, samples_per_degree=64):
    """Locate all real roots of a polynomial spec inside an open interval.

    Dense sign-scan (at least 64*(degree+1) samples) followed by bisection to
    1e-12 absolute. A sample landing within ~1e-13 of a root is flagged in
    multiplicity_flags rather than treated as an error.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValueError(f"invalid interval ({lo}, {hi})")
    f, degree = _poly_callable(poly)
    n_samples = max(samples_per_degree * (degree + 1), 128)
    xs = np.linspace(lo, hi, n_samples)
    fs = np.asarray(f(xs))
    scale = max(np.max(np.abs(fs)), 1e-300)

    zeros = []
    flags = []
    on_root = np.abs(fs) <= 1e-13 * scale
    i = 0
    while i < n_samples - 1:
        if on_root[i]:
            zeros.append(float(xs[i]))
            flags.append(True)
            i += 1
            continue
        a, b = xs[i], xs[i + 1]
        fa, fb = fs[i], fs[i + 1]
        if not on_root[i + 1] and fa * fb < 0.0:
            while b - a > bisect_tol:
                mid = 0.5 * (a + b)
                fm = f(mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0.0:
                    b = mid
                else:
                    a, fa = mid, fm
            zeros.append(0.5 * (a + b))
            flags.append(False)
        i += 1
    if n_samples and on_root[-1]:
        zeros.append(float(xs[-1]))
        flags.append(True)

    order = np.argsort(zeros)
    return ZeroReport(
        zeros=[zeros[j] for j in order],
        multiplicity_flags=[flags[j] for j in order],
    )
