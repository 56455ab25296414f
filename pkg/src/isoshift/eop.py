"""Exceptional Laguerre polynomials and eigenfunctions of the extended potentials.

Three series arise from the radial-oscillator branches: L1 (branch 2),
L2 (branch 3, equivalently the L1 construction at ell -> ell+1) and L3
(branch 1).  Each state is psi(r) = r^p exp(-omega r^2/4) S(y)/T(y) at
y = omega r^2/2, with S the exceptional polynomial, T the seed polynomial of
the underlying deformation, and the orthogonality measure W^2 dr where
W = r^p exp(-omega r^2/4)/T(y) = exp(-int w) for the ground-state-like
superpotential w of the extension.

Polynomial values and their first two derivatives are computed with small
order-2 "jets" (value, d/dy, d2/dy2 triples with product-rule arithmetic) so
that every eigenfunction carries analytic first and second derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import polyengine as pe
from .catalog import Function1D, RadialOscillator
from .errors import (
    ConfigurationError,
    DegenerateParameterError,
    SingularExtensionError,
)

__all__ = [
    "EOPSpec",
    "WeightSpec",
    "eop_eval",
    "eop_polynomial_degree",
    "weight_spec",
    "weight_eval",
    "weight_from_superpotential",
    "intertwine",
    "eigenfunction_closed_form",
    "eigenvalue",
    "ro_psi_plus",
    "psi_plus_eigenvalue",
    "classical_ro_eigenfunction",
    "gram_matrix",
    "gram_offdiag_max",
    "zero_census",
    "series_branch",
]

_SERIES = ("L1", "L2", "L3")

# which superpotential branch each series extends
_SERIES_BRANCH = {"L1": 2, "L2": 3, "L3": 1}


def series_branch(series: str) -> int:
    """Radial-oscillator branch index underlying an exceptional series."""
    if series not in _SERIES:
        raise ConfigurationError(f"unknown series {series!r}")
    return _SERIES_BRANCH[series]


@dataclass(frozen=True)
class EOPSpec:
    """One exceptional-polynomial state: series, state index n, hierarchy m."""

    series: str
    n: int
    m: int
    params: RadialOscillator

    def __post_init__(self):
        if self.series not in _SERIES:
            raise ConfigurationError(f"series must be one of {_SERIES}, got {self.series!r}")
        if self.n < 0 or self.m < 0:
            raise ConfigurationError("state and hierarchy indices must be nonnegative")


@dataclass(frozen=True)
class WeightSpec:
    """Half-density weight W(r) of a series; the orthogonality measure is W^2 dr."""

    series: str
    m: int
    params: RadialOscillator
    weight: Function1D
    interval: tuple
    singular_points: tuple

    @property
    def is_regular(self):
        return not self.singular_points


# ---------------------------------------------------------------------------
# order-2 jets: triples (f, f', f'') of arrays with product-rule arithmetic
# ---------------------------------------------------------------------------


def _jadd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _jsub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _jmul(a, b):
    return (
        a[0] * b[0],
        a[0] * b[1] + a[1] * b[0],
        a[0] * b[2] + 2.0 * a[1] * b[1] + a[2] * b[0],
    )


def _jscale(a, c):
    return (c * a[0], c * a[1], c * a[2])


def _lag_dk(n, alpha, k, x):
    """k-th derivative of L_n^alpha at x: (-1)^k L_{n-k}^{alpha+k}(x)."""
    x = np.asarray(x, dtype=float)
    if k > n:
        return np.zeros_like(x)
    val = pe.laguerre_eval(pe.LaguerreSpec(n - k, alpha + k), x)
    return np.asarray(val) if k % 2 == 0 else -np.asarray(val)


def _lagjet(n, alpha, sign, y, start=0):
    """Jet in y of the function y -> (d^start L_n^alpha)(sign * y)."""
    x = sign * np.asarray(y, dtype=float)
    return (
        _lag_dk(n, alpha, start, x),
        sign * _lag_dk(n, alpha, start + 1, x),
        _lag_dk(n, alpha, start + 2, x),
    )


def _jet_y(y):
    y = np.asarray(y, dtype=float)
    return (y, np.ones_like(y), np.zeros_like(y))


def _jet_const(c, y):
    y = np.asarray(y, dtype=float)
    return (np.full_like(y, c), np.zeros_like(y), np.zeros_like(y))


# ---------------------------------------------------------------------------
# series definitions
# ---------------------------------------------------------------------------


def _operational(spec: EOPSpec):
    """Map an L2 state to the equivalent L1 state at ell -> ell + 1."""
    if spec.series == "L2":
        fam = RadialOscillator(spec.params.omega, spec.params.ell + 1.0)
        return EOPSpec("L1", spec.n, spec.m, fam)
    return spec


def _l1_S(spec: EOPSpec):
    alpha = spec.params.ell - 0.5
    n, m = spec.n, spec.m

    def S(y):
        Bm = _lagjet(m, alpha + 1.0, -1, y)
        Um = _lagjet(m, alpha, -1, y)
        Ln = _lagjet(n, alpha, 1, y)
        Lnp = _lagjet(n, alpha, 1, y, start=1)
        return _jsub(_jmul(Bm, Ln), _jmul(Um, Lnp))

    return S


def _l1_T(spec: EOPSpec):
    alpha = spec.params.ell - 0.5
    m = spec.m

    def T(y):
        return _lagjet(m, alpha, -1, y)

    return T


def _l3_S(spec: EOPSpec):
    ell = spec.params.ell
    beta = ell + 1.5
    a3 = -ell - 1.5
    n, m = spec.n, spec.m

    def S(y):
        yj = _jet_y(y)
        cj = _jet_const(ell + 1.5, y)
        Ln = _lagjet(n, beta, 1, y)
        Lnp = _lagjet(n, beta, 1, y, start=1)
        G = _lagjet(m, a3, -1, y)
        # dG/dy for G(y) = L_m(-y) is -L_m'(-y)
        Gp = _jscale(_lagjet(m, a3, -1, y, start=1), -1.0)
        t1 = _jmul(_jsub(yj, cj), _jmul(Ln, G))
        t2 = _jscale(_jmul(yj, _jmul(Lnp, G)), -1.0)
        t3 = _jmul(yj, _jmul(Ln, Gp))
        return _jadd(_jadd(t1, t2), t3)

    return S


def _l3_T(spec: EOPSpec):
    a3 = -spec.params.ell - 1.5
    m = spec.m

    def T(y):
        return _lagjet(m, a3, -1, y)

    return T


def _series_data(spec: EOPSpec):
    """(S jet fn, T jet fn, prefactor power p, eigenvalue E, denominator seed)."""
    op = _operational(spec)
    fam = op.params
    w, ell = fam.omega, fam.ell
    if op.series == "L1":
        S, T = _l1_S(op), _l1_T(op)
        p = ell + 1.0
        E = (2.0 * op.n + 2.0 * op.m + 2.0 * ell + 1.0) * w
        denom = (pe.LaguerreSpec(op.m, ell - 0.5), -1)
    else:  # L3
        S, T = _l3_S(op), _l3_T(op)
        p = ell + 1.0
        E = 2.0 * (op.n + op.m + 1.0) * w
        denom = (pe.LaguerreSpec(op.m, -ell - 1.5), -1)
    return S, T, p, E, denom, fam


def eop_polynomial_degree(spec: EOPSpec) -> int:
    """Degree in y of the exceptional polynomial of a state."""
    if spec.series == "L3":
        return spec.n + spec.m + 1
    return spec.n + spec.m


def eop_eval(spec: EOPSpec, r):
    """The exceptional polynomial of a state, evaluated at radius r.

    L1 and L3 evaluate the certified closed forms used by the
    eigenfunctions.  L2 evaluates the traditional printed series with its
    1/(ell - m + 1/2) prefactor, undefined when ell - m + 1/2 = 0.
    """
    scalar = np.ndim(r) == 0
    r = np.asarray(r, dtype=float)
    y = 0.5 * spec.params.omega * r * r
    if spec.series == "L2":
        ell, n, m = spec.params.ell, spec.n, spec.m
        c = ell - m + 0.5
        if abs(c) < 1e-12:
            raise DegenerateParameterError(
                f"L2 series undefined at ell - m + 1/2 = 0 (ell={ell}, m={m})"
            )
        term1 = c * _lag_dk(m, -ell - 1.5, 0, y) * _lag_dk(n, ell + 0.5, 0, y)
        term2 = y * _lag_dk(m, -ell - 0.5, 0, y) * (-_lag_dk(n - 1, ell + 1.5, 0, y) if n else 0.0)
        out = (term1 + term2) / c
    else:
        S, _, _, _, _, _ = _series_data(spec)
        out = S(y)[0]
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# eigenfunctions
# ---------------------------------------------------------------------------


def _product_function(omega, p, S_fn, T_fn, singular):
    """r^p exp(-omega r^2/4) S(y)/T(y) with analytic first two derivatives."""

    def trio(r):
        r = np.asarray(r, dtype=float)
        y = 0.5 * omega * r * r
        S = S_fn(y)
        T = T_fn(y)
        g0 = S[0] / T[0]
        g1 = (S[1] * T[0] - S[0] * T[1]) / T[0] ** 2
        g2 = (
            (S[2] * T[0] - S[0] * T[2]) / T[0] ** 2
            - 2.0 * T[1] * (S[1] * T[0] - S[0] * T[1]) / T[0] ** 3
        )
        F0 = g0
        F1 = omega * r * g1
        F2 = omega * g1 + (omega * r) ** 2 * g2
        A = r**p * np.exp(-0.25 * omega * r * r)
        la = p / r - 0.5 * omega * r
        A1 = la * A
        A2 = (la * la - p / r**2 - 0.5 * omega) * A
        return A * F0, A1 * F0 + A * F1, A2 * F0 + 2.0 * A1 * F1 + A * F2

    return Function1D(
        f=lambda r: trio(r)[0],
        df=lambda r: trio(r)[1],
        d2f=lambda r: trio(r)[2],
        domain=(0.0, math.inf),
        singular_points=tuple(singular),
    )


def _denominator_singular_points(fam: RadialOscillator, seed: pe.LaguerreSpec, s: int):
    from .deform import _ro_seed_singular_points

    y_max = 0.5 * fam.omega * (40.0 / math.sqrt(fam.omega)) ** 2
    return _ro_seed_singular_points(fam, seed, s, y_max)


def eigenfunction_closed_form(spec: EOPSpec) -> Function1D:
    """Closed-form eigenfunction of the extended potential for this state."""
    S, T, p, _, denom, fam = _series_data(spec)
    singular = _denominator_singular_points(fam, *denom)
    return _product_function(fam.omega, p, S, T, singular)


def eigenvalue(spec: EOPSpec) -> float:
    """Energy of the state in the extended potential V~- of its branch."""
    return _series_data(spec)[3]


def ro_psi_plus(spec: EOPSpec, n=None) -> Function1D:
    """Eigenfunction of the shifted partner V~+ = V+ + R for this series.

    V~+ is a plain radial oscillator, so these are classical states; they
    feed the intertwining operator, which maps them onto the closed forms.
    """
    op = _operational(spec)
    fam = op.params
    if n is None:
        n = op.n
    if op.series == "L1":
        p, alpha = fam.ell, fam.ell - 0.5
    else:  # L3
        p, alpha = fam.ell + 2.0, fam.ell + 1.5

    def S(y):
        return _lagjet(n, alpha, 1, y)

    def T(y):
        return _jet_const(1.0, y)

    return _product_function(fam.omega, p, S, T, ())


def psi_plus_eigenvalue(spec: EOPSpec, n=None) -> float:
    """Energy of ro_psi_plus(spec, n) in V~+; equal to the V~- ladder value."""
    op = _operational(spec)
    if n is None:
        n = op.n
    return eigenvalue(EOPSpec(op.series, n, op.m, op.params))


def classical_ro_eigenfunction(fam: RadialOscillator, n) -> Function1D:
    """Classical bound state r^(ell+1) exp(-omega r^2/4) L_n^(ell+1/2)(y).

    Eigenfunction of V- of branch 1 (V - omega(ell + 3/2)) at E = 2 n omega.
    """
    alpha = fam.ell + 0.5

    def S(y):
        return _lagjet(n, alpha, 1, y)

    def T(y):
        return _jet_const(1.0, y)

    return _product_function(fam.omega, fam.ell + 1.0, S, T, ())


def intertwine(w_tilde: Function1D, psi_plus: Function1D) -> Function1D:
    """Apply the first-order intertwiner (-d/dr + w~) to a partner state."""
    has_d2 = psi_plus.d2f is not None and w_tilde.df is not None

    def f(r):
        return -psi_plus.df(r) + w_tilde.f(r) * psi_plus.f(r)

    def df(r):
        return (
            -psi_plus.d2f(r)
            + w_tilde.df(r) * psi_plus.f(r)
            + w_tilde.f(r) * psi_plus.df(r)
        )

    return Function1D(
        f=f,
        df=df if has_d2 else None,
        domain=psi_plus.domain,
        singular_points=w_tilde.singular_points,
    )


# ---------------------------------------------------------------------------
# weights and Gram matrices
# ---------------------------------------------------------------------------


def weight_spec(series: str, m: int, params: RadialOscillator) -> WeightSpec:
    """The half-density weight of a series: r^p exp(-omega r^2/4)/T(y)."""
    probe = _operational(EOPSpec(series, 0, m, params))
    _, T, p, _, denom, fam = _series_data(probe)
    singular = _denominator_singular_points(fam, *denom)
    omega = fam.omega

    def f(r):
        r = np.asarray(r, dtype=float)
        y = 0.5 * omega * r * r
        return r**p * np.exp(-0.25 * omega * r * r) / T(y)[0]

    def df(r):
        r = np.asarray(r, dtype=float)
        y = 0.5 * omega * r * r
        Tj = T(y)
        logd = p / r - 0.5 * omega * r - omega * r * Tj[1] / Tj[0]
        return logd * f(r)

    fn = Function1D(f=f, df=df, domain=(0.0, math.inf), singular_points=tuple(singular))
    return WeightSpec(
        series=series,
        m=m,
        params=params,
        weight=fn,
        interval=(0.0, math.inf),
        singular_points=tuple(singular),
    )


def weight_eval(spec: WeightSpec, r):
    """Evaluate the weight; poles inside the interval are recorded on the spec."""
    return spec.weight.f(r)


def weight_from_superpotential(w_tilde: Function1D, anchor: float) -> Function1D:
    """exp(-int_anchor^x w~ dt) by adaptive quadrature; the operational weight.

    Unique up to an overall constant (the choice of anchor).
    """

    def one(x):
        val, _ = quad(lambda t: float(w_tilde.f(t)), anchor, x, limit=200)
        return math.exp(-val)

    def f(x):
        if np.ndim(x) == 0:
            return one(float(x))
        return np.array([one(float(xi)) for xi in np.asarray(x, dtype=float)])

    def df(x):
        return -w_tilde.f(x) * f(x)

    return Function1D(f=f, df=df, domain=w_tilde.domain,
                      singular_points=w_tilde.singular_points)


def gram_matrix(series: str, m: int, params: RadialOscillator, n_max: int):
    """Gram matrix G[n, n'] = int P_n P_n' W^2 dr over (0, R_cut).

    Refuses singular extensions.  The integration cutoff follows the
    Gaussian decay of W^2; the truncated tail is below 1e-12 of the
    diagonal scale for the ranges certified here.
    """
    if n_max < 0:
        raise ConfigurationError(f"n_max must be nonnegative, got {n_max}")
    ws = weight_spec(series, m, params)
    if not ws.is_regular:
        raise SingularExtensionError(
            f"{series} extension with m={m} is singular; Gram matrix undefined",
            points=ws.singular_points,
        )
    omega = params.omega
    r_cut = max(10.0, 8.0 / math.sqrt(omega)) * (1.0 + math.sqrt(n_max + m))

    polys = []
    for n in range(n_max + 1):
        op = _operational(EOPSpec(series, n, m, params))
        S = _series_data(op)[0]
        polys.append((op.params.omega, S))

    def pval(i, r):
        w, S = polys[i]
        return S(0.5 * w * r * r)[0]

    G = np.zeros((n_max + 1, n_max + 1))
    for i in range(n_max + 1):
        for j in range(i, n_max + 1):
            val, _ = quad(
                lambda r: float(pval(i, r) * pval(j, r) * ws.weight.f(r) ** 2),
                0.0,
                r_cut,
                limit=400,
            )
            G[i, j] = G[j, i] = val
    return G


def gram_offdiag_max(G):
    """Largest |G_nn'| / sqrt(G_nn G_n'n') over n != n'."""
    d = np.sqrt(np.diag(G))
    normed = G / np.outer(d, d)
    off = normed - np.diag(np.diag(normed))
    return float(np.max(np.abs(off))) if G.shape[0] > 1 else 0.0


def zero_census(spec: EOPSpec):
    """(inside, outside) zero counts of the exceptional polynomial.

    `inside` counts real zeros with y > 0 (i.e. r in (0, inf)) by dense sign
    scan; `outside` is the remaining degree count (real negative plus
    complex zeros).
    """
    op = _operational(spec)
    S = _series_data(op)[0]
    deg = eop_polynomial_degree(spec)
    y_hi = 10.0 + 6.0 * (op.n + op.m + 2.0)
    n_samples = max(64 * (deg + 1), 256)
    ys = np.linspace(1e-9, y_hi, n_samples)
    vals = S(ys)[0]
    inside = int(np.count_nonzero(vals[:-1] * vals[1:] < 0.0))
    return inside, deg - inside
