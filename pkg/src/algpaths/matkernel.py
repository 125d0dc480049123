"""Dense complex square-matrix kernel.

Everything downstream (spectral resolutions, connecting paths, component
probes) is built on the handful of primitives here: the operator norm, a
thresholded rank, the matrix exponential and near-identity logarithm, and
exact arithmetic on polynomials with matrix coefficients.  All matrices are
``numpy`` arrays of shape ``(m, m)`` with complex128 entries; values are never
mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotNearIdentity

__all__ = [
    "ToleranceConfig",
    "as_matrix",
    "identity_like",
    "operator_norm",
    "rank",
    "mat_exp",
    "mat_log_near_identity",
    "poly_from_roots",
    "poly_eval_scalar_coeffs",
    "MatrixPolynomial",
    "matpoly_mul",
    "matpoly_compose_p",
    "matpoly_is_zero",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Single knob set for the whole certification chain.

    residual_tol
        Base tolerance for every residual certificate; operations scale it by
        the magnitude of their inputs where the arithmetic demands it.
    rank_rel_tol
        Relative singular-value cutoff for rank decisions.
    invertibility_margin
        How close to the identity an argument must be before the series
        logarithm is trusted (strictly below 1).
    """

    residual_tol: float = 1e-9
    rank_rel_tol: float = 1e-10
    invertibility_margin: float = 0.99

    def __post_init__(self):
        if self.residual_tol < 0 or self.rank_rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if not 0.0 < self.invertibility_margin < 1.0:
            raise ValueError("invertibility_margin must lie in (0, 1)")


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting non-finite entries."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def identity_like(a: np.ndarray) -> np.ndarray:
    return np.eye(a.shape[0], dtype=complex)


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value: the norm of the full matrix algebra."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def rank(a: np.ndarray, cfg: ToleranceConfig = ToleranceConfig()) -> int:
    """Number of singular values above ``rank_rel_tol * sigma_max * m``."""
    a = as_matrix(a)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    thr = cfg.rank_rel_tol * s[0] * a.shape[0]
    return int(np.count_nonzero(s > thr))


# -- exponential and logarithm ------------------------------------------------

_EXP_SERIES_MAX_TERMS = 40


def mat_exp(x: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a series core.

    The argument is scaled so its operator norm is at most 0.5, the series is
    summed to machine precision (it terminates after a handful of terms at
    that norm), and the result is squared back up.
    """
    x = as_matrix(x)
    nrm = operator_norm(x)
    if nrm == 0.0:
        return identity_like(x)
    squarings = max(0, int(np.ceil(np.log2(nrm / 0.5))))
    y = x / (2.0**squarings)

    acc = identity_like(x)
    term = identity_like(x)
    for k in range(1, _EXP_SERIES_MAX_TERMS + 1):
        term = term @ y / k
        acc = acc + term
        if np.max(np.abs(term)) <= np.finfo(float).eps * np.max(np.abs(acc)):
            break
    for _ in range(squarings):
        acc = acc @ acc
    return acc


_LOG_SERIES_MAX_TERMS = 20000


def mat_log_near_identity(w: np.ndarray, cfg: ToleranceConfig = ToleranceConfig()) -> np.ndarray:
    """Principal logarithm of a matrix close to the identity.

    Sums ``log(1 + X) = X - X^2/2 + X^3/3 - ...`` for ``X = w - 1``.  The
    series needs ``||X|| < 1``; the configured margin keeps a safety strip
    away from the boundary, where convergence slows and accuracy degrades.
    Raises :class:`NotNearIdentity` when the argument is too far out.
    """
    w = as_matrix(w)
    x = w - identity_like(w)
    dist = operator_norm(x)
    if dist >= cfg.invertibility_margin:
        raise NotNearIdentity(
            f"||w - 1|| = {dist:.6f} >= margin {cfg.invertibility_margin}"
        )
    if dist == 0.0:
        return np.zeros_like(w)

    acc = np.array(x)
    power = np.array(x)
    sign = -1.0
    for k in range(2, _LOG_SERIES_MAX_TERMS + 1):
        power = power @ x
        term = (sign / k) * power
        acc = acc + term
        sign = -sign
        # ||X^k|| <= dist**k, so once the bound drops below round-off the
        # remaining tail cannot move the sum.
        if np.max(np.abs(power)) / (k + 1) <= np.finfo(float).eps * max(1.0, np.max(np.abs(acc))):
            break
    return acc


# -- scalar-coefficient polynomials -------------------------------------------

def poly_from_roots(roots) -> np.ndarray:
    """Ascending coefficients of the monic polynomial with the given roots."""
    coeffs = np.array([1.0 + 0.0j])
    for r in roots:
        coeffs = np.convolve(coeffs, np.array([-complex(r), 1.0 + 0.0j]))
    return coeffs


def poly_eval_scalar_coeffs(p_coeffs, a: np.ndarray) -> np.ndarray:
    """Horner evaluation of a scalar-coefficient polynomial at a matrix.

    ``p_coeffs[k]`` is the coefficient of the k-th power.
    """
    a = as_matrix(a)
    coeffs = [complex(c) for c in p_coeffs]
    if not coeffs:
        return np.zeros_like(a)
    eye = identity_like(a)
    acc = coeffs[-1] * eye
    for c in reversed(coeffs[:-1]):
        acc = acc @ a + c * eye
    return acc


# -- polynomials with matrix coefficients -------------------------------------

@dataclass(frozen=True)
class MatrixPolynomial:
    """Polynomial in a scalar parameter with square-matrix coefficients.

    ``coeffs`` has shape ``(degree + 1, m, m)``; index k holds the coefficient
    of ``t**k``.  ``normalized`` asserts a nonzero leading coefficient; stated
    degrees of compositions are only upper bounds, so they carry
    ``normalized=False``.
    """

    coeffs: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise ValueError(f"expected coefficients of shape (d+1, m, m), got {c.shape}")
        object.__setattr__(self, "coeffs", c)
        if self.normalized and self.degree > 0 and not np.any(self.coeffs[-1]):
            raise ValueError("leading coefficient is zero; flag the polynomial non-normalized")

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    def eval(self, t: complex) -> np.ndarray:
        """Horner evaluation at a scalar parameter value."""
        acc = np.array(self.coeffs[-1])
        for k in range(self.degree - 1, -1, -1):
            acc = acc * t + self.coeffs[k]
        return acc

    def deriv(self) -> "MatrixPolynomial":
        if self.degree == 0:
            return MatrixPolynomial(np.zeros_like(self.coeffs), normalized=False)
        ks = np.arange(1, self.degree + 1).reshape(-1, 1, 1)
        return MatrixPolynomial(self.coeffs[1:] * ks, normalized=False)

    @staticmethod
    def constant(a: np.ndarray) -> "MatrixPolynomial":
        return MatrixPolynomial(as_matrix(a)[None, :, :])

    @staticmethod
    def line(a: np.ndarray, b: np.ndarray) -> "MatrixPolynomial":
        """The pencil ``a + t b``."""
        return MatrixPolynomial(np.stack([as_matrix(a), as_matrix(b)]), normalized=False)

    @staticmethod
    def segment(a: np.ndarray, b: np.ndarray) -> "MatrixPolynomial":
        """The straight segment ``(1 - t) a + t b``."""
        a = as_matrix(a)
        return MatrixPolynomial(np.stack([a, as_matrix(b) - a]), normalized=False)


def matpoly_mul(x: MatrixPolynomial, y: MatrixPolynomial) -> MatrixPolynomial:
    """Coefficient convolution; left factors stay on the left."""
    if x.dim != y.dim:
        raise ValueError("coefficient dimensions differ")
    out = np.zeros((x.degree + y.degree + 1, x.dim, x.dim), dtype=complex)
    for i, xi in enumerate(x.coeffs):
        # one einsum per left coefficient: out[i + j] += xi @ yj for all j
        out[i : i + y.degree + 1] += np.einsum("ab,jbc->jac", xi, y.coeffs)
    return MatrixPolynomial(out, normalized=False)


def matpoly_compose_p(p_coeffs, x: MatrixPolynomial) -> MatrixPolynomial:
    """Exact coefficients of ``p(x(t))`` for a scalar-coefficient ``p``.

    Horner in the ring of matrix-coefficient polynomials: the result has
    degree at most ``deg(p) * deg(x)`` and is exact up to floating-point
    rounding in the convolutions.
    """
    coeffs = [complex(c) for c in p_coeffs]
    m = x.dim
    eye = np.eye(m, dtype=complex)
    if not coeffs:
        return MatrixPolynomial(np.zeros((1, m, m), dtype=complex), normalized=False)
    acc = MatrixPolynomial((coeffs[-1] * eye)[None, :, :], normalized=False)
    for c in reversed(coeffs[:-1]):
        acc = matpoly_mul(acc, x)
        new = np.array(acc.coeffs)
        new[0] += c * eye
        acc = MatrixPolynomial(new, normalized=False)
    # pad to the stated upper bound so callers see a fixed shape
    want = (len(coeffs) - 1) * x.degree + 1
    if acc.coeffs.shape[0] < want:
        pad = np.zeros((want - acc.coeffs.shape[0], m, m), dtype=complex)
        acc = MatrixPolynomial(np.concatenate([acc.coeffs, pad]), normalized=False)
    return acc


def matpoly_is_zero(
    q: MatrixPolynomial,
    cfg: ToleranceConfig = ToleranceConfig(),
    scale: float = 0.0,
) -> tuple[bool, float]:
    """Certify that every coefficient vanishes.

    Returns ``(verdict, worst)`` where ``worst`` is the largest coefficient
    operator norm — the certificate value.  The verdict compares against
    ``residual_tol * (1 + scale)``; pass the magnitude of whatever produced
    ``q`` (endpoint norms, root sizes) as ``scale`` so huge inputs are judged
    relative to their own arithmetic.
    """
    worst = 0.0
    for c in q.coeffs:
        worst = max(worst, operator_norm(c))
    return worst <= cfg.residual_tol * (1.0 + scale), worst
