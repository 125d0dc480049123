"""Root systems, certified algebraic elements, and spectral resolutions.

An element ``a`` is *algebraic* for a fixed set of distinct roots when
``p(a) = 0`` for the monic polynomial ``p`` with those roots.  Such an element
splits the space into spectral subspaces: the interpolation idempotents
``e_i = prod_{j != i} (a - l_j) / (l_i - l_j)`` form a partition of unity
(pairwise annihilating idempotents summing to the identity) and recover
``a = sum_i l_i e_i``.  This module certifies elements, builds the partition,
and samples random certified elements for experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadSignature, EmptyRealPart, MultipleRoots, NotAlgebraic, ResolutionResidualExceeded
from .matkernel import ToleranceConfig, as_matrix, identity_like, operator_norm
from .seeding import conditioned_invertible, haar_unitary, rng_from

__all__ = [
    "RootSystem",
    "AlgebraicElement",
    "PartitionOfUnity",
    "validate_roots",
    "certify",
    "q_reduction",
    "spectral_resolution",
    "recombine",
    "random_element",
]

_DISTINCTNESS_RTOL = 1e-12


@dataclass(frozen=True)
class RootSystem:
    """The fixed data of every experiment: distinct complex roots.

    ``min_gap`` is the smallest pairwise distance (infinite for a single
    root); ``all_real`` records whether the self-adjoint theory applies.
    """

    roots: tuple[complex, ...]
    min_gap: float
    all_real: bool

    @property
    def n(self) -> int:
        return len(self.roots)

    def poly_coeffs(self) -> np.ndarray:
        """Ascending coefficients of the monic defining polynomial."""
        coeffs = np.array([1.0 + 0.0j])
        for r in self.roots:
            coeffs = np.convolve(coeffs, np.array([-r, 1.0 + 0.0j]))
        return coeffs

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.roots == other.roots

    def __hash__(self):
        return hash(self.roots)


def validate_roots(roots) -> RootSystem:
    """Build a :class:`RootSystem`, rejecting repeated roots.

    Distinctness is essential: with a multiple root the solution set contains
    nilpotent-like elements with no spectral resolution at all, so such input
    is refused outright rather than handled approximately.
    """
    rs = tuple(complex(r) for r in roots)
    if len(rs) == 0:
        raise ValueError("need at least one root")
    scale = 1.0 + max(abs(r) for r in rs)
    min_gap = math.inf
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            gap = abs(rs[i] - rs[j])
            if gap < _DISTINCTNESS_RTOL * scale:
                raise MultipleRoots(
                    f"roots {rs[i]} and {rs[j]} coincide within {_DISTINCTNESS_RTOL * scale:.3e}"
                )
            min_gap = min(min_gap, gap)
    all_real = all(r.imag == 0.0 for r in rs)
    return RootSystem(roots=rs, min_gap=min_gap, all_real=all_real)


def q_reduction(roots: RootSystem) -> RootSystem:
    """Sub-system of the real roots, for processing self-adjoint elements.

    A self-adjoint element annihilated by the full polynomial is already
    annihilated by the factor collecting the real roots, so the complex ones
    can be dropped.  With no real root at all a self-adjoint element cannot
    exist (already impossible for 1x1 matrices), hence the error.
    """
    real = [r for r in roots.roots if r.imag == 0.0]
    if not real:
        raise EmptyRealPart("no real root: no self-adjoint element can satisfy the equation")
    return validate_roots(real)


@dataclass(frozen=True, eq=False)
class AlgebraicElement:
    """A matrix together with the certificate that it satisfies ``p(a) = 0``."""

    a: np.ndarray
    roots: RootSystem
    residual: float
    self_adjoint: bool

    @property
    def dim(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """Spectral idempotents of a certified element, one per root.

    ``worst_residual`` is the largest violation found across all partition
    invariants (idempotency, mutual annihilation, summing to one,
    commutation, reconstruction, and Hermiticity when applicable).
    """

    members: tuple[np.ndarray, ...]
    roots: RootSystem
    self_adjoint: bool
    worst_residual: float

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]


def eval_defining_poly(a: np.ndarray, roots: RootSystem) -> tuple[np.ndarray, float]:
    """Evaluate ``prod (a - l_i)`` and return it with its natural magnitude.

    The magnitude ``prod_i (||a|| + |l_i|)`` bounds the intermediate products,
    so residuals are meaningful relative to it even for very large arguments.
    """
    a = as_matrix(a)
    eye = identity_like(a)
    norm_a = operator_norm(a)
    value = eye
    scale = 1.0
    for r in roots.roots:
        value = value @ (a - r * eye)
        scale *= norm_a + abs(r)
    return value, max(1.0, scale)


def certify(a, roots: RootSystem, cfg: ToleranceConfig = ToleranceConfig()) -> AlgebraicElement:
    """Check ``p(a) = 0`` within tolerance and record the certificate.

    The acceptance threshold is ``residual_tol`` scaled by the evaluation
    magnitude, so elements far from the origin (points on a complex line, for
    instance) are judged against their own arithmetic rather than an absolute
    yardstick.
    """
    a = as_matrix(a)
    value, scale = eval_defining_poly(a, roots)
    residual = operator_norm(value)
    tol = cfg.residual_tol * scale
    if residual > tol:
        raise NotAlgebraic(residual, tol)
    herm = operator_norm(a - a.conj().T)
    self_adjoint = herm <= cfg.residual_tol * (1.0 + operator_norm(a))
    return AlgebraicElement(a=a, roots=roots, residual=residual, self_adjoint=self_adjoint)


def _resolution_tolerance(norm_a: float, roots: RootSystem, cfg: ToleranceConfig) -> float:
    # Interpolation denominators govern the attainable accuracy: each factor
    # contributes up to (||a|| + max|l|) / min_gap.
    if roots.n == 1 or not math.isfinite(roots.min_gap):
        cond = 1.0
    else:
        grow = (norm_a + max(abs(r) for r in roots.roots)) / roots.min_gap
        cond = max(1.0, grow) ** (roots.n - 1)
    return cfg.residual_tol * (1.0 + norm_a) * cond


def spectral_resolution(el: AlgebraicElement, cfg: ToleranceConfig = ToleranceConfig()) -> PartitionOfUnity:
    """Interpolation idempotents of a certified element.

    Each member is the defining polynomial of the other roots, normalized to
    take value one at its own root, evaluated at the element; factors are
    multiplied in order of increasing root distance to limit cancellation.
    All partition invariants are verified before the result is returned.
    """
    a = el.a
    eye = identity_like(a)
    norm_a = operator_norm(a)
    n = el.roots.n

    members = []
    for i, li in enumerate(el.roots.roots):
        others = sorted((r for j, r in enumerate(el.roots.roots) if j != i), key=lambda r: abs(li - r))
        e = eye
        for r in others:
            e = e @ (a - r * eye) / (li - r)
        members.append(e)

    tol = _resolution_tolerance(norm_a, el.roots, cfg)
    tol_comm = tol  # commutation and reconstruction share the scaled budget
    worst = 0.0

    def bump(value: float, label: str, limit: float):
        nonlocal worst
        worst = max(worst, value)
        if value > limit:
            raise ResolutionResidualExceeded(
                f"{label} residual {value:.3e} exceeds {limit:.3e} "
                f"(min_gap {el.roots.min_gap:.3e})"
            )

    total = np.zeros_like(a)
    recon = np.zeros_like(a)
    for i, e in enumerate(members):
        bump(operator_norm(e @ e - e), f"idempotency[{i}]", tol)
        bump(operator_norm(e @ a - a @ e), f"commutation[{i}]", tol_comm)
        total = total + e
        recon = recon + el.roots.roots[i] * e
    for i in range(n):
        for j in range(n):
            if i != j:
                bump(operator_norm(members[i] @ members[j]), f"annihilation[{i},{j}]", tol)
    bump(operator_norm(total - eye), "sum-to-one", tol)
    bump(operator_norm(recon - a), "reconstruction", tol_comm)

    self_adjoint = el.self_adjoint
    if self_adjoint:
        for i, e in enumerate(members):
            bump(operator_norm(e - e.conj().T), f"hermiticity[{i}]", tol)

    return PartitionOfUnity(
        members=tuple(members), roots=el.roots, self_adjoint=self_adjoint, worst_residual=worst
    )


def recombine(part: PartitionOfUnity, cfg: ToleranceConfig = ToleranceConfig()) -> AlgebraicElement:
    """Reassemble the element ``sum_i l_i e_i`` and re-certify it."""
    acc = np.zeros_like(part.members[0])
    for r, e in zip(part.roots.roots, part.members):
        acc = acc + r * e
    return certify(acc, part.roots, cfg)


def random_element(
    sig,
    roots: RootSystem,
    seed: int,
    self_adjoint: bool = False,
    cond_bound: float = 20.0,
    cfg: ToleranceConfig = ToleranceConfig(),
) -> AlgebraicElement:
    """Random certified element with the prescribed rank signature.

    Conjugates the diagonal model (root ``l_i`` repeated ``sig[i]`` times) by
    a random similarity with bounded condition number, or by a random unitary
    in the self-adjoint case.  Deterministic per seed.
    """
    ranks = tuple(int(r) for r in getattr(sig, "ranks", sig))
    if len(ranks) != roots.n or any(r < 0 for r in ranks):
        raise BadSignature(f"rank vector {ranks} does not fit {roots.n} roots")
    m = sum(ranks)
    if m <= 0:
        raise BadSignature("total dimension must be positive")
    if self_adjoint and not roots.all_real:
        raise BadSignature("self-adjoint sampling needs an all-real root system")

    present = [i for i, r in enumerate(ranks) if r > 0]
    if len(present) == 1:
        a = roots.roots[present[0]] * np.eye(m, dtype=complex)
        return certify(a, roots, cfg)

    diag = np.repeat(np.array(roots.roots, dtype=complex), ranks)
    rng = rng_from(seed)
    if self_adjoint:
        u = haar_unitary(m, rng)
        a = (u * diag) @ u.conj().T
        a = 0.5 * (a + a.conj().T)  # exact Hermiticity
    else:
        s = conditioned_invertible(m, cond_bound, rng)
        a = np.linalg.solve(s.T, (s * diag).T).T  # s diag(d) s^{-1}
    return certify(a, roots, cfg)
