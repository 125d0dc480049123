"""Connected-component classification and component-geometry probes.

In a full matrix algebra two certified elements over the same roots lie in the
same connected component of the solution set exactly when their spectral
idempotents have equal ranks: equal rank vectors make both similar to the same
diagonal model, and the invertible group is path-connected.  The rank vector
is therefore the component invariant used throughout.  On top of it sit the
isolation test (scalar elements are alone in their component), the search for
a complex line through a non-central element, and randomized distance scans
between distinct components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebraic import AlgebraicElement, RootSystem, certify, random_element, spectral_resolution
from .errors import BadSignature, CentralElement, DimMismatch, RankAmbiguous, RootMismatch, SearchExhausted
from .matkernel import (
    MatrixPolynomial,
    ToleranceConfig,
    matpoly_compose_p,
    matpoly_is_zero,
    operator_norm,
)
from .seeding import rng_from

__all__ = [
    "ComponentSignature",
    "LineWitness",
    "DistanceScanReport",
    "partition_ranks",
    "signature",
    "same_component",
    "is_isolated",
    "line_direction",
    "distance_scan",
]


@dataclass(frozen=True)
class ComponentSignature:
    """Rank of each spectral idempotent, in root order."""

    ranks: tuple[int, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        if any(r < 0 for r in self.ranks) or sum(self.ranks) != self.dim:
            raise BadSignature(f"ranks {self.ranks} do not sum to dim {self.dim}")


@dataclass(frozen=True, eq=False)
class LineWitness:
    """A direction ``b != 0`` with ``p(a0 + t b) = 0`` identically.

    ``certificate`` is the largest coefficient norm of the composed
    polynomial — zero up to rounding for a genuine witness.
    """

    base: AlgebraicElement
    direction: np.ndarray
    certificate: float


@dataclass(frozen=True, eq=False)
class DistanceScanReport:
    """Outcome of a randomized minimum-distance probe between two components.

    ``best_distance`` is the smallest operator-norm distance found; the
    report never claims a lower bound.  ``conjecture_bound`` stores the
    smallest root gap for comparison.
    """

    sig_pair: tuple[ComponentSignature, ComponentSignature]
    best_distance: float
    witness: tuple[AlgebraicElement, AlgebraicElement]
    restarts: int
    seed: int
    conjecture_bound: float
    self_adjoint: bool


def partition_ranks(part, cfg: ToleranceConfig = ToleranceConfig()) -> list[int]:
    """Ranks of partition members, with a conditioning guard.

    A nonzero idempotent has norm >= 1, so partition members live on the
    scale of 1; flooring the threshold scale there keeps numerically-zero
    members (pure round-off, norms ~1e-16) from being ranked by their own
    dust.  A singular value within a factor ten of the threshold means the
    rank decision is not trustworthy, and the ranks of a genuine partition
    must sum to the dimension.
    """
    m = part.dim
    ranks = []
    for i, e in enumerate(part.members):
        s = np.linalg.svd(e, compute_uv=False)
        thr = cfg.rank_rel_tol * max(s[0], 1.0) * m
        window = (s > thr / 10.0) & (s < thr * 10.0)
        if np.any(window):
            raise RankAmbiguous(
                f"singular value {s[window][0]:.3e} of idempotent {i} is within a factor 10 "
                f"of the rank threshold {thr:.3e}"
            )
        ranks.append(int(np.count_nonzero(s > thr)))
    if sum(ranks) != m:
        raise RankAmbiguous(f"idempotent ranks {ranks} do not sum to the dimension {m}")
    return ranks


def signature(el: AlgebraicElement, cfg: ToleranceConfig = ToleranceConfig()) -> ComponentSignature:
    """Rank vector of the spectral idempotents."""
    part = spectral_resolution(el, cfg)
    return ComponentSignature(ranks=tuple(partition_ranks(part, cfg)), dim=el.dim)


def same_component(
    x: AlgebraicElement, y: AlgebraicElement, cfg: ToleranceConfig = ToleranceConfig()
) -> bool:
    """Whether two certified elements share a connected component."""
    if x.dim != y.dim:
        raise DimMismatch(f"dims {x.dim} and {y.dim} differ")
    if x.roots != y.roots:
        raise RootMismatch("elements were certified over different root systems")
    return signature(x, cfg) == signature(y, cfg)


def is_isolated(el: AlgebraicElement, cfg: ToleranceConfig = ToleranceConfig()) -> bool:
    """Whether the component of ``el`` is the single point ``{el}``.

    Happens exactly when one idempotent has full rank, i.e. the element is a
    scalar — the only kind of matrix that commutes with everything.
    """
    return any(r == el.dim for r in signature(el, cfg).ranks)


def line_direction(el: AlgebraicElement, cfg: ToleranceConfig = ToleranceConfig()) -> LineWitness:
    """Direction of a complex line through ``el`` inside its component.

    Candidates ``e_i E_kl e_j`` (i != j) are scanned in lexicographic order;
    such a direction shifts one spectral subspace toward another and leaves
    the defining polynomial identically zero along the whole line.  The first
    candidate of non-negligible size that also certifies wins, which makes
    witnesses reproducible.
    """
    part = spectral_resolution(el, cfg)
    if any(r == el.dim for r in signature(el, cfg).ranks):
        raise CentralElement("scalar element: its component is a single point, no line exists")

    m = el.dim
    a = el.a
    norm_a = operator_norm(a)
    members = part.members
    norms = [operator_norm(e) for e in members]
    p_coeffs = el.roots.poly_coeffs()

    for i in range(len(members)):
        for j in range(len(members)):
            if i == j:
                continue
            for k in range(m):
                for l in range(m):
                    # b = e_i E_kl e_j without forming E_kl: outer product of
                    # column k of e_i with row l of e_j.
                    b = np.outer(members[i][:, k], members[j][l, :])
                    nb = operator_norm(b)
                    if nb <= cfg.residual_tol * norms[i] * norms[j]:
                        continue
                    line = MatrixPolynomial.line(a, b)
                    q = matpoly_compose_p(p_coeffs, line)
                    scale = 1.0
                    for r in el.roots.roots:
                        scale *= norm_a + nb + abs(r)
                    ok, worst = matpoly_is_zero(q, cfg, scale=scale)
                    if ok:
                        return LineWitness(base=el, direction=b, certificate=worst)
    raise SearchExhausted("no candidate direction certified; partition invariants are suspect")


# -- distance scans ------------------------------------------------------------


def _descend_pair(x, y, rng, self_adjoint, inner_iters=200, delta0=0.25):
    """Greedy local descent of ||x - y|| by conjugating one endpoint at a time.

    Conjugation keeps each endpoint exactly on its component, so there is no
    projection step; the step size is halved whenever a move does not improve
    the distance.
    """
    m = x.shape[0]
    eye = np.eye(m, dtype=complex)
    dist = operator_norm(x - y)
    delta = delta0
    for it in range(inner_iters):
        if delta < 1e-12:
            break
        z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        z /= np.linalg.norm(z)
        if self_adjoint:
            h = 0.5 * (z + z.conj().T)
            # Cayley transform: exactly unitary for Hermitian h
            g = np.linalg.solve(eye - 0.5j * delta * h, eye + 0.5j * delta * h)
        else:
            g = eye + delta * z
        target = x if it % 2 == 0 else y
        moved = g @ target
        if self_adjoint:
            moved = moved @ g.conj().T
            moved = 0.5 * (moved + moved.conj().T)
        else:
            moved = np.linalg.solve(g.T, moved.T).T
        cand = operator_norm(moved - y) if it % 2 == 0 else operator_norm(x - moved)
        # require a genuine decrease; round-off level "improvements" would
        # let exactly-placed pairs (scalars) drift off their true distance
        if cand < dist - 1e-13 * (1.0 + dist):
            dist = cand
            if it % 2 == 0:
                x = moved
            else:
                y = moved
        else:
            delta *= 0.5
    return dist, x, y


def _scan_restart(args):
    (k, seed, sig1, sig2, roots, self_adjoint, cond_bound) = args
    x = random_element(sig1, roots, seed=(seed, k, 0), self_adjoint=self_adjoint, cond_bound=cond_bound)
    y = random_element(sig2, roots, seed=(seed, k, 1), self_adjoint=self_adjoint, cond_bound=cond_bound)
    dist, xa, ya = _descend_pair(x.a, y.a, rng_from(seed, k, 2), self_adjoint)
    return dist, k, xa, ya


def distance_scan(
    sig1: ComponentSignature,
    sig2: ComponentSignature,
    roots: RootSystem,
    budget: int,
    seed: int,
    self_adjoint: bool = False,
    cfg: ToleranceConfig = ToleranceConfig(),
    cond_bound: float = 20.0,
    workers: int = 1,
) -> DistanceScanReport:
    """Randomized probe of the distance between two components.

    Runs ``budget`` independent restarts, each sampling a pair and descending
    locally, and reports the smallest distance found together with the
    witnessing pair.  Restart ``k`` draws from the sub-stream ``(seed, k)``,
    so reports are reproducible, enlarging the budget only extends the
    restart list, and parallel execution reduces to the same answer.
    """
    if sig1 == sig2:
        raise BadSignature("distance scan needs two distinct signatures")
    if sig1.dim != sig2.dim:
        raise BadSignature("signatures live in different dimensions")
    for s in (sig1, sig2):
        if len(s.ranks) != roots.n:
            raise BadSignature(f"signature {s.ranks} does not fit {roots.n} roots")
    if budget < 1:
        raise BadSignature("budget must be positive")

    jobs = [(k, seed, sig1, sig2, roots, self_adjoint, cond_bound) for k in range(budget)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_restart, jobs, chunksize=max(1, budget // (8 * workers))))
    else:
        results = [_scan_restart(j) for j in jobs]

    best = min(results, key=lambda t: (t[0], t[1]))
    dist, _, xa, ya = best
    wx = certify(xa, roots, cfg)
    wy = certify(ya, roots, cfg)
    return DistanceScanReport(
        sig_pair=(sig1, sig2),
        best_distance=float(dist),
        witness=(wx, wy),
        restarts=budget,
        seed=seed,
        conjecture_bound=roots.min_gap,
        self_adjoint=self_adjoint,
    )
