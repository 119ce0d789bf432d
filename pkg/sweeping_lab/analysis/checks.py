"""
Numerical checks of the quantitative statements about sweeping processes.

Every check returns a CheckReport built from per-sample margins, where a
negative margin beyond the tolerance is a violation.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from typing import Final

import numpy as np
from numpy.typing import NDArray

from ..catchup.integrator import integrate
from ..catchup.models import ConvergenceTable, Perturbation, Problem, Trajectory
from ..crowd.contacts import contact_basis
from ..crowd.models import DiskConfiguration
from ..crowd.simulation import corridor_witness
from ..duality.maps import PNormSpace, dual_norm, jp, norm, norm_gradient
from ..eikonal.fast_marching import (
    dijkstra_distance,
    fast_marching,
    solve_eikonal,
    spontaneous_velocity,
)
from ..eikonal.models import EXIT, OBSTACLE
from ..errors import InvalidInputError, SolverError
from ..geometry.disks import constraint_values
from ..geometry.models import (
    ANALYTIC_KINDS,
    BallExterior,
    ConstraintSet,
    DiskConfigurationSet,
    HalfSpace,
    MovingSet,
)
from ..geometry.sets import distance, feasible, hausdorff_distance, motion_speed, set_at
from ..projection.cone import project_cone
from ..projection.oracles import in_gamma_r, project_normal_cone
from ..settings import tolerance_settings
from .models import CheckReport, ReportBuilder

BOUND_SLACK: Final[float] = 1e-9
IDENTITY_TOL: Final[float] = 1e-10
BRUTE_FORCE_TOL: Final[float] = 1e-8
GAMMA_SCALE_CAP: Final[float] = 1e6
SCALING_FACTORS: Final[tuple[float, ...]] = tuple(k / 10 for k in range(1, 10))
DOUBLING_SLACK: Final[float] = 2.0
DOUBLING_TOL: Final[float] = 1e-12

Array = NDArray[np.float64]
NormalPair = tuple[Array, Array, Array, Array]

logger = logging.getLogger(__name__)


def sample_normal_pairs(
    set_: ConstraintSet, count: int, seed: int = 0, magnitude: float = 2.0
) -> list[NormalPair]:
    """
    Random (z1, zeta1, z2, zeta2) with z_k on the boundary and zeta_k in N(C, z_k).

    Raises:
        InvalidInputError: If the set kind has no closed-form normal cone sampler
    """
    rng = np.random.default_rng(seed)

    def boundary_normal() -> tuple[Array, Array]:
        match set_:
            case BallExterior(center=c, radius=radius):
                e = rng.standard_normal(set_.dim)
                e /= np.linalg.norm(e)
                return c + radius * e, -rng.uniform(0.0, magnitude) * e
            case HalfSpace(normal=n, offset=b):
                unit = n / np.linalg.norm(n)
                tangent = rng.standard_normal(set_.dim)
                tangent -= np.dot(tangent, unit) * unit
                z = unit * b / np.linalg.norm(n) + tangent
                return z, rng.uniform(0.0, magnitude) * unit
        raise InvalidInputError(f"no normal cone sampler for {set_.kind}")

    return [(*boundary_normal(), *boundary_normal()) for _ in range(count)]


def check_hypomonotonicity(
    set_: ConstraintSet,
    pairs: Sequence[NormalPair],
    eta: float | None = None,
    name: str = "hypomonotonicity",
) -> CheckReport:
    """
    <zeta1 - zeta2, z1 - z2> >= -(|zeta1| + |zeta2|) / eta |z1 - z2|^2.

    ``eta`` defaults to the declared prox constant; eta = inf is plain monotonicity.
    """
    eta = set_.prox_constant if eta is None else eta
    builder = ReportBuilder(name, BOUND_SLACK)
    for z1, zeta1, z2, zeta2 in pairs:
        lhs = float(np.dot(zeta1 - zeta2, z1 - z2))
        weight = (np.linalg.norm(zeta1) + np.linalg.norm(zeta2)) / eta
        rhs = -float(weight) * float(np.dot(z1 - z2, z1 - z2))
        builder.record(lhs - rhs, "hypomonotone inequality", [*z1, *zeta1, *z2, *zeta2])
    return builder.build(details={"eta": eta})


def check_equation_equivalence(
    trajectory: Trajectory,
    set_: ConstraintSet,
    field: Perturbation,
    constant: float | None = None,
) -> CheckReport:
    """
    Central-difference residual of du/dt = f(u) - P_{N(C,u)} f(u) at interior grid times.

    Passes when every residual is at most ``constant`` * h. The default constant
    is 4 F (F / eta + L_f) for the sup bound F, prox constant eta and Lipschitz
    constant L_f of f. The check assumes the set of active constraints does not
    switch inside the window.
    """
    h = trajectory.h
    f_inf = float(np.max(trajectory.bounds)) if trajectory.n else 0.0
    if constant is None:
        lipschitz = field.lipschitz or 0.0
        constant = 4.0 * f_inf * (f_inf / set_.prox_constant + lipschitz)
    builder = ReportBuilder("equation-equivalence", BOUND_SLACK)
    worst = 0.0
    for i in range(1, trajectory.n):
        u = trajectory.states[i]
        fval = field(u)
        central = (trajectory.states[i + 1] - trajectory.states[i - 1]) / (2.0 * h)
        expected = fval - project_normal_cone(set_, u, fval)
        residual = float(np.linalg.norm(central - expected))
        worst = max(worst, residual)
        builder.record(constant * h - residual, f"residual at t={trajectory.times[i]!r}", list(u))
    return builder.build(
        surrogate="central differences of the discrete solution at interior grid times",
        details={"h": h, "max_residual": worst, "c_eq": worst / h, "constant": constant},
    )


def _with_initial(problem: Problem, u0: Sequence[float] | Array) -> Problem:
    return Problem(
        moving_set=problem.moving_set,
        field=problem.field,
        u0=u0,
        horizon=problem.horizon,
        r=problem.r,
    )


def check_stability(
    problem: Problem,
    u0: Sequence[float] | Array,
    v0: Sequence[float] | Array,
    n: int,
    a: float | None = None,
    seed: int = 0,
) -> CheckReport:
    """
    sup_t |u_n(t) - v_n(t)| <= a |u0 - v0| for two initial data.

    ``a`` defaults to exp(L_f T) (1 + 1e-2).

    Raises:
        InvalidInputError: If no constant is given and f has no Lipschitz constant
    """
    if a is None:
        if problem.field.lipschitz is None:
            raise InvalidInputError("declare a stability constant for this perturbation")
        a = math.exp(problem.field.lipschitz * problem.horizon) * (1.0 + 1e-2)
    first = integrate(_with_initial(problem, u0), n, seed=seed)
    second = integrate(_with_initial(problem, v0), n, seed=seed)
    initial = float(np.linalg.norm(np.asarray(u0, dtype=np.float64) - np.asarray(v0, dtype=np.float64)))
    divergence = float(np.max(np.linalg.norm(first.states - second.states, axis=1)))
    ratio = 0.0 if initial == 0.0 else divergence / initial

    builder = ReportBuilder("stability", BOUND_SLACK)
    builder.record(a - ratio, "divergence ratio", [*np.asarray(u0), *np.asarray(v0)])
    return builder.build(details={"ratio": ratio, "a": a, "divergence": divergence})


def audit_trajectory(trajectory: Trajectory, problem: Problem, seed: int = 0) -> CheckReport:
    """
    Re-evaluate the per-step bounds of a trajectory.

    With F_i the bound of |f| on step i and k the motion speed: |Delta^i| <= F_i + k,
    |f^i| <= F_i, |u^{i+1} - u^i| / h <= 2 F_i + k and every state in its set.

    Analytic sets also get the interpolant within h F_i (fixed sets) or
    h (2 F_i + k) (moving sets) of C(t), and -Delta^i a good direction at the
    scale r / (F_i + k). Disk configurations are checked at grid points only.
    """
    builder = ReportBuilder("audit", BOUND_SLACK)
    h, k = trajectory.h, trajectory.motion_speed
    moving = problem.moving_set
    analytic = moving.base.kind in ANALYTIC_KINDS
    tol = tolerance_settings.tol_feas

    for i in range(trajectory.n):
        bound = float(trajectory.bounds[i])
        u, nxt = trajectory.states[i], trajectory.states[i + 1]
        delta = trajectory.deltas[i]
        delta_norm = float(np.linalg.norm(delta))
        builder.record(bound + k - delta_norm, f"delta bound at step {i}", list(delta))
        builder.record(
            bound - float(np.linalg.norm(trajectory.perturbations[i])),
            f"perturbation bound at step {i}",
            list(trajectory.perturbations[i]),
        )
        speed = float(np.linalg.norm(nxt - u)) / h
        builder.record(2.0 * bound + k - speed, f"speed bound at step {i}", list(nxt - u))

        target = set_at(moving, float(trajectory.times[i + 1]))
        builder.record(
            _feasibility_margin(target, nxt, tol), f"feasibility at step {i + 1}", list(nxt)
        )

        if analytic:
            allowed = h * (2.0 * bound + k) if k > 0 else h * bound
            for theta in (0.25, 0.5, 0.75):
                t = float(trajectory.times[i]) + theta * h
                gap = distance(set_at(moving, t), u + theta * (nxt - u))
                builder.record(allowed - gap, f"interpolant gap at t={t!r}", list(u))
            if delta_norm > 0.0 and bound + k > 0.0:
                scale = min(problem.r, GAMMA_SCALE_CAP) / (bound + k)
                good = in_gamma_r(target, nxt, -delta, scale, seed=seed)
                builder.record(0.0 if good else -1.0, f"good direction at step {i}", list(delta))

    return builder.build(
        surrogate=(
            "per-step bounds of the discrete scheme"
            + ("" if analytic else "; feasibility at grid points only, no interpolant samples")
        ),
        details={
            "max_delta": float(np.max(np.linalg.norm(trajectory.deltas, axis=1))) if trajectory.n else 0.0,
            "max_bound": float(np.max(trajectory.bounds)) if trajectory.n else 0.0,
            "motion_speed": k,
        },
    )


def _feasibility_margin(set_: ConstraintSet, x: Array, tol: float) -> float:
    if set_.kind in ANALYTIC_KINDS:
        return tol - distance(set_, x)
    if isinstance(set_, DiskConfigurationSet):
        return float(np.min(constraint_values(set_, x))) + tol
    return tol if feasible(set_, x, tol) else -1.0


def random_contact_configuration(
    rng: np.random.Generator, max_disks: int = 5, radius: float = 1.0
) -> DiskConfiguration:
    """Disks placed one at a time, each touching a random earlier disk without overlaps."""
    count = int(rng.integers(2, max_disks + 1))
    placed = [np.zeros(2)]
    while len(placed) < count:
        anchor = placed[int(rng.integers(len(placed)))]
        angle = rng.uniform(0.0, 2.0 * math.pi)
        candidate = anchor + 2.0 * radius * np.array([math.cos(angle), math.sin(angle)])
        if all(np.linalg.norm(candidate - c) >= 2.0 * radius - 1e-12 for c in placed):
            placed.append(candidate)
    return DiskConfiguration(q=np.concatenate(placed), radius=radius)


def check_moreau_decomposition(count: int = 1000, max_disks: int = 5, seed: int = 0) -> CheckReport:
    """
    At random contact configurations: U = v + P_N(U), <v, P_N(U)> = 0, lambda >= 0,
    G_k . v >= 0 and lambda_k (G_k . v) = 0.
    """
    rng = np.random.default_rng(seed)
    builder = ReportBuilder("moreau-decomposition", IDENTITY_TOL)
    for _ in range(count):
        config = random_contact_configuration(rng, max_disks)
        basis = contact_basis(config)
        u = rng.standard_normal(config.q.size)
        v, lambdas = project_cone(basis.gradients, u)
        normal = -(basis.gradients.T @ lambdas) if basis.size else np.zeros_like(u)
        scale = 1.0 + float(np.linalg.norm(u))
        inputs = [*config.q, *u]
        builder.record(-float(np.linalg.norm(v + normal - u)) / scale, "sum identity", inputs)
        builder.record(-abs(float(np.dot(v, normal))) / scale**2, "orthogonality", inputs)
        if basis.size:
            products = basis.gradients @ v
            builder.record(float(np.min(lambdas)), "nonnegative multipliers", inputs)
            builder.record(float(np.min(products)) / scale, "feasible velocity", inputs)
            builder.record(
                -float(np.max(np.abs(lambdas * products))) / scale, "complementarity", inputs
            )
    return builder.build()


def brute_force_cone_projection(gradients: Array, u: Array) -> Array:
    """Projection onto {w : G w >= 0} by enumerating every candidate active set."""
    best, best_cost = None, math.inf
    m = gradients.shape[0]
    for size in range(m + 1):
        for subset in itertools.combinations(range(m), size):
            if subset:
                g = gradients[list(subset)]
                lambdas = -np.linalg.lstsq(g @ g.T, g @ u, rcond=None)[0]
                if np.any(lambdas < -1e-12):
                    continue
                v = u + g.T @ lambdas
            else:
                v = u.copy()
            if np.any(gradients @ v < -1e-10):
                continue
            cost = float(np.dot(v - u, v - u))
            if cost < best_cost - 1e-15:
                best, best_cost = v, cost
    if best is None:
        raise SolverError("no active set satisfies the optimality conditions")
    return best


def check_cone_projection_bruteforce(
    count: int = 1000, max_constraints: int = 8, seed: int = 0
) -> CheckReport:
    """NNLS cone projection against active-set enumeration on random instances."""
    rng = np.random.default_rng(seed)
    builder = ReportBuilder("cone-projection-bruteforce", BRUTE_FORCE_TOL)
    for _ in range(count):
        d = int(rng.integers(2, 7))
        m = int(rng.integers(1, max_constraints + 1))
        gradients = rng.standard_normal((m, d))
        u = rng.standard_normal(d)
        v = project_cone(gradients, u).v
        expected = brute_force_cone_projection(gradients, u)
        builder.record(-float(np.linalg.norm(v - expected)), "nnls vs enumeration", list(u))
        polar = u - v
        builder.record(
            -abs(float(np.dot(v, v) + np.dot(polar, polar) - np.dot(u, u))),
            "polar decomposition",
            list(u),
        )
    return builder.build()


def check_gamma_scaling(set_: ConstraintSet, count: int = 100, seed: int = 0) -> CheckReport:
    """
    For certified triples (x, v, r), every lambda v with lambda in {0.1, ..., 0.9}
    stays a good direction at the scale r.

    Candidate directions are inward normals of random length, which the ball
    exterior certifies only below its radius, so both verdicts occur.
    """
    if not isinstance(set_, BallExterior):
        raise InvalidInputError("gamma scaling samples are drawn on ball exteriors")
    rng = np.random.default_rng(seed)
    builder = ReportBuilder("gamma-scaling")
    certified = 0
    attempts = 0
    while certified < count and attempts < 100 * count:
        attempts += 1
        e = rng.standard_normal(set_.dim)
        e /= np.linalg.norm(e)
        x = set_.center + set_.radius * e
        v = -rng.uniform(0.0, 2.0) * e
        r = rng.uniform(0.05, 1.5) * set_.radius
        if in_gamma_r(set_, x, v, r, seed=seed) is not True:
            continue
        certified += 1
        for factor in SCALING_FACTORS:
            good = in_gamma_r(set_, x, factor * v, r, seed=seed)
            builder.record(0.0 if good else -1.0, f"lambda={factor}", [*x, *v, r])
    return builder.build(details={"certified_triples": float(certified), "attempts": float(attempts)})


def check_duality_identities(
    p: float, count: int = 1000, dim: int = 4, seed: int = 0
) -> CheckReport:
    """
    Homogeneity J_p(s x) = s^{p-1} J_p(x), pairing <J_p(x), x> = |x|_p^p,
    agreement of J_p with central differences of |x|_p^p / p, J_2 = identity,
    the norm gradient identities, and a modulus of continuity shrinking with delta.
    """
    space = PNormSpace(dim=dim, p=p)
    rng = np.random.default_rng(seed)
    builder = ReportBuilder("duality-identities")
    step = 1e-6

    def potential(z: Array) -> float:
        return norm(space, z) ** p / p

    for index in range(count):
        x = rng.standard_normal(dim) * (1e-3 if index % 10 == 0 else 1.0)
        s = rng.uniform(0.1, 3.0)
        j = jp(space, x)
        scale = 1.0 + float(np.linalg.norm(j))
        homogeneity = float(np.linalg.norm(jp(space, s * x) - s ** (p - 1.0) * j))
        builder.record(1e-9 * scale * (1.0 + s ** (p - 1.0)) - homogeneity, "homogeneity", list(x))
        pairing = abs(float(np.dot(j, x)) - norm(space, x) ** p)
        builder.record(1e-9 * (1.0 + norm(space, x) ** p) - pairing, "pairing", list(x))
        numeric = np.array(
            [
                (potential(x + step * e) - potential(x - step * e)) / (2.0 * step)
                for e in np.eye(dim)
            ]
        )
        builder.record(1e-6 * scale - float(np.linalg.norm(numeric - j)), "gradient", list(x))
        if p == 2.0:
            builder.record(0.0 if np.array_equal(j, x) else -1.0, "identity map", list(x))
        if np.any(x):
            g = norm_gradient(space, x)
            builder.record(
                IDENTITY_TOL - abs(float(np.dot(g, x)) - norm(space, x)), "norm pairing", list(x)
            )
            builder.record(IDENTITY_TOL - abs(dual_norm(space, g) - 1.0), "dual norm", list(x))

    moduli = []
    for delta in (1e-2, 1e-3):
        worst = 0.0
        for _ in range(count):
            x = rng.standard_normal(dim)
            x /= max(1.0, norm(space, x))
            y = x + delta * rng.uniform(-1.0, 1.0, dim) / math.sqrt(dim)
            worst = max(worst, float(np.linalg.norm(jp(space, x) - jp(space, y))))
        moduli.append(worst)
    builder.record(moduli[0] - moduli[1], "modulus of continuity decreases", moduli)
    return builder.build(details={"p": p, "modulus_1e-2": moduli[0], "modulus_1e-3": moduli[1]})


def check_corridor_scaling(
    radius: float = 1.0, epsilons: Sequence[float] = (1e-2, 1e-3, 1e-4), seed: int = 0
) -> CheckReport:
    """
    Corridor distances equal 2 sqrt(r eps) with two minimizers each, so that
    dist / sqrt(eps) is the same for every eps.
    """
    builder = ReportBuilder("corridor-scaling")
    ratios = []
    for eps in epsilons:
        try:
            witness = corridor_witness(radius, eps, seed=seed)
        except SolverError as e:
            builder.record(-1.0, f"eps={eps!r}: {e.message}", [eps])
            continue
        projection = witness.projection
        builder.record(
            1e-6 - abs(projection.dist - witness.expected_distance), f"distance eps={eps!r}", [eps]
        )
        builder.record(float(len(projection.nearest) - 2), f"minimizers eps={eps!r}", [eps])
        ratios.append(projection.dist / math.sqrt(eps))
    if ratios:
        spread = (max(ratios) - min(ratios)) / max(ratios)
        builder.record(1e-4 - spread, "dist / sqrt(eps) constant", ratios)
    return builder.build(details={"ratio": ratios[0] if ratios else None})


def check_eikonal_oracle(mask: NDArray[np.int8], spacing: float) -> CheckReport:
    """
    Fast marching against the 8-neighbour Dijkstra oracle (within 2 dx), monotone
    acceptance order, and unit spontaneous velocities at every reachable free node.
    """
    mask = np.asarray(mask, dtype=np.int8)
    builder = ReportBuilder("eikonal-oracle", 1e-12)
    values, order = fast_marching(mask, spacing)
    oracle = dijkstra_distance(mask, spacing)

    finite = np.isfinite(values)
    builder.record(
        0.0 if np.array_equal(finite, np.isfinite(oracle)) else -1.0, "same reachable set"
    )
    gap = float(np.max(np.abs(values[finite] - oracle[finite])))
    builder.record(2.0 * spacing - gap, "fast marching vs dijkstra", [gap])

    accepted = np.array([values[i, j] for i, j in order])
    builder.record(float(np.min(np.diff(accepted))) if accepted.size > 1 else 0.0, "acceptance order")

    field = solve_eikonal(mask, spacing)
    worst_norm = 0.0
    for i, j in zip(*np.nonzero(finite & (mask != EXIT) & (mask != OBSTACLE)), strict=True):
        velocity = spontaneous_velocity(field, field.node_position(int(i), int(j)))
        worst_norm = max(worst_norm, abs(float(np.linalg.norm(velocity)) - 1.0))
    builder.record(1e-12 - worst_norm, "unit velocities", [worst_norm])
    return builder.build(details={"max_gap": gap, "max_norm_defect": worst_norm})


def check_lipschitz_motion(
    moving: MovingSet, times: Sequence[float], tol: float = 1e-12
) -> CheckReport:
    """H(C(t), C(s)) <= k |t - s| over every pair of sampled times (analytic kinds)."""
    k = motion_speed(moving)
    builder = ReportBuilder("lipschitz-motion", tol)
    for t, s in itertools.combinations(times, 2):
        gap = hausdorff_distance(set_at(moving, t), set_at(moving, s))
        builder.record(k * abs(t - s) - gap, f"H(C({t!r}), C({s!r}))", [t, s, gap])
    return builder.build(details={"k": k})


def check_convergence_order(table: ConvergenceTable, minimum: float = 0.9) -> CheckReport:
    """
    Fitted order at least ``minimum`` (exact schemes pass), doubling gaps
    non-increasing in n and n gap(n, 2n) <= DOUBLING_SLACK kappa, with kappa
    taken from the coarsest doubling pair.
    """
    builder = ReportBuilder("convergence-order")
    if not table.exact:
        order = table.fitted_order if table.fitted_order is not None else -math.inf
        builder.record(order - minimum, "fitted order", [order])

    doubling = sorted(
        (row.n, row.doubling_gap) for row in table.rows if row.doubling_gap is not None
    )
    kappa = doubling[0][0] * doubling[0][1] if doubling else None
    for (n, gap), (finer_n, finer_gap) in itertools.pairwise(doubling):
        builder.record(
            gap - finer_gap + DOUBLING_TOL, f"doubling gap n={n} -> {finer_n}", [gap, finer_gap]
        )
    if kappa is not None:
        for n, gap in doubling[1:]:
            builder.record(
                DOUBLING_SLACK * kappa / n - gap + DOUBLING_TOL, f"cauchy n={n}", [n, gap]
            )
    return builder.build(
        details={"fitted_order": table.fitted_order, "kappa": kappa, "exact": float(table.exact)}
    )


def check_refinement_ratios(
    name: str, values: Sequence[float], low: float = 0.4, high: float = 0.6
) -> CheckReport:
    """Consecutive ratios values[k+1] / values[k] lie in [low, high]."""
    builder = ReportBuilder(name)
    ratios = []
    for before, after in itertools.pairwise(values):
        ratio = after / before if before > 0 else math.inf
        ratios.append(ratio)
        builder.record(min(ratio - low, high - ratio), "refinement ratio", [before, after])
    return builder.build(details={f"ratio_{k}": r for k, r in enumerate(ratios)})
