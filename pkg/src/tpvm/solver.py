"""Box-constrained NMF solver for atom-frame synthesis.

Minimizes the Frobenius residual ||Y - XW||_F over 0 <= X <= 1, 0 <= W <= 1
by alternating projected gradient descent: one gradient half-step on the
frame matrix X with W fixed, then one on the weight matrix W with X fixed,
each followed by an entrywise hard clamp onto [0,1]. Every half-step runs a
backtracking line search that shrinks the step until the objective descends
(or the projected step is stationary), so the recorded objective history is
non-increasing exactly (no tolerance). Selected W entries can be pinned
(e.g. an all-ones normal-view column); pinned entries are restored
bit-identically after every projection.

Multiplicative update rules are deliberately not used here: they keep factors
non-negative but cannot honor the upper bound of 1 that modulation weights
and display intensities require.

Everything is deterministic for a fixed seed; restarts derive seeds
seed, seed+1, ... and keep the run with the lowest final objective.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import Factorization, Image, TargetSet

INIT_STRATEGIES = ("seeded-uniform", "replicate-targets")

# line search gives up once the trial step falls below this fraction of initial_step
_STALL_STEP_FRACTION = 1e-12

STOP_CONVERGED = "converged"
STOP_STALLED = "converged-by-stall"
STOP_MAX_ITERATIONS = "max-iterations"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the alternating projected gradient solver."""

    max_iterations: int = 500
    rel_tolerance: float = 1e-6
    seed: int = 0
    restarts: int = 0
    initial_step: float = 1.0
    backtrack_factor: float = 0.5
    init_strategy: str = "seeded-uniform"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")
        if self.rel_tolerance <= 0:
            raise ValueError("rel_tolerance must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")
        if self.initial_step <= 0:
            raise ValueError("initial_step must be positive")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError("backtrack_factor must lie strictly inside (0, 1)")
        if self.init_strategy not in INIT_STRATEGIES:
            raise ValueError(
                f"unknown init_strategy {self.init_strategy!r}; expected one of {INIT_STRATEGIES}"
            )


@dataclass(frozen=True, eq=False)
class PinSpec:
    """Weight-matrix entries to hold fixed: boolean mask plus the fixed values."""

    mask: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        mask = np.ascontiguousarray(self.mask, dtype=bool)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if mask.shape != values.shape or mask.ndim != 2:
            raise ValueError("mask and values must be equal-shaped 2-D arrays")
        pinned = values[mask]
        if pinned.size and (pinned.min() < 0.0 or pinned.max() > 1.0):
            raise ValueError("pinned values must lie in [0, 1]")
        mask.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "values", values)

    @classmethod
    def none(cls, m: int, k: int) -> "PinSpec":
        return cls(np.zeros((m, k), dtype=bool), np.zeros((m, k)))

    @classmethod
    def column(cls, m: int, k: int, col: int, weights) -> "PinSpec":
        """Pin one whole W column (one viewer's weight vector)."""
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (m,):
            raise ValueError(f"column pin needs {m} weights, got shape {weights.shape}")
        mask = np.zeros((m, k), dtype=bool)
        values = np.zeros((m, k))
        mask[:, col] = True
        values[:, col] = weights
        return cls(mask, values)

    def merge(self, other: "PinSpec") -> "PinSpec":
        """Union of two pin sets; overlapping entries take the other's values."""
        mask = self.mask | other.mask
        values = np.where(other.mask, other.values, self.values)
        return PinSpec(mask, values)


def _objective(ymat: np.ndarray, x: np.ndarray, w: np.ndarray) -> float:
    return float(np.linalg.norm(ymat - x @ w, "fro"))


def objective(y: TargetSet, f: Factorization) -> float:
    """Frobenius norm of Y - XW for the given targets and factorization."""
    _check_dims(y, f)
    return _objective(y.matrix, f.frame_matrix, f.weight_matrix)


def grad_frames(ymat: np.ndarray, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Gradient of the squared residual ||Y - XW||_F^2 with respect to X."""
    return 2.0 * (x @ w - ymat) @ w.T


def grad_weights(ymat: np.ndarray, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Gradient of the squared residual ||Y - XW||_F^2 with respect to W."""
    return 2.0 * x.T @ (x @ w - ymat)


def _check_dims(y: TargetSet, f: Factorization) -> None:
    if f.width != y.width or f.height != y.height:
        raise ValueError(
            f"factorization is {f.width}x{f.height}, targets are {y.width}x{y.height}"
        )
    if f.k != y.k:
        raise ValueError(f"factorization has {f.k} weight columns, targets have {y.k}")


def initialize(
    y: TargetSet, m: int, cfg: SolverConfig, pins: PinSpec | None = None
) -> Factorization:
    """Build the starting factorization for a solver run.

    seeded-uniform draws X then W entrywise uniform on [0,1) from cfg.seed (in
    that order, so runs are reproducible). replicate-targets needs m >= K and
    copies the targets into the first K frame columns, draws any remaining
    columns uniformly, and sets W to the K x K identity stacked over zeros,
    which reproduces the targets exactly. Pinned entries are overwritten with
    their pinned values in either strategy.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    ymat = y.matrix
    n, k = ymat.shape
    pins = _check_pins(pins, m, k)
    rng = np.random.default_rng(cfg.seed)
    if cfg.init_strategy == "seeded-uniform":
        x = rng.random((n, m))
        w = rng.random((m, k))
    else:  # replicate-targets
        if m < k:
            raise ValueError(
                f"replicate-targets needs at least as many frames as targets (m={m} < K={k})"
            )
        x = np.empty((n, m))
        x[:, :k] = ymat
        if m > k:
            x[:, k:] = rng.random((n, m - k))
        w = np.zeros((m, k))
        w[:k, :k] = np.eye(k)
    w[pins.mask] = pins.values[pins.mask]
    obj = _objective(ymat, x, w)
    return _build(y, x, w, pins.mask, [obj], None)


def _backtrack(eval_obj, base, grad, obj_cur, cfg, fixup=None):
    """Projected-gradient line search: shrink until the objective descends.

    Accepts a candidate that strictly decreases the objective, or one that is
    bit-identical to the base point (a stationary point of the projected
    step, where every trial lands back on the input). Equal-objective lateral
    moves are rejected; they would let the solver drift and report
    convergence away from a descent direction. Returns (point, objective,
    accepted); a fully stalled search hands back the input unchanged with
    accepted=False.
    """
    t = cfg.initial_step
    floor = _STALL_STEP_FRACTION * cfg.initial_step
    while t >= floor:
        cand = np.clip(base - t * grad, 0.0, 1.0)
        if fixup is not None:
            fixup(cand)
        obj_cand = eval_obj(cand)
        if obj_cand < obj_cur:
            return cand, obj_cand, True
        if obj_cand == obj_cur and np.array_equal(cand, base):
            return cand, obj_cand, True
        t *= cfg.backtrack_factor
    return base, obj_cur, False


def _step_arrays(ymat, x, w, obj, cfg, pin_mask, pin_values):
    """One alternating pass over raw arrays. Returns (x, w, obj, any_accepted)."""
    x, obj, moved_x = _backtrack(
        lambda cand: _objective(ymat, cand, w),
        x,
        grad_frames(ymat, x, w),
        obj,
        cfg,
    )

    def restore_pins(cand):
        cand[pin_mask] = pin_values

    w, obj, moved_w = _backtrack(
        lambda cand: _objective(ymat, x, cand),
        w,
        grad_weights(ymat, x, w),
        obj,
        cfg,
        fixup=restore_pins,
    )
    return x, w, obj, moved_x or moved_w


def step(y: TargetSet, f: Factorization, cfg: SolverConfig) -> Factorization:
    """One alternating projected-gradient pass; never increases the objective.

    Pinned entries (per f.pin_mask) keep the exact values they carry in
    f.weight_matrix. A fully stalled pass returns the input state unchanged.
    """
    _check_dims(y, f)
    ymat = y.matrix
    x = np.array(f.frame_matrix)
    w = np.array(f.weight_matrix)
    pin_mask = np.asarray(f.pin_mask)
    pin_values = w[pin_mask].copy()
    obj = _objective(ymat, x, w)
    x, w, obj_new, _ = _step_arrays(ymat, x, w, obj, cfg, pin_mask, pin_values)
    history = list(f.objective_history) + [obj_new]
    return _build(y, x, w, pin_mask, history, None)


def factorize(
    y: TargetSet,
    m: int,
    pins: PinSpec | None = None,
    cfg: SolverConfig = SolverConfig(),
) -> Factorization:
    """Solve min ||Y - XW||_F over the unit box, with optional pinned W entries.

    Runs initialize + alternating steps until the relative objective change
    drops below cfg.rel_tolerance, the line searches stall, or max_iterations
    is reached. With restarts > 0 the whole solve is repeated from derived
    seeds (seed, seed+1, ...) and the factorization with the lowest final
    objective wins.
    """
    pins = _check_pins(pins, m, y.k)
    best: Factorization | None = None
    for r in range(cfg.restarts + 1):
        run_cfg = replace(cfg, seed=(cfg.seed + r) % 2**64, restarts=0)
        f = _single_run(y, m, pins, run_cfg)
        if best is None or f.objective_history[-1] < best.objective_history[-1]:
            best = f
    return best


def _single_run(y: TargetSet, m: int, pins: PinSpec, cfg: SolverConfig) -> Factorization:
    ymat = y.matrix
    f0 = initialize(y, m, cfg, pins)
    x = np.array(f0.frame_matrix)
    w = np.array(f0.weight_matrix)
    pin_mask = np.asarray(f0.pin_mask)
    pin_values = w[pin_mask].copy()
    obj = f0.objective_history[0]
    history = [obj]
    stop = STOP_MAX_ITERATIONS
    for _ in range(cfg.max_iterations):
        x, w, obj_new, accepted = _step_arrays(ymat, x, w, obj, cfg, pin_mask, pin_values)
        history.append(obj_new)
        if not accepted:
            stop = STOP_STALLED
            break
        prev, obj = obj, obj_new
        if prev == 0.0 or (prev - obj) / prev < cfg.rel_tolerance:
            stop = STOP_CONVERGED
            break
    return _build(y, x, w, pin_mask, history, stop)


def _check_pins(pins: PinSpec | None, m: int, k: int) -> PinSpec:
    if pins is None:
        return PinSpec.none(m, k)
    if pins.mask.shape != (m, k):
        raise ValueError(f"pin arrays have shape {pins.mask.shape}, expected ({m}, {k})")
    return pins


def _build(y, x, w, pin_mask, history, stop) -> Factorization:
    frames = tuple(
        Image.from_flat(y.width, y.height, x[:, j]) for j in range(x.shape[1])
    )
    return Factorization(
        atom_frames=frames,
        weight_matrix=w,
        pin_mask=pin_mask,
        objective_history=tuple(history),
        stop_reason=stop,
    )
