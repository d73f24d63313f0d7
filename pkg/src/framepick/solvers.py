"""Subset and partition searches over rank-one frame sums.

Two families of solvers live here.  The exhaustive ones enumerate every
subset (or every r-labeling) with vectorized batch eigenvalue work and a
deterministic tie-break, and serve as ground truth at desk scale.  The local
one is a seeded multi-restart single-flip descent that scales past the
enumeration limit but carries no certificate.

A balanced partition within the certified bounds always exists for tight
families; the exhaustive solvers therefore must find one, and raise
``BoundViolationError`` if they do not.

Tie-breaking is deterministic everywhere: lower objective, then smaller
subset cardinality, then lexicographically smallest sorted index tuple (for
r-labelings: lexicographically smallest assignment tuple).  Chunked and
serial enumeration agree exactly because chunks are merged with the same key.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolationError, ValidationError
from .frames import FrameSystem
from .linalg import as_hermitian, operator_norm

# Subset-sum tables are materialized in chunks of at most 2**CHUNK_BITS rows.
CHUNK_BITS = 16

# Incremental rank-one updates are refreshed with a full recompute this often
# to cap accumulated drift.
RECOMPUTE_EVERY = 256

STRATEGIES = ("exhaustive", "local", "auto")


@dataclass(frozen=True)
class LocalSearchConfig:
    restarts: int = 8
    max_iters: int = 4000
    seed: int = 0


@dataclass(frozen=True)
class SolverConfig:
    """Search strategy selection.

    ``auto`` uses exhaustive enumeration iff the instance has at most
    ``exhaustive_limit`` vectors, and falls back to local search otherwise.
    The hard cap of 26 guards against 2^m blowup.
    """

    strategy: str = "auto"
    exhaustive_limit: int = 22
    local_search: LocalSearchConfig = field(default_factory=LocalSearchConfig)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if not (1 <= self.exhaustive_limit <= 26):
            raise ValidationError(f"exhaustive_limit must be in [1, 26], got {self.exhaustive_limit}")

    def resolve(self, m: int) -> str:
        """Concrete strategy for an instance with m vectors."""
        if self.strategy == "exhaustive":
            if m > self.exhaustive_limit:
                raise ValidationError(
                    f"exhaustive search refused: m = {m} exceeds the limit {self.exhaustive_limit}"
                )
            return "exhaustive"
        if self.strategy == "local":
            return "local"
        return "exhaustive" if m <= self.exhaustive_limit else "local"


@dataclass(frozen=True)
class IndexPartition:
    """Disjoint index blocks covering 0..m-1."""

    blocks: tuple

    @property
    def r(self) -> int:
        return len(self.blocks)

    def validate(self, m: int) -> None:
        seen = [i for block in self.blocks for i in block]
        if sorted(seen) != list(range(m)):
            raise ValidationError("blocks must be disjoint and cover every index exactly once")


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """A chosen index subset with its achieved matrix and recomputed error."""

    subset: tuple
    achieved: np.ndarray
    target: np.ndarray
    error: float
    certified_bound: float | None
    solver: str
    seed: int | None = None
    iterations: int = 0


@dataclass(frozen=True, eq=False)
class TwoPartitionResult:
    partition: IndexPartition
    norms: tuple
    bound: float
    meets_bound: bool
    solver: str
    evaluations: int


@dataclass(frozen=True, eq=False)
class PartitionResult:
    partition: IndexPartition
    norms: tuple
    bounds: tuple
    meets_bound: tuple
    solver: str
    evaluations: int


@dataclass(frozen=True)
class BlockDeviation:
    """Distance of one block sum from its recentred scalar target."""

    t_prime: float
    deviation: float
    bound: float
    meets_bound: bool


def make_selection(
    frame: FrameSystem,
    subset,
    target,
    certified_bound: float | None,
    solver: str,
    seed: int | None = None,
    iterations: int = 0,
) -> SelectionResult:
    """Assemble a SelectionResult, recomputing the achieved matrix and error."""
    subset = tuple(sorted(int(i) for i in subset))
    target = as_hermitian(target)
    achieved = frame.subset_operator(subset)
    achieved.setflags(write=False)
    target.setflags(write=False)
    return SelectionResult(
        subset=subset,
        achieved=achieved,
        target=target,
        error=operator_norm(achieved - target),
        certified_bound=certified_bound,
        solver=solver,
        seed=seed,
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# Vectorized enumeration internals.
# ---------------------------------------------------------------------------


def _outer_products(vectors: np.ndarray) -> np.ndarray:
    return np.einsum("ma,mb->mab", vectors, vectors.conj())


def _sums_table(outers: np.ndarray, d: int) -> np.ndarray:
    """All 2^k subset sums of the given outer products, indexed by bitmask."""
    k = len(outers)
    table = np.zeros((1 << k, d, d), dtype=complex)
    for i in range(k):
        step = 1 << i
        table[step : 2 * step] = table[:step] + outers[i]
    return table


def _iter_subset_sums(outers: np.ndarray, d: int, base=None):
    """Yield (mask_offset, sums) chunks covering every subset of ``outers``.

    Chunk row j holds base + sum over the bits of (mask_offset + j).
    """
    m = len(outers)
    k = min(m, CHUNK_BITS)
    low = _sums_table(outers[:k], d)
    high = _sums_table(outers[k:], d)
    if base is not None:
        high = high + base
    for hi_mask in range(high.shape[0]):
        yield hi_mask << k, low + high[hi_mask]


def _max_abs_eig(mats: np.ndarray) -> np.ndarray:
    """Batched spectral norm of Hermitian matrices (closed form for d <= 2)."""
    d = mats.shape[-1]
    if d == 1:
        return np.abs(mats[..., 0, 0].real)
    if d == 2:
        half_trace = 0.5 * (mats[..., 0, 0].real + mats[..., 1, 1].real)
        radius = np.sqrt(
            0.25 * (mats[..., 0, 0].real - mats[..., 1, 1].real) ** 2
            + np.abs(mats[..., 0, 1]) ** 2
        )
        return np.abs(half_trace) + radius
    return np.abs(np.linalg.eigvalsh(mats)).max(axis=-1)


def _complement_norms(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched (||D||, ||I - D||) for Hermitian D."""
    d = mats.shape[-1]
    if d == 1:
        lam = mats[..., 0, 0].real
        return np.abs(lam), np.abs(1.0 - lam)
    if d == 2:
        half_trace = 0.5 * (mats[..., 0, 0].real + mats[..., 1, 1].real)
        radius = np.sqrt(
            0.25 * (mats[..., 0, 0].real - mats[..., 1, 1].real) ** 2
            + np.abs(mats[..., 0, 1]) ** 2
        )
        return np.abs(half_trace) + radius, np.abs(1.0 - half_trace) + radius
    w = np.linalg.eigvalsh(mats)
    return np.abs(w).max(axis=-1), np.abs(1.0 - w).max(axis=-1)


def _bit_reverse(masks: np.ndarray, m: int) -> np.ndarray:
    rev = np.zeros_like(masks)
    for i in range(m):
        rev |= ((masks >> i) & 1) << (m - 1 - i)
    return rev


def _chunk_best(masks: np.ndarray, objective: np.ndarray, m: int) -> tuple[int, float]:
    """Deterministic argmin: objective, then popcount, then lex-smallest index tuple.

    Lex order on sorted index tuples equals descending order of the bit-reversed
    mask, so the whole tie-break is vectorized.
    """
    best = objective.min()
    tied = masks[objective == best]
    counts = np.bitwise_count(tied.astype(np.uint64))
    tied = tied[counts == counts.min()]
    rev = _bit_reverse(tied, m)
    return int(tied[rev.argmax()]), float(best)


def _merge_best(current, candidate, m: int):
    if current is None:
        return candidate
    cand_mask, cand_obj = candidate
    cur_mask, cur_obj = current
    if cand_obj != cur_obj:
        return candidate if cand_obj < cur_obj else current
    cand_key = (int(cand_mask).bit_count(), -int(_bit_reverse(np.array(cand_mask), m)))
    cur_key = (int(cur_mask).bit_count(), -int(_bit_reverse(np.array(cur_mask), m)))
    return candidate if cand_key < cur_key else current


def _mask_to_subset(mask: int) -> tuple:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# Exhaustive solvers.
# ---------------------------------------------------------------------------


def best_subset_oracle(
    frame: FrameSystem, target, cfg: SolverConfig | None = None
) -> SelectionResult:
    """Globally optimal subset for min ||sum_{i in S} u_i u_i* - T|| by full enumeration.

    Ground truth for everything else in the package; refuses instances past
    the enumeration limit.
    """
    cfg = cfg or SolverConfig()
    m = frame.m
    if m > cfg.exhaustive_limit:
        raise ValidationError(
            f"oracle refused: m = {m} exceeds the enumeration limit {cfg.exhaustive_limit}"
        )
    target = as_hermitian(target)
    if target.shape != (frame.d, frame.d):
        raise ValidationError(f"target must be {frame.d}x{frame.d}, got {target.shape}")
    outers = _outer_products(frame.vectors)
    best = None
    for offset, sums in _iter_subset_sums(outers, frame.d, base=-target):
        errs = _max_abs_eig(sums)
        local_mask, local_err = _chunk_best(np.arange(sums.shape[0], dtype=np.int64), errs, m)
        best = _merge_best(best, (offset + local_mask, local_err), m)
    subset = _mask_to_subset(best[0])
    return make_selection(frame, subset, target, None, "oracle", iterations=1 << m)


def two_partition(frame: FrameSystem, cfg: SolverConfig | None = None) -> TwoPartitionResult:
    """Split a tight family into two blocks with both block norms near one half.

    The certified bound is 1/2 + sqrt(2 eps) + eps.  With the exhaustive
    strategy on a tight family, meeting the bound is guaranteed and enforced.
    """
    cfg = cfg or SolverConfig()
    if not frame.tight:
        raise ValidationError(
            "two_partition needs a tight family; for sub-tight input use the "
            "scalar-target pipeline instead"
        )
    eps = frame.epsilon
    bound = 0.5 + math.sqrt(2.0 * eps) + eps
    strategy = cfg.resolve(frame.m)
    if strategy == "exhaustive":
        mask, evals = _two_partition_exhaustive(frame)
    else:
        mask, evals = _two_partition_local(frame, cfg.local_search)
    block_one = _mask_to_subset(mask)
    block_two = tuple(i for i in range(frame.m) if i not in set(block_one))
    norms = (
        operator_norm(frame.subset_operator(block_one)),
        operator_norm(frame.subset_operator(block_two)),
    )
    meets = max(norms) <= bound
    if strategy == "exhaustive" and not meets:
        raise BoundViolationError(
            f"exhaustive two-way split exceeded its certified bound: "
            f"max norm {max(norms):.12g} > {bound:.12g}"
        )
    return TwoPartitionResult(
        partition=IndexPartition(blocks=(block_one, block_two)),
        norms=norms,
        bound=bound,
        meets_bound=meets,
        solver=strategy if strategy == "exhaustive" else "local-search",
        evaluations=evals,
    )


def _two_partition_exhaustive(frame: FrameSystem) -> tuple[int, int]:
    # Index 0 is pinned to block one, which quotients out the S <-> complement
    # symmetry and halves the search space.
    m = frame.m
    outers = _outer_products(frame.vectors)
    best = None
    for offset, sums in _iter_subset_sums(outers[1:], frame.d, base=outers[0]):
        norm_in, norm_out = _complement_norms(sums)
        objective = np.maximum(norm_in, norm_out)
        chunk = np.arange(sums.shape[0], dtype=np.int64)
        full_masks = ((offset + chunk) << 1) | 1
        local_mask, local_obj = _chunk_best(full_masks, objective, m)
        best = _merge_best(best, (local_mask, local_obj), m)
    return best[0], 1 << (m - 1)


def _two_partition_local(frame: FrameSystem, ls: LocalSearchConfig) -> tuple[int, int]:
    identity = np.eye(frame.d)

    # Secondary objective: Frobenius distance of block one from I/2, which
    # breaks plateaus of the max-norm objective.
    def key_of(d_mat):
        objective = max(operator_norm(d_mat), operator_norm(identity - d_mat))
        return objective, float(np.linalg.norm(d_mat - 0.5 * identity) ** 2)

    mask, evals = _flip_descent_runs(
        frame,
        start_masks=[1, (1 << frame.m) - 1],
        key_of=key_of,
        ls=ls,
        pinned_bit=0,
    )
    return mask, evals


def r_partition(
    frame: FrameSystem, weights, cfg: SolverConfig | None = None
) -> PartitionResult:
    """Partition a tight family into r blocks with block norms near t_j.

    Block j carries the certified bound t_j (1 + sqrt(r eps))^2.  The
    exhaustive strategy minimizes max_j ||block sum|| / t_j over all
    r^m labelings.
    """
    cfg = cfg or SolverConfig()
    if not frame.tight:
        raise ValidationError("r_partition needs a tight family")
    t = np.asarray(weights, dtype=float)
    if t.ndim != 1 or t.size < 1 or (t <= 0).any():
        raise ValidationError("weights must be a nonempty list of positive reals")
    if abs(t.sum() - 1.0) > 1e-12:
        raise ValidationError(f"weights must sum to 1 within 1e-12, got {t.sum():.15g}")
    r = t.size
    m = frame.m
    eps = frame.epsilon
    bounds = tuple(float(tj * (1.0 + math.sqrt(r * eps)) ** 2) for tj in t)
    if r == 1:
        block = tuple(range(m))
        norm = operator_norm(frame.frame_operator)
        return PartitionResult(
            partition=IndexPartition(blocks=(block,)),
            norms=(norm,),
            bounds=bounds,
            meets_bound=(norm <= bounds[0],),
            solver="exhaustive",
            evaluations=1,
        )
    # The enumeration budget for r^m labelings mirrors the 2^m subset cap.
    feasible = m * math.log2(r) <= cfg.exhaustive_limit
    strategy = cfg.resolve(m)
    if strategy == "exhaustive" and not feasible:
        if cfg.strategy == "exhaustive":
            raise ValidationError(
                f"exhaustive search refused: r^m = {r}^{m} exceeds 2^{cfg.exhaustive_limit}"
            )
        strategy = "local"
    if strategy == "exhaustive":
        assignment, evals = (
            _r2_partition_exhaustive(frame, t) if r == 2 else _r_partition_exhaustive(frame, t)
        )
        solver = "exhaustive"
    else:
        assignment, evals = _r_partition_local(frame, t, cfg.local_search)
        solver = "local-search"
    blocks = tuple(tuple(i for i in range(m) if assignment[i] == j) for j in range(r))
    norms = tuple(operator_norm(frame.subset_operator(block)) for block in blocks)
    meets = tuple(norm <= b for norm, b in zip(norms, bounds))
    return PartitionResult(
        partition=IndexPartition(blocks=blocks),
        norms=norms,
        bounds=bounds,
        meets_bound=meets,
        solver=solver,
        evaluations=evals,
    )


def _r2_partition_exhaustive(frame: FrameSystem, t: np.ndarray) -> tuple[list, int]:
    # Bit set in the mask means assignment digit 0 (block one); lex-smallest
    # assignment tuple therefore maximizes the bit-reversed mask.
    m = frame.m
    outers = _outer_products(frame.vectors)
    best = None
    for offset, sums in _iter_subset_sums(outers, frame.d, base=None):
        norm_one, norm_two = _complement_norms(sums)
        objective = np.maximum(norm_one / t[0], norm_two / t[1])
        idx = objective.argmin()
        tied = np.flatnonzero(objective == objective[idx])
        masks = offset + tied.astype(np.int64)
        winner = masks[_bit_reverse(masks, m).argmax()]
        best = _merge_best_assignment(best, (int(winner), float(objective[idx])), m)
    mask = best[0]
    return [0 if (mask >> i) & 1 else 1 for i in range(m)], 1 << m


def _merge_best_assignment(current, candidate, m: int):
    if current is None:
        return candidate
    if candidate[1] != current[1]:
        return candidate if candidate[1] < current[1] else current
    cand_rev = int(_bit_reverse(np.array(candidate[0]), m))
    cur_rev = int(_bit_reverse(np.array(current[0]), m))
    return candidate if cand_rev > cur_rev else current


def _r_partition_exhaustive(frame: FrameSystem, t: np.ndarray) -> tuple[list, int]:
    m, r = frame.m, t.size
    total = r**m
    outers = _outer_products(frame.vectors)
    powers = r ** np.arange(m, dtype=np.int64)
    best_obj = math.inf
    best_key = None
    best_digits = None
    chunk_size = 1 << CHUNK_BITS
    for start in range(0, total, chunk_size):
        ids = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        digits = (ids[None, :] // powers[:, None]) % r  # (m, chunk)
        objective = np.zeros(ids.shape[0])
        for j in range(r):
            indicator = (digits == j).astype(float)
            block_sums = np.einsum("mc,mab->cab", indicator, outers)
            objective = np.maximum(objective, _max_abs_eig(block_sums) / t[j])
        tied = np.flatnonzero(objective == objective.min())
        # Lex-smallest assignment tuple: minimize the reversed-base-r value.
        rev = (digits[::-1, tied] * powers[:, None]).sum(axis=0)
        pick = tied[rev.argmin()]
        key = (float(objective[pick]), int(rev[rev.argmin()]))
        if key[0] < best_obj or (key[0] == best_obj and key[1] < best_key):
            best_obj, best_key = key
            best_digits = [int(x) for x in digits[:, pick]]
    return best_digits, total


def _r_partition_local(
    frame: FrameSystem, t: np.ndarray, ls: LocalSearchConfig
) -> tuple[list, int]:
    m, r, d = frame.m, t.size, frame.d
    outers = _outer_products(frame.vectors)
    target_blocks = [tj * frame.frame_operator for tj in t]
    streams = np.random.SeedSequence(ls.seed).spawn(ls.restarts + 1)

    def evaluate(block_sums):
        obj = max(operator_norm(block_sums[j]) / t[j] for j in range(r))
        frob = sum(float(np.linalg.norm(block_sums[j] - target_blocks[j]) ** 2) for j in range(r))
        return obj, frob

    best_assignment = None
    best_key = None
    evals = 0
    for run, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        if run == 0:
            assignment = [i % r for i in range(m)]
        else:
            assignment = list(rng.choice(r, size=m, p=t))
        sums = [np.zeros((d, d), dtype=complex) for _ in range(r)]
        for i, j in enumerate(assignment):
            sums[j] = sums[j] + outers[i]
        key = evaluate(sums)
        evals += 1
        flips = 0
        improved = True
        while improved and flips < ls.max_iters:
            improved = False
            for i in rng.permutation(m):
                current = assignment[i]
                for j in range(r):
                    if j == current:
                        continue
                    sums[current] -= outers[i]
                    sums[j] += outers[i]
                    cand = evaluate(sums)
                    evals += 1
                    if cand < key:
                        key = cand
                        assignment[i] = j
                        current = j
                        improved = True
                        flips += 1
                        if flips % RECOMPUTE_EVERY == 0:
                            for b in range(r):
                                sums[b] = frame.subset_operator(
                                    [x for x, a in enumerate(assignment) if a == b]
                                )
                    else:
                        sums[j] -= outers[i]
                        sums[current] += outers[i]
        if best_key is None or key < best_key:
            best_key = key
            best_assignment = list(assignment)
    return best_assignment, evals


def centered_deviation(
    partition: IndexPartition, frame: FrameSystem, weights
) -> list[BlockDeviation]:
    """Distance of each block sum from t'_j I, with the shared certified bound.

    t'_j = t_j + (t_j - 1/2)(2 sqrt(r eps) + r eps) recentres the scalar so a
    single bound sqrt(r eps) + r eps / 2 covers both sides.
    """
    t = np.asarray(weights, dtype=float)
    partition.validate(frame.m)
    if t.size != partition.r:
        raise ValidationError(f"{partition.r} blocks but {t.size} weights")
    r = t.size
    eps = frame.epsilon
    spread = 2.0 * math.sqrt(r * eps) + r * eps
    bound = math.sqrt(r * eps) + 0.5 * r * eps
    rows = []
    identity = np.eye(frame.d)
    for tj, block in zip(t, partition.blocks):
        t_prime = float(tj + (tj - 0.5) * spread)
        deviation = operator_norm(frame.subset_operator(block) - t_prime * identity)
        rows.append(
            BlockDeviation(
                t_prime=t_prime,
                deviation=deviation,
                bound=bound,
                meets_bound=deviation <= bound,
            )
        )
    return rows


def lift_assignment(frame: FrameSystem, weights, assignment) -> np.ndarray:
    """Embed each vector into r stacked copies of its space, rescaled by its block weight.

    Vector i becomes t_j^(-1/2) u_i placed in summand j = assignment[i] of the
    r*d-dimensional direct sum, zero elsewhere.  Returned as an (m, r*d) array;
    the lifted family is generally not sub-tight for a fixed assignment (only
    its average over weighted random assignments reproduces the identity), so
    no FrameSystem is built.
    """
    if not frame.tight:
        raise ValidationError("lift_assignment needs a tight family")
    t = np.asarray(weights, dtype=float)
    if t.ndim != 1 or (t <= 0).any() or abs(t.sum() - 1.0) > 1e-12:
        raise ValidationError("weights must be positive reals summing to 1")
    blocks = list(assignment)
    if len(blocks) != frame.m:
        raise ValidationError(f"assignment must cover all {frame.m} indices")
    r = t.size
    lifted = np.zeros((frame.m, r * frame.d), dtype=complex)
    for i, j in enumerate(blocks):
        j = int(j)
        if not (0 <= j < r):
            raise ValidationError(f"assignment[{i}] = {j} is not a block index in [0, {r})")
        lifted[i, j * frame.d : (j + 1) * frame.d] = frame.vectors[i] / math.sqrt(t[j])
    return lifted


# ---------------------------------------------------------------------------
# Local search.
# ---------------------------------------------------------------------------


def local_search_subset(
    frame: FrameSystem, target, cfg: SolverConfig | None = None
) -> SelectionResult:
    """Seeded multi-restart single-flip descent on ||sum_{i in S} u_i u_i* - T||.

    Deterministic given the seed.  The empty and full subsets are always among
    the descent starts, so the result is never worse than either endpoint.
    Plateaus of the operator norm are broken by a secondary Frobenius
    objective.
    """
    cfg = cfg or SolverConfig()
    target = as_hermitian(target)
    outers = _outer_products(frame.vectors)

    def key_of(d_mat):
        diff = d_mat - target
        return operator_norm(diff), float(np.linalg.norm(diff) ** 2)

    mask, evals = _flip_descent_runs(
        frame,
        start_masks=[0, (1 << frame.m) - 1],
        key_of=key_of,
        ls=cfg.local_search,
        pinned_bit=None,
        outers=outers,
    )
    return make_selection(
        frame,
        _mask_to_subset(mask),
        target,
        None,
        "local-search",
        seed=cfg.local_search.seed,
        iterations=evals,
    )


def _flip_descent_runs(frame, start_masks, key_of, ls, pinned_bit, outers=None):
    m = frame.m
    outers = _outer_products(frame.vectors) if outers is None else outers
    streams = np.random.SeedSequence(ls.seed).spawn(max(ls.restarts, 0) + len(start_masks))
    evals = 0
    best = None

    def run(mask0, rng):
        nonlocal evals
        mask = mask0
        d_mat = frame.subset_operator(_mask_to_subset(mask))
        key = key_of(d_mat)
        evals += 1
        flips = 0
        improved = True
        while improved and flips < ls.max_iters:
            improved = False
            for i in rng.permutation(m):
                if pinned_bit is not None and i == pinned_bit:
                    continue
                sign = -1.0 if (mask >> i) & 1 else 1.0
                cand_mat = d_mat + sign * outers[i]
                cand_key = key_of(cand_mat)
                evals += 1
                if cand_key < key:
                    d_mat = cand_mat
                    key = cand_key
                    mask ^= 1 << i
                    improved = True
                    flips += 1
                    if flips % RECOMPUTE_EVERY == 0:
                        d_mat = frame.subset_operator(_mask_to_subset(mask))
        return mask, key

    for idx, mask0 in enumerate(start_masks):
        mask, key = run(mask0, np.random.default_rng(streams[idx]))
        best = _merge_descent(best, (mask, key), m)
    for idx in range(ls.restarts):
        stream = streams[len(start_masks) + idx]
        rng = np.random.default_rng(stream)
        mask0 = 0
        for i in range(m):
            if rng.random() < 0.5:
                mask0 |= 1 << i
        if pinned_bit is not None:
            mask0 |= 1 << pinned_bit
        mask, key = run(mask0, rng)
        best = _merge_descent(best, (mask, key), m)
    return best[0], evals


def _merge_descent(current, candidate, m: int):
    if current is None:
        return candidate
    if candidate[1] != current[1]:
        return candidate if candidate[1] < current[1] else current
    cand_key = (int(candidate[0]).bit_count(), -int(_bit_reverse(np.array(candidate[0]), m)))
    cur_key = (int(current[0]).bit_count(), -int(_bit_reverse(np.array(current[0]), m)))
    return candidate if cand_key < cur_key else current
