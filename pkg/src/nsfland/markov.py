"""Absorbing-chain model of local search over a landscape.

A search policy turns a landscape into a discrete-time Markov chain over
the solutions.  States that the policy can never leave are absorbing;
under the plateau-walking policy, a connected set of equal-fitness
solutions with no way up and no way out forms a closed class and is
contracted into a single absorbing macro-state, which keeps the
transient-to-transient block strictly sub-stochastic.  With the chain in
canonical block form ``[[Q, R], [0, I]]``, the fundamental matrix
``N = (I - Q)^-1`` gives expected visit counts and ``B = N R`` the
absorption probabilities, from which the probability of reaching a
globally optimal state is derived.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .core import FitnessLandscape, neighbour_table
from .errors import CapacityError, NumericalError, ValidationError

MAX_CHAIN_VARS = 16
ROW_SUM_TOL = 1e-9
RESIDUAL_TOL = 1e-9


class TransitionPolicy(enum.Enum):
    """How the search moves when better / equal neighbours exist."""

    GREEDY_PLATEAU = "greedy-plateau"
    STRICT_IMPROVING = "strict"


class CombineMode(enum.Enum):
    """How reach probabilities over several global optima are combined."""

    AVERAGE = "average"
    SUM = "sum"


@dataclass(frozen=True, eq=False)
class TransitionModel:
    """Canonical-form chain: transient and absorbing macro-states.

    Each macro-state is a tuple of member solution indices (a singleton
    for ordinary states, larger for contracted closed classes).  For
    chains built from a landscape, ``moves`` lists each transient
    macro-state's equally likely successor state codes (code ``t`` is
    transient ``t``; code ``num_transient + j`` is absorbing ``j``;
    repeats mean several neighbours lead to the same macro-state), and
    ``state_of[s]`` maps solution ``s`` to its state code.  Imported
    chains carry matrices only (``moves`` and ``state_of`` are None).
    """

    transient_states: tuple[tuple[int, ...], ...]
    absorbing_states: tuple[tuple[int, ...], ...]
    q: np.ndarray
    r: np.ndarray
    absorbing_fitness: tuple[int, ...] | None = None
    policy: TransitionPolicy | None = None
    num_vars: int | None = None
    moves: tuple[tuple[int, ...], ...] | None = None
    state_of: np.ndarray | None = None

    @property
    def num_transient(self) -> int:
        return len(self.transient_states)

    @property
    def num_absorbing(self) -> int:
        return len(self.absorbing_states)


def build_chain(
    landscape: FitnessLandscape,
    policy: TransitionPolicy = TransitionPolicy.GREEDY_PLATEAU,
) -> TransitionModel:
    """Build the search chain for a landscape under a policy.

    GREEDY_PLATEAU: move uniformly among strictly better neighbours;
    with none, walk uniformly among equal-fitness neighbours; with
    neither, the state is absorbing.  Closed classes of the equal-fitness
    walk are contracted into absorbing macro-states.  STRICT_IMPROVING:
    only strictly better moves; any state without one is absorbing.
    """
    if landscape.num_vars > MAX_CHAIN_VARS:
        raise CapacityError(
            f"chain construction supports up to {MAX_CHAIN_VARS} variables, "
            f"got {landscape.num_vars}"
        )
    values = landscape.values
    size = landscape.size
    table = neighbour_table(landscape.num_vars)
    neighbour_values = values[table]
    better = neighbour_values > values[:, None]
    equal = neighbour_values == values[:, None]
    has_better = better.any(axis=1)
    has_equal = equal.any(axis=1)

    absorbing_macros: list[tuple[int, ...]]
    if policy is TransitionPolicy.STRICT_IMPROVING:
        absorbing_macros = [(int(s),) for s in np.flatnonzero(~has_better)]
    else:
        plateau = ~has_better & has_equal
        closed_classes = _closed_plateau_classes(table, equal, plateau)
        absorbing_macros = [
            (int(s),) for s in np.flatnonzero(~has_better & ~has_equal)
        ]
        absorbing_macros.extend(closed_classes)
        absorbing_macros.sort(key=lambda macro: macro[0])

    absorbed = np.zeros(size, dtype=bool)
    for macro in absorbing_macros:
        for s in macro:
            absorbed[s] = True
    transient_ids = np.flatnonzero(~absorbed)
    num_transient = len(transient_ids)

    state_of = np.empty(size, dtype=np.int64)
    state_of[transient_ids] = np.arange(num_transient)
    for j, macro in enumerate(absorbing_macros):
        for s in macro:
            state_of[s] = num_transient + j

    moves: list[tuple[int, ...]] = []
    q = np.zeros((num_transient, num_transient))
    r = np.zeros((num_transient, len(absorbing_macros)))
    for i, s in enumerate(transient_ids):
        mask = better[s] if has_better[s] else equal[s]
        targets = sorted(int(state_of[t]) for t in table[s][mask])
        moves.append(tuple(targets))
        p = 1.0 / len(targets)
        for code in targets:
            if code < num_transient:
                q[i, code] += p
            else:
                r[i, code - num_transient] += p

    q.setflags(write=False)
    r.setflags(write=False)
    state_of.setflags(write=False)
    return TransitionModel(
        transient_states=tuple((int(s),) for s in transient_ids),
        absorbing_states=tuple(absorbing_macros),
        q=q,
        r=r,
        absorbing_fitness=tuple(int(values[m[0]]) for m in absorbing_macros),
        policy=policy,
        num_vars=landscape.num_vars,
        moves=tuple(moves),
        state_of=state_of,
    )


def _closed_plateau_classes(
    table: np.ndarray, equal: np.ndarray, plateau: np.ndarray
) -> list[tuple[int, ...]]:
    """Closed classes of the equal-fitness walk restricted to plateau states.

    Plateau states (no better neighbour, some equal neighbour) walk among
    their equal-fitness neighbours.  A strongly connected component of
    that walk is closed iff no member has an equal-fitness edge leaving
    the component; only closed components become absorbing macro-states.
    """
    nodes = np.flatnonzero(plateau)
    if len(nodes) == 0:
        return []
    node_pos = {int(s): i for i, s in enumerate(nodes)}
    successors: list[list[int]] = []
    exits = []
    for s in nodes:
        eq_targets = [int(t) for t in table[s][equal[s]]]
        inside = [node_pos[t] for t in eq_targets if t in node_pos]
        successors.append(inside)
        exits.append(len(inside) != len(eq_targets))

    components = _tarjan_components(len(nodes), successors)

    component_of = np.empty(len(nodes), dtype=np.int64)
    for c, comp in enumerate(components):
        for i in comp:
            component_of[i] = c

    closed: list[tuple[int, ...]] = []
    for c, comp in enumerate(components):
        is_closed = True
        for i in comp:
            if exits[i] or any(component_of[t] != c for t in successors[i]):
                is_closed = False
                break
        if is_closed:
            closed.append(tuple(sorted(int(nodes[i]) for i in comp)))
    return closed


def _tarjan_components(
    count: int, successors: list[list[int]]
) -> list[list[int]]:
    """Strongly connected components, iterative to spare the call stack."""
    index = [-1] * count
    lowlink = [0] * count
    on_stack = [False] * count
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(count):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, child_pos = work[-1]
            if child_pos == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for pos in range(child_pos, len(successors[node])):
                target = successors[node][pos]
                if index[target] == -1:
                    work[-1] = (node, pos + 1)
                    work.append((target, 0))
                    advanced = True
                    break
                if on_stack[target]:
                    lowlink[node] = min(lowlink[node], index[target])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
    return components


def import_chain(
    q: np.ndarray,
    r: np.ndarray,
    absorbing_fitness: "tuple[int, ...] | list[int] | None" = None,
) -> TransitionModel:
    """Wrap externally supplied canonical-form matrices as a chain.

    Rows of ``[Q | R]`` must sum to 1 within 1e-9, entries must be
    non-negative, and every transient state must have a positive-
    probability path to some absorbing state.
    """
    q = np.asarray(q, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValidationError(f"Q must be square, got shape {q.shape}")
    if r.ndim != 2 or r.shape[0] != q.shape[0]:
        raise ValidationError(
            f"R must have one row per transient state, got shape {r.shape}"
        )
    num_transient, num_absorbing = r.shape
    if num_transient > 0 and num_absorbing == 0:
        raise ValidationError("transient states present but no absorbing state")
    if (q < 0).any() or (r < 0).any():
        raise ValidationError("transition probabilities must be non-negative")
    row_sums = q.sum(axis=1) + r.sum(axis=1)
    bad = np.flatnonzero(np.abs(row_sums - 1.0) > ROW_SUM_TOL)
    if len(bad):
        raise ValidationError(
            f"rows of [Q|R] must sum to 1 +/- {ROW_SUM_TOL}; rows {bad.tolist()} "
            f"sum to {row_sums[bad].tolist()}"
        )

    # Every transient state must reach absorption: walk Q's positive
    # entries backwards from the states with positive direct absorption.
    reaches = r.sum(axis=1) > 0
    changed = True
    while changed:
        changed = False
        feeders = (q[:, reaches] > 0).any(axis=1) & ~reaches
        if feeders.any():
            reaches |= feeders
            changed = True
    stuck = np.flatnonzero(~reaches)
    if len(stuck):
        raise ValidationError(
            f"transient states {stuck.tolist()} cannot reach any absorbing state"
        )

    if absorbing_fitness is not None:
        absorbing_fitness = tuple(int(f) for f in absorbing_fitness)
        if len(absorbing_fitness) != num_absorbing:
            raise ValidationError(
                "absorbing_fitness length must match the number of "
                "absorbing states"
            )

    q = q.copy()
    r = r.copy()
    q.setflags(write=False)
    r.setflags(write=False)
    return TransitionModel(
        transient_states=tuple((i,) for i in range(num_transient)),
        absorbing_states=tuple(
            (num_transient + j,) for j in range(num_absorbing)
        ),
        q=q,
        r=r,
        absorbing_fitness=absorbing_fitness,
    )


def fundamental_matrix(model: TransitionModel) -> np.ndarray:
    """``N = (I - Q)^-1`` via the in-repo LU solver, residual-checked."""
    t = model.num_transient
    if t == 0:
        return np.zeros((0, 0))
    identity = np.eye(t)
    try:
        n = linalg.solve(identity - model.q, identity)
    except NumericalError as exc:
        raise NumericalError(
            f"(I - Q) is numerically singular for a {t}-state chain; "
            "this contradicts validated absorption reachability"
        ) from exc
    residual = np.abs(n @ (identity - model.q) - identity).max()
    if residual > RESIDUAL_TOL:
        raise NumericalError(
            f"fundamental matrix residual {residual:.3e} exceeds "
            f"{RESIDUAL_TOL:.0e}"
        )
    return n


def absorption_probabilities(
    model: TransitionModel, fundamental: np.ndarray | None = None
) -> np.ndarray:
    """``B = N R``; each row must sum to 1 within 1e-9."""
    if fundamental is None:
        fundamental = fundamental_matrix(model)
    b = fundamental @ model.r
    if b.size:
        worst = np.abs(b.sum(axis=1) - 1.0).max()
        if worst > ROW_SUM_TOL:
            raise NumericalError(
                f"absorption probability row sum off by {worst:.3e}"
            )
    return b


def absorption_probabilities_exact(
    model: TransitionModel,
) -> list[list[Fraction]]:
    """Absorption probabilities in exact rational arithmetic.

    Rebuilds ``Q`` and ``R`` as fractions from the chain's uniform move
    lists and solves ``(I - Q) B = R`` by Gaussian elimination over
    ``Fraction``.  Available only for chains built from a landscape.
    """
    if model.moves is None:
        raise ValidationError(
            "exact absorption requires a chain built from a landscape"
        )
    t, a = model.num_transient, model.num_absorbing
    matrix = [
        [Fraction(1) if i == j else Fraction(0) for j in range(t)]
        for i in range(t)
    ]
    rhs = [[Fraction(0)] * a for _ in range(t)]
    for i, targets in enumerate(model.moves):
        share = Fraction(1, len(targets))
        for code in targets:
            if code < t:
                matrix[i][code] -= share
            else:
                rhs[i][code - t] += share

    for col in range(t):
        pivot_row = next(
            (row for row in range(col, t) if matrix[row][col] != 0), None
        )
        if pivot_row is None:
            raise NumericalError("exact elimination hit a zero column")
        if pivot_row != col:
            matrix[col], matrix[pivot_row] = matrix[pivot_row], matrix[col]
            rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
        pivot = matrix[col][col]
        for row in range(t):
            if row == col or matrix[row][col] == 0:
                continue
            factor = matrix[row][col] / pivot
            for j in range(col, t):
                matrix[row][j] -= factor * matrix[col][j]
            for j in range(a):
                rhs[row][j] -= factor * rhs[col][j]
    return [
        [rhs[i][j] / matrix[i][i] for j in range(a)] for i in range(t)
    ]


@dataclass(frozen=True, eq=False)
class AbsorptionResult:
    """Fundamental matrix, absorption probabilities, and global reach."""

    fundamental: np.ndarray
    b: np.ndarray
    reach_by_start: np.ndarray
    p_global: float
    combine: CombineMode
    global_states: tuple[int, ...]


def _global_absorber_indices(
    model: TransitionModel, landscape: FitnessLandscape | None
) -> tuple[int, ...]:
    if model.absorbing_fitness is None:
        raise ValidationError(
            "global reach requires absorbing-state fitness values "
            "(build the chain from a landscape or import with "
            "absorbing_fitness)"
        )
    if landscape is not None:
        top = landscape.global_maximum()
    else:
        top = max(model.absorbing_fitness)
    indices = tuple(
        j for j, f in enumerate(model.absorbing_fitness) if f == top
    )
    if not indices:
        raise ValidationError(
            "no absorbing state attains the global maximum fitness"
        )
    return indices


def p_global(
    landscape: FitnessLandscape | None,
    model: TransitionModel,
    combine: CombineMode = CombineMode.AVERAGE,
) -> AbsorptionResult:
    """Probability that search started uniformly reaches a global optimum.

    ``G`` is the set of absorbing macro-states at the landscape's maximum
    fitness.  A start's reach is the mean (AVERAGE) or the sum (SUM) of
    its absorption probabilities over ``G``; a start already inside an
    absorbing state contributes ``1/|G|`` (AVERAGE) or 1 (SUM) if that
    state is in ``G`` and 0 otherwise.  For chains built from a
    landscape, ``p_global`` averages the reach over all ``2**n`` original
    solutions, each member of a contracted class counted individually;
    for imported chains it averages over the macro-states themselves.
    """
    fundamental = fundamental_matrix(model)
    b = absorption_probabilities(model, fundamental)
    g = _global_absorber_indices(model, landscape)

    block = b[:, list(g)]
    transient_reach = (
        block.mean(axis=1)
        if combine is CombineMode.AVERAGE
        else block.sum(axis=1)
    )
    absorbed_value = (
        1.0 / len(g) if combine is CombineMode.AVERAGE else 1.0
    )
    g_set = set(g)

    if model.state_of is not None:
        size = len(model.state_of)
        reach = np.empty(size)
        for s in range(size):
            code = int(model.state_of[s])
            if code < model.num_transient:
                reach[s] = transient_reach[code]
            else:
                reach[s] = (
                    absorbed_value if code - model.num_transient in g_set
                    else 0.0
                )
    else:
        absorbing_part = np.array(
            [
                absorbed_value if j in g_set else 0.0
                for j in range(model.num_absorbing)
            ]
        )
        reach = np.concatenate([transient_reach, absorbing_part])

    result = AbsorptionResult(
        fundamental=fundamental,
        b=b,
        reach_by_start=reach,
        p_global=float(reach.mean()),
        combine=combine,
        global_states=g,
    )
    return result


@dataclass(frozen=True)
class ChainSummary:
    """Per-landscape analysis record used by the study driver."""

    num_absorbing: int
    num_global_optima: int
    p_global_avg: float
    p_global_sum: float


def summarise_chain(
    landscape: FitnessLandscape, model: TransitionModel
) -> ChainSummary:
    """Both combine-mode reach probabilities from one factorisation."""
    fundamental = fundamental_matrix(model)
    b = absorption_probabilities(model, fundamental)
    g = _global_absorber_indices(model, landscape)
    block = b[:, list(g)]
    size = 1 << landscape.num_vars

    totals = {}
    for mode, transient_reach, absorbed_value in (
        (CombineMode.AVERAGE, block.mean(axis=1), 1.0 / len(g)),
        (CombineMode.SUM, block.sum(axis=1), 1.0),
    ):
        total = float(transient_reach.sum()) if transient_reach.size else 0.0
        for j in g:
            total += absorbed_value * len(model.absorbing_states[j])
        totals[mode] = total / size

    return ChainSummary(
        num_absorbing=model.num_absorbing,
        num_global_optima=len(g),
        p_global_avg=totals[CombineMode.AVERAGE],
        p_global_sum=totals[CombineMode.SUM],
    )
