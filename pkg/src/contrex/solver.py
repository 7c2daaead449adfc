"""Exact branch-and-bound for binary / bounded-integer linear models.

The search is depth-first and fully deterministic:

* branching variable: unfixed integer variable with the largest absolute
  objective coefficient, ties broken by lowest id;
* branching value: the bound that maximizes the (max-normalized) objective
  term is tried first;
* the first optimal incumbent found in this order is kept; later nodes with
  equal objective never replace it.

Pruning relies on fixpoint bound propagation plus an admissible optimistic
bound. The bound is the minimum of several cheap relaxations (coefficient
sum over boxes, a decomposition over disjoint unit-coefficient constraints,
and single-constraint fractional fills); each is an upper bound on every
feasible completion, so exactness is preserved. All arithmetic is exact
(ints / fractions), so a finished search certifies the true optimum.

Continuous variables are never branched on: they must be pinned down by
propagation at integral leaves (true for the change variables built by this
package). If a leaf leaves a continuous variable undetermined the solver
raises UnsupportedModelError instead of guessing.

``brute_force`` is the independent test oracle: plain enumeration of all
integral assignments, no shared search machinery.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import TooLargeError, UnsupportedModelError
from .model import (
    EQ,
    GE,
    LE,
    MAXIMIZE,
    Assignment,
    LinearConstraint,
    Model,
    normalize_sense,
)
from .rationals import Rational, is_integral, simplify

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
TIMED_OUT = "TimedOut"

BRUTE_FORCE_MAX_VARS = 22
BRUTE_FORCE_MAX_POINTS = 1 << 22


@dataclass(frozen=True)
class SolveParams:
    time_limit: float = 60.0  # seconds, inclusive of search only
    node_limit: Optional[int] = None
    branching: str = "max-coef"  # or "index"
    seed: int = 0  # reserved; the built-in search is deterministic regardless

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.branching not in ("max-coef", "index"):
            raise ValueError(f"unknown branching rule {self.branching!r}")


@dataclass(frozen=True)
class SolveStats:
    nodes: int = 0
    fixings: int = 0
    wall_seconds: float = 0.0


@dataclass(frozen=True)
class SolveResult:
    status: str
    assignment: Optional[Assignment] = None
    objective: Optional[Rational] = None  # native sense
    stats: SolveStats = field(default_factory=SolveStats)


@dataclass(frozen=True)
class PropagationResult:
    infeasible: bool
    bounds: Tuple[Tuple[Rational, Rational], ...] = ()
    fixed_ids: Tuple[int, ...] = ()


# ---------------------------------------------------------------------------
# bound propagation
# ---------------------------------------------------------------------------

def _floor_ratio(num, den):
    if isinstance(num, int) and isinstance(den, int):
        return num // den
    return math.floor(Fraction(num) / Fraction(den))


def _ceil_ratio(num, den):
    if isinstance(num, int) and isinstance(den, int):
        return -((-num) // den)
    return math.ceil(Fraction(num) / Fraction(den))


def _exact_ratio(num, den):
    if isinstance(num, int) and isinstance(den, int):
        q, r = divmod(num, den)
        return q if r == 0 else Fraction(num, den)
    return simplify(Fraction(num) / Fraction(den))


class _Propagator:
    """Shared fixpoint engine over (terms, relation, rhs) rows."""

    def __init__(self, rows, n_vars, is_int):
        self.rows = rows
        self.is_int = is_int
        self.var_rows: List[List[int]] = [[] for _ in range(n_vars)]
        for ri, (terms, _rel, _rhs) in enumerate(rows):
            for vid, _c in terms:
                self.var_rows[vid].append(ri)

    def run(self, lo, hi, extra_row=None, seed_vars=None):
        """Tighten lo/hi in place. Returns (feasible, fixing_count).

        ``seed_vars`` — when bounds are already a fixpoint except for these
        variables (incremental re-propagation after a branch), only their
        rows are enqueued initially; the extra row is always re-checked.
        """
        rows = self.rows
        n_rows = len(rows)
        in_queue = [False] * (n_rows + 1)
        if seed_vars is None:
            queue = list(range(n_rows))
            for ri in queue:
                in_queue[ri] = True
        else:
            queue = []
            for vid in seed_vars:
                for ri in self.var_rows[vid]:
                    if not in_queue[ri]:
                        in_queue[ri] = True
                        queue.append(ri)
        if extra_row is not None:
            queue.append(n_rows)
            in_queue[n_rows] = True
        fixings = 0
        budget = 60 * (n_rows + 1) + 200  # guards against non-terminating continuous tightening
        is_int = self.is_int
        var_rows = self.var_rows

        head = 0
        while head < len(queue):
            if head > budget:
                break
            ri = queue[head]
            head += 1
            in_queue[ri] = False
            terms, rel, rhs = rows[ri] if ri < n_rows else extra_row

            minact = 0
            maxact = 0
            for vid, c in terms:
                if c > 0:
                    minact += c * lo[vid]
                    maxact += c * hi[vid]
                else:
                    minact += c * hi[vid]
                    maxact += c * lo[vid]

            changed_vars = []
            if rel != GE:  # <= side
                if minact > rhs:
                    return False, fixings
                slack = rhs - minact
                for vid, c in terms:
                    l, h = lo[vid], hi[vid]
                    if l == h or c == 0:
                        continue
                    if c > 0:
                        # x <= l + slack / c
                        if c * (h - l) > slack:
                            nh = l + (_floor_ratio(slack, c) if is_int[vid] else _exact_ratio(slack, c))
                            if nh < l:
                                return False, fixings
                            hi[vid] = nh
                            changed_vars.append(vid)
                            if nh == l:
                                fixings += 1
                    else:
                        # x >= h + slack / c   (c < 0)
                        if c * (l - h) > slack:
                            nl = h + (_ceil_ratio(slack, c) if is_int[vid] else _exact_ratio(slack, c))
                            if nl > h:
                                return False, fixings
                            lo[vid] = nl
                            changed_vars.append(vid)
                            if nl == h:
                                fixings += 1
            if rel != LE:  # >= side
                if maxact < rhs:
                    return False, fixings
                surplus = maxact - rhs
                for vid, c in terms:
                    l, h = lo[vid], hi[vid]
                    if l == h or c == 0:
                        continue
                    if c > 0:
                        # x >= h - surplus / c
                        if c * (h - l) > surplus:
                            nl = h - (_floor_ratio(surplus, c) if is_int[vid] else _exact_ratio(surplus, c))
                            if nl > h:
                                return False, fixings
                            lo[vid] = nl
                            changed_vars.append(vid)
                            if nl == h:
                                fixings += 1
                    else:
                        # x <= l - surplus / c   (c < 0)
                        if (-c) * (h - l) > surplus:
                            nh = l + (_floor_ratio(surplus, -c) if is_int[vid] else _exact_ratio(surplus, -c))
                            if nh < l:
                                return False, fixings
                            hi[vid] = nh
                            changed_vars.append(vid)
                            if nh == l:
                                fixings += 1
            for vid in changed_vars:
                if lo[vid] > hi[vid]:
                    return False, fixings
                for rj in var_rows[vid]:
                    if not in_queue[rj]:
                        in_queue[rj] = True
                        queue.append(rj)
                if extra_row is not None and not in_queue[n_rows]:
                    in_queue[n_rows] = True
                    queue.append(n_rows)
        return True, fixings


def propagate_bounds(
    constraints: Sequence[LinearConstraint],
    bounds: Sequence[Tuple[Rational, Rational]],
    integer_mask: Optional[Sequence[bool]] = None,
) -> PropagationResult:
    """Fixpoint interval tightening; never removes a feasible integral point.

    ``integer_mask[v]`` marks variables whose bounds are rounded inward;
    defaults to all-integer.
    """
    n = len(bounds)
    for v, (l, h) in enumerate(bounds):
        if l > h:
            raise ValueError(f"inconsistent input bounds for variable {v}")
    mask = list(integer_mask) if integer_mask is not None else [True] * n
    # integer bounds are kept integral throughout; round inward up front
    lo = [math.ceil(b[0]) if mask[v] else b[0] for v, b in enumerate(bounds)]
    hi = [math.floor(b[1]) if mask[v] else b[1] for v, b in enumerate(bounds)]
    if any(lo[v] > hi[v] for v in range(n)):
        return PropagationResult(infeasible=True)  # no integral point in the box
    rows = [(c.terms, c.relation, c.rhs) for c in constraints]
    engine = _Propagator(rows, n, mask)
    was_fixed = [lo[v] == hi[v] for v in range(n)]
    feasible, _ = engine.run(lo, hi)
    if not feasible:
        return PropagationResult(infeasible=True)
    fixed = tuple(v for v in range(n) if not was_fixed[v] and lo[v] == hi[v])
    return PropagationResult(
        infeasible=False,
        bounds=tuple((simplify(lo[v]), simplify(hi[v])) for v in range(n)),
        fixed_ids=fixed,
    )


# ---------------------------------------------------------------------------
# optimistic bounds
# ---------------------------------------------------------------------------

def optimistic_bound(model: Model, partial_bounds: Sequence[Tuple[Rational, Rational]]) -> Rational:
    """Coefficient-sum bound: sum of max(c*l, c*u) over current bounds.

    Admissible for any completion; equals the objective once every variable
    is fixed. The model must already be in maximize sense.
    """
    if model.sense != MAXIMIZE:
        raise ValueError("optimistic_bound expects a max-normalized model")
    total = 0
    for vid, c in model.objective:
        l, h = partial_bounds[vid]
        total += c * h if c > 0 else c * l
    return simplify(total)


class _SearchContext:
    """Static per-solve data: rows, branch order, bound structures."""

    def __init__(self, norm: Model):
        self.model = norm
        n = len(norm.variables)
        self.n = n
        self.is_int = [v.is_integer_kind for v in norm.variables]
        obj = [0] * n
        for vid, c in norm.objective:
            obj[vid] = c
        self.obj = obj
        self.obj_vars = [vid for vid, c in norm.objective if c != 0]
        self.rows = [(c.terms, c.relation, c.rhs) for c in norm.constraints]
        self.propagator = _Propagator(self.rows, n, self.is_int)
        self.root_lo = [v.lower for v in norm.variables]
        self.root_hi = [v.upper for v in norm.variables]
        self.cutoff_row_terms = tuple((vid, obj[vid]) for vid in self.obj_vars)
        self._build_branch_order()
        self._build_groups()
        self._build_fill_rows()
        self._decide_cutoff_mode()
        self._build_value_preference()

    def _build_branch_order(self):
        ids = [v.id for v in self.model.variables if v.is_integer_kind]
        ids.sort(key=lambda vid: (-abs(self.obj[vid]), vid))
        self.branch_order = ids

    def _build_value_preference(self):
        """Which bound to try first per variable: the objective-preferred one,
        unless the model carries explicit value hints (derived what-if models
        mark the original value so the first dive stays near the old solution)."""
        prefer_hi = [self.obj[v.id] > 0 for v in self.model.variables]
        hints = self.model.metadata.get("value_hint")
        if isinstance(hints, dict):
            for v in self.model.variables:
                hint = hints.get(v.name)
                if hint is None:
                    continue
                if hint >= v.upper:
                    prefer_hi[v.id] = True
                elif hint <= v.lower:
                    prefer_hi[v.id] = False
        self.prefer_hi = prefer_hi

    def _build_groups(self):
        """Disjoint all-binary unit-coefficient rows: sum x {<=,=,>=} k."""
        used = set()
        groups = []
        for want_eq in (True, False):
            for ri, (terms, rel, rhs) in enumerate(self.rows):
                if (rel == EQ) != want_eq:
                    continue
                if not is_integral(rhs) or not terms:
                    continue
                ok = all(
                    c == 1 and self.is_int[vid] and self.root_lo[vid] == 0 and self.root_hi[vid] == 1
                    for vid, c in terms
                )
                if not ok:
                    continue
                vids = [vid for vid, _ in terms]
                if any(v in used for v in vids):
                    continue
                members = sorted(vids, key=lambda v: (-Fraction(self.obj[v]), v))
                groups.append((tuple(members), rel, int(rhs)))
                used.update(vids)
        self.groups = groups
        self._add_implied_exclusive_groups(used)

    def _add_implied_exclusive_groups(self, used):
        """Implied sum caps for AND-linked binaries.

        Rows ``2x - y_a - y_b <= 0`` say x can be 1 only where both y's are;
        when the y's on each side exhaust a unit equality ``sum y = k``, the
        combination (sum of the links)/2 + (both equalities)/2 proves
        ``sum x <= floor((k_a + k_b) / 2)``. Purely a bound-side derivation;
        the model is untouched.
        """
        eq_group_of = {}
        for gi, (members, rel, k) in enumerate(self.groups):
            if rel == EQ:
                for v in members:
                    eq_group_of[v] = (gi, k)

        links = {}
        for terms, rel, rhs in self.rows:
            if rel != LE or rhs != 0 or len(terms) != 3:
                continue
            pos = [(v, c) for v, c in terms if c > 0]
            neg = [(v, c) for v, c in terms if c < 0]
            if len(pos) != 1 or len(neg) != 2:
                continue
            x, cx = pos[0]
            if cx != 2 or any(c != -1 for _v, c in neg):
                continue
            all_binary = all(
                self.is_int[v] and self.root_lo[v] == 0 and self.root_hi[v] == 1
                for v in (x, neg[0][0], neg[1][0])
            )
            if not all_binary or x in links:
                continue
            links[x] = (neg[0][0], neg[1][0])

        buckets = {}
        for x in sorted(links):
            if self.obj[x] == 0 or x in used:
                continue
            ya, yb = links[x]
            ga = eq_group_of.get(ya)
            gb = eq_group_of.get(yb)
            if ga is None or gb is None or ga[0] == gb[0]:
                continue
            key = (min(ga[0], gb[0]), max(ga[0], gb[0]))
            buckets.setdefault(key, []).append((x, ya, yb))

        for (g1, g2), entries in sorted(buckets.items()):
            seen_a, seen_b, xs = set(), set(), []
            ok = True
            k1 = k2 = None
            for x, ya, yb in entries:
                ga, ka = eq_group_of[ya]
                gb, kb = eq_group_of[yb]
                if ga != g1:
                    ya, yb = yb, ya
                    ka, kb = kb, ka
                k1, k2 = ka, kb
                if ya in seen_a or yb in seen_b:
                    ok = False
                    break
                seen_a.add(ya)
                seen_b.add(yb)
                xs.append(x)
            if not ok or len(xs) < 2:
                continue
            cap = (k1 + k2) // 2
            members = tuple(sorted(xs, key=lambda v: (-Fraction(self.obj[v]), v)))
            self.groups.append((members, LE, cap))
            used.update(xs)

    def _build_fill_rows(self):
        """<=/= rows with all-positive coefficients: fractional greedy fill."""
        fill = []
        for terms, rel, rhs in self.rows:
            if rel == GE:
                continue
            pos_terms = [(vid, a) for vid, a in terms if a != 0]
            if not pos_terms or any(a < 0 for _vid, a in pos_terms):
                continue
            greedy = [vid for vid, a in pos_terms if self.obj[vid] > 0]
            if not greedy:
                continue
            a_map = {vid: a for vid, a in pos_terms}
            greedy.sort(key=lambda v: (-Fraction(self.obj[v]) / Fraction(a_map[v]), v))
            fill.append((tuple(pos_terms), rhs, tuple(greedy), a_map))
        self.fill_rows = fill

    def _decide_cutoff_mode(self):
        """Strict +1 cutoff is safe only when any optimum has an integral objective."""
        strict = all(is_integral(c) for _vid, c in self.model.objective)
        if strict:
            for v in self.model.variables:
                if self.obj[v.id] == 0 or v.is_integer_kind:
                    continue
                # continuous with objective weight: bounds and all its row
                # coefficients must keep propagated bounds integral
                if not (is_integral(v.lower) and is_integral(v.upper)):
                    strict = False
                    break
                for terms, _rel, rhs in self.rows:
                    in_row = False
                    for vid, c in terms:
                        if vid == v.id:
                            in_row = True
                            if abs(c) != 1:
                                strict = False
                        elif not is_integral(c):
                            strict = False
                    if in_row and not is_integral(rhs):
                        strict = False
                    if not strict:
                        break
                if not strict:
                    break
        self.strict_cutoff = strict

    # -- node bound ---------------------------------------------------------

    def node_bound(self, lo, hi):
        obj = self.obj
        box = 0
        for vid in self.obj_vars:
            c = obj[vid]
            box += c * hi[vid] if c > 0 else c * lo[vid]

        best = box

        group_delta = 0
        for members, rel, k in self.groups:
            member_box = 0
            fixed_sum = 0
            count1 = 0
            cands = []
            for vid in members:
                l, h = lo[vid], hi[vid]
                c = obj[vid]
                member_box += c * h if c > 0 else c * l
                if l == h:
                    if l == 1:
                        count1 += 1
                        fixed_sum += c
                else:
                    cands.append(vid)
            r = k - count1
            contrib = None
            if rel == EQ:
                if 0 <= r <= len(cands):
                    contrib = fixed_sum + sum(obj[v] for v in cands[:r])
            elif rel == LE:
                if r >= 0:
                    taken = 0
                    acc = fixed_sum
                    for v in cands:
                        if taken >= r or obj[v] <= 0:
                            break
                        acc += obj[v]
                        taken += 1
                    contrib = acc
            else:  # GE: must activate at least r members; positives are free
                if r <= len(cands):
                    acc = fixed_sum
                    taken = 0
                    for v in cands:
                        c_v = obj[v]
                        if c_v > 0:
                            acc += c_v
                            taken += 1
                        elif taken < r:
                            acc += c_v
                            taken += 1
                        else:
                            break
                    if taken >= r:
                        contrib = acc
            if contrib is not None and contrib < member_box:
                group_delta += contrib - member_box
        if group_delta:
            best = box + group_delta

        for terms, rhs, greedy, a_map in self.fill_rows:
            cap = rhs
            for vid, a in terms:
                cap -= a * lo[vid]
            if cap < 0:
                continue
            bound_f = box
            for vid in greedy:
                room = hi[vid] - lo[vid]
                if room == 0:
                    continue
                c = obj[vid]
                bound_f -= c * room  # undo the box's full take
                a = a_map[vid]
                need = a * room
                if need <= cap:
                    bound_f += c * room
                    cap -= need
                elif cap > 0:
                    bound_f += _exact_ratio(c * cap, a)
                    cap = 0
            if bound_f < best:
                best = bound_f

        return best


def pruning_bound(model: Model, bounds: Sequence[Tuple[Rational, Rational]]) -> Rational:
    """The strengthened admissible bound used by the search (max-sense model)."""
    if model.sense != MAXIMIZE:
        raise ValueError("pruning_bound expects a max-normalized model")
    ctx = _SearchContext(model)
    return simplify(ctx.node_bound([b[0] for b in bounds], [b[1] for b in bounds]))


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def _complete_leaf(ctx: _SearchContext, lo, hi):
    """Fix continuous variables at their objective-preferred bound and verify rows."""
    values = list(lo)
    undetermined = False
    for vid in range(ctx.n):
        if lo[vid] == hi[vid]:
            values[vid] = lo[vid]
        elif ctx.is_int[vid]:
            raise AssertionError("integer variable unfixed at leaf")
        else:
            c = ctx.obj[vid]
            values[vid] = hi[vid] if c > 0 else lo[vid]
            undetermined = True
    if undetermined:
        for terms, rel, rhs in ctx.rows:
            act = sum(c * values[vid] for vid, c in terms)
            if (rel == LE and act > rhs) or (rel == GE and act < rhs) or (rel == EQ and act != rhs):
                raise UnsupportedModelError(
                    "continuous variables remain undetermined at an integral leaf"
                )
    return values


def solve(model: Model, params: SolveParams = SolveParams()) -> SolveResult:
    """Exact optimum of the model, certified by exhausting the search tree."""
    t0 = time.monotonic()
    flipped = model.sense != MAXIMIZE
    norm = normalize_sense(model)
    ctx = _SearchContext(norm)

    if params.branching == "index":
        order = sorted(ctx.branch_order)
    else:
        order = ctx.branch_order

    lo0 = list(ctx.root_lo)
    hi0 = list(ctx.root_hi)

    nodes = 0
    fixings = 0
    incumbent_values = None
    incumbent_obj = None
    cutoff_row = None
    timed_out = False

    stack = [(lo0, hi0, None)]
    while stack:
        if params.node_limit is not None and nodes >= params.node_limit:
            timed_out = True
            break
        if nodes % 64 == 0 and time.monotonic() - t0 > params.time_limit:
            timed_out = True
            break
        lo, hi, dirty = stack.pop()
        nodes += 1

        feasible, fx = ctx.propagator.run(
            lo, hi, extra_row=cutoff_row, seed_vars=None if dirty is None else (dirty,)
        )
        fixings += fx
        if not feasible:
            continue

        if incumbent_obj is not None:
            if ctx.node_bound(lo, hi) <= incumbent_obj:
                continue

        branch_var = None
        for vid in order:
            if lo[vid] != hi[vid]:
                branch_var = vid
                break

        if branch_var is None:
            values = _complete_leaf(ctx, lo, hi)
            obj_val = sum(ctx.obj[vid] * values[vid] for vid in ctx.obj_vars)
            if incumbent_obj is None or obj_val > incumbent_obj:
                incumbent_obj = obj_val
                incumbent_values = values
                rhs = obj_val + 1 if ctx.strict_cutoff else obj_val
                cutoff_row = (ctx.cutoff_row_terms, GE, rhs)
            continue

        l, h = lo[branch_var], hi[branch_var]
        if ctx.prefer_hi[branch_var]:
            first_lo, first_hi = h, h
            rest_lo, rest_hi = l, h - 1
        else:
            first_lo, first_hi = l, l
            rest_lo, rest_hi = l + 1, h

        rest_l = list(lo)
        rest_h = list(hi)
        rest_l[branch_var] = rest_lo
        rest_h[branch_var] = rest_hi
        stack.append((rest_l, rest_h, branch_var))

        first_l = list(lo)
        first_h = list(hi)
        first_l[branch_var] = first_lo
        first_h[branch_var] = first_hi
        stack.append((first_l, first_h, branch_var))

    wall = time.monotonic() - t0
    stats = SolveStats(nodes=nodes, fixings=fixings, wall_seconds=wall)

    if incumbent_values is None:
        status = TIMED_OUT if timed_out else INFEASIBLE
        return SolveResult(status=status, stats=stats)

    assignment = Assignment(tuple(simplify(v) for v in incumbent_values))
    native_obj = simplify(-incumbent_obj if flipped else incumbent_obj)
    status = TIMED_OUT if timed_out else OPTIMAL
    return SolveResult(status=status, assignment=assignment, objective=native_obj, stats=stats)


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------

def _integral_data(model: Model) -> bool:
    if any(not is_integral(c) for _v, c in model.objective):
        return False
    for c in model.constraints:
        if not is_integral(c.rhs) or any(not is_integral(co) for _v, co in c.terms):
            return False
    return all(is_integral(v.lower) and is_integral(v.upper) for v in model.variables)


def _brute_force_fast(norm: Model, int_ids, flipped) -> SolveResult:
    """Vectorized enumeration for all-integer models without continuous variables."""
    t0 = time.monotonic()
    n = len(int_ids)
    lows = np.array([int(norm.variables[v].lower) for v in int_ids], dtype=np.int64)
    sizes = np.array([int(norm.variables[v].upper) - int(norm.variables[v].lower) + 1 for v in int_ids], dtype=np.int64)
    total = int(np.prod(sizes, dtype=np.int64))
    # column-major strides so var 0 is most significant: lexicographic order
    strides = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]

    cols = {vid: j for j, vid in enumerate(int_ids)}
    n_rows = len(norm.constraints)
    A = np.zeros((n, n_rows), dtype=np.int64)
    b = np.zeros(n_rows, dtype=np.int64)
    rels = []
    for ri, c in enumerate(norm.constraints):
        for vid, coef in c.terms:
            A[cols[vid], ri] = int(coef)
        b[ri] = int(c.rhs)
        rels.append(c.relation)
    obj = np.zeros(n, dtype=np.int64)
    for vid, coef in norm.objective:
        obj[cols[vid]] = int(coef)

    best_obj = None
    best_vals = None
    chunk = 1 << 16
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        vals = (idx[:, None] // strides[None, :]) % sizes[None, :] + lows[None, :]
        acts = vals @ A
        feas = np.ones(stop - start, dtype=bool)
        for ri, rel in enumerate(rels):
            if rel == LE:
                feas &= acts[:, ri] <= b[ri]
            elif rel == GE:
                feas &= acts[:, ri] >= b[ri]
            else:
                feas &= acts[:, ri] == b[ri]
        if not feas.any():
            continue
        objs = vals @ obj
        objs_f = np.where(feas, objs, np.iinfo(np.int64).min)
        k = int(np.argmax(objs_f))  # first max: lexicographically smallest
        if best_obj is None or objs_f[k] > best_obj:
            best_obj = int(objs_f[k])
            best_vals = vals[k].tolist()

    wall = time.monotonic() - t0
    stats = SolveStats(nodes=total, wall_seconds=wall)
    if best_obj is None:
        return SolveResult(status=INFEASIBLE, stats=stats)
    values = [0] * len(norm.variables)
    for j, vid in enumerate(int_ids):
        values[vid] = int(best_vals[j])
    return SolveResult(
        status=OPTIMAL,
        assignment=Assignment(tuple(values)),
        objective=simplify(-best_obj if flipped else best_obj),
        stats=stats,
    )


def brute_force(model: Model) -> SolveResult:
    """Enumerate every integral assignment and return the exact optimum.

    Independent of the branch-and-bound path: used as the oracle in tests.
    Ties are broken by the lexicographically smallest assignment vector.
    Budget: at most 22 integer variables and 2**22 integral points.
    """
    t0 = time.monotonic()
    flipped = model.sense != MAXIMIZE
    norm = normalize_sense(model)
    int_ids = [v.id for v in norm.variables if v.is_integer_kind]
    cont_ids = [v.id for v in norm.variables if not v.is_integer_kind]
    if len(int_ids) > BRUTE_FORCE_MAX_VARS:
        raise TooLargeError(f"{len(int_ids)} integer variables exceed the enumeration budget")
    total = 1
    for vid in int_ids:
        v = norm.variables[vid]
        if not (is_integral(v.lower) and is_integral(v.upper)):
            raise UnsupportedModelError("integer variable with fractional bounds")
        total *= int(v.upper) - int(v.lower) + 1
        if total > BRUTE_FORCE_MAX_POINTS:
            raise TooLargeError("integral point count exceeds the enumeration budget")

    if not cont_ids and _integral_data(norm):
        return _brute_force_fast(norm, int_ids, flipped)

    obj = {vid: 0 for vid in range(len(norm.variables))}
    for vid, c in norm.objective:
        obj[vid] = c

    # rows touching continuous variables must touch exactly one of them
    cont_set = set(cont_ids)
    cont_rows = {vid: [] for vid in cont_ids}
    plain_rows = []
    for c in norm.constraints:
        touched = [vid for vid, _co in c.terms if vid in cont_set]
        if len(touched) > 1:
            raise UnsupportedModelError("constraint couples multiple continuous variables")
        if touched:
            cont_rows[touched[0]].append(c)
        else:
            plain_rows.append(c)

    ranges = [range(int(norm.variables[vid].lower), int(norm.variables[vid].upper) + 1) for vid in int_ids]
    best_obj = None
    best_values = None
    count = 0
    for combo in itertools.product(*ranges):
        count += 1
        values = [0] * len(norm.variables)
        for vid, val in zip(int_ids, combo):
            values[vid] = val
        ok = True
        for c in plain_rows:
            act = sum(co * values[vid] for vid, co in c.terms)
            if (c.relation == LE and act > c.rhs) or (c.relation == GE and act < c.rhs) or (
                c.relation == EQ and act != c.rhs
            ):
                ok = False
                break
        if not ok:
            continue
        for vid in cont_ids:
            v = norm.variables[vid]
            l, h = v.lower, v.upper
            for c in cont_rows[vid]:
                coef = None
                act = 0
                for wid, co in c.terms:
                    if wid == vid:
                        coef = co
                    else:
                        act += co * values[wid]
                residual = c.rhs - act
                if c.relation in (LE, EQ):
                    if coef > 0:
                        h = min(h, _exact_ratio(residual, coef))
                    else:
                        l = max(l, _exact_ratio(residual, coef))
                if c.relation in (GE, EQ):
                    if coef > 0:
                        l = max(l, _exact_ratio(residual, coef))
                    else:
                        h = min(h, _exact_ratio(residual, coef))
            if l > h:
                ok = False
                break
            values[vid] = h if obj[vid] > 0 else l
        if not ok:
            continue
        val = sum(obj[vid] * values[vid] for vid in range(len(values)) if obj[vid] != 0)
        if best_obj is None or val > best_obj:
            best_obj = val
            best_values = values

    wall = time.monotonic() - t0
    stats = SolveStats(nodes=count, wall_seconds=wall)
    if best_obj is None:
        return SolveResult(status=INFEASIBLE, stats=stats)
    return SolveResult(
        status=OPTIMAL,
        assignment=Assignment(tuple(simplify(v) for v in best_values)),
        objective=simplify(-best_obj if flipped else best_obj),
        stats=stats,
    )
