"""Branch-and-bound search for all resonance fields of one orientation.

The solver subdivides the initial box [0,2pi] x [0,pi] x [0,H_max] in
(phi, theta, H), discards boxes that provably contain no resonating
stable equilibrium (resonance.test_box), and collects boxes converged
below tolerance.  A polish pass then retests each converged box at
finer subdivision and drops the spurious ones, and the survivors are
glued into per-resonance enclosures.  Elimination is sound, so every
true resonance field below H_max ends up inside some returned
enclosure.

Width normalization: angular widths count in units of tol_angle, field
width in units of tol_field, and the phi width is additionally scaled by
sup sin(theta) over the box.  The scaling makes the phi criterion an
arc-length criterion: near the poles a phi slice moves the magnetization
by width*sin(theta), so demanding raw phi width below tol_angle there
would subdivide a region the physics cannot distinguish.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field

from . import interval as iv
from .interval import Interval
from .params import FieldDirection, MaterialParams
from .resonance import Reason, Verdict
from . import kernels

__all__ = [
    "Box3",
    "SolverConfig",
    "Status",
    "ResonanceResult",
    "ListOverflow",
    "StepEvent",
    "SolverState",
    "solve_orientation",
    "glue",
]

_HALF_PI = 0.5 * math.pi
_PI_UP = math.nextafter(math.pi, math.inf)


@dataclass(frozen=True, slots=True)
class Box3:
    """One search box: product of phi, theta (rad) and H (Oe) intervals."""

    phi: Interval
    theta: Interval
    h: Interval


@dataclass(frozen=True, slots=True)
class SolverConfig:
    """Search-control knobs.

    tol_angle/tol_field are the convergence tolerances per dimension;
    glue_gap (default 2*tol_field) is the largest H gap bridged when
    merging converged boxes; max_list caps the total live box count.
    polish_depth controls the post-convergence retest that discards
    spurious converged boxes (0 disables it).
    """

    h_max: float = 10000.0
    tol_angle: float = 2e-6
    tol_field: float = 0.005
    max_list: int = 100000
    glue_gap: float | None = None
    polish_depth: int = 3

    def __post_init__(self) -> None:
        if not (self.h_max > 0 and self.tol_angle > 0 and self.tol_field > 0):
            raise ValueError("h_max, tol_angle, tol_field must be positive")
        if self.max_list <= 0:
            raise ValueError("max_list must be positive")
        if self.glue_gap is None:
            object.__setattr__(self, "glue_gap", 2.0 * self.tol_field)
        elif not self.glue_gap > 0:
            raise ValueError("glue_gap must be positive")
        if self.polish_depth < 0:
            raise ValueError("polish_depth must be nonnegative")


class Status(enum.Enum):
    RESONANCE = "resonance"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True, slots=True)
class ResonanceResult:
    """Glued enclosure of one resonance field.

    status is INDETERMINATE only when every merged box had an unbounded
    level-set evaluation (box stuck straddling both coordinate frames'
    degeneracies); such results enclose a candidate that could not be
    certified either way.
    """

    h_res: Interval
    theta_hull: Interval
    phi_hull: Interval
    status: Status
    boxes_merged: int


class ListOverflow(RuntimeError):
    """Raised when the live box count exceeds SolverConfig.max_list."""

    def __init__(self, size: int, context: str = ""):
        self.size = size
        self.context = context
        msg = f"box list overflow: {size} live boxes"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


@dataclass(frozen=True, slots=True)
class StepEvent:
    """What one solver step did (diagnostic; tests assert against it)."""

    kind: str  # "converged" or "split"
    split_dim: int | None  # 0=phi, 1=theta, 2=H for "split"
    eliminated: int  # children discarded this step (0..2)


def _sup_sin(theta: Interval) -> float:
    if theta.lo <= _HALF_PI <= theta.hi:
        return 1.0
    return max(math.sin(theta.lo), math.sin(theta.hi))


def _norm_widths(box: Box3, cfg: SolverConfig) -> tuple[float, float, float]:
    return (
        box.phi.width * _sup_sin(box.theta) / cfg.tol_angle,
        box.theta.width / cfg.tol_angle,
        box.h.width / cfg.tol_field,
    )


class SolverState:
    """Work list, results accumulator and elimination trace of one run.

    The work list is a max-heap on the largest normalized width with
    insertion order as the tie-break, which fixes the subdivision order
    completely (determinism).
    """

    def __init__(
        self,
        direction: FieldDirection,
        params: MaterialParams,
        config: SolverConfig | None = None,
        backend=None,
        keep_trace: bool = False,
    ):
        self.direction = direction
        self.params = params
        self.config = config or SolverConfig()
        self.backend = backend or kernels.get_backend()
        self.keep_trace = keep_trace
        self.trace: list[tuple[Box3, Reason]] = []
        self.converged: list[tuple[Box3, bool]] = []
        self.polished: list[Box3] = []
        self._heap: list = []
        self._counter = 0
        hx, hy, hz = direction.unit()
        self._classify_args = (
            hx, hy, hz, params.m_s, params.aniso_a, params.k_4, params.target_sq,
        )
        root = Box3(
            Interval(0.0, iv.TWO_PI),
            # one ulp above float pi so the true south pole (between the
            # two nearest floats) is inside the searched region
            Interval(0.0, _PI_UP),
            Interval(0.0, self.config.h_max),
        )
        code, _reason = self._classify(root)
        if code != 0:
            self._push(root, code == 2)

    # -- internals ----------------------------------------------------------

    def _classify(self, box: Box3) -> tuple[int, int]:
        code, reason = self.backend.classify_box(
            box.theta.lo, box.theta.hi,
            box.phi.lo, box.phi.hi,
            box.h.lo, box.h.hi,
            *self._classify_args,
        )
        if code == 0 and self.keep_trace:
            self.trace.append((box, Reason(reason)))
        return code, reason

    def _push(self, box: Box3, indet: bool) -> None:
        nw = _norm_widths(box, self.config)
        key = -max(nw)
        heapq.heappush(self._heap, (key, self._counter, box, indet, nw))
        self._counter += 1

    # -- public API ----------------------------------------------------------

    @property
    def worklist_size(self) -> int:
        return len(self._heap)

    def measure(self) -> float:
        """Sum of normalized box volumes over the work list."""
        return sum(nw[0] * nw[1] * nw[2] for (_, _, _, _, nw) in self._heap)

    def done(self) -> bool:
        return not self._heap

    def step(self) -> StepEvent:
        """Pop the widest box; either retire it as converged or split it."""
        if not self._heap:
            raise ValueError("step on an empty work list")
        key, _, box, indet, nw = heapq.heappop(self._heap)
        if -key <= 1.0:
            self.converged.append((box, indet))
            return StepEvent("converged", None, 0)
        # widest normalized dimension, ties in phi, theta, H order
        dim = max(range(3), key=lambda i: nw[i])
        if dim == 0:
            lo_half, hi_half = box.phi.bisect()
            children = (
                Box3(lo_half, box.theta, box.h),
                Box3(hi_half, box.theta, box.h),
            )
        elif dim == 1:
            lo_half, hi_half = box.theta.bisect()
            children = (
                Box3(box.phi, lo_half, box.h),
                Box3(box.phi, hi_half, box.h),
            )
        else:
            lo_half, hi_half = box.h.bisect()
            children = (
                Box3(box.phi, box.theta, lo_half),
                Box3(box.phi, box.theta, hi_half),
            )
        eliminated = 0
        for child in children:
            code, _reason = self._classify(child)
            if code == 0:
                eliminated += 1
            else:
                self._push(child, code == 2)
        return StepEvent("split", dim, eliminated)

    def run(self) -> list[tuple[Box3, bool]]:
        cap = self.config.max_list
        while self._heap:
            self.step()
            if len(self._heap) + len(self.converged) > cap:
                raise ListOverflow(len(self._heap) + len(self.converged))
        return self.converged

    def polish(self) -> None:
        """Retest converged boxes at finer subdivision; drop proven-empty ones.

        Convergence keeps a box whenever the battery cannot exclude it,
        which near a slow frequency crossing leaves spurious survivors:
        the level-set slack at tolerance scale exceeds the miss distance.
        Bisecting theta and H a few more levels shrinks the slack; when
        every part of a converged box eliminates, the box provably holds
        no resonance and is dropped.  A box containing a true resonance
        can never be dropped (some part always keeps), so coverage is
        unaffected and the pass stays sound.
        """
        depth = self.config.polish_depth
        if depth == 0 or not self.converged:
            return
        kept = []
        for box, indet in self.converged:
            if self._provably_empty(box, depth):
                self.polished.append(box)
            else:
                kept.append((box, indet))
        self.converged = kept

    def _provably_empty(self, box: Box3, depth: int) -> bool:
        if depth == 0:
            return False
        thetas = box.theta.bisect() if box.theta.lo < box.theta.hi else (box.theta,)
        fields = box.h.bisect() if box.h.lo < box.h.hi else (box.h,)
        for th in thetas:
            for h in fields:
                part = Box3(box.phi, th, h)
                code, _reason = self._classify(part)
                if code != 0 and not self._provably_empty(part, depth - 1):
                    return False
        return True


# ---------------------------------------------------------------------------
# gluing


def _phi_touch(a: Interval, b: Interval) -> bool:
    # the phi axis wraps at 2*pi; clusters meeting across the seam touch
    if a.intersect(b) is not iv.EMPTY:
        return True
    for shift in (iv.TWO_PI, -iv.TWO_PI):
        if not (a.lo + shift > b.hi or a.hi + shift < b.lo):
            return True
    return False


def glue(
    converged: list[tuple[Box3, bool]], config: SolverConfig
) -> list[ResonanceResult]:
    """Merge converged boxes into per-resonance enclosures.

    Boxes join one cluster when their H intervals overlap or gap by at
    most glue_gap AND their angle hulls intersect (phi modulo 2*pi).
    Merging is transitive; each cluster reports hulled intervals.  A
    cluster is INDETERMINATE only if every member was.
    """
    n = len(converged)
    if n == 0:
        return []
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    gap = config.glue_gap
    order = sorted(range(n), key=lambda i: converged[i][0].h.lo)
    active: list[int] = []
    for j in order:
        bj = converged[j][0]
        lo_j = bj.h.lo
        active = [i for i in active if converged[i][0].h.hi >= lo_j - gap]
        for i in active:
            bi = converged[i][0]
            if (
                bi.theta.intersect(bj.theta) is not iv.EMPTY
                and _phi_touch(bi.phi, bj.phi)
            ):
                union(i, j)
        active.append(j)

    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)

    results = []
    for members in clusters.values():
        h_res = theta_hull = phi_hull = None
        all_indet = True
        for i in members:
            box, indet = converged[i]
            all_indet = all_indet and indet
            h_res = box.h if h_res is None else h_res.hull(box.h)
            theta_hull = box.theta if theta_hull is None else theta_hull.hull(box.theta)
            phi_hull = box.phi if phi_hull is None else phi_hull.hull(box.phi)
        results.append(
            ResonanceResult(
                h_res,
                theta_hull,
                phi_hull,
                Status.INDETERMINATE if all_indet else Status.RESONANCE,
                len(members),
            )
        )
    results.sort(key=lambda r: (r.h_res.midpoint, r.h_res.lo, r.theta_hull.lo))
    return results


def solve_orientation(
    direction: FieldDirection,
    params: MaterialParams,
    config: SolverConfig | None = None,
    backend=None,
    keep_trace: bool = False,
):
    """Run branch and bound for one field orientation.

    Returns the glued enclosures sorted by resonance field; when
    keep_trace is set, returns (results, state) instead so callers can
    audit the elimination trace.
    """
    state = SolverState(direction, params, config, backend, keep_trace)
    state.run()
    state.polish()
    results = glue(state.converged, state.config)
    if keep_trace:
        return results, state
    return results
