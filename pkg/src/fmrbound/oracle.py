"""Classical (non-rigorous) reference solver, used to test the interval one.

Everything here is ordinary floating-point numerics: dense grid scans,
Newton refinement, branch tracking over a field grid, and bisection on
the frequency mismatch.  It can in principle miss a root or misplace
one by round-off; the interval solver must not.  The two solvers share
only the model formulas, so agreement between them exercises the whole
subdivision machinery.

Geometry fact used by the scan: every stable equilibrium with
sin(theta_h) > 0 lies on the meridian phi = phi_h.  Stationarity in phi
forces sin(phi - phi_h) = 0, and on the opposite meridian the azimuthal
curvature d2E/dphi2 = m_s*H*sin(theta)*sin(theta_h)*cos(phi - phi_h) is
negative, leaving only saddles.  For an axial field the energy is
phi-independent and the meridian profile again carries everything:
interior minima are degenerate rings with zero precession frequency
(they never resonate at a positive drive frequency) and the pole minima
are judged in a rotated frame where the spherical denominator is
harmless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import FieldDirection, MaterialParams

__all__ = ["OracleRoot", "BranchJump", "equilibrium", "omega_sq_at", "scan_resonances"]

_AXIAL_EPS = 1e-12  # sin(theta_h) below this counts as an axial field
_POLE_EPS = 1e-6  # sin(theta) below this switches to the rotated frame


@dataclass(frozen=True, slots=True)
class OracleRoot:
    """One classical resonance-field estimate.

    h_res: resonance field (Oe), refined to the scan tolerance.
    theta_eq, phi_eq: equilibrium angles at the root (rad).
    omega_residual: omega(h_res) - omega_exp (rad/s), diagnostic.
    branch: index of the equilibrium branch the root sits on.
    """

    h_res: float
    theta_eq: float
    phi_eq: float
    omega_residual: float
    branch: int


class BranchJump(RuntimeError):
    """An equilibrium branch could not be tracked continuously.

    Raised when the tracker declares a discontinuity although the
    pre-jump minimum demonstrably continues to exist (its successor
    Newton-tracks back onto the old position).  The cure is a smaller
    field step.  A genuine basin disappearance (fold) ends the branch
    silently.
    """


# ---------------------------------------------------------------------------
# energy and derivatives (plain floats / numpy arrays)


def _frame_derivs(sa, ca, sb, cb, w, wa, wb, waa, wbb, wab, zf, p, q, r, a, k4):
    """Derivatives of E in any frame where cos(old theta) = w(alpha, beta).

    (sa, ca, sb, cb) are sin/cos of the frame's own colatitude alpha and
    azimuth beta; w and its listed partials encode the old polar axis;
    (p, q, r) are the field direction components in the new frame.
    """
    s2 = 1.0 - w * w
    u = cb * p + sb * q
    v = cb * q - sb * p
    gp = -2.0 * w * (a + 2.0 * k4 * s2)
    gpp = -2.0 * a - 4.0 * k4 + 12.0 * k4 * w * w
    e_a = -zf * (ca * u - sa * r) + gp * wa
    e_b = -zf * (sa * v) + gp * wb
    e_aa = zf * (sa * u + ca * r) + gpp * wa * wa + gp * waa
    e_bb = zf * (sa * u) + gpp * wb * wb + gp * wbb
    e_ab = -zf * (ca * v) + gpp * wa * wb + gp * wab
    return e_a, e_b, e_aa, e_bb, e_ab


def _std_derivs(theta, phi, h, hx, hy, hz, ms, a, k4):
    sa, ca = np.sin(theta), np.cos(theta)
    sb, cb = np.sin(phi), np.cos(phi)
    return _frame_derivs(
        sa, ca, sb, cb, ca, -sa, 0.0, -ca, 0.0, 0.0, ms * h, hx, hy, hz, a, k4
    )


def _rot_derivs(theta, phi, h, hx, hy, hz, ms, a, k4):
    """Derivatives in the frame with new x = old y, new y = old z, new z = old x.

    Returns the five derivatives plus sin(alpha) for the denominator.
    """
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    mx, my, mz = st * cp, st * sp, ct
    alpha = np.arccos(np.clip(mx, -1.0, 1.0))
    beta = np.arctan2(mz, my)
    sa, ca = np.sin(alpha), np.cos(alpha)
    sb, cb = np.sin(beta), np.cos(beta)
    w = sa * sb  # the old cos(theta), expressed in the new frame
    derivs = _frame_derivs(
        sa, ca, sb, cb, w, ca * sb, sa * cb, -w, -w, ca * cb,
        ms * h, hy, hz, hx, a, k4,
    )
    return derivs, sa


def _energy_scalar(theta, phi, h, hx, hy, hz, ms, a, k4):
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    s2 = st * st
    return -ms * h * (st * (cp * hx + sp * hy) + ct * hz) + a * s2 + k4 * s2 * s2


def omega_sq_at(
    direction: FieldDirection,
    params: MaterialParams,
    h: float,
    theta: float,
    phi: float,
) -> float:
    """Squared precession frequency (rad/s)^2 at an equilibrium point.

    Uses the standard spherical frame away from the poles and a rotated
    frame near them.  The value is the curvature quotient and is
    physically meaningful only at stationary points of the energy.
    """
    hx, hy, hz = direction.unit()
    ms, a, k4 = params.m_s, params.aniso_a, params.k_4
    if abs(math.sin(theta)) >= _POLE_EPS:
        _, _, e_tt, e_pp, e_tp = _std_derivs(theta, phi, h, hx, hy, hz, ms, a, k4)
        den = (ms * math.sin(theta)) ** 2
    else:
        derivs, sa = _rot_derivs(theta, phi, h, hx, hy, hz, ms, a, k4)
        _, _, e_tt, e_pp, e_tp = derivs
        den = (ms * float(sa)) ** 2
    rhs = (float(e_tt) * float(e_pp) - float(e_tp) ** 2) / den
    return params.gamma**2 * rhs


# ---------------------------------------------------------------------------
# dense 2-D equilibrium scan


def equilibrium(
    direction: FieldDirection,
    params: MaterialParams,
    h: float,
    grid: tuple[int, int] = (721, 1441),
    refine_tol: float = 1e-10,
) -> list[tuple[float, float]]:
    """All local minima of E(theta, phi) at one field magnitude.

    Dense grid scan (wrap-aware in phi) followed by coordinate-descent
    refinement; each reported point is checked against a small angular
    neighborhood.  For an axial field the phi direction is degenerate
    and one representative per ring, with phi = phi_h, is reported.
    Returned pairs are sorted by theta.
    """
    if h < 0:
        raise ValueError("field magnitude must be nonnegative")
    hx, hy, hz = direction.unit()
    ms, a, k4 = params.m_s, params.aniso_a, params.k_4
    nth, nph = grid
    th = np.linspace(0.0, math.pi, nth)
    ph = np.linspace(0.0, 2.0 * math.pi, nph)
    e = _energy_scalar(th[:, None], ph[None, :], h, hx, hy, hz, ms, a, k4)
    core = e[:, : nph - 1]  # drop the duplicated phi = 2*pi column

    interior = core[1:-1, :]
    mask = np.ones_like(interior, dtype=bool)
    for dr in (-1, 0, 1):
        rows = core[1 + dr : nth - 1 + dr, :]
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            mask &= interior <= np.roll(rows, dc, axis=1)

    axial = math.hypot(hx, hy) < _AXIAL_EPS
    cand: list[tuple[float, float]] = []
    if axial:
        # rings are phi-degenerate: one candidate per run of marked rows
        rows = np.nonzero(mask.any(axis=1))[0]
        keep = [r for k, r in enumerate(rows) if k == 0 or r != rows[k - 1] + 1]
        cand = [(float(th[r + 1]), direction.phi_h) for r in keep]
    else:
        ii, jj = np.nonzero(mask)
        order = np.argsort(interior[ii, jj], kind="stable")
        taken: list[tuple[int, int]] = []
        for k in order[:512]:
            i, j = int(ii[k]), int(jj[k])
            close = False
            for i2, j2 in taken:
                dj = abs(j - j2)
                if abs(i - i2) <= 1 and min(dj, (nph - 1) - dj) <= 1:
                    close = True
                    break
            if not close:
                taken.append((i, j))
                cand.append((float(th[i + 1]), float(ph[j])))
            if len(taken) >= 128:
                break
    if core[0, :].min() <= core[1, :].min():
        cand.append((0.0, direction.phi_h))
    if core[-1, :].min() <= core[-2, :].min():
        cand.append((math.pi, direction.phi_h))

    def e_at(t: float, f: float) -> float:
        return float(_energy_scalar(t, f, h, hx, hy, hz, ms, a, k4))

    dth = float(th[1] - th[0])
    dph = float(ph[1] - ph[0])
    refined: list[tuple[float, float]] = []
    for t0, f0 in cand:
        t, f = t0, f0
        for _ in range(200):
            t_new = _golden_min(
                lambda x: e_at(x, f), max(0.0, t - dth), min(math.pi, t + dth)
            )
            f_new = _golden_min(lambda x: e_at(t_new, x), f - dph, f + dph)
            moved = abs(t_new - t) + abs(f_new - f)
            t, f = t_new, f_new
            if moved < refine_tol:
                break
        refined.append((t, f))

    # neighborhood stability, then dedupe by magnetization direction
    out: list[tuple[float, float]] = []
    eps = 1e-5
    for t, f in refined:
        e0 = e_at(t, f)
        scale = abs(e0) + ms * h + abs(a) + abs(k4) + 1.0
        stable = True
        for k in range(8):
            ang = 2.0 * math.pi * k / 8.0
            tn = min(math.pi, max(0.0, t + eps * math.cos(ang)))
            fn = f + (eps * math.sin(ang)) / max(math.sin(t), eps)
            if e_at(tn, fn) < e0 - 1e-9 * scale:
                stable = False
                break
        if stable:
            out.append((t, direction.phi_h if axial else f % (2.0 * math.pi)))

    deduped: list[tuple[float, float]] = []
    for t, f in sorted(out):
        dup = False
        for t2, f2 in deduped:
            if axial:
                dup = abs(t - t2) < 1e-6
            else:
                dot = (
                    math.sin(t) * math.sin(t2) * math.cos(f - f2)
                    + math.cos(t) * math.cos(t2)
                )
                dup = dot > math.cos(1e-6)
            if dup:
                break
        if not dup:
            deduped.append((t, f))
    return deduped


def _golden_min(fn, lo: float, hi: float) -> float:
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(80):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fn(d)
        if b - a < 1e-12:
            break
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# resonance scan over the field grid
#
# All stable equilibria sit on the phi_h meridian (module docstring), so
# branch tracking works on the 1-D profile along it:
#
#   E(psi) = -m_s*H*cos(psi - theta_h) + A*sin(psi)^2 + K_4*sin(psi)^4


class _MeridianModel:
    def __init__(self, direction: FieldDirection, params: MaterialParams):
        self.dir = direction
        self.hx, self.hy, self.hz = direction.unit()
        self.ms = params.m_s
        self.a = params.aniso_a
        self.k4 = params.k_4
        self.th = direction.theta_h
        self.axial = math.hypot(self.hx, self.hy) < _AXIAL_EPS
        self.aniso_scale = 2.0 * abs(self.a) + 4.0 * abs(self.k4)

    def profile(self, psi, h):
        s2 = np.sin(psi) ** 2
        return -self.ms * h * np.cos(psi - self.th) + self.a * s2 + self.k4 * s2 * s2

    def d12(self, psi, h):
        """First and second psi-derivatives of the meridian profile."""
        s, c = np.sin(psi), np.cos(psi)
        zee = self.ms * h
        d1 = zee * np.sin(psi - self.th) + (2.0 * self.a * s + 4.0 * self.k4 * s**3) * c
        d2 = (
            zee * np.cos(psi - self.th)
            + 2.0 * self.a * (c * c - s * s)
            + self.k4 * (12.0 * s * s * c * c - 4.0 * s**4)
        )
        return d1, d2

    def grad_tol(self, h):
        return 1e-7 * (self.ms * np.asarray(h) + self.aniso_scale + 1.0)

    def rhs_sq(self, psi, h):
        """Curvature quotient in Oe^2 at meridian points (pole-safe)."""
        psi_b, h_b = np.broadcast_arrays(
            np.asarray(psi, dtype=float), np.asarray(h, dtype=float)
        )
        out = np.empty(psi_b.shape)
        near = np.abs(np.sin(psi_b)) < _POLE_EPS
        far = ~near
        if far.any():
            _, _, e_tt, e_pp, e_tp = _std_derivs(
                psi_b[far], self.dir.phi_h, h_b[far],
                self.hx, self.hy, self.hz, self.ms, self.a, self.k4,
            )
            den = (self.ms * np.sin(psi_b[far])) ** 2
            out[far] = (e_tt * e_pp - e_tp * e_tp) / den
        if near.any():
            derivs, sa = _rot_derivs(
                psi_b[near], self.dir.phi_h, h_b[near],
                self.hx, self.hy, self.hz, self.ms, self.a, self.k4,
            )
            _, _, e_tt, e_pp, e_tp = derivs
            den = (self.ms * sa) ** 2
            out[near] = (e_tt * e_pp - e_tp * e_tp) / den
        return out

    def min_ok(self, psi, h):
        """Stable 2-D minimum test for meridian points.

        Interior non-axial points only need positive profile curvature
        (the azimuthal curvature m_s*H*sin(psi)*sin(theta_h) is positive
        there); axial interior points are degenerate rings and never
        count.  Near-pole points are judged by rotated-frame curvatures.
        """
        psi_b, h_b = np.broadcast_arrays(
            np.asarray(psi, dtype=float), np.asarray(h, dtype=float)
        )
        out = np.empty(psi_b.shape, dtype=bool)
        near = np.abs(np.sin(psi_b)) < _POLE_EPS
        far = ~near
        if far.any():
            if self.axial:
                out[far] = False
            else:
                _, d2 = self.d12(psi_b[far], h_b[far])
                out[far] = (d2 > 0) & (psi_b[far] > 0) & (psi_b[far] < math.pi)
        if near.any():
            derivs, _sa = _rot_derivs(
                psi_b[near], self.dir.phi_h, h_b[near],
                self.hx, self.hy, self.hz, self.ms, self.a, self.k4,
            )
            _, _, e_tt, e_pp, e_tp = derivs
            out[near] = (e_tt > 0) & (e_pp > 0) & (e_tt * e_pp - e_tp * e_tp > 0)
        return out


def _newton_1d(model: _MeridianModel, psi0: float, hvals, iters: int = 60):
    """Vectorized damped Newton toward the nearest meridian minimum.

    Elements whose curvature turns nonpositive are frozen and reported
    invalid: the warm start left their basin, so the tracked identity
    is gone.
    """
    hvals = np.asarray(hvals, dtype=float)
    psi = np.full(hvals.shape, float(psi0))
    ok = np.ones(hvals.shape, dtype=bool)
    for _ in range(iters):
        d1, d2 = model.d12(psi, hvals)
        bad = ~(d2 > 0.0)
        ok &= ~bad
        step = np.where(ok, d1 / np.where(d2 > 0.0, d2, 1.0), 0.0)
        np.clip(step, -0.02, 0.02, out=step)
        psi -= step
        np.clip(psi, -0.5, math.pi + 0.5, out=psi)
        if np.all(np.abs(step) < 1e-13):
            break
    d1, d2 = model.d12(psi, hvals)
    ok &= (d2 > 0.0) & (np.abs(d1) <= model.grad_tol(hvals))
    return psi, ok


def _profile_minima(model: _MeridianModel, h: float, n: int = 2881) -> list[float]:
    """Refined local minima of the meridian profile at one field value."""
    psi = np.linspace(0.0, math.pi, n)
    e = model.profile(psi, h)
    idx = np.nonzero((e[1:-1] <= e[:-2]) & (e[1:-1] <= e[2:]))[0] + 1
    seeds = [float(psi[i]) for i in idx]
    if e[0] <= e[1]:
        seeds.append(0.0)
    if e[-1] <= e[-2]:
        seeds.append(math.pi)
    out: list[float] = []
    for s in seeds:
        p, ok = _newton_1d(model, s, h)
        p = float(np.clip(p, 0.0, math.pi))
        if p < 1e-9:
            p = 0.0
        elif math.pi - p < 1e-9:
            p = math.pi
        if not bool(ok):
            # Newton rejects profile-boundary minima (gradient nonzero
            # there); keep a pole seed when the profile rises off it
            if s == 0.0 and _pole_profile_min(model, 0.0, h):
                p = 0.0
            elif s == math.pi and _pole_profile_min(model, math.pi, h):
                p = math.pi
            else:
                continue
        if all(abs(p - q) > 5e-4 for q in out):
            out.append(p)
    return out


def _pole_profile_min(model: _MeridianModel, pole: float, h: float) -> bool:
    eps = 1e-7
    if pole == 0.0:
        d1, _ = model.d12(eps, h)
        return float(d1) >= 0.0
    d1, _ = model.d12(math.pi - eps, h)
    return float(d1) <= 0.0


class _Branch:
    __slots__ = ("id", "born", "dead", "pole", "psi", "rhs")

    def __init__(self, branch_id: int, at: int, psi0: float, n: int, axial: bool):
        self.id = branch_id
        self.born = at
        self.dead: int | None = None  # first invalid index, None while alive
        # poles are persistent equilibria only for axial fields; for any
        # other direction a pole seed (the H = 0 degenerate landscape)
        # just warm-starts the Newton tracker
        self.pole = psi0 if axial and psi0 in (0.0, math.pi) else None
        self.psi = np.full(n, np.nan)
        self.rhs = np.full(n, np.nan)
        self.psi[at] = psi0


def scan_resonances(
    direction: FieldDirection,
    params: MaterialParams,
    h_max: float = 10000.0,
    step: float = 0.5,
    *,
    refine_tol: float = 1e-3,
    jump_tol: float = 0.15,
    chunk: int = 512,
    scan_every: int = 128,
) -> list[OracleRoot]:
    """Track every equilibrium branch over [0, h_max] and root the drive.

    The curvature quotient is evaluated along each branch on the field
    grid; sign changes of quotient - (omega_exp/gamma)^2 are bracketed
    and refined by bisection to refine_tol (Oe).  Branches are born
    wherever a periodic profile rescan finds a minimum no live branch
    claims (each is then grown backward to its true birth field) and die
    where their basin vanishes.  Results are sorted by h_res.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if h_max <= 0:
        raise ValueError("h_max must be positive")
    model = _MeridianModel(direction, params)
    hs = np.arange(0.0, h_max + 0.5 * step, step)
    n = len(hs)
    branches: list[_Branch] = []

    def spawn(i: int) -> None:
        taken = [float(b.psi[i]) for b in branches if not math.isnan(b.psi[i])]
        for s in _profile_minima(model, float(hs[i])):
            if model.axial and 0.0 < s < math.pi:
                continue  # degenerate ring, carries no resonance
            if any(abs(s - p) < 5e-4 for p in taken):
                continue
            b = _Branch(len(branches), i, s, n, model.axial)
            b.rhs[i] = float(model.rhs_sq(s, float(hs[i])))
            branches.append(b)
            taken.append(s)
            _grow(model, b, hs, i, -1, jump_tol, chunk)
            _grow(model, b, hs, i, +1, jump_tol, chunk)

    spawn(0)
    for f in list(range(scan_every, n - 1, scan_every)) + [n - 1]:
        spawn(f)

    # Branches can coalesce (a pitchfork merges two canted minima into
    # one): wherever two branches track the same position, the younger
    # one yields, so merged segments are reported exactly once.
    for j in range(1, len(branches)):
        for i in range(j):
            same = (
                ~np.isnan(branches[i].psi)
                & ~np.isnan(branches[j].psi)
                & (np.abs(branches[i].psi - branches[j].psi) < 1e-6)
            )
            branches[j].psi[same] = np.nan
            branches[j].rhs[same] = np.nan

    roots: list[OracleRoot] = []
    gamma = params.gamma
    omega_exp = params.omega_exp
    target = params.target_sq
    for b in branches:
        r = b.rhs - target
        valid = ~np.isnan(b.rhs)
        for k in range(n - 1):
            if not valid[k]:
                continue
            if r[k] == 0.0:
                h_star, psi_star = float(hs[k]), float(b.psi[k])
            elif valid[k + 1] and r[k] * r[k + 1] < 0.0:
                h_star, psi_star = _bisect_root(
                    model, float(hs[k]), float(hs[k + 1]),
                    float(b.psi[k]), float(b.psi[k + 1]), target, refine_tol,
                )
            else:
                continue
            omega_here = gamma * math.sqrt(
                max(0.0, float(model.rhs_sq(psi_star, h_star)))
            )
            roots.append(
                OracleRoot(
                    h_star, psi_star, direction.phi_h, omega_here - omega_exp, b.id
                )
            )
    roots.sort(key=lambda x: x.h_res)
    return roots


def _grow(model, b: _Branch, hs, start: int, sgn: int, jump_tol: float, chunk: int):
    """Fill b.psi / b.rhs outward from a known index until death or the end."""
    n = len(hs)
    prev = float(b.psi[start])
    i = start + sgn
    while 0 <= i < n:
        stop = min(i + chunk, n) if sgn > 0 else max(i - chunk, -1)
        idx = np.arange(i, stop, sgn)
        h_seg = hs[idx]
        if b.pole is not None:
            okv = model.min_ok(np.full(idx.shape, b.pole), h_seg)
            k = int(np.argmin(okv)) if not okv.all() else len(idx)
            live = idx[:k]
            b.psi[live] = b.pole
            if k:
                b.rhs[live] = model.rhs_sq(np.full(k, b.pole), h_seg[:k])
            if k < len(idx):
                _end(b, int(idx[k]), sgn)
                return
        else:
            psi_seg, okv = _newton_1d(model, prev, h_seg)
            okv &= model.min_ok(psi_seg, h_seg)
            jumps = np.abs(np.diff(np.concatenate(([prev], psi_seg)))) > jump_tol
            bad = ~okv | jumps
            k = int(np.argmax(bad)) if bad.any() else len(idx)
            live = idx[:k]
            b.psi[live] = psi_seg[:k]
            if k:
                b.rhs[live] = model.rhs_sq(psi_seg[:k], h_seg[:k])
            if k < len(idx):
                if sgn > 0 and jumps[k] and okv[k]:
                    # valid minimum, discontinuous move: fold or lost track?
                    p_before = prev if k == 0 else float(psi_seg[k - 1])
                    _check_jump(model, b, p_before, hs, int(idx[k]), jump_tol)
                _end(b, int(idx[k]), sgn)
                return
            prev = float(psi_seg[-1])
        i = int(idx[-1]) + sgn
    if sgn < 0:
        b.born = 0


def _end(b: _Branch, at: int, sgn: int) -> None:
    if sgn > 0:
        b.dead = at
    else:
        b.born = at + 1


def _check_jump(model, b: _Branch, psi_before: float, hs, k: int, jump_tol: float):
    """Distinguish a fold from a tracking failure at a flagged jump.

    If any minimum of the post-jump profile Newton-tracks backward onto
    the pre-jump position, the old basin still existed and the tracker
    simply lost it: the field step is too coarse.
    """
    tol = max(1e-3, 0.02 * jump_tol)
    for m in _profile_minima(model, float(hs[k])):
        if model.axial and 0.0 < m < math.pi:
            continue
        back, ok = _newton_1d(model, m, float(hs[k - 1]))
        if bool(ok) and abs(float(back) - psi_before) < tol:
            raise BranchJump(
                f"branch {b.id}: minimum near psi={psi_before:.6f} survives at "
                f"H={float(hs[k]):.3f} Oe but moved more than jump_tol={jump_tol}; "
                f"shrink the scan step"
            )


def _bisect_root(model, h_lo, h_hi, psi_lo, psi_hi, target, tol):
    def value(h: float, warm: float) -> tuple[float, float]:
        psi, _ok = _newton_1d(model, warm, h, iters=80)
        psi_f = float(psi)
        return float(model.rhs_sq(psi_f, h)) - target, psi_f

    f_lo, w_lo = value(h_lo, psi_lo)
    if f_lo == 0.0:
        return h_lo, w_lo
    f_hi, w_hi = value(h_hi, psi_hi)
    if f_hi == 0.0:
        return h_hi, w_hi
    lo, hi, w = h_lo, h_hi, w_lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid, w = value(mid, w)
        if f_mid == 0.0:
            break
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    mid = 0.5 * (lo + hi)
    _f, w = value(mid, w)
    return mid, w
