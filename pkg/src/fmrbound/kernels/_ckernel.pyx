# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled box-classification kernel.

A literal transcription of resonance.classify_raw and the interval
primitives it touches, operating on C doubles.  Every operation keeps
the Python implementation's evaluation order and exactness
certificates, so the two backends agree verdict for verdict, reason for
reason, on every box; the test suite enforces that.  The module must be
compiled with FP contraction off (see setup.py): a fused multiply-add
would change products the exactness certificates reason about.
"""

from libc.math cimport acos as c_acos
from libc.math cimport atan as c_atan
from libc.math cimport cos as c_cos
from libc.math cimport fabs, floor, frexp, isinf
from libc.math cimport nextafter
from libc.math cimport sin as c_sin

cdef double _INF = float("inf")
cdef double _MIN_NORMAL = 2.2250738585072014e-308
cdef double _PI = 3.141592653589793
cdef double _TWO_PI = 2.0 * _PI
cdef double _TABLE_LO = -_TWO_PI - 1e-9
cdef double _TABLE_HI = 2.0 * _TWO_PI + 1e-9
cdef double _CRIT_SLACK = 4e-15
cdef double _PI_UP = nextafter(_PI, _INF)
cdef double _HALF_PI = 0.5 * _PI
cdef double _HALF_PI_UP = nextafter(_HALF_PI, _INF)

# verdict codes shared with resonance.classify_raw
cdef int ELIMINATE = 0
cdef int KEEP = 1
cdef int INDETERMINATE = 2

cdef int R_NONE = 0
cdef int R_PHI_DERIV = 1
cdef int R_THETA_DERIV = 2
cdef int R_POSITIVITY = 3
cdef int R_FREQUENCY = 4
cdef int R_STABILITY = 5


# -- outward rounding and exactness certificates ----------------------------

cdef inline double _down(double x) nogil:
    return nextafter(x, -_INF)


cdef inline double _up(double x) nogil:
    return nextafter(x, _INF)


cdef inline double _down_nz(double x) nogil:
    return x if x == 0.0 else nextafter(x, -_INF)


cdef inline double _up_nz(double x) nogil:
    return x if x == 0.0 else nextafter(x, _INF)


cdef inline double _add_lo(double a, double b) nogil:
    # TwoSum residual: err is the exact value of a + b - fl(a + b)
    cdef double s = a + b
    cdef double t = s - a
    cdef double err = (a - (s - t)) + (b - t)
    return s if err >= 0.0 else _down(s)


cdef inline double _add_hi(double a, double b) nogil:
    cdef double s = a + b
    cdef double t = s - a
    cdef double err = (a - (s - t)) + (b - t)
    return s if err <= 0.0 else _up(s)


cdef inline bint _pow2(double x) nogil:
    cdef int e
    cdef double m
    if x == 0.0 or isinf(x):
        return False
    m = frexp(x, &e)
    return m == 0.5 or m == -0.5


cdef inline bint _mul_exact(double a, double b, double p) nogil:
    if a == 0.0 or b == 0.0:
        return True
    if p == 0.0:
        return False
    if (_pow2(a) or _pow2(b)) and fabs(p) >= _MIN_NORMAL:
        return True
    if (floor(a) == a and floor(b) == b
            and fabs(a) <= 67108864.0 and fabs(b) <= 67108864.0):
        return True
    return False


cdef inline double _mul_lo(double a, double b) nogil:
    cdef double p = a * b
    return p if _mul_exact(a, b, p) else _down(p)


cdef inline double _mul_hi(double a, double b) nogil:
    cdef double p = a * b
    return p if _mul_exact(a, b, p) else _up(p)


cdef inline bint _div_exact(double a, double b, double q) nogil:
    if a == 0.0:
        return True
    return _pow2(b) and fabs(q) >= _MIN_NORMAL


cdef inline double _div_lo(double a, double b) nogil:
    cdef double q = a / b
    return q if _div_exact(a, b, q) else _down(q)


cdef inline double _div_hi(double a, double b) nogil:
    cdef double q = a / b
    return q if _div_exact(a, b, q) else _up(q)


# -- interval primitives on (lo, hi) pairs -----------------------------------
# Each op writes its result through out pointers; callers keep results in
# local doubles so the whole battery lives in registers.

cdef inline void i_add(double al, double ah, double bl, double bh,
                       double* lo, double* hi) nogil:
    lo[0] = _add_lo(al, bl)
    hi[0] = _add_hi(ah, bh)


cdef inline void i_sub(double al, double ah, double bl, double bh,
                       double* lo, double* hi) nogil:
    lo[0] = _add_lo(al, -bh)
    hi[0] = _add_hi(ah, -bl)


cdef inline void i_mul(double al, double ah, double bl, double bh,
                       double* lo, double* hi) nogil:
    cdef double l1 = _mul_lo(al, bl)
    cdef double l2 = _mul_lo(al, bh)
    cdef double l3 = _mul_lo(ah, bl)
    cdef double l4 = _mul_lo(ah, bh)
    cdef double h1 = _mul_hi(al, bl)
    cdef double h2 = _mul_hi(al, bh)
    cdef double h3 = _mul_hi(ah, bl)
    cdef double h4 = _mul_hi(ah, bh)
    lo[0] = min(min(l1, l2), min(l3, l4))
    hi[0] = max(max(h1, h2), max(h3, h4))


cdef inline void i_sqr(double al, double ah, double* lo, double* hi) nogil:
    # dependent form: never evaluated as a general product
    cdef double m, small, big
    if al <= 0.0 <= ah:
        m = max(-al, ah)
        lo[0] = 0.0
        hi[0] = _mul_hi(m, m)
    else:
        small = min(fabs(al), fabs(ah))
        big = max(fabs(al), fabs(ah))
        lo[0] = _mul_lo(small, small)
        hi[0] = _mul_hi(big, big)


cdef inline bint i_div(double al, double ah, double bl, double bh,
                       double* lo, double* hi) nogil:
    # extended division: False means the quotient is the whole line
    cdef double l1, l2, l3, l4, h1, h2, h3, h4
    if bl <= 0.0 <= bh:
        return False
    l1 = _div_lo(al, bl)
    l2 = _div_lo(al, bh)
    l3 = _div_lo(ah, bl)
    l4 = _div_lo(ah, bh)
    h1 = _div_hi(al, bl)
    h2 = _div_hi(al, bh)
    h3 = _div_hi(ah, bl)
    h4 = _div_hi(ah, bh)
    lo[0] = min(min(l1, l2), min(l3, l4))
    hi[0] = max(max(h1, h2), max(h3, h4))
    return True


cdef inline bint _crit3(double lo, double hi, double c1, double c2,
                        double c3) nogil:
    if lo - _CRIT_SLACK <= c1 <= hi + _CRIT_SLACK:
        return True
    if lo - _CRIT_SLACK <= c2 <= hi + _CRIT_SLACK:
        return True
    if lo - _CRIT_SLACK <= c3 <= hi + _CRIT_SLACK:
        return True
    return False


cdef inline void i_sin(double al, double ah, double* lo, double* hi) nogil:
    cdef double slo, shi
    if ah - al >= _TWO_PI or al < _TABLE_LO or ah > _TABLE_HI:
        lo[0] = -1.0
        hi[0] = 1.0
        return
    slo = c_sin(al)
    shi = c_sin(ah)
    if _crit3(al, ah, -1.5 * _PI, 0.5 * _PI, 2.5 * _PI):
        hi[0] = 1.0
    else:
        hi[0] = min(1.0, _up_nz(max(slo, shi)))
    if _crit3(al, ah, -0.5 * _PI, 1.5 * _PI, 3.5 * _PI):
        lo[0] = -1.0
    else:
        lo[0] = max(-1.0, _down_nz(min(slo, shi)))


cdef inline void i_cos(double al, double ah, double* lo, double* hi) nogil:
    cdef double clo, chi
    if ah - al >= _TWO_PI or al < _TABLE_LO or ah > _TABLE_HI:
        lo[0] = -1.0
        hi[0] = 1.0
        return
    clo = c_cos(al)
    chi = c_cos(ah)
    if (_crit3(al, ah, -_TWO_PI, 0.0, _TWO_PI)
            or (al - _CRIT_SLACK <= 2.0 * _TWO_PI <= ah + _CRIT_SLACK)):
        hi[0] = 1.0
    else:
        hi[0] = min(1.0, _up_nz(max(clo, chi)))
    if _crit3(al, ah, -_PI, _PI, 3.0 * _PI):
        lo[0] = -1.0
    else:
        lo[0] = max(-1.0, _down_nz(min(clo, chi)))


cdef inline void i_acos(double al, double ah, double* lo, double* hi) nogil:
    cdef double cl = min(1.0, max(-1.0, al))
    cdef double ch = min(1.0, max(-1.0, ah))
    lo[0] = max(0.0, _down_nz(c_acos(ch)))
    hi[0] = min(_PI_UP, _up_nz(c_acos(cl)))


cdef inline void i_atan(double al, double ah, double* lo, double* hi) nogil:
    lo[0] = _down_nz(c_atan(al))
    hi[0] = _up_nz(c_atan(ah))


# -- the battery --------------------------------------------------------------

cdef int _frame_battery(
    double sa_l, double sa_h, double ca_l, double ca_h,
    double sb_l, double sb_h, double cb_l, double cb_h,
    double w_l, double w_h, double wa_l, double wa_h,
    double wb_l, double wb_h, double waa_l, double waa_h,
    double wbb_l, double wbb_h, double wab_l, double wab_h,
    double s2_l, double s2_h, double z_l, double z_h,
    double p, double q, double r,
    double aniso_a, double k4, double ms, double target,
    bint* bounded,
) nogil:
    """T1..T5 in one frame; returns the reason code (0 = survived)."""
    cdef double u_l, u_h, v_l, v_h, t1_l, t1_h, t2_l, t2_h
    cdef double da_l, da_h, db_l, db_h, daa_l, daa_h, dbb_l, dbb_h
    cdef double dab_l, dab_h, gp_l, gp_h, gpp_l, gpp_h, w2_l, w2_h
    cdef double ea_l, ea_h, eb_l, eb_h, eaa_l, eaa_h, ebb_l, ebb_h
    cdef double eab_l, eab_h, num_l, num_h, den_l, den_h, rhs_l, rhs_h
    cdef double c1, c2

    # u = cb*p + sb*q ; v = cb*q - sb*p
    i_mul(cb_l, cb_h, p, p, &t1_l, &t1_h)
    i_mul(sb_l, sb_h, q, q, &t2_l, &t2_h)
    i_add(t1_l, t1_h, t2_l, t2_h, &u_l, &u_h)
    i_mul(cb_l, cb_h, q, q, &t1_l, &t1_h)
    i_mul(sb_l, sb_h, p, p, &t2_l, &t2_h)
    i_sub(t1_l, t1_h, t2_l, t2_h, &v_l, &v_h)

    # d_a = ca*u - sa*r ; d_b = sa*v
    i_mul(ca_l, ca_h, u_l, u_h, &t1_l, &t1_h)
    i_mul(sa_l, sa_h, r, r, &t2_l, &t2_h)
    i_sub(t1_l, t1_h, t2_l, t2_h, &da_l, &da_h)
    i_mul(sa_l, sa_h, v_l, v_h, &db_l, &db_h)

    # d_aa = -(sa*u + ca*r) ; d_bb = -(sa*u) ; d_ab = ca*v
    i_mul(sa_l, sa_h, u_l, u_h, &t1_l, &t1_h)
    i_mul(ca_l, ca_h, r, r, &t2_l, &t2_h)
    i_add(t1_l, t1_h, t2_l, t2_h, &daa_l, &daa_h)
    daa_l, daa_h = -daa_h, -daa_l
    dbb_l = -t1_h
    dbb_h = -t1_l
    i_mul(ca_l, ca_h, v_l, v_h, &dab_l, &dab_h)

    # gp = (-2*w) * (aniso_a + (2*k4)*s2)
    c1 = 2.0 * k4
    i_mul(s2_l, s2_h, c1, c1, &t1_l, &t1_h)
    i_add(t1_l, t1_h, aniso_a, aniso_a, &t2_l, &t2_h)
    i_mul(w_l, w_h, -2.0, -2.0, &t1_l, &t1_h)
    i_mul(t1_l, t1_h, t2_l, t2_h, &gp_l, &gp_h)

    # gpp = (-2*aniso_a - 4*k4) + (12*k4)*sqr(w)
    c1 = -2.0 * aniso_a - 4.0 * k4
    c2 = 12.0 * k4
    i_sqr(w_l, w_h, &w2_l, &w2_h)
    i_mul(w2_l, w2_h, c2, c2, &t1_l, &t1_h)
    i_add(t1_l, t1_h, c1, c1, &gpp_l, &gpp_h)

    # e_a = -(z*d_a) + gp*wa ; e_b = -(z*d_b) + gp*wb
    i_mul(z_l, z_h, da_l, da_h, &t1_l, &t1_h)
    i_mul(gp_l, gp_h, wa_l, wa_h, &t2_l, &t2_h)
    i_add(-t1_h, -t1_l, t2_l, t2_h, &ea_l, &ea_h)
    i_mul(z_l, z_h, db_l, db_h, &t1_l, &t1_h)
    i_mul(gp_l, gp_h, wb_l, wb_h, &t2_l, &t2_h)
    i_add(-t1_h, -t1_l, t2_l, t2_h, &eb_l, &eb_h)

    # T1, T2: any angular derivative that excludes zero kills the box
    if not (eb_l <= 0.0 <= eb_h):
        bounded[0] = False
        return R_PHI_DERIV
    if not (ea_l <= 0.0 <= ea_h):
        bounded[0] = False
        return R_THETA_DERIV

    # e_aa = -(z*d_aa) + gpp*sqr(wa) + gp*waa   (left associated)
    i_mul(z_l, z_h, daa_l, daa_h, &t1_l, &t1_h)
    i_sqr(wa_l, wa_h, &w2_l, &w2_h)
    i_mul(gpp_l, gpp_h, w2_l, w2_h, &t2_l, &t2_h)
    i_add(-t1_h, -t1_l, t2_l, t2_h, &eaa_l, &eaa_h)
    i_mul(gp_l, gp_h, waa_l, waa_h, &t1_l, &t1_h)
    i_add(eaa_l, eaa_h, t1_l, t1_h, &eaa_l, &eaa_h)

    # e_bb = -(z*d_bb) + gpp*sqr(wb) + gp*wbb
    i_mul(z_l, z_h, dbb_l, dbb_h, &t1_l, &t1_h)
    i_sqr(wb_l, wb_h, &w2_l, &w2_h)
    i_mul(gpp_l, gpp_h, w2_l, w2_h, &t2_l, &t2_h)
    i_add(-t1_h, -t1_l, t2_l, t2_h, &ebb_l, &ebb_h)
    i_mul(gp_l, gp_h, wbb_l, wbb_h, &t1_l, &t1_h)
    i_add(ebb_l, ebb_h, t1_l, t1_h, &ebb_l, &ebb_h)

    # e_ab = -(z*d_ab) + gpp*(wa*wb) + gp*wab
    i_mul(z_l, z_h, dab_l, dab_h, &t1_l, &t1_h)
    i_mul(wa_l, wa_h, wb_l, wb_h, &w2_l, &w2_h)
    i_mul(gpp_l, gpp_h, w2_l, w2_h, &t2_l, &t2_h)
    i_add(-t1_h, -t1_l, t2_l, t2_h, &eab_l, &eab_h)
    i_mul(gp_l, gp_h, wab_l, wab_h, &t1_l, &t1_h)
    i_add(eab_l, eab_h, t1_l, t1_h, &eab_l, &eab_h)

    # num = e_aa*e_bb - sqr(e_ab) ; den = sqr(sa*ms)
    i_mul(eaa_l, eaa_h, ebb_l, ebb_h, &t1_l, &t1_h)
    i_sqr(eab_l, eab_h, &t2_l, &t2_h)
    i_sub(t1_l, t1_h, t2_l, t2_h, &num_l, &num_h)
    i_mul(sa_l, sa_h, ms, ms, &t1_l, &t1_h)
    i_sqr(t1_l, t1_h, &den_l, &den_h)

    bounded[0] = i_div(num_l, num_h, den_l, den_h, &rhs_l, &rhs_h)
    if bounded[0]:
        if not rhs_h > 0.0:
            return R_POSITIVITY
        if not (rhs_l <= target <= rhs_h):
            return R_FREQUENCY
    if not eaa_h > 0.0:
        return R_STABILITY
    if sa_l > 0.0 and not ebb_h > 0.0:
        return R_STABILITY
    return R_NONE


def classify_box(
    double th_lo, double th_hi,
    double ph_lo, double ph_hi,
    double h_lo, double h_hi,
    double hx, double hy, double hz,
    double ms, double aniso_a, double k4, double target,
):
    """Verdict and reason for one box; see resonance.classify_raw."""
    cdef double sth_l, sth_h
    cdef double sa_l, sa_h, ca_l, ca_h, sb_l, sb_h, cb_l, cb_h
    cdef double w_l, w_h, wa_l, wa_h, wb_l, wb_h, wab_l, wab_h
    cdef double s2_l, s2_h, z_l, z_h, t1_l, t1_h, t2_l, t2_h
    cdef double mx_l, mx_h, my_l, my_h, mz_l, mz_h
    cdef double alpha_l, alpha_h, beta_l, beta_h
    cdef bint bounded = False
    cdef bint r_bounded = False
    cdef bint have_rot = False
    cdef int reason

    # ---- standard frame: a = theta, b = phi, w = cos(theta)
    i_sin(th_lo, th_hi, &sth_l, &sth_h)
    sa_l = max(sth_l, 0.0)
    sa_h = min(sth_h, 1.0)
    if sa_l > sa_h:
        # interval algebra collapses to the empty set (possible only for
        # degenerate boxes outside the solver's reach); the pure kernel
        # propagates EMPTY into T1, which then fires
        return ELIMINATE, R_PHI_DERIV
    i_cos(th_lo, th_hi, &ca_l, &ca_h)
    i_sin(ph_lo, ph_hi, &sb_l, &sb_h)
    i_cos(ph_lo, ph_hi, &cb_l, &cb_h)
    i_sqr(sa_l, sa_h, &s2_l, &s2_h)
    s2_l = max(s2_l, 0.0)
    s2_h = min(s2_h, 1.0)
    i_mul(h_lo, h_hi, ms, ms, &z_l, &z_h)

    reason = _frame_battery(
        sa_l, sa_h, ca_l, ca_h, sb_l, sb_h, cb_l, cb_h,
        ca_l, ca_h,          # w = ca
        -sa_h, -sa_l,        # wa = -sa
        0.0, 0.0,            # wb
        -ca_h, -ca_l,        # waa = -ca
        0.0, 0.0, 0.0, 0.0,  # wbb, wab
        s2_l, s2_h, z_l, z_h,
        hx, hy, hz,
        aniso_a, k4, ms, target, &bounded,
    )
    if reason != R_NONE:
        return ELIMINATE, reason

    # ---- rotated frame (energy.rotated_angles): new z along old x.
    # rotated_angles recomputes sin/cos of the same theta/phi boxes; the
    # standard-frame locals hold exactly those values, so reuse them
    # (sa is already sin(theta) clamped to [0, 1], ca is cos(theta)).
    i_mul(sa_l, sa_h, cb_l, cb_h, &mx_l, &mx_h)
    mx_l = max(mx_l, -1.0)
    mx_h = min(mx_h, 1.0)
    i_mul(sa_l, sa_h, sb_l, sb_h, &my_l, &my_h)
    my_l = max(my_l, -1.0)
    my_h = min(my_h, 1.0)
    mz_l = max(ca_l, -1.0)
    mz_h = min(ca_h, 1.0)

    if mz_l > 0.0:
        i_div(my_l, my_h, mz_l, mz_h, &t1_l, &t1_h)
        i_atan(t1_l, t1_h, &t2_l, &t2_h)
        i_sub(_HALF_PI, _HALF_PI_UP, t2_l, t2_h, &beta_l, &beta_h)
        have_rot = True
    elif mz_h < 0.0:
        i_div(my_l, my_h, -mz_h, -mz_l, &t1_l, &t1_h)
        i_atan(t1_l, t1_h, &t2_l, &t2_h)
        i_add(-_HALF_PI_UP, -_HALF_PI, t2_l, t2_h, &beta_l, &beta_h)
        have_rot = True

    if have_rot:
        i_acos(mx_l, mx_h, &alpha_l, &alpha_h)
        i_sin(alpha_l, alpha_h, &sa_l, &sa_h)
        sa_l = max(sa_l, 0.0)
        sa_h = min(sa_h, 1.0)
        if sa_l > sa_h:
            return ELIMINATE, R_PHI_DERIV
        i_cos(alpha_l, alpha_h, &ca_l, &ca_h)
        i_sin(beta_l, beta_h, &sb_l, &sb_h)
        i_cos(beta_l, beta_h, &cb_l, &cb_h)
        i_mul(sa_l, sa_h, sb_l, sb_h, &w_l, &w_h)
        w_l = max(w_l, -1.0)
        w_h = min(w_h, 1.0)
        i_mul(ca_l, ca_h, sb_l, sb_h, &wa_l, &wa_h)
        i_mul(sa_l, sa_h, cb_l, cb_h, &wb_l, &wb_h)
        i_mul(ca_l, ca_h, cb_l, cb_h, &wab_l, &wab_h)
        # s2 = sqr(ca) + sqr(sa*cb), clamped to [0, 1]
        i_sqr(ca_l, ca_h, &t1_l, &t1_h)
        i_sqr(wb_l, wb_h, &t2_l, &t2_h)
        i_add(t1_l, t1_h, t2_l, t2_h, &s2_l, &s2_h)
        s2_l = max(s2_l, 0.0)
        s2_h = min(s2_h, 1.0)

        reason = _frame_battery(
            sa_l, sa_h, ca_l, ca_h, sb_l, sb_h, cb_l, cb_h,
            w_l, w_h, wa_l, wa_h, wb_l, wb_h,
            -w_h, -w_l,          # waa = -w
            -w_h, -w_l,          # wbb = -w
            wab_l, wab_h,
            s2_l, s2_h, z_l, z_h,
            hy, hz, hx,
            aniso_a, k4, ms, target, &r_bounded,
        )
        if reason != R_NONE:
            return ELIMINATE, reason
        bounded = bounded or r_bounded

    if bounded:
        return KEEP, R_NONE
    return INDETERMINATE, R_NONE
