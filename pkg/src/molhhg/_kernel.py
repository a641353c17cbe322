"""Fused per-sample accumulation kernel for the dipole engine.

One call handles every (channel pair, tau node) combination of a single
sample time and orbital: it gathers the per-dimension 1-D moment rows,
assembles the stripped matrix elements, evaluates the modified action and
its phase, and reduces into the three dipole components.  Loop order is
fixed, so results are deterministic and independent of worker count.

Compiled with numba when available; `molhhg.lewenstein` falls back to the
pure-numpy path otherwise (or when MOLHHG_ENGINE=numpy is set).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


@njit(cache=True)
def accumulate_sample(
    rec_x, rec_y, rec_z,          # (nA, ord_d+2, uD_d, T) moment tables, rec side
    ion_x, ion_y, ion_z,          # same grids, ionization-side shift
    inv_x, inv_y, inv_z,          # (P,) indices into the unique-difference axes
    coef,                         # (nA, nM, n_centers) contracted coefficients
    mono_pow,                     # (nM, 3) monomial powers
    mono_phase,                   # (nM,) (ax+ay+az) mod 4
    pair_i, pair_j,               # (P,) center indices
    pos,                          # (n_centers, 3)
    axis,                         # (3,) drive polarization
    d2, d_par, ri_par, rj_par,    # (P,) pair geometry scalars
    tau, w, action_tail,          # (T,) nodes, field momentum part, Ip tau + field terms
    a_t_ri_coeff,                 # scalar: e * A(t), multiplies ri_par
    a_tm, e_tm,                   # (T,) A(t - tau), E(t - tau) along the axis
    e_charge,
    spread_re, spread_im,         # (T,) weighted spreading factor
):
    n_pairs = pair_i.size
    n_tau = tau.size
    n_alpha = coef.shape[0]
    n_mono = coef.shape[1]

    o_re = np.empty(n_tau)
    o_im = np.empty(n_tau)
    rx_re = np.empty(n_tau)
    rx_im = np.empty(n_tau)
    ry_re = np.empty(n_tau)
    ry_im = np.empty(n_tau)
    rz_re = np.empty(n_tau)
    rz_im = np.empty(n_tau)
    io_re = np.empty(n_tau)
    io_im = np.empty(n_tau)
    ir_re = np.empty(n_tau)
    ir_im = np.empty(n_tau)

    ax0 = axis[0]
    ax1 = axis[1]
    ax2 = axis[2]
    out = np.zeros(6)

    for p in range(n_pairs):
        ic = pair_i[p]
        jc = pair_j[p]
        kx = inv_x[p]
        ky = inv_y[p]
        kz = inv_z[p]
        for n in range(n_tau):
            o_re[n] = 0.0
            o_im[n] = 0.0
            rx_re[n] = 0.0
            rx_im[n] = 0.0
            ry_re[n] = 0.0
            ry_im[n] = 0.0
            rz_re[n] = 0.0
            rz_im[n] = 0.0
            io_re[n] = 0.0
            io_im[n] = 0.0
            ir_re[n] = 0.0
            ir_im[n] = 0.0

        for ka in range(n_alpha):
            for m in range(n_mono):
                ci = coef[ka, m, ic]
                cj = coef[ka, m, jc]
                if ci == 0.0 and cj == 0.0:
                    continue
                pa = mono_pow[m, 0]
                pb = mono_pow[m, 1]
                pc = mono_pow[m, 2]
                ph = mono_phase[m]

                if ci != 0.0:
                    ra = rec_x[ka, pa, kx]
                    rb = rec_y[ka, pb, ky]
                    rc = rec_z[ka, pc, kz]
                    rau = rec_x[ka, pa + 1, kx]
                    rbu = rec_y[ka, pb + 1, ky]
                    rcu = rec_z[ka, pc + 1, kz]
                    s0 = ci if ph < 2 else -ci
                    s1 = ci if (ph + 1) % 4 < 2 else -ci
                    if ph % 2 == 0:
                        for n in range(n_tau):
                            bc = rb[n] * rc[n]
                            o_re[n] += s0 * ra[n] * bc
                            rx_im[n] += s1 * rau[n] * bc
                            ry_im[n] += s1 * ra[n] * rbu[n] * rc[n]
                            rz_im[n] += s1 * ra[n] * rb[n] * rcu[n]
                    else:
                        for n in range(n_tau):
                            bc = rb[n] * rc[n]
                            o_im[n] += s0 * ra[n] * bc
                            rx_re[n] += s1 * rau[n] * bc
                            ry_re[n] += s1 * ra[n] * rbu[n] * rc[n]
                            rz_re[n] += s1 * ra[n] * rb[n] * rcu[n]

                if cj != 0.0:
                    ia_ = ion_x[ka, pa, kx]
                    ib = ion_y[ka, pb, ky]
                    icr = ion_z[ka, pc, kz]
                    s0 = cj if ph < 2 else -cj
                    s1 = cj if (ph + 1) % 4 < 2 else -cj
                    if ph % 2 == 0:
                        for n in range(n_tau):
                            io_re[n] += s0 * ia_[n] * ib[n] * icr[n]
                        if ax0 != 0.0:
                            iau = ion_x[ka, pa + 1, kx]
                            for n in range(n_tau):
                                ir_im[n] += s1 * ax0 * iau[n] * ib[n] * icr[n]
                        if ax1 != 0.0:
                            ibu = ion_y[ka, pb + 1, ky]
                            for n in range(n_tau):
                                ir_im[n] += s1 * ax1 * ia_[n] * ibu[n] * icr[n]
                        if ax2 != 0.0:
                            icu = ion_z[ka, pc + 1, kz]
                            for n in range(n_tau):
                                ir_im[n] += s1 * ax2 * ia_[n] * ib[n] * icu[n]
                    else:
                        for n in range(n_tau):
                            io_im[n] += s0 * ia_[n] * ib[n] * icr[n]
                        if ax0 != 0.0:
                            iau = ion_x[ka, pa + 1, kx]
                            for n in range(n_tau):
                                ir_re[n] += s1 * ax0 * iau[n] * ib[n] * icr[n]
                        if ax1 != 0.0:
                            ibu = ion_y[ka, pb + 1, ky]
                            for n in range(n_tau):
                                ir_re[n] += s1 * ax1 * ia_[n] * ibu[n] * icr[n]
                        if ax2 != 0.0:
                            icu = ion_z[ka, pc + 1, kz]
                            for n in range(n_tau):
                                ir_re[n] += s1 * ax2 * ia_[n] * ib[n] * icu[n]

        px = pos[ic, 0]
        py = pos[ic, 1]
        pz = pos[ic, 2]
        rj = rj_par[p]
        d2p = d2[p]
        dpp = d_par[p]
        act_i = a_t_ri_coeff * ri_par[p]
        for n in range(n_tau):
            act = (
                -0.5 * d2p / tau[n]
                - dpp * w[n]
                + action_tail[n]
                + act_i
                - e_charge * a_tm[n] * rj
            )
            cph = np.cos(act)
            sph = -np.sin(act)
            # ion scalar: conj(ion_par) * E(t - tau)
            ipr = ir_re[n] + rj * io_re[n]
            ipi = ir_im[n] + rj * io_im[n]
            zr = (cph * ipr + sph * ipi) * e_tm[n]
            zi = (sph * ipr - cph * ipi) * e_tm[n]
            # fold in the weighted spreading factor
            wr = spread_re[n] * zr - spread_im[n] * zi
            wi = spread_re[n] * zi + spread_im[n] * zr
            # rec components (raised + center offset * overlap)
            vxr = rx_re[n] + px * o_re[n]
            vxi = rx_im[n] + px * o_im[n]
            vyr = ry_re[n] + py * o_re[n]
            vyi = ry_im[n] + py * o_im[n]
            vzr = rz_re[n] + pz * o_re[n]
            vzi = rz_im[n] + pz * o_im[n]
            out[0] += vxr * wr - vxi * wi
            out[1] += vxr * wi + vxi * wr
            out[2] += vyr * wr - vyi * wi
            out[3] += vyr * wi + vyi * wr
            out[4] += vzr * wr - vzi * wi
            out[5] += vzr * wi + vzi * wr
    return out
