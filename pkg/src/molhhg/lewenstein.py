"""Multi-center strong-field dipole engine.

The time-dependent dipole is an integral over the return time tau of channel
contributions (i = recombination center, j = ionization center):

    d(t) = i int dtau (2 pi / (eps + i tau))^(3/2)
           sum_ij e^(-i S_ij) d*_rec2(Pi_rec, R_i) [d_ion2(Pi_ion, R_j) . E(t - tau)]
           + c.c.

with the saddle momentum p_s = [e int A + (R_i - R_j)] / tau, the modified
action carrying the center-dependent terms p.(R_j - R_i) + e A(t).R_i
- e A(t').R_j, and per-center matrix elements whose plane-wave phases live in
the action.  i = j channels are the direct harmonics, i != j the transfer
harmonics.

The hot path exploits two structural facts: momentum components perpendicular
to the (linear) drive axis do not depend on the sample time t, so their 1-D
moment tables are built once per run; and momenta depend on center pairs only
through R_i - R_j, so tables are deduplicated over the unique difference
components.  Reductions use numpy's fixed-order summation, which makes runs
bit-reproducible for any worker count.
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .constants import ELECTRON_CHARGE
from .field import LaserField, electric_field, integral_A, integral_A2, vector_potential
from .gto_ft import PLANE_WAVE_NORM, MAX_SHELL_POWER, CapabilityError, hermite_values
from .molecule import Molecule


def _engine_mode() -> str:
    mode = os.environ.get("MOLHHG_ENGINE", "").lower()
    if mode in ("numba", "numpy"):
        return mode
    return "numba" if _kernel.HAVE_NUMBA else "numpy"

CHANNEL_KINDS = ("all", "direct", "transfer")


@dataclass(frozen=True)
class ChannelPair:
    """One (recombination center, ionization center) term of the double sum."""

    recombination_center: int
    ionization_center: int

    @property
    def kind(self) -> str:
        return "direct" if self.recombination_center == self.ionization_center else "transfer"


def channel_pairs(molecule: Molecule, channels: str = "all") -> list[ChannelPair]:
    """Enumerate the (i, j) channel pairs selected by a filter."""
    if channels not in CHANNEL_KINDS:
        raise ValueError(f"unknown channel filter {channels!r}")
    n = len(molecule.centers)
    pairs = [ChannelPair(i, j) for i in range(n) for j in range(n)]
    if channels == "all":
        return pairs
    return [p for p in pairs if p.kind == channels]


@dataclass(frozen=True)
class ActionValue:
    value: float
    gradient_norm: float


@dataclass(frozen=True)
class TauGrid:
    """Composite Gauss-Legendre quadrature over the return time.

    `n_nodes` is rounded to a multiple of the 8-point panel size.  `epsilon`
    regularizes the (2 pi / (eps + i tau))^(3/2) spreading factor.
    """

    tau_min: float
    tau_max: float
    n_nodes: int
    epsilon: float = 1e-4
    points_per_panel: int = 8

    def __post_init__(self) -> None:
        if not 0 < self.tau_min < self.tau_max:
            raise ValueError("need 0 < tau_min < tau_max")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.n_nodes < 1:
            raise ValueError("need at least one node")

    @classmethod
    def for_field(
        cls,
        field: LaserField,
        *,
        tau_min: float = 0.05,
        tau_max_cycles: float = 1.5,
        n_nodes: int = 640,
        epsilon: float = 1e-4,
    ) -> "TauGrid":
        return cls(tau_min, tau_max_cycles * field.period, n_nodes, epsilon)

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        ppp = self.points_per_panel
        n_panels = max(1, round(self.n_nodes / ppp))
        x, w = np.polynomial.legendre.leggauss(ppp)
        edges = np.linspace(self.tau_min, self.tau_max, n_panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        return nodes, weights



@dataclass(frozen=True)
class DipoleTimeSeries:
    """Time-dependent dipole on a uniform grid (complex storage, real values)."""

    times: np.ndarray
    dipole: np.ndarray            # (n_t, 3) complex
    drive_axis: str
    channels: str
    orbital_labels: tuple[str, ...]
    field: LaserField
    tau_grid: TauGrid

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        if t.size < 2:
            raise ValueError("time series needs at least two samples")
        steps = np.diff(t)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("time grid must be uniform")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "dipole", np.asarray(self.dipole, dtype=complex))

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def saddle_momentum(field: LaserField, t: float, tau: float, r_i, r_j) -> np.ndarray:
    """p_s = [e int_{t-tau}^{t} A + (R_i - R_j)] / tau."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    r_i = np.asarray(r_i, dtype=float)
    r_j = np.asarray(r_j, dtype=float)
    ia = integral_A(field, t - tau, t)
    return (ELECTRON_CHARGE * ia + (r_i - r_j)) / tau


def modified_action(
    field: LaserField, ip: float, t: float, tau: float, r_i, r_j, p
) -> ActionValue:
    """Modified semiclassical action and its momentum-gradient norm.

    S = int_{t-tau}^{t} [(p - e A)^2 / 2 + Ip] + p.(R_j - R_i)
        + e A(t).R_i - e A(t - tau).R_j
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    e = ELECTRON_CHARGE
    p = np.asarray(p, dtype=float)
    r_i = np.asarray(r_i, dtype=float)
    r_j = np.asarray(r_j, dtype=float)
    ia = integral_A(field, t - tau, t)
    ia2 = integral_A2(field, t - tau, t)
    kinetic = 0.5 * (p @ p) * tau - e * (p @ ia) + 0.5 * e**2 * ia2 + ip * tau
    extra = (
        p @ (r_j - r_i)
        + e * (vector_potential(field, t) @ r_i)
        - e * (vector_potential(field, t - tau) @ r_j)
    )
    gradient = p * tau - e * ia + (r_j - r_i)
    return ActionValue(float(kinetic + extra), float(np.linalg.norm(gradient)))


# --------------------------------------------------------------------------
# Engine internals
# --------------------------------------------------------------------------

# Target size (elements) of a (pairs, tau-chunk) working block; keeps the
# assembly inside the cache hierarchy.
_CHUNK_ELEMENTS = 40_000


def _real_moments(max_order: int, alpha: float, q: np.ndarray) -> np.ndarray:
    """|m(a, alpha, q)| modulo the i^a phase: the real factors of the 1-D moment."""
    half_rt = 0.5 / math.sqrt(alpha)
    u = q * half_rt
    herm = hermite_values(max_order, u)
    envelope = math.sqrt(math.pi / alpha) * np.exp(-(u**2))
    scale = half_rt ** np.arange(max_order + 1)
    return scale.reshape((-1,) + (1,) * q.ndim) * herm * envelope


class _EngineState:
    """Precomputed, read-only tables for one (molecule, orbitals, field, grid) run."""

    def __init__(
        self,
        molecule: Molecule,
        orbital_indices: list[int],
        field: LaserField,
        grid: TauGrid,
        channels: str,
    ):
        if channels not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel filter {channels!r}")
        if not orbital_indices:
            raise ValueError("orbital set must not be empty")
        self.molecule = molecule
        self.orbital_indices = list(orbital_indices)
        self.field = field
        self.grid = grid
        self.channels = channels

        self.tau, self.tau_w = grid.nodes_weights()
        self.n_tau = self.tau.size
        self.spread = (2.0 * math.pi / (grid.epsilon + 1j * self.tau)) ** 1.5 * self.tau_w
        self.spread_re = np.ascontiguousarray(np.real(self.spread))
        self.spread_im = np.ascontiguousarray(np.imag(self.spread))

        pos = molecule.positions
        n = len(molecule.centers)
        pairs = [
            (i, j)
            for i in range(n)
            for j in range(n)
            if channels == "all"
            or (channels == "direct" and i == j)
            or (channels == "transfer" and i != j)
        ]
        self.pair_i = np.array([p[0] for p in pairs], dtype=np.int64)
        self.pair_j = np.array([p[1] for p in pairs], dtype=np.int64)
        self.n_pairs = len(pairs)
        self.mode = _engine_mode()
        if self.n_pairs:
            # Process pairs in difference-sorted order so the kernel reuses
            # hot moment-table rows (drive dimension as the primary key; its
            # tables are rebuilt every sample).  The reduction order stays
            # fixed and deterministic.
            diff_sort = pos[self.pair_i] - pos[self.pair_j]
            drive_dim = int(np.argmax(np.abs(field.polarization)))
            others = [d for d in range(3) if d != drive_dim]
            order = np.lexsort(
                (diff_sort[:, others[1]], diff_sort[:, others[0]], diff_sort[:, drive_dim])
            )
            self.pair_i = np.ascontiguousarray(self.pair_i[order])
            self.pair_j = np.ascontiguousarray(self.pair_j[order])

        axis = field.polarization
        self.axis = axis
        diff = pos[self.pair_i] - pos[self.pair_j]          # (P, 3)
        self.d2 = (diff**2).sum(axis=1)
        self.d_par = diff @ axis
        self.ri_par = pos[self.pair_i] @ axis
        self.rj_par = pos[self.pair_j] @ axis
        self.pos = pos

        # Static dims: momentum components with zero drive projection are
        # t-independent; their moment tables are built once per run.
        self.static_dims = [d for d in range(3) if axis[d] == 0.0]
        self.dynamic_dims = [d for d in range(3) if axis[d] != 0.0]

        self._build_coefficient_tables()
        self._build_static_tables(diff)

    # -- molecule-derived constants -------------------------------------

    def _build_coefficient_tables(self) -> None:
        molecule = self.molecule
        shells = molecule.flat_shells()
        alphas = sorted({float(p.exponent) for _, s in shells for p in s.primitives})
        self.alphas = alphas
        alpha_idx = {a: k for k, a in enumerate(alphas)}

        monos: set[tuple[int, int, int]] = set()
        for _, shell in shells:
            if max(shell.powers) > MAX_SHELL_POWER:
                raise CapabilityError(
                    f"shell power {max(shell.powers)} exceeds supported "
                    f"maximum {MAX_SHELL_POWER}"
                )
            monos.add(shell.powers)
        self.monos = sorted(monos)
        mono_idx = {m: k for k, m in enumerate(self.monos)}
        self.max_order = [max(m[d] for m in self.monos) + 1 for d in range(3)]

        n_centers = len(molecule.centers)
        tables = []
        for orb in self.orbital_indices:
            coeff = molecule.orbitals[orb].coefficients
            table = np.zeros((len(alphas), len(self.monos), n_centers))
            for (center, shell), c in zip(shells, coeff):
                if c == 0.0:
                    continue
                m = mono_idx[shell.powers]
                for w, a in zip(shell.weights(), shell.exponents()):
                    table[alpha_idx[float(a)], m, center] += c * w
            tables.append(table)

        # Restrict the moment tables to the exponents and monomials the
        # selected orbitals actually touch (pi-type orbitals leave every core
        # exponent and s monomial at zero).
        support = np.zeros((len(alphas), len(self.monos)), dtype=bool)
        for table in tables:
            support |= np.any(table != 0.0, axis=2)
        keep_alpha = np.nonzero(support.any(axis=1))[0]
        keep_mono = np.nonzero(support.any(axis=0))[0]
        if keep_alpha.size == 0:
            raise ValueError("orbital set has no nonzero coefficients")
        self.alphas = [alphas[k] for k in keep_alpha]
        self.monos = [self.monos[k] for k in keep_mono]
        self.coef_tables = [
            np.ascontiguousarray(t[np.ix_(keep_alpha, keep_mono)]) for t in tables
        ]
        self.max_order = [max(m[d] for m in self.monos) + 1 for d in range(3)]

        # i^k phase class of each monomial product and of each raised variant.
        self.mono_phase = np.array([sum(m) % 4 for m in self.monos], dtype=np.int64)
        self.mono_pow = np.array(self.monos, dtype=np.int64)

    def _build_static_tables(self, diff: np.ndarray) -> None:
        """Per-dim moment values on the (unique difference) x (tau node) grid."""
        self.dim_vals: list[np.ndarray] = [np.empty(0)] * 3
        self.dim_inv: list[np.ndarray] = [np.empty(0, dtype=np.int64)] * 3
        self.static_tables: dict[int, np.ndarray] = {}
        self.static_gathered: dict[int, np.ndarray] = {}
        for d in range(3):
            vals, inv = np.unique(diff[:, d], return_inverse=True)
            self.dim_vals[d] = vals
            self.dim_inv[d] = inv.astype(np.int64)
        for d in self.static_dims:
            q = self.dim_vals[d][:, None] / self.tau[None, :]      # (uD, T)
            table = np.stack(
                [_real_moments(self.max_order[d], a, q) for a in self.alphas]
            )                                                       # (nA, ord+1, uD, T)
            self.static_tables[d] = table
            if self.mode == "numpy":
                # Gather once to pair-resolved shape (nA, ord+1, P, T).
                self.static_gathered[d] = np.ascontiguousarray(
                    table[:, :, self.dim_inv[d], :]
                )

    # -- per-sample kernel ----------------------------------------------

    def _dynamic_tables(self, shift: np.ndarray) -> list[np.ndarray | None]:
        """Moment tables for drive-projected dims on the (unique-D, T) grid.

        `shift` is the per-node field contribution to the momentum component.
        """
        out: list[np.ndarray | None] = [None] * 3
        for d in self.dynamic_dims:
            q = self.dim_vals[d][:, None] / self.tau[None, :] + self.axis[d] * shift[None, :]
            out[d] = np.stack(
                [_real_moments(self.max_order[d], a, q) for a in self.alphas]
            )
        return out

    def _chunk_tables(
        self, dynamic: list[np.ndarray | None], n0: int, n1: int
    ) -> list[np.ndarray]:
        """Pair-resolved (nA, ord+1, P, chunk) tables for one tau chunk.

        Static dims come pre-gathered for the whole run; dynamic dims are
        gathered per chunk so every working array stays cache-sized.
        """
        out = []
        for d in range(3):
            if dynamic[d] is None:
                out.append(self.static_gathered[d][:, :, :, n0:n1])
            else:
                out.append(np.ascontiguousarray(dynamic[d][:, :, self.dim_inv[d], n0:n1]))
        return out

    def _assemble(
        self,
        coef: np.ndarray,
        centers: np.ndarray,
        tables: list[np.ndarray],
        components: list[int],
    ) -> tuple[np.ndarray, list[np.ndarray]]:
        """Overlap and raised-moment sums for one side on a (P, chunk) block.

        Returns (overlap, raised[c] for c in components); the center-offset
        term and the (2 pi)^(-3/2) normalization are applied by the caller.
        """
        shape = tables[0].shape[-2:]
        acc_re = np.zeros(shape)
        acc_im = np.zeros(shape)
        raised_re = [np.zeros(shape) for _ in components]
        raised_im = [np.zeros(shape) for _ in components]
        base = np.empty(shape)
        term = np.empty(shape)

        for k_alpha in range(len(self.alphas)):
            cc = coef[k_alpha][:, centers]                    # (n_mono, P)
            for m, powers in enumerate(self.monos):
                c_pair = cc[m]
                if not np.any(c_pair):
                    continue
                c_col = c_pair[:, None]
                np.multiply(tables[0][k_alpha, powers[0]], tables[1][k_alpha, powers[1]], out=base)
                np.multiply(base, tables[2][k_alpha, powers[2]], out=base)
                np.multiply(base, c_col, out=base)
                phase = int(self.mono_phase[m])
                target = acc_re if phase % 2 == 0 else acc_im
                if phase < 2:
                    target += base
                else:
                    target -= base
                for ci, d in enumerate(components):
                    up = list(powers)
                    up[d] += 1
                    np.multiply(tables[0][k_alpha, up[0]], tables[1][k_alpha, up[1]], out=term)
                    np.multiply(term, tables[2][k_alpha, up[2]], out=term)
                    np.multiply(term, c_col, out=term)
                    rphase = (phase + 1) % 4
                    rtarget = raised_re[ci] if rphase % 2 == 0 else raised_im[ci]
                    if rphase < 2:
                        rtarget += term
                    else:
                        rtarget -= term
        overlap = acc_re + 1j * acc_im
        raised = [raised_re[ci] + 1j * raised_im[ci] for ci in range(len(components))]
        return overlap, raised

    def dipole_plus(self, t: float) -> np.ndarray:
        """The complex (pre-c.c.) dipole vector at one sample time."""
        field = self.field
        if field.convention == "semi_infinite" and t <= field.turn_on_time:
            return np.zeros(3, dtype=complex)

        tau = self.tau
        e = ELECTRON_CHARGE
        ia = _scalar_integral_a(field, t - tau, t)            # (T,)
        ia2 = _scalar_integral_a2(field, t - tau, t)
        a_t = _scalar_potential(field, t)
        a_tm = _scalar_potential(field, t - tau)
        e_tm = _scalar_field(field, t - tau)

        w = e * ia / tau                                      # field part of p_s (par)
        shift_rec = w - e * a_t                               # Pi = p_s - e A
        shift_ion = w - e * a_tm

        base_action = -0.5 * w**2 * tau + 0.5 * e**2 * ia2
        rec_dynamic = self._dynamic_tables(shift_rec)
        ion_dynamic = self._dynamic_tables(shift_ion)

        if self.mode == "numba":
            return self._dipole_plus_kernel(
                rec_dynamic, ion_dynamic, base_action, tau, w, a_t, a_tm, e_tm
            )
        return self._dipole_plus_numpy(
            rec_dynamic, ion_dynamic, base_action, tau, w, a_t, a_tm, e_tm
        )

    def _dipole_plus_kernel(
        self, rec_dynamic, ion_dynamic, base_action, tau, w, a_t, a_tm, e_tm
    ) -> np.ndarray:
        e = ELECTRON_CHARGE
        rec_tabs = [
            rec_dynamic[d] if rec_dynamic[d] is not None else self.static_tables[d]
            for d in range(3)
        ]
        ion_tabs = [
            ion_dynamic[d] if ion_dynamic[d] is not None else self.static_tables[d]
            for d in range(3)
        ]
        total = np.zeros(3, dtype=complex)
        for orb, coef in zip(self.orbital_indices, self.coef_tables):
            ip = self.molecule.orbitals[orb].ionization_potential
            out = _kernel.accumulate_sample(
                rec_tabs[0], rec_tabs[1], rec_tabs[2],
                ion_tabs[0], ion_tabs[1], ion_tabs[2],
                self.dim_inv[0], self.dim_inv[1], self.dim_inv[2],
                coef, self.mono_pow, self.mono_phase,
                self.pair_i, self.pair_j, self.pos, self.axis,
                self.d2, self.d_par, self.ri_par, self.rj_par,
                tau, w, base_action + ip * tau,
                e * a_t, a_tm, e_tm, e,
                self.spread_re, self.spread_im,
            )
            total += out[0::2] + 1j * out[1::2]
        return 1j * PLANE_WAVE_NORM**2 * total

    def _dipole_plus_numpy(
        self, rec_dynamic, ion_dynamic, base_action, tau, w, a_t, a_tm, e_tm
    ) -> np.ndarray:
        e = ELECTRON_CHARGE
        drive_components = self.dynamic_dims
        chunk = max(8, _CHUNK_ELEMENTS // max(self.n_pairs, 1))
        total = np.zeros(3, dtype=complex)
        for n0 in range(0, self.n_tau, chunk):
            n1 = min(n0 + chunk, self.n_tau)
            rec_tables = self._chunk_tables(rec_dynamic, n0, n1)
            ion_tables = self._chunk_tables(ion_dynamic, n0, n1)
            tau_c = tau[n0:n1]
            w_c = w[n0:n1]
            e_tm_c = e_tm[n0:n1]
            spread_c = self.spread[n0:n1]

            for orb, coef in zip(self.orbital_indices, self.coef_tables):
                ip = self.molecule.orbitals[orb].ionization_potential
                action = (
                    -0.5 * self.d2[:, None] / tau_c[None, :]
                    - self.d_par[:, None] * w_c[None, :]
                    + (base_action[n0:n1] + ip * tau_c)[None, :]
                    + e * a_t * self.ri_par[:, None]
                    - e * a_tm[n0:n1][None, :] * self.rj_par[:, None]
                )
                phase = np.exp(-1j * action)

                rec_overlap, rec_raised = self._assemble(
                    coef, self.pair_i, rec_tables, [0, 1, 2]
                )
                ion_overlap, ion_raised = self._assemble(
                    coef, self.pair_j, ion_tables, drive_components
                )
                ion_par = sum(
                    self.axis[d] * ion_raised[ci]
                    for ci, d in enumerate(drive_components)
                ) + self.rj_par[:, None] * ion_overlap
                ion_scalar = np.conj(ion_par) * e_tm_c[None, :]

                z = phase * ion_scalar
                for comp in range(3):
                    rec_comp = (
                        rec_raised[comp]
                        + self.pos[self.pair_i, comp][:, None] * rec_overlap
                    )
                    total[comp] += np.einsum("pt,pt,t->", rec_comp, z, spread_c)
        return 1j * PLANE_WAVE_NORM**2 * total


def _scalar_potential(field: LaserField, t) -> np.ndarray:
    return vector_potential(field, t) @ field.polarization


def _scalar_field(field: LaserField, t) -> np.ndarray:
    return electric_field(field, t) @ field.polarization


def _scalar_integral_a(field: LaserField, t1, t2) -> np.ndarray:
    return integral_A(field, t1, t2) @ field.polarization


def _scalar_integral_a2(field: LaserField, t1, t2) -> np.ndarray:
    return np.asarray(integral_A2(field, t1, t2))


def _resolve_orbitals(molecule: Molecule, orbital_set) -> list[int]:
    if orbital_set is None:
        raise ValueError("orbital set must not be empty")
    items = list(orbital_set) if not isinstance(orbital_set, (str, int)) else [orbital_set]
    if not items:
        raise ValueError("orbital set must not be empty")
    if all(isinstance(x, str) for x in items):
        return molecule.orbitals_by_label(items)
    indices = [int(x) for x in items]
    for idx in indices:
        if not 0 <= idx < len(molecule.orbitals):
            raise IndexError(f"orbital index {idx} out of range")
    return indices


def dipole_at_time(
    molecule: Molecule,
    orbital_set,
    field: LaserField,
    t: float,
    grid: TauGrid,
    channels: str = "all",
) -> np.ndarray:
    """Complex dipole 3-vector d(t) + c.c. at a single time."""
    indices = _resolve_orbitals(molecule, orbital_set)
    state = _EngineState(molecule, indices, field, grid, channels)
    plus = state.dipole_plus(float(t))
    return plus + np.conj(plus)


_WORKER_STATE: _EngineState | None = None


def _worker_chunk(args) -> np.ndarray:
    start, stop, times = args
    out = np.empty((stop - start, 3), dtype=complex)
    for k in range(start, stop):
        plus = _WORKER_STATE.dipole_plus(float(times[k]))
        out[k - start] = plus + np.conj(plus)
    return out


def dipole_time_series(
    molecule: Molecule,
    orbital_set,
    field: LaserField,
    t_grid: np.ndarray,
    grid: TauGrid,
    channels: str = "all",
    n_workers: int | None = None,
) -> DipoleTimeSeries:
    """Map the dipole over a uniform time grid; deterministic for fixed inputs.

    Worker count comes from `n_workers`, the MOLHHG_WORKERS environment
    variable, or the CPU count; results are identical for any value.
    """
    indices = _resolve_orbitals(molecule, orbital_set)
    times = np.asarray(t_grid, dtype=float)
    if n_workers is None:
        n_workers = int(os.environ.get("MOLHHG_WORKERS", "0")) or (os.cpu_count() or 1)
    n_workers = max(1, min(n_workers, times.size))

    global _WORKER_STATE
    _WORKER_STATE = _EngineState(molecule, indices, field, grid, channels)
    try:
        if n_workers == 1 or multiprocessing.get_start_method(allow_none=True) not in (
            None,
            "fork",
        ):
            dip = _worker_chunk((0, times.size, times))
        else:
            bounds = np.linspace(0, times.size, n_workers + 1).astype(int)
            chunks = [
                (int(a), int(b), times) for a, b in zip(bounds[:-1], bounds[1:]) if b > a
            ]
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(processes=len(chunks)) as pool:
                parts = pool.map(_worker_chunk, chunks)
            dip = np.concatenate(parts, axis=0)
    finally:
        _WORKER_STATE = None

    labels = tuple(molecule.orbitals[i].label for i in indices)
    axis_name = _axis_name(field.polarization)
    return DipoleTimeSeries(times, dip, axis_name, channels, labels, field, grid)


def _axis_name(axis: np.ndarray) -> str:
    for name, vec in (("x", (1, 0, 0)), ("y", (0, 1, 0)), ("z", (0, 0, 1))):
        if np.array_equal(axis, np.asarray(vec, dtype=float)):
            return name
    return f"({axis[0]:.3g},{axis[1]:.3g},{axis[2]:.3g})"
