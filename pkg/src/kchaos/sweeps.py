"""Seeded transition sweeps with state-family averaging.

A sweep walks a control-parameter grid (magnetic field for the spin chain,
coupling strength for the banded model), measures the spectral chaos value
eta at every point, and for each configured family of initial states records
the normalized complexity saturation and the inverse dispersions of both
Lanczos sequences.  All randomness is derived from one master seed with
counter-based keys, so results are independent of execution order and thread
count.
"""

from __future__ import annotations

import logging
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError
from .hamiltonians import (
    Hamiltonian,
    SpectralData,
    build_banded_random,
    build_ising_full,
    eigendecompose,
    parity_basis,
    project_to_sector,
)
from .krylov import lanczos_full_orth, saturation
from .measures import DispersionConfig, EtaCurve, eta, r_ratio_mean, sigma_moving
from .states import (
    StateVector,
    select_center_states,
    state_all_up,
    state_eigenstate,
    state_random,
    state_uniform_eigenbasis,
)

log = logging.getLogger(__name__)


def derive_seed(master_seed: int, *key: int | str) -> int:
    """Deterministic child seed from a master seed and a mixed key."""
    parts = [int(master_seed)] + [
        zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in key
    ]
    return int(np.random.SeedSequence(parts).generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# state families


def _fmt_param(p: float) -> str:
    return f"{p:g}".replace(".", "p").replace("-", "m")


@dataclass(frozen=True)
class AllUpFamily:
    """Single member: the all-spins-up state (spin chain, even sector)."""

    @property
    def label(self) -> str:
        return "all_up"


@dataclass(frozen=True)
class UniformFamily:
    """Uniformly spread over an energy eigenbasis.

    With ``ref_param`` None (the default) the state is rebuilt from the
    current grid point's own eigenbasis, which makes its saturation exactly
    (D-1)/2; a float selects a fixed reference Hamiltonian instead.
    """

    ref_param: float | None = None

    @property
    def label(self) -> str:
        if self.ref_param is None:
            return "uniform"
        return f"uniform_ref{_fmt_param(self.ref_param)}"


@dataclass(frozen=True)
class RandomFamily:
    """Average over ``count`` random initial states."""

    count: int = 10

    @property
    def label(self) -> str:
        return "random"


@dataclass(frozen=True)
class EigenstatesFamily:
    """Average over eigenstates of a reference Hamiltonian near the spectrum center."""

    ref_param: float
    count: int = 40

    @property
    def label(self) -> str:
        return f"eig{_fmt_param(self.ref_param)}"


@dataclass(frozen=True)
class BorderFamily:
    """Lowest eigenstate of the uncoupled (k=0) reference (banded model)."""

    @property
    def label(self) -> str:
        return "border"


Family = AllUpFamily | UniformFamily | RandomFamily | EigenstatesFamily | BorderFamily


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep needs; validated on construction."""

    model: str
    param_grid: np.ndarray = field(default_factory=lambda: np.empty(0))
    families: tuple[Family, ...] = ()
    seed: int = 0
    n_spins: int = 10
    sector: str = "even"
    n_eta: int | None = None
    dim: int = 1024
    bandwidth_frac: float = 0.2
    realizations: int = 10
    dispersion: DispersionConfig = DispersionConfig()
    allow_degenerate: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.model not in ("ising", "banded"):
            raise ConfigError(f"model must be 'ising' or 'banded', got {self.model!r}")
        grid = np.asarray(self.param_grid, dtype=float)
        if grid.size == 0:
            grid = default_hz_grid() if self.model == "ising" else default_k_grid()
        if not np.all(np.isfinite(grid)):
            raise ConfigError("param_grid must be finite")
        if self.model == "ising" and np.any(grid == 0.0):
            raise ConfigError("h_z = 0 is a symmetry point and must not be on the grid")
        grid.setflags(write=False)
        object.__setattr__(self, "param_grid", grid)
        families = tuple(self.families) if self.families else _default_families(self.model)
        object.__setattr__(self, "families", families)
        labels = [f.label for f in families]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate family labels: {labels}")
        for fam in families:
            if isinstance(fam, AllUpFamily) and self.model != "ising":
                raise ConfigError("the all_up family applies to the ising model only")
            if isinstance(fam, BorderFamily) and self.model != "banded":
                raise ConfigError("the border family applies to the banded model only")
        if isinstance(self.dispersion, dict):
            object.__setattr__(self, "dispersion", DispersionConfig(**self.dispersion))
        if self.realizations < 1:
            raise ConfigError("realizations must be >= 1")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")


def _default_families(model: str) -> tuple[Family, ...]:
    if model == "ising":
        return (
            AllUpFamily(),
            EigenstatesFamily(ref_param=4.0),
            EigenstatesFamily(ref_param=0.0),
            RandomFamily(),
            UniformFamily(),
        )
    return (
        BorderFamily(),
        EigenstatesFamily(ref_param=0.0, count=20),
        RandomFamily(),
        UniformFamily(),
    )


def default_hz_grid() -> np.ndarray:
    """30 log-spaced field values covering both integrable ends."""
    return np.geomspace(0.05, 4.0, 30)


def default_k_grid() -> np.ndarray:
    """20 log-spaced couplings bracketing the Poisson-to-GOE transition."""
    return np.geomspace(5e-4, 2.0, 20)


@dataclass(frozen=True)
class FamilyStats:
    """Family-averaged diagnostics at one grid point."""

    c_bar_norm: float
    inv_sigma_a: float
    inv_sigma_b: float
    inv_sigma_a_norm: float = float("nan")
    inv_sigma_b_norm: float = float("nan")


@dataclass(frozen=True)
class SweepRecord:
    """One grid point: control parameter, eta and per-family statistics."""

    param: float
    eta: float
    families: dict[str, FamilyStats]


# ---------------------------------------------------------------------------
# shared machinery


def _member_stats(
    ham: Hamiltonian,
    spec: SpectralData,
    psi: StateVector,
    cfg: SweepConfig,
) -> tuple[float, float, float]:
    lan = lanczos_full_orth(ham, psi, spec=spec, allow_degenerate=cfg.allow_degenerate)
    rep = saturation(spec, lan, psi, allow_degenerate=cfg.allow_degenerate)
    try:
        inv_a = 1.0 / sigma_moving(lan.a, cfg.dispersion)
        inv_b = 1.0 / sigma_moving(lan.b, cfg.dispersion)
    except ValueError:
        # a halted run (eigenstate-like seed) has no usable Lanczos sequence;
        # it still contributes its saturation but not a dispersion value
        inv_a = inv_b = float("nan")
    return rep.c_bar_normalized, inv_a, inv_b


def _average_members(
    ham: Hamiltonian,
    spec: SpectralData,
    members: list[StateVector],
    cfg: SweepConfig,
) -> FamilyStats:
    rows = [_member_stats(ham, spec, psi, cfg) for psi in members]
    return _stats_from_rows(rows)


def _run_grid(cfg: SweepConfig, point_fn) -> list[SweepRecord]:
    """Evaluate one function per grid point, optionally threaded, order kept."""
    indices = range(cfg.param_grid.shape[0])
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(point_fn, indices))
    else:
        results = [point_fn(i) for i in indices]
    return [r for r in results if r is not None]


# ---------------------------------------------------------------------------
# ising sweep


def _ising_sector_hamiltonian(n_spins: int, h_z: float, sector: str) -> Hamiltonian:
    return project_to_sector(build_ising_full(n_spins, h_z), parity_basis(n_spins, sector))


def run_ising_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """Spin-chain transition sweep over the magnetic-field grid.

    Grid points whose sector spectrum is flagged near-degenerate are skipped
    with a logged warning.  ``cfg.n_eta`` selects the chain length used for
    the eta curve; by default the sweep spectrum itself is reused.
    """
    if cfg.model != "ising":
        raise ConfigError("run_ising_sweep requires an ising config")
    basis = parity_basis(cfg.n_spins, cfg.sector)

    fixed_members: dict[str, list[StateVector]] = {}
    for fam in cfg.families:
        if isinstance(fam, AllUpFamily):
            fixed_members[fam.label] = [state_all_up(basis)]
        elif isinstance(fam, RandomFamily):
            fixed_members[fam.label] = [
                state_random(basis.dim, derive_seed(cfg.seed, "random-state", i))
                for i in range(fam.count)
            ]
        elif isinstance(fam, EigenstatesFamily):
            ref_spec = eigendecompose(
                _ising_sector_hamiltonian(cfg.n_spins, fam.ref_param, cfg.sector)
            )
            picks = select_center_states(ref_spec, fam.count)
            fixed_members[fam.label] = [state_eigenstate(ref_spec, j) for j in picks]
        elif isinstance(fam, UniformFamily) and fam.ref_param is not None:
            ref_spec = eigendecompose(
                _ising_sector_hamiltonian(cfg.n_spins, fam.ref_param, cfg.sector)
            )
            fixed_members[fam.label] = [state_uniform_eigenbasis(ref_spec)]

    def eta_at(h_z: float, spec: SpectralData) -> float:
        if cfg.n_eta is None or cfg.n_eta == cfg.n_spins:
            return eta(r_ratio_mean(spec.eigenvalues))
        ham_eta = _ising_sector_hamiltonian(cfg.n_eta, h_z, cfg.sector)
        return eta(r_ratio_mean(np.linalg.eigvalsh(ham_eta.matrix)))

    def point(i: int) -> SweepRecord | None:
        h_z = float(cfg.param_grid[i])
        ham = _ising_sector_hamiltonian(cfg.n_spins, h_z, cfg.sector)
        spec = eigendecompose(ham)
        if spec.near_degenerate and not cfg.allow_degenerate:
            log.warning(
                "skipping h_z=%g: near-degenerate spectrum (min spacing %.3e)",
                h_z,
                spec.min_spacing,
            )
            return None
        stats: dict[str, FamilyStats] = {}
        for fam in cfg.families:
            if isinstance(fam, UniformFamily) and fam.ref_param is None:
                members = [state_uniform_eigenbasis(spec)]
            else:
                members = fixed_members[fam.label]
            stats[fam.label] = _average_members(ham, spec, members, cfg)
        return SweepRecord(param=h_z, eta=eta_at(h_z, spec), families=stats)

    return _run_grid(cfg, point)


# ---------------------------------------------------------------------------
# banded sweep


def run_banded_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """Banded random-matrix sweep over the coupling grid.

    Each realization draws one (H0, V) pair that is traced through the whole
    grid.  Families attached to the reference basis (border, uniform) are
    averaged over realizations; random and reference-eigenstate families use
    realization 0 only, averaging over their member states.
    """
    if cfg.model != "banded":
        raise ConfigError("run_banded_sweep requires a banded config")
    dim = cfg.dim
    bandwidth = max(1, min(dim - 1, int(round(cfg.bandwidth_frac * dim))))
    matrix_seeds = [derive_seed(cfg.seed, "matrix", r) for r in range(cfg.realizations)]
    ref_specs = [
        eigendecompose(build_banded_random(dim, bandwidth, 0.0, s)) for s in matrix_seeds
    ]

    member_states: dict[str, list[StateVector]] = {}
    for fam in cfg.families:
        if isinstance(fam, RandomFamily):
            member_states[fam.label] = [
                state_random(dim, derive_seed(cfg.seed, "random-state", i))
                for i in range(fam.count)
            ]
        elif isinstance(fam, EigenstatesFamily):
            if fam.ref_param != 0.0:
                raise ConfigError("banded eigenstate families reference the k=0 spectrum")
            picks = select_center_states(ref_specs[0], fam.count)
            member_states[fam.label] = [state_eigenstate(ref_specs[0], j) for j in picks]

    def point(i: int) -> SweepRecord | None:
        k = float(cfg.param_grid[i])
        hams = [build_banded_random(dim, bandwidth, k, s) for s in matrix_seeds]
        specs = [eigendecompose(h) for h in hams]
        degenerate = [s.near_degenerate for s in specs]
        if any(degenerate) and not cfg.allow_degenerate:
            log.warning("skipping k=%g: near-degenerate realization", k)
            return None
        eta_val = float(np.mean([eta(r_ratio_mean(s.eigenvalues)) for s in specs]))
        stats: dict[str, FamilyStats] = {}
        for fam in cfg.families:
            if isinstance(fam, BorderFamily):
                per_real = [
                    _member_stats(hams[r], specs[r], state_eigenstate(ref_specs[r], 0), cfg)
                    for r in range(cfg.realizations)
                ]
                stats[fam.label] = _stats_from_rows(per_real)
            elif isinstance(fam, UniformFamily):
                if fam.ref_param is not None:
                    raise ConfigError("banded uniform family uses the current eigenbasis")
                per_real = [
                    _member_stats(hams[r], specs[r], state_uniform_eigenbasis(specs[r]), cfg)
                    for r in range(cfg.realizations)
                ]
                stats[fam.label] = _stats_from_rows(per_real)
            else:
                stats[fam.label] = _average_members(
                    hams[0], specs[0], member_states[fam.label], cfg
                )
        return SweepRecord(param=k, eta=eta_val, families=stats)

    return _run_grid(cfg, point)


def _stats_from_rows(rows: list[tuple[float, float, float]]) -> FamilyStats:
    arr = np.array(rows)
    inv_a = arr[:, 1][np.isfinite(arr[:, 1])]
    inv_b = arr[:, 2][np.isfinite(arr[:, 2])]
    return FamilyStats(
        c_bar_norm=float(arr[:, 0].mean()),
        inv_sigma_a=float(inv_a.mean()) if inv_a.size else float("nan"),
        inv_sigma_b=float(inv_b.mean()) if inv_b.size else float("nan"),
    )


# ---------------------------------------------------------------------------
# postprocessing


def extract_eta_curve(records: list[SweepRecord]) -> EtaCurve:
    return EtaCurve(
        params=np.array([r.param for r in records]),
        eta=np.array([r.eta for r in records]),
    )


def _normalize_partial(col: np.ndarray, eta_col: np.ndarray) -> np.ndarray:
    """normalize_to_eta extended to columns with nan gaps (halted members)."""
    from .measures import normalize_to_eta

    finite = np.isfinite(col)
    if finite.all():
        return normalize_to_eta(col, eta_col)
    out = np.full(col.shape, np.nan)
    if finite.sum() >= 2 and col[finite].max() > col[finite].min():
        out[finite] = normalize_to_eta(col[finite], eta_col[finite])
    return out


def postprocess_normalize(
    records: list[SweepRecord], eta_column: np.ndarray | None = None
) -> list[SweepRecord]:
    """Fill the normalized inverse-dispersion columns of a sweep.

    Each family's 1/sigma curves are mapped onto the eta scale of the same
    sweep; the saturation column keeps its natural normalization and is left
    untouched.  Returns new records.
    """
    if len(records) < 2:
        raise ValueError("need at least 2 records to normalize a sweep")
    eta_col = (
        np.asarray(eta_column, dtype=float)
        if eta_column is not None
        else np.array([r.eta for r in records])
    )
    labels = list(records[0].families.keys())
    normalized: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for label in labels:
        a_col = np.array([r.families[label].inv_sigma_a for r in records])
        b_col = np.array([r.families[label].inv_sigma_b for r in records])
        normalized[label] = (
            _normalize_partial(a_col, eta_col),
            _normalize_partial(b_col, eta_col),
        )
    out = []
    for i, rec in enumerate(records):
        fams = {
            label: replace(
                rec.families[label],
                inv_sigma_a_norm=float(normalized[label][0][i]),
                inv_sigma_b_norm=float(normalized[label][1][i]),
            )
            for label in labels
        }
        out.append(SweepRecord(param=rec.param, eta=rec.eta, families=fams))
    return out
