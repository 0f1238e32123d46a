"""Sweep serialization: CSV tables, line-chart SVGs and flat config files.

Output is fully deterministic: fixed column order, 12 significant digits,
``\n`` line endings and no timestamps, so identical configs reproduce
byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ConfigError
from .measures import DispersionConfig
from .sweeps import (
    AllUpFamily,
    BorderFamily,
    EigenstatesFamily,
    Family,
    FamilyStats,
    RandomFamily,
    SweepConfig,
    SweepRecord,
    UniformFamily,
)

_STAT_COLUMNS = ("cbar_norm", "inv_sigma_a", "inv_sigma_b", "inv_sigma_a_norm", "inv_sigma_b_norm")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def sweep_header(family_labels: list[str]) -> list[str]:
    cols = ["param", "eta"]
    for fam in family_labels:
        cols.extend(f"{fam}_{stat}" for stat in _STAT_COLUMNS)
    return cols


def records_to_table(records: list[SweepRecord]) -> tuple[list[str], np.ndarray]:
    """Flatten sweep records into a header plus a float table."""
    labels = list(records[0].families.keys()) if records else []
    header = sweep_header(labels)
    rows = []
    for rec in records:
        row = [rec.param, rec.eta]
        for label in labels:
            st = rec.families[label]
            row.extend(
                (st.c_bar_norm, st.inv_sigma_a, st.inv_sigma_b, st.inv_sigma_a_norm, st.inv_sigma_b_norm)
            )
        rows.append(row)
    return header, np.array(rows) if rows else np.empty((0, len(header)))


def write_table(path: str | Path, header: list[str], rows: np.ndarray) -> None:
    """Plain CSV with 12-significant-digit values and \\n endings."""
    lines = [",".join(header)]
    if np.asarray(rows).size:
        for row in np.atleast_2d(rows):
            lines.append(",".join(_fmt(float(x)) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def write_csv(
    records: list[SweepRecord], path: str | Path, family_labels: list[str] | None = None
) -> None:
    """Serialize sweep records; an empty list yields a header-only file."""
    if records:
        header, table = records_to_table(records)
    else:
        header = sweep_header(family_labels or [])
        table = np.empty((0, len(header)))
    write_table(path, header, table)


def read_csv(path: str | Path) -> list[SweepRecord]:
    """Inverse of ``write_csv`` for round-tripping and downstream analysis."""
    text = Path(path).read_text(encoding="ascii")
    lines = [ln for ln in text.split("\n") if ln]
    header = lines[0].split(",")
    if header[:2] != ["param", "eta"] or (len(header) - 2) % len(_STAT_COLUMNS) != 0:
        raise ValueError(f"{path}: not a sweep CSV (header {header[:3]}...)")
    labels = [
        header[2 + i * len(_STAT_COLUMNS)].removesuffix("_cbar_norm")
        for i in range((len(header) - 2) // len(_STAT_COLUMNS))
    ]
    records = []
    for line in lines[1:]:
        vals = [float(tok) for tok in line.split(",")]
        fams = {}
        for i, label in enumerate(labels):
            base = 2 + i * len(_STAT_COLUMNS)
            fams[label] = FamilyStats(*vals[base : base + len(_STAT_COLUMNS)])
        records.append(SweepRecord(param=vals[0], eta=vals[1], families=fams))
    return records


# ---------------------------------------------------------------------------
# SVG rendering

_PALETTE = ("#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")
_WIDTH, _HEIGHT = 840, 520
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 170, 30, 50


def render_svg(
    records: list[SweepRecord],
    columns: list[str],
    path: str | Path,
    title: str = "",
) -> None:
    """Simple multi-series line chart of selected sweep columns vs param.

    The x axis switches to log scale when the parameter grid spans more than
    a decade.  Purely deterministic output.
    """
    header, table = records_to_table(records)
    if table.shape[0] == 0:
        raise ValueError("cannot render an empty sweep")
    missing = [c for c in columns if c not in header]
    if missing:
        raise ValueError(f"unknown columns {missing}; available: {header}")
    series = [(c, table[:, header.index(c)]) for c in columns]
    render_line_chart(table[:, 0], series, path, title=title, x_label="param")


def render_line_chart(
    x: np.ndarray,
    series: list[tuple[str, np.ndarray]],
    path: str | Path,
    title: str = "",
    x_label: str = "x",
    log_x: bool | None = None,
) -> None:
    """Deterministic polyline SVG of named series against a common x grid."""
    x = np.asarray(x, dtype=float)
    if log_x is None:
        log_x = bool(np.all(x > 0) and x.max() / x.min() > 10.0)
    xs = np.log10(x) if log_x else x
    all_y = np.concatenate([s[1] for s in series])
    y_lo, y_hi = float(np.min(all_y)), float(np.max(all_y))
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = float(xs.min()), float(xs.max())
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(v: float) -> float:
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return _MARGIN_T + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#888" stroke-width="1"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_WIDTH // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>'
        )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        x_label = f"{10 ** xv:.3g}" if log_x else f"{xv:.3g}"
        parts.append(
            f'<text x="{px(xv):.2f}" y="{_HEIGHT - _MARGIN_B + 18}" text-anchor="middle" '
            f'font-size="11">{x_label}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{py(yv):.2f}" text-anchor="end" '
            f'font-size="11">{yv:.3g}</text>'
        )
        parts.append(
            f'<line x1="{px(xv):.2f}" y1="{_MARGIN_T + plot_h}" x2="{px(xv):.2f}" '
            f'y2="{_MARGIN_T + plot_h + 4}" stroke="#888"/>'
        )
    x_axis_label = f"{x_label} (log scale)" if log_x else x_label
    parts.append(
        f'<text x="{_MARGIN_L + plot_w // 2}" y="{_HEIGHT - 10}" text-anchor="middle" '
        f'font-size="12">{x_axis_label}</text>'
    )
    for i, (name, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(xv):.2f},{py(yv):.2f}" for xv, yv in zip(xs, ys))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = _MARGIN_T + 16 + 16 * i
        lx = _WIDTH - _MARGIN_R + 10
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 27}" y="{ly}" font-size="11">{name}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="ascii", newline="\n")


# ---------------------------------------------------------------------------
# config files

CONFIG_KEYS = {
    "model": "ising | banded",
    "seed": "master seed (integer, default 0)",
    "n_spins": "chain length for the ising model (default 10)",
    "sector": "parity sector, even | odd (default even)",
    "n_eta": "chain length for the eta curve (default: n_spins)",
    "dim": "matrix dimension for the banded model (default 1024)",
    "bandwidth_frac": "bandwidth as a fraction of dim (default 0.2)",
    "realizations": "banded-model realizations to average (default 10)",
    "param_min": "grid start (h_z or k)",
    "param_max": "grid end",
    "param_points": "number of grid points",
    "param_scale": "log | linear grid spacing (default log)",
    "param_values": "explicit comma-separated grid (overrides min/max/points)",
    "families": "comma list: all_up, uniform, uniform@<p>, random, border, eig_ref@<p>",
    "random_count": "members in the random family (default 10)",
    "eigen_count": "members in eigenstate families (default 40 ising / 20 banded)",
    "w_frac": "dispersion window half-width fraction (default 0.025)",
    "n0_frac": "dispersion start-index fraction (default 0.1)",
    "allow_degenerate": "run despite near-degenerate spectra (default false)",
    "threads": "worker threads over grid points (default 1)",
}

_REQUIRED_KEYS = ("model",)


def _parse_bool(value: str, key: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"key {key}: expected a boolean, got {value!r}")


def _parse_families(value: str, random_count: int, eigen_count: int) -> tuple[Family, ...]:
    fams: list[Family] = []
    for token in value.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "all_up":
            fams.append(AllUpFamily())
        elif token == "uniform":
            fams.append(UniformFamily())
        elif token.startswith("uniform@"):
            fams.append(UniformFamily(ref_param=float(token.split("@", 1)[1])))
        elif token == "random":
            fams.append(RandomFamily(count=random_count))
        elif token == "border":
            fams.append(BorderFamily())
        elif token.startswith("eig_ref@"):
            fams.append(EigenstatesFamily(ref_param=float(token.split("@", 1)[1]), count=eigen_count))
        else:
            raise ConfigError(
                f"unknown family {token!r}; valid: all_up, uniform, uniform@<p>, "
                "random, border, eig_ref@<p>"
            )
    return tuple(fams)


def read_config_pairs(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file with # comments; unknown keys rejected."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            valid = ", ".join(sorted(CONFIG_KEYS))
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}; valid keys: {valid}")
        pairs[key] = value
    return pairs


def build_sweep_config(pairs: dict[str, str]) -> SweepConfig:
    """Construct and validate a SweepConfig from parsed key/value pairs."""
    for key in _REQUIRED_KEYS:
        if key not in pairs:
            raise ConfigError(f"config is missing required key: {key}")
    model = pairs["model"]
    if model not in ("ising", "banded"):
        raise ConfigError(f"model must be 'ising' or 'banded', got {model!r}")

    if "param_values" in pairs:
        grid = np.array([float(tok) for tok in pairs["param_values"].split(",") if tok.strip()])
    else:
        grid_keys = [k for k in ("param_min", "param_max", "param_points") if k in pairs]
        if grid_keys and len(grid_keys) < 3:
            missing = sorted(set(("param_min", "param_max", "param_points")) - set(grid_keys))
            raise ConfigError(f"incomplete grid settings; missing: {', '.join(missing)}")
        if grid_keys:
            lo = float(pairs["param_min"])
            hi = float(pairs["param_max"])
            n = int(pairs["param_points"])
            scale = pairs.get("param_scale", "log")
            if scale == "log":
                if lo <= 0:
                    raise ConfigError("log grids need param_min > 0")
                grid = np.geomspace(lo, hi, n)
            elif scale == "linear":
                grid = np.linspace(lo, hi, n)
            else:
                raise ConfigError(f"param_scale must be 'log' or 'linear', got {scale!r}")
        else:
            grid = np.empty(0)

    random_count = int(pairs.get("random_count", 10))
    eigen_count = int(pairs.get("eigen_count", 40 if model == "ising" else 20))
    families: tuple[Family, ...] = ()
    if "families" in pairs:
        families = _parse_families(pairs["families"], random_count, eigen_count)

    dispersion = DispersionConfig(
        w_frac=float(pairs.get("w_frac", 0.025)),
        n0_frac=float(pairs.get("n0_frac", 0.1)),
    )
    n_eta = int(pairs["n_eta"]) if "n_eta" in pairs else None
    try:
        return SweepConfig(
            model=model,
            param_grid=grid,
            families=families,
            seed=int(pairs.get("seed", 0)),
            n_spins=int(pairs.get("n_spins", 10)),
            sector=pairs.get("sector", "even"),
            n_eta=n_eta,
            dim=int(pairs.get("dim", 1024)),
            bandwidth_frac=float(pairs.get("bandwidth_frac", 0.2)),
            realizations=int(pairs.get("realizations", 10)),
            dispersion=dispersion,
            allow_degenerate=_parse_bool(pairs.get("allow_degenerate", "false"), "allow_degenerate"),
            threads=int(pairs.get("threads", 1)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(path: str | Path) -> SweepConfig:
    """Read a flat config file into a validated SweepConfig."""
    return build_sweep_config(read_config_pairs(path))


def config_summary(cfg: SweepConfig) -> str:
    """Deterministic textual record of every resolved configuration value."""
    lines = [
        f"model = {cfg.model}",
        f"seed = {cfg.seed}",
        f"param_grid = {','.join(_fmt(p) for p in cfg.param_grid)}",
        f"families = {','.join(f.label for f in cfg.families)}",
    ]
    if cfg.model == "ising":
        lines += [
            f"n_spins = {cfg.n_spins}",
            f"sector = {cfg.sector}",
            f"n_eta = {cfg.n_eta if cfg.n_eta is not None else cfg.n_spins}",
        ]
    else:
        lines += [
            f"dim = {cfg.dim}",
            f"bandwidth_frac = {_fmt(cfg.bandwidth_frac)}",
            f"realizations = {cfg.realizations}",
        ]
    lines += [
        f"w_frac = {_fmt(cfg.dispersion.w_frac)}",
        f"n0_frac = {_fmt(cfg.dispersion.n0_frac)}",
        f"allow_degenerate = {str(cfg.allow_degenerate).lower()}",
        f"threads = {cfg.threads}",
    ]
    return "\n".join(lines) + "\n"
