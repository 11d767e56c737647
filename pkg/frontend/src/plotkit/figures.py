"""Figure layouts rendered from slewsim CSV files.

Rendering is a pure function of (CSV bytes, spec): the backend, canvas size,
fonts, and image metadata are pinned so repeated runs produce byte-identical
files.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RAD2DEG = 180.0 / np.pi

# deterministic canvas: fixed geometry, bundled fonts, no auto-layout jitter
_RC = {
    "figure.figsize": (10.0, 7.5),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.0,
    "svg.hashsalt": "plotkit",
}


class PlotkitError(ValueError):
    """Invalid figure spec or unusable input file."""


class MissingColumnError(PlotkitError):
    """A required CSV column is absent; the message names it."""


class FigureKind(enum.Enum):
    FOUR_PANEL = "FourPanel"
    PROFILE_CURVE = "ProfileCurve"
    SLEW_SWEEP = "SlewSweep"
    CHATTER_COMPARE = "ChatterCompare"


@dataclass
class FigureSpec:
    """One figure to render: input CSVs, layout kind, output path, label map."""

    kind: FigureKind | str
    inputs: list[str]
    out: str
    labels: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.kind, FigureKind):
            try:
                self.kind = FigureKind(self.kind)
            except ValueError as exc:
                names = ", ".join(k.value for k in FigureKind)
                raise PlotkitError(f"unknown figure kind {self.kind!r}; expected one of {names}") from exc
        if not self.inputs:
            raise PlotkitError("figure spec needs at least one input CSV")
        if not self.out:
            raise PlotkitError("figure spec needs an output image path")


@dataclass
class Table:
    """A parsed CSV: metadata from '#' comments plus named numeric columns."""

    meta: dict[str, str]
    columns: dict[str, np.ndarray]
    text_columns: dict[str, list[str]]
    path: str

    def require(self, *names: str) -> list[np.ndarray]:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise MissingColumnError(f"{self.path}: missing column(s) {', '.join(missing)}")
        return [self.columns[n] for n in names]

    def meta_float(self, key: str) -> float | None:
        raw = self.meta.get(key)
        if raw is None:
            return None
        try:
            return float(raw)
        except ValueError:
            return None


def read_csv(path: str) -> Table:
    """Parse header comments, the header row, and the data rows of one CSV.

    Columns that fail float conversion anywhere are kept as text (e.g. the
    sweep's kind/error columns).
    """
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    try:
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].partition("=")
                    meta[key.strip()] = val.strip()
                    continue
                cells = line.split(",")
                if header is None:
                    header = [c.strip() for c in cells]
                    continue
                # the trailing error column may be empty and dropped by split
                cells += [""] * (len(header) - len(cells))
                rows.append(cells[: len(header)])
    except OSError as exc:
        raise PlotkitError(f"cannot read {path}: {exc}") from exc
    if header is None:
        raise PlotkitError(f"{path}: no header row")

    columns: dict[str, np.ndarray] = {}
    text_columns: dict[str, list[str]] = {}
    for j, name in enumerate(header):
        raw = [r[j] for r in rows]
        try:
            columns[name] = np.array([float(x) for x in raw])
        except ValueError:
            text_columns[name] = raw
    return Table(meta, columns, text_columns, path)


def render(spec: FigureSpec) -> None:
    """Render one figure spec to its output image."""
    tables = [read_csv(p) for p in spec.inputs]
    with plt.rc_context(_RC):
        fig = plt.figure()
        try:
            if spec.kind is FigureKind.FOUR_PANEL:
                _four_panel(fig, tables[0], spec.labels)
            elif spec.kind is FigureKind.PROFILE_CURVE:
                _profile_curve(fig, tables, spec.labels)
            elif spec.kind is FigureKind.SLEW_SWEEP:
                _slew_sweep(fig, tables[0], spec.labels)
            else:
                _chatter_compare(fig, tables, spec.labels)
            fig.savefig(spec.out, metadata={"Software": None})
        finally:
            plt.close(fig)


def _limit_line(ax, value: float | None, label: str) -> None:
    if value is not None:
        ax.axhline(value, color="tab:red", linestyle="--", linewidth=1.0, label=label)


def _four_panel(fig, table: Table, labels: dict[str, str]) -> None:
    t, theta_e, w_e, w_b, ux, uy, uz, u_norm = table.require(
        "t", "theta_e", "omega_e_norm", "omega_b_norm", "ux", "uy", "uz", "u_norm"
    )
    axs = fig.subplots(2, 2)
    fig.subplots_adjust(hspace=0.35, wspace=0.3)

    ax = axs[0, 0]
    ax.plot(t, theta_e * RAD2DEG, label=r"$\theta_e$ [deg]")
    ax.plot(t, w_e * RAD2DEG, label=r"$\|\omega_e\|$ [deg/s]")
    ax.set_title(labels.get("error", "attitude and rate error"))
    ax.legend(loc="upper right")

    ax = axs[0, 1]
    ax.plot(t, w_b * RAD2DEG, label=r"$\|\omega_B\|$ [deg/s]")
    _limit_line(ax, table.meta_float("omega_max_deg"), "slew limit")
    ax.set_title(labels.get("rate", "body rate [deg/s]"))
    ax.legend(loc="upper right")

    ax = axs[1, 0]
    for comp, name in ((ux, "$u_x$"), (uy, "$u_y$"), (uz, "$u_z$")):
        ax.plot(t, comp, label=name)
    ax.set_title(labels.get("torque", "torque command [N·m]"))
    ax.set_xlabel("t [s]")
    ax.legend(loc="upper right")

    ax = axs[1, 1]
    ax.plot(t, u_norm, label=r"$\|u\|$")
    _limit_line(ax, table.meta_float("u_max"), "torque limit")
    ax.set_title(labels.get("torque_norm", "torque magnitude [N·m]"))
    ax.set_xlabel("t [s]")
    ax.legend(loc="upper right")


def _profile_curve(fig, tables: list[Table], labels: dict[str, str]) -> None:
    ax = fig.subplots()
    for i, table in enumerate(tables):
        theta, omega = table.require("theta", "omega_r")
        kind = table.meta.get("kind", f"profile {i + 1}")
        ax.plot(theta * RAD2DEG, omega * RAD2DEG, label=kind)
        if i == 0 and "envelope" in table.columns:
            ax.plot(theta * RAD2DEG, table.columns["envelope"] * RAD2DEG,
                    color="black", linestyle=":", label="bang-bang envelope")
    ax.set_xlabel(labels.get("x", r"$\theta_e$ [deg]"))
    ax.set_ylabel(labels.get("y", r"$\omega_R$ [deg/s]"))
    ax.set_title(labels.get("title", "regulating-rate profile"))
    ax.legend(loc="lower right")


def _slew_sweep(fig, table: Table, labels: dict[str, str]) -> None:
    angle, slew = table.require("angle_deg", "slew_time")
    axes = table.text_columns.get("axis")
    kinds = table.text_columns.get("kind")
    if axes is None or kinds is None:
        raise MissingColumnError(f"{table.path}: missing column(s) axis, kind")
    ax = fig.subplots()
    for kind in sorted(set(kinds)):
        for axis in sorted(set(axes)):
            sel = [i for i in range(len(angle)) if axes[i] == axis and kinds[i] == kind]
            if sel:
                order = sorted(sel, key=lambda i: angle[i])
                ax.plot(angle[order], slew[order], marker="o", markersize=3,
                        label=f"{axis} axis, {kind}")
    ax.set_xlabel(labels.get("x", "maneuver angle [deg]"))
    ax.set_ylabel(labels.get("y", "slew time [s]"))
    ax.set_title(labels.get("title", "slew time per axis and profile kind"))
    ax.legend(loc="upper left")


def _chatter_compare(fig, tables: list[Table], labels: dict[str, str]) -> None:
    ax = fig.subplots()
    for i, table in enumerate(tables):
        t, u_norm = table.require("t", "u_norm")
        freq = table.meta_float("control_freq")
        name = f"{freq:g} Hz" if freq is not None else f"run {i + 1}"
        profile = table.meta.get("profile")
        if profile:
            name += f", {profile}"
        ax.plot(t, u_norm, label=name)
    _limit_line(ax, tables[0].meta_float("u_max"), "torque limit")
    ax.set_xlabel(labels.get("x", "t [s]"))
    ax.set_ylabel(labels.get("y", r"$\|u\|$ [N·m]"))
    ax.set_title(labels.get("title", "torque chattering comparison"))
    ax.legend(loc="upper right")
