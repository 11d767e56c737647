"""Configuration parsing, telemetry persistence, the independent ODE profile
oracle, and the command-line entry points."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from .attmath import Vec3
from .controller import ControlParams
from .plant import DEG, SatelliteParams
from .rateprofile import ProfileKind, RateProfile, build_profile, eval_omega_r

EXIT_OK = 0
EXIT_RUN_ERROR = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    """Malformed or invalid configuration file."""


# ---------------------------------------------------------------------------
# Telemetry records and CSV persistence
# ---------------------------------------------------------------------------

TELEMETRY_COLUMNS = [
    "t",
    "qx", "qy", "qz", "qw",
    "wx", "wy", "wz",
    "theta_e", "omega_e_norm", "omega_b_norm",
    "ux", "uy", "uz", "u_norm",
    "sx", "sy", "sz",
    "omega_r", "alpha_r", "omega_r_max",
    "segment", "flags",
    "yaw_b", "pitch_b", "roll_b",
    "yaw_d", "pitch_d", "roll_d",
]


@dataclass
class TelemetryRecord:
    """One control cycle of simulation output (SI units, radians)."""

    t: float
    q_b: np.ndarray                  # [qx, qy, qz, qw]
    omega_b: Vec3
    theta_e: float
    omega_e_norm: float
    omega_b_norm: float
    u_cmd: Vec3
    u_norm: float
    s: Vec3
    omega_r: float
    alpha_r: float
    omega_r_max: float
    segment: int
    flags: int
    euler_b: Vec3 = field(default_factory=lambda: np.zeros(3))  # yaw, pitch, roll (3-2-1)
    euler_d: Vec3 = field(default_factory=lambda: np.zeros(3))

    def row(self) -> list:
        return [
            self.t,
            *self.q_b,
            *self.omega_b,
            self.theta_e,
            self.omega_e_norm,
            self.omega_b_norm,
            *self.u_cmd,
            self.u_norm,
            *self.s,
            self.omega_r,
            self.alpha_r,
            self.omega_r_max,
            self.segment,
            self.flags,
            *self.euler_b,
            *self.euler_d,
        ]

    @staticmethod
    def from_row(vals: list[float]) -> "TelemetryRecord":
        v = list(map(float, vals))
        return TelemetryRecord(
            t=v[0],
            q_b=np.array(v[1:5]),
            omega_b=np.array(v[5:8]),
            theta_e=v[8],
            omega_e_norm=v[9],
            omega_b_norm=v[10],
            u_cmd=np.array(v[11:14]),
            u_norm=v[14],
            s=np.array(v[15:18]),
            omega_r=v[18],
            alpha_r=v[19],
            omega_r_max=v[20],
            segment=int(v[21]),
            flags=int(v[22]),
            euler_b=np.array(v[23:26]),
            euler_d=np.array(v[26:29]),
        )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_telemetry(records: list[TelemetryRecord], path: str, meta: dict | None = None) -> None:
    """Write telemetry as CSV: '#' metadata comment lines, fixed header,
    17-significant-digit values (lossless double round-trip)."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for key, val in (meta or {}).items():
                f.write(f"# {key} = {val}\n")
            f.write(",".join(TELEMETRY_COLUMNS) + "\n")
            for rec in records:
                f.write(",".join(_fmt(x) for x in rec.row()) + "\n")
    except OSError as exc:
        raise OSError(f"writing telemetry to {path}: {exc}") from exc


def read_telemetry(path: str) -> tuple[list[TelemetryRecord], dict]:
    """Parse a telemetry CSV back into records plus the metadata comments."""
    meta: dict = {}
    records: list[TelemetryRecord] = []
    try:
        with open(path, encoding="utf-8") as f:
            header_seen = False
            for line in f:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].partition("=")
                    meta[key.strip()] = val.strip()
                    continue
                if not header_seen:
                    if line.split(",") != TELEMETRY_COLUMNS:
                        raise ConfigError(f"{path}: unexpected telemetry header")
                    header_seen = True
                    continue
                records.append(TelemetryRecord.from_row(line.split(",")))
    except OSError as exc:
        raise OSError(f"reading telemetry from {path}: {exc}") from exc
    return records, meta


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

# section -> key -> default (raw config representation: degrees where suffixed)
CONFIG_DEFAULTS: dict[str, dict[str, object]] = {
    "satellite": {
        "jxx": 21400.0, "jxy": 2100.0, "jxz": 1800.0,
        "jyy": 20100.0, "jyz": 500.0, "jzz": 5000.0,
        "omega_max_deg": 3.0,
        "u_max": 150.0,
        "d_max": 2.0,
    },
    "control": {
        "gamma": 0.99,
        "eta_deg": 0.05,
        "beta1": 2.0,
        "beta2": 0.5,
        "tau1": 1.0,
        "tau3": 1.0,
        "fd_step": 1e-7,
        "s_guard": 1e-9,
    },
    "scenario": {
        "kind": "rest_to_rest",
        "axis": "1,0,0",
        "angle_deg": 90.0,
        "profile": "modified",
        "control_freq": 100.0,
        "duration": 120.0,
        "disturbance": True,
        "theta_tol_deg": 0.01,
        "omega_tol_deg": 0.01,
        "altitude_km": 500.0,
        "offset_angle_deg": 10.0,
        "desired_csv": "",
    },
    "run": {
        "dt": 0.01,
        "out": "telemetry.csv",
        "seed": 0,
    },
}

# key-level constraint checks applied at parse time, keyed by (section, key)
_CHECKS: dict[tuple[str, str], tuple] = {
    ("satellite", "omega_max_deg"): (lambda v: v > 0, "must be positive"),
    ("satellite", "u_max"): (lambda v: v > 0, "must be positive"),
    ("satellite", "d_max"): (lambda v: v >= 0, "must be non-negative"),
    ("control", "gamma"): (lambda v: 0 < v <= 1, "must be in (0, 1]"),
    ("control", "eta_deg"): (lambda v: v > 0, "must be positive"),
    ("control", "beta1"): (lambda v: v > 0, "must be positive"),
    ("control", "beta2"): (lambda v: 0 < v < 1, "must be in (0, 1)"),
    ("control", "tau1"): (lambda v: v > 0, "must be positive"),
    ("control", "tau3"): (lambda v: v > 0, "must be positive"),
    ("control", "fd_step"): (lambda v: v > 0, "must be positive"),
    ("control", "s_guard"): (lambda v: v > 0, "must be positive"),
    ("scenario", "kind"): (lambda v: v in ("rest_to_rest", "track"), "must be rest_to_rest or track"),
    ("scenario", "angle_deg"): (lambda v: 0 <= v <= 180, "must be in [0, 180]"),
    ("scenario", "profile"): (lambda v: v in ("trapezoid", "modified"), "must be trapezoid or modified"),
    ("scenario", "control_freq"): (lambda v: v > 0, "must be positive"),
    ("scenario", "duration"): (lambda v: v > 0, "must be positive"),
    ("scenario", "theta_tol_deg"): (lambda v: v > 0, "must be positive"),
    ("scenario", "omega_tol_deg"): (lambda v: v > 0, "must be positive"),
    ("scenario", "altitude_km"): (lambda v: v > 0, "must be positive"),
    ("run", "dt"): (lambda v: v > 0, "must be positive"),
}


@dataclass
class RunConfig:
    """Everything one simulation run needs, in raw config units."""

    values: dict[str, dict[str, object]]

    def get(self, section: str, key: str):
        return self.values[section][key]

    def satellite(self) -> SatelliteParams:
        s = self.values["satellite"]
        inertia = np.array(
            [
                [s["jxx"], s["jxy"], s["jxz"]],
                [s["jxy"], s["jyy"], s["jyz"]],
                [s["jxz"], s["jyz"], s["jzz"]],
            ],
            dtype=float,
        )
        return SatelliteParams(
            inertia=inertia,
            omega_max=float(s["omega_max_deg"]) * DEG,
            u_max=float(s["u_max"]),
            d_max=float(s["d_max"]),
        )

    def control(self) -> ControlParams:
        c = self.values["control"]
        return ControlParams(
            d_max=float(self.values["satellite"]["d_max"]),
            gamma=float(c["gamma"]),
            eta=float(c["eta_deg"]) * DEG,
            beta1=float(c["beta1"]),
            beta2=float(c["beta2"]),
            tau1=float(c["tau1"]),
            tau3=float(c["tau3"]),
            fd_step=float(c["fd_step"]),
            s_guard=float(c["s_guard"]),
            profile_kind=ProfileKind(self.values["scenario"]["profile"]),
        )

    def build_scenario(self):
        from . import scenario as sc

        v = self.values["scenario"]
        freq = float(v["control_freq"])
        if v["kind"] == "rest_to_rest":
            axis = np.array([float(x) for x in str(v["axis"]).split(",")])
            out = sc.rest_to_rest(
                axis,
                float(v["angle_deg"]) * DEG,
                profile_kind=ProfileKind(v["profile"]),
                control_freq=freq,
                duration=float(v["duration"]),
                disturbance_on=bool(v["disturbance"]),
            )
        elif str(v["desired_csv"]):
            samples = read_desired_csv(str(v["desired_csv"]))
            out = sc.Scenario(
                kind=sc.ScenarioKind.TRACK,
                initial=_track_initial(samples, float(v["offset_angle_deg"]) * DEG),
                profile_kind=ProfileKind(v["profile"]),
                control_freq=freq,
                duration=float(v["duration"]),
                disturbance_on=bool(v["disturbance"]),
                samples=samples,
            )
        else:
            out = sc.tracking_scenario(
                duration=float(v["duration"]),
                control_freq=freq,
                profile_kind=ProfileKind(v["profile"]),
                altitude_km=float(v["altitude_km"]),
                initial_offset_angle=float(v["offset_angle_deg"]) * DEG,
                disturbance_on=bool(v["disturbance"]),
            )
        out.theta_tol = float(v["theta_tol_deg"]) * DEG
        out.omega_tol = float(v["omega_tol_deg"]) * DEG
        return out

    def validate(self) -> None:
        dt = float(self.values["run"]["dt"])
        period = 1.0 / float(self.values["scenario"]["control_freq"])
        n = round(period / dt)
        if n < 1 or abs(n * dt - period) > 1e-9:
            raise ConfigError(f"dt = {dt} does not divide the control period {period}")


def _track_initial(samples, offset_angle: float):
    from .attmath import Quaternion, qmul, vec3
    from .plant import BodyState

    q0 = qmul(Quaternion.from_axis_angle(vec3(1, 0, 0), offset_angle), samples[0].q_d)
    return BodyState(q0, np.zeros(3), 0.0)


def _convert(section: str, key: str, raw: str, lineno: int):
    default = CONFIG_DEFAULTS[section][key]
    try:
        if isinstance(default, bool):
            low = raw.lower()
            if low in ("true", "on", "yes", "1"):
                return True
            if low in ("false", "off", "no", "0"):
                return False
            raise ValueError("not a boolean")
        if isinstance(default, int) and not isinstance(default, bool):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: invalid value for {section}.{key}: {raw!r} ({exc})") from exc


def parse_config_text(text: str, origin: str = "<config>") -> RunConfig:
    """Parse INI-like config text; unknown sections/keys and constraint
    violations produce line-numbered errors. Missing keys take the defaults."""
    values = {sec: dict(defaults) for sec, defaults in CONFIG_DEFAULTS.items()}
    section: str | None = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in CONFIG_DEFAULTS:
                raise ConfigError(f"{origin} line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"{origin} line {lineno}: expected 'key = value', got {raw_line!r}")
        if section is None:
            raise ConfigError(f"{origin} line {lineno}: key outside any [section]")
        key, _, raw = line.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        if key not in CONFIG_DEFAULTS[section]:
            raise ConfigError(f"{origin} line {lineno}: unknown key {key!r} in section [{section}]")
        val = _convert(section, key, raw, lineno)
        check = _CHECKS.get((section, key))
        if check is not None and not check[0](val):
            raise ConfigError(f"{origin} line {lineno}: {section}.{key} = {raw} {check[1]}")
        values[section][key] = val
    cfg = RunConfig(values)
    cfg.validate()
    return cfg


def parse_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, origin=path)


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for section, keys in CONFIG_DEFAULTS.items():
        lines.append(f"[{section}]")
        for key in keys:
            val = cfg.values[section][key]
            if isinstance(val, bool):
                out = "true" if val else "false"
            elif isinstance(val, float):
                out = _fmt(val)
            else:
                out = str(val)
            lines.append(f"{key} = {out}")
        lines.append("")
    return "\n".join(lines)


def default_config() -> RunConfig:
    return parse_config_text("")


def read_desired_csv(path: str):
    """Desired-frame stream import: columns t,qx,qy,qz,qw,wx,wy,wz,ax,ay,az
    (desired-frame components, SI units, monotone t), header row required."""
    from .attmath import Quaternion
    from .scenario import DesiredSample

    expected = ["t", "qx", "qy", "qz", "qw", "wx", "wy", "wz", "ax", "ay", "az"]
    samples = []
    with open(path, encoding="utf-8") as f:
        lines = [ln.strip() for ln in f if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0].split(",") != expected:
        raise ConfigError(f"{path}: desired-stream header must be {','.join(expected)}")
    t_prev = -np.inf
    for lineno, line in enumerate(lines[1:], start=2):
        v = [float(x) for x in line.split(",")]
        if len(v) != 11:
            raise ConfigError(f"{path} line {lineno}: expected 11 columns")
        if v[0] <= t_prev:
            raise ConfigError(f"{path} line {lineno}: time column must be strictly increasing")
        t_prev = v[0]
        samples.append(
            DesiredSample(
                q_d=Quaternion(np.array(v[1:4]), v[4]).normalized(),
                omega_d_in_d=np.array(v[5:8]),
                omega_d_dot_in_d=np.array(v[8:11]),
                t=v[0],
            )
        )
    return samples


def write_desired_csv(samples, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("t,qx,qy,qz,qw,wx,wy,wz,ax,ay,az\n")
        for s in samples:
            row = [s.t, *s.q_d.v, s.q_d.w, *s.omega_d_in_d, *s.omega_d_dot_in_d]
            f.write(",".join(_fmt(x) for x in row) + "\n")


# ---------------------------------------------------------------------------
# Independent ODE profile oracle
# ---------------------------------------------------------------------------

def _rk4_theta_omega(theta: float, omega: float, a_fn, t0: float, h: float) -> tuple[float, float]:
    """One RK4 step of theta' = omega, omega' = a(t). Exact when a is (piecewise)
    linear in t, since the solution is polynomial of degree <= 3."""
    k1t, k1w = omega, a_fn(t0)
    k2t, k2w = omega + 0.5 * h * k1w, a_fn(t0 + 0.5 * h)
    k3t, k3w = omega + 0.5 * h * k2w, a_fn(t0 + 0.5 * h)
    k4t, k4w = omega + h * k3w, a_fn(t0 + h)
    theta += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
    omega += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
    return theta, omega


def ode_rate_lookup(profile: RateProfile, thetas: np.ndarray) -> np.ndarray:
    """omega_R(theta) by time integration of the acceleration segments and
    bisection in t — no use of the closed-form inversion."""
    from .rateprofile import ProfileKind as PK

    a = profile.alpha_eff
    t1, t3 = profile.tau1_eff, profile.tau3_eff
    tau2 = max(profile.tau2, 0.0)
    modified = profile.kind is PK.MODIFIED

    # Segment table: (duration, local accel a(t_local), start theta, start omega)
    segs = []
    theta0, omega0 = 0.0, 0.0
    # ramp-up segment integrated even for the modified kind: it defines theta1.
    theta1, omega1_ramp = _rk4_theta_omega(0.0, 0.0, lambda t: a * t / t1, 0.0, t1)
    omega1 = float(np.sqrt(a * theta1)) if modified else omega1_ramp
    segs.append(("ramp_up", t1, lambda t: a * t / t1, 0.0, 0.0))
    theta0, omega0 = theta1, omega1
    if tau2 > 0.0:
        segs.append(("plateau", tau2, lambda t: a, theta0, omega0))
        theta0, omega0 = _rk4_theta_omega(theta0, omega0, lambda t: a, 0.0, tau2)
    segs.append(("ramp_down", t3, lambda t: a * (1.0 - t / t3), theta0, omega0))
    theta_end, omega_end = _rk4_theta_omega(theta0, omega0, lambda t: a * (1.0 - t / t3), 0.0, t3)

    out = np.empty(len(thetas))
    for i, theta_q in enumerate(np.asarray(thetas, dtype=float)):
        if theta_q >= theta_end:
            out[i] = omega_end
            continue
        if modified and theta_q < theta1:
            out[i] = omega1 * theta_q / theta1
            continue
        for name, dur, a_fn, th_s, om_s in segs:
            th_e, om_e = _rk4_theta_omega(th_s, om_s, a_fn, 0.0, dur)
            if theta_q < th_e or (name, dur) == (segs[-1][0], segs[-1][1]):
                lo, hi = 0.0, dur
                for _ in range(100):
                    mid = 0.5 * (lo + hi)
                    th_m, _ = _rk4_theta_omega(th_s, om_s, a_fn, 0.0, mid)
                    if th_m < theta_q:
                        lo = mid
                    else:
                        hi = mid
                _, out[i] = _rk4_theta_omega(th_s, om_s, a_fn, 0.0, 0.5 * (lo + hi))
                break
    return out


def oracle_max_deviation(trials: int, seed: int) -> float:
    """Max |closed-form - ODE| rate deviation over random profile tuples,
    exercising the trapezoid, collapsed, and modified shapes."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(trials):
        a_r = float(10.0 ** rng.uniform(-4, -1))
        tau1 = float(rng.uniform(0.3, 8.0))
        tau3 = float(rng.uniform(0.3, 8.0))
        kind = ProfileKind.MODIFIED if trial % 2 else ProfileKind.TRAPEZOID
        collapse_threshold = 0.5 * a_r * (tau1 + tau3)
        factor = float(rng.uniform(0.3, 0.9)) if trial % 3 == 0 else float(rng.uniform(1.2, 4.0))
        w_r_max = factor * collapse_threshold
        profile = build_profile(a_r, tau1, tau3, w_r_max, kind)
        theta_hi = 1.2 * (profile.plateau_angle if np.isfinite(profile.plateau_angle) else profile.theta2)
        thetas = np.linspace(0.0, theta_hi, 60)
        closed = np.array([eval_omega_r(profile, th) for th in thetas])
        ode = ode_rate_lookup(profile, thetas)
        worst = max(worst, float(np.max(np.abs(closed - ode))))
    return worst


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="path to INI-like config file")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--freq", type=float, help="control frequency override [Hz]")
    p.add_argument("--seed", type=int, help="RNG seed for randomized sweeps")


def _load_config(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else default_config()
    if args.freq:
        cfg.values["scenario"]["control_freq"] = float(args.freq)
        cfg.validate()
    if args.out:
        cfg.values["run"]["out"] = args.out
    if args.seed is not None:
        cfg.values["run"]["seed"] = int(args.seed)
    return cfg


def _cmd_run(args) -> int:
    from . import scenario as sc

    cfg = _load_config(args)
    satellite = cfg.satellite()
    scn = cfg.build_scenario()
    records = sc.simulate(scn, satellite, cfg.control(), dt=float(cfg.get("run", "dt")))
    t_star = sc.detect_convergence(records, scn.theta_tol, scn.omega_tol)
    meta = {
        "omega_max_deg": cfg.get("satellite", "omega_max_deg"),
        "u_max": cfg.get("satellite", "u_max"),
        "control_freq": cfg.get("scenario", "control_freq"),
        "profile": cfg.get("scenario", "profile"),
    }
    out = str(cfg.get("run", "out"))
    write_telemetry(records, out, meta)
    max_w = max(r.omega_b_norm for r in records) / DEG
    max_u = max(r.u_norm for r in records)
    conv = f"{t_star:.3f} s" if np.isfinite(t_star) else "not reached"
    print(f"wrote {len(records)} records to {out}")
    print(f"convergence: {conv}; max |omega_B| = {max_w:.4f} deg/s; max |u| = {max_u:.3f} N*m")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    from . import scenario as sc

    cfg = _load_config(args)
    rows = sc.slew_sweep(
        cfg.satellite(),
        cfg.control(),
        control_freq=float(cfg.get("scenario", "control_freq")),
    )
    out = str(cfg.get("run", "out"))
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write("# omega_max_deg = {}\n".format(cfg.get("satellite", "omega_max_deg")))
        f.write("axis,angle_deg,kind,slew_time,error\n")
        for r in rows:
            f.write(f"{r.axis_name},{_fmt(r.angle_deg)},{r.kind.value},{_fmt(r.slew_time)},{r.error}\n")
    n_fail = sum(1 for r in rows if r.error)
    print(f"wrote {len(rows)} sweep rows to {out} ({n_fail} failures)")
    return EXIT_OK


def _cmd_profile(args) -> int:
    kind = ProfileKind(args.kind)
    profile = build_profile(args.alpha, args.tau1, args.tau3, args.wmax, kind)
    theta_hi = 1.2 * (profile.plateau_angle if np.isfinite(profile.plateau_angle) else profile.theta2)
    thetas = np.linspace(0.0, theta_hi, args.points)
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"# alpha_r = {_fmt(args.alpha)}\n")
        f.write(f"# omega_r_max = {_fmt(args.wmax)}\n")
        f.write(f"# kind = {profile.kind.value}\n")
        f.write("theta,omega_r,envelope\n")
        for th in thetas:
            env = min(np.sqrt(2.0 * args.alpha * th), args.wmax)
            f.write(f"{_fmt(th)},{_fmt(eval_omega_r(profile, th))},{_fmt(env)}\n")
    print(f"wrote {args.points} profile points to {args.out}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    worst = oracle_max_deviation(args.trials, args.seed if args.seed is not None else 0)
    print(f"max closed-form vs ODE deviation over {args.trials} trials: {worst:.3e} rad/s")
    return EXIT_OK if worst <= 1e-8 else EXIT_RUN_ERROR


def cli_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="slewsim",
        description="Constrained attitude-tracking simulation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write telemetry CSV")
    _add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="slew-time sweep over axes, angles and profile kinds")
    _add_common(p_sweep)

    p_prof = sub.add_parser("profile", help="dump a (theta_e, omega_R) profile curve as CSV")
    _add_common(p_prof)
    p_prof.add_argument("--alpha", type=float, required=True, help="regulating acceleration [rad/s^2]")
    p_prof.add_argument("--tau1", type=float, default=1.0)
    p_prof.add_argument("--tau3", type=float, default=1.0)
    p_prof.add_argument("--wmax", type=float, required=True, help="peak regulating rate [rad/s]")
    p_prof.add_argument("--kind", choices=["trapezoid", "modified"], default="trapezoid")
    p_prof.add_argument("--points", type=int, default=400)

    p_orc = sub.add_parser("oracle", help="closed-form vs ODE profile equivalence check")
    _add_common(p_orc)
    p_orc.add_argument("--trials", type=int, default=100)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK

    if args.command == "profile" and not args.out:
        print("error: usage: profile requires --out", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "profile":
            return _cmd_profile(args)
        return _cmd_oracle(args)
    except (ValueError, RuntimeError, OSError) as exc:
        # covers config, scenario-definition, infeasible-command and
        # controller-fault errors plus I/O failures
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUN_ERROR


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
